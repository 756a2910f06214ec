//! Free-group models of mapping classes of the genus-two surface with one
//! boundary circle, aimed at checking identities among genus-two Goeritz
//! generators exactly.
//!
//! Layers, bottom up: [`words`] (reduced and cyclic words, conjugacy),
//! [`aut`] (endomorphisms with stored inverses), [`homology`] (integer
//! shadows), [`twists`] (Dehn twists and their relation suite), [`powell`]
//! (generator models and constrained discovery), [`verify`] (the curve-image
//! check, the factorization search and certificates) and [`cli`].

pub mod aut;
pub mod cli;
pub mod expr;
pub mod homology;
pub mod powell;
pub mod twists;
pub mod verify;
pub mod words;
