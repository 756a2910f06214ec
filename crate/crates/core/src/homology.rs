//! First-homology shadows of mapping classes: integer 4×4 matrices in the
//! basis `([a1],[b1],[a2],[b2])`, the intersection pairing, and transvections.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aut::Endo;
use crate::words::{Generator, Word};

/// A homology class.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HClass(pub [i64; 4]);

impl HClass {
    pub fn of_word(w: &Word) -> HClass {
        HClass(w.exponent_sums())
    }

    pub fn basis(g: Generator) -> HClass {
        let mut v = [0; 4];
        v[g.index()] = 1;
        HClass(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0; 4]
    }

    /// Intersection pairing `⟨x, y⟩ = xᵀ J y` with `⟨a_i, b_i⟩ = 1`.
    pub fn pairing(&self, other: &HClass) -> i64 {
        let (x, y) = (self.0, other.0);
        x[0] * y[1] - x[1] * y[0] + x[2] * y[3] - x[3] * y[2]
    }
}

impl std::ops::Add for HClass {
    type Output = HClass;
    fn add(self, o: HClass) -> HClass {
        HClass(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

/// An integer 4×4 matrix acting on column vectors. Column `j` is the image
/// of basis vector `j`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SymplecticMatrix {
    entries: [[i64; 4]; 4],
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("{name}: homology shadow {matrix} does not preserve the intersection form")]
    NotSymplectic { name: String, matrix: String },
}

impl SymplecticMatrix {
    pub fn identity() -> SymplecticMatrix {
        Self::from_rows(std::array::from_fn(|i| std::array::from_fn(|j| (i == j) as i64)))
    }

    /// The form `J`: block diagonal with `[[0,1],[-1,0]]` per handle.
    pub fn form() -> SymplecticMatrix {
        Self::from_rows([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])
    }

    pub fn from_rows(entries: [[i64; 4]; 4]) -> SymplecticMatrix {
        SymplecticMatrix { entries }
    }

    pub fn from_columns(cols: [[i64; 4]; 4]) -> SymplecticMatrix {
        Self::from_rows(std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i])))
    }

    pub fn diagonal(d: [i64; 4]) -> SymplecticMatrix {
        Self::from_rows(std::array::from_fn(|i| {
            std::array::from_fn(|j| if i == j { d[i] } else { 0 })
        }))
    }

    pub fn rows(&self) -> &[[i64; 4]; 4] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> HClass {
        HClass(std::array::from_fn(|i| self.entries[i][j]))
    }

    pub fn transpose(&self) -> SymplecticMatrix {
        Self::from_rows(std::array::from_fn(|i| std::array::from_fn(|j| self.entries[j][i])))
    }

    pub fn apply(&self, x: &HClass) -> HClass {
        HClass(std::array::from_fn(|i| {
            (0..4).map(|k| self.entries[i][k] * x.0[k]).sum()
        }))
    }

    pub fn is_symplectic(&self) -> bool {
        self.transpose() * Self::form() * *self == Self::form()
    }

    /// Inverse of a symplectic matrix: `M⁻¹ = -J Mᵀ J`.
    pub fn symplectic_inverse(&self) -> SymplecticMatrix {
        let j = Self::form();
        let m = j * self.transpose() * j;
        Self::from_rows(m.entries.map(|r| r.map(|x| -x)))
    }

    /// Signed integer power of a symplectic matrix.
    pub fn pow(&self, k: i64) -> SymplecticMatrix {
        let base = if k < 0 { self.symplectic_inverse() } else { *self };
        (0..k.unsigned_abs()).fold(Self::identity(), |acc, _| base * acc)
    }

    /// Sixteen integers, row-major.
    pub fn to_row_major(&self) -> [i64; 16] {
        std::array::from_fn(|k| self.entries[k / 4][k % 4])
    }

    pub fn from_row_major(v: [i64; 16]) -> SymplecticMatrix {
        Self::from_rows(std::array::from_fn(|i| std::array::from_fn(|j| v[4 * i + j])))
    }
}

impl Mul for SymplecticMatrix {
    type Output = SymplecticMatrix;
    fn mul(self, o: SymplecticMatrix) -> SymplecticMatrix {
        SymplecticMatrix::from_rows(std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..4).map(|k| self.entries[i][k] * o.entries[k][j]).sum())
        }))
    }
}

impl fmt::Debug for SymplecticMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.entries)
    }
}

impl fmt::Display for SymplecticMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.entries)
    }
}

impl Serialize for SymplecticMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_row_major().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymplecticMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<SymplecticMatrix, D::Error> {
        Ok(Self::from_row_major(<[i64; 16]>::deserialize(d)?))
    }
}

/// Exponent-sum matrix without the symplectic check.
pub fn exponent_matrix(f: &Endo) -> SymplecticMatrix {
    SymplecticMatrix::from_columns(f.images().clone().map(|w| w.exponent_sums()))
}

/// Homology action of `f`; fails if the result does not preserve `J`.
pub fn abelianize(f: &Endo) -> Result<SymplecticMatrix, HomologyError> {
    let m = exponent_matrix(f);
    if m.is_symplectic() {
        Ok(m)
    } else {
        Err(HomologyError::NotSymplectic {
            name: format!("{f:?}"),
            matrix: m.to_string(),
        })
    }
}

/// `x ↦ x + sign·⟨x, c⟩·c`.
pub fn transvection(c: &HClass, sign: i64) -> SymplecticMatrix {
    let cols = Generator::ALL.map(|g| {
        let e = HClass::basis(g);
        let k = sign * e.pairing(c);
        std::array::from_fn(|i| e.0[i] + k * c.0[i])
    });
    SymplecticMatrix::from_columns(cols)
}

/// Ordered product of signed powers, rightmost factor acting first.
pub fn matrix_word(factors: &[(SymplecticMatrix, i64)]) -> SymplecticMatrix {
    factors
        .iter()
        .fold(SymplecticMatrix::identity(), |acc, (m, k)| acc * m.pow(*k))
}
