//! Evaluates a word in the formula generators and applies it to a group word.

use goeritz::expr::{ClassWord, CompositionOrder};
use goeritz::homology::exponent_matrix;
use goeritz::powell::{half_twist, swap, SwapVariant};
use goeritz::twists::{Handedness, TwistLibrary};
use goeritz::words::Word;

fn main() {
    let lib = TwistLibrary::new(Handedness::Left);
    let omega = half_twist(&lib);
    let eta = swap(SwapVariant::Standard, &lib);
    let expr: ClassWord = "D_eta12 D_omega D_eta12^-1".parse().expect("valid expression");
    let f = expr
        .evaluate(CompositionOrder::RightmostFirst, |name| match name {
            "D_omega" => Some(omega.model.clone()),
            "D_eta12" => Some(eta.model.clone()),
            other => lib.by_name(other).map(|t| t.model.clone()),
        })
        .expect("all names resolve");
    for w in ["a1", "b1", "a2", "b2", "a1 b2^-1"] {
        let u: Word = w.parse().expect("valid word");
        println!("{expr} : {u} -> {}", f.apply(&u));
    }
    println!("shadow:\n{}", exponent_matrix(&f.forward));
}
