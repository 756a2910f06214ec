//! Runs the twist relation suite for both handedness conventions.

use goeritz::twists::{accepted_handedness, validate_library, Handedness, TwistLibrary};

fn main() {
    for hand in Handedness::ALL {
        let report = validate_library(&TwistLibrary::new(hand));
        let failing: Vec<&str> = report.failures().map(|c| c.relation.as_str()).collect();
        println!("{hand:?}: {} relations, failing {failing:?}", report.checks.len());
    }
    println!("accepted: {:?}", accepted_handedness());
}
