//! Exhaustive search for the handle slide at a given image-length bound.
//!
//! `cargo run --release --example discover_theta -- 8`

use goeritz::powell::{discover, theta_profile, ThetaDirection};

fn main() {
    let len = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(8);
    match discover(&theta_profile(ThetaDirection::Forward, len)) {
        Ok(found) => {
            println!(
                "{} forward candidates, {} with an inverse",
                found.forward_candidates,
                found.models.len()
            );
            for m in &found.models {
                print!("{}\n{}", m.name, m.forward);
            }
        }
        Err(e) => println!("{e}"),
    }
}
