//! Factors D_nu through D_omega, D_eta12 and D_theta, writing the certificate.
//!
//! `cargo run --release --example verify_theorem -- cert.json`

use goeritz::verify::{theorem_verify, Bounds, ToggleRestriction};

fn main() {
    let out = std::env::args().nth(1).unwrap_or_else(|| "cert.json".into());
    match theorem_verify(&Bounds::default(), &ToggleRestriction::default()) {
        Ok(cert) => {
            println!("toggles {}", cert.toggles);
            println!("(p,q,r) = ({},{},{})", cert.pants.p, cert.pants.q, cert.pants.r);
            println!("D_nu = {}", cert.final_word);
            std::fs::write(&out, serde_json::to_string_pretty(&cert).expect("serializes")).expect("writable");
            println!("wrote {out}");
        }
        Err(failure) => print!("{failure}"),
    }
}
