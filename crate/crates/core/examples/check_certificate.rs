//! Re-checks a certificate file, then shows that a one-letter edit is caught.

use goeritz::verify::{certificate_check, Certificate};

fn main() {
    let path = std::env::args().nth(1).unwrap_or_else(|| "cert.json".into());
    let text = std::fs::read_to_string(&path).expect("certificate file is readable");
    let mut cert: Certificate = serde_json::from_str(&text).expect("certificate parses");
    println!("{}", certificate_check(&cert));

    cert.pants.r += 1;
    println!("after editing pants.r: {}", certificate_check(&cert));
}
