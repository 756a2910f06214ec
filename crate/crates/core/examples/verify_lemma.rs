//! Compares C and D_nu' on the four handle curves for the first passing configuration.

use goeritz::verify::{discover_candidates, lemma_search, Bounds, ToggleRestriction};

fn main() {
    let restriction = ToggleRestriction::default();
    let candidates = discover_candidates(&Bounds::default(), &restriction);
    match lemma_search(&restriction, &candidates) {
        Ok(outcome) => {
            println!("toggles {}", outcome.toggles);
            for c in &outcome.report.curves {
                println!(
                    "{:8} {} | {}",
                    c.curve.name(),
                    c.c_class.to_word(),
                    c.nu_prime_class.to_word()
                );
            }
            let broken = outcome.negative_control.curves.iter().filter(|c| !c.equal()).count();
            println!("with D_nu = id, {broken} curve(s) differ");
        }
        Err(trace) => println!("nothing passed; {} configurations tried", trace.len()),
    }
}
