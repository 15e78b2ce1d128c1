//! Run the seeded randomized law suite: monad laws, lens category laws,
//! monoidal coherence, and the localization squares, all in exact
//! arithmetic. The same machinery backs `open-games laws`.
//!
//! Run with `cargo run --example law_suite` (release mode is faster).

use open_games::laws;

fn main() {
    let cases = 50;
    let seed = 2024;
    let mut all_ok = true;
    for (family, reports) in laws::run_all(cases, seed).unwrap() {
        println!("{family}:");
        for r in reports {
            let status = if r.failures == 0 { "ok" } else { "FAILED" };
            println!("  {:<28} {:>3} cases  {status}", r.law, r.cases);
            all_ok &= r.failures == 0;
        }
    }
    println!("\nall laws hold: {all_ok}");
    assert!(all_ok);
}
