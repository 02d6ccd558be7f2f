//! Runs the n-body program and prints where PE 0's first few particles
//! ended up.
//!
//! ```text
//! cargo run --release --example nbody -- 4 7
//! ```

use std::time::Instant;

fn main() {
    let mut args = std::env::args().skip(1);
    let np: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(2);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);
    let program = frenz::compile(include_str!("../programs/nbody_synced.lol")).expect("nbody");
    let start = Instant::now();
    let result = frenz::spawn(&program, np, seed);
    assert!(result.is_success(), "{:?}", result.outcome);
    println!(
        "{np} PEs x 32 particles, 10 steps, seed {seed}: {:.2?}",
        start.elapsed()
    );
    for pe in 0..np {
        let lines = &result.outputs[pe];
        println!("{}", lines[0]);
        for l in lines.iter().skip(2).take(3) {
            println!("  {l}");
        }
    }
}
