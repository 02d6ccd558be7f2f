//! Every PE bumps PE 0's shared counter 1000 times under its implicit lock.

use std::time::Instant;

fn main() {
    let program =
        frenz::compile(include_str!("../programs/locked_counter.lol")).expect("locked_counter.lol");
    for np in [1, 2, 4, 8] {
        let start = Instant::now();
        let result = frenz::spawn(&program, np, 0);
        assert!(result.is_success(), "{:?}", result.outcome);
        println!(
            "np={np}: x = {} (expected {}) in {:.1?}",
            result.outputs[0][0],
            np * 1000,
            start.elapsed()
        );
    }
}
