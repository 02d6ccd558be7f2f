//! Two PEs exchange a value with a put between two barriers. Runs the
//! program many times with random per-statement delays and checks that the
//! sum never changes.

use frenz::runtime::{DelayInjection, RunOptions};

fn main() {
    let program =
        frenz::compile(include_str!("../programs/barrier_sum.lol")).expect("barrier_sum.lol");
    let runs = 200;
    for run in 0..runs {
        let options = RunOptions {
            delays: Some(DelayInjection {
                seed: run,
                max_micros: 50,
                one_in: 1,
            }),
            ..RunOptions::default()
        };
        let result = frenz::spawn_with(&program, 2, &options);
        assert_eq!(result.outputs, vec![vec!["30"], vec!["30"]], "run {run}");
    }
    println!("c = 30 on both PEs in all {runs} delayed runs");
}
