//! Two programs that can never finish: a barrier only one PE reaches, and
//! two PEs taking the same pair of locks in opposite orders.

use std::time::Duration;

use frenz::runtime::RunOptions;
use frenz::Outcome;

fn main() {
    let options = RunOptions {
        watchdog: Duration::from_secs(2),
        ..RunOptions::default()
    };
    for (name, source) in [
        (
            "barrier_skip.lol",
            include_str!("../programs/barrier_skip.lol"),
        ),
        ("lock_cycle.lol", include_str!("../programs/lock_cycle.lol")),
    ] {
        let program = frenz::compile(source).expect(name);
        match frenz::spawn_with(&program, 2, &options).outcome {
            Outcome::Deadlock(report) => println!("{name}: {report}"),
            other => println!("{name}: unexpectedly ended with {other:?}"),
        }
    }
}
