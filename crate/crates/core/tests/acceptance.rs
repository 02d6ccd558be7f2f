//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any fail.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use frenz::runtime::{spawn_with, DelayInjection, Outcome, RunOptions};
use frenz::{compile, spawn, Program};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn load(name: &str) -> Program {
    compile(&program_source(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn corpus_compiles() -> Verdict {
    let listings = [
        ("A", "fragment_ring.lol"),
        ("B", "fragment_lock.lol"),
        ("C", "fragment_barrier.lol"),
        ("D", "nbody.lol"),
    ];
    for (tag, file) in listings {
        compile(&program_source(file)).map_err(|e| format!("listing {tag} ({file}): {e}"))?;
    }
    Ok(format!("{} listings parse cleanly", listings.len()))
}

fn ring_copy() -> Verdict {
    let r = spawn(&load("ring_copy.lol"), 4, 0);
    if !r.is_success() {
        return Err(format!("{:?}", r.outcome));
    }
    for pe in 0..4 {
        if r.outputs[pe] != ring_expected(pe, 4) {
            return Err(format!("PE {pe} printed {:?}", r.outputs[pe]));
        }
    }
    Ok("np=4, every PE holds its neighbour's id".into())
}

fn barrier_sum() -> Verdict {
    let program = load("barrier_sum.lol");
    let runs = 1000;
    for run in 0..runs {
        let options = RunOptions {
            seed: run,
            delays: Some(DelayInjection {
                seed: run,
                max_micros: 40,
                one_in: 1,
            }),
            ..RunOptions::default()
        };
        let r = spawn_with(&program, 2, &options);
        if !r.is_success() {
            return Err(format!("run {run}: {:?}", r.outcome));
        }
        for pe in 0..2 {
            if r.outputs[pe] != ["30"] {
                return Err(format!("run {run}: PE {pe} printed {:?}", r.outputs[pe]));
            }
        }
    }
    Ok(format!("c = 30 on both PEs in {runs}/{runs} delayed runs"))
}

fn lock_counter() -> Verdict {
    let program = load("locked_counter.lol");
    for np in [2, 4, 8] {
        let want = (np * 1000).to_string();
        for run in 0..100 {
            let options = RunOptions {
                seed: run,
                delays: (run % 4 == 1).then_some(DelayInjection {
                    seed: run,
                    max_micros: 20,
                    one_in: 64,
                }),
                ..RunOptions::default()
            };
            let r = spawn_with(&program, np, &options);
            if !r.is_success() {
                return Err(format!("np={np} run {run}: {:?}", r.outcome));
            }
            if r.outputs[0] != [want.as_str()] {
                return Err(format!(
                    "np={np} run {run}: PE 0 printed {:?}",
                    r.outputs[0]
                ));
            }
        }
    }
    Ok("np in {2,4,8}: exactly np*1000 in 100/100 runs".into())
}

fn deadlocks() -> Verdict {
    let watchdog = Duration::from_secs(2);
    let cases: [(&str, usize, &[&str]); 3] = [
        (
            "barrier_skip.lol",
            2,
            &["PE 0: blocked-on-barrier at 5:3 `HUGZ`", "PE 1: finished"],
        ),
        (
            "barrier_skip.lol",
            4,
            &[
                "PE 0: blocked-on-barrier at 5:3",
                "PE 1: finished",
                "PE 2: finished",
                "PE 3: finished",
            ],
        ),
        (
            "lock_cycle.lol",
            2,
            &[
                "PE 0: blocked-on-lock at 10:3 `IM SRSLY MESIN WIF y`",
                "PE 1: blocked-on-lock at 14:3 `IM SRSLY MESIN WIF x`",
            ],
        ),
    ];
    let mut slowest = Duration::ZERO;
    for (file, np, expect) in cases {
        let path = programs_dir().join(file);
        let args = [
            "lolrun".to_string(),
            path.display().to_string(),
            "--np".into(),
            np.to_string(),
            "--max-barrier-wait".into(),
            format!("{}s", watchdog.as_secs()),
        ];
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let start = Instant::now();
        let code = frenz::cli::main_with(args, &mut out, &mut err);
        let took = start.elapsed();
        slowest = slowest.max(took);
        let err = String::from_utf8(err).unwrap();
        if code != 3 {
            return Err(format!("{file} np={np}: exit {code}\n{err}"));
        }
        if took > watchdog {
            return Err(format!("{file} np={np}: took {took:?}, bound {watchdog:?}"));
        }
        for line in expect {
            if !err.contains(line) {
                return Err(format!("{file} np={np}: report lacks {line:?}\n{err}"));
            }
        }
    }
    Ok(format!(
        "exit 3 with full reports, slowest {slowest:.2?} (bound {watchdog:?})"
    ))
}

fn nbody_oracle() -> Verdict {
    const TOLERANCE: f64 = 1e-9;
    let np = 2;
    let mut notes = Vec::new();
    for (file, synced) in [("nbody.lol", false), ("nbody_synced.lol", true)] {
        let r = spawn(&load(file), np, 0);
        if !r.is_success() {
            return Err(format!("{file}: {:?}", r.outcome));
        }
        let want = nbody(np, 0, synced);
        let (mut worst, mut exact, mut total) = (0.0f64, 0, 0);
        for (pe, want) in want.iter().enumerate() {
            let got = parse_coordinates(&r.outputs[pe]);
            if got.len() != PARTICLES {
                return Err(format!("{file}: PE {pe} printed {} particles", got.len()));
            }
            for (g, w) in got.iter().zip(want) {
                for (a, b) in [(g.0, w.0), (g.1, w.1)] {
                    if !a.is_finite() {
                        return Err(format!("{file}: PE {pe} printed {a}"));
                    }
                    worst = worst.max(relative_error(a, b));
                    exact += usize::from(a.to_bits() == b.to_bits());
                    total += 1;
                }
            }
        }
        if worst > TOLERANCE {
            return Err(format!(
                "{file}: max relative error {worst:e} > {TOLERANCE:e}"
            ));
        }
        notes.push(format!(
            "{file} max rel err {worst:e}, bit-exact {exact}/{total}"
        ));
    }
    Ok(notes.join("; "))
}

// Sum of the first 1000 integer draws and a rolling hash of the first 1000
// float bit patterns, frozen from a separate Python evaluation.
const CHECKSUMS: [(u64, usize, i64, u64); 6] = [
    (0, 0, 1065374920148, 9877292823108824936),
    (0, 1, 1027439831619, 11928575841782542872),
    (0, 2, 1068961638110, 10922045477605426055),
    (1, 0, 1050722991585, 1987341194153754226),
    (1, 1, 1075064928877, 17580777056857277741),
    (1, 2, 1037129840351, 1823623970768519108),
];

fn draws(src: &str, seed: u64) -> Vec<Vec<String>> {
    let r = spawn(&compile(src).unwrap(), 3, seed);
    assert!(r.is_success(), "{:?}", r.outcome);
    r.outputs
}

fn rng_streams() -> Verdict {
    let ints = "HAI 1.2\nIM IN YR l UPPIN YR i TIL BOTH SAEM i AN 1000\n  VISIBLE WHATEVR\nIM OUTTA YR l\nKTHXBYE\n";
    let floats = "HAI 1.2\nIM IN YR l UPPIN YR i TIL BOTH SAEM i AN 1000\n  VISIBLE WHATEVAR\nIM OUTTA YR l\nKTHXBYE\n";
    for seed in [0, 1] {
        let got_ints = draws(ints, seed);
        let got_floats = draws(floats, seed);
        for pe in 0..3 {
            let mut oracle = Lcg::new(seed, pe as u64);
            let ints: Vec<i64> = got_ints[pe].iter().map(|l| l.parse().unwrap()).collect();
            for (n, &v) in ints.iter().enumerate() {
                if v != oracle.int() {
                    return Err(format!("seed {seed} pe {pe}: WHATEVR draw {n} = {v}"));
                }
            }
            let mut oracle = Lcg::new(seed, pe as u64);
            let floats: Vec<f64> = got_floats[pe].iter().map(|l| l.parse().unwrap()).collect();
            for (n, &v) in floats.iter().enumerate() {
                if v.to_bits() != oracle.float().to_bits() {
                    return Err(format!("seed {seed} pe {pe}: WHATEVAR draw {n} = {v}"));
                }
            }
            let (_, _, sum, hash) = CHECKSUMS
                .iter()
                .find(|c| c.0 == seed && c.1 == pe)
                .copied()
                .unwrap();
            let h = floats
                .iter()
                .fold(0u64, |h, x| h.wrapping_mul(31).wrapping_add(x.to_bits()));
            if ints.len() != 1000 || ints.iter().sum::<i64>() != sum || h != hash {
                return Err(format!("seed {seed} pe {pe}: checksum mismatch"));
            }
        }
    }
    Ok("1000 draws each for (seed, pe) in {0,1}x{0,1,2}".into())
}

fn goldens() -> Verdict {
    let dir = programs_dir().join("seq");
    let mut names: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "lol"))
        .collect();
    names.sort();
    for path in &names {
        let program = compile(&std::fs::read_to_string(path).unwrap())
            .map_err(|e| format!("{}: {e}", path.display()))?;
        let want = std::fs::read_to_string(path.with_extension("out")).unwrap();
        let got = spawn(&program, 1, 0).per_pe_text();
        if got != want {
            return Err(format!("{} differs from its golden", path.display()));
        }
    }
    if names.len() < 10 {
        return Err(format!("only {} golden programs", names.len()));
    }
    Ok(format!(
        "{}/{} goldens byte-identical",
        names.len(),
        names.len()
    ))
}

fn determinism() -> Verdict {
    let mut files = Vec::new();
    for dir in [programs_dir(), programs_dir().join("seq")] {
        for e in std::fs::read_dir(dir).unwrap() {
            let p = e.unwrap().path();
            if p.extension().is_some_and(|x| x == "lol") {
                files.push(p);
            }
        }
    }
    files.sort();
    let mut runs = 0;
    for path in &files {
        let program = compile(&std::fs::read_to_string(path).unwrap()).unwrap();
        for np in [1, 2, 4] {
            let options = RunOptions {
                seed: 5,
                watchdog: Duration::from_secs(2),
                ..RunOptions::default()
            };
            let a = spawn_with(&program, np, &options);
            let b = spawn_with(&program, np, &options);
            let same_outcome = match (&a.outcome, &b.outcome) {
                (Outcome::Deadlock(x), Outcome::Deadlock(y)) => x.to_string() == y.to_string(),
                (x, y) => x == y,
            };
            if a.per_pe_text() != b.per_pe_text() || !same_outcome {
                return Err(format!("{} np={np} differs between runs", path.display()));
            }
            runs += 1;
        }
    }
    Ok(format!(
        "{} programs, {runs} (program, np) pairs run twice",
        files.len()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("corpus compilation", corpus_compiles),
        ("ring copy", ring_copy),
        ("barrier sum under delays", barrier_sum),
        ("lock linearizability", lock_counter),
        ("deadlock detection", deadlocks),
        ("n-body oracle", nbody_oracle),
        ("rng reproducibility", rng_streams),
        ("sequential goldens", goldens),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let took = start.elapsed();
        match verdict {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail} [{took:.2?}]", n + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why} [{took:.2?}]", n + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
