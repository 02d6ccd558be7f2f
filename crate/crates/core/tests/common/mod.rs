//! Reference implementations shared by the integration and acceptance
//! tests. Nothing here calls into the crate's runtime.

#![allow(dead_code)]

use std::path::PathBuf;

pub fn programs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("programs")
}

pub fn program_source(name: &str) -> String {
    let path = programs_dir().join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Standalone 64-bit LCG, computed with u128 arithmetic and an explicit
/// modulus.
pub struct Lcg {
    state: u128,
}

const MOD: u128 = 1 << 64;

impl Lcg {
    pub fn new(seed: u64, pe: u64) -> Self {
        Lcg {
            state: (seed as u128 + (pe as u128 + 1) * 0x9E37_79B9_7F4A_7C15) % MOD,
        }
    }

    fn step(&mut self) -> u128 {
        self.state = (self.state * 6_364_136_223_846_793_005 + 1_442_695_040_888_963_407) % MOD;
        self.state
    }

    pub fn int(&mut self) -> i64 {
        (self.step() / (1u128 << 33)) as i64
    }

    pub fn float(&mut self) -> f64 {
        let top53 = (self.step() / (1u128 << 11)) as u64;
        top53 as f64 / 9_007_199_254_740_992.0
    }
}

pub const PARTICLES: usize = 32;
pub const STEPS: usize = 10;
pub const LITTLE_TIME: f64 = 0.001;

#[derive(Clone)]
struct Pe {
    px: Vec<f64>,
    py: Vec<f64>,
    vx: Vec<f64>,
    vy: Vec<f64>,
}

fn accumulate(xi: f64, yi: f64, xj: f64, yj: f64, ax: &mut f64, ay: &mut f64) {
    // same operation order as the listing, squared displacement included
    let mut dx = xi - xj;
    let mut dy = yi - yj;
    dx *= dx;
    dy *= dy;
    let inv_d = 1.0 / (dx + dy).sqrt();
    let f = inv_d * (inv_d * inv_d);
    *ax += dx * f;
    *ay += dy * f;
}

/// Final `(x, y)` per particle per PE for the n-body listing.
///
/// `synced_init` selects whether the first step's remote reads see the
/// other PEs' initial positions (`nbody_synced.lol`) or the zeroed
/// segments that are still committed at that point (`nbody.lol`).
pub fn nbody(np: usize, seed: u64, synced_init: bool) -> Vec<Vec<(f64, f64)>> {
    let mut pes: Vec<Pe> = (0..np)
        .map(|pe| {
            let mut rng = Lcg::new(seed, pe as u64);
            let me = pe as f64;
            let mut p = Pe {
                px: vec![0.0; PARTICLES],
                py: vec![0.0; PARTICLES],
                vx: vec![0.0; PARTICLES],
                vy: vec![0.0; PARTICLES],
            };
            for i in 0..PARTICLES {
                p.px[i] = me + rng.float();
                p.py[i] = me + rng.float();
                p.vx[i] = (me + rng.float()) / 1000.0;
                p.vy[i] = (me + rng.float()) / 1000.0;
            }
            p
        })
        .collect();
    let mut visible: Vec<(Vec<f64>, Vec<f64>)> = if synced_init {
        pes.iter().map(|p| (p.px.clone(), p.py.clone())).collect()
    } else {
        vec![(vec![0.0; PARTICLES], vec![0.0; PARTICLES]); np]
    };
    let lt = LITTLE_TIME;
    for _ in 0..STEPS {
        let mut next = pes.clone();
        for (me, p) in pes.iter().enumerate() {
            for i in 0..PARTICLES {
                let (mut ax, mut ay) = (0.0, 0.0);
                for j in 0..PARTICLES {
                    if i != j {
                        accumulate(p.px[i], p.py[i], p.px[j], p.py[j], &mut ax, &mut ay);
                    }
                }
                for (k, (rx, ry)) in visible.iter().enumerate() {
                    if k == me {
                        continue;
                    }
                    for j in 0..PARTICLES {
                        accumulate(p.px[i], p.py[i], rx[j], ry[j], &mut ax, &mut ay);
                    }
                }
                let (x, y, vx, vy) = (p.px[i], p.py[i], p.vx[i], p.vy[i]);
                next[me].px[i] = x + (vx * lt + 0.5 * (ax * (lt * lt)));
                next[me].py[i] = y + (vy * lt + 0.5 * (ay * (lt * lt)));
                next[me].vx[i] = vx + ax * lt;
                next[me].vy[i] = vy + ay * lt;
            }
        }
        pes = next;
        visible = pes.iter().map(|p| (p.px.clone(), p.py.clone())).collect();
    }
    pes.iter()
        .map(|p| p.px.iter().copied().zip(p.py.iter().copied()).collect())
        .collect()
}

/// Pull the coordinate pairs printed after the `O HAI ITZ` header.
pub fn parse_coordinates(lines: &[String]) -> Vec<(f64, f64)> {
    let start = lines
        .iter()
        .position(|l| l.starts_with("O HAI ITZ "))
        .expect("coordinate header")
        + 1;
    lines[start..]
        .iter()
        .map(|l| {
            let mut it = l.split(' ').map(|t| t.parse::<f64>().expect("coordinate"));
            (it.next().unwrap(), it.next().unwrap())
        })
        .collect()
}

pub fn relative_error(got: f64, want: f64) -> f64 {
    if got == want {
        0.0
    } else {
        (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
    }
}

/// Hand-traced expectation for the ring copy: every element equals the
/// right-hand neighbour's id.
pub fn ring_expected(pe: usize, np: usize) -> Vec<String> {
    vec![((pe + 1) % np).to_string(); 32]
}
