//! SPMD execution: one thread per PE over a shared symmetric heap.

mod deadlock;
mod handle;
mod heap;
mod log;
pub mod rng;

use std::time::Duration;

pub use deadlock::{BlockedOn, DeadlockReport, PeState, Site};
pub use handle::PeHandle;
pub use heap::{Failure, HeapError, SymbolInfo, SymmetricHeap};
pub use log::WriteLog;

use crate::ast::Program;
use crate::interp::{run_pe, PeExit};
use crate::lexer::Span;

/// Seeded random sleeps before statements, used to shake out
/// interleavings in tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DelayInjection {
    pub seed: u64,
    pub max_micros: u64,
    /// Sleep before roughly one statement in `one_in`; 1 means every one.
    pub one_in: u32,
}

/// Where `GIMMEH` reads from.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum Input {
    #[default]
    Empty,
    Text(String),
    Stdin,
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub seed: u64,
    pub watchdog: Duration,
    pub delays: Option<DelayInjection>,
    pub input: Input,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            seed: 0,
            watchdog: Duration::from_secs(5),
            delays: None,
            input: Input::Empty,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeStatus {
    Finished,
    Failed,
    /// Stopped because another PE failed or the run deadlocked.
    Halted,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Success,
    RuntimeError {
        pe: usize,
        span: Span,
        message: String,
    },
    Deadlock(DeadlockReport),
}

#[derive(Debug, Clone)]
pub struct RunResult {
    /// Lines printed by each PE, in PE order.
    pub outputs: Vec<Vec<String>>,
    /// Every printed line tagged with its PE, in the order printed.
    pub transcript: Vec<(usize, String)>,
    pub statuses: Vec<PeStatus>,
    pub outcome: Outcome,
}

impl RunResult {
    pub fn is_success(&self) -> bool {
        self.outcome == Outcome::Success
    }

    /// Output grouped per PE with `=== PE k ===` headers.
    pub fn per_pe_text(&self) -> String {
        let mut s = String::new();
        for (pe, lines) in self.outputs.iter().enumerate() {
            s.push_str(&format!("=== PE {pe} ===\n"));
            for l in lines {
                s.push_str(l);
                s.push('\n');
            }
        }
        s
    }

    pub fn interleaved_text(&self) -> String {
        self.transcript
            .iter()
            .map(|(_, l)| format!("{l}\n"))
            .collect()
    }
}

pub fn spawn(program: &Program, n_pes: usize, seed: u64) -> RunResult {
    spawn_with(
        program,
        n_pes,
        &RunOptions {
            seed,
            ..RunOptions::default()
        },
    )
}

pub fn spawn_with(program: &Program, n_pes: usize, options: &RunOptions) -> RunResult {
    let heap = SymmetricHeap::new(n_pes, options.watchdog);
    let exits: Vec<PeExit> = std::thread::scope(|s| {
        let workers: Vec<_> = (0..n_pes)
            .map(|pe| {
                let heap = &heap;
                let input = if n_pes == 1 {
                    options.input.clone()
                } else {
                    Input::Empty
                };
                std::thread::Builder::new()
                    .name(format!("pe-{pe}"))
                    .stack_size(16 << 20)
                    .spawn_scoped(s, move || {
                        let handle = PeHandle::new(heap, pe, options.seed, options.delays);
                        run_pe(program, handle, input)
                    })
                    .expect("spawn PE thread")
            })
            .collect();
        workers
            .into_iter()
            .map(|w| w.join().unwrap_or_else(|p| std::panic::resume_unwind(p)))
            .collect()
    });
    let outcome = match heap.failure() {
        None => Outcome::Success,
        Some(Failure::Runtime { pe, span, message }) => Outcome::RuntimeError { pe, span, message },
        Some(Failure::Deadlock(r)) => Outcome::Deadlock(r),
    };
    let mut outputs = Vec::with_capacity(n_pes);
    let mut statuses = Vec::with_capacity(n_pes);
    for e in exits {
        outputs.push(e.lines);
        statuses.push(e.status);
    }
    RunResult {
        outputs,
        transcript: heap.take_transcript(),
        statuses,
        outcome,
    }
}
