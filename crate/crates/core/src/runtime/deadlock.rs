//! PE status tracking and the deadlock report.

use std::collections::BTreeMap;
use std::fmt;

use crate::lexer::Span;

/// Source location and statement text of a blocking operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Site {
    pub span: Span,
    pub what: String,
}

impl Site {
    pub fn new(span: Span, what: impl Into<String>) -> Self {
        Site {
            span,
            what: what.into(),
        }
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} `{}`", self.span, self.what)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockedOn {
    Barrier { generation: u64 },
    Lock { name: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PeState {
    Running,
    Blocked { site: Site, on: BlockedOn },
    Finished,
    Failed,
}

impl PeState {
    pub fn label(&self) -> &'static str {
        match self {
            PeState::Running => "running",
            PeState::Blocked {
                on: BlockedOn::Barrier { .. },
                ..
            } => "blocked-on-barrier",
            PeState::Blocked {
                on: BlockedOn::Lock { .. },
                ..
            } => "blocked-on-lock",
            PeState::Finished => "finished",
            PeState::Failed => "failed",
        }
    }
}

/// Snapshot of every PE at the moment a deadlock was proven or the
/// quiescence watchdog fired.
#[derive(Debug, Clone, PartialEq)]
pub struct DeadlockReport {
    pub reason: String,
    pub states: Vec<PeState>,
    /// Locks held by each PE, sorted by name.
    pub holding: Vec<Vec<String>>,
    pub lock_holders: BTreeMap<String, usize>,
    /// PEs already waiting in the current barrier generation.
    pub arrived: usize,
}

impl fmt::Display for DeadlockReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "deadlock: {}", self.reason)?;
        for (pe, state) in self.states.iter().enumerate() {
            write!(f, "\n  PE {pe}: {}", state.label())?;
            if let PeState::Blocked { site, on } = state {
                write!(f, " at {site}")?;
                match on {
                    BlockedOn::Barrier { generation } => write!(
                        f,
                        " (generation {generation}, {}/{} arrived)",
                        self.arrived,
                        self.states.len()
                    )?,
                    BlockedOn::Lock { name } => match self.lock_holders.get(name) {
                        Some(h) => write!(f, " (lock `{name}` held by PE {h})")?,
                        None => write!(f, " (lock `{name}`)")?,
                    },
                }
            }
            if let Some(held) = self.holding.get(pe).filter(|h| !h.is_empty()) {
                write!(f, "; holds {}", held.join(", "))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_names_every_pe() {
        let r = DeadlockReport {
            reason: "no PE can make progress".into(),
            states: vec![
                PeState::Blocked {
                    site: Site::new(Span::new(4, 3), "IM SRSLY MESIN WIF y"),
                    on: BlockedOn::Lock { name: "y".into() },
                },
                PeState::Finished,
            ],
            holding: vec![vec!["x".into()], vec!["y".into()]],
            lock_holders: [("x".to_string(), 0), ("y".to_string(), 1)].into(),
            arrived: 0,
        };
        let text = r.to_string();
        assert!(text.contains(
            "PE 0: blocked-on-lock at 4:3 `IM SRSLY MESIN WIF y` (lock `y` held by PE 1); holds x"
        ));
        assert!(text.contains("PE 1: finished; holds y"));
    }
}
