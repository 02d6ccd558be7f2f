//! The symmetric heap shared by all PEs: per-PE segments, the symbol
//! registry, global locks, the barrier and deadlock detection.
//!
//! Lock order is `coord` before `registry` before any segment.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::{Condvar, Mutex, MutexGuard, RwLock};
use std::time::{Duration, Instant};

use rustc_hash::FxHashMap as HashMap;
use thiserror::Error;

use super::deadlock::{BlockedOn, DeadlockReport, PeState, Site};
use super::log::WriteLog;
use crate::lexer::Span;
use crate::value::{SlotType, StoreError, Value, VariableSlot};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HeapError {
    #[error("remote reference to non-shared variable `{0}`")]
    NotShared(String),
    #[error("`{name}` is not yet declared on PE {pe}")]
    NotDeclaredOn { name: String, pe: usize },
    #[error("`{0}` is already declared on this PE")]
    AlreadyDeclared(String),
    #[error("symmetry error: `{name}` declared as {ours} here but as {theirs} on another PE")]
    SymmetryMismatch {
        name: String,
        ours: String,
        theirs: String,
    },
    #[error("symmetry error: `{name}` is not declared on PE(s) {missing:?}")]
    SymmetryMissing { name: String, missing: Vec<usize> },
    #[error("`{name}`: {source}")]
    Store { name: String, source: StoreError },
    #[error("`{0}` has no lock (declare it with AN IM SHARIN IT)")]
    NoLock(String),
    #[error("lock on `{0}` is already held by this PE")]
    LockReentrant(String),
    #[error("lock on `{0}` is not held by this PE")]
    LockNotHeld(String),
    #[error("target PE {pe} out of range [0, {n_pes})")]
    BadPe { pe: i64, n_pes: usize },
    #[error("{0}")]
    Deadlock(DeadlockReport),
    #[error("run aborted")]
    Aborted,
}

impl HeapError {
    pub(crate) fn store(name: &str, source: StoreError) -> Self {
        HeapError::Store {
            name: name.into(),
            source,
        }
    }
}

/// Registry entry for a symmetric symbol.
#[derive(Debug, Clone)]
pub struct SymbolInfo {
    pub ty: SlotType,
    pub with_lock: bool,
    pub declared_on: Vec<bool>,
}

/// How a run ended abnormally.
#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    Runtime {
        pe: usize,
        span: Span,
        message: String,
    },
    Deadlock(DeadlockReport),
}

struct Coord {
    states: Vec<PeState>,
    arrived: usize,
    generation: u64,
    pending: Vec<Option<WriteLog>>,
    locks: HashMap<String, Option<usize>>,
    failure: Option<Failure>,
}

pub struct SymmetricHeap {
    n_pes: usize,
    segments: Vec<RwLock<HashMap<String, VariableSlot>>>,
    registry: Mutex<HashMap<String, SymbolInfo>>,
    coord: Mutex<Coord>,
    wake: Condvar,
    aborted: AtomicBool,
    progress: AtomicU64,
    watchdog: Duration,
    transcript: Mutex<Vec<(usize, String)>>,
}

fn lock<T>(m: &Mutex<T>) -> MutexGuard<'_, T> {
    // a panicking PE thread must not hide the run's real outcome
    m.lock().unwrap_or_else(|e| e.into_inner())
}

impl SymmetricHeap {
    pub fn new(n_pes: usize, watchdog: Duration) -> Self {
        assert!(n_pes >= 1, "need at least one PE");
        SymmetricHeap {
            n_pes,
            segments: (0..n_pes)
                .map(|_| RwLock::new(HashMap::default()))
                .collect(),
            registry: Mutex::new(HashMap::default()),
            coord: Mutex::new(Coord {
                states: vec![PeState::Running; n_pes],
                arrived: 0,
                generation: 0,
                pending: vec![None; n_pes],
                locks: HashMap::default(),
                failure: None,
            }),
            wake: Condvar::new(),
            aborted: AtomicBool::new(false),
            progress: AtomicU64::new(0),
            watchdog,
            transcript: Mutex::new(Vec::new()),
        }
    }

    pub fn n_pes(&self) -> usize {
        self.n_pes
    }

    pub fn is_aborted(&self) -> bool {
        self.aborted.load(Ordering::Relaxed)
    }

    pub(crate) fn note_progress(&self) {
        self.progress.fetch_add(1, Ordering::Relaxed);
    }

    pub(crate) fn emit(&self, pe: usize, line: String) {
        lock(&self.transcript).push((pe, line));
    }

    pub(crate) fn take_transcript(&self) -> Vec<(usize, String)> {
        std::mem::take(&mut *lock(&self.transcript))
    }

    pub fn failure(&self) -> Option<Failure> {
        lock(&self.coord).failure.clone()
    }

    pub fn barrier_generation(&self) -> u64 {
        lock(&self.coord).generation
    }

    pub fn check_pe(&self, pe: i64) -> Result<usize, HeapError> {
        usize::try_from(pe)
            .ok()
            .filter(|&p| p < self.n_pes)
            .ok_or(HeapError::BadPe {
                pe,
                n_pes: self.n_pes,
            })
    }

    pub fn symbol(&self, name: &str) -> Option<SymbolInfo> {
        lock(&self.registry).get(name).cloned()
    }

    /// Install `name` in `pe`'s segment, registering it on first
    /// declaration and checking agreement with earlier declarations.
    pub fn symmetric_declare(
        &self,
        pe: usize,
        name: &str,
        ty: SlotType,
        with_lock: bool,
    ) -> Result<(), HeapError> {
        let mut coord = lock(&self.coord);
        let mut registry = lock(&self.registry);
        let mut segment = self.segments[pe].write().unwrap_or_else(|e| e.into_inner());
        if segment.contains_key(name) {
            return Err(HeapError::AlreadyDeclared(name.into()));
        }
        match registry.get_mut(name) {
            Some(info) => {
                if info.ty != ty || info.with_lock != with_lock {
                    let describe =
                        |t: SlotType, l: bool| format!("{t}{}", if l { " with lock" } else { "" });
                    return Err(HeapError::SymmetryMismatch {
                        name: name.into(),
                        ours: describe(ty, with_lock),
                        theirs: describe(info.ty, info.with_lock),
                    });
                }
                info.declared_on[pe] = true;
            }
            None => {
                let mut declared_on = vec![false; self.n_pes];
                declared_on[pe] = true;
                registry.insert(
                    name.into(),
                    SymbolInfo {
                        ty,
                        with_lock,
                        declared_on,
                    },
                );
                if with_lock {
                    coord.locks.insert(name.into(), None);
                }
            }
        }
        segment.insert(
            name.into(),
            VariableSlot {
                value: ty.zero(),
                static_type: Some(ty),
                is_shared: true,
                has_lock: with_lock,
            },
        );
        Ok(())
    }

    fn missing_symbol(&self, target: usize, name: &str) -> HeapError {
        if lock(&self.registry).contains_key(name) {
            HeapError::NotDeclaredOn {
                name: name.into(),
                pe: target,
            }
        } else {
            HeapError::NotShared(name.into())
        }
    }

    /// Read committed contents of `target`'s slot.
    pub fn read_committed(
        &self,
        target: usize,
        name: &str,
        index: Option<i64>,
    ) -> Result<Value, HeapError> {
        let segment = self.segments[target]
            .read()
            .unwrap_or_else(|e| e.into_inner());
        let Some(slot) = segment.get(name) else {
            drop(segment);
            return Err(self.missing_symbol(target, name));
        };
        match index {
            None => Ok(slot.value.clone()),
            Some(i) => slot.load_element(i).map_err(|e| HeapError::store(name, e)),
        }
    }

    pub fn is_declared_on(&self, target: usize, name: &str) -> Result<(), HeapError> {
        let segment = self.segments[target]
            .read()
            .unwrap_or_else(|e| e.into_inner());
        if segment.contains_key(name) {
            Ok(())
        } else {
            drop(segment);
            Err(self.missing_symbol(target, name))
        }
    }

    /// Make a PE's buffered writes visible.
    pub(crate) fn apply(&self, log: WriteLog) {
        let mut by_target: BTreeMap<usize, Vec<_>> = BTreeMap::new();
        for entry in log.into_entries() {
            by_target.entry(entry.target).or_default().push(entry);
        }
        for (target, entries) in by_target {
            let mut segment = self.segments[target]
                .write()
                .unwrap_or_else(|e| e.into_inner());
            for e in entries {
                let slot = segment.get_mut(&e.name).expect("validated when buffered");
                if let Some(v) = e.whole {
                    slot.value = v;
                }
                for (i, v) in e.elements {
                    if let Value::Array(a) = &mut slot.value {
                        a.items[i] = v;
                    }
                }
            }
        }
    }

    fn stuck(coord: &Coord, pe: usize) -> bool {
        match &coord.states[pe] {
            PeState::Blocked {
                on: BlockedOn::Barrier { generation },
                ..
            } => *generation == coord.generation,
            PeState::Blocked {
                on: BlockedOn::Lock { name },
                ..
            } => coord.locks.get(name).is_some_and(|h| h.is_some()),
            _ => false,
        }
    }

    fn holders(coord: &Coord) -> Vec<Vec<String>> {
        let mut held = vec![Vec::new(); coord.states.len()];
        for (name, holder) in &coord.locks {
            if let Some(h) = holder {
                held[*h].push(name.clone());
            }
        }
        for h in &mut held {
            h.sort();
        }
        held
    }

    fn report(coord: &Coord, reason: String) -> DeadlockReport {
        DeadlockReport {
            reason,
            states: coord.states.clone(),
            holding: Self::holders(coord),
            lock_holders: coord
                .locks
                .iter()
                .filter_map(|(n, h)| h.map(|h| (n.clone(), h)))
                .collect(),
            arrived: coord.arrived,
        }
    }

    /// Called with `coord` held whenever a PE blocks or finishes.
    fn detect_deadlock(&self, coord: &mut Coord) -> Option<DeadlockReport> {
        let mut live = (0..self.n_pes)
            .filter(|&p| !matches!(coord.states[p], PeState::Finished | PeState::Failed))
            .peekable();
        live.peek()?;
        if live.all(|p| Self::stuck(coord, p)) {
            Some(Self::report(coord, "no PE can make progress".into()))
        } else {
            None
        }
    }

    fn declare_deadlock(&self, coord: &mut Coord, report: DeadlockReport) -> HeapError {
        if coord.failure.is_none() {
            coord.failure = Some(Failure::Deadlock(report.clone()));
        }
        self.aborted.store(true, Ordering::SeqCst);
        self.wake.notify_all();
        HeapError::Deadlock(report)
    }

    /// Block on the condition variable until `done` holds, detecting
    /// deadlock and quiescence timeouts.
    fn wait_until<'a>(
        &'a self,
        mut coord: MutexGuard<'a, Coord>,
        pe: usize,
        state: PeState,
        done: impl Fn(&Coord) -> bool,
    ) -> Result<MutexGuard<'a, Coord>, HeapError> {
        coord.states[pe] = state;
        if let Some(report) = self.detect_deadlock(&mut coord) {
            return Err(self.declare_deadlock(&mut coord, report));
        }
        let poll = (self.watchdog / 4).clamp(Duration::from_millis(1), Duration::from_millis(50));
        let mut seen = self.progress.load(Ordering::Relaxed);
        let mut quiet_since = Instant::now();
        while !done(&coord) {
            if self.is_aborted() {
                return Err(HeapError::Aborted);
            }
            let (guard, _) = self
                .wake
                .wait_timeout(coord, poll)
                .unwrap_or_else(|e| e.into_inner());
            coord = guard;
            let now = self.progress.load(Ordering::Relaxed);
            if now != seen {
                seen = now;
                quiet_since = Instant::now();
            } else if quiet_since.elapsed() >= self.watchdog && !done(&coord) && !self.is_aborted()
            {
                let report = Self::report(
                    &coord,
                    format!("watchdog: no progress for {:?}", self.watchdog),
                );
                return Err(self.declare_deadlock(&mut coord, report));
            }
        }
        coord.states[pe] = PeState::Running;
        Ok(coord)
    }

    /// Enter the barrier, handing over this PE's buffered writes. The last
    /// PE to arrive publishes every PE's writes in PE order, checks symmetry
    /// and releases the generation.
    pub(crate) fn barrier(&self, pe: usize, log: WriteLog, site: Site) -> Result<(), HeapError> {
        let mut coord = lock(&self.coord);
        if self.is_aborted() {
            return Err(HeapError::Aborted);
        }
        self.note_progress();
        coord.pending[pe] = Some(log);
        coord.arrived += 1;
        if coord.arrived == self.n_pes {
            for p in 0..self.n_pes {
                if let Some(l) = coord.pending[p].take() {
                    self.apply(l);
                }
            }
            coord.arrived = 0;
            coord.generation += 1;
            self.wake.notify_all();
            return self.check_symmetry();
        }
        let generation = coord.generation;
        let state = PeState::Blocked {
            site,
            on: BlockedOn::Barrier { generation },
        };
        drop(self.wait_until(coord, pe, state, |c| c.generation != generation)?);
        Ok(())
    }

    fn check_symmetry(&self) -> Result<(), HeapError> {
        let registry = lock(&self.registry);
        let mut names: Vec<_> = registry.keys().collect();
        names.sort();
        for name in names {
            let info = &registry[name];
            let missing: Vec<usize> = (0..self.n_pes).filter(|&p| !info.declared_on[p]).collect();
            if !missing.is_empty() {
                return Err(HeapError::SymmetryMissing {
                    name: name.clone(),
                    missing,
                });
            }
        }
        Ok(())
    }

    pub(crate) fn lock_acquire(&self, pe: usize, name: &str, site: Site) -> Result<(), HeapError> {
        let mut coord = lock(&self.coord);
        if self.is_aborted() {
            return Err(HeapError::Aborted);
        }
        match coord.locks.get(name) {
            None => return Err(HeapError::NoLock(name.into())),
            Some(Some(h)) if *h == pe => return Err(HeapError::LockReentrant(name.into())),
            Some(None) => {}
            Some(Some(_)) => {
                let state = PeState::Blocked {
                    site,
                    on: BlockedOn::Lock { name: name.into() },
                };
                coord = self.wait_until(coord, pe, state, |c| c.locks[name].is_none())?;
            }
        }
        coord.locks.insert(name.into(), Some(pe));
        self.note_progress();
        Ok(())
    }

    pub(crate) fn lock_try(&self, pe: usize, name: &str) -> Result<bool, HeapError> {
        let mut coord = lock(&self.coord);
        self.note_progress();
        match coord.locks.get(name) {
            None => Err(HeapError::NoLock(name.into())),
            Some(Some(h)) if *h == pe => Err(HeapError::LockReentrant(name.into())),
            Some(Some(_)) => Ok(false),
            Some(None) => {
                coord.locks.insert(name.into(), Some(pe));
                Ok(true)
            }
        }
    }

    /// Publish `log` and then free the lock, so the next holder sees every
    /// write made before the release.
    pub(crate) fn lock_release(
        &self,
        pe: usize,
        name: &str,
        log: WriteLog,
    ) -> Result<(), HeapError> {
        {
            let coord = lock(&self.coord);
            match coord.locks.get(name) {
                None => return Err(HeapError::NoLock(name.into())),
                Some(Some(h)) if *h == pe => {}
                Some(_) => return Err(HeapError::LockNotHeld(name.into())),
            }
        }
        self.apply(log);
        let mut coord = lock(&self.coord);
        coord.locks.insert(name.into(), None);
        self.note_progress();
        self.wake.notify_all();
        Ok(())
    }

    /// Mark `pe` finished after publishing its remaining writes. Returns
    /// the deadlock this exposes, if any.
    pub(crate) fn finish(&self, pe: usize, log: WriteLog) -> Result<(), HeapError> {
        self.apply(log);
        let mut coord = lock(&self.coord);
        coord.states[pe] = PeState::Finished;
        self.note_progress();
        self.wake.notify_all();
        if let Some(report) = self.detect_deadlock(&mut coord) {
            return Err(self.declare_deadlock(&mut coord, report));
        }
        Ok(())
    }

    pub(crate) fn fail(&self, pe: usize, span: Span, message: String) {
        let mut coord = lock(&self.coord);
        coord.states[pe] = PeState::Failed;
        if coord.failure.is_none() {
            coord.failure = Some(Failure::Runtime { pe, span, message });
        }
        self.aborted.store(true, Ordering::SeqCst);
        self.wake.notify_all();
    }

    /// Mark a PE that stopped because another PE aborted the run.
    pub(crate) fn halt(&self, pe: usize) {
        let mut coord = lock(&self.coord);
        if matches!(coord.states[pe], PeState::Running) {
            coord.states[pe] = PeState::Failed;
        }
    }

    /// Current lock holder, for tests and reports.
    pub fn lock_holder(&self, name: &str) -> Option<Option<usize>> {
        lock(&self.coord).locks.get(name).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::Tag;

    fn heap(n: usize) -> SymmetricHeap {
        SymmetricHeap::new(n, Duration::from_secs(5))
    }

    #[test]
    fn declare_zero_initializes_and_creates_lock() {
        let h = heap(2);
        h.symmetric_declare(0, "x", SlotType::Scalar(Tag::Numbr), true)
            .unwrap();
        assert_eq!(h.read_committed(0, "x", None), Ok(Value::Numbr(0)));
        assert_eq!(h.lock_holder("x"), Some(None));
        assert!(matches!(
            h.read_committed(1, "x", None),
            Err(HeapError::NotDeclaredOn { pe: 1, .. })
        ));
        assert!(matches!(
            h.read_committed(0, "y", None),
            Err(HeapError::NotShared(_))
        ));
    }

    #[test]
    fn mismatched_sizes_are_a_symmetry_error() {
        let h = heap(2);
        h.symmetric_declare(
            0,
            "a",
            SlotType::Array {
                elem: Tag::Numbr,
                len: 32,
            },
            false,
        )
        .unwrap();
        let e = h
            .symmetric_declare(
                1,
                "a",
                SlotType::Array {
                    elem: Tag::Numbr,
                    len: 16,
                },
                false,
            )
            .unwrap_err();
        assert!(matches!(e, HeapError::SymmetryMismatch { .. }));
    }

    #[test]
    fn redeclaration_on_same_pe() {
        let h = heap(1);
        h.symmetric_declare(0, "x", SlotType::Scalar(Tag::Numbr), false)
            .unwrap();
        assert!(matches!(
            h.symmetric_declare(0, "x", SlotType::Scalar(Tag::Numbr), false),
            Err(HeapError::AlreadyDeclared(_))
        ));
    }

    #[test]
    fn one_registry_entry_for_all_pes() {
        let h = heap(4);
        let ty = SlotType::Array {
            elem: Tag::Numbar,
            len: 32,
        };
        for pe in 0..4 {
            h.symmetric_declare(pe, "pos_x", ty, true).unwrap();
        }
        assert_eq!(lock(&h.registry).len(), 1);
        assert_eq!(h.symbol("pos_x").unwrap().declared_on, vec![true; 4]);
    }

    #[test]
    fn single_pe_barrier_returns_immediately() {
        let h = heap(1);
        h.barrier(0, WriteLog::default(), Site::new(Span::new(1, 1), "HUGZ"))
            .unwrap();
        assert_eq!(h.barrier_generation(), 1);
    }

    #[test]
    fn try_lock_semantics() {
        let h = heap(2);
        h.symmetric_declare(0, "x", SlotType::Scalar(Tag::Numbr), true)
            .unwrap();
        assert_eq!(h.lock_try(1, "x"), Ok(true));
        assert_eq!(h.lock_try(0, "x"), Ok(false));
        assert!(matches!(
            h.lock_try(1, "x"),
            Err(HeapError::LockReentrant(_))
        ));
        assert!(matches!(
            h.lock_release(0, "x", WriteLog::default()),
            Err(HeapError::LockNotHeld(_))
        ));
        h.lock_release(1, "x", WriteLog::default()).unwrap();
        assert_eq!(h.lock_try(0, "x"), Ok(true));
        assert!(matches!(h.lock_try(0, "nope"), Err(HeapError::NoLock(_))));
    }

    #[test]
    fn finished_pe_with_barrier_waiter_is_deadlock() {
        let h = heap(2);
        std::thread::scope(|s| {
            let waiter =
                s.spawn(|| h.barrier(0, WriteLog::default(), Site::new(Span::new(3, 1), "HUGZ")));
            // wait for PE 0 to block
            while !matches!(lock(&h.coord).states[0], PeState::Blocked { .. }) {
                std::thread::yield_now();
            }
            let fin = h.finish(1, WriteLog::default());
            let r = waiter.join().unwrap();
            let deadlock = [fin, r]
                .into_iter()
                .find_map(|x| match x {
                    Err(HeapError::Deadlock(d)) => Some(d),
                    _ => None,
                })
                .expect("deadlock reported");
            assert!(matches!(deadlock.states[1], PeState::Finished));
            assert!(matches!(
                deadlock.states[0],
                PeState::Blocked {
                    on: BlockedOn::Barrier { .. },
                    ..
                }
            ));
        });
        assert!(matches!(h.failure(), Some(Failure::Deadlock(_))));
    }
}
