//! A PE's view of the runtime.

use std::time::Duration;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rustc_hash::{FxHashMap, FxHashSet};

use super::deadlock::Site;
use super::heap::{HeapError, SymmetricHeap};
use super::log::WriteLog;
use super::rng::PeRng;
use super::DelayInjection;
use crate::value::{conform, conform_element, element_index, SlotType, StoreError, Value};

/// Everything one PE needs to touch shared state. Writes to symmetric
/// memory stay in a private log until the next barrier, lock release or
/// program end, and the PE always reads its own pending writes.
pub struct PeHandle<'h> {
    heap: &'h SymmetricHeap,
    pe: usize,
    rng: PeRng,
    log: WriteLog,
    types: FxHashMap<String, SlotType>,
    /// Names already confirmed declared, per target PE.
    declared: Vec<FxHashSet<String>>,
    delay: Option<(StdRng, DelayInjection)>,
}

impl<'h> PeHandle<'h> {
    pub fn new(
        heap: &'h SymmetricHeap,
        pe: usize,
        seed: u64,
        delays: Option<DelayInjection>,
    ) -> Self {
        PeHandle {
            heap,
            pe,
            rng: PeRng::new(seed, pe),
            log: WriteLog::default(),
            types: FxHashMap::default(),
            declared: vec![FxHashSet::default(); heap.n_pes()],
            delay: delays.map(|d| {
                (
                    StdRng::seed_from_u64(d.seed ^ (pe as u64).wrapping_mul(0x2545_F491_4F6C_DD1D)),
                    d,
                )
            }),
        }
    }

    pub fn pe(&self) -> usize {
        self.pe
    }

    pub fn n_pes(&self) -> usize {
        self.heap.n_pes()
    }

    pub fn heap(&self) -> &'h SymmetricHeap {
        self.heap
    }

    pub fn check_pe(&self, pe: i64) -> Result<usize, HeapError> {
        self.heap.check_pe(pe)
    }

    /// Per-statement hook: progress accounting, injected delay and abort
    /// polling.
    pub fn tick(&mut self) -> Result<(), HeapError> {
        if self.heap.is_aborted() {
            return Err(HeapError::Aborted);
        }
        self.heap.note_progress();
        if let Some((rng, d)) = &mut self.delay {
            let us = rng.gen_range(0..=d.max_micros);
            if us > 0 && (d.one_in <= 1 || rng.gen_range(0..d.one_in) == 0) {
                std::thread::sleep(Duration::from_micros(us));
            }
        }
        Ok(())
    }

    pub fn declare(&mut self, name: &str, ty: SlotType, with_lock: bool) -> Result<(), HeapError> {
        self.heap.symmetric_declare(self.pe, name, ty, with_lock)?;
        self.types.insert(name.to_string(), ty);
        self.declared[self.pe].insert(name.to_string());
        Ok(())
    }

    fn slot_type(&mut self, target: usize, name: &str) -> Result<SlotType, HeapError> {
        if !self.declared[target].contains(name) {
            self.heap.is_declared_on(target, name)?;
            self.declared[target].insert(name.to_string());
        }
        if let Some(ty) = self.types.get(name) {
            return Ok(*ty);
        }
        let ty = self
            .heap
            .symbol(name)
            .ok_or_else(|| HeapError::NotShared(name.into()))?
            .ty;
        self.types.insert(name.to_string(), ty);
        Ok(ty)
    }

    fn array_index(ty: SlotType, name: &str, index: i64) -> Result<usize, HeapError> {
        match ty {
            SlotType::Array { len, .. } => {
                element_index(index, len).map_err(|e| HeapError::store(name, e))
            }
            SlotType::Scalar(_) => Err(HeapError::store(name, StoreError::NotAnArray)),
        }
    }

    pub fn read(
        &mut self,
        target: usize,
        name: &str,
        index: Option<i64>,
    ) -> Result<Value, HeapError> {
        let ty = self.slot_type(target, name)?;
        match index {
            Some(i) => {
                let i = Self::array_index(ty, name, i)?;
                match self.log.element(target, name, i) {
                    Some(v) => Ok(v),
                    None => self.heap.read_committed(target, name, Some(i as i64)),
                }
            }
            None if self.log.has(target, name) => {
                let heap = self.heap;
                Ok(self.log.overlay(target, name, || {
                    heap.read_committed(target, name, None)
                        .expect("declaration checked above")
                }))
            }
            None => self.heap.read_committed(target, name, None),
        }
    }

    pub fn write(
        &mut self,
        target: usize,
        name: &str,
        index: Option<i64>,
        v: Value,
    ) -> Result<(), HeapError> {
        let ty = self.slot_type(target, name)?;
        match index {
            Some(i) => {
                let i = Self::array_index(ty, name, i)?;
                let SlotType::Array { elem, .. } = ty else {
                    unreachable!()
                };
                let v = conform_element(elem, v).map_err(|e| HeapError::store(name, e))?;
                self.log.write_element(target, name, i, v);
            }
            None => {
                let v = conform(Some(ty), v).map_err(|e| HeapError::store(name, e))?;
                self.log.write_whole(target, name, v);
            }
        }
        Ok(())
    }

    pub fn barrier(&mut self, site: Site) -> Result<(), HeapError> {
        let log = std::mem::take(&mut self.log);
        self.heap.barrier(self.pe, log, site)
    }

    /// Publish pending writes without any synchronization.
    fn publish(&mut self) {
        if !self.log.is_empty() {
            self.heap.apply(std::mem::take(&mut self.log));
        }
    }

    pub fn lock_acquire(&mut self, name: &str, site: Site) -> Result<(), HeapError> {
        // drop buffered writes so reads under the lock see committed data
        self.publish();
        self.heap.lock_acquire(self.pe, name, site)
    }

    pub fn lock_try(&mut self, name: &str) -> Result<bool, HeapError> {
        self.publish();
        self.heap.lock_try(self.pe, name)
    }

    pub fn lock_release(&mut self, name: &str) -> Result<(), HeapError> {
        let log = std::mem::take(&mut self.log);
        self.heap.lock_release(self.pe, name, log)
    }

    pub fn next_int(&mut self) -> i64 {
        self.rng.next_int()
    }

    pub fn next_float(&mut self) -> f64 {
        self.rng.next_float()
    }

    pub fn emit(&self, line: String) {
        self.heap.emit(self.pe, line);
    }

    pub fn finish(&mut self) -> Result<(), HeapError> {
        let log = std::mem::take(&mut self.log);
        self.heap.finish(self.pe, log)
    }
}
