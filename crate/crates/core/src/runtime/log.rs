//! Per-PE buffer of symmetric writes not yet published to other PEs.

use std::collections::BTreeMap;

use rustc_hash::FxHashMap;

use crate::value::Value;

#[derive(Debug, Clone, Default, PartialEq)]
struct Pending {
    whole: Option<Value>,
    elements: BTreeMap<usize, Value>,
}

/// One buffered slot update, in the order it must be applied.
#[derive(Debug, Clone, PartialEq)]
pub struct LogEntry {
    pub target: usize,
    pub name: String,
    pub whole: Option<Value>,
    pub elements: Vec<(usize, Value)>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct WriteLog {
    // keyed by name first so lookups need no owned key
    pending: FxHashMap<String, BTreeMap<usize, Pending>>,
}

impl WriteLog {
    pub fn is_empty(&self) -> bool {
        self.pending.is_empty()
    }

    fn get(&self, target: usize, name: &str) -> Option<&Pending> {
        self.pending.get(name)?.get(&target)
    }

    fn entry(&mut self, target: usize, name: &str) -> &mut Pending {
        if !self.pending.contains_key(name) {
            self.pending.insert(name.to_string(), BTreeMap::new());
        }
        self.pending
            .get_mut(name)
            .unwrap()
            .entry(target)
            .or_default()
    }

    pub fn write_whole(&mut self, target: usize, name: &str, v: Value) {
        let p = self.entry(target, name);
        p.whole = Some(v);
        p.elements.clear();
    }

    pub fn write_element(&mut self, target: usize, name: &str, index: usize, v: Value) {
        let p = self.entry(target, name);
        match &mut p.whole {
            Some(Value::Array(a)) => a.items[index] = v,
            _ => {
                p.elements.insert(index, v);
            }
        }
    }

    /// Buffered value of one element, if this PE wrote it.
    pub fn element(&self, target: usize, name: &str, index: usize) -> Option<Value> {
        let p = self.get(target, name)?;
        match &p.whole {
            Some(Value::Array(a)) => Some(a.items[index].clone()),
            _ => p.elements.get(&index).cloned(),
        }
    }

    /// Overlay buffered writes onto the committed value of a slot.
    pub fn overlay(&self, target: usize, name: &str, committed: impl FnOnce() -> Value) -> Value {
        let Some(p) = self.get(target, name) else {
            return committed();
        };
        if let Some(v) = &p.whole {
            return v.clone();
        }
        let mut v = committed();
        if let Value::Array(a) = &mut v {
            for (&i, e) in &p.elements {
                a.items[i] = e.clone();
            }
        }
        v
    }

    pub fn has(&self, target: usize, name: &str) -> bool {
        self.get(target, name).is_some()
    }

    /// Entries ordered by target PE, then name.
    pub fn into_entries(self) -> impl Iterator<Item = LogEntry> {
        let mut entries: Vec<LogEntry> = self
            .pending
            .into_iter()
            .flat_map(|(name, by_target)| {
                by_target.into_iter().map(move |(target, p)| LogEntry {
                    target,
                    name: name.clone(),
                    whole: p.whole,
                    elements: p.elements.into_iter().collect(),
                })
            })
            .collect();
        entries.sort_by(|a, b| (a.target, &a.name).cmp(&(b.target, &b.name)));
        entries.into_iter()
    }
}
