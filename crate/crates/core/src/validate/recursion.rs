//! Coinductive evaluation of recursive shape references.
//!
//! A (node, shape) pair met again while it is still being evaluated is
//! assumed to conform. A positive verdict that relied on such an assumption
//! is provisional: it is recorded with the depth of the shallowest stack
//! frame it relied on, and becomes settled only once that frame succeeds.
//! If the frame fails, every provisional verdict recorded since it started
//! is discarded. Negative verdicts are settled at once: an evaluation that
//! fails while assuming more than is true fails without the assumptions too.

use std::collections::HashMap;
use std::hash::Hash;

/// Dependency depth of a verdict that relies on no assumption.
pub(crate) const SETTLED: usize = usize::MAX;

pub(crate) struct Frame {
    depth: usize,
    start: usize,
}

pub(crate) struct Recursion<K> {
    memo: HashMap<K, bool>,
    stack: HashMap<K, usize>,
    provisional: Vec<K>,
    prov_dep: HashMap<K, usize>,
}

impl<K: Hash + Eq + Clone> Recursion<K> {
    pub fn new() -> Self {
        Recursion { memo: HashMap::new(), stack: HashMap::new(), provisional: Vec::new(), prov_dep: HashMap::new() }
    }

    /// A known verdict with its dependency depth, or a new frame the caller
    /// must evaluate and close with [`Recursion::finish`].
    pub fn enter(&mut self, key: &K) -> Result<(bool, usize), Frame> {
        if let Some(&v) = self.memo.get(key) {
            return Ok((v, SETTLED));
        }
        if let Some(&d) = self.stack.get(key) {
            return Ok((true, d));
        }
        if let Some(&d) = self.prov_dep.get(key) {
            return Ok((true, d));
        }
        let depth = self.stack.len();
        self.stack.insert(key.clone(), depth);
        Err(Frame { depth, start: self.provisional.len() })
    }

    pub fn finish(&mut self, key: K, frame: Frame, ok: bool, dep: usize) -> (bool, usize) {
        self.stack.remove(&key);
        let Frame { depth, start } = frame;
        if !ok {
            for k in self.provisional.drain(start..) {
                self.prov_dep.remove(&k);
            }
            self.memo.insert(key, false);
            return (false, SETTLED);
        }
        if dep >= depth {
            let pending: Vec<K> = self.provisional.drain(start..).collect();
            for k in pending {
                let d = self.prov_dep[&k];
                if d >= depth {
                    self.prov_dep.remove(&k);
                    self.memo.insert(k, true);
                } else {
                    self.provisional.push(k);
                }
            }
            self.memo.insert(key, true);
            return (true, SETTLED);
        }
        // verdicts resting on this frame now rest on whatever it relied on
        for k in &self.provisional[start..] {
            let d = self.prov_dep.get_mut(k).expect("provisional entry");
            if *d >= depth {
                *d = dep;
            }
        }
        self.provisional.push(key.clone());
        self.prov_dep.insert(key, dep);
        (true, dep)
    }
}
