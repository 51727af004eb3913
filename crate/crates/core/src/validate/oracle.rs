//! Exhaustive reference matcher used to test the real one.
//!
//! Every triple is tried against every constraint (or left unmatched where
//! that is allowed) and each complete assignment's count vector is checked
//! generatively: a group with cardinality `{m,n}` is split into `r` repetitions
//! for every admissible `r`, and each repetition is matched on its own.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use super::Neighbourhood;
use crate::rdf::{Iri, RdfTerm, Triple};
use crate::shape::{Cardinality, Shape, ShapeExpr, TripleConstraint, TripleExpr};

pub const DEFAULT_ORACLE_BOUND: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("neighbourhood has {size} triples, more than the oracle bound of {bound}")]
    BoundExceeded { size: usize, bound: usize },
}

/// Brute-force conformance of a neighbourhood to `shape`, for at most
/// [`DEFAULT_ORACLE_BOUND`] triples.
pub fn brute_force_match(
    neigh: &Neighbourhood,
    shape: &Shape,
    value: &mut dyn FnMut(&RdfTerm, &ShapeExpr) -> bool,
) -> Result<bool, OracleError> {
    brute_force_match_bounded(neigh, shape, value, DEFAULT_ORACLE_BOUND)
}

pub fn brute_force_match_bounded(
    neigh: &Neighbourhood,
    shape: &Shape,
    value: &mut dyn FnMut(&RdfTerm, &ShapeExpr) -> bool,
    bound: usize,
) -> Result<bool, OracleError> {
    let size = neigh.out.len() + neigh.inn.len();
    if size > bound {
        return Err(OracleError::BoundExceeded { size, bound });
    }
    let mut tcs: Vec<&TripleConstraint> = Vec::new();
    if let Some(e) = &shape.expr {
        collect(e, &mut tcs);
    }
    let far = |t: &Triple, inverse: bool| if inverse { t.subject.clone() } else { t.object.clone() };

    // negated constraints forbid any matching triple
    for tc in tcs.iter().filter(|tc| tc.negated) {
        let pool = if tc.inverse { &neigh.inn } else { &neigh.out };
        for t in pool.iter().filter(|t| t.predicate == tc.predicate) {
            if value(&far(t, tc.inverse), &tc.value) {
                return Ok(false);
            }
        }
    }

    let mut fwd: BTreeSet<&Iri> = BTreeSet::new();
    let mut inv: BTreeSet<&Iri> = BTreeSet::new();
    for tc in tcs.iter().filter(|tc| !tc.negated) {
        if tc.inverse {
            inv.insert(&tc.predicate);
        } else {
            fwd.insert(&tc.predicate);
        }
    }

    // per triple: the admissible choices, `None` meaning left unmatched
    let mut choices: Vec<Vec<Option<usize>>> = Vec::new();
    let triples = neigh
        .out
        .iter()
        .map(|t| (t, false))
        .chain(neigh.inn.iter().filter(|t| inv.contains(&t.predicate)).map(|t| (t, true)));
    for (t, inverse) in triples {
        let mut opts = Vec::new();
        for (i, tc) in tcs.iter().enumerate() {
            if !tc.negated && tc.inverse == inverse && tc.predicate == t.predicate && value(&far(t, inverse), &tc.value)
            {
                opts.push(Some(i));
            }
        }
        let may_skip = if inverse {
            false
        } else if fwd.contains(&t.predicate) {
            shape.extra.contains(&t.predicate)
        } else {
            !shape.closed || shape.extra.contains(&t.predicate)
        };
        if may_skip {
            opts.push(None);
        }
        choices.push(opts);
    }

    let Some(expr) = &shape.expr else {
        return Ok(choices.iter().all(|c| !c.is_empty()));
    };
    let mut gen = Generative::new(expr, tcs.len());
    let mut seen: HashMap<Vec<u32>, bool> = HashMap::new();
    let mut pick = vec![0usize; choices.len()];
    if choices.iter().any(|c| c.is_empty()) {
        return Ok(false);
    }
    loop {
        let mut counts = vec![0u32; tcs.len()];
        for (c, &k) in choices.iter().zip(&pick) {
            if let Some(i) = c[k] {
                counts[i] += 1;
            }
        }
        let ok = match seen.get(&counts) {
            Some(&v) => v,
            None => {
                let v = gen.star(0, &counts);
                seen.insert(counts, v);
                v
            }
        };
        if ok {
            return Ok(true);
        }
        // next assignment, odometer style
        let mut pos = 0;
        loop {
            if pos == pick.len() {
                return Ok(false);
            }
            pick[pos] += 1;
            if pick[pos] < choices[pos].len() {
                break;
            }
            pick[pos] = 0;
            pos += 1;
        }
    }
}

fn collect<'e>(e: &'e TripleExpr, out: &mut Vec<&'e TripleConstraint>) {
    match e {
        TripleExpr::Constraint(tc) => out.push(tc),
        TripleExpr::EachOf { exprs, .. } | TripleExpr::OneOf { exprs, .. } => {
            for c in exprs {
                collect(c, out);
            }
        }
    }
}

enum Kind {
    Leaf { tc: usize, negated: bool },
    Each(Vec<usize>),
    One(Vec<usize>),
}

struct Node {
    kind: Kind,
    card: Cardinality,
    /// Constraint indices below this node.
    symbols: Vec<usize>,
}

struct Generative {
    nodes: Vec<Node>,
    memo: HashMap<(usize, u32, Vec<u32>), bool>,
}

impl Generative {
    fn new(e: &TripleExpr, n_tcs: usize) -> Self {
        let mut g = Generative { nodes: Vec::new(), memo: HashMap::new() };
        let mut next_tc = 0;
        g.build(e, &mut next_tc);
        debug_assert_eq!(next_tc, n_tcs);
        g
    }

    fn build(&mut self, e: &TripleExpr, next_tc: &mut usize) -> usize {
        let id = self.nodes.len();
        self.nodes.push(Node { kind: Kind::Each(Vec::new()), card: e.card(), symbols: Vec::new() });
        let (kind, symbols) = match e {
            TripleExpr::Constraint(tc) => {
                let i = *next_tc;
                *next_tc += 1;
                (Kind::Leaf { tc: i, negated: tc.negated }, vec![i])
            }
            TripleExpr::EachOf { exprs, .. } | TripleExpr::OneOf { exprs, .. } => {
                let kids: Vec<usize> = exprs.iter().map(|c| self.build(c, next_tc)).collect();
                let symbols = kids.iter().flat_map(|&k| self.nodes[k].symbols.clone()).collect();
                match e {
                    TripleExpr::EachOf { .. } => (Kind::Each(kids), symbols),
                    _ => (Kind::One(kids), symbols),
                }
            }
        };
        self.nodes[id].kind = kind;
        self.nodes[id].symbols = symbols;
        id
    }

    fn project(&self, node: usize, counts: &[u32]) -> Vec<u32> {
        let mut p = vec![0; counts.len()];
        for &s in &self.nodes[node].symbols {
            p[s] = counts[s];
        }
        p
    }

    /// Does the bag match the node including its cardinality?
    fn star(&mut self, node: usize, counts: &[u32]) -> bool {
        let proj = self.project(node, counts);
        let total: u32 = proj.iter().sum();
        let card = self.nodes[node].card;
        let top = card.min.max(total);
        let hi = card.max.map_or(top, |m| m.min(top));
        (card.min..=hi).any(|r| self.reps(node, &proj, r))
    }

    /// Can the bag be split into `r` bags that each match the node once?
    fn reps(&mut self, node: usize, proj: &[u32], r: u32) -> bool {
        if r == 0 {
            return proj.iter().all(|&c| c == 0);
        }
        if r == 1 {
            return self.once(node, proj);
        }
        let key = (node, r, proj.to_vec());
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let mut part = vec![0u32; proj.len()];
        let found = self.split(node, proj, r, 0, &mut part);
        self.memo.insert(key, found);
        found
    }

    /// Enumerates sub-bags `part <= proj` position by position.
    fn split(&mut self, node: usize, proj: &[u32], r: u32, pos: usize, part: &mut Vec<u32>) -> bool {
        if pos == proj.len() {
            let rest: Vec<u32> = proj.iter().zip(part.iter()).map(|(a, b)| a - b).collect();
            let p = part.clone();
            return self.once(node, &p) && self.reps(node, &rest, r - 1);
        }
        for v in 0..=proj[pos] {
            part[pos] = v;
            if self.split(node, proj, r, pos + 1, part) {
                part[pos] = 0;
                return true;
            }
        }
        part[pos] = 0;
        false
    }

    /// Does the bag match one occurrence of the node, ignoring its cardinality?
    fn once(&mut self, node: usize, proj: &[u32]) -> bool {
        match &self.nodes[node].kind {
            Kind::Leaf { negated: true, .. } => proj.iter().all(|&c| c == 0),
            Kind::Leaf { tc, .. } => {
                let tc = *tc;
                proj.iter().enumerate().all(|(i, &c)| if i == tc { c == 1 } else { c == 0 })
            }
            Kind::Each(kids) => {
                let kids = kids.clone();
                kids.iter().all(|&k| self.star(k, proj))
            }
            Kind::One(kids) => {
                let kids = kids.clone();
                kids.iter().any(|&k| {
                    let others_empty =
                        kids.iter().filter(|&&o| o != k).all(|&o| self.nodes[o].symbols.iter().all(|&s| proj[s] == 0));
                    others_empty && self.star(k, proj)
                })
            }
        }
    }
}
