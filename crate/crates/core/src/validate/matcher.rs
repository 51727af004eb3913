//! Bag matching of a shape's neighbourhood against its triple expression.
//!
//! Every triple is given the set of triple constraints it could be assigned
//! to (same direction and predicate, value accepted). Triples with equal
//! option sets are interchangeable, so the search only enumerates how many
//! triples of each such group go to each option. A count vector is checked
//! against the expression with the interval method: for each subexpression
//! we compute the interval of repetition numbers `k` for which the counts
//! restricted to that subexpression form a word of `e^k`. The vector is
//! accepted iff 1 lies in the interval of the whole expression.

use std::collections::HashMap;

use crate::rdf::{Iri, RdfTerm, Triple};
use crate::shape::{mentioned_predicates, Cardinality, Shape, ShapeExpr, TripleConstraint, TripleExpr};

/// `[lo, hi]` with `hi == None` meaning unbounded; empty when `lo > hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Interval {
    lo: u64,
    hi: Option<u64>,
}

impl Interval {
    const ANY: Interval = Interval { lo: 0, hi: None };
    const EMPTY: Interval = Interval { lo: 1, hi: Some(0) };

    fn is_empty(self) -> bool {
        self.hi.is_some_and(|hi| self.lo > hi)
    }

    fn contains(self, k: u64) -> bool {
        k >= self.lo && self.hi.is_none_or(|hi| k <= hi)
    }

    fn intersect(self, o: Interval) -> Interval {
        let hi = match (self.hi, o.hi) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, None) => a,
            (None, b) => b,
        };
        Interval { lo: self.lo.max(o.lo), hi }
    }

    fn add(self, o: Interval) -> Interval {
        if self.is_empty() || o.is_empty() {
            return Interval::EMPTY;
        }
        Interval { lo: self.lo + o.lo, hi: self.hi.zip(o.hi).map(|(a, b)| a + b) }
    }

    /// Repetition numbers of `e{n,m}` given those of `e`.
    fn repeat(self, card: Cardinality) -> Interval {
        if self.is_empty() {
            return Interval::EMPTY;
        }
        let n = card.min as u64;
        let hi = match (self.hi, n) {
            (_, 0) | (None, _) => None,
            (Some(u), n) => Some(u / n),
        };
        if self.lo == 0 {
            return Interval { lo: 0, hi };
        }
        let lo = match card.max {
            None => 1,
            Some(0) => return Interval::EMPTY,
            Some(m) => self.lo.div_ceil(m as u64),
        };
        Interval { lo, hi }
    }
}

fn interval(e: &TripleExpr, counts: &[u64], idx: &mut usize) -> Interval {
    match e {
        TripleExpr::Constraint(tc) => {
            let c = counts[*idx];
            *idx += 1;
            if tc.negated {
                return Interval::ANY;
            }
            Interval { lo: c, hi: Some(c) }.repeat(tc.card)
        }
        TripleExpr::EachOf { exprs, card } => {
            let mut acc = Interval::ANY;
            for child in exprs {
                acc = acc.intersect(interval(child, counts, idx));
            }
            acc.repeat(*card)
        }
        TripleExpr::OneOf { exprs, card } => {
            let mut acc = Interval { lo: 0, hi: Some(0) };
            for child in exprs {
                acc = acc.add(interval(child, counts, idx));
            }
            acc.repeat(*card)
        }
    }
}

/// True iff the per-constraint counts (in `constraints()` order) form a word
/// of the expression.
pub(crate) fn accepts_counts(e: &TripleExpr, counts: &[u64]) -> bool {
    interval(e, counts, &mut 0).contains(1)
}

/// A neighbourhood triple seen from the focus node.
#[derive(Clone, Copy)]
pub(crate) struct Arc<'a> {
    pub triple: &'a Triple,
    pub inverse: bool,
}

impl<'a> Arc<'a> {
    /// The node at the far end of the arc.
    pub fn other(&self) -> &'a RdfTerm {
        if self.inverse {
            &self.triple.subject
        } else {
            &self.triple.object
        }
    }
}

/// Why a neighbourhood fails a shape.
#[derive(Clone, Debug)]
pub(crate) enum Problem<'a> {
    /// A triple matching a negated constraint.
    Negated { tc: usize, triple: &'a Triple },
    /// A triple that must be matched but no constraint accepts it.
    Unmatched { triple: &'a Triple, inverse: bool, closed: bool },
    /// A constraint whose possible match counts cannot meet its cardinality.
    Count { tc: usize, forced: u64, possible: u64 },
    /// A triple with the right predicate whose value a constraint rejects.
    Value { tc: usize, triple: &'a Triple, inverse: bool },
    /// Alternatives of a single-choice group that all have triples only
    /// they can match; one constraint per alternative.
    Exclusive { tcs: Vec<usize> },
    /// No assignment satisfies the grouping structure.
    Structure,
}

struct Prepared<'s, 'a> {
    tcs: Vec<&'s TripleConstraint>,
    arcs: Vec<Arc<'a>>,
    /// Options per arc: constraint indices, plus `None` when it may stay unmatched.
    options: Vec<Vec<Option<usize>>>,
    negated_hits: Vec<(usize, &'a Triple)>,
    value_misses: Vec<(usize, Arc<'a>)>,
}

fn prepare<'s, 'a>(
    shape: &'s Shape,
    out: &'a [Triple],
    inn: &[&'a Triple],
    value_ok: &mut dyn FnMut(&RdfTerm, &ShapeExpr) -> bool,
    collect_misses: bool,
) -> Prepared<'s, 'a> {
    let tcs: Vec<&TripleConstraint> = shape.expr.as_ref().map(|e| e.constraints()).unwrap_or_default();
    let mentioned = shape.expr.as_ref().map(mentioned_predicates).unwrap_or_default();
    let mut by_pred: HashMap<(&Iri, bool), Vec<usize>> = HashMap::new();
    for (i, tc) in tcs.iter().enumerate() {
        by_pred.entry((&tc.predicate, tc.inverse)).or_default().push(i);
    }
    let mut p =
        Prepared { tcs, arcs: Vec::new(), options: Vec::new(), negated_hits: Vec::new(), value_misses: Vec::new() };
    let arcs = out
        .iter()
        .map(|t| Arc { triple: t, inverse: false })
        .chain(inn.iter().map(|t| Arc { triple: t, inverse: true }));
    for arc in arcs {
        let pred = &arc.triple.predicate;
        let mut opts = Vec::new();
        for &i in by_pred.get(&(pred, arc.inverse)).map(|v| v.as_slice()).unwrap_or(&[]) {
            let tc = p.tcs[i];
            let ok = value_ok(arc.other(), &tc.value);
            if tc.negated {
                if ok {
                    p.negated_hits.push((i, arc.triple));
                }
            } else if ok {
                opts.push(Some(i));
            } else if collect_misses {
                p.value_misses.push((i, arc));
            }
        }
        let must_match = if arc.inverse {
            mentioned.inverse.contains(pred)
        } else if mentioned.forward.contains(pred) {
            !shape.extra.contains(pred)
        } else {
            shape.closed && !shape.extra.contains(pred)
        };
        if arc.inverse && !must_match {
            // in-arcs on predicates no positive constraint mentions are not part of the neighbourhood
            continue;
        }
        if !must_match {
            opts.push(None);
        }
        p.arcs.push(arc);
        p.options.push(opts);
    }
    p
}

/// Decides whether the neighbourhood `out` ∪ `inn` of a focus node matches
/// `shape`. `value_ok(v, e)` tells whether the far end `v` of an arc
/// satisfies the value expression `e` of a constraint.
pub(crate) fn matches(
    shape: &Shape,
    out: &[Triple],
    inn: &[&Triple],
    value_ok: &mut dyn FnMut(&RdfTerm, &ShapeExpr) -> bool,
) -> bool {
    let p = prepare(shape, out, inn, value_ok, false);
    if !p.negated_hits.is_empty() || p.options.iter().any(|o| o.is_empty()) {
        return false;
    }
    let Some(expr) = &shape.expr else { return true };
    search(expr, &p)
}

fn search(expr: &TripleExpr, p: &Prepared) -> bool {
    let mut groups: HashMap<&[Option<usize>], u64> = HashMap::new();
    let mut counts = vec![0u64; p.tcs.len()];
    for opts in &p.options {
        match opts.as_slice() {
            [Some(i)] => counts[*i] += 1,
            [None] => {}
            _ => *groups.entry(opts.as_slice()).or_default() += 1,
        }
    }
    let mut groups: Vec<(&[Option<usize>], u64)> = groups.into_iter().collect();
    groups.sort_unstable();
    let first = groups.first().map_or(0, |g| g.1);
    distribute(expr, &groups, 0, 0, first, &mut counts)
}

/// Tries every way of spreading each group's triples over its options.
fn distribute(
    expr: &TripleExpr,
    groups: &[(&[Option<usize>], u64)],
    gi: usize,
    oi: usize,
    remaining: u64,
    counts: &mut [u64],
) -> bool {
    let Some(&(opts, _)) = groups.get(gi) else {
        return accepts_counts(expr, counts);
    };
    let last = oi + 1 == opts.len();
    let range = if last { remaining..=remaining } else { 0..=remaining };
    for n in range {
        if let Some(i) = opts[oi] {
            counts[i] += n;
        }
        let found = if last {
            let next = groups.get(gi + 1).map_or(0, |g| g.1);
            distribute(expr, groups, gi + 1, 0, next, counts)
        } else {
            distribute(expr, groups, gi, oi + 1, remaining - n, counts)
        };
        if let Some(i) = opts[oi] {
            counts[i] -= n;
        }
        if found {
            return true;
        }
    }
    false
}

pub(crate) struct Diagnosis<'s, 'a> {
    pub tcs: Vec<&'s TripleConstraint>,
    pub problems: Vec<Problem<'a>>,
}

/// Flags per constraint: (every enclosing group is required, every
/// enclosing group occurs at most once).
fn tc_context(e: &TripleExpr, required: bool, single: bool, out: &mut Vec<(bool, bool)>) {
    match e {
        TripleExpr::Constraint(_) => out.push((required, single)),
        TripleExpr::EachOf { exprs, card } => {
            for c in exprs {
                tc_context(c, required && card.min >= 1, single && card.max == Some(1), out);
            }
        }
        TripleExpr::OneOf { exprs, card } => {
            let only = exprs.len() == 1;
            for c in exprs {
                tc_context(c, required && only && card.min >= 1, single && card.max == Some(1), out);
            }
        }
    }
}

fn tc_count(e: &TripleExpr) -> usize {
    match e {
        TripleExpr::Constraint(_) => 1,
        TripleExpr::EachOf { exprs, .. } | TripleExpr::OneOf { exprs, .. } => exprs.iter().map(tc_count).sum(),
    }
}

/// Finds one-of groups taken at most once where two or more alternatives
/// hold a constraint that some triple can only be matched by.
fn exclusive_conflicts(e: &TripleExpr, forced: &[bool], next: &mut usize, out: &mut Vec<Problem<'_>>) {
    match e {
        TripleExpr::Constraint(_) => *next += 1,
        TripleExpr::EachOf { exprs, .. } => {
            for c in exprs {
                exclusive_conflicts(c, forced, next, out);
            }
        }
        TripleExpr::OneOf { exprs, card } => {
            let start = *next;
            let mut hits = Vec::new();
            for c in exprs {
                let first = *next;
                let n = tc_count(c);
                if let Some(i) = (first..first + n).find(|&i| forced[i]) {
                    hits.push(i);
                }
                exclusive_conflicts(c, forced, next, out);
            }
            debug_assert_eq!(*next - start, exprs.iter().map(tc_count).sum::<usize>());
            if card.max == Some(1) && hits.len() > 1 {
                out.push(Problem::Exclusive { tcs: hits });
            }
        }
    }
}

/// Explains why `matches` fails. The problem list is never empty.
pub(crate) fn diagnose<'s, 'a>(
    shape: &'s Shape,
    out: &'a [Triple],
    inn: &[&'a Triple],
    value_ok: &mut dyn FnMut(&RdfTerm, &ShapeExpr) -> bool,
) -> Diagnosis<'s, 'a> {
    let p = prepare(shape, out, inn, value_ok, true);
    let mentioned = shape.expr.as_ref().map(mentioned_predicates).unwrap_or_default();
    let mut problems = Vec::new();
    for &(tc, triple) in &p.negated_hits {
        problems.push(Problem::Negated { tc, triple });
    }
    for (arc, opts) in p.arcs.iter().zip(&p.options) {
        if !opts.is_empty() {
            continue;
        }
        let before = problems.len();
        for (tc, miss) in &p.value_misses {
            if std::ptr::eq(miss.triple, arc.triple) && miss.inverse == arc.inverse {
                problems.push(Problem::Value { tc: *tc, triple: arc.triple, inverse: arc.inverse });
            }
        }
        if problems.len() == before {
            let set = if arc.inverse { &mentioned.inverse } else { &mentioned.forward };
            let closed = !set.contains(&arc.triple.predicate);
            problems.push(Problem::Unmatched { triple: arc.triple, inverse: arc.inverse, closed });
        }
    }
    if let Some(expr) = &shape.expr {
        let mut ctx = Vec::new();
        tc_context(expr, true, true, &mut ctx);
        for (i, tc) in p.tcs.iter().enumerate() {
            if tc.negated {
                continue;
            }
            let forced = p.options.iter().filter(|o| o.as_slice() == [Some(i)]).count() as u64;
            let possible = p.options.iter().filter(|o| o.contains(&Some(i))).count() as u64;
            let (required, single) = ctx[i];
            let too_few = required && (tc.card.min as u64) > possible;
            let too_many = single && tc.card.max.is_some_and(|m| (m as u64) < forced);
            if too_few || too_many {
                problems.push(Problem::Count { tc: i, forced, possible });
                if too_few {
                    for (t, miss) in &p.value_misses {
                        let seen = problems.iter().any(|q| {
                            matches!(q, Problem::Value { tc, triple, .. } if *tc == i && std::ptr::eq(*triple, miss.triple))
                        });
                        if *t == i && !seen {
                            problems.push(Problem::Value { tc: i, triple: miss.triple, inverse: miss.inverse });
                        }
                    }
                }
            }
        }
    }
    if problems.is_empty() {
        if let Some(expr) = &shape.expr {
            let forced: Vec<bool> =
                (0..p.tcs.len()).map(|i| p.options.iter().any(|o| o.as_slice() == [Some(i)])).collect();
            exclusive_conflicts(expr, &forced, &mut 0, &mut problems);
        }
    }
    if problems.is_empty() {
        problems.push(Problem::Structure);
    }
    Diagnosis { tcs: p.tcs, problems }
}
