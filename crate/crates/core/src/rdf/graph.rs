use std::collections::HashMap;
use std::ops::Range;

use super::term::{Iri, RdfTerm, Triple};

/// Immutable, indexed triple set.
///
/// Triples are kept sorted by (subject, predicate, object), so the triples of
/// one subject, and of one (subject, predicate) pair, are contiguous slices.
/// A separate index maps each object term to the positions where it occurs.
#[derive(Clone, Debug, Default)]
pub struct Graph {
    triples: Vec<Triple>,
    by_subject: HashMap<RdfTerm, Range<usize>>,
    by_object: HashMap<RdfTerm, Vec<u32>>,
    prefixes: Vec<(String, String)>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.triples == other.triples
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new(triples: impl IntoIterator<Item = Triple>, prefixes: Vec<(String, String)>) -> Self {
        let mut triples: Vec<Triple> = triples.into_iter().collect();
        triples.sort_unstable();
        triples.dedup();

        let mut by_subject: HashMap<RdfTerm, Range<usize>> = HashMap::new();
        let mut by_object: HashMap<RdfTerm, Vec<u32>> = HashMap::new();
        let mut start = 0;
        for i in 0..triples.len() {
            if i + 1 == triples.len() || triples[i + 1].subject != triples[i].subject {
                by_subject.insert(triples[i].subject.clone(), start..i + 1);
                start = i + 1;
            }
            by_object.entry(triples[i].object.clone()).or_default().push(i as u32);
        }

        Graph { triples, by_subject, by_object, prefixes }
    }

    pub fn empty() -> Self {
        Graph::default()
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    pub fn prefixes(&self) -> &[(String, String)] {
        &self.prefixes
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.binary_search(triple).is_ok()
    }

    /// Triples with `node` as subject.
    pub fn triples_out(&self, node: &RdfTerm) -> &[Triple] {
        match self.by_subject.get(node) {
            Some(range) => &self.triples[range.clone()],
            None => &[],
        }
    }

    /// Triples with `node` as object.
    pub fn triples_in(&self, node: &RdfTerm) -> Vec<&Triple> {
        match self.by_object.get(node) {
            Some(positions) => positions.iter().map(|&i| &self.triples[i as usize]).collect(),
            None => Vec::new(),
        }
    }

    /// Triples `(node, pred, _)`, sorted by object.
    pub fn triples_with(&self, node: &RdfTerm, pred: &Iri) -> &[Triple] {
        let out = self.triples_out(node);
        let lo = out.partition_point(|t| &t.predicate < pred);
        let hi = out.partition_point(|t| &t.predicate <= pred);
        &out[lo..hi]
    }

    /// Objects of `(node, pred, _)` in term order.
    pub fn values_for(&self, node: &RdfTerm, pred: &Iri) -> Vec<&RdfTerm> {
        self.triples_with(node, pred).iter().map(|t| &t.object).collect()
    }

    /// Subjects `s` such that `(s, pred, object)` holds, in term order.
    pub fn subjects_for(&self, pred: &Iri, object: &RdfTerm) -> Vec<&RdfTerm> {
        let mut subjects: Vec<&RdfTerm> =
            self.triples_in(object).into_iter().filter(|t| &t.predicate == pred).map(|t| &t.subject).collect();
        subjects.sort();
        subjects.dedup();
        subjects
    }

    /// Distinct subjects in term order.
    pub fn subjects(&self) -> impl Iterator<Item = &RdfTerm> {
        let mut last: Option<&RdfTerm> = None;
        self.triples.iter().filter_map(move |t| {
            if last == Some(&t.subject) {
                None
            } else {
                last = Some(&t.subject);
                Some(&t.subject)
            }
        })
    }

    /// Distinct object terms.
    pub fn objects(&self) -> impl Iterator<Item = &RdfTerm> {
        self.by_object.keys()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str, p: &str, o: RdfTerm) -> Triple {
        Triple::new(RdfTerm::iri(s), Iri::new(p), o).unwrap()
    }

    fn sample() -> Graph {
        Graph::new(
            vec![
                t("http://x/a", "http://x/p", RdfTerm::iri("http://x/b")),
                t("http://x/a", "http://x/q", RdfTerm::string("1")),
                t("http://x/b", "http://x/p", RdfTerm::iri("http://x/a")),
                t("http://x/c", "http://x/p", RdfTerm::iri("http://x/b")),
            ],
            vec![],
        )
    }

    #[test]
    fn duplicate_triples_collapse() {
        let triple = t("http://x/a", "http://x/p", RdfTerm::string("v"));
        let g = Graph::new(vec![triple.clone(), triple.clone()], vec![]);
        assert_eq!(g.len(), 1);
        assert_eq!(g.values_for(&RdfTerm::iri("http://x/a"), &Iri::new("http://x/p")).len(), 1);
    }

    #[test]
    fn indexes_partition_the_triple_set() {
        let g = sample();
        let mut out: Vec<&Triple> = g.subjects().flat_map(|s| g.triples_out(s)).collect();
        out.sort();
        assert_eq!(out, g.iter().collect::<Vec<_>>());
        let mut inc: Vec<&Triple> = g.objects().flat_map(|o| g.triples_in(o)).collect();
        inc.sort();
        assert_eq!(inc, g.iter().collect::<Vec<_>>());
    }

    #[test]
    fn lookups() {
        let g = sample();
        let b = RdfTerm::iri("http://x/b");
        assert_eq!(g.triples_in(&b).len(), 2);
        assert_eq!(g.triples_out(&RdfTerm::iri("http://x/a")).len(), 2);
        assert!(g.triples_out(&RdfTerm::iri("http://x/zzz")).is_empty());
        assert!(g.triples_in(&RdfTerm::iri("http://x/zzz")).is_empty());
        assert!(g.values_for(&RdfTerm::iri("http://x/a"), &Iri::new("http://x/missing")).is_empty());
        let subjects = g.subjects_for(&Iri::new("http://x/p"), &b);
        assert_eq!(subjects, vec![&RdfTerm::iri("http://x/a"), &RdfTerm::iri("http://x/c")]);
    }
}
