use super::StateSet;

/// A binary relation on the states `0..n`, stored as one successor set per state.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Relation {
    successors: Vec<StateSet>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Self {
            successors: vec![StateSet::empty(n); n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_pairs(n, (0..n).map(|i| (i, i)))
    }

    pub fn full(n: usize) -> Self {
        Self {
            successors: vec![StateSet::full(n); n],
        }
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(n: usize, pairs: I) -> Self {
        let mut rel = Self::empty(n);
        for (x, y) in pairs {
            rel.insert(x, y);
        }
        rel
    }

    /// Builds a relation from one successor set per state.
    pub fn from_successors(successors: Vec<StateSet>) -> Self {
        let n = successors.len();
        assert!(
            successors.iter().all(|s| s.universe() == n),
            "successor sets must range over the relation's own states"
        );
        Self { successors }
    }

    pub fn len_states(&self) -> usize {
        self.successors.len()
    }

    pub fn insert(&mut self, x: usize, y: usize) -> bool {
        self.successors[x].insert(y)
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.successors.get(x).is_some_and(|s| s.contains(y))
    }

    pub fn successors(&self, x: usize) -> &StateSet {
        &self.successors[x]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.successors
            .iter()
            .enumerate()
            .flat_map(|(x, succ)| succ.iter().map(move |y| (x, y)))
    }

    pub fn edge_count(&self) -> usize {
        self.successors.iter().map(StateSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.successors.iter().all(StateSet::is_empty)
    }

    /// `{(y, x) | (x, y) ∈ self}`.
    pub fn reversed(&self) -> Relation {
        Relation::from_pairs(self.len_states(), self.pairs().map(|(x, y)| (y, x)))
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.successors
            .iter()
            .zip(&other.successors)
            .all(|(a, b)| a.is_subset(b))
    }

    /// `{(x, z) | ∃y. (x, y) ∈ self ∧ (y, z) ∈ then}`.
    pub fn compose(&self, then: &Relation) -> Relation {
        let n = self.len_states();
        let successors = self
            .successors
            .iter()
            .map(|mid| {
                let mut out = StateSet::empty(n);
                for y in mid {
                    out.union_with(then.successors(y));
                }
                out
            })
            .collect();
        Relation { successors }
    }

    /// Smallest reflexive and transitive relation containing `self`.
    pub fn reflexive_transitive_closure(&self) -> Relation {
        let n = self.len_states();
        let successors = (0..n)
            .map(|start| {
                let mut seen = StateSet::singleton(n, start);
                let mut stack = vec![start];
                while let Some(x) = stack.pop() {
                    for y in self.successors(x) {
                        if seen.insert(y) {
                            stack.push(y);
                        }
                    }
                }
                seen
            })
            .collect();
        Relation { successors }
    }

    /// States with at least one successor.
    pub fn domain(&self) -> StateSet {
        let n = self.len_states();
        StateSet::from_indices(n, (0..n).filter(|&x| !self.successors[x].is_empty()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn closure_of_empty_is_identity() {
        assert_eq!(Relation::empty(2).reflexive_transitive_closure(), Relation::identity(2));
    }

    #[test]
    fn closure_adds_transitive_pairs() {
        let rel = Relation::from_pairs(3, [(0, 1), (1, 2)]);
        let expected = Relation::from_pairs(3, [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2), (0, 2)]);
        assert_eq!(rel.reflexive_transitive_closure(), expected);
    }

    #[test]
    fn closure_of_full_is_full() {
        assert_eq!(Relation::full(3).reflexive_transitive_closure(), Relation::full(3));
    }

    #[test]
    fn composition_examples() {
        let r = Relation::from_pairs(3, [(0, 1), (2, 0), (1, 1)]);
        assert_eq!(Relation::identity(3).compose(&r), r);
        assert_eq!(
            Relation::from_pairs(2, [(0, 1)]).compose(&Relation::from_pairs(2, [(1, 0)])),
            Relation::from_pairs(2, [(0, 0)])
        );
        assert_eq!(r.compose(&Relation::empty(3)), Relation::empty(3));
    }

    fn relation(n: usize) -> impl Strategy<Value = Relation> {
        proptest::collection::vec((0..n, 0..n), 0..=n * n).prop_map(move |pairs| Relation::from_pairs(n, pairs))
    }

    proptest! {
        #[test]
        fn closure_is_idempotent_and_monotone(a in relation(5), b in relation(5)) {
            let ca = a.reflexive_transitive_closure();
            prop_assert_eq!(ca.reflexive_transitive_closure(), ca.clone());
            prop_assert!(a.is_subset(&ca));
            let union = Relation::from_pairs(5, a.pairs().chain(b.pairs()));
            prop_assert!(ca.is_subset(&union.reflexive_transitive_closure()));
        }

        #[test]
        fn composition_matches_definition(a in relation(4), b in relation(4)) {
            let c = a.compose(&b);
            for x in 0..4 {
                for z in 0..4 {
                    let direct = (0..4).any(|y| a.contains(x, y) && b.contains(y, z));
                    prop_assert_eq!(c.contains(x, z), direct);
                }
            }
        }
    }
}
