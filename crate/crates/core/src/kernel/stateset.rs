use std::cmp::Ordering;
use std::fmt;

const WORD: usize = 64;

/// A subset of a model's states, stored as a bitset over declared-order indices.
///
/// Two sets are equal iff they range over the same universe size and hold the
/// same members. Ordering is lexicographic over the ascending member lists, so
/// `{s0} < {s0, s1} < {s1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StateSet {
    universe: usize,
    words: Vec<u64>,
}

impl StateSet {
    pub fn empty(universe: usize) -> Self {
        Self {
            universe,
            words: vec![0; universe.div_ceil(WORD)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut set = Self::empty(universe);
        for i in 0..universe {
            set.insert(i);
        }
        set
    }

    pub fn singleton(universe: usize, state: usize) -> Self {
        let mut set = Self::empty(universe);
        set.insert(state);
        set
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, members: I) -> Self {
        let mut set = Self::empty(universe);
        for i in members {
            set.insert(i);
        }
        set
    }

    /// Builds the set whose members are the one-bits of `mask`. Requires `universe <= 64`.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        assert!(universe <= WORD, "mask construction limited to 64 states");
        let mut set = Self::empty(universe);
        if universe > 0 {
            let keep = if universe == WORD {
                u64::MAX
            } else {
                (1u64 << universe) - 1
            };
            set.words[0] = mask & keep;
        }
        set
    }

    /// The low word as a mask; meaningful only for universes of at most 64 states.
    pub fn mask(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    /// Every subset of a universe of `universe` states, in increasing mask order.
    pub fn powerset(universe: usize) -> impl Iterator<Item = StateSet> {
        assert!(universe < WORD, "powerset enumeration limited to 63 states");
        (0..(1u64 << universe)).map(move |m| StateSet::from_mask(universe, m))
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn contains(&self, state: usize) -> bool {
        state < self.universe && self.words[state / WORD] & (1 << (state % WORD)) != 0
    }

    /// Adds `state`; returns whether it was newly inserted.
    pub fn insert(&mut self, state: usize) -> bool {
        assert!(
            state < self.universe,
            "state {state} outside universe of {}",
            self.universe
        );
        let word = &mut self.words[state / WORD];
        let bit = 1 << (state % WORD);
        let fresh = *word & bit == 0;
        *word |= bit;
        fresh
    }

    pub fn remove(&mut self, state: usize) -> bool {
        if state >= self.universe {
            return false;
        }
        let word = &mut self.words[state / WORD];
        let bit = 1 << (state % WORD);
        let present = *word & bit != 0;
        *word &= !bit;
        present
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe
    }

    /// Members in ascending index order.
    pub fn iter(&self) -> Iter<'_> {
        Iter { set: self, next: 0 }
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &StateSet) -> StateSet {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &StateSet) -> StateSet {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> StateSet {
        let mut out = StateSet::full(self.universe);
        for (o, w) in out.words.iter_mut().zip(&self.words) {
            *o &= !w;
        }
        out
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.check_universe(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &StateSet) -> bool {
        self.check_universe(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn union_with(&mut self, other: &StateSet) {
        self.check_universe(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    fn zip_with(&self, other: &StateSet, op: impl Fn(u64, u64) -> u64) -> StateSet {
        self.check_universe(other);
        StateSet {
            universe: self.universe,
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| op(a, b)).collect(),
        }
    }

    fn check_universe(&self, other: &StateSet) {
        assert_eq!(self.universe, other.universe, "state sets over different universes");
    }
}

pub struct Iter<'a> {
    set: &'a StateSet,
    next: usize,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.next < self.set.universe {
            let word = self.set.words[self.next / WORD] >> (self.next % WORD);
            if word == 0 {
                self.next = (self.next / WORD + 1) * WORD;
                continue;
            }
            let found = self.next + word.trailing_zeros() as usize;
            if found >= self.set.universe {
                break;
            }
            self.next = found + 1;
            return Some(found);
        }
        self.next = self.set.universe;
        None
    }
}

impl<'a> IntoIterator for &'a StateSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl Ord for StateSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter()).then(self.universe.cmp(&other.universe))
    }
}

impl PartialOrd for StateSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_algebra() {
        let a = StateSet::from_indices(5, [0, 2, 4]);
        let b = StateSet::from_indices(5, [2, 3]);
        assert_eq!(a.union(&b), StateSet::from_indices(5, [0, 2, 3, 4]));
        assert_eq!(a.intersection(&b), StateSet::singleton(5, 2));
        assert_eq!(a.difference(&b), StateSet::from_indices(5, [0, 4]));
        assert_eq!(a.complement(), StateSet::from_indices(5, [1, 3]));
        assert!(StateSet::singleton(5, 2).is_subset(&a));
        assert!(!b.is_subset(&a));
        assert_eq!(a.len(), 3);
    }

    #[test]
    fn iteration_crosses_word_boundaries() {
        let s = StateSet::from_indices(130, [0, 63, 64, 127, 129]);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 63, 64, 127, 129]);
        assert_eq!(s.complement().len(), 125);
        assert!(StateSet::full(130).is_full());
    }

    #[test]
    fn ordering_is_lexicographic_on_members() {
        let a = StateSet::from_indices(3, [0]);
        let ab = StateSet::from_indices(3, [0, 1]);
        let b = StateSet::from_indices(3, [1]);
        let empty = StateSet::empty(3);
        assert!(empty < a && a < ab && ab < b);
    }

    #[test]
    fn powerset_has_every_subset_once() {
        let all: Vec<_> = StateSet::powerset(3).collect();
        assert_eq!(all.len(), 8);
        let uniq: std::collections::BTreeSet<_> = all.iter().cloned().collect();
        assert_eq!(uniq.len(), 8);
    }
}
