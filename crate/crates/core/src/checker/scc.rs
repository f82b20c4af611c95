use crate::kernel::{Relation, StateSet};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Component {
    pub states: StateSet,
    /// More than one state, or a single state with a self-loop.
    pub nontrivial: bool,
}

/// Maximal strongly connected components of a subgraph.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SccPartition {
    pub components: Vec<Component>,
}

impl SccPartition {
    /// Union of all nontrivial components.
    pub fn nontrivial_states(&self, universe: usize) -> StateSet {
        let mut out = StateSet::empty(universe);
        for c in self.components.iter().filter(|c| c.nontrivial) {
            out.union_with(&c.states);
        }
        out
    }
}

/// Tarjan's algorithm on the subgraph induced by `sub`, iterative so deep
/// chains do not exhaust the stack. Components come out in reverse
/// topological order.
pub fn tarjan_scc(sub: &StateSet, rel: &Relation) -> SccPartition {
    let n = sub.universe();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut lowlink = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut counter = 0;
    let mut components = Vec::new();
    let inside = |x: usize| -> Vec<usize> { rel.successors(x).iter().filter(|&y| sub.contains(y)).collect() };

    for root in sub {
        if index[root] != UNSEEN {
            continue;
        }
        // (node, its in-subgraph successors, next successor to visit)
        let mut call: Vec<(usize, Vec<usize>, usize)> = Vec::new();
        index[root] = counter;
        lowlink[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        call.push((root, inside(root), 0));

        while let Some(frame) = call.last_mut() {
            let v = frame.0;
            if frame.2 < frame.1.len() {
                let w = frame.1[frame.2];
                frame.2 += 1;
                if index[w] == UNSEEN {
                    index[w] = counter;
                    lowlink[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, inside(w), 0));
                } else if on_stack[w] {
                    lowlink[v] = lowlink[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(parent) = call.last() {
                lowlink[parent.0] = lowlink[parent.0].min(lowlink[v]);
            }
            if lowlink[v] == index[v] {
                let mut states = StateSet::empty(n);
                loop {
                    let w = stack.pop().expect("component root is on the stack");
                    on_stack[w] = false;
                    states.insert(w);
                    if w == v {
                        break;
                    }
                }
                let nontrivial = states.len() > 1 || rel.contains(v, v);
                components.push(Component { states, nontrivial });
            }
        }
    }
    SccPartition { components }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn mutual_edges_form_one_nontrivial_component() {
        let rel = Relation::from_pairs(2, [(0, 1), (1, 0)]);
        let p = tarjan_scc(&StateSet::full(2), &rel);
        assert_eq!(p.components.len(), 1);
        assert!(p.components[0].nontrivial);
        assert_eq!(p.components[0].states.len(), 2);
    }

    #[test]
    fn self_loop_is_nontrivial() {
        let p = tarjan_scc(&StateSet::full(1), &Relation::identity(1));
        assert_eq!(p.components.len(), 1);
        assert!(p.components[0].nontrivial);
    }

    #[test]
    fn isolated_state_is_trivial() {
        let p = tarjan_scc(&StateSet::full(1), &Relation::empty(1));
        assert_eq!(p.components.len(), 1);
        assert!(!p.components[0].nontrivial);
    }

    #[test]
    fn edges_leaving_the_subgraph_are_ignored() {
        // 0 -> 1 -> 2 -> 0, but 2 is outside the subgraph.
        let rel = Relation::from_pairs(3, [(0, 1), (1, 2), (2, 0)]);
        let p = tarjan_scc(&StateSet::from_indices(3, [0, 1]), &rel);
        assert_eq!(p.components.len(), 2);
        assert!(p.components.iter().all(|c| !c.nontrivial));
    }

    #[test]
    fn long_chain_does_not_recurse() {
        let n = 20_000;
        let rel = Relation::from_pairs(n, (0..n - 1).map(|i| (i, i + 1)).chain([(n - 1, 0)]));
        let p = tarjan_scc(&StateSet::full(n), &rel);
        assert_eq!(p.components.len(), 1);
    }

    fn mutually_reachable(rel: &Relation, sub: &StateSet, a: usize, b: usize) -> bool {
        let reach = |from: usize, to: usize| {
            let mut seen = StateSet::singleton(sub.universe(), from);
            let mut todo = vec![from];
            while let Some(x) = todo.pop() {
                for y in rel.successors(x).iter().filter(|&y| sub.contains(y)) {
                    if seen.insert(y) {
                        todo.push(y);
                    }
                }
            }
            seen.contains(to)
        };
        reach(a, b) && reach(b, a)
    }

    proptest! {
        #[test]
        fn components_are_mutual_reachability_classes(
            pairs in proptest::collection::vec((0usize..6, 0usize..6), 0..20),
            mask in 0u64..64,
        ) {
            let rel = Relation::from_pairs(6, pairs);
            let sub = StateSet::from_mask(6, mask);
            let p = tarjan_scc(&sub, &rel);
            let mut covered = StateSet::empty(6);
            for c in &p.components {
                prop_assert!(c.states.is_disjoint(&covered));
                covered.union_with(&c.states);
                for a in &c.states {
                    for b in sub.iter() {
                        prop_assert_eq!(c.states.contains(b), mutually_reachable(&rel, &sub, a, b));
                    }
                }
                let first = c.states.first().unwrap();
                prop_assert_eq!(c.nontrivial, c.states.len() > 1 || rel.contains(first, first));
            }
            prop_assert_eq!(covered, sub);
        }
    }
}
