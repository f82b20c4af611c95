use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::frames::{validate_model, ValidationReport};
use crate::kernel::{HoodKind, Model, Neighbourhood, Relation, StateSet};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Family {
    /// KD45 cluster belief, no neighbourhoods.
    F1,
    /// As F1 with a constant principal-filter preference family.
    F2,
    /// Nonempty intentions disjoint from the cluster.
    F3,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LabelledModel {
    pub id: String,
    pub model: Model,
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum GenError {
    #[error("at least one state is required")]
    ZeroStates,
    #[error("the belief cluster must be nonempty")]
    EmptyCluster,
    #[error("cluster of {cluster} states does not fit in {states}")]
    ClusterTooLarge { cluster: usize, states: usize },
    #[error("the preference core must be a nonempty subset of the cluster")]
    BadCore,
    #[error("generated {id} failed validation:\n{report}")]
    Rejected { id: String, report: String },
}

/// Every state believes exactly the cluster: transitive, euclidean and serial.
pub fn kd45_cluster(n: usize, cluster: &StateSet) -> Result<Relation, GenError> {
    if n == 0 {
        return Err(GenError::ZeroStates);
    }
    if cluster.is_empty() {
        return Err(GenError::EmptyCluster);
    }
    if cluster.universe() != n {
        return Err(GenError::ClusterTooLarge {
            cluster: cluster.universe(),
            states: n,
        });
    }
    Ok(Relation::from_successors(vec![cluster.clone(); n]))
}

/// All supersets of `core`.
pub fn principal_filter(core: &StateSet, cluster: &StateSet) -> Result<Neighbourhood, GenError> {
    if core.is_empty() || !core.is_subset(cluster) {
        return Err(GenError::BadCore);
    }
    Ok(StateSet::powerset(core.universe())
        .filter(|q| core.is_subset(q))
        .collect())
}

/// A temporal relation compatible with a belief cluster `k`: either the
/// cluster is permuted by its single successors, or some cluster states
/// deadlock and every cluster state has a predecessor in the cluster as soon
/// as the cluster has any successor at all. States outside the cluster are
/// unconstrained.
pub fn cluster_temporal(rng: &mut impl Rng, k: &StateSet) -> Relation {
    let n = k.universe();
    let mut rel = Relation::empty(n);
    let members: Vec<usize> = k.iter().collect();
    if rng.gen_bool(0.5) {
        let mut image = members.clone();
        image.shuffle(rng);
        for (&from, &to) in members.iter().zip(&image) {
            rel.insert(from, to);
        }
    } else {
        let dead_count = rng.gen_range(1..=members.len());
        let mut order = members.clone();
        order.shuffle(rng);
        let live = &order[dead_count..];
        for &y in live {
            for z in 0..n {
                if rng.gen_bool(0.3) {
                    rel.insert(y, z);
                }
            }
        }
        let image = image_of(&rel, k);
        if !image.is_empty() {
            for &z in &members {
                if !image.contains(z) {
                    let from = live[rng.gen_range(0..live.len())];
                    rel.insert(from, z);
                }
            }
        }
    }
    for x in (0..n).filter(|&x| !k.contains(x)) {
        for y in 0..n {
            if rng.gen_bool(0.35) {
                rel.insert(x, y);
            }
        }
    }
    rel
}

fn image_of(rel: &Relation, set: &StateSet) -> StateSet {
    let mut out = StateSet::empty(set.universe());
    for s in set {
        out.union_with(rel.successors(s));
    }
    out
}

fn random_nonempty_subset(rng: &mut impl Rng, within: &StateSet) -> StateSet {
    loop {
        let pick = StateSet::from_indices(within.universe(), within.iter().filter(|_| rng.gen_bool(0.5)));
        if !pick.is_empty() {
            return pick;
        }
    }
}

const ATOMS: [&str; 2] = ["p", "q"];

/// One random cluster model; F2 when `preferences` is set, else F1.
pub fn cluster_model(rng: &mut impl Rng, preferences: bool, n: usize, agents: &[&str]) -> Result<Model, GenError> {
    if n == 0 {
        return Err(GenError::ZeroStates);
    }
    let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let mut m = Model::new(names, ATOMS, agents.iter().copied()).expect("fresh distinct names");
    let k = random_nonempty_subset(rng, &StateSet::full(n));
    m.set_temporal(cluster_temporal(rng, &k));
    for s in 0..n {
        for p in 0..ATOMS.len() {
            m.set_label(s, p, rng.gen_bool(0.5));
        }
    }
    for a in 0..agents.len() {
        m.set_belief(a, kd45_cluster(n, &k)?);
        if preferences {
            let filter = principal_filter(&random_nonempty_subset(rng, &k), &k)?;
            for s in 0..n {
                m.set_hood(HoodKind::Preference, a, s, filter.clone());
            }
        }
    }
    Ok(m)
}

/// A hand-built attempt at a model with a nonempty intention: the intended
/// set lies outside the belief cluster, is reachable from it and is also
/// preferred. No frame-valid model has a nonempty intention (the empty set
/// would have to be intended, then preferred, contradicting P4), so the
/// validator rejects it.
pub fn f3_fixture() -> Model {
    let mut m = Model::new(["s0", "s1"], ATOMS, ["a"]).expect("fixed declarations");
    m.set_label(1, 0, true);
    m.set_belief(0, Relation::from_pairs(2, [(0, 0), (1, 0)]));
    m.set_temporal(Relation::from_pairs(2, [(0, 0), (0, 1), (1, 1)]));
    let goal = StateSet::singleton(2, 1);
    for s in 0..2 {
        m.add_to_hood(HoodKind::Preference, 0, s, goal.clone());
        m.add_to_hood(HoodKind::Preference, 0, s, StateSet::full(2));
        m.add_to_hood(HoodKind::Intention, 0, s, goal.clone());
    }
    m
}

/// `count` validated F1/F2 models of 1 to `max_states` states with atoms
/// `p`, `q` and one or two agents. The F3 fixture is appended only if it
/// passes validation.
pub fn generate_frame_valid_models(seed: u64, count: usize, max_states: usize) -> Result<Vec<LabelledModel>, GenError> {
    if max_states == 0 {
        return Err(GenError::ZeroStates);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count + 1);
    for i in 0..count {
        let family = if i % 2 == 0 { Family::F1 } else { Family::F2 };
        let n = rng.gen_range(1..=max_states);
        let agents: &[&str] = if rng.gen_bool(0.3) { &["a", "b"] } else { &["a"] };
        let model = cluster_model(&mut rng, family == Family::F2, n, agents)?;
        let id = format!("{family:?}-{i:03}");
        gate(&id, &model)?;
        out.push(LabelledModel { id, model });
    }
    let f3 = f3_fixture();
    if validate_model(&f3).passed() {
        out.push(LabelledModel {
            id: "F3-000".into(),
            model: f3,
        });
    }
    Ok(out)
}

fn gate(id: &str, m: &Model) -> Result<(), GenError> {
    let report: ValidationReport = validate_model(m);
    if report.passed() {
        Ok(())
    } else {
        Err(GenError::Rejected {
            id: id.into(),
            report: report.render(m),
        })
    }
}
