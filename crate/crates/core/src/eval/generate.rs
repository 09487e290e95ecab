//! Synthetic prioritized knowledge bases with an exact number of conflicts.
//!
//! Vocabulary: a negative concept `N`, a chain of positive concepts
//! `T0 ⊒ P0 ⊒ P1 ⊒ …` with `P0` disjoint from `N`, further neutral concepts
//! `Tj ⊑ T0`, and roles `r0 ⊒ r1 ⊒ …` with `∃r0 ⊑ T0`. Conflicts only arise
//! between `N(x)` and `Pj(x)`.
//!
//! Individuals `i0 .. i{e-1}` (the first half) are reserved for conflict
//! clusters: a cluster on `x` is `N(x)` plus `t` positive assertions on `x`
//! placed in other strata, contributing exactly `t` conflicts. The remaining
//! assertions are benign and never touch `N`; positive benign assertions only
//! use the other half of the individuals.
//!
//! Clusters and benign assertions come from two independent streams of the
//! seed, so specs that differ only in `k` share the leading clusters and a
//! common benign prefix.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::GenError;
use crate::model::{
    Assertion, AssertionSet, BasicConcept, IndividualName, PrioritizedKb, Role, TBox, TBoxAxiom,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSpec {
    /// Total number of assertions `N` (distinct across strata).
    pub assertions: usize,
    pub strata: usize,
    /// Exact number of minimal conflicts `k` in the union of strata.
    pub conflicts: usize,
    /// Concept names, including `N`; at least 3.
    pub concepts: usize,
    pub roles: usize,
    pub individuals: usize,
    pub seed: u64,
}

impl GenSpec {
    /// Default vocabulary: 12 concepts, 3 roles, `max(N/4, 4)` individuals.
    pub fn new(assertions: usize, strata: usize, conflicts: usize, seed: u64) -> Self {
        GenSpec {
            assertions,
            strata,
            conflicts,
            concepts: 12,
            roles: 3,
            individuals: (assertions / 4).max(4),
            seed,
        }
    }

    fn positive_count(&self) -> usize {
        self.concepts - 1 - self.neutral_count()
    }

    fn neutral_count(&self) -> usize {
        ((self.concepts - 1) / 4).max(1)
    }

    fn cluster_slots(&self) -> usize {
        self.individuals / 2
    }
}

#[derive(Clone, Debug)]
pub struct Generated {
    pub kb: PrioritizedKb,
    /// Cluster individuals in injection order.
    pub clusters: Vec<IndividualName>,
}

fn positive(j: usize) -> String {
    format!("P{j}")
}

fn neutral(j: usize) -> String {
    format!("T{j}")
}

fn role(j: usize) -> String {
    format!("r{j}")
}

fn individual(j: usize) -> String {
    format!("i{j}")
}

pub fn template_tbox(spec: &GenSpec) -> TBox {
    let mut tbox = TBox::new();
    let a = |s: String| BasicConcept::atomic(s.as_str());
    tbox.push(TBoxAxiom::concept_disjoint(a(positive(0)), BasicConcept::atomic("N")));
    for j in 1..spec.positive_count() {
        tbox.push(TBoxAxiom::concept(a(positive(j)), a(positive(j - 1))));
    }
    tbox.push(TBoxAxiom::concept(a(positive(0)), a(neutral(0))));
    for j in 1..spec.neutral_count() {
        tbox.push(TBoxAxiom::concept(a(neutral(j)), a(neutral(0))));
    }
    tbox.push(TBoxAxiom::concept(
        BasicConcept::exists(Role::named(role(0).as_str())),
        a(neutral(0)),
    ));
    for j in 1..spec.roles {
        tbox.push(TBoxAxiom::role(
            Role::named(role(j).as_str()),
            Role::named(role(0).as_str()),
        ));
    }
    tbox
}

struct Cluster {
    individual: usize,
    negative_stratum: usize,
    /// (positive concept, stratum), already truncated to the cluster's share.
    positives: Vec<(usize, usize)>,
}

fn plan_clusters(spec: &GenSpec) -> Result<Vec<Cluster>, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(1);
    let p = spec.positive_count();
    let mut slots: Vec<usize> = (0..spec.cluster_slots()).collect();
    slots.shuffle(&mut rng);
    let mut clusters = Vec::new();
    let mut remaining = spec.conflicts;
    for &x in &slots {
        if remaining == 0 {
            break;
        }
        // Draw the full cluster before truncating so that the stream does
        // not depend on `k`.
        let size = rng.gen_range(1..=p);
        let negative_stratum = rng.gen_range(0..spec.strata);
        let mut concepts: Vec<usize> = (0..p).collect();
        concepts.shuffle(&mut rng);
        let mut positives: Vec<(usize, usize)> = concepts[..size]
            .iter()
            .map(|&c| {
                let mut s = rng.gen_range(0..spec.strata - 1);
                if s >= negative_stratum {
                    s += 1;
                }
                (c, s)
            })
            .collect();
        positives.truncate(size.min(remaining));
        remaining -= positives.len();
        clusters.push(Cluster {
            individual: x,
            negative_stratum,
            positives,
        });
    }
    if remaining > 0 {
        return Err(GenError::Infeasible(format!(
            "{} conflicts need more than {} cluster individuals",
            spec.conflicts,
            spec.cluster_slots()
        )));
    }
    Ok(clusters)
}

/// Builds the KB described by `spec`; a pure function of `spec`.
pub fn generate(spec: &GenSpec) -> Result<Generated, GenError> {
    if spec.strata == 0 {
        return Err(GenError::Infeasible("at least one stratum is required".into()));
    }
    if spec.concepts < 3 || spec.roles == 0 {
        return Err(GenError::Infeasible(
            "vocabulary needs at least 3 concepts and 1 role".into(),
        ));
    }
    if spec.conflicts > 0 && spec.strata < 2 {
        return Err(GenError::Infeasible(
            "conflicts need at least two strata".into(),
        ));
    }
    if spec.individuals < 2 {
        return Err(GenError::Infeasible("at least two individuals are required".into()));
    }
    let clusters = plan_clusters(spec)?;
    let used: usize = clusters.iter().map(|c| c.positives.len() + 1).sum();
    if used > spec.assertions {
        return Err(GenError::Infeasible(format!(
            "{} conflicts need {used} assertions but only {} are allowed",
            spec.conflicts, spec.assertions
        )));
    }

    let mut strata = alloc::vec![AssertionSet::new(); spec.strata];
    let mut seen: BTreeSet<Assertion> = BTreeSet::new();
    for c in &clusters {
        let x = individual(c.individual);
        let n = Assertion::concept("N", x.as_str());
        seen.insert(n.clone());
        strata[c.negative_stratum].insert(n);
        for &(concept, s) in &c.positives {
            let a = Assertion::concept(positive(concept).as_str(), x.as_str());
            seen.insert(a.clone());
            strata[s].insert(a);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(0);
    let benign = spec.assertions - used;
    let slots = spec.cluster_slots();
    let mut added = 0;
    let mut attempts = 0usize;
    let limit = 64 * spec.assertions + 1024;
    while added < benign {
        attempts += 1;
        if attempts > limit {
            return Err(GenError::Infeasible(format!(
                "vocabulary too small for {} distinct assertions",
                spec.assertions
            )));
        }
        let kind = rng.gen_range(0..20);
        let stratum = rng.gen_range(0..spec.strata);
        let a = if kind < 7 {
            let x = rng.gen_range(slots..spec.individuals);
            let c = rng.gen_range(0..spec.positive_count());
            Assertion::concept(positive(c).as_str(), individual(x).as_str())
        } else if kind < 13 {
            let x = rng.gen_range(0..spec.individuals);
            let c = rng.gen_range(0..spec.neutral_count());
            Assertion::concept(neutral(c).as_str(), individual(x).as_str())
        } else {
            let x = rng.gen_range(0..spec.individuals);
            let y = rng.gen_range(0..spec.individuals);
            let r = rng.gen_range(0..spec.roles);
            Assertion::role(role(r).as_str(), individual(x).as_str(), individual(y).as_str())
        };
        if seen.insert(a.clone()) {
            strata[stratum].insert(a);
            added += 1;
        }
    }

    let kb = PrioritizedKb::new(template_tbox(spec), strata)
        .map_err(|e| GenError::Infeasible(format!("generated KB rejected: {e}")))?;
    Ok(Generated {
        kb,
        clusters: clusters
            .iter()
            .map(|c| IndividualName::new(&individual(c.individual)))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_conflicts_and_size() {
        let g = generate(&GenSpec::new(20, 3, 5, 1)).unwrap();
        let all = g.kb.profile().union_all();
        assert_eq!(all.len(), 20);
        assert_eq!(g.kb.closure().conflicts(&all).len(), 5);
    }

    #[test]
    fn conflict_free_flat_kb() {
        let g = generate(&GenSpec::new(10, 1, 0, 7)).unwrap();
        assert_eq!(g.kb.stratum_count(), 1);
        assert!(g.kb.closure().is_consistent(g.kb.profile().layer(1)));
        assert!(g.clusters.is_empty());
    }

    #[test]
    fn infeasible_specs() {
        assert!(generate(&GenSpec::new(10, 1, 3, 0)).is_err());
        assert!(generate(&GenSpec::new(10, 3, 500, 0)).is_err());
        assert!(generate(&GenSpec::new(10, 0, 0, 0)).is_err());
    }

    #[test]
    fn clusters_are_shared_across_conflict_budgets() {
        let small = generate(&GenSpec::new(200, 4, 10, 3)).unwrap();
        let large = generate(&GenSpec::new(200, 4, 40, 3)).unwrap();
        assert!(large.clusters.starts_with(&small.clusters[..small.clusters.len() - 1]));
    }
}
