//! Consistency rank and the π / ℓ / nd repair strategies over stratified
//! assertion sets, plus the before/after-querying pipelines.

use alloc::borrow::Cow;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::model::{Assertion, AssertionSet, PrioritizedKb, StratifiedAssertions};
use crate::query::{AboxIndex, AnswerProfile, AnswerTuple, ConjunctiveQuery, RewrittenQuery, SupportMode};
use crate::reasoner::NegativeClosure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Strategy {
    /// Possibilistic: the consistent prefix.
    Pi,
    /// Linear: the prefix plus every later stratum that still fits.
    Linear,
    /// Non-defeated: cumulative union of prefix free sets.
    NonDefeated,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Pi, Strategy::Linear, Strategy::NonDefeated];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Pi => "pi",
            Strategy::Linear => "linear",
            Strategy::NonDefeated => "nd",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pipeline {
    /// Query every stratum first, then repair the answer supports.
    AfterQuery,
    /// Repair the raw strata, then query the repair.
    BeforeQuery,
}

impl Pipeline {
    pub const ALL: [Pipeline; 2] = [Pipeline::AfterQuery, Pipeline::BeforeQuery];

    pub fn as_str(self) -> &'static str {
        match self {
            Pipeline::AfterQuery => "after-query",
            Pipeline::BeforeQuery => "before-query",
        }
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankOutcome {
    pub rank: usize,
    /// Consistency tests performed.
    pub checks: usize,
}

/// A consistent subset of the input strata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Repair {
    pub assertions: AssertionSet,
    pub strategy: Strategy,
    pub rank: usize,
    /// Consistency tests (and free-set computations, for nd) performed.
    pub checks: usize,
}

/// Largest `k` such that the first `k` layers are jointly consistent.
///
/// One check on the whole profile, then a binary search on the boundary
/// between a consistent prefix `lo` and an inconsistent prefix `hi`.
pub fn cns_rank(closure: &NegativeClosure, s: &StratifiedAssertions) -> RankOutcome {
    let m = s.len();
    let mut checks = 1;
    if closure.is_consistent(s.prefix(m)) {
        return RankOutcome { rank: m, checks };
    }
    fn search(closure: &NegativeClosure, s: &StratifiedAssertions, lo: usize, hi: usize, checks: &mut usize) -> usize {
        if hi - lo <= 1 {
            return lo;
        }
        let mid = lo + (hi - lo) / 2;
        *checks += 1;
        if closure.is_consistent(s.prefix(mid)) {
            search(closure, s, mid, hi, checks)
        } else {
            search(closure, s, lo, mid, checks)
        }
    }
    let rank = search(closure, s, 0, m, &mut checks);
    RankOutcome { rank, checks }
}

pub fn pi_repair(closure: &NegativeClosure, s: &StratifiedAssertions) -> Repair {
    let RankOutcome { rank, checks } = cns_rank(closure, s);
    Repair {
        assertions: s.prefix(rank).cloned().collect(),
        strategy: Strategy::Pi,
        rank,
        checks,
    }
}

pub fn linear_repair(closure: &NegativeClosure, s: &StratifiedAssertions) -> Repair {
    linear_repair_observed(closure, s, &mut |_, _| {})
}

/// [`linear_repair`], calling `observer(i, accumulated)` after stratum `i`
/// has been accepted or rejected.
pub fn linear_repair_observed(
    closure: &NegativeClosure,
    s: &StratifiedAssertions,
    observer: &mut dyn FnMut(usize, &AssertionSet),
) -> Repair {
    let RankOutcome { rank, mut checks } = cns_rank(closure, s);
    let mut acc: AssertionSet = s.prefix(rank).cloned().collect();
    for i in rank + 1..=s.len() {
        let layer = s.layer(i);
        checks += 1;
        if closure.is_consistent(acc.iter().chain(layer)) {
            acc.extend(layer.iter().cloned());
        }
        observer(i, &acc);
    }
    Repair {
        assertions: acc,
        strategy: Strategy::Linear,
        rank,
        checks,
    }
}

/// Non-defeated repair. Prefixes up to the rank are entirely free, so they
/// contribute π; for the remaining prefixes, an assertion of priority `p` is
/// free in prefix `k` iff `p ≤ k` and every conflict containing it reaches
/// beyond `k`. A single conflict computation over the whole profile is
/// enough.
pub fn nd_repair(closure: &NegativeClosure, s: &StratifiedAssertions) -> Repair {
    let RankOutcome { rank, checks } = cns_rank(closure, s);
    let m = s.len();
    let all = s.union_all();
    let mut priority: BTreeMap<&Assertion, usize> = BTreeMap::new();
    for (i, layer) in s.layers().iter().enumerate() {
        for a in layer {
            priority.entry(a).or_insert(i + 1);
        }
    }
    let conflicts = closure.conflicts(&all);
    // Smallest prefix in which some conflict of the assertion appears.
    let mut defeated_from: BTreeMap<&Assertion, usize> = BTreeMap::new();
    for c in &conflicts {
        let reach = c.assertions().iter().map(|a| priority[a]).max().unwrap_or(0);
        for a in c.assertions() {
            let e = defeated_from.entry(a).or_insert(usize::MAX);
            *e = (*e).min(reach);
        }
    }
    let assertions = priority
        .iter()
        .filter(|(a, &p)| {
            if p <= rank {
                return true;
            }
            let first = p.max(rank + 1);
            first <= m && first < defeated_from.get(*a).copied().unwrap_or(usize::MAX)
        })
        .map(|(a, _)| (*a).clone())
        .collect();
    Repair {
        assertions,
        strategy: Strategy::NonDefeated,
        rank,
        checks: checks + 1,
    }
}

/// `nd_k = free(X_1) ∪ … ∪ free(X_1 ∪ … ∪ X_k)` for `k = 1..m`, computed
/// directly from the definition.
pub fn nd_prefix_table(closure: &NegativeClosure, s: &StratifiedAssertions) -> Vec<AssertionSet> {
    let mut acc = AssertionSet::new();
    (1..=s.len())
        .map(|k| {
            let prefix: AssertionSet = s.prefix(k).cloned().collect();
            acc.extend(closure.free_set(&prefix));
            acc.clone()
        })
        .collect()
}

pub fn run_strategy(closure: &NegativeClosure, s: &StratifiedAssertions, strategy: Strategy) -> Repair {
    match strategy {
        Strategy::Pi => pi_repair(closure, s),
        Strategy::Linear => linear_repair(closure, s),
        Strategy::NonDefeated => nd_repair(closure, s),
    }
}

/// Result of one strategy × pipeline run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepairOutcome<'e> {
    pub repair: Repair,
    pub pipeline: Pipeline,
    /// What the strategy ran on: the supports (after-query) or the strata
    /// (before-query).
    pub input: Cow<'e, StratifiedAssertions>,
    pub answers: BTreeSet<AnswerTuple>,
}

impl RepairOutcome<'_> {
    /// The assertions the strategy chose from.
    pub fn universe(&self) -> AssertionSet {
        self.input.union_all()
    }

    pub fn into_owned(self) -> RepairOutcome<'static> {
        RepairOutcome {
            repair: self.repair,
            pipeline: self.pipeline,
            input: Cow::Owned(self.input.into_owned()),
            answers: self.answers,
        }
    }
}

/// A knowledge base with indexes built once and shared by every run.
#[derive(Clone, Debug)]
pub struct Engine {
    kb: PrioritizedKb,
    strata: Vec<AboxIndex>,
    union: AboxIndex,
}

impl Engine {
    pub fn new(kb: PrioritizedKb) -> Self {
        let strata = kb.profile().layers().iter().map(AboxIndex::new).collect();
        let union = AboxIndex::new(kb.profile().layers().iter().flatten());
        Engine { kb, strata, union }
    }

    pub fn kb(&self) -> &PrioritizedKb {
        &self.kb
    }

    pub fn closure(&self) -> &NegativeClosure {
        self.kb.closure()
    }

    pub fn rewrite(&self, query: &ConjunctiveQuery) -> RewrittenQuery {
        RewrittenQuery::new(query, self.kb.tbox())
    }

    pub fn profile(&self, query: &RewrittenQuery, mode: SupportMode) -> AnswerProfile {
        AnswerProfile::build(query, &self.strata, mode)
    }

    /// Answers over the strata ignoring consistency, `S_1 ∪ … ∪ S_m`.
    pub fn raw_answers(&self, query: &RewrittenQuery) -> BTreeSet<AnswerTuple> {
        self.strata.iter().flat_map(|ix| query.evaluate(ix)).collect()
    }

    /// Rewrites `query` and runs one strategy through one pipeline.
    pub fn run(&self, query: &ConjunctiveQuery, strategy: Strategy, pipeline: Pipeline, mode: SupportMode) -> RepairOutcome<'_> {
        self.run_rewritten(&self.rewrite(query), strategy, pipeline, mode)
    }

    pub fn run_rewritten(
        &self,
        query: &RewrittenQuery,
        strategy: Strategy,
        pipeline: Pipeline,
        mode: SupportMode,
    ) -> RepairOutcome<'_> {
        let closure = self.closure();
        match pipeline {
            Pipeline::AfterQuery => {
                let profile = self.profile(query, mode);
                let repair = run_strategy(closure, profile.supports(), strategy);
                let answers = profile.answers_from_assertions(&repair.assertions);
                RepairOutcome {
                    answers,
                    input: Cow::Owned(profile.into_supports()),
                    repair,
                    pipeline,
                }
            }
            Pipeline::BeforeQuery => {
                let repair = run_strategy(closure, self.kb.profile(), strategy);
                let answers = query.evaluate_filtered(&self.union, &|a| repair.assertions.contains(a));
                RepairOutcome {
                    answers,
                    input: Cow::Borrowed(self.kb.profile()),
                    repair,
                    pipeline,
                }
            }
        }
    }
}

/// One-shot convenience over [`Engine::run`].
pub fn repair_answers(
    query: &ConjunctiveQuery,
    kb: &PrioritizedKb,
    strategy: Strategy,
    pipeline: Pipeline,
    mode: SupportMode,
) -> RepairOutcome<'static> {
    Engine::new(kb.clone()).run(query, strategy, pipeline, mode).into_owned()
}
