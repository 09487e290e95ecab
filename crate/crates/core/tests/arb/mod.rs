//! Random vocabularies, KBs and queries small enough for the exhaustive
//! oracles.

#![allow(dead_code)]

use std::collections::BTreeSet;

use lite_repair_core::*;
use proptest::prelude::*;
use proptest::strategy::Strategy;

pub const CONCEPTS: [&str; 3] = ["A", "B", "C"];
pub const ROLES: [&str; 2] = ["P", "Q"];
pub const INDIVIDUALS: [&str; 3] = ["a", "b", "c"];

pub fn role() -> impl Strategy<Value = Role> {
    (0..ROLES.len(), any::<bool>()).prop_map(|(i, inv)| Role::new(ROLES[i], inv))
}

pub fn basic() -> impl Strategy<Value = BasicConcept> {
    prop_oneof![
        (0..CONCEPTS.len()).prop_map(|i| BasicConcept::atomic(CONCEPTS[i])),
        role().prop_map(BasicConcept::exists),
    ]
}

pub fn axiom() -> impl Strategy<Value = TBoxAxiom> {
    prop_oneof![
        3 => (basic(), basic()).prop_map(|(l, r)| TBoxAxiom::concept(l, r)),
        2 => (basic(), basic()).prop_map(|(l, r)| TBoxAxiom::concept_disjoint(l, r)),
        1 => (role(), role()).prop_map(|(l, r)| TBoxAxiom::role(l, r)),
        1 => (role(), role()).prop_map(|(l, r)| TBoxAxiom::role_disjoint(l, r)),
    ]
}

pub fn tbox() -> impl Strategy<Value = TBox> {
    prop::collection::vec(axiom(), 0..5).prop_map(|v| v.into_iter().collect())
}

pub fn individual() -> impl Strategy<Value = &'static str> {
    (0..INDIVIDUALS.len()).prop_map(|i| INDIVIDUALS[i])
}

pub fn assertion() -> impl Strategy<Value = Assertion> {
    prop_oneof![
        (0..CONCEPTS.len(), individual()).prop_map(|(c, i)| Assertion::concept(CONCEPTS[c], i)),
        (0..ROLES.len(), individual(), individual())
            .prop_map(|(r, s, o)| Assertion::role(ROLES[r], s, o)),
    ]
}

pub fn assertions(max: usize) -> impl Strategy<Value = AssertionSet> {
    prop::collection::btree_set(assertion(), 0..=max)
}

/// Up to 12 assertions spread over 1..=4 layers.
pub fn stratified() -> impl Strategy<Value = StratifiedAssertions> {
    (prop::collection::vec((assertion(), 0..4usize), 0..=12), 1..=4usize).prop_map(|(items, m)| {
        let mut layers = vec![AssertionSet::new(); m];
        for (a, i) in items {
            layers[i % m].insert(a);
        }
        StratifiedAssertions::new(layers)
    })
}

pub fn term() -> impl Strategy<Value = Term> {
    prop_oneof![
        2 => Just(Term::var("x")),
        2 => Just(Term::var("y")),
        1 => Just(Term::var("z")),
        1 => individual().prop_map(Term::individual),
    ]
}

pub fn atom() -> impl Strategy<Value = Atom> {
    prop_oneof![
        (0..CONCEPTS.len(), term()).prop_map(|(c, t)| Atom::concept(CONCEPTS[c], t)),
        (0..ROLES.len(), term(), term()).prop_map(|(r, s, o)| Atom::role(ROLES[r], s, o)),
    ]
}

pub fn query() -> impl Strategy<Value = ConjunctiveQuery> {
    (prop::collection::vec(atom(), 1..=2), 0..3usize).prop_map(|(body, heads)| {
        let vars: BTreeSet<String> = body
            .iter()
            .flat_map(|a| match a {
                Atom::Concept { term, .. } => vec![term.clone()],
                Atom::Role { subject, object, .. } => vec![subject.clone(), object.clone()],
            })
            .filter_map(|t| match t {
                Term::Var(v) => Some(v.as_str().to_string()),
                Term::Individual(_) => None,
            })
            .collect();
        let head = vars.iter().take(heads).map(|v| Variable::new(v)).collect();
        ConjunctiveQuery::new("q", head, body).unwrap()
    })
}

/// Two role atoms meeting in a shared existential variable, the shape that
/// needs atom unification during rewriting.
pub fn join_query() -> impl Strategy<Value = ConjunctiveQuery> {
    (0..ROLES.len(), 0..ROLES.len(), any::<bool>(), any::<bool>(), 0..3usize).prop_map(
        |(p, q, flip_p, flip_q, shape)| {
            let (x, y, z) = (Term::var("x"), Term::var("y"), Term::var("z"));
            let mk = |r: usize, flip: bool, s: Term, o: Term| {
                if flip {
                    Atom::role(ROLES[r], o, s)
                } else {
                    Atom::role(ROLES[r], s, o)
                }
            };
            let body = vec![mk(p, flip_p, x.clone(), y.clone()), mk(q, flip_q, z.clone(), y.clone())];
            let head = match shape {
                0 => vec![Variable::new("x")],
                1 => vec![Variable::new("x"), Variable::new("z")],
                _ => vec![],
            };
            ConjunctiveQuery::new("q", head, body).unwrap()
        },
    )
}

pub fn config() -> ProptestConfig {
    ProptestConfig::with_cases(1000)
}

pub fn check_budget(m: usize) -> usize {
    (usize::BITS - (m.max(1) - 1).leading_zeros()) as usize + 2
}
