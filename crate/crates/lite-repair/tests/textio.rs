use lite_repair::core::{
    Assertion, AssertionSet, Atom, BasicConcept, ConjunctiveQuery, PrioritizedKb, Role, TBox,
    TBoxAxiom, Term, Variable,
};
use lite_repair::textio::{emit_kb, emit_query, parse_kb, parse_query};
use proptest::prelude::*;

const CONCEPTS: [&str; 4] = ["A", "B", "C", "Dx_1"];
const ROLES: [&str; 3] = ["R", "P", "has_part"];
const INDIVIDUALS: [&str; 4] = ["a", "b", "z", "i10"];

fn role() -> impl Strategy<Value = Role> {
    (prop::sample::select(&ROLES[..]), any::<bool>()).prop_map(|(r, inv)| Role::new(r, inv))
}

fn basic() -> impl Strategy<Value = BasicConcept> {
    prop_oneof![
        prop::sample::select(&CONCEPTS[..]).prop_map(BasicConcept::atomic),
        role().prop_map(BasicConcept::exists),
    ]
}

fn axiom() -> impl Strategy<Value = TBoxAxiom> {
    prop_oneof![
        (basic(), basic()).prop_map(|(l, r)| TBoxAxiom::concept(l, r)),
        (basic(), basic()).prop_map(|(l, r)| TBoxAxiom::concept_disjoint(l, r)),
        (role(), role()).prop_map(|(l, r)| TBoxAxiom::role(l, r)),
        (role(), role()).prop_map(|(l, r)| TBoxAxiom::role_disjoint(l, r)),
    ]
}

fn assertion() -> impl Strategy<Value = Assertion> {
    let ind = || prop::sample::select(&INDIVIDUALS[..]);
    prop_oneof![
        (prop::sample::select(&CONCEPTS[..]), ind()).prop_map(|(c, i)| Assertion::concept(c, i)),
        (prop::sample::select(&ROLES[..]), ind(), ind()).prop_map(|(r, s, o)| Assertion::role(r, s, o)),
    ]
}

fn kb() -> impl Strategy<Value = PrioritizedKb> {
    (
        prop::collection::vec(axiom(), 0..6),
        prop::collection::vec(prop::collection::btree_set(assertion(), 0..5), 1..4),
    )
        .prop_filter_map("strata must be consistent", |(axioms, strata)| {
            let tbox: TBox = axioms.into_iter().collect();
            let strata: Vec<AssertionSet> = strata;
            PrioritizedKb::new(tbox, strata).ok()
        })
}

fn term() -> impl Strategy<Value = Term> {
    prop_oneof![
        prop::sample::select(&["x", "y", "w"][..]).prop_map(Term::var),
        prop::sample::select(&INDIVIDUALS[..]).prop_map(Term::individual),
    ]
}

fn query() -> impl Strategy<Value = ConjunctiveQuery> {
    let atom = prop_oneof![
        (prop::sample::select(&CONCEPTS[..]), term()).prop_map(|(c, t)| Atom::concept(c, t)),
        (prop::sample::select(&ROLES[..]), term(), term()).prop_map(|(r, s, o)| Atom::role(r, s, o)),
    ];
    (prop::collection::vec(atom, 1..4), prop::collection::vec(any::<bool>(), 3)).prop_map(|(body, pick)| {
        let vars: Vec<Variable> = ["x", "y", "w"]
            .iter()
            .zip(pick)
            .filter(|(v, keep)| *keep && body.iter().any(|a| a.terms().any(|t| *t == Term::var(v))))
            .map(|(v, _)| Variable::new(v))
            .collect();
        ConjunctiveQuery::new("q", vars, body).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn kb_round_trip(kb in kb()) {
        let text = emit_kb(&kb);
        let parsed = parse_kb(&text).unwrap();
        prop_assert_eq!(&parsed, &kb);
        prop_assert_eq!(emit_kb(&parsed), text);
    }

    #[test]
    fn query_round_trip(q in query()) {
        let text = emit_query(&q);
        let parsed = parse_query(&text).unwrap();
        prop_assert_eq!(&parsed, &q);
        prop_assert_eq!(emit_query(&parsed), text);
    }
}

#[test]
fn empty_sections() {
    let kb = parse_kb("[tbox]\n[stratum 1]\n").unwrap();
    assert!(kb.tbox().axioms().is_empty());
    assert_eq!(kb.stratum_count(), 1);
    assert!(kb.profile().layer(1).is_empty());
}

#[test]
fn query_kinds() {
    use lite_repair::core::QueryKind;
    assert_eq!(parse_query("q(?x) :- R(?x, z)").unwrap().kind(), QueryKind::Instance);
    assert_eq!(parse_query("q() :- A(a)").unwrap().kind(), QueryKind::Ground);
    let q = parse_query("q(?x) :- R(?x,?y), A(?x)").unwrap();
    assert_eq!(q.kind(), QueryKind::Conjunctive);
    assert_eq!(q.existential_variables().len(), 1);
}
