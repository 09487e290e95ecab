#![allow(dead_code)]

use lite_repair_core::*;

pub fn c(concept: &str, ind: &str) -> Assertion {
    Assertion::concept(concept, ind)
}

pub fn r(role: &str, s: &str, o: &str) -> Assertion {
    Assertion::role(role, s, o)
}

pub fn set(items: &[Assertion]) -> AssertionSet {
    items.iter().cloned().collect()
}

pub fn tex() -> TBox {
    let a = BasicConcept::atomic;
    [
        TBoxAxiom::concept_disjoint(a("A"), a("B")),
        TBoxAxiom::concept_disjoint(a("A"), a("E")),
        TBoxAxiom::concept(a("E"), a("D")),
        TBoxAxiom::role(Role::named("R"), Role::named("P")),
    ]
    .into_iter()
    .collect()
}

pub fn ex_strata() -> Vec<AssertionSet> {
    vec![
        set(&[c("A", "a"), r("R", "a", "z"), c("A", "c")]),
        set(&[c("B", "a"), r("R", "b", "z"), c("A", "b")]),
        set(&[c("B", "a"), r("R", "a", "z"), c("B", "c")]),
        set(&[c("E", "e"), r("R", "e", "z"), c("A", "c")]),
        set(&[c("A", "e"), r("R", "e", "z"), c("A", "c"), r("R", "c", "z")]),
    ]
}

pub fn ex_kb() -> PrioritizedKb {
    PrioritizedKb::new(tex(), ex_strata()).unwrap()
}

pub fn ex_query() -> ConjunctiveQuery {
    ConjunctiveQuery::new(
        "q",
        vec![Variable::new("x")],
        vec![Atom::role("R", Term::var("x"), Term::individual("z"))],
    )
    .unwrap()
}

pub fn answers(names: &[&str]) -> std::collections::BTreeSet<AnswerTuple> {
    names.iter().map(|n| AnswerTuple(vec![IndividualName::new(n)])).collect()
}
