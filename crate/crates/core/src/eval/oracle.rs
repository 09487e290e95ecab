//! Brute-force reference implementations for small inputs. None of them goes
//! through the negative closure or the query rewriter, except
//! [`maximal_repairs`], which only needs a consistency predicate.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::error::OracleTooLarge;
use crate::model::{Assertion, AssertionSet, BasicConcept, ConceptName, Role, RoleName, StratifiedAssertions, TBox, TBoxAxiom};
use crate::query::{AnswerTuple, Atom, ConjunctiveQuery, Term};
use crate::reasoner::NegativeClosure;

pub const CHASE_LIMIT: usize = 64;
pub const SUBSET_LIMIT: usize = 14;

fn guard(size: usize, limit: usize) -> Result<(), OracleTooLarge> {
    if size > limit {
        Err(OracleTooLarge { size, limit })
    } else {
        Ok(())
    }
}

/// Domain elements: named individuals first, then labelled nulls.
type Element = usize;

/// A finite prefix of the restricted chase of `⟨T, A⟩` under the positive
/// inclusions.
struct Chase {
    named: usize,
    depth: Vec<usize>,
    concepts: BTreeSet<(ConceptName, Element)>,
    roles: BTreeSet<(RoleName, Element, Element)>,
}

impl Chase {
    fn build(tbox: &TBox, assertions: &AssertionSet) -> Self {
        let mut names: BTreeMap<&crate::model::IndividualName, Element> = BTreeMap::new();
        for a in assertions {
            for i in a.individuals() {
                let next = names.len();
                names.entry(i).or_insert(next);
            }
        }
        let mut chase = Chase {
            named: names.len(),
            depth: alloc::vec![0; names.len()],
            concepts: BTreeSet::new(),
            roles: BTreeSet::new(),
        };
        for a in assertions {
            match a {
                Assertion::Concept {
                    concept,
                    individual,
                } => {
                    chase.concepts.insert((concept.clone(), names[individual]));
                }
                Assertion::Role {
                    role,
                    subject,
                    object,
                } => {
                    chase.roles.insert((role.clone(), names[subject], names[object]));
                }
            }
        }
        let max_depth = tbox.len() + 1;
        loop {
            let mut changed = false;
            for axiom in tbox.positive() {
                match axiom {
                    TBoxAxiom::ConceptInclusion { lhs, rhs, .. } => {
                        let members: Vec<Element> = (0..chase.depth.len())
                            .filter(|&e| chase.holds(lhs, e))
                            .collect();
                        for e in members {
                            if chase.holds(rhs, e) {
                                continue;
                            }
                            match rhs {
                                BasicConcept::Atomic(c) => {
                                    chase.concepts.insert((c.clone(), e));
                                    changed = true;
                                }
                                BasicConcept::Exists(r) => {
                                    let d = chase.depth[e] + 1;
                                    if d > max_depth {
                                        continue;
                                    }
                                    let n = chase.depth.len();
                                    chase.depth.push(d);
                                    chase.add_role(r, e, n);
                                    changed = true;
                                }
                            }
                        }
                    }
                    TBoxAxiom::RoleInclusion { lhs, rhs, .. } => {
                        let pairs: Vec<(Element, Element)> = chase.pairs(lhs).collect();
                        for (x, y) in pairs {
                            if !chase.has_pair(rhs, x, y) {
                                chase.add_role(rhs, x, y);
                                changed = true;
                            }
                        }
                    }
                }
            }
            if !changed {
                return chase;
            }
        }
    }

    fn add_role(&mut self, r: &Role, x: Element, y: Element) {
        let (s, o) = if r.inverted { (y, x) } else { (x, y) };
        self.roles.insert((r.name.clone(), s, o));
    }

    fn pairs<'a>(&'a self, r: &'a Role) -> impl Iterator<Item = (Element, Element)> + 'a {
        self.roles
            .iter()
            .filter(move |(p, _, _)| *p == r.name)
            .map(move |(_, s, o)| if r.inverted { (*o, *s) } else { (*s, *o) })
    }

    fn has_pair(&self, r: &Role, x: Element, y: Element) -> bool {
        let (s, o) = if r.inverted { (y, x) } else { (x, y) };
        self.roles.contains(&(r.name.clone(), s, o))
    }

    fn holds(&self, b: &BasicConcept, e: Element) -> bool {
        match b {
            BasicConcept::Atomic(c) => self.concepts.contains(&(c.clone(), e)),
            BasicConcept::Exists(r) => self.pairs(r).any(|(x, _)| x == e),
        }
    }

    fn violates(&self, tbox: &TBox) -> bool {
        tbox.axioms().iter().filter(|a| a.is_negative()).any(|axiom| match axiom {
            TBoxAxiom::ConceptInclusion { lhs, rhs, .. } => {
                (0..self.depth.len()).any(|e| self.holds(lhs, e) && self.holds(rhs, e))
            }
            TBoxAxiom::RoleInclusion { lhs, rhs, .. } => {
                self.pairs(lhs).any(|(x, y)| self.has_pair(rhs, x, y))
            }
        })
    }
}

/// Consistency by building a chase prefix and checking every negative
/// inclusion on it directly.
pub fn is_consistent(tbox: &TBox, assertions: &AssertionSet) -> Result<bool, OracleTooLarge> {
    guard(assertions.len(), CHASE_LIMIT)?;
    Ok(!Chase::build(tbox, assertions).violates(tbox))
}

/// Certain answers by matching the query directly against the chase prefix;
/// negative inclusions are ignored.
pub fn evaluate(query: &ConjunctiveQuery, tbox: &TBox, assertions: &AssertionSet) -> Result<BTreeSet<AnswerTuple>, OracleTooLarge> {
    guard(assertions.len(), CHASE_LIMIT)?;
    let chase = Chase::build(tbox, assertions);
    let mut names: BTreeMap<Element, crate::model::IndividualName> = BTreeMap::new();
    let mut ids: BTreeMap<crate::model::IndividualName, Element> = BTreeMap::new();
    for a in assertions {
        for i in a.individuals() {
            let next = ids.len();
            ids.entry(i.clone()).or_insert(next);
        }
    }
    for (i, e) in &ids {
        names.insert(*e, i.clone());
    }

    let mut vars: Vec<&crate::query::Variable> = Vec::new();
    for atom in query.body() {
        let terms: Vec<&Term> = match atom {
            Atom::Concept { term, .. } => alloc::vec![term],
            Atom::Role {
                subject, object, ..
            } => alloc::vec![subject, object],
        };
        for t in terms {
            if let Term::Var(v) = t {
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
        }
    }

    let elements = chase.depth.len();
    let mut out = BTreeSet::new();
    let mut assignment = alloc::vec![0usize; vars.len()];
    // Odometer over all assignments of variables to elements.
    loop {
        let value = |t: &Term| -> Option<Element> {
            match t {
                Term::Var(v) => Some(assignment[vars.iter().position(|w| *w == v).unwrap()]),
                Term::Individual(i) => ids.get(i).copied(),
            }
        };
        let matched = query.body().iter().all(|atom| match atom {
            Atom::Concept { concept, term } => {
                value(term).is_some_and(|e| chase.concepts.contains(&(concept.clone(), e)))
            }
            Atom::Role {
                role,
                subject,
                object,
            } => match (value(subject), value(object)) {
                (Some(s), Some(o)) => chase.roles.contains(&(role.clone(), s, o)),
                _ => false,
            },
        });
        if matched {
            let tuple: Option<Vec<_>> = query
                .head()
                .iter()
                .map(|t| value(t).filter(|&e| e < chase.named).map(|e| names[&e].clone()))
                .collect();
            if let Some(t) = tuple {
                out.insert(AnswerTuple(t));
            }
        }
        let mut i = 0;
        while i < assignment.len() {
            assignment[i] += 1;
            if assignment[i] < elements {
                break;
            }
            assignment[i] = 0;
            i += 1;
        }
        if i == assignment.len() || elements == 0 {
            break;
        }
    }
    Ok(out)
}

/// Minimal inconsistent subsets of size at most `max_size`, by exhaustive
/// enumeration with [`is_consistent`].
pub fn minimal_inconsistent_subsets(
    tbox: &TBox,
    assertions: &AssertionSet,
    max_size: usize,
) -> Result<BTreeSet<AssertionSet>, OracleTooLarge> {
    guard(assertions.len(), SUBSET_LIMIT)?;
    let items: Vec<&Assertion> = assertions.iter().collect();
    let n = items.len();
    let mut masks: Vec<u32> = (1u32..(1 << n)).filter(|m| m.count_ones() as usize <= max_size).collect();
    masks.sort_by_key(|m| m.count_ones());
    let mut found: Vec<u32> = Vec::new();
    for mask in masks {
        if found.iter().any(|f| f & mask == *f) {
            continue;
        }
        let subset: AssertionSet = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| items[i].clone()).collect();
        if !is_consistent(tbox, &subset)? {
            found.push(mask);
        }
    }
    Ok(found
        .into_iter()
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).map(|i| items[i].clone()).collect())
        .collect())
}

/// All ⊆-maximal consistent subsets of `assertions`.
pub fn maximal_repairs(closure: &NegativeClosure, assertions: &AssertionSet) -> Result<Vec<AssertionSet>, OracleTooLarge> {
    guard(assertions.len(), SUBSET_LIMIT)?;
    let items: Vec<&Assertion> = assertions.iter().collect();
    let n = items.len();
    let mut masks: Vec<u32> = (0u32..(1 << n)).collect();
    masks.sort_by_key(|m| core::cmp::Reverse(m.count_ones()));
    let mut found: Vec<u32> = Vec::new();
    for mask in masks {
        if found.iter().any(|f| f & mask == mask) {
            continue;
        }
        let subset = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| items[i]);
        if closure.is_consistent(subset) {
            found.push(mask);
        }
    }
    Ok(found
        .into_iter()
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).map(|i| items[i].clone()).collect())
        .collect())
}

/// Consistency rank by scanning prefixes `k = 1, 2, …` with
/// [`is_consistent`].
pub fn cns_rank(tbox: &TBox, s: &StratifiedAssertions) -> Result<usize, OracleTooLarge> {
    let mut rank = 0;
    for k in 1..=s.len() {
        let prefix = s.union_up_to(k).expect("k ≤ m");
        if !is_consistent(tbox, &prefix)? {
            break;
        }
        rank = k;
    }
    Ok(rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::query::Variable;
    use alloc::vec;

    fn tex() -> TBox {
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

    fn set(items: &[Assertion]) -> AssertionSet {
        items.iter().cloned().collect()
    }

    #[test]
    fn disjoint_pair_is_inconsistent() {
        let abox = set(&[Assertion::concept("A", "a"), Assertion::concept("B", "a")]);
        assert!(!is_consistent(&tex(), &abox).unwrap());
        let mis = minimal_inconsistent_subsets(&tex(), &abox, 3).unwrap();
        assert_eq!(mis.len(), 1);
    }

    #[test]
    fn chase_applies_role_inclusion() {
        let q = ConjunctiveQuery::new(
            "q",
            vec![Variable::new("x")],
            vec![Atom::role("P", Term::var("x"), Term::individual("z"))],
        )
        .unwrap();
        let answers = evaluate(&q, &tex(), &set(&[Assertion::role("R", "a", "z")])).unwrap();
        assert_eq!(answers.into_iter().collect::<Vec<_>>(), vec![AnswerTuple(vec!["a".into()])]);
    }

    #[test]
    fn inconsistency_through_a_null() {
        // A ⊑ ∃R, ∃R⁻ ⊑ B, B ⊑ ¬C, ∃R⁻ ⊑ C: any A-instance is contradictory.
        let a = BasicConcept::atomic;
        let inv = BasicConcept::exists(Role::new("R", true));
        let t: TBox = [
            TBoxAxiom::concept(a("A"), BasicConcept::exists(Role::named("R"))),
            TBoxAxiom::concept(inv.clone(), a("B")),
            TBoxAxiom::concept_disjoint(a("B"), a("C")),
            TBoxAxiom::concept(inv, a("C")),
        ]
        .into_iter()
        .collect();
        assert!(!is_consistent(&t, &set(&[Assertion::concept("A", "a")])).unwrap());
        assert!(is_consistent(&t, &set(&[Assertion::concept("B", "a")])).unwrap());
    }

    #[test]
    fn maximal_repairs_of_a_pair() {
        let closure = NegativeClosure::new(&tex());
        let abox = set(&[Assertion::concept("A", "a"), Assertion::concept("B", "a")]);
        let repairs = maximal_repairs(&closure, &abox).unwrap();
        assert_eq!(repairs.len(), 2);
        assert!(repairs.iter().all(|r| r.len() == 1));
        let consistent = set(&[Assertion::concept("A", "a")]);
        assert_eq!(maximal_repairs(&closure, &consistent).unwrap(), vec![consistent.clone()]);
    }

    #[test]
    fn size_guard() {
        let big: AssertionSet = (0..15).map(|i| Assertion::concept("A", alloc::format!("i{i}").as_str())).collect();
        let closure = NegativeClosure::new(&tex());
        assert!(maximal_repairs(&closure, &big).is_err());
    }
}
