//! Syntactic consistency machinery for DL-Lite_R.
//!
//! A TBox is compiled once into its [`NegativeClosure`]: the saturation of
//! its negative inclusions under its positive ones. With the closure in
//! hand, an assertion set is inconsistent exactly when one assertion
//! instantiates an unsatisfiable basic concept or role, or two assertions
//! instantiate a disjoint pair on the same individual (resp. the same pair
//! of individuals). Minimal conflicts therefore never exceed two assertions
//! and can be enumerated by grouping assertions per individual.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::model::{Assertion, AssertionSet, BasicConcept, IndividualName, Role, TBox, TBoxAxiom};

/// A minimal inconsistent subset (one or two assertions, sorted).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Conflict(Vec<Assertion>);

impl Conflict {
    pub fn single(a: Assertion) -> Self {
        Conflict(alloc::vec![a])
    }

    pub fn pair(a: Assertion, b: Assertion) -> Self {
        if a <= b {
            Conflict(alloc::vec![a, b])
        } else {
            Conflict(alloc::vec![b, a])
        }
    }

    pub fn assertions(&self) -> &[Assertion] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, a: &Assertion) -> bool {
        self.0.contains(a)
    }
}

impl fmt::Debug for Conflict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Conflict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("}")
    }
}

/// Closed set of disjointness constraints derived from a TBox.
///
/// Concept pairs are stored unordered; role pairs are stored up to swapping
/// and up to inverting both sides (`R disj S` iff `R- disj S-`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NegativeClosure {
    concept_pairs: BTreeSet<(BasicConcept, BasicConcept)>,
    role_pairs: BTreeSet<(Role, Role)>,
    constrained_concepts: BTreeSet<BasicConcept>,
    constrained_roles: BTreeSet<Role>,
}

fn concept_key(a: &BasicConcept, b: &BasicConcept) -> (BasicConcept, BasicConcept) {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

fn role_key(a: &Role, b: &Role) -> (Role, Role) {
    let direct = if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    let (ia, ib) = (a.inverse(), b.inverse());
    let inverted = if ia <= ib { (ia, ib) } else { (ib, ia) };
    core::cmp::min(direct, inverted)
}

/// Reflexive-transitive "is subsumed by" relation, stored as
/// `super -> {sub : sub ⊑* super}`.
struct Hierarchy<T: Ord + Clone> {
    subsumees: BTreeMap<T, BTreeSet<T>>,
}

impl<T: Ord + Clone> Hierarchy<T> {
    fn new(nodes: &BTreeSet<T>, edges: &[(T, T)]) -> Self {
        let mut subsumees: BTreeMap<T, BTreeSet<T>> = nodes
            .iter()
            .map(|n| (n.clone(), core::iter::once(n.clone()).collect()))
            .collect();
        loop {
            let mut changed = false;
            for (sub, sup) in edges {
                let below: Vec<T> = subsumees[sub].iter().cloned().collect();
                let target = subsumees.get_mut(sup).expect("node registered");
                for b in below {
                    changed |= target.insert(b);
                }
            }
            if !changed {
                break;
            }
        }
        Hierarchy { subsumees }
    }

    fn below(&self, node: &T) -> impl Iterator<Item = &T> {
        self.subsumees.get(node).into_iter().flatten()
    }
}

impl NegativeClosure {
    /// Saturates the negative inclusions of `tbox`:
    ///
    /// * `B1 ⊑ B2`, `B2 disj B3` gives `B1 disj B3`;
    /// * `R1 ⊑ R2` induces `∃R1 ⊑ ∃R2` and `∃R1- ⊑ ∃R2-` first;
    /// * role disjointness propagates through role inclusions;
    /// * a role is unsatisfiable as soon as one of `R`, `∃R`, `∃R-` is, and
    ///   then all three are.
    pub fn new(tbox: &TBox) -> Self {
        let mut concepts: BTreeSet<BasicConcept> = BTreeSet::new();
        let mut roles: BTreeSet<Role> = BTreeSet::new();
        let mut concept_edges = Vec::new();
        let mut role_edges = Vec::new();
        let mut concept_pairs = BTreeSet::new();
        let mut role_pairs = BTreeSet::new();

        let mut note_concept = |c: &BasicConcept, roles: &mut BTreeSet<Role>| {
            if let BasicConcept::Exists(r) = c {
                roles.insert(r.clone());
                roles.insert(r.inverse());
            }
            concepts.insert(c.clone());
        };
        for axiom in tbox.axioms() {
            match axiom {
                TBoxAxiom::ConceptInclusion { lhs, rhs, negated } => {
                    note_concept(lhs, &mut roles);
                    note_concept(rhs, &mut roles);
                    if *negated {
                        concept_pairs.insert(concept_key(lhs, rhs));
                    } else {
                        concept_edges.push((lhs.clone(), rhs.clone()));
                    }
                }
                TBoxAxiom::RoleInclusion { lhs, rhs, negated } => {
                    for r in [lhs, rhs] {
                        roles.insert(r.clone());
                        roles.insert(r.inverse());
                    }
                    if *negated {
                        role_pairs.insert(role_key(lhs, rhs));
                    } else {
                        role_edges.push((lhs.clone(), rhs.clone()));
                        role_edges.push((lhs.inverse(), rhs.inverse()));
                        concept_edges.push((
                            BasicConcept::Exists(lhs.clone()),
                            BasicConcept::Exists(rhs.clone()),
                        ));
                        concept_edges.push((
                            BasicConcept::Exists(lhs.inverse()),
                            BasicConcept::Exists(rhs.inverse()),
                        ));
                    }
                }
            }
        }
        for r in &roles {
            concepts.insert(BasicConcept::Exists(r.clone()));
        }

        let concept_h = Hierarchy::new(&concepts, &concept_edges);
        let role_h = Hierarchy::new(&roles, &role_edges);

        loop {
            let mut changed = false;
            let snapshot: Vec<_> = concept_pairs.iter().cloned().collect();
            for (x, y) in &snapshot {
                for z in concept_h.below(x) {
                    changed |= concept_pairs.insert(concept_key(z, y));
                }
                for z in concept_h.below(y) {
                    changed |= concept_pairs.insert(concept_key(x, z));
                }
            }
            let snapshot: Vec<_> = role_pairs.iter().cloned().collect();
            for (x, y) in &snapshot {
                // Inclusions hold for inverses too, so both orientations of a
                // stored pair are propagated.
                for (p, q) in [(x.clone(), y.clone()), (x.inverse(), y.inverse())] {
                    for z in role_h.below(&p) {
                        changed |= role_pairs.insert(role_key(z, &q));
                    }
                    for z in role_h.below(&q) {
                        changed |= role_pairs.insert(role_key(&p, z));
                    }
                }
            }
            for r in &roles {
                let ex = BasicConcept::Exists(r.clone());
                let ex_inv = BasicConcept::Exists(r.inverse());
                let unsat = concept_pairs.contains(&concept_key(&ex, &ex))
                    || concept_pairs.contains(&concept_key(&ex_inv, &ex_inv))
                    || role_pairs.contains(&role_key(r, r));
                if unsat {
                    changed |= concept_pairs.insert(concept_key(&ex, &ex));
                    changed |= concept_pairs.insert(concept_key(&ex_inv, &ex_inv));
                    changed |= role_pairs.insert(role_key(r, r));
                }
            }
            if !changed {
                break;
            }
        }

        let constrained_concepts = concept_pairs
            .iter()
            .flat_map(|(a, b)| [a.clone(), b.clone()])
            .collect();
        let constrained_roles = role_pairs
            .iter()
            .flat_map(|(a, b)| [a.clone(), b.clone(), a.inverse(), b.inverse()])
            .collect();
        NegativeClosure {
            concept_pairs,
            role_pairs,
            constrained_concepts,
            constrained_roles,
        }
    }

    pub fn concepts_disjoint(&self, a: &BasicConcept, b: &BasicConcept) -> bool {
        self.concept_pairs.contains(&concept_key(a, b))
    }

    pub fn roles_disjoint(&self, a: &Role, b: &Role) -> bool {
        self.role_pairs.contains(&role_key(a, b))
    }

    /// Unordered disjoint concept pairs, each listed once.
    pub fn concept_pairs(&self) -> impl Iterator<Item = &(BasicConcept, BasicConcept)> {
        self.concept_pairs.iter()
    }

    /// Disjoint role pairs, each listed once up to symmetry and inversion.
    pub fn role_pairs(&self) -> impl Iterator<Item = &(Role, Role)> {
        self.role_pairs.iter()
    }

    /// Basic concepts `B` with `B disj B`.
    pub fn incoherent_concepts(&self) -> BTreeSet<BasicConcept> {
        self.concept_pairs
            .iter()
            .filter(|(a, b)| a == b)
            .map(|(a, _)| a.clone())
            .collect()
    }

    /// Whether re-running every propagation rule over the stored pairs
    /// derives nothing new against `tbox`.
    pub fn is_fixpoint_of(&self, tbox: &TBox) -> bool {
        NegativeClosure::new(tbox) == *self && {
            // Seed a second saturation with our own pairs as extra negative
            // axioms; it must not grow.
            let mut extended = tbox.clone();
            for (a, b) in &self.concept_pairs {
                extended.push(TBoxAxiom::concept_disjoint(a.clone(), b.clone()));
            }
            for (a, b) in &self.role_pairs {
                extended.push(TBoxAxiom::role_disjoint(a.clone(), b.clone()));
            }
            let again = NegativeClosure::new(&extended);
            again.concept_pairs == self.concept_pairs && again.role_pairs == self.role_pairs
        }
    }

    fn concept_facts<'a>(&self, a: &'a Assertion, out: &mut Vec<(&'a IndividualName, BasicConcept)>) {
        let mut push = |ind: &'a IndividualName, c: BasicConcept| {
            if self.constrained_concepts.contains(&c) {
                out.push((ind, c));
            }
        };
        match a {
            Assertion::Concept {
                concept,
                individual,
            } => push(individual, BasicConcept::Atomic(concept.clone())),
            Assertion::Role {
                role,
                subject,
                object,
            } => {
                let r = Role::named(role.clone());
                push(object, BasicConcept::Exists(r.inverse()));
                push(subject, BasicConcept::Exists(r));
            }
        }
    }

    /// Role facts keyed by the ordered pair `(u, v)` with `u <= v`, the role
    /// oriented from `u` to `v`.
    #[allow(clippy::type_complexity)]
    fn role_facts<'a>(
        &self,
        a: &'a Assertion,
        out: &mut Vec<((&'a IndividualName, &'a IndividualName), Role)>,
    ) {
        if self.constrained_roles.is_empty() {
            return;
        }
        if let Assertion::Role {
            role,
            subject,
            object,
        } = a
        {
            let r = Role::named(role.clone());
            if !self.constrained_roles.contains(&r) {
                return;
            }
            if subject == object {
                out.push(((subject, object), r.inverse()));
                out.push(((subject, object), r));
            } else if subject < object {
                out.push(((subject, object), r));
            } else {
                out.push(((object, subject), r.inverse()));
            }
        }
    }

    /// Whether `a` alone is inconsistent with the TBox.
    pub fn is_self_conflicting(&self, a: &Assertion) -> bool {
        let mut cf = Vec::new();
        self.concept_facts(a, &mut cf);
        for (i, (x, c)) in cf.iter().enumerate() {
            for (y, d) in &cf[i..] {
                if x == y && self.concepts_disjoint(c, d) {
                    return true;
                }
            }
        }
        let mut rf = Vec::new();
        self.role_facts(a, &mut rf);
        for (i, (_, r)) in rf.iter().enumerate() {
            for (_, s) in &rf[i..] {
                if self.roles_disjoint(r, s) {
                    return true;
                }
            }
        }
        false
    }

    /// Whether `⟨T, assertions⟩` has a model.
    pub fn is_consistent<'a, I>(&self, assertions: I) -> bool
    where
        I: IntoIterator<Item = &'a Assertion>,
    {
        let mut cf = Vec::new();
        let mut rf = Vec::new();
        for a in assertions {
            self.concept_facts(a, &mut cf);
            self.role_facts(a, &mut rf);
        }
        cf.sort_unstable();
        cf.dedup();
        for group in cf.chunk_by(|a, b| a.0 == b.0) {
            for (i, (_, c)) in group.iter().enumerate() {
                for (_, d) in &group[i..] {
                    if self.concepts_disjoint(c, d) {
                        return false;
                    }
                }
            }
        }
        rf.sort_unstable();
        rf.dedup();
        for group in rf.chunk_by(|a, b| a.0 == b.0) {
            for (i, (_, r)) in group.iter().enumerate() {
                for (_, s) in &group[i..] {
                    if self.roles_disjoint(r, s) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// All minimal inconsistent subsets of `assertions`.
    pub fn conflicts(&self, assertions: &AssertionSet) -> BTreeSet<Conflict> {
        let items: Vec<&Assertion> = assertions.iter().collect();
        let singleton: Vec<bool> = items.iter().map(|a| self.is_self_conflicting(a)).collect();
        let mut out: BTreeSet<Conflict> = items
            .iter()
            .zip(&singleton)
            .filter(|(_, &s)| s)
            .map(|(a, _)| Conflict::single((*a).clone()))
            .collect();

        let mut cf: Vec<(&IndividualName, BasicConcept, usize)> = Vec::new();
        let mut rf: Vec<((&IndividualName, &IndividualName), Role, usize)> = Vec::new();
        let mut scratch_c = Vec::new();
        let mut scratch_r = Vec::new();
        for (idx, a) in items.iter().enumerate() {
            if singleton[idx] {
                continue;
            }
            scratch_c.clear();
            self.concept_facts(a, &mut scratch_c);
            cf.extend(scratch_c.drain(..).map(|(x, c)| (x, c, idx)));
            scratch_r.clear();
            self.role_facts(a, &mut scratch_r);
            rf.extend(scratch_r.drain(..).map(|(k, r)| (k, r, idx)));
        }
        cf.sort_unstable();
        for group in cf.chunk_by(|a, b| a.0 == b.0) {
            for (i, (_, c, ia)) in group.iter().enumerate() {
                for (_, d, ib) in &group[i + 1..] {
                    if ia != ib && self.concepts_disjoint(c, d) {
                        out.insert(Conflict::pair(items[*ia].clone(), items[*ib].clone()));
                    }
                }
            }
        }
        rf.sort_unstable();
        for group in rf.chunk_by(|a, b| a.0 == b.0) {
            for (i, (_, r, ia)) in group.iter().enumerate() {
                for (_, s, ib) in &group[i + 1..] {
                    if ia != ib && self.roles_disjoint(r, s) {
                        out.insert(Conflict::pair(items[*ia].clone(), items[*ib].clone()));
                    }
                }
            }
        }
        out
    }

    /// The smallest conflict of `assertions` in conflict order, if any.
    pub fn first_conflict(&self, assertions: &AssertionSet) -> Option<Conflict> {
        if self.is_consistent(assertions) {
            return None;
        }
        self.conflicts(assertions).into_iter().next()
    }

    /// Assertions that belong to no conflict.
    pub fn free_set(&self, assertions: &AssertionSet) -> AssertionSet {
        let conflicts = self.conflicts(assertions);
        let involved: BTreeSet<&Assertion> =
            conflicts.iter().flat_map(|c| c.assertions()).collect();
        assertions
            .iter()
            .filter(|a| !involved.contains(a))
            .cloned()
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn a(c: &str) -> BasicConcept {
        BasicConcept::atomic(c)
    }

    fn tex() -> TBox {
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
    fn closure_of_example_tbox_adds_nothing() {
        let cl = NegativeClosure::new(&tex());
        let pairs: Vec<_> = cl.concept_pairs().cloned().collect();
        assert_eq!(pairs, vec![(a("A"), a("B")), (a("A"), a("E"))]);
        assert_eq!(cl.role_pairs().count(), 0);
        assert!(cl.is_fixpoint_of(&tex()));
    }

    #[test]
    fn closure_propagates_through_inclusion() {
        let t: TBox = [
            TBoxAxiom::concept(a("A"), a("B")),
            TBoxAxiom::concept_disjoint(a("B"), a("C")),
        ]
        .into_iter()
        .collect();
        let cl = NegativeClosure::new(&t);
        let pairs: Vec<_> = cl.concept_pairs().cloned().collect();
        assert_eq!(pairs, vec![(a("A"), a("C")), (a("B"), a("C"))]);
    }

    #[test]
    fn empty_tbox_has_empty_closure() {
        let cl = NegativeClosure::new(&TBox::new());
        assert_eq!(cl.concept_pairs().count(), 0);
        assert!(cl.incoherent_concepts().is_empty());
    }

    #[test]
    fn incoherence() {
        assert!(NegativeClosure::new(&tex()).incoherent_concepts().is_empty());
        let t: TBox = [
            TBoxAxiom::concept(a("A"), a("B")),
            TBoxAxiom::concept_disjoint(a("A"), a("B")),
        ]
        .into_iter()
        .collect();
        let inc = NegativeClosure::new(&t).incoherent_concepts();
        assert_eq!(inc.into_iter().collect::<Vec<_>>(), vec![a("A")]);
    }

    #[test]
    fn unsatisfiable_role_spreads_to_its_existentials() {
        // exists P- is unsatisfiable, hence so are P and exists P.
        let p = Role::named("P");
        let t: TBox = [
            TBoxAxiom::concept(BasicConcept::exists(p.inverse()), a("C")),
            TBoxAxiom::concept(BasicConcept::exists(p.inverse()), a("D")),
            TBoxAxiom::concept_disjoint(a("C"), a("D")),
            TBoxAxiom::concept(a("A"), BasicConcept::exists(p.clone())),
        ]
        .into_iter()
        .collect();
        let cl = NegativeClosure::new(&t);
        assert!(cl.roles_disjoint(&p, &p));
        assert!(cl.incoherent_concepts().contains(&a("A")));
        assert!(!cl.is_consistent(&set(&[Assertion::concept("A", "x")])));
        assert!(!cl.is_consistent(&set(&[Assertion::role("P", "x", "y")])));
    }

    #[test]
    fn role_disjointness_respects_direction() {
        let t: TBox = [TBoxAxiom::role_disjoint(Role::named("P"), Role::named("S"))]
            .into_iter()
            .collect();
        let cl = NegativeClosure::new(&t);
        let same = set(&[Assertion::role("P", "a", "b"), Assertion::role("S", "a", "b")]);
        let flipped = set(&[Assertion::role("P", "a", "b"), Assertion::role("S", "b", "a")]);
        assert!(!cl.is_consistent(&same));
        assert!(cl.is_consistent(&flipped));
        assert_eq!(cl.conflicts(&same).len(), 1);
    }

    #[test]
    fn self_loop_can_be_a_singleton_conflict() {
        let p = Role::named("P");
        let t: TBox = [TBoxAxiom::concept_disjoint(
            BasicConcept::exists(p.clone()),
            BasicConcept::exists(p.inverse()),
        )]
        .into_iter()
        .collect();
        let cl = NegativeClosure::new(&t);
        let x = set(&[Assertion::role("P", "a", "a")]);
        let cs = cl.conflicts(&x);
        assert_eq!(cs.len(), 1);
        assert_eq!(cs.iter().next().unwrap().len(), 1);
    }

    #[test]
    fn example_consistency() {
        let cl = NegativeClosure::new(&tex());
        assert!(!cl.is_consistent(&set(&[Assertion::concept("A", "a"), Assertion::concept("B", "a")])));
        assert!(cl.is_consistent(&AssertionSet::new()));
        assert!(cl.conflicts(&AssertionSet::new()).is_empty());
    }

    #[test]
    fn free_set_of_consistent_input_is_identity() {
        let cl = NegativeClosure::new(&tex());
        let x = set(&[Assertion::concept("A", "a"), Assertion::role("R", "a", "z")]);
        assert_eq!(cl.free_set(&x), x);
    }
}
