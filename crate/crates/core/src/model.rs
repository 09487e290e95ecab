//! Syntax of DL-Lite_R knowledge bases: names, roles, basic concepts, TBox
//! axioms, assertions and stratified (prioritized) assertion profiles.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{KbError, NameKind, PrefixOutOfRange};
use crate::reasoner::NegativeClosure;

/// A cheaply clonable, case-sensitive identifier, ordered by its text.
#[derive(Clone)]
pub struct Symbol(Arc<str>);

impl core::hash::Hash for Symbol {
    fn hash<H: core::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state);
    }
}

impl PartialEq for Symbol {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Symbol {}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            Ordering::Equal
        } else {
            self.0.cmp(&other.0)
        }
    }
}

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&*self.0, f)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

macro_rules! name_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(Symbol);

        impl $name {
            pub fn new(name: &str) -> Self {
                $name(Symbol::new(name))
            }

            pub fn as_str(&self) -> &str {
                self.0.as_str()
            }

            pub fn symbol(&self) -> &Symbol {
                &self.0
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl From<&str> for $name {
            fn from(name: &str) -> Self {
                $name::new(name)
            }
        }
    };
}

name_type!(
    /// Atomic concept name (member of N_C).
    ConceptName
);
name_type!(
    /// Atomic role name (member of N_R).
    RoleName
);
name_type!(
    /// Named individual (member of N_I).
    IndividualName
);

/// A role `P` or its inverse `P-`. Inversion is a flag, so it never nests.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Role {
    pub name: RoleName,
    pub inverted: bool,
}

impl Role {
    pub fn named(name: impl Into<RoleName>) -> Self {
        Role {
            name: name.into(),
            inverted: false,
        }
    }

    pub fn new(name: impl Into<RoleName>, inverted: bool) -> Self {
        Role {
            name: name.into(),
            inverted,
        }
    }

    /// `P -> P-`, `P- -> P`.
    pub fn inverse(&self) -> Self {
        Role {
            name: self.name.clone(),
            inverted: !self.inverted,
        }
    }

    /// Collapses any number of stacked inversions onto the flag.
    pub fn with_inversions(name: impl Into<RoleName>, inversions: usize) -> Self {
        Role::new(name, inversions % 2 == 1)
    }
}

impl fmt::Debug for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverted {
            write!(f, "{}-", self.name)
        } else {
            write!(f, "{}", self.name)
        }
    }
}

/// `B ::= A | exists R`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasicConcept {
    Atomic(ConceptName),
    Exists(Role),
}

impl BasicConcept {
    pub fn atomic(name: impl Into<ConceptName>) -> Self {
        BasicConcept::Atomic(name.into())
    }

    pub fn exists(role: Role) -> Self {
        BasicConcept::Exists(role)
    }
}

impl fmt::Debug for BasicConcept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for BasicConcept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasicConcept::Atomic(name) => write!(f, "{name}"),
            BasicConcept::Exists(role) => write!(f, "exists {role}"),
        }
    }
}

/// A TBox axiom. `negated` marks a negative inclusion (`B <= !C`, `R <= !E`).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TBoxAxiom {
    ConceptInclusion {
        lhs: BasicConcept,
        rhs: BasicConcept,
        negated: bool,
    },
    RoleInclusion {
        lhs: Role,
        rhs: Role,
        negated: bool,
    },
}

impl TBoxAxiom {
    pub fn concept(lhs: BasicConcept, rhs: BasicConcept) -> Self {
        TBoxAxiom::ConceptInclusion {
            lhs,
            rhs,
            negated: false,
        }
    }

    pub fn concept_disjoint(lhs: BasicConcept, rhs: BasicConcept) -> Self {
        TBoxAxiom::ConceptInclusion {
            lhs,
            rhs,
            negated: true,
        }
    }

    pub fn role(lhs: Role, rhs: Role) -> Self {
        TBoxAxiom::RoleInclusion {
            lhs,
            rhs,
            negated: false,
        }
    }

    pub fn role_disjoint(lhs: Role, rhs: Role) -> Self {
        TBoxAxiom::RoleInclusion {
            lhs,
            rhs,
            negated: true,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            TBoxAxiom::ConceptInclusion { negated, .. } | TBoxAxiom::RoleInclusion { negated, .. } => {
                *negated
            }
        }
    }
}

impl fmt::Debug for TBoxAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for TBoxAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TBoxAxiom::ConceptInclusion { lhs, rhs, negated } => {
                write!(f, "{lhs} <= {}{rhs}", if *negated { "!" } else { "" })
            }
            TBoxAxiom::RoleInclusion { lhs, rhs, negated } => {
                write!(f, "role {lhs} <= {}{rhs}", if *negated { "!" } else { "" })
            }
        }
    }
}

/// An ordered, duplicate-free list of axioms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TBox {
    axioms: Vec<TBoxAxiom>,
}

impl TBox {
    pub fn new() -> Self {
        TBox::default()
    }

    pub fn push(&mut self, axiom: TBoxAxiom) {
        if !self.axioms.contains(&axiom) {
            self.axioms.push(axiom);
        }
    }

    pub fn axioms(&self) -> &[TBoxAxiom] {
        &self.axioms
    }

    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }

    pub fn positive(&self) -> impl Iterator<Item = &TBoxAxiom> {
        self.axioms.iter().filter(|a| !a.is_negative())
    }
}

impl FromIterator<TBoxAxiom> for TBox {
    fn from_iter<I: IntoIterator<Item = TBoxAxiom>>(iter: I) -> Self {
        let mut tbox = TBox::new();
        for axiom in iter {
            tbox.push(axiom);
        }
        tbox
    }
}

/// A membership assertion `A(a)` or `P(a, b)`.
///
/// The ordering matches byte-wise ordering of the rendered text, which keeps
/// every emitted listing reproducible.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Assertion {
    Concept {
        concept: ConceptName,
        individual: IndividualName,
    },
    Role {
        role: RoleName,
        subject: IndividualName,
        object: IndividualName,
    },
}

impl Assertion {
    pub fn concept(concept: impl Into<ConceptName>, individual: impl Into<IndividualName>) -> Self {
        Assertion::Concept {
            concept: concept.into(),
            individual: individual.into(),
        }
    }

    pub fn role(
        role: impl Into<RoleName>,
        subject: impl Into<IndividualName>,
        object: impl Into<IndividualName>,
    ) -> Self {
        Assertion::Role {
            role: role.into(),
            subject: subject.into(),
            object: object.into(),
        }
    }

    fn predicate(&self) -> &str {
        match self {
            Assertion::Concept { concept, .. } => concept.as_str(),
            Assertion::Role { role, .. } => role.as_str(),
        }
    }

    fn first(&self) -> &IndividualName {
        match self {
            Assertion::Concept { individual, .. } => individual,
            Assertion::Role { subject, .. } => subject,
        }
    }

    fn second(&self) -> Option<&IndividualName> {
        match self {
            Assertion::Concept { .. } => None,
            Assertion::Role { object, .. } => Some(object),
        }
    }

    /// Individuals mentioned, in argument order.
    pub fn individuals(&self) -> impl Iterator<Item = &IndividualName> {
        core::iter::once(self.first()).chain(self.second())
    }
}

impl Ord for Assertion {
    fn cmp(&self, other: &Self) -> Ordering {
        // '(' , ')' and ',' sort below every identifier character, so a
        // shorter name that is a prefix of a longer one sorts first, exactly
        // as in the rendered form.
        self.predicate()
            .cmp(other.predicate())
            .then_with(|| self.first().cmp(other.first()))
            .then_with(|| self.second().cmp(&other.second()))
    }
}

impl PartialOrd for Assertion {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assertion::Concept {
                concept,
                individual,
            } => write!(f, "{concept}({individual})"),
            Assertion::Role {
                role,
                subject,
                object,
            } => write!(f, "{role}({subject}, {object})"),
        }
    }
}

pub type AssertionSet = BTreeSet<Assertion>;

/// One priority level. Lower index means more reliable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    pub index: usize,
    pub assertions: AssertionSet,
}

/// An ordered sequence of assertion sets `X_1 .. X_m` with no consistency
/// requirement. Both raw strata and per-answer supports are fed to the
/// repair strategies through this type.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StratifiedAssertions {
    layers: Vec<AssertionSet>,
}

impl StratifiedAssertions {
    pub fn new(layers: Vec<AssertionSet>) -> Self {
        StratifiedAssertions { layers }
    }

    /// Number of layers `m`.
    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    /// Layer `i`, 1-based.
    pub fn layer(&self, i: usize) -> &AssertionSet {
        &self.layers[i - 1]
    }

    pub fn layers(&self) -> &[AssertionSet] {
        &self.layers
    }

    /// `X_1 ∪ … ∪ X_k`; `k = 0` yields the empty set.
    pub fn union_up_to(&self, k: usize) -> Result<AssertionSet, PrefixOutOfRange> {
        if k > self.layers.len() {
            return Err(PrefixOutOfRange {
                k,
                m: self.layers.len(),
            });
        }
        Ok(self.prefix(k).cloned().collect())
    }

    /// Iterator over the assertions of the first `k` layers (duplicates across
    /// layers are yielded more than once).
    pub(crate) fn prefix(&self, k: usize) -> impl Iterator<Item = &Assertion> + Clone {
        self.layers[..k].iter().flatten()
    }

    pub fn union_all(&self) -> AssertionSet {
        self.prefix(self.layers.len()).cloned().collect()
    }

    /// Lowest layer index (1-based) containing `assertion`.
    pub fn priority_of(&self, assertion: &Assertion) -> Option<usize> {
        self.layers
            .iter()
            .position(|layer| layer.contains(assertion))
            .map(|i| i + 1)
    }
}

/// A TBox plus a non-empty profile of strata, each consistent with the TBox.
#[derive(Clone, Debug)]
pub struct PrioritizedKb {
    tbox: TBox,
    strata: StratifiedAssertions,
    closure: Arc<NegativeClosure>,
}

impl PrioritizedKb {
    /// Validates namespaces, `m >= 1` and per-stratum consistency.
    pub fn new(tbox: TBox, strata: Vec<AssertionSet>) -> Result<Self, KbError> {
        if strata.is_empty() {
            return Err(KbError::EmptyProfile);
        }
        let mut vocabulary = Vocabulary::default();
        for axiom in tbox.axioms() {
            vocabulary.add_axiom(axiom)?;
        }
        for assertion in strata.iter().flatten() {
            vocabulary.add_assertion(assertion)?;
        }
        let closure = NegativeClosure::new(&tbox);
        for (i, stratum) in strata.iter().enumerate() {
            if let Some(conflict) = closure.first_conflict(stratum) {
                return Err(KbError::InconsistentStratum {
                    stratum: i + 1,
                    conflict,
                });
            }
        }
        Ok(PrioritizedKb {
            tbox,
            strata: StratifiedAssertions::new(strata),
            closure: Arc::new(closure),
        })
    }

    pub fn tbox(&self) -> &TBox {
        &self.tbox
    }

    pub fn closure(&self) -> &NegativeClosure {
        &self.closure
    }

    pub fn profile(&self) -> &StratifiedAssertions {
        &self.strata
    }

    pub fn strata(&self) -> impl Iterator<Item = Stratum> + '_ {
        self.strata
            .layers()
            .iter()
            .enumerate()
            .map(|(i, assertions)| Stratum {
                index: i + 1,
                assertions: assertions.clone(),
            })
    }

    pub fn stratum_count(&self) -> usize {
        self.strata.len()
    }
}

impl PartialEq for PrioritizedKb {
    fn eq(&self, other: &Self) -> bool {
        self.tbox == other.tbox && self.strata == other.strata
    }
}

/// Tracks which namespace each name was first seen in.
#[derive(Default)]
pub(crate) struct Vocabulary {
    kinds: BTreeMap<String, NameKind>,
}

impl Vocabulary {
    fn declare(&mut self, name: &str, kind: NameKind) -> Result<(), KbError> {
        match self.kinds.get(name) {
            Some(&existing) if existing != kind => Err(KbError::NamespaceClash {
                name: name.to_string(),
                first: existing,
                second: kind,
            }),
            Some(_) => Ok(()),
            None => {
                self.kinds.insert(name.to_string(), kind);
                Ok(())
            }
        }
    }

    fn add_basic(&mut self, concept: &BasicConcept) -> Result<(), KbError> {
        match concept {
            BasicConcept::Atomic(name) => self.declare(name.as_str(), NameKind::Concept),
            BasicConcept::Exists(role) => self.declare(role.name.as_str(), NameKind::Role),
        }
    }

    pub(crate) fn add_axiom(&mut self, axiom: &TBoxAxiom) -> Result<(), KbError> {
        match axiom {
            TBoxAxiom::ConceptInclusion { lhs, rhs, .. } => {
                self.add_basic(lhs)?;
                self.add_basic(rhs)
            }
            TBoxAxiom::RoleInclusion { lhs, rhs, .. } => {
                self.declare(lhs.name.as_str(), NameKind::Role)?;
                self.declare(rhs.name.as_str(), NameKind::Role)
            }
        }
    }

    pub(crate) fn add_assertion(&mut self, assertion: &Assertion) -> Result<(), KbError> {
        match assertion {
            Assertion::Concept {
                concept,
                individual,
            } => {
                self.declare(concept.as_str(), NameKind::Concept)?;
                self.declare(individual.as_str(), NameKind::Individual)
            }
            Assertion::Role {
                role,
                subject,
                object,
            } => {
                self.declare(role.as_str(), NameKind::Role)?;
                self.declare(subject.as_str(), NameKind::Individual)?;
                self.declare(object.as_str(), NameKind::Individual)
            }
        }
    }
}
