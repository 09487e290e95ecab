//! Conjunctive queries: certain-answer evaluation through PerfectRef-style
//! rewriting, and the per-stratum answer profile used by the after-query
//! repairs.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::error::QueryError;
use crate::model::{
    Assertion, AssertionSet, BasicConcept, ConceptName, IndividualName, PrioritizedKb, Role,
    RoleName, StratifiedAssertions, Symbol, TBox, TBoxAxiom,
};

/// A query variable, rendered `?name`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable(Symbol);

impl Variable {
    pub fn new(name: &str) -> Self {
        Variable(Symbol::new(name))
    }

    pub fn as_str(&self) -> &str {
        self.0.as_str()
    }
}

impl fmt::Debug for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Variable),
    Individual(IndividualName),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(Variable::new(name))
    }

    pub fn individual(name: &str) -> Self {
        Term::Individual(IndividualName::new(name))
    }

    fn as_var(&self) -> Option<&Variable> {
        match self {
            Term::Var(v) => Some(v),
            Term::Individual(_) => None,
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Individual(i) => write!(f, "{i}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Concept {
        concept: ConceptName,
        term: Term,
    },
    Role {
        role: RoleName,
        subject: Term,
        object: Term,
    },
}

impl Atom {
    pub fn concept(concept: &str, term: Term) -> Self {
        Atom::Concept {
            concept: ConceptName::new(concept),
            term,
        }
    }

    pub fn role(role: &str, subject: Term, object: Term) -> Self {
        Atom::Role {
            role: RoleName::new(role),
            subject,
            object,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        let (first, second) = match self {
            Atom::Concept { term, .. } => (term, None),
            Atom::Role {
                subject, object, ..
            } => (subject, Some(object)),
        };
        core::iter::once(first).chain(second)
    }

    fn map_terms(&self, mut f: impl FnMut(&Term) -> Term) -> Atom {
        match self {
            Atom::Concept { concept, term } => Atom::Concept {
                concept: concept.clone(),
                term: f(term),
            },
            Atom::Role {
                role,
                subject,
                object,
            } => Atom::Role {
                role: role.clone(),
                subject: f(subject),
                object: f(object),
            },
        }
    }

    /// Same predicate and arity.
    fn same_predicate(&self, other: &Atom) -> bool {
        match (self, other) {
            (Atom::Concept { concept: a, .. }, Atom::Concept { concept: b, .. }) => a == b,
            (Atom::Role { role: a, .. }, Atom::Role { role: b, .. }) => a == b,
            _ => false,
        }
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Concept { concept, term } => write!(f, "{concept}({term})"),
            Atom::Role {
                role,
                subject,
                object,
            } => write!(f, "{role}({subject}, {object})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QueryKind {
    /// One atom, at least one answer variable.
    Instance,
    /// No variables at all.
    Ground,
    Conjunctive,
}

impl QueryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            QueryKind::Instance => "instance",
            QueryKind::Ground => "ground",
            QueryKind::Conjunctive => "conjunctive",
        }
    }
}

impl fmt::Display for QueryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `name(head) :- body`. Head terms of user queries are variables; queries
/// produced by rewriting may carry individuals in the head.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConjunctiveQuery {
    head: Vec<Term>,
    body: Vec<Atom>,
    name: Symbol,
}

impl ConjunctiveQuery {
    pub fn new(name: &str, head: Vec<Variable>, body: Vec<Atom>) -> Result<Self, QueryError> {
        if body.is_empty() {
            return Err(QueryError::EmptyBody);
        }
        for v in &head {
            let bound = body
                .iter()
                .flat_map(Atom::terms)
                .any(|t| t.as_var() == Some(v));
            if !bound {
                return Err(QueryError::UnboundHeadVariable(v.as_str().into()));
            }
        }
        Ok(ConjunctiveQuery {
            head: head.into_iter().map(Term::Var).collect(),
            body,
            name: Symbol::new(name),
        })
    }

    pub fn name(&self) -> &str {
        self.name.as_str()
    }

    pub fn head(&self) -> &[Term] {
        &self.head
    }

    pub fn body(&self) -> &[Atom] {
        &self.body
    }

    pub fn arity(&self) -> usize {
        self.head.len()
    }

    pub fn kind(&self) -> QueryKind {
        let has_vars = self.all_terms().any(|t| t.as_var().is_some());
        if !has_vars {
            QueryKind::Ground
        } else if self.body.len() == 1 && !self.head.is_empty() {
            QueryKind::Instance
        } else {
            QueryKind::Conjunctive
        }
    }

    /// Body variables that are not answer variables.
    pub fn existential_variables(&self) -> BTreeSet<Variable> {
        self.body
            .iter()
            .flat_map(Atom::terms)
            .filter_map(Term::as_var)
            .filter(|v| !self.is_head_var(v))
            .cloned()
            .collect()
    }

    /// Individuals named in the body.
    pub fn constants(&self) -> BTreeSet<IndividualName> {
        self.body
            .iter()
            .flat_map(Atom::terms)
            .filter_map(|t| match t {
                Term::Individual(i) => Some(i.clone()),
                Term::Var(_) => None,
            })
            .collect()
    }

    fn all_terms(&self) -> impl Iterator<Item = &Term> {
        self.head.iter().chain(self.body.iter().flat_map(Atom::terms))
    }

    fn is_head_var(&self, v: &Variable) -> bool {
        self.head.iter().any(|t| t.as_var() == Some(v))
    }

    /// A variable is unbound when it is existential and occurs exactly once.
    fn is_unbound(&self, t: &Term) -> bool {
        match t {
            Term::Individual(_) => false,
            Term::Var(v) => {
                !self.is_head_var(v)
                    && self
                        .body
                        .iter()
                        .flat_map(Atom::terms)
                        .filter(|u| u.as_var() == Some(v))
                        .count()
                        == 1
            }
        }
    }

    fn with_body(&self, body: Vec<Atom>) -> Self {
        ConjunctiveQuery {
            head: self.head.clone(),
            body,
            name: self.name.clone(),
        }
    }

    /// Renames existential variables by first occurrence over a sorted body
    /// and drops duplicate atoms, so that queries equal up to renaming of
    /// existential variables usually coincide.
    fn canonical(&self) -> Self {
        let head_vars: BTreeSet<&Variable> = self.head.iter().filter_map(Term::as_var).collect();
        let mut body = self.body.clone();
        for _ in 0..2 {
            let placeholder = Term::Var(Variable::new("#"));
            let mut keyed: Vec<(Atom, Atom)> = body
                .iter()
                .map(|a| {
                    let key = a.map_terms(|t| match t {
                        Term::Var(v) if !head_vars.contains(v) => placeholder.clone(),
                        other => other.clone(),
                    });
                    (key, a.clone())
                })
                .collect();
            keyed.sort();
            let mut renaming: BTreeMap<Variable, Variable> = BTreeMap::new();
            body = keyed
                .into_iter()
                .map(|(_, a)| {
                    a.map_terms(|t| match t {
                        Term::Var(v) if !head_vars.contains(v) => {
                            let next = renaming.len();
                            Term::Var(
                                renaming
                                    .entry(v.clone())
                                    .or_insert_with(|| Variable::new(&alloc::format!("#{next}")))
                                    .clone(),
                            )
                        }
                        other => other.clone(),
                    })
                })
                .collect();
            body.sort();
            body.dedup();
        }
        self.with_body(body)
    }
}

impl fmt::Debug for ConjunctiveQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ConjunctiveQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name)?;
        for (i, t) in self.head.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str(") :- ")?;
        for (i, a) in self.body.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// A tuple of named individuals; the empty tuple is the answer `true` of a
/// boolean query.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AnswerTuple(pub Vec<IndividualName>);

impl AnswerTuple {
    pub fn individuals(&self) -> &[IndividualName] {
        &self.0
    }
}

impl fmt::Debug for AnswerTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for AnswerTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, ind) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{ind}")?;
        }
        f.write_str(")")
    }
}

fn role_atom(role: &Role, first: Term, second: Term) -> Atom {
    let (subject, object) = if role.inverted {
        (second, first)
    } else {
        (first, second)
    };
    Atom::Role {
        role: role.name.clone(),
        subject,
        object,
    }
}

fn fresh() -> Term {
    Term::Var(Variable::new("%new"))
}

fn basic_atom(concept: &BasicConcept, term: Term) -> Atom {
    match concept {
        BasicConcept::Atomic(name) => Atom::Concept {
            concept: name.clone(),
            term,
        },
        BasicConcept::Exists(role) => role_atom(role, term, fresh()),
    }
}

/// Most general unifier of two atoms with the same predicate, applied to the
/// whole query. Existential variables are bound before answer variables.
fn reduce(q: &ConjunctiveQuery, i: usize, j: usize) -> Option<ConjunctiveQuery> {
    let (a, b) = (&q.body[i], &q.body[j]);
    let pairs: Vec<(Term, Term)> = a.terms().cloned().zip(b.terms().cloned()).collect();
    let mut subst: BTreeMap<Variable, Term> = BTreeMap::new();
    let resolve = |t: &Term, subst: &BTreeMap<Variable, Term>| {
        let mut cur = t.clone();
        while let Term::Var(v) = &cur {
            match subst.get(v) {
                Some(next) => cur = next.clone(),
                None => break,
            }
        }
        cur
    };
    for (s, t) in pairs {
        let (s, t) = (resolve(&s, &subst), resolve(&t, &subst));
        if s == t {
            continue;
        }
        match (&s, &t) {
            (Term::Individual(_), Term::Individual(_)) => return None,
            (Term::Var(v), Term::Individual(_)) => {
                subst.insert(v.clone(), t.clone());
            }
            (Term::Individual(_), Term::Var(v)) => {
                subst.insert(v.clone(), s.clone());
            }
            (Term::Var(v), Term::Var(w)) => {
                if q.is_head_var(v) && !q.is_head_var(w) {
                    subst.insert(w.clone(), s.clone());
                } else {
                    subst.insert(v.clone(), t.clone());
                }
            }
        }
    }
    let apply = |t: &Term| resolve(t, &subst);
    let body = q.body.iter().map(|a| a.map_terms(apply)).collect();
    Some(ConjunctiveQuery {
        head: q.head.iter().map(apply).collect(),
        body,
        name: q.name.clone(),
    })
}

/// Rewrites `query` into a union of conjunctive queries whose plain
/// evaluation over any ABox yields the certain answers of `query` under the
/// positive inclusions of `tbox`.
pub fn rewrite(query: &ConjunctiveQuery, tbox: &TBox) -> Vec<ConjunctiveQuery> {
    let mut concept_incl: Vec<(&BasicConcept, &BasicConcept)> = Vec::new();
    let mut role_incl: Vec<(&Role, &Role)> = Vec::new();
    for axiom in tbox.positive() {
        match axiom {
            TBoxAxiom::ConceptInclusion { lhs, rhs, .. } => concept_incl.push((lhs, rhs)),
            TBoxAxiom::RoleInclusion { lhs, rhs, .. } => role_incl.push((lhs, rhs)),
        }
    }

    let start = query.canonical();
    let mut seen: BTreeSet<ConjunctiveQuery> = BTreeSet::new();
    seen.insert(start.clone());
    let mut work = alloc::vec![start];
    while let Some(q) = work.pop() {
        let mut produced: Vec<ConjunctiveQuery> = Vec::new();
        for (i, atom) in q.body.iter().enumerate() {
            let mut replace = |new_atom: Atom| {
                let mut body = q.body.clone();
                body[i] = new_atom;
                produced.push(q.with_body(body));
            };
            match atom {
                Atom::Concept { concept, term } => {
                    for (lhs, rhs) in &concept_incl {
                        if matches!(rhs, BasicConcept::Atomic(a) if a == concept) {
                            replace(basic_atom(lhs, term.clone()));
                        }
                    }
                }
                Atom::Role {
                    role,
                    subject,
                    object,
                } => {
                    for (lhs, rhs) in &concept_incl {
                        if let BasicConcept::Exists(r) = rhs {
                            if r.name != *role {
                                continue;
                            }
                            if !r.inverted && q.is_unbound(object) {
                                replace(basic_atom(lhs, subject.clone()));
                            } else if r.inverted && q.is_unbound(subject) {
                                replace(basic_atom(lhs, object.clone()));
                            }
                        }
                    }
                    for (lhs, rhs) in &role_incl {
                        if rhs.name != *role {
                            continue;
                        }
                        // lhs ⊑ P, or lhs- ⊑ P when the axiom reads lhs ⊑ P-.
                        let sub = if rhs.inverted {
                            lhs.inverse()
                        } else {
                            (*lhs).clone()
                        };
                        replace(role_atom(&sub, subject.clone(), object.clone()));
                    }
                }
            }
        }
        for i in 0..q.body.len() {
            for j in i + 1..q.body.len() {
                if q.body[i].same_predicate(&q.body[j]) {
                    if let Some(r) = reduce(&q, i, j) {
                        produced.push(r);
                    }
                }
            }
        }
        for p in produced {
            let p = p.canonical();
            if seen.insert(p.clone()) {
                work.push(p);
            }
        }
    }
    seen.into_iter().collect()
}

#[derive(Clone, Debug, Default)]
struct RoleExtension {
    forward: BTreeMap<IndividualName, BTreeSet<IndividualName>>,
    backward: BTreeMap<IndividualName, BTreeSet<IndividualName>>,
}

/// Predicate indexes over one assertion set.
#[derive(Clone, Debug, Default)]
pub struct AboxIndex {
    concepts: BTreeMap<ConceptName, BTreeSet<IndividualName>>,
    roles: BTreeMap<RoleName, RoleExtension>,
    concept_assertions: BTreeMap<IndividualName, Vec<Assertion>>,
}

impl AboxIndex {
    pub fn new<'a, I: IntoIterator<Item = &'a Assertion>>(assertions: I) -> Self {
        let mut index = AboxIndex::default();
        for a in assertions {
            match a {
                Assertion::Concept {
                    concept,
                    individual,
                } => {
                    if index
                        .concepts
                        .entry(concept.clone())
                        .or_default()
                        .insert(individual.clone())
                    {
                        index
                            .concept_assertions
                            .entry(individual.clone())
                            .or_default()
                            .push(a.clone());
                    }
                }
                Assertion::Role {
                    role,
                    subject,
                    object,
                } => {
                    let ext = index.roles.entry(role.clone()).or_default();
                    ext.forward
                        .entry(subject.clone())
                        .or_default()
                        .insert(object.clone());
                    ext.backward
                        .entry(object.clone())
                        .or_default()
                        .insert(subject.clone());
                }
            }
        }
        index
    }

    /// Concept assertions whose individual is `ind`.
    pub fn concept_assertions_of(&self, ind: &IndividualName) -> &[Assertion] {
        self.concept_assertions
            .get(ind)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}

type Binding = Vec<(Variable, IndividualName)>;

fn lookup<'b>(binding: &'b Binding, v: &Variable) -> Option<&'b IndividualName> {
    binding.iter().find(|(w, _)| w == v).map(|(_, i)| i)
}

fn resolve_term(binding: &Binding, t: &Term) -> Option<IndividualName> {
    match t {
        Term::Individual(i) => Some(i.clone()),
        Term::Var(v) => lookup(binding, v).cloned(),
    }
}

fn ground(atom: &Atom, binding: &Binding) -> Assertion {
    let g = |t: &Term| resolve_term(binding, t).expect("all variables bound");
    match atom {
        Atom::Concept { concept, term } => Assertion::Concept {
            concept: concept.clone(),
            individual: g(term),
        },
        Atom::Role {
            role,
            subject,
            object,
        } => Assertion::Role {
            role: role.clone(),
            subject: g(subject),
            object: g(object),
        },
    }
}

/// Tries to bind `t` to `value`; returns whether a new binding was pushed,
/// or `None` on a clash.
fn bind(binding: &mut Binding, t: &Term, value: &IndividualName) -> Option<bool> {
    match t {
        Term::Individual(i) => (i == value).then_some(false),
        Term::Var(v) => match lookup(binding, v) {
            Some(existing) => (existing == value).then_some(false),
            None => {
                binding.push((v.clone(), value.clone()));
                Some(true)
            }
        },
    }
}

type Filter<'f> = Option<&'f dyn Fn(&Assertion) -> bool>;

struct Matcher<'a, 'f> {
    index: &'a AboxIndex,
    filter: Filter<'f>,
}

impl Matcher<'_, '_> {
    fn admit(&self, atom: &Atom, binding: &Binding) -> bool {
        match self.filter {
            None => true,
            Some(f) => f(&ground(atom, binding)),
        }
    }

    fn run(&self, atoms: &[Atom], done: &mut Vec<bool>, binding: &mut Binding, emit: &mut dyn FnMut(&Binding)) {
        // Pick the pending atom with the most bound positions.
        let next = atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| !done[*i])
            .max_by_key(|(i, a)| {
                let bound = a
                    .terms()
                    .filter(|t| resolve_term(binding, t).is_some())
                    .count();
                (bound, core::cmp::Reverse(*i))
            })
            .map(|(i, _)| i);
        let Some(i) = next else {
            emit(binding);
            return;
        };
        done[i] = true;
        let atom = &atoms[i];
        match atom {
            Atom::Concept { concept, term } => {
                if let Some(members) = self.index.concepts.get(concept) {
                    match resolve_term(binding, term) {
                        Some(ind) => {
                            if members.contains(&ind) && self.admit(atom, binding) {
                                self.run(atoms, done, binding, emit);
                            }
                        }
                        None => {
                            for ind in members {
                                let pushed = bind(binding, term, ind).expect("unbound term");
                                if self.admit(atom, binding) {
                                    self.run(atoms, done, binding, emit);
                                }
                                if pushed {
                                    binding.pop();
                                }
                            }
                        }
                    }
                }
            }
            Atom::Role {
                role,
                subject,
                object,
            } => {
                if let Some(ext) = self.index.roles.get(role) {
                    let s = resolve_term(binding, subject);
                    let o = resolve_term(binding, object);
                    let mut visit = |x: &IndividualName, y: &IndividualName, binding: &mut Binding| {
                        let mark = binding.len();
                        if bind(binding, subject, x).is_some()
                            && bind(binding, object, y).is_some()
                            && self.admit(atom, binding)
                        {
                            self.run(atoms, done, binding, emit);
                        }
                        binding.truncate(mark);
                    };
                    match (&s, &o) {
                        (Some(x), Some(y)) => {
                            if ext.forward.get(x).is_some_and(|ys| ys.contains(y)) {
                                visit(x, y, binding);
                            }
                        }
                        (Some(x), None) => {
                            for y in ext.forward.get(x).into_iter().flatten() {
                                visit(x, y, binding);
                            }
                        }
                        (None, Some(y)) => {
                            for x in ext.backward.get(y).into_iter().flatten() {
                                visit(x, y, binding);
                            }
                        }
                        (None, None) => {
                            for (x, ys) in &ext.forward {
                                for y in ys {
                                    visit(x, y, binding);
                                }
                            }
                        }
                    }
                }
            }
        }
        done[i] = false;
    }
}

type Emit<'e> = &'e mut dyn FnMut(AnswerTuple, &dyn Fn() -> Vec<Assertion>);

/// Enumerates every homomorphism of `cq`'s body into `index` (restricted to
/// assertions accepted by `filter`), reporting the answer tuple and the
/// ground body atoms.
fn for_each_match(
    cq: &ConjunctiveQuery,
    index: &AboxIndex,
    filter: Filter<'_>,
    emit: Emit<'_>,
) {
    let matcher = Matcher { index, filter };
    let mut done = alloc::vec![false; cq.body.len()];
    let mut binding = Binding::new();
    matcher.run(&cq.body, &mut done, &mut binding, &mut |b: &Binding| {
        let tuple = AnswerTuple(
            cq.head
                .iter()
                .map(|t| resolve_term(b, t).expect("head variables occur in the body"))
                .collect(),
        );
        let witness = || cq.body.iter().map(|a| ground(a, b)).collect();
        emit(tuple, &witness);
    });
}

/// A user query together with its rewriting against a fixed TBox.
#[derive(Clone, Debug)]
pub struct RewrittenQuery {
    query: ConjunctiveQuery,
    union: Vec<ConjunctiveQuery>,
}

impl RewrittenQuery {
    pub fn new(query: &ConjunctiveQuery, tbox: &TBox) -> Self {
        RewrittenQuery {
            query: query.clone(),
            union: rewrite(query, tbox),
        }
    }

    pub fn query(&self) -> &ConjunctiveQuery {
        &self.query
    }

    pub fn union(&self) -> &[ConjunctiveQuery] {
        &self.union
    }

    pub fn evaluate(&self, index: &AboxIndex) -> BTreeSet<AnswerTuple> {
        self.evaluate_with(index, None)
    }

    /// Answers over the sub-ABox of `index` accepted by `keep`.
    pub fn evaluate_filtered(
        &self,
        index: &AboxIndex,
        keep: &dyn Fn(&Assertion) -> bool,
    ) -> BTreeSet<AnswerTuple> {
        self.evaluate_with(index, Some(keep))
    }

    fn evaluate_with(&self, index: &AboxIndex, filter: Filter<'_>) -> BTreeSet<AnswerTuple> {
        let mut out = BTreeSet::new();
        for cq in &self.union {
            for_each_match(cq, index, filter, &mut |tuple, _| {
                out.insert(tuple);
            });
        }
        out
    }

    /// Answers with the union of their witnessing ground atoms.
    pub fn evaluate_with_witnesses(
        &self,
        index: &AboxIndex,
    ) -> BTreeMap<AnswerTuple, AssertionSet> {
        let mut out: BTreeMap<AnswerTuple, AssertionSet> = BTreeMap::new();
        for cq in &self.union {
            for_each_match(cq, index, None, &mut |tuple, witness| {
                out.entry(tuple).or_default().extend(witness());
            });
        }
        out
    }
}

/// Certain answers of `query` over `⟨tbox, assertions⟩`, ignoring negative
/// inclusions.
pub fn evaluate(query: &ConjunctiveQuery, tbox: &TBox, assertions: &AssertionSet) -> BTreeSet<AnswerTuple> {
    RewrittenQuery::new(query, tbox).evaluate(&AboxIndex::new(assertions))
}

/// How the per-stratum support `q_{L_i}` is derived from the answers `S_i`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SupportMode {
    /// Concept assertions of `L_i` about individuals occurring in an answer
    /// (for boolean queries: about the individuals the query names).
    #[default]
    AboutAnswers,
    /// Ground images of the (rewritten) query atoms under the witnessing
    /// matches into `L_i`.
    Instantiation,
}

impl SupportMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SupportMode::AboutAnswers => "about-answers",
            SupportMode::Instantiation => "instantiation",
        }
    }
}

impl fmt::Display for SupportMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Answers of one stratum with the support of each.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StratumAnswers {
    pub answers: BTreeSet<AnswerTuple>,
    /// Support of each answer in the iteration order of `answers`, sorted
    /// and deduplicated.
    pub per_answer: Vec<Vec<Assertion>>,
}

/// `S_Ps` together with `q_Ps`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnswerProfile {
    query: ConjunctiveQuery,
    mode: SupportMode,
    strata: Vec<StratumAnswers>,
    supports: StratifiedAssertions,
}

impl AnswerProfile {
    /// Evaluates `query` on each stratum index separately.
    pub fn build(query: &RewrittenQuery, strata: &[AboxIndex], mode: SupportMode) -> Self {
        let constants: Vec<IndividualName> = query.query().constants().into_iter().collect();
        let (strata, layers) = strata
            .iter()
            .map(|index| {
                let (answers, per_answer): (BTreeSet<AnswerTuple>, Vec<Vec<Assertion>>) = match mode {
                    SupportMode::AboutAnswers => {
                        let answers = query.evaluate(index);
                        let per_answer = answers
                            .iter()
                            .map(|tuple| {
                                let about = if tuple.0.is_empty() { &constants[..] } else { &tuple.0[..] };
                                let mut support: Vec<Assertion> = about
                                    .iter()
                                    .flat_map(|c| index.concept_assertions_of(c))
                                    .cloned()
                                    .collect();
                                support.sort_unstable();
                                support.dedup();
                                support
                            })
                            .collect();
                        (answers, per_answer)
                    }
                    SupportMode::Instantiation => {
                        let witnessed = query.evaluate_with_witnesses(index);
                        let answers = witnessed.keys().cloned().collect();
                        let per_answer = witnessed.into_values().map(|w| w.into_iter().collect()).collect();
                        (answers, per_answer)
                    }
                };
                let support: AssertionSet = per_answer.iter().flatten().cloned().collect();
                (StratumAnswers { answers, per_answer }, support)
            })
            .unzip();
        AnswerProfile {
            query: query.query().clone(),
            mode,
            strata,
            supports: StratifiedAssertions::new(layers),
        }
    }

    pub fn query(&self) -> &ConjunctiveQuery {
        &self.query
    }

    pub fn mode(&self) -> SupportMode {
        self.mode
    }

    /// Stratum `i`, 1-based.
    pub fn stratum(&self, i: usize) -> &StratumAnswers {
        &self.strata[i - 1]
    }

    pub fn strata(&self) -> &[StratumAnswers] {
        &self.strata
    }

    /// `q_Ps` as input for the repair strategies.
    pub fn supports(&self) -> &StratifiedAssertions {
        &self.supports
    }

    pub fn into_supports(self) -> StratifiedAssertions {
        self.supports
    }

    /// Support `q_{L_i}` of stratum `i`, 1-based.
    pub fn support(&self, i: usize) -> &AssertionSet {
        self.supports.layer(i)
    }

    /// `S_1 ∪ … ∪ S_m`: the answers obtained when consistency is ignored.
    pub fn raw_answers(&self) -> BTreeSet<AnswerTuple> {
        self.strata
            .iter()
            .flat_map(|s| s.answers.iter().cloned())
            .collect()
    }

    /// Answers with at least one support assertion (in any stratum) kept in
    /// `retained`. An answer whose support in some stratum is empty has
    /// nothing a repair could remove there, and is always kept.
    pub fn answers_from_assertions(&self, retained: &AssertionSet) -> BTreeSet<AnswerTuple> {
        self.strata
            .iter()
            .flat_map(|s| s.answers.iter().zip(&s.per_answer))
            .filter(|(_, support)| support.is_empty() || support.iter().any(|a| retained.contains(a)))
            .map(|(t, _)| t.clone())
            .collect()
    }
}

/// Builds the answer profile of `query` over the strata of `kb`.
pub fn answer_profile(query: &ConjunctiveQuery, kb: &PrioritizedKb, mode: SupportMode) -> AnswerProfile {
    let rewritten = RewrittenQuery::new(query, kb.tbox());
    let indexes: Vec<AboxIndex> = kb.profile().layers().iter().map(AboxIndex::new).collect();
    AnswerProfile::build(&rewritten, &indexes, mode)
}
