//! Event algebra: formulas, possible worlds, conditional events and the
//! constituents a family of conditional events generates.

mod formula;
mod index_set;

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

pub(crate) use formula::Compiled;
pub use formula::{is_valid_atom_name, parse_formula, Formula};
pub use index_set::IndexSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("empty formula")]
    EmptyFormula,
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("atom `{0}` has no truth value in the world")]
    MissingAtom(String),
    #[error("atom `{0}` is not declared")]
    UnknownAtom(String),
    #[error("invalid atom name `{0}`")]
    InvalidAtomName(String),
    #[error("atom `{0}` declared twice")]
    DuplicateAtom(String),
    #[error("{count} atoms exceed the limit of {limit}")]
    TooManyAtoms { count: usize, limit: usize },
    #[error("antecedent of `{0}` is impossible")]
    ImpossibleAntecedent(String),
    #[error("family of {0} conditionals is too large")]
    FamilyTooLarge(usize),
}

/// A total truth assignment, bit `i` holding the value of atom `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct World(pub u64);

impl World {
    pub fn holds(self, atom: usize) -> bool {
        self.0 >> atom & 1 == 1
    }
}

/// Atom declarations plus logical constraints, given as formulas that are
/// asserted impossible.
#[derive(Debug, Clone)]
pub struct Universe {
    atoms: Vec<String>,
    constraints: Vec<Formula>,
    admissible: Vec<World>,
}

impl Universe {
    pub const DEFAULT_MAX_ATOMS: usize = 16;

    pub fn new<S: Into<String>>(
        atoms: impl IntoIterator<Item = S>,
        constraints: Vec<Formula>,
    ) -> Result<Self, LogicError> {
        Self::with_max_atoms(atoms, constraints, Self::DEFAULT_MAX_ATOMS)
    }

    pub fn with_max_atoms<S: Into<String>>(
        atoms: impl IntoIterator<Item = S>,
        constraints: Vec<Formula>,
        max_atoms: usize,
    ) -> Result<Self, LogicError> {
        let atoms: Vec<String> = atoms.into_iter().map(Into::into).collect();
        for (i, a) in atoms.iter().enumerate() {
            if !is_valid_atom_name(a) {
                return Err(LogicError::InvalidAtomName(a.clone()));
            }
            if atoms[..i].contains(a) {
                return Err(LogicError::DuplicateAtom(a.clone()));
            }
        }
        let limit = max_atoms.min(63);
        if atoms.len() > limit {
            return Err(LogicError::TooManyAtoms {
                count: atoms.len(),
                limit,
            });
        }
        let mut u = Universe {
            atoms,
            constraints: Vec::new(),
            admissible: Vec::new(),
        };
        let compiled: Vec<Compiled> = constraints
            .iter()
            .map(|c| u.compile(c))
            .collect::<Result<_, _>>()?;
        u.constraints = constraints;
        u.admissible = (0..1u64 << u.atoms.len())
            .filter(|&m| !compiled.iter().any(|c| c.eval(m)))
            .map(World)
            .collect();
        Ok(u)
    }

    /// Universe over the atoms of `formulas` in first-occurrence order.
    pub fn spanning(formulas: &[&Formula], constraints: Vec<Formula>) -> Result<Self, LogicError> {
        let mut atoms: Vec<String> = Vec::new();
        for f in formulas.iter().copied().chain(constraints.iter()) {
            for a in f.atoms() {
                if !atoms.contains(&a) {
                    atoms.push(a);
                }
            }
        }
        Self::new(atoms, constraints)
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn constraints(&self) -> &[Formula] {
        &self.constraints
    }

    pub fn admissible_worlds(&self) -> &[World] {
        &self.admissible
    }

    pub(crate) fn compile(&self, f: &Formula) -> Result<Compiled, LogicError> {
        Compiled::compile(f, &|name| {
            self.atoms.iter().position(|a| a == name).map(|p| p as u32)
        })
    }

    pub fn holds(&self, f: &Formula, w: World) -> Result<bool, LogicError> {
        Ok(self.compile(f)?.eval(w.0))
    }

    pub fn assignment(&self, w: World) -> BTreeMap<String, bool> {
        self.atoms
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), w.holds(i)))
            .collect()
    }

    pub fn world(&self, assignment: &BTreeMap<String, bool>) -> Result<World, LogicError> {
        let mut mask = 0;
        for (i, a) in self.atoms.iter().enumerate() {
            match assignment.get(a) {
                Some(true) => mask |= 1 << i,
                Some(false) => {}
                None => return Err(LogicError::MissingAtom(a.clone())),
            }
        }
        Ok(World(mask))
    }

    /// Renders a world as a conjunction of literals, e.g. `~A & B & C`.
    pub fn describe(&self, w: World) -> String {
        let lits: Vec<String> = self
            .atoms
            .iter()
            .enumerate()
            .map(|(i, a)| {
                if w.holds(i) {
                    a.clone()
                } else {
                    alloc::format!("~{a}")
                }
            })
            .collect();
        if lits.is_empty() {
            "T".to_string()
        } else {
            lits.join(" & ")
        }
    }

    pub fn is_possible(&self, f: &Formula) -> Result<bool, LogicError> {
        let c = self.compile(f)?;
        Ok(self.admissible.iter().any(|w| c.eval(w.0)))
    }

    /// True iff no admissible world satisfies `f` and not `g`.
    pub fn implies(&self, f: &Formula, g: &Formula) -> Result<bool, LogicError> {
        Ok(self.implication_witness(f, g)?.is_none())
    }

    /// First admissible world satisfying `f` and not `g`.
    pub fn implication_witness(
        &self,
        f: &Formula,
        g: &Formula,
    ) -> Result<Option<World>, LogicError> {
        let (cf, cg) = (self.compile(f)?, self.compile(g)?);
        Ok(self
            .admissible
            .iter()
            .copied()
            .find(|w| cf.eval(w.0) && !cg.eval(w.0)))
    }

    /// True iff all `2^n` joint truth patterns of `events` occur.
    pub fn events_independent(&self, events: &[Formula]) -> Result<bool, LogicError> {
        if events.len() > 20 {
            return Err(LogicError::FamilyTooLarge(events.len()));
        }
        let compiled: Vec<Compiled> = events
            .iter()
            .map(|e| self.compile(e))
            .collect::<Result<_, _>>()?;
        let mut seen = alloc::vec![false; 1 << events.len()];
        for w in &self.admissible {
            let code = compiled
                .iter()
                .enumerate()
                .fold(0usize, |m, (i, c)| m | (c.eval(w.0) as usize) << i);
            seen[code] = true;
        }
        Ok(seen.iter().all(|&s| s))
    }
}

/// `consequent | antecedent`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionalEvent {
    pub name: String,
    pub consequent: Formula,
    pub antecedent: Formula,
}

impl ConditionalEvent {
    pub fn new(name: impl Into<String>, consequent: Formula, antecedent: Formula) -> Self {
        ConditionalEvent {
            name: name.into(),
            consequent,
            antecedent,
        }
    }

    /// Parses both parts from formula text.
    pub fn parse(
        name: impl Into<String>,
        consequent: &str,
        antecedent: &str,
    ) -> Result<Self, LogicError> {
        Ok(Self::new(
            name,
            parse_formula(consequent)?,
            parse_formula(antecedent)?,
        ))
    }

    /// Unconditional event, i.e. conditioned on `T`.
    pub fn event(name: impl Into<String>, event: Formula) -> Self {
        Self::new(name, event, Formula::True)
    }

    pub fn negated(&self) -> Self {
        ConditionalEvent::new(
            alloc::format!("~{}", self.name),
            negate_formula(&self.consequent),
            self.antecedent.clone(),
        )
    }
}

fn negate_formula(f: &Formula) -> Formula {
    match f {
        Formula::Not(inner) => (**inner).clone(),
        other => Formula::not(other.clone()),
    }
}

fn wrap(f: &Formula) -> String {
    match f {
        Formula::And(_) | Formula::Or(_) => alloc::format!("({f})"),
        _ => f.to_string(),
    }
}

impl fmt::Display for ConditionalEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} given {}",
            wrap(&self.consequent),
            wrap(&self.antecedent)
        )
    }
}

/// Goodman-Nguyen inclusion: `AH ⊆ BK` and `~B K ⊆ ~A H`.
pub fn gn_inclusion(
    universe: &Universe,
    p: &ConditionalEvent,
    q: &ConditionalEvent,
) -> Result<bool, LogicError> {
    let ah = Formula::and([p.consequent.clone(), p.antecedent.clone()]);
    let bk = Formula::and([q.consequent.clone(), q.antecedent.clone()]);
    let not_a_h = Formula::and([negate_formula(&p.consequent), p.antecedent.clone()]);
    let not_b_k = Formula::and([negate_formula(&q.consequent), q.antecedent.clone()]);
    Ok(universe.implies(&ah, &bk)? && universe.implies(&not_b_k, &not_a_h)?)
}

/// Three-valued status of a conditional event in a world.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    True,
    False,
    Void,
}

impl Status {
    pub fn letter(self) -> char {
        match self {
            Status::True => 'T',
            Status::False => 'F',
            Status::Void => 'V',
        }
    }
}

/// Positions a constituent makes true, false and void.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tripartition {
    pub truths: IndexSet,
    pub falsities: IndexSet,
    pub voids: IndexSet,
}

impl Tripartition {
    pub fn status(&self, i: usize) -> Status {
        if self.truths.contains(i) {
            Status::True
        } else if self.falsities.contains(i) {
            Status::False
        } else {
            Status::Void
        }
    }

    /// The tripartition seen by the subfamily `members`.
    pub fn restrict(&self, members: IndexSet) -> Tripartition {
        Tripartition {
            truths: self.truths.intersection(members),
            falsities: self.falsities.intersection(members),
            voids: self.voids.intersection(members),
        }
    }

    /// True when every member of `members` is void here.
    pub fn all_void(&self, members: IndexSet) -> bool {
        members.is_subset(self.voids)
    }

    /// Status letters over positions `0..n`, e.g. `TFV`.
    pub fn signature(&self, n: usize) -> String {
        (0..n).map(|i| self.status(i).letter()).collect()
    }

    fn order_key(&self, n: usize) -> u64 {
        (0..n).fold(0u64, |acc, i| acc * 3 + self.status(i) as u64)
    }
}

/// One cell of the partition generated by a family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constituent {
    /// `0` is reserved for the cell where every antecedent is false.
    pub index: usize,
    pub worlds: Vec<World>,
    pub tripartition: Tripartition,
}

impl Constituent {
    pub fn is_c0(&self) -> bool {
        self.index == 0
    }
}

/// A universe together with a family of conditional events and the
/// constituents they generate.
///
/// Constituents are ordered by their status pattern read as a base-3 number
/// (true < false < void, first member most significant). `C_0`, if present,
/// comes last.
#[derive(Debug, Clone)]
pub struct Frame {
    universe: Universe,
    family: Vec<ConditionalEvent>,
    constituents: Vec<Constituent>,
    lookup: BTreeMap<World, usize>,
}

impl Frame {
    pub fn new(universe: Universe, family: Vec<ConditionalEvent>) -> Result<Self, LogicError> {
        if family.len() > 40 {
            return Err(LogicError::FamilyTooLarge(family.len()));
        }
        let compiled: Vec<(Compiled, Compiled)> = family
            .iter()
            .map(|c| {
                Ok((
                    universe.compile(&c.consequent)?,
                    universe.compile(&c.antecedent)?,
                ))
            })
            .collect::<Result<_, LogicError>>()?;
        let n = family.len();
        let mut groups: BTreeMap<(u64, u64), Vec<World>> = BTreeMap::new();
        let mut antecedent_seen = IndexSet::EMPTY;
        for &w in universe.admissible_worlds() {
            let mut t = IndexSet::EMPTY;
            let mut f = IndexSet::EMPTY;
            for (i, (e, h)) in compiled.iter().enumerate() {
                if h.eval(w.0) {
                    antecedent_seen.insert(i);
                    if e.eval(w.0) {
                        t.insert(i);
                    } else {
                        f.insert(i);
                    }
                }
            }
            groups.entry((t.0, f.0)).or_default().push(w);
        }
        if let Some(i) = IndexSet::full(n).difference(antecedent_seen).first() {
            return Err(LogicError::ImpossibleAntecedent(family[i].name.clone()));
        }
        let full = IndexSet::full(n);
        let mut constituents: Vec<Constituent> = groups
            .into_iter()
            .map(|((t, f), worlds)| {
                let truths = IndexSet(t);
                let falsities = IndexSet(f);
                Constituent {
                    index: 0,
                    worlds,
                    tripartition: Tripartition {
                        truths,
                        falsities,
                        voids: full.difference(truths.union(falsities)),
                    },
                }
            })
            .collect();
        constituents.sort_by_key(|c| c.tripartition.order_key(n));
        let mut next = 1;
        for c in &mut constituents {
            if c.tripartition.voids == full {
                c.index = 0;
            } else {
                c.index = next;
                next += 1;
            }
        }
        let mut lookup = BTreeMap::new();
        for (pos, c) in constituents.iter().enumerate() {
            for &w in &c.worlds {
                lookup.insert(w, pos);
            }
        }
        Ok(Frame {
            universe,
            family,
            constituents,
            lookup,
        })
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn family(&self) -> &[ConditionalEvent] {
        &self.family
    }

    pub fn len(&self) -> usize {
        self.family.len()
    }

    pub fn is_empty(&self) -> bool {
        self.family.is_empty()
    }

    pub fn members(&self) -> IndexSet {
        IndexSet::full(self.family.len())
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.family.iter().position(|c| c.name == name)
    }

    /// All constituents, `C_0` last when present.
    pub fn constituents(&self) -> &[Constituent] {
        &self.constituents
    }

    /// Position in [`Frame::constituents`] of the cell containing `w`.
    pub fn constituent_of(&self, w: World) -> Option<usize> {
        self.lookup.get(&w).copied()
    }

    pub fn c0(&self) -> Option<&Constituent> {
        self.constituents.iter().find(|c| c.is_c0())
    }

    /// True iff all `3^n` status patterns are realized.
    pub fn is_logically_independent(&self) -> bool {
        let n = self.family.len() as u32;
        n <= 40 && self.constituents.len() as u128 == 3u128.pow(n)
    }
}

/// Enumerates the constituents of `family` under the universe's constraints.
pub fn enumerate_constituents(
    universe: &Universe,
    family: &[ConditionalEvent],
) -> Result<Vec<Constituent>, LogicError> {
    Ok(Frame::new(universe.clone(), family.to_vec())?.constituents)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn ce(name: &str, e: &str, h: &str) -> ConditionalEvent {
        ConditionalEvent::parse(name, e, h).unwrap()
    }

    #[test]
    fn single_conditional_splits_three_ways() {
        let u = Universe::new(["E", "H"], vec![]).unwrap();
        let frame = Frame::new(u, vec![ce("p", "E", "H")]).unwrap();
        let cs = frame.constituents();
        assert_eq!(cs.len(), 3);
        assert_eq!(cs[0].tripartition.signature(1), "T");
        assert_eq!(cs[1].tripartition.signature(1), "F");
        assert_eq!(cs[2].tripartition.signature(1), "V");
        assert_eq!(cs[2].index, 0);
        assert_eq!(cs[2].worlds.len(), 2);
        assert!(frame.is_logically_independent());
    }

    #[test]
    fn three_independent_conditionals_give_table_order() {
        let u = Universe::new(["E1", "H1", "E2", "H2", "E3", "H3"], vec![]).unwrap();
        let fam = vec![
            ce("a", "E1", "H1"),
            ce("b", "E2", "H2"),
            ce("c", "E3", "H3"),
        ];
        let cs = enumerate_constituents(&u, &fam).unwrap();
        assert_eq!(cs.len(), 27);
        assert_eq!(cs[0].tripartition.signature(3), "TTT");
        assert_eq!(cs[8].index, 9);
        assert_eq!(cs[8].tripartition.signature(3), "TVV");
        assert_eq!(cs[25].tripartition.signature(3), "VVF");
        assert!(cs[26].is_c0());
        let total: usize = cs.iter().map(|c| c.worlds.len()).sum();
        assert_eq!(total, 64);
    }

    #[test]
    fn constraint_removes_constituent() {
        let u = Universe::new(["A", "B", "C"], vec![f("~A & B & C")]).unwrap();
        let frame = Frame::new(u.clone(), vec![ce("cb", "C", "B"), ce("ba", "B", "A")]).unwrap();
        let w = u
            .world(
                &[("A", false), ("B", true), ("C", true)]
                    .iter()
                    .map(|(k, v)| (k.to_string(), *v))
                    .collect(),
            )
            .unwrap();
        assert_eq!(frame.constituent_of(w), None);
        assert_eq!(u.admissible_worlds().len(), 7);
        let unconstrained = Universe::new(["A", "B", "C"], vec![]).unwrap();
        let full = Frame::new(unconstrained, vec![ce("cb", "C", "B"), ce("ba", "B", "A")]).unwrap();
        assert!(frame.constituents().len() <= full.constituents().len());
        let sig_tv = full
            .constituents()
            .iter()
            .filter(|c| c.tripartition.signature(2) == "TV")
            .count();
        assert_eq!(sig_tv, 1);
        let sig_tv_c = frame
            .constituents()
            .iter()
            .filter(|c| c.tripartition.signature(2) == "TV")
            .count();
        assert_eq!(sig_tv_c, 0);
    }

    #[test]
    fn impossible_antecedent_is_rejected() {
        let u = Universe::new(["A"], vec![]).unwrap();
        let err = Frame::new(u, vec![ce("bad", "A", "A & ~A")]).unwrap_err();
        assert_eq!(err, LogicError::ImpossibleAntecedent("bad".into()));
    }

    #[test]
    fn implication() {
        let u = Universe::new(["A", "B"], vec![]).unwrap();
        assert!(u.implies(&f("A & B"), &f("A")).unwrap());
        assert!(!u.implies(&f("A"), &f("A & B")).unwrap());
        assert!(u.implies(&Formula::False, &f("B")).unwrap());
    }

    #[test]
    fn goodman_nguyen_inclusion() {
        let u = Universe::new(["A", "B", "C"], vec![]).unwrap();
        assert!(gn_inclusion(&u, &ce("p", "B & C", "A"), &ce("q", "C", "A & B")).unwrap());
        assert!(gn_inclusion(&u, &ce("p", "A & B & C", "A | B"), &ce("q", "C", "A")).unwrap());
        assert!(!gn_inclusion(&u, &ce("p", "C", "B"), &ce("q", "C", "A")).unwrap());
        let ah = f("C & B");
        let bk = f("C & A");
        let witness = u.implication_witness(&ah, &bk).unwrap().unwrap();
        assert_eq!(u.describe(witness), "~A & B & C");
    }

    #[test]
    fn independence() {
        let u = Universe::new(["A", "B"], vec![]).unwrap();
        assert!(u.events_independent(&[f("A"), f("B")]).unwrap());
        assert!(!u.events_independent(&[f("A"), f("A & B")]).unwrap());
        let u4 = Universe::new(["E1", "H1", "E2", "H2"], vec![]).unwrap();
        let frame = Frame::new(u4, vec![ce("a", "E1", "H1"), ce("b", "E2", "H2")]).unwrap();
        assert_eq!(frame.constituents().len(), 9);
        assert!(frame.is_logically_independent());
        let u3 = Universe::new(["A", "B", "C"], vec![]).unwrap();
        let dep = Frame::new(u3, vec![ce("a", "B", "A"), ce("b", "C", "A")]).unwrap();
        assert!(!dep.is_logically_independent());
    }

    #[test]
    fn universe_validation() {
        assert!(matches!(
            Universe::new(["A", "A"], vec![]),
            Err(LogicError::DuplicateAtom(_))
        ));
        assert!(matches!(
            Universe::new(["T"], vec![]),
            Err(LogicError::InvalidAtomName(_))
        ));
        assert!(matches!(
            Universe::with_max_atoms(["A", "B", "C"], vec![], 2),
            Err(LogicError::TooManyAtoms { count: 3, limit: 2 })
        ));
        assert!(matches!(
            Universe::new(["A"], vec![f("Z")]),
            Err(LogicError::UnknownAtom(_))
        ));
    }

    #[test]
    fn display_of_conditionals() {
        let c = ce("q", "(~H | A) & (~K | B)", "H | K");
        assert_eq!(c.to_string(), "((~H | A) & (~K | B)) given (H | K)");
        assert_eq!(ce("p", "~C", "A").negated().consequent, f("C"));
    }
}
