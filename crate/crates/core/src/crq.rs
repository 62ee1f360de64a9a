//! Conditional random quantities built from a family of conditional events:
//! conjunction, disjunction, quasi conjunction and their negations, kept as
//! value tables over the constituents of a [`Frame`].

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::logic::{ConditionalEvent, Formula, Frame, IndexSet, Tripartition};
use crate::rational::{format_fraction, in_unit_interval};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CrqError {
    #[error("no value supplied for {0}")]
    MissingSymbol(PrevisionSymbol),
    #[error("value {value} for {symbol} lies outside [0,1]")]
    OutOfRange {
        symbol: PrevisionSymbol,
        value: String,
    },
    #[error("table still holds symbolic entries")]
    Symbolic,
    #[error("tables are built over different constituents")]
    FrameMismatch,
    #[error("supplied symbols violate the duality y = 1 - t on {0}")]
    InconsistentSupply(IndexSet),
    #[error("subset {0} is empty or outside the family")]
    BadSubset(IndexSet),
    #[error("compound prevision undefined: the conditioning conjunction has prevision 0")]
    Undefined,
    #[error("compound prevision needs 0 <= z_next <= z <= 1")]
    InvalidCompound,
}

/// Which operation a prevision symbol or table refers to.
///
/// `NegatedConjunction` and `NegatedDisjunction` act on the family with
/// every consequent negated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolKind {
    Conjunction,
    Disjunction,
    Quasi,
    NegatedConjunction,
    NegatedDisjunction,
}

impl SymbolKind {
    pub fn letter(self) -> char {
        match self {
            SymbolKind::Conjunction => 'x',
            SymbolKind::Disjunction => 'y',
            SymbolKind::Quasi => 'q',
            SymbolKind::NegatedConjunction => 't',
            SymbolKind::NegatedDisjunction => 's',
        }
    }

    fn is_negated_family(self) -> bool {
        matches!(
            self,
            SymbolKind::NegatedConjunction | SymbolKind::NegatedDisjunction
        )
    }
}

/// The prevision of an operation applied to the subfamily `subset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrevisionSymbol {
    pub kind: SymbolKind,
    pub subset: IndexSet,
}

impl PrevisionSymbol {
    pub fn new(kind: SymbolKind, subset: IndexSet) -> Self {
        PrevisionSymbol { kind, subset }
    }

    pub fn conj(subset: IndexSet) -> Self {
        Self::new(SymbolKind::Conjunction, subset)
    }

    pub fn disj(subset: IndexSet) -> Self {
        Self::new(SymbolKind::Disjunction, subset)
    }

    pub fn quasi(subset: IndexSet) -> Self {
        Self::new(SymbolKind::Quasi, subset)
    }

    /// Probability of the single conditional at position `i`.
    pub fn conditional(i: usize) -> Self {
        Self::conj(IndexSet::singleton(i))
    }

    /// Value of the quantity on a constituent with tripartition `trip`.
    ///
    /// Where the quantity's own antecedent is false the value is its own
    /// symbol; where a proper part is void it is the symbol of that part.
    pub fn value_at(&self, trip: &Tripartition) -> CrqValue {
        let t = trip.restrict(self.subset);
        let (truths, falsities) = if self.kind.is_negated_family() {
            (t.falsities, t.truths)
        } else {
            (t.truths, t.falsities)
        };
        let voids = t.voids;
        match self.kind {
            SymbolKind::Conjunction | SymbolKind::NegatedConjunction => {
                if truths == self.subset {
                    CrqValue::one()
                } else if !falsities.is_empty() {
                    CrqValue::zero()
                } else {
                    CrqValue::Symbol(PrevisionSymbol::new(self.kind, voids))
                }
            }
            SymbolKind::Disjunction | SymbolKind::NegatedDisjunction => {
                if !truths.is_empty() {
                    CrqValue::one()
                } else if falsities == self.subset {
                    CrqValue::zero()
                } else {
                    CrqValue::Symbol(PrevisionSymbol::new(self.kind, voids))
                }
            }
            SymbolKind::Quasi => {
                if !falsities.is_empty() {
                    CrqValue::zero()
                } else if !truths.is_empty() {
                    CrqValue::one()
                } else {
                    CrqValue::Symbol(*self)
                }
            }
        }
    }

    /// Relabels the subset through `map` (see [`IndexSet::remap`]).
    pub fn remap(&self, map: &[usize]) -> Self {
        PrevisionSymbol::new(self.kind, self.subset.remap(map))
    }
}

impl fmt::Display for PrevisionSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letter = self.kind.letter();
        if self.subset.len() == 1 {
            write!(f, "{letter}{}", self.subset.first().unwrap_or(0) + 1)
        } else {
            write!(f, "{letter}{}", self.subset)
        }
    }
}

/// A table entry: a number, a prevision symbol, or one minus a symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CrqValue {
    Number(Rational),
    Symbol(PrevisionSymbol),
    Complement(PrevisionSymbol),
}

impl CrqValue {
    pub fn zero() -> Self {
        CrqValue::Number(Rational::zero())
    }

    pub fn one() -> Self {
        CrqValue::Number(Rational::one())
    }

    pub fn number(&self) -> Option<&Rational> {
        match self {
            CrqValue::Number(r) => Some(r),
            _ => None,
        }
    }

    pub fn complement(&self) -> Self {
        match self {
            CrqValue::Number(r) => CrqValue::Number(Rational::one() - r),
            CrqValue::Symbol(s) => CrqValue::Complement(*s),
            CrqValue::Complement(s) => CrqValue::Symbol(*s),
        }
    }

    pub fn resolve(&self, assessment: &Assessment) -> Result<Rational, CrqError> {
        match self {
            CrqValue::Number(r) => Ok(r.clone()),
            CrqValue::Symbol(s) => assessment.resolve_checked(s),
            CrqValue::Complement(s) => Ok(Rational::one() - assessment.resolve_checked(s)?),
        }
    }

    pub fn map_symbol(&self, f: impl Fn(&PrevisionSymbol) -> PrevisionSymbol) -> Self {
        match self {
            CrqValue::Number(r) => CrqValue::Number(r.clone()),
            CrqValue::Symbol(s) => CrqValue::Symbol(f(s)),
            CrqValue::Complement(s) => CrqValue::Complement(f(s)),
        }
    }
}

impl fmt::Display for CrqValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CrqValue::Number(r) => f.write_str(&format_fraction(r)),
            CrqValue::Symbol(s) => write!(f, "{s}"),
            CrqValue::Complement(s) => write!(f, "1-{s}"),
        }
    }
}

/// Prevision values for symbols.
///
/// Singletons fall back to the single conditional's probability: `y{i}` and
/// `q{i}` read `x{i}`, while `t{i}` and `s{i}` read `1 - x{i}`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assessment {
    entries: BTreeMap<PrevisionSymbol, Rational>,
}

impl Assessment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, symbol: PrevisionSymbol, value: Rational) {
        self.entries.insert(symbol, value);
    }

    pub fn with(mut self, symbol: PrevisionSymbol, value: Rational) -> Self {
        self.set(symbol, value);
        self
    }

    /// Assessment of the single conditionals `0..values.len()`.
    pub fn of_conditionals(values: &[Rational]) -> Self {
        let mut a = Self::new();
        for (i, v) in values.iter().enumerate() {
            a.set(PrevisionSymbol::conditional(i), v.clone());
        }
        a
    }

    pub fn get(&self, symbol: &PrevisionSymbol) -> Option<&Rational> {
        self.entries.get(symbol)
    }

    pub fn remove(&mut self, symbol: &PrevisionSymbol) -> Option<Rational> {
        self.entries.remove(symbol)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PrevisionSymbol, &Rational)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Value of `symbol`, using the singleton fallbacks.
    pub fn resolve(&self, symbol: &PrevisionSymbol) -> Option<Rational> {
        if let Some(v) = self.entries.get(symbol) {
            return Some(v.clone());
        }
        if symbol.subset.len() != 1 {
            return None;
        }
        let base = self.entries.get(&PrevisionSymbol::conj(symbol.subset))?;
        match symbol.kind {
            SymbolKind::Conjunction => None,
            SymbolKind::Disjunction | SymbolKind::Quasi => Some(base.clone()),
            SymbolKind::NegatedConjunction | SymbolKind::NegatedDisjunction => {
                Some(Rational::one() - base)
            }
        }
    }

    fn resolve_checked(&self, symbol: &PrevisionSymbol) -> Result<Rational, CrqError> {
        let v = self
            .resolve(symbol)
            .ok_or(CrqError::MissingSymbol(*symbol))?;
        if in_unit_interval(&v) {
            Ok(v)
        } else {
            Err(CrqError::OutOfRange {
                symbol: *symbol,
                value: format_fraction(&v),
            })
        }
    }

    /// Relabels every symbol through `map` (see [`IndexSet::remap`]).
    pub fn remap(&self, map: &[usize]) -> Self {
        Assessment {
            entries: self
                .entries
                .iter()
                .map(|(s, v)| (s.remap(map), v.clone()))
                .collect(),
        }
    }
}

/// One row of a table, aligned with a constituent of the frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrqRow {
    /// Constituent index `h` (0 for `C_0`).
    pub constituent: usize,
    /// Status letters over the whole frame family.
    pub signature: String,
    /// False when every antecedent of the table's subfamily is false here.
    pub in_scope: bool,
    pub value: CrqValue,
}

/// A conditional random quantity as a map from constituents to values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrqTable {
    pub symbol: PrevisionSymbol,
    /// True after an odd number of [`negate`] calls.
    pub negated: bool,
    pub rows: Vec<CrqRow>,
}

impl CrqTable {
    fn build(frame: &Frame, symbol: PrevisionSymbol) -> Result<Self, CrqError> {
        if symbol.subset.is_empty() || !symbol.subset.is_subset(frame.members()) {
            return Err(CrqError::BadSubset(symbol.subset));
        }
        let n = frame.len();
        let rows = frame
            .constituents()
            .iter()
            .map(|c| CrqRow {
                constituent: c.index,
                signature: c.tripartition.signature(n),
                in_scope: !c.tripartition.all_void(symbol.subset),
                value: symbol.value_at(&c.tripartition),
            })
            .collect();
        Ok(CrqTable {
            symbol,
            negated: false,
            rows,
        })
    }

    /// Value on the constituent at position `pos` of the frame.
    pub fn value_at(&self, pos: usize) -> &CrqValue {
        &self.rows[pos].value
    }

    /// Value of the all-void cell, i.e. the prevision of the whole quantity.
    pub fn c0_value(&self) -> CrqValue {
        let v = CrqValue::Symbol(self.symbol);
        if self.negated {
            v.complement()
        } else {
            v
        }
    }

    pub fn is_numeric(&self) -> bool {
        self.rows.iter().all(|r| r.value.number().is_some())
    }

    /// Replaces every symbol with its assessed value.
    pub fn instantiate(&self, assessment: &Assessment) -> Result<CrqTable, CrqError> {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                Ok(CrqRow {
                    value: CrqValue::Number(r.value.resolve(assessment)?),
                    ..r.clone()
                })
            })
            .collect::<Result<_, CrqError>>()?;
        Ok(CrqTable {
            rows,
            ..self.clone()
        })
    }

    /// Canonical rendering, one `C_h | signature | value` line per row.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            out.push_str(&alloc::format!(
                "C_{} | {} | {}\n",
                r.constituent,
                r.signature,
                r.value
            ));
        }
        out
    }

    fn numbers(&self) -> Result<Vec<&Rational>, CrqError> {
        self.rows
            .iter()
            .map(|r| r.value.number().ok_or(CrqError::Symbolic))
            .collect()
    }
}

/// Conjunction of the subfamily `members`, with symbols `x_S`.
pub fn conjunction_table(frame: &Frame, members: IndexSet) -> Result<CrqTable, CrqError> {
    CrqTable::build(frame, PrevisionSymbol::conj(members))
}

/// Disjunction of the subfamily `members`, with symbols `y_S`.
pub fn disjunction_table(frame: &Frame, members: IndexSet) -> Result<CrqTable, CrqError> {
    CrqTable::build(frame, PrevisionSymbol::disj(members))
}

/// Conjunction of the subfamily with negated consequents, symbols `t_S`.
pub fn negated_conjunction_table(frame: &Frame, members: IndexSet) -> Result<CrqTable, CrqError> {
    CrqTable::build(
        frame,
        PrevisionSymbol::new(SymbolKind::NegatedConjunction, members),
    )
}

/// Disjunction of the subfamily with negated consequents, symbols `s_S`.
pub fn negated_disjunction_table(frame: &Frame, members: IndexSet) -> Result<CrqTable, CrqError> {
    CrqTable::build(
        frame,
        PrevisionSymbol::new(SymbolKind::NegatedDisjunction, members),
    )
}

/// `1 - table`, entrywise. Symbols become formal complements.
pub fn negate(table: &CrqTable) -> CrqTable {
    CrqTable {
        symbol: table.symbol,
        negated: !table.negated,
        rows: table
            .rows
            .iter()
            .map(|r| CrqRow {
                value: r.value.complement(),
                ..r.clone()
            })
            .collect(),
    }
}

/// The quasi conjunction of `members` as a conditional event, together with
/// its table over the frame.
pub fn quasi_conjunction(
    frame: &Frame,
    members: IndexSet,
) -> Result<(ConditionalEvent, CrqTable), CrqError> {
    let table = CrqTable::build(frame, PrevisionSymbol::quasi(members))?;
    Ok((quasi_conjunction_event(frame.family(), members), table))
}

/// `AND_i (~H_i | E_i H_i) given OR_i H_i` over the selected members.
pub fn quasi_conjunction_event(family: &[ConditionalEvent], members: IndexSet) -> ConditionalEvent {
    let chosen: Vec<&ConditionalEvent> = members.iter().map(|i| &family[i]).collect();
    let consequent = Formula::and(chosen.iter().map(|c| {
        Formula::or([
            Formula::not(c.antecedent.clone()),
            Formula::and([c.consequent.clone(), c.antecedent.clone()]),
        ])
    }));
    let antecedent = Formula::or(chosen.iter().map(|c| c.antecedent.clone()));
    let name = alloc::format!("QC{}", members);
    ConditionalEvent::new(name, consequent, antecedent)
}

/// Position of the first row in scope for either table where `a > b`.
pub fn dominance_witness(a: &CrqTable, b: &CrqTable) -> Result<Option<usize>, CrqError> {
    if a.rows.len() != b.rows.len()
        || a.rows
            .iter()
            .zip(&b.rows)
            .any(|(x, y)| x.signature != y.signature)
    {
        return Err(CrqError::FrameMismatch);
    }
    let (va, vb) = (a.numbers()?, b.numbers()?);
    Ok((0..a.rows.len()).find(|&k| (a.rows[k].in_scope || b.rows[k].in_scope) && va[k] > vb[k]))
}

/// True iff `a <= b` wherever some antecedent of either side is true.
pub fn dominates(a: &CrqTable, b: &CrqTable) -> Result<bool, CrqError> {
    Ok(dominance_witness(a, b)?.is_none())
}

/// Entrywise equality on the rows in scope for either table.
pub fn coincide(a: &CrqTable, b: &CrqTable) -> Result<bool, CrqError> {
    Ok(dominates(a, b)? && dominates(b, a)?)
}

/// Checks both De Morgan laws on the whole family of `frame`.
///
/// The assessment supplies `y_S` (disjunctions over the family) and `t_S`
/// (conjunctions over the negated family); wherever both resolve they must
/// satisfy `y_S = 1 - t_S`.
pub fn check_de_morgan(frame: &Frame, assessment: &Assessment) -> Result<bool, CrqError> {
    let all = frame.members();
    for s in all.nonempty_subsets_lex() {
        let y = assessment.resolve(&PrevisionSymbol::disj(s));
        let t = assessment.resolve(&PrevisionSymbol::new(SymbolKind::NegatedConjunction, s));
        if let (Some(y), Some(t)) = (y, t) {
            if y + t != Rational::one() {
                return Err(CrqError::InconsistentSupply(s));
            }
        }
    }
    let d = disjunction_table(frame, all)?.instantiate(assessment)?;
    let c_neg = negated_conjunction_table(frame, all)?.instantiate(assessment)?;
    let first = negate(&d)
        .rows
        .iter()
        .zip(&c_neg.rows)
        .all(|(l, r)| l.value == r.value);
    let second = negate(&c_neg)
        .rows
        .iter()
        .zip(&d.rows)
        .all(|(l, r)| l.value == r.value);
    Ok(first && second)
}

/// Compound prevision `z_next / z` of the iterated conditional.
pub fn iterated_prevision(z: &Rational, z_next: &Rational) -> Result<Rational, CrqError> {
    if z.is_zero() {
        return Err(CrqError::Undefined);
    }
    if z_next.is_negative() || z_next > z || *z > Rational::one() {
        return Err(CrqError::InvalidCompound);
    }
    Ok(z_next / z)
}
