//! p-consistency and p-entailment for families of conditional events.
//!
//! A family is p-consistent when assessing every member at 1 is coherent; it
//! p-entails a conclusion when every such assessment forces the conclusion to
//! one. p-entailment is decided by searching for a subfamily whose quasi
//! conjunction is included in the conclusion, and cross-checked against the
//! lower end of the conclusion's extension interval.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_traits::One;
use thiserror::Error;

use crate::coherence::{check_coherence, extension_interval, CoherenceError};
use crate::crq::{
    coincide, conjunction_table, dominates, quasi_conjunction_event, Assessment, CrqError,
    PrevisionSymbol,
};
use crate::logic::{
    gn_inclusion, parse_formula, ConditionalEvent, Formula, Frame, IndexSet, LogicError, Universe,
};
use crate::Rational;

/// Largest premise set for which the subfamily search runs.
pub const ENTAILMENT_GUARD: usize = 10;

/// Largest premise set whose conjunction lattice is checked for consistency.
const LATTICE_GUARD: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EntailmentError {
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Crq(#[from] CrqError),
    #[error(transparent)]
    Coherence(#[from] CoherenceError),
    #[error("a rule needs at least one premise")]
    NoPremises,
    #[error("{count} premises exceed the limit of {limit}")]
    TooManyPremises { count: usize, limit: usize },
    #[error("the premise set is not p-consistent")]
    NotPConsistent,
    #[error("independent procedures disagree: {0}")]
    Disagreement(String),
    #[error("unknown rule {0}")]
    UnknownRule(String),
}

/// Premises, conclusion and the logical setting they live in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InferenceRule {
    pub name: String,
    pub atoms: Vec<String>,
    /// Formulas declared impossible.
    pub constraints: Vec<Formula>,
    pub premises: Vec<ConditionalEvent>,
    pub conclusion: ConditionalEvent,
    /// Known verdict for catalog rules.
    pub expected_valid: Option<bool>,
}

impl InferenceRule {
    pub fn universe(&self) -> Result<Universe, EntailmentError> {
        Ok(Universe::new(
            self.atoms.iter().cloned(),
            self.constraints.clone(),
        )?)
    }

    fn joint_family(&self) -> Vec<ConditionalEvent> {
        let mut family = self.premises.clone();
        family.push(self.conclusion.clone());
        family
    }
}

/// Why a rule is p-valid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// Premise positions whose quasi conjunction is included in the conclusion.
    Subset(IndexSet),
    AntecedentImpliesConsequent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntailmentVerdict {
    pub p_consistent: bool,
    pub p_valid: bool,
    pub witness: Option<Witness>,
    /// Lowest coherent probability of the conclusion with every premise at 1.
    /// Absent when the premises are not p-consistent.
    pub lp_lower_bound: Option<Rational>,
}

fn all_ones(n: usize) -> Assessment {
    Assessment::of_conditionals(&alloc::vec![Rational::one(); n])
}

fn conditionals(n: usize) -> Vec<PrevisionSymbol> {
    (0..n).map(PrevisionSymbol::conditional).collect()
}

/// Whether assessing every premise at 1 is coherent.
///
/// For up to six premises this also checks that the whole conjunction
/// lattice at 1 is coherent and fails if the two answers differ.
pub fn p_consistent(
    universe: &Universe,
    premises: &[ConditionalEvent],
) -> Result<bool, EntailmentError> {
    if premises.is_empty() {
        return Err(EntailmentError::NoPremises);
    }
    let n = premises.len();
    let frame = Frame::new(universe.clone(), premises.to_vec())?;
    let direct = check_coherence(&frame, &conditionals(n), &all_ones(n))?.coherent;
    if n <= LATTICE_GUARD {
        let subsets = IndexSet::full(n).nonempty_subsets_lex();
        let lattice: Vec<PrevisionSymbol> =
            subsets.iter().map(|&s| PrevisionSymbol::conj(s)).collect();
        let mut ones = Assessment::new();
        for q in &lattice {
            ones.set(*q, Rational::one());
        }
        let via_lattice = check_coherence(&frame, &lattice, &ones)?.coherent;
        if via_lattice != direct {
            return Err(EntailmentError::Disagreement(
                "conjunction lattice at 1".to_string(),
            ));
        }
    }
    Ok(direct)
}

/// Decides p-entailment with the default subfamily guard.
pub fn p_entails(rule: &InferenceRule) -> Result<EntailmentVerdict, EntailmentError> {
    p_entails_with_guard(rule, ENTAILMENT_GUARD)
}

/// Decides p-entailment. Above `guard` premises only the extension interval
/// is used and no witness is reported.
pub fn p_entails_with_guard(
    rule: &InferenceRule,
    guard: usize,
) -> Result<EntailmentVerdict, EntailmentError> {
    let universe = rule.universe()?;
    if !p_consistent(&universe, &rule.premises)? {
        return Ok(EntailmentVerdict {
            p_consistent: false,
            p_valid: false,
            witness: None,
            lp_lower_bound: None,
        });
    }
    let n = rule.premises.len();
    let frame = Frame::new(universe.clone(), rule.joint_family())?;
    let range = extension_interval(
        &frame,
        &conditionals(n),
        &all_ones(n),
        PrevisionSymbol::conditional(n),
    )?;
    let lp_lower_bound = range.lo.clone();
    let lp_valid = range.lo.is_one() && range.lo_closed;
    let witness = if n > guard {
        None
    } else {
        find_witness(&universe, rule)?
    };
    if n <= guard && witness.is_some() != lp_valid {
        return Err(EntailmentError::Disagreement(alloc::format!(
            "subfamily search and lower bound {} for {}",
            lp_lower_bound,
            rule.name
        )));
    }
    Ok(EntailmentVerdict {
        p_consistent: true,
        p_valid: lp_valid,
        witness,
        lp_lower_bound: Some(lp_lower_bound),
    })
}

fn find_witness(
    universe: &Universe,
    rule: &InferenceRule,
) -> Result<Option<Witness>, EntailmentError> {
    let c = &rule.conclusion;
    if universe.implies(&c.antecedent, &c.consequent)? {
        return Ok(Some(Witness::AntecedentImpliesConsequent));
    }
    for gamma in IndexSet::full(rule.premises.len()).nonempty_subsets_lex() {
        let qc = quasi_conjunction_event(&rule.premises, gamma);
        if gn_inclusion(universe, &qc, c)? {
            return Ok(Some(Witness::Subset(gamma)));
        }
    }
    Ok(None)
}

/// Joint frame plus the candidate conclusion values to test: the ends of
/// its extension interval with every premise at 1.
fn condition_setup(rule: &InferenceRule) -> Result<(Frame, Vec<Rational>), EntailmentError> {
    let n = rule.premises.len();
    if n > ENTAILMENT_GUARD {
        return Err(EntailmentError::TooManyPremises {
            count: n,
            limit: ENTAILMENT_GUARD,
        });
    }
    let universe = rule.universe()?;
    if !p_consistent(&universe, &rule.premises)? {
        return Err(EntailmentError::NotPConsistent);
    }
    let frame = Frame::new(universe, rule.joint_family())?;
    let range = extension_interval(
        &frame,
        &conditionals(n),
        &all_ones(n),
        PrevisionSymbol::conditional(n),
    )?;
    let mut values = alloc::vec![range.lo];
    if range.hi != values[0] {
        values.push(range.hi);
    }
    Ok((frame, values))
}

/// Every conjunction over premises at 1; those involving the conclusion at `z`.
fn lattice_assessment(n: usize, z: &Rational) -> Assessment {
    let mut a = Assessment::new();
    for s in IndexSet::full(n + 1).nonempty_subsets_lex() {
        let v = if s.contains(n) {
            z.clone()
        } else {
            Rational::one()
        };
        a.set(PrevisionSymbol::conj(s), v);
    }
    a
}

/// Whether the conjunction of premises and conclusion coincides with the
/// conjunction of the premises.
pub fn check_condition_ii(rule: &InferenceRule) -> Result<bool, EntailmentError> {
    let (frame, values) = condition_setup(rule)?;
    let n = rule.premises.len();
    let premises = conjunction_table(&frame, IndexSet::full(n))?;
    let joint = conjunction_table(&frame, IndexSet::full(n + 1))?;
    for z in &values {
        let a = lattice_assessment(n, z);
        if !coincide(&joint.instantiate(&a)?, &premises.instantiate(&a)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether the conjunction of the premises never exceeds the conclusion.
pub fn check_condition_iii(rule: &InferenceRule) -> Result<bool, EntailmentError> {
    let (frame, values) = condition_setup(rule)?;
    let n = rule.premises.len();
    let premises = conjunction_table(&frame, IndexSet::full(n))?;
    let conclusion = conjunction_table(&frame, IndexSet::singleton(n))?;
    for z in &values {
        let a = lattice_assessment(n, z);
        if !dominates(&premises.instantiate(&a)?, &conclusion.instantiate(&a)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn conditional(name: &str, consequent: &str, antecedent: &str) -> ConditionalEvent {
    ConditionalEvent::parse(name, consequent, antecedent).expect("catalog formulas parse")
}

fn rule(
    name: &str,
    atoms: &[&str],
    constraints: &[&str],
    premises: Vec<ConditionalEvent>,
    conclusion: ConditionalEvent,
    expected_valid: bool,
) -> InferenceRule {
    InferenceRule {
        name: name.to_string(),
        atoms: atoms.iter().map(|a| a.to_string()).collect(),
        constraints: constraints
            .iter()
            .map(|c| parse_formula(c).expect("catalog formulas parse"))
            .collect(),
        premises,
        conclusion,
        expected_valid: Some(expected_valid),
    }
}

/// `{C|A_1, ..., C|A_n}` with conclusion `C|(A_1 | ... | A_n)`.
pub fn generalized_or(n: usize) -> InferenceRule {
    let antecedents: Vec<String> = (1..=n).map(|i| alloc::format!("A{i}")).collect();
    let mut atoms: Vec<&str> = antecedents.iter().map(String::as_str).collect();
    atoms.push("C");
    let premises = antecedents
        .iter()
        .map(|a| conditional(&alloc::format!("C|{a}"), "C", a))
        .collect();
    let disjunction = antecedents.join(" | ");
    rule(
        &alloc::format!("GeneralizedOr{n}"),
        &atoms,
        &[],
        premises,
        conditional("C|A", "C", &disjunction),
        true,
    )
}

/// The named rules with their known verdicts.
pub fn builtin_rules() -> Vec<InferenceRule> {
    let abc = ["A", "B", "C"];
    let ac = ["A", "C"];
    alloc::vec![
        rule(
            "And",
            &abc,
            &[],
            alloc::vec![conditional("B|A", "B", "A"), conditional("C|A", "C", "A")],
            conditional("BC|A", "B & C", "A"),
            true
        ),
        rule(
            "Cut",
            &abc,
            &[],
            alloc::vec![
                conditional("C|AB", "C", "A & B"),
                conditional("B|A", "B", "A")
            ],
            conditional("C|A", "C", "A"),
            true
        ),
        rule(
            "CCT",
            &abc,
            &[],
            alloc::vec![
                conditional("C|AB", "C", "A & B"),
                conditional("B|A", "B", "A")
            ],
            conditional("BC|A", "B & C", "A"),
            true
        ),
        rule(
            "CM",
            &abc,
            &[],
            alloc::vec![conditional("C|A", "C", "A"), conditional("B|A", "B", "A")],
            conditional("C|AB", "C", "A & B"),
            true
        ),
        rule(
            "Or",
            &abc,
            &[],
            alloc::vec![conditional("C|A", "C", "A"), conditional("C|B", "C", "B")],
            conditional("C|AvB", "C", "A | B"),
            true
        ),
        rule(
            "AdamsRule5",
            &abc,
            &[],
            alloc::vec![
                conditional("C|AvB", "C", "A | B"),
                conditional("~C|A", "~C", "A")
            ],
            conditional("C|B", "C", "B"),
            true
        ),
        InferenceRule {
            name: "GeneralizedOr".to_string(),
            ..generalized_or(3)
        },
        rule(
            "Transitivity",
            &abc,
            &[],
            alloc::vec![conditional("C|B", "C", "B"), conditional("B|A", "B", "A")],
            conditional("C|A", "C", "A"),
            false
        ),
        rule(
            "DenialOfAntecedent",
            &ac,
            &[],
            alloc::vec![conditional("~A", "~A", "T"), conditional("C|A", "C", "A")],
            conditional("~C", "~C", "T"),
            false
        ),
        rule(
            "AffirmationOfConsequent",
            &ac,
            &[],
            alloc::vec![conditional("C", "C", "T"), conditional("C|A", "C", "A")],
            conditional("A", "A", "T"),
            false
        ),
        rule(
            "BooleCombining",
            &abc,
            &[],
            alloc::vec![conditional("C|A", "C", "A"), conditional("C|B", "C", "B")],
            conditional("C|AB", "C", "A & B"),
            false
        ),
        rule(
            "WeakTransitivityA",
            &abc,
            &[],
            alloc::vec![
                conditional("C|B", "C", "B"),
                conditional("B|A", "B", "A"),
                conditional("A|AvB", "A", "A | B")
            ],
            conditional("C|A", "C", "A"),
            true,
        ),
        rule(
            "WeakTransitivityB",
            &abc,
            &["~A & B & C"],
            alloc::vec![conditional("C|B", "C", "B"), conditional("B|A", "B", "A")],
            conditional("C|A", "C", "A"),
            true
        ),
    ]
}

/// Catalog lookup by name, case-insensitive; `GeneralizedOrN` builds `n = N`.
pub fn find_rule(name: &str) -> Result<InferenceRule, EntailmentError> {
    if let Some(n) = name
        .strip_prefix("GeneralizedOr")
        .and_then(|rest| rest.parse::<usize>().ok())
        .filter(|&n| n >= 1)
    {
        return Ok(generalized_or(n));
    }
    builtin_rules()
        .into_iter()
        .find(|r| r.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| EntailmentError::UnknownRule(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use alloc::vec;

    fn named(name: &str) -> InferenceRule {
        find_rule(name).unwrap()
    }

    #[test]
    fn consistency_of_premise_sets() {
        let u = Universe::new(["A", "B", "C"], vec![]).unwrap();
        let and = named("And");
        assert!(p_consistent(&u, &and.premises).unwrap());
        let adams = named("AdamsRule5");
        assert!(p_consistent(&u, &adams.premises).unwrap());
        let u2 = Universe::new(["A", "H"], vec![]).unwrap();
        let clash = vec![conditional("A|H", "A", "H"), conditional("~A|H", "~A", "H")];
        assert!(!p_consistent(&u2, &clash).unwrap());
        assert_eq!(p_consistent(&u2, &[]), Err(EntailmentError::NoPremises));
    }

    #[test]
    fn inconsistent_premises_are_not_valid() {
        let r = rule(
            "Clash",
            &["A", "H"],
            &[],
            vec![conditional("A|H", "A", "H"), conditional("~A|H", "~A", "H")],
            conditional("A|H", "A", "H"),
            false,
        );
        let v = p_entails(&r).unwrap();
        assert!(!v.p_consistent && !v.p_valid);
        assert_eq!(v.lp_lower_bound, None);
        assert_eq!(check_condition_ii(&r), Err(EntailmentError::NotPConsistent));
    }

    #[test]
    fn and_rule_witness() {
        let v = p_entails(&named("And")).unwrap();
        assert!(v.p_valid);
        assert_eq!(
            v.witness,
            Some(Witness::Subset(IndexSet::from_indices([0, 1])))
        );
        assert_eq!(v.lp_lower_bound, Some(int(1)));
    }

    #[test]
    fn transitivity_fails() {
        let v = p_entails(&named("Transitivity")).unwrap();
        assert!(v.p_consistent && !v.p_valid);
        assert_eq!(v.witness, None);
        assert_eq!(v.lp_lower_bound, Some(int(0)));
    }

    #[test]
    fn catalog_verdicts() {
        let rules = builtin_rules();
        assert_eq!(rules.len(), 13);
        for r in &rules {
            let v = p_entails(r).unwrap();
            assert!(v.p_consistent, "{}", r.name);
            assert_eq!(Some(v.p_valid), r.expected_valid, "{}", r.name);
            assert_eq!(check_condition_ii(r).unwrap(), v.p_valid, "{} (ii)", r.name);
            assert_eq!(
                check_condition_iii(r).unwrap(),
                v.p_valid,
                "{} (iii)",
                r.name
            );
        }
    }

    #[test]
    fn generalized_or_family() {
        for n in 1..=4 {
            let v = p_entails(&generalized_or(n)).unwrap();
            assert!(v.p_valid, "n = {n}");
        }
    }

    #[test]
    fn tautological_conclusion() {
        let r = rule(
            "Taut",
            &["A", "B"],
            &[],
            vec![conditional("B|A", "B", "A")],
            conditional("A|AB", "A", "A & B"),
            true,
        );
        let v = p_entails(&r).unwrap();
        assert_eq!(v.witness, Some(Witness::AntecedentImpliesConsequent));
        assert!(v.p_valid);
    }

    #[test]
    fn guard_skips_witness_search() {
        let v = p_entails_with_guard(&named("And"), 1).unwrap();
        assert!(v.p_valid);
        assert_eq!(v.witness, None);
    }

    #[test]
    fn lookup() {
        assert_eq!(named("cm").name, "CM");
        assert_eq!(named("GeneralizedOr4").premises.len(), 4);
        assert_eq!(
            find_rule("Nope"),
            Err(EntailmentError::UnknownRule("Nope".into()))
        );
    }
}
