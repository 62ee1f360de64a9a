use std::path::Path;

use anyhow::{anyhow, bail, Result};
use clap::ValueEnum;
use condprob_core::bounds::{
    conj_step_bounds, frechet_conjunction_n, frechet_disjunction_n, frechet_two,
    lambda_decomposition, reverse_region_contains, sigma_prime_solution,
    three_event_extension_bounds, three_event_region_check, Interval, ThreeEventAssessment,
};
use condprob_core::coherence::{
    build_sigma, check_coherence, extension_interval, gain_values, solve_feasible, CoherenceError,
};
use condprob_core::crq::{
    conjunction_table, disjunction_table, quasi_conjunction, Assessment, CrqTable, PrevisionSymbol,
    SymbolKind,
};
use condprob_core::entailment::{
    builtin_rules, check_condition_ii, check_condition_iii, find_rule, p_entails, InferenceRule,
    Witness,
};
use condprob_core::logic::IndexSet;
use condprob_core::rational::parse_rational;
use condprob_core::Rational;

use crate::problem::{self, Op, Problem};
use crate::report::{fraction, interval, yes_no, Report};
use crate::Outcome;

fn labels(problem: &Problem, symbols: &[PrevisionSymbol]) -> String {
    if symbols.is_empty() {
        return "none".into();
    }
    symbols
        .iter()
        .map(|s| problem.label(s))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn coherence_check(problem: &Problem) -> Result<Outcome> {
    if problem.quantities.is_empty() {
        bail!("the problem file assesses nothing");
    }
    let frame = problem.frame()?;
    let verdict = check_coherence(&frame, &problem.quantities, &problem.assessment)?;
    let mut report = Report::new();
    report
        .field(
            "verdict",
            if verdict.coherent {
                "coherent"
            } else {
                "incoherent"
            },
        )
        .field("quantities", labels(problem, &problem.quantities))
        .field("passes", verdict.trace.len().to_string());
    for (k, pass) in verdict.trace.iter().enumerate() {
        let key = format!("pass {}", k + 1);
        report.field(
            format!("{key} quantities"),
            labels(problem, &pass.quantities),
        );
        report.field(format!("{key} feasible"), yes_no(pass.feasible));
        if let Some(solution) = &pass.solution {
            report.field(format!("{key} zero mass"), labels(problem, &pass.zero_mass));
            let weights: Vec<String> = solution
                .iter()
                .zip(&pass.constituents)
                .filter(|(l, _)| **l != condprob_core::rational::zero())
                .map(|(l, h)| format!("C_{h}:{}", fraction(l)))
                .collect();
            report.field(format!("{key} solution"), weights.join(","));
        }
    }
    if let Some(last) = verdict.trace.last().filter(|p| !p.feasible) {
        let sigma = build_sigma(&frame, &last.quantities, &problem.assessment)?;
        if let Some(y) = solve_feasible(&sigma)?.certificate {
            let stakes = &y[..last.quantities.len()];
            let gains = gain_values(&sigma, stakes);
            let stake_text: Vec<String> = last
                .quantities
                .iter()
                .zip(stakes)
                .map(|(q, s)| format!("{}:{}", problem.label(q), fraction(s)))
                .collect();
            report.field("sure gain stakes", stake_text.join(","));
            if let Some(min) = gains.iter().min() {
                report.field("minimum gain", fraction(min));
            }
        }
    }
    Ok(Outcome {
        report,
        positive: verdict.coherent,
    })
}

fn query_target(
    problem: &Problem,
    kind: &str,
    on: &[String],
    op: Option<Op>,
) -> Result<(Vec<String>, Op)> {
    let query = problem.file.query.as_ref().filter(|q| q.kind == kind);
    let names = if !on.is_empty() {
        on.to_vec()
    } else if let Some(q) = query.filter(|q| !q.on.is_empty()) {
        q.on.clone()
    } else {
        return Ok((
            problem.family.iter().map(|c| c.name.clone()).collect(),
            op.unwrap_or_default(),
        ));
    };
    Ok((names, op.or(query.map(|q| q.op)).unwrap_or_default()))
}

pub fn extend(problem: &Problem, on: &[String], op: Option<Op>) -> Result<Outcome> {
    let has_query = problem
        .file
        .query
        .as_ref()
        .is_some_and(|q| q.kind == "extend");
    if on.is_empty() && !has_query {
        bail!("no target given: pass --on or add an extend query");
    }
    let (names, op) = query_target(problem, "extend", on, op)?;
    let target = problem.symbol(&names, op)?;
    let base: Vec<PrevisionSymbol> = problem
        .quantities
        .iter()
        .copied()
        .filter(|q| *q != target)
        .collect();
    let frame = problem.frame()?;
    let mut report = Report::new();
    report.field("target", problem.label(&target));
    report.field("base", labels(problem, &base));
    match extension_interval(&frame, &base, &problem.assessment, target) {
        Err(CoherenceError::IncoherentBase) => {
            report.field("verdict", "base assessment is incoherent");
            Ok(Outcome {
                report,
                positive: false,
            })
        }
        Err(e) => Err(e.into()),
        Ok(i) => {
            report.field("interval", interval(&i));
            if let Some((pattern, closed)) = closed_form(problem, &base, target)? {
                let agrees = i.lo == closed.lo && i.hi == closed.hi && i.lo_closed && i.hi_closed;
                report.field(format!("closed form {pattern}"), closed.to_string());
                report.field("closed form agrees", yes_no(agrees));
            }
            Ok(Outcome {
                report,
                positive: true,
            })
        }
    }
}

/// The closed-form interval for `target` when the base matches a known pattern.
fn closed_form(
    problem: &Problem,
    base: &[PrevisionSymbol],
    target: PrevisionSymbol,
) -> Result<Option<(&'static str, Interval)>> {
    let s = target.subset;
    if s.len() < 2 {
        return Ok(None);
    }
    let mut related: Vec<PrevisionSymbol> = base
        .iter()
        .copied()
        .filter(|q| !q.subset.intersection(s).is_empty())
        .collect();
    related.sort();
    let value = |q: &PrevisionSymbol| {
        problem
            .value(q)
            .cloned()
            .ok_or_else(|| anyhow!("unassessed {}", problem.label(q)))
    };
    let sub = problem.subframe(s)?;
    if target.kind == SymbolKind::Disjunction && s.len() == 2 && sub.is_logically_independent() {
        let singles: Vec<PrevisionSymbol> = s.iter().map(PrevisionSymbol::conditional).collect();
        if singles == related {
            let values: Vec<Rational> = singles.iter().map(value).collect::<Result<_>>()?;
            return Ok(Some(("two-event", frechet_disjunction_n(&values)?)));
        }
    }
    if target.kind != SymbolKind::Conjunction {
        return Ok(None);
    }
    let shared = {
        let first = &problem.family[s.first().unwrap_or(0)].antecedent;
        s.iter().all(|i| problem.family[i].antecedent == *first)
    };
    if s.len() == 3 && (sub.is_logically_independent() || (shared && sub.constituents().len() == 9))
    {
        let v = s.to_vec();
        let prefix: Vec<PrevisionSymbol> = [
            vec![v[0]],
            vec![v[1]],
            vec![v[2]],
            vec![v[0], v[1]],
            vec![v[0], v[2]],
            vec![v[1], v[2]],
        ]
        .into_iter()
        .map(|m| PrevisionSymbol::conj(IndexSet::from_indices(m)))
        .collect();
        let mut sorted = prefix.clone();
        sorted.sort();
        if sorted == related {
            let values: Vec<Rational> = prefix.iter().map(value).collect::<Result<_>>()?;
            let a = ThreeEventAssessment::from_slice(&values, None);
            return Ok(three_event_extension_bounds(&a)
                .ok()
                .map(|i| ("three-event", i)));
        }
    }
    if !sub.is_logically_independent() {
        return Ok(None);
    }
    for j in s.iter().collect::<Vec<_>>().into_iter().rev() {
        let rest = PrevisionSymbol::conj(IndexSet::from_indices(s.iter().filter(|&i| i != j)));
        let single = PrevisionSymbol::conditional(j);
        let mut pair = vec![rest, single];
        pair.sort();
        if pair == related {
            let i = conj_step_bounds(&value(&rest)?, &value(&single)?)?;
            return Ok(Some((if s.len() == 2 { "two-event" } else { "step" }, i)));
        }
    }
    Ok(None)
}

/// The assessment restricted to `members`, relabelled to positions in the subframe.
fn restrict(assessment: &Assessment, members: IndexSet, n: usize) -> Assessment {
    let mut map = vec![usize::MAX; n];
    for (k, i) in members.iter().enumerate() {
        map[i] = k;
    }
    let mut out = Assessment::new();
    for (s, v) in assessment.iter() {
        if s.subset.is_subset(members) {
            out.set(s.remap(&map), v.clone());
        }
    }
    out
}

pub fn table(problem: &Problem, on: &[String], op: Option<Op>, numeric: bool) -> Result<Outcome> {
    let (names, op) = query_target(problem, "table", on, op)?;
    let members = problem.subset(&names)?;
    let frame = problem.subframe(members)?;
    let all = frame.members();
    let mut report = Report::new();
    let table: CrqTable = match op {
        Op::And => conjunction_table(&frame, all)?,
        Op::Or => disjunction_table(&frame, all)?,
        Op::Qc => {
            let (event, table) = quasi_conjunction(&frame, all)?;
            report.field("event", event.to_string());
            table
        }
    };
    let names: Vec<&str> = frame.family().iter().map(|c| c.name.as_str()).collect();
    report.field("family", names.join(", "));
    report.field("rows", table.rows.len().to_string());
    let table = if numeric {
        let a = restrict(&problem.assessment, members, problem.family.len());
        table.instantiate(&a)?
    } else {
        table
    };
    report.block(table.render());
    for r in &table.rows {
        report.machine_field(
            format!("C_{}", r.constituent),
            format!("{} {}", r.signature, r.value),
        );
    }
    Ok(Outcome {
        report,
        positive: true,
    })
}

fn describe_witness(rule: &InferenceRule, w: &Option<Witness>) -> String {
    match w {
        None => "none".into(),
        Some(Witness::AntecedentImpliesConsequent) => "antecedent implies consequent".into(),
        Some(Witness::Subset(s)) => {
            let names: Vec<&str> = s.iter().map(|i| rule.premises[i].name.as_str()).collect();
            format!("{{{}}}", names.join(", "))
        }
    }
}

fn rule_from(target: &str, max_atoms: usize) -> Result<InferenceRule> {
    let path = Path::new(target);
    if path.is_file() {
        let p = problem::load(path, max_atoms)?;
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("rule");
        return p.rule(name);
    }
    Ok(find_rule(target)?)
}

pub fn entail(target: &str, max_atoms: usize) -> Result<Outcome> {
    let rule = rule_from(target, max_atoms)?;
    let v = p_entails(&rule)?;
    let mut report = Report::new();
    let premises: Vec<&str> = rule.premises.iter().map(|p| p.name.as_str()).collect();
    report
        .field("rule", rule.name.clone())
        .field("premises", premises.join(", "))
        .field("conclusion", rule.conclusion.name.clone())
        .field("p-consistent", yes_no(v.p_consistent))
        .field("verdict", if v.p_valid { "p-valid" } else { "not p-valid" })
        .field("witness", describe_witness(&rule, &v.witness))
        .field(
            "lp lower bound",
            v.lp_lower_bound
                .as_ref()
                .map_or("undefined".into(), fraction),
        );
    Ok(Outcome {
        report,
        positive: v.p_valid,
    })
}

pub fn list_rules() -> Outcome {
    let mut report = Report::new();
    for r in builtin_rules() {
        let premises: Vec<String> = r.premises.iter().map(ToString::to_string).collect();
        let expected = match r.expected_valid {
            Some(true) => "p-valid",
            Some(false) => "not p-valid",
            None => "unknown",
        };
        report.field(
            r.name.clone(),
            format!(
                "{{{}}} => {} ({expected})",
                premises.join("; "),
                r.conclusion
            ),
        );
    }
    Outcome {
        report,
        positive: true,
    }
}

/// Runs catalog rules against their known verdicts.
pub fn run_rules(names: &[String], with_conditions: bool) -> Result<Outcome> {
    let rules: Vec<InferenceRule> = if names.is_empty() {
        builtin_rules()
    } else {
        names
            .iter()
            .map(|n| find_rule(n))
            .collect::<Result<_, _>>()?
    };
    let mut report = Report::new();
    let mut matched = 0;
    for r in &rules {
        let v = p_entails(r)?;
        let verdict = if v.p_valid { "p-valid" } else { "not p-valid" };
        let ok = r.expected_valid.is_none_or(|e| e == v.p_valid);
        let mut line = format!("{verdict}, witness {}", describe_witness(r, &v.witness));
        if let Some(b) = &v.lp_lower_bound {
            line.push_str(&format!(", lp lower bound {}", fraction(b)));
        }
        if with_conditions && v.p_consistent {
            let ii = check_condition_ii(r)?;
            let iii = check_condition_iii(r)?;
            line.push_str(&format!(
                ", coincidence {}, dominance {}",
                yes_no(ii),
                yes_no(iii)
            ));
        }
        line.push_str(if ok { ", as expected" } else { ", UNEXPECTED" });
        matched += ok as usize;
        report.field(r.name.clone(), line);
    }
    report.field("expected verdicts", format!("{matched}/{}", rules.len()));
    Ok(Outcome {
        report,
        positive: matched == rules.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundsKind {
    /// Two-event conjunction interval: x y.
    FrechetTwo,
    /// n-event conjunction interval: x1 ... xn.
    FrechetAnd,
    /// n-event disjunction interval: x1 ... xn.
    FrechetOr,
    /// Next conjunction from the current one and a new event: mu x.
    Step,
    /// Membership of (mu, x) in the region compatible with z: z mu x.
    Reverse,
    /// Convex weights of (mu, x, z) on the unit-cube vertices: mu x z.
    Lambda,
    /// Three-event lattice: six values give the triple interval, seven test the region.
    ThreeEvent,
}

fn parse_numbers(numbers: &[String]) -> Result<Vec<Rational>> {
    numbers
        .iter()
        .map(|n| parse_rational(n).map_err(|e| anyhow!("{e}")))
        .collect()
}

fn arity(kind: BoundsKind, got: usize, allowed: &[usize]) -> Result<()> {
    if allowed.contains(&got) {
        Ok(())
    } else {
        let list: Vec<String> = allowed.iter().map(ToString::to_string).collect();
        bail!(
            "{} takes {} numbers, got {got}",
            kind.to_possible_value()
                .map_or("bounds".into(), |v| v.get_name().to_string()),
            list.join(" or ")
        )
    }
}

fn interval_fields(report: &mut Report, i: &Interval) {
    report.field("interval", i.to_string());
    report.machine_field("lo", fraction(&i.lo));
    report.machine_field("hi", fraction(&i.hi));
}

fn weights_field(report: &mut Report, w: &[Rational]) {
    report.field(
        "weights",
        w.iter().map(fraction).collect::<Vec<_>>().join(", "),
    );
}

pub fn bounds(kind: BoundsKind, numbers: &[String]) -> Result<Outcome> {
    let v = parse_numbers(numbers)?;
    let mut report = Report::new();
    let mut positive = true;
    match kind {
        BoundsKind::FrechetTwo => {
            arity(kind, v.len(), &[2])?;
            interval_fields(&mut report, &frechet_two(&v[0], &v[1])?);
        }
        BoundsKind::FrechetAnd => {
            if v.is_empty() {
                bail!("frechet-and takes at least one number");
            }
            interval_fields(&mut report, &frechet_conjunction_n(&v)?);
        }
        BoundsKind::FrechetOr => {
            if v.is_empty() {
                bail!("frechet-or takes at least one number");
            }
            interval_fields(&mut report, &frechet_disjunction_n(&v)?);
        }
        BoundsKind::Step => {
            arity(kind, v.len(), &[2])?;
            interval_fields(&mut report, &conj_step_bounds(&v[0], &v[1])?);
        }
        BoundsKind::Reverse => {
            arity(kind, v.len(), &[3])?;
            positive = reverse_region_contains(&v[0], &v[1], &v[2])?;
            report.field("region", if positive { "inside" } else { "outside" });
        }
        BoundsKind::Lambda => {
            arity(kind, v.len(), &[3])?;
            match lambda_decomposition(&v[0], &v[1], &v[2]) {
                Ok(w) => {
                    report.field("region", "inside");
                    weights_field(&mut report, &w);
                }
                Err(condprob_core::bounds::BoundsError::OutsideRegion) => {
                    positive = false;
                    report.field("region", "outside");
                }
                Err(e) => return Err(e.into()),
            }
        }
        BoundsKind::ThreeEvent => {
            arity(kind, v.len(), &[6, 7])?;
            if v.len() == 6 {
                let a = ThreeEventAssessment::from_slice(&v, None);
                match three_event_extension_bounds(&a) {
                    Ok(i) => interval_fields(&mut report, &i),
                    Err(condprob_core::bounds::BoundsError::IncoherentPrefix) => {
                        positive = false;
                        report.field("prefix", "incoherent");
                    }
                    Err(e) => return Err(e.into()),
                }
            } else {
                let a = ThreeEventAssessment::from_slice(&v[..6], Some(v[6].clone()));
                positive = three_event_region_check(&a)?;
                report.field("region", if positive { "inside" } else { "outside" });
                if let Ok(w) = sigma_prime_solution(&a) {
                    weights_field(&mut report, &w);
                }
            }
        }
    }
    Ok(Outcome { report, positive })
}
