//! JSON problem files and their translation into engine inputs.

use std::collections::BTreeSet;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use condprob_core::crq::{Assessment, PrevisionSymbol, SymbolKind};
use condprob_core::entailment::InferenceRule;
use condprob_core::logic::{parse_formula, ConditionalEvent, Formula, Frame, IndexSet, Universe};
use condprob_core::rational::parse_rational;
use condprob_core::Rational;
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub atoms: Vec<String>,
    /// Formulas asserted impossible.
    #[serde(default)]
    pub constraints: Vec<String>,
    pub conditionals: Vec<ConditionalEntry>,
    #[serde(default)]
    pub assessment: Vec<AssessmentEntry>,
    #[serde(default)]
    pub query: Option<Query>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConditionalEntry {
    pub name: String,
    pub then: String,
    #[serde(default = "sure_event")]
    pub given: String,
}

fn sure_event() -> String {
    "T".into()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    #[default]
    And,
    Or,
    Qc,
}

impl Op {
    pub fn kind(self) -> SymbolKind {
        match self {
            Op::And => SymbolKind::Conjunction,
            Op::Or => SymbolKind::Disjunction,
            Op::Qc => SymbolKind::Quasi,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Op::And => "and",
            Op::Or => "or",
            Op::Qc => "qc",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssessmentEntry {
    pub on: Vec<String>,
    #[serde(default)]
    pub op: Op,
    pub value: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Query {
    pub kind: String,
    #[serde(default)]
    pub on: Vec<String>,
    #[serde(default)]
    pub op: Op,
    #[serde(default)]
    pub premises: Vec<String>,
    #[serde(default)]
    pub conclusion: Option<String>,
}

/// A validated problem: the universe, the declared family and the assessed quantities.
#[derive(Debug, Clone)]
pub struct Problem {
    pub file: ProblemFile,
    pub universe: Universe,
    pub family: Vec<ConditionalEvent>,
    pub quantities: Vec<PrevisionSymbol>,
    pub assessment: Assessment,
}

pub fn load(path: &Path, max_atoms: usize) -> Result<Problem> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let file: ProblemFile = serde_json::from_str(&text)
        .with_context(|| format!("{}: invalid problem file", path.display()))?;
    Problem::new(file, max_atoms).with_context(|| format!("{}", path.display()))
}

fn formula(text: &str, what: &str) -> Result<Formula> {
    parse_formula(text).map_err(|e| anyhow!("{what}: {e} in \"{text}\""))
}

impl Problem {
    pub fn new(file: ProblemFile, max_atoms: usize) -> Result<Self> {
        let constraints = file
            .constraints
            .iter()
            .enumerate()
            .map(|(i, c)| formula(c, &format!("constraint {}", i + 1)))
            .collect::<Result<Vec<_>>>()?;
        let universe =
            Universe::with_max_atoms(file.atoms.iter().cloned(), constraints, max_atoms)?;
        let mut seen = BTreeSet::new();
        let mut family = Vec::with_capacity(file.conditionals.len());
        for c in &file.conditionals {
            if !seen.insert(c.name.as_str()) {
                bail!("conditional name '{}' is declared twice", c.name);
            }
            let what = format!("conditional '{}'", c.name);
            family.push(ConditionalEvent::new(
                c.name.clone(),
                formula(&c.then, &what)?,
                formula(&c.given, &what)?,
            ));
        }
        let mut problem = Problem {
            file,
            universe,
            family,
            quantities: Vec::new(),
            assessment: Assessment::new(),
        };
        for (k, entry) in problem.file.assessment.clone().iter().enumerate() {
            if entry.op == Op::Qc {
                bail!(
                    "assessment entry {}: only and/or previsions can be assessed",
                    k + 1
                );
            }
            let symbol = problem.symbol(&entry.on, entry.op)?;
            let value = parse_rational(&entry.value)
                .map_err(|e| anyhow!("assessment entry {}: {e}", k + 1))?;
            if problem.quantities.contains(&symbol) {
                bail!(
                    "assessment entry {}: {} is assessed twice",
                    k + 1,
                    problem.label(&symbol)
                );
            }
            problem.quantities.push(symbol);
            problem.assessment.set(symbol, value);
        }
        Ok(problem)
    }

    pub fn position(&self, name: &str) -> Result<usize> {
        self.family
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| anyhow!("unknown conditional '{name}'"))
    }

    pub fn subset(&self, names: &[String]) -> Result<IndexSet> {
        if names.is_empty() {
            bail!("an empty list of conditionals");
        }
        let mut set = IndexSet::EMPTY;
        for n in names {
            set.insert(self.position(n)?);
        }
        Ok(set)
    }

    pub fn symbol(&self, names: &[String], op: Op) -> Result<PrevisionSymbol> {
        let set = self.subset(names)?;
        let kind = if set.len() == 1 && op != Op::Qc {
            SymbolKind::Conjunction
        } else {
            op.kind()
        };
        Ok(PrevisionSymbol::new(kind, set))
    }

    /// Frame over the whole declared family.
    pub fn frame(&self) -> Result<Frame> {
        Ok(Frame::new(self.universe.clone(), self.family.clone())?)
    }

    /// Frame over the selected members only, in declaration order.
    pub fn subframe(&self, members: IndexSet) -> Result<Frame> {
        let family = members.iter().map(|i| self.family[i].clone()).collect();
        Ok(Frame::new(self.universe.clone(), family)?)
    }

    /// Human label of a quantity, by conditional names.
    pub fn label(&self, symbol: &PrevisionSymbol) -> String {
        let names: Vec<&str> = symbol
            .subset
            .iter()
            .map(|i| self.family[i].name.as_str())
            .collect();
        if symbol.subset.len() == 1 && symbol.kind == SymbolKind::Conjunction {
            return format!("P({})", names[0]);
        }
        let op = match symbol.kind {
            SymbolKind::Conjunction => Op::And.label(),
            SymbolKind::Disjunction => Op::Or.label(),
            SymbolKind::Quasi => Op::Qc.label(),
            SymbolKind::NegatedConjunction => "and-not",
            SymbolKind::NegatedDisjunction => "or-not",
        };
        format!("{op}({})", names.join(", "))
    }

    pub fn value(&self, symbol: &PrevisionSymbol) -> Option<&Rational> {
        self.assessment.get(symbol)
    }

    /// The rule described by an `entail` query.
    pub fn rule(&self, name: &str) -> Result<InferenceRule> {
        let query = self.file.query.as_ref().filter(|q| q.kind == "entail");
        let (premises, conclusion) = match query {
            Some(q) => (
                q.premises.clone(),
                q.conclusion
                    .clone()
                    .ok_or_else(|| anyhow!("entail query needs a conclusion"))?,
            ),
            None => {
                let (last, rest) = self
                    .file
                    .conditionals
                    .split_last()
                    .ok_or_else(|| anyhow!("no conditionals declared"))?;
                (
                    rest.iter().map(|c| c.name.clone()).collect(),
                    last.name.clone(),
                )
            }
        };
        if premises.is_empty() {
            bail!("an inference rule needs at least one premise");
        }
        let premises = premises
            .iter()
            .map(|p| Ok(self.family[self.position(p)?].clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(InferenceRule {
            name: name.to_string(),
            atoms: self.file.atoms.clone(),
            constraints: self.universe.constraints().to_vec(),
            premises,
            conclusion: self.family[self.position(&conclusion)?].clone(),
            expected_valid: None,
        })
    }
}
