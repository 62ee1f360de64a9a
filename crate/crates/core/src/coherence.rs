//! Coherence of prevision assessments by exact linear feasibility.
//!
//! Every assessed quantity is a [`PrevisionSymbol`] over the family of a
//! [`Frame`]: a single conditional event, or the conjunction, disjunction or
//! quasi conjunction of a subfamily. For each constituent where some
//! antecedent is true the quantities take the point `Q_h`; coherence is
//! decided by whether the assessment lies in the convex hull of those points,
//! recursing on the quantities whose antecedents can only carry zero mass.

use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::crq::{Assessment, CrqError, CrqValue, PrevisionSymbol};
use crate::logic::{Frame, IndexSet};
use crate::simplex::{phase_one, Optimum, Phase1, Tableau};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoherenceError {
    #[error(transparent)]
    Crq(#[from] CrqError),
    #[error("quantity {0} refers outside the family")]
    UnknownQuantity(PrevisionSymbol),
    #[error("quantity {0} is listed twice")]
    DuplicateQuantity(PrevisionSymbol),
    #[error("no value assessed for {0}")]
    Unassessed(PrevisionSymbol),
    #[error("{count} quantities exceed the limit of {limit}")]
    TooManyQuantities { count: usize, limit: usize },
    #[error("the system has no solution")]
    Infeasible,
    #[error("the base assessment is not coherent")]
    IncoherentBase,
    #[error("the value of a base quantity depends on the target {0}")]
    TargetInBase(PrevisionSymbol),
    #[error("a computed solution failed exact verification")]
    Verification,
    #[error("coherent extensions do not form an interval")]
    NotConvex,
    #[error("no coherent extension exists")]
    EmptyExtension,
}

/// Limit for [`check_coherence_subsets`].
pub const SUBSET_GUARD: usize = 6;

/// The linear system `sum_h lambda_h Q_h = M, sum_h lambda_h = 1, lambda >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaSystem {
    pub quantities: Vec<PrevisionSymbol>,
    /// The assessed vector `M`.
    pub target: Vec<Rational>,
    /// One point per constituent where some antecedent is true.
    pub points: Vec<Vec<Rational>>,
    /// Constituent index `h` of each point.
    pub constituents: Vec<usize>,
    /// For each quantity, the points whose constituent implies its antecedent.
    pub membership: Vec<Vec<usize>>,
}

impl SigmaSystem {
    fn rows(&self) -> (Vec<Vec<Rational>>, Vec<Rational>) {
        let mut a: Vec<Vec<Rational>> = (0..self.quantities.len())
            .map(|i| self.points.iter().map(|q| q[i].clone()).collect())
            .collect();
        a.push(alloc::vec![Rational::one(); self.points.len()]);
        let mut b = self.target.clone();
        b.push(Rational::one());
        (a, b)
    }

    /// Checks `lambda` against every equation exactly.
    pub fn satisfies(&self, lambda: &[Rational]) -> bool {
        if lambda.len() != self.points.len() || lambda.iter().any(Signed::is_negative) {
            return false;
        }
        let total = lambda.iter().fold(Rational::zero(), |acc, l| acc + l);
        total.is_one()
            && (0..self.quantities.len()).all(|i| {
                let s = lambda
                    .iter()
                    .zip(&self.points)
                    .fold(Rational::zero(), |acc, (l, q)| acc + l * &q[i]);
                s == self.target[i]
            })
    }

    fn mass_objective(&self, i: usize) -> Vec<Rational> {
        let mut obj = alloc::vec![Rational::zero(); self.points.len()];
        for &h in &self.membership[i] {
            obj[h] = Rational::one();
        }
        obj
    }
}

/// Outcome of [`solve_feasible`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityResult {
    pub feasible: bool,
    /// A solution `lambda`, verified exactly.
    pub solution: Option<Vec<Rational>>,
    /// A vector `y` over the rows (quantities, then normalisation) with
    /// `y . (Q_h, 1) >= 0` for every point and `y . (M, 1) < 0`.
    pub certificate: Option<Vec<Rational>>,
}

/// One pass of the recursive check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterationRecord {
    pub quantities: Vec<PrevisionSymbol>,
    pub feasible: bool,
    /// Quantities whose antecedents carry zero mass in every solution.
    pub zero_mass: Vec<PrevisionSymbol>,
    pub solution: Option<Vec<Rational>>,
    pub constituents: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoherenceVerdict {
    pub coherent: bool,
    pub trace: Vec<IterationRecord>,
}

/// Interval of coherent values for an extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionInterval {
    pub lo: Rational,
    pub hi: Rational,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl ExtensionInterval {
    pub fn closed(lo: Rational, hi: Rational) -> Self {
        ExtensionInterval {
            lo,
            hi,
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn contains(&self, z: &Rational) -> bool {
        let above = if self.lo_closed {
            *z >= self.lo
        } else {
            *z > self.lo
        };
        let below = if self.hi_closed {
            *z <= self.hi
        } else {
            *z < self.hi
        };
        above && below
    }
}

fn check_quantities(frame: &Frame, quantities: &[PrevisionSymbol]) -> Result<(), CoherenceError> {
    if quantities.len() > 64 {
        return Err(CoherenceError::TooManyQuantities {
            count: quantities.len(),
            limit: 64,
        });
    }
    for (k, q) in quantities.iter().enumerate() {
        if q.subset.is_empty() || !q.subset.is_subset(frame.members()) {
            return Err(CoherenceError::UnknownQuantity(*q));
        }
        if quantities[..k].contains(q) {
            return Err(CoherenceError::DuplicateQuantity(*q));
        }
    }
    Ok(())
}

fn union_of(quantities: &[PrevisionSymbol]) -> IndexSet {
    quantities
        .iter()
        .fold(IndexSet::EMPTY, |s, q| s.union(q.subset))
}

fn resolve_value(
    value: &CrqValue,
    own: &PrevisionSymbol,
    mu: &Rational,
    assessment: &Assessment,
) -> Result<Rational, CrqError> {
    match value {
        CrqValue::Symbol(s) if s == own => Ok(mu.clone()),
        other => other.resolve(assessment),
    }
}

fn assessed(assessment: &Assessment, q: &PrevisionSymbol) -> Result<Rational, CoherenceError> {
    assessment.resolve(q).ok_or(CoherenceError::Unassessed(*q))
}

fn build_filtered(
    frame: &Frame,
    quantities: &[PrevisionSymbol],
    assessment: &Assessment,
    void_on: IndexSet,
) -> Result<SigmaSystem, CoherenceError> {
    check_quantities(frame, quantities)?;
    let target: Vec<Rational> = quantities
        .iter()
        .map(|q| assessed(assessment, q))
        .collect::<Result<_, _>>()?;
    let scope = union_of(quantities);
    let mut points = Vec::new();
    let mut constituents = Vec::new();
    let mut membership = alloc::vec![Vec::new(); quantities.len()];
    for c in frame.constituents() {
        let trip = &c.tripartition;
        if trip.all_void(scope) || !trip.all_void(void_on) {
            continue;
        }
        let mut point = Vec::with_capacity(quantities.len());
        for (i, q) in quantities.iter().enumerate() {
            if !trip.all_void(q.subset) {
                membership[i].push(points.len());
            }
            point.push(resolve_value(&q.value_at(trip), q, &target[i], assessment)?);
        }
        points.push(point);
        constituents.push(c.index);
    }
    Ok(SigmaSystem {
        quantities: quantities.to_vec(),
        target,
        points,
        constituents,
        membership,
    })
}

/// Builds the system for `quantities` over the constituents of `frame`
/// where at least one of their antecedents is true.
pub fn build_sigma(
    frame: &Frame,
    quantities: &[PrevisionSymbol],
    assessment: &Assessment,
) -> Result<SigmaSystem, CoherenceError> {
    build_filtered(frame, quantities, assessment, IndexSet::EMPTY)
}

fn solve_tableau(sigma: &SigmaSystem) -> Result<Result<Tableau, Vec<Rational>>, CoherenceError> {
    let (a, b) = sigma.rows();
    if sigma.points.is_empty() {
        let mut y = alloc::vec![Rational::zero(); b.len()];
        if let Some(last) = y.last_mut() {
            *last = -Rational::one();
        }
        return Ok(Err(y));
    }
    Ok(match phase_one(&a, &b) {
        Phase1::Feasible(t) => {
            if !sigma.satisfies(&t.solution()) {
                return Err(CoherenceError::Verification);
            }
            Ok(t)
        }
        Phase1::Infeasible(y) => Err(y),
    })
}

/// Decides whether `M` lies in the convex hull of the points.
pub fn solve_feasible(sigma: &SigmaSystem) -> Result<FeasibilityResult, CoherenceError> {
    Ok(match solve_tableau(sigma)? {
        Ok(t) => FeasibilityResult {
            feasible: true,
            solution: Some(t.solution()),
            certificate: None,
        },
        Err(y) => FeasibilityResult {
            feasible: false,
            solution: None,
            certificate: Some(y),
        },
    })
}

fn maximize(
    t: &Tableau,
    objective: &[Rational],
) -> Result<(Rational, Vec<Rational>), CoherenceError> {
    match t.maximize(objective) {
        Optimum::Bounded { value, x } => Ok((value, x)),
        Optimum::Unbounded => Err(CoherenceError::Verification),
    }
}

/// Largest total mass on the antecedent of quantity `i` over all solutions.
pub fn max_mass(sigma: &SigmaSystem, i: usize) -> Result<Rational, CoherenceError> {
    let t = solve_tableau(sigma)?.map_err(|_| CoherenceError::Infeasible)?;
    Ok(maximize(&t, &sigma.mass_objective(i))?.0)
}

fn zero_mass_set(sigma: &SigmaSystem, t: &Tableau) -> Result<IndexSet, CoherenceError> {
    let start = t.solution();
    let mut out = IndexSet::EMPTY;
    for i in 0..sigma.quantities.len() {
        if sigma.membership[i].iter().any(|&h| start[h].is_positive()) {
            continue;
        }
        if maximize(t, &sigma.mass_objective(i))?.0.is_zero() {
            out.insert(i);
        }
    }
    Ok(out)
}

/// Positions of the quantities whose antecedent has maximal mass zero.
pub fn compute_i0(sigma: &SigmaSystem) -> Result<IndexSet, CoherenceError> {
    let t = solve_tableau(sigma)?.map_err(|_| CoherenceError::Infeasible)?;
    zero_mass_set(sigma, &t)
}

/// Recursive coherence check: solve the system, then recheck the
/// quantities that can only carry zero mass, until none remain.
pub fn check_coherence(
    frame: &Frame,
    quantities: &[PrevisionSymbol],
    assessment: &Assessment,
) -> Result<CoherenceVerdict, CoherenceError> {
    check_quantities(frame, quantities)?;
    let mut current = quantities.to_vec();
    let mut trace = Vec::new();
    while !current.is_empty() {
        let sigma = build_sigma(frame, &current, assessment)?;
        match solve_tableau(&sigma)? {
            Err(_) => {
                trace.push(IterationRecord {
                    quantities: current,
                    feasible: false,
                    zero_mass: Vec::new(),
                    solution: None,
                    constituents: sigma.constituents,
                });
                return Ok(CoherenceVerdict {
                    coherent: false,
                    trace,
                });
            }
            Ok(t) => {
                let i0 = zero_mass_set(&sigma, &t)?;
                let next: Vec<PrevisionSymbol> = i0.iter().map(|i| current[i]).collect();
                trace.push(IterationRecord {
                    quantities: current,
                    feasible: true,
                    zero_mass: next.clone(),
                    solution: Some(t.solution()),
                    constituents: sigma.constituents,
                });
                current = next;
            }
        }
    }
    Ok(CoherenceVerdict {
        coherent: true,
        trace,
    })
}

/// Coherence by solvability of the system of every nonempty subfamily.
pub fn check_coherence_subsets(
    frame: &Frame,
    quantities: &[PrevisionSymbol],
    assessment: &Assessment,
) -> Result<CoherenceVerdict, CoherenceError> {
    check_quantities(frame, quantities)?;
    if quantities.len() > SUBSET_GUARD {
        return Err(CoherenceError::TooManyQuantities {
            count: quantities.len(),
            limit: SUBSET_GUARD,
        });
    }
    let mut trace = Vec::new();
    for subset in IndexSet::full(quantities.len()).nonempty_subsets_by_size() {
        let chosen: Vec<PrevisionSymbol> = subset.iter().map(|i| quantities[i]).collect();
        let sigma = build_sigma(frame, &chosen, assessment)?;
        let result = solve_feasible(&sigma)?;
        let feasible = result.feasible;
        trace.push(IterationRecord {
            quantities: chosen,
            feasible,
            zero_mass: Vec::new(),
            solution: result.solution,
            constituents: sigma.constituents,
        });
        if !feasible {
            return Ok(CoherenceVerdict {
                coherent: false,
                trace,
            });
        }
    }
    Ok(CoherenceVerdict {
        coherent: true,
        trace,
    })
}

/// Values `g_h = sum_i s_i (q_hi - mu_i)` of the random gain on each point.
pub fn gain_values(sigma: &SigmaSystem, stakes: &[Rational]) -> Vec<Rational> {
    sigma
        .points
        .iter()
        .map(|q| {
            q.iter()
                .zip(&sigma.target)
                .zip(stakes)
                .fold(Rational::zero(), |acc, ((v, mu), s)| acc + s * (v - mu))
        })
        .collect()
}

fn closed_pieces(
    a: Option<(Rational, Rational)>,
    b: Option<(Rational, Rational)>,
) -> Result<Option<(Rational, Rational)>, CoherenceError> {
    Ok(match (a, b) {
        (None, x) | (x, None) => x,
        (Some((l1, h1)), Some((l2, h2))) => {
            if h1 < l2 || h2 < l1 {
                return Err(CoherenceError::NotConvex);
            }
            Some((l1.min(l2), h1.max(h2)))
        }
    })
}

fn extension_core(
    frame: &Frame,
    base: &[PrevisionSymbol],
    assessment: &Assessment,
    target: PrevisionSymbol,
) -> Result<Option<(Rational, Rational)>, CoherenceError> {
    let mus: Vec<Rational> = base
        .iter()
        .map(|q| assessed(assessment, q))
        .collect::<Result<_, _>>()?;
    let scope = union_of(base).union(target.subset);
    let mut columns: Vec<(Vec<Rational>, bool, Rational)> = Vec::new();
    for c in frame.constituents() {
        let trip = &c.tripartition;
        if trip.all_void(scope) {
            continue;
        }
        let mut coeffs = Vec::with_capacity(base.len());
        for (j, q) in base.iter().enumerate() {
            let v = q.value_at(trip);
            if matches!(v, CrqValue::Symbol(s) | CrqValue::Complement(s) if s == target) {
                return Err(CoherenceError::TargetInBase(target));
            }
            coeffs.push(resolve_value(&v, q, &mus[j], assessment)? - &mus[j]);
        }
        let on_target = !trip.all_void(target.subset);
        let value = if on_target {
            target.value_at(trip).resolve(assessment)?
        } else {
            Rational::zero()
        };
        columns.push((coeffs, on_target, value));
    }
    let mut a: Vec<Vec<Rational>> = (0..base.len())
        .map(|j| columns.iter().map(|c| c.0[j].clone()).collect())
        .collect();
    a.push(
        columns
            .iter()
            .map(|c| {
                if c.1 {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect(),
    );
    let mut b = alloc::vec![Rational::zero(); base.len()];
    b.push(Rational::one());
    let positive = match phase_one(&a, &b) {
        Phase1::Infeasible(_) => None,
        Phase1::Feasible(t) => {
            let obj: Vec<Rational> = columns.iter().map(|c| c.2.clone()).collect();
            let neg: Vec<Rational> = obj.iter().map(|v| -v.clone()).collect();
            let (hi, _) = maximize(&t, &obj)?;
            let (neg_lo, _) = maximize(&t, &neg)?;
            Some((-neg_lo, hi))
        }
    };
    let zero_mass = if base.is_empty() {
        None
    } else {
        let face = build_filtered(frame, base, assessment, target.subset)?;
        match solve_tableau(&face)? {
            Err(_) => None,
            Ok(t) => {
                let i0 = zero_mass_set(&face, &t)?;
                let reduced: Vec<PrevisionSymbol> = i0.iter().map(|i| base[i]).collect();
                extension_core(frame, &reduced, assessment, target)?
            }
        }
    };
    closed_pieces(positive, zero_mass)
}

/// The set of values `z` for `target` that keep the assessment coherent.
///
/// `target` must not already be among `base`; any value the assessment
/// holds for it is ignored.
pub fn extension_interval(
    frame: &Frame,
    base: &[PrevisionSymbol],
    assessment: &Assessment,
    target: PrevisionSymbol,
) -> Result<ExtensionInterval, CoherenceError> {
    check_quantities(frame, base)?;
    check_quantities(frame, &[target])?;
    if base.contains(&target) {
        return Err(CoherenceError::TargetInBase(target));
    }
    let mut assessment = assessment.clone();
    assessment.remove(&target);
    if !check_coherence(frame, base, &assessment)?.coherent {
        return Err(CoherenceError::IncoherentBase);
    }
    let (lo, hi) =
        extension_core(frame, base, &assessment, target)?.ok_or(CoherenceError::EmptyExtension)?;
    let mut family = base.to_vec();
    family.push(target);
    let verify = |z: &Rational| -> Result<bool, CoherenceError> {
        let a = assessment.clone().with(target, z.clone());
        Ok(check_coherence(frame, &family, &a)?.coherent)
    };
    let lo_closed = verify(&lo)?;
    let hi_closed = if hi == lo { lo_closed } else { verify(&hi)? };
    Ok(ExtensionInterval {
        lo,
        hi,
        lo_closed,
        hi_closed,
    })
}
