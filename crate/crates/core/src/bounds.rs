//! Closed-form bounds and regions for conjunctions of conditional events.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{format_fraction, in_unit_interval};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("value {0} lies outside [0,1]")]
    OutOfRange(String),
    #[error("at least one value is required")]
    Empty,
    #[error("the point lies outside the coherence region")]
    OutsideRegion,
    #[error("the assessment lacks the value of the triple conjunction")]
    MissingTriple,
    #[error("the pairwise assessment is not coherent")]
    IncoherentPrefix,
}

fn check(values: &[&Rational]) -> Result<(), BoundsError> {
    for v in values {
        if !in_unit_interval(v) {
            return Err(BoundsError::OutOfRange(format_fraction(v)));
        }
    }
    Ok(())
}

/// Closed interval `[lo, hi]` inside `[0,1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn contains(&self, z: &Rational) -> bool {
        self.lo <= *z && *z <= self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            format_fraction(&self.lo),
            format_fraction(&self.hi)
        )
    }
}

fn max_of<'a>(it: impl IntoIterator<Item = &'a Rational>) -> Rational {
    it.into_iter()
        .fold(Rational::zero(), |m, v| if *v > m { v.clone() } else { m })
}

fn lukasiewicz(x: &Rational, y: &Rational) -> Rational {
    let s = x + y - Rational::one();
    if s.is_positive() {
        s
    } else {
        Rational::zero()
    }
}

/// Bounds on the conjunction of two conditional events with probabilities `x`, `y`.
pub fn frechet_two(x: &Rational, y: &Rational) -> Result<Interval, BoundsError> {
    check(&[x, y])?;
    Ok(Interval::new(lukasiewicz(x, y), x.min(y).clone()))
}

/// `[max(sum x - (n-1), 0), min x]`.
pub fn frechet_conjunction_n(xs: &[Rational]) -> Result<Interval, BoundsError> {
    if xs.is_empty() {
        return Err(BoundsError::Empty);
    }
    check(&xs.iter().collect::<Vec<_>>())?;
    let n = Rational::from_integer((xs.len() as i64 - 1).into());
    let sum = xs.iter().fold(Rational::zero(), |acc, x| acc + x);
    let lo = max_of([&(sum - n)]);
    let hi = xs.iter().min().cloned().unwrap_or_else(Rational::one);
    Ok(Interval::new(lo, hi))
}

/// `[max x, min(sum x, 1)]`.
pub fn frechet_disjunction_n(xs: &[Rational]) -> Result<Interval, BoundsError> {
    if xs.is_empty() {
        return Err(BoundsError::Empty);
    }
    check(&xs.iter().collect::<Vec<_>>())?;
    let sum = xs.iter().fold(Rational::zero(), |acc, x| acc + x);
    let lo = max_of(xs);
    let hi = sum.min(Rational::one());
    Ok(Interval::new(lo, hi))
}

/// Coherent values of `P(C_{n+1})` from `P(C_n) = mu` and `P(E_{n+1}|H_{n+1}) = x`.
pub fn conj_step_bounds(mu: &Rational, x: &Rational) -> Result<Interval, BoundsError> {
    check(&[mu, x])?;
    Ok(Interval::new(lukasiewicz(mu, x), mu.min(x).clone()))
}

/// Whether `(mu, x)` is a coherent extension of `P(C_{n+1}) = z`:
/// `mu` in `[z, 1]` and `x` in `[z, 1 + z - mu]`.
pub fn reverse_region_contains(
    z: &Rational,
    mu: &Rational,
    x: &Rational,
) -> Result<bool, BoundsError> {
    check(&[z, mu, x])?;
    let one = Rational::one();
    Ok(mu >= z && *mu <= one && x >= z && *x <= &one + z - mu)
}

/// Convex weights of `(mu, x, z)` on the vertices `(1,1,1)`, `(1,0,0)`,
/// `(0,1,0)`, `(0,0,0)`.
pub fn lambda_decomposition(
    mu: &Rational,
    x: &Rational,
    z: &Rational,
) -> Result<Vec<Rational>, BoundsError> {
    check(&[mu, x, z])?;
    let weights = alloc::vec![z.clone(), mu - z, x - z, Rational::one() - mu - x + z];
    if weights.iter().any(Signed::is_negative) {
        return Err(BoundsError::OutsideRegion);
    }
    Ok(weights)
}

/// The vertices paired with [`lambda_decomposition`].
pub fn step_vertices() -> [[Rational; 3]; 4] {
    let (o, z) = (Rational::one, Rational::zero);
    [
        [o(), o(), o()],
        [o(), z(), z()],
        [z(), o(), z()],
        [z(), z(), z()],
    ]
}

/// Previsions of every conjunction of three conditional events.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeEventAssessment {
    pub x1: Rational,
    pub x2: Rational,
    pub x3: Rational,
    pub x12: Rational,
    pub x13: Rational,
    pub x23: Rational,
    pub x123: Option<Rational>,
}

impl ThreeEventAssessment {
    /// From `[x1, x2, x3, x12, x13, x23]` and an optional `x123`.
    pub fn from_slice(v: &[Rational], x123: Option<Rational>) -> Self {
        ThreeEventAssessment {
            x1: v[0].clone(),
            x2: v[1].clone(),
            x3: v[2].clone(),
            x12: v[3].clone(),
            x13: v[4].clone(),
            x23: v[5].clone(),
            x123,
        }
    }

    fn prefix(&self) -> [&Rational; 6] {
        [
            &self.x1, &self.x2, &self.x3, &self.x12, &self.x13, &self.x23,
        ]
    }

    /// `1 - x1 - x2 - x3 + x12 + x13 + x23`.
    fn slack(&self) -> Rational {
        Rational::one() - &self.x1 - &self.x2 - &self.x3 + &self.x12 + &self.x13 + &self.x23
    }

    fn triple_bounds(&self) -> (Rational, Rational) {
        let lo = max_of([
            &(&self.x12 + &self.x13 - &self.x1),
            &(&self.x12 + &self.x23 - &self.x2),
            &(&self.x13 + &self.x23 - &self.x3),
        ]);
        let hi = [&self.x12, &self.x13, &self.x23]
            .into_iter()
            .cloned()
            .fold(self.slack(), |m, v| m.min(v));
        (lo, hi)
    }

    fn pairwise_lines_hold(&self) -> bool {
        let (x1, x2, x3) = (&self.x1, &self.x2, &self.x3);
        let (x12, x13, x23) = (&self.x12, &self.x13, &self.x23);
        let pair = |xij: &Rational, xi: &Rational, xj: &Rational, other: Rational| {
            let lo = max_of([&lukasiewicz(xi, xj), &other]);
            lo <= *xij && xij <= xi.min(xj)
        };
        pair(x12, x1, x2, x13 + x23 - x3)
            && pair(x13, x1, x3, x12 + x23 - x2)
            && pair(x23, x2, x3, x12 + x13 - x1)
            && !self.slack().is_negative()
    }
}

/// Evaluates every line of the closed-form region for the seven values.
pub fn three_event_region_check(a: &ThreeEventAssessment) -> Result<bool, BoundsError> {
    let x123 = a.x123.as_ref().ok_or(BoundsError::MissingTriple)?;
    let mut all: Vec<&Rational> = a.prefix().to_vec();
    all.push(x123);
    check(&all)?;
    let (lo, hi) = a.triple_bounds();
    Ok(a.pairwise_lines_hold() && lo <= *x123 && *x123 <= hi)
}

/// Coherent values of `x123` given a coherent pairwise assessment.
pub fn three_event_extension_bounds(a: &ThreeEventAssessment) -> Result<Interval, BoundsError> {
    check(&a.prefix())?;
    let (lo, hi) = a.triple_bounds();
    if !a.pairwise_lines_hold() || lo > hi {
        return Err(BoundsError::IncoherentPrefix);
    }
    Ok(Interval::new(lo, hi))
}

/// The unique weights on the eight vertices of [`sigma_prime_points`].
pub fn sigma_prime_solution(a: &ThreeEventAssessment) -> Result<Vec<Rational>, BoundsError> {
    let x123 = a.x123.as_ref().ok_or(BoundsError::MissingTriple)?;
    let mut all: Vec<&Rational> = a.prefix().to_vec();
    all.push(x123);
    check(&all)?;
    let w = sigma_prime_weights(a, x123);
    if w.iter().any(Signed::is_negative) {
        return Err(BoundsError::OutsideRegion);
    }
    Ok(w)
}

/// The eight closed-form weights, without the sign check.
pub fn sigma_prime_weights(a: &ThreeEventAssessment, x123: &Rational) -> Vec<Rational> {
    alloc::vec![
        x123.clone(),
        &a.x12 - x123,
        &a.x13 - x123,
        &a.x1 - &a.x12 - &a.x13 + x123,
        &a.x23 - x123,
        &a.x2 - &a.x12 - &a.x23 + x123,
        &a.x3 - &a.x13 - &a.x23 + x123,
        a.slack() - x123,
    ]
}

/// Values of `(x1, x2, x3, x12, x13, x23, x123)` on the eight constituents
/// where every antecedent is true.
pub fn sigma_prime_points() -> [[u8; 7]; 8] {
    [
        [1, 1, 1, 1, 1, 1, 1],
        [1, 1, 0, 1, 0, 0, 0],
        [1, 0, 1, 0, 1, 0, 0],
        [1, 0, 0, 0, 0, 0, 0],
        [0, 1, 1, 0, 0, 1, 0],
        [0, 1, 0, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use alloc::string::ToString;
    use alloc::vec;
    use proptest::prelude::*;

    fn iv(lo: Rational, hi: Rational) -> Interval {
        Interval::new(lo, hi)
    }

    fn tea(v: [(i64, i64); 6], x123: Option<(i64, i64)>) -> ThreeEventAssessment {
        let r: Vec<Rational> = v.iter().map(|&(p, q)| ratio(p, q)).collect();
        ThreeEventAssessment::from_slice(&r, x123.map(|(p, q)| ratio(p, q)))
    }

    #[test]
    fn two_event_bounds() {
        assert_eq!(
            frechet_two(&ratio(3, 5), &ratio(1, 2)).unwrap(),
            iv(ratio(1, 10), ratio(1, 2))
        );
        assert_eq!(frechet_two(&int(1), &int(1)).unwrap(), iv(int(1), int(1)));
        assert_eq!(
            frechet_two(&int(0), &ratio(2, 3)).unwrap(),
            iv(int(0), int(0))
        );
        assert_eq!(
            frechet_two(&ratio(3, 2), &int(0)),
            Err(BoundsError::OutOfRange("3/2".into()))
        );
        assert_eq!(
            frechet_two(&ratio(3, 5), &ratio(1, 2)).unwrap().to_string(),
            "[1/10, 1/2]"
        );
    }

    #[test]
    fn n_event_bounds() {
        let nine = vec![ratio(9, 10); 3];
        assert_eq!(
            frechet_conjunction_n(&nine).unwrap(),
            iv(ratio(7, 10), ratio(9, 10))
        );
        assert_eq!(
            frechet_conjunction_n(&vec![int(1); 4]).unwrap(),
            iv(int(1), int(1))
        );
        assert_eq!(
            frechet_disjunction_n(&[ratio(1, 4), ratio(1, 4)]).unwrap(),
            iv(ratio(1, 4), ratio(1, 2))
        );
        assert_eq!(
            frechet_disjunction_n(&[int(0), int(0)]).unwrap(),
            iv(int(0), int(0))
        );
        assert_eq!(frechet_conjunction_n(&[]), Err(BoundsError::Empty));
        assert_eq!(frechet_disjunction_n(&[]), Err(BoundsError::Empty));
    }

    #[test]
    fn step_and_reverse() {
        assert_eq!(
            conj_step_bounds(&ratio(3, 5), &ratio(1, 2)).unwrap(),
            iv(ratio(1, 10), ratio(1, 2))
        );
        assert_eq!(
            conj_step_bounds(&int(1), &ratio(2, 7)).unwrap(),
            iv(ratio(2, 7), ratio(2, 7))
        );
        let z = ratio(2, 5);
        assert!(reverse_region_contains(&z, &ratio(7, 10), &ratio(3, 5)).unwrap());
        assert!(!reverse_region_contains(&z, &ratio(7, 10), &ratio(4, 5)).unwrap());
        assert!(reverse_region_contains(&int(1), &int(1), &int(1)).unwrap());
        assert!(!reverse_region_contains(&int(1), &int(1), &ratio(99, 100)).unwrap());
    }

    #[test]
    fn lambda_weights() {
        assert_eq!(
            lambda_decomposition(&ratio(3, 5), &ratio(1, 2), &ratio(1, 10)).unwrap(),
            vec![ratio(1, 10), ratio(1, 2), ratio(2, 5), int(0)]
        );
        assert_eq!(
            lambda_decomposition(&int(1), &int(1), &int(1)).unwrap(),
            vec![int(1), int(0), int(0), int(0)]
        );
        assert_eq!(
            lambda_decomposition(&ratio(3, 5), &ratio(1, 2), &ratio(3, 5)),
            Err(BoundsError::OutsideRegion)
        );
        // zero conjunction: the last weight is 1 - mu - x
        assert_eq!(
            lambda_decomposition(&ratio(1, 5), &ratio(3, 10), &int(0)).unwrap(),
            vec![int(0), ratio(1, 5), ratio(3, 10), ratio(1, 2)]
        );
    }

    #[test]
    fn three_event_region() {
        let uniform = tea(
            [(1, 2), (1, 2), (1, 2), (1, 4), (1, 4), (1, 4)],
            Some((1, 8)),
        );
        assert!(three_event_region_check(&uniform).unwrap());
        assert_eq!(
            sigma_prime_solution(&uniform).unwrap(),
            vec![ratio(1, 8); 8]
        );
        let bad = tea(
            [(1, 2), (1, 2), (1, 2), (0, 1), (0, 1), (0, 1)],
            Some((0, 1)),
        );
        assert!(!three_event_region_check(&bad).unwrap());
        assert_eq!(sigma_prime_solution(&bad), Err(BoundsError::OutsideRegion));
        let ones = tea([(1, 1); 6], Some((1, 1)));
        assert!(three_event_region_check(&ones).unwrap());
        assert_eq!(
            sigma_prime_solution(&ones).unwrap(),
            vec![
                int(1),
                int(0),
                int(0),
                int(0),
                int(0),
                int(0),
                int(0),
                int(0)
            ]
        );
        assert_eq!(
            three_event_region_check(&tea([(1, 1); 6], None)),
            Err(BoundsError::MissingTriple)
        );
    }

    #[test]
    fn three_event_extension() {
        let prefix = tea([(1, 2), (1, 2), (1, 2), (1, 4), (1, 4), (1, 4)], None);
        assert_eq!(
            three_event_extension_bounds(&prefix).unwrap(),
            iv(int(0), ratio(1, 4))
        );
        assert_eq!(
            three_event_extension_bounds(&tea([(1, 1); 6], None)).unwrap(),
            iv(int(1), int(1))
        );
        let bad = tea([(1, 2), (1, 2), (1, 2), (0, 1), (0, 1), (0, 1)], None);
        assert_eq!(
            three_event_extension_bounds(&bad),
            Err(BoundsError::IncoherentPrefix)
        );
    }

    #[test]
    fn weights_reconstruct_the_assessment() {
        let a = tea(
            [(1, 2), (2, 3), (3, 4), (1, 3), (5, 12), (1, 2)],
            Some((1, 4)),
        );
        let w = sigma_prime_solution(&a).unwrap();
        let m = [
            &a.x1,
            &a.x2,
            &a.x3,
            &a.x12,
            &a.x13,
            &a.x23,
            a.x123.as_ref().unwrap(),
        ];
        for (k, target) in m.iter().enumerate() {
            let s = sigma_prime_points()
                .iter()
                .zip(&w)
                .fold(Rational::zero(), |acc, (p, l)| acc + l * int(p[k] as i64));
            assert_eq!(&&s, target);
        }
    }

    fn unit() -> impl Strategy<Value = Rational> {
        (0i64..=12, 1i64..=12).prop_map(|(p, q)| ratio(p.min(q), q))
    }

    proptest! {
        #[test]
        fn two_event_interval_is_ordered(x in unit(), y in unit()) {
            let i = frechet_two(&x, &y).unwrap();
            prop_assert!(i.lo <= i.hi);
        }

        #[test]
        fn conjunction_and_disjunction_are_dual(xs in prop::collection::vec(unit(), 1..5)) {
            let d = frechet_disjunction_n(&xs).unwrap();
            let comp: Vec<Rational> = xs.iter().map(|x| Rational::one() - x).collect();
            let c = frechet_conjunction_n(&comp).unwrap();
            prop_assert_eq!(d.lo, Rational::one() - c.hi);
            prop_assert_eq!(d.hi, Rational::one() - c.lo);
        }

        #[test]
        fn lambda_weights_rebuild_the_point(mu in unit(), x in unit(), t in 0i64..=6) {
            let i = conj_step_bounds(&mu, &x).unwrap();
            let z = &i.lo + (&i.hi - &i.lo) * ratio(t, 6);
            let w = lambda_decomposition(&mu, &x, &z).unwrap();
            let v = step_vertices();
            for (k, target) in [&mu, &x, &z].iter().enumerate() {
                let s = w.iter().zip(&v).fold(Rational::zero(), |acc, (l, p)| acc + l * &p[k]);
                prop_assert_eq!(&&s, target);
            }
            prop_assert_eq!(w.iter().fold(Rational::zero(), |a, l| a + l), Rational::one());
        }

        #[test]
        fn region_matches_weight_signs(v in prop::collection::vec(unit(), 7)) {
            let a = ThreeEventAssessment::from_slice(&v[..6], Some(v[6].clone()));
            let region = three_event_region_check(&a).unwrap();
            prop_assert_eq!(region, sigma_prime_solution(&a).is_ok());
        }
    }
}
