//! Generators shared by the integration targets.

#![allow(dead_code)]

use condprob_core::crq::{Assessment, PrevisionSymbol, SymbolKind};
use condprob_core::logic::{ConditionalEvent, Formula, Frame, IndexSet, Universe};
use condprob_core::rational::ratio;
use condprob_core::Rational;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::Rng;

/// `p/q` with `q` in `1..=max_den` and `p` in `0..=q`.
pub fn unit_rational(rng: &mut StdRng, max_den: i64) -> Rational {
    let q = rng.gen_range(1..=max_den);
    let p = rng.gen_range(0..=q);
    ratio(p, q)
}

/// `k` rationals with denominator `den`, nonnegative and summing to 1.
pub fn simplex_weights(rng: &mut StdRng, k: usize, den: i64) -> Vec<Rational> {
    let mut counts = vec![0i64; k];
    for _ in 0..den {
        counts[rng.gen_range(0..k)] += 1;
    }
    counts.into_iter().map(|c| ratio(c, den)).collect()
}

/// `E1|H1, ..., En|Hn` over atoms `E1, H1, ..., En, Hn`.
pub fn independent_frame(n: usize) -> Frame {
    let atoms: Vec<String> = (1..=n)
        .flat_map(|i| [format!("E{i}"), format!("H{i}")])
        .collect();
    let universe = Universe::new(atoms, vec![]).unwrap();
    let family = (1..=n)
        .map(|i| {
            ConditionalEvent::parse(format!("E{i}|H{i}"), &format!("E{i}"), &format!("H{i}"))
                .unwrap()
        })
        .collect();
    Frame::new(universe, family).unwrap()
}

/// `E1|H, ..., En|H` over atoms `E1, ..., En, H`.
pub fn shared_frame(n: usize) -> Frame {
    let mut atoms: Vec<String> = (1..=n).map(|i| format!("E{i}")).collect();
    atoms.push("H".into());
    let universe = Universe::new(atoms, vec![]).unwrap();
    let family = (1..=n)
        .map(|i| ConditionalEvent::parse(format!("E{i}|H"), &format!("E{i}"), "H").unwrap())
        .collect();
    Frame::new(universe, family).unwrap()
}

/// Conjunction symbols of every nonempty subfamily, in lexicographic order.
pub fn lattice(n: usize) -> Vec<PrevisionSymbol> {
    IndexSet::full(n)
        .nonempty_subsets_lex()
        .into_iter()
        .map(PrevisionSymbol::conj)
        .collect()
}

/// The seven three-event values `(x1, x2, x3, x12, x13, x23, x123)` as an assessment.
pub fn three_event_assessment(values: &[Rational]) -> (Vec<PrevisionSymbol>, Assessment) {
    let sets: [&[usize]; 7] = [&[0], &[1], &[2], &[0, 1], &[0, 2], &[1, 2], &[0, 1, 2]];
    let symbols: Vec<PrevisionSymbol> = sets
        .iter()
        .take(values.len())
        .map(|s| PrevisionSymbol::conj(IndexSet::from_indices(s.iter().copied())))
        .collect();
    let mut a = Assessment::new();
    for (s, v) in symbols.iter().zip(values) {
        a.set(*s, v.clone());
    }
    (symbols, a)
}

/// Strictly positive weights over the admissible worlds of `frame`.
pub fn positive_distribution(rng: &mut StdRng, frame: &Frame, max_weight: i64) -> Vec<Rational> {
    let raw: Vec<i64> = frame
        .universe()
        .admissible_worlds()
        .iter()
        .map(|_| rng.gen_range(1..=max_weight))
        .collect();
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|w| ratio(w, total)).collect()
}

/// Previsions of every `kind` symbol over nonempty subfamilies induced by a
/// world distribution with every antecedent of positive probability.
pub fn previsions_from_distribution(
    frame: &Frame,
    weights: &[Rational],
    kind: SymbolKind,
) -> Assessment {
    let worlds = frame.universe().admissible_worlds();
    let trips: Vec<_> = worlds
        .iter()
        .map(|&w| {
            let pos = frame.constituent_of(w).unwrap();
            frame.constituents()[pos].tripartition
        })
        .collect();
    let mut a = Assessment::new();
    for s in frame.members().nonempty_subsets_by_size() {
        let symbol = PrevisionSymbol::new(kind, s);
        let (mut num, mut den) = (Rational::zero(), Rational::zero());
        for (trip, p) in trips.iter().zip(weights) {
            if trip.all_void(s) {
                continue;
            }
            let v = symbol.value_at(trip).resolve(&a).unwrap();
            num += p * v;
            den += p;
        }
        a.set(symbol, num / den);
    }
    a
}

/// A random formula of bounded depth over `atoms`.
pub fn random_formula(rng: &mut StdRng, atoms: &[String], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        let a = Formula::Atom(atoms[rng.gen_range(0..atoms.len())].clone());
        return if rng.gen_bool(0.3) {
            Formula::not(a)
        } else {
            a
        };
    }
    let l = random_formula(rng, atoms, depth - 1);
    let r = random_formula(rng, atoms, depth - 1);
    match rng.gen_range(0..3) {
        0 => Formula::and([l, r]),
        1 => Formula::or([l, r]),
        _ => Formula::not(Formula::and([l, r])),
    }
}

/// A random conditional event whose antecedent is possible.
pub fn random_conditional(rng: &mut StdRng, universe: &Universe, name: String) -> ConditionalEvent {
    loop {
        let e = random_formula(rng, universe.atoms(), 2);
        let h = random_formula(rng, universe.atoms(), 2);
        if universe.is_possible(&h).unwrap() {
            return ConditionalEvent::new(name, e, h);
        }
    }
}
