mod support;

use condprob_core::crq::{
    conjunction_table, dominates, quasi_conjunction, Assessment, PrevisionSymbol, SymbolKind,
};
use condprob_core::logic::IndexSet;
use condprob_core::rational::in_unit_interval;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use support::{
    independent_frame, positive_distribution, previsions_from_distribution, shared_frame,
};

fn sample(rng: &mut StdRng) -> (condprob_core::logic::Frame, Assessment, Assessment) {
    let n = rng.gen_range(2..=3);
    let frame = if rng.gen_bool(0.5) {
        independent_frame(n)
    } else {
        shared_frame(n)
    };
    let w = positive_distribution(rng, &frame, 7);
    let conj = previsions_from_distribution(&frame, &w, SymbolKind::Conjunction);
    let quasi = previsions_from_distribution(&frame, &w, SymbolKind::Quasi);
    (frame, conj, quasi)
}

#[test]
fn instantiated_tables_lie_in_the_unit_interval() {
    let mut rng = StdRng::seed_from_u64(9);
    for _ in 0..30 {
        let (frame, conj, _) = sample(&mut rng);
        for s in frame.members().nonempty_subsets_lex() {
            let t = conjunction_table(&frame, s)
                .unwrap()
                .instantiate(&conj)
                .unwrap();
            assert!(t
                .rows
                .iter()
                .all(|r| in_unit_interval(r.value.number().unwrap())));
        }
    }
}

#[test]
fn adding_a_member_never_raises_the_conjunction() {
    let mut rng = StdRng::seed_from_u64(10);
    for _ in 0..30 {
        let (frame, conj, _) = sample(&mut rng);
        for s in frame.members().nonempty_subsets_lex() {
            let small = conjunction_table(&frame, s)
                .unwrap()
                .instantiate(&conj)
                .unwrap();
            for j in frame.members().difference(s).iter() {
                let big = conjunction_table(&frame, s.with(j))
                    .unwrap()
                    .instantiate(&conj)
                    .unwrap();
                assert!(dominates(&big, &small).unwrap());
            }
        }
    }
}

#[test]
fn conjunction_is_below_quasi_conjunction() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..30 {
        let (frame, conj, quasi) = sample(&mut rng);
        let all = frame.members();
        let c = conjunction_table(&frame, all)
            .unwrap()
            .instantiate(&conj)
            .unwrap();
        let (_, q) = quasi_conjunction(&frame, all).unwrap();
        let q = q.instantiate(&quasi).unwrap();
        assert!(dominates(&c, &q).unwrap());
        let x = conj.get(&PrevisionSymbol::conj(all)).unwrap();
        let nu = quasi.get(&PrevisionSymbol::quasi(all)).unwrap();
        assert!(x <= nu);
    }
}

#[test]
fn partial_voids_read_the_sub_conjunction() {
    let frame = independent_frame(3);
    let t = conjunction_table(&frame, IndexSet::full(3)).unwrap();
    let rendered = t.render();
    assert!(rendered.contains("C_9 | TVV | x{2,3}"));
    assert!(rendered.contains("C_26 | VVF | 0"));
    assert!(rendered.contains("C_0 | VVV | x{1,2,3}"));
}
