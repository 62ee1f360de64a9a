mod support;

use condprob_core::logic::{enumerate_constituents, ConditionalEvent, Frame, Status, Universe};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use support::{independent_frame, random_conditional, random_formula};

#[test]
fn constituents_partition_the_admissible_worlds() {
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..60 {
        let atoms: Vec<String> = (0..rng.gen_range(2..=6)).map(|i| format!("P{i}")).collect();
        let constraints = if rng.gen_bool(0.3) {
            vec![random_formula(&mut rng, &atoms, 1)]
        } else {
            vec![]
        };
        let Ok(u) = Universe::new(atoms, constraints) else {
            continue;
        };
        if u.admissible_worlds().is_empty() {
            continue;
        }
        let n = rng.gen_range(1..=3);
        let family: Vec<ConditionalEvent> = (0..n)
            .map(|i| random_conditional(&mut rng, &u, format!("c{i}")))
            .collect();
        let cs = enumerate_constituents(&u, &family).unwrap();
        for &w in u.admissible_worlds() {
            assert_eq!(cs.iter().filter(|c| c.worlds.contains(&w)).count(), 1);
        }
        let total: usize = cs.iter().map(|c| c.worlds.len()).sum();
        assert_eq!(total, u.admissible_worlds().len());
        for c in &cs {
            let t = &c.tripartition;
            assert!(t.truths.intersection(t.falsities).is_empty());
            assert!(t.truths.intersection(t.voids).is_empty());
            assert!(t.falsities.intersection(t.voids).is_empty());
            assert_eq!(t.truths.union(t.falsities).union(t.voids).len(), n);
            for (i, member) in family.iter().enumerate() {
                let w = c.worlds[0];
                let h = u.holds(&member.antecedent, w).unwrap();
                let e = u.holds(&member.consequent, w).unwrap();
                let expected = match (h, e) {
                    (false, _) => Status::Void,
                    (true, true) => Status::True,
                    (true, false) => Status::False,
                };
                assert_eq!(t.status(i), expected);
            }
        }
    }
}

#[test]
fn independent_families_have_every_signature() {
    for n in 1..=4 {
        let frame = independent_frame(n);
        assert_eq!(frame.constituents().len(), 3usize.pow(n as u32));
        assert!(frame.is_logically_independent());
        assert!(frame.c0().is_some());
    }
}

#[test]
fn shared_structure_is_not_independent() {
    let u = Universe::new(["A", "B", "C"], vec![]).unwrap();
    let family = vec![
        ConditionalEvent::parse("C|A", "C", "A").unwrap(),
        ConditionalEvent::parse("C|B", "C", "B").unwrap(),
    ];
    let frame = Frame::new(u, family).unwrap();
    assert_eq!(frame.constituents().len(), 7);
    assert!(!frame.is_logically_independent());
}
