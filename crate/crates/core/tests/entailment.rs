mod support;

use condprob_core::coherence::extension_interval;
use condprob_core::crq::{Assessment, PrevisionSymbol};
use condprob_core::entailment::{
    check_condition_ii, check_condition_iii, p_entails, InferenceRule,
};
use condprob_core::logic::{gn_inclusion, ConditionalEvent, Frame, Universe};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use support::{random_conditional, unit_rational};

fn random_rule(rng: &mut StdRng, premises: usize) -> InferenceRule {
    let atoms: Vec<String> = (0..rng.gen_range(2..=5)).map(|i| format!("P{i}")).collect();
    let u = Universe::new(atoms.clone(), vec![]).unwrap();
    InferenceRule {
        name: "random".into(),
        atoms,
        constraints: vec![],
        premises: (0..premises)
            .map(|i| random_conditional(rng, &u, format!("p{i}")))
            .collect(),
        conclusion: random_conditional(rng, &u, "c".into()),
        expected_valid: None,
    }
}

#[test]
fn random_rules_agree_across_procedures() {
    let mut rng = StdRng::seed_from_u64(31);
    let (mut valid, mut consistent) = (0, 0);
    let mut k = 0;
    while consistent < 50 {
        k += 1;
        assert!(k < 1000);
        let rule = random_rule(&mut rng, 1 + k % 3);
        let v = p_entails(&rule).unwrap();
        if !v.p_consistent {
            continue;
        }
        consistent += 1;
        valid += v.p_valid as usize;
        assert_eq!(
            v.lp_lower_bound.as_ref().map(num_traits::One::is_one),
            Some(v.p_valid)
        );
        assert_eq!(check_condition_ii(&rule).unwrap(), v.p_valid);
        assert_eq!(check_condition_iii(&rule).unwrap(), v.p_valid);
    }
    assert!(valid > 0 && valid < consistent);
}

#[test]
fn inclusion_entails_and_orders_probabilities() {
    let mut rng = StdRng::seed_from_u64(32);
    let mut hits = 0;
    while hits < 25 {
        let rule = random_rule(&mut rng, 1);
        let u = rule.universe().unwrap();
        if !gn_inclusion(&u, &rule.premises[0], &rule.conclusion).unwrap() {
            continue;
        }
        let v = p_entails(&rule).unwrap();
        if !v.p_consistent {
            continue;
        }
        assert!(v.p_valid);
        let frame = Frame::new(u, vec![rule.premises[0].clone(), rule.conclusion.clone()]).unwrap();
        let x = unit_rational(&mut rng, 10);
        let a = Assessment::of_conditionals(std::slice::from_ref(&x));
        let base = [PrevisionSymbol::conditional(0)];
        if let Ok(i) = extension_interval(&frame, &base, &a, PrevisionSymbol::conditional(1)) {
            assert!(i.lo >= x);
        }
        hits += 1;
    }
}

#[test]
fn contradictory_premises_are_flagged() {
    let u = Universe::new(["A", "B"], vec![]).unwrap();
    let p = ConditionalEvent::parse("A|B", "A", "B").unwrap();
    let rule = InferenceRule {
        name: "clash".into(),
        atoms: u.atoms().to_vec(),
        constraints: vec![],
        premises: vec![p.clone(), p.negated()],
        conclusion: random_conditional(&mut StdRng::seed_from_u64(0), &u, "c".into()),
        expected_valid: None,
    };
    let v = p_entails(&rule).unwrap();
    assert!(!v.p_consistent && !v.p_valid && v.witness.is_none());
}
