mod common;

use common::{compatible_pair, module, ordinary, rng, Shape};
use modlp::algebra::join;
use modlp::equivalence::{eqt, has_eva, modularly_equivalent, Method};
use modlp::semantics::stable_models;
use modlp::shifting::general_shift;
use modlp::DlpFunction;
use proptest::prelude::*;

fn equivalent(p1: &DlpFunction, p2: &DlpFunction) -> bool {
    modularly_equivalent(p1, p2, Method::Direct).unwrap().equivalent
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn reflexive_and_symmetric(seed in any::<u64>()) {
        let (p1, p2) = compatible_pair(&mut rng(seed), 7);
        prop_assert!(equivalent(&p1, &p1));
        prop_assert_eq!(equivalent(&p1, &p2), equivalent(&p2, &p1));
    }

    #[test]
    fn ordinary_programs_compare_by_stable_models(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p1 = ordinary(&mut r, 5, 6);
        let p2 = DlpFunction::new(
            ordinary(&mut r, 5, 6).rules().clone(),
            Default::default(),
            p1.output().clone(),
            Default::default(),
        );
        if let Ok(p2) = p2 {
            let same = stable_models(&p1).unwrap() == stable_models(&p2).unwrap();
            prop_assert_eq!(equivalent(&p1, &p2), same);
        }
    }

    #[test]
    fn congruence_under_join(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = module(&mut r, &Shape { max_atoms: 6, max_rules: 7, ..Shape::default() });
        let q = general_shift(&p);
        let ctx = module(&mut r, &Shape { max_atoms: 4, max_rules: 4, hidden: 0.0, ..Shape::default() });
        let ctx = modlp::model::rename_atoms(
            &ctx,
            &ctx.signature().iter().map(|a| (a.clone(), modlp::Atom::new(format!("c{}", a.name())))).collect(),
        ).unwrap();
        if let (Ok(a), Ok(b)) = (join(&p, &ctx), join(&q, &ctx)) {
            prop_assert!(equivalent(&a, &b));
        }
    }

    #[test]
    fn translation_agrees_with_direct_check(seed in any::<u64>()) {
        let (p1, p2) = compatible_pair(&mut rng(seed), 7);
        if has_eva(&p1).unwrap() && has_eva(&p2).unwrap() {
            let d = modularly_equivalent(&p1, &p2, Method::Direct).unwrap();
            let t = modularly_equivalent(&p1, &p2, Method::Translate).unwrap();
            prop_assert_eq!(d.equivalent, t.equivalent);
            prop_assert_eq!(d.witness.is_none(), d.equivalent);
            prop_assert_eq!(t.witness.is_none(), t.equivalent);
        }
    }

    #[test]
    fn translation_has_linear_size(seed in any::<u64>()) {
        let (p1, p2) = compatible_pair(&mut rng(seed), 7);
        if has_eva(&p1).unwrap() && has_eva(&p2).unwrap() {
            let t = eqt(&p1, &p2).unwrap();
            let n2 = p2.rules().len();
            let v = p2.output().len() + p2.hidden().len();
            prop_assert!(t.rules().len() <= p1.rules().len() + 3 * n2 + 3 * v + 3);
            let user: Vec<_> = p1.signature().into_iter().chain(p2.visible()).collect();
            prop_assert!(user.iter().all(|a| !a.is_reserved()));
            prop_assert_eq!(t.input(), p1.input());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn transitive_on_shift_chains(seed in any::<u64>()) {
        let (p1, p2) = compatible_pair(&mut rng(seed), 7);
        let p3 = modlp::shifting::general_shift_named(&p2, Some(0));
        if equivalent(&p1, &p2) {
            prop_assert!(equivalent(&p1, &p3));
        }
    }

    #[test]
    fn translation_signature_size(seed in any::<u64>()) {
        let (p1, p2) = compatible_pair(&mut rng(seed), 7);
        if has_eva(&p1).unwrap() && has_eva(&p2).unwrap() {
            let t = eqt(&p1, &p2).unwrap();
            let (o2, h2) = (p2.output().len(), p2.hidden().len());
            prop_assert_eq!(t.signature().len(), p1.signature().len() + h2 + 2 * (o2 + h2) + 4);
        }
    }
}
