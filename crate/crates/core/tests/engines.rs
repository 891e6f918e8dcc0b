mod common;

use common::{module, rng, Shape};
use modlp::completion::stable_models_via_completion;
use modlp::semantics::{search_stable_models, stable_models};

#[test]
fn search_matches_enumeration() {
    let mut r = rng(11);
    let shape = Shape { max_atoms: 10, max_rules: 12, ..Shape::default() };
    for _ in 0..1500 {
        let p = module(&mut r, &shape);
        let expected = stable_models(&p).unwrap();
        assert_eq!(search_stable_models(&p, None).unwrap(), expected, "{p}");
        let first = search_stable_models(&p, Some(1)).unwrap();
        assert_eq!(first.len(), expected.len().min(1));
        assert!(first.iter().all(|m| expected.contains(m)));
    }
}

#[test]
fn engines_agree() {
    let mut r = rng(12);
    let shape = Shape { max_atoms: 12, max_rules: 12, ..Shape::default() };
    for _ in 0..400 {
        let p = module(&mut r, &shape);
        assert_eq!(stable_models(&p).unwrap(), stable_models_via_completion(&p).unwrap(), "{p}");
    }
}
