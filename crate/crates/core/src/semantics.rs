//! Classical, input-minimal and stable models by brute-force enumeration,
//! together with input instantiation and the Gelfond-Lifschitz reduct.

use crate::bits::{has_smaller, Compiled, MaskRule};
use crate::completion;
use crate::search::Search;
use crate::error::{Error, Result};
use crate::model::{AtomSet, DlpFunction, Interpretation, ModelSet, Rule, RuleSet};
use std::fmt;
use std::str::FromStr;

/// Size bounds for the exponential procedures. Raising them is allowed but
/// every step up doubles the running time.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest signature enumerated in full.
    pub enumeration: usize,
    /// Largest signature for `minimal_models`, whose check is nested.
    pub minimal: usize,
    /// Largest strongly connected component whose loops are enumerated.
    pub loops: usize,
    /// Largest visible signature scanned by the EVA check.
    pub eva: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            enumeration: 24,
            minimal: 20,
            loops: 12,
            eva: 16,
        }
    }
}

/// Which stable-model engine to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Engine {
    /// Minimal models of the reduct.
    #[default]
    Reduct,
    /// Models of the completion and the loop formulas.
    Complf,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Reduct => "reduct",
            Engine::Complf => "complf",
        })
    }
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "reduct" => Ok(Engine::Reduct),
            "complf" => Ok(Engine::Complf),
            _ => Err(format!("unknown engine `{s}` (expected reduct or complf)")),
        }
    }
}

pub fn is_classical_model(module: &DlpFunction, m: &Interpretation) -> Result<bool> {
    module.check_interpretation(m)?;
    Ok(module.rules().iter().all(|r| satisfies(m, r)))
}

fn satisfies(m: &AtomSet, rule: &Rule) -> bool {
    !rule.pos().is_subset(m) || !rule.neg().is_disjoint(m) || !rule.head().is_disjoint(m)
}

pub fn classical_models(module: &DlpFunction) -> Result<ModelSet> {
    classical_models_with(module, &Limits::default())
}

pub fn classical_models_with(module: &DlpFunction, limits: &Limits) -> Result<ModelSet> {
    let c = Compiled::new(module, limits.enumeration)?;
    Ok(c.subsets().filter(|&m| c.is_model(m)).map(|m| c.set(m)).collect())
}

/// `Π/Mi`: fixes the input atoms to `Mi` and evaluates them away.
pub fn instantiate(module: &DlpFunction, mi: &AtomSet) -> Result<DlpFunction> {
    let stray: AtomSet = mi.difference(module.input()).cloned().collect();
    if !stray.is_empty() {
        return Err(Error::NotAnInput { atoms: stray });
    }
    let input = module.input();
    let mut rules = RuleSet::new();
    for rule in module.rules() {
        let applies = rule.head().iter().all(|a| !input.contains(a) || !mi.contains(a))
            && rule.pos().iter().all(|a| !input.contains(a) || mi.contains(a))
            && rule.neg().iter().all(|a| !input.contains(a) || !mi.contains(a));
        if applies {
            let strip = |s: &AtomSet| s.difference(input).cloned().collect::<AtomSet>();
            rules.insert(Rule::new(
                strip(rule.head()),
                strip(rule.pos()),
                strip(rule.neg()),
            ));
        }
    }
    DlpFunction::new(
        rules,
        AtomSet::new(),
        module.output().clone(),
        module.hidden().clone(),
    )
}

/// `Π^M`: drops rules whose negative body meets `M` and erases the remaining
/// negative bodies.
pub fn gl_reduct(module: &DlpFunction, m: &Interpretation) -> Result<DlpFunction> {
    module.check_interpretation(m)?;
    let rules = module
        .rules()
        .iter()
        .filter(|r| r.neg().is_disjoint(m))
        .map(|r| Rule::new(r.head().clone(), r.pos().clone(), AtomSet::new()))
        .collect();
    DlpFunction::new(
        rules,
        module.input().clone(),
        module.output().clone(),
        module.hidden().clone(),
    )
}

pub fn minimal_models(module: &DlpFunction) -> Result<ModelSet> {
    minimal_models_with(module, &Limits::default())
}

pub fn minimal_models_with(module: &DlpFunction, limits: &Limits) -> Result<ModelSet> {
    let c = Compiled::new(module, limits.minimal.min(limits.enumeration))?;
    Ok(c.subsets()
        .filter(|&m| c.is_model(m) && !has_smaller(m, c.input, |n| c.is_model(n)))
        .map(|m| c.set(m))
        .collect())
}

pub fn stable_models(module: &DlpFunction) -> Result<ModelSet> {
    stable_models_with(module, &Limits::default())
}

pub fn stable_models_with(module: &DlpFunction, limits: &Limits) -> Result<ModelSet> {
    let c = Compiled::new(module, limits.enumeration)?;
    let mut reduct = Vec::with_capacity(c.rules.len());
    Ok(c.subsets()
        .filter(|&m| stable_mask(&c, m, &mut reduct))
        .map(|m| c.set(m))
        .collect())
}

/// Stable models found by propagation-based backtracking rather than full
/// enumeration, for signatures up to 64 atoms. With `limit`, stops once that
/// many models are found (the models returned are then the first ones in
/// search order, not necessarily the canonically smallest).
pub fn search_stable_models(module: &DlpFunction, limit: Option<usize>) -> Result<ModelSet> {
    let c = Compiled::new(module, crate::bits::MAX_BITS)?;
    let mut out = ModelSet::new();
    if limit == Some(0) {
        return Ok(out);
    }
    Search::new(&c).run(|m| {
        out.insert(c.set(m));
        limit.is_none_or(|k| out.len() < k)
    });
    Ok(out)
}

/// Runs the selected engine.
pub fn solve(module: &DlpFunction, engine: Engine, limits: &Limits) -> Result<ModelSet> {
    match engine {
        Engine::Reduct => stable_models_with(module, limits),
        Engine::Complf => completion::stable_models_via_completion_with(module, limits),
    }
}

pub fn is_stable(module: &DlpFunction, m: &Interpretation) -> Result<bool> {
    module.check_interpretation(m)?;
    let c = Compiled::new(module, crate::bits::MAX_BITS)?;
    Ok(stable_mask(&c, c.mask(m), &mut Vec::new()))
}

fn stable_mask(c: &Compiled, m: u64, reduct: &mut Vec<MaskRule>) -> bool {
    // M satisfies R exactly when it satisfies R^M.
    if !c.is_model(m) {
        return false;
    }
    reduct.clear();
    reduct.extend(c.rules.iter().filter(|r| r.neg & m == 0).copied());
    !has_smaller(m, c.input, |n| reduct.iter().all(|r| r.positive_satisfied(n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::atom_set;
    use crate::parser::{parse_module, parse_rules};

    fn ex310() -> DlpFunction {
        parse_module("#input c.\n#output a, b.\na | b :- not c.\na :- c, not b.\nb :- c, not a.")
            .unwrap()
    }

    fn models(list: &[&[&str]]) -> ModelSet {
        list.iter().map(|m| atom_set(m.iter().copied())).collect()
    }

    #[test]
    fn classical_model_checks() {
        let p = ex310();
        assert!(is_classical_model(&p, &atom_set(["a", "c"])).unwrap());
        let fact = parse_module("#output a, b.\na | b.").unwrap();
        assert!(!is_classical_model(&fact, &AtomSet::new()).unwrap());
        let ic = parse_module("#output a.\n:- a.").unwrap();
        assert!(is_classical_model(&ic, &AtomSet::new()).unwrap());
        assert_eq!(
            is_classical_model(&ic, &atom_set(["z"])).unwrap_err().kind(),
            "OutOfSignature"
        );
    }

    #[test]
    fn classical_model_sets() {
        let fact = parse_module("#output a, b.\na | b.").unwrap();
        assert_eq!(
            classical_models(&fact).unwrap(),
            models(&[&["a"], &["b"], &["a", "b"]])
        );
        assert_eq!(
            classical_models(&DlpFunction::empty()).unwrap(),
            models(&[&[]])
        );
        let p = parse_module("#input b.\n#output a.\na :- b.").unwrap();
        assert_eq!(
            classical_models(&p).unwrap(),
            models(&[&[], &["a"], &["a", "b"]])
        );
    }

    #[test]
    fn instantiation() {
        let p = ex310();
        let with_c = instantiate(&p, &atom_set(["c"])).unwrap();
        assert!(with_c.input().is_empty());
        assert_eq!(with_c.rules(), &parse_rules("a :- not b. b :- not a.").unwrap());
        let without = instantiate(&p, &AtomSet::new()).unwrap();
        assert_eq!(without.rules(), &parse_rules("a | b.").unwrap());
        let closed = parse_module("#output a.\na :- not a.").unwrap();
        assert_eq!(instantiate(&closed, &AtomSet::new()).unwrap(), closed);
        assert_eq!(
            instantiate(&p, &atom_set(["a"])).unwrap_err().kind(),
            "NotAnInput"
        );
    }

    #[test]
    fn reducts() {
        let p = ex310();
        let r1 = gl_reduct(&p, &atom_set(["a"])).unwrap();
        assert_eq!(r1.rules(), &parse_rules("a | b. a :- c.").unwrap());
        let r4 = gl_reduct(&p, &atom_set(["b", "c"])).unwrap();
        assert_eq!(r4.rules(), &parse_rules("b :- c.").unwrap());
        assert!(r4.is_positive());
        let positive = parse_module("#input c.\n#output a.\na :- c.").unwrap();
        assert_eq!(gl_reduct(&positive, &atom_set(["a"])).unwrap(), positive);
    }

    #[test]
    fn minimal_models_of_examples() {
        let p1 = parse_module(
            "#input d, e.\n#output a, b, c.\na | b.\na :- b.\nb :- a.\na :- c.\nc | d | e :- a, b.",
        )
        .unwrap();
        assert_eq!(
            minimal_models(&p1).unwrap(),
            models(&[
                &["a", "b", "c"],
                &["a", "b", "d"],
                &["a", "b", "e"],
                &["a", "b", "d", "e"]
            ])
        );
        let p2 = parse_module(
            "#input a, b, c.\n#output d, e.\nd :- c.\ne :- d.\nd :- e.\nc | d | e :- a, b.",
        )
        .unwrap();
        assert_eq!(
            minimal_models(&p2).unwrap(),
            models(&[
                &[],
                &["a"],
                &["b"],
                &["c", "d", "e"],
                &["a", "b", "d", "e"],
                &["a", "c", "d", "e"],
                &["b", "c", "d", "e"],
                &["a", "b", "c", "d", "e"]
            ])
        );
        assert_eq!(
            minimal_models(&DlpFunction::empty()).unwrap(),
            models(&[&[]])
        );
    }

    #[test]
    fn stable_models_of_examples() {
        let expected = models(&[&["a"], &["b"], &["a", "c"], &["b", "c"]]);
        assert_eq!(stable_models(&ex310()).unwrap(), expected);
        let odd = parse_module("#output u.\nu :- not u.").unwrap();
        assert!(stable_models(&odd).unwrap().is_empty());
        let p1 = parse_module("#input a, c.\n#output b.\na | b.\nb | c.").unwrap();
        assert_eq!(
            stable_models(&p1).unwrap(),
            models(&[&["b"], &["a", "b"], &["a", "c"], &["b", "c"]])
        );
    }

    #[test]
    fn single_stability_checks() {
        let p = ex310();
        assert!(is_stable(&p, &atom_set(["a", "c"])).unwrap());
        assert!(!is_stable(&p, &atom_set(["a", "b"])).unwrap());
        assert!(is_stable(&DlpFunction::empty(), &AtomSet::new()).unwrap());
    }

    #[test]
    fn caps_are_enforced() {
        let names: Vec<String> = (0..25).map(|i| format!("p{i}")).collect();
        let text = format!("#output {}.", names.join(", "));
        let big = parse_module(&text).unwrap();
        assert_eq!(
            stable_models(&big).unwrap_err(),
            Error::SignatureTooLarge { size: 25, cap: 24 }
        );
        let limits = Limits {
            minimal: 4,
            ..Limits::default()
        };
        let five = parse_module("#output a, b, c, d, e.").unwrap();
        assert_eq!(
            minimal_models_with(&five, &limits).unwrap_err().kind(),
            "SignatureTooLarge"
        );
    }

    #[test]
    fn engine_names() {
        assert_eq!("complf".parse::<Engine>().unwrap(), Engine::Complf);
        assert_eq!(Engine::Reduct.to_string(), "reduct");
        assert!("sat".parse::<Engine>().is_err());
    }
}
