//! General shifting: each disjunctive head is projected onto the strongly
//! connected components it meets, and the remaining head atoms move to the
//! negative body.

use crate::completion::strongly_connected_components;
use crate::model::{Atom, AtomSet, DlpFunction, Rule, RuleSet};

/// Default body-size threshold for [`general_shift_named`].
pub const DEFAULT_MIN_BODY: usize = 2;

/// Prefix of the hidden atoms introduced as body names.
pub const BODY_PREFIX: &str = "@bd_";

pub fn general_shift(module: &DlpFunction) -> DlpFunction {
    general_shift_named(module, None)
}

/// [`general_shift`], except that a rule whose head meets at least two
/// components and whose body has at least `min_body` literals first gets its
/// body named by a fresh hidden atom `@bd_<n>`. With `None` no body is
/// named. Names are numbered in canonical rule order.
pub fn general_shift_named(module: &DlpFunction, min_body: Option<usize>) -> DlpFunction {
    let scc = strongly_connected_components(module);
    let taken = module.signature();
    let mut counter = 0usize;
    let mut fresh = || loop {
        let atom = Atom::new(format!("{BODY_PREFIX}{counter}"));
        counter += 1;
        if !taken.contains(&atom) {
            return atom;
        }
    };

    let mut rules = RuleSet::new();
    let mut hidden = module.hidden().clone();
    for rule in module.rules() {
        if rule.is_constraint() {
            rules.insert(rule.clone());
            continue;
        }
        let pieces: Vec<AtomSet> = scc
            .components
            .iter()
            .map(|s| rule.head().intersection(s).cloned().collect::<AtomSet>())
            .filter(|piece| !piece.is_empty())
            .collect();
        let body_size = rule.pos().len() + rule.neg().len();
        let named = pieces.len() >= 2 && min_body.is_some_and(|t| body_size >= t);
        let (pos, neg) = if named {
            let name = fresh();
            hidden.insert(name.clone());
            rules.insert(Rule::new(
                [name.clone()].into(),
                rule.pos().clone(),
                rule.neg().clone(),
            ));
            (AtomSet::from([name]), AtomSet::new())
        } else {
            (rule.pos().clone(), rule.neg().clone())
        };
        for piece in pieces {
            let mut shifted_neg = neg.clone();
            shifted_neg.extend(rule.head().difference(&piece).cloned());
            rules.insert(Rule::new(piece, pos.clone(), shifted_neg));
        }
    }
    DlpFunction::new(
        rules,
        module.input().clone(),
        module.output().clone(),
        hidden,
    )
    .expect("shifting preserves the module conditions")
}

/// Shifts every head atom apart regardless of head cycles. This does not
/// preserve stable models in general; it is kept as a reference point.
pub fn local_shift(module: &DlpFunction) -> DlpFunction {
    let defined = module.defined();
    let mut rules = RuleSet::new();
    for rule in module.rules() {
        if rule.head().len() <= 1 {
            rules.insert(rule.clone());
            continue;
        }
        for atom in rule.head().intersection(&defined) {
            let mut neg = rule.neg().clone();
            neg.extend(rule.head().iter().filter(|a| *a != atom).cloned());
            rules.insert(Rule::new([atom.clone()].into(), rule.pos().clone(), neg));
        }
    }
    DlpFunction::new(
        rules,
        module.input().clone(),
        module.output().clone(),
        module.hidden().clone(),
    )
    .expect("shifting preserves the module conditions")
}
