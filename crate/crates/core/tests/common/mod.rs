//! Seeded random generators shared by the integration suites.
#![allow(dead_code)]

use modlp::{Atom, AtomSet, DlpFunction, Rule, RuleSet};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn atoms(n: usize) -> Vec<Atom> {
    (0..n).map(|i| Atom::new(format!("p{i}"))).collect()
}

fn pick(rng: &mut Rng8, pool: &[Atom], max: usize) -> AtomSet {
    if pool.is_empty() {
        return AtomSet::new();
    }
    let k = rng.gen_range(0..=max.min(pool.len()));
    pool.choose_multiple(rng, k).cloned().collect()
}

/// A random rule with head from `heads` and body from `body`.
pub fn rule(rng: &mut Rng8, heads: &[Atom], body: &[Atom], max_head: usize) -> Rule {
    let head = if rng.gen_bool(0.1) {
        AtomSet::new()
    } else {
        let mut h = pick(rng, heads, max_head);
        if h.is_empty() && !heads.is_empty() {
            h.insert(heads.choose(rng).unwrap().clone());
        }
        h
    };
    let pos = pick(rng, body, 2);
    let neg: AtomSet = pick(rng, body, 2).difference(&pos).cloned().collect();
    Rule::new(head, pos, neg)
}

pub struct Shape {
    pub max_atoms: usize,
    pub max_rules: usize,
    pub max_head: usize,
    pub input: f64,
    pub hidden: f64,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            max_atoms: 8,
            max_rules: 10,
            max_head: 3,
            input: 0.2,
            hidden: 0.25,
        }
    }
}

/// A random module over `p0..` with a random input/output/hidden split.
pub fn module(rng: &mut Rng8, shape: &Shape) -> DlpFunction {
    let n = rng.gen_range(1..=shape.max_atoms);
    let all = atoms(n);
    let (mut input, mut output, mut hidden) = (AtomSet::new(), AtomSet::new(), AtomSet::new());
    for a in &all {
        let x: f64 = rng.gen();
        if x < shape.input {
            input.insert(a.clone());
        } else if x < shape.input + shape.hidden {
            hidden.insert(a.clone());
        } else {
            output.insert(a.clone());
        }
    }
    let heads: Vec<Atom> = output.union(&hidden).cloned().collect();
    let k = rng.gen_range(0..=shape.max_rules);
    let rules: RuleSet = (0..k)
        .map(|_| rule(rng, &heads, &all, shape.max_head))
        .collect();
    DlpFunction::new(rules, input, output, hidden).unwrap()
}

/// A random ordinary program: no input or hidden atoms.
pub fn ordinary(rng: &mut Rng8, max_atoms: usize, max_rules: usize) -> DlpFunction {
    module(
        rng,
        &Shape {
            max_atoms,
            max_rules,
            input: 0.0,
            hidden: 0.0,
            ..Shape::default()
        },
    )
}

/// The same module with every negative body literal dropped.
pub fn positive(p: &DlpFunction) -> DlpFunction {
    let rules: RuleSet = p
        .rules()
        .iter()
        .map(|r| Rule::new(r.head().clone(), r.pos().clone(), AtomSet::new()))
        .collect();
    DlpFunction::new(rules, p.input().clone(), p.output().clone(), p.hidden().clone()).unwrap()
}

/// Two modules that respect each other's interfaces: atoms are split into
/// the outputs and hidden atoms of either side plus shared external inputs.
/// The join may still be undefined through mutual positive dependence.
pub fn module_pair(rng: &mut Rng8, max_atoms: usize, max_rules: usize) -> (DlpFunction, DlpFunction) {
    let n = rng.gen_range(2..=max_atoms);
    let all = atoms(n);
    let mut parts: [Vec<Atom>; 5] = Default::default();
    for a in all {
        parts[rng.gen_range(0..5)].push(a);
    }
    let [o1, h1, o2, h2, ext] = parts;
    let side = |rng: &mut Rng8, o: &[Atom], h: &[Atom], other: &[Atom]| {
        let heads: Vec<Atom> = o.iter().chain(h).cloned().collect();
        let input: Vec<Atom> = other.iter().chain(&ext).cloned().collect();
        let body: Vec<Atom> = heads.iter().chain(&input).cloned().collect();
        let k = rng.gen_range(0..=max_rules / 2);
        let rules: RuleSet = (0..k).map(|_| rule(rng, &heads, &body, 3)).collect();
        DlpFunction::new(
            rules,
            input.into_iter().collect(),
            o.iter().cloned().collect(),
            h.iter().cloned().collect(),
        )
        .unwrap()
    };
    let p1 = side(rng, &o1, &h1, &o2);
    let p2 = side(rng, &o2, &h2, &o1);
    (p1, p2)
}

/// Pairs with identical input and output signatures. Roughly half are
/// built to be equivalent (shifting, renamed hidden atoms); the rest
/// perturb or replace the rules.
pub fn compatible_pair(rng: &mut Rng8, max_atoms: usize) -> (DlpFunction, DlpFunction) {
    use std::collections::BTreeMap;
    let shape = Shape {
        max_atoms: max_atoms.saturating_sub(2).max(1),
        max_rules: 6,
        ..Shape::default()
    };
    let p1 = module(rng, &shape);
    let visible: Vec<Atom> = p1.visible().into_iter().collect();
    let heads_o: Vec<Atom> = p1.output().iter().cloned().collect();
    let p2 = match rng.gen_range(0..4) {
        0 => modlp::shifting::general_shift_named(&p1, [None, Some(0), Some(2)][rng.gen_range(0..3)]),
        1 => {
            let mapping: BTreeMap<Atom, Atom> = p1
                .hidden()
                .iter()
                .map(|h| (h.clone(), Atom::new(format!("q{}", h.name()))))
                .collect();
            modlp::model::rename_atoms(&p1, &mapping).unwrap()
        }
        2 => {
            let mut rules = p1.rules().clone();
            let heads: Vec<Atom> = p1.defined().into_iter().collect();
            let all: Vec<Atom> = p1.signature().into_iter().collect();
            if !rules.is_empty() && rng.gen_bool(0.5) {
                let victim = rules.iter().nth(rng.gen_range(0..rules.len())).unwrap().clone();
                rules.remove(&victim);
            } else {
                rules.insert(rule(rng, &heads, &all, 2));
            }
            DlpFunction::new(
                rules,
                p1.input().clone(),
                p1.output().clone(),
                p1.hidden().clone(),
            )
            .unwrap()
        }
        _ => {
            let room = max_atoms.saturating_sub(visible.len()).min(2);
            let hidden: Vec<Atom> = (0..rng.gen_range(0..=room))
                .map(|i| Atom::new(format!("h{i}")))
                .collect();
            let heads: Vec<Atom> = heads_o.iter().chain(&hidden).cloned().collect();
            let all: Vec<Atom> = visible.iter().chain(&hidden).cloned().collect();
            let rules: RuleSet = (0..rng.gen_range(0..=6))
                .map(|_| rule(rng, &heads, &all, 2))
                .collect();
            DlpFunction::new(
                rules,
                p1.input().clone(),
                p1.output().clone(),
                hidden.into_iter().collect(),
            )
            .unwrap()
        }
    };
    (p1, p2)
}

/// A random two-level QBF with at most `max_vars` variables and
/// `max_disjuncts` disjuncts. Variables are declared only if used.
pub fn qbf(rng: &mut Rng8, max_vars: usize, max_disjuncts: usize) -> modlp::qbf::QbfInstance {
    use modlp::qbf::{Disjunct, QbfInstance};
    let nx = rng.gen_range(0..=max_vars);
    let ny = rng.gen_range(0..=max_vars - nx);
    let xs: Vec<Atom> = (0..nx).map(|i| Atom::new(format!("x{i}"))).collect();
    let ys: Vec<Atom> = (0..ny).map(|i| Atom::new(format!("y{i}"))).collect();
    let n = rng.gen_range(0..=max_disjuncts);
    let mut disjuncts = Vec::new();
    for _ in 0..n {
        let mut d = Disjunct::default();
        for x in &xs {
            match rng.gen_range(0..4) {
                0 => {
                    d.neg_exists.insert(x.clone());
                }
                1 => {
                    d.pos_exists.insert(x.clone());
                }
                _ => {}
            }
        }
        for y in &ys {
            match rng.gen_range(0..4) {
                0 => {
                    d.neg_forall.insert(y.clone());
                }
                1 => {
                    d.pos_forall.insert(y.clone());
                }
                _ => {}
            }
        }
        disjuncts.push(d);
    }
    let used = |pick: fn(&Disjunct) -> [&AtomSet; 2]| -> AtomSet {
        disjuncts
            .iter()
            .flat_map(|d| pick(d).into_iter().flatten().cloned())
            .collect()
    };
    let exists = used(|d| [&d.neg_exists, &d.pos_exists]);
    let forall = used(|d| [&d.neg_forall, &d.pos_forall]);
    QbfInstance::new(exists, forall, disjuncts).unwrap()
}
