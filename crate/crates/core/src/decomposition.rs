//! Splitting a module into a constraint module and one module per block of
//! strongly connected components, where components that would expose each
//! other's hidden atoms are merged into one block.

use crate::algebra::join_all;
use crate::completion::{strongly_connected_components, SccPartition};
use crate::error::Result;
use crate::model::{defining_rules_of, rule_atoms, AtomSet, DlpFunction, RuleSet};
use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// `Π0`: the constraints without hidden atoms, plus unused input atoms.
    pub constraint_module: DlpFunction,
    /// One module per block, ordered along the dependency order.
    pub parts: Vec<(AtomSet, DlpFunction)>,
}

impl Decomposition {
    /// `Π0` followed by the parts.
    pub fn modules(&self) -> impl Iterator<Item = &DlpFunction> {
        std::iter::once(&self.constraint_module).chain(self.parts.iter().map(|(_, m)| m))
    }
}

/// The module a single component (or block) `S` would get without any
/// constraints: `⟨Def_R(S), At(Def_R(S)) \ S, S ∩ O, S ∩ H⟩`.
fn component_module(module: &DlpFunction, set: &AtomSet, extra: &RuleSet) -> DlpFunction {
    let mut rules = defining_rules_of(module.rules(), set);
    rules.extend(extra.iter().cloned());
    let input = rule_atoms(&rules).difference(set).cloned().collect();
    DlpFunction::new(
        rules,
        input,
        set.intersection(module.output()).cloned().collect(),
        set.intersection(module.hidden()).cloned().collect(),
    )
    .expect("component modules satisfy the module conditions")
}

fn conflict_indices(module: &DlpFunction, scc: &SccPartition) -> BTreeSet<(usize, usize)> {
    let parts: Vec<DlpFunction> = scc
        .components
        .iter()
        .map(|s| component_module(module, s, &RuleSet::new()))
        .collect();
    let constraints: Vec<AtomSet> = module
        .rules()
        .iter()
        .filter(|r| r.is_constraint())
        .map(|r| r.atoms())
        .collect();
    let mut out = BTreeSet::new();
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            let (p, q) = (&parts[i], &parts[j]);
            let exposed = !p.hidden().is_disjoint(q.input()) || !q.hidden().is_disjoint(p.input());
            let shared_constraint = constraints
                .iter()
                .any(|c| !c.is_disjoint(p.hidden()) && !c.is_disjoint(q.hidden()));
            if exposed || shared_constraint {
                out.insert((i, j));
            }
        }
    }
    out
}

/// Pairs of distinct components whose modules would not respect each
/// other's hidden atoms. Each pair is listed once, smaller component first.
pub fn hidden_conflicts(module: &DlpFunction) -> BTreeSet<(AtomSet, AtomSet)> {
    let scc = strongly_connected_components(module);
    conflict_indices(module, &scc)
        .into_iter()
        .map(|(i, j)| (scc.components[i].clone(), scc.components[j].clone()))
        .collect()
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut root = x;
    while parent[root] != root {
        root = parent[root];
    }
    let mut x = x;
    while parent[x] != root {
        let next = parent[x];
        parent[x] = root;
        x = next;
    }
    root
}

pub fn decompose(module: &DlpFunction) -> Decomposition {
    let scc = strongly_connected_components(module);
    let k = scc.len();
    let mut parent: Vec<usize> = (0..k).collect();
    for (i, j) in conflict_indices(module, &scc) {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        parent[ri.max(rj)] = ri.min(rj);
    }
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); k];
    for i in 0..k {
        let root = find(&mut parent, i);
        members[root].push(i);
    }
    let blocks: Vec<Vec<usize>> = members.into_iter().filter(|m| !m.is_empty()).collect();

    let constraints: RuleSet = module
        .rules()
        .iter()
        .filter(|r| r.is_constraint())
        .cloned()
        .collect();
    let (hidden_ic, ic0): (RuleSet, RuleSet) = constraints
        .into_iter()
        .partition(|r| !r.atoms().is_disjoint(module.hidden()));

    let mut unused_input: AtomSet = module.input().difference(&module.rule_atoms()).cloned().collect();
    unused_input.extend(rule_atoms(&ic0));
    let constraint_module = DlpFunction::new(ic0, unused_input, AtomSet::new(), AtomSet::new())
        .expect("constraint module is well formed");

    let block_sets: Vec<AtomSet> = blocks
        .iter()
        .map(|b| b.iter().flat_map(|&i| scc.components[i].iter().cloned()).collect())
        .collect();
    let mut parts: Vec<(AtomSet, DlpFunction)> = Vec::new();
    for index in linearize(&blocks, &block_sets, &scc) {
        let set = &block_sets[index];
        let own_hidden: AtomSet = set.intersection(module.hidden()).cloned().collect();
        let ic: RuleSet = hidden_ic
            .iter()
            .filter(|r| !r.atoms().is_disjoint(&own_hidden))
            .cloned()
            .collect();
        parts.push((set.clone(), component_module(module, set, &ic)));
    }
    Decomposition {
        constraint_module,
        parts,
    }
}

/// Topological order of blocks under the lifted dependency order, breaking
/// ties (and cycles created by merging) by the smallest atom.
fn linearize(blocks: &[Vec<usize>], sets: &[AtomSet], scc: &SccPartition) -> Vec<usize> {
    let n = blocks.len();
    let before = |x: usize, y: usize| {
        x != y
            && blocks[x]
                .iter()
                .any(|&i| blocks[y].iter().any(|&j| scc.leq(i, j)))
    };
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let remaining = (0..n).filter(|&x| !done[x]);
        let ready = remaining
            .clone()
            .filter(|&x| (0..n).all(|y| done[y] || !before(y, x)))
            .min_by(|&x, &y| sets[x].first().cmp(&sets[y].first()));
        let pick = ready
            .or_else(|| remaining.min_by(|&x, &y| sets[x].first().cmp(&sets[y].first())))
            .expect("a block remains");
        done[pick] = true;
        order.push(pick);
    }
    order
}

/// Joins `Π0` with every part; for a decomposition produced by
/// [`decompose`] this gives back the source module.
pub fn reconstruct(decomposition: &Decomposition) -> Result<DlpFunction> {
    join_all(decomposition.modules())
}
