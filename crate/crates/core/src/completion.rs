//! Positive dependency graph, strongly connected components, loops, and the
//! completion/loop-formula characterisation of stable models.

use crate::bits::Compiled;
use crate::error::{Error, Result};
use crate::model::{Atom, AtomSet, DlpFunction, ModelSet, Rule};
use crate::semantics::Limits;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// `DG+(Π)`: nodes `O ∪ H`, edge `(b, a)` when some rule has `a` in the head
/// and `b` in the positive body.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DepGraph {
    pub nodes: AtomSet,
    pub edges: BTreeSet<(Atom, Atom)>,
}

impl DepGraph {
    pub fn successors<'a>(&'a self, atom: &'a Atom) -> impl Iterator<Item = &'a Atom> + 'a {
        let start = (atom.clone(), Atom::new(""));
        self.edges
            .range(start..)
            .take_while(move |(b, _)| b == atom)
            .map(|(_, a)| a)
    }
}

pub fn positive_dependency_graph(module: &DlpFunction) -> DepGraph {
    let nodes = module.defined();
    let mut edges = BTreeSet::new();
    for rule in module.rules() {
        for b in rule.pos().iter().filter(|b| nodes.contains(*b)) {
            for a in rule.head().iter().filter(|a| nodes.contains(*a)) {
                edges.insert((b.clone(), a.clone()));
            }
        }
    }
    DepGraph { nodes, edges }
}

/// SCCs of `DG+(Π)` with the lifted dependency order: `S ≤ S'` when some
/// atom of `S'` depends positively on some atom of `S` (or `S = S'`).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SccPartition {
    /// Components sorted by their smallest atom.
    pub components: Vec<AtomSet>,
    reach: Vec<Vec<bool>>,
    owner: BTreeMap<Atom, usize>,
}

impl SccPartition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component_of(&self, atom: &Atom) -> Option<usize> {
        self.owner.get(atom).copied()
    }

    /// `components[i] ≤ components[j]`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.reach[i][j]
    }
}

pub fn strongly_connected_components(module: &DlpFunction) -> SccPartition {
    scc_of_graph(&positive_dependency_graph(module))
}

pub fn scc_of_graph(graph: &DepGraph) -> SccPartition {
    let nodes: Vec<&Atom> = graph.nodes.iter().collect();
    let index: BTreeMap<&Atom, usize> = nodes.iter().enumerate().map(|(i, a)| (*a, i)).collect();
    let mut adj = vec![Vec::new(); nodes.len()];
    for (b, a) in &graph.edges {
        adj[index[b]].push(index[a]);
    }
    let raw = tarjan(&adj);

    let mut components: Vec<AtomSet> = raw
        .iter()
        .map(|c| c.iter().map(|&i| nodes[i].clone()).collect())
        .collect();
    components.sort_by(|x, y| x.first().cmp(&y.first()));
    let mut owner = BTreeMap::new();
    for (ci, c) in components.iter().enumerate() {
        for a in c {
            owner.insert(a.clone(), ci);
        }
    }

    let k = components.len();
    let mut reach = vec![vec![false; k]; k];
    let mut cadj = vec![BTreeSet::new(); k];
    for (b, a) in &graph.edges {
        cadj[owner[b]].insert(owner[a]);
    }
    for (start, row) in reach.iter_mut().enumerate() {
        let mut stack = vec![start];
        row[start] = true;
        while let Some(c) = stack.pop() {
            for &d in &cadj[c] {
                if !row[d] {
                    row[d] = true;
                    stack.push(d);
                }
            }
        }
    }
    SccPartition {
        components,
        reach,
        owner,
    }
}

/// Iterative Tarjan; returns components as lists of node indices.
fn tarjan(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    const UNSEEN: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        let mut work: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut next)) = work.last_mut() {
            if *next < adj[v].len() {
                let w = adj[v][*next];
                *next += 1;
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            work.pop();
            if let Some(&(parent, _)) = work.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut component = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    component.push(w);
                    if w == v {
                        break;
                    }
                }
                out.push(component);
            }
        }
    }
    out
}

/// No cycles in `DG+(Π)`, self-loops included.
pub fn is_tight(module: &DlpFunction) -> bool {
    let graph = positive_dependency_graph(module);
    if graph.edges.iter().any(|(b, a)| a == b) {
        return false;
    }
    scc_of_graph(&graph).components.iter().all(|c| c.len() == 1)
}

/// Every non-empty subset of every SCC.
pub fn enumerate_loops(module: &DlpFunction, cap: usize) -> Result<BTreeSet<AtomSet>> {
    let mut loops = BTreeSet::new();
    for component in strongly_connected_components(module).components {
        if component.len() > cap {
            return Err(Error::ComponentTooLarge { component, cap });
        }
        let atoms: Vec<&Atom> = component.iter().collect();
        for mask in 1u64..(1u64 << atoms.len()) {
            loops.insert(
                atoms
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, a)| (*a).clone())
                    .collect(),
            );
        }
    }
    Ok(loops)
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Literal {
    Pos(Atom),
    Neg(Atom),
}

impl Literal {
    pub fn atom(&self) -> &Atom {
        match self {
            Literal::Pos(a) | Literal::Neg(a) => a,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Pos(a) => write!(f, "{a}"),
            Literal::Neg(a) => write!(f, "-{a}"),
        }
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A conjunction of literals; the empty term is true.
pub type Term = BTreeSet<Literal>;

/// `⋀antecedent → ⋁consequent`. An empty antecedent is true; an empty
/// consequent is false.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PropFormula {
    pub antecedent: Term,
    pub consequent: BTreeSet<Term>,
}

impl PropFormula {
    /// Classical evaluation under `m`.
    pub fn holds(&self, m: &AtomSet) -> bool {
        let lit = |l: &Literal| match l {
            Literal::Pos(a) => m.contains(a),
            Literal::Neg(a) => !m.contains(a),
        };
        !self.antecedent.iter().all(lit) || self.consequent.iter().any(|t| t.iter().all(lit))
    }
}

fn show_term(term: &Term, out: &mut String) {
    if term.is_empty() {
        out.push_str("_T_");
        return;
    }
    let parts: Vec<String> = term.iter().map(Literal::to_string).collect();
    out.push_str(&parts.join(" & "));
}

impl fmt::Display for PropFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        show_term(&self.antecedent, &mut out);
        out.push_str(" -> ");
        if self.consequent.is_empty() {
            out.push_str("_|_");
        }
        let wrap = self.consequent.len() > 1;
        for (i, term) in self.consequent.iter().enumerate() {
            if i > 0 {
                out.push_str(" | ");
            }
            if wrap && term.len() > 1 {
                out.push('(');
                show_term(term, &mut out);
                out.push(')');
            } else {
                show_term(term, &mut out);
            }
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for PropFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

/// One formula per line.
pub fn render_formulas(formulas: &BTreeSet<PropFormula>) -> String {
    formulas
        .iter()
        .map(PropFormula::to_string)
        .collect::<Vec<_>>()
        .join("\n")
}

fn positive(set: &AtomSet) -> impl Iterator<Item = Literal> + '_ {
    set.iter().cloned().map(Literal::Pos)
}

fn negative<'a>(set: impl IntoIterator<Item = &'a Atom>) -> impl Iterator<Item = Literal> {
    set.into_iter().cloned().map(Literal::Neg)
}

/// `B ∧ ¬C ∧ ¬(A \ L)`.
fn support_term(rule: &Rule, removed: &AtomSet) -> Term {
    positive(rule.pos())
        .chain(negative(rule.neg()))
        .chain(negative(rule.head().difference(removed)))
        .collect()
}

pub fn supporting_formulas(module: &DlpFunction, atom: &Atom) -> Result<BTreeSet<Term>> {
    if !module.output().contains(atom) && !module.hidden().contains(atom) {
        return Err(Error::NotDefinedHere { atom: atom.clone() });
    }
    let single: AtomSet = [atom.clone()].into();
    Ok(module
        .rules()
        .iter()
        .filter(|r| r.head().contains(atom))
        .map(|r| support_term(r, &single))
        .collect())
}

pub fn ext_supporting_formulas(module: &DlpFunction, lp: &AtomSet) -> Result<BTreeSet<Term>> {
    let scc = strongly_connected_components(module);
    let is_loop = lp
        .first()
        .and_then(|a| scc.component_of(a))
        .is_some_and(|c| lp.is_subset(&scc.components[c]));
    if !is_loop {
        return Err(Error::NotALoop { atoms: lp.clone() });
    }
    Ok(ext_support(module, lp))
}

fn ext_support(module: &DlpFunction, lp: &AtomSet) -> BTreeSet<Term> {
    module
        .rules()
        .iter()
        .filter(|r| !r.head().is_disjoint(lp) && r.pos().is_disjoint(lp))
        .map(|r| support_term(r, lp))
        .collect()
}

/// `Comp(Π)`: one implication per rule plus one support implication per
/// output or hidden atom.
pub fn completion(module: &DlpFunction) -> BTreeSet<PropFormula> {
    let mut out = BTreeSet::new();
    for rule in module.rules() {
        out.insert(PropFormula {
            antecedent: positive(rule.pos()).chain(negative(rule.neg())).collect(),
            consequent: rule
                .head()
                .iter()
                .map(|a| [Literal::Pos(a.clone())].into())
                .collect(),
        });
    }
    for atom in module.defined() {
        let support = supporting_formulas(module, &atom).expect("atom is defined here");
        out.insert(PropFormula {
            antecedent: [Literal::Pos(atom)].into(),
            consequent: support,
        });
    }
    out
}

pub fn loop_formulas(module: &DlpFunction, cap: usize) -> Result<BTreeSet<PropFormula>> {
    Ok(enumerate_loops(module, cap)?
        .into_iter()
        .map(|lp| PropFormula {
            consequent: ext_support(module, &lp),
            antecedent: positive(&lp).collect(),
        })
        .collect())
}

struct MaskFormula {
    pos: u64,
    neg: u64,
    terms: Vec<(u64, u64)>,
}

impl MaskFormula {
    fn compile(c: &Compiled, f: &PropFormula) -> Self {
        let split = |t: &Term| {
            t.iter().fold((0u64, 0u64), |(p, n), l| match l {
                Literal::Pos(a) => (p | c.bit(a), n),
                Literal::Neg(a) => (p, n | c.bit(a)),
            })
        };
        let (pos, neg) = split(&f.antecedent);
        MaskFormula {
            pos,
            neg,
            terms: f.consequent.iter().map(split).collect(),
        }
    }

    #[inline]
    fn holds(&self, m: u64) -> bool {
        self.pos & !m != 0
            || self.neg & m != 0
            || self.terms.iter().any(|&(p, n)| p & !m == 0 && n & m == 0)
    }
}

pub fn stable_models_via_completion(module: &DlpFunction) -> Result<ModelSet> {
    stable_models_via_completion_with(module, &Limits::default())
}

/// Models of `Comp(Π) ∪ LF(Π)`. Loop formulas are skipped for tight modules.
pub fn stable_models_via_completion_with(
    module: &DlpFunction,
    limits: &Limits,
) -> Result<ModelSet> {
    let c = Compiled::new(module, limits.enumeration)?;
    let comp: Vec<MaskFormula> = completion(module)
        .iter()
        .map(|f| MaskFormula::compile(&c, f))
        .collect();
    let lf: Vec<MaskFormula> = if is_tight(module) {
        Vec::new()
    } else {
        loop_formulas(module, limits.loops)?
            .iter()
            .map(|f| MaskFormula::compile(&c, f))
            .collect()
    };
    Ok(c.subsets()
        .filter(|&m| comp.iter().all(|f| f.holds(m)) && lf.iter().all(|f| f.holds(m)))
        .map(|m| c.set(m))
        .collect())
}
