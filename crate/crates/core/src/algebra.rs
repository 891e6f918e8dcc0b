//! Composition and join of modules, the natural join of model sets,
//! reveal/hide, and splitting sets.

use crate::bits::Compiled;
use crate::completion::strongly_connected_components;
use crate::error::{Error, Result};
use crate::model::{
    defining_rules_of, project_unchecked, show_set, AtomSet, DlpFunction, Interpretation,
    ModelSet, Part, RuleSet,
};
use crate::semantics::{instantiate, is_stable, Limits};
use std::collections::HashMap;
use std::fmt;

/// A violated interface condition with its witnesses.
///
/// Conditions: 1 and 2 forbid using the other module's hidden atoms,
/// 3 forbids shared outputs, 4 and 5 forbid the other module defining one's
/// outputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub condition: u8,
    pub atoms: AtomSet,
    pub rules: RuleSet,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "condition {} on {}", self.condition, show_set(&self.atoms))?;
        if !self.rules.is_empty() {
            let rules: Vec<String> = self.rules.iter().map(|r| format!("`{r}`")).collect();
            write!(f, " via {}", rules.join(", "))?;
        }
        Ok(())
    }
}

/// Checks the five interface conditions; the list is empty exactly when the
/// modules respect each other's interfaces.
pub fn respects_interfaces(p1: &DlpFunction, p2: &DlpFunction) -> (bool, Vec<Diagnostic>) {
    let mut out = Vec::new();
    let mut hidden_clash = |condition, visible: AtomSet, hidden: &AtomSet| {
        let atoms: AtomSet = visible.intersection(hidden).cloned().collect();
        if !atoms.is_empty() {
            out.push(Diagnostic {
                condition,
                atoms,
                rules: RuleSet::new(),
            });
        }
    };
    hidden_clash(1, p1.signature(), p2.hidden());
    hidden_clash(2, p2.signature(), p1.hidden());

    let shared: AtomSet = p1.output().intersection(p2.output()).cloned().collect();
    if !shared.is_empty() {
        out.push(Diagnostic {
            condition: 3,
            atoms: shared,
            rules: RuleSet::new(),
        });
    }

    for (condition, own, other) in [(4, p1, p2), (5, p2, p1)] {
        let foreign: RuleSet = defining_rules_of(other.rules(), own.output())
            .difference(own.rules())
            .cloned()
            .collect();
        if !foreign.is_empty() {
            let atoms = foreign
                .iter()
                .flat_map(|r| r.head().intersection(own.output()).cloned())
                .collect();
            out.push(Diagnostic {
                condition,
                atoms,
                rules: foreign,
            });
        }
    }
    (out.is_empty(), out)
}

/// `Π1 ⊕ Π2`.
pub fn compose(p1: &DlpFunction, p2: &DlpFunction) -> Result<DlpFunction> {
    let (ok, diagnostics) = respects_interfaces(p1, p2);
    if !ok {
        return Err(Error::InterfaceViolation { diagnostics });
    }
    let rules = p1.rules().union(p2.rules()).cloned().collect();
    let input = p1
        .input()
        .difference(p2.output())
        .chain(p2.input().difference(p1.output()))
        .cloned()
        .collect();
    let output = p1.output().union(p2.output()).cloned().collect();
    let hidden = p1.hidden().union(p2.hidden()).cloned().collect();
    DlpFunction::new(rules, input, output, hidden)
}

/// Returns an SCC of the composition that meets both output signatures, if
/// there is one.
pub fn mutually_dependent(p1: &DlpFunction, p2: &DlpFunction) -> Result<Option<AtomSet>> {
    let composed = compose(p1, p2)?;
    Ok(dependence_witness(&composed, p1, p2))
}

fn dependence_witness(composed: &DlpFunction, p1: &DlpFunction, p2: &DlpFunction) -> Option<AtomSet> {
    strongly_connected_components(composed)
        .components
        .into_iter()
        .find(|s| !s.is_disjoint(p1.output()) && !s.is_disjoint(p2.output()))
}

/// `Π1 ⊔ Π2`: the composition of two mutually independent modules.
pub fn join(p1: &DlpFunction, p2: &DlpFunction) -> Result<DlpFunction> {
    let composed = compose(p1, p2)?;
    match dependence_witness(&composed, p1, p2) {
        Some(component) => Err(Error::MutualDependence { component }),
        None => Ok(composed),
    }
}

/// Left fold of [`join`], starting from the empty module.
pub fn join_all<'a>(modules: impl IntoIterator<Item = &'a DlpFunction>) -> Result<DlpFunction> {
    modules
        .into_iter()
        .try_fold(DlpFunction::empty(), |acc, m| join(&acc, m))
}

/// `M1 ∩ At_v(Π2) = M2 ∩ At_v(Π1)`.
pub fn compatible(
    m1: &Interpretation,
    p1: &DlpFunction,
    m2: &Interpretation,
    p2: &DlpFunction,
) -> Result<bool> {
    p1.check_interpretation(m1)?;
    p2.check_interpretation(m2)?;
    Ok(project_unchecked(m1, Part::Visible, p2) == project_unchecked(m2, Part::Visible, p1))
}

/// `A1 ⋈ A2`, defined only when `Π1 ⊔ Π2` is.
pub fn natural_join(
    a1: &ModelSet,
    p1: &DlpFunction,
    a2: &ModelSet,
    p2: &DlpFunction,
) -> Result<ModelSet> {
    join(p1, p2)?;
    Ok(natural_join_raw(a1, p1, a2, p2))
}

/// The natural join without checking that the modules can be joined. Only
/// meaningful as a negative control.
pub fn natural_join_raw(
    a1: &ModelSet,
    p1: &DlpFunction,
    a2: &ModelSet,
    p2: &DlpFunction,
) -> ModelSet {
    let mut buckets: HashMap<AtomSet, Vec<&Interpretation>> = HashMap::new();
    for m2 in a2 {
        buckets
            .entry(project_unchecked(m2, Part::Visible, p1))
            .or_default()
            .push(m2);
    }
    let mut out = ModelSet::new();
    for m1 in a1 {
        if let Some(partners) = buckets.get(&project_unchecked(m1, Part::Visible, p2)) {
            for m2 in partners {
                out.insert(m1.union(m2).cloned().collect());
            }
        }
    }
    out
}

/// Left fold of [`natural_join`] over `(model set, module)` pairs.
pub fn natural_join_all<'a>(
    parts: impl IntoIterator<Item = (&'a ModelSet, &'a DlpFunction)>,
) -> Result<ModelSet> {
    let mut acc_module = DlpFunction::empty();
    let mut acc_models: ModelSet = [AtomSet::new()].into_iter().collect();
    for (models, module) in parts {
        acc_models = natural_join(&acc_models, &acc_module, models, module)?;
        acc_module = join(&acc_module, module)?;
    }
    Ok(acc_models)
}

/// Moves hidden atoms to the output signature.
pub fn reveal(module: &DlpFunction, atoms: &AtomSet) -> Result<DlpFunction> {
    let stray: AtomSet = atoms.difference(module.hidden()).cloned().collect();
    if !stray.is_empty() {
        return Err(Error::NotHidden { atoms: stray });
    }
    DlpFunction::new(
        module.rules().clone(),
        module.input().clone(),
        module.output().union(atoms).cloned().collect(),
        module.hidden().difference(atoms).cloned().collect(),
    )
}

/// Moves output atoms to the hidden signature.
pub fn hide(module: &DlpFunction, atoms: &AtomSet) -> Result<DlpFunction> {
    let stray: AtomSet = atoms.difference(module.output()).cloned().collect();
    if !stray.is_empty() {
        return Err(Error::NotOutput { atoms: stray });
    }
    DlpFunction::new(
        module.rules().clone(),
        module.input().clone(),
        module.output().difference(atoms).cloned().collect(),
        module.hidden().union(atoms).cloned().collect(),
    )
}

fn require_ordinary(module: &DlpFunction) -> Result<()> {
    if module.input().is_empty() && module.hidden().is_empty() {
        Ok(())
    } else {
        Err(Error::NotOrdinary)
    }
}

pub fn is_splitting_set(module: &DlpFunction, set: &AtomSet) -> bool {
    set.is_subset(module.output())
        && module
            .rules()
            .iter()
            .all(|r| r.head().is_disjoint(set) || r.atoms().is_subset(set))
}

pub fn splitting_sets(module: &DlpFunction) -> Result<Vec<AtomSet>> {
    splitting_sets_with(module, &Limits::default())
}

/// All splitting sets of an ordinary module, in canonical set order.
pub fn splitting_sets_with(module: &DlpFunction, limits: &Limits) -> Result<Vec<AtomSet>> {
    require_ordinary(module)?;
    let c = Compiled::new(module, limits.enumeration)?;
    let rules: Vec<(u64, u64)> = module
        .rules()
        .iter()
        .map(|r| (c.mask(r.head()), c.mask(&r.atoms())))
        .collect();
    let sets: ModelSet = c
        .subsets()
        .filter(|&u| rules.iter().all(|&(h, all)| h & u == 0 || all & !u == 0))
        .map(|u| c.set(u))
        .collect();
    Ok(sets.into_iter().collect())
}

/// Splits an ordinary module into `⟨b_U(R), ∅, U, ∅⟩` and
/// `⟨t_U(R), U, O \ U, ∅⟩`.
pub fn split(module: &DlpFunction, set: &AtomSet) -> Result<(DlpFunction, DlpFunction)> {
    require_ordinary(module)?;
    if !is_splitting_set(module, set) {
        return Err(Error::NotASplittingSet { set: set.clone() });
    }
    let (bottom, top): (RuleSet, RuleSet) = module
        .rules()
        .iter()
        .cloned()
        .partition(|r| r.atoms().is_subset(set));
    let pb = DlpFunction::new(bottom, AtomSet::new(), set.clone(), AtomSet::new())?;
    let pt = DlpFunction::new(
        top,
        set.clone(),
        module.output().difference(set).cloned().collect(),
        AtomSet::new(),
    )?;
    Ok((pb, pt))
}

/// Whether `⟨x, y⟩` is a solution with respect to `U`: `x` is stable for
/// the bottom and `y` is stable for the top partially evaluated on `x`.
pub fn is_solution(module: &DlpFunction, set: &AtomSet, x: &AtomSet, y: &AtomSet) -> Result<bool> {
    let (pb, pt) = split(module, set)?;
    if !x.is_subset(set) || !y.is_subset(pt.output()) {
        return Ok(false);
    }
    Ok(is_stable(&pb, x)? && is_stable(&instantiate(&pt, x)?, y)?)
}

/// The three conditions that characterise `M ∈ SM(Π)` through a splitting
/// set: stability in `Π`, stability of the two halves, and being a
/// solution. They must all agree.
pub fn splitting_conditions(module: &DlpFunction, set: &AtomSet, m: &AtomSet) -> Result<[bool; 3]> {
    let (pb, pt) = split(module, set)?;
    let bottom_part: AtomSet = m.intersection(set).cloned().collect();
    let top_part: AtomSet = m.difference(set).cloned().collect();
    Ok([
        is_stable(module, m)?,
        is_stable(&pb, &bottom_part)? && is_stable(&pt, m)?,
        is_solution(module, set, &bottom_part, &top_part)?,
    ])
}
