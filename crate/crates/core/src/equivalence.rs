//! Modular equivalence: a direct comparison of stable models, the check for
//! enough visible atoms, and the translation-based verifier that looks for
//! a counterexample as a stable model of a single module.

use crate::algebra::join;
use crate::error::{Error, Result};
use crate::model::{Atom, AtomSet, DlpFunction, Interpretation, Rule, RuleSet};
use crate::semantics::{instantiate, search_stable_models, stable_models_with, Limits};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Fresh names for the copies of atoms used by the translation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RenameScheme;

impl RenameScheme {
    pub const STAR: &'static str = "@s_";
    pub const BULLET: &'static str = "@b_";
    pub const CIRCLE: &'static str = "@c_";
    pub const UNSAT: &'static str = "@unsat";
    pub const UNSAT_BULLET: &'static str = "@unsat_b";
    pub const DIFF: &'static str = "@diff";
    pub const OK: &'static str = "@ok";

    /// Checks that no atom of the given modules is already one of the
    /// images, which also rules out renaming twice.
    pub fn for_modules<'a>(modules: impl IntoIterator<Item = &'a DlpFunction>) -> Result<Self> {
        let specials = [Self::UNSAT, Self::UNSAT_BULLET, Self::DIFF, Self::OK];
        for module in modules {
            for atom in module.signature() {
                let name = atom.name();
                if specials.contains(&name)
                    || [Self::STAR, Self::BULLET, Self::CIRCLE]
                        .iter()
                        .any(|p| name.starts_with(p))
                {
                    return Err(Error::NameClash { atom });
                }
            }
        }
        Ok(RenameScheme)
    }

    pub fn star(&self, atom: &Atom) -> Atom {
        Atom::new(format!("{}{}", Self::STAR, atom.name()))
    }

    pub fn bullet(&self, atom: &Atom) -> Atom {
        Atom::new(format!("{}{}", Self::BULLET, atom.name()))
    }

    pub fn circle(&self, atom: &Atom) -> Atom {
        Atom::new(format!("{}{}", Self::CIRCLE, atom.name()))
    }

    pub fn unsat(&self) -> Atom {
        Atom::new(Self::UNSAT)
    }

    pub fn unsat_bullet(&self) -> Atom {
        Atom::new(Self::UNSAT_BULLET)
    }

    pub fn diff(&self) -> Atom {
        Atom::new(Self::DIFF)
    }

    pub fn ok(&self) -> Atom {
        Atom::new(Self::OK)
    }
}

fn mapped<'a>(set: impl IntoIterator<Item = &'a Atom>, f: impl Fn(&Atom) -> Atom) -> AtomSet {
    set.into_iter().map(f).collect()
}

fn within(set: &AtomSet, part: &AtomSet) -> AtomSet {
    set.intersection(part).cloned().collect()
}

/// `⟨Def_R(H), I ∪ O, H, ∅⟩`.
pub fn hidden_part(module: &DlpFunction) -> DlpFunction {
    let rules = crate::model::defining_rules_of(module.rules(), module.hidden());
    DlpFunction::new(rules, module.visible(), module.hidden().clone(), AtomSet::new())
        .expect("the hidden part is a module")
}

/// Whether the module has enough visible atoms, i.e. its hidden part has a
/// unique stable model for every visible input.
pub fn has_eva(module: &DlpFunction) -> Result<bool> {
    Ok(eva_counterexample(module, &Limits::default())?.is_none())
}

/// The first visible interpretation (in canonical order) for which the
/// hidden part does not have exactly one stable model.
pub fn eva_counterexample(module: &DlpFunction, limits: &Limits) -> Result<Option<AtomSet>> {
    let visible: Vec<Atom> = module.visible().into_iter().collect();
    if visible.len() > limits.eva {
        return Err(Error::SignatureTooLarge {
            size: visible.len(),
            cap: limits.eva,
        });
    }
    if module.hidden().is_empty() {
        return Ok(None);
    }
    let hidden = hidden_part(module);
    let mut found = None;
    let mut failure = None;
    lex_subsets(&visible, &mut AtomSet::new(), 0, &mut |mv| {
        let outcome = instantiate(&hidden, mv).and_then(|p| search_stable_models(&p, Some(2)));
        match outcome {
            Ok(models) if models.len() == 1 => true,
            Ok(_) => {
                found = Some(mv.clone());
                false
            }
            Err(e) => {
                failure = Some(e);
                false
            }
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(found),
    }
}

/// Visits the subsets of `atoms[start..]` added to `current` in canonical
/// order, stopping when `visit` returns `false`.
fn lex_subsets(
    atoms: &[Atom],
    current: &mut AtomSet,
    start: usize,
    visit: &mut impl FnMut(&AtomSet) -> bool,
) -> bool {
    if !visit(current) {
        return false;
    }
    for i in start..atoms.len() {
        current.insert(atoms[i].clone());
        let go_on = lex_subsets(atoms, current, i + 1, visit);
        current.remove(&atoms[i]);
        if !go_on {
            return false;
        }
    }
    true
}

/// `hidden(Π)`: the hidden part over starred copies of the hidden atoms,
/// with visible head atoms moved to the negative body.
pub fn build_hidden(module: &DlpFunction, rs: &RenameScheme) -> DlpFunction {
    let (visible, hidden) = (module.visible(), module.hidden());
    let star = |s: &AtomSet| mapped(s.intersection(hidden), |a| rs.star(a));
    let mut rules = RuleSet::new();
    for rule in module.rules() {
        if rule.head().is_disjoint(hidden) {
            continue;
        }
        let mut pos = within(rule.pos(), &visible);
        pos.extend(star(rule.pos()));
        let mut neg = within(rule.head(), &visible);
        neg.extend(within(rule.neg(), &visible));
        neg.extend(star(rule.neg()));
        rules.insert(Rule::new(star(rule.head()), pos, neg));
    }
    DlpFunction::new(rules, visible, mapped(hidden, |a| rs.star(a)), AtomSet::new())
        .expect("hidden(Π) is a module")
}

/// `TR(Π)`: has a stable model for input `L` exactly when `L` (with hidden
/// atoms starred) is not a stable model of `Π`.
pub fn build_tr(module: &DlpFunction, rs: &RenameScheme) -> DlpFunction {
    let (input, output, hidden) = (module.input(), module.output(), module.hidden());
    let visible = module.visible();
    let star = |s: &AtomSet| mapped(s.intersection(hidden), |a| rs.star(a));
    let bullet = |s: &AtomSet| {
        mapped(
            s.iter().filter(|a| output.contains(*a) || hidden.contains(*a)),
            |a| rs.bullet(a),
        )
    };
    let (unsat, unsat_b, diff, ok) = (rs.unsat(), rs.unsat_bullet(), rs.diff(), rs.ok());
    let one = |a: &Atom| AtomSet::from([a.clone()]);
    let mut rules = RuleSet::new();

    for rule in module.rules() {
        let mut pos = within(rule.pos(), &visible);
        pos.extend(star(rule.pos()));
        let mut neg = within(rule.head(), &visible);
        neg.extend(star(rule.head()));
        neg.extend(within(rule.neg(), &visible));
        neg.extend(star(rule.neg()));
        rules.insert(Rule::new(one(&unsat), pos, neg));

        let mut pos = within(rule.pos(), input);
        pos.extend(bullet(rule.pos()));
        let mut neg = within(rule.head(), input);
        neg.extend(bullet(rule.head()));
        neg.extend(within(rule.neg(), &visible));
        neg.extend(star(rule.neg()));
        neg.insert(unsat.clone());
        rules.insert(Rule::new(one(&unsat_b), pos, neg));
    }

    let copies = output
        .iter()
        .map(|a| (a, a.clone()))
        .chain(hidden.iter().map(|a| (a, rs.star(a))));
    for (a, source) in copies {
        let (b, c) = (rs.bullet(a), rs.circle(a));
        rules.insert(Rule::new(
            one(&b),
            one(&source),
            [c.clone(), unsat.clone()].into(),
        ));
        rules.insert(Rule::new(
            one(&c),
            one(&source),
            [b.clone(), unsat.clone()].into(),
        ));
        rules.insert(Rule::new(one(&diff), one(&source), [b, unsat.clone()].into()));
    }

    rules.insert(Rule::new(one(&ok), one(&unsat), AtomSet::new()));
    rules.insert(Rule::new(
        one(&ok),
        one(&diff),
        [unsat.clone(), unsat_b.clone()].into(),
    ));
    rules.insert(Rule::new(AtomSet::new(), AtomSet::new(), one(&ok)));

    let mut tr_input = visible;
    tr_input.extend(mapped(hidden, |a| rs.star(a)));
    let mut tr_output = mapped(output.iter().chain(hidden), |a| rs.bullet(a));
    tr_output.extend([unsat, unsat_b, diff, ok]);
    let tr_hidden = mapped(output.iter().chain(hidden), |a| rs.circle(a));
    DlpFunction::new(rules, tr_input, tr_output, tr_hidden).expect("TR(Π) is a module")
}

fn check_compatible(p1: &DlpFunction, p2: &DlpFunction) -> Result<()> {
    use crate::model::show_set;
    if p1.input() != p2.input() {
        return Err(Error::Incompatible {
            detail: format!(
                "input {} vs {}",
                show_set(p1.input()),
                show_set(p2.input())
            ),
        });
    }
    if p1.output() != p2.output() {
        return Err(Error::Incompatible {
            detail: format!(
                "output {} vs {}",
                show_set(p1.output()),
                show_set(p2.output())
            ),
        });
    }
    Ok(())
}

fn require_eva(module: &DlpFunction, limits: &Limits) -> Result<()> {
    match eva_counterexample(module, limits)? {
        Some(counterexample) => Err(Error::NoEva { counterexample }),
        None => Ok(()),
    }
}

/// `EQT(Π1, Π2) = Π1 ⊔ hidden(Π2) ⊔ TR(Π2)`: its stable models are the
/// stable models of `Π1` with no counterpart in `Π2`.
pub fn eqt(p1: &DlpFunction, p2: &DlpFunction) -> Result<DlpFunction> {
    eqt_with(p1, p2, &Limits::default())
}

pub fn eqt_with(p1: &DlpFunction, p2: &DlpFunction, limits: &Limits) -> Result<DlpFunction> {
    check_compatible(p1, p2)?;
    let rs = RenameScheme::for_modules([p1, p2])?;
    require_eva(p1, limits)?;
    require_eva(p2, limits)?;
    join(&join(p1, &build_hidden(p2, &rs))?, &build_tr(p2, &rs))
}

/// A stable model of `EQT(Π1, Π2)`, joined with `context` when given.
///
/// The models are computed link by link along the join: each stable model
/// `M` of `Π1` (or `Π1 ⊔ context`) fixes the input of `hidden(Π2)`, whose
/// unique stable model `N` in turn fixes the input of `TR(Π2)`. By the
/// module theorem the stable models of the whole join are exactly the
/// unions `M ∪ N ∪ T` found this way.
pub fn eqt_witness(
    p1: &DlpFunction,
    p2: &DlpFunction,
    context: Option<&DlpFunction>,
    limits: &Limits,
) -> Result<Option<Interpretation>> {
    let whole = eqt_with(p1, p2, limits)?;
    let rs = RenameScheme::for_modules([p1, p2].into_iter().chain(context))?;
    let base = match context {
        Some(ctx) => {
            join(&whole, ctx)?;
            join(p1, ctx)?
        }
        None => p1.clone(),
    };
    let hidden = build_hidden(p2, &rs);
    let tr = build_tr(p2, &rs);
    let visible = p2.visible();
    for m in &search_stable_models(&base, None)? {
        let mv = within(m, &visible);
        let ns = search_stable_models(&instantiate(&hidden, &mv)?, Some(2))?;
        if ns.len() != 1 {
            return Err(Error::NoEva { counterexample: mv });
        }
        let mut k = mv;
        k.extend(ns.first().cloned().unwrap_or_default());
        let rest = k.difference(&visible).cloned().collect::<AtomSet>();
        if let Some(t) = search_stable_models(&instantiate(&tr, &k)?, Some(1))?.first() {
            let mut model = m.clone();
            model.extend(rest);
            model.extend(t.iter().cloned());
            return Ok(Some(model));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Method {
    /// Compare the visible projections of both stable-model sets.
    #[default]
    Direct,
    /// Look for stable models of the two `EQT` translations.
    Translate,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Direct => "direct",
            Method::Translate => "translate",
        })
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "direct" => Ok(Method::Direct),
            "translate" => Ok(Method::Translate),
            _ => Err(format!("unknown method `{s}` (expected direct or translate)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    First,
    Second,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub equivalent: bool,
    /// On failure, a stable model of one side whose visible part is not
    /// matched by the other side.
    pub witness: Option<(Side, Interpretation)>,
}

impl Verdict {
    fn holds() -> Self {
        Verdict {
            equivalent: true,
            witness: None,
        }
    }

    fn fails(side: Side, model: Interpretation) -> Self {
        Verdict {
            equivalent: false,
            witness: Some((side, model)),
        }
    }
}

pub fn modularly_equivalent(p1: &DlpFunction, p2: &DlpFunction, method: Method) -> Result<Verdict> {
    modularly_equivalent_with(p1, p2, method, &Limits::default())
}

pub fn modularly_equivalent_with(
    p1: &DlpFunction,
    p2: &DlpFunction,
    method: Method,
    limits: &Limits,
) -> Result<Verdict> {
    check_compatible(p1, p2)?;
    match method {
        Method::Direct => direct(p1, p2, limits),
        Method::Translate => translate(p1, p2, None, limits),
    }
}

/// Equivalence of `Π1 ⊔ Π` and `Π2 ⊔ Π` checked through the translation,
/// which needs enough visible atoms for `Π1` and `Π2` but not for `Π`.
pub fn equivalent_in_context(
    p1: &DlpFunction,
    p2: &DlpFunction,
    context: &DlpFunction,
) -> Result<Verdict> {
    equivalent_in_context_with(p1, p2, context, &Limits::default())
}

pub fn equivalent_in_context_with(
    p1: &DlpFunction,
    p2: &DlpFunction,
    context: &DlpFunction,
    limits: &Limits,
) -> Result<Verdict> {
    check_compatible(p1, p2)?;
    translate(p1, p2, Some(context), limits)
}

fn direct(p1: &DlpFunction, p2: &DlpFunction, limits: &Limits) -> Result<Verdict> {
    let visible = p1.visible();
    let sm1 = stable_models_with(p1, limits)?;
    let sm2 = stable_models_with(p2, limits)?;
    let count = |sms: &crate::model::ModelSet| {
        let mut counts: BTreeMap<AtomSet, usize> = BTreeMap::new();
        for m in sms {
            *counts.entry(within(m, &visible)).or_default() += 1;
        }
        counts
    };
    let (c1, c2) = (count(&sm1), count(&sm2));
    let surplus = |sms: &crate::model::ModelSet, mine: &BTreeMap<AtomSet, usize>, theirs: &BTreeMap<AtomSet, usize>| {
        sms.iter()
            .find(|m| {
                let v = within(m, &visible);
                mine[&v] > theirs.get(&v).copied().unwrap_or(0)
            })
            .cloned()
    };
    if let Some(m) = surplus(&sm1, &c1, &c2) {
        return Ok(Verdict::fails(Side::First, m));
    }
    if let Some(m) = surplus(&sm2, &c2, &c1) {
        return Ok(Verdict::fails(Side::Second, m));
    }
    Ok(Verdict::holds())
}

fn translate(
    p1: &DlpFunction,
    p2: &DlpFunction,
    context: Option<&DlpFunction>,
    limits: &Limits,
) -> Result<Verdict> {
    let own = |p: &DlpFunction| match context {
        Some(ctx) => {
            let mut s = p.signature();
            s.extend(ctx.signature());
            s
        }
        None => p.signature(),
    };
    if let Some(m) = eqt_witness(p1, p2, context, limits)? {
        return Ok(Verdict::fails(Side::First, within(&m, &own(p1))));
    }
    if let Some(m) = eqt_witness(p2, p1, context, limits)? {
        return Ok(Verdict::fails(Side::Second, within(&m, &own(p2))));
    }
    Ok(Verdict::holds())
}
