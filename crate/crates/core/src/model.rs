//! Program representation: atoms, disjunctive rules, and DLP-functions
//! (rule sets packaged with input, output and hidden signatures).

use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

/// Prefix reserved for atoms generated by transformations.
pub const RESERVED_PREFIX: char = '@';

/// A propositional atom, compared by the raw bytes of its name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(Arc<str>);

impl Atom {
    pub fn new(name: impl AsRef<str>) -> Self {
        Atom(Arc::from(name.as_ref()))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn is_reserved(&self) -> bool {
        self.0.starts_with(RESERVED_PREFIX)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Atom {
    fn from(name: &str) -> Self {
        Atom::new(name)
    }
}

pub type AtomSet = BTreeSet<Atom>;

/// An interpretation is a finite set of atoms taken to be true.
pub type Interpretation = AtomSet;

pub type RuleSet = BTreeSet<Rule>;

/// Builds an atom set from names.
pub fn atom_set<I, S>(names: I) -> AtomSet
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    names.into_iter().map(Atom::new).collect()
}

/// Formats an atom set as `{a, b, c}`.
pub fn show_set(set: &AtomSet) -> String {
    let mut out = String::from("{");
    for (i, a) in set.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(a.name());
    }
    out.push('}');
    out
}

/// A disjunctive rule `A <- B, not C`, with all three parts held as sets.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rule {
    head: AtomSet,
    pos: AtomSet,
    neg: AtomSet,
}

impl Rule {
    pub fn new(head: AtomSet, pos: AtomSet, neg: AtomSet) -> Self {
        Rule { head, pos, neg }
    }

    pub fn head(&self) -> &AtomSet {
        &self.head
    }

    pub fn pos(&self) -> &AtomSet {
        &self.pos
    }

    pub fn neg(&self) -> &AtomSet {
        &self.neg
    }

    pub fn is_constraint(&self) -> bool {
        self.head.is_empty()
    }

    pub fn is_positive(&self) -> bool {
        self.neg.is_empty()
    }

    /// All atoms occurring anywhere in the rule.
    pub fn atoms(&self) -> AtomSet {
        self.head
            .iter()
            .chain(&self.pos)
            .chain(&self.neg)
            .cloned()
            .collect()
    }

    pub(crate) fn map_atoms(&self, f: impl Fn(&Atom) -> Atom) -> Rule {
        Rule {
            head: self.head.iter().map(&f).collect(),
            pos: self.pos.iter().map(&f).collect(),
            neg: self.neg.iter().map(&f).collect(),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head: Vec<&str> = self.head.iter().map(Atom::name).collect();
        f.write_str(&head.join(" | "))?;
        if self.pos.is_empty() && self.neg.is_empty() {
            if self.head.is_empty() {
                f.write_str(":-")?;
            }
            return Ok(());
        }
        if !self.head.is_empty() {
            f.write_str(" ")?;
        }
        f.write_str(":- ")?;
        let body: Vec<String> = self
            .pos
            .iter()
            .map(|a| a.name().to_string())
            .chain(self.neg.iter().map(|a| format!("not {a}")))
            .collect();
        f.write_str(&body.join(", "))
    }
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

/// Which projection of an interpretation to take.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    Input,
    Output,
    Visible,
    Hidden,
}

/// A DLP-function: a rule set with pairwise disjoint input, output and
/// hidden signatures, such that every rule only mentions declared atoms and
/// every non-empty head meets the output or hidden atoms.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct DlpFunction {
    rules: RuleSet,
    input: AtomSet,
    output: AtomSet,
    hidden: AtomSet,
}

impl fmt::Debug for DlpFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DlpFunction")
            .field("rules", &self.rules)
            .field("input", &self.input)
            .field("output", &self.output)
            .field("hidden", &self.hidden)
            .finish()
    }
}

impl DlpFunction {
    /// Structural validation only; atoms in the reserved namespace are
    /// accepted so that generated modules can be built and combined.
    /// Use [`validate_module`] for user-supplied quadruples.
    pub fn new(rules: RuleSet, input: AtomSet, output: AtomSet, hidden: AtomSet) -> Result<Self> {
        let mut overlap: AtomSet = input.intersection(&output).cloned().collect();
        overlap.extend(input.intersection(&hidden).cloned());
        overlap.extend(output.intersection(&hidden).cloned());
        if !overlap.is_empty() {
            return Err(Error::OverlappingSignature { atoms: overlap });
        }
        for rule in &rules {
            for atom in rule.head.iter().chain(&rule.pos).chain(&rule.neg) {
                if !input.contains(atom) && !output.contains(atom) && !hidden.contains(atom) {
                    return Err(Error::ForeignAtom {
                        atom: atom.clone(),
                        rule: rule.to_string(),
                    });
                }
            }
            if !rule.head.is_empty() && rule.head.iter().all(|a| input.contains(a)) {
                return Err(Error::InputOnlyHead {
                    rule: rule.to_string(),
                });
            }
        }
        Ok(DlpFunction {
            rules,
            input,
            output,
            hidden,
        })
    }

    /// The empty DLP-function.
    pub fn empty() -> Self {
        DlpFunction::default()
    }

    pub fn rules(&self) -> &RuleSet {
        &self.rules
    }

    pub fn input(&self) -> &AtomSet {
        &self.input
    }

    pub fn output(&self) -> &AtomSet {
        &self.output
    }

    pub fn hidden(&self) -> &AtomSet {
        &self.hidden
    }

    /// `At(Π) = I ∪ O ∪ H`.
    pub fn signature(&self) -> AtomSet {
        self.input
            .iter()
            .chain(&self.output)
            .chain(&self.hidden)
            .cloned()
            .collect()
    }

    /// `I ∪ O`.
    pub fn visible(&self) -> AtomSet {
        self.input.union(&self.output).cloned().collect()
    }

    /// `O ∪ H`, the atoms defined by the module.
    pub fn defined(&self) -> AtomSet {
        self.output.union(&self.hidden).cloned().collect()
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.input.contains(atom) || self.output.contains(atom) || self.hidden.contains(atom)
    }

    pub fn is_positive(&self) -> bool {
        self.rules.iter().all(Rule::is_positive)
    }

    /// Atoms effectively appearing in the rules.
    pub fn rule_atoms(&self) -> AtomSet {
        rule_atoms(&self.rules)
    }

    /// Checks `M ⊆ At(Π)`.
    pub fn check_interpretation(&self, m: &AtomSet) -> Result<()> {
        let outside: AtomSet = m.iter().filter(|a| !self.contains(a)).cloned().collect();
        if outside.is_empty() {
            Ok(())
        } else {
            Err(Error::OutOfSignature { atoms: outside })
        }
    }

    /// Re-runs validation, returning an equal value for a valid module.
    pub fn validate(self) -> Result<Self> {
        DlpFunction::new(self.rules, self.input, self.output, self.hidden)
    }

    pub fn into_parts(self) -> (RuleSet, AtomSet, AtomSet, AtomSet) {
        (self.rules, self.input, self.output, self.hidden)
    }
}

/// Validates a user-supplied quadruple, additionally rejecting atoms in the
/// reserved `@` namespace.
pub fn validate_module(
    rules: RuleSet,
    input: AtomSet,
    output: AtomSet,
    hidden: AtomSet,
) -> Result<DlpFunction> {
    let module = DlpFunction::new(rules, input, output, hidden)?;
    if let Some(atom) = module.signature().into_iter().find(Atom::is_reserved) {
        return Err(Error::ReservedAtom { atom });
    }
    Ok(module)
}

pub fn rule_atoms(rules: &RuleSet) -> AtomSet {
    rules.iter().flat_map(Rule::atoms).collect()
}

/// `Def_R(S)`: rules whose head meets `S`.
pub fn defining_rules(module: &DlpFunction, set: &AtomSet) -> RuleSet {
    defining_rules_of(module.rules(), set)
}

pub fn defining_rules_of(rules: &RuleSet, set: &AtomSet) -> RuleSet {
    rules
        .iter()
        .filter(|r| r.head.iter().any(|a| set.contains(a)))
        .cloned()
        .collect()
}

/// `IC(R)`: the rules with an empty head.
pub fn integrity_constraints(rules: &RuleSet) -> RuleSet {
    rules.iter().filter(|r| r.is_constraint()).cloned().collect()
}

pub fn project(m: &Interpretation, part: Part, module: &DlpFunction) -> Result<AtomSet> {
    module.check_interpretation(m)?;
    Ok(project_unchecked(m, part, module))
}

pub(crate) fn project_unchecked(m: &Interpretation, part: Part, module: &DlpFunction) -> AtomSet {
    m.iter()
        .filter(|a| match part {
            Part::Input => module.input.contains(*a),
            Part::Output => module.output.contains(*a),
            Part::Visible => module.input.contains(*a) || module.output.contains(*a),
            Part::Hidden => module.hidden.contains(*a),
        })
        .cloned()
        .collect()
}

/// Substitutes atoms according to an injective mapping, in rules and in all
/// three signature sets.
pub fn rename_atoms(module: &DlpFunction, mapping: &BTreeMap<Atom, Atom>) -> Result<DlpFunction> {
    let signature = module.signature();
    let mut images = AtomSet::new();
    for (source, image) in mapping {
        if source == image {
            if !images.insert(image.clone()) {
                return Err(Error::NameClash {
                    atom: image.clone(),
                });
            }
            continue;
        }
        let occupied = signature.contains(image) && !mapping.contains_key(image);
        if occupied || !images.insert(image.clone()) {
            return Err(Error::NameClash {
                atom: image.clone(),
            });
        }
    }
    let rename = |a: &Atom| mapping.get(a).cloned().unwrap_or_else(|| a.clone());
    let rename_set = |s: &AtomSet| s.iter().map(rename).collect::<AtomSet>();
    DlpFunction::new(
        module.rules.iter().map(|r| r.map_atoms(rename)).collect(),
        rename_set(&module.input),
        rename_set(&module.output),
        rename_set(&module.hidden),
    )
}

/// A set of interpretations kept in canonical order: lexicographic over the
/// sorted atom names of each interpretation.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ModelSet(BTreeSet<Interpretation>);

impl ModelSet {
    pub fn new() -> Self {
        ModelSet(BTreeSet::new())
    }

    pub fn insert(&mut self, model: Interpretation) -> bool {
        self.0.insert(model)
    }

    pub fn contains(&self, model: &Interpretation) -> bool {
        self.0.contains(model)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Interpretation> {
        self.0.iter()
    }

    pub fn first(&self) -> Option<&Interpretation> {
        self.0.first()
    }

    /// Projects every model onto `atoms`, collapsing duplicates.
    pub fn restrict(&self, atoms: &AtomSet) -> ModelSet {
        self.0
            .iter()
            .map(|m| m.intersection(atoms).cloned().collect())
            .collect()
    }
}

impl FromIterator<Interpretation> for ModelSet {
    fn from_iter<T: IntoIterator<Item = Interpretation>>(iter: T) -> Self {
        ModelSet(iter.into_iter().collect())
    }
}

impl IntoIterator for ModelSet {
    type Item = Interpretation;
    type IntoIter = std::collections::btree_set::IntoIter<Interpretation>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a ModelSet {
    type Item = &'a Interpretation;
    type IntoIter = std::collections::btree_set::Iter<'a, Interpretation>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for ModelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            f.write_str(&show_set(m))?;
        }
        Ok(())
    }
}

/// The module in the `.dlpm` text format.
impl fmt::Display for DlpFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::render_module(self))
    }
}

impl fmt::Debug for ModelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: Vec<String> = self.0.iter().map(show_set).collect();
        write!(f, "{{{}}}", shown.join(", "))
    }
}
