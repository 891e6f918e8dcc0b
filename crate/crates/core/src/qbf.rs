//! Two-level QBFs `∃X ∀Y` over a DNF matrix, their encoding as a pair of
//! modules whose join has a stable model exactly when the formula is valid,
//! and a brute-force evaluator used as an oracle.

use crate::algebra::join;
use crate::error::{Error, Result};
use crate::model::{Atom, AtomSet, DlpFunction, Rule, RuleSet};
use crate::semantics::{stable_models_with, Limits};
use std::fmt;

/// One disjunct `¬A ∧ B ∧ ¬C ∧ D` with `A, B ⊆ X` and `C, D ⊆ Y`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Disjunct {
    pub neg_exists: AtomSet,
    pub pos_exists: AtomSet,
    pub neg_forall: AtomSet,
    pub pos_forall: AtomSet,
}

impl Disjunct {
    fn holds(&self, m: &AtomSet) -> bool {
        self.neg_exists.is_disjoint(m)
            && self.pos_exists.is_subset(m)
            && self.neg_forall.is_disjoint(m)
            && self.pos_forall.is_subset(m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QbfInstance {
    exists: AtomSet,
    forall: AtomSet,
    disjuncts: Vec<Disjunct>,
}

/// Name of the atom that switches on the `i`-th disjunct (1-based).
pub fn act(i: usize) -> Atom {
    Atom::new(format!("act({i})"))
}

/// Hidden atom of the unsatisfiability module.
pub const CONTRADICTION: &str = "u";

impl QbfInstance {
    /// Builds an instance, dropping repeated disjuncts after their first
    /// occurrence. The quantifier blocks must be disjoint, every variable
    /// of a disjunct must belong to the right block, every declared
    /// variable must occur, and no disjunct may hold complementary literals.
    pub fn new(exists: AtomSet, forall: AtomSet, disjuncts: Vec<Disjunct>) -> Result<Self> {
        for v in exists.iter().chain(&forall) {
            if v.name() == CONTRADICTION || v.name().starts_with("act(") {
                return Err(Error::ReservedVariable {
                    variable: v.name().to_owned(),
                });
            }
        }
        if let Some(v) = exists.intersection(&forall).next() {
            return Err(Error::BlockViolation {
                variable: v.name().to_owned(),
                line: 0,
            });
        }
        let mut kept: Vec<Disjunct> = Vec::new();
        for d in disjuncts {
            let misplaced = d
                .neg_exists
                .iter()
                .chain(&d.pos_exists)
                .find(|v| !exists.contains(*v))
                .or_else(|| {
                    d.neg_forall
                        .iter()
                        .chain(&d.pos_forall)
                        .find(|v| !forall.contains(*v))
                });
            if let Some(v) = misplaced {
                return Err(Error::BlockViolation {
                    variable: v.name().to_owned(),
                    line: 0,
                });
            }
            if !d.neg_exists.is_disjoint(&d.pos_exists) || !d.neg_forall.is_disjoint(&d.pos_forall) {
                return Err(Error::Syntax {
                    line: 0,
                    column: 0,
                    message: "disjunct contains complementary literals".into(),
                });
            }
            if !kept.contains(&d) {
                kept.push(d);
            }
        }
        let used: AtomSet = kept
            .iter()
            .flat_map(|d| {
                d.neg_exists
                    .iter()
                    .chain(&d.pos_exists)
                    .chain(&d.neg_forall)
                    .chain(&d.pos_forall)
            })
            .cloned()
            .collect();
        if let Some(v) = exists.iter().chain(&forall).find(|v| !used.contains(*v)) {
            return Err(Error::UnusedVariable {
                variable: v.name().to_owned(),
            });
        }
        Ok(QbfInstance {
            exists,
            forall,
            disjuncts: kept,
        })
    }

    pub fn exists(&self) -> &AtomSet {
        &self.exists
    }

    pub fn forall(&self) -> &AtomSet {
        &self.forall
    }

    pub fn disjuncts(&self) -> &[Disjunct] {
        &self.disjuncts
    }

    fn acts(&self) -> AtomSet {
        (1..=self.disjuncts.len()).map(act).collect()
    }

    /// Truth of the matrix under an assignment to `X ∪ Y`.
    pub fn matrix_holds(&self, m: &AtomSet) -> bool {
        self.disjuncts.iter().any(|d| d.holds(m))
    }
}

/// The `.qbf2` text format.
impl fmt::Display for QbfInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |s: &AtomSet| s.iter().map(|a| a.name().to_owned()).collect::<Vec<_>>();
        writeln!(f, "exists: {}", names(&self.exists).join(" "))?;
        writeln!(f, "forall: {}", names(&self.forall).join(" "))?;
        for d in &self.disjuncts {
            let mut lits = Vec::new();
            for (neg, pos) in [(&d.neg_exists, &d.pos_exists), (&d.neg_forall, &d.pos_forall)] {
                lits.extend(neg.iter().map(|a| format!("-{a}")));
                lits.extend(pos.iter().map(|a| a.to_string()));
            }
            writeln!(f, "disjunct: {}", lits.join(" "))?;
        }
        Ok(())
    }
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn is_variable(name: &str) -> bool {
    let mut chars = name.chars();
    chars.next().is_some_and(|c| c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(text: &str, offset: usize) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((offset + text[..s].chars().count() + 1, &text[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((offset + text[..s].chars().count() + 1, &text[s..]));
    }
    out
}

pub fn parse_qbf(text: &str) -> Result<QbfInstance> {
    parse_qbf_reporting(text).map(|(q, _)| q)
}

/// Like [`parse_qbf`], also returning the lines of disjuncts dropped as
/// repetitions of an earlier one.
pub fn parse_qbf_reporting(text: &str) -> Result<(QbfInstance, Vec<usize>)> {
    let mut exists: Option<AtomSet> = None;
    let mut forall: Option<AtomSet> = None;
    let mut disjuncts: Vec<(usize, Disjunct)> = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('%').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let Some(colon) = content.find(':') else {
            return Err(syntax(line, 1, "expected `exists:`, `forall:` or `disjunct:`"));
        };
        let keyword = content[..colon].trim();
        let body = &content[colon + 1..];
        let toks = tokens(body, content[..colon + 1].chars().count());
        match keyword {
            "exists" | "forall" => {
                if !disjuncts.is_empty() {
                    return Err(syntax(line, 1, "quantifier blocks must precede the disjuncts"));
                }
                let slot = if keyword == "exists" { &mut exists } else { &mut forall };
                if slot.is_some() {
                    return Err(syntax(line, 1, format!("`{keyword}:` appears more than once")));
                }
                let mut block = AtomSet::new();
                for (column, tok) in toks {
                    if !is_variable(tok) {
                        return Err(syntax(line, column, format!("invalid variable `{tok}`")));
                    }
                    if tok == CONTRADICTION {
                        return Err(Error::ReservedVariable {
                            variable: tok.to_owned(),
                        });
                    }
                    if !block.insert(Atom::new(tok)) {
                        return Err(syntax(line, column, format!("variable `{tok}` repeated")));
                    }
                }
                *slot = Some(block);
            }
            "disjunct" => {
                let x = exists.get_or_insert_with(AtomSet::new).clone();
                let y = forall.get_or_insert_with(AtomSet::new).clone();
                if let Some(v) = x.intersection(&y).next() {
                    return Err(Error::BlockViolation {
                        variable: v.name().to_owned(),
                        line,
                    });
                }
                let mut d = Disjunct::default();
                for (column, tok) in toks {
                    let (negated, name) = match tok.strip_prefix('-') {
                        Some(rest) => (true, rest),
                        None => (false, tok),
                    };
                    if !is_variable(name) {
                        return Err(syntax(line, column, format!("invalid literal `{tok}`")));
                    }
                    let v = Atom::new(name);
                    let target = match (x.contains(&v), y.contains(&v), negated) {
                        (true, _, true) => &mut d.neg_exists,
                        (true, _, false) => &mut d.pos_exists,
                        (_, true, true) => &mut d.neg_forall,
                        (_, true, false) => &mut d.pos_forall,
                        _ => {
                            return Err(Error::BlockViolation {
                                variable: name.to_owned(),
                                line,
                            })
                        }
                    };
                    target.insert(v);
                }
                if !d.neg_exists.is_disjoint(&d.pos_exists) || !d.neg_forall.is_disjoint(&d.pos_forall) {
                    return Err(syntax(line, 1, "disjunct contains complementary literals"));
                }
                disjuncts.push((line, d));
            }
            other => {
                return Err(syntax(line, 1, format!("unknown keyword `{other}`")));
            }
        }
    }
    let mut dropped = Vec::new();
    let mut seen: Vec<&Disjunct> = Vec::new();
    for (line, d) in &disjuncts {
        if seen.contains(&d) {
            dropped.push(*line);
        } else {
            seen.push(d);
        }
    }
    let instance = QbfInstance::new(
        exists.unwrap_or_default(),
        forall.unwrap_or_default(),
        disjuncts.into_iter().map(|(_, d)| d).collect(),
    )?;
    Ok((instance, dropped))
}

/// `Π_sat`: guesses an assignment to `X` and derives which disjuncts it
/// leaves open. Input `act(1..n)`, output `X`.
pub fn encode_sat(q: &QbfInstance) -> DlpFunction {
    let mut rules = RuleSet::new();
    for (i, d) in q.disjuncts.iter().enumerate() {
        let a = act(i + 1);
        for x in &d.neg_exists {
            rules.insert(Rule::new(
                AtomSet::new(),
                [x.clone(), a.clone()].into(),
                AtomSet::new(),
            ));
        }
        for x in &d.pos_exists {
            rules.insert(Rule::new([x.clone()].into(), [a.clone()].into(), AtomSet::new()));
        }
        rules.insert(Rule::new(
            d.neg_exists.clone(),
            d.pos_exists.clone(),
            [a].into(),
        ));
    }
    DlpFunction::new(rules, q.acts(), q.exists.clone(), AtomSet::new())
        .expect("the sat encoding is a module")
}

/// `Π_unsat`: has a stable model for a set of active disjuncts exactly when
/// no assignment to `Y` satisfies the remaining matrix. Input `act(1..n)`,
/// hidden `Y ∪ {u}`.
pub fn encode_unsat(q: &QbfInstance) -> DlpFunction {
    let u = Atom::new(CONTRADICTION);
    let mut rules = RuleSet::new();
    for (i, d) in q.disjuncts.iter().enumerate() {
        let mut head = d.neg_forall.clone();
        head.insert(u.clone());
        let mut pos = d.pos_forall.clone();
        pos.insert(act(i + 1));
        rules.insert(Rule::new(head, pos, AtomSet::new()));
    }
    for y in &q.forall {
        rules.insert(Rule::new([y.clone()].into(), [u.clone()].into(), AtomSet::new()));
    }
    rules.insert(Rule::new([u.clone()].into(), AtomSet::new(), [u.clone()].into()));
    let mut hidden = q.forall.clone();
    hidden.insert(u);
    DlpFunction::new(rules, q.acts(), AtomSet::new(), hidden)
        .expect("the unsat encoding is a module")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QbfVerdict {
    pub valid: bool,
    /// The assignment to `X` read off a stable model of the join.
    pub certificate: Option<AtomSet>,
}

pub fn evaluate_qbf(q: &QbfInstance) -> Result<QbfVerdict> {
    evaluate_qbf_with(q, &Limits::default())
}

/// Validity through the stable models of `Π_sat ⊔ Π_unsat`. When either
/// module alone has no stable model the join has none either, so the
/// formula is reported invalid without building it.
pub fn evaluate_qbf_with(q: &QbfInstance, limits: &Limits) -> Result<QbfVerdict> {
    let invalid = QbfVerdict {
        valid: false,
        certificate: None,
    };
    let sat = encode_sat(q);
    let unsat = encode_unsat(q);
    if stable_models_with(&sat, limits)?.is_empty() || stable_models_with(&unsat, limits)?.is_empty() {
        return Ok(invalid);
    }
    let joined = join(&sat, &unsat).expect("the two encodings always join");
    Ok(match stable_models_with(&joined, limits)?.first() {
        Some(m) => QbfVerdict {
            valid: true,
            certificate: Some(m.intersection(&q.exists).cloned().collect()),
        },
        None => invalid,
    })
}

/// Largest `|X| + |Y|` accepted by [`qbf_brute_oracle`].
pub const ORACLE_CAP: usize = 20;

/// Validity by trying every assignment to `X` against every assignment to `Y`.
pub fn qbf_brute_oracle(q: &QbfInstance) -> Result<bool> {
    let x: Vec<&Atom> = q.exists.iter().collect();
    let y: Vec<&Atom> = q.forall.iter().collect();
    if x.len() + y.len() > ORACLE_CAP {
        return Err(Error::SignatureTooLarge {
            size: x.len() + y.len(),
            cap: ORACLE_CAP,
        });
    }
    let assign = |vars: &[&Atom], bits: u32, into: &mut AtomSet| {
        for (i, v) in vars.iter().enumerate() {
            if bits >> i & 1 == 1 {
                into.insert((*v).clone());
            }
        }
    };
    Ok((0..1u32 << x.len()).any(|xb| {
        (0..1u32 << y.len()).all(|yb| {
            let mut m = AtomSet::new();
            assign(&x, xb, &mut m);
            assign(&y, yb, &mut m);
            q.matrix_holds(&m)
        })
    }))
}
