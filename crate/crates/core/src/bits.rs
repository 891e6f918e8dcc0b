//! Bitmask compilation of a module for brute-force enumeration. Atoms are
//! numbered in sorted order so that bit `i` stands for the `i`-th smallest atom.

use crate::error::{Error, Result};
use crate::model::{Atom, AtomSet, DlpFunction, Rule};
use std::collections::HashMap;

/// Hard ceiling imposed by the `u64` representation.
pub(crate) const MAX_BITS: usize = 64;

#[derive(Clone, Copy, Debug)]
pub(crate) struct MaskRule {
    pub head: u64,
    pub pos: u64,
    pub neg: u64,
}

impl MaskRule {
    /// Classical satisfaction of the rule by `m`.
    #[inline]
    pub fn satisfied(&self, m: u64) -> bool {
        self.pos & !m != 0 || self.neg & m != 0 || self.head & m != 0
    }

    /// Satisfaction of the reduct `A <- B` by `n`.
    #[inline]
    pub fn positive_satisfied(&self, n: u64) -> bool {
        self.pos & !n != 0 || self.head & n != 0
    }
}

pub(crate) struct Compiled {
    pub atoms: Vec<Atom>,
    index: HashMap<Atom, usize>,
    pub input: u64,
    pub rules: Vec<MaskRule>,
}

impl Compiled {
    pub fn new(module: &DlpFunction, cap: usize) -> Result<Self> {
        let atoms: Vec<Atom> = module.signature().into_iter().collect();
        if atoms.len() > cap.min(MAX_BITS) {
            return Err(Error::SignatureTooLarge {
                size: atoms.len(),
                cap: cap.min(MAX_BITS),
            });
        }
        let index: HashMap<Atom, usize> = atoms
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect();
        let mut compiled = Compiled {
            atoms,
            index,
            input: 0,
            rules: Vec::new(),
        };
        compiled.input = compiled.mask(module.input());
        compiled.rules = module.rules().iter().map(|r| compiled.rule(r)).collect();
        Ok(compiled)
    }

    /// Mask of every atom of the signature.
    pub fn full(&self) -> u64 {
        if self.atoms.len() == MAX_BITS {
            u64::MAX
        } else {
            (1u64 << self.atoms.len()) - 1
        }
    }

    pub fn bit(&self, atom: &Atom) -> u64 {
        1u64 << self.index[atom]
    }

    /// Mask of the atoms of `set` that belong to the signature.
    pub fn mask<'a>(&self, set: impl IntoIterator<Item = &'a Atom>) -> u64 {
        set.into_iter()
            .filter_map(|a| self.index.get(a))
            .fold(0, |m, &i| m | (1u64 << i))
    }

    pub fn rule(&self, rule: &Rule) -> MaskRule {
        MaskRule {
            head: self.mask(rule.head()),
            pos: self.mask(rule.pos()),
            neg: self.mask(rule.neg()),
        }
    }

    pub fn set(&self, mut mask: u64) -> AtomSet {
        let mut out = AtomSet::new();
        while mask != 0 {
            let i = mask.trailing_zeros() as usize;
            out.insert(self.atoms[i].clone());
            mask &= mask - 1;
        }
        out
    }

    pub fn is_model(&self, m: u64) -> bool {
        self.rules.iter().all(|r| r.satisfied(m))
    }

    /// Every subset of the signature; the caller has already bounded its size.
    pub fn subsets(&self) -> impl Iterator<Item = u64> {
        0..=self.full()
    }
}

/// Searches for `n ⊊ m` with `n ∩ fixed = m ∩ fixed` satisfying `pred`.
/// Single-atom removals are tried first, then the remaining subsets of the
/// free part by increasing cardinality.
pub(crate) fn has_smaller(m: u64, fixed: u64, pred: impl Fn(u64) -> bool) -> bool {
    let kept = m & fixed;
    let free = m & !fixed;
    let positions: Vec<u32> = bit_positions(free);
    let k = positions.len();
    if k == 0 {
        return false;
    }
    for &p in &positions {
        if pred(m & !(1u64 << p)) {
            return true;
        }
    }
    for size in 0..k.saturating_sub(1) {
        if combinations(k, size).any(|choice| {
            let mut n = kept;
            let mut c = choice;
            while c != 0 {
                let j = c.trailing_zeros() as usize;
                n |= 1u64 << positions[j];
                c &= c - 1;
            }
            pred(n)
        }) {
            return true;
        }
    }
    false
}

pub(crate) fn bit_positions(mut mask: u64) -> Vec<u32> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros());
        mask &= mask - 1;
    }
    out
}

/// All `size`-element subsets of `0..k` as bitmasks, in increasing order
/// (Gosper's hack).
pub(crate) fn combinations(k: usize, size: usize) -> impl Iterator<Item = u64> {
    let limit = if k >= 64 { u64::MAX } else { 1u64 << k };
    let first = if size == 0 { 0 } else { (1u64 << size) - 1 };
    let mut next = if size <= k { Some(first) } else { None };
    std::iter::from_fn(move || {
        let current = next?;
        next = if current == 0 {
            None
        } else {
            let c = current & current.wrapping_neg();
            let r = current.wrapping_add(c);
            let candidate = (((r ^ current) >> 2) / c) | r;
            if r == 0 || candidate >= limit {
                None
            } else {
                Some(candidate)
            }
        };
        Some(current)
    })
}
