//! Backtracking stable-model search over a compiled module.
//!
//! Propagation uses the rules as clauses plus support: a non-input atom with
//! no rule that could still support it is false, and a true atom with a
//! single candidate rule forces that rule's body. Every complete assignment
//! reached this way is then checked against the reduct, so the search
//! returns exactly the stable models.

use crate::bits::{has_smaller, Compiled, MaskRule};

pub(crate) struct Search<'a> {
    c: &'a Compiled,
    rules: Vec<MaskRule>,
    /// Rules whose head contains atom `i`.
    defs: Vec<Vec<usize>>,
    defined: u64,
    full: u64,
}

impl<'a> Search<'a> {
    pub fn new(c: &'a Compiled) -> Self {
        // Rules with a contradictory body or a tautological head never fire
        // and are always satisfied.
        let rules: Vec<MaskRule> = c
            .rules
            .iter()
            .filter(|r| r.pos & r.neg == 0 && r.head & r.pos == 0)
            .copied()
            .collect();
        let mut defs = vec![Vec::new(); c.atoms.len()];
        for (k, r) in rules.iter().enumerate() {
            let mut h = r.head;
            while h != 0 {
                defs[h.trailing_zeros() as usize].push(k);
                h &= h - 1;
            }
        }
        Search {
            c,
            rules,
            defs,
            defined: c.full() & !c.input,
            full: c.full(),
        }
    }

    /// Calls `visit` on every stable model until it returns `false`.
    pub fn run(&self, mut visit: impl FnMut(u64) -> bool) {
        self.branch(0, 0, &mut visit);
    }

    fn branch(&self, t: u64, f: u64, visit: &mut impl FnMut(u64) -> bool) -> bool {
        let (mut t, mut f) = (t, f);
        if !self.propagate(&mut t, &mut f) {
            return true;
        }
        let open = self.full & !(t | f);
        if open == 0 {
            if self.stable(t) {
                return visit(t);
            }
            return true;
        }
        let bit = open & open.wrapping_neg();
        self.branch(t, f | bit, visit) && self.branch(t | bit, f, visit)
    }

    fn propagate(&self, t: &mut u64, f: &mut u64) -> bool {
        loop {
            let (t0, f0) = (*t, *f);
            for r in &self.rules {
                if r.head & *t != 0 || r.pos & *f != 0 || r.neg & *t != 0 {
                    continue;
                }
                let unset = !(*t | *f);
                let open_true = (r.head | r.neg) & unset;
                let open_false = r.pos & unset;
                match (open_true | open_false).count_ones() {
                    0 => return false,
                    1 if open_true != 0 => *t |= open_true,
                    1 => *f |= open_false,
                    _ => {}
                }
            }
            let mut candidates = self.defined & !*f;
            while candidates != 0 {
                let i = candidates.trailing_zeros() as usize;
                let bit = 1u64 << i;
                candidates &= candidates - 1;
                let mut support = None;
                let mut count = 0;
                for &k in &self.defs[i] {
                    let r = &self.rules[k];
                    if r.pos & *f == 0 && r.neg & *t == 0 && (r.head & !bit) & *t == 0 {
                        count += 1;
                        support = Some(r);
                        if count > 1 {
                            break;
                        }
                    }
                }
                match (count, support) {
                    (0, _) => {
                        if *t & bit != 0 {
                            return false;
                        }
                        *f |= bit;
                    }
                    (1, Some(r)) if *t & bit != 0 => {
                        *t |= r.pos;
                        *f |= r.neg | (r.head & !bit);
                    }
                    _ => {}
                }
            }
            if *t & *f != 0 {
                return false;
            }
            if (*t, *f) == (t0, f0) {
                return true;
            }
        }
    }

    /// Whether a complete assignment is a minimal model of its reduct.
    fn stable(&self, m: u64) -> bool {
        if !self.c.is_model(m) {
            return false;
        }
        let reduct: Vec<MaskRule> = self
            .c
            .rules
            .iter()
            .filter(|r| r.neg & m == 0)
            .map(|r| MaskRule {
                head: r.head & m,
                pos: r.pos,
                neg: 0,
            })
            .collect();
        if reduct.iter().all(|r| r.head.count_ones() <= 1) {
            let mut n = m & self.c.input;
            loop {
                let before = n;
                for r in &reduct {
                    if r.head != 0 && r.pos & !n == 0 {
                        n |= r.head;
                    }
                }
                if n == before {
                    return n == m;
                }
            }
        }
        !has_smaller(m, self.c.input, |n| reduct.iter().all(|r| r.positive_satisfied(n)))
    }
}
