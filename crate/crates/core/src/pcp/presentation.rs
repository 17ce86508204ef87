//! Polycyclic presentations and collection.
//!
//! A presentation on generators g1..gn (indices 0-based in the API) stores,
//! for every generator, a relative order (a finite bound >= 2 or infinite)
//! together with rewriting rules
//!
//! ```text
//!   gi^ri     = w(i,i)    (only when ri is finite)
//!   gi^-1 gj gi    = w(i,j)    for i < j
//!   gi gj gi^-1    = w'(i,j)   for i < j, needed only when ri is infinite
//! ```
//!
//! where every right-hand side is a word in generators strictly above i.
//! Every group element then has a unique normal form g1^e1 * ... * gn^en
//! with 0 <= ei < ri at the finite positions, provided the presentation is
//! consistent. `collect` computes that normal form by collection from the
//! left; `consistency_check` tests the finitely many overlap laws that
//! guarantee uniqueness.
//!
//! Collection always terminates, consistent input or not: a step either
//! strictly lowers the least generator index still out of place or shortens
//! what remains at that index.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

use super::PcpError;

/// A word in the generators: (generator index, nonzero exponent) pairs,
/// read left to right. Not necessarily in normal form.
pub type Word = Vec<(usize, BigInt)>;

fn word_from_i64(w: &[(usize, i64)]) -> Word {
    w.iter().map(|&(g, e)| (g, BigInt::from(e))).collect()
}

/// Group element in normal form, as the exponent vector of its collected
/// word. Equality of exponent vectors is equality in the group; elements
/// only make sense relative to the presentation that produced them.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PcpElement {
    pub(crate) exps: Vec<BigInt>,
}

impl PcpElement {
    pub fn exponents(&self) -> &[BigInt] {
        &self.exps
    }

    pub fn is_identity(&self) -> bool {
        self.exps.iter().all(|e| e.is_zero())
    }

    /// Index of the first generator with nonzero exponent, if any.
    pub fn leading_index(&self) -> Option<usize> {
        self.exps.iter().position(|e| !e.is_zero())
    }

    /// The element as a word, zero exponents dropped.
    pub fn to_word(&self) -> Word {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_zero())
            .map(|(g, e)| (g, e.clone()))
            .collect()
    }
}

impl fmt::Display for PcpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "id");
        }
        let mut first = true;
        for (i, e) in self.exps.iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e.is_one() {
                write!(f, "g{}", i + 1)?;
            } else {
                write!(f, "g{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

/// One failed overlap law from a consistency check.
#[derive(Debug, Clone)]
pub struct ConsistencyViolation {
    /// Which overlap failed, in human-readable form.
    pub law: String,
    pub lhs: PcpElement,
    pub rhs: PcpElement,
}

impl fmt::Display for ConsistencyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} != {}", self.law, self.lhs, self.rhs)
    }
}

/// Builder for [`PcpPresentation`]. Indices are 0-based; exponents are
/// plain machine integers for convenience (relations are small in
/// practice even when the elements they rewrite are not).
pub struct PcpBuilder {
    orders: Vec<Option<BigInt>>,
    powers: Vec<Option<Word>>,
    conj: Vec<Vec<Option<Word>>>,
    conj_inv: Vec<Vec<Option<Word>>>,
}

impl PcpBuilder {
    /// Start a presentation with the given relative orders
    /// (`None` = infinite). All relations default to trivial:
    /// `gi^ri = 1` and all generators commute.
    pub fn new(orders: &[Option<u64>]) -> Self {
        Self::with_orders(orders.iter().map(|o| o.map(BigInt::from)).collect())
    }

    /// As [`PcpBuilder::new`] but with arbitrary-precision orders, for
    /// presentations derived from computed data.
    pub fn with_orders(orders: Vec<Option<BigInt>>) -> Self {
        let n = orders.len();
        PcpBuilder {
            orders,
            powers: vec![None; n],
            conj: vec![vec![None; n]; n],
            conj_inv: vec![vec![None; n]; n],
        }
    }

    /// Set `g(base)^r(base) = word`.
    pub fn power(self, base: usize, word: &[(usize, i64)]) -> Self {
        self.power_word(base, word_from_i64(word))
    }

    pub fn power_word(mut self, base: usize, word: Word) -> Self {
        assert!(base < self.orders.len(), "generator index out of range");
        assert!(self.powers[base].is_none(), "duplicate power relation");
        self.powers[base] = Some(word);
        self
    }

    /// Set `g(acting)^-1 g(target) g(acting) = word`, for acting < target.
    pub fn conjugation(self, acting: usize, target: usize, word: &[(usize, i64)]) -> Self {
        self.conjugation_word(acting, target, word_from_i64(word))
    }

    pub fn conjugation_word(mut self, acting: usize, target: usize, word: Word) -> Self {
        assert!(target < self.orders.len(), "generator index out of range");
        assert!(self.conj[acting][target].is_none(), "duplicate conjugation");
        self.conj[acting][target] = Some(word);
        self
    }

    /// Set `g(acting) g(target) g(acting)^-1 = word`. Only meaningful (and
    /// only accepted) when g(acting) has infinite order; for finite orders
    /// the engine rewrites negative letters through the power relation
    /// instead.
    pub fn conjugation_inverse(self, acting: usize, target: usize, word: &[(usize, i64)]) -> Self {
        self.conjugation_inverse_word(acting, target, word_from_i64(word))
    }

    pub fn conjugation_inverse_word(mut self, acting: usize, target: usize, word: Word) -> Self {
        assert!(target < self.orders.len(), "generator index out of range");
        assert!(
            self.conj_inv[acting][target].is_none(),
            "duplicate inverse conjugation"
        );
        self.conj_inv[acting][target] = Some(word);
        self
    }

    /// Validate structure, run the consistency check, and hand back the
    /// presentation. Fails on malformed input and on inconsistent
    /// presentations alike.
    pub fn build(self) -> Result<PcpPresentation, PcpError> {
        let p = self.build_unchecked()?;
        let violations = p.consistency_check();
        if let Some(first) = violations.first() {
            return Err(PcpError::Inconsistent {
                count: violations.len(),
                first: first.to_string(),
            });
        }
        Ok(p)
    }

    /// Validate structure only. Collection on an inconsistent presentation
    /// still terminates but normal forms need not be unique, so this is
    /// for presentations already known to be consistent (for instance
    /// ones induced from a verified parent).
    pub fn build_unchecked(self) -> Result<PcpPresentation, PcpError> {
        let n = self.orders.len();
        for (i, o) in self.orders.iter().enumerate() {
            if let Some(r) = o {
                if r < &BigInt::from(2) {
                    return Err(PcpError::BadOrder(i));
                }
            }
        }
        let check_word = |base: usize, w: &Word| -> Result<(), PcpError> {
            for (g, e) in w {
                if *g >= n {
                    return Err(PcpError::IndexOutOfRange(*g));
                }
                if *g <= base {
                    return Err(PcpError::BadWordIndex {
                        base,
                        found: *g,
                    });
                }
                if e.is_zero() {
                    return Err(PcpError::ZeroExponent);
                }
            }
            Ok(())
        };

        let mut powers = Vec::with_capacity(n);
        for (i, w) in self.powers.into_iter().enumerate() {
            match w {
                Some(w) => {
                    if self.orders[i].is_none() {
                        return Err(PcpError::PowerOnInfinite(i));
                    }
                    check_word(i, &w)?;
                    powers.push(w);
                }
                None => powers.push(Vec::new()),
            }
        }

        let trivial = |j: usize| -> Word { vec![(j, BigInt::one())] };
        let is_trivial = |j: usize, w: &Word| w.len() == 1 && w[0].0 == j && w[0].1.is_one();

        let mut conj: Vec<Vec<Word>> = vec![Vec::new(); n];
        let mut conj_inv: Vec<Vec<Option<Word>>> = vec![Vec::new(); n];
        let mut commute: Vec<Vec<bool>> = vec![Vec::new(); n];
        for i in 0..n {
            conj[i] = (0..n).map(trivial).collect();
            conj_inv[i] = (0..n).map(|j| Some(trivial(j))).collect();
            commute[i] = vec![true; n];
        }
        for (i, row) in self.conj.into_iter().enumerate() {
            for (j, w) in row.into_iter().enumerate() {
                let Some(w) = w else { continue };
                if i >= j || j >= n {
                    return Err(PcpError::BadConjugationPair(i, j));
                }
                check_word(i, &w)?;
                conj[i][j] = w;
            }
        }
        for (i, row) in self.conj_inv.into_iter().enumerate() {
            for (j, w) in row.into_iter().enumerate() {
                let Some(w) = w else { continue };
                if i >= j || j >= n {
                    return Err(PcpError::BadConjugationPair(i, j));
                }
                if self.orders[i].is_some() {
                    return Err(PcpError::InverseOnFinite(i));
                }
                check_word(i, &w)?;
                conj_inv[i][j] = Some(w);
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let pos_trivial = is_trivial(j, &conj[i][j]);
                if self.orders[i].is_none() {
                    let inv_trivial =
                        conj_inv[i][j].as_ref().map(|w| is_trivial(j, w)).unwrap();
                    if !pos_trivial && inv_trivial {
                        // nontrivial action with no declared inverse word:
                        // the trivial default cannot be right
                        return Err(PcpError::MissingInverseConjugation { i, j });
                    }
                    commute[i][j] = pos_trivial && inv_trivial;
                } else {
                    // finite order: the inverse action is derived, never stored
                    conj_inv[i][j] = None;
                    commute[i][j] = pos_trivial;
                }
            }
        }

        Ok(PcpPresentation {
            orders: self.orders,
            powers,
            conj,
            conj_inv,
            commute,
        })
    }
}

/// A polycyclic presentation with a collection engine. See the module
/// docs for the shape of the relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcpPresentation {
    orders: Vec<Option<BigInt>>,
    /// powers[i] = right-hand side of gi^ri (empty word when trivial or ri infinite)
    powers: Vec<Word>,
    /// conj[i][j] = gj conjugated by gi, for i < j; trivial elsewhere
    conj: Vec<Vec<Word>>,
    /// conj_inv[i][j] = gj conjugated by gi^-1; Some only for infinite ri
    conj_inv: Vec<Vec<Option<Word>>>,
    /// commute[i][j]: conjugation of gj by gi (both signs) is trivial
    commute: Vec<Vec<bool>>,
}

/// Work item on the collection stack. The element under rewriting is
/// always (collected prefix) * (stack read top to bottom).
enum Seg<'a> {
    /// A generator power still to be merged.
    Gen(usize, BigInt),
    /// `word^times`, times >= 1. Borrowing the presentation's own relation
    /// words keeps repeated conjugation from cloning them.
    Rep { word: &'a [(usize, BigInt)], times: BigInt },
    /// `(word^-1)^times`, times >= 1.
    RepInv { word: &'a [(usize, BigInt)], times: BigInt },
}

impl PcpPresentation {
    pub fn generator_count(&self) -> usize {
        self.orders.len()
    }

    /// Relative order of a generator; `None` means infinite.
    pub fn relative_order(&self, i: usize) -> Option<&BigInt> {
        self.orders[i].as_ref()
    }

    /// Total group order, `None` when any generator has infinite
    /// relative order.
    pub fn order(&self) -> Option<BigInt> {
        let mut acc = BigInt::one();
        for o in &self.orders {
            acc *= o.as_ref()?;
        }
        Some(acc)
    }

    /// Number of infinite relative orders. For consistent presentations
    /// this is an invariant of the group, not of the presentation.
    pub fn hirsch_length(&self) -> usize {
        self.orders.iter().filter(|o| o.is_none()).count()
    }

    pub fn identity(&self) -> PcpElement {
        PcpElement {
            exps: vec![BigInt::zero(); self.orders.len()],
        }
    }

    pub fn generator(&self, i: usize) -> PcpElement {
        assert!(i < self.orders.len(), "generator index out of range");
        // orders are at least 2, so this is already a normal form
        let mut e = self.identity();
        e.exps[i] = BigInt::one();
        e
    }

    /// Collect an arbitrary word to normal form.
    pub fn collect(&self, word: &[(usize, BigInt)]) -> PcpElement {
        let mut prefix = self.identity().exps;
        let mut stack: Vec<Seg> = Vec::new();
        for (g, e) in word.iter().rev() {
            assert!(*g < self.orders.len(), "generator index out of range");
            stack.push(Seg::Gen(*g, e.clone()));
        }
        self.run(&mut prefix, &mut stack);
        PcpElement { exps: prefix }
    }

    /// Convenience collection from machine-integer exponents.
    pub fn elem(&self, word: &[(usize, i64)]) -> PcpElement {
        self.collect(&word_from_i64(word))
    }

    pub fn multiply(&self, a: &PcpElement, b: &PcpElement) -> PcpElement {
        debug_assert_eq!(a.exps.len(), self.orders.len());
        debug_assert_eq!(b.exps.len(), self.orders.len());
        let mut prefix = a.exps.clone();
        let mut stack: Vec<Seg> = Vec::new();
        for (g, e) in b.exps.iter().enumerate().rev() {
            if !e.is_zero() {
                stack.push(Seg::Gen(g, e.clone()));
            }
        }
        self.run(&mut prefix, &mut stack);
        PcpElement { exps: prefix }
    }

    pub fn invert(&self, a: &PcpElement) -> PcpElement {
        // (g1^e1 ... gn^en)^-1 = gn^-en ... g1^-e1
        let mut prefix = self.identity().exps;
        let mut stack: Vec<Seg> = Vec::new();
        for (g, e) in a.exps.iter().enumerate() {
            if !e.is_zero() {
                stack.push(Seg::Gen(g, -e.clone()));
            }
        }
        self.run(&mut prefix, &mut stack);
        PcpElement { exps: prefix }
    }

    /// `by^-1 * x * by`.
    pub fn conjugate(&self, x: &PcpElement, by: &PcpElement) -> PcpElement {
        let inv = self.invert(by);
        self.multiply(&self.multiply(&inv, x), by)
    }

    /// `a^-1 * b^-1 * a * b`.
    pub fn commutator(&self, a: &PcpElement, b: &PcpElement) -> PcpElement {
        let ab = self.multiply(a, b);
        let ba = self.multiply(b, a);
        self.multiply(&self.invert(&ba), &ab)
    }

    /// `x^k` by binary powering on collected elements.
    pub fn power(&self, x: &PcpElement, k: &BigInt) -> PcpElement {
        if k.is_zero() {
            return self.identity();
        }
        let (base, mut n) = if k.is_negative() {
            (self.invert(x), -k.clone())
        } else {
            (x.clone(), k.clone())
        };
        let mut acc: Option<PcpElement> = None;
        let mut sq = base;
        let one: BigInt = BigInt::one();
        while !n.is_zero() {
            if (&n & &one).is_one() {
                acc = Some(match acc {
                    None => sq.clone(),
                    Some(a) => self.multiply(&a, &sq),
                });
            }
            n >>= 1;
            if !n.is_zero() {
                sq = self.multiply(&sq, &sq);
            }
        }
        acc.unwrap()
    }

    /// Core loop: drain the stack into the prefix.
    fn run<'a>(&'a self, prefix: &mut [BigInt], stack: &mut Vec<Seg<'a>>) {
        while let Some(seg) = stack.pop() {
            match seg {
                Seg::Rep { word, times } => {
                    if word.is_empty() || times.is_zero() {
                        continue;
                    }
                    if !times.is_one() {
                        stack.push(Seg::Rep {
                            word,
                            times: times - 1,
                        });
                    }
                    for (g, e) in word.iter().rev() {
                        stack.push(Seg::Gen(*g, e.clone()));
                    }
                }
                Seg::RepInv { word, times } => {
                    if word.is_empty() || times.is_zero() {
                        continue;
                    }
                    if !times.is_one() {
                        stack.push(Seg::RepInv {
                            word,
                            times: times - 1,
                        });
                    }
                    // reversed word with negated exponents; pushing in
                    // forward order leaves the last letter's inverse on top
                    for (g, e) in word.iter() {
                        stack.push(Seg::Gen(*g, -e.clone()));
                    }
                }
                Seg::Gen(j, e) => {
                    if !e.is_zero() {
                        self.step(prefix, stack, j, e);
                    }
                }
            }
        }
    }

    /// Merge one generator power gj^e into the prefix.
    fn step<'a>(&'a self, prefix: &mut [BigInt], stack: &mut Vec<Seg<'a>>, j: usize, e: BigInt) {
        let n = self.orders.len();
        let has_tail = ((j + 1)..n).any(|k| !prefix[k].is_zero());
        if !has_tail {
            self.merge(prefix, stack, j, e);
            return;
        }
        let tail_commutes =
            ((j + 1)..n).all(|k| prefix[k].is_zero() || self.commute[j][k]);
        if tail_commutes {
            match &self.orders[j] {
                None => {
                    prefix[j] += e;
                }
                Some(r) => {
                    let (q, s) = (&prefix[j] + e).div_mod_floor(r);
                    prefix[j] = s;
                    if !q.is_zero() {
                        // the overflow word must pass the tail, which it
                        // need not commute with: re-queue the tail behind it
                        for k in ((j + 1)..n).rev() {
                            if !prefix[k].is_zero() {
                                let a = std::mem::take(&mut prefix[k]);
                                stack.push(Seg::Gen(k, a));
                            }
                        }
                        self.push_word_power(stack, &self.powers[j], q);
                    }
                }
            }
            return;
        }

        // General case: move a single letter gj^s (s = +-1) across the tail.
        let s: i8 = if e.is_negative() { -1 } else { 1 };
        if s < 0 {
            if let Some(r) = &self.orders[j] {
                // rewrite gj^-1 = gj^(r-1) * w(j,j)^-1 and retry
                let e1 = e + BigInt::one();
                if !e1.is_zero() {
                    stack.push(Seg::Gen(j, e1));
                }
                if !self.powers[j].is_empty() {
                    stack.push(Seg::RepInv {
                        word: &self.powers[j],
                        times: BigInt::one(),
                    });
                }
                stack.push(Seg::Gen(j, r - 1));
                return;
            }
        }
        let step_e = BigInt::from(s);
        let rest = e - &step_e;
        if !rest.is_zero() {
            stack.push(Seg::Gen(j, rest));
        }
        // conjugate the tail: descending k pushes leave the lowest tail
        // generator on top, so the tail re-collects in its own order
        for k in ((j + 1)..n).rev() {
            if prefix[k].is_zero() {
                continue;
            }
            let a = std::mem::take(&mut prefix[k]);
            if self.commute[j][k] {
                stack.push(Seg::Gen(k, a));
                continue;
            }
            let w: &Word = if s > 0 {
                &self.conj[j][k]
            } else {
                self.conj_inv[j][k]
                    .as_ref()
                    .expect("inverse conjugation words exist for infinite-order generators")
            };
            self.push_word_power(stack, w, a);
        }
        // the letter itself lands after the (zeroed) tail; any power-word
        // overflow it causes is pushed on top of the conjugated tail items
        self.merge(prefix, stack, j, step_e);
    }

    /// Merge gj^e into prefix[j] assuming prefix is trivial beyond j.
    fn merge<'a>(&'a self, prefix: &mut [BigInt], stack: &mut Vec<Seg<'a>>, j: usize, e: BigInt) {
        match &self.orders[j] {
            None => prefix[j] += e,
            Some(r) => {
                let (q, s) = (&prefix[j] + e).div_mod_floor(r);
                prefix[j] = s;
                if !q.is_zero() {
                    self.push_word_power(stack, &self.powers[j], q);
                }
            }
        }
    }

    /// Push word^q (q of either sign) as a work item.
    fn push_word_power<'a>(&self, stack: &mut Vec<Seg<'a>>, word: &'a [(usize, BigInt)], q: BigInt) {
        if word.is_empty() || q.is_zero() {
            return;
        }
        if word.len() == 1 {
            let (g, e) = &word[0];
            stack.push(Seg::Gen(*g, e * q));
            return;
        }
        if q.is_positive() {
            stack.push(Seg::Rep { word, times: q });
        } else {
            stack.push(Seg::RepInv { word, times: -q });
        }
    }

    /// Check every overlap law whose failure would break normal-form
    /// uniqueness. Empty result = consistent presentation. Indices below
    /// are 1-based in the reported law strings to match element display.
    pub fn consistency_check(&self) -> Vec<ConsistencyViolation> {
        let n = self.orders.len();
        let mut out = Vec::new();
        let mut push = |law: String, lhs: PcpElement, rhs: PcpElement| {
            if lhs != rhs {
                out.push(ConsistencyViolation { law, lhs, rhs });
            }
        };
        let g = |i: usize| self.generator(i);
        let gpow = |i: usize, k: &BigInt| self.collect(&[(i, k.clone())]);

        // associativity overlaps gk (gj gi) = (gk gj) gi, k > j > i
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let lhs = self.multiply(&self.multiply(&g(k), &g(j)), &g(i));
                    let rhs = self.multiply(&g(k), &self.multiply(&g(j), &g(i)));
                    push(
                        format!("g{} (g{} g{}) = (g{} g{}) g{}", k + 1, j + 1, i + 1, k + 1, j + 1, i + 1),
                        lhs,
                        rhs,
                    );
                }
            }
        }
        // power overlaps
        for j in 0..n {
            let Some(rj) = self.orders[j].clone() else { continue };
            // (gj^rj) gi = gj^(rj-1) (gj gi), j > i
            for i in 0..j {
                let lhs = self.multiply(&gpow(j, &rj), &g(i));
                let rhs = self.multiply(
                    &gpow(j, &(&rj - BigInt::one())),
                    &self.multiply(&g(j), &g(i)),
                );
                push(format!("(g{}^r) g{} overlap", j + 1, i + 1), lhs, rhs);
            }
            // gk (gj^rj) = (gk gj) gj^(rj-1), k > j
            for k in (j + 1)..n {
                let lhs = self.multiply(&g(k), &gpow(j, &rj));
                let rhs = self.multiply(
                    &self.multiply(&g(k), &g(j)),
                    &gpow(j, &(&rj - BigInt::one())),
                );
                push(format!("g{} (g{}^r) overlap", k + 1, j + 1), lhs, rhs);
            }
            // gj (gj^rj) = (gj^rj) gj
            let lhs = self.multiply(&g(j), &gpow(j, &rj));
            let rhs = self.multiply(&gpow(j, &rj), &g(j));
            push(format!("g{} commutes with g{}^r", j + 1, j + 1), lhs, rhs);
        }
        // cancellation overlaps for infinite-order generators:
        // (gk gi^-1) gi = gk and (gk gi) gi^-1 = gk, k > i
        for i in 0..n {
            if self.orders[i].is_some() {
                continue;
            }
            let gi_inv = self.collect(&[(i, -BigInt::one())]);
            for k in (i + 1)..n {
                let lhs = self.multiply(&self.multiply(&g(k), &gi_inv), &g(i));
                push(format!("(g{} g{}^-1) g{} cancels", k + 1, i + 1, i + 1), lhs, g(k));
                let lhs = self.multiply(&self.multiply(&g(k), &g(i)), &gi_inv);
                push(format!("(g{} g{}) g{}^-1 cancels", k + 1, i + 1, i + 1), lhs, g(k));
            }
        }
        out
    }

    pub fn is_consistent(&self) -> bool {
        self.consistency_check().is_empty()
    }

    /// Enumerate all elements of a finite group in lexicographic order of
    /// exponent vectors. Panics when some relative order is infinite;
    /// `cap` guards against blowups (None = no cap).
    pub fn enumerate_elements(&self, cap: Option<usize>) -> Option<Vec<PcpElement>> {
        let mut radii = Vec::with_capacity(self.orders.len());
        for o in &self.orders {
            let r = o.as_ref().expect("enumeration needs a finite group");
            radii.push(r.to_usize()?);
        }
        let total: usize = radii.iter().try_fold(1usize, |a, &r| a.checked_mul(r))?;
        if let Some(cap) = cap {
            if total > cap {
                return None;
            }
        }
        let mut out = Vec::with_capacity(total);
        let mut cur = vec![0usize; radii.len()];
        loop {
            out.push(PcpElement {
                exps: cur.iter().map(|&c| BigInt::from(c)).collect(),
            });
            let mut i = radii.len();
            loop {
                if i == 0 {
                    return Some(out);
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < radii[i] {
                    break;
                }
                cur[i] = 0;
            }
        }
    }

    /// Exponent-sum image of a word (abelianized letters).
    pub(crate) fn exponent_sums(&self, word: &[(usize, BigInt)]) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.orders.len()];
        for (g, e) in word {
            v[*g] += e;
        }
        v
    }

    pub(crate) fn power_word(&self, i: usize) -> &Word {
        &self.powers[i]
    }

    pub(crate) fn conj_word(&self, i: usize, j: usize) -> &Word {
        &self.conj[i][j]
    }

    pub(crate) fn conj_inv_word(&self, i: usize, j: usize) -> Option<&Word> {
        self.conj_inv[i][j].as_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use std::sync::Arc;

    fn s3() -> PcpPresentation {
        // symmetric group on three letters: a^2 = 1, b^3 = 1, b^a = b^2
        PcpBuilder::new(&[Some(2), Some(3)])
            .conjugation(0, 1, &[(1, 2)])
            .build()
            .unwrap()
    }

    fn dl3() -> PcpPresentation {
        // derived length three, Hirsch length 3; see samples::derived_length_three
        PcpBuilder::new(&[Some(2), None, None, None])
            .power(0, &[(3, 1)])
            .conjugation(0, 1, &[(1, -1)])
            .conjugation(0, 2, &[(2, -1)])
            .conjugation(1, 2, &[(2, 1), (3, 2)])
            .conjugation_inverse(1, 2, &[(2, 1), (3, -2)])
            .build()
            .unwrap()
    }

    #[test]
    fn s3_collection() {
        let g = s3();
        let a = g.generator(0);
        let b = g.generator(1);
        // ba = ab^2
        let ba = g.multiply(&b, &a);
        assert_eq!(ba, g.elem(&[(0, 1), (1, 2)]));
        // (ab)(ab) = 1: ab is a transposition
        let ab = g.multiply(&a, &b);
        assert!(g.multiply(&ab, &ab).is_identity());
        // [a, b] = a^-1 b^-1 a b = (b^a)^-1 b = b^-2 b = b^2; with
        // a = (1 2), b = (1 2 3) that is the 3-cycle (1 3 2)
        assert_eq!(g.commutator(&a, &b), g.elem(&[(1, 2)]));
        assert!(g.is_consistent());
    }

    #[test]
    fn s3_all_products_match_symmetric_group() {
        // model S3 as permutations of [0,1,2] and compare multiplication tables
        let g = s3();
        let a_perm = [1usize, 0, 2]; // transposition (0 1)
        let b_perm = [1usize, 2, 0]; // 3-cycle 0->1->2->0
        let compose = |p: &[usize; 3], q: &[usize; 3]| {
            // apply q first, then p (matching left-to-right word order x * y
            // as "x then y" needs one fixed convention; pick p after q)
            [p[q[0]], p[q[1]], p[q[2]]]
        };
        let perm_of = |e: &PcpElement| {
            let pw = |p: &[usize; 3], times: &BigInt| {
                let mut out = [0usize, 1, 2];
                let mut t = times.clone();
                while !t.is_zero() {
                    out = compose(p, &out);
                    t -= 1;
                }
                out
            };
            // a^i b^j acts as "a^i first, then b^j"
            let pa = pw(&a_perm, &e.exps[0]);
            let pb = pw(&b_perm, &e.exps[1]);
            compose(&pb, &pa)
        };
        let elems = g.enumerate_elements(None).unwrap();
        assert_eq!(elems.len(), 6);
        for x in &elems {
            for y in &elems {
                let z = g.multiply(x, y);
                assert_eq!(perm_of(&z), compose(&perm_of(y), &perm_of(x)));
            }
        }
    }

    #[test]
    fn infinite_dihedral() {
        // a^2 = 1, b^a = b^-1
        let g = PcpBuilder::new(&[Some(2), None])
            .conjugation(0, 1, &[(1, -1)])
            .build()
            .unwrap();
        let a = g.generator(0);
        let b = g.generator(1);
        let ba = g.multiply(&b, &a);
        assert_eq!(ba, g.elem(&[(0, 1), (1, -1)]));
        // (ab^k)^2 = 1 for every k
        for k in -4i64..=4 {
            let x = g.elem(&[(0, 1), (1, k)]);
            assert!(g.multiply(&x, &x).is_identity(), "k = {k}");
        }
        assert!(g.is_consistent());
    }

    #[test]
    fn heisenberg_normal_forms() {
        // free nilpotent of class 2 on two generators:
        // [a, b] = c central, so b^a = b c requires... set conj(0,1) = (1,1)(2,1)
        let g = PcpBuilder::new(&[None, None, None])
            .conjugation(0, 1, &[(1, 1), (2, 1)])
            .conjugation_inverse(0, 1, &[(1, 1), (2, -1)])
            .build()
            .unwrap();
        let a = g.generator(0);
        let b = g.generator(1);
        let c = g.generator(2);
        // [a, b] = (b^a)^-1 b = (bc)^-1 b = c^-1, and [b, a] = c
        assert_eq!(g.commutator(&a, &b), g.invert(&c));
        assert_eq!(g.commutator(&b, &a), c);
        // b^k a^m = a^m b^k c^(km)
        for k in -3i64..=3 {
            for m in -3i64..=3 {
                let lhs = g.multiply(&g.elem(&[(1, k)]), &g.elem(&[(0, m)]));
                assert_eq!(lhs, g.elem(&[(0, m), (1, k), (2, k * m)]), "k={k} m={m}");
            }
        }
    }

    #[test]
    fn dl3_consistent_and_relations_hold() {
        let g = dl3();
        assert!(g.is_consistent());
        let g1 = g.generator(0);
        let g2 = g.generator(1);
        let g3 = g.generator(2);
        let g4 = g.generator(3);
        assert_eq!(g.multiply(&g1, &g1), g4);
        assert_eq!(g.conjugate(&g2, &g1), g.elem(&[(1, -1)]));
        assert_eq!(g.conjugate(&g3, &g1), g.elem(&[(2, -1)]));
        assert_eq!(g.conjugate(&g3, &g2), g.elem(&[(2, 1), (3, 2)]));
        // g4 central
        for x in [&g1, &g2, &g3] {
            assert_eq!(g.conjugate(&g4, x), g4);
        }
        // inverse action: g2 g3 g2^-1 = g3 g4^-2
        let lhs = g.conjugate(&g3, &g.invert(&g2));
        assert_eq!(lhs, g.elem(&[(2, 1), (3, -2)]));
    }

    #[test]
    fn inverse_and_power_roundtrips() {
        let g = dl3();
        let xs = [
            g.elem(&[(0, 1), (1, 3), (2, -2), (3, 5)]),
            g.elem(&[(1, -7), (2, 4)]),
            g.elem(&[(0, 1), (3, -1)]),
        ];
        for x in &xs {
            assert!(g.multiply(x, &g.invert(x)).is_identity());
            assert!(g.multiply(&g.invert(x), x).is_identity());
            let p3 = g.power(x, &BigInt::from(3));
            assert_eq!(p3, g.multiply(x, &g.multiply(x, x)));
            let pm2 = g.power(x, &BigInt::from(-2));
            assert_eq!(pm2, g.invert(&g.multiply(x, x)));
        }
    }

    #[test]
    fn finite_exponents_stay_reduced() {
        let g = s3();
        for i in -10i64..10 {
            for j in -10i64..10 {
                let e = g.elem(&[(0, i), (1, j)]);
                assert!(e.exps[0] >= BigInt::zero() && e.exps[0] < BigInt::from(2));
                assert!(e.exps[1] >= BigInt::zero() && e.exps[1] < BigInt::from(3));
            }
        }
    }

    #[test]
    fn inconsistent_presentation_is_rejected()  {
        // b^a = b^2 with b of order 4 fails the power overlap:
        // conjugation by a would not be an automorphism of <b>
        let r = PcpBuilder::new(&[Some(2), Some(4)])
            .conjugation(0, 1, &[(1, 2)])
            .build();
        assert!(matches!(r, Err(PcpError::Inconsistent { .. })));
    }

    #[test]
    fn builder_structural_errors() {
        assert!(matches!(
            PcpBuilder::new(&[Some(1)]).build_unchecked(),
            Err(PcpError::BadOrder(0))
        ));
        assert!(matches!(
            PcpBuilder::new(&[Some(2), Some(2)])
                .power(1, &[(0, 1)])
                .build_unchecked(),
            Err(PcpError::BadWordIndex { .. })
        ));
        assert!(matches!(
            PcpBuilder::new(&[None, None])
                .power(0, &[(1, 1)])
                .build_unchecked(),
            Err(PcpError::PowerOnInfinite(0))
        ));
        assert!(matches!(
            PcpBuilder::new(&[None, None])
                .conjugation(0, 1, &[(1, -1)])
                .build_unchecked(),
            Err(PcpError::MissingInverseConjugation { i: 0, j: 1 })
        ));
        assert!(matches!(
            PcpBuilder::new(&[Some(2), Some(2)])
                .conjugation_inverse(0, 1, &[(1, 1)])
                .build_unchecked(),
            Err(PcpError::InverseOnFinite(0))
        ));
    }

    #[test]
    fn enumerate_respects_cap() {
        let g = s3();
        assert!(g.enumerate_elements(Some(5)).is_none());
        assert_eq!(g.enumerate_elements(Some(6)).unwrap().len(), 6);
        let _ = Arc::new(g); // presentations are shareable
    }
}
