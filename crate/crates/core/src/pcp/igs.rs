//! Induced generating sequences (igs) for subgroups of a polycyclic
//! group, and presentations induced on them.
//!
//! An igs is a list of subgroup elements with strictly increasing leading
//! indices, closed in the sense that membership testing reduces to
//! repeated division at leading positions: an element lies in the
//! subgroup exactly when `sift` drives it to the identity. The list is
//! canonicalized (leading exponents minimal positive, entries above each
//! deeper leading position reduced into range), so two subgroups are
//! equal exactly when their igs lists are equal.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::sync::Arc;

use super::presentation::{PcpBuilder, PcpElement, PcpPresentation, Word};

/// Canonical induced generating sequence of a subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Igs {
    parent: Arc<PcpPresentation>,
    members: Vec<PcpElement>,
}

/// Work table during igs construction: at most one element per leading
/// index. Inserting keeps the table's span a subgroup-generating set and
/// refines leading exponents (gcd steps) until every insert sinks.
struct SlotTable<'p> {
    p: &'p PcpPresentation,
    slots: Vec<Option<PcpElement>>,
}

impl<'p> SlotTable<'p> {
    fn new(p: &'p PcpPresentation) -> Self {
        SlotTable {
            p,
            slots: vec![None; p.generator_count()],
        }
    }

    /// Fold one element into the table. Returns true when a slot changed.
    fn insert(&mut self, x: PcpElement) -> bool {
        let mut changed = false;
        let mut work = vec![x];
        while let Some(x) = work.pop() {
            let Some(l) = x.leading_index() else { continue };
            let a = x.exps[l].clone();
            match self.slots[l].clone() {
                None => {
                    changed = true;
                    match self.p.relative_order(l) {
                        Some(r) => {
                            // normalize the leading exponent to gcd(a, r)
                            let d = a.gcd(r);
                            let y = if d == a {
                                x.clone()
                            } else {
                                let rd = r / &d;
                                let eg = (&a / &d).extended_gcd(&rd);
                                debug_assert!(eg.gcd.is_one());
                                self.p.power(&x, &eg.x.mod_floor(&rd))
                            };
                            debug_assert_eq!(y.exps[l], d);
                            let q = &a / &d;
                            self.slots[l] = Some(y.clone());
                            if !q.is_one() || y != x {
                                work.push(self.p.multiply(&self.p.power(&y, &-q), &x));
                            }
                            work.push(self.p.power(&y, &(r / &d)));
                        }
                        None => {
                            let y = if a.is_negative() { self.p.invert(&x) } else { x };
                            self.slots[l] = Some(y);
                        }
                    }
                }
                Some(u) => {
                    let b = u.exps[l].clone();
                    if (&a % &b).is_zero() {
                        // sinks below l; no slot change
                        let q = &a / &b;
                        work.push(self.p.multiply(&self.p.power(&u, &-q), &x));
                    } else {
                        changed = true;
                        let eg = a.extended_gcd(&b);
                        let d = eg.gcd;
                        let y = self
                            .p
                            .multiply(&self.p.power(&x, &eg.x), &self.p.power(&u, &eg.y));
                        debug_assert_eq!(y.exps[l], d);
                        self.slots[l] = Some(y.clone());
                        work.push(self.p.multiply(&self.p.power(&y, &(-&a / &d)), &x));
                        work.push(self.p.multiply(&self.p.power(&y, &(-&b / &d)), &u));
                        if let Some(r) = self.p.relative_order(l) {
                            work.push(self.p.power(&y, &(r / &d)));
                        }
                    }
                }
            }
        }
        changed
    }

    fn current_members(&self) -> Vec<PcpElement> {
        self.slots.iter().flatten().cloned().collect()
    }

    /// Close the table under conjugation by the given elements (both
    /// signs), so sifting can move table members past one another.
    fn close_under(&mut self, conjugators: &[PcpElement]) {
        let inverses: Vec<PcpElement> =
            conjugators.iter().map(|c| self.p.invert(c)).collect();
        loop {
            let mut changed = false;
            let members = self.current_members();
            for w in &members {
                for c in conjugators.iter().chain(inverses.iter()) {
                    changed |= self.insert(self.p.conjugate(w, c));
                }
            }
            if !changed {
                break;
            }
        }
    }

    /// Close under conjugation by the table's own members, refreshing the
    /// conjugator set as slots change.
    fn close_internally(&mut self) {
        loop {
            let before = self.current_members();
            self.close_under(&before);
            if self.current_members() == before {
                break;
            }
        }
    }

    /// Canonical right-reduction: bring every member's exponent at each
    /// deeper member's leading position into [0, leading exponent).
    /// Right-multiplying by a deeper member leaves all earlier positions
    /// untouched, so one ascending pass per member suffices.
    fn finish(self, parent: &Arc<PcpPresentation>) -> Igs {
        let mut members = self.current_members();
        for s in 0..members.len() {
            for t in (s + 1)..members.len() {
                let lt = members[t].leading_index().unwrap();
                let bt = members[t].exps[lt].clone();
                let q = members[s].exps[lt].div_floor(&bt);
                if !q.is_zero() {
                    members[s] = parent.multiply(&members[s], &parent.power(&members[t], &-q));
                }
            }
        }
        Igs {
            parent: parent.clone(),
            members,
        }
    }
}

impl Igs {
    /// Igs of the subgroup generated by `gens`. The generated subgroup
    /// need not be normal in the parent.
    pub fn from_generators(parent: &Arc<PcpPresentation>, gens: &[PcpElement]) -> Igs {
        let mut tab = SlotTable::new(parent);
        for g in gens {
            tab.insert(g.clone());
        }
        tab.close_internally();
        tab.finish(parent)
    }

    /// Igs of the normal closure of `gens` in the parent group.
    pub fn normal_closure(parent: &Arc<PcpPresentation>, gens: &[PcpElement]) -> Igs {
        let mut tab = SlotTable::new(parent);
        for g in gens {
            tab.insert(g.clone());
        }
        let conjugators: Vec<PcpElement> =
            (0..parent.generator_count()).map(|i| parent.generator(i)).collect();
        tab.close_under(&conjugators);
        tab.finish(parent)
    }

    pub fn trivial(parent: &Arc<PcpPresentation>) -> Igs {
        Igs {
            parent: parent.clone(),
            members: Vec::new(),
        }
    }

    pub fn parent(&self) -> &Arc<PcpPresentation> {
        &self.parent
    }

    pub fn members(&self) -> &[PcpElement] {
        &self.members
    }

    pub fn is_trivial(&self) -> bool {
        self.members.is_empty()
    }

    fn member_by_lead(&self, l: usize) -> Option<usize> {
        self.members
            .iter()
            .position(|m| m.leading_index() == Some(l))
    }

    /// Reduce an element by the igs from the left. The residue is the
    /// identity exactly for subgroup members.
    pub fn sift(&self, x: &PcpElement) -> PcpElement {
        let mut x = x.clone();
        loop {
            let Some(l) = x.leading_index() else { return x };
            let Some(t) = self.member_by_lead(l) else { return x };
            let u = &self.members[t];
            let (a, b) = (&x.exps[l], &u.exps[l]);
            if !(a % b).is_zero() {
                return x;
            }
            let q = a / b;
            x = self.parent.multiply(&self.parent.power(u, &-q), &x);
        }
    }

    pub fn contains(&self, x: &PcpElement) -> bool {
        self.sift(x).is_identity()
    }

    /// Write a subgroup member as a product of igs members: the returned
    /// coefficients c satisfy x = members[0]^c0 * ... * members[m-1]^c(m-1),
    /// and are normal-form coordinates for the induced presentation.
    /// `None` when x is not in the subgroup.
    pub fn express(&self, x: &PcpElement) -> Option<Vec<BigInt>> {
        let mut coeffs = vec![BigInt::zero(); self.members.len()];
        let mut x = x.clone();
        loop {
            let Some(l) = x.leading_index() else { return Some(coeffs) };
            let t = self.member_by_lead(l)?;
            let u = &self.members[t];
            let (a, b) = (&x.exps[l], &u.exps[l]);
            if !(a % b).is_zero() {
                return None;
            }
            let q = a / b;
            x = self.parent.multiply(&self.parent.power(u, &-&q), &x);
            coeffs[t] = q;
        }
    }

    /// Product of igs member powers for a coefficient vector.
    pub fn evaluate(&self, coeffs: &[BigInt]) -> PcpElement {
        assert_eq!(coeffs.len(), self.members.len());
        let mut acc = self.parent.identity();
        for (u, c) in self.members.iter().zip(coeffs) {
            if !c.is_zero() {
                acc = self.parent.multiply(&acc, &self.parent.power(u, c));
            }
        }
        acc
    }

    /// Build the presentation the subgroup inherits: one generator per igs
    /// member, relations read off by expressing powers and conjugates of
    /// members back in the igs. Consistency is inherited from the parent
    /// because normal-form coordinates biject with subgroup elements.
    pub fn induced_presentation(&self) -> InducedSubgroup {
        let p = &self.parent;
        let m = self.members.len();
        let orders: Vec<Option<BigInt>> = self
            .members
            .iter()
            .map(|u| {
                let l = u.leading_index().unwrap();
                p.relative_order(l).map(|r| r / &u.exps[l])
            })
            .collect();
        let mut builder = PcpBuilder::with_orders(orders.clone());
        let word_above = |floor: usize, coeffs: &[BigInt]| -> Word {
            debug_assert!(coeffs[..floor].iter().all(|c| c.is_zero()));
            coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(t, c)| (t, c.clone()))
                .collect()
        };
        for t in 0..m {
            let u = &self.members[t];
            if let Some(rho) = &orders[t] {
                let img = p.power(u, rho);
                let coeffs = self
                    .express(&img)
                    .expect("power of an igs member stays in the subgroup");
                let w = word_above(t + 1, &coeffs);
                if !w.is_empty() {
                    builder = builder.power_word(t, w);
                }
            }
            for (s, order_s) in orders.iter().enumerate().take(t) {
                let us = &self.members[s];
                let coeffs = self
                    .express(&p.conjugate(u, us))
                    .expect("conjugate of an igs member stays in the subgroup");
                let w = word_above(s + 1, &coeffs);
                let trivial = w.len() == 1 && w[0].0 == t && w[0].1.is_one();
                if !trivial {
                    builder = builder.conjugation_word(s, t, w);
                }
                if order_s.is_none() {
                    let coeffs = self
                        .express(&p.conjugate(u, &p.invert(us)))
                        .expect("conjugate of an igs member stays in the subgroup");
                    let wi = word_above(s + 1, &coeffs);
                    let wi_trivial = wi.len() == 1 && wi[0].0 == t && wi[0].1.is_one();
                    if !(trivial && wi_trivial) {
                        builder = builder.conjugation_inverse_word(s, t, wi);
                    }
                }
            }
        }
        let presentation = builder
            .build_unchecked()
            .expect("induced presentation is structurally valid");
        InducedSubgroup {
            igs: self.clone(),
            presentation: Arc::new(presentation),
        }
    }
}

/// A subgroup carrying its own polycyclic presentation together with the
/// igs that embeds it in the parent.
#[derive(Debug, Clone)]
pub struct InducedSubgroup {
    igs: Igs,
    presentation: Arc<PcpPresentation>,
}

impl InducedSubgroup {
    pub fn igs(&self) -> &Igs {
        &self.igs
    }

    pub fn presentation(&self) -> &Arc<PcpPresentation> {
        &self.presentation
    }

    pub fn parent(&self) -> &Arc<PcpPresentation> {
        self.igs.parent()
    }

    /// Map subgroup coordinates to the parent element they name.
    pub fn embed(&self, x: &PcpElement) -> PcpElement {
        self.igs.evaluate(&x.exps)
    }

    /// Write a parent element in subgroup coordinates, if it is a member.
    pub fn express(&self, x: &PcpElement) -> Option<PcpElement> {
        self.igs.express(x).map(|exps| PcpElement { exps })
    }
}

impl PcpPresentation {
    /// Igs of the derived subgroup: normal closure of the generator
    /// commutators.
    pub fn derived_subgroup(self: &Arc<Self>) -> Igs {
        let n = self.generator_count();
        let mut comms = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let c = self.commutator(&self.generator(i), &self.generator(j));
                if !c.is_identity() {
                    comms.push(c);
                }
            }
        }
        Igs::normal_closure(self, &comms)
    }

    /// Length of the derived series (0 for the trivial group, 1 for
    /// nontrivial abelian groups, and so on).
    pub fn derived_length(self: &Arc<Self>) -> usize {
        if self.generator_count() == 0 {
            return 0;
        }
        let d = self.derived_subgroup();
        if d.is_trivial() {
            return 1;
        }
        1 + d.induced_presentation().presentation().derived_length()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcp::presentation::PcpBuilder;

    fn s3() -> Arc<PcpPresentation> {
        Arc::new(
            PcpBuilder::new(&[Some(2), Some(3)])
                .conjugation(0, 1, &[(1, 2)])
                .build()
                .unwrap(),
        )
    }

    fn dl3() -> Arc<PcpPresentation> {
        Arc::new(
            PcpBuilder::new(&[Some(2), None, None, None])
                .power(0, &[(3, 1)])
                .conjugation(0, 1, &[(1, -1)])
                .conjugation(0, 2, &[(2, -1)])
                .conjugation(1, 2, &[(2, 1), (3, 2)])
                .conjugation_inverse(1, 2, &[(2, 1), (3, -2)])
                .build()
                .unwrap(),
        )
    }

    fn infinite_dihedral() -> Arc<PcpPresentation> {
        Arc::new(
            PcpBuilder::new(&[Some(2), None])
                .conjugation(0, 1, &[(1, -1)])
                .build()
                .unwrap(),
        )
    }

    #[test]
    fn s3_derived_subgroup() {
        let g = s3();
        let d = g.derived_subgroup();
        // the commutator subgroup of S3 is the alternating subgroup <b>
        assert_eq!(d.members(), &[g.generator(1)]);
        assert!(d.contains(&g.elem(&[(1, 2)])));
        assert!(!d.contains(&g.generator(0)));
        let sub = d.induced_presentation();
        assert_eq!(sub.presentation().generator_count(), 1);
        assert_eq!(
            sub.presentation().relative_order(0),
            Some(&BigInt::from(3))
        );
        assert_eq!(g.derived_length(), 2);
    }

    #[test]
    fn normal_closure_in_infinite_dihedral() {
        let g = infinite_dihedral();
        let a = g.generator(0);
        let b = g.generator(1);
        // <a> itself is not normal; its closure adds b^2
        let n = Igs::normal_closure(&g, std::slice::from_ref(&a));
        assert_eq!(n.members(), &[a.clone(), g.elem(&[(1, 2)])]);
        assert!(n.contains(&g.elem(&[(0, 1), (1, 4)])));
        assert!(!n.contains(&b));
        // the subgroup generated by a alone has order 2
        let h = Igs::from_generators(&g, std::slice::from_ref(&a));
        assert_eq!(h.members(), &[a]);
        assert!(!h.contains(&g.elem(&[(1, 2)])));
    }

    #[test]
    fn dl3_derived_series() {
        let g = dl3();
        let d = g.derived_subgroup();
        assert_eq!(
            d.members(),
            &[g.elem(&[(1, 2)]), g.elem(&[(2, 2)]), g.elem(&[(3, 2)])]
        );
        let sub = d.induced_presentation();
        assert!(sub.presentation().is_consistent());
        assert_eq!(sub.presentation().hirsch_length(), 3);
        // second derived subgroup is <g4^8>, and the series stops there
        let d2 = sub.presentation().derived_subgroup();
        assert_eq!(d2.members().len(), 1);
        assert_eq!(sub.embed(&d2.members()[0].clone()), g.elem(&[(3, 8)]));
        assert_eq!(g.derived_length(), 3);
    }

    #[test]
    fn express_embed_roundtrip() {
        let g = dl3();
        let d = g.derived_subgroup();
        let sub = d.induced_presentation();
        let x = g.elem(&[(1, 4), (2, -2), (3, 6)]);
        let coords = sub.express(&x).unwrap();
        assert_eq!(sub.embed(&coords), x);
        // a nonmember has no coordinates
        assert!(sub.express(&g.elem(&[(1, 1)])).is_none());
        // subgroup arithmetic matches parent arithmetic through embed
        let y = g.elem(&[(1, 2), (3, -4)]);
        let (xs, ys) = (sub.express(&x).unwrap(), sub.express(&y).unwrap());
        let prod_inside = sub.presentation().multiply(&xs, &ys);
        assert_eq!(sub.embed(&prod_inside), g.multiply(&x, &y));
    }

    #[test]
    fn igs_is_canonical_across_generating_sets() {
        let g = dl3();
        // same subgroup from different generating sets
        let n1 = Igs::normal_closure(&g, &[g.elem(&[(1, 2)]), g.elem(&[(2, 2)]), g.elem(&[(3, 2)])]);
        let n2 = Igs::normal_closure(&g, &[g.elem(&[(1, 2), (2, 2)]), g.elem(&[(2, 2), (3, 4)]), g.elem(&[(3, -2)])]);
        assert_eq!(n1, n2);
        let d = g.derived_subgroup();
        assert_eq!(n1, d);
    }

    #[test]
    fn whole_group_igs() {
        let g = dl3();
        let whole = Igs::from_generators(&g, &(0..4).map(|i| g.generator(i)).collect::<Vec<_>>());
        assert_eq!(whole.members().len(), 4);
        let sub = whole.induced_presentation();
        // the induced presentation of the whole group is the group itself
        assert_eq!(sub.presentation().as_ref(), g.as_ref());
        assert!(Igs::trivial(&g).is_trivial());
    }
}
