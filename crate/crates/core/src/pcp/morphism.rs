//! Group morphisms given by generator images, with verification that the
//! images respect the defining relations.

use num_bigint::BigInt;
use std::sync::Arc;

use super::igs::InducedSubgroup;
use super::presentation::{PcpElement, PcpPresentation};
use super::PcpError;

fn same_group(a: &Arc<PcpPresentation>, b: &Arc<PcpPresentation>) -> bool {
    Arc::ptr_eq(a, b) || a.as_ref() == b.as_ref()
}

/// A homomorphism between polycyclic groups, stored as the images of the
/// domain generators.
#[derive(Debug, Clone)]
pub struct GroupMorphism {
    domain: Arc<PcpPresentation>,
    codomain: Arc<PcpPresentation>,
    images: Vec<PcpElement>,
}

impl GroupMorphism {
    /// Build and verify: every defining relation of the domain must hold
    /// on the images.
    pub fn new(
        domain: Arc<PcpPresentation>,
        codomain: Arc<PcpPresentation>,
        images: Vec<PcpElement>,
    ) -> Result<Self, PcpError> {
        let m = Self::new_unverified(domain, codomain, images)?;
        if !m.verify() {
            return Err(PcpError::NotAHomomorphism);
        }
        Ok(m)
    }

    /// Build without checking the relations. Only for images already
    /// known to define a homomorphism; everything downstream assumes it.
    pub fn new_unverified(
        domain: Arc<PcpPresentation>,
        codomain: Arc<PcpPresentation>,
        images: Vec<PcpElement>,
    ) -> Result<Self, PcpError> {
        if images.len() != domain.generator_count() {
            return Err(PcpError::ImageCountMismatch);
        }
        for im in &images {
            if im.exponents().len() != codomain.generator_count() {
                return Err(PcpError::GroupMismatch);
            }
        }
        Ok(GroupMorphism {
            domain,
            codomain,
            images,
        })
    }

    pub fn identity(g: &Arc<PcpPresentation>) -> Self {
        GroupMorphism {
            domain: g.clone(),
            codomain: g.clone(),
            images: (0..g.generator_count()).map(|i| g.generator(i)).collect(),
        }
    }

    /// The endomorphism sending everything to the identity.
    pub fn trivial(g: &Arc<PcpPresentation>) -> Self {
        GroupMorphism {
            domain: g.clone(),
            codomain: g.clone(),
            images: vec![g.identity(); g.generator_count()],
        }
    }

    /// Conjugation x -> by^-1 x by as an (inner) automorphism.
    pub fn inner(g: &Arc<PcpPresentation>, by: &PcpElement) -> Self {
        GroupMorphism {
            domain: g.clone(),
            codomain: g.clone(),
            images: (0..g.generator_count())
                .map(|i| g.conjugate(&g.generator(i), by))
                .collect(),
        }
    }

    pub fn domain(&self) -> &Arc<PcpPresentation> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<PcpPresentation> {
        &self.codomain
    }

    pub fn is_endomorphism(&self) -> bool {
        same_group(&self.domain, &self.codomain)
    }

    pub fn generator_image(&self, i: usize) -> &PcpElement {
        &self.images[i]
    }

    fn eval_word(&self, word: &[(usize, BigInt)]) -> PcpElement {
        let mut acc = self.codomain.identity();
        for (g, e) in word {
            acc = self
                .codomain
                .multiply(&acc, &self.codomain.power(&self.images[*g], e));
        }
        acc
    }

    pub fn apply(&self, x: &PcpElement) -> PcpElement {
        self.eval_word(&x.to_word())
    }

    /// Check the defining relations on the images. The inverse
    /// conjugation words are consequences of the others for any
    /// homomorphism, but they are cheap to check and catch bad data, so
    /// they are included.
    pub fn verify(&self) -> bool {
        let n = self.domain.generator_count();
        let cod = &self.codomain;
        for i in 0..n {
            if let Some(r) = self.domain.relative_order(i) {
                let lhs = cod.power(&self.images[i], r);
                if lhs != self.eval_word(self.domain.power_word(i)) {
                    return false;
                }
            }
            for j in (i + 1)..n {
                let lhs = cod.conjugate(&self.images[j], &self.images[i]);
                if lhs != self.eval_word(self.domain.conj_word(i, j)) {
                    return false;
                }
                if let Some(w) = self.domain.conj_inv_word(i, j) {
                    let lhs = cod.conjugate(&self.images[j], &cod.invert(&self.images[i]));
                    if lhs != self.eval_word(w) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The morphism x -> g phi(x) g^-1. Stays a homomorphism, so no
    /// re-verification happens.
    pub fn compose_with_inner(&self, g: &PcpElement) -> GroupMorphism {
        let cod = &self.codomain;
        let g_inv = cod.invert(g);
        GroupMorphism {
            domain: self.domain.clone(),
            codomain: cod.clone(),
            images: self
                .images
                .iter()
                .map(|im| cod.multiply(&cod.multiply(g, im), &g_inv))
                .collect(),
        }
    }

    /// Restrict an endomorphism to an invariant subgroup, writing it in
    /// the subgroup's own presentation. Fails with `NotInvariant` when
    /// some igs member maps outside the subgroup.
    pub fn restrict(&self, sub: &InducedSubgroup) -> Result<GroupMorphism, PcpError> {
        if !same_group(&self.domain, sub.parent()) || !same_group(&self.codomain, sub.parent()) {
            return Err(PcpError::GroupMismatch);
        }
        let mut images = Vec::with_capacity(sub.igs().members().len());
        for u in sub.igs().members() {
            let img = self.apply(u);
            images.push(sub.express(&img).ok_or(PcpError::NotInvariant)?);
        }
        // a restriction of a homomorphism is one; skip re-verification
        Ok(GroupMorphism {
            domain: sub.presentation().clone(),
            codomain: sub.presentation().clone(),
            images,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcp::presentation::PcpBuilder;

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

    #[test]
    fn identity_and_inner() {
        let g = dl3();
        let id = GroupMorphism::identity(&g);
        assert!(id.verify());
        let x = g.elem(&[(0, 1), (1, 3), (2, -1), (3, 2)]);
        assert_eq!(id.apply(&x), x);

        let inner = GroupMorphism::inner(&g, &g.generator(0));
        assert!(inner.verify());
        assert_eq!(inner.apply(&g.generator(1)), g.elem(&[(1, -1)]));

        let tr = GroupMorphism::trivial(&g);
        assert!(tr.verify());
        assert!(tr.apply(&x).is_identity());
    }

    #[test]
    fn rejects_non_homomorphism() {
        let g = dl3();
        // g1 -> g2 does not respect g1^2 = g4
        let images = vec![
            g.generator(1),
            g.generator(1),
            g.generator(2),
            g.generator(3),
        ];
        let r = GroupMorphism::new(g.clone(), g.clone(), images);
        assert!(matches!(r, Err(PcpError::NotAHomomorphism)));
    }

    #[test]
    fn sample_endomorphisms_verify() {
        let g = dl3();
        // two endomorphisms used throughout the integration tests; both
        // must pass relation verification
        let phi = GroupMorphism::new(
            g.clone(),
            g.clone(),
            vec![
                g.elem(&[(0, 1), (3, -1)]),
                g.elem(&[(2, 1)]),
                g.elem(&[(1, 1), (2, 3), (3, 3)]),
                g.elem(&[(3, -1)]),
            ],
        );
        assert!(phi.is_ok(), "{:?}", phi.err());
        let psi = GroupMorphism::new(
            g.clone(),
            g.clone(),
            vec![
                g.elem(&[(0, 1)]),
                g.elem(&[(1, 2), (2, 1), (3, 2)]),
                g.elem(&[(1, 1), (2, 1), (3, 1)]),
                g.elem(&[(3, 1)]),
            ],
        );
        assert!(psi.is_ok(), "{:?}", psi.err());
    }

    #[test]
    fn restrict_to_derived_subgroup() {
        let g = dl3();
        let sub = g.derived_subgroup().induced_presentation();
        let inner = GroupMorphism::inner(&g, &g.generator(0));
        let res = inner.restrict(&sub).unwrap();
        assert!(res.verify());
        // (g2^2)^(g1) = g2^-2: in subgroup coordinates u1 -> u1^-1
        assert_eq!(
            res.apply(&sub.presentation().generator(0)),
            sub.presentation().elem(&[(0, -1)])
        );
        // embedding commutes with the restriction
        let x = sub.presentation().elem(&[(0, 2), (1, 1), (2, -3)]);
        assert_eq!(sub.embed(&res.apply(&x)), inner.apply(&sub.embed(&x)));
    }

    #[test]
    fn restriction_requires_invariance() {
        let g = dl3();
        // <g2^2> is closed under conjugation by g1 but not by g3:
        // (g2^2)^(g3) = g2^2 g4^-4 falls outside
        let h = crate::pcp::Igs::from_generators(&g, &[g.elem(&[(1, 2)])]);
        let sub = h.induced_presentation();
        let by_g1 = GroupMorphism::inner(&g, &g.generator(0));
        assert!(by_g1.restrict(&sub).is_ok());
        let by_g3 = GroupMorphism::inner(&g, &g.generator(2));
        assert!(matches!(
            by_g3.restrict(&sub),
            Err(PcpError::NotInvariant)
        ));
        // restricting a morphism of a different group fails early
        let other = Arc::new(PcpBuilder::new(&[Some(2)]).build().unwrap());
        let id_other = GroupMorphism::identity(&other);
        assert!(matches!(
            id_other.restrict(&sub),
            Err(PcpError::GroupMismatch)
        ));
    }
}
