//! Twisted conjugacy for endomorphism pairs of polycyclic groups.
//!
//! For endomorphisms phi, psi of G, elements g1 and g2 are twisted
//! conjugate when g1 = psi(h) g2 phi(h)^-1 for some h in G. Both the
//! decision procedure and the class enumeration recurse along the derived
//! series: solve the image of the problem in the abelian quotient G/N
//! first, then correct the leftover inside N. Every step is exact; the
//! only failure mode is an infinite coincidence group in some quotient,
//! which the equation solver must enumerate and cannot.

use std::sync::Arc;

use crate::abelian::{
    hom_difference, rep_twist_conj_to_id_ab, reps_reid_classes_ab, AbHom, AbelianClasses,
    AbelianError,
};
use crate::pcp::{
    AbelianQuotient, GroupMorphism, Igs, InducedSubgroup, PcpElement, PcpError, PcpPresentation,
};

fn same_group(a: &Arc<PcpPresentation>, b: &Arc<PcpPresentation>) -> bool {
    Arc::ptr_eq(a, b) || a.as_ref() == b.as_ref()
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum TwistError {
    /// The recursion must enumerate every solution of psi(h) = phi(h) in
    /// an abelian quotient along the derived series; when that coincidence
    /// group is infinite the enumeration cannot proceed.
    #[error("infinite coincidence group in the quotient at recursion depth {level}")]
    InfiniteCoincidence { level: usize },
    #[error("the two morphisms must be endomorphisms of one common group")]
    GroupMismatch,
    #[error(transparent)]
    Pcp(#[from] PcpError),
    #[error(transparent)]
    Abelian(#[from] AbelianError),
}

/// Outcome of a twisted conjugacy test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwistedResult {
    /// Some h with g1 = psi(h) g2 phi(h)^-1.
    Witness(PcpElement),
    NotConjugate,
}

/// Outcome of twisted conjugacy class enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReidemeisterResult {
    /// Pairwise inequivalent representatives, one per class.
    Finite(Vec<PcpElement>),
    Infinite,
}

/// The Reidemeister number: how many twisted conjugacy classes there are.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReidemeisterNumber {
    Finite(usize),
    Infinite,
}

impl std::fmt::Display for ReidemeisterNumber {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ReidemeisterNumber::Finite(n) => write!(f, "{n}"),
            ReidemeisterNumber::Infinite => write!(f, "infinite"),
        }
    }
}

/// Resource bounds threaded through the recursion.
#[derive(Debug, Clone, Copy, Default)]
pub struct Limits {
    /// Refuse to enumerate any finite abelian group with more elements.
    pub max_enum: Option<usize>,
}

/// An ordered pair of endomorphisms (phi, psi) of one polycyclic group.
#[derive(Debug, Clone)]
pub struct EndoPair {
    group: Arc<PcpPresentation>,
    phi: GroupMorphism,
    psi: GroupMorphism,
}

impl EndoPair {
    pub fn new(phi: GroupMorphism, psi: GroupMorphism) -> Result<EndoPair, TwistError> {
        if !phi.is_endomorphism()
            || !psi.is_endomorphism()
            || !same_group(phi.domain(), psi.domain())
        {
            return Err(TwistError::GroupMismatch);
        }
        let group = phi.domain().clone();
        Ok(EndoPair { group, phi, psi })
    }

    pub fn group(&self) -> &Arc<PcpPresentation> {
        &self.group
    }

    pub fn phi(&self) -> &GroupMorphism {
        &self.phi
    }

    pub fn psi(&self) -> &GroupMorphism {
        &self.psi
    }

    /// The pair (x -> g phi(x) g^-1, psi). Twisted conjugacy of g1 and g2
    /// under (phi, psi) is twisted conjugacy of g1 g2^-1 and the identity
    /// under the pair twisted by g2, with the same witnesses.
    pub fn twist_phi_by(&self, g: &PcpElement) -> EndoPair {
        EndoPair {
            group: self.group.clone(),
            phi: self.phi.compose_with_inner(g),
            psi: self.psi.clone(),
        }
    }

    fn restrict_to(&self, sub: &InducedSubgroup) -> Result<EndoPair, TwistError> {
        Ok(EndoPair {
            group: sub.presentation().clone(),
            phi: self.phi.restrict(sub)?,
            psi: self.psi.restrict(sub)?,
        })
    }
}

/// Check the defining equation g1 = psi(h) g2 phi(h)^-1 directly.
pub fn is_twisted_witness(
    pair: &EndoPair,
    g1: &PcpElement,
    g2: &PcpElement,
    h: &PcpElement,
) -> bool {
    let p = pair.group();
    let rhs = p.multiply(
        &p.multiply(&pair.psi.apply(h), g2),
        &p.invert(&pair.phi.apply(h)),
    );
    rhs == *g1
}

/// Decide whether g1 and g2 are twisted conjugate under the pair, and
/// produce a witness when they are.
pub fn rep_twist_conj(
    pair: &EndoPair,
    g1: &PcpElement,
    g2: &PcpElement,
) -> Result<TwistedResult, TwistError> {
    rep_twist_conj_with(pair, g1, g2, &Limits::default())
}

pub fn rep_twist_conj_with(
    pair: &EndoPair,
    g1: &PcpElement,
    g2: &PcpElement,
    limits: &Limits,
) -> Result<TwistedResult, TwistError> {
    let p = pair.group();
    let twisted = pair.twist_phi_by(g2);
    let target = p.multiply(g1, &p.invert(g2));
    let out = to_id_inner(&twisted, &target, limits, 0)?;
    if let TwistedResult::Witness(h) = &out {
        debug_assert!(is_twisted_witness(pair, g1, g2, h));
    }
    Ok(out)
}

/// Decide whether g is twisted conjugate to the identity.
pub fn rep_twist_conj_to_id(pair: &EndoPair, g: &PcpElement) -> Result<TwistedResult, TwistError> {
    rep_twist_conj_to_id_with(pair, g, &Limits::default())
}

pub fn rep_twist_conj_to_id_with(
    pair: &EndoPair,
    g: &PcpElement,
    limits: &Limits,
) -> Result<TwistedResult, TwistError> {
    to_id_inner(pair, g, limits, 0)
}

/// Like `rep_twist_conj_to_id`, but recurse along a caller-chosen normal
/// subgroup N instead of the derived subgroup. N must give an abelian
/// quotient and be invariant under both endomorphisms.
pub fn rep_twist_conj_to_id_by_normal(
    pair: &EndoPair,
    g: &PcpElement,
    n: &Igs,
) -> Result<TwistedResult, TwistError> {
    rep_twist_conj_to_id_by_normal_with(pair, g, n, &Limits::default())
}

pub fn rep_twist_conj_to_id_by_normal_with(
    pair: &EndoPair,
    g: &PcpElement,
    n: &Igs,
    limits: &Limits,
) -> Result<TwistedResult, TwistError> {
    if !same_group(pair.group(), n.parent()) {
        return Err(TwistError::GroupMismatch);
    }
    by_normal_inner(pair, g, n, limits, 0)
}

fn to_id_inner(
    pair: &EndoPair,
    g: &PcpElement,
    limits: &Limits,
    level: usize,
) -> Result<TwistedResult, TwistError> {
    let p = pair.group();
    if p.derived_length() <= 1 {
        let quot = p.abelian_quotient(&Igs::trivial(p))?;
        let phi_a = quot.induce(&pair.phi)?;
        let psi_a = quot.induce(&pair.psi)?;
        let hit = rep_twist_conj_to_id_ab(&phi_a, &psi_a, &quot.project(g))?;
        return Ok(match hit {
            // N is trivial, so the section solves the equation on the nose
            Some(hbar) => TwistedResult::Witness(quot.section(&hbar)),
            None => TwistedResult::NotConjugate,
        });
    }
    by_normal_inner(pair, g, &p.derived_subgroup(), limits, level)
}

/// One recursion step: solve in G/N, pull the leftover into N, and try
/// every coincidence lift as the middle part of the witness.
fn by_normal_inner(
    pair: &EndoPair,
    g: &PcpElement,
    n: &Igs,
    limits: &Limits,
    level: usize,
) -> Result<TwistedResult, TwistError> {
    let p = pair.group();
    let quot = p.abelian_quotient(n)?;
    let phi_a = quot.induce(&pair.phi)?;
    let psi_a = quot.induce(&pair.psi)?;
    let Some(kbar) = rep_twist_conj_to_id_ab(&phi_a, &psi_a, &quot.project(g))? else {
        return Ok(TwistedResult::NotConjugate);
    };
    let k = quot.section(&kbar);
    // psi(k)^-1 g phi(k) maps to the identity in G/N, so it lies in N
    let n0 = p.multiply(
        &p.multiply(&p.invert(&pair.psi.apply(&k)), g),
        &pair.phi.apply(&k),
    );
    debug_assert!(n.contains(&n0));
    let sub = n.induced_presentation();
    let sub_pair = pair.restrict_to(&sub)?;
    // solutions h of g = psi(h) phi(h)^-1 decompose as h = k c l with c a
    // coincidence lift and l in N, so trying every c loses nothing
    for c in coincidence_lifts(&quot, &phi_a, &psi_a, limits, level)? {
        let n1 = p.multiply(
            &p.multiply(&p.invert(&pair.psi.apply(&c)), &n0),
            &pair.phi.apply(&c),
        );
        let n1_sub = sub
            .express(&n1)
            .expect("twisting by a coincidence lift keeps the leftover in N");
        if let TwistedResult::Witness(l) = to_id_inner(&sub_pair, &n1_sub, limits, level + 1)? {
            let h = p.multiply(&p.multiply(&k, &c), &sub.embed(&l));
            debug_assert!(is_twisted_witness(pair, g, &p.identity(), &h));
            return Ok(TwistedResult::Witness(h));
        }
    }
    Ok(TwistedResult::NotConjugate)
}

/// Lifts to G of the coincidence group {h : phi(h) = psi(h)} of the pair
/// induced on G/N, one per coincidence element.
fn coincidence_lifts(
    quot: &AbelianQuotient,
    phi_a: &AbHom,
    psi_a: &AbHom,
    limits: &Limits,
    level: usize,
) -> Result<Vec<PcpElement>, TwistError> {
    let diff = hom_difference(phi_a, psi_a)?;
    let (kernel, emb) = diff.kernel();
    if !kernel.is_finite() {
        return Err(TwistError::InfiniteCoincidence { level });
    }
    let mut lifts = Vec::new();
    for y in kernel.enumerate(limits.max_enum)? {
        lifts.push(quot.section(&emb.apply(&y)));
    }
    Ok(lifts)
}

/// Lifts to G of the coincidence group of the pair induced on G/N.
pub fn quotient_coincidence_lifts(
    pair: &EndoPair,
    n: &Igs,
    limits: &Limits,
) -> Result<Vec<PcpElement>, TwistError> {
    if !same_group(pair.group(), n.parent()) {
        return Err(TwistError::GroupMismatch);
    }
    let quot = pair.group().abelian_quotient(n)?;
    let phi_a = quot.induce(pair.phi())?;
    let psi_a = quot.induce(pair.psi())?;
    coincidence_lifts(&quot, &phi_a, &psi_a, limits, 0)
}

/// Representatives of all twisted conjugacy classes, or `Infinite`.
///
/// Never fails: an infinite coincidence group in some quotient forces
/// infinitely many classes, which the enumeration reports as `Infinite`
/// before any witness search could run into it.
pub fn reps_reid_classes(pair: &EndoPair) -> ReidemeisterResult {
    reps_reid_classes_with(pair, &Limits::default())
        .expect("uncapped class enumeration only deduplicates at levels already certified finite")
}

pub fn reps_reid_classes_with(
    pair: &EndoPair,
    limits: &Limits,
) -> Result<ReidemeisterResult, TwistError> {
    classes_inner(pair, limits, 0)
}

/// Like `reps_reid_classes`, but recurse along a caller-chosen normal
/// subgroup at the top level.
pub fn reps_reid_classes_by_normal(
    pair: &EndoPair,
    n: &Igs,
) -> Result<ReidemeisterResult, TwistError> {
    reps_reid_classes_by_normal_with(pair, n, &Limits::default())
}

pub fn reps_reid_classes_by_normal_with(
    pair: &EndoPair,
    n: &Igs,
    limits: &Limits,
) -> Result<ReidemeisterResult, TwistError> {
    if !same_group(pair.group(), n.parent()) {
        return Err(TwistError::GroupMismatch);
    }
    classes_by_normal_inner(pair, n, limits, 0)
}

/// The number of twisted conjugacy classes of the pair.
pub fn reidemeister_number(pair: &EndoPair) -> ReidemeisterNumber {
    match reps_reid_classes(pair) {
        ReidemeisterResult::Finite(reps) => ReidemeisterNumber::Finite(reps.len()),
        ReidemeisterResult::Infinite => ReidemeisterNumber::Infinite,
    }
}

pub fn reidemeister_number_with(
    pair: &EndoPair,
    limits: &Limits,
) -> Result<ReidemeisterNumber, TwistError> {
    Ok(match reps_reid_classes_with(pair, limits)? {
        ReidemeisterResult::Finite(reps) => ReidemeisterNumber::Finite(reps.len()),
        ReidemeisterResult::Infinite => ReidemeisterNumber::Infinite,
    })
}

fn classes_inner(
    pair: &EndoPair,
    limits: &Limits,
    level: usize,
) -> Result<ReidemeisterResult, TwistError> {
    let p = pair.group();
    if p.derived_length() <= 1 {
        let quot = p.abelian_quotient(&Igs::trivial(p))?;
        let phi_a = quot.induce(&pair.phi)?;
        let psi_a = quot.induce(&pair.psi)?;
        return Ok(match reps_reid_classes_ab(&phi_a, &psi_a, limits.max_enum)? {
            AbelianClasses::Finite(reps) => {
                ReidemeisterResult::Finite(reps.iter().map(|a| quot.section(a)).collect())
            }
            AbelianClasses::Infinite => ReidemeisterResult::Infinite,
        });
    }
    classes_by_normal_inner(pair, &p.derived_subgroup(), limits, level)
}

/// Classes of (phi, psi) on G from classes on G/N and on N: every class
/// meets N g for exactly one quotient class representative g, and inside
/// N g the classes are the orbits of N under h -> psi(h) n (g phi(h) g^-1)^-1
/// with h running over all of G. Orbits under h in N refine those, so the
/// recursion on N yields candidates which a pairwise twisted conjugacy
/// test then merges.
fn classes_by_normal_inner(
    pair: &EndoPair,
    n: &Igs,
    limits: &Limits,
    level: usize,
) -> Result<ReidemeisterResult, TwistError> {
    let p = pair.group();
    let quot = p.abelian_quotient(n)?;
    let phi_a = quot.induce(&pair.phi)?;
    let psi_a = quot.induce(&pair.psi)?;
    let qreps = match reps_reid_classes_ab(&phi_a, &psi_a, limits.max_enum)? {
        AbelianClasses::Finite(reps) => reps,
        AbelianClasses::Infinite => return Ok(ReidemeisterResult::Infinite),
    };
    let sub = n.induced_presentation();
    let psi_n = pair.psi.restrict(&sub)?;
    let mut out = Vec::new();
    for qrep in &qreps {
        let gq = quot.section(qrep);
        let pair_g = pair.twist_phi_by(&gq);
        let sub_pair = EndoPair {
            group: sub.presentation().clone(),
            phi: pair_g.phi.restrict(&sub)?,
            psi: psi_n.clone(),
        };
        let candidates = match classes_inner(&sub_pair, limits, level + 1)? {
            ReidemeisterResult::Finite(reps) => reps,
            ReidemeisterResult::Infinite => return Ok(ReidemeisterResult::Infinite),
        };
        let mut kept: Vec<PcpElement> = Vec::new();
        'merge: for cand in &candidates {
            let lifted = sub.embed(cand);
            for prev in &kept {
                if let TwistedResult::Witness(_) =
                    rep_twist_conj_with(&pair_g, &lifted, prev, limits)?
                {
                    continue 'merge;
                }
            }
            kept.push(lifted);
        }
        for h in kept {
            out.push(p.multiply(&h, &gq));
        }
    }
    Ok(ReidemeisterResult::Finite(out))
}
