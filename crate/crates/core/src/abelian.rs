//! Finitely generated abelian groups presented by integer relation
//! matrices, with canonical coordinates coming from the Smith normal
//! form. On top of the groups: homomorphisms with exact kernels and
//! cokernels, and the twisted-conjugacy operations that the general
//! algorithm delegates to once a group is abelian.
//!
//! A group on m generators with relation matrix R (columns = relators)
//! is Z^m / col(R). With U R V = S in Smith form, y = U x is a
//! coordinate change under which the relation lattice becomes
//! diag(d1..dk) Z^k, so reducing y componentwise modulo the nonzero
//! invariant factors yields one canonical tuple per group element.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;
use std::sync::Arc;

use crate::intlinalg::{kernel_basis, lattice_member, snf_full, solve, IntMatrix};

#[derive(Debug, Clone, thiserror::Error)]
pub enum AbelianError {
    #[error("abelian groups do not match")]
    GroupMismatch,
    #[error("matrix does not map the relation lattice into the codomain lattice")]
    NotWellDefined,
    #[error("matrix dimensions do not fit the groups")]
    DimensionMismatch,
    #[error("group is infinite")]
    InfiniteGroup,
    #[error("enumeration of {size} elements exceeds the cap of {cap}")]
    EnumerationTooLarge { size: BigInt, cap: usize },
}

/// Element in canonical coordinates: one entry per generator, reduced
/// modulo the invariant factor at each finite position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbElement {
    coords: Vec<BigInt>,
}

impl AbElement {
    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

impl fmt::Display for AbElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}

/// Finitely generated abelian group Z^gens / col(relations).
#[derive(Debug, Clone)]
pub struct FgAbelianGroup {
    gens: usize,
    relations: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    /// Invariant factor per canonical coordinate; 0 marks a free position.
    factors: Vec<BigInt>,
}

impl PartialEq for FgAbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens && self.relations == other.relations
    }
}
impl Eq for FgAbelianGroup {}

impl FgAbelianGroup {
    pub fn new(gens: usize, relations: IntMatrix) -> Self {
        assert_eq!(
            relations.rows(),
            gens,
            "relation columns must have one entry per generator"
        );
        let snf = snf_full(&relations);
        let mut factors = snf.d.clone();
        factors.resize(gens, BigInt::zero());
        FgAbelianGroup {
            gens,
            relations,
            u: snf.u,
            u_inv: snf.u_inv,
            factors,
        }
    }

    pub fn free(rank: usize) -> Self {
        Self::new(rank, IntMatrix::zeros(rank, 0))
    }

    pub fn cyclic(order: u64) -> Self {
        Self::new(1, IntMatrix::from_rows(&[&[order as i64]]))
    }

    pub fn generator_count(&self) -> usize {
        self.gens
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    /// Invariant factor of each canonical coordinate (1 entries are
    /// collapsed positions, 0 entries are free).
    pub fn factors(&self) -> &[BigInt] {
        &self.factors
    }

    fn reduce(&self, mut y: Vec<BigInt>) -> AbElement {
        for (c, f) in y.iter_mut().zip(&self.factors) {
            if !f.is_zero() {
                *c = c.mod_floor(f);
            }
        }
        AbElement { coords: y }
    }

    /// Element named by generator coordinates (an integer combination of
    /// the presentation generators).
    pub fn element(&self, gen_coords: &[BigInt]) -> AbElement {
        assert_eq!(gen_coords.len(), self.gens, "coordinate count mismatch");
        self.reduce(self.u.mul_vec(gen_coords))
    }

    pub fn element_from_i64(&self, gen_coords: &[i64]) -> AbElement {
        let v: Vec<BigInt> = gen_coords.iter().map(|&c| BigInt::from(c)).collect();
        self.element(&v)
    }

    pub fn zero(&self) -> AbElement {
        AbElement {
            coords: vec![BigInt::zero(); self.gens],
        }
    }

    /// One choice of generator coordinates mapping back to the element.
    pub fn generator_coords(&self, a: &AbElement) -> Vec<BigInt> {
        assert_eq!(a.coords.len(), self.gens, "coordinate count mismatch");
        self.u_inv.mul_vec(&a.coords)
    }

    pub fn add(&self, a: &AbElement, b: &AbElement) -> AbElement {
        let y = a
            .coords
            .iter()
            .zip(&b.coords)
            .map(|(x, y)| x + y)
            .collect();
        self.reduce(y)
    }

    pub fn neg(&self, a: &AbElement) -> AbElement {
        self.reduce(a.coords.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, a: &AbElement, b: &AbElement) -> AbElement {
        self.add(a, &self.neg(b))
    }

    pub fn is_finite(&self) -> bool {
        self.factors.iter().all(|f| !f.is_zero())
    }

    pub fn order(&self) -> Option<BigInt> {
        let mut acc = BigInt::one();
        for f in &self.factors {
            if f.is_zero() {
                return None;
            }
            acc *= f;
        }
        Some(acc)
    }

    /// Number of free canonical coordinates: the torsion-free rank.
    pub fn hirsch_length(&self) -> usize {
        self.factors.iter().filter(|f| f.is_zero()).count()
    }

    /// All elements of a finite group, identity first, in mixed-radix
    /// order of canonical coordinates. `cap` bounds how many elements the
    /// caller is willing to materialize.
    pub fn enumerate(&self, cap: Option<usize>) -> Result<Vec<AbElement>, AbelianError> {
        let size = self.order().ok_or(AbelianError::InfiniteGroup)?;
        let hard_cap = cap.unwrap_or(usize::MAX);
        let n = size.to_usize().filter(|&n| n <= hard_cap).ok_or(
            AbelianError::EnumerationTooLarge {
                size: size.clone(),
                cap: hard_cap,
            },
        )?;
        let mut out = Vec::with_capacity(n);
        let mut cur = vec![BigInt::zero(); self.gens];
        loop {
            out.push(AbElement { coords: cur.clone() });
            let mut i = self.gens;
            loop {
                if i == 0 {
                    debug_assert_eq!(out.len(), n);
                    return Ok(out);
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < self.factors[i] {
                    break;
                }
                cur[i] = BigInt::zero();
            }
        }
    }
}

fn same_group(a: &Arc<FgAbelianGroup>, b: &Arc<FgAbelianGroup>) -> bool {
    Arc::ptr_eq(a, b) || a.as_ref() == b.as_ref()
}

/// Homomorphism between finitely generated abelian groups, stored as an
/// integer matrix acting on generator coordinates.
#[derive(Debug, Clone)]
pub struct AbHom {
    domain: Arc<FgAbelianGroup>,
    codomain: Arc<FgAbelianGroup>,
    matrix: IntMatrix,
}

impl AbHom {
    /// Build and check well-definedness: the matrix must send every
    /// domain relation into the codomain's relation lattice.
    pub fn new(
        domain: Arc<FgAbelianGroup>,
        codomain: Arc<FgAbelianGroup>,
        matrix: IntMatrix,
    ) -> Result<Self, AbelianError> {
        if matrix.rows() != codomain.gens || matrix.cols() != domain.gens {
            return Err(AbelianError::DimensionMismatch);
        }
        for j in 0..domain.relations.cols() {
            let img = matrix.mul_vec(&domain.relations.column(j));
            if lattice_member(&codomain.relations, &img).is_none() {
                return Err(AbelianError::NotWellDefined);
            }
        }
        Ok(AbHom {
            domain,
            codomain,
            matrix,
        })
    }

    pub fn identity(g: &Arc<FgAbelianGroup>) -> Self {
        AbHom {
            domain: g.clone(),
            codomain: g.clone(),
            matrix: IntMatrix::identity(g.gens),
        }
    }

    pub fn domain(&self) -> &Arc<FgAbelianGroup> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FgAbelianGroup> {
        &self.codomain
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, a: &AbElement) -> AbElement {
        let x = self.domain.generator_coords(a);
        self.codomain.element(&self.matrix.mul_vec(&x))
    }

    /// Kernel as a group of its own plus the embedding into the domain.
    ///
    /// Generators of the kernel are the projections to the domain factor
    /// of a basis for ker[M | R_cod]; their own relations are the
    /// combinations landing in the domain's relation lattice.
    pub fn kernel(&self) -> (Arc<FgAbelianGroup>, AbHom) {
        let m = self.domain.gens;
        let stacked = self.matrix.hconcat(&self.codomain.relations);
        let kb = kernel_basis(&stacked);
        let gens_mat = take_top_rows(&kb, m);
        let rel_stacked = gens_mat.hconcat(&self.domain.relations);
        let kb2 = kernel_basis(&rel_stacked);
        let rels = take_top_rows(&kb2, gens_mat.cols());
        let kgroup = Arc::new(FgAbelianGroup::new(gens_mat.cols(), rels));
        let embed = AbHom {
            domain: kgroup.clone(),
            codomain: self.domain.clone(),
            matrix: gens_mat,
        };
        (kgroup, embed)
    }

    /// Cokernel: the codomain with the image adjoined to its relations,
    /// plus the projection onto it.
    pub fn cokernel(&self) -> (Arc<FgAbelianGroup>, AbHom) {
        let rels = self.codomain.relations.hconcat(&self.matrix);
        let q = Arc::new(FgAbelianGroup::new(self.codomain.gens, rels));
        let proj = AbHom {
            domain: self.codomain.clone(),
            codomain: q.clone(),
            matrix: IntMatrix::identity(self.codomain.gens),
        };
        (q, proj)
    }
}

fn take_top_rows(m: &IntMatrix, rows: usize) -> IntMatrix {
    let mut out = IntMatrix::zeros(rows, m.cols());
    for i in 0..rows {
        for j in 0..m.cols() {
            out[(i, j)] = m[(i, j)].clone();
        }
    }
    out
}

/// psi - phi as a homomorphism (well-defined whenever both arguments
/// are, so no recheck).
pub fn hom_difference(phi: &AbHom, psi: &AbHom) -> Result<AbHom, AbelianError> {
    if !same_group(&phi.domain, &psi.domain) || !same_group(&phi.codomain, &psi.codomain) {
        return Err(AbelianError::GroupMismatch);
    }
    Ok(AbHom {
        domain: phi.domain.clone(),
        codomain: phi.codomain.clone(),
        matrix: psi.matrix.sub(&phi.matrix),
    })
}

/// Some h with psi(h) - phi(h) = g, or `None` when no such h exists.
/// For abelian groups this settles twisted conjugacy of g and 0 exactly.
pub fn rep_twist_conj_to_id_ab(
    phi: &AbHom,
    psi: &AbHom,
    g: &AbElement,
) -> Result<Option<AbElement>, AbelianError> {
    let diff = hom_difference(phi, psi)?;
    if !same_group(&diff.domain, &diff.codomain) {
        return Err(AbelianError::GroupMismatch);
    }
    let group = &diff.domain;
    let target = group.generator_coords(g);
    let stacked = diff.matrix.hconcat(&group.relations);
    Ok(solve(&stacked, &target).map(|sol| group.element(&sol[..group.gens])))
}

/// Twisted conjugacy class representatives for an abelian pair: one
/// element per coset of im(psi - phi), when there are finitely many.
pub enum AbelianClasses {
    Finite(Vec<AbElement>),
    Infinite,
}

pub fn reps_reid_classes_ab(
    phi: &AbHom,
    psi: &AbHom,
    cap: Option<usize>,
) -> Result<AbelianClasses, AbelianError> {
    let diff = hom_difference(phi, psi)?;
    if !same_group(&diff.domain, &diff.codomain) {
        return Err(AbelianError::GroupMismatch);
    }
    let (coker, _proj) = diff.cokernel();
    if !coker.is_finite() {
        return Ok(AbelianClasses::Infinite);
    }
    let group = diff.domain.clone();
    let mut reps = Vec::new();
    for y in coker.enumerate(cap)? {
        // distinct cokernel elements lift to distinct class representatives
        let lift = coker.generator_coords(&y);
        reps.push(group.element(&lift));
    }
    Ok(AbelianClasses::Finite(reps))
}
