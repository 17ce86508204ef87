//! Polycyclic presentations and everything that lives on top of them:
//! collection to unique normal forms, induced generating sequences for
//! subgroups, group morphisms, and abelian quotients.

mod igs;
mod morphism;
mod presentation;
mod quotient;

pub use igs::{InducedSubgroup, Igs};
pub use morphism::GroupMorphism;
pub use presentation::{ConsistencyViolation, PcpBuilder, PcpElement, PcpPresentation, Word};
pub use quotient::AbelianQuotient;

/// Errors from presentation construction and the operations on top.
#[derive(Debug, Clone, thiserror::Error)]
pub enum PcpError {
    #[error("relative order of generator {0} must be at least 2 (or infinite)")]
    BadOrder(usize),
    #[error("relation word for generator {base} uses generator {found}; only higher generators are allowed")]
    BadWordIndex { base: usize, found: usize },
    #[error("generator index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("zero exponent in word")]
    ZeroExponent,
    #[error("duplicate relation for generator pair ({0}, {1})")]
    DuplicateRelation(usize, usize),
    #[error("power relation on infinite-order generator {0}")]
    PowerOnInfinite(usize),
    #[error("conjugation relation needs distinct acting generator below the target, got ({0}, {1})")]
    BadConjugationPair(usize, usize),
    #[error("inverse conjugation word given for finite-order generator {0}")]
    InverseOnFinite(usize),
    #[error(
        "generator {i} has infinite order and acts nontrivially on generator {j}: \
         an inverse conjugation word is required"
    )]
    MissingInverseConjugation { i: usize, j: usize },
    #[error("presentation is inconsistent ({count} failed overlap(s); first: {first})")]
    Inconsistent { count: usize, first: String },
    #[error("images do not define a homomorphism")]
    NotAHomomorphism,
    #[error("morphism image count does not match the domain generator count")]
    ImageCountMismatch,
    #[error("morphism groups do not match")]
    GroupMismatch,
    #[error("subgroup is not invariant under the morphism")]
    NotInvariant,
    #[error("quotient is not abelian: a commutator falls outside the subgroup")]
    QuotientNotAbelian,
    #[error("subgroup is not normal: a conjugate of a member falls outside it")]
    NotNormal,
}
