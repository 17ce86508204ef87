//! Exact-arithmetic decision procedures for twisted conjugacy in
//! polycyclic groups.
//!
//! The crate is organised bottom-up:
//!
//! * [`intlinalg`]: integer matrices, Hermite and Smith normal forms,
//!   linear system solving over Z.
//! * [`pcp`]: polycyclic presentations, collection to normal form,
//!   induced subgroup sequences, morphisms, abelian quotients.
//! * [`abelian`]: finitely generated abelian groups as relation
//!   lattices, homomorphism kernels/cokernels, twisted conjugacy in the
//!   abelian case.
//! * [`twisted`]: twisted conjugacy and Reidemeister class
//!   enumeration for endomorphism pairs of polycyclic groups, recursing
//!   along the derived series.
//! * [`oracle`]: brute-force reference implementation on finite
//!   groups, plus corpus generation for randomized cross-checks.
//! * [`samples`]: small ready-made presentations used in tests,
//!   benchmarks and the bundled example problems.

pub mod abelian;
pub mod intlinalg;
pub mod oracle;
pub mod pcp;
pub mod samples;
pub mod twisted;

pub use abelian::{AbElement, AbHom, AbelianError, FgAbelianGroup};
pub use intlinalg::{HermiteDecomposition, IntMatrix, SmithDecomposition};
pub use pcp::{
    AbelianQuotient, GroupMorphism, Igs, InducedSubgroup, PcpBuilder, PcpElement, PcpError,
    PcpPresentation,
};
pub use twisted::{
    is_twisted_witness, quotient_coincidence_lifts, reidemeister_number, reidemeister_number_with,
    rep_twist_conj, rep_twist_conj_to_id, rep_twist_conj_to_id_by_normal,
    rep_twist_conj_to_id_by_normal_with, rep_twist_conj_to_id_with, rep_twist_conj_with,
    reps_reid_classes, reps_reid_classes_by_normal, reps_reid_classes_by_normal_with,
    reps_reid_classes_with, EndoPair, Limits, ReidemeisterNumber, ReidemeisterResult, TwistError,
    TwistedResult,
};
pub use oracle::{
    brute_classes, brute_witness, compare_with_brute_force, endomorphism_pool,
    random_finite_group, BruteClasses, FiniteGroupTable,
};
