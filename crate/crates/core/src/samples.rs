//! Ready-made presentations and endomorphism pairs used by tests,
//! benchmarks and the bundled example problems.

use std::sync::Arc;

use crate::pcp::{GroupMorphism, PcpBuilder, PcpPresentation};

/// Cyclic group of the given order.
pub fn cyclic(order: u64) -> Arc<PcpPresentation> {
    Arc::new(PcpBuilder::new(&[Some(order)]).build().unwrap())
}

/// Free abelian group of the given rank.
pub fn free_abelian(rank: usize) -> Arc<PcpPresentation> {
    Arc::new(PcpBuilder::new(&vec![None; rank]).build().unwrap())
}

/// Symmetric group on three letters: a^2 = b^3 = 1, b^a = b^2.
pub fn symmetric3() -> Arc<PcpPresentation> {
    Arc::new(
        PcpBuilder::new(&[Some(2), Some(3)])
            .conjugation(0, 1, &[(1, 2)])
            .build()
            .unwrap(),
    )
}

/// Infinite dihedral group: a^2 = 1, b^a = b^-1.
pub fn infinite_dihedral() -> Arc<PcpPresentation> {
    Arc::new(
        PcpBuilder::new(&[Some(2), None])
            .conjugation(0, 1, &[(1, -1)])
            .build()
            .unwrap(),
    )
}

/// Klein bottle group: b^a = b^-1 with both generators of infinite order.
pub fn klein_bottle() -> Arc<PcpPresentation> {
    Arc::new(
        PcpBuilder::new(&[None, None])
            .conjugation(0, 1, &[(1, -1)])
            .conjugation_inverse(0, 1, &[(1, -1)])
            .build()
            .unwrap(),
    )
}

/// Discrete Heisenberg group: [a, b] central.
pub fn heisenberg() -> Arc<PcpPresentation> {
    Arc::new(
        PcpBuilder::new(&[None, None, None])
            .conjugation(0, 1, &[(1, 1), (2, 1)])
            .conjugation_inverse(0, 1, &[(1, 1), (2, -1)])
            .build()
            .unwrap(),
    )
}

/// A polycyclic group of derived length three and Hirsch length three,
/// together with an endomorphism pair whose coincidence behaviour
/// exercises every branch of the class algorithms:
///
/// ```text
///   g1^2 = g4,   g2^g1 = g2^-1,   g3^g1 = g3^-1,
///   g3^g2 = g3 g4^2,   g4 central
/// ```
///
/// phi: g1 -> g1 g4^-1, g2 -> g3, g3 -> g2 g3^3 g4^3, g4 -> g4^-1
/// psi: g1 -> g1,       g2 -> g2^2 g3 g4^2, g3 -> g2 g3 g4, g4 -> g4
pub fn derived_length_three() -> (Arc<PcpPresentation>, GroupMorphism, GroupMorphism) {
    let g = Arc::new(
        PcpBuilder::new(&[Some(2), None, None, None])
            .power(0, &[(3, 1)])
            .conjugation(0, 1, &[(1, -1)])
            .conjugation(0, 2, &[(2, -1)])
            .conjugation(1, 2, &[(2, 1), (3, 2)])
            .conjugation_inverse(1, 2, &[(2, 1), (3, -2)])
            .build()
            .unwrap(),
    );
    let phi = GroupMorphism::new(
        g.clone(),
        g.clone(),
        vec![
            g.elem(&[(0, 1), (3, -1)]),
            g.elem(&[(2, 1)]),
            g.elem(&[(1, 1), (2, 3), (3, 3)]),
            g.elem(&[(3, -1)]),
        ],
    )
    .expect("phi respects the defining relations");
    let psi = GroupMorphism::new(
        g.clone(),
        g.clone(),
        vec![
            g.elem(&[(0, 1)]),
            g.elem(&[(1, 2), (2, 1), (3, 2)]),
            g.elem(&[(1, 1), (2, 1), (3, 1)]),
            g.elem(&[(3, 1)]),
        ],
    )
    .expect("psi respects the defining relations");
    (g, phi, psi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_samples_are_consistent() {
        assert!(cyclic(12).is_consistent());
        assert!(free_abelian(3).is_consistent());
        assert!(symmetric3().is_consistent());
        assert!(infinite_dihedral().is_consistent());
        assert!(klein_bottle().is_consistent());
        assert!(heisenberg().is_consistent());
        let (g, phi, psi) = derived_length_three();
        assert!(g.is_consistent());
        assert!(phi.verify() && psi.verify());
        assert_eq!(g.derived_length(), 3);
    }
}
