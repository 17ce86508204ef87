//! Brute-force reference implementation on finite groups, plus random
//! corpus generation for cross-checking the structural algorithms.
//!
//! Everything here is deliberately naive: classes come from a full orbit
//! sweep over all pairs (h, g), witnesses from scanning every h. That
//! makes the module slow and trustworthy, which is the point.

use num_traits::ToPrimitive;
use rand::Rng;
use std::collections::HashMap;
use std::sync::Arc;

use crate::pcp::{GroupMorphism, PcpBuilder, PcpElement, PcpPresentation};
use crate::twisted::{is_twisted_witness, rep_twist_conj, EndoPair, ReidemeisterResult,
    reps_reid_classes, TwistedResult};

/// A fully enumerated finite group with constant-time element lookup.
pub struct FiniteGroupTable {
    group: Arc<PcpPresentation>,
    elements: Vec<PcpElement>,
    index: HashMap<PcpElement, usize>,
}

impl FiniteGroupTable {
    /// `None` when the group is infinite or has more than `cap` elements.
    pub fn new(group: &Arc<PcpPresentation>, cap: Option<usize>) -> Option<FiniteGroupTable> {
        group.order()?;
        let elements = group.enumerate_elements(cap)?;
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, x)| (x.clone(), i))
            .collect();
        Some(FiniteGroupTable {
            group: group.clone(),
            elements,
            index,
        })
    }

    pub fn group(&self) -> &Arc<PcpPresentation> {
        &self.group
    }

    pub fn elements(&self) -> &[PcpElement] {
        &self.elements
    }

    pub fn index_of(&self, x: &PcpElement) -> Option<usize> {
        self.index.get(x).copied()
    }
}

/// The full twisted conjugacy class partition of a finite group.
pub struct BruteClasses {
    /// First-seen representative of each class.
    pub reps: Vec<PcpElement>,
    /// Element index -> index into `reps`.
    pub class_of: Vec<usize>,
}

/// Partition the whole group by sweeping the orbit of every element under
/// g -> psi(h) g phi(h)^-1 for every h.
pub fn brute_classes(table: &FiniteGroupTable, pair: &EndoPair) -> BruteClasses {
    let p = table.group();
    let n = table.elements.len();
    let psi_of: Vec<PcpElement> = table.elements.iter().map(|h| pair.psi().apply(h)).collect();
    let phi_inv_of: Vec<PcpElement> = table
        .elements
        .iter()
        .map(|h| p.invert(&pair.phi().apply(h)))
        .collect();
    let mut class_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for s in 0..n {
        if class_of[s] != usize::MAX {
            continue;
        }
        let cid = reps.len();
        reps.push(table.elements[s].clone());
        for h in 0..n {
            let img = p.multiply(
                &p.multiply(&psi_of[h], &table.elements[s]),
                &phi_inv_of[h],
            );
            let idx = table.index[&img];
            class_of[idx] = cid;
        }
    }
    BruteClasses { reps, class_of }
}

/// Scan every h for one satisfying g1 = psi(h) g2 phi(h)^-1.
pub fn brute_witness(
    table: &FiniteGroupTable,
    pair: &EndoPair,
    g1: &PcpElement,
    g2: &PcpElement,
) -> Option<PcpElement> {
    table
        .elements
        .iter()
        .find(|h| is_twisted_witness(pair, g1, g2, h))
        .cloned()
}

/// Run the structural algorithms against the brute-force answers on one
/// finite group: class counts, representative separation, and `samples`
/// random pairwise conjugacy decisions with witness verification. Any
/// disagreement is described in the error.
pub fn compare_with_brute_force(
    table: &FiniteGroupTable,
    pair: &EndoPair,
    rng: &mut (impl Rng + ?Sized),
    samples: usize,
) -> Result<(), String> {
    let brute = brute_classes(table, pair);
    let alg_reps = match reps_reid_classes(pair) {
        ReidemeisterResult::Finite(reps) => reps,
        ReidemeisterResult::Infinite => {
            return Err("algorithm reports infinitely many classes on a finite group".into())
        }
    };
    if alg_reps.len() != brute.reps.len() {
        return Err(format!(
            "class counts differ: algorithm found {}, brute force found {}",
            alg_reps.len(),
            brute.reps.len()
        ));
    }
    let mut seen = vec![false; brute.reps.len()];
    for r in &alg_reps {
        let idx = table
            .index_of(r)
            .ok_or_else(|| format!("representative {r} is not a normal form"))?;
        let cid = brute.class_of[idx];
        if seen[cid] {
            return Err(format!(
                "two algorithm representatives share one brute-force class, second is {r}"
            ));
        }
        seen[cid] = true;
    }
    let n = table.elements.len();
    for _ in 0..samples {
        let g1 = &table.elements[rng.gen_range(0..n)];
        let g2 = &table.elements[rng.gen_range(0..n)];
        let same_class = brute.class_of[table.index[g1]] == brute.class_of[table.index[g2]];
        match rep_twist_conj(pair, g1, g2) {
            Ok(TwistedResult::Witness(h)) => {
                if !is_twisted_witness(pair, g1, g2, &h) {
                    return Err(format!("witness {h} for {g1} ~ {g2} fails its own equation"));
                }
                if !same_class {
                    return Err(format!(
                        "algorithm says {g1} ~ {g2}, brute force puts them in different classes"
                    ));
                }
            }
            Ok(TwistedResult::NotConjugate) => {
                if same_class {
                    return Err(format!(
                        "algorithm separates {g1} and {g2}, brute force joins them"
                    ));
                }
                if let Some(h) = brute_witness(table, pair, g1, g2) {
                    return Err(format!(
                        "algorithm separates {g1} and {g2} despite witness {h}"
                    ));
                }
            }
            Err(e) => return Err(format!("decision procedure failed on a finite group: {e}")),
        }
    }
    Ok(())
}

/// A uniformly-ish random normal form.
pub fn random_element(g: &Arc<PcpPresentation>, rng: &mut (impl Rng + ?Sized)) -> PcpElement {
    let exps: Vec<(usize, i64)> = (0..g.generator_count())
        .map(|i| {
            let e = match g.relative_order(i) {
                Some(r) => rng.gen_range(0..r.to_i64().expect("corpus orders fit in i64")),
                None => rng.gen_range(-4..=4),
            };
            (i, e)
        })
        .collect();
    g.elem(&exps)
}

/// A random consistent finite presentation with at most `max_order`
/// elements. Mixes a dihedral family with rejection-sampled presentations
/// on up to four generators: diagonal conjugation actions, occasional
/// nontrivial power words, consistency-checked by the builder.
pub fn random_finite_group(
    rng: &mut (impl Rng + ?Sized),
    max_order: u64,
) -> Arc<PcpPresentation> {
    if max_order >= 6 && rng.gen_bool(0.25) {
        let n = rng.gen_range(3..=(max_order / 2));
        let g = PcpBuilder::new(&[Some(2), Some(n)])
            .conjugation(0, 1, &[(1, n as i64 - 1)])
            .build()
            .expect("inverting action squares to the identity");
        return Arc::new(g);
    }
    for _ in 0..500 {
        let len = rng.gen_range(1..=4);
        let orders: Vec<u64> = (0..len).map(|_| rng.gen_range(2..=8)).collect();
        if orders.iter().product::<u64>() > max_order {
            continue;
        }
        let slots: Vec<Option<u64>> = orders.iter().map(|&r| Some(r)).collect();
        let mut b = PcpBuilder::new(&slots);
        for i in 0..len {
            for j in (i + 1)..len {
                if rng.gen_bool(0.5) {
                    if let Some(e) = diagonal_action(rng, orders[i], orders[j]) {
                        b = b.conjugation(i, j, &[(j, e)]);
                    }
                }
            }
            if i + 1 < len && rng.gen_bool(0.25) {
                let j = rng.gen_range(i + 1..len);
                b = b.power(i, &[(j, 1)]);
            }
        }
        if let Ok(g) = b.build() {
            return Arc::new(g);
        }
    }
    // rejection ran dry; an abelian presentation is always consistent
    Arc::new(PcpBuilder::new(&[Some(2), Some(3)]).build().unwrap())
}

/// A nontrivial exponent e with e^ri = 1 mod rj, so that gj -> gj^e can
/// define an order-ri action, if one exists.
fn diagonal_action(rng: &mut (impl Rng + ?Sized), ri: u64, rj: u64) -> Option<i64> {
    let mut viable: Vec<u64> = (2..rj)
        .filter(|&e| {
            let mut acc: u64 = 1;
            for _ in 0..ri {
                acc = acc * e % rj;
            }
            acc == 1
        })
        .collect();
    if viable.is_empty() {
        return None;
    }
    let pick = rng.gen_range(0..viable.len());
    Some(viable.swap_remove(pick) as i64)
}

/// Endomorphisms of g to pair up in cross-checks: identity, the constant
/// map, a few inner automorphisms, and whatever random image tuples
/// happen to define homomorphisms.
pub fn endomorphism_pool(
    g: &Arc<PcpPresentation>,
    rng: &mut (impl Rng + ?Sized),
    random_attempts: usize,
) -> Vec<GroupMorphism> {
    let mut pool = vec![GroupMorphism::identity(g), GroupMorphism::trivial(g)];
    for _ in 0..3 {
        pool.push(GroupMorphism::inner(g, &random_element(g, rng)));
    }
    for _ in 0..random_attempts {
        let images: Vec<PcpElement> = (0..g.generator_count())
            .map(|_| random_element(g, rng))
            .collect();
        if let Ok(m) = GroupMorphism::new(g.clone(), g.clone(), images) {
            pool.push(m);
        }
    }
    pool
}
