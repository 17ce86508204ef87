//! Integer matrices and exact lattice computations.
//!
//! Everything here works over unbounded integers; no floating point is
//! used anywhere. The two decompositions are
//!
//! * Hermite normal form (row style): `U * A = H` with `U` unimodular,
//!   `H` in row echelon form, pivots positive, and entries above each
//!   pivot reduced into `[0, pivot)`.
//! * Smith normal form: `U * A * V = S` with `S` diagonal, diagonal
//!   entries nonnegative, and each dividing the next.
//!
//! On top of these sit `solve` (one integer solution of `A x = b`),
//! `kernel_basis` (basis of the integer null space) and
//! `lattice_member` (membership of a vector in the column lattice).
//! Empty matrices (zero rows and/or zero columns) are legal everywhere
//! and denote trivial lattices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix, row major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Build from row-major `i64` literals; panics on ragged input.
    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = IntMatrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(*v);
            }
        }
        m
    }

    pub fn from_columns(cols: &[Vec<BigInt>], rows: usize) -> Self {
        let mut m = IntMatrix::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for i in 0..rows {
                m[(i, j)] = col[i].clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a * &other[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hconcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "row count mismatch");
        let mut out = IntMatrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    /// Determinant by fraction-free elimination. Panics on non-square
    /// input. Used as the independent route for determinant-based
    /// checks; never feeds the normal-form code.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        m.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)];
                    m[(i, j)] = t / &prev;
                }
                m[(i, k)] = BigInt::zero();
            }
            prev = m[(k, k)].clone();
        }
        sign * m[(n - 1, n - 1)].clone()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row a += q * row b
    fn row_addmul(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let t = q * &self[(b, j)];
            self[(a, j)] += t;
        }
    }

    /// col a += q * col b
    fn col_addmul(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let t = q * &self[(i, b)];
            self[(i, a)] += t;
        }
    }

    fn neg_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let t = -self[(a, j)].clone();
            self[(a, j)] = t;
        }
    }

    fn neg_col(&mut self, a: usize) {
        for i in 0..self.rows {
            let t = -self[(i, a)].clone();
            self[(i, a)] = t;
        }
    }
}

/// Result of `hnf`: `u * a = h`, `u` unimodular.
#[derive(Clone, Debug)]
pub struct HermiteDecomposition {
    pub h: IntMatrix,
    pub u: IntMatrix,
}

/// Row-style Hermite normal form.
///
/// Pivots are positive, entries above each pivot lie in `[0, pivot)`,
/// zero rows are trailing. The row lattice of `h` equals the row
/// lattice of `a`.
pub fn hnf(a: &IntMatrix) -> HermiteDecomposition {
    let mut h = a.clone();
    let mut u = IntMatrix::identity(a.rows());
    let (rows, cols) = (a.rows(), a.cols());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // gcd the column entries at and below r into position (r, c)
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows {
                if !h[(i, c)].is_zero()
                    && best.is_none_or(|b| h[(i, c)].abs() < h[(b, c)].abs())
                {
                    best = Some(i);
                }
            }
            let Some(piv) = best else { break };
            if piv != r {
                h.swap_rows(piv, r);
                u.swap_rows(piv, r);
            }
            let mut done = true;
            for i in r + 1..rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = -(&h[(i, c)] / &h[(r, c)]);
                h.row_addmul(i, r, &q);
                u.row_addmul(i, r, &q);
                if !h[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.neg_row(r);
            u.neg_row(r);
        }
        for i in 0..r {
            let q = -h[(i, c)].div_floor(&h[(r, c)]);
            h.row_addmul(i, r, &q);
            u.row_addmul(i, r, &q);
        }
        r += 1;
    }
    HermiteDecomposition { h, u }
}

/// Result of `snf`: `u * a * v = s` with `u`, `v` unimodular and `s`
/// diagonal. `d` lists the diagonal entries (nonnegative, each dividing
/// the next; zeros trailing encode free factors). The transform inverses
/// come along for free from the elementary-operation bookkeeping, so
/// coordinates can be mapped in both directions without re-solving.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
    pub d: Vec<BigInt>,
}

/// Smith decomposition extended with the transform inverses, used where
/// coordinates must be mapped in both directions.
#[derive(Clone, Debug)]
pub(crate) struct SnfFull {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
    pub d: Vec<BigInt>,
}

struct SnfWork {
    s: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl SnfWork {
    fn row_swap(&mut self, a: usize, b: usize) {
        self.s.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn col_swap(&mut self, a: usize, b: usize) {
        self.s.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    /// row a += q * row b, with inverse bookkeeping.
    fn row_addmul(&mut self, a: usize, b: usize, q: &BigInt) {
        self.s.row_addmul(a, b, q);
        self.u.row_addmul(a, b, q);
        let nq = -q;
        self.u_inv.col_addmul(b, a, &nq);
    }

    /// col a += q * col b.
    fn col_addmul(&mut self, a: usize, b: usize, q: &BigInt) {
        self.s.col_addmul(a, b, q);
        self.v.col_addmul(a, b, q);
        let nq = -q;
        self.v_inv.row_addmul(b, a, &nq);
    }

    fn row_neg(&mut self, a: usize) {
        self.s.neg_row(a);
        self.u.neg_row(a);
        self.u_inv.neg_col(a);
    }
}

pub(crate) fn snf_full(a: &IntMatrix) -> SnfFull {
    let (rows, cols) = (a.rows(), a.cols());
    let mut w = SnfWork {
        s: a.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
        v_inv: IntMatrix::identity(cols),
    };
    let lim = rows.min(cols);
    for t in 0..lim {
        // Every round re-pivots on the smallest nonzero entry of the
        // trailing block and clears with minimal-magnitude remainders;
        // any surviving remainder undercuts the pivot, so the pivot
        // strictly shrinks and the round count is bounded. Clearing with
        // a stale pivot instead lets the quotients drag the large
        // trailing entries through the block and blow up.
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !w.s[(i, j)].is_zero()
                        && best.is_none_or(|(bi, bj)| w.s[(i, j)].abs() < w.s[(bi, bj)].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            // trailing block all zero: this and every later diagonal
            // entry stay zero
            let Some((bi, bj)) = best else { break };
            w.row_swap(bi, t);
            w.col_swap(bj, t);
            let mut dirty = false;
            for i in t + 1..rows {
                if w.s[(i, t)].is_zero() {
                    continue;
                }
                let q = -balanced_quotient(&w.s[(i, t)], &w.s[(t, t)]);
                w.row_addmul(i, t, &q);
                dirty |= !w.s[(i, t)].is_zero();
            }
            if dirty {
                continue;
            }
            for j in t + 1..cols {
                if w.s[(t, j)].is_zero() {
                    continue;
                }
                let q = -balanced_quotient(&w.s[(t, j)], &w.s[(t, t)]);
                w.col_addmul(j, t, &q);
                dirty |= !w.s[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }
            // the pivot must divide the whole trailing block, or the
            // diagonal would violate the divisibility chain later; fold
            // one violating row in and re-clear, which strictly shrinks
            // the pivot within two rounds
            let p = w.s[(t, t)].clone();
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !(&w.s[(i, j)] % &p).is_zero()));
            match offender {
                Some(i) => w.row_addmul(t, i, &BigInt::one()),
                None => break,
            }
        }
    }
    for i in 0..lim {
        if w.s[(i, i)].is_negative() {
            w.row_neg(i);
        }
    }
    let d: Vec<BigInt> = (0..lim).map(|i| w.s[(i, i)].clone()).collect();
    SnfFull { u: w.u, s: w.s, v: w.v, u_inv: w.u_inv, v_inv: w.v_inv, d }
}

/// Quotient with minimal-magnitude remainder: |x - q*p| <= |p| / 2.
fn balanced_quotient(x: &BigInt, p: &BigInt) -> BigInt {
    let (q, r) = x.div_rem(p);
    if (r.abs() << 1) > p.abs() {
        q + r.signum() * p.signum()
    } else {
        q
    }
}

/// Smith normal form of `a`.
pub fn snf(a: &IntMatrix) -> SmithDecomposition {
    let f = snf_full(a);
    SmithDecomposition {
        u: f.u,
        s: f.s,
        v: f.v,
        u_inv: f.u_inv,
        v_inv: f.v_inv,
        d: f.d,
    }
}

/// Column echelon form: `a * w = c` with `w` unimodular; columns of `c`
/// have strictly increasing pivot rows, zero columns trailing.
fn column_echelon(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let ht = hnf(&a.transpose());
    (ht.h.transpose(), ht.u.transpose())
}

/// One integer solution of `a * x = b`, if any.
pub fn solve(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows(), b.len(), "dimension mismatch");
    let (c, w) = column_echelon(a);
    let mut resid: Vec<BigInt> = b.to_vec();
    let mut y = vec![BigInt::zero(); a.cols()];
    for j in 0..c.cols() {
        let Some(p) = (0..c.rows()).find(|&i| !c[(i, j)].is_zero()) else { break };
        let (q, r) = resid[p].div_mod_floor(&c[(p, j)]);
        if !r.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for i in 0..c.rows() {
                let t = &q * &c[(i, j)];
                resid[i] -= t;
            }
        }
        y[j] = q;
    }
    if resid.iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(w.mul_vec(&y))
}

/// Basis of the integer kernel `{x : a * x = 0}`, returned as matrix
/// columns (zero columns never appear; full-rank `a` yields `cols x 0`).
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let (c, w) = column_echelon(a);
    let zero_cols: Vec<usize> = (0..c.cols())
        .filter(|&j| (0..c.rows()).all(|i| c[(i, j)].is_zero()))
        .collect();
    let mut out = IntMatrix::zeros(a.cols(), zero_cols.len());
    for (k, &j) in zero_cols.iter().enumerate() {
        for i in 0..a.cols() {
            out[(i, k)] = w[(i, j)].clone();
        }
    }
    out
}

/// Coefficients `c` with `l * c = v` when `v` lies in the column
/// lattice of `l`; `None` certifies non-membership.
pub fn lattice_member(l: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    solve(l, v)
}

/// Integer inverse of a unimodular matrix, by solving column by column.
/// Panics if `m` is not square or not unimodular.
pub fn inverse_unimodular(m: &IntMatrix) -> IntMatrix {
    assert_eq!(m.rows(), m.cols());
    let n = m.rows();
    let mut inv = IntMatrix::zeros(n, n);
    let mut e = vec![BigInt::zero(); n];
    for j in 0..n {
        e[j] = BigInt::one();
        let col = solve(m, &e).expect("matrix is not unimodular");
        for i in 0..n {
            inv[(i, j)] = col[i].clone();
        }
        e[j] = BigInt::zero();
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_hnf_shape(h: &IntMatrix) {
        // echelon: pivot columns strictly increase, zero rows trailing
        let mut last_pivot: Option<usize> = None;
        let mut seen_zero_row = false;
        for i in 0..h.rows() {
            let pivot = (0..h.cols()).find(|&j| !h[(i, j)].is_zero());
            match pivot {
                None => seen_zero_row = true,
                Some(p) => {
                    assert!(!seen_zero_row, "zero row precedes nonzero row");
                    if let Some(lp) = last_pivot {
                        assert!(p > lp, "pivot columns not increasing");
                    }
                    assert!(h[(i, p)].is_positive(), "pivot not positive");
                    for r in 0..i {
                        let e = &h[(r, p)];
                        assert!(
                            !e.is_negative() && e < &h[(i, p)],
                            "entry above pivot not reduced"
                        );
                    }
                    last_pivot = Some(p);
                }
            }
        }
    }

    #[test]
    fn hnf_small_example() {
        let a = IntMatrix::from_rows(&[&[1, 2], &[3, 4]]);
        let HermiteDecomposition { h, u } = hnf(&a);
        assert_eq!(h, IntMatrix::from_rows(&[&[1, 0], &[0, 2]]));
        assert_eq!(u.mul(&a), h);
        assert_eq!(u.det().abs(), BigInt::one());
    }

    #[test]
    fn snf_small_example() {
        let a = IntMatrix::from_rows(&[&[2, 4], &[6, 8]]);
        let s = snf(&a);
        assert_eq!(s.d, big(&[2, 4]));
        assert_eq!(s.u.mul(&a).mul(&s.v), s.s);
    }

    #[test]
    fn solve_examples() {
        // x + y = 3 has an integer solution
        let a = IntMatrix::from_rows(&[&[1, 1]]);
        let x = solve(&a, &big(&[3])).unwrap();
        assert_eq!(a.mul_vec(&x), big(&[3]));
        // 2x = 3 has none
        let a2 = IntMatrix::from_rows(&[&[2]]);
        assert!(solve(&a2, &big(&[3])).is_none());
    }

    #[test]
    fn kernel_example() {
        let a = IntMatrix::from_rows(&[&[1, 1]]);
        let k = kernel_basis(&a);
        assert_eq!(k.cols(), 1);
        let v = k.column(0);
        assert!(v == big(&[1, -1]) || v == big(&[-1, 1]));
    }

    #[test]
    fn lattice_membership() {
        // lattice spanned by (2,0) and (0,3)
        let l = IntMatrix::from_rows(&[&[2, 0], &[0, 3]]);
        let c = lattice_member(&l, &big(&[4, -3])).unwrap();
        assert_eq!(l.mul_vec(&c), big(&[4, -3]));
        assert!(lattice_member(&l, &big(&[1, 0])).is_none());
    }

    #[test]
    fn empty_matrices() {
        let a = IntMatrix::zeros(0, 3);
        let h = hnf(&a);
        assert_eq!(h.h.rows(), 0);
        let k = kernel_basis(&a);
        assert_eq!(k.cols(), 3); // everything is in the kernel
        let b = IntMatrix::zeros(3, 0);
        let s = snf(&b);
        assert!(s.d.is_empty());
        assert_eq!(solve(&b, &big(&[0, 0, 0])), Some(vec![]));
        assert!(solve(&b, &big(&[1, 0, 0])).is_none());
    }

    #[test]
    fn det_matches_snf_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n = rng.gen_range(1..=5);
            let mut a = IntMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    a[(i, j)] = BigInt::from(rng.gen_range(-9i64..=9));
                }
            }
            let d = a.det();
            let s = snf(&a);
            let prod: BigInt = s.d.iter().product();
            assert_eq!(d.abs(), prod.abs());
        }
    }

    #[test]
    fn random_roundtrips() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..60 {
            let rows = rng.gen_range(0..=6);
            let cols = rng.gen_range(0..=6);
            let mut a = IntMatrix::zeros(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    a[(i, j)] = BigInt::from(rng.gen_range(-20i64..=20));
                }
            }
            let hd = hnf(&a);
            check_hnf_shape(&hd.h);
            assert_eq!(hd.u.mul(&a), hd.h);
            assert_eq!(hd.u.det().abs(), BigInt::one());

            let f = snf_full(&a);
            assert_eq!(f.u.mul(&a).mul(&f.v), f.s);
            assert_eq!(f.u.mul(&f.u_inv), IntMatrix::identity(rows));
            assert_eq!(f.v.mul(&f.v_inv), IntMatrix::identity(cols));
            for w in f.d.windows(2) {
                assert!(!w[0].is_negative());
                if w[0].is_zero() {
                    assert!(w[1].is_zero(), "zero factor before nonzero");
                } else {
                    assert!(w[1].mod_floor(&w[0]).is_zero(), "divisibility chain broken");
                }
            }

            // kernel columns really annihilate
            let k = kernel_basis(&a);
            for j in 0..k.cols() {
                assert!(a.mul_vec(&k.column(j)).iter().all(|x| x.is_zero()));
            }

            // solve round-trip on a vector known to be in the image
            if cols > 0 {
                let x: Vec<BigInt> =
                    (0..cols).map(|_| BigInt::from(rng.gen_range(-5i64..=5))).collect();
                let b = a.mul_vec(&x);
                let got = solve(&a, &b).expect("consistent system must solve");
                assert_eq!(a.mul_vec(&got), b);
            }
        }
    }
}
