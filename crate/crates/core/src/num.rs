//! Dense complex linear algebra, sized for desk-scale problems.
//!
//! Everything here operates on unit-scale data (roots of unity, orthonormal
//! subspace bases), so plain Gaussian elimination and Gram-Schmidt with a
//! relative tolerance are adequate. Numeric rank follows the convention that
//! pivots below `rel_tol * largest pivot` count as zero.

use num_complex::Complex64;

pub type C = Complex64;

/// Default relative tolerance for rank decisions.
pub const RANK_TOL: f64 = 1e-8;

/// Row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<C>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat { rows, cols, data: vec![C::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            data.extend_from_slice(row);
        }
        CMat { rows: r, cols: c, data }
    }

    /// Build from a list of column vectors.
    pub fn from_cols(cols: &[Vec<C>]) -> Self {
        let c = cols.len();
        let r = if c == 0 { 0 } else { cols[0].len() };
        let mut m = CMat::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r);
            for i in 0..r {
                m[(i, j)] = col[i];
            }
        }
        m
    }

    pub fn row(&self, i: usize) -> &[C] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<C> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn conj_transpose(&self) -> CMat {
        let mut t = CMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].conj();
            }
        }
        t
    }

    pub fn matmul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows);
        let mut out = CMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                let src = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += a * s;
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[C]) -> Vec<C> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Frobenius-style max entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = C;
    fn index(&self, (i, j): (usize, usize)) -> &C {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C {
        &mut self.data[i * self.cols + j]
    }
}

// Scale is floored at 1: every matrix fed through here is built from
// unit-scale data (roots of unity, orthonormal bases), so a pivot that is
// tiny in absolute terms is noise even when all pivots are tiny.
fn nearly_zero(x: f64, scale: f64, rel_tol: f64) -> bool {
    x <= rel_tol * scale.max(1.0)
}

/// Gaussian elimination with partial pivoting, in place.
///
/// Returns the pivot columns and leaves `m` in row echelon form. Rank is the
/// number of pivots, with pivots judged against the largest pivot seen.
fn row_echelon(m: &mut CMat, rel_tol: f64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    let mut scale: f64 = 0.0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        // Partial pivot on this column.
        let (best, best_norm) = (row..m.rows)
            .map(|r| (r, m[(r, col)].norm()))
            .fold((row, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        scale = scale.max(best_norm);
        if nearly_zero(best_norm, scale, rel_tol) {
            continue;
        }
        if best != row {
            for j in 0..m.cols {
                let tmp = m[(row, j)];
                m[(row, j)] = m[(best, j)];
                m[(best, j)] = tmp;
            }
        }
        let inv = C::new(1.0, 0.0) / m[(row, col)];
        for j in col..m.cols {
            m[(row, j)] *= inv;
        }
        for r in 0..m.rows {
            if r == row {
                continue;
            }
            let f = m[(r, col)];
            if f.norm_sqr() == 0.0 {
                continue;
            }
            // r <- r - f * pivot row, only from col onward.
            let (lo, hi) = if r < row { (r, row) } else { (row, r) };
            let (a, b) = m.data.split_at_mut(hi * m.cols);
            let (src, dst) = if r < row {
                let dst = &mut a[lo * m.cols + col..lo * m.cols + m.cols];
                let src = &b[col..m.cols];
                (src, dst)
            } else {
                let src = &a[lo * m.cols + col..lo * m.cols + m.cols];
                let dst = &mut b[col..m.cols];
                (src, dst)
            };
            for (d, s) in dst.iter_mut().zip(src) {
                *d -= f * s;
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Numeric rank with relative tolerance.
pub fn rank(m: &CMat, rel_tol: f64) -> usize {
    let mut work = m.clone();
    row_echelon(&mut work, rel_tol).len()
}

/// Orthonormal-ish basis of the nullspace (columns of the result).
pub fn nullspace(m: &CMat, rel_tol: f64) -> CMat {
    let mut work = m.clone();
    let pivots = row_echelon(&mut work, rel_tol);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivot_set.contains(c)).collect();
    let mut basis = Vec::new();
    for &f in &free {
        let mut v = vec![C::new(0.0, 0.0); m.cols];
        v[f] = C::new(1.0, 0.0);
        // work is reduced row echelon: pivot rows read off directly.
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -work[(r, f)];
        }
        basis.push(v);
    }
    orthonormalize(&CMat::from_cols(&basis), rel_tol)
}

/// Modified Gram-Schmidt on the columns; near-dependent columns are dropped.
pub fn orthonormalize(m: &CMat, rel_tol: f64) -> CMat {
    let mut cols: Vec<Vec<C>> = Vec::new();
    let scale = m.max_abs().max(1.0);
    for j in 0..m.cols {
        let mut v = m.col(j);
        for _ in 0..2 {
            for q in &cols {
                let dot: C = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= dot * qi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if nearly_zero(norm, scale, rel_tol) {
            continue;
        }
        let inv = 1.0 / norm;
        for vi in v.iter_mut() {
            *vi *= inv;
        }
        cols.push(v);
    }
    CMat::from_cols(&cols)
}

/// Solve a square system by LU with partial pivoting.
pub fn solve(a: &CMat, b: &[C]) -> Option<Vec<C>> {
    assert_eq!(a.rows, a.cols);
    assert_eq!(a.rows, b.len());
    let n = a.rows;
    let mut m = a.clone();
    let mut x: Vec<C> = b.to_vec();
    for col in 0..n {
        let (best, best_norm) = (col..n)
            .map(|r| (r, m[(r, col)].norm()))
            .fold((col, -1.0), |acc, v| if v.1 > acc.1 { v } else { acc });
        if best_norm < 1e-300 {
            return None;
        }
        if best != col {
            for j in 0..n {
                let t = m[(col, j)];
                m[(col, j)] = m[(best, j)];
                m[(best, j)] = t;
            }
            x.swap(col, best);
        }
        for r in col + 1..n {
            let f = m[(r, col)] / m[(col, col)];
            if f.norm_sqr() == 0.0 {
                continue;
            }
            for j in col..n {
                let v = m[(col, j)];
                m[(r, j)] -= f * v;
            }
            let xc = x[col];
            x[r] -= f * xc;
        }
    }
    for col in (0..n).rev() {
        let mut s = x[col];
        for j in col + 1..n {
            s -= m[(col, j)] * x[j];
        }
        x[col] = s / m[(col, col)];
    }
    Some(x)
}

/// Smallest singular value, via cyclic Jacobi on the Hermitian matrix A^H A.
pub fn min_singular_value(a: &CMat) -> f64 {
    let ata = a.conj_transpose().matmul(a);
    let eigs = hermitian_eigenvalues(&ata);
    eigs.into_iter().fold(f64::INFINITY, f64::min).max(0.0).sqrt()
}

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations.
pub fn hermitian_eigenvalues(h: &CMat) -> Vec<f64> {
    assert_eq!(h.rows, h.cols);
    let n = h.rows;
    let mut a = h.clone();
    for _sweep in 0..60 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.norm_sqr() < 1e-36 {
                    continue;
                }
                // Unitary 2x2 diagonalization: phase out apq, then rotate.
                let phase = apq / apq.norm();
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = 0.5 * (2.0 * apq.norm()).atan2(aqq - app);
                let (cs, sn) = (theta.cos(), theta.sin());
                // Column update: [p q] <- [p q] * U, U = [[c, s*phase],[-s*conj(phase), c]] style.
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * cs - aiq * phase.conj() * sn;
                    a[(i, q)] = aip * phase * sn + aiq * cs;
                }
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = apj * cs - aqj * phase * sn;
                    a[(q, j)] = apj * phase.conj() * sn + aqj * cs;
                }
            }
        }
    }
    (0..n).map(|i| a[(i, i)].re).collect()
}

/// dim(U ∩ W) for subspaces given by orthonormal column bases.
pub fn intersection_dim(u: &CMat, w: &CMat, rel_tol: f64) -> usize {
    if u.cols == 0 || w.cols == 0 {
        return 0;
    }
    assert_eq!(u.rows, w.rows);
    let mut stacked = CMat::zeros(u.rows, u.cols + w.cols);
    for i in 0..u.rows {
        for j in 0..u.cols {
            stacked[(i, j)] = u[(i, j)];
        }
        for j in 0..w.cols {
            stacked[(i, u.cols + j)] = w[(i, j)];
        }
    }
    u.cols + w.cols - rank(&stacked, rel_tol)
}

/// Orthonormal basis of U ∩ W.
pub fn intersection_basis(u: &CMat, w: &CMat, rel_tol: f64) -> CMat {
    if u.cols == 0 || w.cols == 0 {
        return CMat::zeros(u.rows, 0);
    }
    let mut stacked = CMat::zeros(u.rows, u.cols + w.cols);
    for i in 0..u.rows {
        for j in 0..u.cols {
            stacked[(i, j)] = u[(i, j)];
        }
        for j in 0..w.cols {
            stacked[(i, u.cols + j)] = -w[(i, j)];
        }
    }
    let ns = nullspace(&stacked, rel_tol);
    // Each null vector (alpha, beta) gives the intersection vector U * alpha.
    let mut vecs = Vec::new();
    for j in 0..ns.cols {
        let alpha: Vec<C> = (0..u.cols).map(|i| ns[(i, j)]).collect();
        vecs.push(u.matvec(&alpha));
    }
    orthonormalize(&CMat::from_cols(&vecs), rel_tol)
}

/// Distance from `v` to the span of the orthonormal columns of `q`.
pub fn dist_to_subspace(v: &[C], q: &CMat) -> f64 {
    let mut resid: Vec<C> = v.to_vec();
    for j in 0..q.cols {
        let col = q.col(j);
        let dot: C = col.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
        for (r, c) in resid.iter_mut().zip(&col) {
            *r -= dot * c;
        }
    }
    resid.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vec_norm(v: &[C]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vec_dist(a: &[C], b: &[C]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    fn random_mat(r: usize, c: usize, rng: &mut Rng) -> CMat {
        let mut m = CMat::zeros(r, c);
        for v in m.data.iter_mut() {
            *v = rng.next_unit_disc();
        }
        m
    }

    #[test]
    fn nullspace_of_rank_deficient() {
        // Rows: (1, 0, -1), (0, 1, -1) -> kernel spanned by (1, 1, 1).
        let one = C::new(1.0, 0.0);
        let m = CMat::from_rows(&[
            vec![one, C::new(0.0, 0.0), -one],
            vec![C::new(0.0, 0.0), one, -one],
        ]);
        let ns = nullspace(&m, RANK_TOL);
        assert_eq!(ns.cols, 1);
        let v = ns.col(0);
        assert!((v[0] - v[1]).norm() < 1e-12);
        assert!((v[1] - v[2]).norm() < 1e-12);
    }

    #[test]
    fn solve_roundtrip() {
        let mut rng = Rng::new(3);
        for _ in 0..20 {
            let a = random_mat(4, 4, &mut rng);
            let x: Vec<C> = (0..4).map(|_| rng.next_unit_disc()).collect();
            let b = a.matvec(&x);
            let got = solve(&a, &b).unwrap();
            assert!(vec_dist(&x, &got) < 1e-9);
        }
    }

    #[test]
    fn min_singular_value_of_unitary_is_one() {
        // Diagonal unitary.
        let mut m = CMat::identity(3);
        m[(1, 1)] = C::new(0.0, 1.0);
        m[(2, 2)] = C::new(-1.0, 0.0);
        let s = min_singular_value(&m);
        assert!((s - 1.0).abs() < 1e-10, "sigma_min = {s}");
    }

    #[test]
    fn intersection_of_planes_in_c3() {
        let one = C::new(1.0, 0.0);
        let zero = C::new(0.0, 0.0);
        // span{e1, e2} ∩ span{e2, e3} = span{e2}.
        let u = CMat::from_cols(&[vec![one, zero, zero], vec![zero, one, zero]]);
        let w = CMat::from_cols(&[vec![zero, one, zero], vec![zero, zero, one]]);
        assert_eq!(intersection_dim(&u, &w, RANK_TOL), 1);
        let b = intersection_basis(&u, &w, RANK_TOL);
        assert_eq!(b.cols, 1);
        assert!(b[(1, 0)].norm() > 0.99);
    }

    #[test]
    fn hermitian_eigenvalues_match_known() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let m = CMat::from_rows(&[
            vec![C::new(2.0, 0.0), C::new(0.0, 1.0)],
            vec![C::new(0.0, -1.0), C::new(2.0, 0.0)],
        ]);
        let mut e = hermitian_eigenvalues(&m);
        e.sort_by(f64::total_cmp);
        assert!((e[0] - 1.0).abs() < 1e-9 && (e[1] - 3.0).abs() < 1e-9);
    }
}
