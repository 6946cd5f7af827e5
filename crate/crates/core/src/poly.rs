//! Sparse multivariate polynomials over the complex numbers, and polynomial
//! maps V -> V built from them. Monomials are kept in graded lexicographic
//! order; coefficient storage is sparse.

use crate::num::{CMat, C};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// Exponent vector.
pub type Expo = Vec<u8>;

/// Graded lexicographic order on exponent vectors.
pub fn grlex(a: &Expo, b: &Expo) -> Ordering {
    let da: u32 = a.iter().map(|&x| x as u32).sum();
    let db: u32 = b.iter().map(|&x| x as u32).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

/// All monomials of the given total degree, in graded lex order.
pub fn monomials(nvars: usize, degree: usize) -> Vec<Expo> {
    fn rec(nvars: usize, left: usize, cur: &mut Expo, out: &mut Vec<Expo>) {
        if cur.len() == nvars - 1 {
            let mut e = cur.clone();
            e.push(left as u8);
            out.push(e);
            return;
        }
        for v in 0..=left {
            cur.push(v as u8);
            rec(nvars, left - v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(nvars, degree, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| grlex(a, b));
    out
}

/// Sparse polynomial; terms keyed by exponent vector.
#[derive(Clone, Debug, Default)]
pub struct Poly {
    pub nvars: usize,
    pub terms: BTreeMap<Expo, C>,
}

const COEFF_EPS: f64 = 1e-14;

impl Poly {
    pub fn zero(nvars: usize) -> Poly {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn monomial(nvars: usize, expo: Expo, coeff: C) -> Poly {
        let mut p = Poly::zero(nvars);
        p.add_term(expo, coeff);
        p
    }

    pub fn constant(nvars: usize, c: C) -> Poly {
        Poly::monomial(nvars, vec![0; nvars], c)
    }

    pub fn add_term(&mut self, expo: Expo, coeff: C) {
        debug_assert_eq!(expo.len(), self.nvars);
        use std::collections::btree_map::Entry;
        match self.terms.entry(expo) {
            Entry::Occupied(mut o) => {
                let v = *o.get() + coeff;
                if v.norm() < COEFF_EPS {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            Entry::Vacant(vac) => {
                if coeff.norm() >= COEFF_EPS {
                    vac.insert(coeff);
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Poly) {
        for (e, c) in &other.terms {
            self.add_term(e.clone(), *c);
        }
    }

    pub fn scale(&self, s: C) -> Poly {
        if s.norm() < COEFF_EPS {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Expo = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, mut n: usize) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::constant(self.nvars, C::new(1.0, 0.0));
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn is_homogeneous(&self, degree: usize) -> bool {
        self.terms
            .keys()
            .all(|e| e.iter().map(|&x| x as usize).sum::<usize>() == degree)
    }

    /// Evaluate with precomputed power tables: pows[v][j] = x_v^j.
    pub fn eval_with(&self, pows: &[Vec<C>]) -> C {
        let mut acc = C::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = *c;
            for (v, &ex) in e.iter().enumerate() {
                if ex > 0 {
                    t *= pows[v][ex as usize];
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval(&self, point: &[C]) -> C {
        self.eval_with(&power_table(point, self.degree()))
    }

    pub fn partial(&self, var: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[var] -= 1;
            out.add_term(ne, c * C::new(e[var] as f64, 0.0));
        }
        out
    }

    /// Compose with a linear change of variables: p(M x).
    ///
    /// Row i of `m` gives the linear form substituted for x_i. A shared memo
    /// of substituted monomials keeps repeated calls on the same matrix cheap.
    pub fn substitute_linear(&self, m: &CMat, memo: &mut BTreeMap<Expo, Poly>) -> Poly {
        debug_assert_eq!(m.rows, self.nvars);
        let nv = m.cols;
        let mut out = Poly::zero(nv);
        for (e, c) in &self.terms {
            let sub = memo.entry(e.clone()).or_insert_with(|| {
                let mut acc = Poly::constant(nv, C::new(1.0, 0.0));
                for (v, &ex) in e.iter().enumerate() {
                    if ex == 0 {
                        continue;
                    }
                    let mut form = Poly::zero(nv);
                    for j in 0..nv {
                        let coef = m[(v, j)];
                        if coef.norm() > COEFF_EPS {
                            let mut me = vec![0u8; nv];
                            me[j] = 1;
                            form.add_term(me, coef);
                        }
                    }
                    acc = acc.mul(&form.pow(ex as usize));
                }
                acc
            });
            out.add_assign(&sub.scale(*c));
        }
        out
    }

    /// Dense coefficient vector over a monomial list.
    pub fn to_dense(&self, basis: &[Expo]) -> Vec<C> {
        let index: BTreeMap<&Expo, usize> = basis.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let mut out = vec![C::new(0.0, 0.0); basis.len()];
        for (e, c) in &self.terms {
            out[*index.get(e).expect("monomial outside basis")] = *c;
        }
        out
    }
}

pub fn power_table(point: &[C], max_degree: usize) -> Vec<Vec<C>> {
    point
        .iter()
        .map(|&x| {
            let mut row = Vec::with_capacity(max_degree + 1);
            row.push(C::new(1.0, 0.0));
            for j in 1..=max_degree {
                let prev = row[j - 1];
                row.push(prev * x);
            }
            row
        })
        .collect()
}

/// A polynomial map V -> V: one coordinate polynomial per output dimension.
#[derive(Clone, Debug)]
pub struct PolyMap {
    pub nvars: usize,
    pub degree: usize,
    pub coords: Vec<Poly>,
}

impl PolyMap {
    pub fn zero(nvars: usize, degree: usize) -> PolyMap {
        PolyMap { nvars, degree, coords: vec![Poly::zero(nvars); nvars] }
    }

    pub fn eval(&self, point: &[C]) -> Vec<C> {
        let pows = power_table(point, self.degree);
        self.coords.iter().map(|p| p.eval_with(&pows)).collect()
    }

    pub fn jacobian(&self) -> Vec<Vec<Poly>> {
        self.coords
            .iter()
            .map(|p| (0..self.nvars).map(|v| p.partial(v)).collect())
            .collect()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.coords.iter().all(|p| p.is_homogeneous(self.degree))
    }

    pub fn scale(&self, s: C) -> PolyMap {
        PolyMap { nvars: self.nvars, degree: self.degree, coords: self.coords.iter().map(|p| p.scale(s)).collect() }
    }

    pub fn add_assign(&mut self, other: &PolyMap) {
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            a.add_assign(b);
        }
    }

    /// Conjugation by a linear map: M^{-1} . theta(M x), the operator whose
    /// fixed points are the maps commuting with M.
    pub fn conjugate_by(&self, m: &CMat, m_inv: &CMat) -> PolyMap {
        let mut memo = BTreeMap::new();
        let substituted: Vec<Poly> =
            self.coords.iter().map(|p| p.substitute_linear(m, &mut memo)).collect();
        let coords = (0..self.nvars)
            .map(|i| {
                let mut acc = Poly::zero(self.nvars);
                for (j, sub) in substituted.iter().enumerate() {
                    let c = m_inv[(i, j)];
                    if c.norm() > COEFF_EPS {
                        acc.add_assign(&sub.scale(c));
                    }
                }
                acc
            })
            .collect();
        PolyMap { nvars: self.nvars, degree: self.degree, coords }
    }
}

/// Wire format: per coordinate, a list of {e, re, im} terms.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct PolyMapWire {
    pub schema_version: u32,
    pub nvars: usize,
    pub degree: usize,
    pub coords: Vec<Vec<TermWire>>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct TermWire {
    pub e: Vec<u8>,
    pub re: f64,
    pub im: f64,
}

impl PolyMap {
    pub fn to_wire(&self) -> PolyMapWire {
        PolyMapWire {
            schema_version: 1,
            nvars: self.nvars,
            degree: self.degree,
            coords: self
                .coords
                .iter()
                .map(|p| {
                    p.terms
                        .iter()
                        .map(|(e, c)| TermWire { e: e.clone(), re: c.re, im: c.im })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn from_wire(w: &PolyMapWire) -> PolyMap {
        let coords = w
            .coords
            .iter()
            .map(|terms| {
                let mut p = Poly::zero(w.nvars);
                for t in terms {
                    p.add_term(t.e.clone(), C::new(t.re, t.im));
                }
                p
            })
            .collect();
        PolyMap { nvars: w.nvars, degree: w.degree, coords }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C {
        C::new(re, 0.0)
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(2, 5).len(), 6);
        assert_eq!(monomials(3, 4).len(), 15);
        assert_eq!(monomials(4, 11).len(), 364);
    }

    #[test]
    fn grlex_sorted() {
        let ms = monomials(3, 3);
        for w in ms.windows(2) {
            assert_eq!(grlex(&w[0], &w[1]), Ordering::Less);
        }
    }

    #[test]
    fn eval_and_partial() {
        // p = x^2 y + 2 y^3
        let mut p = Poly::zero(2);
        p.add_term(vec![2, 1], c(1.0));
        p.add_term(vec![0, 3], c(2.0));
        let x = [c(2.0), c(-1.0)];
        assert!((p.eval(&x) - c(-6.0)).norm() < 1e-12);
        let px = p.partial(0);
        assert!((px.eval(&x) - c(-4.0)).norm() < 1e-12);
        let py = p.partial(1);
        assert!((py.eval(&x) - c(10.0)).norm() < 1e-12);
    }

    #[test]
    fn substitution_matches_eval() {
        // p(x, y) then substitute x -> x + 2y, y -> -x
        let mut p = Poly::zero(2);
        p.add_term(vec![3, 0], c(1.0));
        p.add_term(vec![1, 1], c(-2.0));
        let mut m = CMat::zeros(2, 2);
        m[(0, 0)] = c(1.0);
        m[(0, 1)] = c(2.0);
        m[(1, 0)] = c(-1.0);
        let mut memo = BTreeMap::new();
        let q = p.substitute_linear(&m, &mut memo);
        let pt = [c(0.7), c(-0.3)];
        let mapped = [m[(0, 0)] * pt[0] + m[(0, 1)] * pt[1], m[(1, 0)] * pt[0] + m[(1, 1)] * pt[1]];
        assert!((q.eval(&pt) - p.eval(&mapped)).norm() < 1e-12);
    }

    #[test]
    fn wire_roundtrip() {
        let mut p = PolyMap::zero(2, 3);
        p.coords[0].add_term(vec![3, 0], C::new(1.5, -0.5));
        p.coords[1].add_term(vec![1, 2], C::new(0.0, 2.0));
        let w = p.to_wire();
        let json = serde_json::to_string(&w).unwrap();
        let back: PolyMapWire = serde_json::from_str(&json).unwrap();
        let q = PolyMap::from_wire(&back);
        let pt = [C::new(0.3, 0.1), C::new(-0.4, 0.2)];
        for (a, b) in p.eval(&pt).iter().zip(q.eval(&pt)) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
