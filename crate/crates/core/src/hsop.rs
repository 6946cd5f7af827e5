//! The space of W-equivariant homogeneous polynomial maps V -> V of degree
//! kh+1: exact dimension formulas by partition counting, a brute-force basis
//! obtained by solving the equivariance constraints over the simple
//! generators, explicit diagonal h.s.o.p.'s where coordinate powers work, and
//! seeded random sampling of generic elements.

use crate::error::Error;
use crate::group::{Family, ReflectionGroup};
use crate::num::{CMat, C, RANK_TOL};
use crate::poly::{monomials, Expo, Poly, PolyMap};
use crate::rng::Rng;
use crate::Result;
use std::collections::{BTreeMap, HashMap};

/// Exact dimension of Hom_{C[W]}(V*, C[V]_{kh+1}).
///
/// Type A counts distinct-entry statistics over partitions of kn+1 and kn
/// into at most n parts. Type B counts partitions of kh+1 with exactly one
/// odd part. Type D needs a second term: the sign-product character of B_n
/// is trivial on D_n, so B_n-copies of the sign-twisted reflection
/// representation also restrict to copies of V; those are counted by the
/// partitions with exactly one even part (zeros included), a case that is
/// parity-impossible when n is odd. For the dihedral family the count is the
/// number of monomial pairs {x^a y^b, x^b y^a}, a + b = km+1, with exponent
/// difference congruent to +-1 mod m: k+1 pairs for odd m, 2k+1 for even m
/// (even m has the extra difference class -1 distinct from +1).
pub fn hom_dim_formula(g: &ReflectionGroup, k: usize) -> u64 {
    match g.spec.family {
        Family::A => {
            let n = g.spec.n;
            delta_sum(k * n + 1, n) - delta_sum(k * n, n)
        }
        Family::B => one_parity_count(2 * g.spec.n * k + 1, g.spec.n, 1),
        Family::D => {
            let d = (2 * g.spec.n - 2) * k + 1;
            one_parity_count(d, g.spec.n, 1) + one_parity_count(d, g.spec.n, 0)
        }
        Family::I2 => {
            let m = g.spec.m.unwrap();
            if m % 2 == 1 {
                (k + 1) as u64
            } else {
                (2 * k + 1) as u64
            }
        }
    }
}

/// Weakly decreasing nonnegative integer sequences of length n summing to
/// `total`, visited in lexicographic order.
fn partitions_into(total: usize, n: usize, visit: &mut impl FnMut(&[usize])) {
    fn rec(total: usize, n: usize, maxpart: usize, cur: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
        if cur.len() == n {
            if total == 0 {
                visit(cur);
            }
            return;
        }
        let slots = n - cur.len();
        for p in (0..=total.min(maxpart)).rev() {
            if p * slots < total {
                break;
            }
            cur.push(p);
            rec(total - p, n, p, cur, visit);
            cur.pop();
        }
    }
    rec(total, n, total, &mut Vec::new(), visit);
}

fn delta_sum(total: usize, n: usize) -> u64 {
    let mut sum = 0u64;
    partitions_into(total, n, &mut |mu| {
        let mut distinct = 1;
        for w in mu.windows(2) {
            if w[0] != w[1] {
                distinct += 1;
            }
        }
        sum += distinct - 1;
    });
    sum
}

fn one_parity_count(total: usize, n: usize, parity: usize) -> u64 {
    let mut count = 0u64;
    partitions_into(total, n, &mut |mu| {
        if mu.iter().filter(|&&p| p % 2 == parity).count() == 1 {
            count += 1;
        }
    });
    count
}

/// Basis of the equivariant map space.
pub struct MapSpace {
    pub degree: usize,
    pub dim: usize,
    pub basis: Vec<PolyMap>,
}

/// Brute-force basis: solve theta(s.v) = s.theta(v) over the simple
/// generators of W on the coefficient space of all degree-(kh+1) maps.
///
/// The generators act monomially (up to the type A quotient), so the solve
/// walks orbits of (coordinate, monomial) pairs with an accumulated scalar;
/// a consistent orbit contributes one basis direction. Type A works in the
/// ambient permutation coordinates, splits off the trivial summand by
/// subtracting coordinate averages, and projects to the quotient V; the
/// projected candidates are then filtered to an independent set.
///
/// A disagreement with `hom_dim_formula` is a hard failure.
pub fn hom_basis(g: &ReflectionGroup, k: usize) -> Result<MapSpace> {
    let degree = k * g.h + 1;
    let candidates = match g.spec.family {
        Family::A => type_a_candidates(g, degree)?,
        _ => {
            let gens: Vec<(CMat, CMat)> = g
                .simple
                .iter()
                .map(|&s| (g.matrix(s).clone(), g.matrix(g.inv(s)).clone()))
                .collect();
            monomial_fixed_maps(g.rank, degree, &gens)?
        }
    };
    // Independent subset, kept in deterministic candidate order.
    let monos = monomials(g.rank, degree);
    let mut picked: Vec<PolyMap> = Vec::new();
    let mut ortho: Vec<Vec<C>> = Vec::new();
    for cand in candidates {
        let mut v: Vec<C> = Vec::with_capacity(g.rank * monos.len());
        for coord in &cand.coords {
            v.extend(coord.to_dense(&monos));
        }
        let norm0 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm0 < 1e-12 {
            continue;
        }
        for q in &ortho {
            let dot: C = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= dot * qi;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > RANK_TOL * norm0.max(1.0) {
            let inv = 1.0 / norm;
            for vi in v.iter_mut() {
                *vi *= inv;
            }
            ortho.push(v);
            picked.push(cand);
        }
    }
    let expected = hom_dim_formula(g, k);
    if picked.len() as u64 != expected {
        return Err(Error::Dimension { expected: expected as usize, got: picked.len() });
    }
    Ok(MapSpace { degree, dim: picked.len(), basis: picked })
}

/// Orbit-walk fixed maps for monomial generator matrices.
fn monomial_fixed_maps(nvars: usize, degree: usize, gens: &[(CMat, CMat)]) -> Result<Vec<PolyMap>> {
    let monos = monomials(nvars, degree);
    let mono_index: HashMap<Expo, usize> = monos.iter().cloned().zip(0..).collect();
    let nodes = nvars * monos.len();
    // per generator: node -> (node, scalar)
    let mut edges: Vec<Vec<(usize, C)>> = Vec::with_capacity(gens.len());
    for (m, m_inv) in gens {
        let mut table = vec![(0usize, C::new(0.0, 0.0)); nodes];
        // substituted image of each monomial must be a single signed monomial
        let mut memo: BTreeMap<Expo, Poly> = BTreeMap::new();
        for (mi, e) in monos.iter().enumerate() {
            let p = Poly::monomial(nvars, e.clone(), C::new(1.0, 0.0));
            let sub = p.substitute_linear(m, &mut memo);
            if sub.terms.len() != 1 {
                return Err(Error::numeric("generator does not act monomially"));
            }
            let (e2, s1) = sub.terms.iter().next().map(|(a, b)| (a.clone(), *b)).unwrap();
            let ti = mono_index[&e2];
            for i in 0..nvars {
                // theta'_a = sum_j Minv[a][j] * theta_j(M x); unit (i, mi)
                // contributes to the unique a with Minv[a][i] != 0.
                let mut hit = None;
                for a in 0..nvars {
                    let c = m_inv[(a, i)];
                    if c.norm() > 1e-12 {
                        if hit.is_some() {
                            return Err(Error::numeric("generator mixing is not monomial"));
                        }
                        hit = Some((a, c));
                    }
                }
                let (a, s2) = hit.ok_or_else(|| Error::numeric("singular generator"))?;
                table[i * monos.len() + mi] = (a * monos.len() + ti, s1 * s2);
            }
        }
        edges.push(table);
    }
    // Components with consistent accumulated scalars.
    let mut comp = vec![usize::MAX; nodes];
    let mut scalar = vec![C::new(0.0, 0.0); nodes];
    let mut out = Vec::new();
    for root in 0..nodes {
        if comp[root] != usize::MAX {
            continue;
        }
        let cid = out.len();
        comp[root] = cid;
        scalar[root] = C::new(1.0, 0.0);
        let mut queue = vec![root];
        let mut members = vec![root];
        let mut alive = true;
        while let Some(u) = queue.pop() {
            for table in &edges {
                let (v, lam) = table[u];
                let cv = scalar[u] * lam;
                if comp[v] == usize::MAX {
                    comp[v] = cid;
                    scalar[v] = cv;
                    queue.push(v);
                    members.push(v);
                } else if (scalar[v] - cv).norm() > 1e-9 {
                    alive = false;
                }
            }
        }
        if !alive {
            continue;
        }
        let mut map = PolyMap::zero(nvars, degree);
        for &u in &members {
            let (i, mi) = (u / monos.len(), u % monos.len());
            map.coords[i].add_term(monos[mi].clone(), scalar[u]);
        }
        out.push(map);
    }
    Ok(out)
}

/// Type A: equivariant maps on the ambient C^n, trivial summand removed,
/// projected to the (n-1)-dimensional quotient coordinates.
fn type_a_candidates(g: &ReflectionGroup, degree: usize) -> Result<Vec<PolyMap>> {
    let n = g.spec.n;
    let ambient_gens: Vec<(CMat, CMat)> = (0..n - 1)
        .map(|i| {
            let mut m = CMat::identity(n);
            m[(i, i)] = C::new(0.0, 0.0);
            m[(i + 1, i + 1)] = C::new(0.0, 0.0);
            m[(i, i + 1)] = C::new(1.0, 0.0);
            m[(i + 1, i)] = C::new(1.0, 0.0);
            (m.clone(), m)
        })
        .collect();
    let ambient = monomial_fixed_maps(n, degree, &ambient_gens)?;
    let proj = g.projection().expect("type A projection");
    let proj_t = proj.conj_transpose();
    let mut out = Vec::new();
    let mut memo: BTreeMap<Expo, Poly> = BTreeMap::new();
    for theta in ambient {
        // remove the trivial-summand component
        let mut avg = Poly::zero(n);
        for c in &theta.coords {
            avg.add_assign(c);
        }
        let avg = avg.scale(C::new(-1.0 / n as f64, 0.0));
        let mut centered: Vec<Poly> = theta.coords.clone();
        for c in centered.iter_mut() {
            c.add_assign(&avg);
        }
        if centered.iter().all(|p| p.is_zero()) {
            continue;
        }
        // restrict to the subspace and express the output in quotient coords
        let substituted: Vec<Poly> =
            centered.iter().map(|p| p.substitute_linear(proj, &mut memo)).collect();
        let mut map = PolyMap::zero(g.rank, degree);
        for a in 0..g.rank {
            for (i, s) in substituted.iter().enumerate() {
                let c = proj_t[(a, i)];
                if c.norm() > 1e-14 {
                    map.coords[a].add_assign(&s.scale(c));
                }
            }
        }
        out.push(map);
    }
    Ok(out)
}

/// Diagonal coordinate powers x_i -> x_i^{kh+1}. Valid for B, D, I2 and the
/// rank-one symmetric group; the higher-rank symmetric groups have no
/// diagonal h.s.o.p. of this shape.
pub fn diagonal_hsop(g: &ReflectionGroup, k: usize) -> Result<PolyMap> {
    let ok = !matches!(g.spec.family, Family::A) || g.rank == 1;
    if !ok {
        return Err(Error::config(
            "diagonal coordinate powers are not equivariant for symmetric groups of rank > 1",
        ));
    }
    let degree = k * g.h + 1;
    let mut map = PolyMap::zero(g.rank, degree);
    for (i, coord) in map.coords.iter_mut().enumerate() {
        let mut e = vec![0u8; g.rank];
        e[i] = degree as u8;
        coord.add_term(e, C::new(1.0, 0.0));
    }
    Ok(map)
}

/// Seeded random element of the space: unit-disc coefficients against the
/// basis.
pub fn sample_theta(space: &MapSpace, seed: u64) -> PolyMap {
    let mut rng = Rng::new(seed);
    let mut out = PolyMap::zero(space.basis[0].nvars, space.degree);
    for b in &space.basis {
        out.add_assign(&b.scale(rng.next_unit_disc()));
    }
    out
}

/// Max equivariance residual of theta over the simple generators on a random
/// unit-scale panel.
pub fn equivariance_residual(g: &ReflectionGroup, theta: &PolyMap, panel: usize, seed: u64) -> f64 {
    let mut rng = Rng::new(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..panel {
        let v: Vec<C> = (0..g.rank).map(|_| rng.next_unit_disc()).collect();
        for &s in &g.simple {
            let sv = g.matrix(s).matvec(&v);
            let lhs = theta.eval(&sv);
            let rhs = g.matrix(s).matvec(&theta.eval(&v));
            let d = crate::num::vec_dist(&lhs, &rhs);
            worst = worst.max(d);
        }
    }
    worst
}

/// The spanning polynomial from the B/D dimension argument: for a partition
/// `mu` of kh+1 with exactly one odd part at sorted position `i`, the vector
/// x_i^{mu_i} * (symmetrization of the remaining powers over the remaining
/// variables).
pub fn bd_generator_poly(n: usize, mu: &[usize]) -> (usize, Poly) {
    let odd_pos = mu.iter().position(|&p| p % 2 == 1).expect("one odd part");
    let rest: Vec<usize> = (0..n).filter(|&j| j != odd_pos).collect();
    let rest_parts: Vec<usize> = (0..n).filter(|&j| j != odd_pos).map(|j| mu[j]).collect();
    let mut poly = Poly::zero(n);
    permute_over(&rest_parts, &mut |assignment| {
        let mut e = vec![0u8; n];
        e[odd_pos] = mu[odd_pos] as u8;
        for (slot, &part) in rest.iter().zip(assignment) {
            e[*slot] = part as u8;
        }
        poly.add_term(e, C::new(1.0, 0.0));
    });
    (odd_pos, poly)
}

fn permute_over(parts: &[usize], visit: &mut impl FnMut(&[usize])) {
    fn rec(parts: &[usize], used: &mut Vec<bool>, cur: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
        if cur.len() == parts.len() {
            visit(cur);
            return;
        }
        for i in 0..parts.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            cur.push(parts[i]);
            rec(parts, used, cur, visit);
            cur.pop();
            used[i] = false;
        }
    }
    rec(parts, &mut vec![false; parts.len()], &mut Vec::new(), visit);
}

/// List the one-odd partitions for the B/D branches (used by tests and the
/// containment check).
pub fn one_odd_partitions(total: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    partitions_into(total, n, &mut |mu| {
        if mu.iter().filter(|&&p| p % 2 == 1).count() == 1 {
            out.push(mu.to_vec());
        }
    });
    out
}
