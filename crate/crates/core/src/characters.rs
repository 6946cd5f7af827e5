//! Characters of the parking action and the Coxeter-Catalan numerology built
//! from them: the predicted character `(kh+1)^{mult_w(zeta^d)}`, brute-force
//! permutation characters, Fuss-Catalan and q-Fuss-Catalan numbers with exact
//! root-of-unity evaluation, the cyclic sieving check on multichains, coset
//! characters of parabolic quotients, and the noncrossing/nonnesting orbit
//! coincidence.

use crate::error::Error;
use crate::group::{ElemId, FlatId, ReflectionGroup};
use crate::noncrossing::Noncrossing;
use crate::parkfn::{ParkId, ParkSet};
use crate::roots;
use crate::Result;
use serde::Serialize;

/// Predicted character of the parking action: (kh+1)^{mult_w(zeta^d)}.
pub fn predicted_character(g: &ReflectionGroup, k: usize, w: ElemId, d: i64) -> u64 {
    let kh = k * g.h;
    ((kh + 1) as u64).pow(g.eig_multiplicity(w, d, kh) as u32)
}

/// Brute-force permutation character of Park(W, k): fixed points of (w, g^d).
pub fn permutation_character(park: &ParkSet, w: ElemId, d: usize) -> u64 {
    let mut gpow: Vec<ParkId> = (0..park.len() as ParkId).collect();
    for _ in 0..d % park.kh {
        for q in gpow.iter_mut() {
            *q = park.act_g(*q);
        }
    }
    (0..park.len() as ParkId)
        .filter(|&p| park.act_w(w, gpow[p as usize]) == p)
        .count() as u64
}

#[derive(Serialize, Debug, Clone)]
pub struct WeakRow {
    pub class_rep: usize,
    pub class_size: usize,
    pub d: usize,
    pub observed: u64,
    pub predicted: u64,
}

#[derive(Serialize, Debug, Clone)]
pub struct WeakReport {
    pub group: String,
    pub k: usize,
    pub park_size: usize,
    pub pass: bool,
    pub mismatches: Vec<WeakRow>,
    pub rows: Vec<WeakRow>,
}

/// Compare the permutation character of Park(W, k) against the prediction on
/// every (conjugacy class, d) pair.
pub fn verify_weak(g: &ReflectionGroup, k: usize) -> Result<WeakReport> {
    let park = ParkSet::new(g, k)?;
    let kh = park.kh;
    // iterated rotation tables g^0 .. g^{kh-1}
    let mut gpow: Vec<Vec<ParkId>> = Vec::with_capacity(kh);
    gpow.push((0..park.len() as ParkId).collect());
    for d in 1..kh {
        let prev = &gpow[d - 1];
        gpow.push(prev.iter().map(|&q| park.act_g(q)).collect());
    }
    let mut rows = Vec::new();
    let mut mismatches = Vec::new();
    for class in g.conjugacy_classes() {
        let w = class[0];
        for (d, table) in gpow.iter().enumerate() {
            let observed = (0..park.len() as ParkId)
                .filter(|&p| park.act_w(w, table[p as usize]) == p)
                .count() as u64;
            let predicted = predicted_character(g, k, w, d as i64);
            let row = WeakRow {
                class_rep: w as usize,
                class_size: class.len(),
                d,
                observed,
                predicted,
            };
            if observed != predicted {
                mismatches.push(row.clone());
            }
            rows.push(row);
        }
    }
    Ok(WeakReport {
        group: g.spec.to_string(),
        k,
        park_size: park.len(),
        pass: mismatches.is_empty(),
        mismatches,
        rows,
    })
}

/// Exact W-Fuss-Catalan number prod (kh + d_i) / d_i.
pub fn fuss_catalan(g: &ReflectionGroup, k: usize) -> Result<u64> {
    let kh = (k * g.h) as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for &d in &g.degrees {
        num *= kh + d as u128;
        den *= d as u128;
    }
    if num % den != 0 {
        return Err(Error::numeric("Fuss-Catalan product is not integral"));
    }
    Ok((num / den) as u64)
}

/// Integer polynomials in q, dense over i64.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly(pub Vec<i64>);

impl IntPoly {
    pub fn constant(c: i64) -> IntPoly {
        IntPoly(vec![c])
    }

    /// [m]_q = 1 + q + ... + q^{m-1}.
    pub fn q_int(m: usize) -> IntPoly {
        IntPoly(vec![1; m])
    }

    pub fn degree(&self) -> usize {
        self.0.iter().rposition(|&c| c != 0).unwrap_or(0)
    }

    fn trim(mut self) -> IntPoly {
        while self.0.len() > 1 && *self.0.last().unwrap() == 0 {
            self.0.pop();
        }
        self
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        let mut out = vec![0i64; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly(out).trim()
    }

    /// Long division by a monic divisor; returns (quotient, remainder).
    pub fn div_rem_monic(&self, div: &IntPoly) -> (IntPoly, IntPoly) {
        let d = div.degree();
        assert_eq!(div.0[d], 1, "divisor must be monic");
        let mut rem = self.0.clone();
        let n = self.degree();
        if n < d {
            return (IntPoly::constant(0), IntPoly(rem).trim());
        }
        let mut quot = vec![0i64; n - d + 1];
        for i in (d..=n).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            quot[i - d] = c;
            for j in 0..=d {
                rem[i - d + j] -= c * div.0[j];
            }
        }
        (IntPoly(quot).trim(), IntPoly(rem).trim())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn eval_at_one(&self) -> i64 {
        self.0.iter().sum()
    }
}

/// n-th cyclotomic polynomial via recursive exact division of q^n - 1.
pub fn cyclotomic(n: usize) -> IntPoly {
    assert!(n > 0);
    if n == 1 {
        return IntPoly(vec![-1, 1]);
    }
    let mut result = {
        let mut c = vec![0i64; n + 1];
        c[0] = -1;
        c[n] = 1;
        IntPoly(c)
    };
    for d in 1..n {
        if n % d == 0 {
            let (q, r) = result.div_rem_monic(&cyclotomic(d));
            assert!(r.is_zero(), "cyclotomic division must be exact");
            result = q;
        }
    }
    result
}

/// q-W-Fuss-Catalan number prod [kh + d_i]_q / [d_i]_q, as an exact integer
/// polynomial.
pub fn q_fuss_catalan(g: &ReflectionGroup, k: usize) -> Result<IntPoly> {
    let kh = k * g.h;
    let mut num = IntPoly::constant(1);
    let mut den = IntPoly::constant(1);
    for &d in &g.degrees {
        num = num.mul(&IntPoly::q_int(kh + d));
        den = den.mul(&IntPoly::q_int(d));
    }
    let (q, r) = num.div_rem_monic(&den);
    if !r.is_zero() {
        return Err(Error::numeric("q-Fuss-Catalan is not a polynomial"));
    }
    if q.eval_at_one() != fuss_catalan(g, k)? as i64 {
        return Err(Error::numeric("q-Fuss-Catalan evaluation at q=1 disagrees"));
    }
    Ok(q)
}

/// Evaluate an integer polynomial at a primitive e-th root of unity, exactly:
/// reduce mod the e-th cyclotomic polynomial. Returns the value when the
/// reduction is a rational integer, None otherwise.
pub fn eval_at_primitive_root(p: &IntPoly, e: usize) -> Option<i64> {
    let (_, rem) = p.div_rem_monic(&cyclotomic(e));
    if rem.degree() == 0 {
        Some(rem.0[0])
    } else {
        None
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct CspRow {
    pub d: usize,
    pub fixed: u64,
    pub expected: Option<i64>,
}

#[derive(Serialize, Debug, Clone)]
pub struct CspReport {
    pub group: String,
    pub k: usize,
    pub chain_count: usize,
    pub orbit_count: usize,
    pub burnside_orbit_count: u64,
    pub pass: bool,
    pub rows: Vec<CspRow>,
}

/// Cyclic sieving of NC^k(W) under generalized rotation against the
/// q-Fuss-Catalan number at roots of unity.
pub fn verify_csp(g: &ReflectionGroup, k: usize) -> Result<CspReport> {
    let nc = Noncrossing::new(g);
    let chains = nc.multichains(k);
    let index: std::collections::HashMap<Vec<u16>, usize> =
        chains.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
    let rot: Vec<usize> = chains
        .iter()
        .map(|c| {
            let chain: Vec<ElemId> = c.iter().map(|&i| nc.elements[i as usize]).collect();
            let r = nc.rotate_chain(&chain).unwrap();
            let ri: Vec<u16> = r.iter().map(|w| nc.idx(*w).unwrap() as u16).collect();
            index[&ri]
        })
        .collect();
    let kh = k * g.h;
    let catq = q_fuss_catalan(g, k)?;
    let mut rows = Vec::new();
    let mut pass = true;
    let mut fix_total: u64 = 0;
    let mut cur: Vec<usize> = (0..chains.len()).collect();
    for d in 0..kh {
        if d > 0 {
            for v in cur.iter_mut() {
                *v = rot[*v];
            }
        }
        let fixed = cur.iter().enumerate().filter(|&(i, &j)| i == j).count() as u64;
        let e = kh / gcd(kh, d);
        let expected = eval_at_primitive_root(&catq, e.max(1));
        if expected != Some(fixed as i64) {
            pass = false;
        }
        fix_total += fixed;
        rows.push(CspRow { d, fixed, expected });
    }
    // Burnside cross-check: orbit count both directly and by averaging.
    let mut orbit_of = vec![usize::MAX; chains.len()];
    let mut orbits = 0;
    for s in 0..chains.len() {
        if orbit_of[s] != usize::MAX {
            continue;
        }
        let mut x = s;
        loop {
            orbit_of[x] = orbits;
            x = rot[x];
            if x == s {
                break;
            }
        }
        orbits += 1;
    }
    let burnside = fix_total / kh as u64;
    if burnside != orbits as u64 || fix_total % kh as u64 != 0 {
        pass = false;
    }
    Ok(CspReport {
        group: g.spec.to_string(),
        k,
        chain_count: chains.len(),
        orbit_count: orbits,
        burnside_orbit_count: burnside,
        pass,
        rows,
    })
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Coset character psi_X(w): fixed points of w on W / W_X.
pub fn coset_character(g: &ReflectionGroup, x: FlatId, w: ElemId) -> u64 {
    (0..g.order() as ElemId)
        .filter(|&u| g.coset_rep(x, u) == u)
        .filter(|&u| g.coset_rep(x, g.mult(w, u)) == u)
        .count() as u64
}

/// W-orbit representatives of flats (least flat id per orbit) plus the orbit
/// partition itself.
pub fn flat_orbits(g: &ReflectionGroup) -> Vec<Vec<FlatId>> {
    let nf = g.flat_count();
    let mut orbit_of = vec![usize::MAX; nf];
    let mut orbits: Vec<Vec<FlatId>> = Vec::new();
    for x in 0..nf as FlatId {
        if orbit_of[x as usize] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut members = vec![x];
        orbit_of[x as usize] = id;
        let mut i = 0;
        while i < members.len() {
            let cur = members[i];
            for v in 0..g.order() as ElemId {
                let img = g.act_flat(v, cur);
                if orbit_of[img as usize] == usize::MAX {
                    orbit_of[img as usize] = id;
                    members.push(img);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        orbits.push(members);
    }
    orbits
}

/// Rank over the rationals of the matrix of coset characters evaluated on
/// conjugacy classes, one row per flat-orbit representative. Fraction-free
/// elimination over i128.
pub fn psi_matrix_rank(g: &ReflectionGroup) -> usize {
    let orbits = flat_orbits(g);
    let classes = g.conjugacy_classes();
    let mut m: Vec<Vec<i128>> = orbits
        .iter()
        .map(|orbit| {
            let x = orbit[0];
            classes.iter().map(|cl| coset_character(g, x, cl[0]) as i128).collect()
        })
        .collect();
    let rows = m.len();
    let cols = classes.len();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| m[r][col] != 0) else { continue };
        m.swap(rank, p);
        for r in 0..rows {
            if r == rank || m[r][col] == 0 {
                continue;
            }
            let (a, b) = (m[rank][col], m[r][col]);
            for c in 0..cols {
                m[r][c] = m[r][c] * a - m[rank][c] * b;
            }
            let g0 = m[r].iter().fold(0i128, |acc, &v| gcd128(acc, v.abs()));
            if g0 > 1 {
                for c in 0..cols {
                    m[r][c] /= g0;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd128(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd128(b, a % b)
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct KrewerasRow {
    pub orbit_rep_flat: usize,
    pub orbit_size: usize,
    pub flat_dim: usize,
    pub noncrossing: usize,
    pub nonnesting: usize,
}

#[derive(Serialize, Debug, Clone)]
pub struct KrewerasReport {
    pub group: String,
    pub pass: bool,
    pub antichain_flats_injective: bool,
    pub rows: Vec<KrewerasRow>,
}

/// Per-orbit comparison of noncrossing flats against nonnesting flats
/// (antichain hyperplane intersections), crystallographic families, k = 1.
pub fn verify_kreweras(g: &ReflectionGroup) -> Result<KrewerasReport> {
    let nc = Noncrossing::new(g);
    let mut is_noncrossing = vec![false; g.flat_count()];
    for &f in &nc.flat_of {
        is_noncrossing[f as usize] = true;
    }
    let roots = roots::positive_roots(g)?;
    let acs = roots::antichains(g)?;
    let mut nonnesting_flats: Vec<FlatId> =
        acs.iter().map(|ac| roots::flat_of_antichain(g, &roots, ac)).collect();
    let total = nonnesting_flats.len();
    nonnesting_flats.sort_unstable();
    nonnesting_flats.dedup();
    let injective = nonnesting_flats.len() == total;
    let mut is_nonnesting = vec![false; g.flat_count()];
    for &f in &nonnesting_flats {
        is_nonnesting[f as usize] = true;
    }
    let mut rows = Vec::new();
    let mut pass = injective;
    for orbit in flat_orbits(g) {
        let ncc = orbit.iter().filter(|&&f| is_noncrossing[f as usize]).count();
        let nnc = orbit.iter().filter(|&&f| is_nonnesting[f as usize]).count();
        if ncc != nnc {
            pass = false;
        }
        rows.push(KrewerasRow {
            orbit_rep_flat: orbit[0] as usize,
            orbit_size: orbit.len(),
            flat_dim: g.flat(orbit[0]).dim,
            noncrossing: ncc,
            nonnesting: nnc,
        });
    }
    Ok(KrewerasReport { group: g.spec.to_string(), pass, antichain_flats_injective: injective, rows })
}
