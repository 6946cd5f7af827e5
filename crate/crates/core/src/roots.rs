//! Positive root systems for the crystallographic families A, B, D, their
//! root poset (alpha <= beta iff beta - alpha is a nonnegative combination of
//! simple roots), antichain enumeration, and the flats cut out by antichains.

use crate::error::Error;
use crate::group::element::Elem;
use crate::group::{ElemId, Family, FlatId, ReflectionGroup};
use crate::Result;

/// A root as an integer vector in the ambient Z^n (type A uses Z^letters).
pub type Root = Vec<i64>;

/// Positive roots, in a fixed order.
pub fn positive_roots(g: &ReflectionGroup) -> Result<Vec<Root>> {
    let n = g.spec.n;
    let mut out = Vec::new();
    match g.spec.family {
        Family::A => {
            for i in 0..n {
                for j in i + 1..n {
                    let mut v = vec![0i64; n];
                    v[i] = 1;
                    v[j] = -1;
                    out.push(v);
                }
            }
        }
        Family::B => {
            for i in 0..n {
                for j in i + 1..n {
                    for s in [-1i64, 1] {
                        let mut v = vec![0i64; n];
                        v[i] = 1;
                        v[j] = -s;
                        out.push(v);
                    }
                }
            }
            for i in 0..n {
                let mut v = vec![0i64; n];
                v[i] = 1;
                out.push(v);
            }
        }
        Family::D => {
            for i in 0..n {
                for j in i + 1..n {
                    for s in [-1i64, 1] {
                        let mut v = vec![0i64; n];
                        v[i] = 1;
                        v[j] = -s;
                        out.push(v);
                    }
                }
            }
        }
        Family::I2 => return Err(Error::invalid("root poset requires a crystallographic family")),
    }
    Ok(out)
}

/// Is `beta - alpha` a nonnegative combination of the simple roots?
///
/// Expansion is solved exactly; coefficients are stored doubled so the
/// half-integer cases in type D stay integral.
pub fn root_leq(g: &ReflectionGroup, alpha: &Root, beta: &Root) -> bool {
    let n = g.spec.n;
    let v: Vec<i64> = beta.iter().zip(alpha).map(|(b, a)| b - a).collect();
    // twice the simple-root coefficients
    let mut c2 = vec![0i64; match g.spec.family {
        Family::A => n - 1,
        _ => n,
    }];
    match g.spec.family {
        Family::A => {
            // simple roots e_i - e_{i+1}: c_i = v_1 + ... + v_i; total sum 0.
            let mut acc = 0i64;
            for i in 0..n - 1 {
                acc += v[i];
                c2[i] = 2 * acc;
            }
            if acc + v[n - 1] != 0 {
                return false;
            }
        }
        Family::B => {
            // simples e_i - e_{i+1} (i < n), e_n: back-substitute from v.
            // v_i = c_i - c_{i-1} for i <= n-1 (c_0 = 0), v_n = c_n - c_{n-1}.
            let mut acc = 0i64;
            for i in 0..n {
                acc += v[i];
                c2[i] = 2 * acc;
            }
        }
        Family::D => {
            // simples e_i - e_{i+1} (i <= n-2), e_{n-1} - e_n, e_{n-1} + e_n.
            let mut acc = 0i64;
            for i in 0..n - 2 {
                acc += v[i];
                c2[i] = 2 * acc;
            }
            let prev2 = if n >= 2 { 2 * acc } else { 0 };
            // c_{n-1} + c_n = v_{n-1} + c_{n-2},  c_n - c_{n-1} = v_n
            let sum2 = 2 * v[n - 2] + prev2;
            let dif2 = 2 * v[n - 1];
            c2[n - 2] = (sum2 - dif2) / 2;
            c2[n - 1] = (sum2 + dif2) / 2;
            if (sum2 - dif2) % 2 != 0 {
                return false;
            }
        }
        Family::I2 => return false,
    }
    c2.iter().all(|&c| c >= 0)
}

/// All antichains of the positive root poset (the empty antichain included);
/// roots are referenced by index into `positive_roots`.
pub fn antichains(g: &ReflectionGroup) -> Result<Vec<Vec<usize>>> {
    let roots = positive_roots(g)?;
    let m = roots.len();
    let mut cmp = vec![false; m * m]; // comparable (strictly or equal)
    for i in 0..m {
        for j in 0..m {
            cmp[i * m + j] =
                root_leq(g, &roots[i], &roots[j]) || root_leq(g, &roots[j], &roots[i]);
        }
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    fn rec(
        start: usize,
        m: usize,
        cmp: &[bool],
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        out.push(cur.clone());
        for i in start..m {
            if cur.iter().all(|&j| !cmp[i * m + j]) {
                cur.push(i);
                rec(i + 1, m, cmp, cur, out);
                cur.pop();
            }
        }
    }
    rec(0, m, &cmp, &mut cur, &mut out);
    Ok(out)
}

/// The reflection through the hyperplane orthogonal to a positive root.
pub fn reflection_of_root(g: &ReflectionGroup, root: &Root) -> ElemId {
    let n = g.spec.n;
    let support: Vec<usize> = (0..n).filter(|&i| root[i] != 0).collect();
    let e = match (g.spec.family, support.len()) {
        (Family::A, 2) => Elem::transposition(n, support[0], support[1]),
        (Family::B | Family::D, 2) => {
            let (i, j) = (support[0], support[1]);
            let mut perm: Vec<u8> = (0..n as u8).collect();
            perm.swap(i, j);
            if root[i] * root[j] < 0 {
                // e_i - e_j: plain transposition
                Elem::Signed { perm, flip: 0 }
            } else {
                // e_i + e_j: swap with both signs
                Elem::Signed { perm, flip: (1 << i) | (1 << j) }
            }
        }
        (Family::B, 1) => {
            Elem::Signed { perm: (0..n as u8).collect(), flip: 1 << support[0] }
        }
        _ => panic!("unsupported root shape"),
    };
    g.elem_id(&e).expect("reflection is a group element")
}

/// The flat cut out by an antichain: the meet of its reflection hyperplanes.
pub fn flat_of_antichain(g: &ReflectionGroup, roots: &[Root], antichain: &[usize]) -> FlatId {
    let mut flat = g.full_flat();
    for &ri in antichain {
        let t = reflection_of_root(g, &roots[ri]);
        flat = g.meet_flats(flat, g.fixed_space(t));
    }
    flat
}
