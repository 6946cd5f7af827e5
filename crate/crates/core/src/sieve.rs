//! Stabilizer-indexed sieving on finite W x Z_kh-sets.
//!
//! Stabilizers of parking functions and locus points have the canonical form
//! `< W_X x {e}, (w, g^d) >` with d minimal; this module computes those
//! descriptors, verifies them against brute force, counts fixed points under
//! arbitrary subgroups, and constructs explicit equivariant bijections by
//! orbit peeling whenever the stabilizer-indexed fixed counts of two sets
//! agree. A fixed-count mismatch is a first-class report, not an error: the
//! sets are then provably non-isomorphic as G-sets.
//!
//! The type A section implements the admissible-function and
//! admissible-partition counts whose agreement with eigenspace dimensions is
//! the combinatorial core of the symmetric-group case.

use crate::group::flats::FlatKey;
use crate::group::{ElemId, FlatId, ReflectionGroup};
use crate::locus::LocusSolution;
use crate::parkfn::{LabeledPark, ParkSet};
use crate::Result;
use serde::Serialize;
use std::collections::HashMap;

/// A finite set with a W x Z_kh action (generator-level interface).
pub trait WzSet {
    fn group(&self) -> &ReflectionGroup;
    fn fuss(&self) -> usize;
    fn size(&self) -> usize;
    fn act_elem(&self, v: ElemId, x: u32) -> u32;
    fn act_rot(&self, x: u32) -> u32;
    /// Stable serialization, used for reproducible orderings.
    fn key(&self, x: u32) -> Vec<u8>;

    fn order_kh(&self) -> usize {
        self.fuss() * self.group().h
    }
}

impl<'g> WzSet for ParkSet<'g> {
    fn group(&self) -> &ReflectionGroup {
        self.group
    }
    fn fuss(&self) -> usize {
        self.k
    }
    fn size(&self) -> usize {
        self.len()
    }
    fn act_elem(&self, v: ElemId, x: u32) -> u32 {
        self.act_w(v, x)
    }
    fn act_rot(&self, x: u32) -> u32 {
        self.act_g(x)
    }
    fn key(&self, x: u32) -> Vec<u8> {
        self.ser_key(x)
    }
}

impl<'g> WzSet for LabeledPark<'g> {
    fn group(&self) -> &ReflectionGroup {
        self.group
    }
    fn fuss(&self) -> usize {
        self.k
    }
    fn size(&self) -> usize {
        self.len()
    }
    fn act_elem(&self, v: ElemId, x: u32) -> u32 {
        LabeledPark::act_w(self, v, x)
    }
    fn act_rot(&self, x: u32) -> u32 {
        LabeledPark::act_g(self, x)
    }
    fn key(&self, x: u32) -> Vec<u8> {
        self.ser_key(x)
    }
}

/// A certified locus viewed as a W x Z_kh-set.
pub struct LocusGSet<'g> {
    pub group: &'g ReflectionGroup,
    pub sol: &'g LocusSolution,
}

impl<'g> WzSet for LocusGSet<'g> {
    fn group(&self) -> &ReflectionGroup {
        self.group
    }
    fn fuss(&self) -> usize {
        self.sol.k
    }
    fn size(&self) -> usize {
        self.sol.points.len()
    }
    fn act_elem(&self, v: ElemId, x: u32) -> u32 {
        self.sol.w_action[v as usize][x as usize]
    }
    fn act_rot(&self, x: u32) -> u32 {
        self.sol.g_action[x as usize]
    }
    fn key(&self, x: u32) -> Vec<u8> {
        let mut k = Vec::new();
        for z in &self.sol.points[x as usize].coords {
            k.extend_from_slice(&z.re.to_bits().to_le_bytes());
            k.extend_from_slice(&z.im.to_bits().to_le_bytes());
        }
        k
    }
}

/// A subgroup of W x Z_kh as a sorted element list.
pub type Subgroup = Vec<(ElemId, u16)>;

/// Rotation-power tables g^j for j = 0..kh.
pub fn rot_tables<S: WzSet + ?Sized>(set: &S) -> Vec<Vec<u32>> {
    let kh = set.order_kh();
    let mut out: Vec<Vec<u32>> = Vec::with_capacity(kh);
    out.push((0..set.size() as u32).collect());
    for j in 1..kh {
        let prev = &out[j - 1];
        out.push(prev.iter().map(|&x| set.act_rot(x)).collect());
    }
    out
}

/// Brute-force stabilizer of an element.
pub fn stabilizer_subgroup<S: WzSet + ?Sized>(set: &S, rot: &[Vec<u32>], x: u32) -> Subgroup {
    let g = set.group();
    let mut out = Vec::new();
    for (j, table) in rot.iter().enumerate() {
        let gx = table[x as usize];
        for v in 0..g.order() as ElemId {
            if set.act_elem(v, gx) == x {
                out.push((v, j as u16));
            }
        }
    }
    out.sort_unstable();
    out
}

/// The canonical stabilizer form < W_X x {e}, (w, g^d) >.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct StabDescriptor {
    pub flat: FlatId,
    pub w: ElemId,
    pub d: usize,
}

impl StabDescriptor {
    /// Closure of the generators inside W x Z_kh.
    pub fn generate(&self, g: &ReflectionGroup, kh: usize) -> Subgroup {
        let mut seen = vec![false; g.order() * kh];
        let mut gens: Vec<(ElemId, u16)> =
            g.parabolic(self.flat).iter().map(|&u| (u, 0u16)).collect();
        gens.push((self.w, (self.d % kh) as u16));
        let mut frontier = vec![(0 as ElemId, 0u16)];
        seen[0] = true;
        let mut members = vec![(0 as ElemId, 0u16)];
        while let Some((a, i)) = frontier.pop() {
            for &(b, j) in &gens {
                let nb = g.mult(b, a);
                let nj = (i + j) % kh as u16;
                let idx = nb as usize * kh + nj as usize;
                if !seen[idx] {
                    seen[idx] = true;
                    frontier.push((nb, nj));
                    members.push((nb, nj));
                }
            }
        }
        members.sort_unstable();
        members
    }
}

/// Stabilizer descriptor of a parking function: X = v X_1 and the minimal
/// rotation component d realized with some companion w.
pub fn descriptor_of_park(park: &ParkSet, rot: &[Vec<u32>], p: u32) -> StabDescriptor {
    let g = park.group;
    let flat = g.act_flat(park.rep(p), park.top_flat(p));
    let kh = park.kh;
    for d in 1..=kh {
        let gp = rot[d % kh][p as usize];
        let mut best: Option<ElemId> = None;
        for v in 0..g.order() as ElemId {
            if park.act_w(v, gp) == p {
                best = match best {
                    Some(b) if g.ord_rank(b) <= g.ord_rank(v) => Some(b),
                    _ => Some(v),
                };
            }
        }
        if let Some(w) = best {
            return StabDescriptor { flat, w, d };
        }
    }
    unreachable!("d = kh always admits w = e");
}

/// Stabilizer descriptor of a locus point: X(p) is the minimal flat
/// containing the point.
pub fn descriptor_of_locus_point(
    g: &ReflectionGroup,
    sol: &LocusSolution,
    x: u32,
    membership_tol: f64,
) -> StabDescriptor {
    let flat = g.minimal_flat_containing(&sol.points[x as usize].coords, membership_tol);
    let kh = sol.kh;
    for d in 1..=kh {
        let mut gx = x;
        for _ in 0..d % kh {
            gx = sol.g_action[gx as usize];
        }
        let mut best: Option<ElemId> = None;
        for v in 0..g.order() as ElemId {
            if sol.w_action[v as usize][gx as usize] == x {
                best = match best {
                    Some(b) if g.ord_rank(b) <= g.ord_rank(v) => Some(b),
                    _ => Some(v),
                };
            }
        }
        if let Some(w) = best {
            return StabDescriptor { flat, w, d };
        }
    }
    unreachable!("d = kh always admits w = e");
}

/// All elements fixed by every generator of the subgroup.
pub fn fixed_points<S: WzSet + ?Sized>(set: &S, rot: &[Vec<u32>], h: &Subgroup) -> Vec<u32> {
    (0..set.size() as u32)
        .filter(|&x| h.iter().all(|&(v, j)| set.act_elem(v, rot[j as usize][x as usize]) == x))
        .collect()
}

#[derive(Debug, Serialize)]
pub struct OrbitCert {
    pub source_anchor: u32,
    pub target_anchor: u32,
    pub orbit_size: usize,
    pub stabilizer_size: usize,
}

#[derive(Debug, Serialize)]
pub struct EquivariantBijection {
    pub map: Vec<u32>,
    pub orbits: Vec<OrbitCert>,
    pub verified: bool,
}

#[derive(Debug, Serialize)]
pub struct ProfileMismatch {
    pub stabilizer_size: usize,
    pub source_fixed: usize,
    pub target_fixed: usize,
}

#[derive(Debug, Serialize)]
#[serde(tag = "outcome")]
pub enum BijectionOutcome {
    Built(EquivariantBijection),
    Mismatch { rows: Vec<ProfileMismatch> },
}

/// Build a W x Z_kh-equivariant bijection by orbit peeling, after checking
/// that every stabilizer subgroup arising on either side fixes equally many
/// elements of both sets.
pub fn build_equivariant_bijection<S: WzSet + ?Sized, T: WzSet + ?Sized>(
    s: &S,
    t: &T,
) -> Result<BijectionOutcome> {
    let g = s.group();
    assert_eq!(g.order(), t.group().order(), "sets must share the acting group");
    assert_eq!(s.order_kh(), t.order_kh());
    let rot_s = rot_tables(s);
    let rot_t = rot_tables(t);
    let stab_s: Vec<Subgroup> =
        (0..s.size() as u32).map(|x| stabilizer_subgroup(s, &rot_s, x)).collect();
    let stab_t: Vec<Subgroup> =
        (0..t.size() as u32).map(|x| stabilizer_subgroup(t, &rot_t, x)).collect();
    // the poset P of occurring stabilizers, materialized from both sides
    let mut pool: Vec<&Subgroup> = stab_s.iter().chain(stab_t.iter()).collect();
    pool.sort();
    pool.dedup();
    let contains = |big: &Subgroup, small: &Subgroup| small.iter().all(|e| big.binary_search(e).is_ok());
    let mut mismatches = Vec::new();
    for h in &pool {
        let fs = stab_s.iter().filter(|st| contains(st, h)).count();
        let ft = stab_t.iter().filter(|st| contains(st, h)).count();
        if fs != ft {
            mismatches.push(ProfileMismatch {
                stabilizer_size: h.len(),
                source_fixed: fs,
                target_fixed: ft,
            });
        }
    }
    if s.size() != t.size() {
        mismatches.push(ProfileMismatch {
            stabilizer_size: 1,
            source_fixed: s.size(),
            target_fixed: t.size(),
        });
    }
    if !mismatches.is_empty() {
        return Ok(BijectionOutcome::Mismatch { rows: mismatches });
    }
    // orbit peeling in canonical serialization order
    let mut order_s: Vec<u32> = (0..s.size() as u32).collect();
    order_s.sort_by_key(|&x| s.key(x));
    let mut order_t: Vec<u32> = (0..t.size() as u32).collect();
    order_t.sort_by_key(|&x| t.key(x));
    let mut map = vec![u32::MAX; s.size()];
    let mut used_t = vec![false; t.size()];
    let mut orbits = Vec::new();
    for &s0 in &order_s {
        if map[s0 as usize] != u32::MAX {
            continue;
        }
        let t0 = *order_t
            .iter()
            .find(|&&cand| !used_t[cand as usize] && stab_t[cand as usize] == stab_s[s0 as usize])
            .expect("profile equality guarantees an anchor with equal stabilizer");
        // extend over the orbit of (s0, t0)
        let mut frontier = vec![(s0, t0)];
        map[s0 as usize] = t0;
        used_t[t0 as usize] = true;
        let mut orbit_size = 1usize;
        while let Some((xs, xt)) = frontier.pop() {
            let mut images: Vec<(u32, u32)> = g
                .simple
                .iter()
                .map(|&gen| (s.act_elem(gen, xs), t.act_elem(gen, xt)))
                .collect();
            images.push((s.act_rot(xs), t.act_rot(xt)));
            for (ns, nt) in images {
                if map[ns as usize] == u32::MAX {
                    map[ns as usize] = nt;
                    assert!(!used_t[nt as usize], "orbit extension collided");
                    used_t[nt as usize] = true;
                    orbit_size += 1;
                    frontier.push((ns, nt));
                } else {
                    assert_eq!(map[ns as usize], nt, "orbit extension inconsistent");
                }
            }
        }
        orbits.push(OrbitCert {
            source_anchor: s0,
            target_anchor: t0,
            orbit_size,
            stabilizer_size: stab_s[s0 as usize].len(),
        });
    }
    // exhaustive verification: bijective and commutes with every generator
    let mut verified = map.iter().all(|&x| x != u32::MAX) && used_t.iter().all(|&b| b);
    for x in 0..s.size() as u32 {
        for &gen in &g.simple {
            if map[s.act_elem(gen, x) as usize] != t.act_elem(gen, map[x as usize]) {
                verified = false;
            }
        }
        if map[s.act_rot(x) as usize] != t.act_rot(map[x as usize]) {
            verified = false;
        }
    }
    Ok(BijectionOutcome::Built(EquivariantBijection { map, orbits, verified }))
}

// ---------------------------------------------------------------------------
// Type A: admissible functions and partitions.
// ---------------------------------------------------------------------------

/// Extract the set-partition class array of a type A flat.
pub fn flat_classes(g: &ReflectionGroup, x: FlatId) -> Option<Vec<usize>> {
    match &g.flat(x).key {
        FlatKey::Partition(blocks) => {
            let n: usize = blocks.iter().map(|b| b.len()).sum();
            let mut classes = vec![0usize; n];
            for (ci, b) in blocks.iter().enumerate() {
                for &i in b {
                    classes[i as usize] = ci;
                }
            }
            Some(classes)
        }
        _ => None,
    }
}

fn rot_value(v: u8, d: usize, kn: usize) -> u8 {
    if v == 0 {
        0
    } else {
        (((v as usize - 1 + d) % kn) + 1) as u8
    }
}

/// All (w, g^d, X)-admissible functions f : [n] -> [kn] ∪ {0}, brute force.
/// Encoding: f[i] = 0 means the extra fixed point, 1..=kn the big cycle.
pub fn admissible_functions(
    n: usize,
    k: usize,
    d: usize,
    w_perm: &[u8],
    x_classes: &[usize],
) -> Vec<Vec<u8>> {
    let kn = k * n;
    let mut out = Vec::new();
    let mut f = vec![0u8; n];
    loop {
        let constant_on_x =
            (0..n).all(|i| (0..n).all(|j| x_classes[i] != x_classes[j] || f[i] == f[j]));
        if constant_on_x
            && (0..n).all(|i| f[w_perm[i] as usize] == rot_value(f[i], d, kn))
        {
            out.push(f.clone());
        }
        let mut pos = n;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if (f[pos] as usize) < kn {
                f[pos] += 1;
                for v in f.iter_mut().skip(pos + 1) {
                    *v = 0;
                }
                break;
            }
        }
    }
}

fn cycles_of_perm(perm: &[u8]) -> Vec<Vec<usize>> {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut c = Vec::new();
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            c.push(i);
            i = perm[i] as usize;
        }
        out.push(c);
    }
    out
}

/// The number G(w) of good equivalence classes of cycles of w relative to
/// (r, X): a cycle is good when r divides its length and X-equivalent
/// entries sit at positions congruent mod r; cycles are linked when X
/// relates their supports, and a class is good when all its cycles are.
pub fn good_class_count(w_perm: &[u8], x_classes: &[usize], r: usize) -> usize {
    let cycles = cycles_of_perm(w_perm);
    let nc = cycles.len();
    let good: Vec<bool> = cycles
        .iter()
        .map(|cyc| {
            if cyc.len() % r != 0 {
                return false;
            }
            for j in 0..cyc.len() {
                for l in 0..cyc.len() {
                    if x_classes[cyc[j]] == x_classes[cyc[l]] && (j + cyc.len() - l) % r != 0 {
                        return false;
                    }
                }
            }
            true
        })
        .collect();
    // link cycles sharing an X-class
    let mut parent: Vec<usize> = (0..nc).collect();
    fn find(p: &mut Vec<usize>, i: usize) -> usize {
        if p[i] != i {
            let r = find(p, p[i]);
            p[i] = r;
        }
        p[i]
    }
    for a in 0..nc {
        for b in a + 1..nc {
            let linked = cycles[a]
                .iter()
                .any(|&i| cycles[b].iter().any(|&j| x_classes[i] == x_classes[j]));
            if linked {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let mut class_good: HashMap<usize, bool> = HashMap::new();
    for c in 0..nc {
        let root = find(&mut parent, c);
        let e = class_good.entry(root).or_insert(true);
        *e = *e && good[c];
    }
    class_good.values().filter(|&&b| b).count()
}

/// All (w, r, X)-admissible set partitions of [n], returned as class arrays,
/// together with b_sigma (the number of r-element block orbits).
pub fn admissible_partitions(
    n: usize,
    r: usize,
    w_perm: &[u8],
    x_classes: &[usize],
) -> Vec<(Vec<usize>, usize)> {
    let mut out = Vec::new();
    let mut assign = vec![0usize; n];
    fn rec(
        i: usize,
        maxc: usize,
        n: usize,
        r: usize,
        w_perm: &[u8],
        x_classes: &[usize],
        assign: &mut Vec<usize>,
        out: &mut Vec<(Vec<usize>, usize)>,
    ) {
        if i == n {
            // X refines sigma
            for a in 0..n {
                for b in 0..n {
                    if x_classes[a] == x_classes[b] && assign[a] != assign[b] {
                        return;
                    }
                }
            }
            // w-stability of the partition and block-orbit structure
            let nblocks = maxc;
            let mut image = vec![usize::MAX; nblocks];
            for a in 0..n {
                let from = assign[a];
                let to = assign[w_perm[a] as usize];
                if image[from] == usize::MAX {
                    image[from] = to;
                } else if image[from] != to {
                    return; // w does not permute the blocks
                }
            }
            // orbits of blocks under the induced permutation
            let mut seen = vec![false; nblocks];
            let mut stable_blocks = 0usize;
            let mut r_orbits = 0usize;
            for s in 0..nblocks {
                if seen[s] {
                    continue;
                }
                let mut len = 0;
                let mut b = s;
                while !seen[b] {
                    seen[b] = true;
                    len += 1;
                    b = image[b];
                }
                if len == 1 {
                    stable_blocks += 1;
                } else if len == r {
                    r_orbits += 1;
                } else {
                    return;
                }
            }
            if stable_blocks > 1 {
                return;
            }
            // r = 1 would make every block stable; the caller guards r > 1
            out.push((assign.clone(), r_orbits));
            return;
        }
        for c in 0..=maxc.min(i) {
            assign[i] = c;
            rec(i + 1, maxc.max(c + 1), n, r, w_perm, x_classes, assign, out);
        }
    }
    rec(0, 0, n, r, w_perm, x_classes, &mut assign, &mut out);
    out
}

/// kn (kn - r) (kn - 2r) ... (kn - (b-1) r).
pub fn falling_by_r(kn: usize, r: usize, b: usize) -> u64 {
    let mut acc = 1u64;
    for i in 0..b {
        acc *= (kn - i * r) as u64;
    }
    acc
}

/// Fixed-point count of < W_X x {e}, (w, g^d) > on type A parking functions:
/// (kn+1)^{dim(X ∩ E(w, zeta^{-d}))}, evaluated combinatorially. For r > 1
/// the exponent is the good-class count; for r = 1 it reduces through
/// X ∩ V^w to the classical count (kn+1)^{cyc(w') - 1}.
pub fn type_a_fixed_count(
    n: usize,
    k: usize,
    d: usize,
    w_perm: &[u8],
    x_classes: &[usize],
) -> u64 {
    let kn = k * n;
    assert!(d >= 1 && kn % d == 0, "descriptor rotation must divide kn");
    let r = kn / d;
    if r > 1 {
        ((kn + 1) as u64).pow(good_class_count(w_perm, x_classes, r) as u32)
    } else {
        // join X with the cycle partition of w; blocks - 1 is the dimension
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, i: usize) -> usize {
            if p[i] != i {
                let r = find(p, p[i]);
                p[i] = r;
            }
            p[i]
        }
        for i in 0..n {
            let j = w_perm[i] as usize;
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a] = b;
            }
        }
        for a in 0..n {
            for b in 0..n {
                if x_classes[a] == x_classes[b] {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    if ra != rb {
                        parent[ra] = rb;
                    }
                }
            }
        }
        let mut roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
        roots.sort_unstable();
        roots.dedup();
        ((kn + 1) as u64).pow(roots.len() as u32 - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::element::Elem;
    use crate::group::GroupSpec;

    fn build(spec: &str) -> ReflectionGroup {
        ReflectionGroup::build(GroupSpec::parse(spec).unwrap()).unwrap()
    }

    #[test]
    fn park_descriptors_match_bruteforce() {
        for (spec, k) in [("A3", 1usize), ("A3", 2), ("B2", 1), ("I2:5", 1)] {
            let g = build(spec);
            let park = ParkSet::new(&g, k).unwrap();
            let rot = rot_tables(&park);
            for p in 0..park.len() as u32 {
                let desc = descriptor_of_park(&park, &rot, p);
                assert_eq!(park.kh % desc.d, 0, "minimal d divides kh");
                let generated = desc.generate(&g, park.kh);
                let brute = stabilizer_subgroup(&park, &rot, p);
                assert_eq!(generated, brute, "{spec} k={k} p={p}");
            }
        }
    }

    #[test]
    fn stabilizers_conjugate_under_action() {
        let g = build("A3");
        let park = ParkSet::new(&g, 1).unwrap();
        let rot = rot_tables(&park);
        for p in 0..park.len() as u32 {
            let stab = stabilizer_subgroup(&park, &rot, p);
            for v in 0..g.order() as ElemId {
                let q = park.act_w(v, p);
                let mut conj: Subgroup = stab
                    .iter()
                    .map(|&(u, j)| (g.conjugate(v, u), j))
                    .collect();
                conj.sort_unstable();
                assert_eq!(conj, stabilizer_subgroup(&park, &rot, q));
            }
        }
    }

    #[test]
    fn fixed_points_extremes() {
        let g = build("A3");
        let park = ParkSet::new(&g, 1).unwrap();
        let rot = rot_tables(&park);
        // trivial subgroup fixes everything
        let trivial: Subgroup = vec![(0, 0)];
        assert_eq!(fixed_points(&park, &rot, &trivial).len(), park.len());
        // all of W x {e} fixes only the origin chain
        let all_w: Subgroup = (0..g.order() as ElemId).map(|v| (v, 0u16)).collect();
        assert_eq!(fixed_points(&park, &rot, &all_w).len(), 1);
        // <(c, g)> fixes the predicted number
        let desc = StabDescriptor { flat: g.full_flat(), w: g.coxeter, d: 1 };
        let h = desc.generate(&g, park.kh);
        assert_eq!(
            fixed_points(&park, &rot, &h).len() as u64,
            crate::characters::predicted_character(&g, 1, g.coxeter, 1)
        );
    }

    #[test]
    fn bijection_park_to_itself() {
        let g = build("A3");
        let park = ParkSet::new(&g, 1).unwrap();
        match build_equivariant_bijection(&park, &park).unwrap() {
            BijectionOutcome::Built(b) => {
                assert!(b.verified);
                assert_eq!(b.map.len(), park.len());
            }
            BijectionOutcome::Mismatch { .. } => panic!("self-bijection must exist"),
        }
    }

    #[test]
    fn bijection_park_to_labeled_model() {
        for k in [1usize, 2] {
            let g = build("A3");
            let park = ParkSet::new(&g, k).unwrap();
            let labeled = LabeledPark::new(&g, k).unwrap();
            match build_equivariant_bijection(&park, &labeled).unwrap() {
                BijectionOutcome::Built(b) => assert!(b.verified, "k={k}"),
                BijectionOutcome::Mismatch { rows } => {
                    panic!("labeled model mismatch at k={k}: {rows:?}")
                }
            }
        }
    }

    #[test]
    fn admissible_function_counts() {
        // (w = e, d = kn, X = V, n = 3, k = 1): only the zero function
        let g = build("A3");
        let x_v = flat_classes(&g, g.full_flat()).unwrap();
        let fns = admissible_functions(3, 1, 1, &[0, 1, 2], &x_v);
        // d = 1, w = e: f(i) = g(f(i)) forces f = 0 on the cycle part
        assert_eq!(fns.len(), 1);
        // (w = (1,2,3), d = 1, X = V, n = 3, k = 1): 4 functions
        let w: Vec<u8> = vec![1, 2, 0];
        let fns = admissible_functions(3, 1, 1, &w, &x_v);
        assert_eq!(fns.len(), 4);
        assert_eq!(good_class_count(&w, &x_v, 3), 1);
        // refinement monotonicity: admissible for finer stays admissible
        // for coarser (X = V is the coarsest-refining case, so compare
        // against the partition {{1,2},{3}})
        let t12 = g.elem_id(&Elem::transposition(3, 0, 1)).unwrap();
        let x = flat_classes(&g, g.fixed_space(t12)).unwrap();
        let finer = admissible_functions(3, 1, 1, &w, &x);
        for f in &finer {
            assert!(fns.contains(f));
        }
    }

    #[test]
    fn admissible_partition_sum_identity() {
        // sum over admissible partitions of the falling product equals the
        // admissible function count (r > 1), exhaustively at n <= 4, k <= 2
        for (n, k) in [(3usize, 1usize), (3, 2), (4, 1), (4, 2)] {
            let g = build(&format!("A{n}"));
            let kn = n * k;
            let perms: Vec<Vec<u8>> = (0..g.order() as ElemId)
                .map(|e| match g.elem(e) {
                    Elem::Signed { perm, .. } => perm.clone(),
                    _ => unreachable!(),
                })
                .collect();
            for x in 0..g.flat_count() as FlatId {
                let Some(classes) = flat_classes(&g, x) else { continue };
                for d in (1..=kn).filter(|d| kn % d == 0) {
                    let r = kn / d;
                    if r <= 1 {
                        continue;
                    }
                    for w in &perms {
                        let fns = admissible_functions(n, k, d, w, &classes).len() as u64;
                        let parts = admissible_partitions(n, r, w, &classes);
                        let total: u64 =
                            parts.iter().map(|(_, b)| falling_by_r(kn, r, *b)).sum();
                        assert_eq!(fns, total, "n={n} k={k} d={d}");
                        // and both match the good-class formula
                        let predicted =
                            ((kn + 1) as u64).pow(good_class_count(w, &classes, r) as u32);
                        assert_eq!(fns, predicted, "n={n} k={k} d={d}");
                    }
                }
            }
        }
    }

    #[test]
    fn admissible_partition_example_a3() {
        // (w = (1,2,3), r = 3, X = V): the single stable block and the
        // three-singleton orbit, giving 1 + kn = 4 functions at k = 1
        let parts = admissible_partitions(3, 3, &[1, 2, 0], &[0, 1, 2]);
        assert_eq!(parts.len(), 2);
        let total: u64 = parts.iter().map(|(_, b)| falling_by_r(3, 3, *b)).sum();
        assert_eq!(total, 4);
        // cycle length not divisible by r: the parity obstruction leaves only
        // the stable full block (no sigma with any r-element orbit survives)
        let parts = admissible_partitions(3, 2, &[1, 2, 0], &[0, 1, 2]);
        assert!(parts.iter().all(|(_, b)| *b == 0));
        let total: u64 = parts.iter().map(|(_, b)| falling_by_r(6, 2, *b)).sum();
        assert_eq!(total, 1);
    }

    #[test]
    fn k1_stabilizers_take_the_strengthened_coxeter_form() {
        // at k = 1 the stabilizer of [v, X] is generated by W_{vX} and
        // (v c^d v^{-1}, c^d), d minimal with c^d . X = X
        for spec in ["A3", "A4", "B2", "I2:5"] {
            let g = build(spec);
            let park = ParkSet::new(&g, 1).unwrap();
            let rot = rot_tables(&park);
            for p in 0..park.len() as u32 {
                let v = park.rep(p);
                let x = park.top_flat(p);
                let vx = g.act_flat(v, x);
                let mut d = 1usize;
                let mut img = g.act_flat(g.coxeter, x);
                while img != x {
                    img = g.act_flat(g.coxeter, img);
                    d += 1;
                }
                let mut cd: ElemId = 0;
                for _ in 0..d {
                    cd = g.mult(cd, g.coxeter);
                }
                let desc = StabDescriptor { flat: vx, w: g.conjugate(v, cd), d };
                assert_eq!(
                    desc.generate(&g, park.kh),
                    stabilizer_subgroup(&park, &rot, p),
                    "{spec} p={p}"
                );
            }
        }
    }

    #[test]
    fn labeled_fixed_elements_per_partition_match_product() {
        // fixed labeled parking functions inducing a given admissible sigma
        // are counted by kn(kn-r)...(kn-(b-1)r), exhaustively at small n
        for (n, k) in [(3usize, 1usize), (3, 2), (4, 1)] {
            let g = build(&format!("A{n}"));
            let labeled = crate::parkfn::LabeledPark::new(&g, k).unwrap();
            let rot = rot_tables(&labeled);
            let kn = k * n;
            let sigma_of = |x: u32| -> Vec<usize> {
                // partition of [n] by label sets
                let mut classes = vec![0usize; n];
                for (ci, l) in labeled.elements[x as usize].labels.iter().enumerate() {
                    for &a in l {
                        classes[(a - 1) as usize] = ci;
                    }
                }
                // normalize to first-occurrence numbering
                let mut seen = std::collections::HashMap::new();
                classes
                    .iter()
                    .map(|&c| {
                        let next = seen.len();
                        *seen.entry(c).or_insert(next)
                    })
                    .collect()
            };
            let normalize = |classes: &[usize]| -> Vec<usize> {
                let mut seen = std::collections::HashMap::new();
                classes
                    .iter()
                    .map(|&c| {
                        let next = seen.len();
                        *seen.entry(c).or_insert(next)
                    })
                    .collect()
            };
            for x in 0..g.flat_count() as FlatId {
                let Some(classes) = flat_classes(&g, x) else { continue };
                for d in (1..=kn).filter(|d| kn % d == 0) {
                    let r = kn / d;
                    if r <= 1 {
                        continue;
                    }
                    for w in 0..g.order() as ElemId {
                        let w_perm = match g.elem(w) {
                            Elem::Signed { perm, .. } => perm.clone(),
                            _ => unreachable!(),
                        };
                        let desc = StabDescriptor { flat: x, w, d };
                        let h = desc.generate(&g, kn);
                        let fixed = fixed_points(&labeled, &rot, &h);
                        let mut per_sigma: std::collections::HashMap<Vec<usize>, u64> =
                            Default::default();
                        for &f in &fixed {
                            *per_sigma.entry(sigma_of(f)).or_insert(0) += 1;
                        }
                        for (sigma, b) in admissible_partitions(n, r, &w_perm, &classes) {
                            let key = normalize(&sigma);
                            let expect = falling_by_r(kn, r, b);
                            assert_eq!(
                                per_sigma.remove(&key).unwrap_or(0),
                                expect,
                                "n={n} k={k} d={d} w={w} sigma={key:?}"
                            );
                        }
                        assert!(per_sigma.is_empty(), "fixed elements induce only admissible partitions");
                    }
                }
            }
        }
    }

    #[test]
    fn locus_descriptor_counts_take_the_geometric_form() {
        // on a sampled certified locus, the fixed set of each arising
        // stabilizer equals the set of points in X ∩ E(w, zeta^{-d}),
        // with cardinality (kh+1)^dim
        let g = build("A3");
        let k = 1;
        let space = crate::hsop::hom_basis(&g, k).unwrap();
        let theta = crate::hsop::sample_theta(&space, 31);
        let config = crate::locus::TrackConfig { seed: 31, ..Default::default() };
        let sol = crate::locus::solve_homotopy(&g, &theta, k, &config)
            .unwrap()
            .certified()
            .unwrap();
        let set = LocusGSet { group: &g, sol: &sol };
        let rot = rot_tables(&set);
        for x in 0..sol.points.len() as u32 {
            let desc = descriptor_of_locus_point(&g, &sol, x, config.match_tol);
            let h = desc.generate(&g, sol.kh);
            assert_eq!(h, stabilizer_subgroup(&set, &rot, x), "descriptor generates Stab");
            let brute = fixed_points(&set, &rot, &h).len();
            let geometric =
                sol.subspace_fixed_count(&g, desc.flat, desc.w, desc.d as i64, &config);
            let dim = g.eigenspace_intersection_dim(
                desc.flat,
                desc.w,
                -(desc.d as i64),
                sol.kh,
            );
            assert_eq!(brute, geometric);
            assert_eq!(brute as u64, ((sol.kh + 1) as u64).pow(dim as u32));
        }
    }

    #[test]
    fn type_a_fixed_count_against_bruteforce() {
        for (n, k) in [(3usize, 1usize), (3, 2), (4, 1)] {
            let g = build(&format!("A{n}"));
            let park = ParkSet::new(&g, k).unwrap();
            let rot = rot_tables(&park);
            for p in 0..park.len() as u32 {
                let desc = descriptor_of_park(&park, &rot, p);
                let h = desc.generate(&g, park.kh);
                let brute = fixed_points(&park, &rot, &h).len() as u64;
                let classes = flat_classes(&g, desc.flat).unwrap();
                let w_perm = match g.elem(desc.w) {
                    Elem::Signed { perm, .. } => perm.clone(),
                    _ => unreachable!(),
                };
                let formula = type_a_fixed_count(n, k, desc.d, &w_perm, &classes);
                assert_eq!(brute, formula, "n={n} k={k} p={p} desc={desc:?}");
                // the exponent also matches the numeric eigenspace dimension
                let dim = g.eigenspace_intersection_dim(
                    desc.flat,
                    desc.w,
                    -(desc.d as i64),
                    park.kh,
                );
                assert_eq!(
                    formula,
                    ((park.kh + 1) as u64).pow(dim as u32),
                    "numeric dimension disagrees"
                );
            }
        }
    }
}
