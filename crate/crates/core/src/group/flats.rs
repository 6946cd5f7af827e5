//! Flats of the Coxeter arrangement: combinatorial encodings per type plus
//! derived numeric bases.
//!
//! A flat is canonically keyed by its combinatorial encoding (set partition,
//! signed set partition with optional zero block, or one of V / line / origin
//! for the dihedral family), so equality and hashing are exact. Lexicographic
//! minimality of the block encoding makes the canonical form unique.

use super::element::Elem;
use crate::num::{orthonormalize, CMat, C, RANK_TOL};

/// Canonical combinatorial encoding of a flat.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum FlatKey {
    /// Type A: set partition of the letters, blocks sorted by least member.
    Partition(Vec<Vec<u8>>),
    /// Types B/D: signed blocks (least member carries +) plus a zero block.
    Signed { blocks: Vec<Vec<(u8, bool)>>, zero: Vec<u8> },
    /// Dihedral: the whole plane, the fixed line of reflection `r^j s`, or 0.
    Dihedral(DihedralFlat),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum DihedralFlat {
    Whole,
    Line(u16),
    Origin,
}

impl FlatKey {
    /// Wire form: 1-based blocks / signed blocks / dihedral tag.
    pub fn wire(&self) -> serde_json::Value {
        match self {
            FlatKey::Partition(blocks) => serde_json::json!({
                "partition": blocks
                    .iter()
                    .map(|b| b.iter().map(|&i| i + 1).collect::<Vec<u8>>())
                    .collect::<Vec<_>>()
            }),
            FlatKey::Signed { blocks, zero } => serde_json::json!({
                "signed_blocks": blocks
                    .iter()
                    .map(|b| {
                        b.iter()
                            .map(|&(i, s)| (i as i16 + 1) * if s { -1 } else { 1 })
                            .collect::<Vec<i16>>()
                    })
                    .collect::<Vec<_>>(),
                "zero_block": zero.iter().map(|&i| i + 1).collect::<Vec<u8>>(),
            }),
            FlatKey::Dihedral(df) => match df {
                DihedralFlat::Whole => serde_json::json!({"dihedral": "plane"}),
                DihedralFlat::Line(j) => serde_json::json!({"dihedral": "line", "index": j}),
                DihedralFlat::Origin => serde_json::json!({"dihedral": "origin"}),
            },
        }
    }

    pub fn canonical_partition(mut blocks: Vec<Vec<u8>>) -> FlatKey {
        for b in blocks.iter_mut() {
            b.sort_unstable();
        }
        blocks.sort();
        FlatKey::Partition(blocks)
    }

    pub fn canonical_signed(mut blocks: Vec<Vec<(u8, bool)>>, mut zero: Vec<u8>) -> FlatKey {
        for b in blocks.iter_mut() {
            b.sort_unstable();
            if b[0].1 {
                for e in b.iter_mut() {
                    e.1 = !e.1;
                }
            }
        }
        blocks.sort();
        zero.sort_unstable();
        FlatKey::Signed { blocks, zero }
    }

    /// Dimension of the subspace, in the reflection representation.
    pub fn dim(&self, rank: usize) -> usize {
        match self {
            FlatKey::Partition(blocks) => blocks.len() - 1,
            FlatKey::Signed { blocks, .. } => blocks.len(),
            FlatKey::Dihedral(DihedralFlat::Whole) => rank,
            FlatKey::Dihedral(DihedralFlat::Line(_)) => 1,
            FlatKey::Dihedral(DihedralFlat::Origin) => 0,
        }
    }
}

/// Fixed space of an element, as a canonical flat key.
///
/// Type A: points constant on cycles. B/D: one dimension per positive signed
/// cycle, negative cycles force zero coordinates. Dihedral: the whole plane,
/// a reflection line, or the origin.
pub fn fixed_space_key(e: &Elem, type_a: bool) -> FlatKey {
    match e {
        Elem::Signed { .. } if type_a => FlatKey::canonical_partition(e.cycles()),
        Elem::Signed { .. } => {
            let mut blocks = Vec::new();
            let mut zero = Vec::new();
            for (cyc, acc, negative) in e.signed_cycles() {
                if negative {
                    zero.extend(cyc);
                } else {
                    blocks.push(cyc.into_iter().zip(acc).collect());
                }
            }
            FlatKey::canonical_signed(blocks, zero)
        }
        Elem::Dihedral { rot, refl } => {
            if e.is_identity() {
                FlatKey::Dihedral(DihedralFlat::Whole)
            } else if *refl {
                FlatKey::Dihedral(DihedralFlat::Line(*rot))
            } else {
                FlatKey::Dihedral(DihedralFlat::Origin)
            }
        }
    }
}

/// Image of a flat under a group element, acting on the encoding.
pub fn act_on_key(e: &Elem, key: &FlatKey, m: usize) -> FlatKey {
    match (e, key) {
        (Elem::Signed { perm, flip: _ }, FlatKey::Partition(blocks)) => {
            FlatKey::canonical_partition(
                blocks
                    .iter()
                    .map(|b| b.iter().map(|&i| perm[i as usize]).collect())
                    .collect(),
            )
        }
        (Elem::Signed { perm, flip }, FlatKey::Signed { blocks, zero }) => {
            let imaged = blocks
                .iter()
                .map(|b| {
                    b.iter()
                        .map(|&(i, s)| {
                            let flipped = ((flip >> i) & 1) == 1;
                            (perm[i as usize], s ^ flipped)
                        })
                        .collect()
                })
                .collect();
            let zero = zero.iter().map(|&i| perm[i as usize]).collect();
            FlatKey::canonical_signed(imaged, zero)
        }
        (Elem::Dihedral { rot, refl }, FlatKey::Dihedral(df)) => FlatKey::Dihedral(match df {
            DihedralFlat::Whole => DihedralFlat::Whole,
            DihedralFlat::Origin => DihedralFlat::Origin,
            DihedralFlat::Line(j) => {
                let (a, j, m) = (*rot as i64, *j as i64, m as i64);
                let img = if *refl { (2 * a - j).rem_euclid(m) } else { (2 * a + j).rem_euclid(m) };
                DihedralFlat::Line(img as u16)
            }
        }),
        _ => panic!("flat/element family mismatch"),
    }
}

/// Does `e` fix the flat pointwise?
pub fn fixes_pointwise(e: &Elem, key: &FlatKey) -> bool {
    match (e, key) {
        (Elem::Signed { perm, flip }, FlatKey::Partition(blocks)) => {
            let mut class = vec![0usize; perm.len()];
            for (ci, b) in blocks.iter().enumerate() {
                for &i in b {
                    class[i as usize] = ci;
                }
            }
            // No sign flips in type A, so pointwise fixing is blockwise closure.
            *flip == 0 && (0..perm.len()).all(|i| class[i] == class[perm[i] as usize])
        }
        (Elem::Signed { perm, flip }, FlatKey::Signed { blocks, zero }) => {
            let n = perm.len();
            // class id per index: usize::MAX = zero block.
            let mut class = vec![usize::MAX; n];
            let mut sign = vec![false; n];
            for (ci, b) in blocks.iter().enumerate() {
                for &(i, s) in b {
                    class[i as usize] = ci;
                    sign[i as usize] = s;
                }
            }
            for &i in zero {
                class[i as usize] = usize::MAX;
            }
            (0..n).all(|i| {
                let j = perm[i] as usize;
                if class[i] == usize::MAX {
                    class[j] == usize::MAX
                } else {
                    let flipped = ((flip >> i) & 1) == 1;
                    class[j] == class[i] && (sign[i] ^ flipped) == sign[j]
                }
            })
        }
        (Elem::Dihedral { .. }, FlatKey::Dihedral(df)) => match df {
            DihedralFlat::Whole => e.is_identity(),
            DihedralFlat::Origin => true,
            DihedralFlat::Line(j) => {
                e.is_identity() || *e == Elem::Dihedral { rot: *j, refl: true }
            }
        },
        _ => panic!("flat/element family mismatch"),
    }
}

/// Intersection of two flats, as a canonical key.
pub fn meet(a: &FlatKey, b: &FlatKey) -> FlatKey {
    match (a, b) {
        (FlatKey::Partition(ba), FlatKey::Partition(bb)) => {
            let n = ba.iter().map(|b| b.len()).sum::<usize>();
            let mut uf = UnionFind::new(n);
            for blocks in [ba, bb] {
                for blk in blocks {
                    for w in blk.windows(2) {
                        uf.union(w[0] as usize, w[1] as usize, false);
                    }
                }
            }
            let mut groups: std::collections::BTreeMap<usize, Vec<u8>> = Default::default();
            for i in 0..n {
                groups.entry(uf.find(i).0).or_default().push(i as u8);
            }
            FlatKey::canonical_partition(groups.into_values().collect())
        }
        (FlatKey::Signed { .. }, FlatKey::Signed { .. }) => {
            let n = signed_support(a);
            let mut uf = UnionFind::new(n);
            let mut zeroed = vec![false; n];
            for key in [a, b] {
                if let FlatKey::Signed { blocks, zero } = key {
                    for blk in blocks {
                        for w in blk.windows(2) {
                            // union with relative sign between consecutive members
                            let rel = w[0].1 ^ w[1].1;
                            if !uf.union(w[0].0 as usize, w[1].0 as usize, rel) {
                                zeroed[uf.find(w[0].0 as usize).0] = true;
                            }
                        }
                    }
                    for &z in zero {
                        zeroed[uf.find(z as usize).0] = true;
                    }
                }
            }
            // Propagate zero marks to final roots.
            let marks: Vec<usize> =
                (0..n).filter(|&i| zeroed[i]).map(|i| uf.find(i).0).collect();
            let mut is_zero = vec![false; n];
            for r in marks {
                is_zero[r] = true;
            }
            let mut groups: std::collections::BTreeMap<usize, Vec<(u8, bool)>> = Default::default();
            let mut zero = Vec::new();
            for i in 0..n {
                let (r, s) = uf.find(i);
                if is_zero[r] {
                    zero.push(i as u8);
                } else {
                    groups.entry(r).or_default().push((i as u8, s));
                }
            }
            FlatKey::canonical_signed(groups.into_values().collect(), zero)
        }
        (FlatKey::Dihedral(da), FlatKey::Dihedral(db)) => FlatKey::Dihedral(match (da, db) {
            (DihedralFlat::Whole, x) | (x, DihedralFlat::Whole) => *x,
            (DihedralFlat::Origin, _) | (_, DihedralFlat::Origin) => DihedralFlat::Origin,
            (DihedralFlat::Line(i), DihedralFlat::Line(j)) => {
                if i == j {
                    DihedralFlat::Line(*i)
                } else {
                    DihedralFlat::Origin
                }
            }
        }),
        _ => panic!("flat family mismatch"),
    }
}

fn signed_support(key: &FlatKey) -> usize {
    match key {
        FlatKey::Signed { blocks, zero } => {
            blocks.iter().map(|b| b.len()).sum::<usize>() + zero.len()
        }
        _ => unreachable!(),
    }
}

/// Union-find with a relative-sign parity on each edge.
struct UnionFind {
    parent: Vec<usize>,
    // parity to parent
    par: Vec<bool>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), par: vec![false; n] }
    }

    /// Returns (root, parity of i relative to root).
    fn find(&mut self, i: usize) -> (usize, bool) {
        if self.parent[i] == i {
            return (i, false);
        }
        let (r, p) = self.find(self.parent[i]);
        self.parent[i] = r;
        self.par[i] ^= p;
        (r, self.par[i])
    }

    /// Union with i ~ j at relative parity `rel`; false if inconsistent.
    fn union(&mut self, i: usize, j: usize, rel: bool) -> bool {
        let (ri, pi) = self.find(i);
        let (rj, pj) = self.find(j);
        if ri == rj {
            return pi ^ pj == rel;
        }
        self.parent[rj] = ri;
        self.par[rj] = pi ^ pj ^ rel;
        true
    }
}

/// Orthonormal numeric basis of a flat, in reflection-representation
/// coordinates. `proj` is the type A ambient-to-quotient basis (n x (n-1)),
/// unused for the other families. `zeta` is the primitive m-th root for I2.
pub fn numeric_basis(key: &FlatKey, rank: usize, proj: Option<&CMat>, zeta: C) -> CMat {
    match key {
        FlatKey::Partition(blocks) => {
            let proj = proj.expect("type A projection basis");
            let n = proj.rows;
            let mut cols = Vec::new();
            for b in blocks {
                let mut v = vec![C::new(0.0, 0.0); n];
                for &i in b {
                    v[i as usize] = C::new(1.0, 0.0);
                }
                // project into quotient coordinates: B^T v
                cols.push(proj.conj_transpose().matvec(&v));
            }
            orthonormalize(&CMat::from_cols(&cols), RANK_TOL)
        }
        FlatKey::Signed { blocks, .. } => {
            let mut cols = Vec::new();
            for b in blocks {
                let mut v = vec![C::new(0.0, 0.0); rank];
                for &(i, s) in b {
                    v[i as usize] = C::new(if s { -1.0 } else { 1.0 }, 0.0);
                }
                cols.push(v);
            }
            orthonormalize(&CMat::from_cols(&cols), RANK_TOL)
        }
        FlatKey::Dihedral(df) => match df {
            DihedralFlat::Whole => CMat::identity(2),
            DihedralFlat::Origin => CMat::zeros(2, 0),
            DihedralFlat::Line(j) => {
                let zj = zeta.powu(*j as u32);
                let s = 1.0 / 2.0f64.sqrt();
                CMat::from_cols(&[vec![zj * s, C::new(s, 0.0)]])
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_meet_is_join_of_relations() {
        let a = FlatKey::canonical_partition(vec![vec![0, 1], vec![2], vec![3]]);
        let b = FlatKey::canonical_partition(vec![vec![1, 2], vec![0], vec![3]]);
        let m = meet(&a, &b);
        assert_eq!(
            m,
            FlatKey::canonical_partition(vec![vec![0, 1, 2], vec![3]])
        );
    }

    #[test]
    fn signed_meet_with_conflict_zeroes_block() {
        // x0 = x1  meet  x0 = -x1  =>  x0 = x1 = 0.
        let a = FlatKey::canonical_signed(vec![vec![(0, false), (1, false)]], vec![]);
        let b = FlatKey::canonical_signed(vec![vec![(0, false), (1, true)]], vec![]);
        let m = meet(&a, &b);
        assert_eq!(m, FlatKey::canonical_signed(vec![], vec![0, 1]));
    }
}
