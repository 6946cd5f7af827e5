//! Noncrossing parking functions.
//!
//! The main object is [`ParkSet`]: equivalence classes
//! `[w, X_1 ⊇ ... ⊇ X_k]` of a group element modulo the parabolic subgroup of
//! the top flat, acted on by `W x Z_kh` via
//! `(v, g).[w, chain] = [v w u_k c^{-1}, g.chain]` with `u_k` the unique
//! noncrossing element whose fixed space is `X_k`.
//!
//! For the symmetric group there is also the independent labeled model: a
//! k-divisible noncrossing partition of `[kn]` whose blocks carry label sets
//! partitioning `[n]`. Its action is implemented directly (labels permute,
//! the disc rotates); agreement with the coset model is established by the
//! sieve, not assumed.

use crate::error::Error;
use crate::group::element::Elem;
use crate::group::{ElemId, FlatId, ReflectionGroup};
use crate::noncrossing::{partition_is_noncrossing, Noncrossing};
use crate::Result;
use std::collections::HashMap;

pub type ParkId = u32;

/// The set Park(W, k) with canonical representatives and O(1) actions.
pub struct ParkSet<'g> {
    pub group: &'g ReflectionGroup,
    pub k: usize,
    pub kh: usize,
    pub nc: Noncrossing<'g>,
    /// multichains as NC indices
    pub chains: Vec<Vec<u16>>,
    /// rotation on chains
    g_chain: Vec<u32>,
    /// top flat X_1 per chain
    chain_x1: Vec<FlatId>,
    /// u_k c^{-1} per chain
    chain_ukcinv: Vec<ElemId>,
    /// (canonical coset representative, chain id)
    pub elements: Vec<(ElemId, u32)>,
    index: HashMap<(ElemId, u32), ParkId>,
}

impl<'g> ParkSet<'g> {
    pub fn new(group: &'g ReflectionGroup, k: usize) -> Result<ParkSet<'g>> {
        if k == 0 {
            return Err(Error::invalid("k must be positive"));
        }
        let nc = Noncrossing::new(group);
        let chains = nc.multichains(k);
        let chain_index: HashMap<Vec<u16>, u32> =
            chains.iter().enumerate().map(|(i, c)| (c.clone(), i as u32)).collect();
        let mut g_chain = Vec::with_capacity(chains.len());
        let mut chain_x1 = Vec::with_capacity(chains.len());
        let mut chain_ukcinv = Vec::with_capacity(chains.len());
        for chain_idx in &chains {
            let chain: Vec<ElemId> =
                chain_idx.iter().map(|&i| nc.elements[i as usize]).collect();
            let rotated = nc.rotate_chain(&chain)?;
            let rotated_idx: Vec<u16> = rotated
                .iter()
                .map(|w| nc.idx(*w).expect("rotation leaves NC") as u16)
                .collect();
            g_chain.push(chain_index[&rotated_idx]);
            chain_x1.push(nc.flat_of[chain_idx[0] as usize]);
            let uk = *chain.last().unwrap();
            chain_ukcinv.push(group.mult(uk, group.inv(group.coxeter)));
        }
        let mut elements = Vec::new();
        let mut index = HashMap::new();
        for (ci, _) in chains.iter().enumerate() {
            let x1 = chain_x1[ci];
            let mut reps: Vec<ElemId> = (0..group.order() as ElemId)
                .filter(|&w| group.coset_rep(x1, w) == w)
                .collect();
            reps.sort_by_key(|&w| group.ord_rank(w));
            for w in reps {
                index.insert((w, ci as u32), elements.len() as ParkId);
                elements.push((w, ci as u32));
            }
        }
        Ok(ParkSet { group, k, kh: k * group.h, nc, chains, g_chain, chain_x1, chain_ukcinv, elements, index })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn rep(&self, p: ParkId) -> ElemId {
        self.elements[p as usize].0
    }

    pub fn chain_of(&self, p: ParkId) -> u32 {
        self.elements[p as usize].1
    }

    pub fn top_flat(&self, p: ParkId) -> FlatId {
        self.chain_x1[self.chain_of(p) as usize]
    }

    /// Left multiplication action of `v` in W.
    pub fn act_w(&self, v: ElemId, p: ParkId) -> ParkId {
        let (w, ci) = self.elements[p as usize];
        let nw = self.group.coset_rep(self.chain_x1[ci as usize], self.group.mult(v, w));
        self.index[&(nw, ci)]
    }

    /// Action of the distinguished rotation generator.
    pub fn act_g(&self, p: ParkId) -> ParkId {
        let (w, ci) = self.elements[p as usize];
        let nc_ci = self.g_chain[ci as usize];
        let nw = self
            .group
            .coset_rep(self.chain_x1[nc_ci as usize], self.group.mult(w, self.chain_ukcinv[ci as usize]));
        self.index[&(nw, nc_ci)]
    }

    /// Action of `(v, g^j)`.
    pub fn act(&self, v: ElemId, j: usize, p: ParkId) -> ParkId {
        let mut q = p;
        for _ in 0..j % self.kh {
            q = self.act_g(q);
        }
        self.act_w(v, q)
    }

    /// Stable serialization for canonical orderings across runs.
    pub fn ser_key(&self, p: ParkId) -> Vec<u8> {
        let (w, ci) = self.elements[p as usize];
        let mut key: Vec<u8> = Vec::new();
        for &i in &self.chains[ci as usize] {
            key.push((i & 0xff) as u8);
            key.push((i >> 8) as u8);
        }
        key.extend(self.group.elem(w).ser_key());
        key
    }
}

/// A labeled k-divisible noncrossing partition: blocks of [kn] (1-based,
/// canonically sorted) and, aligned with them, label subsets of [n] with
/// |label| = |block| / k, jointly partitioning [n].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LabeledNc {
    pub blocks: Vec<Vec<u8>>,
    pub labels: Vec<Vec<u8>>,
}

impl LabeledNc {
    fn canonicalize(&mut self) {
        let mut paired: Vec<(Vec<u8>, Vec<u8>)> = self
            .blocks
            .drain(..)
            .zip(self.labels.drain(..))
            .map(|(mut b, mut l)| {
                b.sort_unstable();
                l.sort_unstable();
                (b, l)
            })
            .collect();
        paired.sort();
        for (b, l) in paired {
            self.blocks.push(b);
            self.labels.push(l);
        }
    }
}

/// The labeled model for the symmetric group on `n` letters.
pub struct LabeledPark<'g> {
    pub group: &'g ReflectionGroup,
    pub n: usize,
    pub k: usize,
    pub elements: Vec<LabeledNc>,
    index: HashMap<LabeledNc, u32>,
}

impl<'g> LabeledPark<'g> {
    pub fn new(group: &'g ReflectionGroup, k: usize) -> Result<LabeledPark<'g>> {
        if !group.is_type_a() {
            return Err(Error::invalid("labeled model requires type A"));
        }
        let n = group.spec.n;
        let kn = k * n;
        if kn > 60 {
            return Err(Error::config("labeled model enumeration supported for kn <= 60"));
        }
        let mut partitions = Vec::new();
        enumerate_kdivisible(kn, k, &mut partitions);
        let mut elements = Vec::new();
        for blocks in &partitions {
            let sizes: Vec<usize> = blocks.iter().map(|b| b.len() / k).collect();
            let mut labels: Vec<Vec<u8>> = vec![Vec::new(); blocks.len()];
            assign_labels(&sizes, 0, &mut vec![false; n], &mut labels, &mut |ls| {
                let mut e = LabeledNc { blocks: blocks.clone(), labels: ls.to_vec() };
                e.canonicalize();
                elements.push(e);
            });
        }
        elements.sort_by(|a, b| (&a.blocks, &a.labels).cmp(&(&b.blocks, &b.labels)));
        elements.dedup();
        let index = elements.iter().enumerate().map(|(i, e)| (e.clone(), i as u32)).collect();
        Ok(LabeledPark { group, n, k, elements, index })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn id_of(&self, e: &LabeledNc) -> Option<u32> {
        self.index.get(e).copied()
    }

    /// Wire form of one element: 1-based blocks and label sets.
    pub fn wire(&self, x: u32) -> serde_json::Value {
        let e = &self.elements[x as usize];
        serde_json::json!({ "pi": e.blocks, "labels": e.labels })
    }

    /// W permutes labels and fixes the partition.
    pub fn act_w(&self, v: ElemId, x: u32) -> u32 {
        let perm = match self.group.elem(v) {
            Elem::Signed { perm, .. } => perm,
            _ => unreachable!(),
        };
        let src = &self.elements[x as usize];
        let mut out = LabeledNc {
            blocks: src.blocks.clone(),
            labels: src
                .labels
                .iter()
                .map(|l| l.iter().map(|&a| perm[(a - 1) as usize] + 1).collect())
                .collect(),
        };
        out.canonicalize();
        self.index[&out]
    }

    /// The rotation generator shifts the disc by +1; labels ride along.
    pub fn act_g(&self, x: u32) -> u32 {
        let kn = (self.k * self.n) as u8;
        let src = &self.elements[x as usize];
        let mut out = LabeledNc {
            blocks: src
                .blocks
                .iter()
                .map(|b| b.iter().map(|&p| (p % kn) + 1).collect())
                .collect(),
            labels: src.labels.clone(),
        };
        out.canonicalize();
        self.index[&out]
    }

    pub fn ser_key(&self, x: u32) -> Vec<u8> {
        let e = &self.elements[x as usize];
        let mut key = Vec::new();
        for (b, l) in e.blocks.iter().zip(&e.labels) {
            key.extend_from_slice(b);
            key.push(0xff);
            key.extend_from_slice(l);
            key.push(0xfe);
        }
        key
    }
}

/// All noncrossing partitions of [m] with every block size divisible by k.
fn enumerate_kdivisible(m: usize, k: usize, out: &mut Vec<Vec<Vec<u8>>>) {
    fn is_kdiv(blocks: &[Vec<u8>], k: usize) -> bool {
        blocks.iter().all(|b| b.len() % k == 0)
    }
    // Generate all noncrossing partitions by linear scan: each element either
    // joins an "open" block on the stack discipline or opens a new one.
    // Simpler at desk scale: enumerate all partitions via restricted growth,
    // filter noncrossing + divisibility.
    fn rec(m: usize, i: u8, blocks: &mut Vec<Vec<u8>>, out: &mut Vec<Vec<Vec<u8>>>, k: usize) {
        if i as usize > m {
            if is_kdiv(blocks, k) && partition_is_noncrossing(blocks) {
                let mut canon = blocks.clone();
                canon.sort();
                out.push(canon);
            }
            return;
        }
        for bi in 0..blocks.len() {
            blocks[bi].push(i);
            rec(m, i + 1, blocks, out, k);
            blocks[bi].pop();
        }
        blocks.push(vec![i]);
        rec(m, i + 1, blocks, out, k);
        blocks.pop();
    }
    let mut blocks = Vec::new();
    rec(m, 1, &mut blocks, out, k);
    out.sort();
    out.dedup();
}

/// Assign label subsets of [n] (1-based) of prescribed sizes to blocks.
fn assign_labels(
    sizes: &[usize],
    bi: usize,
    used: &mut Vec<bool>,
    labels: &mut Vec<Vec<u8>>,
    emit: &mut impl FnMut(&[Vec<u8>]),
) {
    if bi == sizes.len() {
        emit(labels);
        return;
    }
    fn choose(
        sizes: &[usize],
        bi: usize,
        start: usize,
        used: &mut Vec<bool>,
        labels: &mut Vec<Vec<u8>>,
        emit: &mut impl FnMut(&[Vec<u8>]),
    ) {
        if labels[bi].len() == sizes[bi] {
            assign_labels(sizes, bi + 1, used, labels, emit);
            return;
        }
        for a in start..used.len() {
            if used[a] {
                continue;
            }
            used[a] = true;
            labels[bi].push((a + 1) as u8);
            choose(sizes, bi, a + 1, used, labels, emit);
            labels[bi].pop();
            used[a] = false;
        }
    }
    choose(sizes, bi, 0, used, labels, emit);
}

/// Classical Fuss parking functions of size n: nondecreasing rearrangement
/// bounded by k(i-1)+1.
pub fn classical_fuss_enumerate(n: usize, k: usize) -> Result<Vec<Vec<u8>>> {
    if n > 6 || k * (n - 1) + 1 > 250 {
        return Err(Error::config("classical enumeration supported for n <= 6 and small k"));
    }
    let maxv = (k * (n - 1) + 1) as u8;
    let mut out = Vec::new();
    let mut seq = vec![1u8; n];
    loop {
        let mut sorted = seq.clone();
        sorted.sort_unstable();
        if sorted.iter().enumerate().all(|(i, &b)| b as usize <= k * i + 1) {
            out.push(seq.clone());
        }
        // odometer
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            if seq[pos] < maxv {
                seq[pos] += 1;
                for v in seq.iter_mut().skip(pos + 1) {
                    *v = 1;
                }
                break;
            }
        }
    }
}

/// Fixed points of the subscript permutation action, by brute force.
pub fn classical_fixed_count_bruteforce(perm: &[u8], n: usize, k: usize) -> Result<usize> {
    let all = classical_fuss_enumerate(n, k)?;
    Ok(all
        .iter()
        .filter(|a| (0..n).all(|i| a[perm[i] as usize] == a[i]))
        .count())
}

/// The closed form (kn+1)^{cyc(w)-1}.
pub fn classical_fixed_count_formula(cycles: usize, n: usize, k: usize) -> u64 {
    (k as u64 * n as u64 + 1).pow(cycles as u32 - 1)
}
