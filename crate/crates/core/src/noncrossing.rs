//! Absolute order and noncrossing structure attached to a fixed Coxeter
//! element: the interval NC(W) = [e, c], its k-element multichains, the
//! length-additive factorizations of c, the difference/sum bijections between
//! the two, and the generalized rotation action of Z_kh.
//!
//! All of this is computed relative to the Coxeter element recorded on the
//! group (product of the simple generators in index order; `(1,2,...,n)` in
//! type A).

use crate::error::Error;
use crate::group::{ElemId, FlatId, ReflectionGroup};
use crate::Result;
use std::collections::HashMap;

/// Is `u <= w` in absolute order (reflection lengths additive)?
pub fn absolute_leq(g: &ReflectionGroup, u: ElemId, w: ElemId) -> bool {
    g.reflection_length(u) + g.reflection_length(g.mult(g.inv(u), w)) == g.reflection_length(w)
}

/// NC(W) with its internal order data.
pub struct Noncrossing<'g> {
    pub group: &'g ReflectionGroup,
    /// the interval [e, c], sorted by (length, lex) canonical order
    pub elements: Vec<ElemId>,
    index: HashMap<ElemId, usize>,
    /// leq[u * len + w] : u <= w within NC
    leq: Vec<bool>,
    /// fixed space per NC element
    pub flat_of: Vec<FlatId>,
    /// inverse of the injection NC -> flats
    u_of_flat: HashMap<FlatId, usize>,
}

impl<'g> Noncrossing<'g> {
    /// Enumerate [e, c] by breadth-first multiplication by reflections with
    /// length-additivity pruning.
    pub fn new(group: &'g ReflectionGroup) -> Noncrossing<'g> {
        let c = group.coxeter;
        let n = group.rank;
        let mut seen = vec![false; group.order()];
        seen[0] = true;
        let mut frontier: Vec<ElemId> = vec![0];
        let mut elements: Vec<ElemId> = vec![0];
        for _level in 0..n {
            let mut next = Vec::new();
            for &w in &frontier {
                for &t in &group.reflections {
                    let wt = group.mult(w, t);
                    if seen[wt as usize] {
                        continue;
                    }
                    if group.reflection_length(wt) == group.reflection_length(w) + 1
                        && absolute_leq(group, wt, c)
                    {
                        seen[wt as usize] = true;
                        next.push(wt);
                        elements.push(wt);
                    }
                }
            }
            frontier = next;
        }
        elements.sort_by_key(|&e| group.ord_rank(e));
        let index: HashMap<ElemId, usize> =
            elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let len = elements.len();
        let mut leq = vec![false; len * len];
        for (i, &u) in elements.iter().enumerate() {
            for (j, &w) in elements.iter().enumerate() {
                leq[i * len + j] = absolute_leq(group, u, w);
            }
        }
        let flat_of: Vec<FlatId> = elements.iter().map(|&e| group.fixed_space(e)).collect();
        let mut u_of_flat = HashMap::new();
        for (i, &f) in flat_of.iter().enumerate() {
            // the fixed-space map is injective on NC(W)
            let prev = u_of_flat.insert(f, i);
            assert!(prev.is_none(), "fixed-space map not injective on NC");
        }
        Noncrossing { group, elements, index, leq, flat_of, u_of_flat }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, e: ElemId) -> bool {
        self.index.contains_key(&e)
    }

    pub fn idx(&self, e: ElemId) -> Option<usize> {
        self.index.get(&e).copied()
    }

    pub fn leq_idx(&self, u: usize, w: usize) -> bool {
        self.leq[u * self.elements.len() + w]
    }

    /// The unique noncrossing element with the given fixed space, if the flat
    /// is noncrossing.
    pub fn element_of_flat(&self, f: FlatId) -> Option<ElemId> {
        self.u_of_flat.get(&f).map(|&i| self.elements[i])
    }

    pub fn is_noncrossing_flat(&self, f: FlatId) -> bool {
        self.u_of_flat.contains_key(&f)
    }

    /// All k-element multichains (w_1 <= ... <= w_k), as NC indices, in
    /// lexicographic order of index sequences.
    pub fn multichains(&self, k: usize) -> Vec<Vec<u16>> {
        assert!(k >= 1);
        fn rec(nc: &Noncrossing, k: usize, chain: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
            if chain.len() == k {
                out.push(chain.clone());
                return;
            }
            let lo = *chain.last().unwrap() as usize;
            let len = nc.len();
            for next in 0..len {
                if nc.leq[lo * len + next] {
                    chain.push(next as u16);
                    rec(nc, k, chain, out);
                    chain.pop();
                }
            }
        }
        let mut out = Vec::new();
        let mut chain: Vec<u16> = Vec::with_capacity(k);
        for first in 0..self.len() {
            chain.push(first as u16);
            rec(self, k, &mut chain, &mut out);
            chain.pop();
        }
        out
    }

    fn check_multichain(&self, chain: &[ElemId]) -> Result<()> {
        if chain.is_empty() {
            return Err(Error::invalid("empty multichain"));
        }
        for &w in chain {
            if !self.contains(w) {
                return Err(Error::invalid("multichain element outside NC(W)"));
            }
        }
        for pair in chain.windows(2) {
            if !absolute_leq(self.group, pair[0], pair[1]) {
                return Err(Error::invalid("multichain violates absolute order"));
            }
        }
        Ok(())
    }

    pub fn check_factorization(&self, fact: &[ElemId]) -> Result<()> {
        if fact.len() < 2 {
            return Err(Error::invalid("factorization needs length >= 2"));
        }
        let g = self.group;
        let mut prod = fact[0];
        let mut lensum = g.reflection_length(fact[0]);
        for &w in &fact[1..] {
            prod = g.mult(prod, w);
            lensum += g.reflection_length(w);
        }
        if prod != g.coxeter || lensum != g.rank {
            return Err(Error::invalid("not a length-additive factorization of c"));
        }
        Ok(())
    }

    /// Difference map: (w_1,...,w_k) -> (w_1, w_1^{-1}w_2, ..., w_k^{-1}c).
    pub fn delta(&self, chain: &[ElemId]) -> Result<Vec<ElemId>> {
        self.check_multichain(chain)?;
        let g = self.group;
        let mut fact = Vec::with_capacity(chain.len() + 1);
        fact.push(chain[0]);
        for pair in chain.windows(2) {
            fact.push(g.mult(g.inv(pair[0]), pair[1]));
        }
        fact.push(g.mult(g.inv(*chain.last().unwrap()), g.coxeter));
        Ok(fact)
    }

    /// Sum map, the inverse bijection: prefix products
    /// (w_0, w_1, ..., w_k) -> (w_0, w_0 w_1, ..., w_0 w_1 ... w_{k-1}).
    pub fn integrate(&self, fact: &[ElemId]) -> Result<Vec<ElemId>> {
        self.check_factorization(fact)?;
        let g = self.group;
        let mut chain = Vec::with_capacity(fact.len() - 1);
        let mut acc = fact[0];
        chain.push(acc);
        for &w in &fact[1..fact.len() - 1] {
            acc = g.mult(acc, w);
            chain.push(acc);
        }
        Ok(chain)
    }

    /// The generalized rotation generator on factorizations:
    /// g.(w_0,...,w_k) = (v, c w_k c^{-1}, w_1, ..., w_{k-1}) with
    /// v = (c w_k c^{-1}) w_0 (c w_k c^{-1})^{-1}.
    pub fn rotate(&self, fact: &[ElemId]) -> Vec<ElemId> {
        let g = self.group;
        let k = fact.len() - 1;
        let conj = g.conjugate(g.coxeter, fact[k]);
        let v = g.conjugate(conj, fact[0]);
        let mut out = Vec::with_capacity(fact.len());
        out.push(v);
        out.push(conj);
        out.extend_from_slice(&fact[1..k]);
        out
    }

    /// Rotation transported to multichains via the sum/difference bijections.
    pub fn rotate_chain(&self, chain: &[ElemId]) -> Result<Vec<ElemId>> {
        self.integrate(&self.rotate(&self.delta(chain)?))
    }

    /// Descending chain of fixed-space flats X_i = V^{w_i}.
    pub fn to_flat_chain(&self, chain: &[ElemId]) -> Result<Vec<FlatId>> {
        self.check_multichain(chain)?;
        Ok(chain.iter().map(|&w| self.group.fixed_space(w)).collect())
    }

    /// Type A only: the k-divisible noncrossing partition of [kn] attached to
    /// a multichain. Blocks are 1-based and canonically sorted.
    ///
    /// Construction: write the factorization (d_0, d_1, ..., d_k) of the
    /// chain, inflate each d_j onto the residue class {j, j+k, ...} of [kn],
    /// and take the cycle partition of `big_cycle . tau^{-1}` where tau is
    /// the product of the inflations for j = 1..k. Generalized rotation then
    /// becomes the +1 shift on [kn].
    pub fn type_a_kdivisible(&self, chain: &[ElemId]) -> Result<Vec<Vec<u8>>> {
        if !self.group.is_type_a() {
            return Err(Error::invalid("k-divisible partition model requires type A"));
        }
        let fact = self.delta(chain)?;
        let n = self.group.spec.n;
        let k = chain.len();
        let kn = k * n;
        if kn > 250 {
            return Err(Error::invalid("k-divisible model supported for kn <= 250"));
        }
        // tau over 0-based positions q = k*i + j  (letter i, class j+1)
        let mut tau = vec![0usize; kn];
        for (j, &f) in fact.iter().enumerate().skip(1) {
            let perm = match self.group.elem(f) {
                crate::group::element::Elem::Signed { perm, .. } => perm,
                _ => unreachable!(),
            };
            for i in 0..n {
                tau[i * k + (j - 1)] = perm[i] as usize * k + (j - 1);
            }
        }
        let mut tau_inv = vec![0usize; kn];
        for q in 0..kn {
            tau_inv[tau[q]] = q;
        }
        let sigma: Vec<usize> = (0..kn).map(|q| (tau_inv[q] + 1) % kn).collect();
        // cycles of sigma, as 1-based blocks
        let mut seen = vec![false; kn];
        let mut blocks = Vec::new();
        for start in 0..kn {
            if seen[start] {
                continue;
            }
            let mut blk = Vec::new();
            let mut q = start;
            while !seen[q] {
                seen[q] = true;
                blk.push((q + 1) as u8);
                q = sigma[q];
            }
            blk.sort_unstable();
            blocks.push(blk);
        }
        blocks.sort();
        Ok(blocks)
    }
}

/// Crossing test for a partition with 1-based blocks inside [m].
pub fn partition_is_noncrossing(blocks: &[Vec<u8>]) -> bool {
    let mut class: HashMap<u8, usize> = HashMap::new();
    for (ci, b) in blocks.iter().enumerate() {
        for &x in b {
            class.insert(x, ci);
        }
    }
    let m = class.len() as u8;
    for a in 1..=m {
        for b in (a + 1)..=m {
            for c in (b + 1)..=m {
                for d in (c + 1)..=m {
                    if class[&a] == class[&c] && class[&b] == class[&d] && class[&a] != class[&b] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    fn build(spec: &str) -> ReflectionGroup {
        ReflectionGroup::build(GroupSpec::parse(spec).unwrap()).unwrap()
    }

    #[test]
    fn nc_counts_small() {
        for (spec, expect) in [("A3", 5), ("B2", 6), ("I2:5", 7)] {
            let g = build(spec);
            assert_eq!(Noncrossing::new(&g).len(), expect, "{spec}");
        }
    }

    #[test]
    fn absolute_order_examples() {
        let g = build("A3");
        let c = g.coxeter;
        for &t in &g.reflections {
            assert!(absolute_leq(&g, t, c));
            assert!(!absolute_leq(&g, c, t));
        }
        for e in 0..g.order() as ElemId {
            assert!(absolute_leq(&g, 0, e));
        }
    }

    #[test]
    fn multichain_counts_match_products() {
        for (spec, k, expect) in [("A3", 1usize, 5usize), ("A3", 2, 12), ("B2", 1, 6)] {
            let g = build(spec);
            let ncx = Noncrossing::new(&g);
            assert_eq!(ncx.multichains(k).len(), expect, "{spec} k={k}");
        }
    }

    #[test]
    fn delta_integrate_inverse_pair() {
        let g = build("A3");
        let ncx = Noncrossing::new(&g);
        let c = g.coxeter;
        for k in 1..=3usize {
            let const_c: Vec<ElemId> = vec![c; k];
            let d = ncx.delta(&const_c).unwrap();
            assert_eq!(d[0], c);
            assert!(d[1..].iter().all(|&w| w == 0));
            let const_e: Vec<ElemId> = vec![0; k];
            let d = ncx.delta(&const_e).unwrap();
            assert!(d[..k].iter().all(|&w| w == 0));
            assert_eq!(d[k], c);
            for chain_idx in ncx.multichains(k) {
                let chain: Vec<ElemId> =
                    chain_idx.iter().map(|&i| ncx.elements[i as usize]).collect();
                let fact = ncx.delta(&chain).unwrap();
                assert_eq!(ncx.integrate(&fact).unwrap(), chain);
            }
        }
    }

    #[test]
    fn rotation_order_divides_kh() {
        for spec in ["A3", "B2"] {
            let g = build(spec);
            let ncx = Noncrossing::new(&g);
            for k in 1..=2usize {
                let kh = k * g.h;
                for chain_idx in ncx.multichains(k) {
                    let chain: Vec<ElemId> =
                        chain_idx.iter().map(|&i| ncx.elements[i as usize]).collect();
                    let mut fact = ncx.delta(&chain).unwrap();
                    for _ in 0..kh {
                        fact = ncx.rotate(&fact);
                        assert!(ncx.check_factorization(&fact).is_ok());
                    }
                    assert_eq!(fact, ncx.delta(&chain).unwrap());
                }
            }
        }
    }

    #[test]
    fn rotate_fixes_top_factorization() {
        let g = build("A3");
        let ncx = Noncrossing::new(&g);
        let fact = vec![g.coxeter, 0, 0];
        assert_eq!(ncx.rotate(&fact), fact);
    }

    #[test]
    fn flat_chain_injective_at_k1() {
        let g = build("A3");
        let ncx = Noncrossing::new(&g);
        let mut flats: Vec<FlatId> = ncx
            .elements
            .iter()
            .map(|&w| ncx.to_flat_chain(&[w]).unwrap()[0])
            .collect();
        flats.sort_unstable();
        flats.dedup();
        assert_eq!(flats.len(), 5);
        assert_eq!(ncx.to_flat_chain(&[0]).unwrap()[0], g.full_flat());
        assert_eq!(g.flat(ncx.to_flat_chain(&[g.coxeter]).unwrap()[0]).dim, 0);
    }

    #[test]
    fn kdivisible_model_exhaustive_small() {
        for (letters, k) in [(3usize, 1usize), (3, 2), (3, 3), (4, 1), (4, 2)] {
            let g = build(&format!("A{letters}"));
            let ncx = Noncrossing::new(&g);
            let kn = (k * letters) as u8;
            let chains = ncx.multichains(k);
            let mut images = std::collections::HashSet::new();
            for chain_idx in &chains {
                let chain: Vec<ElemId> =
                    chain_idx.iter().map(|&i| ncx.elements[i as usize]).collect();
                let pi = ncx.type_a_kdivisible(&chain).unwrap();
                assert!(pi.iter().all(|b| b.len() % k == 0), "k-divisibility");
                assert!(partition_is_noncrossing(&pi), "noncrossing");
                // rotation equivariance: Phi(g.chain) = Phi(chain) + 1
                let rotated = ncx.rotate_chain(&chain).unwrap();
                let pi_rot = ncx.type_a_kdivisible(&rotated).unwrap();
                let mut shifted: Vec<Vec<u8>> = pi
                    .iter()
                    .map(|b| {
                        let mut nb: Vec<u8> = b.iter().map(|&x| (x % kn) + 1).collect();
                        nb.sort_unstable();
                        nb
                    })
                    .collect();
                shifted.sort();
                assert_eq!(pi_rot, shifted, "rotation equivariance at A{letters} k={k}");
                images.insert(pi);
            }
            assert_eq!(images.len(), chains.len(), "injectivity at A{letters} k={k}");
        }
    }

    #[test]
    fn kdivisible_examples() {
        let g = build("A3");
        let ncx = Noncrossing::new(&g);
        let pi = ncx.type_a_kdivisible(&[g.coxeter]).unwrap();
        assert_eq!(pi, vec![vec![1, 2, 3]]);
        let pi = ncx.type_a_kdivisible(&[0, 0]).unwrap();
        assert_eq!(pi, vec![vec![1, 2], vec![3, 4], vec![5, 6]]);
    }
}
