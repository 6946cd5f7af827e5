//! Exact models of the reflection groups W(A_{n-1}), W(B_n), W(D_n), W(I2(m)).
//!
//! A [`ReflectionGroup`] holds the full element list (desk scale), the
//! multiplication and inverse tables, reflection lengths, per-element
//! matrices on the reflection representation, the intersection lattice of
//! flats with parabolic subgroups and canonical coset minima, conjugacy
//! classes, and exact eigenvalue data.
//!
//! Type A is realized on the quotient of C^n by the constants: matrices act
//! in explicit (n-1)-dimensional projected coordinates. B/D act by signed
//! permutation matrices on C^n. I2(m) acts on C^2 in the unitary basis where
//! the rotation is diag(zeta, zeta^{-1}) and the base reflection swaps
//! coordinates.

pub mod element;
pub mod flats;

use crate::error::Error;
use crate::num::{rank as mat_rank, CMat, C, RANK_TOL};
use crate::Result;
use element::{to_wire, Elem, ElemWire};
use flats::{act_on_key, fixed_space_key, fixes_pointwise, meet, numeric_basis, FlatKey};
use serde::Serialize;
use std::collections::HashMap;
use std::fmt;

pub type ElemId = u16;
pub type FlatId = u16;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum Family {
    A,
    B,
    D,
    I2,
}

/// A group selector: family plus size parameter.
///
/// For type A, `n` counts letters (the rank is `n - 1`); for B and D it is
/// the rank; I2 has rank 2 and carries the angle parameter `m`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct GroupSpec {
    pub family: Family,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
}

impl GroupSpec {
    pub fn new_a(letters: usize) -> Self {
        GroupSpec { family: Family::A, n: letters, m: None }
    }
    pub fn new_b(n: usize) -> Self {
        GroupSpec { family: Family::B, n, m: None }
    }
    pub fn new_d(n: usize) -> Self {
        GroupSpec { family: Family::D, n, m: None }
    }
    pub fn new_i2(m: usize) -> Self {
        GroupSpec { family: Family::I2, n: 2, m: Some(m) }
    }

    /// Parse the CLI grammar `A<n>` (letters), `B<n>`, `D<n>`, `I2:<m>`.
    pub fn parse(s: &str) -> Result<GroupSpec> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("I2:") {
            let m: usize =
                rest.parse().map_err(|_| Error::config(format!("bad I2 parameter in {s:?}")))?;
            return Ok(GroupSpec::new_i2(m));
        }
        let (fam, rest) = s.split_at(1);
        let n: usize =
            rest.parse().map_err(|_| Error::config(format!("bad group size in {s:?}")))?;
        match fam {
            "A" | "a" => Ok(GroupSpec::new_a(n)),
            "B" | "b" | "C" | "c" => Ok(GroupSpec::new_b(n)),
            "D" | "d" => Ok(GroupSpec::new_d(n)),
            _ => Err(Error::config(format!("unknown family in {s:?}"))),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::A => write!(f, "A{}", self.n),
            Family::B => write!(f, "B{}", self.n),
            Family::D => write!(f, "D{}", self.n),
            Family::I2 => write!(f, "I2:{}", self.m.unwrap_or(0)),
        }
    }
}

/// Flat of the intersection lattice, with exact key and numeric basis.
#[derive(Clone, Debug)]
pub struct Flat {
    pub key: FlatKey,
    pub dim: usize,
    /// Orthonormal basis, rank x dim.
    pub basis: CMat,
    /// Some element whose fixed space is exactly this flat.
    pub witness: ElemId,
}

/// An irreducible real reflection group at desk scale.
pub struct ReflectionGroup {
    pub spec: GroupSpec,
    pub rank: usize,
    pub h: usize,
    pub degrees: Vec<usize>,
    elems: Vec<Elem>,
    elem_index: HashMap<Elem, ElemId>,
    mult_table: Vec<ElemId>,
    inv_table: Vec<ElemId>,
    pub simple: Vec<ElemId>,
    pub reflections: Vec<ElemId>,
    pub coxeter: ElemId,
    refl_len: Vec<u8>,
    /// total-order rank (reflection length, then encoding), for coset minima
    ord_rank: Vec<u32>,
    mats: Vec<CMat>,
    /// type A ambient projection basis (n x (n-1)), identity-ish otherwise
    proj: Option<CMat>,
    pub flats: Vec<Flat>,
    flat_index: HashMap<FlatKey, FlatId>,
    fixed_flat: Vec<FlatId>,
    parabolic: Vec<Vec<ElemId>>,
    coset_min: Vec<Vec<ElemId>>,
    flat_act: Vec<Vec<FlatId>>,
    classes: Vec<Vec<ElemId>>,
    class_of: Vec<usize>,
    /// eigenvalue rotation numbers per element: reduced fractions in [0,1)
    eig: Vec<Vec<(u32, u32)>>,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn reduced(num: u32, den: u32) -> (u32, u32) {
    let n = num % den;
    let g = gcd(n, den).max(1);
    (n / g, den / g)
}

impl ReflectionGroup {
    /// Build the group, its lattice and all derived tables.
    pub fn build(spec: GroupSpec) -> Result<ReflectionGroup> {
        let (rank, h, degrees, simple_elems) = match spec.family {
            Family::A => {
                let n = spec.n;
                if !(2..=6).contains(&n) {
                    return Err(Error::config(format!("type A supports 2..=6 letters, got {n}")));
                }
                let simples: Vec<Elem> =
                    (0..n - 1).map(|i| Elem::transposition(n, i, i + 1)).collect();
                (n - 1, n, (2..=n).collect::<Vec<_>>(), simples)
            }
            Family::B => {
                let n = spec.n;
                if !(2..=4).contains(&n) {
                    return Err(Error::config(format!("type B supports rank 2..=4, got {n}")));
                }
                let mut simples: Vec<Elem> =
                    (0..n - 1).map(|i| Elem::transposition(n, i, i + 1)).collect();
                // last simple: sign flip on the final coordinate
                simples.push(Elem::Signed {
                    perm: (0..n as u8).collect(),
                    flip: 1 << (n - 1),
                });
                (n, 2 * n, (1..=n).map(|i| 2 * i).collect(), simples)
            }
            Family::D => {
                let n = spec.n;
                if n != 4 {
                    return Err(Error::config(format!("type D supported only at rank 4, got {n}")));
                }
                let mut simples: Vec<Elem> =
                    (0..n - 1).map(|i| Elem::transposition(n, i, i + 1)).collect();
                // reflection in e_{n-1} + e_n: swap last two coordinates with both signs
                let mut perm: Vec<u8> = (0..n as u8).collect();
                perm.swap(n - 2, n - 1);
                simples.push(Elem::Signed { perm, flip: (1 << (n - 2)) | (1 << (n - 1)) });
                let mut degs: Vec<usize> = (1..n).map(|i| 2 * i).collect();
                degs.push(n);
                degs.sort_unstable();
                (n, 2 * n - 2, degs, simples)
            }
            Family::I2 => {
                let m = spec.m.ok_or_else(|| Error::config("I2 requires a parameter m"))?;
                if !(3..=12).contains(&m) {
                    return Err(Error::config(format!("I2 supports 3 <= m <= 12, got {m}")));
                }
                let s1 = Elem::Dihedral { rot: 0, refl: true };
                let s2 = Elem::Dihedral { rot: 1, refl: true };
                (2, m, vec![2, m], vec![s1, s2])
            }
        };
        let m_param = spec.m.unwrap_or(0);
        let type_a = spec.family == Family::A;

        // Closure under multiplication (BFS).
        let identity = match spec.family {
            Family::I2 => Elem::identity_dihedral(),
            _ => Elem::identity_signed(spec.n),
        };
        let mut elems = vec![identity.clone()];
        let mut elem_index = HashMap::new();
        elem_index.insert(identity, 0 as ElemId);
        let mut frontier = vec![0usize];
        while let Some(i) = frontier.pop() {
            let cur = elems[i].clone();
            for s in &simple_elems {
                let next = s.compose(&cur, m_param);
                if !elem_index.contains_key(&next) {
                    let id = elems.len() as ElemId;
                    elem_index.insert(next.clone(), id);
                    elems.push(next);
                    frontier.push(id as usize);
                }
            }
        }
        let order = elems.len();
        if spec.family == Family::D {
            debug_assert_eq!(order, 192);
        }

        let simple: Vec<ElemId> = simple_elems.iter().map(|s| elem_index[s]).collect();

        let mut mult_table = vec![0 as ElemId; order * order];
        for a in 0..order {
            for b in 0..order {
                mult_table[a * order + b] = elem_index[&elems[a].compose(&elems[b], m_param)];
            }
        }
        let inv_table: Vec<ElemId> =
            (0..order).map(|a| elem_index[&elems[a].inverse(m_param)]).collect();

        // Reflection length = codimension of the fixed space.
        let refl_len: Vec<u8> = elems
            .iter()
            .map(|e| match e {
                Elem::Signed { .. } if type_a => (spec.n - e.cycles().len()) as u8,
                Elem::Signed { .. } => {
                    let pos = e.signed_cycles().iter().filter(|(_, _, neg)| !neg).count();
                    (rank - pos) as u8
                }
                Elem::Dihedral { rot, refl } => {
                    if *refl {
                        1
                    } else if *rot == 0 {
                        0
                    } else {
                        2
                    }
                }
            })
            .collect();

        let reflections: Vec<ElemId> =
            (0..order as ElemId).filter(|&e| refl_len[e as usize] == 1).collect();
        let expected_t: usize = degrees.iter().map(|d| d - 1).sum();
        if reflections.len() != expected_t {
            return Err(Error::numeric(format!(
                "reflection count {} disagrees with degrees ({expected_t})",
                reflections.len()
            )));
        }

        // Coxeter element: product of the simple generators in index order.
        let mut cox = 0 as ElemId;
        for &s in &simple {
            cox = mult_table[cox as usize * order + s as usize];
        }
        // its order must be h
        {
            let mut p = cox;
            let mut ord = 1;
            while p != 0 {
                p = mult_table[p as usize * order + cox as usize];
                ord += 1;
            }
            if ord != h {
                return Err(Error::numeric(format!("coxeter element has order {ord}, expected {h}")));
            }
        }

        // Total order: reflection length, then encoding bytes.
        let mut by_key: Vec<ElemId> = (0..order as ElemId).collect();
        by_key.sort_by_key(|&e| (refl_len[e as usize], elems[e as usize].ser_key()));
        let mut ord_rank = vec![0u32; order];
        for (r, &e) in by_key.iter().enumerate() {
            ord_rank[e as usize] = r as u32;
        }

        // Matrices.
        let proj = if type_a {
            let n = spec.n;
            let mut b = CMat::zeros(n, n - 1);
            for j in 1..n {
                let norm = 1.0 / ((j * (j + 1)) as f64).sqrt();
                for i in 0..j {
                    b[(i, j - 1)] = C::new(norm, 0.0);
                }
                b[(j, j - 1)] = C::new(-(j as f64) * norm, 0.0);
            }
            Some(b)
        } else {
            None
        };
        let zeta_m = if spec.family == Family::I2 {
            let t = std::f64::consts::TAU / m_param as f64;
            C::new(t.cos(), t.sin())
        } else {
            C::new(1.0, 0.0)
        };
        let mats: Vec<CMat> = elems
            .iter()
            .map(|e| match e {
                Elem::Signed { perm, flip } => {
                    let n = perm.len();
                    let mut p = CMat::zeros(n, n);
                    for i in 0..n {
                        let s = if (flip >> i) & 1 == 1 { -1.0 } else { 1.0 };
                        p[(perm[i] as usize, i)] = C::new(s, 0.0);
                    }
                    if let Some(b) = &proj {
                        b.conj_transpose().matmul(&p.matmul(b))
                    } else {
                        p
                    }
                }
                Elem::Dihedral { rot, refl } => {
                    let z = zeta_m.powu(*rot as u32);
                    let mut m = CMat::zeros(2, 2);
                    if *refl {
                        m[(0, 1)] = z;
                        m[(1, 0)] = z.conj();
                    } else {
                        m[(0, 0)] = z;
                        m[(1, 1)] = z.conj();
                    }
                    m
                }
            })
            .collect();

        // Intersection lattice: distinct fixed spaces, plus witnesses.
        let mut flats: Vec<Flat> = Vec::new();
        let mut flat_index: HashMap<FlatKey, FlatId> = HashMap::new();
        let mut fixed_flat = vec![0 as FlatId; order];
        for (i, e) in elems.iter().enumerate() {
            let key = fixed_space_key(e, type_a);
            let id = *flat_index.entry(key.clone()).or_insert_with(|| {
                let dim = key.dim(rank);
                let basis = numeric_basis(&key, rank, proj.as_ref(), zeta_m);
                debug_assert_eq!(basis.cols, dim);
                flats.push(Flat { key, dim, basis, witness: i as ElemId });
                (flats.len() - 1) as FlatId
            });
            fixed_flat[i] = id;
        }

        let parabolic: Vec<Vec<ElemId>> = flats
            .iter()
            .map(|f| {
                (0..order as ElemId)
                    .filter(|&e| fixes_pointwise(&elems[e as usize], &f.key))
                    .collect()
            })
            .collect();

        // Canonical coset representatives: minimum under (length, lex).
        let coset_min: Vec<Vec<ElemId>> = (0..flats.len())
            .map(|x| {
                let mut table = vec![ElemId::MAX; order];
                for &e in &by_key {
                    if table[e as usize] != ElemId::MAX {
                        continue;
                    }
                    for &u in &parabolic[x] {
                        table[mult_table[e as usize * order + u as usize] as usize] = e;
                    }
                }
                table
            })
            .collect();

        let flat_act: Vec<Vec<FlatId>> = (0..order)
            .map(|w| {
                flats
                    .iter()
                    .map(|f| flat_index[&act_on_key(&elems[w], &f.key, m_param)])
                    .collect()
            })
            .collect();

        // Conjugacy classes.
        let mut class_of = vec![usize::MAX; order];
        let mut classes: Vec<Vec<ElemId>> = Vec::new();
        for e in 0..order {
            if class_of[e] != usize::MAX {
                continue;
            }
            let cid = classes.len();
            let mut members = Vec::new();
            for g in 0..order {
                let gi = inv_table[g] as usize;
                let c = mult_table[mult_table[g * order + e] as usize * order + gi] as usize;
                if class_of[c] == usize::MAX {
                    class_of[c] = cid;
                    members.push(c as ElemId);
                }
            }
            members.sort_unstable();
            classes.push(members);
        }

        // Exact eigenvalue rotation numbers.
        let eig: Vec<Vec<(u32, u32)>> = elems
            .iter()
            .map(|e| {
                let mut fr: Vec<(u32, u32)> = Vec::new();
                match e {
                    Elem::Signed { .. } if type_a => {
                        for cyc in e.cycles() {
                            let l = cyc.len() as u32;
                            for j in 0..l {
                                fr.push(reduced(j, l));
                            }
                        }
                        // quotient by the constants removes one eigenvalue 1
                        let pos = fr.iter().position(|&f| f == (0, 1)).unwrap();
                        fr.remove(pos);
                    }
                    Elem::Signed { .. } => {
                        for (cyc, _, negative) in e.signed_cycles() {
                            let l = cyc.len() as u32;
                            if negative {
                                for j in 0..l {
                                    fr.push(reduced(2 * j + 1, 2 * l));
                                }
                            } else {
                                for j in 0..l {
                                    fr.push(reduced(j, l));
                                }
                            }
                        }
                    }
                    Elem::Dihedral { rot, refl } => {
                        if *refl {
                            fr.push((0, 1));
                            fr.push((1, 2));
                        } else {
                            let m = m_param as u32;
                            fr.push(reduced(*rot as u32, m));
                            fr.push(reduced(m - *rot as u32 % m, m));
                        }
                    }
                }
                fr.sort_unstable();
                fr
            })
            .collect();

        Ok(ReflectionGroup {
            spec,
            rank,
            h,
            degrees,
            elems,
            elem_index,
            mult_table,
            inv_table,
            simple,
            reflections,
            coxeter: cox,
            refl_len,
            ord_rank,
            mats,
            proj,
            flats,
            flat_index,
            fixed_flat,
            parabolic,
            coset_min,
            flat_act,
            classes,
            class_of,
            eig,
        })
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn elem(&self, id: ElemId) -> &Elem {
        &self.elems[id as usize]
    }

    pub fn elem_id(&self, e: &Elem) -> Option<ElemId> {
        self.elem_index.get(e).copied()
    }

    pub fn mult(&self, a: ElemId, b: ElemId) -> ElemId {
        self.mult_table[a as usize * self.elems.len() + b as usize]
    }

    pub fn inv(&self, a: ElemId) -> ElemId {
        self.inv_table[a as usize]
    }

    pub fn conjugate(&self, w: ElemId, x: ElemId) -> ElemId {
        self.mult(self.mult(w, x), self.inv(w))
    }

    pub fn reflection_length(&self, e: ElemId) -> usize {
        self.refl_len[e as usize] as usize
    }

    /// Position in the (length, lex) total order; smaller is more canonical.
    pub fn ord_rank(&self, e: ElemId) -> u32 {
        self.ord_rank[e as usize]
    }

    pub fn matrix(&self, e: ElemId) -> &CMat {
        &self.mats[e as usize]
    }

    /// Matrix action of `w` on a point of the reflection representation.
    pub fn act(&self, w: ElemId, v: &[C]) -> Result<Vec<C>> {
        if v.len() != self.rank {
            return Err(Error::Dimension { expected: self.rank, got: v.len() });
        }
        Ok(self.mats[w as usize].matvec(v))
    }

    pub fn fixed_space(&self, e: ElemId) -> FlatId {
        self.fixed_flat[e as usize]
    }

    pub fn flat(&self, x: FlatId) -> &Flat {
        &self.flats[x as usize]
    }

    pub fn flat_id(&self, key: &FlatKey) -> Option<FlatId> {
        self.flat_index.get(key).copied()
    }

    pub fn flat_count(&self) -> usize {
        self.flats.len()
    }

    /// The flat V itself (fixed space of the identity).
    pub fn full_flat(&self) -> FlatId {
        self.fixed_flat[0]
    }

    pub fn parabolic(&self, x: FlatId) -> &[ElemId] {
        &self.parabolic[x as usize]
    }

    /// Canonical representative of the coset `w W_X`.
    pub fn coset_rep(&self, x: FlatId, w: ElemId) -> ElemId {
        self.coset_min[x as usize][w as usize]
    }

    /// Image flat `w . X`.
    pub fn act_flat(&self, w: ElemId, x: FlatId) -> FlatId {
        self.flat_act[w as usize][x as usize]
    }

    /// Intersection of two flats.
    pub fn meet_flats(&self, a: FlatId, b: FlatId) -> FlatId {
        let key = meet(&self.flats[a as usize].key, &self.flats[b as usize].key);
        self.flat_index[&key]
    }

    pub fn conjugacy_classes(&self) -> &[Vec<ElemId>] {
        &self.classes
    }

    pub fn class_of(&self, e: ElemId) -> usize {
        self.class_of[e as usize]
    }

    /// Multiplicity of e^{2 pi i d / modulus} as an eigenvalue of `w` on V,
    /// from the exact cycle data.
    pub fn eig_multiplicity(&self, w: ElemId, d: i64, modulus: usize) -> usize {
        let md = modulus as i64;
        let dd = d.rem_euclid(md) as u32;
        let target = reduced(dd, modulus as u32);
        self.eig[w as usize].iter().filter(|&&f| f == target).count()
    }

    /// dim(X ∩ E(w, e^{2 pi i d / modulus})) by numeric rank.
    pub fn eigenspace_intersection_dim(
        &self,
        x: FlatId,
        w: ElemId,
        d: i64,
        modulus: usize,
    ) -> usize {
        let e_basis = self.eigenspace_basis(w, d, modulus);
        crate::num::intersection_dim(&self.flats[x as usize].basis, &e_basis, RANK_TOL)
    }

    /// Orthonormal basis of E(w, e^{2 pi i d / modulus}).
    pub fn eigenspace_basis(&self, w: ElemId, d: i64, modulus: usize) -> CMat {
        let t = std::f64::consts::TAU * (d.rem_euclid(modulus as i64) as f64) / modulus as f64;
        let lambda = C::new(t.cos(), t.sin());
        let m = &self.mats[w as usize];
        let mut a = m.clone();
        for i in 0..self.rank {
            a[(i, i)] -= lambda;
        }
        crate::num::nullspace(&a, RANK_TOL)
    }

    /// Numeric eigenvalue multiplicity (rank-based cross-check of `eig_multiplicity`).
    pub fn eig_multiplicity_numeric(&self, w: ElemId, d: i64, modulus: usize) -> usize {
        let t = std::f64::consts::TAU * (d.rem_euclid(modulus as i64) as f64) / modulus as f64;
        let lambda = C::new(t.cos(), t.sin());
        let m = &self.mats[w as usize];
        let mut a = m.clone();
        for i in 0..self.rank {
            a[(i, i)] -= lambda;
        }
        self.rank - mat_rank(&a, RANK_TOL)
    }

    /// Minimal flat containing a point (the meet of all reflection
    /// hyperplanes through it; V if it avoids every hyperplane).
    pub fn minimal_flat_containing(&self, p: &[C], tol: f64) -> FlatId {
        let mut cur = self.full_flat();
        for &t in &self.reflections {
            let hx = self.fixed_flat[t as usize];
            if crate::num::dist_to_subspace(p, &self.flats[hx as usize].basis) < tol {
                cur = self.meet_flats(cur, hx);
            }
        }
        cur
    }

    /// Type A ambient-to-quotient projection basis.
    pub fn projection(&self) -> Option<&CMat> {
        self.proj.as_ref()
    }

    pub fn is_type_a(&self) -> bool {
        self.spec.family == Family::A
    }

    /// Versioned wire descriptor.
    pub fn descriptor(&self) -> GroupDescriptor {
        GroupDescriptor {
            schema_version: 1,
            family: self.spec.family,
            n: self.spec.n,
            m: self.spec.m,
            rank: self.rank,
            order: self.order(),
            h: self.h,
            degrees: self.degrees.clone(),
            num_reflections: self.reflections.len(),
            num_flats: self.flats.len(),
            generators: self
                .simple
                .iter()
                .map(|&s| to_wire(self.elem(s), self.is_type_a()))
                .collect(),
            coxeter_element: to_wire(self.elem(self.coxeter), self.is_type_a()),
        }
    }
}

/// Serializable group summary: `{family, n, m?, h, degrees, generators, ...}`.
#[derive(Serialize, Debug)]
pub struct GroupDescriptor {
    pub schema_version: u32,
    pub family: Family,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    pub rank: usize,
    pub order: usize,
    pub h: usize,
    pub degrees: Vec<usize>,
    pub num_reflections: usize,
    pub num_flats: usize,
    pub generators: Vec<ElemWire>,
    pub coxeter_element: ElemWire,
}
