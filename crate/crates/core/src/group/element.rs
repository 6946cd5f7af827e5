//! Exact group element encodings and their arithmetic.
//!
//! Elements are stored exactly: signed permutations in one-line form for the
//! classical families (type A carries no sign flips), and rotation/reflection
//! pairs for the dihedral groups. Matrices over complex doubles are derived
//! views built elsewhere.

use serde::Serialize;

/// Exact encoding of a group element.
///
/// `Signed { perm, flip }` sends `e_i -> (-1)^{flip_i} e_{perm[i]}` (0-based).
/// `Dihedral { rot, refl }` is `r^rot s^refl` in the presentation
/// `s r s = r^{-1}`, `r` the primitive rotation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Elem {
    Signed { perm: Vec<u8>, flip: u16 },
    Dihedral { rot: u16, refl: bool },
}

impl Elem {
    pub fn identity_signed(n: usize) -> Elem {
        Elem::Signed { perm: (0..n as u8).collect(), flip: 0 }
    }

    pub fn identity_dihedral() -> Elem {
        Elem::Dihedral { rot: 0, refl: false }
    }

    pub fn transposition(n: usize, i: usize, j: usize) -> Elem {
        let mut perm: Vec<u8> = (0..n as u8).collect();
        perm.swap(i, j);
        Elem::Signed { perm, flip: 0 }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Elem::Signed { perm, flip } => {
                *flip == 0 && perm.iter().enumerate().all(|(i, &p)| p as usize == i)
            }
            Elem::Dihedral { rot, refl } => *rot == 0 && !refl,
        }
    }

    /// Composition `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Elem, m: usize) -> Elem {
        match (self, other) {
            (Elem::Signed { perm: pa, flip: fa }, Elem::Signed { perm: pb, flip: fb }) => {
                let n = pa.len();
                let mut perm = vec![0u8; n];
                let mut flip = 0u16;
                for i in 0..n {
                    let mid = pb[i] as usize;
                    perm[i] = pa[mid];
                    let s = ((fb >> i) & 1) ^ ((fa >> mid) & 1);
                    flip |= s << i;
                }
                Elem::Signed { perm, flip }
            }
            (Elem::Dihedral { rot: a, refl: ea }, Elem::Dihedral { rot: b, refl: eb }) => {
                let m = m as i64;
                let (a, b) = (*a as i64, *b as i64);
                let rot = if *ea { (a - b).rem_euclid(m) } else { (a + b).rem_euclid(m) };
                Elem::Dihedral { rot: rot as u16, refl: ea ^ eb }
            }
            _ => panic!("mixed element families"),
        }
    }

    pub fn inverse(&self, m: usize) -> Elem {
        match self {
            Elem::Signed { perm, flip } => {
                let n = perm.len();
                let mut iperm = vec![0u8; n];
                let mut iflip = 0u16;
                for i in 0..n {
                    iperm[perm[i] as usize] = i as u8;
                    iflip |= ((flip >> i) & 1) << perm[i];
                }
                Elem::Signed { perm: iperm, flip: iflip }
            }
            Elem::Dihedral { rot, refl } => {
                if *refl {
                    self.clone()
                } else {
                    Elem::Dihedral { rot: ((m - *rot as usize) % m) as u16, refl: false }
                }
            }
        }
    }

    /// Cycles of the underlying index permutation, each starting at its
    /// smallest member, sorted by that member.
    pub fn cycles(&self) -> Vec<Vec<u8>> {
        match self {
            Elem::Signed { perm, .. } => {
                let n = perm.len();
                let mut seen = vec![false; n];
                let mut out = Vec::new();
                for start in 0..n {
                    if seen[start] {
                        continue;
                    }
                    let mut cyc = Vec::new();
                    let mut i = start;
                    while !seen[i] {
                        seen[i] = true;
                        cyc.push(i as u8);
                        i = perm[i] as usize;
                    }
                    out.push(cyc);
                }
                out
            }
            Elem::Dihedral { .. } => panic!("cycles only defined for signed encodings"),
        }
    }

    /// Signed cycles: `(support, accumulated signs, negative?)`.
    ///
    /// Walking a cycle `i -> perm[i] -> ...`, `acc[j]` is the sign picked up
    /// from the start of the cycle to its j-th member; the cycle is negative
    /// when the total sign around it is -1 (and then fixes nothing).
    pub fn signed_cycles(&self) -> Vec<(Vec<u8>, Vec<bool>, bool)> {
        match self {
            Elem::Signed { perm, flip } => {
                let n = perm.len();
                let mut seen = vec![false; n];
                let mut out = Vec::new();
                for start in 0..n {
                    if seen[start] {
                        continue;
                    }
                    let mut cyc = Vec::new();
                    let mut acc = Vec::new();
                    let mut i = start;
                    let mut s = false;
                    while !seen[i] {
                        seen[i] = true;
                        cyc.push(i as u8);
                        acc.push(s);
                        s ^= ((flip >> i) & 1) == 1;
                        i = perm[i] as usize;
                    }
                    out.push((cyc, acc, s));
                }
                out
            }
            Elem::Dihedral { .. } => panic!("signed_cycles only defined for signed encodings"),
        }
    }

    /// Stable byte serialization; used for canonical lexicographic orders.
    pub fn ser_key(&self) -> Vec<u8> {
        match self {
            Elem::Signed { perm, flip } => {
                let mut k = Vec::with_capacity(perm.len() + 2);
                k.extend_from_slice(perm);
                k.push((flip & 0xff) as u8);
                k.push((flip >> 8) as u8);
                k
            }
            Elem::Dihedral { rot, refl } => {
                vec![*refl as u8, (*rot & 0xff) as u8, (*rot >> 8) as u8]
            }
        }
    }
}

/// Wire form of an element: cycles for type A, signed one-line for B/D,
/// rotation/reflection pair for the dihedral family.
#[derive(Serialize, Debug, Clone)]
#[serde(untagged)]
pub enum ElemWire {
    Cycles(Vec<Vec<u8>>),
    SignedOneLine { perm: Vec<u8>, signs: Vec<i8> },
    Dihedral { rot: u16, refl: bool },
}

pub fn to_wire(e: &Elem, type_a: bool) -> ElemWire {
    match e {
        Elem::Signed { perm, flip } => {
            if type_a {
                // 1-based cycles, singletons dropped.
                ElemWire::Cycles(
                    e.cycles()
                        .into_iter()
                        .filter(|c| c.len() > 1)
                        .map(|c| c.into_iter().map(|i| i + 1).collect())
                        .collect(),
                )
            } else {
                ElemWire::SignedOneLine {
                    perm: perm.iter().map(|&p| p + 1).collect(),
                    signs: (0..perm.len())
                        .map(|i| if (flip >> i) & 1 == 1 { -1 } else { 1 })
                        .collect(),
                }
            }
        }
        Elem::Dihedral { rot, refl } => ElemWire::Dihedral { rot: *rot, refl: *refl },
    }
}
