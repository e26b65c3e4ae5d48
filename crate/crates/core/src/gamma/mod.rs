//! The finite 2-group
//!
//! ```text
//! G_n = < r, s, t | r^4 = s^(2^(n+1)) = t^4 = 1, r^2 = s^(2^n) t^2,
//!                   [s,t] = 1, [r,s] = s^2, [r,t] = s^(2^n) t^2 >
//! ```
//!
//! of order `2^(n+4)`, with elements in normal form `r^e s^b t^c`.
//! Commutators are `[x,y] = x^-1 y^-1 x y`.
//!
//! Conjugation by `r` acts on `A = <s,t>` as `phi(s^b t^c) = s^(-b + c 2^n) t^-c`
//! and `r^2 = z = s^(2^n) t^2` is central, so
//! `(r^e1 a1)(r^e2 a2) = r^(e1+e2) phi^e2(a1) a2` with `r^2` folded into `A`.

pub mod presentation;

use crate::abelian::{p_quotient_type, AbelianType};
use crate::intarith::Case;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

pub use presentation::{presentation_consistency, ConsistencyReport};

/// Largest supported `n`; `|G_n| = 2^(n+4)`.
pub const MAX_N: u32 = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GammaError {
    #[error("n must be between 1 and {MAX_N}, got {0}")]
    InvalidN(u32),
    #[error("subgroup belongs to G_{0}, not G_{1}")]
    ParentMismatch(u32, u32),
    #[error("subgroup has index {0}, expected {1}")]
    WrongIndex(usize, usize),
    #[error("transfer is not constant on cosets of the derived subgroup")]
    TransferNotWellDefined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    pub e: u8,
    pub b: u32,
    pub c: u8,
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.e == 1 {
            parts.push("r".to_string());
        }
        match self.b {
            0 => {}
            1 => parts.push("s".into()),
            b => parts.push(format!("s^{b}")),
        }
        match self.c {
            0 => {}
            1 => parts.push("t".into()),
            c => parts.push(format!("t^{c}")),
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(""))
        }
    }
}

/// Transversal used for a transfer computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transversal {
    /// Least element (in normal-form order) of each coset.
    Least,
    /// Greatest element of each coset.
    Greatest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GammaGroup {
    n: u32,
    modb: u32,
    half: u32,
}

/// A subgroup stored as a membership table plus sorted element list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    n: u32,
    pub generators: Vec<GroupElement>,
    pub elements: Vec<GroupElement>,
    member: Vec<bool>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn n(&self) -> u32 {
        self.n
    }
}

pub fn make_gamma(n: u32) -> Result<GammaGroup, GammaError> {
    if n == 0 || n > MAX_N {
        return Err(GammaError::InvalidN(n));
    }
    Ok(GammaGroup {
        n,
        modb: 1 << (n + 1),
        half: 1 << n,
    })
}

impl GammaGroup {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> usize {
        8 * self.modb as usize
    }

    /// `r^e s^b t^c` for arbitrary integer exponents.
    pub fn element(&self, e: i64, b: i64, c: i64) -> GroupElement {
        let a = GroupElement {
            e: 0,
            b: b.rem_euclid(self.modb as i64) as u32,
            c: c.rem_euclid(4) as u8,
        };
        self.mul(self.pow(self.rho(), e), a)
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { e: 0, b: 0, c: 0 }
    }
    pub fn rho(&self) -> GroupElement {
        GroupElement { e: 1, b: 0, c: 0 }
    }
    pub fn sigma(&self) -> GroupElement {
        GroupElement { e: 0, b: 1, c: 0 }
    }
    pub fn tau(&self) -> GroupElement {
        GroupElement { e: 0, b: 0, c: 1 }
    }
    /// `r^2 = s^(2^n) t^2`.
    pub fn z(&self) -> GroupElement {
        GroupElement {
            e: 0,
            b: self.half,
            c: 2,
        }
    }

    pub fn index(&self, x: GroupElement) -> usize {
        ((x.e as usize * self.modb as usize) + x.b as usize) * 4 + x.c as usize
    }

    pub fn from_index(&self, i: usize) -> GroupElement {
        let c = (i % 4) as u8;
        let rest = i / 4;
        GroupElement {
            e: (rest / self.modb as usize) as u8,
            b: (rest % self.modb as usize) as u32,
            c,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order()).map(|i| self.from_index(i))
    }

    fn phi(&self, b: u32, c: u8) -> (u32, u8) {
        let nb = (self.modb - b + c as u32 * self.half) % self.modb;
        (nb, (4 - c) % 4)
    }

    pub fn mul(&self, x: GroupElement, y: GroupElement) -> GroupElement {
        let (b1, c1) = if y.e == 1 {
            self.phi(x.b, x.c)
        } else {
            (x.b, x.c)
        };
        let mut b = b1 + y.b;
        let mut c = c1 + y.c;
        let e = x.e + y.e;
        if e == 2 {
            b += self.half;
            c += 2;
        }
        GroupElement {
            e: e % 2,
            b: b % self.modb,
            c: c % 4,
        }
    }

    pub fn inv(&self, x: GroupElement) -> GroupElement {
        if x.e == 0 {
            GroupElement {
                e: 0,
                b: (self.modb - x.b) % self.modb,
                c: (4 - x.c) % 4,
            }
        } else {
            // (r a)^-1 = r z^-1 phi(a)^-1
            let (pb, pc) = self.phi(x.b, x.c);
            GroupElement {
                e: 1,
                b: (2 * self.modb - pb - self.half) % self.modb,
                c: (8 - pc - 2) % 4,
            }
        }
    }

    pub fn pow(&self, x: GroupElement, k: i64) -> GroupElement {
        let base = if k < 0 { self.inv(x) } else { x };
        let mut acc = self.identity();
        for _ in 0..k.unsigned_abs() {
            acc = self.mul(acc, base);
        }
        acc
    }

    /// `[x,y] = x^-1 y^-1 x y`.
    pub fn commutator(&self, x: GroupElement, y: GroupElement) -> GroupElement {
        let xy = self.mul(x, y);
        let yx = self.mul(y, x);
        self.mul(self.inv(yx), xy)
    }

    pub fn element_order(&self, x: GroupElement) -> u64 {
        let mut y = x;
        let mut k = 1;
        while y != self.identity() {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> u64 {
        self.elements()
            .map(|x| self.element_order(x))
            .max()
            .unwrap_or(1)
    }

    /// Image in `G^ab = (Z/2)^3`: bit 0 = r, bit 1 = s, bit 2 = t.
    pub fn abelian_coords(&self, x: GroupElement) -> u8 {
        x.e | ((x.b & 1) as u8) << 1 | (x.c & 1) << 2
    }

    fn check_parent(&self, h: &Subgroup) -> Result<(), GammaError> {
        if h.n != self.n {
            return Err(GammaError::ParentMismatch(h.n, self.n));
        }
        Ok(())
    }

    pub fn contains(&self, h: &Subgroup, x: GroupElement) -> bool {
        h.member[self.index(x)]
    }

    pub fn subgroup_closure(&self, gens: &[GroupElement]) -> Subgroup {
        let mut member = vec![false; self.order()];
        let id = self.identity();
        member[self.index(id)] = true;
        let mut elements = vec![id];
        let mut i = 0;
        while i < elements.len() {
            let x = elements[i];
            i += 1;
            for &g in gens {
                let y = self.mul(x, g);
                let iy = self.index(y);
                if !member[iy] {
                    member[iy] = true;
                    elements.push(y);
                }
            }
        }
        elements.sort_unstable();
        Subgroup {
            n: self.n,
            generators: gens.to_vec(),
            elements,
            member,
        }
    }

    pub fn whole(&self) -> Subgroup {
        self.subgroup_closure(&[self.rho(), self.sigma(), self.tau()])
    }

    /// Commutator subgroup: normal closure in `H` of the commutators of the
    /// generators of `H`.
    pub fn derived_subgroup(&self, h: &Subgroup) -> Result<Subgroup, GammaError> {
        self.check_parent(h)?;
        let gens = &h.generators;
        let mut normal_gens = Vec::new();
        for (i, &x) in gens.iter().enumerate() {
            for &y in &gens[i + 1..] {
                normal_gens.push(self.commutator(x, y));
            }
        }
        let mut d = self.subgroup_closure(&normal_gens);
        loop {
            let mut grew = false;
            for &g in gens {
                let gi = self.inv(g);
                for k in 0..normal_gens.len() {
                    let conj = self.mul(self.mul(gi, normal_gens[k]), g);
                    if !self.contains(&d, conj) {
                        normal_gens.push(conj);
                        d = self.subgroup_closure(&normal_gens);
                        grew = true;
                    }
                }
            }
            if !grew {
                return Ok(d);
            }
        }
    }

    /// Invariant factors of `H/[H,H]`.
    pub fn abelianization(&self, h: &Subgroup) -> Result<AbelianType, GammaError> {
        let d = self.derived_subgroup(h)?;
        Ok(p_quotient_type(
            2,
            &h.elements,
            d.order(),
            |x| self.mul(x, x),
            |x| self.contains(&d, x),
        ))
    }

    /// Structure of an abelian subgroup.
    pub fn abelian_type(&self, h: &Subgroup) -> AbelianType {
        let id = self.identity();
        p_quotient_type(2, &h.elements, 1, |x| self.mul(x, x), |x| x == id)
    }

    pub fn is_abelian(&self, h: &Subgroup) -> bool {
        h.generators.iter().all(|&x| {
            h.generators
                .iter()
                .all(|&y| self.mul(x, y) == self.mul(y, x))
        })
    }

    /// Kernel of the linear form `lambda` on `G^ab`, as a subgroup of index 2.
    pub fn hyperplane(&self, lambda: u8) -> Subgroup {
        assert!((1..8).contains(&lambda));
        let gens: Vec<GroupElement> = self
            .elements()
            .filter(|&x| {
                (self.abelian_coords(x) & lambda)
                    .count_ones()
                    .is_multiple_of(2)
            })
            .collect();
        let mut s = self.subgroup_closure(&gens);
        s.generators = minimal_generators(self, &s);
        s
    }

    /// All seven index-2 subgroups, keyed by their defining linear form.
    pub fn index2_subgroups(&self) -> Vec<(u8, Subgroup)> {
        (1..8).map(|l| (l, self.hyperplane(l))).collect()
    }

    /// Kernel of the transfer `G^ab -> H^ab`, as a set of `G^ab` coordinates.
    pub fn transfer_kernel(
        &self,
        h: &Subgroup,
        choice: Transversal,
    ) -> Result<AbelianSubspace, GammaError> {
        self.check_parent(h)?;
        let index = self.order() / h.order();
        // Right cosets H t.
        let mut coset_of = vec![usize::MAX; self.order()];
        let mut reps: Vec<GroupElement> = Vec::new();
        let mut candidates: Vec<GroupElement> = self.elements().collect();
        if choice == Transversal::Greatest {
            candidates.reverse();
        }
        for g in candidates {
            if coset_of[self.index(g)] != usize::MAX {
                continue;
            }
            let k = reps.len();
            reps.push(g);
            for &x in &h.elements {
                coset_of[self.index(self.mul(x, g))] = k;
            }
        }
        debug_assert_eq!(reps.len(), index);
        let derived = self.derived_subgroup(h)?;
        let mut verdict: [Option<bool>; 8] = [None; 8];
        for g in self.elements() {
            let mut acc = self.identity();
            for &t in &reps {
                let tg = self.mul(t, g);
                let rep = reps[coset_of[self.index(tg)]];
                acc = self.mul(acc, self.mul(tg, self.inv(rep)));
            }
            debug_assert!(self.contains(h, acc));
            let trivial = self.contains(&derived, acc);
            let v = self.abelian_coords(g) as usize;
            match verdict[v] {
                None => verdict[v] = Some(trivial),
                Some(prev) if prev != trivial => return Err(GammaError::TransferNotWellDefined),
                _ => {}
            }
        }
        let mut set = 0u8;
        for (v, t) in verdict.iter().enumerate() {
            if *t == Some(true) {
                set |= 1 << v;
            }
        }
        Ok(AbelianSubspace(set))
    }

    /// Image of `H` in `G^ab`.
    pub fn abelian_image(&self, h: &Subgroup) -> AbelianSubspace {
        let mut set = 0u8;
        for &x in &h.elements {
            set |= 1 << self.abelian_coords(x);
        }
        AbelianSubspace(set)
    }
}

fn minimal_generators(g: &GammaGroup, s: &Subgroup) -> Vec<GroupElement> {
    let mut gens: Vec<GroupElement> = Vec::new();
    let mut current = g.subgroup_closure(&[]);
    // Elements of large order first keeps the list short.
    let mut candidates = s.elements.clone();
    candidates.sort_by_key(|&x| std::cmp::Reverse(g.element_order(x)));
    for x in candidates {
        if current.order() == s.order() {
            break;
        }
        if !g.contains(&current, x) {
            gens.push(x);
            current = g.subgroup_closure(&gens);
        }
    }
    gens
}

/// A subgroup of an elementary abelian group of order 8, stored as a
/// membership mask over the eight vectors `0..8`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianSubspace(pub u8);

impl AbelianSubspace {
    pub fn span(gens: &[u8]) -> Self {
        let mut set = 1u8;
        for &g in gens {
            let mut add = 0u8;
            for v in 0..8u8 {
                if set >> v & 1 == 1 {
                    add |= 1 << (v ^ g);
                }
            }
            set |= add;
        }
        AbelianSubspace(set)
    }

    pub fn contains(&self, v: u8) -> bool {
        self.0 >> v & 1 == 1
    }

    pub fn vectors(&self) -> Vec<u8> {
        (0..8u8).filter(|&v| self.contains(v)).collect()
    }

    pub fn order(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset_of(&self, other: &AbelianSubspace) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersect(&self, other: &AbelianSubspace) -> AbelianSubspace {
        AbelianSubspace(self.0 & other.0)
    }

    /// Kernel of the linear form `lambda`.
    pub fn hyperplane(lambda: u8) -> Self {
        let mut set = 0u8;
        for v in 0..8u8 {
            if (v & lambda).count_ones().is_multiple_of(2) {
                set |= 1 << v;
            }
        }
        AbelianSubspace(set)
    }

    /// Image under a linear map given on the basis vectors 1, 2, 4.
    pub fn map(&self, images: [u8; 3]) -> AbelianSubspace {
        let mut set = 0u8;
        for v in self.vectors() {
            set |= 1 << apply_linear(images, v);
        }
        AbelianSubspace(set)
    }

    /// A basis, greedily from the smallest vectors.
    pub fn basis(&self) -> Vec<u8> {
        let mut basis = Vec::new();
        let mut span = AbelianSubspace(1);
        for v in self.vectors() {
            if !span.contains(v) {
                basis.push(v);
                span = AbelianSubspace::span(&basis);
            }
        }
        basis
    }

    /// Renders as `<a,b>` with the given names for the three basis bits.
    pub fn render(&self, names: [&str; 3], bracket: bool) -> String {
        let gens: Vec<String> = self
            .basis()
            .into_iter()
            .map(|v| {
                let s: String = (0..3)
                    .filter(|i| v >> i & 1 == 1)
                    .map(|i| names[i])
                    .collect();
                if bracket {
                    format!("[{s}]")
                } else {
                    s
                }
            })
            .collect();
        format!("<{}>", gens.join(","))
    }
}

impl fmt::Display for AbelianSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(GAMMA_AB_NAMES, false))
    }
}

fn apply_linear(images: [u8; 3], v: u8) -> u8 {
    (0..3)
        .filter(|i| v >> i & 1 == 1)
        .fold(0, |acc, i| acc ^ images[i])
}

/// Ideal classes `[z]^a [p]^b [q]^c` of `Cl_2(k)` as bits 1, 2, 4.
pub const CLASS_NAMES: [&str; 3] = ["z", "p", "q"];
/// Basis of `G^ab` as bits 1, 2, 4.
pub const GAMMA_AB_NAMES: [&str; 3] = ["r", "s", "t"];

/// Artin map `Cl_2(k) -> G^ab` on the basis `[z], [p], [q]`:
/// `[z] -> r`, `[p] -> s`, and `[q] -> r s t` in case A, `r t` in case B.
pub fn artin_images(case: Case) -> [u8; 3] {
    match case {
        Case::A => [0b001, 0b010, 0b111],
        Case::B => [0b001, 0b010, 0b101],
    }
}

pub fn artin_map(case: Case, class: u8) -> u8 {
    apply_linear(artin_images(case), class)
}

/// Preimage of a subspace of `G^ab` in the class space.
pub fn artin_preimage(case: Case, s: &AbelianSubspace) -> AbelianSubspace {
    let mut set = 0u8;
    for v in 0..8u8 {
        if s.contains(artin_map(case, v)) {
            set |= 1 << v;
        }
    }
    AbelianSubspace(set)
}

/// Summary of `G_n` and its index-2 subgroups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaSummary {
    pub n: u32,
    pub order: usize,
    pub exponent: u64,
    pub abelianization: AbelianType,
    pub derived_order: usize,
    pub derived_type: AbelianType,
    pub derived_is_abelian: bool,
    pub second_derived_order: usize,
    pub index2: Vec<Index2Summary>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Index2Summary {
    pub lambda: u8,
    pub generators: Vec<String>,
    pub abelianization: AbelianType,
    pub transfer_kernel: String,
    pub transfer_kernel_order: usize,
}

pub fn summarize(n: u32) -> Result<GammaSummary, GammaError> {
    let g = make_gamma(n)?;
    let whole = g.whole();
    let derived = g.derived_subgroup(&whole)?;
    let second = g.derived_subgroup(&derived)?;
    let mut index2 = Vec::new();
    for (lambda, h) in g.index2_subgroups() {
        let kernel = g.transfer_kernel(&h, Transversal::Least)?;
        index2.push(Index2Summary {
            lambda,
            generators: h.generators.iter().map(|x| x.to_string()).collect(),
            abelianization: g.abelianization(&h)?,
            transfer_kernel: kernel.render(GAMMA_AB_NAMES, false),
            transfer_kernel_order: kernel.order(),
        });
    }
    Ok(GammaSummary {
        n,
        order: g.order(),
        exponent: g.exponent(),
        abelianization: g.abelianization(&whole)?,
        derived_order: derived.order(),
        derived_type: g.abelian_type(&derived),
        derived_is_abelian: g.is_abelian(&derived),
        second_derived_order: second.order(),
        index2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab(v: &[u64]) -> AbelianType {
        AbelianType::from(v.to_vec())
    }

    #[test]
    fn orders_and_relations() {
        assert_eq!(make_gamma(1).unwrap().order(), 32);
        assert_eq!(make_gamma(2).unwrap().order(), 64);
        assert!(matches!(make_gamma(0), Err(GammaError::InvalidN(0))));
        for n in 1..=8 {
            let g = make_gamma(n).unwrap();
            let (r, s, t) = (g.rho(), g.sigma(), g.tau());
            let id = g.identity();
            assert_eq!(g.mul(r, r), g.z());
            assert_eq!(g.pow(r, 4), id);
            assert_eq!(g.pow(s, 1 << (n + 1)), id);
            assert_eq!(g.pow(t, 4), id);
            assert_eq!(g.commutator(s, t), id);
            assert_eq!(g.commutator(r, s), g.pow(s, 2));
            assert_eq!(g.commutator(r, t), g.z());
            assert_eq!(g.commutator(t, r), g.z());
            let rs = g.mul(r, s);
            let rt = g.mul(r, t);
            let rst = g.mul(rs, t);
            assert_eq!(g.mul(rs, rs), g.mul(r, r));
            assert_eq!(g.mul(rst, rst), g.pow(t, 2));
            assert_eq!(g.mul(rt, rt), g.pow(t, 2));
            assert_eq!(g.commutator(r, g.pow(t, 2)), id);
        }
    }

    #[test]
    fn group_axioms_small_n() {
        for n in 1..=3 {
            let g = make_gamma(n).unwrap();
            let els: Vec<_> = g.elements().collect();
            for &x in &els {
                assert_eq!(g.mul(x, g.inv(x)), g.identity());
                assert_eq!(g.mul(g.inv(x), x), g.identity());
                for &y in &els {
                    for &w in els.iter().step_by(5) {
                        assert_eq!(g.mul(g.mul(x, y), w), g.mul(x, g.mul(y, w)));
                    }
                }
            }
            let s = g.sigma();
            for b in 0..8 {
                for b2 in 0..8 {
                    assert_eq!(g.mul(g.pow(s, b), g.pow(s, b2)), g.pow(s, b + b2));
                }
            }
        }
    }

    #[test]
    fn subgroups_and_abelianizations() {
        for n in 1..=6 {
            let g = make_gamma(n).unwrap();
            let whole = g.whole();
            assert_eq!(whole.order(), g.order());
            assert_eq!(g.abelianization(&whole).unwrap(), ab(&[2, 2, 2]));
            let st = g.subgroup_closure(&[g.sigma(), g.tau()]);
            assert_eq!(st.order(), 1 << (n + 3));
            assert_eq!(g.abelianization(&st).unwrap(), ab(&[4, 1 << (n + 1)]));
            assert_eq!(g.subgroup_closure(&[]).order(), 1);
            let d = g.derived_subgroup(&whole).unwrap();
            let expect = g.subgroup_closure(&[g.pow(g.sigma(), 2), g.z()]);
            assert_eq!(d.elements, expect.elements);
            assert_eq!(g.abelian_type(&d), ab(&[2, 1 << n]));
            assert!(g.is_abelian(&d));
            assert_eq!(g.derived_subgroup(&d).unwrap().order(), 1);
            assert_eq!(g.exponent(), 4u64.max(1 << (n + 1)));
            let idx2 = g.index2_subgroups();
            assert_eq!(idx2.len(), 7);
            for (_, h) in &idx2 {
                assert_eq!(h.order() * 2, g.order());
                assert!(d.elements.iter().all(|&x| g.contains(h, x)));
            }
            assert!(idx2.iter().any(|(_, h)| h.elements == st.elements));
        }
    }

    #[test]
    fn transfer_kernels() {
        for n in 1..=5 {
            let g = make_gamma(n).unwrap();
            let st = g.subgroup_closure(&[g.sigma(), g.tau()]);
            let k = g.transfer_kernel(&st, Transversal::Least).unwrap();
            assert_eq!(k, AbelianSubspace::span(&[0b010]));
            let h1 = g.subgroup_closure(&[g.rho(), g.sigma(), g.pow(g.tau(), 2)]);
            assert_eq!(
                g.transfer_kernel(&h1, Transversal::Least).unwrap().order(),
                4
            );
            for (_, h) in g.index2_subgroups() {
                assert_eq!(
                    g.transfer_kernel(&h, Transversal::Least).unwrap(),
                    g.transfer_kernel(&h, Transversal::Greatest).unwrap()
                );
            }
        }
    }

    #[test]
    fn artin_examples() {
        assert_eq!(artin_map(Case::A, 0b100), 0b111);
        assert_eq!(artin_map(Case::B, 0b100), 0b101);
        assert_eq!(artin_map(Case::A, 0b001), 0b001);
        assert_eq!(artin_map(Case::B, 0b001), 0b001);
        let k = AbelianSubspace::span(&[0b010]);
        assert_eq!(artin_preimage(Case::A, &k), AbelianSubspace::span(&[0b010]));
        assert_eq!(
            AbelianSubspace::span(&[2, 5]).render(CLASS_NAMES, true),
            "<[p],[zq]>"
        );
    }

    #[test]
    fn parent_mismatch() {
        let g1 = make_gamma(1).unwrap();
        let g2 = make_gamma(2).unwrap();
        let h = g2.whole();
        assert!(matches!(
            g1.abelianization(&h),
            Err(GammaError::ParentMismatch(2, 1))
        ));
    }
}
