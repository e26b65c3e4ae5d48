//! Invariant-factor bookkeeping for finite abelian groups.

use crate::intarith::factorize;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Canonical invariant factors `(d_1, ..., d_r)` with `d_i | d_{i+1}` and
/// every `d_i >= 2`. The trivial group is the empty list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct AbelianType(Vec<u64>);

impl AbelianType {
    pub fn trivial() -> Self {
        AbelianType(Vec::new())
    }

    /// Builds the canonical type of a direct product of cyclic groups of the
    /// given orders (in any order, 1s allowed).
    pub fn from_cyclic_orders(orders: &[u64]) -> Self {
        let mut by_prime: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for &o in orders {
            assert!(o >= 1, "cyclic order must be positive");
            for (p, e) in factorize(o) {
                by_prime.entry(p).or_default().push(p.pow(e));
            }
        }
        let width = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![1u64; width];
        for powers in by_prime.values_mut() {
            powers.sort_unstable_by(|a, b| b.cmp(a));
            for (slot, pw) in factors.iter_mut().rev().zip(powers.iter()) {
                *slot *= pw;
            }
        }
        AbelianType(factors)
    }

    /// Type of an abelian `p`-group from its torsion counts:
    /// `counts[k] = #{x : p^k x = 0}`, with `counts[0] = 1`.
    pub fn from_p_torsion_counts(p: u64, counts: &[u64]) -> Self {
        // #cyclic factors of order >= p^k is log_p(counts[k]/counts[k-1]).
        let mut at_least = Vec::new();
        for k in 1..counts.len() {
            let ratio = counts[k] / counts[k - 1];
            at_least.push(ilog(p, ratio));
        }
        let mut orders = Vec::new();
        for k in 0..at_least.len() {
            let exactly = at_least[k] - at_least.get(k + 1).copied().unwrap_or(0);
            for _ in 0..exactly {
                orders.push(p.pow(k as u32 + 1));
            }
        }
        AbelianType::from_cyclic_orders(&orders)
    }

    pub fn factors(&self) -> &[u64] {
        &self.0
    }

    pub fn order(&self) -> u64 {
        self.0.iter().product()
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.0.is_empty()
    }

    /// The `p`-primary component.
    pub fn primary_part(&self, p: u64) -> Self {
        let orders: Vec<u64> = self
            .0
            .iter()
            .map(|&d| {
                let mut pp = 1;
                let mut d = d;
                while d % p == 0 {
                    d /= p;
                    pp *= p;
                }
                pp
            })
            .collect();
        AbelianType::from_cyclic_orders(&orders)
    }
}

impl From<Vec<u64>> for AbelianType {
    fn from(v: Vec<u64>) -> Self {
        AbelianType::from_cyclic_orders(&v)
    }
}

impl fmt::Display for AbelianType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

fn ilog(p: u64, mut x: u64) -> usize {
    let mut k = 0;
    while x > 1 {
        assert_eq!(x % p, 0, "torsion counts are not powers of {p}");
        x /= p;
        k += 1;
    }
    k
}

/// A finite abelian group given by an element enumeration and its law.
/// Elements are addressed by index `0..order()`.
pub trait FiniteAbelian {
    fn order(&self) -> usize;
    fn identity(&self) -> usize;
    fn op(&self, x: usize, y: usize) -> usize;

    fn pow(&self, x: usize, mut k: u64) -> usize {
        let mut acc = self.identity();
        let mut base = x;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.op(acc, base);
            }
            base = self.op(base, base);
            k >>= 1;
        }
        acc
    }

    fn element_order(&self, x: usize) -> u64 {
        let id = self.identity();
        let mut y = x;
        let mut k = 1;
        while y != id {
            y = self.op(y, x);
            k += 1;
        }
        k
    }

    /// Subgroup generated by `gens`, as a sorted element list.
    fn span(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        let id = self.identity();
        seen[id] = true;
        let mut out = vec![id];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            i += 1;
            for &g in gens {
                let y = self.op(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Elements of the `p`-Sylow subgroup, grown from `p'`-parts of elements
/// until it reaches its known order.
pub fn sylow_elements<G: FiniteAbelian + ?Sized>(g: &G, p: u64) -> Vec<usize> {
    let h = g.order() as u64;
    let mut pv = 1;
    while h.is_multiple_of(pv * p) {
        pv *= p;
    }
    let cofactor = h / pv;
    let mut gens = Vec::new();
    let mut current = g.span(&[]);
    let mut member = vec![false; g.order()];
    member[g.identity()] = true;
    for x in 0..g.order() {
        if current.len() as u64 == pv {
            break;
        }
        let y = g.pow(x, cofactor);
        if !member[y] {
            gens.push(y);
            current = g.span(&gens);
            for &z in &current {
                member[z] = true;
            }
        }
    }
    assert_eq!(current.len() as u64, pv, "Sylow subgroup has wrong order");
    current
}

/// Type of a `p`-group `P` modulo a subgroup `K` (pass `K = {0}` for `P`
/// itself). `members` lists the elements of `P`.
pub fn p_quotient_type<T: Copy>(
    p: u64,
    members: &[T],
    kernel_order: usize,
    power_p: impl Fn(T) -> T,
    in_kernel: impl Fn(T) -> bool,
) -> AbelianType {
    let mut hist: Vec<u64> = Vec::new();
    for &x in members {
        let mut y = x;
        let mut k = 0;
        while !in_kernel(y) {
            y = power_p(y);
            k += 1;
            assert!(k < 64, "element of infinite order in a p-group");
        }
        if hist.len() <= k {
            hist.resize(k + 1, 0);
        }
        hist[k] += 1;
    }
    let mut counts = Vec::new();
    let mut running = 0;
    for h in hist {
        running += h;
        counts.push(running / kernel_order as u64);
    }
    AbelianType::from_p_torsion_counts(p, &counts)
}

/// Full invariant factors via primary decomposition.
pub fn structure<G: FiniteAbelian + ?Sized>(g: &G) -> AbelianType {
    let h = g.order() as u64;
    let id = g.identity();
    let mut orders = Vec::new();
    for (p, _) in factorize(h) {
        let syl = sylow_elements(g, p);
        let ty = p_quotient_type(p, &syl, 1, |x| g.pow(x, p), |x| x == id);
        orders.extend_from_slice(ty.factors());
    }
    AbelianType::from_cyclic_orders(&orders)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Zn(Vec<usize>);

    impl Zn {
        fn index(&self, v: &[usize]) -> usize {
            v.iter()
                .zip(&self.0)
                .fold(0, |acc, (&x, &m)| acc * m + x % m)
        }
        fn coords(&self, mut i: usize) -> Vec<usize> {
            let mut out = vec![0; self.0.len()];
            for k in (0..self.0.len()).rev() {
                out[k] = i % self.0[k];
                i /= self.0[k];
            }
            out
        }
    }

    impl FiniteAbelian for Zn {
        fn order(&self) -> usize {
            self.0.iter().product()
        }
        fn identity(&self) -> usize {
            0
        }
        fn op(&self, x: usize, y: usize) -> usize {
            let (a, b) = (self.coords(x), self.coords(y));
            let s: Vec<usize> = a.iter().zip(&b).map(|(u, v)| u + v).collect();
            self.index(&s)
        }
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(AbelianType::from_cyclic_orders(&[6, 2]).factors(), &[2, 6]);
        assert_eq!(
            AbelianType::from_cyclic_orders(&[4, 2, 1]).factors(),
            &[2, 4]
        );
        assert_eq!(AbelianType::from_cyclic_orders(&[3, 4]).factors(), &[12]);
        assert_eq!(
            AbelianType::from_cyclic_orders(&[1]).factors(),
            &[] as &[u64]
        );
        assert_eq!(
            AbelianType::from(vec![2, 6]).primary_part(2).factors(),
            &[2, 2]
        );
        assert_eq!(AbelianType::trivial().to_string(), "()");
        assert_eq!(AbelianType::from(vec![2, 2, 2]).to_string(), "(2,2,2)");
    }

    #[test]
    fn structure_of_products() {
        for dims in [
            vec![2, 4],
            vec![2, 2, 2],
            vec![6, 4],
            vec![3, 9, 2],
            vec![8],
        ] {
            let g = Zn(dims.clone());
            let orders: Vec<u64> = dims.iter().map(|&d| d as u64).collect();
            assert_eq!(structure(&g), AbelianType::from_cyclic_orders(&orders));
        }
    }

    #[test]
    fn quotient_by_subgroup() {
        // (Z/4 x Z/2) / <(2,0)> = (2,2)
        let g = Zn(vec![4, 2]);
        let k = g.span(&[g.index(&[2, 0])]);
        let members: Vec<usize> = (0..8).collect();
        let ty = p_quotient_type(2, &members, k.len(), |x| g.op(x, x), |x| k.contains(&x));
        assert_eq!(ty.factors(), &[2, 2]);
    }
}
