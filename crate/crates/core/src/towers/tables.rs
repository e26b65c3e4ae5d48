//! Expected values for the seven quadratic and seven quartic unramified
//! subextensions of `k^1/k`, with case A/B columns where they differ.
//!
//! Class vectors use bits `z = 1`, `p = 2`, `q = 4`; quadratic discriminant
//! masks use bits over the prime discriminants `[-4, p, -q, -q']`.

use crate::abelian::AbelianType;
use crate::intarith::Case;

/// `Lit(v)` is `v`; `N(k)` is `2^(n+k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pow2 {
    Lit(u64),
    N(u32),
}

impl Pow2 {
    pub fn eval(self, n: u32) -> u64 {
        match self {
            Pow2::Lit(v) => v,
            Pow2::N(k) => 1u64 << (n + k),
        }
    }
}

pub fn abelian(orders: &[Pow2], n: u32) -> AbelianType {
    let v: Vec<u64> = orders.iter().map(|o| o.eval(n)).collect();
    AbelianType::from_cyclic_orders(&v)
}

/// A value that may depend on the case.
#[derive(Debug, Clone, Copy)]
pub struct ByCase<T> {
    pub a: T,
    pub b: T,
}

impl<T: Copy> ByCase<T> {
    pub const fn same(v: T) -> Self {
        ByCase { a: v, b: v }
    }

    pub fn get(&self, case: Case) -> T {
        match case {
            Case::A => self.a,
            Case::B => self.b,
        }
    }
}

/// Group elements `r^e s^b t^c` as `(e, b, c)`.
pub type Gens = &'static [(i64, i64, i64)];

pub struct QuadraticRow {
    pub j: u8,
    /// `k_j = k(sqrt e)` with `e` the product over this mask.
    pub mask: u8,
    pub h: Pow2,
    pub kappa_order: u64,
    pub norm_group: ByCase<&'static [u8]>,
    pub cl2: ByCase<&'static [Pow2]>,
    pub kappa: &'static [u8],
    pub gens: Gens,
    /// Linear form on `G^ab` whose kernel is `Gal(k^2/k_j)`.
    pub lambda: u8,
}

pub struct QuarticRow {
    pub j: u8,
    /// `K_j = k(sqrt e1, sqrt e2)`.
    pub masks: (u8, u8),
    pub cl2: &'static [Pow2],
    pub norm_group: ByCase<&'static [u8]>,
    pub gens: Gens,
    pub unit_index: u64,
}

use Pow2::{Lit, N};

const C24: &[Pow2] = &[Lit(2), Lit(4)];
const C222: &[Pow2] = &[Lit(2), Lit(2), Lit(2)];

#[rustfmt::skip]
pub const QUADRATIC: [QuadraticRow; 7] = [
    QuadraticRow {
        j: 1,
        mask: 0b0001,
        h: Lit(8),
        kappa_order: 4,
        norm_group: ByCase::same(&[1, 2]),
        cl2: ByCase::same(C24),
        kappa: &[1, 2],
        gens: &[(1, 0, 0), (0, 1, 0), (0, 0, 2)],
        lambda: 4,
    },
    QuadraticRow {
        j: 2,
        mask: 0b0100,
        h: Lit(8),
        kappa_order: 4,
        norm_group: ByCase { a: &[3, 5], b: &[3, 4] },
        cl2: ByCase::same(C24),
        kappa: &[4, 3],
        gens: &[(1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 0, 2)],
        lambda: 7,
    },
    QuadraticRow {
        j: 3,
        mask: 0b1100,
        h: Lit(8),
        kappa_order: 4,
        norm_group: ByCase::same(&[2, 4]),
        cl2: ByCase::same(C24),
        kappa: &[2, 4],
        gens: &[(1, 0, 1), (0, 1, 0), (0, 0, 2)],
        lambda: 5,
    },
    QuadraticRow {
        j: 4,
        mask: 0b0010,
        h: N(3),
        kappa_order: 2,
        norm_group: ByCase::same(&[2, 5]),
        cl2: ByCase::same(&[Lit(4), N(1)]),
        kappa: &[2],
        gens: &[(0, 1, 0), (0, 0, 1)],
        lambda: 1,
    },
    QuadraticRow {
        j: 5,
        mask: 0b1000,
        h: Lit(8),
        kappa_order: 4,
        norm_group: ByCase { a: &[1, 6], b: &[1, 4] },
        cl2: ByCase { a: C24, b: C222 },
        kappa: &[6, 3],
        gens: &[(1, 0, 0), (0, 2, 0), (0, 0, 1)],
        lambda: 2,
    },
    QuadraticRow {
        j: 6,
        mask: 0b0110,
        h: Lit(8),
        kappa_order: 4,
        norm_group: ByCase { a: &[1, 4], b: &[1, 6] },
        cl2: ByCase::same(C24),
        kappa: &[6, 1],
        gens: &[(1, 0, 0), (0, 1, 1), (0, 2, 0)],
        lambda: 6,
    },
    QuadraticRow {
        j: 7,
        mask: 0b1010,
        h: Lit(8),
        kappa_order: 4,
        norm_group: ByCase { a: &[3, 4], b: &[3, 5] },
        cl2: ByCase { a: C24, b: C222 },
        kappa: &[1, 4],
        gens: &[(1, 1, 0), (0, 0, 1), (0, 2, 0)],
        lambda: 3,
    },
];

#[rustfmt::skip]
pub const QUARTIC: [QuarticRow; 7] = [
    QuarticRow {
        j: 1,
        masks: (1, 2),
        cl2: &[Lit(2), N(1)],
        norm_group: ByCase::same(&[2]),
        gens: &[(0, 1, 0), (0, 0, 2)],
        unit_index: 2,
    },
    QuarticRow {
        j: 2,
        masks: (1, 4),
        cl2: C24,
        norm_group: ByCase::same(&[3]),
        gens: &[(1, 1, 0), (0, 2, 0)],
        unit_index: 4,
    },
    QuarticRow {
        j: 3,
        masks: (1, 8),
        cl2: C24,
        norm_group: ByCase::same(&[1]),
        gens: &[(1, 0, 0), (0, 2, 0)],
        unit_index: 4,
    },
    QuarticRow {
        j: 4,
        masks: (2, 4),
        cl2: &[Lit(2), N(1)],
        norm_group: ByCase { a: &[5], b: &[7] },
        gens: &[(0, 1, 1), (0, 2, 0)],
        unit_index: 2,
    },
    QuarticRow {
        j: 5,
        masks: (2, 8),
        cl2: &[Lit(4), N(0)],
        norm_group: ByCase { a: &[7], b: &[5] },
        gens: &[(0, 0, 1), (0, 2, 0)],
        unit_index: 2,
    },
    QuarticRow {
        j: 6,
        masks: (4, 8),
        cl2: C24,
        norm_group: ByCase { a: &[6], b: &[4] },
        gens: &[(1, 0, 1), (0, 2, 0)],
        unit_index: 4,
    },
    QuarticRow {
        j: 7,
        masks: (5, 9),
        cl2: C24,
        norm_group: ByCase { a: &[4], b: &[6] },
        gens: &[(1, 1, 1), (0, 2, 0)],
        unit_index: 4,
    },
];

/// `e` and `d/e` name the same field `k(sqrt e)`.
pub fn canonical_mask(mask: u8) -> u8 {
    mask.min(mask ^ 0b1111)
}

/// Table row of the quadratic extension `k(sqrt e)`.
pub fn quadratic_row_for_mask(mask: u8) -> Option<&'static QuadraticRow> {
    QUADRATIC
        .iter()
        .find(|r| canonical_mask(r.mask) == canonical_mask(mask))
}
