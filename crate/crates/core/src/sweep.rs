//! Class-group sweeps over ranges of fundamental discriminants: group
//! axioms and the genus count of ambiguous classes.

use crate::abelian::FiniteAbelian;
use crate::intarith::{is_fundamental, prime_disc_factorization};
use crate::qforms::class_group;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscReport {
    pub disc: i64,
    pub h: usize,
    /// Number of prime discriminants dividing `disc`.
    pub t: usize,
    pub ambiguous: usize,
    /// Identity, inverses, commutativity and closure on all pairs, and
    /// associativity on a sample of triples.
    pub axioms_hold: bool,
}

impl DiscReport {
    /// Ambiguous classes number `2^(t-1)`.
    pub fn genus_count_holds(&self) -> bool {
        self.ambiguous == 1 << (self.t - 1)
    }

    pub fn ok(&self) -> bool {
        self.axioms_hold && self.genus_count_holds()
    }
}

pub fn check_discriminant(disc: i64) -> Option<DiscReport> {
    if !is_fundamental(disc) {
        return None;
    }
    let g = class_group(disc).ok()?;
    let t = prime_disc_factorization(disc).ok()?.len();
    let id = g.identity_class();
    let h = g.h;
    let mut ok = true;
    for x in 0..h {
        ok &= g.op(x, id) == x && g.op(x, g.inverse(x)) == id;
        for y in x..h {
            ok &= g.op(x, y) == g.op(y, x);
        }
    }
    // Associativity on triples along a stride through the group.
    let step = (h / 7).max(1);
    for x in (0..h).step_by(step) {
        for y in (0..h).step_by(step) {
            for z in (0..h).step_by(step) {
                ok &= g.op(g.op(x, y), z) == g.op(x, g.op(y, z));
            }
        }
    }
    Some(DiscReport {
        disc,
        h,
        t,
        ambiguous: g.ambiguous_classes().len(),
        axioms_hold: ok,
    })
}

pub fn sweep_sequential(lo: i64, hi: i64) -> Vec<DiscReport> {
    (lo..hi).filter_map(check_discriminant).collect()
}

#[cfg(feature = "parallel")]
pub fn sweep_parallel(lo: i64, hi: i64) -> Vec<DiscReport> {
    use rayon::prelude::*;
    // An indexed source keeps the output in discriminant order.
    let discs: Vec<i64> = (lo..hi).filter(|&d| is_fundamental(d)).collect();
    discs
        .into_par_iter()
        .with_min_len(16)
        .filter_map(check_discriminant)
        .collect()
}

pub fn sweep(lo: i64, hi: i64) -> Vec<DiscReport> {
    #[cfg(feature = "parallel")]
    {
        sweep_parallel(lo, hi)
    }
    #[cfg(not(feature = "parallel"))]
    {
        sweep_sequential(lo, hi)
    }
}
