//! Genus theory of the discriminants involved: C4, D4 and H8 factorizations
//! and the tower parameter `n` read off from `Cl_2(-4qq')`.

use crate::abelian::{p_quotient_type, AbelianType, FiniteAbelian};
use crate::intarith::{kronecker, prime_disc_factorization, ArithError, PrimeTriple};
use crate::qforms::{class_group, ideal_class_of_prime, FormError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenusError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error("2-class group of {disc} is {found}, expected type (2, 2^n)")]
    Shape { disc: i64, found: AbelianType },
    #[error("n = {n} for {triple:?} but (q'/q) = {symbol}")]
    CriterionMismatch {
        triple: (i64, i64, i64),
        n: u32,
        symbol: i8,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FactorizationKind {
    C4,
    D4,
    H8,
}

/// A splitting of a discriminant into coprime discriminants.
///
/// For `D4` the parts are `[d1, d2, d3]` with `d1 d2` the C4 pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub kind: FactorizationKind,
    pub parts: Vec<i64>,
}

/// Prime discriminants of `d` with their primes.
fn prime_parts(d: i64) -> Result<Vec<(i64, i64)>, ArithError> {
    Ok(prime_disc_factorization(d)?
        .into_iter()
        .map(|pd| (pd.value(), pd.prime()))
        .collect())
}

fn product(parts: &[(i64, i64)], mask: u32) -> i64 {
    parts
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, (v, _))| v)
        .product()
}

/// `(a/l) = +1` for every prime `l` in `mask`.
fn symbols_positive(a: i64, parts: &[(i64, i64)], mask: u32) -> bool {
    parts
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .all(|(_, (_, l))| kronecker(a, *l) == 1)
}

fn is_c4_split(parts: &[(i64, i64)], m1: u32, m2: u32) -> bool {
    let (d1, d2) = (product(parts, m1), product(parts, m2));
    symbols_positive(d1, parts, m2) && symbols_positive(d2, parts, m1)
}

fn sorted_pair(a: i64, b: i64) -> Vec<i64> {
    let mut v = vec![a, b];
    v.sort_unstable();
    v
}

pub fn c4_factorizations(d: i64) -> Result<Vec<Factorization>, ArithError> {
    let parts = prime_parts(d)?;
    let full = (1u32 << parts.len()) - 1;
    let mut out = Vec::new();
    // Subsets containing the first prime discriminant list each split once.
    for m1 in (1..full).filter(|m| m & 1 == 1) {
        let m2 = full ^ m1;
        if is_c4_split(&parts, m1, m2) {
            out.push(Factorization {
                kind: FactorizationKind::C4,
                parts: sorted_pair(product(&parts, m1), product(&parts, m2)),
            });
        }
    }
    Ok(out)
}

pub fn d4_factorizations(d: i64) -> Result<Vec<Factorization>, ArithError> {
    let parts = prime_parts(d)?;
    let full = (1u32 << parts.len()) - 1;
    let mut out = Vec::new();
    for m3 in 1..full {
        let rest = full ^ m3;
        let low = rest & rest.wrapping_neg();
        for m1 in (1..rest).filter(|m| m & rest == *m && m & low != 0) {
            let m2 = rest ^ m1;
            if m2 != 0 && is_c4_split(&parts, m1, m2) {
                let mut pair = sorted_pair(product(&parts, m1), product(&parts, m2));
                pair.push(product(&parts, m3));
                out.push(Factorization {
                    kind: FactorizationKind::D4,
                    parts: pair,
                });
            }
        }
    }
    Ok(out)
}

pub fn h8_factorizations(d: i64) -> Result<Vec<Factorization>, ArithError> {
    let parts = prime_parts(d)?;
    let t = parts.len();
    let mut out = Vec::new();
    if t < 3 {
        return Ok(out);
    }
    // Label each prime discriminant 0, 1 or 2; canonical labellings have the
    // first occurrence of each label in increasing order.
    let mut labels = vec![0u8; t];
    let total = 3usize.pow(t as u32);
    for code in 0..total {
        let mut c = code;
        for l in labels.iter_mut() {
            *l = (c % 3) as u8;
            c /= 3;
        }
        let mut next = 0u8;
        let mut canonical = true;
        for &l in &labels {
            if l > next {
                canonical = false;
                break;
            }
            if l == next {
                next += 1;
            }
        }
        if !canonical || next != 3 {
            continue;
        }
        let masks: Vec<u32> = (0..3u8)
            .map(|k| {
                labels
                    .iter()
                    .enumerate()
                    .filter(|(_, &l)| l == k)
                    .fold(0, |m, (i, _)| m | 1 << i)
            })
            .collect();
        let d: Vec<i64> = masks.iter().map(|&m| product(&parts, m)).collect();
        let ok = symbols_positive(d[0] * d[1], &parts, masks[2])
            && symbols_positive(d[1] * d[2], &parts, masks[0])
            && symbols_positive(d[2] * d[0], &parts, masks[1]);
        if ok {
            let mut v = d;
            v.sort_unstable();
            out.push(Factorization {
                kind: FactorizationKind::H8,
                parts: v,
            });
        }
    }
    Ok(out)
}

/// Class group facts about `Q(sqrt(-qq'))` used by the tower argument.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxiliaryClasses {
    pub disc: i64,
    pub two_sylow: AbelianType,
    pub n: u32,
    /// `<[z], [q]>` has type (2,2).
    pub z_q_span_type: AbelianType,
    /// Order of the 2-component of the class of a prime above `p`.
    pub p_tilde_order: u64,
    pub z_is_square: bool,
    pub q_is_square: bool,
    pub zq_is_square: bool,
}

/// Computes `n` with `Cl_2(-4qq') = (2, 2^n)` together with the class
/// relations among the primes above 2, `q` and `p`.
pub fn auxiliary_classes(t: &PrimeTriple) -> Result<AuxiliaryClasses, GenusError> {
    let disc = -4 * t.q * t.qprime;
    let g = class_group(disc)?;
    let two = &g.two_sylow;
    let f = two.factors();
    let n = match f {
        [2, big] if big.is_power_of_two() && *big >= 2 => big.trailing_zeros(),
        _ => {
            return Err(GenusError::Shape {
                disc,
                found: two.clone(),
            })
        }
    };
    let (z, _) = ideal_class_of_prime(&g, 2)?;
    let (q, _) = ideal_class_of_prime(&g, t.q)?;
    let (pt, _) = ideal_class_of_prime(&g, t.p)?;
    let id = g.identity_class();
    let span_type = p_quotient_type(2, &g.span(&[z, q]), 1, |x| g.op(x, x), |x| x == id);
    let odd = g.h as u64 / two.order();
    let p2 = g.pow(pt, odd);
    Ok(AuxiliaryClasses {
        disc,
        two_sylow: two.clone(),
        n,
        z_q_span_type: span_type,
        p_tilde_order: g.element_order(p2),
        z_is_square: g.is_square(z),
        q_is_square: g.is_square(q),
        zq_is_square: g.is_square(g.op(z, q)),
    })
}

/// The tower parameter `n`, cross-checked against `n >= 2 <=> (q'/q) = -1`.
pub fn tower_parameter_n(t: &PrimeTriple) -> Result<u32, GenusError> {
    let n = auxiliary_classes(t)?.n;
    let symbol = kronecker(t.qprime, t.q);
    if (n >= 2) != (symbol == -1) {
        return Err(GenusError::CriterionMismatch {
            triple: t.key(),
            n,
            symbol,
        });
    }
    Ok(n)
}
