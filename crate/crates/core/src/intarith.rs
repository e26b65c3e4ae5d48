//! Exact integer primitives: Kronecker symbols, deterministic primality,
//! prime-discriminant factorization and the admissibility test for prime
//! triples `(p, q, q')`.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("{0} is outside the supported input range")]
    OutOfRange(i128),
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
}

/// Reasons a triple fails the admissibility conditions.
#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TripleError {
    #[error("{0} is not prime")]
    NotPrime(i64),
    #[error("{name} = {value} is not congruent to {expected} mod 8")]
    WrongResidue {
        name: String,
        value: i64,
        expected: i64,
    },
    #[error("symbol condition violated: ({num}/{den}) = {value}, expected -1")]
    SymbolCondition { num: i64, den: i64, value: i8 },
    #[error("p, q, q' are not pairwise distinct")]
    NotDistinct,
    #[error("discriminant -4*{0} does not fit in 64 bits")]
    TooLarge(i128),
}

impl TripleError {
    /// Stable short code used in machine-readable reports.
    pub fn code(&self) -> &'static str {
        match self {
            TripleError::NotPrime(_) => "not_prime",
            TripleError::WrongResidue { .. } => "wrong_residue",
            TripleError::SymbolCondition { .. } => "symbol_condition",
            TripleError::NotDistinct => "not_distinct",
            TripleError::TooLarge(_) => "too_large",
        }
    }
}

const KRONECKER_TWO: [i8; 8] = [0, 1, 0, -1, 0, -1, 0, 1];

/// The Kronecker symbol `(a/b)`.
///
/// Uses the conventions `(a/2) = 0, 1, -1` for `a` even, `a = ±1 mod 8`,
/// `a = ±3 mod 8`; `(a/-1) = -1` iff `a < 0`; `(a/0) = 1` iff `a = ±1`.
pub fn kronecker(a: i64, b: i64) -> i8 {
    let mut a = a as i128;
    let mut b = b as i128;
    if b == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if a % 2 == 0 && b % 2 == 0 {
        return 0;
    }
    let mut k: i8 = 1;
    let mut v = 0;
    while b % 2 == 0 {
        b /= 2;
        v += 1;
    }
    if v % 2 == 1 {
        k = KRONECKER_TWO[(a & 7) as usize];
    }
    if b < 0 {
        b = -b;
        if a < 0 {
            k = -k;
        }
    }
    // b is now odd and positive: Jacobi symbol.
    a = a.rem_euclid(b);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = b & 7;
            if r == 3 || r == 5 {
                k = -k;
            }
        }
        std::mem::swap(&mut a, &mut b);
        if a & 3 == 3 && b & 3 == 3 {
            k = -k;
        }
        a %= b;
    }
    if b == 1 {
        k
    } else {
        0
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

// Witness set valid for every n < 3.3 * 10^24, so certainly for u64.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Deterministic primality test for `2 <= x < 2^63`.
pub fn is_prime(x: i64) -> Result<bool, ArithError> {
    if x < 2 {
        return Err(ArithError::OutOfRange(x as i128));
    }
    Ok(is_prime_u64(x as u64))
}

/// Prime factorization by trial division, stopping as soon as the cofactor
/// is prime.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while (*n).is_multiple_of(p) {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    push(3, &mut n);
    let mut p = 5;
    let mut step = 2;
    while p * p <= n {
        if is_prime_u64(n) {
            break;
        }
        push(p, &mut n);
        p += step;
        step = 6 - step;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Integer square root (floor) of a nonnegative integer.
pub fn isqrt(n: i128) -> i128 {
    assert!(n >= 0, "isqrt of negative number");
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

pub fn is_square(n: i128) -> bool {
    n >= 0 && {
        let r = isqrt(n);
        r * r == n
    }
}

pub fn is_fundamental(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 => {
            let e = d / 4;
            matches!(e.rem_euclid(4), 2 | 3) && is_squarefree(e.unsigned_abs())
        }
        _ => false,
    }
}

/// A prime discriminant: `-4`, `±8`, or `ℓ* = (-1)^((ℓ-1)/2) ℓ` for odd `ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimeDiscriminant(i64);

impl PrimeDiscriminant {
    pub fn new(value: i64) -> Option<Self> {
        match value {
            -4 | 8 | -8 => Some(PrimeDiscriminant(value)),
            v if v.rem_euclid(4) == 1 && is_prime_u64(v.unsigned_abs()) => {
                Some(PrimeDiscriminant(v))
            }
            _ => None,
        }
    }

    /// The prime star `ℓ*` attached to an odd prime.
    pub fn from_odd_prime(l: i64) -> Self {
        debug_assert!(l > 2 && l % 2 == 1);
        if l % 4 == 1 {
            PrimeDiscriminant(l)
        } else {
            PrimeDiscriminant(-l)
        }
    }

    pub fn value(self) -> i64 {
        self.0
    }

    /// The rational prime this discriminant is attached to.
    pub fn prime(self) -> i64 {
        if self.0 % 2 == 0 {
            2
        } else {
            self.0.abs()
        }
    }
}

impl fmt::Display for PrimeDiscriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Splits a fundamental discriminant into its prime discriminants, ordered by
/// the underlying prime.
pub fn prime_disc_factorization(d: i64) -> Result<Vec<PrimeDiscriminant>, ArithError> {
    if !is_fundamental(d) {
        return Err(ArithError::NotFundamental(d));
    }
    let mut parts: Vec<PrimeDiscriminant> = factorize(d.unsigned_abs())
        .into_iter()
        .filter(|&(p, _)| p != 2)
        .map(|(p, _)| PrimeDiscriminant::from_odd_prime(p as i64))
        .collect();
    let odd: i64 = parts.iter().map(|p| p.value()).product();
    if d % 2 == 0 {
        // The 2-part absorbs the remaining sign.
        parts.push(PrimeDiscriminant(d / odd));
    }
    parts.sort_by_key(|p| p.prime());
    Ok(parts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Case {
    /// `(q/q') = -1`
    A,
    /// `(q/q') = +1`
    B,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Case::A => write!(f, "A"),
            Case::B => write!(f, "B"),
        }
    }
}

/// An admissible triple of primes with `p = 5, q = 3, q' = 7 (mod 8)` and
/// `(q/p) = (q'/p) = -1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeTriple {
    pub p: i64,
    pub q: i64,
    pub qprime: i64,
    /// `p q q'`
    pub m: i64,
    /// `-4 m`, the discriminant of `k = Q(sqrt(-m))`.
    pub d: i64,
    pub case: Case,
    /// Tower parameter, filled in once `Cl_2(-4qq')` is known.
    pub n: Option<u32>,
}

impl PrimeTriple {
    pub fn with_n(mut self, n: u32) -> Self {
        self.n = Some(n);
        self
    }

    /// The four prime discriminants of `d` in the fixed order
    /// `-4, p, -q, -q'`.
    pub fn prime_discriminants(&self) -> [i64; 4] {
        [-4, self.p, -self.q, -self.qprime]
    }

    pub fn key(&self) -> (i64, i64, i64) {
        (self.p, self.q, self.qprime)
    }
}

pub fn validate_triple(p: i64, q: i64, qprime: i64) -> Result<PrimeTriple, TripleError> {
    for &x in &[p, q, qprime] {
        if x < 2 || !is_prime_u64(x as u64) {
            return Err(TripleError::NotPrime(x));
        }
    }
    if p == q || q == qprime || p == qprime {
        return Err(TripleError::NotDistinct);
    }
    for (name, value, expected) in [("p", p, 5), ("q", q, 3), ("q'", qprime, 7)] {
        if value % 8 != expected {
            return Err(TripleError::WrongResidue {
                name: name.to_string(),
                value,
                expected,
            });
        }
    }
    for num in [q, qprime] {
        let value = kronecker(num, p);
        if value != -1 {
            return Err(TripleError::SymbolCondition { num, den: p, value });
        }
    }
    let m = p as i128 * q as i128 * qprime as i128;
    if 4 * m > i64::MAX as i128 {
        return Err(TripleError::TooLarge(m));
    }
    let case = if kronecker(q, qprime) == -1 {
        Case::A
    } else {
        Case::B
    };
    Ok(PrimeTriple {
        p,
        q,
        qprime,
        m: m as i64,
        d: -4 * m as i64,
        case,
        n: None,
    })
}
