//! Units of real quadratic fields and the norm equations `a x^2 - b y^2 = N`.
//!
//! Fundamental units come from the continued fraction of `sqrt(m)`. Norm
//! equations are decided exactly: either a solution with the least `y >= 0`
//! is returned, or a certificate that none exists (a congruence obstruction
//! when one is found, otherwise the list of reduction cycles that a solution
//! would have to produce).

use crate::intarith::{self, is_square, isqrt, PrimeTriple};
use crate::qforms::{indefinite::Ctx, QuadForm};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UnitError {
    #[error("{0} is not a squarefree integer > 1")]
    NotSquarefree(i64),
    #[error("invalid norm form {a}x^2 - {b}y^2 = {n}: {reason}")]
    InvalidNormForm {
        a: i64,
        b: i64,
        n: i64,
        reason: &'static str,
    },
    #[error("right-hand side {0} is too large for the representation search")]
    OutOfRange(i64),
    #[error("unit-square witness failed for {0:?}: {1}")]
    WitnessFailed((i64, i64, i64), String),
}

/// The fundamental unit of `Q(sqrt m)`: `x + y sqrt m`, or `(x + y sqrt m)/2`
/// when `half` is set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FundamentalUnit {
    pub m: i64,
    #[serde(with = "crate::decimal")]
    pub x: BigInt,
    #[serde(with = "crate::decimal")]
    pub y: BigInt,
    pub norm: i8,
    pub half: bool,
}

impl FundamentalUnit {
    /// Coordinates `(A, B)` with the unit equal to `(A + B sqrt m)/2`.
    pub fn halved(&self) -> HalfInt {
        if self.half {
            HalfInt::new(self.m, self.x.clone(), self.y.clone())
        } else {
            HalfInt::new(self.m, &self.x * 2, &self.y * 2)
        }
    }

    /// Checks the defining norm identity.
    pub fn check(&self) -> bool {
        let lhs = &self.x * &self.x - BigInt::from(self.m) * &self.y * &self.y;
        let scale = if self.half { 4 } else { 1 };
        lhs == BigInt::from(self.norm as i64 * scale)
    }
}

/// `(a + b sqrt m)/2`, with `a = b (mod 2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfInt {
    pub m: i64,
    #[serde(with = "crate::decimal")]
    pub a: BigInt,
    #[serde(with = "crate::decimal")]
    pub b: BigInt,
}

impl HalfInt {
    pub fn new(m: i64, a: BigInt, b: BigInt) -> Self {
        HalfInt { m, a, b }
    }

    pub fn one(m: i64) -> Self {
        HalfInt::new(m, BigInt::from(2), BigInt::zero())
    }

    pub fn mul(&self, other: &HalfInt) -> HalfInt {
        debug_assert_eq!(self.m, other.m);
        let m = BigInt::from(self.m);
        let a: BigInt = (&self.a * &other.a + m * &self.b * &other.b) / 2;
        let b: BigInt = (&self.a * &other.b + &other.a * &self.b) / 2;
        HalfInt::new(self.m, a, b)
    }

    /// `N(alpha) = (a^2 - m b^2)/4`.
    pub fn norm(&self) -> BigInt {
        (&self.a * &self.a - BigInt::from(self.m) * &self.b * &self.b) / 4
    }
}

fn brute_force_unit(m: i64) -> FundamentalUnit {
    // Least Y with X^2 - m Y^2 = -4 or 4 (m = 1 mod 4) or with
    // x^2 - m y^2 = -1 or 1 (otherwise); the smaller X wins for equal Y.
    let mm = m as i128;
    let half_form = m % 4 == 1;
    let rhs: [i128; 2] = if half_form { [-4, 4] } else { [-1, 1] };
    let mut y: i128 = 1;
    loop {
        for r in rhs {
            let t = mm * y * y + r;
            if t > 0 && is_square(t) {
                let x = isqrt(t);
                let norm = r.signum() as i8;
                return if half_form && x % 2 == 0 {
                    FundamentalUnit {
                        m,
                        x: BigInt::from(x / 2),
                        y: BigInt::from(y / 2),
                        norm,
                        half: false,
                    }
                } else {
                    FundamentalUnit {
                        m,
                        x: BigInt::from(x),
                        y: BigInt::from(y),
                        norm,
                        half: half_form,
                    }
                };
            }
        }
        y += 1;
    }
}

/// Fundamental unit of the maximal order of `Q(sqrt m)`.
pub fn fundamental_unit(m: i64) -> Result<FundamentalUnit, UnitError> {
    if m < 2 || !intarith::is_squarefree(m as u64) {
        return Err(UnitError::NotSquarefree(m));
    }
    if m < 17 {
        return Ok(brute_force_unit(m));
    }
    let mm = m as i128;
    let s = isqrt(mm);
    let half_form = m % 4 == 1;
    let (mut pp, mut qq, mut a) = (0i128, 1i128, s);
    let (mut p_prev, mut p) = (BigInt::one(), BigInt::from(s));
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    let mut k: u64 = 0;
    loop {
        // p_k^2 - m q_k^2 = (-1)^(k+1) Q_{k+1}
        pp = a * qq - pp;
        qq = (mm - pp * pp) / qq;
        let norm: i8 = if k.is_multiple_of(2) { -1 } else { 1 };
        if qq == 1 {
            return Ok(FundamentalUnit {
                m,
                x: p,
                y: q,
                norm,
                half: false,
            });
        }
        if qq == 4 && half_form {
            debug_assert!(p.is_odd() && q.is_odd());
            return Ok(FundamentalUnit {
                m,
                x: p,
                y: q,
                norm,
                half: true,
            });
        }
        a = (s + pp) / qq;
        let ab = BigInt::from(a);
        let np = &ab * &p + &p_prev;
        let nq = &ab * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, np);
        q_prev = std::mem::replace(&mut q, nq);
        k += 1;
    }
}

pub fn unit_norm(m: i64) -> Result<i8, UnitError> {
    Ok(fundamental_unit(m)?.norm)
}

/// Why `a x^2 - b y^2 = N` has no integral solution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InsolubilityCertificate {
    /// No solution modulo `modulus`.
    Congruence { modulus: u64 },
    /// `disc = 4ab`; `form_class` is the least form on the cycle of
    /// `(a, 0, -b)`; `candidates` are the classes of `(N/k^2, B, C)` for all
    /// admissible `k` and `B`, none of which is equal to `form_class`.
    ReductionCycle {
        disc: i128,
        form_class: QuadForm,
        candidates: Vec<QuadForm>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormFormOutcome {
    Solved {
        #[serde(with = "crate::decimal")]
        x: BigInt,
        #[serde(with = "crate::decimal")]
        y: BigInt,
    },
    Insoluble(InsolubilityCertificate),
}

impl NormFormOutcome {
    pub fn solution(&self) -> Option<(&BigInt, &BigInt)> {
        match self {
            NormFormOutcome::Solved { x, y } => Some((x, y)),
            NormFormOutcome::Insoluble(_) => None,
        }
    }
}

/// True if `a x^2 - b y^2 = n` has no solution modulo `modulus`.
pub fn congruence_obstructs(a: i64, b: i64, n: i64, modulus: u64) -> bool {
    let md = modulus as i128;
    let mut lhs = vec![false; modulus as usize];
    for x in 0..md {
        lhs[((a as i128) * x * x).rem_euclid(md) as usize] = true;
    }
    !(0..md).any(|y| lhs[((n as i128) + (b as i128) * y * y).rem_euclid(md) as usize])
}

const CONGRUENCE_MODULUS_CAP: u64 = 1 << 16;

fn candidate_moduli(a: i64, b: i64, n: i64) -> Vec<u64> {
    let mut primes: BTreeSet<u64> = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29]
        .into_iter()
        .collect();
    for v in [a, b, n] {
        for (l, _) in intarith::factorize(v.unsigned_abs()) {
            primes.insert(l);
        }
    }
    let mut out = Vec::new();
    for l in primes {
        let extra = n.unsigned_abs().max(1);
        let mut e = 0;
        let mut t = extra;
        while t.is_multiple_of(l) {
            t /= l;
            e += 1;
        }
        let top = e + if l == 2 { 4 } else { 2 };
        let mut pk = 1u64;
        for _ in 0..top {
            match pk.checked_mul(l) {
                Some(v) if v <= CONGRUENCE_MODULUS_CAP => pk = v,
                _ => break,
            }
            out.push(pk);
        }
    }
    out.sort_unstable();
    out
}

type Mat = [[BigInt; 2]; 2];

fn mat_id() -> Mat {
    [
        [BigInt::one(), BigInt::zero()],
        [BigInt::zero(), BigInt::one()],
    ]
}

fn mat_mul(x: &Mat, y: &Mat) -> Mat {
    [
        [
            &x[0][0] * &y[0][0] + &x[0][1] * &y[1][0],
            &x[0][0] * &y[0][1] + &x[0][1] * &y[1][1],
        ],
        [
            &x[1][0] * &y[0][0] + &x[1][1] * &y[1][0],
            &x[1][0] * &y[0][1] + &x[1][1] * &y[1][1],
        ],
    ]
}

/// Inverse of a determinant-one matrix.
fn mat_inv(x: &Mat) -> Mat {
    [[x[1][1].clone(), -&x[0][1]], [-&x[1][0], x[0][0].clone()]]
}

/// `m * [[0, -1], [1, t]]`.
fn step_right(m: Mat, t: i128) -> Mat {
    let [[a, b], [c, d]] = m;
    let t = BigInt::from(t);
    let nb = &t * &b - a;
    let nd = &t * &d - c;
    [[b, nb], [d, nd]]
}

fn apply(m: &Mat, v: &(BigInt, BigInt)) -> (BigInt, BigInt) {
    (
        &m[0][0] * &v.0 + &m[0][1] * &v.1,
        &m[1][0] * &v.0 + &m[1][1] * &v.1,
    )
}

/// Reduces `f`, returning the reduced form and `M` with `f o M` reduced.
fn reduce_tracked(ctx: &Ctx, f: &QuadForm) -> (QuadForm, Mat) {
    let (g, shifts) = ctx.reduce(f);
    let m = shifts.iter().fold(mat_id(), |acc, &t| step_right(acc, t));
    (g, m)
}

fn smaller(u: &(BigInt, BigInt), v: &(BigInt, BigInt)) -> bool {
    (u.1.abs(), u.0.abs()) < (v.1.abs(), v.0.abs())
}

/// Moves `v` along its orbit under the automorph `aut` to the point of
/// least `|y|`.
fn minimize(v: (BigInt, BigInt), aut: &Mat, aut_inv: &Mat) -> (BigInt, BigInt) {
    let mut best = v;
    for m in [aut, aut_inv] {
        loop {
            let next = apply(m, &best);
            if smaller(&next, &best) {
                best = next;
            } else {
                break;
            }
        }
    }
    (best.0.abs(), best.1.abs())
}

enum Located {
    Insoluble(InsolubilityCertificate),
    /// Forms `(N/k^2, B, C)` whose reduced forms sit at the given positions
    /// of the cycle of `g`.
    Found {
        ctx: Ctx,
        g: QuadForm,
        cycle: Vec<(QuadForm, i128)>,
        hits: Vec<(i128, QuadForm, usize)>,
    },
}

fn locate(a: i64, b: i64, n: i64) -> Result<Located, UnitError> {
    let invalid = |reason| UnitError::InvalidNormForm { a, b, n, reason };
    if a <= 0 || b <= 0 {
        return Err(invalid("coefficients must be positive"));
    }
    if a.gcd(&b) != 1 {
        return Err(invalid("coefficients must be coprime"));
    }
    if n == 0 {
        return Err(invalid("right-hand side must be nonzero"));
    }
    let disc = 4 * (a as i128) * (b as i128);
    if is_square(disc) {
        return Err(invalid("ab must not be a square"));
    }
    if n.unsigned_abs() > 1 << 24 {
        return Err(UnitError::OutOfRange(n));
    }
    for modulus in candidate_moduli(a, b, n) {
        if congruence_obstructs(a, b, n, modulus) {
            return Ok(Located::Insoluble(InsolubilityCertificate::Congruence {
                modulus,
            }));
        }
    }

    let ctx = Ctx::new(disc);
    let g = QuadForm::new(a as i128, 0, -(b as i128));
    let (g_red, _) = ctx.reduce(&g);
    let cycle = ctx.cycle(&g_red);
    let position: HashMap<QuadForm, usize> = cycle
        .iter()
        .enumerate()
        .map(|(i, (f, _))| (*f, i))
        .collect();

    let nn = n as i128;
    let mut hits = Vec::new();
    let mut misses = Vec::new();
    let mut k: i128 = 1;
    while k * k <= nn.abs() {
        if nn % (k * k) == 0 {
            let np = nn / (k * k);
            let modulus = 4 * np.abs();
            for bb in 0..2 * np.abs() {
                if (bb * bb - disc).rem_euclid(modulus) != 0 {
                    continue;
                }
                let h = QuadForm::from_disc(np, bb, disc).expect("integral by choice of B");
                if !h.is_primitive() {
                    continue;
                }
                let (h_red, _) = ctx.reduce(&h);
                match position.get(&h_red) {
                    Some(&i) => hits.push((k, h, i)),
                    None => misses.push(ctx.canonical(&h_red)),
                }
            }
        }
        k += 1;
    }
    if hits.is_empty() {
        misses.sort_unstable();
        misses.dedup();
        return Ok(Located::Insoluble(
            InsolubilityCertificate::ReductionCycle {
                disc,
                form_class: cycle.iter().map(|(f, _)| *f).min().expect("nonempty"),
                candidates: misses,
            },
        ));
    }
    Ok(Located::Found {
        ctx,
        g,
        cycle,
        hits,
    })
}

/// Decides solubility of `a x^2 - b y^2 = n` without constructing a
/// solution.
pub fn norm_form_soluble(a: i64, b: i64, n: i64) -> Result<bool, UnitError> {
    Ok(matches!(locate(a, b, n)?, Located::Found { .. }))
}

/// Solves `a x^2 - b y^2 = n` for coprime positive `a, b` with `ab` not a
/// square. Returns the solution with least `y >= 0` (and `x >= 0`), or a
/// certificate of insolubility.
pub fn solve_norm_form(a: i64, b: i64, n: i64) -> Result<NormFormOutcome, UnitError> {
    let (ctx, g, cycle, hits) = match locate(a, b, n)? {
        Located::Insoluble(cert) => return Ok(NormFormOutcome::Insoluble(cert)),
        Located::Found {
            ctx,
            g,
            cycle,
            hits,
        } => (ctx, g, cycle, hits),
    };
    let (_, m_g) = reduce_tracked(&ctx, &g);
    // One pass over the cycle, keeping the partial products at hit positions.
    let mut wanted: Vec<usize> = hits.iter().map(|h| h.2).collect();
    wanted.sort_unstable();
    wanted.dedup();
    let mut at: HashMap<usize, Mat> = HashMap::new();
    let mut acc = mat_id();
    let mut next = 0;
    for (i, (_, t)) in cycle.iter().enumerate() {
        if next < wanted.len() && wanted[next] == i {
            at.insert(i, acc.clone());
            next += 1;
        }
        acc = step_right(acc, *t);
    }
    let aut = mat_mul(&mat_mul(&m_g, &acc), &mat_inv(&m_g));
    let aut_inv = mat_inv(&aut);

    let mut best: Option<(BigInt, BigInt)> = None;
    for (k, h, i) in hits {
        let (_, m_h) = reduce_tracked(&ctx, &h);
        let t = mat_mul(&mat_mul(&m_g, &at[&i]), &mat_inv(&m_h));
        let kb = BigInt::from(k);
        let v = (&t[0][0] * &kb, &t[1][0] * &kb);
        debug_assert_eq!(
            BigInt::from(a) * &v.0 * &v.0 - BigInt::from(b) * &v.1 * &v.1,
            BigInt::from(n)
        );
        let v = minimize(v, &aut, &aut_inv);
        if best.as_ref().is_none_or(|w| smaller(&v, w)) {
            best = Some(v);
        }
    }
    let (x, y) = best.expect("at least one hit");
    Ok(NormFormOutcome::Solved { x, y })
}

/// `eta = (x sqrt p + y sqrt(qq'))/2` with `p x^2 - qq' y^2 = -4` and
/// `eta^2 = eps_m^u`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitSquareWitness {
    pub p: i64,
    pub q: i64,
    pub qprime: i64,
    #[serde(with = "crate::decimal")]
    pub x: BigInt,
    #[serde(with = "crate::decimal")]
    pub y: BigInt,
    pub u: u32,
    /// `eta^2` as `(A + B sqrt m)/2`.
    pub eta_squared: HalfInt,
}

impl UnitSquareWitness {
    /// `(p x^2 - qq' y^2)/4`; equals -1 for a valid witness.
    pub fn eta_norm(&self) -> BigInt {
        let qq = BigInt::from(self.q * self.qprime);
        (BigInt::from(self.p) * &self.x * &self.x - qq * &self.y * &self.y) / 4
    }
}

/// Finds the witness for a valid triple.
pub fn eta_witness(t: &PrimeTriple) -> Result<UnitSquareWitness, UnitError> {
    let key = t.key();
    let fail = |msg: String| UnitError::WitnessFailed(key, msg);
    let qq = t.q * t.qprime;
    let (x, y) = match solve_norm_form(t.p, qq, -4)? {
        NormFormOutcome::Solved { x, y } => (x, y),
        NormFormOutcome::Insoluble(c) => {
            return Err(fail(format!(
                "p x^2 - qq' y^2 = -4 reported insoluble: {c:?}"
            )))
        }
    };
    let m = t.p * qq;
    let eta_sq = HalfInt::new(m, BigInt::from(qq) * &y * &y - 2, &x * &y);
    let eps = fundamental_unit(m)?.halved();
    let mut power = eps.clone();
    let mut u = 1u32;
    while power.b < eta_sq.b {
        power = power.mul(&eps);
        u += 1;
    }
    if power != eta_sq {
        return Err(fail("eta^2 is not a power of the fundamental unit".into()));
    }
    if u.is_multiple_of(2) {
        return Err(fail(format!("eta^2 = eps^{u} with even exponent")));
    }
    Ok(UnitSquareWitness {
        p: t.p,
        q: t.q,
        qprime: t.qprime,
        x,
        y,
        u,
        eta_squared: eta_sq,
    })
}
