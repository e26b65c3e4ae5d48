//! Binary quadratic forms `ax^2 + bxy + cy^2` of fundamental discriminant:
//! reduction, composition and class group enumeration for both signs of the
//! discriminant. Class groups of positive discriminants are narrow; the wide
//! group is the quotient by the class of the form `(-1, b, c)`.
//!
//! Coefficients are `i128`. Inputs are reduced before any composition, so
//! every intermediate stays far below `2^127` for discriminants that fit in
//! an `i64`.

use crate::abelian::{self, AbelianType, FiniteAbelian};
use crate::intarith::{self, isqrt, kronecker};
use crate::quadunits;
use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i128),
    #[error("form {0} is not primitive")]
    Imprimitive(QuadForm),
    #[error("discriminant mismatch: {0} vs {1}")]
    DiscMismatch(i128, i128),
    #[error("form {0} is negative definite")]
    NegativeDefinite(QuadForm),
    #[error("{prime} is inert in Q(sqrt({disc}))")]
    InertPrime { disc: i128, prime: i64 },
    #[error("{0} is not prime")]
    NotPrime(i64),
    #[error("discriminant {0} is outside the supported range")]
    OutOfRange(i128),
    #[error("form {0} is not in the class table")]
    UnknownClass(QuadForm),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadForm {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

impl QuadForm {
    pub const fn new(a: i128, b: i128, c: i128) -> Self {
        QuadForm { a, b, c }
    }

    /// The form `(a, b, (b^2 - disc) / 4a)`, if that is integral.
    pub fn from_disc(a: i128, b: i128, disc: i128) -> Option<Self> {
        let num = b * b - disc;
        if a == 0 || num % (4 * a) != 0 {
            return None;
        }
        Some(QuadForm::new(a, b, num / (4 * a)))
    }

    pub fn principal(disc: i128) -> Self {
        let b = disc.rem_euclid(2);
        QuadForm::new(1, b, (b * b - disc) / 4)
    }

    pub fn disc(&self) -> i128 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn content(&self) -> i128 {
        self.a.gcd(&self.b).gcd(&self.c)
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    pub fn inverse(&self) -> Self {
        QuadForm::new(self.a, -self.b, self.c)
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        BigInt::from(self.a) * x * x + BigInt::from(self.b) * x * y + BigInt::from(self.c) * y * y
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

/// Extended gcd: returns `(g, x, y)` with `x a + y b = g >= 0`.
pub(crate) fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Reduction of positive definite forms: `|b| <= a <= c`, with `b >= 0`
/// whenever `|b| = a` or `a = c`.
pub(crate) fn reduce_definite(f: QuadForm) -> QuadForm {
    let QuadForm {
        mut a,
        mut b,
        mut c,
    } = f;
    debug_assert!(a > 0);
    loop {
        // b into (-a, a]
        let k = (a - b).div_euclid(2 * a);
        c += b * k + a * k * k;
        b += 2 * a * k;
        if a > c {
            std::mem::swap(&mut a, &mut c);
            b = -b;
            continue;
        }
        break;
    }
    if a == c && b < 0 {
        b = -b;
    }
    QuadForm::new(a, b, c)
}

/// Reduction theory of indefinite forms (positive nonsquare discriminant).
///
/// A form is reduced when `|sqrt(D) - 2|a|| < b < sqrt(D)`. The operator
/// `rho(a, b, c) = (c, r, (r^2 - D)/4c)` with `r = -b mod 2c` suitably
/// normalized maps reduced forms to reduced forms; two reduced forms are
/// properly equivalent iff they lie on the same `rho`-cycle.
pub mod indefinite {
    use super::QuadForm;

    /// `floor(sqrt(D))` together with `D`.
    #[derive(Debug, Clone, Copy)]
    pub struct Ctx {
        pub disc: i128,
        pub sqrt_floor: i128,
    }

    impl Ctx {
        pub fn new(disc: i128) -> Self {
            assert!(disc > 0 && !crate::intarith::is_square(disc));
            Ctx {
                disc,
                sqrt_floor: crate::intarith::isqrt(disc),
            }
        }

        pub fn is_reduced(&self, f: &QuadForm) -> bool {
            let s = self.sqrt_floor;
            let a2 = 2 * f.a.abs();
            f.b > 0 && f.b <= s && a2 - f.b <= s && a2 + f.b > s
        }

        /// One `rho` step. Returns the new form and the shift `t` such that
        /// `f` composed with `[[0, -1], [1, t]]` is the new form.
        pub fn rho(&self, f: &QuadForm) -> (QuadForm, i128) {
            let s = self.sqrt_floor;
            let ac = f.c.abs();
            let lo = if ac > s { -ac + 1 } else { s + 1 - 2 * ac };
            let r = lo + (-f.b - lo).rem_euclid(2 * ac);
            let t = (r + f.b) / (2 * f.c);
            let next = QuadForm::new(f.c, r, (r * r - self.disc) / (4 * f.c));
            (next, t)
        }

        /// Applies `rho` until the form is reduced; returns the shifts used.
        pub fn reduce(&self, f: &QuadForm) -> (QuadForm, Vec<i128>) {
            let mut g = *f;
            let mut shifts = Vec::new();
            while !self.is_reduced(&g) {
                let (h, t) = self.rho(&g);
                g = h;
                shifts.push(t);
                assert!(
                    shifts.len() < 100_000,
                    "indefinite reduction failed to converge"
                );
            }
            (g, shifts)
        }

        /// The `rho`-cycle starting at a reduced form, with the shift leading
        /// from each form to the next.
        pub fn cycle(&self, start: &QuadForm) -> Vec<(QuadForm, i128)> {
            debug_assert!(self.is_reduced(start));
            let mut out = Vec::new();
            let mut g = *start;
            loop {
                let (h, t) = self.rho(&g);
                out.push((g, t));
                g = h;
                if g == *start {
                    break;
                }
            }
            out
        }

        /// Lexicographically least form on the cycle of `f`.
        pub fn canonical(&self, f: &QuadForm) -> QuadForm {
            let (r, _) = self.reduce(f);
            self.cycle(&r)
                .into_iter()
                .map(|(g, _)| g)
                .min()
                .expect("cycle is nonempty")
        }
    }
}

fn check_fundamental(disc: i128) -> Result<(), FormError> {
    if disc.abs() > i64::MAX as i128 {
        return Err(FormError::OutOfRange(disc));
    }
    if !intarith::is_fundamental(disc as i64) {
        return Err(FormError::NotFundamental(disc));
    }
    Ok(())
}

fn validate(f: &QuadForm) -> Result<i128, FormError> {
    let disc = f.disc();
    check_fundamental(disc)?;
    if !f.is_primitive() {
        return Err(FormError::Imprimitive(*f));
    }
    if disc < 0 && f.a < 0 {
        return Err(FormError::NegativeDefinite(*f));
    }
    Ok(disc)
}

/// Reduced representative of the class of `f`: the unique reduced form for
/// negative discriminants, the least form of the reduction cycle for
/// positive ones.
pub fn reduce(f: &QuadForm) -> Result<QuadForm, FormError> {
    let disc = validate(f)?;
    if disc < 0 {
        Ok(reduce_definite(*f))
    } else {
        Ok(indefinite::Ctx::new(disc).canonical(f))
    }
}

/// Dirichlet composition of two forms of discriminant `disc`, unreduced.
pub(crate) fn compose_raw(f: &QuadForm, g: &QuadForm, disc: i128) -> QuadForm {
    let s = (f.b + g.b) / 2;
    let (g1, x1, y1) = ext_gcd(f.a, g.a);
    let (e, x2, y2) = ext_gcd(g1, s);
    let (lam, mu, nu) = (x2 * x1, x2 * y1, y2);
    let a3 = f.a * g.a / (e * e);
    let num = lam * f.a * g.b + mu * g.a * f.b + nu * ((f.b * g.b + disc) / 2);
    debug_assert_eq!(num % e, 0);
    let m = 2 * a3.abs();
    let mut b3 = (num / e).rem_euclid(m);
    if b3 > a3.abs() {
        b3 -= m;
    }
    let c_num = b3 * b3 - disc;
    assert_eq!(
        c_num % (4 * a3),
        0,
        "composition of {f} and {g} is not integral"
    );
    QuadForm::new(a3, b3, c_num / (4 * a3))
}

/// Composes two forms of the same fundamental discriminant and returns the
/// reduced representative of the product class.
pub fn compose(f: &QuadForm, g: &QuadForm) -> Result<QuadForm, FormError> {
    let d1 = validate(f)?;
    let d2 = validate(g)?;
    if d1 != d2 {
        return Err(FormError::DiscMismatch(d1, d2));
    }
    if d1 < 0 {
        let h = compose_raw(&reduce_definite(*f), &reduce_definite(*g), d1);
        Ok(reduce_definite(h))
    } else {
        let ctx = indefinite::Ctx::new(d1);
        let (fr, _) = ctx.reduce(f);
        let (gr, _) = ctx.reduce(g);
        Ok(ctx.canonical(&compose_raw(&fr, &gr, d1)))
    }
}

/// The form class group of a fundamental discriminant, narrow when the
/// discriminant is positive.
#[derive(Debug, Clone)]
pub struct FormClassGroup {
    pub disc: i128,
    /// Canonical representatives, sorted; the principal class first.
    pub classes: Vec<QuadForm>,
    pub h: usize,
    pub two_sylow: AbelianType,
    /// Class of `(-1, b, c)` (positive discriminants only).
    pub minus_one_class: Option<usize>,
    identity: usize,
    lookup: HashMap<QuadForm, usize>,
    ctx: Option<indefinite::Ctx>,
    full_type: OnceLock<AbelianType>,
}

impl FiniteAbelian for FormClassGroup {
    fn order(&self) -> usize {
        self.h
    }
    fn identity(&self) -> usize {
        self.identity
    }
    fn op(&self, x: usize, y: usize) -> usize {
        let f = compose_raw(&self.classes[x], &self.classes[y], self.disc);
        self.index_of_raw(&f)
            .unwrap_or_else(|| panic!("composition left the class table of {}", self.disc))
    }
}

impl FormClassGroup {
    fn index_of_raw(&self, f: &QuadForm) -> Option<usize> {
        let r = match &self.ctx {
            None => reduce_definite(*f),
            Some(ctx) => ctx.reduce(f).0,
        };
        self.lookup.get(&r).copied()
    }

    /// Index of the class containing `f`.
    pub fn class_of(&self, f: &QuadForm) -> Result<usize, FormError> {
        let disc = validate(f)?;
        if disc != self.disc {
            return Err(FormError::DiscMismatch(self.disc, disc));
        }
        self.index_of_raw(f).ok_or(FormError::UnknownClass(*f))
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.op(x, y)
    }

    pub fn inverse(&self, x: usize) -> usize {
        self.index_of_raw(&self.classes[x].inverse())
            .expect("inverse class exists")
    }

    /// Full invariant factors, computed on first use.
    pub fn invariants(&self) -> &AbelianType {
        self.full_type.get_or_init(|| abelian::structure(self))
    }

    pub fn identity_class(&self) -> usize {
        self.identity
    }

    pub fn is_square(&self, x: usize) -> bool {
        (0..self.h).any(|y| self.op(y, y) == x)
    }

    pub fn ambiguous_classes(&self) -> Vec<usize> {
        (0..self.h)
            .filter(|&x| self.op(x, x) == self.identity)
            .collect()
    }

    /// Subgroup generated by the given classes.
    pub fn subgroup(&self, gens: &[usize]) -> Vec<usize> {
        self.span(gens)
    }

    /// Class number in the wide sense.
    pub fn wide_class_number(&self) -> usize {
        match self.minus_one_class {
            Some(j) if j != self.identity => self.h / 2,
            _ => self.h,
        }
    }

    /// 2-class group in the wide sense.
    pub fn wide_two_sylow(&self) -> AbelianType {
        match self.minus_one_class {
            Some(j) if j != self.identity => {
                let syl = abelian::sylow_elements(self, 2);
                let id = self.identity;
                abelian::p_quotient_type(2, &syl, 2, |x| self.op(x, x), |x| x == id || x == j)
            }
            _ => self.two_sylow.clone(),
        }
    }

    pub fn two_class_number(&self) -> u64 {
        self.two_sylow.order()
    }

    pub fn wide_two_class_number(&self) -> u64 {
        self.wide_two_sylow().order()
    }
}

fn enumerate_definite(disc: i128) -> Vec<QuadForm> {
    // i64 fast path: this loop dominates the cost of a tower certificate.
    let dd = (-disc) as i64;
    let parity = (disc.rem_euclid(2)) as i64;
    let mut out = Vec::new();
    let mut a: i64 = 1;
    while 3 * a * a <= dd {
        let four_a = 4 * a;
        let mut b = parity;
        while b <= a {
            let num = b * b + dd;
            if num % four_a == 0 {
                let c = num / four_a;
                if c >= a {
                    out.push(QuadForm::new(a as i128, b as i128, c as i128));
                    if b > 0 && b < a && c > a {
                        out.push(QuadForm::new(a as i128, -b as i128, c as i128));
                    }
                }
            }
            b += 2;
        }
        a += 1;
    }
    out
}

fn enumerate_indefinite(ctx: &indefinite::Ctx) -> Vec<QuadForm> {
    let s = ctx.sqrt_floor as i64;
    let disc = ctx.disc as i64;
    let mut out = Vec::new();
    let mut b = if (disc - s) % 2 == 0 { s } else { s - 1 };
    while b > 0 {
        let absn = (disc - b * b) / 4;
        let lo = ((s + 1 - b + 1) / 2).max(1);
        let hi = (s + b) / 2;
        for a in lo..=hi {
            if absn % a == 0 {
                let c = absn / a;
                out.push(QuadForm::new(a as i128, b as i128, -(c as i128)));
                out.push(QuadForm::new(-(a as i128), b as i128, c as i128));
            }
        }
        b -= 2;
    }
    out
}

/// Enumerates the class group of a fundamental discriminant and computes its
/// structure.
pub fn class_group(disc: i64) -> Result<FormClassGroup, FormError> {
    let disc = disc as i128;
    check_fundamental(disc)?;
    let (classes, lookup, ctx) = if disc < 0 {
        let mut forms = enumerate_definite(disc);
        forms.sort_unstable();
        let lookup: HashMap<QuadForm, usize> =
            forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        (forms, lookup, None)
    } else {
        let ctx = indefinite::Ctx::new(disc);
        let reduced = enumerate_indefinite(&ctx);
        let mut cycle_of: HashMap<QuadForm, usize> = HashMap::with_capacity(reduced.len());
        let mut reps: Vec<QuadForm> = Vec::new();
        for f in &reduced {
            if cycle_of.contains_key(f) {
                continue;
            }
            let cyc = ctx.cycle(f);
            let id = reps.len();
            reps.push(cyc.iter().map(|(g, _)| *g).min().unwrap());
            for (g, _) in cyc {
                cycle_of.insert(g, id);
            }
        }
        debug_assert_eq!(cycle_of.len(), reduced.len());
        // Renumber so representatives are sorted.
        let mut order: Vec<usize> = (0..reps.len()).collect();
        order.sort_by_key(|&i| reps[i]);
        let mut new_index = vec![0; reps.len()];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        let lookup = cycle_of
            .into_iter()
            .map(|(f, i)| (f, new_index[i]))
            .collect();
        let sorted: Vec<QuadForm> = order.iter().map(|&i| reps[i]).collect();
        (sorted, lookup, Some(ctx))
    };
    let mut group = FormClassGroup {
        disc,
        h: classes.len(),
        classes,
        two_sylow: AbelianType::trivial(),
        minus_one_class: None,
        identity: 0,
        lookup,
        ctx,
        full_type: OnceLock::new(),
    };
    group.identity = group
        .index_of_raw(&QuadForm::principal(disc))
        .expect("principal class present");
    if disc > 0 {
        let b = disc.rem_euclid(2);
        let minus = QuadForm::new(-1, b, (disc - b * b) / 4);
        group.minus_one_class = group.index_of_raw(&minus);
    }
    // Closure spot check on a handful of pairs.
    let h = group.h;
    for (x, y) in [(0, h / 2), (h / 3, h - 1), (h - 1, h - 1)] {
        let _ = group.op(x.min(h - 1), y.min(h - 1));
    }
    let syl = abelian::sylow_elements(&group, 2);
    let id = group.identity;
    group.two_sylow = abelian::p_quotient_type(2, &syl, 1, |x| group.op(x, x), |x| x == id);
    Ok(group)
}

/// 2-primary part of a class group's invariants.
pub fn two_sylow(group: &FormClassGroup) -> AbelianType {
    group.two_sylow.clone()
}

/// The class of a form with leading coefficient `l`, for a prime `l` that is
/// ramified or split. For split primes the form with the least nonnegative
/// middle coefficient is used.
pub fn ideal_class_of_prime(
    group: &FormClassGroup,
    l: i64,
) -> Result<(usize, QuadForm), FormError> {
    if l < 2 || !intarith::is_prime_u64(l as u64) {
        return Err(FormError::NotPrime(l));
    }
    let disc = group.disc;
    if kronecker(disc as i64, l) == -1 {
        return Err(FormError::InertPrime { disc, prime: l });
    }
    let l = l as i128;
    let b = (0..2 * l)
        .find(|b| (b * b - disc).rem_euclid(4 * l) == 0)
        .ok_or(FormError::InertPrime {
            disc,
            prime: l as i64,
        })?;
    let f = QuadForm::from_disc(l, b, disc).expect("integral by choice of b");
    Ok((group.class_of(&f)?, f))
}

/// Searches for `x^2 - disc*y^2 = 4N`. A returned `None` is a proof of
/// insolubility: exhaustive below `sqrt(4N/|disc|)` for `disc < 0`, and a
/// congruence obstruction or reduction-cycle certificate for `disc > 0`.
pub fn is_principal_rep(disc: i64, n: i64) -> Result<Option<(BigInt, BigInt)>, FormError> {
    check_fundamental(disc as i128)?;
    if disc < 0 {
        let target = 4 * n as i128;
        if target < 0 {
            return Ok(None);
        }
        let dd = -(disc as i128);
        let mut y = 0i128;
        while dd * y * y <= target {
            let rest = target - dd * y * y;
            let x = isqrt(rest);
            if x * x == rest {
                return Ok(Some((BigInt::from(x), BigInt::from(y))));
            }
            y += 1;
        }
        Ok(None)
    } else {
        match quadunits::solve_norm_form(1, disc, 4 * n) {
            Ok(quadunits::NormFormOutcome::Solved { x, y }) => Ok(Some((x, y))),
            Ok(quadunits::NormFormOutcome::Insoluble(_)) => Ok(None),
            Err(_) => Err(FormError::OutOfRange(disc as i128)),
        }
    }
}

/// Whether `x^2 - disc*y^2 = 4N` is soluble. Same answer as
/// [`is_principal_rep`] without building a solution.
pub fn is_principal(disc: i64, n: i64) -> Result<bool, FormError> {
    if disc < 0 {
        return Ok(is_principal_rep(disc, n)?.is_some());
    }
    check_fundamental(disc as i128)?;
    quadunits::norm_form_soluble(1, disc, 4 * n).map_err(|_| FormError::OutOfRange(disc as i128))
}
