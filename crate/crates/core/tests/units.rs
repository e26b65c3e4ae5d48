//! Fundamental units for all squarefree m <= 300 against an exhaustive
//! search for the least solution of the Pell equation, and against the
//! reduction cycle of the principal form.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use towerforge::qforms::{class_group, indefinite::Ctx, QuadForm};
use towerforge::quadunits::{fundamental_unit, HalfInt};

#[path = "support/pell.rs"]
mod pell;

fn squarefree(m: u64) -> bool {
    (2..)
        .take_while(|p| p * p <= m)
        .all(|p| !m.is_multiple_of(p * p))
}

/// Totally positive generator `(t + u sqrt D)/2` of the proper automorphs
/// of the principal form, read off one period of its reduction cycle.
fn cycle_unit(disc: i128) -> (BigInt, BigInt) {
    let ctx = Ctx::new(disc);
    let (g, _) = ctx.reduce(&QuadForm::principal(disc));
    let mut m = [
        [BigInt::one(), BigInt::zero()],
        [BigInt::zero(), BigInt::one()],
    ];
    for (_, t) in ctx.cycle(&g) {
        let [[a, b], [c, d]] = m;
        let t = BigInt::from(t);
        m = [[b.clone(), &t * &b - a], [d.clone(), &t * &d - c]];
    }
    let trace = &m[0][0] + &m[1][1];
    let u = &m[1][0] / BigInt::from(g.a);
    (trace.abs(), u.abs())
}

#[test]
fn units_match_search_and_cycle() {
    let mut count = 0;
    for m in (2..=300u64).filter(|&m| squarefree(m)) {
        count += 1;
        let unit = fundamental_unit(m as i64).unwrap();
        assert!(unit.check(), "m = {m}");
        let half = unit.halved();
        let (x, y, sign) = pell::least_solution(m);
        assert_eq!(half.a, BigInt::from(x), "m = {m}");
        assert_eq!(half.b, BigInt::from(y), "m = {m}");
        assert_eq!(unit.norm, sign, "m = {m}");

        let disc = if m % 4 == 1 { m as i128 } else { 4 * m as i128 };
        let (t, u) = cycle_unit(disc);
        // (t + u sqrt D)/2 in the (A + B sqrt m)/2 scaling.
        let plus = if disc == m as i128 {
            HalfInt::new(m as i64, t, u)
        } else {
            HalfInt::new(m as i64, t, 2 * u)
        };
        let g = class_group(disc as i64).unwrap();
        let norm_minus = g.minus_one_class == Some(g.identity_class());
        assert_eq!(unit.norm == -1, norm_minus, "m = {m}");
        let expected = if norm_minus {
            half.mul(&half)
        } else {
            half.clone()
        };
        assert_eq!(expected, plus, "m = {m}");
    }
    assert_eq!(count, 182);
}

#[test]
fn spot_values() {
    let u = fundamental_unit(105).unwrap();
    assert_eq!(
        (u.x.clone(), u.y.clone(), u.norm, u.half),
        (41.into(), 4.into(), 1, false)
    );
    let u = fundamental_unit(5).unwrap();
    assert_eq!(
        (u.x.clone(), u.y.clone(), u.norm, u.half),
        (1.into(), 1.into(), -1, true)
    );
    let u = fundamental_unit(3).unwrap();
    assert_eq!((u.x.clone(), u.y.clone(), u.norm), (2.into(), 1.into(), 1));
    assert!(fundamental_unit(12).is_err());
}
