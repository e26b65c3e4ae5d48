//! Least solution of `X^2 - m y^2 = -k` or `+k` by exhaustive search over
//! `y = 1, 2, 3, ...`, with `k = 4` when `m = 1 (mod 4)` and `k = 1`
//! otherwise.
//!
//! Every `y` is considered in order. Residue filters only discard a `y` when
//! `m y^2 +- k` is a non-square modulo some small modulus, which rules it out
//! exactly. They make the search fast enough for y around 5 * 10^10.

/// Bound of the unfiltered pass that runs first.
const LINEAR_LIMIT: u64 = 1 << 20;
/// Moduli combined into the wheel of admissible residues for `y`.
const WHEEL: [u64; 8] = [16, 9, 5, 7, 11, 13, 17, 19];
/// Further moduli tested one candidate at a time.
const FILTERS: [u64; 10] = [23, 29, 31, 37, 41, 43, 47, 53, 59, 61];

struct Sieve {
    m: u64,
    k: u64,
    negative: bool,
    modulus: u64,
    residues: Vec<u64>,
    filters: Vec<(u64, u64)>,
}

fn square_table(l: u64) -> Vec<bool> {
    let mut t = vec![false; l as usize];
    for x in 0..l {
        t[(x * x % l) as usize] = true;
    }
    t
}

fn admissible(m: u64, k: u64, negative: bool, l: u64) -> Vec<bool> {
    let sq = square_table(l);
    (0..l)
        .map(|r| {
            let v = (m % l) * (r * r % l) % l;
            let v = if negative {
                (v + l - k % l) % l
            } else {
                (v + k) % l
            };
            sq[v as usize]
        })
        .collect()
}

impl Sieve {
    fn new(m: u64, k: u64, negative: bool) -> Self {
        let mut modulus = 1u64;
        let mut residues = vec![0u64];
        for &l in &WHEEL {
            let ok = admissible(m, k, negative, l);
            let mut next = Vec::with_capacity(residues.len() * l as usize / 2 + 1);
            for j in 0..l {
                for &r in &residues {
                    let y = r + j * modulus;
                    if ok[(y % l) as usize] {
                        next.push(y);
                    }
                }
            }
            modulus *= l;
            residues = next;
        }
        let filters = FILTERS
            .iter()
            .map(|&l| {
                let mask = admissible(m, k, negative, l)
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (i, &b)| acc | (u64::from(b) << i));
                (l, mask)
            })
            .collect();
        Sieve {
            m,
            k,
            negative,
            modulus,
            residues,
            filters,
        }
    }

    /// Least `y` in `[base, base + modulus)` with a solution, if any.
    fn first_in_block(&self, base: u64) -> Option<(u128, u128)> {
        for &r in &self.residues {
            let y = base + r;
            if y == 0
                || !self
                    .filters
                    .iter()
                    .all(|&(l, mask)| mask >> (y % l) & 1 == 1)
            {
                continue;
            }
            let my2 = self.m as u128 * y as u128 * y as u128;
            let n = if self.negative {
                my2 - self.k as u128
            } else {
                my2 + self.k as u128
            };
            if let Some(x) = isqrt_exact(n) {
                return Some((x, y as u128));
            }
        }
        None
    }
}

fn isqrt_exact(n: u128) -> Option<u128> {
    let mut r = (n as f64).sqrt() as u128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    (r * r == n).then_some(r)
}

/// Least solution as `(X, y, sign)` in the `k = 4` scaling, i.e. the unit is
/// `(X + y sqrt m)/2`. The minus sign wins a tie.
pub fn least_solution(m: u64) -> (u128, u128, i8) {
    let k = if m % 4 == 1 { 4 } else { 1 };
    let scale: u128 = if k == 4 { 1 } else { 2 };
    // Most units are small; build the wheels only when a plain pass fails.
    for y in 1..=LINEAR_LIMIT as u128 {
        let my2 = m as u128 * y * y;
        if let Some(x) = isqrt_exact(my2 - k as u128) {
            return (x * scale, y * scale, -1);
        }
        if let Some(x) = isqrt_exact(my2 + k as u128) {
            return (x * scale, y * scale, 1);
        }
    }
    let minus = Sieve::new(m, k, true);
    let plus = Sieve::new(m, k, false);
    assert_eq!(minus.modulus, plus.modulus);
    let mut base = 0u64;
    loop {
        let a = minus.first_in_block(base);
        let b = plus.first_in_block(base);
        let pick = match (a, b) {
            (Some(a), Some(b)) if b.1 < a.1 => Some((b, 1)),
            (Some(a), _) => Some((a, -1)),
            (None, Some(b)) => Some((b, 1)),
            (None, None) => None,
        };
        if let Some(((x, y), sign)) = pick {
            assert!(y > LINEAR_LIMIT as u128);
            return (x * scale, y * scale, sign);
        }
        base += minus.modulus;
    }
}
