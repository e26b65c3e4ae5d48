//! Presentation checks: coset enumeration of the defining presentation and
//! its variants, and abelianization from relator exponent sums.

use super::{make_gamma, GammaError};
use crate::abelian::AbelianType;
use serde::{Deserialize, Serialize};

/// Letters are columns of the coset table: `2g` is generator `g`, `2g + 1`
/// its inverse. Generators: 0 = r, 1 = s, 2 = t.
type Word = Vec<usize>;

const R: usize = 0;
const S: usize = 1;
const T: usize = 2;

fn power(g: usize, k: i64) -> Word {
    let letter = if k >= 0 { 2 * g } else { 2 * g + 1 };
    vec![letter; k.unsigned_abs() as usize]
}

fn concat(parts: &[Word]) -> Word {
    parts.concat()
}

/// `[x,y] = x^-1 y^-1 x y` for single generators.
fn commutator(x: usize, y: usize) -> Word {
    concat(&[power(x, -1), power(y, -1), power(x, 1), power(y, 1)])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `[r,t] = s^E t^2`
    RhoTau,
    /// `[t,r] = s^E t^2`
    TauRho,
}

/// Relators of the presentation with last relation `[x,y] = s^e t^2`.
pub fn relators(n: u32, sigma_exp: i64, orientation: Orientation) -> Vec<Word> {
    let big = 1i64 << n;
    let (x, y) = match orientation {
        Orientation::RhoTau => (R, T),
        Orientation::TauRho => (T, R),
    };
    vec![
        power(R, 4),
        power(S, 2 * big),
        power(T, 4),
        concat(&[power(R, 2), power(T, -2), power(S, -big)]),
        commutator(S, T),
        concat(&[commutator(R, S), power(S, -2)]),
        concat(&[commutator(x, y), power(T, -2), power(S, -sigma_exp)]),
    ]
}

const UNDEF: u32 = 0;

/// Todd-Coxeter (HLT with coincidence processing) over the trivial
/// subgroup; returns the group order, or `None` past `limit` cosets.
pub fn enumerate_order(rels: &[Word], ngens: usize, limit: usize) -> Option<u64> {
    let cols = 2 * ngens;
    let mut e = Enumerator {
        cols,
        table: vec![vec![UNDEF; cols]; 2],
        parent: vec![0, 1],
        limit,
        overflow: false,
    };
    let mut alpha = 1usize;
    while alpha < e.table.len() {
        if e.parent[alpha] == alpha as u32 {
            for w in rels {
                e.scan_and_fill(alpha as u32, w);
                if e.overflow {
                    return None;
                }
                if e.parent[alpha] != alpha as u32 {
                    break;
                }
            }
            if e.parent[alpha] == alpha as u32 {
                for x in 0..cols {
                    if e.table[alpha][x] == UNDEF {
                        e.define(alpha as u32, x);
                        if e.overflow {
                            return None;
                        }
                    }
                }
            }
        }
        alpha += 1;
    }
    Some(
        (1..e.table.len())
            .filter(|&c| e.parent[c] == c as u32)
            .count() as u64,
    )
}

struct Enumerator {
    cols: usize,
    table: Vec<Vec<u32>>,
    parent: Vec<u32>,
    limit: usize,
    overflow: bool,
}

impl Enumerator {
    fn define(&mut self, a: u32, x: usize) {
        if self.table.len() > self.limit {
            self.overflow = true;
            return;
        }
        let b = self.table.len() as u32;
        self.table.push(vec![UNDEF; self.cols]);
        self.parent.push(b);
        self.table[a as usize][x] = b;
        self.table[b as usize][x ^ 1] = a;
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut c = c;
        while self.parent[c as usize] != r {
            let next = self.parent[c as usize];
            self.parent[c as usize] = r;
            c = next;
        }
        r
    }

    fn merge(&mut self, k: u32, l: u32, queue: &mut Vec<u32>) {
        let (k, l) = (self.rep(k), self.rep(l));
        if k != l {
            let (mu, nu) = (k.min(l), k.max(l));
            self.parent[nu as usize] = mu;
            queue.push(nu);
        }
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let g = queue[i];
            i += 1;
            for x in 0..self.cols {
                let d = self.table[g as usize][x];
                if d == UNDEF {
                    continue;
                }
                self.table[d as usize][x ^ 1] = UNDEF;
                let mu = self.rep(g);
                let nu = self.rep(d);
                let mux = self.table[mu as usize][x];
                let nux = self.table[nu as usize][x ^ 1];
                if mux != UNDEF {
                    self.merge(nu, mux, &mut queue);
                } else if nux != UNDEF {
                    self.merge(mu, nux, &mut queue);
                } else {
                    self.table[mu as usize][x] = nu;
                    self.table[nu as usize][x ^ 1] = mu;
                }
            }
        }
    }

    fn scan_and_fill(&mut self, a: u32, w: &[usize]) {
        let mut f = a;
        let mut b = a;
        let mut i: isize = 0;
        let mut j: isize = w.len() as isize - 1;
        loop {
            while i <= j && self.table[f as usize][w[i as usize]] != UNDEF {
                f = self.table[f as usize][w[i as usize]];
                i += 1;
            }
            if i > j {
                if f != a {
                    self.coincidence(f, a);
                }
                return;
            }
            while j >= i && self.table[b as usize][w[j as usize] ^ 1] != UNDEF {
                b = self.table[b as usize][w[j as usize] ^ 1];
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return;
            } else if i == j {
                let x = w[i as usize];
                self.table[f as usize][x] = b;
                self.table[b as usize][x ^ 1] = f;
                return;
            } else {
                self.define(f, w[i as usize]);
                if self.overflow {
                    return;
                }
            }
        }
    }
}

/// Abelian invariants of `Z^ngens / <exponent-sum rows>`; `None` if infinite.
pub fn abelianization_of(rels: &[Word], ngens: usize) -> Option<AbelianType> {
    let mut m: Vec<Vec<i64>> = rels
        .iter()
        .map(|w| {
            let mut row = vec![0i64; ngens];
            for &l in w {
                row[l / 2] += if l % 2 == 0 { 1 } else { -1 };
            }
            row
        })
        .collect();
    let diag = smith_diagonal(&mut m, ngens);
    if diag.len() < ngens || diag.contains(&0) {
        return None;
    }
    let orders: Vec<u64> = diag.iter().map(|d| d.unsigned_abs()).collect();
    Some(AbelianType::from_cyclic_orders(&orders))
}

/// Diagonal of a Smith-type reduction (entries need not divide each other;
/// the cyclic decomposition is canonicalized by the caller).
fn smith_diagonal(m: &mut [Vec<i64>], cols: usize) -> Vec<i64> {
    let rows = m.len();
    let mut diag = Vec::new();
    let mut top = 0;
    for col in 0..cols {
        if top >= rows {
            break;
        }
        loop {
            // Pivot: smallest nonzero absolute value in the remaining block.
            let mut best: Option<(usize, usize)> = None;
            for r in top..rows {
                for c in col..cols {
                    if m[r][c] != 0 && best.is_none_or(|(br, bc)| m[r][c].abs() < m[br][bc].abs()) {
                        best = Some((r, c));
                    }
                }
            }
            let Some((pr, pc)) = best else {
                return diag;
            };
            m.swap(top, pr);
            for row in m.iter_mut() {
                row.swap(col, pc);
            }
            let p = m[top][col];
            let mut clean = true;
            for r in 0..rows {
                if r != top && m[r][col] != 0 {
                    let q = m[r][col] / p;
                    for c in col..cols {
                        m[r][c] -= q * m[top][c];
                    }
                    if m[r][col] != 0 {
                        clean = false;
                    }
                }
            }
            for c in col + 1..cols {
                if m[top][c] != 0 {
                    let q = m[top][c] / p;
                    for row in m.iter_mut() {
                        row[c] -= q * row[col];
                    }
                    if m[top][c] != 0 {
                        clean = false;
                    }
                }
            }
            if clean {
                diag.push(p);
                top += 1;
                break;
            }
        }
    }
    diag
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariantReport {
    /// `E` in `s^E t^2`, as a power of two.
    pub sigma_exponent_log2: u32,
    pub orientation: Orientation,
    pub order: Option<u64>,
    pub abelianization: Option<AbelianType>,
    pub expected_order: u64,
    pub passes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub relation: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub n: u32,
    pub relations: Vec<RelationCheck>,
    pub variants: Vec<VariantReport>,
}

impl ConsistencyReport {
    /// The adopted presentation passes and every normal-form relation holds.
    pub fn adopted_passes(&self) -> bool {
        self.relations.iter().all(|r| r.holds)
            && self
                .variants
                .iter()
                .filter(|v| v.sigma_exponent_log2 == self.n)
                .all(|v| v.passes)
    }

    pub fn variant(&self, log2: u32, orientation: Orientation) -> Option<&VariantReport> {
        self.variants
            .iter()
            .find(|v| v.sigma_exponent_log2 == log2 && v.orientation == orientation)
    }
}

const COSET_LIMIT: usize = 2_000_000;

/// Checks the defining and auxiliary relations in the normal-form group and
/// enumerates the presentation with `[r,t]` or `[t,r]` equal to
/// `s^(2^n) t^2` or `s^(2^(n-1)) t^2`.
pub fn presentation_consistency(n: u32) -> Result<ConsistencyReport, GammaError> {
    let g = make_gamma(n)?;
    let (r, s, t) = (g.rho(), g.sigma(), g.tau());
    let id = g.identity();
    let big = 1i64 << n;
    let rs = g.mul(r, s);
    let rt = g.mul(r, t);
    let rst = g.mul(rs, t);
    let t2 = g.pow(t, 2);
    let checks: Vec<(&str, bool)> = vec![
        ("r^4 = 1", g.pow(r, 4) == id),
        ("s^(2^(n+1)) = 1", g.pow(s, 2 * big) == id),
        ("t^4 = 1", g.pow(t, 4) == id),
        ("r^2 = s^(2^n) t^2", g.pow(r, 2) == g.element(0, big, 2)),
        ("[s,t] = 1", g.commutator(s, t) == id),
        ("[r,s] = s^2", g.commutator(r, s) == g.pow(s, 2)),
        (
            "[r,t] = s^(2^n) t^2",
            g.commutator(r, t) == g.element(0, big, 2),
        ),
        (
            "[t,r] = s^(2^n) t^2",
            g.commutator(t, r) == g.element(0, big, 2),
        ),
        ("(rs)^2 = r^2", g.mul(rs, rs) == g.pow(r, 2)),
        ("(rst)^2 = t^2", g.mul(rst, rst) == t2),
        ("(rt)^2 = t^2", g.mul(rt, rt) == t2),
        ("[r,t^2] = 1", g.commutator(r, t2) == id),
        ("|G| = 2^(n+4)", g.elements().count() == 1 << (n + 4)),
    ];
    let relations = checks
        .into_iter()
        .map(|(rel, holds)| RelationCheck {
            relation: rel.to_string(),
            holds,
        })
        .collect();
    let expected_order = 1u64 << (n + 4);
    let eight = AbelianType::from(vec![2, 2, 2]);
    let mut variants = Vec::new();
    for log2 in [n, n - 1] {
        for orientation in [Orientation::RhoTau, Orientation::TauRho] {
            let rels = relators(n, 1 << log2, orientation);
            let order = enumerate_order(&rels, 3, COSET_LIMIT);
            let abelianization = abelianization_of(&rels, 3);
            let passes = order == Some(expected_order) && abelianization.as_ref() == Some(&eight);
            variants.push(VariantReport {
                sigma_exponent_log2: log2,
                orientation,
                order,
                abelianization,
                expected_order,
                passes,
            });
        }
    }
    Ok(ConsistencyReport {
        n,
        relations,
        variants,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_presentations() {
        // Z/6 = <a | a^6>, S3 = <a,b | a^3, b^2, (ab)^2>, Q8 = <i,j | i^4, i^2 j^-2, j^-1 i j i>
        assert_eq!(enumerate_order(&[power(0, 6)], 1, 1000), Some(6));
        let s3 = vec![
            power(0, 3),
            power(1, 2),
            concat(&[power(0, 1), power(1, 1), power(0, 1), power(1, 1)]),
        ];
        assert_eq!(enumerate_order(&s3, 2, 1000), Some(6));
        let q8 = vec![
            power(0, 4),
            concat(&[power(0, 2), power(1, -2)]),
            concat(&[power(1, -1), power(0, 1), power(1, 1), power(0, 1)]),
        ];
        assert_eq!(enumerate_order(&q8, 2, 1000), Some(8));
        assert_eq!(abelianization_of(&s3, 2), Some(AbelianType::from(vec![2])));
        assert_eq!(abelianization_of(&[power(0, 4)], 2), None);
    }

    #[test]
    fn gamma_presentation_variants() {
        for n in 1..=4 {
            let rep = presentation_consistency(n).unwrap();
            assert!(rep.adopted_passes(), "{rep:?}");
            for o in [Orientation::RhoTau, Orientation::TauRho] {
                assert_eq!(rep.variant(n, o).unwrap().order, Some(1 << (n + 4)));
                assert!(!rep.variant(n - 1, o).unwrap().passes);
            }
        }
    }
}
