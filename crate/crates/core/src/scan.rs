//! Bulk verification over all admissible triples below given bounds.

use crate::intarith::{is_prime, validate_triple, Case, PrimeTriple};
use crate::towers::{verify_tower, TowerCertificate};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanBounds {
    pub max_p: i64,
    pub max_q: i64,
    pub max_qprime: i64,
}

impl ScanBounds {
    pub fn uniform(max: i64) -> Self {
        ScanBounds {
            max_p: max,
            max_q: max,
            max_qprime: max,
        }
    }

    pub fn largest(&self) -> i64 {
        self.max_p.max(self.max_q).max(self.max_qprime)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub case_a: usize,
    pub case_b: usize,
}

impl ScanSummary {
    pub fn of(certs: &[TowerCertificate], strict_tables: bool) -> Self {
        let passed = certs.iter().filter(|c| c.passes(strict_tables)).count();
        let case_a = certs.iter().filter(|c| c.case_label == Case::A).count();
        ScanSummary {
            total: certs.len(),
            passed,
            failed: certs.len() - passed,
            case_a,
            case_b: certs.len() - case_a,
        }
    }
}

fn primes_in_class(max: i64, residue: i64) -> Vec<i64> {
    (residue..=max)
        .step_by(8)
        .filter(|&x| is_prime(x).unwrap_or(false))
        .collect()
}

/// All triples within the bounds that satisfy the hypotheses, sorted by
/// `(p, q, q')`.
pub fn enumerate_triples(bounds: ScanBounds) -> Vec<PrimeTriple> {
    let ps = primes_in_class(bounds.max_p, 5);
    let qs = primes_in_class(bounds.max_q, 3);
    let qps = primes_in_class(bounds.max_qprime, 7);
    let mut out = Vec::new();
    for &p in &ps {
        for &q in &qs {
            for &qp in &qps {
                if let Ok(t) = validate_triple(p, q, qp) {
                    out.push(t);
                }
            }
        }
    }
    out
}

pub fn scan_sequential(bounds: ScanBounds) -> Vec<TowerCertificate> {
    enumerate_triples(bounds).iter().map(verify_tower).collect()
}

/// Verifies on a dedicated pool of `jobs` threads (0 = one per core).
/// Output order does not depend on scheduling.
#[cfg(feature = "parallel")]
pub fn scan_parallel(bounds: ScanBounds, jobs: usize) -> Vec<TowerCertificate> {
    use rayon::prelude::*;
    let triples = enumerate_triples(bounds);
    let run = || -> Vec<TowerCertificate> { triples.par_iter().map(verify_tower).collect() };
    let mut certs = match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(run),
        Err(_) => run(),
    };
    certs.sort_by_key(|c| (c.p, c.q, c.qprime));
    certs
}

/// Parallel when the `parallel` feature is on, sequential otherwise.
pub fn scan(bounds: ScanBounds, jobs: usize) -> Vec<TowerCertificate> {
    #[cfg(feature = "parallel")]
    {
        if jobs != 1 {
            return scan_parallel(bounds, jobs);
        }
    }
    let _ = jobs;
    scan_sequential(bounds)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_scan() {
        let triples = enumerate_triples(ScanBounds::uniform(50));
        let keys: Vec<_> = triples.iter().map(|t| t.key()).collect();
        assert!(keys.contains(&(5, 3, 7)));
        assert!(keys.contains(&(5, 3, 23)));
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        let certs = scan_sequential(ScanBounds::uniform(50));
        assert_eq!(certs.len(), triples.len());
        assert!(certs.iter().all(|c| c.pass));
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_matches_sequential() {
        let b = ScanBounds {
            max_p: 40,
            max_q: 60,
            max_qprime: 60,
        };
        assert_eq!(scan_parallel(b, 3), scan_sequential(b));
    }
}
