//! Prime counts of family members over integer ranges.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polynomial::{FamilyParams, HeegnerNumber, QuadraticPolynomial};
use crate::primality::is_prime_int;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub n: i64,
    #[serde(with = "crate::decimal::int")]
    pub value: BigInt,
    pub is_prime: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    /// Present when the scan was started from `(Z, k, H)` rather than a bare polynomial.
    pub params: Option<FamilyParams>,
    pub poly: QuadraticPolynomial,
    pub n_lo: i64,
    pub n_hi: i64,
    pub records: Vec<ScanRecord>,
    pub prime_count: usize,
    pub composite_count: usize,
}

impl ScanReport {
    pub fn primes(&self) -> impl Iterator<Item = &ScanRecord> {
        self.records.iter().filter(|r| r.is_prime)
    }

    pub fn composites(&self) -> impl Iterator<Item = &ScanRecord> {
        self.records.iter().filter(|r| !r.is_prime)
    }

    /// Joins scans of the same polynomial over disjoint ranges that together
    /// form one contiguous range. Totals are recomputed from the records.
    pub fn merge(mut self, other: ScanReport) -> Result<ScanReport> {
        if self.poly != other.poly {
            return Err(Error::InvariantViolation("cannot merge scans of different polynomials".into()));
        }
        self.records.extend(other.records);
        self.records.sort_by_key(|r| r.n);
        let n_lo = self.n_lo.min(other.n_lo);
        let n_hi = self.n_hi.max(other.n_hi);
        let contiguous = self
            .records
            .iter()
            .zip(n_lo..=n_hi)
            .all(|(r, n)| r.n == n)
            && self.records.len() as i64 == n_hi - n_lo + 1;
        if !contiguous {
            return Err(Error::InvariantViolation(format!(
                "merged scan does not cover [{n_lo}, {n_hi}] exactly once"
            )));
        }
        self.prime_count = self.records.iter().filter(|r| r.is_prime).count();
        self.composite_count = self.records.len() - self.prime_count;
        self.n_lo = n_lo;
        self.n_hi = n_hi;
        if self.params != other.params {
            self.params = None;
        }
        Ok(self)
    }
}

/// Evaluates `poly` at every integer in `[n_lo, n_hi]` and tests each value.
pub fn scan(poly: &QuadraticPolynomial, n_lo: i64, n_hi: i64) -> Result<ScanReport> {
    if n_lo > n_hi {
        return Err(Error::EmptyRange { lo: n_lo, hi: n_hi });
    }
    let records: Vec<ScanRecord> = (n_lo..=n_hi)
        .into_par_iter()
        .map(|n| {
            let value = poly.evaluate_i64(n);
            let is_prime = is_prime_int(&value);
            ScanRecord { n, value, is_prime }
        })
        .collect();
    let prime_count = records.iter().filter(|r| r.is_prime).count();
    Ok(ScanReport {
        params: None,
        poly: poly.clone(),
        n_lo,
        n_hi,
        composite_count: records.len() - prime_count,
        records,
        prime_count,
    })
}

pub fn scan_family(params: &FamilyParams, n_lo: i64, n_hi: i64) -> Result<ScanReport> {
    let poly = QuadraticPolynomial::construct(params)?;
    let mut report = scan(&poly, n_lo, n_hi)?;
    report.params = Some(params.clone());
    Ok(report)
}

/// Count of `n ∈ [n_lo, n_hi]` with `f(n)` prime, without keeping records.
pub fn prime_count(poly: &QuadraticPolynomial, n_lo: i64, n_hi: i64) -> Result<usize> {
    if n_lo > n_hi {
        return Err(Error::EmptyRange { lo: n_lo, hi: n_hi });
    }
    Ok((n_lo..=n_hi)
        .into_par_iter()
        .filter(|&n| is_prime_int(&poly.evaluate_i64(n)))
        .count())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub k: u64,
    pub prime_count: usize,
}

/// Prime counts of `f_{Z,k,H}` over `[n_lo, n_hi]` for each `k ∈ [k_lo, k_hi]`.
pub fn k_sweep(
    z: u64,
    h: HeegnerNumber,
    k_lo: u64,
    k_hi: u64,
    n_lo: i64,
    n_hi: i64,
) -> Result<Vec<SweepEntry>> {
    if k_lo > k_hi {
        return Err(Error::InvalidRange(format!("k range [{k_lo}, {k_hi}] is empty")));
    }
    if n_lo > n_hi {
        return Err(Error::EmptyRange { lo: n_lo, hi: n_hi });
    }
    (k_lo..=k_hi)
        .into_par_iter()
        .map(|k| {
            let poly = QuadraticPolynomial::construct(&FamilyParams::new(z, k, h))?;
            Ok(SweepEntry { k, prime_count: prime_count(&poly, n_lo, n_hi)? })
        })
        .collect()
}

/// Checks `f(n) = f(A − n)` for every record whose mirror also lies in the range.
pub fn symmetry_check(report: &ScanReport) -> bool {
    let a = report.poly.a();
    report.records.iter().all(|r| {
        let mirror = a - BigInt::from(r.n);
        match i64::try_from(&mirror) {
            Ok(m) if (report.n_lo..=report.n_hi).contains(&m) => {
                report.records[(m - report.n_lo) as usize].value == r.value
            }
            _ => true,
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

/// CSV columns are `n,value,is_prime`; JSON mirrors [`ScanReport`].
pub fn export_report(report: &ScanReport, format: ExportFormat) -> Result<Vec<u8>> {
    match format {
        ExportFormat::Csv => {
            let mut out = String::from("n,value,is_prime\n");
            for r in &report.records {
                out.push_str(&format!("{},{},{}\n", r.n, r.value, r.is_prime));
            }
            Ok(out.into_bytes())
        }
        ExportFormat::Json => Ok(serde_json::to_vec_pretty(report)?),
    }
}

pub fn parse_report_json(bytes: &[u8]) -> Result<ScanReport> {
    Ok(serde_json::from_slice(bytes)?)
}
