//! Primality predicates and quadratic-residue symbols.
//!
//! Probabilistic tests (Fermat, Miller-Rabin, Solovay-Strassen) take the
//! random source from the caller. [`is_prime`] is the deterministic dispatcher
//! used by scans and reports; [`wilson_oracle`] and [`Sieve`] are exact
//! references for small inputs.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest sieve limit accepted by [`Sieve::new`].
pub const SIEVE_MAX: u64 = 100_000_000;

/// Largest input accepted by [`wilson_oracle`].
pub const WILSON_MAX: u64 = 10_000;

/// Miller-Rabin with the first 13 prime bases is exact below this bound
/// (3 317 044 064 679 887 385 961 981).
const DETERMINISTIC_BOUND: u128 = 3_317_044_064_679_887_385_961_981;
const DETERMINISTIC_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Rounds used by [`is_prime`] above the deterministic bound.
pub const DISPATCH_ROUNDS: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Composite,
    ProbablePrime,
    ProvenPrime,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Witness {
    /// Base that exposed compositeness.
    Base(BigUint),
    /// Small prime factor found by trial division.
    Factor(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimalityVerdict {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
}

impl PrimalityVerdict {
    fn composite(witness: Option<Witness>) -> Self {
        PrimalityVerdict { verdict: Verdict::Composite, witness }
    }

    fn probable() -> Self {
        PrimalityVerdict { verdict: Verdict::ProbablePrime, witness: None }
    }

    fn proven() -> Self {
        PrimalityVerdict { verdict: Verdict::ProvenPrime, witness: None }
    }

    pub fn is_composite(&self) -> bool {
        self.verdict == Verdict::Composite
    }
}

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| Sieve::new(1000).expect("small limit").primes())
}

// ---------------------------------------------------------------------------
// Jacobi symbol

/// Jacobi symbol `(a / n)` for odd positive `n`.
pub fn jacobi_symbol(a: &BigInt, n: &BigUint) -> Result<i8> {
    if n.is_even() {
        return Err(Error::EvenModulus(n.to_string()));
    }
    let mut result: i8 = 1;
    let mut n = n.clone();
    let mut a_mag = a.magnitude().clone();
    if a.is_negative() && mod4(&n) == 3 {
        // (−1 / n) = (−1)^((n−1)/2)
        result = -result;
    }
    a_mag %= &n;
    while !a_mag.is_zero() {
        let tz = a_mag.trailing_zeros().unwrap_or(0);
        a_mag >>= tz;
        if tz % 2 == 1 {
            let r8 = mod8(&n);
            if r8 == 3 || r8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a_mag, &mut n);
        if mod4(&a_mag) == 3 && mod4(&n) == 3 {
            result = -result;
        }
        a_mag %= &n;
    }
    Ok(if n.is_one() { result } else { 0 })
}

fn mod4(n: &BigUint) -> u64 {
    n.iter_u64_digits().next().unwrap_or(0) & 3
}

fn mod8(n: &BigUint) -> u64 {
    n.iter_u64_digits().next().unwrap_or(0) & 7
}

/// Machine-word Jacobi symbol, same contract as [`jacobi_symbol`].
pub fn jacobi_i64(a: i64, n: u64) -> Result<i8> {
    if n % 2 == 0 {
        return Err(Error::EvenModulus(n.to_string()));
    }
    let mut result: i8 = 1;
    if a < 0 && n % 4 == 3 {
        result = -result;
    }
    let mut a = a.unsigned_abs() % n;
    let mut n = n;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    Ok(if n == 1 { result } else { 0 })
}

// ---------------------------------------------------------------------------
// Machine-word Miller-Rabin

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

fn strong_probable_prime_u64(n: u64, a: u64) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Exact primality for every `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &DETERMINISTIC_BASES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    DETERMINISTIC_BASES[..12].iter().all(|&a| strong_probable_prime_u64(n, a))
}

// ---------------------------------------------------------------------------
// Arbitrary-precision tests

struct OddDecomposition {
    n_minus_1: BigUint,
    d: BigUint,
    s: u64,
}

impl OddDecomposition {
    fn new(n: &BigUint) -> Self {
        let n_minus_1 = n - 1u32;
        let s = n_minus_1.trailing_zeros().unwrap_or(0);
        let d = &n_minus_1 >> s;
        OddDecomposition { n_minus_1, d, s }
    }

    /// Strong probable-prime check of `n = 2^s·d + 1` to base `a`.
    fn passes(&self, n: &BigUint, a: &BigUint) -> bool {
        let mut x = a.modpow(&self.d, n);
        if x.is_one() || x == self.n_minus_1 {
            return true;
        }
        for _ in 1..self.s {
            x = &x * &x % n;
            if x == self.n_minus_1 {
                return true;
            }
            if x.is_one() {
                return false;
            }
        }
        false
    }
}

fn trial_factor(n: &BigUint) -> Option<u64> {
    small_primes()
        .iter()
        .copied()
        .take_while(|&p| BigUint::from(p) < *n)
        .find(|&p| (n % p).is_zero())
}

/// Inputs with no valid random base range; answered exactly.
fn tiny_verdict(n: &BigUint) -> Option<PrimalityVerdict> {
    let v = n.to_u64()?;
    match v {
        0 | 1 => Some(PrimalityVerdict::composite(None)),
        2 | 3 => Some(PrimalityVerdict::probable()),
        _ if v % 2 == 0 => Some(PrimalityVerdict::composite(Some(Witness::Factor(2)))),
        _ => None,
    }
}

/// Miller-Rabin with `rounds` uniformly random bases in `[2, n−2]`.
///
/// Small prime factors are screened by trial division first and reported as
/// the witness. A `Composite` verdict is always correct; `ProbablePrime` errs
/// with probability at most `4^-rounds`.
pub fn miller_rabin<R: Rng + ?Sized>(n: &BigUint, rounds: u32, rng: &mut R) -> PrimalityVerdict {
    if let Some(v) = tiny_verdict(n) {
        return v;
    }
    if let Some(p) = trial_factor(n) {
        return PrimalityVerdict::composite(Some(Witness::Factor(p)));
    }
    let dec = OddDecomposition::new(n);
    let lo = BigUint::from(2u32);
    let hi = n - 1u32; // exclusive upper bound, so bases stay ≤ n − 2
    for _ in 0..rounds {
        let a = rng.gen_biguint_range(&lo, &hi);
        if !dec.passes(n, &a) {
            return PrimalityVerdict::composite(Some(Witness::Base(a)));
        }
    }
    PrimalityVerdict::probable()
}

/// Miller-Rabin over caller-chosen bases, without trial division.
pub fn miller_rabin_bases(n: &BigUint, bases: &[BigUint]) -> PrimalityVerdict {
    if let Some(v) = tiny_verdict(n) {
        return v;
    }
    let dec = OddDecomposition::new(n);
    for a in bases {
        let a = a % n;
        if a.is_zero() {
            continue;
        }
        if !dec.passes(n, &a) {
            return PrimalityVerdict::composite(Some(Witness::Base(a)));
        }
    }
    PrimalityVerdict::probable()
}

/// Fermat test to a single base `a` with `1 < a < n − 1`.
pub fn fermat_test(n: &BigUint, base: &BigUint) -> Result<Verdict> {
    if *n <= BigUint::from(2u32) {
        return Err(Error::Domain(format!("Fermat test needs n > 2, got {n}")));
    }
    let n_minus_1 = n - 1u32;
    if *base <= BigUint::one() || *base >= n_minus_1 {
        return Err(Error::BaseOutOfRange(format!("base {base} not in (1, {n_minus_1})")));
    }
    Ok(if base.modpow(&n_minus_1, n).is_one() {
        Verdict::ProbablePrime
    } else {
        Verdict::Composite
    })
}

/// Solovay-Strassen: compares `a^((n−1)/2)` with the Jacobi symbol `(a/n)`
/// for `rounds` random bases in `[2, n−1]`.
pub fn solovay_strassen<R: Rng + ?Sized>(n: &BigUint, rounds: u32, rng: &mut R) -> PrimalityVerdict {
    if let Some(v) = tiny_verdict(n) {
        return v;
    }
    let n_minus_1 = n - 1u32;
    let half = &n_minus_1 >> 1;
    let lo = BigUint::from(2u32);
    for _ in 0..rounds {
        let a = rng.gen_biguint_range(&lo, n);
        let j = jacobi_symbol(&BigInt::from(a.clone()), n).expect("n is odd here");
        let x = a.modpow(&half, n);
        let expected = match j {
            1 => BigUint::one(),
            -1 => n_minus_1.clone(),
            _ => return PrimalityVerdict::composite(Some(Witness::Base(a))),
        };
        if x != expected {
            return PrimalityVerdict::composite(Some(Witness::Base(a)));
        }
    }
    PrimalityVerdict::probable()
}

/// Exact test by Wilson's theorem: `n` is prime iff `(n−1)! ≡ −1 (mod n)`.
///
/// Lagrange's formulation is the same congruence and shares this oracle.
pub fn wilson_oracle(n: u64) -> Result<bool> {
    if !(2..=WILSON_MAX).contains(&n) {
        return Err(Error::OutOfOracleRange(n));
    }
    let mut acc = 1u64;
    for i in 2..n {
        acc = acc * i % n;
        if acc == 0 {
            return Ok(false);
        }
    }
    Ok(acc == n - 1)
}

/// Full verdict behind [`is_prime`]: `ProvenPrime` below ≈3.3·10²⁴,
/// `ProbablePrime` above.
pub fn primality_verdict(n: &BigUint) -> PrimalityVerdict {
    if let Some(v) = n.to_u64() {
        return if is_prime_u64(v) {
            PrimalityVerdict::proven()
        } else if v < 2 {
            PrimalityVerdict::composite(None)
        } else {
            let witness = small_primes()
                .iter()
                .copied()
                .find(|&p| p < v && v % p == 0)
                .map(Witness::Factor)
                .or_else(|| {
                    DETERMINISTIC_BASES
                        .iter()
                        .find(|&&a| !strong_probable_prime_u64(v, a))
                        .map(|&a| Witness::Base(BigUint::from(a)))
                });
            PrimalityVerdict::composite(witness)
        };
    }
    if let Some(p) = trial_factor(n) {
        return PrimalityVerdict::composite(Some(Witness::Factor(p)));
    }
    if n.to_u128().is_some_and(|v| v < DETERMINISTIC_BOUND) {
        let bases: Vec<BigUint> = DETERMINISTIC_BASES.iter().map(|&b| BigUint::from(b)).collect();
        let v = miller_rabin_bases(n, &bases);
        return if v.is_composite() { v } else { PrimalityVerdict::proven() };
    }
    // Fixed seed keeps the dispatcher a pure function of n.
    let mut rng = ChaCha20Rng::seed_from_u64(0x4845_4547_4e45_5200);
    miller_rabin(n, DISPATCH_ROUNDS, &mut rng)
}

pub fn is_prime(n: &BigUint) -> bool {
    !primality_verdict(n).is_composite()
}

/// Signed convenience wrapper; negative values are never prime.
pub fn is_prime_int(n: &BigInt) -> bool {
    match n.to_biguint() {
        Some(u) => is_prime(&u),
        None => false,
    }
}

// ---------------------------------------------------------------------------
// Sieve

/// Odd-only sieve of Eratosthenes, one bit per odd number.
#[derive(Debug, Clone)]
pub struct Sieve {
    limit: u64,
    composite: Vec<u64>,
}

impl Sieve {
    pub fn new(limit: u64) -> Result<Self> {
        if limit > SIEVE_MAX {
            return Err(Error::LimitTooLarge(limit));
        }
        let odd_slots = (limit / 2 + 1) as usize; // slot i ↔ 2i + 1
        let mut composite = vec![0u64; odd_slots.div_ceil(64)];
        let set = |bits: &mut [u64], i: usize| bits[i / 64] |= 1 << (i % 64);
        set(&mut composite, 0); // 1 is not prime
        let mut p = 3u64;
        while p * p <= limit {
            let i = (p / 2) as usize;
            if composite[i / 64] & (1 << (i % 64)) == 0 {
                let mut m = p * p;
                while m <= limit {
                    set(&mut composite, (m / 2) as usize);
                    m += 2 * p;
                }
            }
            p += 2;
        }
        Ok(Sieve { limit, composite })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Membership for `n ≤ limit`; `None` beyond the sieved range.
    pub fn contains(&self, n: u64) -> Option<bool> {
        if n > self.limit {
            return None;
        }
        Some(match n {
            0 | 1 => false,
            2 => true,
            _ if n % 2 == 0 => false,
            _ => {
                let i = (n / 2) as usize;
                self.composite[i / 64] & (1 << (i % 64)) == 0
            }
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        let two = (self.limit >= 2).then_some(2);
        let odd = (3..=self.limit).step_by(2).filter(move |&n| {
            let i = (n / 2) as usize;
            self.composite[i / 64] & (1 << (i % 64)) == 0
        });
        two.into_iter().chain(odd)
    }

    pub fn primes(&self) -> Vec<u64> {
        self.iter().collect()
    }
}

/// Ordered list of primes `≤ limit`.
pub fn sieve(limit: u64) -> Result<Vec<u64>> {
    Ok(Sieve::new(limit)?.primes())
}
