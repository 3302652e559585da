//! Structured primes `p = f(0) = (bk² + H)/4` with `bk = 2Zk − 1`.
//!
//! The pair `(Z, k)` is the secret; `p` alone reveals only the product `Zk`.
//! Two such primes form an RSA-style modulus. A plain random-prime generator
//! is included as a timing baseline.

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polynomial::HeegnerNumber;
use crate::primality::{jacobi_symbol, miller_rabin};

pub const DEFAULT_MIN_BITS: u64 = 200;
pub const DEFAULT_MAX_ATTEMPTS: u64 = 10_000;
pub const DEFAULT_MR_ROUNDS: u32 = 40;
pub const DEFAULT_EXPONENT: u32 = 65_537;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeygenConfig {
    pub h: HeegnerNumber,
    pub min_bits: u64,
    /// Inclusive bounds for `Z`.
    pub z_range: (BigUint, BigUint),
    /// Inclusive bounds for `k`.
    pub k_range: (BigUint, BigUint),
    pub max_attempts: u64,
    pub mr_rounds: u32,
    pub rng_seed: Option<u64>,
}

impl Default for KeygenConfig {
    fn default() -> Self {
        let lo = BigUint::from(10u32).pow(80);
        let hi = BigUint::from(10u32).pow(85);
        KeygenConfig {
            h: HeegnerNumber::default(),
            min_bits: DEFAULT_MIN_BITS,
            z_range: (lo.clone(), hi.clone()),
            k_range: (lo, hi),
            max_attempts: DEFAULT_MAX_ATTEMPTS,
            mr_rounds: DEFAULT_MR_ROUNDS,
            rng_seed: None,
        }
    }
}

impl KeygenConfig {
    /// Small ranges `[10⁸, 10⁹]` with a 100-bit floor, for tests and demos.
    pub fn desk_scale() -> Self {
        let r = (BigUint::from(100_000_000u32), BigUint::from(1_000_000_000u32));
        KeygenConfig { min_bits: 100, z_range: r.clone(), k_range: r, ..Self::default() }
    }

    /// One Miller-Rabin round instead of the hardened default, for reproduction runs.
    pub fn single_round(mut self) -> Self {
        self.mr_rounds = 1;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.h.is_constructible() {
            return Err(Error::NonIntegralConstant(format!(
                "H = {} has H ≢ 3 (mod 4), so (bk² + H)/4 is never an integer",
                self.h
            )));
        }
        for (name, (lo, hi)) in [("Z", &self.z_range), ("k", &self.k_range)] {
            if lo.is_zero() || lo >= hi {
                return Err(Error::InvalidConfig(format!(
                    "{name} range [{lo}, {hi}] must satisfy 1 ≤ low < high"
                )));
            }
        }
        if self.min_bits < 8 {
            return Err(Error::InvalidConfig(format!("min_bits = {} is below 8", self.min_bits)));
        }
        if self.max_attempts == 0 || self.mr_rounds == 0 {
            return Err(Error::InvalidConfig("max_attempts and mr_rounds must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuredPrime {
    #[serde(rename = "Z", with = "crate::decimal::uint")]
    pub z: BigUint,
    #[serde(with = "crate::decimal::uint")]
    pub k: BigUint,
    #[serde(with = "crate::decimal::uint")]
    pub bk: BigUint,
    #[serde(with = "crate::decimal::uint")]
    pub p: BigUint,
}

impl StructuredPrime {
    /// `f(0)` for the given pair, without any primality check.
    pub fn from_pair(z: BigUint, k: BigUint, h: HeegnerNumber) -> Result<Self> {
        let zk = &z * &k;
        if zk.is_zero() {
            return Err(Error::InvalidConfig("Z·k must be positive".into()));
        }
        let bk = zk * 2u32 - 1u32;
        let num = &bk * &bk + h.value();
        if (&num % 4u32) != BigUint::zero() {
            return Err(Error::NonIntegralConstant(format!("bk² + H is not divisible by 4 for H = {h}")));
        }
        let p = num / 4u32;
        Ok(StructuredPrime { z, k, bk, p })
    }

    pub fn zk(&self) -> BigUint {
        &self.z * &self.k
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuredKeyPair {
    pub h: HeegnerNumber,
    pub sp1: StructuredPrime,
    pub sp2: StructuredPrime,
    pub n: BigUint,
}

impl StructuredKeyPair {
    pub fn new(h: HeegnerNumber, sp1: StructuredPrime, sp2: StructuredPrime) -> Result<Self> {
        if sp1.p == sp2.p {
            return Err(Error::InvariantViolation("p1 and p2 must differ".into()));
        }
        let n = &sp1.p * &sp2.p;
        Ok(StructuredKeyPair { h, sp1, sp2, n })
    }

    pub fn public_key(&self) -> PublicKey {
        PublicKey { h: self.h, n: self.n.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicKey {
    #[serde(rename = "H")]
    pub h: HeegnerNumber,
    #[serde(rename = "N", with = "crate::decimal::uint")]
    pub n: BigUint,
}

fn uniform<R: Rng + ?Sized>(rng: &mut R, lo: &BigUint, hi: &BigUint) -> BigUint {
    rng.gen_biguint_range(lo, &(hi + 1u32))
}

/// Checks every acceptance condition except the sampling itself.
fn accept<R: Rng + ?Sized>(sp: &StructuredPrime, config: &KeygenConfig, rng: &mut R) -> bool {
    if sp.p.bits() < config.min_bits {
        return false;
    }
    // Only H = 7 yields even values; the Jacobi symbol needs an odd modulus.
    let minus_h = -BigInt::from(config.h.value());
    match jacobi_symbol(&minus_h, &sp.p) {
        Ok(1) => {}
        _ => return false,
    }
    !miller_rabin(&sp.p, config.mr_rounds, rng).is_composite()
}

/// Samples `(Z, k)` through `sample` until `f(0)` passes the bit-length,
/// Jacobi and Miller-Rabin checks. `sample(rng, lo, hi)` must return a value
/// in the inclusive range; injecting it lets tests force repeats.
pub fn generate_structured_prime_with<R, S>(
    config: &KeygenConfig,
    rng: &mut R,
    sample: &mut S,
) -> Result<StructuredPrime>
where
    R: Rng + ?Sized,
    S: FnMut(&mut R, &BigUint, &BigUint) -> BigUint,
{
    config.validate()?;
    for _ in 0..config.max_attempts {
        let z = sample(rng, &config.z_range.0, &config.z_range.1);
        let k = sample(rng, &config.k_range.0, &config.k_range.1);
        if z == k {
            continue;
        }
        let sp = StructuredPrime::from_pair(z, k, config.h)?;
        if accept(&sp, config, rng) {
            return Ok(sp);
        }
    }
    Err(Error::ExhaustedAttempts(config.max_attempts))
}

pub fn generate_structured_prime<R: Rng + ?Sized>(config: &KeygenConfig, rng: &mut R) -> Result<StructuredPrime> {
    generate_structured_prime_with(config, rng, &mut |r: &mut R, lo, hi| uniform(r, lo, hi))
}

/// Two structured primes; only the second is regenerated while they coincide.
pub fn generate_keypair_with<R, S>(config: &KeygenConfig, rng: &mut R, sample: &mut S) -> Result<StructuredKeyPair>
where
    R: Rng + ?Sized,
    S: FnMut(&mut R, &BigUint, &BigUint) -> BigUint,
{
    let sp1 = generate_structured_prime_with(config, rng, sample)?;
    let mut sp2 = generate_structured_prime_with(config, rng, sample)?;
    while sp2.p == sp1.p {
        sp2 = generate_structured_prime_with(config, rng, sample)?;
    }
    StructuredKeyPair::new(config.h, sp1, sp2)
}

pub fn generate_keypair<R: Rng + ?Sized>(config: &KeygenConfig, rng: &mut R) -> Result<StructuredKeyPair> {
    generate_keypair_with(config, rng, &mut |r: &mut R, lo, hi| uniform(r, lo, hi))
}

pub fn integer_sqrt(n: &BigUint) -> BigUint {
    n.sqrt()
}

/// The product `Zk` behind a structured prime: `(√(4p − H) + 1)/2`.
pub fn recover_zk(p: &BigUint, h: HeegnerNumber) -> Result<BigUint> {
    let four_p = p * 4u32;
    let h_big = BigUint::from(h.value());
    if four_p < h_big {
        return Err(Error::NotStructured(format!("4p − H < 0 for p = {p}, H = {h}")));
    }
    let d = four_p - h_big;
    let s = integer_sqrt(&d);
    if &s * &s != d {
        return Err(Error::NotStructured(format!("4p − H is not a perfect square for p = {p}, H = {h}")));
    }
    if (&s % 2u32).is_zero() {
        return Err(Error::NotStructured(format!("√(4p − H) is even for p = {p}, H = {h}")));
    }
    Ok((s + 1u32) / 2u32)
}

/// Textbook RSA over the key pair's modulus. Returns `(ciphertext, recovered)`.
pub fn rsa_roundtrip(kp: &StructuredKeyPair, message: &BigUint, e: &BigUint) -> Result<(BigUint, BigUint)> {
    if message >= &kp.n {
        return Err(Error::Domain(format!("message must be below N ({} bits)", kp.n.bits())));
    }
    let phi = (&kp.sp1.p - 1u32) * (&kp.sp2.p - 1u32);
    let d = e
        .modinv(&phi)
        .ok_or_else(|| Error::ExponentNotCoprime(format!("gcd(e = {e}, φ(N)) ≠ 1")))?;
    let c = message.modpow(e, &kp.n);
    let m = c.modpow(&d, &kp.n);
    Ok((c, m))
}

/// A random prime of exactly `bits` bits, found by retrying odd candidates.
pub fn baseline_random_prime<R: Rng + ?Sized>(bits: u64, rng: &mut R) -> Result<BigUint> {
    if bits < 8 {
        return Err(Error::InvalidConfig(format!("bits = {bits} is below 8")));
    }
    let top = BigUint::one() << (bits - 1);
    loop {
        let candidate = rng.gen_biguint(bits) | &top | BigUint::one();
        if !miller_rabin(&candidate, DEFAULT_MR_ROUNDS, rng).is_composite() {
            return Ok(candidate);
        }
    }
}

/// Key file layout. Every integer is a decimal string; the public form
/// carries only `H` and `N`.
#[derive(Debug, Default, Serialize, Deserialize)]
struct KeyFile {
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    h: Option<i64>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    n: Option<String>,
    #[serde(rename = "Z1", default, skip_serializing_if = "Option::is_none")]
    z1: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k1: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p1: Option<String>,
    #[serde(rename = "Z2", default, skip_serializing_if = "Option::is_none")]
    z2: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k2: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p2: Option<String>,
}

pub fn serialize_keypair(kp: &StructuredKeyPair, include_secrets: bool) -> Result<Vec<u8>> {
    let mut file = KeyFile {
        h: Some(kp.h.value() as i64),
        n: Some(kp.n.to_string()),
        ..KeyFile::default()
    };
    if include_secrets {
        file.z1 = Some(kp.sp1.z.to_string());
        file.k1 = Some(kp.sp1.k.to_string());
        file.p1 = Some(kp.sp1.p.to_string());
        file.z2 = Some(kp.sp2.z.to_string());
        file.k2 = Some(kp.sp2.k.to_string());
        file.p2 = Some(kp.sp2.p.to_string());
    }
    let mut out = serde_json::to_vec_pretty(&file)?;
    out.push(b'\n');
    Ok(out)
}

fn field<'a>(v: &'a Option<String>, name: &'static str) -> Result<&'a str> {
    v.as_deref().ok_or(Error::MissingField(name))
}

fn decimal(s: &str, name: &str) -> Result<BigUint> {
    s.trim()
        .parse()
        .map_err(|e| Error::Parse(format!("field {name}: {s:?} is not a non-negative integer ({e})")))
}

fn parse_heegner(h: Option<i64>) -> Result<HeegnerNumber> {
    HeegnerNumber::new(h.ok_or(Error::MissingField("H"))?)
}

fn rebuild(z: &Option<String>, k: &Option<String>, p: &Option<String>, idx: u8, h: HeegnerNumber) -> Result<StructuredPrime> {
    let (zn, kn, pn) = match idx {
        1 => ("Z1", "k1", "p1"),
        _ => ("Z2", "k2", "p2"),
    };
    let z = decimal(field(z, zn)?, zn)?;
    let k = decimal(field(k, kn)?, kn)?;
    let p = decimal(field(p, pn)?, pn)?;
    let sp = StructuredPrime::from_pair(z, k, h)?;
    if sp.p != p {
        return Err(Error::InvariantViolation(format!("{pn} does not equal f(0) for ({zn}, {kn})")));
    }
    Ok(sp)
}

/// Loads a full key file; every secret field is required.
pub fn deserialize_keypair(bytes: &[u8]) -> Result<StructuredKeyPair> {
    let file: KeyFile = serde_json::from_slice(bytes)?;
    let h = parse_heegner(file.h)?;
    let n = decimal(field(&file.n, "N")?, "N")?;
    let sp1 = rebuild(&file.z1, &file.k1, &file.p1, 1, h)?;
    let sp2 = rebuild(&file.z2, &file.k2, &file.p2, 2, h)?;
    let kp = StructuredKeyPair::new(h, sp1, sp2)?;
    if kp.n != n {
        return Err(Error::InvariantViolation("N does not equal p1·p2".into()));
    }
    Ok(kp)
}

/// Loads only `{H, N}`; secret fields, if present, are ignored.
pub fn deserialize_public_key(bytes: &[u8]) -> Result<PublicKey> {
    let file: KeyFile = serde_json::from_slice(bytes)?;
    let h = parse_heegner(file.h)?;
    let n = decimal(field(&file.n, "N")?, "N")?;
    Ok(PublicKey { h, n })
}
