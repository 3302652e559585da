//! The quadratic family `f(n) = n² − A·n + B` with `A = 2Zk − 1` and
//! `B = (A² + H) / 4`, where `H` is a Heegner number.
//!
//! The discriminant is always `−H`, so every member is irreducible over the
//! rationals, strictly positive on the integers and symmetric about `n = A/2`.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The nine discriminants `d` for which `Q(√−d)` has class number one.
pub const HEEGNER_NUMBERS: [u32; 9] = [1, 2, 3, 7, 11, 19, 43, 67, 163];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "u32")]
pub struct HeegnerNumber(u32);

impl HeegnerNumber {
    pub const MAX: HeegnerNumber = HeegnerNumber(163);

    pub fn new(value: i64) -> Result<Self> {
        HEEGNER_NUMBERS
            .iter()
            .find(|&&h| i64::from(h) == value)
            .map(|&h| HeegnerNumber(h))
            .ok_or(Error::NotHeegner(value))
    }

    pub fn value(self) -> u32 {
        self.0
    }

    /// `(A² + H) / 4` is integral for odd `A` exactly when `H ≡ 3 (mod 4)`.
    pub fn is_constructible(self) -> bool {
        self.0 % 4 == 3
    }

    pub fn all() -> impl Iterator<Item = HeegnerNumber> {
        HEEGNER_NUMBERS.iter().map(|&h| HeegnerNumber(h))
    }

    pub fn constructible() -> impl Iterator<Item = HeegnerNumber> {
        Self::all().filter(|h| h.is_constructible())
    }
}

impl Default for HeegnerNumber {
    fn default() -> Self {
        HeegnerNumber::MAX
    }
}

impl TryFrom<i64> for HeegnerNumber {
    type Error = Error;
    fn try_from(value: i64) -> Result<Self> {
        HeegnerNumber::new(value)
    }
}

impl From<HeegnerNumber> for u32 {
    fn from(h: HeegnerNumber) -> u32 {
        h.0
    }
}

impl FromStr for HeegnerNumber {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let v: i64 = s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("{s:?} is not an integer")))?;
        HeegnerNumber::new(v)
    }
}

impl fmt::Display for HeegnerNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Family parameters `(Z, k, H)`. Only the product `Z·k` reaches the polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    #[serde(rename = "Z", with = "crate::decimal::uint")]
    pub z: BigUint,
    #[serde(with = "crate::decimal::uint")]
    pub k: BigUint,
    #[serde(rename = "H")]
    pub h: HeegnerNumber,
}

impl FamilyParams {
    pub fn new(z: impl Into<BigUint>, k: impl Into<BigUint>, h: HeegnerNumber) -> Self {
        FamilyParams { z: z.into(), k: k.into(), h }
    }

    pub fn zk(&self) -> BigUint {
        &self.z * &self.k
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPolynomial")]
pub struct QuadraticPolynomial {
    #[serde(rename = "A", with = "crate::decimal::int")]
    a: BigInt,
    #[serde(rename = "B", with = "crate::decimal::int")]
    b: BigInt,
    #[serde(rename = "H")]
    h: HeegnerNumber,
}

/// Unchecked wire form; deserialization rebuilds `B` from `A` and `H` and
/// rejects documents where they disagree.
#[derive(Deserialize)]
struct RawPolynomial {
    #[serde(rename = "A", with = "crate::decimal::int")]
    a: BigInt,
    #[serde(rename = "B", with = "crate::decimal::int")]
    b: BigInt,
    #[serde(rename = "H")]
    h: HeegnerNumber,
}

impl TryFrom<RawPolynomial> for QuadraticPolynomial {
    type Error = Error;

    fn try_from(raw: RawPolynomial) -> Result<Self> {
        let poly = QuadraticPolynomial::from_linear_coefficient(raw.a, raw.h)?;
        if poly.b != raw.b {
            return Err(Error::InvariantViolation(format!("B = {} does not equal (A² + H)/4 = {}", raw.b, poly.b)));
        }
        Ok(poly)
    }
}

impl QuadraticPolynomial {
    pub fn construct(params: &FamilyParams) -> Result<Self> {
        Self::from_zk(&params.zk(), params.h)
    }

    /// Builds the member with `A = 2·zk − 1`.
    pub fn from_zk(zk: &BigUint, h: HeegnerNumber) -> Result<Self> {
        let a = BigInt::from(zk.clone()) * 2 - 1;
        Self::from_linear_coefficient(a, h)
    }

    /// Builds `n² − A·n + (A² + H)/4` for an odd `A` of either sign.
    pub fn from_linear_coefficient(a: BigInt, h: HeegnerNumber) -> Result<Self> {
        if a.is_even() {
            return Err(Error::InvariantViolation(format!("A = {a} must be odd")));
        }
        let numerator = &a * &a + h.value();
        let (b, rem) = numerator.div_rem(&BigInt::from(4));
        if !rem.is_zero() {
            return Err(Error::NonIntegralConstant(format!(
                "(A² + H)/4 is not an integer for H = {h}; only H ≡ 3 (mod 4) gives an integral constant term"
            )));
        }
        Ok(QuadraticPolynomial { a, b, h })
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn h(&self) -> HeegnerNumber {
        self.h
    }

    /// `A² − 4B`, always `−H`.
    pub fn discriminant(&self) -> BigInt {
        &self.a * &self.a - &self.b * 4
    }

    pub fn evaluate(&self, n: &BigInt) -> BigInt {
        // Horner: (n − A)·n + B
        (n - &self.a) * n + &self.b
    }

    pub fn evaluate_i64(&self, n: i64) -> BigInt {
        self.evaluate(&BigInt::from(n))
    }

    /// Vertex abscissa `A/2`, kept exact.
    pub fn axis_of_symmetry(&self) -> BigRational {
        BigRational::new(self.a.clone(), BigInt::from(2))
    }

    /// The reflection `A − n`; `f(n) = f(A − n)`.
    pub fn mirror_index(&self, n: &BigInt) -> BigInt {
        &self.a - n
    }

    pub fn complex_roots(&self) -> ComplexRootPair {
        ComplexRootPair {
            real_part: self.axis_of_symmetry(),
            imag_magnitude_squared: self.h.value(),
        }
    }

    /// `(A, B)` as `i64` when both fit, for hot loops over small members.
    pub fn small_coefficients(&self) -> Option<(i64, i64)> {
        use num_traits::ToPrimitive;
        Some((self.a.to_i64()?, self.b.to_i64()?))
    }
}

impl fmt::Display for QuadraticPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.a.is_negative() { '+' } else { '-' };
        let mag = self.a.abs();
        if mag.is_one() {
            write!(f, "n^2 {sign} n + {}", self.b)
        } else {
            write!(f, "n^2 {sign} {mag}n + {}", self.b)
        }
    }
}

/// Roots `A/2 ± i·√H/2`, stored as an exact real part plus the radicand `H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexRootPair {
    pub real_part: BigRational,
    pub imag_magnitude_squared: u32,
}

impl ComplexRootPair {
    /// Square of the imaginary part, `H/4`.
    pub fn imag_part_squared(&self) -> BigRational {
        BigRational::new(BigInt::from(self.imag_magnitude_squared), BigInt::from(4))
    }

    pub fn imag_part_f64(&self) -> f64 {
        f64::from(self.imag_magnitude_squared).sqrt() / 2.0
    }

    /// Exact value of `f(r)` at `r = x + i·y` as `(real, imaginary / y)`.
    ///
    /// With `y² = H/4`: real part `x² − y² − A·x + B`, imaginary part `y·(2x − A)`.
    /// Both components are zero for a genuine root.
    pub fn substitution_residual(&self, poly: &QuadraticPolynomial) -> (BigRational, BigRational) {
        let x = &self.real_part;
        let a = BigRational::from_integer(poly.a().clone());
        let b = BigRational::from_integer(poly.b().clone());
        let real = x * x - self.imag_part_squared() - &a * x + b;
        let imag_coeff = x * BigRational::from_integer(BigInt::from(2)) - a;
        (real, imag_coeff)
    }
}

/// Euler-Rabinowitsch form `q·x² + (α−1)·q·x + ((α−1)²·q − Δ)/(4q)`.
pub fn euler_rabinowitsch(delta: &BigInt, q: &BigInt, alpha: &BigInt, x: &BigInt) -> Result<BigInt> {
    if !q.is_positive() {
        return Err(Error::Domain(format!("q must be a positive integer, got {q}")));
    }
    let am1 = alpha - 1;
    let numerator: BigInt = &am1 * &am1 * q - delta;
    let (constant, rem) = numerator.div_rem(&(q * 4));
    if !rem.is_zero() {
        return Err(Error::NonIntegralConstant(format!(
            "((α−1)²q − Δ)/(4q) is not an integer for Δ = {delta}, q = {q}, α = {alpha}"
        )));
    }
    Ok(q * x * x + &am1 * q * x + constant)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub params: FamilyParams,
    pub poly: QuadraticPolynomial,
}

/// Historical prime-rich quadratics recovered as family members.
pub fn famous_catalog() -> Vec<CatalogEntry> {
    let h = |v| HeegnerNumber::new(v).expect("catalog uses Heegner numbers");
    let entries = [
        ("Euler", 1u32, 0u32, 163),
        ("Legendre", 1, 0, 67),
        ("Ribenboim", 1, 40, 163),
    ];
    entries
        .into_iter()
        .map(|(name, z, k, hv)| {
            let params = FamilyParams::new(z, k, h(hv));
            let poly = QuadraticPolynomial::construct(&params).expect("catalog members are constructible");
            CatalogEntry { name, params, poly }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(v: i64) -> HeegnerNumber {
        HeegnerNumber::new(v).unwrap()
    }

    fn poly(z: u32, k: u32, hv: i64) -> QuadraticPolynomial {
        QuadraticPolynomial::construct(&FamilyParams::new(z, k, h(hv))).unwrap()
    }

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn heegner_membership() {
        assert!(HeegnerNumber::new(163).is_ok());
        assert_eq!(HeegnerNumber::new(5), Err(Error::NotHeegner(5)));
        let c: Vec<u32> = HeegnerNumber::constructible().map(u32::from).collect();
        assert_eq!(c, vec![3, 7, 11, 19, 43, 67, 163]);
    }

    #[test]
    fn construct_euler_and_ribenboim() {
        let e = poly(1, 0, 163);
        assert_eq!((e.a(), e.b()), (&int(-1), &int(41)));
        let r = poly(1, 40, 163);
        assert_eq!((r.a(), r.b()), (&int(79), &int(1601)));
    }

    #[test]
    fn construct_rejects_h_one_and_two() {
        for hv in [1, 2] {
            let err = QuadraticPolynomial::construct(&FamilyParams::new(1u32, 1u32, h(hv))).unwrap_err();
            match err {
                Error::NonIntegralConstant(msg) => assert!(msg.contains(&format!("H = {hv}"))),
                other => panic!("unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn evaluate_table_values() {
        let p = poly(2, 40, 163);
        assert_eq!(p.evaluate_i64(0), int(6361));
        assert_eq!(p.evaluate_i64(79), int(41));
        let c = poly(1, 10, 163);
        assert_eq!((c.a(), c.b()), (&int(19), &int(131)));
        assert_eq!(c.evaluate_i64(4), int(71));
    }

    #[test]
    fn axis_is_exact() {
        let half = |n: i64| BigRational::new(int(n), int(2));
        assert_eq!(poly(2, 40, 163).axis_of_symmetry(), half(159));
        assert_eq!(poly(1, 0, 163).axis_of_symmetry(), half(-1));
        let c = poly(1, 10, 163);
        assert_eq!(c.axis_of_symmetry(), half(19));
        assert_eq!(c.evaluate_i64(9), c.evaluate_i64(10));
    }

    #[test]
    fn mirror_examples() {
        let c = poly(1, 10, 163);
        assert_eq!(c.mirror_index(&int(4)), int(15));
        assert_eq!(c.evaluate_i64(15), int(71));
        let t2 = poly(2, 40, 163);
        assert_eq!(t2.mirror_index(&int(0)), int(159));
        assert_eq!(t2.evaluate_i64(159), int(6361));
        let r = poly(1, 40, 163);
        assert_eq!(r.mirror_index(&int(39)), int(40));
        assert_eq!(r.evaluate_i64(39), r.evaluate_i64(40));
    }

    #[test]
    fn complex_roots_of_z1_k1() {
        let p = poly(1, 1, 163);
        let roots = p.complex_roots();
        assert_eq!(roots.real_part, BigRational::new(int(1), int(2)));
        assert_eq!(roots.imag_magnitude_squared, 163);
        let (re, im) = roots.substitution_residual(&p);
        assert!(re.is_zero() && im.is_zero());

        let r = poly(1, 40, 163).complex_roots();
        assert_eq!(r.real_part, BigRational::new(int(79), int(2)));
    }

    #[test]
    fn euler_rabinowitsch_examples() {
        assert_eq!(euler_rabinowitsch(&int(-163), &int(1), &int(2), &int(0)).unwrap(), int(41));
        assert_eq!(euler_rabinowitsch(&int(-7), &int(1), &int(2), &int(0)).unwrap(), int(2));
        assert!(matches!(
            euler_rabinowitsch(&int(-1), &int(1), &int(2), &int(0)),
            Err(Error::NonIntegralConstant(_))
        ));
        assert!(euler_rabinowitsch(&int(-163), &int(0), &int(2), &int(0)).is_err());
    }

    #[test]
    fn catalog_literal_coefficients() {
        let cat = famous_catalog();
        let find = |name| cat.iter().find(|e| e.name == name).unwrap();
        let e = find("Euler");
        assert_eq!((e.poly.a(), e.poly.b()), (&int(-1), &int(41)));
        let l = find("Legendre");
        assert_eq!((l.poly.a(), l.poly.b()), (&int(-1), &int(17)));
        assert_eq!(l.poly.b() * 4 - l.poly.a() * l.poly.a(), int(67));
        let r = find("Ribenboim");
        assert_eq!((r.poly.a(), r.poly.b()), (&int(79), &int(1601)));
        assert_eq!(r.poly.b() * 4 - r.poly.a() * r.poly.a(), int(163));
    }

    #[test]
    fn display_forms() {
        assert_eq!(poly(1, 0, 163).to_string(), "n^2 + n + 41");
        assert_eq!(poly(1, 1, 163).to_string(), "n^2 - n + 41");
        assert_eq!(poly(2, 40, 163).to_string(), "n^2 - 159n + 6361");
    }

    #[test]
    fn json_uses_decimal_strings() {
        let p = poly(1, 40, 163);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"A":"79","B":"1601","H":163}"#);
        let back: QuadraticPolynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<HeegnerNumber>("5").is_err());
        assert!(serde_json::from_str::<QuadraticPolynomial>(r#"{"A":"79","B":"1602","H":163}"#).is_err());
        assert!(serde_json::from_str::<QuadraticPolynomial>(r#"{"A":"80","B":"1641","H":163}"#).is_err());
        assert!(serde_json::from_str::<QuadraticPolynomial>(r#"{"A":"79","B":"1601","H":1}"#).is_err());
    }
}
