//! Exact arithmetic: big rationals, rational roots `r^(1/k)`, combinatorial
//! factors and decimal enclosures.
//!
//! Probabilities such as `q = 120^(-1/3)` are not rational, but every
//! quantity derived from them (expectations, required constants) is again a
//! rational root. Comparisons between rational roots are decided exactly by
//! raising both sides to a common integer power.

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Upper limit on exponents accepted from text (decimal exponents, root indices).
const MAX_TEXT_EXPONENT: u32 = 4096;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: impl Into<BigInt>) -> Rational {
    Rational::from_integer(v.into())
}

pub fn biguint_to_rational(v: &BigUint) -> Rational {
    Rational::from_integer(BigInt::from(v.clone()))
}

/// `(n)_k = n (n-1) ... (n-k+1)`; zero when `k > n`.
pub fn falling(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
    }
    acc
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn factorial(n: u64) -> BigUint {
    falling(n, n)
}

/// Natural log of a positive big integer, accurate to f64 precision even when
/// the value exceeds the f64 range.
pub fn ln_biguint(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (v >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn ln_rational(r: &Rational) -> f64 {
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    ln_biguint(num) - ln_biguint(den)
}

/// Rational bounds `lo < e < hi` from the truncated exponential series.
pub fn e_bounds() -> &'static (Rational, Rational) {
    static E: OnceLock<(Rational, Rational)> = OnceLock::new();
    E.get_or_init(|| {
        let mut lo = Rational::zero();
        let mut term = Rational::one();
        for k in 0..=30u32 {
            if k > 0 {
                term /= int(k);
            }
            lo += &term;
        }
        // tail sum_{k>30} 1/k! < 2/31!
        let tail = int(2) / biguint_to_rational(&factorial(31));
        let hi = &lo + tail;
        (lo, hi)
    })
}

/// Smallest nonnegative integer `t` with `t^2 >= x` (x >= 0).
pub fn ceil_sqrt(x: &Rational) -> BigUint {
    if !x.is_positive() {
        return BigUint::zero();
    }
    let fl = x.ceil().to_integer().magnitude().clone();
    let mut t = fl.sqrt();
    while biguint_to_rational(&(&t * &t)) < *x {
        t += 1u32;
    }
    while !t.is_zero() {
        let s = &t - 1u32;
        if biguint_to_rational(&(&s * &s)) >= *x {
            t = s;
        } else {
            break;
        }
    }
    t
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `a/b`, an integer, or a decimal (optionally with exponent `e±k`),
/// all exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = |m: &str| Error::invalid(format!("cannot parse rational {s:?}: {m}"));
    if s.is_empty() {
        return Err(bad("empty"));
    }
    if let Some((a, b)) = s.split_once('/') {
        let num: BigInt = parse_integer(a.trim()).ok_or_else(|| bad("bad numerator"))?;
        let den: BigInt = parse_integer(b.trim()).ok_or_else(|| bad("bad denominator"))?;
        if den.is_zero() {
            return Err(bad("zero denominator"));
        }
        return Ok(Rational::new(num, den));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..].parse().map_err(|_| bad("bad exponent"))?;
            if e.unsigned_abs() > MAX_TEXT_EXPONENT as u64 {
                return Err(bad("exponent too large"));
            }
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (negative, body) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad("no digits"));
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad("unexpected character"));
    }
    if frac_part.len() > MAX_TEXT_EXPONENT as usize {
        return Err(bad("too many digits"));
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(digits.parse::<BigInt>().map_err(|_| bad("digits"))?);
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    if scale >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if negative { -value } else { value })
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Parses a probability-like value: a rational (see [`parse_rational`]) or a
/// root token `root:B:k` meaning `B^(-1/k)`.
pub fn parse_value(text: &str) -> Result<RationalRoot> {
    let s = text.trim();
    if let Some(rest) = s.strip_prefix("root:") {
        let (base, exp) = rest
            .rsplit_once(':')
            .ok_or_else(|| Error::invalid(format!("root token {s:?} must be root:B:k")))?;
        let base = parse_rational(base)?;
        let exp: u32 = exp
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("bad root exponent in {s:?}")))?;
        if exp == 0 || exp > MAX_TEXT_EXPONENT {
            return Err(Error::invalid(format!("root exponent out of range in {s:?}")));
        }
        if !base.is_positive() {
            return Err(Error::invalid(format!("root base must be positive in {s:?}")));
        }
        return Ok(RationalRoot::new(base.recip(), exp));
    }
    let r = parse_rational(s)?;
    if r.is_negative() {
        return Err(Error::invalid(format!("negative value {s:?}")));
    }
    Ok(RationalRoot::from_rational(r))
}

/// A nonnegative real of the form `radicand^(1/index)` with rational radicand.
///
/// Always stored with the smallest possible index, so structural equality is
/// numeric equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalRoot {
    radicand: Rational,
    index: u32,
}

impl RationalRoot {
    pub fn new(radicand: Rational, index: u32) -> Self {
        assert!(index >= 1, "root index must be positive");
        assert!(!radicand.is_negative(), "radicand must be nonnegative");
        let mut r = RationalRoot { radicand, index };
        r.normalize();
        r
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::new(r, 1)
    }

    pub fn from_integer(v: impl Into<BigInt>) -> Self {
        Self::from_rational(int(v))
    }

    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn radicand(&self) -> &Rational {
        &self.radicand
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn is_zero(&self) -> bool {
        self.radicand.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        (self.index == 1).then_some(&self.radicand)
    }

    fn normalize(&mut self) {
        if self.radicand.is_zero() || self.radicand.is_one() {
            self.index = 1;
            return;
        }
        let mut p = 2u32;
        while p <= self.index {
            if self.index % p == 0 {
                match exact_root(&self.radicand, p) {
                    Some(r) => {
                        self.radicand = r;
                        self.index /= p;
                        continue;
                    }
                    None => p += 1,
                }
            } else {
                p += 1;
            }
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        Self::new(num_traits::pow(self.radicand.clone(), e as usize), self.index)
    }

    /// `self^(1/k)`.
    pub fn root(&self, k: u32) -> Self {
        Self::new(self.radicand.clone(), self.index * k)
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Self::new(self.radicand.recip(), self.index)
    }

    pub fn mul(&self, other: &RationalRoot) -> Self {
        let l = self.index.lcm(&other.index);
        let a = num_traits::pow(self.radicand.clone(), (l / self.index) as usize);
        let b = num_traits::pow(other.radicand.clone(), (l / other.index) as usize);
        Self::new(a * b, l)
    }

    pub fn mul_rational(&self, r: &Rational) -> Self {
        self.mul(&Self::from_rational(r.clone()))
    }

    pub fn div(&self, other: &RationalRoot) -> Self {
        self.mul(&other.recip())
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        (ln_rational(&self.radicand) / self.index as f64).exp()
    }

    /// Natural log; `-inf` for zero.
    pub fn ln(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        ln_rational(&self.radicand) / self.index as f64
    }

    /// `floor(self * 10^digits)` and whether that floor is exact.
    fn scaled_floor(&self, digits: u32) -> (BigUint, bool) {
        let k = self.index;
        let scale = num_traits::pow(BigUint::from(10u32), (digits * k) as usize);
        let num = self.radicand.numer().magnitude() * &scale;
        let den = self.radicand.denom().magnitude();
        let (q, rem) = num.div_rem(den);
        let root = q.nth_root(k);
        let exact = rem.is_zero() && num_traits::pow(root.clone(), k as usize) == q;
        (root, exact)
    }

    /// Decimal interval `[lo, hi]` of width `10^-digits` containing the value
    /// (degenerate when the value is exactly representable).
    pub fn enclosure(&self, digits: u32) -> Enclosure {
        let (floor, exact) = self.scaled_floor(digits);
        let hi = if exact { floor.clone() } else { &floor + 1u32 };
        Enclosure {
            lo: format_scaled(&floor, digits),
            hi: format_scaled(&hi, digits),
            exact,
        }
    }

    /// Rational lower/upper bounds with denominator `10^digits`.
    pub fn rational_bounds(&self, digits: u32) -> (Rational, Rational) {
        let (floor, exact) = self.scaled_floor(digits);
        let den = BigInt::from(num_traits::pow(BigUint::from(10u32), digits as usize));
        let lo = Rational::new(BigInt::from(floor.clone()), den.clone());
        let hi = if exact {
            lo.clone()
        } else {
            Rational::new(BigInt::from(floor + 1u32), den)
        };
        (lo, hi)
    }

    /// The `{base, exp}` pair with value `base^(-1/exp)`.
    pub fn reciprocal_pair(&self) -> Option<(Rational, u32)> {
        (!self.is_zero()).then(|| (self.radicand.recip(), self.index))
    }

    pub fn to_json(&self) -> serde_json::Value {
        match (self.as_rational(), self.reciprocal_pair()) {
            (Some(r), _) => serde_json::Value::String(format_rational(r)),
            (None, Some((base, exp))) => serde_json::json!({
                "base": format_rational(&base),
                "exp": exp,
            }),
            (None, None) => unreachable!("zero is rational"),
        }
    }
}

impl Ord for RationalRoot {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.index == other.index {
            return self.radicand.cmp(&other.radicand);
        }
        let l = self.index.lcm(&other.index);
        let a = num_traits::pow(self.radicand.clone(), (l / self.index) as usize);
        let b = num_traits::pow(other.radicand.clone(), (l / other.index) as usize);
        a.cmp(&b)
    }
}

impl PartialOrd for RationalRoot {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RationalRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.index == 1 {
            write!(f, "{}", format_rational(&self.radicand))
        } else {
            write!(f, "({})^(1/{})", format_rational(&self.radicand), self.index)
        }
    }
}

impl fmt::Debug for RationalRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for RationalRoot {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// Exact `r^(1/k)` when it is rational.
fn exact_root(r: &Rational, k: u32) -> Option<Rational> {
    let n = r.numer().magnitude().nth_root(k);
    let d = r.denom().magnitude().nth_root(k);
    let ok = num_traits::pow(n.clone(), k as usize) == *r.numer().magnitude()
        && num_traits::pow(d.clone(), k as usize) == *r.denom().magnitude();
    ok.then(|| {
        Rational::new(
            BigInt::from_biguint(if r.is_negative() { Sign::Minus } else { Sign::Plus }, n),
            BigInt::from(d),
        )
    })
}

fn format_scaled(v: &BigUint, digits: u32) -> String {
    let s = v.to_string();
    if digits == 0 {
        return s;
    }
    let d = digits as usize;
    let padded = if s.len() <= d {
        format!("{}{}", "0".repeat(d + 1 - s.len()), s)
    } else {
        s
    };
    let (a, b) = padded.split_at(padded.len() - d);
    format!("{a}.{b}")
}

/// Decimal interval around an exact real.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Enclosure {
    pub lo: String,
    pub hi: String,
    pub exact: bool,
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exact {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

/// Outcome of an exact comparison that may depend on an irrational constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The bound's hypothesis does not hold for these inputs.
    NotApplicable,
    /// The enclosure was too coarse to decide.
    Inconclusive,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_failure(self) -> bool {
        matches!(self, Verdict::Fail)
    }
}

/// Checks `(a)_b > (a/e)^b` exactly using rational bounds on `e`.
pub fn falling_factorial_bound_check(a: u64, b: u64) -> Result<Verdict> {
    if a == 0 || b == 0 || b > a {
        return Err(Error::invalid("need positive a >= b"));
    }
    let (e_lo, e_hi) = e_bounds();
    let lhs = biguint_to_rational(&falling(a, b));
    let a_pow = num_traits::pow(int(a), b as usize);
    // (a/e)^b < (a/e_lo)^b
    if lhs.clone() * num_traits::pow(e_lo.clone(), b as usize) > a_pow {
        return Ok(Verdict::Pass);
    }
    if lhs * num_traits::pow(e_hi.clone(), b as usize) <= a_pow {
        return Ok(Verdict::Fail);
    }
    Ok(Verdict::Inconclusive)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn falling_and_binomial() {
        assert_eq!(falling(5, 3), BigUint::from(60u32));
        assert_eq!(falling(3, 4), BigUint::zero());
        assert_eq!(falling(7, 0), BigUint::one());
        assert_eq!(binomial(10, 3), BigUint::from(120u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("1/4").unwrap(), rational(1, 4));
        assert_eq!(parse_rational("0.25").unwrap(), rational(1, 4));
        assert_eq!(parse_rational("1e-3").unwrap(), rational(1, 1000));
        assert_eq!(parse_rational("-2.5").unwrap(), rational(-5, 2));
        assert_eq!(parse_rational(".5").unwrap(), rational(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1e99999").is_err());
        let q = parse_value("root:120:3").unwrap();
        assert_eq!(q, RationalRoot::new(rational(1, 120), 3));
        assert!(parse_value("root:0:3").is_err());
        assert!(parse_value("-1").is_err());
    }

    #[test]
    fn normalization_reduces_perfect_powers() {
        let x = RationalRoot::new(rational(8, 27), 3);
        assert_eq!(x.as_rational(), Some(&rational(2, 3)));
        let y = RationalRoot::new(rational(1, 1), 9);
        assert_eq!(y, RationalRoot::one());
        let z = RationalRoot::new(int(16), 8);
        assert_eq!(z, RationalRoot::new(int(2), 2));
    }

    #[test]
    fn compare_roots_without_extraction() {
        // 120^(-1/3) vs 360^(-1/2)
        let a = RationalRoot::new(rational(1, 120), 3);
        let b = RationalRoot::new(rational(1, 360), 2);
        assert!(a > b);
        assert!(a > RationalRoot::from_rational(rational(1, 5)));
        assert!(a < RationalRoot::from_rational(rational(1, 4)));
        assert_eq!(a.pow(3), RationalRoot::from_rational(rational(1, 120)));
    }

    #[test]
    fn enclosure_digits() {
        let q = RationalRoot::new(rational(1, 120), 3);
        let enc = q.enclosure(12);
        assert_eq!(enc.lo, "0.202740066519");
        assert!(!enc.exact);
        let half = RationalRoot::from_rational(rational(1, 2));
        let enc = half.enclosure(4);
        assert!(enc.exact);
        assert_eq!(enc.lo, "0.5000");
    }

    #[test]
    fn e_is_enclosed() {
        let (lo, hi) = e_bounds();
        assert!(lo < hi);
        assert!(lo.to_f64().unwrap() <= std::f64::consts::E);
        assert!(hi.to_f64().unwrap() >= std::f64::consts::E);
    }

    #[test]
    fn ceil_sqrt_cases() {
        assert_eq!(ceil_sqrt(&int(9)), BigUint::from(3u32));
        assert_eq!(ceil_sqrt(&int(10)), BigUint::from(4u32));
        assert_eq!(ceil_sqrt(&rational(1, 4)), BigUint::from(1u32));
        assert_eq!(ceil_sqrt(&int(0)), BigUint::zero());
    }

    #[test]
    fn falling_factorial_examples() {
        assert_eq!(falling_factorial_bound_check(5, 3).unwrap(), Verdict::Pass);
        assert_eq!(falling_factorial_bound_check(1, 1).unwrap(), Verdict::Pass);
        assert_eq!(falling_factorial_bound_check(10, 10).unwrap(), Verdict::Pass);
        assert!(falling_factorial_bound_check(2, 3).is_err());
    }
}
