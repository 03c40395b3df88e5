//! Integer Laurent polynomials, truncated power series, and the binomial and
//! growth-rate identities attached to the polynomial `h(t)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `C(n, k)` as a big integer; zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(k.min(n - k)))
}

const PASCAL_ROWS: usize = 128;

fn pascal() -> &'static [[u128; PASCAL_ROWS]] {
    static TABLE: std::sync::OnceLock<Vec<[u128; PASCAL_ROWS]>> = std::sync::OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![[0u128; PASCAL_ROWS]; PASCAL_ROWS];
        for n in 0..PASCAL_ROWS {
            t[n][0] = 1;
            for k in 1..=n {
                t[n][k] = t[n - 1][k - 1] + if k < n { t[n - 1][k] } else { 0 };
            }
        }
        t
    })
}

pub fn binomial_u64(n: i64, k: i64) -> u64 {
    if n < 0 || k < 0 || k > n {
        return 0;
    }
    if (n as usize) < PASCAL_ROWS {
        return u64::try_from(pascal()[n as usize][k as usize]).expect("binomial fits in u64");
    }
    binomial(n, k).to_u64().expect("binomial fits in u64")
}

pub fn catalan(n: u64) -> BigInt {
    binomial(2 * n as i64, n as i64) / BigInt::from(n + 1)
}

/// Finitely supported integer coefficients indexed by integer exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntLaurentPoly {
    coeffs: BTreeMap<i64, BigInt>,
}

impl IntLaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, BigInt::one())
    }

    pub fn monomial(exp: i64, c: BigInt) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, c);
        p
    }

    /// Coefficients of `t^start, t^{start+1}, ...`.
    pub fn from_coeffs<I, C>(start: i64, coeffs: I) -> Self
    where
        I: IntoIterator<Item = C>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (i, c) in coeffs.into_iter().enumerate() {
            p.add_term(start + i as i64, c.into());
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(exp).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Dense coefficient list from `t^from` to `t^to` inclusive.
    pub fn coeff_range(&self, from: i64, to: i64) -> Vec<BigInt> {
        (from..=to).map(|e| self.coeff(e)).collect()
    }

    /// Dense coefficient list from the lowest to the highest exponent.
    pub fn dense(&self) -> Vec<BigInt> {
        match (self.min_exp(), self.max_exp()) {
            (Some(a), Some(b)) => self.coeff_range(a, b),
            _ => Vec::new(),
        }
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    /// `p(1/t)`.
    pub fn reverse(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(e, c)| (-e, c.clone())).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.coeffs {
            for (b, y) in &other.coeffs {
                out.add_term(a + b, x * y);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// `{"exp": "coeff"}` map.
    pub fn to_json_map(&self) -> BTreeMap<String, String> {
        self.coeffs.iter().map(|(e, c)| (e.to_string(), c.to_string())).collect()
    }

    pub fn from_json_map(m: &BTreeMap<String, String>) -> Result<Self> {
        let mut p = Self::zero();
        for (e, c) in m {
            let e: i64 = e.parse().map_err(|_| Error::Parse(format!("bad exponent {e:?}")))?;
            let c: BigInt = c.parse().map_err(|_| Error::Parse(format!("bad coefficient {c:?}")))?;
            p.add_term(e, c);
        }
        Ok(p)
    }
}

impl Serialize for IntLaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_map().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntLaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = BTreeMap::<String, String>::deserialize(d)?;
        Self::from_json_map(&m).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for IntLaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.coeffs.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let unit = a.is_one();
            match *e {
                0 => write!(f, "{a}")?,
                1 if unit => write!(f, "t")?,
                1 => write!(f, "{a}t")?,
                _ if unit => write!(f, "t^{e}")?,
                _ => write!(f, "{a}t^{e}")?,
            }
        }
        Ok(())
    }
}

/// Power series coefficients in degrees `0..=N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    pub coeffs: Vec<BigInt>,
}

impl Serialize for TruncatedSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruncatedSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        let coeffs = v
            .iter()
            .map(|c| c.parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        if coeffs.is_empty() {
            return Err(serde::de::Error::custom("empty series"));
        }
        Ok(Self { coeffs })
    }
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series has at least one coefficient");
        Self { coeffs }
    }

    pub fn from_u64s(v: &[u64]) -> Self {
        Self::new(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn to_u64s(&self) -> Option<Vec<u64>> {
        self.coeffs.iter().map(|c| c.to_u64()).collect()
    }

    /// Product with `(1 - t^2)^c`, truncated at the same degree.
    pub fn times_one_minus_t2_pow(&self, c: usize) -> Vec<BigInt> {
        let mut v = self.coeffs.clone();
        for _ in 0..c {
            for i in (2..v.len()).rev() {
                let x = v[i - 2].clone();
                v[i] -= x;
            }
        }
        v
    }
}

/// `h(t) = sum_{i=0}^{n} [C(2n,i) - C(2n,i-2)] t^i`.
pub fn h_poly(n: u64) -> IntLaurentPoly {
    let n = n as i64;
    IntLaurentPoly::from_coeffs(0, (0..=n).map(|i| binomial(2 * n, i) - binomial(2 * n, i - 2)))
}

/// Checks `2 h(1) = C(2n+2, n+1) = (n+2) Catalan(n+1)`.
pub fn central_binomial_identity(n: u64) -> bool {
    let c = binomial(2 * n as i64 + 2, n as i64 + 1);
    BigInt::from(2) * h_poly(n).eval_at_one() == c && c == BigInt::from(n + 2) * catalan(n + 1)
}

/// Coefficients of `numerator / (1 - t^2)^c` through degree `n`.
pub fn expand_rational(numerator: &IntLaurentPoly, c: usize, n: usize) -> Result<TruncatedSeries> {
    if numerator.min_exp().is_some_and(|e| e < 0) {
        return Err(Error::Precondition("numerator has negative exponents; shift it first".into()));
    }
    let mut v = numerator.coeff_range(0, n as i64);
    for _ in 0..c {
        // divide by (1 - t^2): running sums of stride two
        for i in 2..v.len() {
            let x = v[i - 2].clone();
            v[i] += x;
        }
    }
    Ok(TruncatedSeries::new(v))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recovered {
    Numerator(IntLaurentPoly),
    /// The tail did not vanish: wrong `c` or too short a truncation.
    Unstable,
}

/// Multiplies by `(1 - t^2)^c` and accepts the result as a numerator when the
/// coefficients in degrees `(degree_bound, N - 2]` vanish.
pub fn recover_numerator(series: &TruncatedSeries, c: usize, degree_bound: usize) -> Result<Recovered> {
    let n = series.truncation();
    if n < degree_bound + 4 {
        return Err(Error::Precondition(format!(
            "truncation {n} too short for degree bound {degree_bound}; need at least {}",
            degree_bound + 4
        )));
    }
    let v = series.times_one_minus_t2_pow(c);
    if v[degree_bound + 1..=n - 2].iter().any(|x| !x.is_zero()) {
        return Ok(Recovered::Unstable);
    }
    Ok(Recovered::Numerator(IntLaurentPoly::from_coeffs(0, v.into_iter().take(degree_bound + 1))))
}

/// `p(1) / 2`.
pub fn betti_degree(numerator: &IntLaurentPoly) -> Result<BigRational> {
    let v = numerator.eval_at_one();
    if v.is_zero() {
        return Err(Error::ZeroAtOne);
    }
    Ok(BigRational::new(v, BigInt::from(2)))
}

/// Upper bound for pi, used to certify the Stirling-form inequality.
const PI_UPPER: (u64, u64) = (314_159_265_358_979_324, 100_000_000_000_000_000);
const PI_LOWER: (u64, u64) = (314_159_265_358_979_323, 100_000_000_000_000_000);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certified {
    Holds,
    Fails,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub n_max: u64,
    /// `C(2n+2,n+1) < 2^{2n} * 4 / sqrt(pi (n+1))` for `n = 0..=n_max`.
    pub stirling: Vec<Certified>,
    /// `n` in `0..=n_max` where `C(2n+2,n+1) < 2^{2n}` fails.
    pub central_failures: Vec<u64>,
    /// Argmin over `1 <= n <= n_max` of `C(2n+2,n+1)^{1/2n}`.
    pub min_root_n: u64,
    /// Rational enclosure of the minimum, as decimal strings.
    pub min_root_lower: String,
    pub min_root_upper: String,
    /// `min root < 1.9605`, by exact integer powers.
    pub min_root_below_bound: bool,
}

impl GrowthReport {
    pub fn stirling_all_hold(&self) -> bool {
        self.stirling.iter().all(|c| *c == Certified::Holds)
    }

    /// Fails exactly for `n <= 3`.
    pub fn central_pattern_ok(&self) -> bool {
        self.central_failures == [0, 1, 2, 3]
    }

    pub fn all_ok(&self) -> bool {
        self.stirling_all_hold() && self.central_pattern_ok() && self.min_root_below_bound
    }
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

fn stirling(n: u64) -> Certified {
    // C^2 * pi * (n+1) < 16 * 2^{4n}
    let c = binomial(2 * n as i64 + 2, n as i64 + 1);
    let lhs = |pi: (u64, u64)| &c * &c * BigInt::from(pi.0) * BigInt::from(n + 1);
    let rhs = |pi: (u64, u64)| BigInt::from(16) * pow2(4 * n) * BigInt::from(pi.1);
    if lhs(PI_UPPER) < rhs(PI_UPPER) {
        Certified::Holds
    } else if lhs(PI_LOWER) >= rhs(PI_LOWER) {
        Certified::Fails
    } else {
        Certified::Undecided
    }
}

/// `a^{1/2n} < b^{1/2m}` exactly.
fn root_less(a: &BigInt, n: u64, b: &BigInt, m: u64) -> bool {
    num_traits::pow(a.clone(), 2 * m as usize) < num_traits::pow(b.clone(), 2 * n as usize)
}

fn decimal(x: &BigRational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let v = (x * BigRational::from_integer(scale.clone())).floor().to_integer();
    let (q, r) = (&v / &scale, &v % &scale);
    format!("{q}.{:0>width$}", r.to_string(), width = digits)
}

pub fn growth_checks(n_max: u64) -> Result<GrowthReport> {
    if n_max < 5 {
        return Err(Error::Precondition(format!("n_max must be at least 5, got {n_max}")));
    }
    let stirling = (0..=n_max).map(stirling).collect();
    let central_failures = (0..=n_max)
        .filter(|&n| binomial(2 * n as i64 + 2, n as i64 + 1) >= pow2(2 * n))
        .collect();

    let cb = |n: u64| binomial(2 * n as i64 + 2, n as i64 + 1);
    let mut best = 1u64;
    let mut best_c = cb(1);
    for n in 2..=n_max {
        let c = cb(n);
        if root_less(&c, n, &best_c, best) {
            best = n;
            best_c = c;
        }
    }
    let two_n = 2 * best as usize;
    let bound_ok = &best_c * num_traits::pow(BigInt::from(10_000), two_n)
        < num_traits::pow(BigInt::from(19_605), two_n);

    // bisect x^{2n} = C on [1, 2]
    let mut lo = BigRational::one();
    let mut hi = BigRational::from_integer(BigInt::from(2));
    let target = BigRational::from_integer(best_c);
    let eps = BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), 12));
    while &hi - &lo > eps {
        let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
        if num_traits::pow(mid.clone(), two_n) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(GrowthReport {
        n_max,
        stirling,
        central_failures,
        min_root_n: best,
        min_root_lower: decimal(&lo, 10),
        min_root_upper: decimal(&(hi + BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), 10))), 10),
        min_root_below_bound: bound_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn h_poly_small_cases() {
        assert_eq!(h_poly(1).dense(), ints(&[1, 2]));
        assert_eq!(h_poly(4).dense(), ints(&[1, 8, 27, 48, 42]));
        assert_eq!(h_poly(4).eval_at_one(), BigInt::from(126));
        assert_eq!(h_poly(0).dense(), ints(&[1]));
    }

    #[test]
    fn central_binomials() {
        assert!(central_binomial_identity(0));
        assert!(central_binomial_identity(4));
        assert!(central_binomial_identity(20));
        assert_eq!(catalan(5), BigInt::from(42));
    }

    #[test]
    fn expand_simple() {
        let one = IntLaurentPoly::one();
        assert_eq!(expand_rational(&one, 1, 5).unwrap().coeffs, ints(&[1, 0, 1, 0, 1, 0]));
        let p = IntLaurentPoly::from_coeffs(0, [1, 1]);
        assert_eq!(expand_rational(&p, 1, 4).unwrap().coeffs, ints(&[1, 1, 1, 1, 1]));
        assert!(expand_rational(&one.shift(-1), 1, 4).is_err());
    }

    #[test]
    fn recover_simple() {
        let s = TruncatedSeries::from_u64s(&[1; 8]);
        assert_eq!(
            recover_numerator(&s, 1, 1).unwrap(),
            Recovered::Numerator(IntLaurentPoly::from_coeffs(0, [1, 1]))
        );
        assert_eq!(recover_numerator(&s, 0, 1).unwrap(), Recovered::Unstable);
        assert!(recover_numerator(&s, 1, 5).is_err());
    }

    #[test]
    fn betti_degrees() {
        let p = IntLaurentPoly::from_coeffs(0, [1, 1]);
        assert_eq!(betti_degree(&p).unwrap(), BigRational::one());
        assert_eq!(betti_degree(&IntLaurentPoly::monomial(0, 2.into())).unwrap(), BigRational::one());
        assert!(betti_degree(&IntLaurentPoly::from_coeffs(0, [1, -1])).is_err());
    }

    #[test]
    fn display_and_json() {
        let p = IntLaurentPoly::from_coeffs(-2, [1, 0, -8, 1]);
        assert_eq!(p.to_string(), "t^-2 - 8 + t");
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<IntLaurentPoly>(&s).unwrap(), p);
    }

    #[test]
    fn growth_small_window() {
        let g = growth_checks(20).unwrap();
        assert!(g.all_ok());
        assert_eq!(g.min_root_n, 11);
        assert!(g.min_root_lower.starts_with("1.9604"));
        assert!(growth_checks(4).is_err());
    }
}
