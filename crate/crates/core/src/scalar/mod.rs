//! Exact arithmetic in the rational function field `Q(K)`.
//!
//! A [`ScalarQ`] is stored as a reduced fraction of integer polynomials. The
//! canonical form is unique, so structural equality is field equality.

mod poly;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use poly::IntPoly;

use crate::error::{Error, Result};

/// Element of `Q(K)` in canonical form: `gcd(num, den) = 1` in `Z[K]`, the
/// denominator has positive leading coefficient, and zero is `0/1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScalarQ {
    num: IntPoly,
    den: IntPoly,
}

impl ScalarQ {
    /// Reduces `num/den` to canonical form.
    pub fn normalize(num: IntPoly, den: IntPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize_unchecked(num, den))
    }

    fn normalize_unchecked(num: IntPoly, den: IntPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (mut num, mut den) = if den.is_constant() {
            let d = &den.coeffs()[0];
            let g = num.content().gcd(d);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_scalar_exact(&g), den.div_scalar_exact(&g))
            }
        } else {
            let g = num.gcd(&den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_exact(&g), den.div_exact(&g))
            }
        };
        if den.lc().is_some_and(|l| l.is_negative()) {
            num = num.neg();
            den = den.neg();
        }
        ScalarQ { num, den }
    }

    pub fn zero() -> Self {
        ScalarQ {
            num: IntPoly::zero(),
            den: IntPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The indeterminate `K`.
    pub fn k() -> Self {
        ScalarQ {
            num: IntPoly::var(),
            den: IntPoly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        ScalarQ {
            num: IntPoly::constant(n),
            den: IntPoly::one(),
        }
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        Self::from_rational(&BigRational::new(p.into(), q.into()))
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Self::normalize_unchecked(
            IntPoly::constant(r.numer().clone()),
            IntPoly::constant(r.denom().clone()),
        )
    }

    /// `a*K + b` with integer coefficients.
    pub fn linear(a: i64, b: i64) -> Self {
        ScalarQ {
            num: IntPoly::from_i64s(&[b, a]),
            den: IntPoly::one(),
        }
    }

    pub fn from_poly(p: IntPoly) -> Self {
        ScalarQ {
            num: p,
            den: IntPoly::one(),
        }
    }

    pub fn numerator(&self) -> &IntPoly {
        &self.num
    }

    pub fn denominator(&self) -> &IntPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_constant() && self.num == self.den
    }

    /// True when the value does not depend on `K`.
    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// True when the denominator is a nonzero constant.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// The value as a rational number if it is independent of `K`.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_constant()
            .then(|| BigRational::new(self.num.constant_term(), self.den.constant_term()))
    }

    /// The value as an integer if it is a `K`-independent integer.
    pub fn as_integer(&self) -> Option<i64> {
        let r = self.as_rational()?;
        if r.is_integer() {
            r.to_integer().to_i64()
        } else {
            None
        }
    }

    pub fn inv(&self) -> Result<Self> {
        Self::normalize(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Specialises `K` to `k0`. A vanishing denominator is reported with the
    /// offending linear factor and its multiplicity.
    pub fn eval_at(&self, k0: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(k0);
        if d.is_zero() {
            let mult = self.den.root_multiplicity(k0);
            return Err(Error::Pole {
                at: k0.clone(),
                factor: pole_factor(k0, mult),
            });
        }
        Ok(self.num.eval(k0) / d)
    }

    /// Exact numeric comparison; only defined for `K`-independent values.
    fn cmp_constant(&self, other: &Self) -> Option<Ordering> {
        Some(self.as_rational()?.cmp(&other.as_rational()?))
    }

    pub fn to_json(&self) -> ScalarJson {
        ScalarJson {
            num: self.num.coeffs().iter().map(|c| c.to_string()).collect(),
            den: self.den.coeffs().iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn from_json(j: &ScalarJson) -> Result<Self> {
        let parse = |v: &[String]| -> Result<IntPoly> {
            v.iter()
                .map(|s| {
                    s.parse::<BigInt>()
                        .map_err(|_| Error::Parse(format!("bad integer {s:?}")))
                })
                .collect::<Result<Vec<_>>>()
                .map(IntPoly::from_coeffs)
        };
        Self::normalize(parse(&j.num)?, parse(&j.den)?)
    }
}

fn pole_factor(k0: &BigRational, mult: usize) -> String {
    let base = if k0.is_zero() {
        "K".to_string()
    } else if k0.is_integer() {
        let v = k0.to_integer();
        if v.is_negative() {
            format!("(K + {})", -v)
        } else {
            format!("(K - {v})")
        }
    } else {
        format!("({}*K - {})", k0.denom(), k0.numer())
    };
    if mult > 1 {
        format!("{base}^{mult}")
    } else {
        base
    }
}

/// Wire form: ascending coefficient lists, integers as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarJson {
    pub num: Vec<String>,
    pub den: Vec<String>,
}

impl Default for ScalarQ {
    fn default() -> Self {
        Self::zero()
    }
}

// Constants compare numerically and sort before K-dependent values; the rest
// is a structural order so that maps keyed by ScalarQ stay deterministic.
impl Ord for ScalarQ {
    fn cmp(&self, other: &Self) -> Ordering {
        if let Some(o) = self.cmp_constant(other) {
            return o;
        }
        match (self.is_constant(), other.is_constant()) {
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => (self.den.coeffs(), self.num.coeffs())
                .cmp(&(other.den.coeffs(), other.num.coeffs())),
        }
    }
}

impl PartialOrd for ScalarQ {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a ScalarQ> for &'a ScalarQ {
    type Output = ScalarQ;

    fn add(self, rhs: &ScalarQ) -> ScalarQ {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            if self.den.is_one() {
                return ScalarQ {
                    num: self.num.add(&rhs.num),
                    den: IntPoly::one(),
                };
            }
            return ScalarQ::normalize_unchecked(self.num.add(&rhs.num), self.den.clone());
        }
        if self.den.is_constant() && rhs.den.is_constant() {
            let a = &self.den.coeffs()[0];
            let b = &rhs.den.coeffs()[0];
            let g = a.gcd(b);
            let (a1, b1) = (a / &g, b / &g);
            let num = self.num.scale(&b1).add(&rhs.num.scale(&a1));
            return ScalarQ::normalize_unchecked(num, IntPoly::constant(a1 * b));
        }
        let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
        ScalarQ::normalize_unchecked(num, self.den.mul(&rhs.den))
    }
}

impl<'a> Sub<&'a ScalarQ> for &'a ScalarQ {
    type Output = ScalarQ;

    fn sub(self, rhs: &ScalarQ) -> ScalarQ {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a ScalarQ> for &'a ScalarQ {
    type Output = ScalarQ;

    fn mul(self, rhs: &ScalarQ) -> ScalarQ {
        if self.is_zero() || rhs.is_zero() {
            return ScalarQ::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return ScalarQ {
                num: self.num.mul(&rhs.num),
                den: IntPoly::one(),
            };
        }
        ScalarQ::normalize_unchecked(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

impl<'a> Div<&'a ScalarQ> for &'a ScalarQ {
    type Output = ScalarQ;

    /// Panics on division by zero; use [`ScalarQ::checked_div`] otherwise.
    fn div(self, rhs: &ScalarQ) -> ScalarQ {
        self.checked_div(rhs).expect("division by zero in Q(K)")
    }
}

impl Neg for &ScalarQ {
    type Output = ScalarQ;

    fn neg(self) -> ScalarQ {
        ScalarQ {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<ScalarQ> for ScalarQ {
            type Output = ScalarQ;
            fn $m(self, rhs: ScalarQ) -> ScalarQ {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a ScalarQ> for ScalarQ {
            type Output = ScalarQ;
            fn $m(self, rhs: &'a ScalarQ) -> ScalarQ {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for ScalarQ {
    type Output = ScalarQ;

    fn neg(self) -> ScalarQ {
        -&self
    }
}

impl From<i64> for ScalarQ {
    fn from(n: i64) -> Self {
        ScalarQ::from_int(n)
    }
}

impl fmt::Display for ScalarQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &IntPoly| {
            let s = p.to_string();
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}

/// `C(n, k)` for arbitrary integer `n` (generalised binomial) and `k >= 0`;
/// zero when `k < 0`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    if n >= 0 && k > n {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64s(cs)
    }

    #[test]
    fn cancels_common_factor() {
        // (K^2 - K)/(K - 1) = K
        let s = ScalarQ::normalize(poly(&[0, -1, 1]), poly(&[-1, 1])).unwrap();
        assert_eq!(s, ScalarQ::k());
    }

    #[test]
    fn zero_numerator_is_canonical_zero() {
        let s = ScalarQ::normalize(IntPoly::zero(), poly(&[-1, 1])).unwrap();
        assert_eq!(s, ScalarQ::zero());
        assert_eq!(s.denominator(), &IntPoly::one());
    }

    #[test]
    fn zero_denominator_rejected() {
        let e = ScalarQ::normalize(poly(&[1]), IntPoly::zero()).unwrap_err();
        assert_eq!(e.to_string(), "division by zero polynomial");
    }

    #[test]
    fn product_of_two_prefactors() {
        // prod_{j=1}^{2} (j(K-1)+1)/(j(K-1)) = K(2K-1)/(2(K-1)^2)
        let mut acc = ScalarQ::one();
        for j in 1..=2 {
            let num = ScalarQ::linear(j, 1 - j);
            let den = ScalarQ::linear(j, -j);
            acc = acc * (num / den);
        }
        let expected = ScalarQ::normalize(poly(&[0, -1, 2]), poly(&[2, -4, 2])).unwrap();
        assert_eq!(acc, expected);
        assert_eq!(acc.numerator(), &poly(&[0, -1, 2]));
        assert_eq!(acc.denominator(), &poly(&[2, -4, 2]));
    }

    #[test]
    fn negative_leading_denominator_flipped() {
        let s = ScalarQ::normalize(poly(&[1]), poly(&[1, -1])).unwrap();
        assert_eq!(s.numerator(), &poly(&[-1]));
        assert_eq!(s.denominator(), &poly(&[-1, 1]));
    }

    #[test]
    fn eval_and_poles() {
        let s = ScalarQ::k() / ScalarQ::linear(1, -1);
        assert_eq!(
            s.eval_at(&BigRational::zero()).unwrap(),
            BigRational::zero()
        );
        let err = s.eval_at(&BigRational::one()).unwrap_err();
        match err {
            Error::Pole { factor, .. } => assert_eq!(factor, "(K - 1)"),
            e => panic!("unexpected {e}"),
        }
        let sq = ScalarQ::one() / ScalarQ::linear(1, -1).pow(2);
        let msg = sq.eval_at(&BigRational::one()).unwrap_err().to_string();
        assert!(msg.contains("(K - 1)^2"), "{msg}");
    }

    #[test]
    fn level_shift_at_critical_level() {
        // K(N-1)/N - 1 at N = 2, K = 0
        let n = 2;
        let l = ScalarQ::k() * ScalarQ::from_ratio(n - 1, n) - ScalarQ::one();
        assert_eq!(
            l.eval_at(&BigRational::zero()).unwrap(),
            BigRational::from_integer((-1).into())
        );
    }

    #[test]
    fn ordering_of_constants_is_numeric() {
        let mut v = vec![
            ScalarQ::from_ratio(1, 2),
            ScalarQ::from_int(-3),
            ScalarQ::k(),
            ScalarQ::one(),
        ];
        v.sort();
        assert_eq!(v[0], ScalarQ::from_int(-3));
        assert_eq!(v[1], ScalarQ::from_ratio(1, 2));
        assert_eq!(v[2], ScalarQ::one());
        assert_eq!(v[3], ScalarQ::k());
    }

    #[test]
    fn json_shape() {
        let s = ScalarQ::k() / ScalarQ::linear(2, -2);
        let j = serde_json::to_string(&s.to_json()).unwrap();
        assert_eq!(j, r#"{"num":["0","1"],"den":["-2","2"]}"#);
        assert_eq!(ScalarQ::from_json(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn generalised_binomial() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(-1, 3), BigInt::from(-1));
        assert_eq!(binomial(-2, 2), BigInt::from(3));
        assert_eq!(binomial(2, 3), BigInt::zero());
        assert_eq!(binomial(3, -1), BigInt::zero());
    }
}
