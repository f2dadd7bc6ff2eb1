//! Dense univariate polynomials over the integers, ascending powers of `K`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Integer polynomial with no trailing zero coefficients. The zero polynomial
/// is the empty coefficient list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The indeterminate `K`.
    pub fn var() -> Self {
        Self::from_coeffs(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        Self::from_coeffs(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Constant term (zero for the zero polynomial).
    pub fn constant_term(&self) -> BigInt {
        self.coeffs.first().cloned().unwrap_or_default()
    }

    pub fn neg(&self) -> Self {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = long.coeffs.clone();
        for (o, s) in out.iter_mut().zip(&short.coeffs) {
            *o += s;
        }
        Self::from_coeffs(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if other.coeffs.len() == 1 {
            return self.scale(&other.coeffs[0]);
        }
        if self.coeffs.len() == 1 {
            return other.scale(&self.coeffs[0]);
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Divides every coefficient by `c`, which must divide all of them.
    pub fn div_scalar_exact(&self, c: &BigInt) -> Self {
        IntPoly {
            coeffs: self.coeffs.iter().map(|x| x / c).collect(),
        }
    }

    /// Non-negative gcd of the coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let c = self.content();
        let mut p = self.div_scalar_exact(&c);
        if p.lc().is_some_and(|l| l.is_negative()) {
            p = p.neg();
        }
        p
    }

    /// Pseudo-remainder of `self` by `d`: `lc(d)^(deg self - deg d + 1) * self mod d`.
    fn pseudo_rem(&self, d: &Self) -> Self {
        let dd = d.degree().expect("pseudo_rem by zero polynomial");
        let lc = d.lc().unwrap().clone();
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let shift = rd - dd;
            let rl = r.lc().unwrap().clone();
            let mut coeffs: Vec<BigInt> = r.coeffs.iter().map(|c| c * &lc).collect();
            for (i, dc) in d.coeffs.iter().enumerate() {
                coeffs[i + shift] -= &rl * dc;
            }
            r = Self::from_coeffs(coeffs);
        }
        r
    }

    /// Greatest common divisor in `Z[K]`, normalised to positive leading
    /// coefficient. `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive_part().scale(&other.content());
        }
        if other.is_zero() {
            return self.primitive_part().scale(&self.content());
        }
        let cg = self.content().gcd(&other.content());
        if self.is_constant() || other.is_constant() {
            return Self::constant(cg);
        }
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part().scale(&cg)
    }

    /// Exact division; panics if `d` does not divide `self` over the integers.
    pub fn div_exact(&self, d: &Self) -> Self {
        let dd = d.degree().expect("division by zero polynomial");
        if d.is_constant() {
            return self.div_scalar_exact(&d.coeffs[0]);
        }
        let Some(sd) = self.degree() else {
            return Self::zero();
        };
        assert!(sd >= dd, "inexact polynomial division");
        let lc = d.lc().unwrap();
        let mut rem = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); sd - dd + 1];
        for shift in (0..=sd - dd).rev() {
            let top = &rem[shift + dd];
            if top.is_zero() {
                continue;
            }
            let (qc, r) = top.div_rem(lc);
            assert!(r.is_zero(), "inexact polynomial division");
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[i + shift] -= &qc * dc;
            }
            q[shift] = qc;
        }
        assert!(
            rem.iter().all(|c| c.is_zero()),
            "inexact polynomial division"
        );
        Self::from_coeffs(q)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Multiplicity of the root `x` (number of times `(q K - p)` divides).
    pub fn root_multiplicity(&self, x: &BigRational) -> usize {
        if self.is_zero() {
            return 0;
        }
        let factor = Self::from_coeffs(vec![-x.numer().clone(), x.denom().clone()]);
        let mut p = self.clone();
        let mut mult = 0;
        while p.eval(x).is_zero() {
            p = p.scale(x.denom()).div_exact(&factor);
            mult += 1;
        }
        mult
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match i {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}*")?;
                    }
                    if i == 1 {
                        write!(f, "K")?;
                    } else {
                        write!(f, "K^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64s(cs)
    }

    #[test]
    fn gcd_of_shared_linear_factor() {
        // (K-1)(K+2) and (K-1)(2K+3)
        let a = p(&[-1, 1]).mul(&p(&[2, 1]));
        let b = p(&[-1, 1]).mul(&p(&[3, 2]));
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
    }

    #[test]
    fn gcd_includes_content() {
        let a = p(&[4, 6]);
        let b = p(&[6, 9]);
        assert_eq!(a.gcd(&b), p(&[2, 3]));
        assert_eq!(p(&[4]).gcd(&p(&[6, 0, 2])), p(&[2]));
    }

    #[test]
    fn exact_division() {
        let a = p(&[-1, 1]).mul(&p(&[1, 2])).mul(&p(&[0, 3]));
        assert_eq!(a.div_exact(&p(&[1, 2])), p(&[-1, 1]).mul(&p(&[0, 3])));
    }

    #[test]
    fn multiplicity_at_one() {
        let a = p(&[-1, 1]).mul(&p(&[-1, 1])).mul(&p(&[2, 1]));
        assert_eq!(a.root_multiplicity(&BigRational::one()), 2);
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(p(&[-1, 2]).root_multiplicity(&half), 1);
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-1, 0, 2]).to_string(), "2*K^2 - 1");
        assert_eq!(p(&[0, -1]).to_string(), "-K");
    }
}
