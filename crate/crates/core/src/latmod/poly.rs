//! Integer polynomials (coefficient-ascending) and characteristic polynomials.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// Polynomial with integer coefficients, `coeffs[i]` multiplies `x^i`.
/// The zero polynomial has no coefficients; otherwise the top one is nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `x - a`
    pub fn linear(a: &BigInt) -> Self {
        Self::new(vec![-a, BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn constant(&self) -> BigInt {
        self.coeffs.first().cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_matrix(&self, a: &IntMatrix) -> Result<IntMatrix> {
        let n = a.require_square("eval_matrix")?;
        let mut acc = IntMatrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(a)?;
            for i in 0..n {
                acc[(i, i)] += c;
            }
        }
        Ok(acc)
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::default();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &IntPoly, i: usize| p.coeffs.get(i).cloned().unwrap_or_default();
        IntPoly::new((0..n).map(|i| get(self, i) - get(other, i)).collect())
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Division by a monic polynomial; exact over the integers.
    pub fn div_rem_monic(&self, divisor: &IntPoly) -> Result<(IntPoly, IntPoly)> {
        if !divisor.is_monic() {
            return Err(Error::input("divisor must be monic"));
        }
        let d = divisor.degree().expect("monic is nonzero");
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return Ok((IntPoly::default(), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - d];
        for i in (0..quot.len()).rev() {
            let c = rem[i + d].clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &c * dc;
            }
            quot[i] = c;
        }
        rem.truncate(d);
        Ok((IntPoly::new(quot), IntPoly::new(rem)))
    }

    pub fn divides(&self, other: &IntPoly) -> Result<bool> {
        Ok(other.div_rem_monic(self)?.1.is_zero())
    }

    /// Monic gcd over the rationals, scaled to a primitive integer polynomial
    /// with positive leading coefficient.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let mut a = to_rational(self);
        let mut b = to_rational(other);
        while !b.is_empty() {
            let r = rat_rem(&a, &b);
            a = b;
            b = r;
        }
        primitive_part(&a)
    }

    /// `p / gcd(p, p')`, the product of the distinct irreducible factors.
    pub fn squarefree_part(&self) -> IntPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        let q = rat_div_exact(&to_rational(self), &to_rational(&g));
        primitive_part(&q)
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |a, c| a.gcd(c))
    }
}

fn to_rational(p: &IntPoly) -> Vec<BigRational> {
    p.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

fn trim(v: &mut Vec<BigRational>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

fn rat_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db].clone();
    while r.len() > db {
        let c = r.last().unwrap() / &lead;
        let shift = r.len() - 1 - db;
        for (j, bc) in b.iter().enumerate() {
            r[shift + j] -= &c * bc;
        }
        r.pop();
        trim(&mut r);
    }
    trim(&mut r);
    r
}

fn rat_div_exact(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db].clone();
    let mut q = vec![BigRational::zero(); r.len().saturating_sub(db)];
    while r.len() > db {
        let c = r.last().unwrap() / &lead;
        let shift = r.len() - 1 - db;
        for (j, bc) in b.iter().enumerate() {
            r[shift + j] -= &c * bc;
        }
        q[shift] = c;
        r.pop();
    }
    q
}

fn primitive_part(p: &[BigRational]) -> IntPoly {
    if p.is_empty() {
        return IntPoly::default();
    }
    let denom_lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .iter()
        .map(|c| (c * BigRational::from_integer(denom_lcm.clone())).to_integer())
        .collect();
    let mut poly = IntPoly::new(ints);
    let content = poly.content();
    let sign = if poly.leading().is_negative() { -1 } else { 1 };
    let scale = content * BigInt::from(sign);
    poly.coeffs.iter_mut().for_each(|c| *c = &*c / &scale);
    poly
}

impl fmt::Display for IntPoly {
    /// Coefficient-ascending, e.g. `-1 - 3x + x^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{mag}x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

/// Monic characteristic polynomial `det(xI - A)` by the Faddeev–LeVerrier
/// recursion; every division is exact over the integers.
pub fn char_poly(a: &IntMatrix) -> Result<IntPoly> {
    let n = a.require_square("char_poly")?;
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut m = IntMatrix::zeros(n, n);
    for k in 1..=n {
        // M_k = A·M_{k-1} + c_{n-k+1}·I
        m = a.mul(&m)?;
        for i in 0..n {
            m[(i, i)] += &coeffs[n - k + 1];
        }
        let am = a.mul(&m)?;
        let tr = am.trace()?;
        let (q, r) = (-tr).div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero(), "Faddeev-LeVerrier division must be exact");
        coeffs[n - k] = q;
    }
    Ok(IntPoly::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn char_poly_examples() {
        let u = IntMatrix::from_i64(&[[0, 1], [1, 3]]);
        assert_eq!(char_poly(&u).unwrap(), IntPoly::from_i64(&[-1, -3, 1]));
        assert_eq!(
            char_poly(&IntMatrix::identity(2)).unwrap(),
            IntPoly::from_i64(&[1, -2, 1])
        );
        let k = u.kron(&u);
        let p = char_poly(&k).unwrap();
        assert_eq!(p.degree(), Some(4));
        assert_eq!(p.constant(), BigInt::one());
        assert!(char_poly(&IntMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn display_is_ascending() {
        assert_eq!(IntPoly::from_i64(&[-1, -3, 1]).to_string(), "-1 - 3x + x^2");
        assert_eq!(IntPoly::default().to_string(), "0");
    }

    #[test]
    fn division_and_gcd() {
        // (x-1)^2 (x+2)
        let p = IntPoly::linear(&1.into())
            .mul(&IntPoly::linear(&1.into()))
            .mul(&IntPoly::linear(&(-2).into()));
        let (q, r) = p.div_rem_monic(&IntPoly::linear(&1.into())).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, IntPoly::from_i64(&[-2, 1, 1]));
        assert_eq!(p.squarefree_part(), IntPoly::from_i64(&[-2, 1, 1]));
        assert_eq!(p.gcd(&p.derivative()), IntPoly::from_i64(&[-1, 1]));
    }
}
