//! Truncated Magnus expansions `x_i ↦ 1 + X_i` in `Z⟨⟨X_1..X_r⟩⟩`.
//!
//! Storage is dense by degree: block `d` holds the `r^d` coefficients of the
//! degree-`d` monomials, indexed by reading the monomial as a base-`r`
//! number with the first variable most significant. Index order within a
//! block is therefore lexicographic.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fbc::FreeAutomorphism;
use crate::words::{Alphabet, Word};

/// Default truncation degree.
pub const DEFAULT_CAP: usize = 7;

/// Largest total number of stored coefficients accepted by a constructor.
pub const MAX_COEFFICIENTS: usize = 1 << 24;

/// A word in the noncommuting variables, as generator indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<usize>);

impl Monomial {
    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn from_index(rank: usize, degree: usize, mut index: usize) -> Self {
        let mut letters = vec![0; degree];
        for slot in letters.iter_mut().rev() {
            *slot = index % rank;
            index /= rank;
        }
        Monomial(letters)
    }

    pub fn index(&self, rank: usize) -> usize {
        self.0.iter().fold(0, |acc, &g| acc * rank + g)
    }

    /// `Xx·Xy`-style name; the empty monomial prints as `1`.
    pub fn name(&self, alphabet: &Alphabet) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|&g| format!("X{}", alphabet.name(g)))
            .collect::<Vec<_>>()
            .join("·")
    }
}

/// Lowest degree of `s − 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weight {
    Exact(usize),
    /// Every coefficient up to the cap vanishes.
    AtLeast(usize),
}

impl Weight {
    /// Whether the weight is known to be at least `n`.
    pub fn at_least(self, n: usize) -> bool {
        match self {
            Weight::Exact(d) | Weight::AtLeast(d) => d >= n,
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Exact(d) => write!(f, "{d}"),
            Weight::AtLeast(d) => write!(f, ">= {d}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TruncSeries {
    rank: usize,
    cap: usize,
    blocks: Vec<Vec<BigInt>>,
}

impl TruncSeries {
    pub fn zero(rank: usize, cap: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::input("series rank must be positive"));
        }
        let mut total = 0usize;
        let mut size = 1usize;
        for _ in 0..=cap {
            total = total.saturating_add(size);
            size = size.saturating_mul(rank);
        }
        if total > MAX_COEFFICIENTS {
            return Err(Error::resource(format!(
                "series of rank {rank} and cap {cap} would store {total} coefficients"
            )));
        }
        let blocks = (0..=cap)
            .map(|d| vec![BigInt::zero(); rank.pow(d as u32)])
            .collect();
        Ok(TruncSeries { rank, cap, blocks })
    }

    pub fn one(rank: usize, cap: usize) -> Result<Self> {
        let mut s = TruncSeries::zero(rank, cap)?;
        s.blocks[0][0] = BigInt::one();
        Ok(s)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn block(&self, degree: usize) -> &[BigInt] {
        &self.blocks[degree]
    }

    pub fn constant(&self) -> &BigInt {
        &self.blocks[0][0]
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        if m.degree() > self.cap || m.0.iter().any(|&g| g >= self.rank) {
            return BigInt::zero();
        }
        self.blocks[m.degree()][m.index(self.rank)].clone()
    }

    pub fn set_coeff(&mut self, m: &Monomial, c: BigInt) -> Result<()> {
        if m.degree() > self.cap || m.0.iter().any(|&g| g >= self.rank) {
            return Err(Error::input(format!("monomial {:?} outside series range", m.0)));
        }
        let idx = m.index(self.rank);
        self.blocks[m.degree()][idx] = c;
        Ok(())
    }

    /// Nonzero terms in degree-major, lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &BigInt)> + '_ {
        self.blocks.iter().enumerate().flat_map(move |(d, block)| {
            block
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(i, c)| (Monomial::from_index(self.rank, d, i), c))
        })
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|b| b.iter().all(Zero::is_zero))
    }

    pub fn is_one(&self) -> bool {
        self.constant().is_one() && self.blocks[1..].iter().all(|b| b.iter().all(Zero::is_zero))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank || self.cap != other.cap {
            return Err(Error::input(format!(
                "series shapes differ: rank {} cap {} vs rank {} cap {}",
                self.rank, self.cap, other.rank, other.cap
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (bo, bi) in out.blocks.iter_mut().zip(&other.blocks) {
            for (o, i) in bo.iter_mut().zip(bi) {
                *o += i;
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-BigInt::one()))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut out = self.clone();
        for b in &mut out.blocks {
            for c in b.iter_mut() {
                *c *= k;
            }
        }
        out
    }

    /// Truncated product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = TruncSeries::zero(self.rank, self.cap)?;
        for (da, ba) in self.blocks.iter().enumerate() {
            for (ia, ca) in ba.iter().enumerate() {
                if ca.is_zero() {
                    continue;
                }
                for db in 0..=self.cap - da {
                    let shift = ia * self.rank.pow(db as u32);
                    let target = &mut out.blocks[da + db];
                    for (ib, cb) in other.blocks[db].iter().enumerate() {
                        if !cb.is_zero() {
                            target[shift + ib] += ca * cb;
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Right multiplication by `Σ_k coeffs[k]·X_g^k`.
    fn mul_univariate(&self, g: usize, coeffs: &[BigInt]) -> Self {
        let r = self.rank;
        let mut out = TruncSeries {
            rank: r,
            cap: self.cap,
            blocks: self.blocks.iter().map(|b| vec![BigInt::zero(); b.len()]).collect(),
        };
        for (d, block) in self.blocks.iter().enumerate() {
            for (idx, c) in block.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut shifted = idx;
                let mut suffix = 0usize;
                for (k, ck) in coeffs.iter().enumerate().take(self.cap - d + 1) {
                    if k > 0 {
                        shifted *= r;
                        suffix = suffix * r + g;
                    }
                    if !ck.is_zero() {
                        out.blocks[d + k][shifted + suffix] += c * ck;
                    }
                }
            }
        }
        out
    }

    /// `s^q = Σ_k C(q, k)(s − 1)^k` for a series with constant term 1.
    pub fn pow(&self, q: &BigInt) -> Result<Self> {
        let a = self.minus_one()?;
        let coeffs = binomials(q, self.cap);
        let mut out = TruncSeries::one(self.rank, self.cap)?;
        let mut a_pow = TruncSeries::one(self.rank, self.cap)?;
        for c in coeffs.iter().skip(1) {
            a_pow = a_pow.mul(&a)?;
            if a_pow.blocks.iter().all(|b| b.iter().all(Zero::is_zero)) {
                break;
            }
            out = out.add(&a_pow.scale(c))?;
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Result<Self> {
        self.pow(&-BigInt::one())
    }

    /// `s − 1` for a series with constant term 1.
    pub fn minus_one(&self) -> Result<Self> {
        if !self.constant().is_one() {
            return Err(Error::input(format!(
                "series has constant term {}, expected 1",
                self.constant()
            )));
        }
        let mut a = self.clone();
        a.blocks[0][0] = BigInt::zero();
        Ok(a)
    }

    /// `s⁻¹ t⁻¹ s t`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.inverse()?
            .mul(&other.inverse()?)?
            .mul(self)?
            .mul(other)
    }

    /// `t⁻¹ s t`.
    pub fn conjugate(&self, by: &Self) -> Result<Self> {
        by.inverse()?.mul(self)?.mul(by)
    }

    pub fn weight(&self) -> Weight {
        (1..=self.cap)
            .find(|&d| self.blocks[d].iter().any(|c| !c.is_zero()))
            .map_or(Weight::AtLeast(self.cap + 1), Weight::Exact)
    }

    /// First nonzero coefficient of `s − 1` as `(degree, index, coefficient)`.
    pub fn leading(&self) -> Option<(usize, usize, &BigInt)> {
        (1..=self.cap).find_map(|d| {
            self.blocks[d]
                .iter()
                .enumerate()
                .find(|(_, c)| !c.is_zero())
                .map(|(i, c)| (d, i, c))
        })
    }

    /// Replaces `X_i` by `images[i] − 1` and truncates.
    ///
    /// Uses `S = c + Σ_i X_i·S_i` recursively, so each prefix of a monomial
    /// is substituted once.
    pub fn substitute_series(&self, images: &[TruncSeries]) -> Result<Self> {
        if images.len() != self.rank {
            return Err(Error::input(format!(
                "substitution needs {} images, got {}",
                self.rank,
                images.len()
            )));
        }
        let mut ys = Vec::with_capacity(images.len());
        for img in images {
            self.check_compatible(img)?;
            ys.push(img.minus_one()?);
        }
        self.substitute_prefix(&ys, 0, 0)
    }

    /// Substitution of the sub-series of monomials beginning with the
    /// degree-`depth` prefix numbered `prefix`, with that prefix stripped.
    fn substitute_prefix(&self, ys: &[TruncSeries], depth: usize, prefix: usize) -> Result<Self> {
        let mut out = TruncSeries::one(self.rank, self.cap)?;
        out.blocks[0][0] = self.blocks[depth][prefix].clone();
        if depth == self.cap {
            return Ok(out);
        }
        for (i, y) in ys.iter().enumerate() {
            let child = prefix * self.rank + i;
            let nonzero = (depth + 1..=self.cap).any(|d| {
                let span = self.rank.pow((d - depth - 1) as u32);
                self.blocks[d][child * span..(child + 1) * span]
                    .iter()
                    .any(|c| !c.is_zero())
            });
            if nonzero {
                let inner = self.substitute_prefix(ys, depth + 1, child)?;
                out = out.add(&y.mul(&inner)?)?;
            }
        }
        Ok(out)
    }

    /// The series induced by an automorphism of the free group.
    pub fn substitute(&self, phi: &FreeAutomorphism) -> Result<Self> {
        if phi.rank() != self.rank {
            return Err(Error::input("automorphism rank differs from series rank"));
        }
        let images = phi
            .images()
            .iter()
            .map(|w| expand(w, self.rank, self.cap))
            .collect::<Result<Vec<_>>>()?;
        self.substitute_series(&images)
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        SeriesDisplay {
            s: self,
            names: alphabet,
        }
    }
}

struct SeriesDisplay<'a> {
    s: &'a TruncSeries,
    names: &'a Alphabet,
}

impl fmt::Display for SeriesDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, c) in self.s.terms() {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            if m.degree() == 0 {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write!(f, "{}", m.name(self.names))?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `C(q, k)` for `0 ≤ k ≤ cap`, valid for negative `q`.
pub fn binomials(q: &BigInt, cap: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(cap + 1);
    let mut c = BigInt::one();
    out.push(c.clone());
    for k in 1..=cap {
        c = c * (q - BigInt::from(k - 1));
        let (quot, rem) = c.div_rem(&BigInt::from(k));
        debug_assert!(rem.is_zero());
        c = quot;
        out.push(c.clone());
    }
    out
}

/// Magnus expansion of a word truncated above degree `cap`.
pub fn expand(w: &Word, rank: usize, cap: usize) -> Result<TruncSeries> {
    if w.min_rank() > rank {
        return Err(Error::input(format!("word uses generators beyond rank {rank}")));
    }
    let mut s = TruncSeries::one(rank, cap)?;
    for (g, e) in w.runs() {
        s = s.mul_univariate(*g, &binomials(e, cap));
    }
    Ok(s)
}

pub fn weight(w: &Word, rank: usize, cap: usize) -> Result<Weight> {
    Ok(expand(w, rank, cap)?.weight())
}

/// Exact membership of `w` in `γ_n(F_rank)`.
pub fn is_in_gamma(w: &Word, rank: usize, n: usize, cap: usize) -> Result<bool> {
    if n > cap + 1 {
        return Err(Error::Precision(format!(
            "deciding gamma_{n} needs cap >= {}, got {cap}",
            n - 1
        )));
    }
    Ok(weight(w, rank, cap)?.at_least(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{commutator, parse_word};

    fn w(s: &str) -> Word {
        parse_word(s, &Alphabet::standard(2)).unwrap()
    }

    fn mono(v: &[usize]) -> Monomial {
        Monomial(v.to_vec())
    }

    #[test]
    fn generator_and_cube() {
        let s = expand(&w("x"), 2, 4).unwrap();
        assert_eq!(s.terms().count(), 2);
        assert_eq!(s.coeff(&mono(&[0])), BigInt::one());
        let c = expand(&w("x^3"), 2, 4).unwrap();
        let coeffs: Vec<BigInt> = (0..=4).map(|k| c.coeff(&mono(&vec![0; k]))).collect();
        assert_eq!(coeffs, [1, 3, 3, 1, 0].map(BigInt::from));
        assert_eq!(c.terms().count(), 4);
    }

    #[test]
    fn inverse_is_geometric() {
        let s = expand(&w("x^-1"), 1, 5).unwrap();
        let coeffs: Vec<BigInt> = (0..=5).map(|k| s.coeff(&mono(&vec![0; k]))).collect();
        assert_eq!(coeffs, [1, -1, 1, -1, 1, -1].map(BigInt::from));
    }

    #[test]
    fn commutator_leading_term() {
        let s = expand(&w("[x, y]"), 2, 2).unwrap();
        assert_eq!(s.weight(), Weight::Exact(2));
        assert_eq!(s.coeff(&mono(&[0, 1])), BigInt::one());
        assert_eq!(s.coeff(&mono(&[1, 0])), -BigInt::one());
        assert_eq!(s.coeff(&mono(&[0, 0])), BigInt::zero());
        assert_eq!(s.display(&Alphabet::standard(2)).to_string(), "1 + Xx·Xy - Xy·Xx");
    }

    #[test]
    fn gamma_membership() {
        assert!(is_in_gamma(&w("[x,y]"), 2, 2, 4).unwrap());
        assert!(!is_in_gamma(&w("[x,y]"), 2, 3, 4).unwrap());
        assert!(!is_in_gamma(&w("x^3"), 2, 2, 4).unwrap());
        assert!(is_in_gamma(&Word::identity(), 2, 5, 4).unwrap());
        assert!(matches!(is_in_gamma(&w("x"), 2, 6, 4), Err(Error::Precision(_))));
        assert_eq!(weight(&Word::identity(), 2, 4).unwrap(), Weight::AtLeast(5));
    }

    #[test]
    fn series_pow_matches_word_pow() {
        let base = w("x y^-2 x");
        for q in [-3i64, -1, 0, 2, 5] {
            let lhs = expand(&base, 2, 5).unwrap().pow(&q.into()).unwrap();
            let rhs = expand(&base.pow_i64(q).unwrap(), 2, 5).unwrap();
            assert_eq!(lhs, rhs, "q = {q}");
        }
    }

    #[test]
    fn substitution_examples() {
        let f = crate::fbc::FbcGroup::reference();
        let phi = f.phi();
        assert_eq!(
            expand(&w("x"), 2, 4).unwrap().substitute(phi).unwrap(),
            expand(&w("y"), 2, 4).unwrap()
        );
        let lhs = expand(&commutator(&w("x"), &w("y")), 2, 4)
            .unwrap()
            .substitute(phi)
            .unwrap();
        assert_eq!(lhs, expand(&w("[y, x y^3]"), 2, 4).unwrap());
        let back = lhs.substitute(&phi.inverse()).unwrap();
        assert_eq!(back, expand(&w("[x,y]"), 2, 4).unwrap());
    }

    #[test]
    fn binomial_coefficients() {
        assert_eq!(binomials(&BigInt::from(-2), 3), [1, -2, 3, -4].map(BigInt::from));
        assert_eq!(binomials(&BigInt::from(2), 3), [1, 2, 1, 0].map(BigInt::from));
    }
}
