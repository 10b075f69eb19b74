//! Free-by-cyclic groups `F_n ⋊_φ Z`.
//!
//! Elements are normal forms `(w, s)` meaning `w · t^s`, fiber first. The
//! stable letter acts by `t⁻¹ x t = φ(x)`, so `t^s · v = φ^{-s}(v) · t^s`
//! and
//!
//! ```text
//! (u, s) · (v, r) = (u · φ^{-s}(v), s + r)
//! ```

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::latmod::IntMatrix;
use crate::words::{exponent_sums, parse_word, Alphabet, Word};

/// Default cap on `|k|` for memoized `φ^k` images.
pub const DEFAULT_POWER_CAP: usize = 12;

/// Default maximal word length for the bounded inverse search.
pub const DEFAULT_INVERSE_SEARCH_LEN: usize = 8;

/// An automorphism of `F_n` given by generator images and inverse images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeAutomorphism {
    rank: usize,
    images: Vec<Word>,
    inverse_images: Vec<Word>,
}

impl FreeAutomorphism {
    /// Checks that both compositions fix every generator.
    pub fn new(images: Vec<Word>, inverse_images: Vec<Word>) -> Result<Self> {
        let rank = images.len();
        if rank == 0 || inverse_images.len() != rank {
            return Err(Error::input(format!(
                "automorphism needs {rank} images and as many inverse images, got {}",
                inverse_images.len()
            )));
        }
        if let Some(w) = images.iter().chain(&inverse_images).find(|w| w.min_rank() > rank) {
            return Err(Error::input(format!("image {w:?} uses generators beyond rank {rank}")));
        }
        let phi = FreeAutomorphism {
            rank,
            images,
            inverse_images,
        };
        for i in 0..rank {
            let x = Word::gen(i);
            if substitute(&phi.inverse_images, &substitute(&phi.images, &x)?)? != x
                || substitute(&phi.images, &substitute(&phi.inverse_images, &x)?)? != x
            {
                return Err(Error::input(format!(
                    "supplied inverse images do not invert the automorphism on generator {i}"
                )));
            }
        }
        Ok(phi)
    }

    /// Derives inverse images by searching all reduced words up to
    /// `max_len` letters.
    pub fn with_derived_inverse(images: Vec<Word>, max_len: usize) -> Result<Self> {
        let rank = images.len();
        if rank == 0 {
            return Err(Error::input("automorphism of rank 0"));
        }
        let mut found: Vec<Option<Word>> = vec![None; rank];
        let targets: Vec<Word> = (0..rank).map(Word::gen).collect();
        let mut frontier = vec![Word::identity()];
        let mut remaining = rank;
        for _len in 1..=max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for g in 0..rank {
                    for sign in [1i64, -1] {
                        if let Some((lg, le)) = w.runs().last() {
                            if *lg == g && le.is_positive() != (sign > 0) {
                                continue;
                            }
                        }
                        let cand = w.mul(&Word::gen_pow(g, sign));
                        let img = substitute(&images, &cand)?;
                        if let Some(i) = targets.iter().position(|t| *t == img) {
                            if found[i].is_none() {
                                found[i] = Some(cand.clone());
                                remaining -= 1;
                            }
                        }
                        next.push(cand);
                    }
                }
            }
            if remaining == 0 {
                break;
            }
            frontier = next;
        }
        if remaining > 0 {
            let missing: Vec<usize> = (0..rank).filter(|&i| found[i].is_none()).collect();
            return Err(Error::input(format!(
                "no inverse image of length <= {max_len} for generators {missing:?}; \
                 supply inverse images or raise the search length"
            )));
        }
        FreeAutomorphism::new(images, found.into_iter().map(Option::unwrap).collect())
    }

    pub fn identity(rank: usize) -> Self {
        let gens: Vec<Word> = (0..rank).map(Word::gen).collect();
        FreeAutomorphism {
            rank,
            images: gens.clone(),
            inverse_images: gens,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn inverse_images(&self) -> &[Word] {
        &self.inverse_images
    }

    pub fn inverse(&self) -> FreeAutomorphism {
        FreeAutomorphism {
            rank: self.rank,
            images: self.inverse_images.clone(),
            inverse_images: self.images.clone(),
        }
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        substitute(&self.images, w)
    }

    pub fn apply_inverse(&self, w: &Word) -> Result<Word> {
        substitute(&self.inverse_images, w)
    }

    /// Integer matrix on the abelianization; column `i` is the image of `x_i`.
    pub fn abelianization(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rank, self.rank);
        for (i, img) in self.images.iter().enumerate() {
            for (j, e) in exponent_sums(img, self.rank).into_iter().enumerate() {
                m[(j, i)] = e;
            }
        }
        m
    }
}

/// Replaces each generator `x_g` of `w` by `images[g]`.
pub fn substitute(images: &[Word], w: &Word) -> Result<Word> {
    let mut out = Word::identity();
    for (g, e) in w.runs() {
        let img = images
            .get(*g)
            .ok_or_else(|| Error::input(format!("generator {g} outside automorphism rank")))?;
        out = out.mul(&img.pow(e)?);
    }
    Ok(out)
}

/// Normal form `fiber · t^shift`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct FbcElement {
    pub fiber: Word,
    pub shift: BigInt,
}

impl FbcElement {
    pub fn new(fiber: Word, shift: impl Into<BigInt>) -> Self {
        FbcElement {
            fiber,
            shift: shift.into(),
        }
    }

    pub fn identity() -> Self {
        FbcElement::default()
    }

    pub fn is_identity(&self) -> bool {
        self.fiber.is_identity() && self.shift.is_zero()
    }

    pub fn display<'a>(&'a self, fiber: &'a Alphabet) -> impl fmt::Display + 'a {
        FbcDisplay { el: self, fiber }
    }
}

struct FbcDisplay<'a> {
    el: &'a FbcElement,
    fiber: &'a Alphabet,
}

impl fmt::Display for FbcDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.el.fiber.display(self.fiber), self.el.shift)
    }
}

/// Result of comparing two presentation words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdentityVerdict {
    Equal,
    /// Normal form of `rhs⁻¹ · lhs`.
    Unequal(FbcElement),
}

impl IdentityVerdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, IdentityVerdict::Equal)
    }
}

type PowerMemo = RwLock<HashMap<(usize, i64), Arc<Word>>>;

/// `F_n ⋊_φ Z` with a presentation alphabet embedded by normal forms.
#[derive(Debug)]
pub struct FbcGroup {
    fiber: Alphabet,
    phi: FreeAutomorphism,
    presentation: Alphabet,
    embedding: Vec<FbcElement>,
    power_cap: usize,
    memo: PowerMemo,
}

impl Clone for FbcGroup {
    fn clone(&self) -> Self {
        FbcGroup {
            fiber: self.fiber.clone(),
            phi: self.phi.clone(),
            presentation: self.presentation.clone(),
            embedding: self.embedding.clone(),
            power_cap: self.power_cap,
            memo: RwLock::new(HashMap::new()),
        }
    }
}

impl FbcGroup {
    pub fn new(
        fiber: Alphabet,
        phi: FreeAutomorphism,
        presentation: Alphabet,
        embedding: Vec<FbcElement>,
    ) -> Result<Self> {
        if phi.rank() != fiber.rank() {
            return Err(Error::input("automorphism rank differs from fiber alphabet"));
        }
        if embedding.len() != presentation.rank() {
            return Err(Error::input(
                "embedding must assign a normal form to every presentation generator",
            ));
        }
        if let Some(e) = embedding.iter().find(|e| e.fiber.min_rank() > fiber.rank()) {
            return Err(Error::input(format!("embedding element {e:?} leaves the fiber")));
        }
        Ok(FbcGroup {
            fiber,
            phi,
            presentation,
            embedding,
            power_cap: DEFAULT_POWER_CAP,
            memo: RwLock::new(HashMap::new()),
        })
    }

    /// Presentation generators `x1..xn, t` mapped to themselves.
    pub fn standard(phi: FreeAutomorphism) -> Result<Self> {
        let fiber = Alphabet::standard(phi.rank());
        let mut names: Vec<String> = fiber.names().to_vec();
        names.push("t".into());
        let presentation = Alphabet::new(&names)?;
        let mut embedding: Vec<FbcElement> = (0..phi.rank())
            .map(|i| FbcElement::new(Word::gen(i), 0))
            .collect();
        embedding.push(FbcElement::new(Word::identity(), 1));
        FbcGroup::new(fiber, phi, presentation, embedding)
    }

    /// `⟨a, b | a^{b²} = a·a^{3b}⟩` as `F(x, y) ⋊ Z` with `x ↦ y, y ↦ x y³`,
    /// `a ↦ x`, `b ↦ t`.
    pub fn reference() -> Self {
        let fiber = Alphabet::standard(2);
        let w = |s: &str| parse_word(s, &fiber).expect("preset literal");
        let phi = FreeAutomorphism::new(vec![w("y"), w("x y^3")], vec![w("y x^-3"), w("x")])
            .expect("preset automorphism");
        let presentation = Alphabet::new(&["a", "b"]).expect("names");
        let embedding = vec![
            FbcElement::new(Word::gen(0), 0),
            FbcElement::new(Word::identity(), 1),
        ];
        FbcGroup::new(fiber, phi, presentation, embedding).expect("preset group")
    }

    /// `x ↦ y, y ↦ x⁻¹ y³`, whose abelianization is the companion matrix of
    /// `x² − 3x + 1`.
    pub fn contrast() -> Self {
        let fiber = Alphabet::standard(2);
        let w = |s: &str| parse_word(s, &fiber).expect("preset literal");
        let phi = FreeAutomorphism::new(vec![w("y"), w("x^-1 y^3")], vec![w("x^3 y^-1"), w("x")])
            .expect("preset automorphism");
        let presentation = Alphabet::new(&["a", "b"]).expect("names");
        let embedding = vec![
            FbcElement::new(Word::gen(0), 0),
            FbcElement::new(Word::identity(), 1),
        ];
        FbcGroup::new(fiber, phi, presentation, embedding).expect("preset group")
    }

    pub fn with_power_cap(mut self, cap: usize) -> Self {
        self.power_cap = cap;
        self.memo = RwLock::new(HashMap::new());
        self
    }

    pub fn fiber(&self) -> &Alphabet {
        &self.fiber
    }

    pub fn phi(&self) -> &FreeAutomorphism {
        &self.phi
    }

    pub fn presentation(&self) -> &Alphabet {
        &self.presentation
    }

    pub fn embedding(&self) -> &[FbcElement] {
        &self.embedding
    }

    pub fn power_cap(&self) -> usize {
        self.power_cap
    }

    pub fn rank(&self) -> usize {
        self.fiber.rank()
    }

    pub fn parse(&self, literal: &str) -> Result<Word> {
        parse_word(literal, &self.presentation)
    }

    pub fn parse_fiber(&self, literal: &str) -> Result<Word> {
        parse_word(literal, &self.fiber)
    }

    /// `φ^k(x_i)`, memoized, for `|k| ≤ power_cap`.
    pub fn phi_power_image(&self, generator: usize, k: i64) -> Result<Arc<Word>> {
        if generator >= self.rank() {
            return Err(Error::input(format!("generator {generator} out of range")));
        }
        if k.unsigned_abs() as usize > self.power_cap {
            return Err(Error::resource(format!(
                "phi^{k} exceeds the power cap {}",
                self.power_cap
            )));
        }
        if let Some(w) = self.memo.read().expect("memo lock").get(&(generator, k)) {
            return Ok(Arc::clone(w));
        }
        let word = match k {
            0 => Word::gen(generator),
            k if k > 0 => {
                // φ^k(x_i) = φ^{k-1}(φ(x_i))
                self.apply_phi_power(&self.phi.images[generator], k - 1)?
            }
            k => self.apply_phi_power(&self.phi.inverse_images[generator], k + 1)?,
        };
        let word = Arc::new(word);
        self.memo
            .write()
            .expect("memo lock")
            .insert((generator, k), Arc::clone(&word));
        Ok(word)
    }

    /// `φ^k(w)`.
    pub fn apply_phi_power(&self, w: &Word, k: i64) -> Result<Word> {
        if k == 0 {
            return Ok(w.clone());
        }
        let mut out = Word::identity();
        for (g, e) in w.runs() {
            let img = self.phi_power_image(*g, k)?;
            out = out.mul(&img.pow(e)?);
        }
        Ok(out)
    }

    fn shift_i64(&self, s: &BigInt) -> Result<i64> {
        s.to_i64()
            .filter(|v| v.unsigned_abs() as usize <= self.power_cap)
            .ok_or_else(|| {
                Error::resource(format!("t-shift {s} exceeds the power cap {}", self.power_cap))
            })
    }

    /// Semidirect multiplication.
    pub fn mul(&self, a: &FbcElement, b: &FbcElement) -> Result<FbcElement> {
        let s = self.shift_i64(&a.shift)?;
        let moved = self.apply_phi_power(&b.fiber, -s)?;
        Ok(FbcElement {
            fiber: a.fiber.mul(&moved),
            shift: &a.shift + &b.shift,
        })
    }

    pub fn inverse(&self, a: &FbcElement) -> Result<FbcElement> {
        // (w, s)^-1 = (φ^{s}(w^-1), -s)
        let s = self.shift_i64(&a.shift)?;
        Ok(FbcElement {
            fiber: self.apply_phi_power(&a.fiber.inverse(), s)?,
            shift: -&a.shift,
        })
    }

    pub fn pow(&self, a: &FbcElement, e: &BigInt) -> Result<FbcElement> {
        if a.shift.is_zero() {
            return Ok(FbcElement::new(a.fiber.pow(e)?, 0));
        }
        if e.is_negative() {
            return self.pow(&self.inverse(a)?, &-e);
        }
        let n = e
            .to_usize()
            .filter(|n| *n <= self.power_cap.max(1) * 64)
            .ok_or_else(|| Error::resource(format!("power {e} of an element with nonzero shift")))?;
        let mut acc = FbcElement::identity();
        for _ in 0..n {
            acc = self.mul(&acc, a)?;
        }
        Ok(acc)
    }

    /// Pushes every stable letter to the right.
    pub fn normal_form(&self, w: &Word) -> Result<FbcElement> {
        let mut acc = FbcElement::identity();
        for (g, e) in w.runs() {
            let el = self.embedding.get(*g).ok_or_else(|| {
                Error::input(format!("generator index {g} outside the presentation alphabet"))
            })?;
            let p = self.pow(el, e)?;
            acc = self.mul(&acc, &p)?;
        }
        Ok(acc)
    }

    /// Normal form of a fiber word read as a group element.
    pub fn fiber_element(&self, w: &Word) -> FbcElement {
        FbcElement::new(w.clone(), 0)
    }

    pub fn verify_identity(&self, lhs: &Word, rhs: &Word) -> Result<IdentityVerdict> {
        let d = self.normal_form(&rhs.inverse().mul(lhs))?;
        Ok(if d.is_identity() {
            IdentityVerdict::Equal
        } else {
            IdentityVerdict::Unequal(d)
        })
    }

    /// The defining relator `a^{b²}·(a·a^{3b})⁻¹` of the reference presentation.
    pub fn reference_relator(&self) -> Result<Word> {
        self.parse("a^(b^2) * (a * a^3^b)^-1")
    }
}

/// One named identity of an identity suite.
#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub verdict: IdentityVerdict,
    pub lhs_normal_form: FbcElement,
    pub rhs_normal_form: FbcElement,
}

#[derive(Clone, Debug, Default)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.verdict.is_equal())
    }
}

/// `(name, lhs, rhs)` literals of the identities holding in the reference group.
pub const REFERENCE_IDENTITIES: [(&str, &str, &str); 6] = [
    ("defining relation", "a^(b^2)", "a * a^3^b"),
    ("cube of a", "a^3", "[a, b^2]^(b^-1)"),
    ("cube of a^b", "(a^b)^3", "[a, b^2]"),
    ("commutator with a^b", "[a^(b^2), a^b]", "[a, a^b]^(a^3^b)"),
    ("conjugated commutator", "[a^b, a]", "[a, a^b]^(a^3^b * b^-1)"),
    ("square of [a^b, a]", "[a^b, a]^2", "[a, a^b, a^3^b * b^-1]"),
];

/// Verifies a list of `(name, lhs, rhs)` literal identities in order.
pub fn identity_suite(group: &FbcGroup, identities: &[(String, String, String)]) -> Result<IdentityReport> {
    let mut checks = Vec::with_capacity(identities.len());
    for (name, lhs, rhs) in identities {
        let l = group.parse(lhs)?;
        let r = group.parse(rhs)?;
        checks.push(IdentityCheck {
            name: name.clone(),
            lhs: lhs.clone(),
            rhs: rhs.clone(),
            verdict: group.verify_identity(&l, &r)?,
            lhs_normal_form: group.normal_form(&l)?,
            rhs_normal_form: group.normal_form(&r)?,
        });
    }
    Ok(IdentityReport { checks })
}

pub fn reference_identity_list() -> Vec<(String, String, String)> {
    REFERENCE_IDENTITIES
        .iter()
        .map(|(n, l, r)| (n.to_string(), l.to_string(), r.to_string()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_form_examples() {
        let g = FbcGroup::reference();
        let nf = g.normal_form(&g.parse("a^(b^2)").unwrap()).unwrap();
        assert_eq!(nf, FbcElement::new(g.parse_fiber("x y^3").unwrap(), 0));
        let nf = g.normal_form(&g.parse("b").unwrap()).unwrap();
        assert_eq!(nf, FbcElement::new(Word::identity(), 1));
        let rel = g.reference_relator().unwrap();
        assert!(g.normal_form(&rel).unwrap().is_identity());
    }

    #[test]
    fn unequal_identity_has_witness() {
        let g = FbcGroup::reference();
        let v = g
            .verify_identity(&g.parse("a b").unwrap(), &g.parse("b a").unwrap())
            .unwrap();
        assert_eq!(
            v,
            IdentityVerdict::Unequal(FbcElement::new(g.parse_fiber("x^-1 y").unwrap(), 0))
        );
    }

    #[test]
    fn reference_identities_hold() {
        let g = FbcGroup::reference();
        let r = identity_suite(&g, &reference_identity_list()).unwrap();
        assert_eq!(r.checks.len(), 6);
        for c in &r.checks {
            assert!(c.verdict.is_equal(), "{} failed: {:?}", c.name, c.verdict);
        }
    }

    #[test]
    fn cube_of_conjugate_normalizes_like_commutator() {
        let g = FbcGroup::reference();
        let lhs = g.normal_form(&g.parse("(a^3)^b").unwrap()).unwrap();
        assert_eq!(lhs, FbcElement::new(g.parse_fiber("y^3").unwrap(), 0));
        let rhs = g.normal_form(&g.parse("[a, b^2]").unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn empty_suite_is_vacuous() {
        let g = FbcGroup::standard(FreeAutomorphism::identity(2)).unwrap();
        assert!(identity_suite(&g, &[]).unwrap().all_pass());
    }

    #[test]
    fn phi_powers() {
        let g = FbcGroup::reference();
        assert_eq!(*g.phi_power_image(0, 2).unwrap(), g.parse_fiber("x y^3").unwrap());
        assert_eq!(*g.phi_power_image(0, -1).unwrap(), g.parse_fiber("y x^-3").unwrap());
        assert_eq!(*g.phi_power_image(1, 0).unwrap(), Word::gen(1));
        assert!(matches!(g.phi_power_image(0, 13), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn derived_inverse_matches_preset() {
        let g = FbcGroup::reference();
        let derived =
            FreeAutomorphism::with_derived_inverse(g.phi().images().to_vec(), 6).unwrap();
        assert_eq!(&derived, g.phi());
        assert!(FreeAutomorphism::with_derived_inverse(g.phi().images().to_vec(), 2).is_err());
    }

    #[test]
    fn bad_inverse_is_rejected() {
        let f = Alphabet::standard(2);
        let w = |s: &str| parse_word(s, &f).unwrap();
        assert!(FreeAutomorphism::new(vec![w("y"), w("x y^3")], vec![w("y x^-2"), w("x")]).is_err());
    }

    #[test]
    fn abelianization_is_u() {
        assert_eq!(
            FbcGroup::reference().phi().abelianization(),
            IntMatrix::from_i64(&[[0, 1], [1, 3]])
        );
        assert_eq!(
            FbcGroup::contrast().phi().abelianization(),
            IntMatrix::from_i64(&[[0, -1], [1, 3]])
        );
    }

    #[test]
    fn contrast_relation() {
        let g = FbcGroup::contrast();
        let v = g
            .verify_identity(&g.parse("a^(b^2)").unwrap(), &g.parse("a^-1 a^3^b").unwrap())
            .unwrap();
        assert!(v.is_equal());
    }
}
