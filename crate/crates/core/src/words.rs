//! Free-group words in run-length form.
//!
//! A [`Word`] is a sequence of `(generator, exponent)` runs with arbitrary
//! precision exponents. Adjacent runs never share a generator and no exponent
//! is zero, so the representation of a group element is unique.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Upper bound on the number of runs produced by [`Word::pow`].
pub const MAX_POW_RUNS: usize = 1 << 20;

/// Generator labels of a free group (or of a presentation).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    lookup: HashMap<String, usize>,
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::input("alphabet must have rank >= 1"));
        }
        let mut lookup = HashMap::new();
        let mut owned = Vec::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            let n = n.as_ref();
            if !is_identifier(n) {
                return Err(Error::input(format!("invalid generator name {n:?}")));
            }
            if lookup.insert(n.to_string(), i).is_some() {
                return Err(Error::input(format!("duplicate generator name {n:?}")));
            }
            owned.push(n.to_string());
        }
        Ok(Alphabet {
            names: owned,
            lookup,
        })
    }

    /// `x, y` for rank 2, `x1, x2, ...` otherwise.
    pub fn standard(rank: usize) -> Self {
        let names: Vec<String> = match rank {
            1 => vec!["x".into()],
            2 => vec!["x".into(), "y".into()],
            3 => vec!["x".into(), "y".into(), "z".into()],
            _ => (1..=rank).map(|i| format!("x{i}")).collect(),
        };
        Alphabet::new(&names).expect("standard names are valid")
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.lookup.get(name).copied()
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A freely reduced word, stored as maximal runs.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    runs: Vec<(usize, BigInt)>,
}

impl Word {
    pub fn identity() -> Self {
        Word { runs: Vec::new() }
    }

    pub fn gen(index: usize) -> Self {
        Word {
            runs: vec![(index, BigInt::one())],
        }
    }

    pub fn gen_pow(index: usize, exp: impl Into<BigInt>) -> Self {
        let e = exp.into();
        if e.is_zero() {
            Word::identity()
        } else {
            Word {
                runs: vec![(index, e)],
            }
        }
    }

    /// Freely reduces an arbitrary run sequence, checking indices against `rank`.
    pub fn reduce<I, E>(raw: I, rank: usize) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, E)>,
        E: Into<BigInt>,
    {
        let mut w = Word::identity();
        for (g, e) in raw {
            if g >= rank {
                return Err(Error::input(format!(
                    "generator index {g} out of range for rank {rank}"
                )));
            }
            w.push_run(g, e.into());
        }
        Ok(w)
    }

    fn push_run(&mut self, g: usize, e: BigInt) {
        if e.is_zero() {
            return;
        }
        if let Some(last) = self.runs.last_mut() {
            if last.0 == g {
                last.1 += e;
                if last.1.is_zero() {
                    self.runs.pop();
                }
                return;
            }
        }
        self.runs.push((g, e));
    }

    pub fn runs(&self) -> &[(usize, BigInt)] {
        &self.runs
    }

    pub fn is_identity(&self) -> bool {
        self.runs.is_empty()
    }

    /// Number of letters of the flattened word.
    pub fn letter_len(&self) -> BigInt {
        self.runs.iter().map(|(_, e)| e.abs()).sum()
    }

    /// Largest generator index used, plus one (0 for the identity).
    pub fn min_rank(&self) -> usize {
        self.runs.iter().map(|(g, _)| g + 1).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.clone();
        for (g, e) in &other.runs {
            out.push_run(*g, e.clone());
        }
        out
    }

    pub fn inverse(&self) -> Word {
        Word {
            runs: self.runs.iter().rev().map(|(g, e)| (*g, -e)).collect(),
        }
    }

    /// Splits `self = c · core · c⁻¹` with `core` cyclically reduced and, when it
    /// has two or more runs, with first and last runs on different generators.
    pub fn cyclic_decomposition(&self) -> (Word, Word) {
        let mut lo = 0usize;
        let mut hi = self.runs.len();
        let mut conj = Word::identity();
        while hi - lo >= 2 && self.runs[lo].0 == self.runs[hi - 1].0 {
            let (g, e1) = &self.runs[lo];
            let e2 = &self.runs[hi - 1].1;
            if (e1 + e2).is_zero() {
                conj.push_run(*g, e1.clone());
                lo += 1;
                hi -= 1;
            } else {
                // g^e1 · mid · g^e2 = g^e1 · (mid · g^(e1+e2)) · g^-e1
                conj.push_run(*g, e1.clone());
                let mut core = Word {
                    runs: self.runs[lo + 1..hi - 1].to_vec(),
                };
                core.push_run(*g, e1 + e2);
                return (conj, core);
            }
        }
        (
            conj,
            Word {
                runs: self.runs[lo..hi].to_vec(),
            },
        )
    }

    /// The cyclically reduced core of the conjugacy class representative.
    pub fn cyclic_reduce(&self) -> Word {
        self.cyclic_decomposition().1
    }

    /// `self^k` for an arbitrary integer `k`; huge `k` is only cheap when the
    /// cyclic core is a single run.
    pub fn pow(&self, k: &BigInt) -> Result<Word> {
        if k.is_zero() || self.is_identity() {
            return Ok(Word::identity());
        }
        if k.is_negative() {
            return self.inverse().pow(&-k);
        }
        let (c, core) = self.cyclic_decomposition();
        let powered = if core.runs.len() == 1 {
            let (g, e) = &core.runs[0];
            Word::gen_pow(*g, e * k)
        } else {
            let reps = k
                .to_usize()
                .filter(|r| r.saturating_mul(core.runs.len()) <= MAX_POW_RUNS)
                .ok_or_else(|| {
                    Error::resource(format!(
                        "power {k} of a {}-run cyclic word exceeds {MAX_POW_RUNS} runs",
                        core.runs.len()
                    ))
                })?;
            let mut runs = Vec::with_capacity(reps * core.runs.len());
            for _ in 0..reps {
                runs.extend(core.runs.iter().cloned());
            }
            Word { runs }
        };
        Ok(c.mul(&powered).mul(&c.inverse()))
    }

    pub fn pow_i64(&self, k: i64) -> Result<Word> {
        self.pow(&BigInt::from(k))
    }

    /// Maximal `k` and root `v` with `cyclic_reduce(self) = v^k`.
    pub fn is_proper_power(&self) -> Result<(Word, BigInt)> {
        let core = self.cyclic_reduce();
        let n = core.runs.len();
        match n {
            0 => Err(Error::input("is_proper_power on the identity word")),
            1 => {
                let (g, e) = &core.runs[0];
                let sign = if e.is_negative() { -1 } else { 1 };
                Ok((Word::gen_pow(*g, sign), e.abs()))
            }
            _ => {
                for p in 1..=n {
                    if n % p != 0 {
                        continue;
                    }
                    if (0..n - p).all(|i| core.runs[i] == core.runs[i + p]) {
                        let root = Word {
                            runs: core.runs[..p].to_vec(),
                        };
                        return Ok((root, BigInt::from(n / p)));
                    }
                }
                unreachable!("p = n is always a period")
            }
        }
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> WordDisplay<'a> {
        WordDisplay {
            word: self,
            alphabet,
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.runs.is_empty() {
            return write!(f, "Word(1)");
        }
        write!(f, "Word(")?;
        for (i, (g, e)) in self.runs.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "g{g}^{e}")?;
        }
        write!(f, ")")
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    alphabet: &'a Alphabet,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.runs.is_empty() {
            return write!(f, "1");
        }
        for (i, (g, e)) in self.word.runs.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let name = if *g < self.alphabet.rank() {
                self.alphabet.name(*g).to_string()
            } else {
                format!("g{g}")
            };
            if e.is_one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}

/// `u⁻¹ v⁻¹ u v`.
pub fn commutator(u: &Word, v: &Word) -> Word {
    u.inverse().mul(&v.inverse()).mul(u).mul(v)
}

/// `u^v = v⁻¹ u v`.
pub fn conjugate(u: &Word, v: &Word) -> Word {
    v.inverse().mul(u).mul(v)
}

/// Left-normed commutator `[a1, a2, ..., ak] = [[a1, ..., a(k-1)], ak]`.
pub fn left_normed(items: &[Word]) -> Result<Word> {
    if items.len() < 2 {
        return Err(Error::input("left_normed needs at least two entries"));
    }
    Ok(items[1..]
        .iter()
        .fold(items[0].clone(), |acc, w| commutator(&acc, w)))
}

// ---------------------------------------------------------------------------
// literal syntax

/// Parses a word literal such as `[a, a^b]^(a^3^b * b^-1)`.
///
/// Grammar: products by `*` or juxtaposition, `u^n` integer powers, `u^v`
/// conjugation by a word, `[u, v, ...]` left-normed commutators, `(...)` or
/// `{...}` grouping, and `1` for the identity.
pub fn parse_word(src: &str, alphabet: &Alphabet) -> Result<Word> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        alphabet,
    };
    let w = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(w)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    alphabet: &'a Alphabet,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn starts_term(c: u8) -> bool {
        c.is_ascii_alphabetic() || c == b'_' || c == b'(' || c == b'[' || c == b'{' || c == b'1'
    }

    fn expr(&mut self) -> Result<Word> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.mul(&t);
                }
                Some(c) if Self::starts_term(c) => {
                    let t = self.term()?;
                    acc = acc.mul(&t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Word> {
        let mut base = self.atom()?;
        while self.peek() == Some(b'^') {
            self.pos += 1;
            if let Some(k) = self.try_integer()? {
                base = base.pow(&k)?;
            } else {
                let by = self.atom()?;
                base = conjugate(&base, &by);
            }
        }
        Ok(base)
    }

    /// An integer exponent, optionally wrapped in one pair of brackets.
    fn try_integer(&mut self) -> Result<Option<BigInt>> {
        let save = self.pos;
        let close = match self.peek() {
            Some(b'(') => Some(b')'),
            Some(b'{') => Some(b'}'),
            _ => None,
        };
        if close.is_some() {
            self.pos += 1;
        }
        let num_start = {
            self.skip_ws();
            self.pos
        };
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
            self.skip_ws();
        }
        let digits_start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = save;
            return Ok(None);
        }
        let text: String = std::str::from_utf8(&self.src[num_start..self.pos])
            .expect("ascii")
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect();
        if let Some(c) = close {
            if self.peek() != Some(c) {
                self.pos = save;
                return Ok(None);
            }
            self.pos += 1;
        }
        let k: BigInt = text.parse().map_err(|_| self.err("bad integer"))?;
        Ok(Some(k))
    }

    fn atom(&mut self) -> Result<Word> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let w = self.expr()?;
                self.expect(b')')?;
                Ok(w)
            }
            Some(b'{') => {
                self.pos += 1;
                let w = self.expr()?;
                self.expect(b'}')?;
                Ok(w)
            }
            Some(b'[') => {
                self.pos += 1;
                let mut items = vec![self.expr()?];
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    items.push(self.expr()?);
                }
                self.expect(b']')?;
                if items.len() < 2 {
                    return Err(self.err("commutator needs at least two entries"));
                }
                left_normed(&items)
            }
            Some(b'1') => {
                let start = self.pos;
                self.pos += 1;
                if self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos = start;
                    return Err(self.err("only the literal 1 may stand for the identity"));
                }
                Ok(Word::identity())
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match self.alphabet.index_of(name) {
                    Some(i) => Ok(Word::gen(i)),
                    None => {
                        self.pos = start;
                        Err(self.err(&format!("unknown generator {name:?}")))
                    }
                }
            }
            _ => Err(self.err("expected a generator, '1', '(' or '['")),
        }
    }
}

/// Exponent sum of each generator, i.e. the image in the abelianization.
pub fn exponent_sums(w: &Word, rank: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); rank];
    for (g, e) in w.runs() {
        out[*g] += e;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Alphabet {
        Alphabet::standard(2)
    }

    fn w(s: &str) -> Word {
        parse_word(s, &xy()).unwrap()
    }

    #[test]
    fn reduce_examples() {
        let r = Word::reduce([(0, 1), (0, -1), (1, 1)], 2).unwrap();
        assert_eq!(r, Word::gen(1));
        let r = Word::reduce(Vec::<(usize, i64)>::new(), 2).unwrap();
        assert!(r.is_identity());
        let r = Word::reduce([(0, 2), (0, 3)], 2).unwrap();
        assert_eq!(r, Word::gen_pow(0, 5));
        assert!(Word::reduce([(2, 1)], 2).is_err());
    }

    #[test]
    fn reduce_cascades() {
        // x y y^-1 x^-1 collapses completely
        let r = Word::reduce([(0, 1), (1, 1), (1, -1), (0, -1)], 2).unwrap();
        assert!(r.is_identity());
    }

    #[test]
    fn commutator_examples() {
        let x = Word::gen(0);
        let y = Word::gen(1);
        assert!(commutator(&x, &x).is_identity());
        let c = commutator(&x, &y);
        assert_eq!(c.letter_len(), BigInt::from(4));
        assert_eq!(c, w("x^-1 y^-1 x y"));
        let ln = left_normed(&[commutator(&y, &x), x.clone()]).unwrap();
        // [[y,x],x] = (x^-1 y^-1 x y) x^-1 (y^-1 x^-1 y x) x, already reduced
        assert_eq!(ln, w("x^-1 y^-1 x y x^-1 y^-1 x^-1 y x^2"));
        assert_eq!(ln.letter_len(), BigInt::from(10));
        assert_eq!(ln.runs().len(), 9);
        assert!(left_normed(&[x]).is_err());
    }

    #[test]
    fn parser_handles_conjugation_and_powers() {
        let ab = Alphabet::new(&["a", "b"]).unwrap();
        let lhs = parse_word("[a, a^b]^(a^3^b * b^-1)", &ab).unwrap();
        let a = Word::gen(0);
        let b = Word::gen(1);
        let inner = commutator(&a, &conjugate(&a, &b));
        let by = conjugate(&a.pow_i64(3).unwrap(), &b).mul(&b.inverse());
        assert_eq!(lhs, conjugate(&inner, &by));
        assert_eq!(parse_word("b^(-1)", &ab).unwrap(), b.inverse());
        assert_eq!(parse_word("a^{2} b^{ - 3 }", &ab).unwrap(), w_ab("a^2 b^-3"));
        assert_eq!(parse_word("1", &ab).unwrap(), Word::identity());
        assert!(parse_word("a^", &ab).is_err());
        assert!(parse_word("c", &ab).is_err());
        assert!(parse_word("[a]", &ab).is_err());
        assert!(parse_word("a )", &ab).is_err());
    }

    fn w_ab(s: &str) -> Word {
        parse_word(s, &Alphabet::new(&["a", "b"]).unwrap()).unwrap()
    }

    #[test]
    fn huge_powers_stay_run_length() {
        let k = BigInt::from(3).pow(40);
        let p = Word::gen(0).pow(&k).unwrap();
        assert_eq!(p.runs().len(), 1);
        assert_eq!(p.runs()[0].1, k);
        // conjugates of a single run power stay short
        let c = conjugate(&Word::gen(0), &Word::gen(1)).pow(&k).unwrap();
        assert_eq!(c.runs().len(), 3);
        assert!(w("x y").pow(&k).is_err());
    }

    #[test]
    fn proper_power_examples() {
        let xy3 = w("x y").pow_i64(3).unwrap();
        let (root, k) = xy3.is_proper_power().unwrap();
        assert_eq!(root, w("x y"));
        assert_eq!(k, BigInt::from(3));

        let ab = Alphabet::new(&["a", "b"]).unwrap();
        let rel = parse_word("b^-2 a b^2 b^-1 a^-3 b a^-1", &ab).unwrap();
        assert_eq!(rel.is_proper_power().unwrap().1, BigInt::one());

        let (root, k) = Word::gen(0).is_proper_power().unwrap();
        assert_eq!((root, k), (Word::gen(0), BigInt::one()));
        assert!(Word::identity().is_proper_power().is_err());
    }

    #[test]
    fn proper_power_sees_through_conjugation() {
        // x y x^2 y x is conjugate to (x^2 y)^2
        let (root, k) = w("x y x^2 y x").is_proper_power().unwrap();
        assert_eq!(k, BigInt::from(2));
        assert_eq!(root.letter_len(), BigInt::from(3));
        let (_, k) = w("x^6").is_proper_power().unwrap();
        assert_eq!(k, BigInt::from(6));
    }

    #[test]
    fn display_round_trips() {
        let a = xy();
        let word = w("x^-1 y^3 x");
        let text = word.display(&a).to_string();
        assert_eq!(text, "x^-1 y^3 x");
        assert_eq!(parse_word(&text, &a).unwrap(), word);
    }
}
