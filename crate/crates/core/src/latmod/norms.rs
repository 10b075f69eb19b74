//! Norm sequences of a 2×2 integer matrix with irrational eigenvalues and
//! the structured subset-product test for its tensor powers.
//!
//! For a base matrix with trace `τ`, determinant `δ = ±1` and eigenvalues
//! `α₁, α₂`, everything is computed from the power traces
//! `t_s = α₁^s + α₂^s` via `t_s = τ·t_{s−1} − δ·t_{s−2}`:
//!
//! * `M_l = (α₁^l − 1)(α₂^l − 1) = δ^l − t_l + 1`
//! * `N_s = (α₁^s + 1)(α₂^s + 1) = δ^s + t_s + 1`

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::exterior::{ResNilpStatus, ResNilpVerdict};
use super::matrix::{json_int, IntMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormSequences {
    pub trace: BigInt,
    pub det: BigInt,
    /// `t[s]` for `0 ≤ s ≤ L`.
    pub t: Vec<BigInt>,
    /// `m[l]` for `0 ≤ l ≤ L`; `m[0] = 0`.
    pub m: Vec<BigInt>,
    /// `n[s]` for `0 ≤ s ≤ L`; `n[0] = 4`.
    pub n: Vec<BigInt>,
}

impl NormSequences {
    pub fn max_index(&self) -> usize {
        self.t.len() - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormCheck {
    pub name: String,
    pub holds: bool,
    pub first_failure: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct NormReport {
    pub sequences: NormSequences,
    pub checks: Vec<NormCheck>,
    /// Whether `N_s | N_1` for every odd `s`; reported, never asserted.
    pub reverse_divisibility_holds: bool,
    pub reverse_divisibility_first_failure: Option<usize>,
}

impl NormReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let s = &self.sequences;
        let show = s.max_index().min(12);
        serde_json::json!({
            "trace": json_int(&s.trace),
            "det": json_int(&s.det),
            "max_index": s.max_index(),
            "t_head": s.t[..=show].iter().map(json_int).collect::<Vec<_>>(),
            "M_head": s.m[1..=show].iter().map(json_int).collect::<Vec<_>>(),
            "N_head": s.n[1..=show].iter().map(json_int).collect::<Vec<_>>(),
            "checks": self.checks.iter().map(|c| serde_json::json!({
                "name": c.name, "holds": c.holds, "first_failure": c.first_failure,
            })).collect::<Vec<_>>(),
            "reverse_divisibility_holds": self.reverse_divisibility_holds,
            "reverse_divisibility_first_failure": self.reverse_divisibility_first_failure,
        })
    }
}

fn check_2x2_unimodular(base: &IntMatrix) -> Result<(BigInt, BigInt)> {
    if base.rows() != 2 || base.cols() != 2 {
        return Err(Error::input("norm sequences need a 2x2 base matrix"));
    }
    let det = base.det()?;
    if !det.magnitude().is_one() {
        return Err(Error::input(format!("base matrix has determinant {det}, expected ±1")));
    }
    Ok((base.trace()?, det))
}

/// Power traces and the two norm sequences up to index `max_index`.
pub fn norm_sequences_of(base: &IntMatrix, max_index: usize) -> Result<NormSequences> {
    if max_index < 1 {
        return Err(Error::input("max index must be at least 1"));
    }
    let (trace, det) = check_2x2_unimodular(base)?;
    let mut t = vec![BigInt::from(2), trace.clone()];
    for s in 2..=max_index {
        let next = &trace * &t[s - 1] - &det * &t[s - 2];
        t.push(next);
    }
    t.truncate(max_index + 1);
    let mut m = Vec::with_capacity(max_index + 1);
    let mut n = Vec::with_capacity(max_index + 1);
    let mut det_pow = BigInt::one();
    for ts in &t {
        m.push(&det_pow - ts + 1);
        n.push(&det_pow + ts + 1);
        det_pow *= &det;
    }
    Ok(NormSequences { trace, det, t, m, n })
}

/// Norm sequences with the divisibility and size report:
/// `M_1 | M_l`, `N_1 | N_s` for odd `s`, `|M_l| ≥ |M_1|`, `|N_s| ≥ |N_1|`,
/// `N_s > 1` for even `s`, and every norm of absolute value at least 2.
pub fn norm_sequences(base: &IntMatrix, max_index: usize) -> Result<NormReport> {
    let seq = norm_sequences_of(base, max_index)?;
    let big_l = max_index;
    let m1 = seq.m[1].clone();
    let n1 = seq.n[1].clone();
    fn first(pred: &dyn Fn(usize) -> bool, mut range: impl Iterator<Item = usize>) -> Option<usize> {
        range.find(|&i| !pred(i))
    }
    let divides = |d: &BigInt, x: &BigInt| !d.is_zero() && x.is_multiple_of(d);

    let mut checks = Vec::new();
    let mut push = |name: String, failure: Option<usize>| {
        checks.push(NormCheck {
            name,
            holds: failure.is_none(),
            first_failure: failure,
        })
    };
    push(
        format!("M_1 = {m1} divides M_l for 1 <= l <= {big_l}"),
        first(&|l| divides(&m1, &seq.m[l]), 1..=big_l),
    );
    push(
        format!("N_1 = {n1} divides N_s for odd s <= {big_l}"),
        first(&|s| divides(&n1, &seq.n[s]), (1..=big_l).step_by(2)),
    );
    push(
        format!("|M_l| >= |M_1| = {} for 1 <= l <= {big_l}", m1.abs()),
        first(&|l| seq.m[l].abs() >= m1.abs(), 1..=big_l),
    );
    push(
        format!("|N_s| >= |N_1| = {} for 1 <= s <= {big_l}", n1.abs()),
        first(&|s| seq.n[s].abs() >= n1.abs(), 1..=big_l),
    );
    push(
        format!("N_s > 1 for even s <= {big_l}"),
        first(&|s| seq.n[s] > BigInt::one(), (2..=big_l).step_by(2)),
    );
    push(
        format!("|M_l| >= 2 and |N_l| >= 2 for 1 <= l <= {big_l}"),
        first(
            &|l| seq.m[l].abs() >= BigInt::from(2) && seq.n[l].abs() >= BigInt::from(2),
            1..=big_l,
        ),
    );

    let reverse_failure = (1..=big_l)
        .step_by(2)
        .find(|&s| !divides(&seq.n[s], &n1));
    Ok(NormReport {
        sequences: seq,
        checks,
        reverse_divisibility_holds: reverse_failure.is_none(),
        reverse_divisibility_first_failure: reverse_failure,
    })
}

fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Structured decision for `B = base^{⊗m} − I`.
///
/// The eigenvalues of `base^{⊗m}` are `±α^e` with `0 ≤ e ≤ m`. A subset of
/// eigenvalues of `B` with product `±1` stays a subset with product `±1`
/// under the Galois conjugation `α₁ ↔ α₂`; multiplying the two products
/// pairs every factor with its conjugate, so a product of integers drawn
/// from `{M_e, N_e : 1 ≤ e ≤ m} ∪ {0, 4}` would have to equal `1`. When every
/// `|M_e|` and `|N_e|` is at least 2 this is impossible.
pub fn structured_product_check(base: &IntMatrix, m: usize, max_index: usize) -> Result<ResNilpVerdict> {
    if m < 1 {
        return Err(Error::input("tensor exponent must be at least 1"));
    }
    if max_index < m {
        return Err(Error::input(format!("norm index {max_index} must be at least m = {m}")));
    }
    let (trace, det) = check_2x2_unimodular(base)?;
    let disc = &trace * &trace - BigInt::from(4) * &det;
    if is_perfect_square(&disc) {
        return Err(Error::input(format!(
            "characteristic polynomial has square discriminant {disc}; use the exterior route"
        )));
    }
    let seq = norm_sequences_of(base, max_index)?;
    let two = BigInt::from(2);
    let small: Vec<usize> = (1..=m)
        .filter(|&e| seq.m[e].abs() < two || seq.n[e].abs() < two)
        .collect();
    let mut notes = vec![format!(
        "norms used: M_e, N_e for 1 <= e <= {m}; min |M_e| = {}, min |N_e| = {}",
        (1..=m).map(|e| seq.m[e].abs()).min().expect("m >= 1"),
        (1..=m).map(|e| seq.n[e].abs()).min().expect("m >= 1"),
    )];
    if m % 2 == 0 {
        notes.push(
            "even tensor exponent: eigenvalues ±1 occur (exponent 0), contributing eigenvalues 0 \
             and -2 of B with norms 0 and 4; both handled explicitly"
                .into(),
        );
    }
    let status = if small.is_empty() {
        ResNilpStatus::ConditionHolds
    } else {
        notes.push(format!("norms of absolute value < 2 at e = {small:?}; escalate to exterior route"));
        ResNilpStatus::Undecided
    };
    Ok(ResNilpVerdict {
        status,
        route: "structured",
        certificates: Vec::new(),
        determinants: Vec::new(),
        notes,
    })
}
