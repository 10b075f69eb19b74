//! Compound matrices and the exact subset-product test.
//!
//! The eigenvalues of `Λ^k(B)` are the products of the `k`-element index
//! subsets of eigenvalues of `B`, so `det(Λ^k(B) ∓ I) = 0` exactly when some
//! such product equals `±1`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::matrix::{json_int, IntMatrix};
use super::poly::IntPoly;
use super::snf::Lattice;
use crate::error::{Error, Result};

/// Default bound on the side length of compound matrices.
pub const DEFAULT_EXTERIOR_LIMIT: usize = 128;

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] != i + n - k) else {
            break;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
    out
}

/// `k`-th compound matrix: entry `(I, J)` is the minor on rows `I`, cols `J`.
pub fn exterior_power(b: &IntMatrix, k: usize, size_limit: usize) -> Result<IntMatrix> {
    let n = b.require_square("exterior_power")?;
    let side = binomial(n, k);
    if side > size_limit as u128 {
        return Err(Error::resource(format!(
            "exterior power of order {k} of a {n}x{n} matrix has side {side} > {size_limit}"
        )));
    }
    let sets = subsets(n, k);
    let s = sets.len();
    let mut out = IntMatrix::zeros(s, s);
    let mut minor = IntMatrix::zeros(k, k);
    for (i, rows) in sets.iter().enumerate() {
        for (j, cols) in sets.iter().enumerate() {
            for (a, &r) in rows.iter().enumerate() {
                for (c, &col) in cols.iter().enumerate() {
                    minor[(a, c)] = b[(r, col)].clone();
                }
            }
            out[(i, j)] = minor.det()?;
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ResNilpStatus {
    ConditionHolds,
    ViolationFound,
    /// The structured route could not conclude; the exterior route decides.
    Undecided,
}

/// A nonzero sublattice `L` with `B·L = L`, cut out by a monic integer factor
/// `g` of the characteristic polynomial with `g(0) = ±1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitSublattice {
    pub factor: IntPoly,
    pub lattice: Lattice,
}

impl UnitSublattice {
    /// Rechecks `g(0) = ±1`, `L ≠ 0` and `B·L = L`.
    pub fn verify(&self, b: &IntMatrix) -> bool {
        if self.lattice.is_zero() || !self.factor.constant().magnitude().is_one() {
            return false;
        }
        self.lattice
            .image(b)
            .is_ok_and(|img| img == self.lattice)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "factor": self.factor.to_string(),
            "basis": self.lattice.basis().to_json(),
            "rank": self.lattice.rank(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// `det(Λ^k(B) − sign·I) = 0`: some `k` eigenvalues multiply to `sign`.
    VanishingDeterminant { k: usize, sign: i8 },
    UnitSublattice(UnitSublattice),
}

impl Certificate {
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Certificate::VanishingDeterminant { k, sign } => serde_json::json!({
                "kind": "vanishing_determinant", "k": k, "sign": sign,
            }),
            Certificate::UnitSublattice(u) => {
                let mut v = u.to_json();
                v["kind"] = "unit_sublattice".into();
                v
            }
        }
    }
}

/// `det(Λ^k(B) − I)` and `det(Λ^k(B) + I)` for one `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetDeterminants {
    pub k: usize,
    pub minus: BigInt,
    pub plus: BigInt,
}

#[derive(Clone, Debug)]
pub struct ResNilpVerdict {
    pub status: ResNilpStatus,
    pub route: &'static str,
    pub certificates: Vec<Certificate>,
    pub determinants: Vec<SubsetDeterminants>,
    pub notes: Vec<String>,
}

impl ResNilpVerdict {
    pub fn holds(&self) -> bool {
        self.status == ResNilpStatus::ConditionHolds
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "status": self.status,
            "route": self.route,
            "certificates": self.certificates.iter().map(Certificate::to_json).collect::<Vec<_>>(),
            "determinants": self.determinants.iter().map(|d| serde_json::json!({
                "k": d.k, "det_minus_identity": json_int(&d.minus), "det_plus_identity": json_int(&d.plus),
            })).collect::<Vec<_>>(),
            "notes": self.notes,
        })
    }
}

/// Decides whether any nonempty collection of eigenvalues of `B` (with
/// multiplicity) multiplies to `±1`.
pub fn subset_product_check(b: &IntMatrix, size_limit: usize) -> Result<ResNilpVerdict> {
    let n = b.require_square("subset_product_check")?;
    if let Some(k) = (1..=n).find(|&k| binomial(n, k) > size_limit as u128) {
        return Err(Error::resource(format!(
            "compound of order {k} of a {n}x{n} matrix exceeds side limit {size_limit}"
        )));
    }
    let mut certificates = Vec::new();
    let mut determinants = Vec::new();
    for k in 1..=n {
        let c = exterior_power(b, k, size_limit)?;
        let minus = c.minus_scalar(&BigInt::one())?.det()?;
        let plus = c.minus_scalar(&-BigInt::one())?.det()?;
        if minus.is_zero() {
            certificates.push(Certificate::VanishingDeterminant { k, sign: 1 });
        }
        if plus.is_zero() {
            certificates.push(Certificate::VanishingDeterminant { k, sign: -1 });
        }
        determinants.push(SubsetDeterminants { k, minus, plus });
    }
    let status = if certificates.is_empty() {
        ResNilpStatus::ConditionHolds
    } else {
        ResNilpStatus::ViolationFound
    };
    Ok(ResNilpVerdict {
        status,
        route: "exterior",
        certificates,
        determinants,
        notes: Vec::new(),
    })
}

/// The exterior-route verdict, with a unit-determinant invariant sublattice
/// attached whenever a violation is found and such a sublattice exists.
pub fn subset_product_check_with_lattice(b: &IntMatrix, size_limit: usize) -> Result<ResNilpVerdict> {
    let mut v = subset_product_check(b, size_limit)?;
    if v.status == ResNilpStatus::ViolationFound {
        let n = b.rows();
        let search = super::sublattice::find_unit_invariant_sublattice(b, n)?;
        match search.found {
            Some(u) if u.verify(b) => v.certificates.push(Certificate::UnitSublattice(u)),
            Some(_) => v.notes.push("unit sublattice failed verification".into()),
            None => v.notes.push(
                "no invariant sublattice with unit determinant: the eigenvalue collection \
                 with product ±1 is not closed under conjugation"
                    .into(),
            ),
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_are_lexicographic() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(4, 2)[0], vec![0, 1]);
        assert_eq!(subsets(4, 2)[5], vec![2, 3]);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
        assert!(subsets(2, 3).is_empty());
        assert_eq!(binomial(8, 4), 70);
        assert_eq!(binomial(30, 15), 155_117_520);
    }

    #[test]
    fn exterior_examples() {
        let b = IntMatrix::from_i64(&[[-1, 1], [1, 2]]);
        assert_eq!(
            exterior_power(&b, 2, 128).unwrap(),
            IntMatrix::from_i64(&[[-3]])
        );
        assert_eq!(exterior_power(&b, 1, 128).unwrap(), b);
        assert_eq!(
            exterior_power(&IntMatrix::identity(3), 2, 128).unwrap(),
            IntMatrix::identity(3)
        );
        assert!(exterior_power(&IntMatrix::identity(16), 8, 128).is_err());
    }

    #[test]
    fn subset_products_on_reference_module() {
        let u = IntMatrix::from_i64(&[[0, 1], [1, 3]]);
        let v = subset_product_check(&u.minus_identity().unwrap(), 128).unwrap();
        assert_eq!(v.status, ResNilpStatus::ConditionHolds);
        let d1 = &v.determinants[0];
        assert_eq!((d1.minus.clone(), d1.plus.clone()), ((-3).into(), (-1).into()));
        let d2 = &v.determinants[1];
        assert_eq!((d2.minus.clone(), d2.plus.clone()), ((-4).into(), (-2).into()));
    }

    #[test]
    fn subset_products_detects_unit_pair() {
        let c = IntMatrix::from_i64(&[[0, -1], [1, 3]]);
        let v = subset_product_check(&c, 128).unwrap();
        assert_eq!(v.status, ResNilpStatus::ViolationFound);
        assert_eq!(
            v.certificates,
            vec![Certificate::VanishingDeterminant { k: 2, sign: 1 }]
        );
        let with = subset_product_check_with_lattice(&c, 128).unwrap();
        assert!(with
            .certificates
            .iter()
            .any(|c| matches!(c, Certificate::UnitSublattice(u) if u.lattice.rank() == 2)));
    }

    #[test]
    fn subset_products_on_zero_matrix() {
        let v = subset_product_check(&IntMatrix::zeros(3, 3), 128).unwrap();
        assert!(v.holds());
    }
}
