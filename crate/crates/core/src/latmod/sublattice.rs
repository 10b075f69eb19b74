//! Image chains `im(B^k)` and unit-determinant invariant sublattices.
//!
//! For `M = Z^m` with `t` acting as `A` and `B = A − I`, the submodule
//! `M·Δ^k` is the lattice `im(B^k)`. A nonzero lattice `L` with `B·L = L`
//! lies in every `im(B^k)`, so it obstructs residual nilpotence; conversely
//! the intersection of the chain is such a lattice whenever it is nonzero.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::exterior::UnitSublattice;
use super::matrix::{json_int, IntMatrix};
use super::poly::{char_poly, IntPoly};
use super::snf::{kernel, Lattice};
use crate::error::{Error, Result};

/// Candidate budget for the bounded divisor search.
pub const DIVISOR_SEARCH_BUDGET: u64 = 500_000;

#[derive(Clone, Debug)]
pub struct ChainStep {
    pub k: usize,
    pub lattice: Lattice,
    /// `[im(B^{k−1}) : im(B^k)]` when the ranks agree.
    pub index_from_previous: Option<BigInt>,
}

#[derive(Clone, Debug)]
pub struct ImageChain {
    pub steps: Vec<ChainStep>,
    pub rank_stabilized_at: usize,
    pub unit_part: Option<UnitSublattice>,
}

impl ImageChain {
    pub fn last(&self) -> &Lattice {
        &self.steps.last().expect("chain has k = 0").lattice
    }

    pub fn indices(&self) -> Vec<Option<BigInt>> {
        self.steps.iter().skip(1).map(|s| s.index_from_previous.clone()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "ranks": self.steps.iter().map(|s| s.lattice.rank()).collect::<Vec<_>>(),
            "indices": self.indices().iter().map(|i| i.as_ref().map(json_int)).collect::<Vec<_>>(),
            "final_covolume": json_int(&self.last().covolume()),
            "rank_stabilized_at": self.rank_stabilized_at,
            "unit_part": self.unit_part.as_ref().map(UnitSublattice::to_json),
        })
    }
}

/// Hermite bases of `im(B^k)` for `0 ≤ k ≤ k_max`, the successive indices,
/// and a candidate unit part (a nonzero sublattice on which `B` is
/// bijective), verified to lie inside the last term of the chain.
pub fn stable_image_chain(b: &IntMatrix, k_max: usize) -> Result<ImageChain> {
    let n = b.require_square("stable_image_chain")?;
    let mut steps = vec![ChainStep {
        k: 0,
        lattice: Lattice::full(n),
        index_from_previous: None,
    }];
    for k in 1..=k_max {
        let prev = &steps[k - 1].lattice;
        let next = prev.image(b)?;
        let index = prev.index_of(&next);
        steps.push(ChainStep {
            k,
            lattice: next,
            index_from_previous: index,
        });
    }
    let final_rank = steps.last().unwrap().lattice.rank();
    let rank_stabilized_at = steps
        .iter()
        .position(|s| s.lattice.rank() == final_rank)
        .unwrap_or(0);
    let unit_part = find_unit_invariant_sublattice(b, n)?
        .found
        .filter(|u| steps.last().unwrap().lattice.contains_lattice(&u.lattice));
    Ok(ImageChain {
        steps,
        rank_stabilized_at,
        unit_part,
    })
}

#[derive(Clone, Debug)]
pub struct UnitSearch {
    pub found: Option<UnitSublattice>,
    pub char_poly: IntPoly,
    /// Highest factor degree examined.
    pub searched_degree: usize,
    /// True when every degree up to the matrix size was examined.
    pub exhaustive: bool,
}

/// Searches monic integer divisors `g` of `char_poly(B)` with `g(0) = ±1`, of
/// degree at most `degree_cap`, lowest degree first; returns the saturated
/// lattice `ker g(B)` for the first one found, checked to satisfy `B·L = L`.
pub fn find_unit_invariant_sublattice(b: &IntMatrix, degree_cap: usize) -> Result<UnitSearch> {
    let n = b.require_square("find_unit_invariant_sublattice")?;
    let chi = char_poly(b)?;
    let top = degree_cap.min(n);
    for d in 1..=top {
        for g in monic_unit_divisors(&chi, d)? {
            let lattice = kernel(&g.eval_matrix(b)?)?;
            let cand = UnitSublattice { factor: g, lattice };
            if cand.verify(b) {
                return Ok(UnitSearch {
                    found: Some(cand),
                    char_poly: chi,
                    searched_degree: d,
                    exhaustive: true,
                });
            }
        }
    }
    Ok(UnitSearch {
        found: None,
        char_poly: chi,
        searched_degree: top,
        exhaustive: top == n,
    })
}

fn divisors(v: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1u64;
    while i.saturating_mul(i) <= v {
        if v % i == 0 {
            small.push(i);
            if i != v / i {
                large.push(v / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Monic degree-`d` integer divisors of `chi` with constant term `±1`,
/// found by interpolation through `g(0) = ±1` and divisors of `chi` at
/// `d − 1` further integer points.
pub fn monic_unit_divisors(chi: &IntPoly, d: usize) -> Result<Vec<IntPoly>> {
    let n = chi.degree().unwrap_or(0);
    if d == 0 || d > n {
        return Ok(Vec::new());
    }
    if d == n {
        return Ok(if chi.constant().magnitude().is_one() {
            vec![chi.clone()]
        } else {
            Vec::new()
        });
    }
    // sample points with nonzero value, fewest divisors first
    let mut points: Vec<(usize, i64, Vec<u64>)> = Vec::new();
    for p in (1..=40i64).flat_map(|p| [p, -p]) {
        let v = chi.eval(&BigInt::from(p));
        if v.is_zero() {
            continue;
        }
        let Some(mag) = v.magnitude().to_u64().filter(|&m| m <= 1u64 << 44) else {
            continue;
        };
        let divs = divisors(mag);
        points.push((divs.len(), p, divs));
    }
    points.sort_by_key(|(c, p, _)| (*c, p.abs(), *p));
    if points.len() < d - 1 {
        return Err(Error::resource(
            "not enough small sample points for the divisor search",
        ));
    }
    points.truncate(d - 1);

    let budget: u64 = points
        .iter()
        .map(|(c, _, _)| 2 * *c as u64)
        .fold(2u64, |a, c| a.saturating_mul(c));
    if budget > DIVISOR_SEARCH_BUDGET {
        return Err(Error::resource(format!(
            "degree-{d} divisor search needs {budget} candidates (> {DIVISOR_SEARCH_BUDGET})"
        )));
    }

    let nodes: Vec<BigInt> = std::iter::once(BigInt::zero())
        .chain(points.iter().map(|(_, p, _)| BigInt::from(*p)))
        .collect();
    let lagrange = lagrange_basis(&nodes);
    let node_poly = nodes
        .iter()
        .fold(IntPoly::one(), |acc, q| acc.mul(&IntPoly::linear(q)));

    let value_choices: Vec<Vec<BigInt>> = points
        .iter()
        .map(|(_, _, divs)| {
            divs.iter()
                .flat_map(|&x| [BigInt::from(x), -BigInt::from(x)])
                .collect()
        })
        .collect();

    let mut found = Vec::new();
    let mut odometer = vec![0usize; value_choices.len()];
    for eps in [BigInt::one(), -BigInt::one()] {
        odometer.iter_mut().for_each(|o| *o = 0);
        loop {
            let mut values = vec![eps.clone()];
            values.extend(odometer.iter().zip(&value_choices).map(|(&i, c)| c[i].clone()));
            if let Some(g) = interpolate_monic(&node_poly, &lagrange, &values) {
                if g.divides(chi)? && !found.contains(&g) {
                    found.push(g);
                }
            }
            // advance
            let mut pos = 0;
            loop {
                if pos == odometer.len() {
                    break;
                }
                odometer[pos] += 1;
                if odometer[pos] < value_choices[pos].len() {
                    break;
                }
                odometer[pos] = 0;
                pos += 1;
            }
            if pos == odometer.len() {
                break;
            }
        }
    }
    Ok(found)
}

fn lagrange_basis(nodes: &[BigInt]) -> Vec<Vec<BigRational>> {
    let d = nodes.len();
    (0..d)
        .map(|j| {
            let mut poly = vec![BigRational::one()];
            let mut denom = BigInt::one();
            for (i, q) in nodes.iter().enumerate() {
                if i == j {
                    continue;
                }
                // multiply by (x - q)
                let mut next = vec![BigRational::zero(); poly.len() + 1];
                for (k, c) in poly.iter().enumerate() {
                    next[k + 1] += c;
                    next[k] -= c * BigRational::from_integer(q.clone());
                }
                poly = next;
                denom *= &nodes[j] - q;
            }
            let denom = BigRational::from_integer(denom);
            poly.into_iter().map(|c| c / &denom).collect()
        })
        .collect()
}

fn interpolate_monic(
    node_poly: &IntPoly,
    lagrange: &[Vec<BigRational>],
    values: &[BigInt],
) -> Option<IntPoly> {
    let d = values.len();
    let mut acc = vec![BigRational::zero(); d];
    for (basis, v) in lagrange.iter().zip(values) {
        if v.is_zero() {
            continue;
        }
        let vr = BigRational::from_integer(v.clone());
        for (a, c) in acc.iter_mut().zip(basis) {
            *a += c * &vr;
        }
    }
    let mut coeffs = node_poly.coeffs().to_vec();
    for (c, a) in coeffs.iter_mut().zip(&acc) {
        if !a.is_integer() {
            return None;
        }
        *c += a.to_integer();
    }
    Some(IntPoly::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn chain_on_reference_module() {
        let b = IntMatrix::from_i64(&[[-1, 1], [1, 2]]);
        let c = stable_image_chain(&b, 12).unwrap();
        assert!(c.steps.iter().all(|s| s.lattice.rank() == 2));
        assert!(c.indices().iter().all(|i| i == &Some(BigInt::from(3))));
        assert_eq!(c.last().covolume(), BigInt::from(3).pow(12));
        assert!(c.unit_part.is_none());
    }

    #[test]
    fn chain_finds_unit_part_of_diagonal() {
        let b = IntMatrix::from_i64(&[[1, 0], [0, 2]]);
        let c = stable_image_chain(&b, 6).unwrap();
        let u = c.unit_part.expect("e1 is fixed");
        assert_eq!(u.lattice.basis_rows(), vec![ints(&[1, 0])]);
        assert_eq!(u.factor, IntPoly::from_i64(&[-1, 1]));
    }

    #[test]
    fn chain_of_nilpotent_reaches_zero() {
        let b = IntMatrix::from_i64(&[[0, 1, 5], [0, 0, 1], [0, 0, 0]]);
        let c = stable_image_chain(&b, 4).unwrap();
        assert!(c.last().is_zero());
        assert!(c.unit_part.is_none());
    }

    #[test]
    fn unit_sublattice_examples() {
        let comp = IntMatrix::from_i64(&[[0, -1], [1, 3]]);
        let s = find_unit_invariant_sublattice(&comp, 2).unwrap();
        let u = s.found.unwrap();
        assert_eq!(u.lattice, Lattice::full(2));
        assert!(u.verify(&comp));

        let b = IntMatrix::from_i64(&[[-1, 1], [1, 2]]);
        let s = find_unit_invariant_sublattice(&b, 2).unwrap();
        assert!(s.found.is_none());
        assert!(s.exhaustive);
        assert_eq!(s.char_poly, IntPoly::from_i64(&[-3, -1, 1]));
    }

    #[test]
    fn divisor_search_finds_quadratic_factor() {
        // (x^2 - 3x + 1)(x - 5): the quadratic has unit constant term
        let chi = IntPoly::from_i64(&[1, -3, 1]).mul(&IntPoly::from_i64(&[-5, 1]));
        let found = monic_unit_divisors(&chi, 2).unwrap();
        assert_eq!(found, vec![IntPoly::from_i64(&[1, -3, 1])]);
        assert!(monic_unit_divisors(&chi, 1).unwrap().is_empty());
    }

    #[test]
    fn divisors_of_small_numbers() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
    }
}
