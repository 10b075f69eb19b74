//! Smith and Hermite normal forms, integer lattices and finitely generated
//! abelian groups.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// `P · A · Q = D` with `P`, `Q` unimodular and `D` diagonal, `d1 | d2 | ...`.
#[derive(Clone, Debug)]
pub struct Snf {
    /// Diagonal of `D`, length `min(rows, cols)`, nonnegative.
    pub diagonal: Vec<BigInt>,
    pub p: IntMatrix,
    pub q: IntMatrix,
    pub d: IntMatrix,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }

    /// Invariant factors as listed by the spec of each caller: `1`s are kept.
    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.diagonal
    }

    /// `P·A·Q = D` and `|det P| = |det Q| = 1`.
    pub fn verify(&self, a: &IntMatrix) -> bool {
        let Ok(pa) = self.p.mul(a) else { return false };
        let Ok(paq) = pa.mul(&self.q) else { return false };
        paq == self.d
            && self.p.det().is_ok_and(|d| d.abs().is_one())
            && self.q.det().is_ok_and(|d| d.abs().is_one())
    }
}

/// Smith normal form with transforms. The result is checked against the
/// input before it is returned.
pub fn smith_normal_form(a: &IntMatrix) -> Snf {
    let (r, c) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut p = IntMatrix::identity(r);
    let mut q = IntMatrix::identity(c);
    let n = r.min(c);

    'outer: for t in 0..n {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    if d[(i, j)].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break 'outer };
            d.swap_rows(t, bi);
            p.swap_rows(t, bi);
            d.swap_cols(t, bj);
            q.swap_cols(t, bj);

            let pivot = d[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..r {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let f = -(&d[(i, t)] / &pivot);
                d.add_row_multiple(i, t, &f);
                p.add_row_multiple(i, t, &f);
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..c {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let f = -(&d[(t, j)] / &pivot);
                d.add_col_multiple(j, t, &f);
                q.add_col_multiple(j, t, &f);
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..r)
                .flat_map(|i| (t + 1..c).map(move |j| (i, j)))
                .find(|&(i, j)| !d[(i, j)].is_multiple_of(&pivot));
            match bad {
                Some((i, _)) => {
                    d.add_row_multiple(t, i, &BigInt::one());
                    p.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            p.negate_row(t);
        }
    }

    let diagonal = (0..n).map(|i| d[(i, i)].clone()).collect();
    let snf = Snf { diagonal, p, q, d };
    assert!(snf.verify(a), "Smith normal form transforms failed verification");
    snf
}

/// Row-style Hermite normal form of the row span: positive pivots, entries
/// above each pivot reduced into `[0, pivot)`, zero rows removed.
pub fn hermite_rows(m: &IntMatrix) -> IntMatrix {
    let mut h = m.clone();
    let (rows, cols) = (h.rows(), h.cols());
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows {
                if !h[(i, col)].is_zero()
                    && best.is_none_or(|b| h[(i, col)].abs() < h[(b, col)].abs())
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            h.swap_rows(r, b);
            let pivot = h[(r, col)].clone();
            let mut clean = true;
            for i in r + 1..rows {
                if h[(i, col)].is_zero() {
                    continue;
                }
                let f = -(&h[(i, col)] / &pivot);
                h.add_row_multiple(i, r, &f);
                clean &= h[(i, col)].is_zero();
            }
            if clean {
                break;
            }
        }
        if h[(r, col)].is_zero() {
            continue;
        }
        if h[(r, col)].is_negative() {
            h.negate_row(r);
        }
        let pivot = h[(r, col)].clone();
        for i in 0..r {
            let f = -h[(i, col)].div_floor(&pivot);
            h.add_row_multiple(i, r, &f);
        }
        r += 1;
    }
    let kept: Vec<Vec<BigInt>> = (0..r).map(|i| h.row(i).to_vec()).collect();
    if kept.is_empty() {
        IntMatrix::zeros(0, cols)
    } else {
        IntMatrix::from_rows(&kept).expect("rectangular")
    }
}

/// A sublattice of `Z^dim`, stored as its Hermite basis (rows).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    basis: IntMatrix,
}

impl Lattice {
    pub fn from_generators(dim: usize, rows: &[Vec<BigInt>]) -> Result<Self> {
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::input("lattice generator has wrong length"));
        }
        if rows.is_empty() {
            return Ok(Self::zero(dim));
        }
        let m = IntMatrix::from_rows(rows)?;
        Ok(Lattice {
            dim,
            basis: hermite_rows(&m),
        })
    }

    pub fn zero(dim: usize) -> Self {
        Lattice {
            dim,
            basis: IntMatrix::zeros(0, dim),
        }
    }

    pub fn full(dim: usize) -> Self {
        Lattice {
            dim,
            basis: IntMatrix::identity(dim),
        }
    }

    /// Image lattice `B·Z^cols`, spanned by the columns of `b`.
    pub fn column_space(b: &IntMatrix) -> Self {
        Lattice {
            dim: b.rows(),
            basis: hermite_rows(&b.transpose()),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn basis_rows(&self) -> Vec<Vec<BigInt>> {
        self.basis.to_rows()
    }

    /// Membership by reduction against the echelon basis.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        if v.len() != self.dim {
            return false;
        }
        let mut v = v.to_vec();
        let mut col = 0;
        for i in 0..self.basis.rows() {
            let row = self.basis.row(i);
            let pc = row.iter().position(|x| !x.is_zero()).expect("nonzero row");
            if v[col..pc].iter().any(|x| !x.is_zero()) {
                return false;
            }
            let (qt, rem) = v[pc].div_rem(&row[pc]);
            if !rem.is_zero() {
                return false;
            }
            for (vj, rj) in v.iter_mut().zip(row).skip(pc) {
                *vj -= &qt * rj;
            }
            col = pc + 1;
        }
        v.iter().all(Zero::is_zero)
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        (0..other.basis.rows()).all(|i| self.contains(other.basis.row(i)))
    }

    /// `{ B v : v in self }`.
    pub fn image(&self, b: &IntMatrix) -> Result<Lattice> {
        if b.cols() != self.dim {
            return Err(Error::input("image: matrix width differs from lattice dimension"));
        }
        if self.is_zero() {
            return Ok(Lattice::zero(b.rows()));
        }
        let gens = self.basis.mul(&b.transpose())?;
        Lattice::from_generators(b.rows(), &gens.to_rows())
    }

    /// Product of the nonzero invariant factors of the basis: the covolume of
    /// the lattice inside its rational span's saturation.
    pub fn covolume(&self) -> BigInt {
        if self.is_zero() {
            return BigInt::one();
        }
        smith_normal_form(&self.basis)
            .diagonal
            .iter()
            .filter(|d| !d.is_zero())
            .product()
    }

    /// `[self : sub]` when `sub ⊆ self` has the same rank.
    pub fn index_of(&self, sub: &Lattice) -> Option<BigInt> {
        if sub.rank() != self.rank() || !self.contains_lattice(sub) {
            return None;
        }
        Some(sub.covolume() / self.covolume())
    }

    pub fn intersection(&self, other: &Lattice) -> Result<Lattice> {
        if self.dim != other.dim {
            return Err(Error::input("intersection of lattices of different dimension"));
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Lattice::zero(self.dim));
        }
        // z = (a, b) with a·B1 = b·B2
        let n1 = self.rank();
        let mut rows = self.basis.to_rows();
        rows.extend(other.basis.to_rows().into_iter().map(|r| r.into_iter().map(|x| -x).collect()));
        let stacked = IntMatrix::from_rows(&rows)?;
        let ker = kernel(&stacked.transpose())?;
        let mut gens = Vec::new();
        for z in ker.basis_rows() {
            let mut v = vec![BigInt::zero(); self.dim];
            for (i, zi) in z.iter().take(n1).enumerate() {
                for (vj, bj) in v.iter_mut().zip(self.basis.row(i)) {
                    *vj += zi * bj;
                }
            }
            gens.push(v);
        }
        Lattice::from_generators(self.dim, &gens)
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice(dim {}, basis {})", self.dim, self.basis)
    }
}

/// Saturated integer kernel `{ v : A v = 0 }`.
pub fn kernel(a: &IntMatrix) -> Result<Lattice> {
    let snf = smith_normal_form(a);
    let r = snf.rank();
    let cols: Vec<Vec<BigInt>> = (r..a.cols()).map(|j| snf.q.column(j)).collect();
    Lattice::from_generators(a.cols(), &cols)
}

/// Finitely generated abelian group `Z^free_rank ⊕ ⊕ Z/t_i`, `1 < t_1 | t_2 | ...`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    /// `Z^rows / im(A)`.
    pub fn cokernel(a: &IntMatrix) -> Self {
        let snf = smith_normal_form(a);
        let torsion: Vec<BigInt> = snf
            .diagonal
            .iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .cloned()
            .collect();
        AbelianGroup {
            free_rank: a.rows() - snf.rank(),
            torsion,
        }
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// Builds from an invariant list where `0` stands for a free summand and
    /// units are dropped; the list is re-normalized through SNF.
    pub fn from_invariants(list: &[BigInt]) -> Self {
        if list.is_empty() {
            return AbelianGroup::default();
        }
        AbelianGroup::cokernel(&IntMatrix::diagonal(list))
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        let mut list: Vec<BigInt> = vec![BigInt::zero(); self.free_rank + other.free_rank];
        list.extend(self.torsion.iter().cloned());
        list.extend(other.torsion.iter().cloned());
        AbelianGroup::from_invariants(&list)
    }

    /// `0` for each free summand, then the torsion coefficients.
    pub fn invariant_list(&self) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.free_rank];
        v.extend(self.torsion.iter().cloned());
        v
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn snf_examples() {
        let b = IntMatrix::from_i64(&[[-1, 1], [1, 2]]);
        let s = smith_normal_form(&b);
        assert_eq!(s.diagonal, ints(&[1, 3]));
        let z = smith_normal_form(&IntMatrix::zeros(2, 3));
        assert_eq!(z.diagonal, ints(&[0, 0]));
        let s = smith_normal_form(&IntMatrix::from_i64(&[[-2]]));
        assert_eq!(s.diagonal, ints(&[2]));
        // classic: diag(2, 3) is not in SNF; result is diag(1, 6)
        let s = smith_normal_form(&IntMatrix::from_i64(&[[2, 0], [0, 3]]));
        assert_eq!(s.diagonal, ints(&[1, 6]));
    }

    #[test]
    fn snf_rectangular() {
        let a = IntMatrix::from_i64(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]);
        assert_eq!(smith_normal_form(&a).diagonal, ints(&[2, 6, 12]));
        let t = IntMatrix::from_i64(&[[1, 2, 3], [4, 5, 6]]);
        assert_eq!(smith_normal_form(&t).diagonal, ints(&[1, 3]));
    }

    #[test]
    fn hermite_and_membership() {
        let l = Lattice::column_space(&IntMatrix::from_i64(&[[-1, 1], [1, 2]]));
        assert_eq!(l.rank(), 2);
        assert_eq!(l.covolume(), BigInt::from(3));
        assert!(l.contains(&ints(&[0, 3])));
        assert!(!l.contains(&ints(&[1, 0])));
        // (U-I)^2 (5,-1) = (9, 0)
        let b2 = IntMatrix::from_i64(&[[-1, 1], [1, 2]]).pow(2).unwrap();
        assert_eq!(b2.mul_vec(&ints(&[5, -1])), ints(&[9, 0]));
        assert!(Lattice::column_space(&b2).contains(&ints(&[9, 0])));
        assert!(!Lattice::column_space(&b2).contains(&ints(&[3, 0])));
    }

    #[test]
    fn kernel_and_intersection() {
        let a = IntMatrix::from_i64(&[[1, 2, 3]]);
        let k = kernel(&a).unwrap();
        assert_eq!(k.rank(), 2);
        assert!(k.contains(&ints(&[1, 1, -1])));
        assert!(!k.contains(&ints(&[1, 0, 0])));

        let l1 = Lattice::from_generators(2, &[ints(&[2, 0]), ints(&[0, 1])]).unwrap();
        let l2 = Lattice::from_generators(2, &[ints(&[3, 0]), ints(&[0, 2])]).unwrap();
        let i = l1.intersection(&l2).unwrap();
        assert_eq!(i, Lattice::from_generators(2, &[ints(&[6, 0]), ints(&[0, 2])]).unwrap());
    }

    #[test]
    fn abelian_group_rendering() {
        let g = AbelianGroup::cokernel(&IntMatrix::from_i64(&[[-1, 1], [1, 2]]));
        assert_eq!(g.to_string(), "Z/3");
        let h1 = AbelianGroup::free(1).direct_sum(&g);
        assert_eq!(h1.invariant_list(), ints(&[0, 3]));
        assert_eq!(h1.to_string(), "Z + Z/3");
        assert_eq!(AbelianGroup::cokernel(&IntMatrix::zeros(2, 2)).to_string(), "Z^2");
    }
}
