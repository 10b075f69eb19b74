//! Finite lower central series terms `W_n = γ_n(G)` of `G = F ⋊_φ Z`,
//! computed as subgroups of `F/γ_c(F)`.
//!
//! Correctness rests on one containment: `γ_n(G) ⊇ γ_n(F) ⊇ γ_c(F)` for
//! `n ≤ c`. Membership in `γ_n(G)` is therefore decided exactly in the
//! quotient `F/γ_c(F)`, which the Magnus map embeds into series truncated
//! above degree `c − 1`.
//!
//! A subgroup is held as an echelon sequence `h_1, …, h_m` of series with
//! strictly increasing leading positions (degree-major, then lexicographic)
//! and positive leading coefficients. Lowest-degree parts add under
//! multiplication, so `g ↦ h^{-q}·g` clears the leading coefficient of `g`
//! without touching earlier positions. Once the sequence is closed under
//! `φ^{±1}`, conjugation by the fiber generators and the commutators
//! `[h_j, h_i^{±1}]`, every element of the generated subgroup has the form
//! `h_1^{e_1}⋯h_m^{e_m}` and sifting decides membership.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fbc::FbcGroup;
use crate::latmod::{mapping_torus_homology, AbelianGroup, IntMatrix, Lattice};
use crate::liemod::{hall_basis, Bracket};
use crate::magnus::{binomials, expand, Monomial, TruncSeries, Weight};
use crate::words::{commutator, left_normed, Word};

/// Default class cap `c`.
pub const DEFAULT_CLASS_CAP: usize = 7;

/// Provenance words longer than this are dropped.
pub const PROVENANCE_LIMIT: usize = 256;

/// Per-element coefficient budget for the engine series.
pub const MAX_SERIES_COEFFICIENTS: usize = 1 << 18;

#[derive(Clone, Debug)]
pub struct EngineConfig {
    pub group: FbcGroup,
    /// Compute `W_n` for `2 ≤ n ≤ c`; series are truncated above `c − 1`.
    pub class_cap: usize,
}

impl EngineConfig {
    pub fn new(group: FbcGroup, class_cap: usize) -> Result<Self> {
        if class_cap < 3 {
            return Err(Error::input(format!("class cap must be at least 3, got {class_cap}")));
        }
        let r = group.rank();
        let mut total = 0usize;
        let mut size = 1usize;
        for _ in 0..class_cap {
            total = total.saturating_add(size);
            size = size.saturating_mul(r);
        }
        if total > MAX_SERIES_COEFFICIENTS {
            return Err(Error::resource(format!(
                "rank {r} with class cap {class_cap} needs {total} coefficients per element"
            )));
        }
        Ok(EngineConfig { group, class_cap })
    }

    pub fn series_cap(&self) -> usize {
        self.class_cap - 1
    }
}

/// Leading position: degree, then index of the monomial within its block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position {
    pub degree: usize,
    pub index: usize,
}

#[derive(Clone, Debug)]
pub struct BasisElement {
    pub series: TruncSeries,
    pub provenance: Option<Word>,
    pub position: Position,
    /// Positive.
    pub coefficient: BigInt,
    inverse: TruncSeries,
    /// `(s − 1)^k` for `k = 1, 2, …` until it vanishes.
    aug_powers: Vec<TruncSeries>,
}

impl BasisElement {
    fn new(series: TruncSeries, provenance: Option<Word>) -> Result<Self> {
        let (degree, index, c) = series
            .leading()
            .ok_or_else(|| Error::input("identity cannot be a basis element"))?;
        let position = Position { degree, index };
        let coefficient = c.clone();
        debug_assert!(coefficient.is_positive());
        let a = series.minus_one()?;
        let mut aug_powers = vec![a.clone()];
        loop {
            let next = aug_powers.last().expect("nonempty").mul(&a)?;
            if next.is_zero() {
                break;
            }
            aug_powers.push(next);
        }
        let inverse = power_from_table(&series, &aug_powers, &-BigInt::one())?;
        Ok(BasisElement {
            series,
            provenance,
            position,
            coefficient,
            inverse,
            aug_powers,
        })
    }

    pub fn pow(&self, q: &BigInt) -> Result<TruncSeries> {
        power_from_table(&self.series, &self.aug_powers, q)
    }
}

/// `s^q = Σ_k C(q, k)(s − 1)^k` from cached powers of `s − 1`.
fn power_from_table(s: &TruncSeries, aug_powers: &[TruncSeries], q: &BigInt) -> Result<TruncSeries> {
    let coeffs = binomials(q, aug_powers.len());
    let mut out = TruncSeries::one(s.rank(), s.cap())?;
    for (c, a) in coeffs.iter().skip(1).zip(aug_powers) {
        if !c.is_zero() {
            out = out.add(&a.scale(c))?;
        }
    }
    Ok(out)
}

/// Outcome of sifting `g` through a basis: `g = Π h_k^{e_k} · residue`,
/// with the product in increasing position order.
#[derive(Clone, Debug)]
pub struct Sifted {
    pub exponents: Vec<BigInt>,
    pub residue: TruncSeries,
}

impl Sifted {
    pub fn is_member(&self) -> bool {
        self.residue.is_one()
    }
}

#[derive(Clone, Debug)]
pub struct SiftedBasis {
    rank: usize,
    cap: usize,
    elements: Vec<BasisElement>,
}

fn combine_provenance(parts: &[(&Option<Word>, BigInt)]) -> Option<Word> {
    let mut out = Word::identity();
    for (w, e) in parts {
        let w = (*w).as_ref()?;
        if e.abs() > BigInt::from(PROVENANCE_LIMIT) {
            return None;
        }
        out = out.mul(&w.pow(e).ok()?);
    }
    (out.letter_len() <= BigInt::from(PROVENANCE_LIMIT)).then_some(out)
}

fn short(w: Word) -> Option<Word> {
    (w.letter_len() <= BigInt::from(PROVENANCE_LIMIT)).then_some(w)
}

impl SiftedBasis {
    pub fn new(rank: usize, cap: usize) -> Self {
        SiftedBasis {
            rank,
            cap,
            elements: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn positions(&self) -> Vec<Position> {
        self.elements.iter().map(|e| e.position).collect()
    }

    pub fn sift(&self, g: &TruncSeries) -> Result<Sifted> {
        let mut g = g.clone();
        let mut exponents = vec![BigInt::zero(); self.elements.len()];
        let mut last: Option<Position> = None;
        while let Some((degree, index, c)) = g.leading() {
            let pos = Position { degree, index };
            assert!(last.is_none_or(|l| l < pos), "echelon invariant violated during sifting");
            last = Some(pos);
            let Ok(k) = self.elements.binary_search_by(|e| e.position.cmp(&pos)) else {
                break;
            };
            let h = &self.elements[k];
            let (q, rem) = c.div_rem(&h.coefficient);
            if !rem.is_zero() {
                break;
            }
            g = h.pow(&-&q)?.mul(&g)?;
            exponents[k] = q;
        }
        Ok(Sifted {
            exponents,
            residue: g,
        })
    }

    pub fn contains(&self, g: &TruncSeries) -> Result<bool> {
        Ok(self.sift(g)?.is_member())
    }

    /// Adds `g` to the generated subgroup; returns whether the basis changed.
    pub fn insert(&mut self, g: TruncSeries, provenance: Option<Word>) -> Result<bool> {
        if g.rank() != self.rank || g.cap() != self.cap {
            return Err(Error::input("series shape differs from the basis"));
        }
        let mut changed = false;
        let mut pending = vec![(g, provenance)];
        while let Some((mut g, mut prov)) = pending.pop() {
            let mut last: Option<Position> = None;
            while let Some((degree, index, c)) = g.leading() {
                let pos = Position { degree, index };
                assert!(last.is_none_or(|l| l < pos), "echelon invariant violated during insertion");
                last = Some(pos);
                match self.elements.binary_search_by(|e| e.position.cmp(&pos)) {
                    Err(at) => {
                        if c.is_negative() {
                            g = g.inverse()?;
                            prov = prov.map(|w| w.inverse());
                        }
                        self.elements.insert(at, BasisElement::new(g, prov)?);
                        changed = true;
                        break;
                    }
                    Ok(k) => {
                        let h = &self.elements[k];
                        let c = c.clone();
                        let (q, rem) = c.div_rem(&h.coefficient);
                        if rem.is_zero() {
                            g = h.pow(&-&q)?.mul(&g)?;
                            prov = combine_provenance(&[(&h.provenance, -q), (&prov, BigInt::one())]);
                            continue;
                        }
                        // u·c_h + v·c = d = gcd, so h^u g^v has leading coefficient d.
                        let e = h.coefficient.extended_gcd(&c);
                        let (d, u, v) = (e.gcd, e.x, e.y);
                        debug_assert!(d < h.coefficient);
                        let combined = h.pow(&u)?.mul(&g.pow(&v)?)?;
                        let combined_prov =
                            combine_provenance(&[(&h.provenance, u), (&prov, v)]);
                        let old = std::mem::replace(
                            &mut self.elements[k],
                            BasisElement::new(combined, combined_prov)?,
                        );
                        debug_assert_eq!(self.elements[k].coefficient, d);
                        debug_assert_eq!(self.elements[k].position, pos);
                        pending.push((old.series, old.provenance));
                        pending.push((g, prov));
                        changed = true;
                        break;
                    }
                }
            }
        }
        if changed {
            self.reduce()?;
        }
        Ok(changed)
    }

    /// Brings each element's coefficient at every later pivot into
    /// `[0, c_k)` by right multiplication with `h_k^{-q}`, as in Hermite
    /// normal form. Only positions after the pivot `k` move, so processing
    /// pivots in increasing order is final.
    fn reduce(&mut self) -> Result<()> {
        for j in (0..self.elements.len()).rev() {
            let mut cur = self.elements[j].series.clone();
            let mut prov = self.elements[j].provenance.clone();
            let mut touched = false;
            for k in j + 1..self.elements.len() {
                let hk = &self.elements[k];
                let c = &cur.block(hk.position.degree)[hk.position.index];
                let q = c.div_floor(&hk.coefficient);
                if !q.is_zero() {
                    cur = cur.mul(&hk.pow(&-&q)?)?;
                    prov = combine_provenance(&[(&prov, BigInt::one()), (&hk.provenance, -q)]);
                    touched = true;
                }
            }
            if touched {
                let e = BasisElement::new(cur, prov)?;
                debug_assert_eq!(e.position, self.elements[j].position);
                self.elements[j] = e;
            }
        }
        Ok(())
    }

    /// Lattice spanned by the degree-`d` blocks of the elements leading in
    /// degree `d`.
    pub fn leading_lattice(&self, degree: usize) -> Result<Lattice> {
        let dim = self.rank.pow(degree as u32);
        let rows: Vec<Vec<BigInt>> = self
            .elements
            .iter()
            .filter(|e| e.position.degree == degree)
            .map(|e| e.series.block(degree).to_vec())
            .collect();
        Lattice::from_generators(dim, &rows)
    }
}

/// Fixed-point statistics of one closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureStats {
    pub passes: usize,
    pub candidates_sifted: usize,
    pub basis_size: usize,
}

/// Series-level action data shared by all closures.
#[derive(Clone, Debug)]
struct Action {
    rank: usize,
    cap: usize,
    gens: Vec<TruncSeries>,
    gen_inverses: Vec<TruncSeries>,
    phi_images: Vec<TruncSeries>,
    phi_inverse_images: Vec<TruncSeries>,
}

#[derive(Clone, Copy, Debug)]
enum Task {
    Phi(usize),
    PhiInverse(usize),
    /// Conjugation by `x_g^{sign}`.
    Conjugate(usize, usize, bool),
    /// `[h_j, h_i]` or `[h_j, h_i⁻¹]` with `i < j`.
    Commutator(usize, usize, bool),
}

impl Action {
    fn new(group: &FbcGroup, cap: usize) -> Result<Self> {
        let rank = group.rank();
        let phi = group.phi();
        let ex = |w: &Word| expand(w, rank, cap);
        Ok(Action {
            rank,
            cap,
            gens: (0..rank).map(|i| ex(&Word::gen(i))).collect::<Result<_>>()?,
            gen_inverses: (0..rank)
                .map(|i| ex(&Word::gen_pow(i, -1)))
                .collect::<Result<_>>()?,
            phi_images: phi.images().iter().map(ex).collect::<Result<_>>()?,
            phi_inverse_images: phi.inverse_images().iter().map(ex).collect::<Result<_>>()?,
        })
    }

    fn tasks(&self, m: usize) -> Vec<Task> {
        let mut tasks = Vec::new();
        for k in 0..m {
            tasks.push(Task::Phi(k));
            tasks.push(Task::PhiInverse(k));
            for g in 0..self.rank {
                tasks.push(Task::Conjugate(k, g, true));
                tasks.push(Task::Conjugate(k, g, false));
            }
        }
        for j in 0..m {
            for i in 0..j {
                tasks.push(Task::Commutator(j, i, false));
                tasks.push(Task::Commutator(j, i, true));
            }
        }
        tasks
    }

    fn run(&self, task: Task, elems: &[BasisElement], group: &FbcGroup) -> Result<(TruncSeries, Option<Word>)> {
        let phi = group.phi();
        Ok(match task {
            Task::Phi(k) => {
                let e = &elems[k];
                let s = e.series.substitute_series(&self.phi_images)?;
                let w = e.provenance.as_ref().and_then(|w| phi.apply(w).ok()).and_then(short);
                (s, w)
            }
            Task::PhiInverse(k) => {
                let e = &elems[k];
                let s = e.series.substitute_series(&self.phi_inverse_images)?;
                let w = e
                    .provenance
                    .as_ref()
                    .and_then(|w| phi.apply_inverse(w).ok())
                    .and_then(short);
                (s, w)
            }
            Task::Conjugate(k, g, positive) => {
                let e = &elems[k];
                let (by, by_inv, x) = if positive {
                    (&self.gens[g], &self.gen_inverses[g], Word::gen(g))
                } else {
                    (&self.gen_inverses[g], &self.gens[g], Word::gen_pow(g, -1))
                };
                let s = by_inv.mul(&e.series)?.mul(by)?;
                let w = e
                    .provenance
                    .as_ref()
                    .and_then(|w| short(x.inverse().mul(w).mul(&x)));
                (s, w)
            }
            Task::Commutator(j, i, invert) => {
                let (a, b) = (&elems[j], &elems[i]);
                let (b_s, b_inv) = if invert {
                    (&b.inverse, &b.series)
                } else {
                    (&b.series, &b.inverse)
                };
                let s = a.inverse.mul(b_inv)?.mul(&a.series)?.mul(b_s)?;
                let w = match (&a.provenance, &b.provenance) {
                    (Some(u), Some(v)) => {
                        let v = if invert { v.inverse() } else { v.clone() };
                        short(commutator(u, &v))
                    }
                    _ => None,
                };
                (s, w)
            }
        })
    }

    /// Closes `basis` under `φ^{±1}`, fiber conjugation and internal
    /// commutators. A pass that changes nothing is the closure certificate.
    fn close(&self, basis: &mut SiftedBasis, group: &FbcGroup) -> Result<ClosureStats> {
        let mut stats = ClosureStats {
            passes: 0,
            candidates_sifted: 0,
            basis_size: 0,
        };
        loop {
            stats.passes += 1;
            let snapshot = basis.elements.clone();
            let candidates: Vec<Result<(TruncSeries, Option<Word>)>> = self
                .tasks(snapshot.len())
                .into_par_iter()
                .map(|t| self.run(t, &snapshot, group))
                .collect();
            let mut changed = false;
            for cand in candidates {
                let (s, w) = cand?;
                stats.candidates_sifted += 1;
                changed |= basis.insert(s, w)?;
            }
            if !changed {
                break;
            }
        }
        stats.basis_size = basis.len();
        Ok(stats)
    }

    /// Recomputes every closure candidate of a finished basis and sifts it.
    fn certify(&self, basis: &SiftedBasis, group: &FbcGroup) -> Result<ClosureCertificate> {
        let elems = &basis.elements;
        let results: Vec<Result<(Task, bool)>> = self
            .tasks(elems.len())
            .into_par_iter()
            .map(|t| {
                let (s, _) = self.run(t, elems, group)?;
                Ok((t, basis.contains(&s)?))
            })
            .collect();
        let mut cert = ClosureCertificate {
            phi_stable: true,
            conjugation_stable: true,
            commutator_stable: true,
            checked: 0,
        };
        for r in results {
            let (t, ok) = r?;
            cert.checked += 1;
            match t {
                Task::Phi(_) | Task::PhiInverse(_) => cert.phi_stable &= ok,
                Task::Conjugate(..) => cert.conjugation_stable &= ok,
                Task::Commutator(..) => cert.commutator_stable &= ok,
            }
        }
        Ok(cert)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureCertificate {
    pub phi_stable: bool,
    pub conjugation_stable: bool,
    pub commutator_stable: bool,
    pub checked: usize,
}

impl ClosureCertificate {
    pub fn holds(&self) -> bool {
        self.phi_stable && self.conjugation_stable && self.commutator_stable
    }
}

/// Invariant factors of `W_n/W_{n+1}`, `0` for free summands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedInvariants {
    pub n: usize,
    pub group: AbelianGroup,
    /// Layer-by-layer comparison of the leading lattices: the order (finite
    /// case) or free rank (infinite case) agrees with the presentation.
    pub layer_check: bool,
}

impl GradedInvariants {
    pub fn invariants(&self) -> Vec<BigInt> {
        self.group.invariant_list()
    }
}

#[derive(Clone, Debug)]
pub struct GammaOmegaReport {
    pub candidate: Word,
    /// `(n, candidate ∈ W_n)`.
    pub candidate_membership: Vec<(usize, bool)>,
    pub closure_size: usize,
    /// `(n, normal φ-closure of the candidate ⊆ W_n)`.
    pub closure_contained: Vec<(usize, bool)>,
    pub non_member: Word,
    pub non_member_excluded: bool,
    pub h2: AbelianGroup,
    pub h2_expected: Option<AbelianGroup>,
}

impl GammaOmegaReport {
    pub fn all_pass(&self) -> bool {
        self.candidate_membership.iter().all(|(_, b)| *b)
            && self.closure_contained.iter().all(|(_, b)| *b)
            && self.non_member_excluded
            && self.h2_expected.as_ref().is_none_or(|e| *e == self.h2)
    }
}

/// `W_2, …, W_c` for a free-by-cyclic group.
#[derive(Clone, Debug)]
pub struct Engine {
    config: EngineConfig,
    action: Action,
    bases: Vec<SiftedBasis>,
    stats: Vec<ClosureStats>,
}

impl Engine {
    pub fn build(config: EngineConfig) -> Result<Engine> {
        let cap = config.series_cap();
        let group = &config.group;
        let rank = group.rank();
        let action = Action::new(group, cap)?;
        let mut bases = Vec::new();
        let mut stats = Vec::new();

        let mut seeds: Vec<(Option<Word>, TruncSeries)> = Vec::new();
        for i in 0..rank {
            for j in i + 1..rank {
                let w = commutator(&Word::gen(i), &Word::gen(j));
                seeds.push((short(w.clone()), expand(&w, rank, cap)?));
            }
        }
        for i in 0..rank {
            let w = Word::gen_pow(i, -1).mul(&group.phi().images()[i]);
            seeds.push((short(w.clone()), expand(&w, rank, cap)?));
        }
        for _n in 2..=config.class_cap {
            let mut basis = SiftedBasis::new(rank, cap);
            for (w, s) in seeds.drain(..) {
                basis.insert(s, w)?;
            }
            stats.push(action.close(&mut basis, group)?);
            // [g, x_i] and g⁻¹φ(g) seed the next term.
            for e in basis.elements() {
                for i in 0..rank {
                    let s = e.inverse.mul(&action.gen_inverses[i])?.mul(&e.series)?.mul(&action.gens[i])?;
                    let w = e.provenance.as_ref().and_then(|w| short(commutator(w, &Word::gen(i))));
                    seeds.push((w, s));
                }
                let s = e.inverse.mul(&e.series.substitute_series(&action.phi_images)?)?;
                let w = e
                    .provenance
                    .as_ref()
                    .and_then(|w| group.phi().apply(w).ok().map(|p| w.inverse().mul(&p)))
                    .and_then(short);
                seeds.push((w, s));
            }
            bases.push(basis);
        }
        Ok(Engine {
            config,
            action,
            bases,
            stats,
        })
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn class_cap(&self) -> usize {
        self.config.class_cap
    }

    pub fn rank(&self) -> usize {
        self.action.rank
    }

    pub fn series_cap(&self) -> usize {
        self.action.cap
    }

    pub fn stats(&self) -> &[ClosureStats] {
        &self.stats
    }

    fn check_n(&self, n: usize) -> Result<()> {
        if !(2..=self.class_cap()).contains(&n) {
            return Err(Error::input(format!(
                "n = {n} outside 2..={} for this engine",
                self.class_cap()
            )));
        }
        Ok(())
    }

    /// `W_n` for `2 ≤ n ≤ c`.
    pub fn basis(&self, n: usize) -> Result<&SiftedBasis> {
        self.check_n(n)?;
        Ok(&self.bases[n - 2])
    }

    pub fn expand(&self, w: &Word) -> Result<TruncSeries> {
        expand(w, self.rank(), self.series_cap())
    }

    /// Exact membership of a fiber word in `γ_n(G)`.
    pub fn member(&self, w: &Word, n: usize) -> Result<bool> {
        self.basis(n)?.contains(&self.expand(w)?)
    }

    /// Closure certificates for every stored basis, recomputed from scratch.
    pub fn closure_certificates(&self) -> Result<Vec<(usize, ClosureCertificate)>> {
        let group = &self.config.group;
        self.bases
            .iter()
            .enumerate()
            .map(|(i, b)| Ok((i + 2, self.action.certify(b, group)?)))
            .collect()
    }

    /// `(n, W_{n+1} ⊆ W_n)` for `2 ≤ n < c`.
    pub fn tower_check(&self) -> Result<Vec<(usize, bool)>> {
        let mut out = Vec::new();
        for n in 2..self.class_cap() {
            let (big, small) = (&self.bases[n - 2], &self.bases[n - 1]);
            let mut ok = true;
            for e in small.elements() {
                ok &= big.contains(&e.series)?;
            }
            out.push((n, ok));
        }
        Ok(out)
    }

    /// `(n, every degree-n Hall bracket, as a group commutator, lies in W_n)`.
    pub fn free_gamma_check(&self, n_max: usize) -> Result<Vec<(usize, bool)>> {
        let mut out = Vec::new();
        for n in 2..=n_max.min(self.class_cap()) {
            let mut ok = true;
            for h in hall_basis(self.rank(), n)? {
                ok &= self.member(&bracket_word(&h.bracket), n)?;
            }
            out.push((n, ok));
        }
        Ok(out)
    }

    /// `W_n/W_{n+1}` for `1 ≤ n ≤ c − 1`; `n = 1` is `G_ab = Z ⊕ coker(A − I)`.
    pub fn graded_invariants(&self, n: usize) -> Result<GradedInvariants> {
        if n == 1 {
            let a = self.config.group.phi().abelianization();
            let group = AbelianGroup::free(1).direct_sum(&AbelianGroup::cokernel(&a.minus_identity()?));
            return Ok(GradedInvariants {
                n,
                group,
                layer_check: true,
            });
        }
        if n + 1 > self.class_cap() {
            return Err(Error::input(format!(
                "graded invariants need n + 1 <= c = {}",
                self.class_cap()
            )));
        }
        let big = &self.bases[n - 2];
        let small = &self.bases[n - 1];
        let m = big.len();
        let mut relations: Vec<Vec<BigInt>> = Vec::new();
        for e in small.elements() {
            let s = big.sift(&e.series)?;
            if !s.is_member() {
                return Err(Error::input(format!("W_{} is not contained in W_{n}", n + 1)));
            }
            relations.push(s.exponents);
        }
        let elems = big.elements();
        for j in 0..m {
            for i in 0..j {
                let c = elems[j].inverse.mul(&elems[i].inverse)?.mul(&elems[j].series)?.mul(&elems[i].series)?;
                let s = big.sift(&c)?;
                if !s.is_member() {
                    return Err(Error::input(format!("basis of W_{n} is not commutator-closed")));
                }
                relations.push(s.exponents);
            }
        }
        let group = if m == 0 {
            AbelianGroup::default()
        } else if relations.is_empty() {
            AbelianGroup::free(m)
        } else {
            let mut rel = IntMatrix::zeros(m, relations.len());
            for (col, r) in relations.iter().enumerate() {
                for (row, v) in r.iter().enumerate() {
                    rel[(row, col)] = v.clone();
                }
            }
            AbelianGroup::cokernel(&rel)
        };

        // Layer comparison: [W_n : W_{n+1}] = Π_d [L_d(W_n) : L_d(W_{n+1})].
        let mut order = Some(BigInt::one());
        let mut free_rank = 0usize;
        for d in 1..=self.series_cap() {
            let (lb, ls) = (big.leading_lattice(d)?, small.leading_lattice(d)?);
            if !lb.contains_lattice(&ls) {
                return Err(Error::input(format!("leading lattices of W_{n} and W_{} not nested", n + 1)));
            }
            free_rank += lb.rank() - ls.rank();
            match lb.index_of(&ls) {
                Some(i) => order = order.map(|o| o * i),
                None => order = None,
            }
        }
        let layer_check = if group.is_finite() {
            order == group.order()
        } else {
            free_rank == group.free_rank
        };
        Ok(GradedInvariants {
            n,
            group,
            layer_check,
        })
    }

    /// Sifted normal `φ`-closure of the given fiber words.
    pub fn normal_closure(&self, seeds: &[Word]) -> Result<(SiftedBasis, ClosureStats)> {
        let mut basis = SiftedBasis::new(self.rank(), self.series_cap());
        for w in seeds {
            basis.insert(self.expand(w)?, short(w.clone()))?;
        }
        let stats = self.action.close(&mut basis, &self.config.group)?;
        Ok((basis, stats))
    }

    /// Finite-class checks that `candidate` lies in every `W_n` together
    /// with its normal `φ`-closure, while `non_member` is not in `W_2`.
    pub fn gamma_omega_report(
        &self,
        candidate: &Word,
        non_member: &Word,
        h2_expected: Option<AbelianGroup>,
    ) -> Result<GammaOmegaReport> {
        let mut candidate_membership = Vec::new();
        let mut closure_contained = Vec::new();
        let (closure, _) = self.normal_closure(std::slice::from_ref(candidate))?;
        for n in 2..=self.class_cap() {
            candidate_membership.push((n, self.member(candidate, n)?));
            let basis = self.basis(n)?;
            let mut ok = true;
            for e in closure.elements() {
                ok &= basis.contains(&e.series)?;
            }
            closure_contained.push((n, ok));
        }
        let h2 = mapping_torus_homology(&self.config.group.phi().abelianization())?.h2;
        Ok(GammaOmegaReport {
            candidate: candidate.clone(),
            candidate_membership,
            closure_size: closure.len(),
            closure_contained,
            non_member: non_member.clone(),
            non_member_excluded: !self.member(non_member, 2)?,
            h2,
            h2_expected,
        })
    }

    /// Deterministic text dump of all bases.
    pub fn dump(&self) -> String {
        let alphabet = self.config.group.fiber();
        let mut out = String::new();
        let _ = writeln!(
            out,
            "engine rank={} class_cap={} series_cap={}",
            self.rank(),
            self.class_cap(),
            self.series_cap()
        );
        for (i, b) in self.bases.iter().enumerate() {
            let _ = writeln!(out, "W_{} size={} passes={}", i + 2, b.len(), self.stats[i].passes);
            for e in b.elements() {
                let mono = Monomial::from_index(self.rank(), e.position.degree, e.position.index);
                let prov = e
                    .provenance
                    .as_ref()
                    .map_or_else(|| "-".to_string(), |w| w.display(alphabet).to_string());
                let _ = writeln!(
                    out,
                    "  deg={} lead={} coeff={} word={}",
                    e.position.degree,
                    mono.name(alphabet),
                    e.coefficient,
                    prov
                );
            }
        }
        out
    }
}

/// The group commutator word of a bracket tree.
pub fn bracket_word(b: &Bracket) -> Word {
    match b {
        Bracket::Gen(g) => Word::gen(*g),
        Bracket::Pair(l, r) => commutator(&bracket_word(l), &bracket_word(r)),
    }
}

/// `[[y,x], x, [y,x], …, [y,x]]` with `k` trailing copies of `[y,x]`.
pub fn witness_word(k: usize) -> Result<Word> {
    let yx = commutator(&Word::gen(1), &Word::gen(0));
    let mut items = vec![yx.clone(), Word::gen(0)];
    items.extend(std::iter::repeat_n(yx, k));
    left_normed(&items)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessEntry {
    pub k: usize,
    pub letters: BigInt,
    pub weight: Weight,
    pub expected_weight: usize,
    /// Membership in `γ_{k+2}(F)`.
    pub in_free_gamma: bool,
}

impl WitnessEntry {
    pub fn passes(&self) -> bool {
        self.weight == Weight::Exact(self.expected_weight) && self.in_free_gamma
    }
}

/// Magnus weights of the witness words for `1 ≤ k ≤ k_max`.
pub fn witness_report(k_max: usize, cap: usize) -> Result<Vec<WitnessEntry>> {
    if k_max < 1 {
        return Err(Error::input("witness report needs k_max >= 1"));
    }
    if cap < 2 * k_max + 3 {
        return Err(Error::Precision(format!(
            "witnesses up to k = {k_max} need Magnus cap >= {}, got {cap}",
            2 * k_max + 3
        )));
    }
    (1..=k_max)
        .into_par_iter()
        .map(|k| {
            let w = witness_word(k)?;
            let s = expand(&w, 2, cap)?;
            let weight = s.weight();
            Ok(WitnessEntry {
                k,
                letters: w.letter_len(),
                weight,
                expected_weight: 2 * k + 3,
                in_free_gamma: weight.at_least(k + 2),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fbc::FreeAutomorphism;
    use crate::words::parse_word;

    fn reference_engine(c: usize) -> Engine {
        Engine::build(EngineConfig::new(FbcGroup::reference(), c).unwrap()).unwrap()
    }

    #[test]
    fn small_reference_engine() {
        let e = reference_engine(4);
        let f = FbcGroup::reference();
        let w = |s: &str| f.parse_fiber(s).unwrap();
        assert!(e.member(&w("y^3"), 2).unwrap());
        assert!(e.member(&w("x^3"), 2).unwrap());
        assert!(!e.member(&w("x"), 2).unwrap());
        assert!(e.member(&w("x^9"), 3).unwrap());
        assert!(!e.member(&w("x^3"), 3).unwrap());
        assert!(e.member(&w("[x,y]"), 4).unwrap());
        for (_, c) in e.closure_certificates().unwrap() {
            assert!(c.holds());
        }
        assert!(e.tower_check().unwrap().iter().all(|(_, ok)| *ok));
        let g = e.graded_invariants(2).unwrap();
        assert_eq!(g.invariants(), vec![BigInt::from(3)]);
        assert!(g.layer_check);
        assert_eq!(
            e.graded_invariants(1).unwrap().invariants(),
            vec![BigInt::zero(), BigInt::from(3)]
        );
    }

    #[test]
    fn basis_sizes_match_quotient_rank() {
        let e = reference_engine(5);
        // finite index in F/γ_5(F), whose Hirsch length is 2 + 1 + 2 + 3
        for n in 2..=5 {
            assert_eq!(e.basis(n).unwrap().len(), 8, "W_{n}");
        }
    }

    #[test]
    fn trivial_action_rank_one() {
        let g = FbcGroup::standard(FreeAutomorphism::identity(1)).unwrap();
        let e = Engine::build(EngineConfig::new(g, 4).unwrap()).unwrap();
        for n in 2..=4 {
            assert!(e.basis(n).unwrap().is_empty());
        }
        assert!(e.graded_invariants(2).unwrap().group.is_trivial());
    }

    #[test]
    fn provenance_matches_series() {
        let e = reference_engine(4);
        for n in 2..=4 {
            for el in e.basis(n).unwrap().elements() {
                if let Some(w) = &el.provenance {
                    assert_eq!(&e.expand(w).unwrap(), &el.series);
                }
            }
        }
    }

    #[test]
    fn config_validation() {
        assert!(EngineConfig::new(FbcGroup::reference(), 2).is_err());
        let e = reference_engine(3);
        let x = parse_word("x", FbcGroup::reference().fiber()).unwrap();
        assert!(e.member(&x, 1).is_err());
        assert!(e.member(&x, 4).is_err());
    }

    #[test]
    fn witness_weights() {
        let r = witness_report(2, 7).unwrap();
        assert_eq!(r[0].weight, Weight::Exact(5));
        assert_eq!(r[1].weight, Weight::Exact(7));
        assert!(r.iter().all(WitnessEntry::passes));
        assert!(matches!(witness_report(2, 6), Err(Error::Precision(_))));
        let bare = witness_word(0).unwrap();
        assert_eq!(expand(&bare, 2, 5).unwrap().weight(), Weight::Exact(3));
    }
}
