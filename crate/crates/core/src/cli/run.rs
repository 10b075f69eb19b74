//! Section orchestration.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use super::anchors;
use super::config::{ResolvedRun, RunConfig, Section};
use super::report::{Entry, Report, SectionReport, Status};
use crate::error::{Error, Result};
use crate::fbc::{FbcGroup, REFERENCE_IDENTITIES};
use crate::latmod::{
    char_poly, exterior_power, find_unit_invariant_sublattice, json_int, mapping_torus_homology,
    norm_sequences, stable_image_chain, structured_product_check, subset_product_check,
    subset_product_check_with_lattice, IntMatrix, ResNilpStatus,
};
use crate::lcs::{witness_report, Engine, EngineConfig};
use crate::liemod::{
    hall_basis, is_unimodular, kronecker_power, lie_power_matrix, lie_power_subset_check,
    tensor_power_char_poly, witt_dimension, DEFAULT_KRON_SIDE_LIMIT,
};
use crate::words::exponent_sums;

/// Image-chain length used by the module section.
pub const CHAIN_LENGTH: usize = 12;

/// Largest tensor exponent cross-checked through compounds of the full
/// Kronecker power.
pub const CROSS_CHECK_MAX: usize = 3;

pub fn run(config: &RunConfig) -> Result<Report> {
    Ok(run_resolved(&config.resolve()?))
}

pub fn run_resolved(run: &ResolvedRun) -> Report {
    let timed: Vec<(SectionReport, f64)> = run
        .sections
        .par_iter()
        .map(|&s| {
            let start = Instant::now();
            let entries = match s {
                Section::Identities => identities(run),
                Section::Module => module(run),
                Section::Tensor => tensor(run),
                Section::Lie => lie(run),
                Section::Norms => norms(run),
                Section::Homology => homology(run),
                Section::Lcs => lcs(run),
                Section::Witnesses => witnesses(run),
            };
            let ms = start.elapsed().as_secs_f64() * 1e3;
            (SectionReport { section: s, entries }, ms)
        })
        .collect();
    let durations_ms = timed.iter().map(|(s, ms)| (s.section, *ms)).collect();
    Report {
        group: run.name.clone(),
        config: json!({
            "caps": run.caps,
            "sections": run.sections,
            "expect": run.expect,
        }),
        sections: timed.into_iter().map(|(s, _)| s).collect(),
        durations_ms,
    }
}

fn guard(name: &str, anchor: &'static str, f: impl FnOnce() -> Result<Entry>) -> Entry {
    f().unwrap_or_else(|e| Entry::from_error(name, anchor, &e))
}

/// True when there is no expectation or it matches.
fn matches<T: PartialEq + ?Sized>(observed: &T, expected: Option<&T>) -> bool {
    expected.is_none_or(|e| e == observed)
}

fn require_group<'a>(run: &'a ResolvedRun) -> Result<&'a FbcGroup> {
    run.group
        .as_ref()
        .ok_or_else(|| Error::Input("matrix-only config has no automorphism".into()))
}

fn verdict_name(s: ResNilpStatus) -> &'static str {
    match s {
        ResNilpStatus::ConditionHolds => "condition_holds",
        ResNilpStatus::ViolationFound => "violation_found",
        ResNilpStatus::Undecided => "undecided",
    }
}

fn identity_anchor(lhs: &str, rhs: &str) -> &'static str {
    REFERENCE_IDENTITIES
        .iter()
        .position(|(_, l, r)| *l == lhs && *r == rhs)
        .map_or(anchors::IDENTITY, |i| anchors::REFERENCE_IDENTITY_ANCHORS[i])
}

fn identities(run: &ResolvedRun) -> Vec<Entry> {
    let group = match require_group(run) {
        Ok(g) => g,
        Err(e) => return vec![Entry::from_error("identities", anchors::IDENTITY, &e)],
    };
    let fiber = group.fiber();
    let mut out: Vec<Entry> = run
        .identities
        .iter()
        .map(|(name, lhs, rhs)| {
            let anchor = identity_anchor(lhs, rhs);
            guard(name, anchor, || {
                let l = group.parse(lhs)?;
                let r = group.parse(rhs)?;
                let verdict = group.verify_identity(&l, &r)?;
                let witness = match &verdict {
                    crate::fbc::IdentityVerdict::Equal => Value::Null,
                    crate::fbc::IdentityVerdict::Unequal(w) => json!(w.display(fiber).to_string()),
                };
                Ok(Entry::new(
                    name.clone(),
                    anchor,
                    Status::from_bool(verdict.is_equal()),
                    json!({
                        "lhs": lhs,
                        "rhs": rhs,
                        "lhs_normal_form": group.normal_form(&l)?.display(fiber).to_string(),
                        "rhs_normal_form": group.normal_form(&r)?.display(fiber).to_string(),
                        "witness": witness,
                    }),
                ))
            })
        })
        .collect();
    if let Some(rel) = &run.relator {
        out.push(guard("relator normal form", anchors::RELATOR, || {
            let nf = group.normal_form(rel)?;
            Ok(Entry::new(
                "relator normal form",
                anchors::RELATOR,
                Status::from_bool(nf.is_identity()),
                json!({
                    "relator": rel.display(group.presentation()).to_string(),
                    "normal_form": nf.display(fiber).to_string(),
                }),
            ))
        }));
    }
    out
}

fn module(run: &ResolvedRun) -> Vec<Entry> {
    let a = &run.matrix;
    let limit = run.caps.exterior_limit;
    let b = match a.minus_identity() {
        Ok(b) => b,
        Err(e) => return vec![Entry::from_error("module", anchors::SUBSET_PRODUCTS, &e)],
    };
    let mut holds = None;
    let mut out = Vec::new();
    out.push(guard("subset products of eigenvalues of A - I", anchors::SUBSET_PRODUCTS, || {
        let v = subset_product_check_with_lattice(&b, limit)?;
        holds = Some(v.holds());
        let mut certified = true;
        if v.status == ResNilpStatus::ViolationFound {
            certified = !v.certificates.is_empty();
        }
        let ok = certified && matches(&v.holds(), run.expect.residually_nilpotent.as_ref());
        let mut data = v.to_json();
        data["residually_nilpotent"] = json!(v.holds());
        Ok(Entry::new(
            "subset products of eigenvalues of A - I",
            anchors::SUBSET_PRODUCTS,
            Status::from_bool(ok),
            data,
        ))
    }));
    out.push(guard("top compound determinant", anchors::TOP_COMPOUND, || {
        let m = a.rows();
        let top = exterior_power(&b, m, limit)?;
        let det = top[(0, 0)].clone();
        let ok = det == b.det()?
            && run
                .expect
                .top_compound_det
                .is_none_or(|e| BigInt::from(e) == det);
        Ok(Entry::new(
            "top compound determinant",
            anchors::TOP_COMPOUND,
            Status::from_bool(ok),
            json!({ "order": m, "det": json_int(&det) }),
        ))
    }));
    out.push(guard("image chain of A - I", anchors::IMAGE_CHAIN, || {
        let chain = stable_image_chain(&b, CHAIN_LENGTH)?;
        // A unit part inside every image contradicts the subset-product verdict.
        let ok = holds.is_none_or(|h| !(h && chain.unit_part.is_some()));
        Ok(Entry::new(
            "image chain of A - I",
            anchors::IMAGE_CHAIN,
            Status::from_bool(ok),
            chain.to_json(),
        ))
    }));
    out.push(guard("unit invariant sublattice", anchors::UNIT_SUBLATTICE, || {
        let search = find_unit_invariant_sublattice(&b, a.rows())?;
        let found = search.found.as_ref().filter(|u| u.verify(&b));
        let ok = match holds {
            Some(h) => search.exhaustive && found.is_some() != h,
            None => true,
        };
        Ok(Entry::new(
            "unit invariant sublattice",
            anchors::UNIT_SUBLATTICE,
            Status::from_bool(ok),
            json!({
                "char_poly": search.char_poly.to_string(),
                "searched_degree": search.searched_degree,
                "exhaustive": search.exhaustive,
                "found": found.map(|u| u.to_json()),
                "verified": found.is_some(),
            }),
        ))
    }));
    out
}

fn tensor(run: &ResolvedRun) -> Vec<Entry> {
    let a = &run.matrix;
    let caps = &run.caps;
    let expect = run.expect.residually_nilpotent;
    let mut structured = Vec::new();
    let mut out = Vec::new();
    out.push(guard("structured route", anchors::TENSOR_STRUCTURED, || {
        let mut rows = Vec::new();
        for m in 1..=caps.tensor_max {
            let v = structured_product_check(a, m, caps.norm_max.max(m))?;
            structured.push(v.status);
            rows.push(json!({ "m": m, "status": verdict_name(v.status), "notes": v.notes }));
        }
        let all_hold = structured.iter().all(|s| *s == ResNilpStatus::ConditionHolds);
        let ok = match expect {
            Some(true) => all_hold,
            Some(false) => structured[0] != ResNilpStatus::ConditionHolds,
            None => true,
        };
        Ok(Entry::new(
            format!("structured route, m = 1..{}", caps.tensor_max),
            anchors::TENSOR_STRUCTURED,
            Status::from_bool(ok),
            json!(rows),
        ))
    }));
    let top = caps.tensor_max.min(CROSS_CHECK_MAX);
    out.push(guard("exterior cross-check", anchors::TENSOR_CROSS_CHECK, || {
        let mut rows = Vec::new();
        let mut ok = true;
        for m in 1..=top {
            let k = kronecker_power(a, m, DEFAULT_KRON_SIDE_LIMIT)?;
            let v = subset_product_check(&k.minus_identity()?, caps.exterior_limit)?;
            let s = structured.get(m - 1).copied();
            // The structured route may stay undecided; it must never claim
            // the condition when compounds refute it.
            ok &= !(s == Some(ResNilpStatus::ConditionHolds) && !v.holds());
            ok &= expect != Some(true) || v.holds();
            rows.push(json!({
                "m": m,
                "side": k.rows(),
                "exterior": verdict_name(v.status),
                "structured": s.map(verdict_name),
            }));
        }
        Ok(Entry::new(
            format!("exterior cross-check, m = 1..{top}"),
            anchors::TENSOR_CROSS_CHECK,
            Status::from_bool(ok),
            json!(rows),
        ))
    }));
    out.push(guard("even tensor exponents", anchors::TENSOR_EIGENVALUES, || {
        let det = a.det()?;
        let mut rows = Vec::new();
        let mut present = true;
        for m in (2..=caps.tensor_max).step_by(2) {
            // α₁^{m/2} α₂^{m/2} = δ^{m/2} is an eigenvalue of U^{⊗m}.
            let root = det.pow((m / 2) as u32);
            let found = tensor_power_char_poly(a, m)?.eval(&root).is_zero();
            present &= found;
            rows.push(json!({ "m": m, "eigenvalue": json_int(&root), "present": found }));
        }
        let status = if !present {
            Status::Fail
        } else if rows.is_empty() {
            Status::Pass
        } else {
            Status::Flagged
        };
        Ok(Entry::new(
            "even tensor exponents",
            anchors::TENSOR_EIGENVALUES,
            status,
            json!({
                "rows": rows,
                "note": "exponent 0 occurs for even m: eigenvalues ±1 of U^{⊗m}, hence 0 and -2 \
                         of U^{⊗m} - I with norms 0 and 4; the structured route accounts for them",
            }),
        ))
    }));
    out
}

fn lie(run: &ResolvedRun) -> Vec<Entry> {
    let a = &run.matrix;
    let caps = &run.caps;
    let r = a.rows();
    let mut out = Vec::new();
    out.push(guard("Witt dimensions", anchors::WITT, || {
        let mut rows = Vec::new();
        let mut ok = true;
        for n in 1..=caps.degree_cap {
            let formula = witt_dimension(r, n);
            let hall = hall_basis(r, n)?.len();
            ok &= formula == BigInt::from(hall);
            rows.push(json!({ "n": n, "witt": json_int(&formula), "hall": hall }));
        }
        Ok(Entry::new("Witt dimensions", anchors::WITT, Status::from_bool(ok), json!(rows)))
    }));
    out.push(guard("second Lie power", anchors::SECOND_LIE_POWER, || {
        if r < 2 {
            return Err(Error::input("second Lie power needs rank at least 2"));
        }
        let l2 = lie_power_matrix(a, 2)?;
        let ext = exterior_power(a, 2, caps.exterior_limit)?;
        let ok = char_poly(&l2.matrix)? == char_poly(&ext)?;
        Ok(Entry::new(
            "second Lie power",
            anchors::SECOND_LIE_POWER,
            Status::from_bool(ok),
            json!({ "matrix": l2.matrix.to_json(), "char_poly": char_poly(&l2.matrix)?.to_string() }),
        ))
    }));
    out.push(guard("Lie powers", anchors::LIE_POWERS, || {
        let mut rows = Vec::new();
        let mut ok = true;
        for n in 2..=caps.degree_cap {
            let lp = lie_power_matrix(a, n)?;
            let unimodular = is_unimodular(&lp.matrix)?;
            let v = lie_power_subset_check(a, n, caps.exterior_limit)?;
            ok &= unimodular;
            ok &= run.expect.residually_nilpotent != Some(true) || v.holds();
            rows.push(json!({
                "n": n,
                "dimension": lp.dimension(),
                "unimodular": unimodular,
                "route": v.route,
                "status": verdict_name(v.status),
            }));
        }
        Ok(Entry::new(
            format!("Lie powers, n = 2..{}", caps.degree_cap),
            anchors::LIE_POWERS,
            Status::from_bool(ok),
            json!(rows),
        ))
    }));
    out
}

fn norms(run: &ResolvedRun) -> Vec<Entry> {
    let report = match norm_sequences(&run.matrix, run.caps.norm_max) {
        Ok(r) => r,
        Err(e) => return vec![Entry::from_error("norm sequences", anchors::NORM_DIVISIBILITY, &e)],
    };
    let s = &report.sequences;
    let big_l = s.max_index();
    let m1 = &s.m[1];
    let n1 = &s.n[1];
    let expect = &run.expect;
    vec![
        Entry::new(
            "M_1",
            anchors::NORM_M1,
            Status::from_bool(expect.norm_m1.is_none_or(|e| BigInt::from(e) == *m1)),
            json!({ "M_1": json_int(m1) }),
        ),
        Entry::new(
            "N_1",
            anchors::NORM_N1,
            Status::from_bool(expect.norm_n1.is_none_or(|e| BigInt::from(e) == *n1)),
            json!({ "N_1": json_int(n1) }),
        ),
        Entry::new(
            format!("divisibility and size, index <= {big_l}"),
            anchors::NORM_DIVISIBILITY,
            Status::from_bool(matches(&report.all_hold(), expect.norm_checks.as_ref())),
            report.to_json(),
        ),
        Entry::new(
            "N_s divides N_1 for odd s",
            anchors::NORM_REVERSE,
            if report.reverse_divisibility_holds {
                Status::Pass
            } else {
                Status::Flagged
            },
            json!({
                "holds": report.reverse_divisibility_holds,
                "first_failure": report.reverse_divisibility_first_failure,
                "N_3": s.n.get(3).map(json_int),
                "note": "the checked direction is N_1 | N_s; the reverse is reported only",
            }),
        ),
    ]
}

fn homology(run: &ResolvedRun) -> Vec<Entry> {
    let expect = &run.expect;
    let mut out = Vec::new();
    match mapping_torus_homology(&run.matrix) {
        Ok(h) => {
            let h1 = h.h1.to_string();
            let h2 = h.h2.to_string();
            out.push(Entry::new(
                "H_1",
                anchors::H1,
                Status::from_bool(matches(h1.as_str(), expect.h1.as_deref())),
                json!({ "H1": h1, "invariants": h.h1.invariant_list().iter().map(json_int).collect::<Vec<_>>() }),
            ));
            out.push(Entry::new(
                "H_2",
                anchors::H2_MODULE,
                Status::from_bool(matches(h2.as_str(), expect.h2.as_deref())),
                h.to_json(),
            ));
        }
        Err(e) => out.push(Entry::from_error("mapping torus homology", anchors::H1, &e)),
    }
    out.push(guard("relator", anchors::H2_GROUP, || {
        let group = require_group(run)?;
        let rel = run
            .relator
            .as_ref()
            .ok_or_else(|| Error::input("no relator configured"))?;
        let (root, exponent) = rel.is_proper_power()?;
        let sums = exponent_sums(rel, group.presentation().rank());
        let in_commutator = sums.iter().all(Zero::is_zero);
        // Lyndon: a one-relator group whose relator is no proper power has
        // H_2 = Z when the relator lies in [F, F] and 0 otherwise.
        let h2_group = exponent.is_one().then(|| if in_commutator { "Z" } else { "0" });
        let ok = expect
            .relator_exponent
            .is_none_or(|e| BigInt::from(e) == exponent);
        Ok(Entry::new(
            "relator",
            anchors::H2_GROUP,
            Status::from_bool(ok),
            json!({
                "relator": rel.display(group.presentation()).to_string(),
                "root": root.display(group.presentation()).to_string(),
                "exponent": json_int(&exponent),
                "exponent_sums": sums.iter().map(json_int).collect::<Vec<_>>(),
                "in_commutator_subgroup": in_commutator,
                "H2_of_group": h2_group,
            }),
        ))
    }));
    out
}

fn lcs(run: &ResolvedRun) -> Vec<Entry> {
    let build = require_group(run)
        .and_then(|g| EngineConfig::new(g.clone(), run.caps.class_cap))
        .and_then(Engine::build);
    let engine = match build {
        Ok(e) => e,
        Err(e) => return vec![Entry::from_error("engine build", anchors::ENGINE, &e)],
    };
    let group = &engine.config().group;
    let c = engine.class_cap();
    let expect = &run.expect;
    let mut out = vec![Entry::new(
        "engine build",
        anchors::ENGINE,
        Status::Pass,
        json!({
            "class_cap": c,
            "series_cap": engine.series_cap(),
            "basis_sizes": engine.stats().iter().map(|s| s.basis_size).collect::<Vec<_>>(),
            "passes": engine.stats().iter().map(|s| s.passes).collect::<Vec<_>>(),
            "candidates_sifted": engine.stats().iter().map(|s| s.candidates_sifted).collect::<Vec<_>>(),
            "dump": engine.dump().lines().collect::<Vec<_>>(),
        }),
    )];
    if let (Some(word), Some(p)) = (&expect.torsion_word, expect.torsion_prime) {
        out.push(guard("torsion powers", anchors::TORSION, || {
            let w = group.parse_fiber(word)?;
            let mut rows = Vec::new();
            let mut ok = true;
            for k in 1..c {
                let pk = BigInt::from(p).pow(k as u32);
                let member = engine.member(&w.pow(&pk)?, k + 1)?;
                let sharp = !engine.member(&w.pow(&(pk / p))?, k + 1)?;
                ok &= member;
                rows.push(json!({ "k": k, "member": member, "previous_power_excluded": sharp }));
            }
            Ok(Entry::new(
                format!("{word}^({p}^k) in gamma_(k+1), k = 1..{}", c - 1),
                anchors::TORSION,
                Status::from_bool(ok),
                json!(rows),
            ))
        }));
    }
    out.push(guard("graded quotients", anchors::GRADED, || {
        let mut rows = Vec::new();
        let mut ok = true;
        for n in 1..c {
            let g = engine.graded_invariants(n)?;
            let s = g.group.to_string();
            ok &= g.layer_check;
            ok &= if n == 1 {
                matches(s.as_str(), expect.h1.as_deref())
            } else {
                matches(s.as_str(), expect.graded.as_deref())
            };
            rows.push(json!({ "n": n, "quotient": s, "layer_check": g.layer_check }));
        }
        Ok(Entry::new(
            format!("graded quotients, n = 1..{}", c - 1),
            anchors::GRADED,
            Status::from_bool(ok),
            json!(rows),
        ))
    }));
    if let (Some(cand), Some(non)) = (&expect.candidate, &expect.non_member) {
        out.push(guard("gamma omega candidate", anchors::GAMMA_OMEGA, || {
            let cw = group.parse_fiber(cand)?;
            let nw = group.parse_fiber(non)?;
            let r = engine.gamma_omega_report(&cw, &nw, None)?;
            Ok(Entry::new(
                "gamma omega candidate",
                anchors::GAMMA_OMEGA,
                Status::from_bool(r.all_pass()),
                json!({
                    "candidate": cand,
                    "member_of": r.candidate_membership.iter().filter(|(_, b)| *b).map(|(n, _)| n).collect::<Vec<_>>(),
                    "closure_size": r.closure_size,
                    "closure_contained_in": r.closure_contained.iter().filter(|(_, b)| *b).map(|(n, _)| n).collect::<Vec<_>>(),
                    "non_member": non,
                    "non_member_excluded_from_gamma_2": r.non_member_excluded,
                }),
            ))
        }));
    }
    out.push(guard("closure certificates", anchors::CLOSURE, || {
        let certs = engine.closure_certificates()?;
        let ok = certs.iter().all(|(_, c)| c.holds());
        let rows: Vec<Value> = certs
            .iter()
            .map(|(n, c)| {
                json!({
                    "n": n,
                    "phi_stable": c.phi_stable,
                    "conjugation_stable": c.conjugation_stable,
                    "commutator_stable": c.commutator_stable,
                    "checked": c.checked,
                })
            })
            .collect();
        Ok(Entry::new("closure certificates", anchors::CLOSURE, Status::from_bool(ok), json!(rows)))
    }));
    out.push(guard("tower", anchors::TOWER, || {
        let t = engine.tower_check()?;
        Ok(Entry::new(
            "tower",
            anchors::TOWER,
            Status::from_bool(t.iter().all(|(_, b)| *b)),
            json!(t.iter().map(|(n, b)| json!({ "n": n, "contains_next": b })).collect::<Vec<_>>()),
        ))
    }));
    out.push(guard("free lower central terms", anchors::FREE_GAMMA, || {
        let t = engine.free_gamma_check(c)?;
        Ok(Entry::new(
            "free lower central terms",
            anchors::FREE_GAMMA,
            Status::from_bool(t.iter().all(|(_, b)| *b)),
            json!(t.iter().map(|(n, b)| json!({ "n": n, "contained": b })).collect::<Vec<_>>()),
        ))
    }));
    out
}

fn witnesses(run: &ResolvedRun) -> Vec<Entry> {
    vec![guard("witness weights", anchors::WITNESS, || {
        if run.matrix.rows() < 2 {
            return Err(Error::input("witness words need fiber rank at least 2"));
        }
        let rows = witness_report(run.caps.witness_max, run.caps.magnus_cap)?;
        let ok = rows.iter().all(|w| w.passes());
        Ok(Entry::new(
            format!("witness weights, k = 1..{}", run.caps.witness_max),
            anchors::WITNESS,
            Status::from_bool(ok),
            json!(rows
                .iter()
                .map(|w| json!({
                    "k": w.k,
                    "letters": json_int(&w.letters),
                    "weight": w.weight.to_string(),
                    "expected_weight": w.expected_weight,
                    "in_free_gamma": w.in_free_gamma,
                }))
                .collect::<Vec<_>>()),
        ))
    })]
}

/// `U^{⊗m}` has no eigenvalue of absolute value 1 for odd `m` when `U` is
/// hyperbolic; exposed for tests of the even-exponent entry.
pub fn has_unit_eigenvalue(a: &IntMatrix, m: usize) -> Result<bool> {
    let chi = tensor_power_char_poly(a, m)?;
    Ok(chi.eval(&BigInt::one()).is_zero() || chi.eval(&-BigInt::one()).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn quick(preset: &str, sections: &[Section]) -> Report {
        let mut r = RunConfig::preset(preset).unwrap().resolve().unwrap();
        r.sections = sections.to_vec();
        r.caps.class_cap = 4;
        r.caps.degree_cap = 5;
        run_resolved(&r)
    }

    #[test]
    fn reference_quick_sections_pass() {
        let r = quick(
            "reference",
            &[Section::Identities, Section::Module, Section::Norms, Section::Homology],
        );
        assert!(r.passed(), "{}", r.render_text());
        assert_eq!(r.counts().flagged, 1);
        assert_eq!(r.entry(Section::Norms, "M_1").unwrap().data["M_1"], json!(-3));
    }

    #[test]
    fn contrast_module_reports_violation_and_passes() {
        let r = quick("contrast-resnilp-fail", &[Section::Module, Section::Tensor]);
        assert!(r.passed(), "{}", r.render_text());
        let e = r
            .entry(Section::Module, "subset products of eigenvalues of A - I")
            .unwrap();
        assert_eq!(e.data["status"], json!("ViolationFound"));
        let u = r.entry(Section::Module, "unit invariant sublattice").unwrap();
        assert_eq!(u.data["verified"], json!(true));
    }

    #[test]
    fn tampered_expectation_fails() {
        let mut r = RunConfig::preset("reference").unwrap().resolve().unwrap();
        r.sections = vec![Section::Homology];
        r.expect.h2 = Some("Z/4".into());
        let report = run_resolved(&r);
        assert!(!report.passed());
        assert_eq!(report.exit_code(), 1);
    }

    #[test]
    fn empty_sections_pass() {
        let mut r = RunConfig::preset("reference").unwrap().resolve().unwrap();
        r.sections.clear();
        let report = run_resolved(&r);
        assert!(report.passed());
        assert_eq!(report.entries().count(), 0);
    }

    #[test]
    fn resource_limits_skip() {
        let mut r = RunConfig::preset("reference").unwrap().resolve().unwrap();
        r.sections = vec![Section::Witnesses];
        r.caps.magnus_cap = 6;
        let report = run_resolved(&r);
        let e = &report.sections[0].entries[0];
        assert_eq!(e.status, Status::Skipped);
        assert!(e.diagnostic.as_ref().unwrap().contains("precision"));
        assert!(report.passed());
    }

    #[test]
    fn unit_eigenvalues_only_for_even_exponents() {
        let u = crate::latmod::reference_matrix();
        for m in 1..=6 {
            assert_eq!(has_unit_eigenvalue(&u, m).unwrap(), m % 2 == 0);
        }
    }

    #[test]
    fn anchors_are_documented() {
        let r = quick("reference", &Section::ALL);
        let known: BTreeSet<&str> = anchors::ANCHORS.iter().copied().collect();
        for e in r.entries() {
            assert!(!e.anchor.is_empty());
            assert!(known.contains(e.anchor), "{}", e.anchor);
        }
    }
}
