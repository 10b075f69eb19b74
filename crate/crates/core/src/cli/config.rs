//! Run configuration: a JSON document naming a preset or an inline group,
//! caps, selected sections and expected outcomes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::latmod::IntMatrix;
use crate::fbc::{
    reference_identity_list, FbcElement, FbcGroup, FreeAutomorphism, DEFAULT_INVERSE_SEARCH_LEN,
};
use crate::words::{parse_word, Alphabet, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Section {
    Identities,
    Module,
    Tensor,
    Lie,
    Norms,
    Homology,
    Lcs,
    Witnesses,
}

impl Section {
    pub const ALL: [Section; 8] = [
        Section::Identities,
        Section::Module,
        Section::Tensor,
        Section::Lie,
        Section::Norms,
        Section::Homology,
        Section::Lcs,
        Section::Witnesses,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Section::Identities => "identities",
            Section::Module => "module",
            Section::Tensor => "tensor",
            Section::Lie => "lie",
            Section::Norms => "norms",
            Section::Homology => "homology",
            Section::Lcs => "lcs",
            Section::Witnesses => "witnesses",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Caps {
    pub magnus_cap: usize,
    pub class_cap: usize,
    pub tensor_max: usize,
    pub norm_max: usize,
    pub exterior_limit: usize,
    pub degree_cap: usize,
    pub witness_max: usize,
    pub inverse_search_len: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            magnus_cap: 12,
            class_cap: 7,
            tensor_max: 12,
            norm_max: 40,
            exterior_limit: crate::latmod::DEFAULT_EXTERIOR_LIMIT,
            degree_cap: crate::liemod::DEFAULT_DEGREE_CAP,
            witness_max: 4,
            inverse_search_len: DEFAULT_INVERSE_SEARCH_LEN,
        }
    }
}

impl Caps {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("magnus_cap", self.magnus_cap),
            ("class_cap", self.class_cap),
            ("tensor_max", self.tensor_max),
            ("norm_max", self.norm_max),
            ("exterior_limit", self.exterior_limit),
            ("degree_cap", self.degree_cap),
            ("witness_max", self.witness_max),
            ("inverse_search_len", self.inverse_search_len),
        ];
        for (name, v) in fields {
            if v == 0 {
                return Err(Error::config(format!("caps.{name}"), "must be positive"));
            }
        }
        if self.class_cap < 3 {
            return Err(Error::config("caps.class_cap", "must be at least 3"));
        }
        Ok(())
    }
}

/// Outcomes a run is checked against. Unset fields are reported without a
/// comparison.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Expectations {
    /// Whether no eigenvalue subset of `A − I` multiplies to `±1`.
    pub residually_nilpotent: Option<bool>,
    /// `det(A − I)`.
    pub top_compound_det: Option<i64>,
    pub norm_m1: Option<i64>,
    pub norm_n1: Option<i64>,
    /// Whether the divisibility and size checks on `M_l`, `N_s` hold.
    pub norm_checks: Option<bool>,
    /// Abelian groups in the form printed by reports, e.g. `"Z + Z/3"`.
    pub h1: Option<String>,
    pub h2: Option<String>,
    /// `γ_n(G)/γ_{n+1}(G)` for every `2 ≤ n < c`.
    pub graded: Option<String>,
    /// Fiber word `w` with `w^{p^k} ∈ γ_{k+1}(G)`.
    pub torsion_word: Option<String>,
    pub torsion_prime: Option<u32>,
    /// Fiber word expected in every computed `γ_n(G)`.
    pub candidate: Option<String>,
    /// Fiber word expected outside `γ_2(G)`.
    pub non_member: Option<String>,
    /// Proper-power exponent of the relator.
    pub relator_exponent: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentitySpec {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingSpec {
    pub fiber: String,
    pub shift: i64,
}

/// An inline free-by-cyclic group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InlineGroup {
    /// Fiber generator names; defaults to `x, y` or `x1..xn` from `rank`.
    #[serde(default)]
    pub fiber: Option<Vec<String>>,
    #[serde(default)]
    pub rank: Option<usize>,
    /// Images of the fiber generators. Without `phi` only the matrix
    /// sections (module, tensor, lie, norms, homology) can run.
    #[serde(default)]
    pub phi: Option<Vec<String>>,
    /// Fiber action on `Z^m` as row-major integer rows; must match the
    /// abelianization of `phi` when both are given.
    #[serde(default)]
    pub matrix: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    pub phi_inverse: Option<Vec<String>>,
    /// Presentation generator names; defaults to the fiber names plus `t`.
    #[serde(default)]
    pub presentation: Option<Vec<String>>,
    #[serde(default)]
    pub embedding: Option<Vec<EmbeddingSpec>>,
    /// Relator over the presentation alphabet.
    #[serde(default)]
    pub relator: Option<String>,
    #[serde(default)]
    pub identities: Vec<IdentitySpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Preset(String),
    Inline(InlineGroup),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub group: GroupSpec,
    /// `None` selects the preset's caps; fields missing from a given
    /// object take the global defaults.
    #[serde(default)]
    pub caps: Option<Caps>,
    /// `None` selects the preset's default sections.
    #[serde(default)]
    pub sections: Option<Vec<Section>>,
    #[serde(default)]
    pub expect: Option<Expectations>,
}

pub const PRESETS: [&str; 2] = ["reference", "contrast-resnilp-fail"];

/// A fully resolved run: group, caps, sections and expectations.
#[derive(Clone, Debug)]
pub struct ResolvedRun {
    pub name: String,
    /// Absent for matrix-only configs.
    pub group: Option<FbcGroup>,
    /// The fiber action on `Z^m`.
    pub matrix: IntMatrix,
    pub relator: Option<Word>,
    pub identities: Vec<(String, String, String)>,
    pub expect: Expectations,
    pub sections: Vec<Section>,
    pub caps: Caps,
}

impl RunConfig {
    pub fn preset(name: &str) -> Result<Self> {
        if !PRESETS.contains(&name) {
            return Err(Error::config("group", format!("unknown preset {name:?}")));
        }
        Ok(RunConfig {
            group: GroupSpec::Preset(name.into()),
            caps: None,
            sections: None,
            expect: None,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| {
            Error::config(format!("line {} column {}", e.line(), e.column()), e.to_string())
        })?;
        if let Some(c) = &cfg.caps {
            c.validate()?;
        }
        Ok(cfg)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }

    pub fn resolve(&self) -> Result<ResolvedRun> {
        let mut resolved = match &self.group {
            GroupSpec::Preset(name) => resolve_preset(name)?,
            GroupSpec::Inline(g) => {
                resolve_inline(g, self.caps.as_ref().unwrap_or(&Caps::default()))?
            }
        };
        if let Some(c) = &self.caps {
            resolved.caps = c.clone();
        }
        resolved.caps.validate()?;
        if let Some(e) = &self.expect {
            resolved.expect = e.clone();
        }
        if let Some(s) = &self.sections {
            let mut s = s.clone();
            s.sort();
            s.dedup();
            resolved.sections = s;
        }
        Ok(resolved)
    }
}

fn resolve_preset(name: &str) -> Result<ResolvedRun> {
    match name {
        "reference" => {
            let group = FbcGroup::reference();
            let relator = Some(group.reference_relator()?);
            Ok(ResolvedRun {
                name: name.into(),
                matrix: group.phi().abelianization(),
                group: Some(group),
                relator,
                identities: reference_identity_list(),
                expect: Expectations {
                    residually_nilpotent: Some(true),
                    top_compound_det: Some(-3),
                    norm_m1: Some(-3),
                    norm_n1: Some(3),
                    norm_checks: Some(true),
                    h1: Some("Z + Z/3".into()),
                    h2: Some("Z/2".into()),
                    graded: Some("Z/3".into()),
                    torsion_word: Some("x".into()),
                    torsion_prime: Some(3),
                    candidate: Some("[x,y]".into()),
                    non_member: Some("x".into()),
                    relator_exponent: Some(1),
                },
                sections: Section::ALL.to_vec(),
                caps: Caps::default(),
            })
        }
        "contrast-resnilp-fail" => {
            let group = FbcGroup::contrast();
            let relator = Some(group.parse("a^(b^2) * (a^-1 * a^3^b)^-1")?);
            Ok(ResolvedRun {
                name: name.into(),
                matrix: group.phi().abelianization(),
                group: Some(group),
                relator,
                identities: vec![(
                    "defining relation".into(),
                    "a^(b^2)".into(),
                    "a^-1 * a^3^b".into(),
                )],
                expect: Expectations {
                    residually_nilpotent: Some(false),
                    top_compound_det: Some(-1),
                    h1: Some("Z".into()),
                    h2: Some("Z".into()),
                    graded: Some("0".into()),
                    non_member: None,
                    relator_exponent: Some(1),
                    ..Expectations::default()
                },
                sections: vec![
                    Section::Identities,
                    Section::Module,
                    Section::Tensor,
                    Section::Homology,
                    Section::Lcs,
                ],
                caps: Caps {
                    tensor_max: 3,
                    class_cap: 5,
                    ..Caps::default()
                },
            })
        }
        other => Err(Error::config("group", format!("unknown preset {other:?}"))),
    }
}

fn at<T>(location: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Config { .. } => e,
        other => Error::config(location, other.to_string()),
    })
}

fn parse_list(location: &str, items: &[String], fiber: &Alphabet) -> Result<Vec<Word>> {
    items
        .iter()
        .enumerate()
        .map(|(i, s)| at(&format!("{location}[{i}]"), parse_word(s, fiber)))
        .collect()
}

fn resolve_inline(g: &InlineGroup, caps: &Caps) -> Result<ResolvedRun> {
    let matrix = g
        .matrix
        .as_ref()
        .map(|rows| {
            let m = at("group.matrix", IntMatrix::from_rows(rows))?;
            at("group.matrix", m.require_square("fiber matrix"))?;
            Ok::<_, Error>(m)
        })
        .transpose()?;
    let rank = match (&g.fiber, g.rank, &matrix) {
        (Some(names), _, _) => names.len(),
        (None, Some(r), _) => r,
        (None, None, Some(m)) => m.rows(),
        (None, None, None) => {
            return Err(Error::config("group", "needs fiber names, a rank or a matrix"))
        }
    };
    if rank == 0 {
        return Err(Error::config("group", "fiber rank must be positive"));
    }
    if g.rank.is_some_and(|r| r != rank) {
        return Err(Error::config("group.rank", "does not match the fiber names"));
    }
    if matrix.as_ref().is_some_and(|m| m.rows() != rank) {
        return Err(Error::config("group.matrix", format!("expected a {rank}x{rank} matrix")));
    }
    let fiber = match &g.fiber {
        Some(names) => at("group.fiber", Alphabet::new(names))?,
        None => Alphabet::standard(rank),
    };
    let Some(phi_src) = &g.phi else {
        if g.phi_inverse.is_some()
            || g.presentation.is_some()
            || g.embedding.is_some()
            || g.relator.is_some()
            || !g.identities.is_empty()
        {
            return Err(Error::config("group.phi", "required by the other group fields"));
        }
        return Ok(ResolvedRun {
            name: "inline".into(),
            group: None,
            matrix: matrix.expect("matrix present when phi is absent"),
            relator: None,
            identities: Vec::new(),
            expect: Expectations::default(),
            sections: vec![
                Section::Module,
                Section::Tensor,
                Section::Lie,
                Section::Norms,
                Section::Homology,
            ],
            caps: caps.clone(),
        });
    };
    if phi_src.len() != rank {
        return Err(Error::config(
            "group.phi",
            format!("expected {rank} images, got {}", phi_src.len()),
        ));
    }
    let images = parse_list("group.phi", phi_src, &fiber)?;
    let phi = match &g.phi_inverse {
        Some(inv) => {
            let inv = parse_list("group.phi_inverse", inv, &fiber)?;
            at("group.phi_inverse", FreeAutomorphism::new(images, inv))?
        }
        None => at(
            "group.phi",
            FreeAutomorphism::with_derived_inverse(images, caps.inverse_search_len),
        )?,
    };
    let abelian = phi.abelianization();
    if matrix.as_ref().is_some_and(|m| *m != abelian) {
        return Err(Error::config(
            "group.matrix",
            "differs from the abelianization of phi",
        ));
    }
    let group = match (&g.presentation, &g.embedding) {
        (None, None) => at("group", FbcGroup::standard(phi))?,
        (Some(names), Some(emb)) => {
            let presentation = at("group.presentation", Alphabet::new(names))?;
            let embedding: Vec<FbcElement> = emb
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    at(&format!("group.embedding[{i}]"), parse_word(&e.fiber, &fiber))
                        .map(|w| FbcElement::new(w, e.shift))
                })
                .collect::<Result<_>>()?;
            at("group.embedding", FbcGroup::new(fiber, phi, presentation, embedding))?
        }
        _ => {
            return Err(Error::config(
                "group",
                "presentation and embedding must be given together",
            ))
        }
    };
    let relator = g
        .relator
        .as_ref()
        .map(|r| at("group.relator", group.parse(r)))
        .transpose()?;
    let identities: Vec<(String, String, String)> = g
        .identities
        .iter()
        .map(|i| (i.name.clone(), i.lhs.clone(), i.rhs.clone()))
        .collect();
    for (k, (_, l, r)) in identities.iter().enumerate() {
        at(&format!("group.identities[{k}].lhs"), group.parse(l))?;
        at(&format!("group.identities[{k}].rhs"), group.parse(r))?;
    }
    Ok(ResolvedRun {
        name: "inline".into(),
        group: Some(group),
        matrix: abelian,
        relator,
        identities,
        expect: Expectations::default(),
        sections: Section::ALL.to_vec(),
        caps: caps.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_resolve() {
        for p in PRESETS {
            let r = RunConfig::preset(p).unwrap().resolve().unwrap();
            assert_eq!(r.name, p);
        }
        assert!(RunConfig::preset("nope").is_err());
    }

    #[test]
    fn inline_group_with_derived_inverse() {
        let cfg = RunConfig::from_json(
            r#"{"group": {"rank": 2, "phi": ["y", "x y^3"]}, "sections": ["module", "identities"]}"#,
        )
        .unwrap();
        let r = cfg.resolve().unwrap();
        let g = r.group.as_ref().unwrap();
        assert_eq!(g.phi(), FbcGroup::reference().phi());
        assert_eq!(g.presentation().names(), ["x", "y", "t"]);
        assert_eq!(r.sections, vec![Section::Identities, Section::Module]);
    }

    #[test]
    fn matrix_only_group() {
        let r = RunConfig::from_json(r#"{"group": {"matrix": [[2, 1], [1, 1]]}}"#)
            .unwrap()
            .resolve()
            .unwrap();
        assert!(r.group.is_none());
        assert_eq!(r.matrix.rows(), 2);
        assert!(!r.sections.contains(&Section::Lcs));
    }

    #[test]
    fn preset_caps_and_overrides() {
        let c = RunConfig::preset("contrast-resnilp-fail").unwrap().resolve().unwrap();
        assert_eq!((c.caps.tensor_max, c.caps.class_cap), (3, 5));
        let o = RunConfig::from_json(r#"{"group": "reference", "caps": {"class_cap": 4}}"#)
            .unwrap()
            .resolve()
            .unwrap();
        assert_eq!((o.caps.class_cap, o.caps.tensor_max), (4, 12));
        let empty = RunConfig::from_json(r#"{"group": "reference", "sections": []}"#)
            .unwrap()
            .resolve()
            .unwrap();
        assert!(empty.sections.is_empty());
    }

    #[test]
    fn config_errors_carry_locations() {
        let bad_section = RunConfig::from_json(r#"{"group": "reference", "sections": ["bogus"]}"#);
        assert!(matches!(bad_section, Err(Error::Config { .. })));
        let zero_cap = RunConfig::from_json(r#"{"group": "reference", "caps": {"class_cap": 0}}"#);
        assert!(
            matches!(zero_cap, Err(Error::Config { location, .. }) if location == "caps.class_cap")
        );
        let bad_word = RunConfig::from_json(r#"{"group": {"rank": 2, "phi": ["y", "x q"]}}"#)
            .unwrap()
            .resolve();
        assert!(
            matches!(bad_word, Err(Error::Config { location, .. }) if location == "group.phi[1]")
        );
        let not_auto = RunConfig::from_json(r#"{"group": {"rank": 2, "phi": ["x^2", "y"]}}"#)
            .unwrap()
            .resolve();
        assert!(matches!(not_auto, Err(Error::Config { .. })));
        let mismatch = RunConfig::from_json(
            r#"{"group": {"rank": 2, "phi": ["y", "x y^3"], "matrix": [[1, 0], [0, 1]]}}"#,
        )
        .unwrap()
        .resolve();
        assert!(
            matches!(mismatch, Err(Error::Config { location, .. }) if location == "group.matrix")
        );
        assert!(RunConfig::from_json("{").is_err());
        assert!(RunConfig::from_json(r#"{"group": "reference", "extra": 1}"#).is_err());
    }
}
