//! `.albv` documents: a TOML description of an algebroid together with an
//! optional bivector, top-form connection and volume.
//!
//! ```toml
//! [algebroid]
//! kind = "lie_algebra"
//! rank = 2
//! structure = [{ i = 1, j = 2, k = 2, c = "1" }]
//!
//! [connection]
//! alpha = ["0", "0"]
//! ```
//!
//! Indices in the file are 1-based. `kind` is one of `tangent`,
//! `lie_algebra`, `custom` or `cotangent`; the last builds `T*P` from the
//! `[poisson]` section.

use serde::{Deserialize, Serialize};

use crate::algebroid::{
    self, cotangent_algebroid, cotangent_unchecked, standard, LieAlgebroid, PoissonStructure,
    StructureEntry,
};
use crate::bv::TopConnection;
use crate::error::{Error, Result};
use crate::exterior::{GradedElem, Side, Volume};
use crate::poly::{Poly, Rational, Vars};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Tangent,
    LieAlgebra,
    Custom,
    Cotangent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureTriple {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BivectorTerm {
    pub i: usize,
    pub j: usize,
    pub c: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebroidSection {
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub base_vars: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub frame_names: Vec<String>,
    /// `anchor[i][μ]` is the `∂_μ` component of `ρ(e_i)`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub anchor: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub structure: Vec<StructureTriple>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoissonSection {
    pub terms: Vec<BivectorTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionSection {
    pub alpha: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VolumeSection {
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub algebroid: AlgebroidSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poisson: Option<PoissonSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connection: Option<ConnectionSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub volume: Option<VolumeSection>,
}

/// A document with every string parsed and the objects built.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub document: SpecDocument,
    pub algebroid: LieAlgebroid,
    /// The bivector: on the base for `tangent` and `cotangent`, in `∧²A`
    /// otherwise.
    pub bivector: Option<GradedElem>,
    /// Set when the bivector lives on the base.
    pub poisson: Option<PoissonStructure>,
    pub connection: TopConnection,
    /// `true` when the file had no `[connection]` section.
    pub trivial_connection: bool,
    pub volume: Volume,
}

/// Line and column (1-based) of a byte offset.
fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
    (line, col)
}

/// Parse the TOML surface only.
pub fn parse_document(text: &str) -> Result<SpecDocument> {
    toml::from_str(text).map_err(|e| {
        let msg = e.message().to_string();
        match e.span() {
            Some(span) => {
                let (line, col) = line_col(text, span.start);
                Error::Document(format!("line {line}, column {col}: {msg}"))
            }
            None => Error::Document(msg),
        }
    })
}

/// Serialize a document; `parse_document(&emit(d)) == d`.
pub fn emit(doc: &SpecDocument) -> String {
    toml::to_string(doc).expect("documents always serialize")
}

/// Parse and resolve; with `validate` the algebroid axioms and `[π,π] = 0`
/// are enforced.
pub fn parse_spec(text: &str, validate: bool) -> Result<Resolved> {
    resolve(parse_document(text)?, validate)
}

fn poly(vars: &Vars, text: &str, ctx: &str) -> Result<Poly> {
    Poly::parse(vars, text).map_err(|e| Error::Document(format!("{ctx}: {e}")))
}

fn rational(text: &str, ctx: &str) -> Result<Rational> {
    poly(&Vars::empty(), text, ctx)?
        .constant_value()
        .ok_or_else(|| Error::Document(format!("{ctx}: not a constant")))
}

fn index(value: usize, rank: usize, ctx: &str) -> Result<usize> {
    if value == 0 || value > rank {
        return Err(Error::Document(format!("{ctx}: index {value} out of range 1..={rank}")));
    }
    Ok(value - 1)
}

fn pair(i: usize, j: usize, rank: usize, ctx: &str) -> Result<(usize, usize)> {
    if i >= j {
        return Err(Error::Document(format!("{ctx}: indices must satisfy i<j (got i={i}, j={j})")));
    }
    Ok((index(i, rank, ctx)?, index(j, rank, ctx)?))
}

fn build_bivector(a: &LieAlgebroid, terms: &[BivectorTerm]) -> Result<GradedElem> {
    let mut pi = a.zero(Side::A, 2);
    for (n, t) in terms.iter().enumerate() {
        let ctx = format!("poisson.terms[{n}]");
        let (i, j) = pair(t.i, t.j, a.rank(), &ctx)?;
        let c = poly(a.vars(), &t.c, &ctx)?;
        pi = pi.checked_add(&GradedElem::basis(Side::A, a.rank(), &[i, j], a.vars()).scale_poly(&c))?;
    }
    Ok(pi)
}

fn poisson_on(t: &LieAlgebroid, pi: GradedElem, validate: bool) -> Result<PoissonStructure> {
    if validate {
        PoissonStructure::new(t, pi)
    } else {
        PoissonStructure::new_unchecked(t, pi)
    }
}

pub fn resolve(document: SpecDocument, validate: bool) -> Result<Resolved> {
    let sec = &document.algebroid;
    let vars = Vars::new(&sec.base_vars);
    let m = vars.len();
    let no_extra = |what: &str, empty: bool| -> Result<()> {
        if empty {
            Ok(())
        } else {
            Err(Error::Document(format!("algebroid.{what} is not allowed for this kind")))
        }
    };
    let rank_is = |expected: usize| -> Result<()> {
        match sec.rank {
            Some(r) if r != expected => Err(Error::Document(format!(
                "algebroid.rank is {r} but this kind has rank {expected}"
            ))),
            _ => Ok(()),
        }
    };
    let mut poisson = None;
    let mut bivector = None;
    let algebroid = match sec.kind {
        Kind::Tangent | Kind::Cotangent => {
            no_extra("anchor", sec.anchor.is_empty())?;
            no_extra("structure", sec.structure.is_empty())?;
            rank_is(m)?;
            let t = standard::tangent(&sec.base_vars)?;
            if let Some(p) = &document.poisson {
                let pi = build_bivector(&t, &p.terms)?;
                bivector = Some(pi.clone());
                poisson = Some(poisson_on(&t, pi, validate)?);
            }
            if sec.kind == Kind::Tangent {
                t
            } else {
                let ps = poisson.as_ref().ok_or_else(|| {
                    Error::Document("kind = \"cotangent\" needs a [poisson] section".into())
                })?;
                if validate {
                    cotangent_algebroid(ps)?
                } else {
                    cotangent_unchecked(ps)?
                }
            }
        }
        Kind::LieAlgebra | Kind::Custom => {
            if sec.kind == Kind::LieAlgebra {
                no_extra("base_vars", m == 0)?;
                no_extra("anchor", sec.anchor.is_empty())?;
            }
            let rank = sec
                .rank
                .ok_or_else(|| Error::Document("algebroid.rank is required for this kind".into()))?;
            let anchor = if sec.anchor.is_empty() {
                vec![vec![Poly::zero(&vars); m]; rank]
            } else {
                if sec.anchor.len() != rank || sec.anchor.iter().any(|r| r.len() != m) {
                    return Err(Error::Document(format!("algebroid.anchor must be {rank}x{m}")));
                }
                let mut rows = Vec::with_capacity(rank);
                for (i, row) in sec.anchor.iter().enumerate() {
                    let mut out = Vec::with_capacity(m);
                    for (mu, s) in row.iter().enumerate() {
                        out.push(poly(&vars, s, &format!("algebroid.anchor[{i}][{mu}]"))?);
                    }
                    rows.push(out);
                }
                rows
            };
            let mut structure = Vec::with_capacity(sec.structure.len());
            for (n, s) in sec.structure.iter().enumerate() {
                let ctx = format!("algebroid.structure[{n}]");
                let (i, j) = pair(s.i, s.j, rank, &ctx)?;
                let k = index(s.k, rank, &ctx)?;
                structure.push(StructureEntry { i, j, k, c: poly(&vars, &s.c, &ctx)? });
            }
            let a = LieAlgebroid::new_unchecked(&vars, rank, anchor, structure)?;
            if let Some(p) = &document.poisson {
                bivector = Some(build_bivector(&a, &p.terms)?);
            }
            a
        }
    };
    let algebroid = if sec.frame_names.is_empty() {
        algebroid
    } else if sec.frame_names.len() != algebroid.rank() {
        return Err(Error::Document(format!(
            "algebroid.frame_names needs {} names",
            algebroid.rank()
        )));
    } else {
        algebroid.with_frame_names(&sec.frame_names)
    };
    if validate {
        algebroid.ensure_valid()?;
    }
    let (connection, trivial_connection) = match &document.connection {
        None => (TopConnection::trivial(&algebroid), true),
        Some(c) => {
            if c.alpha.len() != algebroid.rank() {
                return Err(Error::Document(format!(
                    "connection.alpha needs {} entries",
                    algebroid.rank()
                )));
            }
            let mut alpha = algebroid.zero(Side::Dual, 1);
            for (i, s) in c.alpha.iter().enumerate() {
                let f = poly(algebroid.vars(), s, &format!("connection.alpha[{i}]"))?;
                alpha = alpha.checked_add(&algebroid.coframe(i).scale_poly(&f))?;
            }
            (TopConnection::new(&algebroid, alpha)?, false)
        }
    };
    let volume = match &document.volume {
        None => Volume::reference(),
        Some(v) => Volume::new(rational(&v.coeff, "volume.coeff")?)?,
    };
    Ok(Resolved { document, algebroid, bivector, poisson, connection, trivial_connection, volume })
}

impl Resolved {
    /// The bivector as a Poisson structure on the base, when there is one.
    pub fn poisson_structure(&self) -> Result<&PoissonStructure> {
        self.poisson.as_ref().ok_or_else(|| {
            Error::Document("needs kind = \"tangent\" or \"cotangent\" with a [poisson] section".into())
        })
    }

    /// Triangular dual of the algebroid along its bivector, if present.
    pub fn triangular_dual(&self) -> Option<Result<LieAlgebroid>> {
        let pi = self.bivector.as_ref()?;
        if self.poisson.is_some() {
            return None;
        }
        Some(algebroid::triangular_dual_algebroid(&self.algebroid, pi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::standard::*;
    use proptest::prelude::*;

    const AFF1: &str = r#"
[algebroid]
kind = "lie_algebra"
rank = 2
structure = [{ i = 1, j = 2, k = 2, c = "1" }]
"#;

    #[test]
    fn tangent_plane_has_identity_anchor() {
        let r = parse_spec("[algebroid]\nkind = \"tangent\"\nbase_vars = [\"x\", \"y\"]\n", true)
            .unwrap();
        assert_eq!(r.algebroid, tangent(&["x", "y"]).unwrap());
        assert!(r.trivial_connection);
    }

    #[test]
    fn aff1_document() {
        let r = parse_spec(AFF1, true).unwrap();
        assert_eq!(r.algebroid.structure_entries(), aff1().structure_entries());
        assert!(r.algebroid.validate().passed());
    }

    #[test]
    fn reversed_indices_are_rejected() {
        let text = AFF1.replace("i = 1, j = 2", "i = 2, j = 1");
        let err = parse_spec(&text, true).unwrap_err().to_string();
        assert!(err.contains("indices must satisfy i<j"), "{err}");
    }

    #[test]
    fn unknown_keys_and_syntax_errors() {
        let err = parse_spec("[algebroid]\nkind = \"tangent\"\ncolour = 1\n", true).unwrap_err();
        assert!(err.to_string().contains("colour"), "{err}");
        let err = parse_spec("[algebroid]\nkind = \n", true).unwrap_err().to_string();
        assert!(err.starts_with("line 2, column"), "{err}");
        let err = parse_spec(&AFF1.replace("c = \"1\"", "c = \"1 +\""), true).unwrap_err();
        assert!(err.to_string().contains("structure[0]"), "{err}");
    }

    #[test]
    fn validation_gate() {
        let text = r#"
[algebroid]
kind = "lie_algebra"
rank = 3
frame_names = ["h", "e", "f"]
structure = [
  { i = 1, j = 2, k = 2, c = "3" },
  { i = 1, j = 3, k = 3, c = "-2" },
  { i = 2, j = 3, k = 1, c = "1" },
]
"#;
        assert!(matches!(parse_spec(text, true), Err(Error::Validation(_))));
        let r = parse_spec(text, false).unwrap();
        assert!(!r.algebroid.validate().passed());
    }

    #[test]
    fn cotangent_and_poisson() {
        let text = r#"
[algebroid]
kind = "cotangent"
base_vars = ["x", "y"]

[poisson]
terms = [{ i = 1, j = 2, c = "y" }]

[volume]
coeff = "1/2"
"#;
        let r = parse_spec(text, true).unwrap();
        let ps = PoissonStructure::from_terms(&["x", "y"], &[(0, 1, "y")]).unwrap();
        assert_eq!(r.algebroid, cotangent_algebroid(&ps).unwrap());
        assert_eq!(r.volume.coeff(), &crate::poly::rat(1, 2));
        assert!(parse_spec(&text.replace("[poisson]\nterms = [{ i = 1, j = 2, c = \"y\" }]", ""), true).is_err());
    }

    #[test]
    fn connection_section() {
        let text = "[algebroid]\nkind = \"tangent\"\nbase_vars = [\"x\", \"y\"]\n[connection]\nalpha = [\"0\", \"x\"]\n";
        let r = parse_spec(text, true).unwrap();
        assert!(!r.connection.is_flat());
        assert!(parse_spec(&text.replace("\"0\", ", ""), true).is_err());
    }

    fn poly_text() -> impl Strategy<Value = String> {
        prop_oneof![Just("0"), Just("1"), Just("-2/3"), Just("x*y"), Just("x^2 - 3*y"), Just("y + 1")]
            .prop_map(str::to_string)
    }

    fn document() -> impl Strategy<Value = SpecDocument> {
        (
            prop::collection::vec((1usize..3, 0usize..2, 1usize..4, poly_text()), 0..4),
            prop::option::of(prop::collection::vec((1usize..3, poly_text()), 1..3)),
            prop::option::of(prop::collection::vec(poly_text(), 3)),
            prop::option::of(prop_oneof![Just("1"), Just("5/7"), Just("-2")]),
        )
            .prop_map(|(st, pi, alpha, vol)| SpecDocument {
                algebroid: AlgebroidSection {
                    kind: Kind::Custom,
                    base_vars: vec!["x".into(), "y".into()],
                    rank: Some(3),
                    frame_names: vec![],
                    anchor: vec![vec!["x".into(), "0".into()]; 3],
                    structure: st
                        .into_iter()
                        .map(|(i, d, k, c)| StructureTriple { i, j: i + 1 + d.min(2 - i), k, c })
                        .collect(),
                },
                poisson: pi.map(|t| PoissonSection {
                    terms: t.into_iter().map(|(i, c)| BivectorTerm { i, j: 3, c }).collect(),
                }),
                connection: alpha.map(|alpha| ConnectionSection { alpha }),
                volume: vol.map(|c| VolumeSection { coeff: c.to_string() }),
            })
    }

    proptest! {
        #[test]
        fn emit_round_trips(doc in document()) {
            let text = emit(&doc);
            prop_assert_eq!(parse_document(&text).unwrap(), doc.clone());
            // the emitted text also resolves whenever the original does
            prop_assert_eq!(resolve(doc, false).is_ok(), parse_spec(&text, false).is_ok());
        }
    }
}
