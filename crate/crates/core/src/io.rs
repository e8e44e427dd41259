//! JSON documents for every object the toolkit exchanges.
//!
//! Parsed data never turns into a core value without passing through the
//! constructors, so a hand-edited file cannot smuggle malformed tables past
//! the shape checks.  Serialization is deterministic (sorted map keys,
//! two-space indent, trailing newline), so rewriting a file the toolkit
//! produced is byte-stable.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::action::{ActionTables, DerivedAction};
use crate::error::{Error, Result};
use crate::homotopy::Derivation;
use crate::omega::{Backend, OmegaGroup};
use crate::report::ValidationReport;
use crate::signature::{AlgebraKind, Signature};
use crate::simplicial::{SimplicialHomotopy, SimplicialMap, SimplicialObject};
use crate::xmod::{CrossedModule, XmodMorphism};

/// One carrier: the only document fragment that owns operation tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CarrierDoc {
    pub name: String,
    pub signature: Signature,
    pub backend: Backend,
}

impl CarrierDoc {
    pub fn from_core(g: &OmegaGroup) -> Self {
        CarrierDoc {
            name: g.name.clone(),
            signature: g.signature.clone(),
            backend: g.backend.clone(),
        }
    }

    pub fn into_core(self) -> Result<OmegaGroup> {
        if self.signature.kind != AlgebraKind::Generic {
            let preset = Signature::preset(self.signature.kind);
            if self.signature != preset {
                return Err(Error::InvalidInput(format!(
                    "carrier {} declares kind {} but its symbols or equations differ \
                     from that kind's fixed set",
                    self.name, self.signature.kind
                )));
            }
        }
        OmegaGroup::new(self.name, self.signature, self.backend)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionDoc {
    pub actor: CarrierDoc,
    pub on: CarrierDoc,
    pub dot: Vec<Vec<usize>>,
    #[serde(default)]
    pub star_left: BTreeMap<String, Vec<Vec<usize>>>,
    #[serde(default)]
    pub star_right: BTreeMap<String, Vec<Vec<usize>>>,
}

impl ActionDoc {
    pub fn from_core(a: &DerivedAction) -> Self {
        ActionDoc {
            actor: CarrierDoc::from_core(&a.actor),
            on: CarrierDoc::from_core(&a.on),
            dot: a.tables.dot.clone(),
            star_left: a.tables.star_left.clone(),
            star_right: a.tables.star_right.clone(),
        }
    }

    pub fn into_core(self) -> Result<DerivedAction> {
        DerivedAction::new(
            self.actor.into_core()?,
            self.on.into_core()?,
            ActionTables {
                dot: self.dot,
                star_left: self.star_left,
                star_right: self.star_right,
            },
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XmodDoc {
    #[serde(rename = "E")]
    pub e: CarrierDoc,
    #[serde(rename = "R")]
    pub r: CarrierDoc,
    pub dot: Vec<Vec<usize>>,
    #[serde(default)]
    pub star_left: BTreeMap<String, Vec<Vec<usize>>>,
    #[serde(default)]
    pub star_right: BTreeMap<String, Vec<Vec<usize>>>,
    pub boundary: Vec<usize>,
    #[serde(default)]
    pub precrossed: bool,
}

impl XmodDoc {
    pub fn from_core(xm: &CrossedModule) -> Self {
        XmodDoc {
            e: CarrierDoc::from_core(xm.e()),
            r: CarrierDoc::from_core(xm.r()),
            dot: xm.action.tables.dot.clone(),
            star_left: xm.action.tables.star_left.clone(),
            star_right: xm.action.tables.star_right.clone(),
            boundary: xm.boundary.clone(),
            precrossed: xm.precrossed,
        }
    }

    pub fn into_core(self) -> Result<CrossedModule> {
        let action = DerivedAction::new(
            self.r.into_core()?,
            self.e.into_core()?,
            ActionTables {
                dot: self.dot,
                star_left: self.star_left,
                star_right: self.star_right,
            },
        )?;
        CrossedModule::new(action, self.boundary, self.precrossed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XmodMorphismDoc {
    pub source: XmodDoc,
    pub target: XmodDoc,
    pub f0: Vec<usize>,
    pub f1: Vec<usize>,
}

impl XmodMorphismDoc {
    pub fn from_core(m: &XmodMorphism) -> Self {
        XmodMorphismDoc {
            source: XmodDoc::from_core(&m.source),
            target: XmodDoc::from_core(&m.target),
            f0: m.f0.clone(),
            f1: m.f1.clone(),
        }
    }

    pub fn into_core(self) -> Result<XmodMorphism> {
        let source = self.source.into_core()?;
        let target = self.target.into_core()?;
        check_table("f0", &self.f0, source.r().size(), target.r().size())?;
        check_table("f1", &self.f1, source.e().size(), target.e().size())?;
        Ok(XmodMorphism {
            source,
            target,
            f0: self.f0,
            f1: self.f1,
        })
    }
}

fn check_table(what: &str, table: &[usize], len: u64, range: u64) -> Result<()> {
    if table.len() as u64 != len {
        return Err(Error::InvalidInput(format!(
            "{} has {} entries, expected {}",
            what,
            table.len(),
            len
        )));
    }
    if let Some(&bad) = table.iter().find(|&&v| v as u64 >= range) {
        return Err(Error::InvalidInput(format!(
            "{} value {} out of range 0..{}",
            what, bad, range
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivationDoc {
    pub morphism: XmodMorphismDoc,
    pub s: Vec<usize>,
}

impl DerivationDoc {
    pub fn from_core(d: &Derivation) -> Self {
        DerivationDoc {
            morphism: XmodMorphismDoc::from_core(&d.morphism),
            s: d.s.clone(),
        }
    }

    pub fn into_core(self) -> Result<Derivation> {
        Derivation::new(self.morphism.into_core()?, self.s)
    }
}

/// Several derivations over one shared morphism, as produced by the
/// enumeration commands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivationListDoc {
    pub morphism: XmodMorphismDoc,
    pub derivations: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplicialDoc {
    pub name: String,
    pub levels: Vec<CarrierDoc>,
    pub faces: Vec<Vec<Vec<usize>>>,
    pub degeneracies: Vec<Vec<Vec<usize>>>,
}

impl SimplicialDoc {
    pub fn from_core(x: &SimplicialObject) -> Self {
        SimplicialDoc {
            name: x.name.clone(),
            levels: x.levels.iter().map(CarrierDoc::from_core).collect(),
            faces: x.faces.clone(),
            degeneracies: x.degeneracies.clone(),
        }
    }

    pub fn into_core(self) -> Result<SimplicialObject> {
        let levels = self
            .levels
            .into_iter()
            .map(CarrierDoc::into_core)
            .collect::<Result<Vec<_>>>()?;
        SimplicialObject::new(self.name, levels, self.faces, self.degeneracies)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplicialMapDoc {
    pub source: SimplicialDoc,
    pub target: SimplicialDoc,
    pub maps: Vec<Vec<usize>>,
}

impl SimplicialMapDoc {
    pub fn from_core(m: &SimplicialMap) -> Self {
        SimplicialMapDoc {
            source: SimplicialDoc::from_core(&m.source),
            target: SimplicialDoc::from_core(&m.target),
            maps: m.maps.clone(),
        }
    }

    pub fn into_core(self) -> Result<SimplicialMap> {
        let source = self.source.into_core()?;
        let target = self.target.into_core()?;
        if self.maps.len() != source.levels.len() {
            return Err(Error::InvalidInput(format!(
                "map has {} levels, source has {}",
                self.maps.len(),
                source.levels.len()
            )));
        }
        for (k, map) in self.maps.iter().enumerate() {
            check_table(
                &format!("level {} map", k),
                map,
                source.levels[k].size(),
                target.levels[k].size(),
            )?;
        }
        Ok(SimplicialMap {
            source,
            target,
            maps: self.maps,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplicialHomotopyDoc {
    pub from: SimplicialMapDoc,
    pub to: SimplicialMapDoc,
    pub h: Vec<Vec<Vec<usize>>>,
}

impl SimplicialHomotopyDoc {
    pub fn from_core(hom: &SimplicialHomotopy) -> Self {
        SimplicialHomotopyDoc {
            from: SimplicialMapDoc::from_core(&hom.from),
            to: SimplicialMapDoc::from_core(&hom.to),
            h: hom.h.clone(),
        }
    }

    pub fn into_core(self) -> Result<SimplicialHomotopy> {
        Ok(SimplicialHomotopy {
            from: self.from.into_core()?,
            to: self.to.into_core()?,
            h: self.h,
        })
    }
}

/// Any value the toolkit reads or writes, tagged by `kind`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Document {
    OmegaGroup(CarrierDoc),
    Action(ActionDoc),
    Xmod(XmodDoc),
    XmodMorphism(XmodMorphismDoc),
    Derivation(DerivationDoc),
    DerivationList(DerivationListDoc),
    Simplicial(SimplicialDoc),
    SimplicialMap(SimplicialMapDoc),
    SimplicialHomotopy(SimplicialHomotopyDoc),
    Report(ValidationReport),
}

impl Document {
    /// A short noun for error messages.
    pub fn kind_name(&self) -> &'static str {
        match self {
            Document::OmegaGroup(_) => "omega-group",
            Document::Action(_) => "action",
            Document::Xmod(_) => "xmod",
            Document::XmodMorphism(_) => "xmod-morphism",
            Document::Derivation(_) => "derivation",
            Document::DerivationList(_) => "derivation-list",
            Document::Simplicial(_) => "simplicial",
            Document::SimplicialMap(_) => "simplicial-map",
            Document::SimplicialHomotopy(_) => "simplicial-homotopy",
            Document::Report(_) => "report",
        }
    }
}

/// Deterministic rendering: pretty JSON plus a trailing newline.
pub fn document_to_string(doc: &Document) -> String {
    let mut out = serde_json::to_string_pretty(doc).expect("documents always serialize");
    out.push('\n');
    out
}

pub fn parse_document(text: &str) -> Result<Document> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("bad document: {}", e)))
}

pub fn load_document(path: &Path) -> Result<Document> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("{}: {}", path.display(), e)))?;
    parse_document(&text)
}

pub fn save_document(path: &Path, doc: &Document) -> Result<()> {
    fs::write(path, document_to_string(doc))
        .map_err(|e| Error::InvalidInput(format!("{}: {}", path.display(), e)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{all_carriers, all_crossed_modules, precrossed_negation_z4_z2, s3};
    use crate::xmod::same_crossed_module;

    #[test]
    fn carriers_round_trip_and_stay_byte_stable() {
        for g in all_carriers() {
            let doc = Document::OmegaGroup(CarrierDoc::from_core(&g));
            let text = document_to_string(&doc);
            let back = parse_document(&text).unwrap();
            assert_eq!(document_to_string(&back), text, "{}", g.name);
            match back {
                Document::OmegaGroup(c) => {
                    let h = c.into_core().unwrap();
                    assert_eq!(h.backend, g.backend);
                    assert_eq!(h.signature, g.signature);
                }
                other => panic!("wrong kind {}", other.kind_name()),
            }
        }
    }

    #[test]
    fn crossed_modules_round_trip() {
        let mut all = all_crossed_modules();
        all.push(precrossed_negation_z4_z2());
        for xm in all {
            let doc = Document::Xmod(XmodDoc::from_core(&xm));
            let text = document_to_string(&doc);
            match parse_document(&text).unwrap() {
                Document::Xmod(d) => {
                    let back = d.into_core().unwrap();
                    assert!(same_crossed_module(&back, &xm));
                    assert_eq!(back.precrossed, xm.precrossed);
                }
                other => panic!("wrong kind {}", other.kind_name()),
            }
        }
    }

    #[test]
    fn tampered_identities_are_rejected() {
        let g = crate::fixtures::lie_affine_f3();
        let mut doc = CarrierDoc::from_core(&g);
        doc.signature.identities.pop();
        assert!(matches!(doc.into_core(), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn truncated_tables_are_rejected() {
        let g = s3();
        let mut doc = CarrierDoc::from_core(&g);
        if let Backend::Table(t) = &mut doc.backend {
            t.add.pop();
        }
        assert!(doc.into_core().is_err());
    }

    #[test]
    fn unknown_kind_is_a_parse_error() {
        let err = parse_document("{\"kind\": \"torsor\"}").unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }
}
