//! The in-repo curve corpus, referenced by id from the CLI and the tests.

use std::path::Path;

use brody_core::CurveMap;

use crate::doc::CurveDoc;
use crate::error::{CliError, CliResult};

/// `(id, description, document)`.
pub const CORPUS: &[(&str, &str, &str)] = &[
    ("constant", "constant curve [1:0]", include_str!("../corpus/constant.json")),
    ("identity", "f(z) = [1:z]", include_str!("../corpus/identity.json")),
    ("rational3", "degree-3 rational curve [z^3 - 2 : 3z^2 + z]", include_str!("../corpus/rational3.json")),
    ("exp_quarter", "f(z) = [1:e^{z/4}]", include_str!("../corpus/exp_quarter.json")),
    ("exp_unit", "f(z) = [1:e^z]", include_str!("../corpus/exp_unit.json")),
    ("exp_brody", "[1:e^{cz}] rescaled to sup |df| = 1", include_str!("../corpus/exp_brody.json")),
    ("wp_hex", "hexagonal [1:wp] rescaled to sup |df| = 1", include_str!("../corpus/wp_hex.json")),
    ("wp_hex_half", "wp_hex precomposed with z/2", include_str!("../corpus/wp_hex_half.json")),
    ("wp_hex_quarter", "wp_hex precomposed with z/4", include_str!("../corpus/wp_hex_quarter.json")),
    ("glued_exp", "one bump glued onto [1:e^{z/4}] at z = -40", include_str!("../corpus/glued_exp.json")),
];

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub id: String,
    pub description: String,
    pub doc: CurveDoc,
    pub curve: CurveMap,
}

pub fn ids() -> impl Iterator<Item = &'static str> {
    CORPUS.iter().map(|e| e.0)
}

pub fn load(id: &str) -> CliResult<CorpusEntry> {
    let (id, description, text) =
        CORPUS.iter().find(|e| e.0 == id).ok_or_else(|| CliError::UnknownCurve(id.to_string()))?;
    let doc = CurveDoc::parse(text)?;
    let curve = doc.to_curve()?;
    Ok(CorpusEntry { id: id.to_string(), description: description.to_string(), doc, curve })
}

pub fn load_all() -> CliResult<Vec<CorpusEntry>> {
    ids().map(load).collect()
}

/// A corpus id, or else a path to a JSON curve document. Returns the id used
/// in output records (the corpus id or the path) and the curve.
pub fn resolve(spec: &str) -> CliResult<(String, CurveMap)> {
    if CORPUS.iter().any(|e| e.0 == spec) {
        return Ok((spec.to_string(), load(spec)?.curve));
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(CliError::UnknownCurve(spec.to_string()));
    }
    let doc = CurveDoc::parse(&std::fs::read_to_string(path)?)?;
    Ok((spec.to_string(), doc.to_curve()?))
}
