//! JSON-lines result records and CSV field dumps.

use std::io::Write;

use brody_core::search::FieldGrid;
use serde::Serialize;

use crate::config::RunConfig;
use crate::doc::RegionDoc;
use crate::error::CliResult;

/// One numeric result.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub op: String,
    pub curve_id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub region: Option<RegionDoc>,
    pub value: serde_json::Value,
    /// Error estimate or bound attached to `value`.
    pub error: Option<f64>,
    /// Method parameters and auxiliary outputs.
    pub params: serde_json::Value,
    pub config: RunConfig,
}

impl Record {
    pub fn new(op: &str, curve_id: &str, config: &RunConfig) -> Self {
        Self {
            op: op.to_string(),
            curve_id: curve_id.to_string(),
            region: None,
            value: serde_json::Value::Null,
            error: None,
            params: serde_json::Value::Null,
            config: config.clone(),
        }
    }

    pub fn region(mut self, r: &brody_core::Region) -> Self {
        self.region = Some(RegionDoc::from_region(r));
        self
    }

    pub fn value(mut self, v: impl Serialize) -> Self {
        self.value = serde_json::to_value(v).expect("serializable");
        self
    }

    pub fn error(mut self, e: f64) -> Self {
        self.error = Some(e);
        self
    }

    pub fn params(mut self, p: serde_json::Value) -> Self {
        self.params = p;
        self
    }
}

/// Writes one compact JSON object per line.
pub struct JsonLines<W: Write> {
    out: W,
}

impl<W: Write> JsonLines<W> {
    pub fn new(out: W) -> Self {
        Self { out }
    }

    pub fn write<T: Serialize>(&mut self, rec: &T) -> CliResult<()> {
        serde_json::to_writer(&mut self.out, rec)?;
        self.out.write_all(b"\n")?;
        Ok(())
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

/// Dumps a sampled field as `x,y,value` rows.
pub fn write_field_csv<W: Write>(out: W, field: &FieldGrid) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "y", "value"])?;
    for j in 0..field.ny {
        for i in 0..field.nx {
            let z = field.point(i, j);
            w.serialize((z.re, z.im, field.get(i, j)))?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_header_and_rows() {
        let f = FieldGrid { x0: 0.0, y0: 1.0, step: 0.5, nx: 2, ny: 1, values: vec![0.25, 0.5] };
        let mut buf = Vec::new();
        write_field_csv(&mut buf, &f).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "x,y,value\n0.0,1.0,0.25\n0.5,1.0,0.5\n");
    }

    #[test]
    fn records_are_single_lines() {
        let cfg = RunConfig::new("eval", serde_json::json!({"z": [0.0, 0.0]}));
        let mut w = JsonLines::new(Vec::new());
        w.write(&Record::new("eval", "constant", &cfg).value(0.0)).unwrap();
        let s = String::from_utf8(w.into_inner()).unwrap();
        assert_eq!(s.lines().count(), 1);
        assert!(s.contains("\"op\":\"eval\""));
        assert!(!s.contains("threads"));
    }
}
