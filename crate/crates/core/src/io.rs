//! JSON state files, report serialization and CSV output.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::faithful::TransformReport;
use crate::spectra::{schmidt_spectrum, BipartiteState, SchmidtSpectrum};

/// Raw JSON shape: exactly one of `schmidt` or `amplitudes`.
#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct StateJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    schmidt: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    amplitudes: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateSource {
    Schmidt(SchmidtSpectrum<f64>),
    Amplitudes(BipartiteState<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateSpec {
    pub source: StateSource,
    pub label: Option<String>,
}

impl StateSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: StateJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let source = match (raw.schmidt, raw.amplitudes) {
            (Some(p), None) => StateSource::Schmidt(SchmidtSpectrum::new(p)?),
            (None, Some(rows)) => {
                let rows = rows
                    .into_iter()
                    .map(|r| r.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
                    .collect();
                StateSource::Amplitudes(BipartiteState::from_rows(rows)?)
            }
            (Some(_), Some(_)) => {
                return Err(Error::Validation(
                    "state must give either \"schmidt\" or \"amplitudes\", not both".into(),
                ))
            }
            (None, None) => {
                return Err(Error::Validation(
                    "state needs a \"schmidt\" or \"amplitudes\" field".into(),
                ))
            }
        };
        Ok(Self {
            source,
            label: raw.label,
        })
    }

    /// Schmidt weights; amplitude input goes through the SVD.
    pub fn spectrum(&self) -> Result<SchmidtSpectrum<f64>> {
        match &self.source {
            StateSource::Schmidt(s) => Ok(s.clone()),
            StateSource::Amplitudes(st) => schmidt_spectrum(st),
        }
    }

    pub fn to_json(&self) -> String {
        let raw = match &self.source {
            StateSource::Schmidt(s) => StateJson {
                schmidt: Some(s.to_f64_vec()),
                ..Default::default()
            },
            StateSource::Amplitudes(st) => StateJson {
                amplitudes: Some(
                    st.rows()
                        .into_iter()
                        .map(|r| r.into_iter().map(|z| [z.re, z.im]).collect())
                        .collect(),
                ),
                ..Default::default()
            },
        };
        serde_json::to_string(&StateJson {
            label: self.label.clone(),
            ..raw
        })
        .expect("state serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentJson {
    pub l: usize,
    pub r: f64,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
}

/// Wire form of a [`TransformReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub f_opt: f64,
    pub xi: Vec<f64>,
    pub trace_distance: f64,
    pub p_conclusive: f64,
    pub deterministic: bool,
    pub segments: Vec<SegmentJson>,
    #[serde(default)]
    pub input_reordered: bool,
}

impl From<&TransformReport<f64>> for ReportJson {
    fn from(r: &TransformReport<f64>) -> Self {
        Self {
            f_opt: r.f_opt,
            xi: r.xi.to_f64_vec(),
            trace_distance: r.trace_distance,
            p_conclusive: r.conclusive_p,
            deterministic: r.deterministic,
            segments: r
                .staircase
                .segments()
                .iter()
                .map(|s| SegmentJson {
                    l: s.l,
                    r: s.r,
                    a: s.a,
                    b: s.b,
                })
                .collect(),
            input_reordered: r.input_reordered,
        }
    }
}

/// Plain-decimal rendering with 12 significant digits; scientific notation
/// outside `[1e-4, 1e12)`.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000000".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-4..12).contains(&mag) {
        return format!("{:.11e}", x);
    }
    let decimals = (11 - mag).max(0) as usize;
    format!("{:.*}", decimals, x)
}

/// Header plus numeric rows, written as RFC 4180 CSV.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.header.len() {
            return Err(Error::Dimension(format!(
                "row has {} fields, header has {}",
                row.len(),
                self.header.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn write_to<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_writer(out);
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|x| format_sig12(*x))).map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn emit_csv(table: &CsvTable, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    table.write_to(std::io::BufWriter::new(file))
}
