//! Machine-readable run reports.  Field order is fixed by declaration and no
//! maps are used, so identical inputs serialize to identical bytes.

use serde::{Deserialize, Serialize};

pub const TOOL: &str = "hbl";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub config: ConfigEcho,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub polytopes: Vec<PolytopeSection>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub checks: Vec<CheckSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frames: Option<FramesSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub montecarlo: Option<McSection>,
}

impl RunReport {
    pub fn new(command: &str, config: ConfigEcho) -> Self {
        Self {
            tool: TOOL.to_string(),
            version: VERSION.to_string(),
            command: command.to_string(),
            seed: None,
            config,
            polytopes: Vec::new(),
            checks: Vec::new(),
            witness: None,
            frames: None,
            montecarlo: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub n: usize,
    pub m: usize,
    /// Canonical subspace labels, one per projection index.
    pub projections: Vec<String>,
    pub has_offsets: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConstraintLine {
    pub tag: String,
    pub relation: String,
    pub coeffs: Vec<String>,
    pub rhs: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolytopeSection {
    pub mode: String,
    pub family_singles: usize,
    pub family_pairs: usize,
    pub constraints: Vec<ConstraintLine>,
    pub feasible: bool,
    pub affine_dim: i64,
    /// Exact vertices as fraction strings.
    pub vertices: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckSection {
    pub q: Vec<String>,
    pub p: Vec<String>,
    pub mode: String,
    pub inside: bool,
    pub violated: Vec<String>,
    pub critical_subspaces: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessRow {
    pub param: String,
    pub series: String,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SlopeLine {
    pub series: String,
    pub predicted: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_slope: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper_slope: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessSection {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<String>,
    pub ladder: Vec<String>,
    pub grid_step: String,
    pub one_sided: bool,
    pub rows: Vec<WitnessRow>,
    pub slopes: Vec<SlopeLine>,
    /// Weighted ratios upper(domain) / prod lower(image)^q when q was given.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub ratios: Vec<RatioRow>,
    pub budget_exceeded: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RatioRow {
    pub param: String,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FramePairLine {
    /// 1-based projection indices.
    pub x_index: usize,
    pub y_index: usize,
    pub bracket: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FramePointLine {
    pub q: Vec<String>,
    pub in_sufficient: bool,
    pub violated: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FramesSection {
    pub pairs: Vec<FramePairLine>,
    pub points: Vec<FramePointLine>,
    pub conjectural: bool,
    /// True when the frame points coincide with the sufficient-mode vertex
    /// set; the skew examples report the gap here.
    pub matches_sufficient_vertices: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct McSection {
    pub samples: u64,
    pub mean: f64,
    pub std_err: f64,
    pub hits: u64,
    pub sample_volume: f64,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub sweep: Vec<SweepLine>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepLine {
    pub lambda: f64,
    pub mean: f64,
    pub std_err: f64,
    pub ratio: f64,
    pub ratio_err: f64,
}

/// Long-format CSV used for ladders and sweeps.
pub const CSV_HEADER: [&str; 6] = ["record", "param", "series", "lower", "upper", "value"];

pub struct CsvRow {
    pub record: String,
    pub param: String,
    pub series: String,
    pub lower: String,
    pub upper: String,
    pub value: String,
}

pub fn write_csv<W: std::io::Write>(out: W, rows: &[CsvRow]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([&r.record, &r.param, &r.series, &r.lower, &r.upper, &r.value])?;
    }
    w.flush()?;
    Ok(())
}

fn fmt_f64(x: f64) -> String {
    // Shortest round-trippable form keeps reports byte-stable.
    let mut s = format!("{x}");
    if !s.contains('.') && !s.contains('e') && !s.contains("inf") && !s.contains("NaN") {
        s.push_str(".0");
    }
    s
}

pub fn witness_csv_rows(section: &WitnessSection) -> Vec<CsvRow> {
    let mut rows = Vec::new();
    for r in &section.rows {
        rows.push(CsvRow {
            record: "measure".into(),
            param: r.param.clone(),
            series: r.series.clone(),
            lower: fmt_f64(r.lower),
            upper: fmt_f64(r.upper),
            value: String::new(),
        });
    }
    for s in &section.slopes {
        rows.push(CsvRow {
            record: "slope".into(),
            param: String::new(),
            series: s.series.clone(),
            lower: s.lower_slope.map(fmt_f64).unwrap_or_default(),
            upper: s.upper_slope.map(fmt_f64).unwrap_or_default(),
            value: fmt_f64(s.predicted),
        });
    }
    for r in &section.ratios {
        rows.push(CsvRow {
            record: "ratio".into(),
            param: r.param.clone(),
            series: "weighted".into(),
            lower: String::new(),
            upper: String::new(),
            value: fmt_f64(r.value),
        });
    }
    if section.budget_exceeded {
        rows.push(CsvRow {
            record: "status".into(),
            param: String::new(),
            series: "budget-exceeded".into(),
            lower: String::new(),
            upper: String::new(),
            value: String::new(),
        });
    }
    rows
}

pub fn montecarlo_csv_rows(section: &McSection) -> Vec<CsvRow> {
    let mut rows = vec![CsvRow {
        record: "estimate".into(),
        param: String::new(),
        series: "form".into(),
        lower: fmt_f64(section.mean - section.std_err),
        upper: fmt_f64(section.mean + section.std_err),
        value: fmt_f64(section.mean),
    }];
    for l in &section.sweep {
        rows.push(CsvRow {
            record: "sweep".into(),
            param: fmt_f64(l.lambda),
            series: "form".into(),
            lower: fmt_f64(l.mean - l.std_err),
            upper: fmt_f64(l.mean + l.std_err),
            value: fmt_f64(l.mean),
        });
        rows.push(CsvRow {
            record: "sweep".into(),
            param: fmt_f64(l.lambda),
            series: "ratio".into(),
            lower: fmt_f64(l.ratio - l.ratio_err),
            upper: fmt_f64(l.ratio + l.ratio_err),
            value: fmt_f64(l.ratio),
        });
    }
    rows
}
