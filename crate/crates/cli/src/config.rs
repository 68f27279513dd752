//! JSON input schemas: projection configurations and sampling boxes.

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;

use hbl_core::conditions::{FamilySpec, ProjectionConfig, QVec};
use hbl_core::heisenberg::montecarlo::CodomainBox;
use hbl_core::linalg::Subspace;
use hbl_core::rat::{parse_rat, rat, rat_to_f64, Rat};

/// Exact scalar: a plain integer or a fraction string like `"3/40"`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum RatLike {
    Int(i64),
    Str(String),
}

impl RatLike {
    pub fn to_rat(&self) -> Result<Rat> {
        match self {
            RatLike::Int(k) => Ok(Rat::from_integer((*k).into())),
            RatLike::Str(s) => parse_rat(s).map_err(|e| anyhow!("bad rational {s:?}: {e}")),
        }
    }
}

fn rat_vec(raw: &[RatLike]) -> Result<Vec<Rat>> {
    raw.iter().map(RatLike::to_rat).collect()
}

/// One subspace, either as 1-based coordinate indices or a spanning basis.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceSpec {
    #[serde(default)]
    pub coords: Option<Vec<usize>>,
    #[serde(default)]
    pub basis: Option<Vec<Vec<RatLike>>>,
}

impl SubspaceSpec {
    pub fn to_subspace(&self, n: usize) -> Result<Subspace> {
        match (&self.coords, &self.basis) {
            (Some(idx), None) => {
                let mut zero_based = Vec::with_capacity(idx.len());
                for &i in idx {
                    if i == 0 || i > n {
                        bail!("coordinate index {i} outside 1..={n}");
                    }
                    if zero_based.contains(&(i - 1)) {
                        bail!("coordinate index {i} repeated");
                    }
                    zero_based.push(i - 1);
                }
                Ok(Subspace::coordinate(n, &zero_based))
            }
            (None, Some(vectors)) => {
                let mut parsed = Vec::with_capacity(vectors.len());
                for v in vectors {
                    let v = rat_vec(v)?;
                    if v.len() != n {
                        bail!("basis vector has {} entries, ambient is {n}", v.len());
                    }
                    parsed.push(v);
                }
                Ok(Subspace::span(n, &parsed))
            }
            _ => bail!("each projection needs exactly one of \"coords\" or \"basis\""),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OffsetPair {
    pub a: Vec<RatLike>,
    pub b: Vec<RatLike>,
}

/// Optional subspace family selection inside a config file.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum FamilyField {
    Named(String),
    Heuristic { heuristic: usize },
    Explicit { explicit: Vec<SubspaceSpec> },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub n: usize,
    #[serde(default)]
    pub m: Option<usize>,
    pub projections: Vec<SubspaceSpec>,
    #[serde(default)]
    pub offsets: Option<Vec<OffsetPair>>,
    #[serde(default)]
    pub family: Option<FamilyField>,
    /// Exponent tuples to test, in p-notation; `"inf"` means an infinite
    /// exponent (reciprocal 0).
    #[serde(default)]
    pub exponents: Option<Vec<Vec<RatLike>>>,
}

pub struct LoadedConfig {
    pub cfg: ProjectionConfig,
    pub offsets: Vec<(Vec<Rat>, Vec<Rat>)>,
    pub family: Option<FamilySpec>,
    pub exponents: Vec<QVec>,
}

pub fn load_config(path: &std::path::Path) -> Result<LoadedConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config {}", path.display()))?;
    let file: ConfigFile = serde_json::from_str(&text)
        .with_context(|| format!("cannot parse config {}", path.display()))?;

    if file.n == 0 || file.n > 16 {
        bail!("ambient dimension n must be in 1..=16, got {}", file.n);
    }
    if let Some(m) = file.m {
        if m != file.projections.len() {
            bail!("m = {m} but {} projections are listed", file.projections.len());
        }
    }
    let subs: Vec<Subspace> = file
        .projections
        .iter()
        .enumerate()
        .map(|(j, s)| {
            s.to_subspace(file.n).with_context(|| format!("projection {}", j + 1))
        })
        .collect::<Result<_>>()?;
    let cfg = ProjectionConfig::new(file.n, subs)?;

    let mut offsets = Vec::new();
    if let Some(raw) = &file.offsets {
        if raw.len() != 2 * cfg.m() {
            bail!("offsets must list {} (a, b) pairs, got {}", 2 * cfg.m(), raw.len());
        }
        for (i, p) in raw.iter().enumerate() {
            let a = rat_vec(&p.a).with_context(|| format!("offset {} a", i + 1))?;
            let b = rat_vec(&p.b).with_context(|| format!("offset {} b", i + 1))?;
            offsets.push((a, b));
        }
    }

    let family = match &file.family {
        None => None,
        Some(f) => Some(parse_family_field(f, file.n)?),
    };

    let mut exponents = Vec::new();
    for (i, row) in file.exponents.iter().flatten().enumerate() {
        let q = parse_p_tuple(row)
            .with_context(|| format!("exponent tuple {}", i + 1))?;
        if q.len() != cfg.num_exponents() {
            bail!(
                "exponent tuple {} has {} entries, expected {}",
                i + 1,
                q.len(),
                cfg.num_exponents()
            );
        }
        exponents.push(q);
    }

    Ok(LoadedConfig { cfg, offsets, family, exponents })
}

fn parse_family_field(f: &FamilyField, n: usize) -> Result<FamilySpec> {
    match f {
        FamilyField::Named(s) if s == "coords" => Ok(FamilySpec::Coordinate),
        FamilyField::Named(s) if s == "heuristic" => Ok(FamilySpec::Heuristic { depth: 2 }),
        FamilyField::Named(s) => bail!("unknown family {s:?} (use \"coords\" or \"heuristic\")"),
        FamilyField::Heuristic { heuristic } => {
            Ok(FamilySpec::Heuristic { depth: *heuristic })
        }
        FamilyField::Explicit { explicit } => {
            let subs = explicit
                .iter()
                .map(|s| s.to_subspace(n))
                .collect::<Result<Vec<_>>>()?;
            Ok(FamilySpec::Explicit(subs))
        }
    }
}

/// `--family` flag: `coords`, `heuristic`, `heuristic:DEPTH`, or `file:PATH`
/// pointing at a JSON list of subspace specs.
pub fn parse_family_flag(text: &str, n: usize) -> Result<FamilySpec> {
    if text == "coords" {
        return Ok(FamilySpec::Coordinate);
    }
    if text == "heuristic" {
        return Ok(FamilySpec::Heuristic { depth: 2 });
    }
    if let Some(depth) = text.strip_prefix("heuristic:") {
        let depth: usize = depth.parse().context("bad heuristic depth")?;
        return Ok(FamilySpec::Heuristic { depth });
    }
    if let Some(path) = text.strip_prefix("file:") {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read family file {path}"))?;
        let specs: Vec<SubspaceSpec> =
            serde_json::from_str(&text).context("family file must be a JSON list")?;
        let subs =
            specs.iter().map(|s| s.to_subspace(n)).collect::<Result<Vec<_>>>()?;
        return Ok(FamilySpec::Explicit(subs));
    }
    bail!("unknown family {text:?} (use coords, heuristic[:DEPTH], or file:PATH)")
}

/// Comma-separated exact rationals, e.g. `"1/5,2/5,1/5,2/5"`.
pub fn parse_rat_list(text: &str) -> Result<Vec<Rat>> {
    text.split(',')
        .map(|s| parse_rat(s.trim()).map_err(|e| anyhow!("bad rational {s:?}: {e}")))
        .collect()
}

/// Reciprocal tuple from q-notation; entries must lie in [0, 1].
pub fn parse_q_tuple(text: &str) -> Result<QVec> {
    let q = parse_rat_list(text)?;
    for e in &q {
        if e < &rat(0, 1) || e > &rat(1, 1) {
            bail!("reciprocal exponent {} outside [0, 1]", e);
        }
    }
    Ok(QVec(q))
}

/// Exponent tuple in p-notation (`"inf"` allowed, every p >= 1).
pub fn parse_p_tuple(raw: &[RatLike]) -> Result<QVec> {
    let mut p = Vec::with_capacity(raw.len());
    for e in raw {
        match e {
            RatLike::Str(s) if s.trim() == "inf" => p.push(None),
            other => p.push(Some(other.to_rat()?)),
        }
    }
    Ok(QVec::from_p(&p)?)
}

pub fn parse_p_flag(text: &str) -> Result<QVec> {
    let raw: Vec<RatLike> =
        text.split(',').map(|s| RatLike::Str(s.trim().to_string())).collect();
    parse_p_tuple(&raw)
}

/// Subspace from a flag: semicolon-separated spanning vectors of
/// comma-separated rationals, e.g. `"1,0;1,-1"`; `"zero"` and `"full"` are
/// shorthands.
pub fn parse_subspace_flag(text: &str, n: usize) -> Result<Subspace> {
    match text {
        "zero" => return Ok(Subspace::zero(n)),
        "full" => return Ok(Subspace::full(n)),
        _ => {}
    }
    let mut vectors = Vec::new();
    for part in text.split(';') {
        let v = parse_rat_list(part)?;
        if v.len() != n {
            bail!("subspace vector {part:?} has {} entries, ambient is {n}", v.len());
        }
        vectors.push(v);
    }
    Ok(Subspace::span(n, &vectors))
}

/// Interval as a two-element array of exact scalars.
#[derive(Clone, Debug, Deserialize)]
pub struct RangeSpec(pub RatLike, pub RatLike);

impl RangeSpec {
    fn to_f64(&self) -> Result<(f64, f64)> {
        let lo = rat_to_f64(&self.0.to_rat()?);
        let hi = rat_to_f64(&self.1.to_rat()?);
        // Zero-width ranges are allowed: they encode an identically-zero
        // indicator.
        if lo > hi {
            bail!("inverted range [{lo}, {hi}]");
        }
        Ok((lo, hi))
    }
}

/// Box-indicator spec for one projection codomain: per-coordinate ranges for
/// the projected part, the untouched block, and the central coordinate.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxSpec {
    #[serde(default)]
    pub c: Vec<RangeSpec>,
    pub free: Vec<RangeSpec>,
    pub t: RangeSpec,
}

impl BoxSpec {
    pub fn to_codomain_box(&self) -> Result<CodomainBox> {
        let mut c_lo = Vec::new();
        let mut c_hi = Vec::new();
        for r in &self.c {
            let (lo, hi) = r.to_f64()?;
            c_lo.push(lo);
            c_hi.push(hi);
        }
        let mut free_lo = Vec::new();
        let mut free_hi = Vec::new();
        for r in &self.free {
            let (lo, hi) = r.to_f64()?;
            free_lo.push(lo);
            free_hi.push(hi);
        }
        let (t_lo, t_hi) = self.t.to_f64()?;
        Ok(CodomainBox { c_lo, c_hi, free_lo, free_hi, t_lo, t_hi })
    }
}

pub fn load_boxes(path: &std::path::Path) -> Result<Vec<CodomainBox>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read boxes {}", path.display()))?;
    let specs: Vec<BoxSpec> =
        serde_json::from_str(&text).context("boxes file must be a JSON list")?;
    specs.iter().map(BoxSpec::to_codomain_box).collect()
}
