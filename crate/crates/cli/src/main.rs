//! `hbl`: exact exponent polytopes and numerical checks for products of
//! vertical projections on the Heisenberg group.
//!
//! Exit codes: 0 success, 2 user error, 3 infeasible region / rejected point,
//! 4 computation budget exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};

use hbl_core::conditions::{
    build_family, build_system, critical_subspaces, FamilySpec, ProjectionConfig, QVec,
    Relation, SubspaceFamily, SystemMode,
};
use hbl_core::frames::frame_report;
use hbl_core::heisenberg::measure::{image_measure_bracket, GridParams, MeasureError};
use hbl_core::heisenberg::montecarlo::{mc_form_estimate, rwt_ratio_sweep};
use hbl_core::heisenberg::witness::{fit_log_slope, parameter_ladder, BoxWitness};
use hbl_core::heisenberg::VerticalProjection;
use hbl_core::polytope::HPolytope;
use hbl_core::rat::{fmt_rat, parse_rat, rat_to_f64, Rat};

use hbl_cli::config::{
    load_boxes, load_config, parse_family_flag, parse_p_flag, parse_q_tuple,
    parse_rat_list, parse_subspace_flag, LoadedConfig,
};
use hbl_cli::report::{
    montecarlo_csv_rows, witness_csv_rows, write_csv, CheckSection, ConfigEcho,
    ConstraintLine, FramePairLine, FramePointLine, FramesSection, McSection,
    PolytopeSection, RatioRow, RunReport, SlopeLine, SweepLine, WitnessRow,
    WitnessSection,
};
use hbl_cli::svg;

#[derive(Parser)]
#[command(
    name = "hbl",
    version,
    about = "Exact exponent polytopes and numerical witnesses for vertical projections \
             on the Heisenberg group"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Necessary,
    Sufficient,
    Both,
}

impl ModeArg {
    fn modes(self) -> Vec<(SystemMode, &'static str)> {
        match self {
            ModeArg::Necessary => vec![(SystemMode::Necessary, "necessary")],
            ModeArg::Sufficient => vec![(SystemMode::Sufficient, "sufficient")],
            ModeArg::Both => vec![
                (SystemMode::Necessary, "necessary"),
                (SystemMode::Sufficient, "sufficient"),
            ],
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Svg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConditionArg {
    /// Isotropic box growth; forces the scaling equalities.
    Scaling,
    /// Dilation of a subspace V; forces the lower bounds B1/B2.
    B,
    /// Compression against a pair (V, W); upper end of the balance.
    C1,
    /// Compression against a pair (V, W); lower end of the balance.
    C2,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the admissible exponent polytope of a configuration.
    Polytope {
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Both)]
        mode: ModeArg,
        /// coords | heuristic[:DEPTH] | file:PATH
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
    },
    /// Test exponent tuples against the condition systems.
    Check {
        config: PathBuf,
        /// Reciprocal exponents, e.g. "1/5,2/5,1/5,2/5".
        #[arg(long)]
        q: Option<String>,
        /// Exponents in p-notation, e.g. "5,5/2,inf".
        #[arg(long)]
        p: Option<String>,
        #[arg(long, value_enum, default_value_t = ModeArg::Both)]
        mode: ModeArg,
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Measure a parameterized box family and fit growth exponents.
    Witness {
        config: PathBuf,
        #[arg(long, value_enum)]
        condition: ConditionArg,
        /// Subspace V: "full", "zero", or spanning vectors "1,0;1,-1".
        #[arg(long)]
        v: Option<String>,
        /// Subspace W (compression conditions only).
        #[arg(long)]
        w: Option<String>,
        /// base,factor,count — geometric parameter ladder.
        #[arg(long, default_value = "8,2,5")]
        ladder: String,
        /// Grid step for the measure brackets, as an exact rational.
        #[arg(long = "grid-h", default_value = "1/4")]
        grid_h: String,
        /// Maximum number of grid cells per measurement.
        #[arg(long)]
        budget: Option<u64>,
        /// Optional reciprocal exponents for the ratio column.
        #[arg(long)]
        q: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
    /// Tangent-frame analysis and extreme-point readout.
    Frames {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo estimate of the multilinear form on box indicators.
    Montecarlo {
        config: PathBuf,
        /// JSON list of codomain boxes, one per projection index.
        #[arg(long)]
        boxes: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        #[arg(long, default_value_t = 17)]
        seed: u64,
        /// Reciprocal exponents weighting the dilation sweep.
        #[arg(long)]
        weights: Option<String>,
        /// Comma-separated dilation parameters, e.g. "1,2,4,8,16".
        #[arg(long)]
        lambdas: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
    },
    /// Render a 2-D slice of a polytope report as SVG (+ CSV of vertices).
    Plot {
        /// JSON report produced by the polytope command.
        report: PathBuf,
        /// Two 1-based exponent coordinates, e.g. "1,2".
        #[arg(long)]
        slice: String,
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    User(anyhow::Error),
    Infeasible(String),
    Budget(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::User(e)
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::User(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Infeasible(msg)) => {
            eprintln!("infeasible: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("budget exceeded: {msg}");
            ExitCode::from(4)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Polytope { config, mode, family, out, format } => {
            cmd_polytope(&config, mode, family.as_deref(), out.as_deref(), format)
        }
        Cmd::Check { config, q, p, mode, family, out } => {
            cmd_check(&config, q.as_deref(), p.as_deref(), mode, family.as_deref(), out.as_deref())
        }
        Cmd::Witness { config, condition, v, w, ladder, grid_h, budget, q, out, format } => {
            cmd_witness(
                &config,
                condition,
                v.as_deref(),
                w.as_deref(),
                &ladder,
                &grid_h,
                budget,
                q.as_deref(),
                out.as_deref(),
                format,
            )
        }
        Cmd::Frames { config, out } => cmd_frames(&config, out.as_deref()),
        Cmd::Montecarlo { config, boxes, budget, seed, weights, lambdas, out, format } => {
            cmd_montecarlo(
                &config,
                &boxes,
                budget,
                seed,
                weights.as_deref(),
                lambdas.as_deref(),
                out.as_deref(),
                format,
            )
        }
        Cmd::Plot { report, slice, out } => cmd_plot(&report, &slice, &out),
    }
}

fn config_echo(loaded: &LoadedConfig) -> ConfigEcho {
    let cfg = &loaded.cfg;
    ConfigEcho {
        n: cfg.n(),
        m: cfg.m(),
        projections: (0..cfg.m()).map(|j| cfg.subspace(j).label()).collect(),
        has_offsets: !loaded.offsets.is_empty(),
    }
}

fn relation_str(r: Relation) -> &'static str {
    match r {
        Relation::Eq => "=",
        Relation::Ge => ">=",
        Relation::Le => "<=",
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => {
            std::fs::write(path, text)
                .with_context(|| format!("cannot write {}", path.display()))?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
    }
}

fn resolve_family(
    loaded: &LoadedConfig,
    flag: Option<&str>,
) -> Result<SubspaceFamily, Failure> {
    let spec = match flag {
        Some(text) => parse_family_flag(text, loaded.cfg.n())?,
        None => loaded.family.clone().unwrap_or(FamilySpec::Heuristic { depth: 2 }),
    };
    Ok(build_family(&loaded.cfg, &spec).map_err(|e| anyhow!(e))?)
}

fn polytope_section(
    cfg: &ProjectionConfig,
    family: &SubspaceFamily,
    mode: SystemMode,
    mode_name: &str,
) -> Result<PolytopeSection, Failure> {
    let rows = build_system(cfg, family, mode).map_err(|e| anyhow!(e))?;
    let hp = HPolytope::new(cfg.num_exponents(), rows);
    let poly = hp.enumerate_vertices().map_err(|e| anyhow!(e))?;
    Ok(PolytopeSection {
        mode: mode_name.to_string(),
        family_singles: family.singles.len(),
        family_pairs: family.pairs.len(),
        constraints: hp
            .constraints()
            .iter()
            .map(|c| ConstraintLine {
                tag: c.tag.to_string(),
                relation: relation_str(c.relation).to_string(),
                coeffs: c.coeffs.iter().map(fmt_rat).collect(),
                rhs: fmt_rat(&c.rhs),
            })
            .collect(),
        feasible: !poly.is_empty(),
        affine_dim: poly.affine_dim,
        vertices: poly
            .vertices
            .iter()
            .map(|v| v.iter().map(fmt_rat).collect())
            .collect(),
    })
}

fn cmd_polytope(
    config: &Path,
    mode: ModeArg,
    family_flag: Option<&str>,
    out: Option<&Path>,
    format: FormatArg,
) -> Result<(), Failure> {
    if format != FormatArg::Json {
        return Err(anyhow!("polytope supports --format json only").into());
    }
    let loaded = load_config(config)?;
    let family = resolve_family(&loaded, family_flag)?;
    let mut rep = RunReport::new("polytope", config_echo(&loaded));
    for (m, name) in mode.modes() {
        rep.polytopes.push(polytope_section(&loaded.cfg, &family, m, name)?);
    }
    let infeasible: Vec<&str> = rep
        .polytopes
        .iter()
        .filter(|s| !s.feasible)
        .map(|s| s.mode.as_str())
        .collect();
    emit(&rep.to_json(), out)?;
    if !infeasible.is_empty() {
        return Err(Failure::Infeasible(format!(
            "empty polytope in mode(s): {}",
            infeasible.join(", ")
        )));
    }
    Ok(())
}

fn q_strings(q: &QVec) -> (Vec<String>, Vec<String>) {
    let qs = q.0.iter().map(fmt_rat).collect();
    let ps = q
        .to_p()
        .iter()
        .map(|p| p.as_ref().map(fmt_rat).unwrap_or_else(|| "inf".to_string()))
        .collect();
    (qs, ps)
}

fn cmd_check(
    config: &Path,
    q_flag: Option<&str>,
    p_flag: Option<&str>,
    mode: ModeArg,
    family_flag: Option<&str>,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let loaded = load_config(config)?;
    let cfg = &loaded.cfg;
    let mut tuples: Vec<QVec> = Vec::new();
    match (q_flag, p_flag) {
        (Some(_), Some(_)) => {
            return Err(anyhow!("give either --q or --p, not both").into())
        }
        (Some(text), None) => tuples.push(parse_q_tuple(text)?),
        (None, Some(text)) => tuples.push(parse_p_flag(text)?),
        (None, None) => tuples = loaded.exponents.clone(),
    }
    if tuples.is_empty() {
        return Err(anyhow!(
            "no exponents: pass --q or --p, or list \"exponents\" in the config"
        )
        .into());
    }
    for q in &tuples {
        if q.len() != cfg.num_exponents() {
            return Err(anyhow!(
                "exponent tuple has {} entries, expected {}",
                q.len(),
                cfg.num_exponents()
            )
            .into());
        }
    }
    let family = resolve_family(&loaded, family_flag)?;
    let mut rep = RunReport::new("check", config_echo(&loaded));
    let mut all_inside = true;
    for q in &tuples {
        let critical: Vec<String> = critical_subspaces(cfg, &family.singles, q)
            .map_err(|e| anyhow!(e))?
            .iter()
            .map(|s| s.label())
            .collect();
        for (m, name) in mode.modes() {
            let rows = build_system(cfg, &family, m).map_err(|e| anyhow!(e))?;
            let hp = HPolytope::new(cfg.num_exponents(), rows);
            let violated: Vec<String> =
                hp.violated_at(q.as_slice()).iter().map(|c| c.tag.to_string()).collect();
            let inside = violated.is_empty();
            all_inside &= inside;
            let (qs, ps) = q_strings(q);
            rep.checks.push(CheckSection {
                q: qs,
                p: ps,
                mode: name.to_string(),
                inside,
                violated,
                critical_subspaces: critical.clone(),
            });
        }
    }
    emit(&rep.to_json(), out)?;
    if !all_inside {
        return Err(Failure::Infeasible("exponent tuple rejected".into()));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_witness(
    config: &Path,
    condition: ConditionArg,
    v_flag: Option<&str>,
    w_flag: Option<&str>,
    ladder_flag: &str,
    grid_h: &str,
    budget: Option<u64>,
    q_flag: Option<&str>,
    out: Option<&Path>,
    format: FormatArg,
) -> Result<(), Failure> {
    if format == FormatArg::Svg {
        return Err(anyhow!("witness supports --format json or csv").into());
    }
    let loaded = load_config(config)?;
    let cfg = &loaded.cfg;
    let n = cfg.n();

    let need_v = || -> Result<_, Failure> {
        let text = v_flag.ok_or_else(|| anyhow!("this condition needs --v"))?;
        Ok(parse_subspace_flag(text, n)?)
    };
    let (witness, v_label, w_label) = match condition {
        ConditionArg::Scaling => (BoxWitness::scaling(cfg), None, None),
        ConditionArg::B => {
            let v = need_v()?;
            let label = v.label();
            (BoxWitness::dilation(cfg, &v), Some(label), None)
        }
        ConditionArg::C1 | ConditionArg::C2 => {
            let v = need_v()?;
            let w_text = w_flag.ok_or_else(|| anyhow!("this condition needs --w"))?;
            let w = parse_subspace_flag(w_text, n)?;
            let built = if condition == ConditionArg::C1 {
                BoxWitness::compressed_small(cfg, &v, &w)
            } else {
                BoxWitness::compressed_large(cfg, &v, &w)
            };
            let wit = built.map_err(|e| anyhow!(e))?;
            (wit, Some(v.label()), Some(w.label()))
        }
    };

    let parts: Vec<&str> = ladder_flag.split(',').collect();
    if parts.len() != 3 {
        return Err(anyhow!("--ladder wants base,factor,count").into());
    }
    let base: u64 = parts[0].trim().parse().context("bad ladder base")?;
    let factor: u64 = parts[1].trim().parse().context("bad ladder factor")?;
    let count: usize = parts[2].trim().parse().context("bad ladder count")?;
    if base == 0 || factor < 2 || count < 2 {
        return Err(anyhow!("ladder needs base >= 1, factor >= 2, count >= 2").into());
    }
    let ladder = parameter_ladder(base, factor, count);

    let step = parse_rat(grid_h).map_err(|e| anyhow!("bad --grid-h: {e}"))?;
    if step <= hbl_core::rat::rat(0, 1) {
        return Err(anyhow!("--grid-h must be positive").into());
    }
    let mut grid = GridParams { max_step: step, ..GridParams::default() };
    if let Some(b) = budget {
        grid.max_cells = b;
    }

    let q = match q_flag {
        None => None,
        Some(text) => {
            let q = parse_q_tuple(text)?;
            if q.len() != cfg.num_exponents() {
                return Err(anyhow!(
                    "--q has {} entries, expected {}",
                    q.len(),
                    cfg.num_exponents()
                )
                .into());
            }
            Some(q)
        }
    };

    let projs = VerticalProjection::family(cfg, &loaded.offsets).map_err(|e| anyhow!(e))?;
    let mut rows: Vec<WitnessRow> = Vec::new();
    let mut ratios: Vec<RatioRow> = Vec::new();
    let mut params_done: Vec<f64> = Vec::new();
    let mut domain_vals: Vec<f64> = Vec::new();
    let mut image_lo: Vec<Vec<f64>> = vec![Vec::new(); projs.len()];
    let mut image_hi: Vec<Vec<f64>> = vec![Vec::new(); projs.len()];
    let mut budget_exceeded = false;

    'ladder: for r in &ladder {
        let boxi = witness.instantiate(r).map_err(|e| anyhow!(e))?;
        let param = fmt_rat(r);
        let vol = boxi.volume_f64();
        let mut rung_rows = vec![WitnessRow {
            param: param.clone(),
            series: "domain".into(),
            lower: vol,
            upper: vol,
        }];
        let mut mids = Vec::with_capacity(projs.len());
        for (i, proj) in projs.iter().enumerate() {
            match image_measure_bracket(proj, &boxi, &grid) {
                Ok(br) => {
                    rung_rows.push(WitnessRow {
                        param: param.clone(),
                        series: format!("img{}", i + 1),
                        lower: br.lower_f64(),
                        upper: br.upper_f64(),
                    });
                    mids.push((br.lower_f64(), br.upper_f64(), br.midpoint_f64()));
                }
                Err(MeasureError::Budget { .. }) => {
                    budget_exceeded = true;
                    break 'ladder;
                }
                Err(e) => return Err(anyhow!(e).into()),
            }
        }
        // The rung is recorded only once every projection fit in budget, so
        // partial tables stay rectangular.
        params_done.push(rat_to_f64(r));
        domain_vals.push(vol);
        for (i, (lo, hi, _)) in mids.iter().enumerate() {
            image_lo[i].push(*lo);
            image_hi[i].push(*hi);
        }
        rows.extend(rung_rows);
        if let Some(q) = &q {
            let mut denom = 1.0f64;
            for (i, (_, _, mid)) in mids.iter().enumerate() {
                denom *= mid.powf(rat_to_f64(&q.0[i]));
            }
            ratios.push(RatioRow { param, value: vol / denom });
        }
    }

    let mut slopes = vec![SlopeLine {
        series: "domain".into(),
        predicted: witness.predicted_domain_exp as f64,
        lower_slope: fit_log_slope(&params_done, &domain_vals).ok(),
        upper_slope: fit_log_slope(&params_done, &domain_vals).ok(),
    }];
    for i in 0..projs.len() {
        slopes.push(SlopeLine {
            series: format!("img{}", i + 1),
            predicted: witness.predicted_image_exps[i] as f64,
            lower_slope: fit_log_slope(&params_done, &image_lo[i]).ok(),
            upper_slope: fit_log_slope(&params_done, &image_hi[i]).ok(),
        });
    }

    let section = WitnessSection {
        kind: match condition {
            ConditionArg::Scaling => "scaling",
            ConditionArg::B => "dilation",
            ConditionArg::C1 => "compression-upper",
            ConditionArg::C2 => "compression-lower",
        }
        .to_string(),
        v: v_label,
        w: w_label,
        ladder: ladder.iter().map(fmt_rat).collect(),
        grid_step: fmt_rat(&grid.max_step),
        one_sided: witness.one_sided,
        rows,
        slopes,
        ratios,
        budget_exceeded,
    };

    let text = match format {
        FormatArg::Json => {
            let mut rep = RunReport::new("witness", config_echo(&loaded));
            rep.witness = Some(section.clone());
            rep.to_json()
        }
        _ => {
            let mut buf = Vec::new();
            write_csv(&mut buf, &witness_csv_rows(&section))?;
            String::from_utf8(buf).expect("csv is utf-8")
        }
    };
    emit(&text, out)?;
    if budget_exceeded {
        return Err(Failure::Budget(format!(
            "grid budget of {} cells exceeded; table truncated",
            grid.max_cells
        )));
    }
    Ok(())
}

fn cmd_frames(config: &Path, out: Option<&Path>) -> Result<(), Failure> {
    let loaded = load_config(config)?;
    let cfg = &loaded.cfg;
    let rep_core = frame_report(cfg).map_err(|e| anyhow!(e))?;

    // Cross-check the readout against the sufficient-mode polytope.
    let family = resolve_family(&loaded, None)?;
    let rows =
        build_system(cfg, &family, SystemMode::Sufficient).map_err(|e| anyhow!(e))?;
    let hp = HPolytope::new(cfg.num_exponents(), rows);
    let poly = hp.enumerate_vertices().map_err(|e| anyhow!(e))?;

    let mut points = Vec::new();
    for q in &rep_core.points {
        let violated: Vec<String> =
            hp.violated_at(q.as_slice()).iter().map(|c| c.tag.to_string()).collect();
        points.push(FramePointLine {
            q: q.0.iter().map(fmt_rat).collect(),
            in_sufficient: violated.is_empty(),
            violated,
        });
    }
    let mut frame_set: Vec<Vec<Rat>> = rep_core.points.iter().map(|q| q.0.clone()).collect();
    frame_set.sort();
    frame_set.dedup();
    let matches = frame_set == poly.vertices;

    let mut rep = RunReport::new("frames", config_echo(&loaded));
    rep.frames = Some(FramesSection {
        pairs: rep_core
            .pairs
            .iter()
            .map(|p| FramePairLine {
                x_index: p.x_index + 1,
                y_index: p.y_index + 1,
                bracket: fmt_rat(&p.bracket),
            })
            .collect(),
        points,
        conjectural: rep_core.conjectural,
        matches_sufficient_vertices: matches,
    });
    emit(&rep.to_json(), out)?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_montecarlo(
    config: &Path,
    boxes_path: &Path,
    budget: u64,
    seed: u64,
    weights_flag: Option<&str>,
    lambdas_flag: Option<&str>,
    out: Option<&Path>,
    format: FormatArg,
) -> Result<(), Failure> {
    if format == FormatArg::Svg {
        return Err(anyhow!("montecarlo supports --format json or csv").into());
    }
    let loaded = load_config(config)?;
    let cfg = &loaded.cfg;
    let projs = VerticalProjection::family(cfg, &loaded.offsets).map_err(|e| anyhow!(e))?;
    let boxes = load_boxes(boxes_path)?;
    let est = mc_form_estimate(&projs, &boxes, budget, seed).map_err(|e| anyhow!(e))?;

    let mut sweep = Vec::new();
    match (weights_flag, lambdas_flag) {
        (None, None) => {}
        (Some(wt), Some(lt)) => {
            let weights: Vec<f64> =
                parse_rat_list(wt)?.iter().map(rat_to_f64).collect();
            let lambdas: Vec<f64> =
                parse_rat_list(lt)?.iter().map(rat_to_f64).collect();
            let pts = rwt_ratio_sweep(&projs, &boxes, &weights, &lambdas, budget, seed)
                .map_err(|e| anyhow!(e))?;
            sweep = pts
                .iter()
                .map(|p| SweepLine {
                    lambda: p.lambda,
                    mean: p.estimate.mean,
                    std_err: p.estimate.std_err,
                    ratio: p.ratio,
                    ratio_err: p.ratio_err,
                })
                .collect();
        }
        _ => {
            return Err(anyhow!("--weights and --lambdas go together").into());
        }
    }

    let section = McSection {
        samples: budget,
        mean: est.mean,
        std_err: est.std_err,
        hits: est.hits,
        sample_volume: est.volume,
        sweep,
    };
    let text = match format {
        FormatArg::Csv => {
            let mut buf = Vec::new();
            write_csv(&mut buf, &montecarlo_csv_rows(&section))?;
            String::from_utf8(buf).expect("csv is utf-8")
        }
        _ => {
            let mut rep = RunReport::new("montecarlo", config_echo(&loaded));
            rep.seed = Some(seed);
            rep.montecarlo = Some(section.clone());
            rep.to_json()
        }
    };
    emit(&text, out)?;
    Ok(())
}

fn cmd_plot(report_path: &Path, slice: &str, out: &Path) -> Result<(), Failure> {
    let text = std::fs::read_to_string(report_path)
        .with_context(|| format!("cannot read report {}", report_path.display()))?;
    let rep: RunReport = serde_json::from_str(&text)
        .with_context(|| format!("cannot parse report {}", report_path.display()))?;
    if rep.polytopes.is_empty() {
        return Err(anyhow!("report has no polytope sections to plot").into());
    }

    let idx: Vec<usize> = slice
        .split(',')
        .map(|s| s.trim().parse::<usize>().context("bad --slice index"))
        .collect::<Result<_, _>>()?;
    if idx.len() != 2 || idx[0] == idx[1] || idx.iter().any(|&i| i == 0) {
        return Err(anyhow!("--slice wants two distinct 1-based coordinates").into());
    }
    let dims = 2 * rep.config.m;
    if idx.iter().any(|&i| i > dims) {
        return Err(anyhow!("--slice index exceeds {} exponent coordinates", dims).into());
    }
    let (ia, ib) = (idx[0] - 1, idx[1] - 1);

    let mut series = Vec::new();
    let mut csv_lines = vec!["mode,vertex,x,y".to_string()];
    for sec in &rep.polytopes {
        if sec.affine_dim > 2 {
            return Err(anyhow!(
                "{} region has affine dimension {}; the slice is not 2-D after \
                 equality elimination",
                sec.mode,
                sec.affine_dim
            )
            .into());
        }
        let mut exact: Vec<(Rat, Rat)> = Vec::new();
        for v in &sec.vertices {
            let a = parse_rat(&v[ia]).map_err(|e| anyhow!("bad vertex entry: {e}"))?;
            let b = parse_rat(&v[ib]).map_err(|e| anyhow!("bad vertex entry: {e}"))?;
            exact.push((a, b));
        }
        let mut dedup = exact.clone();
        dedup.sort();
        dedup.dedup();
        if dedup.len() != exact.len() {
            return Err(anyhow!(
                "slice ({},{}) collapses distinct {} vertices; pick coordinates that \
                 the equalities leave free",
                idx[0],
                idx[1],
                sec.mode
            )
            .into());
        }
        let points: Vec<(f64, f64, String)> = exact
            .iter()
            .map(|(a, b)| {
                (rat_to_f64(a), rat_to_f64(b), format!("({}, {})", a, b))
            })
            .collect();
        for (k, (a, b)) in exact.iter().enumerate() {
            csv_lines.push(format!("{},{},{},{}", sec.mode, k + 1, a, b));
        }
        series.push(svg::SliceSeries {
            name: sec.mode.clone(),
            points,
            dash: if sec.mode == "sufficient" { "6,4" } else { "" },
        });
    }

    let title = format!("exponent region slice (q{}, q{})", idx[0], idx[1]);
    let image = svg::render_slice(
        &title,
        &format!("q{}", idx[0]),
        &format!("q{}", idx[1]),
        &series,
    );
    std::fs::write(out, image)
        .with_context(|| format!("cannot write {}", out.display()))?;
    let csv_path = out.with_extension("csv");
    std::fs::write(&csv_path, csv_lines.join("\n") + "\n")
        .with_context(|| format!("cannot write {}", csv_path.display()))?;
    eprintln!("wrote {} and {}", out.display(), csv_path.display());
    Ok(())
}
