//! Command-line front end.
//!
//! Every subcommand is deterministic: the same invocation writes byte-identical
//! output. Floats are printed with 12 significant digits.
//!
//! CSV schemas (header row always present):
//!
//! | command        | columns                                                         |
//! |----------------|-----------------------------------------------------------------|
//! | `gen`          | `i,index,x,p,q`                                                 |
//! | `partition`    | `i,left,length,len_exp,kind,left_p,left_q`                      |
//! | `disc1d/2d`    | `measure,N,D,N_D,method,witness`                                |
//! | `vdc/halton`   | `i,x,y`                                                         |
//! | `resonance`    | `related,p,q,field_match,count_relation`                        |
//! | `scan`         | `N,D,N_D,N_D_over_log,N_D_over_log2,N_D_over_pow`               |
//!
//! `p`/`q` columns hold the exact rational parts of `p + qγ`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::discrepancy::{extreme_disc_1d, star_disc_1d, DiscrepancyReport, Witness};
use crate::error::{Error, Result};
use crate::partition::{partition_at_capped, DEFAULT_MAX_INTERVALS};
use crate::quadfield::{parse_params, LsParams};
use crate::sequence::{admissible_indices, sequence_prefix};
use crate::square::{detect_resonance, halton_pair, vdc_set, PointList2D, DEFAULT_MAX_EXP};

/// Environment variable overriding the partition interval cap.
pub const MAX_INTERVALS_ENV: &str = "LSQMC_MAX_INTERVALS";

/// Largest point count accepted by point-generating commands.
pub const MAX_POINTS: usize = 10_000_000;

const SVG_SIZE: u32 = 600;

#[derive(Debug, Parser)]
#[command(
    name = "lsqmc",
    version,
    about = "LS-sequences of partitions and points, discrepancy scans and resonance detection",
    after_help = "CSV columns:\n  gen        i,index,x,p,q\n  partition  i,left,length,len_exp,kind,left_p,left_q\n  disc1d/2d  measure,N,D,N_D,method,witness\n  vdc/halton i,x,y\n  resonance  related,p,q,field_match,count_relation\n  scan       N,D,N_D,N_D_over_log,N_D_over_log2,N_D_over_pow\n\nEnvironment: LSQMC_MAX_INTERVALS overrides the 1000000-interval partition cap."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// First N points of the LS-sequence.
    Gen {
        #[arg(long, value_parser = params_arg)]
        params: LsParams,
        #[arg(short = 'N', long = "count")]
        count: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Intervals of partition level n.
    Partition {
        #[arg(long, value_parser = params_arg)]
        params: LsParams,
        #[arg(short = 'n', long = "level")]
        level: u32,
        #[command(flatten)]
        out: Output,
    },
    /// Star and/or extreme discrepancy of the first N points.
    Disc1d {
        #[arg(long, value_parser = params_arg)]
        params: LsParams,
        #[arg(short = 'N', long = "count")]
        count: usize,
        #[arg(long, value_enum, default_value_t = Measure::Both)]
        measure: Measure,
        #[command(flatten)]
        out: Output,
    },
    /// Star discrepancy of a 2D set: van der Corput style with --p1 only, Halton style with --p2.
    Disc2d {
        #[arg(long, value_parser = params_arg)]
        p1: LsParams,
        #[arg(long, value_parser = params_arg)]
        p2: Option<LsParams>,
        #[arg(short = 'N', long = "count")]
        count: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Van der Corput style point set of order N.
    Vdc {
        #[arg(long, value_parser = params_arg)]
        params: LsParams,
        #[arg(short = 'N', long = "count")]
        count: usize,
        #[command(flatten)]
        out: Output,
    },
    /// First N points of the Halton style pair.
    Halton {
        #[arg(long, value_parser = params_arg)]
        p1: LsParams,
        #[arg(long, value_parser = params_arg)]
        p2: LsParams,
        #[arg(short = 'N', long = "count")]
        count: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Exact power relation between the two ratios.
    Resonance {
        #[arg(long, value_parser = params_arg)]
        p1: LsParams,
        #[arg(long, value_parser = params_arg)]
        p2: LsParams,
        #[arg(long, default_value_t = DEFAULT_MAX_EXP)]
        max_exp: u32,
        #[command(flatten)]
        out: Output,
    },
    /// Discrepancy over a list of sizes (or partition levels).
    Scan {
        #[arg(long, visible_alias = "p1", value_parser = params_arg)]
        params: LsParams,
        #[arg(long, value_parser = params_arg)]
        p2: Option<LsParams>,
        #[arg(long, value_enum, default_value_t = ScanKind::Sequence)]
        kind: ScanKind,
        /// Point counts, e.g. 100,1000,10000.
        #[arg(long, value_delimiter = ',', required_unless_present = "levels")]
        sizes: Vec<usize>,
        /// Partition levels (kind = partition).
        #[arg(long, value_delimiter = ',', conflicts_with = "sizes")]
        levels: Vec<u32>,
        /// Defaults to star for point sets and extreme for partitions.
        #[arg(long, value_enum)]
        measure: Option<Measure>,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file (stdout when absent).
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
    /// Shorthand for `--format svg --output PATH`.
    #[arg(long, conflicts_with_all = ["output", "format"])]
    pub svg: Option<PathBuf>,
    /// Overlay a 10×10 reference grid on SVG output.
    #[arg(long)]
    pub grid: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Measure {
    Star,
    Extreme,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScanKind {
    /// 1D prefix of the LS-sequence.
    Sequence,
    /// 2D van der Corput style set.
    Vdc,
    /// 2D Halton style pair (needs --p2).
    Halton,
    /// Left endpoints of partition levels (uses --levels).
    Partition,
}

fn params_arg(s: &str) -> std::result::Result<LsParams, String> {
    parse_params(s).map_err(|e| e.to_string())
}

/// Formats like C's `%.12g`.
pub fn fmt_float(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{v:.decimals$}");
        trim_zeros(&s)
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

fn interval_cap() -> Result<usize> {
    match std::env::var(MAX_INTERVALS_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Error::InvalidParams(format!("{MAX_INTERVALS_ENV} must be a positive integer, got `{v}`"))
        }),
        Err(_) => Ok(DEFAULT_MAX_INTERVALS),
    }
}

fn check_count(count: usize) -> Result<()> {
    if count == 0 {
        return Err(Error::InvalidParams("N must be at least 1".into()));
    }
    if count > MAX_POINTS {
        return Err(Error::ResourceLimit {
            what: "points",
            needed: count.to_string(),
            limit: MAX_POINTS,
        });
    }
    Ok(())
}

/// Serializable row of a scan table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub n: usize,
    pub d: f64,
    pub n_d: f64,
    pub n_d_over_log: f64,
    pub n_d_over_log2: f64,
    pub n_d_over_pow: f64,
}

impl ScanRow {
    pub fn new(n: usize, d: f64, growth_exponent: f64) -> Self {
        let nf = n as f64;
        let n_d = nf * d;
        let log = nf.ln();
        Self {
            n,
            d,
            n_d,
            n_d_over_log: n_d / log,
            n_d_over_log2: n_d / (log * log),
            n_d_over_pow: n_d / nf.powf(growth_exponent),
        }
    }
}

/// Computes a scan table without formatting it.
pub fn scan_rows(
    params: LsParams,
    p2: Option<LsParams>,
    kind: ScanKind,
    sizes: &[usize],
    levels: &[u32],
    measure: Option<Measure>,
) -> Result<Vec<ScanRow>> {
    let tau = params.growth_exponent();
    let disc1 = |pts: &[crate::QuadNum], m: Measure| match m {
        Measure::Extreme => extreme_disc_1d(pts),
        _ => star_disc_1d(pts),
    };
    match kind {
        ScanKind::Partition => {
            let m = measure.unwrap_or(Measure::Extreme);
            let cap = interval_cap()?;
            levels
                .iter()
                .map(|&lvl| {
                    let part = partition_at_capped(params, lvl, cap)?;
                    let ends = part.left_endpoints();
                    let r = disc1(ends.points(), m)?;
                    Ok(ScanRow::new(ends.len(), r.value, tau))
                })
                .collect()
        }
        ScanKind::Sequence => {
            let m = measure.unwrap_or(Measure::Star);
            let max = sizes.iter().copied().max().unwrap_or(0);
            check_count(max)?;
            let all = sequence_prefix(params, max);
            sizes
                .iter()
                .map(|&n| {
                    check_count(n)?;
                    let r = disc1(&all.points()[..n], m)?;
                    Ok(ScanRow::new(n, r.value, tau))
                })
                .collect()
        }
        ScanKind::Vdc | ScanKind::Halton => sizes
            .iter()
            .map(|&n| {
                check_count(n)?;
                let set = if kind == ScanKind::Vdc {
                    vdc_set(params, n)
                } else {
                    let p2 = p2.ok_or_else(|| Error::InvalidParams("halton scan needs --p2".into()))?;
                    halton_pair(params, p2, n)
                };
                let r = set.star_discrepancy()?;
                Ok(ScanRow::new(n, r.value, tau))
            })
            .collect(),
    }
}

/// Renders a 2D point set as an SVG scatter plot (600×600, radius-1 markers).
pub fn render_svg(set: &PointList2D, grid: bool) -> String {
    let size = f64::from(SVG_SIZE);
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{SVG_SIZE}\" height=\"{SVG_SIZE}\" viewBox=\"0 0 {SVG_SIZE} {SVG_SIZE}\">\n"
    ));
    s.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{SVG_SIZE}\" height=\"{SVG_SIZE}\" fill=\"white\"/>\n"
    ));
    if grid {
        s.push_str("<g stroke=\"#cccccc\" stroke-width=\"0.5\">\n");
        for k in 0..=10 {
            let v = fmt_float(size * f64::from(k) / 10.0);
            s.push_str(&format!("<line x1=\"{v}\" y1=\"0\" x2=\"{v}\" y2=\"{SVG_SIZE}\"/>\n"));
            s.push_str(&format!("<line x1=\"0\" y1=\"{v}\" x2=\"{SVG_SIZE}\" y2=\"{v}\"/>\n"));
        }
        s.push_str("</g>\n");
    }
    s.push_str("<g fill=\"black\">\n");
    for (x, y) in set.shadow_points() {
        s.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"1\"/>\n",
            fmt_float(x * size),
            fmt_float((1.0 - y) * size)
        ));
    }
    s.push_str("</g>\n</svg>\n");
    s
}

fn witness_text(w: &Witness) -> String {
    match *w {
        Witness::Interval { lo, hi, count } => format!(
            "{}{},{}{} count={count}",
            if lo.closed { '[' } else { ']' },
            fmt_float(lo.at),
            fmt_float(hi.at),
            if hi.closed { ']' } else { '[' },
        ),
        Witness::Box { x, y, closed, count } => format!(
            "[0,{}{}x[0,{}{} count={count}",
            fmt_float(x),
            if closed { ']' } else { '[' },
            fmt_float(y),
            if closed { ']' } else { '[' },
        ),
    }
}

fn report_json(measure: &str, r: &DiscrepancyReport) -> Value {
    json!({
        "measure": measure,
        "N": r.n,
        "D": fmt_float(r.value).parse::<f64>().unwrap_or(r.value),
        "N_D": fmt_float(r.n as f64 * r.value).parse::<f64>().unwrap_or(f64::NAN),
        "method": r.method,
        "witness": r.witness,
    })
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let ser = |e: csv::Error| Error::Serialize(e.to_string());
        w.write_record(&self.header).map_err(ser)?;
        for r in &self.rows {
            w.write_record(r).map_err(ser)?;
        }
        w.into_inner().map_err(|e| Error::Serialize(e.to_string()))
    }

    fn json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| {
                    let obj = self
                        .header
                        .iter()
                        .zip(r)
                        .map(|(k, v)| {
                            let val = v
                                .parse::<f64>()
                                .ok()
                                .filter(|f| f.is_finite())
                                .and_then(|_| serde_json::from_str::<Value>(v).ok())
                                .unwrap_or_else(|| Value::String(v.clone()));
                            ((*k).to_string(), val)
                        })
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

enum Artifact {
    Table(Table),
    Json(Value),
    Points(PointList2D, Table),
}

fn resolve_format(out: &Output, default: Format) -> Format {
    if out.svg.is_some() {
        Format::Svg
    } else {
        out.format.unwrap_or(default)
    }
}

fn encode(artifact: Artifact, format: Format, grid: bool) -> Result<Vec<u8>> {
    let pretty = |v: &Value| {
        let mut s = serde_json::to_vec_pretty(v).map_err(|e| Error::Serialize(e.to_string()))?;
        s.push(b'\n');
        Ok::<_, Error>(s)
    };
    match (artifact, format) {
        (Artifact::Points(set, _), Format::Svg) => Ok(render_svg(&set, grid).into_bytes()),
        (_, Format::Svg) => Err(Error::InvalidParams(
            "svg output is only available for vdc and halton".into(),
        )),
        (Artifact::Table(t) | Artifact::Points(_, t), Format::Csv) => t.csv(),
        (Artifact::Table(t) | Artifact::Points(_, t), Format::Json) => pretty(&t.json()),
        (Artifact::Json(v), Format::Json) => pretty(&v),
        (Artifact::Json(v), Format::Csv) => {
            // Flat objects become a one-row table; arrays of flat objects a table.
            let rows: Vec<&serde_json::Map<String, Value>> = match &v {
                Value::Array(a) => a.iter().filter_map(Value::as_object).collect(),
                Value::Object(o) => vec![o],
                _ => vec![],
            };
            let Some(first) = rows.first() else {
                return Ok(Vec::new());
            };
            let mut w = csv::Writer::from_writer(Vec::new());
            let ser = |e: csv::Error| Error::Serialize(e.to_string());
            w.write_record(first.keys()).map_err(ser)?;
            for r in &rows {
                let cells: Vec<String> = r
                    .values()
                    .map(|c| match c {
                        Value::String(s) => s.clone(),
                        Value::Null => String::new(),
                        Value::Number(n) => n
                            .as_f64()
                            .filter(|_| !n.is_i64() && !n.is_u64())
                            .map(fmt_float)
                            .unwrap_or_else(|| n.to_string()),
                        other => other.to_string(),
                    })
                    .collect();
                w.write_record(&cells).map_err(ser)?;
            }
            w.into_inner().map_err(|e| Error::Serialize(e.to_string()))
        }
    }
}

fn points_table(set: &PointList2D) -> Table {
    let mut t = Table::new(&["i", "x", "y"]);
    for (i, (x, y)) in set.shadow_points().enumerate() {
        t.push(vec![(i + 1).to_string(), fmt_float(x), fmt_float(y)]);
    }
    t
}

fn execute(command: &Command) -> Result<(Artifact, &Output, Format)> {
    Ok(match command {
        Command::Gen { params, count, out } => {
            check_count(*count)?;
            let idx = admissible_indices(*params, *count);
            let pts = sequence_prefix(*params, *count);
            let mut t = Table::new(&["i", "index", "x", "p", "q"]);
            for (i, ((n, x), f)) in idx.iter().zip(pts.points()).zip(pts.shadow()).enumerate() {
                t.push(vec![
                    (i + 1).to_string(),
                    n.to_string(),
                    fmt_float(*f),
                    x.p().to_string(),
                    x.q().to_string(),
                ]);
            }
            (Artifact::Table(t), out, Format::Csv)
        }
        Command::Partition { params, level, out } => {
            let part = partition_at_capped(*params, *level, interval_cap()?)?;
            let mut t = Table::new(&["i", "left", "length", "len_exp", "kind", "left_p", "left_q"]);
            let g = params.gamma_f64();
            for (i, iv) in part.intervals().iter().enumerate() {
                t.push(vec![
                    (i + 1).to_string(),
                    fmt_float(iv.left.to_f64()),
                    fmt_float(g.powi(iv.len_exp as i32)),
                    iv.len_exp.to_string(),
                    if part.is_long(iv) { "long" } else { "short" }.into(),
                    iv.left.p().to_string(),
                    iv.left.q().to_string(),
                ]);
            }
            (Artifact::Table(t), out, Format::Csv)
        }
        Command::Disc1d {
            params,
            count,
            measure,
            out,
        } => {
            check_count(*count)?;
            let pts = sequence_prefix(*params, *count);
            let mut reports = Vec::new();
            if matches!(measure, Measure::Star | Measure::Both) {
                reports.push(("star", star_disc_1d(pts.points())?));
            }
            if matches!(measure, Measure::Extreme | Measure::Both) {
                reports.push(("extreme", extreme_disc_1d(pts.points())?));
            }
            (reports_artifact(&reports, out)?, out, Format::Csv)
        }
        Command::Disc2d { p1, p2, count, out } => {
            check_count(*count)?;
            let set = match p2 {
                Some(p2) => halton_pair(*p1, *p2, *count),
                None => vdc_set(*p1, *count),
            };
            let r = set.star_discrepancy()?;
            (reports_artifact(&[("star", r)], out)?, out, Format::Csv)
        }
        Command::Vdc { params, count, out } => {
            check_count(*count)?;
            let set = vdc_set(*params, *count);
            let t = points_table(&set);
            (Artifact::Points(set, t), out, Format::Csv)
        }
        Command::Halton { p1, p2, count, out } => {
            check_count(*count)?;
            let set = halton_pair(*p1, *p2, *count);
            let t = points_table(&set);
            (Artifact::Points(set, t), out, Format::Csv)
        }
        Command::Resonance {
            p1,
            p2,
            max_exp,
            out,
        } => {
            if *max_exp == 0 {
                return Err(Error::InvalidParams("--max-exp must be at least 1".into()));
            }
            let r = detect_resonance(*p1, *p2, *max_exp);
            let v = json!({
                "related": r.related,
                "p": r.p(),
                "q": r.q(),
                "field_match": r.field_match,
                "count_relation": r.count_relation,
            });
            (Artifact::Json(v), out, Format::Json)
        }
        Command::Scan {
            params,
            p2,
            kind,
            sizes,
            levels,
            measure,
            out,
        } => {
            if *kind == ScanKind::Partition && levels.is_empty() {
                return Err(Error::InvalidParams("partition scan needs --levels".into()));
            }
            if *kind != ScanKind::Partition && sizes.is_empty() {
                return Err(Error::InvalidParams("scan needs --sizes".into()));
            }
            let rows = scan_rows(*params, *p2, *kind, sizes, levels, *measure)?;
            let mut t = Table::new(&[
                "N",
                "D",
                "N_D",
                "N_D_over_log",
                "N_D_over_log2",
                "N_D_over_pow",
            ]);
            for r in rows {
                t.push(vec![
                    r.n.to_string(),
                    fmt_float(r.d),
                    fmt_float(r.n_d),
                    fmt_float(r.n_d_over_log),
                    fmt_float(r.n_d_over_log2),
                    fmt_float(r.n_d_over_pow),
                ]);
            }
            (Artifact::Table(t), out, Format::Csv)
        }
    })
}

fn reports_artifact(reports: &[(&str, DiscrepancyReport)], out: &Output) -> Result<Artifact> {
    if out.format == Some(Format::Json) {
        return Ok(Artifact::Json(Value::Array(
            reports.iter().map(|(m, r)| report_json(m, r)).collect(),
        )));
    }
    let mut t = Table::new(&["measure", "N", "D", "N_D", "method", "witness"]);
    for (m, r) in reports {
        t.push(vec![
            (*m).to_string(),
            r.n.to_string(),
            fmt_float(r.value),
            fmt_float(r.n as f64 * r.value),
            serde_json::to_value(r.method)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default(),
            witness_text(&r.witness),
        ]);
    }
    Ok(Artifact::Table(t))
}

/// Runs a parsed command, writing to the requested file or to `stdout`.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    let (artifact, out, default) = execute(&cli.command)?;
    let format = resolve_format(out, default);
    let bytes = encode(artifact, format, out.grid)?;
    match out.svg.as_ref().or(out.output.as_ref()) {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path)?);
            f.write_all(&bytes)?;
            f.flush()?;
        }
        None => stdout.write_all(&bytes)?,
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the command. Returns
/// the process exit status: 0 on success, 1 on invalid input, 2 when a
/// resource guard trips.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = write!(stderr, "{}", e.render());
            if code == 0 {
                let _ = write!(stdout, "{}", e.render());
            }
            return code;
        }
    };
    match run(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
