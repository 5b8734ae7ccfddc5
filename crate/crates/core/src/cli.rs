//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification or computation failure, 2 usage or
//! input error. JSON and CSV carry the same numbers, printed with 17
//! significant digits.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C;
use serde_json::{json, Map, Number, Value};

use crate::curve::{Genus, LoopSymbol};
use crate::error::Error;
use crate::iterated::{
    basis_iterated_matrix, harmonic_pair_closed, harmonic_pair_iterated, loop_iterated_closed,
};
use crate::mod2::connecting::connecting_class;
use crate::mod2::functionals::{
    invariant_functionals, psi_table, second_proof_table, ActingGroup, ModuleKind,
};
use crate::mod2::presentation::{dual_homology_presentation, presentation_h1};
use crate::periods::{z_cotangent, z_schindler, FormRef, HarmonicCoefficients, PeriodMatrices};
use crate::quadrature::QuadConfig;
use crate::tolerances::{MOD2_CUBE_MAX_GENUS, QUAD_ABS_TOL, QUAD_DEFAULT_LEVEL, SNAP};
use crate::verify::{verify_genus, VerifyConfig};
use crate::volume::{volume_table, VolumeEngine};

#[derive(Parser, Debug)]
#[command(
    name = "hvol",
    version,
    about = "Harmonic volumes of the hyperelliptic curves w^2 = z^(2g+2) - 1"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: RunOptions,
}

#[derive(Args, Debug, Clone)]
pub struct RunOptions {
    /// Genus, 3 to 12.
    #[arg(
        long,
        global = true,
        default_value_t = 3,
        allow_negative_numbers = true
    )]
    pub genus: i64,
    /// Snap tolerance for volume values.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Maximum tanh-sinh level for the quadrature oracle.
    #[arg(long, global = true, env = "HVOL_QUAD_LEVEL")]
    pub quad_level: Option<u32>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Omega_a, Omega_b and Z.
    Periods,
    /// Z by three routes with its diagnostics.
    PeriodMatrix,
    /// Iterated integrals of omega' pairs and of alpha/beta pairs over a_k, b_k.
    Iterated,
    /// Harmonic volume on every element of the family A.
    VolumeTable,
    /// Invariant dimensions, psi, the second-proof table, H^1 and the connecting class.
    Mod2,
    /// Every cross-check at the given genus.
    Verify,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Periods => "periods",
            Command::PeriodMatrix => "period-matrix",
            Command::Iterated => "iterated",
            Command::VolumeTable => "volume-table",
            Command::Mod2 => "mod2",
            Command::Verify => "verify",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Validated settings.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub genus: Genus,
    pub snap: f64,
    pub quad: QuadConfig,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
}

impl RunConfig {
    pub fn from_options(o: &RunOptions) -> Result<Self, Error> {
        let genus = Genus::new(o.genus)?;
        let snap = o.tol.unwrap_or(SNAP);
        if !(snap > 0.0 && snap < 0.25) {
            return Err(Error::Config(format!(
                "--tol must lie in (0, 0.25), got {snap}"
            )));
        }
        let quad = QuadConfig::new(o.quad_level.unwrap_or(QUAD_DEFAULT_LEVEL), QUAD_ABS_TOL)?;
        if o.jobs == Some(0) {
            return Err(Error::Config("--jobs must be at least 1".into()));
        }
        Ok(RunConfig {
            genus,
            snap,
            quad,
            format: o.format,
            out: o.out.clone(),
            jobs: o.jobs,
        })
    }
}

/// A command's result: a JSON body under one top-level key, plus the same
/// content as CSV rows and text lines.
struct Report {
    key: &'static str,
    body: Value,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    text: Vec<String>,
    failed: bool,
}

/// 17 significant digits; `null` in JSON for non-finite values.
pub fn fmt_f64(x: f64) -> String {
    let s = format!("{:.16e}", if x == 0.0 { 0.0 } else { x });
    match s.split_once('e') {
        Some((m, e)) if !e.starts_with('-') => format!("{m}e+{e}"),
        _ => s,
    }
}

fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(
            fmt_f64(x)
                .parse::<Number>()
                .expect("formatted float is valid JSON"),
        )
    } else {
        Value::Null
    }
}

fn cnum(c: C) -> Value {
    json!({"re": num(c.re), "im": num(c.im)})
}

fn matrix_json(m: &nalgebra::DMatrix<C>) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|r| Value::Array((0..m.ncols()).map(|c| cnum(m[(r, c)])).collect()))
            .collect(),
    )
}

fn loops(g: Genus) -> Vec<LoopSymbol> {
    (1..=g.get())
        .flat_map(|k| [LoopSymbol::A(k), LoopSymbol::B(k)])
        .collect()
}

fn matrices_report(
    named: Vec<(&'static str, nalgebra::DMatrix<C>)>,
    extra: Vec<(&'static str, f64)>,
) -> Report {
    let mut body = Map::new();
    let mut rows = Vec::new();
    let mut text = Vec::new();
    for (name, m) in &named {
        body.insert(name.to_string(), matrix_json(m));
        text.push(format!("{name}:"));
        for r in 0..m.nrows() {
            let cells: Vec<String> = (0..m.ncols())
                .map(|c| {
                    let v = m[(r, c)];
                    rows.push(vec![
                        name.to_string(),
                        (r + 1).to_string(),
                        (c + 1).to_string(),
                        fmt_f64(v.re),
                        fmt_f64(v.im),
                    ]);
                    format!("{:>12.8}{:+.8}i", v.re, v.im)
                })
                .collect();
            text.push(format!("  {}", cells.join("  ")));
        }
    }
    for (name, v) in extra {
        body.insert(name.to_string(), num(v));
        rows.push(vec![
            name.to_string(),
            String::new(),
            String::new(),
            fmt_f64(v),
            String::new(),
        ]);
        text.push(format!("{name}: {v:.3e}"));
    }
    Report {
        key: "matrices",
        body: Value::Object(body),
        header: vec!["matrix", "row", "col", "re", "im"],
        rows,
        text,
        failed: false,
    }
}

fn cmd_periods(cfg: &RunConfig) -> Result<Report, Error> {
    let p = PeriodMatrices::new(cfg.genus)?;
    Ok(matrices_report(
        vec![("omega_a", p.omega_a), ("omega_b", p.omega_b), ("z", p.z)],
        vec![],
    ))
}

fn cmd_period_matrix(cfg: &RunConfig) -> Result<Report, Error> {
    let g = cfg.genus;
    let p = PeriodMatrices::new(g)?;
    let sym = p.symmetry_error();
    let re = p.real_part_max();
    let pivot = p.im_z_min_pivot();
    Ok(matrices_report(
        vec![
            ("z", p.z),
            ("z_schindler", z_schindler(g)),
            ("z_cotangent", z_cotangent(g)),
        ],
        vec![
            ("symmetry_error", sym),
            ("real_part_max", re),
            ("im_z_min_pivot", pivot),
        ],
    ))
}

fn cmd_iterated(cfg: &RunConfig) -> Result<Report, Error> {
    let g = cfg.genus;
    let h = HarmonicCoefficients::for_genus(g)?;
    let basis = FormRef::basis(g);
    let mut entries = Vec::new();
    let mut rows = Vec::new();
    let mut text = Vec::new();
    let mut push = |table: &str, s: LoopSymbol, f1: FormRef, f2: FormRef, v: C, closed: C| {
        entries.push(json!({
            "table": table, "loop": s.to_string(), "first": f1.to_string(), "second": f2.to_string(),
            "value": cnum(v), "closed": cnum(closed),
        }));
        rows.push(vec![
            table.to_string(),
            s.to_string(),
            f1.to_string(),
            f2.to_string(),
            fmt_f64(v.re),
            fmt_f64(v.im),
            fmt_f64(closed.re),
            fmt_f64(closed.im),
        ]);
        text.push(format!(
            "{table:<9} {s:<3} {f1:<10} {f2:<10} {:>14.10}{:+.10}i  |diff| {:.1e}",
            v.re,
            v.im,
            (v - closed).norm()
        ));
    };
    for s in loops(g) {
        let m = basis_iterated_matrix(g, &crate::curve::loop_word(g, s)?)?;
        for (a, &f1) in basis.iter().enumerate() {
            for (b, &f2) in basis.iter().enumerate() {
                push(
                    "omega",
                    s,
                    f1,
                    f2,
                    m[(a, b)],
                    loop_iterated_closed(g, f1, f2, s)?,
                );
            }
        }
    }
    for s in loops(g) {
        for i in 1..=g.get() {
            for j in 1..=g.get() {
                for (f1, f2) in [
                    (FormRef::alpha(i), FormRef::alpha(j)),
                    (FormRef::beta(i), FormRef::beta(j)),
                ] {
                    let v = harmonic_pair_iterated(&h, f1, f2, s)?;
                    push(
                        "harmonic",
                        s,
                        f1,
                        f2,
                        v,
                        C::new(harmonic_pair_closed(g, f1, f2, s)?, 0.0),
                    );
                }
            }
        }
    }
    Ok(Report {
        key: "entries",
        body: Value::Array(entries),
        header: vec![
            "table",
            "loop",
            "first",
            "second",
            "re",
            "im",
            "closed_re",
            "closed_im",
        ],
        rows,
        text,
        failed: false,
    })
}

fn cmd_volume_table(cfg: &RunConfig) -> Result<Report, Error> {
    let engine = VolumeEngine::new(cfg.genus)?.with_snap_tolerance(cfg.snap)?;
    let table = volume_table(&engine)?;
    let mut entries = Vec::new();
    let mut rows = Vec::new();
    let mut text = Vec::new();
    for r in &table {
        let e = &r.element;
        let slots = e.tensor.to_string();
        entries.push(json!({
            "kind": e.kind.label(), "indices": e.index_label(), "slots": slots,
            "value": r.value.value.as_str(), "raw": num(r.value.raw), "residual": num(r.value.residual),
        }));
        rows.push(vec![
            e.kind.label().to_string(),
            e.index_label(),
            slots.clone(),
            r.value.value.as_str().to_string(),
            fmt_f64(r.value.raw),
            fmt_f64(r.value.residual),
        ]);
        text.push(format!(
            "{:<3} {:<10} {:<3}  {slots}{}",
            e.kind.label(),
            e.index_label(),
            r.value.value.as_str(),
            if r.matches() {
                ""
            } else {
                "  (differs from expected)"
            }
        ));
    }
    let mismatches = table.iter().filter(|r| !r.matches()).count();
    text.push(format!(
        "{} elements, {mismatches} differ from the expected value",
        table.len()
    ));
    Ok(Report {
        key: "entries",
        body: Value::Array(entries),
        header: vec!["kind", "indices", "slots", "value", "raw", "residual"],
        rows,
        text,
        failed: false,
    })
}

fn cmd_mod2(cfg: &RunConfig) -> Result<Report, Error> {
    let g = cfg.genus;
    let mut entries = Vec::new();
    let mut rows = Vec::new();
    let mut text = Vec::new();
    let mut push = |section: &str, key: String, value: Value, shown: String| {
        entries.push(json!({"section": section, "key": key, "value": value}));
        rows.push(vec![section.to_string(), key.clone(), shown.clone()]);
        text.push(format!("{section:<13} {key:<28} {shown}"));
    };
    let cube_ok = g.get() <= MOD2_CUBE_MAX_GENUS;
    for (group, module) in [
        (ActingGroup::Sym2gPlus1, ModuleKind::H),
        (ActingGroup::Sym2gPlus1, ModuleKind::Cube),
        (ActingGroup::Sym2gPlus2, ModuleKind::Cube),
        (ActingGroup::Hyperelliptic, ModuleKind::PrimeSpan),
    ] {
        let key = format!("{} on {}", group.label(), module.label());
        if module != ModuleKind::H && !cube_ok {
            push(
                "invariants",
                key,
                Value::String("skipped".into()),
                "skipped".into(),
            );
            continue;
        }
        let d = invariant_functionals(g, group, module)?.dim;
        push("invariants", key, json!(d), d.to_string());
    }
    let m = 2 * g.get() + 1;
    for i in 1..=m {
        for j in i..=m {
            for k in j..=m {
                let b = u8::from(psi_table(i, j, k));
                push("psi", format!("f{i} f{j} f{k}"), json!(b), b.to_string());
            }
        }
    }
    for r in second_proof_table(g) {
        let b = u8::from(r.bit);
        let key = format!(
            "{} {} {}",
            r.element.kind.label(),
            r.element.index_label(),
            r.element.tensor
        );
        push("second-proof", key, json!(b), b.to_string());
    }
    let h1 = presentation_h1(&dual_homology_presentation(g)?);
    push("h1", "dim".into(), json!(h1.dim), h1.dim.to_string());
    push(
        "h1",
        "cocycles".into(),
        json!(h1.cocycles_dim),
        h1.cocycles_dim.to_string(),
    );
    push(
        "h1",
        "coboundaries".into(),
        json!(h1.coboundaries_dim),
        h1.coboundaries_dim.to_string(),
    );
    let mut failed = false;
    if cube_ok {
        let c = connecting_class(g)?;
        failed = !(c.is_cocycle && c.nonzero && c.equals_generator);
        push(
            "connecting",
            "is_cocycle".into(),
            json!(c.is_cocycle),
            c.is_cocycle.to_string(),
        );
        push(
            "connecting",
            "nonzero".into(),
            json!(c.nonzero),
            c.nonzero.to_string(),
        );
        push(
            "connecting",
            "generates".into(),
            json!(c.equals_generator),
            c.equals_generator.to_string(),
        );
    } else {
        push(
            "connecting",
            "verdict".into(),
            Value::String("skipped".into()),
            "skipped".into(),
        );
    }
    Ok(Report {
        key: "entries",
        body: Value::Array(entries),
        header: vec!["section", "key", "value"],
        rows,
        text,
        failed,
    })
}

fn cmd_verify(cfg: &RunConfig) -> Result<Report, Error> {
    let vc = VerifyConfig {
        quad: cfg.quad,
        snap: cfg.snap,
    };
    let checks = verify_genus(cfg.genus, &vc)?;
    let failed = checks.iter().any(|c| !c.pass);
    let body = Value::Array(
        checks
            .iter()
            .map(|c| {
                json!({"name": c.name, "max_abs_err": num(c.max_abs_err), "tolerance": num(c.tolerance), "pass": c.pass})
            })
            .collect(),
    );
    let rows = checks
        .iter()
        .map(|c| {
            vec![
                c.name.clone(),
                fmt_f64(c.max_abs_err),
                fmt_f64(c.tolerance),
                c.pass.to_string(),
            ]
        })
        .collect();
    let mut text: Vec<String> = checks.iter().map(|c| c.to_string()).collect();
    text.push(format!(
        "{} of {} checks passed",
        checks.iter().filter(|c| c.pass).count(),
        checks.len()
    ));
    Ok(Report {
        key: "checks",
        body,
        header: vec!["name", "max_abs_err", "tolerance", "pass"],
        rows,
        text,
        failed,
    })
}

fn render(report: &Report, cfg: &RunConfig, command: Command) -> Result<String, Error> {
    match cfg.format {
        Format::Json => {
            let mut top = Map::new();
            top.insert("genus".into(), json!(cfg.genus.get()));
            top.insert("command".into(), json!(command.name()));
            top.insert(report.key.into(), report.body.clone());
            let mut s = serde_json::to_string_pretty(&Value::Object(top))
                .map_err(|e| Error::Config(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            let io = |e: csv::Error| Error::Config(e.to_string());
            w.write_record(&report.header).map_err(io)?;
            for r in &report.rows {
                w.write_record(r).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::Config(e.to_string()))
        }
        Format::Text => {
            let mut s = format!("{} (genus {})\n", command.name(), cfg.genus);
            for line in &report.text {
                s.push_str(line);
                s.push('\n');
            }
            Ok(s)
        }
    }
}

fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::GenusOutOfRange(_)
            | Error::ParameterOutOfRange(_)
            | Error::IndexOutOfRange { .. }
            | Error::Config(_)
            | Error::Parse(_)
            | Error::NotInKernel(_)
    )
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::GenusOutOfRange(_) => "genus_out_of_range",
        Error::ParameterOutOfRange(_) => "parameter_out_of_range",
        Error::IndexOutOfRange { .. } => "index_out_of_range",
        Error::UnsupportedForm(_) => "unsupported_form",
        Error::NotInKernel(_) => "not_in_kernel",
        Error::KConditionViolated { .. } => "k_condition_violated",
        Error::SnapFailure { .. } => "snap_failure",
        Error::QuadratureNotConverged { .. } => "quadrature_not_converged",
        Error::Consistency { .. } => "consistency",
        Error::Basis(_) => "basis",
        Error::Infeasible(_) => "infeasible",
        Error::Config(_) => "config",
        Error::Parse(_) => "parse",
    }
}

fn report_error(
    e: &Error,
    json_mode: bool,
    command: Option<Command>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) {
    if json_mode {
        let v = json!({
            "command": command.map(|c| c.name()),
            "error": {"kind": error_kind(e), "message": e.to_string()},
        });
        let _ = writeln!(
            stdout,
            "{}",
            serde_json::to_string_pretty(&v).unwrap_or_default()
        );
    }
    let _ = writeln!(stderr, "error: {e}");
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{rendered}")
            } else {
                write!(stdout, "{rendered}")
            };
            return code;
        }
    };
    let json_mode = cli.opts.format == Format::Json;
    let cfg = match RunConfig::from_options(&cli.opts) {
        Ok(c) => c,
        Err(e) => {
            report_error(&e, json_mode, Some(cli.command), stdout, stderr);
            return 2;
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cfg.jobs {
        pool = pool.num_threads(j);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            report_error(
                &Error::Config(e.to_string()),
                json_mode,
                Some(cli.command),
                stdout,
                stderr,
            );
            return 2;
        }
    };
    let command = cli.command;
    let result = pool.install(|| match command {
        Command::Periods => cmd_periods(&cfg),
        Command::PeriodMatrix => cmd_period_matrix(&cfg),
        Command::Iterated => cmd_iterated(&cfg),
        Command::VolumeTable => cmd_volume_table(&cfg),
        Command::Mod2 => cmd_mod2(&cfg),
        Command::Verify => cmd_verify(&cfg),
    });
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            report_error(&e, json_mode, Some(command), stdout, stderr);
            return if is_input_error(&e) { 2 } else { 1 };
        }
    };
    let text = match render(&report, &cfg, command) {
        Ok(t) => t,
        Err(e) => {
            report_error(&e, json_mode, Some(command), stdout, stderr);
            return 1;
        }
    };
    match &cfg.out {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                return 2;
            }
        }
        None => {
            let _ = stdout.write_all(text.as_bytes());
        }
    }
    i32::from(report.failed)
}

pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("hvol").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn float_format_has_17_digits() {
        assert_eq!(fmt_f64(0.5), "5.0000000000000000e-1");
        assert_eq!(fmt_f64(-0.0), "0.0000000000000000e+0");
        assert_eq!(fmt_f64(12.0), "1.2000000000000000e+1");
        assert_eq!(fmt_f64(-1.0 / 3.0), "-3.3333333333333331e-1");
        assert_eq!(num(f64::NAN), Value::Null);
    }

    #[test]
    fn genus_range_is_usage_error() {
        let (code, out, _) = call(&["volume-table", "--genus", "2", "--format", "json"]);
        assert_eq!(code, 2);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["error"]["kind"], "genus_out_of_range");
        assert_eq!(call(&["periods", "--genus", "13"]).0, 2);
    }

    #[test]
    fn bad_flags() {
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["volume-table", "--tol", "0.3"]).0, 2);
        assert_eq!(call(&["periods", "--quad-level", "40"]).0, 2);
        assert_eq!(call(&["periods", "--jobs", "0"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn volume_table_json_g3() {
        let (code, out, _) = call(&["volume-table", "--genus", "3", "--format", "json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["genus"], 3);
        assert_eq!(v["command"], "volume-table");
        let entries = v["entries"].as_array().unwrap();
        assert_eq!(entries.len(), 96);
        let halves: Vec<&Value> = entries.iter().filter(|e| e["value"] == "1/2").collect();
        // kind 6: 2g entries; kind 2 with i < k, 2 <= k <= g-1, z = y: only (1, 2; y) at g = 3.
        assert_eq!(halves.len(), 7);
        assert!(halves
            .iter()
            .any(|e| e["kind"] == "2" && e["indices"] == "1,2;y"));
    }
}
