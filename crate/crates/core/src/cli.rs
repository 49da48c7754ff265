//! The `lawson-forge` command line: config in, net files and JSON reports out.
//!
//! Exit codes: 0 all checks pass, 1 bad input or configuration, 2 a
//! verification failed (outputs are still written).

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{debug, info};
use serde::Serialize;

use crate::error::{Error, Location};
use crate::immersion::{immerse_lattice_r3, immerse_s3, scale_to_sphere};
use crate::io::{export_obj, to_json, Ambient, CauchySpec, LaxRecord, NetFile, RunConfig};
use crate::lawson::{
    calapso_labeling_check, cross_member_defect, euclidean_limit, lawson_pair_from, limit_is_monotone,
    sphere_family_from, verify_lawson, CalapsoCheck, LimitRow,
};
use crate::lax::{propagate, LatticeLax};
use crate::reconstruct::{reconstruct_net_r3, reconstruct_net_s3};
use crate::report::Report;
use crate::tolerance;
use crate::verify::{apply_overrides, report_file, report_r3, report_s3, report_sphere, NetReport};

#[derive(Debug, Parser)]
#[command(name = "lawson-forge", version, about = "Discrete CMC nets from Lax data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build nets from a config and verify them.
    Generate(RunArgs),
    /// Build the Lawson pair, the sphere family and the Euclidean-limit table.
    Lawson(RunArgs),
    /// Verify an existing net file.
    Verify(FileArgs),
    /// Recover Lax data from a net file.
    Reconstruct(FileArgs),
    /// Write a net file as OBJ or canonical JSON.
    Export(ExportArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output directory (default: current directory).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Tolerance applied to every check, replacing the built-in ones.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Spectral angles γ₁, replacing those of the config.
    #[arg(long, num_args = 1..)]
    gamma: Vec<f64>,
    /// Restrict the run to one ambient.
    #[arg(long, value_enum)]
    ambient: Option<AmbientArg>,
    /// Seed for a random Cauchy preset.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct FileArgs {
    net: PathBuf,
    /// Output directory; without it the report goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    tolerance: Option<f64>,
    /// Expected ambient of the file.
    #[arg(long, value_enum)]
    ambient: Option<AmbientArg>,
}

#[derive(Debug, Args)]
struct ExportArgs {
    net: PathBuf,
    /// Output directory; without it the text goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Obj)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AmbientArg {
    R3,
    S3,
    Sphere,
}

impl From<AmbientArg> for Ambient {
    fn from(a: AmbientArg) -> Self {
        match a {
            AmbientArg::R3 => Ambient::R3,
            AmbientArg::S3 => Ambient::S3,
            AmbientArg::Sphere => Ambient::Sphere,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Obj,
}

/// Why a command did not succeed.
#[derive(Debug)]
enum Failure {
    Input(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => 1,
            Failure::Verification(_) => 2,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::new().filter_or("LAWSON_FORGE_LOG", "warn")).try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    let result = match cli.command {
        Command::Generate(a) => generate(&a),
        Command::Lawson(a) => lawson(&a),
        Command::Verify(a) => verify(&a),
        Command::Reconstruct(a) => reconstruct(&a),
        Command::Export(a) => export(&a),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            match &f {
                Failure::Input(m) => eprintln!("error: {m}"),
                Failure::Verification(m) => eprintln!("verification failed: {m}"),
            }
            f.code()
        }
    }
}

fn load_config(a: &RunArgs) -> Result<RunConfig, Failure> {
    let text = fs::read_to_string(&a.config).map_err(|e| io_failure(&a.config, e))?;
    let mut cfg = RunConfig::from_json(&text)?;
    if !a.gamma.is_empty() {
        cfg.gammas = a.gamma.clone();
    }
    if let Some(amb) = a.ambient {
        cfg.ambients = vec![amb.into()];
    }
    if let Some(s) = a.seed {
        match &mut cfg.cauchy {
            CauchySpec::Random { seed, .. } => *seed = s,
            _ => return Err(Failure::Input("--seed needs a random Cauchy preset".into())),
        }
    }
    if let Some(t) = a.tolerance {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Failure::Input(format!("tolerance {t} must be positive")));
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn out_dir(out: &Option<PathBuf>) -> Result<PathBuf, Failure> {
    let dir = out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(|e| io_failure(&dir, e))?;
    Ok(dir)
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    debug!("writing {}", path.display());
    fs::write(path, text).map_err(|e| io_failure(path, e))
}

fn lattice_of(cfg: &RunConfig) -> Result<LatticeLax, Failure> {
    let lattice = propagate(&cfg.cauchy_data()?)?;
    info!(
        "propagated {}x{} lattice {}",
        lattice.width(),
        lattice.height(),
        lattice.content_hash()
    );
    Ok(lattice)
}

/// Lattice-level checks shared by `generate` and `lawson`.
fn lattice_report(lattice: &LatticeLax) -> Result<Report, Failure> {
    let c = lattice.check()?;
    let mut r = Report::default();
    r.push("uu = vv", c.uu_vv, tolerance::UU_VV);
    r.push("commutation", c.commutation, tolerance::COMMUTATION);
    r.push("alpha spread", c.alpha_spread, tolerance::LABELING_PRESERVATION);
    r.push("beta spread", c.beta_spread, tolerance::LABELING_PRESERVATION);
    Ok(r)
}

#[derive(Debug, Serialize)]
struct NetEntry {
    file: String,
    report: NetReport,
}

#[derive(Debug, Serialize)]
struct RunReport {
    config_hash: String,
    lattice_hash: String,
    lattice: Report,
    nets: Vec<NetEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lawson: Option<LawsonSection>,
    summary: Report,
    passed: bool,
}

#[derive(Debug, Serialize)]
struct FamilyRow {
    gamma: f64,
    h: f64,
    kappa: f64,
    h2_plus_kappa: f64,
    scale: f64,
}

#[derive(Debug, Serialize)]
struct LimitSection {
    rows: Vec<LimitRow>,
    monotone: bool,
}

#[derive(Debug, Serialize)]
struct LawsonSection {
    isometry_defect: f64,
    family: Vec<FamilyRow>,
    cross_member_defect: f64,
    calapso: Vec<CalapsoCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    limit: Option<LimitSection>,
    checks: Report,
}

impl RunReport {
    fn new(cfg: &RunConfig, lattice: &LatticeLax) -> Result<Self, Failure> {
        Ok(RunReport {
            config_hash: cfg.hash(),
            lattice_hash: lattice.content_hash(),
            lattice: lattice_report(lattice)?,
            nets: Vec::new(),
            lawson: None,
            summary: Report::default(),
            passed: false,
        })
    }

    /// Apply overrides everywhere, collect the summary and decide.
    fn finish(&mut self, cfg: &RunConfig, uniform: Option<f64>) {
        let mut summary = Report::default();
        apply_overrides(&mut self.lattice, &cfg.tolerances, uniform);
        for c in &self.lattice.checks {
            summary.checks.push(c.clone().renamed(format!("lattice: {}", c.name)));
        }
        for e in &mut self.nets {
            apply_overrides(&mut e.report.checks, &cfg.tolerances, uniform);
            for c in &e.report.checks.checks {
                summary
                    .checks
                    .push(c.clone().renamed(format!("{}: {}", e.file, c.name)));
            }
        }
        if let Some(l) = &mut self.lawson {
            apply_overrides(&mut l.checks, &cfg.tolerances, uniform);
            for c in &l.checks.checks {
                summary.checks.push(c.clone().renamed(format!("lawson: {}", c.name)));
            }
        }
        self.passed = summary.all_passed();
        self.summary = summary;
    }

    fn conclude(&self, dir: &Path, name: &str) -> Result<(), Failure> {
        let path = dir.join(name);
        write(&path, &to_json(self)?)?;
        if self.passed {
            info!("all {} checks pass", self.summary.checks.len());
            Ok(())
        } else {
            let names: Vec<_> = self.summary.failures().map(|c| c.name.clone()).collect();
            Err(Failure::Verification(format!(
                "{} (see {})",
                names.join(", "),
                path.display()
            )))
        }
    }
}

fn generate(a: &RunArgs) -> Result<(), Failure> {
    let cfg = load_config(a)?;
    let lattice = lattice_of(&cfg)?;
    let dir = out_dir(&a.out)?;
    let hash = Some(cfg.hash());
    let mut report = RunReport::new(&cfg, &lattice)?;
    for &ambient in &cfg.ambients {
        match ambient {
            Ambient::R3 => {
                let net = immerse_lattice_r3(&lattice)?;
                let file = "net-r3.json".to_string();
                write(
                    &dir.join(&file),
                    &NetFile::from_r3(&net, Some(&lattice), hash.clone()).to_json()?,
                )?;
                let r = report_r3(&net.f, &net.normal, Some(&lattice));
                report.nets.push(NetEntry { file, report: r });
            }
            Ambient::S3 | Ambient::Sphere => {
                for (i, &g) in cfg.gammas.iter().enumerate() {
                    let net = immerse_s3(&lattice, g)?;
                    let (file, text, r) = if ambient == Ambient::S3 {
                        (
                            format!("net-s3-{i}.json"),
                            NetFile::from_s3(&net, Some(&lattice), hash.clone()).to_json()?,
                            report_s3(&net.f, &net.normal, g, Some(&lattice)),
                        )
                    } else {
                        let sp = scale_to_sphere(&net)?;
                        (
                            format!("net-sphere-{i}.json"),
                            NetFile::from_sphere(&sp, Some(&lattice), hash.clone()).to_json()?,
                            report_sphere(&sp.f, &sp.normal, g, sp.scale),
                        )
                    };
                    write(&dir.join(&file), &text)?;
                    report.nets.push(NetEntry { file, report: r });
                }
            }
        }
    }
    report.finish(&cfg, a.tolerance);
    report.conclude(&dir, "report.json")
}

fn lawson(a: &RunArgs) -> Result<(), Failure> {
    let cfg = load_config(a)?;
    let lattice = lattice_of(&cfg)?;
    let dir = out_dir(&a.out)?;
    let hash = Some(cfg.hash());
    let mut report = RunReport::new(&cfg, &lattice)?;

    let pair = lawson_pair_from(lattice.clone())?;
    write(
        &dir.join("net-r3.json"),
        &NetFile::from_r3(&pair.r3, Some(&lattice), hash.clone()).to_json()?,
    )?;
    write(
        &dir.join("net-s3.json"),
        &NetFile::from_s3(&pair.s3, Some(&lattice), hash.clone()).to_json()?,
    )?;
    report.nets.push(NetEntry {
        file: "net-r3.json".into(),
        report: report_r3(&pair.r3.f, &pair.r3.normal, Some(&lattice)),
    });
    report.nets.push(NetEntry {
        file: "net-s3.json".into(),
        report: report_s3(&pair.s3.f, &pair.s3.normal, pair.s3.gamma1, Some(&lattice)),
    });

    let family = sphere_family_from(&lattice, &cfg.gammas)?;
    let mut rows = Vec::with_capacity(family.len());
    for (i, m) in family.iter().enumerate() {
        let file = format!("net-sphere-{i}.json");
        write(
            &dir.join(&file),
            &NetFile::from_sphere(&m.net, Some(&lattice), hash.clone()).to_json()?,
        )?;
        report.nets.push(NetEntry {
            file,
            report: report_sphere(&m.net.f, &m.net.normal, m.gamma1, m.net.scale),
        });
        rows.push(FamilyRow {
            gamma: m.gamma1,
            h: m.h,
            kappa: m.kappa,
            h2_plus_kappa: m.h * m.h + m.kappa,
            scale: m.net.scale,
        });
    }
    let mut calapso = Vec::new();
    for (i, x) in family.iter().enumerate() {
        for y in &family[i + 1..] {
            calapso.push(calapso_labeling_check(x, y, &lattice)?);
        }
    }
    let mut checks = verify_lawson(&lattice, &cfg.gammas)?;
    let limit = if cfg.limit_gammas.is_empty() {
        None
    } else {
        let rows = euclidean_limit(&lattice, &cfg.limit_gammas)?;
        let monotone = limit_is_monotone(&rows);
        // a pass/fail verdict, not a measured deviation
        checks.push("euclidean limit monotone", if monotone { 0.0 } else { 1.0 }, 0.5);
        Some(LimitSection { rows, monotone })
    };
    report.lawson = Some(LawsonSection {
        isometry_defect: pair.isometry_defect()?,
        family: rows,
        cross_member_defect: cross_member_defect(&family),
        calapso,
        limit,
        checks,
    });
    report.finish(&cfg, a.tolerance);
    report.conclude(&dir, "lawson-report.json")
}

fn read_net(path: &Path) -> Result<NetFile, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    Ok(NetFile::from_json(&text)?)
}

fn check_ambient(file: &NetFile, expected: Option<AmbientArg>) -> Result<(), Failure> {
    match expected {
        Some(a) if Ambient::from(a) != file.ambient => Err(Failure::Input(format!(
            "file holds a {} net, not {}",
            file.ambient.tag(),
            Ambient::from(a).tag()
        ))),
        _ => Ok(()),
    }
}

fn emit(out: &Option<PathBuf>, name: &str, text: &str) -> Result<(), Failure> {
    match out {
        Some(_) => write(&out_dir(out)?.join(name), text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verify(a: &FileArgs) -> Result<(), Failure> {
    let file = read_net(&a.net)?;
    check_ambient(&file, a.ambient)?;
    if a.tolerance.is_some_and(|t| !(t > 0.0 && t.is_finite())) {
        return Err(Failure::Input("tolerance must be positive".into()));
    }
    let mut report = report_file(&file)?;
    apply_overrides(&mut report.checks, &Default::default(), a.tolerance);
    emit(&a.out, "report.json", &to_json(&report)?)?;
    if report.passed() {
        Ok(())
    } else {
        let names: Vec<_> = report.checks.failures().map(|c| c.name.clone()).collect();
        Err(Failure::Verification(names.join(", ")))
    }
}

#[derive(Debug, Serialize)]
struct ReconstructSummary {
    ambient: Ambient,
    transposed: bool,
    /// Absent for R³ nets.
    gamma1: Option<f64>,
    shared_edge_consistency: f64,
    worst_commutation: f64,
    worst_labeling: f64,
    mean_curvature: [f64; 2],
    /// Worst relative disagreement with the Lax data embedded in the file.
    round_trip: Option<f64>,
    checks: Report,
    passed: bool,
}

/// Worst relative difference of the edge data of two lattices.
fn lattice_distance(x: &LatticeLax, y: &LatticeLax) -> f64 {
    let rel = |p: f64, q: f64| (p - q).abs() / p.abs().max(q.abs()).max(1.0);
    let h = x
        .horizontal_edges()
        .iter()
        .zip(y.horizontal_edges())
        .map(|(p, q)| rel(p.u(), q.u()).max((p.a() - q.a()).norm() / p.a().norm().max(1.0)));
    let v = x
        .vertical_edges()
        .iter()
        .zip(y.vertical_edges())
        .map(|(p, q)| rel(p.v(), q.v()).max((p.b() - q.b()).norm() / p.b().norm().max(1.0)));
    h.chain(v).fold(0.0, f64::max)
}

fn reconstruct(a: &FileArgs) -> Result<(), Failure> {
    let file = read_net(&a.net)?;
    check_ambient(&file, a.ambient)?;
    let embedded = file.lattice()?;
    let rec = match file.ambient {
        Ambient::R3 => {
            let (f, n) = file.nets_r3()?;
            reconstruct_net_r3(&f, &n, None)
        }
        Ambient::S3 => {
            let (f, n) = file.nets_r4()?;
            reconstruct_net_s3(&f, &n, None)
        }
        Ambient::Sphere => {
            let (f, n) = file.nets_r4()?;
            let radius = file.provenance.scale / (2.0 * file.provenance.gamma).sin();
            if !(radius.is_finite() && radius > 0.0) {
                return Err(Failure::Input("sphere net without a usable radius".into()));
            }
            reconstruct_net_s3(&f.map(|p| p.map(|x| x / radius)), &n, None)
        }
    }
    .map_err(reconstruction_failure)?;

    let mut checks = Report::default();
    checks.push(
        "shared edge consistency",
        rec.shared_edge_consistency,
        tolerance::RECONSTRUCT_CONSISTENCY,
    );
    checks.push("commutation", rec.worst_commutation(), tolerance::COMMUTATION);
    checks.push(
        "labeling preservation",
        rec.worst_labeling(),
        tolerance::LABELING_PRESERVATION,
    );
    let round_trip = embedded.as_ref().map(|e| lattice_distance(e, &rec.lattice));
    if let Some(d) = round_trip {
        checks.push("round trip", d, tolerance::RECONSTRUCT_CONSISTENCY);
    }
    apply_overrides(&mut checks, &Default::default(), a.tolerance);
    let (lo, hi) = rec
        .mean_curvature
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
    let summary = ReconstructSummary {
        ambient: file.ambient,
        transposed: rec.transposed,
        gamma1: rec.gamma1,
        shared_edge_consistency: rec.shared_edge_consistency,
        worst_commutation: rec.worst_commutation(),
        worst_labeling: rec.worst_labeling(),
        mean_curvature: [lo, hi],
        round_trip,
        passed: checks.all_passed(),
        checks,
    };
    let dir = out_dir(&a.out)?;
    write(&dir.join("lax.json"), &to_json(&LaxRecord::from(&rec.lattice))?)?;
    write(&dir.join("reconstruct-report.json"), &to_json(&summary)?)?;
    if summary.passed {
        Ok(())
    } else {
        let names: Vec<_> = summary.checks.failures().map(|c| c.name.clone()).collect();
        Err(Failure::Verification(names.join(", ")))
    }
}

/// Geometric preconditions and integrability are verification failures;
/// everything else is an input problem.
fn reconstruction_failure(e: Error) -> Failure {
    let geometric = matches!(
        e.root(),
        Error::NotCmcOneQuad { .. }
            | Error::NotCmcQuadS3 { .. }
            | Error::NotIntegrable { .. }
            | Error::InconsistentGaussMap { .. }
            | Error::WrongTrapezoidOrientation
            | Error::NotOnUnitSphere { .. }
            | Error::NotPlanar { .. }
            | Error::NotEdgeParallel { .. }
            | Error::DegenerateFace
            | Error::DegenerateFaceArea
            | Error::DegenerateDualEdge
    );
    let text = match e.location() {
        Some(Location::Quad { m, n }) => format!("{} (edges of quad ({m},{n}))", e),
        _ => e.to_string(),
    };
    if geometric {
        Failure::Verification(text)
    } else {
        Failure::Input(text)
    }
}

fn export(a: &ExportArgs) -> Result<(), Failure> {
    let file = read_net(&a.net)?;
    let stem = a.net.file_stem().and_then(|s| s.to_str()).unwrap_or("net");
    match a.format {
        Format::Obj => emit(&a.out, &format!("{stem}.obj"), &export_obj(&file)?),
        Format::Json => emit(&a.out, &format!("{stem}.json"), &file.to_json()?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_one_and_help_zero() {
        assert_eq!(run(["lawson-forge"]), 1);
        assert_eq!(run(["lawson-forge", "frobnicate"]), 1);
        assert_eq!(run(["lawson-forge", "--help"]), 0);
        assert_eq!(
            run(["lawson-forge", "generate", "--config", "/nonexistent/cfg.json"]),
            1
        );
    }

    #[test]
    fn geometric_reconstruction_errors_are_verification_failures() {
        let e = Error::NotCmcOneQuad { h: 0.0 }.at(Location::Quad { m: 1, n: 2 });
        let f = reconstruction_failure(e);
        assert_eq!(f.code(), 2);
        assert!(matches!(f, Failure::Verification(m) if m.contains("(1,2)")));
        assert_eq!(reconstruction_failure(Error::InvalidInput("x".into())).code(), 1);
    }
}
