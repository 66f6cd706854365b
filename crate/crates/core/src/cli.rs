//! Command-line front end: argument parsing, file handling and reports.
//!
//! Exit codes: 0 when the command succeeds and every check passes, 1 when a
//! check fails or a class does not vanish, 2 on bad input.

use std::f64::consts::PI;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::complex::format::{load_complex, load_subcomplex, read_file, save_complex, write_atomic};
use crate::complex::Automorphism;
use crate::cone::{cone_distance, cone_volume, half_sector_schedule, sector_angle_sum, ConeChart};
use crate::cover::{build_cyclic_cover, deck_action_on_branch_link, euler_relation, verify_covering};
use crate::einstein::{
    shoot, sweep, verify_einstein_properties, write_sweep_csv, write_trajectory_csv, DEFAULT_R_MAX, DEFAULT_STEP,
    DEFAULT_TOL,
};
use crate::error::{Error, Result};
use crate::homology::{class_vanishes_mod_d, homology, invariant_factors, Chain, Coefficients, Vanishing};
use crate::matrix::IntMatrix;
use crate::report::Report;
use crate::symmetry::{
    double_cover_from_cut, fixed_subcomplex, j_involution, verify_double_cover,
    verify_fact_fixed, verify_sectors, SymmetricSetup,
};

pub const SEED_VAR: &str = "BRANCHFORGE_SEED";

#[derive(Debug, Parser)]
#[command(name = "branchforge", version, about = "Cyclic branched covers, cone metrics and Einstein cone metrics")]
pub struct RunConfig {
    /// Print nothing on success.
    #[arg(short, long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide existence of, and build, cyclic branched covers.
    #[command(subcommand)]
    Cover(CoverCommand),
    /// Lifted involutions and their fixed sets.
    #[command(subcommand)]
    Symmetry(SymmetryCommand),
    /// The two-dimensional cone model.
    #[command(subcommand)]
    Cone(ConeCommand),
    /// Einstein cone metrics by shooting.
    #[command(subcommand)]
    Einstein(EinsteinCommand),
    /// Simplicial homology.
    #[command(subcommand)]
    Homology(HomologyCommand),
    /// Smith normal form of an integer matrix file.
    Snf {
        /// Whitespace-separated rows of integers.
        matrix: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct CoverInput {
    /// Closed oriented base complex.
    #[arg(short = 'm', long)]
    pub complex: PathBuf,
    /// Codimension-two branch locus.
    #[arg(short = 's', long)]
    pub sigma: PathBuf,
    #[arg(short = 'd', long)]
    pub degree: i64,
}

#[derive(Debug, Subcommand)]
pub enum CoverCommand {
    /// Whether the class of the branch locus vanishes mod d.
    Check {
        #[command(flatten)]
        input: CoverInput,
        /// Where to write the Seifert chain; defaults to `<sigma stem>.d<D>.chain`
        /// next to the branch locus file.
        #[arg(short = 'w', long)]
        witness: Option<PathBuf>,
    },
    /// Build and verify the cover.
    Build {
        #[command(flatten)]
        input: CoverInput,
        #[arg(short = 'o', long)]
        output: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
        /// Use this Seifert chain instead of the computed one.
        #[arg(long)]
        seifert: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SymmetryCommand {
    /// Check the fixed set of j, the sector decomposition and the double cover.
    Verify {
        #[arg(long)]
        setup: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ConeCommand {
    /// Distance between two points given as `r,theta`.
    Dist {
        #[arg(long, value_parser = parse_angle)]
        alpha: f64,
        #[arg(long, value_parser = parse_point)]
        p: (f64, f64),
        #[arg(long, value_parser = parse_point)]
        q: (f64, f64),
    },
    /// Volume of a d-fold cover.
    Volume {
        #[arg(long)]
        vol: f64,
        #[arg(short = 'd', long)]
        degree: u64,
    },
    /// Total angle of sectors given as `count,angle`, or half the sectors of
    /// two covers given as `d1,d2`.
    Angles {
        #[arg(long = "sector", value_parser = parse_sector)]
        sectors: Vec<(f64, f64)>,
        #[arg(long, value_parser = parse_pair)]
        pair: Option<(u64, u64)>,
    },
}

#[derive(Debug, Args)]
pub struct SolverParams {
    #[arg(long, default_value_t = DEFAULT_R_MAX)]
    pub rmax: f64,
    #[arg(long, default_value_t = DEFAULT_STEP)]
    pub step: f64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Subcommand)]
pub enum EinsteinCommand {
    /// Shoot for one cone angle and check the resulting metric.
    Solve {
        #[arg(long)]
        dim: usize,
        #[arg(long, value_parser = parse_angle)]
        alpha: f64,
        #[command(flatten)]
        params: SolverParams,
        /// Trajectory CSV output.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Shoot over a list of cone angles, one CSV row each.
    Sweep {
        #[arg(long)]
        dim: usize,
        /// Comma-separated angles, e.g. `pi/2,pi,3pi/2`.
        #[arg(long, value_delimiter = ',', value_parser = parse_angle, required = true)]
        alphas: Vec<f64>,
        #[command(flatten)]
        params: SolverParams,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum HomologyCommand {
    /// Homology groups in one degree or all degrees.
    Compute {
        #[arg(short = 'm', long)]
        complex: PathBuf,
        #[arg(short = 'k', long)]
        degree: Option<usize>,
        /// `Z`, or a modulus d >= 2.
        #[arg(long, default_value = "Z", value_parser = parse_coefficients)]
        coeffs: Coefficients,
    },
}

/// Parses `1.5`, `pi`, `2pi`, `3*pi/2`, `pi/2`.
pub fn parse_angle(s: &str) -> std::result::Result<f64, String> {
    let t = s.trim().to_ascii_lowercase();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (t.as_str(), None),
    };
    let bad = || format!("cannot read {s:?} as an angle");
    let value = match num.strip_suffix("pi") {
        Some(c) => {
            let c = c.trim().trim_end_matches('*').trim();
            (if c.is_empty() { 1.0 } else { c.parse::<f64>().map_err(|_| bad())? }) * PI
        }
        None => num.parse::<f64>().map_err(|_| bad())?,
    };
    let den = match den {
        Some(d) => d.parse::<f64>().map_err(|_| bad())?,
        None => 1.0,
    };
    let v = value / den;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

fn two<T>(s: &str, f: impl Fn(&str) -> std::result::Result<T, String>) -> std::result::Result<(T, T), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected two comma-separated values, got {s:?}"))?;
    Ok((f(a)?, f(b)?))
}

fn parse_point(s: &str) -> std::result::Result<(f64, f64), String> {
    two(s, parse_angle)
}

fn parse_sector(s: &str) -> std::result::Result<(f64, f64), String> {
    two(s, parse_angle)
}

fn parse_pair(s: &str) -> std::result::Result<(u64, u64), String> {
    two(s, |x| x.trim().parse::<u64>().map_err(|e| e.to_string()))
}

fn parse_coefficients(s: &str) -> std::result::Result<Coefficients, String> {
    match s.trim() {
        "Z" | "z" => Ok(Coefficients::Integers),
        t => match t.parse::<u64>() {
            Ok(0) | Ok(1) => Err("modulus must be at least 2".into()),
            Ok(d) => Ok(Coefficients::Mod(d)),
            Err(_) => Err(format!("expected Z or a modulus, got {s:?}")),
        },
    }
}

/// Integer matrix, one row per line.
pub fn parse_matrix(text: &str) -> Result<IntMatrix> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|t| t.parse::<i64>().map_err(|_| Error::Parse { line: i + 1, message: format!("bad integer {t:?}") }))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    if rows.windows(2).any(|w| w[0].len() != w[1].len()) {
        return Err(Error::Validation("matrix rows have different lengths".into()));
    }
    Ok(IntMatrix::from_dense(&rows))
}

/// A symmetric setup file. Paths are relative to the file.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetupFile {
    pub complex: PathBuf,
    /// Image of each vertex under the involution.
    pub involution: Vec<usize>,
    pub sigma: PathBuf,
    pub seifert: PathBuf,
    pub degree: usize,
}

pub fn load_setup(path: &Path) -> Result<SymmetricSetup> {
    let text = read_file(path)?;
    let file: SetupFile = toml::from_str(&text).map_err(|e| Error::Parse {
        line: e.span().map(|s| text[..s.start].lines().count().max(1)).unwrap_or(0),
        message: e.message().to_string(),
    })?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let m = load_complex(dir.join(&file.complex))?;
    let sigma = load_subcomplex(&m, dir.join(&file.sigma))?;
    let h0 = load_subcomplex(&m, dir.join(&file.seifert))?;
    if file.involution.len() != m.vertex_count() {
        return Err(Error::InvalidSetup(format!(
            "involution lists {} images for {} vertices",
            file.involution.len(),
            m.vertex_count()
        )));
    }
    let iota = Automorphism::new(file.involution).map_err(|e| Error::InvalidSetup(e.to_string()))?;
    SymmetricSetup::new(&m, &iota, &sigma, &h0, file.degree)
}

struct Outcome {
    code: i32,
    text: String,
}

impl Outcome {
    fn report(r: &Report) -> Self {
        Self { code: if r.all_passed() { 0 } else { 1 }, text: r.to_string() }
    }
}

fn seeded(mut r: Report) -> Report {
    if let Ok(seed) = std::env::var(SEED_VAR) {
        r.facts.insert(0, ("seed".into(), seed));
    }
    r
}

fn default_witness_path(sigma: &Path, d: i64) -> PathBuf {
    let stem = sigma.file_stem().and_then(|s| s.to_str()).unwrap_or("sigma");
    sigma.with_file_name(format!("{stem}.d{d}.chain"))
}

fn cover_check(input: &CoverInput, witness: Option<&Path>) -> Result<Outcome> {
    let m = load_complex(&input.complex)?;
    let sigma = load_subcomplex(&m, &input.sigma)?;
    let mut r = Report::new();
    r.fact("complex", input.complex.display());
    r.fact("degree", input.degree);
    match class_vanishes_mod_d(&m, &sigma, input.degree)? {
        Vanishing::Vanishes(w) => {
            let path = witness.map(Path::to_path_buf).unwrap_or_else(|| default_witness_path(&input.sigma, input.degree));
            write_atomic(&path, &w.to_text())?;
            r.fact("decision", "class vanishes");
            r.fact("witness terms", w.len());
            r.fact("witness", path.display());
            r.check("class vanishes mod d", true, "");
            Ok(Outcome::report(&seeded(r)))
        }
        Vanishing::Persists(cert) => {
            r.fact("decision", format!("class nonvanishing, certificate {cert}"));
            r.check("class vanishes mod d", false, "");
            Ok(Outcome::report(&seeded(r)))
        }
    }
}

fn cover_build(input: &CoverInput, output: &Path, report: Option<&Path>, seifert: Option<&Path>) -> Result<Outcome> {
    let m = load_complex(&input.complex)?;
    let sigma = load_subcomplex(&m, &input.sigma)?;
    if input.degree < 1 {
        return Err(Error::InvalidDegree(input.degree));
    }
    let w = match seifert {
        Some(p) => Chain::parse(&read_file(p)?)?,
        None => match class_vanishes_mod_d(&m, &sigma, input.degree)? {
            Vanishing::Vanishes(w) => w,
            Vanishing::Persists(cert) => {
                let mut r = Report::new();
                r.fact("decision", format!("class nonvanishing, certificate {cert}"));
                r.check("class vanishes mod d", false, "");
                return Ok(Outcome::report(&seeded(r)));
            }
        },
    };
    let c = build_cyclic_cover(&m, &sigma, input.degree as usize, &w)?;
    let mut r = verify_covering(&c);
    r.fact("subdivided", c.subdivision.is_some());
    let (ok, lhs, rhs) = euler_relation(&c);
    r.check("euler characteristic relation", ok, format!("{lhs} = {rhs}"));
    let links = deck_action_on_branch_link(&c);
    let bad = links.iter().filter(|l| !l.is_rotation(c.degree)).count();
    r.check("deck generator rotates every branch link by one sheet", bad == 0, format!("{bad} of {} links", links.len()));
    let r = seeded(r);
    save_complex(&c.total, output)?;
    if let Some(p) = report {
        write_atomic(p, &r.to_string())?;
    }
    Ok(Outcome::report(&r))
}

fn symmetry_verify(setup: &Path, report: Option<&Path>) -> Result<Outcome> {
    let s = load_setup(setup)?;
    let mut r = verify_fact_fixed(&s);
    r.extend(verify_sectors(&s));
    if let Ok(j) = j_involution(&s) {
        let x = &s.cover.total;
        let fix = fixed_subcomplex(&j, x);
        let two_sided = fix.maximal().iter().all(|f| f.len() == x.dim());
        if two_sided {
            let dc = double_cover_from_cut(x, &fix)?;
            r.extend(verify_double_cover(x, &dc));
        } else {
            r.fact("double cover", "skipped, fixed set of j is not a hypersurface");
        }
    }
    let r = seeded(r);
    if let Some(p) = report {
        write_atomic(p, &r.to_string())?;
    }
    Ok(Outcome::report(&r))
}

fn cone(cmd: &ConeCommand) -> Result<Outcome> {
    let mut r = Report::new();
    match cmd {
        ConeCommand::Dist { alpha, p, q } => {
            let c = ConeChart::new(*alpha)?;
            let (p, q) = (c.point(p.0, p.1)?, c.point(q.0, q.1)?);
            r.fact("alpha", alpha);
            r.fact("distance", cone_distance(&c, &p, &q));
        }
        ConeCommand::Volume { vol, degree } => {
            r.fact("volume", cone_volume(*vol, *degree)?);
        }
        ConeCommand::Angles { sectors, pair } => {
            let mut schedule = sectors.clone();
            if let Some((d1, d2)) = pair {
                if *d1 == 0 || *d2 == 0 {
                    return Err(Error::InvalidDegree(0));
                }
                schedule.extend(half_sector_schedule(*d1, *d2));
            }
            if schedule.is_empty() {
                return Err(Error::InvalidParameter("give at least one --sector or a --pair".into()));
            }
            let s = sector_angle_sum(&schedule)?;
            r.fact("total angle", s.total);
            r.fact("smooth gluing", s.smooth);
        }
    }
    Ok(Outcome { code: 0, text: r.facts_text() })
}

fn einstein(cmd: &EinsteinCommand) -> Result<Outcome> {
    match cmd {
        EinsteinCommand::Solve { dim, alpha, params, csv, report } => {
            let shot = shoot(*dim, *alpha, params.tol, params.rmax, params.step)?;
            let mut r = verify_einstein_properties(&shot.trajectory, *dim, *alpha);
            r.fact("terminal mismatch", format!("{:e}", shot.mismatch()));
            r.check("terminal ratio matches within tolerance", shot.converged(params.tol), "");
            let r = seeded(r);
            if let Some(p) = csv {
                write_atomic(p, &write_trajectory_csv(&shot.trajectory))?;
            }
            if let Some(p) = report {
                write_atomic(p, &r.to_string())?;
            }
            Ok(Outcome::report(&r))
        }
        EinsteinCommand::Sweep { dim, alphas, params, csv } => {
            let rows = sweep(*dim, alphas, params.tol, params.rmax, params.step)?;
            let text = write_sweep_csv(&rows);
            match csv {
                Some(p) => {
                    write_atomic(p, &text)?;
                    Ok(Outcome { code: 0, text: format!("rows: {}\n", rows.len()) })
                }
                None => Ok(Outcome { code: 0, text }),
            }
        }
    }
}

fn homology_compute(complex: &Path, degree: Option<usize>, coeffs: Coefficients) -> Result<Outcome> {
    let k = load_complex(complex)?;
    let degrees: Vec<usize> = match degree {
        Some(d) => vec![d],
        None => (0..=k.dim()).collect(),
    };
    let mut text = String::new();
    for d in degrees {
        text.push_str(&format!("{}\n", homology(&k, d, coeffs)?));
    }
    Ok(Outcome { code: 0, text })
}

fn snf(path: &Path) -> Result<Outcome> {
    let a = parse_matrix(&read_file(path)?)?;
    let factors = invariant_factors(&a);
    let list: Vec<String> = factors.iter().map(ToString::to_string).collect();
    let mut r = Report::new();
    r.fact("rows", a.nrows());
    r.fact("cols", a.ncols());
    r.fact("rank", factors.len());
    r.fact("invariant factors", list.join(" "));
    Ok(Outcome { code: 0, text: r.facts_text() })
}

fn dispatch(cfg: &RunConfig) -> Result<Outcome> {
    match &cfg.command {
        Command::Cover(CoverCommand::Check { input, witness }) => cover_check(input, witness.as_deref()),
        Command::Cover(CoverCommand::Build { input, output, report, seifert }) => {
            cover_build(input, output, report.as_deref(), seifert.as_deref())
        }
        Command::Symmetry(SymmetryCommand::Verify { setup, report }) => symmetry_verify(setup, report.as_deref()),
        Command::Cone(c) => cone(c),
        Command::Einstein(c) => einstein(c),
        Command::Homology(HomologyCommand::Compute { complex, degree, coeffs }) => {
            homology_compute(complex, *degree, *coeffs)
        }
        Command::Snf { matrix } => snf(matrix),
    }
}

/// Runs one command, writing the report to `out` and diagnostics to `err`.
/// Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                2
            } else {
                let _ = write!(out, "{rendered}");
                0
            };
        }
    };
    match dispatch(&cfg) {
        Ok(o) => {
            if !(cfg.quiet && o.code == 0) {
                let _ = write!(out, "{}", o.text);
            }
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("2pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_angle("3*pi/2").unwrap(), 1.5 * PI);
        assert_eq!(parse_angle("pi/2").unwrap(), PI / 2.0);
        assert_eq!(parse_angle(" 0.25 ").unwrap(), 0.25);
        assert!(parse_angle("tau").is_err());
        assert!(parse_angle("1/0").is_err());
    }

    #[test]
    fn matrices() {
        let a = parse_matrix("# m\n2 4\n6 8\n").unwrap();
        assert_eq!(a.to_dense_i64(), vec![vec![2, 4], vec![6, 8]]);
        assert!(parse_matrix("1 2\n3\n").is_err());
        assert!(matches!(parse_matrix("1 x\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn coefficients() {
        assert_eq!(parse_coefficients("Z").unwrap(), Coefficients::Integers);
        assert_eq!(parse_coefficients("6").unwrap(), Coefficients::Mod(6));
        assert!(parse_coefficients("1").is_err());
    }
}
