//! `invkit`: command-line front end for the operator-analysis library.
//!
//! Exit codes: 0 success, 2 parse error, 3 precondition violation,
//! 4 sampler degeneracy, 5 numeric nonconvergence, 6 I/O error.

use clap::{Parser, Subcommand};
use invkit_core::diffop::DiffOpError;
use invkit_core::hutchinson::{
    chaos_game, chaos_game_continuous, chaos_game_two_point, degree_for_delta, write_csv,
    DegreeOutcome, NMode, PointCloud, SamplerConfig, SamplerError,
};
use invkit_core::invariance::{
    classify_operator, disk_invariance_sampled, eigenroot_cloud, half_plane_advisory,
    large_disk_decision, lower_bound_region, min_disk_radius, Disk, InvarianceError,
    MinDiskOutcome,
};
use invkit_core::newton::{
    asymptotic_roots, classify_ne, leading_constants, ne_border, positive_cone, u_infty_degree,
    BiPoly, ConeDesc, NeOutcome, NewtonError,
};
use invkit_core::parse::{parse_bipoly, parse_diffop, ParseError};
use invkit_core::roots::RootsError;
use num_complex::Complex64;
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "invkit",
    about = "Analyze linear differential operators with polynomial coefficients: classification, invariant disks, Newton-polygon asymptotics, and chaos-game invariant sets",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify an operator (Fuchs index, flags, Newton class, escape cone)
    Classify {
        /// Operator text, e.g. "(x^3+2x) D3 + x D2 + 1"
        operator: String,
    },
    /// Large-disk invariance decision; with --radius, sampled verification
    Disk {
        operator: String,
        /// Degree of the acted-on polynomials
        #[arg(long)]
        n: u32,
        /// Sample the disk of this radius instead of deciding the large-R limit
        #[arg(long)]
        radius: Option<f64>,
        /// Disk center as "re,im" (sampled mode only)
        #[arg(long)]
        center: Option<String>,
        /// Boundary and interior sample counts as "B,I"
        #[arg(long, default_value = "64,64")]
        samples: String,
        #[arg(long, default_value_t = 1e-9)]
        margin: f64,
        /// Bisect for the minimal sampled-invariant radius below this bound
        #[arg(long)]
        min_radius_below: Option<f64>,
        /// Include the advisory half-plane report
        #[arg(long)]
        half_plane: bool,
    },
    /// Chaos-game sampling of minimal Hutchinson-type invariant sets
    Hutchinson {
        operator: String,
        /// Integer exponent
        #[arg(long, conflicts_with_all = ["n_range", "two_point"])]
        n: Option<u32>,
        /// Continuous exponent window "a:b"
        #[arg(long, value_name = "A:B", conflicts_with = "two_point")]
        n_range: Option<String>,
        /// Two-point exponents "n1:n2"
        #[arg(long, value_name = "N1:N2")]
        two_point: Option<String>,
        #[arg(long, default_value_t = 100_000)]
        steps: usize,
        #[arg(long, default_value_t = 100)]
        burn_in: usize,
        #[arg(long, default_value_t = 4)]
        chains: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Start point as "re,im"
        #[arg(long, default_value = "0,0")]
        z0: String,
        /// Offer the trivial fixed root as a successor (integer n)
        #[arg(long)]
        include_trivial_root: bool,
        /// CSV output path
        #[arg(long)]
        out: PathBuf,
        /// Optional SVG scatter output
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Northeastern-border report for a bivariate polynomial or an
    /// operator's shifted polygon
    Newton {
        /// Operator text (psi-polygon analysis)
        operator: Option<String>,
        /// Bivariate polynomial in u, v
        #[arg(long)]
        bipoly: Option<String>,
        /// Also predict escaping roots of B(., w) at this w
        #[arg(long)]
        asymptotic_w: Option<f64>,
    },
    /// Eigenpolynomial root cloud for an exactly solvable operator
    Eigenroots {
        operator: String,
        /// Degree range "a:b"
        #[arg(long, value_name = "A:B")]
        m: String,
        /// CSV output path (header m,re,im); JSON to stdout otherwise
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certified lower bound for every invariant set
    Lowerbound { operator: String },
    /// Search the smallest n collapsing sampled psi-roots onto the roots
    /// of the leading coefficient
    DegreeSearch {
        operator: String,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 10_000)]
        n_cap: u32,
    },
}

#[derive(Debug)]
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::new(2, e.to_string())
    }
}

impl From<RootsError> for CliError {
    fn from(e: RootsError) -> Self {
        match e {
            RootsError::NonConvergence(_) => CliError::new(5, e.to_string()),
            _ => CliError::new(3, e.to_string()),
        }
    }
}

impl From<DiffOpError> for CliError {
    fn from(e: DiffOpError) -> Self {
        CliError::new(3, e.to_string())
    }
}

impl From<NewtonError> for CliError {
    fn from(e: NewtonError) -> Self {
        match e {
            NewtonError::Roots(r) => r.into(),
            _ => CliError::new(3, e.to_string()),
        }
    }
}

impl From<InvarianceError> for CliError {
    fn from(e: InvarianceError) -> Self {
        match e {
            InvarianceError::Roots(r) => r.into(),
            InvarianceError::Newton(n) => n.into(),
            _ => CliError::new(3, e.to_string()),
        }
    }
}

impl From<SamplerError> for CliError {
    fn from(e: SamplerError) -> Self {
        match e {
            SamplerError::Roots(r) => r.into(),
            SamplerError::InvalidConfig(_) => CliError::new(3, e.to_string()),
            _ => CliError::new(4, e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::new(6, e.to_string())
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("invkit: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::new(6, format!("serialization failed: {e}")))?;
    println!("{text}");
    Ok(())
}

fn parse_complex_pair(text: &str) -> Result<Complex64, CliError> {
    let (re, im) = text
        .split_once(',')
        .ok_or_else(|| CliError::new(2, format!("expected \"re,im\", got `{text}`")))?;
    let re: f64 = re
        .trim()
        .parse()
        .map_err(|_| CliError::new(2, format!("bad real part `{re}`")))?;
    let im: f64 = im
        .trim()
        .parse()
        .map_err(|_| CliError::new(2, format!("bad imaginary part `{im}`")))?;
    Ok(Complex64::new(re, im))
}

fn parse_range(text: &str, what: &str) -> Result<(f64, f64), CliError> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| CliError::new(2, format!("expected \"a:b\" for {what}, got `{text}`")))?;
    let a: f64 = a
        .trim()
        .parse()
        .map_err(|_| CliError::new(2, format!("bad {what} lower bound `{a}`")))?;
    let b: f64 = b
        .trim()
        .parse()
        .map_err(|_| CliError::new(2, format!("bad {what} upper bound `{b}`")))?;
    Ok((a, b))
}

fn thread_cap() -> usize {
    std::env::var("INVKIT_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&v| v >= 1)
        .unwrap_or(4)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Classify { operator } => {
            let t = parse_diffop(&operator)?;
            let report = classify_operator(&t)?;
            print_json(&report)
        }
        Cmd::Disk {
            operator,
            n,
            radius,
            center,
            samples,
            margin,
            min_radius_below,
            half_plane,
        } => {
            let t = parse_diffop(&operator)?;
            if let Some(r_max) = min_radius_below {
                let outcome = min_disk_radius(&t, n, r_max, 1e-2)?;
                return print_json(&MinRadiusOut { n, outcome });
            }
            if let Some(r) = radius {
                let center = match center {
                    Some(c) => parse_complex_pair(&c)?,
                    None => Complex64::new(0.0, 0.0),
                };
                let (b, i) = parse_samples(&samples)?;
                let outcome =
                    disk_invariance_sampled(&t, n, Disk { center, radius: r }, b, i, margin)?;
                return print_json(&SampledOut {
                    n,
                    radius: r,
                    center,
                    outcome,
                });
            }
            let decision = large_disk_decision(&t, n)?;
            if half_plane {
                let advisory = half_plane_advisory(&t, n)?;
                print_json(&serde_json::json!({
                    "decision": decision,
                    "half_plane_advisory": advisory,
                }))
            } else {
                print_json(&decision)
            }
        }
        Cmd::Hutchinson {
            operator,
            n,
            n_range,
            two_point,
            steps,
            burn_in,
            chains,
            seed,
            z0,
            include_trivial_root,
            out,
            svg,
        } => {
            let t = parse_diffop(&operator)?;
            let z0 = parse_complex_pair(&z0)?;
            let n_mode = match (n, &n_range, &two_point) {
                (Some(n), None, None) => NMode::Integer(n),
                (None, Some(range), None) => {
                    let (a, b) = parse_range(range, "n-range")?;
                    NMode::ContinuousUniform(a, b)
                }
                (None, None, Some(pair)) => {
                    let (a, b) = parse_range(pair, "two-point exponents")?;
                    NMode::TwoPoint(a, b)
                }
                _ => {
                    return Err(CliError::new(
                        2,
                        "exactly one of --n, --n-range, --two-point is required",
                    ))
                }
            };
            let mut cfg = SamplerConfig::new(n_mode, seed);
            cfg.steps = steps;
            cfg.burn_in = burn_in;
            cfg.chains = chains;
            cfg.include_trivial_root = include_trivial_root;
            cfg.max_threads = thread_cap();
            let cloud = match n_mode {
                NMode::Integer(_) => chaos_game(&t, &cfg, z0)?,
                NMode::ContinuousUniform(..) => chaos_game_continuous(&t, &cfg, z0)?,
                NMode::TwoPoint(..) => chaos_game_two_point(&t, &cfg, z0)?,
            };
            let mut file = std::fs::File::create(&out)?;
            write_csv(&cloud, &mut file)?;
            let meta_json = serde_json::to_string_pretty(&cloud.meta)
                .map_err(|e| CliError::new(6, e.to_string()))?;
            std::fs::write(out.with_extension("meta.json"), &meta_json)?;
            if let Some(svg_path) = svg {
                write_svg(&cloud, &svg_path)?;
            }
            println!("{meta_json}");
            Ok(())
        }
        Cmd::Newton {
            operator,
            bipoly,
            asymptotic_w,
        } => match (operator, bipoly) {
            (None, Some(text)) => {
                let b = parse_bipoly(&text)?;
                let report = newton_report(&b, asymptotic_w)?;
                print_json(&report)
            }
            (Some(text), None) => {
                let t = parse_diffop(&text)?;
                let psi = t.psi_tilde();
                let mut report = newton_report(&psi, asymptotic_w)?;
                report.pulled_back_vertices = Some(t.shifted_ne_border().pulled_back_vertices);
                print_json(&report)
            }
            _ => Err(CliError::new(
                2,
                "provide either an operator or --bipoly, not both",
            )),
        },
        Cmd::Eigenroots { operator, m, out } => {
            let t = parse_diffop(&operator)?;
            let (a, b) = parse_range(&m, "degree range")?;
            let (a, b) = (a as usize, b as usize);
            if b < a {
                return Err(CliError::new(2, "degree range must satisfy a <= b"));
            }
            let cloud = eigenroot_cloud(&t, a, b)?;
            if let Some(path) = out {
                let mut w = std::fs::File::create(&path)?;
                use std::io::Write;
                writeln!(w, "m,re,im")?;
                for entry in &cloud {
                    for r in &entry.roots {
                        writeln!(w, "{},{:.16e},{:.16e}", entry.m, r.re, r.im)?;
                    }
                }
                println!("{{\"written\": \"{}\"}}", path.display());
                Ok(())
            } else {
                print_json(&cloud)
            }
        }
        Cmd::Lowerbound { operator } => {
            let t = parse_diffop(&operator)?;
            let region = lower_bound_region(&t)?;
            print_json(&region)
        }
        Cmd::DegreeSearch {
            operator,
            radius,
            delta,
            n_cap,
        } => {
            let t = parse_diffop(&operator)?;
            let outcome = degree_for_delta(&t, radius, delta, n_cap)?;
            match outcome {
                DegreeOutcome::Found(n0) => print_json(&serde_json::json!({ "found": n0 })),
                DegreeOutcome::NotFoundBelow(cap) => {
                    print_json(&serde_json::json!({ "not_found_below": cap }))
                }
            }
        }
    }
}

fn parse_samples(text: &str) -> Result<(usize, usize), CliError> {
    let (b, i) = text
        .split_once(',')
        .ok_or_else(|| CliError::new(2, format!("expected \"B,I\" sample counts, got `{text}`")))?;
    let b = b
        .trim()
        .parse()
        .map_err(|_| CliError::new(2, "bad boundary sample count"))?;
    let i = i
        .trim()
        .parse()
        .map_err(|_| CliError::new(2, "bad interior sample count"))?;
    Ok((b, i))
}

#[derive(Serialize)]
struct SampledOut {
    n: u32,
    radius: f64,
    center: Complex64,
    outcome: invkit_core::invariance::SampledOutcome,
}

#[derive(Serialize)]
struct MinRadiusOut {
    n: u32,
    outcome: MinDiskOutcome,
}

#[derive(Serialize)]
struct EdgeReport {
    slope: String,
    integer_length: i64,
    leading_constants: Vec<Complex64>,
}

#[derive(Serialize)]
struct NewtonReport {
    vertices: Vec<(i64, i64)>,
    edges: Vec<EdgeReport>,
    classification: String,
    u_infty_degree: i64,
    cone: Option<ConeDesc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pulled_back_vertices: Option<Vec<(i64, i64)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    asymptotic_roots: Option<Vec<Complex64>>,
}

fn newton_report(b: &BiPoly, asymptotic_w: Option<f64>) -> Result<NewtonReport, CliError> {
    let outcome = ne_border(b);
    let classification = classify_ne(&outcome).to_string();
    let (vertices, edges, cone) = match &outcome {
        NeOutcome::SinglePoint(p) => (vec![*p], vec![], None),
        NeOutcome::Border(border) => {
            let data = leading_constants(b)?;
            let edges = data
                .iter()
                .map(|e| EdgeReport {
                    slope: format!("-{}/{}", e.geom.alpha, e.geom.beta),
                    integer_length: e.geom.integer_length,
                    leading_constants: e.leading_constants.clone(),
                })
                .collect();
            let upsilon: Vec<Complex64> = data
                .iter()
                .flat_map(|e| e.leading_constants.iter().copied())
                .collect();
            (
                border.vertices.clone(),
                edges,
                Some(positive_cone(&upsilon)?),
            )
        }
    };
    let asymptotic = match asymptotic_w {
        Some(w) => Some(asymptotic_roots(b, w)?),
        None => None,
    };
    Ok(NewtonReport {
        vertices,
        edges,
        classification,
        u_infty_degree: u_infty_degree(b),
        cone,
        pulled_back_vertices: None,
        asymptotic_roots: asymptotic,
    })
}

/// Static SVG scatter with the viewport set to the cloud bounding box
/// plus a 5% margin; point radius shrinks with cloud density.
fn write_svg(cloud: &PointCloud, path: &std::path::Path) -> Result<(), CliError> {
    use std::io::Write;
    let pts = &cloud.points;
    let (mut min_x, mut max_x) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut min_y, mut max_y) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in pts {
        min_x = min_x.min(p.re);
        max_x = max_x.max(p.re);
        min_y = min_y.min(p.im);
        max_y = max_y.max(p.im);
    }
    if pts.is_empty() {
        (min_x, max_x, min_y, max_y) = (-1.0, 1.0, -1.0, 1.0);
    }
    let pad_x = (0.05 * (max_x - min_x)).max(1e-3);
    let pad_y = (0.05 * (max_y - min_y)).max(1e-3);
    let (x0, x1) = (min_x - pad_x, max_x + pad_x);
    let (y0, y1) = (min_y - pad_y, max_y + pad_y);
    let width = 1000.0;
    let height = width * (y1 - y0) / (x1 - x0);
    let radius = (600.0 / (pts.len().max(1) as f64).sqrt()).clamp(0.4, 3.0);
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(
        f,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.3} {height:.3}\">"
    )?;
    writeln!(f, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>")?;
    for p in pts {
        let cx = (p.re - x0) / (x1 - x0) * width;
        let cy = (y1 - p.im) / (y1 - y0) * height;
        writeln!(
            f,
            "<circle cx=\"{cx:.3}\" cy=\"{cy:.3}\" r=\"{radius:.2}\" fill=\"black\" fill-opacity=\"0.35\"/>"
        )?;
    }
    writeln!(f, "</svg>")?;
    Ok(())
}
