//! Chaos-game Monte-Carlo rendering of minimal Hutchinson-type invariant
//! sets: integer-degree, continuous-degree, and two-point variants, plus
//! the degree search for the root-collapse bound.
//!
//! Successors are drawn uniformly from the roots of `psi(., z, n)`, i.e.
//! `T((x-z)^n)` with the trivial factor `(x-z)^(n-k)` removed; a config
//! flag puts the trivial root back for integer-n comparisons. Chains use
//! independent ChaCha streams split off one master seed, so runs are
//! reproducible bit for bit.

use crate::diffop::DiffOp;
use crate::poly::Poly;
use crate::roots::{exact_roots, find_roots, RootsError};
use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::VecDeque;
use std::io;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SamplerError {
    #[error("psi is constant at z = {0}; the chain cannot move")]
    DegenerateStep(Complex64),
    #[error("root moduli exceeded 1e12; chain aborted")]
    NonFinite,
    #[error("operator is degenerate or has constant leading coefficient")]
    DegenerateOperator,
    #[error("invalid sampler configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Roots(#[from] RootsError),
}

/// Exponent-drawing mode for one sampler step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum NMode {
    Integer(u32),
    ContinuousUniform(f64, f64),
    TwoPoint(f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplerConfig {
    pub steps: usize,
    pub burn_in: usize,
    pub chains: usize,
    pub seed: u64,
    pub n_mode: NMode,
    /// Also offer the fixed root `z` itself (multiplicity n-k) as a
    /// successor, matching the raw `T((x-z)^n)` root set for integer n.
    pub include_trivial_root: bool,
    pub max_threads: usize,
}

impl SamplerConfig {
    pub fn new(n_mode: NMode, seed: u64) -> Self {
        SamplerConfig {
            steps: 100_000,
            burn_in: 100,
            chains: 4,
            seed,
            n_mode,
            include_trivial_root: false,
            max_threads: 4,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CloudMeta {
    pub seed: u64,
    pub steps: usize,
    pub burn_in: usize,
    pub chains: usize,
    pub operator: String,
    pub n_mode: NMode,
}

#[derive(Debug, Clone)]
pub struct PointCloud {
    pub points: Vec<Complex64>,
    pub meta: CloudMeta,
}

/// Chaos game with a fixed integer exponent.
pub fn chaos_game(
    t: &DiffOp,
    cfg: &SamplerConfig,
    z0: Complex64,
) -> Result<PointCloud, SamplerError> {
    if !matches!(cfg.n_mode, NMode::Integer(_)) {
        return Err(SamplerError::InvalidConfig(
            "chaos_game requires NMode::Integer".into(),
        ));
    }
    run_point_sampler(t, cfg, z0)
}

/// Chaos game drawing a real exponent uniformly from a window each step.
pub fn chaos_game_continuous(
    t: &DiffOp,
    cfg: &SamplerConfig,
    z0: Complex64,
) -> Result<PointCloud, SamplerError> {
    match cfg.n_mode {
        NMode::ContinuousUniform(a, b) if a <= b && a >= 0.0 => run_point_sampler(t, cfg, z0),
        NMode::ContinuousUniform(..) => Err(SamplerError::InvalidConfig(
            "continuous window must satisfy 0 <= n_min <= n_max".into(),
        )),
        _ => Err(SamplerError::InvalidConfig(
            "chaos_game_continuous requires NMode::ContinuousUniform".into(),
        )),
    }
}

fn validate(cfg: &SamplerConfig) -> Result<(), SamplerError> {
    if cfg.steps == 0 || cfg.burn_in >= cfg.steps {
        return Err(SamplerError::InvalidConfig(
            "steps must exceed burn_in".into(),
        ));
    }
    if cfg.chains == 0 {
        return Err(SamplerError::InvalidConfig(
            "need at least one chain".into(),
        ));
    }
    Ok(())
}

fn run_point_sampler(
    t: &DiffOp,
    cfg: &SamplerConfig,
    z0: Complex64,
) -> Result<PointCloud, SamplerError> {
    validate(cfg)?;
    let chains = run_chains(cfg, |stream| single_chain(t, cfg, z0, stream))?;
    Ok(assemble(t, cfg, chains))
}

/// Two-point chaos game: successors come from the roots of the two-point
/// factor polynomial at pairs drawn from a bounded reservoir of recent
/// points (seeded with `z0`, uniform draws with replacement).
pub fn chaos_game_two_point(
    t: &DiffOp,
    cfg: &SamplerConfig,
    z0: Complex64,
) -> Result<PointCloud, SamplerError> {
    let NMode::TwoPoint(n1, n2) = cfg.n_mode else {
        return Err(SamplerError::InvalidConfig(
            "chaos_game_two_point requires NMode::TwoPoint".into(),
        ));
    };
    if n1 < 0.0 || n2 < 0.0 {
        return Err(SamplerError::InvalidConfig(
            "two-point exponents must be nonnegative".into(),
        ));
    }
    validate(cfg)?;
    let chains = run_chains(cfg, |stream| two_point_chain(t, cfg, z0, stream, n1, n2))?;
    Ok(assemble(t, cfg, chains))
}

fn assemble(t: &DiffOp, cfg: &SamplerConfig, chains: Vec<Vec<Complex64>>) -> PointCloud {
    let mut points = Vec::with_capacity(cfg.chains * (cfg.steps - cfg.burn_in));
    for chain in chains {
        points.extend(chain);
    }
    debug_assert_eq!(points.len(), cfg.chains * (cfg.steps - cfg.burn_in));
    PointCloud {
        points,
        meta: CloudMeta {
            seed: cfg.seed,
            steps: cfg.steps,
            burn_in: cfg.burn_in,
            chains: cfg.chains,
            operator: t.to_string(),
            n_mode: cfg.n_mode,
        },
    }
}

/// Run all chains, possibly in parallel, merging in chain-index order.
fn run_chains<F>(cfg: &SamplerConfig, chain_fn: F) -> Result<Vec<Vec<Complex64>>, SamplerError>
where
    F: Fn(u64) -> Result<Vec<Complex64>, SamplerError> + Sync + Send,
{
    let width = cfg.max_threads.max(1);
    if width == 1 || cfg.chains == 1 {
        return (0..cfg.chains as u64).map(&chain_fn).collect();
    }
    let mut out: Vec<Result<Vec<Complex64>, SamplerError>> = Vec::with_capacity(cfg.chains);
    let ids: Vec<u64> = (0..cfg.chains as u64).collect();
    let chain_ref = &chain_fn;
    for batch in ids.chunks(width) {
        let mut results = std::thread::scope(|scope| {
            let handles: Vec<_> = batch
                .iter()
                .map(|&c| scope.spawn(move || chain_ref(c)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("chain thread panicked"))
                .collect::<Vec<_>>()
        });
        out.append(&mut results);
    }
    out.into_iter().collect()
}

fn chain_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn draw_n(mode: NMode, rng: &mut ChaCha8Rng) -> f64 {
    match mode {
        NMode::Integer(n) => n as f64,
        // a degenerate window skips the draw so it replays an integer run
        NMode::ContinuousUniform(a, b) => {
            if a == b {
                a
            } else {
                a + (b - a) * rng.random::<f64>()
            }
        }
        NMode::TwoPoint(..) => unreachable!("two-point sampler draws pairs"),
    }
}

fn guard_finite(z: Complex64) -> Result<Complex64, SamplerError> {
    if z.re.is_finite() && z.im.is_finite() && z.norm() <= 1e12 {
        Ok(z)
    } else {
        Err(SamplerError::NonFinite)
    }
}

fn single_chain(
    t: &DiffOp,
    cfg: &SamplerConfig,
    z0: Complex64,
    stream: u64,
) -> Result<Vec<Complex64>, SamplerError> {
    let mut rng = chain_rng(cfg.seed, stream);
    let mut z = guard_finite(z0)?;
    let mut out = Vec::with_capacity(cfg.steps - cfg.burn_in);
    for step in 0..cfg.steps {
        let n = draw_n(cfg.n_mode, &mut rng);
        let roots = successor_roots(t, z, n, cfg.include_trivial_root)?;
        let idx = rng.random_range(0..roots.len());
        z = guard_finite(roots[idx])?;
        if step >= cfg.burn_in {
            out.push(z);
        }
    }
    Ok(out)
}

/// Roots of `psi(., z, n)`, optionally with the trivial fixed root added
/// back (integer n only).
fn successor_roots(
    t: &DiffOp,
    z: Complex64,
    n: f64,
    include_trivial: bool,
) -> Result<Vec<Complex64>, SamplerError> {
    let psi = t.psi(z, n);
    if psi.degree().is_none_or(|d| d == 0) {
        return Err(SamplerError::DegenerateStep(z));
    }
    let mut roots = find_roots(&psi, 1e-11)?;
    if include_trivial && n.fract() == 0.0 {
        let extra = (n as i64) - t.order() as i64;
        for _ in 0..extra.max(0) {
            roots.push(z);
        }
    }
    Ok(roots)
}

const RESERVOIR_CAP: usize = 10_000;

fn two_point_chain(
    t: &DiffOp,
    cfg: &SamplerConfig,
    z0: Complex64,
    stream: u64,
    n1: f64,
    n2: f64,
) -> Result<Vec<Complex64>, SamplerError> {
    let mut rng = chain_rng(cfg.seed, stream);
    let mut reservoir: VecDeque<Complex64> = VecDeque::with_capacity(RESERVOIR_CAP);
    reservoir.push_back(guard_finite(z0)?);
    let mut out = Vec::with_capacity(cfg.steps - cfg.burn_in);
    for step in 0..cfg.steps {
        let t1 = reservoir[rng.random_range(0..reservoir.len())];
        let t2 = reservoir[rng.random_range(0..reservoir.len())];
        let phi = t.phi_two_point(t1, n1, t2, n2);
        if phi.degree().is_none_or(|d| d == 0) {
            return Err(SamplerError::DegenerateStep(t1));
        }
        let roots = find_roots(&phi, 1e-11)?;
        let z = guard_finite(roots[rng.random_range(0..roots.len())])?;
        if reservoir.len() == RESERVOIR_CAP {
            reservoir.pop_front();
        }
        reservoir.push_back(z);
        if step >= cfg.burn_in {
            out.push(z);
        }
    }
    Ok(out)
}

// ---- degree search for the root-collapse bound ----

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DegreeOutcome {
    Found(u32),
    NotFoundBelow(u32),
}

/// Fixed seed for the pseudorandom `t`-sample, so the search is a
/// deterministic function of `(r_bound, delta, n_cap)`.
const DEGREE_SAMPLE_SEED: u64 = 0x5EED_0001;
const DEGREE_SAMPLE_COUNT: usize = 100;

/// Smallest tested `n` (doubling then bisection, up to `n_cap`) such that
/// for 100 pseudorandom `|t| < r_bound`, every root of `psi(., t, n)` lies
/// within `delta` of some root of the leading coefficient.
pub fn degree_for_delta(
    t: &DiffOp,
    r_bound: f64,
    delta: f64,
    n_cap: u32,
) -> Result<DegreeOutcome, SamplerError> {
    let basic = t.classify_basic();
    if !basic.nondegenerate || t.leading().degree().unwrap() < 1 {
        return Err(SamplerError::DegenerateOperator);
    }
    let samples = degree_sample(r_bound);
    let ok = |n: u32| collapse_holds(t, &samples, delta, n);
    let k = (t.order() as u32).max(1);
    if k > n_cap {
        return Ok(DegreeOutcome::NotFoundBelow(n_cap));
    }
    if ok(k)? {
        return Ok(DegreeOutcome::Found(k));
    }
    let mut lo = k;
    let mut hi = k.saturating_mul(2).max(k + 1);
    loop {
        if hi >= n_cap {
            if ok(n_cap)? {
                lo = lo.min(n_cap - 1);
                hi = n_cap;
                break;
            }
            return Ok(DegreeOutcome::NotFoundBelow(n_cap));
        }
        if ok(hi)? {
            break;
        }
        lo = hi;
        hi = hi.saturating_mul(2);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(DegreeOutcome::Found(hi))
}

/// The fixed pseudorandom `t`-sample used by [`degree_for_delta`].
pub fn degree_sample(radius: f64) -> Vec<Complex64> {
    disk_sample(radius, DEGREE_SAMPLE_COUNT)
}

/// Whether every root of `psi(., t, n)` over the sample lies within
/// `delta` of a root of the leading coefficient.
pub fn collapse_holds(
    t: &DiffOp,
    samples: &[Complex64],
    delta: f64,
    n: u32,
) -> Result<bool, SamplerError> {
    let anchor_roots = exact_roots(t.leading(), 1e-12)?;
    for &ts in samples {
        let psi = t.psi(ts, n as f64);
        if psi.degree().is_none_or(|d| d == 0) {
            continue;
        }
        for root in find_roots(&psi, 1e-11)? {
            let dist = anchor_roots
                .iter()
                .map(|a| (root - a).norm())
                .fold(f64::INFINITY, f64::min);
            if dist > delta {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// 100 pseudorandom points in the open disk of the given radius.
fn disk_sample(radius: f64, count: usize) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(DEGREE_SAMPLE_SEED);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x = radius * (2.0 * rng.random::<f64>() - 1.0);
        let y = radius * (2.0 * rng.random::<f64>() - 1.0);
        if x * x + y * y < radius * radius {
            out.push(Complex64::new(x, y));
        }
    }
    out
}

/// CSV with header `re,im`, one point per line, 17 significant digits.
pub fn write_csv<W: io::Write>(cloud: &PointCloud, w: &mut W) -> io::Result<()> {
    writeln!(w, "re,im")?;
    for p in &cloud.points {
        writeln!(w, "{:.16e},{:.16e}", p.re, p.im)?;
    }
    Ok(())
}

/// Used by polynomial-root membership tests: roots of `Q_k` as anchors.
pub fn leading_roots(t: &DiffOp) -> Result<Vec<Complex64>, SamplerError> {
    let qk: &Poly = t.leading();
    Ok(exact_roots(qk, 1e-12)?)
}
