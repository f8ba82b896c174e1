use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use log::{info, warn};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shapestab::energy::{energy_report, EnergyConfig};
use shapestab::geometry::SphereGrid;
use shapestab::io::{fmt17, load_references, read_shape, write_spectral_csv};
use shapestab::rearrange::{
    knothe_rosenblatt_2d, pushforward_check, shell_transport, transport_energy_bound_check,
    Density2D, PolarCell, SectorShells,
};
use shapestab::spectral::{oscillation_profile, verify_gap, SpectralParams, SpectralTable};
use shapestab::stability::{
    ball_minimality_scan, big_asymmetry_check, default_battery, default_h_grid, default_m_grid,
    fuglede_projected, random_band_limited, sharpness_fit, MixedParams, RANDOM_DEGREE,
};
use std::collections::BTreeMap;
use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser, Debug)]
#[command(
    name = "shapestab",
    version,
    about = "Nonlocal shape energies and stability checks"
)]
struct Cli {
    /// Flat `key = value` file; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for the data-parallel kernels [default: $SHAPESTAB_THREADS].
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the CSV or JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Eigenvalue table, gap check and oscillation profile.
    Spectrum(SpectrumArgs),
    /// Energies of a shape file as JSON.
    Energy(EnergyArgs),
    /// Stability of nearly-spherical sets against the spectral-gap bound.
    Fuglede(FugledeArgs),
    /// Log-log slope of deficit against asymmetry on the annulus family.
    Sharpness(SharpnessArgs),
    /// Ball minimality scan of the mixed energy over a mass grid.
    Mixed(MixedArgs),
    /// Push-forward residuals and the shell-transport energy bound.
    Transport(TransportArgs),
    /// Deficit of well-separated ball unions against the far-field bound.
    Bigasym(BigasymArgs),
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct SpectrumArgs {
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    kmax: Option<usize>,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct EnergyArgs {
    /// Shape file in the JSON format of `shapestab::io`.
    #[arg(long)]
    shape: Option<PathBuf>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    /// Truncation level `M` of the capped kernel.
    #[arg(long = "M")]
    truncation: Option<f64>,
    /// Reference-values CSV for an oracle comparison.
    #[arg(long)]
    reference: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct FugledeArgs {
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long)]
    beta: Option<f64>,
    /// Grid resolution: nodes on the circle, polar nodes on the sphere.
    #[arg(long)]
    resolution: Option<usize>,
    /// Comma-separated amplitudes `t`.
    #[arg(long = "t-grid")]
    t_grid: Option<String>,
    /// Comma-separated pure modes.
    #[arg(long)]
    modes: Option<String>,
    /// Number of random band-limited perturbations.
    #[arg(long)]
    random: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct SharpnessArgs {
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long)]
    beta: Option<f64>,
    /// Comma-separated annulus parameters `h`.
    #[arg(long = "h-grid")]
    h_grid: Option<String>,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct MixedArgs {
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    /// Comma-separated masses `m`.
    #[arg(long = "m-grid")]
    m_grid: Option<String>,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct TransportArgs {
    #[arg(long)]
    beta: Option<f64>,
    /// Number of shell-transport cases.
    #[arg(long)]
    cases: Option<usize>,
    /// Number of random density pairs for the push-forward check.
    #[arg(long)]
    pairs: Option<usize>,
    /// Half-width of the annulus holding the shells.
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct BigasymArgs {
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

const KNOWN_KEYS: &[&str] = &[
    "N",
    "beta",
    "kmax",
    "shape",
    "alpha",
    "s",
    "M",
    "reference",
    "resolution",
    "t-grid",
    "modes",
    "random",
    "seed",
    "h-grid",
    "m-grid",
    "cases",
    "pairs",
    "eps",
    "count",
    "threads",
    "out",
];

#[derive(Debug)]
enum Failure {
    Usage(String),
    Violation(String),
    NonConvergence(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Violation(_) => 1,
            Failure::Usage(_) => 2,
            Failure::NonConvergence(_) => 3,
        }
    }
}

impl From<shapestab::Error> for Failure {
    fn from(e: shapestab::Error) -> Self {
        match e {
            shapestab::Error::Violation { .. } => Failure::Violation(e.to_string()),
            shapestab::Error::NonConvergence { .. } => Failure::NonConvergence(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(format!("{e:#}"))
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Run = Result<(), Failure>;

/// Values from the config file, overridden by flags.
struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    fn load(path: Option<&Path>) -> Result<Self, Failure> {
        let mut values = BTreeMap::new();
        let Some(path) = path else {
            return Ok(Self { values });
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Failure::Usage(format!(
                    "{}:{}: expected key = value",
                    path.display(),
                    i + 1
                ))
            })?;
            let k = k.trim().to_string();
            if !KNOWN_KEYS.contains(&k.as_str()) {
                return Err(Failure::Usage(format!(
                    "{}:{}: unknown key {k}",
                    path.display(),
                    i + 1
                )));
            }
            values.insert(k, v.trim().to_string());
        }
        Ok(Self { values })
    }

    fn get<T: FromStr>(&self, key: &str, flag: Option<T>) -> Result<Option<T>, Failure>
    where
        T::Err: Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| Failure::Usage(format!("config key {key}: {e}"))),
        }
    }

    fn or<T: FromStr>(&self, key: &str, flag: Option<T>, default: T) -> Result<T, Failure>
    where
        T::Err: Display,
    {
        Ok(self.get(key, flag)?.unwrap_or(default))
    }

    fn need<T: FromStr>(&self, key: &str, flag: Option<T>) -> Result<T, Failure>
    where
        T::Err: Display,
    {
        self.get(key, flag)?
            .ok_or_else(|| Failure::Usage(format!("missing required parameter {key}")))
    }

    fn list(&self, key: &str, flag: Option<String>) -> Result<Option<Vec<f64>>, Failure> {
        let Some(text) = self.get::<String>(key, flag)? else {
            return Ok(None);
        };
        text.split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|e| Failure::Usage(format!("{key}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }
}

fn positive(name: &str, v: f64) -> Result<f64, Failure> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Failure::Usage(format!("{name} must be positive, got {v}")))
    }
}

fn sink(out: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(p) => Box::new(std::io::BufWriter::new(
            std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(std::io::BufWriter::new(std::io::stdout().lock())),
    })
}

fn csv_line(w: &mut dyn Write, cells: &[String]) -> std::io::Result<()> {
    writeln!(w, "{}", cells.join(","))
}

fn num(x: f64) -> String {
    fmt17(x)
}

fn spectrum(cfg: &Config, a: SpectrumArgs, out: Option<&Path>) -> Run {
    let n = cfg.need("N", a.n)?;
    let beta = positive("beta", cfg.need("beta", a.beta)?)?;
    let kmax = cfg.or("kmax", a.kmax, 200)?;
    let table = SpectralTable::new(SpectralParams::new(n, beta, kmax)?);
    let mut w = sink(out)?;
    write_spectral_csv(&table, &mut w)?;
    w.flush()?;
    let osc = oscillation_profile(&table)?;
    eprintln!(
        "oscillation: k_tilde={} alternation={} monotone_from={} plateau_from={:?}",
        osc.k_tilde, osc.alternation_holds, osc.monotone_from, osc.plateau_from
    );
    let gap = verify_gap(&table)?;
    eprintln!(
        "gap: N={n} beta={beta} D_beta={} min_gap={} at k={} slack={:e}",
        num(gap.d_beta),
        num(gap.min_gap),
        gap.argmin_k,
        gap.slack
    );
    Ok(())
}

fn energy(cfg: &Config, a: EnergyArgs, out: Option<&Path>) -> Run {
    let path: PathBuf = cfg.need("shape", a.shape)?;
    let shape = read_shape(&path)?;
    let ec = EnergyConfig {
        beta: positive("beta", cfg.need("beta", a.beta)?)?,
        alpha: cfg.get("alpha", a.alpha)?,
        s: cfg.get("s", a.s)?,
        truncation: cfg.get("M", a.truncation)?,
    };
    let report = energy_report(&shape, &ec)?;
    let mut doc = serde_json::to_value(&report).map_err(|e| Failure::Usage(e.to_string()))?;
    if let Some(rp) = cfg.get::<PathBuf>("reference", a.reference)? {
        let refs = load_references(&rp)?;
        let n = shape.n().to_string();
        let hit = refs.iter().find(|r| {
            r.quantity == "g_ball"
                && r.param("N") == Some(n.as_str())
                && r.param("beta").and_then(|b| b.parse::<f64>().ok()) == Some(ec.beta)
        });
        match hit {
            Some(r) => {
                let z = (report.g_beta_ball - r.value).abs() / r.error;
                doc["reference"] = serde_json::json!({
                    "quantity": r.quantity,
                    "params": r.params,
                    "value": r.value,
                    "error": r.error,
                    "oracle": r.oracle,
                    "standard_errors": z,
                });
                if z > 3.0 {
                    return Err(Failure::Violation(format!(
                        "ball energy {} is {z:.2} standard errors from the reference {}",
                        report.g_beta_ball, r.value
                    )));
                }
            }
            None => warn!("no g_ball reference for N={n}, beta={}", ec.beta),
        }
    }
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, &doc).map_err(|e| Failure::Usage(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn fuglede(cfg: &Config, a: FugledeArgs, out: Option<&Path>) -> Run {
    let n = cfg.or("N", a.n, 2)?;
    let beta = positive("beta", cfg.need("beta", a.beta)?)?;
    let res = cfg.or("resolution", a.resolution, if n == 2 { 256 } else { 16 })?;
    let t_grid = cfg
        .list("t-grid", a.t_grid)?
        .unwrap_or_else(|| vec![0.02, 0.01, 0.005]);
    let modes: Vec<usize> = cfg
        .list("modes", a.modes)?
        .unwrap_or_else(|| vec![2.0, 3.0, 4.0, 5.0])
        .into_iter()
        .map(|k| k as usize)
        .collect();
    let random = cfg.or("random", a.random, 0)?;
    let seed = cfg.get("seed", a.seed)?;
    if random > 0 && seed.is_none() {
        return Err(Failure::Usage("random perturbations need --seed".into()));
    }
    let grid = SphereGrid::new(n, res)?;
    let mut inputs: Vec<(String, Vec<f64>)> = modes
        .iter()
        .map(|&k| {
            let u = grid.sample(|z| match n {
                2 => 0.5 * (k as f64 * z[1].atan2(z[0])).cos(),
                _ => 0.5 * zonal_mode(k, z[2]),
            });
            (format!("mode_{k}"), u)
        })
        .collect();
    if let Some(seed) = seed {
        for j in 0..random as u64 {
            let u = random_band_limited(&grid, RANDOM_DEGREE.min(res / 3), seed + j)?;
            inputs.push((format!("random_{}", seed + j), u));
        }
    }
    let mut w = sink(out)?;
    writeln!(w, "# N={n}")?;
    writeln!(w, "# beta={}", num(beta))?;
    writeln!(w, "# deficit = G_beta(E_t) - G_beta(B); bound = D_beta/8 * t^2 * ||u_t||^2; ratio = deficit/(t^2 ||u_t||^2)")?;
    csv_line(
        &mut w,
        &[
            "case",
            "t",
            "u_l2_squared",
            "volume_error",
            "barycenter_error",
            "deficit",
            "bound",
            "slack",
            "ratio",
            "pass",
        ]
        .map(String::from),
    )?;
    let mut failures = Vec::new();
    let mut worst = f64::INFINITY;
    let mut count = 0;
    for (label, u) in &inputs {
        let r = fuglede_projected(&grid, beta, u, &t_grid)?;
        for c in &r.cases {
            count += 1;
            worst = worst.min(c.slack);
            csv_line(
                &mut w,
                &[
                    label.clone(),
                    num(c.t),
                    num(c.u_l2_squared),
                    num(c.volume_error),
                    num(c.barycenter_error),
                    num(c.deficit),
                    num(c.bound),
                    num(c.slack),
                    num(c.ratio),
                    c.pass.to_string(),
                ],
            )?;
            if !c.pass {
                failures.push(format!("{label} t={}", c.t));
            }
        }
        if let Some(x) = r.extrapolated_ratio {
            info!(
                "{label}: extrapolated ratio {x:.10}, predicted {:.10}",
                r.predicted_ratio
            );
        }
    }
    w.flush()?;
    eprintln!(
        "fuglede: {count} cases, {} failing, worst slack {worst:e}",
        failures.len()
    );
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Violation(format!(
            "bound fails at {}",
            failures.join("; ")
        )))
    }
}

/// Legendre polynomial `P_k(x)` by the three-term recurrence.
fn zonal_mode(k: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if k == 0 {
        return p0;
    }
    for l in 1..k {
        let lf = l as f64;
        let p2 = ((2.0 * lf + 1.0) * x * p1 - lf * p0) / (lf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

fn sharpness(cfg: &Config, a: SharpnessArgs, out: Option<&Path>) -> Run {
    let n = cfg.need("N", a.n)?;
    let beta = positive("beta", cfg.need("beta", a.beta)?)?;
    let h = cfg.list("h-grid", a.h_grid)?.unwrap_or_else(default_h_grid);
    let fit = sharpness_fit(n, beta, &h)?;
    let mut w = sink(out)?;
    writeln!(w, "# N={n}")?;
    writeln!(w, "# beta={}", num(beta))?;
    writeln!(
        w,
        "# delta = Fraenkel asymmetry of the annulus set; deficit = G_beta(E_h) - G_beta(B)"
    )?;
    csv_line(&mut w, &["h", "delta", "deficit", "used"].map(String::from))?;
    for p in &fit.points {
        csv_line(
            &mut w,
            &[num(p.h), num(p.delta), num(p.deficit), p.used.to_string()],
        )?;
    }
    writeln!(w, "# slope={}", num(fit.slope))?;
    writeln!(w, "# intercept={}", num(fit.intercept))?;
    w.flush()?;
    eprintln!(
        "sharpness: slope {:.6} over {:.2} decades, residual {:.2e}, pass {}",
        fit.slope, fit.decades, fit.residual, fit.pass
    );
    if fit.pass {
        Ok(())
    } else {
        Err(Failure::Violation(format!(
            "slope {} outside [1.95, 2.05]",
            fit.slope
        )))
    }
}

fn mixed(cfg: &Config, a: MixedArgs, out: Option<&Path>) -> Run {
    let n = cfg.or("N", a.n, 2)?;
    let par = MixedParams::new(
        n,
        cfg.need("beta", a.beta)?,
        cfg.need("alpha", a.alpha)?,
        cfg.need("s", a.s)?,
    )?;
    let m_grid = cfg
        .list("m-grid", a.m_grid)?
        .unwrap_or_else(|| default_m_grid(n));
    let battery = default_battery(n)?;
    let r = ball_minimality_scan(par, &m_grid, &battery)?;
    let mut w = sink(out)?;
    writeln!(w, "# N={n}")?;
    writeln!(
        w,
        "# beta={} alpha={} s={}",
        num(par.beta),
        num(par.alpha),
        num(par.s)
    )?;
    writeln!(
        w,
        "# margin = E_m(F) - E_m(B[m]) minimized over the competitor battery"
    )?;
    csv_line(
        &mut w,
        &[
            "m",
            "lambda",
            "epsilon",
            "ball_energy",
            "ball_energy_direct",
            "scaling_error",
            "min_margin",
            "argmin",
            "ball_wins",
        ]
        .map(String::from),
    )?;
    for row in &r.rows {
        csv_line(
            &mut w,
            &[
                num(row.m),
                num(row.lambda),
                num(row.epsilon),
                num(row.ball_energy),
                num(row.ball_energy_direct),
                num(row.scaling_error),
                num(row.min_margin),
                row.argmin.clone(),
                row.ball_wins.to_string(),
            ],
        )?;
    }
    w.flush()?;
    let thr = r.threshold.map_or("none".into(), num);
    eprintln!(
        "mixed: {} masses, {} competitors, threshold {thr}, largest decade dominated {}, max scaling error {:.2e}",
        r.rows.len(),
        r.competitors.len(),
        r.largest_decade_dominated,
        r.max_scaling_error
    );
    if r.max_scaling_error > shapestab::stability::SCALING_TOL {
        return Err(Failure::Violation(format!(
            "scaling identity off by {:e}",
            r.max_scaling_error
        )));
    }
    Ok(())
}

fn transport(cfg: &Config, a: TransportArgs, out: Option<&Path>) -> Run {
    let beta = positive("beta", cfg.need("beta", a.beta)?)?;
    let cases = cfg.or("cases", a.cases, 10)?;
    let pairs = cfg.or("pairs", a.pairs, 20)?;
    let eps = cfg.or("eps", a.eps, 0.15)?;
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Failure::Usage(format!(
            "eps must lie in (0, 1/2), got {eps}"
        )));
    }
    let seed = cfg.need::<u64>("seed", a.seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = sink(out)?;
    writeln!(w, "# beta={}", num(beta))?;
    writeln!(
        w,
        "# kr rows: value = max push-forward residual, bound = 2 x largest cell mass"
    )?;
    writeln!(
        w,
        "# shell rows: value = |G(E1,E3) - G(E2,E3)|, bound = C |E3|^alpha * transport cost"
    )?;
    csv_line(
        &mut w,
        &["kind", "case", "value", "bound", "slack", "pass"].map(String::from),
    )?;
    let mut failures = Vec::new();
    let mut worst = f64::INFINITY;
    for i in 0..pairs {
        let mu = random_density(&mut rng, 4, 3)?;
        let nu = random_density(&mut rng, 3, 4)?;
        let nu = Density2D::new(
            nu.x_edges.clone(),
            nu.y_edges.clone(),
            nu.values
                .iter()
                .map(|v| v * mu.mass() / nu.mass())
                .collect(),
        )?;
        let rep = pushforward_check(&knothe_rosenblatt_2d(&mu, &nu)?);
        let slack = rep.tolerance - rep.max_residual;
        worst = worst.min(slack / rep.tolerance);
        csv_line(
            &mut w,
            &[
                "kr".into(),
                i.to_string(),
                num(rep.max_residual),
                num(rep.tolerance),
                num(slack),
                rep.pass.to_string(),
            ],
        )?;
        if !rep.pass {
            failures.push(format!("kr pair {i}"));
        }
    }
    for i in 0..cases {
        let k = rng.random_range(1..=4usize);
        let width = std::f64::consts::TAU / k as f64;
        let sectors: Vec<SectorShells> = (0..k)
            .map(|j| {
                let a = rng.random_range(0.2..0.8) * eps;
                let inner = (1.0 - ((1.0 + a) * (1.0 + a) - 1.0)).sqrt();
                SectorShells {
                    a0: j as f64 * width,
                    a1: (j + 1) as f64 * width,
                    source: vec![(1.0, 1.0 + a)],
                    target: vec![(inner, 1.0)],
                }
            })
            .collect();
        let map = shell_transport(&sectors, eps)?;
        let core = PolarCell {
            r0: 0.0,
            r1: 1.0 - eps,
            a0: 0.0,
            a1: std::f64::consts::TAU,
        };
        let rep = transport_energy_bound_check(&map, &[core], beta)?;
        worst = worst.min(rep.slack / rep.rhs);
        csv_line(
            &mut w,
            &[
                "shell".into(),
                i.to_string(),
                num(rep.lhs),
                num(rep.rhs),
                num(rep.slack),
                rep.pass.to_string(),
            ],
        )?;
        if !rep.pass {
            failures.push(format!("shell case {i}"));
        }
    }
    w.flush()?;
    eprintln!(
        "transport: {pairs} pairs, {cases} shell cases, {} failing, worst relative slack {worst:.3e}",
        failures.len()
    );
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Violation(failures.join("; ")))
    }
}

fn random_density(rng: &mut ChaCha8Rng, nx: usize, ny: usize) -> shapestab::Result<Density2D> {
    let mut edges = |k: usize| {
        let mut e = vec![0.0];
        for _ in 0..k {
            let last = *e.last().unwrap();
            e.push(last + rng.random_range(0.2..1.0));
        }
        e
    };
    let x = edges(nx);
    let y = edges(ny);
    let v = (0..nx * ny).map(|_| rng.random_range(0.1..2.0)).collect();
    Density2D::new(x, y, v)
}

fn bigasym(cfg: &Config, a: BigasymArgs, out: Option<&Path>) -> Run {
    let n = cfg.or("N", a.n, 2)?;
    let beta = positive("beta", cfg.need("beta", a.beta)?)?;
    let count = cfg.or("count", a.count, 5)?;
    let seed = cfg.need::<u64>("seed", a.seed)?;
    let r = big_asymmetry_check(n, beta, count, seed)?;
    let mut w = sink(out)?;
    writeln!(w, "# N={n}")?;
    writeln!(w, "# beta={}", num(beta))?;
    writeln!(w, "# xi={}", num(r.xi))?;
    writeln!(
        w,
        "# bound = (3^beta - 2^beta)/2 * omega_N^2 applies when asymmetry >= 2(omega_N - xi)"
    )?;
    csv_line(
        &mut w,
        &[
            "case",
            "balls",
            "min_gap",
            "asymmetry",
            "precondition",
            "deficit",
            "bound",
            "slack",
            "pass",
        ]
        .map(String::from),
    )?;
    for (i, c) in r.cases.iter().enumerate() {
        csv_line(
            &mut w,
            &[
                i.to_string(),
                c.balls.balls.len().to_string(),
                c.min_gap.map_or(String::new(), num),
                num(c.asymmetry),
                c.precondition.to_string(),
                num(c.deficit),
                num(c.bound),
                num(c.slack),
                c.pass.to_string(),
            ],
        )?;
    }
    w.flush()?;
    eprintln!(
        "bigasym: {} cases, growth monotone {}, pass {}",
        r.cases.len(),
        r.growth_monotone,
        r.pass
    );
    if r.pass {
        Ok(())
    } else {
        Err(Failure::Violation("far-field bound fails".into()))
    }
}

fn run(cli: Cli) -> Run {
    let cfg = Config::load(cli.config.as_deref())?;
    let threads = match cfg.get::<usize>("threads", cli.threads)? {
        Some(t) => Some(t),
        None => match std::env::var("SHAPESTAB_THREADS") {
            Ok(v) => Some(
                v.trim()
                    .parse()
                    .map_err(|e| Failure::Usage(format!("SHAPESTAB_THREADS: {e}")))?,
            ),
            Err(_) => None,
        },
    };
    if let Some(t) = threads {
        if t == 0 {
            return Err(Failure::Usage("threads must be positive".into()));
        }
        if !shapestab::par::init_threads(t) && shapestab::par::is_parallel() {
            warn!("thread pool already initialized");
        }
    }
    let out = cfg.get::<PathBuf>("out", cli.out)?;
    let out = out.as_deref();
    match cli.command {
        Command::Spectrum(a) => spectrum(&cfg, a, out),
        Command::Energy(a) => energy(&cfg, a, out),
        Command::Fuglede(a) => fuglede(&cfg, a, out),
        Command::Sharpness(a) => sharpness(&cfg, a, out),
        Command::Mixed(a) => mixed(&cfg, a, out),
        Command::Transport(a) => transport(&cfg, a, out),
        Command::Bigasym(a) => bigasym(&cfg, a, out),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (kind, msg) = match &f {
                Failure::Usage(m) => ("error", m),
                Failure::Violation(m) => ("violation", m),
                Failure::NonConvergence(m) => ("non-convergence", m),
            };
            eprintln!("{kind}: {msg}");
            ExitCode::from(f.code())
        }
    }
}
