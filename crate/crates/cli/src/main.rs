//! `ftr`: command-line front end for the FTR fading library.
//!
//! Every verb writes a table to stdout, as CSV (header row, LF endings,
//! numbers with 17 significant digits) or as one JSON object mapping column
//! names to arrays. Exit status is 0 on success, 1 when `reduce-check` finds
//! a mismatch, 2 on invalid input and 3 when a numerical method misses its
//! accuracy target.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ftr::fit::{self, EmpiricalCdf, FitResult, SearchConfig};
use ftr::metrics::{self, CepFamily, OutageSpec};
use ftr::model::{self, FtrParams, MixtureCoeffs, ReductionTarget};
use ftr::sampler::{self, SampleConfig};
use ftr::specfn::{LaplaceInversion, Quadrature};
use ftr::Error;

#[derive(Parser, Debug)]
#[command(name = "ftr", version, about = "Fluctuating Two-Ray fading: distributions, sampling, link metrics and fitting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// SNR density on an SNR grid. Columns: x, pdf.
    Pdf(DistArgs),
    /// SNR CDF on an SNR grid. Columns: x, cdf.
    Cdf(DistArgs),
    /// SNR moment generating function on an s grid. Columns: s, mgf.
    Mgf(MgfArgs),
    /// Envelope density on an amplitude grid. Columns: r, pdf.
    EnvelopePdf(EnvelopeArgs),
    /// Monte Carlo realizations. Columns: snr, envelope.
    Sample(SampleArgs),
    /// Average BER over a mean-SNR sweep. Columns: gamma_bar_db, value, method.
    Ber(BerArgs),
    /// Outage probability over a mean-SNR sweep. Columns: gamma_bar_db, value, method.
    Outage(OutageArgs),
    /// Fit FTR and Rician models to an empirical envelope CDF.
    ///
    /// Input is CSV with header `amplitude,cdf`. The error factor is the
    /// largest |log10 F_emp - log10 F_model| over the empirical support
    /// points, with Omega fixed at the empirical second moment (or --omega). JSON keys:
    /// model, K, Delta, m, Omega, epsilon, evaluations (one object per
    /// model, keyed `ftr` and `rician`).
    Fit(FitArgs),
    /// Compare the FTR MGF against classical special-case models.
    /// Columns: target, s, ftr, reference, abs_diff, tolerance, pass.
    ReduceCheck(ReduceArgs),
    /// Mixture weights and offsets of the approximate density.
    /// Columns: i, alpha, delta, alpha_exact.
    Coeffs(CoeffsArgs),
}

#[derive(Args, Debug, Clone)]
struct ModelArgs {
    /// Specular-to-diffuse power ratio K >= 0.
    #[arg(long = "K", allow_hyphen_values = true)]
    k: f64,
    /// Specular amplitude similarity Delta in [0, 1].
    #[arg(long = "Delta", allow_hyphen_values = true)]
    delta: f64,
    /// Fluctuation index m > 0.
    #[arg(long, allow_hyphen_values = true)]
    m: f64,
    #[command(flatten)]
    snr: SnrArgs,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
struct SnrArgs {
    /// Mean SNR, linear: a value or start:stop:points.
    #[arg(long = "gamma-bar", allow_hyphen_values = true)]
    gamma_bar: Option<String>,
    /// Mean SNR in dB: a value or start:stop:points.
    #[arg(long = "gamma-db", allow_hyphen_values = true)]
    gamma_db: Option<String>,
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    output: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Method {
    /// Numerical Laplace inversion.
    Exact,
    /// Gamma-mixture series (integer m only).
    Approx,
    /// Series when it agrees with inversion to 1e-3 on a probe grid, else inversion.
    Auto,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Inversion {
    Euler,
    Talbot,
}

#[derive(Args, Debug)]
struct DistArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// SNR grid start:stop:points.
    #[arg(long, allow_hyphen_values = true)]
    grid: String,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    method: Method,
    /// Mixture order for the series (default ceil(K Delta) + 1).
    #[arg(long)]
    order: Option<usize>,
    #[arg(long, value_enum, default_value_t = Inversion::Euler)]
    inversion: Inversion,
    /// Relative error the inversion must certify.
    #[arg(long, default_value_t = 1e-7)]
    inversion_target: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct MgfArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// s grid start:stop:points.
    #[arg(long, allow_hyphen_values = true)]
    grid: String,
    /// Independently fluctuating specular waves (s <= 0 only).
    #[arg(long)]
    independent: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct EnvelopeArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Amplitude grid start:stop:points.
    #[arg(long, allow_hyphen_values = true)]
    grid: String,
    /// Mean envelope power E[r^2]; defaults to the mean SNR value.
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    method: Method,
    #[arg(long)]
    order: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Number of realizations.
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Independently fluctuating specular waves.
    #[arg(long)]
    independent: bool,
    /// Also write a little-endian binary dump to this path.
    #[arg(long)]
    binary: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Modulation {
    Bpsk,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum BerMethod {
    /// Lauricella closed form.
    Exact,
    /// Direct integration of the CEP against the exact density.
    Quadrature,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Add the high-SNR asymptote (method `asymptote`).
    #[arg(long)]
    with_asymptote: bool,
    /// Add Monte Carlo estimates (methods `mc` and `mc_stderr`).
    #[arg(long)]
    with_mc: bool,
    /// Channel draws for Monte Carlo.
    #[arg(long, default_value_t = 1_000_000)]
    n_mc: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct BerArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long = "mod", value_enum, default_value_t = Modulation::Bpsk)]
    modulation: Modulation,
    #[arg(long, value_enum, default_value_t = BerMethod::Exact)]
    method: BerMethod,
    #[command(flatten)]
    sweep: SweepArgs,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct OutageArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Target rate R_S in bit/s/Hz.
    #[arg(long, default_value_t = 2.0)]
    rate: f64,
    #[command(flatten)]
    sweep: SweepArgs,
    #[command(flatten)]
    common: Common,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum FitModelArg {
    Ftr,
    Rician,
    Both,
}

#[derive(Args, Debug)]
struct FitArgs {
    /// CSV file with header `amplitude,cdf`; `-` reads stdin.
    #[arg(long)]
    input: String,
    /// Candidate fluctuation indices, comma-separated.
    #[arg(long, value_delimiter = ',')]
    m_candidates: Option<Vec<usize>>,
    #[arg(long, value_enum, default_value_t = FitModelArg::Both)]
    model: FitModelArg,
    /// Mean envelope power E[r^2]; estimated from the CDF points when omitted.
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    output: Format,
}

#[derive(Args, Debug)]
struct ReduceArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Target model; all matching targets when omitted.
    #[arg(long)]
    target: Option<String>,
    /// s grid start:stop:points, s <= 0.
    #[arg(long, allow_hyphen_values = true, default_value = "-4:0:9")]
    grid: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct CoeffsArgs {
    #[arg(long = "K", allow_hyphen_values = true)]
    k: f64,
    #[arg(long = "Delta", allow_hyphen_values = true)]
    delta: f64,
    /// Mixture order M (default ceil(K Delta) + 1).
    #[arg(long)]
    order: Option<usize>,
    #[command(flatten)]
    common: Common,
}

enum Cell {
    Num(f64),
    Int(usize),
    Text(String),
}

struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(columns: Vec<&'static str>) -> Self {
        Table { columns, rows: Vec::new() }
    }

    fn write(&self, format: Format, out: &mut impl Write) -> io::Result<()> {
        match format {
            Format::Csv => {
                writeln!(out, "{}", self.columns.join(","))?;
                for row in &self.rows {
                    let line: Vec<String> = row
                        .iter()
                        .map(|c| match c {
                            Cell::Num(v) => format!("{v:.16e}"),
                            Cell::Int(i) => i.to_string(),
                            Cell::Text(s) => s.clone(),
                        })
                        .collect();
                    writeln!(out, "{}", line.join(","))?;
                }
            }
            Format::Json => {
                let mut obj = serde_json::Map::new();
                for (j, name) in self.columns.iter().enumerate() {
                    let col = self
                        .rows
                        .iter()
                        .map(|r| match &r[j] {
                            Cell::Num(v) => serde_json::Value::from(*v),
                            Cell::Int(i) => serde_json::Value::from(*i),
                            Cell::Text(s) => serde_json::Value::from(s.clone()),
                        })
                        .collect();
                    obj.insert((*name).to_string(), serde_json::Value::Array(col));
                }
                writeln!(out, "{}", serde_json::Value::Object(obj))?;
            }
        }
        Ok(())
    }
}

fn parse_grid(text: &str) -> ftr::Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || Error::InvalidParameter(format!("grid must be start:stop:points, got '{text}'"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if n < 2 || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidParameter(format!("grid needs finite ends and at least 2 points, got '{text}'")));
    }
    Ok((0..n).map(|i| if i == n - 1 { b } else { a + (b - a) * i as f64 / (n - 1) as f64 }).collect())
}

fn parse_values(text: &str) -> ftr::Result<Vec<f64>> {
    if text.contains(':') {
        parse_grid(text)
    } else {
        text.trim()
            .parse()
            .map(|v| vec![v])
            .map_err(|_| Error::InvalidParameter(format!("expected a number or start:stop:points, got '{text}'")))
    }
}

/// Mean-SNR values in linear units.
/// Mean-SNR values as given on the command line, with their unit.
fn snr_grid(s: &SnrArgs) -> ftr::Result<(Vec<f64>, metrics::SnrUnit)> {
    match (&s.gamma_bar, &s.gamma_db) {
        (Some(g), None) => Ok((parse_values(g)?, metrics::SnrUnit::Linear)),
        (None, Some(d)) => Ok((parse_values(d)?, metrics::SnrUnit::Db)),
        _ => Err(Error::InvalidParameter("give exactly one of --gamma-bar and --gamma-db".into())),
    }
}

fn snr_values(s: &SnrArgs) -> ftr::Result<Vec<f64>> {
    let (values, unit) = snr_grid(s)?;
    Ok(match unit {
        metrics::SnrUnit::Linear => values,
        metrics::SnrUnit::Db => values.into_iter().map(metrics::db_to_linear).collect(),
    })
}

fn single_params(a: &ModelArgs) -> ftr::Result<FtrParams<f64>> {
    let g = snr_values(&a.snr)?;
    if g.len() != 1 {
        return Err(Error::InvalidParameter("this command takes a single mean SNR value".into()));
    }
    FtrParams::new(a.k, a.delta, a.m, g[0])
}

fn inversion(kind: Inversion, target: f64) -> ftr::Result<LaplaceInversion<f64>> {
    let base: LaplaceInversion<f64> = match kind {
        Inversion::Euler => LaplaceInversion::euler(),
        Inversion::Talbot => LaplaceInversion::talbot(),
    };
    LaplaceInversion::new(base.method, base.terms, target)
}

fn series_coeffs(p: &FtrParams<f64>, order: Option<usize>) -> ftr::Result<MixtureCoeffs<f64>> {
    model::mixture_coeffs(p, order.unwrap_or_else(|| model::default_mixture_order(p)))
}

/// Resolves `auto` by comparing the series against inversion on 21 points of the grid.
fn resolve_method(
    method: Method,
    p: &FtrParams<f64>,
    grid: &[f64],
    order: Option<usize>,
    series: impl Fn(&MixtureCoeffs<f64>, f64) -> ftr::Result<f64>,
    exact: impl Fn(f64) -> ftr::Result<f64>,
) -> ftr::Result<Option<MixtureCoeffs<f64>>> {
    match method {
        Method::Exact => Ok(None),
        Method::Approx => series_coeffs(p, order).map(Some),
        Method::Auto => {
            let Ok(c) = series_coeffs(p, order) else { return Ok(None) };
            let step = (grid.len() / 20).max(1);
            for &x in grid.iter().step_by(step) {
                if (series(&c, x)? - exact(x)?).abs() > 1e-3 {
                    return Ok(None);
                }
            }
            Ok(Some(c))
        }
    }
}

fn eval_grid(grid: &[f64], f: impl Fn(f64) -> ftr::Result<f64> + Sync) -> ftr::Result<Vec<f64>> {
    use rayon::prelude::*;
    grid.par_iter().map(|&x| f(x)).collect()
}

fn run_dist(a: &DistArgs, cdf: bool) -> ftr::Result<(Table, Format)> {
    let p = single_params(&a.model)?;
    let grid = parse_grid(&a.grid)?;
    let cfg = inversion(a.inversion, a.inversion_target)?;
    let exact = |x: f64| if cdf { model::cdf_exact(&p, x, &cfg) } else { model::pdf_exact(&p, x, &cfg) };
    let series = |c: &MixtureCoeffs<f64>, x: f64| if cdf { model::cdf_approx(&p, x, c) } else { model::pdf_approx(&p, x, c) };
    let coeffs = resolve_method(a.method, &p, &grid, a.order, series, exact)?;
    let values = match &coeffs {
        Some(c) => eval_grid(&grid, |x| series(c, x))?,
        None => eval_grid(&grid, exact)?,
    };
    let mut t = Table::new(vec!["x", if cdf { "cdf" } else { "pdf" }]);
    t.rows = grid.iter().zip(values).map(|(&x, v)| vec![Cell::Num(x), Cell::Num(v)]).collect();
    Ok((t, a.common.output))
}

fn run_mgf(a: &MgfArgs) -> ftr::Result<(Table, Format)> {
    let p = single_params(&a.model)?;
    let grid = parse_grid(&a.grid)?;
    let values = eval_grid(&grid, |s| if a.independent { model::mgf_independent(&p, s) } else { model::mgf(&p, s) })?;
    let mut t = Table::new(vec!["s", "mgf"]);
    t.rows = grid.iter().zip(values).map(|(&s, v)| vec![Cell::Num(s), Cell::Num(v)]).collect();
    Ok((t, a.common.output))
}

fn run_envelope(a: &EnvelopeArgs) -> ftr::Result<(Table, Format)> {
    let p = single_params(&a.model)?;
    let omega = a.omega.unwrap_or(p.gamma_bar());
    let grid = parse_grid(&a.grid)?;
    let cfg = LaplaceInversion::default();
    let exact = |r: f64| model::envelope_pdf(&p, r, omega, &cfg);
    let series = |c: &MixtureCoeffs<f64>, r: f64| model::envelope_pdf_approx(&p, r, omega, c);
    let coeffs = resolve_method(a.method, &p, &grid, a.order, series, exact)?;
    let values = match &coeffs {
        Some(c) => eval_grid(&grid, |r| series(c, r))?,
        None => eval_grid(&grid, exact)?,
    };
    let mut t = Table::new(vec!["r", "pdf"]);
    t.rows = grid.iter().zip(values).map(|(&r, v)| vec![Cell::Num(r), Cell::Num(v)]).collect();
    Ok((t, a.common.output))
}

fn run_sample(a: &SampleArgs) -> ftr::Result<(Table, Format)> {
    let p = single_params(&a.model)?;
    let cfg = SampleConfig::new(a.seed, a.n)?;
    let batch = if a.independent { sampler::sample_independent(&p, &cfg)? } else { sampler::sample_ftr(&p, &cfg)? };
    if let Some(path) = &a.binary {
        sampler::write_binary(&batch, a.seed, BufWriter::new(File::create(path)?))?;
    }
    let mut t = Table::new(vec!["snr", "envelope"]);
    t.rows = batch.snr.iter().zip(&batch.envelope).map(|(&g, &r)| vec![Cell::Num(g), Cell::Num(r)]).collect();
    Ok((t, a.common.output))
}

/// Rows of a metric sweep; Monte Carlo reuses one unit-mean batch scaled to each `gamma_bar`.
fn run_sweep(
    model: &ModelArgs,
    sw: &SweepArgs,
    label: &str,
    value: impl Fn(&FtrParams<f64>) -> ftr::Result<f64> + Sync,
    asymptote: impl Fn(&FtrParams<f64>) -> ftr::Result<f64> + Sync,
    mc: impl Fn(&sampler::SampleBatch, f64) -> ftr::Result<(f64, f64)>,
) -> ftr::Result<Table> {
    let (grid, unit) = snr_grid(&model.snr)?;
    let base = FtrParams::new(model.k, model.delta, model.m, 1.0)?;
    let mut rows = metrics::sweep(&base, &grid, unit, label, &value)?;
    if sw.with_asymptote {
        rows.extend(metrics::sweep(&base, &grid, unit, "asymptote", &asymptote)?);
    }
    if sw.with_mc {
        let batch = sampler::sample_ftr(&base, &SampleConfig::new(sw.seed, sw.n_mc)?)?;
        for &g in &grid {
            let (lin, db) = match unit {
                metrics::SnrUnit::Linear => (g, metrics::linear_to_db(g)),
                metrics::SnrUnit::Db => (metrics::db_to_linear(g), g),
            };
            let (mean, se) = mc(&batch, lin)?;
            rows.push(metrics::SweepRow { gamma_bar_db: db, value: mean, method: "mc".into() });
            rows.push(metrics::SweepRow { gamma_bar_db: db, value: se, method: "mc_stderr".into() });
        }
    }
    let mut t = Table::new(vec!["gamma_bar_db", "value", "method"]);
    t.rows = rows
        .into_iter()
        .map(|r| vec![Cell::Num(r.gamma_bar_db), Cell::Num(r.value), Cell::Text(r.method)])
        .collect();
    Ok(t)
}

fn run_ber(a: &BerArgs) -> ftr::Result<(Table, Format)> {
    let cep = match a.modulation {
        Modulation::Bpsk => CepFamily::bpsk(),
    };
    let quad = Quadrature::default();
    let quad_pdf = Quadrature::new(1e-300, 1e-8, 4000)?;
    let cfg = LaplaceInversion::default();
    let (label, method) = match a.method {
        BerMethod::Exact => ("exact", a.method),
        BerMethod::Quadrature => ("quadrature", a.method),
    };
    let t = run_sweep(
        &a.model,
        &a.sweep,
        label,
        |p| match method {
            BerMethod::Exact => metrics::ber_exact(p, &cep, &quad),
            BerMethod::Quadrature => metrics::ber_quadrature(p, &cep, &cfg, &quad_pdf),
        },
        |p| metrics::ber_asymptotic(p, &cep),
        |b, g| metrics::ber_monte_carlo(b, &cep, g),
    )?;
    Ok((t, a.common.output))
}

fn run_outage(a: &OutageArgs) -> ftr::Result<(Table, Format)> {
    let spec = OutageSpec::new(a.rate)?;
    let cfg = LaplaceInversion::default();
    let t = run_sweep(
        &a.model,
        &a.sweep,
        "exact",
        |p| metrics::outage_probability(p, &spec, &cfg),
        |p| metrics::outage_asymptotic(p, &spec),
        |b, g| metrics::outage_monte_carlo(b, &spec, g),
    )?;
    Ok((t, a.common.output))
}

fn run_fit(a: &FitArgs) -> ftr::Result<String> {
    let mut emp = if a.input == "-" {
        EmpiricalCdf::from_csv(io::stdin().lock())?
    } else {
        EmpiricalCdf::from_csv(File::open(&a.input)?)?
    };
    if let Some(omega) = a.omega {
        emp = EmpiricalCdf::with_omega(emp.points().to_vec(), omega)?;
    }
    let search = SearchConfig::default();
    let ms = a.m_candidates.clone().unwrap_or_else(fit::default_m_candidates);
    let mut results: Vec<(&str, FitResult)> = Vec::new();
    if a.model != FitModelArg::Rician {
        results.push(("ftr", fit::fit_ftr(&emp, &ms, &search)?));
    }
    if a.model != FitModelArg::Ftr {
        results.push(("rician", fit::fit_rician(&emp, &search)?));
    }
    Ok(match a.output {
        Format::Json => {
            let obj: serde_json::Map<String, serde_json::Value> =
                results.iter().map(|(k, r)| (k.to_string(), r.to_json())).collect();
            format!("{}\n", serde_json::Value::Object(obj))
        }
        Format::Csv => {
            let mut s = String::from("fit,model,K,Delta,m,Omega,epsilon,evaluations\n");
            for (k, r) in &results {
                let model = match r.model {
                    fit::FitModel::Ftr => "ftr",
                    fit::FitModel::Rician => "rician",
                };
                let q = &r.params;
                s.push_str(&format!(
                    "{k},{model},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}\n",
                    q.k(),
                    q.delta(),
                    q.m(),
                    q.gamma_bar(),
                    r.epsilon,
                    r.evaluations
                ));
            }
            s
        }
    })
}

fn run_reduce(a: &ReduceArgs) -> ftr::Result<(Table, Format, bool)> {
    let p = single_params(&a.model)?;
    let grid = parse_grid(&a.grid)?;
    let refs = match &a.target {
        Some(name) => vec![model::reduce(&p, name.parse::<ReductionTarget>()?)?],
        None => ReductionTarget::ALL.iter().filter_map(|&t| model::reduce(&p, t).ok()).collect(),
    };
    if refs.is_empty() {
        return Err(Error::Domain(format!(
            "K = {}, Delta = {}, m = {} lies in no special-case cell",
            p.k(),
            p.delta(),
            p.m()
        )));
    }
    let mut t = Table::new(vec!["target", "s", "ftr", "reference", "abs_diff", "tolerance", "pass"]);
    let mut all = true;
    for r in &refs {
        for &s in &grid {
            let f = model::mgf(&p, s)?;
            let g = r.eval(s)?;
            let ok = (f - g).abs() <= r.tolerance();
            all &= ok;
            t.rows.push(vec![
                Cell::Text(r.target().name().into()),
                Cell::Num(s),
                Cell::Num(f),
                Cell::Num(g),
                Cell::Num((f - g).abs()),
                Cell::Num(r.tolerance()),
                Cell::Text(ok.to_string()),
            ]);
        }
    }
    Ok((t, a.common.output, all))
}

fn run_coeffs(a: &CoeffsArgs) -> ftr::Result<(Table, Format)> {
    let p = FtrParams::new(a.k, a.delta, 1.0, 1.0)?;
    let c = series_coeffs(&p, a.order)?;
    let exact = model::alpha_exact(c.order());
    let mut t = Table::new(vec!["i", "alpha", "delta", "alpha_exact"]);
    t.rows = (0..c.order())
        .map(|i| {
            vec![
                Cell::Int(i + 1),
                Cell::Num(c.alpha()[i]),
                Cell::Num(c.delta()[i]),
                Cell::Text(exact[i].to_string()),
            ]
        })
        .collect();
    Ok((t, a.common.output))
}

fn execute(cli: &Cli, out: &mut impl Write) -> ftr::Result<bool> {
    let (table, format) = match &cli.command {
        Command::Pdf(a) => run_dist(a, false)?,
        Command::Cdf(a) => run_dist(a, true)?,
        Command::Mgf(a) => run_mgf(a)?,
        Command::EnvelopePdf(a) => run_envelope(a)?,
        Command::Sample(a) => run_sample(a)?,
        Command::Ber(a) => run_ber(a)?,
        Command::Outage(a) => run_outage(a)?,
        Command::Fit(a) => {
            out.write_all(run_fit(a)?.as_bytes())?;
            return Ok(true);
        }
        Command::ReduceCheck(a) => {
            let (t, f, ok) = run_reduce(a)?;
            t.write(f, out)?;
            return Ok(ok);
        }
        Command::Coeffs(a) => run_coeffs(a)?,
    };
    table.write(format, out)?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let msg = e.to_string();
            eprintln!("{}", msg.lines().next().unwrap_or("error: bad arguments"));
            return ExitCode::from(2);
        }
        Err(e) => e.exit(),
    };
    if let Some(n) = std::env::var("FTR_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = execute(&cli, &mut out);
    let flushed = out.flush();
    match (result, flushed) {
        (Ok(true), Ok(())) => ExitCode::SUCCESS,
        (Ok(false), Ok(())) => {
            eprintln!("error: reference mismatch beyond tolerance");
            ExitCode::from(1)
        }
        (Err(e), _) => {
            eprintln!("error: {e}");
            match e {
                Error::NonConvergence { .. } | Error::Overflow(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
        (Ok(_), Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
