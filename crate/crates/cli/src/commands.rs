// Copyright 2026 The cvcat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use std::f64::consts::SQRT_2;
use std::io::Write;

use anyhow::{Context, Result};
use clap::Args;
use cvcat::fock_core::{
    cat_trunc02_formula, even_cat_fock, printed_squeezed_trunc02, squeezed_cat_trunc02_fidelity, truncation_fidelity,
    DEFAULT_DIM,
};
use cvcat::oracle::{self, reference, GridSpec, OracleResource, QuadChannel};
use cvcat::protocols::{
    self, default_beta, AmplifyInput, AverageSpec, BlochParametrization, Resource, SweepGrid, TeleportSetup,
};
use cvcat::states::{fit_effective_params, squeezing_g, Parity, SignalParams};
use cvcat::validate::{self, ValidateOptions, GRANGIER_ALPHA_SQ, GRANGIER_R};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::config::Config;
use crate::output::{Cell, Format, Table};
use crate::{Common, UsageError};

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

const QUADRATURE_CONVENTION: &str = "x=(a+a^dagger)/sqrt2, [x,p]=i, g=exp(-2r)";
const ALPHA_CONVENTION: &str =
    "alpha is the amplitude of the state split at the first beam splitter; signal amplitude alpha/sqrt2";

/// Settings shared by every command after merging flags and config.
struct Session {
    config: Config,
    format: Format,
    out: Option<std::path::PathBuf>,
    seed: Option<u64>,
    oracle: bool,
}

impl Session {
    fn new(common: &Common, default_format: Format) -> Result<Session> {
        let config = Config::load(common.config.as_deref())?;
        let format = match config.string("format", common.format.clone())?.as_deref() {
            None => default_format,
            Some("csv") => Format::Csv,
            Some("json") => Format::Json,
            Some(other) => return Err(usage(format!("unknown format {other:?}; use csv or json"))),
        };
        let out = match &common.out {
            Some(p) => Some(p.clone()),
            None => config.string("out", None)?.map(Into::into),
        };
        Ok(Session {
            format,
            out,
            seed: config.u64("seed", common.seed)?,
            oracle: config.flag("oracle", common.oracle)?,
            config,
        })
    }

    fn f64(&self, key: &str, flag: Option<f64>, default: f64) -> Result<f64> {
        Ok(self.config.f64(key, flag)?.unwrap_or(default))
    }

    fn u32(&self, key: &str, flag: Option<u32>, default: u32) -> Result<u32> {
        let v = self.config.u64(key, flag.map(u64::from))?.unwrap_or(u64::from(default));
        u32::try_from(v).map_err(|_| usage(format!("{key} is out of range: {v}")))
    }

    fn string(&self, key: &str, flag: Option<String>) -> Result<Option<String>> {
        self.config.string(key, flag)
    }

    fn header(&self, table: &mut Table, command: &str) {
        let mut meta = vec![
            ("command".to_string(), command.to_string()),
            ("engine".to_string(), format!("cvcat {}", cvcat::VERSION)),
            (
                "oracle".to_string(),
                format!("trapezoid {}", if self.oracle { "on" } else { "off" }),
            ),
            ("quadrature_convention".to_string(), QUADRATURE_CONVENTION.to_string()),
        ];
        if let Some(seed) = self.seed {
            meta.push(("seed".to_string(), seed.to_string()));
        }
        meta.append(&mut table.meta);
        table.meta = meta;
    }

    fn emit(&self, mut table: Table, command: &str) -> Result<()> {
        self.header(&mut table, command);
        let text = table.render(self.format);
        match &self.out {
            Some(path) => std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?,
            None => std::io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(())
    }
}

/// `lo:hi:n`, inclusive, or a single value.
fn parse_range(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| usage(format!("bad number {s:?} in range {spec:?}")))
    };
    match parts.as_slice() {
        [v] => Ok(vec![num(v)?]),
        [lo, hi, n] => {
            let (lo, hi) = (num(lo)?, num(hi)?);
            let n: usize = n
                .trim()
                .parse()
                .map_err(|_| usage(format!("bad count in range {spec:?}")))?;
            if n < 2 || hi <= lo || hi.is_nan() || lo.is_nan() {
                return Err(usage(format!("range {spec:?} needs hi > lo and at least 2 points")));
            }
            Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
        }
        _ => Err(usage(format!("range {spec:?} must be VALUE or LO:HI:N"))),
    }
}

/// `NxM`.
fn parse_grid(spec: &str) -> Result<(usize, usize)> {
    let (a, b) = spec
        .split_once(['x', 'X'])
        .ok_or_else(|| usage(format!("grid {spec:?} must look like NxM")))?;
    let n = a.trim().parse().map_err(|_| usage(format!("bad grid size {spec:?}")))?;
    let m = b.trim().parse().map_err(|_| usage(format!("bad grid size {spec:?}")))?;
    Ok((n, m))
}

/// `re` or `re,im`.
fn parse_complex(spec: &str) -> Result<Complex64> {
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| usage(format!("bad complex number {spec:?}")))
    };
    match spec.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(num(re)?, num(im)?)),
        None => Ok(Complex64::new(num(spec)?, 0.0)),
    }
}

fn parse_resource(name: &str, n: u32) -> Result<Resource> {
    match name {
        "ideal" | "ideal-even" => Ok(Resource::Ideal(Parity::Even)),
        "ideal-odd" => Ok(Resource::Ideal(Parity::Odd)),
        "approx" => Ok(Resource::approx(n)?),
        other => Err(usage(format!(
            "unknown resource {other:?}; use ideal, ideal-odd or approx"
        ))),
    }
}

fn oracle_resource(resource: Resource) -> OracleResource {
    match resource {
        Resource::Ideal(p) => OracleResource::Ideal(p),
        Resource::Approx(p) => OracleResource::Approx(p.n),
    }
}

fn oracle_output_grid() -> Result<GridSpec> {
    Ok(GridSpec::uniform(1, -10.0, 10.0, 1001)?)
}

fn quad_channel(setup: &TeleportSetup) -> Result<QuadChannel> {
    let probe = SignalParams::real(1.0, 0.0, setup.signal_alpha(), setup.r)?;
    let beta = default_beta(&probe, setup.resource.parity());
    Ok(QuadChannel::new(
        setup.signal_alpha(),
        setup.r,
        oracle_resource(setup.resource),
        beta,
        &oracle_output_grid()?,
        &GridSpec::default_for(1)?,
    )?)
}

#[derive(Args, Debug)]
pub struct TruncationArgs {
    #[command(flatten)]
    common: Common,
    /// Single amplitude; overrides --alpha-range.
    #[arg(long)]
    alpha: Option<f64>,
    /// LO:HI:N, inclusive.
    #[arg(long)]
    alpha_range: Option<String>,
    #[arg(long)]
    r: Option<f64>,
    /// Fock-space dimension.
    #[arg(long)]
    dim: Option<u32>,
}

pub fn truncation(args: TruncationArgs) -> Result<bool> {
    let s = Session::new(&args.common, Format::Csv)?;
    let alphas = match s.config.f64("alpha", args.alpha)? {
        Some(a) => vec![a],
        None => parse_range(
            &s.string("alpha-range", args.alpha_range)?
                .unwrap_or_else(|| "0:2.5:26".into()),
        )?,
    };
    let r = s.f64("r", args.r, 0.0)?;
    let dim = s.u32("dim", args.dim, DEFAULT_DIM as u32)? as usize;
    let oracle_grid = GridSpec::default_for(1)?;

    let mut cols = vec!["alpha", "F_formula", "F_fock", "F_squeezed", "F_squeezed_printed"];
    if s.oracle {
        cols.push("F_squeezed_oracle");
    }
    let mut table = Table::new(&cols);
    table.meta("r", r);
    table.meta("dim", dim);
    table.meta("kept_levels", "0,2");
    let rows: Vec<Result<Vec<Cell>>> = alphas
        .par_iter()
        .map(|&alpha| {
            let fock = truncation_fidelity(&even_cat_fock(alpha, dim)?, &[0, 2])?;
            let mut row: Vec<Cell> = vec![
                alpha.into(),
                cat_trunc02_formula(alpha).into(),
                fock.into(),
                squeezed_cat_trunc02_fidelity(alpha, r)?.into(),
                printed_squeezed_trunc02(alpha, r).into(),
            ];
            if s.oracle {
                let g = squeezing_g(r);
                let cat = oracle::sample_fn(
                    |x| Complex64::new(reference::cat(alpha, g, Parity::Even, x[0]), 0.0),
                    &oracle_grid,
                );
                let mut f = 0.0;
                for n in [0, 2] {
                    let h = oracle::sample_fn(|x| Complex64::new(reference::number_state(n, x[0]), 0.0), &oracle_grid);
                    f += oracle::quad_inner(&h, &cat, &oracle_grid)?.value.norm_sqr();
                }
                row.push(f.into());
            }
            Ok(row)
        })
        .collect();
    for row in rows {
        table.push(row?);
    }
    s.emit(table, "truncation")?;
    Ok(true)
}

#[derive(Args, Debug)]
pub struct MapArgs {
    #[command(flatten)]
    common: Common,
    /// ideal, ideal-odd or approx
    #[arg(long)]
    resource: Option<String>,
    /// Order of the approximate resource.
    #[arg(long)]
    n: Option<u32>,
    /// Amplitude split at the first beam splitter.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    /// NxM points over θ ∈ [0, π/2], φ ∈ [0, 2π].
    #[arg(long)]
    grid: Option<String>,
}

fn setup_from(
    s: &Session,
    resource: Option<String>,
    n: Option<u32>,
    alpha: Option<f64>,
    r: Option<f64>,
) -> Result<TeleportSetup> {
    let n = s.u32("n", n, 2)?;
    let resource = parse_resource(&s.string("resource", resource)?.unwrap_or_else(|| "approx".into()), n)?;
    let alpha = s.f64("alpha", alpha, GRANGIER_ALPHA_SQ.sqrt())?;
    let r = s.f64("r", r, GRANGIER_R)?;
    Ok(TeleportSetup::new(resource, alpha, r)?)
}

fn setup_meta(table: &mut Table, setup: &TeleportSetup) {
    table.meta("resource", setup.resource.label());
    table.meta("alpha", setup.cat_alpha);
    table.meta("signal_alpha", setup.signal_alpha());
    table.meta("r", setup.r);
    table.meta("alpha_convention", ALPHA_CONVENTION);
}

pub fn fidelity_map(args: MapArgs) -> Result<bool> {
    let s = Session::new(&args.common, Format::Csv)?;
    let setup = setup_from(&s, args.resource, args.n, args.alpha, args.r)?;
    let (nt, np) = parse_grid(&s.string("grid", args.grid)?.unwrap_or_else(|| "33x65".into()))?;
    let grid = SweepGrid::new(nt, np)?;
    let map = protocols::fidelity_map(&setup, &grid)?;
    let quad = if s.oracle { Some(quad_channel(&setup)?) } else { None };

    let mut cols = vec!["theta", "phi", "a", "b_re", "b_im", "fidelity"];
    if quad.is_some() {
        cols.push("fidelity_oracle");
    }
    let mut table = Table::new(&cols);
    setup_meta(&mut table, &setup);
    table.meta("grid", format!("{nt}x{np}"));
    table.meta(
        "bloch_parametrization",
        "figure-axis: a=cos(theta), b=exp(i phi) sin(theta)",
    );
    table.meta("row_order", "theta-major");
    for p in map {
        let (a, b) = BlochParametrization::FigureAxis.coefficients(p.theta, p.phi);
        let mut row: Vec<Cell> = vec![
            p.theta.into(),
            p.phi.into(),
            a.re.into(),
            b.re.into(),
            b.im.into(),
            p.fidelity.into(),
        ];
        if let Some(q) = &quad {
            row.push(q.fidelity(a, b).into());
        }
        table.push(row);
    }
    s.emit(table, "fidelity-map")?;
    Ok(true)
}

#[derive(Args, Debug)]
pub struct AvgArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    resource: Option<String>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    /// half-angle, figure-axis or both
    #[arg(long)]
    bloch: Option<String>,
    /// Convergence threshold between successive resolutions.
    #[arg(long)]
    tol: Option<f64>,
}

pub fn avg_fidelity(args: AvgArgs) -> Result<bool> {
    let s = Session::new(&args.common, Format::Csv)?;
    let setup = setup_from(&s, args.resource, args.n, args.alpha, args.r)?;
    let params = match s.string("bloch", args.bloch)?.as_deref().unwrap_or("half-angle") {
        "half-angle" => vec![BlochParametrization::HalfAngle],
        "figure-axis" => vec![BlochParametrization::FigureAxis],
        "both" => vec![BlochParametrization::HalfAngle, BlochParametrization::FigureAxis],
        other => return Err(usage(format!("unknown Bloch parametrization {other:?}"))),
    };
    let spec = AverageSpec {
        tol: s.f64("tol", args.tol, AverageSpec::default().tol)?,
        ..AverageSpec::default()
    };
    let quad = if s.oracle { Some(quad_channel(&setup)?) } else { None };

    let mut cols = vec!["resource", "bloch", "F_avg", "n_theta", "n_phi", "last_change"];
    if quad.is_some() {
        cols.push("F_avg_oracle");
    }
    let mut table = Table::new(&cols);
    setup_meta(&mut table, &setup);
    table.meta(
        "bloch_parametrization",
        params.iter().map(|p| p.name()).collect::<Vec<_>>().join(","),
    );
    table.meta(
        "quadrature",
        format!(
            "Gauss-Legendre in cos(theta) x trapezoid in phi from {}x{}, doubled to tol {:e}",
            spec.n_theta, spec.n_phi, spec.tol
        ),
    );
    for &param in &params {
        let avg = protocols::average_fidelity(&setup, param, spec)?;
        let mut row: Vec<Cell> = vec![
            setup.resource.label().into(),
            param.name().into(),
            avg.value.into(),
            avg.n_theta.into(),
            avg.n_phi.into(),
            avg.last_change.into(),
        ];
        if let Some(q) = &quad {
            row.push(
                protocols::average_fidelity_of(|a, b| q.fidelity(a, b), param, spec)?
                    .value
                    .into(),
            );
        }
        table.push(row);
        let id = protocols::average_fidelity_of(|_, _| 1.0, param, spec)?;
        let mut row: Vec<Cell> = vec![
            "identity".into(),
            param.name().into(),
            id.value.into(),
            id.n_theta.into(),
            id.n_phi.into(),
            id.last_change.into(),
        ];
        if quad.is_some() {
            row.push(id.value.into());
        }
        table.push(row);
    }
    s.emit(table, "avg-fidelity")?;
    Ok(true)
}

#[derive(Args, Debug)]
pub struct AmplifyArgs {
    #[command(flatten)]
    common: Common,
    /// ideal or approx
    #[arg(long)]
    input: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    /// LO:HI:N, inclusive.
    #[arg(long)]
    alpha_range: Option<String>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    steps: Option<u32>,
}

/// `ψ_k(x) ∝ ψ₀(x/2^{k/2})^{2^k}` sampled and compared with a cat by
/// quadrature.
fn oracle_amplified_fidelity(
    input: &(dyn Fn(f64) -> f64 + Sync),
    step: u32,
    target_alpha: f64,
    target_r: f64,
) -> Result<f64> {
    let grid = GridSpec::default_for(1)?;
    let power = 1i32 << step;
    let shrink = SQRT_2.powi(step as i32);
    let out = oracle::sample_fn(|x| Complex64::new(input(x[0] / shrink).powi(power), 0.0), &grid);
    let g = squeezing_g(target_r);
    let target = oracle::sample_fn(
        |x| Complex64::new(reference::cat(target_alpha, g, Parity::Even, x[0]), 0.0),
        &grid,
    );
    let ov = oracle::quad_inner(&target, &out, &grid)?.value;
    Ok(ov.norm_sqr() / oracle::quad_norm_sqr(&out, &grid)?)
}

pub fn amplify(args: AmplifyArgs) -> Result<bool> {
    let s = Session::new(&args.common, Format::Csv)?;
    let input = s.string("input", args.input)?.unwrap_or_else(|| "ideal".into());
    let steps = s.u32("steps", args.steps, 1)? as usize;
    let r = s.f64("r", args.r, GRANGIER_R)?;
    let runs: Vec<(String, AmplifyInput, Option<u32>, f64)> = match input.as_str() {
        "ideal" => {
            let alphas = match s.config.f64("alpha", args.alpha)? {
                Some(a) => vec![a],
                None => parse_range(
                    &s.string("alpha-range", args.alpha_range)?
                        .unwrap_or_else(|| "0:2.5:26".into()),
                )?,
            };
            alphas
                .into_iter()
                .map(|alpha| ("ideal".to_string(), AmplifyInput::Ideal { alpha, r }, None, alpha))
                .collect()
        }
        "approx" => {
            let n = s.u32("n", args.n, 1)?;
            vec![(format!("approx-{n}"), AmplifyInput::Approx(n), Some(n), f64::NAN)]
        }
        other => return Err(usage(format!("unknown amplifier input {other:?}; use ideal or approx"))),
    };

    let mut cols = vec![
        "input",
        "n",
        "alpha",
        "step",
        "target_alpha",
        "target_r",
        "fidelity",
        "vacuum_overlap",
        "spurious",
        "herald_weight",
    ];
    if s.oracle {
        cols.push("fidelity_oracle");
    }
    let mut table = Table::new(&cols);
    table.meta("input", &input);
    table.meta("steps", steps);
    table.meta(
        "spurious_rule",
        format!("vacuum overlap >= {}", protocols::SPURIOUS_VACUUM_OVERLAP),
    );
    if input == "ideal" {
        table.meta("r", r);
    }
    let results: Vec<Result<Vec<Vec<Cell>>>> = runs
        .par_iter()
        .map(|(label, inp, n, alpha)| {
            let outcomes = protocols::amplify_iterate(*inp, steps)?;
            outcomes
                .iter()
                .enumerate()
                .map(|(k, o)| {
                    let mut row: Vec<Cell> = vec![
                        label.as_str().into(),
                        n.map_or(Cell::Text(String::new()), Cell::from),
                        (*alpha).into(),
                        (k + 1).into(),
                        o.target_alpha.into(),
                        o.target_r.into(),
                        o.fidelity_vs_target.into(),
                        o.vacuum_overlap.into(),
                        o.spurious.into(),
                        o.herald_weight.into(),
                    ];
                    if s.oracle {
                        let f = match *inp {
                            AmplifyInput::Ideal { alpha, r } => {
                                let g = squeezing_g(r);
                                oracle_amplified_fidelity(
                                    &|x| reference::cat(alpha, g, Parity::Even, x),
                                    k as u32 + 1,
                                    o.target_alpha,
                                    o.target_r,
                                )?
                            }
                            AmplifyInput::Approx(n) => oracle_amplified_fidelity(
                                &|x| reference::approx(n, x),
                                k as u32 + 1,
                                o.target_alpha,
                                o.target_r,
                            )?,
                        };
                        row.push(f.into());
                    }
                    Ok(row)
                })
                .collect()
        })
        .collect();
    for rows in results {
        for row in rows? {
            table.push(row);
        }
    }
    s.emit(table, "amplify")?;
    Ok(true)
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    #[command(flatten)]
    common: Common,
    /// Number of random states in the oracle corpus.
    #[arg(long)]
    corpus_size: Option<u32>,
    /// Offset added to the balanced beam-splitter angle in the
    /// beam-splitter checks (negative control).
    #[arg(long, allow_hyphen_values = true)]
    perturb_bs_angle: Option<f64>,
}

pub fn validate(args: ValidateArgs) -> Result<bool> {
    let mut s = Session::new(&args.common, Format::Json)?;
    s.oracle = true;
    let defaults = ValidateOptions::default();
    let opts = ValidateOptions {
        seed: s.seed.unwrap_or(defaults.seed),
        corpus_size: s.u32("corpus-size", args.corpus_size, defaults.corpus_size as u32)? as usize,
        bs_angle_offset: s.f64("perturb-bs-angle", args.perturb_bs_angle, 0.0)?,
    };
    let report = validate::run(&opts)?;
    let mut table = Table::new(&["check", "value", "target", "tolerance", "margin", "passed"]);
    table.meta("seed", opts.seed);
    table.meta("corpus_size", opts.corpus_size);
    table.meta("bs_angle_offset", opts.bs_angle_offset);
    table.meta("oracle_tolerance", validate::ORACLE_TOL);
    table.meta("bloch_parametrization", BlochParametrization::HalfAngle.name());
    table.meta("checks", report.checks.len());
    table.meta("failed", report.failures().len());
    table.meta("passed", report.passed());
    for c in &report.checks {
        table.push(vec![
            c.name.as_str().into(),
            c.value.into(),
            c.target.into(),
            c.tolerance.into(),
            c.margin().into(),
            c.passed.into(),
        ]);
    }
    let notes = report
        .notes
        .iter()
        .map(|n| {
            vec![
                ("topic".to_string(), n.topic.clone()),
                ("printed".to_string(), n.printed.clone()),
                ("computed".to_string(), n.computed.clone()),
                ("detail".to_string(), n.detail.clone()),
            ]
        })
        .collect();
    table.sections.push(("paper_notes".into(), notes));
    s.emit(table, "validate")?;
    for c in report.failures() {
        eprintln!(
            "FAILED {}: value {:e}, target {:e}, tolerance {:e}",
            c.name, c.value, c.target, c.tolerance
        );
    }
    Ok(report.passed())
}

#[derive(Args, Debug)]
pub struct TeleportArgs {
    #[command(flatten)]
    common: Common,
    /// Signal coefficient of S|α⟩, `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// Signal coefficient of S|−α⟩, `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long)]
    resource: Option<String>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    /// p-homodyne outcome; defaults by resource parity.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
}

pub fn teleport(args: TeleportArgs) -> Result<bool> {
    let s = Session::new(&args.common, Format::Csv)?;
    let setup = setup_from(&s, args.resource, args.n, args.alpha, args.r)?;
    let a = parse_complex(&s.string("a", args.a)?.unwrap_or_else(|| "1".into()))?;
    let b = parse_complex(&s.string("b", args.b)?.unwrap_or_else(|| "1".into()))?;
    let signal = setup.signal(a, b)?;
    let beta = s.config.f64("beta", args.beta)?;
    let out = protocols::teleport(&signal, setup.resource, beta)?;

    let mut cols = vec!["a_re", "a_im", "b_re", "b_im", "beta", "fidelity", "herald_weight"];
    if s.oracle {
        cols.extend(["fidelity_oracle", "oracle_max_gap"]);
    }
    let mut table = Table::new(&cols);
    setup_meta(&mut table, &setup);
    let mut row: Vec<Cell> = vec![
        a.re.into(),
        a.im.into(),
        b.re.into(),
        b.im.into(),
        out.beta.into(),
        out.fidelity_vs_signal.into(),
        out.herald_weight.into(),
    ];
    if s.oracle {
        let x_grid = oracle_output_grid()?;
        let quad = oracle::quad_teleport(
            &signal,
            oracle_resource(setup.resource),
            out.beta,
            &x_grid,
            &GridSpec::default_for(1)?,
        )?
        .normalized(&x_grid)?;
        let sig = oracle::sample_fn(|x| reference::signal(&signal, x[0]), &x_grid);
        row.push(oracle::quad_inner(&sig, &quad.values, &x_grid)?.value.norm_sqr().into());
        row.push(validate::teleport_oracle_gap(&signal, setup.resource, out.beta)?.into());
    }
    table.push(row);
    s.emit(table, "teleport")?;
    Ok(true)
}

#[derive(Args, Debug)]
pub struct FitArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    n: Option<u32>,
}

pub fn fit(args: FitArgs) -> Result<bool> {
    let s = Session::new(&args.common, Format::Csv)?;
    let n = s.u32("n", args.n, 2)?;
    let fit = fit_effective_params(n)?;
    let mut cols = vec![
        "n",
        "parity",
        "alpha",
        "alpha_sq",
        "r",
        "g",
        "fidelity",
        "converged",
        "evaluations",
    ];
    if s.oracle {
        cols.push("fidelity_oracle");
    }
    let mut table = Table::new(&cols);
    table.meta("search_box", "alpha in [0.05, 3], g in [0.01, 1]");
    let parity = match fit.parity {
        Parity::Even => "even",
        Parity::Odd => "odd",
    };
    let mut row: Vec<Cell> = vec![
        n.into(),
        parity.into(),
        fit.alpha.into(),
        (fit.alpha * fit.alpha).into(),
        fit.r.into(),
        fit.g.into(),
        fit.fidelity.into(),
        fit.converged.into(),
        fit.evaluations.into(),
    ];
    if s.oracle {
        let grid = GridSpec::default_for(1)?;
        let app = oracle::sample_fn(|x| Complex64::new(reference::approx(n, x[0]), 0.0), &grid);
        let cat = oracle::sample_fn(
            |x| Complex64::new(reference::cat(fit.alpha, fit.g, fit.parity, x[0]), 0.0),
            &grid,
        );
        row.push(oracle::quad_inner(&app, &cat, &grid)?.value.norm_sqr().into());
    }
    table.push(row);
    s.emit(table, "fit")?;
    Ok(true)
}
