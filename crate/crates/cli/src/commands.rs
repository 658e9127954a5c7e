use serde::Serialize;
use serde_json::{json, Value};

use recdef::deformation::{
    bound_state_weight_one, deformed_density_grid, deformed_polys_one, deformed_polys_three,
    find_bound_states_one,
};
use recdef::recursion::eval_polynomials;
use recdef::resolvent::density_grid;
use recdef::spectra::{dos_eigen_histogram, dos_finite_ratio_grid, FiniteRatioOptions};
use recdef::{Deformation, DeformationThree, ResolventOptions};

use crate::args::{
    CompareArgs, DeformArgs, DensityArgs, Format, PolysArgs, ResolventArgs, TailArg, ValidateArgs,
};
use crate::config::{self, SequenceSource, Table as CoeffTable};
use crate::error::CliError;
use crate::output::{emit, format_g, Table};
use crate::validate;

/// Exit status of a command that ran to completion.
pub enum Status {
    Success,
    ValidationFailed,
}

fn meta<T: Serialize>(command: &str, config: &T) -> Value {
    json!({ "command": command, "config_hash": config::config_hash(config) })
}

#[derive(Serialize)]
struct PolysConfig<'a> {
    sequence: &'a SequenceSource,
    deformation: &'a Option<Deformation>,
    x: f64,
    n_max: usize,
}

pub fn polys(args: &PolysArgs) -> Result<Status, CliError> {
    let (seq, source) = config::sequence(&args.sequence)?;
    let deformation = config::deformation(&args.deformation)?;
    let (x, n_max) = (args.x, args.n_max);
    let plain = eval_polynomials(&seq, x, n_max)?;
    let hat = match &deformation {
        None => plain.clone(),
        Some(Deformation::One(d)) => deformed_polys_one(&seq, d, x, n_max)?,
        Some(Deformation::Three(d)) => deformed_polys_three(&seq, d, x, n_max)?,
    };
    let cfg = PolysConfig {
        sequence: &source,
        deformation: &deformation,
        x,
        n_max,
    };
    let table = Table::new(meta("polys", &cfg))
        .column("n", (0..=n_max).map(|n| n as f64).collect())
        .column("p", plain.p)
        .column("q", plain.q)
        .column("p_hat", hat.p)
        .column("q_hat", hat.q);
    emit(
        &table.render(args.output.format),
        args.output.out.as_deref(),
    )?;
    Ok(Status::Success)
}

#[derive(Serialize)]
struct DensityConfig<'a> {
    sequence: &'a SequenceSource,
    deformation: &'a Option<Deformation>,
    grid: &'a [f64],
    options: &'a ResolventOptions,
}

pub fn density(args: &DensityArgs) -> Result<Status, CliError> {
    let (seq, source) = config::sequence(&args.sequence)?;
    let deformation = config::deformation(&args.deformation)?;
    let xs = config::grid(&args.grid)?;
    let opts = config::resolvent_options(&args.resolvent)?;
    let grid = match &deformation {
        None => density_grid(&seq, &xs, &opts)?,
        Some(d) => deformed_density_grid(&seq, d, &xs, &opts)?,
    };
    let cfg = DensityConfig {
        sequence: &source,
        deformation: &deformation,
        grid: &xs,
        options: &opts,
    };
    let table = Table::new(meta("density", &cfg))
        .column("x", grid.xs)
        .column("rho", grid.values);
    emit(
        &table.render(args.output.format),
        args.output.out.as_deref(),
    )?;
    Ok(Status::Success)
}

#[derive(Serialize)]
struct BoundState {
    x: f64,
    weight: f64,
}

#[derive(Serialize)]
struct DeformOutput {
    #[serde(flatten)]
    table: CoeffTable,
    #[serde(skip_serializing_if = "Option::is_none")]
    bound_states: Option<Vec<BoundState>>,
    meta: Value,
}

#[derive(Serialize)]
struct DeformConfig<'a> {
    sequence: &'a SequenceSource,
    deformation: &'a Deformation,
    search: Option<(f64, f64)>,
}

pub fn deform(args: &DeformArgs) -> Result<Status, CliError> {
    let (seq, source) = config::sequence(&args.sequence)?;
    let deformation = config::deformation(&args.deformation)?.ok_or_else(|| {
        CliError::Config("deform needs --mu or --mu-plus/--mu-minus/--mu-zero".into())
    })?;
    let search = args.search.as_deref().map(config::interval).transpose()?;
    let deformed = deformation.apply(&seq)?;
    let bound_states = match (search, &deformation) {
        (None, _) => None,
        (Some(interval), Deformation::One(d)) => {
            let roots = find_bound_states_one(&seq, d, interval)?;
            let states = roots
                .into_iter()
                .map(|x| {
                    Ok(BoundState {
                        x,
                        weight: bound_state_weight_one(&seq, d, x)?,
                    })
                })
                .collect::<Result<Vec<_>, recdef::Error>>()?;
            Some(states)
        }
        (Some(_), Deformation::Three(_)) => {
            return Err(CliError::Config(
                "--search is only available for the one-parameter deformation (--mu)".into(),
            ))
        }
    };
    let cfg = DeformConfig {
        sequence: &source,
        deformation: &deformation,
        search,
    };
    let out = DeformOutput {
        table: CoeffTable::from_sequence(&deformed),
        bound_states,
        meta: meta("deform", &cfg),
    };
    let mut text = serde_json::to_string_pretty(&out).expect("valid JSON");
    text.push('\n');
    emit(&text, args.out.as_deref())?;
    Ok(Status::Success)
}

#[derive(Serialize)]
struct ValidateConfig<'a> {
    suite: String,
    sequence: &'a SequenceSource,
}

pub fn validate(args: &ValidateArgs) -> Result<Status, CliError> {
    let (seq, source) = config::sequence(&args.sequence)?;
    let checks = validate::run(args.suite, &seq)?;
    let passed = checks.iter().all(|c| c.passed());
    let status = |c: &validate::Check| if c.passed() { "pass" } else { "fail" };
    let text = match args.output.format {
        Format::Csv => {
            let mut s = String::from("check,error,tolerance,status\n");
            for c in &checks {
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    c.check,
                    format_g(c.error, 6),
                    format_g(c.tolerance, 6),
                    status(c)
                ));
            }
            s
        }
        Format::Json => {
            let cfg = ValidateConfig {
                suite: format!("{:?}", args.suite),
                sequence: &source,
            };
            let rows: Vec<Value> = checks
                .iter()
                .map(|c| {
                    json!({ "check": c.check, "error": c.error, "tolerance": c.tolerance, "status": status(c) })
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&json!({
                "checks": rows,
                "passed": passed,
                "meta": meta("validate", &cfg),
            }))
            .expect("valid JSON");
            s.push('\n');
            s
        }
    };
    emit(&text, args.output.out.as_deref())?;
    let failed = checks.iter().filter(|c| !c.passed()).count();
    eprintln!("{} checks, {} failed", checks.len(), failed);
    Ok(if passed {
        Status::Success
    } else {
        Status::ValidationFailed
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Method {
    FiniteRatio,
    EigenHistogram,
}

impl Method {
    fn column(self) -> &'static str {
        match self {
            Method::FiniteRatio => "rho_finite_ratio",
            Method::EigenHistogram => "rho_eigen_histogram",
        }
    }

    fn name(self) -> &'static str {
        match self {
            Method::FiniteRatio => "finite-ratio",
            Method::EigenHistogram => "eigen-histogram",
        }
    }
}

fn parse_methods(spec: &str) -> Result<Vec<Method>, CliError> {
    let mut out = Vec::new();
    for name in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let m = match name {
            "finite-ratio" => Method::FiniteRatio,
            "eigen-histogram" => Method::EigenHistogram,
            other => {
                return Err(CliError::Config(format!(
                    "--methods: unknown method `{other}` (expected finite-ratio, eigen-histogram)"
                )))
            }
        };
        if !out.contains(&m) {
            out.push(m);
        }
    }
    Ok(out)
}

/// Deformation used by `compare` when none is given.
pub fn default_compare_deformation() -> Deformation {
    Deformation::Three(DeformationThree::new(0.2, 0.0, -0.1).expect("finite parameters"))
}

#[derive(Serialize)]
struct CompareConfig<'a> {
    sequence: &'a SequenceSource,
    deformation: &'a Option<Deformation>,
    dim: usize,
    methods: &'a [Method],
    grid: &'a [f64],
    options: &'a ResolventOptions,
    ratio_epsilon: Option<f64>,
}

pub fn compare(args: &CompareArgs) -> Result<Status, CliError> {
    let (seq, source) = config::sequence(&args.sequence)?;
    let deformation = if args.undeformed {
        None
    } else {
        Some(config::deformation(&args.deformation)?.unwrap_or_else(default_compare_deformation))
    };
    let methods = parse_methods(&args.methods)?;
    let xs = config::grid(&args.grid)?;
    // --tail and --epsilon configure the finite ratio; the reference curve is
    // always the terminated continued fraction.
    let opts = config::resolvent_options(&ResolventArgs {
        depth: args.resolvent.depth,
        tail: TailArg::Terminator,
        epsilon: None,
    })?;
    if let Some(eps) = args.resolvent.epsilon {
        if !(eps.is_finite() && eps >= 0.0) {
            return Err(CliError::Config(format!(
                "--epsilon {eps} must be finite and >= 0"
            )));
        }
    }
    let ratio_opts = FiniteRatioOptions {
        tail: config::tail(args.resolvent.tail),
        epsilon: args.resolvent.epsilon,
    };

    let analytic = match &deformation {
        None => density_grid(&seq, &xs, &opts)?,
        Some(d) => deformed_density_grid(&seq, d, &xs, &opts)?,
    }
    .values;
    let peak = analytic.iter().cloned().fold(0.0, f64::max);

    let cfg = CompareConfig {
        sequence: &source,
        deformation: &deformation,
        dim: args.dim,
        methods: &methods,
        grid: &xs,
        options: &opts,
        ratio_epsilon: args.resolvent.epsilon,
    };
    let mut table = Table::new(meta("compare", &cfg))
        .column("x", xs.clone())
        .column("rho_analytic", analytic.clone());
    for m in &methods {
        let values = match m {
            Method::FiniteRatio => {
                dos_finite_ratio_grid(&seq, args.dim, deformation.as_ref(), &xs, &ratio_opts)?
                    .values
            }
            Method::EigenHistogram => {
                dos_eigen_histogram(&seq, args.dim, deformation.as_ref(), &xs)?.values
            }
        };
        let dev = values
            .iter()
            .zip(&analytic)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let rel = if peak > 0.0 { dev / peak } else { f64::NAN };
        eprintln!(
            "max deviation {}: {} ({}% of analytic peak {})",
            m.name(),
            format_g(dev, 6),
            format_g(100.0 * rel, 4),
            format_g(peak, 6)
        );
        table = table.column(m.column(), values);
    }
    emit(
        &table.render(args.output.format),
        args.output.out.as_deref(),
    )?;
    Ok(Status::Success)
}
