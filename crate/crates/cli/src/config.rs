//! Turns command-line arguments into library objects and a canonical,
//! hashable description of the run.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use recdef::{
    CoefficientSequence, Deformation, DeformationOne, DeformationThree, ResolventOptions, Tail,
};

use crate::args::{DeformationArgs, ResolventArgs, SequenceArgs, TailArg};
use crate::error::CliError;

/// On-disk coefficient table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub a_inf: f64,
    pub b_inf: f64,
}

impl Table {
    pub fn from_sequence(seq: &CoefficientSequence) -> Self {
        Self {
            a: seq.head_a().to_vec(),
            b: seq.head_b().to_vec(),
            a_inf: seq.a_inf(),
            b_inf: seq.b_inf(),
        }
    }
}

/// What the sequence was built from, for metadata.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "source", rename_all = "kebab-case")]
pub enum SequenceSource {
    Chebyshev,
    Constant { a: f64, b: f64 },
    Table(Table),
}

pub fn sequence(args: &SequenceArgs) -> Result<(CoefficientSequence, SequenceSource), CliError> {
    if let Some(path) = &args.table {
        let table = read_table(path)?;
        let seq = CoefficientSequence::tabulated(
            table.a.clone(),
            table.b.clone(),
            table.a_inf,
            table.b_inf,
        )
        .map_err(|e| CliError::Config(format!("--table {}: {e}", path.display())))?;
        return Ok((seq, SequenceSource::Table(table)));
    }
    let family = args.family.trim();
    if family == "chebyshev" {
        return Ok((CoefficientSequence::chebyshev(), SequenceSource::Chebyshev));
    }
    if let Some(params) = family.strip_prefix("constant:") {
        let parts: Vec<&str> = params.split(',').collect();
        let parsed: Vec<f64> = parts.iter().filter_map(|p| p.trim().parse().ok()).collect();
        if parts.len() != 2 || parsed.len() != 2 {
            return Err(CliError::Config(format!(
                "--family: expected constant:A,B, got `{family}`"
            )));
        }
        let seq = CoefficientSequence::constant(parsed[0], parsed[1])
            .map_err(|e| CliError::Config(format!("--family: {e}")))?;
        return Ok((
            seq,
            SequenceSource::Constant {
                a: parsed[0],
                b: parsed[1],
            },
        ));
    }
    Err(CliError::Config(format!(
        "--family: unknown family `{family}` (expected chebyshev or constant:A,B)"
    )))
}

fn read_table(path: &Path) -> Result<Table, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("--table {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("--table {}: {e}", path.display())))
}

pub fn deformation(args: &DeformationArgs) -> Result<Option<Deformation>, CliError> {
    let invalid = |e: recdef::Error| CliError::Config(format!("deformation: {e}"));
    if let Some(mu) = args.mu {
        return Ok(Some(Deformation::One(
            DeformationOne::new(mu).map_err(invalid)?,
        )));
    }
    if args.mu_plus.is_none() && args.mu_minus.is_none() && args.mu_zero.is_none() {
        return Ok(None);
    }
    let d = DeformationThree::new(
        args.mu_plus.unwrap_or(0.0),
        args.mu_minus.unwrap_or(0.0),
        args.mu_zero.unwrap_or(0.0),
    )
    .map_err(invalid)?;
    Ok(Some(Deformation::Three(d)))
}

pub fn tail(arg: TailArg) -> Tail {
    match arg {
        TailArg::Zero => Tail::Zero,
        TailArg::Terminator => Tail::Terminator,
    }
}

pub fn resolvent_options(args: &ResolventArgs) -> Result<ResolventOptions, CliError> {
    let tail = tail(args.tail);
    let epsilon = args.epsilon.unwrap_or(0.0);
    if args.depth < 1 {
        return Err(CliError::Config("--depth must be >= 1".into()));
    }
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(CliError::Config(format!(
            "--epsilon {epsilon} must be finite and >= 0"
        )));
    }
    if tail == Tail::Zero && epsilon == 0.0 {
        return Err(CliError::Config("--tail zero needs --epsilon > 0".into()));
    }
    Ok(ResolventOptions {
        depth: args.depth,
        tail,
        epsilon,
    })
}

/// `LO:HI:COUNT` with both ends included; `COUNT = 1` gives `LO` alone.
pub fn grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Config(format!("--grid: expected LO:HI:COUNT, got `{spec}`"));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return Err(CliError::Config(format!(
            "--grid: need finite LO < HI, got {lo}:{hi}"
        )));
    }
    if count == 0 {
        return Err(CliError::Config("--grid: COUNT must be >= 1".into()));
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    let last = (count - 1) as f64;
    Ok((0..count)
        .map(|i| match i {
            0 => lo,
            i if i == count - 1 => hi,
            i => (lo * (last - i as f64) + hi * i as f64) / last,
        })
        .collect())
}

/// `LO:HI` search interval.
pub fn interval(spec: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::Config(format!("--search: expected LO:HI, got `{spec}`"));
    let (lo, hi) = spec.split_once(':').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

/// Hex SHA-256 of the canonical JSON form of `config`.
pub fn config_hash<T: Serialize>(config: &T) -> String {
    let bytes = serde_json::to_vec(config).expect("configuration serializes");
    hex::encode(Sha256::digest(bytes))
}
