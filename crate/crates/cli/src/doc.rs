//! The problem document and its conversion into core objects.

use std::collections::BTreeMap;

use anyhow::{bail, Context, Result};
use num_bigint::BigInt;
use padyn_core::series::TruncSeries;
use padyn_core::{PadicScalar, RingConfig};
use serde::Deserialize;
use serde_json::Value;

use crate::literal::parse_scalar;

pub const DEFAULT_PRECISION: u32 = 32;
pub const DEFAULT_CAP: usize = 24;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingSpec {
    pub p: u64,
    #[serde(default = "one")]
    pub residue_degree: usize,
    /// Monic modulus, constant term first.
    pub modulus: Option<Vec<i64>>,
    pub rel_precision: Option<u32>,
}

fn one() -> usize {
    1
}

/// A coefficient list, or the same with a flag marking it as a truncation of
/// an infinite series.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum SeriesSpec {
    Plain(Vec<Value>),
    Tagged(TaggedSeries),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaggedSeries {
    pub coeffs: Vec<Value>,
    #[serde(default)]
    pub truncated: bool,
}

impl SeriesSpec {
    fn parts(&self) -> (&[Value], bool) {
        match self {
            SeriesSpec::Plain(c) => (c, false),
            SeriesSpec::Tagged(t) => (&t.coeffs, t.truncated),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub ring: RingSpec,
    pub cap: Option<usize>,
    /// Series without constant term, coefficients from degree 1.
    #[serde(default)]
    pub series: BTreeMap<String, SeriesSpec>,
    /// Series with a constant term, coefficients from degree 0.
    #[serde(default)]
    pub units: BTreeMap<String, SeriesSpec>,
    #[serde(default)]
    pub tasks: Vec<Task>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Task {
    Analyze {
        f: String,
        #[serde(default)]
        m: Vec<u64>,
    },
    Log {
        f: String,
    },
    Group {
        /// Either a logarithm given directly or a series whose logarithm to use.
        log: Option<String>,
        f: Option<String>,
        total_cap: Option<usize>,
        /// Commuters to test as endomorphisms of the law.
        #[serde(default)]
        endomorphisms: Vec<String>,
        /// Exponents `n` for `S(X, f^{∘n}(X))`.
        #[serde(default)]
        un: Vec<usize>,
    },
    Endo {
        log: Option<String>,
        f: Option<String>,
        a: Value,
        total_cap: Option<usize>,
        compare: Option<String>,
    },
    Iterate {
        log: Option<String>,
        f: Option<String>,
        u: String,
        a: Value,
        total_cap: Option<usize>,
    },
    Commute {
        f: String,
        g: Option<String>,
        a: Option<Value>,
    },
    Semiconj {
        f: String,
        m: Option<u64>,
        h: Option<String>,
        f_s: Option<String>,
        u: Option<String>,
        #[serde(default = "one")]
        n: usize,
    },
}

impl Task {
    pub fn command(&self) -> &'static str {
        match self {
            Task::Analyze { .. } => "analyze",
            Task::Log { .. } => "log",
            Task::Group { .. } => "group",
            Task::Endo { .. } => "endo",
            Task::Iterate { .. } => "iterate",
            Task::Commute { .. } => "commute",
            Task::Semiconj { .. } => "semiconj",
        }
    }
}

/// A parsed document: ring, cap and named series.
pub struct Problem {
    pub ring: RingConfig,
    pub cap: usize,
    pub series: BTreeMap<String, TruncSeries>,
    pub tasks: Vec<Task>,
}

impl Problem {
    pub fn get(&self, name: &str) -> Result<&TruncSeries> {
        self.series
            .get(name)
            .with_context(|| format!("no series named `{name}`"))
    }

    pub fn scalar(&self, v: &Value) -> Result<PadicScalar> {
        parse_scalar(v, &self.ring)
    }
}

fn build_ring(spec: &RingSpec, precision: Option<u32>) -> Result<RingConfig> {
    let r = precision.or(spec.rel_precision).unwrap_or(DEFAULT_PRECISION);
    let ring = match &spec.modulus {
        Some(m) => {
            if m.len() != spec.residue_degree + 1 {
                bail!(
                    "modulus has degree {} but residue_degree is {}",
                    m.len().saturating_sub(1),
                    spec.residue_degree
                );
            }
            RingConfig::new(spec.p, m.iter().map(|&c| BigInt::from(c)).collect(), r)?
        }
        None => RingConfig::unramified(spec.p, spec.residue_degree, r)?,
    };
    Ok(ring)
}

fn build_series(
    ring: &RingConfig,
    cap: usize,
    name: &str,
    spec: &SeriesSpec,
    from_one: bool,
) -> Result<TruncSeries> {
    let (coeffs, truncated) = spec.parts();
    let mut c = Vec::with_capacity(coeffs.len() + 1);
    if from_one {
        c.push(PadicScalar::zero(ring));
    }
    for (i, v) in coeffs.iter().enumerate() {
        c.push(parse_scalar(v, ring).with_context(|| format!("series `{name}`, entry {i}"))?);
    }
    if c.len() > cap + 1 {
        if !truncated {
            bail!("series `{name}` has degree {} above the cap {cap}", c.len() - 1);
        }
        c.truncate(cap + 1);
    }
    let s = TruncSeries::polynomial(ring, c, cap)?;
    Ok(if truncated { s.forget_polynomial() } else { s })
}

pub fn load(text: &str, precision: Option<u32>, cap: Option<usize>) -> Result<Problem> {
    let doc: Document = serde_json::from_str(text).context("invalid problem document")?;
    let ring = build_ring(&doc.ring, precision)?;
    let cap = cap.or(doc.cap).unwrap_or(DEFAULT_CAP);
    if cap == 0 {
        bail!("cap must be positive");
    }
    let mut series = BTreeMap::new();
    for (name, spec) in &doc.series {
        series.insert(name.clone(), build_series(&ring, cap, name, spec, true)?);
    }
    for (name, spec) in &doc.units {
        if series.contains_key(name) {
            bail!("`{name}` is declared both as a series and as a unit");
        }
        series.insert(name.clone(), build_series(&ring, cap, name, spec, false)?);
    }
    Ok(Problem {
        ring,
        cap,
        series,
        tasks: doc.tasks,
    })
}
