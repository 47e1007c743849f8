//! Flat charts: the variable layout and component count of an observable.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};

use super::gauss::Frame;
use crate::error::{Error, Result};
use crate::scalar::Rational;

/// Reference density on the configuration space of a cotangent chart.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Density {
    Lebesgue,
    /// `exp(-c·Σ q²)` with `c > 0`.
    Gaussian(Rational),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ChartKind {
    /// `ℝ²ⁿ` with coordinates `q1..qn, p1..pn`.
    MoyalPlane,
    /// `ℂⁿ` with independent symbols `z1..zn, zbar1..zbarn`.
    WickSpace,
    /// Flat `T*ℝⁿ` with coordinates `q, p` and a density on `ℝⁿ`.
    CotangentFlat(Density),
    /// Antiholomorphic symbols `ybar1..ybarn` of the Bargmann-Fock model.
    Fock,
    /// Configuration space `ℝⁿ` with coordinates `q1..qn`.
    Config,
}

/// `m` disjoint copies of a flat chart of dimension parameter `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chart {
    pub kind: ChartKind,
    pub n: usize,
    pub components: usize,
}

impl Chart {
    pub fn new(kind: ChartKind, n: usize, components: usize) -> Self {
        assert!(n >= 1 && components >= 1, "charts need n >= 1 and m >= 1");
        Chart { kind, n, components }
    }

    pub fn moyal(n: usize) -> Self {
        Self::new(ChartKind::MoyalPlane, n, 1)
    }

    pub fn wick(n: usize) -> Self {
        Self::new(ChartKind::WickSpace, n, 1)
    }

    pub fn cotangent(n: usize, density: Density) -> Self {
        Self::new(ChartKind::CotangentFlat(density), n, 1)
    }

    pub fn fock(n: usize) -> Self {
        Self::new(ChartKind::Fock, n, 1)
    }

    pub fn config(n: usize) -> Self {
        Self::new(ChartKind::Config, n, 1)
    }

    pub fn with_components(mut self, m: usize) -> Self {
        assert!(m >= 1);
        self.components = m;
        self
    }

    pub fn nvars(&self) -> usize {
        match self.kind {
            ChartKind::Fock | ChartKind::Config => self.n,
            _ => 2 * self.n,
        }
    }

    pub fn frame(&self) -> Frame {
        match self.kind {
            ChartKind::WickSpace => Frame::wick(self.n),
            _ => Frame::real(self.nvars()),
        }
    }

    pub fn is_phase_space(&self) -> bool {
        matches!(self.kind, ChartKind::MoyalPlane | ChartKind::CotangentFlat(_))
    }

    /// Index of `q_k` (0-based `k`) on phase-space and configuration charts.
    pub fn q(&self, k: usize) -> usize {
        k
    }

    /// Index of `p_k` on phase-space charts.
    pub fn p(&self, k: usize) -> usize {
        self.n + k
    }

    pub fn z(&self, k: usize) -> usize {
        k
    }

    pub fn zbar(&self, k: usize) -> usize {
        self.n + k
    }

    /// Density parameter `c` (zero for Lebesgue and non-cotangent charts).
    pub fn density_c(&self) -> Rational {
        match &self.kind {
            ChartKind::CotangentFlat(Density::Gaussian(c)) => c.clone(),
            _ => Rational::zero(),
        }
    }

    pub fn var_names(&self) -> Vec<String> {
        let n = self.n;
        let (a, b) = match self.kind {
            ChartKind::MoyalPlane | ChartKind::CotangentFlat(_) => ("q", Some("p")),
            ChartKind::WickSpace => ("z", Some("zbar")),
            ChartKind::Fock => ("ybar", None),
            ChartKind::Config => ("q", None),
        };
        let mut out: Vec<String> = (1..=n).map(|k| format!("{a}{k}")).collect();
        if let Some(b) = b {
            out.extend((1..=n).map(|k| format!("{b}{k}")));
        }
        out
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.var_names().iter().position(|v| v == name)
    }

    /// Same chart with the configuration variables only.
    pub fn config_chart(&self) -> Chart {
        Chart::new(ChartKind::Config, self.n, self.components)
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            ChartKind::MoyalPlane => "moyal",
            ChartKind::WickSpace => "wick",
            ChartKind::CotangentFlat(_) => "cotangent",
            ChartKind::Fock => "fock",
            ChartKind::Config => "config",
        }
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},n={},m={}", self.kind_name(), self.n, self.components)?;
        if let ChartKind::CotangentFlat(d) = &self.kind {
            match d {
                Density::Lebesgue => write!(f, ",density=lebesgue")?,
                Density::Gaussian(c) => write!(f, ",density=gauss({c})")?,
            }
        }
        Ok(())
    }
}

/// Parses `kind[,n=..][,m=..][,density=lebesgue|gauss(c)]`.
impl FromStr for Chart {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(',').map(str::trim);
        let kind = parts.next().unwrap_or_default();
        let mut n = 1usize;
        let mut m = 1usize;
        let mut density = None;
        for p in parts {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| Error::Invalid(format!("chart option `{p}` is not key=value")))?;
            match k.trim() {
                "n" => n = parse_count(v)?,
                "m" => m = parse_count(v)?,
                "density" => density = Some(parse_density(v.trim())?),
                other => return Err(Error::Invalid(format!("unknown chart option `{other}`"))),
            }
        }
        let kind = match kind {
            "moyal" => ChartKind::MoyalPlane,
            "wick" => ChartKind::WickSpace,
            "cotangent" => ChartKind::CotangentFlat(density.take().unwrap_or(Density::Lebesgue)),
            "fock" => ChartKind::Fock,
            "config" => ChartKind::Config,
            other => return Err(Error::Invalid(format!("unknown chart kind `{other}`"))),
        };
        if density.is_some() {
            return Err(Error::Invalid("density only applies to cotangent charts".into()));
        }
        Ok(Chart::new(kind, n, m))
    }
}

fn parse_count(v: &str) -> Result<usize> {
    match v.trim().parse::<usize>() {
        Ok(k) if k >= 1 => Ok(k),
        _ => Err(Error::Invalid(format!("`{v}` is not a positive integer"))),
    }
}

fn parse_density(v: &str) -> Result<Density> {
    if v == "lebesgue" {
        return Ok(Density::Lebesgue);
    }
    let inner = v
        .strip_prefix("gauss(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::Invalid(format!("unknown density `{v}`")))?;
    let c: Rational = inner
        .trim()
        .parse()
        .map_err(|_| Error::Invalid(format!("`{inner}` is not a rational")))?;
    if !c.is_positive() {
        return Err(Error::Invalid("density parameter must be positive".into()));
    }
    Ok(Density::Gaussian(c))
}
