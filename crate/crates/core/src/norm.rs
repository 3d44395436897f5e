//! The norm catalog: `l^r`, weighted `l^r`, and Gram-matrix Euclidean norms.
//!
//! Only [`NormSpec::Gram`] exposes an inner product. Serialization follows
//! `{"kind": "lp"|"weighted_lp"|"gram", "r": number|"inf", "weights": [..], "gram": [[..],..]}`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::vector::Vector;

/// Exponent of an `l^r` norm, `r ∈ [1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LpOrder {
    Finite(f64),
    Inf,
}

impl LpOrder {
    pub fn new(r: f64) -> Result<Self> {
        if r == f64::INFINITY {
            return Ok(LpOrder::Inf);
        }
        if !r.is_finite() || r < 1.0 {
            return Err(Error::InvalidNorm(format!(
                "exponent r = {r} outside [1, inf]"
            )));
        }
        Ok(LpOrder::Finite(r))
    }
}

impl fmt::Display for LpOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LpOrder::Finite(r) => write!(f, "{r}"),
            LpOrder::Inf => f.write_str("inf"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawOrder {
    Num(f64),
    Text(String),
}

impl Serialize for LpOrder {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            LpOrder::Finite(r) => RawOrder::Num(*r),
            LpOrder::Inf => RawOrder::Text("inf".into()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LpOrder {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawOrder::deserialize(d)?;
        let r = match raw {
            RawOrder::Num(r) => r,
            RawOrder::Text(t) if t.eq_ignore_ascii_case("inf") => f64::INFINITY,
            RawOrder::Text(t) => {
                return Err(serde::de::Error::custom(format!("bad exponent {t:?}")))
            }
        };
        LpOrder::new(r).map_err(serde::de::Error::custom)
    }
}

/// Symmetric positive-definite matrix together with its Cholesky factor.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    rows: Vec<Vec<f64>>,
    // lower-triangular factor, row-major, G = L L^T
    chol: Vec<f64>,
}

impl GramMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidNorm("empty Gram matrix".into()));
        }
        for row in &rows {
            if row.len() != n {
                return Err(Error::InvalidNorm("Gram matrix is not square".into()));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, &a) in row.iter().enumerate().take(i) {
                let b = rows[j][i];
                if (a - b).abs() > 1e-12 * a.abs().max(b.abs()) {
                    return Err(Error::InvalidNorm("Gram matrix is not symmetric".into()));
                }
            }
        }
        let mut chol = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut s = rows[i][j];
                for k in 0..j {
                    s -= chol[i * n + k] * chol[j * n + k];
                }
                if i == j {
                    if s <= 0.0 {
                        return Err(Error::InvalidNorm(
                            "Gram matrix is not positive definite".into(),
                        ));
                    }
                    chol[i * n + i] = s.sqrt();
                } else {
                    chol[i * n + j] = s / chol[j * n + j];
                }
            }
        }
        Ok(Self { rows, chol })
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n]).expect("identity is positive definite")
    }

    pub fn diagonal(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { diag[i] } else { 0.0 }).collect())
            .collect();
        Self::new(rows)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// `u^T G v`.
    fn bilinear(&self, u: &[f64], v: &[f64]) -> f64 {
        self.rows
            .iter()
            .zip(u)
            .map(|(row, ui)| ui * row.iter().zip(v).map(|(g, vj)| g * vj).sum::<f64>())
            .sum()
    }

    /// `‖L^T v‖_2`, which equals `sqrt(v^T G v)` and is never negative.
    fn norm(&self, v: &[f64]) -> f64 {
        let n = self.dim();
        let w: Vec<f64> = (0..n)
            .map(|j| (j..n).map(|i| self.chol[i * n + j] * v[i]).sum())
            .collect();
        l2(&w)
    }
}

/// A concrete norm on `R^n`.
#[derive(Debug, Clone, PartialEq)]
pub enum NormSpec {
    /// `(Σ |v_i|^r)^(1/r)`, or `max |v_i|` for `r = ∞`. Any dimension.
    Lp(LpOrder),
    /// The `l^r` norm of `(w_1 v_1, ..., w_n v_n)`; positive weights.
    WeightedLp { weights: Vec<f64>, order: LpOrder },
    /// `sqrt(v^T G v)` for a symmetric positive-definite `G`.
    Gram(GramMatrix),
}

impl NormSpec {
    pub fn lp(r: f64) -> Result<Self> {
        Ok(NormSpec::Lp(LpOrder::new(r)?))
    }

    pub fn l1() -> Self {
        NormSpec::Lp(LpOrder::Finite(1.0))
    }

    pub fn l2() -> Self {
        NormSpec::Lp(LpOrder::Finite(2.0))
    }

    pub fn linf() -> Self {
        NormSpec::Lp(LpOrder::Inf)
    }

    pub fn weighted(weights: Vec<f64>, r: f64) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidNorm("empty weight list".into()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w <= 0.0) {
            return Err(Error::InvalidNorm(
                "weights must be positive and finite".into(),
            ));
        }
        Ok(NormSpec::WeightedLp {
            weights,
            order: LpOrder::new(r)?,
        })
    }

    pub fn gram(rows: Vec<Vec<f64>>) -> Result<Self> {
        Ok(NormSpec::Gram(GramMatrix::new(rows)?))
    }

    /// The standard Euclidean norm on `R^n`, as a Gram norm.
    pub fn euclidean(n: usize) -> Self {
        NormSpec::Gram(GramMatrix::identity(n))
    }

    /// Fixed dimension, if the norm carries one.
    pub fn dimension(&self) -> Option<usize> {
        match self {
            NormSpec::Lp(_) => None,
            NormSpec::WeightedLp { weights, .. } => Some(weights.len()),
            NormSpec::Gram(g) => Some(g.dim()),
        }
    }

    pub fn has_inner_product(&self) -> bool {
        matches!(self, NormSpec::Gram(_))
    }

    pub fn check(&self, v: &Vector) -> Result<()> {
        match self.dimension() {
            Some(n) if n != v.dim() => Err(Error::DimensionMismatch {
                expected: n,
                found: v.dim(),
            }),
            _ => Ok(()),
        }
    }

    /// `‖v‖` under this norm.
    pub fn norm(&self, v: &Vector) -> Result<f64> {
        self.check(v)?;
        Ok(self.norm_unchecked(v.coords()))
    }

    pub(crate) fn norm_unchecked(&self, v: &[f64]) -> f64 {
        match self {
            NormSpec::Lp(order) => lp(v, *order),
            NormSpec::WeightedLp { weights, order } => {
                let w: Vec<f64> = v.iter().zip(weights).map(|(a, b)| a * b).collect();
                lp(&w, *order)
            }
            NormSpec::Gram(g) => g.norm(v),
        }
    }

    /// `⟨u, v⟩ = u^T G v`; only Gram norms carry one.
    pub fn inner_product(&self, u: &Vector, v: &Vector) -> Result<f64> {
        let NormSpec::Gram(g) = self else {
            return Err(Error::NoInnerProduct);
        };
        u.check_dim(v)?;
        self.check(u)?;
        Ok(g.bilinear(u.coords(), v.coords()))
    }

    /// Unit vector along the first coordinate axis.
    pub fn unit_axis(&self, dim: usize) -> Vector {
        let e = Vector::basis(self.dimension().unwrap_or(dim), 0);
        let n = self.norm_unchecked(e.coords());
        e.scaled(1.0 / n)
    }

    pub fn label(&self) -> String {
        match self {
            NormSpec::Lp(o) => format!("l{o}"),
            NormSpec::WeightedLp { order, .. } => format!("weighted l{order}"),
            NormSpec::Gram(g) => format!("gram({}x{})", g.dim(), g.dim()),
        }
    }
}

fn l2(v: &[f64]) -> f64 {
    let m = v.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if m == 0.0 {
        return 0.0;
    }
    m * v.iter().map(|c| (c / m) * (c / m)).sum::<f64>().sqrt()
}

fn lp(v: &[f64], order: LpOrder) -> f64 {
    match order {
        LpOrder::Inf => v.iter().fold(0.0, |m, c| m.max(c.abs())),
        LpOrder::Finite(1.0) => v.iter().map(|c| c.abs()).sum(),
        LpOrder::Finite(2.0) => l2(v),
        LpOrder::Finite(r) => {
            let m = v.iter().fold(0.0f64, |m, c| m.max(c.abs()));
            if m == 0.0 {
                return 0.0;
            }
            m * v
                .iter()
                .map(|c| (c.abs() / m).powf(r))
                .sum::<f64>()
                .powf(1.0 / r)
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNormSpec {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r: Option<LpOrder>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gram: Option<Vec<Vec<f64>>>,
}

impl Serialize for NormSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let raw = match self {
            NormSpec::Lp(o) => RawNormSpec {
                kind: "lp".into(),
                r: Some(*o),
                weights: None,
                gram: None,
            },
            NormSpec::WeightedLp { weights, order } => RawNormSpec {
                kind: "weighted_lp".into(),
                r: Some(*order),
                weights: Some(weights.clone()),
                gram: None,
            },
            NormSpec::Gram(g) => RawNormSpec {
                kind: "gram".into(),
                r: None,
                weights: None,
                gram: Some(g.rows.clone()),
            },
        };
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for NormSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawNormSpec::deserialize(d)?;
        let missing =
            |field: &str| serde::de::Error::custom(format!("{} norm requires {field:?}", raw.kind));
        match raw.kind.as_str() {
            "lp" => Ok(NormSpec::Lp(raw.r.ok_or_else(|| missing("r"))?)),
            "weighted_lp" => {
                let order = raw.r.ok_or_else(|| missing("r"))?;
                let weights = raw.weights.clone().ok_or_else(|| missing("weights"))?;
                let r = match order {
                    LpOrder::Finite(r) => r,
                    LpOrder::Inf => f64::INFINITY,
                };
                NormSpec::weighted(weights, r).map_err(serde::de::Error::custom)
            }
            "gram" => {
                let rows = raw.gram.clone().ok_or_else(|| missing("gram"))?;
                NormSpec::gram(rows).map_err(serde::de::Error::custom)
            }
            other => Err(serde::de::Error::custom(format!(
                "unknown norm kind {other:?}"
            ))),
        }
    }
}

impl FromStr for NormSpec {
    type Err = Error;

    /// Accepts `l1`, `l2`, `linf`, `l<r>`, `euclidean:<n>`, or a JSON object.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            return serde_json::from_str(s).map_err(|e| Error::InvalidNorm(e.to_string()));
        }
        let lower = s.to_ascii_lowercase();
        if let Some(n) = lower.strip_prefix("euclidean:") {
            let n: usize = n
                .parse()
                .map_err(|_| Error::InvalidNorm(format!("bad dimension in {s:?}")))?;
            if n == 0 {
                return Err(Error::InvalidNorm("dimension must be positive".into()));
            }
            return Ok(NormSpec::euclidean(n));
        }
        if let Some(r) = lower.strip_prefix('l') {
            if r == "inf" {
                return Ok(NormSpec::linf());
            }
            let r: f64 = r
                .parse()
                .map_err(|_| Error::InvalidNorm(format!("unknown norm {s:?}")))?;
            return NormSpec::lp(r);
        }
        Err(Error::InvalidNorm(format!("unknown norm {s:?}")))
    }
}
