//! Ordered node sequences and their CSV form (`index,re,im`).

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::{CompactDomain, ComplexPoint};
use crate::error::{LejaError, Result};

/// How a node sequence was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Greedy maximization of `|π_n|` over a fixed grid.
    GridLeja,
    /// Greedy maximization over a per-step boundary mesh of size `~ n^{r_m}`.
    MeshPseudoLeja,
    /// Independent Metropolis–Hastings chain targeting `|π_n|`.
    Mh,
    /// Argmax of `|π_n|` over fresh uniform candidates.
    Rm,
    /// Rejection sampling from `|π_n|` with a grid-estimated bound.
    RejectionRandomLeja,
}

impl Method {
    pub const ALL: [Method; 5] =
        [Method::GridLeja, Method::MeshPseudoLeja, Method::Mh, Method::Rm, Method::RejectionRandomLeja];

    pub fn name(self) -> &'static str {
        match self {
            Method::GridLeja => "grid-leja",
            Method::MeshPseudoLeja => "mesh-pseudo-leja",
            Method::Mh => "mh",
            Method::Rm => "rm",
            Method::RejectionRandomLeja => "rejection-random-leja",
        }
    }

    pub fn is_random(self) -> bool {
        !matches!(self, Method::GridLeja | Method::MeshPseudoLeja)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = LejaError;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| LejaError::InvalidConfig(format!("unknown method `{s}`")))
    }
}

/// Nodes `z_0, …, z_{n−1}` together with their provenance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeSequence {
    pub nodes: Vec<ComplexPoint>,
    pub method: Method,
    pub seed: Option<u64>,
    pub domain: CompactDomain,
}

impl NodeSequence {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn prefix(&self, n: usize) -> &[ComplexPoint] {
        &self.nodes[..n]
    }

    /// Checks pairwise distinctness and membership in the generating domain.
    pub fn validate(&self) -> Result<()> {
        for (i, &z) in self.nodes.iter().enumerate() {
            if !self.domain.contains(z) {
                return Err(LejaError::InvalidConfig(format!("node {i} = {z} lies outside the domain")));
            }
        }
        check_distinct(&self.nodes)
    }
}

pub(crate) fn check_distinct(nodes: &[ComplexPoint]) -> Result<()> {
    let mut order: Vec<usize> = (0..nodes.len()).collect();
    order.sort_by(|&a, &b| nodes[a].re.total_cmp(&nodes[b].re).then(nodes[a].im.total_cmp(&nodes[b].im)));
    for w in order.windows(2) {
        if nodes[w[0]] == nodes[w[1]] {
            let (first, second) = (w[0].min(w[1]), w[0].max(w[1]));
            return Err(LejaError::CoincidentNodes { first, second });
        }
    }
    Ok(())
}

/// Formats with 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_points_csv<W: Write>(nodes: &[ComplexPoint], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["index", "re", "im"])?;
    for (i, z) in nodes.iter().enumerate() {
        w.write_record([i.to_string(), fmt_f64(z.re), fmt_f64(z.im)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_points_csv<R: Read>(input: R) -> Result<Vec<ComplexPoint>> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["index", "re", "im"] {
        return Err(LejaError::Parse(format!("expected header `index,re,im`, got `{}`", headers.iter().collect::<Vec<_>>().join(","))));
    }
    let mut out = Vec::new();
    for (row, rec) in r.records().enumerate() {
        let rec = rec?;
        let field = |i: usize| -> Result<f64> {
            rec.get(i)
                .ok_or_else(|| LejaError::Parse(format!("row {row}: missing column {i}")))?
                .trim()
                .parse::<f64>()
                .map_err(|e| LejaError::Parse(format!("row {row}: {e}")))
        };
        let idx = field(0)?;
        if idx != row as f64 {
            return Err(LejaError::Parse(format!("row {row}: index {idx} out of order")));
        }
        let z = Complex64::new(field(1)?, field(2)?);
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(LejaError::Parse(format!("row {row}: non-finite coordinate")));
        }
        out.push(z);
    }
    Ok(out)
}

/// Writes a `n,value` series.
pub fn write_series_csv<W: Write>(series: &[(usize, f64)], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "value"])?;
    for (n, v) in series {
        w.write_record([n.to_string(), fmt_f64(*v)])?;
    }
    w.flush()?;
    Ok(())
}
