//! Leading-order runtime bounds, evaluated without hidden constants.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundId {
    /// `n^2 ln n`: cover time for granularity 1.
    CoverK1,
    /// `L p_m^{-k} / C(2k-1, k)` with `L = (n+1)/k`: cover time for `k >= 2`.
    CoverK,
    /// `n^2 (ln n + r)`: (1 - 1/e)-approximation of a submodular function.
    Submod,
    /// `n_G m ln(n_G w_max)`: first hit of the empty edge set.
    MstZero,
    /// `n_G^2 m`: minimum spanning tree.
    MstOpt,
}

impl BoundId {
    pub const ALL: [BoundId; 5] = [
        BoundId::CoverK1,
        BoundId::CoverK,
        BoundId::Submod,
        BoundId::MstZero,
        BoundId::MstOpt,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundId::CoverK1 => "cover_k1",
            BoundId::CoverK => "cover_k",
            BoundId::Submod => "submod",
            BoundId::MstZero => "mst_zero",
            BoundId::MstOpt => "mst_opt",
        }
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundId::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| Error::UnknownBound(s.to_string()))
    }
}

/// Inputs to [`bound_value`]. `n` is the genotype length for the
/// number-of-ones bounds and the node count `n_G` for the MST bounds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub n: usize,
    pub k: usize,
    pub p_m: f64,
    /// Cardinality limit (submodular).
    pub r: usize,
    /// Edge count (MST).
    pub m: usize,
    /// Largest edge weight (MST).
    pub w_max: u64,
}

/// `C(n, k)` as a float.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub fn bound_value(id: BoundId, p: &BoundParams) -> Result<f64> {
    let need = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("bound {id}: {what}")))
        }
    };
    let n = p.n as f64;
    match id {
        BoundId::CoverK1 => {
            need(p.n >= 2, "n >= 2")?;
            Ok(n * n * n.ln())
        }
        BoundId::CoverK => {
            need(p.k >= 2, "k >= 2 (k = 1 uses cover_k1)")?;
            need((p.n + 1).is_multiple_of(p.k), "k must divide n + 1")?;
            need(p.p_m > 0.0 && p.p_m < 1.0, "0 < p_m < 1")?;
            let cells = ((p.n + 1) / p.k) as f64;
            Ok(cells * p.p_m.powi(-(p.k as i32)) / binomial(2 * p.k - 1, p.k))
        }
        BoundId::Submod => {
            need(p.n >= 2 && p.r >= 1, "n >= 2 and r >= 1")?;
            Ok(n * n * (n.ln() + p.r as f64))
        }
        BoundId::MstZero => {
            need(
                p.n >= 2 && p.m >= 1 && p.w_max >= 1,
                "n_G >= 2, m >= 1, w_max >= 1",
            )?;
            Ok(n * p.m as f64 * (n * p.w_max as f64).ln())
        }
        BoundId::MstOpt => {
            need(p.n >= 2 && p.m >= 1, "n_G >= 2, m >= 1")?;
            Ok(n * n * p.m as f64)
        }
    }
}
