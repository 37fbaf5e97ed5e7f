//! Shared discretization for the spherical transform: a periodic box in the
//! center variable s with its discrete dual λ-lattice, and the graded radial
//! quadrature in ρ = |z|.
//!
//! The dual lattice carries frequencies λ_k = (2π/L) k, k ∈ ℤ^p with
//! k_axis ∈ [−n_s/2, n_s/2). Bins are grouped into shells of constant |k|²
//! (hence constant |λ|): every radial kernel ℓ_m(|λ|ρ²/2) is evaluated once
//! per shell, not once per bin.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::HTypeGroup;
use crate::special::RadialRule;

/// Discretization shared by physical fields and spectra.
#[derive(Debug, Clone)]
pub struct SpectralGrid {
    pub group: HTypeGroup,
    /// Laguerre cutoff M (indices m = 0..=M).
    pub m_max: usize,
    /// Side length L of the periodic s-box [−L/2, L/2)^p.
    pub box_len: f64,
    /// Points per s-axis (even).
    pub n_s: usize,
    /// Radial quadrature in ρ.
    pub radial: RadialRule,
    /// λ-lattice spacing 2π/L per axis.
    pub lambda_step: f64,
    /// Total number of λ bins / s samples, n_s^p.
    pub n_bins: usize,
    /// Squared integer radius |k|² per bin (0 marks the excluded λ = 0 bin).
    pub shell_sq: Vec<u32>,
    /// Sorted distinct |k|² values.
    pub shells: Vec<u32>,
    /// Bins of each shell, indexed like `shells`.
    pub shell_bins: Vec<Vec<u32>>,
    /// (−1)^{Σ k_axis} per bin: the boundary phase of the shifted box.
    pub sign: Vec<f32>,
}

impl PartialEq for SpectralGrid {
    fn eq(&self, other: &Self) -> bool {
        self.group.d == other.group.d
            && self.group.p == other.group.p
            && self.m_max == other.m_max
            && self.box_len == other.box_len
            && self.n_s == other.n_s
            && self.radial == other.radial
    }
}

impl SpectralGrid {
    /// Design a grid for the given group, Laguerre cutoff, box side, and
    /// per-axis sample count; the radial rule is sized to resolve the full
    /// dual range.
    pub fn design(group: &HTypeGroup, m_max: usize, box_len: f64, n_s: usize) -> Result<Arc<Self>> {
        if box_len <= 0.0 {
            return Err(Error::ConfigInvalid(format!(
                "box side must be positive, got {box_len}"
            )));
        }
        if n_s < 2 || n_s % 2 != 0 {
            return Err(Error::ConfigInvalid(format!(
                "n_s must be even and at least 2, got {n_s}"
            )));
        }
        let lambda_min = 2.0 * std::f64::consts::PI / box_len;
        let lambda_max = lambda_min * (group.p as f64).sqrt() * (n_s as f64 / 2.0);
        let radial = RadialRule::design(group.d, m_max, lambda_min, lambda_max)?;
        Ok(Self::with_layout(group, m_max, box_len, n_s, radial))
    }

    /// Assemble a grid from explicit parts (used for dyadic relatives and
    /// dealiasing-oversampled companions that must share radial nodes).
    pub fn with_layout(
        group: &HTypeGroup,
        m_max: usize,
        box_len: f64,
        n_s: usize,
        radial: RadialRule,
    ) -> Arc<Self> {
        let p = group.p;
        let n_bins = n_s.pow(p as u32);
        let mut shell_sq = vec![0u32; n_bins];
        let mut sign = vec![1.0f32; n_bins];
        for bin in 0..n_bins {
            let mut rem = bin;
            let mut sq = 0u64;
            let mut parity = 0usize;
            for _ in 0..p {
                let a = rem % n_s;
                rem /= n_s;
                let k = if a < n_s / 2 {
                    a as i64
                } else {
                    a as i64 - n_s as i64
                };
                sq += (k * k) as u64;
                parity += a;
            }
            shell_sq[bin] = sq as u32;
            sign[bin] = if parity % 2 == 0 { 1.0 } else { -1.0 };
        }
        let mut shells: Vec<u32> = shell_sq.clone();
        shells.sort_unstable();
        shells.dedup();
        let mut shell_bins: Vec<Vec<u32>> = vec![Vec::new(); shells.len()];
        for (bin, sq) in shell_sq.iter().enumerate() {
            let si = shells.binary_search(sq).unwrap();
            shell_bins[si].push(bin as u32);
        }
        Arc::new(SpectralGrid {
            group: group.clone(),
            m_max,
            box_len,
            n_s,
            radial,
            lambda_step: 2.0 * std::f64::consts::PI / box_len,
            n_bins,
            shell_sq,
            shells,
            shell_bins,
            sign,
        })
    }

    /// |λ| of a shell (by shell index).
    pub fn shell_lambda(&self, shell_idx: usize) -> f64 {
        self.lambda_step * (self.shells[shell_idx] as f64).sqrt()
    }

    /// |λ| of a bin.
    pub fn lambda_abs(&self, bin: usize) -> f64 {
        self.lambda_step * (self.shell_sq[bin] as f64).sqrt()
    }

    /// Signed integer multi-index k of a bin.
    pub fn signed_k(&self, bin: usize) -> Vec<i64> {
        let mut rem = bin;
        (0..self.group.p)
            .map(|_| {
                let a = rem % self.n_s;
                rem /= self.n_s;
                if a < self.n_s / 2 {
                    a as i64
                } else {
                    a as i64 - self.n_s as i64
                }
            })
            .collect()
    }

    /// Physical s-sample of a bin index (same row-major layout as λ bins):
    /// s_axis = −L/2 + a·L/n_s.
    pub fn s_point(&self, bin: usize) -> Vec<f64> {
        let step = self.box_len / self.n_s as f64;
        let mut rem = bin;
        (0..self.group.p)
            .map(|_| {
                let a = rem % self.n_s;
                rem /= self.n_s;
                -self.box_len / 2.0 + a as f64 * step
            })
            .collect()
    }

    /// Extremes of the representable joint spectrum (2m + d)|λ| over m ≤ M
    /// and nonzero lattice frequencies.
    pub fn spectrum_range(&self) -> (f64, f64) {
        let d = self.group.d as f64;
        let lam_min = self.lambda_step;
        let lam_max = self.lambda_step
            * ((self.group.p as f64).sqrt() * (self.n_s as f64 / 2.0));
        (d * lam_min, (2.0 * self.m_max as f64 + d) * lam_max)
    }

    /// The grid on which `u(δ_{2^j} ·)` of a field on `self` lives: box side
    /// 2^{−2j} L, radial nodes 2^{−j} ρ. All scalings are exact powers of
    /// two, so the relabeling is bit-exact.
    pub fn dyadic_relative(&self, j: i32) -> Arc<SpectralGrid> {
        let scale = 2.0f64.powi(-2 * j);
        Self::with_layout(
            &self.group,
            self.m_max,
            self.box_len * scale,
            self.n_s,
            self.radial.dyadic_rescale(j, self.group.d),
        )
    }

    /// Check that two handles describe the same discretization.
    pub fn expect_same(&self, other: &SpectralGrid, context: &str) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "{context}: grids differ (L {} vs {}, n_s {} vs {}, M {} vs {})",
                self.box_len, other.box_len, self.n_s, other.n_s, self.m_max, other.m_max
            )))
        }
    }
}
