//! Physical fields and spherical spectra, and the transform pair between
//! them.
//!
//! A z-radial function f(|z|, s) on the group is sampled on the shared
//! [`SpectralGrid`]. Its spherical transform is
//!   ĉ(m, λ) = (m+d−1 choose m)^{−1} ∫ e^{iλ·s} f(z, s) ℓ_m^{(d−1)}(|λ||z|²/2) dz ds,
//! and the inversion reads
//!   f(z, s) = (2π)^{−(d+p)} Σ_m Σ_λ Δλ e^{−iλ·s} ĉ(m, λ) ℓ_m^{(d−1)}(|λ||z|²/2) |λ|^d.
//! The z-integral reduces to the radial quadrature against ρ^{2d−1} with the
//! sphere factor ω_{2d−1}; the s-integral is the Riemann-sum DFT over the
//! periodic box. The λ = 0 bin carries no Plancherel mass (weight |λ|^d)
//! and is forced to zero throughout.

use std::sync::Arc;

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::SpectralGrid;
use crate::special::{binomial_weight, laguerre_column, sphere_surface};

/// Samples of a z-radial function on the (ρ, s) grid; ρ-major layout
/// `values[i_rho * n_bins + i_s]`.
#[derive(Debug, Clone)]
pub struct RadialField {
    pub grid: Arc<SpectralGrid>,
    pub values: Vec<Complex64>,
}

/// Spherical-transform coefficients; m-major layout
/// `coeffs[m * n_bins + bin]`.
#[derive(Debug, Clone)]
pub struct SphericalSpectrum {
    pub grid: Arc<SpectralGrid>,
    pub coeffs: Vec<Complex64>,
}

/// Apply the n_s^p-point DFT along every s-axis of one ρ-row, in place.
fn fft_row(row: &mut [Complex64], n_s: usize, p: usize, plan: &Arc<dyn Fft<f64>>) {
    let mut line = vec![Complex64::default(); n_s];
    let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];
    for axis in 0..p {
        let stride = n_s.pow(axis as u32);
        let n_lines = row.len() / n_s;
        for l in 0..n_lines {
            let inner = l % stride;
            let outer = l / stride;
            let base = outer * stride * n_s + inner;
            for t in 0..n_s {
                line[t] = row[base + t * stride];
            }
            plan.process_with_scratch(&mut line, &mut scratch);
            for t in 0..n_s {
                row[base + t * stride] = line[t];
            }
        }
    }
}

impl RadialField {
    pub fn zeros(grid: &Arc<SpectralGrid>) -> Self {
        RadialField {
            grid: grid.clone(),
            values: vec![Complex64::default(); grid.radial.nodes.len() * grid.n_bins],
        }
    }

    /// L² norm by physical quadrature.
    pub fn l2_norm(&self) -> f64 {
        self.lr_norm(2.0)
    }

    /// L^r norm by physical quadrature (ρ-weighted Riemann sum); r = ∞ is a
    /// grid sup.
    pub fn lr_norm(&self, r: f64) -> f64 {
        if r.is_infinite() {
            return self.sup_norm_grid();
        }
        let g = &self.grid;
        let ds = (g.box_len / g.n_s as f64).powi(g.group.p as i32);
        let omega = sphere_surface(g.group.d);
        let mut acc = 0.0f64;
        for (i, w) in g.radial.weights.iter().enumerate() {
            let row = &self.values[i * g.n_bins..(i + 1) * g.n_bins];
            let mut row_acc = 0.0f64;
            for v in row {
                row_acc += v.norm().powf(r);
            }
            acc += w * ds * row_acc;
        }
        (omega * acc).powf(1.0 / r)
    }

    /// Largest |f| over the grid samples.
    pub fn sup_norm_grid(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Spherical transform up to the grid's Laguerre cutoff.
    pub fn forward_transform(&self) -> Result<SphericalSpectrum> {
        self.forward_transform_m(self.grid.m_max)
    }

    /// Spherical transform with an explicit cutoff m ≤ M (must not exceed
    /// the cutoff the radial rule was designed for).
    pub fn forward_transform_m(&self, m_max: usize) -> Result<SphericalSpectrum> {
        let g = &self.grid;
        if m_max > g.m_max {
            return Err(Error::CutoffTooLarge {
                requested: m_max,
                designed: g.m_max,
            });
        }
        let n_rho = g.radial.nodes.len();
        let n_bins = g.n_bins;
        let ds = (g.box_len / g.n_s as f64).powi(g.group.p as i32);
        let omega = sphere_surface(g.group.d);
        let d = g.group.d;

        // DFT in s with the box phase: F(ρ, λ_k) = (−1)^{Σk} Σ_j e^{2πi k·j/n} f Δs.
        let plan: Arc<dyn Fft<f64>> =
            FftPlanner::new().plan_fft(g.n_s, FftDirection::Inverse);
        let mut fhat = self.values.clone();
        fhat.par_chunks_mut(n_bins).for_each(|row| {
            fft_row(row, g.n_s, g.group.p, &plan);
            for (v, s) in row.iter_mut().zip(&g.sign) {
                *v *= (*s as f64) * ds;
            }
        });
        // Transpose to bin-major for the radial projections.
        let fhat_ref = &fhat;
        let fhat_t: Vec<Complex64> = (0..n_bins)
            .into_par_iter()
            .flat_map_iter(|bin| (0..n_rho).map(move |i| fhat_ref[i * n_bins + bin]))
            .collect();

        // Per shell: one Laguerre matrix, then a dot product per bin and m.
        let inv_binom: Vec<f64> = (0..=m_max)
            .map(|m| omega / binomial_weight(m, d))
            .collect();
        let per_shell: Vec<Vec<Complex64>> = (0..g.shells.len())
            .into_par_iter()
            .map(|si| {
                let bins = &g.shell_bins[si];
                let mut out = vec![Complex64::default(); bins.len() * (m_max + 1)];
                if g.shells[si] == 0 {
                    return out; // λ = 0 excluded
                }
                let lam = g.shell_lambda(si);
                // lgw[m * n_rho + i] = w_i ℓ_m(λ ρ_i² / 2)
                let mut lgw = vec![0.0f64; (m_max + 1) * n_rho];
                let mut col = vec![0.0f64; m_max + 1];
                for (i, (rho, w)) in g.radial.nodes.iter().zip(&g.radial.weights).enumerate() {
                    let tau = lam * rho * rho / 2.0;
                    laguerre_column(m_max, (d - 1) as f64, tau, &mut col);
                    for m in 0..=m_max {
                        lgw[m * n_rho + i] = w * col[m];
                    }
                }
                for (bi, &bin) in bins.iter().enumerate() {
                    let fcol = &fhat_t[bin as usize * n_rho..(bin as usize + 1) * n_rho];
                    for m in 0..=m_max {
                        let lrow = &lgw[m * n_rho..(m + 1) * n_rho];
                        let mut acc = Complex64::default();
                        for (lw, fv) in lrow.iter().zip(fcol) {
                            acc += fv * *lw;
                        }
                        out[bi * (m_max + 1) + m] = acc * inv_binom[m];
                    }
                }
                out
            })
            .collect();

        let mut coeffs = vec![Complex64::default(); (m_max + 1) * n_bins];
        for (si, block) in per_shell.iter().enumerate() {
            for (bi, &bin) in g.shell_bins[si].iter().enumerate() {
                for m in 0..=m_max {
                    coeffs[m * n_bins + bin as usize] = block[bi * (m_max + 1) + m];
                }
            }
        }
        Ok(SphericalSpectrum {
            grid: self.grid.clone(),
            coeffs,
        })
    }
}

impl SphericalSpectrum {
    pub fn zeros(grid: &Arc<SpectralGrid>) -> Self {
        SphericalSpectrum {
            grid: grid.clone(),
            coeffs: vec![Complex64::default(); (grid.m_max + 1) * grid.n_bins],
        }
    }

    /// Random spectrum supported on m ≤ m_band and shells |k|² ≤ k_band²,
    /// with uniform complex entries; deterministic in the seed.
    pub fn random_band_limited(
        grid: &Arc<SpectralGrid>,
        m_band: usize,
        k_band: u32,
        seed: u64,
    ) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = Self::zeros(grid);
        let m_band = m_band.min(grid.m_max);
        for m in 0..=m_band {
            for bin in 0..grid.n_bins {
                let sq = grid.shell_sq[bin];
                if sq == 0 || sq > k_band * k_band {
                    continue;
                }
                s.coeffs[m * grid.n_bins + bin] =
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        s
    }

    /// Coefficient accessor.
    pub fn coeff(&self, m: usize, bin: usize) -> Complex64 {
        self.coeffs[m * self.grid.n_bins + bin]
    }

    /// Plancherel (frequency-side L²) norm:
    /// ((2π)^{−(d+p)} Σ_m (m+d−1 choose m) Σ_λ Δλ |ĉ|² |λ|^d)^{1/2}.
    pub fn plancherel_norm(&self) -> f64 {
        let g = &self.grid;
        let d = g.group.d;
        let dp = (g.group.d + g.group.p) as i32;
        let dlam = g.lambda_step.powi(g.group.p as i32);
        let pref = (2.0 * std::f64::consts::PI).powi(-dp) * dlam;
        let mut acc = 0.0f64;
        for m in 0..=g.m_max {
            let bw = binomial_weight(m, d);
            let row = &self.coeffs[m * g.n_bins..(m + 1) * g.n_bins];
            let mut row_acc = 0.0f64;
            for (bin, c) in row.iter().enumerate() {
                let sq = g.shell_sq[bin];
                if sq == 0 {
                    continue;
                }
                row_acc += c.norm_sqr() * g.lambda_abs(bin).powi(d as i32);
            }
            acc += bw * row_acc;
        }
        (pref * acc).sqrt()
    }

    /// Inversion back to the physical grid.
    pub fn inverse_transform(&self) -> RadialField {
        let g = &self.grid;
        let n_rho = g.radial.nodes.len();
        let n_bins = g.n_bins;
        let m_max = self.coeffs.len() / n_bins - 1;
        let d = g.group.d;
        let dp = (g.group.d + g.group.p) as i32;
        let pref = (2.0 * std::f64::consts::PI).powi(-dp)
            * g.lambda_step.powi(g.group.p as i32);

        // Radial synthesis, bin-major: G[bin][i] = |λ|^d Σ_m ĉ(m, bin) ℓ_m.
        let per_shell: Vec<Vec<Complex64>> = (0..g.shells.len())
            .into_par_iter()
            .map(|si| {
                let bins = &g.shell_bins[si];
                let mut out = vec![Complex64::default(); bins.len() * n_rho];
                if g.shells[si] == 0 {
                    return out;
                }
                let lam = g.shell_lambda(si);
                let lam_d = lam.powi(d as i32);
                let mut lg = vec![0.0f64; (m_max + 1) * n_rho];
                let mut col = vec![0.0f64; m_max + 1];
                for (i, rho) in g.radial.nodes.iter().enumerate() {
                    laguerre_column(m_max, (d - 1) as f64, lam * rho * rho / 2.0, &mut col);
                    for m in 0..=m_max {
                        lg[m * n_rho + i] = col[m];
                    }
                }
                for (bi, &bin) in bins.iter().enumerate() {
                    let dst = &mut out[bi * n_rho..(bi + 1) * n_rho];
                    for m in 0..=m_max {
                        let c = self.coeffs[m * n_bins + bin as usize] * lam_d;
                        if c == Complex64::default() {
                            continue;
                        }
                        let lrow = &lg[m * n_rho..(m + 1) * n_rho];
                        for (dv, lv) in dst.iter_mut().zip(lrow) {
                            *dv += c * *lv;
                        }
                    }
                }
                out
            })
            .collect();

        // Scatter to ρ-major with the box phase and prefactor, then DFT
        // e^{−iλ·s} per ρ-row.
        let mut values = vec![Complex64::default(); n_rho * n_bins];
        for (si, block) in per_shell.iter().enumerate() {
            for (bi, &bin) in g.shell_bins[si].iter().enumerate() {
                let sgn = g.sign[bin as usize] as f64 * pref;
                for i in 0..n_rho {
                    values[i * n_bins + bin as usize] = block[bi * n_rho + i] * sgn;
                }
            }
        }
        let plan: Arc<dyn Fft<f64>> =
            FftPlanner::new().plan_fft(g.n_s, FftDirection::Forward);
        values.par_chunks_mut(n_bins).for_each(|row| {
            fft_row(row, g.n_s, g.group.p, &plan);
        });
        RadialField {
            grid: self.grid.clone(),
            values,
        }
    }

    /// Evaluate the inversion sum at arbitrary physical points (|z|, s).
    pub fn evaluate_at(&self, points: &[(f64, Vec<f64>)]) -> Vec<Complex64> {
        let g = &self.grid;
        let n_bins = g.n_bins;
        let m_max = self.coeffs.len() / n_bins - 1;
        let d = g.group.d;
        let dp = (g.group.d + g.group.p) as i32;
        let pref = (2.0 * std::f64::consts::PI).powi(-dp)
            * g.lambda_step.powi(g.group.p as i32);
        points
            .par_iter()
            .map(|(rho, s)| {
                let mut col = vec![0.0f64; m_max + 1];
                let mut acc = Complex64::default();
                for si in 0..g.shells.len() {
                    if g.shells[si] == 0 {
                        continue;
                    }
                    let lam = g.shell_lambda(si);
                    laguerre_column(m_max, (d - 1) as f64, lam * rho * rho / 2.0, &mut col);
                    let lam_d = lam.powi(d as i32);
                    for &bin in &g.shell_bins[si] {
                        let bin = bin as usize;
                        // Radial part Σ_m ĉ ℓ_m.
                        let mut rad = Complex64::default();
                        for m in 0..=m_max {
                            rad += self.coeffs[m * n_bins + bin] * col[m];
                        }
                        if rad == Complex64::default() {
                            continue;
                        }
                        // Phase e^{−iλ_k·s}.
                        let mut rem = bin;
                        let mut dot = 0.0f64;
                        for sa in s.iter().take(g.group.p) {
                            let a = rem % g.n_s;
                            rem /= g.n_s;
                            let k = if a < g.n_s / 2 {
                                a as i64
                            } else {
                                a as i64 - g.n_s as i64
                            };
                            dot += g.lambda_step * k as f64 * sa;
                        }
                        acc += rad * lam_d * Complex64::from_polar(1.0, -dot);
                    }
                }
                acc * pref
            })
            .collect()
    }

    /// Frequency-side convolution: pointwise product of coefficients.
    pub fn convolve(&self, other: &SphericalSpectrum) -> Result<SphericalSpectrum> {
        self.grid.expect_same(&other.grid, "convolve")?;
        Ok(SphericalSpectrum {
            grid: self.grid.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    /// self + c · other.
    pub fn axpy(&self, c: Complex64, other: &SphericalSpectrum) -> Result<SphericalSpectrum> {
        self.grid.expect_same(&other.grid, "axpy")?;
        Ok(SphericalSpectrum {
            grid: self.grid.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + c * b)
                .collect(),
        })
    }

    /// Scalar multiple.
    pub fn scale(&self, c: Complex64) -> SphericalSpectrum {
        SphericalSpectrum {
            grid: self.grid.clone(),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Frequency-side distance sup-free diagnostic: Plancherel norm of the
    /// difference.
    pub fn l2_distance(&self, other: &SphericalSpectrum) -> Result<f64> {
        Ok(self.axpy(Complex64::new(-1.0, 0.0), other)?.plancherel_norm())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::HTypeGroup;

    fn grid_small(d: usize, p: usize) -> Arc<SpectralGrid> {
        let g = HTypeGroup::build(d, p).unwrap();
        SpectralGrid::design(&g, 8, 16.0, 8).unwrap()
    }

    #[test]
    fn zero_round_trips() {
        let grid = grid_small(1, 1);
        let s = SphericalSpectrum::zeros(&grid);
        let f = s.inverse_transform();
        assert_eq!(f.sup_norm_grid(), 0.0);
        let back = f.forward_transform().unwrap();
        assert_eq!(back.plancherel_norm(), 0.0);
    }

    #[test]
    fn round_trip_band_limited() {
        for (d, p) in [(1usize, 1usize), (2, 2)] {
            let grid = grid_small(d, p);
            let s = SphericalSpectrum::random_band_limited(&grid, 8, 4, 7);
            let f = s.inverse_transform();
            let back = f.forward_transform().unwrap();
            let rel = back.l2_distance(&s).unwrap() / s.plancherel_norm();
            assert!(rel <= 1e-10, "(d,p)=({d},{p}) round-trip rel err {rel:.3e}");
        }
    }

    #[test]
    fn plancherel_matches_physical_l2() {
        let grid = grid_small(2, 2);
        let s = SphericalSpectrum::random_band_limited(&grid, 8, 4, 11);
        let f = s.inverse_transform();
        let a = s.plancherel_norm();
        let b = f.l2_norm();
        assert!((a - b).abs() / a <= 1e-10, "{a} vs {b}");
    }

    #[test]
    fn forward_is_linear() {
        let grid = grid_small(1, 1);
        let s1 = SphericalSpectrum::random_band_limited(&grid, 8, 4, 1);
        let s2 = SphericalSpectrum::random_band_limited(&grid, 8, 4, 2);
        let (f1, f2) = (s1.inverse_transform(), s2.inverse_transform());
        let mut combo = RadialField::zeros(&grid);
        for (o, (a, b)) in combo.values.iter_mut().zip(f1.values.iter().zip(&f2.values)) {
            *o = 2.0 * a + Complex64::new(0.0, 1.0) * b;
        }
        let lhs = combo.forward_transform().unwrap();
        let rhs = s1
            .scale(Complex64::new(2.0, 0.0))
            .axpy(Complex64::new(0.0, 1.0), &s2)
            .unwrap();
        let rel = lhs.l2_distance(&rhs).unwrap() / rhs.plancherel_norm();
        assert!(rel <= 1e-12);
    }

    #[test]
    fn single_mode_round_trip_is_concentrated() {
        let grid = grid_small(2, 2);
        let mut s = SphericalSpectrum::zeros(&grid);
        // Put a delta at (m0, some shell-2 bin).
        let m0 = 3usize;
        let bin0 = grid.shell_bins[2][0] as usize;
        s.coeffs[m0 * grid.n_bins + bin0] = Complex64::new(1.0, 0.0);
        let back = s.inverse_transform().forward_transform().unwrap();
        let mut off_target = 0.0f64;
        for m in 0..=grid.m_max {
            for bin in 0..grid.n_bins {
                let v = back.coeff(m, bin).norm();
                if (m, bin) == (m0, bin0) {
                    assert!((v - 1.0).abs() <= 1e-8);
                } else {
                    off_target = off_target.max(v);
                }
            }
        }
        assert!(off_target <= 1e-8, "off-target leakage {off_target:.3e}");
    }

    #[test]
    fn m0_spectrum_has_gaussian_radial_profile() {
        // With only m = 0 modes, the inversion is Σ_λ Δλ e^{−iλs}g(λ)e^{−|λ|ρ²/4}|λ|^d
        // times (2π)^{−(d+p)}; check against a direct sum.
        let grid = grid_small(1, 1);
        let mut s = SphericalSpectrum::zeros(&grid);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for bin in 0..grid.n_bins {
            if grid.shell_sq[bin] != 0 && grid.shell_sq[bin] <= 9 {
                s.coeffs[bin] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
            }
        }
        let f = s.inverse_transform();
        let pref = (2.0 * std::f64::consts::PI).powi(-2) * grid.lambda_step;
        for (i, rho) in grid.radial.nodes.iter().enumerate().step_by(37) {
            for bin_s in (0..grid.n_bins).step_by(3) {
                let sp = grid.s_point(bin_s)[0];
                let mut direct = Complex64::default();
                for bin in 0..grid.n_bins {
                    let k = grid.signed_k(bin)[0];
                    if k == 0 {
                        continue;
                    }
                    let lam_signed = grid.lambda_step * k as f64;
                    let lam = lam_signed.abs();
                    direct += s.coeffs[bin]
                        * Complex64::from_polar(1.0, -lam_signed * sp)
                        * (-lam * rho * rho / 4.0).exp()
                        * lam;
                }
                direct *= pref;
                let got = f.values[i * grid.n_bins + bin_s];
                assert!((got - direct).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn evaluate_at_matches_grid_samples() {
        let grid = grid_small(2, 2);
        let s = SphericalSpectrum::random_band_limited(&grid, 6, 3, 5);
        let f = s.inverse_transform();
        let pts: Vec<(f64, Vec<f64>)> = [(0usize, 0usize), (20, 17), (100, 63)]
            .iter()
            .map(|&(i, b)| (grid.radial.nodes[i], grid.s_point(b)))
            .collect();
        let vals = s.evaluate_at(&pts);
        for ((i, b), v) in [(0usize, 0usize), (20, 17), (100, 63)].iter().zip(&vals) {
            let gv = f.values[i * grid.n_bins + b];
            assert!((gv - v).norm() <= 1e-12 * (1.0 + gv.norm()));
        }
    }

    #[test]
    fn convolution_unit_and_commutativity() {
        let grid = grid_small(1, 1);
        let s = SphericalSpectrum::random_band_limited(&grid, 8, 4, 9);
        let mut unit = SphericalSpectrum::zeros(&grid);
        for c in unit.coeffs.iter_mut() {
            *c = Complex64::new(1.0, 0.0);
        }
        let conv = s.convolve(&unit).unwrap();
        // Unit spectrum acts as the multiplicative identity away from λ=0,
        // where s vanishes anyway.
        let rel = conv.l2_distance(&s).unwrap() / s.plancherel_norm();
        assert!(rel <= 1e-15);
        let ab = s.convolve(&unit).unwrap();
        let ba = unit.convolve(&s).unwrap();
        assert_eq!(ab.coeffs, ba.coeffs);
    }

    #[test]
    fn grid_mismatch_detected() {
        let g1 = grid_small(1, 1);
        let g2 = {
            let g = HTypeGroup::build(1, 1).unwrap();
            SpectralGrid::design(&g, 8, 32.0, 8).unwrap()
        };
        let a = SphericalSpectrum::zeros(&g1);
        let b = SphericalSpectrum::zeros(&g2);
        assert!(matches!(a.convolve(&b), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn cutoff_too_large_rejected() {
        let grid = grid_small(1, 1);
        let f = RadialField::zeros(&grid);
        assert!(matches!(
            f.forward_transform_m(9),
            Err(Error::CutoffTooLarge { .. })
        ));
    }
}
