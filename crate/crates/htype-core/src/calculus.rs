//! Functions of the sublaplacian as exact diagonal multipliers on the joint
//! spectrum (2m + d)|λ|: Schrödinger propagator, heat semigroup, fractional
//! powers, Littlewood–Paley band projections, Besov/Sobolev norms, and the
//! exact dyadic rescaling that realizes dilations in frequency.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::SphericalSpectrum;
use crate::grid::SpectralGrid;

/// Smooth dyadic bump profile.
///
/// φ₀(x) = θ(u + 1) − θ(u) with u = log₂(x)/2 and θ the standard smooth
/// step built from σ(v) = e^{−1/v}: θ(v) = σ(v)/(σ(v) + σ(1 − v)). Because
/// consecutive bands telescope, Σ_j φ₀(2^{−2j} x) = 1 holds exactly for
/// every x > 0, the support is [1/4, 4], and φ₀ ≥ φ₀(1/√2) > 0 on
/// [2^{−3/2}, 2^{3/2}].
#[derive(Debug, Clone, Copy, Default)]
pub struct LPProfile;

fn smooth_sigma(v: f64) -> f64 {
    if v <= 0.0 {
        0.0
    } else {
        (-1.0 / v).exp()
    }
}

fn smooth_step(v: f64) -> f64 {
    if v <= 0.0 {
        0.0
    } else if v >= 1.0 {
        1.0
    } else {
        let a = smooth_sigma(v);
        a / (a + smooth_sigma(1.0 - v))
    }
}

impl LPProfile {
    /// φ₀ evaluated at x ≥ 0.
    pub fn phi0(&self, x: f64) -> f64 {
        self.band(0, x)
    }

    /// φ_j(x) = φ₀(2^{−2j} x), computed in log coordinates so dyadic shifts
    /// telescope exactly.
    pub fn band(&self, j: i32, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let u = x.log2() / 2.0 - j as f64;
        smooth_step(u + 1.0) - smooth_step(u)
    }

    /// The widened band Σ_{|i−j|≤1} φ_i, used for the reproducing identity
    /// Φ_j ∗ Φ̃_j = Φ_j.
    pub fn band_tilde(&self, j: i32, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let u = x.log2() / 2.0 - j as f64;
        smooth_step(u + 2.0) - smooth_step(u - 1.0)
    }

    /// Inhomogeneous low block φ(x) = Σ_{j ≤ 0} φ_j(x) = 1 − θ(log₂(x)/2),
    /// supported in [0, 4].
    pub fn low_block(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        1.0 - smooth_step(x.log2() / 2.0)
    }

    /// Σ_{j < j_thr} φ_j(x) = 1 − θ(log₂(x)/2 − j_thr + 1): the low half of
    /// the frequency split. Exactly complementary to [`Self::split_high`].
    pub fn split_low(&self, j_thr: i32, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        1.0 - smooth_step(x.log2() / 2.0 - j_thr as f64 + 1.0)
    }

    /// Σ_{j ≥ j_thr} φ_j(x) = θ(log₂(x)/2 − j_thr + 1).
    pub fn split_high(&self, j_thr: i32, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        smooth_step(x.log2() / 2.0 - j_thr as f64 + 1.0)
    }
}

/// Apply a real scalar multiplier θ((2m + d)|λ|). The λ = 0 bin stays zero.
pub fn apply_multiplier<F: Fn(f64) -> f64>(
    s: &SphericalSpectrum,
    theta: F,
) -> Result<SphericalSpectrum> {
    apply_multiplier_complex(s, |x| Complex64::new(theta(x), 0.0))
}

/// Apply a complex scalar multiplier on the joint spectrum.
pub fn apply_multiplier_complex<F: Fn(f64) -> Complex64>(
    s: &SphericalSpectrum,
    theta: F,
) -> Result<SphericalSpectrum> {
    let g = &s.grid;
    let d = g.group.d as f64;
    let mut out = s.clone();
    // One multiplier value per (m, shell); bins of a shell share it.
    for m in 0..=g.m_max {
        let row = &mut out.coeffs[m * g.n_bins..(m + 1) * g.n_bins];
        for si in 0..g.shells.len() {
            if g.shells[si] == 0 {
                for &bin in &g.shell_bins[si] {
                    row[bin as usize] = Complex64::default();
                }
                continue;
            }
            let x = (2.0 * m as f64 + d) * g.shell_lambda(si);
            let v = theta(x);
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFiniteMultiplier { at: x });
            }
            for &bin in &g.shell_bins[si] {
                row[bin as usize] *= v;
            }
        }
    }
    Ok(out)
}

/// Schrödinger propagator e^{itL}: multiplier e^{it(2m+d)|λ|}; unitary on
/// the Plancherel norm.
pub fn propagator(s: &SphericalSpectrum, t: f64) -> SphericalSpectrum {
    apply_multiplier_complex(s, |x| Complex64::from_polar(1.0, t * x))
        .expect("propagator multiplier is finite")
}

/// Heat semigroup e^{−tL}, t ≥ 0.
pub fn heat(s: &SphericalSpectrum, t: f64) -> Result<SphericalSpectrum> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    apply_multiplier(s, |x| (-t * x).exp())
}

/// Fractional power L^{s/2} (homogeneous) or (1 + L)^{s/2} (inhomogeneous).
pub fn frac_power(s: &SphericalSpectrum, order: f64, inhomogeneous: bool) -> SphericalSpectrum {
    let theta = move |x: f64| {
        if inhomogeneous {
            (1.0 + x).powf(order / 2.0)
        } else {
            x.powf(order / 2.0)
        }
    };
    apply_multiplier(s, theta).expect("fractional-power multiplier is finite on the spectrum")
}

/// The dyadic range [j_min, j_max] whose bands intersect the representable
/// joint spectrum.
pub fn representable_bands(grid: &SpectralGrid) -> (i32, i32) {
    let (x_min, x_max) = grid.spectrum_range();
    // Band j covers (2^{2j−2}, 2^{2j+2}).
    let j_min = (x_min.log2() / 2.0 - 1.0).ceil() as i32;
    let j_max = (x_max.log2() / 2.0 + 1.0).floor() as i32;
    (j_min, j_max)
}

/// Littlewood–Paley kernel Φ_j as a spectrum: ĉ(m, λ) = φ₀(2^{−2j}(2m+d)|λ|).
pub fn lp_kernel(
    grid: &std::sync::Arc<SpectralGrid>,
    j: i32,
    profile: &LPProfile,
) -> Result<SphericalSpectrum> {
    let mut s = SphericalSpectrum::zeros(grid);
    for c in s.coeffs.iter_mut() {
        *c = Complex64::new(1.0, 0.0);
    }
    let s = apply_multiplier(&s, |x| profile.band(j, x))?;
    if s.coeffs.iter().all(|c| *c == Complex64::default()) {
        let (lo, hi) = grid.spectrum_range();
        return Err(Error::BandOutOfRange {
            j,
            spec_min: lo,
            spec_max: hi,
        });
    }
    Ok(s)
}

/// Widened kernel Φ̃_j = Φ_{j−1} + Φ_j + Φ_{j+1} as a spectrum.
pub fn lp_kernel_tilde(
    grid: &std::sync::Arc<SpectralGrid>,
    j: i32,
    profile: &LPProfile,
) -> Result<SphericalSpectrum> {
    let mut s = SphericalSpectrum::zeros(grid);
    for c in s.coeffs.iter_mut() {
        *c = Complex64::new(1.0, 0.0);
    }
    let s = apply_multiplier(&s, |x| profile.band_tilde(j, x))?;
    if s.coeffs.iter().all(|c| *c == Complex64::default()) {
        let (lo, hi) = grid.spectrum_range();
        return Err(Error::BandOutOfRange {
            j,
            spec_min: lo,
            spec_max: hi,
        });
    }
    Ok(s)
}

/// Band projection Δ_j f = f ∗ Φ_j, i.e. the multiplier φ₀(2^{−2j}·).
pub fn lp_project(
    s: &SphericalSpectrum,
    j: i32,
    profile: &LPProfile,
) -> Result<SphericalSpectrum> {
    apply_multiplier(s, |x| profile.band(j, x))
}

/// Exact dyadic rescaling u ↦ u(δ_{2^j} ·) in frequency: the output lives on
/// the dyadic relative grid (box 2^{−2j} L, radial nodes 2^{−j} ρ) and the
/// coefficients are relabeled in place with the exact factor 2^{−jN}. No
/// interpolation occurs, so all homogeneity identities hold to rounding.
pub fn rescale_dyadic(s: &SphericalSpectrum, j: i32) -> SphericalSpectrum {
    let grid = s.grid.dyadic_relative(j);
    let factor = 2.0f64.powi(-(s.grid.group.n_hom as i32) * j);
    SphericalSpectrum {
        grid,
        coeffs: s.coeffs.iter().map(|c| c * factor).collect(),
    }
}

/// Detailed Besov-norm evaluation.
#[derive(Debug, Clone)]
pub struct BesovReport {
    pub value: f64,
    /// Fraction of Plancherel mass in the two outermost representable bands
    /// (a proxy for mass the truncated band sum cannot see).
    pub band_truncation: f64,
    pub j_range: (i32, i32),
}

/// Besov norm (Σ_j 2^{jsq} ‖Δ_j f‖_{L^r}^q)^{1/q} over the representable
/// band range; q = ∞ takes the sup over bands. The inhomogeneous variant
/// replaces bands j ≤ 0 by the single low block φ(L)f.
pub fn besov_report(
    s: &SphericalSpectrum,
    sm: f64,
    r: f64,
    q: f64,
    homogeneous: bool,
    profile: &LPProfile,
) -> Result<BesovReport> {
    let (j_min, j_max) = representable_bands(&s.grid);
    let total_sq = s.plancherel_norm().powi(2);
    let mut edge_sq = 0.0f64;
    let mut terms: Vec<(f64, f64)> = Vec::new(); // (2^{js} weight, L^r norm)
    if !homogeneous {
        let low = apply_multiplier(s, |x| profile.low_block(x))?;
        terms.push((1.0, low.inverse_transform().lr_norm(r)));
    }
    let j_start = if homogeneous { j_min } else { 1 };
    for j in j_start..=j_max {
        let piece = lp_project(s, j, profile)?;
        let mass = piece.plancherel_norm().powi(2);
        if j <= j_min || j >= j_max {
            edge_sq += mass;
        }
        if mass == 0.0 {
            continue;
        }
        let norm = piece.inverse_transform().lr_norm(r);
        terms.push((2.0f64.powi(j).powf(sm), norm));
    }
    let value = if q.is_infinite() {
        terms
            .iter()
            .map(|(w, n)| w * n)
            .fold(0.0, f64::max)
    } else {
        terms
            .iter()
            .map(|(w, n)| (w * n).powf(q))
            .sum::<f64>()
            .powf(1.0 / q)
    };
    Ok(BesovReport {
        value,
        band_truncation: if total_sq > 0.0 { edge_sq / total_sq } else { 0.0 },
        j_range: (j_min, j_max),
    })
}

/// Besov norm value (lenient about edge-band mass).
pub fn besov_norm(
    s: &SphericalSpectrum,
    sm: f64,
    r: f64,
    q: f64,
    homogeneous: bool,
    profile: &LPProfile,
) -> Result<f64> {
    Ok(besov_report(s, sm, r, q, homogeneous, profile)?.value)
}

/// Besov norm that rejects inputs whose edge-band mass fraction exceeds
/// 1e−6 (the band sum would be silently truncated).
pub fn besov_norm_strict(
    s: &SphericalSpectrum,
    sm: f64,
    r: f64,
    q: f64,
    homogeneous: bool,
    profile: &LPProfile,
) -> Result<f64> {
    let rep = besov_report(s, sm, r, q, homogeneous, profile)?;
    if rep.band_truncation > 1e-6 {
        return Err(Error::BandTruncationWarning {
            fraction: rep.band_truncation,
        });
    }
    Ok(rep.value)
}

/// Sobolev norm ‖L^{s/2} f‖_{L^r} (homogeneous) or ‖(1+L)^{s/2} f‖_{L^r};
/// r = 2 is evaluated on the frequency side (exact), other r by physical
/// quadrature.
pub fn sobolev_norm(s: &SphericalSpectrum, sm: f64, r: f64, homogeneous: bool) -> f64 {
    let powered = frac_power(s, sm, !homogeneous);
    if r == 2.0 {
        powered.plancherel_norm()
    } else {
        powered.inverse_transform().lr_norm(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::SpectralGrid;
    use crate::group::HTypeGroup;
    use std::sync::Arc;

    fn grid_small() -> Arc<SpectralGrid> {
        let g = HTypeGroup::build(2, 2).unwrap();
        SpectralGrid::design(&g, 8, 16.0, 8).unwrap()
    }

    fn rel_dist(a: &SphericalSpectrum, b: &SphericalSpectrum) -> f64 {
        a.l2_distance(b).unwrap() / b.plancherel_norm().max(1e-300)
    }

    #[test]
    fn profile_partition_of_unity() {
        let prof = LPProfile;
        // Σ_{j=−J..J} φ_j(x) = 1 on [2^{−2J+2}, 2^{2J−2}].
        let jj = 8i32;
        let mut x = 2.0f64.powi(-2 * jj + 2);
        while x <= 2.0f64.powi(2 * jj - 2) {
            let total: f64 = (-jj..=jj).map(|j| prof.band(j, x)).sum();
            assert!((total - 1.0).abs() <= 1e-10, "partition failed at x={x}");
            x *= 1.37;
        }
        // Support containment on a fine sample of [0, 8].
        for i in 0..=4000 {
            let x = i as f64 * 8.0 / 4000.0;
            let v = prof.phi0(x);
            assert!((0.0..=1.0 + 1e-12).contains(&v));
            if !(0.25..=4.0).contains(&x) {
                assert_eq!(v, 0.0, "support violated at x={x}");
            }
        }
        // Positivity on [2^{−3/2}, 2^{3/2}].
        for i in 0..=100 {
            let x = 2.0f64.powf(-1.5 + 3.0 * i as f64 / 100.0);
            assert!(prof.phi0(x) > 1e-3);
        }
        // Low block: supported in [0, 4], equals 1 − Σ_{j≥1} φ_j.
        for x in [0.1, 0.5, 1.0, 3.0, 5.0, 64.0] {
            let tail: f64 = (1..=12).map(|j| prof.band(j, x)).sum();
            assert!((prof.low_block(x) - (1.0 - tail)).abs() <= 1e-12);
            if x > 4.0 {
                assert_eq!(prof.low_block(x), 0.0);
            }
        }
    }

    #[test]
    fn identity_multiplier_and_composition() {
        let grid = grid_small();
        let s = SphericalSpectrum::random_band_limited(&grid, 8, 4, 1);
        let id = apply_multiplier(&s, |_| 1.0).unwrap();
        assert!(rel_dist(&id, &s) <= 1e-15);
        let a = apply_multiplier(&apply_multiplier(&s, |x| x).unwrap(), |x| 1.0 / (1.0 + x))
            .unwrap();
        let b = apply_multiplier(&s, |x| x / (1.0 + x)).unwrap();
        assert!(rel_dist(&a, &b) <= 1e-14);
        assert!(matches!(
            apply_multiplier(&s, |x| 1.0 / (x - x)),
            Err(Error::NonFiniteMultiplier { .. })
        ));
    }

    #[test]
    fn propagator_is_unitary_with_group_law() {
        let grid = grid_small();
        let s = SphericalSpectrum::random_band_limited(&grid, 8, 4, 2);
        let n0 = s.plancherel_norm();
        let ev = propagator(&s, 0.37);
        assert!((ev.plancherel_norm() - n0).abs() <= 1e-12 * n0);
        assert!(rel_dist(&propagator(&s, 0.0), &s) <= 1e-15);
        let two_step = propagator(&propagator(&s, 0.2), 0.5);
        let one_step = propagator(&s, 0.7);
        assert!(rel_dist(&two_step, &one_step) <= 1e-12);
        // Time reversal.
        let back = propagator(&propagator(&s, 1.3), -1.3);
        assert!(rel_dist(&back, &s) <= 1e-12);
    }

    #[test]
    fn heat_semigroup_laws() {
        let grid = grid_small();
        let s = SphericalSpectrum::random_band_limited(&grid, 8, 4, 3);
        assert!(rel_dist(&heat(&s, 0.0).unwrap(), &s) <= 1e-15);
        let n0 = s.plancherel_norm();
        let mut prev = n0;
        for t in [0.1, 0.5, 2.0] {
            let n = heat(&s, t).unwrap().plancherel_norm();
            assert!(n <= prev + 1e-14);
            prev = n;
        }
        let two = heat(&heat(&s, 0.3).unwrap(), 0.4).unwrap();
        let one = heat(&s, 0.7).unwrap();
        assert!(rel_dist(&two, &one) <= 1e-12);
        assert!(matches!(heat(&s, -1.0), Err(Error::NegativeTime(_))));
    }

    #[test]
    fn frac_power_laws() {
        let grid = grid_small();
        let s = SphericalSpectrum::random_band_limited(&grid, 8, 4, 4);
        for inhom in [false, true] {
            assert!(rel_dist(&frac_power(&s, 0.0, inhom), &s) <= 1e-15);
            let ab = frac_power(&frac_power(&s, 0.7, inhom), 1.1, inhom);
            let sum = frac_power(&s, 1.8, inhom);
            assert!(rel_dist(&ab, &sum) <= 1e-12);
            let inv = frac_power(&frac_power(&s, 1.4, inhom), -1.4, inhom);
            assert!(rel_dist(&inv, &s) <= 1e-12);
        }
    }

    #[test]
    fn lp_kernel_support_and_reproduction() {
        let grid = grid_small();
        let prof = LPProfile;
        let (j_min, j_max) = representable_bands(&grid);
        assert!(j_min < 0 && j_max > 0);
        let k = lp_kernel(&grid, 0, &prof).unwrap();
        let d = grid.group.d as f64;
        for m in 0..=grid.m_max {
            for bin in 0..grid.n_bins {
                let x = (2.0 * m as f64 + d) * grid.lambda_abs(bin);
                let v = k.coeff(m, bin).re;
                if !(0.25..=4.0).contains(&x) {
                    assert_eq!(v, 0.0, "kernel leaked outside band at x={x}");
                }
            }
        }
        // Φ_j ∗ Φ̃_j = Φ_j.
        let kt = lp_kernel_tilde(&grid, 0, &prof).unwrap();
        let repro = k.convolve(&kt).unwrap();
        assert!(rel_dist(&repro, &k) <= 1e-12);
        // Far bands raise BandOutOfRange.
        assert!(matches!(
            lp_kernel(&grid, 40, &prof),
            Err(Error::BandOutOfRange { .. })
        ));
    }

    #[test]
    fn lp_projection_partition_and_orthogonality() {
        let grid = grid_small();
        let prof = LPProfile;
        let s = SphericalSpectrum::random_band_limited(&grid, 6, 3, 5);
        let (j_min, j_max) = representable_bands(&grid);
        let mut sum = SphericalSpectrum::zeros(&grid);
        for j in j_min..=j_max {
            sum = sum
                .axpy(Complex64::new(1.0, 0.0), &lp_project(&s, j, &prof).unwrap())
                .unwrap();
        }
        assert!(rel_dist(&sum, &s) <= 1e-10);
        // Δ_j Δ_k = 0 for |j − k| ≥ 2.
        let pj = lp_project(&s, 0, &prof).unwrap();
        let pjk = lp_project(&pj, 2, &prof).unwrap();
        assert_eq!(pjk.plancherel_norm(), 0.0);
    }

    #[test]
    fn rescale_dyadic_homogeneity() {
        let grid = grid_small();
        let s = SphericalSpectrum::random_band_limited(&grid, 8, 4, 6);
        assert!(rel_dist(&rescale_dyadic(&s, 0), &s) <= 1e-15);
        let n_hom = grid.group.n_hom as f64;
        for j in [-2i32, -1, 1, 2] {
            let sj = rescale_dyadic(&s, j);
            // ‖u(δ_{2^j}·)‖_{Ḣ^σ} = 2^{j(σ−N/2)} ‖u‖_{Ḣ^σ}.
            for sigma in [0.0, 1.5, 3.5] {
                let lhs = sobolev_norm(&sj, sigma, 2.0, true);
                let rhs = 2.0f64.powf(j as f64 * (sigma - n_hom / 2.0))
                    * sobolev_norm(&s, sigma, 2.0, true);
                assert!(
                    (lhs - rhs).abs() <= 1e-10 * rhs,
                    "scaling failed j={j} sigma={sigma}: {lhs} vs {rhs}"
                );
            }
            // Round trip.
            let back = rescale_dyadic(&sj, -j);
            assert!(rel_dist(&back, &s) <= 1e-14);
        }
    }

    #[test]
    fn besov_single_band_value_and_l2_comparison() {
        let grid = grid_small();
        let prof = LPProfile;
        // A spectrum inside band j0 = 1: x = (2m+d)|λ| ∈ [1, 16].
        let s = {
            let base = SphericalSpectrum::random_band_limited(&grid, 6, 3, 7);
            apply_multiplier(&base, |x| prof.band(1, x)).unwrap()
        };
        let j0 = 1i32;
        let b = besov_report(&s, 2.0, 2.0, 2.0, true, &prof).unwrap();
        // Up to adjacent-band leakage the norm is ≈ 2^{j0 s}‖Δ_{j0}‖_{L²}.
        let core = lp_project(&s, j0, &prof)
            .unwrap()
            .inverse_transform()
            .lr_norm(2.0);
        let lead = 2.0f64.powi(j0 * 2) * core;
        assert!(b.value >= lead * 0.99 && b.value <= lead * 3.0);
        // Ḃ⁰_{2,2} within [3^{−1/2}, 1+ε] of L².
        let s2 = SphericalSpectrum::random_band_limited(&grid, 6, 3, 8);
        let b0 = besov_norm(&s2, 0.0, 2.0, 2.0, true, &prof).unwrap();
        let l2 = s2.plancherel_norm();
        assert!(b0 <= l2 * (1.0 + 1e-8), "b0={b0} l2={l2}");
        assert!(b0 >= l2 / 3.0f64.sqrt() * (1.0 - 1e-8));
    }

    #[test]
    fn sobolev_norm_basics() {
        let grid = grid_small();
        let prof = LPProfile;
        let s = SphericalSpectrum::random_band_limited(&grid, 6, 3, 9);
        // s = 0, r = 2 is the L² norm.
        assert!((sobolev_norm(&s, 0.0, 2.0, true) - s.plancherel_norm()).abs() <= 1e-12);
        // Inhomogeneous W^{s,2} comparable to L² + homogeneous piece.
        let w = sobolev_norm(&s, 1.0, 2.0, false);
        let split = s.plancherel_norm() + sobolev_norm(&s, 1.0, 2.0, true);
        assert!(w <= split * (1.0 + 1e-12) && w >= split / 2.0);
        // Ḣ^s vs Ḃ^s_{2,2} ratio is dilation invariant.
        let ratio = |sp: &SphericalSpectrum| {
            sobolev_norm(sp, 1.5, 2.0, true)
                / besov_norm(sp, 1.5, 2.0, 2.0, true, &prof).unwrap()
        };
        let r0 = ratio(&s);
        let r1 = ratio(&rescale_dyadic(&s, 1));
        assert!((r0 / r1 - 1.0).abs() <= 1e-6, "r0={r0} r1={r1}");
    }

    #[test]
    fn embedding_ratio_probe_dilation_invariant() {
        let grid = grid_small();
        let prof = LPProfile;
        let s = SphericalSpectrum::random_band_limited(&grid, 6, 3, 10);
        // For r ≥ 2 the Ẇ^{s,r} / Ḃ^s_{r,2} ratio is invariant across
        // dilates (both sides share the scaling exponent).
        let ratio = |sp: &SphericalSpectrum| {
            sobolev_norm(sp, 1.0, 4.0, true)
                / besov_norm(sp, 1.0, 4.0, 2.0, true, &prof).unwrap()
        };
        let base = ratio(&s);
        let mut lo = base;
        let mut hi = base;
        for j in [-1i32, 1] {
            let r = ratio(&rescale_dyadic(&s, j));
            lo = lo.min(r);
            hi = hi.max(r);
        }
        assert!(hi / lo <= 1.0 + 1e-6, "ratio drifted: [{lo}, {hi}]");
    }

    #[test]
    fn strict_besov_flags_edge_mass() {
        let grid = grid_small();
        let prof = LPProfile;
        // Mass on the outermost shell/Laguerre corner sits in an edge band.
        let mut s = SphericalSpectrum::zeros(&grid);
        let hi_bin = *grid.shell_bins.last().unwrap().first().unwrap() as usize;
        s.coeffs[grid.m_max * grid.n_bins + hi_bin] = Complex64::new(1.0, 0.0);
        assert!(matches!(
            besov_norm_strict(&s, 0.0, 2.0, 2.0, true, &prof),
            Err(Error::BandTruncationWarning { .. })
        ));
    }
}
