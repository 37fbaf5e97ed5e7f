//! Command-line laboratory driver.
//!
//! Every subcommand validates its inputs, runs one experiment, writes a
//! deterministic artifact into `$HTYPE_LAB_OUT` (default: the working
//! directory), prints a one-line summary, and exits with:
//!   0  success (all checks within tolerance),
//!   2  the experiment ran but a check or search failed,
//!   3  invalid configuration or arguments,
//!   4  I/O failure.

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

use htype_core::calculus::LPProfile;
use htype_core::dispersive::{
    geomspace, heisenberg_transport, kernel_decay, kernel_scaling_check, DecaySampling,
};
use htype_core::field::SphericalSpectrum;
use htype_core::grid::SpectralGrid;
use htype_core::group::{GroupPoint, HTypeGroup};
use htype_core::io::{
    resolve_out_dir, write_csv_artifact, write_json_artifact, write_spectrum,
};
use htype_core::nls::{fixed_point_residual, mass_drift, picard_solve, NLSParams};
use htype_core::strichartz::{
    classify_pair, critical_exponents, find_admissible, strichartz_quotient,
    strichartz_quotient_rescaled, Exponent,
};
use htype_core::{Error, Result};

#[derive(Parser)]
#[command(name = "htype-lab", version, about = "Numerical laboratory for Schrödinger evolution on H-type groups")]
struct Cli {
    /// Output directory override (falls back to $HTYPE_LAB_OUT, then ".").
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Verify the group axioms and structure-matrix invariants.
    GroupCheck {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 64)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Analysis → synthesis round trip on random band-limited data.
    TransformRoundtrip {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 16)]
        m_max: usize,
        #[arg(long, default_value_t = 16.0)]
        box_len: f64,
        #[arg(long, default_value_t = 16)]
        n_s: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 11)]
        seed: u64,
    },
    /// Fit the sup-norm decay rate of the unit-scale smooth kernel.
    DispersiveFit {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: usize,
        /// Run the full validated sampling design (slower).
        #[arg(long)]
        full: bool,
        #[arg(long, default_value_t = 0.2)]
        tol: f64,
        #[arg(long, default_value_t = 0.98)]
        min_r2: f64,
    },
    /// Verify the exact dyadic scaling identity of the propagator.
    ScalingCheck {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 16)]
        m_max: usize,
        #[arg(long, default_value_t = 256.0)]
        box_len: f64,
        #[arg(long, default_value_t = 32)]
        n_s: usize,
        #[arg(long, value_delimiter = ',', default_values_t = vec![-2, -1, 0, 1, 2])]
        bands: Vec<i32>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.25, 1.0, 4.0])]
        times: Vec<f64>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Rigid transport of a single Laguerre ladder (p = 1).
    TransportDemo {
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        m0: usize,
        #[arg(long, default_value_t = 64.0)]
        box_len: f64,
        #[arg(long, default_value_t = 32)]
        n_s: usize,
        #[arg(long, default_value_t = 10.0)]
        t_max: f64,
        #[arg(long, default_value_t = 11)]
        n_t: usize,
        #[arg(long, default_value_t = 1e-6)]
        drift_tol: f64,
        #[arg(long, default_value_t = 0.01)]
        slope_tol: f64,
    },
    /// Classify one exponent pair (exact rational arithmetic).
    Admissible {
        #[arg(long)]
        q: String,
        #[arg(long)]
        r: String,
        #[arg(long)]
        p: usize,
    },
    /// Critical regularity table for (d, p, α).
    Exponents {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: usize,
        /// Nonlinearity power as a rational, e.g. "3" or "7/3".
        #[arg(long)]
        alpha: String,
    },
    /// Search for an admissible pair fitting regularity s.
    PairSearch {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        s: String,
        #[arg(long)]
        delta: Option<String>,
    },
    /// Homogeneous Strichartz quotients over a horizon ladder.
    StrichartzScan {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 8)]
        m_max: usize,
        #[arg(long, default_value_t = 16.0)]
        box_len: f64,
        #[arg(long, default_value_t = 8)]
        n_s: usize,
        #[arg(long)]
        q: String,
        #[arg(long)]
        r: String,
        #[arg(long, default_value_t = 4.0)]
        t_max: f64,
        #[arg(long, default_value_t = 65)]
        n_t: usize,
        #[arg(long, default_value_t = 6)]
        n_horizons: usize,
        #[arg(long, default_value_t = 13)]
        seed: u64,
        /// Also run the dyadically rescaled scan at this offset.
        #[arg(long)]
        j: Option<i32>,
    },
    /// Picard iteration for the semilinear flow.
    SolveNls {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        #[arg(long)]
        s: f64,
        #[arg(long, default_value_t = 8)]
        m_max: usize,
        #[arg(long, default_value_t = 16.0)]
        box_len: f64,
        #[arg(long, default_value_t = 16)]
        n_s: usize,
        #[arg(long, default_value_t = 0.1)]
        t_max: f64,
        #[arg(long, default_value_t = 9)]
        n_nodes: usize,
        #[arg(long, default_value_t = 0.05)]
        amp: f64,
        #[arg(long, default_value_t = 17)]
        seed: u64,
        #[arg(long, default_value_t = 12)]
        max_iter: usize,
    },
    /// Run a condensed battery of all probes and write a combined report.
    Report {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 2)]
        p: usize,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Io(_) => 4,
        Error::ConfigInvalid(_)
        | Error::InvalidAlpha(_)
        | Error::DimensionConstraint { .. }
        | Error::NoCliffordModule { .. }
        | Error::DimensionMismatch { .. }
        | Error::NonpositiveScale(_)
        | Error::GridTooCoarse(_)
        | Error::NegativeArgument(_)
        | Error::CutoffTooLarge { .. }
        | Error::GridMismatch(_)
        | Error::IncompatibleGrids(_)
        | Error::NegativeTime(_)
        | Error::ZeroTime
        | Error::OutOfRange(_)
        | Error::BothInfinite => 3,
        _ => 2,
    }
}

fn random_point(group: &HTypeGroup, rng: &mut ChaCha8Rng) -> GroupPoint {
    let z: Vec<f64> = (0..2 * group.d).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let eta: Vec<f64> = (0..group.p).map(|_| rng.gen_range(-1.0..1.0)).collect();
    GroupPoint::new(z, eta)
}

fn point_dist(a: &GroupPoint, b: &GroupPoint) -> f64 {
    let dz = a
        .z
        .iter()
        .zip(&b.z)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>();
    let de = a
        .eta
        .iter()
        .zip(&b.eta)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>();
    (dz + de).sqrt()
}

fn run(cli: Cli) -> Result<bool> {
    let dir = cli.out.unwrap_or_else(resolve_out_dir);
    match cli.cmd {
        Cmd::GroupCheck {
            d,
            p,
            tol,
            trials,
            seed,
        } => {
            let group = HTypeGroup::build(d, p)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut assoc = 0.0f64;
            let mut inverse = 0.0f64;
            let mut dil = 0.0f64;
            for _ in 0..trials {
                let (g1, g2, g3) = (
                    random_point(&group, &mut rng),
                    random_point(&group, &mut rng),
                    random_point(&group, &mut rng),
                );
                let lhs = group.mul(&group.mul(&g1, &g2)?, &g3)?;
                let rhs = group.mul(&g1, &group.mul(&g2, &g3)?)?;
                assoc = assoc.max(point_dist(&lhs, &rhs));
                let e = group.mul(&g1, &group.inv(&g1)?)?;
                inverse = inverse.max(point_dist(&e, &group.identity()));
                let lam = rng.gen_range(0.5..2.0);
                let a = group.dilate(lam, &group.mul(&g1, &g2)?)?;
                let b = group.mul(&group.dilate(lam, &g1)?, &group.dilate(lam, &g2)?)?;
                dil = dil.max(point_dist(&a, &b));
            }
            let matrices = group.matrix_invariant_residual();
            let worst = assoc.max(inverse).max(dil).max(matrices);
            let cfg = json!({"cmd": "group-check", "d": d, "p": p, "trials": trials, "seed": seed, "tol": tol});
            write_json_artifact(
                &dir,
                "group_check.json",
                &cfg,
                &json!({
                    "associativity": assoc,
                    "inverse": inverse,
                    "dilation_hom": dil,
                    "matrix_invariants": matrices,
                    "worst": worst,
                }),
            )?;
            println!(
                "group-check d={d} p={p}: worst residual {worst:.3e} (tol {tol:.1e}) -> {}",
                if worst <= tol { "pass" } else { "FAIL" }
            );
            Ok(worst <= tol)
        }
        Cmd::TransformRoundtrip {
            d,
            p,
            m_max,
            box_len,
            n_s,
            tol,
            seed,
        } => {
            let group = HTypeGroup::build(d, p)?;
            let grid = SpectralGrid::design(&group, m_max, box_len, n_s)?;
            let s = SphericalSpectrum::random_band_limited(&grid, m_max, (n_s / 2) as u32, seed);
            let field = s.inverse_transform();
            let back = field.forward_transform()?;
            let rel = back.l2_distance(&s)? / s.plancherel_norm();
            let plancherel =
                (s.plancherel_norm() - field.l2_norm()).abs() / s.plancherel_norm();
            let worst = rel.max(plancherel);
            let cfg = json!({"cmd": "transform-roundtrip", "d": d, "p": p, "m_max": m_max, "box_len": box_len, "n_s": n_s, "seed": seed, "tol": tol});
            write_json_artifact(
                &dir,
                "transform_roundtrip.json",
                &cfg,
                &json!({"roundtrip_rel": rel, "plancherel_rel": plancherel}),
            )?;
            println!(
                "transform-roundtrip d={d} p={p} M={m_max} n_s={n_s}: rel {rel:.3e}, plancherel {plancherel:.3e} (tol {tol:.1e}) -> {}",
                if worst <= tol { "pass" } else { "FAIL" }
            );
            Ok(worst <= tol)
        }
        Cmd::DispersiveFit {
            d,
            p,
            full,
            tol,
            min_r2,
        } => {
            let mut sampling = DecaySampling::default_for(p);
            if !full {
                // Condensed design: same estimator, coarser lattice and
                // shorter horizon, for interactive runs.
                sampling.box_len /= 2.0;
                sampling.n_half /= 2;
                sampling.n_sigma /= 2;
                let t_hi = sampling.box_len / (2.0 * d as f64) * 0.8;
                sampling.times = geomspace(1.0, t_hi.min(50.0), 17);
            }
            let fit = kernel_decay(d, p, &sampling)?;
            let expected = (p as f64 - 1.0) / 2.0;
            let ok =
                (fit.fitted_exponent - expected).abs() <= tol && fit.r_squared >= min_r2;
            let cfg = json!({"cmd": "dispersive-fit", "d": d, "p": p, "full": full, "tol": tol, "min_r2": min_r2,
                "box_len": sampling.box_len, "n_half": sampling.n_half, "m_max": sampling.m_max});
            let rows: Vec<Vec<String>> = fit
                .times
                .iter()
                .zip(&fit.sup_norms)
                .map(|(t, s)| vec![format!("{t:.12e}"), format!("{s:.12e}")])
                .collect();
            write_csv_artifact(&dir, "dispersive_fit.csv", &cfg, &["t", "sup_norm"], &rows)?;
            write_json_artifact(&dir, "dispersive_fit.json", &cfg, &fit)?;
            println!(
                "dispersive-fit d={d} p={p}: exponent {:.4} (expected {expected:.2} ± {tol}), r² {:.5} -> {}",
                fit.fitted_exponent,
                fit.r_squared,
                if ok { "pass" } else { "FAIL" }
            );
            Ok(ok)
        }
        Cmd::ScalingCheck {
            d,
            p,
            m_max,
            box_len,
            n_s,
            bands,
            times,
            tol,
        } => {
            let group = HTypeGroup::build(d, p)?;
            let grid = SpectralGrid::design(&group, m_max, box_len, n_s)?;
            let profile = LPProfile;
            let mut worst = 0.0f64;
            let mut rows = Vec::new();
            for &j in &bands {
                for &t in &times {
                    let r = kernel_scaling_check(&grid, j, t, &profile)?;
                    worst = worst.max(r);
                    rows.push(vec![j.to_string(), format!("{t}"), format!("{r:.6e}")]);
                }
            }
            let cfg = json!({"cmd": "scaling-check", "d": d, "p": p, "m_max": m_max, "box_len": box_len, "n_s": n_s, "bands": bands, "times": times, "tol": tol});
            write_csv_artifact(&dir, "scaling_check.csv", &cfg, &["j", "t", "residual"], &rows)?;
            println!(
                "scaling-check d={d} p={p}: worst residual {worst:.3e} (tol {tol:.1e}) -> {}",
                if worst <= tol { "pass" } else { "FAIL" }
            );
            Ok(worst <= tol)
        }
        Cmd::TransportDemo {
            d,
            m0,
            box_len,
            n_s,
            t_max,
            n_t,
            drift_tol,
            slope_tol,
        } => {
            let group = HTypeGroup::build(d, 1)?;
            let grid = SpectralGrid::design(&group, m0 + 4, box_len, n_s)?;
            let mut s = SphericalSpectrum::zeros(&grid);
            for bin in 0..grid.n_bins {
                let k = grid.signed_k(bin)[0];
                if k > 0 {
                    let lam = grid.lambda_abs(bin);
                    s.coeffs[m0 * grid.n_bins + bin] =
                        Complex64::new((-lam * lam).exp() * lam, 0.0);
                }
            }
            let ts: Vec<f64> = (0..n_t)
                .map(|i| t_max * i as f64 / (n_t - 1) as f64)
                .collect();
            let rep = heisenberg_transport(&s, m0, &ts)?;
            let slope_rel =
                (rep.shift_slope - rep.expected_slope).abs() / rep.expected_slope;
            let ok = rep.sup_drift <= drift_tol && slope_rel <= slope_tol;
            let cfg = json!({"cmd": "transport-demo", "d": d, "m0": m0, "box_len": box_len, "n_s": n_s, "t_max": t_max, "n_t": n_t});
            write_json_artifact(&dir, "transport_demo.json", &cfg, &rep)?;
            println!(
                "transport-demo d={d} m0={m0}: sup drift {:.3e} (tol {drift_tol:.1e}), slope {:.6} vs {} (rel {slope_rel:.3e}) -> {}",
                rep.sup_drift,
                rep.shift_slope,
                rep.expected_slope,
                if ok { "pass" } else { "FAIL" }
            );
            Ok(ok)
        }
        Cmd::Admissible { q, r, p } => {
            let qe: Exponent = q.parse().map_err(|e: Error| e)?;
            let re: Exponent = r.parse().map_err(|e: Error| e)?;
            let pair = classify_pair(qe, re, p)?;
            let cfg = json!({"cmd": "admissible", "q": q, "r": r, "p": p});
            write_json_artifact(&dir, "admissible.json", &cfg, &pair)?;
            println!(
                "admissible (q={}, r={}, p={p}): admissible={}, endpoint={}, sigma={:?}",
                pair.q, pair.r, pair.admissible, pair.endpoint, pair.sigma
            );
            Ok(pair.admissible)
        }
        Cmd::Exponents { d, p, alpha } => {
            let a = htype_core::strichartz::parse_ratio_str(&alpha)?;
            let rep = critical_exponents(d, p, a)?;
            let cfg = json!({"cmd": "exponents", "d": d, "p": p, "alpha": alpha});
            write_json_artifact(&dir, "exponents.json", &cfg, &rep)?;
            println!(
                "exponents d={d} p={p} alpha={alpha}: N={}, s_c={}, s_*={}, branch={:?}",
                rep.n_hom, rep.s_c, rep.s_star, rep.branch
            );
            Ok(true)
        }
        Cmd::PairSearch {
            d,
            p,
            alpha,
            s,
            delta,
        } => {
            let a = htype_core::strichartz::parse_ratio_str(&alpha)?;
            let sv = htype_core::strichartz::parse_ratio_str(&s)?;
            let dv = delta
                .as_deref()
                .map(htype_core::strichartz::parse_ratio_str)
                .transpose()?;
            let (q, r, pair) = find_admissible(d, p, a, sv, dv)?;
            let cfg = json!({"cmd": "pair-search", "d": d, "p": p, "alpha": alpha, "s": s, "delta": delta});
            write_json_artifact(
                &dir,
                "pair_search.json",
                &cfg,
                &json!({"q": q.to_string(), "r": r.to_string(), "pair": pair}),
            )?;
            println!(
                "pair-search d={d} p={p} alpha={alpha} s={s}: (q, r) = ({q}, {r}), sigma = {:?}",
                pair.sigma
            );
            Ok(true)
        }
        Cmd::StrichartzScan {
            d,
            p,
            m_max,
            box_len,
            n_s,
            q,
            r,
            t_max,
            n_t,
            n_horizons,
            seed,
            j,
        } => {
            let group = HTypeGroup::build(d, p)?;
            let grid = SpectralGrid::design(&group, m_max, box_len, n_s)?;
            let u0 = SphericalSpectrum::random_band_limited(&grid, m_max / 2, (n_s / 4) as u32, seed);
            let qe: Exponent = q.parse().map_err(|e: Error| e)?;
            let re: Exponent = r.parse().map_err(|e: Error| e)?;
            let curve = strichartz_quotient(&u0, qe, re, t_max, n_t, n_horizons)?;
            let mut rows: Vec<Vec<String>> = curve
                .horizons
                .iter()
                .zip(&curve.quotients)
                .map(|(h, v)| vec!["0".into(), format!("{h:.9e}"), format!("{v:.9e}")])
                .collect();
            let mut covariance: Option<f64> = None;
            if let Some(j) = j {
                let shifted = strichartz_quotient_rescaled(&u0, qe, re, t_max, n_t, n_horizons, j)?;
                for (h, v) in shifted.horizons.iter().zip(&shifted.quotients) {
                    rows.push(vec![j.to_string(), format!("{h:.9e}"), format!("{v:.9e}")]);
                }
                let dev = curve
                    .quotients
                    .iter()
                    .zip(&shifted.quotients)
                    .map(|(a, b)| (a - b).abs() / a.max(1e-300))
                    .fold(0.0, f64::max);
                covariance = Some(dev);
            }
            let cfg = json!({"cmd": "strichartz-scan", "d": d, "p": p, "m_max": m_max, "box_len": box_len, "n_s": n_s,
                "q": q, "r": r, "t_max": t_max, "n_t": n_t, "n_horizons": n_horizons, "seed": seed, "j": j});
            write_csv_artifact(&dir, "strichartz_scan.csv", &cfg, &["j", "horizon", "quotient"], &rows)?;
            let last = *curve.quotients.last().unwrap();
            println!(
                "strichartz-scan d={d} p={p} (q={q}, r={r}): quotient at T={t_max} is {last:.6e}{}",
                covariance
                    .map(|c| format!(", rescale deviation {c:.3e}"))
                    .unwrap_or_default()
            );
            Ok(true)
        }
        Cmd::SolveNls {
            d,
            p,
            alpha,
            mu,
            s,
            m_max,
            box_len,
            n_s,
            t_max,
            n_nodes,
            amp,
            seed,
            max_iter,
        } => {
            let group = HTypeGroup::build(d, p)?;
            let grid = SpectralGrid::design(&group, m_max, box_len, n_s)?;
            let raw = SphericalSpectrum::random_band_limited(&grid, m_max / 2, (n_s / 4) as u32, seed);
            let u0 = raw.scale(Complex64::new(amp / raw.plancherel_norm(), 0.0));
            // Exact-rational pair search, then float parameters for the solver.
            let a_ratio = htype_core::strichartz::parse_ratio_str(&format!("{alpha}"))?;
            let s_ratio = htype_core::strichartz::parse_ratio_str(&format!("{s}"))?;
            let (qe, re, pair) = find_admissible(d, p, a_ratio, s_ratio, None)?;
            let s_star = htype_core::strichartz::s_star(d, p, a_ratio)?;
            let params = NLSParams {
                alpha,
                mu,
                s,
                s_star: to_f64(s_star),
                q: qe.as_f64(),
                r: re.as_f64(),
                t_max,
                n_nodes,
                oversample: (alpha.ceil() as usize).max(2),
            };
            let path = picard_solve(&u0, &params, max_iter)?;
            let resid = fixed_point_residual(&u0, &path, &params)?;
            let drift = mass_drift(&path);
            let ok = path.converged && resid < 1e-8 && drift < 1e-6;
            let cfg = json!({"cmd": "solve-nls", "d": d, "p": p, "alpha": alpha, "mu": mu, "s": s,
                "m_max": m_max, "box_len": box_len, "n_s": n_s, "t_max": t_max, "n_nodes": n_nodes,
                "amp": amp, "seed": seed, "max_iter": max_iter, "q": qe.to_string(), "r": re.to_string()});
            write_json_artifact(
                &dir,
                "solve_nls.json",
                &cfg,
                &json!({
                    "pair": pair,
                    "params": params,
                    "diagnostics": path.diagnostics,
                    "converged": path.converged,
                    "fixed_point_residual": resid,
                    "mass_drift": drift,
                }),
            )?;
            std::fs::create_dir_all(&dir)?;
            write_spectrum(&dir.join("solve_nls_final.htspec"), path.states.last().unwrap())?;
            println!(
                "solve-nls d={d} p={p} alpha={alpha} (q={qe}, r={re}): converged={}, residual {resid:.3e}, mass drift {drift:.3e} -> {}",
                path.converged,
                if ok { "pass" } else { "FAIL" }
            );
            Ok(ok)
        }
        Cmd::Report { d, p } => {
            let mut results: Vec<(String, bool)> = Vec::new();
            let sub = |cmd: Cmd| Cli {
                out: Some(dir.clone()),
                cmd,
            };
            results.push((
                "group-check".into(),
                run(sub(Cmd::GroupCheck {
                    d,
                    p,
                    tol: 1e-12,
                    trials: 64,
                    seed: 7,
                }))?,
            ));
            results.push((
                "transform-roundtrip".into(),
                run(sub(Cmd::TransformRoundtrip {
                    d,
                    p,
                    m_max: 12,
                    box_len: 16.0,
                    n_s: 8,
                    tol: 1e-6,
                    seed: 11,
                }))?,
            ));
            results.push((
                "scaling-check".into(),
                run(sub(Cmd::ScalingCheck {
                    d,
                    p,
                    m_max: 8,
                    box_len: 16.0,
                    n_s: 8,
                    bands: vec![-1, 0, 1],
                    times: vec![0.25, 1.0],
                    tol: 1e-8,
                }))?,
            ));
            results.push((
                "transport-demo".into(),
                run(sub(Cmd::TransportDemo {
                    d: 1,
                    m0: 1,
                    box_len: 64.0,
                    n_s: 32,
                    t_max: 5.0,
                    n_t: 6,
                    drift_tol: 1e-6,
                    slope_tol: 0.01,
                }))?,
            ));
            results.push((
                "solve-nls".into(),
                run(sub(Cmd::SolveNls {
                    d,
                    p,
                    alpha: 3.0,
                    mu: 1.0,
                    s: 3.5,
                    m_max: 6,
                    box_len: 12.0,
                    n_s: 8,
                    t_max: 0.1,
                    n_nodes: 9,
                    amp: 0.05,
                    seed: 17,
                    max_iter: 12,
                }))?,
            ));
            let all = results.iter().all(|(_, ok)| *ok);
            let cfg = json!({"cmd": "report", "d": d, "p": p});
            write_json_artifact(
                &dir,
                "report.json",
                &cfg,
                &json!({
                    "results": results
                        .iter()
                        .map(|(n, ok)| json!({"probe": n, "pass": ok}))
                        .collect::<Vec<_>>(),
                    "all_pass": all,
                }),
            )?;
            println!(
                "report d={d} p={p}: {}/{} probes pass",
                results.iter().filter(|(_, ok)| *ok).count(),
                results.len()
            );
            Ok(all)
        }
    }
}

fn to_f64(r: num_rational::Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
