//! Admissible time/space exponent pairs, scaling losses, and critical
//! regularity arithmetic — all in exact rationals with an explicit ∞ — plus
//! the truncated Strichartz-quotient estimator for the homogeneous estimate.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::calculus::rescale_dyadic;
use crate::error::{Error, Result};
use crate::field::SphericalSpectrum;

/// An exponent in [1, ∞]: exact rational or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exponent {
    Finite(Ratio<i64>),
    Infinity,
}

impl Exponent {
    pub fn int(n: i64) -> Self {
        Exponent::Finite(Ratio::from_integer(n))
    }

    pub fn frac(num: i64, den: i64) -> Self {
        Exponent::Finite(Ratio::new(num, den))
    }

    /// 1/q, with 1/∞ = 0 — always finite.
    pub fn recip(&self) -> Ratio<i64> {
        match self {
            Exponent::Finite(v) => v.recip(),
            Exponent::Infinity => Ratio::from_integer(0),
        }
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            Exponent::Finite(v) => *v.numer() as f64 / *v.denom() as f64,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    /// Hölder conjugate: 1/q + 1/q′ = 1.
    pub fn conjugate(&self) -> Result<Exponent> {
        match self {
            Exponent::Infinity => Ok(Exponent::int(1)),
            Exponent::Finite(v) => {
                if *v == Ratio::from_integer(1) {
                    Ok(Exponent::Infinity)
                } else {
                    Ok(Exponent::Finite((*v / (*v - 1)).reduced()))
                }
            }
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Infinity => write!(f, "inf"),
            Exponent::Finite(v) => {
                if v.is_integer() {
                    write!(f, "{}", v.numer())
                } else {
                    write!(f, "{}/{}", v.numer(), v.denom())
                }
            }
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") || t == "∞" {
            return Ok(Exponent::Infinity);
        }
        if let Some((a, b)) = t.split_once('/') {
            let num: i64 = a
                .trim()
                .parse()
                .map_err(|_| Error::OutOfRange(format!("cannot parse exponent '{s}'")))?;
            let den: i64 = b
                .trim()
                .parse()
                .map_err(|_| Error::OutOfRange(format!("cannot parse exponent '{s}'")))?;
            if den == 0 {
                return Err(Error::OutOfRange(format!("zero denominator in '{s}'")));
            }
            return Ok(Exponent::Finite(Ratio::new(num, den)));
        }
        let v: i64 = t
            .parse()
            .map_err(|_| Error::OutOfRange(format!("cannot parse exponent '{s}'")))?;
        Ok(Exponent::int(v))
    }
}

/// A classified (q, r) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissiblePair {
    pub q: String,
    pub r: String,
    pub admissible: bool,
    pub endpoint: bool,
    /// Scaling loss σ = N(1/2 − 1/r) − 2/q as an exact rational string,
    /// present when a homogeneous dimension was supplied.
    pub sigma: Option<String>,
}

fn ratio_string(v: Ratio<i64>) -> String {
    if v.is_integer() {
        format!("{}", v.numer())
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

fn check_range(e: Exponent, name: &str) -> Result<()> {
    if let Exponent::Finite(v) = e {
        if v < Ratio::from_integer(2) {
            return Err(Error::OutOfRange(format!(
                "{name} = {} is below 2",
                Exponent::Finite(v)
            )));
        }
    }
    Ok(())
}

/// Classify (q, r) against the p-dependent admissibility condition
/// 2/q ≤ (p − 1)(1/2 − 1/r), with (2, ∞) excluded at p = 3 and the endpoint
/// (2, 2(p−1)/(p−3)) flagged for p > 3.
pub fn classify_pair(q: Exponent, r: Exponent, p: usize) -> Result<AdmissiblePair> {
    if q.is_infinite() && r.is_infinite() {
        return Err(Error::BothInfinite);
    }
    check_range(q, "q")?;
    check_range(r, "r")?;
    let half = Ratio::new(1i64, 2);
    let lhs = Ratio::from_integer(2) * q.recip();
    let rhs = Ratio::from_integer(p as i64 - 1) * (half - r.recip());
    let excluded = q == Exponent::int(2) && r.is_infinite() && p == 3;
    let admissible = lhs <= rhs && !excluded;
    let endpoint = p > 3
        && q == Exponent::int(2)
        && r == Exponent::Finite(Ratio::new(2 * (p as i64 - 1), p as i64 - 3));
    Ok(AdmissiblePair {
        q: q.to_string(),
        r: r.to_string(),
        admissible,
        endpoint,
        sigma: None,
    })
}

/// Scaling loss σ = N(1/2 − 1/r) − 2/q forced by dilation invariance.
pub fn scaling_sigma(q: Exponent, r: Exponent, n_hom: usize) -> Result<Ratio<i64>> {
    check_range(q, "q")?;
    check_range(r, "r")?;
    let half = Ratio::new(1i64, 2);
    Ok(Ratio::from_integer(n_hom as i64) * (half - r.recip()) - Ratio::from_integer(2) * q.recip())
}

/// Which term attains s_* = max{(N−p+1)/2, (N−2)/2, s_c}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CriticalBranch {
    /// (N − p + 1)/2 — the dispersive-loss threshold.
    DispersiveLoss,
    /// (N − 2)/2 — the frequency-split threshold.
    FrequencySplit,
    /// s_c = N/2 − 2/(α − 1) — scaling-critical regularity.
    ScalingCritical,
}

/// Critical-regularity report for (d, p, α).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentReport {
    pub d: usize,
    pub p: usize,
    pub alpha: String,
    pub n_hom: usize,
    pub s_c: String,
    pub s_star: String,
    pub branch: CriticalBranch,
}

/// Exact critical exponents: s_c = N/2 − 2/(α−1) and
/// s_* = max{(N−p+1)/2, (N−2)/2, s_c}.
pub fn critical_exponents(d: usize, p: usize, alpha: Ratio<i64>) -> Result<ExponentReport> {
    if alpha <= Ratio::from_integer(1) {
        return Err(Error::InvalidAlpha(
            *alpha.numer() as f64 / *alpha.denom() as f64,
        ));
    }
    let n = 2 * d + 2 * p;
    let n_r = Ratio::from_integer(n as i64);
    let s_c = n_r / 2 - Ratio::from_integer(2) / (alpha - 1);
    let a1 = Ratio::new(n as i64 - p as i64 + 1, 2);
    let a2 = Ratio::new(n as i64 - 2, 2);
    let (s_star, branch) = [
        (a1, CriticalBranch::DispersiveLoss),
        (a2, CriticalBranch::FrequencySplit),
        (s_c, CriticalBranch::ScalingCritical),
    ]
    .into_iter()
    .max_by(|(a, _), (b, _)| a.cmp(b))
    .unwrap();
    Ok(ExponentReport {
        d,
        p,
        alpha: ratio_string(alpha),
        n_hom: n,
        s_c: ratio_string(s_c),
        s_star: ratio_string(s_star),
        branch,
    })
}

/// Internal exact value of s_* for (d, p, α).
pub fn s_star(d: usize, p: usize, alpha: Ratio<i64>) -> Result<Ratio<i64>> {
    let rep = critical_exponents(d, p, alpha)?;
    Ok(parse_ratio(&rep.s_star))
}

fn parse_ratio(s: &str) -> Ratio<i64> {
    match s.split_once('/') {
        Some((a, b)) => Ratio::new(a.parse().unwrap(), b.parse().unwrap()),
        None => Ratio::from_integer(s.parse().unwrap()),
    }
}

/// Parse an exact rational from "7/3", "3", or a terminating decimal "3.5".
pub fn parse_ratio_str(s: &str) -> Result<Ratio<i64>> {
    let t = s.trim();
    let bad = || Error::OutOfRange(format!("cannot parse rational '{s}'"));
    if let Some((a, b)) = t.split_once('/') {
        let num: i64 = a.trim().parse().map_err(|_| bad())?;
        let den: i64 = b.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(Error::OutOfRange(format!("zero denominator in '{s}'")));
        }
        return Ok(Ratio::new(num, den));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let digits = frac.trim_end_matches('0');
        let scale = 10i64
            .checked_pow(digits.len() as u32)
            .ok_or_else(bad)?;
        let whole: i64 = if int.is_empty() || int == "-" {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let fpart: i64 = if digits.is_empty() {
            0
        } else {
            digits.parse().map_err(|_| bad())?
        };
        let sign = if t.starts_with('-') { -1 } else { 1 };
        return Ok(Ratio::new(whole.abs() * scale + fpart, scale) * sign);
    }
    Ok(Ratio::from_integer(t.parse().map_err(|_| bad())?))
}

/// The admissible pair used by the well-posedness construction at
/// regularity s: the explicit subcritical formulas
///   q = 4/(N − 2s + 2δ),  r = N/(s − s_* − δ)
/// for s_* < s < N/2 with 0 < δ < s − s_*, or the critical lookup at
/// s = s_*, δ = 0. Either way σ(q, r) = s_* exactly.
pub fn find_admissible(
    d: usize,
    p: usize,
    alpha: Ratio<i64>,
    s: Ratio<i64>,
    delta: Option<Ratio<i64>>,
) -> Result<(Exponent, Exponent, AdmissiblePair)> {
    let n = 2 * d + 2 * p;
    let n_r = Ratio::from_integer(n as i64);
    let rep = critical_exponents(d, p, alpha)?;
    let sstar = parse_ratio(&rep.s_star);
    let zero = Ratio::from_integer(0);

    let (q, r): (Exponent, Exponent) = if s == sstar && delta.unwrap_or(zero) == zero {
        // Critical routing.
        if p == 3 && alpha <= Ratio::from_integer(3) {
            // s_* = (N−2)/2 with p = 3: the required pair would be the
            // excluded (2, ∞, 3); no admissible pair has σ = s_*.
            return Err(Error::NoPair(format!(
                "p = 3 with alpha = {} forces sigma = (N-2)/2, attained only by the excluded pair (2, inf)",
                rep.alpha
            )));
        } else if p == 2 && alpha < Ratio::from_integer(5) {
            (Exponent::int(4), Exponent::Infinity)
        } else if p > 3 && alpha < Ratio::from_integer(3) {
            (Exponent::int(2), Exponent::Infinity)
        } else {
            // Scaling-critical branch: q = α − 1 (finite), r = ∞.
            let qa = alpha - 1;
            if qa < Ratio::from_integer(2) {
                return Err(Error::NoPair(format!(
                    "critical pair (alpha-1, inf) needs alpha >= 3, got alpha = {}",
                    rep.alpha
                )));
            }
            (Exponent::Finite(qa), Exponent::Infinity)
        }
    } else {
        // Subcritical window.
        if !(s > sstar && s < n_r / 2) {
            return Err(Error::NoPair(format!(
                "regularity s = {} outside the window s_* = {} < s < N/2 = {}",
                ratio_string(s),
                rep.s_star,
                ratio_string(n_r / 2)
            )));
        }
        let delta = delta.unwrap_or((s - sstar) / 2);
        if !(delta > zero && delta < s - sstar) {
            return Err(Error::NoPair(format!(
                "delta = {} outside (0, s - s_*)",
                ratio_string(delta)
            )));
        }
        let q = Ratio::from_integer(4) / (n_r - s * 2 + delta * 2);
        let r = n_r / (s - sstar - delta);
        (Exponent::Finite(q), Exponent::Finite(r))
    };

    let mut pair = classify_pair(q, r, p)?;
    if !pair.admissible || pair.endpoint {
        return Err(Error::NoPair(format!(
            "constructed pair ({q}, {r}) is not non-endpoint admissible for p = {p}"
        )));
    }
    let sigma = scaling_sigma(q, r, n)?;
    debug_assert_eq!(sigma, sstar, "scaling loss must equal s_* exactly");
    // Subcritical postconditions: q > α − 1 and s − s_* > N/r.
    if s > sstar {
        if let Exponent::Finite(qv) = q {
            if qv <= alpha - 1 {
                return Err(Error::NoPair(format!(
                    "constructed q = {q} does not exceed alpha - 1"
                )));
            }
        }
        if s - sstar <= n_r * r.recip() {
            return Err(Error::NoPair(
                "regularity margin s - s_* does not exceed N/r".to_string(),
            ));
        }
    }
    pair.sigma = Some(ratio_string(sigma));
    Ok((q, r, pair))
}

/// Truncated Strichartz quotient and its saturation curve.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuotientCurve {
    /// Increasing truncation horizons.
    pub horizons: Vec<f64>,
    /// Quotient ‖e^{itL}u₀‖_{L^q([−T,T];L^r)} / ‖u₀‖_{Ḣ^σ} per horizon.
    pub quotients: Vec<f64>,
    pub sigma: f64,
}

/// Estimate the homogeneous Strichartz quotient for u₀ on each horizon of a
/// doubling ladder ending at T. The time integral is a trapezoid rule on
/// n_t uniform nodes per side of [−T, T]; horizons are read off at node
/// prefixes so the whole curve costs one sweep.
pub fn strichartz_quotient(
    u0: &SphericalSpectrum,
    q: Exponent,
    r: Exponent,
    t_max: f64,
    n_t: usize,
    n_horizons: usize,
) -> Result<QuotientCurve> {
    let p = u0.grid.group.p;
    let pair = classify_pair(q, r, p)?;
    if !pair.admissible || pair.endpoint {
        return Err(Error::NotAdmissible {
            q: q.to_string(),
            r: r.to_string(),
            p,
        });
    }
    let n_hom = u0.grid.group.n_hom;
    let sigma_exact = scaling_sigma(q, r, n_hom)?;
    let sigma = *sigma_exact.numer() as f64 / *sigma_exact.denom() as f64;
    let denom = crate::calculus::sobolev_norm(u0, sigma, 2.0, true);
    if denom == 0.0 {
        return Err(Error::ZeroData(
            "Strichartz quotient needs nonzero data".to_string(),
        ));
    }
    let rf = r.as_f64();
    // ‖u(t)‖_{L^r} at the uniform nodes 0, h, 2h, …, T (negative side by a
    // second pass).
    let h = t_max / n_t as f64;
    let norm_at = |t: f64| -> f64 {
        crate::calculus::propagator(u0, t)
            .inverse_transform()
            .lr_norm(rf)
    };
    let pos: Vec<f64> = (0..=n_t).map(|k| norm_at(k as f64 * h)).collect();
    let neg: Vec<f64> = (0..=n_t).map(|k| norm_at(-(k as f64) * h)).collect();

    let qf = q.as_f64();
    let mut horizons = Vec::new();
    let mut quotients = Vec::new();
    let mut cut = n_t;
    let mut ladder = Vec::new();
    for _ in 0..n_horizons {
        ladder.push(cut);
        cut = (cut / 2).max(1);
    }
    ladder.reverse();
    for &k_max in &ladder {
        let horizon = k_max as f64 * h;
        let value = if q.is_infinite() {
            pos[..=k_max]
                .iter()
                .chain(&neg[..=k_max])
                .fold(0.0f64, |a, &b| a.max(b))
        } else {
            // Trapezoid of ‖u‖_r^q over [−T, T].
            let sum_side = |side: &[f64]| -> f64 {
                let mut acc = 0.0;
                for k in 0..k_max {
                    acc += 0.5 * h * (side[k].powf(qf) + side[k + 1].powf(qf));
                }
                acc
            };
            (sum_side(&pos) + sum_side(&neg)).powf(1.0 / qf)
        };
        horizons.push(horizon);
        quotients.push(value / denom);
    }
    Ok(QuotientCurve {
        horizons,
        quotients,
        sigma,
    })
}

/// Convenience: dilation-paired quotient for the invariance check —
/// the same ladder evaluated on u₀(δ_{2^j}·) with horizons 2^{−2j} T.
pub fn strichartz_quotient_rescaled(
    u0: &SphericalSpectrum,
    q: Exponent,
    r: Exponent,
    t_max: f64,
    n_t: usize,
    n_horizons: usize,
    j: i32,
) -> Result<QuotientCurve> {
    let scaled = rescale_dyadic(u0, j);
    let t_scaled = 2.0f64.powi(-2 * j) * t_max;
    strichartz_quotient(&scaled, q, r, t_scaled, n_t, n_horizons)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Ratio<i64> {
        Ratio::new(n, d)
    }

    #[test]
    fn exponent_parsing_and_display() {
        assert_eq!("inf".parse::<Exponent>().unwrap(), Exponent::Infinity);
        assert_eq!("4".parse::<Exponent>().unwrap(), Exponent::int(4));
        assert_eq!("8/3".parse::<Exponent>().unwrap(), Exponent::frac(8, 3));
        assert_eq!(Exponent::frac(8, 3).to_string(), "8/3");
        assert_eq!(Exponent::Infinity.to_string(), "inf");
        assert_eq!(Exponent::int(1).conjugate().unwrap(), Exponent::Infinity);
        assert_eq!(
            Exponent::frac(4, 3).conjugate().unwrap(),
            Exponent::int(4)
        );
    }

    #[test]
    fn classification_branches() {
        // The excluded pair at p = 3.
        let c = classify_pair(Exponent::int(2), Exponent::Infinity, 3).unwrap();
        assert!(!c.admissible);
        // (∞, 2) always admissible.
        for p in [2usize, 3, 4, 7] {
            let c = classify_pair(Exponent::Infinity, Exponent::int(2), p).unwrap();
            assert!(c.admissible && !c.endpoint);
        }
        // Endpoint at p = 4: (2, 6).
        let c = classify_pair(Exponent::int(2), Exponent::int(6), 4).unwrap();
        assert!(c.admissible && c.endpoint);
        // (4, ∞) admissible at p = 2.
        let c = classify_pair(Exponent::int(4), Exponent::Infinity, 2).unwrap();
        assert!(c.admissible && !c.endpoint);
        // Strictly inadmissible: (2, ∞) at p = 2 (1 > 1/2).
        let c = classify_pair(Exponent::int(2), Exponent::Infinity, 2).unwrap();
        assert!(!c.admissible);
        // Errors.
        assert!(matches!(
            classify_pair(Exponent::Infinity, Exponent::Infinity, 2),
            Err(Error::BothInfinite)
        ));
        assert!(matches!(
            classify_pair(Exponent::int(1), Exponent::int(2), 2),
            Err(Error::OutOfRange(_))
        ));
    }

    #[test]
    fn sigma_values() {
        assert_eq!(
            scaling_sigma(Exponent::Infinity, Exponent::int(2), 8).unwrap(),
            Ratio::from_integer(0)
        );
        // (2, ∞): σ = (N − 2)/2.
        assert_eq!(
            scaling_sigma(Exponent::int(2), Exponent::Infinity, 10).unwrap(),
            rat(4, 1)
        );
        // (4, ∞): σ = (N − 1)/2.
        assert_eq!(
            scaling_sigma(Exponent::int(4), Exponent::Infinity, 8).unwrap(),
            rat(7, 2)
        );
    }

    #[test]
    fn critical_exponent_reports() {
        // p = 2, d = 2, α = 2: N = 8, s_* = (N−1)/2 = 7/2.
        let r = critical_exponents(2, 2, rat(2, 1)).unwrap();
        assert_eq!(r.n_hom, 8);
        assert_eq!(r.s_star, "7/2");
        assert_eq!(r.branch, CriticalBranch::DispersiveLoss);
        // p = 3, d = 2, α = 2: N = 10, s_* = 4 on the frequency-split branch.
        let r = critical_exponents(2, 3, rat(2, 1)).unwrap();
        assert_eq!(r.s_star, "4");
        assert_eq!(r.branch, CriticalBranch::FrequencySplit);
        // p = 2, d = 2, α = 5: s_c = 7/2 = s_*.
        let r = critical_exponents(2, 2, rat(5, 1)).unwrap();
        assert_eq!(r.s_c, "7/2");
        assert_eq!(r.s_star, "7/2");
        assert!(matches!(critical_exponents(2, 2, rat(1, 1)), Err(Error::InvalidAlpha(_))));
    }

    #[test]
    fn find_admissible_subcritical_formula() {
        // d=2, p=2, α=2, s=3.8, δ=0.1: q = 20/3, r = 40, σ = 7/2.
        let (q, r, pair) =
            find_admissible(2, 2, rat(2, 1), rat(19, 5), Some(rat(1, 10))).unwrap();
        assert_eq!(q, Exponent::frac(20, 3));
        assert_eq!(r, Exponent::int(40));
        assert_eq!(pair.sigma.as_deref(), Some("7/2"));
        assert!(pair.admissible && !pair.endpoint);
    }

    #[test]
    fn find_admissible_critical_routes() {
        // s = s_*, p = 2, α = 2 → (4, ∞).
        let s = s_star(2, 2, rat(2, 1)).unwrap();
        let (q, r, _) = find_admissible(2, 2, rat(2, 1), s, None).unwrap();
        assert_eq!((q, r), (Exponent::int(4), Exponent::Infinity));
        // s = s_* = s_c, p = 4, α = 3 → (α − 1, ∞) = (2, ∞).
        let s = s_star(1, 4, rat(3, 1)).unwrap();
        let (q, r, _) = find_admissible(1, 4, rat(3, 1), s, None).unwrap();
        assert_eq!((q, r), (Exponent::int(2), Exponent::Infinity));
        // p = 3, α = 3, s = (N−2)/2 → no pair.
        let s = s_star(2, 3, rat(3, 1)).unwrap();
        assert!(matches!(
            find_admissible(2, 3, rat(3, 1), s, None),
            Err(Error::NoPair(_))
        ));
        // p = 2, α = 5 (critical branch): (4, ∞) via q = α − 1.
        let s = s_star(2, 2, rat(5, 1)).unwrap();
        let (q, r, _) = find_admissible(2, 2, rat(5, 1), s, None).unwrap();
        assert_eq!((q, r), (Exponent::int(4), Exponent::Infinity));
    }

    #[test]
    fn find_admissible_rejects_bad_windows() {
        assert!(matches!(
            find_admissible(2, 2, rat(2, 1), rat(9, 2), None),
            Err(Error::NoPair(_))
        )); // s ≥ N/2
        assert!(matches!(
            find_admissible(2, 2, rat(2, 1), rat(3, 1), None),
            Err(Error::NoPair(_))
        )); // s ≤ s_*
        assert!(matches!(
            find_admissible(2, 2, rat(2, 1), rat(19, 5), Some(rat(1, 1))),
            Err(Error::NoPair(_))
        )); // δ too large
    }
}
