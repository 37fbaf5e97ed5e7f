//! Finite-difference oracle on a Euclidean grid over ℝ^{2d+p}: left-invariant
//! vector fields and the sublaplacian by second-order central stencils.
//!
//! This grid never participates in evolution; it exists to cross-check the
//! spectral multiplier calculus against an independent discretization of
//!   X_a = ∂_{z_a} + ½ Σ_k ⟨z, U^k e_a⟩ ∂_{η_k},   L = −Σ_a X_a².

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::HTypeGroup;

/// Which left-invariant field to apply: X_j and Y_j are the horizontal
/// fields along z-axes j and j+d; S_i is the center derivative ∂_{η_i}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    X(usize),
    Y(usize),
    S(usize),
}

/// A complex function sampled on a uniform cube grid over ℝ^{2d+p}, centered
/// at `center` with `n` points per axis and spacing `h`.
#[derive(Debug, Clone)]
pub struct EuclideanField {
    pub group: HTypeGroup,
    pub n: usize,
    pub h: f64,
    pub center: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl EuclideanField {
    /// Number of axes, 2d + p.
    pub fn dim(&self) -> usize {
        2 * self.group.d + self.group.p
    }

    /// Sample a closure f(z, η) on the grid.
    pub fn from_fn<F: Fn(&[f64], &[f64]) -> Complex64>(
        group: &HTypeGroup,
        n: usize,
        h: f64,
        center: &[f64],
        f: F,
    ) -> Self {
        let dim = 2 * group.d + group.p;
        assert_eq!(center.len(), dim);
        let total = n.pow(dim as u32);
        let mut values = Vec::with_capacity(total);
        let mut coords = vec![0.0f64; dim];
        for idx in 0..total {
            let mut rem = idx;
            for (a, c) in coords.iter_mut().enumerate() {
                let ai = rem % n;
                rem /= n;
                *c = center[a] + (ai as f64 - (n as f64 - 1.0) / 2.0) * h;
            }
            values.push(f(&coords[..2 * group.d], &coords[2 * group.d..]));
        }
        EuclideanField {
            group: group.clone(),
            n,
            h,
            center: center.to_vec(),
            values,
        }
    }

    /// Physical coordinates of a multi-index.
    pub fn coords(&self, multi: &[usize]) -> Vec<f64> {
        multi
            .iter()
            .enumerate()
            .map(|(a, &ai)| self.center[a] + (ai as f64 - (self.n as f64 - 1.0) / 2.0) * self.h)
            .collect()
    }

    fn flat(&self, multi: &[usize]) -> usize {
        multi
            .iter()
            .rev()
            .fold(0usize, |acc, &ai| acc * self.n + ai)
    }

    fn value(&self, multi: &[usize]) -> Complex64 {
        self.values[self.flat(multi)]
    }

    /// Central difference ∂/∂(axis) at `multi`.
    fn deriv(&self, axis: usize, multi: &[usize]) -> Result<Complex64> {
        let ai = multi[axis];
        if ai == 0 || ai + 1 >= self.n {
            return Err(Error::GridTooCoarse(format!(
                "central stencil leaves the grid along axis {axis}"
            )));
        }
        let mut up = multi.to_vec();
        let mut dn = multi.to_vec();
        up[axis] += 1;
        dn[axis] -= 1;
        Ok((self.value(&up) - self.value(&dn)) / (2.0 * self.h))
    }

    /// Apply a left-invariant field at a grid multi-index.
    pub fn vector_field_apply(&self, kind: FieldKind, multi: &[usize]) -> Result<Complex64> {
        let d = self.group.d;
        let p = self.group.p;
        match kind {
            FieldKind::S(i) => {
                if i >= p {
                    return Err(Error::DimensionMismatch {
                        expected: p,
                        got: i,
                        context: "center field index",
                    });
                }
                self.deriv(2 * d + i, multi)
            }
            FieldKind::X(j) | FieldKind::Y(j) => {
                let a = match kind {
                    FieldKind::X(_) => j,
                    _ => j + d,
                };
                if j >= d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        got: j,
                        context: "horizontal field index",
                    });
                }
                let coords = self.coords(multi);
                let z = &coords[..2 * d];
                let mut acc = self.deriv(a, multi)?;
                for k in 0..p {
                    // ⟨z, U^k e_a⟩ = Σ_l z_l U^k_{l,a}.
                    let c: f64 = (0..2 * d)
                        .map(|l| z[l] * self.group.u[k].get(l, a))
                        .sum();
                    if c != 0.0 {
                        acc += 0.5 * c * self.deriv(2 * d + k, multi)?;
                    }
                }
                Ok(acc)
            }
        }
    }

    /// Sublaplacian −Σ_a (X_a² + Y_a²) by composing two central-difference
    /// field applications (second-order in h).
    pub fn sublaplacian_fd(&self, multi: &[usize]) -> Result<Complex64> {
        let d = self.group.d;
        let mut acc = Complex64::default();
        for j in 0..d {
            for kind in [FieldKind::X(j), FieldKind::Y(j)] {
                acc += self.second_application(kind, multi)?;
            }
        }
        Ok(-acc)
    }

    /// (V² F)(multi) where V is a horizontal field: apply V to the sampled
    /// function V F, itself evaluated on the stencil neighbors.
    fn second_application(&self, kind: FieldKind, multi: &[usize]) -> Result<Complex64> {
        let d = self.group.d;
        let p = self.group.p;
        let a = match kind {
            FieldKind::X(j) => j,
            FieldKind::Y(j) => j + d,
            FieldKind::S(i) => 2 * d + i,
        };
        // Inner derivative as a local function of the multi-index.
        let inner = |m: &[usize]| self.vector_field_apply(kind, m);
        // Outer derivative along z_a.
        let ai = multi[a];
        if ai == 0 || ai + 1 >= self.n {
            return Err(Error::GridTooCoarse(
                "outer stencil leaves the grid".to_string(),
            ));
        }
        let mut up = multi.to_vec();
        let mut dn = multi.to_vec();
        up[a] += 1;
        dn[a] -= 1;
        let mut acc = (inner(&up)? - inner(&dn)?) / (2.0 * self.h);
        if let FieldKind::S(_) = kind {
            return Ok(acc);
        }
        // Outer η-derivatives with the z-dependent coefficients.
        let coords = self.coords(multi);
        let z = &coords[..2 * d];
        for k in 0..p {
            let c: f64 = (0..2 * d)
                .map(|l| z[l] * self.group.u[k].get(l, a))
                .sum();
            if c != 0.0 {
                let mut upk = multi.to_vec();
                let mut dnk = multi.to_vec();
                if multi[2 * d + k] == 0 || multi[2 * d + k] + 1 >= self.n {
                    return Err(Error::GridTooCoarse(
                        "outer center stencil leaves the grid".to_string(),
                    ));
                }
                upk[2 * d + k] += 1;
                dnk[2 * d + k] -= 1;
                acc += 0.5 * c * (inner(&upk)? - inner(&dnk)?) / (2.0 * self.h);
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn center_derivative_of_coordinate_is_one() {
        let g = HTypeGroup::build(1, 1).unwrap();
        let f = EuclideanField::from_fn(&g, 7, 0.1, &[0.2, -0.1, 0.3], |_z, eta| {
            Complex64::new(eta[0], 0.0)
        });
        let mid = vec![3usize, 3, 3];
        let v = f.vector_field_apply(FieldKind::S(0), &mid).unwrap();
        assert!((v.re - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn horizontal_field_on_its_coordinate_is_one() {
        let g = HTypeGroup::build(1, 1).unwrap();
        let f = EuclideanField::from_fn(&g, 7, 0.1, &[0.5, 0.4, -0.2], |z, _| {
            Complex64::new(z[0], 0.0)
        });
        let mid = vec![3usize, 3, 3];
        let v = f.vector_field_apply(FieldKind::X(0), &mid).unwrap();
        assert!((v.re - 1.0).abs() <= 1e-12);
        let fy = EuclideanField::from_fn(&g, 7, 0.1, &[0.5, 0.4, -0.2], |z, _| {
            Complex64::new(z[1], 0.0)
        });
        let vy = fy.vector_field_apply(FieldKind::Y(0), &mid).unwrap();
        assert!((vy.re - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn stencil_bounds_reported() {
        let g = HTypeGroup::build(1, 1).unwrap();
        let f = EuclideanField::from_fn(&g, 5, 0.1, &[0.0; 3], |_, _| Complex64::default());
        assert!(matches!(
            f.vector_field_apply(FieldKind::X(0), &[0, 2, 2]),
            Err(Error::GridTooCoarse(_))
        ));
    }

    #[test]
    fn sublaplacian_of_constant_is_zero_and_of_zsq_is_minus_4d() {
        for (d, p) in [(1usize, 1usize), (2, 2)] {
            let g = HTypeGroup::build(d, p).unwrap();
            let dim = 2 * d + p;
            let center: Vec<f64> = (0..dim).map(|i| 0.1 * i as f64).collect();
            let constant =
                EuclideanField::from_fn(&g, 5, 0.05, &center, |_, _| Complex64::new(3.0, -1.0));
            let mid = vec![2usize; dim];
            assert!(constant.sublaplacian_fd(&mid).unwrap().norm() <= 1e-10);
            let zsq = EuclideanField::from_fn(&g, 5, 0.05, &center, |z, _| {
                Complex64::new(z.iter().map(|a| a * a).sum(), 0.0)
            });
            let v = zsq.sublaplacian_fd(&mid).unwrap();
            assert!(
                (v.re + 4.0 * d as f64).abs() <= 1e-8,
                "(d,p)=({d},{p}): got {v}"
            );
        }
    }

    #[test]
    fn left_invariance_of_horizontal_fields() {
        // (X_j F)(g0 ∘ g) = X_j (F ∘ L_{g0})(g) for smooth F, to O(h²):
        // evaluate both sides with local stencils centered at the two
        // chained points.
        let g = HTypeGroup::build(1, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let smooth = |z: &[f64], eta: &[f64]| {
            let q = z[0] * 0.7 - z[1] * 0.4 + eta[0] * 0.9;
            let r2: f64 = z.iter().map(|a| a * a).sum::<f64>() + eta[0] * eta[0];
            Complex64::new((-r2 / 8.0).exp() * q.cos(), (-r2 / 10.0).exp() * q.sin())
        };
        for _ in 0..10 {
            let g0 = crate::group::GroupPoint::new(
                vec![rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)],
                vec![rng.gen_range(-0.5..0.5)],
            );
            let gp = crate::group::GroupPoint::new(
                vec![rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)],
                vec![rng.gen_range(-0.5..0.5)],
            );
            let g0g = g.mul(&g0, &gp).unwrap();
            let lhs_of_h = |h: f64| {
                let center = [g0g.z[0], g0g.z[1], g0g.eta[0]];
                let f = EuclideanField::from_fn(&g, 5, h, &center, smooth);
                f.vector_field_apply(FieldKind::X(0), &[2, 2, 2]).unwrap()
            };
            let rhs_of_h = |h: f64| {
                let center = [gp.z[0], gp.z[1], gp.eta[0]];
                let g0c = g0.clone();
                let grp = g.clone();
                let composed = move |z: &[f64], eta: &[f64]| {
                    let pt = crate::group::GroupPoint::new(z.to_vec(), eta.to_vec());
                    let moved = grp.mul(&g0c, &pt).unwrap();
                    smooth(&moved.z, &moved.eta)
                };
                let f = EuclideanField::from_fn(&g, 5, h, &center, composed);
                f.vector_field_apply(FieldKind::X(0), &[2, 2, 2]).unwrap()
            };
            let h = 1e-3;
            let diff = (lhs_of_h(h) - rhs_of_h(h)).norm();
            assert!(diff <= 1e-5, "left-invariance violated: {diff:.3e}");
        }
    }

    #[test]
    fn second_order_convergence_of_sublaplacian() {
        let g = HTypeGroup::build(1, 1).unwrap();
        let smooth = |z: &[f64], eta: &[f64]| {
            let r2: f64 = z.iter().map(|a| a * a).sum::<f64>();
            Complex64::new((-r2 / 2.0 - eta[0] * eta[0] / 3.0).exp(), 0.0)
        };
        let center = [0.4, -0.3, 0.2];
        let lap = |h: f64| {
            let f = EuclideanField::from_fn(&g, 7, h, &center, smooth);
            f.sublaplacian_fd(&[3, 3, 3]).unwrap()
        };
        let coarse = lap(0.08);
        let fine = lap(0.04);
        let finest = lap(0.02);
        let e1 = (coarse - finest).norm();
        let e2 = (fine - finest).norm();
        // Halving h should shrink the error ≈ 4× (Richardson ratio ≈ 4/1
        // against the much finer reference, i.e. e1/e2 ∈ [3, 5.5]).
        let ratio = e1 / e2;
        assert!((3.0..=5.5).contains(&ratio), "convergence ratio {ratio}");
    }
}
