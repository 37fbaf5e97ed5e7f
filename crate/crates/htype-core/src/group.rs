//! H-type groups ℍ^d_p: construction of the defining skew-symmetric,
//! orthogonal, pairwise-anticommuting matrices U^j, the group law, inverses,
//! and anisotropic dilations.
//!
//! A point is a pair (z, η) with z ∈ ℝ^{2d} (horizontal) and η ∈ ℝ^p
//! (center). The product is
//!   (z, η) ∘ (z′, η′) = (z + z′, η + η′ + ½ [z, z′]),
//! where the bracket component [z, z′]_j = ⟨z, U^j z′⟩ is bilinear and
//! antisymmetric. Dilations act by δ_λ(z, η) = (λ z, λ² η) and scale Haar
//! measure by λ^N with homogeneous dimension N = 2d + 2p.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dimension of the irreducible real Clifford module admitting `p`
/// anticommuting complex-structure generators (Radon–Hurwitz pattern:
/// 2, 4, 4, 8, 8, 8, 8, 16 for p = 1..8, then repeating with a factor 16
/// per period of 8).
pub fn clifford_module_dim(p: usize) -> usize {
    assert!(p >= 1);
    let base = [2usize, 4, 4, 8, 8, 8, 8, 16];
    let q = (p - 1) / 8;
    base[(p - 1) % 8] * 16usize.pow(q as u32)
}

/// A dense row-major square matrix just large enough for the U^j blocks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareMatrix {
    pub n: usize,
    /// Row-major entries, length n².
    pub entries: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        SquareMatrix {
            n,
            entries: vec![0.0; n * n],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.n + j] = v;
    }

    /// Matrix-vector product.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    /// A ∘ B.
    pub fn matmul(&self, other: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.n, other.n);
        let mut out = SquareMatrix::zeros(self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                let a = self.get(i, k);
                if a != 0.0 {
                    for j in 0..self.n {
                        out.entries[i * self.n + j] += a * other.get(k, j);
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> SquareMatrix {
        let mut out = SquareMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }
}

/// Block-diagonal replication of `block` to size `n` (n a multiple of
/// `block.n`).
fn block_diag_replicate(block: &SquareMatrix, n: usize) -> SquareMatrix {
    assert_eq!(n % block.n, 0);
    let mut out = SquareMatrix::zeros(n);
    let b = block.n;
    for off in (0..n).step_by(b) {
        for i in 0..b {
            for j in 0..b {
                out.set(off + i, off + j, block.get(i, j));
            }
        }
    }
    out
}

fn mat2(rows: [[f64; 2]; 2]) -> SquareMatrix {
    SquareMatrix {
        n: 2,
        entries: rows.iter().flatten().copied().collect(),
    }
}

fn mat4(rows: [[f64; 4]; 4]) -> SquareMatrix {
    SquareMatrix {
        n: 4,
        entries: rows.iter().flatten().copied().collect(),
    }
}

/// The fixed deterministic generator blocks: a single rotation for p = 1,
/// and the quaternion left-multiplication triple (by i, j, k) on ℝ⁴ for
/// p ∈ {2, 3}. Each block is skew-symmetric, orthogonal, and the blocks
/// pairwise anticommute.
fn clifford_generators(p: usize) -> Result<Vec<SquareMatrix>> {
    match p {
        1 => Ok(vec![mat2([[0.0, 1.0], [-1.0, 0.0]])]),
        2 | 3 => {
            let li = mat4([
                [0.0, -1.0, 0.0, 0.0],
                [1.0, 0.0, 0.0, 0.0],
                [0.0, 0.0, 0.0, -1.0],
                [0.0, 0.0, 1.0, 0.0],
            ]);
            let lj = mat4([
                [0.0, 0.0, -1.0, 0.0],
                [0.0, 0.0, 0.0, 1.0],
                [1.0, 0.0, 0.0, 0.0],
                [0.0, -1.0, 0.0, 0.0],
            ]);
            let lk = mat4([
                [0.0, 0.0, 0.0, -1.0],
                [0.0, 0.0, -1.0, 0.0],
                [0.0, 1.0, 0.0, 0.0],
                [1.0, 0.0, 0.0, 0.0],
            ]);
            Ok(vec![li, lj, lk].into_iter().take(p).collect())
        }
        _ => Err(Error::NoCliffordModule {
            two_d: 0,
            p,
            module_dim: clifford_module_dim(p),
        }),
    }
}

/// A point (z, η) of an H-type group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupPoint {
    /// Horizontal component, length 2d.
    pub z: Vec<f64>,
    /// Center component, length p.
    pub eta: Vec<f64>,
}

impl GroupPoint {
    pub fn new(z: Vec<f64>, eta: Vec<f64>) -> Self {
        GroupPoint { z, eta }
    }
}

/// The group ℍ^d_p together with its defining matrices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HTypeGroup {
    /// Half the horizontal dimension.
    pub d: usize,
    /// Center dimension.
    pub p: usize,
    /// The p skew-symmetric, orthogonal, pairwise-anticommuting 2d×2d
    /// matrices.
    pub u: Vec<SquareMatrix>,
    /// Homogeneous dimension N = 2d + 2p.
    pub n_hom: usize,
    /// Generator convention tag for serialized descriptors.
    pub convention: String,
}

impl HTypeGroup {
    /// Build ℍ^d_p from the fixed Clifford generator blocks.
    ///
    /// Requires d ≥ 1, p ≥ 1, p + 1 ≤ 2d, and 2d a multiple of the
    /// irreducible module dimension for p generators.
    pub fn build(d: usize, p: usize) -> Result<Self> {
        if d < 1 || p < 1 {
            return Err(Error::ConfigInvalid(format!(
                "require d >= 1 and p >= 1, got d = {d}, p = {p}"
            )));
        }
        if p + 1 > 2 * d {
            return Err(Error::DimensionConstraint {
                p_plus_one: p + 1,
                two_d: 2 * d,
            });
        }
        let module_dim = clifford_module_dim(p);
        if 2 * d % module_dim != 0 {
            return Err(Error::NoCliffordModule {
                two_d: 2 * d,
                p,
                module_dim,
            });
        }
        let blocks = clifford_generators(p).map_err(|e| match e {
            Error::NoCliffordModule { module_dim, .. } => Error::NoCliffordModule {
                two_d: 2 * d,
                p,
                module_dim,
            },
            other => other,
        })?;
        let u = blocks
            .iter()
            .map(|b| block_diag_replicate(b, 2 * d))
            .collect();
        Ok(HTypeGroup {
            d,
            p,
            u,
            n_hom: 2 * d + 2 * p,
            convention: "clifford-v1".to_string(),
        })
    }

    /// The identity element (0, 0).
    pub fn identity(&self) -> GroupPoint {
        GroupPoint::new(vec![0.0; 2 * self.d], vec![0.0; self.p])
    }

    fn check_point(&self, g: &GroupPoint, context: &'static str) -> Result<()> {
        if g.z.len() != 2 * self.d {
            return Err(Error::DimensionMismatch {
                expected: 2 * self.d,
                got: g.z.len(),
                context,
            });
        }
        if g.eta.len() != self.p {
            return Err(Error::DimensionMismatch {
                expected: self.p,
                got: g.eta.len(),
                context,
            });
        }
        Ok(())
    }

    /// The bracket [z, z′] ∈ ℝ^p with components ⟨z, U^j z′⟩.
    pub fn bracket(&self, z: &[f64], zp: &[f64]) -> Vec<f64> {
        self.u
            .iter()
            .map(|uj| {
                let uz = uj.apply(zp);
                z.iter().zip(&uz).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    /// Group product (z, η) ∘ (z′, η′) = (z + z′, η + η′ + ½ [z, z′]).
    pub fn mul(&self, g1: &GroupPoint, g2: &GroupPoint) -> Result<GroupPoint> {
        self.check_point(g1, "group_mul lhs")?;
        self.check_point(g2, "group_mul rhs")?;
        let z: Vec<f64> = g1.z.iter().zip(&g2.z).map(|(a, b)| a + b).collect();
        let br = self.bracket(&g1.z, &g2.z);
        let eta: Vec<f64> = g1
            .eta
            .iter()
            .zip(&g2.eta)
            .zip(&br)
            .map(|((a, b), c)| a + b + 0.5 * c)
            .collect();
        Ok(GroupPoint::new(z, eta))
    }

    /// Group inverse (−z, −η).
    pub fn inv(&self, g: &GroupPoint) -> Result<GroupPoint> {
        self.check_point(g, "group_inv")?;
        Ok(GroupPoint::new(
            g.z.iter().map(|a| -a).collect(),
            g.eta.iter().map(|a| -a).collect(),
        ))
    }

    /// Anisotropic dilation δ_λ(z, η) = (λ z, λ² η); requires λ > 0.
    pub fn dilate(&self, lam: f64, g: &GroupPoint) -> Result<GroupPoint> {
        if !(lam > 0.0) {
            return Err(Error::NonpositiveScale(lam));
        }
        self.check_point(g, "dilate")?;
        Ok(GroupPoint::new(
            g.z.iter().map(|a| lam * a).collect(),
            g.eta.iter().map(|a| lam * lam * a).collect(),
        ))
    }

    /// Largest deviation of the U^j family from the skewness, orthogonality,
    /// and pairwise-anticommutation identities. Zero (to rounding) for every
    /// constructible group.
    pub fn matrix_invariant_residual(&self) -> f64 {
        let n = 2 * self.d;
        let mut worst = 0.0f64;
        for uj in &self.u {
            let ut = uj.transpose();
            // Skewness: Uᵀ + U = 0.
            for (a, b) in ut.entries.iter().zip(&uj.entries) {
                worst = worst.max((a + b).abs());
            }
            // Orthogonality: UᵀU = I.
            let utu = ut.matmul(uj);
            for i in 0..n {
                for j in 0..n {
                    let target = if i == j { 1.0 } else { 0.0 };
                    worst = worst.max((utu.get(i, j) - target).abs());
                }
            }
        }
        // Anticommutation: U^i U^j + U^j U^i = 0 for i ≠ j.
        for i in 0..self.p {
            for j in (i + 1)..self.p {
                let a = self.u[i].matmul(&self.u[j]);
                let b = self.u[j].matmul(&self.u[i]);
                for (x, y) in a.entries.iter().zip(&b.entries) {
                    worst = worst.max((x + y).abs());
                }
            }
        }
        worst
    }
}
