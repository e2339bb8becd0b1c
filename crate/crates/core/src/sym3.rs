//! Real symmetric 3×3 matrices and their closed-form eigenvalues.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

/// Symmetric 3×3 matrix stored as its upper triangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sym3 {
    pub a11: f64,
    pub a22: f64,
    pub a33: f64,
    pub a12: f64,
    pub a13: f64,
    pub a23: f64,
}

impl Sym3 {
    pub const IDENTITY: Sym3 = Sym3::diag(1.0, 1.0, 1.0);

    pub const fn diag(a11: f64, a22: f64, a33: f64) -> Self {
        Sym3 {
            a11,
            a22,
            a33,
            a12: 0.0,
            a13: 0.0,
            a23: 0.0,
        }
    }

    /// Builds from a full matrix, reading only the upper triangle.
    pub fn from_rows(rows: [[f64; 3]; 3]) -> Self {
        Sym3 {
            a11: rows[0][0],
            a22: rows[1][1],
            a33: rows[2][2],
            a12: rows[0][1],
            a13: rows[0][2],
            a23: rows[1][2],
        }
    }

    pub fn to_rows(&self) -> [[f64; 3]; 3] {
        [
            [self.a11, self.a12, self.a13],
            [self.a12, self.a22, self.a23],
            [self.a13, self.a23, self.a33],
        ]
    }

    pub fn scaled(&self, c: f64) -> Self {
        Sym3 {
            a11: c * self.a11,
            a22: c * self.a22,
            a33: c * self.a33,
            a12: c * self.a12,
            a13: c * self.a13,
            a23: c * self.a23,
        }
    }

    pub fn trace(&self) -> f64 {
        self.a11 + self.a22 + self.a33
    }

    pub fn determinant(&self) -> f64 {
        self.a11 * (self.a22 * self.a33 - self.a23 * self.a23)
            - self.a12 * (self.a12 * self.a33 - self.a23 * self.a13)
            + self.a13 * (self.a12 * self.a23 - self.a22 * self.a13)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        let off = self.a12 * self.a12 + self.a13 * self.a13 + self.a23 * self.a23;
        (self.a11 * self.a11 + self.a22 * self.a22 + self.a33 * self.a33 + 2.0 * off).sqrt()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 3] {
        self.decompose().0
    }

    /// Smallest eigenvalue; the matrix is positive semidefinite iff this is ≥ 0.
    pub fn min_eigenvalue(&self) -> f64 {
        self.decompose().0[0]
    }

    /// Smallest eigenvalue together with a unit eigenvector for it.
    ///
    /// When the eigenvalue is repeated any unit vector of its eigenspace is
    /// returned.
    pub fn min_eigenpair(&self) -> (f64, [f64; 3]) {
        let (eig, v) = self.decompose();
        (eig[0], v)
    }

    /// Ascending eigenvalues and a unit eigenvector of the smallest.
    ///
    /// The trigonometric solution of the characteristic cubic locates the
    /// eigenvalue farthest from the other two; near a repeated pair the
    /// `acos` loses half the digits for that pair, so it is recomputed from
    /// the 2×2 restriction to the orthogonal complement of the isolated
    /// eigenvector.
    fn decompose(&self) -> ([f64; 3], [f64; 3]) {
        let off = self.a12 * self.a12 + self.a13 * self.a13 + self.a23 * self.a23;
        let q = self.trace() / 3.0;
        let (d1, d2, d3) = (self.a11 - q, self.a22 - q, self.a33 - q);
        let p2 = d1 * d1 + d2 * d2 + d3 * d3 + 2.0 * off;
        if p2 == 0.0 || !p2.is_finite() {
            return ([q, q, q], [1.0, 0.0, 0.0]);
        }
        let p = (p2 / 6.0).sqrt();
        // B = (A - qI) / p has unit-scale entries; det(B) / 2 lies in [-1, 1].
        let b = Sym3 {
            a11: d1 / p,
            a22: d2 / p,
            a33: d3 / p,
            a12: self.a12 / p,
            a13: self.a13 / p,
            a23: self.a23 / p,
        };
        let r = (b.determinant() / 2.0).clamp(-1.0, 1.0);
        let phi = r.acos() / 3.0;
        let largest_is_isolated = r >= 0.0;
        let isolated = if largest_is_isolated {
            q + 2.0 * p * phi.cos()
        } else {
            q + 2.0 * p * (phi + 2.0 * PI / 3.0).cos()
        };

        let u = self.null_vector(isolated).unwrap_or([1.0, 0.0, 0.0]);
        let isolated = self.quadratic_form(&u);
        let (w1, w2) = complement_basis(&u);
        let a = self.quadratic_form(&w1);
        let d = self.quadratic_form(&w2);
        let c = self.bilinear_form(&w1, &w2);
        let mid = 0.5 * (a + d);
        let half_gap = (0.5 * (a - d)).hypot(c);
        let (lo, hi) = (mid - half_gap, mid + half_gap);

        let mut eig = if largest_is_isolated {
            [lo, hi, isolated]
        } else {
            [isolated, lo, hi]
        };
        let min_vec = if largest_is_isolated || lo < isolated {
            // Eigenvector of `lo` in the (w1, w2) plane.
            let cand1 = [c, lo - a];
            let cand2 = [lo - d, c];
            let pick = if cand1[0].hypot(cand1[1]) >= cand2[0].hypot(cand2[1]) {
                cand1
            } else {
                cand2
            };
            let len = pick[0].hypot(pick[1]);
            if len > 0.0 {
                normalized(std::array::from_fn(|i| {
                    (pick[0] * w1[i] + pick[1] * w2[i]) / len
                }))
            } else {
                w1
            }
        } else {
            u
        };
        eig.sort_by(f64::total_cmp);
        (eig, min_vec)
    }

    /// Unit vector spanning the kernel of `A − λI` for a simple eigenvalue λ.
    fn null_vector(&self, lambda: f64) -> Option<[f64; 3]> {
        let rows = self.to_rows();
        let shifted: [[f64; 3]; 3] = std::array::from_fn(|i| {
            let mut r = rows[i];
            r[i] -= lambda;
            r
        });
        let best = [
            cross(&shifted[0], &shifted[1]),
            cross(&shifted[0], &shifted[2]),
            cross(&shifted[1], &shifted[2]),
        ]
        .into_iter()
        .max_by(|a, b| norm_sq(a).total_cmp(&norm_sq(b)))?;
        (norm_sq(&best) > 0.0).then(|| normalized(best))
    }

    /// `xᵀ A y`.
    pub fn bilinear_form(&self, x: &[f64; 3], y: &[f64; 3]) -> f64 {
        let rows = self.to_rows();
        (0..3)
            .map(|i| x[i] * (0..3).map(|j| rows[i][j] * y[j]).sum::<f64>())
            .sum()
    }

    /// Quadratic form `xᵀ A x`.
    pub fn quadratic_form(&self, x: &[f64; 3]) -> f64 {
        self.bilinear_form(x, x)
    }
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Orthonormal pair completing the unit vector `u` to a basis.
fn complement_basis(u: &[f64; 3]) -> ([f64; 3], [f64; 3]) {
    let k = (0..3)
        .min_by(|&i, &j| u[i].abs().total_cmp(&u[j].abs()))
        .unwrap_or(0);
    let mut e = [0.0; 3];
    e[k] = 1.0;
    let w1 = normalized(std::array::from_fn(|i| e[i] - u[k] * u[i]));
    let w2 = cross(u, &w1);
    (w1, w2)
}

fn norm_sq(v: &[f64; 3]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

fn normalized(v: [f64; 3]) -> [f64; 3] {
    let n = norm_sq(&v).sqrt();
    v.map(|x| x / n)
}
