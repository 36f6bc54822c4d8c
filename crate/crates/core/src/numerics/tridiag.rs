//! Symmetric tridiagonal eigenvalues by Sturm-sequence bisection and
//! eigenvectors by inverse iteration.

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    /// `off[i]` couples rows `i` and `i + 1`.
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert!(
            diag.len() == off.len() + 1 || (diag.is_empty() && off.is_empty()),
            "off-diagonal must be one shorter than the diagonal"
        );
        SymTridiagonal { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `x` (negative LDLᵀ pivots).
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.len() {
            let coupling = if i == 0 {
                0.0
            } else {
                self.off[i - 1] * self.off[i - 1]
            };
            q = self.diag[i] - x - coupling / q;
            if q == 0.0 {
                q = -f64::EPSILON * (self.diag[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin enclosure of the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.len() {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < self.len() {
                self.off[i].abs()
            } else {
                0.0
            };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue (0-based), bisected to full precision.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        assert!(k < self.len(), "eigenvalue index out of range");
        let (mut lo, mut hi) = self.gershgorin();
        let pad = f64::EPSILON * lo.abs().max(hi.abs()).max(1.0);
        lo -= pad;
        hi += pad;
        for _ in 0..256 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// The `count` smallest eigenvalues in ascending order.
    pub fn lowest_eigenvalues(&self, count: usize) -> Vec<f64> {
        (0..count.min(self.len()))
            .map(|k| self.eigenvalue(k))
            .collect()
    }

    /// Unit eigenvector for the eigenvalue `shift` (as returned by
    /// [`Self::eigenvalue`]); `previous` vectors are projected out.
    pub fn eigenvector(&self, shift: f64, previous: &[Vec<f64>]) -> Vec<f64> {
        let n = self.len();
        let scale = self
            .gershgorin()
            .1
            .abs()
            .max(self.gershgorin().0.abs())
            .max(1.0);
        // nudge off the exact eigenvalue so the shifted matrix stays invertible
        let sigma = shift + 1e-13 * scale;
        let mut x: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.1 * ((i as f64) * 0.618_033_988_749_895).fract())
            .collect();
        normalize(&mut x);
        for _ in 0..4 {
            x = solve_shifted(self, sigma, &x);
            for v in previous {
                let d = dot(&x, v);
                for (xi, vi) in x.iter_mut().zip(v) {
                    *xi -= d * vi;
                }
            }
            normalize(&mut x);
        }
        x
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(x: &mut [f64]) {
    let norm = dot(x, x).sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
}

/// Solves `(T - sigma I) x = b` by Gaussian elimination with partial pivoting.
fn solve_shifted(t: &SymTridiagonal, sigma: f64, b: &[f64]) -> Vec<f64> {
    let n = t.len();
    if n == 1 {
        let d = t.diag[0] - sigma;
        return vec![b[0] / if d == 0.0 { f64::MIN_POSITIVE } else { d }];
    }
    // row i holds (sub, diag, sup, sup2) after pivoting; sup2 fills in on swaps
    let mut sub: Vec<f64> = (0..n)
        .map(|i| if i > 0 { t.off[i - 1] } else { 0.0 })
        .collect();
    let mut diag: Vec<f64> = t.diag.iter().map(|d| d - sigma).collect();
    let mut sup: Vec<f64> = (0..n)
        .map(|i| if i + 1 < n { t.off[i] } else { 0.0 })
        .collect();
    let mut sup2 = vec![0.0; n];
    let mut rhs = b.to_vec();
    let tiny = f64::EPSILON * t.gershgorin().1.abs().max(1.0);

    for i in 0..n - 1 {
        if sub[i + 1].abs() > diag[i].abs() {
            // swap rows i and i+1
            std::mem::swap(&mut diag[i], &mut sub[i + 1]);
            std::mem::swap(&mut sup[i], &mut diag[i + 1]);
            std::mem::swap(&mut sup2[i], &mut sup[i + 1]);
            rhs.swap(i, i + 1);
        }
        if diag[i] == 0.0 {
            diag[i] = tiny;
        }
        let m = sub[i + 1] / diag[i];
        sub[i + 1] = 0.0;
        diag[i + 1] -= m * sup[i];
        sup[i + 1] -= m * sup2[i];
        rhs[i + 1] -= m * rhs[i];
    }
    if diag[n - 1] == 0.0 {
        diag[n - 1] = tiny;
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = rhs[i];
        if i + 1 < n {
            acc -= sup[i] * x[i + 1];
        }
        if i + 2 < n {
            acc -= sup2[i] * x[i + 2];
        }
        x[i] = acc / diag[i];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn laplacian(n: usize) -> SymTridiagonal {
        SymTridiagonal::new(vec![2.0; n], vec![-1.0; n - 1])
    }

    #[test]
    fn discrete_laplacian_spectrum() {
        let n = 50;
        let t = laplacian(n);
        for k in 0..5 {
            let exact = 2.0 - 2.0 * (PI * (k + 1) as f64 / (n + 1) as f64).cos();
            assert!((t.eigenvalue(k) - exact).abs() < 1e-14);
        }
        assert_eq!(t.count_below(0.0), 0);
        assert_eq!(t.count_below(4.0), n);
    }

    #[test]
    fn eigenvectors_are_orthonormal_and_satisfy_equation() {
        let n = 200;
        let diag: Vec<f64> = (0..n)
            .map(|i| 2.0 + (i as f64 / n as f64).powi(2))
            .collect();
        let t = SymTridiagonal::new(diag, vec![-1.0; n - 1]);
        let mut vecs: Vec<Vec<f64>> = Vec::new();
        for k in 0..4 {
            let lam = t.eigenvalue(k);
            let v = t.eigenvector(lam, &vecs);
            let mut resid = 0.0f64;
            for i in 0..n {
                let mut av = t.diag[i] * v[i];
                if i > 0 {
                    av += t.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    av += t.off[i] * v[i + 1];
                }
                resid = resid.max((av - lam * v[i]).abs());
            }
            assert!(resid < 1e-12, "residual {resid}");
            for w in &vecs {
                assert!(dot(&v, w).abs() < 1e-12);
            }
            vecs.push(v);
        }
    }

    #[test]
    fn one_by_one() {
        let t = SymTridiagonal::new(vec![3.5], vec![]);
        assert!((t.eigenvalue(0) - 3.5).abs() < 1e-15);
        assert_eq!(t.eigenvector(3.5, &[]), vec![1.0]);
    }
}
