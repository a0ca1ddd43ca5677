//! Cyclic Jacobi eigenvalue iteration for dense real symmetric matrices.
//!
//! Each rotation annihilates one off-diagonal pair; sweeps visit every
//! `(p, q)` with `p < q` in row order. The iteration stops once the
//! off-diagonal Frobenius norm falls below `tolerance · max(1, ‖A‖_F)`.
//!
//! From the fifth sweep on, an entry too small to change either diagonal
//! entry in floating point is set to zero instead of rotated away. Without
//! this, pairs with equal diagonals keep taking 45° rotations on rounding
//! noise and highly degenerate spectra converge only linearly.

use crate::scalar::{real_from_f64, Real};

#[derive(Debug, Clone, Copy)]
pub struct JacobiOptions<F> {
    pub max_sweeps: usize,
    pub tolerance: F,
}

impl<F: Real> Default for JacobiOptions<F> {
    fn default() -> Self {
        let floor = F::epsilon() * real_from_f64(64.0);
        Self {
            max_sweeps: 30,
            tolerance: real_from_f64::<F>(1e-12).max(floor),
        }
    }
}

/// Did not converge within the sweep budget; carries the final
/// off-diagonal norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoConvergence {
    pub sweeps: usize,
    pub off_norm: f64,
}

fn off_norm<F: Real>(a: &[F], n: usize) -> F {
    let mut s = F::zero();
    for p in 0..n {
        for q in 0..n {
            if p != q {
                s = s + a[p * n + q] * a[p * n + q];
            }
        }
    }
    s.sqrt()
}

/// Eigenvalues of the symmetric `n x n` row-major matrix `a`, ascending.
pub fn symmetric_eigenvalues<F: Real>(
    mut a: Vec<F>,
    n: usize,
    opts: &JacobiOptions<F>,
) -> Result<Vec<F>, NoConvergence> {
    assert_eq!(a.len(), n * n, "matrix is not n x n");
    let frobenius = a.iter().fold(F::zero(), |s, &x| s + x * x).sqrt();
    let threshold = opts.tolerance * frobenius.max(F::one());
    let half = real_from_f64::<F>(0.5);
    let hundred = real_from_f64::<F>(100.0);

    let mut sweeps = 0;
    loop {
        let off = off_norm(&a, n);
        if off <= threshold {
            break;
        }
        if sweeps == opts.max_sweeps {
            return Err(NoConvergence {
                sweeps,
                off_norm: off.to_f64().unwrap_or(f64::NAN),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == F::zero() {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let g = hundred * apq.abs();
                if sweeps > 4 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    a[p * n + q] = F::zero();
                    a[q * n + p] = F::zero();
                    continue;
                }
                let h = aqq - app;
                let t = if h.abs() + g == h.abs() {
                    apq / h
                } else {
                    let theta = h * half / apq;
                    let t = F::one() / (theta.abs() + (theta * theta + F::one()).sqrt());
                    if theta < F::zero() {
                        -t
                    } else {
                        t
                    }
                };
                let c = F::one() / (t * t + F::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    let new_kp = c * akp - s * akq;
                    let new_kq = s * akp + c * akq;
                    a[k * n + p] = new_kp;
                    a[p * n + k] = new_kp;
                    a[k * n + q] = new_kq;
                    a[q * n + k] = new_kq;
                }
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = F::zero();
                a[q * n + p] = F::zero();
            }
        }
    }
    let mut eig: Vec<F> = (0..n).map(|i| a[i * n + i]).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).expect("NaN eigenvalue"));
    Ok(eig)
}
