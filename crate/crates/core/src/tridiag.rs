//! Tridiagonal LU factorization (Thomas algorithm) for repeated solves.

use crate::error::{Error, Result};

/// Factored tridiagonal matrix with sub-diagonal `a`, diagonal `b` and
/// super-diagonal `c` (`a[0]` and `c[n-1]` unused).
#[derive(Debug, Clone)]
pub struct Tridiagonal {
    a: Vec<f64>,
    c_prime: Vec<f64>,
    inv_den: Vec<f64>,
}

impl Tridiagonal {
    pub fn factor(a: Vec<f64>, b: &[f64], c: &[f64]) -> Result<Self> {
        let n = b.len();
        assert!(n > 0 && a.len() == n && c.len() == n);
        let mut c_prime = vec![0.0; n];
        let mut inv_den = vec![0.0; n];
        for i in 0..n {
            let den = if i == 0 {
                b[0]
            } else {
                b[i] - a[i] * c_prime[i - 1]
            };
            if den == 0.0 || !den.is_finite() {
                return Err(Error::SingularSystem(i));
            }
            inv_den[i] = 1.0 / den;
            if i + 1 < n {
                c_prime[i] = c[i] * inv_den[i];
            }
        }
        Ok(Self {
            a,
            c_prime,
            inv_den,
        })
    }

    pub fn len(&self) -> usize {
        self.inv_den.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inv_den.is_empty()
    }

    /// Solves in place: `x` holds the right-hand side on entry.
    pub fn solve_in_place(&self, x: &mut [f64]) {
        let n = self.len();
        assert_eq!(x.len(), n);
        x[0] *= self.inv_den[0];
        for i in 1..n {
            x[i] = (x[i] - self.a[i] * x[i - 1]) * self.inv_den[i];
        }
        for i in (0..n - 1).rev() {
            x[i] -= self.c_prime[i] * x[i + 1];
        }
    }
}
