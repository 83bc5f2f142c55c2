//! Orthogonal polynomial families used by the oscillator model.
//!
//! Everything is evaluated through stable forward three-term recurrences in
//! monic or classically-normalized form; normalization constants involving
//! Gamma-function ratios are computed as differences of `ln_gamma` so that
//! degrees up to a few hundred stay inside f64 range.
//!
//! The dual -1 Hahn family is the discrete one: `N+1` grid points, positive
//! weights, monic polynomials `Q_n` with
//!
//! ```text
//! x Q_n(x) = Q_{n+1}(x) + b_n Q_n(x) + u_n Q_{n-1}(x),
//! u_n = 4 [n]_xi [N-n+1]_zeta,
//! ```
//!
//! where `[n]_mu = n + mu (1 - (-1)^n)` are the mu-numbers.

use crate::{Error, Result};

pub use statrs::function::gamma::ln_gamma;

/// The mu-number `[n]_mu = n + mu (1 - (-1)^n)`: `n` for even `n`,
/// `n + 2 mu` for odd `n`.
pub fn mu_number(n: u32, mu: f64) -> f64 {
    if n % 2 == 0 {
        n as f64
    } else {
        n as f64 + 2.0 * mu
    }
}

/// Rising factorial `(a)_k = a (a+1) ... (a+k-1)` with integer displacement.
///
/// Computed as a plain product: exact for negative or non-integer bases,
/// which the dual -1 Hahn weights rely on.
pub fn pochhammer(a: f64, k: u32) -> f64 {
    let mut p = 1.0;
    for i in 0..k {
        p *= a + i as f64;
    }
    p
}

/// Laguerre polynomial `L_n^{(alpha)}(x)`, classical normalization.
pub fn laguerre_eval(n: u32, alpha: f64, x: f64) -> Result<f64> {
    if !(alpha > -1.0) {
        return Err(Error::ParameterOutOfRange {
            name: "alpha",
            value: alpha,
            limit: -1.0,
        });
    }
    Ok(laguerre_unchecked(n, alpha, x))
}

pub(crate) fn laguerre_unchecked(n: u32, alpha: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = alpha + 1.0 - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + alpha + 1.0 - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Derivative `d/dx L_n^{(alpha)}(x) = -L_{n-1}^{(alpha+1)}(x)`.
pub(crate) fn laguerre_deriv_unchecked(n: u32, alpha: f64, x: f64) -> f64 {
    if n == 0 {
        0.0
    } else {
        -laguerre_unchecked(n - 1, alpha + 1.0, x)
    }
}

/// Jacobi polynomial `P_n^{(alpha,beta)}(x)`, classical normalization.
pub fn jacobi_eval(n: u32, alpha: f64, beta: f64, x: f64) -> Result<f64> {
    for (name, value) in [("alpha", alpha), ("beta", beta)] {
        if !(value > -1.0) {
            return Err(Error::ParameterOutOfRange {
                name,
                value,
                limit: -1.0,
            });
        }
    }
    Ok(jacobi_unchecked(n, alpha, beta, x))
}

pub(crate) fn jacobi_unchecked(n: u32, alpha: f64, beta: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = alpha + 1.0 + 0.5 * (alpha + beta + 2.0) * (x - 1.0);
    // k is the degree being produced on each pass.
    for k in 2..=n {
        let kf = k as f64;
        let c = 2.0 * kf + alpha + beta;
        // At k = 2 and alpha + beta = -1 the generic (c-2) numerator factor
        // k + alpha + beta cancels; use the cancelled form for k = 2.
        let a1 = 2.0 * kf * (kf + alpha + beta) * (c - 2.0);
        let a2 = (c - 1.0) * (alpha * alpha - beta * beta);
        let a3 = (c - 2.0) * (c - 1.0) * c;
        let a4 = 2.0 * (kf + alpha - 1.0) * (kf + beta - 1.0) * c;
        let next = ((a2 + a3 * x) * cur - a4 * prev) / a1;
        prev = cur;
        cur = next;
    }
    cur
}

/// Derivative `d/dx P_n^{(a,b)}(x) = ((n+a+b+1)/2) P_{n-1}^{(a+1,b+1)}(x)`.
pub(crate) fn jacobi_deriv_unchecked(n: u32, alpha: f64, beta: f64, x: f64) -> f64 {
    if n == 0 {
        0.0
    } else {
        0.5 * (n as f64 + alpha + beta + 1.0) * jacobi_unchecked(n - 1, alpha + 1.0, beta + 1.0, x)
    }
}

/// Generalized Hermite polynomial `H_n^{mu}(x)`, normalized so that
/// `psi_n(x) = e^{-x^2/2} H_n^{mu}(x)` has unit norm against `|x|^{2mu} dx`:
///
/// ```text
/// H_{2k+p}^{mu}(x) = (-1)^k sqrt( k! / Gamma(k + p + mu + 1/2) )
///                    x^p L_k^{(mu - 1/2 + p)}(x^2),   p = n mod 2.
/// ```
pub fn generalized_hermite_eval(n: u32, mu: f64, x: f64) -> Result<f64> {
    if !(mu > -0.5) {
        return Err(Error::ParameterOutOfRange {
            name: "mu",
            value: mu,
            limit: -0.5,
        });
    }
    Ok(generalized_hermite_unchecked(n, mu, x))
}

pub(crate) fn gen_hermite_prefactor(n: u32, mu: f64) -> f64 {
    let k = (n / 2) as f64;
    let p = (n % 2) as f64;
    let sign = if (n / 2) % 2 == 0 { 1.0 } else { -1.0 };
    sign * (0.5 * (ln_gamma(k + 1.0) - ln_gamma(k + p + mu + 0.5))).exp()
}

pub(crate) fn generalized_hermite_unchecked(n: u32, mu: f64, x: f64) -> f64 {
    let k = n / 2;
    let p = n % 2;
    let xp = if p == 0 { 1.0 } else { x };
    gen_hermite_prefactor(n, mu) * xp * laguerre_unchecked(k, mu - 0.5 + p as f64, x * x)
}

/// Derivative of `H_n^{mu}` in `x` (chain rule through `L_k(x^2)`).
pub(crate) fn generalized_hermite_deriv_unchecked(n: u32, mu: f64, x: f64) -> f64 {
    let k = n / 2;
    let p = n % 2;
    let alpha = mu - 0.5 + p as f64;
    let c = gen_hermite_prefactor(n, mu);
    let l = laguerre_unchecked(k, alpha, x * x);
    let dl = laguerre_deriv_unchecked(k, alpha, x * x);
    if p == 0 {
        c * 2.0 * x * dl
    } else {
        c * (l + 2.0 * x * x * dl)
    }
}

/// Monic three-term recurrence data: `x P_n = P_{n+1} + b_n P_n + u_n P_{n-1}`.
///
/// `u[0]` is never used by the recurrence and is stored as 0.
#[derive(Debug, Clone)]
pub struct RecurrenceCoeffs {
    pub b: Vec<f64>,
    pub u: Vec<f64>,
    pub degree_max: usize,
}

impl RecurrenceCoeffs {
    /// Monic value by forward recurrence, `P_{-1} = 0`, `P_0 = 1`.
    pub fn eval_monic(&self, n: usize, x: f64) -> f64 {
        assert!(n <= self.degree_max, "degree {n} beyond table");
        let mut prev = 0.0;
        let mut cur = 1.0;
        for k in 0..n {
            let next = (x - self.b[k]) * cur - self.u[k] * prev;
            prev = cur;
            cur = next;
        }
        cur
    }

    /// Norm of the monic polynomial of degree `n`: `v_n = u_1 u_2 ... u_n`.
    pub fn monic_norm(&self, n: usize) -> f64 {
        self.u[1..=n].iter().product()
    }
}

/// The dual -1 Hahn family on `N+1` points.
///
/// `xi` and `zeta` follow the parity-of-N branch:
/// even `N`: `xi = (beta-N-1)/2`, `zeta = (alpha-N-1)/2`;
/// odd `N`: `xi = alpha/2`, `zeta = beta/2`.
/// Weights are kept in the convention where they sum to 1 (the monic norm
/// `v_n = u_1...u_n` is exposed separately, not folded in).
#[derive(Debug, Clone)]
pub struct DualMinusOneHahnFamily {
    pub alpha: f64,
    pub beta: f64,
    pub n_points_minus_one: usize,
    pub xi: f64,
    pub zeta: f64,
    pub coeffs: RecurrenceCoeffs,
    pub grid: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Builds the dual -1 Hahn family for given `alpha`, `beta`, `N`.
///
/// Fails if any recurrence coefficient `u_n`, `1 <= n <= N`, is not
/// strictly positive (no positive orthogonality measure exists then).
pub fn dual_m1_hahn_family(alpha: f64, beta: f64, big_n: usize) -> Result<DualMinusOneHahnFamily> {
    let n = big_n;
    let even = n % 2 == 0;
    let (xi, zeta) = if even {
        ((beta - n as f64 - 1.0) / 2.0, (alpha - n as f64 - 1.0) / 2.0)
    } else {
        (alpha / 2.0, beta / 2.0)
    };

    let mut b = Vec::with_capacity(n + 1);
    let mut u = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let sk = if k % 2 == 0 { 1.0 } else { -1.0 };
        if even {
            b.push(-sk * (2.0 * xi + 2.0 * zeta) - 1.0);
        } else {
            b.push(sk * (2.0 * zeta - 2.0 * xi) - 1.0);
        }
        if k == 0 {
            u.push(0.0);
        } else {
            let uk = 4.0 * mu_number(k as u32, xi) * mu_number((n - k + 1) as u32, zeta);
            if !(uk > 0.0) {
                return Err(Error::DegenerateFamily { n: k, value: uk });
            }
            u.push(uk);
        }
    }

    let grid: Vec<f64> = (0..=n)
        .map(|l| {
            let sl = if l % 2 == 0 { 1.0 } else { -1.0 };
            if even {
                sl * (2.0 * l as f64 + 1.0 - alpha - beta)
            } else {
                sl * (2.0 * l as f64 + 1.0 + alpha + beta)
            }
        })
        .collect();

    let weights = if even {
        even_weights(alpha, beta, n)
    } else {
        odd_weights(alpha, beta, n)
    };

    Ok(DualMinusOneHahnFamily {
        alpha,
        beta,
        n_points_minus_one: n,
        xi,
        zeta,
        coeffs: RecurrenceCoeffs {
            b,
            u,
            degree_max: n,
        },
        grid,
        weights,
    })
}

fn even_weights(alpha: f64, beta: f64, n: usize) -> Vec<f64> {
    let m = n / 2;
    let norm = {
        let mut t = 1.0;
        for i in 0..m {
            t *= (1.0 - beta / 2.0 + i as f64) / (1.0 - alpha / 2.0 - beta / 2.0 + i as f64);
        }
        t
    };
    (0..=n)
        .map(|l| {
            let (j, q) = ((l / 2) as u32, (l % 2) as u32);
            let sj = if j % 2 == 0 { 1.0 } else { -1.0 };
            let fact: f64 = (1..=j).map(|i| i as f64).product();
            sj * pochhammer(-(m as f64), j + q) / fact
                * pochhammer(1.0 - alpha / 2.0, j)
                * pochhammer(1.0 - alpha / 2.0 - beta / 2.0, j)
                / (pochhammer(1.0 - beta / 2.0, j)
                    * pochhammer(m as f64 + 1.0 - alpha / 2.0 - beta / 2.0, j + q))
                * norm
        })
        .collect()
}

// The printed source for this branch carries two typos; the correct product
// form was fixed against the defining orthogonality system:
//   w_{2j+q} = (-1)^j (1/2-m)_j / j!
//              * (1/2+a/2)_{j+q} (1+a/2+b/2)_j
//              / [ (1/2+b/2)_{j+q} (m+3/2+a/2+b/2)_j ]
//              * (1/2+b/2)_{m+1/2} / (1+a/2+b/2)_{m+1/2},   m = N/2.
fn odd_weights(alpha: f64, beta: f64, n: usize) -> Vec<f64> {
    let m = n as f64 / 2.0;
    let big_m = (n + 1) / 2; // m + 1/2, an integer for odd N
    let norm = pochhammer(0.5 + beta / 2.0, big_m as u32)
        / pochhammer(1.0 + alpha / 2.0 + beta / 2.0, big_m as u32);
    (0..=n)
        .map(|l| {
            let (j, q) = ((l / 2) as u32, (l % 2) as u32);
            let sj = if j % 2 == 0 { 1.0 } else { -1.0 };
            let fact: f64 = (1..=j).map(|i| i as f64).product();
            sj * pochhammer(0.5 - m, j) / fact
                * pochhammer(0.5 + alpha / 2.0, j + q)
                * pochhammer(1.0 + alpha / 2.0 + beta / 2.0, j)
                / (pochhammer(0.5 + beta / 2.0, j + q)
                    * pochhammer(m + 1.5 + alpha / 2.0 + beta / 2.0, j))
                * norm
        })
        .collect()
}

impl DualMinusOneHahnFamily {
    /// Monic value `Q_n(x)` by forward recurrence.
    pub fn eval(&self, n: usize, x: f64) -> f64 {
        self.coeffs.eval_monic(n, x)
    }

    /// `v_n = u_1 ... u_n`, the orthogonality constant of `Q_n`.
    pub fn monic_norm(&self, n: usize) -> f64 {
        self.coeffs.monic_norm(n)
    }
}
