//! Gauss quadrature for the three singular weights of the model and the
//! weighted inner products built on them.
//!
//! Rules are produced by the Golub-Welsch procedure: nodes are eigenvalues of
//! the symmetric tridiagonal Jacobi matrix of the monic recurrence, weights
//! are `mass * (first eigenvector component)^2`.
//!
//! Convention for the continuous inner products: wavefunctions carry a
//! Gaussian factor analytically, so callers pass the *bare* (Gaussian-
//! stripped) functions and the rule's weight supplies `e^{-x^2}` (or
//! `e^{-t}` radially) together with the singular factor. This avoids
//! evaluating `e^{-x^2/2}` at quadrature nodes with `x^2 ~ 200`.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::polynomials::ln_gamma;
use crate::{Error, HalfInt, MuParams, Result};

/// Weight function selector for [`gauss_rule`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightKind {
    /// `|x|^{2 mu} e^{-x^2}` on the real line.
    GeneralizedHermite { mu: f64 },
    /// `x^alpha e^{-x}` on `[0, inf)`.
    Laguerre { alpha: f64 },
    /// `(1-x)^alpha (1+x)^beta` on `[-1, 1]`.
    Jacobi { alpha: f64, beta: f64 },
}

impl std::fmt::Display for WeightKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WeightKind::GeneralizedHermite { mu } => write!(f, "generalized-hermite({mu})"),
            WeightKind::Laguerre { alpha } => write!(f, "laguerre({alpha})"),
            WeightKind::Jacobi { alpha, beta } => write!(f, "jacobi({alpha},{beta})"),
        }
    }
}

/// Nodes and weights exact for polynomials up to degree `2 n - 1` against
/// the chosen weight.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub kind: WeightKind,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// Highest polynomial degree integrated exactly.
    pub fn exact_degree(&self) -> usize {
        2 * self.nodes.len() - 1
    }

    /// `sum w_i f(x_i)`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Eigensolve of the symmetric tridiagonal Jacobi matrix.
fn golub_welsch(diag: &[f64], off: &[f64], mass: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = diag.len();
    let mut jac = DMatrix::zeros(n, n);
    for i in 0..n {
        jac[(i, i)] = diag[i];
        if i + 1 < n {
            jac[(i, i + 1)] = off[i];
            jac[(i + 1, i)] = off[i];
        }
    }
    let eig = SymmetricEigen::try_new(jac, 1e-15, 0)
        .ok_or_else(|| Error::EigenFailure("tridiagonal eigensolve did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let nodes: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let weights: Vec<f64> = order
        .iter()
        .map(|&i| {
            let v0 = eig.eigenvectors[(0, i)];
            mass * v0 * v0
        })
        .collect();
    Ok((nodes, weights))
}

/// Builds a Gauss rule with `n_nodes` nodes for the requested weight.
pub fn gauss_rule(kind: WeightKind, n_nodes: usize) -> Result<QuadratureRule> {
    assert!(n_nodes >= 1, "need at least one node");
    let n = n_nodes;
    let (diag, off, mass) = match kind {
        WeightKind::GeneralizedHermite { mu } => {
            if !(mu > -0.5) {
                return Err(Error::ParameterOutOfRange {
                    name: "mu",
                    value: mu,
                    limit: -0.5,
                });
            }
            let diag = vec![0.0; n];
            // monic recurrence x H_k = H_{k+1} + ([k]_mu / 2) H_{k-1}
            let off: Vec<f64> = (1..n)
                .map(|k| (crate::polynomials::mu_number(k as u32, mu) / 2.0).sqrt())
                .collect();
            (diag, off, ln_gamma(mu + 0.5).exp())
        }
        WeightKind::Laguerre { alpha } => {
            if !(alpha > -1.0) {
                return Err(Error::ParameterOutOfRange {
                    name: "alpha",
                    value: alpha,
                    limit: -1.0,
                });
            }
            let diag: Vec<f64> = (0..n).map(|k| 2.0 * k as f64 + alpha + 1.0).collect();
            let off: Vec<f64> = (1..n).map(|k| (k as f64 * (k as f64 + alpha)).sqrt()).collect();
            (diag, off, ln_gamma(alpha + 1.0).exp())
        }
        WeightKind::Jacobi { alpha, beta } => {
            for (name, value) in [("alpha", alpha), ("beta", beta)] {
                if !(value > -1.0) {
                    return Err(Error::ParameterOutOfRange {
                        name,
                        value,
                        limit: -1.0,
                    });
                }
            }
            let s = alpha + beta;
            let mut diag = Vec::with_capacity(n);
            for k in 0..n {
                let kf = k as f64;
                if k == 0 {
                    diag.push((beta - alpha) / (s + 2.0));
                } else {
                    diag.push((beta * beta - alpha * alpha)
                        / ((2.0 * kf + s) * (2.0 * kf + s + 2.0)));
                }
            }
            let mut off = Vec::with_capacity(n.saturating_sub(1));
            for k in 1..n {
                let kf = k as f64;
                let b2 = if k == 1 {
                    // cancelled form: valid down to alpha + beta = -1
                    4.0 * (alpha + 1.0) * (beta + 1.0) / ((s + 2.0) * (s + 2.0) * (s + 3.0))
                } else {
                    4.0 * kf * (kf + alpha) * (kf + beta) * (kf + s)
                        / ((2.0 * kf + s) * (2.0 * kf + s) * (2.0 * kf + s + 1.0)
                            * (2.0 * kf + s - 1.0))
                };
                off.push(b2.sqrt());
            }
            let mass = ((s + 1.0) * std::f64::consts::LN_2 + ln_gamma(alpha + 1.0)
                + ln_gamma(beta + 1.0)
                - ln_gamma(s + 2.0))
                .exp();
            (diag, off, mass)
        }
    };
    let (mut nodes, mut weights) = golub_welsch(&diag, &off, mass)?;
    if let WeightKind::GeneralizedHermite { .. } = kind {
        symmetrize(&mut nodes, &mut weights);
    }
    Ok(QuadratureRule {
        kind,
        nodes,
        weights,
    })
}

/// Enforces exact reflection symmetry of a symmetric-weight rule.
fn symmetrize(nodes: &mut [f64], weights: &mut [f64]) {
    let n = nodes.len();
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let x = 0.5 * (nodes[j] - nodes[i]);
        nodes[i] = -x;
        nodes[j] = x;
        let w = 0.5 * (weights[i] + weights[j]);
        weights[i] = w;
        weights[j] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
}

/// Scalar product `<g|f> = int g(x) f(x) |x|^{2 mu} dx` for wavefunction-class
/// inputs, with the Gaussian handled by the rule.
///
/// `f_bare`, `g_bare` are the functions with their `e^{-x^2/2}` factor
/// stripped; the rule must have kind `generalized-hermite(mu)` so its weight
/// supplies `|x|^{2 mu} e^{-x^2}`.
pub fn inner_product_1d(
    f_bare: impl Fn(f64) -> f64,
    g_bare: impl Fn(f64) -> f64,
    mu: f64,
    rule: &QuadratureRule,
) -> Result<f64> {
    match rule.kind {
        WeightKind::GeneralizedHermite { mu: rule_mu } if rule_mu == mu => {}
        _ => {
            return Err(Error::WeightKindMismatch {
                expected: WeightKind::GeneralizedHermite { mu }.to_string(),
                found: rule.kind.to_string(),
            })
        }
    }
    Ok(rule.integrate(|x| f_bare(x) * g_bare(x)))
}

/// Tensor-product scalar product over the plane against
/// `|x|^{2 mu_x} |y|^{2 mu_y} dx dy`, Gaussians stripped as in
/// [`inner_product_1d`].
pub fn inner_product_2d(
    f_bare: impl Fn(f64, f64) -> f64,
    g_bare: impl Fn(f64, f64) -> f64,
    rule_x: &QuadratureRule,
    rule_y: &QuadratureRule,
) -> f64 {
    let mut total = 0.0;
    for (&x, &wx) in rule_x.nodes.iter().zip(&rule_x.weights) {
        let mut inner = 0.0;
        for (&y, &wy) in rule_y.nodes.iter().zip(&rule_y.weights) {
            inner += wy * f_bare(x, y) * g_bare(x, y);
        }
        total += wx * inner;
    }
    total
}

/// Maps the Gauss-Jacobi rule in `u = -cos 2 phi` to angles in the first
/// quadrant together with the constant prefactor of the measure split.
pub(crate) fn angular_nodes(mu: MuParams, n_nodes: usize) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    let rule = gauss_rule(
        WeightKind::Jacobi {
            alpha: mu.mu_x() - 0.5,
            beta: mu.mu_y() - 0.5,
        },
        n_nodes,
    )?;
    let phis: Vec<f64> = rule.nodes.iter().map(|&u| 0.5 * (-u).acos()).collect();
    let prefactor = 2.0_f64.powf(-(mu.sum() + 1.0));
    Ok((phis, rule.weights, prefactor))
}

/// Integral `int_0^{2 pi} f(phi) g(phi) |cos phi|^{2 mu_x} |sin phi|^{2 mu_y} dphi`.
///
/// The range splits into four quadrants, each mapped to the Gauss-Jacobi rule
/// with parameters `(mu_x - 1/2, mu_y - 1/2)` through `u = -cos 2 phi`.
pub fn angular_inner_product(
    f: impl Fn(f64) -> f64,
    g: impl Fn(f64) -> f64,
    mu: MuParams,
    n_nodes: usize,
) -> Result<f64> {
    let (phis, weights, prefactor) = angular_nodes(mu, n_nodes)?;
    let tau = 2.0 * std::f64::consts::PI;
    let mut total = 0.0;
    for (&phi, &w) in phis.iter().zip(&weights) {
        for image in [phi, std::f64::consts::PI - phi, std::f64::consts::PI + phi, tau - phi] {
            total += w * f(image) * g(image);
        }
    }
    Ok(prefactor * total)
}

/// Radial scalar product `int_0^inf f(rho) g(rho) rho^{1 + 2 mu_x + 2 mu_y} drho`
/// for radial wavefunctions of angular sector `n`.
///
/// Callers pass profiles in the squared radius: the full wavefunction is
/// `e^{-rho^2/2} rho^{2n} profile(rho^2)`, and the Gauss-Laguerre rule with
/// `alpha = 2 n + mu_x + mu_y` absorbs the envelope and the `rho^{2n}` power,
/// so the rule is exact for the Laguerre factors of every radial state at
/// this sector.
pub fn radial_inner_product(
    f_profile: impl Fn(f64) -> f64,
    g_profile: impl Fn(f64) -> f64,
    mu: MuParams,
    n: HalfInt,
    n_nodes: usize,
) -> Result<f64> {
    let alpha = n.twice() as f64 + mu.sum();
    let rule = gauss_rule(WeightKind::Laguerre { alpha }, n_nodes)?;
    Ok(0.5 * rule.integrate(|t| f_profile(t) * g_profile(t)))
}

/// The Dunkl derivative `D f = f' + (mu/x)(f(x) - f(-x))` as a function,
/// with `f'` from a five-point stencil and a Taylor fallback of the
/// reflection term near `x = 0`.
pub fn dunkl_derivative_apply<'a>(
    f: impl Fn(f64) -> f64 + 'a,
    mu: f64,
) -> impl Fn(f64) -> f64 + 'a {
    move |x: f64| {
        let h = 1e-3;
        let stencil = |x0: f64| {
            (f(x0 - 2.0 * h) - 8.0 * f(x0 - h) + 8.0 * f(x0 + h) - f(x0 + 2.0 * h)) / (12.0 * h)
        };
        let deriv = stencil(x);
        let reflection = if x.abs() < 1e-6 {
            // (f(x) - f(-x))/x -> 2 f'(0) + O(x^2)
            2.0 * mu * stencil(0.0)
        } else {
            mu * (f(x) - f(-x)) / x
        };
        deriv + reflection
    }
}

/// Wavefunction-class input for the anti-Hermiticity harness: value and
/// derivative of the smooth factor `p` in `f(x) = e^{-x^2/2} p(x)`.
pub trait WavefunctionClass {
    fn bare(&self, x: f64) -> f64;
    fn bare_deriv(&self, x: f64) -> f64;
}

/// `<g, D f> + <D g, f>` against `|x|^{2 mu} dx`; anti-Hermiticity of the
/// Dunkl derivative makes this vanish.
///
/// The Gaussian is handled analytically: with `f = e^{-x^2/2} p`, the bare
/// part of `D f` is `p' - x p + (mu/x)(p(x) - p(-x))`, which the rule then
/// integrates against `|x|^{2 mu} e^{-x^2}`.
pub fn antihermiticity_defect(
    f: &impl WavefunctionClass,
    g: &impl WavefunctionClass,
    mu: f64,
    rule: &QuadratureRule,
) -> Result<f64> {
    let dunkl_bare = |w: &dyn WavefunctionClass, x: f64| {
        let reflection = if x.abs() < 1e-9 {
            2.0 * mu * w.bare_deriv(0.0)
        } else {
            mu * (w.bare(x) - w.bare(-x)) / x
        };
        w.bare_deriv(x) - x * w.bare(x) + reflection
    };
    let first = inner_product_1d(|x| g.bare(x), |x| dunkl_bare(f, x), mu, rule)?;
    let second = inner_product_1d(|x| dunkl_bare(g, x), |x| f.bare(x), mu, rule)?;
    Ok(first + second)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomials::laguerre_unchecked;
    use approx::assert_relative_eq;

    #[test]
    fn classical_hermite_reduction() {
        // mu = 0 reduces to the classical Gauss-Hermite rule; pinned values.
        let rule = gauss_rule(WeightKind::GeneralizedHermite { mu: 0.0 }, 5).unwrap();
        let nodes = [
            -2.020_182_870_456_085_6,
            -0.958_572_464_613_818_5,
            0.0,
            0.958_572_464_613_818_5,
            2.020_182_870_456_085_6,
        ];
        let weights = [
            1.995_324_205_904_591_7e-2,
            3.936_193_231_522_411e-1,
            9.453_087_204_829_418e-1,
            3.936_193_231_522_411e-1,
            1.995_324_205_904_591_7e-2,
        ];
        for i in 0..5 {
            assert_relative_eq!(rule.nodes[i], nodes[i], epsilon = 1e-12);
            assert_relative_eq!(rule.weights[i], weights[i], max_relative = 1e-12);
        }
    }

    #[test]
    fn gen_hermite_symmetry_and_mass() {
        let mu = 0.7;
        let rule = gauss_rule(WeightKind::GeneralizedHermite { mu }, 24).unwrap();
        let n = rule.nodes.len();
        for i in 0..n {
            assert_eq!(rule.nodes[i], -rule.nodes[n - 1 - i]);
            assert_eq!(rule.weights[i], rule.weights[n - 1 - i]);
            assert!(rule.weights[i] > 0.0);
        }
        // zeroth moment: int |x|^{2 mu} e^{-x^2} dx = Gamma(mu + 1/2)
        let total: f64 = rule.weights.iter().sum();
        assert_relative_eq!(total, ln_gamma(mu + 0.5).exp(), max_relative = 1e-13);
    }

    #[test]
    fn moments_match_gamma_closed_forms() {
        // int |x|^{2 mu} e^{-x^2} x^{2m} dx = Gamma(m + mu + 1/2)
        let mu = 1.3;
        let rule = gauss_rule(WeightKind::GeneralizedHermite { mu }, 16).unwrap();
        for m in 0..12u32 {
            let got = rule.integrate(|x| x.powi(2 * m as i32));
            let expect = ln_gamma(m as f64 + mu + 0.5).exp();
            assert_relative_eq!(got, expect, max_relative = 1e-12);
        }
        // int_0^inf x^alpha e^{-x} x^m dx = Gamma(alpha + m + 1)
        let alpha = 0.8;
        let rule = gauss_rule(WeightKind::Laguerre { alpha }, 16).unwrap();
        for m in 0..12u32 {
            let got = rule.integrate(|x| x.powi(m as i32));
            assert_relative_eq!(got, ln_gamma(alpha + m as f64 + 1.0).exp(), max_relative = 1e-12);
        }
    }

    #[test]
    fn jacobi_second_moment_pinned() {
        // int_{-1}^{1} (1-x)^{0.3} (1+x)^{1.1} x^2 dx, pinned by CAS quadrature
        let rule = gauss_rule(WeightKind::Jacobi { alpha: 0.3, beta: 1.1 }, 3).unwrap();
        let got = rule.integrate(|x| x * x);
        assert_relative_eq!(got, 0.449_038_262_376_926_07, max_relative = 1e-13);
    }

    #[test]
    fn mu_to_zero_continuity() {
        let near = gauss_rule(WeightKind::GeneralizedHermite { mu: 1e-8 }, 12).unwrap();
        let classical = gauss_rule(WeightKind::GeneralizedHermite { mu: 0.0 }, 12).unwrap();
        for i in 0..12 {
            assert!((near.nodes[i] - classical.nodes[i]).abs() < 1e-6);
            assert!((near.weights[i] - classical.weights[i]).abs() < 1e-6);
        }
    }

    #[test]
    fn laguerre_discrete_orthogonality() {
        // int e^{-x} x^alpha L_n L_m dx = Gamma(n + alpha + 1)/n! delta_{nm}
        let alpha = -0.2;
        let rule = gauss_rule(WeightKind::Laguerre { alpha }, 20).unwrap();
        for n in 0..6u32 {
            for m in 0..6u32 {
                let got = rule
                    .integrate(|x| laguerre_unchecked(n, alpha, x) * laguerre_unchecked(m, alpha, x));
                let expect = if n == m {
                    (ln_gamma(n as f64 + alpha + 1.0) - ln_gamma(n as f64 + 1.0)).exp()
                } else {
                    0.0
                };
                assert_relative_eq!(got, expect, max_relative = 1e-10, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn jacobi_discrete_orthogonality_with_closed_form_norm() {
        // int (1-x)^a (1+x)^b P_m P_n dx
        //   = 2^{a+b+1}/(2n+a+b+1) * G(n+a+1) G(n+b+1) / (G(n+a+b+1) n!) delta_nm
        let (alpha, beta) = (0.7, -0.4);
        let rule = gauss_rule(WeightKind::Jacobi { alpha, beta }, 20).unwrap();
        for n in 0..7u32 {
            for m in 0..7u32 {
                let got = rule.integrate(|x| {
                    crate::polynomials::jacobi_unchecked(n, alpha, beta, x)
                        * crate::polynomials::jacobi_unchecked(m, alpha, beta, x)
                });
                let expect = if n == m {
                    let nf = n as f64;
                    ((alpha + beta + 1.0) * std::f64::consts::LN_2
                        + ln_gamma(nf + alpha + 1.0)
                        + ln_gamma(nf + beta + 1.0)
                        - ln_gamma(nf + alpha + beta + 1.0)
                        - ln_gamma(nf + 1.0))
                    .exp()
                        / (2.0 * nf + alpha + beta + 1.0)
                } else {
                    0.0
                };
                assert_relative_eq!(got, expect, max_relative = 1e-10, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn antihermiticity_parity_cases() {
        use crate::wavefunctions::HermiteMode;
        let mu = 0.7;
        let rule = gauss_rule(WeightKind::GeneralizedHermite { mu }, 24).unwrap();
        // even-even, odd-even, even-odd, odd-odd
        for (nf, ng) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            let f = HermiteMode { n: nf, mu };
            let g = HermiteMode { n: ng, mu };
            let defect = antihermiticity_defect(&f, &g, mu, &rule).unwrap();
            assert!(defect.abs() < 1e-12, "({nf},{ng}): defect {defect}");
        }
    }

    #[test]
    fn angular_mass_is_beta_function() {
        // int_0^{2pi} |cos|^{2mux} |sin|^{2muy} dphi = 2 B(mux+1/2, muy+1/2), pinned
        let cases = [
            ((0.3, 0.5), 2.5),
            ((1.2, 0.1), 2.319_574_784_327_578),
            ((0.0, 0.0), std::f64::consts::TAU),
        ];
        for ((mx, my), expect) in cases {
            let mu = MuParams::new(mx, my).unwrap();
            let got = angular_inner_product(|_| 1.0, |_| 1.0, mu, 24).unwrap();
            assert_relative_eq!(got, expect, max_relative = 1e-12);
        }
    }

    #[test]
    fn radial_mass() {
        // int_0^inf e^{-rho^2} rho^{1+2mux+2muy} drho = Gamma(1 + mux + muy)/2
        let mu = MuParams::new(0.3, 0.5).unwrap();
        let got = radial_inner_product(|_| 1.0, |_| 1.0, mu, HalfInt::ZERO, 24).unwrap();
        assert_relative_eq!(got, 0.5 * ln_gamma(1.8).exp(), max_relative = 1e-13);
    }

    #[test]
    fn dunkl_derivative_basics() {
        let mu = 0.7;
        let d_const = dunkl_derivative_apply(|_| 3.5, mu);
        assert!(d_const(1.3).abs() < 1e-9);
        assert!(d_const(0.0).abs() < 1e-9);

        let d_x = dunkl_derivative_apply(|x| x, mu);
        assert_relative_eq!(d_x(0.8), 1.0 + 2.0 * mu, epsilon = 1e-9);
        assert_relative_eq!(d_x(1e-8), 1.0 + 2.0 * mu, epsilon = 1e-9);

        let d_x2 = dunkl_derivative_apply(|x| x * x, mu);
        assert_relative_eq!(d_x2(1.7), 2.0 * 1.7, epsilon = 1e-9);
    }

    #[test]
    fn weight_kind_mismatch_is_reported() {
        let rule = gauss_rule(WeightKind::Laguerre { alpha: 0.5 }, 8).unwrap();
        assert!(inner_product_1d(|_| 1.0, |_| 1.0, 0.5, &rule).is_err());
        let rule = gauss_rule(WeightKind::GeneralizedHermite { mu: 0.2 }, 8).unwrap();
        assert!(inner_product_1d(|_| 1.0, |_| 1.0, 0.5, &rule).is_err());
    }
}
