//! Closed-form separated eigenfunctions of the oscillator and their energies.
//!
//! Cartesian basis: `Psi_{nx,ny}(x,y) = e^{-(x^2+y^2)/2} H_nx^{mux}(x) H_ny^{muy}(y)`
//! with energy `E = nx + ny + mux + muy + 1`.
//!
//! Polar basis: `Psi = P_k(rho) Phi_n^{sx sy}(phi)` with energy
//! `E = 2(k+n) + mux + muy + 1`; the angular factor is one of four parity
//! families built on Jacobi polynomials in `u = -cos 2 phi`, and the radial
//! factor is Laguerre-type with parameter `2n + mux + muy`.
//!
//! The first-order angular operator `J2 = i(x D_y - y D_x)` mixes the parity
//! families pairwise; its eigenfunctions `F` (Jacobi-Dunkl combinations) are
//! also provided together with an exact application of `J2` for residual
//! checks.

use num_complex::Complex64;

use crate::polynomials::{
    generalized_hermite_deriv_unchecked, generalized_hermite_unchecked, jacobi_deriv_unchecked,
    jacobi_unchecked, laguerre_unchecked, ln_gamma,
};
use crate::quadrature::WavefunctionClass;
use crate::{Error, HalfInt, MuParams, Result, Sign};

/// Cartesian quantum numbers `|n_x, n_y>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CartesianIndex {
    pub n_x: u32,
    pub n_y: u32,
}

impl CartesianIndex {
    pub fn new(n_x: u32, n_y: u32) -> Self {
        Self { n_x, n_y }
    }

    pub fn level(&self) -> u32 {
        self.n_x + self.n_y
    }

    pub fn label(&self) -> String {
        format!("|{},{}\u{27e9}", self.n_x, self.n_y)
    }
}

/// Polar quantum numbers `|k, n; s_x, s_y>`.
///
/// `n` is a non-negative integer when `s_x s_y = +1` and a positive odd
/// half-integer when `s_x s_y = -1`; the state `(n=0, --)` does not exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PolarIndex {
    k: u32,
    n: HalfInt,
    s_x: Sign,
    s_y: Sign,
}

impl PolarIndex {
    pub fn new(k: u32, n: HalfInt, s_x: Sign, s_y: Sign) -> Result<Self> {
        if n.twice() < 0 {
            return Err(Error::InvalidIndex(format!("n = {n} must be non-negative")));
        }
        match s_x.product(s_y) {
            Sign::Plus => {
                if !n.is_integer() {
                    return Err(Error::InvalidIndex(format!(
                        "n = {n} must be an integer when s_x s_y = +1"
                    )));
                }
                if n.twice() == 0 && s_x == Sign::Minus {
                    return Err(Error::InvalidIndex(
                        "the (n=0, --) angular state vanishes identically".into(),
                    ));
                }
            }
            Sign::Minus => {
                if n.is_integer() || n.twice() < 1 {
                    return Err(Error::InvalidIndex(format!(
                        "n = {n} must be a positive half-odd integer when s_x s_y = -1"
                    )));
                }
            }
        }
        Ok(Self { k, n, s_x, s_y })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> HalfInt {
        self.n
    }

    pub fn s_x(&self) -> Sign {
        self.s_x
    }

    pub fn s_y(&self) -> Sign {
        self.s_y
    }

    /// Total level `N = 2(k + n)`.
    pub fn level(&self) -> u32 {
        2 * self.k + self.n.twice() as u32
    }

    /// Separation constant `m^2 = 4 n (n + mu_x + mu_y)`.
    pub fn m_squared(&self, mu: MuParams) -> f64 {
        let n = self.n.as_f64();
        4.0 * n * (n + mu.sum())
    }

    pub fn label(&self) -> String {
        format!("|{},{};{}{}\u{27e9}", self.k, self.n, self.s_x, self.s_y)
    }
}

/// Labels for the Jacobi-Dunkl eigenfunctions of `J2`.
///
/// `epsilon = s_x s_y` selects the sector, `branch` the sign of the
/// eigenvalue `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct JacobiDunklIndex {
    n: HalfInt,
    epsilon: Sign,
    branch: Sign,
}

impl JacobiDunklIndex {
    pub fn new(n: HalfInt, epsilon: Sign, branch: Sign) -> Result<Self> {
        match epsilon {
            Sign::Plus => {
                if !n.is_integer() || n.twice() < 0 {
                    return Err(Error::InvalidIndex(format!(
                        "n = {n} must be a non-negative integer in the + sector"
                    )));
                }
            }
            Sign::Minus => {
                if n.is_integer() || n.twice() < 1 {
                    return Err(Error::InvalidIndex(format!(
                        "n = {n} must be a positive half-odd integer in the - sector"
                    )));
                }
            }
        }
        Ok(Self { n, epsilon, branch })
    }

    pub fn n(&self) -> HalfInt {
        self.n
    }

    pub fn epsilon(&self) -> Sign {
        self.epsilon
    }

    pub fn branch(&self) -> Sign {
        self.branch
    }
}

/// `E = n_x + n_y + mu_x + mu_y + 1`.
pub fn energy_cartesian(idx: CartesianIndex, mu: MuParams) -> f64 {
    idx.level() as f64 + mu.sum() + 1.0
}

/// `E = 2(k + n) + mu_x + mu_y + 1`.
pub fn energy_polar(idx: PolarIndex, mu: MuParams) -> f64 {
    idx.level() as f64 + mu.sum() + 1.0
}

/// All Cartesian states of level `N`, ordered by increasing `n_x`.
pub fn cartesian_states(level: u32) -> Vec<CartesianIndex> {
    (0..=level)
        .map(|n_x| CartesianIndex::new(n_x, level - n_x))
        .collect()
}

/// All valid polar states of level `N`, in the canonical order used by
/// overlap tables: ascending `n`, with `++` before `--` (even levels) and
/// `-+` before `+-` (odd levels).
pub fn polar_states(level: u32) -> Vec<PolarIndex> {
    let mut out = Vec::with_capacity(level as usize + 1);
    if level % 2 == 0 {
        for n in 0..=level / 2 {
            let k = level / 2 - n;
            let n_half = HalfInt::from_integer(n as i64);
            out.push(PolarIndex::new(k, n_half, Sign::Plus, Sign::Plus).unwrap());
            if n > 0 {
                out.push(PolarIndex::new(k, n_half, Sign::Minus, Sign::Minus).unwrap());
            }
        }
    } else {
        for j in 0..(level + 1) / 2 {
            let n = HalfInt::from_twice(2 * j as i64 + 1);
            let k = (level - (2 * j + 1)) / 2;
            out.push(PolarIndex::new(k, n, Sign::Minus, Sign::Plus).unwrap());
            out.push(PolarIndex::new(k, n, Sign::Plus, Sign::Minus).unwrap());
        }
    }
    out
}

/// One-dimensional eigenfunction `psi_n(x) = e^{-x^2/2} H_n^{mu}(x)`.
pub fn psi_1d(n: u32, mu: f64, x: f64) -> Result<f64> {
    Ok((-0.5 * x * x).exp() * crate::polynomials::generalized_hermite_eval(n, mu, x)?)
}

/// A 1D eigenfunction presented through its Gaussian-stripped part, for the
/// weighted inner products and the anti-Hermiticity harness.
#[derive(Debug, Clone, Copy)]
pub struct HermiteMode {
    pub n: u32,
    pub mu: f64,
}

impl WavefunctionClass for HermiteMode {
    fn bare(&self, x: f64) -> f64 {
        generalized_hermite_unchecked(self.n, self.mu, x)
    }

    fn bare_deriv(&self, x: f64) -> f64 {
        generalized_hermite_deriv_unchecked(self.n, self.mu, x)
    }
}

/// Full 2D Cartesian eigenfunction.
pub fn psi_cartesian(idx: CartesianIndex, mu: MuParams, x: f64, y: f64) -> f64 {
    (-0.5 * (x * x + y * y)).exp() * psi_cartesian_bare(idx, mu, x, y)
}

/// Cartesian eigenfunction with the Gaussian stripped.
pub fn psi_cartesian_bare(idx: CartesianIndex, mu: MuParams, x: f64, y: f64) -> f64 {
    generalized_hermite_unchecked(idx.n_x, mu.mu_x(), x)
        * generalized_hermite_unchecked(idx.n_y, mu.mu_y(), y)
}

/// Normalization constant of the angular factor, squared log.
fn angular_ln_norm_sq(idx: &PolarIndex, mu: MuParams) -> f64 {
    let n = idx.n.as_f64();
    let s = mu.sum();
    let ln2 = std::f64::consts::LN_2;
    match (idx.s_x, idx.s_y) {
        (Sign::Plus, Sign::Plus) => {
            if idx.n.twice() == 0 {
                // (2n+s) Gamma(n+s) -> Gamma(s+1) at n = 0, valid down to s = 0
                ln_gamma(s + 1.0) - ln2 - ln_gamma(mu.mu_x() + 0.5) - ln_gamma(mu.mu_y() + 0.5)
            } else {
                (2.0 * n + s).ln() + ln_gamma(n + s) + ln_gamma(n + 1.0)
                    - ln2
                    - ln_gamma(n + mu.mu_x() + 0.5)
                    - ln_gamma(n + mu.mu_y() + 0.5)
            }
        }
        (Sign::Minus, Sign::Minus) => {
            (2.0 * n + s).ln() + ln_gamma(n + s + 1.0) + ln_gamma(n)
                - ln2
                - ln_gamma(n + mu.mu_x() + 0.5)
                - ln_gamma(n + mu.mu_y() + 0.5)
        }
        (Sign::Plus, Sign::Minus) => {
            (2.0 * n + s).ln() + ln_gamma(n + s + 0.5) + ln_gamma(n + 0.5)
                - ln2
                - ln_gamma(n + mu.mu_x())
                - ln_gamma(n + mu.mu_y() + 1.0)
        }
        (Sign::Minus, Sign::Plus) => {
            (2.0 * n + s).ln() + ln_gamma(n + s + 0.5) + ln_gamma(n + 0.5)
                - ln2
                - ln_gamma(n + mu.mu_x() + 1.0)
                - ln_gamma(n + mu.mu_y())
        }
    }
}

/// Angular eigenfunction `Phi_n^{s_x s_y}(phi)`, normalized against
/// `|cos phi|^{2 mu_x} |sin phi|^{2 mu_y} dphi` on `[0, 2 pi]`.
pub fn phi_angular(idx: &PolarIndex, mu: MuParams, phi: f64) -> f64 {
    let c = (0.5 * angular_ln_norm_sq(idx, mu)).exp();
    let u = -(2.0 * phi).cos();
    let n = idx.n.twice(); // 2n
    match (idx.s_x, idx.s_y) {
        (Sign::Plus, Sign::Plus) => {
            c * jacobi_unchecked((n / 2) as u32, mu.mu_x() - 0.5, mu.mu_y() - 0.5, u)
        }
        (Sign::Minus, Sign::Minus) => {
            c * phi.sin()
                * phi.cos()
                * jacobi_unchecked((n / 2 - 1) as u32, mu.mu_x() + 0.5, mu.mu_y() + 0.5, u)
        }
        (Sign::Plus, Sign::Minus) => {
            c * phi.sin()
                * jacobi_unchecked((n / 2) as u32, mu.mu_x() - 0.5, mu.mu_y() + 0.5, u)
        }
        (Sign::Minus, Sign::Plus) => {
            c * phi.cos()
                * jacobi_unchecked((n / 2) as u32, mu.mu_x() + 0.5, mu.mu_y() - 0.5, u)
        }
    }
}

/// `d/dphi` of [`phi_angular`], exact (chain rule through `u = -cos 2 phi`).
pub fn phi_angular_deriv(idx: &PolarIndex, mu: MuParams, phi: f64) -> f64 {
    let c = (0.5 * angular_ln_norm_sq(idx, mu)).exp();
    let u = -(2.0 * phi).cos();
    let du = 2.0 * (2.0 * phi).sin();
    let n = idx.n.twice();
    match (idx.s_x, idx.s_y) {
        (Sign::Plus, Sign::Plus) => {
            let deg = (n / 2) as u32;
            c * jacobi_deriv_unchecked(deg, mu.mu_x() - 0.5, mu.mu_y() - 0.5, u) * du
        }
        (Sign::Minus, Sign::Minus) => {
            let deg = (n / 2 - 1) as u32;
            let p = jacobi_unchecked(deg, mu.mu_x() + 0.5, mu.mu_y() + 0.5, u);
            let dp = jacobi_deriv_unchecked(deg, mu.mu_x() + 0.5, mu.mu_y() + 0.5, u);
            c * ((2.0 * phi).cos() * p + phi.sin() * phi.cos() * dp * du)
        }
        (Sign::Plus, Sign::Minus) => {
            let deg = (n / 2) as u32;
            let p = jacobi_unchecked(deg, mu.mu_x() - 0.5, mu.mu_y() + 0.5, u);
            let dp = jacobi_deriv_unchecked(deg, mu.mu_x() - 0.5, mu.mu_y() + 0.5, u);
            c * (phi.cos() * p + phi.sin() * dp * du)
        }
        (Sign::Minus, Sign::Plus) => {
            let deg = (n / 2) as u32;
            let p = jacobi_unchecked(deg, mu.mu_x() + 0.5, mu.mu_y() - 0.5, u);
            let dp = jacobi_deriv_unchecked(deg, mu.mu_x() + 0.5, mu.mu_y() - 0.5, u);
            c * (-phi.sin() * p + phi.cos() * dp * du)
        }
    }
}

/// Radial eigenfunction
/// `P_k(rho) = sqrt(2 k! / Gamma(k + 2n + s + 1)) e^{-rho^2/2} rho^{2n} L_k^{(2n+s)}(rho^2)`.
pub fn p_radial(k: u32, n: HalfInt, mu: MuParams, rho: f64) -> f64 {
    (-0.5 * rho * rho).exp() * rho.powi(n.twice() as i32) * radial_profile_value(k, n, mu, rho * rho)
}

/// The profile `t -> pref * L_k^{(2n+s)}(t)` such that
/// `P_k(rho) = e^{-rho^2/2} rho^{2n} profile(rho^2)`; this is the form the
/// sector-`n` radial quadrature consumes.
pub fn p_radial_profile(k: u32, n: HalfInt, mu: MuParams) -> impl Fn(f64) -> f64 {
    let alpha = n.twice() as f64 + mu.sum();
    let pref = (0.5
        * (std::f64::consts::LN_2 + ln_gamma(k as f64 + 1.0) - ln_gamma(k as f64 + alpha + 1.0)))
    .exp();
    move |t: f64| pref * laguerre_unchecked(k, alpha, t)
}

fn radial_profile_value(k: u32, n: HalfInt, mu: MuParams, t: f64) -> f64 {
    p_radial_profile(k, n, mu)(t)
}

/// `lambda` eigenvalue of `J2` for a Jacobi-Dunkl label:
/// `+-2 sqrt(n(n+s))` in the `+` sector, `+-2 sqrt((n+mu_x)(n+mu_y))` in the
/// `-` sector.
pub fn jacobi_dunkl_lambda(idx: &JacobiDunklIndex, mu: MuParams) -> f64 {
    let n = idx.n.as_f64();
    let magnitude = match idx.epsilon {
        Sign::Plus => 2.0 * (n * (n + mu.sum())).sqrt(),
        Sign::Minus => 2.0 * ((n + mu.mu_x()) * (n + mu.mu_y())).sqrt(),
    };
    idx.branch.value() * magnitude
}

fn jd_components(idx: &JacobiDunklIndex) -> (PolarIndex, Option<PolarIndex>) {
    match idx.epsilon {
        Sign::Plus => {
            let plus = PolarIndex::new(0, idx.n, Sign::Plus, Sign::Plus).unwrap();
            let minus = if idx.n.twice() == 0 {
                None
            } else {
                Some(PolarIndex::new(0, idx.n, Sign::Minus, Sign::Minus).unwrap())
            };
            (plus, minus)
        }
        Sign::Minus => {
            let mp = PolarIndex::new(0, idx.n, Sign::Minus, Sign::Plus).unwrap();
            let pm = PolarIndex::new(0, idx.n, Sign::Plus, Sign::Minus).unwrap();
            (mp, Some(pm))
        }
    }
}

/// Jacobi-Dunkl eigenfunction of `J2`:
///
/// ```text
/// + sector: F = (Phi_n^{++} + branch * i * Phi_n^{--})/sqrt(2)   (n > 0)
///           F = Phi_0^{++}                                        (n = 0)
/// - sector: F = (Phi_n^{-+} - branch * i * Phi_n^{+-})/sqrt(2)
/// ```
///
/// The `1/sqrt(2)` makes `<F, F> = 1` for the mixed states.
pub fn jacobi_dunkl_f(idx: &JacobiDunklIndex, mu: MuParams, phi: f64) -> Complex64 {
    let (first, second) = jd_components(idx);
    let a = phi_angular(&first, mu, phi);
    match second {
        None => Complex64::new(a, 0.0),
        Some(ref sec) => {
            let b = phi_angular(sec, mu, phi);
            let i_coef = match idx.epsilon {
                Sign::Plus => idx.branch.value(),
                Sign::Minus => -idx.branch.value(),
            };
            Complex64::new(a, i_coef * b) / 2.0_f64.sqrt()
        }
    }
}

fn jacobi_dunkl_f_deriv(idx: &JacobiDunklIndex, mu: MuParams, phi: f64) -> Complex64 {
    let (first, second) = jd_components(idx);
    let a = phi_angular_deriv(&first, mu, phi);
    match second {
        None => Complex64::new(a, 0.0),
        Some(ref sec) => {
            let b = phi_angular_deriv(sec, mu, phi);
            let i_coef = match idx.epsilon {
                Sign::Plus => idx.branch.value(),
                Sign::Minus => -idx.branch.value(),
            };
            Complex64::new(a, i_coef * b) / 2.0_f64.sqrt()
        }
    }
}

/// Applies the polar-coordinate form of `J2`,
/// `i [ d/dphi + mu_y cot(phi) (I - R_y) - mu_x tan(phi) (I - R_x) ]`,
/// to the Jacobi-Dunkl eigenfunction; derivative exact, reflections by
/// evaluation at the mirrored angles.
pub fn jacobi_dunkl_apply_j2(idx: &JacobiDunklIndex, mu: MuParams, phi: f64) -> Complex64 {
    let f = |p: f64| jacobi_dunkl_f(idx, mu, p);
    let value = f(phi);
    let deriv = jacobi_dunkl_f_deriv(idx, mu, phi);
    let ry = f(-phi);
    let rx = f(std::f64::consts::PI - phi);
    let cot = phi.cos() / phi.sin();
    let tan = phi.tan();
    Complex64::i() * (deriv + mu.mu_y() * cot * (value - ry) - mu.mu_x() * tan * (value - rx))
}
