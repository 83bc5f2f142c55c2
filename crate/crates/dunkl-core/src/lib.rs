//! Two-dimensional isotropic Dunkl oscillator: exact separated wavefunctions,
//! weighted Gauss quadrature, the Schwinger-Dunkl symmetry algebra as exact
//! finite matrices, and Cartesian <-> polar overlap coefficients built from
//! dual -1 Hahn polynomials.
//!
//! The model is governed by the Hamiltonian
//!
//! ```text
//! H = -1/2 [ (D_x^mux)^2 + (D_y^muy)^2 ] + 1/2 (x^2 + y^2),
//! ```
//!
//! where `D_x^mu = d/dx + (mu/x)(I - R_x)` is the Dunkl derivative and `R_x`
//! the reflection `x -> -x`. Every symmetry operator commutes with `H`, so all
//! operator identities reduce to exact finite linear algebra on the `(N+1)`-
//! dimensional energy eigenspaces; the crate exploits that throughout.
//!
//! Modules:
//! - [`polynomials`]: Laguerre, Jacobi, generalized Hermite via three-term
//!   recurrences, and the dual -1 Hahn data (recurrence, grid, weights).
//! - [`quadrature`]: Gauss rules for the three singular weights of the model,
//!   weighted inner products and the Dunkl-derivative anti-Hermiticity harness.
//! - [`wavefunctions`]: closed-form separated eigenfunctions and energies.
//! - [`algebra`]: per-level matrix blocks of the ladder, reflection and
//!   symmetry operators; verification of the parabose and Schwinger-Dunkl
//!   relations, the Casimir value, and the two-module Casimir identification.
//! - [`overlaps`]: Cartesian <-> polar expansion coefficients via three
//!   independent routes (closed form, block diagonalization, 2D quadrature).

pub mod algebra;
pub mod overlaps;
pub mod polynomials;
pub mod quadrature;
pub mod wavefunctions;

use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("{name} = {value} is out of range: must be > {limit}")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        limit: f64,
    },
    #[error("invalid index: {0}")]
    InvalidIndex(String),
    #[error("recurrence coefficient u_{n} = {value} is not positive: degenerate family")]
    DegenerateFamily { n: usize, value: f64 },
    #[error("quadrature rule has weight kind {found}, expected {expected}")]
    WeightKindMismatch { expected: String, found: String },
    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(u32, u32),
    #[error("eigenvalue solve failed: {0}")]
    EigenFailure(String),
    #[error("eigenvalues {0} and {1} closer than {2}: cannot label eigenvectors")]
    DegenerateEigenvalue(f64, f64, f64),
}

/// Result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// The two deformation parameters of the model.
///
/// Both must exceed -1/2 so that the weight functions `|x|^{2mu}` define
/// positive measures; constructors enforce this.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuParams {
    mu_x: f64,
    mu_y: f64,
}

impl MuParams {
    pub fn new(mu_x: f64, mu_y: f64) -> Result<Self> {
        for (name, value) in [("mu_x", mu_x), ("mu_y", mu_y)] {
            if !(value > -0.5) || !value.is_finite() {
                return Err(Error::ParameterOutOfRange {
                    name,
                    value,
                    limit: -0.5,
                });
            }
        }
        Ok(Self { mu_x, mu_y })
    }

    pub fn mu_x(&self) -> f64 {
        self.mu_x
    }

    pub fn mu_y(&self) -> f64 {
        self.mu_y
    }

    /// `mu_x + mu_y`, the combination entering most spectra.
    pub fn sum(&self) -> f64 {
        self.mu_x + self.mu_y
    }
}

/// Half-integer stored exactly as twice its value.
///
/// Polar quantum numbers are integers in the even-parity sector and odd
/// half-integers in the mixed sector; keeping them as `2n` in an `i64`
/// removes any parity misclassification that floats would invite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };

    pub fn from_integer(n: i64) -> Self {
        Self { twice: 2 * n }
    }

    /// Builds `t/2` from the doubled value `t`.
    pub fn from_twice(twice: i64) -> Self {
        Self { twice }
    }

    pub fn twice(&self) -> i64 {
        self.twice
    }

    pub fn is_integer(&self) -> bool {
        self.twice % 2 == 0
    }

    pub fn as_f64(&self) -> f64 {
        self.twice as f64 / 2.0
    }
}

impl std::fmt::Display for HalfInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl std::str::FromStr for HalfInt {
    type Err = Error;

    /// Accepts `"2"` or `"3/2"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidIndex(format!("cannot parse half-integer from {s:?}"));
        if let Some((num, den)) = s.split_once('/') {
            if den.trim() != "2" {
                return Err(bad());
            }
            let t: i64 = num.trim().parse().map_err(|_| bad())?;
            Ok(Self::from_twice(t))
        } else {
            let n: i64 = s.trim().parse().map_err(|_| bad())?;
            Ok(Self::from_integer(n))
        }
    }
}

/// Reflection eigenvalue, +1 or -1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(&self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn product(&self, other: Sign) -> Sign {
        if *self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+" | "+1" | "plus" => Ok(Sign::Plus),
            "-" | "-1" | "minus" => Ok(Sign::Minus),
            other => Err(Error::InvalidIndex(format!("not a sign: {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu_params_rejects_boundary() {
        assert!(MuParams::new(-0.5, 0.0).is_err());
        assert!(MuParams::new(0.0, -0.7).is_err());
        assert!(MuParams::new(f64::NAN, 0.0).is_err());
        assert!(MuParams::new(-0.49, 1.9).is_ok());
    }

    #[test]
    fn half_int_roundtrip() {
        let n: HalfInt = "3/2".parse().unwrap();
        assert_eq!(n.twice(), 3);
        assert!(!n.is_integer());
        assert_eq!(n.to_string(), "3/2");
        let m: HalfInt = "4".parse().unwrap();
        assert_eq!(m.as_f64(), 4.0);
        assert_eq!(m.to_string(), "4");
        assert!("5/3".parse::<HalfInt>().is_err());
    }

    #[test]
    fn sign_product() {
        assert_eq!(Sign::Minus.product(Sign::Minus), Sign::Plus);
        assert_eq!(Sign::Minus.product(Sign::Plus), Sign::Minus);
        assert_eq!("-".parse::<Sign>().unwrap(), Sign::Minus);
    }
}
