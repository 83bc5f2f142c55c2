//! Expansion coefficients between the Cartesian and polar eigenbases.
//!
//! Within one energy level the bases are connected in two steps. First the
//! eigenbasis of the operator `Q` (the two-module Casimir) against the
//! Cartesian states: those coefficients are dual -1 Hahn polynomials,
//!
//! ```text
//! <q_l | m, N-m> = sign_m * sqrt( w_row(l) / (U_1 ... U_m) ) * Phat_m(q_l),
//! ```
//!
//! with `Phat_m` monic in `q`, `U_m = [m]_mux [N-m+1]_muy`,
//! `sign_m = (-1)^{m(m+1)/2}` (the sign of the product `A_1 ... A_m` of the
//! signed recurrence coefficients), and `w_row` the dual -1 Hahn weights in
//! the orientation fixed per parity by the unitarity requirement. Second, a
//! real 2x2 rotation per `n` (built from the unit-modulus mixing coefficients
//! `zeta_n` / `xi_n`) takes `Q`-eigenvectors to the polar states.
//!
//! Three independent routes produce the same table: this closed form, direct
//! diagonalization of the `Q` level block, and 2D quadrature of the separated
//! wavefunctions. They agree entrywise in the fixed phase convention.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{symmetry_block, SymmetryOp};
use crate::polynomials::{dual_m1_hahn_family, mu_number, DualMinusOneHahnFamily};
use crate::quadrature::{angular_nodes, gauss_rule, WeightKind};
use crate::wavefunctions::{
    cartesian_states, p_radial_profile, phi_angular, polar_states, psi_cartesian_bare,
    CartesianIndex, PolarIndex,
};
use crate::{Error, HalfInt, MuParams, Result, Sign};

type CMatrix = DMatrix<Complex64>;

/// How a table was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    ClosedForm,
    Diagonalization,
    Quadrature,
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Provenance::ClosedForm => "closed-form",
            Provenance::Diagonalization => "diagonalization",
            Provenance::Quadrature => "quadrature",
        })
    }
}

/// A unitary overlap table on one energy level.
///
/// Rows are `Q`-eigenstates (`q_0 .. q_N`) or polar states depending on the
/// producing routine; columns are always the Cartesian states `|m, N-m>` in
/// ascending `m`.
#[derive(Debug, Clone)]
pub struct OverlapTable {
    pub level: u32,
    pub provenance: Provenance,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    matrix: CMatrix,
    /// Which dual -1 Hahn weight orientation satisfied unitarity
    /// ("omega[N-l]" or "omega[l]"); empty for non-closed-form tables.
    pub weight_indexing: &'static str,
}

impl OverlapTable {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.level as usize + 1
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    /// `max |T T+ - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim();
        let gram = &self.matrix * self.matrix.adjoint();
        let id = CMatrix::identity(n, n);
        (gram - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Multiplies each row by the phase that makes its first entry of
    /// significant magnitude real positive.
    pub fn apply_row_phase_convention(&mut self) {
        let n = self.dim();
        for r in 0..n {
            let row_max = (0..n)
                .map(|ccol| self.matrix[(r, ccol)].norm())
                .fold(0.0, f64::max);
            let threshold = 1e-8 * row_max;
            let pivot = (0..n).find(|&ccol| self.matrix[(r, ccol)].norm() > threshold);
            if let Some(p) = pivot {
                let z = self.matrix[(r, p)];
                let phase = z.conj() / z.norm();
                for ccol in 0..n {
                    self.matrix[(r, ccol)] *= phase;
                }
            }
        }
    }

    /// Largest entrywise difference against another table of the same level.
    pub fn max_entry_discrepancy(&self, other: &OverlapTable) -> Result<f64> {
        if self.level != other.level {
            return Err(Error::LevelMismatch(self.level, other.level));
        }
        Ok((&self.matrix - &other.matrix)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max))
    }

    /// CSV serialization: `row,col,re,im,modulus` with label fields quoted
    /// and 17-significant-digit floats.
    pub fn write_csv<W: std::io::Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "row,col,re,im,modulus")?;
        for r in 0..self.dim() {
            for ccol in 0..self.dim() {
                let z = self.matrix[(r, ccol)];
                writeln!(
                    out,
                    "\"{}\",\"{}\",{:.16e},{:.16e},{:.16e}",
                    self.row_labels[r],
                    self.col_labels[ccol],
                    z.re,
                    z.im,
                    z.norm()
                )?;
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = (0..self.dim())
            .flat_map(|r| (0..self.dim()).map(move |ccol| (r, ccol)))
            .map(|(r, ccol)| {
                let z = self.matrix[(r, ccol)];
                serde_json::json!({
                    "row": self.row_labels[r],
                    "col": self.col_labels[ccol],
                    "re": z.re,
                    "im": z.im,
                    "modulus": z.norm(),
                })
            })
            .collect();
        serde_json::json!({
            "level": self.level,
            "provenance": self.provenance.to_string(),
            "weight_indexing": self.weight_indexing,
            "entries": entries,
        })
    }
}

/// Unit-modulus mixing coefficient between `J2` eigenvectors and the
/// `Q` eigenbasis.
///
/// `+` sector: `zeta_n = (mux + muy - 2i sqrt(n(n+s)))/(2n + s)`, `n >= 1`;
/// `-` sector: `xi_n = (mux - muy + 2i sqrt((n+mux)(n+muy)))/(2n + s)`.
#[derive(Debug, Clone, Copy)]
pub struct MixingCoefficient {
    pub n: HalfInt,
    pub sector: Sign,
    pub value: Complex64,
}

pub fn mixing_coefficient(n: HalfInt, sector: Sign, mu: MuParams) -> Result<MixingCoefficient> {
    let nf = n.as_f64();
    let s = mu.sum();
    let value = match sector {
        Sign::Plus => {
            if !n.is_integer() || n.twice() < 2 {
                return Err(Error::InvalidIndex(format!(
                    "zeta_n needs integer n >= 1, got {n} (the n = 0 state needs no mixing)"
                )));
            }
            Complex64::new(s, -2.0 * (nf * (nf + s)).sqrt()) / (2.0 * nf + s)
        }
        Sign::Minus => {
            if n.is_integer() || n.twice() < 1 {
                return Err(Error::InvalidIndex(format!(
                    "xi_n needs positive half-odd n, got {n}"
                )));
            }
            Complex64::new(
                mu.mu_x() - mu.mu_y(),
                2.0 * ((nf + mu.mu_x()) * (nf + mu.mu_y())).sqrt(),
            ) / (2.0 * nf + s)
        }
    };
    Ok(MixingCoefficient { n, sector, value })
}

/// The dual -1 Hahn family attached to level `N` through the parameter
/// identification of the oscillator: even `N` uses
/// `(alpha, beta) = (2 muy + N + 1, 2 mux + N + 1)`, odd `N` uses
/// `(2 mux, 2 muy)`.
pub fn oscillator_hahn_family(level: u32, mu: MuParams) -> Result<DualMinusOneHahnFamily> {
    let n = level as usize;
    if level % 2 == 0 {
        dual_m1_hahn_family(
            2.0 * mu.mu_y() + level as f64 + 1.0,
            2.0 * mu.mu_x() + level as f64 + 1.0,
            n,
        )
    } else {
        dual_m1_hahn_family(2.0 * mu.mu_x(), 2.0 * mu.mu_y(), n)
    }
}

fn q_values(level: u32, mu: MuParams) -> Vec<f64> {
    crate::algebra::q_spectrum_closed(level, mu)
}

/// `U_m = [m]_mux [N-m+1]_muy`, `m = 0..=N` (`U_0` unused, stored 0).
fn u_coefficients(level: u32, mu: MuParams) -> Vec<f64> {
    (0..=level)
        .map(|m| {
            if m == 0 {
                0.0
            } else {
                mu_number(m, mu.mu_x()) * mu_number(level - m + 1, mu.mu_y())
            }
        })
        .collect()
}

/// Diagonal of the `Q` recurrence: `B_m` for even levels, `Btilde_m` for odd.
fn b_coefficients(level: u32, mu: MuParams) -> Vec<f64> {
    (0..=level)
        .map(|m| {
            if level % 2 == 0 {
                let sign = if (m + 1) % 2 == 0 { 1.0 } else { -1.0 };
                sign * mu.sum() - 0.5
            } else {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                sign * (mu.mu_x() - mu.mu_y()) + 0.5
            }
        })
        .collect()
}

fn monic_row(q: f64, b: &[f64], u: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut values = Vec::with_capacity(n);
    let mut prev = 0.0;
    let mut cur = 1.0;
    for m in 0..n {
        values.push(cur);
        let next = (q - b[m]) * cur - if m >= 1 { u[m] * prev } else { 0.0 };
        prev = cur;
        cur = next;
    }
    values
}

fn sign_a_product(m: usize) -> f64 {
    if (m * (m + 1) / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Closed-form table `<q_l | m, N-m>` from the dual -1 Hahn data.
///
/// The orientation of the weight sequence against the `q_l` labels is the
/// one of the two candidates that yields a unitary table, resolved at
/// construction (even levels need the reversed reading `omega[N-l]`).
pub fn q_overlap_closed_form(level: u32, mu: MuParams) -> Result<OverlapTable> {
    let n = level as usize;
    let fam = oscillator_hahn_family(level, mu)?;
    let q = q_values(level, mu);
    let u = u_coefficients(level, mu);
    let b = b_coefficients(level, mu);

    let build = |weights_for_row: &dyn Fn(usize) -> f64| -> CMatrix {
        let mut t = CMatrix::zeros(n + 1, n + 1);
        for l in 0..=n {
            let row = monic_row(q[l], &b, &u);
            let mut u_prod = 1.0;
            for m in 0..=n {
                if m >= 1 {
                    u_prod *= u[m];
                }
                let value = sign_a_product(m) * (weights_for_row(l) / u_prod).sqrt() * row[m];
                t[(l, m)] = Complex64::new(value, 0.0);
            }
        }
        t
    };

    let direct = build(&|l| fam.weights[l]);
    let reversed = build(&|l| fam.weights[n - l]);
    let defect = |t: &CMatrix| {
        let gram = t * t.adjoint();
        (gram - CMatrix::identity(n + 1, n + 1))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    };
    let (matrix, weight_indexing) = if defect(&direct) <= defect(&reversed) {
        (direct, "omega[l]")
    } else {
        (reversed, "omega[N-l]")
    };

    Ok(OverlapTable {
        level,
        provenance: Provenance::ClosedForm,
        row_labels: (0..=n).map(|l| format!("q_{l}")).collect(),
        col_labels: cartesian_states(level).iter().map(|c| c.label()).collect(),
        matrix,
        weight_indexing,
    })
}

/// Independent route: numerically diagonalizes the `Q` level block, labels
/// eigenvectors by matching eigenvalues to the closed-form `q_l`, and applies
/// the row phase convention.
pub fn q_overlap_oracle(level: u32, mu: MuParams) -> Result<OverlapTable> {
    let n = level as usize;
    let block = symmetry_block(SymmetryOp::Q, level, mu);
    let (values, vectors) = block.hermitian_eigen()?;
    let targets = q_values(level, mu);

    let mut matrix = CMatrix::zeros(n + 1, n + 1);
    let mut used = vec![false; n + 1];
    for (l, &target) in targets.iter().enumerate() {
        let (best, dist) = values
            .iter()
            .enumerate()
            .map(|(j, v)| (j, (v - target).abs()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if dist > 1e-8 {
            return Err(Error::EigenFailure(format!(
                "no eigenvalue within 1e-8 of q_{l} = {target}; closest at distance {dist}"
            )));
        }
        if used[best] {
            return Err(Error::DegenerateEigenvalue(target, values[best], 1e-8));
        }
        used[best] = true;
        // <q_l | m, N-m> is the conjugated eigenvector component
        for m in 0..=n {
            matrix[(l, m)] = vectors[(m, best)].conj();
        }
    }

    let mut table = OverlapTable {
        level,
        provenance: Provenance::Diagonalization,
        row_labels: (0..=n).map(|l| format!("q_{l}")).collect(),
        col_labels: cartesian_states(level).iter().map(|c| c.label()).collect(),
        matrix,
        weight_indexing: "",
    };
    table.apply_row_phase_convention();
    Ok(table)
}

/// Rotation coefficients from the mixing coefficient: the pair
/// `(|1 - zeta|/2, |1 + zeta|/2)` is a point on the unit circle.
fn rotation_pair(n: HalfInt, sector: Sign, mu: MuParams) -> Result<(f64, f64)> {
    let zeta = mixing_coefficient(n, sector, mu)?.value;
    let one = Complex64::new(1.0, 0.0);
    Ok(((one - zeta).norm() / 2.0, (one + zeta).norm() / 2.0))
}

/// Converts the closed-form `Q` table to polar-state rows
/// `<k, n; s_x, s_y | m, N-m>`.
///
/// The `Q` eigenvectors mix each polar pair through `zeta_n` (even levels) or
/// `xi_n` (odd levels); at the wavefunction level the net effect is the real
/// rotation below, with a `(-1)^k` orientation factor from the radial part.
pub fn polar_cartesian_overlap(level: u32, mu: MuParams) -> Result<OverlapTable> {
    let base = q_overlap_closed_form(level, mu)?;
    let n = level as usize;
    let states = polar_states(level);
    let mut matrix = CMatrix::zeros(n + 1, n + 1);

    let add_row = |l: usize, out: &mut CMatrix, r: usize, factor: f64| {
        for m in 0..=n {
            out[(r, m)] += base.matrix[(l, m)] * Complex64::new(factor, 0.0);
        }
    };

    let mut row = 0usize;
    if level % 2 == 0 {
        for nn in 0..=level / 2 {
            let k = level / 2 - nn;
            let orient = if k % 2 == 0 { 1.0 } else { -1.0 };
            if nn == 0 {
                add_row(0, &mut matrix, row, orient);
                row += 1;
            } else {
                // c = |1 - zeta_n|/2 = sqrt(n/(2n+s)), s = |1 + zeta_n|/2
                let (cc, ss) = rotation_pair(HalfInt::from_integer(nn as i64), Sign::Plus, mu)?;
                add_row(2 * nn as usize - 1, &mut matrix, row, orient * cc);
                add_row(2 * nn as usize, &mut matrix, row, orient * ss);
                add_row(2 * nn as usize - 1, &mut matrix, row + 1, -orient * ss);
                add_row(2 * nn as usize, &mut matrix, row + 1, orient * cc);
                row += 2;
            }
        }
    } else {
        for j in 0..(level as usize + 1) / 2 {
            let n_half = HalfInt::from_twice(2 * j as i64 + 1);
            let k = (level as usize - (2 * j + 1)) / 2;
            let orient = if k % 2 == 0 { 1.0 } else { -1.0 };
            // a = |1 + xi_n|/2 = sqrt((n+mux)/(2n+s)), b = |1 - xi_n|/2
            let (bb, aa) = rotation_pair(n_half, Sign::Minus, mu)?;
            add_row(2 * j, &mut matrix, row, orient * aa);
            add_row(2 * j + 1, &mut matrix, row, -orient * bb);
            add_row(2 * j, &mut matrix, row + 1, orient * bb);
            add_row(2 * j + 1, &mut matrix, row + 1, orient * aa);
            row += 2;
        }
    }

    Ok(OverlapTable {
        level,
        provenance: Provenance::ClosedForm,
        row_labels: states.iter().map(|p| p.label()).collect(),
        col_labels: base.col_labels.clone(),
        matrix,
        weight_indexing: base.weight_indexing,
    })
}

/// `<k, n; s_x, s_y | n_x, n_y>` by 2D quadrature of the separated
/// wavefunctions in polar coordinates (radial Gauss-Laguerre times the
/// four-quadrant angular Gauss-Jacobi rule).
///
/// States from different energy levels are orthogonal; the integral is
/// skipped and 0 returned by contract.
pub fn overlap_quadrature_oracle(
    polar: &PolarIndex,
    cart: &CartesianIndex,
    mu: MuParams,
    n_nodes: usize,
) -> Result<Complex64> {
    if polar.level() != cart.level() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let radial = gauss_rule(WeightKind::Laguerre { alpha: mu.sum() }, n_nodes)?;
    let (phis, ang_weights, prefactor) = angular_nodes(mu, n_nodes)?;
    let profile = p_radial_profile(polar.k(), polar.n(), mu);
    let tau = 2.0 * std::f64::consts::PI;

    let mut total = 0.0;
    for (&t, &wt) in radial.nodes.iter().zip(&radial.weights) {
        let rho = t.sqrt();
        let radial_bare = rho.powi(polar.n().twice() as i32) * profile(t);
        let mut angular_sum = 0.0;
        for (&phi, &wp) in phis.iter().zip(&ang_weights) {
            for image in [
                phi,
                std::f64::consts::PI - phi,
                std::f64::consts::PI + phi,
                tau - phi,
            ] {
                let x = rho * image.cos();
                let y = rho * image.sin();
                angular_sum +=
                    wp * phi_angular(polar, mu, image) * psi_cartesian_bare(*cart, mu, x, y);
            }
        }
        total += 0.5 * wt * radial_bare * prefactor * angular_sum;
    }
    Ok(Complex64::new(total, 0.0))
}

/// Full polar table at one level by quadrature; wavefunction values are
/// evaluated once per state on the shared grid.
pub fn polar_overlap_quadrature_table(
    level: u32,
    mu: MuParams,
    n_nodes: usize,
) -> Result<OverlapTable> {
    let n = level as usize;
    let radial = gauss_rule(WeightKind::Laguerre { alpha: mu.sum() }, n_nodes)?;
    let (phis, ang_weights, prefactor) = angular_nodes(mu, n_nodes)?;
    let tau = 2.0 * std::f64::consts::PI;

    // flattened grid of (rho, phi-image) points with combined weights
    let mut points = Vec::with_capacity(radial.nodes.len() * phis.len() * 4);
    for (&t, &wt) in radial.nodes.iter().zip(&radial.weights) {
        let rho = t.sqrt();
        for (&phi, &wp) in phis.iter().zip(&ang_weights) {
            for image in [
                phi,
                std::f64::consts::PI - phi,
                std::f64::consts::PI + phi,
                tau - phi,
            ] {
                points.push((rho, image, 0.5 * wt * prefactor * wp));
            }
        }
    }

    let polar = polar_states(level);
    let cart = cartesian_states(level);
    let polar_values: Vec<Vec<f64>> = polar
        .iter()
        .map(|p| {
            let profile = p_radial_profile(p.k(), p.n(), mu);
            points
                .iter()
                .map(|&(rho, phi, _)| {
                    rho.powi(p.n().twice() as i32) * profile(rho * rho) * phi_angular(p, mu, phi)
                })
                .collect()
        })
        .collect();
    let cart_values: Vec<Vec<f64>> = cart
        .iter()
        .map(|ci| {
            points
                .iter()
                .map(|&(rho, phi, _)| psi_cartesian_bare(*ci, mu, rho * phi.cos(), rho * phi.sin()))
                .collect()
        })
        .collect();

    let mut matrix = CMatrix::zeros(n + 1, n + 1);
    for (r, pv) in polar_values.iter().enumerate() {
        for (ccol, cv) in cart_values.iter().enumerate() {
            let mut sum = 0.0;
            for (idx, &(_, _, w)) in points.iter().enumerate() {
                sum += w * pv[idx] * cv[idx];
            }
            matrix[(r, ccol)] = Complex64::new(sum, 0.0);
        }
    }

    Ok(OverlapTable {
        level,
        provenance: Provenance::Quadrature,
        row_labels: polar.iter().map(|p| p.label()).collect(),
        col_labels: cart.iter().map(|ci| ci.label()).collect(),
        matrix,
        weight_indexing: "",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn mu35() -> MuParams {
        MuParams::new(0.3, 0.5).unwrap()
    }

    #[test]
    fn closed_form_trivial_level() {
        let t = q_overlap_closed_form(0, mu35()).unwrap();
        assert_relative_eq!(t.entry(0, 0).norm(), 1.0, epsilon = 1e-14);
        assert!(t.unitarity_defect() < 1e-14);
    }

    #[test]
    fn weight_indexing_resolution_per_parity() {
        let even = q_overlap_closed_form(4, mu35()).unwrap();
        assert_eq!(even.weight_indexing, "omega[N-l]");
        let odd = q_overlap_closed_form(5, mu35()).unwrap();
        assert_eq!(odd.weight_indexing, "omega[l]");
    }

    #[test]
    fn closed_form_is_unitary() {
        for mu in [
            mu35(),
            MuParams::new(1.2, 0.1).unwrap(),
            MuParams::new(0.0, 0.0).unwrap(),
        ] {
            for level in 0..=8 {
                let t = q_overlap_closed_form(level, mu).unwrap();
                assert!(
                    t.unitarity_defect() < 1e-10,
                    "level {level}: defect {}",
                    t.unitarity_defect()
                );
            }
        }
    }

    #[test]
    fn closed_form_satisfies_signed_recurrence() {
        // q_l T[l][m] = A_{m+1} T[l][m+1] + B_m T[l][m] + A_m T[l][m-1]
        for mu in [mu35(), MuParams::new(1.2, 0.1).unwrap()] {
            for level in 1..=8u32 {
                let t = q_overlap_closed_form(level, mu).unwrap();
                let n = level as usize;
                let q = q_values(level, mu);
                let b = b_coefficients(level, mu);
                let u = u_coefficients(level, mu);
                let a = |m: usize| -> f64 {
                    if m == 0 || m > n {
                        0.0
                    } else {
                        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                        sign * u[m].sqrt()
                    }
                };
                for l in 0..=n {
                    for m in 0..=n {
                        let mut rhs = b[m] * t.entry(l, m).re;
                        if m + 1 <= n {
                            rhs += a(m + 1) * t.entry(l, m + 1).re;
                        }
                        if m >= 1 {
                            rhs += a(m) * t.entry(l, m - 1).re;
                        }
                        let residual = (q[l] * t.entry(l, m).re - rhs).abs();
                        assert!(
                            residual < 1e-10,
                            "level {level} l={l} m={m}: residual {residual}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn diagonalization_oracle_matches_closed_form() {
        for mu in [mu35(), MuParams::new(1.2, 0.1).unwrap()] {
            for level in 0..=8 {
                let closed = q_overlap_closed_form(level, mu).unwrap();
                let diag = q_overlap_oracle(level, mu).unwrap();
                let disc = closed.max_entry_discrepancy(&diag).unwrap();
                assert!(disc < 1e-10, "level {level}: discrepancy {disc}");
            }
        }
    }

    #[test]
    fn level_one_against_hand_diagonalization() {
        // 2x2 block: diag (mux-muy+1/2, -(mux-muy)+1/2), off-diagonal
        // -sqrt((1+2mux)(1+2muy)); explicit eigenvectors give the table
        // up to row signs.
        let mu = mu35();
        let d = mu.mu_x() - mu.mu_y();
        let b0 = d + 0.5;
        let off = -((1.0 + 2.0 * mu.mu_x()) * (1.0 + 2.0 * mu.mu_y())).sqrt();
        let q0 = -(mu.sum() + 0.5);
        let q1 = 1.0 + mu.sum() + 0.5;
        let ev = |q: f64| {
            let v = (off, q - b0);
            let norm = (v.0 * v.0 + v.1 * v.1).sqrt();
            (v.0 / norm, v.1 / norm)
        };
        let t = q_overlap_closed_form(1, mu).unwrap();
        for (l, q) in [(0usize, q0), (1usize, q1)] {
            let (e0, e1) = ev(q);
            assert_relative_eq!(t.entry(l, 0).norm(), e0.abs(), max_relative = 1e-12);
            assert_relative_eq!(t.entry(l, 1).norm(), e1.abs(), max_relative = 1e-12);
        }
    }

    #[test]
    fn mixing_coefficient_values() {
        let mu = mu35();
        // |zeta| = 1
        let z = mixing_coefficient(HalfInt::from_integer(3), Sign::Plus, mu).unwrap();
        assert_relative_eq!(z.value.norm(), 1.0, epsilon = 1e-14);
        // mu = 0: zeta_n = -i
        let mu0 = MuParams::new(0.0, 0.0).unwrap();
        let z0 = mixing_coefficient(HalfInt::from_integer(2), Sign::Plus, mu0).unwrap();
        assert_relative_eq!(z0.value.re, 0.0, epsilon = 1e-15);
        assert_relative_eq!(z0.value.im, -1.0, epsilon = 1e-15);
        // golden xi_{1/2} at mu = (0.3, 0.5), pinned by CAS
        let xi = mixing_coefficient(HalfInt::from_twice(1), Sign::Minus, mu).unwrap();
        assert_relative_eq!(xi.value.re, -1.0 / 9.0, max_relative = 1e-14);
        assert_relative_eq!(xi.value.im, 0.993_807_989_999_906_5, max_relative = 1e-14);
        // n = 0 mixing is undefined
        assert!(mixing_coefficient(HalfInt::ZERO, Sign::Plus, mu).is_err());
        assert!(mixing_coefficient(HalfInt::from_integer(1), Sign::Minus, mu).is_err());
    }

    proptest! {
        #[test]
        fn mixing_is_unit_modulus(twice_n in 1i64..14, mux in -0.45f64..1.9, muy in -0.45f64..1.9) {
            let mu = MuParams::new(mux, muy).unwrap();
            let (n, sector) = if twice_n % 2 == 0 {
                (HalfInt::from_twice(twice_n.max(2)), Sign::Plus)
            } else {
                (HalfInt::from_twice(twice_n), Sign::Minus)
            };
            let z = mixing_coefficient(n, sector, mu).unwrap();
            prop_assert!((z.value.norm() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn polar_table_unitary_and_matches_quadrature() {
        for mu in [
            mu35(),
            MuParams::new(1.2, 0.1).unwrap(),
            MuParams::new(0.0, 0.0).unwrap(),
        ] {
            for level in 0..=5 {
                let closed = polar_cartesian_overlap(level, mu).unwrap();
                assert!(closed.unitarity_defect() < 1e-12);
                let quad = polar_overlap_quadrature_table(level, mu, 24).unwrap();
                let disc = closed.max_entry_discrepancy(&quad).unwrap();
                assert!(
                    disc < 1e-9,
                    "level {level} mu=({},{}): disc {disc}",
                    mu.mu_x(),
                    mu.mu_y()
                );
            }
        }
    }

    #[test]
    fn quadrature_oracle_selection_rules() {
        let mu = mu35();
        // mismatched energy levels give 0 by contract
        let polar = PolarIndex::new(0, HalfInt::from_integer(1), Sign::Plus, Sign::Plus).unwrap();
        let cart = CartesianIndex::new(0, 0);
        let z = overlap_quadrature_oracle(&polar, &cart, mu, 16).unwrap();
        assert_eq!(z, Complex64::new(0.0, 0.0));

        // ground state against ground state: modulus one
        let ground = PolarIndex::new(0, HalfInt::ZERO, Sign::Plus, Sign::Plus).unwrap();
        let z = overlap_quadrature_oracle(&ground, &CartesianIndex::new(0, 0), mu, 24).unwrap();
        assert_relative_eq!(z.norm(), 1.0, epsilon = 1e-11);
    }

    #[test]
    fn level_three_all_pairings() {
        let mu = mu35();
        let closed = polar_cartesian_overlap(3, mu).unwrap();
        for (r, p) in polar_states(3).iter().enumerate() {
            for (ccol, ci) in cartesian_states(3).iter().enumerate() {
                let direct = overlap_quadrature_oracle(p, ci, mu, 24).unwrap();
                assert!(
                    (closed.entry(r, ccol) - direct).norm() < 1e-10,
                    "{} vs {}",
                    p.label(),
                    ci.label()
                );
            }
        }
    }

    #[test]
    fn parity_sparsity_of_polar_rows() {
        // s_x must match (-1)^m: half the entries vanish identically
        let mu = mu35();
        let t = polar_cartesian_overlap(6, mu).unwrap();
        for (r, p) in polar_states(6).iter().enumerate() {
            for m in 0..=6usize {
                let cart_parity = if m % 2 == 0 { Sign::Plus } else { Sign::Minus };
                if cart_parity != p.s_x() {
                    assert!(
                        t.entry(r, m).norm() < 1e-12,
                        "{} col {m} should vanish",
                        p.label()
                    );
                }
            }
        }
    }

    #[test]
    fn csv_output_is_deterministic() {
        let t = polar_cartesian_overlap(2, mu35()).unwrap();
        let mut a = Vec::new();
        let mut b = Vec::new();
        t.write_csv(&mut a).unwrap();
        t.write_csv(&mut b).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with("row,col,re,im,modulus\n"));
        assert_eq!(text.lines().count(), 1 + 9);
        let json = t.to_json();
        assert_eq!(json["level"], 2);
        assert_eq!(json["entries"].as_array().unwrap().len(), 9);
    }

    #[test]
    fn phase_convention_makes_first_entry_positive() {
        let mut t = q_overlap_oracle(4, mu35()).unwrap();
        t.apply_row_phase_convention();
        for r in 0..t.dim() {
            let pivot = (0..t.dim()).find(|&m| t.entry(r, m).norm() > 1e-8).unwrap();
            assert!(t.entry(r, pivot).re > 0.0);
            assert!(t.entry(r, pivot).im.abs() < 1e-14);
        }
    }
}
