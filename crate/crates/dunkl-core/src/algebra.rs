//! Exact finite matrix realization of the symmetry algebra.
//!
//! Every symmetry commutes with the Hamiltonian, so restricting to the
//! `(N+1)`-dimensional energy eigenspace of level `N` loses nothing: blocks
//! are exact and every algebraic identity becomes a finite matrix identity
//! whose residual is pure floating-point noise.
//!
//! Basis convention inside a level: `|m, N-m>` ordered by increasing `m = n_x`.
//!
//! Ladder operators act between adjacent levels through rectangular maps
//!
//! ```text
//! Ax+ |nx,ny> = sqrt([nx+1]_mux) |nx+1,ny>,   Ax |nx,ny> = sqrt([nx]_mux) |nx-1,ny>,
//! ```
//!
//! and the symmetries are the Schwinger combinations
//!
//! ```text
//! J1 = (Ax+ Ay + Ax Ay+)/2,   J2 = (Ax+ Ay - Ax Ay+)/(2i),   J3 = (Hx - Hy)/2,
//! Q  = (Ax Ay+ - Ax+ Ay) Rx - mux Ry - muy Rx - (1/2) Rx Ry.
//! ```

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::polynomials::mu_number;
use crate::{Error, MuParams, Result};

type CMatrix = DMatrix<Complex64>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// A symmetry operator restricted to one energy level.
#[derive(Debug, Clone)]
pub struct LevelBlock {
    level: u32,
    matrix: CMatrix,
}

impl LevelBlock {
    fn new(level: u32, matrix: CMatrix) -> Self {
        debug_assert_eq!(matrix.nrows(), level as usize + 1);
        debug_assert_eq!(matrix.ncols(), level as usize + 1);
        Self { level, matrix }
    }

    pub fn identity(level: u32) -> Self {
        Self::new(level, CMatrix::identity(level as usize + 1, level as usize + 1))
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.level as usize + 1
    }

    pub fn mul(&self, other: &LevelBlock) -> Result<LevelBlock> {
        self.check_level(other)?;
        Ok(Self::new(self.level, &self.matrix * &other.matrix))
    }

    pub fn add(&self, other: &LevelBlock) -> Result<LevelBlock> {
        self.check_level(other)?;
        Ok(Self::new(self.level, &self.matrix + &other.matrix))
    }

    pub fn sub(&self, other: &LevelBlock) -> Result<LevelBlock> {
        self.check_level(other)?;
        Ok(Self::new(self.level, &self.matrix - &other.matrix))
    }

    pub fn scale(&self, factor: Complex64) -> LevelBlock {
        Self::new(self.level, &self.matrix * factor)
    }

    pub fn adjoint(&self) -> LevelBlock {
        Self::new(self.level, self.matrix.adjoint())
    }

    /// Largest entry magnitude; the residual norm used by all checks.
    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn check_level(&self, other: &LevelBlock) -> Result<()> {
        if self.level != other.level {
            return Err(Error::LevelMismatch(self.level, other.level));
        }
        Ok(())
    }

    /// Hermitian eigendecomposition with deterministic conventions:
    /// eigenvalues ascending, each eigenvector's largest-magnitude entry
    /// made real positive.
    pub fn hermitian_eigen(&self) -> Result<(Vec<f64>, CMatrix)> {
        let eig = SymmetricEigen::try_new(self.matrix.clone(), 1e-15, 0)
            .ok_or_else(|| Error::EigenFailure("hermitian eigensolve did not converge".into()))?;
        let n = self.dim();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let mut vectors = CMatrix::zeros(n, n);
        for (col, &i) in order.iter().enumerate() {
            let v = eig.eigenvectors.column(i);
            let pivot = (0..n)
                .max_by(|&a, &b| v[a].norm().total_cmp(&v[b].norm()))
                .unwrap();
            let phase = if v[pivot].norm() > 0.0 {
                v[pivot].conj() / v[pivot].norm()
            } else {
                c(1.0)
            };
            for r in 0..n {
                vectors[(r, col)] = v[r] * phase;
            }
        }
        Ok((values, vectors))
    }

    /// Eigenvalues only, ascending.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.hermitian_eigen()?.0)
    }
}

/// A ladder operator as a rectangular map between adjacent levels.
#[derive(Debug, Clone)]
pub struct LadderMap {
    pub from_level: u32,
    pub to_level: u32,
    matrix: CMatrix,
}

impl LadderMap {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

/// The four parabosonic ladder operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderOp {
    LowerX,
    RaiseX,
    LowerY,
    RaiseY,
}

/// Reflection with respect to one axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReflectionAxis {
    X,
    Y,
}

/// The level-preserving symmetry operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryOp {
    Hamiltonian,
    J1,
    J2,
    J3,
    Q,
}

/// Rectangular block of a ladder operator out of level `N`.
///
/// Annihilators out of level 0 are the empty `0 x 1` map.
pub fn ladder_block(which: LadderOp, level: u32, mu: MuParams) -> LadderMap {
    let n = level as usize;
    let (to_level, rows) = match which {
        LadderOp::LowerX | LadderOp::LowerY => (level.wrapping_sub(1), n),
        LadderOp::RaiseX | LadderOp::RaiseY => (level + 1, n + 2),
    };
    let mut m = CMatrix::zeros(rows, n + 1);
    match which {
        LadderOp::LowerX => {
            for col in 1..=n {
                m[(col - 1, col)] = c(mu_number(col as u32, mu.mu_x()).sqrt());
            }
        }
        LadderOp::RaiseX => {
            for col in 0..=n {
                m[(col + 1, col)] = c(mu_number(col as u32 + 1, mu.mu_x()).sqrt());
            }
        }
        LadderOp::LowerY => {
            for col in 0..n {
                m[(col, col)] = c(mu_number((n - col) as u32, mu.mu_y()).sqrt());
            }
        }
        LadderOp::RaiseY => {
            for col in 0..=n {
                m[(col, col)] = c(mu_number((n - col) as u32 + 1, mu.mu_y()).sqrt());
            }
        }
    }
    LadderMap {
        from_level: level,
        to_level,
        matrix: m,
    }
}

/// Diagonal reflection block, `R_x = diag((-1)^m)` or `R_y = diag((-1)^{N-m})`.
pub fn reflection_block(which: ReflectionAxis, level: u32) -> LevelBlock {
    let n = level as usize;
    let m = CMatrix::from_fn(n + 1, n + 1, |r, col| {
        if r != col {
            return c(0.0);
        }
        let exponent = match which {
            ReflectionAxis::X => r,
            ReflectionAxis::Y => n - r,
        };
        c(if exponent % 2 == 0 { 1.0 } else { -1.0 })
    });
    LevelBlock::new(level, m)
}

/// One-dimensional Hamiltonian blocks, `Hx = diag(m + mux + 1/2)` and
/// `Hy = diag(N - m + muy + 1/2)`.
fn h1d_block(axis: ReflectionAxis, level: u32, mu: MuParams) -> LevelBlock {
    let n = level as usize;
    let m = CMatrix::from_fn(n + 1, n + 1, |r, col| {
        if r != col {
            return c(0.0);
        }
        match axis {
            ReflectionAxis::X => c(r as f64 + mu.mu_x() + 0.5),
            ReflectionAxis::Y => c((n - r) as f64 + mu.mu_y() + 0.5),
        }
    });
    LevelBlock::new(level, m)
}

/// `Ax+ Ay` restricted to level `N` (zero block at `N = 0`).
fn raise_x_lower_y(level: u32, mu: MuParams) -> CMatrix {
    if level == 0 {
        return CMatrix::zeros(1, 1);
    }
    let up = ladder_block(LadderOp::RaiseX, level - 1, mu);
    let down = ladder_block(LadderOp::LowerY, level, mu);
    up.matrix() * down.matrix()
}

/// `Ax Ay+` restricted to level `N`.
fn lower_x_raise_y(level: u32, mu: MuParams) -> CMatrix {
    let down = ladder_block(LadderOp::LowerX, level + 1, mu);
    let up = ladder_block(LadderOp::RaiseY, level, mu);
    down.matrix() * up.matrix()
}

/// Block of a symmetry operator at level `N`.
pub fn symmetry_block(which: SymmetryOp, level: u32, mu: MuParams) -> LevelBlock {
    let dim = level as usize + 1;
    match which {
        SymmetryOp::Hamiltonian => {
            LevelBlock::identity(level).scale(c(level as f64 + mu.sum() + 1.0))
        }
        SymmetryOp::J3 => {
            let m = CMatrix::from_fn(dim, dim, |r, col| {
                if r == col {
                    c((2.0 * r as f64 - level as f64 + mu.mu_x() - mu.mu_y()) / 2.0)
                } else {
                    c(0.0)
                }
            });
            LevelBlock::new(level, m)
        }
        SymmetryOp::J1 => {
            let m = (raise_x_lower_y(level, mu) + lower_x_raise_y(level, mu)) * c(0.5);
            LevelBlock::new(level, m)
        }
        SymmetryOp::J2 => {
            let m = (raise_x_lower_y(level, mu) - lower_x_raise_y(level, mu))
                * Complex64::new(0.0, -0.5);
            LevelBlock::new(level, m)
        }
        SymmetryOp::Q => {
            let k = lower_x_raise_y(level, mu) - raise_x_lower_y(level, mu);
            let rx = reflection_block(ReflectionAxis::X, level);
            let ry = reflection_block(ReflectionAxis::Y, level);
            let m = &k * rx.matrix()
                - ry.matrix() * c(mu.mu_x())
                - rx.matrix() * c(mu.mu_y())
                - rx.matrix() * ry.matrix() * c(0.5);
            LevelBlock::new(level, m)
        }
    }
}

/// `AB - BA`.
pub fn commutator(a: &LevelBlock, b: &LevelBlock) -> Result<LevelBlock> {
    a.mul(b)?.sub(&b.mul(a)?)
}

/// `AB + BA`.
pub fn anticommutator(a: &LevelBlock, b: &LevelBlock) -> Result<LevelBlock> {
    a.mul(b)?.add(&b.mul(a)?)
}

/// Named residuals produced by the verification routines.
#[derive(Debug, Clone, Default)]
pub struct CheckReport {
    entries: Vec<(String, f64)>,
}

impl CheckReport {
    pub fn push(&mut self, name: impl Into<String>, residual: f64) {
        self.entries.push((name.into(), residual));
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.entries.extend(other.entries);
    }

    /// Keeps, for every name, the largest residual seen.
    pub fn fold_max(&mut self, other: CheckReport) {
        for (name, residual) in other.entries {
            match self.entries.iter_mut().find(|(n, _)| *n == name) {
                Some((_, r)) => *r = r.max(residual),
                None => self.entries.push((name, residual)),
            }
        }
    }

    pub fn entries(&self) -> &[(String, f64)] {
        &self.entries
    }

    pub fn max_residual(&self) -> f64 {
        self.entries.iter().map(|(_, r)| *r).fold(0.0, f64::max)
    }

    pub fn all_below(&self, tolerance: f64) -> bool {
        self.entries.iter().all(|(_, r)| *r < tolerance)
    }
}

fn rect_max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// All Schwinger-Dunkl relations at one level; residual per relation.
pub fn check_sd2_relations(level: u32, mu: MuParams) -> Result<CheckReport> {
    let j1 = symmetry_block(SymmetryOp::J1, level, mu);
    let j2 = symmetry_block(SymmetryOp::J2, level, mu);
    let j3 = symmetry_block(SymmetryOp::J3, level, mu);
    let h = symmetry_block(SymmetryOp::Hamiltonian, level, mu);
    let rx = reflection_block(ReflectionAxis::X, level);
    let ry = reflection_block(ReflectionAxis::Y, level);
    let id = LevelBlock::identity(level);
    let i = Complex64::i();

    let mut report = CheckReport::default();
    report.push("sd2/{J1,Rx}", anticommutator(&j1, &rx)?.max_abs());
    report.push("sd2/{J1,Ry}", anticommutator(&j1, &ry)?.max_abs());
    report.push("sd2/{J2,Rx}", anticommutator(&j2, &rx)?.max_abs());
    report.push("sd2/{J2,Ry}", anticommutator(&j2, &ry)?.max_abs());
    report.push("sd2/[J3,Rx]", commutator(&j3, &rx)?.max_abs());
    report.push("sd2/[J3,Ry]", commutator(&j3, &ry)?.max_abs());
    report.push("sd2/Rx^2=I", rx.mul(&rx)?.sub(&id)?.max_abs());
    report.push("sd2/Ry^2=I", ry.mul(&ry)?.sub(&id)?.max_abs());
    report.push(
        "sd2/[J2,J3]=iJ1",
        commutator(&j2, &j3)?.sub(&j1.scale(i))?.max_abs(),
    );
    report.push(
        "sd2/[J3,J1]=iJ2",
        commutator(&j3, &j1)?.sub(&j2.scale(i))?.max_abs(),
    );
    // [J1,J2] = i [ J3 + J3 (mux Rx + muy Ry) - H (mux Rx - muy Ry)/2 ]
    let deformation = rx.scale(c(mu.mu_x())).add(&ry.scale(c(mu.mu_y())))?;
    let anisotropy = rx.scale(c(mu.mu_x())).sub(&ry.scale(c(mu.mu_y())))?;
    let rhs = j3
        .add(&j3.mul(&deformation)?)?
        .sub(&h.mul(&anisotropy)?.scale(c(0.5)))?
        .scale(i);
    report.push(
        "sd2/[J1,J2]=i(J3+J3(muxRx+muyRy)-H(muxRx-muyRy)/2)",
        commutator(&j1, &j2)?.sub(&rhs)?.max_abs(),
    );
    Ok(report)
}

/// Casimir `C = J1^2 + J2^2 + J3^2 + (mux/2) Rx + (muy/2) Ry + mux muy Rx Ry`
/// against its scalar value `(E_N^2 - 1)/4`, and its commutants.
pub fn check_casimir(level: u32, mu: MuParams) -> Result<CheckReport> {
    let j1 = symmetry_block(SymmetryOp::J1, level, mu);
    let j2 = symmetry_block(SymmetryOp::J2, level, mu);
    let j3 = symmetry_block(SymmetryOp::J3, level, mu);
    let rx = reflection_block(ReflectionAxis::X, level);
    let ry = reflection_block(ReflectionAxis::Y, level);

    let casimir = j1
        .mul(&j1)?
        .add(&j2.mul(&j2)?)?
        .add(&j3.mul(&j3)?)?
        .add(&rx.scale(c(0.5 * mu.mu_x())))?
        .add(&ry.scale(c(0.5 * mu.mu_y())))?
        .add(&rx.mul(&ry)?.scale(c(mu.mu_x() * mu.mu_y())))?;

    let energy = level as f64 + mu.sum() + 1.0;
    let scalar = LevelBlock::identity(level).scale(c(0.25 * (energy * energy - 1.0)));

    let mut report = CheckReport::default();
    report.push("casimir/C=(H^2-1)/4", casimir.sub(&scalar)?.max_abs());
    report.push("casimir/[C,J1]", commutator(&casimir, &j1)?.max_abs());
    report.push("casimir/[C,J2]", commutator(&casimir, &j2)?.max_abs());
    report.push("casimir/[C,J3]", commutator(&casimir, &j3)?.max_abs());
    Ok(report)
}

/// Parabose relations checked with rectangular ladder compositions on every
/// level `M <= n_max - 2` (compositions reach up to `M + 1`).
pub fn check_parabose(n_max: u32, mu: MuParams) -> Result<CheckReport> {
    assert!(n_max >= 2, "need headroom for ladder compositions");
    let mut report = CheckReport::default();
    for level in 0..=n_max - 2 {
        let mut level_report = CheckReport::default();
        for axis in [ReflectionAxis::X, ReflectionAxis::Y] {
            let (name, lower_op, raise_op, mu_axis) = match axis {
                ReflectionAxis::X => ("x", LadderOp::LowerX, LadderOp::RaiseX, mu.mu_x()),
                ReflectionAxis::Y => ("y", LadderOp::LowerY, LadderOp::RaiseY, mu.mu_y()),
            };
            let dim = level as usize + 1;
            let lower = ladder_block(lower_op, level, mu);
            let raise = ladder_block(raise_op, level, mu);
            let lower_above = ladder_block(lower_op, level + 1, mu);
            let refl = reflection_block(axis, level);
            let h1d = h1d_block(axis, level, mu);

            // [A, A+] = I + 2 mu R
            let a_adag = lower_above.matrix() * raise.matrix();
            let adag_a = if level == 0 {
                CMatrix::zeros(1, 1)
            } else {
                ladder_block(raise_op, level - 1, mu).matrix() * lower.matrix()
            };
            let expected = CMatrix::identity(dim, dim) + refl.matrix() * c(2.0 * mu_axis);
            level_report.push(
                format!("parabose/[A{name},A{name}+]=I+2mu{name}R{name}"),
                rect_max_abs(&(a_adag - &adag_a - expected)),
            );

            // H = (1/2){A, A+}
            let anti = (lower_above.matrix() * raise.matrix() + &adag_a) * c(0.5);
            level_report.push(
                format!("parabose/H{name}=(1/2){{A{name},A{name}+}}"),
                rect_max_abs(&(anti - h1d.matrix())),
            );

            // {A, R} = 0 and {A+, R} = 0
            if level > 0 {
                let refl_below = reflection_block(axis, level - 1);
                let anti_lower =
                    lower.matrix() * refl.matrix() + refl_below.matrix() * lower.matrix();
                level_report.push(
                    format!("parabose/{{A{name},R{name}}}"),
                    rect_max_abs(&anti_lower),
                );
            }
            let refl_above = reflection_block(axis, level + 1);
            let anti_raise = raise.matrix() * refl.matrix() + refl_above.matrix() * raise.matrix();
            level_report.push(
                format!("parabose/{{A{name}+,R{name}}}"),
                rect_max_abs(&anti_raise),
            );

            // [H, A] = -A and [H, A+] = A+
            if level > 0 {
                let h_below = h1d_block(axis, level - 1, mu);
                let comm = h_below.matrix() * lower.matrix() - lower.matrix() * h1d.matrix();
                level_report.push(
                    format!("parabose/[H{name},A{name}]=-A{name}"),
                    rect_max_abs(&(comm + lower.matrix())),
                );
            }
            let h_above = h1d_block(axis, level + 1, mu);
            let comm = h_above.matrix() * raise.matrix() - raise.matrix() * h1d.matrix();
            level_report.push(
                format!("parabose/[H{name},A{name}+]=A{name}+"),
                rect_max_abs(&(comm - raise.matrix())),
            );
        }

        // cross commutator [Ax, Ay+] = 0
        let cross = ladder_block(LadderOp::LowerX, level + 1, mu).matrix()
            * ladder_block(LadderOp::RaiseY, level, mu).matrix()
            - if level == 0 {
                CMatrix::zeros(1, 1)
            } else {
                ladder_block(LadderOp::RaiseY, level - 1, mu).matrix()
                    * ladder_block(LadderOp::LowerX, level, mu).matrix()
            };
        level_report.push("parabose/[Ax,Ay+]=0", rect_max_abs(&cross));

        report.fold_max(level_report);
    }
    Ok(report)
}

/// Builds the two-module Casimir from the abstract module actions,
/// `(A-^1 A+^2 - A+^1 A-^2) R^1 - (1/2) R^1 R^2 - mu1 R^2 - mu2 R^1`
/// on `v_{n1} (x) v_{n2}` with `n1 + n2 = N` and `eps1 = eps2 = +1`,
/// and compares with the oscillator block of `Q`; also checks the
/// single-module Casimir values `-mu` and the total reflection `(-1)^N`.
pub fn sl12_casimir_check(level: u32, mu: MuParams) -> Result<CheckReport> {
    let n = level as usize;
    let mut qt = CMatrix::zeros(n + 1, n + 1);
    for m in 0..=n {
        let rx = if m % 2 == 0 { 1.0 } else { -1.0 };
        let ry = if (n - m) % 2 == 0 { 1.0 } else { -1.0 };
        let rxy = if n % 2 == 0 { 1.0 } else { -1.0 };
        if m >= 1 {
            let amp =
                (mu_number(m as u32, mu.mu_x()) * mu_number((n - m + 1) as u32, mu.mu_y())).sqrt();
            qt[(m - 1, m)] += c(rx * amp);
        }
        if m < n {
            let amp =
                (mu_number(m as u32 + 1, mu.mu_x()) * mu_number((n - m) as u32, mu.mu_y())).sqrt();
            qt[(m + 1, m)] -= c(rx * amp);
        }
        qt[(m, m)] -= c(0.5 * rxy + mu.mu_x() * ry + mu.mu_y() * rx);
    }

    let q_block = symmetry_block(SymmetryOp::Q, level, mu);
    let mut report = CheckReport::default();
    report.push("sl12/Qtilde=Q", rect_max_abs(&(qt - q_block.matrix())));

    // single module: Q v_n = -mu v_n with Q = A+ A- R - A0 R + (1/2) R
    let single = |mu1: f64| -> f64 {
        (0..=n)
            .map(|k| {
                let r = if k % 2 == 0 { 1.0 } else { -1.0 };
                let value = (mu_number(k as u32, mu1) - (k as f64 + mu1 + 0.5) + 0.5) * r;
                (value + mu1).abs()
            })
            .fold(0.0, f64::max)
    };
    report.push("sl12/Q1=-mux", single(mu.mu_x()));
    report.push("sl12/Q2=-muy", single(mu.mu_y()));

    let rx = reflection_block(ReflectionAxis::X, level);
    let ry = reflection_block(ReflectionAxis::Y, level);
    let total_r = if level % 2 == 0 { 1.0 } else { -1.0 };
    report.push(
        "sl12/R1R2=(-1)^N",
        rx.mul(&ry)?
            .sub(&LevelBlock::identity(level).scale(c(total_r)))?
            .max_abs(),
    );
    Ok(report)
}

/// Closed-form spectrum of `Q` at level `N`:
/// `q_l = (-1)^{l+1} (l + mu_x + mu_y + 1/2)`, `l = 0..N`.
pub fn q_spectrum_closed(level: u32, mu: MuParams) -> Vec<f64> {
    (0..=level)
        .map(|l| {
            let sign = if (l + 1) % 2 == 0 { 1.0 } else { -1.0 };
            sign * (l as f64 + mu.sum() + 0.5)
        })
        .collect()
}

/// Closed-form spectrum of the `J2` block at level `N`, sorted ascending.
///
/// `J2 = -curlyJ2/2`, so even levels carry `{0} U {+-sqrt(n(n+s))}`,
/// `n = 1..N/2`, and odd levels `{+-sqrt((n+mux)(n+muy))}`,
/// `n = 1/2, 3/2, ..., N/2`.
pub fn j2_spectrum_closed(level: u32, mu: MuParams) -> Vec<f64> {
    let mut out = Vec::with_capacity(level as usize + 1);
    if level % 2 == 0 {
        out.push(0.0);
        for n in 1..=level / 2 {
            let v = (n as f64 * (n as f64 + mu.sum())).sqrt();
            out.push(v);
            out.push(-v);
        }
    } else {
        for twice_n in (1..=level).step_by(2) {
            let n = twice_n as f64 / 2.0;
            let v = ((n + mu.mu_x()) * (n + mu.mu_y())).sqrt();
            out.push(v);
            out.push(-v);
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Residuals of the computed `Q` and `J2` spectra against their closed forms,
/// plus the `J2^2 = 2 B_phi + 2 mux muy (I - Rx Ry)` eigenvalue identity.
pub fn check_spectra(level: u32, mu: MuParams) -> Result<CheckReport> {
    let mut report = CheckReport::default();

    let q = symmetry_block(SymmetryOp::Q, level, mu);
    let mut q_vals = q.hermitian_eigenvalues()?;
    q_vals.sort_by(f64::total_cmp);
    let mut q_closed = q_spectrum_closed(level, mu);
    q_closed.sort_by(f64::total_cmp);
    let q_res = q_vals
        .iter()
        .zip(&q_closed)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    report.push("spectrum/Q", q_res);

    let j2 = symmetry_block(SymmetryOp::J2, level, mu);
    let j2_vals = j2.hermitian_eigenvalues()?;
    let j2_closed = j2_spectrum_closed(level, mu);
    let j2_res = j2_vals
        .iter()
        .zip(&j2_closed)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    report.push("spectrum/J2", j2_res);

    // For each eigenvalue lambda of curly-J2 = -2 J2:
    // lambda^2 - 2 mux muy (1 - (-1)^N) matches m^2 = 4 n (n + s).
    let parity_term = if level % 2 == 0 {
        0.0
    } else {
        4.0 * mu.mu_x() * mu.mu_y()
    };
    let mut shifted: Vec<f64> = j2_vals.iter().map(|v| 4.0 * v * v - parity_term).collect();
    shifted.sort_by(f64::total_cmp);
    let mut m2: Vec<f64> = if level % 2 == 0 {
        let mut v = vec![0.0];
        for n in 1..=level / 2 {
            let m2 = 4.0 * n as f64 * (n as f64 + mu.sum());
            v.push(m2);
            v.push(m2);
        }
        v
    } else {
        let mut v = Vec::new();
        for twice_n in (1..=level).step_by(2) {
            let n = twice_n as f64 / 2.0;
            let m2 = 4.0 * n * (n + mu.sum());
            v.push(m2);
            v.push(m2);
        }
        v
    };
    m2.sort_by(f64::total_cmp);
    let res = shifted
        .iter()
        .zip(&m2)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    report.push("spectrum/J2^2=2Bphi+2muxmuy(I-RxRy)", res);

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn mu35() -> MuParams {
        MuParams::new(0.3, 0.5).unwrap()
    }

    #[test]
    fn ladder_actions_low_levels() {
        let mu = mu35();
        // Ax+ |0,0> = sqrt(1 + 2 mux) |1,0>
        let up = ladder_block(LadderOp::RaiseX, 0, mu);
        assert_relative_eq!(up.matrix()[(1, 0)].re, (1.0 + 2.0 * mu.mu_x()).sqrt());
        assert_eq!(up.matrix()[(0, 0)], Complex64::new(0.0, 0.0));

        // Ax |0, ny> = 0
        let down = ladder_block(LadderOp::LowerX, 2, mu);
        assert_eq!(down.matrix()[(0, 0)], Complex64::new(0.0, 0.0));
        assert_eq!(down.matrix()[(1, 0)], Complex64::new(0.0, 0.0));

        // Ax+ Ax |2,0> = [2]_mux |2,0> = 2 |2,0>
        let number = ladder_block(LadderOp::RaiseX, 1, mu).matrix()
            * ladder_block(LadderOp::LowerX, 2, mu).matrix();
        assert_relative_eq!(number[(2, 2)].re, 2.0, max_relative = 1e-15);
    }

    #[test]
    fn reflection_blocks() {
        let rx = reflection_block(ReflectionAxis::X, 1);
        assert_eq!(rx.matrix()[(0, 0)].re, 1.0);
        assert_eq!(rx.matrix()[(1, 1)].re, -1.0);
        let rxrx = rx.mul(&rx).unwrap();
        assert_eq!(rxrx.sub(&LevelBlock::identity(1)).unwrap().max_abs(), 0.0);
        // Rx Ry = (-1)^N
        for level in 0..6 {
            let prod = reflection_block(ReflectionAxis::X, level)
                .mul(&reflection_block(ReflectionAxis::Y, level))
                .unwrap();
            let expect =
                LevelBlock::identity(level).scale(c(if level % 2 == 0 { 1.0 } else { -1.0 }));
            assert_eq!(prod.sub(&expect).unwrap().max_abs(), 0.0);
        }
    }

    #[test]
    fn hamiltonian_is_scalar() {
        let mu = mu35();
        let h = symmetry_block(SymmetryOp::Hamiltonian, 4, mu);
        let expect = LevelBlock::identity(4).scale(c(4.0 + mu.sum() + 1.0));
        assert_eq!(h.sub(&expect).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn level_mismatch_is_an_error() {
        let a = LevelBlock::identity(2);
        let b = LevelBlock::identity(3);
        assert!(matches!(commutator(&a, &b), Err(Error::LevelMismatch(2, 3))));
    }

    #[test]
    fn commutator_of_self_vanishes() {
        let mu = mu35();
        let j1 = symmetry_block(SymmetryOp::J1, 3, mu);
        assert_eq!(commutator(&j1, &j1).unwrap().max_abs(), 0.0);
        let rx = reflection_block(ReflectionAxis::X, 4);
        let two_id = LevelBlock::identity(4).scale(c(2.0));
        assert_eq!(
            anticommutator(&rx, &rx).unwrap().sub(&two_id).unwrap().max_abs(),
            0.0
        );
    }

    #[test]
    fn sd2_relations_hold() {
        let mu = mu35();
        for level in 0..=8 {
            let report = check_sd2_relations(level, mu).unwrap();
            assert!(
                report.all_below(1e-12),
                "level {level}: max residual {}",
                report.max_residual()
            );
        }
    }

    #[test]
    fn commutator_j2_j3_named_case() {
        let mu = mu35();
        let j1 = symmetry_block(SymmetryOp::J1, 3, mu);
        let j2 = symmetry_block(SymmetryOp::J2, 3, mu);
        let j3 = symmetry_block(SymmetryOp::J3, 3, mu);
        let residual = commutator(&j2, &j3)
            .unwrap()
            .sub(&j1.scale(Complex64::i()))
            .unwrap()
            .max_abs();
        assert!(residual < 1e-13);
    }

    #[test]
    fn su2_limit_at_mu_zero() {
        let mu = MuParams::new(0.0, 0.0).unwrap();
        let report = check_sd2_relations(5, mu).unwrap();
        assert!(report.all_below(1e-13));
        // deformed terms vanish: [J1, J2] = i J3 exactly
        let j1 = symmetry_block(SymmetryOp::J1, 5, mu);
        let j2 = symmetry_block(SymmetryOp::J2, 5, mu);
        let j3 = symmetry_block(SymmetryOp::J3, 5, mu);
        let residual = commutator(&j1, &j2)
            .unwrap()
            .sub(&j3.scale(Complex64::i()))
            .unwrap()
            .max_abs();
        assert!(residual < 1e-13);
    }

    #[test]
    fn casimir_value_and_commutants() {
        let mu = mu35();
        for level in 0..=8 {
            let report = check_casimir(level, mu).unwrap();
            assert!(
                report.all_below(1e-12),
                "level {level}: {:?}",
                report.entries()
            );
        }
        // N = 0 scalar value ((mux + muy + 1)^2 - 1)/4
        let q = check_casimir(0, mu).unwrap();
        assert!(q.entries()[0].1 < 1e-14);
    }

    #[test]
    fn parabose_relations_hold() {
        let mu = mu35();
        let report = check_parabose(10, mu).unwrap();
        assert!(
            report.all_below(1e-13),
            "max parabose residual {}",
            report.max_residual()
        );
    }

    #[test]
    fn q_block_is_tridiagonal_with_recurrence_coefficients() {
        let mu = mu35();
        let level = 4u32;
        let q = symmetry_block(SymmetryOp::Q, level, mu);
        for mcol in 0..=level as usize {
            for row in 0..=level as usize {
                let entry = q.matrix()[(row, mcol)];
                assert_eq!(entry.im, 0.0);
                let expect = if row == mcol {
                    // B_m = (-1)^{m+1} (mux + muy) - 1/2 for even N
                    let sign = if (mcol + 1) % 2 == 0 { 1.0 } else { -1.0 };
                    sign * mu.sum() - 0.5
                } else if row + 1 == mcol {
                    // A_m = (-1)^m sqrt([m]x [N-m+1]y)
                    let m = mcol as u32;
                    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                    sign * (mu_number(m, mu.mu_x()) * mu_number(level - m + 1, mu.mu_y())).sqrt()
                } else if row == mcol + 1 {
                    let m = row as u32;
                    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                    sign * (mu_number(m, mu.mu_x()) * mu_number(level - m + 1, mu.mu_y())).sqrt()
                } else {
                    0.0
                };
                assert_relative_eq!(entry.re, expect, max_relative = 1e-13, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn q_spectrum_matches_closed_form() {
        let mu = mu35();
        for level in 0..=8 {
            let report = check_spectra(level, mu).unwrap();
            assert!(
                report.all_below(1e-10),
                "level {level}: {:?}",
                report.entries()
            );
        }
    }

    #[test]
    fn j2_spectrum_classical_limit() {
        let mu = MuParams::new(0.0, 0.0).unwrap();
        let vals = symmetry_block(SymmetryOp::J2, 2, mu)
            .hermitian_eigenvalues()
            .unwrap();
        for (got, expect) in vals.iter().zip([-1.0, 0.0, 1.0]) {
            assert_relative_eq!(*got, expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn j3_eigenvalues() {
        let mu = mu35();
        let level = 5;
        let j3 = symmetry_block(SymmetryOp::J3, level, mu);
        let vals = j3.hermitian_eigenvalues().unwrap();
        let mut expect: Vec<f64> = (0..=level)
            .map(|m| (2.0 * m as f64 - level as f64 + mu.mu_x() - mu.mu_y()) / 2.0)
            .collect();
        expect.sort_by(f64::total_cmp);
        for (a, b) in vals.iter().zip(&expect) {
            assert_relative_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn sl12_identification() {
        let mu = mu35();
        for level in 0..=8 {
            let report = sl12_casimir_check(level, mu).unwrap();
            assert!(
                report.all_below(1e-13),
                "level {level}: {:?}",
                report.entries()
            );
        }
    }

    #[test]
    fn eigen_phase_is_deterministic() {
        let mu = mu35();
        let q = symmetry_block(SymmetryOp::Q, 3, mu);
        let (_, v1) = q.hermitian_eigen().unwrap();
        let (_, v2) = q.hermitian_eigen().unwrap();
        assert_eq!(v1, v2);
        for col in 0..v1.ncols() {
            let pivot = (0..v1.nrows())
                .max_by(|&a, &b| v1[(a, col)].norm().total_cmp(&v1[(b, col)].norm()))
                .unwrap();
            assert!(v1[(pivot, col)].re > 0.0);
            assert!(v1[(pivot, col)].im.abs() < 1e-14);
        }
    }
}
