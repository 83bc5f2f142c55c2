//! The four subcommands: spectrum, wavefunction, overlaps, check.
//!
//! All floating-point output uses 17-significant-digit scientific notation so
//! files round-trip exactly and reruns are byte-identical.

use std::io::Write;

use anyhow::{bail, Context};
use dunkl_core::algebra::{
    check_casimir, check_parabose, check_sd2_relations, check_spectra, sl12_casimir_check,
    CheckReport,
};
use dunkl_core::overlaps::{
    polar_cartesian_overlap, polar_overlap_quadrature_table, q_overlap_closed_form,
    q_overlap_oracle, OverlapTable,
};
use dunkl_core::polynomials::dual_m1_hahn_family;
use dunkl_core::quadrature::{antihermiticity_defect, gauss_rule, WeightKind};
use dunkl_core::wavefunctions::{
    cartesian_states, energy_cartesian, jacobi_dunkl_f, p_radial, phi_angular, polar_states,
    psi_cartesian, CartesianIndex, HermiteMode, JacobiDunklIndex, PolarIndex,
};
use dunkl_core::{HalfInt, Sign};

use crate::config::{OutputFormat, RunConfig};

/// Success / verification-failure exit codes; usage errors travel as `Err`.
pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 2;

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn open_output(cfg: &RunConfig) -> anyhow::Result<Box<dyn Write>> {
    match &cfg.out {
        Some(path) => {
            let file = std::fs::File::create(path)
                .with_context(|| format!("cannot create {}", path.display()))?;
            Ok(Box::new(std::io::BufWriter::new(file)))
        }
        None => Ok(Box::new(std::io::BufWriter::new(std::io::stdout()))),
    }
}

pub fn cmd_spectrum(cfg: &RunConfig) -> anyhow::Result<i32> {
    let mut out = open_output(cfg)?;
    match cfg.format {
        OutputFormat::Csv => {
            writeln!(out, "level,energy,degeneracy,cartesian,polar")?;
            for level in 0..=cfg.level_max {
                let cart = cartesian_states(level);
                let polar = polar_states(level);
                let energy = energy_cartesian(cart[0], cfg.mu);
                let cart_labels: Vec<String> = cart.iter().map(|c| c.label()).collect();
                let polar_labels: Vec<String> = polar.iter().map(|p| p.label()).collect();
                writeln!(
                    out,
                    "{level},{},{},\"{}\",\"{}\"",
                    fmt(energy),
                    cart.len(),
                    cart_labels.join(";"),
                    polar_labels.join(";"),
                )?;
            }
        }
        OutputFormat::Json => {
            let rows: Vec<serde_json::Value> = (0..=cfg.level_max)
                .map(|level| {
                    let cart = cartesian_states(level);
                    let polar = polar_states(level);
                    serde_json::json!({
                        "level": level,
                        "energy": energy_cartesian(cart[0], cfg.mu),
                        "degeneracy": cart.len(),
                        "cartesian": cart.iter().map(|c| c.label()).collect::<Vec<_>>(),
                        "polar": polar.iter().map(|p| p.label()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&rows)?)?;
        }
    }
    out.flush()?;
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum WavefunctionKind {
    Cartesian,
    Polar,
    JacobiDunkl,
}

fn parse_grid(spec: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        bail!("grid must be MIN:MAX:COUNT, got {spec:?}");
    }
    let min: f64 = parts[0].parse().context("bad grid minimum")?;
    let max: f64 = parts[1].parse().context("bad grid maximum")?;
    let count: usize = parts[2].parse().context("bad grid count")?;
    if count == 0 {
        bail!("grid count must be at least 1");
    }
    if count == 1 {
        return Ok(vec![min]);
    }
    Ok((0..count)
        .map(|i| min + (max - min) * i as f64 / (count - 1) as f64)
        .collect())
}

fn parse_cartesian_index(spec: &str) -> anyhow::Result<CartesianIndex> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 2 {
        bail!("cartesian index must be NX,NY, got {spec:?}");
    }
    Ok(CartesianIndex::new(
        parts[0].trim().parse().context("bad n_x")?,
        parts[1].trim().parse().context("bad n_y")?,
    ))
}

fn parse_polar_index(spec: &str) -> anyhow::Result<PolarIndex> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 4 {
        bail!("polar index must be K,N,SX,SY (e.g. 0,1/2,+,-), got {spec:?}");
    }
    let k: u32 = parts[0].trim().parse().context("bad k")?;
    let n: HalfInt = parts[1].parse().map_err(|e| anyhow::anyhow!("{e}"))?;
    let s_x: Sign = parts[2].parse().map_err(|e| anyhow::anyhow!("{e}"))?;
    let s_y: Sign = parts[3].parse().map_err(|e| anyhow::anyhow!("{e}"))?;
    PolarIndex::new(k, n, s_x, s_y).map_err(|e| anyhow::anyhow!("{e}"))
}

fn parse_jacobi_dunkl_index(spec: &str) -> anyhow::Result<JacobiDunklIndex> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 3 {
        bail!("jacobi-dunkl index must be N,EPSILON,BRANCH (e.g. 1,+,+), got {spec:?}");
    }
    let n: HalfInt = parts[0].parse().map_err(|e| anyhow::anyhow!("{e}"))?;
    let epsilon: Sign = parts[1].parse().map_err(|e| anyhow::anyhow!("{e}"))?;
    let branch: Sign = parts[2].parse().map_err(|e| anyhow::anyhow!("{e}"))?;
    JacobiDunklIndex::new(n, epsilon, branch).map_err(|e| anyhow::anyhow!("{e}"))
}

pub fn cmd_wavefunction(
    cfg: &RunConfig,
    kind: WavefunctionKind,
    index: &str,
    grid: &str,
) -> anyhow::Result<i32> {
    let axis = parse_grid(grid)?;
    let mu = cfg.mu;
    // rows of (coordinate columns, re, im)
    let mut header: Vec<&str> = Vec::new();
    let mut rows: Vec<(Vec<f64>, f64, f64)> = Vec::new();
    match kind {
        WavefunctionKind::Cartesian => {
            let idx = parse_cartesian_index(index)?;
            header.extend(["x", "y"]);
            for &x in &axis {
                for &y in &axis {
                    rows.push((vec![x, y], psi_cartesian(idx, mu, x, y), 0.0));
                }
            }
        }
        WavefunctionKind::Polar => {
            let idx = parse_polar_index(index)?;
            if axis.iter().any(|&r| r < 0.0) {
                bail!("polar grid is radial; minimum must be >= 0");
            }
            header.extend(["rho", "phi"]);
            let count = axis.len();
            let phis: Vec<f64> = (0..count)
                .map(|j| 2.0 * std::f64::consts::PI * j as f64 / count as f64)
                .collect();
            for &rho in &axis {
                for &phi in &phis {
                    let value = p_radial(idx.k(), idx.n(), mu, rho) * phi_angular(&idx, mu, phi);
                    rows.push((vec![rho, phi], value, 0.0));
                }
            }
        }
        WavefunctionKind::JacobiDunkl => {
            let idx = parse_jacobi_dunkl_index(index)?;
            header.push("phi");
            for &phi in &axis {
                let z = jacobi_dunkl_f(&idx, mu, phi);
                rows.push((vec![phi], z.re, z.im));
            }
        }
    }

    let mut out = open_output(cfg)?;
    match cfg.format {
        OutputFormat::Csv => {
            writeln!(out, "{},re,im", header.join(","))?;
            for (coords, re, im) in rows {
                let coord_text: Vec<String> = coords.iter().map(|&v| fmt(v)).collect();
                writeln!(out, "{},{},{}", coord_text.join(","), fmt(re), fmt(im))?;
            }
        }
        OutputFormat::Json => {
            let samples: Vec<serde_json::Value> = rows
                .iter()
                .map(|(coords, re, im)| {
                    let mut obj = serde_json::Map::new();
                    for (name, value) in header.iter().zip(coords) {
                        obj.insert(name.to_string(), serde_json::json!(value));
                    }
                    obj.insert("re".into(), serde_json::json!(re));
                    obj.insert("im".into(), serde_json::json!(im));
                    serde_json::Value::Object(obj)
                })
                .collect();
            let doc = serde_json::json!({
                "kind": format!("{kind:?}"),
                "index": index,
                "samples": samples,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
    }
    out.flush()?;
    Ok(EXIT_OK)
}

fn write_table_csv(
    out: &mut dyn Write,
    name: &str,
    table: &OverlapTable,
) -> anyhow::Result<()> {
    for r in 0..table.dim() {
        for c in 0..table.dim() {
            let z = table.entry(r, c);
            writeln!(
                out,
                "\"{name}\",\"{}\",\"{}\",{},{},{}",
                table.row_labels[r],
                table.col_labels[c],
                fmt(z.re),
                fmt(z.im),
                fmt(z.norm()),
            )?;
        }
    }
    Ok(())
}

pub fn cmd_overlaps(cfg: &RunConfig, level: u32) -> anyhow::Result<i32> {
    if level > cfg.level_max {
        bail!("level {level} exceeds level_max = {}", cfg.level_max);
    }
    let mu = cfg.mu;
    let closed_q = q_overlap_closed_form(level, mu).map_err(|e| anyhow::anyhow!("{e}"))?;
    let diag_q = q_overlap_oracle(level, mu).map_err(|e| anyhow::anyhow!("{e}"))?;
    let mut closed_polar = polar_cartesian_overlap(level, mu).map_err(|e| anyhow::anyhow!("{e}"))?;
    let mut quad_polar = polar_overlap_quadrature_table(level, mu, cfg.quadrature_nodes)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    closed_polar.apply_row_phase_convention();
    quad_polar.apply_row_phase_convention();

    let diag_discrepancy = closed_q
        .max_entry_discrepancy(&diag_q)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    let quad_discrepancy = closed_polar
        .max_entry_discrepancy(&quad_polar)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    let unitarity = [&closed_q, &diag_q, &closed_polar, &quad_polar]
        .iter()
        .map(|t| t.unitarity_defect())
        .fold(0.0, f64::max);

    let quad_tolerance = cfg.tolerance.max(1e-7);
    let pass = diag_discrepancy < cfg.tolerance
        && quad_discrepancy < quad_tolerance
        && unitarity < cfg.tolerance;

    let mut out = open_output(cfg)?;
    match cfg.format {
        OutputFormat::Csv => {
            writeln!(out, "table,row,col,re,im,modulus")?;
            write_table_csv(&mut *out, "closed-form", &closed_polar)?;
            write_table_csv(&mut *out, "diagonalization", &diag_q)?;
            write_table_csv(&mut *out, "quadrature", &quad_polar)?;
            let zero = fmt(0.0);
            for (name, value) in [
                ("closed_vs_diagonalization", diag_discrepancy),
                ("closed_vs_quadrature", quad_discrepancy),
                ("max_unitarity_defect", unitarity),
            ] {
                writeln!(
                    out,
                    "\"discrepancy\",\"{name}\",\"\",{},{zero},{}",
                    fmt(value),
                    fmt(value)
                )?;
            }
            writeln!(
                out,
                "\"discrepancy\",\"weight_indexing\",\"{}\",{zero},{zero},{zero}",
                closed_polar.weight_indexing
            )?;
        }
        OutputFormat::Json => {
            let doc = serde_json::json!({
                "level": level,
                "tables": {
                    "closed_form": closed_polar.to_json(),
                    "diagonalization": diag_q.to_json(),
                    "quadrature": quad_polar.to_json(),
                },
                "discrepancies": {
                    "closed_vs_diagonalization": diag_discrepancy,
                    "closed_vs_quadrature": quad_discrepancy,
                    "max_unitarity_defect": unitarity,
                },
                "pass": pass,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
    }
    out.flush()?;
    Ok(if pass { EXIT_OK } else { EXIT_VERIFICATION })
}

/// Normalized discrete orthogonality residual of the oscillator-attached
/// dual -1 Hahn family at one level.
fn hahn_orthogonality_residual(level: u32, mu: dunkl_core::MuParams) -> anyhow::Result<f64> {
    let n = level as usize;
    let fam = if level % 2 == 0 {
        dual_m1_hahn_family(
            2.0 * mu.mu_y() + level as f64 + 1.0,
            2.0 * mu.mu_x() + level as f64 + 1.0,
            n,
        )
    } else {
        dual_m1_hahn_family(2.0 * mu.mu_x(), 2.0 * mu.mu_y(), n)
    }
    .map_err(|e| anyhow::anyhow!("{e}"))?;
    let mut worst: f64 = 0.0;
    for a in 0..=n {
        for b in 0..=n {
            let mut sum = 0.0;
            for l in 0..=n {
                sum += fam.weights[l] * fam.eval(a, fam.grid[l]) * fam.eval(b, fam.grid[l]);
            }
            let norm = (fam.monic_norm(a) * fam.monic_norm(b)).sqrt();
            let target = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((sum / norm - target).abs());
        }
    }
    Ok(worst)
}

pub fn cmd_check(cfg: &RunConfig) -> anyhow::Result<i32> {
    let mu = cfg.mu;
    let mut report = CheckReport::default();
    let into = |e: dunkl_core::Error| anyhow::anyhow!("{e}");

    report.fold_max(check_parabose(cfg.level_max + 2, mu).map_err(into)?);
    for level in 0..=cfg.level_max {
        report.fold_max(check_sd2_relations(level, mu).map_err(into)?);
        report.fold_max(check_casimir(level, mu).map_err(into)?);
        report.fold_max(check_spectra(level, mu).map_err(into)?);
        report.fold_max(sl12_casimir_check(level, mu).map_err(into)?);
    }

    // Dunkl-derivative anti-Hermiticity over the first 8 eigenfunctions
    let mut defect: f64 = 0.0;
    for mu1 in [mu.mu_x(), mu.mu_y()] {
        let rule = gauss_rule(
            WeightKind::GeneralizedHermite { mu: mu1 },
            cfg.quadrature_nodes,
        )
        .map_err(into)?;
        for nf in 0..8u32 {
            for ng in 0..8u32 {
                let f = HermiteMode { n: nf, mu: mu1 };
                let g = HermiteMode { n: ng, mu: mu1 };
                defect = defect
                    .max(antihermiticity_defect(&f, &g, mu1, &rule).map_err(into)?.abs());
            }
        }
    }
    report.push("dunkl-derivative/anti-hermiticity", defect);

    // dual -1 Hahn orthogonality at the top level of each parity
    let even_level = if cfg.level_max % 2 == 0 {
        cfg.level_max
    } else {
        cfg.level_max - 1
    };
    report.push(
        "dual-hahn/orthogonality-even",
        hahn_orthogonality_residual(even_level, mu)?,
    );
    if cfg.level_max >= 1 {
        let odd_level = if cfg.level_max % 2 == 1 {
            cfg.level_max
        } else {
            cfg.level_max - 1
        };
        report.push(
            "dual-hahn/orthogonality-odd",
            hahn_orthogonality_residual(odd_level, mu)?,
        );
    }

    let pass = report.all_below(cfg.tolerance);
    let colorize =
        cfg.out.is_none() && std::env::var_os("DUNKL_NO_COLOR").is_none() && cfg.format == OutputFormat::Csv;
    let mut out = open_output(cfg)?;
    match cfg.format {
        OutputFormat::Csv => {
            writeln!(out, "identity,residual,status")?;
            for (name, residual) in report.entries() {
                let ok = *residual < cfg.tolerance;
                let status = match (ok, colorize) {
                    (true, true) => "\x1b[32mPASS\x1b[0m",
                    (false, true) => "\x1b[31mFAIL\x1b[0m",
                    (true, false) => "PASS",
                    (false, false) => "FAIL",
                };
                writeln!(out, "{name},{},{status}", fmt(*residual))?;
            }
        }
        OutputFormat::Json => {
            let entries: Vec<serde_json::Value> = report
                .entries()
                .iter()
                .map(|(name, residual)| {
                    serde_json::json!({
                        "identity": name,
                        "residual": residual,
                        "pass": *residual < cfg.tolerance,
                    })
                })
                .collect();
            let doc = serde_json::json!({
                "tolerance": cfg.tolerance,
                "identities": entries,
                "pass": pass,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
    }
    out.flush()?;
    Ok(if pass { EXIT_OK } else { EXIT_VERIFICATION })
}
