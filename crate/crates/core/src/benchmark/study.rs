//! Convergence experiment: one Picard solve per mesh level, weighted errors,
//! observed rates and node-error fractions.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use super::exact::{self, BenchmarkCase};
use super::norms;
use crate::assembly::{Discretization, MethodParams};
use crate::mesh;
use crate::picard::{self, PicardControls, PicardLogEntry, PicardState};
use crate::quadrature::QuadraturePolicy;
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub m: usize,
    pub gamma: u8,
    pub nu: f64,
    pub nu_star: f64,
    pub mu_star: f64,
    pub delta: f64,
    pub levels: Vec<f64>,
    pub alpha: f64,
    pub mu: f64,
    /// Node-error thresholds, ascending.
    pub thresholds: Vec<f64>,
    pub picard: PicardControls,
    pub quadrature: QuadraturePolicy,
}

/// Node-error thresholds used for each benchmark corner.
pub fn default_thresholds(m: usize) -> Vec<f64> {
    match m {
        1 => alloc::vec![1e-6, 2.5e-6],
        2 => alloc::vec![5e-7, 1e-6],
        _ => alloc::vec![2.5e-7, 5e-7],
    }
}

impl StudyConfig {
    /// Unweighted method on benchmark `m` with the desk-scale levels.
    pub fn classical(m: usize, gamma: u8) -> Self {
        StudyConfig {
            m,
            gamma,
            nu: 0.0,
            nu_star: 0.0,
            mu_star: 0.0,
            delta: 0.0127,
            levels: alloc::vec![1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0],
            alpha: 1.0,
            mu: 1.0,
            thresholds: default_thresholds(m),
            picard: PicardControls::default(),
            quadrature: QuadraturePolicy::default(),
        }
    }

    /// Weighted method with `mu_star = nu_star`.
    pub fn weighted(m: usize, gamma: u8, nu: f64, nu_star: f64, delta: f64) -> Self {
        StudyConfig { nu, nu_star, mu_star: nu_star, delta, ..Self::classical(m, gamma) }
    }

    pub fn params(&self) -> MethodParams {
        MethodParams {
            nu: self.nu,
            nu_star: self.nu_star,
            mu_star: self.mu_star,
            delta: self.delta,
            gamma: self.gamma,
            alpha: self.alpha,
            mu: self.mu,
        }
    }

    pub fn case(&self) -> Result<BenchmarkCase> {
        BenchmarkCase::new(self.m, self.gamma, self.alpha, self.mu)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellReport {
    pub h: f64,
    pub velocity_dofs: usize,
    pub pressure_dofs: usize,
    pub error: Option<f64>,
    pub fractions: Vec<f64>,
    pub picard_converged: bool,
    pub picard_log: Vec<PicardLogEntry>,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyReport {
    pub config: StudyConfig,
    pub lambda: f64,
    pub cells: Vec<CellReport>,
    /// `rates[i]` compares levels `i` and `i + 1`.
    pub rates: Vec<Option<f64>>,
}

/// Mesh, discretization and converged Picard state for one level.
pub fn solve_level(config: &StudyConfig, h: f64) -> Result<(Discretization, PicardState)> {
    let case = config.case()?;
    let domain = mesh::build_domain(config.m)?;
    let fine = mesh::build_mesh(&domain, h)?;
    let d = Discretization::new(fine, config.params(), &config.quadrature)?;
    let st = picard::picard_solve(
        &d,
        |x| exact::manufactured_f(&case, x),
        |x| Ok(exact::exact_velocity(&case, x)),
        &config.picard,
    )?;
    Ok((d, st))
}

pub fn run_cell(config: &StudyConfig, h: f64) -> CellReport {
    let mut cell = CellReport {
        h,
        velocity_dofs: 0,
        pressure_dofs: 0,
        error: None,
        fractions: Vec::new(),
        picard_converged: false,
        picard_log: Vec::new(),
        failure: None,
    };
    let outcome = (|| -> Result<()> {
        let case = config.case()?;
        let (d, st) = solve_level(config, h)?;
        cell.velocity_dofs = d.velocity_len();
        cell.pressure_dofs = d.pressure_len();
        cell.picard_converged = st.converged;
        cell.picard_log = st.log.clone();
        cell.error = Some(norms::weighted_h1_error(&d, &st.y, &case, config.nu)?);
        let nodal = picard::recover_nodal_values(&d, &st.y, &st.z);
        let errs = norms::interior_node_errors(&d, &nodal, &case);
        cell.fractions = norms::node_error_fractions(&errs, &config.thresholds);
        if !st.converged {
            cell.failure = Some(format!("Picard iteration did not converge in {} steps", st.k));
        } else if let Some(e) = st.log.iter().find(|e| !e.uzawa_converged) {
            cell.failure = Some(format!("Uzawa stopped at residual {:.3e} in Picard step {}", e.uzawa_residual, e.k));
        }
        Ok(())
    })();
    if let Err(e) = outcome {
        cell.failure = Some(e.to_string());
    }
    cell
}

/// `log(e_i / e_{i+1}) / log(h_i / h_{i+1})` for successive levels.
pub fn observed_rates(hs: &[f64], errors: &[Option<f64>]) -> Vec<Option<f64>> {
    (0..hs.len().saturating_sub(1))
        .map(|i| match (errors[i], errors[i + 1]) {
            (Some(a), Some(b)) if a > 0.0 && b > 0.0 => Some(libm::log(a / b) / libm::log(hs[i] / hs[i + 1])),
            _ => None,
        })
        .collect()
}

/// Runs every level in order; `progress` sees each cell as it finishes.
pub fn run_convergence_study(config: &StudyConfig, mut progress: impl FnMut(&CellReport)) -> Result<StudyReport> {
    let case = config.case()?;
    let mut cells = Vec::new();
    for &h in &config.levels {
        let cell = run_cell(config, h);
        progress(&cell);
        cells.push(cell);
    }
    let errors: Vec<Option<f64>> = cells.iter().map(|c| c.error).collect();
    let rates = observed_rates(&config.levels, &errors);
    Ok(StudyReport { config: config.clone(), lambda: case.lambda, cells, rates })
}

fn fmt_opt(v: Option<f64>, exp: bool) -> String {
    match v {
        Some(x) if exp => format!("{x:.3e}"),
        Some(x) => format!("{x:.3}"),
        None => "-".into(),
    }
}

/// Aligned markdown table with one row per level.
pub fn render_markdown(report: &StudyReport) -> String {
    let c = &report.config;
    let mut head: Vec<String> = ["h", "error", "rate", "Picard k", "Uzawa its"].iter().map(|s| s.to_string()).collect();
    head.extend(c.thresholds.iter().map(|t| format!("frac<={t:.1e}")));
    let mut rows: Vec<Vec<String>> = Vec::new();
    for (i, cell) in report.cells.iter().enumerate() {
        let rate = if i == 0 { None } else { report.rates[i - 1] };
        let mut row = alloc::vec![
            format!("{:.4e}", cell.h),
            fmt_opt(cell.error, true),
            fmt_opt(rate, false),
            cell.picard_log.len().to_string(),
            cell.picard_log.iter().map(|e| e.uzawa_iterations).sum::<usize>().to_string(),
        ];
        for k in 0..c.thresholds.len() {
            row.push(fmt_opt(cell.fractions.get(k).copied(), false));
        }
        rows.push(row);
    }
    let widths: Vec<usize> =
        (0..head.len()).map(|j| rows.iter().map(|r| r[j].len()).chain([head[j].len()]).max().unwrap_or(0)).collect();
    let mut out = String::new();
    let mode = if c.nu == 0.0 && c.nu_star == 0.0 && c.mu_star == 0.0 { "classical" } else { "weighted" };
    let _ = writeln!(
        out,
        "m={} omega={:.4} lambda={:.5} gamma={} {mode} nu={} nu*={} mu*={} delta={} alpha={} mu={}\n",
        c.m,
        mesh::benchmark_angle(c.m).unwrap_or(f64::NAN),
        report.lambda,
        c.gamma,
        c.nu,
        c.nu_star,
        c.mu_star,
        c.delta,
        c.alpha,
        c.mu
    );
    let line = |cells: &[String]| {
        let mut s = String::from("|");
        for (j, v) in cells.iter().enumerate() {
            let _ = write!(s, " {:>w$} |", v, w = widths[j]);
        }
        s
    };
    let _ = writeln!(out, "{}", line(&head));
    let sep: Vec<String> = widths.iter().map(|&w| format!("{}:", "-".repeat(w.max(2) - 1))).collect();
    let mut s = String::from("|");
    for (j, v) in sep.iter().enumerate() {
        let _ = write!(s, " {:>w$} |", v, w = widths[j]);
    }
    let _ = writeln!(out, "{s}");
    for r in &rows {
        let _ = writeln!(out, "{}", line(r));
    }
    for cell in &report.cells {
        if let Some(f) = &cell.failure {
            let _ = writeln!(out, "\nh={:.4e}: {f}", cell.h);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rates_of_exact_power_law() {
        let hs = [0.1, 0.05, 0.025];
        let errs: Vec<Option<f64>> = hs.iter().map(|&h| Some(3.0 * libm::pow(h, 0.7))).collect();
        for r in observed_rates(&hs, &errs) {
            assert!((r.unwrap() - 0.7).abs() < 1e-12);
        }
        assert_eq!(observed_rates(&[0.1], &[Some(1.0)]), Vec::<Option<f64>>::new());
        assert_eq!(observed_rates(&hs, &[Some(1.0), None, Some(1.0)]), alloc::vec![None, None]);
    }
}
