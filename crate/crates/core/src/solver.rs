//! Direct and iterative solvers for the per-step tridiagonal port systems.

use crate::error::{Error, Result};

/// Symmetric tridiagonal matrix: `diag` holds the main diagonal, `off[i]`
/// couples rows `i` and `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl Tridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::config("empty tridiagonal system"));
        }
        if off.len() + 1 != diag.len() {
            return Err(Error::config(format!(
                "off-diagonal length {} does not match order {}",
                off.len(),
                diag.len()
            )));
        }
        Ok(Tridiagonal { diag, off })
    }

    pub fn order(&self) -> usize {
        self.diag.len()
    }

    /// `out = A x`.
    pub fn multiply(&self, x: &[f64], out: &mut [f64]) {
        let n = self.order();
        debug_assert_eq!(x.len(), n);
        debug_assert_eq!(out.len(), n);
        for i in 0..n {
            let mut v = self.diag[i] * x[i];
            if i > 0 {
                v += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                v += self.off[i] * x[i + 1];
            }
            out[i] = v;
        }
    }

    /// Smallest row margin `|diag| - sum |off|`; positive everywhere means
    /// strict diagonal dominance.
    pub fn dominance_margin(&self) -> f64 {
        let n = self.order();
        let mut margin = f64::INFINITY;
        for i in 0..n {
            let mut row = self.diag[i].abs();
            if i > 0 {
                row -= self.off[i - 1].abs();
            }
            if i + 1 < n {
                row -= self.off[i].abs();
            }
            margin = margin.min(row);
        }
        margin
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    GaussSeidel,
    DirectTridiagonal,
}

/// Per-step linear solver settings.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub method: SolveMethod,
    /// Relative residual threshold for the iterative method.
    pub tol: f64,
    pub max_iter: usize,
}

impl SolverConfig {
    pub fn gauss_seidel() -> Self {
        SolverConfig {
            method: SolveMethod::GaussSeidel,
            tol: 1e-10,
            max_iter: 1000,
        }
    }

    pub fn direct() -> Self {
        SolverConfig {
            method: SolveMethod::DirectTridiagonal,
            tol: 1e-10,
            max_iter: 1,
        }
    }

    /// Direct elimination for one- and two-layer panels, Gauss-Seidel above.
    pub fn default_for_layers(layer_count: usize) -> Self {
        if layer_count <= 2 {
            Self::direct()
        } else {
            Self::gauss_seidel()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::config(format!("tol must be > 0, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::config("max_iter must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolveStats {
    pub iterations: usize,
    pub residual: f64,
}

/// Solve `A x = b`. For the iterative method `x` carries the warm-start guess
/// in and the solution out; the direct method overwrites it.
pub fn solve_instantaneous(
    a: &Tridiagonal,
    b: &[f64],
    cfg: &SolverConfig,
    x: &mut [f64],
) -> Result<SolveStats> {
    if b.len() != a.order() || x.len() != a.order() {
        return Err(Error::config("solver dimension mismatch"));
    }
    match cfg.method {
        SolveMethod::DirectTridiagonal => {
            let sol = thomas(a, b)?;
            x.copy_from_slice(&sol);
            Ok(SolveStats {
                iterations: 0,
                residual: 0.0,
            })
        }
        SolveMethod::GaussSeidel => gauss_seidel(a, b, x, cfg.tol, cfg.max_iter),
    }
}

/// Direct tridiagonal elimination (forward sweep, back substitution).
pub fn thomas(a: &Tridiagonal, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.order();
    if b.len() != n {
        return Err(Error::config("rhs length does not match system order"));
    }
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut denom = a.diag[0];
    if denom == 0.0 {
        return Err(Error::solver("zero pivot in direct tridiagonal solve"));
    }
    if n > 1 {
        c[0] = a.off[0] / denom;
    }
    d[0] = b[0] / denom;
    for i in 1..n {
        denom = a.diag[i] - a.off[i - 1] * c[i - 1];
        if denom == 0.0 || !denom.is_finite() {
            return Err(Error::solver(format!(
                "degenerate pivot {denom} at row {i} in direct tridiagonal solve"
            )));
        }
        if i + 1 < n {
            c[i] = a.off[i] / denom;
        }
        d[i] = (b[i] - a.off[i - 1] * d[i - 1]) / denom;
    }
    let mut x = d;
    for i in (0..n.saturating_sub(1)).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    Ok(x)
}

fn gauss_seidel(
    a: &Tridiagonal,
    b: &[f64],
    x: &mut [f64],
    tol: f64,
    max_iter: usize,
) -> Result<SolveStats> {
    let n = a.order();
    let b_norm: f64 = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    let scale = if b_norm > 0.0 { b_norm } else { 1.0 };
    let mut residual = f64::INFINITY;
    let mut ax = vec![0.0; n];
    for it in 1..=max_iter {
        for i in 0..n {
            let mut v = b[i];
            if i > 0 {
                v -= a.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                v -= a.off[i] * x[i + 1];
            }
            x[i] = v / a.diag[i];
        }
        a.multiply(x, &mut ax);
        residual = ax
            .iter()
            .zip(b)
            .map(|(l, r)| (l - r) * (l - r))
            .sum::<f64>()
            .sqrt()
            / scale;
        if !residual.is_finite() {
            return Err(Error::solver(format!(
                "gauss-seidel diverged at iteration {it} (residual {residual})"
            )));
        }
        if residual <= tol {
            return Ok(SolveStats {
                iterations: it,
                residual,
            });
        }
    }
    Err(Error::solver(format!(
        "gauss-seidel did not converge in {max_iter} iterations (relative residual {residual:.3e}, tol {tol:.3e})"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve_gs(a: &Tridiagonal, b: &[f64], tol: f64) -> Vec<f64> {
        let mut x = vec![0.0; a.order()];
        let cfg = SolverConfig {
            method: SolveMethod::GaussSeidel,
            tol,
            max_iter: 10_000,
        };
        solve_instantaneous(a, b, &cfg, &mut x).unwrap();
        x
    }

    #[test]
    fn identity_system() {
        let a = Tridiagonal::new(vec![1.0, 1.0], vec![0.0]).unwrap();
        let x = thomas(&a, &[1.0, 2.0]).unwrap();
        assert_eq!(x, vec![1.0, 2.0]);
        assert_eq!(solve_gs(&a, &[1.0, 2.0], 1e-14), vec![1.0, 2.0]);
    }

    #[test]
    fn symmetric_two_by_two() {
        // [[2,1],[1,2]] x = (3,3) -> (1,1)
        let a = Tridiagonal::new(vec![2.0, 2.0], vec![1.0]).unwrap();
        let x = thomas(&a, &[3.0, 3.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-14 && (x[1] - 1.0).abs() < 1e-14);
        let x = solve_gs(&a, &[3.0, 3.0], 1e-14);
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gauss_seidel_matches_direct_on_dominant_system() {
        // fixed pseudo-random diagonally dominant 10x10
        let mut seed = 88172645463325252u64;
        let mut rng = || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed as f64 / u64::MAX as f64) * 2.0 - 1.0
        };
        let n = 10;
        let off: Vec<f64> = (0..n - 1).map(|_| rng()).collect();
        let diag: Vec<f64> = (0..n)
            .map(|i| {
                let mut row = 0.0;
                if i > 0 {
                    row += off[i - 1].abs();
                }
                if i + 1 < n {
                    row += off[i].abs();
                }
                row + 1.0 + rng().abs()
            })
            .collect();
        let b: Vec<f64> = (0..n).map(|_| rng()).collect();
        let a = Tridiagonal::new(diag, off).unwrap();
        assert!(a.dominance_margin() >= 1.0);
        let direct = thomas(&a, &b).unwrap();
        let gs = solve_gs(&a, &b, 1e-12);
        let max_diff = direct
            .iter()
            .zip(&gs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(max_diff <= 1e-8, "gs vs direct differ by {max_diff}");
    }

    #[test]
    fn gauss_seidel_reports_non_convergence() {
        // not diagonally dominant; iteration diverges
        let a = Tridiagonal::new(vec![1.0, 1.0, 1.0], vec![2.0, 2.0]).unwrap();
        let mut x = vec![0.0; 3];
        let cfg = SolverConfig {
            method: SolveMethod::GaussSeidel,
            tol: 1e-12,
            max_iter: 50,
        };
        let err = solve_instantaneous(&a, &[1.0, 1.0, 1.0], &cfg, &mut x).unwrap_err();
        assert!(matches!(err, Error::Solver(_)));
    }

    #[test]
    fn thomas_rejects_zero_pivot() {
        let a = Tridiagonal::new(vec![0.0, 1.0], vec![0.0]).unwrap();
        assert!(thomas(&a, &[1.0, 1.0]).is_err());
    }

    #[test]
    fn zero_rhs_is_exact() {
        let a = Tridiagonal::new(vec![3.0, 3.0, 3.0], vec![1.0, 1.0]).unwrap();
        let mut x = vec![0.0; 3];
        let stats = solve_instantaneous(&a, &[0.0; 3], &SolverConfig::gauss_seidel(), &mut x)
            .unwrap();
        assert_eq!(x, vec![0.0; 3]);
        assert_eq!(stats.iterations, 1);
    }

    #[test]
    fn default_method_by_layer_count() {
        assert_eq!(
            SolverConfig::default_for_layers(1).method,
            SolveMethod::DirectTridiagonal
        );
        assert_eq!(
            SolverConfig::default_for_layers(2).method,
            SolveMethod::DirectTridiagonal
        );
        assert_eq!(
            SolverConfig::default_for_layers(3).method,
            SolveMethod::GaussSeidel
        );
    }
}
