//! Steady states of the open walk: kernel solve, certification and
//! classification, coherence measures and convergence diagnostics.
//!
//! For a connected graph the generator has a one-dimensional kernel spanned
//! by a positive definite state, and that state is `I/n` exactly when the
//! transition matrix `M` is doubly stochastic (for connected graphs, exactly
//! when the graph is regular). [`classify_steady_state`] checks a computed
//! report against those expectations and records every disagreement.

use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::dynamics::{evolve_ctoqw, Method};
use crate::error::{Error, Result};
use crate::format::cmatrix_vec_serde;
use crate::graph::{Family, Graph, GraphClass};
use crate::lindblad::Liouvillian;
use crate::numerics::{
    c, general_eigenvalues, hermitian_eig, hermitize, max_norm, null_space_detail, unvectorize, validate_density_with,
    ComplexMatrix, DensityMatrix, RankTolerance,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    MaximallyMixed,
    CoherentLimit,
    NonUnique,
}

/// Strict positivity of the smallest eigenvalue, with an explicit band in
/// which floating point cannot decide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Positivity {
    Definite,
    Indeterminate,
    NotDefinite,
}

impl Positivity {
    pub fn from_min_eigenvalue(min: f64, threshold: f64) -> Self {
        if min > threshold {
            Positivity::Definite
        } else if min > -threshold {
            Positivity::Indeterminate
        } else {
            Positivity::NotDefinite
        }
    }
}

/// Steady-state outcome predicted from graph structure alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Prediction {
    MaximallyMixed,
    UniqueCoherentLimit,
    /// Disconnected graph: no structural guarantee applies.
    Unknown,
}

pub fn predict(class: &GraphClass) -> Prediction {
    match (class.connected, class.doubly_stochastic_m) {
        (false, _) => Prediction::Unknown,
        (true, true) => Prediction::MaximallyMixed,
        (true, false) => Prediction::UniqueCoherentLimit,
    }
}

/// Result of comparing a report with the structural expectations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyCheck {
    pub connected: bool,
    pub doubly_stochastic_m: bool,
    pub prediction: Prediction,
    pub consistent: bool,
    /// Human-readable description of each failed expectation.
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteadyStateReport {
    pub dim: usize,
    /// The normalized steady state; absent when the kernel is not one-dimensional.
    pub rho_inf: Option<DensityMatrix>,
    pub kernel_dim: usize,
    pub unique: bool,
    pub positive_definite: bool,
    pub positivity: Option<Positivity>,
    pub min_eigenvalue: Option<f64>,
    /// `||L(rho_inf)||_max` evaluated with the matrix-free generator.
    pub residual: Option<f64>,
    /// `||rho_inf - I/n||_max`.
    pub distance_to_mixed: Option<f64>,
    pub classification: Classification,
    /// Kernel basis reshaped to matrices, filled when the kernel is degenerate.
    #[serde(with = "cmatrix_vec_serde")]
    pub kernel_basis: Vec<ComplexMatrix>,
    pub smallest_singular_value: f64,
    /// Smallest singular value treated as nonzero (the gap above the kernel).
    pub smallest_retained_singular_value: Option<f64>,
    pub consistency: Option<ConsistencyCheck>,
}

/// Solves `L(rho) = 0` with `tr rho = 1`.
pub fn solve_steady_state(lio: &Liouvillian, tol: &Tolerances) -> Result<SteadyStateReport> {
    let n = lio.dim;
    let ns = null_space_detail(&lio.matrix, RankTolerance::Relative(tol.rank))?;
    let kernel_dim = ns.dim();
    if kernel_dim == 0 {
        return Err(Error::EmptyKernel { smallest_singular_value: ns.smallest_singular_value });
    }
    let mut report = SteadyStateReport {
        dim: n,
        rho_inf: None,
        kernel_dim,
        unique: kernel_dim == 1,
        positive_definite: false,
        positivity: None,
        min_eigenvalue: None,
        residual: None,
        distance_to_mixed: None,
        classification: Classification::NonUnique,
        kernel_basis: Vec::new(),
        smallest_singular_value: ns.smallest_singular_value,
        smallest_retained_singular_value: ns.smallest_retained,
        consistency: None,
    };
    if kernel_dim > 1 {
        report.kernel_basis = ns.basis.iter().map(|v| unvectorize(v, n)).collect();
        return Ok(report);
    }

    let x = unvectorize(&ns.basis[0], n);
    let tr = x.trace();
    if tr.norm() <= f64::EPSILON {
        return Err(Error::InvalidArgument("kernel vector is traceless; cannot normalize".into()));
    }
    // Rotate the trace onto the positive real axis, then scale it to one.
    let phase = tr.conj() / tr.norm();
    let x = hermitize(&(x * phase).unscale(tr.norm()));
    let rho = validate_density_with(&x, tol, tol.psd)?;

    let min_eig = hermitian_eig(rho.matrix(), false)?.min();
    let positivity = Positivity::from_min_eigenvalue(min_eig, tol.definite);
    let residual = max_norm(&lio.apply(rho.matrix())?);
    let mixed = ComplexMatrix::identity(n, n).scale(1.0 / n as f64);
    let distance = max_norm(&(rho.matrix() - mixed));

    report.positivity = Some(positivity);
    report.positive_definite = positivity == Positivity::Definite;
    report.min_eigenvalue = Some(min_eig);
    report.residual = Some(residual);
    report.distance_to_mixed = Some(distance);
    report.classification =
        if distance <= tol.mixed { Classification::MaximallyMixed } else { Classification::CoherentLimit };
    report.rho_inf = Some(rho);
    Ok(report)
}

/// Checks a solved report against the structure of `g`.
///
/// Connected graphs must give a unique, positive definite steady state with
/// a small residual, and that state must be `I/n` exactly when `M` is doubly
/// stochastic. Disconnected graphs carry no expectation beyond the residual.
pub fn classify_steady_state(g: &Graph, mut report: SteadyStateReport, tol: &Tolerances) -> SteadyStateReport {
    let class = g.classify_with(tol);
    let mut violations = Vec::new();

    if let Some(r) = report.residual {
        if r > tol.residual {
            violations.push(format!("residual {r:e} exceeds {:e}", tol.residual));
        }
    }
    if class.connected {
        if !report.unique {
            violations.push(format!("connected graph has kernel dimension {}", report.kernel_dim));
        } else {
            if !report.positive_definite {
                violations.push(format!(
                    "steady state is not positive definite (min eigenvalue {:e})",
                    report.min_eigenvalue.unwrap_or(f64::NAN)
                ));
            }
            let mixed = report.classification == Classification::MaximallyMixed;
            if class.doubly_stochastic_m && !mixed {
                violations.push(format!(
                    "M is doubly stochastic but ||rho - I/n||_max = {:e}",
                    report.distance_to_mixed.unwrap_or(f64::NAN)
                ));
            }
            if !class.doubly_stochastic_m && mixed {
                violations.push(format!(
                    "M is not doubly stochastic but ||rho - I/n||_max = {:e}",
                    report.distance_to_mixed.unwrap_or(f64::NAN)
                ));
            }
        }
    }

    report.consistency = Some(ConsistencyCheck {
        connected: class.connected,
        doubly_stochastic_m: class.doubly_stochastic_m,
        prediction: predict(&class),
        consistent: violations.is_empty(),
        violations,
    });
    report
}

/// Solve followed by classification.
pub fn analyze(g: &Graph, tol: &Tolerances) -> Result<SteadyStateReport> {
    let lio = Liouvillian::from_graph(g)?;
    Ok(classify_steady_state(g, solve_steady_state(&lio, tol)?, tol))
}

/// Off-diagonal coherence of a state in the vertex basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherenceReport {
    /// `sum_{j != k} |rho_jk|`.
    pub l1_offdiag: f64,
    pub max_offdiag: f64,
    pub diag_distribution: Vec<f64>,
}

pub fn coherence(rho: &DensityMatrix) -> CoherenceReport {
    let m = rho.matrix();
    let n = rho.dim();
    let mut l1 = 0.0;
    let mut max = 0.0_f64;
    for j in 0..n {
        for k in 0..n {
            if j != k {
                let a = m[(j, k)].norm();
                l1 += a;
                max = max.max(a);
            }
        }
    }
    CoherenceReport { l1_offdiag: l1, max_offdiag: max, diag_distribution: rho.diagonal() }
}

/// `1/2 ||a - b||_1`.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim().to_string(), got: b.dim().to_string() });
    }
    let diff = a.matrix() - b.matrix();
    let spec = hermitian_eig(&diff, false)?;
    Ok(0.5 * spec.eigenvalues.iter().map(|x| x.abs()).sum::<f64>())
}

/// Smallest `|Re lambda|` over the nonzero eigenvalues of the generator.
/// Diagnostic only.
pub fn spectral_gap(lio: &Liouvillian, tol: &Tolerances) -> Result<Option<f64>> {
    let eigs = general_eigenvalues(&lio.matrix)?;
    let scale = eigs.iter().fold(0.0_f64, |m, z| m.max(z.norm())).max(1.0);
    Ok(eigs.iter().filter(|z| z.norm() > tol.rank * scale).map(|z| z.re.abs()).min_by(f64::total_cmp))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceProfile {
    /// `(t, D(rho(t), target))` pairs.
    pub samples: Vec<(f64, f64)>,
    pub spectral_gap: Option<f64>,
}

/// Trace distance to `target` along the trajectory from `rho0`.
pub fn convergence_profile(
    lio: &Liouvillian,
    rho0: &DensityMatrix,
    target: &DensityMatrix,
    times: &[f64],
    method: Method,
    tol: &Tolerances,
) -> Result<ConvergenceProfile> {
    if target.dim() != lio.dim {
        return Err(Error::DimensionMismatch { expected: lio.dim.to_string(), got: target.dim().to_string() });
    }
    let traj = evolve_ctoqw(lio, rho0, times, method, tol)?;
    let samples = traj
        .times
        .iter()
        .zip(&traj.states)
        .map(|(&t, rho)| Ok((t, trace_distance(rho, target)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceProfile { samples, spectral_gap: spectral_gap(lio, tol)? })
}

/// A closed-form steady state known for a specific labelled graph.
#[derive(Debug, Clone, PartialEq)]
pub struct KnownSteadyState {
    pub name: String,
    pub matrix: ComplexMatrix,
}

/// Exact steady state for the 3-vertex path `0-1-2`.
pub fn path3_steady_state() -> ComplexMatrix {
    let d = 1.0 / 28.0;
    #[rustfmt::skip]
    let entries = [
        c(2.0 / 7.0, 0.0), c(-d, d),          c(1.0 / 14.0, 0.0),
        c(-d, -d),         c(3.0 / 7.0, 0.0), c(-d, -d),
        c(1.0 / 14.0, 0.0), c(-d, d),         c(2.0 / 7.0, 0.0),
    ];
    ComplexMatrix::from_row_slice(3, 3, &entries)
}

/// Exact steady state for the star with hub 0 and leaves 1, 2, 3.
pub fn claw_steady_state() -> ComplexMatrix {
    let hub = c(-2.0 / 39.0, -1.0 / 39.0);
    let leaf = c(2.0 / 39.0, 0.0);
    ComplexMatrix::from_fn(4, 4, |j, k| match (j, k) {
        (0, 0) => c(11.0 / 26.0, 0.0),
        (0, _) => hub,
        (_, 0) => hub.conj(),
        _ if j == k => c(5.0 / 26.0, 0.0),
        _ => leaf,
    })
}

/// Looks up a closed-form steady state for `g` (exact labelled match).
pub fn known_steady_state(g: &Graph) -> Option<KnownSteadyState> {
    let n = g.vertex_count();
    if n == 3 && *g == Graph::generate(Family::Path, 3).ok()? {
        return Some(KnownSteadyState { name: "path-3".into(), matrix: path3_steady_state() });
    }
    if n == 4 && *g == Graph::generate(Family::Star, 3).ok()? {
        return Some(KnownSteadyState { name: "star-3".into(), matrix: claw_steady_state() });
    }
    let class = g.classify();
    if class.connected && class.regular && n >= 2 {
        return Some(KnownSteadyState {
            name: format!("maximally-mixed-{n}"),
            matrix: ComplexMatrix::identity(n, n).scale(1.0 / n as f64),
        });
    }
    None
}

/// Comparison of a solved steady state with a known closed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceMatch {
    pub target: Option<String>,
    pub max_deviation: Option<f64>,
}

pub fn reference_match(g: &Graph, report: &SteadyStateReport) -> ReferenceMatch {
    match (known_steady_state(g), &report.rho_inf) {
        (Some(known), Some(rho)) => {
            ReferenceMatch { target: Some(known.name), max_deviation: Some(max_norm(&(rho.matrix() - known.matrix))) }
        }
        (Some(known), None) => ReferenceMatch { target: Some(known.name), max_deviation: None },
        (None, _) => ReferenceMatch { target: None, max_deviation: None },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::validate_density;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn path3_solution_matches_closed_form() {
        let g = Graph::generate(Family::Path, 3).unwrap();
        let report = analyze(&g, &tol()).unwrap();
        let rho = report.rho_inf.as_ref().unwrap();
        assert!(max_norm(&(rho.matrix() - path3_steady_state())) < 1e-10);
        assert_eq!(report.classification, Classification::CoherentLimit);
        assert!(report.unique && report.positive_definite);
        assert!(report.consistency.as_ref().unwrap().consistent);
    }

    #[test]
    fn claw_solution_matches_closed_form() {
        let g = Graph::generate(Family::Star, 3).unwrap();
        let report = analyze(&g, &tol()).unwrap();
        let rho = report.rho_inf.unwrap();
        assert!(max_norm(&(rho.matrix() - claw_steady_state())) < 1e-10);
    }

    #[test]
    fn cycles_are_maximally_mixed() {
        for n in [3, 4, 5] {
            let g = Graph::generate(Family::Cycle, n).unwrap();
            let report = analyze(&g, &tol()).unwrap();
            assert_eq!(report.classification, Classification::MaximallyMixed);
            assert!(report.distance_to_mixed.unwrap() <= 1e-10);
            let check = report.consistency.unwrap();
            assert!(check.consistent);
            assert_eq!(check.prediction, Prediction::MaximallyMixed);
        }
    }

    #[test]
    fn disjoint_edges_are_non_unique_and_vacuously_consistent() {
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        let report = analyze(&g, &tol()).unwrap();
        assert!(report.kernel_dim >= 2);
        assert_eq!(report.classification, Classification::NonUnique);
        assert!(report.rho_inf.is_none());
        assert_eq!(report.kernel_basis.len(), report.kernel_dim);
        let check = report.consistency.unwrap();
        assert!(check.consistent);
        assert_eq!(check.prediction, Prediction::Unknown);
    }

    #[test]
    fn inconsistency_is_reported() {
        // Pretend the path-3 solution came out maximally mixed.
        let g = Graph::generate(Family::Path, 3).unwrap();
        let lio = Liouvillian::from_graph(&g).unwrap();
        let mut report = solve_steady_state(&lio, &tol()).unwrap();
        report.classification = Classification::MaximallyMixed;
        let report = classify_steady_state(&g, report, &tol());
        let check = report.consistency.unwrap();
        assert!(!check.consistent);
        assert_eq!(check.violations.len(), 1);
    }

    #[test]
    fn empty_kernel_is_rejected() {
        let g = Graph::generate(Family::Path, 2).unwrap();
        let mut lio = Liouvillian::from_graph(&g).unwrap();
        lio.matrix = ComplexMatrix::identity(4, 4);
        assert!(matches!(solve_steady_state(&lio, &tol()), Err(Error::EmptyKernel { .. })));
    }

    #[test]
    fn coherence_examples() {
        let mixed = DensityMatrix::maximally_mixed(3);
        assert_eq!(coherence(&mixed).l1_offdiag, 0.0);
        let rho = validate_density(&path3_steady_state()).unwrap();
        let report = coherence(&rho);
        // 4 |-1/28 + i/28| + 2 (1/14)
        let want = (2f64.sqrt() + 1.0) / 7.0;
        assert!((report.l1_offdiag - want).abs() < 1e-14);
        let claw = validate_density(&claw_steady_state()).unwrap();
        let d = coherence(&claw).diag_distribution;
        let want = [11.0 / 26.0, 5.0 / 26.0, 5.0 / 26.0, 5.0 / 26.0];
        for (a, b) in d.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn trace_distance_examples() {
        let zero = DensityMatrix::vertex(2, 0);
        let one = DensityMatrix::vertex(2, 1);
        let mixed = DensityMatrix::maximally_mixed(2);
        assert_eq!(trace_distance(&zero, &zero).unwrap(), 0.0);
        assert!((trace_distance(&zero, &one).unwrap() - 1.0).abs() < 1e-15);
        assert!((trace_distance(&mixed, &zero).unwrap() - 0.5).abs() < 1e-15);
        assert!(trace_distance(&zero, &DensityMatrix::vertex(3, 0)).is_err());
    }

    #[test]
    fn fixed_point_profile_is_flat() {
        let g = Graph::generate(Family::Path, 3).unwrap();
        let lio = Liouvillian::from_graph(&g).unwrap();
        let rho = validate_density(&path3_steady_state()).unwrap();
        let prof = convergence_profile(&lio, &rho, &rho, &[0.0, 1.0, 10.0], Method::Expm, &tol()).unwrap();
        assert!(prof.samples.iter().all(|&(_, d)| d < 1e-10));
        assert!(prof.spectral_gap.unwrap() > 0.0);
    }

    #[test]
    fn positivity_bands() {
        assert_eq!(Positivity::from_min_eigenvalue(1e-3, 1e-10), Positivity::Definite);
        assert_eq!(Positivity::from_min_eigenvalue(1e-11, 1e-10), Positivity::Indeterminate);
        assert_eq!(Positivity::from_min_eigenvalue(-1e-11, 1e-10), Positivity::Indeterminate);
        assert_eq!(Positivity::from_min_eigenvalue(-1e-3, 1e-10), Positivity::NotDefinite);
    }

    #[test]
    fn known_states() {
        assert_eq!(known_steady_state(&Graph::generate(Family::Path, 3).unwrap()).unwrap().name, "path-3");
        assert_eq!(known_steady_state(&Graph::generate(Family::Cycle, 5).unwrap()).unwrap().name, "maximally-mixed-5");
        assert!(known_steady_state(&Graph::generate(Family::Path, 4).unwrap()).is_none());
        // relabelled path is not matched
        assert!(known_steady_state(&Graph::new(3, [(0, 2), (2, 1)]).unwrap()).is_none());
    }

    #[test]
    fn spectral_gap_on_symmetric_graphs() {
        for (f, size) in [(Family::Star, 3), (Family::Star, 4), (Family::Cycle, 6), (Family::Complete, 5)] {
            let g = Graph::generate(f, size).unwrap();
            let lio = Liouvillian::from_graph(&g).unwrap();
            let eigs = crate::numerics::general_eigenvalues(&lio.matrix).unwrap();
            let sum: num_complex::Complex64 = eigs.iter().sum();
            assert!((sum - lio.matrix.trace()).norm() < 1e-9, "{f} {size}");
            assert!(eigs.iter().all(|z| z.re < 1e-9), "{f} {size}");
            assert!(spectral_gap(&lio, &tol()).unwrap().unwrap() > 1e-3, "{f} {size}");
        }
    }
}
