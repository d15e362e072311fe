//! Time evolution of the three walks on a graph.
//!
//! * open walk: `rho(t) = exp(t L) rho(0)` for the generator `L`,
//! * classical random walk: `p(t) = exp(-t Lap) p(0)`,
//! * unitary quantum walk: `psi(t) = exp(-i t Lap) psi(0)`,
//!
//! where `Lap` is the graph Laplacian. The classical walk uses the decaying
//! heat semigroup `exp(-t Lap)`, the only sign whose limit is the uniform
//! distribution `1/n`.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::integrator::DormandPrince;
use crate::lindblad::Liouvillian;
use crate::numerics::{
    c, expm, expm_real, symmetric_eig, unvectorize, validate_density_with, vectorize, ComplexMatrix, ComplexVector,
    DensityMatrix, Spectrum,
};

/// Largest vertex count for which [`Method::default_for`] picks `Expm`.
pub const EXPM_DEFAULT_MAX_N: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Expm,
    RkAdaptive,
}

impl Method {
    pub fn default_for(n: usize) -> Self {
        if n <= EXPM_DEFAULT_MAX_N {
            Method::Expm
        } else {
            Method::RkAdaptive
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory<S> {
    pub times: Vec<f64>,
    pub states: Vec<S>,
}

impl<S> Trajectory<S> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<&S> {
        self.states.last()
    }
}

/// Site distribution carried by a state of one of the walks.
pub trait SiteDistribution {
    fn site_distribution(&self) -> Vec<f64>;
}

impl SiteDistribution for DensityMatrix {
    fn site_distribution(&self) -> Vec<f64> {
        self.diagonal()
    }
}

impl SiteDistribution for DVector<f64> {
    fn site_distribution(&self) -> Vec<f64> {
        self.iter().copied().collect()
    }
}

impl SiteDistribution for ComplexVector {
    fn site_distribution(&self) -> Vec<f64> {
        self.iter().map(|z| z.norm_sqr()).collect()
    }
}

fn check_times(times: &[f64]) -> Result<()> {
    if let Some(&first) = times.first() {
        if first.is_nan() || first < 0.0 {
            return Err(Error::InvalidArgument(format!("sample times must start at t >= 0, got {first}")));
        }
    }
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidArgument("sample times must be finite".into()));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidArgument("sample times must be ascending".into()));
    }
    Ok(())
}

/// Evolves `rho0` under the open-walk generator and validates every sample.
pub fn evolve_ctoqw(
    lio: &Liouvillian,
    rho0: &DensityMatrix,
    times: &[f64],
    method: Method,
    tol: &Tolerances,
) -> Result<Trajectory<DensityMatrix>> {
    check_times(times)?;
    let n = lio.dim;
    if rho0.dim() != n {
        return Err(Error::DimensionMismatch { expected: format!("{n}x{n}"), got: format!("{0}x{0}", rho0.dim()) });
    }
    let raw = match method {
        Method::Expm => evolve_expm(lio, rho0.matrix(), times)?,
        Method::RkAdaptive => {
            let dp = DormandPrince::new(tol.rk_rel, tol.rk_abs);
            dp.integrate(|rho| lio.apply(rho), 0.0, rho0.matrix(), times)?
        }
    };
    let states = raw
        .iter()
        .zip(times)
        .map(|(m, &t)| if t == 0.0 { Ok(rho0.clone()) } else { validate_density_with(m, tol, tol.trajectory_psd) })
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory { times: times.to_vec(), states })
}

/// Steps `vec(rho)` with `exp(dt L)`, reusing the propagator while the
/// spacing stays the same.
fn evolve_expm(lio: &Liouvillian, rho0: &ComplexMatrix, times: &[f64]) -> Result<Vec<ComplexMatrix>> {
    let n = lio.dim;
    let mut state = vectorize(rho0);
    let mut t_prev = 0.0;
    let mut cache: Option<(f64, ComplexMatrix)> = None;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let dt = t - t_prev;
        if dt > 0.0 {
            let reuse = matches!(&cache, Some((h, _)) if (h - dt).abs() <= 1e-13 * dt);
            if !reuse {
                cache = Some((dt, expm(&lio.matrix.scale(dt))?));
            }
            let (_, prop) = cache.as_ref().expect("propagator cached");
            state = prop * state;
            t_prev = t;
        }
        out.push(unvectorize(&state, n));
    }
    Ok(out)
}

fn check_probability(p: &DVector<f64>, n: usize, tol: &Tolerances) -> Result<()> {
    if p.len() != n {
        return Err(Error::DimensionMismatch { expected: n.to_string(), got: p.len().to_string() });
    }
    if p.iter().any(|x| !x.is_finite() || *x < -tol.normalization) {
        return Err(Error::InvalidArgument("probability vector has negative or non-finite entries".into()));
    }
    let sum: f64 = p.sum();
    if (sum - 1.0).abs() > tol.normalization {
        return Err(Error::InvalidArgument(format!("probability vector sums to {sum}, not 1")));
    }
    Ok(())
}

/// Classical walk `p(t) = exp(-t Lap) p0`.
pub fn evolve_ctrw(g: &Graph, p0: &DVector<f64>, times: &[f64], tol: &Tolerances) -> Result<Trajectory<DVector<f64>>> {
    check_times(times)?;
    let n = g.vertex_count();
    check_probability(p0, n, tol)?;
    let lap = g.laplacian();
    let mut states = Vec::with_capacity(times.len());
    for &t in times {
        let p = if t == 0.0 { p0.clone() } else { expm_real(&lap.scale(-t))? * p0 };
        check_probability(&p, n, tol)?;
        states.push(p);
    }
    Ok(Trajectory { times: times.to_vec(), states })
}

/// Unitary walk `psi(t) = exp(-i t Lap) psi0`, through the Laplacian eigenbasis.
pub fn evolve_ctqw(
    g: &Graph,
    psi0: &ComplexVector,
    times: &[f64],
    tol: &Tolerances,
) -> Result<Trajectory<ComplexVector>> {
    check_times(times)?;
    let n = g.vertex_count();
    if psi0.len() != n {
        return Err(Error::DimensionMismatch { expected: n.to_string(), got: psi0.len().to_string() });
    }
    let norm = psi0.norm();
    if (norm - 1.0).abs() > tol.unit_norm {
        return Err(Error::InvalidArgument(format!("initial amplitude has norm {norm}, not 1")));
    }
    let spec = symmetric_eig(&g.laplacian())?;
    let coeffs = spec.eigenvectors.adjoint() * psi0;
    let mut states = Vec::with_capacity(times.len());
    for &t in times {
        let psi = if t == 0.0 {
            psi0.clone()
        } else {
            let phased = ComplexVector::from_iterator(
                n,
                coeffs.iter().zip(&spec.eigenvalues).map(|(a, &lam)| a * Complex64::from_polar(1.0, -lam * t)),
            );
            &spec.eigenvectors * phased
        };
        let drift = (psi.norm() - 1.0).abs();
        if drift > tol.normalization {
            return Err(Error::InvalidArgument(format!("amplitude norm drifted by {drift:e}")));
        }
        states.push(psi);
    }
    Ok(Trajectory { times: times.to_vec(), states })
}

/// Spectral projectors of a Hermitian spectrum, grouping eigenvalues that
/// lie within `degeneracy` of the first member of their group.
pub fn spectral_projectors(spec: &Spectrum, degeneracy: f64) -> Vec<(f64, ComplexMatrix)> {
    let n = spec.eigenvalues.len();
    let mut groups: Vec<(f64, ComplexMatrix)> = Vec::new();
    let mut start = 0;
    while start < n {
        let lead = spec.eigenvalues[start];
        let mut end = start + 1;
        while end < n && spec.eigenvalues[end] - lead <= degeneracy {
            end += 1;
        }
        let v = spec.eigenvectors.columns(start, end - start);
        groups.push((lead, v * v.adjoint()));
        start = end;
    }
    groups
}

/// Long-time average `P(v) = sum_lambda |<v| Pi_lambda |psi0>|^2` of the
/// unitary walk started from `psi0`.
pub fn ctqw_limiting_average_from(g: &Graph, psi0: &ComplexVector, tol: &Tolerances) -> Result<Vec<f64>> {
    let n = g.vertex_count();
    if psi0.len() != n {
        return Err(Error::DimensionMismatch { expected: n.to_string(), got: psi0.len().to_string() });
    }
    let spec = symmetric_eig(&g.laplacian())?;
    let mut dist = vec![0.0; n];
    for (_, proj) in spectral_projectors(&spec, tol.degeneracy) {
        let amp = proj * psi0;
        for (d, a) in dist.iter_mut().zip(amp.iter()) {
            *d += a.norm_sqr();
        }
    }
    Ok(dist)
}

/// Limiting average distribution of the unitary walk launched at vertex `u`.
pub fn ctqw_limiting_average(g: &Graph, u: usize, tol: &Tolerances) -> Result<Vec<f64>> {
    let n = g.vertex_count();
    if u >= n {
        return Err(Error::InvalidArgument(format!("start vertex {u} outside 0..{n}")));
    }
    ctqw_limiting_average_from(g, &basis_vector(n, u), tol)
}

fn basis_vector(n: usize, j: usize) -> ComplexVector {
    let mut v = ComplexVector::zeros(n);
    v[j] = c(1.0, 0.0);
    v
}

/// Initial condition shared by the three walks.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    /// `|j><j|`, `e_j`, `|j>`.
    Vertex(usize),
    /// `I/n` for the open walk, uniform `p` for the classical walk.
    UniformMixed,
    /// `|u><u|`, uniform `p`, `|u>` with `|u> = sum_j |j> / sqrt(n)`.
    UniformSuperposition,
    Density(DensityMatrix),
    Probability(DVector<f64>),
    Amplitude(ComplexVector),
}

impl InitialState {
    fn check_vertex(j: usize, n: usize) -> Result<()> {
        if j >= n {
            return Err(Error::InvalidArgument(format!("vertex {j} outside 0..{n}")));
        }
        Ok(())
    }

    fn mismatch(&self, process: &str) -> Error {
        Error::InvalidArgument(format!("initial state {} cannot start a {process} walk", self.kind()))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            InitialState::Vertex(_) => "vertex",
            InitialState::UniformMixed => "mixed",
            InitialState::UniformSuperposition => "uniform",
            InitialState::Density(_) => "density matrix",
            InitialState::Probability(_) => "probability vector",
            InitialState::Amplitude(_) => "amplitude vector",
        }
    }

    pub fn to_density(&self, n: usize, tol: &Tolerances) -> Result<DensityMatrix> {
        match self {
            InitialState::Vertex(j) => {
                Self::check_vertex(*j, n)?;
                Ok(DensityMatrix::vertex(n, *j))
            }
            InitialState::UniformMixed => Ok(DensityMatrix::maximally_mixed(n)),
            InitialState::UniformSuperposition => Ok(DensityMatrix::pure(&uniform_amplitude(n))),
            InitialState::Density(rho) => {
                if rho.dim() != n {
                    return Err(Error::DimensionMismatch { expected: n.to_string(), got: rho.dim().to_string() });
                }
                validate_density_with(rho.matrix(), tol, tol.psd)
            }
            InitialState::Amplitude(psi) => {
                let psi = self.to_amplitude_checked(psi, n, tol)?;
                Ok(DensityMatrix::pure(&psi))
            }
            InitialState::Probability(_) => Err(self.mismatch("ctoqw")),
        }
    }

    pub fn to_probability(&self, n: usize, tol: &Tolerances) -> Result<DVector<f64>> {
        match self {
            InitialState::Vertex(j) => {
                Self::check_vertex(*j, n)?;
                let mut p = DVector::zeros(n);
                p[*j] = 1.0;
                Ok(p)
            }
            InitialState::UniformMixed | InitialState::UniformSuperposition => {
                Ok(DVector::from_element(n, 1.0 / n as f64))
            }
            InitialState::Probability(p) => {
                check_probability(p, n, tol)?;
                Ok(p.clone())
            }
            InitialState::Density(_) | InitialState::Amplitude(_) => Err(self.mismatch("ctrw")),
        }
    }

    pub fn to_amplitude(&self, n: usize, tol: &Tolerances) -> Result<ComplexVector> {
        match self {
            InitialState::Vertex(j) => {
                Self::check_vertex(*j, n)?;
                Ok(basis_vector(n, *j))
            }
            InitialState::UniformSuperposition => Ok(uniform_amplitude(n)),
            InitialState::Amplitude(psi) => self.to_amplitude_checked(psi, n, tol),
            InitialState::UniformMixed | InitialState::Density(_) | InitialState::Probability(_) => {
                Err(self.mismatch("ctqw"))
            }
        }
    }

    fn to_amplitude_checked(&self, psi: &ComplexVector, n: usize, tol: &Tolerances) -> Result<ComplexVector> {
        if psi.len() != n {
            return Err(Error::DimensionMismatch { expected: n.to_string(), got: psi.len().to_string() });
        }
        if (psi.norm() - 1.0).abs() > tol.unit_norm {
            return Err(Error::InvalidArgument(format!("amplitude vector has norm {}", psi.norm())));
        }
        Ok(psi.clone())
    }
}

fn uniform_amplitude(n: usize) -> ComplexVector {
    ComplexVector::from_element(n, c(1.0 / (n as f64).sqrt(), 0.0))
}

/// `samples` evenly spaced times from 0 to `horizon` inclusive.
pub fn linear_times(horizon: f64, samples: usize) -> Vec<f64> {
    if samples <= 1 || horizon == 0.0 {
        return vec![horizon.max(0.0)];
    }
    let last = samples - 1;
    (0..samples).map(|i| if i == last { horizon } else { horizon * i as f64 / last as f64 }).collect()
}

/// `t = 0` followed by `count - 1` log-spaced times from `horizon/1000` to `horizon`.
pub fn log_times(horizon: f64, count: usize) -> Vec<f64> {
    if horizon <= 0.0 || count <= 1 {
        return vec![0.0];
    }
    let m = count - 1;
    let lo = (horizon * 1e-3).ln();
    let hi = horizon.ln();
    let mut out = vec![0.0];
    for i in 0..m {
        let t = if i + 1 == m || m == 1 { horizon } else { (lo + (hi - lo) * i as f64 / (m - 1) as f64).exp() };
        out.push(t);
    }
    out
}

/// Default sampling when only a horizon is given.
pub fn default_times(horizon: f64) -> Vec<f64> {
    log_times(horizon, 64)
}

/// One row of site distributions for the three walks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionRow {
    pub time: f64,
    pub ctoqw: Vec<f64>,
    pub ctrw: Vec<f64>,
    pub ctqw: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Comparison {
    pub ctoqw: Trajectory<DensityMatrix>,
    pub ctrw: Trajectory<DVector<f64>>,
    pub ctqw: Trajectory<ComplexVector>,
    /// Long-time average of the unitary walk from the same start.
    pub ctqw_limit: Vec<f64>,
    pub table: Vec<DistributionRow>,
}

/// Runs all three walks from matching initial states over `[0, horizon]`.
pub fn compare_processes(
    g: &Graph,
    init: &InitialState,
    horizon: f64,
    samples: usize,
    method: Method,
    tol: &Tolerances,
) -> Result<Comparison> {
    if horizon.is_nan() || horizon <= 0.0 {
        return Err(Error::InvalidArgument(format!("horizon must be positive, got {horizon}")));
    }
    if samples < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 samples, got {samples}")));
    }
    let n = g.vertex_count();
    let times = linear_times(horizon, samples);
    let lio = Liouvillian::from_graph(g)?;
    let rho0 = init.to_density(n, tol)?;
    let p0 = init.to_probability(n, tol)?;
    let psi0 = init.to_amplitude(n, tol)?;

    let ctoqw = evolve_ctoqw(&lio, &rho0, &times, method, tol)?;
    let ctrw = evolve_ctrw(g, &p0, &times, tol)?;
    let ctqw = evolve_ctqw(g, &psi0, &times, tol)?;
    let ctqw_limit = ctqw_limiting_average_from(g, &psi0, tol)?;

    let table = times
        .iter()
        .enumerate()
        .map(|(i, &time)| DistributionRow {
            time,
            ctoqw: ctoqw.states[i].site_distribution(),
            ctrw: ctrw.states[i].site_distribution(),
            ctqw: ctqw.states[i].site_distribution(),
        })
        .collect();
    Ok(Comparison { ctoqw, ctrw, ctqw, ctqw_limit, table })
}
