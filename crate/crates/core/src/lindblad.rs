//! Generator of the open walk on a graph.
//!
//! The generator acts on a state `rho` as
//!
//! ```text
//! L(rho) = i[rho, H] + sum_{j,k} ( B_jk rho B_jk^dagger - 1/2 {B_jk^dagger B_jk, rho} )
//! ```
//!
//! with `H` the graph Laplacian and swap operators `B_jk = sqrt(M_jk) |j><k|`
//! for every ordered edge `(j, k)`. Under column-stacking vectorization
//! (`vec(A X B) = (B^T (x) A) vec(X)`) the generator becomes the
//! `n^2 x n^2` matrix stored in [`Liouvillian`].

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::format::{cmatrix_serde, cmatrix_vec_serde};
use crate::graph::Graph;
use crate::numerics::{
    c, expm, hermitian_violation, null_space_detail, to_complex, unvectorize, vectorize, ComplexMatrix, RankTolerance,
    I,
};

/// `coeff * |j><k|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwapOperator {
    pub j: usize,
    pub k: usize,
    pub coeff: f64,
}

impl SwapOperator {
    pub fn to_matrix(&self, n: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(n, n);
        m[(self.j, self.k)] = c(self.coeff, 0.0);
        m
    }
}

/// The swap operators of a graph, one per ordered edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LindbladSet {
    pub dim: usize,
    pub ops: Vec<SwapOperator>,
}

impl LindbladSet {
    /// Builds `B_jk = sqrt(1/deg(k)) |j><k|` for every ordered edge.
    pub fn from_graph(g: &Graph) -> Result<Self> {
        let m = g.transition_matrix()?;
        let n = g.vertex_count();
        let mut ops = Vec::with_capacity(2 * g.edge_count());
        for (a, b) in g.edges() {
            for (j, k) in [(a, b), (b, a)] {
                ops.push(SwapOperator { j, k, coeff: m[(j, k)].sqrt() });
            }
        }
        ops.sort_by_key(|op| (op.j, op.k));
        Ok(Self { dim: n, ops })
    }

    /// Hand-built set; indices must lie in `0..dim` and coefficients be positive.
    pub fn from_ops(dim: usize, ops: Vec<SwapOperator>) -> Result<Self> {
        for op in &ops {
            if op.j >= dim || op.k >= dim {
                return Err(Error::InvalidArgument(format!("operator ({}, {}) outside dimension {dim}", op.j, op.k)));
            }
            if !(op.coeff > 0.0 && op.coeff.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "operator ({}, {}) has non-positive coefficient {}",
                    op.j, op.k, op.coeff
                )));
            }
        }
        Ok(Self { dim, ops })
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn matrices(&self) -> Vec<ComplexMatrix> {
        self.ops.iter().map(|op| op.to_matrix(self.dim)).collect()
    }

    pub fn without(&self, index: usize) -> Self {
        let mut ops = self.ops.clone();
        ops.remove(index);
        Self { dim: self.dim, ops }
    }
}

/// Jump operators of a generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dissipators {
    Swap(LindbladSet),
    Dense(#[serde(with = "cmatrix_vec_serde")] Vec<ComplexMatrix>),
}

impl Dissipators {
    pub fn matrices(&self) -> Vec<ComplexMatrix> {
        match self {
            Dissipators::Swap(set) => set.matrices(),
            Dissipators::Dense(ops) => ops.clone(),
        }
    }
}

/// Matrix of the generator acting on column-stacked `vec(rho)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Liouvillian {
    pub dim: usize,
    #[serde(with = "cmatrix_serde")]
    pub matrix: ComplexMatrix,
    #[serde(with = "cmatrix_serde")]
    pub hamiltonian: ComplexMatrix,
    pub dissipators: Dissipators,
}

impl Liouvillian {
    /// Generator of the open walk on `g`: Laplacian Hamiltonian plus swap set.
    pub fn from_graph(g: &Graph) -> Result<Self> {
        let lset = LindbladSet::from_graph(g)?;
        let h = to_complex(&g.laplacian());
        Self::from_swap_set(h, lset)
    }

    pub fn from_swap_set(h: ComplexMatrix, lset: LindbladSet) -> Result<Self> {
        let n = lset.dim;
        check_hamiltonian(&h, n)?;
        let mut matrix = hamiltonian_superoperator(&h);
        // Each B = c|j><k| contributes
        //   c^2 |jj><kk|            (B rho B^dagger)
        //  -c^2/2 on row k of rho    (B^dagger B rho)
        //  -c^2/2 on column k of rho (rho B^dagger B)
        for op in &lset.ops {
            let w = op.coeff * op.coeff;
            let (j, k) = (op.j, op.k);
            matrix[(j + j * n, k + k * n)] += c(w, 0.0);
            for m in 0..n {
                matrix[(k + m * n, k + m * n)] -= c(0.5 * w, 0.0);
                matrix[(m + k * n, m + k * n)] -= c(0.5 * w, 0.0);
            }
        }
        Ok(Self { dim: n, matrix, hamiltonian: h, dissipators: Dissipators::Swap(lset) })
    }

    /// Generator with an arbitrary list of jump operators.
    pub fn from_operators(h: ComplexMatrix, ops: Vec<ComplexMatrix>) -> Result<Self> {
        let n = h.nrows();
        check_hamiltonian(&h, n)?;
        let id = ComplexMatrix::identity(n, n);
        let mut matrix = hamiltonian_superoperator(&h);
        for b in &ops {
            if b.shape() != (n, n) {
                return Err(shape_mismatch(n, b));
            }
            let bdb = b.adjoint() * b;
            matrix += b.conjugate().kronecker(b);
            matrix -= (id.kronecker(&bdb) + bdb.transpose().kronecker(&id)).scale(0.5);
        }
        Ok(Self { dim: n, matrix, hamiltonian: h, dissipators: Dissipators::Dense(ops) })
    }

    /// `unvec(matrix * vec(rho))`.
    pub fn apply_matrix(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.shape() != (self.dim, self.dim) {
            return Err(shape_mismatch(self.dim, rho));
        }
        Ok(unvectorize(&(&self.matrix * vectorize(rho)), self.dim))
    }

    /// Matrix-free application of the generator.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        match &self.dissipators {
            Dissipators::Swap(set) => apply_generator(&self.hamiltonian, set, rho),
            Dissipators::Dense(ops) => apply_generator_with(&self.hamiltonian, ops, rho),
        }
    }

    /// Max modulus of `vec(I)^dagger * matrix`; zero for a trace-preserving generator.
    pub fn trace_preservation_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for col in 0..n * n {
            let s: num_complex::Complex64 = (0..n).map(|j| self.matrix[(j + j * n, col)]).sum();
            worst = worst.max(s.norm());
        }
        worst
    }

    /// `exp(t * matrix)`.
    pub fn propagator(&self, t: f64) -> Result<ComplexMatrix> {
        expm(&self.matrix.scale(t))
    }
}

fn hamiltonian_superoperator(h: &ComplexMatrix) -> ComplexMatrix {
    // i[rho, H] = i(rho H - H rho)  ->  i (H^T (x) I - I (x) H)
    let n = h.nrows();
    let id = ComplexMatrix::identity(n, n);
    (h.transpose().kronecker(&id) - id.kronecker(h)) * I
}

fn check_hamiltonian(h: &ComplexMatrix, n: usize) -> Result<()> {
    if h.shape() != (n, n) {
        return Err(shape_mismatch(n, h));
    }
    let violation = hermitian_violation(h);
    if violation > Tolerances::default().hermitian {
        return Err(Error::NotHermitian { violation });
    }
    Ok(())
}

fn shape_mismatch(n: usize, m: &ComplexMatrix) -> Error {
    Error::DimensionMismatch { expected: format!("{n}x{n}"), got: format!("{}x{}", m.nrows(), m.ncols()) }
}

/// Applies the generator with Hamiltonian `h` and swap set `lset` to `rho`.
///
/// Each rank-one dissipator only touches row and column `k` of `rho` and the
/// diagonal entry `(j, j)`, so the cost is `O(n^3 + |ops| n)`.
pub fn apply_generator(h: &ComplexMatrix, lset: &LindbladSet, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = lset.dim;
    if h.shape() != (n, n) {
        return Err(shape_mismatch(n, h));
    }
    if rho.shape() != (n, n) {
        return Err(shape_mismatch(n, rho));
    }
    let mut out = (rho * h - h * rho) * I;
    for op in &lset.ops {
        let w = op.coeff * op.coeff;
        let (j, k) = (op.j, op.k);
        out[(j, j)] += rho[(k, k)] * w;
        for m in 0..n {
            out[(k, m)] -= rho[(k, m)] * (0.5 * w);
            out[(m, k)] -= rho[(m, k)] * (0.5 * w);
        }
    }
    Ok(out)
}

/// Applies the generator with an arbitrary list of jump operators.
pub fn apply_generator_with(h: &ComplexMatrix, ops: &[ComplexMatrix], rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = h.nrows();
    if rho.shape() != (n, n) {
        return Err(shape_mismatch(n, rho));
    }
    let mut out = (rho * h - h * rho) * I;
    for b in ops {
        if b.shape() != (n, n) {
            return Err(shape_mismatch(n, b));
        }
        let bd = b.adjoint();
        let bdb = &bd * b;
        out += b * rho * &bd - (&bdb * rho + rho * &bdb).scale(0.5);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumIdentity {
    pub holds: bool,
    /// `||sum B^dagger B - I||_max`.
    pub deviation: f64,
}

/// Checks `sum_{j,k} B_jk^dagger B_jk = I`.
pub fn check_sum_identity(lset: &LindbladSet) -> SumIdentity {
    // B^dagger B = c^2 |k><k|, so the sum is diagonal.
    let mut diag = vec![0.0; lset.dim];
    for op in &lset.ops {
        diag[op.k] += op.coeff * op.coeff;
    }
    let deviation = diag.iter().fold(0.0_f64, |acc, d| acc.max((d - 1.0).abs()));
    SumIdentity { holds: deviation <= Tolerances::default().sum_identity, deviation }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Commutant {
    pub dimension: usize,
    /// Only multiples of the identity commute with every operator.
    pub trivial: bool,
}

/// Dimension of `{X : B X = X B for every B}` for a swap set.
pub fn commutant_dimension(lset: &LindbladSet) -> Result<Commutant> {
    commutant_dimension_of(lset.dim, &lset.matrices())
}

/// Stacks `(I (x) B - B^T (x) I) vec(X) = 0` for every operator and counts
/// the null space.
pub fn commutant_dimension_of(n: usize, ops: &[ComplexMatrix]) -> Result<Commutant> {
    let n2 = n * n;
    let id = ComplexMatrix::identity(n, n);
    let mut system = ComplexMatrix::zeros(ops.len() * n2, n2);
    for (i, b) in ops.iter().enumerate() {
        if b.shape() != (n, n) {
            return Err(shape_mismatch(n, b));
        }
        let block = id.kronecker(b) - b.transpose().kronecker(&id);
        system.view_mut((i * n2, 0), (n2, n2)).copy_from(&block);
    }
    let dimension = null_space_detail(&system, RankTolerance::default())?.dim();
    Ok(Commutant { dimension, trivial: dimension == 1 })
}

/// True iff every stored `(j, k)` has its partner `(k, j)`, which makes the
/// span closed under the adjoint.
pub fn check_span_hermitian(lset: &LindbladSet) -> bool {
    lset.ops.iter().all(|op| lset.ops.iter().any(|p| p.j == op.k && p.k == op.j))
}

/// Alternative jump-operator pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Variant {
    /// `{exp(-i L), I}`.
    UnitaryPair,
    /// `{P, I - P}` with `P` projecting onto the listed vertices.
    ProjectionPair(Vec<usize>),
}

pub fn build_lindblad_variant(g: &Graph, variant: &Variant) -> Result<Vec<ComplexMatrix>> {
    let n = g.vertex_count();
    let id = ComplexMatrix::identity(n, n);
    match variant {
        Variant::UnitaryPair => {
            let u = expm(&(to_complex(&g.laplacian()) * (-I)))?;
            Ok(vec![u, id])
        }
        Variant::ProjectionPair(subset) => {
            let mut p = DMatrix::<f64>::zeros(n, n);
            for &j in subset {
                if j >= n {
                    return Err(Error::InvalidArgument(format!("vertex {j} outside 0..{n}")));
                }
                p[(j, j)] = 1.0;
            }
            let rank = p.diagonal().sum() as usize;
            if rank == 0 || rank == n {
                return Err(Error::InvalidArgument("projection subset must be nonempty and proper".into()));
            }
            let p = to_complex(&p);
            let q = &id - &p;
            Ok(vec![p, q])
        }
    }
}

/// Choi matrix `sum_{ij} |i><j| (x) Phi(|i><j|)` of a superoperator given as
/// an `n^2 x n^2` matrix on column-stacked vectors.
pub fn choi_matrix(superop: &ComplexMatrix, n: usize) -> ComplexMatrix {
    assert_eq!(superop.shape(), (n * n, n * n), "superoperator must be n^2 x n^2");
    ComplexMatrix::from_fn(n * n, n * n, |row, col| {
        let (i, a) = (row / n, row % n);
        let (j, b) = (col / n, col % n);
        superop[(a + b * n, i + j * n)]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Family;
    use crate::numerics::max_norm;

    fn path3() -> Graph {
        Graph::generate(Family::Path, 3).unwrap()
    }

    fn op(set: &LindbladSet, j: usize, k: usize) -> f64 {
        set.ops.iter().find(|o| o.j == j && o.k == k).map(|o| o.coeff).unwrap_or(0.0)
    }

    #[test]
    fn path3_swap_operators() {
        let set = LindbladSet::from_graph(&path3()).unwrap();
        assert_eq!(set.len(), 4);
        let h = 2f64.sqrt() / 2.0;
        assert!((op(&set, 0, 1) - h).abs() < 1e-15);
        assert!((op(&set, 2, 1) - h).abs() < 1e-15);
        assert_eq!(op(&set, 1, 0), 1.0);
        assert_eq!(op(&set, 1, 2), 1.0);
        let b01 = set.ops.iter().find(|o| o.j == 0 && o.k == 1).unwrap().to_matrix(3);
        assert_eq!(b01.iter().filter(|z| z.norm() > 0.0).count(), 1);
        assert_eq!(b01[(0, 1)].re, h);
    }

    #[test]
    fn cycle_and_k2_swap_operators() {
        let set = LindbladSet::from_graph(&Graph::generate(Family::Cycle, 3).unwrap()).unwrap();
        assert_eq!(set.len(), 6);
        assert!(set.ops.iter().all(|o| (o.coeff - 0.5f64.sqrt()).abs() < 1e-15));
        let set = LindbladSet::from_graph(&Graph::generate(Family::Path, 2).unwrap()).unwrap();
        assert_eq!(set.ops, vec![SwapOperator { j: 0, k: 1, coeff: 1.0 }, SwapOperator { j: 1, k: 0, coeff: 1.0 }]);
    }

    #[test]
    fn isolated_vertex_rejected() {
        let g = Graph::new(3, [(0, 1)]).unwrap();
        assert!(matches!(LindbladSet::from_graph(&g), Err(Error::IsolatedVertex(2))));
        assert!(Liouvillian::from_graph(&g).is_err());
    }

    #[test]
    fn generator_on_identity_and_mixed() {
        let g = path3();
        let set = LindbladSet::from_graph(&g).unwrap();
        let h = to_complex(&g.laplacian());
        let out = apply_generator(&h, &set, &ComplexMatrix::identity(3, 3)).unwrap();
        // diag(row sums of M) - I = diag(-1/2, 1, -1/2)
        let want = [-0.5, 1.0, -0.5];
        for r in 0..3 {
            for col in 0..3 {
                let w = if r == col { want[r] } else { 0.0 };
                assert!((out[(r, col)] - c(w, 0.0)).norm() < 1e-15);
            }
        }
        let c3 = Graph::generate(Family::Cycle, 3).unwrap();
        let lio = Liouvillian::from_graph(&c3).unwrap();
        let out = lio.apply(&ComplexMatrix::identity(3, 3).scale(1.0 / 3.0)).unwrap();
        assert!(max_norm(&out) < 1e-15);
    }

    #[test]
    fn generator_dimension_mismatch() {
        let set = LindbladSet::from_graph(&path3()).unwrap();
        let h = to_complex(&path3().laplacian());
        assert!(matches!(apply_generator(&h, &set, &ComplexMatrix::zeros(2, 2)), Err(Error::DimensionMismatch { .. })));
        assert!(apply_generator(&ComplexMatrix::zeros(2, 2), &set, &ComplexMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn k2_liouvillian_kernel_contains_mixed_state() {
        let lio = Liouvillian::from_graph(&Graph::generate(Family::Path, 2).unwrap()).unwrap();
        assert_eq!(lio.matrix.shape(), (4, 4));
        let v = vectorize(&ComplexMatrix::identity(2, 2).scale(0.5));
        assert!((&lio.matrix * v).norm() < 1e-15);
        assert!(lio.trace_preservation_defect() < 1e-15);
    }

    #[test]
    fn structured_and_kronecker_builders_agree() {
        for g in [path3(), Graph::generate(Family::Star, 3).unwrap(), Graph::generate(Family::Complete, 4).unwrap()] {
            let a = Liouvillian::from_graph(&g).unwrap();
            let set = LindbladSet::from_graph(&g).unwrap();
            let b = Liouvillian::from_operators(to_complex(&g.laplacian()), set.matrices()).unwrap();
            assert!(max_norm(&(&a.matrix - &b.matrix)) < 1e-15);
        }
    }

    #[test]
    fn sum_identity_examples() {
        for g in [path3(), Graph::generate(Family::Star, 3).unwrap()] {
            let s = check_sum_identity(&LindbladSet::from_graph(&g).unwrap());
            assert!(s.holds);
            assert!(s.deviation < 1e-15);
        }
        let set = LindbladSet::from_graph(&path3()).unwrap();
        // removing B_01 (coefficient^2 = M_01 = 1/2)
        let idx = set.ops.iter().position(|o| o.j == 0 && o.k == 1).unwrap();
        let s = check_sum_identity(&set.without(idx));
        assert!(!s.holds);
        assert!((s.deviation - 0.5).abs() < 1e-15);
    }

    #[test]
    fn commutant_examples() {
        let set = LindbladSet::from_graph(&path3()).unwrap();
        assert_eq!(commutant_dimension(&set).unwrap(), Commutant { dimension: 1, trivial: true });
        let two = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        let set = LindbladSet::from_graph(&two).unwrap();
        assert_eq!(commutant_dimension(&set).unwrap().dimension, 2);
        let empty = LindbladSet::from_ops(2, vec![]).unwrap();
        assert_eq!(commutant_dimension(&empty).unwrap(), Commutant { dimension: 4, trivial: false });
    }

    #[test]
    fn span_hermitian_examples() {
        assert!(check_span_hermitian(&LindbladSet::from_graph(&path3()).unwrap()));
        let lone = LindbladSet::from_ops(2, vec![SwapOperator { j: 0, k: 1, coeff: 1.0 }]).unwrap();
        assert!(!check_span_hermitian(&lone));
        assert!(check_span_hermitian(&LindbladSet::from_ops(3, vec![]).unwrap()));
    }

    #[test]
    fn from_ops_validates() {
        assert!(LindbladSet::from_ops(2, vec![SwapOperator { j: 0, k: 2, coeff: 1.0 }]).is_err());
        assert!(LindbladSet::from_ops(2, vec![SwapOperator { j: 0, k: 1, coeff: 0.0 }]).is_err());
    }

    #[test]
    fn variants() {
        let g = path3();
        let ops = build_lindblad_variant(&g, &Variant::UnitaryPair).unwrap();
        let u = expm(&(to_complex(&g.laplacian()) * (-I))).unwrap();
        assert!(max_norm(&(&ops[0] - &u)) < 1e-15);
        assert_eq!(ops[1], ComplexMatrix::identity(3, 3));
        let ops = build_lindblad_variant(&g, &Variant::ProjectionPair(vec![0])).unwrap();
        assert_eq!(ops[0][(0, 0)], c(1.0, 0.0));
        assert_eq!(ops[0].iter().filter(|z| z.norm() > 0.0).count(), 1);
        assert_eq!(&ops[0] + &ops[1], ComplexMatrix::identity(3, 3));
        assert!(build_lindblad_variant(&g, &Variant::ProjectionPair(vec![0, 1, 2])).is_err());
        assert!(build_lindblad_variant(&g, &Variant::ProjectionPair(vec![])).is_err());
        assert!(build_lindblad_variant(&g, &Variant::ProjectionPair(vec![5])).is_err());
        // variant generators are still trace preserving
        let lio = Liouvillian::from_operators(to_complex(&g.laplacian()), ops).unwrap();
        assert!(lio.trace_preservation_defect() < 1e-14);
    }

    #[test]
    fn choi_of_identity_channel_is_maximally_entangled() {
        let n = 2;
        let choi = choi_matrix(&ComplexMatrix::identity(4, 4), n);
        // |Omega><Omega| with |Omega> = |00> + |11>
        let mut want = ComplexMatrix::zeros(4, 4);
        for (r, col) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            want[(r, col)] = c(1.0, 0.0);
        }
        assert_eq!(choi, want);
    }
}
