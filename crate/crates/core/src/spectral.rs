//! Laplacian eigendecomposition and the graph Fourier transform.
//!
//! The eigensolver is a cyclic Jacobi method on the dense symmetric Laplacian. It is
//! deterministic for a fixed input and sweep order; eigenvalues come out ascending
//! and each eigenvector is sign-normalized so that its first non-negligible
//! coordinate is positive.

use std::ops::Range;

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::{re, Scalar};

/// A complex-valued function on the vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal<T> {
    values: Array1<Complex<T>>,
}

impl<T: Scalar> Signal<T> {
    pub fn new(values: Array1<Complex<T>>) -> Self {
        Signal { values }
    }

    pub fn from_vec(values: Vec<Complex<T>>) -> Self {
        Signal {
            values: Array1::from(values),
        }
    }

    pub fn from_real(values: &[T]) -> Self {
        Signal {
            values: values.iter().map(|&x| re(x)).collect(),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Signal {
            values: Array1::zeros(n),
        }
    }

    pub fn delta(n: usize, i: usize) -> Self {
        let mut s = Self::zeros(n);
        s.values[i] = Complex::new(T::one(), T::zero());
        s
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &Array1<Complex<T>> {
        &self.values
    }

    pub fn into_values(self) -> Array1<Complex<T>> {
        self.values
    }

    pub fn norm_sq(&self) -> T {
        self.values.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sq().sqrt()
    }

    /// `⟨f, g⟩ = Σ f(v) conj(g(v))`.
    pub fn inner(&self, other: &Signal<T>) -> Complex<T> {
        self.values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| a * b.conj())
            .fold(Complex::new(T::zero(), T::zero()), |acc, x| acc + x)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Signal<T>) -> T {
        self.values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.len(),
            });
        }
        Ok(())
    }
}

/// `L = D - A`.
pub fn laplacian<T: Scalar>(g: &Graph) -> Array2<T> {
    let n = g.n();
    let adj = g.adjacency();
    Array2::from_shape_fn((n, n), |(i, j)| {
        if i == j {
            T::from_usize(g.degrees()[i])
        } else {
            -T::from_usize(adj[[i, j]] as usize)
        }
    })
}

/// Order in which the off-diagonal pairs `(p, q)` are visited within a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SweepOrder {
    /// `(0,1), (0,2), …, (0,n-1), (1,2), …`
    #[default]
    RowCyclic,
    /// `(0,1), (0,2), (1,2), (0,3), …`
    ColumnCyclic,
    /// Row-cyclic with rows visited from the bottom up.
    ReverseRowCyclic,
}

#[derive(Debug, Clone, Copy)]
pub struct JacobiOptions<T> {
    pub order: SweepOrder,
    pub max_sweeps: usize,
    /// Converged once every off-diagonal entry is below `tolerance · max|L_ij|`.
    pub tolerance: T,
}

impl<T: Scalar> Default for JacobiOptions<T> {
    fn default() -> Self {
        JacobiOptions {
            order: SweepOrder::RowCyclic,
            max_sweeps: 100,
            tolerance: T::jacobi_tolerance(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition<T> {
    eigenvalues: Array1<T>,
    eigenvectors: Array2<T>,
    sweeps: usize,
}

impl<T: Scalar> SpectralDecomposition<T> {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Ascending eigenvalues `λ_1 ≤ … ≤ λ_n`.
    pub fn eigenvalues(&self) -> &Array1<T> {
        &self.eigenvalues
    }

    /// Column `j` is the unit eigenvector for `eigenvalues()[j]`.
    pub fn eigenvectors(&self) -> &Array2<T> {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, j: usize) -> ArrayView1<'_, T> {
        self.eigenvectors.column(j)
    }

    /// Second-smallest eigenvalue (algebraic connectivity); `None` for a single vertex.
    pub fn fiedler_value(&self) -> Option<T> {
        self.eigenvalues.get(1).copied()
    }

    /// Number of Jacobi sweeps that were needed.
    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    /// `max |ΦᵀΦ - I|`.
    pub fn orthonormality_error(&self) -> T {
        let gram = self.eigenvectors.t().dot(&self.eigenvectors);
        max_abs_diff_identity(gram.view())
    }

    /// `max |LΦ - Φ diag(λ)|`.
    pub fn residual(&self, l: &Array2<T>) -> T {
        let lphi = l.dot(&self.eigenvectors);
        let scaled = &self.eigenvectors * &self.eigenvalues.view().insert_axis(Axis(0));
        max_abs(&(lphi - scaled))
    }

    /// `f̂ = Φ* f`.
    pub fn gft(&self, f: &Signal<T>) -> Result<Signal<T>> {
        f.check_len(self.n())?;
        Ok(Signal::new(mul_real_complex(
            self.eigenvectors.t(),
            f.values().view(),
        )))
    }

    /// `f = Φ f̂`.
    pub fn igft(&self, coeffs: &Signal<T>) -> Result<Signal<T>> {
        coeffs.check_len(self.n())?;
        Ok(Signal::new(mul_real_complex(
            self.eigenvectors.view(),
            coeffs.values().view(),
        )))
    }

    /// Group eigenvalues closer than `cluster_tol` (chained) and return the
    /// orthogonal projector onto each eigenspace.
    pub fn eigenspace_projectors(&self, cluster_tol: T) -> Vec<Eigenspace<T>> {
        let n = self.n();
        let mut out = Vec::new();
        let mut start = 0;
        for j in 1..=n {
            if j == n || self.eigenvalues[j] - self.eigenvalues[j - 1] > cluster_tol {
                let cols = self.eigenvectors.slice(ndarray::s![.., start..j]);
                let projector = cols.dot(&cols.t());
                let mean = self.eigenvalues.slice(ndarray::s![start..j]).sum()
                    / T::from_usize(j - start);
                out.push(Eigenspace {
                    eigenvalue: mean,
                    indices: start..j,
                    projector,
                });
                start = j;
            }
        }
        out
    }
}

/// One eigenvalue cluster with its orthogonal projector.
#[derive(Debug, Clone)]
pub struct Eigenspace<T> {
    pub eigenvalue: T,
    /// Positions of the cluster within the ascending ordering.
    pub indices: Range<usize>,
    pub projector: Array2<T>,
}

impl<T> Eigenspace<T> {
    pub fn multiplicity(&self) -> usize {
        self.indices.len()
    }
}

pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;

/// Decomposition of the graph Laplacian with default solver settings.
pub fn decompose_graph<T: Scalar>(g: &Graph) -> Result<SpectralDecomposition<T>> {
    decompose(&laplacian::<T>(g))
}

pub fn decompose<T: Scalar>(matrix: &Array2<T>) -> Result<SpectralDecomposition<T>> {
    decompose_with(matrix, JacobiOptions::default())
}

/// Full symmetric eigendecomposition by cyclic Jacobi rotations.
pub fn decompose_with<T: Scalar>(
    matrix: &Array2<T>,
    opts: JacobiOptions<T>,
) -> Result<SpectralDecomposition<T>> {
    let (rows, cols) = matrix.dim();
    if rows != cols {
        return Err(Error::DimensionMismatch {
            expected: rows,
            found: cols,
        });
    }
    if matrix.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("matrix"));
    }
    let n = rows;
    let scale = max_abs(matrix);
    let asym = max_abs(&(matrix - &matrix.t()));
    if asym > T::of(1e-12).max(T::epsilon() * T::of(16.0)) * scale.max(T::one()) {
        return Err(Error::NotSymmetric(asym.as_f64()));
    }

    let mut a = matrix.clone();
    let mut v = Array2::<T>::eye(n);
    let threshold = opts.tolerance * scale;
    let pairs = sweep_pairs(n, opts.order);

    let mut sweeps = 0;
    loop {
        let off = max_off_diagonal(&a);
        if off <= threshold || n < 2 {
            break;
        }
        if sweeps == opts.max_sweeps {
            return Err(Error::NoConvergence {
                sweeps,
                residual: off.as_f64(),
            });
        }
        for &(p, q) in &pairs {
            rotate(&mut a, &mut v, p, q);
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[[i, i]].partial_cmp(&a[[j, j]]).unwrap().then(i.cmp(&j)));
    let eigenvalues: Array1<T> = order.iter().map(|&i| a[[i, i]]).collect();
    let mut eigenvectors = v.select(Axis(1), &order);
    let negligible = T::epsilon().sqrt();
    for mut col in eigenvectors.columns_mut() {
        if let Some(&first) = col.iter().find(|x| x.abs() > negligible) {
            if first < T::zero() {
                col.mapv_inplace(|x| -x);
            }
        }
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
        sweeps,
    })
}

fn sweep_pairs(n: usize, order: SweepOrder) -> Vec<(usize, usize)> {
    match order {
        SweepOrder::RowCyclic => (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .collect(),
        SweepOrder::ColumnCyclic => (1..n).flat_map(|q| (0..q).map(move |p| (p, q))).collect(),
        SweepOrder::ReverseRowCyclic => (0..n)
            .rev()
            .flat_map(|p| ((p + 1)..n).rev().map(move |q| (p, q)))
            .collect(),
    }
}

/// Annihilate `a[p][q]` with a plane rotation, accumulating it into `v`.
fn rotate<T: Scalar>(a: &mut Array2<T>, v: &mut Array2<T>, p: usize, q: usize) {
    let apq = a[[p, q]];
    if apq == T::zero() {
        return;
    }
    let two = T::of(2.0);
    let theta = (a[[q, q]] - a[[p, p]]) / (two * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;
    let tau = s / (T::one() + c);

    a[[p, p]] -= t * apq;
    a[[q, q]] += t * apq;
    a[[p, q]] = T::zero();
    a[[q, p]] = T::zero();
    let n = a.nrows();
    for k in 0..n {
        if k != p && k != q {
            let g = a[[k, p]];
            let h = a[[k, q]];
            let kp = g - s * (h + g * tau);
            let kq = h + s * (g - h * tau);
            a[[k, p]] = kp;
            a[[p, k]] = kp;
            a[[k, q]] = kq;
            a[[q, k]] = kq;
        }
        let g = v[[k, p]];
        let h = v[[k, q]];
        v[[k, p]] = g - s * (h + g * tau);
        v[[k, q]] = h + s * (g - h * tau);
    }
}

fn max_off_diagonal<T: Scalar>(a: &Array2<T>) -> T {
    a.indexed_iter()
        .filter(|((i, j), _)| i != j)
        .map(|(_, x)| x.abs())
        .fold(T::zero(), T::max)
}

pub(crate) fn max_abs<T: Scalar>(a: &Array2<T>) -> T {
    a.iter().map(|x| x.abs()).fold(T::zero(), T::max)
}

pub(crate) fn max_abs_diff_identity<T: Scalar>(a: ArrayView2<'_, T>) -> T {
    a.indexed_iter()
        .map(|((i, j), &x)| if i == j { (x - T::one()).abs() } else { x.abs() })
        .fold(T::zero(), T::max)
}

pub(crate) fn mul_real_complex<T: Scalar>(
    m: ArrayView2<'_, T>,
    x: ArrayView1<'_, Complex<T>>,
) -> Array1<Complex<T>> {
    m.rows()
        .into_iter()
        .map(|row| {
            row.iter()
                .zip(x.iter())
                .fold(Complex::new(T::zero(), T::zero()), |acc, (&r, z)| acc + z * r)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_graph, path_graph, ring_graph, shrikhande_graph};
    use std::f64::consts::PI;

    fn sorted_close(got: &Array1<f64>, want: &[f64], tol: f64) {
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < tol, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn laplacian_small() {
        let l = laplacian::<f64>(&complete_graph(2).unwrap());
        assert_eq!(l, ndarray::array![[1.0, -1.0], [-1.0, 1.0]]);
        let l3 = laplacian::<f64>(&ring_graph(3).unwrap());
        for ((i, j), &x) in l3.indexed_iter() {
            assert_eq!(x, if i == j { 2.0 } else { -1.0 });
        }
        let ls = laplacian::<f64>(&shrikhande_graph());
        assert!(ls.sum_axis(Axis(1)).iter().all(|&s| s == 0.0));
    }

    #[test]
    fn k2_and_ring4_spectra() {
        // K2: characteristic polynomial x^2 - 2x
        let d = decompose_graph::<f64>(&complete_graph(2).unwrap()).unwrap();
        sorted_close(d.eigenvalues(), &[0.0, 2.0], 1e-14);
        let d = decompose_graph::<f64>(&ring_graph(4).unwrap()).unwrap();
        sorted_close(d.eigenvalues(), &[0.0, 2.0, 2.0, 4.0], 1e-12);
    }

    #[test]
    fn ring16_matches_circulant_closed_form() {
        let d = decompose_graph::<f64>(&ring_graph(16).unwrap()).unwrap();
        let mut want: Vec<f64> = (0..16)
            .map(|k| 2.0 - 2.0 * (2.0 * PI * k as f64 / 16.0).cos())
            .collect();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        sorted_close(d.eigenvalues(), &want, 1e-12);
    }

    #[test]
    fn shrikhande_spectrum() {
        let g = shrikhande_graph();
        let d = decompose_graph::<f64>(&g).unwrap();
        let mut want = vec![0.0];
        want.extend([4.0; 6]);
        want.extend([8.0; 9]);
        sorted_close(d.eigenvalues(), &want, 1e-10);
        assert!((d.eigenvalues().sum() - 96.0).abs() < 1e-9);
        let ranks: Vec<_> = d
            .eigenspace_projectors(DEFAULT_CLUSTER_TOL)
            .iter()
            .map(Eigenspace::multiplicity)
            .collect();
        assert_eq!(ranks, [1, 6, 9]);
    }

    #[test]
    fn invariants_hold() {
        for g in [path_graph(5).unwrap(), ring_graph(9).unwrap(), shrikhande_graph()] {
            let l = laplacian::<f64>(&g);
            let d = decompose(&l).unwrap();
            assert!(d.orthonormality_error() <= 1e-10);
            assert!(d.residual(&l) <= 1e-9);
            assert!(d.eigenvalues()[0].abs() <= 1e-10);
            assert!(d.fiedler_value().unwrap() > 1e-6);
            let c = 1.0 / (g.n() as f64).sqrt();
            assert!(d.eigenvector(0).iter().all(|&x| (x - c).abs() < 1e-12));
            let trace: f64 = g.degrees().iter().map(|&x| x as f64).sum();
            assert!((d.eigenvalues().sum() - trace).abs() < 1e-8);
        }
    }

    #[test]
    fn sign_convention() {
        let d = decompose_graph::<f64>(&path_graph(6).unwrap()).unwrap();
        for col in d.eigenvectors().columns() {
            let first = col.iter().find(|x| x.abs() > 1e-8).unwrap();
            assert!(*first > 0.0);
        }
    }

    #[test]
    fn projectors_ring4() {
        let d = decompose_graph::<f64>(&ring_graph(4).unwrap()).unwrap();
        let ps = d.eigenspace_projectors(1e-8);
        let ranks: Vec<_> = ps.iter().map(Eigenspace::multiplicity).collect();
        assert_eq!(ranks, [1, 2, 1]);
        let total = ps.iter().fold(Array2::<f64>::zeros((4, 4)), |acc, e| acc + &e.projector);
        assert!(max_abs_diff_identity(total.view()) < 1e-12);
        let k2 = decompose_graph::<f64>(&complete_graph(2).unwrap()).unwrap();
        assert_eq!(k2.eigenspace_projectors(1e-8).len(), 2);
    }

    #[test]
    fn gft_basics() {
        let g = ring_graph(8).unwrap();
        let d = decompose_graph::<f64>(&g).unwrap();
        for j in 0..8 {
            let phi = Signal::from_real(&d.eigenvector(j).to_vec());
            let hat = d.gft(&phi).unwrap();
            assert!(hat.max_abs_diff(&Signal::delta(8, j)) < 1e-12);
            assert!(d.igft(&Signal::delta(8, j)).unwrap().max_abs_diff(&phi) < 1e-12);
        }
        let ones = Signal::from_real(&[1.0; 8]);
        let hat = d.gft(&ones).unwrap();
        let mut want = Signal::zeros(8);
        want.values[0] = re(8f64.sqrt());
        assert!(hat.max_abs_diff(&want) < 1e-12);
        let back = d.igft(&Signal::delta(8, 0)).unwrap();
        assert!(back.max_abs_diff(&Signal::from_real(&[1.0 / 8f64.sqrt(); 8])) < 1e-12);
        assert!(matches!(d.gft(&Signal::zeros(3)), Err(Error::DimensionMismatch { .. })));
        assert!(d.igft(&Signal::zeros(9)).is_err());
    }

    #[test]
    fn rejects_bad_matrices() {
        let a = ndarray::array![[1.0, 2.0], [0.0, 1.0]];
        assert!(matches!(decompose(&a), Err(Error::NotSymmetric(_))));
        let b = ndarray::array![[f64::NAN, 0.0], [0.0, 1.0]];
        assert!(matches!(decompose(&b), Err(Error::NonFinite(_))));
        let opts = JacobiOptions {
            max_sweeps: 0,
            ..JacobiOptions::default()
        };
        let l = laplacian::<f64>(&ring_graph(5).unwrap());
        assert!(matches!(decompose_with(&l, opts), Err(Error::NoConvergence { .. })));
    }

    #[test]
    fn f32_decomposition() {
        let d = decompose_graph::<f32>(&ring_graph(4).unwrap()).unwrap();
        let want = [0.0f32, 2.0, 2.0, 4.0];
        for (g, w) in d.eigenvalues().iter().zip(want) {
            assert!((g - w).abs() < 1e-5);
        }
        assert!(d.orthonormality_error() < 1e-5);
    }

    #[test]
    fn sweep_orders_agree_on_spectrum() {
        let l = laplacian::<f64>(&shrikhande_graph());
        let a = decompose(&l).unwrap();
        for order in [SweepOrder::ColumnCyclic, SweepOrder::ReverseRowCyclic] {
            let b = decompose_with(&l, JacobiOptions { order, ..Default::default() }).unwrap();
            let diff = (a.eigenvalues() - b.eigenvalues()).mapv(f64::abs);
            assert!(diff.iter().all(|&x| x < 1e-10));
        }
    }
}
