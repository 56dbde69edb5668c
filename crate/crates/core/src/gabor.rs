//! Graph short-time Fourier transform with heat-kernel windows.
//!
//! Atoms are `ψ_ij(t) = D_i(t) φ_j` with `D_i(t) = diag(H_t(·, v_i))`; the transform of
//! `f` at `(v_i, λ_j)` is `⟨f, ψ_ij(t)⟩`. The frame operator of this system is diagonal
//! with entries `γ_j(t) = ‖H_t(·, v_j)‖²`, which is what the reports below measure.

use ndarray::{Array1, Array2, Axis};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{detect_srg_parameters, Graph, SrgParameters};
use crate::heat::{heat_kernel, HeatKernel};
use crate::scalar::Scalar;
use crate::spectral::{Signal, SpectralDecomposition, DEFAULT_CLUSTER_TOL};

/// Relative gap below which a frame is reported tight.
pub const TIGHT_TOL: f64 = 1e-9;

/// Largest graph for which the O(n⁴) atom-Gram oracle is materialized.
pub const GRAM_ORACLE_MAX_N: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct GaborAtom<T> {
    pub vertex: usize,
    pub eigen_index: usize,
    pub vector: Signal<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GstftCoefficients<T> {
    t: T,
    matrix: Array2<Complex<T>>,
}

impl<T: Scalar> GstftCoefficients<T> {
    pub fn new(t: T, matrix: Array2<Complex<T>>) -> Result<Self> {
        let (r, c) = matrix.dim();
        if r != c {
            return Err(Error::DimensionMismatch {
                expected: r,
                found: c,
            });
        }
        Ok(GstftCoefficients { t, matrix })
    }

    pub fn t(&self) -> T {
        self.t
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    /// Entry `(i, j)` is `(V_t f)(v_i, λ_j)`.
    pub fn matrix(&self) -> &Array2<Complex<T>> {
        &self.matrix
    }

    /// `Σ_ij |(V_t f)(v_i, λ_j)|²`.
    pub fn energy(&self) -> T {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }
}

fn check_pair<T: Scalar>(dec: &SpectralDecomposition<T>, hk: &HeatKernel<T>) -> Result<()> {
    if dec.n() != hk.n() {
        return Err(Error::DimensionMismatch {
            expected: dec.n(),
            found: hk.n(),
        });
    }
    Ok(())
}

fn same_time<T: Scalar>(a: T, b: T) -> bool {
    (a - b).abs() <= T::of(1e-12) * T::one().max(a.abs())
}

/// `V_t f = H_t · diag(f) · Φ̄`.
pub fn gstft<T: Scalar>(
    dec: &SpectralDecomposition<T>,
    hk: &HeatKernel<T>,
    f: &Signal<T>,
) -> Result<GstftCoefficients<T>> {
    check_pair(dec, hk)?;
    f.check_len(dec.n())?;
    let phi = dec.eigenvectors();
    let re = f.values().mapv(|z| z.re).insert_axis(Axis(1));
    let im = f.values().mapv(|z| z.im).insert_axis(Axis(1));
    let h = hk.matrix();
    let vr = h.dot(&(phi * &re));
    let vi = h.dot(&(phi * &im));
    let matrix = Array2::from_shape_fn(vr.dim(), |ix| Complex::new(vr[ix], vi[ix]));
    Ok(GstftCoefficients { t: hk.t(), matrix })
}

/// All `n²` atoms in row-major `(i, j)` order.
pub fn atoms<T: Scalar>(
    dec: &SpectralDecomposition<T>,
    hk: &HeatKernel<T>,
) -> Result<Vec<GaborAtom<T>>> {
    check_pair(dec, hk)?;
    let n = dec.n();
    let h = hk.matrix();
    let phi = dec.eigenvectors();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let window = h.column(i);
        for j in 0..n {
            let v: Vec<T> = window.iter().zip(phi.column(j)).map(|(&w, &p)| w * p).collect();
            out.push(GaborAtom {
                vertex: i,
                eigen_index: j,
                vector: Signal::from_real(&v),
            });
        }
    }
    Ok(out)
}

/// Frame operator computed in closed form and, for small graphs, from the atoms.
#[derive(Debug, Clone)]
pub struct FrameOperator<T> {
    /// `S(t) = Σ_i D_i(t)²`.
    pub closed_form: Array2<T>,
    /// `A(t)* A(t) = Σ_ij ψ_ij ψ_ij*`, present when `n ≤ GRAM_ORACLE_MAX_N`.
    pub gram: Option<Array2<T>>,
}

impl<T: Scalar> FrameOperator<T> {
    /// Largest off-diagonal magnitude of the atom Gram composition.
    pub fn gram_off_diagonal(&self) -> Option<T> {
        self.gram.as_ref().map(|g| {
            g.indexed_iter()
                .filter(|((i, j), _)| i != j)
                .map(|(_, x)| x.abs())
                .fold(T::zero(), T::max)
        })
    }

    /// Largest diagonal disagreement between the two routes.
    pub fn diagonal_discrepancy(&self) -> Option<T> {
        self.gram.as_ref().map(|g| {
            g.diag()
                .iter()
                .zip(self.closed_form.diag())
                .map(|(a, b)| (*a - *b).abs())
                .fold(T::zero(), T::max)
        })
    }
}

pub fn frame_operator<T: Scalar>(
    dec: &SpectralDecomposition<T>,
    hk: &HeatKernel<T>,
) -> Result<FrameOperator<T>> {
    check_pair(dec, hk)?;
    let n = dec.n();
    let h = hk.matrix();
    let mut closed_form = Array2::zeros((n, n));
    for i in 0..n {
        for (k, &w) in h.column(i).iter().enumerate() {
            closed_form[[k, k]] += w * w;
        }
    }
    let gram = (n <= GRAM_ORACLE_MAX_N).then(|| atom_gram(dec, hk));
    Ok(FrameOperator { closed_form, gram })
}

/// Materializes the `n² × n` analysis matrix and returns its Gram matrix.
fn atom_gram<T: Scalar>(dec: &SpectralDecomposition<T>, hk: &HeatKernel<T>) -> Array2<T> {
    let n = dec.n();
    let h = hk.matrix();
    let phi = dec.eigenvectors();
    let analysis = Array2::from_shape_fn((n * n, n), |(row, k)| {
        let (i, j) = (row / n, row % n);
        h[[k, i]] * phi[[k, j]]
    });
    analysis.t().dot(&analysis)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameReport<T> {
    pub t: T,
    /// Frame-operator eigenvalues `γ_j(t)` from the spectral sum.
    pub gammas: Array1<T>,
    pub bound_a: T,
    pub bound_b: T,
    pub gap: T,
    pub ratio: T,
    pub tight: bool,
}

impl<T: Scalar> FrameReport<T> {
    fn from_gammas(t: T, gammas: Array1<T>) -> Self {
        let a = gammas.iter().copied().fold(T::infinity(), T::min);
        let b = gammas.iter().copied().fold(T::neg_infinity(), T::max);
        let gap = b - a;
        FrameReport {
            t,
            bound_a: a,
            bound_b: b,
            gap,
            ratio: b / a,
            tight: gap <= T::of(TIGHT_TOL) * T::one().max(b),
            gammas,
        }
    }
}

/// `γ_j(t) = Σ_l e^{-2λ_l t} |φ_l(v_j)|²` for every vertex.
pub fn frame_gammas<T: Scalar>(dec: &SpectralDecomposition<T>, t: T) -> Array1<T> {
    let weights = dec.eigenvalues().mapv(|l| (-T::of(2.0) * l * t).exp());
    let sq = dec.eigenvectors().mapv(|x| x * x);
    sq.dot(&weights)
}

/// Frame report from the spectral closed form alone.
pub fn frame_report_at<T: Scalar>(dec: &SpectralDecomposition<T>, t: T) -> Result<FrameReport<T>> {
    if t.is_nan() {
        return Err(Error::NonFinite("time parameter"));
    }
    if t < T::zero() {
        return Err(Error::NegativeTime(t.as_f64()));
    }
    Ok(FrameReport::from_gammas(t, frame_gammas(dec, t)))
}

pub fn frame_report<T: Scalar>(
    dec: &SpectralDecomposition<T>,
    hk: &HeatKernel<T>,
) -> Result<FrameReport<T>> {
    check_pair(dec, hk)?;
    frame_report_at(dec, hk.t())
}

/// Largest `|γ_j(t) - ‖H_t(·, v_j)‖²|` between the spectral sum and the direct column norm.
pub fn gamma_cross_check<T: Scalar>(report: &FrameReport<T>, hk: &HeatKernel<T>) -> T {
    report
        .gammas
        .iter()
        .zip(hk.column_norms_sq())
        .map(|(a, b)| (*a - *b).abs())
        .fold(T::zero(), T::max)
}

/// `(W_t F)(v_i) = ‖H_t(·, v_i)‖⁻² Σ_j φ_j(v_i) Σ_k F(v_k, λ_j) H_t(v_k, v_i)`.
pub fn inverse_gstft<T: Scalar>(
    dec: &SpectralDecomposition<T>,
    hk: &HeatKernel<T>,
    coeffs: &GstftCoefficients<T>,
) -> Result<Signal<T>> {
    check_pair(dec, hk)?;
    if coeffs.n() != dec.n() {
        return Err(Error::DimensionMismatch {
            expected: dec.n(),
            found: coeffs.n(),
        });
    }
    if !same_time(coeffs.t(), hk.t()) {
        return Err(Error::TimeMismatch {
            expected: hk.t().as_f64(),
            found: coeffs.t().as_f64(),
        });
    }
    let f = coeffs.matrix();
    let ht = hk.matrix().t();
    let gr = ht.dot(&f.mapv(|z| z.re));
    let gi = ht.dot(&f.mapv(|z| z.im));
    let phi = dec.eigenvectors();
    let values = (0..dec.n())
        .map(|i| {
            let (mut sr, mut si) = (T::zero(), T::zero());
            for j in 0..dec.n() {
                sr += phi[[i, j]] * gr[[i, j]];
                si += phi[[i, j]] * gi[[i, j]];
            }
            let norm = hk.column_norms_sq()[i];
            Complex::new(sr / norm, si / norm)
        })
        .collect();
    Ok(Signal::new(values))
}

/// Seeded random complex signal with entries uniform in the unit square.
pub fn random_signal<T: Scalar>(n: usize, rng: &mut impl Rng) -> Signal<T> {
    Signal::new(
        (0..n)
            .map(|_| {
                Complex::new(
                    T::of(rng.gen_range(-1.0..1.0)),
                    T::of(rng.gen_range(-1.0..1.0)),
                )
            })
            .collect(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameRatios<T> {
    pub min_ratio: T,
    pub max_ratio: T,
}

/// Empirical `Σ_ij |⟨f, ψ_ij⟩|² / ‖f‖²` over seeded random signals.
pub fn frame_inequality_check<T: Scalar>(
    dec: &SpectralDecomposition<T>,
    hk: &HeatKernel<T>,
    trials: usize,
    seed: u64,
) -> Result<FrameRatios<T>> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_ratio = T::infinity();
    let mut max_ratio = T::neg_infinity();
    for _ in 0..trials {
        let f = random_signal::<T>(dec.n(), &mut rng);
        let ratio = gstft(dec, hk, &f)?.energy() / f.norm_sq();
        min_ratio = min_ratio.min(ratio);
        max_ratio = max_ratio.max(ratio);
    }
    Ok(FrameRatios {
        min_ratio,
        max_ratio,
    })
}

/// Frame reports over a time grid together with the decay data for the gap.
#[derive(Debug, Clone)]
pub struct TightnessSweep<T> {
    pub reports: Vec<FrameReport<T>>,
    /// `ln(gap(t))` per grid point; `-inf` where the gap is exactly zero.
    pub log_gaps: Vec<T>,
    pub fiedler_value: T,
}

impl<T: Scalar> TightnessSweep<T> {
    pub fn times(&self) -> Vec<T> {
        self.reports.iter().map(|r| r.t).collect()
    }

    pub fn gaps(&self) -> Vec<T> {
        self.reports.iter().map(|r| r.gap).collect()
    }

    /// Least-squares slope of `ln gap` against `t` over points with `gap > floor`.
    /// Compare with `-2 λ₂`.
    pub fn fitted_log_gap_slope(&self, floor: T) -> Option<T> {
        let pts: Vec<(T, T)> = self
            .reports
            .iter()
            .zip(&self.log_gaps)
            .filter(|(r, _)| r.gap > floor)
            .map(|(r, &lg)| (r.t, lg))
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let m = T::from_usize(pts.len());
        let mt = pts.iter().map(|p| p.0).sum::<T>() / m;
        let my = pts.iter().map(|p| p.1).sum::<T>() / m;
        let sxy: T = pts.iter().map(|&(t, y)| (t - mt) * (y - my)).sum();
        let sxx: T = pts.iter().map(|&(t, _)| (t - mt) * (t - mt)).sum();
        (sxx > T::zero()).then(|| sxy / sxx)
    }

    /// First grid time at which the gap drops below `threshold`.
    pub fn first_crossing(&self, threshold: T) -> Option<T> {
        self.reports.iter().find(|r| r.gap < threshold).map(|r| r.t)
    }
}

pub fn tightness_sweep<T: Scalar>(
    dec: &SpectralDecomposition<T>,
    t_grid: &[T],
) -> Result<TightnessSweep<T>> {
    validate_grid(t_grid)?;
    let reports = t_grid
        .iter()
        .map(|&t| frame_report_at(dec, t))
        .collect::<Result<Vec<_>>>()?;
    let log_gaps = reports.iter().map(|r| r.gap.ln()).collect();
    Ok(TightnessSweep {
        reports,
        log_gaps,
        fiedler_value: dec.fiedler_value().unwrap_or(T::zero()),
    })
}

pub fn validate_grid<T: Scalar>(t_grid: &[T]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(Error::InvalidParameter("time grid is empty".into()));
    }
    if t_grid.iter().any(|t| !t.is_finite() || *t < T::zero()) {
        return Err(Error::InvalidParameter(
            "time grid must be finite and nonnegative".into(),
        ));
    }
    if t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("time grid must be ascending".into()));
    }
    Ok(())
}

/// Outcome of comparing the GSTFT with the windowed graph Fourier transform built
/// from translation and modulation with spectral window `ĝ(λ) = C e^{-τλ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShumanComparison<T> {
    /// Least-squares `κ` with `S f ≈ κ V_τ f`.
    pub kappa: Complex<T>,
    /// `N · C`, the factor predicted by comparing the two definitions.
    pub expected_kappa: T,
    /// `max_ij |S f - κ V_τ f| / max(1, max_ij |S f|)`.
    pub max_deviation: T,
}

pub fn shuman_crosscheck<T: Scalar>(
    dec: &SpectralDecomposition<T>,
    f: &Signal<T>,
    tau: T,
) -> Result<ShumanComparison<T>> {
    if tau.is_nan() || tau <= T::zero() {
        return Err(Error::InvalidParameter(format!(
            "tau must be positive, got {}",
            tau.as_f64()
        )));
    }
    f.check_len(dec.n())?;
    if f.values().iter().any(|z| z.im != T::zero()) {
        return Err(Error::InvalidParameter("signal must be real".into()));
    }
    let n = dec.n();
    let phi = dec.eigenvectors();
    let lambdas = dec.eigenvalues();

    // ‖g‖² = Σ |ĝ(λ_l)|² by Parseval
    let c = T::one()
        / lambdas
            .iter()
            .map(|&l| (-T::of(2.0) * tau * l).exp())
            .sum::<T>()
            .sqrt();
    let ghat: Vec<T> = lambdas.iter().map(|&l| c * (-tau * l).exp()).collect();
    let nn = T::from_usize(n);

    let mut translated = Array2::<T>::zeros((n, n));
    for i in 0..n {
        for k in 0..n {
            translated[[i, k]] = (0..n).map(|l| ghat[l] * phi[[i, l]] * phi[[k, l]]).sum();
        }
    }
    let fr: Vec<T> = f.values().iter().map(|z| z.re).collect();
    let shuman = Array2::from_shape_fn((n, n), |(i, j)| {
        nn * (0..n)
            .map(|k| fr[k] * phi[[k, j]] * translated[[i, k]])
            .sum::<T>()
    });

    let hk = heat_kernel(dec, tau)?;
    let v = gstft(dec, &hk, f)?;
    let vm = v.matrix();
    let denom: T = vm.iter().map(|z| z.norm_sqr()).sum();
    let expected_kappa = nn * c;
    let kappa = if denom > T::zero() {
        vm.iter()
            .zip(shuman.iter())
            .fold(Complex::new(T::zero(), T::zero()), |acc, (z, &s)| {
                acc + z.conj() * s
            })
            / denom
    } else {
        Complex::new(expected_kappa, T::zero())
    };
    let scale = shuman.iter().map(|x| x.abs()).fold(T::one(), T::max);
    let max_deviation = vm
        .iter()
        .zip(shuman.iter())
        .map(|(z, &s)| (Complex::new(s, T::zero()) - kappa * z).norm())
        .fold(T::zero(), T::max)
        / scale;
    Ok(ShumanComparison {
        kappa,
        expected_kappa,
        max_deviation,
    })
}

/// `max |P H_t - H_t P|` for the permutation matrix sending `e_v` to `e_{perm[v]}`.
pub fn permutation_commutator<T: Scalar>(hk: &HeatKernel<T>, perm: &[usize]) -> Result<T> {
    let n = hk.n();
    if perm.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: perm.len(),
        });
    }
    let mut inverse = vec![usize::MAX; n];
    for (v, &p) in perm.iter().enumerate() {
        if p >= n || inverse[p] != usize::MAX {
            return Err(Error::InvalidParameter("not a permutation".into()));
        }
        inverse[p] = v;
    }
    let h = hk.matrix();
    let mut worst = T::zero();
    for a in 0..n {
        for b in 0..n {
            // (PH)[a,b] = H[perm⁻¹(a), b], (HP)[a,b] = H[a, perm(b)]
            worst = worst.max((h[[inverse[a], b]] - h[[a, perm[b]]]).abs());
        }
    }
    Ok(worst)
}

/// `max_j ‖H_t(·, perm(j)) - P H_t(·, j)‖_∞`.
pub fn column_permutation_deviation<T: Scalar>(hk: &HeatKernel<T>, perm: &[usize]) -> Result<T> {
    let n = hk.n();
    if perm.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: perm.len(),
        });
    }
    let h = hk.matrix();
    let mut worst = T::zero();
    for j in 0..n {
        for v in 0..n {
            worst = worst.max((h[[perm[v], perm[j]]] - h[[v, j]]).abs());
        }
    }
    Ok(worst)
}

/// Numerical certificate that a strongly regular graph has a tight frame: the
/// partial eigenvector sums over the middle eigenspace are vertex-independent and
/// match their closed form.
#[derive(Debug, Clone)]
pub struct SrgCertificate<T> {
    pub params: SrgParameters,
    /// Distinct nonzero Laplacian eigenvalues from the decomposition.
    pub lambda2: T,
    pub lambda3: T,
    pub multiplicity2: usize,
    /// `Σ_{k in λ₂-eigenspace} |φ_k(v_i)|²` for each vertex.
    pub partial_sums: Array1<T>,
    /// `((n-1)/n · λ₃² - (d² + d)) / (λ₃² - λ₂²)`.
    pub closed_form: T,
    /// `‖L e_i‖² = d² + d` for every vertex, in integer arithmetic.
    pub laplacian_norms_exact: bool,
}

impl<T: Scalar> SrgCertificate<T> {
    pub fn spread(&self) -> T {
        let max = self.partial_sums.iter().copied().fold(T::neg_infinity(), T::max);
        let min = self.partial_sums.iter().copied().fold(T::infinity(), T::min);
        max - min
    }

    pub fn closed_form_error(&self) -> T {
        self.partial_sums
            .iter()
            .map(|&s| (s - self.closed_form).abs())
            .fold(T::zero(), T::max)
    }

    /// Largest disagreement between the numerical λ₂, λ₃ and those implied by `(n,k,a,c)`.
    pub fn eigenvalue_error(&self) -> T {
        let (l2, l3) = self.params.laplacian_eigenvalues();
        (self.lambda2 - T::of(l2)).abs().max((self.lambda3 - T::of(l3)).abs())
    }
}

/// `((n-1)/n · λ₃² - (d² + d)) / (λ₃² - λ₂²)`.
pub fn srg_partial_sum_closed_form<T: Scalar>(n: usize, d: usize, lambda2: T, lambda3: T) -> T {
    let nn = T::from_usize(n);
    let dd = T::from_usize(d);
    let l2 = lambda2 * lambda2;
    let l3 = lambda3 * lambda3;
    ((nn - T::one()) / nn * l3 - (dd * dd + dd)) / (l3 - l2)
}

pub fn srg_certificate<T: Scalar>(
    g: &Graph,
    dec: &SpectralDecomposition<T>,
) -> Result<SrgCertificate<T>> {
    let params = detect_srg_parameters(g)?;
    if dec.n() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            found: dec.n(),
        });
    }
    let spaces = dec.eigenspace_projectors(T::of(DEFAULT_CLUSTER_TOL));
    if spaces.len() != 3 {
        return Err(Error::InvalidParameter(format!(
            "expected 3 distinct Laplacian eigenvalues, found {}",
            spaces.len()
        )));
    }
    let middle = &spaces[1];
    let partial_sums = middle.projector.diag().to_owned();
    let d = params.k;
    let laplacian_norms_exact =
        (0..g.n()).all(|i| g.laplacian_column_norm_sq(i) == (d * d + d) as u64);
    Ok(SrgCertificate {
        params,
        lambda2: middle.eigenvalue,
        lambda3: spaces[2].eigenvalue,
        multiplicity2: middle.multiplicity(),
        closed_form: srg_partial_sum_closed_form(
            g.n(),
            d,
            middle.eigenvalue,
            spaces[2].eigenvalue,
        ),
        partial_sums,
        laplacian_norms_exact,
    })
}
