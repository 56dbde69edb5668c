//! Heat semigroup `H_t = e^{-tL}` built from a Laplacian eigendecomposition.

use ndarray::{Array1, Array2, Axis};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spectral::{Signal, SpectralDecomposition};

/// Entries at or below this value count as a positivity violation for `t > 0`.
pub const POSITIVITY_FLOOR: f64 = -1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct HeatKernel<T> {
    t: T,
    matrix: Array2<T>,
    column_norms_sq: Array1<T>,
}

/// `H_t = Φ diag(e^{-λ_j t}) Φᵀ`. `t = 0` yields the identity exactly.
pub fn heat_kernel<T: Scalar>(dec: &SpectralDecomposition<T>, t: T) -> Result<HeatKernel<T>> {
    if t.is_nan() {
        return Err(Error::NonFinite("time parameter"));
    }
    if t < T::zero() {
        return Err(Error::NegativeTime(t.as_f64()));
    }
    if dec.eigenvalues().iter().any(|x| !x.is_finite())
        || dec.eigenvectors().iter().any(|x| !x.is_finite())
    {
        return Err(Error::NonFinite("decomposition"));
    }
    let n = dec.n();
    let matrix = if t == T::zero() {
        Array2::eye(n)
    } else {
        let phi = dec.eigenvectors();
        let decay = dec.eigenvalues().mapv(|l| (-l * t).exp());
        let scaled = phi * &decay.view().insert_axis(Axis(0));
        let h = scaled.dot(&phi.t());
        // exact symmetry regardless of the product's summation order
        let half = T::of(0.5);
        Array2::from_shape_fn((n, n), |(i, j)| half * (h[[i, j]] + h[[j, i]]))
    };
    let column_norms_sq = matrix
        .columns()
        .into_iter()
        .map(|c| c.iter().map(|&x| x * x).sum())
        .collect();
    Ok(HeatKernel {
        t,
        matrix,
        column_norms_sq,
    })
}

impl<T: Scalar> HeatKernel<T> {
    pub fn t(&self) -> T {
        self.t
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Array2<T> {
        &self.matrix
    }

    pub fn column_norms_sq(&self) -> &Array1<T> {
        &self.column_norms_sq
    }

    /// `‖H_t(·, v_j)‖²`, summed directly over the column.
    pub fn column_norm_sq(&self, j: usize) -> Result<T> {
        self.column_norms_sq
            .get(j)
            .copied()
            .ok_or(Error::IndexOutOfRange {
                index: j,
                len: self.n(),
            })
    }

    /// The window `h_t(v_i) = H_t(·, v_i)`.
    pub fn window_column(&self, i: usize) -> Result<Signal<T>> {
        if i >= self.n() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.n(),
            });
        }
        Ok(Signal::from_real(&self.matrix.column(i).to_vec()))
    }

    pub fn trace(&self) -> T {
        self.matrix.diag().sum()
    }

    pub fn min_entry(&self) -> T {
        self.matrix.iter().copied().fold(T::infinity(), T::min)
    }

    /// For `t > 0` on a connected graph every entry should be positive; returns
    /// false if some entry sits at or below [`POSITIVITY_FLOOR`].
    pub fn is_positive(&self) -> bool {
        self.t == T::zero() || self.min_entry() > T::of(POSITIVITY_FLOOR)
    }

    pub fn max_row_sum_error(&self) -> T {
        self.matrix
            .rows()
            .into_iter()
            .map(|r| (r.sum() - T::one()).abs())
            .fold(T::zero(), T::max)
    }

    pub fn max_asymmetry(&self) -> T {
        (&self.matrix - &self.matrix.t())
            .iter()
            .map(|x| x.abs())
            .fold(T::zero(), T::max)
    }
}

/// `Σ_l e^{-2λ_l t} |φ_l(v_j)|²`, the spectral form of the column norm.
pub fn spectral_column_norm_sq<T: Scalar>(dec: &SpectralDecomposition<T>, t: T, j: usize) -> T {
    let row = dec.eigenvectors().row(j);
    dec.eigenvalues()
        .iter()
        .zip(row.iter())
        .map(|(&l, &phi)| (-T::of(2.0) * l * t).exp() * phi * phi)
        .sum()
}

/// `Σ_l e^{-λ_l t}`.
pub fn spectral_trace<T: Scalar>(dec: &SpectralDecomposition<T>, t: T) -> T {
    dec.eigenvalues().iter().map(|&l| (-l * t).exp()).sum()
}
