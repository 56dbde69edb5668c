//! Discrete Fourier transform, cyclic time-frequency shifts and the full discrete
//! Gabor system on `C^N`, the Euclidean counterpart of the graph transforms.

use ndarray::Array2;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{re, Scalar};
use crate::spectral::Signal;

/// `ω^m = e^{2πi m / N}` for `m = 0..N`.
fn twiddles<T: Scalar>(n: usize) -> Vec<Complex<T>> {
    (0..n)
        .map(|m| {
            let angle = T::TAU() * T::from_usize(m) / T::from_usize(n);
            Complex::new(angle.cos(), angle.sin())
        })
        .collect()
}

fn nonempty(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("signal length must be nonzero".into()));
    }
    Ok(())
}

/// Unitary Fourier matrix `W_N = (N^{-1/2} ω^{-rs})`.
#[derive(Debug, Clone, PartialEq)]
pub struct DftMatrix<T> {
    matrix: Array2<Complex<T>>,
}

impl<T: Scalar> DftMatrix<T> {
    pub fn new(n: usize) -> Result<Self> {
        nonempty(n)?;
        let w = twiddles::<T>(n);
        let scale = T::one() / T::from_usize(n).sqrt();
        let matrix = Array2::from_shape_fn((n, n), |(r, s)| w[(r * s) % n].conj() * scale);
        Ok(DftMatrix { matrix })
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Array2<Complex<T>> {
        &self.matrix
    }

    /// `max |W W* - I|`.
    pub fn unitarity_error(&self) -> T {
        let prod = self.matrix.dot(&self.matrix.t().mapv(|z| z.conj()));
        prod.indexed_iter()
            .map(|((i, j), z)| {
                if i == j {
                    (z - re(T::one())).norm()
                } else {
                    z.norm()
                }
            })
            .fold(T::zero(), T::max)
    }

    pub fn apply(&self, f: &Signal<T>) -> Result<Signal<T>> {
        f.check_len(self.n())?;
        Ok(Signal::new(self.matrix.dot(f.values())))
    }

    pub fn apply_inverse(&self, fhat: &Signal<T>) -> Result<Signal<T>> {
        fhat.check_len(self.n())?;
        Ok(Signal::new(self.matrix.t().mapv(|z| z.conj()).dot(fhat.values())))
    }
}

/// `f̂(m) = N^{-1/2} Σ_n f(n) e^{-2πimn/N}`.
pub fn dft<T: Scalar>(f: &Signal<T>) -> Result<Signal<T>> {
    DftMatrix::new(f.len())?.apply(f)
}

pub fn idft<T: Scalar>(fhat: &Signal<T>) -> Result<Signal<T>> {
    DftMatrix::new(fhat.len())?.apply_inverse(fhat)
}

fn check_index(i: usize, n: usize) -> Result<()> {
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, len: n });
    }
    Ok(())
}

/// `T_k f(n) = f(n - k)` (cyclic).
pub fn translate<T: Scalar>(f: &Signal<T>, k: usize) -> Result<Signal<T>> {
    let n = f.len();
    nonempty(n)?;
    check_index(k, n)?;
    let v = f.values();
    Ok(Signal::new((0..n).map(|m| v[(m + n - k) % n]).collect()))
}

/// `M_l f(n) = e^{2πiln/N} f(n)`.
pub fn modulate<T: Scalar>(f: &Signal<T>, l: usize) -> Result<Signal<T>> {
    let n = f.len();
    nonempty(n)?;
    check_index(l, n)?;
    let w = twiddles::<T>(n);
    let v = f.values();
    Ok(Signal::new((0..n).map(|m| v[m] * w[(l * m) % n]).collect()))
}

fn check_window<T: Scalar>(g: &Signal<T>) -> Result<()> {
    if g.norm_sq() == T::zero() {
        return Err(Error::ZeroWindow);
    }
    Ok(())
}

/// `V_g f(k, l) = Σ_n f(n) ḡ(n - k) e^{-2πiln/N}`; rows are shifts `k`, columns frequencies `l`.
pub fn dstft<T: Scalar>(f: &Signal<T>, g: &Signal<T>) -> Result<Array2<Complex<T>>> {
    let n = f.len();
    nonempty(n)?;
    g.check_len(n)?;
    check_window(g)?;
    let w = twiddles::<T>(n);
    let (fv, gv) = (f.values(), g.values());
    let mut out = Array2::zeros((n, n));
    let mut windowed = vec![Complex::new(T::zero(), T::zero()); n];
    for k in 0..n {
        for m in 0..n {
            windowed[m] = fv[m] * gv[(m + n - k) % n].conj();
        }
        for l in 0..n {
            out[[k, l]] = (0..n).fold(Complex::new(T::zero(), T::zero()), |acc, m| {
                acc + windowed[m] * w[(l * m) % n].conj()
            });
        }
    }
    Ok(out)
}

/// `f(n) = (N ‖g‖²)^{-1} Σ_{k,l} V_g f(k, l) g(n - k) e^{+2πiln/N}`.
pub fn dstft_reconstruct<T: Scalar>(v: &Array2<Complex<T>>, g: &Signal<T>) -> Result<Signal<T>> {
    let n = g.len();
    nonempty(n)?;
    check_window(g)?;
    if v.dim() != (n, n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: v.nrows(),
        });
    }
    let w = twiddles::<T>(n);
    let gv = g.values();
    let scale = T::one() / (T::from_usize(n) * g.norm_sq());
    let values = (0..n)
        .map(|m| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for k in 0..n {
                let inner = (0..n).fold(Complex::new(T::zero(), T::zero()), |a, l| {
                    a + v[[k, l]] * w[(l * m) % n]
                });
                acc += inner * gv[(m + n - k) % n];
            }
            acc * scale
        })
        .collect();
    Ok(Signal::new(values))
}

/// The `N²` atoms `π(k, l) g = M_l T_k g` generated by a nonzero window.
#[derive(Debug, Clone)]
pub struct ClassicalGaborSystem<T> {
    window: Signal<T>,
}

impl<T: Scalar> ClassicalGaborSystem<T> {
    pub fn new(window: Signal<T>) -> Result<Self> {
        nonempty(window.len())?;
        check_window(&window)?;
        Ok(ClassicalGaborSystem { window })
    }

    pub fn n(&self) -> usize {
        self.window.len()
    }

    pub fn window(&self) -> &Signal<T> {
        &self.window
    }

    pub fn atom(&self, k: usize, l: usize) -> Result<Signal<T>> {
        modulate(&translate(&self.window, k)?, l)
    }

    /// All atoms in row-major `(k, l)` order.
    pub fn atoms(&self) -> Vec<Signal<T>> {
        let n = self.n();
        (0..n)
            .flat_map(|k| (0..n).map(move |l| (k, l)))
            .map(|(k, l)| self.atom(k, l).expect("indices in range"))
            .collect()
    }

    /// `Σ_{k,l} π(k,l)g (π(k,l)g)*`, by explicit summation.
    pub fn frame_operator(&self) -> Array2<Complex<T>> {
        let n = self.n();
        let mut s = Array2::zeros((n, n));
        for atom in self.atoms() {
            let a = atom.values();
            for p in 0..n {
                for q in 0..n {
                    s[[p, q]] += a[p] * a[q].conj();
                }
            }
        }
        s
    }

    /// The tight frame bound `N ‖g‖²`.
    pub fn frame_bound(&self) -> T {
        T::from_usize(self.n()) * self.window.norm_sq()
    }
}

/// `|V|²` entrywise.
pub fn spectrogram<T: Scalar>(v: &Array2<Complex<T>>) -> Array2<T> {
    v.mapv(|z| z.norm_sqr())
}

/// For each row, the frequency bin in `0..=max_bin` with the largest value.
pub fn dominant_bins<T: Scalar>(power: &Array2<T>, max_bin: usize) -> Vec<usize> {
    power
        .rows()
        .into_iter()
        .map(|row| {
            let mut best = 0;
            for l in 0..=max_bin.min(row.len() - 1) {
                if row[l] > row[best] {
                    best = l;
                }
            }
            best
        })
        .collect()
}

/// `cos(2π b₁ n / N)` before `split`, `cos(2π b₂ n / N)` from `split` on.
pub fn piecewise_cosine<T: Scalar>(n: usize, first_bin: usize, second_bin: usize, split: usize) -> Vec<T> {
    (0..n)
        .map(|m| {
            let bin = if m < split { first_bin } else { second_bin };
            (T::TAU() * T::from_usize((bin * m) % n.max(1)) / T::from_usize(n)).cos()
        })
        .collect()
}

/// Indicator of `0..width`.
pub fn boxcar_window<T: Scalar>(n: usize, width: usize) -> Result<Signal<T>> {
    if width == 0 || width > n {
        return Err(Error::InvalidParameter(format!(
            "window width must be in 1..={n}, got {width}"
        )));
    }
    Ok(Signal::from_real(
        &(0..n).map(|m| if m < width { T::one() } else { T::zero() }).collect::<Vec<_>>(),
    ))
}

/// The two largest bins of `|f̂|²` within `0..=N/2`, in descending power.
pub fn top_two_bins<T: Scalar>(fhat: &Signal<T>) -> (usize, usize) {
    let half = fhat.len() / 2;
    let mut bins: Vec<usize> = (0..=half).collect();
    let power: Vec<T> = fhat.values().iter().map(|z| z.norm_sqr()).collect();
    bins.sort_by(|&a, &b| power[b].partial_cmp(&power[a]).unwrap().then(a.cmp(&b)));
    (bins[0], bins[1])
}
