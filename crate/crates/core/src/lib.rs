//! Graph short-time Fourier transform (GSTFT) with heat-kernel windows.
//!
//! The pipeline is: build a [`graph::Graph`], decompose its Laplacian
//! ([`spectral::decompose_graph`]), form the heat kernel `H_t = e^{-tL}`
//! ([`heat::heat_kernel`]), then analyse signals with [`gabor::gstft`] and invert with
//! [`gabor::inverse_gstft`]. The Gabor frame operator of the atoms `D_i(t) φ_j` is
//! diagonal with entries `‖H_t(·, v_j)‖²`; [`gabor::frame_report`] measures how far it
//! is from a multiple of the identity, and [`gabor::srg_certificate`] certifies the
//! strongly regular case.
//!
//! Numerical code is generic over [`Scalar`] (`f32` and `f64`); the aliases below fix
//! the scalar to `f64`, which is what the CLI and file formats use.
//!
//! ```
//! use graph_gstft::{graph::ring_graph, gabor, heat, spectral, Signal};
//!
//! let g = ring_graph(8).unwrap();
//! let dec = spectral::decompose_graph::<f64>(&g).unwrap();
//! let hk = heat::heat_kernel(&dec, 1.0).unwrap();
//! let f = Signal::delta(8, 3);
//! let coeffs = gabor::gstft(&dec, &hk, &f).unwrap();
//! let back = gabor::inverse_gstft(&dec, &hk, &coeffs).unwrap();
//! assert!(back.max_abs_diff(&f) < 1e-9);
//! assert!(gabor::frame_report(&dec, &hk).unwrap().tight);
//! ```

pub mod classical;
pub mod cli;
pub mod error;
pub mod gabor;
pub mod graph;
pub mod heat;
pub mod io;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{Graph, SrgParameters};
pub use scalar::Scalar;

pub type Signal = spectral::Signal<f64>;
pub type SpectralDecomposition = spectral::SpectralDecomposition<f64>;
pub type HeatKernel = heat::HeatKernel<f64>;
pub type GstftCoefficients = gabor::GstftCoefficients<f64>;
pub type FrameReport = gabor::FrameReport<f64>;
pub type GaborAtom = gabor::GaborAtom<f64>;
pub type SrgCertificate = gabor::SrgCertificate<f64>;
pub type DftMatrix = classical::DftMatrix<f64>;

pub type Signal32 = spectral::Signal<f32>;
pub type SpectralDecomposition32 = spectral::SpectralDecomposition<f32>;
pub type HeatKernel32 = heat::HeatKernel<f32>;
pub type GstftCoefficients32 = gabor::GstftCoefficients<f32>;
pub type FrameReport32 = gabor::FrameReport<f32>;
