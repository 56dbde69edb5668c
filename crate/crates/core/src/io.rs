//! Text interchange formats: CSV with 17 significant digits, plus atomic file output.
//!
//! Lines starting with `#` are metadata/comments and are skipped by every reader.
//! Metadata lines have the form `# key=value, key=value`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use ndarray::Array2;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::gabor::{FrameReport, GstftCoefficients};
use crate::heat::HeatKernel;
use crate::spectral::{Signal, SpectralDecomposition};

/// 17 significant digits in scientific notation; round-trips every `f64`.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// `re+imj` / `re-imj`.
pub fn fmt_complex(z: Complex<f64>) -> String {
    format!("{:.16e}{:+.16e}j", z.re, z.im)
}

pub fn parse_real(s: &str) -> Result<f64> {
    let s = s.trim();
    s.parse()
        .map_err(|_| Error::Parse(format!("invalid number {s:?}")))
}

/// Parses `re+imj`, `re-imj`, `imj` or a bare real.
pub fn parse_complex(s: &str) -> Result<Complex<f64>> {
    let s = s.trim();
    let Some(body) = s.strip_suffix('j') else {
        return Ok(Complex::new(parse_real(s)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    match split {
        Some(i) => Ok(Complex::new(parse_real(&body[..i])?, parse_real(&body[i..])?)),
        None => Ok(Complex::new(0.0, parse_real(body)?)),
    }
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Collects `key=value` pairs from `#` lines.
pub fn read_metadata(text: &str) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    for line in text.lines().filter_map(|l| l.trim().strip_prefix('#')) {
        for part in line.split(',') {
            if let Some((k, v)) = part.split_once('=') {
                out.insert(k.trim().to_string(), v.trim().to_string());
            }
        }
    }
    out
}

pub fn metadata_line(pairs: &[(&str, String)]) -> String {
    let body: Vec<String> = pairs.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("# {}\n", body.join(", "))
}

/// One value per line, `re,im` or `re`.
pub fn read_signal_csv(text: &str) -> Result<Signal<f64>> {
    let mut values = Vec::new();
    for (lineno, line) in data_lines(text) {
        let fields: Vec<&str> = line.split(',').collect();
        let z = match fields.as_slice() {
            [r] => Complex::new(parse_real(r)?, 0.0),
            [r, i] => Complex::new(parse_real(r)?, parse_real(i)?),
            _ => {
                return Err(Error::Parse(format!(
                    "line {lineno}: expected `re` or `re,im`"
                )))
            }
        };
        values.push(z);
    }
    Ok(Signal::from_vec(values))
}

pub fn write_signal_csv(f: &Signal<f64>) -> String {
    let mut s = String::new();
    for z in f.values() {
        let _ = writeln!(s, "{},{}", fmt_real(z.re), fmt_real(z.im));
    }
    s
}

pub fn write_real_matrix_csv(m: &Array2<f64>) -> String {
    let mut s = String::new();
    for row in m.rows() {
        let cells: Vec<String> = row.iter().map(|&x| fmt_real(x)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

pub fn read_real_matrix_csv(text: &str) -> Result<Array2<f64>> {
    let rows = data_lines(text)
        .map(|(_, l)| l.split(',').map(parse_real).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    rectangular(rows)
}

fn rectangular<E: Clone>(rows: Vec<Vec<E>>) -> Result<Array2<E>> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if let Some(bad) = rows.iter().find(|row| row.len() != c) {
        return Err(Error::DimensionMismatch {
            expected: c,
            found: bad.len(),
        });
    }
    Array2::from_shape_vec((r, c), rows.into_iter().flatten().collect())
        .map_err(|e| Error::Parse(e.to_string()))
}

/// Row `j`: `λ_j` followed by the entries of `φ_j`.
pub fn write_decomposition_csv(dec: &SpectralDecomposition<f64>) -> String {
    let n = dec.n();
    let mut s = String::from("# eigenvalue");
    for v in 0..n {
        let _ = write!(s, ",v{v}");
    }
    s.push('\n');
    for j in 0..n {
        let mut cells = vec![fmt_real(dec.eigenvalues()[j])];
        cells.extend(dec.eigenvector(j).iter().map(|&x| fmt_real(x)));
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

pub fn write_heat_csv(hk: &HeatKernel<f64>) -> String {
    write_real_matrix_csv(hk.matrix())
}

/// Metadata line with `t`, `n` (and optionally the graph hash), then `n` rows of `re+imj`.
pub fn write_gstft_csv(coeffs: &GstftCoefficients<f64>, graph_hash: Option<&str>) -> String {
    let mut meta = vec![("t", fmt_real(coeffs.t())), ("n", coeffs.n().to_string())];
    if let Some(h) = graph_hash {
        meta.push(("graph", h.to_string()));
    }
    let mut s = metadata_line(&meta);
    for row in coeffs.matrix().rows() {
        let cells: Vec<String> = row.iter().map(|&z| fmt_complex(z)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

/// Coefficients plus the metadata they were written with.
pub fn read_gstft_csv(text: &str) -> Result<(GstftCoefficients<f64>, BTreeMap<String, String>)> {
    let meta = read_metadata(text);
    let t = parse_real(
        meta.get("t")
            .ok_or_else(|| Error::Parse("coefficient file lacks `t` metadata".into()))?,
    )?;
    let rows = data_lines(text)
        .map(|(_, l)| l.split(',').map(parse_complex).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let matrix = rectangular(rows)?;
    if let Some(n) = meta.get("n") {
        let n: usize = n
            .parse()
            .map_err(|_| Error::Parse(format!("invalid n {n:?}")))?;
        if n != matrix.nrows() {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: matrix.nrows(),
            });
        }
    }
    Ok((GstftCoefficients::new(t, matrix)?, meta))
}

pub const FRAME_REPORT_HEADER: &str = "t,A,B,gap,ratio,tight";

pub fn frame_report_row(r: &FrameReport<f64>) -> String {
    format!(
        "{},{},{},{},{},{}",
        fmt_real(r.t),
        fmt_real(r.bound_a),
        fmt_real(r.bound_b),
        fmt_real(r.gap),
        fmt_real(r.ratio),
        r.tight
    )
}

pub fn write_frame_reports_csv(reports: &[FrameReport<f64>]) -> String {
    let mut s = format!("{FRAME_REPORT_HEADER}\n");
    for r in reports {
        s.push_str(&frame_report_row(r));
        s.push('\n');
    }
    s
}

/// Per-vertex trajectories: one row per `t`, columns `γ_0(t) … γ_{n-1}(t)`.
pub fn write_gamma_trajectories_csv(reports: &[FrameReport<f64>]) -> String {
    let n = reports.first().map_or(0, |r| r.gammas.len());
    let mut s = String::from("t");
    for j in 0..n {
        let _ = write!(s, ",gamma_{j}");
    }
    s.push('\n');
    for r in reports {
        let mut cells = vec![fmt_real(r.t)];
        cells.extend(r.gammas.iter().map(|&g| fmt_real(g)));
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

/// Write via a sibling temporary file and rename, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| Error::InvalidParameter(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp-{}", name.to_string_lossy(), std::process::id()));
    {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(contents.as_bytes())?;
        file.sync_all()?;
    }
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })?;
    Ok(())
}
