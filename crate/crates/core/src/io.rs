//! Flat-file formats: coefficient CSV and the `HBSV1` binary container.
//!
//! Container layout, all little-endian:
//!
//! | field      | type     |
//! |------------|----------|
//! | magic      | `HBSV1`  |
//! | kind       | u8       |
//! | dim        | u32      |
//! | max degree | u32      |
//! | spacing    | f64      |
//! | half-width | f64      |
//! | payload    | per kind |
//!
//! Coefficients and grid functions store a u64 count then `(re, im)` pairs.
//! Kernels store a UTF-8 label (u32 length), rows and cols (u64) and row-major entries.
//! Trajectories store a u64 step count, then per step a time and a coefficient payload.
//! Grid fields are zero when the payload has no grid; the degree is zero when it has no basis.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermite::{Grid, GridFunction, HermiteBasis, SpectralCoefficients};
use crate::semigroup::Trajectory;
use crate::spectral::KernelMatrix;

pub const MAGIC: &[u8; 5] = b"HBSV1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum Kind {
    Coefficients = 0,
    GridFunction = 1,
    Kernel = 2,
    Trajectory = 3,
}

impl Kind {
    fn from_u8(v: u8) -> Result<Self> {
        Ok(match v {
            0 => Kind::Coefficients,
            1 => Kind::GridFunction,
            2 => Kind::Kernel,
            3 => Kind::Trajectory,
            _ => return Err(Error::Format(format!("unknown container kind {v}"))),
        })
    }
}

struct Header {
    kind: Kind,
    dim: usize,
    max_degree: usize,
    spacing: f64,
    half_width: f64,
}

fn wrap<T>(r: std::io::Result<T>) -> Result<T> {
    r.map_err(|e| Error::Format(e.to_string()))
}

fn put_u32(w: &mut impl Write, v: usize) -> Result<()> {
    let v = u32::try_from(v).map_err(|_| Error::Format(format!("{v} exceeds u32")))?;
    wrap(w.write_all(&v.to_le_bytes()))
}

fn put_u64(w: &mut impl Write, v: usize) -> Result<()> {
    wrap(w.write_all(&(v as u64).to_le_bytes()))
}

fn put_f64(w: &mut impl Write, v: f64) -> Result<()> {
    wrap(w.write_all(&v.to_le_bytes()))
}

fn get<const K: usize>(r: &mut impl Read) -> Result<[u8; K]> {
    let mut b = [0u8; K];
    wrap(r.read_exact(&mut b))?;
    Ok(b)
}

fn get_u32(r: &mut impl Read) -> Result<usize> {
    Ok(u32::from_le_bytes(get(r)?) as usize)
}

fn get_u64(r: &mut impl Read) -> Result<usize> {
    usize::try_from(u64::from_le_bytes(get(r)?)).map_err(|_| Error::Format("length overflow".into()))
}

fn get_f64(r: &mut impl Read) -> Result<f64> {
    Ok(f64::from_le_bytes(get(r)?))
}

fn put_header(w: &mut impl Write, h: &Header) -> Result<()> {
    wrap(w.write_all(MAGIC))?;
    wrap(w.write_all(&[h.kind as u8]))?;
    put_u32(w, h.dim)?;
    put_u32(w, h.max_degree)?;
    put_f64(w, h.spacing)?;
    put_f64(w, h.half_width)
}

fn get_header(r: &mut impl Read, want: Kind) -> Result<Header> {
    if &get::<5>(r)? != MAGIC {
        return Err(Error::Format("missing HBSV1 magic".into()));
    }
    let kind = Kind::from_u8(get::<1>(r)?[0])?;
    if kind != want {
        return Err(Error::Format(format!("expected {want:?}, found {kind:?}")));
    }
    Ok(Header {
        kind,
        dim: get_u32(r)?,
        max_degree: get_u32(r)?,
        spacing: get_f64(r)?,
        half_width: get_f64(r)?,
    })
}

fn put_complex(w: &mut impl Write, values: &[Complex64]) -> Result<()> {
    put_u64(w, values.len())?;
    for v in values {
        put_f64(w, v.re)?;
        put_f64(w, v.im)?;
    }
    Ok(())
}

fn get_complex(r: &mut impl Read, expected: usize) -> Result<Vec<Complex64>> {
    let n = get_u64(r)?;
    if n != expected {
        return Err(Error::Format(format!("payload holds {n} values, header implies {expected}")));
    }
    (0..n)
        .map(|_| Ok(Complex64::new(get_f64(r)?, get_f64(r)?)))
        .collect()
}

fn grid_of(h: &Header) -> Result<Grid> {
    Grid::new(h.dim, h.half_width, h.spacing)
}

pub fn write_coefficients(w: &mut impl Write, c: &SpectralCoefficients) -> Result<()> {
    let b = c.basis();
    put_header(
        w,
        &Header {
            kind: Kind::Coefficients,
            dim: b.dim(),
            max_degree: b.max_degree(),
            spacing: 0.0,
            half_width: 0.0,
        },
    )?;
    put_complex(w, c.coeffs())
}

pub fn read_coefficients(r: &mut impl Read) -> Result<SpectralCoefficients> {
    let h = get_header(r, Kind::Coefficients)?;
    let basis = HermiteBasis::new(h.dim, h.max_degree)?;
    SpectralCoefficients::from_vec(basis, get_complex(r, basis.len())?)
}

pub fn write_grid_function(w: &mut impl Write, f: &GridFunction) -> Result<()> {
    let g = f.grid();
    put_header(
        w,
        &Header {
            kind: Kind::GridFunction,
            dim: g.dim(),
            max_degree: 0,
            spacing: g.spacing(),
            half_width: g.half_width(),
        },
    )?;
    put_complex(w, f.values())
}

pub fn read_grid_function(r: &mut impl Read) -> Result<GridFunction> {
    let h = get_header(r, Kind::GridFunction)?;
    let grid = grid_of(&h)?;
    let values = get_complex(r, grid.len())?;
    GridFunction::new(grid, values)
}

pub fn write_kernel(w: &mut impl Write, k: &KernelMatrix) -> Result<()> {
    let g = k.grid();
    put_header(
        w,
        &Header {
            kind: Kind::Kernel,
            dim: g.dim(),
            max_degree: 0,
            spacing: g.spacing(),
            half_width: g.half_width(),
        },
    )?;
    let label = k.label().as_bytes();
    put_u32(w, label.len())?;
    wrap(w.write_all(label))?;
    let e = k.entries();
    put_u64(w, e.nrows())?;
    put_u64(w, e.ncols())?;
    for v in e.iter() {
        put_f64(w, *v)?;
    }
    Ok(())
}

pub fn read_kernel(r: &mut impl Read) -> Result<KernelMatrix> {
    let h = get_header(r, Kind::Kernel)?;
    let grid = grid_of(&h)?;
    let mut label = vec![0u8; get_u32(r)?];
    wrap(r.read_exact(&mut label))?;
    let label = String::from_utf8(label).map_err(|e| Error::Format(e.to_string()))?;
    let (rows, cols) = (get_u64(r)?, get_u64(r)?);
    if rows != grid.len() || cols != grid.len() {
        return Err(Error::Format(format!("kernel is {rows}x{cols} on a grid of {}", grid.len())));
    }
    let data = (0..rows * cols).map(|_| get_f64(r)).collect::<Result<Vec<_>>>()?;
    let entries = Array2::from_shape_vec((rows, cols), data).map_err(|e| Error::Format(e.to_string()))?;
    KernelMatrix::new(grid, entries, label)
}

pub fn write_trajectory(w: &mut impl Write, t: &Trajectory) -> Result<()> {
    let b = t.basis();
    put_header(
        w,
        &Header {
            kind: Kind::Trajectory,
            dim: b.dim(),
            max_degree: b.max_degree(),
            spacing: 0.0,
            half_width: 0.0,
        },
    )?;
    put_u64(w, t.times().len())?;
    for (time, s) in t.times().iter().zip(t.states()) {
        put_f64(w, *time)?;
        put_complex(w, s.coeffs())?;
    }
    Ok(())
}

/// Times and states of a stored trajectory.
pub fn read_trajectory(r: &mut impl Read) -> Result<(Vec<f64>, Vec<SpectralCoefficients>)> {
    let h = get_header(r, Kind::Trajectory)?;
    let basis = HermiteBasis::new(h.dim, h.max_degree)?;
    let steps = get_u64(r)?;
    let mut times = Vec::with_capacity(steps);
    let mut states = Vec::with_capacity(steps);
    for _ in 0..steps {
        times.push(get_f64(r)?);
        states.push(SpectralCoefficients::from_vec(basis, get_complex(r, basis.len())?)?);
    }
    Ok((times, states))
}

/// Opens `path` for buffered writing, mapping failures to [`Error::Io`].
pub fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

pub fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| Error::io(path, e))
}

/// Coefficients as CSV with columns `n1[,n2],re,im`; floats keep 17 significant digits.
pub fn coefficients_to_csv(w: impl Write, c: &SpectralCoefficients) -> Result<()> {
    let b = c.basis();
    let mut out = csv::Writer::from_writer(w);
    let mut header: Vec<&str> = ["n1", "n2"][..b.dim()].to_vec();
    header.extend(["re", "im"]);
    out.write_record(&header).map_err(csv_err)?;
    for (k, v) in c.coeffs().iter().enumerate() {
        let n = b.multi_index(k);
        let mut row: Vec<String> = n[..b.dim()].iter().map(|i| i.to_string()).collect();
        row.push(fmt_f64(v.re));
        row.push(fmt_f64(v.im));
        out.write_record(&row).map_err(csv_err)?;
    }
    out.flush().map_err(|e| Error::Format(e.to_string()))
}

/// Reads coefficient CSV; the basis is the smallest cube containing every listed index.
pub fn coefficients_from_csv(r: impl Read) -> Result<SpectralCoefficients> {
    let mut rdr = csv::Reader::from_reader(r);
    let headers = rdr.headers().map_err(csv_err)?.clone();
    let dim = match headers.iter().collect::<Vec<_>>().as_slice() {
        ["n1", "re", "im"] => 1,
        ["n1", "n2", "re", "im"] => 2,
        other => return Err(Error::Format(format!("unexpected CSV header {other:?}"))),
    };
    let mut rows = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let field = |i: usize| rec.get(i).unwrap_or("");
        let bad = |what: &str| Error::Format(format!("row {}: bad {what}", line + 2));
        let mut n = [0usize; 2];
        for (i, slot) in n.iter_mut().enumerate().take(dim) {
            *slot = field(i).trim().parse().map_err(|_| bad("index"))?;
        }
        let re: f64 = field(dim).trim().parse().map_err(|_| bad("real part"))?;
        let im: f64 = field(dim + 1).trim().parse().map_err(|_| bad("imaginary part"))?;
        rows.push((n, Complex64::new(re, im)));
    }
    let max = rows.iter().map(|(n, _)| n[0].max(n[1])).max().unwrap_or(0);
    let basis = HermiteBasis::new(dim, max)?;
    let mut c = SpectralCoefficients::zeros(basis);
    for (n, v) in rows {
        let k = basis.flat_index(&n[..dim])?;
        c.coeffs_mut()[k] = v;
    }
    Ok(c)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Format(e.to_string())
}

/// Fixed float formatting shared by every CSV writer: 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}
