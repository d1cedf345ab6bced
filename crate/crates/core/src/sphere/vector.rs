use crate::error::{Error, Result};

use super::key::{CarrierLabel, SecretKey};
use super::stream::{derive_stream, gaussian_draws};

/// Tolerance on `| ||x|| - 1 |` accepted by [`UnitVector::new`].
pub const UNIT_TOLERANCE: f64 = 1e-9;

/// Real vector of dimension `D >= 2` with unit Euclidean norm.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector {
    coords: Vec<f64>,
}

impl UnitVector {
    /// Wraps `coords`, which must already have unit norm.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::param(format!("unit vector needs dim >= 2, got {}", coords.len())));
        }
        let n = l2_norm(&coords);
        if !n.is_finite() || (n - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::param(format!("vector norm {n} is not 1")));
        }
        Ok(UnitVector { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.coords
    }

    pub fn neg(&self) -> UnitVector {
        UnitVector {
            coords: self.coords.iter().map(|v| -v).collect(),
        }
    }

    /// Standard basis vector `e_i`.
    pub fn basis(dim: usize, i: usize) -> Result<Self> {
        if i >= dim {
            return Err(Error::OutOfRange(format!("basis index {i} >= dim {dim}")));
        }
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        UnitVector::new(v)
    }
}

impl AsRef<[f64]> for UnitVector {
    fn as_ref(&self) -> &[f64] {
        &self.coords
    }
}

pub fn l2_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `v / ||v||`.
pub fn normalize(v: &[f64]) -> Result<UnitVector> {
    if v.len() < 2 {
        return Err(Error::param(format!("unit vector needs dim >= 2, got {}", v.len())));
    }
    let n = l2_norm(v);
    if n == 0.0 || !n.is_finite() {
        return Err(Error::ZeroVector);
    }
    Ok(UnitVector {
        coords: v.iter().map(|x| x / n).collect(),
    })
}

/// Cosine of two unit vectors, clamped to `[-1, 1]`.
pub fn cosine(a: &UnitVector, b: &UnitVector) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(dot(&a.coords, &b.coords).clamp(-1.0, 1.0))
}

/// Keyed direction uniform on `S^{dim-1}`.
pub fn random_unit_vector(key: &SecretKey, label: CarrierLabel, dim: usize) -> Result<UnitVector> {
    if dim < 2 {
        return Err(Error::param(format!("unit vector needs dim >= 2, got {dim}")));
    }
    let mut stream = derive_stream(key, label);
    loop {
        let z = gaussian_draws(&mut stream, dim);
        match normalize(&z) {
            Ok(v) => return Ok(v),
            // all-zero draw: take the next block of the same stream
            Err(Error::ZeroVector) => continue,
            Err(e) => return Err(e),
        }
    }
}
