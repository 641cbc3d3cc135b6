//! Base-2 digital (Sobol) sequence in Gray-code order with 32-bit direction
//! numbers.

use nalgebra::DMatrix;

use super::direction_numbers::JOE_KUO;
use super::SensitivityError;

const BITS: usize = 32;
/// Dimensions with embedded direction numbers.
pub const MAX_DIMS: usize = JOE_KUO.len() + 1;

fn direction_numbers(dim: usize) -> [u32; BITS] {
    let mut v = [0u32; BITS];
    if dim == 0 {
        for (j, vj) in v.iter_mut().enumerate() {
            *vj = 1 << (BITS - 1 - j);
        }
        return v;
    }
    let (degree, coeffs, m) = JOE_KUO[dim - 1];
    let s = degree as usize;
    for j in 0..s.min(BITS) {
        v[j] = m[j] << (BITS - 1 - j);
    }
    for j in s..BITS {
        let mut x = v[j - s] ^ (v[j - s] >> s);
        for l in 1..s {
            if (coeffs >> (s - 1 - l)) & 1 == 1 {
                x ^= v[j - l];
            }
        }
        v[j] = x;
    }
    v
}

/// Stateful generator. Point `i` is the XOR of the direction numbers
/// selected by the bits of the Gray code of `i`; the first point is zero.
#[derive(Debug, Clone)]
pub struct SobolSequence {
    directions: Vec<[u32; BITS]>,
    state: Vec<u32>,
    index: u64,
}

impl SobolSequence {
    pub fn new(dims: usize) -> Result<Self, SensitivityError> {
        if dims > MAX_DIMS {
            return Err(SensitivityError::DimensionUnsupported { requested: dims, supported: MAX_DIMS });
        }
        Ok(Self { directions: (0..dims).map(direction_numbers).collect(), state: vec![0; dims], index: 0 })
    }

    pub fn dims(&self) -> usize {
        self.directions.len()
    }

    /// Index of the point the next call to [`Self::next_raw`] returns.
    pub fn index(&self) -> u64 {
        self.index
    }

    /// Jump to point `index` without generating the ones before it.
    pub fn seek(&mut self, index: u64) -> Result<(), SensitivityError> {
        if index > 1 << BITS {
            return Err(SensitivityError::TooManyPoints { requested: index });
        }
        let gray = index ^ (index >> 1);
        for (s, v) in self.state.iter_mut().zip(&self.directions) {
            *s = (0..BITS).filter(|b| gray >> b & 1 == 1).fold(0, |acc, b| acc ^ v[b]);
        }
        self.index = index;
        Ok(())
    }

    /// Current point as 32-bit fractions, then advance.
    pub fn next_raw(&mut self) -> Result<Vec<u32>, SensitivityError> {
        if self.index >= 1 << BITS {
            return Err(SensitivityError::TooManyPoints { requested: self.index + 1 });
        }
        let out = self.state.clone();
        self.index += 1;
        if self.index < 1 << BITS {
            let bit = self.index.trailing_zeros() as usize;
            for (s, v) in self.state.iter_mut().zip(&self.directions) {
                *s ^= v[bit];
            }
        }
        Ok(out)
    }

    /// Current point in `[0, 1)`, then advance.
    pub fn next_point(&mut self, out: &mut [f64]) -> Result<(), SensitivityError> {
        debug_assert_eq!(out.len(), self.dims());
        let raw = self.next_raw()?;
        for (o, r) in out.iter_mut().zip(raw) {
            *o = f64::from(r) / (1u64 << BITS) as f64;
        }
        Ok(())
    }
}

/// `n` consecutive points starting at index `skip`, one per row.
pub fn sobol_sequence(n: usize, dims: usize, skip: u64) -> Result<DMatrix<f64>, SensitivityError> {
    if n == 0 {
        return Err(SensitivityError::InvalidConfig("at least one point is required".into()));
    }
    let last = skip.checked_add(n as u64).ok_or(SensitivityError::TooManyPoints { requested: u64::MAX })?;
    if last > 1 << BITS {
        return Err(SensitivityError::TooManyPoints { requested: last });
    }
    let mut seq = SobolSequence::new(dims)?;
    seq.seek(skip)?;
    let mut out = DMatrix::zeros(n, dims);
    let mut point = vec![0.0; dims];
    for i in 0..n {
        seq.next_point(&mut point)?;
        for (d, v) in point.iter().enumerate() {
            out[(i, d)] = *v;
        }
    }
    Ok(out)
}
