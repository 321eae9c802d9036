//! Column-major quaternion matrices and borrowed views into them.

use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Normal, Uniform};

use crate::error::{Error, Result};
use crate::quat::{conj, Quaternion};

#[inline]
fn required_len(rows: usize, cols: usize, ld: usize) -> usize {
    if rows == 0 || cols == 0 {
        0
    } else {
        (cols - 1) * ld + rows
    }
}

/// Dense column-major quaternion matrix with leading dimension `ld >= rows`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuatMatrix {
    rows: usize,
    cols: usize,
    ld: usize,
    data: Vec<Quaternion>,
}

impl QuatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::zeros_with_ld(rows, cols, rows)
    }

    pub fn zeros_with_ld(rows: usize, cols: usize, ld: usize) -> Self {
        assert!(ld >= rows.max(1), "leading dimension {ld} smaller than row count {rows}");
        QuatMatrix { rows, cols, ld, data: vec![Quaternion::ZERO; ld * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Quaternion::E0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Quaternion) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        QuatMatrix { rows, cols, ld: rows.max(1), data }
    }

    /// Wraps a column-major buffer.
    pub fn from_col_major(rows: usize, cols: usize, ld: usize, data: Vec<Quaternion>) -> Result<Self> {
        if ld < rows.max(1) {
            return Err(Error::DimensionMismatch(format!("ld {ld} < rows {rows}")));
        }
        if data.len() < required_len(rows, cols, ld) {
            return Err(Error::DimensionMismatch(format!(
                "buffer of {} elements too short for {rows}x{cols} with ld {ld}",
                data.len()
            )));
        }
        Ok(QuatMatrix { rows, cols, ld, data })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn ld(&self) -> usize {
        self.ld
    }

    pub fn as_slice(&self) -> &[Quaternion] {
        &self.data
    }

    pub fn view(&self) -> MatRef<'_> {
        MatRef { data: &self.data, rows: self.rows, cols: self.cols, ld: self.ld }
    }

    pub fn view_mut(&mut self) -> MatMut<'_> {
        MatMut { data: &mut self.data, rows: self.rows, cols: self.cols, ld: self.ld }
    }

    /// Iterates elements in column-major order, skipping `ld` padding.
    pub fn iter(&self) -> impl Iterator<Item = Quaternion> + '_ {
        (0..self.cols).flat_map(move |j| self.data[j * self.ld..j * self.ld + self.rows].iter().copied())
    }

    /// Conjugate transpose: `(Q^H)[i][j] = conj(Q[j][i])`.
    pub fn conj_transpose(&self) -> QuatMatrix {
        QuatMatrix::from_fn(self.cols, self.rows, |i, j| conj(self[(j, i)]))
    }

    /// Sum of every component of every element.
    pub fn checksum(&self) -> f64 {
        self.iter().map(|q| q.w + q.x + q.y + q.z).sum()
    }

    /// Largest componentwise absolute value.
    pub fn max_abs(&self) -> f64 {
        self.iter()
            .flat_map(|q| q.to_array())
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Writes the `QMAT` binary form: a 16-byte header (`b"QMAT"`, `u32` rows,
    /// `u32` cols, `u32` reserved = 0) followed by the elements column-major as
    /// little-endian `f64` in `[w, x, y, z]` order.
    pub fn write_qmat<W: Write>(&self, mut out: W) -> Result<()> {
        let rows = u32::try_from(self.rows).map_err(|_| Error::Format("row count exceeds u32".into()))?;
        let cols = u32::try_from(self.cols).map_err(|_| Error::Format("column count exceeds u32".into()))?;
        let mut header = [0u8; 16];
        header[..4].copy_from_slice(b"QMAT");
        header[4..8].copy_from_slice(&rows.to_le_bytes());
        header[8..12].copy_from_slice(&cols.to_le_bytes());
        out.write_all(&header)?;
        let mut buf = Vec::with_capacity(self.rows * self.cols * 32);
        for q in self.iter() {
            for c in q.to_array() {
                buf.extend_from_slice(&c.to_le_bytes());
            }
        }
        out.write_all(&buf)?;
        out.flush()?;
        Ok(())
    }

    pub fn read_qmat<R: Read>(mut input: R) -> Result<QuatMatrix> {
        let mut header = [0u8; 16];
        input.read_exact(&mut header).map_err(|e| Error::Format(format!("short header: {e}")))?;
        if &header[..4] != b"QMAT" {
            return Err(Error::Format("bad magic".into()));
        }
        let word = |i: usize| u32::from_le_bytes(header[i..i + 4].try_into().unwrap()) as usize;
        let (rows, cols) = (word(4), word(8));
        let mut raw = vec![0u8; rows * cols * 32];
        input.read_exact(&mut raw).map_err(|e| Error::Format(format!("short body: {e}")))?;
        let data = raw
            .chunks_exact(32)
            .map(|q| {
                let c = |k: usize| f64::from_le_bytes(q[k * 8..k * 8 + 8].try_into().unwrap());
                Quaternion::new(c(0), c(1), c(2), c(3))
            })
            .collect();
        Ok(QuatMatrix { rows, cols, ld: rows.max(1), data })
    }
}

impl std::ops::Index<(usize, usize)> for QuatMatrix {
    type Output = Quaternion;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Quaternion {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[j * self.ld + i]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QuatMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Quaternion {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[j * self.ld + i]
    }
}

/// Immutable strided view.
#[derive(Clone, Copy, Debug)]
pub struct MatRef<'a> {
    data: &'a [Quaternion],
    rows: usize,
    cols: usize,
    ld: usize,
}

impl<'a> MatRef<'a> {
    pub fn new(data: &'a [Quaternion], rows: usize, cols: usize, ld: usize) -> Result<Self> {
        if ld < rows.max(1) || data.len() < required_len(rows, cols, ld) {
            return Err(Error::DimensionMismatch(format!(
                "view {rows}x{cols} with ld {ld} does not fit a buffer of {}",
                data.len()
            )));
        }
        Ok(MatRef { data, rows, cols, ld })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn ld(&self) -> usize {
        self.ld
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Quaternion {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        self.data[j * self.ld + i]
    }

    /// Column `j` as a contiguous slice of `rows` elements.
    #[inline]
    pub fn col(&self, j: usize) -> &'a [Quaternion] {
        assert!(j < self.cols);
        &self.data[j * self.ld..j * self.ld + self.rows]
    }

    pub fn submatrix(&self, row: usize, col: usize, rows: usize, cols: usize) -> MatRef<'a> {
        assert!(row + rows <= self.rows && col + cols <= self.cols, "submatrix out of bounds");
        let start = if rows == 0 || cols == 0 { 0 } else { col * self.ld + row };
        let len = required_len(rows, cols, self.ld);
        MatRef { data: &self.data[start..start + len], rows, cols, ld: self.ld }
    }

    pub fn to_owned(&self) -> QuatMatrix {
        QuatMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j))
    }
}

/// Mutable strided view.
#[derive(Debug)]
pub struct MatMut<'a> {
    data: &'a mut [Quaternion],
    rows: usize,
    cols: usize,
    ld: usize,
}

impl<'a> MatMut<'a> {
    pub fn new(data: &'a mut [Quaternion], rows: usize, cols: usize, ld: usize) -> Result<Self> {
        if ld < rows.max(1) || data.len() < required_len(rows, cols, ld) {
            return Err(Error::DimensionMismatch(format!(
                "view {rows}x{cols} with ld {ld} does not fit a buffer of {}",
                data.len()
            )));
        }
        Ok(MatMut { data, rows, cols, ld })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn ld(&self) -> usize {
        self.ld
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Quaternion {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        self.data[j * self.ld + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, q: Quaternion) {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        self.data[j * self.ld + i] = q;
    }

    #[inline]
    pub fn col_mut(&mut self, j: usize) -> &mut [Quaternion] {
        assert!(j < self.cols);
        &mut self.data[j * self.ld..j * self.ld + self.rows]
    }

    pub fn rb(&self) -> MatRef<'_> {
        MatRef { data: self.data, rows: self.rows, cols: self.cols, ld: self.ld }
    }

    pub fn rb_mut(&mut self) -> MatMut<'_> {
        MatMut { data: self.data, rows: self.rows, cols: self.cols, ld: self.ld }
    }

    pub fn submatrix_mut(&mut self, row: usize, col: usize, rows: usize, cols: usize) -> MatMut<'_> {
        assert!(row + rows <= self.rows && col + cols <= self.cols, "submatrix out of bounds");
        let start = if rows == 0 || cols == 0 { 0 } else { col * self.ld + row };
        let len = required_len(rows, cols, self.ld);
        MatMut { data: &mut self.data[start..start + len], rows, cols, ld: self.ld }
    }

    /// Pointer to element `(0, 0)`; elements `(i, j)` live at `i + j * ld`.
    #[inline]
    pub(crate) fn as_mut_ptr(&mut self) -> *mut Quaternion {
        self.data.as_mut_ptr()
    }
}

/// Component distribution for [`random_matrix`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Distribution {
    /// Independent uniform components on `[low, high]`.
    Uniform { low: f64, high: f64 },
    Normal { mean: f64, std_dev: f64 },
}

impl Default for Distribution {
    fn default() -> Self {
        Distribution::Uniform { low: -1.0, high: 1.0 }
    }
}

/// Seeded random matrix; identical seeds give identical matrices on every
/// platform.
pub fn random_matrix(rows: usize, cols: usize, seed: u64, dist: Distribution) -> QuatMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sample: Box<dyn FnMut(&mut ChaCha8Rng) -> f64> = match dist {
        Distribution::Uniform { low, high } => {
            let u = Uniform::new_inclusive(low, high).expect("invalid uniform bounds");
            Box::new(move |r| u.sample(r))
        }
        Distribution::Normal { mean, std_dev } => {
            let n = Normal::new(mean, std_dev).expect("invalid normal parameters");
            Box::new(move |r| n.sample(r))
        }
    };
    QuatMatrix::from_fn(rows, cols, |_, _| {
        let w = sample(&mut rng);
        let x = sample(&mut rng);
        let y = sample(&mut rng);
        let z = sample(&mut rng);
        Quaternion::new(w, x, y, z)
    })
}

/// A single seeded quaternion with components uniform on `[-1, 1]`.
pub fn random_quaternion(seed: u64) -> Quaternion {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Quaternion::new(
        rng.random_range(-1.0..=1.0),
        rng.random_range(-1.0..=1.0),
        rng.random_range(-1.0..=1.0),
        rng.random_range(-1.0..=1.0),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn column_major_adjacency() {
        let m = QuatMatrix::from_fn(3, 2, |i, j| Quaternion::new((i + 10 * j) as f64, 0.0, 0.0, 0.0));
        let s = m.as_slice();
        assert_eq!(s[0].w, 0.0);
        assert_eq!(s[1].w, 1.0);
        assert_eq!(s[2].w, 2.0);
        assert_eq!(s[3].w, 10.0);
    }

    #[test]
    fn padded_leading_dimension() {
        let mut m = QuatMatrix::zeros_with_ld(2, 3, 5);
        m[(1, 2)] = Quaternion::E3;
        assert_eq!(m.as_slice()[2 * 5 + 1], Quaternion::E3);
        assert_eq!(m.iter().count(), 6);
    }

    #[test]
    fn submatrix_of_submatrix_composes() {
        let m = QuatMatrix::from_fn(6, 5, |i, j| Quaternion::new(i as f64, j as f64, 0.0, 0.0));
        let v = m.view().submatrix(1, 1, 4, 3).submatrix(2, 1, 2, 2);
        let direct = m.view().submatrix(3, 2, 2, 2);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(v.get(i, j), direct.get(i, j));
                assert_eq!(v.get(i, j), m[(3 + i, 2 + j)]);
            }
        }
    }

    #[test]
    #[should_panic(expected = "out of bounds")]
    fn submatrix_rejects_overrun() {
        let m = QuatMatrix::zeros(3, 3);
        m.view().submatrix(2, 0, 2, 1);
    }

    #[test]
    fn view_constructor_checks_fit() {
        let buf = vec![Quaternion::ZERO; 7];
        assert!(MatRef::new(&buf, 3, 2, 4).is_ok());
        assert!(MatRef::new(&buf, 3, 3, 4).is_err());
        assert!(MatRef::new(&buf, 3, 1, 2).is_err());
    }

    #[test]
    fn random_is_deterministic_and_bounded() {
        let a = random_matrix(2, 2, 42, Distribution::default());
        let b = random_matrix(2, 2, 42, Distribution::default());
        assert_eq!(a, b);
        assert_ne!(a, random_matrix(2, 2, 43, Distribution::default()));
        let q = random_matrix(1, 1, 0, Distribution::default())[(0, 0)];
        assert!(q.is_finite());
        assert!(q.to_array().iter().all(|c| c.abs() <= 1.0));
    }

    #[test]
    fn random_components_have_zero_mean() {
        // 25_000 quaternions = 10^5 components; std of the mean is ~0.0018.
        let m = random_matrix(250, 100, 7, Distribution::default());
        let mean = m.iter().flat_map(|q| q.to_array()).sum::<f64>() / 1e5;
        assert!(mean.abs() < 0.02, "mean {mean}");
    }

    #[test]
    fn conj_transpose_entries() {
        let m = random_matrix(3, 2, 1, Distribution::default());
        let h = m.conj_transpose();
        assert_eq!((h.rows(), h.cols()), (2, 3));
        assert_eq!(h[(1, 2)], conj(m[(2, 1)]));
    }

    #[test]
    fn qmat_round_trip() {
        let m = random_matrix(5, 3, 9, Distribution::Normal { mean: 0.0, std_dev: 2.0 });
        let mut bytes = Vec::new();
        m.write_qmat(&mut bytes).unwrap();
        assert_eq!(bytes.len(), 16 + 15 * 32);
        assert_eq!(&bytes[..4], b"QMAT");
        assert_eq!(&bytes[4..8], &5u32.to_le_bytes());
        assert_eq!(&bytes[8..12], &3u32.to_le_bytes());
        // first element, first component
        assert_eq!(&bytes[16..24], &m[(0, 0)].w.to_le_bytes());
        assert_eq!(QuatMatrix::read_qmat(bytes.as_slice()).unwrap(), m);
    }

    #[test]
    fn qmat_rejects_bad_input() {
        assert!(matches!(QuatMatrix::read_qmat(&b"QMA"[..]), Err(Error::Format(_))));
        let mut bytes = b"XMAT".to_vec();
        bytes.extend_from_slice(&[0; 12]);
        assert!(matches!(QuatMatrix::read_qmat(bytes.as_slice()), Err(Error::Format(_))));
        let mut bytes = b"QMAT".to_vec();
        bytes.extend_from_slice(&1u32.to_le_bytes());
        bytes.extend_from_slice(&1u32.to_le_bytes());
        bytes.extend_from_slice(&[0; 4 + 16]);
        assert!(matches!(QuatMatrix::read_qmat(bytes.as_slice()), Err(Error::Format(_))));
    }
}
