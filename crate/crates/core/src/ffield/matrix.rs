use std::fmt;
use std::sync::Arc;

use super::field::{Fe, Field};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
enum Storage {
    /// e = 1: each row padded to whole 64-bit words, bit i of word w is column 64w+i.
    Bits(Vec<u64>),
    /// 2 <= e <= 8.
    Bytes(Vec<u8>),
    /// 9 <= e <= 16.
    Wide(Vec<u16>),
}

/// Dense row-major matrix over GF(2^e).
#[derive(Clone)]
pub struct FieldMatrix {
    field: Arc<Field>,
    rows: usize,
    cols: usize,
    stride: usize,
    data: Storage,
}

impl PartialEq for FieldMatrix {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field
            && self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
    }
}
impl Eq for FieldMatrix {}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "FieldMatrix {}x{} over {:?}",
            self.rows, self.cols, self.field
        )?;
        for r in 0..self.rows.min(16) {
            let row: Vec<Fe> = (0..self.cols.min(24)).map(|c| self.get(r, c)).collect();
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

fn stride_for(field: &Field, cols: usize) -> usize {
    if field.degree() == 1 {
        cols.div_ceil(64)
    } else {
        cols
    }
}

impl FieldMatrix {
    pub fn zeros(field: &Arc<Field>, rows: usize, cols: usize) -> Self {
        let stride = stride_for(field, cols);
        let data = match field.degree() {
            1 => Storage::Bits(vec![0; rows * stride]),
            2..=8 => Storage::Bytes(vec![0; rows * stride]),
            _ => Storage::Wide(vec![0; rows * stride]),
        };
        FieldMatrix {
            field: field.clone(),
            rows,
            cols,
            stride,
            data,
        }
    }

    pub fn identity(field: &Arc<Field>, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_fn(
        field: &Arc<Field>,
        rows: usize,
        cols: usize,
        f: impl Fn(usize, usize) -> Fe,
    ) -> Self {
        let mut m = Self::zeros(field, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                let v = f(r, c);
                if v != 0 {
                    m.set(r, c, v);
                }
            }
        }
        m
    }

    pub fn random(
        field: &Arc<Field>,
        rows: usize,
        cols: usize,
        rng: &mut crate::rng::SeededRng,
    ) -> Self {
        let mut m = Self::zeros(field, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                let v = rng.element(field);
                if v != 0 {
                    m.set(r, c, v);
                }
            }
        }
        m
    }

    pub fn from_rows(field: &Arc<Field>, rows: &[Vec<Fe>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension("ragged rows".into()));
            }
            for (j, &v) in row.iter().enumerate() {
                if v as usize >= field.order() {
                    return Err(Error::Format(format!("{v} is not an element of {field:?}")));
                }
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Fe {
        debug_assert!(r < self.rows && c < self.cols);
        match &self.data {
            Storage::Bits(d) => ((d[r * self.stride + c / 64] >> (c % 64)) & 1) as Fe,
            Storage::Bytes(d) => d[r * self.stride + c] as Fe,
            Storage::Wide(d) => d[r * self.stride + c],
        }
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Fe) {
        debug_assert!(r < self.rows && c < self.cols);
        match &mut self.data {
            Storage::Bits(d) => {
                let w = &mut d[r * self.stride + c / 64];
                if v & 1 == 1 {
                    *w |= 1 << (c % 64);
                } else {
                    *w &= !(1 << (c % 64));
                }
            }
            Storage::Bytes(d) => d[r * self.stride + c] = v as u8,
            Storage::Wide(d) => d[r * self.stride + c] = v,
        }
    }

    fn same_shape_field(&self, other: &FieldMatrix) -> Result<()> {
        if *self.field != *other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    /// `self[dst] += c * src[src_row]`; the two matrices must have equal column counts.
    pub fn axpy_row_from(&mut self, dst: usize, src: &FieldMatrix, src_row: usize, c: Fe) {
        if c == 0 {
            return;
        }
        debug_assert_eq!(self.cols, src.cols);
        let FieldMatrix {
            field,
            data,
            stride: s,
            ..
        } = self;
        let (field, s) = (&**field, *s);
        match (data, &src.data) {
            (Storage::Bits(d), Storage::Bits(sd)) => {
                for (a, b) in d[dst * s..dst * s + s]
                    .iter_mut()
                    .zip(&sd[src_row * s..src_row * s + s])
                {
                    *a ^= *b;
                }
            }
            (Storage::Bytes(d), Storage::Bytes(sd)) => {
                let t = field.mul_row(c);
                axpy_bytes(
                    &mut d[dst * s..dst * s + s],
                    &sd[src_row * s..src_row * s + s],
                    t,
                );
            }
            (Storage::Wide(d), Storage::Wide(sd)) => {
                axpy_wide(
                    field,
                    &mut d[dst * s..dst * s + s],
                    &sd[src_row * s..src_row * s + s],
                    c,
                );
            }
            _ => panic!("storage mismatch"),
        }
    }

    /// Row operation inside one matrix: `row[dst] += c * row[src]`.
    pub fn axpy_row(&mut self, dst: usize, src: usize, c: Fe) {
        if c == 0 || dst == src {
            assert!(dst != src || c == 0, "axpy_row with dst == src");
            return;
        }
        let FieldMatrix {
            field,
            data,
            stride: s,
            ..
        } = self;
        let (field, s) = (&**field, *s);
        fn split<T>(d: &mut [T], dst: usize, src: usize, s: usize) -> (&mut [T], &[T]) {
            if dst < src {
                let (a, b) = d.split_at_mut(src * s);
                (&mut a[dst * s..dst * s + s], &b[..s])
            } else {
                let (a, b) = d.split_at_mut(dst * s);
                (&mut b[..s], &a[src * s..src * s + s])
            }
        }
        match data {
            Storage::Bits(d) => {
                let (a, b) = split(d, dst, src, s);
                for (x, y) in a.iter_mut().zip(b) {
                    *x ^= *y;
                }
            }
            Storage::Bytes(d) => {
                let t = field.mul_row(c);
                let (a, b) = split(d, dst, src, s);
                axpy_bytes(a, b, t);
            }
            Storage::Wide(d) => {
                let (a, b) = split(d, dst, src, s);
                axpy_wide(field, a, b, c);
            }
        }
    }

    pub fn scale_row(&mut self, r: usize, c: Fe) {
        if c == 1 {
            return;
        }
        let FieldMatrix {
            field,
            data,
            stride: s,
            ..
        } = self;
        let (field, s) = (&**field, *s);
        match data {
            Storage::Bits(d) => {
                if c == 0 {
                    d[r * s..r * s + s].fill(0);
                }
            }
            Storage::Bytes(d) => {
                let t = field.mul_row(c);
                for x in &mut d[r * s..r * s + s] {
                    *x = t[*x as usize];
                }
            }
            Storage::Wide(d) => {
                for x in &mut d[r * s..r * s + s] {
                    *x = field.mul(*x, c);
                }
            }
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        match &mut self.data {
            Storage::Bits(d) => swap_chunks(d, a, b, s),
            Storage::Bytes(d) => swap_chunks(d, a, b, s),
            Storage::Wide(d) => swap_chunks(d, a, b, s),
        }
    }

    /// First column `>= from` with a nonzero entry in row `r`.
    pub fn leading_col(&self, r: usize, from: usize) -> Option<usize> {
        let s = self.stride;
        match &self.data {
            Storage::Bits(d) => {
                let row = &d[r * s..r * s + s];
                let mut w = from / 64;
                if w >= s {
                    return None;
                }
                let mut word = row[w] & (!0u64 << (from % 64));
                loop {
                    if word != 0 {
                        let c = w * 64 + word.trailing_zeros() as usize;
                        return (c < self.cols).then_some(c);
                    }
                    w += 1;
                    if w >= s {
                        return None;
                    }
                    word = row[w];
                }
            }
            Storage::Bytes(d) => d[r * s + from.min(s)..r * s + s]
                .iter()
                .position(|&x| x != 0)
                .map(|p| p + from),
            Storage::Wide(d) => d[r * s + from.min(s)..r * s + s]
                .iter()
                .position(|&x| x != 0)
                .map(|p| p + from),
        }
    }

    pub fn row_is_zero(&self, r: usize) -> bool {
        self.leading_col(r, 0).is_none()
    }

    pub fn is_zero(&self) -> bool {
        match &self.data {
            Storage::Bits(d) => d.iter().all(|&x| x == 0),
            Storage::Bytes(d) => d.iter().all(|&x| x == 0),
            Storage::Wide(d) => d.iter().all(|&x| x == 0),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| (0..self.cols).all(|c| self.get(r, c) == (r == c) as Fe))
    }

    /// Appends a zero row and returns its index.
    pub fn push_zero_row(&mut self) -> usize {
        let s = self.stride;
        match &mut self.data {
            Storage::Bits(d) => d.resize(d.len() + s, 0),
            Storage::Bytes(d) => d.resize(d.len() + s, 0),
            Storage::Wide(d) => d.resize(d.len() + s, 0),
        }
        self.rows += 1;
        self.rows - 1
    }

    /// Appends a copy of `src[r]`.
    pub fn push_row_from(&mut self, src: &FieldMatrix, r: usize) -> usize {
        let i = self.push_zero_row();
        self.axpy_row_from(i, src, r, 1);
        i
    }

    pub fn truncate_rows(&mut self, n: usize) {
        let s = self.stride;
        match &mut self.data {
            Storage::Bits(d) => d.truncate(n * s),
            Storage::Bytes(d) => d.truncate(n * s),
            Storage::Wide(d) => d.truncate(n * s),
        }
        self.rows = self.rows.min(n);
    }

    /// Row `r` as a 1 x cols matrix.
    pub fn row(&self, r: usize) -> FieldMatrix {
        self.select_rows(&[r])
    }

    pub fn select_rows(&self, rows: &[usize]) -> FieldMatrix {
        let mut m = FieldMatrix::zeros(&self.field, 0, self.cols);
        for &r in rows {
            m.push_row_from(self, r);
        }
        m
    }

    pub fn row_values(&self, r: usize) -> Vec<Fe> {
        (0..self.cols).map(|c| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Fe>> {
        (0..self.rows).map(|r| self.row_values(r)).collect()
    }

    pub fn select_cols(&self, cols: &[usize]) -> FieldMatrix {
        FieldMatrix::from_fn(&self.field, self.rows, cols.len(), |r, c| {
            self.get(r, cols[c])
        })
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        self.same_shape_field(other)?;
        if self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "vstack {} vs {} columns",
                self.cols, other.cols
            )));
        }
        let mut m = self.clone();
        for r in 0..other.rows {
            m.push_row_from(other, r);
        }
        Ok(m)
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        self.same_shape_field(other)?;
        if self.rows != other.rows {
            return Err(Error::Dimension(format!(
                "hstack {} vs {} rows",
                self.rows, other.rows
            )));
        }
        let c0 = self.cols;
        Ok(FieldMatrix::from_fn(
            &self.field,
            self.rows,
            c0 + other.cols,
            |r, c| {
                if c < c0 {
                    self.get(r, c)
                } else {
                    other.get(r, c - c0)
                }
            },
        ))
    }

    pub fn transpose(&self) -> FieldMatrix {
        let mut t = FieldMatrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            let mut c = self.leading_col(r, 0);
            while let Some(cc) = c {
                t.set(cc, r, self.get(r, cc));
                c = if cc + 1 < self.cols {
                    self.leading_col(r, cc + 1)
                } else {
                    None
                };
            }
        }
        t
    }

    pub fn add(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        self.same_shape_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("add: shape mismatch".into()));
        }
        let mut m = self.clone();
        m.add_assign(other);
        Ok(m)
    }

    /// Entry-wise addition in place; shapes must agree.
    pub fn add_assign(&mut self, other: &FieldMatrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        match (&mut self.data, &other.data) {
            (Storage::Bits(a), Storage::Bits(b)) => a.iter_mut().zip(b).for_each(|(x, y)| *x ^= *y),
            (Storage::Bytes(a), Storage::Bytes(b)) => {
                a.iter_mut().zip(b).for_each(|(x, y)| *x ^= *y)
            }
            (Storage::Wide(a), Storage::Wide(b)) => a.iter_mut().zip(b).for_each(|(x, y)| *x ^= *y),
            _ => panic!("storage mismatch"),
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &FieldMatrix, c: Fe) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for r in 0..self.rows {
            self.axpy_row_from(r, other, r, c);
        }
    }

    pub fn scale(&self, c: Fe) -> FieldMatrix {
        let mut m = self.clone();
        for r in 0..m.rows {
            m.scale_row(r, c);
        }
        m
    }

    /// Adds `c` to every diagonal entry.
    pub fn add_scalar(&self, c: Fe) -> FieldMatrix {
        let mut m = self.clone();
        for i in 0..m.rows.min(m.cols) {
            let v = m.get(i, i) ^ c;
            m.set(i, i, v);
        }
        m
    }

    pub fn trace(&self) -> Fe {
        (0..self.rows.min(self.cols)).fold(0, |acc, i| acc ^ self.get(i, i))
    }

    /// Exact product by row combination (word-parallel for e = 1).
    pub fn multiply(&self, b: &FieldMatrix) -> Result<FieldMatrix> {
        self.same_shape_field(b)?;
        if self.cols != b.rows {
            return Err(Error::Dimension(format!(
                "multiply {}x{} by {}x{}",
                self.rows, self.cols, b.rows, b.cols
            )));
        }
        let mut out = FieldMatrix::zeros(&self.field, self.rows, b.cols);
        for i in 0..self.rows {
            let mut k = self.leading_col(i, 0);
            while let Some(kk) = k {
                out.axpy_row_from(i, b, kk, self.get(i, kk));
                k = if kk + 1 < self.cols {
                    self.leading_col(i, kk + 1)
                } else {
                    None
                };
            }
        }
        Ok(out)
    }

    /// Product where the caller guarantees compatible shapes.
    pub fn mul(&self, b: &FieldMatrix) -> FieldMatrix {
        self.multiply(b).expect("compatible shapes")
    }

    /// Kronecker product with block structure `a[i][j] * b`.
    pub fn kronecker(&self, b: &FieldMatrix) -> Result<FieldMatrix> {
        self.same_shape_field(b)?;
        let (br, bc) = (b.rows, b.cols);
        let mut out = FieldMatrix::zeros(&self.field, self.rows * br, self.cols * bc);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..br {
                    for l in 0..bc {
                        let v = b.get(k, l);
                        if v != 0 {
                            out.set(i * br + k, j * bc + l, self.field.mul(a, v));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form and pivot columns. Pivoting takes the
    /// leftmost nonzero column and the topmost available row.
    pub fn rref(&self) -> (FieldMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for c in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(r) = (row..self.rows).find(|&r| self.get(r, c) != 0) else {
                continue;
            };
            self.swap_rows(row, r);
            let inv = self.field.inv(self.get(row, c));
            self.scale_row(row, inv);
            for other in 0..self.rows {
                if other != row {
                    let f = self.get(other, c);
                    if f != 0 {
                        self.axpy_row(other, row, f);
                    }
                }
            }
            pivots.push(c);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        // forward elimination suffices for rank
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..m.rows).find(|&r| m.get(r, c) != 0) else {
                continue;
            };
            m.swap_rows(rank, p);
            let inv = m.field.inv(m.get(rank, c));
            for r in rank + 1..m.rows {
                let f = m.get(r, c);
                if f != 0 {
                    m.axpy_row(r, rank, m.field.mul(f, inv));
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        rank
    }

    /// Canonical basis (reduced echelon rows) of the row space.
    pub fn row_space_basis(&self) -> FieldMatrix {
        let (mut r, p) = self.rref();
        r.truncate_rows(p.len());
        r
    }

    /// Rows span `{x : self * x^T = 0}`, returned in reduced echelon form.
    pub fn nullspace_basis(&self) -> FieldMatrix {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut basis = FieldMatrix::zeros(&self.field, free.len(), self.cols);
        for (i, &f) in free.iter().enumerate() {
            basis.set(i, f, 1);
            for (pr, &pc) in pivots.iter().enumerate() {
                let v = r.get(pr, f);
                if v != 0 {
                    basis.set(i, pc, v);
                }
            }
        }
        basis.row_space_basis()
    }

    /// Rows span `{v : v * self = 0}`.
    pub fn left_nullspace_basis(&self) -> FieldMatrix {
        self.transpose().nullspace_basis()
    }

    /// Some `x` with `self * x = b`, free variables set to zero; `None`
    /// when the system is inconsistent.
    pub fn solve(&self, b: &FieldMatrix) -> Result<Option<FieldMatrix>> {
        self.same_shape_field(b)?;
        if self.rows != b.rows {
            return Err(Error::Dimension(format!(
                "solve: {} vs {} rows",
                self.rows, b.rows
            )));
        }
        let aug = self.hstack(b)?;
        let (r, pivots) = aug.rref();
        let n = self.cols;
        if pivots.iter().any(|&p| p >= n) {
            return Ok(None);
        }
        let mut x = FieldMatrix::zeros(&self.field, n, b.cols);
        for (pr, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, r.get(pr, n + j));
            }
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<FieldMatrix> {
        if !self.is_square() {
            return None;
        }
        let id = FieldMatrix::identity(&self.field, self.rows);
        let aug = self.hstack(&id).ok()?;
        let (r, pivots) = aug.rref();
        if pivots.len() < self.rows || pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        Some(FieldMatrix::from_fn(
            &self.field,
            self.rows,
            self.rows,
            |i, j| r.get(i, self.cols + j),
        ))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Row vector `v` (1 x rows) times `self`.
    pub fn vec_mul(&self, v: &FieldMatrix) -> FieldMatrix {
        v.mul(self)
    }

    /// Matrix power by repeated squaring.
    pub fn pow(&self, mut k: u64) -> FieldMatrix {
        let mut base = self.clone();
        let mut acc = FieldMatrix::identity(&self.field, self.rows);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Same matrix with entries mapped into a larger field.
    pub fn embed(&self, big: &Arc<Field>) -> Result<FieldMatrix> {
        let mut m = FieldMatrix::zeros(big, self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self.get(r, c);
                if v != 0 {
                    m.set(r, c, self.field.embed_into(v, big)?);
                }
            }
        }
        Ok(m)
    }

    /// Applies a permutation to the columns of a row: entry `c` moves to `perm[c]`.
    pub fn permute_row(&self, r: usize, perm: &[u32]) -> FieldMatrix {
        let mut out = FieldMatrix::zeros(&self.field, 1, self.cols);
        let mut c = self.leading_col(r, 0);
        while let Some(cc) = c {
            out.set(0, perm[cc] as usize, self.get(r, cc));
            c = if cc + 1 < self.cols {
                self.leading_col(r, cc + 1)
            } else {
                None
            };
        }
        out
    }

    /// Storage kind used by the FFMX writer.
    pub(crate) fn words(&self) -> Option<&[u64]> {
        match &self.data {
            Storage::Bits(d) => Some(d),
            _ => None,
        }
    }

    pub(crate) fn words_mut(&mut self) -> Option<&mut [u64]> {
        match &mut self.data {
            Storage::Bits(d) => Some(d),
            _ => None,
        }
    }
}

fn swap_chunks<T>(d: &mut [T], a: usize, b: usize, s: usize) {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let (x, y) = d.split_at_mut(hi * s);
    x[lo * s..lo * s + s].swap_with_slice(&mut y[..s]);
}

#[inline]
fn axpy_bytes(dst: &mut [u8], src: &[u8], table: &[u8]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= table[*s as usize];
    }
}

#[inline]
fn axpy_wide(field: &Field, dst: &mut [u16], src: &[u16], c: Fe) {
    let lc = field.log_of(c) as usize;
    for (d, &s) in dst.iter_mut().zip(src) {
        if s != 0 {
            *d ^= field.exp_at(lc + field.log_of(s) as usize);
        }
    }
}
