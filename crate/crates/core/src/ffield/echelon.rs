//! Incremental semi-echelon basis. Vectors are added one at a time; each
//! stored row has a unit pivot that is zero in every later row, so
//! reduction is a single pass in insertion order.

use std::sync::Arc;

use super::field::{Fe, Field};
use super::matrix::FieldMatrix;

#[derive(Clone, Debug)]
pub struct Echelon {
    field: Arc<Field>,
    cols: usize,
    rows: FieldMatrix,
    pivots: Vec<usize>,
    /// `rows[i] = sum_j coeffs[i][j] * inserted[j]`, kept when tracking.
    coeffs: Option<Vec<Vec<Fe>>>,
    inserted: FieldMatrix,
}

impl Echelon {
    pub fn new(field: &Arc<Field>, cols: usize) -> Self {
        Echelon {
            field: field.clone(),
            cols,
            rows: FieldMatrix::zeros(field, 0, cols),
            pivots: Vec::new(),
            coeffs: None,
            inserted: FieldMatrix::zeros(field, 0, cols),
        }
    }

    /// Like `new`, but remembers how each echelon row arose so that
    /// `coordinates` can express vectors in the inserted basis.
    pub fn with_coordinates(field: &Arc<Field>, cols: usize) -> Self {
        let mut e = Echelon::new(field, cols);
        e.coeffs = Some(Vec::new());
        e
    }

    pub fn len(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pivots.is_empty()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// The independent vectors exactly as they were inserted.
    pub fn inserted(&self) -> &FieldMatrix {
        &self.inserted
    }

    /// The echelonised rows.
    pub fn echelon_rows(&self) -> &FieldMatrix {
        &self.rows
    }

    /// Reduces row `r` of `v` in place; returns the coefficients used
    /// against each echelon row.
    pub fn reduce_row(&self, v: &mut FieldMatrix, r: usize) -> Vec<Fe> {
        let mut used = vec![0; self.pivots.len()];
        for (i, &p) in self.pivots.iter().enumerate() {
            let c = v.get(r, p);
            if c != 0 {
                v.axpy_row_from(r, &self.rows, i, c);
                used[i] = c;
            }
        }
        used
    }

    pub fn contains(&self, v: &FieldMatrix, r: usize) -> bool {
        let mut w = v.row(r);
        self.reduce_row(&mut w, 0);
        w.row_is_zero(0)
    }

    /// Adds row `r` of `v` if it is independent; returns whether it was.
    pub fn insert(&mut self, v: &FieldMatrix, r: usize) -> bool {
        let mut w = v.row(r);
        let used = self.reduce_row(&mut w, 0);
        let Some(p) = w.leading_col(0, 0) else {
            return false;
        };
        let inv = self.field.inv(w.get(0, p));
        w.scale_row(0, inv);
        if let Some(coeffs) = &mut self.coeffs {
            let k = self.inserted.rows();
            let mut t = vec![0; k + 1];
            t[k] = 1;
            for (i, &c) in used.iter().enumerate() {
                if c != 0 {
                    for (j, &x) in coeffs[i].iter().enumerate() {
                        t[j] ^= self.field.mul(c, x);
                    }
                }
            }
            for x in t.iter_mut() {
                *x = self.field.mul(*x, inv);
            }
            coeffs.push(t);
        }
        self.rows.push_row_from(&w, 0);
        self.inserted.push_row_from(v, r);
        self.pivots.push(p);
        true
    }

    /// Coordinates of row `r` of `v` in the inserted basis, or `None` when
    /// outside the span. Requires `with_coordinates`.
    pub fn coordinates(&self, v: &FieldMatrix, r: usize) -> Option<Vec<Fe>> {
        let coeffs = self
            .coeffs
            .as_ref()
            .expect("echelon built without coordinate tracking");
        let mut w = v.row(r);
        let used = self.reduce_row(&mut w, 0);
        if !w.row_is_zero(0) {
            return None;
        }
        let mut out = vec![0; self.inserted.rows()];
        for (i, &c) in used.iter().enumerate() {
            if c != 0 {
                for (j, &x) in coeffs[i].iter().enumerate() {
                    out[j] ^= self.field.mul(c, x);
                }
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;

    #[test]
    fn coordinates_reconstruct_vectors() {
        let f = Field::gf(2).unwrap();
        let mut rng = SeededRng::new(3);
        let mut ech = Echelon::with_coordinates(&f, 12);
        let m = FieldMatrix::from_fn(&f, 9, 12, |_, _| 0);
        let mut m = m;
        for r in 0..9 {
            for c in 0..12 {
                m.set(r, c, rng.element(&f));
            }
        }
        for r in 0..9 {
            ech.insert(&m, r);
        }
        assert_eq!(ech.len(), m.rank());
        let basis = ech.inserted().clone();
        for r in 0..9 {
            let c = ech.coordinates(&m, r).unwrap();
            let cv = FieldMatrix::from_rows(&f, &[c]).unwrap();
            assert_eq!(cv.mul(&basis), m.row(r));
        }
    }
}
