//! Incremental exact linear algebra over a field: detect the first linear
//! dependence in a stream of vectors and report its coefficients.

use crate::number::poly::Field;

/// Row-echelon accumulator.  Each inserted vector is reduced against the
/// stored rows; when it reduces to zero, the combination expressing it in
/// terms of the previously inserted vectors is returned.
pub struct SpanSolver<K: Field> {
    dim: usize,
    // (pivot column, reduced row, combination over inserted vectors)
    rows: Vec<(usize, Vec<K>, Vec<K>)>,
    inserted: usize,
}

impl<K: Field> SpanSolver<K> {
    pub fn new(dim: usize) -> Self {
        SpanSolver {
            dim,
            rows: Vec::new(),
            inserted: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Insert a vector.  Returns `Some(c)` with `sum_j c_j * v_j = 0`
    /// (c over all vectors inserted so far, last entry = 1) when the new
    /// vector is dependent on the earlier ones, `None` otherwise.
    pub fn insert(&mut self, v: Vec<K>) -> Option<Vec<K>> {
        assert_eq!(v.len(), self.dim);
        let idx = self.inserted;
        self.inserted += 1;
        let mut row = v;
        let mut comb = vec![K::zero(); idx + 1];
        comb[idx] = K::one();
        for (pivot, base, base_comb) in &self.rows {
            if row[*pivot].is_zero() {
                continue;
            }
            let factor = row[*pivot].clone();
            for (r, b) in row.iter_mut().zip(base.iter()) {
                *r = r.sub(&factor.mul(b));
            }
            for (j, bc) in base_comb.iter().enumerate() {
                comb[j] = comb[j].sub(&factor.mul(bc));
            }
        }
        match row.iter().position(|c| !c.is_zero()) {
            None => Some(comb),
            Some(pivot) => {
                let inv = row[pivot].inv();
                for r in row.iter_mut() {
                    *r = r.mul(&inv);
                }
                for c in comb.iter_mut() {
                    *c = c.mul(&inv);
                }
                self.rows.push((pivot, row, comb));
                None
            }
        }
    }
}
