use serde::{Deserialize, Serialize};

use super::{QMatrix, Rational};
use crate::{Error, Result};

/// A linear subspace of `Q^ambient` in canonical form.
///
/// The basis is the reduced row echelon form of any spanning set with zero
/// rows dropped, so two `Subspace` values are equal (and hash equal) exactly
/// when they represent the same subspace. Kernel counting deduplicates
/// subspaces by hash and depends on this.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Subspace {
    ambient: usize,
    basis: QMatrix,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: QMatrix::zeros(0, ambient),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: QMatrix::identity(ambient),
        }
    }

    /// Canonical subspace spanned by the given row vectors.
    pub fn from_spanning(vectors: &[Vec<Rational>], ambient: usize) -> Self {
        for v in vectors {
            assert_eq!(v.len(), ambient, "spanning vector of wrong length");
        }
        if vectors.is_empty() {
            return Subspace::zero(ambient);
        }
        let (red, pivots) = QMatrix::from_rows(vectors.to_vec()).rref();
        let basis = QMatrix::from_fn(pivots.len(), ambient, |r, c| red.get(r, c).clone());
        Subspace { ambient, basis }
    }

    /// Null space `{v : m v = 0}` of a matrix, canonical in `Q^cols`.
    pub fn kernel_of(m: &QMatrix) -> Self {
        let n = m.cols();
        let (red, pivots) = m.rref();
        let pivot_of_col: Vec<Option<usize>> = {
            let mut map = vec![None; n];
            for (i, &p) in pivots.iter().enumerate() {
                map[p] = Some(i);
            }
            map
        };
        let mut vectors = Vec::with_capacity(n - pivots.len());
        for free in 0..n {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut v = vec![Rational::zero(); n];
            v[free] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                let coeff = red.get(i, free);
                if !coeff.is_zero() {
                    v[p] = -coeff;
                }
            }
            vectors.push(v);
        }
        Subspace::from_spanning(&vectors, n)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &QMatrix {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Reduces `v` modulo the basis; the remainder is zero iff `v` lies in
    /// the subspace.
    pub fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.ambient, "reduce dimension mismatch");
        let mut w = v.to_vec();
        for r in 0..self.basis.rows() {
            let row = self.basis.row(r);
            let pivot = row
                .iter()
                .position(|x| !x.is_zero())
                .expect("canonical basis has no zero rows");
            if w[pivot].is_zero() {
                continue;
            }
            let factor = w[pivot].clone();
            for (wc, bc) in w.iter_mut().zip(row.iter()) {
                if !bc.is_zero() {
                    *wc -= &factor * bc;
                }
            }
        }
        w
    }

    pub fn contains_vector(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(Rational::is_zero)
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient, other.ambient, "ambient dimension mismatch");
        (0..other.basis.rows()).all(|r| self.contains_vector(other.basis.row(r)))
    }

    /// Span of the union of the two subspaces.
    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient dimension mismatch");
        let mut rows = self.basis.row_vecs();
        rows.extend(other.basis.row_vecs());
        Subspace::from_spanning(&rows, self.ambient)
    }

    /// Block-diagonal direct sum: each part is embedded at the next offset.
    pub fn direct_sum(parts: &[&Subspace]) -> Subspace {
        let total: usize = parts.iter().map(|s| s.ambient).sum();
        let mut rows = Vec::new();
        let mut offset = 0;
        for part in parts {
            for r in 0..part.basis.rows() {
                let mut v = vec![Rational::zero(); total];
                for c in 0..part.ambient {
                    v[offset + c] = part.basis.get(r, c).clone();
                }
                rows.push(v);
            }
            offset += part.ambient;
        }
        Subspace::from_spanning(&rows, total)
    }

    /// Projects the subspace onto its first `k` coordinates.
    pub fn project_prefix(&self, k: usize) -> Subspace {
        assert!(k <= self.ambient);
        let rows: Vec<Vec<Rational>> = (0..self.basis.rows())
            .map(|r| self.basis.row(r)[..k].to_vec())
            .collect();
        Subspace::from_spanning(&rows, k)
    }
}

/// Row-echelon accumulator for repeated membership tests and span growth.
///
/// Rows are kept normalized with strictly increasing pivots, but not fully
/// reduced; that is enough for membership and cheaper to maintain.
pub(crate) struct SpanBuilder {
    ambient: usize,
    rows: Vec<(usize, Vec<Rational>)>, // (pivot, normalized row), sorted by pivot
}

impl SpanBuilder {
    pub fn new(ambient: usize) -> Self {
        SpanBuilder {
            ambient,
            rows: Vec::new(),
        }
    }

    pub fn from_subspace(s: &Subspace) -> Self {
        let mut b = SpanBuilder::new(s.ambient_dim());
        for r in 0..s.basis().rows() {
            b.insert(s.basis().row(r).to_vec());
        }
        b
    }

    /// Reduces `v` against the current rows.
    fn reduce(&self, mut v: Vec<Rational>) -> Vec<Rational> {
        for (pivot, row) in &self.rows {
            if v[*pivot].is_zero() {
                continue;
            }
            let factor = v[*pivot].clone();
            for (vc, rc) in v.iter_mut().zip(row.iter()) {
                if !rc.is_zero() {
                    *vc -= &factor * rc;
                }
            }
        }
        v
    }

    /// Inserts `v` into the span. Returns `true` if it enlarged the span.
    pub fn insert(&mut self, v: Vec<Rational>) -> bool {
        assert_eq!(v.len(), self.ambient);
        let mut w = self.reduce(v);
        let Some(pivot) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[pivot].recip();
        if inv != Rational::one() {
            for x in w.iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let at = self.rows.partition_point(|(p, _)| *p < pivot);
        self.rows.insert(at, (pivot, w));
        true
    }
}

/// Coset representatives completing a coboundary basis to a cocycle basis.
///
/// Scans the canonical basis of `cocycles` in order and keeps the rows that
/// are independent modulo `coboundaries`; the selection is therefore a pure
/// function of the two subspaces. The returned rows are quotient-basis
/// representatives in ambient coordinates.
pub fn quotient_representatives(cocycles: &Subspace, coboundaries: &Subspace) -> QMatrix {
    assert!(
        cocycles.contains(coboundaries),
        "coboundaries must be contained in cocycles"
    );
    let mut span = SpanBuilder::from_subspace(coboundaries);
    let mut reps: Vec<Vec<Rational>> = Vec::new();
    for r in 0..cocycles.basis().rows() {
        let row = cocycles.basis().row(r).to_vec();
        if span.insert(row.clone()) {
            reps.push(row);
        }
    }
    if reps.is_empty() {
        QMatrix::zeros(0, cocycles.ambient_dim())
    } else {
        QMatrix::from_rows(reps)
    }
}

/// Matrix of the map induced on quotients by a filtration-respecting linear map.
///
/// `map` is a matrix from the source ambient space to the destination ambient
/// space. Both quotients use the representative bases produced by
/// [`quotient_representatives`], so repeated calls are coordinate-compatible.
/// Fails if the containments `coboundaries ⊆ cocycles` do not hold or if the
/// map does not carry cocycles to cocycles and coboundaries to coboundaries.
pub fn induced_map_on_quotient(
    map: &QMatrix,
    src_cocycles: &Subspace,
    src_coboundaries: &Subspace,
    dst_cocycles: &Subspace,
    dst_coboundaries: &Subspace,
) -> Result<QMatrix> {
    if map.cols() != src_cocycles.ambient_dim() || map.rows() != dst_cocycles.ambient_dim() {
        return Err(Error::Dimension(format!(
            "map is {}x{}, expected {}x{}",
            map.rows(),
            map.cols(),
            dst_cocycles.ambient_dim(),
            src_cocycles.ambient_dim()
        )));
    }
    if !src_cocycles.contains(src_coboundaries) {
        return Err(Error::Filtration("source coboundaries not inside cocycles"));
    }
    if !dst_cocycles.contains(dst_coboundaries) {
        return Err(Error::Filtration(
            "destination coboundaries not inside cocycles",
        ));
    }
    for r in 0..src_cocycles.basis().rows() {
        let image = map.apply(src_cocycles.basis().row(r));
        if !dst_cocycles.contains_vector(&image) {
            return Err(Error::Filtration("map does not send cocycles to cocycles"));
        }
    }
    for r in 0..src_coboundaries.basis().rows() {
        let image = map.apply(src_coboundaries.basis().row(r));
        if !dst_coboundaries.contains_vector(&image) {
            return Err(Error::Filtration(
                "map does not send coboundaries to coboundaries",
            ));
        }
    }

    let src_reps = quotient_representatives(src_cocycles, src_coboundaries);
    let dst_reps = quotient_representatives(dst_cocycles, dst_coboundaries);
    let h_src = src_reps.rows();
    let h_dst = dst_reps.rows();

    if h_src == 0 || h_dst == 0 {
        return Ok(QMatrix::zeros(h_dst, h_src));
    }

    // Express each image in the basis (dst representatives | dst coboundary
    // basis); the representative coefficients are the induced matrix column.
    let structural = dst_reps
        .transpose()
        .hstack(&dst_coboundaries.basis().transpose());
    let images = QMatrix::from_fn(map.rows(), h_src, |r, c| {
        map.apply(src_reps.row(c))[r].clone()
    });
    let solution = structural
        .solve_columns(&images)
        .expect("images verified to lie in cocycles + coboundaries");
    Ok(QMatrix::from_fn(h_dst, h_src, |r, c| {
        solution.get(r, c).clone()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vecq(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| Rational::from_int(x)).collect()
    }

    #[test]
    fn kernel_of_identity_is_zero() {
        let k = Subspace::kernel_of(&QMatrix::identity(3));
        assert_eq!(k, Subspace::zero(3));
    }

    #[test]
    fn kernel_of_zero_map_is_full() {
        let k = Subspace::kernel_of(&QMatrix::zeros(2, 3));
        assert_eq!(k, Subspace::full(3));
    }

    #[test]
    fn kernel_of_single_equation() {
        // x + y = 0 in Q^3: spanned by (1,-1,0) and (0,0,1).
        let m = QMatrix::from_int_rows(&[&[1, 1, 0]]);
        let k = Subspace::kernel_of(&m);
        assert_eq!(k.dim(), 2);
        for r in 0..k.basis().rows() {
            let v = k.basis().row(r);
            assert!(m.apply(v).iter().all(Rational::is_zero));
        }
        assert_eq!(k.dim() + m.rank(), m.cols());
        assert!(k.contains_vector(&vecq(&[1, -1, 0])));
        assert!(k.contains_vector(&vecq(&[0, 0, 1])));
    }

    #[test]
    fn spanning_is_canonical() {
        let a = Subspace::from_spanning(&[vecq(&[1, 0]), vecq(&[0, 1])], 2);
        let b = Subspace::from_spanning(&[vecq(&[1, 1]), vecq(&[1, -1])], 2);
        assert_eq!(a, b);
        assert_eq!(a, Subspace::full(2));
        assert_eq!(Subspace::from_spanning(&[], 2), Subspace::zero(2));
        let c = Subspace::from_spanning(&[vecq(&[2, 4]), vecq(&[1, 2])], 2);
        assert_eq!(c.dim(), 1);
        assert_eq!(c.basis().row(0), &vecq(&[1, 2])[..]);
    }

    #[test]
    fn quotient_representatives_complete_basis() {
        let cocycles = Subspace::full(3);
        let coboundaries = Subspace::from_spanning(&[vecq(&[1, 0, 0])], 3);
        let reps = quotient_representatives(&cocycles, &coboundaries);
        assert_eq!(reps.rows(), 2);
    }

    #[test]
    fn induced_identity_map() {
        let space = Subspace::full(3);
        let bdry = Subspace::from_spanning(&[vecq(&[1, 0, 0])], 3);
        let m =
            induced_map_on_quotient(&QMatrix::identity(3), &space, &bdry, &space, &bdry).unwrap();
        assert_eq!(m, QMatrix::identity(2));
    }

    #[test]
    fn induced_zero_map() {
        let space = Subspace::full(2);
        let zero = Subspace::zero(2);
        let m =
            induced_map_on_quotient(&QMatrix::zeros(2, 2), &space, &zero, &space, &zero).unwrap();
        assert_eq!(m, QMatrix::zeros(2, 2));
    }

    #[test]
    fn induced_map_rejects_filtration_violation() {
        // Map sends the coboundary e1 to e2, which is not a destination
        // coboundary.
        let space = Subspace::full(2);
        let bdry = Subspace::from_spanning(&[vecq(&[1, 0])], 2);
        let swap = QMatrix::from_int_rows(&[&[0, 1], &[1, 0]]);
        let err = induced_map_on_quotient(&swap, &space, &bdry, &space, &bdry);
        assert!(matches!(err, Err(Error::Filtration(_))));
    }
}
