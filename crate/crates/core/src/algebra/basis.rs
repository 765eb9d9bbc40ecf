use super::matrix::Matrix;
use super::scalar::{Field, Scalar};
use super::AlgebraError;

#[derive(Clone, Debug)]
struct EchelonRow {
    pivot: usize,
    values: Vec<Scalar>,
    /// Coefficients over the original rows that produce `values`.
    combination: Vec<Scalar>,
}

/// An ordered list of linearly independent row vectors together with an
/// echelon form of their span.
///
/// Echelon row `i` is reduced against echelon rows `0..i`, so it is zero at
/// their pivot columns; its pivot is its first nonzero column. Reducing a
/// vector against the echelon rows in insertion order therefore clears every
/// pivot column, and a vector lies in the span exactly when nothing is left.
#[derive(Clone, Debug)]
pub struct RowBasis {
    field: Field,
    width: usize,
    rows: Vec<Vec<Scalar>>,
    echelon: Vec<EchelonRow>,
}

/// Outcome of reducing a vector against the basis.
struct Reduction {
    residual: Vec<Scalar>,
    coefficients: Vec<Scalar>,
    ops: u64,
}

impl RowBasis {
    pub fn new(field: Field, width: usize) -> RowBasis {
        RowBasis { field, width, rows: Vec::new(), echelon: Vec::new() }
    }

    /// Builds a basis from rows that must be linearly independent.
    pub fn from_independent_rows(field: Field, width: usize, rows: impl IntoIterator<Item = Vec<Scalar>>) -> Result<RowBasis, AlgebraError> {
        let mut basis = RowBasis::new(field, width);
        for (i, row) in rows.into_iter().enumerate() {
            if !basis.insert(row)? {
                return Err(AlgebraError::NotFullRowRank(i));
            }
        }
        Ok(basis)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.echelon.iter().map(|e| e.pivot).collect()
    }

    fn check(&self, v: &[Scalar]) -> Result<(), AlgebraError> {
        if v.len() != self.width {
            return Err(AlgebraError::Shape(format!("vector of length {} against basis of width {}", v.len(), self.width)));
        }
        if let Some(bad) = v.iter().find(|s| s.field() != self.field) {
            return Err(AlgebraError::FieldMismatch(self.field, bad.field()));
        }
        Ok(())
    }

    fn reduce(&self, v: &[Scalar]) -> Reduction {
        let mut residual = v.to_vec();
        let mut coefficients = vec![self.field.zero(); self.rows.len()];
        let mut ops = 0u64;
        for e in &self.echelon {
            if residual[e.pivot].is_zero() {
                continue;
            }
            let factor = &residual[e.pivot] / &e.values[e.pivot];
            let neg = -&factor;
            for (r, x) in residual.iter_mut().zip(&e.values).skip(e.pivot) {
                r.add_mul_assign(&neg, x);
            }
            for (c, x) in coefficients.iter_mut().zip(&e.combination) {
                c.add_mul_assign(&factor, x);
            }
            ops += (self.width - e.pivot + e.combination.len()) as u64;
        }
        Reduction { residual, coefficients, ops }
    }

    /// Coefficients `c` with `c * rows = v`, or `None` when `v` is outside the span.
    pub fn express(&self, v: &[Scalar]) -> Result<Option<Vec<Scalar>>, AlgebraError> {
        Ok(self.express_with_cost(v)?.0)
    }

    /// Like [`RowBasis::express`], also returning the number of scalar
    /// multiply-adds spent.
    pub fn express_with_cost(&self, v: &[Scalar]) -> Result<(Option<Vec<Scalar>>, u64), AlgebraError> {
        self.check(v)?;
        let red = self.reduce(v);
        let found = red.residual.iter().all(Scalar::is_zero).then_some(red.coefficients);
        Ok((found, red.ops))
    }

    pub fn contains(&self, v: &[Scalar]) -> Result<bool, AlgebraError> {
        Ok(self.express(v)?.is_some())
    }

    /// Appends `v` if it is independent of the current rows; returns whether it was added.
    pub fn insert(&mut self, v: Vec<Scalar>) -> Result<bool, AlgebraError> {
        self.check(&v)?;
        let red = self.reduce(&v);
        let Some(pivot) = red.residual.iter().position(|x| !x.is_zero()) else {
            return Ok(false);
        };
        // residual = v - coefficients * rows
        let mut combination: Vec<Scalar> = red.coefficients.iter().map(|c| -c).collect();
        combination.push(self.field.one());
        self.echelon.push(EchelonRow { pivot, values: red.residual, combination });
        self.rows.push(v);
        Ok(true)
    }
}

/// Coefficients expressing `v` over the rows of `basis`, if `v` lies in their span.
pub fn express_in_basis(v: &[Scalar], basis: &RowBasis) -> Result<Option<Vec<Scalar>>, AlgebraError> {
    basis.express(v)
}

/// The unique `M` with `M * h = targets` for a full-row-rank `h`.
///
/// Fails if `h` is rank deficient or a target row is outside the row space of `h`.
pub fn solve_row_equation(h: &Matrix, targets: &Matrix) -> Result<Matrix, AlgebraError> {
    if h.field() != targets.field() {
        return Err(AlgebraError::FieldMismatch(h.field(), targets.field()));
    }
    if h.cols() != targets.cols() {
        return Err(AlgebraError::Shape(format!("{} columns against {}", targets.cols(), h.cols())));
    }
    let basis = RowBasis::from_independent_rows(h.field(), h.cols(), (0..h.rows()).map(|i| h.row(i).to_vec()))?;
    let mut out = Vec::with_capacity(targets.rows());
    for i in 0..targets.rows() {
        match basis.express(targets.row(i))? {
            Some(c) => out.push(c),
            None => return Err(AlgebraError::NotInRowSpace(i)),
        }
    }
    Matrix::from_rows(h.field(), h.rows(), out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Q.from_i64(x)).collect()
    }

    fn basis(rows: &[&[i64]]) -> RowBasis {
        RowBasis::from_independent_rows(Q, rows[0].len(), rows.iter().map(|r| v(r))).unwrap()
    }

    /// Oracle: Cramer's rule for the 2x2 system c1*r1 + c2*r2 = v.
    fn cramer_2x2(r1: [i64; 2], r2: [i64; 2], target: [i64; 2]) -> (Scalar, Scalar) {
        let det = r1[0] * r2[1] - r2[0] * r1[1];
        assert_ne!(det, 0);
        let c1 = target[0] * r2[1] - r2[0] * target[1];
        let c2 = r1[0] * target[1] - target[0] * r1[1];
        let d = num_bigint::BigInt::from(det);
        (Q.from_ratio(&c1.into(), &d).unwrap(), Q.from_ratio(&c2.into(), &d).unwrap())
    }

    #[test]
    fn zero_vector_has_zero_coefficients() {
        let b = basis(&[&[1, 2, 3], &[0, 1, 1]]);
        assert_eq!(b.express(&v(&[0, 0, 0])).unwrap(), Some(v(&[0, 0])));
    }

    #[test]
    fn basis_row_gives_unit_vector() {
        let b = basis(&[&[1, 2, 3], &[0, 1, 1], &[5, 0, 1]]);
        assert_eq!(b.express(&v(&[1, 2, 3])).unwrap(), Some(v(&[1, 0, 0])));
        assert_eq!(b.express(&v(&[5, 0, 1])).unwrap(), Some(v(&[0, 0, 1])));
    }

    #[test]
    fn two_by_two_against_cramer() {
        let (c1, c2) = cramer_2x2([1, 0], [1, 1], [2, 3]);
        assert_eq!((c1.clone(), c2.clone()), (Q.from_i64(-1), Q.from_i64(3)));
        let b = basis(&[&[1, 0], &[1, 1]]);
        assert_eq!(b.express(&v(&[2, 3])).unwrap(), Some(vec![c1, c2]));
    }

    #[test]
    fn outside_span_is_none() {
        let b = basis(&[&[1, 1, 0]]);
        assert_eq!(b.express(&v(&[1, 0, 0])).unwrap(), None);
    }

    #[test]
    fn dimension_and_field_errors() {
        let b = basis(&[&[1, 1]]);
        assert!(matches!(b.express(&v(&[1])), Err(AlgebraError::Shape(_))));
        let other = vec![Field::Prime(5).one(), Field::Prime(5).one()];
        assert!(matches!(b.express(&other), Err(AlgebraError::FieldMismatch(..))));
    }

    #[test]
    fn insert_rejects_dependent_rows() {
        let mut b = RowBasis::new(Q, 2);
        assert!(b.insert(v(&[1, 2])).unwrap());
        assert!(!b.insert(v(&[2, 4])).unwrap());
        assert!(b.insert(v(&[0, 1])).unwrap());
        assert!(!b.insert(v(&[7, -3])).unwrap());
        assert_eq!(b.len(), 2);
    }

    #[test]
    fn solve_identity_and_scalar() {
        let t = Matrix::from_i64(Q, &[&[4, 5], &[6, 7]]);
        assert_eq!(solve_row_equation(&Matrix::identity(Q, 2), &t).unwrap(), t);
        let m = solve_row_equation(&Matrix::from_i64(Q, &[&[2]]), &Matrix::from_i64(Q, &[&[6]])).unwrap();
        assert_eq!(m, Matrix::from_i64(Q, &[&[3]]));
    }

    #[test]
    fn solve_two_by_two() {
        let h = Matrix::from_i64(Q, &[&[1, 0], &[1, 1]]);
        let m = solve_row_equation(&h, &Matrix::from_i64(Q, &[&[2, 3]])).unwrap();
        assert_eq!(m, Matrix::from_i64(Q, &[&[-1, 3]]));
    }

    #[test]
    fn solve_errors() {
        let h = Matrix::from_i64(Q, &[&[1, 0, 0], &[0, 1, 0]]);
        let bad = Matrix::from_i64(Q, &[&[0, 0, 1]]);
        assert!(matches!(solve_row_equation(&h, &bad), Err(AlgebraError::NotInRowSpace(0))));
        let singular = Matrix::from_i64(Q, &[&[1, 1], &[2, 2]]);
        assert!(matches!(solve_row_equation(&singular, &Matrix::from_i64(Q, &[&[1, 1]])), Err(AlgebraError::NotFullRowRank(1))));
    }
}
