use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{IntPolynomial, PolyError};

/// Dense integer matrix in row-major order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self, PolyError> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(PolyError::DimensionMismatch {
                expected: (rows, cols),
                found: (data.len(), 1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Builds from nested rows; panics on ragged input.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        assert!(r > 0 && c > 0, "empty matrix");
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            let row = row.as_ref();
            assert_eq!(row.len(), c, "ragged matrix rows");
            data.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        Self { rows: r, cols: c, data }
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

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows_i64(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_i64()).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, PolyError> {
        if self.cols != rhs.rows {
            return Err(PolyError::DimensionMismatch {
                expected: (self.cols, rhs.cols),
                found: (rhs.rows, rhs.cols),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>, PolyError> {
        if v.len() != self.cols {
            return Err(PolyError::DimensionMismatch {
                expected: (self.cols, 1),
                found: (v.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Result<Self, PolyError> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(PolyError::DimensionMismatch {
                expected: (self.rows, self.cols),
                found: (rhs.rows, rhs.cols),
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, PolyError> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, PolyError> {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Result<Self, PolyError> {
        if !self.is_square() {
            return Err(PolyError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut acc = Self::identity(self.rows);
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Exactly one 1 in every row and column, zeros elsewhere.
    pub fn is_permutation(&self) -> bool {
        if !self.is_square() || !self.data.iter().all(|x| x.is_zero() || x.is_one()) {
            return false;
        }
        let ones = |it: &mut dyn Iterator<Item = &BigInt>| it.filter(|x| x.is_one()).count() == 1;
        (0..self.rows).all(|i| ones(&mut self.row(i).iter()))
            && (0..self.cols).all(|j| ones(&mut (0..self.rows).map(|i| self.get(i, j))))
    }

    /// `det(I - tM)` by Faddeev-LeVerrier over the integers.
    ///
    /// With `B_0 = 0`, `a_0 = 1`, the recurrence `B_k = M B_(k-1) + a_(k-1) I`,
    /// `a_k = -tr(M B_k) / k` yields the coefficient of `t^k` in `det(I - tM)`;
    /// every division is exact.
    pub fn det_i_minus_t(&self) -> Result<IntPolynomial, PolyError> {
        if !self.is_square() {
            return Err(PolyError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut coeffs = vec![BigInt::one()];
        let mut b = Self::zeros(n, n);
        for k in 1..=n {
            let mut next = self.mul(&b)?;
            for i in 0..n {
                next.data[i * n + i] += &coeffs[k - 1];
            }
            let mb = self.mul(&next)?;
            let trace: BigInt = (0..n).map(|i| mb.get(i, i)).sum();
            let kk = BigInt::from(k);
            debug_assert!((&trace % &kk).is_zero());
            coeffs.push(-(trace / kk));
            b = next;
        }
        Ok(IntPolynomial::new(coeffs))
    }

    /// Rank over the rationals by fraction-free (Bareiss) elimination.
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<BigInt>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let (m, n) = (self.rows, self.cols);
        let mut rank = 0;
        let mut prev = BigInt::one();
        for col in 0..n {
            if rank == m {
                break;
            }
            let Some(pivot) = (rank..m).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(rank, pivot);
            for r in rank + 1..m {
                for c in col + 1..n {
                    let v = &a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c];
                    a[r][c] = v / &prev;
                }
                a[r][col] = BigInt::zero();
            }
            prev = a[rank][col].clone();
            rank += 1;
        }
        rank
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &Self) -> Result<Self, PolyError> {
        if self.rows != rhs.rows {
            return Err(PolyError::DimensionMismatch {
                expected: (self.rows, rhs.cols),
                found: (rhs.rows, rhs.cols),
            });
        }
        let mut data = Vec::with_capacity(self.rows * (self.cols + rhs.cols));
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(rhs.row(i));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols + rhs.cols,
            data,
        })
    }

    /// Whether the rational column spaces of `self` and `rhs` coincide.
    pub fn column_space_equal(&self, rhs: &Self) -> Result<bool, PolyError> {
        let joint = self.hstack(rhs)?.rank();
        Ok(self.rank() == joint && rhs.rank() == joint)
    }
}

impl fmt::Display for IntMatrix {
    /// Rows of space-separated integers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows = self
            .to_rows_i64()
            .ok_or_else(|| serde::ser::Error::custom("matrix entry exceeds i64"))?;
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<i64>> = Vec::deserialize(deserializer)?;
        let c = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || c == 0 || rows.iter().any(|r| r.len() != c) {
            return Err(serde::de::Error::custom("matrix must be non-empty and rectangular"));
        }
        Ok(Self::from_rows(&rows))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    // Laplace expansion of det(I - tM) with polynomial entries; exponential but
    // independent of the Faddeev-LeVerrier path.
    fn laplace_det(m: &[Vec<IntPolynomial>]) -> IntPolynomial {
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = IntPolynomial::zero();
        for j in 0..n {
            let minor: Vec<Vec<IntPolynomial>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let term = &m[0][j] * &laplace_det(&minor);
            acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    fn oracle_char_poly(m: &IntMatrix) -> IntPolynomial {
        let n = m.rows();
        let entries: Vec<Vec<IntPolynomial>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let delta = i64::from(i == j);
                        &IntPolynomial::from_i64s(&[delta]) - &IntPolynomial::monomial(m.get(i, j).clone(), 1)
                    })
                    .collect()
            })
            .collect();
        laplace_det(&entries)
    }

    #[test]
    fn identity_gives_binomial_power() {
        for n in 1..6 {
            let expected = p(&[1, -1]).pow(n as u32);
            assert_eq!(IntMatrix::identity(n).det_i_minus_t().unwrap(), expected);
        }
    }

    #[test]
    fn not_square_is_an_error() {
        let m = IntMatrix::zeros(2, 3);
        assert!(matches!(
            m.det_i_minus_t(),
            Err(PolyError::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn permutation_cycles_give_cyclotomic_like_factors() {
        // A 3-cycle and a 2-cycle: (1 - t^3)(1 - t^2).
        let mut m = IntMatrix::zeros(5, 5);
        for (i, j) in [(0, 1), (1, 2), (2, 0), (3, 4), (4, 3)] {
            m.set(i, j, BigInt::one());
        }
        assert!(m.is_permutation());
        assert_eq!(m.det_i_minus_t().unwrap(), &p(&[1, 0, 0, -1]) * &p(&[1, 0, -1]));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(IntMatrix::identity(4).rank(), 4);
        assert_eq!(IntMatrix::zeros(3, 2).rank(), 0);
        let m = IntMatrix::from_rows(&[[1, 2, 3], [2, 4, 6], [1, 0, 1]]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn column_space_comparison() {
        let a = IntMatrix::from_rows(&[[1, 0], [0, 1], [0, 0]]);
        let b = IntMatrix::from_rows(&[[2, 1, 3], [1, 1, 2], [0, 0, 0]]);
        let c = IntMatrix::from_rows(&[[1], [0], [1]]);
        assert!(a.column_space_equal(&b).unwrap());
        assert!(!a.column_space_equal(&c).unwrap());
        let wrong_rows = IntMatrix::zeros(2, 2);
        assert!(matches!(
            a.column_space_equal(&wrong_rows),
            Err(PolyError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn json_roundtrip() {
        let m = IntMatrix::from_rows(&[[1, -1, 0], [0, 2, 5]]);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, "[[1,-1,0],[0,2,5]]");
        assert_eq!(serde_json::from_str::<IntMatrix>(&s).unwrap(), m);
    }

    proptest! {
        #[test]
        fn faddeev_leverrier_matches_laplace(
            n in 1usize..5,
            seed in prop::collection::vec(-2i64..3, 16),
        ) {
            let rows: Vec<Vec<i64>> = (0..n).map(|i| seed[i * n..(i + 1) * n].to_vec()).collect();
            let m = IntMatrix::from_rows(&rows);
            let fl = m.det_i_minus_t().unwrap();
            prop_assert_eq!(fl.coeff(0), BigInt::one());
            prop_assert!(fl.degree().unwrap() <= n);
            prop_assert_eq!(fl, oracle_char_poly(&m));
        }

        #[test]
        fn rank_is_transpose_invariant(seed in prop::collection::vec(-2i64..3, 12)) {
            let rows: Vec<Vec<i64>> = (0..3).map(|i| seed[i * 4..(i + 1) * 4].to_vec()).collect();
            let m = IntMatrix::from_rows(&rows);
            prop_assert_eq!(m.rank(), m.transpose().rank());
            prop_assert!(m.rank() <= 3);
        }
    }
}
