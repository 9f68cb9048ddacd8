//! Dense exact matrices over `Z` and `Q`.
//!
//! Row-major storage. Determinants use Bareiss fraction-free elimination
//! over the integers (rational matrices clear denominators first), and
//! inverses are expanded exactly as adjugate over determinant — no floating
//! point anywhere. Sizes here are small (projective dimension plus one, or
//! Macaulay matrices of modest degree), so the O(n^5) adjugate route is fine
//! and keeps every intermediate value an integer.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{ord_p, Prime, Rational, Valuation};
use crate::error::Error;
use crate::Result;

/// Matrix over the integers.  The ordering is lexicographic on
/// (shape, entries); it exists so matrices can key ordered sets.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct IntMatrix {
    n_rows: usize,
    n_cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(n_rows: usize, n_cols: usize) -> Self {
        IntMatrix {
            n_rows,
            n_cols,
            data: vec![BigInt::zero(); n_rows * n_cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::Invalid("ragged rows".into()));
        }
        Ok(IntMatrix {
            n_rows,
            n_cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        IntMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.n_cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.n_cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.n_cols {
            self.data.swap(a * self.n_cols + j, b * self.n_cols + j);
        }
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.n_cols, self.n_rows);
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.n_cols != other.n_rows {
            return Err(Error::Dimension(
                self.n_rows,
                self.n_cols,
                other.n_rows,
                other.n_cols,
            ));
        }
        let mut out = IntMatrix::zero(self.n_rows, other.n_cols);
        for i in 0..self.n_rows {
            for j in 0..other.n_cols {
                let mut acc = BigInt::zero();
                for k in 0..self.n_cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        let mut out = IntMatrix::zero(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out.set(i, j, self.get(r, c).clone());
            }
        }
        out
    }

    /// Determinant by Bareiss fraction-free elimination. Every intermediate
    /// division is exact.
    pub fn det_bareiss(&self) -> BigInt {
        assert!(self.n_rows == self.n_cols, "determinant of non-square matrix");
        let n = self.n_rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&r| !a.get(r, k).is_zero()) {
                    Some(r) => {
                        a.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
                a.set(i, k, BigInt::zero());
            }
            prev = a.get(k, k).clone();
        }
        let d = a.get(n - 1, n - 1).clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            data: self
                .data
                .iter()
                .map(|v| Rational::from_integer(v.clone()))
                .collect(),
        }
    }

    /// Greatest common divisor of all entries (zero for the zero matrix).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for v in &self.data {
            g = g.gcd(v);
        }
        g
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.n_rows, self.n_cols)?;
        for i in 0..self.n_rows {
            writeln!(
                f,
                "  {:?}",
                self.row(i).iter().map(|v| v.to_string()).collect::<Vec<_>>()
            )?;
        }
        write!(f, "]")
    }
}

/// Matrix over the rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    n_rows: usize,
    n_cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zero(n_rows: usize, n_cols: usize) -> Self {
        RatMatrix {
            n_rows,
            n_cols,
            data: vec![Rational::zero(); n_rows * n_cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        IntMatrix::identity(n).to_rational()
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::Invalid("ragged rows".into()));
        }
        Ok(RatMatrix {
            n_rows,
            n_cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        IntMatrix::from_i64_rows(rows).to_rational()
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.n_cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.n_cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn col(&self, j: usize) -> Vec<Rational> {
        (0..self.n_rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Row-major entry slice; the lexicographic order on this slice is the
    /// deterministic tie-break order used by searches.
    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = RatMatrix::zero(self.n_cols, self.n_rows);
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.n_cols != other.n_rows {
            return Err(Error::Dimension(
                self.n_rows,
                self.n_cols,
                other.n_rows,
                other.n_cols,
            ));
        }
        let mut out = RatMatrix::zero(self.n_rows, other.n_cols);
        for i in 0..self.n_rows {
            for j in 0..other.n_cols {
                let mut acc = Rational::zero();
                for k in 0..self.n_cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if self.n_cols != v.len() {
            return Err(Error::Dimension(self.n_rows, self.n_cols, v.len(), 1));
        }
        Ok((0..self.n_rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for k in 0..self.n_cols {
                    acc += self.get(i, k) * &v[k];
                }
                acc
            })
            .collect())
    }

    pub fn scalar_mul(&self, c: &Rational) -> RatMatrix {
        RatMatrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    /// Least `D >= 1` with `D * self` integral, together with that integer
    /// matrix.
    pub fn clear_denominators(&self) -> (BigInt, IntMatrix) {
        let mut lcm = BigInt::one();
        for v in &self.data {
            lcm = lcm.lcm(v.denom());
        }
        let mut m = IntMatrix::zero(self.n_rows, self.n_cols);
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                let scaled = self.get(i, j) * Rational::from_integer(lcm.clone());
                debug_assert!(scaled.is_integer());
                m.set(i, j, scaled.to_integer());
            }
        }
        (lcm, m)
    }

    pub fn det(&self) -> Rational {
        assert!(self.is_square(), "determinant of non-square matrix");
        let (d, m) = self.clear_denominators();
        let det = m.det_bareiss();
        Rational::new(det, d.pow(self.n_rows as u32))
    }

    /// Exact inverse as adjugate over determinant.
    pub fn inverse(&self) -> Result<RatMatrix> {
        assert!(self.is_square(), "inverse of non-square matrix");
        let n = self.n_rows;
        let (d, m) = self.clear_denominators();
        let det = m.det_bareiss();
        if det.is_zero() {
            return Err(Error::Singular);
        }
        // self = m / d, so self^{-1} = d * adj(m) / det(m).
        let mut out = RatMatrix::zero(n, n);
        let all: Vec<usize> = (0..n).collect();
        for i in 0..n {
            for j in 0..n {
                // adj(m)[i][j] = (-1)^{i+j} det(minor with row j, col i removed)
                let rows: Vec<usize> = all.iter().copied().filter(|&r| r != j).collect();
                let cols: Vec<usize> = all.iter().copied().filter(|&c| c != i).collect();
                let minor = m.submatrix(&rows, &cols).det_bareiss();
                let cof = if (i + j) % 2 == 0 { minor } else { -minor };
                out.set(i, j, Rational::new(cof * &d, det.clone()));
            }
        }
        debug_assert!(self.mul(&out).unwrap().is_identity());
        Ok(out)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.n_rows).all(|i| {
                (0..self.n_cols).all(|j| {
                    if i == j {
                        self.get(i, j).is_one()
                    } else {
                        self.get(i, j).is_zero()
                    }
                })
            })
    }

    /// All entries have nonnegative p-adic order.
    pub fn is_p_integral(&self, p: &Prime) -> bool {
        self.data
            .iter()
            .all(|v| ord_p(v, p) >= Valuation::Finite(0))
    }

    /// p-integral with determinant a p-unit: a unit of the local ring.
    pub fn is_p_unimodular(&self, p: &Prime) -> bool {
        self.is_p_integral(p) && ord_p(&self.det(), p) == Valuation::Finite(0)
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.n_rows, self.n_cols)?;
        for i in 0..self.n_rows {
            writeln!(
                f,
                "  {:?}",
                self.row(i).iter().map(|v| v.to_string()).collect::<Vec<_>>()
            )?;
        }
        write!(f, "]")
    }
}
