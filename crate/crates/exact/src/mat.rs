use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::AlgebraError;
use crate::poly::Poly;
use crate::ratfn::RatFn;
use crate::ring::{ExactDiv, Field, Ring};
use crate::scalar::Q;

/// Square matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat<T> {
    n: usize,
    data: Vec<T>,
}

pub type QMat = Mat<Q>;
pub type PolyMat = Mat<Poly>;
pub type RatMat = Mat<RatFn>;

impl<T> Mat<T> {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Mat { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, AlgebraError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(AlgebraError::Dimension(n, r.len()));
            }
            data.extend(r);
        }
        Ok(Mat { n, data })
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Mat<U> {
        Mat { n: self.n, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<U, E>(&self, f: impl FnMut(&T) -> Result<U, E>) -> Result<Mat<U>, E> {
        Ok(Mat { n: self.n, data: self.data.iter().map(f).collect::<Result<_, _>>()? })
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.n.max(1))
    }
}

impl<T: Clone> Mat<T> {
    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.n, |i, j| self[(j, i)].clone())
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.rows().map(|r| r.to_vec()).collect()
    }

    fn minor(&self, r: usize, c: usize) -> Self {
        let mut data = Vec::with_capacity((self.n - 1) * (self.n - 1));
        for i in 0..self.n {
            for j in 0..self.n {
                if i != r && j != c {
                    data.push(self[(i, j)].clone());
                }
            }
        }
        Mat { n: self.n - 1, data }
    }
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

impl<T: Ring> Mat<T> {
    pub fn zeros(n: usize) -> Self {
        Mat::from_fn(n, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, T::one())
    }

    pub fn scalar(n: usize, x: T) -> Self {
        Mat::from_fn(n, |i, j| if i == j { x.clone() } else { T::zero() })
    }

    pub fn diag(d: Vec<T>) -> Self {
        let n = d.len();
        Mat::from_fn(n, |i, j| if i == j { d[i].clone() } else { T::zero() })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn scale(&self, x: &T) -> Self {
        self.map(|e| e.clone() * x.clone())
    }

    pub fn trace(&self) -> T {
        (0..self.n).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// Cofactor expansion along the first row. Exponential; meant for N <= 3 and as an oracle.
    pub fn det_cofactor(&self) -> T {
        match self.n {
            0 => T::one(),
            1 => self.data[0].clone(),
            2 => {
                self.data[0].clone() * self.data[3].clone()
                    - self.data[1].clone() * self.data[2].clone()
            }
            _ => {
                let mut acc = T::zero();
                for j in 0..self.n {
                    let term = self[(0, j)].clone() * self.minor(0, j).det_cofactor();
                    acc = if j % 2 == 0 { acc + term } else { acc - term };
                }
                acc
            }
        }
    }

    pub fn cofactor(&self, i: usize, j: usize) -> T {
        let m = self.minor(i, j).det_cofactor();
        if (i + j) % 2 == 0 {
            m
        } else {
            -m
        }
    }

    pub fn adjugate(&self) -> Self {
        if self.n == 1 {
            return Self::identity(1);
        }
        Mat::from_fn(self.n, |i, j| self.cofactor(j, i))
    }

    fn check_same(&self, o: &Self) {
        assert_eq!(self.n, o.n, "matrix dimension mismatch");
    }
}

impl<T: ExactDiv> Mat<T> {
    /// Cofactor expansion for N <= 3, fraction-free Bareiss elimination above.
    pub fn det(&self) -> T {
        if self.n <= 3 {
            self.det_cofactor()
        } else {
            self.det_bareiss()
        }
    }

    pub fn det_bareiss(&self) -> T {
        let n = self.n;
        if n == 0 {
            return T::one();
        }
        let mut m = self.data.clone();
        let mut sign = false;
        let mut prev = T::one();
        for k in 0..n - 1 {
            if m[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[i * n + k].is_zero()) else {
                    return T::zero();
                };
                for j in 0..n {
                    m.swap(k * n + j, p * n + j);
                }
                sign = !sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = m[i * n + j].clone() * m[k * n + k].clone()
                        - m[i * n + k].clone() * m[k * n + j].clone();
                    m[i * n + j] = v.div_exact(&prev);
                }
            }
            prev = m[k * n + k].clone();
        }
        let d = m[n * n - 1].clone();
        if sign {
            -d
        } else {
            d
        }
    }
}

impl<T: Field> Mat<T> {
    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        if self.n <= 3 {
            let d = self.det();
            let inv = d.inv().ok_or(AlgebraError::Singular)?;
            return Ok(self.adjugate().scale(&inv));
        }
        self.inverse_gauss_jordan()
    }

    pub fn inverse_gauss_jordan(&self) -> Result<Self, AlgebraError> {
        let n = self.n;
        let mut a = self.clone();
        let mut b = Self::identity(n);
        for k in 0..n {
            let p = (k..n).find(|&i| !a[(i, k)].is_zero()).ok_or(AlgebraError::Singular)?;
            if p != k {
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                    b.data.swap(k * n + j, p * n + j);
                }
            }
            let piv = a[(k, k)].inv().ok_or(AlgebraError::Singular)?;
            for j in 0..n {
                a[(k, j)] = a[(k, j)].clone() * piv.clone();
                b[(k, j)] = b[(k, j)].clone() * piv.clone();
            }
            for i in 0..n {
                if i == k || a[(i, k)].is_zero() {
                    continue;
                }
                let f = a[(i, k)].clone();
                for j in 0..n {
                    a[(i, j)] = a[(i, j)].clone() - f.clone() * a[(k, j)].clone();
                    b[(i, j)] = b[(i, j)].clone() - f.clone() * b[(k, j)].clone();
                }
            }
        }
        Ok(b)
    }

    /// Solve X * self = rhs (right division), the shape used for left coefficients.
    pub fn right_div(rhs: &Self, by: &Self) -> Result<Self, AlgebraError> {
        Ok(rhs * &by.inverse()?)
    }
}

impl<'a, T: Ring> Add<&'a Mat<T>> for &'a Mat<T> {
    type Output = Mat<T>;
    fn add(self, o: &Mat<T>) -> Mat<T> {
        self.check_same(o);
        Mat {
            n: self.n,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<'a, T: Ring> Sub<&'a Mat<T>> for &'a Mat<T> {
    type Output = Mat<T>;
    fn sub(self, o: &Mat<T>) -> Mat<T> {
        self.check_same(o);
        Mat {
            n: self.n,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<'a, T: Ring> Mul<&'a Mat<T>> for &'a Mat<T> {
    type Output = Mat<T>;
    fn mul(self, o: &Mat<T>) -> Mat<T> {
        self.check_same(o);
        let n = self.n;
        Mat::from_fn(n, |i, j| {
            let mut acc = T::zero();
            for k in 0..n {
                let (a, b) = (&self.data[i * n + k], &o.data[k * n + j]);
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                acc = acc + a.clone() * b.clone();
            }
            acc
        })
    }
}

impl<T: Ring> Neg for &Mat<T> {
    type Output = Mat<T>;
    fn neg(self) -> Mat<T> {
        self.map(|x| -x.clone())
    }
}

impl<T: Ring> Add for Mat<T> {
    type Output = Mat<T>;
    fn add(self, o: Self) -> Self {
        &self + &o
    }
}

impl<T: Ring> Sub for Mat<T> {
    type Output = Mat<T>;
    fn sub(self, o: Self) -> Self {
        &self - &o
    }
}

impl<T: Ring> Mul for Mat<T> {
    type Output = Mat<T>;
    fn mul(self, o: Self) -> Self {
        &self * &o
    }
}

impl<T: Ring> Neg for Mat<T> {
    type Output = Mat<T>;
    fn neg(self) -> Self {
        -&self
    }
}

impl<T: fmt::Display> fmt::Display for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, r) in self.rows().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (j, x) in r.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl<T: fmt::Debug> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.chunks(self.n.max(1))).finish()
    }
}

impl<T: Serialize> Serialize for Mat<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.data.chunks(self.n.max(1)))
    }
}

impl<'de, T: Deserialize<'de>> Deserialize<'de> for Mat<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<T>>::deserialize(d)?;
        Mat::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

// conversions between the three matrix flavours

impl QMat {
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Mat::from_fn(rows.len(), |i, j| crate::scalar::qi(rows[i][j]))
    }

    pub fn to_poly(&self) -> PolyMat {
        self.map(|x| Poly::constant(x.clone()))
    }

    pub fn to_rat(&self) -> RatMat {
        self.map(|x| RatFn::constant(x.clone()))
    }
}

impl PolyMat {
    pub fn to_rat(&self) -> RatMat {
        self.map(|p| RatFn::from_poly(p.clone()))
    }

    pub fn degree(&self) -> Option<usize> {
        self.entries().iter().filter_map(|p| p.degree()).max()
    }

    /// Coefficient matrix of t^k.
    pub fn coeff(&self, k: usize) -> QMat {
        self.map(|p| p.coeff(k))
    }

    /// Leading coefficient at the given degree.
    pub fn lc_at(&self, k: usize) -> QMat {
        self.coeff(k)
    }

    pub fn from_coeff_mats(cs: &[QMat]) -> Self {
        let n = cs.first().map_or(0, |m| m.size());
        Mat::from_fn(n, |i, j| Poly::from_coeffs(cs.iter().map(|m| m[(i, j)].clone()).collect()))
    }

    pub fn eval(&self, x: &Q) -> QMat {
        self.map(|p| p.eval(x))
    }

    pub fn derive(&self) -> Self {
        self.map(|p| p.derive())
    }

    pub fn scale_q(&self, x: &Q) -> Self {
        self.map(|p| p.scale(x))
    }

    /// Left multiplication by a constant matrix.
    pub fn lmul_q(&self, c: &QMat) -> Self {
        &c.to_poly() * self
    }
}

impl RatMat {
    pub fn to_poly(&self) -> Option<PolyMat> {
        let mut out = Vec::with_capacity(self.entries().len());
        for r in self.entries() {
            out.push(r.to_poly()?);
        }
        Some(Mat { n: self.size(), data: out })
    }

    pub fn to_const(&self) -> Option<QMat> {
        let mut out = Vec::with_capacity(self.entries().len());
        for r in self.entries() {
            out.push(r.constant_value()?);
        }
        Some(Mat { n: self.size(), data: out })
    }

    pub fn derive(&self) -> Self {
        self.map(|r| r.derive())
    }

    pub fn eval(&self, x: &Q) -> Result<QMat, AlgebraError> {
        self.try_map(|r| r.eval(x))
    }

    pub fn scale_q(&self, x: &Q) -> Self {
        self.map(|r| r.scale(x))
    }

    pub fn is_polynomial(&self) -> bool {
        self.entries().iter().all(|r| r.is_poly())
    }

    /// Monic lcm of all entry denominators.
    pub fn common_den(&self) -> Poly {
        let mut l = Poly::one();
        for r in self.entries() {
            let g = l.gcd(r.den());
            l = &l * &r.den().div_exact(&g);
        }
        l
    }
}

/// Serde adapter for constant matrices: rows of "p/q" strings.
pub mod serde_qmat {
    use super::*;

    pub fn serialize<S: Serializer>(m: &QMat, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(m.rows().map(|r| r.iter().map(crate::scalar::fmt_q).collect::<Vec<_>>()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<QMat, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|x| crate::scalar::parse_q(x)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        Mat::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for integer-indexed maps of constant matrices.
pub mod serde_qmat_map {
    use super::*;
    use std::collections::BTreeMap;

    #[derive(Serialize, Deserialize)]
    struct Wrap(#[serde(with = "super::serde_qmat")] QMat);

    pub fn serialize<S: Serializer>(m: &BTreeMap<usize, QMat>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(m.iter().map(|(k, v)| (k, Wrap(v.clone()))))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<usize, QMat>, D::Error> {
        let m = BTreeMap::<usize, Wrap>::deserialize(d)?;
        Ok(m.into_iter().map(|(k, v)| (k, v.0)).collect())
    }
}
