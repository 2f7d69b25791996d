use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

pub use num_complex::Complex64 as C64;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Column vector of `N` complex entries.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CVec<const N: usize>(pub [C64; N]);

/// Dense `N×N` complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMat<const N: usize>(pub [[C64; N]; N]);

pub type CVec2 = CVec<2>;
pub type CVec4 = CVec<4>;
pub type CMat2 = CMat<2>;
pub type CMat4 = CMat<4>;

impl<const N: usize> Default for CVec<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> CVec<N> {
    pub fn zeros() -> Self {
        CVec([ZERO; N])
    }

    pub fn from_fn(f: impl FnMut(usize) -> C64) -> Self {
        CVec(std::array::from_fn(f))
    }

    pub fn from_real(v: [f64; N]) -> Self {
        Self::from_fn(|i| C64::new(v[i], 0.0))
    }

    pub fn basis(k: usize) -> Self {
        let mut v = Self::zeros();
        v.0[k] = ONE;
        v
    }

    /// ⟨self|other⟩, antilinear in `self`.
    pub fn dot(&self, other: &Self) -> C64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum()
    }

    /// Bilinear product Σ a_i b_i (no conjugation).
    pub fn dot_t(&self, other: &Self) -> C64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_fn(|i| self.0[i] * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        Self::from_fn(|i| self.0[i] * s)
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(|i| self.0[i].conj())
    }

    /// Unit vector along `self`; `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0).then(|| self.scale_re(1.0 / n))
    }

    /// |self⟩⟨other|
    pub fn outer(&self, other: &Self) -> CMat<N> {
        CMat::from_fn(|i, j| self.0[i] * other.0[j].conj())
    }

    /// |self⟩⟨self|
    pub fn projector(&self) -> CMat<N> {
        self.outer(self)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

impl<const N: usize> Index<usize> for CVec<N> {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.0[i]
    }
}

impl<const N: usize> IndexMut<usize> for CVec<N> {
    fn index_mut(&mut self, i: usize) -> &mut C64 {
        &mut self.0[i]
    }
}

impl<const N: usize> Add for CVec<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i| self.0[i] + rhs.0[i])
    }
}

impl<const N: usize> AddAssign for CVec<N> {
    fn add_assign(&mut self, rhs: Self) {
        for i in 0..N {
            self.0[i] += rhs.0[i];
        }
    }
}

impl<const N: usize> Sub for CVec<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i| self.0[i] - rhs.0[i])
    }
}

impl<const N: usize> Neg for CVec<N> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_fn(|i| -self.0[i])
    }
}

impl<const N: usize> Default for CMat<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> CMat<N> {
    pub fn zeros() -> Self {
        CMat([[ZERO; N]; N])
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> C64) -> Self {
        CMat(std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))))
    }

    pub fn from_real(m: [[f64; N]; N]) -> Self {
        Self::from_fn(|i, j| C64::new(m[i][j], 0.0))
    }

    pub fn diag_real(d: [f64; N]) -> Self {
        Self::from_fn(|i, j| if i == j { C64::new(d[i], 0.0) } else { ZERO })
    }

    pub fn diag(d: [C64; N]) -> Self {
        Self::from_fn(|i, j| if i == j { d[i] } else { ZERO })
    }

    /// Matrix whose `j`-th column is `cols[j]`.
    pub fn from_columns(cols: &[CVec<N>; N]) -> Self {
        Self::from_fn(|i, j| cols[j].0[i])
    }

    pub fn from_rows(rows: &[CVec<N>; N]) -> Self {
        Self::from_fn(|i, j| rows[i].0[j])
    }

    pub fn column(&self, j: usize) -> CVec<N> {
        CVec::from_fn(|i| self.0[i][j])
    }

    pub fn row(&self, i: usize) -> CVec<N> {
        CVec(self.0[i])
    }

    pub fn columns(&self) -> [CVec<N>; N] {
        std::array::from_fn(|j| self.column(j))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i])
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(|i, j| self.0[i][j].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    pub fn mul_vec(&self, v: &CVec<N>) -> CVec<N> {
        CVec::from_fn(|i| (0..N).map(|j| self.0[i][j] * v.0[j]).sum())
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .fold(0.0, |m: f64, c| m.max(c.norm()))
    }

    pub fn frobenius(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// ‖self − other‖_max
    pub fn dist(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    /// ‖self − self†‖_max
    pub fn hermitian_residual(&self) -> f64 {
        self.dist(&self.adjoint())
    }

    /// ‖self − selfᵀ‖_max
    pub fn symmetric_residual(&self) -> f64 {
        self.dist(&self.transpose())
    }

    /// ‖self·self† − I‖_max
    pub fn unitarity_residual(&self) -> f64 {
        (*self * self.adjoint()).dist(&Self::identity())
    }

    /// (self + self†)/2
    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()).scale_re(0.5)
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flatten()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// ⟨a|self|b⟩
    pub fn sandwich(&self, a: &CVec<N>, b: &CVec<N>) -> C64 {
        a.dot(&self.mul_vec(b))
    }
}

impl CMat<2> {
    pub fn det(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    /// Kronecker product self ⊗ other.
    pub fn kron(&self, other: &CMat<2>) -> CMat<4> {
        CMat::from_fn(|i, j| self.0[i / 2][j / 2] * other.0[i % 2][j % 2])
    }
}

impl CMat<4> {
    /// Determinant by cofactor expansion over 2×2 minors.
    pub fn det(&self) -> C64 {
        let m = &self.0;
        let mut d = ZERO;
        // Laplace expansion along the first two rows.
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        for (k, &(a, b)) in pairs.iter().enumerate() {
            let (c, e) = pairs[5 - k];
            let top = m[0][a] * m[1][b] - m[0][b] * m[1][a];
            let bot = m[2][c] * m[3][e] - m[2][e] * m[3][c];
            // (−1)^(row indices + column indices), rows 0 and 1 fixed
            let sign = if (a + b) % 2 == 1 { 1.0 } else { -1.0 };
            d += top * bot * sign;
        }
        d
    }
}

impl CVec<2> {
    pub fn kron(&self, other: &CVec<2>) -> CVec<4> {
        CVec::from_fn(|i| self.0[i / 2] * other.0[i % 2])
    }
}

impl<const N: usize> Index<(usize, usize)> for CMat<N> {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for CMat<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[i][j]
    }
}

impl<const N: usize> Add for CMat<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] + rhs.0[i][j])
    }
}

impl<const N: usize> AddAssign for CMat<N> {
    fn add_assign(&mut self, rhs: Self) {
        for i in 0..N {
            for j in 0..N {
                self.0[i][j] += rhs.0[i][j];
            }
        }
    }
}

impl<const N: usize> Sub for CMat<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] - rhs.0[i][j])
    }
}

impl<const N: usize> Neg for CMat<N> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_fn(|i, j| -self.0[i][j])
    }
}

impl<const N: usize> Mul for CMat<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| (0..N).map(|k| self.0[i][k] * rhs.0[k][j]).sum())
    }
}

impl<const N: usize> Mul<CVec<N>> for CMat<N> {
    type Output = CVec<N>;
    fn mul(self, rhs: CVec<N>) -> CVec<N> {
        self.mul_vec(&rhs)
    }
}

/// Σ_k |vs_k⟩⟨vs_k|
pub fn sum_projectors<const N: usize>(vs: &[CVec<N>]) -> CMat<N> {
    vs.iter().fold(CMat::zeros(), |acc, v| acc + v.projector())
}
