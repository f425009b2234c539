//! Complex two-component kets and 2x2 operators over the {|0>, |1>} basis.

use std::ops::{Add, Mul, Neg, Sub};

pub use num_complex::Complex64 as C64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// `e^{ix}`.
#[inline]
pub fn cis(x: f64) -> C64 {
    let (s, c) = x.sin_cos();
    C64::new(c, s)
}

/// A pure state of the qubit, `amp0 |0> + amp1 |1>`.
///
/// Normalization is not enforced at construction; the analytic constructors
/// in this crate produce unit vectors and the RK4 oracle deliberately does
/// not renormalize.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    pub amp0: C64,
    pub amp1: C64,
}

impl QubitState {
    pub const fn new(amp0: C64, amp1: C64) -> Self {
        Self { amp0, amp1 }
    }

    pub fn real(a0: f64, a1: f64) -> Self {
        Self::new(C64::new(a0, 0.0), C64::new(a1, 0.0))
    }

    pub const fn ket0() -> Self {
        Self::new(ONE, ZERO)
    }

    pub const fn ket1() -> Self {
        Self::new(ZERO, ONE)
    }

    /// `<self|other>`, antilinear in `self`.
    #[inline]
    pub fn inner(&self, other: &QubitState) -> C64 {
        self.amp0.conj() * other.amp0 + self.amp1.conj() * other.amp1
    }

    #[inline]
    pub fn norm_sqr(&self) -> f64 {
        self.amp0.norm_sqr() + self.amp1.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    #[inline]
    pub fn scale(&self, z: C64) -> Self {
        Self::new(z * self.amp0, z * self.amp1)
    }

    pub fn scale_real(&self, x: f64) -> Self {
        Self::new(self.amp0 * x, self.amp1 * x)
    }

    /// Largest componentwise modulus of `self - other`.
    pub fn max_deviation(&self, other: &QubitState) -> f64 {
        (self.amp0 - other.amp0)
            .norm()
            .max((self.amp1 - other.amp1).norm())
    }

    pub fn is_finite(&self) -> bool {
        self.amp0.is_finite() && self.amp1.is_finite()
    }
}

impl Add for QubitState {
    type Output = QubitState;
    fn add(self, rhs: QubitState) -> QubitState {
        QubitState::new(self.amp0 + rhs.amp0, self.amp1 + rhs.amp1)
    }
}

impl Sub for QubitState {
    type Output = QubitState;
    fn sub(self, rhs: QubitState) -> QubitState {
        QubitState::new(self.amp0 - rhs.amp0, self.amp1 - rhs.amp1)
    }
}

impl Neg for QubitState {
    type Output = QubitState;
    fn neg(self) -> QubitState {
        QubitState::new(-self.amp0, -self.amp1)
    }
}

impl Mul<QubitState> for C64 {
    type Output = QubitState;
    fn mul(self, rhs: QubitState) -> QubitState {
        rhs.scale(self)
    }
}

impl Mul<QubitState> for f64 {
    type Output = QubitState;
    fn mul(self, rhs: QubitState) -> QubitState {
        rhs.scale_real(self)
    }
}

/// A 2x2 complex matrix, row-major, acting on [`QubitState`]s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Operator2(pub [[C64; 2]; 2]);

impl Operator2 {
    pub const fn zero() -> Self {
        Operator2([[ZERO, ZERO], [ZERO, ZERO]])
    }

    pub const fn identity() -> Self {
        Operator2([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn diag(d0: f64, d1: f64) -> Self {
        Operator2([[C64::new(d0, 0.0), ZERO], [ZERO, C64::new(d1, 0.0)]])
    }

    /// Pauli `sigma_x` in the {|0>, |1>} basis.
    pub const fn sigma_x() -> Self {
        Operator2([[ZERO, ONE], [ONE, ZERO]])
    }

    /// The dyad `|ket><bra|`.
    pub fn outer(ket: &QubitState, bra: &QubitState) -> Self {
        let k = [ket.amp0, ket.amp1];
        let b = [bra.amp0.conj(), bra.amp1.conj()];
        Operator2([[k[0] * b[0], k[0] * b[1]], [k[1] * b[0], k[1] * b[1]]])
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[row][col]
    }

    pub fn apply(&self, s: &QubitState) -> QubitState {
        let m = &self.0;
        QubitState::new(
            m[0][0] * s.amp0 + m[0][1] * s.amp1,
            m[1][0] * s.amp0 + m[1][1] * s.amp1,
        )
    }

    /// `<bra| self |ket>`.
    pub fn matrix_element(&self, bra: &QubitState, ket: &QubitState) -> C64 {
        bra.inner(&self.apply(ket))
    }

    pub fn scale(&self, z: C64) -> Self {
        self.map(|a| a * z)
    }

    pub fn scale_real(&self, x: f64) -> Self {
        self.map(|a| a * x)
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Operator2([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// `max |self - self^dagger|` entrywise.
    pub fn hermiticity_defect(&self) -> f64 {
        (*self - self.adjoint()).max_norm()
    }

    fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        let m = &self.0;
        Operator2([[f(m[0][0]), f(m[0][1])], [f(m[1][0]), f(m[1][1])]])
    }

    fn zip(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Self {
        let (a, b) = (&self.0, &other.0);
        Operator2([
            [f(a[0][0], b[0][0]), f(a[0][1], b[0][1])],
            [f(a[1][0], b[1][0]), f(a[1][1], b[1][1])],
        ])
    }
}

impl Add for Operator2 {
    type Output = Operator2;
    fn add(self, rhs: Operator2) -> Operator2 {
        self.zip(&rhs, |a, b| a + b)
    }
}

impl Sub for Operator2 {
    type Output = Operator2;
    fn sub(self, rhs: Operator2) -> Operator2 {
        self.zip(&rhs, |a, b| a - b)
    }
}

impl Mul for Operator2 {
    type Output = Operator2;
    fn mul(self, rhs: Operator2) -> Operator2 {
        let (a, b) = (&self.0, &rhs.0);
        let e = |i: usize, j: usize| a[i][0] * b[0][j] + a[i][1] * b[1][j];
        Operator2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }
}

impl Mul<QubitState> for Operator2 {
    type Output = QubitState;
    fn mul(self, rhs: QubitState) -> QubitState {
        self.apply(&rhs)
    }
}
