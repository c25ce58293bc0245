//! Dense univariate polynomials with real coefficients.

use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Real;

/// `coeffs[m]` multiplies `x^m`. Trailing exact zeros are stripped; the zero
/// polynomial keeps a single zero coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<T = f64> {
    coeffs: Vec<T>,
}

impl<T: Real> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.len() > 1 && coeffs[coeffs.len() - 1] == T::zero() {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(T::zero());
        }
        Self { coeffs }
    }

    pub fn from_f64(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| T::from_f64(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![T::zero()] }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^power`
    pub fn monomial(c: T, power: usize) -> Self {
        let mut coeffs = vec![T::zero(); power + 1];
        coeffs[power] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `x^m`, zero past the degree.
    pub fn coeff(&self, m: usize) -> T {
        self.coeffs.get(m).copied().unwrap_or_else(T::zero)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == T::zero()
    }

    pub fn multiply(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == T::zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn differentiate(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(m, &c)| T::from_usize(m) * c)
            .collect();
        Self::new(coeffs)
    }

    /// `sum_i s_i * p_i`
    pub fn linear_combine<'a, I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (T, &'a Polynomial<T>)>,
    {
        let mut out: Vec<T> = Vec::new();
        for (s, p) in terms {
            if out.len() < p.coeffs.len() {
                out.resize(p.coeffs.len(), T::zero());
            }
            for (acc, &c) in out.iter_mut().zip(&p.coeffs) {
                *acc += s * c;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(self.coeffs.iter().map(|&c| s * c).collect())
    }

    /// Horner evaluation.
    pub fn eval(&self, x: T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, &c| acc * x + c)
    }

    /// Largest coefficient magnitude.
    pub fn max_abs_coeff(&self) -> T {
        self.coeffs
            .iter()
            .fold(T::zero(), |acc, &c| acc.max(c.abs()))
    }

    /// Split into (even-power part, odd-power part).
    pub fn split_parity(&self) -> (Self, Self) {
        let mut even = self.coeffs.clone();
        let mut odd = self.coeffs.clone();
        for (m, (e, o)) in even.iter_mut().zip(odd.iter_mut()).enumerate() {
            if m % 2 == 0 {
                *o = T::zero();
            } else {
                *e = T::zero();
            }
        }
        (Self::new(even), Self::new(odd))
    }

    /// True when every even-power coefficient is exactly zero.
    pub fn is_odd(&self) -> bool {
        self.coeffs.iter().step_by(2).all(|&c| c == T::zero())
    }

    /// True when every odd-power coefficient is exactly zero.
    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(|&c| c == T::zero())
    }
}

impl<T: Real> Default for Polynomial<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Real> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, rhs: Self) -> Polynomial<T> {
        self.multiply(rhs)
    }
}

impl<T: Real> Add for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, rhs: Self) -> Polynomial<T> {
        Polynomial::linear_combine([(T::one(), self), (T::one(), rhs)])
    }
}

impl<T: Real> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, rhs: Self) -> Polynomial<T> {
        Polynomial::linear_combine([(T::one(), self), (-T::one(), rhs)])
    }
}

impl<T: Real> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        self.scale(-T::one())
    }
}
