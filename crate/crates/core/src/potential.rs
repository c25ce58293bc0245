//! Polynomial potentials `V(q) = sum_k c_k q^k` with exact derivatives.

use serde::{Deserialize, Serialize};

use crate::error::{PsletError, Result};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    coeffs: Vec<f64>,
}

impl PotentialSpec {
    pub fn new(mut coeffs: Vec<f64>) -> Result<Self> {
        if let Some(c) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(PsletError::InvalidPotential(format!("non-finite coefficient {c}")));
        }
        while coeffs.len() > 1 && coeffs[coeffs.len() - 1] == 0.0 {
            coeffs.pop();
        }
        if coeffs.iter().skip(1).all(|&c| c == 0.0) {
            return Err(PsletError::InvalidPotential(
                "needs a nonzero coefficient of some power q^k with k >= 1".into(),
            ));
        }
        Ok(Self { coeffs })
    }

    /// Builds from `(power, coefficient)` pairs; repeated powers accumulate.
    pub fn from_terms(terms: &[(usize, f64)]) -> Result<Self> {
        let degree = terms.iter().map(|t| t.0).max().unwrap_or(0);
        let mut coeffs = vec![0.0; degree + 1];
        for &(k, c) in terms {
            coeffs[k] += c;
        }
        Self::new(coeffs)
    }

    /// `alpha0 q^2 + alpha q^4`
    pub fn quartic(alpha0: f64, alpha: f64) -> Result<Self> {
        if alpha0 == 0.0 && alpha == 0.0 {
            return Err(PsletError::InvalidPotential(
                "quartic potential with alpha0 = alpha = 0".into(),
            ));
        }
        Self::new(vec![0.0, 0.0, alpha0, 0.0, alpha])
    }

    /// `-a q^2 / 2 + q^4 / 2`
    pub fn double_well(a: f64) -> Result<Self> {
        Self::quartic(-0.5 * a, 0.5)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Exact `d^n V / dq^n` at `q`; zero when `n` exceeds the degree.
    pub fn derivative_at<T: Real>(&self, n: usize, q: T) -> T {
        if n > self.degree() {
            return T::zero();
        }
        // c_k * k!/(k-n)! * q^(k-n), Horner over k = degree..n
        let mut acc = T::zero();
        for k in (n..=self.degree()).rev() {
            let falling: f64 = ((k - n + 1)..=k).map(|j| j as f64).product();
            acc = acc * q + T::from_f64(self.coeffs[k]) * T::from_f64(falling);
        }
        acc
    }

    pub fn value<T: Real>(&self, q: T) -> T {
        self.derivative_at(0, q)
    }

    /// Coefficients of `V'(q)`.
    pub fn derivative_coeffs(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| k as f64 * c)
            .collect()
    }

    /// Term-wise sum of two potentials.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.coeffs.iter().map(|&x| c * x).collect())
    }

    /// Largest positive zero of `V'`, or 0 when `V'` has none.
    ///
    /// Past this point `V' > 0` everywhere when the leading coefficient is
    /// positive, which is where the expansion point has to live.
    pub fn outermost_stationary_point(&self) -> f64 {
        let dv = self.derivative_coeffs();
        let lead = dv.last().copied().unwrap_or(0.0);
        if lead == 0.0 {
            return 0.0;
        }
        // Cauchy bound on root magnitudes
        let bound = 1.0 + dv.iter().map(|c| (c / lead).abs()).fold(0.0, f64::max);
        let eval = |q: f64| dv.iter().rev().fold(0.0, |acc, &c| acc * q + c);
        let steps = 4096;
        let mut best = 0.0;
        let mut hi = bound;
        let mut f_hi = eval(hi);
        for i in (0..steps).rev() {
            let lo = bound * i as f64 / steps as f64;
            let f_lo = eval(lo);
            if lo > 0.0 && f_lo == 0.0 {
                best = lo;
                break;
            }
            if f_lo * f_hi < 0.0 {
                let (mut a, mut b, mut fa) = (lo, hi, f_lo);
                for _ in 0..200 {
                    let m = 0.5 * (a + b);
                    if m <= a || m >= b {
                        break;
                    }
                    let fm = eval(m);
                    if fm * fa <= 0.0 {
                        b = m;
                    } else {
                        a = m;
                        fa = fm;
                    }
                }
                best = 0.5 * (a + b);
                break;
            }
            hi = lo;
            f_hi = f_lo;
        }
        best
    }
}
