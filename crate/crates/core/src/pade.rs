//! `[N, M+1]` Padé approximants of a power series in `1/lbar`.
//!
//! The approximant is `(P_0 + P_1 x + .. + P_M x^M) / (1 + q_1 x + .. + q_N x^N)`
//! fitted to `c_0 .. c_{M+N}`; the energy resummation uses `N = M = 4` on
//! `E(0) .. E(8)`.

use crate::error::{PsletError, Result};
use crate::riccati::EnergyExpansion;
use crate::scalar::Real;

/// Condition estimates above this reject the fit.
pub const MAX_CONDITION: f64 = 1e14;

#[derive(Clone, Debug, PartialEq)]
pub struct PadeApproximant<T = f64> {
    /// `P_0 .. P_M`
    pub num: Vec<T>,
    /// `q_1 .. q_N`; the leading 1 is implicit.
    pub den: Vec<T>,
    /// 1-norm condition estimate of the denominator system (0 when it was not needed).
    pub condition: f64,
}

fn horner<T: Real>(coeffs: &[T], x: T) -> T {
    coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
}

/// Fits the approximant with `n` denominator and `m + 1` numerator coefficients.
pub fn fit<T: Real>(coeffs: &[T], n: usize, m: usize) -> Result<PadeApproximant<T>> {
    if coeffs.len() < n + m + 1 {
        return Err(PsletError::InvalidArgument(format!(
            "[{n},{}] Padé needs {} coefficients, got {}",
            m + 1,
            n + m + 1,
            coeffs.len()
        )));
    }
    let (den, condition) = match denominator(coeffs, n, m) {
        Ok(found) => found,
        // a rank-deficient block can still admit a lower-degree denominator
        // that reproduces every input coefficient
        Err(err @ PsletError::SingularSystem { .. }) => (0..n)
            .rev()
            .find_map(|k| {
                let (mut den, cond) = denominator(coeffs, k, m).ok()?;
                den.resize(n, T::zero());
                let trial = PadeApproximant { num: numerator(coeffs, &den, m), den, condition: cond };
                reproduces(&trial, &coeffs[..=n + m]).then_some((trial.den, cond))
            })
            .ok_or(err)?,
        Err(err) => return Err(err),
    };
    let num = numerator(coeffs, &den, m);
    Ok(PadeApproximant { num, den, condition })
}

// sum_j q_j c_{m+i-j} = -c_{m+i},  i, j = 1..n
fn denominator<T: Real>(coeffs: &[T], n: usize, m: usize) -> Result<(Vec<T>, f64)> {
    let c = |k: isize| if k < 0 { T::zero() } else { coeffs[k as usize] };
    let a: Vec<Vec<T>> = (1..=n)
        .map(|i| (1..=n).map(|j| c((m + i) as isize - j as isize)).collect())
        .collect();
    let b: Vec<T> = (1..=n).map(|i| -c((m + i) as isize)).collect();
    if b.iter().all(|&x| x == T::zero()) {
        // series already terminates at order m
        return Ok((vec![T::zero(); n], 0.0));
    }
    solve_dense(a, b)
}

fn numerator<T: Real>(coeffs: &[T], den: &[T], m: usize) -> Vec<T> {
    let q = |j: usize| if j == 0 { T::one() } else { den[j - 1] };
    (0..=m)
        .map(|i| (0..=i.min(den.len())).fold(T::zero(), |acc, j| acc + q(j) * coeffs[i - j]))
        .collect()
}

fn reproduces<T: Real>(pa: &PadeApproximant<T>, coeffs: &[T]) -> bool {
    let scale = coeffs.iter().fold(T::zero(), |acc, c| acc.max(c.abs()));
    let tol = T::from_f64(1e-9) * scale;
    pa.series(coeffs.len()).iter().zip(coeffs).all(|(&a, &b)| (a - b).abs() <= tol)
}

/// Gaussian elimination with partial pivoting plus a 1-norm condition estimate.
fn solve_dense<T: Real>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Result<(Vec<T>, f64)> {
    let n = b.len();
    let norm_a = (0..n)
        .map(|j| a.iter().fold(T::zero(), |acc, row| acc + row[j].abs()))
        .fold(T::zero(), T::max);
    if norm_a == T::zero() {
        return Err(PsletError::SingularSystem { condition: f64::INFINITY });
    }
    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap_or(std::cmp::Ordering::Equal))
            .unwrap_or(col);
        if a[pivot][col] == T::zero() {
            return Err(PsletError::SingularSystem { condition: f64::INFINITY });
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        perm.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            a[row][col] = factor;
            for k in col + 1..n {
                let t = a[col][k];
                a[row][k] -= factor * t;
            }
            let t = b[col];
            b[row] -= factor * t;
        }
    }
    let back = |a: &Vec<Vec<T>>, mut y: Vec<T>| {
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..n {
                s -= a[i][k] * y[k];
            }
            y[i] = s / a[i][i];
        }
        y
    };
    let x = back(&a, b);

    // ||A^-1||_1 from the columns of the inverse
    let mut norm_inv = T::zero();
    for j in 0..n {
        let mut e: Vec<T> = perm.iter().map(|&p| if p == j { T::one() } else { T::zero() }).collect();
        for row in 1..n {
            for k in 0..row {
                let t = e[k];
                e[row] -= a[row][k] * t;
            }
        }
        let col = back(&a, e);
        norm_inv = norm_inv.max(col.iter().fold(T::zero(), |acc, &v| acc + v.abs()));
    }
    let condition = (norm_a * norm_inv).to_f64();
    if !condition.is_finite() || condition > MAX_CONDITION || x.iter().any(|v| !v.is_finite()) {
        return Err(PsletError::SingularSystem { condition });
    }
    Ok((x, condition))
}

impl<T: Real> PadeApproximant<T> {
    pub fn numerator_at(&self, x: T) -> T {
        horner(&self.num, x)
    }

    pub fn denominator_at(&self, x: T) -> T {
        T::one() + x * horner(&self.den, x)
    }

    /// `num(x) / den(x)` at `x = 1/lbar`.
    pub fn evaluate(&self, inv_lbar: T) -> Result<T> {
        let p = self.numerator_at(inv_lbar);
        let q = self.denominator_at(inv_lbar);
        if q.abs() < T::from_f64(1e-12) * p.abs() || q == T::zero() {
            return Err(PsletError::PoleAtEvaluation { at: inv_lbar.to_f64() });
        }
        Ok(p / q)
    }

    /// Taylor coefficients of `num/den` through `x^(len-1)`.
    pub fn series(&self, len: usize) -> Vec<T> {
        let mut out: Vec<T> = Vec::with_capacity(len);
        for k in 0..len {
            let mut s = self.num.get(k).copied().unwrap_or_else(T::zero);
            for j in 1..=self.den.len().min(k) {
                s -= self.den[j - 1] * out[k - j];
            }
            out.push(s);
        }
        out
    }

    /// Whether the denominator changes sign or vanishes on `(0, x_max]`.
    pub fn has_pole_in(&self, x_max: T) -> bool {
        let steps = 4096;
        let mut prev = self.denominator_at(T::zero());
        (1..=steps).any(|i| {
            let x = x_max * T::from_f64(i as f64 / steps as f64);
            let d = self.denominator_at(x);
            let crossed = d == T::zero() || (d < T::zero()) != (prev < T::zero());
            prev = d;
            crossed
        })
    }
}

/// `lbar^2 E(-2) + [n, m+1](1/lbar)` over the series coefficients `E(0)..`.
pub fn resummed_energy<T: Real>(exp: &EnergyExpansion<T>, pa: &PadeApproximant<T>) -> Result<T> {
    let inv = T::one() / exp.lbar;
    Ok(exp.lbar * exp.lbar * exp.e_minus2 + pa.evaluate(inv)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn geometric_series_is_recovered() {
        let c: Vec<f64> = (0..9).map(|n| 0.5f64.powi(n)).collect();
        let pa = fit(&c, 4, 4).unwrap();
        assert!((pa.num[0] - 1.0).abs() < 1e-12);
        assert!(pa.num[1..].iter().all(|x| x.abs() < 1e-12));
        assert!((pa.den[0] + 0.5).abs() < 1e-12);
        assert!(pa.den[1..].iter().all(|x| x.abs() < 1e-12));
        assert!((pa.evaluate(0.4).unwrap() - 1.25).abs() < 1e-12);
    }

    #[test]
    fn polynomial_series_has_trivial_denominator() {
        let c = [1.0, -2.0, 0.5, 3.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        let pa = fit(&c, 4, 4).unwrap();
        assert_eq!(pa.num, vec![1.0, -2.0, 0.5, 3.0, 0.0]);
        assert_eq!(pa.den, vec![0.0; 4]);
        let zero = fit(&[0.0; 9], 4, 4).unwrap();
        assert_eq!(zero.evaluate(0.7).unwrap(), 0.0);
    }

    #[test]
    fn value_at_origin_is_first_coefficient() {
        let c = [2.3, 0.1, -0.7, 0.2, 0.05, -0.3, 0.9, 0.4, -1.1];
        let pa = fit(&c, 4, 4).unwrap();
        assert_eq!(pa.evaluate(0.0).unwrap(), c[0]);
    }

    #[test]
    fn too_few_coefficients() {
        assert!(matches!(fit(&[1.0; 8], 4, 4), Err(PsletError::InvalidArgument(_))));
    }

    #[test]
    fn singular_block_is_reported() {
        // c_k = 0 for 1 <= k <= 7 but c_8 != 0: the Toeplitz block is identically zero
        let mut c = [0.0; 9];
        c[0] = 1.0;
        c[8] = 1.0;
        assert!(matches!(fit(&c, 4, 4), Err(PsletError::SingularSystem { .. })));
    }

    #[test]
    fn pole_is_detected() {
        // 1/(1 - 2x) has its pole at x = 0.5
        let c: Vec<f64> = (0..9).map(|n| 2f64.powi(n)).collect();
        let pa = fit(&c, 4, 4).unwrap();
        assert!(pa.has_pole_in(0.6));
        assert!(!pa.has_pole_in(0.4));
        assert!(matches!(pa.evaluate(0.5), Err(PsletError::PoleAtEvaluation { .. })));
    }

    fn rational_series(p: &[f64], q: &[f64], len: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(len);
        for k in 0..len {
            let mut s = p.get(k).copied().unwrap_or(0.0);
            for j in 1..=q.len().min(k) {
                s -= q[j - 1] * out[k - j];
            }
            out.push(s);
        }
        out
    }

    proptest! {
        #[test]
        fn re_expansion_matches_inputs(c in prop::collection::vec(-10.0f64..10.0, 9)) {
            if let Ok(pa) = fit(&c, 4, 4) {
                prop_assume!(pa.condition < 1e6 && pa.den.iter().map(|q| q.abs()).sum::<f64>() < 4.0);
                let back = pa.series(9);
                let scale = c.iter().fold(0.0f64, |m, x| m.max(x.abs()));
                for (x, y) in c.iter().zip(&back) {
                    prop_assert!((x - y).abs() <= 1e-9 * scale.max(x.abs()), "{x} vs {y}");
                }
                prop_assert_eq!(pa.evaluate(0.0).unwrap(), c[0]);
            }
        }

        #[test]
        fn rationals_are_recovered_exactly(
            p in prop::collection::vec(-2.0f64..2.0, 5),
            q in prop::collection::vec(-0.9f64..0.9, 4),
        ) {
            let c = rational_series(&p, &q, 9);
            let pa = fit(&c, 4, 4);
            prop_assume!(pa.as_ref().is_ok_and(|pa| pa.condition < 1e6));
            let pa = pa.unwrap();
            let back = pa.series(9);
            let scale = c.iter().fold(1.0f64, |m, x| m.max(x.abs()));
            for k in 0..9 {
                prop_assert!((back[k] - c[k]).abs() <= 1e-11 * scale);
            }
            for x in [0.1, 0.3, 0.5] {
                let direct = p.iter().rev().fold(0.0, |a, &v| a * x + v)
                    / (1.0 + x * q.iter().rev().fold(0.0, |a, &v| a * x + v));
                if let Ok(val) = pa.evaluate(x) {
                    prop_assert!((val - direct).abs() <= 1e-9 * direct.abs().max(1.0));
                }
            }
        }
    }
}
