//! Perturbation polynomials, the Riccati coefficient hierarchy and the
//! resulting energy series in powers of `1/lbar`.
//!
//! With `U'(x) = sum_k Y_k(x) lbar^(-k/2)` and `Y_k = U[k] + G[k-1]`, the
//! Riccati equation at half-power order `k` reads
//!
//! ```text
//! -1/2 Y_k' + w x Y_k + S_k = rhs_k,   S_k = v[k] - 1/2 sum_{a=1}^{k-1} Y_a Y_{k-a}
//! ```
//!
//! (`Y_0 = -w x`). Matching the coefficient of `x^m` for `m = deg S_k .. 1`
//! gives `y_{m-1} = ((m+1)/2 y_{m+1} - S_m) / w`, and the `x^0` equation
//! yields the energy coefficient at even `k`.

use serde::{Deserialize, Serialize};

use crate::error::{PsletError, Result};
use crate::leading::LeadingOrderSolution;
use crate::poly::Polynomial;
use crate::potential::PotentialSpec;
use crate::scalar::Real;

/// Hierarchy depth giving `E(0) .. E(8)`.
pub const DEFAULT_ORDER: usize = 18;

const MIN_FREQUENCY: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationTerms<T = f64> {
    /// `v[n]` multiplies `lbar^(-n/2)`.
    pub v: Vec<Polynomial<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrectionHierarchy<T = f64> {
    /// Odd polynomials; coefficient of `x^(2m-1)` in `u[n]` is `D_{m,n}`.
    pub u: Vec<Polynomial<T>>,
    /// Even polynomials; coefficient of `x^(2m)` in `g[n]` is `C_{m,n}`.
    pub g: Vec<Polynomial<T>>,
    /// `lambda[j]` sits at `lbar^-(j+1)` on the right-hand side.
    pub lambda: Vec<T>,
    /// Highest half-power order solved.
    pub order: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyExpansion<T = f64> {
    pub e_minus2: T,
    /// `q0^2 E(-1)`, zero up to rounding by the choice of `beta`.
    pub e_minus1_bracket: T,
    /// `e[n] = E(n)`, coefficient of `lbar^-n`.
    pub e: Vec<T>,
    pub lbar: T,
    pub beta: T,
    pub q0: T,
    /// `lbar^2 E(-2) + sum_n E(n) lbar^-n`
    pub total: T,
}

impl<T: Real> EnergyExpansion<T> {
    /// Partial sum through `E(n_max)`.
    pub fn partial_sum(&self, n_max: usize) -> T {
        let inv = T::one() / self.lbar;
        let series = self.e[..=n_max.min(self.e.len() - 1)]
            .iter()
            .rev()
            .fold(T::zero(), |acc, &c| acc * inv + c);
        self.lbar * self.lbar * self.e_minus2 + series
    }
}

/// Builds `v[0..=max_order]` with `Q = lbar^2`.
pub fn build_v_terms<T: Real>(
    pot: &PotentialSpec,
    lead: &LeadingOrderSolution<T>,
    max_order: usize,
) -> PerturbationTerms<T> {
    let LeadingOrderSolution { q0, w, beta, lbar, .. } = *lead;
    let q = lbar * lbar;
    let half = T::from_f64(0.5);
    let two_beta_1 = T::from_f64(2.0) * beta + T::one();
    let beta_beta_1 = beta * (beta + T::one());

    let mut v = Vec::with_capacity(max_order + 1);
    for n in 0..=max_order {
        let mut c = vec![T::zero(); n + 3];
        match n {
            0 => {
                c[2] = half * w * w;
                c[0] = half * two_beta_1;
            }
            1 => {
                c[1] = -two_beta_1;
                c[3] = T::from_f64(-2.0)
                    + q0.powi(5) * pot.derivative_at(3, q0) / (T::from_f64(6.0) * q);
            }
            _ => {
                let sign = if n % 2 == 0 { T::one() } else { -T::one() };
                let factorial: f64 = (1..=n + 2).map(|j| j as f64).product();
                c[n] += sign * two_beta_1 * T::from_f64((n + 1) as f64 / 2.0);
                c[n - 2] += sign * half * beta_beta_1 * T::from_usize(n - 1);
                c[n + 2] += sign * T::from_f64((n + 3) as f64 / 2.0)
                    + q0.powi((n + 4) as i32) * pot.derivative_at(n + 2, q0)
                        / (q * T::from_f64(factorial));
            }
        }
        v.push(Polynomial::new(c));
    }
    PerturbationTerms { v }
}

/// Solves the hierarchy through half-power order `k_max`.
pub fn solve_hierarchy<T: Real>(
    terms: &PerturbationTerms<T>,
    lead: &LeadingOrderSolution<T>,
    k_max: usize,
) -> Result<CorrectionHierarchy<T>> {
    if lead.n_r != 0 {
        return Err(PsletError::InvalidArgument(
            "the exponential ansatz only covers nodeless states (n_r = 0)".into(),
        ));
    }
    if k_max < 2 {
        return Err(PsletError::InvalidArgument(format!("hierarchy order {k_max} < 2")));
    }
    if terms.v.len() <= k_max {
        return Err(PsletError::InsufficientOrder { have: terms.v.len().saturating_sub(1), need: k_max });
    }
    let w = lead.w;
    if !(w > T::from_f64(MIN_FREQUENCY)) {
        return Err(PsletError::DegenerateFrequency { w: w.to_f64() });
    }
    let half = T::from_f64(0.5);
    let beta_beta_1 = lead.beta * (lead.beta + T::one());

    let mut y: Vec<Polynomial<T>> = vec![Polynomial::monomial(-w, 1)];
    let mut lambda = Vec::with_capacity(k_max / 2);
    for k in 1..=k_max {
        let products: Vec<Polynomial<T>> = (1..k).map(|a| y[a].multiply(&y[k - a])).collect();
        let s = Polynomial::linear_combine(
            std::iter::once((T::one(), &terms.v[k])).chain(products.iter().map(|p| (-half, p))),
        );
        let d = s.degree();
        let mut yk = vec![T::zero(); d + 2];
        for m in (1..=d).rev() {
            yk[m - 1] = (half * T::from_usize(m + 1) * yk[m + 1] - s.coeff(m)) / w;
        }
        if k % 2 == 0 {
            let rhs = -half * yk[1] + s.coeff(0);
            lambda.push(if k == 2 { rhs - half * beta_beta_1 } else { rhs });
        }
        y.push(Polynomial::new(yk));
    }

    let mut u = Vec::with_capacity(k_max + 1);
    let mut g = Vec::with_capacity(k_max);
    u.push(y[0].clone());
    for yk in &y[1..] {
        let (even, odd) = yk.split_parity();
        u.push(odd);
        g.push(even);
    }
    Ok(CorrectionHierarchy { u, g, lambda, order: k_max })
}

impl<T: Real> CorrectionHierarchy<T> {
    /// `Y_k = U[k] + G[k-1]`, the full coefficient of `lbar^(-k/2)` in `U'`.
    pub fn combined(&self, k: usize) -> Polynomial<T> {
        if k == 0 {
            self.u[0].clone()
        } else {
            &self.u[k] + &self.g[k - 1]
        }
    }

    /// `D_{m,n}`
    pub fn d(&self, m: usize, n: usize) -> T {
        if m == 0 {
            return T::zero();
        }
        self.u[n].coeff(2 * m - 1)
    }

    /// `C_{m,n}`
    pub fn c(&self, m: usize, n: usize) -> T {
        self.g[n].coeff(2 * m)
    }

    /// Largest coefficient of the Riccati residual at each order, relative
    /// to the largest coefficient among the terms entering that order.
    pub fn residuals(&self, terms: &PerturbationTerms<T>, lead: &LeadingOrderSolution<T>) -> Vec<T> {
        let half = T::from_f64(0.5);
        let y: Vec<Polynomial<T>> = (0..=self.order).map(|k| self.combined(k)).collect();
        (0..=self.order)
            .map(|k| {
                let dy = y[k].differentiate();
                let products: Vec<Polynomial<T>> = (0..=k).map(|a| y[a].multiply(&y[k - a])).collect();
                let rhs = match k {
                    0 => T::zero(),
                    2 => half * lead.beta * (lead.beta + T::one()) + self.lambda[0],
                    _ if k % 2 == 0 => self.lambda[k / 2 - 1],
                    _ => T::zero(),
                };
                let rhs = Polynomial::constant(rhs);
                let residual = Polynomial::linear_combine(
                    [(-half, &dy), (T::one(), &terms.v[k]), (-T::one(), &rhs)]
                        .into_iter()
                        .chain(products.iter().map(|p| (-half, p))),
                );
                let scale = products
                    .iter()
                    .map(|p| half * p.max_abs_coeff())
                    .chain([half * dy.max_abs_coeff(), terms.v[k].max_abs_coeff(), rhs.max_abs_coeff()])
                    .fold(T::zero(), T::max);
                if scale == T::zero() {
                    residual.max_abs_coeff()
                } else {
                    residual.max_abs_coeff() / scale
                }
            })
            .collect()
    }

    pub fn max_residual(&self, terms: &PerturbationTerms<T>, lead: &LeadingOrderSolution<T>) -> T {
        self.residuals(terms, lead).into_iter().fold(T::zero(), T::max)
    }
}

/// `E(0) = (beta(beta+1)/2 + lambda[0]) / q0^2`, `E(n) = lambda[n] / q0^2`.
pub fn energy_expansion<T: Real>(
    h: &CorrectionHierarchy<T>,
    lead: &LeadingOrderSolution<T>,
    n_max: usize,
) -> Result<EnergyExpansion<T>> {
    let need = 2 * (n_max + 1);
    if h.order < need {
        return Err(PsletError::InsufficientOrder { have: h.order, need });
    }
    let half = T::from_f64(0.5);
    let q0_sq = lead.q0 * lead.q0;
    let e: Vec<T> = (0..=n_max)
        .map(|n| {
            if n == 0 {
                (half * lead.beta * (lead.beta + T::one()) + h.lambda[0]) / q0_sq
            } else {
                h.lambda[n] / q0_sq
            }
        })
        .collect();
    let weight = T::from_f64(f64::from(lead.n_r)) + half;
    let e_minus1_bracket = half * (T::from_f64(2.0) * lead.beta + T::one()) + weight * lead.w;
    let mut out = EnergyExpansion {
        e_minus2: lead.e_minus2,
        e_minus1_bracket,
        e,
        lbar: lead.lbar,
        beta: lead.beta,
        q0: lead.q0,
        total: T::zero(),
    };
    out.total = out.partial_sum(n_max);
    Ok(out)
}

/// `U'(x)` truncated at the solved order.
pub fn log_derivative<T: Real>(h: &CorrectionHierarchy<T>, lead: &LeadingOrderSolution<T>, x: T) -> T {
    let step = T::one() / lead.lbar.sqrt();
    let mut acc = T::zero();
    let mut weight = T::one();
    for k in 0..=h.order {
        acc += h.combined(k).eval(x) * weight;
        weight *= step;
    }
    acc
}

/// The first hierarchy coefficients written out by hand.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LowOrderClosedForm<T = f64> {
    pub b1: T,
    pub b2: T,
    pub c10: T,
    pub c00: T,
    pub d22: T,
    pub d12: T,
    pub lambda0: T,
}

pub fn low_order_closed_form<T: Real>(pot: &PotentialSpec, lead: &LeadingOrderSolution<T>) -> LowOrderClosedForm<T> {
    let LeadingOrderSolution { q0, w, beta, lbar, .. } = *lead;
    let q = lbar * lbar;
    let two_beta_1 = T::from_f64(2.0) * beta + T::one();
    let half = T::from_f64(0.5);
    let b1 = T::from_f64(-2.0) + q0.powi(5) / (T::from_f64(6.0) * q) * pot.derivative_at(3, q0);
    let b2 = T::from_f64(2.5) + q0.powi(6) / (T::from_f64(24.0) * q) * pot.derivative_at(4, q0);
    let c10 = -b1 / w;
    let c00 = (c10 + two_beta_1) / w;
    let d22 = (half * c10 * c10 - b2) / w;
    let d12 = (T::from_f64(1.5) * d22 + c00 * c10 - T::from_f64(1.5) * two_beta_1) / w;
    let lambda0 = -half * (d12 + c00 * c00);
    LowOrderClosedForm { b1, b2, c10, c00, d22, d12, lambda0 }
}
