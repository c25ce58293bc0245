//! Expansion point, harmonic frequency and shift of the leading order.
//!
//! The expansion point `q0` minimizes `E(-2)(q) = 1/(2q^2) + V(q)/Q` with
//! `Q = lbar^2`; the stationarity condition is `lbar = sqrt(q0^3 V'(q0))`.
//! Combined with `lbar = l - beta`, `beta = -(1/2 + (n_r + 1/2) w)` and
//! `w^2 = 3 + q0 V''/V'`, this gives one scalar equation in `q0`.

use serde::{Deserialize, Serialize};

use crate::error::{PsletError, Result};
use crate::potential::PotentialSpec;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeadingOrderSolution<T = f64> {
    pub l: T,
    pub n_r: u32,
    pub q0: T,
    pub w: T,
    pub beta: T,
    /// `l - beta`
    pub lbar: T,
    pub e_minus2: T,
    /// `lbar^2 * e_minus2`
    pub leading_energy: T,
}

impl<T: Real> LeadingOrderSolution<T> {
    pub fn to_f64(&self) -> LeadingOrderSolution<f64> {
        LeadingOrderSolution {
            l: self.l.to_f64(),
            n_r: self.n_r,
            q0: self.q0.to_f64(),
            w: self.w.to_f64(),
            beta: self.beta.to_f64(),
            lbar: self.lbar.to_f64(),
            e_minus2: self.e_minus2.to_f64(),
            leading_energy: self.leading_energy.to_f64(),
        }
    }

    /// `|l - beta - sqrt(q0^3 V'(q0))|`
    pub fn stationarity_residual(&self, pot: &PotentialSpec) -> T {
        let s = (self.q0.powi(3) * pot.derivative_at(1, self.q0)).sqrt();
        (self.l - self.beta - s).abs()
    }
}

/// `w = sqrt(3 + q0 V''(q0) / V'(q0))`
pub fn frequency_w<T: Real>(pot: &PotentialSpec, q0: T) -> Result<T> {
    let dv = pot.derivative_at(1, q0);
    if dv == T::zero() {
        return Err(PsletError::NonBinding { q0: q0.to_f64(), reason: "V'(q0) = 0" });
    }
    let radicand = T::from_f64(3.0) + q0 * pot.derivative_at(2, q0) / dv;
    if !(radicand > T::zero()) {
        return Err(PsletError::NonBinding { q0: q0.to_f64(), reason: "w^2 <= 0" });
    }
    Ok(radicand.sqrt())
}

/// `beta = -(1/2 + (n_r + 1/2) w)`
pub fn shift_beta<T: Real>(w: T, n_r: u32) -> T {
    let half = T::from_f64(0.5);
    -(half + (T::from_f64(f64::from(n_r)) + half) * w)
}

/// `1/(2 q0^2) + V(q0)/lbar^2`
pub fn e_minus2<T: Real>(pot: &PotentialSpec, q0: T, lbar: T) -> T {
    T::one() / (T::from_f64(2.0) * q0 * q0) + pot.value(q0) / (lbar * lbar)
}

/// Second derivative of `E(-2)` in `q0` at fixed `Q = lbar^2`.
pub fn e_minus2_curvature<T: Real>(pot: &PotentialSpec, q0: T, lbar: T) -> T {
    T::from_f64(3.0) / q0.powi(4) + pot.derivative_at(2, q0) / (lbar * lbar)
}

/// Value and derivative of
/// `f(q) = l + 1/2 + (n_r + 1/2) w(q) - sqrt(q^3 V'(q))`,
/// or `None` outside the admissible set `{V' > 0, w^2 > 0}`.
fn root_function<T: Real>(pot: &PotentialSpec, l: T, n_r: u32, q: T) -> Option<(T, T)> {
    let v1 = pot.derivative_at(1, q);
    if !(v1 > T::zero()) {
        return None;
    }
    let v2 = pot.derivative_at(2, q);
    let v3 = pot.derivative_at(3, q);
    let w2 = T::from_f64(3.0) + q * v2 / v1;
    if !(w2 > T::zero()) {
        return None;
    }
    let w = w2.sqrt();
    let half = T::from_f64(0.5);
    let weight = T::from_f64(f64::from(n_r)) + half;
    let s = (q.powi(3) * v1).sqrt();
    let f = l + half + weight * w - s;

    let dw2 = v2 / v1 + q * v3 / v1 - q * v2 * v2 / (v1 * v1);
    let dw = dw2 / (T::from_f64(2.0) * w);
    let ds = (T::from_f64(3.0) * q * q * v1 + q.powi(3) * v2) / (T::from_f64(2.0) * s);
    Some((f, weight * dw - ds))
}

/// Safeguarded Newton iteration inside a sign-changing bracket.
fn refine_root<T: Real>(eval: impl Fn(T) -> Option<(T, T)>, mut a: T, mut b: T, fa: T) -> T {
    let negative_at_a = fa < T::zero();
    let two = T::from_f64(2.0);
    let eps = T::from_f64(T::EPSILON);
    let mut x = (a + b) / two;
    for _ in 0..300 {
        let Some((fx, dfx)) = eval(x) else {
            // stepped out of the admissible set; fall back to bisection
            let m = (a + b) / two;
            if m == x {
                return x;
            }
            x = m;
            continue;
        };
        if fx == T::zero() {
            return x;
        }
        if (fx < T::zero()) == negative_at_a {
            a = x;
        } else {
            b = x;
        }
        let newton = if dfx != T::zero() { x - fx / dfx } else { a };
        let next = if newton > a.min(b) && newton < a.max(b) {
            newton
        } else {
            (a + b) / two
        };
        let tol = two * eps * x.abs();
        if (next - x).abs() <= tol || (b - a).abs() <= two * tol {
            return next;
        }
        x = next;
    }
    x
}

/// Solves for the expansion point and everything fixed by it.
///
/// Without a hint the search starts on `[edge + 1e-6, edge + 1]`, `edge`
/// being the outermost positive zero of `V'`, and doubles the right end
/// until the root function changes sign. All sign changes inside the final
/// bracket are refined; the root that minimizes `E(-2)` with positive
/// curvature wins, ties going to the smaller `q0`.
pub fn solve_q0<T: Real>(
    pot: &PotentialSpec,
    l: f64,
    n_r: u32,
    bracket_hint: Option<(f64, f64)>,
) -> Result<LeadingOrderSolution<T>> {
    if !l.is_finite() || l < -0.5 {
        return Err(PsletError::InvalidArgument(format!("l = {l} must satisfy l >= -1/2")));
    }
    let lt = T::from_f64(l);
    let f = |q: f64| root_function(pot, l, n_r, q).map(|v| v.0);

    let samples: Vec<f64> = match bracket_hint {
        Some((a, b)) => {
            if !(a > 0.0 && b > a && b.is_finite()) {
                return Err(PsletError::InvalidArgument(format!("bad q0 bracket [{a}, {b}]")));
            }
            let n = 2048;
            (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect()
        }
        None => {
            let edge = pot.outermost_stationary_point();
            let d_lo = 1e-6;
            let mut d_hi = 1.0;
            loop {
                let changes = matches!(
                    (f(edge + d_lo), f(edge + d_hi)),
                    (Some(x), Some(y)) if x * y < 0.0
                );
                if changes || d_hi >= 1e6 {
                    break;
                }
                d_hi *= 2.0;
            }
            // geometric spacing in the offset from the edge
            let n = 2048;
            let ratio = (d_hi / d_lo).powf(1.0 / n as f64);
            (0..=n).map(|i| edge + d_lo * ratio.powi(i)).collect()
        }
    };

    let mut candidates: Vec<LeadingOrderSolution<T>> = Vec::new();
    let mut inadmissible = false;
    for pair in samples.windows(2) {
        let (Some(fa), Some(fb)) = (f(pair[0]), f(pair[1])) else {
            inadmissible = true;
            continue;
        };
        if fa * fb > 0.0 || (fa == 0.0 && fb == 0.0) || fb == 0.0 {
            continue;
        }
        let q0 = if fa == 0.0 {
            T::from_f64(pair[0])
        } else {
            refine_root(
                |q: T| root_function(pot, lt, n_r, q),
                T::from_f64(pair[0]),
                T::from_f64(pair[1]),
                T::from_f64(fa),
            )
        };
        let w = frequency_w(pot, q0)?;
        let beta = shift_beta(w, n_r);
        let lbar = lt - beta;
        if !(lbar > T::zero()) {
            continue;
        }
        let e2 = e_minus2(pot, q0, lbar);
        candidates.push(LeadingOrderSolution {
            l: lt,
            n_r,
            q0,
            w,
            beta,
            lbar,
            e_minus2: e2,
            leading_energy: lbar * lbar * e2,
        });
    }

    let total = candidates.len();
    candidates.retain(|c| e_minus2_curvature(pot, c.q0, c.lbar) > T::zero());
    candidates
        .into_iter()
        .reduce(|best, c| {
            let tie = T::from_f64(1e-12) * best.e_minus2.abs().max(T::one());
            let lower = c.e_minus2 < best.e_minus2 - tie;
            let tied_nearer = (c.e_minus2 - best.e_minus2).abs() <= tie && c.q0 < best.q0;
            if lower || tied_nearer {
                c
            } else {
                best
            }
        })
        .ok_or_else(|| {
            PsletError::NoRoot(if total > 0 {
                format!("{total} root(s) found, none is a minimum of E(-2)")
            } else if inadmissible {
                format!("no sign change for l = {l} in the admissible region (V' > 0, w^2 > 0)")
            } else {
                format!("no sign change for l = {l} in [{}, {}]", samples[0], samples[samples.len() - 1])
            })
        })
}
