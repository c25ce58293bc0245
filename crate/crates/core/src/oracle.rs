//! Grid eigenvalue solver for the reduced radial equation
//!
//! ```text
//! -u''/2 + [l(l+1)/(2q^2) + V(q)] u = E u,   u(r_min) = u(r_max) = 0
//! ```
//!
//! Numerov integration runs outward to the outer classical turning point
//! and inward from `r_max`; the eigenvalue is bracketed by node counting
//! and refined by bisection on the derivative jump at the matching point.
//! Two grids (step `h` and `h/2`) are solved and Richardson-combined.

use crate::error::{PsletError, Result};
use crate::potential::PotentialSpec;
use crate::scalar::Real;

/// WKB decay (in e-folds) required between a turning point and a boundary.
const DECAY_EFOLDS: f64 = 40.0;
const RESCALE_ABOVE: f64 = 1e120;

#[derive(Clone, Debug, PartialEq)]
pub struct OracleConfig {
    /// Inner boundary; zero unless the centrifugal barrier makes it negligible.
    pub r_min: f64,
    pub r_max: f64,
    /// Points of the coarse grid, boundaries included.
    pub n_points: usize,
    pub energy_bracket: (f64, f64),
    /// Interior nodes of the wanted state (`n_r`).
    pub node_target: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleSolution<T = f64> {
    /// Richardson combination of the two grids.
    pub energy: T,
    pub coarse: T,
    pub fine: T,
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.energy_bracket;
        if !(self.r_max > 0.0 && self.r_max.is_finite()) {
            return Err(PsletError::InvalidArgument(format!("r_max = {} must be positive", self.r_max)));
        }
        if !(self.r_min >= 0.0 && self.r_min < self.r_max) {
            return Err(PsletError::InvalidArgument(format!("r_min = {} outside [0, r_max)", self.r_min)));
        }
        if self.n_points < 1000 {
            return Err(PsletError::InvalidArgument(format!("n_points = {} < 1000", self.n_points)));
        }
        if !(lo < hi) {
            return Err(PsletError::InvalidArgument(format!("energy bracket [{lo}, {hi}] not ordered")));
        }
        Ok(())
    }

    /// Picks boundaries and bracket from the potential alone.
    ///
    /// The bracket starts at the minimum of the effective potential and its
    /// top is raised until the state with `node_target` nodes lies below it.
    /// `r_max` sits `DECAY_EFOLDS` WKB e-folds beyond the outer turning point
    /// of the bracket top, `r_min` the same distance inside the inner one.
    pub fn auto(pot: &PotentialSpec, l: f64, node_target: usize) -> Result<Self> {
        if !l.is_finite() || l < -0.5 {
            return Err(PsletError::InvalidArgument(format!("l = {l} must satisfy l >= -1/2")));
        }
        let lead = pot.coeff(pot.degree());
        if pot.degree() < 2 || pot.degree() % 2 == 1 || lead <= 0.0 {
            return Err(PsletError::InvalidPotential(
                "oracle needs a confining potential (even degree >= 2, positive leading coefficient)".into(),
            ));
        }
        let veff = |q: f64| effective(pot, l, q);

        // locate the minimum on a log grid, then polish by golden section
        let (mut q_min, mut v_min) = (0.0, f64::INFINITY);
        for i in 0..=8000 {
            let q = 10f64.powf(-6.0 + 10.0 * i as f64 / 8000.0);
            let v = veff(q);
            if v < v_min {
                q_min = q;
                v_min = v;
            }
        }
        if l == 0.0 && pot.value(0.0) <= v_min {
            q_min = 0.0;
            v_min = pot.value(0.0);
        } else {
            let (mut a, mut b) = (q_min / 1.01, q_min * 1.01);
            let g = 0.5 * (5f64.sqrt() - 1.0);
            for _ in 0..200 {
                let c = b - g * (b - a);
                let d = a + g * (b - a);
                if veff(c) < veff(d) {
                    b = d;
                } else {
                    a = c;
                }
            }
            q_min = 0.5 * (a + b);
            v_min = v_min.min(veff(q_min));
        }

        let mut width = 1.0f64.max(0.1 * v_min.abs());
        for _ in 0..200 {
            let e_hi = v_min + width;
            let (r_min, r_max) = boundaries(pot, l, q_min, e_hi);
            let cfg = Self { r_min, r_max, n_points: 4000, energy_bracket: (v_min, e_hi), node_target };
            let grid = Grid::<f64>::new(pot, l, &cfg, cfg.n_points);
            if grid.nodes_below(e_hi) > node_target {
                let n_points = default_points(pot, l, &cfg);
                return Ok(Self { n_points, ..cfg });
            }
            width *= 2.0;
        }
        Err(PsletError::NoEigenvalueInBracket { lo: v_min, hi: v_min + width, nodes: node_target })
    }
}

fn effective<T: Real>(pot: &PotentialSpec, l: f64, q: T) -> T {
    let centrifugal = l * (l + 1.0);
    if centrifugal == 0.0 {
        pot.value(q)
    } else {
        T::from_f64(centrifugal) / (T::from_f64(2.0) * q * q) + pot.value(q)
    }
}

fn boundaries(pot: &PotentialSpec, l: f64, q_min: f64, e: f64) -> (f64, f64) {
    let kappa = |q: f64| (2.0 * (effective(pot, l, q) - e)).max(0.0).sqrt();
    let scale = q_min.max(1e-3);

    // outer: step outward to the turning point, then integrate the decay
    let mut q = q_min.max(scale * 1e-3);
    let mut step = scale * 1e-3;
    while effective(pot, l, q) < e {
        q += step;
        step *= 1.02;
    }
    let mut decay = 0.0;
    let step = scale * 1e-4;
    let mut step_out = step;
    while decay < DECAY_EFOLDS {
        decay += kappa(q + 0.5 * step_out) * step_out;
        q += step_out;
        step_out = (step_out * 1.01).min(1e-2 * q);
    }
    let r_max = q;

    let mut r_min = 0.0;
    if l > 0.0 && q_min > 0.0 {
        let mut q = q_min;
        let mut step = q_min * 1e-3;
        while q > step && effective(pot, l, q) < e {
            q -= step;
        }
        let mut decay = 0.0;
        step = q * 1e-4;
        while decay < DECAY_EFOLDS && q > step {
            decay += kappa(q - 0.5 * step) * step;
            q -= step;
        }
        if decay >= DECAY_EFOLDS {
            r_min = q;
        }
    }
    (r_min, r_max)
}

// ~400 points per local wavelength at the bracket top
fn default_points(pot: &PotentialSpec, l: f64, cfg: &OracleConfig) -> usize {
    let k_max = (2.0 * (cfg.energy_bracket.1 - effective(pot, l, 0.5 * (cfg.r_min + cfg.r_max)).min(cfg.energy_bracket.0)))
        .max(1.0)
        .sqrt();
    let wavelengths = (cfg.r_max - cfg.r_min) * k_max / (2.0 * std::f64::consts::PI);
    ((wavelengths * 400.0) as usize).clamp(4000, 40_000)
}

struct Grid<T> {
    h: T,
    /// `2 V_eff(q_i)`; the entry at the origin is unused
    two_veff: Vec<T>,
    /// The grid starts at the origin, where the first points come from the
    /// regular series `u = r^(l+1) sum_j b_j r^j` instead of the recursion.
    origin: Option<Frobenius>,
}

struct Frobenius {
    l: f64,
    coeffs: Vec<f64>,
}

const SERIES_TERMS: usize = 24;

impl Frobenius {
    /// `u(r) / h^(l+1)` at `r = k h`, from
    /// `j (j + 2l + 1) b_j = 2 (sum_k c_k b_(j-2-k) - E b_(j-2))`.
    fn value<T: Real>(&self, e: T, h: T, k: usize) -> T {
        let mut b: Vec<T> = vec![T::one()];
        for j in 1..SERIES_TERMS {
            let mut acc = T::zero();
            if j >= 2 {
                acc -= e * b[j - 2];
                for (kk, &c) in self.coeffs.iter().enumerate() {
                    if c != 0.0 && kk + 2 <= j {
                        acc += T::from_f64(c) * b[j - 2 - kk];
                    }
                }
            }
            b.push(T::from_f64(2.0) * acc / T::from_f64(j as f64 * (j as f64 + 2.0 * self.l + 1.0)));
        }
        let r = h * T::from_usize(k);
        let series = b.iter().rev().fold(T::zero(), |acc, &c| acc * r + c);
        let ratio = if self.l.fract() == 0.0 {
            T::from_usize(k).powi(self.l as i32 + 1)
        } else {
            T::from_f64((k as f64).powf(self.l + 1.0))
        };
        ratio * series
    }
}

impl<T: Real> Grid<T> {
    fn new(pot: &PotentialSpec, l: f64, cfg: &OracleConfig, n: usize) -> Self {
        let r_min = T::from_f64(cfg.r_min);
        let h = (T::from_f64(cfg.r_max) - r_min) / T::from_usize(n - 1);
        let origin = (cfg.r_min == 0.0).then(|| Frobenius { l, coeffs: pot.coeffs().to_vec() });
        let two_veff = (0..n)
            .map(|i| {
                if i == 0 && origin.is_some() {
                    T::zero()
                } else {
                    T::from_f64(2.0) * effective(pot, l, r_min + h * T::from_usize(i))
                }
            })
            .collect();
        Self { h, two_veff, origin }
    }

    fn len(&self) -> usize {
        self.two_veff.len()
    }

    // Numerov weights f_i = 1 - h^2 k_i / 12 with u'' = k u
    fn weights(&self, e: T) -> Vec<T> {
        let c = self.h * self.h / T::from_f64(12.0);
        let two_e = T::from_f64(2.0) * e;
        self.two_veff.iter().map(|&v| T::one() - c * (v - two_e)).collect()
    }

    /// Outward sweep over `0..=end`; returns (values, node count).
    fn outward(&self, e: T, f: &[T], end: usize) -> (Vec<T>, usize) {
        let mut u = vec![T::zero(); end + 1];
        let first = match &self.origin {
            Some(series) => {
                u[1] = series.value(e, self.h, 1);
                u[2] = series.value(e, self.h, 2);
                2
            }
            None => {
                u[1] = T::from_f64(1e-30);
                1
            }
        };
        let twelve = T::from_f64(12.0);
        let ten = T::from_f64(10.0);
        for i in first..end {
            u[i + 1] = ((twelve - ten * f[i]) * u[i] - f[i - 1] * u[i - 1]) / f[i + 1];
            if u[i + 1].abs() > T::from_f64(RESCALE_ABOVE) {
                let s = T::one() / u[i + 1].abs();
                for x in &mut u[..=i + 1] {
                    *x *= s;
                }
            }
        }
        let nodes = count_nodes(&u[1..]);
        (u, nodes)
    }

    /// Inward sweep over `start..len`; returns (values indexed from `start`, node count).
    fn inward(&self, f: &[T], start: usize) -> (Vec<T>, usize) {
        let n = self.len();
        let mut u = vec![T::zero(); n - start];
        let last = n - 1 - start;
        u[last - 1] = T::from_f64(1e-30);
        let twelve = T::from_f64(12.0);
        let ten = T::from_f64(10.0);
        for j in (1..last).rev() {
            let i = j + start;
            u[j - 1] = ((twelve - ten * f[i]) * u[j] - f[i + 1] * u[j + 1]) / f[i - 1];
            if u[j - 1].abs() > T::from_f64(RESCALE_ABOVE) {
                let s = T::one() / u[j - 1].abs();
                for x in &mut u[j - 1..] {
                    *x *= s;
                }
            }
        }
        let nodes = count_nodes(&u[..last]);
        (u, nodes)
    }

    fn turning_index(&self, e: T) -> usize {
        let two_e = T::from_f64(2.0) * e;
        let n = self.len();
        let last_allowed = (0..n).rev().find(|&i| self.two_veff[i] < two_e && !(i == 0 && self.origin.is_some()));
        last_allowed.unwrap_or(n / 2).clamp(3, n - 3)
    }

    /// Number of eigenvalues below `e` (Sturm count of the outward solution).
    fn nodes_below(&self, e: T) -> usize {
        let f = self.weights(e);
        self.outward(e, &f, self.len() - 1).1
    }

    /// Positive when `e` lies above the eigenvalue with `target` nodes.
    fn compare(&self, e: T, target: usize) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        let f = self.weights(e);
        let m = self.turning_index(e);
        let (out, n_out) = self.outward(e, &f, m);
        let (inw, n_in) = self.inward(&f, m);
        let nodes = n_out + n_in;
        if nodes != target {
            return nodes.cmp(&target);
        }
        let scale = out[m] / inw[0];
        let (um, u_left, u_right) = (out[m], out[m - 1], inw[1] * scale);
        // discontinuity of the Numerov three-point relation at m
        let jump = (f[m - 1] * u_left + f[m + 1] * u_right - (T::from_f64(12.0) - T::from_f64(10.0) * f[m]) * um) / self.h;
        if jump * um > T::zero() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    fn eigenvalue(&self, cfg: &OracleConfig) -> Result<T> {
        use std::cmp::Ordering;
        let (lo0, hi0) = cfg.energy_bracket;
        let mut lo = T::from_f64(lo0);
        let mut hi = T::from_f64(hi0);
        let target = cfg.node_target;
        let none = PsletError::NoEigenvalueInBracket { lo: lo0, hi: hi0, nodes: target };
        if self.nodes_below(hi) <= target || self.nodes_below(lo) > target {
            return Err(none);
        }
        let two = T::from_f64(2.0);
        let tol = T::from_f64(4.0 * T::EPSILON);
        for _ in 0..400 {
            let mid = (lo + hi) / two;
            if mid <= lo || mid >= hi || hi - lo <= tol * mid.abs().max(T::one()) {
                break;
            }
            match self.compare(mid, target) {
                Ordering::Greater => hi = mid,
                _ => lo = mid,
            }
        }
        Ok((lo + hi) / two)
    }
}

fn count_nodes<T: Real>(u: &[T]) -> usize {
    let mut nodes = 0;
    let mut prev_sign = 0i8;
    for &x in u {
        let s = if x > T::zero() {
            1
        } else if x < T::zero() {
            -1
        } else {
            0
        };
        if s != 0 {
            if prev_sign != 0 && s != prev_sign {
                nodes += 1;
            }
            prev_sign = s;
        }
    }
    nodes
}

/// Eigenvalue on the coarse and the step-halved grid, Richardson-combined.
pub fn solve_radial_detailed<T: Real>(pot: &PotentialSpec, l: f64, cfg: &OracleConfig) -> Result<OracleSolution<T>> {
    cfg.validate()?;
    let coarse = Grid::<T>::new(pot, l, cfg, cfg.n_points).eigenvalue(cfg)?;
    let fine = Grid::<T>::new(pot, l, cfg, 2 * cfg.n_points - 1).eigenvalue(cfg)?;
    if (fine - coarse).abs() > T::from_f64(1e-8) {
        return Err(PsletError::GridTooCoarse { coarse: coarse.to_f64(), fine: fine.to_f64() });
    }
    let energy = fine + (fine - coarse) / T::from_f64(15.0);
    Ok(OracleSolution { energy, coarse, fine })
}

pub fn solve_radial<T: Real>(pot: &PotentialSpec, l: f64, cfg: &OracleConfig) -> Result<T> {
    solve_radial_detailed(pot, l, cfg).map(|s| s.energy)
}

/// Radial function `u(q)` at energy `e` on the coarse grid, outward and
/// inward pieces joined at the turning point, normalized to `max |u| = 1`.
pub fn wavefunction(pot: &PotentialSpec, l: f64, cfg: &OracleConfig, e: f64) -> (Vec<f64>, Vec<f64>) {
    let grid = Grid::<f64>::new(pot, l, cfg, cfg.n_points);
    let f = grid.weights(e);
    let m = grid.turning_index(e);
    let (mut u, _) = grid.outward(e, &f, m);
    let (inw, _) = grid.inward(&f, m);
    let scale = u[m] / inw[0];
    u.extend(inw[1..].iter().map(|x| x * scale));
    let norm = u.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let sign = if u[m] < 0.0 { -1.0 } else { 1.0 };
    let u = u.into_iter().map(|x| sign * x / norm).collect();
    let q = (0..grid.len()).map(|i| cfg.r_min + grid.h * i as f64).collect();
    (q, u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_levels() {
        let pot = PotentialSpec::quartic(0.5, 0.0).unwrap();
        for (l, n) in [(0.0, 0), (0.0, 1), (1.0, 0), (2.0, 0), (5.0, 0), (10.0, 1), (50.0, 0)] {
            let cfg = OracleConfig::auto(&pot, l, n).unwrap();
            let e: f64 = solve_radial(&pot, l, &cfg).unwrap();
            let exact = 2.0 * n as f64 + l + 1.5;
            assert!((e - exact).abs() < 1e-10 * exact, "l={l} n={n}: {e} vs {exact}");
        }
    }

    #[test]
    fn levels_increase_with_nodes() {
        let pot = PotentialSpec::quartic(0.5, 0.5).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for n in 0..4 {
            let cfg = OracleConfig::auto(&pot, 1.0, n).unwrap();
            let e: f64 = solve_radial(&pot, 1.0, &cfg).unwrap();
            assert!(e > prev);
            prev = e;
        }
    }

    #[test]
    fn config_validation() {
        let pot = PotentialSpec::quartic(0.5, 0.5).unwrap();
        let mut cfg = OracleConfig::auto(&pot, 0.0, 0).unwrap();
        cfg.n_points = 10;
        assert!(matches!(solve_radial::<f64>(&pot, 0.0, &cfg), Err(PsletError::InvalidArgument(_))));
        cfg.n_points = 4000;
        cfg.energy_bracket = (3.0, 2.0);
        assert!(cfg.validate().is_err());
        cfg.energy_bracket = (2.5, 3.0);
        assert!(matches!(
            solve_radial::<f64>(&pot, 0.0, &cfg),
            Err(PsletError::NoEigenvalueInBracket { .. })
        ));
        assert!(OracleConfig::auto(&PotentialSpec::quartic(0.5, -1.0).unwrap(), 0.0, 0).is_err());
    }

    #[test]
    fn coarse_grid_is_flagged() {
        let pot = PotentialSpec::quartic(0.5, 0.0).unwrap();
        let mut cfg = OracleConfig::auto(&pot, 0.0, 0).unwrap();
        cfg.r_max = 40.0;
        cfg.n_points = 1000;
        assert!(matches!(solve_radial::<f64>(&pot, 0.0, &cfg), Err(PsletError::GridTooCoarse { .. })));
    }
}
