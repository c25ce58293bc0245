//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! Two implementations are provided: plain `f64` and [`DoubleDouble`], an
//! unevaluated sum of two `f64` values giving roughly 32 significant digits.
//! The double-double kernels are the classic error-free transformations
//! (two-sum, fused-multiply-add two-product) with Newton-corrected division
//! and square root.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

pub trait Real:
    Copy
    + fmt::Debug
    + Default
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
{
    /// Relative spacing of representable numbers near one.
    const EPSILON: f64;

    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn sqrt(self) -> Self;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    fn from_usize(n: usize) -> Self {
        Self::from_f64(n as f64)
    }

    fn abs(self) -> Self {
        if self < Self::zero() {
            -self
        } else {
            self
        }
    }

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    fn is_finite(self) -> bool {
        self.to_f64().is_finite()
    }

    fn powi(self, n: i32) -> Self {
        let mut base = self;
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        if n < 0 {
            Self::one() / acc
        } else {
            acc
        }
    }

    /// Decimal rendering with `digits` significant digits, positional notation.
    fn to_decimal(self, digits: usize) -> String;
}

impl Real for f64 {
    const EPSILON: f64 = f64::EPSILON;

    fn from_f64(x: f64) -> Self {
        x
    }

    fn to_f64(self) -> f64 {
        self
    }

    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }

    fn abs(self) -> Self {
        f64::abs(self)
    }

    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }

    fn to_decimal(self, digits: usize) -> String {
        format_significant(self, digits)
    }
}

/// Formats `x` with `digits` significant digits without an exponent.
pub fn format_significant(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let raw: String = mantissa.chars().filter(|c| *c != '.').collect();
    place_point(sign, &raw, exp)
}

// `raw` holds the significant digits d0 d1 d2 ... of d0.d1d2... x 10^exp.
fn place_point(sign: &str, raw: &str, exp: i32) -> String {
    let n = raw.len() as i32;
    let body = if exp < 0 {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), raw)
    } else if exp + 1 >= n {
        format!("{}{}.0", raw, "0".repeat((exp + 1 - n) as usize))
    } else {
        let (int, frac) = raw.split_at((exp + 1) as usize);
        format!("{int}.{frac}")
    };
    format!("{sign}{body}")
}

/// Double-double number: the exact value is `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const fn new(hi: f64, lo: f64) -> Self {
        Self { hi, lo }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    fn renormalized(hi: f64, lo: f64) -> Self {
        let (hi, lo) = quick_two_sum(hi, lo);
        Self { hi, lo }
    }

    /// Parses a plain decimal literal (optional sign, digits, optional point)
    /// without the rounding of an intermediate `f64`.
    pub fn parse_decimal(text: &str) -> Option<Self> {
        let text = text.trim();
        let (neg, body) = match text.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, text.strip_prefix('+').unwrap_or(text)),
        };
        let mut value = Self::zero();
        let mut frac_digits = 0i32;
        let mut seen_point = false;
        let mut any = false;
        let ten = Self::from_f64(10.0);
        for c in body.chars() {
            match c {
                '0'..='9' => {
                    value = value * ten + Self::from_f64(f64::from(c as u8 - b'0'));
                    any = true;
                    if seen_point {
                        frac_digits += 1;
                    }
                }
                '.' if !seen_point => seen_point = true,
                ' ' | '_' => {}
                _ => return None,
            }
        }
        if !any {
            return None;
        }
        let value = value / ten.powi(frac_digits);
        Some(if neg { -value } else { value })
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let (s, e) = quick_two_sum(s, e + t);
        Self::renormalized(s, e + f)
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        Self::renormalized(p, e)
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs * Self::from_f64(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs * Self::from_f64(q2);
        let q3 = r.hi / rhs.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        Self { hi: q1, lo: q2 } + Self::from_f64(q3)
    }
}

macro_rules! assign_ops {
    ($($tr:ident $m:ident $op:tt),*) => {$(
        impl $tr for DoubleDouble {
            fn $m(&mut self, rhs: Self) {
                *self = *self $op rhs;
            }
        }
    )*};
}
assign_ops!(AddAssign add_assign +, SubAssign sub_assign -, MulAssign mul_assign *, DivAssign div_assign /);

impl Real for DoubleDouble {
    const EPSILON: f64 = 4.93038065763132e-32; // 2^-104

    fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 {
                Self::zero()
            } else {
                Self::from_f64(f64::NAN)
            };
        }
        let x = Self::from_f64(self.hi.sqrt());
        x + (self - x * x) / (x * Self::from_f64(2.0))
    }

    fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    fn to_decimal(self, digits: usize) -> String {
        if !self.is_finite() {
            return self.hi.to_string();
        }
        if self.hi == 0.0 {
            return "0.0".to_string();
        }
        let digits = digits.max(1);
        let sign = if self.hi < 0.0 { "-" } else { "" };
        let mut x = self.abs();
        let ten = Self::from_f64(10.0);
        let mut exp = x.hi.log10().floor() as i32;
        x /= ten.powi(exp);
        if x >= ten {
            x /= ten;
            exp += 1;
        } else if x < Self::one() {
            x *= ten;
            exp -= 1;
        }
        let mut out: Vec<u8> = Vec::with_capacity(digits + 1);
        for _ in 0..=digits {
            let mut d = x.hi.floor();
            if x - Self::from_f64(d) < Self::zero() {
                d -= 1.0;
            }
            let d = d.clamp(0.0, 9.0);
            out.push(d as u8);
            x = (x - Self::from_f64(d)) * ten;
        }
        let round_up = out.pop().is_some_and(|d| d >= 5);
        if round_up {
            let mut i = out.len();
            loop {
                if i == 0 {
                    out.insert(0, 1);
                    out.pop();
                    exp += 1;
                    break;
                }
                i -= 1;
                if out[i] == 9 {
                    out[i] = 0;
                } else {
                    out[i] += 1;
                    break;
                }
            }
        }
        let raw: String = out.iter().map(|d| char::from(b'0' + d)).collect();
        place_point(sign, &raw, exp)
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(32))
    }
}
