//! Exact arithmetic in the cyclotomic ring Z[ξ_p] for p ∈ {3, 4, 5, 6}.
//!
//! Elements are stored in the power basis {1, ξ, …, ξ^(d−1)} where d is the
//! degree of the p-th cyclotomic polynomial Φ_p. Every value is kept fully
//! reduced, so two elements are equal iff their coefficient arrays are equal.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest basis length over the supported radices (Φ_5 has degree 4).
const MAX_DEGREE: usize = 4;

/// A supported radix p. Construction rejects anything outside {3, 4, 5, 6}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Radix(u8);

impl Radix {
    pub const THREE: Radix = Radix(3);
    pub const FOUR: Radix = Radix(4);
    pub const FIVE: Radix = Radix(5);
    pub const SIX: Radix = Radix(6);

    pub fn new(p: u32) -> Result<Self> {
        match p {
            3..=6 => Ok(Radix(p as u8)),
            _ => Err(Error::UnsupportedRadix(p)),
        }
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0 as u32
    }

    #[inline]
    pub fn as_usize(self) -> usize {
        self.0 as usize
    }

    /// Degree of Φ_p, i.e. the length of the reduced basis.
    #[inline]
    pub fn degree(self) -> usize {
        match self.0 {
            5 => 4,
            _ => 2,
        }
    }

    pub fn is_even(self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// Low-order coefficients of the monic polynomial Φ_p (the leading 1 omitted).
    fn phi_low(self) -> &'static [i64] {
        match self.0 {
            3 => &[1, 1],
            4 => &[1, 0],
            5 => &[1, 1, 1, 1],
            6 => &[1, -1],
            _ => unreachable!("radix validated at construction"),
        }
    }

    /// p^n as an integer, or `None` on overflow.
    pub fn checked_pow(self, n: usize) -> Option<usize> {
        (self.0 as usize).checked_pow(u32::try_from(n).ok()?)
    }
}

impl fmt::Display for Radix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of Z[ξ_p].
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct CycInt {
    radix: Radix,
    coeffs: [i64; MAX_DEGREE],
}

/// ±ξ^k in compact form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootScalar {
    pub negative: bool,
    pub exponent: u32,
}

impl RootScalar {
    pub const ONE: RootScalar = RootScalar { negative: false, exponent: 0 };

    pub fn xi_pow(exponent: u32) -> Self {
        RootScalar { negative: false, exponent }
    }

    pub fn sign(self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    /// Reduces the exponent mod p. For even p a negative sign is folded into the
    /// exponent, since −ξ^k = ξ^(k + p/2).
    pub fn normalized(self, radix: Radix) -> Self {
        let p = radix.get();
        let mut exponent = self.exponent % p;
        let mut negative = self.negative;
        if negative && radix.is_even() {
            exponent = (exponent + p / 2) % p;
            negative = false;
        }
        RootScalar { negative, exponent }
    }

    pub fn mul(self, other: RootScalar, radix: Radix) -> Self {
        RootScalar {
            negative: self.negative ^ other.negative,
            exponent: self.exponent + other.exponent,
        }
        .normalized(radix)
    }

    pub fn conj(self, radix: Radix) -> Self {
        let p = radix.get();
        RootScalar { negative: self.negative, exponent: (p - self.exponent % p) % p }
            .normalized(radix)
    }

    pub fn to_cyc(self, radix: Radix) -> CycInt {
        let v = CycInt::root(radix, self.exponent);
        if self.negative {
            -v
        } else {
            v
        }
    }
}

impl CycInt {
    pub fn zero(radix: Radix) -> Self {
        CycInt { radix, coeffs: [0; MAX_DEGREE] }
    }

    pub fn one(radix: Radix) -> Self {
        Self::from_int(radix, 1)
    }

    pub fn from_int(radix: Radix, value: i64) -> Self {
        let mut coeffs = [0; MAX_DEGREE];
        coeffs[0] = value;
        CycInt { radix, coeffs }
    }

    /// Builds an element from power-basis coordinates of any length, reducing mod Φ_p.
    pub fn from_coeffs(radix: Radix, coeffs: &[i64]) -> Self {
        let mut buf = [0i64; 2 * MAX_DEGREE];
        let mut out = CycInt::zero(radix);
        if coeffs.len() <= buf.len() {
            buf[..coeffs.len()].copy_from_slice(coeffs);
            out.coeffs = reduce(radix, &mut buf[..coeffs.len().max(radix.degree())]);
            return out;
        }
        // Long inputs: fold x^p = 1 first, then reduce.
        let p = radix.as_usize();
        let mut folded = vec![0i64; p];
        for (i, c) in coeffs.iter().enumerate() {
            folded[i % p] += c;
        }
        Self::from_coeffs(radix, &folded)
    }

    /// ξ^k.
    pub fn root(radix: Radix, k: u32) -> Self {
        let k = (k % radix.get()) as usize;
        let d = radix.degree();
        if k < d {
            let mut coeffs = [0; MAX_DEGREE];
            coeffs[k] = 1;
            return CycInt { radix, coeffs };
        }
        let mut buf = [0i64; 2 * MAX_DEGREE];
        buf[k] = 1;
        CycInt { radix, coeffs: reduce(radix, &mut buf[..=k]) }
    }

    #[inline]
    pub fn radix(&self) -> Radix {
        self.radix
    }

    /// The reduced coordinates, length deg(Φ_p).
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs[..self.radix.degree()]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Some(v) when the element is the rational integer v.
    pub fn as_integer(&self) -> Option<i64> {
        if self.coeffs[1..].iter().all(|&c| c == 0) {
            Some(self.coeffs[0])
        } else {
            None
        }
    }

    fn check_radix(&self, other: &CycInt) -> Result<()> {
        if self.radix != other.radix {
            return Err(Error::RadixMismatch { left: self.radix.get(), right: other.radix.get() });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &CycInt) -> Result<CycInt> {
        self.check_radix(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn try_mul(&self, other: &CycInt) -> Result<CycInt> {
        self.check_radix(other)?;
        Ok(self.mul_unchecked(other))
    }

    #[inline]
    fn add_unchecked(&self, other: &CycInt) -> CycInt {
        let mut out = *self;
        for (a, b) in out.coeffs.iter_mut().zip(other.coeffs.iter()) {
            *a += b;
        }
        out
    }

    fn mul_unchecked(&self, other: &CycInt) -> CycInt {
        let d = self.radix.degree();
        let mut buf = [0i64; 2 * MAX_DEGREE];
        for i in 0..d {
            let a = self.coeffs[i];
            if a == 0 {
                continue;
            }
            for j in 0..d {
                buf[i + j] += a * other.coeffs[j];
            }
        }
        CycInt { radix: self.radix, coeffs: reduce(self.radix, &mut buf[..2 * d - 1]) }
    }

    /// Multiplies by ξ once: a shift followed by a single reduction step.
    #[inline]
    pub fn mul_xi(&self) -> CycInt {
        let d = self.radix.degree();
        let top = self.coeffs[d - 1];
        let mut coeffs = [0i64; MAX_DEGREE];
        coeffs[1..d].copy_from_slice(&self.coeffs[..d - 1]);
        if top != 0 {
            for (c, phi) in coeffs.iter_mut().zip(self.radix.phi_low()) {
                *c -= top * phi;
            }
        }
        CycInt { radix: self.radix, coeffs }
    }

    /// Multiplies by ξ^k.
    #[inline]
    pub fn mul_root(&self, k: u32) -> CycInt {
        let mut out = *self;
        for _ in 0..(k % self.radix.get()) {
            out = out.mul_xi();
        }
        out
    }

    pub fn mul_scalar(&self, s: RootScalar) -> CycInt {
        let v = self.mul_root(s.exponent);
        if s.negative {
            -v
        } else {
            v
        }
    }

    pub fn scale(&self, k: i64) -> CycInt {
        let mut out = *self;
        for c in out.coeffs.iter_mut() {
            *c *= k;
        }
        out
    }

    /// Complex conjugate, the ring automorphism ξ ↦ ξ^(p−1).
    pub fn conj(&self) -> CycInt {
        let p = self.radix.get();
        let mut acc = CycInt::zero(self.radix);
        for (i, &c) in self.coeffs().iter().enumerate() {
            if c != 0 {
                acc += CycInt::root(self.radix, (p - i as u32) % p).scale(c);
            }
        }
        acc
    }

    /// a · conj(a); for flatness tests compare against the integer pⁿ.
    pub fn abs_squared(&self) -> CycInt {
        self.mul_unchecked(&self.conj())
    }

    /// Returns (sign, k) iff self == ±ξ^k. For even p the sign is always folded
    /// into the exponent, so the result is canonical.
    pub fn as_root_scalar(&self) -> Result<RootScalar> {
        let p = self.radix.get();
        for k in 0..p {
            let r = CycInt::root(self.radix, k);
            if *self == r {
                return Ok(RootScalar::xi_pow(k));
            }
            if !self.radix.is_even() && *self == -r {
                return Ok(RootScalar { negative: true, exponent: k });
            }
        }
        Err(Error::NotAUnitRoot(self.to_string()))
    }

    /// Exact division by a rational integer.
    pub fn div_exact_int(&self, d: i64) -> Result<CycInt> {
        if d == 0 {
            return Err(Error::DivisionByZero);
        }
        let mut out = *self;
        for c in out.coeffs.iter_mut() {
            if *c % d != 0 {
                return Err(Error::NotDivisible { value: self.to_string(), divisor: d });
            }
            *c /= d;
        }
        Ok(out)
    }

    /// Human-oriented rendering using ξ, e.g. `3ξ²` when the value is an integer
    /// multiple of a root, otherwise the canonical coefficient form with ξ.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let p = self.radix.get();
        for k in 0..p {
            let r = CycInt::root(self.radix, k);
            for m in [1i64, -1] {
                let base = r.scale(m);
                // find integer t with self == t * base
                let lead = base.coeffs.iter().position(|&c| c != 0).unwrap();
                let t = self.coeffs[lead] / base.coeffs[lead];
                if t > 0 && base.scale(t) == *self {
                    let sign = if m < 0 { "-" } else { "" };
                    let mag = if t == 1 && k != 0 { String::new() } else { t.to_string() };
                    let pow = match k {
                        0 => String::new(),
                        1 => "ξ".into(),
                        k => format!("ξ{}", superscript(k)),
                    };
                    return format!("{sign}{mag}{pow}");
                }
            }
        }
        self.to_string().replace('x', "ξ")
    }
}

fn superscript(k: u32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    k.to_string().chars().map(|c| DIGITS[c.to_digit(10).unwrap() as usize]).collect()
}

/// Rewrites pretty output in plain ASCII: `ξ` becomes `w`, superscript
/// exponents become `^k`. `3ξ²` → `3w^2`.
pub fn ascii(pretty: &str) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    let mut out = String::with_capacity(pretty.len());
    let mut in_exp = false;
    for c in pretty.chars() {
        if let Some(d) = DIGITS.iter().position(|&s| s == c) {
            if !in_exp {
                out.push('^');
                in_exp = true;
            }
            out.push(char::from(b'0' + d as u8));
            continue;
        }
        in_exp = false;
        out.push(if c == 'ξ' { 'w' } else { c });
    }
    out
}

/// Reduces a coefficient buffer modulo Φ_p in place and returns the low part.
fn reduce(radix: Radix, buf: &mut [i64]) -> [i64; MAX_DEGREE] {
    let d = radix.degree();
    let phi = radix.phi_low();
    for top in (d..buf.len()).rev() {
        let c = buf[top];
        if c == 0 {
            continue;
        }
        buf[top] = 0;
        // x^top = x^(top-d) * x^d = -x^(top-d) * sum(phi_i x^i)
        for (i, &ph) in phi.iter().enumerate() {
            buf[top - d + i] -= c * ph;
        }
    }
    let mut out = [0i64; MAX_DEGREE];
    let n = d.min(buf.len());
    out[..n].copy_from_slice(&buf[..n]);
    out
}

impl Add for CycInt {
    type Output = CycInt;
    fn add(self, rhs: CycInt) -> CycInt {
        debug_assert_eq!(self.radix, rhs.radix);
        self.add_unchecked(&rhs)
    }
}

impl AddAssign for CycInt {
    fn add_assign(&mut self, rhs: CycInt) {
        debug_assert_eq!(self.radix, rhs.radix);
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a += b;
        }
    }
}

impl Sub for CycInt {
    type Output = CycInt;
    fn sub(self, rhs: CycInt) -> CycInt {
        self + (-rhs)
    }
}

impl SubAssign for CycInt {
    fn sub_assign(&mut self, rhs: CycInt) {
        *self += -rhs;
    }
}

impl Neg for CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        self.scale(-1)
    }
}

impl Mul for CycInt {
    type Output = CycInt;
    fn mul(self, rhs: CycInt) -> CycInt {
        debug_assert_eq!(self.radix, rhs.radix);
        self.mul_unchecked(&rhs)
    }
}

/// Canonical machine form: `a0+a1x+a2x^2…`, zero terms dropped, `0` for zero.
/// Coefficients are always written out, so ξ renders as `1x` and ξ² (p=3) as `-1-1x`.
impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs().iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first && c > 0 {
                write!(f, "+")?;
            }
            write!(f, "{c}")?;
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycInt[p={}]({})", self.radix, self)
    }
}

impl CycInt {
    /// Parses the canonical form (also accepting `x`, `-x`, spaces, and `ξ` or `w` for `x`).
    /// Powers of x at or above deg(Φ_p) are reduced.
    pub fn parse(radix: Radix, s: &str) -> Result<CycInt> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().replace(['ξ', 'w'], "x");
        let bad = || Error::Parse(format!("invalid cyclotomic integer `{s}`"));
        if cleaned.is_empty() {
            return Err(bad());
        }
        let mut acc = vec![0i64; radix.as_usize().max(radix.degree())];
        let bytes = cleaned.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let mut sign = 1i64;
            if bytes[i] == b'+' || bytes[i] == b'-' {
                if bytes[i] == b'-' {
                    sign = -1;
                }
                i += 1;
            } else if i != 0 {
                return Err(bad());
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let coeff: i64 = if i > start { cleaned[start..i].parse().map_err(|_| bad())? } else { 1 };
            let mut power = 0usize;
            if i < bytes.len() && bytes[i] == b'x' {
                i += 1;
                power = 1;
                if i < bytes.len() && bytes[i] == b'^' {
                    i += 1;
                    let ps = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if ps == i {
                        return Err(bad());
                    }
                    power = cleaned[ps..i].parse().map_err(|_| bad())?;
                }
            } else if i == start {
                return Err(bad());
            }
            let slot = power % radix.as_usize();
            acc[slot] += sign * coeff;
        }
        Ok(CycInt::from_coeffs(radix, &acc))
    }
}

/// Parses with radix 3; use [`CycInt::parse`] for other radices.
impl FromStr for CycInt {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CycInt::parse(Radix::THREE, s)
    }
}

impl Serialize for CycInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CycInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
