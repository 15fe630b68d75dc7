//! p-valued functions as value vectors, their sign vectors, and the
//! structural operators on them (constant addition, tensor sum, vec/un-vec).
//!
//! Index convention: x = x₁·p^(n−1) + … + xₙ, so x₁ is the most significant digit.

use std::fmt;
use std::str::FromStr;

use crate::cyclotomic::{CycInt, Radix};
use crate::error::{Error, Result};

/// A p-valued function of n variables, stored as its value vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MvFunction {
    radix: Radix,
    n: usize,
    values: Vec<u8>,
}

/// The vector F = ξ^f; every entry is a p-th root of unity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignVector {
    radix: Radix,
    n: usize,
    entries: Vec<CycInt>,
}

impl MvFunction {
    pub fn new(radix: Radix, n: usize, values: Vec<u8>) -> Result<Self> {
        let len = radix
            .checked_pow(n)
            .ok_or_else(|| Error::Shape(format!("{radix}^{n} overflows")))?;
        if values.len() != len {
            return Err(Error::Shape(format!("expected {len} values, got {}", values.len())));
        }
        if let Some(v) = values.iter().find(|&&v| v as u32 >= radix.get()) {
            return Err(Error::Shape(format!("value {v} outside Z_{radix}")));
        }
        Ok(MvFunction { radix, n, values })
    }

    /// Parses a digit string such as `000012021`; n is inferred from the length.
    pub fn from_digits(radix: Radix, digits: &str) -> Result<Self> {
        let values = digits
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| {
                c.to_digit(10)
                    .filter(|&d| d < radix.get())
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::Parse(format!("invalid digit `{c}` for radix {radix}")))
            })
            .collect::<Result<Vec<u8>>>()?;
        let n = infer_vars(radix, values.len())?;
        MvFunction::new(radix, n, values)
    }

    /// Ternary shorthand used throughout the tests and fixtures.
    pub fn ternary(digits: &str) -> Result<Self> {
        Self::from_digits(Radix::THREE, digits)
    }

    pub fn constant(radix: Radix, n: usize, c: u8) -> Result<Self> {
        let len = radix.checked_pow(n).ok_or_else(|| Error::Shape("overflow".into()))?;
        MvFunction::new(radix, n, vec![c; len])
    }

    pub fn radix(&self) -> Radix {
        self.radix
    }

    pub fn vars(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn digits(&self) -> String {
        self.values.iter().map(|v| char::from(b'0' + v)).collect()
    }

    /// Digits grouped in blocks of p, e.g. `000 012 021`.
    pub fn grouped(&self) -> String {
        group_digits(&self.digits(), self.radix.as_usize())
    }

    pub fn sign_of(&self) -> SignVector {
        let roots: Vec<CycInt> = (0..self.radix.get()).map(|k| CycInt::root(self.radix, k)).collect();
        SignVector {
            radix: self.radix,
            n: self.n,
            entries: self.values.iter().map(|&v| roots[v as usize]).collect(),
        }
    }

    /// Recovers f from a candidate sign vector; fails at the first entry that is not ξ^k.
    pub fn try_from_sign(radix: Radix, entries: &[CycInt]) -> Result<Self> {
        let values = entries
            .iter()
            .enumerate()
            .map(|(index, v)| match v.as_root_scalar() {
                Ok(s) if !s.negative && v.radix() == radix => Ok(s.exponent as u8),
                _ => Err(Error::NotASign { index, value: v.to_string() }),
            })
            .collect::<Result<Vec<u8>>>()?;
        let n = infer_vars(radix, values.len())?;
        MvFunction::new(radix, n, values)
    }

    pub fn add_constant(&self, c: u8) -> MvFunction {
        let p = self.radix.get() as u8;
        MvFunction {
            radix: self.radix,
            n: self.n,
            values: self.values.iter().map(|&v| (v + c % p) % p).collect(),
        }
    }

    /// (f1 ⊞ f2)(x, y) = f1(x) + f2(y) mod p, with x the high digits.
    pub fn tensor_sum(&self, other: &MvFunction) -> Result<MvFunction> {
        if self.radix != other.radix {
            return Err(Error::RadixMismatch { left: self.radix.get(), right: other.radix.get() });
        }
        let p = self.radix.get() as u8;
        let mut values = Vec::with_capacity(self.len() * other.len());
        for &a in &self.values {
            values.extend(other.values.iter().map(|&b| (a + b) % p));
        }
        MvFunction::new(self.radix, self.n + other.n, values)
    }

    /// "p n digits" line used by the function file format.
    pub fn to_line(&self) -> String {
        format!("{} {} {}", self.radix, self.n, self.digits())
    }

    pub fn from_line(line: &str) -> Result<Self> {
        let mut parts = line.split_whitespace();
        let bad = || Error::Parse(format!("malformed function line `{line}`"));
        let p: u32 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let n: usize = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let digits = parts.next().ok_or_else(bad)?;
        if parts.next().is_some() {
            return Err(bad());
        }
        let f = MvFunction::from_digits(Radix::new(p)?, digits)?;
        if f.n != n {
            return Err(Error::Shape(format!("header says n = {n}, digits give n = {}", f.n)));
        }
        Ok(f)
    }
}

impl fmt::Display for MvFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.digits())
    }
}

impl fmt::Debug for MvFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MvFunction(p={}, n={}, [{}])", self.radix, self.n, self.grouped())
    }
}

impl FromStr for MvFunction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        MvFunction::from_line(s)
    }
}

pub(crate) fn group_digits(digits: &str, p: usize) -> String {
    let chars: Vec<char> = digits.chars().collect();
    chars.chunks(p).map(|c| c.iter().collect::<String>()).collect::<Vec<_>>().join(" ")
}

/// n with pⁿ == len.
pub fn infer_vars(radix: Radix, len: usize) -> Result<usize> {
    let p = radix.as_usize();
    let mut size = 1usize;
    let mut n = 0;
    while size < len {
        size = size.checked_mul(p).ok_or_else(|| Error::Shape("overflow".into()))?;
        n += 1;
    }
    if size != len {
        return Err(Error::Shape(format!("length {len} is not a power of {p}")));
    }
    Ok(n)
}

impl SignVector {
    pub fn radix(&self) -> Radix {
        self.radix
    }

    pub fn vars(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[CycInt] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<CycInt> {
        self.entries
    }
}

impl AsRef<[CycInt]> for SignVector {
    fn as_ref(&self) -> &[CycInt] {
        &self.entries
    }
}

/// Stacks the columns of a square row-major matrix.
pub fn vec_columns<T: Clone>(rows: &[Vec<T>]) -> Result<Vec<T>> {
    let side = rows.len();
    if rows.iter().any(|r| r.len() != side) {
        return Err(Error::Shape("matrix is not square".into()));
    }
    Ok((0..side).flat_map(|j| rows.iter().map(move |r| r[j].clone())).collect())
}

/// Inverse of [`vec_columns`].
pub fn un_vec<T: Clone>(v: &[T], side: usize) -> Result<Vec<Vec<T>>> {
    if side.checked_mul(side) != Some(v.len()) {
        return Err(Error::Shape(format!("length {} is not {side}²", v.len())));
    }
    Ok((0..side).map(|i| (0..side).map(|j| v[j * side + i].clone()).collect()).collect())
}

/// A polynomial over Z_p in the variables x1…xn, e.g. `x1*x2 + x2 + 2*x2^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    radix: Radix,
    /// (coefficient, exponent per variable index starting at 1)
    terms: Vec<(u8, Vec<(usize, u8)>)>,
}

impl Polynomial {
    pub fn parse(radix: Radix, text: &str) -> Result<Self> {
        let p = radix.get();
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let compact = compact.replace('⊕', "+");
        if compact.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut terms = Vec::new();
        for term in compact.split('+') {
            if term.is_empty() {
                return Err(Error::Parse(format!("empty term in `{text}`")));
            }
            let mut coeff: u32 = 1;
            let mut vars = Vec::new();
            for factor in term.split('*') {
                if let Some(rest) = factor.strip_prefix('x') {
                    let (idx, exp) = match rest.split_once('^') {
                        Some((i, e)) => (i, e.parse::<u32>().map_err(|_| bad_term(term))?),
                        None => (rest, 1),
                    };
                    let idx: usize = idx.parse().map_err(|_| bad_term(term))?;
                    if idx == 0 || exp >= p {
                        return Err(Error::Parse(format!("malformed factor `{factor}` (exponents must be < {p})")));
                    }
                    vars.push((idx, exp as u8));
                } else {
                    let c: u32 = factor.parse().map_err(|_| bad_term(term))?;
                    if c >= p {
                        return Err(Error::Parse(format!("coefficient {c} not in Z_{p}")));
                    }
                    coeff = coeff * c % p;
                }
            }
            terms.push((coeff as u8, vars));
        }
        Ok(Polynomial { radix, terms })
    }

    pub fn max_var(&self) -> usize {
        self.terms.iter().flat_map(|(_, v)| v.iter().map(|(i, _)| *i)).max().unwrap_or(0)
    }

    /// Value vector over all pⁿ points.
    pub fn eval(&self, n: usize) -> Result<MvFunction> {
        if self.max_var() > n {
            return Err(Error::Shape(format!("polynomial uses x{} but n = {n}", self.max_var())));
        }
        let p = self.radix.get();
        let size = self.radix.checked_pow(n).ok_or_else(|| Error::Shape("overflow".into()))?;
        let values = (0..size)
            .map(|x| {
                let digits = digits_of(x, self.radix.as_usize(), n);
                let total: u32 = self
                    .terms
                    .iter()
                    .map(|(c, vars)| {
                        vars.iter().fold(*c as u32, |acc, &(i, e)| acc * (digits[i - 1] as u32).pow(e as u32) % p)
                    })
                    .sum();
                (total % p) as u8
            })
            .collect();
        MvFunction::new(self.radix, n, values)
    }
}

fn bad_term(term: &str) -> Error {
    Error::Parse(format!("malformed term `{term}`"))
}

/// Base-p digits of x, most significant first.
pub fn digits_of(mut x: usize, p: usize, n: usize) -> Vec<usize> {
    let mut d = vec![0; n];
    for slot in d.iter_mut().rev() {
        *slot = x % p;
        x /= p;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(d: &str) -> MvFunction {
        MvFunction::ternary(d).unwrap()
    }

    fn xi(k: u32) -> CycInt {
        CycInt::root(Radix::THREE, k)
    }

    #[test]
    fn sign_of_examples() {
        let f = t("000012021");
        let expect: Vec<CycInt> = [0, 0, 0, 0, 1, 2, 0, 2, 1].iter().map(|&k| xi(k)).collect();
        assert_eq!(f.sign_of().entries(), &expect[..]);
        assert!(t("000000000").sign_of().entries().iter().all(|e| *e == xi(0)));
        let g = t("001010022");
        let expect: Vec<CycInt> = [0, 0, 1, 0, 1, 0, 0, 2, 2].iter().map(|&k| xi(k)).collect();
        assert_eq!(g.sign_of().entries(), &expect[..]);
    }

    #[test]
    fn try_from_sign_examples() {
        let v: Vec<CycInt> = [0, 0, 0, 0, 1, 2, 0, 2, 1].iter().map(|&k| xi(k)).collect();
        assert_eq!(MvFunction::try_from_sign(Radix::THREE, &v).unwrap(), t("000012021"));

        let mut w = vec![CycInt::zero(Radix::THREE); 9];
        w[8] = xi(1).scale(3);
        assert_eq!(
            MvFunction::try_from_sign(Radix::THREE, &w),
            Err(Error::NotASign { index: 0, value: "0".into() })
        );

        let neg = vec![CycInt::from_int(Radix::THREE, -1), xi(0), xi(0)];
        assert!(matches!(
            MvFunction::try_from_sign(Radix::THREE, &neg),
            Err(Error::NotASign { index: 0, .. })
        ));
    }

    #[test]
    fn add_constant_examples() {
        let f = t("000012021");
        assert_eq!(f.add_constant(1), t("111120102"));
        assert_eq!(f.add_constant(0), f);
        assert_eq!(f.add_constant(2), t("222201210"));
    }

    #[test]
    fn tensor_sum_examples() {
        let f = t("000012021");
        let big = f.tensor_sum(&f).unwrap();
        assert_eq!(big.vars(), 4);
        for x in 0..9 {
            for y in 0..9 {
                assert_eq!(big.values()[x * 9 + y], (f.values()[x] + f.values()[y]) % 3);
            }
        }
        let zero = MvFunction::new(Radix::THREE, 0, vec![0]).unwrap();
        assert_eq!(zero.tensor_sum(&f).unwrap(), f);
        let x = t("012");
        assert_eq!(x.tensor_sum(&x).unwrap(), t("012120201"));
        let four = MvFunction::from_digits(Radix::FOUR, "0123").unwrap();
        assert!(matches!(x.tensor_sum(&four), Err(Error::RadixMismatch { .. })));
    }

    #[test]
    fn polynomial_examples() {
        let r = Radix::THREE;
        assert_eq!(Polynomial::parse(r, "x1*x2").unwrap().eval(2).unwrap(), t("000012021"));
        assert_eq!(Polynomial::parse(r, "x1*x2 + x2 + 2*x2^2").unwrap().eval(2).unwrap(), t("001010022"));
        assert_eq!(
            Polynomial::parse(r, "2*x1*x2 + 2*x1 + 2*x2^2 + 1").unwrap().eval(2).unwrap(),
            t("100010220")
        );
        assert!(Polynomial::parse(r, "x1^3").is_err());
        assert!(Polynomial::parse(r, "4*x1").is_err());
        assert!(Polynomial::parse(r, "x0").is_err());
        assert!(Polynomial::parse(r, "x1 + + x2").is_err());
        assert!(Polynomial::parse(r, "x3").unwrap().eval(2).is_err());
    }

    #[test]
    fn vec_examples() {
        let m = vec![vec!['a', 'b'], vec!['c', 'd']];
        assert_eq!(vec_columns(&m).unwrap(), vec!['a', 'c', 'b', 'd']);
        assert_eq!(un_vec(&vec_columns(&m).unwrap(), 2).unwrap(), m);
        let exps: Vec<Vec<u8>> = (0..3).map(|i| (0..3).map(|j| (i * j % 3) as u8).collect()).collect();
        assert_eq!(vec_columns(&exps).unwrap(), t("000012021").values());
        assert!(vec_columns(&[vec![1, 2], vec![3]]).is_err());
        assert!(un_vec(&[1, 2, 3], 2).is_err());
    }

    #[test]
    fn shape_errors() {
        assert!(MvFunction::ternary("0000").is_err());
        assert!(MvFunction::ternary("003").is_err());
        assert!(MvFunction::new(Radix::THREE, 1, vec![0, 1]).is_err());
        assert!(MvFunction::from_line("3 1 012").is_ok());
        assert!(MvFunction::from_line("3 2 012").is_err());
        assert!(MvFunction::from_line("3 2").is_err());
        assert_eq!(MvFunction::from_line("3 2 000012021").unwrap().to_line(), "3 2 000012021");
    }

    fn ternary_fn(n: usize) -> impl Strategy<Value = MvFunction> {
        proptest::collection::vec(0u8..3, 3usize.pow(n as u32))
            .prop_map(move |v| MvFunction::new(Radix::THREE, n, v).unwrap())
    }

    proptest! {
        #[test]
        fn sign_round_trip(f in (0usize..4).prop_flat_map(ternary_fn)) {
            let back = MvFunction::try_from_sign(Radix::THREE, f.sign_of().entries()).unwrap();
            prop_assert_eq!(back, f);
        }

        #[test]
        fn tensor_sum_is_associative(a in ternary_fn(1), b in ternary_fn(2), c in ternary_fn(1)) {
            let left = a.tensor_sum(&b).unwrap().tensor_sum(&c).unwrap();
            let right = a.tensor_sum(&b.tensor_sum(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn add_constant_rotates_sign(f in ternary_fn(2), c in 0u8..3) {
            let rotated: Vec<CycInt> = f.sign_of().entries().iter().map(|e| e.mul_root(c as u32)).collect();
            let shifted = f.add_constant(c).sign_of();
            prop_assert_eq!(shifted.entries(), &rotated[..]);
        }
    }
}
