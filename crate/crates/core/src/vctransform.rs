//! The Vilenkin-Chrestenson transform pair S = C*(n)·F and F = p⁻ⁿ·C(n)·S.
//!
//! `forward` evaluates the defining sum directly and serves as the reference
//! for `forward_fast`, which factors C*(n) = C*(1)^⊗n into n radix-p butterfly
//! stages. Both are exact.

use std::fmt;

use crate::cyclotomic::{CycInt, Radix};
use crate::error::{Error, Result};
use crate::matrix::DenseCycMatrix;
use crate::mvfunction::{digits_of, infer_vars, SignVector};

/// Default bound on pⁿ for transforms: 3¹⁰ points.
pub const DEFAULT_MAX_POINTS: usize = 59_049;
/// Bound on the side of materialized dense matrices (pⁿ×pⁿ entries).
pub const DEFAULT_MAX_DENSE: usize = 729;

/// Size guards. `from_env` honours `BENT_SIZE_LIMIT` for the transform bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_points: usize,
    pub max_dense: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_points: DEFAULT_MAX_POINTS, max_dense: DEFAULT_MAX_DENSE }
    }
}

impl Limits {
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(v) = std::env::var("BENT_SIZE_LIMIT").ok().and_then(|s| s.trim().parse().ok()) {
            limits.max_points = v;
        }
        limits
    }

    pub fn check_points(&self, size: usize) -> Result<()> {
        if size > self.max_points {
            return Err(Error::SizeLimit { size, limit: self.max_points });
        }
        Ok(())
    }

    pub fn check_dense(&self, size: usize) -> Result<()> {
        self.check_points(size)?;
        if size > self.max_dense {
            return Err(Error::SizeLimit { size, limit: self.max_dense });
        }
        Ok(())
    }
}

/// The circular spectrum S(w), w = 0..pⁿ−1, same digit order as value vectors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Spectrum {
    radix: Radix,
    n: usize,
    entries: Vec<CycInt>,
}

impl Spectrum {
    pub fn new(radix: Radix, entries: Vec<CycInt>) -> Result<Self> {
        let n = infer_vars(radix, entries.len())?;
        if let Some(e) = entries.iter().find(|e| e.radix() != radix) {
            return Err(Error::RadixMismatch { left: radix.get(), right: e.radix().get() });
        }
        Ok(Spectrum { radix, n, entries })
    }

    /// p^(n/2)·ξ^(t(w)) for each exponent digit t(w); n must be even.
    pub fn from_exponents(radix: Radix, exponents: &[u8]) -> Result<Self> {
        let n = infer_vars(radix, exponents.len())?;
        if n % 2 == 1 {
            return Err(Error::OddVariableCount(n));
        }
        let scale = (radix.get() as i64).pow((n / 2) as u32);
        let entries = exponents.iter().map(|&e| CycInt::root(radix, e as u32).scale(scale)).collect();
        Spectrum::new(radix, entries)
    }

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

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Multiplies every coefficient by ξ^k.
    pub fn rotate(&self, k: u32) -> Spectrum {
        Spectrum { radix: self.radix, n: self.n, entries: self.entries.iter().map(|e| e.mul_root(k)).collect() }
    }

    pub fn conj(&self) -> Spectrum {
        Spectrum { radix: self.radix, n: self.n, entries: self.entries.iter().map(|e| e.conj()).collect() }
    }

    /// Entrywise Kronecker product S ⊗ T.
    pub fn kron(&self, other: &Spectrum) -> Result<Spectrum> {
        if self.radix != other.radix {
            return Err(Error::RadixMismatch { left: self.radix.get(), right: other.radix.get() });
        }
        let entries = self.entries.iter().flat_map(|a| other.entries.iter().map(move |b| *a * *b)).collect();
        Ok(Spectrum { radix: self.radix, n: self.n + other.n, entries })
    }

    /// Spectrum file: `p n` header followed by one coefficient per line.
    pub fn to_file_string(&self) -> String {
        let mut out = format!("{} {}\n", self.radix, self.n);
        for e in &self.entries {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses the spectrum file format, including the compact `exp:d0d1…` body.
    pub fn parse_file(text: &str) -> Result<Spectrum> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty spectrum file".into()))?;
        let mut parts = header.split_whitespace();
        let bad = || Error::Parse(format!("malformed spectrum header `{header}`"));
        let p: u32 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let n: usize = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let radix = Radix::new(p)?;
        let body: Vec<&str> = lines.collect();
        let spectrum = match body.as_slice() {
            [single] if single.starts_with("exp:") => {
                let digits = single.trim_start_matches("exp:");
                let exps = digits
                    .chars()
                    .filter(|c| !c.is_whitespace())
                    .map(|c| {
                        c.to_digit(10)
                            .filter(|&d| d < p)
                            .map(|d| d as u8)
                            .ok_or_else(|| Error::Parse(format!("invalid exponent digit `{c}`")))
                    })
                    .collect::<Result<Vec<u8>>>()?;
                Spectrum::from_exponents(radix, &exps)?
            }
            _ => {
                let entries = body.iter().map(|l| CycInt::parse(radix, l)).collect::<Result<Vec<_>>>()?;
                Spectrum::new(radix, entries)?
            }
        };
        if spectrum.n != n {
            return Err(Error::Shape(format!("header says n = {n}, body has {} entries", spectrum.len())));
        }
        Ok(spectrum)
    }
}

impl fmt::Debug for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.entries.iter().map(|e| e.pretty()).collect();
        write!(f, "Spectrum(p={}, n={}, [{}])", self.radix, self.n, body.join(" "))
    }
}

impl AsRef<[CycInt]> for Spectrum {
    fn as_ref(&self) -> &[CycInt] {
        &self.entries
    }
}

/// ⟨j·k⟩: digitwise scalar product mod p.
pub fn digit_dot(j: usize, k: usize, p: usize, n: usize) -> u32 {
    let (mut j, mut k) = (j, k);
    let mut acc = 0;
    for _ in 0..n {
        acc += (j % p) * (k % p);
        j /= p;
        k /= p;
    }
    (acc % p) as u32
}

fn size_of(radix: Radix, n: usize) -> Result<usize> {
    radix.checked_pow(n).ok_or_else(|| Error::Shape(format!("{radix}^{n} overflows")))
}

/// C(1) with entries ξ^(jk mod p).
pub fn base_matrix(radix: Radix) -> DenseCycMatrix {
    let p = radix.as_usize();
    DenseCycMatrix::from_fn(radix, p, |j, k| CycInt::root(radix, ((j * k) % p) as u32))
}

/// C(n) = C(1)^⊗n.
pub fn build_c(radix: Radix, n: usize) -> Result<DenseCycMatrix> {
    build_c_with(radix, n, &Limits::default())
}

pub fn build_c_with(radix: Radix, n: usize, limits: &Limits) -> Result<DenseCycMatrix> {
    limits.check_dense(size_of(radix, n)?)?;
    let base = base_matrix(radix);
    let mut c = DenseCycMatrix::identity(radix, 1);
    for _ in 0..n {
        c = c.kron(&base);
    }
    Ok(c)
}

fn check_input(radix: Radix, input: &[CycInt], limits: &Limits) -> Result<usize> {
    let n = infer_vars(radix, input.len())?;
    limits.check_points(input.len())?;
    if let Some(e) = input.iter().find(|e| e.radix() != radix) {
        return Err(Error::RadixMismatch { left: radix.get(), right: e.radix().get() });
    }
    Ok(n)
}

/// S(w) = Σ_x ξ^(−⟨w·x⟩)·F(x), evaluated term by term.
pub fn forward(radix: Radix, input: &[CycInt]) -> Result<Spectrum> {
    forward_with(radix, input, &Limits::default())
}

pub fn forward_with(radix: Radix, input: &[CycInt], limits: &Limits) -> Result<Spectrum> {
    let n = check_input(radix, input, limits)?;
    let p = radix.as_usize();
    let size = input.len();
    let pu = radix.get();
    let entries = (0..size)
        .map(|w| {
            let mut acc = CycInt::zero(radix);
            for (x, v) in input.iter().enumerate() {
                let e = digit_dot(w, x, p, n);
                acc += v.mul_root((pu - e) % pu);
            }
            acc
        })
        .collect();
    Ok(Spectrum { radix, n, entries })
}

pub fn forward_sign(sign: &SignVector) -> Result<Spectrum> {
    forward_fast(sign.radix(), sign.entries())
}

/// Same result as [`forward`] in O(n·pⁿ) ring operations.
pub fn forward_fast(radix: Radix, input: &[CycInt]) -> Result<Spectrum> {
    forward_fast_with(radix, input, &Limits::default())
}

pub fn forward_fast_with(radix: Radix, input: &[CycInt], limits: &Limits) -> Result<Spectrum> {
    let n = check_input(radix, input, limits)?;
    let entries = butterflies(radix, input, true);
    Ok(Spectrum { radix, n, entries })
}

/// Applies C(1)^⊗n (or its conjugate) with one radix-p stage per digit.
fn butterflies(radix: Radix, input: &[CycInt], conjugate: bool) -> Vec<CycInt> {
    let p = radix.as_usize();
    let pu = radix.get();
    let size = input.len();
    let mut cur = input.to_vec();
    let mut next = vec![CycInt::zero(radix); size];
    let mut gathered = vec![CycInt::zero(radix); p];
    let mut stride = 1;
    while stride < size {
        let span = stride * p;
        for block in (0..size).step_by(span) {
            for offset in 0..stride {
                let base = block + offset;
                for (k, slot) in gathered.iter_mut().enumerate() {
                    *slot = cur[base + k * stride];
                }
                for j in 0..p {
                    let mut acc = gathered[0];
                    for (k, v) in gathered.iter().enumerate().skip(1) {
                        let e = ((j * k) % p) as u32;
                        let twiddle = if conjugate { (pu - e) % pu } else { e };
                        acc += v.mul_root(twiddle);
                    }
                    next[base + j * stride] = acc;
                }
            }
        }
        std::mem::swap(&mut cur, &mut next);
        stride = span;
    }
    cur
}

/// C(n)·v without the p⁻ⁿ scaling.
pub fn apply_c(radix: Radix, input: &[CycInt]) -> Result<Vec<CycInt>> {
    check_input(radix, input, &Limits::default())?;
    Ok(butterflies(radix, input, false))
}

/// F = p⁻ⁿ·C(n)·S; fails with `NotDivisible` when some coordinate of C(n)·S
/// is not a multiple of pⁿ.
pub fn inverse(spectrum: &Spectrum) -> Result<Vec<CycInt>> {
    let radix = spectrum.radix;
    let size = spectrum.len() as i64;
    butterflies(radix, &spectrum.entries, false)
        .into_iter()
        .map(|v| v.div_exact_int(size))
        .collect()
}

/// True iff |S(w)|² = pⁿ for every w.
pub fn is_flat(spectrum: &Spectrum) -> bool {
    first_non_flat(spectrum).is_none()
}

pub(crate) fn first_non_flat(spectrum: &Spectrum) -> Option<usize> {
    let target = CycInt::from_int(spectrum.radix, spectrum.len() as i64);
    spectrum.entries.iter().position(|e| e.abs_squared() != target)
}

/// Digits of the index, re-exported for callers building matrices by formula.
pub fn index_digits(x: usize, radix: Radix, n: usize) -> Vec<usize> {
    digits_of(x, radix.as_usize(), n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mvfunction::MvFunction;
    use proptest::prelude::*;

    fn xi(k: u32) -> CycInt {
        CycInt::root(Radix::THREE, k)
    }

    fn exps3(digits: &str) -> Vec<CycInt> {
        digits.chars().filter(|c| c.is_ascii_digit()).map(|c| xi(c.to_digit(10).unwrap()).scale(3)).collect()
    }

    #[test]
    fn base_matrices() {
        let c = build_c(Radix::THREE, 1).unwrap();
        let expect = [[0, 0, 0], [0, 1, 2], [0, 2, 1]];
        for (j, row) in expect.iter().enumerate() {
            for (k, &e) in row.iter().enumerate() {
                assert_eq!(c.get(j, k), xi(e));
            }
        }
        let r4 = Radix::FOUR;
        let c4 = build_c(r4, 1).unwrap();
        let expect4 = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 0, 2], [0, 3, 2, 1]];
        for (j, row) in expect4.iter().enumerate() {
            for (k, &e) in row.iter().enumerate() {
                assert_eq!(c4.get(j, k), CycInt::root(r4, e));
            }
        }
    }

    #[test]
    fn c2_matches_digit_formula_and_kron_order() {
        let c2 = build_c(Radix::THREE, 2).unwrap();
        for j in 0..9 {
            for k in 0..9 {
                assert_eq!(c2.get(j, k), xi(digit_dot(j, k, 3, 2)));
            }
        }
        // row 4 of C(2): ξ^(j1k1 + j2k2) with j = (1,1)
        let row4: Vec<CycInt> = [0, 1, 2, 1, 2, 0, 2, 0, 1].iter().map(|&k| xi(k)).collect();
        assert_eq!(c2.row(4), &row4[..]);
    }

    #[test]
    fn orthogonality() {
        for n in 1..=3 {
            let c = build_c(Radix::THREE, n).unwrap();
            let prod = c.matmul(&c.conj()).unwrap();
            let size = 3usize.pow(n as u32);
            assert_eq!(prod, DenseCycMatrix::identity(Radix::THREE, size).scale_int(size as i64));
        }
    }

    #[test]
    fn forward_examples() {
        let f = MvFunction::ternary("000012021").unwrap();
        let s = forward(Radix::THREE, f.sign_of().entries()).unwrap();
        assert_eq!(s.entries(), &exps3("000021012")[..]);
        let zero = MvFunction::ternary("000000000").unwrap();
        let s0 = forward(Radix::THREE, zero.sign_of().entries()).unwrap();
        assert_eq!(s0.entries()[0], CycInt::from_int(Radix::THREE, 9));
        assert!(s0.entries()[1..].iter().all(|e| e.is_zero()));
        let c7 = MvFunction::ternary("000201021").unwrap();
        assert_eq!(forward(Radix::THREE, c7.sign_of().entries()).unwrap().entries(), &exps3("020011002")[..]);
    }

    #[test]
    fn fast_matches_dense_on_examples() {
        for d in ["000012021", "000000000", "000201021"] {
            let f = MvFunction::ternary(d).unwrap();
            let e = f.sign_of();
            assert_eq!(forward_fast(Radix::THREE, e.entries()), forward(Radix::THREE, e.entries()));
        }
        let v = vec![xi(1), CycInt::from_int(Radix::THREE, 2), xi(2).scale(-1)];
        let c = build_c(Radix::THREE, 1).unwrap().conj();
        assert_eq!(forward_fast(Radix::THREE, &v).unwrap().entries(), &c.mul_vec(&v).unwrap()[..]);
    }

    #[test]
    fn inverse_examples() {
        let f = MvFunction::ternary("000012021").unwrap();
        let s = forward_fast(Radix::THREE, f.sign_of().entries()).unwrap();
        assert_eq!(inverse(&s).unwrap(), f.sign_of().into_entries());

        let mut dc = vec![CycInt::zero(Radix::THREE); 9];
        dc[0] = CycInt::from_int(Radix::THREE, 9);
        let s = Spectrum::new(Radix::THREE, dc).unwrap();
        assert!(inverse(&s).unwrap().iter().all(|e| *e == xi(0)));

        // flat spectrum whose inverse is [0,…,0,3ξ]
        let trap = Spectrum::from_exponents(Radix::THREE, &[1, 2, 0, 2, 0, 1, 0, 1, 2]).unwrap();
        let back = inverse(&trap).unwrap();
        assert!(back[..8].iter().all(|e| e.is_zero()));
        assert_eq!(back[8], xi(1).scale(3));
    }

    #[test]
    fn not_divisible_inverse() {
        let mut v = vec![CycInt::zero(Radix::THREE); 9];
        v[0] = CycInt::from_int(Radix::THREE, 3);
        let s = Spectrum::new(Radix::THREE, v).unwrap();
        assert!(matches!(inverse(&s), Err(Error::NotDivisible { .. })));
    }

    #[test]
    fn flatness() {
        let f = MvFunction::ternary("000012021").unwrap();
        assert!(is_flat(&forward_sign(&f.sign_of()).unwrap()));
        let mut dc = vec![CycInt::zero(Radix::THREE); 9];
        dc[0] = CycInt::from_int(Radix::THREE, 9);
        assert!(!is_flat(&Spectrum::new(Radix::THREE, dc).unwrap()));
        let trap = Spectrum::from_exponents(Radix::THREE, &[1, 2, 0, 2, 0, 1, 0, 1, 2]).unwrap();
        assert!(is_flat(&trap));
    }

    #[test]
    fn spectrum_file_round_trip() {
        let s = Spectrum::from_exponents(Radix::THREE, &[0, 0, 0, 0, 2, 1, 0, 1, 2]).unwrap();
        assert_eq!(Spectrum::parse_file(&s.to_file_string()).unwrap(), s);
        assert_eq!(Spectrum::parse_file("3 2\nexp:000021012\n").unwrap(), s);
        assert!(Spectrum::parse_file("3 1\nexp:012").is_err());
        assert!(Spectrum::parse_file("3 2\n3\n3").is_err());
        assert!(Spectrum::parse_file("").is_err());
    }

    #[test]
    fn size_guard() {
        let limits = Limits { max_points: 27, max_dense: 9 };
        let v = vec![CycInt::one(Radix::THREE); 81];
        assert!(matches!(forward_fast_with(Radix::THREE, &v, &limits), Err(Error::SizeLimit { .. })));
        assert!(matches!(build_c_with(Radix::THREE, 3, &limits), Err(Error::SizeLimit { .. })));
        assert!(build_c_with(Radix::THREE, 2, &limits).is_ok());
    }

    fn cyc_vec(r: Radix, n: usize) -> impl Strategy<Value = Vec<CycInt>> {
        let len = r.as_usize().pow(n as u32);
        proptest::collection::vec(proptest::collection::vec(-5i64..5, r.degree()), len)
            .prop_map(move |v| v.iter().map(|c| CycInt::from_coeffs(r, c)).collect())
    }

    fn case() -> impl Strategy<Value = (Radix, Vec<CycInt>)> {
        prop_oneof![
            (1usize..=5).prop_flat_map(|n| cyc_vec(Radix::THREE, n)).prop_map(|v| (Radix::THREE, v)),
            (1usize..=3).prop_flat_map(|n| cyc_vec(Radix::FOUR, n)).prop_map(|v| (Radix::FOUR, v)),
            (1usize..=2).prop_flat_map(|n| cyc_vec(Radix::FIVE, n)).prop_map(|v| (Radix::FIVE, v)),
            (1usize..=2).prop_flat_map(|n| cyc_vec(Radix::SIX, n)).prop_map(|v| (Radix::SIX, v)),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn fast_equals_dense((r, v) in case()) {
            prop_assert_eq!(forward_fast(r, &v).unwrap(), forward(r, &v).unwrap());
        }

        #[test]
        fn forward_inverse_identity((r, v) in case()) {
            let s = forward_fast(r, &v).unwrap();
            prop_assert_eq!(inverse(&s).unwrap(), v);
        }
    }
}
