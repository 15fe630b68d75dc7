//! Bentness predicates: flat, bent, strict bent; spectrum-to-function
//! recovery; the dual; and what happens when a sign vector is negated.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::mvfunction::MvFunction;
use crate::vctransform::{self, Spectrum};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub index: usize,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BentVerdict {
    #[serde(rename = "flat")]
    pub is_flat: bool,
    #[serde(rename = "bent")]
    pub is_bent: bool,
    #[serde(rename = "strict")]
    pub is_strict_bent: bool,
    pub witness: Option<Witness>,
}

impl BentVerdict {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("verdict serializes")
    }
}

/// Where `spectrum_is_bent` gave up, in pipeline order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stage {
    NotFlat,
    NotDivisible,
    NotASign,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::NotFlat => "not-flat",
            Stage::NotDivisible => "not-divisible",
            Stage::NotASign => "not-a-sign",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("spectrum is not bent ({stage}) at index {index}: `{value}`")]
pub struct NotBentSpectrum {
    pub stage: Stage,
    pub index: usize,
    pub value: CycInt,
}

pub fn circular_spectrum(f: &MvFunction) -> Result<Spectrum> {
    vctransform::forward_sign(&f.sign_of())
}

pub fn is_bent(f: &MvFunction) -> Result<BentVerdict> {
    Ok(verdict_for(&circular_spectrum(f)?))
}

/// Verdict for a spectrum known to come from a genuine function.
pub fn verdict_for(s: &Spectrum) -> BentVerdict {
    if let Some(index) = vctransform::first_non_flat(s) {
        return BentVerdict {
            is_flat: false,
            is_bent: false,
            is_strict_bent: false,
            witness: Some(Witness { index, value: s.entries()[index].to_string() }),
        };
    }
    match strict_exponents(s) {
        Ok(_) => BentVerdict { is_flat: true, is_bent: true, is_strict_bent: true, witness: None },
        Err(e) => {
            let witness = match e {
                Error::NotStrict { index, value } => Some(Witness { index, value }),
                _ => None,
            };
            BentVerdict { is_flat: true, is_bent: true, is_strict_bent: false, witness }
        }
    }
}

/// Recovers g with S_g = S, or reports the first failing stage:
/// flatness, exact division by pⁿ, then membership of each entry in {ξ^k}.
/// For the last stage the witness is the first nonzero offending entry,
/// since zeros there are forced by the mass concentrated elsewhere.
pub fn spectrum_is_bent(s: &Spectrum) -> std::result::Result<MvFunction, NotBentSpectrum> {
    if let Some(index) = vctransform::first_non_flat(s) {
        return Err(NotBentSpectrum { stage: Stage::NotFlat, index, value: s.entries()[index] });
    }
    let radix = s.radix();
    let size = s.len() as i64;
    let raw = vctransform::apply_c(radix, s.entries()).expect("spectrum length already validated");
    let mut values = Vec::with_capacity(raw.len());
    for (index, v) in raw.into_iter().enumerate() {
        match v.div_exact_int(size) {
            Ok(q) => values.push(q),
            Err(_) => return Err(NotBentSpectrum { stage: Stage::NotDivisible, index, value: v }),
        }
    }
    let bad: Vec<usize> = (0..values.len()).filter(|&i| sign_exponent(&values[i]).is_none()).collect();
    if let Some(&first) = bad.iter().find(|&&i| !values[i].is_zero()).or(bad.first()) {
        return Err(NotBentSpectrum { stage: Stage::NotASign, index: first, value: values[first] });
    }
    Ok(MvFunction::try_from_sign(radix, &values).expect("every entry is a sign value"))
}

/// k with v = ξ^k, if any.
fn sign_exponent(v: &CycInt) -> Option<u32> {
    let r = v.radix();
    (0..r.get()).find(|&k| CycInt::root(r, k) == *v)
}

/// t with S(w) = p^(n/2)·ξ^(t(w)) for every w.
pub fn strict_exponents(s: &Spectrum) -> Result<Vec<u8>> {
    if s.vars() % 2 == 1 {
        return Err(Error::OddVariableCount(s.vars()));
    }
    let radix = s.radix();
    let scale = (radix.get() as i64).pow((s.vars() / 2) as u32);
    s.entries()
        .iter()
        .enumerate()
        .map(|(index, e)| {
            e.div_exact_int(scale)
                .ok()
                .and_then(|q| sign_exponent(&q))
                .map(|k| k as u8)
                .ok_or_else(|| Error::NotStrict { index, value: e.to_string() })
        })
        .collect()
}

/// The dual t of a strict bent f.
pub fn dual(f: &MvFunction) -> Result<MvFunction> {
    let t = strict_exponents(&circular_spectrum(f)?)?;
    MvFunction::new(f.radix(), f.vars(), t)
}

/// −F as a function: impossible for odd p (−ξ^k is never a p-th root of
/// unity), the shift f + p/2 for even p.
pub fn negate_classify(f: &MvFunction) -> Result<MvFunction> {
    let radix = f.radix();
    let negated: Vec<CycInt> = f.sign_of().entries().iter().map(|e| -*e).collect();
    if !radix.is_even() {
        return Err(Error::NotAFunction { index: 0, value: negated[0].to_string() });
    }
    let g = f.add_constant((radix.get() / 2) as u8);
    if g.sign_of().entries() != &negated[..] {
        return Err(Error::Invariant("shift by p/2 does not negate the sign vector".into()));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::Radix;
    use crate::genperm::{block_diag, gamma, GammaName};
    use proptest::prelude::*;

    fn f3(d: &str) -> MvFunction {
        MvFunction::ternary(d).unwrap()
    }

    fn exps(d: &str) -> Vec<u8> {
        d.chars().map(|c| c.to_digit(10).unwrap() as u8).collect()
    }

    #[test]
    fn spectra_of_seeds() {
        let s = circular_spectrum(&f3("000012021")).unwrap();
        assert_eq!(strict_exponents(&s).unwrap(), exps("000021012"));
        let s5 = circular_spectrum(&f3("200110020")).unwrap();
        assert_eq!(strict_exponents(&s5).unwrap(), exps("012021222"));
        let s9 = circular_spectrum(&f3("020011002")).unwrap();
        assert_eq!(strict_exponents(&s9).unwrap(), exps("000012210"));
        let s0 = circular_spectrum(&f3("000000000")).unwrap();
        assert_eq!(s0.entries()[0], CycInt::from_int(Radix::THREE, 9));
        assert!(matches!(strict_exponents(&s0), Err(Error::NotStrict { index: 0, .. })));
    }

    #[test]
    fn verdicts() {
        let v = is_bent(&f3("000012021")).unwrap();
        assert!(v.is_flat && v.is_bent && v.is_strict_bent && v.witness.is_none());
        assert!(is_bent(&f3("022202112")).unwrap().is_bent);
        let c = is_bent(&f3("000000000")).unwrap();
        assert!(!c.is_flat && !c.is_bent);
        assert_eq!(c.to_json(), r#"{"flat":false,"bent":false,"strict":false,"witness":{"index":0,"value":"9"}}"#);
        let one_place = is_bent(&f3("011")).unwrap();
        assert!(one_place.is_bent && !one_place.is_strict_bent);
    }

    #[test]
    fn recovery() {
        let n2 = gamma(GammaName::N).kron(&gamma(GammaName::N)).unwrap();
        let s = circular_spectrum(&f3("000012021")).unwrap();
        let g = spectrum_is_bent(&n2.apply_spectrum(&s).unwrap()).unwrap();
        assert_eq!(g.digits(), "021222120");

        let trap = Spectrum::from_exponents(Radix::THREE, &[1, 2, 0, 2, 0, 1, 0, 1, 2]).unwrap();
        let err = spectrum_is_bent(&trap).unwrap_err();
        assert_eq!(err.stage, Stage::NotASign);
        assert_eq!(err.index, 8);
        assert_eq!(err.value, CycInt::root(Radix::THREE, 1).scale(3));

        let iip = block_diag(&[gamma(GammaName::I), gamma(GammaName::I), gamma(GammaName::P12)]).unwrap();
        let s2 = iip.apply_spectrum(&s).unwrap();
        assert_eq!(strict_exponents(&s2).unwrap(), exps("000021021"));
        assert!(vctransform::is_flat(&s2));
        assert!(spectrum_is_bent(&s2).is_err());

        let mut dc = vec![CycInt::zero(Radix::THREE); 9];
        dc[0] = CycInt::from_int(Radix::THREE, 9);
        assert_eq!(spectrum_is_bent(&Spectrum::new(Radix::THREE, dc).unwrap()).unwrap_err().stage, Stage::NotFlat);
    }

    #[test]
    fn not_divisible_stage() {
        // negating one coefficient keeps the magnitudes but breaks divisibility of C·S by 9
        let r = Radix::THREE;
        let mut e: Vec<CycInt> = circular_spectrum(&f3("000012021")).unwrap().into_entries();
        e[1] = -e[1];
        let s = Spectrum::new(r, e).unwrap();
        assert!(vctransform::is_flat(&s));
        let err = spectrum_is_bent(&s).unwrap_err();
        assert_eq!(err.stage, Stage::NotDivisible);
    }

    #[test]
    fn duals() {
        let d = dual(&f3("000012021")).unwrap();
        assert_eq!(d.digits(), "000021012");
        assert!(is_bent(&d).unwrap().is_bent);
        assert!(is_bent(&dual(&d).unwrap()).unwrap().is_bent);
        assert_eq!(dual(&f3("200110020")).unwrap().digits(), "012021222");
        assert!(dual(&f3("000000000")).is_err());
    }

    #[test]
    fn negation() {
        assert!(matches!(negate_classify(&f3("000012021")), Err(Error::NotAFunction { index: 0, .. })));
        let f4 = MvFunction::from_digits(Radix::FOUR, "0123").unwrap();
        assert_eq!(negate_classify(&f4).unwrap().values(), &[2, 3, 0, 1]);
        let f6 = MvFunction::from_digits(Radix::SIX, "052413").unwrap();
        assert_eq!(negate_classify(&f6).unwrap().values(), &[3, 2, 5, 1, 4, 0]);
        let f5 = MvFunction::from_digits(Radix::FIVE, "01234").unwrap();
        assert!(negate_classify(&f5).is_err());
    }

    fn ternary_fn() -> impl Strategy<Value = MvFunction> {
        proptest::collection::vec(0u8..3, 9).prop_map(|v| MvFunction::new(Radix::THREE, 2, v).unwrap())
    }

    proptest! {
        #[test]
        fn recovery_inverts_spectrum(f in ternary_fn()) {
            let s = circular_spectrum(&f).unwrap();
            if vctransform::is_flat(&s) {
                prop_assert_eq!(spectrum_is_bent(&s).unwrap(), f);
            }
        }

        #[test]
        fn constant_rotates_spectrum(f in ternary_fn(), c in 0u8..3) {
            let s = circular_spectrum(&f).unwrap();
            prop_assert_eq!(circular_spectrum(&f.add_constant(c)).unwrap(), s.rotate(c as u32));
        }
    }
}
