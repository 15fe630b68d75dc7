//! Worked examples at p = 3, n = 2, replayed step by step: the conjugate
//! spectrum, the N⊗N permutation, a diagonal permutation without Kronecker
//! structure (dense, additive and factored routes), the flat-but-not-bent
//! trap, and negation of sign vectors for p = 3..6.

use crate::bentlab::{self, NotBentSpectrum};
use crate::cyclotomic::{ascii, CycInt, Radix, RootScalar};
use crate::error::{Error, Result};
use crate::genperm::{
    block_diag, conjugate_blockdiag, conjugate_by_c, conjugate_kron, diag_from_flat_spectrum, gamma, pauli_z,
    GammaName, GenPerm, PermExpr, PermOperator, Route,
};
use crate::matrix::ScaledCycMatrix;
use crate::mvfunction::MvFunction;
use crate::vctransform::{self, Spectrum};

fn show(c: &CycInt, pretty: bool) -> String {
    if pretty {
        c.pretty()
    } else {
        ascii(&c.pretty())
    }
}

fn show_vec(v: &[CycInt], pretty: bool) -> String {
    let parts: Vec<String> = v.iter().map(|c| show(c, pretty)).collect();
    format!("[{}]", parts.join(" "))
}

fn show_text(s: &str, pretty: bool) -> String {
    if pretty {
        s.to_string()
    } else {
        ascii(s)
    }
}

fn show_matrix(m: &ScaledCycMatrix, pretty: bool) -> Vec<String> {
    m.render_with(|c| show(c, pretty)).lines().map(String::from).collect()
}

fn x1x2() -> MvFunction {
    MvFunction::ternary("000012021").expect("literal")
}

/// Recover g from a spectrum that must be bent here.
fn recover(s: &Spectrum) -> Result<MvFunction> {
    bentlab::spectrum_is_bent(s).map_err(|e| Error::Invariant(e.to_string()))
}

/// S_g = (S_f)*, reached by P = 3^(−n/2)·diag(S_f); also G = P12(n)·F*.
#[derive(Debug, Clone)]
pub struct ConjugateCase {
    pub f: MvFunction,
    pub s_f: Spectrum,
    pub p: GenPerm,
    pub blockdiag_form: GenPerm,
    pub s_g: Spectrum,
    pub g: MvFunction,
    pub g_via_p12: Vec<CycInt>,
}

pub fn case1() -> Result<ConjugateCase> {
    let f = x1x2();
    let s_f = bentlab::circular_spectrum(&f)?;
    let p = diag_from_flat_spectrum(&s_f)?;
    let r = Radix::THREE;
    let blockdiag_form = block_diag(&[gamma(GammaName::I), pauli_z(r, true), pauli_z(r, false)])?;
    let s_g = p.apply_spectrum(&s_f)?;
    if s_g != s_f.conj() {
        return Err(Error::Invariant("diag(S_f)/3 does not conjugate S_f".into()));
    }
    let g = recover(&s_g)?;
    let p12 = gamma(GammaName::P12).kron(&gamma(GammaName::P12))?;
    let f_conj: Vec<CycInt> = f.sign_of().entries().iter().map(CycInt::conj).collect();
    let g_via_p12 = p12.apply(&f_conj)?;
    Ok(ConjugateCase { f, s_f, p, blockdiag_form, s_g, g, g_via_p12 })
}

impl ConjugateCase {
    pub fn render(&self, pretty: bool) -> Vec<String> {
        let diag: Vec<CycInt> = self.p.rows().iter().map(|&(_, s)| s.to_cyc(Radix::THREE)).collect();
        vec![
            format!("f = {}", self.f.grouped()),
            format!("S_f = {}", show_vec(self.s_f.entries(), pretty)),
            format!("P(2) = diag(S_f)/3 = diag{}", show_vec(&diag, pretty)),
            format!("P(2) == blockdiag(I, Z*, Z): {}", self.p == self.blockdiag_form),
            format!("S_g = P(2)·S_f = {}", show_vec(self.s_g.entries(), pretty)),
            format!("G = P12(2)·F* = {}", show_vec(&self.g_via_p12, pretty)),
            format!("G == sign of g: {}", self.g.sign_of().entries() == &self.g_via_p12[..]),
            format!("g = {}", self.g.grouped()),
        ]
    }
}

/// One row of the N⊗N walkthrough.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRow {
    pub f: u8,
    pub sign: CycInt,
    pub s_f: CycInt,
    pub s_g: CycInt,
    pub wf: CycInt,
    pub g: u8,
}

#[derive(Debug, Clone)]
pub struct KroneckerCase {
    pub w: GenPerm,
    pub rows: Vec<StepRow>,
    pub g: MvFunction,
}

/// S_g = N(2)·S_f for f = x1x2; G = W(2)·F with W = table(N)⊗table(N).
pub fn case2() -> Result<KroneckerCase> {
    let f = x1x2();
    let sign = f.sign_of();
    let s_f = bentlab::circular_spectrum(&f)?;
    let n2 = gamma(GammaName::N).kron(&gamma(GammaName::N))?;
    let s_g = n2.apply_spectrum(&s_f)?;
    let w = conjugate_kron(&[GammaName::N, GammaName::N]);
    let wf = w.apply(sign.entries())?;
    let g = MvFunction::try_from_sign(Radix::THREE, &wf)?;
    if recover(&s_g)? != g {
        return Err(Error::Invariant("W(2)·F disagrees with the inverse of S_g".into()));
    }
    let rows = (0..9)
        .map(|i| StepRow {
            f: f.values()[i],
            sign: sign.entries()[i],
            s_f: s_f.entries()[i],
            s_g: s_g.entries()[i],
            wf: wf[i],
            g: g.values()[i],
        })
        .collect();
    Ok(KroneckerCase { w, rows, g })
}

impl KroneckerCase {
    pub fn render(&self, pretty: bool) -> Vec<String> {
        let mut out = vec!["W(2) = table(N)⊗table(N) =".to_string()];
        out.extend(show_matrix(&ScaledCycMatrix::integral(self.w.to_dense()), pretty));
        out.push("f\tF\tS_f\tS_g\tW·F\tg".into());
        for r in &self.rows {
            out.push(format!(
                "{}\t{}\t{}\t{}\t{}\t{}",
                r.f,
                show(&r.sign, pretty),
                show(&r.s_f, pretty),
                show(&r.s_g, pretty),
                show(&r.wf, pretty),
                r.g
            ));
        }
        out.push(format!("g = {}", self.g.grouped()));
        out
    }
}

/// A diagonal P(2) without Kronecker structure, then the same G from a
/// factored P″(2).
#[derive(Debug, Clone)]
pub struct DiagonalCase {
    pub p: GenPerm,
    pub w: ScaledCycMatrix,
    pub w_additive: ScaledCycMatrix,
    pub f_sign: Vec<CycInt>,
    pub g_sign: Vec<CycInt>,
    pub g: MvFunction,
    pub p_second: PermExpr,
    pub w_second: PermOperator,
    pub g_sign_second: Vec<CycInt>,
}

pub const CASE3_DIAGONAL: &str = "diag(w^2,1,w,1,1,1,w,1,w^2)";
pub const CASE3_BLOCKDIAG: &str = "blockdiag(w^2*Z,I,w*Zc)";
pub const CASE3_KRONECKER: &str = "kron(w*P12,compose(compose(P01,N),Z))";

pub fn case3() -> Result<DiagonalCase> {
    let r = Radix::THREE;
    let f = x1x2();
    let f_sign = f.sign_of().into_entries();
    let p = GenPerm::diagonal(r, &[2, 0, 1, 0, 0, 0, 1, 0, 2].map(RootScalar::xi_pow));
    let blocks = [pauli_z(r, false).scale(RootScalar::xi_pow(2)), gamma(GammaName::I), pauli_z(r, true).scale(RootScalar::xi_pow(1))];
    if block_diag(&blocks)? != p {
        return Err(Error::Invariant("block-diagonal form differs from the diagonal".into()));
    }
    let w = conjugate_by_c(&p.clone().into())?.to_matrix();
    let w_additive = conjugate_blockdiag(&blocks)?;
    let g_sign = w.mul_vec(&f_sign)?;
    let g = MvFunction::try_from_sign(r, &g_sign)?;
    let s_f = bentlab::circular_spectrum(&f)?;
    if recover(&p.apply_spectrum(&s_f)?)? != g {
        return Err(Error::Invariant("W(2)·F disagrees with the inverse of S_g".into()));
    }
    let p_second = PermExpr::parse(CASE3_KRONECKER)?;
    let w_second = p_second.conjugate(r, Route::Table)?;
    let g_sign_second = w_second.apply(&f_sign)?;
    Ok(DiagonalCase { p, w, w_additive, f_sign, g_sign, g, p_second, w_second, g_sign_second })
}

impl DiagonalCase {
    pub fn routes_agree(&self) -> bool {
        self.w == self.w_additive && self.g_sign == self.g_sign_second
    }

    pub fn render(&self, pretty: bool) -> Vec<String> {
        let mut out = vec![format!("P(2) = {CASE3_DIAGONAL}"), "W(2) = 9⁻¹·C(2)·P(2)·C*(2) =".into()];
        out.extend(show_matrix(&self.w, pretty));
        out.push(format!("W(2) is a generalized permutation: {}", self.w.is_generalized_permutation()));
        out.push(format!("P'(2) = {CASE3_BLOCKDIAG}; additive decomposition gives the same W(2): {}", self.w == self.w_additive));
        out.push(format!("F = {}", show_vec(&self.f_sign, pretty)));
        out.push(format!("G = W(2)·F = {}", show_vec(&self.g_sign, pretty)));
        out.push(format!("g = {}", self.g.grouped()));
        out.push(format!("P''(2) = {}", self.p_second));
        out.push("W''(2) =".into());
        out.extend(show_matrix(&self.w_second.to_matrix(), pretty));
        out.push(format!("W''(2)·F = {}", show_vec(&self.g_sign_second, pretty)));
        out.push(format!("same G from both routes: {}", self.routes_agree()));
        out
    }
}

/// P(2) = diag(S_f1)/3 applied to S_f2: flat, but its inverse is no sign vector.
#[derive(Debug, Clone)]
pub struct TrapCase {
    pub f1: MvFunction,
    pub f2: MvFunction,
    pub s_f1: Spectrum,
    pub s_f2: Spectrum,
    pub p: GenPerm,
    pub s_g: Spectrum,
    pub flat: bool,
    pub inverse: Vec<CycInt>,
    pub failure: NotBentSpectrum,
}

pub fn case4() -> Result<TrapCase> {
    let f1 = x1x2();
    let f2 = MvFunction::ternary("021201111")?;
    let s_f1 = bentlab::circular_spectrum(&f1)?;
    let s_f2 = bentlab::circular_spectrum(&f2)?;
    let p = diag_from_flat_spectrum(&s_f1)?;
    let s_g = p.apply_spectrum(&s_f2)?;
    let flat = vctransform::is_flat(&s_g);
    let inverse = vctransform::inverse(&s_g)?;
    let failure = match bentlab::spectrum_is_bent(&s_g) {
        Err(e) => e,
        Ok(g) => return Err(Error::Invariant(format!("expected no function, got {}", g.digits()))),
    };
    Ok(TrapCase { f1, f2, s_f1, s_f2, p, s_g, flat, inverse, failure })
}

impl TrapCase {
    pub fn render(&self, pretty: bool) -> Vec<String> {
        let mut out = vec!["f1\tf2\tS_f1\tS_f2\tdiag P(2)\tS_g".to_string()];
        for i in 0..9 {
            out.push(format!(
                "{}\t{}\t{}\t{}\t{}\t{}",
                self.f1.values()[i],
                self.f2.values()[i],
                show(&self.s_f1.entries()[i], pretty),
                show(&self.s_f2.entries()[i], pretty),
                show(&self.p.rows()[i].1.to_cyc(Radix::THREE), pretty),
                show(&self.s_g.entries()[i], pretty),
            ));
        }
        out.push(format!("S_g flat: {}", self.flat));
        out.push(format!("9⁻¹·C(2)·S_g = {}", show_vec(&self.inverse, pretty)));
        out.push(format!(
            "{} at index {}: {}",
            self.failure.stage,
            self.failure.index,
            show(&self.failure.value, pretty)
        ));
        out
    }
}

/// −F for f = [0 1 … p−1], n = 1.
#[derive(Debug, Clone)]
pub struct NegationCase {
    pub radix: Radix,
    pub f: MvFunction,
    pub outcome: std::result::Result<MvFunction, Error>,
}

pub fn theorem4(radix: Radix) -> Result<NegationCase> {
    let f = MvFunction::new(radix, 1, (0..radix.get() as u8).collect())?;
    let outcome = bentlab::negate_classify(&f);
    Ok(NegationCase { radix, f, outcome })
}

impl NegationCase {
    pub fn render(&self, pretty: bool) -> Vec<String> {
        let neg: Vec<CycInt> = self.f.sign_of().entries().iter().map(|e| -*e).collect();
        let mut out = vec![
            format!("p = {}, f = {}", self.radix, self.f.digits()),
            format!("-F = {}", show_vec(&neg, pretty)),
        ];
        out.push(match &self.outcome {
            Ok(g) => format!("-F is the sign of f + {} = {}", self.radix.get() / 2, g.digits()),
            Err(Error::NotAFunction { index, .. }) => format!(
                "no function: {} at index {index} is not a power of {}",
                show(&neg[*index], pretty),
                show_text("ξ", pretty)
            ),
            Err(e) => format!("error: {e}"),
        });
        out
    }
}
