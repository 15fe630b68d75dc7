//! Constructive generation of the 2-place ternary bent functions: class
//! expansion of the nine seeds under α⊗β permutations of their spectra,
//! rotation by constants, the Maiorana construction, tensor sums, and the
//! block-diagonal case study.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::bentlab::{self, spectrum_is_bent};
use crate::cyclotomic::Radix;
use crate::error::{Error, Result};
use crate::genperm::{block_diag, gamma, GammaName, GenPerm};
use crate::mvfunction::{digits_of, vec_columns, MvFunction};
use crate::vctransform::Spectrum;

pub struct Seed {
    pub class: u8,
    pub values: &'static str,
    pub polynomial: &'static str,
    pub exponents: &'static str,
}

/// The nine class representatives with their polynomial forms and the
/// exponents of their spectra.
pub const SEEDS: [Seed; 9] = [
    Seed { class: 1, values: "000012021", polynomial: "x1*x2", exponents: "000021012" },
    Seed { class: 2, values: "001010022", polynomial: "x1*x2 + x2 + 2*x2^2", exponents: "000021120" },
    Seed { class: 3, values: "210000012", polynomial: "x1*x2 + x1^2 + 2*x2 + 2", exponents: "002212122" },
    Seed { class: 4, values: "100010220", polynomial: "2*x1*x2 + 2*x1 + 2*x2^2 + 1", exponents: "012021111" },
    Seed { class: 5, values: "200110020", polynomial: "2*x1*x2 + 2*x1 + x2^2 + 2", exponents: "012021222" },
    Seed { class: 6, values: "102000012", polynomial: "x1*x2 + 2*x2 + 2*x1^2 + 1", exponents: "001211121" },
    Seed { class: 7, values: "000201021", polynomial: "x1*x2 + x1 + x1^2", exponents: "020011002" },
    Seed { class: 8, values: "000021120", polynomial: "2*x1*x2 + x1 + 2*x1^2", exponents: "010022001" },
    Seed { class: 9, values: "020011002", polynomial: "2*x1*x2 + x2 + x2^2", exponents: "000012210" },
];

pub fn seed(class: u8) -> Result<MvFunction> {
    SEEDS
        .iter()
        .find(|s| s.class == class)
        .ok_or_else(|| Error::Shape(format!("class {class} is outside 1..9")))
        .and_then(|s| MvFunction::ternary(s.values))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub alpha: GammaName,
    pub beta: GammaName,
    pub perm: GenPerm,
}

impl CatalogEntry {
    pub fn label(&self) -> String {
        format!("{},{}", self.alpha, self.beta)
    }
}

/// α⊗β over Γ×Γ in lexicographic order, without I⊗I: 35 entries.
pub fn kron_perm_catalog() -> Vec<CatalogEntry> {
    let mut out = Vec::with_capacity(35);
    for alpha in GammaName::ALL {
        for beta in GammaName::ALL {
            if alpha == GammaName::I && beta == GammaName::I {
                continue;
            }
            let perm = gamma(alpha).kron(&gamma(beta)).expect("same radix");
            out.push(CatalogEntry { alpha, beta, perm });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassRow {
    pub row: usize,
    #[serde(serialize_with = "as_digits")]
    pub g: MvFunction,
    pub alpha: GammaName,
    pub beta: GammaName,
    #[serde(serialize_with = "exps_as_digits")]
    pub spectrum_exponents: Vec<u8>,
}

impl ClassRow {
    pub fn label(&self) -> String {
        format!("{},{}", self.alpha, self.beta)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassRecord {
    pub class: u8,
    #[serde(serialize_with = "as_digits")]
    pub seed: MvFunction,
    pub rows: Vec<ClassRow>,
}

impl ClassRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("records serialize")
    }

    pub fn row_for(&self, g: &MvFunction) -> Option<&ClassRow> {
        self.rows.iter().find(|r| &r.g == g)
    }

    /// TSV lines in the appendix fixture format.
    pub fn to_tsv(&self) -> String {
        self.rows
            .iter()
            .map(|r| {
                format!("{}\t{}\t{}\t{}\t{}\n", self.class, r.row, r.g.digits(), r.label(), exps_string(&r.spectrum_exponents))
            })
            .collect()
    }
}

fn as_digits<S: serde::Serializer>(f: &MvFunction, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&f.digits())
}

fn exps_as_digits<S: serde::Serializer>(e: &[u8], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&exps_string(e))
}

pub fn exps_string(e: &[u8]) -> String {
    e.iter().map(|d| char::from(b'0' + d)).collect()
}

fn exponents_of(s: &Spectrum) -> Result<Vec<u8>> {
    bentlab::strict_exponents(s)
}

/// The 18 primitives of a class: the seed (row 1, labelled I,I) followed by
/// the other distinct g reachable by one catalog permutation, sorted by
/// value vector. Each g keeps the first catalog label that produced it.
pub fn generate_class(class: u8, seed: &MvFunction) -> Result<ClassRecord> {
    if seed.radix() != Radix::THREE || seed.vars() != 2 {
        return Err(Error::Shape("class generation works on 2-place ternary functions".into()));
    }
    let s = bentlab::circular_spectrum(seed)?;
    if !crate::vctransform::is_flat(&s) {
        return Err(Error::NotBent(seed.digits()));
    }
    let mut found: BTreeMap<MvFunction, (GammaName, GammaName, Vec<u8>)> = BTreeMap::new();
    let mut reached_seed = false;
    for entry in kron_perm_catalog() {
        let sg = entry.perm.apply_spectrum(&s)?;
        let g = spectrum_is_bent(&sg)
            .map_err(|e| Error::Invariant(format!("{} on {}: {e}", entry.label(), seed.digits())))?;
        if &g == seed {
            reached_seed = true;
            continue;
        }
        let exps = exponents_of(&sg)?;
        found.entry(g).or_insert((entry.alpha, entry.beta, exps));
    }
    let distinct = found.len() + usize::from(reached_seed);
    if distinct != 18 || !reached_seed {
        return Err(Error::DegenerateSeed(distinct));
    }
    let mut rows = vec![ClassRow {
        row: 1,
        g: seed.clone(),
        alpha: GammaName::I,
        beta: GammaName::I,
        spectrum_exponents: exponents_of(&s)?,
    }];
    for (i, (g, (alpha, beta, exps))) in found.into_iter().enumerate() {
        rows.push(ClassRow { row: i + 2, g, alpha, beta, spectrum_exponents: exps });
    }
    Ok(ClassRecord { class, seed: seed.clone(), rows })
}

pub fn generate_classes(jobs: usize) -> Result<Vec<ClassRecord>> {
    let work = |s: &Seed| generate_class(s.class, &MvFunction::ternary(s.values)?);
    if jobs <= 1 {
        return SEEDS.iter().map(work).collect();
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = SEEDS.iter().map(|s| scope.spawn(move || work(s))).collect();
        handles.into_iter().map(|h| h.join().expect("class worker panicked")).collect()
    })
}

/// The 18 primitives together with g ⊕ 1 and g ⊕ 2.
pub fn expand_rotations(record: &ClassRecord) -> Vec<MvFunction> {
    let mut out = Vec::with_capacity(record.rows.len() * 3);
    for c in 0..3 {
        out.extend(record.rows.iter().map(|r| r.g.add_constant(c)));
    }
    out
}

/// Every function reachable from the nine seeds, sorted.
pub fn generate_all(jobs: usize) -> Result<Vec<MvFunction>> {
    let set: BTreeSet<MvFunction> = generate_classes(jobs)?.iter().flat_map(expand_rotations).collect();
    Ok(set.into_iter().collect())
}

#[derive(Debug, Clone)]
pub struct MaioranaSpec {
    pub m: usize,
    pub q: GenPerm,
    pub v: MvFunction,
}

/// Exponent matrix M[i][j] = ⟨i·j⟩ mod 3 over m-digit indices.
pub fn exponent_matrix(m: usize) -> Vec<Vec<u8>> {
    let side = 3usize.pow(m as u32);
    (0..side)
        .map(|i| (0..side).map(|j| crate::vctransform::digit_dot(i, j, 3, m) as u8).collect())
        .collect()
}

/// f = vec(M·Q ⊕ (1 ⊗ vᵀ)), columns stacked; checked bent before returning.
pub fn maiorana(spec: &MaioranaSpec) -> Result<MvFunction> {
    let side = 3usize.checked_pow(spec.m as u32).ok_or(Error::SizeLimit { size: usize::MAX, limit: 59_049 })?;
    crate::vctransform::Limits::default().check_points(side * side)?;
    if spec.q.size() != side || !spec.q.is_straight() || spec.q.radix() != Radix::THREE {
        return Err(Error::Shape(format!("Q must be a straight {side}×{side} permutation")));
    }
    if spec.v.radix() != Radix::THREE || spec.v.len() != side {
        return Err(Error::Shape(format!("v must have {side} ternary values")));
    }
    // (M·Q)[i][j] = M[i][r] where row r of Q has its 1 in column j
    let mut source = vec![0usize; side];
    for (r, &(c, _)) in spec.q.rows().iter().enumerate() {
        source[c] = r;
    }
    let v = spec.v.values();
    let rows: Vec<Vec<u8>> = (0..side)
        .map(|i| (0..side).map(|j| ((crate::vctransform::digit_dot(i, source[j], 3, spec.m) as u8) + v[j]) % 3).collect())
        .collect();
    let f = MvFunction::new(Radix::THREE, 2 * spec.m, vec_columns(&rows)?)?;
    if !bentlab::is_bent(&f)?.is_bent {
        return Err(Error::Invariant(format!("Maiorana output {} is not bent", f.digits())));
    }
    Ok(f)
}

/// Distinct Maiorana outputs over all straight Q and all v for m = 1.
pub fn maiorana_enumerate(m: usize) -> Result<Vec<MvFunction>> {
    if m != 1 {
        return Err(Error::SizeLimit { size: 3usize.saturating_pow(m as u32), limit: 3 });
    }
    let mut out = BTreeSet::new();
    for q in GammaName::ALL {
        for k in 0..27usize {
            let v = MvFunction::new(Radix::THREE, 1, digits_of(k, 3, 3).into_iter().map(|d| d as u8).collect())?;
            out.insert(maiorana(&MaioranaSpec { m: 1, q: gamma(q), v })?);
        }
    }
    Ok(out.into_iter().collect())
}

/// f₃ = f₁ ⊞ f₂ together with its spectrum, checked against S₁ ⊗ S₂.
pub fn tensor_sum_spectrum_law(f1: &MvFunction, f2: &MvFunction) -> Result<(MvFunction, Spectrum)> {
    for f in [f1, f2] {
        if !bentlab::is_bent(f)?.is_bent {
            return Err(Error::NotBent(f.digits()));
        }
    }
    let f3 = f1.tensor_sum(f2)?;
    let s3 = bentlab::circular_spectrum(&f3)?;
    let expected = bentlab::circular_spectrum(f1)?.kron(&bentlab::circular_spectrum(f2)?)?;
    if s3 != expected {
        return Err(Error::Invariant("spectrum of a tensor sum differs from the Kronecker product".into()));
    }
    Ok((f3, s3))
}

/// (P′ ⊗ P″)(S₁ ⊗ S₂) == (P′S₁) ⊗ (P″S₂).
pub fn commuting_identity(p1: &GenPerm, p2: &GenPerm, s1: &Spectrum, s2: &Spectrum) -> Result<bool> {
    let lhs = p1.kron(p2)?.apply_spectrum(&s1.kron(s2)?)?;
    let rhs = p1.apply_spectrum(s1)?.kron(&p2.apply_spectrum(s2)?)?;
    Ok(lhs == rhs)
}

/// Distinct f ⊞ g over the two sets.
pub fn tensor_sums(a: &[MvFunction], b: &[MvFunction]) -> Result<Vec<MvFunction>> {
    let mut out = BTreeSet::new();
    for f in a {
        for g in b {
            out.insert(f.tensor_sum(g)?);
        }
    }
    Ok(out.into_iter().collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurveyEntry {
    pub blocks: [GammaName; 3],
    pub exponents: String,
    /// Recovered g, or the stage at which recovery failed.
    pub outcome: std::result::Result<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurveyReport {
    pub seed: String,
    pub triples: usize,
    pub flat: usize,
    pub bent: usize,
    pub flat_not_bent: usize,
    pub distinct_bent: usize,
    pub new_outside_class: usize,
    pub prose_count: usize,
    pub prose_formula: &'static str,
    pub entries: Vec<SurveyEntry>,
}

/// blockdiag(a, b, c) over all ordered triples from Γ applied to S_seed.
pub fn blockdiag_survey(seed: &MvFunction) -> Result<SurveyReport> {
    let s = bentlab::circular_spectrum(seed)?;
    let class_members: BTreeSet<MvFunction> = generate_class(0, seed).map(|c| c.rows.into_iter().map(|r| r.g).collect()).unwrap_or_default();
    let mut entries = Vec::with_capacity(216);
    let mut distinct = BTreeSet::new();
    let mut flat = 0;
    for a in GammaName::ALL {
        for b in GammaName::ALL {
            for c in GammaName::ALL {
                let p = block_diag(&[gamma(a), gamma(b), gamma(c)])?;
                let sg = p.apply_spectrum(&s)?;
                if crate::vctransform::is_flat(&sg) {
                    flat += 1;
                }
                let exponents = exps_string(&exponents_of(&sg).unwrap_or_default());
                let outcome = spectrum_is_bent(&sg).map(|g| g.digits()).map_err(|e| e.stage.to_string());
                if let Ok(g) = &outcome {
                    distinct.insert(MvFunction::ternary(g)?);
                }
                entries.push(SurveyEntry { blocks: [a, b, c], exponents, outcome });
            }
        }
    }
    let bent = entries.iter().filter(|e| e.outcome.is_ok()).count();
    Ok(SurveyReport {
        seed: seed.digits(),
        triples: entries.len(),
        flat,
        bent,
        flat_not_bent: flat - bent,
        distinct_bent: distinct.len(),
        new_outside_class: distinct.iter().filter(|g| !class_members.contains(*g)).count(),
        prose_count: 120 * 6 + 30 * 3 + 5,
        prose_formula: "120·6 + 30·3 + 5",
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mvfunction::Polynomial;

    #[test]
    fn seeds_are_consistent() {
        for s in &SEEDS {
            let f = MvFunction::ternary(s.values).unwrap();
            assert_eq!(Polynomial::parse(Radix::THREE, s.polynomial).unwrap().eval(2).unwrap(), f, "class {}", s.class);
            let e = bentlab::strict_exponents(&bentlab::circular_spectrum(&f).unwrap()).unwrap();
            assert_eq!(exps_string(&e), s.exponents, "class {}", s.class);
        }
    }

    #[test]
    fn catalog() {
        let c = kron_perm_catalog();
        assert_eq!(c.len(), 35);
        assert_eq!(c[0].label(), "I,P01");
        assert_eq!(c[0].perm, gamma(GammaName::I).kron(&gamma(GammaName::P01)).unwrap());
        assert!(c.iter().any(|e| e.label() == "X,I"));
        assert!(c.iter().any(|e| e.label() == "P01,P01"));
        assert!(c.iter().all(|e| e.perm.is_straight()));
    }

    #[test]
    fn class_one() {
        let rec = generate_class(1, &seed(1).unwrap()).unwrap();
        assert_eq!(rec.rows.len(), 18);
        assert_eq!(rec.rows[0].g, seed(1).unwrap());
        let row = rec.row_for(&MvFunction::ternary("000021012").unwrap()).unwrap();
        assert_eq!(exps_string(&row.spectrum_exponents), "000012021");
        // I⊗P12 comes first in the catalog and produces the same spectrum as P12⊗I
        assert_eq!(row.label(), "I,P12");
        let p12_i = gamma(GammaName::P12).kron(&gamma(GammaName::I)).unwrap();
        let s = bentlab::circular_spectrum(&seed(1).unwrap()).unwrap();
        assert_eq!(spectrum_is_bent(&p12_i.apply_spectrum(&s).unwrap()).unwrap(), row.g);
        let distinct: BTreeSet<_> = rec.rows.iter().map(|r| &r.g).collect();
        assert_eq!(distinct.len(), 18);
    }

    #[test]
    fn class_four_and_six() {
        let rec4 = generate_class(4, &seed(4).unwrap()).unwrap();
        assert!(rec4.row_for(&MvFunction::ternary("100202001").unwrap()).is_some());
        let p12_2 = gamma(GammaName::P12).kron(&gamma(GammaName::P12)).unwrap();
        let s4 = bentlab::circular_spectrum(&seed(4).unwrap()).unwrap();
        let g = spectrum_is_bent(&p12_2.apply_spectrum(&s4).unwrap()).unwrap();
        assert_eq!(g.digits(), "100202001");

        let s6 = bentlab::circular_spectrum(&seed(6).unwrap()).unwrap();
        for (a, b) in [(GammaName::X, GammaName::I), (GammaName::P01, GammaName::P01)] {
            let sg = gamma(a).kron(&gamma(b)).unwrap().apply_spectrum(&s6).unwrap();
            assert_eq!(exps_string(&bentlab::strict_exponents(&sg).unwrap()), "121001211");
        }
    }

    #[test]
    fn degenerate_seed() {
        assert!(matches!(generate_class(0, &MvFunction::ternary("000000000").unwrap()), Err(Error::NotBent(_))));
    }

    #[test]
    fn rotations() {
        let rec = generate_class(1, &seed(1).unwrap()).unwrap();
        let all = expand_rotations(&rec);
        assert_eq!(all.len(), 54);
        assert_eq!(all.iter().collect::<BTreeSet<_>>().len(), 54);
        let s = bentlab::circular_spectrum(&seed(1).unwrap()).unwrap();
        let shifted = seed(1).unwrap().add_constant(1);
        assert!(all.contains(&shifted));
        assert_eq!(bentlab::circular_spectrum(&shifted).unwrap(), s.rotate(1));
    }

    #[test]
    fn json_export() {
        let rec = generate_class(1, &seed(1).unwrap()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&rec.to_json()).unwrap();
        assert_eq!(v["seed"], "000012021");
        assert_eq!(v["rows"][1]["g"], "000021012");
        assert_eq!(v["rows"][1]["alpha"], "I");
        assert_eq!(v["rows"][1]["beta"], "P12");
        assert_eq!(rec.to_tsv().lines().nth(1).unwrap(), "1\t2\t000021012\tI,P12\t000012021");
    }

    #[test]
    fn maiorana_examples() {
        let v0 = MvFunction::ternary("000").unwrap();
        let f = maiorana(&MaioranaSpec { m: 1, q: gamma(GammaName::I), v: v0.clone() }).unwrap();
        assert_eq!(f.digits(), "000012021");
        let v1 = MvFunction::ternary("111").unwrap();
        assert_eq!(maiorana(&MaioranaSpec { m: 1, q: gamma(GammaName::I), v: v1 }).unwrap().digits(), "111120102");
        assert!(maiorana(&MaioranaSpec { m: 1, q: gamma(GammaName::I).scale(crate::RootScalar::xi_pow(1)), v: v0 }).is_err());
        assert!(maiorana_enumerate(2).is_err());
    }

    #[test]
    fn tensor_sum_law() {
        let f = seed(1).unwrap();
        let (f3, s3) = tensor_sum_spectrum_law(&f, &f).unwrap();
        assert_eq!(f3.vars(), 4);
        assert_eq!(s3.len(), 81);
        assert!(crate::vctransform::is_flat(&s3));
        let s = bentlab::circular_spectrum(&f).unwrap();
        let p1 = gamma(GammaName::P12).kron(&gamma(GammaName::I)).unwrap();
        let p2 = gamma(GammaName::N).kron(&gamma(GammaName::I)).unwrap();
        assert!(commuting_identity(&p1, &p2, &s, &s).unwrap());
        let g3 = spectrum_is_bent(&p1.kron(&p2).unwrap().apply_spectrum(&s3).unwrap()).unwrap();
        assert!(bentlab::is_bent(&g3).unwrap().is_bent);
        assert!(tensor_sum_spectrum_law(&MvFunction::ternary("000000000").unwrap(), &f).is_err());
    }

    #[test]
    fn survey() {
        let r = blockdiag_survey(&seed(1).unwrap()).unwrap();
        assert_eq!(r.triples, 216);
        assert_eq!(r.flat, 216);
        assert_eq!(r.prose_count, 815);
        let find = |b: [GammaName; 3]| r.entries.iter().find(|e| e.blocks == b).unwrap();
        let iix = find([GammaName::I, GammaName::I, GammaName::X]);
        assert_eq!(iix.exponents, "000021201");
        assert!(iix.outcome.is_ok());
        let iip = find([GammaName::I, GammaName::I, GammaName::P12]);
        assert_eq!(iip.exponents, "000021021");
        assert!(iip.outcome.is_err());
        for a in GammaName::ALL {
            assert_eq!(find([a, GammaName::I, GammaName::X]).outcome, iix.outcome);
        }
    }
}
