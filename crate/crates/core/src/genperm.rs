//! Generalized permutation matrices: one ±ξ^k entry per row and column.
//!
//! Row r of a [`GenPerm`] stores `(c, s)`, meaning `(P·v)[r] = s·v[c]`.
//! Conjugation W = p⁻ⁿ·C(n)·P·C*(n) is available densely (column by column
//! through the fast transform) and through the precomputed image of each
//! element of Γ, which extends to Kronecker products and compositions.

use std::fmt;
use std::str::FromStr;

use crate::cyclotomic::{CycInt, Radix, RootScalar};
use crate::error::{Error, Result};
use crate::matrix::{DenseCycMatrix, ScaledCycMatrix};
use crate::mvfunction::infer_vars;
use crate::vctransform::{self, Limits, Spectrum};

/// The six straight 3×3 permutations of Γ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum GammaName {
    I,
    P01,
    P12,
    N,
    X,
    XT,
}

impl GammaName {
    pub const ALL: [GammaName; 6] =
        [GammaName::I, GammaName::P01, GammaName::P12, GammaName::N, GammaName::X, GammaName::XT];

    pub fn as_str(self) -> &'static str {
        match self {
            GammaName::I => "I",
            GammaName::P01 => "P01",
            GammaName::P12 => "P12",
            GammaName::N => "N",
            GammaName::X => "X",
            GammaName::XT => "XT",
        }
    }

    /// Column of the single 1 in each row.
    pub fn columns(self) -> [usize; 3] {
        match self {
            GammaName::I => [0, 1, 2],
            GammaName::P01 => [1, 0, 2],
            GammaName::P12 => [0, 2, 1],
            GammaName::N => [2, 1, 0],
            GammaName::X => [2, 0, 1],
            GammaName::XT => [1, 2, 0],
        }
    }
}

impl fmt::Display for GammaName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GammaName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GammaName::ALL
            .into_iter()
            .find(|g| g.as_str() == s.trim())
            .ok_or_else(|| Error::UnknownName(s.trim().to_string()))
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GenPerm {
    radix: Radix,
    rows: Vec<(usize, RootScalar)>,
}

impl GenPerm {
    pub fn new(radix: Radix, rows: Vec<(usize, RootScalar)>) -> Result<Self> {
        let mut seen = vec![false; rows.len()];
        for &(c, _) in &rows {
            if c >= rows.len() || std::mem::replace(&mut seen[c], true) {
                return Err(Error::NotAPermutation);
            }
        }
        let rows = rows.into_iter().map(|(c, s)| (c, s.normalized(radix))).collect();
        Ok(GenPerm { radix, rows })
    }

    /// Straight permutation: row r picks column `columns[r]` with scalar 1.
    pub fn straight(radix: Radix, columns: &[usize]) -> Result<Self> {
        Self::new(radix, columns.iter().map(|&c| (c, RootScalar::ONE)).collect())
    }

    pub fn identity(radix: Radix, size: usize) -> Self {
        GenPerm { radix, rows: (0..size).map(|c| (c, RootScalar::ONE)).collect() }
    }

    pub fn diagonal(radix: Radix, scalars: &[RootScalar]) -> Self {
        GenPerm { radix, rows: scalars.iter().enumerate().map(|(c, s)| (c, s.normalized(radix))).collect() }
    }

    pub fn radix(&self) -> Radix {
        self.radix
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[(usize, RootScalar)] {
        &self.rows
    }

    /// All scalars are +ξ⁰.
    pub fn is_straight(&self) -> bool {
        self.rows.iter().all(|&(_, s)| s == RootScalar::ONE)
    }

    pub fn kron(&self, other: &GenPerm) -> Result<GenPerm> {
        self.same_radix(other)?;
        let nb = other.size();
        let mut rows = Vec::with_capacity(self.size() * nb);
        for &(c, s) in &self.rows {
            for &(d, t) in &other.rows {
                rows.push((c * nb + d, s.mul(t, self.radix)));
            }
        }
        Ok(GenPerm { radix: self.radix, rows })
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &GenPerm) -> Result<GenPerm> {
        self.same_radix(other)?;
        if self.size() != other.size() {
            return Err(Error::Shape(format!("compose {}×{} with {}×{}", self.size(), self.size(), other.size(), other.size())));
        }
        let rows = self
            .rows
            .iter()
            .map(|&(c, s)| {
                let (d, t) = other.rows[c];
                (d, s.mul(t, self.radix))
            })
            .collect();
        Ok(GenPerm { radix: self.radix, rows })
    }

    pub fn scale(&self, s: RootScalar) -> GenPerm {
        GenPerm { radix: self.radix, rows: self.rows.iter().map(|&(c, t)| (c, t.mul(s, self.radix))).collect() }
    }

    pub fn apply(&self, v: &[CycInt]) -> Result<Vec<CycInt>> {
        if v.len() != self.size() {
            return Err(Error::Shape(format!("vector length {} vs permutation size {}", v.len(), self.size())));
        }
        if let Some(e) = v.iter().find(|e| e.radix() != self.radix) {
            return Err(Error::RadixMismatch { left: self.radix.get(), right: e.radix().get() });
        }
        Ok(self.rows.iter().map(|&(c, s)| v[c].mul_scalar(s)).collect())
    }

    pub fn apply_spectrum(&self, s: &Spectrum) -> Result<Spectrum> {
        Spectrum::new(s.radix(), self.apply(s.entries())?)
    }

    pub fn to_dense(&self) -> DenseCycMatrix {
        let zero = CycInt::zero(self.radix);
        DenseCycMatrix::from_fn(self.radix, self.size(), |i, j| {
            let (c, s) = self.rows[i];
            if c == j {
                s.to_cyc(self.radix)
            } else {
                zero
            }
        })
    }

    pub fn from_dense(m: &DenseCycMatrix) -> Option<GenPerm> {
        m.sparse_rows().map(|rows| GenPerm { radix: m.radix(), rows })
    }

    fn same_radix(&self, other: &GenPerm) -> Result<()> {
        if self.radix != other.radix {
            return Err(Error::RadixMismatch { left: self.radix.get(), right: other.radix.get() });
        }
        Ok(())
    }
}

impl fmt::Debug for GenPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .enumerate()
            .map(|(r, &(c, s))| format!("{r}→{c} ({})", s.to_cyc(self.radix).pretty()))
            .collect();
        write!(f, "GenPerm[p={}; {}]", self.radix, rows.join(", "))
    }
}

/// One element of Γ as a 3×3 straight permutation over Z[ξ₃].
pub fn gamma(name: GammaName) -> GenPerm {
    GenPerm { radix: Radix::THREE, rows: name.columns().iter().map(|&c| (c, RootScalar::ONE)).collect() }
}

/// Z(1) = diag(1, ξ, …, ξ^(p−1)); the conjugate has ξ^(−k) instead.
pub fn pauli_z(radix: Radix, conjugated: bool) -> GenPerm {
    let p = radix.get();
    let scalars: Vec<RootScalar> = (0..p)
        .map(|k| RootScalar::xi_pow(if conjugated { (p - k) % p } else { k }))
        .collect();
    GenPerm::diagonal(radix, &scalars)
}

pub fn block_diag(blocks: &[GenPerm]) -> Result<GenPerm> {
    let radix = blocks.first().ok_or_else(|| Error::Shape("blockdiag needs at least one block".into()))?.radix;
    let mut rows = Vec::new();
    for b in blocks {
        if b.radix != radix {
            return Err(Error::RadixMismatch { left: radix.get(), right: b.radix.get() });
        }
        let offset = rows.len();
        rows.extend(b.rows.iter().map(|&(c, s)| (c + offset, s)));
    }
    Ok(GenPerm { radix, rows })
}

/// P = p^(−n/2)·diag(S); fails with `NotFlat` when a quotient is not ±ξ^k.
pub fn diag_from_flat_spectrum(s: &Spectrum) -> Result<GenPerm> {
    if s.vars() % 2 == 1 {
        return Err(Error::OddVariableCount(s.vars()));
    }
    let radix = s.radix();
    let scale = (radix.get() as i64).pow((s.vars() / 2) as u32);
    let scalars = s
        .entries()
        .iter()
        .enumerate()
        .map(|(index, e)| {
            e.div_exact_int(scale)
                .and_then(|q| q.as_root_scalar())
                .map_err(|_| Error::NotFlat { index, value: e.to_string() })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GenPerm::diagonal(radix, &scalars))
}

/// Either a generalized permutation or a general (possibly fractional) matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PermOperator {
    Sparse(GenPerm),
    Dense(ScaledCycMatrix),
}

impl PermOperator {
    /// Wraps a matrix, demoting it to the sparse form when possible.
    pub fn from_matrix(m: ScaledCycMatrix) -> Self {
        match m.as_integral().and_then(GenPerm::from_dense) {
            Some(g) => PermOperator::Sparse(g),
            None => PermOperator::Dense(m),
        }
    }

    pub fn from_dense(m: DenseCycMatrix) -> Self {
        Self::from_matrix(ScaledCycMatrix::integral(m))
    }

    pub fn radix(&self) -> Radix {
        match self {
            PermOperator::Sparse(g) => g.radix(),
            PermOperator::Dense(m) => m.radix(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            PermOperator::Sparse(g) => g.size(),
            PermOperator::Dense(m) => m.size(),
        }
    }

    pub fn as_genperm(&self) -> Option<&GenPerm> {
        match self {
            PermOperator::Sparse(g) => Some(g),
            PermOperator::Dense(_) => None,
        }
    }

    pub fn to_matrix(&self) -> ScaledCycMatrix {
        match self {
            PermOperator::Sparse(g) => ScaledCycMatrix::integral(g.to_dense()),
            PermOperator::Dense(m) => m.clone(),
        }
    }

    pub fn is_generalized_permutation(&self) -> bool {
        match self {
            PermOperator::Sparse(_) => true,
            PermOperator::Dense(m) => m.is_generalized_permutation(),
        }
    }

    /// Exact product; fails with `NotDivisible` when a fractional operator
    /// maps the vector outside Z[ξ].
    pub fn apply(&self, v: &[CycInt]) -> Result<Vec<CycInt>> {
        match self {
            PermOperator::Sparse(g) => g.apply(v),
            PermOperator::Dense(m) => m.mul_vec(v),
        }
    }

    pub fn kron(&self, other: &PermOperator) -> Result<PermOperator> {
        match (self, other) {
            (PermOperator::Sparse(a), PermOperator::Sparse(b)) => Ok(PermOperator::Sparse(a.kron(b)?)),
            _ => {
                Limits::default().check_dense(self.size() * other.size())?;
                Ok(PermOperator::from_matrix(self.to_matrix().kron(&other.to_matrix())?))
            }
        }
    }

    pub fn compose(&self, other: &PermOperator) -> Result<PermOperator> {
        match (self, other) {
            (PermOperator::Sparse(a), PermOperator::Sparse(b)) => Ok(PermOperator::Sparse(a.compose(b)?)),
            _ => Ok(PermOperator::from_matrix(self.to_matrix().matmul(&other.to_matrix())?)),
        }
    }

    pub fn scale(&self, s: RootScalar) -> PermOperator {
        match self {
            PermOperator::Sparse(g) => PermOperator::Sparse(g.scale(s)),
            PermOperator::Dense(m) => PermOperator::Dense(m.scale_root(s)),
        }
    }

    /// Same matrix regardless of representation.
    pub fn same_matrix(&self, other: &PermOperator) -> bool {
        match (self, other) {
            (PermOperator::Sparse(a), PermOperator::Sparse(b)) => a == b,
            _ => self.to_matrix() == other.to_matrix(),
        }
    }

    pub fn render_pretty(&self) -> String {
        self.to_matrix().render_pretty()
    }
}

impl From<GenPerm> for PermOperator {
    fn from(g: GenPerm) -> Self {
        PermOperator::Sparse(g)
    }
}

/// W(n) = p⁻ⁿ·C(n)·P·C*(n), computed one column at a time.
pub fn conjugate_by_c(op: &PermOperator) -> Result<PermOperator> {
    conjugate_by_c_with(op, &Limits::default())
}

pub fn conjugate_by_c_with(op: &PermOperator, limits: &Limits) -> Result<PermOperator> {
    let radix = op.radix();
    let size = op.size();
    let n = infer_vars(radix, size)?;
    limits.check_dense(size)?;
    let (p, pu) = (radix.get(), radix.as_usize());
    let mut columns = Vec::with_capacity(size);
    for j in 0..size {
        // column j of C*(n): ξ^(−⟨i·j⟩)
        let cstar: Vec<CycInt> = (0..size)
            .map(|i| CycInt::root(radix, (p - vctransform::digit_dot(i, j, pu, n)) % p))
            .collect();
        let moved = op.apply(&cstar)?;
        let back = vctransform::apply_c(radix, &moved)?;
        columns.push(back);
    }
    let numerator = DenseCycMatrix::from_fn(radix, size, |i, j| columns[j][i]);
    Ok(PermOperator::from_matrix(ScaledCycMatrix::new(numerator, size as i64)?))
}

/// Precomputed image of each element of Γ under conjugation by C(1).
pub fn conjugate_table(name: GammaName) -> GenPerm {
    let r = Radix::THREE;
    let z = pauli_z(r, false);
    let zc = pauli_z(r, true);
    let p12 = gamma(GammaName::P12);
    match name {
        GammaName::I => gamma(GammaName::I),
        GammaName::N => zc.compose(&p12).expect("3×3"),
        GammaName::P12 => p12,
        GammaName::P01 => z.compose(&p12).expect("3×3"),
        GammaName::X => z,
        GammaName::XT => zc,
    }
}

/// W for α₁⊗…⊗α_k with every αᵢ ∈ Γ, as the Kronecker product of table entries.
pub fn conjugate_kron(factors: &[GammaName]) -> GenPerm {
    factors
        .iter()
        .fold(GenPerm::identity(Radix::THREE, 1), |acc, &g| acc.kron(&conjugate_table(g)).expect("same radix"))
}

/// W(2) for blockdiag(B₀, B₁, B₂) through the additive decomposition
/// Σᵢ diag(eᵢ) ⊗ Bᵢ: each term conjugates factor-wise and the sum is formed
/// at 9·W before the common factor is reduced.
pub fn conjugate_blockdiag(blocks: &[GenPerm]) -> Result<ScaledCycMatrix> {
    let r = Radix::THREE;
    if blocks.len() != 3 || blocks.iter().any(|b| b.size() != 3 || b.radix() != r) {
        return Err(Error::Shape("blockdiag conjugation needs three 3×3 blocks at p = 3".into()));
    }
    let c = vctransform::build_c(r, 1)?;
    let cs = c.conj();
    let mut sum = DenseCycMatrix::zeros(r, 9);
    for (i, block) in blocks.iter().enumerate() {
        let mut e = [CycInt::zero(r); 3];
        e[i] = CycInt::one(r);
        let selector = c.matmul(&DenseCycMatrix::diag(r, &e))?.matmul(&cs)?;
        let inner = c.matmul(&block.to_dense())?.matmul(&cs)?;
        sum = sum.add(&selector.kron(&inner))?;
    }
    ScaledCycMatrix::new(sum, 9)
}

/// 3⁻¹·C(1)·diag(eᵢ)·C*(1), scaled by 3 so it stays integral.
pub fn selector_component(i: usize) -> Result<DenseCycMatrix> {
    let r = Radix::THREE;
    let c = vctransform::build_c(r, 1)?;
    let mut e = [CycInt::zero(r); 3];
    *e.get_mut(i).ok_or_else(|| Error::Shape(format!("selector index {i} out of range")))? = CycInt::one(r);
    c.matmul(&DenseCycMatrix::diag(r, &e))?.matmul(&c.conj())
}

pub fn is_generalized_permutation(m: &DenseCycMatrix) -> bool {
    m.is_generalized_permutation()
}

/// Which conjugation route to use for an expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Dense,
    Table,
}

impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(Route::Dense),
            "table" => Ok(Route::Table),
            other => Err(Error::Parse(format!("unknown route `{other}`; expected dense or table"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Atom {
    Gamma(GammaName),
    Z,
    Zc,
}

/// Permutation expressions: atoms `I P01 P12 N X XT Z Zc`, rotation
/// `s*expr`, `kron(a,b)`, `blockdiag(a,…)`, `compose(a,b)`, `diag(s,…)`,
/// with scalars written `1`, `-1`, `w`, `w^k`, `-w^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PermExpr {
    Atom(Atom),
    Scaled(RootScalar, Box<PermExpr>),
    Kron(Box<PermExpr>, Box<PermExpr>),
    BlockDiag(Vec<PermExpr>),
    Compose(Box<PermExpr>, Box<PermExpr>),
    Diag(Vec<RootScalar>),
}

impl PermExpr {
    pub fn parse(text: &str) -> Result<PermExpr> {
        let mut p = ExprParser { chars: text.chars().collect(), pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.chars.len() {
            return Err(p.error("trailing input"));
        }
        Ok(e)
    }

    pub fn kron_of(a: GammaName, b: GammaName) -> PermExpr {
        PermExpr::Kron(Box::new(PermExpr::Atom(Atom::Gamma(a))), Box::new(PermExpr::Atom(Atom::Gamma(b))))
    }

    pub fn eval(&self, radix: Radix) -> Result<PermOperator> {
        Ok(match self {
            PermExpr::Atom(Atom::Gamma(g)) => {
                if radix != Radix::THREE {
                    return Err(Error::Shape(format!("{g} is a 3×3 permutation; cannot use it at p = {radix}")));
                }
                gamma(*g).into()
            }
            PermExpr::Atom(Atom::Z) => pauli_z(radix, false).into(),
            PermExpr::Atom(Atom::Zc) => pauli_z(radix, true).into(),
            PermExpr::Scaled(s, e) => e.eval(radix)?.scale(*s),
            PermExpr::Kron(a, b) => a.eval(radix)?.kron(&b.eval(radix)?)?,
            PermExpr::Compose(a, b) => a.eval(radix)?.compose(&b.eval(radix)?)?,
            PermExpr::Diag(s) => GenPerm::diagonal(radix, s).into(),
            PermExpr::BlockDiag(blocks) => {
                let ops = blocks.iter().map(|b| b.eval(radix)).collect::<Result<Vec<_>>>()?;
                if let Some(sparse) = ops.iter().map(|o| o.as_genperm().cloned()).collect::<Option<Vec<_>>>() {
                    block_diag(&sparse)?.into()
                } else {
                    let size: usize = ops.iter().map(|o| o.size()).sum();
                    Limits::default().check_dense(size)?;
                    let dense = ops
                        .iter()
                        .map(|o| o.to_matrix().as_integral().cloned())
                        .collect::<Option<Vec<DenseCycMatrix>>>()
                        .ok_or_else(|| Error::Shape("blockdiag blocks must be integral".into()))?;
                    // (block, local index) for every global index
                    let owner: Vec<(usize, usize)> =
                        dense.iter().enumerate().flat_map(|(b, d)| (0..d.size()).map(move |i| (b, i))).collect();
                    PermOperator::from_matrix(ScaledCycMatrix::integral(DenseCycMatrix::from_fn(radix, size, |i, j| {
                        let (bi, li) = owner[i];
                        let (bj, lj) = owner[j];
                        if bi == bj {
                            dense[bi].get(li, lj)
                        } else {
                            CycInt::zero(radix)
                        }
                    })))
                }
            }
        })
    }

    /// W for this expression, by the requested route. The table route
    /// factors through Kronecker products, compositions and rotations and
    /// falls back to the dense route at leaves outside Γ.
    pub fn conjugate(&self, radix: Radix, route: Route) -> Result<PermOperator> {
        match route {
            Route::Dense => conjugate_by_c(&self.eval(radix)?),
            Route::Table => self.conjugate_factored(radix),
        }
    }

    fn conjugate_factored(&self, radix: Radix) -> Result<PermOperator> {
        match self {
            PermExpr::Atom(Atom::Gamma(g)) if radix == Radix::THREE => Ok(conjugate_table(*g).into()),
            PermExpr::Scaled(s, e) => Ok(e.conjugate_factored(radix)?.scale(*s)),
            PermExpr::Kron(a, b) => a.conjugate_factored(radix)?.kron(&b.conjugate_factored(radix)?),
            PermExpr::Compose(a, b) => a.conjugate_factored(radix)?.compose(&b.conjugate_factored(radix)?),
            _ => conjugate_by_c(&self.eval(radix)?),
        }
    }

    /// True when every leaf is in Γ and only Kronecker products, compositions
    /// and rotations combine them.
    pub fn is_factored(&self) -> bool {
        match self {
            PermExpr::Atom(Atom::Gamma(_)) => true,
            PermExpr::Scaled(_, e) => e.is_factored(),
            PermExpr::Kron(a, b) | PermExpr::Compose(a, b) => a.is_factored() && b.is_factored(),
            _ => false,
        }
    }
}

pub fn render_scalar(s: RootScalar) -> String {
    let sign = if s.negative { "-" } else { "" };
    match s.exponent {
        0 => format!("{sign}1"),
        1 => format!("{sign}w"),
        k => format!("{sign}w^{k}"),
    }
}

impl fmt::Display for PermExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PermExpr::Atom(Atom::Gamma(g)) => write!(f, "{g}"),
            PermExpr::Atom(Atom::Z) => f.write_str("Z"),
            PermExpr::Atom(Atom::Zc) => f.write_str("Zc"),
            PermExpr::Scaled(s, e) => write!(f, "{}*{e}", render_scalar(*s)),
            PermExpr::Kron(a, b) => write!(f, "kron({a},{b})"),
            PermExpr::Compose(a, b) => write!(f, "compose({a},{b})"),
            PermExpr::BlockDiag(bs) => {
                let parts: Vec<String> = bs.iter().map(|b| b.to_string()).collect();
                write!(f, "blockdiag({})", parts.join(","))
            }
            PermExpr::Diag(ss) => {
                let parts: Vec<String> = ss.iter().map(|s| render_scalar(*s)).collect();
                write!(f, "diag({})", parts.join(","))
            }
        }
    }
}

impl FromStr for PermExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PermExpr::parse(s)
    }
}

struct ExprParser {
    chars: Vec<char>,
    pos: usize,
}

impl ExprParser {
    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at position {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_') {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn number(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits.parse().map_err(|_| self.error("expected a number"))
    }

    fn starts_scalar(&mut self) -> bool {
        match self.peek() {
            Some('-') | Some('1') => true,
            Some('w') => !self.chars.get(self.pos + 1).is_some_and(|c| c.is_ascii_alphanumeric()),
            _ => false,
        }
    }

    fn scalar(&mut self) -> Result<RootScalar> {
        let negative = if self.peek() == Some('-') {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.peek() {
            Some('1') => {
                if self.number()? != 1 {
                    return Err(self.error("the only integer scalar is 1"));
                }
                Ok(RootScalar { negative, exponent: 0 })
            }
            Some('w') => {
                self.pos += 1;
                let exponent = if self.peek() == Some('^') {
                    self.pos += 1;
                    self.number()?
                } else {
                    1
                };
                Ok(RootScalar { negative, exponent })
            }
            _ => Err(self.error("expected a scalar (1, w, w^k)")),
        }
    }

    fn args(&mut self) -> Result<Vec<PermExpr>> {
        self.expect('(')?;
        let mut out = vec![self.expr()?];
        while self.peek() == Some(',') {
            self.pos += 1;
            out.push(self.expr()?);
        }
        self.expect(')')?;
        Ok(out)
    }

    fn expr(&mut self) -> Result<PermExpr> {
        if self.starts_scalar() {
            let s = self.scalar()?;
            self.expect('*')?;
            return Ok(PermExpr::Scaled(s, Box::new(self.expr()?)));
        }
        let start = self.pos;
        let name = self.ident();
        match name.as_str() {
            "" => Err(self.error("expected an expression")),
            "Z" => Ok(PermExpr::Atom(Atom::Z)),
            "Zc" => Ok(PermExpr::Atom(Atom::Zc)),
            "kron" | "compose" => {
                let mut args = self.args()?;
                if args.len() != 2 {
                    return Err(Error::Parse(format!("{name} takes two arguments, got {}", args.len())));
                }
                let b = Box::new(args.pop().unwrap());
                let a = Box::new(args.pop().unwrap());
                Ok(if name == "kron" { PermExpr::Kron(a, b) } else { PermExpr::Compose(a, b) })
            }
            "blockdiag" => Ok(PermExpr::BlockDiag(self.args()?)),
            "diag" => {
                self.expect('(')?;
                let mut out = vec![self.scalar()?];
                while self.peek() == Some(',') {
                    self.pos += 1;
                    out.push(self.scalar()?);
                }
                self.expect(')')?;
                Ok(PermExpr::Diag(out))
            }
            other => match other.parse::<GammaName>() {
                Ok(g) => Ok(PermExpr::Atom(Atom::Gamma(g))),
                Err(_) => {
                    self.pos = start;
                    Err(Error::UnknownName(other.to_string()))
                }
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mvfunction::MvFunction;

    fn xi(k: u32) -> CycInt {
        CycInt::root(Radix::THREE, k)
    }

    fn rs(k: u32) -> RootScalar {
        RootScalar::xi_pow(k)
    }

    fn spectrum_of(digits: &str) -> Spectrum {
        vctransform::forward(Radix::THREE, MvFunction::ternary(digits).unwrap().sign_of().entries()).unwrap()
    }

    fn exps(digits: &str) -> Vec<CycInt> {
        digits.chars().map(|c| xi(c.to_digit(10).unwrap()).scale(3)).collect()
    }

    #[test]
    fn gamma_rows() {
        assert_eq!(gamma(GammaName::P12).rows().iter().map(|r| r.0).collect::<Vec<_>>(), [0, 2, 1]);
        assert_eq!(gamma(GammaName::X).rows().iter().map(|r| r.0).collect::<Vec<_>>(), [2, 0, 1]);
        assert_eq!(gamma(GammaName::N).rows().iter().map(|r| r.0).collect::<Vec<_>>(), [2, 1, 0]);
        assert!("Q".parse::<GammaName>().is_err());
        let x = DenseCycMatrix::from_exponents(
            Radix::THREE,
            &[&[None, None, Some(0)], &[Some(0), None, None], &[None, Some(0), None]],
        )
        .unwrap();
        assert_eq!(gamma(GammaName::X).to_dense(), x);
    }

    #[test]
    fn pauli() {
        let r = Radix::THREE;
        let ones = vec![CycInt::one(r); 3];
        assert_eq!(pauli_z(r, false).apply(&ones).unwrap(), vec![xi(0), xi(1), xi(2)]);
        assert_eq!(pauli_z(r, true).apply(&ones).unwrap(), vec![xi(0), xi(2), xi(1)]);
    }

    #[test]
    fn construction_checks_permutation() {
        assert_eq!(GenPerm::straight(Radix::THREE, &[0, 0, 1]), Err(Error::NotAPermutation));
        assert_eq!(GenPerm::straight(Radix::THREE, &[0, 3, 1]), Err(Error::NotAPermutation));
    }

    #[test]
    fn kron_and_compose() {
        let p12 = gamma(GammaName::P12);
        let i9 = gamma(GammaName::I).kron(&gamma(GammaName::I)).unwrap();
        assert_eq!(i9, GenPerm::identity(Radix::THREE, 9));
        let p12_2 = p12.kron(&p12).unwrap();
        assert_eq!(p12_2.to_dense(), p12.to_dense().kron(&p12.to_dense()));

        let zc_p12 = pauli_z(Radix::THREE, true).compose(&p12).unwrap();
        assert_eq!(zc_p12.rows(), &[(0, rs(0)), (2, rs(2)), (1, rs(1))]);
        assert_eq!(p12.scale(RootScalar::ONE), p12);
        assert!(p12.compose(&p12_2).is_err());
    }

    #[test]
    fn rotation_by_scale() {
        let s = spectrum_of("000012021");
        let rotated = GenPerm::identity(Radix::THREE, 9).scale(rs(1)).apply(s.entries()).unwrap();
        assert_eq!(rotated, s.rotate(1).into_entries());
    }

    #[test]
    fn block_diagonal() {
        let r = Radix::THREE;
        let bd = block_diag(&[
            pauli_z(r, false).scale(rs(2)),
            gamma(GammaName::I),
            pauli_z(r, true).scale(rs(1)),
        ])
        .unwrap();
        let expected = GenPerm::diagonal(r, &[2, 0, 1, 0, 0, 0, 1, 0, 2].map(rs));
        assert_eq!(bd, expected);
        let i3 = gamma(GammaName::I);
        assert_eq!(block_diag(&[i3.clone(), i3.clone(), i3.clone()]).unwrap(), GenPerm::identity(r, 9));
        let iix = block_diag(&[i3.clone(), i3, gamma(GammaName::X)]).unwrap();
        assert_eq!(iix.apply(&exps("000021012")).unwrap(), exps("000021201"));
    }

    #[test]
    fn diag_from_spectrum() {
        let d = diag_from_flat_spectrum(&spectrum_of("000012021")).unwrap();
        assert_eq!(d, GenPerm::diagonal(Radix::THREE, &[0, 0, 0, 0, 2, 1, 0, 1, 2].map(rs)));
        let mut dc = vec![CycInt::zero(Radix::THREE); 9];
        dc[0] = CycInt::from_int(Radix::THREE, 9);
        assert!(matches!(
            diag_from_flat_spectrum(&Spectrum::new(Radix::THREE, dc).unwrap()),
            Err(Error::NotFlat { index: 0, .. })
        ));
    }

    #[test]
    fn apply_examples() {
        let n2 = gamma(GammaName::N).kron(&gamma(GammaName::N)).unwrap();
        assert_eq!(n2.apply(spectrum_of("000012021").entries()).unwrap(), exps("210120000"));

        // W″(2) = ξ·P12 ⊗ Z*·Xᵀ acting on the value domain
        let w = gamma(GammaName::P12)
            .scale(rs(1))
            .kron(&pauli_z(Radix::THREE, true).compose(&gamma(GammaName::XT)).unwrap())
            .unwrap();
        let f = MvFunction::ternary("000012021").unwrap().sign_of();
        let g: Vec<CycInt> = [1, 0, 2, 0, 1, 2, 2, 2, 2].iter().map(|&k| xi(k)).collect();
        assert_eq!(w.apply(f.entries()).unwrap(), g);
    }

    #[test]
    fn conjugation_examples() {
        let w = conjugate_by_c(&gamma(GammaName::N).into()).unwrap();
        let expect = DenseCycMatrix::from_exponents(
            Radix::THREE,
            &[&[Some(0), None, None], &[None, None, Some(2)], &[None, Some(1), None]],
        )
        .unwrap();
        assert_eq!(w.to_matrix().as_integral(), Some(&expect));
        assert!(matches!(w, PermOperator::Sparse(_)));
        assert_eq!(conjugate_by_c(&gamma(GammaName::X).into()).unwrap(), pauli_z(Radix::THREE, false).into());
    }

    #[test]
    fn table_matches_dense() {
        for g in GammaName::ALL {
            assert_eq!(conjugate_by_c(&gamma(g).into()).unwrap(), PermOperator::Sparse(conjugate_table(g)), "{g}");
        }
    }

    #[test]
    fn conjugation_is_multiplicative() {
        for a in GammaName::ALL {
            for b in GammaName::ALL {
                let lhs = conjugate_by_c(&gamma(a).compose(&gamma(b)).unwrap().into()).unwrap();
                let rhs = conjugate_table(a).compose(&conjugate_table(b)).unwrap();
                assert_eq!(lhs, rhs.into());
            }
        }
    }

    #[test]
    fn dense_conjugate_of_case3_diagonal() {
        let d = GenPerm::diagonal(Radix::THREE, &[2, 0, 1, 0, 0, 0, 1, 0, 2].map(rs));
        let w = conjugate_by_c(&d.into()).unwrap();
        let PermOperator::Dense(m) = w else { panic!("expected a dense conjugate") };
        // W = (1/3)·display
        let display: [[u32; 9]; 9] = [
            [0, 2, 1, 2, 2, 2, 1, 2, 0],
            [1, 0, 2, 2, 2, 2, 0, 1, 2],
            [2, 1, 0, 2, 2, 2, 2, 0, 1],
            [1, 2, 0, 0, 2, 1, 2, 2, 2],
            [0, 1, 2, 1, 0, 2, 2, 2, 2],
            [2, 0, 1, 2, 1, 0, 2, 2, 2],
            [2, 2, 2, 1, 2, 0, 0, 2, 1],
            [2, 2, 2, 0, 1, 2, 1, 0, 2],
            [2, 2, 2, 2, 0, 1, 2, 1, 0],
        ];
        let expect = DenseCycMatrix::from_fn(Radix::THREE, 9, |i, j| xi(display[i][j]));
        assert_eq!(m.denominator(), 3);
        assert_eq!(m.numerator(), &expect);
        assert!(!m.is_generalized_permutation());
        assert!(!is_generalized_permutation(&expect));
    }

    #[test]
    fn blockdiag_decomposition() {
        let r = Radix::THREE;
        let blocks = [pauli_z(r, false).scale(rs(2)), gamma(GammaName::I), pauli_z(r, true).scale(rs(1))];
        let additive = conjugate_blockdiag(&blocks).unwrap();
        let dense = conjugate_by_c(&block_diag(&blocks).unwrap().into()).unwrap().to_matrix();
        assert_eq!(additive, dense);
        let i3 = gamma(GammaName::I);
        assert_eq!(
            conjugate_blockdiag(&[i3.clone(), i3.clone(), i3.clone()]).unwrap(),
            ScaledCycMatrix::integral(DenseCycMatrix::identity(r, 9))
        );
        let sel = selector_component(1).unwrap();
        let expect = DenseCycMatrix::from_exponents(
            r,
            &[&[Some(0), Some(2), Some(1)], &[Some(1), Some(0), Some(2)], &[Some(2), Some(1), Some(0)]],
        )
        .unwrap();
        assert_eq!(sel, expect);
        // non-diagonal blocks too
        for a in GammaName::ALL {
            let blocks = [gamma(a), gamma(GammaName::X), gamma(GammaName::P01).scale(rs(1))];
            let dense = conjugate_by_c(&block_diag(&blocks).unwrap().into()).unwrap().to_matrix();
            assert_eq!(conjugate_blockdiag(&blocks).unwrap(), dense);
        }
        assert!(conjugate_blockdiag(&blocks[..2]).is_err());
    }

    #[test]
    fn p12_conjugates_c() {
        for n in 1..=2 {
            let c = vctransform::build_c(Radix::THREE, n).unwrap();
            let mut p = GenPerm::identity(Radix::THREE, 1);
            for _ in 0..n {
                p = p.kron(&gamma(GammaName::P12)).unwrap();
            }
            assert_eq!(p.to_dense().matmul(&c).unwrap(), c.conj());
        }
    }

    #[test]
    fn expression_round_trip() {
        for text in [
            "kron(N,N)",
            "diag(w^2,1,w,1,1,1,w,1,w^2)",
            "kron(w^1*P12, compose(Zc,XT))",
            "blockdiag(w^2*Z, I, w*Zc)",
            "-w^2*kron(X,-1*XT)",
        ] {
            let e = PermExpr::parse(text).unwrap();
            let rendered = e.to_string();
            assert_eq!(PermExpr::parse(&rendered).unwrap(), e, "{text} → {rendered}");
            assert_eq!(PermExpr::parse(&rendered).unwrap().to_string(), rendered);
        }
        for bad in ["kron(N)", "Q", "diag(2)", "kron(N,N", "N N", "", "w^2"] {
            assert!(PermExpr::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn expression_routes_agree() {
        for text in [
            "kron(N,N)",
            "kron(w*P12,XT)",
            "compose(kron(X,P01),kron(N,w^2*XT))",
            "diag(w^2,1,w,1,1,1,w,1,w^2)",
            "blockdiag(I,I,X)",
            "kron(Z,P01)",
        ] {
            let e = PermExpr::parse(text).unwrap();
            let dense = e.conjugate(Radix::THREE, Route::Dense).unwrap();
            let table = e.conjugate(Radix::THREE, Route::Table).unwrap();
            assert!(dense.same_matrix(&table), "{text}");
        }
        assert!(PermExpr::parse("kron(N,X)").unwrap().is_factored());
        assert!(!PermExpr::parse("blockdiag(I,I,X)").unwrap().is_factored());
    }

    #[test]
    fn z_atoms_at_other_radices() {
        let e = PermExpr::parse("kron(Z,Zc)").unwrap();
        let op = e.eval(Radix::FIVE).unwrap();
        assert_eq!(op.size(), 25);
        assert!(PermExpr::parse("N").unwrap().eval(Radix::FOUR).is_err());
        let w = e.conjugate(Radix::FIVE, Route::Table).unwrap();
        assert!(w.is_generalized_permutation());
    }
}
