//! Small dense matrices over Z[ξ_p], used where a generalized permutation
//! has no sparse form (block-diagonal conjugates) and as the dense oracle
//! for the sparse routes.

use std::fmt;

use crate::cyclotomic::{CycInt, Radix, RootScalar};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct DenseCycMatrix {
    radix: Radix,
    size: usize,
    data: Vec<CycInt>,
}

impl DenseCycMatrix {
    pub fn from_fn(radix: Radix, size: usize, mut f: impl FnMut(usize, usize) -> CycInt) -> Self {
        let mut data = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                data.push(f(i, j));
            }
        }
        DenseCycMatrix { radix, size, data }
    }

    pub fn from_rows(radix: Radix, rows: Vec<Vec<CycInt>>) -> Result<Self> {
        let size = rows.len();
        if rows.iter().any(|r| r.len() != size) {
            return Err(Error::Shape("matrix rows must form a square".into()));
        }
        Ok(DenseCycMatrix { radix, size, data: rows.into_iter().flatten().collect() })
    }

    /// Builds a matrix from exponent rows: `None` is a zero entry, `Some(k)` is ξ^k.
    pub fn from_exponents(radix: Radix, rows: &[&[Option<u32>]]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|e| e.map_or(CycInt::zero(radix), |k| CycInt::root(radix, k)))
                    .collect()
            })
            .collect();
        Self::from_rows(radix, rows)
    }

    pub fn identity(radix: Radix, size: usize) -> Self {
        Self::from_fn(radix, size, |i, j| if i == j { CycInt::one(radix) } else { CycInt::zero(radix) })
    }

    pub fn zeros(radix: Radix, size: usize) -> Self {
        Self::from_fn(radix, size, |_, _| CycInt::zero(radix))
    }

    pub fn diag(radix: Radix, entries: &[CycInt]) -> Self {
        Self::from_fn(radix, entries.len(), |i, j| if i == j { entries[i] } else { CycInt::zero(radix) })
    }

    pub fn radix(&self) -> Radix {
        self.radix
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> CycInt {
        self.data[i * self.size + j]
    }

    pub fn row(&self, i: usize) -> &[CycInt] {
        &self.data[i * self.size..(i + 1) * self.size]
    }

    pub fn column(&self, j: usize) -> Vec<CycInt> {
        (0..self.size).map(|i| self.get(i, j)).collect()
    }

    pub fn matmul(&self, other: &DenseCycMatrix) -> Result<DenseCycMatrix> {
        if self.size != other.size {
            return Err(Error::Shape(format!("{} vs {}", self.size, other.size)));
        }
        let n = self.size;
        let mut out = DenseCycMatrix::zeros(self.radix, n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * n + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[CycInt]) -> Result<Vec<CycInt>> {
        if v.len() != self.size {
            return Err(Error::Shape(format!("vector length {} vs matrix size {}", v.len(), self.size)));
        }
        Ok((0..self.size)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(CycInt::zero(self.radix), |acc, (a, b)| acc + *a * *b)
            })
            .collect())
    }

    pub fn kron(&self, other: &DenseCycMatrix) -> DenseCycMatrix {
        let nb = other.size;
        DenseCycMatrix::from_fn(self.radix, self.size * nb, |i, j| {
            self.get(i / nb, j / nb) * other.get(i % nb, j % nb)
        })
    }

    pub fn add(&self, other: &DenseCycMatrix) -> Result<DenseCycMatrix> {
        if self.size != other.size {
            return Err(Error::Shape(format!("{} vs {}", self.size, other.size)));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += *b;
        }
        Ok(out)
    }

    pub fn map(&self, f: impl Fn(CycInt) -> CycInt) -> DenseCycMatrix {
        DenseCycMatrix { radix: self.radix, size: self.size, data: self.data.iter().map(|&x| f(x)).collect() }
    }

    pub fn conj(&self) -> DenseCycMatrix {
        self.map(|x| x.conj())
    }

    pub fn scale_root(&self, s: RootScalar) -> DenseCycMatrix {
        self.map(|x| x.mul_scalar(s))
    }

    pub fn scale_int(&self, k: i64) -> DenseCycMatrix {
        self.map(|x| x.scale(k))
    }

    pub fn div_exact_int(&self, d: i64) -> Result<DenseCycMatrix> {
        let data = self.data.iter().map(|x| x.div_exact_int(d)).collect::<Result<Vec<_>>>()?;
        Ok(DenseCycMatrix { radix: self.radix, size: self.size, data })
    }

    /// Exactly one nonzero per row and column, each of the form ±ξ^k.
    pub fn is_generalized_permutation(&self) -> bool {
        self.sparse_rows().is_some()
    }

    /// (column, scalar) per row when the matrix is a generalized permutation.
    pub fn sparse_rows(&self) -> Option<Vec<(usize, RootScalar)>> {
        let mut seen = vec![false; self.size];
        let mut rows = Vec::with_capacity(self.size);
        for i in 0..self.size {
            let mut found = None;
            for (j, v) in self.row(i).iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                if found.is_some() {
                    return None;
                }
                found = Some((j, v.as_root_scalar().ok()?));
            }
            let (j, s) = found?;
            if seen[j] {
                return None;
            }
            seen[j] = true;
            rows.push((j, s));
        }
        Some(rows)
    }

    /// One line per row, entries rendered in the pretty ξ form.
    pub fn render_pretty(&self) -> String {
        self.render_with(CycInt::pretty)
    }

    /// One line per row, right-aligned, each entry rendered by `cell`.
    pub fn render_with(&self, cell: impl Fn(&CycInt) -> String) -> String {
        let cells: Vec<String> = self.data.iter().map(cell).collect();
        let width = cells.iter().map(|c| c.chars().count()).max().unwrap_or(1);
        cells
            .chunks(self.size)
            .map(|r| r.iter().map(|c| format!("{c:>width$}")).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// `numerator / denominator` with an integer denominator, kept reduced: no
/// prime factor of the denominator divides every entry of the numerator.
/// Conjugates p⁻ⁿ·C·P·C* of permutations without Kronecker structure need
/// this, since their entries can have a factor 1/p outside Z[ξ].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledCycMatrix {
    numerator: DenseCycMatrix,
    denominator: i64,
}

impl ScaledCycMatrix {
    pub fn new(numerator: DenseCycMatrix, denominator: i64) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::DivisionByZero);
        }
        let (mut numerator, mut denominator) =
            if denominator < 0 { (numerator.scale_int(-1), -denominator) } else { (numerator, denominator) };
        let mut rest = denominator;
        let mut f = 2;
        while rest > 1 {
            if rest % f != 0 {
                f += 1;
                continue;
            }
            rest /= f;
            if let Ok(q) = numerator.div_exact_int(f) {
                numerator = q;
                denominator /= f;
            }
        }
        Ok(ScaledCycMatrix { numerator, denominator })
    }

    pub fn integral(m: DenseCycMatrix) -> Self {
        ScaledCycMatrix { numerator: m, denominator: 1 }
    }

    pub fn numerator(&self) -> &DenseCycMatrix {
        &self.numerator
    }

    pub fn denominator(&self) -> i64 {
        self.denominator
    }

    pub fn radix(&self) -> Radix {
        self.numerator.radix
    }

    pub fn size(&self) -> usize {
        self.numerator.size
    }

    pub fn as_integral(&self) -> Option<&DenseCycMatrix> {
        (self.denominator == 1).then_some(&self.numerator)
    }

    pub fn is_generalized_permutation(&self) -> bool {
        self.as_integral().is_some_and(|m| m.is_generalized_permutation())
    }

    /// Exact product with an integral vector; `NotDivisible` if the result
    /// leaves Z[ξ].
    pub fn mul_vec(&self, v: &[CycInt]) -> Result<Vec<CycInt>> {
        self.numerator.mul_vec(v)?.into_iter().map(|x| x.div_exact_int(self.denominator)).collect()
    }

    pub fn matmul(&self, other: &ScaledCycMatrix) -> Result<ScaledCycMatrix> {
        Self::new(self.numerator.matmul(&other.numerator)?, self.denominator * other.denominator)
    }

    pub fn kron(&self, other: &ScaledCycMatrix) -> Result<ScaledCycMatrix> {
        Self::new(self.numerator.kron(&other.numerator), self.denominator * other.denominator)
    }

    pub fn scale_root(&self, s: RootScalar) -> ScaledCycMatrix {
        ScaledCycMatrix { numerator: self.numerator.scale_root(s), denominator: self.denominator }
    }

    pub fn render_pretty(&self) -> String {
        self.render_with(CycInt::pretty)
    }

    pub fn render_with(&self, cell: impl Fn(&CycInt) -> String) -> String {
        if self.denominator == 1 {
            self.numerator.render_with(cell)
        } else {
            format!("(1/{}) ·\n{}", self.denominator, self.numerator.render_with(cell))
        }
    }
}

impl fmt::Debug for DenseCycMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseCycMatrix[p={}, {}x{}]", self.radix, self.size, self.size)?;
        f.write_str(&self.render_pretty())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products_and_kron() {
        let r = Radix::THREE;
        let a = DenseCycMatrix::from_exponents(r, &[&[Some(0), None], &[None, Some(1)]]).unwrap();
        let b = DenseCycMatrix::from_exponents(r, &[&[None, Some(2)], &[Some(0), None]]).unwrap();
        let ab = a.matmul(&b).unwrap();
        assert_eq!(ab.get(0, 1), CycInt::root(r, 2));
        assert_eq!(ab.get(1, 0), CycInt::root(r, 1));
        assert!(ab.is_generalized_permutation());
        let k = a.kron(&b);
        assert_eq!(k.size(), 4);
        assert_eq!(k.get(3, 2), CycInt::root(r, 1));
        assert!(k.is_generalized_permutation());
        assert!(!DenseCycMatrix::from_fn(r, 2, |_, _| CycInt::one(r)).is_generalized_permutation());
        assert!(DenseCycMatrix::identity(r, 3).is_generalized_permutation());
        assert!(!DenseCycMatrix::zeros(r, 2).is_generalized_permutation());
        assert!(a.matmul(&DenseCycMatrix::identity(r, 3)).is_err());
    }

    #[test]
    fn scaled_reduction() {
        let r = Radix::THREE;
        let m = DenseCycMatrix::identity(r, 2).scale_int(6);
        let s = ScaledCycMatrix::new(m, 9).unwrap();
        assert_eq!(s.denominator(), 3);
        assert_eq!(s.numerator(), &DenseCycMatrix::identity(r, 2).scale_int(2));
        let whole = ScaledCycMatrix::new(DenseCycMatrix::identity(r, 2).scale_int(-9), -9).unwrap();
        assert!(whole.is_generalized_permutation());
        let v = vec![CycInt::from_int(r, 3), CycInt::from_int(r, 6)];
        assert_eq!(s.mul_vec(&v).unwrap(), vec![CycInt::from_int(r, 2), CycInt::from_int(r, 4)]);
        assert!(s.mul_vec(&[CycInt::one(r), CycInt::one(r)]).is_err());
        assert!(ScaledCycMatrix::new(DenseCycMatrix::identity(r, 1), 0).is_err());
    }
}
