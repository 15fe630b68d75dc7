//! Brute-force ground truth: every p-valued function at desk scale, tested
//! for a flat spectrum with the direct (non-butterfly) transform.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::cyclotomic::Radix;
use crate::error::{Error, Result};
use crate::mvfunction::MvFunction;
use crate::vctransform;

/// Upper bound on the number of functions an exhaustive scan may visit.
pub const MAX_FUNCTIONS: u64 = 1 << 20;

/// 9!, the number of straight 9×9 permutations.
pub const STRAIGHT_PERMUTATIONS_9: u64 = 362_880;

fn function_count(radix: Radix, n: usize) -> Result<(usize, u64)> {
    let size = radix.checked_pow(n).ok_or_else(|| Error::Shape(format!("{radix}^{n} overflows")))?;
    match (radix.get() as u64).checked_pow(size as u32) {
        Some(count) if count <= MAX_FUNCTIONS => Ok((size, count)),
        count => Err(Error::SizeLimit {
            size: count.map_or(usize::MAX, |c| usize::try_from(c).unwrap_or(usize::MAX)),
            limit: MAX_FUNCTIONS as usize,
        }),
    }
}

/// Value vector number `k` in base-p counter order (first entry most significant).
fn nth_function(radix: Radix, n: usize, size: usize, mut k: u64) -> MvFunction {
    let p = radix.get() as u64;
    let mut values = vec![0u8; size];
    for slot in values.iter_mut().rev() {
        *slot = (k % p) as u8;
        k /= p;
    }
    MvFunction::new(radix, n, values).expect("digits are below p")
}

fn is_flat_direct(f: &MvFunction) -> bool {
    vctransform::forward(f.radix(), f.sign_of().entries()).map(|s| vctransform::is_flat(&s)).unwrap_or(false)
}

/// All bent functions for (p, n), sorted. `jobs` workers scan disjoint ranges.
pub fn all_bent(radix: Radix, n: usize, jobs: usize) -> Result<Vec<MvFunction>> {
    let (size, count) = function_count(radix, n)?;
    let jobs = jobs.max(1) as u64;
    let chunk = count.div_ceil(jobs);
    let scan = |lo: u64, hi: u64| -> Vec<MvFunction> {
        (lo..hi).map(|k| nth_function(radix, n, size, k)).filter(is_flat_direct).collect()
    };
    let mut found: Vec<MvFunction> = if jobs == 1 {
        scan(0, count)
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..jobs)
                .map(|j| {
                    let lo = (j * chunk).min(count);
                    let hi = ((j + 1) * chunk).min(count);
                    s.spawn(move || scan(lo, hi))
                })
                .collect();
            handles.into_iter().flat_map(|h| h.join().expect("oracle worker panicked")).collect()
        })
    };
    found.sort();
    Ok(found)
}

/// The 1-place ternary functions with a flat spectrum.
pub fn all_bent_1place() -> Vec<MvFunction> {
    all_bent(Radix::THREE, 1, 1).expect("27 functions are within the limit")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertifyReport {
    pub generated: usize,
    pub reference: usize,
    pub only_generated: Vec<String>,
    pub only_reference: Vec<String>,
}

impl CertifyReport {
    pub fn passed(&self) -> bool {
        self.only_generated.is_empty() && self.only_reference.is_empty()
    }
}

/// Symmetric difference between a generated set and a reference set.
pub fn certify<'a>(
    generated: impl IntoIterator<Item = &'a MvFunction>,
    reference: impl IntoIterator<Item = &'a MvFunction>,
) -> CertifyReport {
    let g: BTreeSet<&MvFunction> = generated.into_iter().collect();
    let r: BTreeSet<&MvFunction> = reference.into_iter().collect();
    CertifyReport {
        generated: g.len(),
        reference: r.len(),
        only_generated: g.difference(&r).map(|f| f.digits()).collect(),
        only_reference: r.difference(&g).map(|f| f.digits()).collect(),
    }
}

/// One value vector per line, in the given order.
pub fn emit_tsv(functions: &[MvFunction]) -> String {
    functions.iter().map(|f| f.digits() + "\n").collect()
}

pub fn emit_json(functions: &[MvFunction]) -> String {
    let digits: Vec<String> = functions.iter().map(|f| f.digits()).collect();
    serde_json::to_string_pretty(&digits).expect("strings serialize")
}
