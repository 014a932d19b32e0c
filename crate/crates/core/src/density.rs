//! Finite natural densities `p_N(A) = #([1, N] ∩ A) / N`.
//!
//! Decidable sets get exact counts. Halting sets only get budgeted lower
//! bounds: a point that has not halted yet may still halt later, so a
//! halting count never certifies anything from above.

use dashu_int::UBig;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

pub use crate::sets::{Predicate, PredicateError, SetSpec};
use crate::universal::Evaluator;

const CHUNK: u64 = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityMode {
    Exact,
    HaltingLowerBound,
}

impl DensityMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            DensityMode::Exact => "exact",
            DensityMode::HaltingLowerBound => "halting_lower_bound",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityReport {
    pub n: u64,
    pub count: u64,
    /// `count / n`, reduced.
    pub density: Ratio<u64>,
    pub mode: DensityMode,
    /// Present exactly when `mode` is [`DensityMode::HaltingLowerBound`].
    pub budget: Option<u64>,
}

/// One CSV row: `N,count,density_num,density_den,mode,budget`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensityRow {
    #[serde(rename = "N")]
    pub n: u64,
    pub count: u64,
    pub density_num: u64,
    pub density_den: u64,
    pub mode: &'static str,
    pub budget: Option<u64>,
}

impl DensityReport {
    fn new(n: u64, count: u64, mode: DensityMode, budget: Option<u64>) -> Self {
        assert!(count <= n);
        Self {
            n,
            count,
            density: Ratio::new(count, n),
            mode,
            budget,
        }
    }

    pub fn row(&self) -> DensityRow {
        DensityRow {
            n: self.n,
            count: self.count,
            density_num: *self.density.numer(),
            density_den: *self.density.denom(),
            mode: self.mode.as_str(),
            budget: self.budget,
        }
    }
}

/// Counts `x` in `[1, n]` satisfying `test`, in parallel chunks. The total
/// does not depend on the chunking.
pub(crate) fn count_range<F, Err>(n: u64, test: F) -> Result<u64, Err>
where
    F: Fn(u64) -> Result<bool, Err> + Sync,
    Err: Send,
{
    let chunks = n.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK + 1;
            let hi = (lo + CHUNK - 1).min(n);
            let mut count = 0;
            for x in lo..=hi {
                count += u64::from(test(x)?);
            }
            Ok(count)
        })
        .sum()
}

/// Exact `p_N` of a decidable set.
pub fn density_exact<P: Predicate + ?Sized>(
    pred: &P,
    n: u64,
) -> Result<DensityReport, PredicateError> {
    assert!(n >= 1, "N must be positive");
    let count = count_range(n, |x| pred.test(&UBig::from(x)))?;
    Ok(DensityReport::new(n, count, DensityMode::Exact, None))
}

/// Lower bound on `p_N(Halt(u))`: the points that halt within `budget`.
pub fn halting_density_lower<E: Evaluator + ?Sized>(u: &E, n: u64, budget: u64) -> DensityReport {
    assert!(n >= 1, "N must be positive");
    let count =
        count_range::<_, std::convert::Infallible>(n, |x| Ok(u.eval_u64(x, budget).is_halted()))
            .unwrap_or_else(|never| match never {});
    DensityReport::new(n, count, DensityMode::HaltingLowerBound, Some(budget))
}
