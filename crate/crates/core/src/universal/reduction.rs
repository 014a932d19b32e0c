use std::collections::HashSet;
use std::sync::Arc;

use dashu_int::UBig;
use num_rational::Ratio;
use thiserror::Error;

use crate::encodings::phi;
use crate::machine::{eval_shared, EvalOutcome, Program};
use crate::sets::{Predicate, PredicateError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("no member of the set with phi = {n} found within the cap {cap}")]
    CapExceeded { n: u64, cap: String },
    #[error("enumerator did not produce element {index} within {budget} steps")]
    EnumeratorDiverged { index: u64, budget: u64 },
    #[error("enumerator repeated {value} at position {index}")]
    NotOneOne { index: u64, value: String },
    #[error(transparent)]
    Predicate(#[from] PredicateError),
}

/// `theta(n)`: the least `k <= search_cap` in the set with `phi(k) = n`.
///
/// Only the fiber `2^(n-1) * (2j + 1)` is scanned.
pub fn theta<P: Predicate + ?Sized>(
    set: &P,
    n: u64,
    search_cap: &UBig,
) -> Result<UBig, ReductionError> {
    assert!(n >= 1, "phi fibers are indexed by positive integers");
    let step = UBig::ONE << n as usize;
    let mut k = UBig::ONE << (n - 1) as usize;
    while k <= *search_cap {
        if set.test(&k)? {
            return Ok(k);
        }
        k += &step;
    }
    Err(ReductionError::CapExceeded {
        n,
        cap: search_cap.to_string(),
    })
}

/// A one-one enumeration `E(1), E(2), ...` of a c.e. set.
pub trait Enumeration {
    fn member(&self, index: u64) -> Result<UBig, ReductionError>;
}

impl<F> Enumeration for F
where
    F: Fn(u64) -> UBig,
{
    fn member(&self, index: u64) -> Result<UBig, ReductionError> {
        Ok(self(index))
    }
}

/// A c.e. set given by a counter machine: `E(i)` is the program's output on `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CeSetSpec {
    pub enumerator: Arc<Program>,
    /// Steps allowed per element.
    pub budget: u64,
    pub claimed_density: Option<Ratio<u64>>,
}

impl CeSetSpec {
    pub fn new(enumerator: Program, budget: u64) -> Self {
        Self {
            enumerator: Arc::new(enumerator),
            budget,
            claimed_density: None,
        }
    }
}

impl Enumeration for CeSetSpec {
    fn member(&self, index: u64) -> Result<UBig, ReductionError> {
        match eval_shared(&self.enumerator, index, self.budget) {
            EvalOutcome::Halted { value, .. } => Ok(UBig::from(value)),
            _ => Err(ReductionError::EnumeratorDiverged {
                index,
                budget: self.budget,
            }),
        }
    }
}

/// `E(k*)` for the least position `k* <= enum_cap` with `phi(E(k*)) = n`.
///
/// Repeated elements are reported as [`ReductionError::NotOneOne`].
pub fn theta_enumerated<E: Enumeration + ?Sized>(
    set: &E,
    n: u64,
    enum_cap: u64,
) -> Result<UBig, ReductionError> {
    let mut seen = HashSet::new();
    for index in 1..=enum_cap {
        let value = set.member(index)?;
        if phi(&value) == n {
            return Ok(value);
        }
        if !seen.insert(value.clone()) {
            return Err(ReductionError::NotOneOne {
                index,
                value: value.to_string(),
            });
        }
    }
    Err(ReductionError::CapExceeded {
        n,
        cap: enum_cap.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encodings::{is_square_u64, isqrt_u64, phi_u64};
    use crate::machine::parse_program;
    use crate::sets::SetSpec;

    fn theta_brute(n: u64, cap: u64) -> Option<u64> {
        (1..=cap).find(|&k| !is_square_u64(k) && phi_u64(k) == n)
    }

    #[test]
    fn theta_over_nonsquares() {
        let cap = UBig::from(1_000_000u32);
        for (n, want) in [(1, 3u64), (2, 2), (3, 12)] {
            assert_eq!(
                theta(&SetSpec::NonSquares, n, &cap).unwrap(),
                UBig::from(want)
            );
            assert_eq!(theta_brute(n, 1_000_000), Some(want));
        }
        for n in 1..=18 {
            let got = theta(&SetSpec::NonSquares, n, &cap).unwrap();
            assert_eq!(
                Some(u64::try_from(&got).unwrap()),
                theta_brute(n, 1_000_000)
            );
        }
    }

    #[test]
    fn theta_large_n() {
        let cap = UBig::ONE << 300;
        for n in [64u64, 101, 200] {
            let t = theta(&SetSpec::NonSquares, n, &cap).unwrap();
            assert_eq!(phi(&t), n);
            assert!(crate::encodings::square_split(&t).is_none());
        }
    }

    #[test]
    fn theta_cap_exceeded() {
        let err = theta(&SetSpec::NonSquares, 3, &UBig::from(11u8)).unwrap_err();
        assert!(matches!(err, ReductionError::CapExceeded { n: 3, .. }));
        assert!(theta(&SetSpec::Odds, 2, &UBig::from(1u32 << 20)).is_err());
    }

    #[test]
    fn enumerated_variant() {
        let naturals = |i: u64| UBig::from(i);
        assert_eq!(
            theta_enumerated(&naturals, 2, 100).unwrap(),
            UBig::from(2u8)
        );

        // i-th non-square is i + round(sqrt(i)).
        let nonsquares = |i: u64| {
            let r = isqrt_u64(i);
            let rounded = if i - r * r > r { r + 1 } else { r };
            UBig::from(i + rounded)
        };
        let listed: Vec<UBig> = (1..=8).map(nonsquares).collect();
        let expect: Vec<UBig> = [2u64, 3, 5, 6, 7, 8, 10, 11].map(UBig::from).to_vec();
        assert_eq!(listed, expect);
        assert_eq!(
            theta_enumerated(&nonsquares, 3, 1000).unwrap(),
            UBig::from(12u8)
        );
        for n in 1..=12 {
            assert_eq!(
                theta_enumerated(&nonsquares, n, 1 << 20).unwrap(),
                theta(&SetSpec::NonSquares, n, &UBig::from(1u64 << 40)).unwrap()
            );
        }
    }

    #[test]
    fn odd_enumerator_program() {
        // E(i) = 2i - 1: double r0 = i - 1 into r1, then move it back.
        let text = "\
DECJZ 0 5
INC 1
INC 1
DECJZ 2 1
DECJZ 1 8
INC 0
DECJZ 2 5
";
        let odds = CeSetSpec::new(parse_program(text).unwrap(), 10_000);
        for i in 1..=20 {
            assert_eq!(odds.member(i).unwrap(), UBig::from(2 * i - 1));
        }
        assert!(matches!(
            theta_enumerated(&odds, 2, 200),
            Err(ReductionError::CapExceeded { n: 2, .. })
        ));
        assert_eq!(theta_enumerated(&odds, 1, 200).unwrap(), UBig::ONE);
    }

    #[test]
    fn repeated_elements_are_rejected() {
        let constant = |_: u64| UBig::from(3u8);
        assert!(matches!(
            theta_enumerated(&constant, 2, 10),
            Err(ReductionError::NotOneOne { index: 2, .. })
        ));
    }

    #[test]
    fn diverging_enumerator() {
        let spin = CeSetSpec::new(parse_program("DECJZ 1 1").unwrap(), 50);
        assert_eq!(
            theta_enumerated(&spin, 1, 5),
            Err(ReductionError::EnumeratorDiverged {
                index: 1,
                budget: 50
            })
        );
    }
}
