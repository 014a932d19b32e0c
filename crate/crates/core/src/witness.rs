//! Checking almost-decidability witnesses against budgeted ground truth.
//!
//! A witness for `Halt(U)` is a decidable set `R` of density one together
//! with a decider `d` for `R ∩ Halt(U)`. Halting is only semi-decidable, so
//! the harness can refute a witness (a point of `R` that halts while `d`
//! rejects it) but never confirm one: the strongest verdict is "unrefuted at
//! this range and budget".

use dashu_int::UBig;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::density::{density_exact, DensityReport};
use crate::machine::EvalOutcome;
use crate::sets::{Predicate, PredicateError};
use crate::universal::Evaluator;

const CHUNK: u64 = 1 << 12;

/// A claimed witness: `r` decides `R`, `d` decides `R ∩ Halt(U)`.
#[derive(Debug, Clone)]
pub struct Witness<R, D> {
    pub r: R,
    pub d: D,
    pub claimed_density: Ratio<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ContradictionKind {
    /// `x` is in `R` and halts, but `d` rejects it.
    HaltsButRejected,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Contradiction {
    pub x: u64,
    pub kind: ContradictionKind,
    /// Halting step count; re-evaluating `x` under the report budget
    /// reproduces it.
    pub steps: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Refuted,
    /// No contradiction within the checked range and budget.
    Unrefuted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessReport {
    pub n: u64,
    pub budget: u64,
    pub contradictions: Vec<Contradiction>,
    /// `d` accepted and `U` halted.
    pub confirmations: u64,
    /// `d` accepted but `U` did not halt within the budget.
    pub inconclusive: u64,
    /// `d` rejected and `U` did not halt within the budget.
    pub unresolved_rejections: u64,
    pub density_of_r: DensityReport,
    pub claimed_density: Ratio<u64>,
}

impl WitnessReport {
    pub fn verdict(&self) -> Verdict {
        if self.contradictions.is_empty() {
            Verdict::Unrefuted
        } else {
            Verdict::Refuted
        }
    }

    pub fn json(&self) -> WitnessJson {
        WitnessJson {
            range: [1, self.n],
            budget: self.budget,
            contradictions: self.contradictions.clone(),
            confirmations: self.confirmations,
            inconclusive: self.inconclusive,
            unresolved_rejections: self.unresolved_rejections,
            density: Fraction::from(self.density_of_r.density),
            claimed_density: Fraction::from(self.claimed_density),
            verdict: self.verdict(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

impl From<Ratio<u64>> for Fraction {
    fn from(r: Ratio<u64>) -> Self {
        Self {
            num: *r.numer(),
            den: *r.denom(),
        }
    }
}

/// Serialized form of a [`WitnessReport`].
#[derive(Debug, Clone, Serialize)]
pub struct WitnessJson {
    pub range: [u64; 2],
    pub budget: u64,
    pub contradictions: Vec<Contradiction>,
    pub confirmations: u64,
    pub inconclusive: u64,
    pub unresolved_rejections: u64,
    pub density: Fraction,
    pub claimed_density: Fraction,
    pub verdict: Verdict,
}

#[derive(Default)]
struct Tally {
    contradictions: Vec<Contradiction>,
    confirmations: u64,
    inconclusive: u64,
    unresolved_rejections: u64,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.contradictions.extend(other.contradictions);
        self.confirmations += other.confirmations;
        self.inconclusive += other.inconclusive;
        self.unresolved_rejections += other.unresolved_rejections;
        self
    }
}

/// Checks the witness on every `x` in `[1, n]` with `x ∈ R`.
pub fn validate_witness<E, R, D>(
    u: &E,
    w: &Witness<R, D>,
    n: u64,
    budget: u64,
) -> Result<WitnessReport, PredicateError>
where
    E: Evaluator + ?Sized,
    R: Predicate,
    D: Predicate,
{
    assert!(n >= 1, "N must be positive");
    let chunks: Vec<Tally> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut tally = Tally::default();
            let lo = c * CHUNK + 1;
            for x in lo..=(lo + CHUNK - 1).min(n) {
                let xb = UBig::from(x);
                if !w.r.test(&xb)? {
                    continue;
                }
                let accepted = w.d.test(&xb)?;
                match (u.eval(&xb, budget), accepted) {
                    (EvalOutcome::Halted { steps, .. }, false) => {
                        tally.contradictions.push(Contradiction {
                            x,
                            kind: ContradictionKind::HaltsButRejected,
                            steps,
                        })
                    }
                    (EvalOutcome::Halted { .. }, true) => tally.confirmations += 1,
                    (_, true) => tally.inconclusive += 1,
                    (_, false) => tally.unresolved_rejections += 1,
                }
            }
            Ok(tally)
        })
        .collect::<Result<_, PredicateError>>()?;
    let mut tally = chunks.into_iter().fold(Tally::default(), Tally::merge);

    // Keep only contradictions that reproduce on a fresh evaluation.
    tally.contradictions.retain(|c| {
        matches!(u.eval_u64(c.x, budget), EvalOutcome::Halted { steps, .. } if steps == c.steps)
    });

    Ok(WitnessReport {
        n,
        budget,
        contradictions: tally.contradictions,
        confirmations: tally.confirmations,
        inconclusive: tally.inconclusive,
        unresolved_rejections: tally.unresolved_rejections,
        density_of_r: density_exact(&w.r, n)?,
        claimed_density: w.claimed_density,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RCheckReport {
    pub witness: WitnessReport,
    pub r: Ratio<u64>,
    pub tolerance: Ratio<u64>,
    /// `|p_N(R) - r| <= tolerance`.
    pub density_ok: bool,
}

impl RCheckReport {
    pub fn passed(&self) -> bool {
        self.density_ok && self.witness.verdict() == Verdict::Unrefuted
    }
}

/// `|a - b| <= tol` on exact rationals, by cross-multiplication.
pub fn within_tolerance(a: Ratio<u64>, b: Ratio<u64>, tol: Ratio<u64>) -> bool {
    let big = |v: &u64| UBig::from(*v);
    let lhs_a = big(a.numer()) * big(b.denom());
    let lhs_b = big(b.numer()) * big(a.denom());
    let diff = if lhs_a >= lhs_b {
        lhs_a - lhs_b
    } else {
        lhs_b - lhs_a
    };
    diff * big(tol.denom()) <= big(tol.numer()) * big(a.denom()) * big(b.denom())
}

/// [`validate_witness`] plus the check that `p_N(R)` is within `tol` of `r`.
pub fn r_decidability_check<E, R, D>(
    u: &E,
    w: &Witness<R, D>,
    r: Ratio<u64>,
    n: u64,
    budget: u64,
    tol: Ratio<u64>,
) -> Result<RCheckReport, PredicateError>
where
    E: Evaluator + ?Sized,
    R: Predicate,
    D: Predicate,
{
    assert!(
        *r.numer() > 0 && r <= Ratio::from_integer(1),
        "r must lie in (0, 1]"
    );
    let witness = validate_witness(u, w, n, budget)?;
    let density_ok = within_tolerance(witness.density_of_r.density, r, tol);
    Ok(RCheckReport {
        witness,
        r,
        tolerance: tol,
        density_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::SetSpec;
    use crate::universal::UniversalSpec;

    fn witness(r: SetSpec, d: SetSpec) -> Witness<SetSpec, SetSpec> {
        Witness {
            r,
            d,
            claimed_density: Ratio::from_integer(1),
        }
    }

    #[test]
    fn square_embed_witness_holds() {
        let w = witness(SetSpec::NonSquares, SetSpec::NonSquares);
        let report = validate_witness(&UniversalSpec::SquareEmbed, &w, 100_000, 100).unwrap();
        assert!(report.contradictions.is_empty());
        assert_eq!(report.confirmations, 100_000 - 316);
        assert_eq!(report.inconclusive, 0);
        assert_eq!(report.verdict(), Verdict::Unrefuted);
        assert_eq!(report.density_of_r.count, 100_000 - 316);
    }

    #[test]
    fn constant_false_decider_is_refuted_at_two() {
        let w = witness(SetSpec::NonSquares, SetSpec::Empty);
        let report = validate_witness(&UniversalSpec::SquareEmbed, &w, 100, 1).unwrap();
        assert_eq!(report.verdict(), Verdict::Refuted);
        assert_eq!(report.contradictions[0].x, 2);
        assert_eq!(report.contradictions.len(), 90);
    }

    #[test]
    fn phi_pullback_leaves_inconclusive_mass() {
        let w = witness(SetSpec::NonSquares, SetSpec::NonSquares);
        let report = validate_witness(&UniversalSpec::PhiPullback, &w, 5000, 1000).unwrap();
        // Points x with phi(x) = 7 halt; nearly everything else is off the
        // interleave image and never halts.
        assert!(report.contradictions.is_empty());
        assert!(report.inconclusive > report.confirmations);
        assert_eq!(
            report.confirmations + report.inconclusive + report.unresolved_rejections,
            report.density_of_r.count
        );
    }

    #[test]
    fn contradictions_persist_under_larger_budgets() {
        let w = witness(SetSpec::All, SetSpec::Empty);
        let small = validate_witness(&UniversalSpec::BaseV, &w, 3000, 4).unwrap();
        let large = validate_witness(&UniversalSpec::BaseV, &w, 3000, 64).unwrap();
        assert!(!small.contradictions.is_empty());
        for c in &small.contradictions {
            assert!(large.contradictions.iter().any(|l| l == c));
        }
    }

    #[test]
    fn json_shape() {
        let w = witness(SetSpec::NonSquares, SetSpec::Empty);
        let report = validate_witness(&UniversalSpec::SquareEmbed, &w, 3, 1).unwrap();
        let json = report.json();
        assert_eq!(json.range, [1, 3]);
        assert_eq!(json.density, Fraction { num: 2, den: 3 });
        assert_eq!(json.verdict, Verdict::Refuted);
    }

    #[test]
    fn r_checks() {
        let u = UniversalSpec::SquareEmbed;
        let evens = witness(SetSpec::Evens, SetSpec::Evens);
        let report = r_decidability_check(
            &u,
            &evens,
            Ratio::new(1, 2),
            1_000_000,
            1,
            Ratio::new(1, 1_000_000),
        )
        .unwrap();
        assert!(report.density_ok);

        let nonsq = witness(SetSpec::NonSquares, SetSpec::NonSquares);
        let report = r_decidability_check(
            &u,
            &nonsq,
            Ratio::from_integer(1),
            1_000_000,
            1,
            Ratio::new(1, 100),
        )
        .unwrap();
        assert!(report.density_ok);
        assert!(report.passed());
        assert_eq!(report.witness.density_of_r.density, Ratio::new(999, 1000));

        let squares = witness(SetSpec::Squares, SetSpec::Squares);
        for n in [4, 100, 10_000] {
            let report = r_decidability_check(
                &u,
                &squares,
                Ratio::from_integer(1),
                n,
                1,
                Ratio::new(1, 100),
            )
            .unwrap();
            assert!(!report.density_ok);
            assert!(!report.passed());
        }
    }

    #[test]
    fn tolerance_arithmetic() {
        assert!(within_tolerance(
            Ratio::new(1, 3),
            Ratio::new(1, 3),
            Ratio::from_integer(0)
        ));
        assert!(within_tolerance(
            Ratio::new(1, 2),
            Ratio::new(1, 3),
            Ratio::new(1, 6)
        ));
        assert!(!within_tolerance(
            Ratio::new(1, 2),
            Ratio::new(1, 3),
            Ratio::new(1, 7)
        ));
        let big = u64::MAX - 1;
        assert!(within_tolerance(
            Ratio::new(1, big),
            Ratio::new(1, big - 2),
            Ratio::new(1, big)
        ));
    }
}
