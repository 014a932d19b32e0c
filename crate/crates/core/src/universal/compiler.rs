use dashu_int::UBig;
use rayon::prelude::*;
use serde::Serialize;

use super::dovetail::{DomainEnumerator, Emission};
use super::{v_eval, Evaluator};
use crate::encodings::{bit_len, interleave, pair, unpair};
use crate::machine::{gamma, EvalOutcome, GoedelIndex};

/// The constants attached to a function `F` for a programmable universal `U`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompilerConstants {
    /// Index fed to the compiler, `pair(k, g_V)`.
    pub g: GoedelIndex,
    /// Linear blow-up: `C_U(g, x) <= c * x`.
    pub c: UBig,
    /// Programmability constant: some `y <= k * x` has `U(y) = F(x)`.
    pub k: UBig,
}

impl CompilerConstants {
    /// Constants for the base function `V` and the program with index `f`.
    ///
    /// `interleave(f, x) < 2^(2 * bitlen(f) + 1) * x`, so that power of two
    /// serves as both `c` and `k`.
    pub fn for_base(f: &GoedelIndex) -> Self {
        let k = UBig::ONE << (2 * bit_len(f.as_ubig()) + 1);
        Self {
            g: GoedelIndex::new(pair(&k, f.as_ubig())).expect("pair is positive"),
            c: k.clone(),
            k,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CompileOutcome {
    /// `y` is in the domain enumeration, within the bound, and `U(y) = value`.
    Found { y: u64, value: u64 },
    /// `V(C_V(g, x))` did not halt within the round cap.
    TargetDiverged,
    /// The round cap ran out before a witness appeared.
    Exhausted,
}

/// The dovetail-search compiler `C_U` for an arbitrary evaluator `U`.
///
/// `compile(z, x)` unpairs `z = pair(k, g)`, computes the target
/// `V(interleave(g, x))`, and returns the first `y` in the domain enumeration
/// of `U` with `y <= k * x` and `U(y)` equal to the target. The enumeration
/// is cached across calls.
pub struct CuCompiler<'a, E: Evaluator + ?Sized> {
    u: &'a E,
    round_cap: u64,
    enumerator: DomainEnumerator<'a, E>,
    emitted: Vec<Emission>,
}

impl<'a, E: Evaluator + ?Sized> CuCompiler<'a, E> {
    pub fn new(u: &'a E, round_cap: u64) -> Self {
        Self {
            u,
            round_cap,
            enumerator: DomainEnumerator::new(u, round_cap),
            emitted: Vec::new(),
        }
    }

    fn emission(&mut self, i: usize) -> Option<Emission> {
        while self.emitted.len() <= i {
            let next = self.enumerator.next()?;
            self.emitted.push(next);
        }
        Some(self.emitted[i])
    }

    pub fn compile(&mut self, z: &UBig, x: u64) -> CompileOutcome {
        let (k, g) = unpair(z);
        let x_big = UBig::from(x);
        let target = match v_eval(&interleave(&g, &x_big), self.round_cap) {
            EvalOutcome::Halted { value, .. } => value,
            _ => return CompileOutcome::TargetDiverged,
        };
        let bound = k * x_big;
        let mut i = 0;
        while let Some(candidate) = self.emission(i) {
            i += 1;
            if candidate.value != target || UBig::from(candidate.x) > bound {
                continue;
            }
            // Re-check by direct evaluation before answering.
            if self.u.eval_u64(candidate.x, self.round_cap).value() == Some(target) {
                return CompileOutcome::Found {
                    y: candidate.x,
                    value: target,
                };
            }
        }
        CompileOutcome::Exhausted
    }
}

/// One-shot [`CuCompiler::compile`].
pub fn compile_cu<E: Evaluator + ?Sized>(
    u: &E,
    z: &UBig,
    x: u64,
    round_cap: u64,
) -> CompileOutcome {
    CuCompiler::new(u, round_cap).compile(z, x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ProbeResult {
    /// Least `y <= k * x` with `U(y) = F(x)` under the budget.
    Witness { y: u64 },
    /// Nothing in `[1, k * x]` matched within the budget. Not a refutation.
    NoWitnessWithinBudget,
    /// `F(x)` itself did not halt within the budget.
    FunctionDiverged,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeEntry {
    pub x: u64,
    pub f_value: Option<u64>,
    pub result: ProbeResult,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub k: u64,
    pub budget: u64,
    pub entries: Vec<ProbeEntry>,
}

impl ProbeReport {
    pub fn witnesses(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| matches!(e.result, ProbeResult::Witness { .. }))
            .count()
    }
}

/// Checks the programmability bound `y <= k * x` for `F = gamma(f_index, .)`
/// by exhaustive search at each `x`.
pub fn probe_programmable<E: Evaluator + ?Sized>(
    u: &E,
    f_index: &GoedelIndex,
    k: u64,
    xs: &[u64],
    budget: u64,
) -> ProbeReport {
    let entries = xs
        .par_iter()
        .map(|&x| {
            let Some(f_value) = gamma(f_index, x, budget).value() else {
                return ProbeEntry {
                    x,
                    f_value: None,
                    result: ProbeResult::FunctionDiverged,
                };
            };
            let limit = k.saturating_mul(x);
            let result = (1..=limit)
                .find(|&y| u.eval_u64(y, budget).value() == Some(f_value))
                .map_or(ProbeResult::NoWitnessWithinBudget, |y| {
                    ProbeResult::Witness { y }
                });
            ProbeEntry {
                x,
                f_value: Some(f_value),
                result,
            }
        })
        .collect();
    ProbeReport { k, budget, entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encodings::{pair_u64, phi_u64};
    use crate::machine::{encode_program, parse_program};
    use crate::universal::UniversalSpec;

    fn succ_index() -> GoedelIndex {
        encode_program(&parse_program("INC 0").unwrap())
    }

    #[test]
    fn base_constants_for_successor() {
        let consts = CompilerConstants::for_base(&succ_index());
        // g = 3 has two bits.
        assert_eq!(consts.k, UBig::from(32u8));
        assert_eq!(consts.g.as_ubig(), &pair_u64(32, 3));
    }

    #[test]
    fn compiles_successor_for_base_v() {
        let consts = CompilerConstants::for_base(&succ_index());
        let k = u64::try_from(&consts.k).unwrap();
        let mut compiler = CuCompiler::new(&UniversalSpec::BaseV, 4 * k * 20);
        for x in 1..=20u64 {
            match compiler.compile(consts.g.as_ubig(), x) {
                CompileOutcome::Found { y, value } => {
                    assert_eq!(value, x + 1);
                    assert!(y <= k * x);
                    assert_eq!(UniversalSpec::BaseV.eval_u64(y, 1000).value(), Some(x + 1));
                }
                other => panic!("x = {x}: {other:?}"),
            }
        }
    }

    #[test]
    fn unit_bound_excludes_everything() {
        // k = 1 allows only y = 1, and the interleave image starts at 7.
        let f = encode_program(&parse_program("INC 0\nINC 0\nINC 0\nINC 0").unwrap());
        let z = pair(&UBig::ONE, f.as_ubig());
        assert_eq!(
            compile_cu(&UniversalSpec::BaseV, &z, 1, 200),
            CompileOutcome::Exhausted
        );
    }

    #[test]
    fn diverging_target_reported() {
        let div = encode_program(&crate::machine::diverging_program());
        let z = pair(&UBig::from(1u32 << 20), div.as_ubig());
        assert_eq!(
            compile_cu(&UniversalSpec::BaseV, &z, 3, 100),
            CompileOutcome::TargetDiverged
        );
    }

    #[test]
    fn probe_successor_on_base_v() {
        let g = succ_index();
        let k = 1u64 << (2 * bit_len(g.as_ubig()) + 1);
        let xs: Vec<u64> = (1..=50).collect();
        let report = probe_programmable(&UniversalSpec::BaseV, &g, k, &xs, 1000);
        assert_eq!(report.witnesses(), 50);
        for entry in &report.entries {
            let ProbeResult::Witness { y } = entry.result else {
                unreachable!()
            };
            assert!(
                y <= interleave(g.as_ubig(), &UBig::from(entry.x))
                    .try_into()
                    .unwrap()
            );
        }

        let tight = probe_programmable(&UniversalSpec::BaseV, &g, 1, &[1], 1000);
        assert_eq!(tight.entries[0].result, ProbeResult::NoWitnessWithinBudget);
    }

    #[test]
    fn probe_phi_pullback_hits_fiber_points() {
        let g = succ_index();
        let xs: Vec<u64> = (1..=8).collect();
        let report = probe_programmable(&UniversalSpec::PhiPullback, &g, 64, &xs, 1000);
        for entry in &report.entries {
            if let ProbeResult::Witness { y } = entry.result {
                let z = phi_u64(y);
                assert_eq!(
                    UniversalSpec::BaseV.eval_u64(z, 1000).value(),
                    entry.f_value
                );
            }
        }
        // F(1) = 2 = V(14): the least point of fiber 14 is 2^13 > 64.
        assert_eq!(report.entries[0].result, ProbeResult::NoWitnessWithinBudget);
    }

    #[test]
    fn probe_reports_diverging_function() {
        let div = encode_program(&crate::machine::diverging_program());
        let report = probe_programmable(&UniversalSpec::BaseV, &div, 4, &[1, 2], 50);
        assert!(report
            .entries
            .iter()
            .all(|e| e.result == ProbeResult::FunctionDiverged));
    }
}
