use std::collections::VecDeque;

use dashu_int::UBig;
use serde::Serialize;

use super::{Evaluator, Start};
use crate::machine::{Execution, Progress};

/// One element of the domain enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Emission {
    pub x: u64,
    pub value: u64,
    pub steps: u64,
    /// Dovetail round in which `x` was emitted.
    pub round: u64,
}

/// Dovetailed one-one enumeration of the halting set of an evaluator.
///
/// Round `s` covers every `x <= s` with budget `s`; `x` is emitted the first
/// round it halts in, smaller `x` first. Executions are suspended between
/// rounds rather than restarted, which yields the same order.
pub struct DomainEnumerator<'a, E: Evaluator + ?Sized> {
    u: &'a E,
    round_cap: u64,
    round: u64,
    running: Vec<(u64, Execution)>,
    ready: VecDeque<Emission>,
}

impl<'a, E: Evaluator + ?Sized> DomainEnumerator<'a, E> {
    pub fn new(u: &'a E, round_cap: u64) -> Self {
        Self {
            u,
            round_cap,
            round: 0,
            running: Vec::new(),
            ready: VecDeque::new(),
        }
    }

    /// Rounds completed so far.
    pub fn round(&self) -> u64 {
        self.round
    }

    /// True once every round up to the cap has run and been drained.
    pub fn is_exhausted(&self) -> bool {
        self.round >= self.round_cap && self.ready.is_empty()
    }

    fn run_round(&mut self) {
        self.round += 1;
        let s = self.round;
        let mut immediate = None;
        match self.u.start(&UBig::from(s)) {
            Start::Halted { value } => immediate = Some(value),
            Start::Running(execution) => self.running.push((s, execution)),
            Start::Diverges | Start::Overflow => {}
        }

        let ready = &mut self.ready;
        self.running
            .retain_mut(|(x, execution)| match execution.advance(s) {
                Progress::Halted { value, steps } => {
                    ready.push_back(Emission {
                        x: *x,
                        value,
                        steps,
                        round: s,
                    });
                    false
                }
                Progress::Suspended { .. } => true,
                Progress::Overflow { .. } => false,
            });
        if let Some(value) = immediate {
            ready.push_back(Emission {
                x: s,
                value,
                steps: 0,
                round: s,
            });
        }
    }
}

impl<E: Evaluator + ?Sized> Iterator for DomainEnumerator<'_, E> {
    type Item = Emission;

    fn next(&mut self) -> Option<Emission> {
        loop {
            if let Some(emission) = self.ready.pop_front() {
                return Some(emission);
            }
            if self.round >= self.round_cap {
                return None;
            }
            self.run_round();
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainEnumeration {
    pub values: Vec<u64>,
    /// The round cap ran out before `count` values were found.
    pub exhausted: bool,
}

/// The first `count` elements of the dovetailed enumeration of `dom(u)`.
pub fn enumerate_domain<E: Evaluator + ?Sized>(
    u: &E,
    count: usize,
    round_cap: u64,
) -> DomainEnumeration {
    let values: Vec<u64> = DomainEnumerator::new(u, round_cap)
        .take(count)
        .map(|e| e.x)
        .collect();
    DomainEnumeration {
        exhausted: values.len() < count,
        values,
    }
}
