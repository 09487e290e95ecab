//! Retrieval metrics of a repair against the conflicts of its universe.

use alloc::collections::BTreeSet;

use crate::model::AssertionSet;
use crate::query::AnswerTuple;
use crate::reasoner::NegativeClosure;

/// A ratio whose denominator may be zero; `undefined` ratios carry value 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ratio {
    pub value: f64,
    pub undefined: bool,
}

impl Ratio {
    pub fn of(num: usize, den: usize) -> Self {
        if den == 0 {
            Ratio::UNDEFINED
        } else {
            Ratio {
                value: num as f64 / den as f64,
                undefined: false,
            }
        }
    }

    pub const UNDEFINED: Ratio = Ratio {
        value: 0.0,
        undefined: true,
    };
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Metrics {
    /// Conflict-free and retained.
    pub cr: usize,
    /// Conflict-free and dropped.
    pub cnr: usize,
    /// Conflict-involved and retained.
    pub ir: usize,
    /// Conflict-involved and dropped.
    pub inr: usize,
    pub precision: Ratio,
    pub recall: Ratio,
    pub f_measure: Ratio,
}

/// Classifies every assertion of `universe` by conflict involvement and by
/// membership in `retained`.
pub fn metrics(closure: &NegativeClosure, universe: &AssertionSet, retained: &AssertionSet) -> Metrics {
    let free = closure.free_set(universe);
    let (mut cr, mut cnr, mut ir, mut inr) = (0, 0, 0, 0);
    for a in universe {
        match (free.contains(a), retained.contains(a)) {
            (true, true) => cr += 1,
            (true, false) => cnr += 1,
            (false, true) => ir += 1,
            (false, false) => inr += 1,
        }
    }
    let precision = Ratio::of(cr, cr + ir);
    let recall = Ratio::of(cr, cr + cnr);
    let sum = precision.value + recall.value;
    let f_measure = if sum > 0.0 {
        Ratio {
            value: 2.0 * precision.value * recall.value / sum,
            undefined: false,
        }
    } else {
        Ratio::UNDEFINED
    };
    Metrics {
        cr,
        cnr,
        ir,
        inr,
        precision,
        recall,
        f_measure,
    }
}

/// Share of the raw answers that survive the repair.
pub fn productivity(retained: &BTreeSet<AnswerTuple>, raw: &BTreeSet<AnswerTuple>) -> Ratio {
    Ratio::of(retained.intersection(raw).count(), raw.len())
}
