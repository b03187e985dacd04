//! Exhaustive logical→physical placement search.

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::{Circuit, CostReport, GateKind, Placement};
use crate::error::{Error, Result};
use crate::peephole::simplify;
use crate::realization::RealizationTable;

/// Largest device the exhaustive search accepts by default.
pub const DEFAULT_SEARCH_LIMIT: usize = 8;

/// Percent reduction per metric, rounded half away from zero. Negative when
/// the metric grew.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Reduction {
    pub gates: i64,
    pub levels: i64,
}

impl Reduction {
    pub fn between(initial: CostReport, final_: CostReport) -> Self {
        Reduction { gates: percent(initial.gates, final_.gates), levels: percent(initial.levels, final_.levels) }
    }
}

pub fn percent(initial: usize, final_: usize) -> i64 {
    if initial == 0 {
        return 0;
    }
    (100.0 * (initial as f64 - final_ as f64) / initial as f64).round() as i64
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MappingResult {
    pub placement: Placement,
    #[serde(skip)]
    pub mapped: Circuit,
    pub initial_cost: CostReport,
    pub final_cost: CostReport,
    pub reduction_pct: Reduction,
}

/// Replaces every CNOT of a physical circuit by its table realization.
pub fn substitute(physical: &Circuit, table: &RealizationTable) -> Result<Circuit> {
    let mut out = Circuit::new(physical.num_qubits());
    for g in physical.gates() {
        if g.kind() == GateKind::CNOT {
            for h in table.lookup(g.qubits()[0], g.qubits()[1])?.sequence.gates() {
                out.push(*h)?;
            }
        } else {
            out.push(*g)?;
        }
    }
    Ok(out)
}

fn check_fits(c: &Circuit, table: &RealizationTable) -> Result<usize> {
    let n = table.graph().num_physical();
    if c.num_qubits() > n {
        return Err(Error::CircuitTooWide { circuit: c.num_qubits(), device: n });
    }
    Ok(n)
}

/// Relabel, substitute and simplify under a fixed placement.
pub fn map_with(c: &Circuit, placement: &Placement, table: &RealizationTable) -> Result<Circuit> {
    let n = check_fits(c, table)?;
    let physical = c.relabel(placement, n)?;
    Ok(simplify(&substitute(&physical, table)?))
}

pub fn cost_of(c: &Circuit, placement: &Placement, table: &RealizationTable) -> Result<CostReport> {
    Ok(map_with(c, placement, table)?.cost())
}

/// Gate count of substituting every CNOT under the identity placement,
/// without any simplification.
pub fn naive_substitution_cost(c: &Circuit, table: &RealizationTable) -> Result<usize> {
    let n = check_fits(c, table)?;
    let physical = c.relabel(&Placement::identity(c.num_qubits()), n)?;
    Ok(substitute(&physical, table)?.gate_count())
}

pub fn optimize(c: &Circuit, table: &RealizationTable) -> Result<MappingResult> {
    optimize_with_limit(c, table, DEFAULT_SEARCH_LIMIT)
}

/// Tries every injection of the circuit's qubits into the device and keeps
/// the cheapest by `(gates, levels, placement)`.
pub fn optimize_with_limit(c: &Circuit, table: &RealizationTable, limit: usize) -> Result<MappingResult> {
    let n = table.graph().num_physical();
    if n > limit {
        return Err(Error::SearchLimit { physical: n, limit });
    }
    check_fits(c, table)?;

    let candidates: Vec<Vec<usize>> = (0..n).permutations(c.num_qubits()).collect();
    let best = candidates
        .into_par_iter()
        .map(|p| -> Result<_> {
            let placement = Placement::new(p)?;
            let mapped = map_with(c, &placement, table)?;
            Ok((mapped.cost(), placement, mapped))
        })
        .try_reduce_with(|a, b| {
            let ka = (a.0.gates, a.0.levels, &a.1);
            let kb = (b.0.gates, b.0.levels, &b.1);
            Ok(if kb < ka { b } else { a })
        })
        .expect("at least one placement")?;

    let (final_cost, placement, mapped) = best;
    let initial_cost = c.cost();
    Ok(MappingResult {
        placement,
        mapped,
        initial_cost,
        final_cost,
        reduction_pct: Reduction::between(initial_cost, final_cost),
    })
}
