//! Distortion upper and lower bounds over a grid of read lengths and coverage depths.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{reads_for_coverage, Mode, RepeatStats, SamplingParams};
use crate::distortion::dk;
use crate::error::{invalid, Result};
use crate::par::{self, Exec};
use crate::seqcore::CircularSequence;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveRow {
    pub read_len: usize,
    pub coverage: f64,
    pub reads: usize,
    /// Largest admissible `q`, absent for gap rows.
    pub q_star: Option<usize>,
    /// `D_q*(s)`, absent for gap rows.
    pub upper_log10: Option<f64>,
    /// `D_L(s)`.
    pub lower_log10: f64,
    pub gap: bool,
}

/// Largest `q` in `k..=L-2` whose total failure bound is at most `epsilon`.
fn admissible_q(stats: &RepeatStats, params: &SamplingParams, epsilon: f64, mode: Mode) -> Result<Option<usize>> {
    let k = stats.order();
    let l = params.read_len;
    if l < k + 2 {
        return Ok(None);
    }
    let base = stats.theorem1_failure(params, mode)?;
    if base > epsilon {
        return Ok(None);
    }
    // the linked-pair part is not monotone in q, so every candidate is tried
    for q in (k..=l - 2).rev() {
        if base + stats.p_q_violation(params, q, mode)? <= epsilon {
            return Ok(Some(q));
        }
    }
    Ok(None)
}

/// For each `(L, c)` in the grid, the read count `N = cG/L`, the largest
/// admissible `q` and the bounds `D_q(s) >= D(G, s) >= D_L(s)`.
///
/// A point is a gap when no `q` keeps the failure probability of the
/// sufficiency and distortion conditions within `epsilon`. Rows are ordered
/// by `L`, then by coverage in grid order.
pub fn distortion_bound_curve(
    s: &CircularSequence,
    stats: &RepeatStats,
    read_lens: &[usize],
    coverages: &[f64],
    epsilon: f64,
    mode: Mode,
    exec: Exec,
) -> Result<Vec<CurveRow>> {
    let g = s.len();
    if read_lens.is_empty() || coverages.is_empty() {
        return invalid("empty read-length or coverage grid");
    }
    if stats.genome_len() != g {
        return invalid("repeat statistics belong to a different genome");
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return invalid(format!("epsilon = {epsilon} outside (0, 1)"));
    }
    if let Some(&l) = read_lens.iter().find(|&&l| l == 0 || l > g) {
        return invalid(format!("read length {l} outside 1..={g}"));
    }
    if let Some(c) = coverages.iter().find(|c| !(**c >= 0.0 && c.is_finite())) {
        return invalid(format!("coverage depth {c} is not a nonnegative number"));
    }
    let mut lens = read_lens.to_vec();
    lens.sort_unstable();
    lens.dedup();
    let points: Vec<(usize, f64)> = lens.iter().flat_map(|&l| coverages.iter().map(move |&c| (l, c))).collect();
    let picks = par::map(exec, &points, |&(l, c)| {
        let params = SamplingParams::new(reads_for_coverage(c, l, g), l, g, 0)?;
        Ok((params.reads, admissible_q(stats, &params, epsilon, mode)?))
    });
    let picks: Vec<(usize, Option<usize>)> = picks.into_iter().collect::<Result<_>>()?;
    let orders: Vec<usize> =
        lens.iter().copied().chain(picks.iter().filter_map(|p| p.1)).collect::<BTreeSet<_>>().into_iter().collect();
    let values = par::map(exec, &orders, |&k| dk(s, k).map(|d| d.log10_distortion));
    let mut log10: BTreeMap<usize, f64> = BTreeMap::new();
    for (k, v) in orders.iter().zip(values) {
        log10.insert(*k, v?);
    }
    Ok(points
        .iter()
        .zip(picks)
        .map(|(&(l, c), (reads, q))| CurveRow {
            read_len: l,
            coverage: c,
            reads,
            q_star: q,
            upper_log10: q.map(|q| log10[&q]),
            lower_log10: log10[&l],
            gap: q.is_none(),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        let s: CircularSequence = "ACGTTGCAAGCTAGGCTAAC".parse().unwrap();
        let stats = RepeatStats::new(&s, 3).unwrap();
        let run = |ls: &[usize], cs: &[f64], e: f64| distortion_bound_curve(&s, &stats, ls, cs, e, Mode::Exact, Exec::Sequential);
        assert!(run(&[], &[1.0], 0.01).is_err());
        assert!(run(&[8], &[], 0.01).is_err());
        assert!(run(&[21], &[1.0], 0.01).is_err());
        assert!(run(&[8], &[-1.0], 0.01).is_err());
        assert!(run(&[8], &[1.0], 0.0).is_err());
    }

    #[test]
    fn rows_cover_grid_in_order() {
        let s: CircularSequence = "ACGTTGCAAGCTAGGCTAACGGATCCTTAGCA".parse().unwrap();
        let stats = RepeatStats::new(&s, 3).unwrap();
        let rows = distortion_bound_curve(&s, &stats, &[12, 8], &[5.0, 5000.0], 0.01, Mode::Exact, Exec::Sequential)
            .unwrap();
        let keys: Vec<(usize, f64)> = rows.iter().map(|r| (r.read_len, r.coverage)).collect();
        assert_eq!(keys, vec![(8, 5.0), (8, 5000.0), (12, 5.0), (12, 5000.0)]);
        for r in &rows {
            assert_eq!(r.gap, r.q_star.is_none());
            if let Some(u) = r.upper_log10 {
                assert!(u >= r.lower_log10);
            }
        }
        // with enough reads every condition holds for the largest q
        assert_eq!(rows[3].q_star, Some(10));
    }
}
