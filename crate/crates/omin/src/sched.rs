//! Pass scheduling: partitioning a message set into time slots.
//!
//! A pass is a group of messages transmitted together; messages that would
//! collide in a switch or on a line go to different passes. Three families
//! of schedulers are provided:
//!
//! * [`wm_schedule`]: first-fit greedy over the window-method conflict pairs
//!   in input order.
//! * [`heuristic_schedule`]: the same greedy partition, but visiting messages
//!   in one of four orders (by address or by conflict-graph degree).
//! * [`asa_schedule`] / [`rsa_schedule`]: two-pass address and route
//!   selection. Both split the set into a preferred first pass and a
//!   remainder, then demote first-pass members until the pass satisfies the
//!   pass conflict rule.
//!
//! The two-pass schedulers run in one of two [`ResolutionMode`]s. In
//! `Paper` mode the pass rule is applied once, to the first pass only, and
//! the remainder is emitted as-is; any residual conflicts show up in the
//! per-pass reports but trigger no further action. `Strict` mode re-resolves
//! every emitted pass against the full oracle, so demotions cascade into
//! additional passes until all passes are clean.

use std::cmp::Reverse;
use std::collections::BTreeSet;

use crate::conflict::{
    conflict_report_among, iwm_conflict_matrix, link_conflicts_among, rsa_conflict_matrix,
    switch_conflicts_among, wm_conflict_pairs, CombinationMatrix, ConflictMatrix, ConflictReport,
    MessageSet,
};
use crate::error::{Error, Result};
use crate::topology::{Address, NetworkConfig};

/// Scheduling algorithm selector. `id` values are the command line tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Wm,
    HeurAsc,
    HeurDesc,
    HeurMin,
    HeurMax,
    Asa,
    Rsa,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Wm,
        Algorithm::HeurAsc,
        Algorithm::HeurDesc,
        Algorithm::HeurMin,
        Algorithm::HeurMax,
        Algorithm::Asa,
        Algorithm::Rsa,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Algorithm::Wm => "wm",
            Algorithm::HeurAsc => "heur-asc",
            Algorithm::HeurDesc => "heur-desc",
            Algorithm::HeurMin => "heur-min",
            Algorithm::HeurMax => "heur-max",
            Algorithm::Asa => "asa",
            Algorithm::Rsa => "rsa",
        }
    }

    pub fn from_id(id: &str) -> Option<Algorithm> {
        Algorithm::ALL.into_iter().find(|a| a.id() == id)
    }

    /// Smallest network the algorithm is defined for.
    pub fn min_size(self) -> usize {
        match self {
            Algorithm::Asa | Algorithm::Rsa => 8,
            _ => 4,
        }
    }

    fn strategy(self) -> Option<HeuristicStrategy> {
        match self {
            Algorithm::HeurAsc => Some(HeuristicStrategy::Ascending),
            Algorithm::HeurDesc => Some(HeuristicStrategy::Descending),
            Algorithm::HeurMin => Some(HeuristicStrategy::MinDegree),
            Algorithm::HeurMax => Some(HeuristicStrategy::MaxDegree),
            _ => None,
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id())
    }
}

/// How far the two-pass schedulers go when resolving conflicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ResolutionMode {
    /// Resolve the first pass once with the algorithm's own pass rule
    /// (first-stage pairs for address selection, link collisions for route
    /// selection) and emit the remainder unchanged. Exactly one or two
    /// passes; residual conflicts are reported, not acted on.
    #[default]
    Paper,
    /// Re-resolve every pass against the full oracle (switch oracle for
    /// address selection, link oracle for route selection); demotions open
    /// further passes until every pass is clean.
    Strict,
}

impl ResolutionMode {
    pub fn id(self) -> &'static str {
        match self {
            ResolutionMode::Paper => "paper",
            ResolutionMode::Strict => "strict",
        }
    }

    pub fn from_id(id: &str) -> Option<ResolutionMode> {
        match id {
            "paper" => Some(ResolutionMode::Paper),
            "strict" => Some(ResolutionMode::Strict),
            _ => None,
        }
    }
}

impl std::fmt::Display for ResolutionMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id())
    }
}

/// Visiting order for the greedy heuristic scheduler.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeuristicStrategy {
    Ascending,
    Descending,
    MinDegree,
    MaxDegree,
}

impl HeuristicStrategy {
    pub fn id(self) -> &'static str {
        match self {
            HeuristicStrategy::Ascending => "ascending",
            HeuristicStrategy::Descending => "descending",
            HeuristicStrategy::MinDegree => "min-degree",
            HeuristicStrategy::MaxDegree => "max-degree",
        }
    }
}

/// Intermediate state of the scheduler that produced a [`Schedule`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScheduleTrace {
    Greedy {
        strategy: Option<HeuristicStrategy>,
        /// Visiting order (message indices).
        order: Vec<usize>,
    },
    Asa(AsaTrace),
    Rsa(RsaTrace),
}

/// Address-selection intermediates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsaTrace {
    /// The four middle transposed combination-matrix rows.
    pub middle_rows: [Vec<u8>; 4],
    /// Componentwise sum of the first two middle rows.
    pub first_pair_sum: Vec<u8>,
    /// Componentwise sum of the last two middle rows.
    pub second_pair_sum: Vec<u8>,
    /// first_pair_sum - second_pair_sum, per message.
    pub diff: Vec<i8>,
    /// Messages with diff <= 0, before resolution (indices).
    pub initial_pass1: Vec<usize>,
    /// Messages demoted out of pass 1, in demotion order.
    pub demoted: Vec<usize>,
}

/// Route-selection intermediates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsaTrace {
    /// Row sums of the route conflict matrix, indexed by source address.
    pub row_sums: Vec<u32>,
    /// Pass-1 candidates after the top-two move, in selection order.
    pub selected_list: Vec<usize>,
    /// Remaining messages after the move, before demotions arrive.
    pub conflicted_list: Vec<usize>,
    /// Messages demoted out of pass 1, in demotion order.
    pub demoted: Vec<usize>,
}

/// A partition of a message set into ordered passes, with a conflict report
/// per pass and the scheduler's intermediate state.
#[derive(Debug, Clone)]
pub struct Schedule {
    cfg: NetworkConfig,
    algorithm: Algorithm,
    mode: ResolutionMode,
    sources: Vec<Address>,
    full_permutation: bool,
    passes: Vec<Vec<usize>>,
    reports: Vec<ConflictReport>,
    trace: ScheduleTrace,
}

impl Schedule {
    fn assemble(
        ms: &MessageSet,
        algorithm: Algorithm,
        mode: ResolutionMode,
        passes: Vec<Vec<usize>>,
        trace: ScheduleTrace,
    ) -> Result<Schedule> {
        let passes: Vec<Vec<usize>> = passes.into_iter().filter(|p| !p.is_empty()).collect();
        verify_partition(ms.len(), &passes)?;
        let reports = passes
            .iter()
            .map(|p| conflict_report_among(ms, p))
            .collect();
        Ok(Schedule {
            cfg: *ms.config(),
            algorithm,
            mode,
            sources: ms.entries().iter().map(|&(s, _)| s).collect(),
            full_permutation: ms.is_permutation(),
            passes,
            reports,
            trace,
        })
    }

    pub fn config(&self) -> &NetworkConfig {
        &self.cfg
    }

    pub fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    pub fn mode(&self) -> ResolutionMode {
        self.mode
    }

    /// True when the scheduled set was a full permutation of 0..N-1.
    pub fn full_permutation(&self) -> bool {
        self.full_permutation
    }

    /// Passes as message indices into the scheduled set.
    pub fn passes(&self) -> &[Vec<usize>] {
        &self.passes
    }

    pub fn pass_count(&self) -> usize {
        self.passes.len()
    }

    /// Source address of each scheduled message, by index.
    pub fn sources(&self) -> &[Address] {
        &self.sources
    }

    /// One pass rendered as source address values.
    pub fn pass_sources(&self, pass: usize) -> Vec<u32> {
        self.passes[pass]
            .iter()
            .map(|&i| self.sources[i].0)
            .collect()
    }

    /// Conflict analysis of each pass, index-aligned with [`passes`].
    ///
    /// [`passes`]: Schedule::passes
    pub fn reports(&self) -> &[ConflictReport] {
        &self.reports
    }

    pub fn trace(&self) -> &ScheduleTrace {
        &self.trace
    }
}

/// Check that `passes` covers each of `len` message indices exactly once.
pub fn verify_partition(len: usize, passes: &[Vec<usize>]) -> Result<()> {
    let mut seen = vec![false; len];
    let mut count = 0usize;
    for pass in passes {
        for &i in pass {
            if i >= len || seen[i] {
                return Err(Error::Invariant(format!(
                    "passes do not partition the message set: index {i} repeated or out of range"
                )));
            }
            seen[i] = true;
            count += 1;
        }
    }
    if count != len {
        return Err(Error::Invariant(format!(
            "passes cover {count} of {len} messages"
        )));
    }
    Ok(())
}

/// First-fit partition: each message, visited in `order`, joins the earliest
/// pass containing nothing it conflicts with; a new pass opens when none
/// fits. Returns the passes as index lists in placement order.
pub fn greedy_partition(
    ms: &MessageSet,
    conflict_pairs: &BTreeSet<(usize, usize)>,
    order: &[usize],
) -> Result<Vec<Vec<usize>>> {
    let mut seen = vec![false; ms.len()];
    for &i in order {
        if i >= ms.len() || seen[i] {
            return Err(Error::InvalidOrder { expected: ms.len() });
        }
        seen[i] = true;
    }
    if order.len() != ms.len() {
        return Err(Error::InvalidOrder { expected: ms.len() });
    }

    let conflicts = |a: usize, b: usize| conflict_pairs.contains(&(a.min(b), a.max(b)));
    let mut passes: Vec<Vec<usize>> = Vec::new();
    for &i in order {
        match passes
            .iter_mut()
            .find(|pass| pass.iter().all(|&j| !conflicts(i, j)))
        {
            Some(pass) => pass.push(i),
            None => passes.push(vec![i]),
        }
    }
    Ok(passes)
}

/// Message visiting order for [`heuristic_schedule`]: by source address
/// (ascending or descending) or by symmetrized conflict-graph degree, ties
/// broken by ascending source address.
pub fn heuristic_order(
    ms: &MessageSet,
    cm: &ConflictMatrix,
    strategy: HeuristicStrategy,
) -> Vec<usize> {
    let mut order: Vec<usize> = (0..ms.len()).collect();
    let src = |i: &usize| ms.source(*i).0;
    match strategy {
        HeuristicStrategy::Ascending => order.sort_by_key(src),
        HeuristicStrategy::Descending => order.sort_by_key(|i| Reverse(src(i))),
        HeuristicStrategy::MinDegree => order.sort_by_key(|i| (cm.degree(src(i) as usize), src(i))),
        HeuristicStrategy::MaxDegree => {
            order.sort_by_key(|i| (Reverse(cm.degree(src(i) as usize)), src(i)))
        }
    }
    order
}

/// Greedy partition over the window-method conflict pairs, in input order.
pub fn wm_schedule(ms: &MessageSet) -> Result<Schedule> {
    let pairs = wm_conflict_pairs(ms);
    let order: Vec<usize> = (0..ms.len()).collect();
    let passes = greedy_partition(ms, &pairs, &order)?;
    Schedule::assemble(
        ms,
        Algorithm::Wm,
        ResolutionMode::Paper,
        passes,
        ScheduleTrace::Greedy {
            strategy: None,
            order,
        },
    )
}

/// Greedy partition in a heuristic order; degrees come from the
/// improved-window conflict matrix.
pub fn heuristic_schedule(ms: &MessageSet, strategy: HeuristicStrategy) -> Result<Schedule> {
    let matrix = iwm_conflict_matrix(ms);
    let order = heuristic_order(ms, &matrix, strategy);
    let pairs = wm_conflict_pairs(ms);
    let passes = greedy_partition(ms, &pairs, &order)?;
    let algorithm = match strategy {
        HeuristicStrategy::Ascending => Algorithm::HeurAsc,
        HeuristicStrategy::Descending => Algorithm::HeurDesc,
        HeuristicStrategy::MinDegree => Algorithm::HeurMin,
        HeuristicStrategy::MaxDegree => Algorithm::HeurMax,
    };
    Schedule::assemble(
        ms,
        algorithm,
        ResolutionMode::Paper,
        passes,
        ScheduleTrace::Greedy {
            strategy: Some(strategy),
            order,
        },
    )
}

/// The four middle transposed rows of a combination matrix: for an n-stage
/// network these are rows n-2 ..= n+1 of the 2n-row transpose (the first and
/// last n-2 rows are dropped).
pub fn asa_middle_rows(cm: &CombinationMatrix) -> Result<[Vec<u8>; 4]> {
    let n = cm.width() / 2;
    if n < 3 {
        return Err(Error::NetworkTooSmall {
            algorithm: "address selection",
            size: 1usize << n,
        });
    }
    Ok([
        cm.transposed_row(n - 2),
        cm.transposed_row(n - 1),
        cm.transposed_row(n),
        cm.transposed_row(n + 1),
    ])
}

/// Per message: (first row + second row) - (third row + fourth row).
/// Components always lie in [-2, 2].
pub fn asa_diff_vector(rows: &[Vec<u8>; 4]) -> Result<Vec<i8>> {
    let len = rows[0].len();
    for row in rows.iter() {
        if row.len() != len {
            return Err(Error::RaggedRows {
                expected: len,
                got: row.len(),
            });
        }
    }
    Ok((0..len)
        .map(|j| (rows[0][j] + rows[1][j]) as i8 - (rows[2][j] + rows[3][j]) as i8)
        .collect())
}

/// Which conflicts count when resolving a pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairRule {
    /// First-stage switch sharing only (for full permutations: source
    /// addresses i and i + N/2 scheduled together).
    Stage0,
    /// Switch sharing at any stage.
    SwitchOracle,
    /// Line sharing at any boundary.
    LinkOracle,
}

/// A conflicting pair tagged with where it occurs, used to order demotions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocatedPair {
    /// Stage (switch rules) or boundary (link rule).
    pub slot: u32,
    /// Switch or line index within the slot.
    pub unit: u32,
    pub pair: (usize, usize),
}

fn located_pairs(ms: &MessageSet, kept: &[usize], rule: PairRule) -> Vec<LocatedPair> {
    match rule {
        PairRule::Stage0 => switch_conflicts_among(ms, kept)
            .occurrences
            .iter()
            .filter(|o| o.stage == 0)
            .map(|o| LocatedPair {
                slot: o.stage,
                unit: o.switch,
                pair: o.pair,
            })
            .collect(),
        PairRule::SwitchOracle => switch_conflicts_among(ms, kept)
            .occurrences
            .iter()
            .map(|o| LocatedPair {
                slot: o.stage,
                unit: o.switch,
                pair: o.pair,
            })
            .collect(),
        PairRule::LinkOracle => link_conflicts_among(ms, kept)
            .occurrences
            .iter()
            .map(|o| LocatedPair {
                slot: o.boundary,
                unit: o.line,
                pair: o.pair,
            })
            .collect(),
    }
}

/// Shrink `pass` until `rule` reports no conflicts: repeatedly take the
/// conflict at the smallest (slot, unit, addresses) position and demote its
/// lower-addressed member. Returns the surviving pass (original order) and
/// the demoted messages in demotion order. Deterministic; at most one
/// demotion per message.
pub fn resolve_pairs(ms: &MessageSet, pass: &[usize], rule: PairRule) -> (Vec<usize>, Vec<usize>) {
    let mut kept = pass.to_vec();
    let mut demoted = Vec::new();
    loop {
        let candidates = located_pairs(ms, &kept, rule);
        let Some(first) = candidates.iter().min_by_key(|c| {
            let (a, b) = c.pair;
            let (sa, sb) = (ms.source(a).0, ms.source(b).0);
            (c.slot, c.unit, sa.min(sb), sa.max(sb))
        }) else {
            break;
        };
        let (a, b) = first.pair;
        let loser = if ms.source(a).0 < ms.source(b).0 {
            a
        } else {
            b
        };
        kept.retain(|&i| i != loser);
        demoted.push(loser);
    }
    (kept, demoted)
}

/// Emit `pool` as one clean pass per resolution round: resolve, emit the
/// kept messages, and carry demotions into the next round.
fn resolve_cascade(
    ms: &MessageSet,
    mut pool: Vec<usize>,
    rule: PairRule,
    passes: &mut Vec<Vec<usize>>,
) {
    while !pool.is_empty() {
        let (kept, demoted) = resolve_pairs(ms, &pool, rule);
        passes.push(kept);
        pool = demoted;
    }
}

/// Two-pass address selection. Messages whose middle-row difference is
/// non-positive form the first pass; conflicts are resolved out of it per
/// the mode's rule; everything else (and the demotions) forms the second
/// pass. Partial message sets are accepted; the difference vector then runs
/// over the present messages only.
pub fn asa_schedule(ms: &MessageSet, mode: ResolutionMode) -> Result<Schedule> {
    if ms.config().size() < 8 {
        return Err(Error::NetworkTooSmall {
            algorithm: "address selection",
            size: ms.config().size(),
        });
    }
    let cm = ms.combination_matrix();
    let middle_rows = asa_middle_rows(&cm)?;
    let diff = asa_diff_vector(&middle_rows)?;
    let first_pair_sum: Vec<u8> = (0..diff.len())
        .map(|j| middle_rows[0][j] + middle_rows[1][j])
        .collect();
    let second_pair_sum: Vec<u8> = (0..diff.len())
        .map(|j| middle_rows[2][j] + middle_rows[3][j])
        .collect();

    let initial_pass1: Vec<usize> = (0..ms.len()).filter(|&j| diff[j] <= 0).collect();
    let positives: Vec<usize> = (0..ms.len()).filter(|&j| diff[j] > 0).collect();

    let rule = match mode {
        ResolutionMode::Paper => PairRule::Stage0,
        ResolutionMode::Strict => PairRule::SwitchOracle,
    };
    let (pass1, demoted) = resolve_pairs(ms, &initial_pass1, rule);
    let remaining: Vec<usize> = positives.iter().chain(&demoted).copied().collect();

    let mut passes = vec![pass1];
    match mode {
        ResolutionMode::Paper => passes.push(remaining),
        ResolutionMode::Strict => resolve_cascade(ms, remaining, rule, &mut passes),
    }

    let trace = ScheduleTrace::Asa(AsaTrace {
        middle_rows,
        first_pair_sum,
        second_pair_sum,
        diff,
        initial_pass1,
        demoted,
    });
    Schedule::assemble(ms, Algorithm::Asa, mode, passes, trace)
}

/// Two-pass route selection. Messages with a zero row sum in the route
/// conflict matrix are selected, the two highest-addressed others join them,
/// link conflicts are resolved out of the selection, and the rest (plus
/// demotions) forms the second pass.
pub fn rsa_schedule(ms: &MessageSet, mode: ResolutionMode) -> Result<Schedule> {
    let matrix = rsa_conflict_matrix(ms)?;
    let row_sums = matrix.sums().to_vec();

    let mut selected: Vec<usize> = Vec::new();
    let mut conflicted: Vec<usize> = Vec::new();
    for i in 0..ms.len() {
        if row_sums[ms.source(i).0 as usize] == 0 {
            selected.push(i);
        } else {
            conflicted.push(i);
        }
    }

    // Move the two highest source addresses (all, if at most two remain)
    // from the conflicted side into the selection, lower address first.
    conflicted.sort_by_key(|&i| ms.source(i).0);
    let keep = conflicted.len().saturating_sub(2);
    let moved = conflicted.split_off(keep);
    selected.extend(moved);

    let (pass1, demoted) = resolve_pairs(ms, &selected, PairRule::LinkOracle);
    let remaining: Vec<usize> = conflicted.iter().chain(&demoted).copied().collect();

    let mut passes = vec![pass1];
    match mode {
        ResolutionMode::Paper => passes.push(remaining),
        ResolutionMode::Strict => resolve_cascade(ms, remaining, PairRule::LinkOracle, &mut passes),
    }

    let trace = ScheduleTrace::Rsa(RsaTrace {
        row_sums,
        selected_list: selected,
        conflicted_list: conflicted,
        demoted,
    });
    Schedule::assemble(ms, Algorithm::Rsa, mode, passes, trace)
}

/// Run the selected algorithm. The mode only affects address and route
/// selection; the greedy schedulers ignore it.
pub fn run_algorithm(
    ms: &MessageSet,
    algorithm: Algorithm,
    mode: ResolutionMode,
) -> Result<Schedule> {
    match algorithm {
        Algorithm::Wm => wm_schedule(ms),
        Algorithm::Asa => asa_schedule(ms, mode),
        Algorithm::Rsa => rsa_schedule(ms, mode),
        heur => heuristic_schedule(ms, heur.strategy().expect("heuristic variant")),
    }
}
