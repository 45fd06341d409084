//! The complete anonymization strategy with lower and upper bounds.
//!
//! 1. Find the cheapest k-anonymous targets with the classic DP (optionally on
//!    the reduced sequence) and filter them through the realizability test.
//! 2. If none survives, keep raising the cost with a table that is exhaustive
//!    up to a fixed margin; every cost with no surviving target is excluded
//!    from the lower bound.
//! 3. Surviving targets go to Phase 2. A realized target at the lower bound
//!    is optimal; otherwise wasted targets give upper bounds.

use std::time::{Duration, Instant};

use log::{debug, info};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dp::{degree_cap, AnonymizationSolution, DpSpace, DpTable};
use crate::graph::{EdgeInsertionSet, Graph};
use crate::realizability::{advanced_erdos_gallai_test, erdos_gallai_blocks, EGVerdict, Wasting};
use crate::realize::{mix_seed, realize, verify_insertion, RealizeConfig};
use crate::reduction::apply_reduction_rule;
use crate::sequence::{difference, BlockSequence};

/// The k values of the original experiments.
pub const DEFAULT_K_LIST: [usize; 13] = [2, 3, 4, 5, 7, 10, 15, 20, 30, 50, 100, 150, 200];

/// Above this many transition checks per cost level, the exhaustive table is
/// not built and the lower bound stays at the classic minimum.
const EXHAUSTIVE_WORK_LIMIT: u128 = 400_000_000;

/// Realization schedule for wasted targets, which are tried for many
/// amounts of waste.
const WASTE_MAPPINGS: usize = 10;
const WASTE_TRIALS: usize = 5;

/// Largest graph for which the complete graph is used as a fallback upper
/// bound.
const COMPLETE_FALLBACK_MAX_N: usize = 2000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub k_list: Vec<usize>,
    /// Seconds per k; zero or negative disables the limit.
    pub time_limit_s: f64,
    pub seed: u64,
    pub mappings: usize,
    pub trials: usize,
    pub max_jump_blocks: usize,
    pub jump_count_cap: usize,
    pub reduction: bool,
    pub advanced_eg: bool,
    /// Increments that may be wasted per target; `None` means `4Δ`.
    pub waste_budget: Option<usize>,
    /// Targets enumerated per cost before the enumeration counts as truncated.
    pub enumeration_limit: usize,
    /// Passing targets handed to Phase 2 per cost.
    pub targets_per_cost: usize,
    /// Wasted candidates tried per amount of waste.
    pub waste_candidates: usize,
    /// How far above the classic minimum the exhaustive table reaches.
    pub certify_margin: u64,
    /// Keep every tested Phase 1 solution in the outcome.
    pub keep_solutions: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let r = RealizeConfig::default();
        SolverConfig {
            k_list: DEFAULT_K_LIST.to_vec(),
            time_limit_s: 3600.0,
            seed: 0,
            mappings: r.mappings,
            trials: r.trials,
            max_jump_blocks: r.max_jump_blocks,
            jump_count_cap: r.jump_count_cap,
            reduction: true,
            advanced_eg: true,
            waste_budget: None,
            enumeration_limit: 10_000,
            targets_per_cost: 32,
            waste_candidates: 16,
            certify_margin: 16,
            keep_solutions: false,
        }
    }
}

impl SolverConfig {
    pub fn realize_config(&self) -> RealizeConfig {
        RealizeConfig {
            mappings: self.mappings,
            trials: self.trials,
            max_jump_blocks: self.max_jump_blocks,
            jump_count_cap: self.jump_count_cap,
        }
    }

    /// Rejects k below 2 and zero counts.
    pub fn validate(&self) -> crate::Result<()> {
        let bad = |what: &str| Err(crate::Error::InvalidArgument(what.to_string()));
        if let Some(k) = self.k_list.iter().find(|&&k| k < 2) {
            return bad(&format!("k must be at least 2, got {k}"));
        }
        if self.mappings == 0 || self.trials == 0 {
            return bad("mappings and trials must be at least 1");
        }
        if self.enumeration_limit == 0 || self.targets_per_cost == 0 || self.waste_candidates == 0 {
            return bad("enumeration limits must be at least 1");
        }
        if self.time_limit_s.is_nan() {
            return bad("time limit is not a number");
        }
        Ok(())
    }

    fn time_limit(&self) -> Option<Duration> {
        (self.time_limit_s > 0.0).then(|| Duration::from_secs_f64(self.time_limit_s))
    }
}

/// How much the reported lower bound can be trusted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LowerBoundStatus {
    /// Every excluded cost was checked exhaustively.
    Certified,
    /// Some excluded cost had its enumeration truncated.
    BestEffort,
}

/// Where the upper bound comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UpperBoundSource {
    /// A Phase 1 target realized as is.
    Realized,
    /// A target with wasted increments.
    Wasted,
    /// All missing edges.
    CompleteGraph,
}

/// Bounds for one graph and one k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub graph: String,
    pub n: usize,
    pub m: usize,
    pub delta: usize,
    pub k: usize,
    pub lower_bound_edges: u64,
    pub upper_bound_edges: Option<u64>,
    pub optimal: bool,
    /// Minimum increments of any k-anonymous target, realizable or not.
    pub phase1_cost: Option<u64>,
    /// Increments of the certified lower bound.
    pub lower_bound_cost: u64,
    pub lower_bound_status: LowerBoundStatus,
    pub upper_bound_source: Option<UpperBoundSource>,
    /// Increments wasted by the upper bound target.
    pub waste: Option<u64>,
    /// Number of jumped blocks in the successful mapping.
    pub jump_blocks_used: Option<usize>,
    pub solutions_tested: u64,
    pub phase2_attempts: u64,
    pub reduction_substitutions: usize,
    /// Wall time outside Phase 2 realization.
    pub phase1_time_ms: u64,
    pub phase2_time_ms: u64,
    pub seed: u64,
    pub timed_out: bool,
    /// `k` exceeds the vertex count: no k-anonymous graph exists.
    pub infeasible: bool,
}

impl BoundsReport {
    pub const CSV_HEADER: [&'static str; 13] = [
        "graph", "n", "m", "delta", "k", "solution_size", "dp_lower", "dp_upper", "optimal",
        "phase1_ms", "phase2_ms", "timed_out", "lower_bound_status",
    ];

    /// One CSV row matching [`BoundsReport::CSV_HEADER`].
    pub fn csv_record(&self) -> Vec<String> {
        let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
        vec![
            self.graph.clone(),
            self.n.to_string(),
            self.m.to_string(),
            self.delta.to_string(),
            self.k.to_string(),
            if self.optimal { opt(self.upper_bound_edges) } else { String::new() },
            self.lower_bound_edges.to_string(),
            opt(self.upper_bound_edges),
            self.optimal.to_string(),
            self.phase1_time_ms.to_string(),
            self.phase2_time_ms.to_string(),
            self.timed_out.to_string(),
            match self.lower_bound_status {
                LowerBoundStatus::Certified => "certified".into(),
                LowerBoundStatus::BestEffort => "best-effort".into(),
            },
        ]
    }

    /// The report with timing fields zeroed, for comparisons across runs.
    pub fn without_timings(&self) -> Self {
        BoundsReport { phase1_time_ms: 0, phase2_time_ms: 0, ..self.clone() }
    }
}

/// A Phase 1 solution and whether it passed the realizability test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestedSolution {
    #[serde(flatten)]
    pub solution: AnonymizationSolution,
    pub verdict: EGVerdict,
}

/// Everything [`solve`] produces.
#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub report: BoundsReport,
    /// The insertion set behind the upper bound.
    pub insertion: Option<EdgeInsertionSet>,
    /// Tested Phase 1 solutions, if requested.
    pub solutions: Vec<TestedSolution>,
}

/// How completely one cost level was enumerated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Scan {
    Complete,
    /// More targets than the enumeration limit.
    Truncated,
    /// The deadline passed; nothing can be concluded.
    Interrupted,
}

struct Clock {
    deadline: Option<Instant>,
}

impl Clock {
    fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

struct Run<'a> {
    g: &'a Graph,
    k: usize,
    cfg: &'a SolverConfig,
    clock: Clock,
    source: BlockSequence,
    report: BoundsReport,
    insertion: Option<EdgeInsertionSet>,
    solutions: Vec<TestedSolution>,
    phase2: Duration,
}

impl Run<'_> {
    fn test(&mut self, sol: &AnonymizationSolution) -> EGVerdict {
        self.report.solutions_tested += 1;
        let verdict = if self.cfg.advanced_eg {
            advanced_erdos_gallai_test(self.g, sol)
        } else {
            difference(&sol.target, &self.source)
                .map(|d| erdos_gallai_blocks(d.blocks()))
                .unwrap_or(EGVerdict { realizable: false, first_failing_r: Some(0), parity_ok: true })
        };
        if self.cfg.keep_solutions {
            self.solutions.push(TestedSolution { solution: sol.clone(), verdict });
        }
        verdict
    }

    /// Enumerates targets of cost `c` and keeps those passing the test.
    fn passing_at(&mut self, table: &mut DpTable, c: u64, translate: u64) -> (Vec<AnonymizationSolution>, Scan) {
        let limit = self.cfg.enumeration_limit.max(1);
        let mut passing = Vec::new();
        let mut seen = 0;
        let sols: Vec<AnonymizationSolution> = match table.solutions(c, limit + 1) {
            Ok(it) => it.collect(),
            Err(_) => return (passing, Scan::Complete),
        };
        let scan = if sols.len() > limit { Scan::Truncated } else { Scan::Complete };
        for sol in sols.into_iter().take(limit) {
            if self.clock.expired() {
                self.report.timed_out = true;
                return (passing, Scan::Interrupted);
            }
            seen += 1;
            let sol = if translate > 0 {
                AnonymizationSolution::from_target(&self.source, sol.target).expect("reduced targets dominate")
            } else {
                sol
            };
            if self.test(&sol).realizable {
                passing.push(sol);
            }
        }
        debug!("k={} cost {}: {} of {} targets pass", self.k, c + translate, passing.len(), seen);
        (passing, scan)
    }

    /// Tries to realize each target; keeps the first success.
    fn realize_all(&mut self, sols: &[AnonymizationSolution], source: UpperBoundSource, waste: u64) -> bool {
        let mut rcfg = self.cfg.realize_config();
        if source == UpperBoundSource::Wasted {
            rcfg = RealizeConfig {
                mappings: rcfg.mappings.min(WASTE_MAPPINGS),
                trials: rcfg.trials.min(WASTE_TRIALS),
                max_jump_blocks: 0,
                ..rcfg
            };
        }
        let seed = mix_seed(self.cfg.seed, self.k as u64, 0);
        let start = Instant::now();
        let mut found = false;
        for (i, sol) in sols.iter().enumerate() {
            if self.clock.expired() {
                self.report.timed_out = true;
                break;
            }
            let out = realize(self.g, sol, &rcfg, mix_seed(seed, i as u64, sol.cost), self.clock.deadline);
            self.report.phase2_attempts += out.attempts;
            self.report.timed_out |= out.timed_out;
            if let Some(s) = out.insertion {
                self.offer_upper(s, source, waste, out.jumps.map(|j| j.alpha()));
                found = true;
                break;
            }
        }
        self.phase2 += start.elapsed();
        found
    }

    fn offer_upper(&mut self, s: EdgeInsertionSet, source: UpperBoundSource, waste: u64, jumps: Option<usize>) {
        let rep = verify_insertion(self.g, &s, self.k);
        assert!(rep.valid, "Phase 2 produced an invalid insertion set: {:?}", rep.violations);
        let edges = s.len() as u64;
        if self.report.upper_bound_edges.is_none_or(|u| edges < u) {
            self.report.upper_bound_edges = Some(edges);
            self.report.upper_bound_source = Some(source);
            self.report.waste = Some(waste);
            self.report.jump_blocks_used = jumps;
            self.insertion = Some(s);
        }
    }

    fn realize_targets(&mut self, sols: &[AnonymizationSolution]) -> bool {
        let n = sols.len().min(self.cfg.targets_per_cost.max(1));
        self.realize_all(&sols[..n], UpperBoundSource::Realized, 0)
    }

    fn upper_cost(&self) -> Option<u64> {
        self.report.upper_bound_edges.map(|e| 2 * e)
    }

    /// Upper bounds from wasting on top of `bases`.
    fn waste_from(&mut self, bases: &[AnonymizationSolution]) {
        let budget = self.cfg.waste_budget.unwrap_or(4 * self.g.max_degree().max(1));
        for base in bases {
            let mut wasting = Wasting::new(self.g, base, self.k);
            for w in 1..=budget as u64 {
                if self.clock.expired() {
                    self.report.timed_out = true;
                    return;
                }
                if (base.cost + w) % 2 == 1 {
                    continue;
                }
                if self.upper_cost().is_some_and(|u| base.cost + w >= u) {
                    break;
                }
                let cands: Vec<AnonymizationSolution> = wasting
                    .candidates(w as usize, self.cfg.waste_candidates.max(1))
                    .into_iter()
                    .filter(|c| advanced_erdos_gallai_test(self.g, c).realizable)
                    .collect();
                if !cands.is_empty() && self.realize_all(&cands, UpperBoundSource::Wasted, w) {
                    break;
                }
            }
        }
    }

    fn complete_graph_fallback(&mut self) {
        let n = self.g.n();
        if self.report.upper_bound_edges.is_some() || n > COMPLETE_FALLBACK_MAX_N || self.k > n {
            return;
        }
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|&(u, v)| !self.g.has_edge(u, v)).collect();
        let s = EdgeInsertionSet::from_pairs(pairs).expect("distinct pairs");
        self.offer_upper(s, UpperBoundSource::CompleteGraph, 0, None);
    }

    /// Raises the lower bound past cost `c`, which had no passing target.
    fn exclude(&mut self, c: u64, scan: Scan) {
        if scan == Scan::Truncated {
            self.report.lower_bound_status = LowerBoundStatus::BestEffort;
        }
        self.set_lower(c + 1);
    }

    fn set_lower(&mut self, cost: u64) {
        self.report.lower_bound_cost = cost;
        self.report.lower_bound_edges = cost.div_ceil(2);
    }

    /// Space that contains every target of cost at most `c_max` whose
    /// degrees stay below the cap any minimum insertion set respects.
    fn exhaustive_space(&self, c_max: u64) -> Option<DpSpace> {
        let n = self.g.n();
        let delta = self.source.max_degree();
        let window = (2 * self.k).max(c_max as usize + 1).min(n + 1);
        let max_degree = degree_cap(n, delta).min(delta + c_max as usize);
        let work = (max_degree as u128 + 1) * (window as u128) * (window as u128);
        (work <= EXHAUSTIVE_WORK_LIMIT).then_some(DpSpace { window, max_degree, raised_only_blocks: true })
    }

    fn run(&mut self) {
        let k = self.k;
        let (reduced, log) = if self.cfg.reduction {
            apply_reduction_rule(&self.source, k)
        } else {
            (self.source.clone(), Default::default())
        };
        self.report.reduction_substitutions = log.substitutions.len();
        let shift = log.cost();

        // Classic minimum, polled level by level.
        let mut classic = DpTable::classic(&reduced, k);
        let mut s0 = None;
        for c in 0..=classic.max_cost() {
            if self.clock.expired() {
                self.report.timed_out = true;
                break;
            }
            if classic.feasible(c) {
                s0 = Some(c);
                break;
            }
            self.set_lower(c + 1 + shift);
        }
        let Some(s0_red) = s0 else {
            self.complete_graph_fallback();
            return;
        };
        let s0 = s0_red + shift;
        self.report.phase1_cost = Some(s0);
        self.set_lower(s0);
        info!("k={k}: classic minimum {s0} increments ({} substitutions)", log.substitutions.len());

        let (passing, s0_scan) = self.passing_at(&mut classic, s0_red, shift);
        let s0_solutions: Vec<AnonymizationSolution> = match classic.solutions(s0_red, 8) {
            Ok(it) => it
                .map(|s| AnonymizationSolution::from_target(&self.source, s.target).expect("dominates"))
                .collect(),
            Err(_) => Vec::new(),
        };
        drop(classic);

        // The lower bound is settled by the first cost with a passing target.
        let mut settled = !passing.is_empty();
        let mut bases = passing.clone();
        let mut done = settled && self.realize_targets(&passing);

        // Climb with a table exhaustive up to the margin.
        let c_max = s0 + self.cfg.certify_margin;
        if !done && !self.report.timed_out {
            if let Some(space) = self.exhaustive_space(c_max) {
                let mut table = DpTable::new(&self.source, k, space);
                // A reduced sequence may hide targets of cost s0; recheck it.
                let first = if log.is_empty() || settled { s0 + 1 } else { s0 };
                if !settled && first > s0 {
                    self.exclude(s0, s0_scan);
                }
                for c in first..=c_max {
                    if self.clock.expired() {
                        self.report.timed_out = true;
                        break;
                    }
                    let (p, scan) = if c % 2 == 1 || !table.feasible(c) {
                        (Vec::new(), Scan::Complete)
                    } else {
                        self.passing_at(&mut table, c, 0)
                    };
                    if scan == Scan::Interrupted {
                        break;
                    }
                    if p.is_empty() {
                        if !settled {
                            self.exclude(c, scan);
                        }
                        continue;
                    }
                    if !settled {
                        settled = true;
                        bases = p.clone();
                    }
                    if self.realize_targets(&p) {
                        done = true;
                        break;
                    }
                }
            }
        }

        if !done && !self.report.timed_out {
            if bases.is_empty() {
                bases = s0_solutions;
            }
            self.waste_from(&bases);
        }
        self.complete_graph_fallback();
    }
}

/// Runs the full strategy for one `k`. `graph_id` only labels the report.
pub fn solve(g: &Graph, k: usize, cfg: &SolverConfig, graph_id: &str) -> SolveOutcome {
    let start = Instant::now();
    let source = g.block_sequence();
    let report = BoundsReport {
        graph: graph_id.to_string(),
        n: g.n(),
        m: g.m(),
        delta: g.max_degree(),
        k,
        lower_bound_edges: 0,
        upper_bound_edges: None,
        optimal: false,
        phase1_cost: None,
        lower_bound_cost: 0,
        lower_bound_status: LowerBoundStatus::Certified,
        upper_bound_source: None,
        waste: None,
        jump_blocks_used: None,
        solutions_tested: 0,
        phase2_attempts: 0,
        reduction_substitutions: 0,
        phase1_time_ms: 0,
        phase2_time_ms: 0,
        seed: cfg.seed,
        timed_out: false,
        infeasible: false,
    };
    let mut run = Run {
        g,
        k,
        cfg,
        clock: Clock { deadline: cfg.time_limit().map(|d| start + d) },
        source,
        report,
        insertion: None,
        solutions: Vec::new(),
        phase2: Duration::ZERO,
    };
    if k > g.n() && g.n() > 0 {
        run.report.infeasible = true;
    } else if run.source.is_k_anonymous(k) {
        run.report.phase1_cost = Some(0);
        run.offer_upper(EdgeInsertionSet::new(), UpperBoundSource::Realized, 0, Some(0));
    } else {
        run.run();
    }
    let mut report = run.report;
    report.phase2_time_ms = run.phase2.as_millis() as u64;
    report.phase1_time_ms = start.elapsed().saturating_sub(run.phase2).as_millis() as u64;
    report.optimal = !report.infeasible
        && report.lower_bound_status == LowerBoundStatus::Certified
        && report.upper_bound_edges == Some(report.lower_bound_edges);
    SolveOutcome { report, insertion: run.insertion, solutions: run.solutions }
}

/// Solves every k of `cfg.k_list` independently, in parallel; reports come
/// back in list order.
pub fn sweep(g: &Graph, cfg: &SolverConfig, graph_id: &str) -> Vec<SolveOutcome> {
    cfg.k_list.par_iter().map(|&k| solve(g, k, cfg, graph_id)).collect()
}
