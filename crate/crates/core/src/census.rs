//! Exhaustive enumeration of curve configurations at bounded size, running
//! the theorem checkers over every in-hypothesis configuration and reporting
//! violations with a full reproduction recipe.
//!
//! Enumeration is deterministic: candidate classes in lexicographic
//! coefficient order, then all multisets of (class, multiplicity) pairs in
//! non-decreasing order, pruned by the pairwise non-negativity required of a
//! valid configuration. The stream is partitioned by the first vertex's
//! candidate index; workers process partitions independently and the report
//! merges them in partition order, so counts, violations and the stream
//! fingerprint are identical for any worker count.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::classify::{classify_codim1, check_dimension_bound, check_tree_theorem, Codim1Class};
use crate::config::{ConfigError, CurveConfiguration, Vertex};
use crate::lattice::{HomologyClass, IntersectionLattice, LatticeError};
use crate::moves::{applicable_moves, apply_move, Move, MoveError};
use crate::num::{cadd, cmul, Coeff, OverflowError};
use crate::rearrange::{is_rearranged, rearrange, RearrangeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Move(#[from] MoveError),
    #[error("invalid census bounds: {0}")]
    InvalidBounds(String),
    #[error("invalid blow-up seed {index}: {reason}")]
    InvalidSeed { index: usize, reason: String },
    #[error("census worker panicked")]
    WorkerPanicked,
}

impl From<OverflowError> for CensusError {
    fn from(e: OverflowError) -> Self {
        CensusError::Lattice(e.into())
    }
}

/// Which enumeration filters to apply before the checkers run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CensusFilters {
    pub require_connected: bool,
    pub require_nef: bool,
    pub require_genus0_total: bool,
}

/// Enumeration bounds: every class coefficient lies in
/// `[−coeff_bound, coeff_bound]`, multiplicities in `[1, max_mult]`, and at
/// most `max_vertices` vertices.
#[derive(Debug, Clone)]
pub struct CensusBounds<C: Coeff> {
    pub lattice: Arc<IntersectionLattice<C>>,
    pub max_vertices: usize,
    pub max_mult: C,
    pub coeff_bound: C,
    pub filters: CensusFilters,
}

impl<C: Coeff> CensusBounds<C> {
    pub fn new(
        lattice: Arc<IntersectionLattice<C>>,
        max_vertices: usize,
        max_mult: C,
        coeff_bound: C,
    ) -> Result<Self, CensusError> {
        if max_vertices == 0 {
            return Err(CensusError::InvalidBounds("max_vertices must be ≥ 1".into()));
        }
        if max_vertices > 64 {
            return Err(CensusError::InvalidBounds("max_vertices must be ≤ 64".into()));
        }
        if max_mult < C::one() {
            return Err(CensusError::InvalidBounds("max_mult must be ≥ 1".into()));
        }
        if coeff_bound < C::one() {
            return Err(CensusError::InvalidBounds("coeff_bound must be ≥ 1".into()));
        }
        Ok(CensusBounds {
            lattice,
            max_vertices,
            max_mult,
            coeff_bound,
            filters: CensusFilters::default(),
        })
    }

    pub fn with_filters(mut self, filters: CensusFilters) -> Self {
        self.filters = filters;
        self
    }
}

/// The theorem checkers the census can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Checker {
    GenusBound,
    Multi1,
    Tree,
    Dimension,
    Codim1,
    Moves,
}

impl Checker {
    pub const ALL: [Checker; 6] = [
        Checker::GenusBound,
        Checker::Multi1,
        Checker::Tree,
        Checker::Dimension,
        Checker::Codim1,
        Checker::Moves,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Checker::GenusBound => "genus_bound",
            Checker::Multi1 => "multi1",
            Checker::Tree => "tree",
            Checker::Dimension => "dimension",
            Checker::Codim1 => "codim1",
            Checker::Moves => "moves",
        }
    }

    pub fn from_name(name: &str) -> Option<Checker> {
        Checker::ALL.iter().copied().find(|c| c.name() == name)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CheckerStats {
    pub checked: u64,
    pub passed: u64,
    pub out_of_hypothesis: u64,
}

impl CheckerStats {
    fn merge(&mut self, other: &CheckerStats) {
        self.checked += other.checked;
        self.passed += other.passed;
        self.out_of_hypothesis += other.out_of_hypothesis;
    }
}

/// Cumulative funnel: every valid configuration, then those connected, then
/// additionally nef, then additionally of total genus 0, then those emitted
/// to the checkers after the requested filters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct StageCounts {
    pub valid: u64,
    pub connected: u64,
    pub nef: u64,
    pub genus0: u64,
    pub emitted: u64,
}

impl StageCounts {
    fn merge(&mut self, other: &StageCounts) {
        self.valid += other.valid;
        self.connected += other.connected;
        self.nef += other.nef;
        self.genus0 += other.genus0;
        self.emitted += other.emitted;
    }
}

/// Self-contained reproduction recipe for one violating configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ViolationRecord<C> {
    pub checker: String,
    pub gram: Vec<Vec<C>>,
    pub canonical: Vec<C>,
    pub vertices: Vec<(Vec<C>, C)>,
    pub detail: String,
}

impl<C: Coeff> ViolationRecord<C> {
    fn new(checker: Checker, cfg: &CurveConfiguration<C>, detail: String) -> Self {
        ViolationRecord {
            checker: checker.name().to_string(),
            gram: cfg.lattice().gram().to_vec(),
            canonical: cfg.lattice().canonical().coeffs().to_vec(),
            vertices: cfg
                .vertices()
                .iter()
                .map(|v| (v.class.coeffs().to_vec(), v.mult))
                .collect(),
            detail,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusReport<C> {
    pub candidate_classes: u64,
    pub stages: StageCounts,
    pub checkers: BTreeMap<String, CheckerStats>,
    pub violations: Vec<ViolationRecord<C>>,
    pub fingerprint: String,
    pub wall_ms: u128,
}

impl<C> CensusReport<C> {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

// FNV-1a, enough for a deterministic stream fingerprint.
#[derive(Clone, Copy)]
struct Fnv(u64);

impl Fnv {
    fn new() -> Self {
        Fnv(0xcbf2_9ce4_8422_2325)
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= u64::from(b);
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }

    fn write_i128(&mut self, x: i128) {
        self.write(&x.to_le_bytes());
    }

    fn finish(self) -> u64 {
        self.0
    }
}

/// Candidate classes with their pairwise pairing table and per-class
/// invariants.
struct Tables<C: Coeff> {
    classes: Vec<HomologyClass<C>>,
    pair: Vec<Vec<C>>,
    kdot: Vec<C>,
}

/// Enumerates every coefficient vector in `[−B, B]^rank` in lexicographic
/// order and keeps the classes with adjunction number at least −2. That is
/// the only class-level filter; effectiveness is assumed.
pub fn candidate_classes<C: Coeff>(
    lattice: &IntersectionLattice<C>,
    coeff_bound: C,
) -> Result<Vec<HomologyClass<C>>, CensusError> {
    let rank = lattice.rank();
    let minus_two = -(C::one() + C::one());
    let mut out = Vec::new();
    let mut current = vec![-coeff_bound; rank];
    loop {
        let class = HomologyClass::new(current.clone());
        if lattice.adjunction(&class)? >= minus_two {
            out.push(class);
        }
        let mut pos = rank;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            if current[pos] < coeff_bound {
                current[pos] = current[pos] + C::one();
                for c in current[pos + 1..].iter_mut() {
                    *c = -coeff_bound;
                }
                break;
            }
        }
    }
}

fn build_tables<C: Coeff>(bounds: &CensusBounds<C>) -> Result<Tables<C>, CensusError> {
    let classes = candidate_classes(&bounds.lattice, bounds.coeff_bound)?;
    let n = classes.len();
    let mut pair = vec![vec![C::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let p = bounds.lattice.pair(&classes[i], &classes[j])?;
            pair[i][j] = p;
            pair[j][i] = p;
        }
    }
    let mut kdot = Vec::with_capacity(n);
    for c in &classes {
        kdot.push(bounds.lattice.pair(bounds.lattice.canonical(), c)?);
    }
    Ok(Tables { classes, pair, kdot })
}

/// Stage flags for one enumerated multiset, computed from the tables.
#[derive(Clone, Copy)]
struct Flags<C> {
    connected: bool,
    nef: bool,
    genus_total: C,
}

fn eval_flags<C: Coeff>(
    tables: &Tables<C>,
    chosen: &[(usize, C)],
) -> Result<Flags<C>, CensusError> {
    let n = chosen.len();
    // Connectivity over positive pairings.
    let mut seen = [false; 64];
    debug_assert!(n <= 64);
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if !seen[j] && tables.pair[chosen[i].0][chosen[j].0] > C::zero() {
                seen[j] = true;
                count += 1;
                stack.push(j);
            }
        }
    }
    let connected = count == n;

    let mut nef = true;
    for &(ci, _) in chosen {
        let mut acc = C::zero();
        for &(cj, mj) in chosen {
            acc = cadd(acc, cmul(mj, tables.pair[cj][ci])?)?;
        }
        if acc.is_negative() {
            nef = false;
            break;
        }
    }

    let mut sq = C::zero();
    let mut ke = C::zero();
    for &(ci, mi) in chosen {
        for &(cj, mj) in chosen {
            sq = cadd(sq, cmul(cmul(mi, mj)?, tables.pair[ci][cj])?)?;
        }
        ke = cadd(ke, cmul(mi, tables.kdot[ci])?)?;
    }
    let adj = cadd(sq, ke)?;
    let genus_total = adj / (C::one() + C::one()) + C::one();

    Ok(Flags {
        connected,
        nef,
        genus_total,
    })
}

struct PartitionOutcome<C: Coeff> {
    stages: StageCounts,
    stats: BTreeMap<Checker, CheckerStats>,
    violations: Vec<ViolationRecord<C>>,
    digest: u64,
    emitted: u64,
}

impl<C: Coeff> PartitionOutcome<C> {
    fn new(checkers: &[Checker]) -> Self {
        PartitionOutcome {
            stages: StageCounts::default(),
            stats: checkers.iter().map(|&c| (c, CheckerStats::default())).collect(),
            violations: Vec::new(),
            digest: 0,
            emitted: 0,
        }
    }
}

struct PartitionRun<'a, C: Coeff> {
    tables: &'a Tables<C>,
    bounds: &'a CensusBounds<C>,
    checkers: &'a [Checker],
    b_plus_is_one: bool,
    outcome: PartitionOutcome<C>,
    fnv: Fnv,
}

impl<'a, C: Coeff> PartitionRun<'a, C> {
    fn explore(
        &mut self,
        chosen: &mut Vec<(usize, C)>,
        allowed: &[usize],
    ) -> Result<(), CensusError> {
        self.emit(chosen)?;
        if chosen.len() >= self.bounds.max_vertices {
            return Ok(());
        }
        let (last_c, last_m) = *chosen.last().expect("chosen is never empty here");
        for &d in allowed {
            debug_assert!(d >= last_c);
            let next_allowed: Vec<usize> = allowed
                .iter()
                .copied()
                .filter(|&x| x >= d && !self.tables.pair[x][d].is_negative())
                .collect();
            let mut m = if d == last_c { last_m } else { C::one() };
            while m <= self.bounds.max_mult {
                chosen.push((d, m));
                self.explore(chosen, &next_allowed)?;
                chosen.pop();
                m = m + C::one();
            }
        }
        Ok(())
    }

    fn emit(&mut self, chosen: &[(usize, C)]) -> Result<(), CensusError> {
        self.outcome.stages.valid += 1;
        let flags = eval_flags(self.tables, chosen)?;
        if flags.connected {
            self.outcome.stages.connected += 1;
            if flags.nef {
                self.outcome.stages.nef += 1;
                if flags.genus_total.is_zero() {
                    self.outcome.stages.genus0 += 1;
                }
            }
        }
        let f = &self.bounds.filters;
        if f.require_connected && !flags.connected {
            return Ok(());
        }
        if f.require_nef && !flags.nef {
            return Ok(());
        }
        if f.require_genus0_total && !flags.genus_total.is_zero() {
            return Ok(());
        }
        self.outcome.stages.emitted += 1;
        self.outcome.emitted += 1;
        for &(c, m) in chosen {
            for &x in self.tables.classes[c].coeffs() {
                self.fnv.write_i128(x.to_i128().expect("coefficient fits i128"));
            }
            self.fnv.write_i128(m.to_i128().expect("multiplicity fits i128"));
        }

        if self.checkers.is_empty() {
            return Ok(());
        }
        let vertices: Vec<Vertex<C>> = chosen
            .iter()
            .map(|&(c, m)| Vertex::new(self.tables.classes[c].clone(), m))
            .collect();
        let cfg = CurveConfiguration::new(Arc::clone(&self.bounds.lattice), vertices)?;
        for &checker in self.checkers {
            let stats = self.outcome.stats.get_mut(&checker).expect("stats preallocated");
            match run_checker(checker, &cfg, &flags, self.b_plus_is_one)? {
                CheckOutcome::OutOfHypothesis => stats.out_of_hypothesis += 1,
                CheckOutcome::Passed => {
                    stats.checked += 1;
                    stats.passed += 1;
                }
                CheckOutcome::Violated(detail) => {
                    stats.checked += 1;
                    self.outcome
                        .violations
                        .push(ViolationRecord::new(checker, &cfg, detail));
                }
            }
        }
        Ok(())
    }
}

enum CheckOutcome {
    OutOfHypothesis,
    Passed,
    Violated(String),
}

fn run_checker<C: Coeff>(
    checker: Checker,
    cfg: &CurveConfiguration<C>,
    flags: &Flags<C>,
    b_plus_is_one: bool,
) -> Result<CheckOutcome, CensusError> {
    let genus0 = flags.genus_total.is_zero();
    let reducible = cfg.len() >= 2 || (cfg.len() == 1 && cfg.mult(0) > C::one());
    Ok(match checker {
        Checker::GenusBound => {
            if !(flags.connected && flags.nef && !flags.genus_total.is_negative()) {
                CheckOutcome::OutOfHypothesis
            } else {
                genus_bound_checker(cfg)?
            }
        }
        Checker::Multi1 => {
            if !(flags.connected && flags.nef && genus0) {
                CheckOutcome::OutOfHypothesis
            } else {
                multi1_checker(cfg)?
            }
        }
        Checker::Tree => {
            if !(flags.connected && flags.nef && genus0) {
                CheckOutcome::OutOfHypothesis
            } else {
                match check_tree_theorem(cfg) {
                    Ok(report) if report.holds() => CheckOutcome::Passed,
                    Ok(report) => CheckOutcome::Violated(format!(
                        "tree theorem fails: all_genus_zero={}, tree={}",
                        report.all_genus_zero, report.tree
                    )),
                    Err(na) => CheckOutcome::Violated(format!(
                        "tree checker rejected an in-hypothesis configuration: {na}"
                    )),
                }
            }
        }
        Checker::Dimension => {
            if !(flags.connected && flags.nef && genus0 && reducible) {
                CheckOutcome::OutOfHypothesis
            } else {
                match check_dimension_bound(cfg) {
                    Ok(report) if report.holds() => CheckOutcome::Passed,
                    Ok(report) => CheckOutcome::Violated(format!(
                        "dimension bound fails: Σ mᵢl_i = {} > {} = L − 1",
                        report.weighted_l,
                        report.l_total - C::one()
                    )),
                    Err(na) => CheckOutcome::Violated(format!(
                        "dimension checker rejected an in-hypothesis configuration: {na}"
                    )),
                }
            }
        }
        Checker::Codim1 => {
            let s = cfg.summary();
            if !(flags.connected
                && flags.nef
                && genus0
                && reducible
                && b_plus_is_one
                && s.l_g == s.l_total - C::one())
            {
                CheckOutcome::OutOfHypothesis
            } else {
                codim1_checker(cfg)?
            }
        }
        Checker::Moves => move_invariants_checker(cfg)?,
    })
}

fn rearrange_failure(e: &RearrangeError) -> String {
    format!("rearrangement failed: {e}")
}

/// Weak genus bound, strong bound when certified, the multiplicity-1 lower
/// bound, and the rearrangement mechanics (termination bound, fixpoint,
/// per-step invariants along the trace).
fn genus_bound_checker<C: Coeff>(
    cfg: &CurveConfiguration<C>,
) -> Result<CheckOutcome, CensusError> {
    let form = match rearrange(cfg) {
        Ok(form) => form,
        Err(e) => return Ok(CheckOutcome::Violated(rearrange_failure(&e))),
    };

    // Walk the trace: totals constant, validity/connectivity/nefness at
    // every step, Σg non-decreasing, Σm strictly decreasing at combinations.
    let mut current = cfg.clone();
    for (i, step) in form.trace.steps.iter().enumerate() {
        if current.summary() != &step.before {
            return Ok(CheckOutcome::Violated(format!(
                "trace step {i}: recorded pre-state mismatch"
            )));
        }
        let next = apply_move(&current, &step.mv)?;
        let b = current.summary();
        let a = next.summary();
        if a.total != b.total {
            return Ok(CheckOutcome::Violated(format!(
                "trace step {i}: total class changed"
            )));
        }
        if !next.is_valid() || !next.is_connected() || !next.is_nef() {
            return Ok(CheckOutcome::Violated(format!(
                "trace step {i}: intermediate configuration not valid/connected/nef"
            )));
        }
        if a.genus_sum < b.genus_sum {
            return Ok(CheckOutcome::Violated(format!(
                "trace step {i}: Σ g(eᵢ) decreased"
            )));
        }
        if step.mv.is_combination() {
            if a.total_mult >= b.total_mult {
                return Ok(CheckOutcome::Violated(format!(
                    "trace step {i}: combination did not decrease Σ mᵢ"
                )));
            }
        }
        current = next;
    }
    if current != form.config {
        return Ok(CheckOutcome::Violated("trace does not replay to the reported form".into()));
    }

    if !form.unexpandable_lone_vertex && !is_rearranged(&form.config) {
        return Ok(CheckOutcome::Violated(
            "rearranged form does not satisfy the normal-form bullets".into(),
        ));
    }
    // Fixpoint: a second application does nothing.
    match rearrange(&form.config) {
        Ok(again) if again.trace.is_empty() => {}
        Ok(_) => {
            return Ok(CheckOutcome::Violated(
                "rearrange is not a fixpoint operator on its own output".into(),
            ))
        }
        Err(e) => return Ok(CheckOutcome::Violated(rearrange_failure(&e))),
    }
    // Termination bound.
    let total: u128 = cfg
        .summary()
        .total_mult
        .to_u128()
        .expect("total multiplicity is non-negative");
    if (form.trace.len() as u128) > total * total + total {
        return Ok(CheckOutcome::Violated("step bound exceeded".into()));
    }

    let s = cfg.summary();
    if s.genus_total < s.genus_sum {
        return Ok(CheckOutcome::Violated(format!(
            "genus bound fails: g(e) = {} < {} = Σ g(eᵢ)",
            s.genus_total, s.genus_sum
        )));
    }
    if form.strong_bound_eligible && s.genus_total < s.weighted_genus_sum {
        return Ok(CheckOutcome::Violated(format!(
            "strong genus bound fails while certified: g(e) = {} < {} = Σ mᵢg(eᵢ)",
            s.genus_total, s.weighted_genus_sum
        )));
    }
    if !form.unexpandable_lone_vertex
        && form.config.vertices().iter().any(|v| v.mult > C::one())
    {
        let gap = s.genus_total - form.config.summary().weighted_genus_sum;
        if gap < C::one() {
            return Ok(CheckOutcome::Violated(format!(
                "multiplicity-1 bound fails: gap {gap} < 1 on the rearranged form"
            )));
        }
    }
    Ok(CheckOutcome::Passed)
}

/// Contrapositive of the multiplicity lemma: a genus-0 input rearranges to
/// all multiplicities 1.
fn multi1_checker<C: Coeff>(cfg: &CurveConfiguration<C>) -> Result<CheckOutcome, CensusError> {
    let form = match rearrange(cfg) {
        Ok(form) => form,
        Err(e) => return Ok(CheckOutcome::Violated(rearrange_failure(&e))),
    };
    if form.unexpandable_lone_vertex {
        return Ok(CheckOutcome::Violated(
            "genus-0 input hit the lone-vertex exception".into(),
        ));
    }
    if form.config.vertices().iter().any(|v| v.mult > C::one()) {
        return Ok(CheckOutcome::Violated(
            "rearranged form of a genus-0 input kept a multiplicity above 1".into(),
        ));
    }
    Ok(CheckOutcome::Passed)
}

/// Classification plus witness replay.
fn codim1_checker<C: Coeff>(cfg: &CurveConfiguration<C>) -> Result<CheckOutcome, CensusError> {
    match classify_codim1(cfg) {
        Err(v) => Ok(CheckOutcome::Violated(v.detail)),
        Ok(Codim1Class::NotApplicable { reason }) => Ok(CheckOutcome::Violated(format!(
            "classifier rejected an in-hypothesis configuration: {reason}"
        ))),
        Ok(Codim1Class::NotCodim1) => Ok(CheckOutcome::Violated(
            "classifier disagrees on l_G = L − 1".into(),
        )),
        Ok(Codim1Class::TwoVertex { .. }) | Ok(Codim1Class::Comb { .. }) => {
            Ok(CheckOutcome::Passed)
        }
        Ok(Codim1Class::BlowupOfSmooth { witness, base })
        | Ok(Codim1Class::BlowupOfComb { witness, base }) => match witness.replay(cfg) {
            Ok(replayed) if replayed == base => Ok(CheckOutcome::Passed),
            Ok(_) => Ok(CheckOutcome::Violated(
                "witness replay does not reproduce the stated base".into(),
            )),
            Err(e) => Ok(CheckOutcome::Violated(format!("witness replay failed: {e}"))),
        },
    }
}

/// Move invariants over every applicable move: total class preservation,
/// validity, conditional connectivity and nefness, multiplicity descent,
/// genus monotonicity, the adjunction and tree pull-backs, and the
/// `l_G` monotonicity lemmas under their hypotheses.
fn move_invariants_checker<C: Coeff>(
    cfg: &CurveConfiguration<C>,
) -> Result<CheckOutcome, CensusError> {
    let one = C::one();
    let two = one + one;
    let minus_one = -one;
    let minus_two = -two;
    let connected = cfg.is_connected();
    let nef = cfg.is_nef();
    let all_adj_minus_two = (0..cfg.len()).all(|i| cfg.adjunction_of(i) == minus_two);
    let framing = (0..cfg.len()).all(|i| cfg.mult(i) <= one || cfg.square(i).is_negative());
    let all_genus_zero = (0..cfg.len()).all(|i| cfg.genus_of(i).is_zero());
    let genus0_total = cfg.summary().genus_total.is_zero();
    let before = cfg.summary();

    for mv in applicable_moves(cfg) {
        let out = apply_move(cfg, &mv)?;
        let after = out.summary();
        let fail = |what: &str| {
            Ok::<CheckOutcome, CensusError>(CheckOutcome::Violated(format!(
                "move {mv} on {cfg}: {what}"
            )))
        };

        if after.total != before.total {
            return fail("total class not preserved");
        }
        if !out.is_valid() {
            return fail("output is not a valid configuration");
        }
        let connectivity_guaranteed = match &mv {
            Move::Expansion { vertex } => cfg.len() >= 2 || cfg.square(*vertex) > C::zero(),
            Move::CombineII { .. } => nef,
            _ => true,
        };
        if connected && connectivity_guaranteed && !out.is_connected() {
            return fail("connectivity not preserved");
        }
        if nef && !out.is_nef() {
            return fail("nefness not preserved");
        }
        match &mv {
            Move::Expansion { vertex } => {
                if after.total_mult != before.total_mult {
                    return fail("expansion changed Σ mᵢ");
                }
                if after.genus_sum < before.genus_sum {
                    return fail("expansion decreased Σ g(eᵢ)");
                }
                let bad_case = cfg.square(*vertex).is_zero() && cfg.genus_of(*vertex) > C::zero();
                if !bad_case && after.weighted_genus_sum < before.weighted_genus_sum {
                    return fail("expansion decreased Σ mᵢg(eᵢ)");
                }
                if after.l_g < before.l_g {
                    return fail("expansion decreased l_G");
                }
                if cfg.genus_of(*vertex).is_zero() && after.l_g <= before.l_g {
                    return fail("expansion of a genus-0 vertex did not increase l_G");
                }
            }
            _ => {
                // Combinations and blow-downs.
                if after.total_mult >= before.total_mult {
                    return fail("combination did not strictly decrease Σ mᵢ");
                }
                if after.genus_sum < before.genus_sum {
                    return fail("combination decreased Σ g(eᵢ)");
                }
                if after.weighted_genus_sum < before.weighted_genus_sum {
                    return fail("combination decreased Σ mᵢg(eᵢ)");
                }
            }
        }

        // Adjunction pull-back, per new vertex.
        if connected && nef {
            match &mv {
                Move::CombineI { first, second }
                | Move::CombineII {
                    major: first,
                    minor: second,
                } => {
                    let d12 = cfg.pairing(*first, *second);
                    let merged_adj =
                        cfg.adjunction_of(*first) + cfg.adjunction_of(*second) + two * d12;
                    if merged_adj == minus_two
                        && !(cfg.adjunction_of(*first) == minus_two
                            && cfg.adjunction_of(*second) == minus_two
                            && d12 == one)
                    {
                        return fail("adjunction pull-back fails for a pairwise combination");
                    }
                }
                Move::CombineIII { center, neighbors } => {
                    let g_e = cfg.genus_of(*center);
                    for &i in neighbors {
                        let c = cfg.pairing(i, *center);
                        let merged_adj =
                            cfg.adjunction_of(i) + c * c + (two * g_e - one) * c;
                        if merged_adj == minus_two
                            && !(cfg.adjunction_of(i) == minus_two
                                && g_e.is_zero()
                                && c == one)
                        {
                            return fail("adjunction pull-back fails for combination (iii)");
                        }
                    }
                }
                Move::BlowDown1 { center, absorber } => {
                    let merged_adj =
                        cfg.adjunction_of(*center) + cfg.adjunction_of(*absorber) + two;
                    if merged_adj == minus_two && cfg.adjunction_of(*absorber) != minus_two {
                        return fail("adjunction pull-back fails for a blow-down");
                    }
                }
                Move::BlowDown2 { center, absorbers } => {
                    for &a in absorbers {
                        let merged_adj = cfg.adjunction_of(*center) + cfg.adjunction_of(a) + two;
                        if merged_adj == minus_two && cfg.adjunction_of(a) != minus_two {
                            return fail("adjunction pull-back fails for a blow-down");
                        }
                    }
                }
                _ => {}
            }
        }

        // Tree pull-back on all-adjunction-−2 instances: both sides must
        // consist of adjunction-−2 vertices (in the genus-0 setting where
        // the lemma is applied this is automatic for the result).
        if connected && nef && all_adj_minus_two {
            let out_adj_minus_two =
                (0..out.len()).all(|i| out.adjunction_of(i) == minus_two);
            if out_adj_minus_two && out.is_tree() && !cfg.is_tree() {
                return fail("tree pull-back fails");
            }
        }

        // l_G monotonicity for combinations. The hypotheses put the
        // configuration in the maximal-dimension analysis: a nef tree of
        // genus-0 vertices (all edge labels are then 1) whose multiple
        // vertices are negative.
        if (mv.is_combination() || mv.is_blow_down())
            && connected
            && nef
            && framing
            && genus0_total
            && all_genus_zero
            && cfg.is_tree()
        {
            let excluded = match &mv {
                Move::CombineI { first, second } => {
                    cfg.mult(*first) == one
                        && cfg.square(*first) != minus_one
                        && cfg.square(*second) != minus_one
                }
                _ => false,
            };
            if !excluded {
                if after.l_g < before.l_g {
                    return fail("combination decreased l_G");
                }
                let new_squares: Vec<C> = match &mv {
                    Move::CombineI { first, second }
                    | Move::CombineII {
                        major: first,
                        minor: second,
                    }
                    | Move::BlowDown1 {
                        center: second,
                        absorber: first,
                    } => {
                        vec![cfg.square(*first) + cfg.square(*second)
                            + two * cfg.pairing(*first, *second)]
                    }
                    Move::CombineIII { center, neighbors } => neighbors
                        .iter()
                        .map(|&i| {
                            let c = cfg.pairing(i, *center);
                            cfg.square(i) + c * c
                        })
                        .collect(),
                    Move::BlowDown2 { center, absorbers } => absorbers
                        .iter()
                        .map(|&a| cfg.square(a) + two * cfg.pairing(a, *center) + minus_one)
                        .collect(),
                    _ => unreachable!(),
                };
                let all_new_negative = new_squares.iter().all(|s| s.is_negative());
                if all_new_negative != (after.l_g == before.l_g) {
                    return fail("l_G equality does not match negativity of new vertices");
                }
            }
        }
    }
    Ok(CheckOutcome::Passed)
}

/// Runs the census over `jobs` worker threads. The report is identical for
/// any positive worker count.
pub fn run_census<C: Coeff>(
    bounds: &CensusBounds<C>,
    checkers: &[Checker],
    jobs: usize,
) -> Result<CensusReport<C>, CensusError> {
    let start = Instant::now();
    let jobs = jobs.max(1);
    let tables = build_tables(bounds)?;
    let b_plus_is_one = bounds.lattice.signature().b_plus == 1;
    let partitions = tables.classes.len();

    let mut checkers: Vec<Checker> = checkers.to_vec();
    checkers.sort_unstable();
    checkers.dedup();

    let run_one = |p: usize| -> Result<(usize, PartitionOutcome<C>), CensusError> {
        let mut run = PartitionRun {
            tables: &tables,
            bounds,
            checkers: &checkers,
            b_plus_is_one,
            outcome: PartitionOutcome::new(&checkers),
            fnv: Fnv::new(),
        };
        let allowed: Vec<usize> = (p..partitions)
            .filter(|&x| !tables.pair[x][p].is_negative())
            .collect();
        let mut m = C::one();
        while m <= bounds.max_mult {
            let mut chosen = vec![(p, m)];
            run.explore(&mut chosen, &allowed)?;
            m = m + C::one();
        }
        run.outcome.digest = run.fnv.finish();
        Ok((p, run.outcome))
    };

    let mut results: Vec<(usize, PartitionOutcome<C>)> = if jobs == 1 || partitions <= 1 {
        (0..partitions).map(run_one).collect::<Result<_, _>>()?
    } else {
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for w in 0..jobs.min(partitions) {
                let run_one = &run_one;
                handles.push(scope.spawn(move || {
                    (w..partitions)
                        .step_by(jobs)
                        .map(run_one)
                        .collect::<Result<Vec<_>, _>>()
                }));
            }
            let mut all = Vec::new();
            for h in handles {
                all.extend(h.join().map_err(|_| CensusError::WorkerPanicked)??);
            }
            Ok::<_, CensusError>(all)
        })?
    };
    results.sort_by_key(|(p, _)| *p);

    let mut stages = StageCounts::default();
    let mut stats: BTreeMap<String, CheckerStats> = checkers
        .iter()
        .map(|c| (c.name().to_string(), CheckerStats::default()))
        .collect();
    let mut violations = Vec::new();
    let mut fnv = Fnv::new();
    // Seed the fingerprint with the lattice and the bounds.
    for row in bounds.lattice.gram() {
        for &x in row {
            fnv.write_i128(x.to_i128().expect("gram entry fits i128"));
        }
    }
    for &x in bounds.lattice.canonical().coeffs() {
        fnv.write_i128(x.to_i128().expect("canonical coefficient fits i128"));
    }
    fnv.write_i128(bounds.max_vertices as i128);
    fnv.write_i128(bounds.max_mult.to_i128().expect("bound fits i128"));
    fnv.write_i128(bounds.coeff_bound.to_i128().expect("bound fits i128"));
    for (p, outcome) in &results {
        stages.merge(&outcome.stages);
        for (c, s) in &outcome.stats {
            stats.get_mut(c.name()).expect("checker preallocated").merge(s);
        }
        fnv.write_i128(*p as i128);
        fnv.write(&outcome.digest.to_le_bytes());
        fnv.write_i128(outcome.emitted as i128);
    }
    for (_, outcome) in results {
        violations.extend(outcome.violations);
    }

    Ok(CensusReport {
        candidate_classes: partitions as u64,
        stages,
        checkers: stats,
        violations,
        fingerprint: format!("{:016x}", fnv.finish()),
        wall_ms: start.elapsed().as_millis(),
    })
}

/// Visits every configuration the census would emit, in stream order,
/// single-threaded.
pub fn enumerate_configs<C: Coeff, F>(
    bounds: &CensusBounds<C>,
    mut visit: F,
) -> Result<StageCounts, CensusError>
where
    F: FnMut(CurveConfiguration<C>) -> Result<(), CensusError>,
{
    let tables = build_tables(bounds)?;
    let partitions = tables.classes.len();
    let mut stages = StageCounts::default();
    for p in 0..partitions {
        let mut run = PartitionRun {
            tables: &tables,
            bounds,
            checkers: &[],
            b_plus_is_one: false,
            outcome: PartitionOutcome::new(&[]),
            fnv: Fnv::new(),
        };
        let allowed: Vec<usize> = (p..partitions)
            .filter(|&x| !tables.pair[x][p].is_negative())
            .collect();
        let mut m = C::one();
        while m <= bounds.max_mult {
            let mut chosen = vec![(p, m)];
            run.explore_visit(&mut chosen, &allowed, &mut visit)?;
            m = m + C::one();
        }
        stages.merge(&run.outcome.stages);
    }
    Ok(stages)
}

impl<'a, C: Coeff> PartitionRun<'a, C> {
    fn explore_visit<F>(
        &mut self,
        chosen: &mut Vec<(usize, C)>,
        allowed: &[usize],
        visit: &mut F,
    ) -> Result<(), CensusError>
    where
        F: FnMut(CurveConfiguration<C>) -> Result<(), CensusError>,
    {
        self.emit_visit(chosen, visit)?;
        if chosen.len() >= self.bounds.max_vertices {
            return Ok(());
        }
        let (last_c, last_m) = *chosen.last().expect("chosen is never empty here");
        for &d in allowed {
            let next_allowed: Vec<usize> = allowed
                .iter()
                .copied()
                .filter(|&x| x >= d && !self.tables.pair[x][d].is_negative())
                .collect();
            let mut m = if d == last_c { last_m } else { C::one() };
            while m <= self.bounds.max_mult {
                chosen.push((d, m));
                self.explore_visit(chosen, &next_allowed, visit)?;
                chosen.pop();
                m = m + C::one();
            }
        }
        Ok(())
    }

    fn emit_visit<F>(&mut self, chosen: &[(usize, C)], visit: &mut F) -> Result<(), CensusError>
    where
        F: FnMut(CurveConfiguration<C>) -> Result<(), CensusError>,
    {
        self.outcome.stages.valid += 1;
        let flags = eval_flags(self.tables, chosen)?;
        if flags.connected {
            self.outcome.stages.connected += 1;
            if flags.nef {
                self.outcome.stages.nef += 1;
                if flags.genus_total.is_zero() {
                    self.outcome.stages.genus0 += 1;
                }
            }
        }
        let f = &self.bounds.filters;
        if f.require_connected && !flags.connected {
            return Ok(());
        }
        if f.require_nef && !flags.nef {
            return Ok(());
        }
        if f.require_genus0_total && !flags.genus_total.is_zero() {
            return Ok(());
        }
        self.outcome.stages.emitted += 1;
        let vertices: Vec<Vertex<C>> = chosen
            .iter()
            .map(|&(c, m)| Vertex::new(self.tables.classes[c].clone(), m))
            .collect();
        visit(CurveConfiguration::new(
            Arc::clone(&self.bounds.lattice),
            vertices,
        )?)
    }
}

/// One configuration produced by the blow-up census, with the blow-up moves
/// that produced it from its seed.
#[derive(Debug, Clone)]
pub struct BlowupEntry<C: Coeff> {
    pub config: CurveConfiguration<C>,
    pub seed_index: usize,
    pub depth: usize,
    pub moves: Vec<Move>,
}

/// Enumerates all restricted blow-up sequences of length at most `depth`
/// from the given seeds. Seeds must be single smooth vertices (non-negative
/// square, genus 0, multiplicity 1) or combs. Blow-ups target the evolving
/// negative part: `BlowUp1` on a negative-square vertex, `BlowUp2` on an
/// adjoined pair of negative-square vertices; the very first blow-up of a
/// smooth seed, where no negative part exists yet, targets the seed vertex.
pub fn blowup_census<C: Coeff>(
    seeds: &[CurveConfiguration<C>],
    depth: usize,
) -> Result<Vec<BlowupEntry<C>>, CensusError> {
    for (index, seed) in seeds.iter().enumerate() {
        let single_smooth = seed.len() == 1
            && seed.mult(0) == C::one()
            && !seed.square(0).is_negative()
            && seed.genus_of(0).is_zero();
        let comb = crate::classify::comb_structure(seed).is_some();
        if !(single_smooth || comb) {
            return Err(CensusError::InvalidSeed {
                index,
                reason: "seed must be a single smooth vertex or a comb".into(),
            });
        }
    }
    let mut out = Vec::new();
    for (seed_index, seed) in seeds.iter().enumerate() {
        let mut stack = vec![(seed.clone(), Vec::<Move>::new())];
        while let Some((cfg, moves)) = stack.pop() {
            let d = moves.len();
            out.push(BlowupEntry {
                config: cfg.clone(),
                seed_index,
                depth: d,
                moves: moves.clone(),
            });
            if d >= depth {
                continue;
            }
            let negatives: Vec<usize> =
                (0..cfg.len()).filter(|&i| cfg.square(i).is_negative()).collect();
            let mut next_moves = Vec::new();
            if negatives.is_empty() {
                for v in 0..cfg.len() {
                    next_moves.push(Move::BlowUp1 { vertex: v });
                }
            } else {
                for &v in &negatives {
                    next_moves.push(Move::BlowUp1 { vertex: v });
                }
                for (a, &i) in negatives.iter().enumerate() {
                    for &j in &negatives[a + 1..] {
                        if cfg.pairing(i, j) >= C::one() {
                            next_moves.push(Move::BlowUp2 { targets: [i, j] });
                        }
                    }
                }
            }
            // Depth-first in reverse so the stack pops in canonical order.
            for mv in next_moves.into_iter().rev() {
                let next = apply_move(&cfg, &mv)?;
                let mut chain = moves.clone();
                chain.push(mv);
                stack.push((next, chain));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::class_from_coeffs;

    type L = IntersectionLattice<i64>;

    fn bounds(lattice: L, mv: usize, mm: i64, cb: i64) -> CensusBounds<i64> {
        CensusBounds::new(Arc::new(lattice), mv, mm, cb).unwrap()
    }

    #[test]
    fn candidate_classes_on_one_blowup() {
        let l = L::cp2_blowup(1);
        let got = candidate_classes(&l, 1).unwrap();
        let coeffs: Vec<Vec<i64>> = got.iter().map(|c| c.coeffs().to_vec()).collect();
        assert!(coeffs.contains(&vec![1, 0]));
        assert!(coeffs.contains(&vec![0, 1]));
        assert!(coeffs.contains(&vec![1, -1]));
        // adj ≥ −2 alone is permissive: −E₁ and −H qualify too.
        assert!(coeffs.contains(&vec![0, -1]));
        assert!(coeffs.contains(&vec![-1, 0]));
        // H + E₁ has adjunction −4 and is excluded.
        assert!(!coeffs.contains(&vec![1, 1]));
        assert_eq!(coeffs.len(), 8);
    }

    #[test]
    fn candidate_set_is_never_empty_for_presets() {
        for k in 0..4 {
            assert!(!candidate_classes(&L::cp2_blowup(k), 1).unwrap().is_empty());
        }
        assert!(!candidate_classes(&L::ruled_blowup(2), 1).unwrap().is_empty());
    }

    #[test]
    fn enumeration_is_deterministic() {
        let b = bounds(L::cp2_blowup(1), 2, 2, 1);
        let r1 = run_census(&b, &[], 1).unwrap();
        let r2 = run_census(&b, &[], 1).unwrap();
        assert_eq!(r1.fingerprint, r2.fingerprint);
        assert_eq!(r1.stages, r2.stages);
    }

    #[test]
    fn worker_count_does_not_change_the_report() {
        let b = bounds(L::cp2_blowup(2), 3, 2, 1);
        let r1 = run_census(&b, &Checker::ALL, 1).unwrap();
        let r4 = run_census(&b, &Checker::ALL, 4).unwrap();
        assert_eq!(r1.fingerprint, r4.fingerprint);
        assert_eq!(r1.stages, r4.stages);
        assert_eq!(r1.checkers, r4.checkers);
        assert_eq!(r1.violations, r4.violations);
    }

    #[test]
    fn filtered_stream_contains_the_line() {
        let mut filters = CensusFilters::default();
        filters.require_connected = true;
        filters.require_nef = true;
        filters.require_genus0_total = true;
        let b = bounds(L::cp2_blowup(1), 1, 1, 1).with_filters(filters);
        let mut seen = Vec::new();
        enumerate_configs(&b, |cfg| {
            seen.push(cfg);
            Ok(())
        })
        .unwrap();
        let line = CurveConfiguration::from_lattice(
            L::cp2_blowup(1),
            vec![Vertex::new(class_from_coeffs(&[1, 0]), 1i64)],
        )
        .unwrap();
        assert!(seen.contains(&line));
    }

    #[test]
    fn small_census_has_zero_violations() {
        let b = bounds(L::cp2_blowup(2), 3, 2, 2);
        let report = run_census(&b, &Checker::ALL, 2).unwrap();
        assert!(report.ok(), "violations: {:?}", report.violations);
        assert!(report.stages.valid > 0);
        let gb = &report.checkers["genus_bound"];
        assert!(gb.checked > 0);
        assert_eq!(gb.checked, gb.passed);
    }

    #[test]
    fn out_of_hypothesis_configurations_are_not_violations() {
        // {(−K, 2)} on ten blow-ups is valid but not nef: the genus-bound
        // checker must record it as out-of-hypothesis rather than failing.
        let l = Arc::new(L::cp2_blowup(10));
        let cfg = CurveConfiguration::new(
            Arc::clone(&l),
            vec![Vertex::new(
                class_from_coeffs(&[3, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1]),
                2i64,
            )],
        )
        .unwrap();
        let flags = Flags {
            connected: true,
            nef: false,
            genus_total: 0,
        };
        let got = run_checker(Checker::GenusBound, &cfg, &flags, true).unwrap();
        assert!(matches!(got, CheckOutcome::OutOfHypothesis));
    }

    #[test]
    fn blowup_census_depth_zero_returns_seeds() {
        let seed = CurveConfiguration::from_lattice(
            L::cp2_blowup(0),
            vec![Vertex::new(class_from_coeffs(&[2]), 1i64)],
        )
        .unwrap();
        let out = blowup_census(&[seed.clone()], 0).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].config, seed);
        assert_eq!(out[0].depth, 0);
    }

    #[test]
    fn blowup_census_contains_the_documented_chain() {
        let seed = CurveConfiguration::from_lattice(
            L::cp2_blowup(0),
            vec![Vertex::new(class_from_coeffs(&[2]), 1i64)],
        )
        .unwrap();
        let out = blowup_census(&[seed], 2).unwrap();
        let chain: Vec<_> = out
            .iter()
            .filter(|e| e.depth == 2)
            .map(|e| {
                e.config
                    .vertices()
                    .iter()
                    .map(|v| (v.class.coeffs().to_vec(), v.mult))
                    .collect::<Vec<_>>()
            })
            .collect();
        assert!(chain.contains(&vec![
            (vec![0, 0, 1], 1),
            (vec![0, 1, -1], 1),
            (vec![2, -1, 0], 1)
        ]));
    }

    #[test]
    fn blowup_census_rejects_bad_seed() {
        let seed = CurveConfiguration::from_lattice(
            L::cp2_blowup(1),
            vec![Vertex::new(class_from_coeffs(&[0, 1]), 1i64)],
        )
        .unwrap();
        assert!(matches!(
            blowup_census(&[seed], 1),
            Err(CensusError::InvalidSeed { index: 0, .. })
        ));
    }
}
