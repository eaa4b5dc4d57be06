//! The rewriting steps on curve configurations: curve expansion, the three
//! curve combination moves, and simple combinatorial blow-downs/blow-ups.
//!
//! Every application checks its preconditions and reports the violated clause
//! on failure. Blow-ups extend the lattice by a fresh exceptional class
//! rather than reusing an unused one, matching infinitely-near semantics and
//! keeping preconditions checkable.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::config::{ConfigError, ConfigSummary, CurveConfiguration, Vertex};
use crate::lattice::{HomologyClass, LatticeError};
use crate::num::{cadd, cmul, csub, Coeff};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("move not applicable: {0}")]
    NotApplicable(String),
    #[error("vertex index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("participant indices must be distinct")]
    RepeatedParticipant,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

impl From<crate::num::OverflowError> for MoveError {
    fn from(e: crate::num::OverflowError) -> Self {
        MoveError::Lattice(e.into())
    }
}

fn not_applicable<T>(clause: impl Into<String>) -> Result<T, MoveError> {
    Err(MoveError::NotApplicable(clause.into()))
}

/// One rewriting step. Vertex indices refer to the canonical order of the
/// configuration the move is applied to.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Move {
    /// Replace a vertex `(e, m)` with `e·e ≥ 0`, `m > 1` by `m` copies `(e, 1)`.
    Expansion { vertex: usize },
    /// Collapse two adjoined vertices of equal multiplicity `n` into
    /// `(D₁+D₂, n)`.
    CombineI { first: usize, second: usize },
    /// Replace adjoined `(D₁,n₁), (D₂,n₂)` with `n₁ > n₂` and
    /// `D₁·D₂ ≥ −D₁·D₁` by `(D₁+D₂, n₂)` and `(D₁, n₁−n₂)`.
    CombineII { major: usize, minor: usize },
    /// Replace a −1 vertex `E` of multiplicity `n₀` together with all its
    /// neighbors `(Dᵢ, nᵢ)` (each with `Dᵢ·Dᵢ ≤ −2`, `Σ nᵢ(Dᵢ·E) = n₀`) by
    /// the vertices `(Dᵢ + (Dᵢ·E)E, nᵢ)`.
    CombineIII { center: usize, neighbors: Vec<usize> },
    /// Remove a genus-0 −1 vertex `(v,t)` adjoined only to `(u,t)` with
    /// `u·v = 1`, producing `(u+v, t)`.
    BlowDown1 { center: usize, absorber: usize },
    /// Remove a genus-0 −1 vertex `(v, t₁+t₂)` adjoined exactly to `(u₁,t₁)`
    /// and `(u₂,t₂)` with both edges labeled 1, producing `(uᵢ+v, tᵢ)`.
    BlowDown2 { center: usize, absorbers: [usize; 2] },
    /// Blow up at a smooth point of one component: extends the lattice by
    /// `Eₙ` and maps `(w,t) ↦ (w−Eₙ, t), (Eₙ, t)`.
    BlowUp1 { vertex: usize },
    /// Blow up at a transversal intersection of two adjoined components:
    /// `(wᵢ,tᵢ) ↦ (wᵢ−Eₙ, tᵢ)` plus `(Eₙ, t₁+t₂)`.
    BlowUp2 { targets: [usize; 2] },
}

impl Move {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Move::Expansion { .. } => "expansion",
            Move::CombineI { .. } => "combine_i",
            Move::CombineII { .. } => "combine_ii",
            Move::CombineIII { .. } => "combine_iii",
            Move::BlowDown1 { .. } => "blow_down_1",
            Move::BlowDown2 { .. } => "blow_down_2",
            Move::BlowUp1 { .. } => "blow_up_1",
            Move::BlowUp2 { .. } => "blow_up_2",
        }
    }

    pub fn is_combination(&self) -> bool {
        matches!(
            self,
            Move::CombineI { .. } | Move::CombineII { .. } | Move::CombineIII { .. }
        )
    }

    pub fn is_blow_down(&self) -> bool {
        matches!(self, Move::BlowDown1 { .. } | Move::BlowDown2 { .. })
    }

    pub fn participants(&self) -> Vec<usize> {
        match self {
            Move::Expansion { vertex } | Move::BlowUp1 { vertex } => vec![*vertex],
            Move::CombineI { first, second } => vec![*first, *second],
            Move::CombineII { major, minor } => vec![*major, *minor],
            Move::CombineIII { center, neighbors } => {
                let mut p = vec![*center];
                p.extend_from_slice(neighbors);
                p
            }
            Move::BlowDown1 { center, absorber } => vec![*center, *absorber],
            Move::BlowDown2 { center, absorbers } => {
                vec![*center, absorbers[0], absorbers[1]]
            }
            Move::BlowUp2 { targets } => vec![targets[0], targets[1]],
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Expansion { vertex } => write!(f, "expansion({vertex})"),
            Move::CombineI { first, second } => write!(f, "combine_i({first},{second})"),
            Move::CombineII { major, minor } => write!(f, "combine_ii({major},{minor})"),
            Move::CombineIII { center, neighbors } => {
                write!(f, "combine_iii({center};")?;
                for (i, n) in neighbors.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{n}")?;
                }
                write!(f, ")")
            }
            Move::BlowDown1 { center, absorber } => write!(f, "blow_down_1({center},{absorber})"),
            Move::BlowDown2 { center, absorbers } => {
                write!(f, "blow_down_2({center},{},{})", absorbers[0], absorbers[1])
            }
            Move::BlowUp1 { vertex } => write!(f, "blow_up_1({vertex})"),
            Move::BlowUp2 { targets } => write!(f, "blow_up_2({},{})", targets[0], targets[1]),
        }
    }
}

fn check_index<C: Coeff>(cfg: &CurveConfiguration<C>, i: usize) -> Result<(), MoveError> {
    if i >= cfg.len() {
        return Err(MoveError::IndexOutOfRange(i));
    }
    Ok(())
}

fn others<C: Coeff>(cfg: &CurveConfiguration<C>, removed: &[usize]) -> Vec<Vertex<C>> {
    cfg.vertices()
        .iter()
        .enumerate()
        .filter(|(i, _)| !removed.contains(i))
        .map(|(_, v)| v.clone())
        .collect()
}

/// Curve expansion: requires `e·e ≥ 0` and `m > 1`.
pub fn apply_expansion<C: Coeff>(
    cfg: &CurveConfiguration<C>,
    vertex: usize,
) -> Result<CurveConfiguration<C>, MoveError> {
    check_index(cfg, vertex)?;
    if cfg.square(vertex).is_negative() {
        return not_applicable(format!(
            "expansion requires non-negative self-intersection, vertex {vertex} has {}",
            cfg.square(vertex)
        ));
    }
    if cfg.mult(vertex) <= C::one() {
        return not_applicable(format!(
            "expansion requires multiplicity > 1, vertex {vertex} has {}",
            cfg.mult(vertex)
        ));
    }
    let copies = cfg.mult(vertex).to_usize().expect("multiplicity fits usize");
    let mut verts = others(cfg, &[vertex]);
    for _ in 0..copies {
        verts.push(Vertex::new(cfg.class(vertex).clone(), C::one()));
    }
    Ok(cfg.with_vertices(verts)?)
}

/// Whether expanding `vertex` would void the strong-bound certificate: the
/// vertex has square zero, multiplicity at least 2, and positive genus.
pub fn expansion_weakens_strong_bound<C: Coeff>(cfg: &CurveConfiguration<C>, vertex: usize) -> bool {
    cfg.square(vertex).is_zero()
        && cfg.mult(vertex) > C::one()
        && cfg.genus_of(vertex) > C::zero()
}

/// Combination move (i): collapse two adjoined vertices of equal multiplicity.
pub fn apply_combine_i<C: Coeff>(
    cfg: &CurveConfiguration<C>,
    first: usize,
    second: usize,
) -> Result<CurveConfiguration<C>, MoveError> {
    check_index(cfg, first)?;
    check_index(cfg, second)?;
    if first == second {
        return Err(MoveError::RepeatedParticipant);
    }
    if cfg.pairing(first, second) <= C::zero() {
        return not_applicable("combine (i) requires adjoined vertices");
    }
    if cfg.mult(first) != cfg.mult(second) {
        return not_applicable(format!(
            "combine (i) requires equal multiplicities, got {} and {}",
            cfg.mult(first),
            cfg.mult(second)
        ));
    }
    let merged = cfg
        .class(first)
        .checked_add(cfg.class(second))
        .map_err(LatticeError::from)?;
    let mut verts = others(cfg, &[first, second]);
    verts.push(Vertex::new(merged, cfg.mult(first)));
    Ok(cfg.with_vertices(verts)?)
}

/// Combination move (ii): requires adjoined vertices with `n₁ > n₂` (major
/// first) and `D₁·D₂ ≥ −D₁·D₁`.
pub fn apply_combine_ii<C: Coeff>(
    cfg: &CurveConfiguration<C>,
    major: usize,
    minor: usize,
) -> Result<CurveConfiguration<C>, MoveError> {
    check_index(cfg, major)?;
    check_index(cfg, minor)?;
    if major == minor {
        return Err(MoveError::RepeatedParticipant);
    }
    if cfg.pairing(major, minor) <= C::zero() {
        return not_applicable("combine (ii) requires adjoined vertices");
    }
    if cfg.mult(major) <= cfg.mult(minor) {
        return not_applicable(format!(
            "combine (ii) requires n₁ > n₂, got {} and {}",
            cfg.mult(major),
            cfg.mult(minor)
        ));
    }
    let d1d2 = cfg.pairing(major, minor);
    let neg_d1d1 = cfg
        .square(major)
        .checked_neg()
        .ok_or(crate::num::OverflowError)
        .map_err(LatticeError::from)?;
    if d1d2 < neg_d1d1 {
        return not_applicable(format!(
            "combine (ii) requires D₁·D₂ ≥ −D₁·D₁, got {d1d2} < {neg_d1d1}"
        ));
    }
    let merged = cfg
        .class(major)
        .checked_add(cfg.class(minor))
        .map_err(LatticeError::from)?;
    let leftover = csub(cfg.mult(major), cfg.mult(minor)).map_err(LatticeError::from)?;
    let mut verts = others(cfg, &[major, minor]);
    verts.push(Vertex::new(merged, cfg.mult(minor)));
    verts.push(Vertex::new(cfg.class(major).clone(), leftover));
    Ok(cfg.with_vertices(verts)?)
}

/// Combination move (iii) at a −1 vertex. The neighbor list must be exactly
/// the set of vertices adjoined to the center; each neighbor must have square
/// at most −2; and `Σ nᵢ(Dᵢ·E)` must equal the center's multiplicity.
pub fn apply_combine_iii<C: Coeff>(
    cfg: &CurveConfiguration<C>,
    center: usize,
    neighbors: &[usize],
) -> Result<CurveConfiguration<C>, MoveError> {
    check_index(cfg, center)?;
    for &n in neighbors {
        check_index(cfg, n)?;
    }
    let mut sorted = neighbors.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != neighbors.len() || sorted.contains(&center) {
        return Err(MoveError::RepeatedParticipant);
    }
    if cfg.square(center) != -C::one() {
        return not_applicable(format!(
            "combine (iii) requires a −1 center, vertex {center} has square {}",
            cfg.square(center)
        ));
    }
    if sorted != cfg.neighbors(center) {
        return not_applicable(
            "combine (iii) requires the neighbor list to be exactly the vertices adjoined to the center",
        );
    }
    if sorted.is_empty() {
        return not_applicable("combine (iii) requires at least one neighbor");
    }
    let minus_two = -(C::one() + C::one());
    let mut weighted_sum = C::zero();
    for &i in &sorted {
        if cfg.square(i) > minus_two {
            return not_applicable(format!(
                "combine (iii) requires every neighbor to have square ≤ −2, vertex {i} has {}",
                cfg.square(i)
            ));
        }
        weighted_sum = cadd(weighted_sum, cmul(cfg.mult(i), cfg.pairing(i, center))?)
            .map_err(LatticeError::from)?;
    }
    if weighted_sum != cfg.mult(center) {
        return not_applicable(format!(
            "combine (iii) requires Σ nᵢ(Dᵢ·E) = n₀, got {weighted_sum} ≠ {}",
            cfg.mult(center)
        ));
    }
    let mut removed = sorted.clone();
    removed.push(center);
    let mut verts = others(cfg, &removed);
    for &i in &sorted {
        let merged = cfg
            .class(i)
            .checked_add_scaled(cfg.pairing(i, center), cfg.class(center))
            .map_err(LatticeError::from)?;
        verts.push(Vertex::new(merged, cfg.mult(i)));
    }
    Ok(cfg.with_vertices(verts)?)
}

fn check_blow_down_center<C: Coeff>(
    cfg: &CurveConfiguration<C>,
    center: usize,
) -> Result<(), MoveError> {
    if cfg.square(center) != -C::one() {
        return not_applicable(format!(
            "blow-down requires a −1 vertex, vertex {center} has square {}",
            cfg.square(center)
        ));
    }
    if !cfg.genus_of(center).is_zero() {
        return not_applicable(format!(
            "blow-down requires a genus-0 vertex, vertex {center} has genus {}",
            cfg.genus_of(center)
        ));
    }
    Ok(())
}

/// Simple combinatorial blow-down, variant (1): remove a genus-0 −1 vertex
/// adjoined to a single vertex of the same multiplicity through an edge of
/// label 1.
pub fn apply_blow_down_1<C: Coeff>(
    cfg: &CurveConfiguration<C>,
    center: usize,
    absorber: usize,
) -> Result<CurveConfiguration<C>, MoveError> {
    check_index(cfg, center)?;
    check_index(cfg, absorber)?;
    if center == absorber {
        return Err(MoveError::RepeatedParticipant);
    }
    check_blow_down_center(cfg, center)?;
    if cfg.neighbors(center) != vec![absorber] {
        return not_applicable("blow-down (1) requires the center to be adjoined only to the absorber");
    }
    if cfg.pairing(center, absorber) != C::one() {
        return not_applicable(format!(
            "blow-down (1) requires u·v = 1, got {}",
            cfg.pairing(center, absorber)
        ));
    }
    if cfg.mult(center) != cfg.mult(absorber) {
        return not_applicable(format!(
            "blow-down (1) requires equal multiplicities, got {} and {}",
            cfg.mult(center),
            cfg.mult(absorber)
        ));
    }
    let merged = cfg
        .class(absorber)
        .checked_add(cfg.class(center))
        .map_err(LatticeError::from)?;
    let mut verts = others(cfg, &[center, absorber]);
    verts.push(Vertex::new(merged, cfg.mult(center)));
    Ok(cfg.with_vertices(verts)?)
}

/// Simple combinatorial blow-down, variant (2): remove a genus-0 −1 vertex of
/// multiplicity `t₁+t₂` adjoined exactly to two vertices of multiplicities
/// `t₁`, `t₂`, both edges labeled 1.
pub fn apply_blow_down_2<C: Coeff>(
    cfg: &CurveConfiguration<C>,
    center: usize,
    absorbers: [usize; 2],
) -> Result<CurveConfiguration<C>, MoveError> {
    check_index(cfg, center)?;
    check_index(cfg, absorbers[0])?;
    check_index(cfg, absorbers[1])?;
    if center == absorbers[0] || center == absorbers[1] || absorbers[0] == absorbers[1] {
        return Err(MoveError::RepeatedParticipant);
    }
    check_blow_down_center(cfg, center)?;
    let mut expected = absorbers.to_vec();
    expected.sort_unstable();
    if cfg.neighbors(center) != expected {
        return not_applicable(
            "blow-down (2) requires the center to be adjoined exactly to the two absorbers",
        );
    }
    for &a in &absorbers {
        if cfg.pairing(center, a) != C::one() {
            return not_applicable(format!(
                "blow-down (2) requires both edges labeled 1, edge to {a} has label {}",
                cfg.pairing(center, a)
            ));
        }
    }
    let mult_sum = cadd(cfg.mult(absorbers[0]), cfg.mult(absorbers[1])).map_err(LatticeError::from)?;
    if cfg.mult(center) != mult_sum {
        return not_applicable(format!(
            "blow-down (2) requires center multiplicity t₁+t₂, got {} ≠ {mult_sum}",
            cfg.mult(center)
        ));
    }
    let mut verts = others(cfg, &[center, absorbers[0], absorbers[1]]);
    for &a in &absorbers {
        let merged = cfg
            .class(a)
            .checked_add(cfg.class(center))
            .map_err(LatticeError::from)?;
        verts.push(Vertex::new(merged, cfg.mult(a)));
    }
    Ok(cfg.with_vertices(verts)?)
}

/// Embeds a configuration into the blow-up of its lattice without touching
/// its vertices (all classes gain a zero coordinate).
pub fn embed_in_blow_up<C: Coeff>(
    cfg: &CurveConfiguration<C>,
) -> Result<CurveConfiguration<C>, MoveError> {
    let lattice = Arc::new(cfg.lattice().blow_up());
    let rank = lattice.rank();
    let verts = cfg
        .vertices()
        .iter()
        .map(|v| Vertex::new(v.class.extended(rank), v.mult))
        .collect();
    Ok(CurveConfiguration::new(lattice, verts)?)
}

/// Simple combinatorial blow-up at a smooth point of one component.
pub fn apply_blow_up_1<C: Coeff>(
    cfg: &CurveConfiguration<C>,
    vertex: usize,
) -> Result<CurveConfiguration<C>, MoveError> {
    check_index(cfg, vertex)?;
    let lattice = Arc::new(cfg.lattice().blow_up());
    let rank = lattice.rank();
    let exceptional = exceptional_class::<C>(rank);
    let mut verts = Vec::with_capacity(cfg.len() + 1);
    for (i, v) in cfg.vertices().iter().enumerate() {
        let mut class = v.class.extended(rank);
        if i == vertex {
            class = subtract_exceptional(&class)?;
        }
        verts.push(Vertex::new(class, v.mult));
    }
    verts.push(Vertex::new(exceptional, cfg.mult(vertex)));
    Ok(CurveConfiguration::new(lattice, verts)?)
}

/// Simple combinatorial blow-up at a transversal intersection point of two
/// adjoined components.
pub fn apply_blow_up_2<C: Coeff>(
    cfg: &CurveConfiguration<C>,
    targets: [usize; 2],
) -> Result<CurveConfiguration<C>, MoveError> {
    check_index(cfg, targets[0])?;
    check_index(cfg, targets[1])?;
    if targets[0] == targets[1] {
        return Err(MoveError::RepeatedParticipant);
    }
    if cfg.pairing(targets[0], targets[1]) < C::one() {
        return not_applicable("blow-up (2) requires adjoined targets");
    }
    let lattice = Arc::new(cfg.lattice().blow_up());
    let rank = lattice.rank();
    let exceptional = exceptional_class::<C>(rank);
    let mut verts = Vec::with_capacity(cfg.len() + 1);
    for (i, v) in cfg.vertices().iter().enumerate() {
        let mut class = v.class.extended(rank);
        if i == targets[0] || i == targets[1] {
            class = subtract_exceptional(&class)?;
        }
        verts.push(Vertex::new(class, v.mult));
    }
    let mult = cadd(cfg.mult(targets[0]), cfg.mult(targets[1])).map_err(LatticeError::from)?;
    verts.push(Vertex::new(exceptional, mult));
    Ok(CurveConfiguration::new(lattice, verts)?)
}

fn exceptional_class<C: Coeff>(rank: usize) -> HomologyClass<C> {
    let mut coeffs = vec![C::zero(); rank];
    coeffs[rank - 1] = C::one();
    HomologyClass::new(coeffs)
}

fn subtract_exceptional<C: Coeff>(
    class: &HomologyClass<C>,
) -> Result<HomologyClass<C>, MoveError> {
    let mut coeffs = class.coeffs().to_vec();
    let last = coeffs.len() - 1;
    coeffs[last] = csub(coeffs[last], C::one()).map_err(LatticeError::from)?;
    Ok(HomologyClass::new(coeffs))
}

/// Applies any move.
pub fn apply_move<C: Coeff>(
    cfg: &CurveConfiguration<C>,
    mv: &Move,
) -> Result<CurveConfiguration<C>, MoveError> {
    match mv {
        Move::Expansion { vertex } => apply_expansion(cfg, *vertex),
        Move::CombineI { first, second } => apply_combine_i(cfg, *first, *second),
        Move::CombineII { major, minor } => apply_combine_ii(cfg, *major, *minor),
        Move::CombineIII { center, neighbors } => apply_combine_iii(cfg, *center, neighbors),
        Move::BlowDown1 { center, absorber } => apply_blow_down_1(cfg, *center, *absorber),
        Move::BlowDown2 { center, absorbers } => apply_blow_down_2(cfg, *center, *absorbers),
        Move::BlowUp1 { vertex } => apply_blow_up_1(cfg, *vertex),
        Move::BlowUp2 { targets } => apply_blow_up_2(cfg, *targets),
    }
}

/// Every applicable expansion, combination, and blow-down, in canonical
/// order (kind, then participants). Blow-ups are excluded: they apply almost
/// everywhere and extend the lattice, so they are enumerated separately by
/// the blow-up census.
pub fn applicable_moves<C: Coeff>(cfg: &CurveConfiguration<C>) -> Vec<Move> {
    let n = cfg.len();
    let one = C::one();
    let minus_one = -one;
    let minus_two = minus_one - one;
    let mut moves = Vec::new();

    for v in 0..n {
        if !cfg.square(v).is_negative() && cfg.mult(v) > one {
            moves.push(Move::Expansion { vertex: v });
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if cfg.pairing(i, j) > C::zero() && cfg.mult(i) == cfg.mult(j) {
                moves.push(Move::CombineI { first: i, second: j });
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if cfg.pairing(i, j) <= C::zero() || cfg.mult(i) == cfg.mult(j) {
                continue;
            }
            let (major, minor) = if cfg.mult(i) > cfg.mult(j) { (i, j) } else { (j, i) };
            let neg_sq = match cfg.square(major).checked_neg() {
                Some(s) => s,
                None => continue,
            };
            if cfg.pairing(major, minor) >= neg_sq {
                moves.push(Move::CombineII { major, minor });
            }
        }
    }
    for center in 0..n {
        if cfg.square(center) != minus_one {
            continue;
        }
        let neighbors = cfg.neighbors(center);
        if neighbors.is_empty() || neighbors.iter().any(|&i| cfg.square(i) > minus_two) {
            continue;
        }
        // On a valid configuration Σ nᵢ(Dᵢ·E) = n₀ is exactly e·E = 0.
        if cfg.total_pairing(center).is_zero() {
            moves.push(Move::CombineIII { center, neighbors });
        }
    }
    for center in 0..n {
        if cfg.square(center) != minus_one || !cfg.genus_of(center).is_zero() {
            continue;
        }
        let neighbors = cfg.neighbors(center);
        match neighbors.as_slice() {
            [u] => {
                if cfg.pairing(center, *u) == one && cfg.mult(center) == cfg.mult(*u) {
                    moves.push(Move::BlowDown1 {
                        center,
                        absorber: *u,
                    });
                }
            }
            [u1, u2] => {
                if cfg.pairing(center, *u1) == one
                    && cfg.pairing(center, *u2) == one
                    && Some(cfg.mult(center))
                        == cfg.mult(*u1).checked_add(&cfg.mult(*u2))
                {
                    moves.push(Move::BlowDown2 {
                        center,
                        absorbers: [*u1, *u2],
                    });
                }
            }
            _ => {}
        }
    }
    moves
}

/// One recorded step: the move plus exact summaries on both sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep<C> {
    pub mv: Move,
    pub before: ConfigSummary<C>,
    pub after: ConfigSummary<C>,
}

/// An ordered, replayable log of applied moves. Consecutive summaries agree:
/// the `after` of step k is the `before` of step k+1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct MoveTrace<C> {
    pub steps: Vec<TraceStep<C>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("step {step}: recorded pre-state does not match the configuration")]
    BeforeMismatch { step: usize },
    #[error("step {step}: recorded post-state does not match the move result")]
    AfterMismatch { step: usize },
    #[error("step {step}: {source}")]
    Move {
        step: usize,
        #[source]
        source: MoveError,
    },
}

impl<C: Coeff> MoveTrace<C> {
    pub fn new() -> Self {
        MoveTrace { steps: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn push_applied(
        &mut self,
        mv: Move,
        before: &CurveConfiguration<C>,
        after: &CurveConfiguration<C>,
    ) {
        self.steps.push(TraceStep {
            mv,
            before: before.summary().clone(),
            after: after.summary().clone(),
        });
    }

    /// Re-applies every move from `start`, checking the recorded summaries
    /// step by step, and returns the final configuration.
    pub fn replay(
        &self,
        start: &CurveConfiguration<C>,
    ) -> Result<CurveConfiguration<C>, ReplayError> {
        let mut current = start.clone();
        for (step, s) in self.steps.iter().enumerate() {
            if current.summary() != &s.before {
                return Err(ReplayError::BeforeMismatch { step });
            }
            current = apply_move(&current, &s.mv).map_err(|source| ReplayError::Move {
                step,
                source,
            })?;
            if current.summary() != &s.after {
                return Err(ReplayError::AfterMismatch { step });
            }
        }
        Ok(current)
    }

    pub fn kinds(&self) -> Vec<&'static str> {
        self.steps.iter().map(|s| s.mv.kind_name()).collect()
    }
}
