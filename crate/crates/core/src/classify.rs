//! Genus-zero structure theorems: the tree theorem, the dimension bound, and
//! the taxonomy of maximal-dimension (codimension-one) reducible
//! configurations on a lattice with `b⁺ = 1`.
//!
//! A "centered graph" here is a star: one center, every other vertex attached
//! to it by an edge of label 1 and to nothing else. A comb is the centered
//! graph of the classification: one spike of square `1−n` and `n−1 ≥ 2`
//! identical square-zero teeth, all multiplicities 1.

use serde::Serialize;
use thiserror::Error;

use crate::config::CurveConfiguration;
use crate::moves::{apply_move, Move, MoveTrace};
use crate::num::{from_usize, Coeff};

/// Hypothesis failure for a check; carries the clause that failed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("not applicable: {reason}")]
pub struct NotApplicable {
    pub reason: String,
}

fn out_of_hypothesis<T>(reason: impl Into<String>) -> Result<T, NotApplicable> {
    Err(NotApplicable {
        reason: reason.into(),
    })
}

/// Tree theorem outcome: for a connected nef configuration of total genus 0,
/// every vertex genus must vanish and the graph must be a tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeTheoremReport<C> {
    pub vertex_genera: Vec<C>,
    pub all_genus_zero: bool,
    pub tree: bool,
}

impl<C> TreeTheoremReport<C> {
    pub fn holds(&self) -> bool {
        self.all_genus_zero && self.tree
    }
}

fn require_genus0_hypotheses<C: Coeff>(
    cfg: &CurveConfiguration<C>,
) -> Result<(), NotApplicable> {
    if let Err(report) = cfg.validate() {
        return out_of_hypothesis(report.to_string());
    }
    if !cfg.is_connected() {
        return out_of_hypothesis("configuration is not connected");
    }
    if !cfg.is_nef() {
        return out_of_hypothesis("configuration is not nef");
    }
    if !cfg.summary().genus_total.is_zero() {
        return out_of_hypothesis(format!(
            "total class has genus {}, not 0",
            cfg.summary().genus_total
        ));
    }
    Ok(())
}

pub fn check_tree_theorem<C: Coeff>(
    cfg: &CurveConfiguration<C>,
) -> Result<TreeTheoremReport<C>, NotApplicable> {
    require_genus0_hypotheses(cfg)?;
    let vertex_genera: Vec<C> = (0..cfg.len()).map(|i| cfg.genus_of(i)).collect();
    let all_genus_zero = vertex_genera.iter().all(|g| g.is_zero());
    Ok(TreeTheoremReport {
        all_genus_zero,
        tree: cfg.is_tree(),
        vertex_genera,
    })
}

/// Dimension bound outcome: `Σ mᵢ l_{eᵢ} ≤ L − 1` for reducible genus-0
/// configurations, hence `l_G ≤ L − 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionBoundReport<C> {
    pub weighted_l: C,
    pub l_g: C,
    pub l_total: C,
    /// `L − 1 − Σ mᵢ l_{eᵢ}`; non-negative exactly when the bound holds.
    pub slack: C,
}

impl<C: Coeff> DimensionBoundReport<C> {
    pub fn holds(&self) -> bool {
        !self.slack.is_negative()
    }
}

fn is_reducible<C: Coeff>(cfg: &CurveConfiguration<C>) -> bool {
    cfg.len() >= 2 || (cfg.len() == 1 && cfg.mult(0) > C::one())
}

pub fn check_dimension_bound<C: Coeff>(
    cfg: &CurveConfiguration<C>,
) -> Result<DimensionBoundReport<C>, NotApplicable> {
    require_genus0_hypotheses(cfg)?;
    if !is_reducible(cfg) {
        return out_of_hypothesis("configuration is irreducible");
    }
    let s = cfg.summary();
    Ok(DimensionBoundReport {
        weighted_l: s.weighted_l,
        l_g: s.l_g,
        l_total: s.l_total,
        slack: s.l_total - C::one() - s.weighted_l,
    })
}

/// A star decomposition: one center, each tooth attached to the center by an
/// edge of label 1 and to nothing else.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CenteredGraph {
    pub center: usize,
    pub teeth: Vec<usize>,
}

/// Star detection. A single vertex counts as centered with zero teeth (a
/// degenerate convention). With two vertices either one qualifies; the least
/// index wins.
pub fn is_centered_graph<C: Coeff>(cfg: &CurveConfiguration<C>) -> Option<CenteredGraph> {
    let n = cfg.len();
    if n == 0 {
        return None;
    }
    if n == 1 {
        return Some(CenteredGraph {
            center: 0,
            teeth: Vec::new(),
        });
    }
    'candidates: for center in 0..n {
        for v in 0..n {
            if v == center {
                continue;
            }
            if cfg.pairing(v, center) != C::one() {
                continue 'candidates;
            }
            for w in 0..n {
                if w != v && w != center && !cfg.pairing(v, w).is_zero() {
                    continue 'candidates;
                }
            }
        }
        return Some(CenteredGraph {
            center,
            teeth: (0..n).filter(|&v| v != center).collect(),
        });
    }
    None
}

/// Comb recognition: all multiplicities 1; exactly one spike of square
/// `1 − n ≤ −2`; the other `n−1 ≥ 2` vertices share one square-zero class,
/// each meeting the spike once and nothing else.
pub fn comb_structure<C: Coeff>(cfg: &CurveConfiguration<C>) -> Option<CenteredGraph> {
    let n = cfg.len();
    if n < 3 {
        return None;
    }
    if cfg.vertices().iter().any(|v| v.mult != C::one()) {
        return None;
    }
    let negatives: Vec<usize> = (0..n).filter(|&i| cfg.square(i).is_negative()).collect();
    let [spike] = negatives.as_slice() else {
        return None;
    };
    let spike = *spike;
    let expected_sq = C::one() - from_usize::<C>(n).ok()?;
    if cfg.square(spike) != expected_sq {
        return None;
    }
    let teeth: Vec<usize> = (0..n).filter(|&v| v != spike).collect();
    let tooth_class = cfg.class(teeth[0]);
    for &t in &teeth {
        if cfg.class(t) != tooth_class || !cfg.square(t).is_zero() {
            return None;
        }
        if cfg.pairing(t, spike) != C::one() {
            return None;
        }
        for &u in &teeth {
            if u != t && !cfg.pairing(t, u).is_zero() {
                return None;
            }
        }
    }
    Some(CenteredGraph {
        center: spike,
        teeth,
    })
}

/// Classification outcome for a codimension-one configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Codim1Class<C: Coeff> {
    /// Two multiplicity-1 vertices of non-negative square meeting once.
    TwoVertex { first: usize, second: usize },
    /// A comb: spike plus identical square-zero teeth.
    Comb { spike: usize, teeth: Vec<usize> },
    /// Reduces by simple combinatorial blow-downs to a single vertex of
    /// non-negative square; the witness replays to `base`.
    BlowupOfSmooth {
        witness: MoveTrace<C>,
        base: CurveConfiguration<C>,
    },
    /// Reduces by simple combinatorial blow-downs to a comb.
    BlowupOfComb {
        witness: MoveTrace<C>,
        base: CurveConfiguration<C>,
    },
    /// In hypothesis but not of maximal dimension (`l_G < L − 1`).
    NotCodim1,
    /// Some hypothesis of the classification fails.
    NotApplicable { reason: String },
}

impl<C: Coeff> Codim1Class<C> {
    pub fn tag(&self) -> &'static str {
        match self {
            Codim1Class::TwoVertex { .. } => "two_vertex",
            Codim1Class::Comb { .. } => "comb",
            Codim1Class::BlowupOfSmooth { .. } => "blowup_of_smooth",
            Codim1Class::BlowupOfComb { .. } => "blowup_of_comb",
            Codim1Class::NotCodim1 => "not_codim1",
            Codim1Class::NotApplicable { .. } => "not_applicable",
        }
    }

    pub fn witness(&self) -> Option<&MoveTrace<C>> {
        match self {
            Codim1Class::BlowupOfSmooth { witness, .. }
            | Codim1Class::BlowupOfComb { witness, .. } => Some(witness),
            _ => None,
        }
    }
}

/// A configuration meeting every hypothesis of the classification that fits
/// none of its cases.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("classification violation: {detail}")]
pub struct Codim1Violation {
    pub detail: String,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum BlowdownTarget {
    SmoothVertex,
    Comb,
}

/// All simple combinatorial blow-downs applicable to `cfg`, canonical order.
fn applicable_blow_downs<C: Coeff>(cfg: &CurveConfiguration<C>) -> Vec<Move> {
    crate::moves::applicable_moves(cfg)
        .into_iter()
        .filter(Move::is_blow_down)
        .collect()
}

fn has_minus_one_vertex<C: Coeff>(cfg: &CurveConfiguration<C>) -> bool {
    (0..cfg.len()).any(|i| cfg.square(i) == -C::one())
}

/// Squares of every vertex a blow-down touches: the removed −1 vertex, its
/// absorbers and the merged results.
fn blow_down_squares<C: Coeff>(cfg: &CurveConfiguration<C>, mv: &Move) -> Vec<C> {
    match mv {
        Move::BlowDown1 { center, absorber } => {
            let merged = cfg.square(*absorber) + C::one();
            vec![cfg.square(*center), cfg.square(*absorber), merged]
        }
        Move::BlowDown2 { center, absorbers } => {
            let m0 = cfg.square(absorbers[0]) + C::one();
            let m1 = cfg.square(absorbers[1]) + C::one();
            vec![
                cfg.square(*center),
                cfg.square(absorbers[0]),
                cfg.square(absorbers[1]),
                m0,
                m1,
            ]
        }
        _ => unreachable!("blow-down squares requested for a non-blow-down move"),
    }
}

fn terminal_matches<C: Coeff>(cfg: &CurveConfiguration<C>, target: BlowdownTarget) -> bool {
    match target {
        BlowdownTarget::SmoothVertex => {
            cfg.len() == 1 && !cfg.square(0).is_negative()
        }
        BlowdownTarget::Comb => comb_structure(cfg).is_some(),
    }
}

/// Depth-first search over blow-down sequences. Intermediate steps may only
/// touch negative squares; for the smooth-vertex target the final merge is
/// exempt. First success in canonical order wins.
fn search_blow_downs<C: Coeff>(
    cfg: &CurveConfiguration<C>,
    target: BlowdownTarget,
    trace: &mut MoveTrace<C>,
) -> Option<CurveConfiguration<C>> {
    if !has_minus_one_vertex(cfg) {
        return terminal_matches(cfg, target).then(|| cfg.clone());
    }
    for mv in applicable_blow_downs(cfg) {
        let all_negative = blow_down_squares(cfg, &mv)
            .iter()
            .all(|s| s.is_negative());
        let next = match apply_move(cfg, &mv) {
            Ok(next) => next,
            Err(_) => continue,
        };
        if all_negative {
            trace.push_applied(mv, cfg, &next);
            if let Some(base) = search_blow_downs(&next, target, trace) {
                return Some(base);
            }
            trace.steps.pop();
        } else if target == BlowdownTarget::SmoothVertex
            && !has_minus_one_vertex(&next)
            && terminal_matches(&next, target)
        {
            trace.push_applied(mv, cfg, &next);
            return Some(next);
        }
    }
    None
}

/// Classifies a maximal-dimension configuration per the taxonomy: two
/// non-negative vertices meeting once; a comb; or a configuration that blows
/// down to a smooth vertex or to a comb, with a replayable witness.
///
/// Hypotheses: valid, connected, nef, total genus 0, `b⁺ = 1`, reducible —
/// failures return [`Codim1Class::NotApplicable`] — and `l_G = L − 1`, whose
/// failure returns [`Codim1Class::NotCodim1`]. A hypothesis-satisfying
/// configuration that fits no case is a theorem violation.
pub fn classify_codim1<C: Coeff>(
    cfg: &CurveConfiguration<C>,
) -> Result<Codim1Class<C>, Codim1Violation> {
    if let Err(na) = require_genus0_hypotheses(cfg) {
        return Ok(Codim1Class::NotApplicable { reason: na.reason });
    }
    if !is_reducible(cfg) {
        return Ok(Codim1Class::NotApplicable {
            reason: "configuration is irreducible".into(),
        });
    }
    let sig = cfg.lattice().signature();
    if sig.b_plus != 1 {
        return Ok(Codim1Class::NotApplicable {
            reason: format!("lattice has b⁺ = {}, classification needs b⁺ = 1", sig.b_plus),
        });
    }
    let s = cfg.summary();
    if s.l_g != s.l_total - C::one() {
        return Ok(Codim1Class::NotCodim1);
    }

    if cfg.len() == 2
        && cfg.mult(0) == C::one()
        && cfg.mult(1) == C::one()
        && !cfg.square(0).is_negative()
        && !cfg.square(1).is_negative()
    {
        if cfg.pairing(0, 1) == C::one() {
            return Ok(Codim1Class::TwoVertex { first: 0, second: 1 });
        }
        return Err(Codim1Violation {
            detail: format!(
                "two non-negative vertices at maximal dimension must meet once, pairing is {}",
                cfg.pairing(0, 1)
            ),
        });
    }
    if let Some(comb) = comb_structure(cfg) {
        return Ok(Codim1Class::Comb {
            spike: comb.center,
            teeth: comb.teeth,
        });
    }
    if has_minus_one_vertex(cfg) {
        let mut witness = MoveTrace::new();
        if let Some(base) = search_blow_downs(cfg, BlowdownTarget::SmoothVertex, &mut witness) {
            return Ok(Codim1Class::BlowupOfSmooth { witness, base });
        }
        let mut witness = MoveTrace::new();
        if let Some(base) = search_blow_downs(cfg, BlowdownTarget::Comb, &mut witness) {
            return Ok(Codim1Class::BlowupOfComb { witness, base });
        }
        return Err(Codim1Violation {
            detail: "configuration with a −1 vertex admits no blow-down path to a smooth vertex or a comb"
                .into(),
        });
    }
    Err(Codim1Violation {
        detail: "maximal-dimension configuration fits no case of the taxonomy".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Vertex;
    use crate::lattice::{class_from_coeffs, IntersectionLattice};

    type L = IntersectionLattice<i64>;

    fn cfg(lattice: L, verts: &[(&[i64], i64)]) -> CurveConfiguration<i64> {
        CurveConfiguration::from_lattice(
            lattice,
            verts
                .iter()
                .map(|(c, m)| Vertex::new(class_from_coeffs(c), *m))
                .collect(),
        )
        .unwrap()
    }

    fn ruled_comb() -> CurveConfiguration<i64> {
        cfg(
            L::ruled_blowup(2),
            &[(&[1, 0, -1, -1], 1), (&[0, 1, 0, 0], 1), (&[0, 1, 0, 0], 1)],
        )
    }

    #[test]
    fn tree_theorem_on_cremona() {
        let c = cfg(
            L::cp2_blowup(5),
            &[
                (&[1, -1, -1, -1, 0, 0], 2),
                (&[1, -1, 0, 0, -1, -1], 2),
                (&[0, 1, 0, 0, 0, 0], 4),
                (&[2, 0, -1, -1, -1, 0], 1),
            ],
        );
        let report = check_tree_theorem(&c).unwrap();
        assert!(report.all_genus_zero);
        assert!(report.tree);
        assert!(report.holds());
    }

    #[test]
    fn tree_theorem_on_two_lines() {
        let c = cfg(L::cp2_blowup(0), &[(&[1], 1), (&[1], 1)]);
        let report = check_tree_theorem(&c).unwrap();
        assert!(report.holds());
    }

    #[test]
    fn tree_theorem_out_of_hypothesis_for_positive_genus() {
        let c = cfg(
            L::cp2_blowup(3),
            &[
                (&[1, -1, -1, -1], 2),
                (&[1, 0, 0, 0], 1),
                (&[1, 0, 0, 0], 1),
                (&[1, 0, 0, 0], 1),
                (&[0, 1, 0, 0], 1),
            ],
        );
        assert!(check_tree_theorem(&c).is_err());
    }

    #[test]
    fn dimension_bound_on_comb() {
        let report = check_dimension_bound(&ruled_comb()).unwrap();
        assert_eq!(report.weighted_l, 2);
        assert_eq!(report.l_total, 3);
        assert_eq!(report.slack, 0);
        assert!(report.holds());
    }

    #[test]
    fn dimension_bound_on_conic_with_exceptional() {
        let c = cfg(L::cp2_blowup(1), &[(&[2, -1], 1), (&[0, 1], 1)]);
        let report = check_dimension_bound(&c).unwrap();
        assert_eq!(report.l_g, 4);
        assert_eq!(report.l_total, 5);
        assert_eq!(report.slack, 0);
    }

    #[test]
    fn dimension_bound_rejects_positive_genus_total() {
        let c = cfg(L::cp2_blowup(0), &[(&[1], 1), (&[1], 1), (&[1], 1)]);
        assert!(check_dimension_bound(&c).is_err());
    }

    #[test]
    fn classify_two_vertex() {
        let c = cfg(L::cp2_blowup(0), &[(&[1], 1), (&[1], 1)]);
        let got = classify_codim1(&c).unwrap();
        assert!(matches!(got, Codim1Class::TwoVertex { .. }));
    }

    #[test]
    fn classify_comb() {
        let got = classify_codim1(&ruled_comb()).unwrap();
        match got {
            Codim1Class::Comb { spike, teeth } => {
                assert_eq!(ruled_comb().square(spike), -2);
                assert_eq!(teeth.len(), 2);
            }
            other => panic!("expected comb, got {}", other.tag()),
        }
    }

    #[test]
    fn classify_blowup_of_smooth() {
        let c = cfg(
            L::cp2_blowup(2),
            &[(&[2, -1, 0], 1), (&[0, 1, -1], 1), (&[0, 0, 1], 1)],
        );
        let got = classify_codim1(&c).unwrap();
        match got {
            Codim1Class::BlowupOfSmooth { witness, base } => {
                assert_eq!(witness.len(), 2);
                assert_eq!(base.len(), 1);
                assert_eq!(base.class(0), &class_from_coeffs(&[2, 0, 0]));
                let replayed = witness.replay(&c).unwrap();
                assert_eq!(replayed, base);
            }
            other => panic!("expected blow-up of smooth, got {}", other.tag()),
        }
    }

    #[test]
    fn classify_blowup_of_comb() {
        let comb = ruled_comb();
        let spike = (0..comb.len()).find(|&i| comb.square(i) < 0).unwrap();
        let up = crate::moves::apply_blow_up_1(&comb, spike).unwrap();
        let got = classify_codim1(&up).unwrap();
        match got {
            Codim1Class::BlowupOfComb { witness, base } => {
                assert_eq!(witness.len(), 1);
                assert!(comb_structure(&base).is_some());
                assert_eq!(witness.replay(&up).unwrap(), base);
            }
            other => panic!("expected blow-up of comb, got {}", other.tag()),
        }
    }

    #[test]
    fn classify_not_codim1() {
        // Blow-up of the two-vertex configuration at its node drops two
        // dimensions.
        let c = cfg(
            L::cp2_blowup(1),
            &[(&[1, -1], 1), (&[1, -1], 1), (&[0, 1], 2)],
        );
        assert_eq!(classify_codim1(&c).unwrap(), Codim1Class::NotCodim1);
    }

    #[test]
    fn classify_rejects_non_nef() {
        let c = cfg(
            L::cp2_blowup(10),
            &[(&[3, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1], 2)],
        );
        assert!(matches!(
            classify_codim1(&c).unwrap(),
            Codim1Class::NotApplicable { .. }
        ));
    }

    #[test]
    fn centered_graph_detection() {
        let comb = ruled_comb();
        let star = is_centered_graph(&comb).unwrap();
        assert_eq!(comb.square(star.center), -2);
        assert_eq!(star.teeth.len(), 2);

        let lines = cfg(L::cp2_blowup(0), &[(&[1], 1), (&[1], 1), (&[1], 1)]);
        assert!(is_centered_graph(&lines).is_none());

        let single = cfg(L::cp2_blowup(0), &[(&[1], 1)]);
        let star = is_centered_graph(&single).unwrap();
        assert!(star.teeth.is_empty());
    }

    #[test]
    fn mult2_exceptional_chain_classifies_as_blowup_of_smooth() {
        // Arises from blowing up the node of (E₁−E₂)·E₂; the witness starts
        // with a type (2) blow-down on the multiplicity-2 vertex.
        let c = cfg(
            L::cp2_blowup(3),
            &[
                (&[2, -1, 0, 0], 1),
                (&[0, 1, -1, -1], 1),
                (&[0, 0, 1, -1], 1),
                (&[0, 0, 0, 1], 2),
            ],
        );
        let got = classify_codim1(&c).unwrap();
        match got {
            Codim1Class::BlowupOfSmooth { witness, base } => {
                assert_eq!(witness.len(), 3);
                assert_eq!(base.class(0), &class_from_coeffs(&[2, 0, 0, 0]));
            }
            other => panic!("expected blow-up of smooth, got {}", other.tag()),
        }
    }
}
