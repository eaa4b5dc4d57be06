//! Weighted graphs over an intersection lattice: vertices carry a class and a
//! positive multiplicity, edges are derived from the pairing and never stored.
//!
//! A *curve configuration* is a weighted graph in which every vertex has
//! adjunction number at least −2 and all pairwise pairings are non-negative
//! (edges carry the pairing as a positive label). Those two conditions are
//! what [`CurveConfiguration::validate`] reports on.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::lattice::{HomologyClass, IntersectionLattice, LatticeError};
use crate::num::{cadd, cmul, from_usize, Coeff, OverflowError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("vertex {index} has negative multiplicity")]
    NegativeMultiplicity { index: usize },
    #[error("vertex {index}: class has length {got}, lattice rank is {expected}")]
    VertexDimension {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

impl From<OverflowError> for ConfigError {
    fn from(e: OverflowError) -> Self {
        ConfigError::Lattice(e.into())
    }
}

/// One component: a class together with its multiplicity.
///
/// Equal classes on distinct vertices are allowed; vertex identity is
/// positional, not class-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Vertex<C> {
    pub class: HomologyClass<C>,
    pub mult: C,
}

impl<C: Coeff> Vertex<C> {
    pub fn new(class: HomologyClass<C>, mult: C) -> Self {
        Vertex { class, mult }
    }
}

/// One violation of the curve-configuration conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ConfigViolation<C> {
    EmptyConfiguration,
    AdjunctionBelowMinimum { vertex: usize, adjunction: C },
    NegativePairing { first: usize, second: usize, pairing: C },
}

impl<C: fmt::Display> fmt::Display for ConfigViolation<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigViolation::EmptyConfiguration => write!(f, "empty configuration"),
            ConfigViolation::AdjunctionBelowMinimum { vertex, adjunction } => {
                write!(f, "vertex {vertex} has adjunction number {adjunction} < -2")
            }
            ConfigViolation::NegativePairing {
                first,
                second,
                pairing,
            } => write!(f, "vertices {first} and {second} pair to {pairing} < 0"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ValidationReport<C: fmt::Debug> {
    pub violations: Vec<ConfigViolation<C>>,
}

impl<C: fmt::Debug + fmt::Display> fmt::Display for ValidationReport<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid curve configuration: ")?;
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Exact numerical summary of a configuration.
///
/// `l_g` sums `l` over vertices unweighted by multiplicity, `weighted_l` is
/// `Σ mᵢ·l_{eᵢ}`, and `l_total` is `l` of the total class (the `L` of the
/// dimension bounds).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfigSummary<C> {
    pub total: HomologyClass<C>,
    pub genus_total: C,
    pub genus_sum: C,
    pub weighted_genus_sum: C,
    pub total_mult: C,
    pub l_g: C,
    pub weighted_l: C,
    pub l_total: C,
    pub edge_label_sum: C,
}

/// An immutable curve configuration with derived data (pairings, per-vertex
/// invariants, summary) computed once at construction with checked
/// arithmetic.
///
/// Vertices are stored in canonical order (class coefficients lexicographic,
/// then multiplicity ascending), so structural equality is multiset equality.
/// Zero-multiplicity vertices contribute nothing and are dropped on
/// construction; negative multiplicities are rejected.
#[derive(Debug, Clone)]
pub struct CurveConfiguration<C: Coeff> {
    lattice: Arc<IntersectionLattice<C>>,
    vertices: Vec<Vertex<C>>,
    pairings: Vec<Vec<C>>,
    adjunctions: Vec<C>,
    genera: Vec<C>,
    iotas: Vec<C>,
    ls: Vec<C>,
    total_pairings: Vec<C>,
    summary: ConfigSummary<C>,
}

impl<C: Coeff> PartialEq for CurveConfiguration<C> {
    fn eq(&self, other: &Self) -> bool {
        self.lattice == other.lattice && self.vertices == other.vertices
    }
}

impl<C: Coeff> Eq for CurveConfiguration<C> {}

// Serializes the defining data only; the caches are reconstructed on parse.
impl<C: Coeff + Serialize> Serialize for CurveConfiguration<C> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("CurveConfiguration", 2)?;
        s.serialize_field("lattice", self.lattice.as_ref())?;
        s.serialize_field("vertices", &self.vertices)?;
        s.end()
    }
}

impl<C: Coeff> CurveConfiguration<C> {
    pub fn new(
        lattice: Arc<IntersectionLattice<C>>,
        vertices: Vec<Vertex<C>>,
    ) -> Result<Self, ConfigError> {
        let rank = lattice.rank();
        for (index, v) in vertices.iter().enumerate() {
            if v.mult.is_negative() {
                return Err(ConfigError::NegativeMultiplicity { index });
            }
            if v.class.rank() != rank {
                return Err(ConfigError::VertexDimension {
                    index,
                    expected: rank,
                    got: v.class.rank(),
                });
            }
        }
        let mut vertices: Vec<Vertex<C>> =
            vertices.into_iter().filter(|v| !v.mult.is_zero()).collect();
        vertices.sort();

        let n = vertices.len();
        let mut pairings = vec![vec![C::zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                let p = lattice.pair(&vertices[i].class, &vertices[j].class)?;
                pairings[i][j] = p;
                pairings[j][i] = p;
            }
        }
        let mut adjunctions = Vec::with_capacity(n);
        let mut genera = Vec::with_capacity(n);
        let mut iotas = Vec::with_capacity(n);
        let mut ls = Vec::with_capacity(n);
        for v in &vertices {
            adjunctions.push(lattice.adjunction(&v.class)?);
            genera.push(lattice.genus(&v.class)?);
            let d = lattice.j_dimension(&v.class)?;
            iotas.push(d.iota);
            ls.push(d.l);
        }

        let mut total = HomologyClass::zero(rank);
        for v in &vertices {
            total = total
                .checked_add_scaled(v.mult, &v.class)
                .map_err(LatticeError::from)?;
        }
        let mut total_pairings = vec![C::zero(); n];
        for i in 0..n {
            let mut acc = C::zero();
            for j in 0..n {
                acc = cadd(acc, cmul(vertices[j].mult, pairings[j][i])?)
                    .map_err(LatticeError::from)?;
            }
            total_pairings[i] = acc;
        }

        let mut genus_sum = C::zero();
        let mut weighted_genus_sum = C::zero();
        let mut total_mult = C::zero();
        let mut l_g = C::zero();
        let mut weighted_l = C::zero();
        for (i, v) in vertices.iter().enumerate() {
            genus_sum = cadd(genus_sum, genera[i]).map_err(LatticeError::from)?;
            weighted_genus_sum = cadd(weighted_genus_sum, cmul(v.mult, genera[i])?)
                .map_err(LatticeError::from)?;
            total_mult = cadd(total_mult, v.mult).map_err(LatticeError::from)?;
            l_g = cadd(l_g, ls[i]).map_err(LatticeError::from)?;
            weighted_l =
                cadd(weighted_l, cmul(v.mult, ls[i])?).map_err(LatticeError::from)?;
        }
        let mut edge_label_sum = C::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                edge_label_sum =
                    cadd(edge_label_sum, pairings[i][j]).map_err(LatticeError::from)?;
            }
        }
        let genus_total = lattice.genus(&total)?;
        let l_total = lattice.j_dimension(&total)?.l;

        let summary = ConfigSummary {
            total,
            genus_total,
            genus_sum,
            weighted_genus_sum,
            total_mult,
            l_g,
            weighted_l,
            l_total,
            edge_label_sum,
        };
        Ok(CurveConfiguration {
            lattice,
            vertices,
            pairings,
            adjunctions,
            genera,
            iotas,
            ls,
            total_pairings,
            summary,
        })
    }

    pub fn from_lattice(
        lattice: IntersectionLattice<C>,
        vertices: Vec<Vertex<C>>,
    ) -> Result<Self, ConfigError> {
        CurveConfiguration::new(Arc::new(lattice), vertices)
    }

    pub fn lattice(&self) -> &Arc<IntersectionLattice<C>> {
        &self.lattice
    }

    pub fn vertices(&self) -> &[Vertex<C>] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn class(&self, i: usize) -> &HomologyClass<C> {
        &self.vertices[i].class
    }

    pub fn mult(&self, i: usize) -> C {
        self.vertices[i].mult
    }

    /// Pairing of the classes of vertices `i` and `j`; the edge label when
    /// positive.
    pub fn pairing(&self, i: usize, j: usize) -> C {
        self.pairings[i][j]
    }

    /// Self-intersection of the class of vertex `i`.
    pub fn square(&self, i: usize) -> C {
        self.pairings[i][i]
    }

    pub fn adjunction_of(&self, i: usize) -> C {
        self.adjunctions[i]
    }

    pub fn genus_of(&self, i: usize) -> C {
        self.genera[i]
    }

    pub fn iota_of(&self, i: usize) -> C {
        self.iotas[i]
    }

    pub fn l_of(&self, i: usize) -> C {
        self.ls[i]
    }

    /// Pairing of the total class with the class of vertex `i`.
    pub fn total_pairing(&self, i: usize) -> C {
        self.total_pairings[i]
    }

    pub fn total_class(&self) -> &HomologyClass<C> {
        &self.summary.total
    }

    pub fn summary(&self) -> &ConfigSummary<C> {
        &self.summary
    }

    /// Indices adjoined to `i` (positive pairing), ascending.
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&j| j != i && self.pairings[i][j] > C::zero())
            .collect()
    }

    /// Checks the two curve-configuration conditions: every vertex has
    /// adjunction number at least −2, and all pairwise pairings are
    /// non-negative. An empty configuration is reported as degenerate.
    pub fn validate(&self) -> Result<(), ValidationReport<C>> {
        let mut violations = Vec::new();
        if self.vertices.is_empty() {
            violations.push(ConfigViolation::EmptyConfiguration);
        }
        let minus_two = -(C::one() + C::one());
        for (i, &adj) in self.adjunctions.iter().enumerate() {
            if adj < minus_two {
                violations.push(ConfigViolation::AdjunctionBelowMinimum {
                    vertex: i,
                    adjunction: adj,
                });
            }
        }
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                if self.pairings[i][j].is_negative() {
                    violations.push(ConfigViolation::NegativePairing {
                        first: i,
                        second: j,
                        pairing: self.pairings[i][j],
                    });
                }
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(ValidationReport { violations })
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Graph connectivity, edges being the pairs with positive pairing.
    /// Single-vertex configurations are connected; the empty one is not.
    pub fn is_connected(&self) -> bool {
        let n = self.len();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if !seen[j] && self.pairings[i][j] > C::zero() {
                    seen[j] = true;
                    count += 1;
                    stack.push(j);
                }
            }
        }
        count == n
    }

    /// Nef graph: the total class pairs non-negatively with every vertex.
    pub fn is_nef(&self) -> bool {
        self.total_pairings.iter().all(|p| !p.is_negative())
    }

    /// Tree: connected with edge-label sum exactly (vertex count − 1), the
    /// minimum ensuring connectivity.
    pub fn is_tree(&self) -> bool {
        if !self.is_connected() {
            return false;
        }
        let n1 = from_usize::<C>(self.len() - 1).expect("vertex count fits the scalar");
        self.summary.edge_label_sum == n1
    }

    pub fn is_simple_tree(&self) -> bool {
        self.is_tree() && self.vertices.iter().all(|v| v.mult == C::one())
    }

    /// Rebuilds the configuration with a different vertex list over the same
    /// lattice.
    pub fn with_vertices(&self, vertices: Vec<Vertex<C>>) -> Result<Self, ConfigError> {
        CurveConfiguration::new(Arc::clone(&self.lattice), vertices)
    }
}

impl<C: Coeff> fmt::Display for CurveConfiguration<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({} x{})", v.class, v.mult)?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::class_from_coeffs;

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

    fn multi1_example() -> CurveConfiguration<i64> {
        cfg(
            L::cp2_blowup(3),
            &[
                (&[1, -1, -1, -1], 2),
                (&[1, 0, 0, 0], 1),
                (&[1, 0, 0, 0], 1),
                (&[1, 0, 0, 0], 1),
                (&[0, 1, 0, 0], 1),
            ],
        )
    }

    fn cremona_example() -> CurveConfiguration<i64> {
        cfg(
            L::cp2_blowup(5),
            &[
                (&[1, -1, -1, -1, 0, 0], 2),
                (&[1, -1, 0, 0, -1, -1], 2),
                (&[0, 1, 0, 0, 0, 0], 4),
                (&[2, 0, -1, -1, -1, 0], 1),
            ],
        )
    }

    #[test]
    fn multi1_example_is_valid() {
        assert!(multi1_example().validate().is_ok());
    }

    #[test]
    fn negative_pairing_is_reported() {
        // Two distinct components in the same square-−2 class pair to −2.
        let c = cfg(L::cp2_blowup(2), &[(&[0, 1, -1], 1), (&[0, 1, -1], 1)]);
        let report = c.validate().unwrap_err();
        assert!(report.violations.iter().any(|v| matches!(
            v,
            ConfigViolation::NegativePairing { pairing: -2, .. }
        )));
    }

    #[test]
    fn empty_configuration_is_flagged() {
        let c = CurveConfiguration::from_lattice(L::cp2_blowup(0), Vec::new()).unwrap();
        let report = c.validate().unwrap_err();
        assert_eq!(report.violations, vec![ConfigViolation::EmptyConfiguration]);
    }

    #[test]
    fn zero_multiplicity_vertices_are_dropped() {
        let c = cfg(L::cp2_blowup(0), &[(&[1], 0), (&[2], 1)]);
        assert_eq!(c.len(), 1);
        assert_eq!(c.mult(0), 1);
    }

    #[test]
    fn negative_multiplicity_is_rejected() {
        let err = CurveConfiguration::from_lattice(
            L::cp2_blowup(0),
            vec![Vertex::new(class_from_coeffs(&[1]), -1i64)],
        )
        .unwrap_err();
        assert!(matches!(err, ConfigError::NegativeMultiplicity { index: 0 }));
    }

    #[test]
    fn cremona_total_class() {
        let c = cremona_example();
        assert_eq!(c.total_class(), &class_from_coeffs(&[6, 0, -3, -3, -3, -2]));
        assert_eq!(c.summary().genus_total, 0);
    }

    #[test]
    fn multi1_total_class() {
        let c = multi1_example();
        assert_eq!(c.total_class(), &class_from_coeffs(&[5, -1, -2, -2]));
        assert_eq!(c.summary().genus_total, 4);
        assert_eq!(c.summary().genus_sum, 0);
        assert_eq!(c.summary().weighted_genus_sum, 0);
    }

    #[test]
    fn single_vertex_total_is_identity() {
        let c = cfg(L::cp2_blowup(0), &[(&[2], 1)]);
        assert_eq!(c.total_class(), &class_from_coeffs(&[2]));
    }

    #[test]
    fn disconnected_example() {
        let c = cfg(L::cp2_blowup(2), &[(&[3, -1, -1], 1), (&[0, 1, -1], 1)]);
        assert!(c.validate().is_ok());
        assert!(!c.is_connected());
        assert_eq!(c.total_class(), &class_from_coeffs(&[3, 0, -2]));
        assert!(!c.is_nef());
    }

    #[test]
    fn cremona_is_connected_and_nef() {
        let c = cremona_example();
        assert!(c.is_connected());
        assert!(c.is_nef());
    }

    #[test]
    fn single_vertex_is_connected_and_nef() {
        let c = cfg(L::cp2_blowup(0), &[(&[1], 1)]);
        assert!(c.is_connected());
        assert!(c.is_nef());
        assert!(c.is_tree());
        assert!(c.is_simple_tree());
    }

    #[test]
    fn double_anticanonical_is_not_nef() {
        let c = cfg(
            L::cp2_blowup(10),
            &[(&[3, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1], 2)],
        );
        assert!(c.validate().is_ok());
        assert!(!c.is_nef());
        assert_eq!(c.total_pairing(0), -2);
    }

    #[test]
    fn tree_detection() {
        let tree = cfg(
            L::cp2_blowup(5),
            &[
                (&[2, 0, -1, -1, -1, -1], 1),
                (&[2, 0, -1, -1, -1, -1], 1),
                (&[2, 0, -1, -1, -1, 0], 1),
            ],
        );
        assert!(tree.is_tree());
        assert!(tree.is_simple_tree());
        assert_eq!(tree.summary().edge_label_sum, 2);

        let lines = cfg(L::cp2_blowup(0), &[(&[1], 1), (&[1], 1), (&[1], 1)]);
        assert!(lines.is_connected());
        assert!(!lines.is_tree());
        assert_eq!(lines.summary().edge_label_sum, 3);
    }

    #[test]
    fn comb_summary_on_ruled_lattice() {
        let c = cfg(
            L::ruled_blowup(2),
            &[(&[1, 0, -1, -1], 1), (&[0, 1, 0, 0], 1), (&[0, 1, 0, 0], 1)],
        );
        assert_eq!(c.total_class(), &class_from_coeffs(&[1, 2, -1, -1]));
        let s = c.summary();
        assert_eq!(s.genus_total, 0);
        assert_eq!(s.l_g, 2);
        assert_eq!(s.l_total, 3);
        assert_eq!(s.weighted_l, 2);
    }

    #[test]
    fn conic_summary() {
        let c = cfg(L::cp2_blowup(0), &[(&[2], 1)]);
        let s = c.summary();
        assert_eq!(s.l_total, 5);
        assert_eq!(s.l_g, 5);
    }

    #[test]
    fn canonical_order_is_permutation_invariant() {
        let a = cremona_example();
        let b = cfg(
            L::cp2_blowup(5),
            &[
                (&[2, 0, -1, -1, -1, 0], 1),
                (&[0, 1, 0, 0, 0, 0], 4),
                (&[1, -1, 0, 0, -1, -1], 2),
                (&[1, -1, -1, -1, 0, 0], 2),
            ],
        );
        assert_eq!(a, b);
    }

    #[test]
    fn duplicate_vertices_are_kept_distinct() {
        let c = cfg(L::cp2_blowup(0), &[(&[1], 1), (&[1], 1), (&[1], 1)]);
        assert_eq!(c.len(), 3);
    }

    #[test]
    fn already_sorted_input_is_unchanged() {
        let c = multi1_example();
        let again = c.with_vertices(c.vertices().to_vec()).unwrap();
        assert_eq!(c, again);
        assert_eq!(c.vertices(), again.vertices());
    }
}
