//! Deterministic DOT export of a configuration: nodes in canonical order
//! labeled `[coeffs] xm | sq=s g=g`, undirected edges labeled by the pairing.

use std::fmt::Write as _;

use crate::config::CurveConfiguration;
use crate::num::Coeff;

pub fn export_dot<C: Coeff>(cfg: &CurveConfiguration<C>) -> String {
    let mut out = String::new();
    out.push_str("graph config {\n");
    for (i, v) in cfg.vertices().iter().enumerate() {
        writeln!(
            out,
            "  v{i} [label=\"{} x{} | sq={} g={}\"];",
            v.class,
            v.mult,
            cfg.square(i),
            cfg.genus_of(i)
        )
        .expect("writing to a string");
    }
    for i in 0..cfg.len() {
        for j in (i + 1)..cfg.len() {
            if cfg.pairing(i, j) > C::zero() {
                writeln!(out, "  v{i} -- v{j} [label=\"{}\"];", cfg.pairing(i, j))
                    .expect("writing to a string");
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Vertex;
    use crate::lattice::{class_from_coeffs, IntersectionLattice};

    fn cfg(
        lattice: IntersectionLattice<i64>,
        verts: &[(&[i64], i64)],
    ) -> CurveConfiguration<i64> {
        CurveConfiguration::from_lattice(
            lattice,
            verts
                .iter()
                .map(|(c, m)| Vertex::new(class_from_coeffs(c), *m))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn single_node_no_edges() {
        let c = cfg(IntersectionLattice::cp2_blowup(0), &[(&[1], 1)]);
        let dot = export_dot(&c);
        assert_eq!(dot, "graph config {\n  v0 [label=\"[1] x1 | sq=1 g=0\"];\n}\n");
    }

    #[test]
    fn cremona_edges_from_the_pairing_table() {
        let c = cfg(
            IntersectionLattice::cp2_blowup(5),
            &[
                (&[1, -1, -1, -1, 0, 0], 2),
                (&[1, -1, 0, 0, -1, -1], 2),
                (&[0, 1, 0, 0, 0, 0], 4),
                (&[2, 0, -1, -1, -1, 0], 1),
            ],
        );
        let dot = export_dot(&c);
        // Canonical order: E₁, H−E₁−E₂−E₃, H−E₁−E₄−E₅, 2H−E₂−E₃−E₄.
        assert_eq!(dot.matches(" -- ").count(), 3);
        assert!(dot.contains("v0 -- v1 [label=\"1\"];"));
        assert!(dot.contains("v0 -- v2 [label=\"1\"];"));
        assert!(dot.contains("v2 -- v3 [label=\"1\"];"));
    }

    #[test]
    fn output_is_reproducible() {
        let c = cfg(
            IntersectionLattice::cp2_blowup(2),
            &[(&[2, -1, 0], 1), (&[0, 1, -1], 1), (&[0, 0, 1], 1)],
        );
        assert_eq!(export_dot(&c), export_dot(&c));
    }
}
