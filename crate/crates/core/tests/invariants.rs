mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

use common::*;
use toricdegen::exactmath::{solve_system, transpose};
use toricdegen::{build_report, lift_partition, normal_fan, LatticeVector, Partition, Rational};

fn sample() -> Vec<(String, Partition)> {
    let [a, b, _] = triptych();
    let mut out = vec![
        ("triptych (a)".to_string(), a.unwrap()),
        ("triptych (b)".to_string(), b.unwrap()),
        ("octagon".to_string(), octagon_cut()),
        ("segment".to_string(), segment_cut(5, &[1, 3])),
        ("open plane".to_string(), open_space(2)),
    ];
    for n in 2..=4 {
        out.push((format!("Γ({n})"), gamma_n(n)));
    }
    for k in 1..=3 {
        out.push((format!("Γ_4^{k}"), gamma_d(4, k)));
    }
    out
}

#[test]
fn intersections_of_pieces_have_expected_dimension() {
    for (name, g) in sample() {
        let n = g.rank();
        for size in 2..=g.pieces().len() {
            for subset in (0..g.pieces().len()).combinations(size) {
                let first = &g.pieces()[subset[0]];
                let mut meet = Some(first.clone());
                for &j in &subset[1..] {
                    let p = &g.pieces()[j];
                    meet = meet.and_then(|m| m.intersect(p.facets(), p.equations()).ok());
                }
                if let Some(m) = meet {
                    assert_eq!(m.dim() + size, n + 1, "{name}: pieces {subset:?}");
                }
            }
        }
    }
}

#[test]
fn pieces_meet_faces_in_full_dimension() {
    for (name, g) in sample() {
        let delta = g.ambient();
        for face in delta.faces() {
            let fp = delta.face_polytope(face);
            for (i, p) in g.pieces().iter().enumerate() {
                if let Ok(m) = p.intersect(fp.facets(), fp.equations()) {
                    assert_eq!(m.dim(), face.dim, "{name}: piece {i} on a {}-face", face.dim);
                }
            }
        }
    }
}

#[test]
fn interior_vertices_meet_n_plus_one_edges() {
    for (name, g) in sample() {
        let n = g.rank();
        for p in g.vertices() {
            let f = g.vertex_face(&p).unwrap();
            if f.ambient_dim == n {
                assert_eq!(g.all_edges_at(&p).len(), n + 1, "{name}: at {p}");
            }
            // restricted to its face, always one more edge than the face dimension
            assert_eq!(g.edges_at(&p).unwrap().len(), f.ambient_dim + 1, "{name}: at {p}");
        }
    }
}

#[test]
fn edges_at_nonsingular_vertices_sum_to_zero() {
    for (name, g) in sample() {
        for p in g.vertices() {
            if !g.is_vertex_nonsingular(&p) {
                continue;
            }
            let sum = g.edges_at(&p).unwrap().iter().fold(LatticeVector::zero(g.rank()), |acc, e| &acc + e);
            assert!(sum.is_zero(), "{name}: edges at {p} sum to {sum}");
        }
    }
}

#[test]
fn nonsingular_implies_balanced() {
    for (name, g) in sample() {
        let c = g.classify();
        if c.nonsingular == Some(true) {
            assert_eq!(c.balanced, Some(true), "{name}");
        }
    }
}

#[test]
fn restriction_preserves_semistability() {
    for (name, g) in sample() {
        if !g.ambient().is_compact() {
            continue;
        }
        for (fi, face) in g.ambient().faces().iter().enumerate() {
            if fi == 0 || face.dim == 0 {
                continue;
            }
            let (r, _) = g.restrict(fi).unwrap();
            assert!(r.is_semistable(), "{name}: restriction to face {fi}");
        }
    }
}

#[test]
fn lift_map_is_a_bijection_onto_non_vertical_faces() {
    for (name, g) in sample() {
        let (_, lifted) = lift_partition(Arc::new(g), 0, false).unwrap();
        let p = &lifted.polytope;
        let n = lifted.base_rank();
        let image: BTreeSet<usize> = lifted.lift_map.iter().copied().collect();
        assert_eq!(image.len(), lifted.lift_map.len(), "{name}: not injective");
        let delta_vertices: BTreeSet<_> = lifted.base().ambient().vertices().iter().cloned().collect();
        let mut lower = BTreeSet::new();
        for (fi, face) in p.faces().iter().enumerate() {
            let fp = p.face_polytope(face);
            // for compact Δ the non-vertical faces are exactly the bounded ones
            if lifted.project_face(fi).unwrap().dim() != face.dim {
                continue;
            }
            if face.dim == 0 && delta_vertices.contains(&fp.anchors()[0].truncated(n)) {
                continue;
            }
            lower.insert(fi);
        }
        assert_eq!(image, lower, "{name}");
    }
}

#[test]
fn component_count_and_dual_graph() {
    for (name, g) in sample() {
        let g = Arc::new(g);
        let (_, lifted) = lift_partition(Arc::clone(&g), 0, false).unwrap();
        let r = build_report(&lifted).unwrap();
        assert_eq!(r.components.len(), g.pieces().len(), "{name}");
        assert_eq!(r.dual_graph, g.dual_complex(), "{name}");
    }
}

fn in_some_cone(fan: &toricdegen::Fan, w: &[BigInt]) -> bool {
    let dim = w.len();
    let target: Vec<Rational> = w.iter().map(|x| Rational::from_integer(x.clone())).collect();
    fan.maximal_cones().any(|cone| {
        let rows: Vec<Vec<BigInt>> = cone.iter().map(|&r| fan.rays()[r].0.clone()).collect();
        if rows.len() != dim {
            return false;
        }
        solve_system(&transpose(&rows, dim), &target).is_some_and(|c| c.iter().all(|x| !x.is_negative()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn open_lift_fan_covers_the_upper_half_space(case in 0usize..4, w in prop::collection::vec(-4i64..=4, 4)) {
        let (g, n) = match case {
            0 => (gamma_n(2), 2),
            1 => (octagon_cut(), 2),
            2 => (gamma_n(3), 3),
            _ => (gamma_d(4, 2), 3),
        };
        let (_, lifted) = lift_partition(Arc::new(g), 0, false).unwrap();
        let fan = normal_fan(&lifted.polytope).unwrap();
        let w: Vec<BigInt> = w[..=n].iter().map(|&x| BigInt::from(x)).collect();
        prop_assert_eq!(in_some_cone(&fan, &w), !w[n].is_negative());
    }

    #[test]
    fn strip_lifts_satisfy_construction(w in 2i64..6, h in 1i64..4, cut in 1i64..5) {
        prop_assume!(cut < w);
        let rect = poly(&[&[0, 0], &[w, 0], &[0, h], &[w, h]]);
        let g = Partition::from_hyperplanes(rect, &lv(&[1, 0]), &[BigInt::from(cut)]).unwrap();
        let (integral, lifted) = lift_partition(Arc::new(g), 0, true).unwrap();
        prop_assert!(integral.has_unit_concavity());
        prop_assert!(lifted.nonsingular);
        prop_assert_eq!(lifted.lift_map.len(), lifted.base().faces().len());
    }
}
