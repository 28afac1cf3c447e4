use super::*;
use crate::mesh::generate::{build_rect_partition, DiagonalStyle, SubdomainSpec};
use crate::mesh::refine::refine;

fn unit() -> Rect {
    Rect::new(0.0, 0.0, 1.0, 1.0)
}

pub(crate) fn split2(nl: (usize, usize), nr: (usize, usize)) -> DecomposedMesh {
    build_rect_partition(
        unit(),
        &[
            SubdomainSpec::new(Rect::new(0.0, 0.0, 0.5, 1.0), nl.0, nl.1),
            SubdomainSpec::new(Rect::new(0.5, 0.0, 1.0, 1.0), nr.0, nr.1),
        ],
    )
    .unwrap()
}

pub(crate) fn quad4(res: [(usize, usize); 4]) -> DecomposedMesh {
    build_rect_partition(
        unit(),
        &[
            SubdomainSpec::new(Rect::new(0.0, 0.0, 0.5, 0.5), res[0].0, res[0].1),
            SubdomainSpec::new(Rect::new(0.5, 0.0, 1.0, 0.5), res[1].0, res[1].1),
            SubdomainSpec::new(Rect::new(0.0, 0.5, 0.5, 1.0), res[2].0, res[2].1),
            SubdomainSpec::new(Rect::new(0.5, 0.5, 1.0, 1.0), res[3].0, res[3].1),
        ],
    )
    .unwrap()
}

#[test]
fn split_non_matching_chain_lengths() {
    let mesh = split2((4, 4), (6, 6));
    assert_eq!(mesh.interfaces.len(), 1);
    let itf = &mesh.interfaces[0];
    assert_eq!(itf.chains[0].len(), 5);
    assert_eq!(itf.chains[1].len(), 7);
    assert!((itf.length() - 1.0).abs() < 1e-15);
    mesh.validate().unwrap();
}

#[test]
fn quadrants_have_four_interfaces_and_cross_point() {
    let mesh = quad4([(4, 4), (6, 6), (5, 5), (7, 7)]);
    assert_eq!(mesh.interfaces.len(), 4);
    // Every interface has one endpoint at the cross point (0.5, 0.5).
    for itf in &mesh.interfaces {
        let hit = dist(itf.start, [0.5, 0.5]) < 1e-15 || dist(itf.end, [0.5, 0.5]) < 1e-15;
        assert!(hit, "interface {} misses the cross point", itf.id);
    }
    mesh.validate().unwrap();
}

#[test]
fn quadrant_exterior_edges_match_outer_sides() {
    // Each quadrant touches the domain boundary on exactly two sides.
    let mesh = quad4([(4, 4), (6, 6), (5, 5), (7, 7)]);
    for (sub, (nx, ny)) in mesh.subdomains.iter().zip([(4, 4), (6, 6), (5, 5), (7, 7)]) {
        let exterior = sub
            .boundary_edges
            .iter()
            .filter(|e| e.tag == EdgeTag::Exterior)
            .count();
        assert_eq!(exterior, nx + ny, "subdomain {}", sub.subdomain_id);
        let interface = sub.boundary_edges.len() - exterior;
        assert_eq!(interface, nx + ny);
    }
}

#[test]
fn single_subdomain_has_no_interfaces() {
    let mesh = build_rect_partition(unit(), &[SubdomainSpec::new(unit(), 3, 5)]).unwrap();
    assert!(mesh.interfaces.is_empty());
    assert!(mesh.subdomains[0]
        .boundary_edges
        .iter()
        .all(|e| e.tag == EdgeTag::Exterior));
}

#[test]
fn overlapping_layout_rejected_with_pair() {
    let err = build_rect_partition(
        unit(),
        &[
            SubdomainSpec::new(Rect::new(0.0, 0.0, 0.6, 1.0), 2, 2),
            SubdomainSpec::new(Rect::new(0.5, 0.0, 1.0, 1.0), 2, 2),
        ],
    )
    .unwrap_err();
    match err {
        CoreError::OverlappingLayout { a, b } => assert_eq!((a, b), (0, 1)),
        other => panic!("expected overlap error, got {other}"),
    }
}

#[test]
fn gapped_layout_rejected() {
    let err = build_rect_partition(
        unit(),
        &[
            SubdomainSpec::new(Rect::new(0.0, 0.0, 0.4, 1.0), 2, 2),
            SubdomainSpec::new(Rect::new(0.5, 0.0, 1.0, 1.0), 2, 2),
        ],
    )
    .unwrap_err();
    assert!(matches!(err, CoreError::GappedLayout { .. }));
}

#[test]
fn partial_side_contact_rejected() {
    // T-junction: tall left column against two stacked right cells.
    let err = build_rect_partition(
        unit(),
        &[
            SubdomainSpec::new(Rect::new(0.0, 0.0, 0.5, 1.0), 2, 2),
            SubdomainSpec::new(Rect::new(0.5, 0.0, 1.0, 0.4), 2, 2),
            SubdomainSpec::new(Rect::new(0.5, 0.4, 1.0, 1.0), 2, 2),
        ],
    )
    .unwrap_err();
    assert!(matches!(err, CoreError::NonConformingLayout { .. }));
}

#[test]
fn zero_resolution_rejected() {
    let err = build_rect_partition(unit(), &[SubdomainSpec::new(unit(), 0, 3)]).unwrap_err();
    assert!(matches!(err, CoreError::InvalidResolution { index: 0 }));
}

#[test]
fn refine_multiplies_triangle_count() {
    let mesh = quad4([(2, 2), (2, 2), (2, 2), (2, 2)]);
    let total: usize = mesh.subdomains.iter().map(|s| s.triangles.len()).sum();
    assert_eq!(total, 32);
    let fine = refine(&mesh, 2).unwrap();
    let total2: usize = fine.subdomains.iter().map(|s| s.triangles.len()).sum();
    assert_eq!(total2, 128);

    let tiny = build_rect_partition(unit(), &[SubdomainSpec::new(unit(), 1, 1)]).unwrap();
    assert_eq!(tiny.subdomains[0].triangles.len(), 2);
    let fine3 = refine(&tiny, 3).unwrap();
    assert_eq!(fine3.subdomains[0].triangles.len(), 18);
}

#[test]
fn refine_factor_validation() {
    let mesh = split2((2, 2), (3, 3));
    assert!(matches!(
        refine(&mesh, 5),
        Err(CoreError::UnsupportedRefineFactor { .. })
    ));
}

#[test]
fn refine_preserves_interface_endpoints_and_nodes() {
    let mesh = split2((3, 4), (5, 2));
    let fine = refine(&mesh, 2).unwrap();
    for (coarse_itf, fine_itf) in mesh.interfaces.iter().zip(&fine.interfaces) {
        assert_eq!(coarse_itf.start, fine_itf.start);
        assert_eq!(coarse_itf.end, fine_itf.end);
        for side in 0..2 {
            let sub = coarse_itf.side_subdomain(side);
            let coarse_pts: Vec<[f64; 2]> = coarse_itf.chains[side]
                .iter()
                .map(|&v| mesh.subdomains[sub].vertices[v])
                .collect();
            let fine_pts: Vec<[f64; 2]> = fine_itf.chains[side]
                .iter()
                .map(|&v| fine.subdomains[sub].vertices[v])
                .collect();
            assert_eq!(fine_pts.len(), 2 * (coarse_pts.len() - 1) + 1);
            for p in &coarse_pts {
                assert!(
                    fine_pts.iter().any(|q| q == p),
                    "coarse node {p:?} missing after refinement"
                );
            }
        }
    }
}

#[test]
fn refine_halves_mesh_size() {
    let mesh = split2((4, 4), (6, 6));
    let h0 = mesh.h_max();
    let fine = refine(&mesh, 2).unwrap();
    assert!((fine.h_max() - h0 / 2.0).abs() < 1e-14);
    let fine3 = refine(&mesh, 3).unwrap();
    assert!((fine3.h_max() - h0 / 3.0).abs() < 1e-14);
}

#[test]
fn mesh_size_uniform_grid() {
    let mesh = build_rect_partition(unit(), &[SubdomainSpec::new(unit(), 4, 4)]).unwrap();
    let h = mesh.subdomains[0].mesh_h();
    assert!((h - 2.0_f64.sqrt() / 4.0).abs() < 1e-15);
}

#[test]
fn interface_steps_equispaced_and_non_matching() {
    let mesh = split2((4, 4), (6, 6));
    let left = mesh.interface_steps(0, 0).unwrap();
    assert!((left.h_min - 0.25).abs() < 1e-15);
    assert!((left.h_mean - 0.25).abs() < 1e-15);
    assert!((left.h_max - 0.25).abs() < 1e-15);
    let right = mesh.interface_steps(0, 1).unwrap();
    assert!((right.h_min - 1.0 / 6.0).abs() < 1e-15);
    assert!(left.h_min != right.h_min, "sides should be non-matching");
}

#[test]
fn alternating_diagonals_mesh_is_valid() {
    let mesh = build_rect_partition(
        unit(),
        &[SubdomainSpec::new(unit(), 5, 3).with_diagonal(DiagonalStyle::Alternating)],
    )
    .unwrap();
    mesh.validate().unwrap();
    let fine = refine(&mesh, 2).unwrap();
    fine.validate().unwrap();
}

#[test]
fn skewed_resolutions_stay_shape_regular() {
    let mesh = build_rect_partition(
        Rect::new(0.0, 0.0, 3.0, 1.0),
        &[SubdomainSpec::new(Rect::new(0.0, 0.0, 3.0, 1.0), 9, 5)],
    )
    .unwrap();
    mesh.validate().unwrap();
}

#[test]
fn text_format_roundtrip() {
    let mesh = quad4([(2, 3), (3, 2), (2, 2), (3, 3)]);
    let mut buf = Vec::new();
    write_text(&mesh, &mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.starts_with("nicem-mesh v1\n"));
    let back = read_text(std::io::BufReader::new(buf.as_slice())).unwrap();
    assert_eq!(back.subdomains.len(), mesh.subdomains.len());
    for (a, b) in back.subdomains.iter().zip(&mesh.subdomains) {
        assert_eq!(a.vertices, b.vertices);
        assert_eq!(a.triangles, b.triangles);
        assert_eq!(a.boundary_edges, b.boundary_edges);
    }
    for (a, b) in back.interfaces.iter().zip(&mesh.interfaces) {
        assert_eq!(a.chains, b.chains);
    }
}

#[test]
fn vtk_export_has_expected_counts() {
    let mesh = split2((2, 2), (3, 3));
    let vals: Vec<Vec<f64>> = mesh
        .subdomains
        .iter()
        .map(|s| s.vertices.iter().map(|v| v[0] + v[1]).collect())
        .collect();
    let mut buf = Vec::new();
    write_vtk(&mesh, Some(("u", &vals)), &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let npts: usize = mesh.subdomains.iter().map(|s| s.vertices.len()).sum();
    assert!(text.contains(&format!("POINTS {npts} double")));
    assert!(text.contains("CELL_TYPES 26"));
    assert!(text.contains("SCALARS u double 1"));
}

mod properties {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn refine_preserves_validity_and_counts(
            nl in 1usize..5, nr in 1usize..5, f in 2usize..4,
        ) {
            let mesh = split2((nl, nl), (nr, nr));
            let fine = refine(&mesh, f).unwrap();
            fine.validate().unwrap();
            for (c, r) in mesh.subdomains.iter().zip(&fine.subdomains) {
                prop_assert_eq!(r.triangles.len(), c.triangles.len() * f * f);
            }
        }

        #[test]
        fn euler_relation_holds(nx in 1usize..7, ny in 1usize..7) {
            let mesh = build_rect_partition(
                unit(),
                &[SubdomainSpec::new(unit(), nx, ny)],
            ).unwrap();
            let sub = &mesh.subdomains[0];
            let euler = sub.vertices.len() as i64 - sub.edge_count() as i64
                + sub.triangles.len() as i64;
            prop_assert_eq!(euler, 1);
        }
    }
}
