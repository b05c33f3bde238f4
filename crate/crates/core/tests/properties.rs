use nalgebra::DMatrix;
use proptest::prelude::*;
use twodist::centering::{build_v, project_adjacency, VScheme};
use twodist::cli::{analyze_document, configuration_csv, parse_configuration_csv, ReportDocument};
use twodist::edm::{is_regular_edm, Centering, Configuration};
use twodist::graphs::{adjacency_matrix, encode_graph6, parse_graph6, Graph};
use twodist::linalg::{eigenvalues, eigh, Tolerances};
use twodist::representations::{analyze, GraphAnalysis, Side};

fn graph(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Graph> {
    n.prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut g = Graph::empty(n);
            let mut k = 0;
            for j in 1..n {
                for i in 0..j {
                    if bits[k] {
                        g.add_edge(i, j);
                    }
                    k += 1;
                }
            }
            g
        })
    })
}

fn nondegenerate(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Graph> {
    graph(n).prop_filter("complete or null", |g| !g.is_degenerate())
}

/// Circulant graph on `n` nodes joining nodes whose cyclic distance is in `jumps`.
fn circulant(n: usize, jumps: &[usize]) -> Graph {
    let mut g = Graph::empty(n);
    for i in 0..n {
        for &s in jumps {
            let j = (i + s) % n;
            if i != j {
                g.add_edge(i.min(j), i.max(j));
            }
        }
    }
    g
}

fn tol() -> Tolerances {
    Tolerances::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn graph6_round_trip(g in graph(2..=20)) {
        let s = encode_graph6(&g).unwrap();
        prop_assert_eq!(parse_graph6(&s).unwrap(), g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn report_json_round_trip(g in graph(2..=9)) {
        let doc = analyze_document(&g, tol()).unwrap();
        let back: ReportDocument = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
        prop_assert_eq!(back, doc);
    }

    #[test]
    fn csv_round_trip_is_lossless(g in nondegenerate(3..=9)) {
        let cfg = GraphAnalysis::new(&g, tol()).unwrap().j_spherical().unwrap().config;
        let back = parse_configuration_csv(&configuration_csv(&cfg)).unwrap();
        prop_assert!((back - &cfg.points).amax() < 1e-15);
    }

    #[test]
    fn basis_choice_does_not_change_the_spectrum(g in graph(4..=12)) {
        let a = adjacency_matrix(&g);
        let dense = eigenvalues(&project_adjacency(&a, &build_v(g.order(), VScheme::Dense).unwrap()).unwrap()).unwrap();
        let block = eigenvalues(&project_adjacency(&a, &build_v(g.order(), VScheme::Block).unwrap()).unwrap()).unwrap();
        for (x, y) in dense.iter().zip(&block) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn projected_trace_is_minus_twice_edges_over_n(g in graph(2..=12)) {
        let n = g.order();
        let x = project_adjacency(&adjacency_matrix(&g), &build_v(n, VScheme::Dense).unwrap()).unwrap();
        let trace: f64 = eigenvalues(&x).unwrap().iter().sum();
        prop_assert!((trace + 2.0 * g.edge_count() as f64 / n as f64).abs() < 1e-10);
    }

    #[test]
    fn endpoint_ranks_and_interior_rank(g in nondegenerate(3..=10)) {
        let ga = GraphAnalysis::new(&g, tol()).unwrap();
        let n = g.order();
        if let Some(bl) = ga.beta_l() {
            prop_assert_eq!(ga.euclidean_representation(bl).unwrap().rank, n - 1 - ga.ps.m_max);
        }
        if let Some(bu) = ga.beta_u() {
            prop_assert_eq!(ga.euclidean_representation(bu).unwrap().rank, n - 1 - ga.ps.m_min);
            prop_assert!(bu <= 4.0 + 1e-12);
            let outside = ga.euclidean_representation(bu * 1.01 + 0.01);
            let infeasible = matches!(outside, Err(twodist::error::Error::Infeasible { .. }));
            prop_assert!(infeasible);
        }
        prop_assert_eq!(ga.euclidean_representation(ga.interior_beta()).unwrap().rank, n - 1);
    }

    #[test]
    fn spherical_dimension_is_complement_invariant(g in nondegenerate(7..=10)) {
        let r = analyze(&g, tol()).unwrap();
        let c = analyze(&g.complement(), tol()).unwrap();
        prop_assert_eq!(r.dim_e, c.dim_e);
        prop_assert_eq!(r.dim_s, c.dim_s);
        prop_assert_eq!(r.spherical_at_l, c.spherical_at_u);
        prop_assert!(r.dim_e <= r.dim_s && r.dim_s <= r.dim_j);
    }

    #[test]
    fn closed_form_radius_matches_rank_test(g in nondegenerate(3..=10)) {
        let ga = GraphAnalysis::new(&g, tol()).unwrap();
        if ga.beta_u().is_some() && ga.endpoint_sphericity(Side::Upper).unwrap() {
            let rho = ga.radius_at_beta_u_closed_form().unwrap();
            let info = ga.sphere_at(ga.beta_u().unwrap()).unwrap().unwrap();
            prop_assert!((rho * rho - info.radius * info.radius).abs() < 1e-8);
        }
    }

    #[test]
    fn regular_graph_spectrum_and_radius(n in 5usize..=12, mask in 1u32..64) {
        let jumps: Vec<usize> = (1..=n / 2).filter(|s| mask & (1 << (s - 1)) != 0).collect();
        prop_assume!(!jumps.is_empty());
        let g = circulant(n, &jumps);
        prop_assume!(!g.is_degenerate());
        let k = g.regular_degree().unwrap() as f64;

        let mut full = eigenvalues(&adjacency_matrix(&g)).unwrap();
        let pos = full.iter().position(|x| (x - k).abs() < 1e-9).unwrap();
        full.remove(pos);
        let projected = eigenvalues(&project_adjacency(&adjacency_matrix(&g), &build_v(n, VScheme::Dense).unwrap()).unwrap()).unwrap();
        for (x, y) in full.iter().zip(&projected) {
            prop_assert!((x - y).abs() < 1e-10);
        }

        let ga = GraphAnalysis::new(&g, tol()).unwrap();
        let beta = ga.interior_beta();
        let d = ga.two_distance_matrix(beta);
        let rho = is_regular_edm(&d, &tol()).unwrap();
        let expected = ((1.0 - beta) * k + beta * (n as f64 - 1.0)) / (2.0 * n as f64);
        prop_assert!((rho * rho - expected).abs() < 1e-10);
        let info = ga.sphere_at(beta).unwrap().unwrap();
        prop_assert!((info.radius - rho).abs() < 1e-9);
    }
}

#[test]
fn cycles_have_top_eigenvalue_two() {
    for n in 4..=12 {
        let s = eigh(&adjacency_matrix(&Graph::cycle(n))).unwrap();
        assert!((s.max().value - 2.0).abs() < 1e-12);
        assert_eq!(s.max().multiplicity, 1);
    }
}

#[test]
fn configuration_csv_format() {
    let cfg = Configuration {
        points: DMatrix::from_row_slice(2, 2, &[1.0, -0.5, 1.0 / 3.0, 0.0]),
        centering: Centering::Centroid,
    };
    let text = configuration_csv(&cfg);
    assert_eq!(
        text,
        "1.0000000000000000e0,-5.0000000000000000e-1\n3.3333333333333331e-1,0.0000000000000000e0\n"
    );
    assert!(parse_configuration_csv("1,2\n3\n").is_err());
}
