//! Cross-module invariants: interval structure of negative type, the
//! equivalences that hold only on cube subsets together with their printed
//! counterexamples, agreement of the three M-constant routes, and the
//! randomized closed-form suites.

use cubemetrics::fixtures;
use cubemetrics::negtype::{
    find_polygonal_equality, is_p_negative_type, negative_type_gap, supremal_p, GapMethod,
    NegTypeError, SupremalConfig, WpValue,
};
use cubemetrics::oracles::{
    m_constant_direct, m_constant_sup_oracle, random_cube_subset, random_l1_points,
    run_omnibus_suite, run_trees_suite, MValue, WeightRange,
};
use cubemetrics::{FiniteMetricSpace, Matrix, Mode, Scalar, Vector, DEFAULT_TOL};

fn finite_wp(space: &FiniteMetricSpace) -> Option<f64> {
    match supremal_p(space, &SupremalConfig::default()) {
        Ok(s) => match s.value {
            WpValue::Finite(v) => Some(v.to_f64()),
            WpValue::Infinite => None,
        },
        Err(NegTypeError::SearchExhausted { .. }) => None,
        Err(e) => panic!("supremal scan failed: {e}"),
    }
}

#[test]
fn ultrametric_implies_negative_type_at_all_sampled_exponents() {
    let space = fixtures::ultra_space();
    assert!(space.is_ultrametric());
    for p in [0.5, 1.0, 2.0, 4.0, 8.0] {
        assert!(
            is_p_negative_type(&space, &Scalar::Float(p), false, DEFAULT_TOL).unwrap(),
            "ultrametric must be negative type at p = {p}"
        );
    }
}

#[test]
fn negative_type_holds_on_an_interval_with_strictness_below_wp() {
    let spaces: Vec<(&str, FiniteMetricSpace)> = vec![
        ("star", fixtures::star_space()),
        ("alpha", fixtures::alpha_space()),
        ("p3", fixtures::p3_space()),
        ("p23", fixtures::p23_space()),
        ("cube2", fixtures::cube2_space()),
        ("l", fixtures::l_space()),
        ("pent", fixtures::pent_space()),
        ("quad", fixtures::quad_space()),
    ];
    for (name, space) in spaces {
        let Some(wp) = finite_wp(&space) else {
            continue;
        };
        let below = [wp * 0.5, wp * 0.9, wp - 1e-4];
        let above = [wp + 1e-4, wp * 1.1, wp * 1.5];
        for p in below {
            if p <= 0.0 {
                continue;
            }
            assert!(
                is_p_negative_type(&space, &Scalar::Float(p), false, DEFAULT_TOL).unwrap(),
                "{name}: negative type must hold at p = {p} < wp = {wp}"
            );
            assert!(
                is_p_negative_type(&space, &Scalar::Float(p), true, DEFAULT_TOL).unwrap(),
                "{name}: strictness must hold at p = {p} < wp = {wp}"
            );
        }
        for p in above {
            assert!(
                !is_p_negative_type(&space, &Scalar::Float(p), false, DEFAULT_TOL).unwrap(),
                "{name}: negative type must fail at p = {p} > wp = {wp}"
            );
            assert!(
                !is_p_negative_type(&space, &Scalar::Float(p), true, DEFAULT_TOL).unwrap(),
                "{name}: strictness must fail at p = {p} > wp = {wp}"
            );
        }
    }
}

#[test]
fn polygonal_equality_absent_iff_strict() {
    let spaces = vec![
        fixtures::star_space(),
        fixtures::alpha_space(),
        fixtures::quad_space(),
        fixtures::cube2_space(),
        fixtures::l_space(),
        fixtures::pent_space(),
        fixtures::ultra_space(),
    ];
    for space in spaces {
        for p in [Scalar::from_int(1), Scalar::from_int(2)] {
            let strict = is_p_negative_type(&space, &p, true, DEFAULT_TOL).unwrap();
            let witness = find_polygonal_equality(&space, &p, DEFAULT_TOL).unwrap();
            assert_eq!(
                witness.is_none(),
                strict,
                "witness presence must match non-strictness at p = {p}"
            );
            if let Some(xi) = witness {
                // evaluate the form in the witness's own numeric mode
                let mat = match xi.xi().mode() {
                    Mode::Exact => space.p_distance(&p).unwrap().matrix,
                    Mode::Float => space.to_float().p_distance(&p.to_float()).unwrap().matrix,
                };
                let v = mat.quadratic_form(xi.xi()).unwrap().to_f64();
                let scale = mat.max_abs_f64().max(1.0);
                assert!(v.abs() <= 1e-6 * scale, "witness form value {v}");
                assert!(xi.xi().l1_norm().to_f64() > 1e-6, "witness must be nonzero");
            }
        }
    }
}

#[test]
fn alpha_closed_forms_for_det_and_inverse_sum() {
    let space = fixtures::alpha_space().to_float();
    let alpha = 12.0 / 7.0f64;
    for p in [0.5, 1.0, 1.5, 2.0] {
        let dp = space.p_distance(&Scalar::Float(p)).unwrap();
        let det = dp.matrix.det().unwrap().to_f64();
        let det_closed = 6.0 * alpha.powf(3.0 * p) - 2.0 * alpha.powf(5.0 * p);
        assert!(
            (det - det_closed).abs() <= 1e-9 * det_closed.abs().max(1.0),
            "det at p = {p}: {det} vs {det_closed}"
        );
        let ones = Vector::from_f64s(&[1.0; 5]);
        if let Some(b) = dp.matrix.solve(&ones, DEFAULT_TOL).unwrap() {
            let inv_sum = b.sum().to_f64();
            let closed = (7.0 * alpha.powf(p) - 12.0) / (2.0 * (alpha.powf(2.0 * p) - 3.0));
            assert!(
                (inv_sum - closed).abs() <= 1e-9 * closed.abs().max(1.0),
                "inverse sum at p = {p}: {inv_sum} vs {closed}"
            );
        } else {
            panic!("D_p is invertible near p = {p} for the alpha example");
        }
    }
}

#[test]
fn gap_positive_iff_strict_on_fixtures() {
    let spaces = vec![
        fixtures::star_space(),
        fixtures::alpha_space(),
        fixtures::quad_space(),
        fixtures::cube2_space(),
        fixtures::l_space(),
        fixtures::pent_space(),
        fixtures::p3_space(),
        fixtures::p23_space(),
        fixtures::ultra_space(),
    ];
    for space in spaces {
        let strict = is_p_negative_type(&space, &Scalar::from_int(1), true, DEFAULT_TOL).unwrap();
        let gap = negative_type_gap(
            &space,
            &Scalar::from_int(1),
            GapMethod::SignEnum,
            DEFAULT_TOL,
        )
        .unwrap();
        assert_eq!(
            gap.gamma.is_positive(),
            strict,
            "gap positivity must match strictness; gamma = {}",
            gap.gamma
        );
        // the defining inequality is tight at the argmin
        let d = space.distance_matrix();
        let form = d.quadratic_form(gap.argmin_xi.xi()).unwrap();
        let norm = gap.argmin_xi.xi().l1_norm();
        let lhs = &(&gap.gamma * &(&norm * &norm)) + &(&(&form + &form));
        assert!(lhs.is_zero_with(1e-9), "tightness failed: {lhs}");
    }
}

#[test]
fn descent_matches_sign_enum_on_small_fixtures() {
    let spaces = vec![
        fixtures::star_space(),
        fixtures::p3_space(),
        fixtures::p23_space(),
        fixtures::cube2_space(),
        fixtures::l_space(),
        fixtures::quad_space(),
        fixtures::pent_space(),
    ];
    for space in spaces {
        assert!(space.size() <= 6);
        let enumd = negative_type_gap(
            &space,
            &Scalar::from_int(1),
            GapMethod::SignEnum,
            DEFAULT_TOL,
        )
        .unwrap();
        let desc = negative_type_gap(
            &space,
            &Scalar::from_int(1),
            GapMethod::Descent,
            DEFAULT_TOL,
        )
        .unwrap();
        assert!(
            (enumd.gamma.to_f64() - desc.gamma.to_f64()).abs() <= 1e-6,
            "sign-enum {} vs descent {}",
            enumd.gamma,
            desc.gamma
        );
    }
}

#[test]
fn cube_determinant_routes_agree_on_random_subsets() {
    let range = WeightRange::suite_default();
    let mut checked_closed = 0;
    for i in 0..60u64 {
        let x = random_cube_subset(20_000 + i, 7, 6, &range).unwrap();
        let direct = x.cube_metric().unwrap().distance_matrix().det().unwrap();
        assert_eq!(x.det_via_gram().unwrap(), direct, "seed {i}: bordered Gram");
        let m = x.point_count() - 1;
        if m == x.n() {
            assert_eq!(
                x.cofactor_closed_form().unwrap(),
                x.cube_metric()
                    .unwrap()
                    .distance_matrix()
                    .cofactor_sum(DEFAULT_TOL)
                    .unwrap(),
                "seed {i}: cofactor closed form"
            );
            if x.is_affinely_independent() {
                assert_eq!(
                    x.det_closed_form().unwrap(),
                    direct,
                    "seed {i}: closed form"
                );
                checked_closed += 1;
            }
        }
    }
    assert!(checked_closed > 0, "at least one full-dimension instance");
}

#[test]
fn inverse_sum_bound_with_equality_iff_centre_in_hull() {
    let range = WeightRange::suite_default();
    let mut seen_equality = false;
    let mut seen_strict = false;
    for i in 0..80u64 {
        let x = random_cube_subset(30_000 + i, 6, 6, &range).unwrap();
        if !x.is_affinely_independent() {
            continue;
        }
        let space = x.cube_metric().unwrap();
        let mc = m_constant_direct(&space, DEFAULT_TOL).unwrap();
        let two = Scalar::from_int(2);
        let bound = &two / &x.weights().sum();
        let dist_sq = x.s_embed().dist_to_hull_sq;
        assert!(
            mc.inv_sum >= bound,
            "seed {i}: inverse sum {} below bound {}",
            mc.inv_sum,
            bound
        );
        if dist_sq.is_zero() {
            assert_eq!(
                mc.inv_sum, bound,
                "seed {i}: equality requires centre in hull"
            );
            seen_equality = true;
        } else {
            assert!(mc.inv_sum > bound, "seed {i}: strict above bound");
            seen_strict = true;
        }
    }
    assert!(seen_equality && seen_strict, "both branches exercised");
}

#[test]
fn m_constant_routes_agree() {
    // fixtures with strict type and full support of the three routes
    for x in [fixtures::star_cube(), fixtures::p23_cube()] {
        let space = x.cube_metric().unwrap();
        let direct = m_constant_direct(&space, DEFAULT_TOL).unwrap();
        let sup = m_constant_sup_oracle(&space, DEFAULT_TOL).unwrap();
        let geo = x.m_constant_geometric();
        let MValue::Finite(m) = direct.m else {
            panic!("finite M expected");
        };
        assert_eq!(m, sup);
        assert_eq!(m, geo);
    }
    // random cube subsets: geometric equals direct even in the singular case
    let range = WeightRange::suite_default();
    for i in 0..40u64 {
        let x = random_cube_subset(40_000 + i, 6, 7, &range).unwrap();
        let space = x.cube_metric().unwrap();
        let direct = m_constant_direct(&space, DEFAULT_TOL).unwrap();
        let MValue::Finite(m) = direct.m else {
            panic!("seed {i}: cube subsets have finite M");
        };
        assert_eq!(m, x.m_constant_geometric(), "seed {i}: geometric route");
        if x.is_affinely_independent() {
            assert_eq!(
                m,
                m_constant_sup_oracle(&space, DEFAULT_TOL).unwrap(),
                "seed {i}: stationary route"
            );
        }
    }
}

#[test]
fn invertibility_iff_strict_on_random_l1_sets() {
    let range = WeightRange::suite_default();
    let mut checked = 0;
    let mut seed = 50_000u64;
    while checked < 30 {
        seed += 1;
        let points = random_l1_points(seed, 4, 7, &range);
        if points.len() < 2 {
            continue;
        }
        let space = FiniteMetricSpace::from_l1_points(&points).unwrap();
        let invertible = !space.distance_matrix().det().unwrap().is_zero();
        let strict = is_p_negative_type(&space, &Scalar::from_int(1), true, DEFAULT_TOL).unwrap();
        assert_eq!(
            invertible, strict,
            "seed {seed}: invertibility and strictness must agree on l1 subsets"
        );
        checked += 1;
    }
}

#[test]
fn supremal_exponent_at_least_one_on_l1_spaces() {
    let range = WeightRange::suite_default();
    for i in 0..30u64 {
        let x = random_cube_subset(60_000 + i, 6, 7, &range).unwrap();
        let space = x.cube_metric().unwrap();
        if let Some(wp) = finite_wp(&space) {
            assert!(wp >= 1.0 - 1e-9, "seed {i}: wp = {wp} below 1");
        }
    }
}

#[test]
fn full_cube_guards_for_hypothesis_dropping() {
    // xi = (1,0,0,0) annihilates the coordinates but is not in the kernel
    let l = fixtures::l_space();
    let d = l.distance_matrix();
    let xi = Vector::from_ints(&[1, 0, 0, 0]);
    let coords = fixtures::l_cube().coordinates();
    for k in 0..2 {
        let mut acc = Scalar::from_int(0);
        for (i, c) in coords.iter().enumerate() {
            acc = &acc + &(xi.get(i) * c.get(k));
        }
        assert!(acc.is_zero());
    }
    assert!(!d.matvec(&xi).unwrap().is_zero_with(0.0));

    // xi = (1,-1,0,1) zeroes the form but is outside the hyperplane
    let xi = Vector::from_ints(&[1, -1, 0, 1]);
    assert!(!xi.sum().is_zero());
    assert!(d.quadratic_form(&xi).unwrap().is_zero());
    assert!(!d.matvec(&xi).unwrap().is_zero_with(0.0));
    let mut acc = Vec::new();
    for k in 0..2 {
        let mut s = Scalar::from_int(0);
        for (i, c) in coords.iter().enumerate() {
            s = &s + &(xi.get(i) * c.get(k));
        }
        acc.push(s);
    }
    assert!(acc.iter().any(|s| !s.is_zero()));
}

#[test]
fn pent_breaks_cube_only_equivalences() {
    let pent = fixtures::pent_space();
    let d = pent.distance_matrix();
    // kernel is spanned by the alternating vector
    let kernel = d.kernel_basis(DEFAULT_TOL);
    assert_eq!(kernel.len(), 1);
    assert_eq!(kernel[0], Vector::from_ints(&[1, -1, -1, 1, 0]));
    // the annihilator (2,-2,-1,0,1) is not in the kernel
    let xi = Vector::from_ints(&[2, -2, -1, 0, 1]);
    let rows = vec![kernel[0].entries().to_vec(), xi.entries().to_vec()];
    assert_eq!(Matrix::from_rows(rows).unwrap().rank(DEFAULT_TOL), 2);
}

#[test]
fn randomized_suites_pass_at_reference_sizes() {
    let trees = run_trees_suite(7, 100);
    assert!(trees.passed(), "failures: {:?}", trees.failures);
    let omnibus = run_omnibus_suite(43, 40);
    assert!(omnibus.passed(), "failures: {:?}", omnibus.failures);
}

#[test]
fn tree_constants_invariant_under_weight_permutation_and_rerooting() {
    let range = WeightRange::suite_default();
    for i in 0..10u64 {
        let tree = cubemetrics::oracles::random_weighted_tree(70_000 + i, 7, &range).unwrap();
        let base_det = tree.tree_det();
        let base_cof = tree.tree_cofactor();
        let base_gap = tree.tree_gap();
        // rotate the weight assignment across edges
        let mut edges = tree.edges().to_vec();
        let first_w = edges[0].2.clone();
        for k in 0..edges.len() - 1 {
            edges[k].2 = edges[k + 1].2.clone();
        }
        let last = edges.len() - 1;
        edges[last].2 = first_w;
        let permuted = cubemetrics::trees::WeightedTree::new(tree.n_vertices(), edges).unwrap();
        assert_eq!(permuted.tree_det(), base_det);
        assert_eq!(permuted.tree_cofactor(), base_cof);
        assert_eq!(permuted.tree_gap(), base_gap);
        // direct computation agrees after the permutation too
        assert_eq!(
            permuted
                .tree_metric()
                .unwrap()
                .distance_matrix()
                .det()
                .unwrap(),
            base_det,
            "seed {i}"
        );
        // re-rooting the embedding never changes the metric
        let reference = tree.tree_metric().unwrap();
        for root in 0..tree.n_vertices() {
            let cube = tree.embed_in_cube(root).unwrap();
            assert_eq!(
                cube.cube_metric().unwrap().distance_matrix(),
                reference.distance_matrix(),
                "seed {i} root {root}"
            );
        }
    }
}

#[test]
fn alpha_is_negative_type_at_its_supremal_exponent() {
    let space = fixtures::alpha_space();
    assert!(is_p_negative_type(&space, &Scalar::from_int(1), false, DEFAULT_TOL).unwrap());
    assert!(!is_p_negative_type(&space, &Scalar::from_int(1), true, DEFAULT_TOL).unwrap());
}

#[test]
fn integrality_ratio_reported_on_random_integer_instances() {
    use cubemetrics::hamming::{CubeSubset, WeightList};
    use cubemetrics::trees::integrality_experiment;
    use rand::{Rng, SeedableRng};

    let range = WeightRange::suite_default();
    let mut found = 0u32;
    let mut seed = 80_000u64;
    let mut non_integers = Vec::new();
    while found < 15 {
        seed += 1;
        let Ok(base) = random_cube_subset(seed, 5, 5, &range) else {
            continue;
        };
        if base.point_count() - 1 != base.n() {
            continue;
        }
        // replace the rational weights with integer ones
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let weights = WeightList::new(
            (0..base.n())
                .map(|_| Scalar::from_int(rng.random_range(1..=5)))
                .collect(),
        )
        .unwrap();
        let x = CubeSubset::new(weights, base.points().to_vec()).unwrap();
        if !x.is_affinely_independent() {
            continue;
        }
        found += 1;
        let record = integrality_experiment(&x).unwrap();
        assert!(record.ratio.is_positive(), "seed {seed}: positive ratio");
        if !record.is_integer {
            non_integers.push((seed, record.ratio.clone()));
        }
    }
    // observed integrality is reported, not asserted
    if non_integers.is_empty() {
        println!("integrality experiment: 15/15 integer ratios");
    } else {
        println!("integrality experiment: non-integer ratios at {non_integers:?}");
    }
}

#[test]
fn exact_and_float_mode_reports_agree() {
    use cubemetrics::report::{analyze, AnalysisInput};
    let input = AnalysisInput::Cube(fixtures::star_cube());
    let exact = analyze(&input, Mode::Exact, DEFAULT_TOL).unwrap();
    let float = analyze(&input, Mode::Float, DEFAULT_TOL).unwrap();
    assert!((exact.det.to_f64() - float.det.to_f64()).abs() < 1e-9);
    assert!((exact.cofactor_sum.to_f64() - float.cofactor_sum.to_f64()).abs() < 1e-9);
    assert_eq!(exact.rank_d, float.rank_d);
    assert_eq!(exact.strict_1neg, float.strict_1neg);
    let (Some(ge), Some(gf)) = (exact.gap_1, float.gap_1) else {
        panic!("gaps computed in both modes");
    };
    assert!((ge.to_f64() - gf.to_f64()).abs() < 1e-9);
}

#[test]
fn full_three_cube_touch_zero_is_detected() {
    use cubemetrics::hamming::CubeSubset;
    use cubemetrics::negtype::WpCertificate;
    use cubemetrics::oracles::{kernel_classification_holds, verify_omnibus};

    // All 8 vertices of the unit 3-cube. The distance matrix has a
    // 4-dimensional kernel at the supremal exponent, so both det(D_p) and
    // cof(D_p) vanish there to even order: neither curve changes sign and
    // the scan must find the zero through the |f| local-minimum probe.
    // (Both curves also have a sign-changing zero at p = 2, which is the
    // answer a sign-change-only scan would wrongly report.)
    let points: Vec<Vec<u8>> = (0..8u8)
        .map(|c| vec![c & 1, (c >> 1) & 1, (c >> 2) & 1])
        .collect();
    let x = CubeSubset::from_bits(&[1, 1, 1], &points).unwrap();
    let space = x.cube_metric().unwrap();
    assert_eq!(space.distance_matrix().kernel_basis(DEFAULT_TOL).len(), 4);

    let sup = supremal_p(&space, &SupremalConfig::default()).unwrap();
    match sup.value {
        WpValue::Finite(ref w) => assert!(
            (w.to_f64() - 1.0).abs() <= 1e-6,
            "touch zero at 1 missed: got {w}"
        ),
        WpValue::Infinite => panic!("the full cube is not an ultrametric"),
    }
    // coincident zeros are attributed to the determinant
    assert!(matches!(sup.certificate, WpCertificate::DetZero { .. }));

    let report = verify_omnibus(&x, DEFAULT_TOL).unwrap();
    assert!(report.consistent, "report: {report:?}");
    assert!(!report.c1_affine_indep);

    let ri = x.rank_identity().unwrap();
    assert_eq!(ri.rank_d, 4);
    assert_eq!(ri.affine_dim, 3);
    assert!(kernel_classification_holds(&x, DEFAULT_TOL).unwrap());
}

#[test]
fn weighted_full_cube_is_consistently_degenerate() {
    use cubemetrics::hamming::CubeSubset;
    use cubemetrics::oracles::verify_omnibus;

    let points: Vec<Vec<u8>> = (0..8u8)
        .map(|c| vec![c & 1, (c >> 1) & 1, (c >> 2) & 1])
        .collect();
    let x = CubeSubset::from_bits(&[1, 2, 3], &points).unwrap();
    let report = verify_omnibus(&x, DEFAULT_TOL).unwrap();
    assert!(report.consistent, "report: {report:?}");
    assert!(!report.c1_affine_indep);
    let ri = x.rank_identity().unwrap();
    assert_eq!((ri.rank_d, ri.affine_dim), (4, 3));
}

#[test]
fn float_gap_agrees_with_exact_gap_on_medium_instances() {
    let range = WeightRange::suite_default();
    let mut checked = 0;
    let mut seed = 90_000u64;
    while checked < 8 {
        seed += 1;
        let Ok(x) = random_cube_subset(seed, 7, 7, &range) else {
            continue;
        };
        if x.point_count() < 6 {
            continue;
        }
        checked += 1;
        let space = x.cube_metric().unwrap();
        let exact = negative_type_gap(
            &space,
            &Scalar::from_int(1),
            GapMethod::SignEnum,
            DEFAULT_TOL,
        )
        .unwrap();
        let float = negative_type_gap(
            &space.to_float(),
            &Scalar::Float(1.0),
            GapMethod::SignEnum,
            DEFAULT_TOL,
        )
        .unwrap();
        assert!(
            (exact.gamma.to_f64() - float.gamma.to_f64()).abs() <= 1e-9,
            "seed {seed}: exact {} vs float {}",
            exact.gamma,
            float.gamma
        );
    }
}

#[test]
fn scan_reports_na_at_singular_exponents() {
    use cubemetrics::report::scan_p;
    let rows = scan_p(&fixtures::cube2_space(), 0.5, 1.5, 3).unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].inv_sum.is_some(), "p = 0.5 is regular");
    assert!(rows[1].inv_sum.is_none(), "p = 1 is singular");
    assert!(rows[2].inv_sum.is_some(), "p = 1.5 is regular");
}

#[test]
fn gamma2_of_embedded_star_equals_the_tree_gap() {
    use cubemetrics::negtype::gamma2_inner_product;
    // the star embeds as the origin plus the three standard basis vectors,
    // all integer coordinates, so the minimization stays exact
    let corners = vec![
        Vector::from_ints(&[0, 0, 0]),
        Vector::from_ints(&[1, 0, 0]),
        Vector::from_ints(&[0, 1, 0]),
        Vector::from_ints(&[0, 0, 1]),
    ];
    let g2 = gamma2_inner_product(&corners, DEFAULT_TOL).unwrap();
    assert_eq!(g2.gamma, Scalar::from_ratio(1, 3));
    assert_eq!(g2.gamma, fixtures::star_tree().tree_gap());
    let gap1 = negative_type_gap(
        &fixtures::star_space(),
        &Scalar::from_int(1),
        GapMethod::SignEnum,
        DEFAULT_TOL,
    )
    .unwrap();
    assert_eq!(g2.gamma, gap1.gamma);
}
