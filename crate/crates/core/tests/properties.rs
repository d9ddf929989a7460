mod common;

use nrfair::baselines::{greedy_k_center, lloyd_k_means, lloyd_k_medians, LloydConfig};
use nrfair::evaluate::{assign, load_balance_stddev, objectives, report, ExtendedReal};
use nrfair::fair::{alpha_fair_k_center, fair_k_center, real_line_fair, two_fair_k_center};
use nrfair::geoio::{load_points_reader, CsvSchema};
use nrfair::metric::{discrete_metric, graph_metric, matrix_metric, MetricView};
use nrfair::neighborhood::{neighbor_threshold, neighborhood_radii, neighborhood_radii_bruteforce};
use nrfair::oracle::{dominating_set_reduction, feasible_alpha, SimpleGraph};
use nrfair::{alpha_of, Facilities, Instance, Point2D, PointSet};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Points on a coarse grid (many ties and duplicates) or spread out.
fn points(max: usize) -> impl Strategy<Value = Vec<Point2D>> {
    prop_oneof![
        prop::collection::vec((0i32..6, 0i32..6), 1..max)
            .prop_map(|v| v.into_iter().map(|(x, y)| Point2D::new(x as f64, y as f64)).collect()),
        prop::collection::vec((-1e4f64..1e4, -1e4f64..1e4), 1..max)
            .prop_map(|v| v.into_iter().map(|(x, y)| Point2D::new(x, y)).collect()),
    ]
}

fn instance(max: usize) -> impl Strategy<Value = Instance> {
    points(max).prop_flat_map(|pts| {
        let n = pts.len();
        (Just(pts), 1..=n).prop_map(|(pts, k)| Instance::euclidean(PointSet::new(pts).unwrap(), k).unwrap())
    })
}

fn graph(max: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (1..max).prop_flat_map(|n| (Just(n), prop::collection::vec((0..n, 0..n), 0..3 * n)))
}

/// Instance plus a facility subset of size `1..=k`.
fn instance_and_subset(max: usize) -> impl Strategy<Value = (Instance, Vec<usize>)> {
    instance(max).prop_flat_map(|inst| {
        let (n, k) = (inst.n(), inst.k());
        (Just(inst), prop::sample::subsequence((0..n).collect::<Vec<_>>(), 1..=k))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn graph_metrics_satisfy_axioms((n, edges) in graph(40)) {
        let m = graph_metric(n, &edges).unwrap();
        prop_assert!(m.check_axioms().is_ok());
    }

    #[test]
    fn matrix_and_discrete_metrics_satisfy_axioms(n in 1usize..40, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = matrix_metric(common::integer_metric(n, &mut rng, 9)).unwrap();
        prop_assert!(m.check_axioms().is_ok());
        prop_assert!(discrete_metric(n).unwrap().check_axioms().is_ok());
    }

    #[test]
    fn radii_match_sorting_oracle(inst in instance(300)) {
        let p = neighborhood_radii(&inst);
        let expected = common::radii_by_sorting(inst.n(), inst.k(), |i, j| inst.distance(i, j));
        prop_assert_eq!(p.radii(), &expected[..]);
    }

    #[test]
    fn radii_shrink_as_k_grows(inst in instance(200), k2 in 1usize..200) {
        let k2 = k2.min(inst.n()).max(inst.k());
        let big = neighborhood_radii(&inst.with_k(k2).unwrap());
        let small = neighborhood_radii(&inst);
        for i in 0..inst.n() {
            prop_assert!(big.radius(i) <= small.radius(i));
        }
    }

    #[test]
    fn closed_ball_counts(inst in instance(200)) {
        let p = neighborhood_radii(&inst);
        let m = neighbor_threshold(inst.n(), inst.k());
        for i in 0..inst.n() {
            let r = p.radius(i);
            let within = (0..inst.n()).filter(|&j| inst.distance(i, j) <= r).count();
            let inside = (0..inst.n()).filter(|&j| inst.distance(i, j) < r).count();
            prop_assert!(within >= m);
            if r > 0.0 {
                prop_assert!(inside < m);
            }
            let coincident = (0..inst.n()).filter(|&j| inst.distance(i, j) == 0.0).count();
            if coincident >= m {
                prop_assert_eq!(r, 0.0);
            }
        }
    }

    #[test]
    fn two_fair_balls_are_disjoint_and_ordered(inst in instance(300)) {
        let p = neighborhood_radii(&inst);
        let s = two_fair_k_center(&inst, &p).unwrap();
        prop_assert!(s.len() <= inst.k());
        for w in s.centers.windows(2) {
            prop_assert!(p.radius(w[0]) <= p.radius(w[1]));
        }
        let mut owner = vec![None; inst.n()];
        for &c in &s.centers {
            for j in 0..inst.n() {
                if inst.distance(c, j) <= p.radius(c) {
                    prop_assert!(owner[j].is_none(), "point {} in balls of {:?} and {}", j, owner[j], c);
                    owner[j] = Some(c);
                }
            }
        }
        let a = alpha_of(&p, inst.metric(), Facilities::Population(&s.centers)).unwrap();
        prop_assert!(a <= 2.0);
    }

    #[test]
    fn alpha_fair_outputs(inst in instance(200), alpha in 1.0f64..=2.0) {
        let p = neighborhood_radii(&inst);
        let s = alpha_fair_k_center(alpha, &inst, &p).unwrap();
        let a = alpha_of(&p, inst.metric(), Facilities::Population(&s.centers)).unwrap();
        prop_assert!(a <= alpha);
        for w in s.centers.windows(2) {
            prop_assert!(p.radius(w[0]) <= p.radius(w[1]));
        }
        let at_two = alpha_fair_k_center(2.0, &inst, &p).unwrap();
        prop_assert!(at_two.centers.len() <= inst.k());
    }

    #[test]
    fn fair_k_center_respects_k(inst in instance(200), t in 1u32..24) {
        let p = neighborhood_radii(&inst);
        let s = fair_k_center(t, &inst, &p).unwrap();
        prop_assert!(s.len() <= inst.k() && !s.is_empty());
        let a = alpha_of(&p, inst.metric(), Facilities::Population(&s.centers)).unwrap();
        prop_assert!(a <= s.alpha_param.unwrap());
    }

    #[test]
    fn real_line_is_one_fair(values in prop::collection::vec(prop_oneof![-50i32..50].prop_map(f64::from), 1..200), k in 1usize..200) {
        let k = k.min(values.len());
        let s = real_line_fair(&values, k).unwrap();
        prop_assert!(s.len() <= k);
        let inst = Instance::euclidean(PointSet::from_line(&values).unwrap(), k).unwrap();
        let p = neighborhood_radii(&inst);
        let a = alpha_of(&p, inst.metric(), Facilities::Population(&s.centers)).unwrap();
        prop_assert!(a <= 1.0);
    }

    #[test]
    fn any_small_solution_is_at_least_half_fair((inst, s) in instance_and_subset(60)) {
        let p = neighborhood_radii(&inst);
        let a = alpha_of(&p, inst.metric(), Facilities::Population(&s)).unwrap();
        prop_assert!(a >= 0.5);
    }

    #[test]
    fn alpha_matches_definition_and_shrinks_with_more_facilities((inst, s) in instance_and_subset(80), extra in any::<prop::sample::Index>()) {
        let p = neighborhood_radii(&inst);
        let a = alpha_of(&p, inst.metric(), Facilities::Population(&s)).unwrap();
        let expected = common::alpha_by_definition(inst.n(), &s, p.radii(), |i, j| inst.distance(i, j));
        prop_assert_eq!(a.value(), expected);
        let mut more = s.clone();
        more.push(extra.index(inst.n()));
        let b = alpha_of(&p, inst.metric(), Facilities::Population(&more)).unwrap();
        prop_assert!(b <= a);
    }

    #[test]
    fn objective_cross_checks((inst, s) in instance_and_subset(150), seed in any::<u64>()) {
        let a = assign(inst.metric(), Facilities::Population(&s)).unwrap();
        let o = objectives(&a);
        let n = inst.n() as f64;
        prop_assert!(o.kcenter_max <= o.kmedians_sum);
        prop_assert!(o.kmeans_sum * n >= o.kmedians_sum * o.kmedians_sum * (1.0 - 1e-12));
        let direct: f64 = (0..inst.n())
            .map(|i| s.iter().map(|&c| inst.distance(i, c)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max);
        prop_assert_eq!(o.kcenter_max, direct);
        // relabeling facilities permutes sizes only
        let mut shuffled = s.clone();
        use rand::seq::SliceRandom;
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let b = assign(inst.metric(), Facilities::Population(&shuffled)).unwrap();
        let mut sa = a.sizes.clone();
        let mut sb = b.sizes.clone();
        sa.sort_unstable();
        sb.sort_unstable();
        // only meaningful when no point has two nearest facilities
        let unique_nearest = (0..inst.n()).all(|i| {
            let best = s.iter().map(|&c| inst.distance(i, c)).fold(f64::INFINITY, f64::min);
            s.iter().filter(|&&c| inst.distance(i, c) == best).count() == 1
        });
        if unique_nearest {
            prop_assert_eq!(sa, sb);
            prop_assert!((load_balance_stddev(&a) - load_balance_stddev(&b)).abs() <= 1e-9);
        }
    }

    #[test]
    fn greedy_emits_distinct_centers(inst in instance(200)) {
        let s = greedy_k_center(&inst, 0).unwrap();
        let mut distinct: Vec<(u64, u64)> = inst.points().unwrap().points().iter().map(|p| (p.x.to_bits(), p.y.to_bits())).collect();
        distinct.sort_unstable();
        distinct.dedup();
        prop_assert_eq!(s.len(), inst.k().min(distinct.len()));
        let mut ids = s.centers.clone();
        ids.sort_unstable();
        ids.dedup();
        prop_assert_eq!(ids.len(), s.len());
    }

    #[test]
    fn lloyd_outputs(inst in instance(150), seed in any::<u64>()) {
        let pts = inst.points().unwrap();
        let cfg = LloydConfig::new(inst.k()).with_seed(seed);
        for run in [lloyd_k_means, lloyd_k_medians] {
            let r = run(pts, &cfg).unwrap();
            prop_assert_eq!(r.facilities.len(), inst.k());
            prop_assert!(r.facilities.facilities.iter().all(Point2D::is_finite));
            prop_assert!(r.objective_trace.windows(2).all(|w| w[1] <= w[0]));
            prop_assert_eq!(run(pts, &cfg).unwrap(), r);
        }
    }

    #[test]
    fn loader_accounts_for_every_row(rows in prop::collection::vec(prop_oneof![
        (-90.0f64..=90.0, -180.0f64..180.0).prop_map(|(a, b)| format!("{a},{b}")),
        Just("95,0".to_string()),
        Just("x,1".to_string()),
        Just("1".to_string()),
    ], 0..60)) {
        let text = format!("lat,lon\n{}\n", rows.join("\n"));
        let r = load_points_reader(text.as_bytes(), &CsvSchema::lat_lon()).unwrap();
        prop_assert_eq!(r.rows, rows.len());
        prop_assert_eq!(r.records.len() + r.errors.len(), rows.len());
        for e in &r.errors {
            prop_assert!(e.line >= 2 && e.line as usize <= rows.len() + 1);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn feasibility_monotone(inst in instance(20), a in 0.5f64..2.0, b in 0.5f64..2.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let p = neighborhood_radii_bruteforce(&inst).unwrap();
        let f_lo = feasible_alpha(&inst, &p, lo, inst.k()).unwrap().feasible;
        let f_hi = feasible_alpha(&inst, &p, hi, inst.k()).unwrap().feasible;
        prop_assert!(!f_lo || f_hi);
    }

    #[test]
    fn reduction_squares_need_two_centers((n, edges) in graph(6), k in 1usize..6) {
        let k = k.min(n);
        prop_assume!((n - k) % 2 == 0);
        let edges: Vec<_> = edges.into_iter().filter(|(u, v)| u != v).collect();
        let g = SimpleGraph::new(n, edges).unwrap();
        let red = dominating_set_reduction(&g, k).unwrap();
        let p = neighborhood_radii(&red.instance);
        if let Some(w) = feasible_alpha(&red.instance, &p, 1.0, red.k_prime).unwrap().witness {
            for sq in &red.squares {
                prop_assert!(w.centers.iter().filter(|c| sq.contains(c)).count() >= 2);
            }
        }
    }
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let pts = PointSet::new(common::random_points(20_000, &mut rng)).unwrap();
    let inst = Instance::euclidean(pts, 37).unwrap();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let p = neighborhood_radii(&inst);
            let s = fair_k_center(20, &inst, &p).unwrap();
            let r = report(&inst, &p, Facilities::Population(&s.centers)).unwrap();
            (p.radii().to_vec(), s, r)
        })
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn path_graph_endpoints() {
    for n in [1usize, 2, 7, 50] {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        let m = graph_metric(n, &edges).unwrap();
        assert_eq!(m.distance(0, n - 1), (n - 1) as f64);
        assert!(matches!(m, MetricView::Graph(_)));
    }
}

#[test]
fn alpha_of_infinite_when_zero_radius_is_missed() {
    let inst = Instance::euclidean(PointSet::from_line(&[0.0, 0.0, 5.0]).unwrap(), 2).unwrap();
    let p = neighborhood_radii(&inst);
    assert_eq!(alpha_of(&p, inst.metric(), Facilities::Population(&[2])).unwrap(), ExtendedReal::INFINITY);
}
