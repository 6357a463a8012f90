use gathering_core::analysis::brute_force_sec;
use gathering_core::geometry::{
    convex_hull, make_sector_pair, points_coincide, sector_contains, smallest_enclosing_circle, Point, SectorSide,
    Tolerance,
};
use gathering_core::model::{max_points, observe, Configuration, DetectionMode, Frame};
use gathering_core::protocol::{decide, Branch};
use proptest::prelude::*;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn spread(pts: Vec<(f64, f64)>, gap: f64) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::new();
    for (x, y) in pts {
        let q = Point::new(x, y);
        if out.iter().all(|p| p.dist(q) > gap) {
            out.push(q);
        }
    }
    out
}

fn point_set(max: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), 1..=max).prop_map(|v| spread(v, 1e-3))
}

fn frame() -> impl Strategy<Value = Frame> {
    (
        0.0..std::f64::consts::TAU,
        0.25..4.0f64,
        -5.0..5.0f64,
        -5.0..5.0f64,
        any::<bool>(),
    )
        .prop_map(|(r, s, x, y, f)| Frame::new(r, s, Point::new(x, y), f).unwrap())
}

fn configuration() -> impl Strategy<Value = Configuration> {
    (point_set(8), prop::collection::vec(1usize..4, 8))
        .prop_map(|(pts, counts)| Configuration::from_counts(pts.into_iter().zip(counts), tol()).unwrap())
}

proptest! {
    #[test]
    fn sec_matches_brute_force(pts in point_set(12)) {
        let fast = smallest_enclosing_circle(&pts).unwrap();
        let slow = brute_force_sec(&pts).unwrap();
        prop_assert!((fast.radius - slow.radius).abs() <= 1e-9 * slow.radius.max(1.0));
        for p in &pts {
            prop_assert!(fast.center.dist(*p) <= fast.radius + 1e-9);
        }
    }

    #[test]
    fn hull_contains_every_point(pts in point_set(15)) {
        let hull = convex_hull(&pts).unwrap();
        for p in &pts {
            prop_assert!(hull.contains(*p, tol()));
        }
        for v in hull.vertices() {
            prop_assert!(pts.contains(&v));
        }
    }

    #[test]
    fn sectors_partition_the_plane(
        r in (-5.0..5.0f64, -5.0..5.0f64),
        rp in (-5.0..5.0f64, -5.0..5.0f64),
        q in (-5.0..5.0f64, -5.0..5.0f64),
    ) {
        let (r, rp, q) = (Point::new(r.0, r.1), Point::new(rp.0, rp.1), Point::new(q.0, q.1));
        let c = Point::ORIGIN;
        prop_assume!(r.norm() > 1e-3 && rp.norm() > 1e-3 && q.norm() > 1e-3);
        if let Some(pair) = make_sector_pair(r, rp, c, tol()).unwrap() {
            prop_assume!(!pair.on_bounding_rays(q, Tolerance::new(1e-6).unwrap()));
            let a = sector_contains(&pair, SectorSide::First, q, tol());
            let b = sector_contains(&pair, SectorSide::Second, q, tol());
            prop_assert!(a != b);
        }
    }

    #[test]
    fn frames_round_trip(f in frame(), x in -10.0..10.0f64, y in -10.0..10.0f64) {
        let q = Point::new(x, y);
        prop_assert!(f.to_global(f.to_local(q)).dist(q) < 1e-9);
    }

    #[test]
    fn max_points_are_frame_invariant(cfg in configuration(), f in frame()) {
        let view = observe(&cfg, &f, DetectionMode::Strong);
        let local = Configuration::from_counts(
            view.entries().iter().map(|&(p, m)| (p, m.exact().unwrap())),
            tol(),
        ).unwrap();
        let mut back: Vec<Point> = max_points(&local).unwrap().into_iter().map(|p| f.to_global(p)).collect();
        let mut direct = max_points(&cfg).unwrap();
        back.sort_by(Point::lex_cmp);
        direct.sort_by(Point::lex_cmp);
        prop_assert_eq!(back.len(), direct.len());
        for (a, b) in back.iter().zip(&direct) {
            prop_assert!(a.dist(*b) < 1e-9);
        }
    }

    #[test]
    fn decisions_are_similarity_equivariant(cfg in configuration(), f in frame(), g in frame(), who in 0usize..8) {
        let me = cfg.occupied()[who % cfg.len()].point;
        let max = max_points(&cfg).unwrap();
        if max.len() == 2 {
            // exact distance ties are broken by a frame-dependent order
            prop_assume!((me.dist(max[0]) - me.dist(max[1])).abs() > 1e-6);
        }
        let global = |fr: &Frame| {
            let d = decide(&observe(&cfg, fr, DetectionMode::Strong), fr.to_local(me), DetectionMode::Strong, tol()).unwrap();
            (d.branch, d.action.kind(), d.action.target().map(|t| fr.to_global(t)))
        };
        let (bf, kf, tf) = global(&f);
        let (bg, kg, tg) = global(&g);
        prop_assert_eq!(bf, bg);
        prop_assert_eq!(kf, kg);
        match (tf, tg) {
            (Some(a), Some(b)) => prop_assert!(a.dist(b) < 1e-7, "{a:?} vs {b:?}"),
            (None, None) => {}
            _ => prop_assert!(false, "targets disagree"),
        }
        if bf == Branch::UniqueMax {
            let t = tf.unwrap_or(me);
            prop_assert!(points_coincide(t, max[0], Tolerance::new(1e-7).unwrap()));
        }
    }
}
