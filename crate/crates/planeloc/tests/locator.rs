use planeloc::blocks::cascade::Strategy;
use planeloc::gen::{generate, rng};
use planeloc::geom::{Coord, Point, Segment};
use planeloc::locator::{Boundary, LocateResult, Locator, LocatorConfig};
use planeloc::oracle::NaiveResult;
use planeloc::replay::{Bijection, Replay};
use planeloc::subdivision::InsertionClass;
use planeloc::workload::{Op, Style};
use rand::Rng;

fn square(l: &mut Locator, x0: i64, y0: i64, x1: i64, y1: i64) -> Vec<u32> {
    [(x0, y0, x1, y0), (x1, y0, x1, y1), (x0, y1, x1, y1), (x0, y0, x0, y1)]
        .iter()
        .map(|&(a, b, c, d)| l.insert_edge(&Segment::from_ints(a, b, c, d)).unwrap())
        .collect()
}

fn face(r: LocateResult) -> planeloc::subdivision::FaceName {
    match r {
        LocateResult::Face(f) => f,
        other => panic!("expected a face, got {other:?}"),
    }
}

fn half(x: i64, y: i64) -> Point {
    Point { x: Coord::from_ratio(x, 2), y: Coord::from_ratio(y, 2) }
}

#[test]
fn empty_is_outer() {
    let l = Locator::default();
    assert_eq!(l.locate(&Point::new(3, -7)), LocateResult::OuterFace);
}

#[test]
fn square_inside_is_its_face() {
    let mut l = Locator::default();
    let e = square(&mut l, 0, 0, 10, 10);
    let f = face(l.locate(&Point::new(5, 5)));
    assert_eq!(l.subdivision().face_name_of_directed_edge(2 * e[0]), Some(f));
    assert_eq!(l.locate(&Point::new(5, 11)), LocateResult::OuterFace);
    assert_eq!(l.locate(&Point::new(-1, 5)), LocateResult::OuterFace);
}

#[test]
fn isolated_edge_leaves_everything_outer() {
    let mut l = Locator::default();
    l.insert_edge(&Segment::from_ints(0, 0, 10, 3)).unwrap();
    for p in [(5, 0), (5, 5), (-1, 0), (11, 3), (0, 1)] {
        assert_eq!(l.locate(&Point::new(p.0, p.1)), LocateResult::OuterFace, "{p:?}");
    }
}

#[test]
fn nested_squares() {
    let mut l = Locator::default();
    let big = square(&mut l, 0, 0, 10, 10);
    square(&mut l, 3, 3, 7, 7);
    let annulus = face(l.locate(&Point::new(5, 8)));
    let inner = face(l.locate(&Point::new(5, 5)));
    assert_ne!(annulus, inner);
    assert_eq!(l.subdivision().face_name_of_directed_edge(2 * big[2] + 1), Some(annulus));
    assert_eq!(face(l.locate(&Point::new(1, 1))), annulus);
    assert_eq!(face(l.locate(&Point::new(5, 2))), annulus);
    assert_eq!(l.locate(&Point::new(5, 20)), LocateResult::OuterFace);
    assert_eq!(l.locate(&Point::new(5, 10)), LocateResult::OnBoundary(Boundary::Edge(big[2])));
    let v = l.subdivision().vertex_at(&Point::new(10, 10)).unwrap();
    assert_eq!(l.locate(&Point::new(10, 10)), LocateResult::OnBoundary(Boundary::Vertex(v)));
}

#[test]
fn vertex_in_open_face_changes_nothing_else() {
    let mut l = Locator::default();
    square(&mut l, 0, 0, 10, 10);
    let before = l.stats();
    l.insert_vertex(&Point::new(4, 6)).unwrap();
    let after = l.stats();
    assert_eq!(after.vertices, before.vertices + 1);
    assert_eq!(after.edges, before.edges);
    assert_eq!(after.find_cc, before.find_cc);
    assert_eq!(after.locate_cc, before.locate_cc);
}

#[test]
fn vertex_on_edge_keeps_answers() {
    let mut l = Locator::default();
    square(&mut l, 0, 0, 10, 10);
    square(&mut l, 3, 3, 7, 7);
    let probes: Vec<Point> = (-1..=21).flat_map(|x| (-1..=21).map(move |y| half(x, y))).collect();
    let names = |l: &Locator| -> Vec<LocateResult> { probes.iter().map(|q| l.locate(q)).collect() };
    let before = names(&l);
    l.insert_vertex(&Point::new(5, 10)).unwrap();
    l.insert_vertex(&Point::new(7, 5)).unwrap();
    l.check_invariants().unwrap();
    let after = names(&l);
    for (q, (a, b)) in probes.iter().zip(before.iter().zip(&after)) {
        match (a, b) {
            (LocateResult::OnBoundary(Boundary::Edge(_)), LocateResult::OnBoundary(_)) => {}
            _ => assert_eq!(a, b, "{q:?}"),
        }
    }
}

#[test]
fn edge_attached_to_vertex_on_diagonal() {
    let mut l = Locator::default();
    square(&mut l, 0, 0, 10, 10);
    l.insert_edge(&Segment::from_ints(0, 0, 10, 10)).unwrap();
    let (lower, upper) = (face(l.locate(&Point::new(7, 2))), face(l.locate(&Point::new(2, 7))));
    assert_ne!(lower, upper);
    l.insert_vertex(&Point::new(5, 5)).unwrap();
    let seg = Segment::from_ints(5, 5, 10, 0);
    assert!(matches!(l.subdivision().classify_insertion(&seg).unwrap(), InsertionClass::SameComponent { splits_face: true, .. }));
    l.insert_edge(&seg).unwrap();
    l.check_invariants().unwrap();
    let (a, b) = (face(l.locate(&Point::new(8, 1))), face(l.locate(&Point::new(9, 5))));
    assert_ne!(a, b);
    assert_eq!(face(l.locate(&Point::new(2, 7))), upper);
}

#[test]
fn reads_are_idempotent() {
    let w = generate(2, 400, Style::GridWithIslands).unwrap();
    let mut rp = Replay::new(LocatorConfig::default());
    for (i, op) in w.ops.iter().enumerate() {
        rp.insert(i, op).unwrap();
    }
    let mut r = rng(9);
    for _ in 0..300 {
        let q = half(r.gen_range(-20..1200), r.gen_range(-20..1200));
        assert_eq!(rp.locator.locate(&q), rp.locator.locate(&q));
    }
}

#[test]
fn just_below_an_outer_boundary_edge() {
    for style in [Style::Nested, Style::GridWithIslands, Style::RandomValid] {
        let w = generate(4, 300, style).unwrap();
        let mut rp = Replay::new(LocatorConfig::default());
        for (i, op) in w.ops.iter().enumerate() {
            rp.insert(i, op).unwrap();
        }
        let sub = rp.locator.subdivision();
        let mut probes = Vec::new();
        for f in sub.faces() {
            for d in sub.face_cycle(f) {
                let (t, h) = (sub.tail_pos(d), sub.head_pos(d));
                if t.x <= h.x {
                    continue;
                }
                // the face lies to the left of a leftward edge, so below it
                let mx = &(&t.x + &h.x) / &Coord::from_int(2);
                let s = sub.segment(d / 2);
                let eps = Coord::from_ratio(1, 1 << 20);
                let q = Point { x: mx.clone(), y: &s.y_at(&mx) - &eps };
                probes.push((q, f, d / 2));
            }
        }
        assert!(!probes.is_empty(), "{style}");
        for (q, f, e) in probes {
            if let NaiveResult::Face(_) = rp.oracle().locate(&q) {
                assert_eq!(rp.locator.locate(&q), LocateResult::Face(f), "{style} below edge {e}");
            }
        }
    }
}

#[test]
fn random_states_match_oracle_both_strategies() {
    for (k, style) in [Style::Nested, Style::GridWithIslands, Style::RandomValid].into_iter().enumerate() {
        let w = generate(40 + k as u64, 800, style).unwrap();
        let mut plain = Replay::new(LocatorConfig::default());
        let mut casc = Replay::new(LocatorConfig { strategy: Strategy::Cascading, ..LocatorConfig::default() });
        let mut r = rng(k as u64);
        let (mut faces, mut outer) = (0, 0);
        let mut seen = 0;
        for (i, op) in w.ops.iter().enumerate() {
            if matches!(op, Op::Query(_)) {
                continue;
            }
            plain.insert(i, op).unwrap();
            casc.insert(i, op).unwrap();
            seen += 1;
            if seen % 100 != 0 {
                continue;
            }
            plain.locator.check_invariants().unwrap();
            let hi = plain.locator.subdivision().vertex_points().map(|p| p.x.to_f64().max(p.y.to_f64()) as i64).max().unwrap();
            let mut names = Bijection::default();
            for _ in 0..60 {
                let q = half(r.gen_range(-20..2 * hi + 20), r.gen_range(-20..2 * hi + 20));
                let want = plain.check(&q, &mut names).unwrap_or_else(|(g, w)| panic!("{style} op {i} {q:?}: {g:?} vs {w:?}"));
                assert_eq!(casc.locator.locate(&q), plain.locator.locate(&q));
                match want {
                    NaiveResult::Face(_) => faces += 1,
                    NaiveResult::Outer => outer += 1,
                    _ => {}
                }
            }
        }
        assert!(faces > 0 && outer > 0, "{style}: faces {faces} outer {outer}");
    }
}
