use planeloc::gen::{generate, QUERY_EVERY};
use planeloc::geom::{Point, Segment};
use planeloc::locator::LocatorConfig;
use planeloc::oracle::validate_insertion;
use planeloc::replay::{expected_answers, minimize, verify};
use planeloc::workload::{Op, Style, Workload, WorkloadError};

const STYLES: [Style; 3] = [Style::Nested, Style::GridWithIslands, Style::RandomValid];

#[test]
fn zero_insertions_rejected() {
    for s in STYLES {
        assert_eq!(generate(1, 0, s), Err(WorkloadError::Empty));
    }
}

#[test]
fn same_seed_same_bytes() {
    for s in STYLES {
        let a = generate(7, 300, s).unwrap().to_string();
        let b = generate(7, 300, s).unwrap().to_string();
        assert_eq!(a, b);
        assert_ne!(a, generate(8, 300, s).unwrap().to_string());
    }
}

#[test]
fn nested_four_is_one_square_and_a_query() {
    let w = generate(1, 4, Style::Nested).unwrap();
    assert_eq!(w.ops.len(), 5);
    assert!(matches!(w.ops[4], Op::Query(_)));
    let segs: Vec<&Segment> = w.ops[..4]
        .iter()
        .map(|o| match o {
            Op::Edge(s) => s,
            _ => panic!("expected an edge, got {o}"),
        })
        .collect();
    let mut ends: Vec<&Point> = segs.iter().flat_map(|s| [&s.a, &s.b]).collect();
    ends.sort();
    ends.dedup();
    assert_eq!(ends.len(), 4);
    let (h, v) = segs.iter().fold((0, 0), |(h, v), s| if s.is_vertical() { (h, v + 1) } else { (h + 1, v) });
    assert_eq!((h, v), (2, 2));
}

#[test]
fn exact_insertion_count_and_cadence() {
    for s in STYLES {
        for n in [1, 5, 97, 1000] {
            let w = generate(3, n, s).unwrap();
            assert_eq!(w.insertions(), n, "{s} n={n}");
            assert_eq!(w.ops.len() - n, n / QUERY_EVERY, "{s} n={n}");
        }
    }
}

/// Replays insertions with a full crossing check; vertices must land in a
/// face or in the interior of exactly one edge.
fn assert_valid(w: &Workload) {
    let mut segs: Vec<Segment> = Vec::new();
    let mut pts: Vec<Point> = Vec::new();
    for (i, op) in w.ops.iter().enumerate() {
        match op {
            Op::Edge(s) => {
                validate_insertion(&segs, &pts, s).unwrap_or_else(|v| panic!("op {i} {op}: {v}"));
                pts.extend([s.a.clone(), s.b.clone()]);
                segs.push(s.clone());
            }
            Op::Vertex(p) => {
                assert!(!pts.contains(p), "op {i} {op}: duplicate vertex");
                let on: Vec<usize> = (0..segs.len()).filter(|&k| segs[k].contains(p)).collect();
                assert!(on.len() <= 1, "op {i} {op}: on several edges");
                if let Some(&k) = on.first() {
                    let s = segs[k].clone();
                    segs[k] = Segment::new(s.a, p.clone()).unwrap();
                    segs.push(Segment::new(p.clone(), s.b).unwrap());
                }
                pts.push(p.clone());
            }
            Op::Query(_) => {}
        }
    }
}

#[test]
fn generated_workloads_are_valid() {
    for s in STYLES {
        for seed in 0..4 {
            assert_valid(&generate(seed, 600, s).unwrap());
        }
    }
}

#[test]
fn text_roundtrip() {
    for s in STYLES {
        let w = generate(11, 400, s).unwrap();
        let text = w.to_string();
        let back: Workload = text.parse().unwrap();
        assert_eq!(back, w);
        assert_eq!(back.to_string(), text);
    }
}

#[test]
fn parse_accepts_comments_decimals_and_fractions() {
    let w: Workload = "# header\n\ne 0 0 1.5 2\nv 3/4 -0.25\nq 1 1\n".parse().unwrap();
    assert_eq!(w.ops.len(), 3);
    assert_eq!(w.ops[1].to_string(), "v 0.75 -0.25");
    assert_eq!(w.ops[0].to_string(), "e 0 0 1.5 2");
    let third: Workload = "v 1/3 0".parse().unwrap();
    assert_eq!(third.to_string(), "v 1/3 0\n");
}

#[test]
fn parse_errors_name_the_line() {
    let err = "e 0 0 1 1\nx 1 2\n".parse::<Workload>().unwrap_err();
    assert!(matches!(err, WorkloadError::Parse { line: 2, .. }), "{err}");
    let err = "e 0 0 1\n".parse::<Workload>().unwrap_err();
    assert!(matches!(err, WorkloadError::Parse { line: 1, .. }), "{err}");
    assert!("v a b".parse::<Workload>().is_err());
}

#[test]
fn styles_parse_and_print() {
    for s in STYLES {
        assert_eq!(s.to_string().parse::<Style>().unwrap(), s);
    }
    assert!("spiral".parse::<Style>().is_err());
}

#[test]
fn generated_workloads_verify() {
    for s in STYLES {
        for seed in 0..3 {
            let w = generate(seed, 500, s).unwrap();
            let rep = verify(&w, LocatorConfig::default(), None).unwrap();
            assert!(rep.passed(), "{s} seed {seed}: {}", rep.mismatch.unwrap());
            assert_eq!(rep.queries, 500 / QUERY_EVERY);
        }
    }
}

#[test]
fn crossing_edge_rejected() {
    let w: Workload = "e 0 0 10 10\ne 0 10 10 0\n".parse().unwrap();
    assert!(verify(&w, LocatorConfig::default(), None).is_err());
}

#[test]
fn mutated_expectation_fails_with_short_reproducer() {
    let w = generate(5, 200, Style::Nested).unwrap();
    let mut exp = expected_answers(&w).unwrap();
    let rep = verify(&w, LocatorConfig::default(), Some(&exp)).unwrap();
    assert!(rep.passed());
    let k = exp.len() / 2;
    exp[k] = "face 999999".to_string();
    let rep = verify(&w, LocatorConfig::default(), Some(&exp)).unwrap();
    let m = rep.mismatch.expect("mutation detected");
    assert_eq!(m.want, "face 999999");
    let fails = |p: &Workload| {
        let e: Vec<String> = exp.iter().take(p.ops.iter().filter(|o| !o.is_insertion()).count()).cloned().collect();
        !verify(p, LocatorConfig::default(), Some(&e)).unwrap().passed()
    };
    let small = minimize(&w, fails);
    assert!(small.ops.len() <= m.index + 1);
    assert!(matches!(small.ops.last(), Some(Op::Query(_))));
    assert!(fails(&small));
}
