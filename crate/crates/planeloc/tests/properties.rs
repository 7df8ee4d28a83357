use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_rational::BigRational;
use proptest::prelude::*;

use planeloc::blocks::cascade::{CascadeChain, Strategy as Search};
use planeloc::blocks::dsu::DisjointSet;
use planeloc::blocks::pst::{pst_build_sorted, pst_ray_shoot};
use planeloc::blocks::queue::QueueForest;
use planeloc::blocks::stabmin::StabbingMinSet;
use planeloc::blocks::wbb::Wbb;
use planeloc::gen::{generate, rng, Strata};
use planeloc::geom::{orientation, Coord, Orientation, Point, Segment};
use planeloc::locator::LocatorConfig;
use planeloc::oracle::{naive_ray_shoot, naive_stab_lowest};
use planeloc::replay::{verify, Replay};
use planeloc::stab_lowest::StabLowestIndex;
use planeloc::workload::{fmt_coord, Op, Style};

fn coord() -> impl Strategy<Value = Coord> {
    prop_oneof![
        (-1000i64..1000).prop_map(Coord::from_int),
        (-4000i64..4000, 1i64..9).prop_map(|(n, d)| Coord::from_ratio(n, d)),
        (-1000i64..1000, 0u32..40).prop_map(|(n, k)| Coord::from_ratio(n, 1i64 << k)),
        any::<i64>().prop_map(|n| Coord::from_ratio(n, 3)),
    ]
}

fn point() -> impl Strategy<Value = Point> {
    (coord(), coord()).prop_map(|(x, y)| Point { x, y })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn orientation_matches_big_arithmetic(p in point(), q in point(), r in point()) {
        let b = |c: &Coord| c.to_big();
        let v: BigRational = (b(&q.x) - b(&p.x)) * (b(&r.y) - b(&p.y)) - (b(&q.y) - b(&p.y)) * (b(&r.x) - b(&p.x));
        let want = match v.cmp(&BigRational::from_integer(0.into())) {
            Ordering::Greater => Orientation::Left,
            Ordering::Less => Orientation::Right,
            Ordering::Equal => Orientation::Collinear,
        };
        prop_assert_eq!(orientation(&p, &q, &r), want);
    }

    #[test]
    fn coord_order_matches_big(a in coord(), b in coord()) {
        prop_assert_eq!(a.cmp(&b), a.to_big().cmp(&b.to_big()));
        prop_assert_eq!(a == b, a.to_big() == b.to_big());
    }

    #[test]
    fn coord_text_roundtrip(a in coord()) {
        let back: Coord = fmt_coord(&a).parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn queue_matches_vec(seed_vals in prop::collection::vec(0u32..1000, 1..40), ops in prop::collection::vec((0u8..3, any::<prop::sample::Index>(), any::<prop::sample::Index>()), 0..60)) {
        let mut f = QueueForest::new();
        let (q0, _) = f.create_from(&seed_vals);
        let mut model: Vec<(u32, Vec<u32>)> = vec![(q0, seed_vals.clone())];
        let mut next = 1000;
        for (kind, i, j) in ops {
            let k = i.index(model.len());
            match kind {
                0 => {
                    f.push_back(model[k].0, next).unwrap();
                    model[k].1.push(next);
                    next += 1;
                }
                1 if !model[k].1.is_empty() => {
                    let hs = f.handles(model[k].0);
                    let at = j.index(hs.len());
                    let (a, b) = f.split(model[k].0, hs[at]).unwrap();
                    let tail = model[k].1.split_off(at + 1);
                    prop_assert_eq!(a, model[k].0);
                    model.push((b, tail));
                }
                2 if model.len() > 1 => {
                    let m = j.index(model.len());
                    if m != k {
                        let (qa, qb) = (model[k].0, model[m].0);
                        let id = f.concat(qa, qb).unwrap();
                        prop_assert_eq!(id, qa);
                        let moved = model[m].1.clone();
                        model[k].1.extend(moved);
                        model.remove(m);
                    }
                }
                _ => {}
            }
            for (q, v) in &model {
                prop_assert_eq!(&f.to_vec(*q), v);
                prop_assert_eq!(f.min(*q), v.iter().min().copied());
                f.check_invariants(*q).unwrap();
            }
        }
    }

    #[test]
    fn dsu_matches_relabeling(n in 1usize..60, pairs in prop::collection::vec((any::<prop::sample::Index>(), any::<prop::sample::Index>()), 0..80)) {
        let mut d = DisjointSet::new();
        for _ in 0..n {
            d.make_set();
        }
        let mut label: Vec<usize> = (0..n).collect();
        for (a, b) in pairs {
            let (a, b) = (a.index(n), b.index(n));
            d.union(a as u32, b as u32);
            let (la, lb) = (label[a], label[b]);
            for l in label.iter_mut() {
                if *l == lb {
                    *l = la;
                }
            }
            for x in 0..n {
                for y in 0..n {
                    prop_assert_eq!(d.find_const(x as u32) == d.find_const(y as u32), label[x] == label[y]);
                }
            }
        }
    }

    #[test]
    fn pst_matches_scan(shapes in prop::collection::vec((1i64..60, -1i64..=1), 1..40), qs in prop::collection::vec((0i64..130, -5i64..90), 1..30)) {
        let segs: Vec<Segment> = shapes.iter().enumerate()
            .map(|(i, &(len, d))| Segment::from_ints(0, 2 * i as i64, len, 2 * i as i64 + d))
            .collect();
        let t = pst_build_sorted(Coord::zero(), segs.clone()).unwrap();
        prop_assert!(t.check_heap());
        for (x, y) in qs {
            let q = Point { x: Coord::from_ratio(x, 2), y: Coord::from_int(y) };
            let want = naive_ray_shoot(&segs, &q).map(|i| segs[i].clone());
            prop_assert_eq!(pst_ray_shoot(&t, &q).unwrap(), want, "{:?}", q);
        }
    }

    #[test]
    fn wbb_keeps_balance(keys in prop::collection::vec(-500i64..500, 1..400), f in 2usize..6) {
        let mut t: Wbb<i64> = Wbb::new(f);
        let mut set = BTreeSet::new();
        for k in keys {
            prop_assert_eq!(t.insert(k, |_, _| {}), set.insert(k));
        }
        t.check_invariants().unwrap();
        prop_assert_eq!(t.keys(), set.into_iter().collect::<Vec<_>>());
    }

    #[test]
    fn cascade_finds_predecessors(lists in prop::collection::vec(prop::collection::vec(-100i64..100, 0..30), 1..8), keys in prop::collection::vec(-110i64..110, 1..20)) {
        let lists: Vec<Vec<i64>> = lists.into_iter().map(|mut l| { l.sort(); l }).collect();
        let plain = CascadeChain::new(lists.clone(), Search::PlainBinary);
        let casc = CascadeChain::new(lists.clone(), Search::Cascading);
        for k in keys {
            let want: Vec<Option<i64>> = lists.iter().map(|l| l.iter().rev().find(|&&e| e <= k).copied()).collect();
            prop_assert_eq!(plain.search(&k), want.clone());
            prop_assert_eq!(casc.search(&k), want);
        }
    }

    #[test]
    fn stabbing_min_matches_scan(ivs in prop::collection::vec((-50i64..50, 0i64..40, 0u32..1000), 1..60), del in prop::collection::vec(any::<prop::sample::Index>(), 0..10), ys in prop::collection::vec(-120i64..120, 1..30)) {
        let mut s = StabbingMinSet::new();
        let mut live = Vec::new();
        for &(lo, len, key) in &ivs {
            s.insert(Coord::from_int(lo), Coord::from_int(lo + len), key);
            live.push(true);
        }
        for d in del {
            let h = d.index(ivs.len());
            s.delete(h as u32);
            live[h] = false;
        }
        for y in ys {
            let y = Coord::from_ratio(y, 2);
            let want = ivs.iter().zip(&live)
                .filter(|((lo, len, _), l)| **l && Coord::from_int(*lo) <= y && y <= Coord::from_int(lo + len))
                .map(|((_, _, k), _)| *k)
                .min();
            prop_assert_eq!(s.query(&y).map(|(_, k)| k), want);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn stab_lowest_matches_scan(seed in any::<u64>(), f in 2usize..9, cascading in any::<bool>()) {
        let mut r = rng(seed);
        let strata = Strata::new(&mut r, 5, 6);
        let strategy = if cascading { Search::Cascading } else { Search::PlainBinary };
        let mut s = StabLowestIndex::new(f, strategy);
        let mut all = Vec::new();
        for i in 0..150 {
            let t = strata.trapezoid(&mut r, 4);
            all.push(t.clone());
            s.insert(t);
            if i % 10 == 0 {
                for _ in 0..10 {
                    let q = strata.query(&mut r);
                    prop_assert_eq!(s.query_lowest(&q).map(|x| x.0 as usize), naive_stab_lowest(&all, &q));
                }
            }
        }
        s.check_invariants().unwrap();
    }

    #[test]
    fn generated_workloads_agree_with_oracle(seed in any::<u64>(), style in prop_oneof![Just(Style::Nested), Just(Style::GridWithIslands), Just(Style::RandomValid)], n in 1usize..250) {
        let w = generate(seed, n, style).unwrap();
        let rep = verify(&w, LocatorConfig::default(), None).unwrap();
        prop_assert!(rep.passed(), "{}", rep.mismatch.unwrap());
    }

    #[test]
    fn invariants_hold_after_every_insertion(seed in any::<u64>(), style in prop_oneof![Just(Style::Nested), Just(Style::GridWithIslands), Just(Style::RandomValid)]) {
        let w = generate(seed, 120, style).unwrap();
        let mut rp = Replay::new(LocatorConfig::default());
        for (i, op) in w.ops.iter().enumerate() {
            rp.insert(i, op).unwrap();
            if op.is_insertion() {
                rp.locator.check_invariants().map_err(|e| TestCaseError::fail(format!("op {i}: {e}")))?;
            }
        }
    }

    #[test]
    fn component_ray_shoot_matches_scan(seed in any::<u64>(), style in prop_oneof![Just(Style::Nested), Just(Style::GridWithIslands), Just(Style::RandomValid)]) {
        let w = generate(seed, 300, style).unwrap();
        let mut rp = Replay::new(LocatorConfig::default());
        for (i, op) in w.ops.iter().enumerate() {
            rp.insert(i, op).unwrap();
        }
        let sub = rp.locator.subdivision();
        let segs: Vec<Segment> = sub.segments().cloned().collect();
        let mut r = rng(seed);
        let hi = sub.vertex_points().map(|p| p.x.to_f64().max(p.y.to_f64()) as i64).max().unwrap();
        let comps: BTreeSet<u32> = (0..segs.len() as u32).map(|e| sub.component(e)).collect();
        for _ in 0..40 {
            let q = Point { x: Coord::from_ratio(r.gen_range(-4..2 * hi + 4), 2), y: Coord::from_ratio(r.gen_range(-4..2 * hi + 4), 2) };
            if sub.vertex_at(&q).is_some() || segs.iter().any(|s| s.contains(&q)) {
                continue;
            }
            for &g in &comps {
                let mine: Vec<usize> = (0..segs.len()).filter(|&e| sub.component(e as u32) == g).collect();
                let local: Vec<Segment> = mine.iter().map(|&e| segs[e].clone()).collect();
                let want = naive_ray_shoot(&local, &q).map(|i| mine[i] as u32);
                let got = rp.locator.locate_cc().ray_shoot(g, &q).unwrap().map(|(e, _)| e);
                prop_assert_eq!(got, want, "component {} q {:?}", g, q);
            }
        }
    }
}

use rand::Rng;

#[test]
fn op_display_is_parseable() {
    let w = generate(3, 50, Style::RandomValid).unwrap();
    for op in &w.ops {
        let back: planeloc::workload::Workload = op.to_string().parse().unwrap();
        assert_eq!(&back.ops[0], op);
        assert!(matches!(op, Op::Edge(_) | Op::Vertex(_) | Op::Query(_)));
    }
}
