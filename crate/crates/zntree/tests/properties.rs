//! Property tests on group, boundary and walk invariants.

mod common;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;
use zntree::boundary::{d_ultra, line_between, BoundaryPoint, Point};
use zntree::walk::{run_ensemble, sample_walk, strip_count, translate_cone, ConeSet, WalkOptions};
use zntree::workspace::Workspace;
use zntree::{Int, Word, ZnVec};

fn reduced(max_len: usize) -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec(prop_oneof![Just(1), Just(-1), Just(2), Just(-2)], 0..=max_len)
        .prop_map(|w| reduce(&w))
}

fn free(ls: &[i32]) -> Word {
    to_word(1, ls)
}

/// Right-lexicographic comparison on plain coordinates.
fn right_lex(a: &[i64], b: &[i64]) -> Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

fn vec2() -> impl Strategy<Value = [i64; 2]> {
    [-50i64..50, -50i64..50]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn zn_order_is_right_lex(a in vec2(), b in vec2(), c in vec2()) {
        let (x, y, z) = (ZnVec::from_i64s(&a), ZnVec::from_i64s(&b), ZnVec::from_i64s(&c));
        prop_assert_eq!(x.try_cmp(&y).unwrap(), right_lex(&a, &b));
        // Translation invariance of the order.
        let (xz, yz) = (x.try_add(&z).unwrap(), y.try_add(&z).unwrap());
        prop_assert_eq!(xz.try_cmp(&yz).unwrap(), x.try_cmp(&y).unwrap());
        prop_assert_eq!(x.try_add(&y).unwrap().try_sub(&y).unwrap(), x);
    }

    #[test]
    fn free_words_match_stack_reduction(u in reduced(24), v in reduced(24)) {
        let (wu, wv) = (free(&u), free(&v));
        prop_assert_eq!(from_word(&wu.mult(&wv).unwrap()), naive_mult(&u, &v));
        prop_assert_eq!(from_word(&wu.invert()), naive_inv(&u));
        prop_assert!(wu.mult(&wu.invert()).unwrap().is_empty());
        let c = zntree::word::c_len(&wu, &wv).unwrap();
        prop_assert_eq!(c, ZnVec::axis(1, naive_com(&u, &v).len() as i64));
    }

    #[test]
    fn vertex_metric_is_ultrametric(x in reduced(10), y in reduced(10), z in reduced(10)) {
        let p = |w: &[i32]| Point::Vertex(free(w));
        let (px, py, pz) = (p(&x), p(&y), p(&z));
        let dxy = d_ultra(&px, &py).unwrap();
        let dyz = d_ultra(&py, &pz).unwrap();
        let dxz = d_ultra(&px, &pz).unwrap();
        prop_assert!(dxz <= dxy.max(dyz) * (1.0 + 4.0 * f64::EPSILON));
        prop_assert_eq!(dxy, d_ultra(&py, &px).unwrap());
        prop_assert_eq!(dxy == 0.0, x == y);
    }

    #[test]
    fn translate_cone_matches_translated_membership(
        h in reduced(6), x in reduced(4), base in reduced(5), tail in reduced(3),
    ) {
        let tail = naive_cyclic(&tail).1;
        prop_assume!(!tail.is_empty());
        let Ok(end) = BoundaryPoint::symbolic(free(&base), free(&tail)) else {
            return Ok(());
        };
        let Ok(moved) = end.translate(&free(&h)) else {
            return Ok(());
        };
        let inside = x.is_empty() || end.in_cone(&free(&x)).unwrap();
        let image_inside = match translate_cone(&free(&h), &free(&x)).unwrap() {
            ConeSet::Whole => true,
            ConeSet::Cone(q) => moved.in_cone(&q).unwrap(),
            ConeSet::Complement(s) => !moved.in_cone(&s).unwrap(),
        };
        prop_assert_eq!(inside, image_inside);
    }
}

#[test]
fn hbar_bounded_by_word_length() {
    let ws = Workspace::notmin();
    let k0 = ws
        .group
        .generators()
        .iter()
        .map(|g| g.height().abs().to_i64().unwrap())
        .max()
        .unwrap();
    let ball = ws.group.ball_enumerate(5).unwrap();
    for (i, g) in ball.elements.iter().enumerate() {
        let h = ws.group.hbar_element(&g.word);
        let bound = k0 * ball.word_length(i) as i64;
        assert!(h.abs() <= Int::from(bound), "hbar {h:?} above {bound} for {:?}", g.word);
    }
}

#[test]
fn transition_law_matches_measure() {
    let ws = Workspace::notmin();
    let mu = &ws.measure;
    let (paths, len) = (400, 100);
    let steps = paths * len;
    let mut counts = vec![0usize; mu.support().len()];
    for w in 0..paths as u64 {
        let path = sample_walk(mu, 77, w, len, &WalkOptions::default()).unwrap();
        let mut prev: Option<Word> = None;
        path.replay(mu, |_, tau| {
            if let Some(p) = &prev {
                let step = p.invert().mult(tau)?;
                let idx = mu
                    .support()
                    .iter()
                    .position(|(g, _)| g.word == step)
                    .expect("increment in the support");
                counts[idx] += 1;
            }
            prev = Some(tau.clone());
            Ok(())
        })
        .unwrap();
    }
    assert_eq!(counts.iter().sum::<usize>(), steps);
    for ((_, p), &c) in mu.support().iter().zip(&counts) {
        let sigma = (steps as f64 * p * (1.0 - p)).sqrt();
        let dev = (c as f64 - steps as f64 * p).abs();
        assert!(dev <= 3.0 * sigma, "count {c} against weight {p}");
    }
}

#[test]
fn strip_counts_are_equivariant() {
    let ws = Workspace::notmin();
    let g = &ws.group;
    let k = 5;
    let a = ws.parse_end("u5^-inf").unwrap();
    let b = ws.parse_end("a^+inf").unwrap();
    let base = strip_count(g, &a, &b, k).unwrap().counts;
    let ball = g.ball_enumerate(k).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..4 {
        let shift = ball.elements[rand::Rng::random_range(&mut rng, 1..ball.len())].word.clone();
        let line = line_between(&a.translate(&shift).unwrap(), &b.translate(&shift).unwrap()).unwrap();
        let mut counts = Vec::new();
        let mut acc = 0u64;
        for s in 0..=k {
            for h in ball.sphere(s) {
                if line.contains(&shift.mult(&h.word).unwrap()).unwrap() {
                    acc += 1;
                }
            }
            if s >= 1 {
                counts.push(acc);
            }
        }
        assert_eq!(counts, base, "shift {:?}", shift);
    }
}

#[test]
fn ensembles_do_not_depend_on_thread_count() {
    let ws = Workspace::notmin();
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_ensemble(&ws.measure, 24, 600, 9, true, &WalkOptions::default()))
            .unwrap()
    };
    let (one, four) = (run(1), run(4));
    assert_eq!(format!("{:?}", one.summaries), format!("{:?}", four.summaries));
    assert_eq!(format!("{:?}", one.ends), format!("{:?}", four.ends));
}
