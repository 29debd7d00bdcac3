mod common;

use annsss::chain_complex::GradingTriple;
use annsss::differentials::Differential;
use annsss::invariants::*;
use annsss::{BraidWord, ComputeError, Orientation};
use common::*;
use proptest::prelude::*;

fn s(w: &BraidWord, p: &RationalParams) -> Q {
    s_rt(&marked(w), p).unwrap()
}

fn at(r: (i64, i64), t: (i64, i64)) -> RationalParams {
    RationalParams::from_ints(r, t).unwrap()
}

#[test]
fn parameters_are_validated() {
    assert!(matches!(RationalParams::new(q(-1, 2), q(0, 1)), Err(ComputeError::Parameter(_))));
    assert!(RationalParams::new(q(1, 1), q(3, 2)).is_err());
    assert_eq!(at((1, 2), (1, 3)).grade(&GradingTriple { h: 2, q: 4, k: 3 }), q(5, 2));
}

#[test]
fn identity_closures() {
    for n in 1..=4 {
        let m = marked(&BraidWord::identity(n));
        for p in grid() {
            let expected = -Q::from(n as i64) * (one() - p.r) * (one() - p.t);
            assert_eq!(s_rt(&m, &p).unwrap(), expected);
        }
    }
}

#[test]
fn value_examples() {
    assert_eq!(s(&word("n=2; 1"), &at((0, 1), (1, 2))), Q::from(0));
    assert_eq!(s(&word("n=2; 1 1 1"), &at((0, 1), (0, 1))), Q::from(1));
    assert_eq!(s(&word("n=2; -1"), &at((1, 2), (1, 3))), q(-1, 2));
}

#[test]
fn r_equal_one_is_computable() {
    for w in corpus() {
        let m = marked(&w);
        for t in [0, 1, 2] {
            assert_eq!(s_rt(&m, &at((1, 1), (t, 2))), Some(Q::from(0)), "{w}");
        }
    }
}

#[test]
fn lead_reduction_agrees_with_threshold_bisection() {
    for w in wide_corpus() {
        let m = marked(&w);
        for p in grid().iter().chain(&[at((1, 3), (2, 7)), at((5, 6), (1, 9))]) {
            assert_eq!(s_rt(&m, p), s_rt_bisect(&m, p), "{w} at {p:?}");
        }
    }
}

#[test]
fn profile_examples() {
    let id = s_profile(&marked(&word("n=2;")), Q::from(0), DEFAULT_GRID).unwrap();
    assert_eq!(id.points, vec![(Q::from(0), Q::from(-2)), (Q::from(1), Q::from(0))]);
    assert_eq!(id.slopes, vec![Q::from(2)]);

    let tref = s_profile(&marked(&word("n=2; 1 1 1")), Q::from(0), DEFAULT_GRID).unwrap();
    assert_eq!(tref.points, vec![(Q::from(0), Q::from(1)), (Q::from(1), Q::from(3))]);
    assert_eq!(right_slope(&tref, q(1, 4)).unwrap(), Q::from(2));

    let neg = s_profile(&marked(&word("n=2; -1")), q(1, 2), DEFAULT_GRID).unwrap();
    assert_eq!(neg.slopes, vec![Q::from(0)]);
    assert!(neg.points.iter().all(|p| p.1 == q(-1, 2)));
    assert_eq!(right_slope(&neg, Q::from(0)).unwrap(), Q::from(0));

    let unknot = s_profile(&marked(&word("n=1;")), Q::from(0), 4).unwrap();
    assert_eq!(unknot.points, vec![(Q::from(0), Q::from(-1)), (Q::from(1), Q::from(0))]);
    assert!(matches!(s_profile(&marked(&word("n=1;")), one(), 4), Err(ComputeError::Parameter(_))));
}

#[test]
fn identity_right_slopes() {
    for n in 1..=4 {
        let m = marked(&BraidWord::identity(n));
        for r in [q(0, 1), q(1, 3), q(3, 4)] {
            let p = s_profile(&m, r, 8).unwrap();
            for t0 in [q(0, 1), q(1, 5), q(1, 2), q(9, 10)] {
                assert_eq!(right_slope(&p, t0).unwrap(), Q::from(n as i64) * (one() - r));
            }
            assert!(right_slope(&p, one()).is_err());
            assert!(right_veering_certificate(&p));
        }
    }
}

#[test]
fn right_veering_examples() {
    let tref = s_profile(&marked(&word("n=2; 1 1 1")), Q::from(0), DEFAULT_GRID).unwrap();
    assert!(right_veering_certificate(&tref));
    let neg = s_profile(&marked(&word("n=2; -1")), Q::from(0), DEFAULT_GRID).unwrap();
    assert!(!right_veering_certificate(&neg));
}

#[test]
fn profiles_match_pointwise_values() {
    for w in corpus() {
        let m = marked(&w);
        for r in [q(0, 1), q(2, 5)] {
            let prof = s_profile(&m, r, 16).unwrap();
            assert!(prof.slopes_quantized() && prof.max_slope_persists(), "{w}");
            for j in 0..=20 {
                let t = q(j, 20);
                assert_eq!(prof.value_at(t), s_rt(&m, &RationalParams::new(r, t).unwrap()).unwrap(), "{w} at t = {t}");
            }
        }
    }
}

/// Two generators with zero differential: the cycle `a + b` has value
/// `min(-2t, -2 + 2t)`, with a kink at `t = 1/2`.
fn kinked() -> MarkedComplex {
    let complex = FilteredComplex::new(
        vec![GradingTriple { h: 0, q: 0, k: 2 }, GradingTriple { h: 0, q: -2, k: -2 }],
        Differential::from_columns(vec![Vec::new(), Vec::new()]),
    );
    MarkedComplex { complex, cycle: vec![0, 1], flipped: vec![0, 1], strands: 2, writhe: 0 }
}

#[test]
fn certifier_finds_breakpoints_off_the_grid() {
    for grid in [1, 2, 3, 7, 64] {
        let p = s_profile(&kinked(), Q::from(0), grid).unwrap();
        assert_eq!(p.points, vec![(q(0, 1), q(-2, 1)), (q(1, 2), q(-1, 1)), (q(1, 1), q(-2, 1))], "grid {grid}");
        assert_eq!(p.slopes, vec![Q::from(2), Q::from(-2)]);
        assert!(p.slopes_quantized());
        assert!(!p.max_slope_persists());
        assert!(right_veering_certificate(&p));
    }
}

#[test]
fn certifier_uses_homology_classes() {
    // c kills b, so the class of a + b is the class of a: value -2t throughout.
    let complex = FilteredComplex::new(
        vec![GradingTriple { h: 0, q: 0, k: 2 }, GradingTriple { h: 0, q: -2, k: -2 }, GradingTriple { h: -1, q: -4, k: -2 }],
        Differential::from_columns(vec![Vec::new(), Vec::new(), vec![1]]),
    );
    let m = MarkedComplex { complex, cycle: vec![0, 1], flipped: vec![0, 1], strands: 2, writhe: 0 };
    let p = s_profile(&m, Q::from(0), 5).unwrap();
    assert_eq!(p.points, vec![(q(0, 1), q(0, 1)), (q(1, 1), q(-2, 1))]);
    assert!(!right_veering_certificate(&p));
}

#[test]
fn unquantized_profiles_are_rejected() {
    let mut m = kinked();
    m.strands = 1;
    assert!(matches!(s_profile(&m, Q::from(0), 4), Err(ComputeError::Refinement(_))));
}

#[test]
fn kappa_examples() {
    assert_eq!(kappa(&word("n=3;")).unwrap(), None);
    assert_eq!(kappa(&word("n=2; -1")).unwrap(), Some(2));
    assert_eq!(kappa(&word("n=2; 1 1 1")).unwrap(), None);
}

#[test]
fn report_examples() {
    for n in 1..=4 {
        let r = report(&BraidWord::identity(n), &braid_like(&BraidWord::identity(n)), &at((0, 1), (0, 1)), false, None).unwrap();
        assert_eq!(r.band_rank_lb, Some(Q::from(0)));
    }
    let w = word("n=2; 1 1 1");
    let r = report(&w, &braid_like(&w), &at((0, 1), (0, 1)), true, Some(8)).unwrap();
    assert_eq!((r.s, r.n, r.writhe, r.sl), (Q::from(1), 2, 3, 1));
    assert_eq!(r.band_rank_lb, Some(Q::from(3)));
    assert_eq!(r.kappa, Some(None));
    assert!(r.bennequin_ok);
    assert!(r.profile.is_some());
    let r = report(&w, &braid_like(&w), &at((1, 1), (1, 2)), false, Some(8)).unwrap();
    assert_eq!((r.band_rank_lb, r.profile, r.kappa), (None, None, None));
}

#[test]
fn bennequin_and_lower_bound() {
    for w in wide_corpus() {
        let r = report(&w, &braid_like(&w), &at((1, 3), (1, 2)), false, None).unwrap();
        assert!(r.bennequin_ok, "{w}");
        assert_eq!(r.sl, -(w.strands() as i64) + w.writhe());
        let m = marked(&w);
        for p in grid() {
            let bound = (one() - p.r) * (Q::from(w.writhe()) - (one() - p.t) * Q::from(w.strands() as i64));
            assert!(s_rt(&m, &p).unwrap() >= bound, "{w} at {p:?}");
        }
    }
}

#[test]
fn writhe_at_t_one() {
    for w in wide_corpus() {
        let m = marked(&w);
        for a in 0..=4 {
            let p = at((a, 4), (1, 1));
            assert_eq!(s_rt(&m, &p).unwrap(), (one() - p.r) * Q::from(w.writhe()), "{w}");
        }
    }
}

#[test]
fn quasipositive_formula() {
    for text in ["n=2; 1 1 1", "n=3; 1 2 1 2", "n=2; 1", "n=3; 1 2", "n=4; 1 2 3 1"] {
        let w = word(text);
        let m = marked(&w);
        for p in grid() {
            let expected = (one() - p.r) * (Q::from(w.writhe()) - (one() - p.t) * Q::from(w.strands() as i64));
            assert_eq!(s_rt(&m, &p).unwrap(), expected, "{text} at {p:?}");
        }
    }
}

fn same_on_grid(a: &BraidWord, b: &BraidWord) -> bool {
    let (ma, mb) = (marked(a), marked(b));
    grid().iter().all(|p| s_rt(&ma, p) == s_rt(&mb, p))
}

#[test]
fn invariance_under_conjugation_and_r2() {
    let pairs = [
        ("n=2; 1 1 1", "n=2; 1 1 1 1 -1"),
        ("n=3; 1 2 1 2", "n=3; 2 1 2 1"),
        ("n=3; 1 -2 1 -2", "n=3; -2 1 -2 1"),
        ("n=3; 1 1 -2", "n=3; 2 1 1 -2 -2"),
        ("n=3; 1 2 -1", "n=3; 1 2 2 -2 -1"),
        ("n=3; 1 2 1", "n=3; 2 1 2"),
        ("n=3; -1 -2", "n=3; 2 -1 -2 -2"),
        ("n=4; 1 -2 3", "n=4; 3 1 -2"),
    ];
    for (a, b) in pairs {
        assert!(same_on_grid(&word(a), &word(b)), "{a} vs {b}");
    }
}

#[test]
fn orientation_reversal() {
    for w in wide_corpus() {
        let comps = w.component_of_strand().0;
        let o = braid_like(&w);
        let all: Vec<usize> = (0..comps).collect();
        let rev = Orientation::reversing(comps, &all).unwrap();
        assert_eq!(rev, o.opposite());
        let (a, b) = (braid_complex(&w, &o).unwrap(), braid_complex(&w, &rev).unwrap());
        for p in grid() {
            assert_eq!(s_rt(&a, &p), s_rt(&b, &p), "{w} at {p:?}");
        }
        for mask in 1..1u32 << comps {
            let list: Vec<usize> = (0..comps).filter(|i| mask >> i & 1 == 1).collect();
            let o = Orientation::reversing(comps, &list).unwrap();
            let (x, y) = (braid_complex(&w, &o).unwrap(), braid_complex(&w, &o.opposite()).unwrap());
            for p in grid() {
                assert!(s_rt(&x, &p).is_some());
                assert_eq!(s_rt(&x, &p), s_rt(&y, &p), "{w} reversing {list:?}");
            }
        }
    }
}

#[test]
fn stabilization_sandwich() {
    for w in corpus() {
        let base = marked(&w);
        for positive in [true, false] {
            let st = marked(&w.stabilized(positive));
            for p in grid_r_below_one() {
                let (a, b) = (s_rt(&base, &p).unwrap(), s_rt(&st, &p).unwrap());
                let slack = (one() - p.r) * p.t;
                assert!(a - slack <= b && b <= a + slack, "{w} {positive} at {p:?}");
            }
        }
    }
}

#[test]
fn stabilized_one_braids() {
    let (pos, neg) = (marked(&word("n=2; 1")), marked(&word("n=2; -1")));
    for p in grid() {
        assert_eq!(s_rt(&pos, &p).unwrap(), (one() - p.r) * (Q::from(-1) + Q::from(2) * p.t));
        assert_eq!(s_rt(&neg, &p).unwrap(), -(one() - p.r));
    }
}

#[test]
fn adding_a_crossing_moves_s_by_at_most_a_saddle() {
    for w in corpus().into_iter().filter(|w| w.strands() > 1 && w.len() < 5) {
        let base = marked(&w);
        for g in [1, -1, w.strands() as i32 - 1] {
            let mut letters = w.letters().to_vec();
            letters.push(g);
            let next = marked(&BraidWord::new(w.strands(), letters).unwrap());
            for p in grid() {
                let gap = s_rt(&base, &p).unwrap() - s_rt(&next, &p).unwrap();
                assert!(gap <= one() - p.r && -gap <= one() - p.r, "{w} + {g} at {p:?}");
            }
        }
    }
}

#[test]
fn tensor_examples() {
    let u = marked(&word("n=1;"));
    let uu = tensor_union(&u, &u);
    let t = marked(&word("n=2; 1 1 1"));
    for p in grid() {
        assert_eq!(s_rt(&uu, &p).unwrap(), Q::from(-2) * (one() - p.r) * (one() - p.t));
        assert_eq!(s_rt(&tensor_union(&t, &MarkedComplex::unit()), &p), s_rt(&t, &p));
        assert_eq!(s_rt(&tensor_union(&MarkedComplex::unit(), &t), &p), s_rt(&t, &p));
    }
    assert_eq!(s_rt(&tensor_union(&t, &u), &at((0, 1), (0, 1))), Some(Q::from(0)));
}

#[test]
fn tensor_matches_juxtaposed_diagram() {
    let pairs = [("n=2; 1 1 1", "n=1;"), ("n=2; -1", "n=2; 1"), ("n=2; 1 1", "n=3; 1 -2"), ("n=1;", "n=2; 1 1 1")];
    for (a, b) in pairs {
        let (wa, wb) = (word(a), word(b));
        let t = tensor_union(&marked(&wa), &marked(&wb));
        let j = marked(&wa.juxtapose(&wb));
        assert_eq!(t.complex.homology_dim(), j.complex.homology_dim());
        for p in grid() {
            let sum = s_rt(&marked(&wa), &p).unwrap() + s_rt(&marked(&wb), &p).unwrap();
            assert_eq!(s_rt(&t, &p).unwrap(), sum, "{a} + {b}");
            assert_eq!(s_rt(&j, &p).unwrap(), sum, "{a} + {b} juxtaposed");
        }
    }
}

#[test]
fn size_cap() {
    let long = BraidWord::new(2, vec![1; DEFAULT_MAX_CROSSINGS + 1]).unwrap();
    assert!(matches!(braid_complex(&long, &braid_like(&long)), Err(ComputeError::SizeCap { .. })));
    assert!(matches!(kappa(&long), Err(ComputeError::SizeCap { .. })));
}

fn arb_braid() -> impl Strategy<Value = BraidWord> {
    (2usize..=4, proptest::collection::vec((1i32..4, any::<bool>()), 0..=5)).prop_map(|(n, raw)| {
        let letters = raw.into_iter().map(|(g, s)| {
            let g = (g - 1) % (n as i32 - 1) + 1;
            if s { g } else { -g }
        });
        BraidWord::new(n, letters.collect()).unwrap()
    })
}

fn arb_params() -> impl Strategy<Value = RationalParams> {
    (0i64..=6, 1i64..=6, 0i64..=6, 1i64..=6)
        .prop_map(|(a, b, c, d)| RationalParams::new(Q::new(a.min(b), b), Q::new(c.min(d), d)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn conjugation_invariance(w in arb_braid(), p in arb_params()) {
        let m = marked(&w);
        prop_assert_eq!(s_rt(&m, &p), s_rt(&marked(&w.rotated()), &p));
    }

    #[test]
    fn bisection_agrees(w in arb_braid(), p in arb_params()) {
        let m = marked(&w);
        prop_assert_eq!(s_rt(&m, &p), s_rt_bisect(&m, &p));
    }

    #[test]
    fn profiles_are_quantized(w in arb_braid(), r in 0i64..5) {
        let prof = s_profile(&marked(&w), Q::new(r, 5), 8).unwrap();
        prop_assert!(prof.slopes_quantized());
        prop_assert!(prof.max_slope_persists());
        prop_assert_eq!(prof.points.first().unwrap().0, Q::from(0));
        prop_assert_eq!(prof.points.last().unwrap().0, Q::from(1));
    }
}
