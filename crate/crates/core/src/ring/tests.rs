use super::*;
use proptest::prelude::*;

fn f3_dual() -> Ring {
    make_ring(RingSpec::quadratic(3, 1, 1, 1, Radicand::Zero)).unwrap()
}

fn z9_trivial() -> Ring {
    make_ring(RingSpec::trivial(3, 2, 1)).unwrap()
}

fn f9_twisted() -> Ring {
    make_ring(RingSpec::quadratic(3, 1, 2, 2, Radicand::Zero)).unwrap()
}

fn z9_ramified() -> Ring {
    make_ring(RingSpec::quadratic(3, 2, 1, 1, Radicand::PowerOfP(1))).unwrap()
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn stats_of(card_a: u64, rad: u64, e: u32, q: u64, r: u64, s: u64, m: u64) -> RingStats {
    RingStats {
        card_a: big(card_a),
        card_rad: big(rad),
        e,
        q: big(q),
        card_r: big(r),
        card_s: big(s),
        card_m: big(m),
    }
}

#[test]
fn desk_ring_stats() {
    assert_eq!(f3_dual().stats(), stats_of(9, 3, 2, 3, 3, 3, 1));
    assert_eq!(z9_trivial().stats(), stats_of(9, 3, 2, 3, 9, 1, 3));
    assert_eq!(f9_twisted().stats(), stats_of(81, 9, 2, 9, 27, 3, 3));
    for ring in [f3_dual(), z9_trivial(), f9_twisted(), z9_ramified()] {
        assert_eq!(ring.enumerated_stats().unwrap(), ring.stats(), "{ring:?}");
    }
}

/// Independent model of F₉[t;σ]/(t²): F₉ = F₃[i], i² = −1, σ = conjugation.
#[test]
fn twisted_product_matches_hand_model() {
    let ring = f9_twisted();
    assert_eq!(ring.base().defining_poly(), &[1, 0, 1]);
    type F9 = (i64, i64);
    let fm = |a: F9, b: F9| ((a.0 * b.0 - a.1 * b.1).rem_euclid(3), (a.0 * b.1 + a.1 * b.0).rem_euclid(3));
    let fa = |a: F9, b: F9| ((a.0 + b.0) % 3, (a.1 + b.1) % 3);
    let conj = |a: F9| (a.0, (3 - a.1) % 3);
    let of = |e: &Element| ((e.c0()[0] as i64, e.c0()[1] as i64), (e.c1()[0] as i64, e.c1()[1] as i64));
    let elems: Vec<Element> = ring.elements().unwrap().collect();
    for a in &elems {
        for b in &elems {
            let ((a0, a1), (b0, b1)) = (of(a), of(b));
            let want = (fm(a0, b0), fa(fm(a0, b1), fm(a1, conj(b0))));
            let got = of(&ring.mul(a, b));
            assert_eq!((got.0, got.1), want, "{a:?} * {b:?}");
        }
        let (a0, a1) = of(a);
        let neg_conj = {
            let c = conj(a1);
            ((3 - c.0) % 3, (3 - c.1) % 3)
        };
        assert_eq!(of(&ring.star(a)), (a0, neg_conj));
    }
}

#[test]
fn twisted_commutation_and_radicand() {
    let ring = f9_twisted();
    let t = ring.t().unwrap();
    for c in ring.elements().unwrap().filter(|c| *c.c1() == ZERO_COEFFS) {
        let c3 = ring.mul(&ring.mul(&c, &c), &c);
        assert_eq!(ring.mul(&t, &c), ring.mul(&c3, &t));
    }
    let x = ring.base_generator();
    assert_ne!(ring.mul(&t, &x), ring.mul(&x, &t));
    assert!(!ring.is_commutative());

    let r = z9_ramified();
    let t = r.t().unwrap();
    assert_eq!(r.mul(&t, &t), r.from_int(3));
    assert_eq!(r.star(&t), r.neg(&t));
}

#[test]
fn dual_numbers_arithmetic() {
    let ring = f3_dual();
    let t = ring.t().unwrap();
    let a = ring.add(&ring.one(), &t);
    let b = ring.element(&[2], &[2]).unwrap();
    assert_eq!(ring.add(&a, &b), ring.zero());
    assert_eq!(ring.inv(&a).unwrap(), ring.sub(&ring.one(), &t));
    assert_eq!(ring.inv(&ring.one()).unwrap(), ring.one());
    assert_eq!(ring.inv(&t), Err(RingError::NotAUnit));
}

#[test]
fn sigma_on_base_requires_twist() {
    let ring = f9_twisted();
    let x = ring.base_generator();
    assert_eq!(ring.sigma_on_base(&x).unwrap(), ring.neg(&x));
    assert!(matches!(
        f3_dual().sigma_on_base(&f3_dual().one()),
        Err(RingError::NotAvailable(_))
    ));
}

#[test]
fn mismatched_rings_are_rejected() {
    let a = f3_dual();
    let b = z9_trivial();
    assert_eq!(a.checked_add(&a.one(), &b.one()), Err(RingError::RingMismatch));
    assert_eq!(a.checked_mul(&a.one(), &a.one()), Ok(a.one()));
}

#[test]
fn subset_sizes() {
    let s = f3_dual().enumerate_subset(Subset::Skew).unwrap();
    assert_eq!(s.len(), 3);
    let t = f3_dual().t().unwrap();
    assert!(s.contains(&t));
    assert_eq!(z9_trivial().enumerate_subset(Subset::Skew).unwrap().len(), 1);
    let r = z9_ramified();
    let sq = r.enumerate_subset(Subset::RadicalPower(2)).unwrap();
    assert_eq!(sq.len(), 9);
    assert!(sq.iter().all(|a| a.c1()[0] % 3 == 0 && a.c0()[0] % 3 == 0));
    assert_eq!(f9_twisted().enumerate_subset(Subset::HermitianRadical).unwrap().len(), 3);
}

#[test]
fn radical_closure_agrees_with_structure() {
    let specs = [
        RingSpec::quadratic(3, 1, 1, 1, Radicand::Zero),
        RingSpec::quadratic(3, 2, 1, 1, Radicand::Zero),
        RingSpec::quadratic(3, 2, 1, 1, Radicand::PowerOfP(1)),
        RingSpec::quadratic(3, 2, 1, 1, Radicand::PowerOfP(2)),
        RingSpec::quadratic(3, 3, 1, 1, Radicand::PowerOfP(1)),
        RingSpec::quadratic(3, 3, 1, 1, Radicand::PowerOfP(2)),
        RingSpec::quadratic(3, 3, 1, 1, Radicand::PowerOfP(1)).truncated(),
        RingSpec::quadratic(3, 2, 1, 1, Radicand::PowerOfP(1)).truncated(),
        RingSpec::quadratic(3, 1, 2, 2, Radicand::Zero),
        RingSpec::quadratic(3, 2, 2, 2, Radicand::PowerOfP(1)),
        RingSpec::quadratic(5, 2, 1, 1, Radicand::PowerOfP(1)),
        RingSpec::quadratic(5, 1, 2, 2, Radicand::PowerOfP(1)),
        RingSpec::trivial(3, 3, 1),
        RingSpec::trivial(3, 1, 2),
        RingSpec::trivial(7, 2, 1),
    ];
    for spec in specs {
        let ring = make_ring(spec).unwrap();
        let table = ring.radical_table().unwrap();
        assert_eq!(table.nilpotency(), ring.nilpotency(), "{spec:?}");
        for a in ring.elements().unwrap() {
            assert_eq!(
                table.depth(ring.index_of(&a)),
                ring.radical_depth_structural(&a),
                "{spec:?} {a:?}"
            );
        }
        for j in 0..=ring.nilpotency() {
            assert_eq!(ring.ideal_stats(j), ring.ideal_stats_structural(j), "{spec:?} j={j}");
        }
    }
}

#[test]
fn truncated_ring_shape() {
    let ring = make_ring(RingSpec::quadratic(3, 2, 1, 1, Radicand::PowerOfP(1)).truncated()).unwrap();
    assert_eq!(ring.cardinality(), Some(27));
    assert_eq!(ring.nilpotency(), 3);
    let t = ring.t().unwrap();
    let t2 = ring.mul(&t, &t);
    assert_eq!(t2, ring.from_int(3));
    assert!(ring.is_zero(&ring.mul(&t2, &t)));
}

#[test]
fn quotient_examples() {
    let red = z9_ramified().quotient_ring(2).unwrap();
    let q = red.target();
    assert_eq!(q.stats(), f3_dual().stats());
    assert_eq!(q.spec(), Some(&RingSpec::quadratic(3, 1, 1, 1, Radicand::Zero)));
    let src = red.source();
    let elems: Vec<Element> = src.elements().unwrap().collect();
    for a in &elems {
        let ra = red.apply(a);
        assert_eq!(red.apply(&src.star(a)), q.star(&ra));
        assert_eq!(red.apply(&red.lift(&ra)), ra);
        for b in elems.iter().step_by(7) {
            assert_eq!(red.apply(&src.mul(a, b)), q.mul(&ra, &red.apply(b)));
            assert_eq!(red.apply(&src.add(a, b)), q.add(&ra, &red.apply(b)));
        }
    }

    for ring in [f3_dual(), z9_trivial(), f9_twisted(), z9_ramified()] {
        let field = ring.residue_field();
        assert_eq!(field.nilpotency(), 1);
        assert_eq!(field.stats().card_a, ring.stats().q);
        for a in field.elements().unwrap() {
            assert_eq!(field.star(&a), a);
        }
    }
    assert!(matches!(
        z9_ramified().quotient_ring(4),
        Err(RingError::NotProper { j: 4, e: 4 })
    ));
}

#[test]
fn truncated_quotients_cover_every_level() {
    let ring = make_ring(RingSpec::quadratic(3, 3, 1, 1, Radicand::PowerOfP(2))).unwrap();
    for j in 1..ring.nilpotency() {
        let red = ring.quotient_ring(j).unwrap();
        let target = red.target();
        let kernel = ring.ideal_stats(j).card;
        assert_eq!(&target.stats().card_a * kernel, ring.stats().card_a, "j={j}");
        for a in ring.elements().unwrap().step_by(11) {
            for b in ring.elements().unwrap().step_by(13) {
                assert_eq!(
                    red.apply(&ring.mul(&a, &b)),
                    target.mul(&red.apply(&a), &red.apply(&b))
                );
            }
        }
    }
}

#[test]
fn index_roundtrip() {
    let ring = make_ring(RingSpec::quadratic(3, 2, 1, 1, Radicand::PowerOfP(1)).truncated()).unwrap();
    for (i, a) in ring.elements().unwrap().enumerate() {
        assert_eq!(ring.index_of(&a), i as u64);
    }
}

#[test]
fn tables_match_arithmetic() {
    let ring = f9_twisted();
    let tab = ring.tables().unwrap();
    assert_eq!(tab.len(), 81);
    assert_eq!(ring.element_at(tab.one() as u64), ring.one());
    for i in 0..81u32 {
        let a = ring.element_at(i as u64);
        for j in (0..81u32).step_by(5) {
            let b = ring.element_at(j as u64);
            assert_eq!(ring.element_at(tab.mul(i, j) as u64), ring.mul(&a, &b));
            assert_eq!(ring.element_at(tab.add(i, j) as u64), ring.add(&a, &b));
        }
        assert_eq!(ring.element_at(tab.star(i) as u64), ring.star(&a));
        assert_eq!(tab.is_unit(i), ring.is_unit(&a));
    }
}

#[test]
fn budget_limits_enumeration() {
    let ring = make_ring_with_budget(RingSpec::quadratic(3, 2, 2, 2, Radicand::PowerOfP(1)), 100).unwrap();
    assert!(ring.radical_table().is_none());
    assert!(matches!(ring.elements().err(), Some(RingError::BudgetExceeded(_))));
    assert_eq!(ring.ideal_stats(2).card, big(81));
}

fn desk_specs() -> impl Strategy<Value = RingSpec> {
    prop_oneof![
        Just(RingSpec::quadratic(3, 1, 1, 1, Radicand::Zero)),
        Just(RingSpec::quadratic(3, 2, 1, 1, Radicand::PowerOfP(1))),
        Just(RingSpec::quadratic(3, 2, 1, 1, Radicand::PowerOfP(1)).truncated()),
        Just(RingSpec::quadratic(3, 1, 2, 2, Radicand::Zero)),
        Just(RingSpec::quadratic(3, 2, 2, 2, Radicand::PowerOfP(1))),
        Just(RingSpec::quadratic(5, 2, 2, 2, Radicand::PowerOfP(2))),
        Just(RingSpec::trivial(3, 2, 1)),
        Just(RingSpec::quadratic(7, 3, 1, 1, Radicand::PowerOfP(1))),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms_on_random_triples(spec in desk_specs(), seeds in proptest::array::uniform3(any::<u64>())) {
        let ring = make_ring_with_budget(spec, 0).unwrap();
        let n = ring.stats().card_a.to_u64().unwrap();
        let [a, b, c] = seeds.map(|s| ring.element_at(s % n));
        prop_assert_eq!(ring.mul(&ring.mul(&a, &b), &c), ring.mul(&a, &ring.mul(&b, &c)));
        prop_assert_eq!(ring.mul(&a, &ring.add(&b, &c)), ring.add(&ring.mul(&a, &b), &ring.mul(&a, &c)));
        prop_assert_eq!(ring.mul(&ring.add(&a, &b), &c), ring.add(&ring.mul(&a, &c), &ring.mul(&b, &c)));
        prop_assert_eq!(ring.star(&ring.mul(&a, &b)), ring.mul(&ring.star(&b), &ring.star(&a)));
        prop_assert_eq!(ring.star(&ring.star(&a)), a);
        prop_assert!(ring.in_radical(&ring.sub(&a, &ring.star(&a))));
        prop_assert_eq!(ring.is_unit(&a), !ring.in_radical(&a));
        if ring.is_unit(&a) {
            let y = ring.inv(&a).unwrap();
            prop_assert_eq!(ring.mul(&a, &y), ring.one());
            prop_assert_eq!(ring.mul(&y, &a), ring.one());
        }
        let e = ring.nilpotency();
        let da = ring.radical_depth(&a);
        let db = ring.radical_depth(&b);
        prop_assert!(ring.in_radical_power(&ring.mul(&a, &b), (da + db).min(e)));
        prop_assert!(ring.stats().is_consistent());
    }
}
