//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
//!
//! Run with `cargo test --test acceptance`.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use local_unitary::linalg::{standard_j, FormSpace, Matrix, Vector};
use local_unitary::oracle::{
    basis_vector_orbits, check_hermitian_skew_split, check_skew_solution_sets, count_congruence_kernel,
    enumerate_unitary_group, enumerate_unitary_group_naive, enumerate_vectors_by_length, length_class,
    orbit_of, reduction_image_and_kernel, stabilizer_count, unitary_order_oracle, EnumerationBudget, IndexedSpace,
};
use local_unitary::orders::{self, principal_structure};
use local_unitary::ring::{make_ring, Element, Radicand, Ring, RingSpec, Subset};
use local_unitary::sample::{random_invertible, random_unitary};
use local_unitary::symplectic::{correct_basis_mod_ideal, lift_unitary_via, symplectic_basis};

type Outcome = Result<String, String>;
type Criterion = fn(&[SuiteRing]) -> Outcome;

/// Ring index, `m`, expected order, time limit in seconds, naive filter required,
/// expected principal branch.
type OrderRow = (usize, u32, u64, u64, bool, Option<&'static str>);

struct SuiteRing {
    name: &'static str,
    ring: Ring,
}

fn suite() -> Vec<SuiteRing> {
    let mk = |name, spec| SuiteRing {
        name,
        ring: make_ring(spec).unwrap_or_else(|e| panic!("{name}: {e}")),
    };
    vec![
        mk("F3[t]/(t^2)", RingSpec::quadratic(3, 1, 1, 1, Radicand::Zero)),
        mk("Z/9, *=id", RingSpec::trivial(3, 2, 1)),
        mk("Z/9[t]/(t^2-3)", RingSpec::quadratic(3, 2, 1, 1, Radicand::PowerOfP(1))),
        mk(
            "Z/9[t]/(t^2-3, t^3)",
            RingSpec::quadratic(3, 2, 1, 1, Radicand::PowerOfP(1)).truncated(),
        ),
        mk("F9[t;sigma]/(t^2)", RingSpec::quadratic(3, 1, 2, 2, Radicand::Zero)),
        mk("Z/9[t]/(t^2)", RingSpec::quadratic(3, 2, 1, 1, Radicand::Zero)),
    ]
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn budget() -> EnumerationBudget {
    EnumerationBudget::default()
}

fn criterion_1(rings: &[SuiteRing]) -> Outcome {
    let rows: [OrderRow; 7] = [
        (0, 1, 72, 1, true, Some("even")),
        (1, 1, 648, 1, true, Some("a")),
        (2, 1, 5832, 60, false, Some("even")),
        (3, 1, 1944, 5, false, Some("odd")),
        (4, 1, 58320, 60, false, None),
        (5, 1, 5832, 60, false, None),
        (0, 2, 37_791_360, 120, false, Some("even")),
    ];
    for (i, m, want, limit, naive, branch) in rows {
        let SuiteRing { name, ring } = &rings[i];
        let start = Instant::now();
        let stats = ring.stats();
        let want = big(want);
        let radical = orders::unitary_order_radical_form(&stats, m);
        let skew = orders::unitary_order_skew_form(&stats, m);
        let oracle = unitary_order_oracle(ring, m as usize, &budget()).map_err(|e| format!("{name}: {e}"))?;
        ensure(radical == want && skew == want && oracle == want, || {
            format!("{name} m={m}: radical {radical}, skew {skew}, oracle {oracle}, want {want}")
        })?;
        if m == 1 {
            let pairs = enumerate_unitary_group(&FormSpace::standard(ring, 1), &budget())
                .map_err(|e| format!("{name}: {e}"))?;
            ensure(big(pairs.len() as u64) == want, || format!("{name}: pair group has {}", pairs.len()))?;
            if naive {
                let filtered = enumerate_unitary_group_naive(&FormSpace::standard(ring, 1), &budget())
                    .map_err(|e| format!("{name}: {e}"))?;
                ensure(filtered.sorted() == pairs.sorted(), || {
                    format!("{name}: naive filter and pair enumeration differ")
                })?;
            }
        } else {
            let pair_count = local_unitary::oracle::count_symplectic_pairs(&FormSpace::standard(ring, 2), &budget())
                .map_err(|e| format!("{name}: {e}"))?;
            ensure(pair_count == 524_880, || format!("{name} m=2: pair count {pair_count}"))?;
        }
        let report = principal_structure(ring).map_err(|e| format!("{name}: {e}"))?;
        match branch {
            Some(label) => {
                ensure(report.branch_applies, || format!("{name}: principal branch should apply"))?;
                let got = orders::principal_branch(report.e, !report.star_nontrivial);
                ensure(got == label, || format!("{name}: branch {got}, want {label}"))?;
                let p = orders::principal_case_order(&big(report.q), report.e, m, !report.star_nontrivial)
                    .map_err(|e| format!("{name}: {e}"))?;
                ensure(p == want, || format!("{name}: principal case gives {p}"))?;
            }
            None => ensure(!report.branch_applies, || format!("{name}: principal branch should not apply"))?,
        }
        if i == 5 {
            let f = report.failure.clone().unwrap_or_default();
            ensure(f.starts_with("A7"), || format!("{name}: failure reported as `{f}`"))?;
        }
        let took = start.elapsed();
        ensure(took <= Duration::from_secs(limit), || {
            format!("{name} m={m}: {:.1}s exceeds {limit}s", took.as_secs_f64())
        })?;
    }
    Ok("7 suite rows agree across formulas, pair oracle and naive filter".into())
}

fn criterion_2(rings: &[SuiteRing]) -> Outcome {
    let mut checked = 0;
    let cases = rings.iter().map(|r| (r, 1u32)).chain([(&rings[0], 2u32)]);
    for (SuiteRing { name, ring }, m) in cases {
        let space = FormSpace::standard(ring, m as usize);
        let order = unitary_order_oracle(ring, m as usize, &budget()).map_err(|e| format!("{name}: {e}"))?;
        let group = if m == 1 {
            Some(enumerate_unitary_group(&space, &budget()).map_err(|e| format!("{name}: {e}"))?)
        } else {
            None
        };
        for j in 1..ring.nilpotency() {
            let red = ring.quotient_ring(j).map_err(|e| e.to_string())?;
            let quotient = unitary_order_oracle(red.target(), m as usize, &budget()).map_err(|e| e.to_string())?;
            let kernel = big(count_congruence_kernel(&space, j, &budget()).map_err(|e| e.to_string())?);
            let formula = orders::kernel_order(ring, j, m).map_err(|e| e.to_string())?;
            ensure(kernel == formula, || format!("{name} m={m} j={j}: kernel {kernel}, formula {formula}"))?;
            let image = match &group {
                Some(g) => {
                    let c = reduction_image_and_kernel(&space, g, &red).map_err(|e| e.to_string())?;
                    ensure(big(c.kernel) == kernel, || format!("{name} j={j}: group scan kernel {}", c.kernel))?;
                    big(c.image)
                }
                None => &order / &kernel,
            };
            ensure(image == quotient, || format!("{name} m={m} j={j}: image {image}, quotient order {quotient}"))?;
            ensure(&kernel * &quotient == order, || {
                format!("{name} m={m} j={j}: {kernel}·{quotient} != {order}")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (ring, m, j) levels: image, kernel and chain product exact"))
}

fn criterion_3(rings: &[SuiteRing]) -> Outcome {
    let dual = &rings[0].ring;
    let red = dual.quotient_ring(1).map_err(|e| e.to_string())?;
    let space = FormSpace::standard(dual, 1);
    let sp2 = enumerate_unitary_group(&FormSpace::standard(red.target(), 1), &budget()).map_err(|e| e.to_string())?;
    ensure(sp2.len() == 24, || format!("Sp2(3) enumerated with {} elements", sp2.len()))?;
    for i in 0..sp2.len() {
        let xbar = sp2.to_matrix(red.target(), i);
        let x = lift_unitary_via(&space, &xbar, &red).map_err(|e| format!("Sp2(3) element {i}: {e}"))?;
        ensure(space.is_unitary(&x).unwrap() && x.reduce(&red) == xbar, || {
            format!("Sp2(3) element {i}: lift fails its checks")
        })?;
    }
    let mut lifts = 0;
    let cases = rings.iter().map(|r| (r, 1usize)).chain([(&rings[0], 2usize)]);
    for (k, (SuiteRing { name, ring }, m)) in cases.enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(300 + k as u64);
        let space = FormSpace::standard(ring, m);
        for j in 1..ring.nilpotency() {
            let red = ring.quotient_ring(j).map_err(|e| e.to_string())?;
            let down = FormSpace::standard(red.target(), m);
            for trial in 0..500 {
                let xbar = random_unitary(&down, &mut rng).map_err(|e| format!("{name}: {e}"))?;
                let x = lift_unitary_via(&space, &xbar, &red)
                    .map_err(|e| format!("{name} m={m} j={j} trial {trial}: {e}"))?;
                ensure(space.is_unitary(&x).unwrap() && x.reduce(&red) == xbar, || {
                    format!("{name} m={m} j={j} trial {trial}: lift fails its checks")
                })?;
                lifts += 1;
            }
        }
    }
    Ok(format!("all 24 elements of Sp2(3) and {lifts} random unitaries lift exactly"))
}

fn perturb(ring: &Ring, x: &Matrix, j: u32, rng: &mut ChaCha8Rng) -> Matrix {
    let mut y = x.clone();
    for r in 0..x.rows() {
        for c in 0..x.cols() {
            let e = ring.random_in_radical_power(j, rng);
            y.set(r, c, ring.add(x.get(r, c), &e));
        }
    }
    y
}

fn criterion_4(rings: &[SuiteRing]) -> Outcome {
    let mut total = 0;
    for (k, SuiteRing { name, ring }) in rings.iter().enumerate() {
        for m in 1..=2usize {
            let mut rng = ChaCha8Rng::seed_from_u64(400 + 10 * k as u64 + m as u64);
            let j_std = standard_j(ring, m);
            for trial in 0..500 {
                let y = random_invertible(ring, 2 * m, &mut rng);
                let gram = y.star_transpose().mul(&j_std).unwrap().mul(&y).unwrap();
                let space = FormSpace::new(gram).map_err(|e| format!("{name}: {e}"))?;
                let basis = symplectic_basis(&space).map_err(|e| format!("{name} m={m} trial {trial}: {e}"))?;
                let p = basis.matrix();
                let pulled = p.star_transpose().mul(space.gram()).unwrap().mul(&p).unwrap();
                ensure(pulled == j_std, || format!("{name} m={m} trial {trial}: Gram is not standard"))?;

                let e = ring.nilpotency();
                if e > 1 {
                    let level = 1 + (trial as u32 % (e - 1));
                    let approx = perturb(ring, &p, level, &mut rng);
                    let fixed = correct_basis_mod_ideal(&space, &approx.columns(), level)
                        .map_err(|err| format!("{name} m={m} trial {trial} j={level}: {err}"))?;
                    let q = fixed.matrix();
                    let exact = q.star_transpose().mul(space.gram()).unwrap().mul(&q).unwrap() == j_std;
                    let congruent = q.sub(&approx).unwrap().in_radical_power(level);
                    ensure(exact && congruent, || {
                        format!("{name} m={m} trial {trial} j={level}: exact={exact} congruent={congruent}")
                    })?;
                }
                total += 1;
            }
        }
    }
    Ok(format!("{total} random congruent Gram matrices: exact bases and corrections"))
}

fn criterion_5(rings: &[SuiteRing]) -> Outcome {
    let wide = EnumerationBudget {
        max_vectors: 1_000_000,
        ..budget()
    };
    let mut checked = 0;
    for SuiteRing { name, ring } in rings {
        let stats = ring.stats();
        let skew: Vec<Element> = ring.enumerate_subset(Subset::Skew).map_err(|e| e.to_string())?;
        let rank1 = orders::basis_vector_count_rank1(&stats);
        ensure(rank1 == orders::basis_vector_count(&stats, 1), || {
            format!("{name}: rank-1 identity fails numerically")
        })?;
        for m in 1..=2u32 {
            let buckets = match enumerate_vectors_by_length(&FormSpace::standard(ring, m as usize), &wide) {
                Ok(b) => b,
                Err(_) if m == 2 => continue,
                Err(e) => return Err(format!("{name}: {e}")),
            };
            let want = orders::basis_vector_count(&stats, m);
            for s in &skew {
                let got = big(buckets.get(s).map_or(0, |b| b.basis));
                ensure(got == want, || format!("{name} m={m}: bucket {s:?} has {got}, want {want}"))?;
            }
            ensure(buckets.keys().all(|s| ring.is_skew(s)), || format!("{name}: a length is not skew"))?;
            if m == 2 {
                let rec = orders::basis_vector_recursion(&stats, 2);
                ensure(rec == want, || format!("{name}: recursion gives {rec}, buckets {want}"))?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} (ring, m) bucket profiles flat and equal to the formula"))
}

fn criterion_6(rings: &[SuiteRing]) -> Outcome {
    for SuiteRing { name, ring } in rings {
        let space = FormSpace::standard(ring, 1);
        let group = enumerate_unitary_group(&space, &budget()).map_err(|e| format!("{name}: {e}"))?;
        let stats = ring.stats();
        let expected = &stats.card_a / &stats.card_s;
        let orbits = basis_vector_orbits(&space, &group, &budget()).map_err(|e| e.to_string())?;
        let skew = ring.enumerate_subset(Subset::Skew).map_err(|e| e.to_string())?;
        ensure(orbits.len() == skew.len(), || format!("{name}: {} orbits for {} lengths", orbits.len(), skew.len()))?;
        let idx = IndexedSpace::new(&space).map_err(|e| e.to_string())?;
        for orbit in &orbits {
            let v: Vector = idx.decode_vector(orbit[0]);
            let class = length_class(&space, &space.length(&v), &budget()).map_err(|e| e.to_string())?;
            ensure(&class == orbit, || format!("{name}: an orbit is not its length bucket"))?;
            let stab = stabilizer_count(&space, &group, &v).map_err(|e| e.to_string())?;
            ensure(big(stab) == expected, || format!("{name}: stabilizer {stab}, want {expected}"))?;
            let o = orbit_of(&space, &group, &v).map_err(|e| e.to_string())?;
            ensure(o.len() as u64 * stab == group.len() as u64, || format!("{name}: orbit·stabilizer != |G|"))?;
        }
    }
    Ok("orbits equal length buckets and stabilizers equal |A|/|S| on all 6 rings".into())
}

fn criterion_7(rings: &[SuiteRing]) -> Outcome {
    let holds = principal_structure(&rings[2].ring).map_err(|e| e.to_string())?;
    ensure(
        holds.principal_radical && holds.hermitian_commute && holds.trivial_intersection == Some(true) && holds.branch_applies,
        || format!("Z/9[t]/(t^2-3): hypotheses should hold, got {:?}", holds.failure),
    )?;
    let non_principal = principal_structure(&rings[5].ring).map_err(|e| e.to_string())?;
    ensure(!non_principal.principal_radical, || "Z/9[t]/(t^2): radical should not be principal".into())?;
    let note = make_ring(RingSpec::quadratic(3, 2, 2, 2, Radicand::PowerOfP(1))).map_err(|e| e.to_string())?;
    let r = principal_structure(&note).map_err(|e| e.to_string())?;
    ensure(r.trivial_intersection == Some(false) && !r.hermitian_closed && !r.branch_applies, || {
        format!(
            "GR(3,2,2)[t;σ]/(t^2-3): intersection {:?}, closed {}",
            r.trivial_intersection, r.hermitian_closed
        )
    })?;
    let mut profiles = 0;
    for SuiteRing { name, ring } in rings {
        let report = principal_structure(ring).map_err(|e| e.to_string())?;
        if let Some(p) = &report.parity {
            let stats = ring.enumerated_stats().map_err(|e| e.to_string())?;
            let card_r = stats.card_r.clone();
            let want_a = if !report.star_nontrivial {
                card_r.clone()
            } else if report.e % 2 == 0 {
                &card_r * &card_r
            } else {
                &card_r * &card_r / &stats.q
            };
            ensure(
                p.holds
                    && big(p.card_rad) == stats.card_rad
                    && big(p.card_m) == stats.card_m
                    && stats.card_a == want_a,
                || format!("{name}: parity profile {p:?}"),
            )?;
            profiles += 1;
        }
    }
    Ok(format!("hypotheses reported as expected; {profiles} parity profiles match enumeration"))
}

/// Independent exhaustive axiom check: `*` is an additive, product-reversing
/// involution with `a − a* ∈ 𝔯`, 2 is a unit, and the non-units are closed under addition.
fn axioms_hold(ring: &Ring) -> bool {
    let elems: Vec<Element> = ring.elements().unwrap().collect();
    let two = ring.from_int(2);
    if !ring.is_unit(&two) {
        return false;
    }
    for a in &elems {
        let sa = ring.star(a);
        if ring.star(&sa) != *a || ring.is_unit(&ring.sub(a, &sa)) {
            return false;
        }
        for b in &elems {
            let sb = ring.star(b);
            if ring.star(&ring.mul(a, b)) != ring.mul(&sb, &sa) || ring.star(&ring.add(a, b)) != ring.add(&sa, &sb) {
                return false;
            }
            if !ring.is_unit(a) && !ring.is_unit(b) && ring.is_unit(&ring.add(a, b)) {
                return false;
            }
        }
    }
    true
}

fn criterion_8(rings: &[SuiteRing]) -> Outcome {
    for SuiteRing { name, ring } in rings {
        ensure(axioms_hold(ring), || format!("{name}: exhaustive axiom check fails"))?;
        ensure(check_hermitian_skew_split(ring).map_err(|e| e.to_string())?, || {
            format!("{name}: R × S → A is not a bijection")
        })?;
        if ring.cardinality().is_some_and(|n| n <= 81) {
            ensure(check_skew_solution_sets(ring).map_err(|e| e.to_string())?, || {
                format!("{name}: y − y* = s solution sets differ from s/2 + R")
            })?;
        }
    }
    Ok("axioms, R ⊕ S decomposition and skew solution sets verified on all 6 rings".into())
}

fn main() {
    let rings = suite();
    let criteria: [(&str, Criterion); 8] = [
        ("order formulas vs exhaustive oracle", criterion_1),
        ("reduction maps", criterion_2),
        ("constructive surjectivity", criterion_3),
        ("symplectic bases", criterion_4),
        ("basis-vector counts", criterion_5),
        ("transitivity and stabilizers", criterion_6),
        ("principal-radical structure", criterion_7),
        ("ring axioms", criterion_8),
    ];
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(|| check(&rings))
            .unwrap_or_else(|p| Err(format!("panicked: {:?}", p.downcast_ref::<String>())));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {title}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {title}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
