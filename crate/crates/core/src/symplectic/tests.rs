use super::*;
use crate::linalg::{standard_gram, Matrix};
use crate::ring::{make_ring, Radicand, Ring, RingSpec};
use crate::sample::{random_basis_vector, random_invertible, random_matrix, random_unitary};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn f3_dual() -> Ring {
    make_ring(RingSpec::quadratic(3, 1, 1, 1, Radicand::Zero)).unwrap()
}

fn desk_rings() -> Vec<Ring> {
    vec![
        f3_dual(),
        make_ring(RingSpec::trivial(3, 2, 1)).unwrap(),
        make_ring(RingSpec::quadratic(3, 2, 1, 1, Radicand::PowerOfP(1))).unwrap(),
        make_ring(RingSpec::quadratic(3, 2, 1, 1, Radicand::PowerOfP(1)).truncated()).unwrap(),
        make_ring(RingSpec::quadratic(3, 1, 2, 2, Radicand::Zero)).unwrap(),
        make_ring(RingSpec::quadratic(3, 2, 1, 1, Radicand::Zero)).unwrap(),
        make_ring(RingSpec::quadratic(3, 2, 2, 2, Radicand::PowerOfP(1))).unwrap(),
    ]
}

fn vec_of(ring: &Ring, coords: &[Element]) -> Vector {
    Vector::new(ring, coords.to_vec()).unwrap()
}

fn e(ring: &Ring, n: usize, i: usize) -> Vector {
    Vector::basis(ring, n, i)
}

#[test]
fn completion_examples() {
    let ring = f3_dual();
    let space = standard_gram(&ring, 1);
    let b = complete_to_basis(&space, &[e(&ring, 2, 0)]).unwrap();
    assert_eq!(b, vec![e(&ring, 2, 0), e(&ring, 2, 1)]);
    let t = ring.t().unwrap();
    let v = vec_of(&ring, &[ring.one(), t]);
    let b = complete_to_basis(&space, std::slice::from_ref(&v)).unwrap();
    assert_eq!(b, vec![v, e(&ring, 2, 1)]);
    let radical = vec_of(&ring, &[t, t]);
    assert_eq!(complete_to_basis(&space, &[radical]), Err(SymplecticError::NotExtendable));
    let dependent = [e(&ring, 2, 0), e(&ring, 2, 0).scale(&ring.from_int(2))];
    assert_eq!(complete_to_basis(&space, &dependent), Err(SymplecticError::NotExtendable));
}

#[test]
fn partner_examples() {
    let ring = f3_dual();
    let space = standard_gram(&ring, 1);
    assert_eq!(find_unit_partner(&space, &e(&ring, 2, 0)).unwrap(), e(&ring, 2, 1));
    assert_eq!(find_unit_partner(&space, &e(&ring, 2, 1)).unwrap(), e(&ring, 2, 0).neg());
    let t = ring.t().unwrap();
    assert_eq!(
        find_unit_partner(&space, &vec_of(&ring, &[t, ring.zero()])),
        Err(SymplecticError::NotABasisVector)
    );
}

#[test]
fn partner_pairs_to_one_on_random_basis_vectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for ring in desk_rings() {
        for m in 1..=2 {
            let space = standard_gram(&ring, m);
            for _ in 0..500 {
                let v = random_basis_vector(&ring, 2 * m, &mut rng);
                let w = find_unit_partner(&space, &v).unwrap();
                assert_eq!(space.form_eval(&v, &w).unwrap(), ring.one());
            }
        }
    }
}

#[test]
fn isotropic_repair_example() {
    let ring = f3_dual();
    let space = standard_gram(&ring, 1);
    let t = ring.t().unwrap();
    let v = vec_of(&ring, &[ring.one(), ring.scale_int(&t, 2)]);
    assert_eq!(space.length(&v), t);
    let z = make_isotropic(&space, &v, 1).unwrap();
    assert!(ring.is_zero(&space.length(&z)));
    assert!(z.sub(&v).in_radical_power(1));
    let iso = e(&ring, 2, 0);
    assert_eq!(make_isotropic(&space, &iso, 1).unwrap(), iso);
    assert!(matches!(make_isotropic(&space, &v, 2), Err(SymplecticError::PreconditionFailed(_))));
}

#[test]
fn isotropic_repair_on_random_vectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for ring in desk_rings() {
        let space = standard_gram(&ring, 2);
        for _ in 0..200 {
            let v = random_basis_vector(&ring, 4, &mut rng);
            let j = ring.radical_depth(&space.length(&v)).max(1);
            let z = make_isotropic(&space, &v, j).unwrap();
            assert!(ring.is_zero(&space.length(&z)));
            assert!(z.sub(&v).in_radical_power(j));
        }
    }
}

#[test]
fn pairing_normalization_example() {
    let ring = f3_dual();
    let space = standard_gram(&ring, 1);
    let t = ring.t().unwrap();
    let u = e(&ring, 2, 0);
    let one_plus_t = ring.add(&ring.one(), &t);
    let v = vec_of(&ring, &[ring.zero(), one_plus_t]);
    let z = normalize_pairing(&space, &u, &v, 1).unwrap();
    assert_eq!(z, v.scale(&ring.sub(&ring.one(), &t)));
    assert_eq!(space.form_eval(&u, &z).unwrap(), ring.one());
    let far = vec_of(&ring, &[ring.zero(), ring.from_int(2)]);
    assert_eq!(normalize_pairing(&space, &u, &far, 1), Err(SymplecticError::NotCongruentToOne));
}

#[test]
fn partner_fix_example() {
    let ring = f3_dual();
    let space = standard_gram(&ring, 1);
    let t = ring.t().unwrap();
    let u = e(&ring, 2, 0);
    let v = vec_of(&ring, &[t, ring.one()]);
    assert_eq!(space.length(&v), t);
    let z = fix_partner(&space, &u, &v).unwrap();
    assert_eq!(z, e(&ring, 2, 1));
    assert_eq!(fix_partner(&space, &u, &e(&ring, 2, 1)).unwrap(), e(&ring, 2, 1));
    assert!(fix_partner(&space, &v, &u).is_err());
}

#[test]
fn partner_fix_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for ring in desk_rings() {
        let space = standard_gram(&ring, 2);
        let mut done = 0;
        while done < 200 {
            let u = random_basis_vector(&ring, 4, &mut rng);
            let u = make_isotropic(&space, &u, 1).unwrap();
            let v = find_unit_partner(&space, &u).unwrap();
            let v = v.add(&u.scale(&ring.random_element(&mut rng)));
            let z = fix_partner(&space, &u, &v).unwrap();
            assert!(ring.is_zero(&space.length(&z)));
            assert_eq!(space.form_eval(&u, &z).unwrap(), ring.one());
            done += 1;
        }
    }
}

#[test]
fn complement_examples() {
    let ring = f3_dual();
    let space = standard_gram(&ring, 2);
    let pair = [e(&ring, 4, 0), e(&ring, 4, 2)];
    let rest = [e(&ring, 4, 1), e(&ring, 4, 3)];
    let comp = orthogonal_complement(&space, &pair, &rest).unwrap();
    assert_eq!(comp, rest.to_vec());
    assert_eq!(space.gram_of(&comp).unwrap(), standard_j(&ring, 1));
    // a skewed remainder gets projected
    let skewed = [e(&ring, 4, 1).add(&e(&ring, 4, 0))];
    let comp = orthogonal_complement(&space, &pair, &skewed).unwrap();
    assert_eq!(comp[0], e(&ring, 4, 1));
    let singular = [e(&ring, 4, 0), e(&ring, 4, 1)];
    assert_eq!(
        orthogonal_complement(&space, &singular, &rest),
        Err(SymplecticError::SingularGram)
    );
}

#[test]
fn standard_space_is_its_own_symplectic_basis() {
    for ring in desk_rings() {
        for m in 1..=3 {
            let space = standard_gram(&ring, m);
            let sb = symplectic_basis(&space).unwrap();
            assert!(sb.matrix().is_identity());
        }
    }
}

#[test]
fn dual_number_plane_example() {
    let ring = f3_dual();
    let t = ring.t().unwrap();
    let gram = Matrix::from_rows(&ring, vec![vec![t, ring.one()], vec![ring.from_int(-1), t]]).unwrap();
    let space = FormSpace::new(gram).unwrap();
    let sb = symplectic_basis(&space).unwrap();
    assert_eq!(space.gram_of(&sb.vectors()).unwrap(), standard_j(&ring, 1));
}

#[test]
fn random_congruent_forms_have_symplectic_bases() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for ring in desk_rings() {
        for i in 0..500 {
            let m = 1 + i % 2;
            let std = standard_gram(&ring, m);
            let x = random_invertible(&ring, 2 * m, &mut rng);
            let space = FormSpace::new(x.star_transpose().mul(std.gram()).unwrap().mul(&x).unwrap()).unwrap();
            let sb = symplectic_basis(&space).unwrap();
            let p = sb.matrix();
            assert_eq!(p.star_transpose().mul(space.gram()).unwrap().mul(&p).unwrap(), *std.gram());
        }
    }
}

#[test]
fn odd_rank_is_rejected() {
    let ring = f3_dual();
    let space = FormSpace::new(Matrix::zeros(&ring, 1, 1));
    assert!(space.is_err());
}

#[test]
fn exact_approximation_is_unchanged() {
    for ring in desk_rings() {
        let space = standard_gram(&ring, 2);
        let approx: Vec<Vector> = (0..4).map(|i| e(&ring, 4, i)).collect();
        let sb = correct_basis_mod_ideal(&space, &approx, 1).unwrap();
        assert_eq!(sb.vectors(), approx);
    }
}

#[test]
fn perturbed_bases_are_corrected() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for ring in desk_rings() {
        let e_max = ring.nilpotency();
        for m in 1..=2 {
            let space = standard_gram(&ring, m);
            for _ in 0..60 {
                let j = rng.gen_range(1..e_max.max(2));
                let g = random_unitary(&space, &mut rng).unwrap();
                let approx: Vec<Vector> = g
                    .columns()
                    .into_iter()
                    .map(|c| {
                        let noise = Vector::new(
                            &ring,
                            (0..2 * m).map(|_| ring.random_in_radical_power(j, &mut rng)).collect(),
                        )
                        .unwrap();
                        c.add(&noise)
                    })
                    .collect();
                let sb = correct_basis_mod_ideal(&space, &approx, j).unwrap();
                for (a, b) in sb.vectors().iter().zip(&approx) {
                    assert!(a.sub(b).in_radical_power(j));
                }
                assert_eq!(space.gram_of(&sb.vectors()).unwrap(), *space.gram());
            }
        }
    }
    let ring = f3_dual();
    let space = standard_gram(&ring, 1);
    let bad = vec![e(&ring, 2, 0), e(&ring, 2, 0)];
    assert_eq!(
        correct_basis_mod_ideal(&space, &bad, 1),
        Err(SymplecticError::NotApproximatelySymplectic)
    );
}

use rand::Rng;

/// Sp₂(F₃) by brute force over all 81 matrices.
fn sp2_f3(field: &Ring) -> Vec<Matrix> {
    let elems: Vec<Element> = field.elements().unwrap().collect();
    let space = standard_gram(field, 1);
    let mut out = Vec::new();
    for a in &elems {
        for b in &elems {
            for c in &elems {
                for d in &elems {
                    let x = Matrix::from_rows(field, vec![vec![*a, *b], vec![*c, *d]]).unwrap();
                    if space.is_unitary(&x).unwrap() {
                        out.push(x);
                    }
                }
            }
        }
    }
    out
}

#[test]
fn every_sp2_f3_element_lifts() {
    let ring = f3_dual();
    let space = standard_gram(&ring, 1);
    let red = ring.quotient_ring(1).unwrap();
    let group = sp2_f3(red.target());
    assert_eq!(group.len(), 24);
    for xbar in &group {
        let g = lift_unitary(&space, xbar, 1).unwrap();
        assert!(space.is_unitary(&g).unwrap());
        assert_eq!(&g.reduce(&red), xbar);
    }
    let id = Matrix::identity(red.target(), 2);
    let g = lift_unitary(&space, &id, 1).unwrap();
    assert_eq!(g.reduce(&red), id);
    let mut not_unitary = id.clone();
    not_unitary.set(0, 1, red.target().one());
    not_unitary.set(1, 0, red.target().one());
    assert_eq!(lift_unitary(&space, &not_unitary, 1), Err(SymplecticError::NotUnitaryDownstairs));
}

#[test]
fn lifts_through_every_level() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    for ring in desk_rings() {
        for j in 1..ring.nilpotency() {
            let red = ring.quotient_ring(j).unwrap();
            for m in 1..=2 {
                let space = standard_gram(&ring, m);
                let down = standard_gram(red.target(), m);
                for _ in 0..10 {
                    let xbar = random_unitary(&down, &mut rng).unwrap();
                    let g = lift_unitary_via(&space, &xbar, &red).unwrap();
                    assert!(space.is_unitary(&g).unwrap());
                    assert_eq!(g.reduce(&red), xbar);
                }
            }
        }
    }
}

#[test]
fn lift_respects_nonstandard_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    let ring = make_ring(RingSpec::quadratic(3, 2, 1, 1, Radicand::PowerOfP(1))).unwrap();
    let std = standard_gram(&ring, 1);
    let x = random_invertible(&ring, 2, &mut rng);
    let space = FormSpace::new(x.star_transpose().mul(std.gram()).unwrap().mul(&x).unwrap()).unwrap();
    let red = ring.quotient_ring(2).unwrap();
    let down = reduce_space(&space, &red).unwrap();
    // conjugate a standard unitary into the reduced form's unitary group
    let xr = x.reduce(&red);
    let k = random_unitary(&standard_gram(red.target(), 1), &mut rng).unwrap();
    let xbar = mat_inv(&xr).unwrap().mul(&k).unwrap().mul(&xr).unwrap();
    assert!(down.is_unitary(&xbar).unwrap());
    let g = lift_unitary_via(&space, &xbar, &red).unwrap();
    assert!(space.is_unitary(&g).unwrap());
    assert_eq!(g.reduce(&red), xbar);
}

#[test]
fn transport_of_a_vector_to_itself() {
    let ring = f3_dual();
    let space = standard_gram(&ring, 1);
    let u = e(&ring, 2, 0);
    let g = transport(&space, &u, &u).unwrap();
    assert_eq!(g.mul_vec(&u).unwrap(), u);
}

#[test]
fn transport_all_equal_length_pairs_dual_numbers() {
    let ring = f3_dual();
    let space = standard_gram(&ring, 1);
    let elems: Vec<Element> = ring.elements().unwrap().collect();
    let basis_vectors: Vec<Vector> = elems
        .iter()
        .flat_map(|a| elems.iter().map(move |b| (*a, *b)))
        .map(|(a, b)| vec_of(&ring, &[a, b]))
        .filter(|v| is_basis_vector(&space, v))
        .collect();
    assert_eq!(basis_vectors.len(), 72);
    let mut pairs = 0;
    for u in &basis_vectors {
        for v in &basis_vectors {
            if space.length(u) != space.length(v) {
                assert_eq!(transport(&space, u, v), Err(SymplecticError::LengthMismatch));
                continue;
            }
            let g = transport(&space, u, v).unwrap();
            assert_eq!(&g.mul_vec(u).unwrap(), v);
            pairs += 1;
        }
    }
    // lengths are skew elements {0, t, 2t}, each hit by 24 basis vectors
    assert_eq!(pairs, 3 * 24 * 24);
}

#[test]
fn transport_random_pairs_preserves_lengths() {
    let mut rng = ChaCha8Rng::seed_from_u64(28);
    for ring in desk_rings() {
        for m in 1..=3 {
            let space = standard_gram(&ring, m);
            for _ in 0..20 {
                let u = random_basis_vector(&ring, 2 * m, &mut rng);
                let g0 = random_unitary(&space, &mut rng).unwrap();
                let v = g0.mul_vec(&u).unwrap();
                let g = transport(&space, &u, &v).unwrap();
                assert_eq!(g.mul_vec(&u).unwrap(), v);
                let w = random_matrix(&ring, 2 * m, 1, &mut rng).column(0);
                let gw = g.mul_vec(&w).unwrap();
                assert_eq!(space.length(&gw), space.length(&w));
            }
        }
    }
}
