mod common;

use common::*;
use hua_core::liedata::{algebra, AlgebraKind};
use hua_core::params::{rat, Rat};
use hua_core::pbw::{normal_order, EnvElement, OrderedBasis};
use proptest::prelude::*;

#[test]
fn commutator_relation() {
    let b = OrderedBasis::gl(2);
    let r = ring();
    let e = |i, j| EnvElement::e(&b, &r, i, j).unwrap();
    assert_eq!(e(1, 2).commutator(&e(2, 1)), e(1, 1).sub(&e(2, 2)));
    let h = e(1, 1).add(&e(2, 2));
    assert!(h.commutator(&e(1, 2)).is_zero());
    let h1 = e(1, 1).sub(&e(2, 2));
    assert_eq!(h1.commutator(&e(1, 2)), e(1, 2).scale_rat(&rat(2)));
}

#[test]
fn naive_rewriter_on_generator_pairs() {
    let b = OrderedBasis::gl(3);
    for a in 0..b.len() {
        for c in 0..b.len() {
            let got = normal_order(&[a, c], &b, &ring()).unwrap();
            assert_eq!(as_map(&got), naive_map(&b, &[a, c]), "pair {a},{c}");
        }
    }
}

#[test]
fn cyclic_word_expands() {
    let b = OrderedBasis::gl(3);
    let w = [1, 5, 6]; // E12 E23 E31
    assert_eq!(as_map(&normal_order(&w, &b, &ring()).unwrap()), naive_map(&b, &w));
}

fn delta(x: usize, y: usize) -> Rat {
    if x == y {
        rat(1)
    } else {
        rat(0)
    }
}

#[test]
fn sp_k_p_q_brackets() {
    // [K_ij, P_kl] = ½δ_jk P_il + ½δ_jl P_ik, [K_ij, Q_kl] = −½δ_ik Q_jl − ½δ_il Q_jk
    let n = 3;
    let (k, p, q) = hua_core::liedata::sp_kpq(n);
    let half = hua_core::params::ratio(1, 2);
    for i in 0..n {
        for j in 0..n {
            for a in 0..n {
                for l in 0..n {
                    let want = p[i * n + l].scale(&delta(j, a)).add(&p[i * n + a].scale(&delta(j, l))).scale(&half);
                    assert_eq!(k[i * n + j].bracket(&p[a * n + l]), want);
                    let want = q[j * n + l].scale(&delta(i, a)).add(&q[j * n + a].scale(&delta(i, l))).scale(&-half.clone());
                    assert_eq!(k[i * n + j].bracket(&q[a * n + l]), want);
                }
            }
        }
    }
}

#[test]
fn gl_k_p_bracket() {
    // K = ½(E_ij − E_ji), P = ½(E_ij + E_ji):
    // [K_ij, P_kl] = ½(δ_jk P_il + δ_jl P_ik − δ_ik P_jl − δ_il P_jk)
    let n = 3;
    let half = hua_core::params::ratio(1, 2);
    let e = |i, j| hua_core::linalg::GlMat::unit(n, i, j);
    let k = |i, j| e(i, j).sub(&e(j, i)).scale(&half);
    let p = |i, j| e(i, j).add(&e(j, i)).scale(&half);
    for i in 0..n {
        for j in 0..n {
            for a in 0..n {
                for l in 0..n {
                    let want = p(i, l)
                        .scale(&delta(j, a))
                        .add(&p(i, a).scale(&delta(j, l)))
                        .sub(&p(j, l).scale(&delta(i, a)))
                        .sub(&p(j, a).scale(&delta(i, l)))
                        .scale(&half);
                    assert_eq!(k(i, j).bracket(&p(a, l)), want);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn naive_rewriter_on_words(w in prop::collection::vec(0usize..9, 3)) {
        let b = OrderedBasis::gl(3);
        prop_assert_eq!(as_map(&normal_order(&w, &b, &ring()).unwrap()), naive_map(&b, &w));
    }

    #[test]
    fn associativity_gl2(a in words(4, 2, 3), b in words(4, 2, 3), c in words(4, 2, 3)) {
        let basis = OrderedBasis::gl(2);
        let (x, y, z) = (element(&basis, &a), element(&basis, &b), element(&basis, &c));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
    }

    #[test]
    fn associativity_gl3(a in words(9, 2, 3), b in words(9, 2, 3), c in words(9, 2, 3)) {
        let basis = OrderedBasis::gl(3);
        let (x, y, z) = (element(&basis, &a), element(&basis, &b), element(&basis, &c));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
    }

    #[test]
    fn jacobi_gl3(a in words(9, 1, 3), b in words(9, 1, 3), c in words(9, 1, 3)) {
        let basis = OrderedBasis::gl(3);
        let (x, y, z) = (element(&basis, &a), element(&basis, &b), element(&basis, &c));
        let j = x.commutator(&y.commutator(&z))
            .add(&y.commutator(&z.commutator(&x)))
            .add(&z.commutator(&x.commutator(&y)));
        prop_assert!(j.is_zero());
    }

    #[test]
    fn filtration(a in words(9, 2, 3), b in words(9, 2, 3)) {
        let basis = OrderedBasis::gl(3);
        let (x, y) = (element(&basis, &a), element(&basis, &b));
        prop_assume!(!x.is_zero() && !y.is_zero());
        let xy = x.mul(&y);
        let (ox, oy) = (x.order().unwrap(), y.order().unwrap());
        prop_assert!(xy.order().unwrap_or(0) <= ox + oy);
        // top symbol of a product is the commutative product of the symbols
        let top = |u: &EnvElement, d: u32| u.filter_terms(|m| m.iter().map(|&(_, p)| p as u32).sum::<u32>() == d);
        let (sx, sy) = (top(&x, ox), top(&y, oy));
        let want = top(&sx.mul(&sy), ox + oy);
        prop_assert_eq!(top(&xy, ox + oy), want.clone());
        prop_assert_eq!(top(&sy.mul(&sx), ox + oy), want);
    }

    #[test]
    fn ordered_monomials_are_fixed(w in prop::collection::vec(0usize..9, 0..5)) {
        let mut w = w;
        w.sort_unstable();
        let basis = OrderedBasis::gl(3);
        let u = normal_order(&w, &basis, &ring()).unwrap();
        prop_assert_eq!(u.num_terms(), 1);
        prop_assert_eq!(u.terms().next().unwrap().0.clone(), run_length(&w));
    }

    #[test]
    fn change_basis_round_trip(a in words(9, 3, 4)) {
        let gl = OrderedBasis::gl(3);
        let verma = algebra(AlgebraKind::Gl, 3).unwrap().verma.clone();
        let u = element(&gl, &a);
        let back = u.change_basis(&verma).unwrap().change_basis(&gl).unwrap();
        prop_assert_eq!(back, u);
    }
}
