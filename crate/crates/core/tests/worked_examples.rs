//! Closed-form values for small inputs, one test per example.

use residue_core::homology::*;
use residue_core::laurent::{hkr_antisymmetrize, DifferentialForm, LaurentPoly, MultiIndex};
use residue_core::operator::{mul_op, projector, WindowedOperator};
use residue_core::residue::{monomial_form, residue_form, residue_monomial_det};
use residue_core::scalar::{Field, Rational, Scalar};
use residue_core::verify::{case_rng, random_laurent, random_lie_chain, random_slot};

fn t(exp: &[i64]) -> LaurentPoly {
    LaurentPoly::monomial(exp.len(), Field::Rational, Scalar::one(), MultiIndex(exp.to_vec()))
}

fn op(exp: &[i64]) -> WindowedOperator {
    mul_op(&t(exp))
}

fn chain(dim: usize, slots: &[WindowedOperator]) -> HochschildChain {
    let mut c = HochschildChain::zero(dim, slots.len() - 1, Field::Rational);
    c.add_tensor(&Scalar::one(), slots);
    c
}

fn std(n: usize) -> (CubicalStructure, GoodIdempotents) {
    (CubicalStructure::new(n), GoodIdempotents::standard(n))
}

fn int(v: i64) -> Scalar {
    Scalar::from(v)
}

#[test]
fn hkr_in_two_variables() {
    let (f0, f1, f2) = (t(&[1, 0]), t(&[0, 1]), t(&[1, 1]));
    let z = hkr_antisymmetrize(&DifferentialForm::new(f0.clone(), vec![f1.clone(), f2.clone()]).unwrap());
    let expected =
        &chain(2, &[mul_op(&f0), mul_op(&f1), mul_op(&f2)]) - &chain(2, &[mul_op(&f0), mul_op(&f2), mul_op(&f1)]);
    assert_eq!(z, expected);
}

#[test]
fn projectors_are_idempotent() {
    for sign in Sign::BOTH {
        let p = projector(1, 0, sign);
        assert_eq!(p.compose(&p), p);
    }
}

#[test]
fn one_dimensional_invariant_subspace() {
    let p = projector(1, 0, Sign::Plus);
    let k = p.compose(&op(&[-1])).commutator(&op(&[1]));
    for lambda in -4..=4 {
        let expected = if lambda == 0 { t(&[0]) } else { LaurentPoly::zero(1, Field::Rational) };
        assert_eq!(k.apply_monomial(&MultiIndex(vec![lambda])), expected, "lambda = {lambda}");
    }
    assert_eq!(k.tate_trace().unwrap(), int(1));
    for i in -4..=4 {
        if i != -1 {
            assert!(p.compose(&op(&[i])).commutator(&op(&[1])).tate_trace().unwrap().is_zero(), "i = {i}");
        }
    }
}

#[test]
fn ce_differential_in_low_degree() {
    let (a, b) = (op(&[2]), projector(1, 0, Sign::Plus));
    let mut c = LieChain::zero(1, 2, Field::Rational, false);
    c.add_wedge(&Scalar::one(), None, &[a.clone(), b.clone()]).unwrap();
    let mut expected = LieChain::zero(1, 1, Field::Rational, false);
    expected.add_wedge(&int(-1), None, &[a.commutator(&b)]).unwrap();
    assert_eq!(ce_delta(&c).unwrap(), expected);
}

#[test]
fn i_prime_is_a_chain_map() {
    for i in 0..20 {
        let mut rng = case_rng(41, i);
        let c = random_lie_chain(&mut rng, 1, 2, true, |r| random_slot(r, 1));
        let lhs = ce_delta(&i_prime(&c).unwrap()).unwrap();
        let rhs = i_prime(&ce_delta_coefficients(&c).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn epsilon_in_degree_two() {
    let (m, a, b) = (op(&[1]), op(&[-1]), projector(1, 0, Sign::Minus));
    let mut c = LieChain::zero(1, 2, Field::Rational, true);
    c.add_wedge(&Scalar::one(), Some(&m), &[a.clone(), b.clone()]).unwrap();
    let expected = &chain(1, &[m.clone(), a.clone(), b.clone()]) - &chain(1, &[m, b, a]);
    assert_eq!(epsilon(&c).unwrap(), expected);
}

#[test]
fn i_prime_signs() {
    let (f0, f1, f2) = (op(&[1, 0]), op(&[0, 1]), op(&[-1, 2]));
    let mut c = LieChain::zero(2, 2, Field::Rational, true);
    c.add_wedge(&Scalar::one(), Some(&f0), &[f1.clone(), f2.clone()]).unwrap();
    let mut expected = LieChain::zero(2, 3, Field::Rational, false);
    expected.add_wedge(&Scalar::one(), None, &[f0.clone(), f1.clone(), f2.clone()]).unwrap();
    assert_eq!(i_prime(&c).unwrap(), expected);

    let (g0, g1) = (op(&[1]), op(&[-2]));
    let mut c = LieChain::zero(1, 1, Field::Rational, true);
    c.add_wedge(&Scalar::one(), Some(&g0), std::slice::from_ref(&g1)).unwrap();
    let mut expected = LieChain::zero(1, 2, Field::Rational, false);
    expected.add_wedge(&int(-1), None, &[g0, g1]).unwrap();
    assert_eq!(i_prime(&c).unwrap(), expected);
}

#[test]
fn three_paths_on_the_basic_cycle() {
    let (cs, idem) = std(1);
    let z = chain(1, &[op(&[-1]), op(&[1])]);
    assert_eq!(phi_hh_closed(&z, &cs, &idem).unwrap(), int(1));
    assert_eq!(phi_hh_zigzag(&z, &cs, &idem).unwrap(), int(1));
    assert_eq!(phi_c(&z, &cs, &idem).unwrap(), int(1));
    let mut lie = LieChain::zero(1, 1, Field::Rational, true);
    lie.add_wedge(&Scalar::one(), Some(&op(&[-1])), &[op(&[1])]).unwrap();
    assert_eq!(commutator_formula(&lie, &cs, &idem).unwrap(), int(1));
}

#[test]
fn monomial_law_in_two_variables() {
    let (cs, idem) = std(2);
    let cases: [[[i64; 2]; 3]; 4] =
        [[[-1, -1], [1, 0], [0, 1]], [[-3, 1], [2, -1], [1, 0]], [[-2, -2], [1, 1], [1, 1]], [[0, -1], [1, 0], [0, 1]]];
    for c in cases {
        let z = chain(2, &[op(&c[0]), op(&c[1]), op(&c[2])]);
        let balanced = (0..2).all(|j| c.iter().map(|r| r[j]).sum::<i64>() == 0);
        let diagonal = if balanced { c[1][0] * c[2][1] } else { 0 };
        let det = if balanced { c[1][0] * c[2][1] - c[1][1] * c[2][0] } else { 0 };
        assert_eq!(phi_hh_closed(&z, &cs, &idem).unwrap(), int(diagonal), "{c:?}");
        let antisymmetrized = &z - &chain(2, &[op(&c[0]), op(&c[2]), op(&c[1])]);
        assert_eq!(phi_hh_closed(&antisymmetrized, &cs, &idem).unwrap(), int(det), "{c:?}");
        let rows: Vec<Vec<i64>> = c.iter().map(|r| r.to_vec()).collect();
        assert_eq!(
            residue_monomial_det(&rows, &Scalar::one(), &Field::Rational).unwrap(),
            Rational::from_integer(det.into())
        );
    }
}

#[test]
fn identity_block_and_unbalanced_columns() {
    let cs = CubicalStructure::new(2);
    let beta = Scalar::rational(5, 3);
    let identity = vec![vec![-1, -1], vec![1, 0], vec![0, 1]];
    let form = monomial_form(&identity, &beta, &Field::Rational).unwrap();
    assert_eq!(residue_form(&form, &cs).unwrap(), Rational::new(5.into(), 3.into()));
    let unbalanced = vec![vec![0, -1], vec![1, 0], vec![0, 1]];
    let form = monomial_form(&unbalanced, &beta, &Field::Rational).unwrap();
    assert_eq!(residue_form(&form, &cs).unwrap(), Rational::from_integer(0.into()));
}

#[test]
fn residue_of_seven_over_t() {
    let f = t(&[-1]).scale(&int(7));
    let form = DifferentialForm::new(f, vec![t(&[1])]).unwrap();
    assert_eq!(residue_form(&form, &CubicalStructure::new(1)).unwrap(), Rational::from_integer(7.into()));
}

#[test]
fn toeplitz_lift_of_a_shift() {
    let (cs, idem) = std(1);
    for i in -3..=3 {
        let l = lambda_toeplitz(&op(&[i]), &cs, &idem).unwrap();
        for lambda in -5..=5 {
            let expected = if lambda + i >= 0 { t(&[lambda + i]) } else { LaurentPoly::zero(1, Field::Rational) };
            assert_eq!(l.apply_monomial(&MultiIndex(vec![lambda])), expected, "i={i} lambda={lambda}");
        }
    }
}

#[test]
fn psi_at_level_one() {
    let idem = GoodIdempotents::standard(1);
    let (a0, a1) = (op(&[2]), op(&[-1]));
    let out = psi(&chain(1, &[a0.clone(), a1.clone()]), 1, &idem).unwrap();
    let (p, m) = (idem.plus(0), idem.minus(0));
    let twisted = &m.compose(&a1).compose(&p) - &p.compose(&a1).compose(&m);
    let expected = chain(1, &[twisted.compose(&a0).scale(&int(-1))]);
    assert_eq!(out, expected);
}

#[test]
fn psi_tower_sign() {
    let (cs, idem) = std(2);
    for i in 0..10 {
        let mut rng = case_rng(77, i);
        let slots: Vec<_> = (0..3).map(|_| mul_op(&random_laurent(&mut rng, 2, 2, -2, 2))).collect();
        let c = chain(2, &slots);
        let mut product = WindowedOperator::identity(2);
        for (axis, a) in slots[1..].iter().enumerate() {
            let (p, m) = (idem.plus(axis), idem.minus(axis));
            product = product.compose(&(&m.compose(a).compose(&p) - &p.compose(a).compose(&m)));
        }
        let expected = cs.trace(&product.compose(&slots[0])).unwrap().signed(true);
        assert_eq!(phi_c(&c, &cs, &idem).unwrap(), expected);
    }
}

#[test]
fn cyclic_operator_in_degree_one() {
    let (a, b) = (op(&[1]), op(&[-2]));
    assert_eq!(cyclic_t(&chain(1, &[a.clone(), b.clone()])), chain(1, &[b, a]).scale(&int(-1)));
    let c = chain(1, &[op(&[3]), projector(1, 0, Sign::Plus), op(&[-1])]);
    assert_eq!(cyclic_t(&cyclic_t(&cyclic_t(&c))), c);
}
