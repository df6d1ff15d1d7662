//! Randomized property suites.
//!
//! Every property is a function of a seeded RNG; case `i` of a run with seed
//! `s` always draws from the same stream, so reports are reproducible and do
//! not depend on scheduling. The random generators are public and shared
//! with the integration tests.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::homology::{
    ce_delta, ce_delta_coefficients, commutator_formula, cyclic_t, epsilon, hochschild_b, labels, phi_c, phi_hh_closed,
    phi_hh_zigzag, window_projector, CubicalStructure, GoodIdempotents, HochschildChain, LabeledChain, LieChain, Slot,
};
use crate::laurent::{
    binomial_series, hkr_antisymmetrize, substitute_1d, DifferentialForm, LaurentPoly, MultiIndex, TruncatedSeries,
};
use crate::operator::{box_trace, mul_op, projector, support_box, AxisWindow, Sign, WindowTerm, WindowedOperator};
use crate::parallel::par_map_indexed;
use crate::residue::{
    coordinate_invariance_check_1d, global_residue_sum, invariance_order, monomial_form, nodal_check_against,
    nodal_cubic, nodal_factorization_check, residue_coeff_oracle, residue_form, residue_monomial_det, RationalFunction,
};
use crate::scalar::{ExtensionField, Field, Rational, Scalar};
use crate::upoly::UPoly;

/// The deterministic RNG for case `index` of a run seeded with `seed`.
pub fn case_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

// ---------------------------------------------------------------- generators

pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    let mut n = rng.gen_range(1..=4i64);
    if rng.gen_bool(0.5) {
        n = -n;
    }
    Rational::new(n.into(), rng.gen_range(1..=3i64).into())
}

/// A Laurent polynomial with `1..=max_terms` terms and exponents in `[lo, hi]`.
pub fn random_laurent<R: Rng>(rng: &mut R, dim: usize, max_terms: usize, lo: i64, hi: i64) -> LaurentPoly {
    let k = rng.gen_range(1..=max_terms);
    let terms: Vec<_> = (0..k)
        .map(|_| {
            let e = MultiIndex((0..dim).map(|_| rng.gen_range(lo..=hi)).collect());
            (e, Scalar::Rational(random_rational(rng)))
        })
        .collect();
    LaurentPoly::from_terms(dim, Field::Rational, terms).expect("generated terms")
}

pub fn random_monomial<R: Rng>(rng: &mut R, dim: usize, lo: i64, hi: i64) -> LaurentPoly {
    let e = MultiIndex((0..dim).map(|_| rng.gen_range(lo..=hi)).collect());
    LaurentPoly::monomial(dim, Field::Rational, Scalar::Rational(random_rational(rng)), e)
}

fn random_window<R: Rng>(rng: &mut R, finite: bool) -> AxisWindow {
    let a = rng.gen_range(-3..=2i64);
    let b = a + rng.gen_range(1..=3i64);
    match if finite { 3 } else { rng.gen_range(0..4) } {
        0 => AxisWindow::ALL,
        1 => AxisWindow::new(Some(a), None),
        2 => AxisWindow::new(None, Some(b)),
        _ => AxisWindow::new(Some(a), Some(b)),
    }
}

fn random_terms<R: Rng>(rng: &mut R, dim: usize, max_terms: usize, finite: bool) -> Vec<WindowTerm> {
    (0..rng.gen_range(1..=max_terms))
        .map(|_| WindowTerm {
            coefficient: Scalar::Rational(random_rational(rng)),
            shift: MultiIndex((0..dim).map(|_| rng.gen_range(-2..=2)).collect()),
            window: (0..dim).map(|_| random_window(rng, finite)).collect(),
        })
        .collect()
}

/// A windowed operator with one or two terms and arbitrary windows.
pub fn random_operator<R: Rng>(rng: &mut R, dim: usize) -> WindowedOperator {
    WindowedOperator::from_window_terms(dim, Field::Rational, &random_terms(rng, dim, 2, false)).expect("terms")
}

/// A finite-rank operator (every window finite).
pub fn random_finite_rank<R: Rng>(rng: &mut R, dim: usize) -> WindowedOperator {
    WindowedOperator::from_window_terms(dim, Field::Rational, &random_terms(rng, dim, 3, true)).expect("terms")
}

/// An operator whose windows are finite on one axis along which every shift
/// is strictly positive, or strictly negative.
pub fn random_strict_shift<R: Rng>(rng: &mut R, dim: usize) -> WindowedOperator {
    let axis = rng.gen_range(0..dim);
    let up = rng.gen_bool(0.5);
    let mut terms = random_terms(rng, dim, 3, false);
    for t in &mut terms {
        let s = rng.gen_range(1..=2);
        t.shift.0[axis] = if up { s } else { -s };
        t.window[axis] = random_window(rng, true);
    }
    WindowedOperator::from_window_terms(dim, Field::Rational, &terms).expect("terms")
}

/// Either a multiplication operator or a general windowed operator.
pub fn random_slot<R: Rng>(rng: &mut R, dim: usize) -> WindowedOperator {
    match rng.gen_range(0..3) {
        0 => random_operator(rng, dim),
        _ => mul_op(&random_laurent(rng, dim, 2, -3, 3)),
    }
}

pub fn random_chain<R: Rng>(rng: &mut R, dim: usize, degree: usize) -> HochschildChain {
    let mut c = HochschildChain::zero(dim, degree, Field::Rational);
    for _ in 0..rng.gen_range(1..=2) {
        let slots: Vec<_> = (0..=degree).map(|_| random_slot(rng, dim)).collect();
        c.add_tensor(&Scalar::Rational(random_rational(rng)), &slots);
    }
    c
}

/// A differential form with Laurent-polynomial entries.
pub fn random_form<R: Rng>(rng: &mut R, dim: usize) -> DifferentialForm {
    let f0 = random_laurent(rng, dim, 2, -3, 3);
    let args = (0..dim).map(|_| random_laurent(rng, dim, 2, -3, 3)).collect();
    DifferentialForm::new(f0, args).expect("generated form")
}

/// A Hochschild cycle: the antisymmetrization of a random form.
pub fn random_cycle<R: Rng>(rng: &mut R, dim: usize) -> HochschildChain {
    hkr_antisymmetrize(&random_form(rng, dim))
}

/// A Lie chain whose slots come from `slot`.
pub fn random_lie_chain<R: Rng>(
    rng: &mut R,
    dim: usize,
    degree: usize,
    with_coefficient: bool,
    slot: impl Fn(&mut R) -> WindowedOperator,
) -> LieChain {
    let mut c = LieChain::zero(dim, degree, Field::Rational, with_coefficient);
    for _ in 0..rng.gen_range(1..=2) {
        let m = with_coefficient.then(|| slot(rng));
        let slots: Vec<_> = (0..degree).map(|_| slot(rng)).collect();
        c.add_wedge(&Scalar::Rational(random_rational(rng)), m.as_ref(), &slots).expect("generated wedge");
    }
    c
}

/// A labeled chain at `level` whose module slots respect their labels.
pub fn random_labeled_chain<R: Rng>(rng: &mut R, dim: usize, level: usize, degree: usize) -> LabeledChain {
    let mut c = LabeledChain::zero(dim, level, degree, Field::Rational);
    let choices = labels(dim, level);
    for _ in 0..rng.gen_range(1..=2) {
        let label = choices.choose(rng).expect("labels").clone();
        let mut a0 = random_slot(rng, dim);
        for (axis, slot) in label.iter().enumerate() {
            let guard = match slot {
                Slot::Plus => projector(dim, axis, Sign::Plus),
                Slot::Minus => projector(dim, axis, Sign::Minus),
                Slot::Zero => {
                    let lo = rng.gen_range(-2..=1);
                    window_projector(dim, axis, lo, lo + rng.gen_range(1..=2))
                }
            };
            a0 = guard.compose(&a0);
        }
        let mut slots = vec![a0];
        slots.extend((0..degree).map(|_| random_slot(rng, dim)));
        c.add_term(&label, &Scalar::Rational(random_rational(rng)), &slots).expect("generated term");
    }
    c
}

/// A rational function whose denominator has degree at most four; with
/// `quadratic` it contains an irreducible quadratic factor.
pub fn random_rational_function<R: Rng>(rng: &mut R, quadratic: bool) -> RationalFunction {
    let mut den = UPoly::one();
    let mut budget = rng.gen_range(1..=4usize);
    if quadratic {
        let b = rng.gen_range(-2..=2i64);
        let c = b * b / 4 + rng.gen_range(1..=3i64);
        den = &den * &UPoly::from_i64(&[c, b, 1]);
        budget = budget.saturating_sub(2);
    }
    while budget > 0 {
        if budget >= 2 && rng.gen_bool(0.3) {
            let q = UPoly::from_i64(&[rng.gen_range(1..=3), 0, 1]);
            den = &den * &q;
            budget -= 2;
        } else {
            den = &den
                * &UPoly::linear_root(Rational::new(rng.gen_range(-3..=3i64).into(), rng.gen_range(1..=2i64).into()));
            budget -= 1;
        }
    }
    let num_deg = rng.gen_range(0..=5usize);
    let num = UPoly::new((0..=num_deg).map(|_| random_rational(rng)).collect());
    RationalFunction::new(num, den).expect("nonzero denominator")
}

// ---------------------------------------------------------------- properties

pub type Check = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lift<T>(r: crate::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn pick_dim<R: Rng>(rng: &mut R) -> usize {
    rng.gen_range(1..=2)
}

pub fn ideals_case(rng: &mut ChaCha8Rng, n: usize) -> Check {
    let a = random_slot(rng, n);
    let x = random_slot(rng, n);
    for axis in 0..n {
        for sign in Sign::BOTH {
            let member = projector(n, axis, sign).compose(&x);
            ensure(member.ideal_member(axis, sign), || format!("P^{sign} x outside I_{}^{sign}", axis + 1))?;
            ensure(a.compose(&member).ideal_member(axis, sign), || "left ideal violated".into())?;
            ensure(member.compose(&a).ideal_member(axis, sign), || "right ideal violated".into())?;
        }
        let cs = CubicalStructure::new(n);
        let (p, m) = lift(cs.split(&a, axis, &GoodIdempotents::standard(n)))?;
        ensure(&p + &m == a, || "P^+ a + P^- a != a".into())?;
    }
    let all = (0..n).all(|i| x.ideal_member(i, Sign::Plus) && x.ideal_member(i, Sign::Minus));
    ensure(!all || x.is_finite_rank(), || "I_tr member not finite rank".into())
}

pub fn normal_form_case(rng: &mut ChaCha8Rng, n: usize) -> Check {
    let terms = random_terms(rng, n, 3, false);
    let x = lift(WindowedOperator::from_window_terms(n, Field::Rational, &terms))?;
    let y = random_slot(rng, n);
    ensure((&x + &x.scale(&Scalar::from(-1))).is_zero(), || "x + (-1)x != 0".into())?;
    let lambdas: Vec<MultiIndex> =
        (0..6).map(|_| MultiIndex((0..n).map(|_| rng.gen_range(-5..=5)).collect())).collect();
    for lambda in &lambdas {
        let mut direct = LaurentPoly::zero(n, Field::Rational);
        for t in &terms {
            if t.window.iter().zip(&lambda.0).all(|(w, &l)| w.contains(l)) {
                let m = LaurentPoly::monomial(n, Field::Rational, t.coefficient.clone(), lambda.add(&t.shift));
                direct = &direct + &m;
            }
        }
        ensure(x.apply_monomial(lambda) == direct, || format!("action mismatch at {:?}", lambda.0))?;
        let composed = x.compose(&y).apply_monomial(lambda);
        let stepwise = lift(x.apply(&y.apply_monomial(lambda)))?;
        ensure(composed == stepwise, || format!("composition mismatch at {:?}", lambda.0))?;
    }
    let f = random_laurent(rng, n, 3, -3, 3);
    let g = random_laurent(rng, n, 3, -3, 3);
    ensure(mul_op(&f).compose(&mul_op(&g)) == mul_op(&(&f * &g)), || "mul_op not multiplicative".into())?;
    ensure(mul_op(&f).commutator(&mul_op(&g)).is_zero(), || "functions do not commute".into())
}

pub fn trace_t1_case(rng: &mut ChaCha8Rng, n: usize) -> Check {
    let x = random_finite_rank(rng, n);
    let (mut lo, mut hi) = support_box(&x).ok_or("finite-rank generator produced infinite rank")?;
    for i in 0..n {
        lo[i] -= 2;
        hi[i] += 2;
    }
    let tr = lift(x.tate_trace())?;
    ensure(tr == box_trace(&x, &lo, &hi), || format!("T1: closed {tr} vs dense {}", box_trace(&x, &lo, &hi)))
}

pub fn trace_t2_t4_case(rng: &mut ChaCha8Rng, n: usize) -> Check {
    let x = random_finite_rank(rng, n);
    let y = random_finite_rank(rng, n);
    let k = Scalar::Rational(random_rational(rng));
    let lin = lift((&x + &y.scale(&k)).tate_trace())?;
    let sep = &lift(x.tate_trace())? + &(&lift(y.tate_trace())? * &k);
    ensure(lin == sep, || "T4 linearity on finite rank".into())?;
    let axis = rng.gen_range(0..n);
    let lo = rng.gen_range(-3..=1);
    let q = window_projector(n, axis, lo, lo + rng.gen_range(1..=3));
    let qc = &WindowedOperator::identity(n) - &q;
    let split = &lift(q.compose(&x).compose(&q).tate_trace())? + &lift(qc.compose(&x).compose(&qc).tate_trace())?;
    ensure(split == lift(x.tate_trace())?, || "T2 additivity over a splitting".into())
}

pub fn trace_t3_case(rng: &mut ChaCha8Rng, n: usize) -> Check {
    let x = random_strict_shift(rng, n);
    ensure(x.is_certified_nilpotent(), || "strict shift not certified".into())?;
    ensure(lift(x.tate_trace())?.is_zero(), || "T3: nonzero trace".into())?;
    let mut p = x.clone();
    for _ in 0..8 {
        p = p.compose(&x);
    }
    ensure(p.is_zero(), || "certified operator is not nilpotent".into())
}

pub fn trace_t5_case(rng: &mut ChaCha8Rng, n: usize) -> Check {
    let x = random_finite_rank(rng, n);
    let y = random_slot(rng, n);
    let (xy, yx) = (x.compose(&y), y.compose(&x));
    ensure(xy.is_finite_rank() && yx.is_finite_rank(), || "I_tr is not an ideal".into())?;
    ensure(lift(xy.tate_trace())? == lift(yx.tate_trace())?, || "T5: tr(xy) != tr(yx)".into())
}

pub fn b_squared_case(rng: &mut ChaCha8Rng, n: usize) -> Check {
    let c = random_chain(rng, n, 3);
    ensure(lift(hochschild_b(&lift(hochschild_b(&c))?))?.is_zero(), || "b∘b != 0".into())
}

pub fn ce_squared_case(rng: &mut ChaCha8Rng, n: usize) -> Check {
    let c = random_lie_chain(rng, n, 4, false, |r| random_slot(r, n));
    ensure(lift(ce_delta(&lift(ce_delta(&c))?))?.is_zero(), || "δ∘δ != 0".into())?;
    let fs: Vec<WindowedOperator> = (0..3).map(|_| mul_op(&random_laurent(rng, n, 2, -3, 3))).collect();
    let mut comm = LieChain::zero(n, 3, Field::Rational, false);
    lift(comm.add_wedge(&Scalar::one(), None, &fs))?;
    ensure(lift(ce_delta(&comm))?.is_zero(), || "δ of commuting slots != 0".into())
}

pub fn partial_squared_case(rng: &mut ChaCha8Rng, n: usize) -> Check {
    let level = rng.gen_range(2..=n + 1);
    let degree = rng.gen_range(0..=1);
    let c = random_labeled_chain(rng, n, level, degree);
    let d = lift(c.n_partial())?;
    ensure(lift(d.n_partial())?.is_zero(), || format!("∂∘∂ != 0 from level {level}"))
}

pub fn h_squared_case(rng: &mut ChaCha8Rng, n: usize) -> Check {
    let level = rng.gen_range(0..n);
    let degree = rng.gen_range(0..=1);
    let c = random_labeled_chain(rng, n, level, degree);
    let idem = GoodIdempotents::standard(n);
    let h = lift(c.homotopy_h(&idem))?;
    lift(h.check_membership())?;
    ensure(lift(h.homotopy_h(&idem))?.is_zero(), || format!("H∘H != 0 from level {level}"))
}

pub fn homotopy_case(rng: &mut ChaCha8Rng, n: usize) -> Check {
    let level = rng.gen_range(0..=n + 1);
    let degree = rng.gen_range(0..=1);
    let c = random_labeled_chain(rng, n, level, degree);
    let idem = GoodIdempotents::standard(n).shifted(0, rng.gen_range(-2..=2));
    let mut sum = LabeledChain::zero(n, level, c.degree(), Field::Rational);
    if level <= n {
        sum = lift(sum.try_add(&lift(lift(c.homotopy_h(&idem))?.n_partial())?))?;
    }
    if level >= 1 {
        sum = lift(sum.try_add(&lift(lift(c.n_partial())?.homotopy_h(&idem))?))?;
    }
    ensure(sum == c, || format!("∂H + H∂ != id at level {level}"))
}

pub fn epsilon_chain_map_case(rng: &mut ChaCha8Rng, n: usize) -> Check {
    let degree = rng.gen_range(1..=3);
    let c = random_lie_chain(rng, n, degree, true, |r| random_slot(r, n));
    let lhs = lift(hochschild_b(&lift(epsilon(&c))?))?;
    let rhs = lift(epsilon(&lift(ce_delta_coefficients(&c))?))?;
    ensure(lhs == rhs, || format!("b∘ε != ε∘δ in degree {degree}"))
}

fn sign_nn1(n: usize) -> bool {
    (n * (n.saturating_sub(1)) / 2) % 2 == 1
}

pub fn zigzag_case(rng: &mut ChaCha8Rng, n: usize) -> Check {
    let c = random_cycle(rng, n);
    let (cs, idem) = (CubicalStructure::new(n), GoodIdempotents::standard(n));
    let closed = lift(phi_hh_closed(&c, &cs, &idem))?;
    let zig = lift(phi_hh_zigzag(&c, &cs, &idem))?;
    ensure(closed == zig, || format!("n={n}: closed {closed} vs zigzag {zig}"))
}

pub fn phi_c_case(rng: &mut ChaCha8Rng, n: usize) -> Check {
    let c = random_chain(rng, n, n);
    let (cs, idem) = (CubicalStructure::new(n), GoodIdempotents::standard(n));
    let closed = lift(phi_hh_closed(&c, &cs, &idem))?;
    let via_psi = lift(phi_c(&c, &cs, &idem))?;
    ensure(via_psi == closed.clone().signed(sign_nn1(n)), || format!("n={n}: φ_C {via_psi} vs φ_HH {closed}"))
}

pub fn commutator_formula_case(rng: &mut ChaCha8Rng, n: usize) -> Check {
    let c = random_lie_chain(rng, n, n, true, |r| random_slot(r, n));
    let (cs, idem) = (CubicalStructure::new(n), GoodIdempotents::standard(n));
    let lhs = lift(commutator_formula(&c, &cs, &idem))?;
    let rhs = lift(phi_hh_closed(&lift(epsilon(&c))?, &cs, &idem))?;
    ensure(lhs == rhs, || format!("n={n}: commutator {lhs} vs φ_HH∘ε {rhs}"))
}

/// `τ[P^+ f_0, f_1]` for multiplication operators.
pub fn lam1_value(f0: &LaurentPoly, f1: &LaurentPoly) -> crate::Result<Scalar> {
    let p = projector(1, 0, Sign::Plus);
    p.compose(&mul_op(f0)).try_commutator(&mul_op(f1))?.tate_trace()
}

pub fn prop_lam1(rng: &mut ChaCha8Rng) -> Check {
    let f0 = random_laurent(rng, 1, 3, -3, 3);
    let f1 = random_laurent(rng, 1, 3, -3, 3);
    let mut c = LieChain::zero(1, 1, Field::Rational, true);
    lift(c.add_wedge(&Scalar::one(), Some(&mul_op(&f0)), &[mul_op(&f1)]))?;
    let (cs, idem) = (CubicalStructure::new(1), GoodIdempotents::standard(1));
    let lhs = lift(commutator_formula(&c, &cs, &idem))?;
    let rhs = lift(lam1_value(&f0, &f1))?;
    ensure(lhs == rhs, || format!("commutator {lhs} vs τ[P^+f_0, f_1] {rhs}"))
}

pub fn residue_oracle_case(rng: &mut ChaCha8Rng, n: usize) -> Check {
    let f = random_laurent(rng, n, 4, -2, 1);
    let cs = CubicalStructure::new(n);
    let a = lift(residue_form(&DifferentialForm::top(f.clone()), &cs))?;
    let b = lift(residue_coeff_oracle(&f, n))?;
    ensure(a == b, || format!("residue_form {a} vs coefficient {b}"))
}

/// A random `(n+1) x n` exponent matrix, with zero column sums when `balanced`.
pub fn random_exponent_matrix<R: Rng>(rng: &mut R, n: usize, balanced: bool) -> Vec<Vec<i64>> {
    loop {
        let mut c: Vec<Vec<i64>> = (0..=n).map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect()).collect();
        if balanced {
            for j in 0..n {
                let s: i64 = c[1..].iter().map(|r| r[j]).sum();
                c[0][j] = -s;
            }
            if c[0].iter().all(|v| (-2..=2).contains(v)) {
                return c;
            }
        } else if (0..n).any(|j| c.iter().map(|r| r[j]).sum::<i64>() != 0) {
            return c;
        }
    }
}

pub fn monomial_det_case(rng: &mut ChaCha8Rng, n: usize) -> Check {
    let balanced = rng.gen_bool(0.5);
    let c = random_exponent_matrix(rng, n, balanced);
    let beta = Scalar::Rational(random_rational(rng));
    let form = lift(monomial_form(&c, &beta, &Field::Rational))?;
    let a = lift(residue_form(&form, &CubicalStructure::new(n)))?;
    let b = lift(residue_monomial_det(&c, &beta, &Field::Rational))?;
    ensure(a == b, || format!("{c:?}: residue_form {a} vs det law {b}"))
}

pub fn prop_derivation_laws(rng: &mut ChaCha8Rng) -> Check {
    let f = random_laurent(rng, 1, 3, -3, 3);
    let g = random_laurent(rng, 1, 3, -3, 3);
    let cs = CubicalStructure::new(1);
    let one = LaurentPoly::one(1, Field::Rational);
    let exact = lift(residue_form(&lift(DifferentialForm::new(one, vec![f.clone()]))?, &cs))?;
    ensure(exact == Rational::from_integer(0.into()), || "res(df) != 0".into())?;
    let fdg = lift(residue_form(&lift(DifferentialForm::new(f.clone(), vec![g.clone()]))?, &cs))?;
    let gdf = lift(residue_form(&lift(DifferentialForm::new(g, vec![f]))?, &cs))?;
    ensure(fdg == -gdf, || "res(f dg) != -res(g df)".into())
}

pub fn idempotent_invariance_case(rng: &mut ChaCha8Rng, n: usize) -> Check {
    let c = random_cycle(rng, n);
    let cs = CubicalStructure::new(n);
    let base = lift(phi_hh_closed(&c, &cs, &GoodIdempotents::standard(n)))?;
    for axis in 0..n {
        for m in -3..=3 {
            let idem = GoodIdempotents::standard(n).shifted(axis, m);
            let v = lift(phi_hh_closed(&c, &cs, &idem))?;
            ensure(v == base, || format!("axis {} offset {m}: {v} vs {base}", axis + 1))?;
        }
    }
    Ok(())
}

/// `ε(f_0 ⊗ f_1 ∧ ... ∧ f_n)` over commuting multiplication operators.
///
/// For `n >= 2` the coefficient slot is the unit. Then `(1 - t)z` is the
/// Connes boundary `B` of a cycle, hence itself a Hochschild cycle; for
/// `n = 1` every such `z` has this property.
pub fn random_commuting_cycle<R: Rng>(rng: &mut R, n: usize) -> HochschildChain {
    let mut c = LieChain::zero(n, n, Field::Rational, true);
    for _ in 0..rng.gen_range(1..=2) {
        let m = if n == 1 { mul_op(&random_laurent(rng, n, 2, -3, 3)) } else { WindowedOperator::identity(n) };
        let slots: Vec<_> = (0..n).map(|_| mul_op(&random_laurent(rng, n, 2, -3, 3))).collect();
        c.add_wedge(&Scalar::Rational(random_rational(rng)), Some(&m), &slots).expect("generated wedge");
    }
    epsilon(&c).expect("coefficient chain")
}

pub fn cyclic_vanishing_case(rng: &mut ChaCha8Rng, n: usize) -> Check {
    let z = random_commuting_cycle(rng, n);
    ensure(lift(hochschild_b(&z))?.is_zero(), || "ε-image is not a cycle".into())?;
    let w = &z - &cyclic_t(&z);
    ensure(lift(hochschild_b(&w))?.is_zero(), || "(1-t)z is not a cycle".into())?;
    let (cs, idem) = (CubicalStructure::new(n), GoodIdempotents::standard(n));
    let v = lift(phi_hh_closed(&w, &cs, &idem))?;
    ensure(v.is_zero(), || format!("φ_HH((1-t)z) = {v}"))
}

pub fn prop_extension_residue(rng: &mut ChaCha8Rng) -> Check {
    let c = rng.gen_range(1..=5i64);
    let ext = lift(ExtensionField::new(UPoly::from_i64(&[c, 0, 1]), "x").map_err(Into::into))?;
    let field = Field::Extension(ext.clone());
    let a = Scalar::Rational(random_rational(rng));
    let b = Scalar::Rational(random_rational(rng));
    let beta = &a + &(&b * &ext.generator());
    let i = rng.gen_range(-3..=3i64);
    let mono = |k: Scalar, e: i64| LaurentPoly::monomial(1, field.clone(), k, MultiIndex(vec![e]));
    let w = lift(DifferentialForm::new(mono(beta, i), vec![mono(Scalar::one(), 1)]))?;
    let v = lift(residue_form(&w, &CubicalStructure::new(1)))?;
    let expected = if i == -1 {
        (&a * &Scalar::from(2)).as_rational().cloned().unwrap()
    } else {
        Rational::from_integer(0.into())
    };
    ensure(v == expected, || format!("Tr residue {v} vs {expected}"))
}

pub fn prop_global_sum(rng: &mut ChaCha8Rng) -> Check {
    let quadratic = rng.gen_bool(0.4);
    let r = random_rational_function(rng, quadratic);
    let (sum, _) = lift(global_residue_sum(&r))?;
    ensure(sum == Rational::from_integer(0.into()), || format!("{r}: residue sum {sum}"))
}

pub fn prop_nodal(rng: &mut ChaCha8Rng) -> Check {
    let order = rng.gen_range(4..=16);
    ensure(nodal_factorization_check(order), || format!("factorization fails at order {order}"))?;
    let k = rng.gen_range(4..=8i64);
    let bump = LaurentPoly::monomial(2, Field::Rational, Scalar::one(), MultiIndex(vec![k, 0]));
    let detected = !lift(nodal_check_against(&(&nodal_cubic() + &bump), order))?;
    ensure(detected == (k < order), || format!("perturbation s^{k} at order {order}: detected = {detected}"))
}

pub fn prop_coordinate_invariance(rng: &mut ChaCha8Rng) -> Check {
    let f = random_laurent(rng, 1, 4, -4, 4);
    let order = invariance_order(&f);
    ensure(lift(coordinate_invariance_check_1d(&f, order))?, || format!("{f}: residue changes under t -> t+t^2"))
}

pub fn prop_series_laws(rng: &mut ChaCha8Rng) -> Check {
    let order = rng.gen_range(1..=10);
    let (a, b) = (random_rational(rng), random_rational(rng));
    let prod = lift(binomial_series(&a, order).try_mul(&binomial_series(&b, order)))?;
    ensure(prod.agrees_with(&binomial_series(&(&a + &b), order)), || "binomial law".into())?;
    let f = random_laurent(rng, 1, 3, -3, 3);
    let g = random_laurent(rng, 1, 3, -3, 3);
    let t = |e: i64| LaurentPoly::monomial(1, Field::Rational, Scalar::one(), MultiIndex(vec![e]));
    let u = TruncatedSeries::from_poly(&(&(&t(1) + &t(2)) - &t(3).scale(&Scalar::rational(1, 2))), 12);
    let target = 2;
    let fg = lift(substitute_1d(&(&f * &g), &u, target))?;
    let prod = lift(lift(substitute_1d(&f, &u, target))?.try_mul(&lift(substitute_1d(&g, &u, target))?))?;
    ensure(fg.agrees_with(&prod), || "substitution not multiplicative".into())
}

macro_rules! random_dimension {
    ($($prop:ident => $case:ident,)*) => {
        $(
            #[doc = concat!("[`", stringify!($case), "`] in a random dimension `n` in 1..=2.")]
            pub fn $prop(rng: &mut ChaCha8Rng) -> Check {
                let n = pick_dim(rng);
                $case(rng, n)
            }
        )*
    };
}

random_dimension! {
    prop_ideals => ideals_case,
    prop_normal_form => normal_form_case,
    prop_trace_t1 => trace_t1_case,
    prop_trace_t2_t4 => trace_t2_t4_case,
    prop_trace_t3 => trace_t3_case,
    prop_trace_t5 => trace_t5_case,
    prop_b_squared => b_squared_case,
    prop_ce_squared => ce_squared_case,
    prop_partial_squared => partial_squared_case,
    prop_h_squared => h_squared_case,
    prop_homotopy => homotopy_case,
    prop_epsilon_chain_map => epsilon_chain_map_case,
    prop_zigzag => zigzag_case,
    prop_phi_c => phi_c_case,
    prop_commutator_formula => commutator_formula_case,
    prop_residue_oracle => residue_oracle_case,
    prop_monomial_det => monomial_det_case,
    prop_idempotent_invariance => idempotent_invariance_case,
    prop_cyclic_vanishing => cyclic_vanishing_case,
}

// ---------------------------------------------------------------- suites

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Axioms,
    Compare,
    Global,
    Nodal,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Axioms => "axioms",
            Suite::Compare => "compare",
            Suite::Global => "global",
            Suite::Nodal => "nodal",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "all" => Ok(Suite::All),
            "axioms" => Ok(Suite::Axioms),
            "compare" => Ok(Suite::Compare),
            "global" => Ok(Suite::Global),
            "nodal" => Ok(Suite::Nodal),
            _ => Err(format!("unknown suite '{s}' (expected all, axioms, compare, global or nodal)")),
        }
    }
}

pub type PropertyFn = fn(&mut ChaCha8Rng) -> Check;

pub fn properties(suite: Suite) -> Vec<(&'static str, PropertyFn)> {
    let axioms: Vec<(&'static str, PropertyFn)> = vec![
        ("ideals", prop_ideals),
        ("normal_form", prop_normal_form),
        ("trace_t1", prop_trace_t1),
        ("trace_t2_t4", prop_trace_t2_t4),
        ("trace_t3", prop_trace_t3),
        ("trace_t5", prop_trace_t5),
        ("b_squared", prop_b_squared),
        ("ce_squared", prop_ce_squared),
        ("partial_squared", prop_partial_squared),
        ("h_squared", prop_h_squared),
        ("homotopy", prop_homotopy),
        ("epsilon_chain_map", prop_epsilon_chain_map),
    ];
    let compare: Vec<(&'static str, PropertyFn)> = vec![
        ("zigzag", prop_zigzag),
        ("phi_c", prop_phi_c),
        ("commutator_formula", prop_commutator_formula),
        ("lam1", prop_lam1),
        ("residue_oracle", prop_residue_oracle),
        ("monomial_det", prop_monomial_det),
        ("derivation_laws", prop_derivation_laws),
        ("idempotent_invariance", prop_idempotent_invariance),
        ("cyclic_vanishing", prop_cyclic_vanishing),
        ("extension_residue", prop_extension_residue),
    ];
    let global: Vec<(&'static str, PropertyFn)> = vec![("global_sum", prop_global_sum)];
    let nodal: Vec<(&'static str, PropertyFn)> = vec![
        ("nodal", prop_nodal),
        ("coordinate_invariance", prop_coordinate_invariance),
        ("series_laws", prop_series_laws),
    ];
    match suite {
        Suite::Axioms => axioms,
        Suite::Compare => compare,
        Suite::Global => global,
        Suite::Nodal => nodal,
        Suite::All => [axioms, compare, global, nodal].concat(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs `check` on `cases` seeded cases, returning the failure messages in
/// case order.
pub fn run_property(name: &str, check: PropertyFn, cases: usize, seed: u64, parallel: bool) -> Vec<String> {
    let run = |i: usize| {
        let mut rng = case_rng(seed, i as u64);
        check(&mut rng).err().map(|e| format!("{name}#{i}: {e}"))
    };
    let results = if parallel { par_map_indexed(cases, run) } else { crate::parallel::seq_map_indexed(cases, run) };
    results.into_iter().flatten().collect()
}

fn run_suite_with(suite: Suite, cases: usize, seed: u64, parallel: bool) -> SuiteReport {
    let props = properties(suite);
    let total = props.len() * cases;
    let run = |k: usize| {
        let (name, check) = props[k / cases];
        let i = k % cases;
        let mut rng = case_rng(seed.wrapping_add((k / cases) as u64), i as u64);
        check(&mut rng).err().map(|e| format!("{name}#{i}: {e}"))
    };
    let results = if parallel { par_map_indexed(total, run) } else { crate::parallel::seq_map_indexed(total, run) };
    SuiteReport { suite: suite.name().to_string(), cases: total, failures: results.into_iter().flatten().collect() }
}

/// Runs every property of `suite` on `cases` cases each, fanning out over
/// the thread pool when the `parallel` feature is enabled.
pub fn run_suite(suite: Suite, cases: usize, seed: u64) -> SuiteReport {
    run_suite_with(suite, cases, seed, true)
}

/// Same as [`run_suite`], on the calling thread.
pub fn run_suite_sequential(suite: Suite, cases: usize, seed: u64) -> SuiteReport {
    run_suite_with(suite, cases, seed, false)
}
