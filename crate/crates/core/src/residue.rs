//! Residue symbols of differential forms, with the classical one-variable
//! checks (the residue theorem on the projective line and invariance under a
//! change of coordinate). The nodal-cubic series factorization lives here too.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{check_dim, Error, Result};
use crate::homology::{permutations, phi_hh_closed, CubicalStructure, GoodIdempotents};
use crate::laurent::{
    binomial_series, hkr_antisymmetrize, substitute_1d, DifferentialForm, LaurentPoly, MultiIndex, TruncatedSeries,
};
use crate::scalar::{ExtensionField, Field, Rational, Scalar};
use crate::upoly::UPoly;

/// `Tr_{k_j/Q} ∘ φ_HH ∘ HKR` on `ω = f_0 df_1 ∧ ... ∧ df_n`.
pub fn residue_form(form: &DifferentialForm, structure: &CubicalStructure) -> Result<Rational> {
    check_dim(structure.dim(), form.dim())?;
    let chain = hkr_antisymmetrize(form);
    let value = phi_hh_closed(&chain, structure, &GoodIdempotents::standard(form.dim()))?;
    Ok(form.field().trace(&value)?)
}

/// `Tr(f_{-1,...,-1})`: the residue of `f dt_1 ∧ ... ∧ dt_n` read off directly.
pub fn residue_coeff_oracle(f: &LaurentPoly, n: usize) -> Result<Rational> {
    check_dim(n, f.dim())?;
    let c = f.coeff(&MultiIndex(vec![-1; n]));
    Ok(f.field().trace(&c)?)
}

/// `Tr(β) det(c_{i,j})_{1<=i,j<=n}` when every column of the `(n+1) x n`
/// exponent matrix sums to zero, and `0` otherwise.
pub fn residue_monomial_det(c: &[Vec<i64>], beta: &Scalar, field: &Field) -> Result<Rational> {
    let n = c.first().map_or(0, Vec::len);
    check_dim(n + 1, c.len())?;
    for row in c {
        check_dim(n, row.len())?;
    }
    if (0..n).any(|j| c.iter().map(|row| row[j]).sum::<i64>() != 0) {
        return Ok(Rational::zero());
    }
    let mut det = BigInt::zero();
    for (perm, odd) in permutations(n) {
        let prod: BigInt = (0..n).map(|i| BigInt::from(c[i + 1][perm[i]])).product();
        if odd {
            det -= prod;
        } else {
            det += prod;
        }
    }
    Ok(field.trace(beta)? * Rational::from_integer(det))
}

/// The monomial form `β t^{c_0} d(t^{c_1}) ∧ ... ∧ d(t^{c_n})`.
pub fn monomial_form(c: &[Vec<i64>], beta: &Scalar, field: &Field) -> Result<DifferentialForm> {
    let n = c.first().map_or(0, Vec::len);
    check_dim(n + 1, c.len())?;
    let mono = |row: &Vec<i64>, k: Scalar| LaurentPoly::monomial(n, field.clone(), k, MultiIndex(row.clone()));
    let f0 = mono(&c[0], beta.clone());
    let args = c[1..].iter().map(|row| mono(row, Scalar::one())).collect();
    DifferentialForm::new(f0, args)
}

/// A reduced quotient of polynomials over `Q` with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    num: UPoly,
    den: UPoly,
}

impl RationalFunction {
    pub fn new(num: UPoly, den: UPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(crate::scalar::ScalarError::DivisionByZero.into());
        }
        let g = num.gcd(&den);
        let (mut num, mut den) =
            if g.degree().unwrap_or(0) > 0 { (num.div_rem(&g).0, den.div_rem(&g).0) } else { (num, den) };
        let lead = den.leading().expect("nonzero denominator").clone();
        if !lead.is_one() {
            let inv = lead.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(Self { num, den })
    }

    pub fn numerator(&self) -> &UPoly {
        &self.num
    }

    pub fn denominator(&self) -> &UPoly {
        &self.den
    }

    /// The finite places where `r` may have poles (irreducible factors of the
    /// denominator), followed by infinity.
    pub fn places(&self) -> Result<Vec<Place>> {
        let mut out: Vec<Place> = factor(&self.den)?.into_iter().map(|(p, _)| Place::Finite(p)).collect();
        out.push(Place::Infinity);
        Ok(out)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num.render("t"), self.den.render("t"))
    }
}

/// A closed point of the projective line over `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Place {
    /// Zero set of a monic irreducible polynomial of degree at most four.
    Finite(UPoly),
    Infinity,
}

impl Place {
    /// A finite place, after checking irreducibility by trial factoring.
    pub fn finite(p: &UPoly) -> Result<Place> {
        let p = p.monic();
        match factor(&p)?.as_slice() {
            [(q, 1)] if *q == p => Ok(Place::Finite(p)),
            _ => Err(Error::InvalidArgument(format!("{} is not irreducible", p.render("t")))),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(p) => p.degree().unwrap_or(0),
            Place::Infinity => 1,
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => f.write_str(&p.render("t")),
            Place::Infinity => f.write_str("inf"),
        }
    }
}

const MAX_PLACE_DEGREE: usize = 4;

/// Positive divisors of a nonzero integer of moderate size.
fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > 1_000_000_000_000 {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(BigInt::from(d));
            if d * d != n {
                large.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small)
}

fn integer_poly(p: &UPoly) -> UPoly {
    UPoly::new(p.primitive_integer().into_iter().map(Rational::from_integer).collect())
}

fn rational_root(p: &UPoly) -> Option<Rational> {
    let z = p.primitive_integer();
    if z[0].is_zero() {
        return Some(Rational::zero());
    }
    let lead = z.last()?.clone();
    let (ps, qs) = (divisors(&z[0])?, divisors(&lead)?);
    for a in &ps {
        for b in &qs {
            for cand in [Rational::new(a.clone(), b.clone()), -Rational::new(a.clone(), b.clone())] {
                if p.eval(&cand).is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

/// A monic factor of degree `d` with integer values, searched by Kronecker's
/// method: interpolate every divisor pattern at `d + 1` integer points.
fn kronecker_factor(p: &UPoly, d: usize) -> Option<UPoly> {
    let z = integer_poly(p);
    let mut points: Vec<(i64, BigInt)> = (-8i64..=8)
        .filter_map(|x| {
            let v = z.eval(&Rational::from_integer(x.into()));
            (!v.is_zero()).then(|| (x, v.to_integer()))
        })
        .collect();
    points.sort_by(|a, b| a.1.abs().cmp(&b.1.abs()).then(a.0.abs().cmp(&b.0.abs())));
    points.truncate(d + 1);
    if points.len() < d + 1 {
        return None;
    }
    let xs: Vec<Rational> = points.iter().map(|(x, _)| Rational::from_integer((*x).into())).collect();
    let basis: Vec<UPoly> = (0..=d)
        .map(|i| {
            let mut b = UPoly::one();
            for j in 0..=d {
                if j != i {
                    let lin = UPoly::linear_root(xs[j].clone());
                    b = &b * &lin.scale(&(&xs[i] - &xs[j]).recip());
                }
            }
            b
        })
        .collect();
    let choices: Vec<Vec<BigInt>> = points
        .iter()
        .enumerate()
        .map(|(i, (_, v))| {
            let ds = divisors(v)?;
            Some(if i == 0 { ds } else { ds.iter().flat_map(|x| [x.clone(), -x.clone()]).collect() })
        })
        .collect::<Option<_>>()?;
    let mut idx = vec![0usize; d + 1];
    loop {
        let mut g = UPoly::zero();
        for i in 0..=d {
            g = &g + &basis[i].scale(&Rational::from_integer(choices[i][idx[i]].clone()));
        }
        if g.degree() == Some(d) && g.coeffs().iter().all(|c| c.is_integer()) && z.rem(&g).is_zero() {
            return Some(g.monic());
        }
        let mut k = 0;
        loop {
            if k > d {
                return None;
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Factors a nonzero polynomial into monic irreducibles of degree at most
/// four, with multiplicities.
pub fn factor(p: &UPoly) -> Result<Vec<(UPoly, usize)>> {
    if p.is_zero() {
        return Err(Error::InvalidArgument("cannot factor the zero polynomial".into()));
    }
    let mut rest = p.monic();
    let mut out: Vec<(UPoly, usize)> = Vec::new();
    let mut push = |rest: &mut UPoly, g: UPoly| {
        let mut k = 0;
        while rest.rem(&g).is_zero() && rest.degree().unwrap_or(0) > 0 {
            *rest = rest.div_rem(&g).0;
            k += 1;
        }
        out.push((g, k));
    };
    while rest.degree().unwrap_or(0) > 0 {
        if let Some(r) = rational_root(&rest) {
            push(&mut rest, UPoly::linear_root(r));
            continue;
        }
        let deg = rest.degree().unwrap();
        if deg <= 3 {
            let g = rest.clone();
            push(&mut rest, g);
            continue;
        }
        let found = (2..=MAX_PLACE_DEGREE.min(deg / 2)).find_map(|d| kronecker_factor(&rest, d));
        match found {
            Some(g) => push(&mut rest, g),
            None if deg <= MAX_PLACE_DEGREE => {
                let g = rest.clone();
                push(&mut rest, g)
            }
            None => {
                return Err(Error::UnsupportedFactorization(format!(
                    "{} has no factor of degree at most {MAX_PLACE_DEGREE}",
                    rest.render("t")
                )))
            }
        }
    }
    out.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| a.0.render("t").cmp(&b.0.render("t"))));
    Ok(out)
}

fn upoly_in(p: &UPoly, field: &Field) -> LaurentPoly {
    let terms = p.coeffs().iter().enumerate().map(|(k, c)| (MultiIndex(vec![k as i64]), Scalar::Rational(c.clone())));
    LaurentPoly::from_terms(1, field.clone(), terms).expect("univariate")
}

/// `p(u + alpha)` as a polynomial in `u`.
fn taylor_shift(p: &UPoly, alpha: &Scalar, field: &Field) -> LaurentPoly {
    let lin = &LaurentPoly::var(1, 0) + &LaurentPoly::monomial(1, field.clone(), alpha.clone(), MultiIndex(vec![0]));
    let mut acc = LaurentPoly::zero(1, field.clone());
    for c in p.coeffs().iter().rev() {
        acc =
            &(&acc * &lin) + &LaurentPoly::monomial(1, field.clone(), Scalar::Rational(c.clone()), MultiIndex(vec![0]));
    }
    acc
}

/// `num / den` expanded at `u = 0`, exact below degree `order`.
fn quotient_series(num: &LaurentPoly, den: &LaurentPoly, order: i64) -> Result<TruncatedSeries> {
    let m = den.min_exponent(0).expect("nonzero denominator");
    let shift = LaurentPoly::monomial(1, den.field().clone(), Scalar::one(), MultiIndex(vec![-m]));
    let unit = &(den * &shift);
    let lead = num.min_exponent(0).unwrap_or(0).min(0);
    let work = order.max(1) + m - lead;
    let inv = TruncatedSeries::from_poly(unit, work.max(1)).inverse_unit()?;
    let series = TruncatedSeries::from_poly(num, work.max(1)).try_mul(&inv)?.shift(&MultiIndex(vec![-m]));
    Ok(series.truncate(order))
}

/// Laurent expansion of `r` at `place` in the local parameter (`t - alpha`,
/// or `1/t` at infinity), exact below `u^order`. At a place of degree `d > 1`
/// the expansion is over `Q[x]/(p)` around the class of `x`.
pub fn expand_at_place(r: &RationalFunction, place: &Place, order: i64) -> Result<(Field, TruncatedSeries)> {
    if order < 0 {
        return Err(Error::PrecisionError(format!("order {order} does not expose the principal part")));
    }
    match place {
        Place::Finite(p) => {
            let (field, alpha) = match p.degree() {
                Some(1) => (Field::Rational, Scalar::Rational(-p.coeff(0))),
                Some(_) => {
                    let ext = ExtensionField::new(p.clone(), "x")?;
                    (Field::Extension(ext.clone()), ext.generator())
                }
                None => return Err(Error::InvalidArgument("constant place".into())),
            };
            let num = taylor_shift(&r.num, &alpha, &field);
            let den = taylor_shift(&r.den, &alpha, &field);
            Ok((field, quotient_series(&num, &den, order)?))
        }
        Place::Infinity => {
            let rev = |q: &UPoly| UPoly::new(q.coeffs().iter().rev().cloned().collect());
            let dn = r.num.degree().map_or(0, |d| d as i64);
            let dd = r.den.degree().unwrap_or(0) as i64;
            let num = upoly_in(&rev(&r.num), &Field::Rational);
            let den = upoly_in(&rev(&r.den), &Field::Rational);
            let num = &num * &LaurentPoly::monomial(1, Field::Rational, Scalar::one(), MultiIndex(vec![dd - dn]));
            Ok((Field::Rational, quotient_series(&num, &den, order)?))
        }
    }
}

/// `Tr_{κ(x)/Q} a_{-1}` of `r dt` at `place`.
pub fn local_residue(r: &RationalFunction, place: &Place) -> Result<Rational> {
    match place {
        Place::Finite(_) => {
            let (field, s) = expand_at_place(r, place, 0)?;
            Ok(field.trace(&s.coeff(&MultiIndex(vec![-1]))?)?)
        }
        Place::Infinity => {
            // r dt = -u^{-2} r(1/u) du
            let (_, s) = expand_at_place(r, place, 2)?;
            let c = s.coeff(&MultiIndex(vec![1]))?;
            Ok(-c.as_rational().expect("rational expansion").clone())
        }
    }
}

/// Sum of the residues of `r dt` over the poles of `r` and infinity, with
/// the per-place values.
pub fn global_residue_sum(r: &RationalFunction) -> Result<(Rational, Vec<(Place, Rational)>)> {
    let mut per_place = Vec::new();
    let mut sum = Rational::zero();
    for place in r.places()? {
        let v = local_residue(r, &place)?;
        sum += &v;
        per_place.push((place, v));
    }
    Ok((sum, per_place))
}

/// Checks `(w + t)(w - t) = target` with `w = s sqrt(1 + s)` in `k[[s, t]]`
/// modulo total degree `order` (axis 0 is `s`, axis 1 is `t`).
pub fn nodal_check_against(target: &LaurentPoly, order: i64) -> Result<bool> {
    check_dim(2, target.dim())?;
    let sqrt = binomial_series(&Rational::new(1.into(), 2.into()), order);
    let w = sqrt.embed(2, 0).shift(&MultiIndex(vec![1, 0]));
    let t = TruncatedSeries::from_poly(&LaurentPoly::var(2, 1), order + 1);
    let lhs = w.try_add(&t)?.try_mul(&w.try_sub(&t)?)?.truncate(order);
    if lhs.order() < order {
        return Err(Error::PrecisionError(format!("product certified only below degree {}", lhs.order())));
    }
    Ok(lhs.agrees_with(&TruncatedSeries::from_poly(target, order)))
}

/// `(s sqrt(1+s) + t)(s sqrt(1+s) - t) = s^3 + s^2 - t^2` to total degree `order`.
pub fn nodal_factorization_check(order: i64) -> bool {
    nodal_check_against(&nodal_cubic(), order).unwrap_or(false)
}

/// `s^3 + s^2 - t^2`.
pub fn nodal_cubic() -> LaurentPoly {
    let f = Field::Rational;
    let terms =
        [(vec![3, 0], 1), (vec![2, 0], 1), (vec![0, 2], -1)].into_iter().map(|(e, c)| (MultiIndex(e), Scalar::from(c)));
    LaurentPoly::from_terms(2, f, terms).expect("two variables")
}

/// Smallest truncation order for which `coordinate_invariance_check_1d`
/// certifies the `t^{-1}` coefficient: `max(M - m + 2, 1 - m)` for exponents
/// in `[m, M]`.
pub fn invariance_order(f: &LaurentPoly) -> i64 {
    match (f.min_exponent(0), f.max_exponent(0)) {
        (Some(m), Some(mx)) => (mx - m + 2).max(1 - m),
        _ => 2,
    }
}

/// Compares `res f(t) dt` with `res f(u) u'(t) dt` for `u = t + t^2`, the
/// right side computed by series substitution to order `order`.
pub fn coordinate_invariance_check_1d(f: &LaurentPoly, order: i64) -> Result<bool> {
    check_dim(1, f.dim())?;
    let lhs = f.coeff(&MultiIndex(vec![-1]));
    let field = f.field().clone();
    let t = |e: i64| LaurentPoly::monomial(1, field.clone(), Scalar::one(), MultiIndex(vec![e]));
    let u = TruncatedSeries::from_poly(&(&t(1) + &t(2)), order);
    let du = &t(0) + &t(1).scale(&Scalar::from(2));
    let fu = substitute_1d(f, &u, 0)?;
    let rhs = fu.try_mul(&TruncatedSeries::from_poly(&du, order))?.coeff(&MultiIndex(vec![-1]))?;
    Ok(lhs == rhs)
}
