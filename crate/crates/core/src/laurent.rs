//! Finite multi-Laurent polynomials, truncated series and differential forms.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{check_dim, Error, Result};
use crate::homology::{permutations, HochschildChain};
use crate::operator::mul_op;
use crate::scalar::{Field, Rational, Scalar};

/// Exponent vector `(a_1, ..., a_n)` of the monomial `t_1^{a_1} ... t_n^{a_n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub Vec<i64>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn unit(n: usize, axis: usize) -> Self {
        let mut v = vec![0; n];
        v[axis] = 1;
        MultiIndex(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> MultiIndex {
        MultiIndex(self.0.iter().map(|a| -a).collect())
    }
}

impl From<Vec<i64>> for MultiIndex {
    fn from(v: Vec<i64>) -> Self {
        MultiIndex(v)
    }
}

/// A finite sum `sum c_a t^a` over a scalar field, `n` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    dim: usize,
    field: Field,
    terms: BTreeMap<MultiIndex, Scalar>,
}

impl LaurentPoly {
    pub fn zero(dim: usize, field: Field) -> Self {
        Self { dim, field, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize, field: Field) -> Self {
        Self::monomial(dim, field, Scalar::one(), MultiIndex::zero(dim))
    }

    /// `c * t^exp`; the field descriptor is widened to contain `c`.
    pub fn monomial(dim: usize, field: Field, c: Scalar, exp: MultiIndex) -> Self {
        assert_eq!(exp.dim(), dim, "exponent length must equal the dimension");
        let field = field.join(&c.field()).expect("coefficient outside the declared field");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self { dim, field, terms }
    }

    /// The coordinate `t_{axis+1}`.
    pub fn var(dim: usize, axis: usize) -> Self {
        Self::monomial(dim, Field::Rational, Scalar::one(), MultiIndex::unit(dim, axis))
    }

    pub fn from_terms(dim: usize, field: Field, terms: impl IntoIterator<Item = (MultiIndex, Scalar)>) -> Result<Self> {
        let mut out = Self::zero(dim, field);
        for (e, c) in terms {
            check_dim(dim, e.dim())?;
            out.field = out.field.join(&c.field())?;
            out.add_term(e, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, e: MultiIndex, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &MultiIndex) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Smallest exponent of `t_{axis+1}` in the support.
    pub fn min_exponent(&self, axis: usize) -> Option<i64> {
        self.terms.keys().map(|e| e.0[axis]).min()
    }

    pub fn max_exponent(&self, axis: usize) -> Option<i64> {
        self.terms.keys().map(|e| e.0[axis]).max()
    }

    fn compatible(&self, other: &LaurentPoly) -> Result<Field> {
        check_dim(self.dim, other.dim)?;
        Ok(self.field.join(&other.field)?)
    }

    pub fn try_add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        let field = self.compatible(other)?;
        let mut out = self.clone();
        out.field = field;
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.try_add(&other.scale(&Scalar::from(-1)))
    }

    pub fn try_mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        let field = self.compatible(other)?;
        let mut out = LaurentPoly::zero(self.dim, field);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.add(eb), ca.try_mul(cb)?);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: &Scalar) -> LaurentPoly {
        let field = self.field.join(&k.field()).expect("scale factor outside the field");
        let mut out = LaurentPoly::zero(self.dim, field);
        if k.is_zero() {
            return out;
        }
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * k);
        }
        out
    }

    pub fn pow(&self, k: u32) -> LaurentPoly {
        let mut acc = LaurentPoly::one(self.dim, self.field.clone());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Grammar-compatible rendering, e.g. `3/2*t1^-2*t2^3 + (1+x)*t2`.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = match c {
                Scalar::Rational(q) if q < &Rational::zero() => (true, Scalar::Rational(-q)),
                _ => (false, c.clone()),
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match &mag {
                Scalar::Rational(q) => out.push_str(&q.to_string()),
                Scalar::Ext(_) => out.push_str(&format!("({})", mag.render())),
            }
            for (axis, &a) in e.0.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let name = if self.dim == 1 { "t".to_string() } else { format!("t{}", axis + 1) };
                if a == 1 {
                    out.push_str(&format!("*{name}"));
                } else {
                    out.push_str(&format!("*{name}^{a}"));
                }
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl std::ops::Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_add(rhs).expect("incompatible Laurent polynomials")
    }
}

impl std::ops::Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_sub(rhs).expect("incompatible Laurent polynomials")
    }
}

impl std::ops::Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_mul(rhs).expect("incompatible Laurent polynomials")
    }
}

/// `f_0 df_1 ^ ... ^ df_n` with Laurent polynomial entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialForm {
    dim: usize,
    field: Field,
    coefficient: LaurentPoly,
    args: Vec<LaurentPoly>,
}

impl DifferentialForm {
    pub fn new(coefficient: LaurentPoly, args: Vec<LaurentPoly>) -> Result<Self> {
        let dim = coefficient.dim();
        check_dim(dim, args.len())?;
        let mut field = coefficient.field().clone();
        for a in &args {
            check_dim(dim, a.dim())?;
            field = field.join(a.field())?;
        }
        Ok(Self { dim, field, coefficient, args })
    }

    /// `f dt_1 ^ ... ^ dt_n`.
    pub fn top(f: LaurentPoly) -> Self {
        let dim = f.dim();
        let args = (0..dim).map(|i| LaurentPoly::var(dim, i)).collect();
        Self::new(f, args).expect("coordinate form is well formed")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coefficient(&self) -> &LaurentPoly {
        &self.coefficient
    }

    pub fn args(&self) -> &[LaurentPoly] {
        &self.args
    }

    /// Replaces the field descriptor by a compatible larger one.
    pub fn with_field(mut self, field: Field) -> Result<Self> {
        self.field = self.field.join(&field)?;
        Ok(self)
    }
}

impl fmt::Display for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.coefficient)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(" ^")?;
            }
            write!(f, " d({a})")?;
        }
        Ok(())
    }
}

/// `sum_{pi in S_n} sgn(pi) f_0 (x) f_{pi^-1(1)} (x) ... (x) f_{pi^-1(n)}` over
/// multiplication operators.
pub fn hkr_antisymmetrize(form: &DifferentialForm) -> HochschildChain {
    let n = form.dim();
    let ops: Vec<_> = form.args().iter().map(mul_op).collect();
    let f0 = mul_op(form.coefficient());
    let mut chain = HochschildChain::zero(n, n, form.field().clone());
    for (perm, odd) in permutations(n) {
        let mut slots = Vec::with_capacity(n + 1);
        slots.push(f0.clone());
        slots.extend(perm.iter().map(|&i| ops[i].clone()));
        let sign = if odd { Scalar::from(-1) } else { Scalar::one() };
        chain.add_tensor(&sign, &slots);
    }
    chain
}

/// Series truncated by total degree: coefficients of total degree `< order`
/// are exact, everything at or above `order` is unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    dim: usize,
    field: Field,
    order: i64,
    terms: BTreeMap<MultiIndex, Scalar>,
}

/// Stand-in order for exactly known (polynomial) series.
const EXACT: i64 = i64::MAX / 4;

impl TruncatedSeries {
    pub fn zero(dim: usize, field: Field, order: i64) -> Self {
        Self { dim, field, order, terms: BTreeMap::new() }
    }

    /// Truncates an exact polynomial at total degree `order`.
    pub fn from_poly(p: &LaurentPoly, order: i64) -> Self {
        let mut s = Self::zero(p.dim(), p.field().clone(), order);
        for (e, c) in p.terms() {
            if e.total() < order {
                s.terms.insert(e.clone(), c.clone());
            }
        }
        s
    }

    pub(crate) fn exact(p: &LaurentPoly) -> Self {
        Self::from_poly(p, EXACT)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Certified precision in total degree.
    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Scalar)> {
        self.terms.iter()
    }

    /// Coefficient at `e`, or a precision error if it is not certified.
    pub fn coeff(&self, e: &MultiIndex) -> Result<Scalar> {
        if e.total() >= self.order {
            return Err(Error::PrecisionError(format!(
                "coefficient of total degree {} requested from a series known below degree {}",
                e.total(),
                self.order
            )));
        }
        Ok(self.terms.get(e).cloned().unwrap_or_else(Scalar::zero))
    }

    /// Smallest total degree in the support (the order if the support is empty).
    pub fn valuation(&self) -> i64 {
        self.terms.keys().map(MultiIndex::total).min().unwrap_or(self.order)
    }

    /// Drops everything at total degree `>= order`; `order` may only decrease.
    pub fn truncate(&self, order: i64) -> TruncatedSeries {
        let order = order.min(self.order);
        let terms = self.terms.iter().filter(|(e, _)| e.total() < order).map(|(e, c)| (e.clone(), c.clone())).collect();
        Self { dim: self.dim, field: self.field.clone(), order, terms }
    }

    fn insert(&mut self, e: MultiIndex, c: Scalar) {
        if c.is_zero() || e.total() >= self.order {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn try_add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        check_dim(self.dim, other.dim)?;
        let field = self.field.join(&other.field)?;
        let mut out = self.truncate(other.order);
        out.field = field;
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.try_add(&other.scale(&Scalar::from(-1)))
    }

    pub fn scale(&self, k: &Scalar) -> TruncatedSeries {
        let mut out = Self::zero(self.dim, self.field.join(&k.field()).expect("field"), self.order);
        for (e, c) in &self.terms {
            out.insert(e.clone(), c * k);
        }
        out
    }

    /// Product with certified order `min(o_a + v_b, o_b + v_a)`.
    pub fn try_mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        check_dim(self.dim, other.dim)?;
        let field = self.field.join(&other.field)?;
        let order =
            self.order.saturating_add(other.valuation()).min(other.order.saturating_add(self.valuation())).min(EXACT);
        let mut out = Self::zero(self.dim, field, order);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.add(eb);
                if e.total() < order {
                    out.insert(e, ca.try_mul(cb)?);
                }
            }
        }
        Ok(out)
    }

    /// Multiplies by the monomial `t^shift` (exact), shifting the order.
    pub fn shift(&self, shift: &MultiIndex) -> TruncatedSeries {
        let order = if self.order >= EXACT { EXACT } else { self.order + shift.total() };
        let terms = self.terms.iter().map(|(e, c)| (e.add(shift), c.clone())).collect();
        Self { dim: self.dim, field: self.field.clone(), order, terms }
    }

    /// Inverse of a one-variable unit series (nonzero constant term).
    pub fn inverse_unit(&self) -> Result<TruncatedSeries> {
        if self.dim != 1 {
            return Err(Error::InvalidArgument("unit inversion is one-variable only".into()));
        }
        if self.order >= EXACT {
            return Err(Error::PrecisionError("inverse of an exact series needs a target order".into()));
        }
        if self.valuation() < 0 {
            return Err(Error::ValuationError(format!("negative valuation {}", self.valuation())));
        }
        let c0 = self.coeff(&MultiIndex(vec![0]))?;
        if c0.is_zero() {
            return Err(Error::ValuationError("constant term vanishes".into()));
        }
        let inv0 = c0.inv()?;
        let n = self.order.max(0) as usize;
        let w: Vec<Scalar> = (0..n).map(|k| self.coeff(&MultiIndex(vec![k as i64])).unwrap()).collect();
        let mut v: Vec<Scalar> = Vec::with_capacity(n);
        for k in 0..n {
            if k == 0 {
                v.push(inv0.clone());
                continue;
            }
            let mut acc = Scalar::zero();
            for j in 1..=k {
                if !w[j].is_zero() && !v[k - j].is_zero() {
                    acc += &(&w[j] * &v[k - j]);
                }
            }
            v.push(-(&inv0 * &acc));
        }
        let mut out = Self::zero(1, self.field.clone(), self.order);
        for (k, c) in v.into_iter().enumerate() {
            out.insert(MultiIndex(vec![k as i64]), c);
        }
        Ok(out)
    }

    /// Lifts a one-variable series into `dim` variables along `axis`.
    pub fn embed(&self, dim: usize, axis: usize) -> TruncatedSeries {
        assert_eq!(self.dim, 1);
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut v = vec![0; dim];
                v[axis] = e.0[0];
                (MultiIndex(v), c.clone())
            })
            .collect();
        Self { dim, field: self.field.clone(), order: self.order, terms }
    }

    /// Whether two series agree on all coefficients both of them certify.
    pub fn agrees_with(&self, other: &TruncatedSeries) -> bool {
        let order = self.order.min(other.order);
        let a = self.truncate(order);
        let b = other.truncate(order);
        a.terms == b.terms
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = LaurentPoly { dim: self.dim, field: self.field.clone(), terms: self.terms.clone() };
        if self.order >= EXACT {
            write!(f, "{p}")
        } else {
            write!(f, "{p} + O(deg {})", self.order)
        }
    }
}

/// `sum_{k<order} C(alpha, k) s^k` with `C(alpha, k) = alpha (alpha-1) ... (alpha-k+1) / k!`.
pub fn binomial_series(alpha: &Rational, order: i64) -> TruncatedSeries {
    let mut out = TruncatedSeries::zero(1, Field::Rational, order);
    let mut c = Rational::one();
    for k in 0..order.max(0) {
        if k > 0 {
            c = c * (alpha - Rational::from_integer((k - 1).into())) / Rational::from_integer(k.into());
        }
        out.insert(MultiIndex(vec![k]), Scalar::Rational(c.clone()));
    }
    out
}

/// `f(u(t))` for a one-variable Laurent polynomial `f` and a series `u` of
/// valuation exactly one, certified modulo `t^order`.
///
/// Negative powers go through the exact inverse of the unit `u/t`. With `u`
/// known modulo `t^{o_u}`, the term `t^k` of `f` is known modulo
/// `t^{o_u - 1 + k}` (`k != 0`), so the result is certified to
/// `o_u - 1 + min_exponent(f)`. A request beyond that is a precision error.
pub fn substitute_1d(f: &LaurentPoly, u: &TruncatedSeries, order: i64) -> Result<TruncatedSeries> {
    check_dim(1, f.dim())?;
    check_dim(1, u.dim())?;
    let field = f.field().join(u.field())?;
    let v = u.valuation();
    if v != 1 {
        return Err(Error::ValuationError(format!("valuation {v}")));
    }
    if u.order() < 2 {
        return Err(Error::PrecisionError("linear coefficient of the substitution is not certified".into()));
    }
    let unit = u.shift(&MultiIndex(vec![-1]));
    let (lo, hi) = match (f.min_exponent(0), f.max_exponent(0)) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => return Ok(TruncatedSeries::zero(1, field, order)),
    };
    let mut acc = TruncatedSeries::exact(&LaurentPoly::zero(1, field.clone()));
    if lo < 0 {
        let inv = unit.inverse_unit()?;
        let mut p = inv.clone();
        for k in 1..=(-lo) {
            let c = f.coeff(&MultiIndex(vec![-k]));
            if !c.is_zero() {
                acc = acc.try_add(&p.shift(&MultiIndex(vec![-k])).scale(&c))?;
            }
            if k < -lo {
                p = p.try_mul(&inv)?;
            }
        }
    }
    let c0 = f.coeff(&MultiIndex(vec![0]));
    if !c0.is_zero() {
        let one = LaurentPoly::monomial(1, field.clone(), c0, MultiIndex(vec![0]));
        acc = acc.try_add(&TruncatedSeries::exact(&one))?;
    }
    if hi > 0 {
        let mut p = u.clone();
        for k in 1..=hi {
            let c = f.coeff(&MultiIndex(vec![k]));
            if !c.is_zero() {
                acc = acc.try_add(&p.scale(&c))?;
            }
            if k < hi {
                p = p.try_mul(u)?;
            }
        }
    }
    if acc.order() < order {
        return Err(Error::PrecisionError(format!(
            "substitution certified only below degree {}, requested {}",
            acc.order(),
            order
        )));
    }
    let mut out = acc.truncate(order);
    out.field = field;
    Ok(out)
}
