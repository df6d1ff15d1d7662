//! Windowed shift operators on the monomial basis of `k((t_1))...((t_n))`.
//!
//! Every operator is stored in a canonical basis of *atoms*. An atom is a pair
//! `(shift, corner)` acting by
//!
//! ```text
//! t^lambda  |->  t^(lambda + shift)   if lambda >= corner (componentwise)
//!           |->  0                    otherwise
//! ```
//!
//! where corner entries may be `-inf`. For a fixed shift the indicator
//! functions of distinct lower orthants are linearly independent, so a finite
//! linear combination of atoms is zero exactly when all its coefficients
//! vanish. A general box window `[lo, hi)` is expanded into atoms by
//! inclusion-exclusion on each axis. Atoms are closed under composition:
//!
//! ```text
//! (s1, a1) o (s2, a2) = (s1 + s2, max(a2, a1 - s2))
//! ```
//!
//! so the operator algebra is the semigroup algebra of atoms.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};
use smallvec::SmallVec;

use crate::error::{check_dim, Error, Result};
use crate::laurent::{LaurentPoly, MultiIndex};
use crate::scalar::{Field, Scalar};

pub(crate) const NEG_INF: i64 = i64::MIN;

pub(crate) type Coords = SmallVec<[i64; 3]>;

/// Sign of a compact (`+`) or discrete (`-`) ideal, or of an idempotent `P^±`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// `(-1)^sign`: `+1` for `+`, `-1` for `-`.
    pub fn is_negative(self) -> bool {
        self == Sign::Minus
    }

    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Half-open interval `[lower, upper)` of input exponents on one axis;
/// `None` stands for `-inf` / `+inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AxisWindow {
    pub lower: Option<i64>,
    pub upper: Option<i64>,
}

impl AxisWindow {
    pub const ALL: AxisWindow = AxisWindow { lower: None, upper: None };

    pub fn new(lower: Option<i64>, upper: Option<i64>) -> Self {
        Self { lower, upper }
    }

    pub fn is_empty(&self) -> bool {
        matches!((self.lower, self.upper), (Some(l), Some(u)) if l >= u)
    }

    pub fn contains(&self, x: i64) -> bool {
        self.lower.is_none_or(|l| x >= l) && self.upper.is_none_or(|u| x < u)
    }
}

/// One summand `coefficient * (t^lambda |-> t^(lambda+shift) if lambda in window)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowTerm {
    pub coefficient: Scalar,
    pub shift: MultiIndex,
    pub window: Vec<AxisWindow>,
}

/// Basis element of the operator algebra; see the module docs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub(crate) shift: Coords,
    pub(crate) corner: Coords,
}

impl Atom {
    pub fn identity(dim: usize) -> Atom {
        Atom { shift: SmallVec::from_elem(0, dim), corner: SmallVec::from_elem(NEG_INF, dim) }
    }

    pub fn shift_by(exp: &MultiIndex) -> Atom {
        Atom { shift: exp.0.iter().copied().collect(), corner: SmallVec::from_elem(NEG_INF, exp.dim()) }
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    pub fn shift(&self) -> MultiIndex {
        MultiIndex(self.shift.to_vec())
    }

    /// Lower corner; `None` is `-inf`.
    pub fn corner(&self) -> Vec<Option<i64>> {
        self.corner.iter().map(|&c| (c != NEG_INF).then_some(c)).collect()
    }

    /// `self o other` (apply `other` first).
    pub fn compose(&self, other: &Atom) -> Atom {
        let shift = self.shift.iter().zip(&other.shift).map(|(a, b)| a + b).collect();
        let corner = self
            .corner
            .iter()
            .zip(&other.corner)
            .zip(&other.shift)
            .map(|((&a1, &a2), &s2)| {
                let pulled = if a1 == NEG_INF { NEG_INF } else { a1 - s2 };
                pulled.max(a2)
            })
            .collect();
        Atom { shift, corner }
    }

    pub fn admits(&self, lambda: &[i64]) -> bool {
        self.corner.iter().zip(lambda).all(|(&a, &l)| l >= a)
    }

    fn render(&self) -> String {
        let corner: Vec<String> =
            self.corner.iter().map(|&c| if c == NEG_INF { "-inf".into() } else { c.to_string() }).collect();
        format!("S{:?}@[{}]", self.shift.as_slice(), corner.join(","))
    }
}

/// A finite linear combination of atoms in canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowedOperator {
    dim: usize,
    field: Field,
    terms: BTreeMap<Atom, Scalar>,
}

impl WindowedOperator {
    pub fn zero(dim: usize) -> Self {
        Self { dim, field: Field::Rational, terms: BTreeMap::new() }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_atom(Atom::identity(dim), Scalar::one())
    }

    pub fn from_atom(atom: Atom, c: Scalar) -> Self {
        let mut op = Self::zero(atom.dim());
        op.field = c.field();
        op.add_atom(atom, c);
        op
    }

    pub fn from_atoms(dim: usize, field: Field, atoms: impl IntoIterator<Item = (Atom, Scalar)>) -> Result<Self> {
        let mut op = Self::zero(dim);
        op.field = field;
        for (a, c) in atoms {
            check_dim(dim, a.dim())?;
            op.field = op.field.join(&c.field())?;
            op.add_atom(a, c);
        }
        Ok(op)
    }

    /// Builds an operator from box-window terms, expanding every finite upper
    /// bound by inclusion-exclusion. Empty windows contribute nothing.
    pub fn from_window_terms(dim: usize, field: Field, terms: &[WindowTerm]) -> Result<Self> {
        let mut op = Self::zero(dim);
        op.field = field;
        for t in terms {
            check_dim(dim, t.shift.dim())?;
            check_dim(dim, t.window.len())?;
            op.field = op.field.join(&t.coefficient.field())?;
            if t.coefficient.is_zero() || t.window.iter().any(AxisWindow::is_empty) {
                continue;
            }
            let mut partial: Vec<(Coords, bool)> = vec![(SmallVec::new(), false)];
            for w in &t.window {
                let lo = w.lower.unwrap_or(NEG_INF);
                let mut next = Vec::with_capacity(partial.len() * 2);
                for (c, neg) in &partial {
                    let mut a = c.clone();
                    a.push(lo);
                    next.push((a, *neg));
                    if let Some(hi) = w.upper {
                        let mut b = c.clone();
                        b.push(hi);
                        next.push((b, !*neg));
                    }
                }
                partial = next;
            }
            let shift: Coords = t.shift.0.iter().copied().collect();
            for (corner, neg) in partial {
                op.add_atom(Atom { shift: shift.clone(), corner }, t.coefficient.clone().signed(neg));
            }
        }
        Ok(op)
    }

    pub(crate) fn add_atom(&mut self, atom: Atom, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&atom) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&atom);
                }
            }
            None => {
                self.terms.insert(atom, c);
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

    pub fn num_atoms(&self) -> usize {
        self.terms.len()
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&Atom, &Scalar)> {
        self.terms.iter()
    }

    /// The canonical terms, each with an orthant window `[corner_i, +inf)`.
    pub fn terms(&self) -> Vec<WindowTerm> {
        self.terms
            .iter()
            .map(|(a, c)| WindowTerm {
                coefficient: c.clone(),
                shift: a.shift(),
                window: a.corner().into_iter().map(|lo| AxisWindow::new(lo, None)).collect(),
            })
            .collect()
    }

    fn compatible(&self, other: &WindowedOperator) -> Result<Field> {
        check_dim(self.dim, other.dim)?;
        Ok(self.field.join(&other.field)?)
    }

    pub fn try_add(&self, other: &WindowedOperator) -> Result<WindowedOperator> {
        let field = self.compatible(other)?;
        let mut out = self.clone();
        out.field = field;
        for (a, c) in &other.terms {
            out.add_atom(a.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &WindowedOperator) -> Result<WindowedOperator> {
        self.try_add(&other.scale(&Scalar::from(-1)))
    }

    pub fn scale(&self, k: &Scalar) -> WindowedOperator {
        let mut out = Self::zero(self.dim);
        out.field = self.field.join(&k.field()).expect("scale factor outside the field");
        if k.is_zero() {
            return out;
        }
        for (a, c) in &self.terms {
            out.add_atom(a.clone(), c * k);
        }
        out
    }

    /// `self o other`: acts as `self` after `other`.
    pub fn try_compose(&self, other: &WindowedOperator) -> Result<WindowedOperator> {
        let field = self.compatible(other)?;
        let mut out = Self::zero(self.dim);
        out.field = field;
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_atom(a.compose(b), ca.try_mul(cb)?);
            }
        }
        Ok(out)
    }

    pub fn compose(&self, other: &WindowedOperator) -> WindowedOperator {
        self.try_compose(other).expect("incompatible operators")
    }

    /// `[self, other] = self o other - other o self`.
    pub fn try_commutator(&self, other: &WindowedOperator) -> Result<WindowedOperator> {
        self.try_compose(other)?.try_sub(&other.try_compose(self)?)
    }

    pub fn commutator(&self, other: &WindowedOperator) -> WindowedOperator {
        self.try_commutator(other).expect("incompatible operators")
    }

    /// Action on the basis monomial `t^lambda`.
    pub fn apply_monomial(&self, lambda: &MultiIndex) -> LaurentPoly {
        let mut terms = Vec::new();
        for (a, c) in &self.terms {
            if a.admits(&lambda.0) {
                terms.push((lambda.add(&a.shift()), c.clone()));
            }
        }
        LaurentPoly::from_terms(self.dim, self.field.clone(), terms).expect("operator field")
    }

    /// Coefficient-wise action on a Laurent polynomial.
    pub fn apply(&self, f: &LaurentPoly) -> Result<LaurentPoly> {
        check_dim(self.dim, f.dim())?;
        let mut out = LaurentPoly::zero(self.dim, self.field.join(f.field())?);
        for (e, c) in f.terms() {
            out = out.try_add(&self.apply_monomial(e).scale(c))?;
        }
        Ok(out)
    }

    fn shift_groups(&self) -> BTreeMap<&Coords, Vec<(&Atom, &Scalar)>> {
        let mut groups: BTreeMap<&Coords, Vec<(&Atom, &Scalar)>> = BTreeMap::new();
        for (a, c) in &self.terms {
            groups.entry(&a.shift).or_default().push((a, c));
        }
        groups
    }

    /// Input support bounded below on `axis` (equivalently, image inside a
    /// lattice along that axis).
    fn bounded_below(&self, axis: usize) -> bool {
        self.terms.keys().all(|a| a.corner[axis] != NEG_INF)
    }

    /// Input support bounded above on `axis` (the operator kills
    /// `lambda_axis >= m` for some `m`).
    fn bounded_above(&self, axis: usize) -> bool {
        for group in self.shift_groups().values() {
            let mut sums: BTreeMap<Coords, Scalar> = BTreeMap::new();
            for (a, c) in group {
                let mut key = a.corner.clone();
                key.remove(axis);
                *sums.entry(key).or_default() += c;
            }
            if sums.values().any(|s| !s.is_zero()) {
                return false;
            }
        }
        true
    }

    /// Whether every operator over this dimension is in `I_axis^sign`:
    /// `+` compact along `axis`, `-` discrete along `axis`.
    pub fn ideal_member(&self, axis: usize, sign: Sign) -> bool {
        match sign {
            Sign::Plus => self.bounded_below(axis),
            Sign::Minus => self.bounded_above(axis),
        }
    }

    /// Membership in `I_axis^+ ∩ I_axis^-`.
    pub fn bounded_on(&self, axis: usize) -> bool {
        self.bounded_below(axis) && self.bounded_above(axis)
    }

    /// Only finitely many basis monomials map to nonzero values.
    pub fn is_finite_rank(&self) -> bool {
        (0..self.dim).all(|i| self.bounded_on(i))
    }

    /// Nilpotent by the shift criterion: along some axis the operator has
    /// bounded support and every shift component points the same strict way.
    pub fn is_certified_nilpotent(&self) -> bool {
        (0..self.dim).any(|i| {
            self.bounded_on(i)
                && (self.terms.keys().all(|a| a.shift[i] > 0) || self.terms.keys().all(|a| a.shift[i] < 0))
        })
    }

    /// Tate's trace on the two certified classes (finite rank, nilpotent).
    ///
    /// For a finite-rank operator the diagonal part is supported in the box
    /// `prod [min_i, max_i)` spanned by its corners, and its sum over that box
    /// is `sum_a c_a prod_i (max_i - a_i)`.
    pub fn tate_trace(&self) -> Result<Scalar> {
        if self.is_finite_rank() {
            let diag: Vec<(&Atom, &Scalar)> =
                self.terms.iter().filter(|(a, _)| a.shift.iter().all(|&s| s == 0)).collect();
            if diag.is_empty() {
                return Ok(Scalar::zero());
            }
            let upper: Vec<i64> = (0..self.dim).map(|i| diag.iter().map(|(a, _)| a.corner[i]).max().unwrap()).collect();
            let mut tr = Scalar::zero();
            for (a, c) in diag {
                let count: i64 = a.corner.iter().zip(&upper).map(|(lo, hi)| hi - lo).product();
                if count != 0 {
                    tr += &(c * &Scalar::from(count));
                }
            }
            return Ok(tr);
        }
        if self.is_certified_nilpotent() {
            return Ok(Scalar::zero());
        }
        Err(Error::NotProvablyFinitePotent)
    }

    /// Canonical JSON: `[{"coeff", "shift": [..], "window": [[lo, hi], ..]}]`
    /// with `"-inf"` / `"inf"` sentinels.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms()
                .into_iter()
                .map(|t| {
                    let window: Vec<Value> = t
                        .window
                        .iter()
                        .map(|w| {
                            json!([
                                w.lower.map_or(json!("-inf"), |v| json!(v)),
                                w.upper.map_or(json!("inf"), |v| json!(v))
                            ])
                        })
                        .collect();
                    json!({"coeff": t.coefficient.render(), "shift": t.shift.0, "window": window})
                })
                .collect(),
        )
    }

    /// Parses the JSON rendering; coefficients go through `parse_coeff`.
    pub fn from_json(
        dim: usize,
        field: Field,
        value: &Value,
        parse_coeff: impl Fn(&str) -> Result<Scalar>,
    ) -> Result<Self> {
        let bad = |m: &str| Error::InvalidArgument(format!("operator JSON: {m}"));
        let arr = value.as_array().ok_or_else(|| bad("expected a list of terms"))?;
        let mut terms = Vec::with_capacity(arr.len());
        for item in arr {
            let coeff = match item.get("coeff") {
                Some(Value::String(s)) => parse_coeff(s)?,
                Some(Value::Number(n)) => {
                    let v = n.as_i64().ok_or_else(|| bad("integer coefficient expected"))?;
                    Scalar::from(v)
                }
                _ => return Err(bad("missing coeff")),
            };
            let shift: Vec<i64> = item
                .get("shift")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("missing shift"))?
                .iter()
                .map(|v| v.as_i64().ok_or_else(|| bad("shift entries must be integers")))
                .collect::<Result<_>>()?;
            let window = match item.get("window") {
                None => vec![AxisWindow::ALL; dim],
                Some(w) => w
                    .as_array()
                    .ok_or_else(|| bad("window must be a list"))?
                    .iter()
                    .map(|pair| {
                        let p = pair.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("window pair"))?;
                        let bound = |v: &Value, inf: &str| -> Result<Option<i64>> {
                            match v {
                                Value::String(s) if s == inf => Ok(None),
                                Value::Number(n) => n.as_i64().map(Some).ok_or_else(|| bad("window bound")),
                                _ => Err(bad("window bound")),
                            }
                        };
                        Ok(AxisWindow::new(bound(&p[0], "-inf")?, bound(&p[1], "inf")?))
                    })
                    .collect::<Result<_>>()?,
            };
            terms.push(WindowTerm { coefficient: coeff, shift: MultiIndex(shift), window });
        }
        Self::from_window_terms(dim, field, &terms)
    }
}

impl fmt::Display for WindowedOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(a, c)| format!("({c}){}", a.render())).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl std::ops::Add for &WindowedOperator {
    type Output = WindowedOperator;
    fn add(self, rhs: &WindowedOperator) -> WindowedOperator {
        self.try_add(rhs).expect("incompatible operators")
    }
}

impl std::ops::Sub for &WindowedOperator {
    type Output = WindowedOperator;
    fn sub(self, rhs: &WindowedOperator) -> WindowedOperator {
        self.try_sub(rhs).expect("incompatible operators")
    }
}

impl std::ops::Mul for &WindowedOperator {
    type Output = WindowedOperator;
    fn mul(self, rhs: &WindowedOperator) -> WindowedOperator {
        self.compose(rhs)
    }
}

/// Multiplication operator `x |-> f x`: one atom per monomial of `f`.
pub fn mul_op(f: &LaurentPoly) -> WindowedOperator {
    let atoms = f.terms().map(|(e, c)| (Atom::shift_by(e), c.clone()));
    WindowedOperator::from_atoms(f.dim(), f.field().clone(), atoms).expect("well-formed polynomial")
}

/// `P_axis^+` (keep `lambda_axis >= 0`) or `P_axis^- = 1 - P_axis^+`.
pub fn projector(dim: usize, axis: usize, sign: Sign) -> WindowedOperator {
    projector_at(dim, axis, sign, 0)
}

/// Projector onto `lambda_axis >= offset` (or its complement).
pub fn projector_at(dim: usize, axis: usize, sign: Sign, offset: i64) -> WindowedOperator {
    assert!(axis < dim, "axis out of range");
    let mut corner: Coords = SmallVec::from_elem(NEG_INF, dim);
    corner[axis] = offset;
    let plus = Atom { shift: SmallVec::from_elem(0, dim), corner };
    let mut op = WindowedOperator::from_atom(plus, Scalar::one());
    if sign == Sign::Minus {
        op = &WindowedOperator::identity(dim) - &op;
    }
    op
}

/// Dense trace over the box `prod [lo_i, hi_i)` computed from the action on
/// basis monomials.
pub fn box_trace(x: &WindowedOperator, lo: &[i64], hi: &[i64]) -> Scalar {
    let mut total = Scalar::zero();
    let mut lambda: Vec<i64> = lo.to_vec();
    if lo.iter().zip(hi).any(|(l, h)| l >= h) {
        return total;
    }
    loop {
        let idx = MultiIndex(lambda.clone());
        total += &x.apply_monomial(&idx).coeff(&idx);
        let mut axis = 0;
        loop {
            if axis == lambda.len() {
                return total;
            }
            lambda[axis] += 1;
            if lambda[axis] < hi[axis] {
                break;
            }
            lambda[axis] = lo[axis];
            axis += 1;
        }
    }
}

/// Bounding box `(lo, hi)` of the input support of a finite-rank operator.
pub fn support_box(x: &WindowedOperator) -> Option<(Vec<i64>, Vec<i64>)> {
    if !x.is_finite_rank() {
        return None;
    }
    if x.is_zero() {
        return Some((vec![0; x.dim()], vec![0; x.dim()]));
    }
    let lo = (0..x.dim()).map(|i| x.atoms().map(|(a, _)| a.corner[i]).min().unwrap()).collect();
    let hi = (0..x.dim()).map(|i| x.atoms().map(|(a, _)| a.corner[i]).max().unwrap()).collect();
    Some((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(e: i64) -> WindowedOperator {
        mul_op(&LaurentPoly::monomial(1, Field::Rational, Scalar::one(), MultiIndex(vec![e])))
    }

    fn p(sign: Sign) -> WindowedOperator {
        projector(1, 0, sign)
    }

    #[test]
    fn mul_op_shapes() {
        let op = t(3);
        let terms = op.terms();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].shift, MultiIndex(vec![3]));
        assert_eq!(terms[0].window, vec![AxisWindow::ALL]);
        assert!(mul_op(&LaurentPoly::zero(1, Field::Rational)).is_zero());
    }

    #[test]
    fn projector_algebra() {
        let id = WindowedOperator::identity(1);
        assert_eq!(&p(Sign::Plus) + &p(Sign::Minus), id);
        assert_eq!(p(Sign::Plus).compose(&p(Sign::Plus)), p(Sign::Plus));
        assert!(p(Sign::Plus).compose(&p(Sign::Minus)).is_zero());
        let a = projector(2, 0, Sign::Plus);
        let b = projector(2, 1, Sign::Plus);
        assert_eq!(a.compose(&b), b.compose(&a));
    }

    #[test]
    fn tate_commutator_anchor() {
        // [P^+ t^-1, t] acts as the projection onto t^0
        let x = p(Sign::Plus).compose(&t(-1)).commutator(&t(1));
        for l in -4..4 {
            let img = x.apply_monomial(&MultiIndex(vec![l]));
            if l == 0 {
                assert_eq!(img.coeff(&MultiIndex(vec![0])), Scalar::one());
                assert_eq!(img.len(), 1);
            } else {
                assert!(img.is_zero());
            }
        }
        assert!(x.ideal_member(0, Sign::Plus));
        assert!(x.ideal_member(0, Sign::Minus));
        assert_eq!(x.tate_trace().unwrap(), Scalar::one());
        for i in [-3, -2, 0, 1, 2] {
            let y = p(Sign::Plus).compose(&t(i)).commutator(&t(1));
            assert_eq!(y.tate_trace().unwrap(), Scalar::zero(), "i = {i}");
        }
    }

    #[test]
    fn membership_examples() {
        assert!(p(Sign::Plus).ideal_member(0, Sign::Plus));
        assert!(!p(Sign::Plus).ideal_member(0, Sign::Minus));
        assert!(p(Sign::Minus).ideal_member(0, Sign::Minus));
        assert!(!t(5).ideal_member(0, Sign::Plus));
        assert!(!t(5).ideal_member(0, Sign::Minus));
    }

    #[test]
    fn finite_rank_examples() {
        assert!(WindowedOperator::zero(2).is_finite_rank());
        assert!(!p(Sign::Plus).is_finite_rank());
        // prod_k P_k^- t_k^c P_k^+ with c < 0
        let mut x = WindowedOperator::identity(2);
        for k in 0..2 {
            let mut e = vec![0, 0];
            e[k] = -2;
            let tk = mul_op(&LaurentPoly::monomial(2, Field::Rational, Scalar::one(), MultiIndex(e)));
            let f = projector(2, k, Sign::Minus).compose(&tk).compose(&projector(2, k, Sign::Plus));
            x = x.compose(&f);
        }
        assert!(x.is_finite_rank());
    }

    #[test]
    fn diagonal_box_trace() {
        let beta = Scalar::rational(5, 7);
        let term = WindowTerm {
            coefficient: beta.clone(),
            shift: MultiIndex(vec![0, 0]),
            window: vec![AxisWindow::new(Some(2), Some(5)); 2],
        };
        let x = WindowedOperator::from_window_terms(2, Field::Rational, &[term]).unwrap();
        assert_eq!(x.num_atoms(), 4);
        assert_eq!(x.tate_trace().unwrap(), &beta * &Scalar::from(9));
        assert_eq!(box_trace(&x, &[0, 0], &[6, 6]), &beta * &Scalar::from(9));
    }

    #[test]
    fn nilpotent_and_refusal() {
        // shift +1 on axis 0, window [0, 3) on axis 0, unbounded on axis 1
        let term = WindowTerm {
            coefficient: Scalar::one(),
            shift: MultiIndex(vec![1, 0]),
            window: vec![AxisWindow::new(Some(0), Some(3)), AxisWindow::ALL],
        };
        let x = WindowedOperator::from_window_terms(2, Field::Rational, &[term]).unwrap();
        assert!(!x.is_finite_rank());
        assert!(x.is_certified_nilpotent());
        assert_eq!(x.tate_trace().unwrap(), Scalar::zero());
        assert_eq!(p(Sign::Plus).tate_trace(), Err(Error::NotProvablyFinitePotent));
        // injective shift on a half line is not finite-potent
        let y = p(Sign::Plus).compose(&t(1));
        assert_eq!(y.tate_trace(), Err(Error::NotProvablyFinitePotent));
    }

    #[test]
    fn empty_window_normalized_away() {
        let term = WindowTerm {
            coefficient: Scalar::one(),
            shift: MultiIndex(vec![0]),
            window: vec![AxisWindow::new(Some(3), Some(3))],
        };
        let x = WindowedOperator::from_window_terms(1, Field::Rational, &[term]).unwrap();
        assert!(x.is_zero());
        let y = &t(2) - &t(2);
        assert!(y.is_zero());
        assert!(WindowedOperator::zero(1).compose(&t(1)).is_zero());
    }

    #[test]
    fn json_roundtrip() {
        let x = p(Sign::Minus).compose(&t(-1)).compose(&p(Sign::Plus));
        let v = x.to_json();
        let back = WindowedOperator::from_json(1, Field::Rational, &v, |s| {
            s.parse::<crate::scalar::Rational>()
                .map(Scalar::Rational)
                .map_err(|e| Error::InvalidArgument(e.to_string()))
        })
        .unwrap();
        assert_eq!(back, x);
    }
}
