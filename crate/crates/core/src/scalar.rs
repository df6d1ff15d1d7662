//! Exact scalars: rationals and elements of simple extensions `Q[x]/(p(x))`.
//!
//! A [`Scalar`] is either a rational number or an element of a declared
//! [`ExtensionField`]. Rationals embed into every extension, so mixed
//! arithmetic between a rational and an extension element is always defined;
//! arithmetic between elements of two different extensions is a
//! [`ScalarError::FieldMismatch`].
//!
//! Extension elements whose reduced representative is a constant are stored as
//! rationals, so equality of scalars is structural equality.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::upoly::UPoly;

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("invalid extension modulus: {0}")]
    InvalidModulus(String),
    #[error("element is not invertible modulo {0} (modulus is reducible)")]
    NotInvertible(String),
}

/// The simple extension `Q[symbol]/(modulus)`.
///
/// The modulus is stored monic. Irreducibility is a caller precondition and is
/// not checked here; inversion reports [`ScalarError::NotInvertible`] when it
/// detects a zero divisor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtensionField {
    modulus: UPoly,
    symbol: String,
}

impl ExtensionField {
    pub fn new(modulus: UPoly, symbol: impl Into<String>) -> Result<Arc<Self>, ScalarError> {
        match modulus.degree() {
            None | Some(0) => Err(ScalarError::InvalidModulus(modulus.render("x"))),
            Some(_) => Ok(Arc::new(Self { modulus: modulus.monic(), symbol: symbol.into() })),
        }
    }

    pub fn modulus(&self) -> &UPoly {
        &self.modulus
    }

    pub fn symbol(&self) -> &str {
        &self.symbol
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap()
    }

    /// The class of the generator symbol.
    pub fn generator(self: &Arc<Self>) -> Scalar {
        self.element(UPoly::monomial(Rational::one(), 1))
    }

    /// Reduces `p` modulo the modulus and wraps it as a scalar of this field.
    pub fn element(self: &Arc<Self>, p: UPoly) -> Scalar {
        let r = p.rem(&self.modulus);
        Scalar::from_ext_parts(self.clone(), r)
    }

    /// Trace of multiplication-by-`x` in the regular representation over `Q`.
    pub fn trace(&self, x: &Scalar) -> Rational {
        match x {
            Scalar::Rational(q) => q * int(self.degree() as i64),
            Scalar::Ext(e) => {
                let d = self.degree();
                let mut tr = Rational::zero();
                let mut basis = UPoly::one();
                let gen = UPoly::monomial(Rational::one(), 1);
                for i in 0..d {
                    // column i of the matrix is x * gen^i reduced; take its i-th entry
                    let col = (&e.value * &basis).rem(&self.modulus);
                    tr += col.coeff(i);
                    basis = (&basis * &gen).rem(&self.modulus);
                }
                tr
            }
        }
    }

    fn describe(&self) -> String {
        format!("Q[{}]/({})", self.symbol, self.modulus.render(&self.symbol))
    }
}

/// Base-field descriptor carried by polynomials and operators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub enum Field {
    #[default]
    Rational,
    Extension(Arc<ExtensionField>),
}

impl Field {
    pub fn degree(&self) -> usize {
        match self {
            Field::Rational => 1,
            Field::Extension(e) => e.degree(),
        }
    }

    /// `Tr_{k_j/Q}`; identity on `Q`.
    pub fn trace(&self, x: &Scalar) -> Result<Rational, ScalarError> {
        match (self, x) {
            (Field::Rational, Scalar::Rational(q)) => Ok(q.clone()),
            (Field::Rational, Scalar::Ext(e)) => Err(ScalarError::FieldMismatch("Q".into(), e.field.describe())),
            (Field::Extension(f), _) => {
                x.check_field(f)?;
                Ok(f.trace(x))
            }
        }
    }

    /// The smallest common field, or a mismatch.
    pub fn join(&self, other: &Field) -> Result<Field, ScalarError> {
        match (self, other) {
            (Field::Rational, f) | (f, Field::Rational) => Ok(f.clone()),
            (Field::Extension(a), Field::Extension(b)) => {
                if Arc::ptr_eq(a, b) || a == b {
                    Ok(self.clone())
                } else {
                    Err(ScalarError::FieldMismatch(a.describe(), b.describe()))
                }
            }
        }
    }

    /// Whether `x` lives in this field.
    pub fn contains(&self, x: &Scalar) -> bool {
        match (self, x) {
            (_, Scalar::Rational(_)) => true,
            (Field::Rational, Scalar::Ext(_)) => false,
            (Field::Extension(f), Scalar::Ext(e)) => Arc::ptr_eq(f, &e.field) || **f == *e.field,
        }
    }

    pub fn symbol(&self) -> Option<&str> {
        match self {
            Field::Rational => None,
            Field::Extension(e) => Some(e.symbol()),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => f.write_str("Q"),
            Field::Extension(e) => f.write_str(&e.describe()),
        }
    }
}

/// An element of an extension field that is not a rational constant.
#[derive(Debug, Clone)]
pub struct ExtElement {
    field: Arc<ExtensionField>,
    value: UPoly,
}

impl ExtElement {
    pub fn field(&self) -> &Arc<ExtensionField> {
        &self.field
    }

    /// Reduced representative (degree below the modulus degree).
    pub fn value(&self) -> &UPoly {
        &self.value
    }
}

impl PartialEq for ExtElement {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && (Arc::ptr_eq(&self.field, &other.field) || self.field == other.field)
    }
}
impl Eq for ExtElement {}

impl std::hash::Hash for ExtElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.value.hash(state);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(Rational),
    Ext(ExtElement),
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<Rational> for Scalar {
    fn from(q: Rational) -> Self {
        Scalar::Rational(q)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::Rational(int(n))
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(Rational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(Rational::one())
    }

    pub fn rational(n: i64, d: i64) -> Self {
        Scalar::Rational(rat(n, d))
    }

    fn from_ext_parts(field: Arc<ExtensionField>, value: UPoly) -> Self {
        match value.degree() {
            None => Scalar::zero(),
            Some(0) => Scalar::Rational(value.coeff(0)),
            Some(_) => Scalar::Ext(ExtElement { field, value }),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rational(q) if q.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rational(q) if q.is_one())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Ext(_) => None,
        }
    }

    /// Field this element was built in (`Q` for rationals).
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Ext(e) => Field::Extension(e.field.clone()),
        }
    }

    fn check_field(&self, f: &Arc<ExtensionField>) -> Result<(), ScalarError> {
        match self {
            Scalar::Ext(e) if !(Arc::ptr_eq(&e.field, f) || *e.field == **f) => {
                Err(ScalarError::FieldMismatch(e.field.describe(), f.describe()))
            }
            _ => Ok(()),
        }
    }

    fn common(&self, other: &Scalar) -> Result<Option<Arc<ExtensionField>>, ScalarError> {
        match (self, other) {
            (Scalar::Rational(_), Scalar::Rational(_)) => Ok(None),
            (Scalar::Ext(e), Scalar::Rational(_)) | (Scalar::Rational(_), Scalar::Ext(e)) => Ok(Some(e.field.clone())),
            (Scalar::Ext(a), Scalar::Ext(b)) => {
                if Arc::ptr_eq(&a.field, &b.field) || a.field == b.field {
                    Ok(Some(a.field.clone()))
                } else {
                    Err(ScalarError::FieldMismatch(a.field.describe(), b.field.describe()))
                }
            }
        }
    }

    fn poly(&self) -> UPoly {
        match self {
            Scalar::Rational(q) => UPoly::constant(q.clone()),
            Scalar::Ext(e) => e.value.clone(),
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(match self.common(other)? {
            None => Scalar::Rational(self.as_rational().unwrap() + other.as_rational().unwrap()),
            Some(f) => Scalar::from_ext_parts(f, &self.poly() + &other.poly()),
        })
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(match self.common(other)? {
            None => Scalar::Rational(self.as_rational().unwrap() * other.as_rational().unwrap()),
            Some(f) => {
                let p = (&self.poly() * &other.poly()).rem(f.modulus());
                Scalar::from_ext_parts(f, p)
            }
        })
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.try_add(&-other)
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        match self {
            Scalar::Rational(q) if q.is_zero() => Err(ScalarError::DivisionByZero),
            Scalar::Rational(q) => Ok(Scalar::Rational(q.recip())),
            Scalar::Ext(e) => {
                let (g, s, _) = e.value.ext_gcd(e.field.modulus());
                if g.degree() != Some(0) {
                    return Err(ScalarError::NotInvertible(e.field.describe()));
                }
                Ok(Scalar::from_ext_parts(e.field.clone(), s.rem(e.field.modulus())))
            }
        }
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.try_mul(&other.inv()?)
    }

    /// Multiplies by `(-1)^k`.
    pub fn signed(self, negative: bool) -> Scalar {
        if negative {
            -self
        } else {
            self
        }
    }

    /// Renders with ascending powers of the generator, e.g. `3+5*x`.
    pub fn render(&self) -> String {
        match self {
            Scalar::Rational(q) => q.to_string(),
            Scalar::Ext(e) => {
                let sym = e.field.symbol();
                let mut out = String::new();
                for (i, c) in e.value.coeffs().iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let neg = c.is_negative();
                    let mag = c.abs();
                    if out.is_empty() {
                        if neg {
                            out.push('-');
                        }
                    } else {
                        out.push(if neg { '-' } else { '+' });
                    }
                    let mono = match i {
                        0 => String::new(),
                        1 => sym.to_string(),
                        _ => format!("{sym}^{i}"),
                    };
                    if mono.is_empty() {
                        out.push_str(&mag.to_string());
                    } else if mag.is_one() {
                        out.push_str(&mono);
                    } else {
                        out.push_str(&format!("{mag}*{mono}"));
                    }
                }
                out
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

// Operator impls panic on a field mismatch; the `try_*` methods report it.
// Containers validate their field descriptors up front, so inside them the
// panicking forms cannot trigger.

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.try_add(rhs).expect("scalar addition across fields")
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (a, b) => &a + &b,
        }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        match (&mut *self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => *a += b,
            _ => *self = &*self + rhs,
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.try_sub(rhs).expect("scalar subtraction across fields")
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            _ => self.try_mul(rhs).expect("scalar multiplication across fields"),
        }
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Ext(e) => Scalar::Ext(ExtElement { field: e.field.clone(), value: -&e.value }),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            other => -&other,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian() -> Arc<ExtensionField> {
        ExtensionField::new(UPoly::from_i64(&[1, 0, 1]), "x").unwrap()
    }

    #[test]
    fn rational_arithmetic() {
        let a = Scalar::rational(1, 3);
        let b = Scalar::rational(1, 6);
        assert_eq!(&a + &b, Scalar::rational(1, 2));
        assert_eq!(Scalar::zero().inv(), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn generator_squares_to_minus_one() {
        let k = gaussian();
        let x = k.generator();
        assert_eq!(&x * &x, Scalar::from(-1));
    }

    #[test]
    fn trace_regular_representation() {
        let k = gaussian();
        // [[3, -5], [5, 3]] has trace 6
        let e = k.element(UPoly::from_i64(&[3, 5]));
        assert_eq!(k.trace(&e), int(6));
        assert_eq!(k.trace(&Scalar::one()), int(2));
        let k2 = ExtensionField::new(UPoly::from_i64(&[-2, 0, 1]), "x").unwrap();
        assert_eq!(k2.trace(&k2.generator()), int(0));
        let k3 = ExtensionField::new(UPoly::from_i64(&[-2, 0, 0, 1]), "y").unwrap();
        assert_eq!(k3.trace(&Scalar::one()), int(3));
    }

    #[test]
    fn mismatched_fields() {
        let k = gaussian();
        let k2 = ExtensionField::new(UPoly::from_i64(&[-2, 0, 1]), "x").unwrap();
        let err = k.generator().try_add(&k2.generator()).unwrap_err();
        assert!(matches!(err, ScalarError::FieldMismatch(_, _)));
        // rationals mix with anything
        assert!(k.generator().try_add(&Scalar::one()).is_ok());
    }

    #[test]
    fn inverse_in_extension() {
        let k = gaussian();
        let e = k.element(UPoly::from_i64(&[2, 3]));
        let inv = e.inv().unwrap();
        assert_eq!(&e * &inv, Scalar::one());
        // 1/x = -x in Q[x]/(x^2+1)
        assert_eq!(k.generator().inv().unwrap(), -k.generator());
    }

    #[test]
    fn constants_collapse_to_rationals() {
        let k = gaussian();
        let x = k.generator();
        let s = &x - &x;
        assert!(s.is_zero());
        assert_eq!(s, Scalar::zero());
    }

    #[test]
    fn render_ascending() {
        let k = gaussian();
        assert_eq!(k.element(UPoly::from_i64(&[3, 5])).render(), "3+5*x");
        assert_eq!(Scalar::rational(-3, 4).render(), "-3/4");
        assert_eq!(k.element(UPoly::from_i64(&[0, -1])).render(), "-x");
    }

    #[test]
    fn reducible_modulus_detected_on_inverse() {
        let k = ExtensionField::new(UPoly::from_i64(&[-1, 0, 1]), "x").unwrap();
        let e = k.element(UPoly::from_i64(&[1, 1]));
        assert!(matches!(e.inv(), Err(ScalarError::NotInvertible(_))));
    }
}
