//! Chain-level homological algebra over the windowed operator algebra.
//!
//! Chains are stored multilinearly expanded: every tensor slot is a single
//! [`Atom`], so a chain is a finite map from atom tuples to scalars and
//! equality of chains is structural. Axis indices in this module are 0-based
//! (axis `0` is `t_1`).

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{check_dim, Error, Result};
use crate::laurent::MultiIndex;
pub use crate::operator::Sign;
use crate::operator::{projector_at, Atom, AxisWindow, WindowTerm, WindowedOperator};
use crate::scalar::{Field, Scalar};

fn accumulate<K: Ord>(map: &mut BTreeMap<K, Scalar>, key: K, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += &c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

fn expand_slots(slots: &[WindowedOperator]) -> Vec<(Vec<Atom>, Scalar)> {
    let mut acc = vec![(Vec::with_capacity(slots.len()), Scalar::one())];
    for s in slots {
        let mut next = Vec::with_capacity(acc.len() * s.num_atoms());
        for (t, c) in &acc {
            for (a, k) in s.atoms() {
                let mut t2 = t.clone();
                t2.push(a.clone());
                next.push((t2, c * k));
            }
        }
        acc = next;
    }
    acc
}

fn atom_op(a: &Atom) -> WindowedOperator {
    WindowedOperator::from_atom(a.clone(), Scalar::one())
}

fn minus_one() -> Scalar {
    Scalar::from(-1)
}

/// All permutations of `0..n` with their parity (`true` = odd).
pub fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<(Vec<usize>, bool)>) {
        if current.len() == n {
            let inversions =
                (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| current[i] > current[j]).count();
            out.push((current.clone(), inversions % 2 == 1));
            return;
        }
        for k in 0..n {
            if !used[k] {
                used[k] = true;
                current.push(k);
                rec(n, current, used, out);
                current.pop();
                used[k] = false;
            }
        }
    }
    rec(n, &mut current, &mut used, &mut out);
    out
}

/// Sorts a wedge of atoms, returning the sign of the sorting permutation, or
/// `None` if two slots coincide.
fn normalize_wedge(mut v: Vec<Atom>) -> Option<(Vec<Atom>, bool)> {
    let mut odd = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((v, odd))
    }
}

/// Terms of `a o b - b o a`.
fn atom_commutator(a: &Atom, b: &Atom) -> [(Atom, bool); 2] {
    [(a.compose(b), false), (b.compose(a), true)]
}

/// A choice of good idempotents `P_i^+` projecting onto `lambda_i >= offset_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodIdempotents {
    offsets: Vec<i64>,
}

impl GoodIdempotents {
    /// The coordinate projectors onto nonnegative exponents.
    pub fn standard(dim: usize) -> Self {
        Self { offsets: vec![0; dim] }
    }

    pub fn with_offsets(offsets: Vec<i64>) -> Self {
        Self { offsets }
    }

    /// Replaces `P_axis^+` by the projector onto `lambda_axis >= m`.
    pub fn shifted(mut self, axis: usize, m: i64) -> Self {
        self.offsets[axis] = m;
        self
    }

    pub fn dim(&self) -> usize {
        self.offsets.len()
    }

    pub fn offsets(&self) -> &[i64] {
        &self.offsets
    }

    pub fn projector(&self, axis: usize, sign: Sign) -> WindowedOperator {
        projector_at(self.dim(), axis, sign, self.offsets[axis])
    }

    pub fn plus(&self, axis: usize) -> WindowedOperator {
        self.projector(axis, Sign::Plus)
    }

    pub fn minus(&self, axis: usize) -> WindowedOperator {
        self.projector(axis, Sign::Minus)
    }

    /// `P_1^{s_1} o ... o P_k^{s_k}` for the signs given on the leading axes.
    pub fn product(&self, signs: &[Sign]) -> WindowedOperator {
        signs
            .iter()
            .enumerate()
            .fold(WindowedOperator::identity(self.dim()), |acc, (i, &s)| acc.compose(&self.projector(i, s)))
    }

    /// `P_k^- f P_k^+ - P_k^+ f P_k^-`, i.e. `sum_gamma (-1)^gamma P_k^{-gamma} f P_k^gamma`.
    pub fn boundary_factor(&self, f: &WindowedOperator, axis: usize) -> WindowedOperator {
        let (p, m) = (self.plus(axis), self.minus(axis));
        &m.compose(f).compose(&p) - &p.compose(f).compose(&m)
    }
}

/// The cubically decomposed structure on operators of a fixed dimension: the
/// ideals `I_i^±` and the trace on `I_tr = ∩ I_i^+ ∩ I_i^-`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CubicalStructure {
    dim: usize,
}

impl CubicalStructure {
    pub fn new(dim: usize) -> Self {
        Self { dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn member(&self, x: &WindowedOperator, axis: usize, sign: Sign) -> bool {
        x.ideal_member(axis, sign)
    }

    /// Membership in `I_axis^{slot}`, where [`Slot::Zero`] means both ideals.
    pub fn member_slot(&self, x: &WindowedOperator, axis: usize, slot: Slot) -> bool {
        match slot {
            Slot::Plus => x.ideal_member(axis, Sign::Plus),
            Slot::Minus => x.ideal_member(axis, Sign::Minus),
            Slot::Zero => x.bounded_on(axis),
        }
    }

    pub fn in_trace_ideal(&self, x: &WindowedOperator) -> bool {
        (0..self.dim).all(|i| x.bounded_on(i))
    }

    pub fn trace(&self, x: &WindowedOperator) -> Result<Scalar> {
        check_dim(self.dim, x.dim())?;
        x.tate_trace()
    }

    /// Splits `x = P_axis^+ x + P_axis^- x` with the summands certified in
    /// `I_axis^+` and `I_axis^-`.
    pub fn split(
        &self,
        x: &WindowedOperator,
        axis: usize,
        idem: &GoodIdempotents,
    ) -> Result<(WindowedOperator, WindowedOperator)> {
        let plus = idem.plus(axis).try_compose(x)?;
        let minus = x.try_sub(&plus)?;
        if !plus.ideal_member(axis, Sign::Plus) || !minus.ideal_member(axis, Sign::Minus) {
            return Err(Error::DecompositionError(format!("axis {axis}: summands outside I^+ / I^-")));
        }
        Ok((plus, minus))
    }
}

/// Hochschild chain `sum c * a_0 (x) a_1 (x) ... (x) a_r` with `M = A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HochschildChain {
    dim: usize,
    degree: usize,
    field: Field,
    terms: BTreeMap<Vec<Atom>, Scalar>,
}

impl HochschildChain {
    pub fn zero(dim: usize, degree: usize, field: Field) -> Self {
        Self { dim, degree, field, terms: BTreeMap::new() }
    }

    pub fn from_tensor(c: &Scalar, slots: &[WindowedOperator]) -> Result<Self> {
        let first = slots.first().ok_or_else(|| Error::InvalidArgument("empty tensor".into()))?;
        let mut chain = Self::zero(first.dim(), slots.len() - 1, Field::Rational);
        chain.try_add_tensor(c, slots)?;
        Ok(chain)
    }

    /// Adds `c * slots[0] (x) ... (x) slots[r]`.
    ///
    /// # Panics
    /// On a dimension, degree or field mismatch.
    pub fn add_tensor(&mut self, c: &Scalar, slots: &[WindowedOperator]) {
        self.try_add_tensor(c, slots).expect("incompatible tensor");
    }

    pub fn try_add_tensor(&mut self, c: &Scalar, slots: &[WindowedOperator]) -> Result<()> {
        check_dim(self.degree + 1, slots.len())?;
        let mut field = self.field.join(&c.field())?;
        for s in slots {
            check_dim(self.dim, s.dim())?;
            field = field.join(s.field())?;
        }
        self.field = field;
        for (t, k) in expand_slots(slots) {
            accumulate(&mut self.terms, t, &k * c);
        }
        Ok(())
    }

    pub(crate) fn add_atoms(&mut self, t: Vec<Atom>, c: Scalar) {
        accumulate(&mut self.terms, t, c);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
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

    pub fn terms(&self) -> impl Iterator<Item = (&[Atom], &Scalar)> {
        self.terms.iter().map(|(t, c)| (t.as_slice(), c))
    }

    pub fn try_add(&self, other: &HochschildChain) -> Result<HochschildChain> {
        check_dim(self.dim, other.dim)?;
        check_dim(self.degree, other.degree)?;
        let mut out = self.clone();
        out.field = self.field.join(&other.field)?;
        for (t, c) in &other.terms {
            accumulate(&mut out.terms, t.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &HochschildChain) -> Result<HochschildChain> {
        self.try_add(&other.scale(&minus_one()))
    }

    pub fn scale(&self, k: &Scalar) -> HochschildChain {
        let mut out = Self::zero(self.dim, self.degree, self.field.join(&k.field()).expect("scalar field"));
        for (t, c) in &self.terms {
            accumulate(&mut out.terms, t.clone(), c * k);
        }
        out
    }

    /// Left multiplication of the module slot `a_0` by `op`.
    pub fn left_mul(&self, op: &WindowedOperator) -> HochschildChain {
        let mut out = Self::zero(self.dim, self.degree, self.field.join(op.field()).expect("operator field"));
        for (t, c) in &self.terms {
            for (l, k) in op.atoms() {
                let mut t2 = t.clone();
                t2[0] = l.compose(&t[0]);
                accumulate(&mut out.terms, t2, c * k);
            }
        }
        out
    }

    /// Sum of the module slots, grouped by the remaining tensor factors.
    fn module_slots_by_tail(&self) -> BTreeMap<&[Atom], WindowedOperator> {
        let mut groups: BTreeMap<&[Atom], Vec<(Atom, Scalar)>> = BTreeMap::new();
        for (t, c) in &self.terms {
            groups.entry(&t[1..]).or_default().push((t[0].clone(), c.clone()));
        }
        groups
            .into_iter()
            .map(|(k, v)| (k, WindowedOperator::from_atoms(self.dim, self.field.clone(), v).expect("chain atoms")))
            .collect()
    }

    /// The degree-0 chain as an operator.
    fn collapse(&self) -> WindowedOperator {
        let atoms = self.terms.iter().map(|(t, c)| (t[0].clone(), c.clone()));
        WindowedOperator::from_atoms(self.dim, self.field.clone(), atoms).expect("chain atoms")
    }
}

impl fmt::Display for HochschildChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(t, c)| {
                let slots: Vec<String> = t.iter().map(|a| atom_op(a).to_string()).collect();
                format!("({c}) {}", slots.join(" ⊗ "))
            })
            .collect();
        f.write_str(&parts.join("\n"))
    }
}

impl std::ops::Add for &HochschildChain {
    type Output = HochschildChain;
    fn add(self, rhs: &HochschildChain) -> HochschildChain {
        self.try_add(rhs).expect("incompatible chains")
    }
}

impl std::ops::Sub for &HochschildChain {
    type Output = HochschildChain;
    fn sub(self, rhs: &HochschildChain) -> HochschildChain {
        self.try_sub(rhs).expect("incompatible chains")
    }
}

/// The faces of `b` on one atom tensor, with their signs (`true` = negative).
fn b_faces(t: &[Atom]) -> Vec<(Vec<Atom>, bool)> {
    let i = t.len() - 1;
    let mut out = Vec::with_capacity(i + 1);
    for j in 0..i {
        let mut face = Vec::with_capacity(i);
        face.extend_from_slice(&t[..j]);
        face.push(t[j].compose(&t[j + 1]));
        face.extend_from_slice(&t[j + 2..]);
        out.push((face, j % 2 == 1));
    }
    let mut last = Vec::with_capacity(i);
    last.push(t[i].compose(&t[0]));
    last.extend_from_slice(&t[1..i]);
    out.push((last, i % 2 == 1));
    out
}

/// The Hochschild differential
/// `b(m ⊗ a_1 ⊗ ... ⊗ a_i) = m a_1 ⊗ ... + sum_j (-1)^j m ⊗ ... a_j a_{j+1} ... + (-1)^i a_i m ⊗ ...`.
pub fn hochschild_b(c: &HochschildChain) -> Result<HochschildChain> {
    if c.degree == 0 {
        return Err(Error::InvalidArgument("b is undefined in degree 0".into()));
    }
    let mut out = HochschildChain::zero(c.dim, c.degree - 1, c.field.clone());
    for (t, k) in &c.terms {
        for (face, neg) in b_faces(t) {
            accumulate(&mut out.terms, face, k.clone().signed(neg));
        }
    }
    Ok(out)
}

/// Connes' cyclic operator `a_0 ⊗ ... ⊗ a_i ↦ (-1)^i a_i ⊗ a_0 ⊗ ... ⊗ a_{i-1}`.
pub fn cyclic_t(c: &HochschildChain) -> HochschildChain {
    let mut out = HochschildChain::zero(c.dim, c.degree, c.field.clone());
    let neg = c.degree % 2 == 1;
    for (t, k) in &c.terms {
        let mut r = t.clone();
        r.rotate_right(1);
        accumulate(&mut out.terms, r, k.clone().signed(neg));
    }
    out
}

/// One entry of a component label `(s_1, ..., s_n) ∈ {+, -, 0}^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Plus,
    Minus,
    Zero,
}

impl Slot {
    fn sign(self) -> Option<Sign> {
        match self {
            Slot::Plus => Some(Sign::Plus),
            Slot::Minus => Some(Sign::Minus),
            Slot::Zero => None,
        }
    }
}

impl From<Sign> for Slot {
    fn from(s: Sign) -> Slot {
        match s {
            Sign::Plus => Slot::Plus,
            Sign::Minus => Slot::Minus,
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Slot::Plus => "+",
            Slot::Minus => "-",
            Slot::Zero => "0",
        })
    }
}

/// `deg(s) = 1 + #{i | s_i = 0}`; the empty label has degree 0.
pub fn label_degree(label: &[Slot]) -> usize {
    if label.is_empty() {
        0
    } else {
        1 + label.iter().filter(|s| **s == Slot::Zero).count()
    }
}

/// All labels of length `n` and the given degree.
pub fn labels(n: usize, degree: usize) -> Vec<Vec<Slot>> {
    if degree == 0 {
        return vec![Vec::new()];
    }
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|l: Vec<Slot>| {
                [Slot::Plus, Slot::Minus, Slot::Zero].into_iter().map(move |s| {
                    let mut l = l.clone();
                    l.push(s);
                    l
                })
            })
            .collect();
    }
    out.retain(|l| label_degree(l) == degree);
    out
}

fn sign_vectors(len: usize) -> Vec<Vec<Sign>> {
    (0..1usize << len)
        .map(|mask| (0..len).map(|i| if mask >> i & 1 == 0 { Sign::Plus } else { Sign::Minus }).collect())
        .collect()
}

fn odd_count(signs: impl IntoIterator<Item = Sign>) -> bool {
    signs.into_iter().filter(|s| s.is_negative()).count() % 2 == 1
}

type LabeledKey = (Vec<Slot>, Vec<Atom>);

type ModuleSlots = Vec<(Atom, Scalar)>;

/// A chain in `C_r(A, N^p)`: tensors whose module slot sits in the component
/// `I_1^{s_1} ∩ ... ∩ I_n^{s_n}` named by its label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledChain {
    dim: usize,
    level: usize,
    degree: usize,
    field: Field,
    terms: BTreeMap<LabeledKey, Scalar>,
}

impl LabeledChain {
    pub fn zero(dim: usize, level: usize, degree: usize, field: Field) -> Self {
        Self { dim, level, degree, field, terms: BTreeMap::new() }
    }

    /// `c` viewed in `C_r(A, N^0)`.
    pub fn embed(c: &HochschildChain) -> Self {
        let mut out = Self::zero(c.dim, 0, c.degree, c.field.clone());
        for (t, k) in &c.terms {
            out.terms.insert((Vec::new(), t.clone()), k.clone());
        }
        out
    }

    /// Adds `c * slots` at `label`; the label must have degree equal to the level.
    pub fn add_term(&mut self, label: &[Slot], c: &Scalar, slots: &[WindowedOperator]) -> Result<()> {
        if label_degree(label) != self.level || (self.level > 0 && label.len() != self.dim) {
            return Err(Error::InvalidArgument(format!(
                "label of degree {} at level {}",
                label_degree(label),
                self.level
            )));
        }
        check_dim(self.degree + 1, slots.len())?;
        let mut field = self.field.join(&c.field())?;
        for s in slots {
            check_dim(self.dim, s.dim())?;
            field = field.join(s.field())?;
        }
        self.field = field;
        for (t, k) in expand_slots(slots) {
            accumulate(&mut self.terms, (label.to_vec(), t), &k * c);
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn degree(&self) -> usize {
        self.degree
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

    pub fn try_add(&self, other: &LabeledChain) -> Result<LabeledChain> {
        check_dim(self.dim, other.dim)?;
        check_dim(self.level, other.level)?;
        check_dim(self.degree, other.degree)?;
        let mut out = self.clone();
        out.field = self.field.join(&other.field)?;
        for (k, c) in &other.terms {
            accumulate(&mut out.terms, k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &LabeledChain) -> Result<LabeledChain> {
        let mut neg = other.clone();
        for c in neg.terms.values_mut() {
            *c = -&*c;
        }
        self.try_add(&neg)
    }

    /// The component at `label` as a plain Hochschild chain.
    pub fn component(&self, label: &[Slot]) -> HochschildChain {
        let mut out = HochschildChain::zero(self.dim, self.degree, self.field.clone());
        for ((l, t), c) in &self.terms {
            if l == label {
                out.terms.insert(t.clone(), c.clone());
            }
        }
        out
    }

    /// Checks that every module slot lies in the ideal its label names.
    pub fn check_membership(&self) -> Result<()> {
        if self.level == 0 {
            return Ok(());
        }
        let structure = CubicalStructure::new(self.dim);
        let mut groups: BTreeMap<(&[Slot], &[Atom]), ModuleSlots> = BTreeMap::new();
        for ((l, t), c) in &self.terms {
            groups.entry((l, &t[1..])).or_default().push((t[0].clone(), c.clone()));
        }
        for ((label, _), atoms) in groups {
            let x = WindowedOperator::from_atoms(self.dim, self.field.clone(), atoms)?;
            for (axis, &slot) in label.iter().enumerate() {
                if !structure.member_slot(&x, axis, slot) {
                    let l: String = label.iter().map(Slot::to_string).collect();
                    return Err(Error::MembershipError(format!(
                        "module slot outside component ({l}) on axis {}",
                        axis + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// Hochschild differential, label by label.
    pub fn hochschild_b(&self) -> Result<LabeledChain> {
        if self.degree == 0 {
            return Err(Error::InvalidArgument("b is undefined in degree 0".into()));
        }
        let mut out = Self::zero(self.dim, self.level, self.degree - 1, self.field.clone());
        for ((l, t), k) in &self.terms {
            for (face, neg) in b_faces(t) {
                accumulate(&mut out.terms, (l.clone(), face), k.clone().signed(neg));
            }
        }
        Ok(out)
    }

    /// The differential `∂ : N^p → N^{p-1}` applied to the module slot.
    pub fn n_partial(&self) -> Result<LabeledChain> {
        if self.level == 0 || self.level > self.dim + 1 {
            return Err(Error::InvalidArgument(format!("∂ is undefined at level {}", self.level)));
        }
        let mut out = Self::zero(self.dim, self.level - 1, self.degree, self.field.clone());
        for ((u, t), c) in &self.terms {
            if self.level == 1 {
                let neg = odd_count(u.iter().filter_map(|s| s.sign()));
                accumulate(&mut out.terms, (Vec::new(), t.clone()), c.clone().signed(neg));
                continue;
            }
            for i in 0..u.len() {
                if u[i] != Slot::Zero {
                    continue;
                }
                let neg = u[i + 1..].iter().filter(|s| **s == Slot::Zero).count() % 2 == 1;
                for s in Sign::BOTH {
                    let mut label = u.clone();
                    label[i] = s.into();
                    accumulate(&mut out.terms, (label, t.clone()), c.clone().signed(neg));
                }
            }
        }
        Ok(out)
    }

    fn push_left(&self, out: &mut LabeledChain, label: Vec<Slot>, op: &WindowedOperator, t: &[Atom], c: Scalar) {
        for (l, k) in op.atoms() {
            let mut t2 = t.to_vec();
            t2[0] = l.compose(&t[0]);
            accumulate(&mut out.terms, (label.clone(), t2), &c * k);
        }
    }

    /// The contracting homotopy `H : N^p → N^{p+1}` for `0 <= p <= n`.
    pub fn homotopy_h(&self, idem: &GoodIdempotents) -> Result<LabeledChain> {
        check_dim(self.dim, idem.dim())?;
        let n = self.dim;
        if self.level > n {
            return Err(Error::InvalidArgument(format!("H is undefined at level {}", self.level)));
        }
        let mut out = Self::zero(n, self.level + 1, self.degree, self.field.clone());
        let mut cache: HashMap<Vec<Sign>, WindowedOperator> = HashMap::new();
        for ((u, t), c) in &self.terms {
            if self.level == 0 {
                for s in sign_vectors(n) {
                    let op = cache.entry(s.clone()).or_insert_with(|| idem.product(&s)).clone();
                    let neg = odd_count(s.iter().copied());
                    let label = s.into_iter().map(Slot::from).collect();
                    self.push_left(&mut out, label, &op, t, c.clone().signed(neg));
                }
                continue;
            }
            let mut b = 0;
            while b < n {
                let Some(gamma_last) = u[b].sign() else { break };
                let gamma_lead: Vec<Sign> = u[..b].iter().map(|s| s.sign().expect("leading signs")).collect();
                for s in sign_vectors(b) {
                    let mut label: Vec<Slot> = s.iter().map(|&x| x.into()).collect();
                    label.push(Slot::Zero);
                    label.extend_from_slice(&u[b + 1..]);
                    let neg = (label_degree(&label) % 2 == 1)
                        ^ odd_count(s.iter().copied())
                        ^ odd_count(gamma_lead.iter().copied());
                    let mut key = s.clone();
                    key.push(gamma_last.flip());
                    let op = cache
                        .entry(key)
                        .or_insert_with(|| idem.product(&s).compose(&idem.projector(b, gamma_last.flip())))
                        .clone();
                    self.push_left(&mut out, label, &op, t, c.clone().signed(neg));
                }
                b += 1;
            }
        }
        Ok(out)
    }

    fn collapse(&self) -> WindowedOperator {
        let atoms = self.terms.iter().map(|((_, t), c)| (t[0].clone(), c.clone()));
        WindowedOperator::from_atoms(self.dim, self.field.clone(), atoms).expect("chain atoms")
    }
}

impl fmt::Display for LabeledChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((l, t), c)| {
                let label: String = l.iter().map(Slot::to_string).collect();
                let slots: Vec<String> = t.iter().map(|a| atom_op(a).to_string()).collect();
                format!("[{label}] ({c}) {}", slots.join(" ⊗ "))
            })
            .collect();
        f.write_str(&parts.join("\n"))
    }
}

type LieKey = (Option<Atom>, Vec<Atom>);

/// Chevalley-Eilenberg chain `sum c * m ⊗ f_1 ∧ ... ∧ f_r`, or `f_1 ∧ ... ∧ f_r`
/// with trivial coefficients. Wedges are kept sorted by atom order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieChain {
    dim: usize,
    degree: usize,
    field: Field,
    with_coefficient: bool,
    terms: BTreeMap<LieKey, Scalar>,
}

impl LieChain {
    pub fn zero(dim: usize, degree: usize, field: Field, with_coefficient: bool) -> Self {
        Self { dim, degree, field, with_coefficient, terms: BTreeMap::new() }
    }

    /// Adds `c * coefficient ⊗ slots[0] ∧ ... ∧ slots[r-1]`.
    pub fn add_wedge(
        &mut self,
        c: &Scalar,
        coefficient: Option<&WindowedOperator>,
        slots: &[WindowedOperator],
    ) -> Result<()> {
        if coefficient.is_some() != self.with_coefficient {
            return Err(Error::InvalidArgument("coefficient slot does not match the chain kind".into()));
        }
        check_dim(self.degree, slots.len())?;
        let mut field = self.field.join(&c.field())?;
        for s in slots.iter().chain(coefficient) {
            check_dim(self.dim, s.dim())?;
            field = field.join(s.field())?;
        }
        self.field = field;
        let coeff_atoms: Vec<(Option<Atom>, Scalar)> = match coefficient {
            Some(m) => m.atoms().map(|(a, k)| (Some(a.clone()), k.clone())).collect(),
            None => vec![(None, Scalar::one())],
        };
        for (m, km) in &coeff_atoms {
            for (w, kw) in expand_slots(slots) {
                self.push(m.clone(), w, &(km * &kw) * c);
            }
        }
        Ok(())
    }

    fn push(&mut self, m: Option<Atom>, wedge: Vec<Atom>, c: Scalar) {
        if let Some((w, odd)) = normalize_wedge(wedge) {
            accumulate(&mut self.terms, (m, w), c.signed(odd));
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn has_coefficient(&self) -> bool {
        self.with_coefficient
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

    pub fn terms(&self) -> impl Iterator<Item = (Option<&Atom>, &[Atom], &Scalar)> {
        self.terms.iter().map(|((m, w), c)| (m.as_ref(), w.as_slice(), c))
    }
}

impl fmt::Display for LieChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((m, w), c)| {
                let slots: Vec<String> = w.iter().map(|a| atom_op(a).to_string()).collect();
                match m {
                    Some(m) => format!("({c}) {} ⊗ {}", atom_op(m), slots.join(" ∧ ")),
                    None => format!("({c}) {}", slots.join(" ∧ ")),
                }
            })
            .collect();
        f.write_str(&parts.join("\n"))
    }
}

/// CE differential with trivial coefficients,
/// `δ(f_0 ∧ ... ∧ f_r) = sum_{i<j} (-1)^{i+j} [f_i, f_j] ∧ f_0 ∧ ..^i..^j.. ∧ f_r`.
pub fn ce_delta(c: &LieChain) -> Result<LieChain> {
    if c.with_coefficient {
        return Err(Error::InvalidArgument("expected trivial coefficients".into()));
    }
    if c.degree < 2 {
        return Err(Error::InvalidArgument("δ needs degree at least 2".into()));
    }
    let mut out = LieChain::zero(c.dim, c.degree - 1, c.field.clone(), false);
    for ((_, w), k) in &c.terms {
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                let rest: Vec<Atom> =
                    w.iter().enumerate().filter(|&(l, _)| l != i && l != j).map(|(_, a)| a.clone()).collect();
                for (bracket, neg) in atom_commutator(&w[i], &w[j]) {
                    let mut wedge = Vec::with_capacity(rest.len() + 1);
                    wedge.push(bracket);
                    wedge.extend_from_slice(&rest);
                    out.push(None, wedge, k.clone().signed(neg ^ ((i + j) % 2 == 1)));
                }
            }
        }
    }
    Ok(out)
}

/// CE differential with coefficients in the adjoint module,
/// `d(m ⊗ g_1 ∧ ... ∧ g_r) = sum_i (-1)^{i+1} [m, g_i] ⊗ ..^i.. + sum_{i<j} (-1)^{i+j} m ⊗ [g_i, g_j] ∧ ..^i..^j..`.
pub fn ce_delta_coefficients(c: &LieChain) -> Result<LieChain> {
    if !c.with_coefficient {
        return Err(Error::InvalidArgument("expected a coefficient slot".into()));
    }
    if c.degree == 0 {
        return Err(Error::InvalidArgument("d is undefined in degree 0".into()));
    }
    let mut out = LieChain::zero(c.dim, c.degree - 1, c.field.clone(), true);
    for ((m, w), k) in &c.terms {
        let m = m.as_ref().expect("coefficient slot");
        for i in 0..w.len() {
            let rest: Vec<Atom> = w.iter().enumerate().filter(|&(l, _)| l != i).map(|(_, a)| a.clone()).collect();
            // 0-based i, so (-1)^{(i+1)+1} = (-1)^i
            for (bracket, neg) in atom_commutator(m, &w[i]) {
                out.push(Some(bracket), rest.clone(), k.clone().signed(neg ^ (i % 2 == 1)));
            }
        }
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                let rest: Vec<Atom> =
                    w.iter().enumerate().filter(|&(l, _)| l != i && l != j).map(|(_, a)| a.clone()).collect();
                for (bracket, neg) in atom_commutator(&w[i], &w[j]) {
                    let mut wedge = Vec::with_capacity(rest.len() + 1);
                    wedge.push(bracket);
                    wedge.extend_from_slice(&rest);
                    out.push(Some(m.clone()), wedge, k.clone().signed(neg ^ ((i + j) % 2 == 1)));
                }
            }
        }
    }
    Ok(out)
}

/// Antisymmetrization `m ⊗ g_1 ∧ ... ∧ g_r ↦ m ⊗ sum_π sgn(π) g_{π^-1(1)} ⊗ ... ⊗ g_{π^-1(r)}`.
pub fn epsilon(c: &LieChain) -> Result<HochschildChain> {
    if !c.with_coefficient {
        return Err(Error::InvalidArgument("ε needs a coefficient slot".into()));
    }
    let mut out = HochschildChain::zero(c.dim, c.degree, c.field.clone());
    let perms = permutations(c.degree);
    for ((m, w), k) in &c.terms {
        for (perm, odd) in &perms {
            let mut t = Vec::with_capacity(w.len() + 1);
            t.push(m.clone().expect("coefficient slot"));
            t.extend(perm.iter().map(|&i| w[i].clone()));
            out.add_atoms(t, k.clone().signed(*odd));
        }
    }
    Ok(out)
}

/// `f_0 ⊗ f_1 ∧ ... ∧ f_n ↦ (-1)^n f_0 ∧ f_1 ∧ ... ∧ f_n`.
pub fn i_prime(c: &LieChain) -> Result<LieChain> {
    if !c.with_coefficient {
        return Err(Error::InvalidArgument("I′ needs a coefficient slot".into()));
    }
    let neg = c.degree % 2 == 1;
    let mut out = LieChain::zero(c.dim, c.degree + 1, c.field.clone(), false);
    for ((m, w), k) in &c.terms {
        let mut wedge = Vec::with_capacity(w.len() + 1);
        wedge.push(m.clone().expect("coefficient slot"));
        wedge.extend_from_slice(w);
        out.push(None, wedge, k.clone().signed(neg));
    }
    Ok(out)
}

fn check_top_degree(c_dim: usize, c_degree: usize, cs: &CubicalStructure, idem: &GoodIdempotents) -> Result<()> {
    check_dim(cs.dim(), c_dim)?;
    check_dim(cs.dim(), idem.dim())?;
    if c_degree != cs.dim() {
        return Err(Error::InvalidArgument(format!("expected a chain of degree {}, found {}", cs.dim(), c_degree)));
    }
    Ok(())
}

/// `φ_HH(f_0 ⊗ ... ⊗ f_n) = (-1)^n τ(B_1(f_1) ∘ ... ∘ B_n(f_n) ∘ f_0)` with
/// `B_k(f) = sum_γ (-1)^γ P_k^{-γ} f P_k^γ`, extended linearly.
pub fn phi_hh_closed(c: &HochschildChain, cs: &CubicalStructure, idem: &GoodIdempotents) -> Result<Scalar> {
    check_top_degree(c.dim, c.degree, cs, idem)?;
    let n = cs.dim();
    let mut factors: HashMap<(usize, &Atom), WindowedOperator> = HashMap::new();
    let mut total = WindowedOperator::zero(n);
    for (t, k) in &c.terms {
        let mut op = atom_op(&t[0]);
        for axis in (0..n).rev() {
            let b = factors
                .entry((axis, &t[axis + 1]))
                .or_insert_with(|| idem.boundary_factor(&atom_op(&t[axis + 1]), axis));
            op = b.compose(&op);
            if op.is_zero() {
                break;
            }
        }
        total = total.try_add(&op.scale(k))?;
    }
    Ok(cs.trace(&total)?.signed(n % 2 == 1))
}

/// `φ_HH` evaluated through the staircase `H, b, H, b, ..., H` of the
/// `N^•` bicomplex, ending in `C_0(A, N^{n+1})` where the trace applies.
pub fn phi_hh_zigzag(c: &HochschildChain, cs: &CubicalStructure, idem: &GoodIdempotents) -> Result<Scalar> {
    check_top_degree(c.dim, c.degree, cs, idem)?;
    let n = cs.dim();
    if !hochschild_b(c)?.is_zero() {
        return Err(Error::NotACycle);
    }
    let mut theta = LabeledChain::embed(c);
    for p in 0..=n {
        theta = theta.homotopy_h(idem)?;
        if p < n {
            theta = theta.hochschild_b()?;
        }
    }
    cs.trace(&theta.collapse())
}

/// The Toeplitz lift `Λ(x) = P_n^+ ∘ x`, certified by checking that the
/// complement `x - Λ(x)` lies in `I_n^-`.
pub fn lambda_toeplitz(
    x: &WindowedOperator,
    cs: &CubicalStructure,
    idem: &GoodIdempotents,
) -> Result<WindowedOperator> {
    check_dim(cs.dim(), x.dim())?;
    toeplitz_lift(x, cs.dim() - 1, idem).map(|(plus, _)| plus)
}

fn toeplitz_lift(
    x: &WindowedOperator,
    axis: usize,
    idem: &GoodIdempotents,
) -> Result<(WindowedOperator, WindowedOperator)> {
    let plus = idem.plus(axis).try_compose(x)?;
    let minus = x.try_sub(&plus)?;
    if !minus.ideal_member(axis, Sign::Minus) {
        return Err(Error::DecompositionError(format!("complement of the lift leaves I_{}^-", axis + 1)));
    }
    Ok((plus, minus))
}

fn check_bounded_from(c: &HochschildChain, first_axis: usize, stage: &str) -> Result<()> {
    for (tail, x) in c.module_slots_by_tail() {
        let _ = tail;
        if let Some(axis) = (first_axis..c.dim).find(|&i| !x.bounded_on(i)) {
            return Err(Error::MembershipError(format!("{stage}: module slot not in I_{}^0", axis + 1)));
        }
    }
    Ok(())
}

/// The connecting map `Ψ : C_s(A, A^s) → C_{s-1}(A, A^{s-1})` at level `s`,
/// where `A^s = I_{s+1}^0 ∩ ... ∩ I_n^0`.
///
/// The module slot is lifted through `Λ_s` to `x^+ ⊗ tail` and `-x^- ⊗ tail`,
/// both are pushed through `b`, and the component of the boundary that lies
/// in `I_s^+ ∩ I_s^-` is read off as `P_s^- b(f_+) + P_s^+ b(f_-)`. The result
/// equals `(-1)^s (P_s^- a_s P_s^+ - P_s^+ a_s P_s^-) a_0 ⊗ a_1 ⊗ ... ⊗ a_{s-1}`.
pub fn psi(c: &HochschildChain, s: usize, idem: &GoodIdempotents) -> Result<HochschildChain> {
    let n = c.dim;
    check_dim(n, idem.dim())?;
    if s == 0 || s > n || c.degree != s {
        return Err(Error::InvalidArgument(format!("Ψ at level {s} needs a chain of degree {s} with 1 <= s <= {n}")));
    }
    check_bounded_from(c, s, "Ψ input")?;
    let axis = s - 1;
    let mut f_plus = HochschildChain::zero(n, s, c.field.clone());
    let mut f_minus = HochschildChain::zero(n, s, c.field.clone());
    for (t, k) in &c.terms {
        let (xp, xm) = toeplitz_lift(&atom_op(&t[0]), axis, idem)?;
        for (a, ka) in xp.atoms() {
            let mut t2 = t.clone();
            t2[0] = a.clone();
            f_plus.add_atoms(t2, k * ka);
        }
        for (a, ka) in xm.atoms() {
            let mut t2 = t.clone();
            t2[0] = a.clone();
            f_minus.add_atoms(t2, -(k * ka));
        }
    }
    let y = hochschild_b(&f_plus)?
        .left_mul(&idem.minus(axis))
        .try_add(&hochschild_b(&f_minus)?.left_mul(&idem.plus(axis)))?;
    check_bounded_from(&y, axis, "Ψ output")?;
    Ok(y)
}

/// `φ_C = τ ∘ Ψ_1 ∘ ... ∘ Ψ_n`.
pub fn phi_c(c: &HochschildChain, cs: &CubicalStructure, idem: &GoodIdempotents) -> Result<Scalar> {
    check_top_degree(c.dim, c.degree, cs, idem)?;
    let mut chain = c.clone();
    for s in (1..=cs.dim()).rev() {
        chain = psi(&chain, s, idem)?;
    }
    cs.trace(&chain.collapse())
}

/// `(-1)^n τ sum_σ sgn(σ) sum_γ (-1)^{γ_1+...+γ_n}
///  (P_1^{-γ_1} ad(f_{σ^-1(1)}) P_1^{γ_1}) ... (P_n^{-γ_n} ad(f_{σ^-1(n)}) P_n^{γ_n}) f_0`
/// on `f_0 ⊗ f_1 ∧ ... ∧ f_n`, with `ad(f)(g) = [f, g]` acting on the
/// operator to its right.
pub fn commutator_formula(c: &LieChain, cs: &CubicalStructure, idem: &GoodIdempotents) -> Result<Scalar> {
    check_top_degree(c.dim, c.degree, cs, idem)?;
    if !c.with_coefficient {
        return Err(Error::InvalidArgument("the commutator formula needs f_0".into()));
    }
    let n = cs.dim();
    let perms = permutations(n);
    let mut total = WindowedOperator::zero(n);
    for ((m, w), k) in &c.terms {
        let f0 = atom_op(m.as_ref().expect("coefficient slot"));
        for (perm, odd) in &perms {
            let mut g = f0.clone();
            for axis in (0..n).rev() {
                let f = atom_op(&w[perm[axis]]);
                let mut next = WindowedOperator::zero(n);
                for gamma in Sign::BOTH {
                    let inner = idem.projector(axis, gamma).try_compose(&g)?;
                    let term = idem.projector(axis, gamma.flip()).try_compose(&f.try_commutator(&inner)?)?;
                    next = next.try_add(&term.scale(&Scalar::one().signed(gamma.is_negative())))?;
                }
                g = next;
                if g.is_zero() {
                    break;
                }
            }
            total = total.try_add(&g.scale(&k.clone().signed(*odd)))?;
        }
    }
    Ok(cs.trace(&total)?.signed(n % 2 == 1))
}

/// Box projector onto `lo <= lambda_axis < hi`.
pub fn window_projector(dim: usize, axis: usize, lo: i64, hi: i64) -> WindowedOperator {
    let mut window = vec![AxisWindow::ALL; dim];
    window[axis] = AxisWindow::new(Some(lo), Some(hi));
    let term = WindowTerm { coefficient: Scalar::one(), shift: MultiIndex::zero(dim), window };
    WindowedOperator::from_window_terms(dim, Field::Rational, &[term]).expect("projector")
}
