//! Multilinear Boolean polynomials (algebraic normal form) and MQ instances.
//!
//! Polynomials live in the quotient ring `GF(2)[x] / (x² - x)`, so every
//! monomial is a set of variables and every polynomial is a set of
//! monomials. Addition is symmetric difference; multiplication unions the
//! variable sets of each pair of monomials.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul};

use crate::error::{Error, Result};
use crate::gf2::BitVector;

/// 1-based identifier of a variable inside a [`VariableRegistry`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u32);

impl VarId {
    pub fn new(index: u32) -> Self {
        assert!(index >= 1, "variable ids are 1-based");
        VarId(index)
    }

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    /// 0-based position of this variable in an assignment vector.
    #[inline]
    pub fn slot(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// Where a variable came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Origin {
    Original,
    QuadratizeAux,
    CopyAux,
    ChainAux,
    RenameAux,
    Counter,
    Comparator,
    Padding,
    Coefficient,
}

impl Origin {
    pub fn tag(self) -> &'static str {
        match self {
            Origin::Original => "original",
            Origin::QuadratizeAux => "quadratize-aux",
            Origin::CopyAux => "copy-aux",
            Origin::ChainAux => "chain-aux",
            Origin::RenameAux => "rename-aux",
            Origin::Counter => "counter",
            Origin::Comparator => "comparator",
            Origin::Padding => "padding",
            Origin::Coefficient => "coefficient",
        }
    }
}

/// Ordered table of variable names; ids are contiguous from 1.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VariableRegistry {
    entries: Vec<(String, Origin)>,
}

impl VariableRegistry {
    pub fn new() -> Self {
        VariableRegistry::default()
    }

    /// Registry of `n` original variables named `x1..xn`.
    pub fn with_originals(n: usize) -> Self {
        let mut reg = VariableRegistry::new();
        for i in 1..=n {
            reg.fresh(format!("x{i}"), Origin::Original);
        }
        reg
    }

    /// Registers a new variable. Names must be unique.
    pub fn fresh(&mut self, name: impl Into<String>, origin: Origin) -> VarId {
        let name = name.into();
        debug_assert!(
            !self.entries.iter().any(|(n, _)| *n == name),
            "duplicate variable name {name}"
        );
        self.entries.push((name, origin));
        VarId(self.entries.len() as u32)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, id: VarId) -> bool {
        id.0 >= 1 && id.slot() < self.entries.len()
    }

    pub fn name(&self, id: VarId) -> &str {
        &self.entries[id.slot()].0
    }

    pub fn origin(&self, id: VarId) -> Origin {
        self.entries[id.slot()].1
    }

    pub fn ids(&self) -> impl Iterator<Item = VarId> + '_ {
        (1..=self.entries.len() as u32).map(VarId)
    }

    pub fn count_origin(&self, origin: Origin) -> usize {
        self.entries.iter().filter(|(_, o)| *o == origin).count()
    }
}

/// Product of distinct variables; the empty product is the constant 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    vars: Vec<VarId>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { vars: Vec::new() }
    }

    pub fn from_vars(vars: impl IntoIterator<Item = VarId>) -> Self {
        let set: BTreeSet<VarId> = vars.into_iter().collect();
        Monomial {
            vars: set.into_iter().collect(),
        }
    }

    pub fn vars(&self) -> &[VarId] {
        &self.vars
    }

    pub fn degree(&self) -> usize {
        self.vars.len()
    }

    pub fn contains(&self, v: VarId) -> bool {
        self.vars.binary_search(&v).is_ok()
    }

    /// Idempotent product: the union of the two variable sets.
    pub fn times(&self, other: &Monomial) -> Monomial {
        let mut vars = Vec::with_capacity(self.vars.len() + other.vars.len());
        let (mut i, mut j) = (0, 0);
        while i < self.vars.len() && j < other.vars.len() {
            match self.vars[i].cmp(&other.vars[j]) {
                std::cmp::Ordering::Less => {
                    vars.push(self.vars[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    vars.push(other.vars[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    vars.push(self.vars[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        vars.extend_from_slice(&self.vars[i..]);
        vars.extend_from_slice(&other.vars[j..]);
        Monomial { vars }
    }

    pub fn eval(&self, a: &Assignment) -> Result<bool> {
        for &v in &self.vars {
            if !a.value(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

// degree first, then lexicographic on sorted indices
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.vars
            .len()
            .cmp(&other.vars.len())
            .then_with(|| self.vars.cmp(&other.vars))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A multilinear polynomial over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BooleanPolynomial {
    terms: BTreeSet<Monomial>,
}

impl BooleanPolynomial {
    pub fn zero() -> Self {
        BooleanPolynomial::default()
    }

    pub fn one() -> Self {
        BooleanPolynomial::constant(true)
    }

    pub fn constant(value: bool) -> Self {
        let mut p = BooleanPolynomial::zero();
        if value {
            p.terms.insert(Monomial::one());
        }
        p
    }

    pub fn var(v: VarId) -> Self {
        BooleanPolynomial::from_monomial(Monomial::from_vars([v]))
    }

    pub fn from_monomial(m: Monomial) -> Self {
        let mut p = BooleanPolynomial::zero();
        p.terms.insert(m);
        p
    }

    /// Sum of the given monomials; repeated monomials cancel.
    pub fn from_monomials(ms: impl IntoIterator<Item = Monomial>) -> Self {
        let mut p = BooleanPolynomial::zero();
        for m in ms {
            p.toggle(m);
        }
        p
    }

    /// Sum of monomials given as lists of variable indices; `&[]` is the constant 1.
    pub fn from_index_terms(terms: &[&[u32]]) -> Self {
        BooleanPolynomial::from_monomials(
            terms
                .iter()
                .map(|t| Monomial::from_vars(t.iter().map(|&i| VarId::new(i)))),
        )
    }

    /// Adds a single monomial in place.
    pub fn toggle(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|m| m.degree() == 0)
    }

    pub fn constant_term(&self) -> bool {
        self.terms.contains(&Monomial::one())
    }

    /// Maximum monomial degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> usize {
        self.terms.iter().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        self.terms.iter().flat_map(|m| m.vars().iter().copied()).collect()
    }

    pub fn max_var(&self) -> Option<VarId> {
        self.terms.iter().filter_map(|m| m.vars().last().copied()).max()
    }

    pub fn add(&self, other: &BooleanPolynomial) -> BooleanPolynomial {
        let terms = self.terms.symmetric_difference(&other.terms).cloned().collect();
        BooleanPolynomial { terms }
    }

    pub fn mul(&self, other: &BooleanPolynomial) -> BooleanPolynomial {
        let mut out = BooleanPolynomial::zero();
        for a in &self.terms {
            for b in &other.terms {
                out.toggle(a.times(b));
            }
        }
        out
    }

    pub fn eval(&self, a: &Assignment) -> Result<bool> {
        let mut acc = false;
        for m in &self.terms {
            acc ^= m.eval(a)?;
        }
        Ok(acc)
    }

    /// Fixes `var` to `value`; `var` no longer occurs in the result.
    pub fn substitute(&self, var: VarId, value: bool) -> BooleanPolynomial {
        let mut out = BooleanPolynomial::zero();
        for m in &self.terms {
            if m.contains(var) {
                if value {
                    out.toggle(Monomial::from_vars(m.vars().iter().copied().filter(|&v| v != var)));
                }
            } else {
                out.toggle(m.clone());
            }
        }
        out
    }

    /// Renames variables through `map`; unmapped variables are kept.
    pub fn rename(&self, map: &BTreeMap<VarId, VarId>) -> BooleanPolynomial {
        BooleanPolynomial::from_monomials(
            self.terms
                .iter()
                .map(|m| Monomial::from_vars(m.vars().iter().map(|v| *map.get(v).unwrap_or(v)))),
        )
    }
}

impl fmt::Display for BooleanPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for m in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if m.degree() == 0 {
                f.write_str("1")?;
            } else {
                let names: Vec<String> = m.vars().iter().map(|v| v.to_string()).collect();
                f.write_str(&names.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BooleanPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Add for &BooleanPolynomial {
    type Output = BooleanPolynomial;
    fn add(self, rhs: Self) -> BooleanPolynomial {
        BooleanPolynomial::add(self, rhs)
    }
}

impl Mul for &BooleanPolynomial {
    type Output = BooleanPolynomial;
    fn mul(self, rhs: Self) -> BooleanPolynomial {
        BooleanPolynomial::mul(self, rhs)
    }
}

pub fn poly_add(p: &BooleanPolynomial, q: &BooleanPolynomial) -> BooleanPolynomial {
    p.add(q)
}

pub fn poly_mul(p: &BooleanPolynomial, q: &BooleanPolynomial) -> BooleanPolynomial {
    p.mul(q)
}

pub fn poly_eval(p: &BooleanPolynomial, a: &Assignment) -> Result<bool> {
    p.eval(a)
}

pub fn poly_substitute(p: &BooleanPolynomial, var: VarId, value: bool) -> BooleanPolynomial {
    p.substitute(var, value)
}

/// Values for variables `x1..x_len`, stored at 0-based slots.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Assignment {
    values: BitVector,
}

impl Assignment {
    pub fn zeros(len: usize) -> Self {
        Assignment {
            values: BitVector::zeros(len),
        }
    }

    pub fn from_bits(values: BitVector) -> Self {
        Assignment { values }
    }

    pub fn bits(&self) -> &BitVector {
        &self.values
    }

    pub fn into_bits(self) -> BitVector {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, v: VarId) -> Result<bool> {
        if v.0 == 0 || v.slot() >= self.values.len() {
            return Err(Error::UncoveredVariable(v.0));
        }
        Ok(self.values.get(v.slot()))
    }

    pub fn set(&mut self, v: VarId, value: bool) {
        self.values.set(v.slot(), value);
    }

    /// The first `n` values.
    pub fn prefix(&self, n: usize) -> Result<Assignment> {
        Ok(Assignment {
            values: self.values.slice(0, n)?,
        })
    }

    /// Extends with zeros up to length `len`.
    pub fn padded(&self, len: usize) -> Assignment {
        let mut out = Assignment::zeros(len.max(self.len()));
        for i in self.values.support() {
            out.values.set(i, true);
        }
        out
    }
}

/// A system of Boolean polynomial equations `f_h = 0` of degree at most two.
#[derive(Clone, Debug)]
pub struct MqInstance {
    nvars: usize,
    equations: Vec<BooleanPolynomial>,
    registry: VariableRegistry,
}

// Registry names are annotations: two instances are equal when they have the
// same variable count and the same equations.
impl PartialEq for MqInstance {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.equations == other.equations
    }
}

impl Eq for MqInstance {}

impl MqInstance {
    pub fn new(equations: Vec<BooleanPolynomial>, registry: VariableRegistry) -> Result<Self> {
        let nvars = registry.len();
        for (h, f) in equations.iter().enumerate() {
            if f.degree() > 2 {
                return Err(Error::InvalidInstance(format!(
                    "equation {} has degree {} > 2",
                    h + 1,
                    f.degree()
                )));
            }
            if let Some(v) = f.max_var() {
                if v.slot() >= nvars {
                    return Err(Error::InvalidInstance(format!(
                        "equation {} uses {v} but only {nvars} variables exist",
                        h + 1
                    )));
                }
            }
        }
        Ok(MqInstance {
            nvars,
            equations,
            registry,
        })
    }

    /// Instance over `nvars` original variables named `x1..xn`.
    pub fn with_default_names(nvars: usize, equations: Vec<BooleanPolynomial>) -> Result<Self> {
        MqInstance::new(equations, VariableRegistry::with_originals(nvars))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn num_equations(&self) -> usize {
        self.equations.len()
    }

    pub fn equations(&self) -> &[BooleanPolynomial] {
        &self.equations
    }

    pub fn registry(&self) -> &VariableRegistry {
        &self.registry
    }

    /// True when every equation vanishes at `a`.
    pub fn is_satisfied_by(&self, a: &Assignment) -> Result<bool> {
        for f in &self.equations {
            if f.eval(a)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Bits needed to write the instance: `m (C(n,2) + n + 1)`.
    pub fn size(&self) -> u128 {
        mq_size_formula(self.nvars as u128, self.equations.len() as u128)
    }
}

pub fn mq_size(inst: &MqInstance) -> u128 {
    inst.size()
}

pub fn mq_size_formula(nvars: u128, m: u128) -> u128 {
    let pairs = if nvars >= 1 { nvars * (nvars - 1) / 2 } else { 0 };
    m * (pairs + nvars + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[&[u32]]) -> BooleanPolynomial {
        BooleanPolynomial::from_index_terms(terms)
    }

    fn assign(bits: &[u8]) -> Assignment {
        Assignment::from_bits(BitVector::from_bits(bits))
    }

    #[test]
    fn addition_examples() {
        let a = p(&[&[1, 2], &[3]]);
        assert!((&a + &a).is_zero());
        assert_eq!(&a + &p(&[&[3], &[]]), p(&[&[1, 2], &[]]));
        assert_eq!(&a + &BooleanPolynomial::zero(), a);
    }

    #[test]
    fn multiplication_examples() {
        let x = p(&[&[1]]);
        assert_eq!(&x * &x, x);
        // (u1 + v1)(u2 + v2 + 1) with u = 1,2 and v = 3,4
        let lhs = p(&[&[1], &[3]]);
        let rhs = p(&[&[2], &[4], &[]]);
        let prod = &lhs * &rhs;
        assert_eq!(prod.num_terms(), 6);
        assert_eq!(prod, p(&[&[1, 2], &[1, 4], &[1], &[2, 3], &[3, 4], &[3]]));
        assert_eq!(&lhs * &BooleanPolynomial::one(), lhs);
    }

    #[test]
    fn evaluation_examples() {
        let f = p(&[&[1, 2], &[3]]);
        assert!(!f.eval(&assign(&[1, 1, 1])).unwrap());
        assert!(f.eval(&assign(&[1, 1, 0])).unwrap());
        assert!(BooleanPolynomial::one().eval(&assign(&[0, 1])).unwrap());
        assert_eq!(f.eval(&assign(&[1, 1])), Err(Error::UncoveredVariable(3)));
    }

    #[test]
    fn variety_of_xy_plus_z() {
        let f = p(&[&[1, 2], &[3]]);
        let zeros: Vec<u64> = (0..8u64)
            .filter(|&v| !f.eval(&Assignment::from_bits(BitVector::from_int(v, 3))).unwrap())
            .collect();
        // (0,0,0), (1,0,0), (0,1,0), (1,1,1) little-endian
        assert_eq!(zeros, vec![0, 1, 2, 7]);
    }

    #[test]
    fn substitution_examples() {
        let f = p(&[&[1, 2], &[3]]);
        assert_eq!(f.substitute(VarId(2), true), p(&[&[1], &[3]]));
        assert_eq!(f.substitute(VarId(2), false), p(&[&[3]]));
    }

    #[test]
    fn monomial_order_is_degree_then_lex() {
        let f = p(&[&[2, 3], &[1], &[], &[1, 4], &[2]]);
        let order: Vec<Vec<u32>> = f.monomials().map(|m| m.vars().iter().map(|v| v.0).collect()).collect();
        assert_eq!(order, vec![vec![], vec![1], vec![2], vec![1, 4], vec![2, 3]]);
    }

    #[test]
    fn mq_size_examples() {
        assert_eq!(mq_size_formula(3, 2), 14);
        assert_eq!(mq_size_formula(1, 1), 2);
        assert_eq!(mq_size_formula(4, 3), 33);
    }

    #[test]
    fn instance_rejects_high_degree_and_unknown_vars() {
        assert!(MqInstance::with_default_names(3, vec![p(&[&[1, 2, 3]])]).is_err());
        assert!(MqInstance::with_default_names(2, vec![p(&[&[3]])]).is_err());
        assert!(MqInstance::with_default_names(3, vec![p(&[&[1, 2], &[3]])]).is_ok());
    }
}
