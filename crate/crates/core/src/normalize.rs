//! Degree reduction and conversion of quadratic systems to standard form.
//!
//! A standard-form system consists of variable-disjoint triples `x·y + z = 0`
//! and linear equations in at most three variables, where every variable
//! belongs to exactly one triple. Every auxiliary variable introduced along
//! the way is recorded as a [`Definition`], so solutions can be carried
//! forward ([`extend_witness`]) and back ([`pull_back_witness`]).

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::poly::{Assignment, BooleanPolynomial, Monomial, MqInstance, Origin, VarId, VariableRegistry};

/// How a defined variable is computed from earlier ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DefKind {
    /// `new = a · b`
    Product(VarId, VarId),
    /// `new = old`
    Alias(VarId),
    /// `new = a ⊕ b`
    Chain(VarId, VarId),
    /// `new = c`; used for free padding slots and coefficient variables.
    Const(bool),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Definition {
    pub new: VarId,
    pub kind: DefKind,
}

impl Definition {
    pub fn operands(&self) -> Vec<VarId> {
        match self.kind {
            DefKind::Product(a, b) | DefKind::Chain(a, b) => vec![a, b],
            DefKind::Alias(a) => vec![a],
            DefKind::Const(_) => vec![],
        }
    }

    /// The definition as a polynomial `new + rhs` that vanishes when it holds.
    pub fn as_equation(&self) -> BooleanPolynomial {
        let new = BooleanPolynomial::var(self.new);
        let rhs = match self.kind {
            DefKind::Product(a, b) => BooleanPolynomial::from_monomial(Monomial::from_vars([a, b])),
            DefKind::Alias(a) => BooleanPolynomial::var(a),
            DefKind::Chain(a, b) => &BooleanPolynomial::var(a) + &BooleanPolynomial::var(b),
            DefKind::Const(c) => BooleanPolynomial::constant(c),
        };
        &new + &rhs
    }

    /// Value of `new` given the values of its operands.
    pub fn evaluate(&self, a: &Assignment) -> Result<bool> {
        Ok(match self.kind {
            DefKind::Product(x, y) => a.value(x)? & a.value(y)?,
            DefKind::Alias(x) => a.value(x)?,
            DefKind::Chain(x, y) => a.value(x)? ^ a.value(y)?,
            DefKind::Const(c) => c,
        })
    }
}

/// Ordered definitions of every variable introduced after the originals.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TransformLog {
    pub original_var_count: usize,
    pub defs: Vec<Definition>,
}

impl TransformLog {
    pub fn new(original_var_count: usize) -> Self {
        TransformLog {
            original_var_count,
            defs: Vec::new(),
        }
    }

    /// Variables covered by the originals plus every definition.
    pub fn total_vars(&self) -> usize {
        self.original_var_count + self.defs.len()
    }

    pub fn push(&mut self, new: VarId, kind: DefKind) {
        self.defs.push(Definition { new, kind });
    }

    fn append(&mut self, other: TransformLog) {
        self.defs.extend(other.defs);
    }

    /// Checks that each definition introduces a variable not seen before and
    /// only reads variables that precede it.
    pub fn check_order(&self) -> Result<()> {
        let mut known: BTreeSet<VarId> = (1..=self.original_var_count as u32).map(VarId).collect();
        for d in &self.defs {
            if known.contains(&d.new) {
                return Err(Error::InvalidInstance(format!("{} is defined twice", d.new)));
            }
            if let Some(op) = d.operands().into_iter().find(|op| !known.contains(op)) {
                return Err(Error::InvalidInstance(format!(
                    "definition of {} reads {op} before it is defined",
                    d.new
                )));
            }
            known.insert(d.new);
        }
        Ok(())
    }
}

/// Replays every definition in order on top of `partial`.
///
/// The result has length `max(partial.len(), largest defined id)`.
pub fn extend_witness(log: &TransformLog, partial: &Assignment) -> Result<Assignment> {
    if partial.len() < log.original_var_count {
        return Err(Error::Dimension(format!(
            "assignment covers {} variables but {} originals are required",
            partial.len(),
            log.original_var_count
        )));
    }
    let top = log.defs.iter().map(|d| d.new.slot() + 1).max().unwrap_or(0);
    let mut full = partial.padded(top);
    for d in &log.defs {
        let value = d.evaluate(&full)?;
        full.set(d.new, value);
    }
    Ok(full)
}

/// Restriction of a full assignment to the original variables.
pub fn pull_back_witness(log: &TransformLog, full: &Assignment) -> Result<Assignment> {
    full.prefix(log.original_var_count)
}

fn aux_name(origin: Origin, id: u32) -> String {
    let prefix = match origin {
        Origin::Original => "x",
        Origin::QuadratizeAux => "y",
        Origin::CopyAux => "c",
        Origin::ChainAux => "s",
        Origin::RenameAux => "X",
        Origin::Counter => "a",
        Origin::Comparator => "u",
        Origin::Padding => "p",
        Origin::Coefficient => "k",
    };
    format!("{prefix}{id}")
}

/// Registers a fresh variable named after its origin and id.
pub fn fresh_aux(registry: &mut VariableRegistry, origin: Origin) -> VarId {
    let id = registry.len() as u32 + 1;
    registry.fresh(aux_name(origin, id), origin)
}

/// Result of [`quadratize`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quadratized {
    /// Degree-≤2 equations: the product definitions of each high-degree
    /// monomial followed by the rewritten input equation.
    pub equations: Vec<BooleanPolynomial>,
    pub log: TransformLog,
}

/// Rewrites `eq = 0` as a degree-≤2 system.
///
/// Each monomial `x_{i1} ⋯ x_{id}` of degree `d > 2` gets its own chain
/// `y1 = x_{i1} x_{i2}`, `y_k = y_{k-1} x_{i_{k+1}}` of `d - 2` fresh
/// variables and is replaced by `y_{d-2} x_{id}`. Chains are not shared
/// between monomials.
pub fn quadratize(eq: &BooleanPolynomial, registry: &mut VariableRegistry) -> Quadratized {
    let mut log = TransformLog::new(registry.len());
    let mut equations = Vec::new();
    let mut rewritten = BooleanPolynomial::zero();
    for m in eq.monomials() {
        let vars = m.vars();
        if vars.len() <= 2 {
            rewritten.toggle(m.clone());
            continue;
        }
        let mut acc = vars[0];
        for &next in &vars[1..vars.len() - 1] {
            let y = fresh_aux(registry, Origin::QuadratizeAux);
            log.push(y, DefKind::Product(acc, next));
            equations.push(log.defs.last().unwrap().as_equation());
            acc = y;
        }
        rewritten.toggle(Monomial::from_vars([acc, vars[vars.len() - 1]]));
    }
    equations.push(rewritten);
    Quadratized { equations, log }
}

/// A linear equation `Σ vars + delta = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearEq {
    pub vars: Vec<VarId>,
    pub delta: bool,
}

impl LinearEq {
    pub fn new(vars: impl IntoIterator<Item = VarId>, delta: bool) -> Self {
        let mut vars: Vec<VarId> = vars.into_iter().collect();
        vars.sort();
        LinearEq { vars, delta }
    }

    pub fn as_polynomial(&self) -> BooleanPolynomial {
        let mut p = BooleanPolynomial::constant(self.delta);
        for &v in &self.vars {
            p = &p + &BooleanPolynomial::var(v);
        }
        p
    }

    pub fn eval(&self, a: &Assignment) -> Result<bool> {
        let mut acc = self.delta;
        for &v in &self.vars {
            acc ^= a.value(v)?;
        }
        Ok(acc)
    }
}

/// Splits `Σ vars + delta = 0` into equations of at most three variables.
///
/// With `l >= 4` variables this yields `l - 2` equations over `2l - 3`
/// variables, chaining running sums `s_i = x_1 ⊕ ⋯ ⊕ x_i`; the constant goes
/// to the last equation. Shorter equations are returned unchanged.
pub fn split_linear(vars: &[VarId], delta: bool, registry: &mut VariableRegistry) -> (Vec<LinearEq>, TransformLog) {
    let mut log = TransformLog::new(registry.len());
    let l = vars.len();
    if l <= 3 {
        return (vec![LinearEq::new(vars.iter().copied(), delta)], log);
    }
    let mut eqs = Vec::with_capacity(l - 2);
    let mut prev = fresh_aux(registry, Origin::ChainAux);
    log.push(prev, DefKind::Chain(vars[0], vars[1]));
    eqs.push(LinearEq::new([vars[0], vars[1], prev], false));
    for &x in &vars[2..l - 2] {
        let next = fresh_aux(registry, Origin::ChainAux);
        log.push(next, DefKind::Chain(prev, x));
        eqs.push(LinearEq::new([prev, x, next], false));
        prev = next;
    }
    eqs.push(LinearEq::new([prev, vars[l - 2], vars[l - 1]], delta));
    (eqs, log)
}

/// The triple `x·y + z = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadTriple {
    pub x: VarId,
    pub y: VarId,
    pub z: VarId,
}

impl QuadTriple {
    pub fn vars(&self) -> [VarId; 3] {
        [self.x, self.y, self.z]
    }

    pub fn as_polynomial(&self) -> BooleanPolynomial {
        &BooleanPolynomial::from_monomial(Monomial::from_vars([self.x, self.y])) + &BooleanPolynomial::var(self.z)
    }

    pub fn eval(&self, a: &Assignment) -> Result<bool> {
        Ok((a.value(self.x)? & a.value(self.y)?) ^ a.value(self.z)?)
    }
}

/// A system in standard form together with the log back to its source.
#[derive(Clone, Debug)]
pub struct StandardFormSystem {
    pub quad_eqs: Vec<QuadTriple>,
    pub lin_eqs: Vec<LinearEq>,
    pub registry: VariableRegistry,
    pub log: TransformLog,
    /// Number of trailing triples that only pad otherwise uncovered variables.
    pub padding_triples: usize,
}

// Registry names are annotations and are not compared.
impl PartialEq for StandardFormSystem {
    fn eq(&self, other: &Self) -> bool {
        self.quad_eqs == other.quad_eqs
            && self.lin_eqs == other.lin_eqs
            && self.log == other.log
            && self.padding_triples == other.padding_triples
            && self.registry.len() == other.registry.len()
    }
}

impl Eq for StandardFormSystem {}

impl StandardFormSystem {
    pub fn q(&self) -> usize {
        self.quad_eqs.len()
    }

    pub fn lambda(&self) -> usize {
        self.lin_eqs.len()
    }

    pub fn num_vars(&self) -> usize {
        self.registry.len()
    }

    pub fn original_vars(&self) -> usize {
        self.log.original_var_count
    }

    /// Triples that encode products of the source system (everything but padding).
    pub fn product_triples(&self) -> usize {
        self.quad_eqs.len() - self.padding_triples
    }

    /// True for the canonical unsatisfiable system (a variable-free `1 = 0` row).
    pub fn is_contradiction(&self) -> bool {
        self.lin_eqs.iter().any(|e| e.vars.is_empty() && e.delta)
    }

    /// The system as plain polynomial equations: triples first, then linear rows.
    pub fn to_mq(&self) -> MqInstance {
        let mut eqs: Vec<BooleanPolynomial> = self.quad_eqs.iter().map(QuadTriple::as_polynomial).collect();
        eqs.extend(self.lin_eqs.iter().map(LinearEq::as_polynomial));
        MqInstance::new(eqs, self.registry.clone()).expect("standard form is quadratic")
    }

    pub fn is_satisfied_by(&self, a: &Assignment) -> Result<bool> {
        for t in &self.quad_eqs {
            if t.eval(a)? {
                return Ok(false);
            }
        }
        for l in &self.lin_eqs {
            if l.eval(a)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Checks every structural requirement of standard form.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.registry.len();
        let mut owner: BTreeMap<VarId, usize> = BTreeMap::new();
        for (b, t) in self.quad_eqs.iter().enumerate() {
            for v in t.vars() {
                if !self.registry.contains(v) {
                    return Err(Error::InvalidInstance(format!("triple {} uses unknown {v}", b + 1)));
                }
                if let Some(prev) = owner.insert(v, b) {
                    return Err(Error::InvalidInstance(format!(
                        "{v} appears in triples {} and {}",
                        prev + 1,
                        b + 1
                    )));
                }
            }
        }
        for (i, l) in self.lin_eqs.iter().enumerate() {
            if l.vars.len() > 3 {
                return Err(Error::InvalidInstance(format!(
                    "linear equation {} has {} variables",
                    i + 1,
                    l.vars.len()
                )));
            }
            if l.vars.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidInstance(format!(
                    "linear equation {} repeats a variable",
                    i + 1
                )));
            }
            if let Some(v) = l.vars.iter().find(|v| !owner.contains_key(v)) {
                return Err(Error::InvalidInstance(format!(
                    "{v} in linear equation {} is in no triple",
                    i + 1
                )));
            }
        }
        if n != 3 * self.quad_eqs.len() {
            return Err(Error::InvalidInstance(format!(
                "{n} variables but {} triples",
                self.quad_eqs.len()
            )));
        }
        if self.log.total_vars() != n {
            return Err(Error::InvalidInstance(format!(
                "log covers {} variables, registry has {n}",
                self.log.total_vars()
            )));
        }
        self.log.check_order()
    }
}

/// Options for [`to_standard_form_with`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StandardFormOptions {
    /// Append one variable per coefficient of the source system, pinned by a
    /// single-variable linear equation, so the output determines the input.
    pub injective: bool,
}

pub fn to_standard_form(inst: &MqInstance) -> StandardFormSystem {
    to_standard_form_with(inst, StandardFormOptions::default())
}

/// Converts a degree-≤2 system to standard form.
///
/// Per equation: every variable of the quadratic part is renamed to a fresh
/// alias `X_{h,k}`; each quadratic monomial gets a triple whose first two
/// slots hold the alias on its first use and a fresh copy afterwards; the
/// remaining linear polynomial is split into ≤3-variable rows. Finally every
/// variable not yet in a triple is padded, two per triple.
///
/// A constant `1 = 0` equation makes the whole result the canonical
/// contradiction: originals padded plus a single variable-free row `1 = 0`.
/// In injective mode the coefficient variables are still appended.
pub fn to_standard_form_with(inst: &MqInstance, opts: StandardFormOptions) -> StandardFormSystem {
    let n = inst.nvars();
    let mut registry = VariableRegistry::new();
    for id in inst.registry().ids() {
        registry.fresh(inst.registry().name(id), Origin::Original);
    }
    let mut log = TransformLog::new(n);
    let mut quad_eqs = Vec::new();
    let mut lin_eqs = Vec::new();

    let contradiction = inst.equations().iter().any(|f| f.is_constant() && f.constant_term());
    if contradiction {
        lin_eqs.push(LinearEq::new([], true));
    }

    for f in inst.equations().iter().filter(|_| !contradiction) {
        if f.is_zero() {
            continue;
        }
        let quadratic: Vec<&Monomial> = f.monomials().filter(|m| m.degree() == 2).collect();
        let mut renamed: BTreeMap<VarId, VarId> = BTreeMap::new();
        for v in quadratic
            .iter()
            .flat_map(|m| m.vars().iter().copied())
            .collect::<BTreeSet<_>>()
        {
            let alias = fresh_aux(&mut registry, Origin::RenameAux);
            log.push(alias, DefKind::Alias(v));
            lin_eqs.push(LinearEq::new([alias, v], false));
            renamed.insert(v, alias);
        }
        let mut used: BTreeSet<VarId> = BTreeSet::new();
        let mut slot =
            |v: VarId, registry: &mut VariableRegistry, log: &mut TransformLog, lin_eqs: &mut Vec<LinearEq>| {
                let alias = renamed[&v];
                if used.insert(alias) {
                    alias
                } else {
                    let copy = fresh_aux(registry, Origin::CopyAux);
                    log.push(copy, DefKind::Alias(alias));
                    lin_eqs.push(LinearEq::new([copy, alias], false));
                    copy
                }
            };
        let mut linear_vars = Vec::new();
        for m in &quadratic {
            let a = slot(m.vars()[0], &mut registry, &mut log, &mut lin_eqs);
            let b = slot(m.vars()[1], &mut registry, &mut log, &mut lin_eqs);
            let z = fresh_aux(&mut registry, Origin::QuadratizeAux);
            log.push(z, DefKind::Product(a, b));
            quad_eqs.push(QuadTriple { x: a, y: b, z });
            linear_vars.push(z);
        }
        for m in f.monomials().filter(|m| m.degree() == 1) {
            let v = m.vars()[0];
            linear_vars.push(*renamed.get(&v).unwrap_or(&v));
        }
        let (eqs, chain_log) = split_linear(&linear_vars, f.constant_term(), &mut registry);
        log.append(chain_log);
        lin_eqs.extend(eqs);
    }

    if opts.injective {
        for (h, f) in inst.equations().iter().enumerate() {
            for coeff in coefficient_vector(f, n) {
                let k = registry.fresh(format!("k{}_{}", h + 1, registry.len() + 1), Origin::Coefficient);
                log.push(k, DefKind::Const(coeff));
                lin_eqs.push(LinearEq::new([k], coeff));
            }
        }
    }

    let padding = pad_orphans(&mut registry, &mut log, &mut quad_eqs);
    StandardFormSystem {
        quad_eqs,
        lin_eqs,
        registry,
        log,
        padding_triples: padding,
    }
}

/// Reads `inst` as a standard-form system if it already is one.
///
/// Every non-zero equation must be either a triple `x·y + z` or a linear
/// equation in at most three variables, the triples must be variable-disjoint
/// and cover every variable. The result has an empty log.
pub fn recognize_standard_form(inst: &MqInstance) -> Option<StandardFormSystem> {
    let mut quad_eqs = Vec::new();
    let mut lin_eqs = Vec::new();
    for f in inst.equations() {
        if f.is_zero() {
            continue;
        }
        if f.degree() == 2 {
            let terms: Vec<&Monomial> = f.monomials().collect();
            match terms.as_slice() {
                [z, xy] if z.degree() == 1 && xy.degree() == 2 && !xy.contains(z.vars()[0]) => {
                    quad_eqs.push(QuadTriple {
                        x: xy.vars()[0],
                        y: xy.vars()[1],
                        z: z.vars()[0],
                    });
                }
                _ => return None,
            }
        } else {
            let vars: Vec<VarId> = f.monomials().filter(|m| m.degree() == 1).map(|m| m.vars()[0]).collect();
            if vars.len() > 3 {
                return None;
            }
            lin_eqs.push(LinearEq::new(vars, f.constant_term()));
        }
    }
    let sf = StandardFormSystem {
        quad_eqs,
        lin_eqs,
        registry: inst.registry().clone(),
        log: TransformLog::new(inst.nvars()),
        padding_triples: 0,
    };
    sf.check_invariants().ok().map(|_| sf)
}

/// Coefficients of `f` in the fixed order `γ_ij (i<j), λ_i, δ`.
pub fn coefficient_vector(f: &BooleanPolynomial, nvars: usize) -> Vec<bool> {
    let has = |vars: &[u32]| {
        f.monomials()
            .any(|m| m.vars().iter().map(|v| v.index()).eq(vars.iter().copied()))
    };
    let n = nvars as u32;
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            out.push(has(&[i, j]));
        }
    }
    for i in 1..=n {
        out.push(has(&[i]));
    }
    out.push(f.constant_term());
    out
}

// Covers every variable outside all triples with a padding triple. Two
// uncovered variables share one triple (w1, w2, r) with r = w1·w2; an odd one
// out gets (w, p, r) with p = 0. The first two slots of x·y + z = 0 are free,
// so padding never constrains the padded variables.
fn pad_orphans(registry: &mut VariableRegistry, log: &mut TransformLog, quad_eqs: &mut Vec<QuadTriple>) -> usize {
    let covered: BTreeSet<VarId> = quad_eqs.iter().flat_map(|t| t.vars()).collect();
    let orphans: Vec<VarId> = registry.ids().filter(|v| !covered.contains(v)).collect();
    let before = quad_eqs.len();
    for pair in orphans.chunks(2) {
        let (w1, w2) = match *pair {
            [a, b] => (a, b),
            [a] => {
                let p = fresh_aux(registry, Origin::Padding);
                log.push(p, DefKind::Const(false));
                (a, p)
            }
            _ => unreachable!(),
        };
        let r = fresh_aux(registry, Origin::Padding);
        log.push(r, DefKind::Product(w1, w2));
        quad_eqs.push(QuadTriple { x: w1, y: w2, z: r });
    }
    quad_eqs.len() - before
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::BitVector;

    fn p(terms: &[&[u32]]) -> BooleanPolynomial {
        BooleanPolynomial::from_index_terms(terms)
    }

    fn all_assignments(n: usize) -> impl Iterator<Item = Assignment> {
        (0..1u64 << n).map(move |v| Assignment::from_bits(BitVector::from_int(v, n)))
    }

    #[test]
    fn quadratize_degree_four_monomial() {
        let mut reg = VariableRegistry::with_originals(4);
        let q = quadratize(&p(&[&[1, 2, 3, 4], &[]]), &mut reg);
        assert_eq!(reg.len(), 6);
        let (z1, z2) = (VarId(5), VarId(6));
        assert_eq!(
            q.log.defs,
            vec![
                Definition {
                    new: z1,
                    kind: DefKind::Product(VarId(1), VarId(2))
                },
                Definition {
                    new: z2,
                    kind: DefKind::Product(z1, VarId(3))
                },
            ]
        );
        assert_eq!(q.equations.len(), 3);
        assert_eq!(q.equations[2], p(&[&[4, 6], &[]]));
    }

    #[test]
    fn quadratize_leaves_quadratic_input_alone() {
        let mut reg = VariableRegistry::with_originals(3);
        let f = p(&[&[1, 2], &[3]]);
        let q = quadratize(&f, &mut reg);
        assert_eq!(q.equations, vec![f]);
        assert!(q.log.defs.is_empty());
        assert_eq!(reg.len(), 3);
    }

    #[test]
    fn quadratize_mixed_degree_example() {
        let mut reg = VariableRegistry::with_originals(4);
        let f = p(&[&[1, 2, 4], &[1, 3, 4], &[2, 3], &[1]]);
        let q = quadratize(&f, &mut reg);
        let (y1, y2) = (VarId(5), VarId(6));
        assert_eq!(q.equations.len(), 3);
        assert_eq!(q.log.defs[0].kind, DefKind::Product(VarId(1), VarId(2)));
        assert_eq!(q.log.defs[1].kind, DefKind::Product(VarId(1), VarId(3)));
        assert_eq!(q.equations[2], p(&[&[y1.0, 4], &[y2.0, 4], &[2, 3], &[1]]));
        // equisatisfiable: every x extends uniquely and keeps f's value
        for a in all_assignments(4) {
            let full = extend_witness(&q.log, &a).unwrap();
            assert!(!q.equations[0].eval(&full).unwrap());
            assert!(!q.equations[1].eval(&full).unwrap());
            assert_eq!(q.equations[2].eval(&full).unwrap(), f.eval(&a).unwrap());
        }
    }

    #[test]
    fn split_four_terms() {
        let mut reg = VariableRegistry::with_originals(4);
        let vars: Vec<VarId> = (1..=4).map(VarId).collect();
        let (eqs, log) = split_linear(&vars, false, &mut reg);
        let y2 = VarId(5);
        assert_eq!(
            eqs,
            vec![
                LinearEq::new([VarId(1), VarId(2), y2], false),
                LinearEq::new([y2, VarId(3), VarId(4)], false),
            ]
        );
        let full = extend_witness(&log, &Assignment::from_bits(BitVector::from_bits(&[1, 0, 1, 0]))).unwrap();
        assert!(full.value(y2).unwrap());
    }

    #[test]
    fn split_short_and_long() {
        let mut reg = VariableRegistry::with_originals(10);
        let (eqs, log) = split_linear(&[VarId(1)], true, &mut reg);
        assert_eq!(eqs, vec![LinearEq::new([VarId(1)], true)]);
        assert!(log.defs.is_empty());

        let vars: Vec<VarId> = (1..=10).map(VarId).collect();
        let (eqs, log) = split_linear(&vars, true, &mut reg);
        assert_eq!(eqs.len(), 8);
        let all: BTreeSet<VarId> = eqs.iter().flat_map(|e| e.vars.clone()).collect();
        assert_eq!(all.len(), 17);
        assert!(eqs.iter().all(|e| e.vars.len() == 3));
        // any solution of the long equation extends to the split system
        for a in all_assignments(10) {
            let orig = LinearEq::new(vars.clone(), true).eval(&a).unwrap();
            let full = extend_witness(&log, &a).unwrap();
            let split_ok = eqs.iter().all(|e| !e.eval(&full).unwrap());
            assert_eq!(!orig, split_ok);
        }
    }

    #[test]
    fn extend_with_empty_log_is_identity() {
        let a = Assignment::from_bits(BitVector::from_bits(&[1, 0, 1]));
        assert_eq!(extend_witness(&TransformLog::new(3), &a).unwrap(), a);
    }

    #[test]
    fn single_product_equation() {
        let inst = MqInstance::with_default_names(3, vec![p(&[&[1, 2], &[3]])]).unwrap();
        let sf = to_standard_form(&inst);
        sf.check_invariants().unwrap();
        assert_eq!(sf.product_triples(), 1);
        let t = sf.quad_eqs[0];
        assert_eq!(sf.registry.origin(t.x), Origin::RenameAux);
        assert_eq!(sf.registry.origin(t.y), Origin::RenameAux);
        // originals are only in linear rows, so they are padded
        assert!(sf.padding_triples >= 1);
        for a in all_assignments(3) {
            let full = extend_witness(&sf.log, &a).unwrap();
            let sat = !inst.equations()[0].eval(&a).unwrap();
            assert_eq!(sf.is_satisfied_by(&full).unwrap(), sat);
            assert_eq!(pull_back_witness(&sf.log, &full).unwrap(), a);
        }
    }

    #[test]
    fn full_quadratic_system_triple_count() {
        let full = p(&[&[1, 2], &[1, 3], &[2, 3], &[1], &[2], &[3], &[]]);
        let inst = MqInstance::with_default_names(3, vec![full.clone(), full]).unwrap();
        let sf = to_standard_form(&inst);
        sf.check_invariants().unwrap();
        assert!(sf.product_triples() <= 2 * 3);
        assert_eq!(sf.product_triples(), 6);
    }

    #[test]
    fn empty_system() {
        let inst = MqInstance::with_default_names(0, vec![]).unwrap();
        let sf = to_standard_form(&inst);
        assert_eq!((sf.q(), sf.lambda(), sf.num_vars()), (0, 0, 0));
        sf.check_invariants().unwrap();
        assert!(sf.is_satisfied_by(&Assignment::zeros(0)).unwrap());
    }

    #[test]
    fn constant_one_gives_contradiction() {
        let inst = MqInstance::with_default_names(2, vec![p(&[&[1, 2]]), BooleanPolynomial::one()]).unwrap();
        let sf = to_standard_form(&inst);
        sf.check_invariants().unwrap();
        assert!(sf.is_contradiction());
        assert_eq!(sf.lambda(), 1);
        assert_eq!(sf.q(), 1);
    }

    #[test]
    fn injective_mode_pins_coefficients() {
        let f = p(&[&[1, 2], &[2], &[]]);
        let inst = MqInstance::with_default_names(2, vec![f.clone()]).unwrap();
        let sf = to_standard_form_with(&inst, StandardFormOptions { injective: true });
        sf.check_invariants().unwrap();
        assert_eq!(coefficient_vector(&f, 2), vec![true, false, true, true]);
        let pinned: Vec<bool> = sf
            .lin_eqs
            .iter()
            .filter(|e| e.vars.len() == 1 && sf.registry.origin(e.vars[0]) == Origin::Coefficient)
            .map(|e| e.delta)
            .collect();
        assert_eq!(pinned, vec![true, false, true, true]);
    }

    #[test]
    fn injective_contradictions_stay_distinct() {
        let one = BooleanPolynomial::one();
        let a = MqInstance::with_default_names(1, vec![one.clone(), p(&[&[1]])]).unwrap();
        let b = MqInstance::with_default_names(1, vec![one, p(&[&[1], &[]])]).unwrap();
        let opts = StandardFormOptions { injective: true };
        let (sa, sb) = (to_standard_form_with(&a, opts), to_standard_form_with(&b, opts));
        sa.check_invariants().unwrap();
        assert!(sa.is_contradiction() && sb.is_contradiction());
        assert_ne!(sa, sb);
        assert_eq!(to_standard_form(&a), to_standard_form(&b));
    }

    #[test]
    fn recognizes_standard_form_input() {
        let inst = MqInstance::with_default_names(3, vec![p(&[&[1, 2], &[3]]), p(&[&[1], &[3], &[]])]).unwrap();
        let sf = recognize_standard_form(&inst).unwrap();
        assert_eq!((sf.q(), sf.lambda()), (1, 1));
        assert!(sf.log.defs.is_empty());
        let not_sf = MqInstance::with_default_names(3, vec![p(&[&[1, 2], &[2, 3]])]).unwrap();
        assert!(recognize_standard_form(&not_sf).is_none());
        let uncovered = MqInstance::with_default_names(4, vec![p(&[&[1, 2], &[3]])]).unwrap();
        assert!(recognize_standard_form(&uncovered).is_none());
    }
}
