//! The reduction from syndrome decoding to quadratic systems.
//!
//! An instance `(H, s, t)` becomes the union of three systems over the
//! codeword variables `v_1..v_n`:
//!
//! * **pcce**: the parity-check rows `Σ_j h_ij v_j + s_i = 0`;
//! * **hwce**: a ripple counter `a^(i) = a^(i-1) + [v_i]` on `ℓ` bits whose
//!   final value `a^(n)` is the weight of `v`;
//! * **wce**: a comparator forcing `int(a^(n)) <= t`.
//!
//! Higher-degree counter and comparator equations are quadratized with fresh
//! product variables.

use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::gf2::{weight_bits, BitMatrix, BitVector};
use crate::normalize::{quadratize, Definition, TransformLog};
use crate::poly::{Assignment, BooleanPolynomial, Monomial, MqInstance, Origin, VarId, VariableRegistry};

/// Decide whether some `v` of weight at most `t` has `H vᵀ = sᵀ`.
#[derive(Clone, PartialEq, Eq)]
pub struct MldInstance {
    h: BitMatrix,
    s: BitVector,
    t: usize,
}

impl MldInstance {
    pub fn new(h: BitMatrix, s: BitVector, t: usize) -> Result<Self> {
        if s.len() != h.rows() {
            return Err(Error::Dimension(format!(
                "syndrome has length {} but H has {} rows",
                s.len(),
                h.rows()
            )));
        }
        if t > h.cols() {
            return Err(Error::InvalidInstance(format!(
                "weight bound {t} exceeds code length {}",
                h.cols()
            )));
        }
        Ok(MldInstance { h, s, t })
    }

    pub fn h(&self) -> &BitMatrix {
        &self.h
    }

    pub fn s(&self) -> &BitVector {
        &self.s
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Code length.
    pub fn n(&self) -> usize {
        self.h.cols()
    }

    /// Number of parity checks.
    pub fn m(&self) -> usize {
        self.h.rows()
    }

    /// Bits used for counters and the weight bound: `⌊log₂ n⌋ + 1`.
    pub fn ell(&self) -> usize {
        weight_bits(self.n())
    }

    /// Bits needed to write the instance: `nm + m + ⌊log₂ n⌋ + 1`.
    pub fn size(&self) -> u128 {
        mld_size_formula(self.n() as u128, self.m() as u128)
    }

    /// True iff `v` has the right syndrome and weight at most `t`.
    pub fn is_satisfied_by(&self, v: &BitVector) -> Result<bool> {
        Ok(self.h.mul_vec(v)? == self.s && v.weight() <= self.t)
    }
}

impl fmt::Debug for MldInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MldInstance")
            .field("h", &self.h)
            .field("s", &self.s)
            .field("t", &self.t)
            .finish()
    }
}

pub fn mld_size_formula(n: u128, m: u128) -> u128 {
    let ell = if n == 0 { 1 } else { weight_bits(n as usize) as u128 };
    n * m + m + ell
}

/// The `m` parity-check equations over the variables `v`.
pub fn build_pcce(h: &BitMatrix, s: &BitVector, v: &[VarId]) -> Result<Vec<BooleanPolynomial>> {
    if h.cols() != v.len() || h.rows() != s.len() {
        return Err(Error::Dimension(format!(
            "H is {}x{}, syndrome has length {}, {} variables given",
            h.rows(),
            h.cols(),
            s.len(),
            v.len()
        )));
    }
    Ok((0..h.rows())
        .map(|i| {
            let mut f = BooleanPolynomial::constant(s.get(i));
            for j in h.row(i).support() {
                f.toggle(Monomial::from_vars([v[j]]));
            }
            f
        })
        .collect())
}

/// Counter variables `a^(i)_j`, `i = 1..n`, `j = 1..ℓ`; bit 1 is least significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterLayout {
    pub ell: usize,
    stages: Vec<Vec<VarId>>,
}

impl CounterLayout {
    pub fn stages(&self) -> usize {
        self.stages.len()
    }

    /// `a^(i)_j`, both 1-based.
    pub fn var(&self, i: usize, j: usize) -> VarId {
        self.stages[i - 1][j - 1]
    }

    /// The bits of `a^(i)`.
    pub fn stage(&self, i: usize) -> &[VarId] {
        &self.stages[i - 1]
    }

    /// The final counter `a^(n)`; empty when `n = 0`.
    pub fn output(&self) -> &[VarId] {
        self.stages.last().map(Vec::as_slice).unwrap_or(&[])
    }
}

/// One step of forward evaluation: either replay a product definition or
/// solve an equation that is linear in `var` with coefficient 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Define(Definition),
    Solve { var: VarId, equation: usize },
}

/// The counter system together with the data needed to evaluate it.
#[derive(Clone, Debug)]
pub struct Hwce {
    pub equations: Vec<BooleanPolynomial>,
    pub log: TransformLog,
    pub layout: CounterLayout,
    /// Evaluation order; `Solve` indices point into `equations`.
    pub schedule: Vec<Step>,
}

/// Builds the counter encoding for `v` (length `n >= 1`).
///
/// All `n·ℓ` counter variables are registered first, then the recursion
/// `a^(i)_j = a^(i-1)_j + (Π_{h<j} a^(i-1)_h) v_i` with `a^(0) = 0` is
/// quadratized equation by equation.
pub fn build_hwce(v: &[VarId], registry: &mut VariableRegistry) -> Hwce {
    let n = v.len();
    let ell = weight_bits(n.max(1));
    let stages: Vec<Vec<VarId>> = (1..=n)
        .map(|i| {
            (1..=ell)
                .map(|j| registry.fresh(format!("a{i}_{j}"), Origin::Counter))
                .collect()
        })
        .collect();
    let layout = CounterLayout { ell, stages };
    let mut log = TransformLog::new(registry.len());
    let mut equations = Vec::new();
    let mut schedule = Vec::new();
    for i in 1..=n {
        for j in 1..=ell {
            let target = layout.var(i, j);
            let mut eq = BooleanPolynomial::var(target);
            if i > 1 {
                eq.toggle(Monomial::from_vars([layout.var(i - 1, j)]));
                let carry = (1..j).map(|h| layout.var(i - 1, h)).chain([v[i - 1]]);
                eq.toggle(Monomial::from_vars(carry));
            } else if j == 1 {
                eq.toggle(Monomial::from_vars([v[0]]));
            }
            let q = quadratize(&eq, registry);
            schedule.extend(q.log.defs.iter().copied().map(Step::Define));
            log.defs.extend(q.log.defs);
            equations.extend(q.equations);
            schedule.push(Step::Solve {
                var: target,
                equation: equations.len() - 1,
            });
        }
    }
    Hwce {
        equations,
        log,
        layout,
        schedule,
    }
}

impl Hwce {
    /// Counter values `a^(1)..a^(n)` for the codeword `v`, computed by
    /// running the schedule on the equations themselves.
    pub fn evaluate(&self, v: &BitVector, total_vars: usize) -> Result<Vec<BitVector>> {
        let mut a = Assignment::from_bits(v.clone()).padded(total_vars);
        run_schedule(&self.schedule, &self.equations, &mut a)?;
        Ok((1..=self.layout.stages())
            .map(|i| {
                BitVector::from_bools(
                    &self
                        .layout
                        .stage(i)
                        .iter()
                        .map(|&x| a.value(x).unwrap())
                        .collect::<Vec<_>>(),
                )
            })
            .collect())
    }
}

fn run_schedule(schedule: &[Step], equations: &[BooleanPolynomial], a: &mut Assignment) -> Result<()> {
    for step in schedule {
        match step {
            Step::Define(d) => {
                let value = d.evaluate(a)?;
                a.set(d.new, value);
            }
            Step::Solve { var, equation } => {
                let value = equations[*equation].substitute(*var, false).eval(a)?;
                a.set(*var, value);
            }
        }
    }
    Ok(())
}

/// The locators `f_j = g_j Π_{h>j} (g_h + 1)` with `g_h = u_h + v_h`.
///
/// For `u ≠ v` exactly one locator is 1, at the most significant bit where
/// the two differ; all vanish when `u = v`.
pub fn locator_polys(u: &[BooleanPolynomial], v: &[BooleanPolynomial]) -> Vec<BooleanPolynomial> {
    assert_eq!(u.len(), v.len(), "comparator operands must have equal length");
    let l = u.len();
    let g: Vec<BooleanPolynomial> = (0..l).map(|h| &u[h] + &v[h]).collect();
    let one = BooleanPolynomial::one();
    let mut out = vec![BooleanPolynomial::zero(); l];
    let mut suffix = BooleanPolynomial::one();
    for j in (0..l).rev() {
        out[j] = &g[j] * &suffix;
        suffix = &suffix * &(&g[j] + &one);
    }
    out
}

/// `F(u, v) = Σ_j f_j (v_j + 1)`, which vanishes iff `int(u) <= int(v)`.
pub fn comparator(u: &[BooleanPolynomial], v: &[BooleanPolynomial]) -> BooleanPolynomial {
    let one = BooleanPolynomial::one();
    locator_polys(u, v)
        .iter()
        .zip(v)
        .fold(BooleanPolynomial::zero(), |acc, (f, vj)| &acc + &(f * &(vj + &one)))
}

/// The comparator over two blocks of `l` variables.
pub fn comparator_poly(u: &[VarId], v: &[VarId]) -> BooleanPolynomial {
    let lift = |xs: &[VarId]| xs.iter().map(|&x| BooleanPolynomial::var(x)).collect::<Vec<_>>();
    comparator(&lift(u), &lift(v))
}

/// The weight bound `int(a^(n)) <= t`, expanded with the bits of `t` as
/// constants and quadratized.
pub fn build_wce(
    counter: &[VarId],
    t: usize,
    registry: &mut VariableRegistry,
) -> (Vec<BooleanPolynomial>, TransformLog) {
    let u: Vec<BooleanPolynomial> = counter.iter().map(|&x| BooleanPolynomial::var(x)).collect();
    let bits = BitVector::from_int(t as u64, counter.len());
    let tv: Vec<BooleanPolynomial> = bits.iter().map(BooleanPolynomial::constant).collect();
    let f = comparator(&u, &tv);
    let q = quadratize(&f, registry);
    (q.equations, q.log)
}

/// Where each group of variables sits in the output system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaLayout {
    pub n: usize,
    pub ell: usize,
    /// 1-based id range of the codeword variables.
    pub v_range: Range<u32>,
    pub counter_range: Range<u32>,
    pub hwce_aux_range: Range<u32>,
    pub wce_aux_range: Range<u32>,
    pub counters: CounterLayout,
}

/// Output of [`reduce_alpha`].
#[derive(Clone, Debug)]
pub struct AlphaArtifact {
    pub mq: MqInstance,
    pub source: MldInstance,
    pub layout: AlphaLayout,
    pub pcce_equations: usize,
    pub hwce_equations: usize,
    pub wce_equations: usize,
    schedule: Vec<Step>,
}

impl AlphaArtifact {
    /// Forward-evaluation order used by [`lift_mld_witness`].
    pub fn schedule(&self) -> &[Step] {
        &self.schedule
    }
}

/// Builds the quadratic system `pcce ∪ hwce ∪ wce`.
///
/// Variables are ordered `v_1..v_n`, then the counters `a^(i)_j`
/// (stage-major), then hwce auxiliaries, then wce auxiliaries.
pub fn reduce_alpha(inst: &MldInstance) -> AlphaArtifact {
    let n = inst.n();
    let mut registry = VariableRegistry::new();
    let v: Vec<VarId> = (1..=n)
        .map(|i| registry.fresh(format!("v{i}"), Origin::Original))
        .collect();
    let pcce = build_pcce(inst.h(), inst.s(), &v).expect("instance dimensions are consistent");
    let mut equations = pcce;
    let pcce_equations = equations.len();

    let mut schedule = Vec::new();
    let counter_start = registry.len() as u32 + 1;
    let (hwce_equations, counters, hwce_aux_range, wce_equations, wce_aux_range);
    if n == 0 {
        // no coordinates: weight is 0 and every t is met
        counters = CounterLayout {
            ell: 1,
            stages: Vec::new(),
        };
        hwce_aux_range = counter_start..counter_start;
        hwce_equations = 0;
        wce_aux_range = counter_start..counter_start;
        wce_equations = 0;
    } else {
        let hwce = build_hwce(&v, &mut registry);
        hwce_aux_range = (counter_start + (n * hwce.layout.ell) as u32)..(registry.len() as u32 + 1);
        let offset = equations.len();
        schedule.extend(hwce.schedule.iter().map(|s| match s {
            Step::Solve { var, equation } => Step::Solve {
                var: *var,
                equation: equation + offset,
            },
            other => other.clone(),
        }));
        hwce_equations = hwce.equations.len();
        equations.extend(hwce.equations);
        counters = hwce.layout;

        let wce_start = registry.len() as u32 + 1;
        let (wce, wce_log) = build_wce(counters.output(), inst.t(), &mut registry);
        wce_aux_range = wce_start..(registry.len() as u32 + 1);
        schedule.extend(wce_log.defs.into_iter().map(Step::Define));
        wce_equations = wce.len();
        equations.extend(wce);
    }
    let counter_range = counter_start..(counter_start + (n * counters.stages.first().map_or(0, Vec::len)) as u32);
    let layout = AlphaLayout {
        n,
        ell: inst.ell(),
        v_range: 1..(n as u32 + 1),
        counter_range,
        hwce_aux_range,
        wce_aux_range,
        counters,
    };
    let mq = MqInstance::new(equations, registry).expect("alpha output is quadratic");
    AlphaArtifact {
        mq,
        source: inst.clone(),
        layout,
        pcce_equations,
        hwce_equations,
        wce_equations,
        schedule,
    }
}

/// The codeword part of a satisfying assignment.
pub fn project_witness(artifact: &AlphaArtifact, assign: &Assignment) -> Result<BitVector> {
    if assign.len() != artifact.mq.nvars() {
        return Err(Error::Dimension(format!(
            "assignment has {} values, system has {} variables",
            assign.len(),
            artifact.mq.nvars()
        )));
    }
    if !artifact.mq.is_satisfied_by(assign)? {
        return Err(Error::InvalidWitness("assignment does not satisfy the system".into()));
    }
    assign.bits().slice(0, artifact.layout.n)
}

/// Extends a decoding witness to a solution of the quadratic system.
pub fn lift_mld_witness(artifact: &AlphaArtifact, v: &BitVector) -> Result<Assignment> {
    if v.len() != artifact.source.n() {
        return Err(Error::Dimension(format!(
            "witness has length {}, code length is {}",
            v.len(),
            artifact.source.n()
        )));
    }
    if !artifact.source.is_satisfied_by(v)? {
        return Err(Error::InvalidWitness(
            "vector has the wrong syndrome or exceeds the weight bound".into(),
        ));
    }
    let mut a = Assignment::from_bits(v.clone()).padded(artifact.mq.nvars());
    run_schedule(&artifact.schedule, artifact.mq.equations(), &mut a)?;
    debug_assert!(artifact.mq.is_satisfied_by(&a)?);
    Ok(a)
}
