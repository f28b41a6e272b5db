//! Exhaustive reference solvers, enumerators and verifiers.
//!
//! Every search here is complete and deterministic and refuses up front (with
//! [`Error::BudgetExceeded`]) when the instance is too large, rather than
//! truncating silently.

use std::time::{Duration, Instant};

use crate::alpha::MldInstance;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::poly::{Assignment, MqInstance};

/// Largest number of candidate vectors the decoding search will visit.
pub const MLD_BUDGET: u128 = 1 << 26;
/// Largest number of search nodes the quadratic solver will visit.
pub const MQ_NODE_BUDGET: u64 = 1 << 27;
/// Variable limit for full enumeration of quadratic solutions.
pub const MQ_ENUM_MAX_VARS: usize = 20;
/// Generator row limit for coset enumeration.
pub const COSET_MAX_ROWS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveReport<W> {
    pub decision: bool,
    pub witness: Option<W>,
    /// Candidates (decoding) or search nodes (quadratic) visited.
    pub explored: u64,
    pub elapsed: Duration,
}

/// Number of vectors of length `n` and weight at most `t`.
pub fn ball_size(n: usize, t: usize) -> u128 {
    let mut total = 0u128;
    let mut c = 1u128;
    for w in 0..=t.min(n) {
        total += c;
        c = c * (n - w) as u128 / (w + 1) as u128;
    }
    total
}

pub fn verify_mld(inst: &MldInstance, v: &BitVector) -> bool {
    inst.is_satisfied_by(v).unwrap_or(false)
}

pub fn verify_mq(inst: &MqInstance, a: &Assignment) -> bool {
    a.len() == inst.nvars() && inst.is_satisfied_by(a).unwrap_or(false)
}

// Visits supports of size `w` in lexicographic order; `f` returns true to stop.
fn for_each_combination(n: usize, w: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    if w > n {
        return false;
    }
    let mut idx: Vec<usize> = (0..w).collect();
    loop {
        if f(&idx) {
            return true;
        }
        let mut i = w;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if idx[i] < n - w + i {
                break;
            }
            if i == 0 {
                return false;
            }
        }
        idx[i] += 1;
        for j in i + 1..w {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn check_mld_budget(inst: &MldInstance) -> Result<()> {
    let ball = ball_size(inst.n(), inst.t());
    if ball > MLD_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "{ball} candidates of length {} and weight <= {} exceed the limit {MLD_BUDGET}",
            inst.n(),
            inst.t()
        )));
    }
    Ok(())
}

// Visits every vector of weight <= t, lightest first, with its syndrome.
fn scan_ball(inst: &MldInstance, mut f: impl FnMut(&[usize]) -> bool) -> Result<u64> {
    check_mld_budget(inst)?;
    let columns: Vec<BitVector> = (0..inst.n()).map(|c| inst.h().column(c)).collect();
    let mut explored = 0u64;
    for w in 0..=inst.t() {
        let stop = for_each_combination(inst.n(), w, |support| {
            explored += 1;
            let mut syn = BitVector::zeros(inst.m());
            for &c in support {
                syn.xor_assign(&columns[c]).unwrap();
            }
            syn == *inst.s() && f(support)
        });
        if stop {
            break;
        }
    }
    Ok(explored)
}

/// Decides a decoding instance by visiting all vectors of weight `<= t` in
/// order of weight, lexicographically within each weight.
///
/// The witness, if any, is the first solution in that order, so it has
/// minimum weight.
pub fn solve_mld_exhaustive(inst: &MldInstance) -> Result<SolveReport<BitVector>> {
    let start = Instant::now();
    let mut witness = None;
    let explored = scan_ball(inst, |support| {
        witness = Some(BitVector::from_support(inst.n(), support));
        true
    })?;
    if let Some(w) = &witness {
        assert!(verify_mld(inst, w), "decoding oracle produced an invalid witness");
    }
    Ok(SolveReport {
        decision: witness.is_some(),
        witness,
        explored,
        elapsed: start.elapsed(),
    })
}

/// All solutions of weight `<= t`, in the search order.
pub fn enumerate_mld_witnesses(inst: &MldInstance) -> Result<Vec<BitVector>> {
    let mut out = Vec::new();
    scan_ball(inst, |support| {
        out.push(BitVector::from_support(inst.n(), support));
        false
    })?;
    Ok(out)
}

/// The coset `eps + rowspace(G)`, indexed by message (bit `r` of the index
/// selects row `r`), with weights.
pub fn enumerate_coset(g: &BitMatrix, eps: &BitVector) -> Result<Vec<(BitVector, usize)>> {
    if g.rows() > COSET_MAX_ROWS {
        return Err(Error::BudgetExceeded(format!(
            "2^{} coset elements exceed the limit 2^{COSET_MAX_ROWS}",
            g.rows()
        )));
    }
    if eps.len() != g.cols() {
        return Err(Error::Dimension(format!(
            "leader has length {}, code length is {}",
            eps.len(),
            g.cols()
        )));
    }
    Ok((0..1u64 << g.rows())
        .map(|msg| {
            let mut v = eps.clone();
            for r in 0..g.rows() {
                if msg >> r & 1 == 1 {
                    v.xor_assign(g.row(r)).unwrap();
                }
            }
            let w = v.weight();
            (v, w)
        })
        .collect())
}

/// All solutions of a quadratic system with at most 20 variables, in
/// increasing order of `int`.
pub fn enumerate_mq_solutions(inst: &MqInstance) -> Result<Vec<Assignment>> {
    let n = inst.nvars();
    if n > MQ_ENUM_MAX_VARS {
        return Err(Error::BudgetExceeded(format!(
            "2^{n} assignments exceed the limit 2^{MQ_ENUM_MAX_VARS}"
        )));
    }
    let sys = Compiled::new(inst);
    let mut values = vec![0i8; n];
    let mut out = Vec::new();
    for x in 0..1u64 << n {
        for (i, v) in values.iter_mut().enumerate() {
            *v = (x >> i & 1) as i8;
        }
        if sys.equations.iter().all(|e| !e.eval_full(&values)) {
            out.push(Assignment::from_bits(BitVector::from_int(x, n)));
        }
    }
    Ok(out)
}

struct CompiledEq {
    constant: bool,
    monomials: Vec<Vec<usize>>,
}

impl CompiledEq {
    fn eval_full(&self, values: &[i8]) -> bool {
        let mut acc = self.constant;
        for m in &self.monomials {
            acc ^= m.iter().all(|&v| values[v] == 1);
        }
        acc
    }
}

enum Residual {
    Conflict,
    Force(usize, bool),
    Open,
}

impl CompiledEq {
    // Substitutes the assigned values. When what is left is linear with a
    // single variable of odd multiplicity, that variable is forced.
    fn residual(&self, values: &[i8], scratch: &mut Vec<usize>) -> Residual {
        let mut c = self.constant;
        scratch.clear();
        for m in &self.monomials {
            let mut free = None;
            let mut free_count = 0;
            let mut zero = false;
            for &v in m {
                match values[v] {
                    0 => {
                        zero = true;
                        break;
                    }
                    1 => {}
                    _ => {
                        free_count += 1;
                        free = Some(v);
                    }
                }
            }
            if zero {
                continue;
            }
            match free_count {
                0 => c ^= true,
                1 => scratch.push(free.unwrap()),
                _ => return Residual::Open,
            }
        }
        scratch.sort_unstable();
        let mut odd = None;
        let mut odd_count = 0;
        let mut i = 0;
        while i < scratch.len() {
            let mut j = i;
            while j < scratch.len() && scratch[j] == scratch[i] {
                j += 1;
            }
            if (j - i) % 2 == 1 {
                odd_count += 1;
                odd = Some(scratch[i]);
            }
            i = j;
        }
        match (odd_count, odd) {
            (0, _) if c => Residual::Conflict,
            (0, _) => Residual::Open,
            (1, Some(x)) => Residual::Force(x, c),
            _ => Residual::Open,
        }
    }
}

struct Compiled {
    nvars: usize,
    equations: Vec<CompiledEq>,
    occurs: Vec<Vec<usize>>,
}

impl Compiled {
    fn new(inst: &MqInstance) -> Self {
        let n = inst.nvars();
        let mut occurs = vec![Vec::new(); n];
        let equations: Vec<CompiledEq> = inst
            .equations()
            .iter()
            .enumerate()
            .map(|(e, f)| {
                for v in f.vars() {
                    occurs[v.slot()].push(e);
                }
                CompiledEq {
                    constant: f.constant_term(),
                    monomials: f
                        .monomials()
                        .filter(|m| m.degree() > 0)
                        .map(|m| m.vars().iter().map(|v| v.slot()).collect())
                        .collect(),
                }
            })
            .collect();
        Compiled {
            nvars: n,
            equations,
            occurs,
        }
    }
}

struct Search<'a> {
    sys: &'a Compiled,
    values: Vec<i8>,
    trail: Vec<usize>,
    queue: Vec<usize>,
    scratch: Vec<usize>,
}

impl Search<'_> {
    fn assign(&mut self, v: usize, value: bool) {
        self.values[v] = value as i8;
        self.trail.push(v);
        self.queue.extend_from_slice(&self.sys.occurs[v]);
    }

    // Returns false on conflict.
    fn propagate(&mut self) -> bool {
        while let Some(e) = self.queue.pop() {
            match self.sys.equations[e].residual(&self.values, &mut self.scratch) {
                Residual::Conflict => {
                    self.queue.clear();
                    return false;
                }
                Residual::Force(x, value) => self.assign(x, value),
                Residual::Open => {}
            }
        }
        true
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let v = self.trail.pop().unwrap();
            self.values[v] = -1;
        }
    }
}

/// Decides a quadratic system by complete backtracking search.
///
/// Branches on the lowest-indexed free variable, 0 before 1. After every
/// assignment each affected equation is simplified; an equation reduced to
/// `1 = 0` is a conflict, and one reduced to `x + c = 0` fixes `x`. There is
/// no learning or reordering, so the tree has fewer than `2^(𝗇+1)` nodes and
/// every system with at most 26 variables fits the node budget. Larger
/// systems are attempted too (propagation often settles most variables) and
/// refused once the budget runs out.
pub fn solve_mq_exhaustive(inst: &MqInstance) -> Result<SolveReport<Assignment>> {
    solve_mq_search(inst, MQ_NODE_BUDGET)
}

/// [`solve_mq_exhaustive`] with a caller-chosen node budget.
pub fn solve_mq_search(inst: &MqInstance, node_budget: u64) -> Result<SolveReport<Assignment>> {
    let start = Instant::now();
    let sys = Compiled::new(inst);
    let n = sys.nvars;
    let mut s = Search {
        sys: &sys,
        values: vec![-1; n],
        trail: Vec::new(),
        queue: (0..sys.equations.len()).collect(),
        scratch: Vec::new(),
    };
    // (variable, trail length before it, whether 1 has been tried)
    let mut decisions: Vec<(usize, usize, bool)> = Vec::new();
    let mut explored = 1u64;
    let mut ok = s.propagate();
    let witness = loop {
        if ok {
            match s.values.iter().position(|&v| v < 0) {
                None => {
                    break Some(Assignment::from_bits(BitVector::from_bools(
                        &s.values.iter().map(|&v| v == 1).collect::<Vec<_>>(),
                    )))
                }
                Some(v) => {
                    if explored >= node_budget {
                        return Err(Error::BudgetExceeded(format!(
                            "search visited {explored} nodes without finishing"
                        )));
                    }
                    explored += 1;
                    decisions.push((v, s.trail.len(), false));
                    s.assign(v, false);
                    ok = s.propagate();
                    continue;
                }
            }
        }
        // backtrack to the most recent decision whose 1-branch is untried
        let mut resumed = false;
        while let Some((v, mark, tried_one)) = decisions.pop() {
            s.undo_to(mark);
            if !tried_one {
                explored += 1;
                decisions.push((v, mark, true));
                s.assign(v, true);
                ok = s.propagate();
                resumed = true;
                break;
            }
        }
        if !resumed {
            break None;
        }
    };
    if let Some(w) = &witness {
        assert!(verify_mq(inst, w), "quadratic oracle produced an invalid witness");
    }
    Ok(SolveReport {
        decision: witness.is_some(),
        witness,
        explored,
        elapsed: start.elapsed(),
    })
}


#[cfg(test)]
mod props {
    use super::*;
    use crate::poly::{BooleanPolynomial, Monomial, VarId};
    use proptest::prelude::*;

    fn quadratic(n: u32) -> impl Strategy<Value = BooleanPolynomial> {
        let count = 1 + n + n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), count as usize).prop_map(move |bits| {
            let mut monos = vec![Monomial::one()];
            for i in 1..=n {
                monos.push(Monomial::from_vars([VarId(i)]));
                for j in i + 1..=n {
                    monos.push(Monomial::from_vars([VarId(i), VarId(j)]));
                }
            }
            BooleanPolynomial::from_monomials(monos.into_iter().zip(bits).filter(|(_, b)| *b).map(|(m, _)| m))
        })
    }

    proptest! {
        #[test]
        fn search_agrees_with_enumeration(eqs in (1u32..=7).prop_flat_map(|n| proptest::collection::vec(quadratic(n), 0..6).prop_map(move |e| (n, e)))) {
            let (n, eqs) = eqs;
            let inst = MqInstance::with_default_names(n as usize, eqs).unwrap();
            let sols = enumerate_mq_solutions(&inst).unwrap();
            let r = solve_mq_exhaustive(&inst).unwrap();
            prop_assert_eq!(r.decision, !sols.is_empty());
            if let Some(w) = r.witness {
                prop_assert!(sols.contains(&w));
            }
        }

        #[test]
        fn decoding_is_monotone_in_t((h, s) in (1usize..6, 1usize..9).prop_flat_map(|(m, n)| (
            proptest::collection::vec(proptest::collection::vec(any::<bool>(), n), m),
            proptest::collection::vec(any::<bool>(), m),
        ))) {
            let n = h[0].len();
            let rows: Vec<BitVector> = h.iter().map(|r| BitVector::from_bools(r)).collect();
            let hm = BitMatrix::from_rows(rows, n).unwrap();
            let s = BitVector::from_bools(&s);
            let mut seen_yes = false;
            for t in 0..=n {
                let r = solve_mld_exhaustive(&MldInstance::new(hm.clone(), s.clone(), t).unwrap()).unwrap();
                prop_assert!(!seen_yes || r.decision);
                seen_yes |= r.decision;
                if let Some(w) = r.witness {
                    prop_assert!(verify_mld(&MldInstance::new(hm.clone(), s.clone(), t).unwrap(), &w));
                }
            }
        }
    }
}
