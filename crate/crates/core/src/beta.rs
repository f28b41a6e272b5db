//! The reduction from quadratic systems to syndrome decoding.
//!
//! Each triple `x·y + z = 0` of a standard-form system is carried by one copy
//! of a `[10, 3]` gadget code: the coset `ε̂ + Ĉ` has exactly four elements
//! of weight 3, and their first three coordinates are exactly the four
//! solutions of `xy + z = 0`. The other four coset elements have weight at
//! least 5. Stacking `q` copies with weight bound `3q` therefore forces every
//! block onto a weight-3 element, and each linear equation becomes one extra
//! parity check on the first three coordinates of the blocks.

use std::sync::OnceLock;

use crate::alpha::MldInstance;
use crate::error::{Error, Result};
use crate::gf2::{systematic_parity_check, BitMatrix, BitVector};
use crate::normalize::{
    extend_witness, pull_back_witness, recognize_standard_form, to_standard_form_with, LinearEq, StandardFormOptions,
    StandardFormSystem,
};
use crate::poly::{Assignment, MqInstance, VarId};

/// Block length of the gadget code.
pub const BLOCK: usize = 10;
/// Parity checks per block.
pub const BLOCK_CHECKS: usize = 7;

/// The `[10, 3]` gadget code, its coset leader and derived data.
#[derive(Clone, Debug)]
pub struct Gadget {
    pub g_hat: BitMatrix,
    pub eps_hat: BitVector,
    pub h_hat: BitMatrix,
    pub s_hat: BitVector,
    pub t_hat: usize,
    /// Weight-3 coset element for each solution `(x, y, z)` of `xy + z = 0`,
    /// indexed by `x + 2y + 4z`.
    lookup: [Option<BitVector>; 8],
}

/// Index of `(x, y, z)` in the gadget lookup.
fn triple_index(x: bool, y: bool, z: bool) -> usize {
    x as usize | (y as usize) << 1 | (z as usize) << 2
}

/// Builds the gadget and checks its coset structure.
///
/// # Panics
///
/// If any of the coset facts fails, which can only be an implementation bug.
pub fn build_gadget() -> Gadget {
    let g_hat = BitMatrix::from_bit_rows(&[
        &[1, 0, 0, 1, 1, 0, 0, 1, 1, 1],
        &[0, 1, 0, 0, 0, 1, 1, 1, 1, 1],
        &[0, 0, 1, 1, 1, 1, 1, 1, 1, 1],
    ])
    .expect("gadget rows have equal length");
    let eps_hat = BitVector::from_bits(&[0, 0, 0, 0, 0, 0, 0, 1, 1, 1]);
    let h_hat = systematic_parity_check(&g_hat).expect("gadget generator is systematic");
    let s_hat = h_hat.mul_vec(&eps_hat).expect("gadget dimensions");
    assert!(h_hat.mul(&g_hat.transpose()).unwrap().is_zero(), "Ĥ·Ĝᵀ ≠ 0");

    let mut lookup: [Option<BitVector>; 8] = Default::default();
    let mut weights = Vec::new();
    for msg in 0..8u64 {
        let mut v = eps_hat.clone();
        for r in 0..3 {
            if msg >> r & 1 == 1 {
                v.xor_assign(g_hat.row(r)).unwrap();
            }
        }
        assert_eq!(h_hat.mul_vec(&v).unwrap(), s_hat, "coset element off syndrome");
        weights.push(v.weight());
        if v.weight() == 3 {
            let (x, y, z) = (v.get(0), v.get(1), v.get(2));
            assert_eq!(x & y, z, "weight-3 element outside the variety");
            let slot = &mut lookup[triple_index(x, y, z)];
            assert!(slot.is_none(), "two weight-3 elements share a prefix");
            *slot = Some(v);
        } else {
            assert!(v.weight() >= 5, "coset element of weight {}", v.weight());
        }
    }
    weights.sort_unstable();
    assert_eq!(weights, [3, 3, 3, 3, 5, 7, 7, 9]);
    assert_eq!(lookup.iter().flatten().count(), 4);

    Gadget {
        g_hat,
        eps_hat,
        h_hat,
        s_hat,
        t_hat: 3,
        lookup,
    }
}

/// Shared, lazily built gadget.
pub fn gadget() -> &'static Gadget {
    static GADGET: OnceLock<Gadget> = OnceLock::new();
    GADGET.get_or_init(build_gadget)
}

impl Gadget {
    /// The weight-3 coset element whose first three bits are `(x, y, z)`.
    pub fn block_for(&self, x: bool, y: bool, z: bool) -> Option<&BitVector> {
        self.lookup[triple_index(x, y, z)].as_ref()
    }
}

/// `q` diagonal copies of `Ĥ`.
pub fn build_block_h(q: usize) -> BitMatrix {
    BitMatrix::block_diagonal(&gadget().h_hat, q)
}

/// The `10q × 3q` matrix with `ṽ·M_τ` the first three bits of every block.
pub fn build_m_tau(q: usize) -> BitMatrix {
    let mut m = BitMatrix::zeros(BLOCK * q, 3 * q);
    for b in 0..q {
        for k in 0..3 {
            m.set(BLOCK * b + k, 3 * b + k, true);
        }
    }
    m
}

/// First three coordinates of every block of `v` (length `10q`).
pub fn tau(v: &BitVector) -> Result<BitVector> {
    if !v.len().is_multiple_of(BLOCK) {
        return Err(Error::Dimension(format!(
            "vector length {} is not a multiple of {BLOCK}",
            v.len()
        )));
    }
    let q = v.len() / BLOCK;
    let mut out = BitVector::zeros(3 * q);
    for b in 0..q {
        for k in 0..3 {
            out.set(3 * b + k, v.get(BLOCK * b + k));
        }
    }
    Ok(out)
}

/// The row `a_f M_τᵀ` for a linear form with support `coords` among the
/// `3q` triple coordinates (0-based, coordinate `3b + k` is slot `k` of
/// triple `b`).
pub fn nu(coords: &[usize], q: usize) -> Result<BitVector> {
    let mut row = BitVector::zeros(BLOCK * q);
    for &c in coords {
        if c >= 3 * q {
            return Err(Error::IndexOutOfRange { index: c, len: 3 * q });
        }
        row.flip(BLOCK * (c / 3) + c % 3);
    }
    Ok(row)
}

/// Size and bound figures reported with every β output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaMetadata {
    pub q: usize,
    pub lambda: usize,
    pub padding_triples: usize,
    pub injective: bool,
    /// Variables and equations of the system the reduction started from.
    pub source_nvars: usize,
    pub source_equations: usize,
    /// Bits of the output parity-check matrix: `(7q + λ) · 10q`.
    pub h_bits: u128,
    /// `85 𝗆² 𝗇⁴` for the source parameters.
    pub bound: u128,
}

impl BetaMetadata {
    pub fn bound_holds(&self) -> bool {
        self.h_bits <= self.bound
    }
}

pub fn beta_bound(source_nvars: usize, source_equations: usize) -> u128 {
    let (n, m) = (source_nvars as u128, source_equations as u128);
    85 * m * m * n * n * n * n
}

/// Output of the reduction together with everything needed to move
/// witnesses across it.
#[derive(Clone, Debug)]
pub struct BetaArtifact {
    pub mld: MldInstance,
    pub sf: StandardFormSystem,
    pub meta: BetaMetadata,
    /// For each standard-form variable (by slot), its coordinate `3b + k`.
    coordinate: Vec<usize>,
}

impl BetaArtifact {
    /// τ-coordinate owned by a standard-form variable.
    pub fn coordinate_of(&self, v: VarId) -> usize {
        self.coordinate[v.slot()]
    }
}

/// Reduces a quadratic system to a decoding instance.
///
/// Systems already in standard form are used as they are unless `injective`
/// is set; everything else goes through the standard-form conversion first.
pub fn reduce_beta(inst: &MqInstance, injective: bool) -> BetaArtifact {
    let sf = match recognize_standard_form(inst) {
        Some(sf) if !injective => sf,
        _ => to_standard_form_with(inst, StandardFormOptions { injective }),
    };
    assemble(sf, injective, inst.nvars(), inst.num_equations())
}

/// Reduces a standard-form system directly. Its own size serves as the
/// source parameters: `3q` variables and `q + λ` equations.
pub fn reduce_beta_standard(sf: &StandardFormSystem) -> Result<BetaArtifact> {
    sf.check_invariants()?;
    let (nv, ne) = (sf.num_vars(), sf.q() + sf.lambda());
    Ok(assemble(sf.clone(), false, nv, ne))
}

fn assemble(sf: StandardFormSystem, injective: bool, source_nvars: usize, source_equations: usize) -> BetaArtifact {
    debug_assert!(sf.check_invariants().is_ok());
    let g = gadget();
    let q = sf.q();
    let lambda = sf.lambda();

    let mut coordinate = vec![usize::MAX; sf.num_vars()];
    for (b, t) in sf.quad_eqs.iter().enumerate() {
        for (k, v) in t.vars().into_iter().enumerate() {
            coordinate[v.slot()] = 3 * b + k;
        }
    }

    let mut rows: Vec<BitVector> = build_block_h(q).row_iter().cloned().collect();
    let mut s = BitVector::zeros(0);
    for _ in 0..q {
        s = s.concat(&g.s_hat);
    }
    let mut deltas = BitVector::zeros(lambda);
    for (i, eq) in sf.lin_eqs.iter().enumerate() {
        let coords: Vec<usize> = eq.vars.iter().map(|v| coordinate[v.slot()]).collect();
        rows.push(nu(&coords, q).expect("standard-form variables lie in triples"));
        deltas.set(i, eq.delta);
    }
    let s = s.concat(&deltas);
    let h = BitMatrix::from_rows(rows, BLOCK * q).expect("rows have length 10q");
    let mld = MldInstance::new(h, s, 3 * q).expect("3q <= 10q");

    let meta = BetaMetadata {
        q,
        lambda,
        padding_triples: sf.padding_triples,
        injective,
        source_nvars,
        source_equations,
        h_bits: ((BLOCK_CHECKS * q + lambda) * BLOCK * q) as u128,
        bound: beta_bound(source_nvars, source_equations),
    };
    BetaArtifact {
        mld,
        sf,
        meta,
        coordinate,
    }
}

/// Maps a solution of the standard-form system to a decoding witness of
/// weight exactly `3q`.
pub fn lift_mq_witness(artifact: &BetaArtifact, assign: &Assignment) -> Result<BitVector> {
    let sf = &artifact.sf;
    if assign.len() != sf.num_vars() {
        return Err(Error::Dimension(format!(
            "assignment has {} values, standard form has {} variables",
            assign.len(),
            sf.num_vars()
        )));
    }
    let g = gadget();
    let mut out = BitVector::zeros(0);
    for (b, t) in sf.quad_eqs.iter().enumerate() {
        let (x, y, z) = (assign.value(t.x)?, assign.value(t.y)?, assign.value(t.z)?);
        let block = g.block_for(x, y, z).ok_or_else(|| {
            Error::InvalidWitness(format!(
                "triple {} takes ({}, {}, {}) outside xy + z = 0",
                b + 1,
                x as u8,
                y as u8,
                z as u8
            ))
        })?;
        out = out.concat(block);
    }
    for (i, eq) in sf.lin_eqs.iter().enumerate() {
        if eq.eval(assign)? {
            return Err(Error::InvalidWitness(format!("linear equation {} fails", i + 1)));
        }
    }
    debug_assert!(artifact.mld.is_satisfied_by(&out)?);
    Ok(out)
}

/// Extends a solution of the source system through the standard-form log
/// and lifts it.
pub fn lift_source_witness(artifact: &BetaArtifact, original: &Assignment) -> Result<BitVector> {
    let full = extend_witness(&artifact.sf.log, original)?;
    lift_mq_witness(artifact, &full.padded(artifact.sf.num_vars()))
}

/// The standard-form assignment read off the first three bits of each block.
pub fn standard_form_assignment(artifact: &BetaArtifact, v: &BitVector) -> Result<Assignment> {
    let tv = tau(v)?;
    let mut a = Assignment::zeros(artifact.sf.num_vars());
    for id in artifact.sf.registry.ids() {
        a.set(id, tv.get(artifact.coordinate_of(id)));
    }
    Ok(a)
}

/// Maps a decoding witness back to a solution of the source system.
pub fn pull_back_mld_witness(artifact: &BetaArtifact, v: &BitVector) -> Result<Assignment> {
    if v.len() != artifact.mld.n() {
        return Err(Error::Dimension(format!(
            "witness has length {}, code length is {}",
            v.len(),
            artifact.mld.n()
        )));
    }
    if !artifact.mld.is_satisfied_by(v)? {
        return Err(Error::InvalidWitness(
            "vector has the wrong syndrome or exceeds the weight bound".into(),
        ));
    }
    let a = standard_form_assignment(artifact, v)?;
    pull_back_witness(&artifact.sf.log, &a)
}

/// `nm + m + ⌊log₂ n⌋ + 1`.
pub fn mld_size(inst: &MldInstance) -> u128 {
    inst.size()
}

/// Linear equation helper used by tests and the CLI.
pub fn linear(vars: &[u32], delta: bool) -> LinearEq {
    LinearEq::new(vars.iter().map(|&i| VarId(i)), delta)
}
