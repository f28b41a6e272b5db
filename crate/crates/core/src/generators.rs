//! Seeded random instances, optionally built around a planted solution.
//!
//! All randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64`. Random bits are taken from successive `next_u64` outputs,
//! least significant bit first; indices below `k` are drawn from a whole
//! `next_u64` output with rejection above the largest multiple of `k`.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::alpha::MldInstance;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::normalize::{LinearEq, QuadTriple, StandardFormSystem, TransformLog};
use crate::poly::{Assignment, BooleanPolynomial, Monomial, MqInstance, VarId, VariableRegistry};

/// Parameters of a generated instance. For quadratic systems `n` is the
/// number of variables, `m` the number of equations and `t` is unused.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenSpec {
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub t: usize,
    pub planted: bool,
}

/// Bit and index source over ChaCha8.
pub struct Bits {
    rng: ChaCha8Rng,
    word: u64,
    left: u32,
}

impl Bits {
    pub fn new(seed: u64) -> Self {
        Bits {
            rng: ChaCha8Rng::seed_from_u64(seed),
            word: 0,
            left: 0,
        }
    }

    pub fn bit(&mut self) -> bool {
        if self.left == 0 {
            self.word = self.rng.next_u64();
            self.left = 64;
        }
        let b = self.word & 1 == 1;
        self.word >>= 1;
        self.left -= 1;
        b
    }

    pub fn vector(&mut self, len: usize) -> BitVector {
        let bits: Vec<bool> = (0..len).map(|_| self.bit()).collect();
        BitVector::from_bools(&bits)
    }

    /// Uniform integer in `0..k`, `k >= 1`.
    pub fn below(&mut self, k: u64) -> u64 {
        assert!(k > 0);
        let zone = u64::MAX - (u64::MAX % k);
        loop {
            let x = self.rng.next_u64();
            if x < zone {
                return x % k;
            }
        }
    }

    /// Uniform subset of `0..n` of size `w`, by a partial Fisher-Yates shuffle.
    pub fn subset(&mut self, n: usize, w: usize) -> Vec<usize> {
        let mut items: Vec<usize> = (0..n).collect();
        for i in 0..w {
            let j = i + self.below((n - i) as u64) as usize;
            items.swap(i, j);
        }
        let mut out = items[..w].to_vec();
        out.sort_unstable();
        out
    }
}

/// Random decoding instance with uniform `H`; see [`gen_mld_with_plant`].
pub fn gen_mld(spec: &GenSpec) -> Result<MldInstance> {
    gen_mld_with_plant(spec).map(|(inst, _)| inst)
}

/// Draws `H` row by row. When planted, a vector of weight exactly `t` is
/// drawn and `s` is its syndrome; otherwise `s` is uniform.
pub fn gen_mld_with_plant(spec: &GenSpec) -> Result<(MldInstance, Option<BitVector>)> {
    if spec.n == 0 {
        return Err(Error::InvalidInstance("code length must be positive".into()));
    }
    if spec.t > spec.n {
        return Err(Error::InvalidInstance(format!(
            "weight bound {} exceeds code length {}",
            spec.t, spec.n
        )));
    }
    let mut bits = Bits::new(spec.seed);
    let rows: Vec<BitVector> = (0..spec.m).map(|_| bits.vector(spec.n)).collect();
    let h = BitMatrix::from_rows(rows, spec.n)?;
    let (s, plant) = if spec.planted {
        let v = BitVector::from_support(spec.n, &bits.subset(spec.n, spec.t));
        (h.mul_vec(&v)?, Some(v))
    } else {
        (bits.vector(spec.m), None)
    };
    Ok((MldInstance::new(h, s, spec.t)?, plant))
}

/// Random quadratic system; see [`gen_mq_with_plant`].
pub fn gen_mq(spec: &GenSpec) -> Result<MqInstance> {
    gen_mq_with_plant(spec).map(|(inst, _)| inst)
}

/// Draws every coefficient uniformly, equation by equation, in the order
/// `γ_ij (i<j), λ_i, δ`. When planted, an assignment is drawn first and each
/// constant is then fixed so that the assignment is a solution.
pub fn gen_mq_with_plant(spec: &GenSpec) -> Result<(MqInstance, Option<Assignment>)> {
    if spec.n == 0 || spec.m == 0 {
        return Err(Error::InvalidInstance(
            "a generated system needs at least one variable and one equation".into(),
        ));
    }
    let n = spec.n as u32;
    let mut bits = Bits::new(spec.seed);
    let plant = spec.planted.then(|| Assignment::from_bits(bits.vector(spec.n)));
    let mut equations = Vec::with_capacity(spec.m);
    for _ in 0..spec.m {
        let mut f = BooleanPolynomial::zero();
        for i in 1..=n {
            for j in i + 1..=n {
                if bits.bit() {
                    f.toggle(Monomial::from_vars([VarId(i), VarId(j)]));
                }
            }
        }
        for i in 1..=n {
            if bits.bit() {
                f.toggle(Monomial::from_vars([VarId(i)]));
            }
        }
        if bits.bit() {
            f.toggle(Monomial::one());
        }
        if let Some(a) = &plant {
            if f.eval(a)? {
                f.toggle(Monomial::one());
            }
        }
        equations.push(f);
    }
    Ok((MqInstance::with_default_names(spec.n, equations)?, plant))
}

/// Random standard-form system with `q` triples over `x1..x_{3q}` and
/// `lambda` linear equations of one to three distinct variables each.
pub fn gen_standard_form(seed: u64, q: usize, lambda: usize) -> Result<StandardFormSystem> {
    if q == 0 && lambda > 0 {
        return Err(Error::InvalidInstance(
            "linear equations need at least one triple".into(),
        ));
    }
    let mut bits = Bits::new(seed);
    let n = 3 * q;
    let order = {
        let mut items: Vec<usize> = (0..n).collect();
        for i in 0..n {
            let j = i + bits.below((n - i) as u64) as usize;
            items.swap(i, j);
        }
        items
    };
    let id = |k: usize| VarId(order[k] as u32 + 1);
    let quad_eqs = (0..q)
        .map(|b| QuadTriple {
            x: id(3 * b),
            y: id(3 * b + 1),
            z: id(3 * b + 2),
        })
        .collect();
    let lin_eqs = (0..lambda)
        .map(|_| {
            let size = 1 + bits.below(3.min(n as u64)) as usize;
            let vars = bits.subset(n, size).into_iter().map(|k| VarId(k as u32 + 1));
            LinearEq::new(vars, bits.bit())
        })
        .collect();
    Ok(StandardFormSystem {
        quad_eqs,
        lin_eqs,
        registry: VariableRegistry::with_originals(n),
        log: TransformLog::new(n),
        padding_triples: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{verify_mld, verify_mq};

    fn spec(seed: u64, n: usize, m: usize, t: usize, planted: bool) -> GenSpec {
        GenSpec { seed, n, m, t, planted }
    }

    #[test]
    fn planted_mld_is_solved_by_plant() {
        let (inst, v) = gen_mld_with_plant(&spec(11, 8, 5, 2, true)).unwrap();
        let v = v.unwrap();
        assert_eq!(v.weight(), 2);
        assert!(verify_mld(&inst, &v));
    }

    #[test]
    fn generation_is_deterministic() {
        let a = gen_mld(&spec(3, 9, 4, 3, false)).unwrap();
        assert_eq!(a, gen_mld(&spec(3, 9, 4, 3, false)).unwrap());
        assert_ne!(a, gen_mld(&spec(4, 9, 4, 3, false)).unwrap());
        let q = gen_mq(&spec(5, 4, 3, 0, true)).unwrap();
        assert_eq!(q, gen_mq(&spec(5, 4, 3, 0, true)).unwrap());
    }

    #[test]
    fn planted_weight_zero_has_zero_syndrome() {
        let inst = gen_mld(&spec(1, 6, 4, 0, true)).unwrap();
        assert!(inst.s().is_zero());
    }

    #[test]
    fn planted_mq_is_solved_by_plant() {
        for seed in 0..20 {
            let (inst, a) = gen_mq_with_plant(&spec(seed, 5, 3, 0, true)).unwrap();
            assert!(verify_mq(&inst, &a.unwrap()));
        }
    }

    #[test]
    fn single_variable_system_is_affine() {
        let inst = gen_mq(&spec(9, 1, 1, 0, false)).unwrap();
        assert!(inst.equations()[0].degree() <= 1);
    }

    #[test]
    fn rejects_bad_ranges() {
        assert!(gen_mld(&spec(0, 4, 2, 5, true)).is_err());
        assert!(gen_mq(&spec(0, 0, 2, 0, false)).is_err());
    }

    #[test]
    fn subsets_and_ranges() {
        let mut b = Bits::new(42);
        for _ in 0..100 {
            assert!(b.below(7) < 7);
            let s = b.subset(10, 4);
            assert_eq!(s.len(), 4);
            assert!(s.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn generated_standard_forms_are_valid() {
        for seed in 0..20 {
            let sf = gen_standard_form(seed, 2, 4).unwrap();
            sf.check_invariants().unwrap();
            assert_eq!((sf.q(), sf.lambda()), (2, 4));
        }
    }
}
