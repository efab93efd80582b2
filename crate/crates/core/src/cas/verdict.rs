//! Zero and constancy verdicts. Proofs come only from canonical forms;
//! sampling is reported as evidence and never promoted to a proof.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::context::{Context, RatFun, SymbolId};
use super::numeric::{Approx, Env};

#[derive(Clone, Debug, PartialEq)]
pub enum VerdictStatus {
    ProvedZero,
    ProvedNonzero,
    /// Value free of indeterminates.
    ProvedConstant(RatFun),
    NumericEvidence,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub point: Vec<(SymbolId, f64)>,
    pub value: Approx,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProofVerdict {
    pub status: VerdictStatus,
    /// The canonical form the verdict was read from.
    pub certificate: RatFun,
    pub samples: Vec<Sample>,
}

impl ProofVerdict {
    pub fn is_proof(&self) -> bool {
        !matches!(self.status, VerdictStatus::NumericEvidence)
    }
}

/// Number of sample points reported with numeric evidence.
pub const EVIDENCE_SAMPLES: usize = 8;
const EVIDENCE_BITS: u32 = 256;

impl Context {
    pub fn is_zero(&self, e: &RatFun) -> ProofVerdict {
        let verdict = |status, samples| ProofVerdict {
            status,
            certificate: e.clone(),
            samples,
        };
        if e.is_zero() {
            return verdict(VerdictStatus::ProvedZero, Vec::new());
        }
        if self.is_constant(e) {
            // A closed-form constant: a certified enclosure away from zero
            // settles it.
            if let Ok(v) = self.eval_numeric(e, &Env::new(), EVIDENCE_BITS) {
                let s = alloc::vec![Sample {
                    point: Vec::new(),
                    value: v
                }];
                if !v.contains_zero() {
                    return verdict(VerdictStatus::ProvedNonzero, s);
                }
                return verdict(VerdictStatus::NumericEvidence, s);
            }
        }
        verdict(
            VerdictStatus::NumericEvidence,
            self.evidence(e, EVIDENCE_SAMPLES, 0x5eed),
        )
    }

    /// `ProvedConstant` when the canonical form has no free indeterminate,
    /// otherwise evidence from a sweep around the witness.
    pub fn constant_verdict(&self, e: &RatFun) -> ProofVerdict {
        if self.is_constant(e) {
            return ProofVerdict {
                status: VerdictStatus::ProvedConstant(e.clone()),
                certificate: e.clone(),
                samples: Vec::new(),
            };
        }
        ProofVerdict {
            status: VerdictStatus::NumericEvidence,
            certificate: e.clone(),
            samples: self.evidence(e, EVIDENCE_SAMPLES, 0xc0de),
        }
    }

    /// The witness followed by `n - 1` random perturbations of it.
    fn evidence(&self, e: &RatFun, n: usize, seed: u64) -> Vec<Sample> {
        let vars: Vec<SymbolId> = self.free_indeterminates(e).into_iter().collect();
        self.sample_envs(&vars, n, seed)
            .into_iter()
            .filter_map(|env| {
                let value = self.eval_numeric(e, &env, EVIDENCE_BITS).ok()?;
                Some(Sample {
                    point: env.into_iter().collect(),
                    value,
                })
            })
            .collect()
    }

    /// Deterministic points near the witness: each listed indeterminate is
    /// scaled by a factor in [0.9, 1.1] (shifted when its witness is 0) and
    /// clamped to its declared range. The first point is the witness.
    pub fn sample_envs(&self, vars: &[SymbolId], n: usize, seed: u64) -> Vec<Env> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut env = Env::new();
            for &v in vars {
                let w = self.witness(v).unwrap_or(0.0);
                let x = if i == 0 {
                    w
                } else if w == 0.0 {
                    rng.gen_range(-0.1..0.1)
                } else {
                    w * rng.gen_range(0.9..1.1)
                };
                let x = match self.range(v) {
                    Some((lo, hi)) => x.clamp(lo, hi),
                    None => x,
                };
                env.insert(v, x);
            }
            out.push(env);
        }
        out
    }
}
