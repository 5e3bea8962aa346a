//! Degree-parameter sequences for the cluster-tree families.

use crate::error::{Error, Result};

/// A strictly increasing sequence of positive degrees `d_0 .. d_{k+1}`.
/// The canonical parameterization is `d_i = 2^(i(i-1)/2) * delta^i`, but
/// the view-equality combinatorics never use the magnitudes, so any
/// strictly increasing sequence is accepted for desk-scale instances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaSequence(Vec<u64>);

impl DeltaSequence {
    /// The canonical sequence `d_i = 2^(i(i-1)/2) * delta^i` for
    /// `i = 0 ..= k+1`. Fails on u64 overflow rather than truncating.
    pub fn paper(delta: u64, k: u32) -> Result<DeltaSequence> {
        if delta < 2 {
            // delta = 1 would give d_1 = d_0, breaking strict monotonicity.
            return Err(Error::NonIntegralSizes("delta must be at least 2".into()));
        }
        let mut seq = Vec::with_capacity(k as usize + 2);
        for i in 0..=(k as u64 + 1) {
            let two_exp = if i == 0 { 0 } else { i * (i - 1) / 2 };
            let pow2 = 1u64
                .checked_shl(two_exp as u32)
                .ok_or_else(|| Error::NonIntegralSizes("sequence overflows u64".into()))?;
            let dpow = delta
                .checked_pow(i as u32)
                .ok_or_else(|| Error::NonIntegralSizes("sequence overflows u64".into()))?;
            let value = pow2
                .checked_mul(dpow)
                .ok_or_else(|| Error::NonIntegralSizes("sequence overflows u64".into()))?;
            seq.push(value);
        }
        DeltaSequence::custom(seq)
    }

    /// Doubling sequence `1, 2, 4, ...`; the default desk-scale choice.
    pub fn doubling(k: u32) -> DeltaSequence {
        DeltaSequence((0..=(k + 1)).map(|i| 1u64 << i).collect())
    }

    pub fn custom(values: Vec<u64>) -> Result<DeltaSequence> {
        if values.len() < 2 {
            return Err(Error::NonIntegralSizes(
                "need at least two sequence entries".into(),
            ));
        }
        if values[0] < 1 {
            return Err(Error::NonIntegralSizes("entries must be positive".into()));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NonIntegralSizes(
                "sequence must be strictly increasing".into(),
            ));
        }
        Ok(DeltaSequence(values))
    }

    pub fn get(&self, i: usize) -> u64 {
        self.0[i]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    /// Largest `k` this sequence can parameterize (`k + 2` entries needed).
    pub fn max_k(&self) -> u32 {
        (self.len() - 2) as u32
    }
}
