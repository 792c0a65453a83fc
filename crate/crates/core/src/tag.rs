//! Tag-machine view of a morphic spec: `W(n) = |sigma(u_1 ... u_n)|` and the
//! sampled ratios `W(n) / n`.

use crate::error::{Error, Result};
use crate::morphic::MorphicSpec;
use crate::words::Ratio;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TagMachine {
    spec: MorphicSpec,
}

/// Sampled dilation data. The liminf itself is not computable from a
/// prefix; `exceeds_one` comes from the exact growth decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DilationEstimate {
    pub samples: Vec<(u64, Ratio)>,
    pub min_ratio: Ratio,
    pub argmin: u64,
    pub exceeds_one: bool,
}

impl TagMachine {
    pub fn new(spec: MorphicSpec) -> Self {
        TagMachine { spec }
    }

    pub fn spec(&self) -> &MorphicSpec {
        &self.spec
    }

    /// Internal alphabet size plus the longest image length.
    pub fn size(&self) -> usize {
        self.spec.sigma().size() + self.spec.sigma().max_image_len()
    }

    pub fn dilation_exceeds_one(&self) -> bool {
        self.spec.exponential_growth()
    }

    /// One pass over the first `max_n` letters of the fixed point, sampling
    /// `n = 1, 2, 4, ...` plus `max_n` and the overall minimiser.
    pub fn dilation_profile(&self, max_n: u64) -> Result<DilationEstimate> {
        if max_n == 0 {
            return Err(Error::InvalidArgument("the profile needs at least one letter".into()));
        }
        let count = usize::try_from(max_n).map_err(|_| Error::Overflow("prefix length".into()))?;
        let sigma = self.spec.sigma();
        let letters = self.spec.fixed_point(count);
        let mut total = 0u64;
        let mut samples = Vec::new();
        let mut next_sample = 1u64;
        let mut best: Option<(Ratio, u64)> = None;
        for (i, &a) in letters.iter().enumerate() {
            let n = i as u64 + 1;
            total += sigma.image(a).len() as u64;
            let r = Ratio::new(total, n);
            if best.is_none_or(|(b, _)| r < b) {
                best = Some((r, n));
            }
            if n == next_sample || n == max_n {
                samples.push((n, r));
                if n == next_sample {
                    next_sample = next_sample.saturating_mul(2);
                }
            }
        }
        let (min_ratio, argmin) = best.expect("max_n >= 1");
        if !samples.iter().any(|&(n, _)| n == argmin) {
            samples.push((argmin, min_ratio));
            samples.sort_unstable_by_key(|&(n, _)| n);
        }
        Ok(DilationEstimate {
            samples,
            min_ratio,
            argmin,
            exceeds_one: self.dilation_exceeds_one(),
        })
    }
}
