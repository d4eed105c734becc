use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random source for one run.
///
/// A ChaCha8 key is derived from the run seed. Stream 0 is reserved for setup
/// (graph generation, choice of the initial adopter); step `t` draws from
/// stream `t + 1`. Within a step the k-th non-adopted node, counting in
/// ascending id order, gets the k-th uniform of that stream. Because any
/// position can be reached by seeking, a step can be split across threads
/// and still reproduce the sequential draws exactly.
#[derive(Clone, Debug)]
pub struct DrawStream {
    base: ChaCha8Rng,
}

impl DrawStream {
    pub fn new(run_seed: u64) -> Self {
        DrawStream { base: ChaCha8Rng::seed_from_u64(run_seed) }
    }

    /// Generator for setup work that happens before the first step.
    pub fn setup_rng(&self) -> ChaCha8Rng {
        let mut rng = self.base.clone();
        rng.set_stream(0);
        rng.set_word_pos(0);
        rng
    }

    /// Uniforms for the step that starts at `step`, beginning at rank 0.
    pub fn step_uniforms(&self, step: u64) -> StepUniforms {
        self.step_uniforms_from(step, 0)
    }

    /// Uniforms for `step` starting at the given rank.
    pub fn step_uniforms_from(&self, step: u64, rank: usize) -> StepUniforms {
        let mut rng = self.base.clone();
        rng.set_stream(step.wrapping_add(1));
        // each uniform consumes one u64, i.e. two 32-bit words
        rng.set_word_pos(2 * rank as u128);
        StepUniforms { rng }
    }
}

/// Sequential reader over one step's uniforms.
pub struct StepUniforms {
    rng: ChaCha8Rng,
}

impl StepUniforms {
    /// Uniform in [0, 1) with 53 bits of precision.
    #[inline]
    pub fn next_uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
}
