//! Standard bit-flip mutation: every membership bit flips independently with
//! probability `1/n`.

use rand::Rng;
use rand_distr::{Distribution, Geometric};

use crate::subset::Subset;

/// Bit-flip mutation over a fixed ground set.
///
/// Rather than drawing `n` Bernoulli variables, the gaps between flipped
/// positions are drawn from a geometric distribution, which gives the same
/// joint distribution at an expected cost of two draws per mutation.
#[derive(Debug, Clone)]
pub struct BitFlipMutation {
    n: usize,
    gap: Geometric,
}

impl BitFlipMutation {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "mutation needs a non-empty ground set");
        BitFlipMutation {
            n,
            gap: Geometric::new(1.0 / n as f64).expect("1/n is a valid probability"),
        }
    }

    /// Returns a mutated copy of `set`.
    pub fn apply<R: Rng + ?Sized>(&self, set: &Subset, rng: &mut R) -> Subset {
        debug_assert_eq!(set.universe(), self.n);
        let mut child = set.clone();
        let mut pos = 0u64;
        loop {
            pos = pos.saturating_add(self.gap.sample(rng));
            if pos >= self.n as u64 {
                break;
            }
            child.toggle(pos as usize);
            pos += 1;
        }
        child
    }
}

/// One-off form of [`BitFlipMutation::apply`].
pub fn mutate<R: Rng + ?Sized>(set: &Subset, rng: &mut R) -> Subset {
    BitFlipMutation::new(set.universe()).apply(set, rng)
}
