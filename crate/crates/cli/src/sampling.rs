//! Labels of random points of a component, for comparison with the
//! tableau it is supposed to carry.

use anyhow::{bail, Result};
use qkz_core::algebra::Q;
use qkz_core::combinatorics::{spaltenstein_label, Tableau};
use qkz_core::slice::{component_point, Membership, SliceModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Free coordinates are drawn from `[-9, 9]`.
pub const RANGE: i64 = 9;

/// Spaltenstein labels of `samples` points, redrawing when an eliminated
/// coordinate has a vanishing denominator.
pub fn sample_labels(
    model: &SliceModel,
    membership: &Membership,
    seed: u64,
    samples: usize,
) -> Result<Vec<Tableau>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(samples);
    let mut draws = 0;
    while out.len() < samples {
        draws += 1;
        if draws > 100 * samples {
            bail!("too many degenerate draws");
        }
        let values: Vec<Q> = (0..membership.dimension())
            .map(|_| Q::from_integer(rng.gen_range(-RANGE..=RANGE).into()))
            .collect();
        if let Some(x) = component_point(model, membership, &values, &[])? {
            out.push(spaltenstein_label(&x, &model.m)?);
        }
    }
    Ok(out)
}

/// How many labels equal `expected`, and whether every other one is
/// strictly dominated by it.
pub fn tally(labels: &[Tableau], expected: &Tableau) -> (usize, bool) {
    let hits = labels.iter().filter(|t| *t == expected).count();
    let minority_below = labels
        .iter()
        .filter(|t| *t != expected)
        .all(|t| t.dominated_by(expected));
    (hits, minority_below)
}
