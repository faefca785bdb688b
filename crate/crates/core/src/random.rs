//! Seeded generators of small rational test inputs (denominators at most 4).

use crate::model::{Alphabet, Atom, AtomicMeasure2D, ExponentTable, Letter, TableKind, TwoFacedDistribution, Word};
use crate::rational::{frac, Rational};
use crate::series::NcSeries;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A value p/q with q ∈ {1, 2, 4} and |p/q| <= bound.
pub fn small_rational(rng: &mut TestRng, bound: i64) -> Rational {
    let q = [1, 2, 4][rng.gen_range(0..3)];
    frac(rng.gen_range(-bound * q..=bound * q), q)
}

/// Probability measure with `atoms` distinct points (at most 4) and weights in quarters.
pub fn probability_measure(rng: &mut TestRng, atoms: usize) -> AtomicMeasure2D {
    let atoms = atoms.clamp(1, 4);
    // Split 4 quarters into `atoms` positive parts.
    let mut cuts: BTreeSet<i64> = BTreeSet::new();
    while cuts.len() < atoms - 1 {
        cuts.insert(rng.gen_range(1..4));
    }
    let mut bounds: Vec<i64> = vec![0];
    bounds.extend(cuts);
    bounds.push(4);
    let mut points = BTreeSet::new();
    while points.len() < atoms {
        points.insert((small_rational(rng, 2), small_rational(rng, 2)));
    }
    let points: Vec<_> = points.into_iter().collect();
    let mut shuffled = points.clone();
    for i in (1..shuffled.len()).rev() {
        shuffled.swap(i, rng.gen_range(0..=i));
    }
    let list = shuffled
        .into_iter()
        .enumerate()
        .map(|(k, (x, y))| Atom { x, y, weight: frac(bounds[k + 1] - bounds[k], 4) })
        .collect();
    AtomicMeasure2D::new(list).expect("distinct points")
}

/// Random cumulant or moment table with small entries.
pub fn table(rng: &mut TestRng, kind: TableKind, degree: usize) -> ExponentTable {
    let mut t = ExponentTable::new(kind, degree);
    for (m, n) in crate::model::slots(degree) {
        t.set(m, n, small_rational(rng, 2)).expect("slot within degree");
    }
    t
}

pub fn ncseries(rng: &mut TestRng, alphabet: &Alphabet, degree: usize) -> NcSeries {
    let mut s = NcSeries::new(alphabet.clone(), degree);
    for w in alphabet.words_up_to(degree) {
        s.set(w, small_rational(rng, 2)).expect("word within degree");
    }
    s
}

pub fn distribution(rng: &mut TestRng, alphabet: &Alphabet, degree: usize) -> TwoFacedDistribution {
    ncseries(rng, alphabet, degree).to_distribution()
}

pub fn word(rng: &mut TestRng, alphabet: &Alphabet, len: usize) -> Word {
    (0..len).map(|_| rng.gen_range(0..alphabet.len()) as Letter).collect()
}
