mod common;

use biboolean::cumulants::{
    affine_shift_cumulants, c_blr_cumulant, cumulant_series, cumulants_to_moments, moments_from_cumulant_series,
    moments_to_cumulants, word_cumulant, CumulantKind, RecursiveCumulants, Side,
};
use biboolean::model::{measure_moments, Alphabet, ExponentTable, MomentSource, TableKind, TwoFacedDistribution};
use biboolean::partitions::ChiMap;
use biboolean::random;
use biboolean::rational::{frac, int, Rational};
use common::{brute_abi, example_measure, example_table};
use num_traits::{One, Zero};
use proptest::prelude::*;

const KINDS: [CumulantKind; 5] =
    [CumulantKind::Boolean, CumulantKind::Free, CumulantKind::Bifree, CumulantKind::Biboolean, CumulantKind::Bifermi];

fn moment_table(seed: u64, degree: usize) -> ExponentTable {
    let mut rng = random::rng(seed);
    random::table(&mut rng, TableKind::Moments, degree)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn conversions_roundtrip_for_every_kind(seed in any::<u64>(), degree in 1usize..=6) {
        let t = moment_table(seed, degree);
        for kind in KINDS {
            let c = moments_to_cumulants(&t, kind).unwrap();
            prop_assert_eq!(c.kind(), kind.table_kind());
            prop_assert_eq!(&cumulants_to_moments(&c).unwrap().truncate(degree), &t);
            let mut rng = random::rng(seed ^ 0x5eed);
            let c = random::table(&mut rng, kind.table_kind(), degree);
            let back = moments_to_cumulants(&cumulants_to_moments(&c).unwrap(), kind).unwrap();
            prop_assert_eq!(back, c);
        }
    }

    #[test]
    fn kinds_agree_at_orders_one_and_two(seed in any::<u64>()) {
        let t = moment_table(seed, 2);
        let (m10, m01) = (t.get(1, 0), t.get(0, 1));
        for kind in KINDS {
            let c = moments_to_cumulants(&t, kind).unwrap();
            prop_assert_eq!(c.get(1, 0), m10.clone());
            prop_assert_eq!(c.get(0, 1), m01.clone());
            prop_assert_eq!(c.get(2, 0), t.get(2, 0) - &m10 * &m10);
            prop_assert_eq!(c.get(0, 2), t.get(0, 2) - &m01 * &m01);
            prop_assert_eq!(c.get(1, 1), t.get(1, 1) - &m10 * &m01);
        }
    }

    #[test]
    fn bifermi_equals_biboolean_at_zero_mean(seed in any::<u64>(), atoms in 1usize..=4) {
        let mut rng = random::rng(seed);
        let mu = random::probability_measure(&mut rng, atoms).zero_mean_shift();
        let t = measure_moments(&mu, 6);
        prop_assert_eq!(
            moments_to_cumulants(&t, CumulantKind::Bifermi).unwrap().with_kind(TableKind::BibooleanCum),
            moments_to_cumulants(&t, CumulantKind::Biboolean).unwrap()
        );
    }

    #[test]
    fn bifermi_mixed_cumulants_ignore_translation(seed in any::<u64>(), atoms in 1usize..=4) {
        let mut rng = random::rng(seed);
        let mu = random::probability_measure(&mut rng, atoms);
        let g = moments_to_cumulants(&measure_moments(&mu, 6), CumulantKind::Bifermi).unwrap();
        let h = moments_to_cumulants(&measure_moments(&mu.zero_mean_shift(), 6), CumulantKind::Bifermi).unwrap();
        for m in 1..6 {
            for n in 1..=6 - m {
                prop_assert_eq!(g.get(m, n), h.get(m, n));
            }
        }
    }
}

#[test]
fn example_table_cumulants_are_pinned() {
    let b = moments_to_cumulants(&example_table(4), CumulantKind::Biboolean).unwrap();
    let want = [
        ((1, 0), frac(1, 2)),
        ((0, 1), frac(1, 2)),
        ((2, 0), frac(1, 4)),
        ((0, 2), frac(1, 4)),
        ((1, 1), frac(-1, 4)),
        ((2, 1), frac(-1, 8)),
        ((1, 2), frac(-1, 8)),
        ((2, 2), frac(-1, 16)),
    ];
    for ((m, n), v) in want {
        assert_eq!(b.get(m, n), v, "B({m},{n})");
    }
}

#[test]
fn signed_compound_table_roundtrips() {
    let mut b = ExponentTable::new(TableKind::BibooleanCum, 6);
    for (m, n) in ExponentTable::new(TableKind::Moments, 6).slots() {
        let sign = |k: usize| if k % 2 == 0 { 1 } else { -1 };
        b.set(m, n, int(3 * (sign(m) + sign(n) + 1))).unwrap();
    }
    let m = cumulants_to_moments(&b).unwrap();
    assert_eq!(moments_to_cumulants(&m, CumulantKind::Biboolean).unwrap(), b);
}

/// Bi-Fermi cumulants of a measure: the means, then the B-table of its zero-mean shift.
/// Resumming over ABI (built here by brute force) must give back the moments.
#[test]
fn bifermi_table_resums_over_brute_force_abi() {
    let mu = example_measure();
    let degree = 6;
    let shifted =
        moments_to_cumulants(&measure_moments(&mu.zero_mean_shift(), degree), CumulantKind::Biboolean).unwrap();
    let mut gamma = shifted.with_kind(TableKind::BifermiCum);
    gamma.set(1, 0, frac(1, 2)).unwrap();
    gamma.set(0, 1, frac(1, 2)).unwrap();
    let moments = measure_moments(&mu, degree);
    for (m, n) in moments.slots() {
        let chi = ChiMap::two_index(m, n);
        let total: Rational = brute_abi(&chi)
            .iter()
            .map(|pi| {
                pi.blocks()
                    .iter()
                    .map(|b| {
                        let l = b.iter().filter(|&&i| i < m).count();
                        gamma.get(l, b.len() - l)
                    })
                    .product::<Rational>()
            })
            .sum();
        assert_eq!(total, moments.get(m, n), "M({m},{n})");
    }
    assert_eq!(moments_to_cumulants(&moments, CumulantKind::Bifermi).unwrap(), gamma);
}

fn two_by_two() -> Alphabet {
    Alphabet::new(["a1", "a2"], ["b1", "b2"]).unwrap()
}

#[test]
fn short_word_cumulants() {
    let mut rng = random::rng(7);
    let d = random::distribution(&mut rng, &two_by_two(), 3);
    for x in 0..4 {
        for kind in [CumulantKind::Biboolean, CumulantKind::Bifree] {
            assert_eq!(word_cumulant(&d, &[x], kind).unwrap(), d.moment(&[x]));
        }
        for y in 0..4 {
            let want = d.moment(&[x, y]) - d.moment(&[x]) * d.moment(&[y]);
            for kind in [CumulantKind::Biboolean, CumulantKind::Bifree] {
                assert_eq!(word_cumulant(&d, &[x, y], kind).unwrap(), want);
            }
        }
    }
}

#[test]
fn mobius_and_recursive_routes_agree() {
    let alphabet = Alphabet::new(["a1", "a2"], ["b"]).unwrap();
    for seed in 0..3 {
        let mut rng = random::rng(seed);
        let d = random::distribution(&mut rng, &alphabet, 5);
        for kind in [CumulantKind::Biboolean, CumulantKind::Bifree] {
            let series = cumulant_series(&d, kind);
            let mut rec = RecursiveCumulants::new(&d, kind);
            for w in alphabet.words_up_to(5) {
                let direct = word_cumulant(&d, &w, kind).unwrap();
                assert_eq!(rec.get(&w), direct);
                assert_eq!(series.coeff(&w), direct);
            }
            assert_eq!(moments_from_cumulant_series(&series, kind), d);
        }
        let series = cumulant_series(&d, CumulantKind::Bifermi);
        assert_eq!(moments_from_cumulant_series(&series, CumulantKind::Bifermi), d);
    }
}

/// Extends a distribution on (a | b) by a left unit `u`: φ(w u w') = φ(w w').
fn with_left_unit(base: &TwoFacedDistribution) -> TwoFacedDistribution {
    let alphabet = Alphabet::new(["a", "u"], ["b"]).unwrap();
    let mut d = TwoFacedDistribution::new(alphabet.clone(), base.degree());
    for w in alphabet.words_up_to(base.degree()) {
        let stripped: Vec<usize> = w.iter().filter(|&&l| l != 1).map(|&l| if l == 2 { 1 } else { 0 }).collect();
        d.set(w, base.moment(&stripped)).unwrap();
    }
    d
}

#[test]
fn unit_entries_vanish_at_the_ends_and_drop_out_inside() {
    let mut rng = random::rng(11);
    let base = random::distribution(&mut rng, &Alphabet::pair("a", "b"), 5);
    let d = with_left_unit(&base);
    let mut checked = 0;
    for w in d.alphabet().words_up_to(5) {
        if w.len() < 2 || w.iter().filter(|&&l| l == 1).count() != 1 {
            continue;
        }
        let pos = w.iter().position(|&l| l == 1).unwrap();
        let order = d.alphabet().chi(&w).order();
        let got = word_cumulant(&d, &w, CumulantKind::Biboolean).unwrap();
        if pos == order[0] || pos == order[w.len() - 1] {
            assert!(got.is_zero(), "{}", d.alphabet().format_word(&w));
        } else {
            let rest: Vec<usize> = w.iter().filter(|&&l| l != 1).map(|&l| if l == 2 { 1 } else { 0 }).collect();
            assert_eq!(got, word_cumulant(&base, &rest, CumulantKind::Biboolean).unwrap());
        }
        checked += 1;
    }
    assert!(checked > 100);
}

fn delta_state(alphabet: &Alphabet, degree: usize) -> TwoFacedDistribution {
    TwoFacedDistribution::new(alphabet.clone(), degree)
}

#[test]
fn two_state_cumulants_collapse() {
    let alphabet = Alphabet::new(["a1", "a2"], ["b"]).unwrap();
    for seed in 0..4 {
        let mut rng = random::rng(100 + seed);
        let phi = random::distribution(&mut rng, &alphabet, 4);
        let delta = delta_state(&alphabet, 4);
        for w in alphabet.words_up_to(4) {
            assert_eq!(c_blr_cumulant(&phi, &phi, &w).unwrap(), word_cumulant(&phi, &w, CumulantKind::Bifree).unwrap());
            assert_eq!(
                c_blr_cumulant(&phi, &delta, &w).unwrap(),
                word_cumulant(&phi, &w, CumulantKind::Biboolean).unwrap()
            );
        }
    }
}

/// One-face words of length 3: only {1,3},{2} has an interior block.
#[test]
fn two_state_cumulants_by_hand() {
    let alphabet = Alphabet::new(["x", "y", "z"], Vec::<&str>::new()).unwrap();
    let mut rng = random::rng(5);
    let phi = random::distribution(&mut rng, &alphabet, 3);
    let psi = random::distribution(&mut rng, &alphabet, 3);
    let f = |w: &[usize]| phi.moment(w);
    let k2 = |i: usize, j: usize| f(&[i, j]) - f(&[i]) * f(&[j]);
    for (x, y) in [(0, 1), (1, 2), (2, 2)] {
        assert_eq!(c_blr_cumulant(&phi, &psi, &[x, y]).unwrap(), k2(x, y));
    }
    let (a, b, c) = (0, 1, 2);
    let want = f(&[a, b, c])
        - f(&[a]) * k2(b, c)
        - k2(a, b) * f(&[c])
        - k2(a, c) * psi.moment(&[b])
        - f(&[a]) * f(&[b]) * f(&[c]);
    assert_eq!(c_blr_cumulant(&phi, &psi, &[a, b, c]).unwrap(), want);
}

#[test]
fn affine_shift_matches_translated_measures() {
    let degree = 5;
    let b = |mu: &biboolean::model::AtomicMeasure2D| {
        moments_to_cumulants(&measure_moments(mu, degree), CumulantKind::Biboolean).unwrap()
    };
    for seed in 0..10 {
        let mut rng = random::rng(seed);
        let mu = random::probability_measure(&mut rng, 3);
        let t = b(&mu);
        let left = affine_shift_cumulants(&t, Side::Left).unwrap();
        let right = affine_shift_cumulants(&t, Side::Right).unwrap();
        assert_eq!(left, b(&mu.shift(&int(1), &int(0))));
        assert_eq!(right, b(&mu.shift(&int(0), &int(1))));
        assert_eq!(affine_shift_cumulants(&left, Side::Right).unwrap(), b(&mu.shift(&int(1), &int(1))));
        assert_eq!(affine_shift_cumulants(&left, Side::Left).unwrap(), b(&mu.shift(&int(2), &int(0))));
        for n in 0..degree {
            assert_eq!(left.get(1, n) - if n == 0 { Rational::one() } else { Rational::zero() }, t.get(1, n));
        }
    }
}

#[test]
fn shift_example_value() {
    let t = moments_to_cumulants(&example_table(4), CumulantKind::Biboolean).unwrap();
    assert_eq!(affine_shift_cumulants(&t, Side::Left).unwrap().get(2, 1), frac(-3, 8));
}

#[test]
fn bad_inputs_are_rejected() {
    let t = example_table(3);
    let b = moments_to_cumulants(&t, CumulantKind::Biboolean).unwrap();
    assert!(moments_to_cumulants(&b, CumulantKind::Free).is_err());
    assert!(cumulants_to_moments(&t).is_err());
    assert!(affine_shift_cumulants(&t, Side::Left).is_err());
    let d = TwoFacedDistribution::from_table(&t, "a", "b").unwrap();
    assert!(word_cumulant(&d, &[0, 0, 0, 0], CumulantKind::Biboolean).is_err());
    assert!(word_cumulant(&d, &[0, 1], CumulantKind::Bifermi).is_err());
    assert!(word_cumulant(&d, &[], CumulantKind::Biboolean).is_err());
    let other = TwoFacedDistribution::new(Alphabet::pair("x", "y"), 3);
    assert!(c_blr_cumulant(&d, &other, &[0]).is_err());
}
