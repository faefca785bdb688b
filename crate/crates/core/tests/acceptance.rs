//! Acceptance criteria, one line per criterion. Run with
//! `cargo test -p biboolean-core --test acceptance`.

mod common;

use biboolean::convolutions::{
    additive_convolve_tables, bb, bb_table, breta, breta_direct, breta_inverse, twisted_star, ConvolutionKind,
};
use biboolean::cumulants::{c_blr_cumulant, cumulants_to_moments, moments_to_cumulants, word_cumulant, CumulantKind};
use biboolean::model::{
    measure_moments, Alphabet, AtomicMeasure2D, ExponentTable, MomentSource, TableKind, TwoFacedDistribution,
};
use biboolean::partitions::{enumerate, kreweras, pi_omega_chi, ChiMap, OmegaMap, Partition, PartitionFamily};
use biboolean::positivity::{determinant, inertia, infdiv_probe, moment_matrix};
use biboolean::products::{biboolean_product, bifree_product, FamilySpec};
use biboolean::random;
use biboolean::rational::{frac, int, Rational};
use biboolean::series::TruncatedSeries2;
use biboolean::transforms::{
    check_mult_add_theorems, compound_poisson_table, moment_series, self_energy_series, verify_partial_eta,
    MultAddTheorem,
};
use common::*;
use num_traits::Zero;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

struct Criterion {
    id: usize,
    name: &'static str,
    bound: Duration,
    run: fn() -> Duration,
}

/// Times the whole body.
fn timed(f: impl FnOnce()) -> Duration {
    let start = Instant::now();
    f();
    start.elapsed()
}

fn pi_omega_chi_golden() -> Duration {
    let chi = ChiMap::parse("lrrlrllr").unwrap();
    let omega = OmegaMap::from_names(&["k1", "k1", "k2", "k1", "k2", "k2", "k1", "k1"]);
    let want = Partition::from_one_based(&[vec![1, 4], vec![6], vec![7, 8], vec![3, 5], vec![2]]).unwrap();
    let start = Instant::now();
    let got = pi_omega_chi(&chi, &omega).unwrap();
    let elapsed = start.elapsed();
    assert_eq!(got, want);
    elapsed
}

fn two_point_golden() -> Duration {
    timed(|| {
        let t = example_table(4);
        let b = moments_to_cumulants(&t, CumulantKind::Biboolean).unwrap();
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
        for n in 1..=5i64 {
            let r = infdiv_probe(&t, n as usize, 1).unwrap();
            let nn = int(n);
            let want = -frac(1, 16) / &nn - frac(1, 16) / (&nn * &nn)
                + frac(1, 16) / (&nn * &nn * &nn)
                + frac(1, 16) / (&nn * &nn * &nn * &nn);
            assert_eq!(r.moments.get(2, 2), want, "n = {n}");
        }
    })
}

fn self_convolution_matrix() -> Duration {
    timed(|| {
        let t = example_table(4);
        let s = additive_convolve_tables(&t, &t, ConvolutionKind::Biboolean).unwrap();
        let x = moment_matrix(&s, 1).unwrap();
        let h = frac;
        let want = vec![
            vec![int(1), int(1), int(1), h(1, 2)],
            vec![int(1), h(3, 2), h(1, 2), h(3, 4)],
            vec![int(1), h(1, 2), h(3, 2), h(3, 4)],
            vec![h(1, 2), h(3, 4), h(3, 4), h(9, 8)],
        ];
        assert_eq!(x.entries, want);
        assert_eq!(determinant(&x.entries).unwrap(), frac(-1, 8));
        assert!(!inertia(&x.entries).unwrap().is_psd());
    })
}

fn signed_jump_matrix() -> Duration {
    timed(|| {
        let jumps = AtomicMeasure2D::from_triples(&[
            (int(1), int(1), int(3)),
            (int(-1), int(1), int(3)),
            (int(1), int(-1), int(3)),
        ])
        .unwrap();
        let t = compound_poisson_table(&int(1), &jumps, CumulantKind::Biboolean, 4).unwrap();
        let zwm = moment_series(&t, 4).unwrap().shift(1, 1, 6);
        let coeffs =
            [(1, 1, 1), (2, 1, 3), (1, 2, 3), (3, 1, 18), (2, 2, 6), (1, 3, 18), (3, 2, 48), (2, 3, 48), (3, 3, 324)];
        for (m, n, v) in coeffs {
            assert_eq!(zwm.get(m, n), int(v), "z^{m} w^{n}");
        }
        let x = moment_matrix(&t, 1).unwrap();
        assert_eq!(determinant(&x.entries).unwrap(), int(-864));
    })
}

fn compound_poisson_golden() -> Duration {
    timed(|| {
        let sigma = AtomicMeasure2D::dirac(int(1), int(1));
        for lambda in [int(1), int(2), frac(1, 2)] {
            let bb = compound_poisson_table(&lambda, &sigma, CumulantKind::Biboolean, 6).unwrap();
            assert_matches_g(&bb, &biboolean_poisson_g(&lambda), 6);
            let bf = compound_poisson_table(&lambda, &sigma, CumulantKind::Bifermi, 6).unwrap();
            assert_matches_g(&bf, &bifermi_poisson_g(&lambda), 6);
        }
    })
}

fn gaussian_golden() -> Duration {
    timed(|| {
        for cov in [int(0), int(1), frac(-1, 2)] {
            let mut b = ExponentTable::new(TableKind::BibooleanCum, 8);
            b.set(2, 0, int(1)).unwrap();
            b.set(0, 2, int(1)).unwrap();
            b.set(1, 1, cov.clone()).unwrap();
            let t = cumulants_to_moments(&b).unwrap();
            let e = self_energy_series(&t, 8).unwrap();
            assert_eq!(e, TruncatedSeries2::from_terms(8, [(2, 0, int(1)), (0, 2, int(1)), (1, 1, cov.clone())]));
            assert!(verify_partial_eta(&t, 8).unwrap().is_zero());
            assert_matches_g(&t, &gaussian_g(&cov), 8);
            if cov.is_zero() {
                assert_eq!(t, measure_moments(&bernoulli_product(), 8));
            }
        }
    })
}

fn functional_equation_suite() -> Duration {
    timed(|| {
        for seed in 0..50u64 {
            let mut rng = random::rng(seed);
            let atoms = 1 + seed as usize % 4;
            let t = measure_moments(&random::probability_measure(&mut rng, atoms), 6);
            assert!(verify_partial_eta(&t, 6).unwrap().is_zero(), "seed {seed}");
        }
    })
}

fn measure_pair(mu: &AtomicMeasure2D, degree: usize, tag: usize) -> TwoFacedDistribution {
    TwoFacedDistribution::from_table(&measure_moments(mu, degree), &format!("a{tag}"), &format!("b{tag}")).unwrap()
}

fn independence_suite() -> Duration {
    timed(|| {
        let mut rng = random::rng(8);
        let comps = vec![
            measure_pair(&random::probability_measure(&mut rng, 2), 5, 1),
            measure_pair(&random::probability_measure(&mut rng, 2), 5, 2),
        ];
        let fam = FamilySpec::new(comps).unwrap();
        let joints = [
            (TwoFacedDistribution::materialize(&biboolean_product(fam.clone())), CumulantKind::Biboolean),
            (TwoFacedDistribution::materialize(&bifree_product(fam.clone())), CumulantKind::Bifree),
        ];
        for (joint, kind) in &joints {
            let mut checked = 0;
            for w in joint.alphabet().words_up_to(5) {
                if fam.omega(&w).is_constant() {
                    continue;
                }
                let c = word_cumulant(joint, &w, *kind).unwrap();
                assert!(c.is_zero(), "{kind:?} {}", joint.alphabet().format_word(&w));
                checked += 1;
            }
            assert!(checked > 0);
        }
    })
}

fn random_pair_table(seed: u64, degree: usize) -> ExponentTable {
    let mut rng = random::rng(seed);
    let atoms = 1 + (seed as usize % 2);
    measure_moments(&random::probability_measure(&mut rng, atoms), degree)
}

fn reduced_eta_suite() -> Duration {
    timed(|| {
        for which in [MultAddTheorem::T, MultAddTheorem::S, MultAddTheorem::S2] {
            for seed in 0..20u64 {
                let a = random_pair_table(1000 + seed, 8);
                let b = random_pair_table(2000 + seed, 8);
                let r = check_mult_add_theorems(&a, &b, which, 3).unwrap();
                assert!(r.is_zero(), "{} seed {seed}: {r}", which.name());
            }
        }
    })
}

fn gaussian_cumulants(kind: TableKind, a: Rational, b: Rational, c: Rational) -> ExponentTable {
    let mut t = ExponentTable::new(kind, 8);
    t.set(2, 0, a).unwrap();
    t.set(0, 2, b).unwrap();
    t.set(1, 1, c).unwrap();
    t
}

fn series_suite() -> Duration {
    timed(|| {
        let alphabets = [Alphabet::pair("a", "b"), Alphabet::new(["a1", "a2"], ["b"]).unwrap()];
        for (k, alphabet) in alphabets.iter().enumerate() {
            for seed in 0..3 {
                let mut rng = random::rng(100 * k as u64 + seed);
                let f = random::ncseries(&mut rng, alphabet, 5);
                let g = breta_direct(&f);
                assert_eq!(breta(&f), g);
                assert_eq!(breta_inverse(&g), f);
            }
        }
        for seed in 0..10u64 {
            let alphabet = &alphabets[seed as usize % 2];
            let mut rng = random::rng(200 + seed);
            let f = random::ncseries(&mut rng, alphabet, 4);
            let g = random::ncseries(&mut rng, alphabet, 4);
            let lhs = breta(&twisted_star(&f, &g).unwrap());
            assert_eq!(lhs, twisted_star(&breta(&f), &breta(&g)).unwrap(), "seed {seed}");
        }
        for (a, b, c) in [(int(1), int(1), int(0)), (int(2), frac(1, 2), frac(-1, 3)), (int(1), int(3), int(1))] {
            let boolean =
                cumulants_to_moments(&gaussian_cumulants(TableKind::BibooleanCum, a.clone(), b.clone(), c.clone()))
                    .unwrap();
            let free = cumulants_to_moments(&gaussian_cumulants(TableKind::BifreeCum, a, b, c)).unwrap();
            assert_eq!(bb_table(&boolean).unwrap(), free);
            let d = TwoFacedDistribution::from_table(&boolean, "a", "b").unwrap();
            assert_eq!(bb(&d), TwoFacedDistribution::from_table(&free, "a", "b").unwrap());
        }
    })
}

fn lattice_suite() -> Duration {
    timed(|| {
        for n in 1..=6 {
            for chi in all_chis(n) {
                assert_eq!(enumerate(PartitionFamily::Bi, &chi).unwrap().len(), 1 << (n - 1));
                let bnc = enumerate(PartitionFamily::Bnc, &chi).unwrap();
                assert_eq!(bnc.len(), catalan(n));
                check_zeta_inversion(PartitionFamily::Bi, &chi);
                check_zeta_inversion(PartitionFamily::Bnc, &chi);
                for p in &bnc {
                    assert_eq!(p.num_blocks() + kreweras(&chi, p, None).unwrap().num_blocks(), n + 1);
                }
            }
        }
    })
}

fn two_state_collapse() -> Duration {
    timed(|| {
        let alphabet = Alphabet::new(["a1", "a2"], ["b"]).unwrap();
        let delta = TwoFacedDistribution::new(alphabet.clone(), 4);
        for seed in 0..30u64 {
            let mut rng = random::rng(500 + seed);
            let phi = random::distribution(&mut rng, &alphabet, 4);
            let w = random::word(&mut rng, &alphabet, 1 + seed as usize % 4);
            assert_eq!(
                c_blr_cumulant(&phi, &delta, &w).unwrap(),
                word_cumulant(&phi, &w, CumulantKind::Biboolean).unwrap(),
                "seed {seed}"
            );
        }
    })
}

fn main() -> ExitCode {
    let ms = Duration::from_millis;
    let s = Duration::from_secs;
    let criteria = [
        Criterion { id: 1, name: "coloring partition golden", bound: ms(1), run: pi_omega_chi_golden },
        Criterion { id: 2, name: "two-point measure cumulants and division", bound: s(1), run: two_point_golden },
        Criterion { id: 3, name: "self-convolution moment matrix", bound: s(1), run: self_convolution_matrix },
        Criterion { id: 4, name: "signed jump measure matrix", bound: s(1), run: signed_jump_matrix },
        Criterion { id: 5, name: "compound Poisson closed forms", bound: s(5), run: compound_poisson_golden },
        Criterion { id: 6, name: "Gaussian closed forms", bound: s(5), run: gaussian_golden },
        Criterion { id: 7, name: "functional equation on 50 measures", bound: s(30), run: functional_equation_suite },
        Criterion { id: 8, name: "mixed cumulants vanish in products", bound: s(60), run: independence_suite },
        Criterion { id: 9, name: "reduced eta theorems", bound: s(120), run: reduced_eta_suite },
        Criterion { id: 10, name: "non-commuting series maps", bound: s(60), run: series_suite },
        Criterion { id: 11, name: "partition lattices", bound: s(30), run: lattice_suite },
        Criterion { id: 12, name: "two-state collapse", bound: s(30), run: two_state_collapse },
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for c in criteria {
        let outcome = panic::catch_unwind(AssertUnwindSafe(c.run));
        let line = match outcome {
            Ok(t) if t <= c.bound => format!("PASS  {:>2}  {}  ({:.3?} <= {:?})", c.id, c.name, t, c.bound),
            Ok(t) => format!("FAIL  {:>2}  {}  (took {:.3?}, bound {:?})", c.id, c.name, t, c.bound),
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                format!("FAIL  {:>2}  {}  ({})", c.id, c.name, msg.lines().next().unwrap_or(""))
            }
        };
        if line.starts_with("FAIL") {
            failed += 1;
        }
        println!("{line}");
    }
    println!("{} of 12 criteria passed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
