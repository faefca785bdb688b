#![allow(dead_code)]

use biboolean::model::{measure_moments, AtomicMeasure2D, ExponentTable};
use biboolean::partitions::{enumerate, mobius, ChiMap, Partition, PartitionFamily};
use biboolean::rational::{frac, int, Rational};
use biboolean::transforms::{expand_rational, moment_series, Poly2, RationalFunction2, Substitution};
use std::collections::HashMap;

/// Every set partition of {0..n}, via restricted growth strings.
pub fn all_set_partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    fn rec(i: usize, max: usize, rgs: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if i == rgs.len() {
            out.push(Partition::from_labels(rgs));
            return;
        }
        for c in 0..=max + 1 {
            rgs[i] = c;
            rec(i + 1, max.max(c), rgs, out);
        }
    }
    if n == 0 {
        return out;
    }
    rec(1, 0, &mut rgs, &mut out);
    out
}

pub fn all_chis(n: usize) -> Vec<ChiMap> {
    (0..1u32 << n)
        .map(|mask| {
            let s: String = (0..n).map(|i| if mask & (1 << i) != 0 { 'r' } else { 'l' }).collect();
            ChiMap::parse(&s).unwrap()
        })
        .collect()
}

pub fn catalan(n: usize) -> usize {
    let mut c = 1usize;
    for k in 0..n {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    c
}

/// ½δ_{(1,0)} + ½δ_{(0,1)}.
pub fn example_measure() -> AtomicMeasure2D {
    AtomicMeasure2D::from_triples(&[(int(1), int(0), frac(1, 2)), (int(0), int(1), frac(1, 2))]).unwrap()
}

pub fn example_table(degree: usize) -> ExponentTable {
    measure_moments(&example_measure(), degree)
}

/// ½(δ₋₁ + δ₁) ⊗ ½(δ₋₁ + δ₁).
pub fn bernoulli_product() -> AtomicMeasure2D {
    let b = [(int(-1), frac(1, 2)), (int(1), frac(1, 2))];
    AtomicMeasure2D::product(&b, &b).unwrap()
}

pub fn crossing_free(p: &Partition) -> bool {
    for (a, b1) in p.blocks().iter().enumerate() {
        for b2 in &p.blocks()[a + 1..] {
            for &i in b1 {
                for &j in b1 {
                    for &k in b2 {
                        for &l in b2 {
                            if i < k && k < j && j < l || k < i && i < l && l < j {
                                return false;
                            }
                        }
                    }
                }
            }
        }
    }
    true
}

/// ABI(χ) by filtering all set partitions: after ranking by ≺_χ, non-crossing
/// and every block nested strictly inside another block is a singleton.
pub fn brute_abi(chi: &ChiMap) -> Vec<Partition> {
    let ranks = chi.ranks();
    all_set_partitions(chi.len())
        .into_iter()
        .filter(|p| {
            let q = p.transport(&ranks);
            if !crossing_free(&q) {
                return false;
            }
            q.blocks().iter().all(|v| {
                let nested = q.blocks().iter().any(|w| w[0] < v[0] && v[v.len() - 1] < w[w.len() - 1]);
                v.len() == 1 || !nested
            })
        })
        .collect()
}

pub fn rf(numerator: Poly2, denominator: Poly2) -> RationalFunction2 {
    RationalFunction2 { numerator, denominator }
}

pub fn c(v: Rational) -> Poly2 {
    Poly2::constant(v)
}

/// Compares uv·M(u, v) with the expansion of G(1/u, 1/v).
pub fn assert_matches_g(t: &ExponentTable, g: &RationalFunction2, degree: usize) {
    let lhs = moment_series(t, degree).unwrap().shift(1, 1, degree + 2);
    let rhs = expand_rational(g, Substitution::Reciprocal, degree + 2).unwrap();
    assert_eq!(lhs, rhs);
}

pub fn gaussian_g(cov: &Rational) -> RationalFunction2 {
    let (z, w) = (Poly2::z(), Poly2::w());
    let one = c(int(1));
    rf(c(cov.clone()).add(&z.mul(&w)), z.pow(2).sub(&one).mul(&w.pow(2).sub(&one)))
}

pub fn biboolean_poisson_g(lambda: &Rational) -> RationalFunction2 {
    let (z, w) = (Poly2::z(), Poly2::w());
    let one = c(int(1));
    let l = c(lambda.clone());
    let num = l.add(&z.sub(&one).mul(&w.sub(&one)));
    let den = z.mul(&w).mul(&z.sub(&one).sub(&l)).mul(&w.sub(&one).sub(&l));
    rf(num, den)
}

pub fn bifermi_poisson_g(lambda: &Rational) -> RationalFunction2 {
    let (z, w) = (Poly2::z(), Poly2::w());
    let one = c(int(1));
    let l = c(lambda.clone());
    let num = l.add(&z.sub(&one).sub(&l).mul(&w.sub(&one).sub(&l)));
    let den = z.sub(&l).pow(2).sub(&z).mul(&w.sub(&l).pow(2).sub(&w));
    rf(num, den)
}

/// Σ_{σ≤τ≤π} μ(τ,π) = [σ = π] for every comparable pair.
pub fn check_zeta_inversion(fam: PartitionFamily, chi: &ChiMap) {
    let elems = enumerate(fam, chi).unwrap();
    let k = elems.len();
    let leq: Vec<Vec<bool>> = elems.iter().map(|a| elems.iter().map(|b| a.leq(b)).collect()).collect();
    let mut mu: HashMap<(usize, usize), Rational> = HashMap::new();
    for t in 0..k {
        for p in 0..k {
            if leq[t][p] {
                mu.insert((t, p), mobius(fam, chi, &elems[t], &elems[p]).unwrap());
            }
        }
    }
    for s in 0..k {
        for p in 0..k {
            if !leq[s][p] {
                continue;
            }
            let sum: Rational = (0..k).filter(|&t| leq[s][t] && leq[t][p]).map(|t| mu[&(t, p)].clone()).sum();
            let want = if s == p { int(1) } else { int(0) };
            assert_eq!(sum, want, "{} on {chi}: {} .. {}", fam.name(), elems[s], elems[p]);
        }
    }
}
