//! Additive convolutions, the twisted boxed convolution of series, the twisted
//! multiplicative bi-free convolution, and the bi-free/bi-Boolean bijections.

use crate::cumulants::{
    cumulant_series, cumulants_to_moments, moments_from_cumulant_series, moments_to_cumulants, CumulantKind,
};
use crate::error::{Error, Result};
use crate::model::{
    measure_moments, slots, AtomicMeasure2D, ExponentTable, Letter, MomentSource, TableKind, TwoFacedDistribution,
};
use crate::partitions::{family_cached, kreweras::kreweras_bnc, ChiMap, Partition, PartitionFamily};
use crate::rational::{binomial, pow, Rational};
use crate::series::NcSeries;
use num_traits::{One, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvolutionKind {
    /// ⊎⊎
    Biboolean,
    /// ⊞⊞
    Bifree,
    /// ••
    Bifermi,
}

impl ConvolutionKind {
    pub fn cumulant_kind(self) -> CumulantKind {
        match self {
            ConvolutionKind::Biboolean => CumulantKind::Biboolean,
            ConvolutionKind::Bifree => CumulantKind::Bifree,
            ConvolutionKind::Bifermi => CumulantKind::Bifermi,
        }
    }
}

/// Converts both tables to the kind's cumulants, adds, converts back.
pub fn additive_convolve_tables(a: &ExponentTable, b: &ExponentTable, kind: ConvolutionKind) -> Result<ExponentTable> {
    if a.degree() != b.degree() {
        return Err(Error::DegreeMismatch(a.degree(), b.degree()));
    }
    let k = kind.cumulant_kind();
    let c = moments_to_cumulants(a, k)?.add(&moments_to_cumulants(b, k)?)?;
    cumulants_to_moments(&c)
}

/// Word-level ⊎⊎ or ⊞⊞. The bi-Fermi convolution is defined only for planar measures.
pub fn additive_convolve_distributions(
    a: &dyn MomentSource,
    b: &dyn MomentSource,
    kind: ConvolutionKind,
) -> Result<TwoFacedDistribution> {
    if kind == ConvolutionKind::Bifermi {
        return Err(Error::KindMismatch("bi-Fermi convolution needs planar measures or tables".into()));
    }
    check_shape(a, b)?;
    let k = kind.cumulant_kind();
    let c = cumulant_series(a, k).add(&cumulant_series(b, k))?;
    Ok(moments_from_cumulant_series(&c, k))
}

fn check_shape(a: &dyn MomentSource, b: &dyn MomentSource) -> Result<()> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    if a.degree() != b.degree() {
        return Err(Error::DegreeMismatch(a.degree(), b.degree()));
    }
    Ok(())
}

/// Moment table of the measure translated by (dx, dy), computed from moments alone.
pub fn translate_moments(t: &ExponentTable, dx: &Rational, dy: &Rational) -> Result<ExponentTable> {
    if t.kind() != TableKind::Moments {
        return Err(Error::KindMismatch("expected moments".into()));
    }
    let mut out = t.clone();
    for (m, n) in slots(t.degree()) {
        let mut v = Rational::zero();
        for p in 0..=m {
            for q in 0..=n {
                let base = t.get(p, q);
                if base.is_zero() {
                    continue;
                }
                v += binomial(m, p) * binomial(n, q) * pow(dx, m - p) * pow(dy, n - q) * base;
            }
        }
        out.set(m, n, v)?;
    }
    Ok(out)
}

/// μ •• ν: shift both to zero mean, ⊎⊎, shift back by the sum of the means.
pub fn bifermi_convolve_via_shift(mu: &AtomicMeasure2D, nu: &AtomicMeasure2D, degree: usize) -> Result<ExponentTable> {
    let (mx1, my1) = mu.means();
    let (mx2, my2) = nu.means();
    let a = measure_moments(&mu.zero_mean_shift(), degree);
    let b = measure_moments(&nu.zero_mean_shift(), degree);
    let centered = additive_convolve_tables(&a, &b, ConvolutionKind::Biboolean)?;
    translate_moments(&centered, &(mx1 + mx2), &(my1 + my2))
}

fn series_product(f: &NcSeries, word: &[Letter], pi: &Partition) -> Rational {
    let mut prod = Rational::one();
    for b in pi.blocks() {
        prod *= f.coeff_of_positions(word, b);
        if prod.is_zero() {
            break;
        }
    }
    prod
}

/// Cf_w(f ⋆̃ g) = Σ_{π∈BNC(χ_w)} f_π(w) · g_{K(π)}(w).
pub fn twisted_star(f: &NcSeries, g: &NcSeries) -> Result<NcSeries> {
    check_shape(f, g)?;
    let mut out = NcSeries::new(f.alphabet().clone(), f.degree());
    for w in f.alphabet().words_up_to(f.degree()) {
        let chi = f.alphabet().chi(&w);
        let mut acc = Rational::zero();
        for pi in family_cached(PartitionFamily::Bnc, &chi).iter() {
            let a = series_product(f, &w, pi);
            if a.is_zero() {
                continue;
            }
            acc += a * series_product(g, &w, &kreweras_bnc(&chi, pi));
        }
        out.set(w, acc)?;
    }
    Ok(out)
}

/// The distribution whose R-series is R_μ ⋆̃ R_ν.
pub fn twisted_mult_convolve(mu: &dyn MomentSource, nu: &dyn MomentSource) -> Result<TwoFacedDistribution> {
    check_shape(mu, nu)?;
    let r = twisted_star(&cumulant_series(mu, CumulantKind::Bifree), &cumulant_series(nu, CumulantKind::Bifree))?;
    Ok(moments_from_cumulant_series(&r, CumulantKind::Bifree))
}

/// η ∘ R⁻¹ by composing the two conversions.
pub fn breta(f: &NcSeries) -> NcSeries {
    let dist = moments_from_cumulant_series(f, CumulantKind::Bifree);
    cumulant_series(&dist, CumulantKind::Biboolean)
}

/// π ≪ 1_χ: the ≺_χ-first and ≺_χ-last positions share a block.
fn below_full(chi: &ChiMap, pi: &Partition) -> bool {
    let order = chi.order();
    let lab = pi.labels();
    lab[order[0]] == lab[order[order.len() - 1]]
}

/// Direct formula: Cf_w(g) = Σ_{π ≪ 1} f_π(w).
pub fn breta_direct(f: &NcSeries) -> NcSeries {
    sum_below_full(f, false)
}

/// Inverse of [`breta_direct`]: Cf_w(f) = Σ_{π ≪ 1} (−1)^{|π|−1} g_π(w).
pub fn breta_inverse(g: &NcSeries) -> NcSeries {
    sum_below_full(g, true)
}

fn sum_below_full(f: &NcSeries, signed: bool) -> NcSeries {
    let mut out = NcSeries::new(f.alphabet().clone(), f.degree());
    for w in f.alphabet().words_up_to(f.degree()) {
        let chi = f.alphabet().chi(&w);
        let mut acc = Rational::zero();
        for pi in family_cached(PartitionFamily::Bnc, &chi).iter().filter(|p| below_full(&chi, p)) {
            let v = series_product(f, &w, pi);
            if signed && pi.num_blocks() % 2 == 0 {
                acc -= v;
            } else {
                acc += v;
            }
        }
        out.set(w, acc).expect("word within degree");
    }
    out
}

/// b𝔹: the distribution whose bi-free cumulants are the bi-Boolean cumulants of `dist`.
pub fn bb(dist: &dyn MomentSource) -> TwoFacedDistribution {
    moments_from_cumulant_series(&cumulant_series(dist, CumulantKind::Biboolean), CumulantKind::Bifree)
}

/// b𝔹 on a pair table.
pub fn bb_table(t: &ExponentTable) -> Result<ExponentTable> {
    let b = moments_to_cumulants(t, CumulantKind::Biboolean)?;
    cumulants_to_moments(&b.with_kind(TableKind::BifreeCum))
}
