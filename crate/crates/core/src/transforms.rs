//! η/M/E/H series of pair tables, the partial-η functional equation, the
//! reduced-η product theorems, compound Poisson tables and rational expansions.

use crate::cumulants::{affine_shift_cumulants, cumulants_to_moments, moments_to_cumulants, CumulantKind, Side};
use crate::error::{Error, Result};
use crate::model::{measure_moments, slots, AtomicMeasure2D, ExponentTable, TableKind, TwoFacedDistribution};
use crate::products::{biboolean_product, extract_pair, FamilySpec, WordExpr};
use crate::rational::Rational;
use crate::series::TruncatedSeries2;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

fn check_degree(t: &ExponentTable, degree: usize) -> Result<()> {
    if degree > t.degree() {
        Err(Error::DegreeOverflow { needed: degree, available: t.degree() })
    } else {
        Ok(())
    }
}

fn table_series(t: &ExponentTable, degree: usize) -> TruncatedSeries2 {
    TruncatedSeries2::from_terms(degree, t.entries().map(|(&(m, n), v)| (m, n, v.clone())))
}

/// η(z,w) = Σ B_{m,n} z^m w^n from a moment table.
pub fn eta_series(t: &ExponentTable, degree: usize) -> Result<TruncatedSeries2> {
    check_degree(t, degree)?;
    let b = moments_to_cumulants(&t.truncate(degree), CumulantKind::Biboolean)?;
    Ok(table_series(&b, degree))
}

/// M(z,w) = 1 + Σ M_{m,n} z^m w^n (the table is read as a state).
pub fn moment_series(t: &ExponentTable, degree: usize) -> Result<TruncatedSeries2> {
    check_degree(t, degree)?;
    if t.kind() != TableKind::Moments {
        return Err(Error::KindMismatch("expected moments".into()));
    }
    let mut s = table_series(t, degree);
    s.set(0, 0, Rational::one())?;
    Ok(s)
}

/// Residual of η = η_a + η_b + M/(M_a M_b) − 1, with the one-variable
/// transforms taken independently as η_a = 1 − 1/M_a.
pub fn verify_partial_eta(t: &ExponentTable, degree: usize) -> Result<TruncatedSeries2> {
    let eta = eta_series(t, degree)?;
    let m = moment_series(t, degree)?;
    let ma = TruncatedSeries2::univariate_z(degree, &m.z_row());
    let mb = TruncatedSeries2::univariate_w(degree, &m.w_row());
    let one = TruncatedSeries2::one(degree);
    let eta_a = one.sub(&ma.inverse()?)?;
    let eta_b = one.sub(&mb.inverse()?)?;
    let ratio = m.mul(&ma.mul(&mb)?.inverse()?)?;
    let rhs = eta_a.add(&eta_b)?.add(&ratio)?.sub(&one)?;
    eta.sub(&rhs)
}

/// E(u,v) = η(u,v): same coefficients, read in u = 1/z, v = 1/w.
pub fn self_energy_series(t: &ExponentTable, degree: usize) -> Result<TruncatedSeries2> {
    eta_series(t, degree)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MultAddTheorem {
    /// ((1+a₁)(1+a₂), b₁+b₂)
    T,
    /// (a₁+a₂, (1+b₂)(1+b₁))
    TMirror,
    /// ((1+a₁)(1+a₂), (1+b₂)(1+b₁))
    S,
    /// ((1+a₁)(1+a₂), (1+b₁)(1+b₂))
    S2,
}

impl MultAddTheorem {
    pub fn name(self) -> &'static str {
        match self {
            MultAddTheorem::T => "T",
            MultAddTheorem::TMirror => "T-mirror",
            MultAddTheorem::S => "S",
            MultAddTheorem::S2 => "S2",
        }
    }

    fn exprs(self) -> (&'static str, &'static str) {
        match self {
            MultAddTheorem::T => ("(1+a1)*(1+a2)", "b1+b2"),
            MultAddTheorem::TMirror => ("a1+a2", "(1+b2)*(1+b1)"),
            MultAddTheorem::S => ("(1+a1)*(1+a2)", "(1+b2)*(1+b1)"),
            MultAddTheorem::S2 => ("(1+a1)*(1+a2)", "(1+b1)*(1+b2)"),
        }
    }
}

/// Σ_k B_{k+1,0} z^k: the one-variable η of the left face divided by z.
fn eta_left_over_z(b: &ExponentTable, degree: usize) -> TruncatedSeries2 {
    let c: Vec<Rational> = (0..degree).map(|k| b.get(k + 1, 0)).collect();
    TruncatedSeries2::univariate_z(degree, &c)
}

fn eta_right_over_w(b: &ExponentTable, degree: usize) -> TruncatedSeries2 {
    let c: Vec<Rational> = (0..degree).map(|k| b.get(0, k + 1)).collect();
    TruncatedSeries2::univariate_w(degree, &c)
}

/// Residual (left side minus right side) of a reduced-η product theorem.
/// The left side is read off the bi-Boolean product of the two pairs at carrier
/// degree 2N+2; the right side uses unit-shifted cumulant tables of the components.
pub fn check_mult_add_theorems(
    mu1: &ExponentTable,
    mu2: &ExponentTable,
    which: MultAddTheorem,
    degree: usize,
) -> Result<TruncatedSeries2> {
    let carrier = 2 * degree + 2;
    check_degree(mu1, carrier)?;
    check_degree(mu2, carrier)?;
    let p1 = TwoFacedDistribution::from_table(&mu1.truncate(carrier), "a1", "b1")?;
    let p2 = TwoFacedDistribution::from_table(&mu2.truncate(carrier), "a2", "b2")?;
    let prod = biboolean_product(FamilySpec::new(vec![p1, p2])?);
    let (l, r) = which.exprs();
    let alphabet = crate::model::MomentSource::alphabet(&prod).clone();
    let pair = extract_pair(&prod, &WordExpr::parse(l, &alphabet)?, &WordExpr::parse(r, &alphabet)?, degree)?;
    let lhs = eta_series(&pair, degree)?.reduced();

    let b1 = moments_to_cumulants(&mu1.truncate(degree), CumulantKind::Biboolean)?;
    let b2 = moments_to_cumulants(&mu2.truncate(degree), CumulantKind::Biboolean)?;
    let shift = |b: &ExponentTable, sides: &[Side]| -> Result<ExponentTable> {
        let mut t = b.clone();
        for &s in sides {
            t = affine_shift_cumulants(&t, s)?;
        }
        Ok(t)
    };
    let reduced = |t: &ExponentTable| table_series(t, degree).reduced();
    let b1_l = shift(&b1, &[Side::Left])?;
    let rhs = match which {
        MultAddTheorem::T => {
            let b2_l = shift(&b2, &[Side::Left])?;
            reduced(&b1_l).add(&eta_left_over_z(&b1_l, degree).mul(&reduced(&b2_l))?)?
        }
        MultAddTheorem::TMirror => {
            let b1_r = shift(&b1, &[Side::Right])?;
            let b2_r = shift(&b2, &[Side::Right])?;
            reduced(&b2_r).add(&eta_right_over_w(&b2_r, degree).mul(&reduced(&b1_r))?)?
        }
        MultAddTheorem::S => {
            let b1_lr = shift(&b1, &[Side::Left, Side::Right])?;
            let b2_lr = shift(&b2, &[Side::Left, Side::Right])?;
            let first = eta_left_over_z(&b1_lr, degree).mul(&reduced(&b2_lr))?;
            let second = eta_right_over_w(&b2_lr, degree).mul(&reduced(&b1_lr))?;
            first.add(&second)?
        }
        MultAddTheorem::S2 => {
            let b1_lr = shift(&b1, &[Side::Left, Side::Right])?;
            let b2_lr = shift(&b2, &[Side::Left, Side::Right])?;
            let factor = eta_left_over_z(&b1_lr, degree).mul(&eta_right_over_w(&b1_lr, degree))?;
            reduced(&b1_lr).add(&factor.mul(&reduced(&b2_lr))?)?
        }
    };
    lhs.sub(&rhs)
}

/// Moment table whose cumulants of `kind` are λ·M_{m,n}(σ).
pub fn compound_poisson_table(
    lambda: &Rational,
    sigma: &AtomicMeasure2D,
    kind: CumulantKind,
    degree: usize,
) -> Result<ExponentTable> {
    if sigma.atoms().iter().all(|a| a.x.is_zero() && a.y.is_zero()) {
        return Err(Error::Invalid("the jump measure must not be concentrated at the origin".into()));
    }
    let moments = measure_moments(sigma, degree);
    let mut c = ExponentTable::new(kind.table_kind(), degree);
    for (m, n) in slots(degree) {
        c.set(m, n, lambda * moments.get(m, n))?;
    }
    cumulants_to_moments(&c)
}

/// H(z,w) = Σ γ_{m,n} z^m w^n.
pub fn bifermi_h_series(mu: &AtomicMeasure2D, degree: usize) -> Result<TruncatedSeries2> {
    let g = moments_to_cumulants(&measure_moments(mu, degree), CumulantKind::Bifermi)?;
    Ok(table_series(&g, degree))
}

/// H minus its marginal parts, minus η̃ of the zero-mean shift; zero when the decomposition holds.
pub fn h_decomposition_residual(mu: &AtomicMeasure2D, degree: usize) -> Result<TruncatedSeries2> {
    let h = bifermi_h_series(mu, degree)?.reduced();
    let eta = eta_series(&measure_moments(&mu.zero_mean_shift(), degree), degree)?.reduced();
    h.sub(&eta)
}

/// Polynomial in z, w with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly2 {
    terms: BTreeMap<(usize, usize), Rational>,
}

impl Poly2 {
    pub fn from_terms(terms: impl IntoIterator<Item = (usize, usize, Rational)>) -> Self {
        let mut p = Poly2::default();
        for (m, n, c) in terms {
            *p.terms.entry((m, n)).or_insert_with(Rational::zero) += c;
        }
        p.terms.retain(|_, c| !c.is_zero());
        p
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_terms([(0, 0, c)])
    }

    pub fn z() -> Self {
        Self::from_terms([(1, 0, Rational::one())])
    }

    pub fn w() -> Self {
        Self::from_terms([(0, 1, Rational::one())])
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::from_terms(self.iter().chain(o.iter()))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Rational::one()))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::from_terms(self.iter().map(|(m, n, c)| (m, n, c * k)))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Vec::new();
        for (m1, n1, a) in self.iter() {
            for (m2, n2, b) in o.iter() {
                out.push((m1 + m2, n1 + n2, &a * &b));
            }
        }
        Self::from_terms(out)
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::constant(Rational::one()), |acc, _| acc.mul(self))
    }

    fn iter(&self) -> impl Iterator<Item = (usize, usize, Rational)> + '_ {
        self.terms.iter().map(|(&(m, n), c)| (m, n, c.clone()))
    }

    pub fn degree_z(&self) -> usize {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn degree_w(&self) -> usize {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    /// p(1/u, 1/v)·u^dz·v^dw as a polynomial in (u, v).
    fn reversed(&self, dz: usize, dw: usize) -> Self {
        Self::from_terms(self.iter().map(|(m, n, c)| (dz - m, dw - n, c)))
    }

    fn to_series(&self, degree: usize) -> TruncatedSeries2 {
        TruncatedSeries2::from_terms(degree, self.iter())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction2 {
    pub numerator: Poly2,
    pub denominator: Poly2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Substitution {
    /// Expand in z, w directly.
    Identity,
    /// Expand f(1/u, 1/v) in u, v.
    Reciprocal,
}

/// Power series of a rational function to total degree N.
pub fn expand_rational(rf: &RationalFunction2, subst: Substitution, degree: usize) -> Result<TruncatedSeries2> {
    let (num, den) = match subst {
        Substitution::Identity => (rf.numerator.clone(), rf.denominator.clone()),
        Substitution::Reciprocal => {
            let dz = rf.numerator.degree_z().max(rf.denominator.degree_z());
            let dw = rf.numerator.degree_w().max(rf.denominator.degree_w());
            (rf.numerator.reversed(dz, dw), rf.denominator.reversed(dz, dw))
        }
    };
    num.to_series(degree).mul(&den.to_series(degree).inverse()?)
}
