//! Pinned reference values, recomputed from scratch and compared exactly.

use crate::output::{self, r, Report};
use biboolean::convolutions::{additive_convolve_tables, ConvolutionKind};
use biboolean::cumulants::{cumulants_to_moments, moments_to_cumulants, CumulantKind};
use biboolean::model::{measure_moments, AtomicMeasure2D, ExponentTable, TableKind};
use biboolean::positivity::{determinant, inertia, infdiv_probe, moment_matrix};
use biboolean::rational::{frac, int, Rational};
use biboolean::transforms::{
    compound_poisson_table, expand_rational, moment_series, verify_partial_eta, Poly2, RationalFunction2, Substitution,
};
use clap::ValueEnum;
use serde_json::{json, Value};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Case {
    /// Moment matrix of the two-point measure convolved with itself.
    SelfConvolution,
    /// Compound Poisson table with a signed jump measure.
    SignedJump,
    /// Cumulants and additive roots of the two-point measure.
    TwoPoint,
    /// Bi-Boolean compound Poisson moments against their closed form.
    PoissonBiboolean,
    /// Bi-Fermi compound Poisson moments against their closed form.
    PoissonBifermi,
    /// Bi-Boolean Gaussians against their closed form.
    Gaussian,
}

struct Checks {
    rows: Vec<Value>,
    text: String,
    ok: bool,
}

impl Checks {
    fn new() -> Self {
        Checks { rows: Vec::new(), text: String::new(), ok: true }
    }

    fn value(&mut self, name: &str, got: &Rational, want: &Rational) {
        let ok = got == want;
        self.ok &= ok;
        self.rows.push(json!({ "check": name, "value": r(got), "expected": r(want), "ok": ok }));
        let mark = if ok { "" } else { "   MISMATCH, expected " };
        let want = if ok { String::new() } else { r(want) };
        self.text.push_str(&format!("{name} = {}{mark}{want}\n", r(got)));
    }

    fn flag(&mut self, name: &str, ok: bool) {
        self.ok &= ok;
        self.rows.push(json!({ "check": name, "ok": ok }));
        self.text.push_str(&format!("{name}: {}\n", if ok { "ok" } else { "FAILED" }));
    }

    fn note(&mut self, s: &str) {
        self.text.push_str(s);
    }

    fn finish(self, case: &str) -> Report {
        let mut text = self.text;
        text.push_str(if self.ok { "all checks match\n" } else { "some checks FAILED\n" });
        Report { json: json!({ "case": case, "ok": self.ok, "checks": self.rows }), text, ok: self.ok }
    }
}

pub fn run(case: Case) -> Report {
    match case {
        Case::SelfConvolution => self_convolution(),
        Case::SignedJump => signed_jump(),
        Case::TwoPoint => two_point(),
        Case::PoissonBiboolean => poisson(CumulantKind::Biboolean),
        Case::PoissonBifermi => poisson(CumulantKind::Bifermi),
        Case::Gaussian => gaussian(),
    }
}

/// ½δ_{(1,0)} + ½δ_{(0,1)}.
fn two_point_measure() -> AtomicMeasure2D {
    AtomicMeasure2D::from_triples(&[(int(1), int(0), frac(1, 2)), (int(0), int(1), frac(1, 2))])
        .expect("distinct points")
}

fn self_convolution() -> Report {
    let mut c = Checks::new();
    let t = measure_moments(&two_point_measure(), 4);
    let s = additive_convolve_tables(&t, &t, ConvolutionKind::Biboolean).expect("same degree");
    let x = moment_matrix(&s, 1).expect("degree 4 covers order 1");
    let h = frac;
    let want = [
        [int(1), int(1), int(1), h(1, 2)],
        [int(1), h(3, 2), h(1, 2), h(3, 4)],
        [int(1), h(1, 2), h(3, 2), h(3, 4)],
        [h(1, 2), h(3, 4), h(3, 4), h(9, 8)],
    ];
    c.note(&format!("X_1\n{}", output::matrix_text(&x)));
    c.flag("matrix entries", x.entries.iter().zip(&want).all(|(a, b)| a[..] == b[..]));
    c.value("det", &determinant(&x.entries).expect("square"), &frac(-1, 8));
    c.flag("not positive semidefinite", !inertia(&x.entries).expect("symmetric").is_psd());
    c.finish("self-convolution")
}

fn signed_jump() -> Report {
    let mut c = Checks::new();
    let jumps = AtomicMeasure2D::from_triples(&[
        (int(1), int(1), int(3)),
        (int(-1), int(1), int(3)),
        (int(1), int(-1), int(3)),
    ])
    .expect("distinct points");
    let t = compound_poisson_table(&int(1), &jumps, CumulantKind::Biboolean, 4).expect("valid rate");
    let zwm = moment_series(&t, 4).expect("degree 4").shift(1, 1, 6);
    let want =
        [(1, 1, 1), (2, 1, 3), (1, 2, 3), (3, 1, 18), (2, 2, 6), (1, 3, 18), (3, 2, 48), (2, 3, 48), (3, 3, 324)];
    for (m, n, v) in want {
        c.value(&format!("[z^{m} w^{n}] zw·M"), &zwm.get(m, n), &int(v));
    }
    let x = moment_matrix(&t, 1).expect("degree 4 covers order 1");
    c.note(&format!("X_1\n{}", output::matrix_text(&x)));
    c.value("det", &determinant(&x.entries).expect("square"), &int(-864));
    c.finish("signed-jump")
}

fn two_point() -> Report {
    let mut c = Checks::new();
    let t = measure_moments(&two_point_measure(), 4);
    let b = moments_to_cumulants(&t, CumulantKind::Biboolean).expect("moment table");
    let want = [
        ((2, 0), frac(1, 4)),
        ((0, 2), frac(1, 4)),
        ((1, 1), frac(-1, 4)),
        ((2, 1), frac(-1, 8)),
        ((1, 2), frac(-1, 8)),
        ((2, 2), frac(-1, 16)),
        ((1, 0), frac(1, 2)),
    ];
    for ((m, n), v) in want {
        c.value(&format!("B_{{{m},{n}}}"), &b.get(m, n), &v);
    }
    for n in 1..=5i64 {
        let rep = infdiv_probe(&t, n as usize, 1).expect("degree 4 covers order 1");
        let nn = int(n);
        let want = -frac(1, 16) / &nn - frac(1, 16) / (&nn * &nn)
            + frac(1, 16) / (&nn * &nn * &nn)
            + frac(1, 16) / (&nn * &nn * &nn * &nn);
        c.value(&format!("M_{{2,2}} at n = {n}"), &rep.moments.get(2, 2), &want);
    }
    c.finish("two-point")
}

fn constant(v: Rational) -> Poly2 {
    Poly2::constant(v)
}

fn rational_function(numerator: Poly2, denominator: Poly2) -> RationalFunction2 {
    RationalFunction2 { numerator, denominator }
}

fn closed_form_poisson(kind: CumulantKind, lambda: &Rational) -> RationalFunction2 {
    let (z, w) = (Poly2::z(), Poly2::w());
    let one = constant(int(1));
    let l = constant(lambda.clone());
    match kind {
        CumulantKind::Bifermi => {
            let num = l.add(&z.sub(&one).sub(&l).mul(&w.sub(&one).sub(&l)));
            let den = z.sub(&l).pow(2).sub(&z).mul(&w.sub(&l).pow(2).sub(&w));
            rational_function(num, den)
        }
        _ => {
            let num = l.add(&z.sub(&one).mul(&w.sub(&one)));
            let den = z.mul(&w).mul(&z.sub(&one).sub(&l)).mul(&w.sub(&one).sub(&l));
            rational_function(num, den)
        }
    }
}

/// uv·M(u, v) against the expansion of G(1/u, 1/v).
fn matches_closed_form(t: &ExponentTable, g: &RationalFunction2, degree: usize) -> bool {
    let lhs = moment_series(t, degree).expect("table degree").shift(1, 1, degree + 2);
    expand_rational(g, Substitution::Reciprocal, degree + 2).is_ok_and(|rhs| rhs == lhs)
}

fn poisson(kind: CumulantKind) -> Report {
    let mut c = Checks::new();
    let sigma = AtomicMeasure2D::dirac(int(1), int(1));
    for lambda in [int(1), int(2), frac(1, 2)] {
        let t = compound_poisson_table(&lambda, &sigma, kind, 6).expect("valid rate");
        c.flag(
            &format!("rate {}: moments match closed form to degree 6", r(&lambda)),
            matches_closed_form(&t, &closed_form_poisson(kind, &lambda), 6),
        );
    }
    c.finish(if kind == CumulantKind::Bifermi { "poisson-bifermi" } else { "poisson-biboolean" })
}

fn gaussian() -> Report {
    let mut c = Checks::new();
    let bernoulli = {
        let b = [(int(-1), frac(1, 2)), (int(1), frac(1, 2))];
        measure_moments(&AtomicMeasure2D::product(&b, &b).expect("distinct points"), 8)
    };
    for cov in [int(0), int(1), frac(-1, 2)] {
        let mut b = ExponentTable::new(TableKind::BibooleanCum, 8);
        for (m, n, v) in [(2, 0, int(1)), (0, 2, int(1)), (1, 1, cov.clone())] {
            b.set(m, n, v).expect("slot within degree");
        }
        let t = cumulants_to_moments(&b).expect("cumulant table");
        let label = format!("covariance {}", r(&cov));
        c.flag(
            &format!("{label}: functional equation residual is zero"),
            verify_partial_eta(&t, 8).is_ok_and(|s| s.is_zero()),
        );
        let (z, w) = (Poly2::z(), Poly2::w());
        let one = constant(int(1));
        let g = rational_function(constant(cov.clone()).add(&z.mul(&w)), z.pow(2).sub(&one).mul(&w.pow(2).sub(&one)));
        c.flag(&format!("{label}: moments match closed form to degree 8"), matches_closed_form(&t, &g, 8));
        if cov == int(0) {
            c.flag("covariance 0: equals the product of symmetric Bernoulli laws", t == bernoulli);
        }
    }
    c.finish("gaussian")
}
