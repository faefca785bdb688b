use crate::golden;
use crate::output::{self, r, Report};
use crate::{Command, ConvolveOp, Theorem, Transform};
use biboolean::convolutions::{
    additive_convolve_distributions, additive_convolve_tables, breta, breta_direct, breta_inverse,
    twisted_mult_convolve, twisted_star, ConvolutionKind,
};
use biboolean::cumulants::{
    cumulant_series, cumulants_to_moments, moments_from_cumulant_series, moments_to_cumulants, CumulantKind,
};
use biboolean::error::Error;
use biboolean::io::{parse_document, partition_json, Document};
use biboolean::model::{measure_moments, Alphabet, ExponentTable, MomentSource, TableKind, TwoFacedDistribution};
use biboolean::partitions::{enumerate, pi_omega_chi, ChiMap, OmegaMap, PartitionFamily};
use biboolean::positivity::{determinant, find_witness, inertia, infdiv_probe, moment_matrix};
use biboolean::random;
use biboolean::rational::int;
use biboolean::series::{NcSeries, TruncatedSeries2};
use biboolean::transforms::{
    bifermi_h_series, check_mult_add_theorems, eta_series, moment_series, self_energy_series, verify_partial_eta,
    MultAddTheorem,
};
use serde_json::{json, Value};
use std::io::Read;
use std::path::Path;

pub type CliResult<T> = Result<T, String>;

fn core<T>(r: biboolean::error::Result<T>) -> CliResult<T> {
    r.map_err(|e| e.to_string())
}

fn load(path: &Path) -> CliResult<Document> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| format!("cannot read stdin: {e}"))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?
    };
    parse_document(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Moment table of an atomic measure or table document, truncated to `degree` when given.
fn moments_of(doc: &Document, degree: Option<usize>) -> CliResult<ExponentTable> {
    let t = match doc {
        Document::Atomic { .. } => {
            let degree = degree.ok_or("an atomic measure needs --degree")?;
            return Ok(measure_moments(&core(doc.to_measure())?, degree));
        }
        Document::Table { .. } => {
            let t = core(doc.to_table())?;
            if t.kind() == TableKind::Moments {
                t
            } else {
                core(cumulants_to_moments(&t))?
            }
        }
        _ => return Err("expected an atomic measure or a table".into()),
    };
    match degree {
        Some(d) if d > t.degree() => Err(Error::DegreeOverflow { needed: d, available: t.degree() }.to_string()),
        Some(d) => Ok(t.truncate(d)),
        None => Ok(t),
    }
}

fn distribution_of(doc: &Document, degree: usize) -> CliResult<TwoFacedDistribution> {
    match doc {
        Document::Atomic { .. } => core(TwoFacedDistribution::from_table(&moments_of(doc, Some(degree))?, "a", "b")),
        Document::Table { .. } => core(TwoFacedDistribution::from_table(&moments_of(doc, None)?, "a", "b")),
        _ => core(doc.to_distribution()),
    }
}

pub fn run(cmd: &Command) -> CliResult<Report> {
    match cmd {
        Command::Cumulants { kind, degree, input } => cumulants(kind, *degree, &load(input)?),
        Command::Convolve { op, degree, a, b } => convolve(*op, *degree, &load(a)?, &load(b)?),
        Command::Partitions { family, chi, omega } => partitions(family, chi, omega.as_deref()),
        Command::Series { transform, degree, input } => series(*transform, *degree, &load(input)?),
        Command::Verify { theorem, trials, seed } => verify(*theorem, *trials, *seed),
        Command::Psd { order, input } => psd(*order, &load(input)?),
        Command::Infdiv { n, order, input } => infdiv(*n, *order, &load(input)?),
        Command::Golden { case } => Ok(golden::run(*case)),
    }
}

fn cumulants(kind: &str, degree: Option<usize>, doc: &Document) -> CliResult<Report> {
    let target = core(TableKind::parse(kind))?;
    let cumulant_kind = CumulantKind::from_table_kind(target);
    match doc {
        Document::Distribution { .. } => {
            let d = core(doc.to_distribution())?;
            let d = match degree {
                Some(n) if n > d.degree() => {
                    return Err(Error::DegreeOverflow { needed: n, available: d.degree() }.to_string())
                }
                Some(n) => core(doc.to_ncseries())?.truncate(n).to_distribution(),
                None => d,
            };
            let k = match cumulant_kind {
                Some(k @ (CumulantKind::Bifree | CumulantKind::Biboolean)) => k,
                _ => return Err("word cumulants of a distribution need --kind bifree or biboolean".into()),
            };
            Ok(Report::document(&Document::from_ncseries(&cumulant_series(&d, k))))
        }
        // A series is read as cumulants of the given kind and summed back to moments.
        Document::Ncseries { .. } => {
            let s = core(doc.to_ncseries())?;
            let s = match degree {
                Some(n) => s.truncate(n),
                None => s,
            };
            let k = match cumulant_kind {
                Some(k @ (CumulantKind::Bifree | CumulantKind::Biboolean)) => k,
                _ => return Err("a cumulant series needs --kind bifree or biboolean".into()),
            };
            Ok(Report::document(&Document::from_distribution(&moments_from_cumulant_series(&s, k))))
        }
        _ => {
            let moments = moments_of(doc, degree)?;
            let t = match cumulant_kind {
                None => moments,
                Some(k) => core(moments_to_cumulants(&moments, k))?,
            };
            Ok(Report::document(&Document::from_table(&t)))
        }
    }
}

fn convolve(op: ConvolveOp, degree: usize, a: &Document, b: &Document) -> CliResult<Report> {
    let kind = match op {
        ConvolveOp::Biboolean => ConvolutionKind::Biboolean,
        ConvolveOp::Bifree => ConvolutionKind::Bifree,
        ConvolveOp::Bifermi => ConvolutionKind::Bifermi,
        ConvolveOp::TwistedMult => {
            let (mu, nu) = (distribution_of(a, degree)?, distribution_of(b, degree)?);
            return Ok(Report::document(&Document::from_distribution(&core(twisted_mult_convolve(&mu, &nu))?)));
        }
    };
    if matches!(a, Document::Distribution { .. }) || matches!(b, Document::Distribution { .. }) {
        let (mu, nu) = (distribution_of(a, degree)?, distribution_of(b, degree)?);
        let out = core(additive_convolve_distributions(&mu, &nu, kind))?;
        return Ok(Report::document(&Document::from_distribution(&out)));
    }
    let ta = moments_of(a, matches!(a, Document::Atomic { .. }).then_some(degree))?;
    let tb = moments_of(b, matches!(b, Document::Atomic { .. }).then_some(degree))?;
    let out = core(additive_convolve_tables(&ta, &tb, kind))?;
    Ok(Report::document(&Document::from_table(&out)))
}

fn partitions(family: &str, chi: &str, omega: Option<&str>) -> CliResult<Report> {
    let fam = core(PartitionFamily::parse(family))?;
    let chi = core(ChiMap::parse(chi))?;
    let list = match omega {
        Some(o) => {
            let names: Vec<String> = o.chars().map(String::from).collect();
            if names.len() != chi.len() {
                return Err(Error::LengthMismatch(names.len(), chi.len()).to_string());
            }
            vec![core(pi_omega_chi(&chi, &OmegaMap::from_names(&names)))?]
        }
        None => core(enumerate(fam, &chi))?,
    };
    let parts: Vec<Value> = list.iter().map(partition_json).collect();
    let text: String = parts.iter().map(|p| format!("{p}\n")).collect();
    let json = json!({
        "family": if omega.is_some() { "coloring" } else { fam.name() },
        "chi": chi.to_string(),
        "count": parts.len(),
        "partitions": parts,
    });
    Ok(Report { json, text, ok: true })
}

fn series(transform: Transform, degree: usize, doc: &Document) -> CliResult<Report> {
    if degree == 0 {
        return Err("degree must be at least 1".into());
    }
    let (s, vars) = match transform {
        Transform::Eta => (core(eta_series(&moments_of(doc, Some(degree))?, degree))?, ("z", "w")),
        Transform::SelfEnergy => (core(self_energy_series(&moments_of(doc, Some(degree))?, degree))?, ("u", "v")),
        Transform::Moments => (core(moment_series(&moments_of(doc, Some(degree))?, degree))?, ("z", "w")),
        Transform::H => {
            let mu = doc.to_measure().map_err(|_| "the H transform needs an atomic measure".to_string())?;
            (core(bifermi_h_series(&mu, degree))?, ("z", "w"))
        }
    };
    Ok(Report::document(&Document::from_series(&s, vars.0, vars.1)))
}

fn series_residual(s: &TruncatedSeries2) -> Value {
    s.terms()
        .into_iter()
        .map(|(m, n, c)| (format!("{m},{n}"), Value::String(r(&c))))
        .collect::<serde_json::Map<_, _>>()
        .into()
}

fn nc_residual(a: &NcSeries, b: &NcSeries) -> CliResult<Value> {
    let diff = core(a.add(&b.scale(&int(-1))))?;
    let map: serde_json::Map<String, Value> =
        diff.entries().map(|(w, c)| (diff.alphabet().format_word(w), Value::String(r(c)))).collect();
    Ok(map.into())
}

fn small_alphabet(trial: usize) -> Alphabet {
    if trial % 2 == 0 {
        Alphabet::pair("a", "b")
    } else {
        Alphabet::new(["a1", "a2"], ["b"]).expect("distinct letters")
    }
}

fn random_pair_table(rng: &mut random::TestRng, atoms: usize, degree: usize) -> ExponentTable {
    measure_moments(&random::probability_measure(rng, atoms), degree)
}

fn verify(theorem: Theorem, trials: usize, seed: u64) -> CliResult<Report> {
    let mut results = Vec::new();
    let mut failures = 0;
    for trial in 0..trials {
        let trial_seed = seed.wrapping_add(trial as u64);
        let mut rng = random::rng(trial_seed);
        let residual = match theorem {
            Theorem::PartialEta => {
                let t = measure_moments(&random::probability_measure(&mut rng, 1 + trial % 4), 6);
                series_residual(&core(verify_partial_eta(&t, 6))?)
            }
            Theorem::T | Theorem::TMirror | Theorem::S | Theorem::S2 => {
                let which = match theorem {
                    Theorem::T => MultAddTheorem::T,
                    Theorem::TMirror => MultAddTheorem::TMirror,
                    Theorem::S => MultAddTheorem::S,
                    _ => MultAddTheorem::S2,
                };
                let a = random_pair_table(&mut rng, 1 + trial % 2, 8);
                let b = random_pair_table(&mut rng, 1 + trial / 2 % 2, 8);
                series_residual(&core(check_mult_add_theorems(&a, &b, which, 3))?)
            }
            Theorem::Breta => {
                let f = random::ncseries(&mut rng, &small_alphabet(trial), 5);
                let g = breta_direct(&f);
                let mut both = nc_residual(&breta(&f), &g)?;
                let inverse = nc_residual(&breta_inverse(&g), &f)?;
                both.as_object_mut().expect("object").extend(
                    inverse.as_object().expect("object").iter().map(|(k, v)| (format!("inverse: {k}"), v.clone())),
                );
                both
            }
            Theorem::StarHomomorphism => {
                let alphabet = small_alphabet(trial);
                let f = random::ncseries(&mut rng, &alphabet, 4);
                let g = random::ncseries(&mut rng, &alphabet, 4);
                let lhs = breta(&core(twisted_star(&f, &g))?);
                let rhs = core(twisted_star(&breta(&f), &breta(&g)))?;
                nc_residual(&lhs, &rhs)?
            }
        };
        let zero = residual.as_object().is_some_and(|m| m.is_empty());
        if !zero {
            failures += 1;
        }
        results.push(json!({ "trial": trial, "seed": trial_seed, "zero": zero, "residual": residual }));
    }
    let name = match theorem {
        Theorem::PartialEta => "partial-eta",
        Theorem::T => "T",
        Theorem::TMirror => "T-mirror",
        Theorem::S => "S",
        Theorem::S2 => "S2",
        Theorem::Breta => "breta",
        Theorem::StarHomomorphism => "star-homomorphism",
    };
    let mut text = String::new();
    for res in &results {
        let status = if res["zero"].as_bool() == Some(true) { "zero" } else { "NONZERO" };
        text.push_str(&format!("trial {} (seed {}): residual {status}\n", res["trial"], res["seed"]));
    }
    text.push_str(&format!("{name}: {} of {trials} trials with zero residual\n", trials - failures));
    let json = json!({ "theorem": name, "seed": seed, "trials": trials, "failures": failures, "results": results });
    Ok(Report { json, text, ok: failures == 0 })
}

fn psd(order: usize, doc: &Document) -> CliResult<Report> {
    let degree = (2 * order).max(1);
    let t = moments_of(doc, if matches!(doc, Document::Atomic { .. }) { Some(degree) } else { None })?;
    let m = core(moment_matrix(&t, order))?;
    let det = core(determinant(&m.entries))?;
    let inert = core(inertia(&m.entries))?;
    let witness = core(find_witness(&m))?;
    let json = json!({
        "order": order,
        "matrix": output::matrix_json(&m),
        "det": r(&det),
        "inertia": output::inertia_json(&inert),
        "psd": inert.is_psd(),
        "witness": output::witness_json(&witness),
    });
    let text = format!(
        "X_{order}\n{}det = {}\ninertia: +{} 0:{} -{}\npsd: {}\n{}\n",
        output::matrix_text(&m),
        r(&det),
        inert.plus,
        inert.zero,
        inert.minus,
        inert.is_psd(),
        output::witness_text(&witness)
    );
    Ok(Report { json, text, ok: inert.is_psd() })
}

fn infdiv(n: usize, order: usize, doc: &Document) -> CliResult<Report> {
    let degree = (4 * order).max(1);
    let t = moments_of(doc, if matches!(doc, Document::Atomic { .. }) { Some(degree) } else { None })?;
    let rep = core(infdiv_probe(&t, n, order))?;
    let json = json!({
        "divisor": rep.divisor,
        "order": rep.order,
        "moments": serde_json::to_value(Document::from_table(&rep.moments)).expect("plain json"),
        "matrix": output::matrix_json(&rep.matrix),
        "inertia": output::inertia_json(&rep.inertia),
        "psd": rep.psd,
        "witness": output::witness_json(&rep.witness),
    });
    let text = format!(
        "n = {n}, order {order}\n{}inertia: +{} 0:{} -{}\npsd: {}\n{}\n",
        output::matrix_text(&rep.matrix),
        rep.inertia.plus,
        rep.inertia.zero,
        rep.inertia.minus,
        rep.psd,
        output::witness_text(&rep.witness)
    );
    Ok(Report { json, text, ok: rep.psd })
}
