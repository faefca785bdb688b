//! JSON documents: atomic measures, exponent tables, series, distributions,
//! matrices and partitions. Rationals are `"p/q"` strings.

use crate::error::{Error, Result};
use crate::model::{
    Alphabet, Atom, AtomicMeasure2D, ExponentTable, MomentMatrix, MomentSource, TableKind, TwoFacedDistribution,
};
use crate::partitions::Partition;
use crate::rational::{self, Rational};
use crate::series::{NcSeries, TruncatedSeries2};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct AtomJson {
    pub x: String,
    pub y: String,
    pub w: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct AlphabetJson {
    pub left: Vec<String>,
    pub right: Vec<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Document {
    Atomic {
        atoms: Vec<AtomJson>,
    },
    Table {
        kind: String,
        degree: usize,
        entries: BTreeMap<String, String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mass: Option<String>,
    },
    Ncseries {
        alphabet: AlphabetJson,
        degree: usize,
        coeffs: BTreeMap<String, String>,
    },
    Distribution {
        alphabet: AlphabetJson,
        degree: usize,
        moments: BTreeMap<String, String>,
    },
    Series {
        degree: usize,
        variables: [String; 2],
        coeffs: BTreeMap<String, String>,
    },
}

/// Parses a document, reporting line and column on malformed JSON.
pub fn parse_document(text: &str) -> Result<Document> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_json(doc: &Document) -> String {
    serde_json::to_string_pretty(doc).expect("documents serialize")
}

fn parse_key(k: &str) -> Result<(usize, usize)> {
    let bad = || Error::Parse(format!("bad table key `{k}`, expected \"m,n\""));
    let (m, n) = k.split_once(',').ok_or_else(bad)?;
    Ok((m.trim().parse().map_err(|_| bad())?, n.trim().parse().map_err(|_| bad())?))
}

impl Document {
    pub fn from_measure(mu: &AtomicMeasure2D) -> Self {
        Document::Atomic {
            atoms: mu
                .atoms()
                .iter()
                .map(|a| AtomJson {
                    x: rational::format(&a.x),
                    y: rational::format(&a.y),
                    w: rational::format(&a.weight),
                })
                .collect(),
        }
    }

    pub fn from_table(t: &ExponentTable) -> Self {
        let mass =
            (t.kind() == TableKind::Moments && !num_traits::One::is_one(t.mass())).then(|| rational::format(t.mass()));
        Document::Table {
            kind: t.kind().as_str().to_string(),
            degree: t.degree(),
            entries: t.entries().map(|(&(m, n), v)| (format!("{m},{n}"), rational::format(v))).collect(),
            mass,
        }
    }

    pub fn from_ncseries(s: &NcSeries) -> Self {
        Document::Ncseries {
            alphabet: alphabet_json(s.alphabet()),
            degree: s.degree(),
            coeffs: s.entries().map(|(w, c)| (s.alphabet().format_word(w), rational::format(c))).collect(),
        }
    }

    pub fn from_distribution(d: &TwoFacedDistribution) -> Self {
        Document::Distribution {
            alphabet: alphabet_json(d.alphabet()),
            degree: d.degree(),
            moments: d.entries().map(|(w, c)| (d.alphabet().format_word(w), rational::format(c))).collect(),
        }
    }

    pub fn from_series(s: &TruncatedSeries2, z: &str, w: &str) -> Self {
        Document::Series {
            degree: s.degree(),
            variables: [z.to_string(), w.to_string()],
            coeffs: s.terms().into_iter().map(|(m, n, c)| (format!("{m},{n}"), rational::format(&c))).collect(),
        }
    }

    pub fn to_measure(&self) -> Result<AtomicMeasure2D> {
        match self {
            Document::Atomic { atoms } => AtomicMeasure2D::new(
                atoms
                    .iter()
                    .map(|a| {
                        Ok(Atom {
                            x: rational::parse(&a.x)?,
                            y: rational::parse(&a.y)?,
                            weight: rational::parse(&a.w)?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
            _ => Err(Error::Invalid("expected an atomic measure".into())),
        }
    }

    pub fn to_table(&self) -> Result<ExponentTable> {
        match self {
            Document::Table { kind, degree, entries, mass } => {
                if *degree == 0 {
                    return Err(Error::Invalid("degree must be at least 1".into()));
                }
                let mut t = ExponentTable::new(TableKind::parse(kind)?, *degree);
                for (k, v) in entries {
                    let (m, n) = parse_key(k)?;
                    t.set(m, n, rational::parse(v)?)?;
                }
                if let Some(mass) = mass {
                    t.set_mass(rational::parse(mass)?)?;
                }
                Ok(t)
            }
            _ => Err(Error::Invalid("expected a table".into())),
        }
    }

    pub fn to_ncseries(&self) -> Result<NcSeries> {
        match self {
            Document::Ncseries { alphabet, degree, coeffs }
            | Document::Distribution { alphabet, degree, moments: coeffs } => {
                let a = Alphabet::new(alphabet.left.clone(), alphabet.right.clone())?;
                let mut s = NcSeries::new(a.clone(), *degree);
                for (w, c) in coeffs {
                    s.set(a.parse_word(w)?, rational::parse(c)?)?;
                }
                Ok(s)
            }
            _ => Err(Error::Invalid("expected a series or distribution".into())),
        }
    }

    /// Reads a distribution document; a table of moments is read as a commuting pair (a, b).
    pub fn to_distribution(&self) -> Result<TwoFacedDistribution> {
        match self {
            Document::Distribution { alphabet, degree, moments } => {
                let a = Alphabet::new(alphabet.left.clone(), alphabet.right.clone())?;
                let mut d = TwoFacedDistribution::new(a.clone(), *degree);
                for (w, c) in moments {
                    d.set(a.parse_word(w)?, rational::parse(c)?)?;
                }
                Ok(d)
            }
            Document::Table { .. } => TwoFacedDistribution::from_table(&self.to_table()?, "a", "b"),
            _ => Err(Error::Invalid("expected a distribution".into())),
        }
    }

    pub fn to_series(&self) -> Result<TruncatedSeries2> {
        match self {
            Document::Series { degree, coeffs, .. } => {
                let mut terms = Vec::new();
                for (k, v) in coeffs {
                    let (m, n) = parse_key(k)?;
                    if m + n > *degree {
                        return Err(Error::DegreeOverflow { needed: m + n, available: *degree });
                    }
                    terms.push((m, n, rational::parse(v)?));
                }
                Ok(TruncatedSeries2::from_terms(*degree, terms))
            }
            _ => Err(Error::Invalid("expected a series".into())),
        }
    }
}

fn alphabet_json(a: &Alphabet) -> AlphabetJson {
    AlphabetJson { left: a.left_names().to_vec(), right: a.right_names().to_vec() }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct MatrixJson {
    pub order: usize,
    pub index: Vec<[usize; 2]>,
    pub rows: Vec<Vec<String>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &MomentMatrix) -> Self {
        MatrixJson {
            order: m.order,
            index: m.index.iter().map(|&(a, b)| [a, b]).collect(),
            rows: m.entries.iter().map(|r| r.iter().map(rational::format).collect()).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<MomentMatrix> {
        let entries = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| rational::parse(x)).collect::<Result<Vec<Rational>>>())
            .collect::<Result<Vec<_>>>()?;
        if entries.len() != self.index.len() || entries.iter().any(|r| r.len() != self.index.len()) {
            return Err(Error::Invalid("matrix shape does not match its index".into()));
        }
        Ok(MomentMatrix { order: self.order, index: self.index.iter().map(|p| (p[0], p[1])).collect(), entries })
    }
}

/// `[[1,4],[2],…]` with 1-based indices.
pub fn partition_json(p: &Partition) -> serde_json::Value {
    serde_json::to_value(p.to_one_based()).expect("plain integers")
}

pub fn parse_partition(text: &str) -> Result<Partition> {
    let blocks: Vec<Vec<usize>> = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    Partition::from_one_based(&blocks)
}
