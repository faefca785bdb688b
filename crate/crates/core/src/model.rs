//! Distribution containers: alphabets, exponent tables, word-indexed moment
//! functionals, planar atomic measures and moment matrices.

use crate::error::{Error, Result};
use crate::partitions::{ChiMap, Face};
use crate::rational::{self, Rational};
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Index of a symbol inside an [`Alphabet`].
pub type Letter = usize;
pub type Word = Vec<Letter>;

/// Left symbols followed by right symbols. Letter `i` is left iff `i < left.len()`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    left: Vec<String>,
    right: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(left: impl IntoIterator<Item = S>, right: impl IntoIterator<Item = S>) -> Result<Self> {
        let left: Vec<String> = left.into_iter().map(Into::into).collect();
        let right: Vec<String> = right.into_iter().map(Into::into).collect();
        let mut seen = BTreeSet::new();
        for name in left.iter().chain(&right) {
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                return Err(Error::Invalid(format!("bad symbol name `{name}`")));
            }
            if !seen.insert(name.clone()) {
                return Err(Error::OverlappingAlphabets(name.clone()));
            }
        }
        Ok(Alphabet { left, right })
    }

    /// One left symbol and one right symbol.
    pub fn pair(a: &str, b: &str) -> Self {
        Alphabet::new([a], [b]).expect("distinct pair names")
    }

    pub fn len(&self) -> usize {
        self.left.len() + self.right.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn left_names(&self) -> &[String] {
        &self.left
    }

    pub fn right_names(&self) -> &[String] {
        &self.right
    }

    pub fn face(&self, l: Letter) -> Face {
        if l < self.left.len() {
            Face::Left
        } else {
            Face::Right
        }
    }

    pub fn name(&self, l: Letter) -> &str {
        if l < self.left.len() {
            &self.left[l]
        } else {
            &self.right[l - self.left.len()]
        }
    }

    pub fn letter(&self, name: &str) -> Option<Letter> {
        if let Some(i) = self.left.iter().position(|s| s == name) {
            return Some(i);
        }
        self.right.iter().position(|s| s == name).map(|i| i + self.left.len())
    }

    pub fn left_letter(&self, i: usize) -> Letter {
        assert!(i < self.left.len());
        i
    }

    pub fn right_letter(&self, j: usize) -> Letter {
        assert!(j < self.right.len());
        self.left.len() + j
    }

    /// The χ-map induced by a nonempty word.
    pub fn chi(&self, word: &[Letter]) -> ChiMap {
        ChiMap::from_faces(word.iter().map(|&l| self.face(l)).collect()).expect("nonempty word")
    }

    pub fn parse_word(&self, s: &str) -> Result<Word> {
        s.split_whitespace().map(|t| self.letter(t).ok_or_else(|| Error::UnknownSymbol(t.to_string()))).collect()
    }

    pub fn format_word(&self, w: &[Letter]) -> String {
        w.iter().map(|&l| self.name(l)).collect::<Vec<_>>().join(" ")
    }

    /// All nonempty words of length at most `n`, shortest first, then lexicographic.
    pub fn words_up_to(&self, n: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut layer: Vec<Word> = vec![vec![]];
        for _ in 0..n {
            let mut next = Vec::with_capacity(layer.len() * self.len());
            for w in &layer {
                for l in 0..self.len() {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    /// Joins several alphabets: all lefts in component order, then all rights.
    /// Returns the joint alphabet and, per joint letter, `(component, local letter)`.
    pub fn join(parts: &[&Alphabet]) -> Result<(Alphabet, Vec<(usize, Letter)>)> {
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut origin_left = Vec::new();
        let mut origin_right = Vec::new();
        for (k, a) in parts.iter().enumerate() {
            for (i, s) in a.left.iter().enumerate() {
                left.push(s.clone());
                origin_left.push((k, i));
            }
            for (j, s) in a.right.iter().enumerate() {
                right.push(s.clone());
                origin_right.push((k, a.left.len() + j));
            }
        }
        let joint = Alphabet::new(left, right)?;
        origin_left.extend(origin_right);
        Ok((joint, origin_left))
    }
}

/// Anything that assigns a moment to a word. The empty word has moment 1.
///
/// Callers must keep `word.len() <= self.degree()`; public entry points check this.
pub trait MomentSource {
    fn alphabet(&self) -> &Alphabet;
    fn degree(&self) -> usize;
    fn moment(&self, word: &[Letter]) -> Rational;
}

pub(crate) fn check_len(src: &dyn MomentSource, len: usize) -> Result<()> {
    if len > src.degree() {
        Err(Error::DegreeOverflow { needed: len, available: src.degree() })
    } else {
        Ok(())
    }
}

/// Truncated moment functional on words; words not stored have moment zero.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoFacedDistribution {
    alphabet: Alphabet,
    degree: usize,
    moments: BTreeMap<Word, Rational>,
}

impl TwoFacedDistribution {
    pub fn new(alphabet: Alphabet, degree: usize) -> Self {
        TwoFacedDistribution { alphabet, degree, moments: BTreeMap::new() }
    }

    pub fn set(&mut self, word: Word, value: Rational) -> Result<()> {
        if word.is_empty() {
            return Err(Error::Invalid("the empty word has moment 1".into()));
        }
        if word.len() > self.degree {
            return Err(Error::DegreeOverflow { needed: word.len(), available: self.degree });
        }
        if let Some(&bad) = word.iter().find(|&&l| l >= self.alphabet.len()) {
            return Err(Error::UnknownSymbol(format!("letter #{bad}")));
        }
        if value.is_zero() {
            self.moments.remove(&word);
        } else {
            self.moments.insert(word, value);
        }
        Ok(())
    }

    /// Evaluates every word of `src` up to its degree.
    pub fn materialize(src: &dyn MomentSource) -> Self {
        let mut d = TwoFacedDistribution::new(src.alphabet().clone(), src.degree());
        for w in src.alphabet().words_up_to(src.degree()) {
            let v = src.moment(&w);
            if !v.is_zero() {
                d.moments.insert(w, v);
            }
        }
        d
    }

    /// A commuting pair `(a, b)` read off a moment table: φ(w) = M_{#a,#b}.
    pub fn from_table(t: &ExponentTable, left: &str, right: &str) -> Result<Self> {
        if t.kind() != TableKind::Moments {
            return Err(Error::KindMismatch("expected a moment table".into()));
        }
        let alphabet = Alphabet::new([left], [right])?;
        let mut d = TwoFacedDistribution::new(alphabet, t.degree());
        for w in d.alphabet.words_up_to(t.degree()) {
            let m = w.iter().filter(|&&l| l == 0).count();
            let v = t.get(m, w.len() - m);
            if !v.is_zero() {
                d.moments.insert(w, v);
            }
        }
        Ok(d)
    }

    /// Renames symbols, keeping faces and moments.
    pub fn renamed<S: Into<String>>(
        &self,
        left: impl IntoIterator<Item = S>,
        right: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let alphabet = Alphabet::new(left, right)?;
        if alphabet.left.len() != self.alphabet.left.len() || alphabet.right.len() != self.alphabet.right.len() {
            return Err(Error::AlphabetMismatch);
        }
        Ok(TwoFacedDistribution { alphabet, ..self.clone() })
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.moments.iter()
    }
}

impl MomentSource for TwoFacedDistribution {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }
    fn degree(&self) -> usize {
        self.degree
    }
    fn moment(&self, word: &[Letter]) -> Rational {
        if word.is_empty() {
            return Rational::one();
        }
        self.moments.get(word).cloned().unwrap_or_else(Rational::zero)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TableKind {
    Moments,
    BooleanCum,
    FreeCum,
    BifreeCum,
    BibooleanCum,
    BifermiCum,
}

impl TableKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TableKind::Moments => "moments",
            TableKind::BooleanCum => "boolean_cum",
            TableKind::FreeCum => "free_cum",
            TableKind::BifreeCum => "bifree_cum",
            TableKind::BibooleanCum => "biboolean_cum",
            TableKind::BifermiCum => "bifermi_cum",
        }
    }

    /// Accepts both `biboolean_cum` and the short `biboolean`.
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "moments" | "moment" => TableKind::Moments,
            "boolean_cum" | "boolean" => TableKind::BooleanCum,
            "free_cum" | "free" => TableKind::FreeCum,
            "bifree_cum" | "bifree" => TableKind::BifreeCum,
            "biboolean_cum" | "biboolean" => TableKind::BibooleanCum,
            "bifermi_cum" | "bifermi" => TableKind::BifermiCum,
            other => return Err(Error::Parse(format!("unknown table kind `{other}`"))),
        })
    }
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Sparse map (m,n) -> value for 1 <= m+n <= degree.
///
/// For moment tables the (0,0) slot is `mass` (1 for states). Cumulant tables
/// have nothing at (0,0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentTable {
    kind: TableKind,
    degree: usize,
    entries: BTreeMap<(usize, usize), Rational>,
    mass: Rational,
}

impl ExponentTable {
    pub fn new(kind: TableKind, degree: usize) -> Self {
        let mass = if kind == TableKind::Moments { Rational::one() } else { Rational::zero() };
        ExponentTable { kind, degree, entries: BTreeMap::new(), mass }
    }

    pub fn kind(&self) -> TableKind {
        self.kind
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn mass(&self) -> &Rational {
        &self.mass
    }

    pub fn set_mass(&mut self, mass: Rational) -> Result<()> {
        if self.kind != TableKind::Moments {
            return Err(Error::KindMismatch("only moment tables carry a mass".into()));
        }
        self.mass = mass;
        Ok(())
    }

    pub fn get(&self, m: usize, n: usize) -> Rational {
        if m == 0 && n == 0 {
            return self.mass.clone();
        }
        self.entries.get(&(m, n)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, m: usize, n: usize, v: Rational) -> Result<()> {
        if m + n == 0 {
            return Err(Error::Invalid("(0,0) is not a table entry".into()));
        }
        if m + n > self.degree {
            return Err(Error::DegreeOverflow { needed: m + n, available: self.degree });
        }
        if v.is_zero() {
            self.entries.remove(&(m, n));
        } else {
            self.entries.insert((m, n), v);
        }
        Ok(())
    }

    /// Nonzero entries, sorted by (m, n).
    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Rational)> {
        self.entries.iter()
    }

    /// Every slot (m,n) with 1 <= m+n <= degree, by total degree then m descending.
    pub fn slots(&self) -> Vec<(usize, usize)> {
        slots(self.degree)
    }

    /// Same entries with a different kind tag; the mass is reset accordingly.
    pub fn with_kind(&self, kind: TableKind) -> Self {
        let mut t = ExponentTable::new(kind, self.degree);
        t.entries = self.entries.clone();
        if kind == TableKind::Moments && self.kind == TableKind::Moments {
            t.mass = self.mass.clone();
        }
        t
    }

    /// Drops entries above `degree`.
    pub fn truncate(&self, degree: usize) -> Self {
        let mut t = self.clone();
        t.degree = degree.min(self.degree);
        t.entries.retain(|&(m, n), _| m + n <= degree);
        t
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut t = self.clone();
        for v in t.entries.values_mut() {
            *v *= c;
        }
        t.entries.retain(|_, v| !v.is_zero());
        t
    }

    /// Entrywise sum of two tables of the same kind and degree (masses add for moments).
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.kind != other.kind {
            return Err(Error::KindMismatch(format!("{} vs {}", self.kind, other.kind)));
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        let mut t = self.clone();
        for (&(m, n), v) in &other.entries {
            let s = t.get(m, n) + v;
            t.set(m, n, s)?;
        }
        if t.kind == TableKind::Moments {
            t.mass = &self.mass + &other.mass;
        }
        Ok(t)
    }
}

pub(crate) fn slots(degree: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for d in 1..=degree {
        for n in 0..=d {
            v.push((d - n, n));
        }
    }
    v
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub x: Rational,
    pub y: Rational,
    pub weight: Rational,
}

/// Finitely supported signed measure on the plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomicMeasure2D {
    atoms: Vec<Atom>,
}

impl AtomicMeasure2D {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for a in &atoms {
            if !seen.insert((a.x.clone(), a.y.clone())) {
                return Err(Error::Invalid(format!(
                    "duplicate atom at ({}, {})",
                    rational::format(&a.x),
                    rational::format(&a.y)
                )));
            }
        }
        Ok(AtomicMeasure2D { atoms })
    }

    pub fn from_triples(triples: &[(Rational, Rational, Rational)]) -> Result<Self> {
        AtomicMeasure2D::new(
            triples.iter().map(|(x, y, w)| Atom { x: x.clone(), y: y.clone(), weight: w.clone() }).collect(),
        )
    }

    pub fn dirac(x: Rational, y: Rational) -> Self {
        AtomicMeasure2D { atoms: vec![Atom { x, y, weight: Rational::one() }] }
    }

    /// Product of two one-dimensional atomic measures given as (point, weight).
    pub fn product(xs: &[(Rational, Rational)], ys: &[(Rational, Rational)]) -> Result<Self> {
        let mut atoms = Vec::new();
        for (x, wx) in xs {
            for (y, wy) in ys {
                atoms.push(Atom { x: x.clone(), y: y.clone(), weight: wx * wy });
            }
        }
        AtomicMeasure2D::new(atoms)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn total_mass(&self) -> Rational {
        self.atoms.iter().map(|a| a.weight.clone()).sum()
    }

    /// Nonnegative weights summing to one.
    pub fn is_probability(&self) -> bool {
        self.atoms.iter().all(|a| !a.weight.is_negative()) && self.total_mass().is_one()
    }

    pub fn dilate(&self, lambda: &Rational) -> Self {
        self.map_points(|x, y| (x * lambda, y * lambda))
    }

    pub fn shift(&self, dx: &Rational, dy: &Rational) -> Self {
        self.map_points(|x, y| (x + dx, y + dy))
    }

    fn map_points(&self, f: impl Fn(&Rational, &Rational) -> (Rational, Rational)) -> Self {
        // Merging keeps atoms distinct when the map is not injective (λ = 0).
        let mut merged: BTreeMap<(Rational, Rational), Rational> = BTreeMap::new();
        let mut order = Vec::new();
        for a in &self.atoms {
            let p = f(&a.x, &a.y);
            if !merged.contains_key(&p) {
                order.push(p.clone());
            }
            *merged.entry(p).or_insert_with(Rational::zero) += &a.weight;
        }
        let atoms = order
            .into_iter()
            .map(|p| {
                let weight = merged[&p].clone();
                Atom { x: p.0, y: p.1, weight }
            })
            .collect();
        AtomicMeasure2D { atoms }
    }

    /// (M_{1,0}, M_{0,1}).
    pub fn means(&self) -> (Rational, Rational) {
        let mut mx = Rational::zero();
        let mut my = Rational::zero();
        for a in &self.atoms {
            mx += &a.weight * &a.x;
            my += &a.weight * &a.y;
        }
        (mx, my)
    }

    /// Translates so that both first moments vanish.
    pub fn zero_mean_shift(&self) -> Self {
        let (mx, my) = self.means();
        self.shift(&-mx, &-my)
    }
}

/// M_{m,n} = Σ w x^m y^n for 1 <= m+n <= N; the (0,0) slot holds the total mass.
pub fn measure_moments(mu: &AtomicMeasure2D, degree: usize) -> ExponentTable {
    let mut t = ExponentTable::new(TableKind::Moments, degree);
    t.mass = mu.total_mass();
    for atom in &mu.atoms {
        let xp: Vec<Rational> = powers(&atom.x, degree);
        let yp: Vec<Rational> = powers(&atom.y, degree);
        for (m, n) in slots(degree) {
            let v = &atom.weight * &xp[m] * &yp[n];
            if !v.is_zero() {
                *t.entries.entry((m, n)).or_insert_with(Rational::zero) += v;
            }
        }
    }
    t.entries.retain(|_, v| !v.is_zero());
    t
}

fn powers(x: &Rational, n: usize) -> Vec<Rational> {
    let mut v = Vec::with_capacity(n + 1);
    v.push(Rational::one());
    for i in 0..n {
        let next = &v[i] * x;
        v.push(next);
    }
    v
}

/// Symmetric matrix of moments indexed by exponent pairs in colex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentMatrix {
    pub order: usize,
    pub index: Vec<(usize, usize)>,
    pub entries: Vec<Vec<Rational>>,
}

impl MomentMatrix {
    /// Colex list (i₂ major, i₁ minor) of pairs with 0 <= i₁, i₂ <= order.
    pub fn colex_index(order: usize) -> Vec<(usize, usize)> {
        let mut v = Vec::new();
        for i2 in 0..=order {
            for i1 in 0..=order {
                v.push((i1, i2));
            }
        }
        v
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }
}
