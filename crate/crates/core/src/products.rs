//! Joint distributions of independent families and derived pair tables.

use crate::error::{Error, Result};
use crate::model::{check_len, Alphabet, ExponentTable, Letter, MomentSource, TableKind, TwoFacedDistribution, Word};
use crate::partitions::{family_cached, nc_mobius, pi_omega_chi, ChiMap, OmegaMap, Partition, PartitionFamily};
use crate::rational::{self, Rational};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

/// Components of an independent family; component k has color k.
#[derive(Clone, Debug)]
pub struct FamilySpec {
    components: Vec<TwoFacedDistribution>,
    alphabet: Alphabet,
    origin: Vec<(usize, Letter)>,
    degree: usize,
}

impl FamilySpec {
    pub fn new(components: Vec<TwoFacedDistribution>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Invalid("a family needs at least one component".into()));
        }
        let alphabets: Vec<&Alphabet> = components.iter().map(|c| c.alphabet()).collect();
        let (alphabet, origin) = Alphabet::join(&alphabets)?;
        let degree = components.iter().map(|c| c.degree()).min().unwrap();
        Ok(FamilySpec { components, alphabet, origin, degree })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Color of each letter of a joint word.
    pub fn omega(&self, word: &[Letter]) -> OmegaMap {
        OmegaMap::new(word.iter().map(|&l| self.origin[l].0).collect())
    }

    /// Moment of a monochrome block, read from its component.
    fn block_moment(&self, word: &[Letter], block: &[usize]) -> Rational {
        let k = self.origin[word[block[0]]].0;
        let local: Word = block.iter().map(|&i| self.origin[word[i]].1).collect();
        self.components[k].moment(&local)
    }

    fn product_over(&self, word: &[Letter], pi: &Partition) -> Rational {
        let mut prod = Rational::one();
        for b in pi.blocks() {
            let v = self.block_moment(word, b);
            if v.is_zero() {
                return Rational::zero();
            }
            prod *= v;
        }
        prod
    }
}

/// Moments factor over the blocks of π_{ω,χ}.
#[derive(Clone, Debug)]
pub struct BiBooleanProduct {
    family: FamilySpec,
}

pub fn biboolean_product(family: FamilySpec) -> BiBooleanProduct {
    BiBooleanProduct { family }
}

impl BiBooleanProduct {
    pub fn family(&self) -> &FamilySpec {
        &self.family
    }
}

impl MomentSource for BiBooleanProduct {
    fn alphabet(&self) -> &Alphabet {
        &self.family.alphabet
    }
    fn degree(&self) -> usize {
        self.family.degree
    }
    fn moment(&self, word: &[Letter]) -> Rational {
        if word.is_empty() {
            return Rational::one();
        }
        let chi = self.family.alphabet.chi(word);
        let pi = pi_omega_chi(&chi, &self.family.omega(word)).expect("lengths agree");
        self.family.product_over(word, &pi)
    }
}

type Coefficients = Arc<Vec<(Partition, Rational)>>;

/// Moments Σ_{π∈BNC(χ)} (Σ_{π≤σ≤ω} μ_BNC(π,σ)) φ_π, with the inner sums memoized per (χ, ω).
#[derive(Debug)]
pub struct BiFreeProduct {
    family: FamilySpec,
    cache: Mutex<HashMap<(ChiMap, OmegaMap), Coefficients>>,
}

pub fn bifree_product(family: FamilySpec) -> BiFreeProduct {
    BiFreeProduct { family, cache: Mutex::new(HashMap::new()) }
}

impl BiFreeProduct {
    pub fn family(&self) -> &FamilySpec {
        &self.family
    }

    fn coefficients(&self, chi: &ChiMap, omega: &OmegaMap) -> Coefficients {
        let key = (chi.clone(), omega.canonical());
        if let Some(c) = self.cache.lock().unwrap().get(&key) {
            return c.clone();
        }
        let kernel = omega.kernel();
        let ranks = chi.ranks();
        let below: Vec<(Partition, Partition)> = family_cached(PartitionFamily::Bnc, chi)
            .iter()
            .filter(|p| p.leq(&kernel))
            .map(|p| (p.clone(), p.transport(&ranks)))
            .collect();
        let mut out = Vec::new();
        for (pi, pi_nc) in &below {
            let c: i64 = below.iter().filter(|(s, _)| pi.leq(s)).map(|(_, s_nc)| nc_mobius(pi_nc, s_nc)).sum();
            if c != 0 {
                out.push((pi.clone(), Rational::from_integer(c.into())));
            }
        }
        let out = Arc::new(out);
        self.cache.lock().unwrap().insert(key, out.clone());
        out
    }
}

impl MomentSource for BiFreeProduct {
    fn alphabet(&self) -> &Alphabet {
        &self.family.alphabet
    }
    fn degree(&self) -> usize {
        self.family.degree
    }
    fn moment(&self, word: &[Letter]) -> Rational {
        if word.is_empty() {
            return Rational::one();
        }
        let chi = self.family.alphabet.chi(word);
        let coeffs = self.coefficients(&chi, &self.family.omega(word));
        coeffs.iter().map(|(pi, c)| c * self.family.product_over(word, pi)).sum()
    }
}

impl OmegaMap {
    /// Relabels colors by first appearance, so equal patterns share cache entries.
    fn canonical(&self) -> OmegaMap {
        let names: Vec<String> = self.colors().iter().map(|c| c.to_string()).collect();
        OmegaMap::from_names(&names)
    }
}

/// Formal polynomial in the letters of an alphabet plus a formal unit (the empty word).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WordExpr {
    terms: BTreeMap<Word, Rational>,
}

impl WordExpr {
    pub fn unit() -> Self {
        Self::scalar(Rational::one())
    }

    pub fn scalar(c: Rational) -> Self {
        let mut e = WordExpr::default();
        if !c.is_zero() {
            e.terms.insert(vec![], c);
        }
        e
    }

    pub fn letter(l: Letter) -> Self {
        let mut e = WordExpr::default();
        e.terms.insert(vec![l], Rational::one());
        e
    }

    /// Parses e.g. `(1+a1)*(1+a2)`, `b1 + b2`, `1/2 a b - 3`.
    pub fn parse(s: &str, alphabet: &Alphabet) -> Result<Self> {
        let mut p = ExprParser { src: s, pos: 0, alphabet };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut e = self.clone();
        for (w, c) in &other.terms {
            let v = e.terms.remove(w).unwrap_or_else(Rational::zero) + c;
            if !v.is_zero() {
                e.terms.insert(w.clone(), v);
            }
        }
        e
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let mut e = self.clone();
        for c in e.terms.values_mut() {
            *c *= k;
        }
        e.terms.retain(|_, c| !c.is_zero());
        e
    }

    /// Concatenation product, with the formal unit erased.
    pub fn mul(&self, other: &Self) -> Self {
        let mut e = WordExpr::default();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                let mut w = u.clone();
                w.extend(v);
                let slot = e.terms.entry(w).or_insert_with(Rational::zero);
                *slot += a * b;
            }
        }
        e.terms.retain(|_, c| !c.is_zero());
        e
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut e = WordExpr::unit();
        for _ in 0..k {
            e = e.mul(self);
        }
        e
    }

    /// Longest word with a nonzero coefficient.
    pub fn max_len(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// φ applied linearly.
    pub fn evaluate(&self, src: &dyn MomentSource) -> Result<Rational> {
        check_len(src, self.max_len())?;
        Ok(self.terms.iter().map(|(w, c)| c * src.moment(w)).sum())
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let c = rational::format(c);
                if w.is_empty() {
                    c
                } else if c == "1" {
                    alphabet.format_word(w)
                } else {
                    format!("{c} {}", alphabet.format_word(w))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

struct ExprParser<'a> {
    src: &'a str,
    pos: usize,
    alphabet: &'a Alphabet,
}

impl ExprParser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in `{}`", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn expr(&mut self) -> Result<WordExpr> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some('-') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?.scale(&-Rational::one()));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<WordExpr> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(c) if c == '(' || c.is_alphanumeric() || c == '_' => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<WordExpr> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some('-') => {
                self.pos += 1;
                Ok(self.factor()?.scale(&-Rational::one()))
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.digits();
                let mut value = rational::parse(&num)?;
                self.skip_ws();
                if self.peek() == Some('/') {
                    self.pos += 1;
                    self.skip_ws();
                    let den = self.digits();
                    if den.is_empty() {
                        return Err(self.error("expected a denominator"));
                    }
                    value = rational::checked_div(&value, &rational::parse(&den)?)?;
                }
                Ok(WordExpr::scalar(value))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while let Some(c) = self.peek() {
                    if c.is_alphanumeric() || c == '_' {
                        self.pos += c.len_utf8();
                    } else {
                        break;
                    }
                }
                let name = &self.src[start..self.pos];
                let l = self.alphabet.letter(name).ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
                Ok(WordExpr::letter(l))
            }
            _ => Err(self.error("expected a symbol, number or `(`")),
        }
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.src[start..self.pos].to_string()
    }
}

/// M_{m,n} = φ(left^m right^n) for m+n <= degree.
pub fn extract_pair(
    dist: &dyn MomentSource,
    left: &WordExpr,
    right: &WordExpr,
    degree: usize,
) -> Result<ExponentTable> {
    let needed = degree * left.max_len().max(right.max_len());
    check_len(dist, needed)?;
    let lp: Vec<WordExpr> = (0..=degree).map(|k| left.pow(k)).collect();
    let rp: Vec<WordExpr> = (0..=degree).map(|k| right.pow(k)).collect();
    let mut t = ExponentTable::new(TableKind::Moments, degree);
    for (m, n) in crate::model::slots(degree) {
        let v = lp[m].mul(&rp[n]).evaluate(dist)?;
        t.set(m, n, v)?;
    }
    Ok(t)
}
