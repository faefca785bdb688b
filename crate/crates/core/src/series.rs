//! Truncated power series: commuting bivariate in (z, w) and non-commuting over an alphabet.

use crate::error::{Error, Result};
use crate::model::{check_len, Alphabet, Letter, MomentSource, TwoFacedDistribution, Word};
use crate::rational::{self, Rational};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Σ c_{m,n} z^m w^n over m+n <= degree. Row `m` stores n = 0..=degree-m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries2 {
    degree: usize,
    coeffs: Vec<Vec<Rational>>,
}

impl TruncatedSeries2 {
    pub fn zero(degree: usize) -> Self {
        let coeffs = (0..=degree).map(|m| vec![Rational::zero(); degree - m + 1]).collect();
        TruncatedSeries2 { degree, coeffs }
    }

    pub fn one(degree: usize) -> Self {
        let mut s = Self::zero(degree);
        s.coeffs[0][0] = Rational::one();
        s
    }

    /// Builds from (m, n, c) terms; terms beyond the degree are dropped.
    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (usize, usize, Rational)>) -> Self {
        let mut s = Self::zero(degree);
        for (m, n, c) in terms {
            if m + n <= degree {
                s.coeffs[m][n] += c;
            }
        }
        s
    }

    /// Σ c_k z^k.
    pub fn univariate_z(degree: usize, c: &[Rational]) -> Self {
        Self::from_terms(degree, c.iter().enumerate().map(|(k, v)| (k, 0, v.clone())))
    }

    /// Σ c_k w^k.
    pub fn univariate_w(degree: usize, c: &[Rational]) -> Self {
        Self::from_terms(degree, c.iter().enumerate().map(|(k, v)| (0, k, v.clone())))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn get(&self, m: usize, n: usize) -> Rational {
        if m + n > self.degree {
            return Rational::zero();
        }
        self.coeffs[m][n].clone()
    }

    pub fn set(&mut self, m: usize, n: usize, c: Rational) -> Result<()> {
        if m + n > self.degree {
            return Err(Error::DegreeOverflow { needed: m + n, available: self.degree });
        }
        self.coeffs[m][n] = c;
        Ok(())
    }

    /// Nonzero terms ordered by total degree, then by descending power of z.
    pub fn terms(&self) -> Vec<(usize, usize, Rational)> {
        let mut v = Vec::new();
        for d in 0..=self.degree {
            for n in 0..=d {
                let c = &self.coeffs[d - n][n];
                if !c.is_zero() {
                    v.push((d - n, n, c.clone()));
                }
            }
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(Zero::is_zero)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.degree != other.degree {
            Err(Error::DegreeMismatch(self.degree, other.degree))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut s = self.clone();
        for (row, orow) in s.coeffs.iter_mut().zip(&other.coeffs) {
            for (c, o) in row.iter_mut().zip(orow) {
                *c += o;
            }
        }
        Ok(s)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let mut s = self.clone();
        for c in s.coeffs.iter_mut().flatten() {
            *c *= k;
        }
        s
    }

    /// Cauchy product truncated at the common degree.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.degree;
        let mut s = Self::zero(n);
        for (m1, row) in self.coeffs.iter().enumerate() {
            for (n1, a) in row.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for m2 in 0..=(n - m1 - n1) {
                    for n2 in 0..=(n - m1 - n1 - m2) {
                        let b = &other.coeffs[m2][n2];
                        if !b.is_zero() {
                            s.coeffs[m1 + m2][n1 + n2] += a * b;
                        }
                    }
                }
            }
        }
        Ok(s)
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.coeffs[0][0].clone();
        if c0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let inv0 = c0.recip();
        let mut g = Self::zero(self.degree);
        g.coeffs[0][0] = inv0.clone();
        for d in 1..=self.degree {
            for n in 0..=d {
                let m = d - n;
                let mut acc = Rational::zero();
                for i in 0..=m {
                    for j in 0..=n {
                        if i == 0 && j == 0 {
                            continue;
                        }
                        let f = &self.coeffs[i][j];
                        if !f.is_zero() {
                            acc += f * &g.coeffs[m - i][n - j];
                        }
                    }
                }
                g.coeffs[m][n] = -(acc * &inv0);
            }
        }
        Ok(g)
    }

    /// Multiplies by z^i w^j and re-truncates at `degree`.
    pub fn shift(&self, i: usize, j: usize, degree: usize) -> Self {
        let mut s = Self::zero(degree);
        for (m, n, c) in self.terms() {
            if m + i + n + j <= degree {
                s.coeffs[m + i][n + j] = c;
            }
        }
        s
    }

    /// Same coefficients viewed at another truncation degree (missing ones are zero).
    pub fn with_degree(&self, degree: usize) -> Self {
        Self::from_terms(degree, self.terms())
    }

    /// Keeps only terms with m >= 1 and n >= 1.
    pub fn reduced(&self) -> Self {
        let mut s = self.clone();
        for (m, row) in s.coeffs.iter_mut().enumerate() {
            for (n, c) in row.iter_mut().enumerate() {
                if m == 0 || n == 0 {
                    *c = Rational::zero();
                }
            }
        }
        s
    }

    /// Coefficients of z^k w^0.
    pub fn z_row(&self) -> Vec<Rational> {
        (0..=self.degree).map(|m| self.coeffs[m][0].clone()).collect()
    }

    /// Coefficients of z^0 w^k.
    pub fn w_row(&self) -> Vec<Rational> {
        self.coeffs[0].clone()
    }

    /// Renders as `c * z^m w^n` lines with the given variable names.
    pub fn render(&self, z: &str, w: &str) -> String {
        let mut out = String::new();
        for (m, n, c) in self.terms() {
            let mono = match (m, n) {
                (0, 0) => "1".to_string(),
                (m, 0) => format!("{z}^{m}"),
                (0, n) => format!("{w}^{n}"),
                (m, n) => format!("{z}^{m} {w}^{n}"),
            };
            out.push_str(&format!("{} * {}\n", rational::format(&c), mono));
        }
        out
    }
}

impl fmt::Display for TruncatedSeries2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("z", "w"))
    }
}

/// Coefficientwise product (truncated) with degree check.
pub fn series_mul(f: &TruncatedSeries2, g: &TruncatedSeries2) -> Result<TruncatedSeries2> {
    f.mul(g)
}

pub fn series_inverse(f: &TruncatedSeries2) -> Result<TruncatedSeries2> {
    f.inverse()
}

/// Series in non-commuting indeterminates with zero constant term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NcSeries {
    alphabet: Alphabet,
    degree: usize,
    coeffs: BTreeMap<Word, Rational>,
}

impl NcSeries {
    pub fn new(alphabet: Alphabet, degree: usize) -> Self {
        NcSeries { alphabet, degree, coeffs: BTreeMap::new() }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeff(&self, word: &[Letter]) -> Rational {
        self.coeffs.get(word).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, word: Word, c: Rational) -> Result<()> {
        if word.is_empty() {
            return Err(Error::Invalid("series have zero constant term".into()));
        }
        if word.len() > self.degree {
            return Err(Error::DegreeOverflow { needed: word.len(), available: self.degree });
        }
        if word.iter().any(|&l| l >= self.alphabet.len()) {
            return Err(Error::UnknownSymbol(self.alphabet.format_word(&[])));
        }
        if c.is_zero() {
            self.coeffs.remove(&word);
        } else {
            self.coeffs.insert(word, c);
        }
        Ok(())
    }

    /// Nonzero coefficients.
    pub fn entries(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.coeffs.iter()
    }

    /// Σ_k z_k: every length-one word has coefficient 1.
    pub fn unit(alphabet: Alphabet, degree: usize) -> Self {
        let mut s = NcSeries::new(alphabet, degree);
        for l in 0..s.alphabet.len() {
            s.coeffs.insert(vec![l], Rational::one());
        }
        s
    }

    /// Coefficients are the moments φ(word).
    pub fn moment_series(src: &dyn MomentSource) -> Self {
        let mut s = NcSeries::new(src.alphabet().clone(), src.degree());
        for w in src.alphabet().words_up_to(src.degree()) {
            let v = src.moment(&w);
            if !v.is_zero() {
                s.coeffs.insert(w, v);
            }
        }
        s
    }

    /// Reads the coefficients as moments of a distribution.
    pub fn to_distribution(&self) -> TwoFacedDistribution {
        let mut d = TwoFacedDistribution::new(self.alphabet.clone(), self.degree);
        for (w, c) in &self.coeffs {
            d.set(w.clone(), c.clone()).expect("stored words are valid");
        }
        d
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut s = self.clone();
        for (w, c) in &other.coeffs {
            let v = s.coeff(w) + c;
            s.set(w.clone(), v)?;
        }
        Ok(s)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let mut s = self.clone();
        for c in s.coeffs.values_mut() {
            *c *= k;
        }
        s.coeffs.retain(|_, c| !c.is_zero());
        s
    }

    /// Drops words longer than `degree`.
    pub fn truncate(&self, degree: usize) -> Self {
        let mut s = self.clone();
        s.degree = degree.min(self.degree);
        s.coeffs.retain(|w, _| w.len() <= degree);
        s
    }

    /// Coefficient of the subword picked out by `positions`.
    pub(crate) fn coeff_of_positions(&self, word: &[Letter], positions: &[usize]) -> Rational {
        let sub: Word = positions.iter().map(|&i| word[i]).collect();
        self.coeff(&sub)
    }
}

impl MomentSource for NcSeries {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }
    fn degree(&self) -> usize {
        self.degree
    }
    /// Treats coefficients as moments (empty word gives 1).
    fn moment(&self, word: &[Letter]) -> Rational {
        if word.is_empty() {
            Rational::one()
        } else {
            self.coeff(word)
        }
    }
}

/// Fails unless `word` fits in `src`.
pub(crate) fn ensure_word(src: &dyn MomentSource, word: &[Letter]) -> Result<()> {
    if word.iter().any(|&l| l >= src.alphabet().len()) {
        return Err(Error::Invalid("letter outside the alphabet".into()));
    }
    check_len(src, word.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{binomial, int};

    fn z(n: usize) -> TruncatedSeries2 {
        TruncatedSeries2::from_terms(n, [(1, 0, int(1))])
    }
    fn w(n: usize) -> TruncatedSeries2 {
        TruncatedSeries2::from_terms(n, [(0, 1, int(1))])
    }

    #[test]
    fn product_of_binomials() {
        let one = TruncatedSeries2::one(4);
        let p = one.add(&z(4)).unwrap().mul(&one.add(&w(4)).unwrap()).unwrap();
        let want = TruncatedSeries2::from_terms(4, [(0, 0, int(1)), (1, 0, int(1)), (0, 1, int(1)), (1, 1, int(1))]);
        assert_eq!(p, want);
        assert_eq!(p.mul(&one).unwrap(), p);
    }

    #[test]
    fn geometric_inverse() {
        let f = TruncatedSeries2::one(6).sub(&z(6)).unwrap();
        let g = f.inverse().unwrap();
        for k in 0..=6 {
            assert_eq!(g.get(k, 0), int(1));
        }
        assert_eq!(g.mul(&f).unwrap(), TruncatedSeries2::one(6));
        assert_eq!(TruncatedSeries2::one(3).inverse().unwrap(), TruncatedSeries2::one(3));
    }

    #[test]
    fn two_variable_geometric_inverse() {
        let f = TruncatedSeries2::one(5).sub(&z(5)).unwrap().sub(&w(5)).unwrap();
        let g = f.inverse().unwrap();
        for d in 0..=5 {
            for n in 0..=d {
                assert_eq!(g.get(d - n, n), binomial(d, d - n));
            }
        }
        // Independent check: multiply back.
        assert_eq!(f.mul(&g).unwrap(), TruncatedSeries2::one(5));
    }

    #[test]
    fn errors() {
        assert_eq!(z(3).inverse(), Err(Error::ZeroConstantTerm));
        assert_eq!(z(3).mul(&z(4)), Err(Error::DegreeMismatch(3, 4)));
    }

    #[test]
    fn shift_and_reduce() {
        let s = TruncatedSeries2::from_terms(3, [(0, 0, int(2)), (1, 1, int(5)), (2, 0, int(1))]);
        let t = s.shift(1, 1, 5);
        assert_eq!(t.get(1, 1), int(2));
        assert_eq!(t.get(2, 2), int(5));
        assert_eq!(s.reduced().terms(), vec![(1, 1, int(5))]);
    }

    #[test]
    fn render_monomials() {
        let s = TruncatedSeries2::from_terms(2, [(1, 1, crate::rational::frac(-1, 4))]);
        assert_eq!(s.to_string(), "-1/4 * z^1 w^1\n");
    }
}
