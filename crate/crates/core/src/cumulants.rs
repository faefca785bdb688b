//! Moment/cumulant conversions over NC, I, BNC, BI and ABI, two-state
//! c-(ℓ,r)-cumulants, and the unit-shift rule for bi-Boolean cumulant tables.

use crate::error::{Error, Result};
use crate::model::{slots, Alphabet, ExponentTable, Letter, MomentSource, TableKind, TwoFacedDistribution, Word};
use crate::partitions::{
    classify_blocks, family_cached, nc_mobius, BlockKind, ChiMap, Face, Partition, PartitionFamily,
};
use crate::rational::{binomial, Rational};
use crate::series::{ensure_word, NcSeries};
use num_traits::{One, Zero};
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CumulantKind {
    Boolean,
    Free,
    Bifree,
    Biboolean,
    Bifermi,
}

impl CumulantKind {
    pub fn family(self) -> PartitionFamily {
        match self {
            CumulantKind::Boolean => PartitionFamily::Interval,
            CumulantKind::Free => PartitionFamily::Nc,
            CumulantKind::Bifree => PartitionFamily::Bnc,
            CumulantKind::Biboolean => PartitionFamily::Bi,
            CumulantKind::Bifermi => PartitionFamily::Abi,
        }
    }

    pub fn table_kind(self) -> TableKind {
        match self {
            CumulantKind::Boolean => TableKind::BooleanCum,
            CumulantKind::Free => TableKind::FreeCum,
            CumulantKind::Bifree => TableKind::BifreeCum,
            CumulantKind::Biboolean => TableKind::BibooleanCum,
            CumulantKind::Bifermi => TableKind::BifermiCum,
        }
    }

    pub fn from_table_kind(k: TableKind) -> Option<Self> {
        Some(match k {
            TableKind::Moments => return None,
            TableKind::BooleanCum => CumulantKind::Boolean,
            TableKind::FreeCum => CumulantKind::Free,
            TableKind::BifreeCum => CumulantKind::Bifree,
            TableKind::BibooleanCum => CumulantKind::Biboolean,
            TableKind::BifermiCum => CumulantKind::Bifermi,
        })
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::from_table_kind(TableKind::parse(s)?)
            .ok_or_else(|| Error::KindMismatch("expected a cumulant kind".into()))
    }

    /// χ governing the two-index slot (m, n). One-faced kinds ignore faces.
    fn chi(self, m: usize, n: usize) -> ChiMap {
        match self {
            CumulantKind::Boolean | CumulantKind::Free => ChiMap::constant(Face::Left, m + n),
            _ => ChiMap::two_index(m, n),
        }
    }
}

/// (#positions < m, #positions >= m): the slot of a block of the word a^m b^n.
fn block_slot(block: &[usize], m: usize) -> (usize, usize) {
    let left = block.iter().filter(|&&i| i < m).count();
    (left, block.len() - left)
}

fn table_product(t: &ExponentTable, pi: &Partition, m: usize) -> Rational {
    let mut prod = Rational::one();
    for b in pi.blocks() {
        let (p, q) = block_slot(b, m);
        let v = t.get(p, q);
        if v.is_zero() {
            return Rational::zero();
        }
        prod *= v;
    }
    prod
}

/// Cumulant table of `kind` from a moment table, by isolating the full-block term.
pub fn moments_to_cumulants(t: &ExponentTable, kind: CumulantKind) -> Result<ExponentTable> {
    if t.kind() != TableKind::Moments {
        return Err(Error::KindMismatch(format!("expected moments, got {}", t.kind())));
    }
    let mut c = ExponentTable::new(kind.table_kind(), t.degree());
    for (m, n) in slots(t.degree()) {
        let parts = family_cached(kind.family(), &kind.chi(m, n));
        let mut acc = t.get(m, n);
        for pi in parts.iter().filter(|p| p.num_blocks() > 1) {
            acc -= table_product(&c, pi, m);
        }
        c.set(m, n, acc)?;
    }
    Ok(c)
}

/// Moment table from a cumulant table (kind read from the table's tag).
pub fn cumulants_to_moments(c: &ExponentTable) -> Result<ExponentTable> {
    let kind = CumulantKind::from_table_kind(c.kind())
        .ok_or_else(|| Error::KindMismatch("expected a cumulant table".into()))?;
    let mut t = ExponentTable::new(TableKind::Moments, c.degree());
    for (m, n) in slots(c.degree()) {
        let parts = family_cached(kind.family(), &kind.chi(m, n));
        let v: Rational = parts.iter().map(|pi| table_product(c, pi, m)).sum();
        t.set(m, n, v)?;
    }
    Ok(t)
}

fn sub_word(word: &[Letter], block: &[usize]) -> Word {
    block.iter().map(|&i| word[i]).collect()
}

fn chi_of(alphabet: &Alphabet, word: &[Letter], kind: CumulantKind) -> ChiMap {
    match kind {
        CumulantKind::Boolean | CumulantKind::Free => ChiMap::constant(Face::Left, word.len()),
        _ => alphabet.chi(word),
    }
}

/// φ_π(word): product of block moments.
fn moment_product(src: &dyn MomentSource, word: &[Letter], pi: &Partition) -> Rational {
    let mut prod = Rational::one();
    for b in pi.blocks() {
        let v = src.moment(&sub_word(word, b));
        if v.is_zero() {
            return Rational::zero();
        }
        prod *= v;
    }
    prod
}

/// Cumulant of a word by Möbius inversion over the kind's lattice.
/// Bi-Fermi has no lattice and is rejected.
pub fn word_cumulant(dist: &dyn MomentSource, word: &[Letter], kind: CumulantKind) -> Result<Rational> {
    if word.is_empty() {
        return Err(Error::Invalid("cumulants need a nonempty word".into()));
    }
    ensure_word(dist, word)?;
    if kind == CumulantKind::Bifermi {
        return Err(Error::KindMismatch("bi-Fermi cumulants have no Möbius form".into()));
    }
    let chi = chi_of(dist.alphabet(), word, kind);
    let ranks = chi.ranks();
    let full = Partition::full(word.len());
    let mut acc = Rational::zero();
    for sigma in family_cached(kind.family(), &chi).iter() {
        let mu = match kind {
            CumulantKind::Boolean | CumulantKind::Biboolean => {
                if (sigma.num_blocks() - 1) % 2 == 0 {
                    1
                } else {
                    -1
                }
            }
            CumulantKind::Free => nc_mobius(sigma, &full),
            CumulantKind::Bifree => nc_mobius(&sigma.transport(&ranks), &full),
            CumulantKind::Bifermi => unreachable!(),
        };
        if mu != 0 {
            acc += moment_product(dist, word, sigma) * Rational::from_integer(mu.into());
        }
    }
    Ok(acc)
}

/// Cumulant whose arguments are products: argument i is the word `args[i]`
/// (empty for the unit) acting as a single element with face `chi[i]`.
pub fn product_argument_cumulant(
    dist: &dyn MomentSource,
    args: &[Word],
    chi: &ChiMap,
    kind: CumulantKind,
) -> Result<Rational> {
    if args.len() != chi.len() {
        return Err(Error::LengthMismatch(args.len(), chi.len()));
    }
    let total: usize = args.iter().map(Vec::len).sum();
    crate::model::check_len(dist, total)?;
    let ranks = chi.ranks();
    let full = Partition::full(args.len());
    let mut acc = Rational::zero();
    for sigma in family_cached(kind.family(), chi).iter() {
        let mu = match kind {
            CumulantKind::Boolean | CumulantKind::Biboolean => {
                if (sigma.num_blocks() - 1) % 2 == 0 {
                    1
                } else {
                    -1
                }
            }
            CumulantKind::Free => nc_mobius(sigma, &full),
            CumulantKind::Bifree => nc_mobius(&sigma.transport(&ranks), &full),
            CumulantKind::Bifermi => return Err(Error::KindMismatch("bi-Fermi cumulants have no Möbius form".into())),
        };
        if mu == 0 {
            continue;
        }
        let mut prod = Rational::from_integer(mu.into());
        for b in sigma.blocks() {
            let w: Word = b.iter().flat_map(|&i| args[i].iter().copied()).collect();
            prod *= dist.moment(&w);
            if prod.is_zero() {
                break;
            }
        }
        acc += prod;
    }
    Ok(acc)
}

/// Word cumulants computed on demand by recursive subtraction, memoized per word.
pub struct RecursiveCumulants<'a> {
    src: &'a dyn MomentSource,
    kind: CumulantKind,
    memo: HashMap<Word, Rational>,
}

impl<'a> RecursiveCumulants<'a> {
    pub fn new(src: &'a dyn MomentSource, kind: CumulantKind) -> Self {
        RecursiveCumulants { src, kind, memo: HashMap::new() }
    }

    pub fn get(&mut self, word: &[Letter]) -> Rational {
        if let Some(v) = self.memo.get(word) {
            return v.clone();
        }
        let chi = chi_of(self.src.alphabet(), word, self.kind);
        let mut acc = self.src.moment(word);
        for pi in family_cached(self.kind.family(), &chi).iter().filter(|p| p.num_blocks() > 1) {
            let mut prod = Rational::one();
            for b in pi.blocks() {
                let v = self.get(&sub_word(word, b));
                if v.is_zero() {
                    prod = Rational::zero();
                    break;
                }
                prod *= v;
            }
            acc -= prod;
        }
        self.memo.insert(word.to_vec(), acc.clone());
        acc
    }
}

/// Cumulant series of every word up to the source's degree.
pub fn cumulant_series(src: &dyn MomentSource, kind: CumulantKind) -> NcSeries {
    let mut rc = RecursiveCumulants::new(src, kind);
    let mut s = NcSeries::new(src.alphabet().clone(), src.degree());
    for w in src.alphabet().words_up_to(src.degree()) {
        let v = rc.get(&w);
        s.set(w, v).expect("word within degree");
    }
    s
}

/// Inverse of [`cumulant_series`]: moments Σ_π Π c(word|V).
pub fn moments_from_cumulant_series(c: &NcSeries, kind: CumulantKind) -> TwoFacedDistribution {
    let mut d = TwoFacedDistribution::new(c.alphabet().clone(), c.degree());
    for w in c.alphabet().words_up_to(c.degree()) {
        let chi = chi_of(c.alphabet(), &w, kind);
        let mut acc = Rational::zero();
        for pi in family_cached(kind.family(), &chi).iter() {
            let mut prod = Rational::one();
            for b in pi.blocks() {
                prod *= c.coeff_of_positions(&w, b);
                if prod.is_zero() {
                    break;
                }
            }
            acc += prod;
        }
        d.set(w, acc).expect("word within degree");
    }
    d
}

/// Two-state c-(ℓ,r)-cumulant: φ(w) = Σ_{π∈BNC} Π_{interior} κ_ψ · Π_{exterior} 𝒦.
pub fn c_blr_cumulant(phi: &dyn MomentSource, psi: &dyn MomentSource, word: &[Letter]) -> Result<Rational> {
    if phi.alphabet() != psi.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    if phi.degree() != psi.degree() {
        return Err(Error::DegreeMismatch(phi.degree(), psi.degree()));
    }
    if word.is_empty() {
        return Err(Error::Invalid("cumulants need a nonempty word".into()));
    }
    ensure_word(phi, word)?;
    let mut kappa = RecursiveCumulants::new(psi, CumulantKind::Bifree);
    let mut memo = HashMap::new();
    Ok(c_blr_rec(phi, &mut kappa, &mut memo, word))
}

fn c_blr_rec(
    phi: &dyn MomentSource,
    kappa: &mut RecursiveCumulants<'_>,
    memo: &mut HashMap<Word, Rational>,
    word: &[Letter],
) -> Rational {
    if let Some(v) = memo.get(word) {
        return v.clone();
    }
    let chi = phi.alphabet().chi(word);
    let mut acc = phi.moment(word);
    for pi in family_cached(PartitionFamily::Bnc, &chi).iter().filter(|p| p.num_blocks() > 1) {
        let kinds = classify_blocks(&chi, pi);
        let mut prod = Rational::one();
        for (b, k) in pi.blocks().iter().zip(kinds) {
            let sub = sub_word(word, b);
            let v = match k {
                BlockKind::Interior => kappa.get(&sub),
                BlockKind::Exterior => c_blr_rec(phi, kappa, memo, &sub),
            };
            if v.is_zero() {
                prod = Rational::zero();
                break;
            }
            prod *= v;
        }
        acc -= prod;
    }
    memo.insert(word.to_vec(), acc.clone());
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// B-table of (1+a, b) (side = left) or (a, 1+b) (side = right) from the B-table of (a, b).
pub fn affine_shift_cumulants(t: &ExponentTable, side: Side) -> Result<ExponentTable> {
    if t.kind() != TableKind::BibooleanCum {
        return Err(Error::KindMismatch(format!("expected biboolean_cum, got {}", t.kind())));
    }
    // Written for the left side; the right side swaps the roles of m and n.
    let get = |p: usize, q: usize| match side {
        Side::Left => t.get(p, q),
        Side::Right => t.get(q, p),
    };
    let mut out = ExponentTable::new(TableKind::BibooleanCum, t.degree());
    for (a, b) in slots(t.degree()) {
        let (m, n) = match side {
            Side::Left => (a, b),
            Side::Right => (b, a),
        };
        let v = if m == 0 {
            get(0, n)
        } else if n == 0 {
            if m == 1 {
                Rational::one() + get(1, 0)
            } else {
                (0..=m - 2).map(|p| binomial(m - 2, p) * get(p + 2, 0)).sum()
            }
        } else {
            (0..m).map(|i| binomial(m - 1, i) * get(i + 1, n)).sum()
        };
        out.set(a, b, v)?;
    }
    Ok(out)
}
