//! Moment matrices, exact determinants and inertia, and the ⊎⊎ divisibility probe.

use crate::cumulants::{cumulants_to_moments, moments_to_cumulants, CumulantKind};
use crate::error::{Error, Result};
use crate::model::{ExponentTable, MomentMatrix, TableKind};
use crate::rational::{int, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// X_n with entry M_{i₁+j₁, i₂+j₂} over the colex index list.
pub fn moment_matrix(t: &ExponentTable, order: usize) -> Result<MomentMatrix> {
    if t.kind() != TableKind::Moments {
        return Err(Error::KindMismatch("expected moments".into()));
    }
    if t.degree() < 4 * order {
        return Err(Error::DegreeOverflow { needed: 4 * order, available: t.degree() });
    }
    let index = MomentMatrix::colex_index(order);
    let entries =
        index.iter().map(|&(i1, i2)| index.iter().map(|&(j1, j2)| t.get(i1 + j1, i2 + j2)).collect()).collect();
    Ok(MomentMatrix { order, index, entries })
}

/// Exact determinant: rows are cleared of denominators, then Bareiss elimination on integers.
pub fn determinant(rows: &[Vec<Rational>]) -> Result<Rational> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::Invalid("matrix is not square".into()));
    }
    if n == 0 {
        return Ok(Rational::one());
    }
    let mut scale = Rational::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for r in rows {
        let l = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        scale *= Rational::from_integer(l.clone());
        a.push(r.iter().map(|x| x.numer() * (&l / x.denom())).collect());
    }
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Ok(Rational::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = Rational::from_integer(a[n - 1][n - 1].clone() * sign);
    Ok(det / scale)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Inertia {
    pub plus: usize,
    pub zero: usize,
    pub minus: usize,
}

impl Inertia {
    pub fn is_psd(&self) -> bool {
        self.minus == 0
    }
}

/// Signature by symmetric congruence, with 2×2 pivots when the diagonal vanishes.
pub fn inertia(rows: &[Vec<Rational>]) -> Result<Inertia> {
    let n = rows.len();
    for (i, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(Error::Invalid("matrix is not square".into()));
        }
        for j in 0..i {
            if rows[i][j] != rows[j][i] {
                return Err(Error::Asymmetric);
            }
        }
    }
    let mut a: Vec<Vec<Rational>> = rows.to_vec();
    let mut res = Inertia { plus: 0, zero: 0, minus: 0 };
    while !a.is_empty() {
        let k = a.len();
        if let Some(p) = (0..k).find(|&i| !a[i][i].is_zero()) {
            let d = a[p][p].clone();
            if d.is_positive() {
                res.plus += 1;
            } else {
                res.minus += 1;
            }
            let col: Vec<Rational> = (0..k).map(|i| a[i][p].clone()).collect();
            a = schur(&a, &[p], |i, j| &col[i] * &col[j] / &d);
            continue;
        }
        let Some((p, q)) = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero())
        else {
            res.zero += k;
            break;
        };
        // [[0, b], [b, 0]] has one positive and one negative eigenvalue.
        res.plus += 1;
        res.minus += 1;
        let b = a[p][q].clone();
        let cp: Vec<Rational> = (0..k).map(|i| a[i][p].clone()).collect();
        let cq: Vec<Rational> = (0..k).map(|i| a[i][q].clone()).collect();
        a = schur(&a, &[p, q], |i, j| (&cp[i] * &cq[j] + &cq[i] * &cp[j]) / &b);
    }
    Ok(res)
}

/// Removes the pivot rows/columns and subtracts the given correction elsewhere.
fn schur(a: &[Vec<Rational>], pivots: &[usize], corr: impl Fn(usize, usize) -> Rational) -> Vec<Vec<Rational>> {
    let keep: Vec<usize> = (0..a.len()).filter(|i| !pivots.contains(i)).collect();
    keep.iter().map(|&i| keep.iter().map(|&j| &a[i][j] - corr(i, j)).collect()).collect()
}

/// Evidence that a moment table is not positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A diagonal entry M_{2i,2j} of the moment matrix is negative.
    NegativeEvenMoment { m: usize, n: usize, value: Rational },
    /// A principal minor on the listed index pairs is negative.
    NegativeMinor { indices: Vec<(usize, usize)>, value: Rational },
    /// Not PSD, but the minor search was skipped for size.
    Inertia(Inertia),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfDivReport {
    pub divisor: usize,
    pub order: usize,
    pub moments: ExponentTable,
    pub matrix: MomentMatrix,
    pub inertia: Inertia,
    pub psd: bool,
    pub witness: Option<Witness>,
}

/// Largest matrix dimension for the exhaustive principal-minor search.
const MINOR_SEARCH_DIM: usize = 10;

/// First witness of non-positivity: negative diagonal entry, then the smallest negative principal minor.
pub fn find_witness(m: &MomentMatrix) -> Result<Option<Witness>> {
    let inert = inertia(&m.entries)?;
    if inert.is_psd() {
        return Ok(None);
    }
    for (k, &(i1, i2)) in m.index.iter().enumerate() {
        if m.entries[k][k].is_negative() {
            return Ok(Some(Witness::NegativeEvenMoment { m: 2 * i1, n: 2 * i2, value: m.entries[k][k].clone() }));
        }
    }
    let d = m.dim();
    if d > MINOR_SEARCH_DIM {
        return Ok(Some(Witness::Inertia(inert)));
    }
    for size in 2..=d {
        let mut subsets: Vec<u32> = (0u32..(1 << d)).filter(|s| s.count_ones() as usize == size).collect();
        subsets.sort();
        for s in subsets {
            let idx: Vec<usize> = (0..d).filter(|&i| s & (1 << i) != 0).collect();
            let sub: Vec<Vec<Rational>> =
                idx.iter().map(|&i| idx.iter().map(|&j| m.entries[i][j].clone()).collect()).collect();
            let det = determinant(&sub)?;
            if det.is_negative() {
                return Ok(Some(Witness::NegativeMinor {
                    indices: idx.iter().map(|&i| m.index[i]).collect(),
                    value: det,
                }));
            }
        }
    }
    Ok(Some(Witness::Inertia(inert)))
}

/// Scales the bi-Boolean cumulants by 1/n, rebuilds the moments of μ_n and tests X_k.
pub fn infdiv_probe(t: &ExponentTable, divisor: usize, order: usize) -> Result<InfDivReport> {
    if divisor == 0 {
        return Err(Error::Invalid("divisor must be positive".into()));
    }
    if t.degree() < 4 * order {
        return Err(Error::DegreeOverflow { needed: 4 * order, available: t.degree() });
    }
    let b = moments_to_cumulants(t, CumulantKind::Biboolean)?;
    let moments = cumulants_to_moments(&b.scale(&(int(1) / int(divisor as i64))))?;
    let matrix = moment_matrix(&moments, order)?;
    let inertia = inertia(&matrix.entries)?;
    let witness = find_witness(&matrix)?;
    Ok(InfDivReport { divisor, order, moments, psd: inertia.is_psd(), matrix, inertia, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{measure_moments, AtomicMeasure2D};
    use crate::rational::frac;

    fn mat(v: &[&[i64]]) -> Vec<Vec<Rational>> {
        v.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&mat(&[&[1, 0], &[0, 1]])).unwrap(), int(1));
        assert_eq!(determinant(&mat(&[&[0, 1], &[1, 0]])).unwrap(), int(-1));
        assert_eq!(determinant(&mat(&[&[1, 2], &[2, 4]])).unwrap(), int(0));
        let h = vec![vec![frac(1, 2), frac(1, 3)], vec![frac(1, 3), frac(1, 4)]];
        assert_eq!(determinant(&h).unwrap(), frac(1, 72));
    }

    #[test]
    fn inertia_examples() {
        assert_eq!(inertia(&mat(&[&[1]])).unwrap(), Inertia { plus: 1, zero: 0, minus: 0 });
        assert_eq!(
            inertia(&mat(&[&[1, 0, 0], &[0, 0, 0], &[0, 0, -2]])).unwrap(),
            Inertia { plus: 1, zero: 1, minus: 1 }
        );
        assert_eq!(inertia(&mat(&[&[0, 1], &[1, 0]])).unwrap(), Inertia { plus: 1, zero: 0, minus: 1 });
        assert_eq!(inertia(&mat(&[&[0, 1], &[2, 0]])), Err(Error::Asymmetric));
    }

    #[test]
    fn order_zero_matrix() {
        let t = measure_moments(&AtomicMeasure2D::dirac(int(3), int(1)), 2);
        assert_eq!(moment_matrix(&t, 0).unwrap().entries, mat(&[&[1]]));
        assert!(moment_matrix(&t, 1).is_err());
    }

    #[test]
    fn example_probe_at_two() {
        let mu = AtomicMeasure2D::from_triples(&[(int(1), int(0), frac(1, 2)), (int(0), int(1), frac(1, 2))]).unwrap();
        let r = infdiv_probe(&measure_moments(&mu, 4), 2, 1).unwrap();
        assert_eq!(r.moments.get(2, 2), frac(-9, 256));
        assert!(!r.psd);
        assert_eq!(r.witness, Some(Witness::NegativeEvenMoment { m: 2, n: 2, value: frac(-9, 256) }));
        let r1 = infdiv_probe(&measure_moments(&mu, 4), 1, 1).unwrap();
        assert!(r1.psd);
        assert_eq!(r1.moments.get(2, 2), int(0));
    }
}
