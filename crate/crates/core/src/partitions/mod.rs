//! χ-maps, set partitions and the partition families NC, I, BNC, BI, ABI, BI*.
//!
//! Positions are 0-based in code; JSON and `Display` use 1-based indices.

pub(crate) mod kreweras;
mod lattice;

pub use kreweras::{kreweras, kreweras_nc};
pub use lattice::{mobius, nc_mobius};

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// Default largest n accepted by [`enumerate`].
pub const DEFAULT_BOUND: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Face {
    Left,
    Right,
}

/// Left/right designation of the positions of a word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChiMap {
    faces: Vec<Face>,
}

impl ChiMap {
    pub fn from_faces(faces: Vec<Face>) -> Result<Self> {
        if faces.is_empty() {
            return Err(Error::Invalid("a χ-map needs at least one position".into()));
        }
        Ok(ChiMap { faces })
    }

    /// Parses a string over `l`/`r` (case-insensitive).
    pub fn parse(s: &str) -> Result<Self> {
        let faces = s
            .trim()
            .chars()
            .map(|c| match c {
                'l' | 'L' => Ok(Face::Left),
                'r' | 'R' => Ok(Face::Right),
                other => Err(Error::Parse(format!("bad χ letter `{other}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        ChiMap::from_faces(faces)
    }

    pub fn constant(face: Face, n: usize) -> Self {
        assert!(n >= 1);
        ChiMap { faces: vec![face; n] }
    }

    /// m lefts followed by n rights.
    pub fn two_index(m: usize, n: usize) -> Self {
        assert!(m + n >= 1);
        let mut faces = vec![Face::Left; m];
        faces.extend(std::iter::repeat(Face::Right).take(n));
        ChiMap { faces }
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, i: usize) -> Face {
        self.faces[i]
    }

    /// s_χ as a 0-based list: lefts ascending, then rights descending.
    /// `order()[j]` is the j-th position in ≺_χ.
    pub fn order(&self) -> Vec<usize> {
        let n = self.len();
        let mut v: Vec<usize> = (0..n).filter(|&i| self.faces[i] == Face::Left).collect();
        v.extend((0..n).rev().filter(|&i| self.faces[i] == Face::Right));
        v
    }

    /// Inverse of [`order`](Self::order): rank of each position in ≺_χ.
    pub fn ranks(&self) -> Vec<usize> {
        let mut r = vec![0; self.len()];
        for (j, &i) in self.order().iter().enumerate() {
            r[i] = j;
        }
        r
    }

    /// χ restricted to the given positions (kept in increasing order).
    pub fn restrict(&self, positions: &[usize]) -> ChiMap {
        ChiMap { faces: positions.iter().map(|&i| self.faces[i]).collect() }
    }
}

impl fmt::Display for ChiMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for face in &self.faces {
            f.write_str(match face {
                Face::Left => "l",
                Face::Right => "r",
            })?;
        }
        Ok(())
    }
}

/// s_χ as a 0-based permutation (`s[j]` = j-th position in ≺_χ).
pub fn s_chi(chi: &ChiMap) -> Vec<usize> {
    chi.order()
}

/// Color of each position. Colors are small integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OmegaMap {
    colors: Vec<usize>,
}

impl OmegaMap {
    pub fn new(colors: Vec<usize>) -> Self {
        OmegaMap { colors }
    }

    /// Colors named by strings; equal strings share a color.
    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Self {
        let mut ids: Vec<String> = Vec::new();
        let colors = names
            .iter()
            .map(|s| {
                let s = s.as_ref();
                match ids.iter().position(|x| x == s) {
                    Some(i) => i,
                    None => {
                        ids.push(s.to_string());
                        ids.len() - 1
                    }
                }
            })
            .collect();
        OmegaMap { colors }
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn is_constant(&self) -> bool {
        self.colors.windows(2).all(|w| w[0] == w[1])
    }

    /// The partition into color classes.
    pub fn kernel(&self) -> Partition {
        Partition::from_labels(&self.colors)
    }
}

/// Set partition of {0..n} in canonical form: sorted blocks ordered by minimum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn from_blocks(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::Invalid("empty block".into()));
            }
            for &i in b {
                if i >= n || seen[i] {
                    return Err(Error::Invalid(format!("bad or repeated index {}", i + 1)));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Invalid("blocks do not cover every index".into()));
        }
        Ok(Self::canonical(n, blocks))
    }

    fn canonical(n: usize, mut blocks: Vec<Vec<usize>>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Partition { n, blocks }
    }

    /// Parses 1-based blocks, e.g. `[[1,4],[2],[3]]`; `n` is inferred.
    pub fn from_one_based(blocks: &[Vec<usize>]) -> Result<Self> {
        let n = blocks.iter().map(Vec::len).sum();
        let mut out = Vec::with_capacity(blocks.len());
        for b in blocks {
            let mut v = Vec::with_capacity(b.len());
            for &i in b {
                if i == 0 {
                    return Err(Error::Invalid("indices are 1-based".into()));
                }
                v.push(i - 1);
            }
            out.push(v);
        }
        Self::from_blocks(n, out)
    }

    pub fn to_one_based(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|b| b.iter().map(|i| i + 1).collect()).collect()
    }

    /// Positions with equal labels share a block.
    pub fn from_labels<T: Eq + std::hash::Hash + Clone>(labels: &[T]) -> Self {
        let mut index: HashMap<T, usize> = HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, l) in labels.iter().enumerate() {
            let k = *index.entry(l.clone()).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[k].push(i);
        }
        Self::canonical(labels.len(), blocks)
    }

    /// 0_n.
    pub fn singletons(n: usize) -> Self {
        Partition { n, blocks: (0..n).map(|i| vec![i]).collect() }
    }

    /// 1_n.
    pub fn full(n: usize) -> Self {
        Partition { n, blocks: vec![(0..n).collect()] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Block index of each position.
    pub fn labels(&self) -> Vec<usize> {
        let mut l = vec![0; self.n];
        for (k, b) in self.blocks.iter().enumerate() {
            for &i in b {
                l[i] = k;
            }
        }
        l
    }

    /// Refinement order: every block of `self` lies inside a block of `other`.
    pub fn leq(&self, other: &Partition) -> bool {
        if self.n != other.n {
            return false;
        }
        let lab = other.labels();
        self.blocks.iter().all(|b| b.iter().all(|&i| lab[i] == lab[b[0]]))
    }

    /// Relabels position i as `perm[i]`.
    pub fn transport(&self, perm: &[usize]) -> Partition {
        let blocks = self.blocks.iter().map(|b| b.iter().map(|&i| perm[i]).collect()).collect();
        Self::canonical(self.n, blocks)
    }

    /// Restriction to a sorted subset, renumbered 0..k in increasing order.
    pub fn restrict(&self, subset: &[usize]) -> Partition {
        let mut pos = vec![usize::MAX; self.n];
        for (k, &i) in subset.iter().enumerate() {
            pos[i] = k;
        }
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().filter(|&&i| pos[i] != usize::MAX).map(|&i| pos[i]).collect::<Vec<_>>())
            .filter(|b| !b.is_empty())
            .collect();
        Self::canonical(subset.len(), blocks)
    }

    pub fn is_noncrossing(&self) -> bool {
        let lab = self.labels();
        for a in 0..self.n {
            for b in a + 1..self.n {
                if lab[a] != lab[b] {
                    continue;
                }
                for c in a + 1..b {
                    if lab[c] == lab[a] {
                        continue;
                    }
                    if (b + 1..self.n).any(|d| lab[d] == lab[c]) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Every block is a run of consecutive integers.
    pub fn is_interval(&self) -> bool {
        self.blocks.iter().all(|b| b.windows(2).all(|w| w[1] == w[0] + 1))
    }

    pub fn has_singleton(&self) -> bool {
        self.blocks.iter().any(|b| b.len() == 1)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            let items: Vec<String> = b.iter().map(|i| (i + 1).to_string()).collect();
            write!(f, "{{{}}}", items.join(","))?;
        }
        f.write_str("}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PartitionFamily {
    /// Non-crossing partitions.
    Nc,
    /// Interval partitions.
    Interval,
    /// Bi-non-crossing partitions.
    Bnc,
    /// Bi-interval partitions.
    Bi,
    /// Almost bi-interval partitions.
    Abi,
    /// Bi-interval partitions without singletons.
    BiStar,
}

impl PartitionFamily {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_uppercase().as_str() {
            "NC" => PartitionFamily::Nc,
            "INT" | "I" | "INTERVAL" => PartitionFamily::Interval,
            "BNC" => PartitionFamily::Bnc,
            "BI" => PartitionFamily::Bi,
            "ABI" => PartitionFamily::Abi,
            "BI_STAR" | "BI*" | "BISTAR" => PartitionFamily::BiStar,
            other => return Err(Error::Parse(format!("unknown partition family `{other}`"))),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            PartitionFamily::Nc => "NC",
            PartitionFamily::Interval => "INT",
            PartitionFamily::Bnc => "BNC",
            PartitionFamily::Bi => "BI",
            PartitionFamily::Abi => "ABI",
            PartitionFamily::BiStar => "BI_STAR",
        }
    }

    /// Whether membership depends on χ.
    pub fn uses_chi(self) -> bool {
        !matches!(self, PartitionFamily::Nc | PartitionFamily::Interval)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BlockKind {
    Interior,
    Exterior,
}

/// Interior iff another block W has min_W ≺ min_V and max_V ≺ max_W in ≺_χ.
pub fn classify_blocks(chi: &ChiMap, pi: &Partition) -> Vec<BlockKind> {
    let rank = chi.ranks();
    let spans: Vec<(usize, usize)> = pi
        .blocks
        .iter()
        .map(|b| {
            let lo = b.iter().map(|&i| rank[i]).min().unwrap();
            let hi = b.iter().map(|&i| rank[i]).max().unwrap();
            (lo, hi)
        })
        .collect();
    spans
        .iter()
        .enumerate()
        .map(|(k, &(lo, hi))| {
            let inside = spans.iter().enumerate().any(|(j, &(wlo, whi))| j != k && wlo < lo && hi < whi);
            if inside {
                BlockKind::Interior
            } else {
                BlockKind::Exterior
            }
        })
        .collect()
}

/// Maximal ≺_χ-intervals on which ω is constant.
pub fn pi_omega_chi(chi: &ChiMap, omega: &OmegaMap) -> Result<Partition> {
    if chi.len() != omega.len() {
        return Err(Error::LengthMismatch(chi.len(), omega.len()));
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut last = None;
    for i in chi.order() {
        let c = omega.colors[i];
        if last == Some(c) {
            blocks.last_mut().unwrap().push(i);
        } else {
            blocks.push(vec![i]);
            last = Some(c);
        }
    }
    Ok(Partition::canonical(chi.len(), blocks))
}

/// Membership test, independent of the enumeration code.
pub fn is_member(family: PartitionFamily, chi: &ChiMap, pi: &Partition) -> bool {
    if pi.n != chi.len() {
        return false;
    }
    let moved = pi.transport(&chi.ranks());
    match family {
        PartitionFamily::Nc => pi.is_noncrossing(),
        PartitionFamily::Interval => pi.is_interval(),
        PartitionFamily::Bnc => moved.is_noncrossing(),
        PartitionFamily::Bi => moved.is_interval(),
        PartitionFamily::BiStar => moved.is_interval() && !pi.has_singleton(),
        PartitionFamily::Abi => {
            moved.is_noncrossing()
                && classify_blocks(chi, pi)
                    .iter()
                    .zip(&pi.blocks)
                    .all(|(k, b)| *k == BlockKind::Exterior || b.len() == 1)
        }
    }
}

/// Every member of the family on χ's positions, sorted canonically.
pub fn enumerate(family: PartitionFamily, chi: &ChiMap) -> Result<Vec<Partition>> {
    enumerate_bounded(family, chi, DEFAULT_BOUND)
}

pub fn enumerate_bounded(family: PartitionFamily, chi: &ChiMap, bound: usize) -> Result<Vec<Partition>> {
    if chi.len() > bound {
        return Err(Error::BoundExceeded(chi.len(), bound));
    }
    Ok(family_cached(family, chi).as_ref().clone())
}

type FamilyKey = (PartitionFamily, ChiMap);

/// Read-through cache of enumerations, shared across threads.
pub(crate) fn family_cached(family: PartitionFamily, chi: &ChiMap) -> Arc<Vec<Partition>> {
    static CACHE: OnceLock<Mutex<HashMap<FamilyKey, Arc<Vec<Partition>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = if family.uses_chi() { (family, chi.clone()) } else { (family, ChiMap::constant(Face::Left, chi.len())) };
    if let Some(v) = cache.lock().unwrap().get(&key) {
        return v.clone();
    }
    let v = Arc::new(generate(family, chi));
    cache.lock().unwrap().insert(key, v.clone());
    v
}

fn generate(family: PartitionFamily, chi: &ChiMap) -> Vec<Partition> {
    let n = chi.len();
    let order = chi.order();
    let base: Vec<Partition> = match family {
        PartitionFamily::Nc | PartitionFamily::Bnc | PartitionFamily::Abi => nc_all(n),
        PartitionFamily::Interval | PartitionFamily::Bi | PartitionFamily::BiStar => interval_all(n),
    };
    let mut out: Vec<Partition> = match family {
        PartitionFamily::Nc | PartitionFamily::Interval => base,
        PartitionFamily::Bnc | PartitionFamily::Bi => base.iter().map(|p| p.transport(&order)).collect(),
        PartitionFamily::BiStar => base.iter().filter(|p| !p.has_singleton()).map(|p| p.transport(&order)).collect(),
        PartitionFamily::Abi => {
            let line = ChiMap::constant(Face::Left, n);
            base.iter()
                .filter(|p| {
                    classify_blocks(&line, p)
                        .iter()
                        .zip(&p.blocks)
                        .all(|(k, b)| *k == BlockKind::Exterior || b.len() == 1)
                })
                .map(|p| p.transport(&order))
                .collect()
        }
    };
    out.sort();
    out
}

/// Non-crossing partitions of {0..n}: choose the block of the first point, then
/// fill each gap independently.
fn nc_all(n: usize) -> Vec<Partition> {
    let points: Vec<usize> = (0..n).collect();
    nc_on(&points).into_iter().map(|blocks| Partition::canonical(n, blocks)).collect()
}

fn nc_on(points: &[usize]) -> Vec<Vec<Vec<usize>>> {
    if points.is_empty() {
        return vec![vec![]];
    }
    let rest = &points[1..];
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << rest.len()) {
        let mut block = vec![points[0]];
        let mut gaps: Vec<&[usize]> = Vec::new();
        let mut start = 0;
        for (k, &p) in rest.iter().enumerate() {
            if mask & (1 << k) != 0 {
                block.push(p);
                gaps.push(&rest[start..k]);
                start = k + 1;
            }
        }
        gaps.push(&rest[start..]);
        let mut acc: Vec<Vec<Vec<usize>>> = vec![vec![block]];
        for gap in gaps {
            let fills = nc_on(gap);
            let mut next = Vec::with_capacity(acc.len() * fills.len());
            for a in &acc {
                for f in &fills {
                    let mut v = a.clone();
                    v.extend(f.iter().cloned());
                    next.push(v);
                }
            }
            acc = next;
        }
        out.extend(acc);
    }
    out
}

/// Interval partitions: one per subset of the n-1 cut points.
fn interval_all(n: usize) -> Vec<Partition> {
    let mut out = Vec::with_capacity(1 << (n - 1));
    for mask in 0u32..(1u32 << (n - 1)) {
        let mut blocks = vec![vec![0]];
        for i in 1..n {
            if mask & (1 << (i - 1)) != 0 {
                blocks.push(vec![i]);
            } else {
                blocks.last_mut().unwrap().push(i);
            }
        }
        out.push(Partition::canonical(n, blocks));
    }
    out
}
