use super::{is_member, ChiMap, Partition, PartitionFamily};
use crate::error::{Error, Result};

/// Kreweras complement in NC(n): the cycles of π⁻¹∘γ with γ = (1 2 … n),
/// where each block of π is read as an increasing cycle.
pub fn kreweras_nc(pi: &Partition) -> Partition {
    let n = pi.n();
    let mut inv = vec![0; n];
    for b in pi.blocks() {
        for k in 0..b.len() {
            inv[b[(k + 1) % b.len()]] = b[k];
        }
    }
    let k: Vec<usize> = (0..n).map(|i| inv[(i + 1) % n]).collect();
    let mut seen = vec![false; n];
    let mut blocks = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cyc.push(i);
            i = k[i];
        }
        blocks.push(cyc);
    }
    Partition::from_blocks(n, blocks).expect("cycles partition the points")
}

/// Bi-non-crossing Kreweras complement, optionally relative to ρ ≥ π
/// (complement taken inside each block of ρ).
pub fn kreweras(chi: &ChiMap, pi: &Partition, rho: Option<&Partition>) -> Result<Partition> {
    if !is_member(PartitionFamily::Bnc, chi, pi) {
        return Err(Error::NotMember(format!("{pi} in BNC({chi})")));
    }
    let Some(rho) = rho else {
        return Ok(kreweras_bnc(chi, pi));
    };
    if !is_member(PartitionFamily::Bnc, chi, rho) {
        return Err(Error::NotMember(format!("{rho} in BNC({chi})")));
    }
    if !pi.leq(rho) {
        return Err(Error::NotRefinement(pi.to_string(), rho.to_string()));
    }
    let mut blocks = Vec::new();
    for v in rho.blocks() {
        let local = kreweras_bnc(&chi.restrict(v), &pi.restrict(v));
        for b in local.blocks() {
            blocks.push(b.iter().map(|&i| v[i]).collect());
        }
    }
    Partition::from_blocks(pi.n(), blocks)
}

pub(crate) fn kreweras_bnc(chi: &ChiMap, pi: &Partition) -> Partition {
    kreweras_nc(&pi.transport(&chi.ranks())).transport(&chi.order())
}
