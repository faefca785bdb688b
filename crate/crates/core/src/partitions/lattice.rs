use super::{family_cached, is_member, ChiMap, Face, Partition, PartitionFamily};
use crate::error::{Error, Result};
use crate::rational::{int, Rational};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Möbius function of the BI, BNC, NC or I lattice on the interval [σ, π].
pub fn mobius(family: PartitionFamily, chi: &ChiMap, sigma: &Partition, pi: &Partition) -> Result<Rational> {
    for x in [sigma, pi] {
        if !is_member(family, chi, x) {
            return Err(Error::NotMember(format!("{x} in {}", family.name())));
        }
    }
    if !sigma.leq(pi) {
        return Err(Error::NotRefinement(sigma.to_string(), pi.to_string()));
    }
    match family {
        PartitionFamily::Bi | PartitionFamily::Interval => {
            let diff = sigma.num_blocks() - pi.num_blocks();
            Ok(int(if diff % 2 == 0 { 1 } else { -1 }))
        }
        PartitionFamily::Bnc => {
            let r = chi.ranks();
            Ok(int(nc_mobius(&sigma.transport(&r), &pi.transport(&r))))
        }
        PartitionFamily::Nc => Ok(int(nc_mobius(sigma, pi))),
        PartitionFamily::Abi | PartitionFamily::BiStar => {
            Err(Error::Invalid(format!("{} is not a lattice", family.name())))
        }
    }
}

type Row = Arc<HashMap<Partition, i64>>;

/// μ_NC(σ, π) by ζ-inversion over the up-set of σ; rows are memoized per σ.
/// Returns 0 when σ is not below π.
pub fn nc_mobius(sigma: &Partition, pi: &Partition) -> i64 {
    static ROWS: OnceLock<Mutex<HashMap<Partition, Row>>> = OnceLock::new();
    let rows = ROWS.get_or_init(Default::default);
    let cached = rows.lock().unwrap().get(sigma).cloned();
    let row = match cached {
        Some(r) => r,
        None => {
            let r = Arc::new(mobius_row(sigma));
            rows.lock().unwrap().insert(sigma.clone(), r.clone());
            r
        }
    };
    row.get(pi).copied().unwrap_or(0)
}

fn mobius_row(sigma: &Partition) -> HashMap<Partition, i64> {
    let n = sigma.n();
    let all = family_cached(PartitionFamily::Nc, &ChiMap::constant(Face::Left, n));
    let mut up: Vec<&Partition> = all.iter().filter(|t| sigma.leq(t)).collect();
    // Finer partitions first, so every strict lower bound is already known.
    up.sort_by_key(|t| std::cmp::Reverse(t.num_blocks()));
    let mut mu: Vec<i64> = Vec::with_capacity(up.len());
    for (k, t) in up.iter().enumerate() {
        if *t == sigma {
            mu.push(1);
            continue;
        }
        let s: i64 = (0..k).filter(|&j| up[j] != *t && up[j].leq(t)).map(|j| mu[j]).sum();
        mu.push(-s);
    }
    up.into_iter().cloned().zip(mu).collect()
}
