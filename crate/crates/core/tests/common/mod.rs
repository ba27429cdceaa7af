#![allow(dead_code)]

use std::collections::BTreeSet;

use superjac_core::CurveShape;

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn units(d: u64) -> Vec<u64> {
    (1..d.max(2)).filter(|&b| gcd(b, d) == 1).collect()
}

/// Subgroup generated by `seed`, by repeated multiplication with the seeds.
pub fn close(d: u64, seed: &BTreeSet<u64>) -> BTreeSet<u64> {
    let one = 1 % d;
    let mut set: BTreeSet<u64> = [one].into_iter().collect();
    let mut frontier = vec![one];
    while let Some(x) = frontier.pop() {
        for &s in seed {
            let y = x * s % d;
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    set
}

/// `S * <x>` for a subgroup `S`.
fn adjoin(d: u64, s: &BTreeSet<u64>, x: u64) -> BTreeSet<u64> {
    let mut out = s.clone();
    let mut power = x;
    while !s.contains(&power) {
        out.extend(s.iter().map(|&h| h * power % d));
        power = power * x % d;
    }
    out
}

/// Every subgroup of `(Z/dZ)^x`, found by adjoining one element at a time.
pub fn all_subgroups(d: u64) -> BTreeSet<Vec<u64>> {
    let us = units(d);
    let start: BTreeSet<u64> = [1 % d.max(2)].into_iter().collect();
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut queue = vec![start.clone()];
    seen.insert(start.into_iter().collect());
    while let Some(s) = queue.pop() {
        for &x in &us {
            if s.contains(&x) {
                continue;
            }
            let next = adjoin(d, &s, x);
            if seen.insert(next.iter().copied().collect()) {
                queue.push(next);
            }
        }
    }
    seen
}

/// Cosets of the explicit subgroup `h`, each sorted, ordered by minimum.
pub fn brute_cosets(d: u64, h: &[u64]) -> Vec<Vec<u64>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for a in units(d) {
        if seen.contains(&a) {
            continue;
        }
        let mut c: Vec<u64> = h.iter().map(|&x| a * x % d).collect();
        c.sort_unstable();
        seen.extend(c.iter().copied());
        out.push(c);
    }
    out
}

fn partitions(total: u64, max_part: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if total == 0 {
        out.push(prefix.clone());
        return;
    }
    for part in (1..=max_part.min(total)).rev() {
        prefix.push(part);
        partitions(total - part, part, prefix, out);
        prefix.pop();
    }
}

/// Every branch datum with `n <= max_n`: all `e | n` and all partitions of
/// `n / e` into root multiplicities with gcd 1.
pub fn shapes_up_to(max_n: u64) -> Vec<CurveShape> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for e in (1..=n).filter(|e| n % e == 0) {
            let mut parts = Vec::new();
            partitions(n / e, n / e, &mut Vec::new(), &mut parts);
            for p in parts {
                if p.iter().copied().fold(0, gcd) == 1 {
                    out.push(CurveShape::new(n, e, p).expect("valid shape"));
                }
            }
        }
    }
    out
}
