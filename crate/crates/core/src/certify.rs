//! Interval-hitting certification and character-sum checks.
//!
//! `d` is *good* for `(n, g)` when every coset of every subgroup of
//! `(Z/dZ)^x` of index `<= 2g` has an element `b` with `0 < b < d/n`. For a
//! good `d` a small factor of the new part would force some `V_b != 0` with
//! `b < d/n`, which the eigenspace formula rules out.

use alloc::collections::BTreeSet;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::time::Duration;

use num_complex::Complex64;

use crate::arith::{euler_phi, gcd, Rational};
use crate::error::Error;
use crate::unit_group::{
    dual_subgroups, enumerate_subgroups, unit_group_structure, Coset, KernelTest, Subgroup,
    MATERIALIZE_LIMIT,
};

/// Absolute slack on the character-sum inequality.
pub const WEYL_TOLERANCE: f64 = 1e-9;

/// A coset lying entirely in `[d/n, d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Violation {
    pub d: u64,
    pub subgroup_generators: Vec<u64>,
    pub subgroup_index: u64,
    /// Smallest element of the failing coset.
    pub coset_representative: u64,
    pub interval_bound: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CertReport {
    pub d: u64,
    pub n: u64,
    pub g: u64,
    pub violations: Vec<Violation>,
    pub subgroups_checked: u64,
    /// Wall time; left at zero by this crate, filled in by timed callers.
    #[cfg_attr(feature = "serde", serde(default))]
    pub elapsed: Duration,
}

impl CertReport {
    pub fn is_good(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Whether `b * n < d`, i.e. `b` lies in the open interval `(0, d/n)`.
#[inline]
fn below_bound(b: u64, d: u64, n: u64) -> bool {
    b > 0 && (b as u128) * (n as u128) < d as u128
}

/// True iff some element of the coset lies strictly inside `(0, d/n)`.
pub fn coset_hits_interval(coset: &Coset, d: u64, n: u64) -> bool {
    coset.elements.iter().any(|&b| below_bound(b % d, d, n))
}

/// Reduced logs of the units below `d/n`, computed on demand and shared by
/// all subgroups of one modulus.
struct LogCache<'a> {
    group: &'a crate::unit_group::UnitGroupStructure,
    moduli: &'a [u64],
    entries: Vec<(u64, Vec<u64>)>,
    next: u64,
    limit: u64,
}

impl LogCache<'_> {
    fn get(&mut self, i: usize) -> Option<&(u64, Vec<u64>)> {
        while self.entries.len() <= i {
            let d = self.group.modulus();
            let b = (self.next..=self.limit).find(|&b| gcd(b, d) == 1)?;
            self.next = b + 1;
            self.entries
                .push((b, self.group.reduced_log(b, self.moduli)));
        }
        self.entries.get(i)
    }
}

/// Check every coset of every subgroup of index `<= 2g` against `(0, d/n)`.
pub fn certify_d(d: u64, n: u64, g: u64) -> CertReport {
    assert!(n >= 1 && d > n, "certify requires d > n >= 1");
    assert!(g >= 1, "certify requires g >= 1");
    let max_index = 2 * g;
    let group = Arc::new(unit_group_structure(d));
    let (torsion, duals) = dual_subgroups(&group, max_index);
    let last_inside = (d - 1) / n;
    let mut cache = LogCache {
        group: &group,
        moduli: &torsion.moduli,
        entries: Vec::new(),
        next: 1,
        limit: last_inside,
    };
    let mut violations = Vec::new();
    for dual in &duals {
        let kernel = KernelTest::new(&torsion, dual);
        let cosets = dual.elements.len();
        let mut hit = BTreeSet::new();
        let mut i = 0;
        while hit.len() < cosets {
            let Some((_, logs)) = cache.get(i) else { break };
            hit.insert(kernel.label_of_logs(logs));
            i += 1;
        }
        if hit.len() == cosets {
            continue;
        }
        let subgroup = Subgroup::from_dual(group.clone(), &torsion, dual, d <= MATERIALIZE_LIMIT);
        let mut missing = cosets - hit.len();
        for b in last_inside + 1..d {
            if missing == 0 {
                break;
            }
            if gcd(b, d) != 1 {
                continue;
            }
            if hit.insert(kernel.label(&group, b)) {
                missing -= 1;
                violations.push(Violation {
                    d,
                    subgroup_generators: subgroup.generators().to_vec(),
                    subgroup_index: subgroup.index(),
                    coset_representative: b,
                    interval_bound: Rational::new(d as i64, n as i64),
                });
            }
        }
    }
    violations.sort_by(|a, b| {
        (
            a.subgroup_index,
            &a.subgroup_generators,
            a.coset_representative,
        )
            .cmp(&(
                b.subgroup_index,
                &b.subgroup_generators,
                b.coset_representative,
            ))
    });
    CertReport {
        d,
        n,
        g,
        violations,
        subgroups_checked: duals.len() as u64,
        elapsed: Duration::ZERO,
    }
}

/// Neumaier-compensated complex accumulator.
#[derive(Default)]
struct CompensatedSum {
    sum: Complex64,
    carry: Complex64,
}

fn two_sum(sum: &mut f64, carry: &mut f64, x: f64) {
    let t = *sum + x;
    if libm::fabs(*sum) >= libm::fabs(x) {
        *carry += (*sum - t) + x;
    } else {
        *carry += (x - t) + *sum;
    }
    *sum = t;
}

impl CompensatedSum {
    fn add(&mut self, z: Complex64) {
        two_sum(&mut self.sum.re, &mut self.carry.re, z.re);
        two_sum(&mut self.sum.im, &mut self.carry.im, z.im);
    }

    fn value(&self) -> Complex64 {
        self.sum + self.carry
    }
}

/// `exp(2 pi i k / d)` with `k` reduced mod `d` first so the angle stays small.
fn root_of_unity(k: u64, d: u64) -> Complex64 {
    let angle = 2.0 * core::f64::consts::PI * ((k % d) as f64) / d as f64;
    Complex64::new(libm::cos(angle), libm::sin(angle))
}

/// `(1/|H|) sum_{b in H} exp(2 pi i a b / d)`.
pub fn weyl_sum(h: &Subgroup, a: u64) -> Complex64 {
    assert!(a >= 1, "weyl_sum requires a >= 1");
    let d = h.modulus();
    let mut acc = CompensatedSum::default();
    for b in h.iter_elements() {
        acc.add(root_of_unity(
            ((a % d) as u128 * b as u128 % d as u128) as u64,
            d,
        ));
    }
    acc.value() / h.order() as f64
}

/// `(index / phi(d)) * sqrt(a d)`.
pub fn weyl_bound(d: u64, index: u64, a: u64) -> f64 {
    assert!(d >= 2 && a >= 1);
    index as f64 / euler_phi(d) as f64 * libm::sqrt(a as f64 * d as f64)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WeylRow {
    pub subgroup_generators: Vec<u64>,
    pub subgroup_index: u64,
    pub a: u64,
    pub magnitude: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WeylReport {
    pub d: u64,
    pub g: u64,
    pub a_max: u64,
    pub rows: Vec<WeylRow>,
    /// Largest `|sum| / bound` seen.
    pub worst_ratio: f64,
}

/// Check `|weyl_sum(H, a)| <= weyl_bound(d, [G:H], a) + 1e-9` for every
/// subgroup of index `<= 2g` and every `1 <= a <= a_max`.
///
/// On success the full table is returned; the first failing row becomes a
/// `BoundViolation`.
pub fn verify_weyl(d: u64, g: u64, a_max: u64) -> Result<WeylReport, Error> {
    if d < 2 || g < 1 || a_max < 1 {
        return Err(Error::InvalidArgument(
            "verify_weyl requires d >= 2, g >= 1, a_max >= 1",
        ));
    }
    // one cos/sin table per modulus
    let table: Vec<Complex64> = (0..d).map(|k| root_of_unity(k, d)).collect();
    let mut rows = Vec::new();
    let mut worst_ratio = 0.0f64;
    for h in enumerate_subgroups(d, 2 * g) {
        let elements: Vec<u64> = h.iter_elements().collect();
        for a in 1..=a_max {
            let mut acc = CompensatedSum::default();
            for &b in &elements {
                acc.add(table[((a % d) as u128 * b as u128 % d as u128) as usize]);
            }
            let magnitude = (acc.value() / elements.len() as f64).norm();
            let bound = weyl_bound(d, h.index(), a);
            worst_ratio = worst_ratio.max(magnitude / bound);
            if magnitude > bound + WEYL_TOLERANCE {
                return Err(Error::BoundViolation {
                    d,
                    generators: h.generators().to_vec(),
                    a,
                    magnitude,
                    bound,
                });
            }
            rows.push(WeylRow {
                subgroup_generators: h.generators().to_vec(),
                subgroup_index: h.index(),
                a,
                magnitude,
                bound,
            });
        }
    }
    Ok(WeylReport {
        d,
        g,
        a_max,
        rows,
        worst_ratio,
    })
}
