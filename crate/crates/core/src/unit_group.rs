//! Structure of `G_d = (Z/dZ)^x` and its subgroups of bounded index.
//!
//! `G_d` is split by CRT into prime-power components. Odd components and
//! `(Z/4Z)^x` are cyclic with a primitive root; `(Z/2^kZ)^x` for `k >= 3` is
//! `<-1> x <5>`. Each local generator is lifted to a residue mod `d` that is
//! `1` at every other component.
//!
//! Subgroups of index `<= k` are enumerated on the dual side: they are exactly
//! the annihilators of the subgroups of order `<= k` of the character group,
//! and every such character has order dividing `E = lcm(1..=k)`. So the search
//! runs inside the `E`-torsion of the dual, `T = prod Z/gcd(m_i, E)`, which is
//! tiny next to `G_d` itself. A character `c in T` pairs with `b` through the
//! reduced discrete logarithm `s_i = log_i(b) mod t_i`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::arith::{self, gcd, lcm, mul_mod, pow_mod, Rational};

/// Above this modulus subgroups are not materialized as element lists;
/// membership goes through character values instead.
pub const MATERIALIZE_LIMIT: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CyclicFactor {
    pub generator: u64,
    pub order: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum LocalKind {
    /// Cyclic with the given local generator mod `p^k`.
    Cyclic { root: u64 },
    /// `(Z/2^kZ)^x = <-1> x <5>` for `k >= 3`; two consecutive factors.
    TwoPower,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Component {
    prime_power: u64,
    kind: LocalKind,
    /// Index of this component's first entry in `factors`.
    first_factor: usize,
}

/// `(Z/dZ)^x` as a product of cyclic factors with explicit generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitGroupStructure {
    modulus: u64,
    order: u64,
    factors: Vec<CyclicFactor>,
    components: Vec<Component>,
}

/// CRT lift of `a mod q` to a residue mod `d` that is `1` modulo `d/q`.
fn crt_lift(a: u64, q: u64, d: u64) -> u64 {
    let rest = d / q;
    if rest == 1 {
        return a % q;
    }
    let inv = arith::inv_mod(rest % q, q).expect("CRT components are coprime");
    let t = mul_mod((a + q - 1) % q, inv, q);
    (1 + mul_mod(rest, t, d)) % d
}

pub fn unit_group_structure(d: u64) -> UnitGroupStructure {
    assert!(d >= 2, "unit group requires d >= 2");
    let fact = arith::factorize(d);
    let mut factors = Vec::new();
    let mut components = Vec::new();
    for (p, k, q) in fact.prime_powers() {
        let first_factor = factors.len();
        if p == 2 {
            match k {
                1 => continue,
                2 => {
                    factors.push(CyclicFactor {
                        generator: crt_lift(3, 4, d),
                        order: 2,
                    });
                    components.push(Component {
                        prime_power: 4,
                        kind: LocalKind::Cyclic { root: 3 },
                        first_factor,
                    });
                }
                _ => {
                    factors.push(CyclicFactor {
                        generator: crt_lift(q - 1, q, d),
                        order: 2,
                    });
                    factors.push(CyclicFactor {
                        generator: crt_lift(5, q, d),
                        order: q / 4,
                    });
                    components.push(Component {
                        prime_power: q,
                        kind: LocalKind::TwoPower,
                        first_factor,
                    });
                }
            }
        } else {
            let root = arith::primitive_root_prime_power(p, k);
            factors.push(CyclicFactor {
                generator: crt_lift(root, q, d),
                order: (p - 1) * (q / p),
            });
            components.push(Component {
                prime_power: q,
                kind: LocalKind::Cyclic { root },
                first_factor,
            });
        }
    }
    UnitGroupStructure {
        modulus: d,
        order: arith::phi_of(&fact),
        factors,
        components,
    }
}

/// Solve `h^s = x` for `s` in `[0, t)` where `h` has order `t` mod `q`.
fn small_log(h: u64, x: u64, t: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    for s in 0..t {
        if acc == x {
            return s;
        }
        acc = mul_mod(acc, h, q);
    }
    unreachable!("element outside the cyclic subgroup of order {t}")
}

fn cyclic_reduced_log(root: u64, order: u64, b: u64, t: u64, q: u64) -> u64 {
    if t == 1 {
        return 0;
    }
    let cofactor = order / t;
    small_log(pow_mod(root, cofactor, q), pow_mod(b, cofactor, q), t, q)
}

impl UnitGroupStructure {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `|G_d| = phi(d)`.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn factors(&self) -> &[CyclicFactor] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_unit(&self, b: u64) -> bool {
        gcd(b % self.modulus, self.modulus) == 1
    }

    /// Units `1 <= b < d` in increasing order (`{1}` for `d = 2`).
    pub fn units(&self) -> impl Iterator<Item = u64> + '_ {
        (1..self.modulus).filter(move |&b| gcd(b, self.modulus) == 1)
    }

    /// `prod generator_i^{k_i} mod d`.
    pub fn element(&self, exponents: &[u64]) -> u64 {
        assert_eq!(exponents.len(), self.factors.len());
        self.factors
            .iter()
            .zip(exponents)
            .fold(1 % self.modulus, |acc, (f, &k)| {
                mul_mod(acc, pow_mod(f.generator, k, self.modulus), self.modulus)
            })
    }

    /// Exponent of the largest torsion quotient we will need for subgroups of
    /// index `<= max_index`, per factor: `gcd(order_i, lcm(1..=max_index))`.
    fn torsion_moduli(&self, max_index: u64) -> Vec<u64> {
        let exponent = (1..=max_index).fold(1u64, lcm);
        self.factors
            .iter()
            .map(|f| gcd(f.order, exponent))
            .collect()
    }

    /// Discrete logarithm of the unit `b` reduced modulo `moduli[i]` in each
    /// factor. Each `moduli[i]` must divide the factor's order.
    pub fn reduced_log(&self, b: u64, moduli: &[u64]) -> Vec<u64> {
        debug_assert!(self.is_unit(b));
        let mut out = vec![0u64; self.factors.len()];
        for c in &self.components {
            let q = c.prime_power;
            let local = b % q;
            let i = c.first_factor;
            match c.kind {
                LocalKind::Cyclic { root } => {
                    out[i] = cyclic_reduced_log(root, self.factors[i].order, local, moduli[i], q);
                }
                LocalKind::TwoPower => {
                    let negative = local % 4 == 3;
                    out[i] = u64::from(negative) % moduli[i];
                    let positive = if negative { q - local } else { local };
                    out[i + 1] = cyclic_reduced_log(
                        5,
                        self.factors[i + 1].order,
                        positive,
                        moduli[i + 1],
                        q,
                    );
                }
            }
        }
        out
    }

    /// Full discrete logarithm with respect to the factor generators.
    pub fn log(&self, b: u64) -> Vec<u64> {
        let orders: Vec<u64> = self.factors.iter().map(|f| f.order).collect();
        self.reduced_log(b, &orders)
    }
}

/// Mixed-radix group `prod Z/t_i`, elements encoded as a single `u64`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Torsion {
    pub(crate) moduli: Vec<u64>,
    /// `lcm` of the moduli; pairings take values in `Z/lcm`.
    pub(crate) exponent: u64,
}

impl Torsion {
    fn new(moduli: Vec<u64>) -> Self {
        let exponent = moduli.iter().copied().fold(1, lcm);
        Torsion { moduli, exponent }
    }

    fn encode(&self, v: &[u64]) -> u64 {
        v.iter()
            .zip(&self.moduli)
            .rev()
            .fold(0u64, |acc, (&x, &m)| acc * m + x)
    }

    fn decode(&self, mut code: u64) -> Vec<u64> {
        self.moduli
            .iter()
            .map(|&m| {
                let x = code % m;
                code /= m;
                x
            })
            .collect()
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        let (va, vb) = (self.decode(a), self.decode(b));
        let sum: Vec<u64> = va
            .iter()
            .zip(&vb)
            .zip(&self.moduli)
            .map(|((x, y), m)| (x + y) % m)
            .collect();
        self.encode(&sum)
    }

    fn element_order(&self, code: u64) -> u64 {
        self.decode(code)
            .iter()
            .zip(&self.moduli)
            .map(|(&c, &m)| m / gcd(c, m))
            .fold(1, lcm)
    }

    /// Pairing `sum c_i s_i / t_i` as a numerator over `self.exponent`.
    pub(crate) fn pairing(&self, character: &[u64], logs: &[u64]) -> u64 {
        let l = self.exponent;
        character
            .iter()
            .zip(logs)
            .zip(&self.moduli)
            .fold(0u64, |acc, ((&c, &s), &m)| {
                (acc + mul_mod(c * (l / m), s, l)) % l
            })
    }

    /// Encoded elements whose order is at most `bound`, sorted.
    fn small_elements(&self, bound: u64) -> Vec<u64> {
        let mut set = BTreeSet::new();
        for j in 1..=bound {
            // j-torsion: c_i ranges over multiples of t_i / gcd(t_i, j)
            let steps: Vec<u64> = self.moduli.iter().map(|&m| m / gcd(m, j)).collect();
            let counts: Vec<u64> = self.moduli.iter().map(|&m| gcd(m, j)).collect();
            let mut idx = vec![0u64; self.moduli.len()];
            loop {
                let v: Vec<u64> = idx.iter().zip(&steps).map(|(i, s)| i * s).collect();
                set.insert(self.encode(&v));
                let mut pos = 0;
                loop {
                    if pos == idx.len() {
                        break;
                    }
                    idx[pos] += 1;
                    if idx[pos] < counts[pos] {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
                if pos == idx.len() {
                    break;
                }
            }
        }
        set.into_iter().collect()
    }

    /// `<base, x>` as a sorted element list, or `None` once it exceeds `bound`.
    fn extend(&self, base: &[u64], x: u64, bound: usize) -> Option<Vec<u64>> {
        let mut set: BTreeSet<u64> = base.iter().copied().collect();
        let mut frontier: Vec<u64> = base.to_vec();
        loop {
            let next: Vec<u64> = frontier
                .iter()
                .map(|&s| self.add(s, x))
                .filter(|s| !set.contains(s))
                .collect();
            if next.is_empty() {
                break;
            }
            for s in &next {
                set.insert(*s);
            }
            if set.len() > bound {
                return None;
            }
            frontier = next;
        }
        Some(set.into_iter().collect())
    }
}

/// A subgroup of the character group inside the torsion `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct DualSubgroup {
    /// Sorted encoded elements.
    pub(crate) elements: Vec<u64>,
    /// Encoded generators in discovery order.
    pub(crate) generators: Vec<u64>,
}

/// All subgroups of order `<= max_index` of the character group, i.e. the
/// duals of the subgroups of `G_d` of index `<= max_index`.
pub(crate) fn dual_subgroups(
    group: &UnitGroupStructure,
    max_index: u64,
) -> (Torsion, Vec<DualSubgroup>) {
    let torsion = Torsion::new(group.torsion_moduli(max_index));
    let small = torsion.small_elements(max_index);
    let bound = max_index as usize;
    let mut seen: BTreeMap<Vec<u64>, Vec<u64>> = BTreeMap::new();
    let mut queue: Vec<Vec<u64>> = vec![vec![0]];
    seen.insert(vec![0], Vec::new());
    while let Some(current) = queue.pop() {
        let gens = seen[&current].clone();
        for &x in &small {
            if current.binary_search(&x).is_ok() {
                continue;
            }
            if let Some(next) = torsion.extend(&current, x, bound) {
                if !seen.contains_key(&next) {
                    let mut next_gens = gens.clone();
                    next_gens.push(x);
                    seen.insert(next.clone(), next_gens);
                    queue.push(next);
                }
            }
        }
    }
    let duals = seen
        .into_iter()
        .map(|(elements, generators)| DualSubgroup {
            elements,
            generators,
        })
        .collect();
    (torsion, duals)
}

/// Pairing data deciding membership and coset labels for one subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct KernelTest {
    pub(crate) torsion: Torsion,
    /// Generators of the annihilating characters, decoded.
    pub(crate) characters: Vec<Vec<u64>>,
}

impl KernelTest {
    pub(crate) fn new(torsion: &Torsion, dual: &DualSubgroup) -> Self {
        KernelTest {
            torsion: torsion.clone(),
            characters: dual.generators.iter().map(|&c| torsion.decode(c)).collect(),
        }
    }

    /// Coset label from reduced logs: pairings with each generating character,
    /// packed in base `exponent`.
    pub(crate) fn label_of_logs(&self, logs: &[u64]) -> u64 {
        let l = self.torsion.exponent;
        self.characters
            .iter()
            .fold(0u64, |acc, c| acc * l + self.torsion.pairing(c, logs))
    }

    pub(crate) fn label(&self, group: &UnitGroupStructure, b: u64) -> u64 {
        self.label_of_logs(&group.reduced_log(b, &self.torsion.moduli))
    }
}

/// A subgroup `H` of `(Z/dZ)^x`, described as the common kernel of a group
/// of characters and, for `d <= MATERIALIZE_LIMIT`, by its element list.
#[derive(Debug, Clone)]
pub struct Subgroup {
    group: Arc<UnitGroupStructure>,
    kernel: KernelTest,
    /// All annihilating characters, encoded in the kernel's torsion.
    dual_elements: Vec<u64>,
    index: u64,
    generators: Vec<u64>,
    elements: Option<Vec<u64>>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.group.modulus == other.group.modulus
            && self.index == other.index
            && match (&self.elements, &other.elements) {
                (Some(a), Some(b)) => a == b,
                _ => self.iter_elements().eq(other.iter_elements()),
            }
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    pub(crate) fn from_dual(
        group: Arc<UnitGroupStructure>,
        torsion: &Torsion,
        dual: &DualSubgroup,
        materialize: bool,
    ) -> Self {
        let kernel = KernelTest::new(torsion, dual);
        let index = dual.elements.len() as u64;
        let mut sub = Subgroup {
            group,
            kernel,
            dual_elements: dual.elements.clone(),
            index,
            generators: Vec::new(),
            elements: None,
        };
        if materialize {
            let elements: Vec<u64> = sub.group.units().filter(|&b| sub.contains(b)).collect();
            sub.generators = greedy_generators(sub.group.modulus, &elements);
            sub.elements = Some(elements);
        } else {
            sub.generators = sub.lattice_generators();
        }
        sub
    }

    /// Generators without an element list: the `t_i`-th powers of the factor
    /// generators, plus lifts of a generating set of the kernel inside `T`.
    fn lattice_generators(&self) -> Vec<u64> {
        let group = &self.group;
        let moduli = &self.kernel.torsion.moduli;
        let mut gens = BTreeSet::new();
        for (f, &t) in group.factors.iter().zip(moduli) {
            if t < f.order {
                gens.insert(pow_mod(f.generator, t, group.modulus));
            }
        }
        let size: u64 = moduli.iter().product();
        let kernel_t: Vec<u64> = (0..size)
            .filter(|&code| self.kernel.label_of_logs(&self.kernel.torsion.decode(code)) == 0)
            .collect();
        let mut span = vec![0u64];
        for &code in &kernel_t {
            if span.binary_search(&code).is_err() {
                span = self
                    .kernel
                    .torsion
                    .extend(&span, code, usize::MAX)
                    .expect("unbounded extension");
                gens.insert(group.element(&self.kernel.torsion.decode(code)));
            }
        }
        gens.remove(&1);
        gens.into_iter().collect()
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    pub fn group(&self) -> &UnitGroupStructure {
        &self.group
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn order(&self) -> u64 {
        self.group.order / self.index
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    /// Sorted element list when materialized.
    pub fn elements(&self) -> Option<&[u64]> {
        self.elements.as_deref()
    }

    pub fn contains(&self, b: u64) -> bool {
        let b = b % self.group.modulus;
        self.group.is_unit(b) && self.kernel.label(&self.group, b) == 0
    }

    /// Elements in increasing order, from the stored list or by scanning.
    pub fn iter_elements(&self) -> impl Iterator<Item = u64> + '_ {
        let stored = self.elements.as_deref();
        let scan = stored
            .is_none()
            .then(|| self.group.units().filter(move |&b| self.contains(b)));
        stored
            .into_iter()
            .flatten()
            .copied()
            .chain(scan.into_iter().flatten())
    }

    /// Label identifying the coset of `b`; two units share a coset iff their
    /// labels agree. `H` itself has label `0`.
    pub fn coset_label(&self, b: u64) -> u64 {
        self.kernel.label(&self.group, b % self.group.modulus)
    }

    fn sort_key(&self) -> (u64, &[u64]) {
        (
            self.index,
            self.elements.as_deref().unwrap_or(&self.dual_elements),
        )
    }
}

/// Smallest-first generating set of a materialized subgroup.
fn greedy_generators(d: u64, elements: &[u64]) -> Vec<u64> {
    let mut in_span = vec![false; d as usize];
    let mut span = vec![1u64];
    in_span[1 % d as usize] = true;
    let mut gens = Vec::new();
    for &b in elements {
        if in_span[b as usize] {
            continue;
        }
        gens.push(b);
        // span <- span * <b>
        let mut power = b;
        let base = span.clone();
        while !in_span[power as usize] {
            for &s in &base {
                let x = mul_mod(s, power, d);
                if !in_span[x as usize] {
                    in_span[x as usize] = true;
                    span.push(x);
                }
            }
            power = mul_mod(power, b, d);
        }
    }
    gens
}

/// Every subgroup of `(Z/dZ)^x` of index `<= max_index`, ordered by index and
/// then by element list.
pub fn enumerate_subgroups(d: u64, max_index: u64) -> Vec<Subgroup> {
    assert!(d >= 2 && max_index >= 1);
    let group = Arc::new(unit_group_structure(d));
    enumerate_in(&group, max_index)
}

pub(crate) fn enumerate_in(group: &Arc<UnitGroupStructure>, max_index: u64) -> Vec<Subgroup> {
    let (torsion, duals) = dual_subgroups(group, max_index);
    let materialize = group.modulus <= MATERIALIZE_LIMIT;
    let mut subs: Vec<Subgroup> = duals
        .iter()
        .map(|dual| Subgroup::from_dual(group.clone(), &torsion, dual, materialize))
        .collect();
    subs.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    subs
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Coset {
    /// Smallest element.
    pub representative: u64,
    pub elements: Vec<u64>,
}

/// Cosets of `H` ordered by representative; the first one is `H`.
pub fn cosets(h: &Subgroup) -> Vec<Coset> {
    let mut by_label: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for b in h.group.units() {
        by_label.entry(h.coset_label(b)).or_default().push(b);
    }
    let mut out: Vec<Coset> = by_label
        .into_values()
        .map(|elements| Coset {
            representative: elements[0],
            elements,
        })
        .collect();
    out.sort_by_key(|c| c.representative);
    out
}

/// A Dirichlet character mod `d` of small order, stored through its pairing
/// with reduced discrete logs.
#[derive(Debug, Clone)]
pub struct Character {
    group: Arc<UnitGroupStructure>,
    torsion: Torsion,
    coefficients: Vec<u64>,
}

impl Character {
    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    /// Order of the character.
    pub fn order(&self) -> u64 {
        self.torsion
            .element_order(self.torsion.encode(&self.coefficients))
    }

    pub fn is_trivial(&self) -> bool {
        self.coefficients.iter().all(|&c| c == 0)
    }

    /// `chi(b) = exp(2 pi i * phase(b))` with `phase(b)` in `[0, 1)`.
    pub fn phase(&self, b: u64) -> Rational {
        let logs = self
            .group
            .reduced_log(b % self.group.modulus, &self.torsion.moduli);
        let num = self.torsion.pairing(&self.coefficients, &logs);
        Rational::new(num as i64, self.torsion.exponent as i64)
    }

    pub fn value(&self, b: u64) -> Complex64 {
        if !self.group.is_unit(b) {
            return Complex64::new(0.0, 0.0);
        }
        let phase = self.phase(b);
        Complex64::cis(2.0 * core::f64::consts::PI * phase.to_f64())
    }

    /// `(b, chi(b))` over all units in increasing order.
    pub fn table(&self) -> Vec<(u64, Complex64)> {
        self.group.units().map(|b| (b, self.value(b))).collect()
    }
}

/// The `[G:H]` characters of `G_d` trivial on `H`, trivial character first.
pub fn characters_mod_subgroup(h: &Subgroup) -> Vec<Character> {
    h.dual_elements
        .iter()
        .map(|&code| Character {
            group: h.group.clone(),
            torsion: h.kernel.torsion.clone(),
            coefficients: h.kernel.torsion.decode(code),
        })
        .collect()
}
