//! Exact 64-bit integer and rational utilities.
//!
//! Factorization is trial division up to `10^6` followed by Pollard rho with
//! a deterministic Miller-Rabin test, which is exact for every `u64`.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Neg, Sub};

const TRIAL_LIMIT: u64 = 1_000_000;

/// Bases making Miller-Rabin deterministic below `2^64`.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    (a / gcd(a, b)).checked_mul(b).expect("lcm overflows u64")
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard rho. `n` must be odd and composite.
fn pollard_rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut q = 1u64;
        let mut ys = y;
        let mut r = 1u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                let steps = core::cmp::min(128, r - k);
                for _ in 0..steps {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += steps;
            }
            r *= 2;
        }
        if g == n {
            // batch overshot; retrace one step at a time
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn split_into(n: u64, primes: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        primes.push(n);
        return;
    }
    let f = pollard_rho(n);
    split_into(f, primes);
    split_into(n / f, primes);
}

/// Prime factorization of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Factorization {
    pub value: u64,
    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Prime powers `p^k` exactly dividing the value, in prime order.
    pub fn prime_powers(&self) -> impl Iterator<Item = (u64, u32, u64)> + '_ {
        self.factors.iter().map(|&(p, k)| (p, k, p.pow(k)))
    }

    /// All positive divisors, sorted ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = alloc::vec![1u64];
        for &(p, k) in &self.factors {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..k {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

/// Factor `m` (`1 <= m < 2^63`). `factorize(1)` has no factors.
pub fn factorize(m: u64) -> Factorization {
    assert!(m >= 1, "factorize requires m >= 1");
    assert!(m <= i64::MAX as u64, "factorize requires m < 2^63");
    let mut rest = m;
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut p = 2u64;
    while p <= TRIAL_LIMIT && p * p <= rest {
        if rest.is_multiple_of(p) {
            let mut k = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                k += 1;
            }
            factors.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        let mut big = Vec::new();
        split_into(rest, &mut big);
        big.sort_unstable();
        for q in big {
            match factors.last_mut() {
                Some((last, k)) if *last == q => *k += 1,
                _ => factors.push((q, 1)),
            }
        }
    }
    Factorization { value: m, factors }
}

/// Order of `(Z/mZ)^x`.
pub fn euler_phi(m: u64) -> u64 {
    phi_of(&factorize(m))
}

pub fn phi_of(f: &Factorization) -> u64 {
    f.factors
        .iter()
        .map(|&(p, k)| (p - 1) * p.pow(k - 1))
        .product()
}

/// Möbius function.
pub fn moebius(m: u64) -> i64 {
    let f = factorize(m);
    if f.factors.iter().any(|&(_, k)| k > 1) {
        0
    } else if f.factors.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Smallest primitive root modulo an odd prime power `p^k`.
pub fn primitive_root_prime_power(p: u64, k: u32) -> u64 {
    debug_assert!(p > 2 && is_prime(p));
    let pm1 = factorize(p - 1);
    let is_root_mod_p = |g: u64| pm1.primes().all(|q| pow_mod(g, (p - 1) / q, p) != 1);
    let g = (2..p)
        .find(|&g| is_root_mod_p(g))
        .expect("odd primes have primitive roots");
    if k == 1 {
        return g;
    }
    // g generates mod p^k unless g^(p-1) = 1 mod p^2, in which case g + p does
    let p2 = p * p;
    if pow_mod(g, p - 1, p2) == 1 {
        g + p
    } else {
        g
    }
}

/// Exact rational number in lowest terms with a positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Rational {
    numerator: i64,
    denominator: i64,
}

impl Rational {
    pub const ZERO: Rational = Rational {
        numerator: 0,
        denominator: 1,
    };

    pub fn new(numerator: i64, denominator: i64) -> Self {
        assert!(denominator != 0, "zero denominator");
        Self::reduce(numerator as i128, denominator as i128)
    }

    pub fn from_integer(n: i64) -> Self {
        Rational {
            numerator: n,
            denominator: 1,
        }
    }

    fn reduce(mut num: i128, mut den: i128) -> Self {
        if den < 0 {
            num = -num;
            den = -den;
        }
        let g = gcd(num.unsigned_abs() as u64, den as u64).max(1) as i128;
        let numerator = i64::try_from(num / g).expect("rational numerator overflow");
        let denominator = i64::try_from(den / g).expect("rational denominator overflow");
        Rational {
            numerator,
            denominator,
        }
    }

    pub fn numerator(&self) -> i64 {
        self.numerator
    }

    pub fn denominator(&self) -> i64 {
        self.denominator
    }

    pub fn floor(&self) -> i64 {
        self.numerator.div_euclid(self.denominator)
    }

    pub fn fract(&self) -> Rational {
        Rational {
            numerator: self.numerator.rem_euclid(self.denominator),
            denominator: self.denominator,
        }
    }

    pub fn is_integer(&self) -> bool {
        self.denominator == 1
    }

    pub fn to_integer(&self) -> Option<i64> {
        self.is_integer().then_some(self.numerator)
    }

    pub fn to_f64(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        let num = self.numerator as i128 * rhs.denominator as i128
            + rhs.numerator as i128 * self.denominator as i128;
        Rational::reduce(num, self.denominator as i128 * rhs.denominator as i128)
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        self + (-rhs)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational {
            numerator: -self.numerator,
            denominator: self.denominator,
        }
    }
}

impl core::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::ZERO, |a, b| a + b)
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.numerator as i128 * other.denominator as i128)
            .cmp(&(other.numerator as i128 * self.denominator as i128))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator == 1 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}", self.numerator, self.denominator)
        }
    }
}

/// Fractional part `<p/q> = p/q - floor(p/q)`, always in `[0, 1)`.
pub fn frac(p: i64, q: u64) -> Rational {
    assert!(q >= 1, "frac requires q >= 1");
    let q = i64::try_from(q).expect("denominator exceeds i64");
    Rational::new(p.rem_euclid(q), q)
}
