//! Dimensions of the `zeta^j`-eigenspaces `V_j` of regular 1-forms on the
//! curve `y^d = f(x)`, where `f = c * prod (x - lambda_i)^(e * e_i)`.
//!
//! For `j` prime to `d`, and `d` dividing none of `e*e_i` nor `n`,
//!
//! ```text
//! dim V_j = -<j n / d> + sum_i <j e e_i / d>
//! ```
//!
//! with `<r>` the fractional part. A non-primitive `j` with `gcd(j, d) = t`
//! is read off the quotient curve at level `d / t`. Levels outside the
//! formula's range are accepted only when that quotient has genus zero.

use alloc::vec::Vec;

use crate::arith::{self, frac, gcd, Rational};
use crate::error::{Error, Precondition};

/// Branch data `(n, e, {e_i})` of `f = f_0^e`, `f_0 = c prod (x - lambda_i)^{e_i}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CurveShape {
    n: u64,
    e: u64,
    exponents: Vec<u64>,
}

impl CurveShape {
    /// Exponents are stored sorted in decreasing order.
    pub fn new(n: u64, e: u64, mut exponents: Vec<u64>) -> Result<Self, Error> {
        if exponents.is_empty() {
            return Err(Error::InvalidShape("f_0 needs at least one root"));
        }
        if e == 0 || exponents.contains(&0) {
            return Err(Error::InvalidShape("exponents must be positive"));
        }
        let total: u64 = exponents.iter().sum();
        if e.checked_mul(total) != Some(n) {
            return Err(Error::InvalidShape("n must equal e * (e_1 + ... + e_m)"));
        }
        if exponents.iter().copied().fold(0, gcd) != 1 {
            return Err(Error::InvalidShape(
                "gcd(e_1, ..., e_m) must be 1 for e to be maximal",
            ));
        }
        exponents.sort_unstable_by(|a, b| b.cmp(a));
        Ok(CurveShape { n, e, exponents })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn e(&self) -> u64 {
        self.e
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    /// Number of distinct roots `m`.
    pub fn roots(&self) -> usize {
        self.exponents.len()
    }

    fn check_irreducible(&self, d: u64) -> Result<(), Error> {
        match gcd(d, self.e) {
            1 => Ok(()),
            g => Err(Error::CurveReducible { gcd: g }),
        }
    }

    /// First failing hypothesis of the dimension formula at `(d, j)`.
    fn formula_precondition(&self, d: u64, j: u64) -> Option<Precondition> {
        if gcd(j % d, d) != 1 {
            Some(Precondition::NotCoprimeJ)
        } else if gcd(d, self.e) != 1 {
            Some(Precondition::CurveReducible)
        } else if self
            .exponents
            .iter()
            .any(|&ei| (self.e * ei).is_multiple_of(d))
        {
            Some(Precondition::DividesEEi)
        } else if self.n.is_multiple_of(d) {
            Some(Precondition::DividesN)
        } else {
            None
        }
    }
}

fn signed(x: u64) -> i64 {
    i64::try_from(x).expect("value exceeds i64")
}

/// `dim V_j` for `j` prime to `d`, exactly.
pub fn dim_vj(shape: &CurveShape, d: u64, j: u64) -> Result<u64, Error> {
    if let Some(reason) = shape.formula_precondition(d, j) {
        return Err(Error::PreconditionViolated { d, j, reason });
    }
    let j = j % d;
    let mul = |a: u64, b: u64| signed(a.checked_mul(b).expect("j * n overflows"));
    let value: Rational = -frac(mul(j, shape.n), d)
        + shape
            .exponents
            .iter()
            .map(|&ei| frac(mul(j, shape.e * ei), d))
            .sum::<Rational>();
    let dim = value
        .to_integer()
        .unwrap_or_else(|| panic!("dim V_{j} at d={d} is not integral: {value}"));
    assert!(dim >= 0, "dim V_{j} at d={d} is negative: {dim}");
    Ok(dim as u64)
}

/// Genus of `y^d = f(x)` by Riemann-Hurwitz for the `d`-fold cyclic cover of
/// the line, branched over the roots and possibly infinity.
pub fn genus_rh(shape: &CurveShape, d: u64) -> Result<u64, Error> {
    assert!(d >= 1, "genus requires d >= 1");
    shape.check_irreducible(d)?;
    let d_s = signed(d);
    let ramification = |points: u64| signed(points) * (d_s / signed(points) - 1);
    let mut chi: i64 = -2 * d_s;
    for &ei in &shape.exponents {
        chi += ramification(gcd(d, shape.e * ei));
    }
    chi += ramification(gcd(d, shape.n));
    // chi = 2g - 2
    assert!(
        chi >= -2 && chi % 2 == 0,
        "Riemann-Hurwitz gave 2g-2 = {chi}"
    );
    Ok(((chi + 2) / 2) as u64)
}

/// Dimensions at primitive `j` for one level, index `j` (entry 0 unused).
fn level_dims(shape: &CurveShape, level: u64) -> Result<Vec<u64>, Error> {
    let mut dims = alloc::vec![0u64; level as usize];
    if genus_rh(shape, level)? == 0 {
        return Ok(dims);
    }
    for j in 1..level {
        if gcd(j, level) != 1 {
            continue;
        }
        dims[j as usize] = match dim_vj(shape, level, j) {
            Ok(v) => v,
            Err(Error::PreconditionViolated { .. }) => {
                return Err(Error::UnsupportedConfiguration { level, j })
            }
            Err(other) => return Err(other),
        };
    }
    Ok(dims)
}

/// `j -> dim V_j` for `j = 1, ..., d-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EigenspaceTable {
    pub shape: CurveShape,
    pub d: u64,
    /// `dims[j - 1] = dim V_j`.
    pub dims: Vec<u64>,
}

impl EigenspaceTable {
    pub fn dim(&self, j: u64) -> u64 {
        let j = j % self.d;
        if j == 0 {
            0
        } else {
            self.dims[j as usize - 1]
        }
    }

    /// Whether `V_j` belongs to the new part, i.e. `gcd(j, d) = 1`.
    pub fn is_new(&self, j: u64) -> bool {
        gcd(j, self.d) == 1
    }

    /// `(j, dim V_j)` for `j = 1, ..., d-1`.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.dims
            .iter()
            .enumerate()
            .map(|(i, &v)| (i as u64 + 1, v))
    }

    /// Sum of all dimensions, the genus.
    pub fn total(&self) -> u64 {
        self.dims.iter().sum()
    }

    pub fn new_part_dimension(&self) -> u64 {
        self.iter()
            .filter(|&(j, _)| self.is_new(j))
            .map(|(_, v)| v)
            .sum()
    }
}

pub fn eigenspace_table(shape: &CurveShape, d: u64) -> Result<EigenspaceTable, Error> {
    assert!(d >= 1, "eigenspace table requires d >= 1");
    shape.check_irreducible(d)?;
    let divisors = arith::factorize(d).divisors();
    let mut levels: Vec<(u64, Vec<u64>)> = Vec::with_capacity(divisors.len());
    for &level in divisors.iter().filter(|&&l| l > 1) {
        levels.push((level, level_dims(shape, level)?));
    }
    let dims = (1..d)
        .map(|j| {
            let t = gcd(j, d);
            let level = d / t;
            let (_, row) = levels
                .iter()
                .find(|(l, _)| *l == level)
                .expect("every quotient level is a divisor");
            row[(j / t) as usize]
        })
        .collect();
    Ok(EigenspaceTable {
        shape: shape.clone(),
        d,
        dims,
    })
}

/// `dim H^0(J^new, Omega^1)`: sum of `dim V_j` over `j` prime to `d`.
pub fn new_part_dimension(shape: &CurveShape, d: u64) -> Result<u64, Error> {
    Ok(eigenspace_table(shape, d)?.new_part_dimension())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum VanishingReport {
    Pass,
    /// A primitive `j < d/n` with `V_j != 0`.
    Counterexample {
        j: u64,
        dim: u64,
    },
}

/// Check that `V_j = 0` for every `j` prime to `d` with `j < d/n`.
pub fn check_vanishing(shape: &CurveShape, d: u64) -> Result<VanishingReport, Error> {
    let dims = level_dims(shape, d)?;
    let hit = (1..d)
        .take_while(|&j| j * shape.n < d)
        .filter(|&j| gcd(j, d) == 1)
        .find(|&j| dims[j as usize] != 0);
    Ok(match hit {
        Some(j) => VanishingReport::Counterexample {
            j,
            dim: dims[j as usize],
        },
        None => VanishingReport::Pass,
    })
}
