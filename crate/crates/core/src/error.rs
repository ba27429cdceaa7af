use thiserror::Error;

/// Which hypothesis of the eigenspace dimension formula failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precondition {
    /// `gcd(j, d) > 1`.
    NotCoprimeJ,
    /// `gcd(d, e) > 1`, so `y^d - f(x)` is reducible.
    CurveReducible,
    /// `d` divides `e * e_i` for some root multiplicity.
    DividesEEi,
    /// `d` divides `n`.
    DividesN,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid curve shape: {0}")]
    InvalidShape(&'static str),
    #[error("curve reducible: gcd(d,e)={gcd}")]
    CurveReducible { gcd: u64 },
    #[error("dimension formula does not apply at d={d}, j={j}: {reason:?}")]
    PreconditionViolated {
        d: u64,
        j: u64,
        reason: Precondition,
    },
    #[error("unsupported configuration: level d'={level}, j'={j} has positive genus and lies outside the formula's range")]
    UnsupportedConfiguration { level: u64, j: u64 },
    #[error("character sum bound violated at d={d}, subgroup generators {generators:?}, a={a}: |sum|={magnitude} > bound {bound}")]
    BoundViolation {
        d: u64,
        generators: alloc::vec::Vec<u64>,
        a: u64,
        magnitude: f64,
        bound: f64,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}
