//! Exact kernels for the complex representation of superelliptic Jacobians
//! `y^d = f(x)` and for the small-index subgroup certification over
//! `(Z/dZ)^x` that bounds where low-dimensional factors can occur.
//!
//! The crate is `no_std` and only needs `alloc`. Everything that touches a
//! clock, a thread or a file lives in the `superjac` companion crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod arith;
pub mod certify;
pub mod eigenspace;
pub mod error;
pub mod unit_group;

pub use arith::{euler_phi, factorize, frac, Factorization, Rational};
pub use certify::{
    certify_d, coset_hits_interval, verify_weyl, weyl_bound, weyl_sum, CertReport, Violation,
    WeylReport, WeylRow,
};
pub use eigenspace::{
    check_vanishing, dim_vj, eigenspace_table, genus_rh, new_part_dimension, CurveShape,
    EigenspaceTable, VanishingReport,
};
pub use error::{Error, Precondition};
pub use unit_group::{
    characters_mod_subgroup, cosets, enumerate_subgroups, unit_group_structure, Character, Coset,
    CyclicFactor, Subgroup, UnitGroupStructure,
};
