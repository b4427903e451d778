#![no_std]
#![doc = include_str!("../README.md")]

extern crate alloc;

pub mod algebra;
pub mod augment;
pub mod complex;
pub mod error;
pub mod linalg;
pub mod models;

pub use algebra::{
    enumerate_basis, multiply, normalize, GenId, Generator, GeneratorTable, Monomial, Parity,
    Polynomial,
};
pub use augment::{
    augment_once, find_identities, resolve, verify_acyclic, AcyclicityReport, AugmentationReport,
    AugmentationRound, IdentitySet,
};
pub use complex::{
    apply_delta, block_matrix, check_nilpotent, cohomology, cohomology_table, euler_check,
    grading_window, grassmann_number, CohomologyBlock, CohomologyRow, CohomologyTable, Complex,
    DifferentialRule, EulerCheck, Nilpotency,
};
pub use error::{Error, Result};
pub use linalg::{Matrix, Rational};
