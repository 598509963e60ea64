//! Decomposition lattices of birational surface contractions.
//!
//! A contraction `f: X -> Y` of a smooth surface is described by a
//! [`BlowupForest`] of iterated point blow-ups. From it the crate builds the
//! lattice `Dec(f)` of intermediate contractions, exact intersection theory
//! on the exceptional lattice, the tilting generators as divisor-class data,
//! and t-structures glued along `Dec(f)` on split objects.
//!
//! Integer arithmetic is generic over [`Scalar`]; [`ExceptionalLattice64`]
//! is the fast path and [`BigExceptionalLattice`] never overflows.

pub mod divisor;
pub mod error;
pub mod forest;
pub mod glue;
pub mod lattice;
pub mod poset;
pub mod scalar;

pub use divisor::{
    proximity_matrix, Basis, BlowDownStep, DanilovPlan, Descent, DivisorClass, ExceptionalLattice,
    FormalGenerator, IdentityFailure, IdentityReport, IntMatrix, Summand, Support, Variant,
};
pub use error::{Error, Result};
pub use forest::{forest_shapes, random_forest, BlowupForest, Contraction, ForestDocument, NodeDocument};
pub use glue::{
    apply_duality, check_tilt_relations, dual_tstructure, generating_family, glue, heart_simples,
    truncate, tstructure_for_edge, tstructure_for_element, verify_duality,
    verify_linear_extension_independence, FiltrationSpec, GluedTStructure, GradedObject,
    Orientation, SimpleClass, Slot, TStructureSpec, TiltReport,
};
pub use lattice::{BirkhoffReport, DistLattice, JoinPrimes};
pub use poset::{IntervalClosedSet, LowerIdeal, Poset, Subset};
pub use scalar::Scalar;

pub type DivisorClass64 = DivisorClass<i64>;
pub type ExceptionalLattice64 = ExceptionalLattice<i64>;
pub type FormalGenerator64 = FormalGenerator<i64>;
pub type IntMatrix64 = IntMatrix<i64>;

pub type BigDivisorClass = DivisorClass<num_bigint::BigInt>;
pub type BigExceptionalLattice = ExceptionalLattice<num_bigint::BigInt>;
pub type BigFormalGenerator = FormalGenerator<num_bigint::BigInt>;
pub type BigIntMatrix = IntMatrix<num_bigint::BigInt>;
