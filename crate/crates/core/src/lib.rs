//! Exact q-series engine for spt-type partition-pair generating functions:
//! Bailey-pair constructions, root-of-unity dissections over cyclotomic
//! fields, a brute-force combinatorial oracle, and a declarative identity
//! verification registry.

pub mod bailey;
pub mod bivariate;
pub mod cyclotomic;
pub mod expr;
pub mod number;
pub mod partitions;
pub mod qfunctions;
pub mod registry;
pub mod ring;
pub mod series;

pub use cyclotomic::{cyclo_from_root_power, cyclo_inverse, cyclo_mul, Cyclotomic, CycloError};
pub use number::{Frac, Int, Rat};
pub use ring::{CyclotomicRing, IntegerRing, RationalRing, Ring, RingTag};
pub use series::{CompareOutcome, LaurentSeries, SeriesError};
