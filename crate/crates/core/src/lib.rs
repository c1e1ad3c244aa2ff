//! Exact verification and budgeted witness search for homotopy relations on
//! finite digital images in `Z^n`.
//!
//! The core types are generic over the coordinate integer ([`Coord`]) and,
//! for real homotopies, over the integer behind exact rational time
//! ([`TimeInt`]). The aliases at the crate root fix `i64` coordinates and
//! arbitrary-precision time, which is what the command-line tool uses.

pub mod constructions;
pub mod ecpath;
pub mod error;
pub mod homotopy;
pub mod json;
pub mod lattice;
pub mod longhtpy;
pub mod maps;
pub mod realhtpy;
pub mod scalar;
pub mod search;
pub mod similarity;

pub use error::{Error, Result, Verdict, Violation};
pub use json::Json;
pub use scalar::{Coord, Time, TimeInt};

/// Coordinate type of the concrete aliases.
pub type Int = i64;

pub type Point = lattice::Point<Int>;
pub type DigitalImage = lattice::DigitalImage<Int>;
pub type PointedImage = lattice::PointedImage<Int>;
pub type DigitalMap = maps::DigitalMap<Int>;
pub type Homotopy = homotopy::Homotopy<Int>;
pub type EquivalenceCertificate = homotopy::EquivalenceCertificate<Int>;
pub type ECPath = ecpath::ECPath<Int>;
pub type ECHomotopy = ecpath::ECHomotopy<Int>;
pub type LHomotopy = longhtpy::LHomotopy<Int>;
pub type LongHomotopy = longhtpy::LongHomotopy<Int>;
pub type LongEquivalenceCertificate = longhtpy::LongEquivalenceCertificate<Int>;
pub type RealHomotopy = realhtpy::RealHomotopy<Int, num_bigint::BigInt>;
pub type RealPath = realhtpy::RealPath<Int, num_bigint::BigInt>;
pub type RealEquivalenceCertificate = realhtpy::RealEquivalenceCertificate<Int, num_bigint::BigInt>;
pub type Filtration = similarity::Filtration<Int>;
pub type SimilarityCertificate = similarity::SimilarityCertificate<Int>;
pub type TreeImage = constructions::TreeImage<Int>;
pub type WedgeImage = constructions::WedgeImage<Int>;
pub type ProductImage = constructions::ProductImage<Int>;
pub type TImage = constructions::TImage<Int>;
pub type Certificate = constructions::Certificate<Int, num_bigint::BigInt>;
