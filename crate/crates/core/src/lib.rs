//! Exact computations on finite posets and their lattices of order ideals:
//! chain and multichain distributions, coincidental down-degree expectations,
//! toggle-symmetric certificates, rowmotion dynamics and set-valued tableau counts.

pub mod cde;
pub mod distributions;
pub mod dynamics;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod minuscule;
pub mod poset;
pub mod rational;
pub mod shapes;
pub mod tableaux;

pub use cde::{certify_tcde, find_witness, CdeReport, TcdeCertificate, TcdeOutcome, TcdeWitness};
pub use distributions::{expectation, Distribution};
pub use dynamics::{orbit_decomposition, rowmotion_map, IdealMap, OrbitDecomposition};
pub use error::{Error, Result};
pub use lattice::{build_lattice, Ideal, IdealLattice, Statistic};
pub use minuscule::{verify_minuscule_theorems, MinusculeCase, MinusculeRecord};
pub use poset::{Chain, Poset, RankInfo};
pub use rational::Q;
pub use shapes::{
    classify_shifted_balanced, Partition, ShapeLiteral, ShiftedClass, ShiftedShape, SkewShape,
};
