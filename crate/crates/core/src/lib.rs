//! Enumeration and classification of origamis (square-tiled half-translation surfaces),
//! the action of the modular group on their isomorphism classes, and the invariants of the
//! resulting Teichmüller curves.

pub mod action;
pub mod classifier;
pub mod curve;
pub mod error;
pub mod invariants;
pub mod origami;
pub mod perm;
pub mod reference;
pub mod report;
pub mod store;

pub use action::ClassAction;
pub use classifier::{census, census_with, Census, CensusOptions, EpsSearch, OrigamiClass};
pub use curve::{CurveComponent, Valency, VeechData};
pub use error::{Error, Result};
pub use invariants::{InvariantKey, Stratum};
pub use origami::{DoubleCover, Origami};
pub use report::{galois_report, GaloisReport};
pub use perm::{Partition, Permutation, SignVector, SignedPermutation};
