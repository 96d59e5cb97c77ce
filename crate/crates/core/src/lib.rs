//! Fixed-locus classification of non-symplectic automorphisms of K3
//! surfaces of orders 7, 14, 21, 28 and 42, in exact arithmetic, and a
//! verifier for explicit Weierstrass models.
//!
//! ```
//! use k3fix::{Classifier, DataStore};
//! let c = Classifier::new(DataStore::embedded().unwrap());
//! let order14 = c.classify_purely(14).unwrap();
//! assert_eq!(order14.admissible().len(), 12);
//! assert!(order14.admissible().iter().any(|r| r.label == "D8(3,5)"));
//! ```

pub mod classifier;
pub mod cyclotomic;
pub mod data;
pub mod elliptic;
pub mod error;
pub mod geomfilters;
pub mod lefschetz;
pub mod localtypes;

pub use classifier::{
    CaseRecord, CheckReport, Classification, Classifier, FixedLocus, Format, Mode, Status, Table, TableKind,
};
pub use cyclotomic::{CyclotomicNumber, Rational};
pub use data::DataStore;
pub use elliptic::{ExampleReport, ExampleStatus, KodairaType, WeierstrassFamily};
pub use error::{Error, Result};
pub use geomfilters::{InvolutionInvariants, Order3Invariants};
pub use lefschetz::{EigenspaceDims, EulerProfile, PushforwardReading, TypeCountVector};
pub use localtypes::LocalType;
