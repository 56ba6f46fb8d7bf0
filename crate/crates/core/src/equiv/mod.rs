//! Object equivalence: the greatest-fixpoint decision procedure, rational
//! certificates, their checker and the certificate builders.

pub mod brute;
pub mod cert;
pub mod decide;
pub mod transform;
pub mod verify;
pub mod witness;

pub use brute::{brute_force_equiv, BruteOutcome};
pub use cert::{CertArena, CertNode, CertStep, NodeId, RationalCert};
pub use decide::{decide_equiv, EquivMode, EquivRelation};
pub use transform::{pair_cert, push_cert, refl_cert, sym_cert};
pub use verify::{verify_cert, verify_cert_in};
pub use witness::{cancel_cert, cancel_cert_right, chain_cert, check_witnesses, lemma_a_cert, Link, WitnessBounds};
