//! Classifies the p-adic density of quotient sets R((x_n)) of integer
//! linear recurrence sequences, and corroborates every verdict with
//! brute-force p-adic probes.
//!
//! The library answers, for a recurrence and a prime p, whether the set
//! of quotients x_n / x_m is dense in Q_p. Verdicts come from a rule
//! engine over known theorem families ([`classifier`]); independent
//! empirical evidence (residue coverage, valuation spectra, uniformity
//! histograms, witness indices) comes from [`probe`]. All arithmetic is
//! exact: big integers and integer valuations, no floating point.

pub mod classifier;
pub mod error;
pub mod padic;
pub mod polyqp;
pub mod probe;
pub mod recurrence;
pub mod report;
pub mod specfile;

pub use classifier::{classify, FamilyMatch, Outcome, Verdict};
pub use error::{Error, Result};
pub use padic::{PadicContext, Valuation};
pub use recurrence::RecurrenceSpec;
