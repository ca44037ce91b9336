//! List decoding and self-correction primitives.

pub mod dlcorr;
pub mod fit;
pub mod hadamard;
pub mod isclose;
pub mod pcorr;
pub mod sudan;

pub use dlcorr::{dlcorr, DlResult};
pub use hadamard::hadamard_list_decode;
pub use isclose::is_close;
pub use pcorr::{pcorr, pcorr_majority};
pub use sudan::{brute_force_decode, sudan_list_decode, AgreementThreshold};
