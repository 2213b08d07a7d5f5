//! Link-layer security for wireless sensor networks built around MISTY1 in
//! OFB mode.
//!
//! The crate is layered bottom-up:
//!
//! * [`ciphers`]: bit-exact 64-bit block ciphers (MISTY1, Skipjack, RC5-32/12/16)
//!   behind the [`ciphers::BlockCipher64`] trait.
//! * [`modes`]: OFB and CBC over any 64-bit block cipher, plus `0x80`-then-zeros
//!   padding.
//! * [`mac`]: CBC-MAC with a 4-byte truncated tag.
//! * [`linklayer`]: the secured frame format (authenticated encryption and
//!   authentication-only), counter-derived IVs and replay protection.
//! * [`simnet`]: a deterministic lossy-channel simulator and the exhaustive
//!   error-propagation study.
//! * [`bench`]: the memory/speed benchmark harness and the ranking report.
//! * [`vectors`]: the plain-text test-vector formats shipped with the crate.

pub mod bench;
pub mod ciphers;
mod error;
pub mod linklayer;
pub mod mac;
pub mod modes;
pub mod simnet;
pub mod vectors;

pub use error::{Error, Result};
