//! Iterative bounded-distance decoding with scaled reliability (iBDD-SR) for
//! product and staircase codes built from binary BCH component codes.
//!
//! The crate is organised bottom-up:
//!
//! * [`gf`], [`bch`]: GF(2^m) arithmetic and BCH component codes with exact
//!   bounded-distance decoding (correct, miscorrect or fail).
//! * [`channel`]: the bi-AWGN channel, LLRs and hard decisions.
//! * [`product`], [`staircase`]: encoders and the iBDD, iBDD-SR and genie-aided
//!   ideal iBDD decoders.
//! * [`de`]: density evolution for the GLDPC / SC-GLDPC ensembles that contain
//!   these codes; yields decoding thresholds and the scaling-factor schedules.
//! * [`sim`]: paired-noise Monte-Carlo BER/FER estimation.

pub mod bch;
pub mod channel;
pub mod de;
pub mod error;
pub mod gf;
pub mod math;
pub mod matrix;
pub mod product;
pub mod sim;
pub mod staircase;

pub use bch::{BchCode, BchSpec, BddOutcome, WeightEnumerator};
pub use channel::ChannelParams;
pub use error::{Error, Result};
pub use gf::GaloisField;
pub use matrix::{BitMatrix, LlrMatrix, TernaryMatrix};
pub use product::{DecoderMode, ProductCode, ScalingSchedule};
pub use staircase::{StaircaseCode, WindowConfig, WindowSchedule};


