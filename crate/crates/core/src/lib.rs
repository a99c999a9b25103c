//! LS-sequences of partitions and points in `[0, 1[`, their two-dimensional
//! extensions, exact discrepancy computation and resonance detection.
//!
//! All endpoints and points are exact elements of the quadratic field
//! `Q(γ)` ([`QuadNum`]); floats are only used for lengths and areas.
//!
//! Runnable examples live in `examples/`, one per capability:
//!
//! ```bash
//! cargo run --release --example quadratic_field
//! cargo run --release --example partitions
//! cargo run --release --example ls_sequence
//! cargo run --release --example discrepancy_scan
//! cargo run --release --example van_der_corput_square
//! cargo run --release --example halton_figures
//! cargo run --release --example resonance
//! ```

pub mod cli;
pub mod discrepancy;
mod error;
pub mod partition;
pub mod quadfield;
pub mod sequence;
pub mod square;

pub use discrepancy::{
    brute_force_1d, brute_force_2d, extreme_disc_1d, star_disc_1d, star_disc_2d, Coordinate,
    DiscrepancyReport, Method, Mode1d, Witness,
};
pub use error::{Error, Result};
pub use partition::{counts, partition_at, partition_at_capped, CountSequence, Interval, LsPartition};
pub use quadfield::{parse_params, LsParams, QuadNum, Regime, SqrtNum};
pub use sequence::{admissible_indices, is_admissible, phi, sequence_prefix, DigitVector, PointList1D};
pub use square::{detect_resonance, halton_pair, vdc_set, PointList2D, ResonanceResult};
