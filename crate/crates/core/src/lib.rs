//! Construction and simulation toolkit for secretive coded caching with
//! hotplug (offline) users.
//!
//! A server holding N files serves K cache-equipped users over a broadcast
//! link, but only K' of them are active when demands arrive — and the
//! delivery must reveal nothing about undemanded files, even though caches
//! were filled before anyone knew who would show up. The toolkit builds the
//! combinatorial schedules behind such schemes (placement delivery arrays
//! and their hotplug refinement, [`hppda::HpPda`]), runs them end to end
//! over small binary fields ([`engine`]), and certifies the information-
//! theoretic claims with exact rank computations rather than sampling.
//!
//! Module map:
//! - [`gf`]: GF(2^w) arithmetic, matrices, and incremental row reduction.
//! - [`combin`]: subset enumeration and ranking.
//! - [`pda`]: placement delivery arrays and the MAN construction.
//! - [`design`]: t-designs, a small catalog, and derived block designs.
//! - [`hppda`]: hotplug PDAs — the pair (P, B) with witness subarrays.
//! - [`crypto_coding`] (as [`sharing`]): non-perfect secret sharing with
//!   systematic MDS extension.
//! - [`engine`]: seeded placement, delivery, decoding, leakage audit.
//! - [`analysis`]: exact memory–rate tradeoffs, envelopes, crossovers,
//!   and the cut-set style lower bound.

pub mod analysis;
pub mod combin;
pub mod design;
pub mod engine;
pub mod gf;
pub mod hppda;
pub mod pda;
pub mod sharing;

/// The secret-sharing layer under its scheme-facing name.
pub use sharing as crypto_coding;

pub use analysis::{
    admissible_multiplicities, baseline_curve, crossover, design_reference_comparison,
    envelope, format_decimal, lower_bound, thm1_points, thm2_points, AnalysisError,
    Crossover, Envelope, Provenance, RatePoint, Rational, ReferenceComparison,
};
pub use design::{catalog, DesignError, TDesign};
pub use engine::{
    audit, deliver, decode, place, place_baseline, run_once, simulate, simulate_baseline,
    strip_transmission_key, trace_lines, Auditor, CacheContents, Delivery, EngineError,
    KeyLabel, KeySchedule, Placement, SimulationReport, Transmission, TxTerm, VarLayout,
    ViewAudit,
};
pub use gf::{Elem, Field, GfError, Matrix, MulTable, Rref};
pub use hppda::{
    man_hppda, tdesign_hppda, verify_hppda, BRowLabel, FilledSubarray, HpPda, HpPdaError,
    HpPdaFailure, HpPdaKind, HpPdaParams, TxLabel,
};
pub use pda::{man_pda, verify_pda, Cell, Pda, PdaError, Violation};
pub use sharing::{
    make_sharing_spec, mds_extend, reconstruct_file, share_file, PartsAndKeys, SharingError,
    SharingSpec,
};
