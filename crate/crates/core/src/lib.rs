//! Exact Seifert-form computations for iterated torus knots, their
//! connected sums and plumbings: construction, concordance invariants and
//! algebraic sliceness obstructions.

pub mod expr;
pub mod invariants;
pub mod linalg;
pub mod modp;
pub mod obstruction;
pub mod poly;
pub mod seifert;
pub mod trig;
pub mod verify;

pub use expr::{format, named, normalize, parse, KnotExpr, ParseError, ParseErrorKind};
pub use invariants::{
    alexander, arf, determinant, fibered_consistent, signature, signature_profile, summarize, tristram_levine, Jump,
    SignatureFunction, SignatureProfile, SignatureValue, Summary,
};
pub use linalg::IntMatrix;
pub use obstruction::{
    check_metabolizer, fox_milnor, obstruction_report, FoxMilnor, MetabolizerCandidate, ObstructionError,
    ObstructionReport, Verdict,
};
pub use poly::{IntPoly, LaurentPoly};
pub use seifert::{
    braid_seifert, cable, connected_sum, construct, eval, mirror, negate, parallel_copies, plumb, reverse,
    torus_seifert, BraidWord, Construction, SeifertError, SeifertMatrix,
};
pub use trig::Angle;
pub use verify::{verify_paper, PaperReport, Step, StepStatus};
