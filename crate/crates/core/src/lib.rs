pub mod check;
pub mod error;
pub mod lie;
pub mod linalg;
pub mod omega;
pub mod poly;
pub mod pyramid;
pub mod scalar;
pub mod tensor;
pub mod uea;
pub mod verify;
pub mod walgebra;
pub mod yangian;

pub use check::Outcome;
pub use error::{Error, Result};
pub use lie::{make_config, Config, LieAlgebra, Sign};
pub use pyramid::{build_pyramid, Labeling, Pyramid};
pub use scalar::Q;
pub use uea::{Uea, UeaElement};
pub use verify::{run_suite, Report, Suite, VerificationPlan};
pub use walgebra::{Mutation, WAlgebra, WOptions};
