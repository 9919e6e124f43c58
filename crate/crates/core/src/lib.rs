//! Exhaustive verification of character-sum identities and bounds modulo
//! prime powers, together with a small Dirichlet L-function engine.

pub mod arith;
pub mod charsums;
pub mod characters;
pub mod error;
pub mod exponents;
pub mod expsum;
pub mod fixtures;
pub mod lfunc;
pub mod padic;
pub mod report;
pub mod suites;
pub mod sum;
pub mod units;

pub use arith::{crt_combine, crt_split, factor, q_star, Factorization};
pub use characters::{
    conductor, conductor_drop_index, coset, enumerate_characters, postnikov_index, CharacterFilter,
    DirichletCharacter, DirichletGroup, PostnikovIndex,
};
pub use error::{Error, Result};
pub use expsum::kloosterman;
pub use padic::{padic_log, PadicLogTable};
pub use sum::CharSumValue;
pub use units::UnitGroupBasis;
