//! Uniform interpolants for the modal logics K, GL, IL and iSL.
//!
//! The crate contains terminating backward proof search for the sequent
//! calculi KS, GLS, G4iP and G4iSLt, the recursive constructions of the
//! propositional quantifiers `∀p`/`∃p` that follow those searches, and an
//! independent oracle layer (enumeration, Kripke semantics, property
//! harnesses) used to check them against each other.

pub mod calculus;
pub mod error;
pub mod formula;
pub mod interpolation;
pub mod oracle;
pub mod provers;
pub mod sequent;
pub mod syntax;

use std::fmt;
use std::str::FromStr;

pub use error::ContractError;
pub use formula::{Dialect, Formula, Kind, Var};
pub use sequent::{FMultiset, Multiset, Sequent};

/// The four logics, each with its calculus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Logic {
    /// Modal logic K, decided by KS.
    K,
    /// Gödel–Löb logic, decided by GLS.
    GL,
    /// Intuitionistic propositional logic, decided by G4iP.
    IL,
    /// Intuitionistic strong Löb logic, decided by G4iSLt.
    ISL,
}

impl Logic {
    pub const ALL: [Logic; 4] = [Logic::K, Logic::GL, Logic::IL, Logic::ISL];

    pub fn is_classical(self) -> bool {
        matches!(self, Logic::K | Logic::GL)
    }

    pub fn dialect(self) -> Dialect {
        if self.is_classical() {
            Dialect::Classical
        } else {
            Dialect::Intuitionistic
        }
    }

    pub fn calculus_name(self) -> &'static str {
        match self {
            Logic::K => "KS",
            Logic::GL => "GLS",
            Logic::IL => "G4iP",
            Logic::ISL => "G4iSLt",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Logic::K => "K",
            Logic::GL => "GL",
            Logic::IL => "IL",
            Logic::ISL => "iSL",
        }
    }
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Logic {
    type Err = String;

    fn from_str(s: &str) -> Result<Logic, String> {
        match s {
            "K" | "KS" => Ok(Logic::K),
            "GL" | "GLS" => Ok(Logic::GL),
            "IL" | "G4iP" => Ok(Logic::IL),
            "iSL" | "ISL" | "G4iSLt" => Ok(Logic::ISL),
            other => Err(format!("unknown logic {other:?} (expected K, GL, IL or iSL)")),
        }
    }
}
