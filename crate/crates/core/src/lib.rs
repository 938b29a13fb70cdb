//! Synthesis and checking of ω-regular causes for effects observed on
//! lasso-shaped traces of finite reactive systems.
//!
//! The pipeline lives in [`synthesis`]; the remaining modules provide the
//! LTL front end, Büchi automata algebra, the system model, similarity
//! relations over triples of input sequences, and brute-force oracles.
//!
//! ```
//! use corpkit_core::ltl::{parse_ltl, ApUniverse};
//! use corpkit_core::similarity::subset_relation;
//! use corpkit_core::synthesis::synthesize_cause;
//! use corpkit_core::{instances, LassoWord, Options, Property, System};
//!
//! let system = System::from_json(instances::EXAMPLE_JSON)?;
//! let trace = LassoWord::parse("({x,e})^w", system.alphabet())?;
//! let effect = Property::Formula(parse_ltl("F e", ApUniverse::Closed(system.alphabet().symbols()))?);
//! let relation = subset_relation(system.inputs())?;
//!
//! let result = synthesize_cause(&system, &trace, &effect, &relation, Options::default())?;
//! let cause = result.cause().expect("F e has a cause on this trace");
//! // The cause is `F x` over the inputs `x` and `y`.
//! assert!(cause.accepts_lasso(&LassoWord::parse("{y};{x};({})^w", cause.alphabet())?));
//! assert!(!cause.accepts_lasso(&LassoWord::parse("({y})^w", cause.alphabet())?));
//! # Ok::<(), corpkit_core::Error>(())
//! ```

pub mod alphabet;
pub mod automata;
pub mod budget;
pub mod error;
pub mod guard;
pub mod instances;
pub mod lasso;
pub mod ltl;
pub mod oracle;
pub mod similarity;
pub mod synthesis;
pub mod system;

pub use alphabet::{Alphabet, Letter};
pub use automata::{Emptiness, Nba};
pub use budget::Budget;
pub use error::{Error, Result};
pub use guard::{Cube, Guard};
pub use lasso::LassoWord;
pub use ltl::Ltl;
pub use similarity::SimilarityRelation;
pub use synthesis::{CauseResult, CheckVerdict, Options, Property, Verdict};
pub use system::System;
