//! Mod-2 cohomology of Dold manifolds `D(m,n)`, Steenrod squares on it, and a
//! rule-based classifier deciding whether `Σ^k D(m,n)` is W-trivial.
//!
//! ```
//! use dold_wtriv::{Classifier, KnowledgeBase, Status};
//!
//! let kb = KnowledgeBase::bundled();
//! let mut classifier = Classifier::new(&kb);
//! assert_eq!(classifier.classify(8, 2, 4).unwrap().status, Status::WTrivial);
//! ```

pub mod classifier;
pub mod cli;
pub mod cohomology;
pub mod error;
pub mod gf2;
pub mod knowledge;
pub mod obstruction;
pub mod selftest;
pub mod steenrod;

pub use classifier::{Classifier, DerivationTrace, RuleId, Status, Step, Verdict};
pub use cohomology::{CohomologyClass, Monomial, SpaceKind, SpaceModel};
pub use error::{Error, ParseError, Result};
pub use knowledge::{Fact, FactKind, KnowledgeBase, Truth};
pub use obstruction::{certify_w_trivial, Certificate, FilterTag, Outcome};
pub use steenrod::{sq, total_sq};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    struct Intro;
    #[doc = include_str!("../../../book/src/cohomology.md")]
    struct Cohomology;
    #[doc = include_str!("../../../book/src/steenrod.md")]
    struct Steenrod;
    #[doc = include_str!("../../../book/src/linear-algebra.md")]
    struct LinearAlgebra;
    #[doc = include_str!("../../../book/src/obstruction.md")]
    struct Obstruction;
    #[doc = include_str!("../../../book/src/knowledge.md")]
    struct Knowledge;
    #[doc = include_str!("../../../book/src/classifier.md")]
    struct ClassifierChapter;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
