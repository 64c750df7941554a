//! Explicit Higman embeddings of recursive groups into finitely presented groups.
//!
//! The pipeline: a countable presentation is pushed into a 2-generator group by
//! universal words, its relators are coded as integer sequences, a benign
//! subgroup certificate is built for an expression in the Higman operations, and
//! the rope trick assembles the final finitely presented overgroup.

pub mod benign;
pub mod error;
pub mod io;
pub mod pres;
pub mod rope;
pub mod seq;
pub mod twogen;
pub mod verify;
pub mod word;

pub use error::{Error, Result};
pub use pres::{Presentation, Subgroup};
pub use seq::{Bounds, Seq, SeqSetExpr};
pub use word::{sym, Hom, Sym, Word};
