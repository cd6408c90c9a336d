//! Executable thread-local semantics for C11-style memory models.
//!
//! Programs are instruction trees composed by parallelized sequential
//! composition; a reordering relation decides which later instructions may
//! execute early. Litmus programs are explored exhaustively.

pub mod ast;
pub mod reorder;
pub mod semantics;
pub mod analysis;
pub mod litmus;
