//! Existential decision procedures for polynomial systems modulo `p` over
//! the ring of integers of the maximal abelian extension of `Q`.

pub mod algebra;
pub mod formula;
pub mod reduction;
pub mod oracle;
pub mod decider;
pub mod transfer;
pub mod selfcheck;
