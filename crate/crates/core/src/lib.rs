//! Detection and certification of matrix structure for black-box matrices
//! over finite fields.

pub mod band;
pub mod blackbox;
pub mod certify;
pub mod displacement;
pub mod epsilon;
pub mod field;
pub mod gen;
pub mod krylov;
pub mod lowrank;
pub mod matrix;
pub mod oracle;
