//! Verification engine for the 2-class field towers of imaginary quadratic
//! fields `Q(sqrt(-pqq'))` with `p = 5`, `q = 3`, `q' = 7 (mod 8)`.

pub mod abelian;
mod decimal;
pub mod gamma;
pub mod genusfact;
pub mod intarith;
pub mod qforms;
pub mod quadunits;
pub mod scan;
pub mod sweep;
pub mod towers;
