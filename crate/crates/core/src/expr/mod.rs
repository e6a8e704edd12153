//! Exact arithmetic kernel.

pub mod atoms;
pub mod frac;
pub mod gcd;
pub mod monomial;
pub mod poly;
pub mod ratexpr;
pub mod render;
pub mod var;

pub use atoms::{arctan_atom, exp_atom, AtomDef, AtomTable};
pub use frac::Frac;
pub use gcd::{content_in, gcd, lcm, primitive_part_in, provably_coprime};
pub use monomial::Monomial;
pub use poly::{exact_divide, int, rat, Poly};
pub use ratexpr::{arith, canonical_string, ArithOp, RatExpr};
pub use var::{Name, VarId};
