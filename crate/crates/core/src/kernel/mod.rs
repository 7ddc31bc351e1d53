//! Codes, pairing, finite-set coding, names and the fuel discipline.

mod code;
mod fuel;
mod name;

pub use code::{finset_decode, finset_encode, finset_singleton, pair, unpair, Nat};
pub use fuel::{Fuel, Meter, SemiResult, Stall};
pub use name::{format_prefix, parse_prefix, Name, Source};
