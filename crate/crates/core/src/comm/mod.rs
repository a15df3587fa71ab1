//! Two-party simulations: pointer following, the linear-decision-tree
//! protocol compiler, and the disjointness-to-parity map.

mod disjointness;
mod pointer;
mod protocol;

pub use disjointness::{disj_parity_map, parse_bits, ParityOracle};
pub use pointer::{embed_instance, label, pi_k, PointerInstance, Vertex};
pub use protocol::{
    bit_bound, element_bits, ldt_to_protocol, Message, Party, ProtocolRun, BIT_CONSTANT,
};
