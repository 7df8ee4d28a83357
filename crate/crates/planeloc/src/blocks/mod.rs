//! Data-structure building blocks.

pub mod cascade;
pub mod dsu;
pub mod dynseg;
pub mod pst;
pub mod queue;
pub mod stabmin;
pub mod wbb;
