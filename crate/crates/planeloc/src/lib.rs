//! Point location in incremental planar subdivisions.

#![allow(clippy::result_large_err)]

pub mod bench;
pub mod blocks;
pub mod find_cc;
pub mod gen;
pub mod geom;
pub mod locate_cc;
pub mod locator;
pub mod oracle;
pub mod replay;
pub mod stab_lowest;
pub mod subdivision;
pub mod workload;
