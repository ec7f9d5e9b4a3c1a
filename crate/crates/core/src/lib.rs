#![allow(clippy::needless_range_loop)]

pub mod blocks;
pub mod cohom2;
pub mod error;
pub mod ffield;
pub mod groups;
pub mod modrep;
pub mod rng;
pub mod scott;

pub use error::{Error, Result};
