#![allow(clippy::needless_range_loop)]

pub mod action;
pub mod cli;
pub mod error;
pub mod exactlin;
pub mod forms;
pub mod localalg;
pub mod normalform;
pub mod polyring;

pub use error::{Error, Result};
