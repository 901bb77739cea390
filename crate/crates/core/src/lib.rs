//! Free monoids on pointed objects of finite monoidal categories, built as
//! a chain of coequalizer stages over pluggable backends.

pub mod engine;
pub mod error;
pub mod finset;
pub mod fingrp;
pub mod gen;
pub mod kernel;
pub mod lemmas;
pub mod oracles;
pub mod span;

pub use error::{Error, Result};
pub use kernel::{ArrowPair, Backend, Capabilities, Coproduct, Morphism, PointedObject, RegularEpi};
