// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

use crate::term_graph::Generator;

/// Errors raised by graph construction and the algebraic operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("xi({0},{1}) is not a generator: both arities must be positive and (1,1) is excluded")]
    InvalidGenerator(u32, u32),

    #[error("biarity mismatch: {context}: expected {expected:?}, found {found:?}")]
    ArityMismatch {
        context: &'static str,
        expected: (u32, u32),
        found: (u32, u32),
    },

    #[error("index {index} out of range 1..={max} for {context}")]
    IndexOutOfRange {
        context: &'static str,
        index: u32,
        max: u32,
    },

    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<u32>),

    #[error("malformed wiring: {0}")]
    Wiring(String),

    #[error("wiring contains a directed cycle")]
    Cycle,

    #[error("no differential entry for {0}")]
    MissingEntry(Generator),

    #[error("{0}")]
    Unsupported(String),

    #[error("linear system has no solution")]
    Inconsistent,

    #[error("{line}:{col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },

    #[error("serialization error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
