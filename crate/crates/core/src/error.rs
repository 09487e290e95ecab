use alloc::string::String;
use core::fmt;

use thiserror::Error;

use crate::reasoner::Conflict;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NameKind {
    Concept,
    Role,
    Individual,
}

impl fmt::Display for NameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NameKind::Concept => "concept",
            NameKind::Role => "role",
            NameKind::Individual => "individual",
        })
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum KbError {
    #[error("the profile has no strata")]
    EmptyProfile,
    #[error("name `{name}` used as {first} and as {second}")]
    NamespaceClash {
        name: String,
        first: NameKind,
        second: NameKind,
    },
    #[error("stratum {stratum} is inconsistent with the TBox: conflict {conflict}")]
    InconsistentStratum { stratum: usize, conflict: Conflict },
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("prefix length {k} out of range for {m} strata")]
pub struct PrefixOutOfRange {
    pub k: usize,
    pub m: usize,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum QueryError {
    #[error("head variable ?{0} does not occur in the body")]
    UnboundHeadVariable(String),
    #[error("query body is empty")]
    EmptyBody,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("infeasible generator spec: {0}")]
    Infeasible(String),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("oracle input of size {size} exceeds the limit of {limit}")]
pub struct OracleTooLarge {
    pub size: usize,
    pub limit: usize,
}
