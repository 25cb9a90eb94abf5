//! Command-line layer: document formats, certificates and command dispatch.

pub mod cert;
pub mod doc;
pub mod run;

/// Bad input: unreadable files, malformed documents, invalid parameters. Exit code 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

impl From<mbs_core::Error> for InputError {
    fn from(e: mbs_core::Error) -> Self {
        InputError(e.to_string())
    }
}

pub const EXIT_INPUT: i32 = 3;
