use alloc::string::String;

/// Outcome of a successful verification. Failures come back as
/// [`Error::Mismatch`](crate::Error::Mismatch) instead.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub check: String,
    pub instance: String,
    /// Number of individual identities compared.
    pub cases: usize,
}

impl Report {
    pub fn new(check: impl Into<String>, instance: impl Into<String>, cases: usize) -> Self {
        Report {
            check: check.into(),
            instance: instance.into(),
            cases,
        }
    }
}
