use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("possibly infinite-dimensional: nonzero residue path of length {0}")]
    PossiblyInfinite(usize),
    #[error("splitting field insufficient for {0}")]
    SplittingField(String),
    #[error("not in the subcategory: {0}")]
    NotMember(String),
    #[error("cannot lift: Tier-C unknown ({0})")]
    Unknown(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
