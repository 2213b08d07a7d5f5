use std::fmt;

use crate::ciphers::CipherId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{cipher} requires a {expected}-byte key, got {actual} bytes")]
    KeyLength {
        cipher: CipherId,
        expected: usize,
        actual: usize,
    },

    #[error("expected exactly {expected} bytes, got {actual}")]
    BlockLength { expected: usize, actual: usize },

    #[error("input length {len} is not a nonzero multiple of the 8-byte block")]
    BlockAlignment { len: usize },

    #[error("invalid padding")]
    Padding,

    #[error("payload of {len} bytes exceeds the 255-byte frame limit")]
    PayloadLength { len: usize },

    #[error("frame counter exhausted; the link must be rekeyed")]
    CounterWrap,

    #[error("encryption and MAC keys must differ")]
    IdenticalSubkeys,

    #[error("malformed frame: {0}")]
    MalformedFrame(String),

    #[error("frame authentication failed")]
    BadMac,

    #[error("replayed frame from {src:#06x}: counter {ctr} <= last accepted {last}")]
    ReplayRejected { src: u16, ctr: u32, last: u32 },

    #[error("{}", Located(*.line, .msg))]
    Config { line: Option<usize>, msg: String },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config {
            line: None,
            msg: msg.into(),
        }
    }

    pub(crate) fn config_at(line: usize, msg: impl Into<String>) -> Self {
        Error::Config {
            line: Some(line),
            msg: msg.into(),
        }
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

struct Located<'a>(Option<usize>, &'a String);

impl fmt::Display for Located<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(line) => write!(f, "configuration error at line {line}: {}", self.1),
            None => write!(f, "configuration error: {}", self.1),
        }
    }
}
