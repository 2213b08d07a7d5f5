//! CBC-MAC truncated to a 4-byte tag.
//!
//! The message is padded with [`pad_iso`] and chained under an all-zero IV;
//! the tag is the first four bytes of the last chaining value. Plain CBC-MAC
//! is only sound for messages of one fixed length, so callers bind the
//! length into the first block (the link layer does this through its header).

use std::fmt;

use crate::ciphers::{Block64, BlockCipher64, BLOCK_LEN};
use crate::modes::pad_iso;
use crate::{Error, Result};

pub const TAG_LEN: usize = 4;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Tag32(pub [u8; TAG_LEN]);

impl Tag32 {
    pub fn from_slice(bytes: &[u8]) -> Result<Self> {
        let arr = bytes.try_into().map_err(|_| Error::BlockLength {
            expected: TAG_LEN,
            actual: bytes.len(),
        })?;
        Ok(Tag32(arr))
    }

    /// Comparison without an early exit on the first differing byte.
    pub fn matches(&self, other: &Tag32) -> bool {
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(0u8, |acc, (a, b)| acc | (a ^ b))
            == 0
    }
}

impl fmt::Debug for Tag32 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tag32({})", hex::encode(self.0))
    }
}

impl fmt::Display for Tag32 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&hex::encode(self.0))
    }
}

pub fn cbc_mac<C: BlockCipher64 + ?Sized>(cipher: &C, message: &[u8]) -> Tag32 {
    let padded = pad_iso(message);
    let mut chain = Block64::ZERO;
    for chunk in padded.chunks_exact(BLOCK_LEN) {
        let mut block = chain.0;
        for (c, m) in block.iter_mut().zip(chunk) {
            *c ^= m;
        }
        chain = cipher.encrypt_block(Block64(block));
    }
    let mut tag = [0u8; TAG_LEN];
    tag.copy_from_slice(&chain.0[..TAG_LEN]);
    Tag32(tag)
}
