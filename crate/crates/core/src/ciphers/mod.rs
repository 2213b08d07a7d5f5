//! 64-bit block ciphers behind one interface.
//!
//! Every cipher exists in two build profiles mirroring the usual
//! size-optimized / speed-optimized split of embedded crypto libraries:
//!
//! * [`Profile::Size`] keeps only the minimal key material and derives
//!   round keys (or key-dependent table entries) on the fly.
//! * [`Profile::Speed`] expands everything it can at key-setup time.
//!
//! Both profiles are bit-identical; they differ in key-setup cost, per-block
//! cost and the size of the prepared key state.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

pub mod misty1;
pub mod rc5;
mod sbox;
pub mod skipjack;

pub use misty1::{
    misty1_decrypt_block, misty1_encrypt_block, misty1_expand_key, misty1_fi, Misty1RoundKeys,
    Misty1Schedule,
};
pub use rc5::{rc5_block, Rc5};
pub use skipjack::{skipjack_block, Skipjack, SkipjackTables};

pub const BLOCK_LEN: usize = 8;

/// An 8-byte cipher block. Byte 0 is the most significant.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Block64(pub [u8; BLOCK_LEN]);

impl Block64 {
    pub const ZERO: Block64 = Block64([0; BLOCK_LEN]);

    pub fn from_slice(bytes: &[u8]) -> Result<Self> {
        let arr: [u8; BLOCK_LEN] = bytes.try_into().map_err(|_| Error::BlockLength {
            expected: BLOCK_LEN,
            actual: bytes.len(),
        })?;
        Ok(Block64(arr))
    }

    pub fn from_u64(v: u64) -> Self {
        Block64(v.to_be_bytes())
    }

    pub fn to_u64(self) -> u64 {
        u64::from_be_bytes(self.0)
    }

    pub fn as_bytes(&self) -> &[u8; BLOCK_LEN] {
        &self.0
    }

    #[inline]
    pub fn xor(self, other: Block64) -> Block64 {
        Block64::from_u64(self.to_u64() ^ other.to_u64())
    }

    #[inline]
    pub(crate) fn halves(self) -> (u32, u32) {
        let v = self.to_u64();
        ((v >> 32) as u32, v as u32)
    }

    #[inline]
    pub(crate) fn from_halves(hi: u32, lo: u32) -> Block64 {
        Block64::from_u64((u64::from(hi) << 32) | u64::from(lo))
    }
}

impl From<[u8; BLOCK_LEN]> for Block64 {
    fn from(b: [u8; BLOCK_LEN]) -> Self {
        Block64(b)
    }
}

impl fmt::Debug for Block64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Block64({})", hex::encode(self.0))
    }
}

impl fmt::Display for Block64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&hex::encode(self.0))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CipherId {
    Misty1,
    Skipjack,
    Rc5_32,
}

impl CipherId {
    pub const ALL: [CipherId; 3] = [CipherId::Misty1, CipherId::Skipjack, CipherId::Rc5_32];

    pub fn name(self) -> &'static str {
        match self {
            CipherId::Misty1 => "misty1",
            CipherId::Skipjack => "skipjack",
            CipherId::Rc5_32 => "rc5-32",
        }
    }

    /// The single key length each cipher is used with.
    pub fn key_len(self) -> usize {
        match self {
            CipherId::Misty1 => misty1::KEY_LEN,
            CipherId::Skipjack => skipjack::KEY_LEN,
            CipherId::Rc5_32 => rc5::KEY_LEN,
        }
    }

    pub(crate) fn check_key(self, key: &[u8]) -> Result<()> {
        if key.len() != self.key_len() {
            return Err(Error::KeyLength {
                cipher: self,
                expected: self.key_len(),
                actual: key.len(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for CipherId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CipherId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "misty1" | "misty" => Ok(CipherId::Misty1),
            "skipjack" => Ok(CipherId::Skipjack),
            "rc5-32" | "rc5" => Ok(CipherId::Rc5_32),
            other => Err(Error::config(format!("unknown cipher `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Profile {
    #[default]
    Size,
    Speed,
}

impl Profile {
    pub const ALL: [Profile; 2] = [Profile::Size, Profile::Speed];

    pub fn name(self) -> &'static str {
        match self {
            Profile::Size => "size",
            Profile::Speed => "speed",
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "size" => Ok(Profile::Size),
            "speed" => Ok(Profile::Speed),
            other => Err(Error::config(format!("unknown profile `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Encrypt,
    Decrypt,
}

/// A keyed 64-bit block cipher.
pub trait BlockCipher64 {
    fn encrypt_block(&self, block: Block64) -> Block64;
    fn decrypt_block(&self, block: Block64) -> Block64;
}

impl<C: BlockCipher64 + ?Sized> BlockCipher64 for &C {
    fn encrypt_block(&self, block: Block64) -> Block64 {
        (**self).encrypt_block(block)
    }

    fn decrypt_block(&self, block: Block64) -> Block64 {
        (**self).decrypt_block(block)
    }
}

/// Prepared key material for any supported cipher and profile.
#[derive(Clone)]
pub enum BlockCipherHandle {
    Misty1(Misty1Schedule),
    Misty1Speed(Box<Misty1RoundKeys>),
    Skipjack(Skipjack),
    SkipjackSpeed(Box<SkipjackTables>),
    Rc5(Rc5),
    Rc5Speed(Rc5),
}

impl BlockCipherHandle {
    /// Size-profile handle.
    pub fn new(cipher: CipherId, key: &[u8]) -> Result<Self> {
        Self::with_profile(cipher, Profile::Size, key)
    }

    pub fn with_profile(cipher: CipherId, profile: Profile, key: &[u8]) -> Result<Self> {
        Ok(match (cipher, profile) {
            (CipherId::Misty1, Profile::Size) => Self::Misty1(misty1_expand_key(key)?),
            (CipherId::Misty1, Profile::Speed) => {
                Self::Misty1Speed(Box::new(Misty1RoundKeys::new(&misty1_expand_key(key)?)))
            }
            (CipherId::Skipjack, Profile::Size) => Self::Skipjack(Skipjack::new(key)?),
            (CipherId::Skipjack, Profile::Speed) => {
                Self::SkipjackSpeed(Box::new(SkipjackTables::new(key)?))
            }
            (CipherId::Rc5_32, Profile::Size) => Self::Rc5(Rc5::new(key)?),
            (CipherId::Rc5_32, Profile::Speed) => Self::Rc5Speed(Rc5::new(key)?),
        })
    }

    pub fn cipher(&self) -> CipherId {
        match self {
            Self::Misty1(_) | Self::Misty1Speed(_) => CipherId::Misty1,
            Self::Skipjack(_) | Self::SkipjackSpeed(_) => CipherId::Skipjack,
            Self::Rc5(_) | Self::Rc5Speed(_) => CipherId::Rc5_32,
        }
    }

    pub fn profile(&self) -> Profile {
        match self {
            Self::Misty1(_) | Self::Skipjack(_) | Self::Rc5(_) => Profile::Size,
            Self::Misty1Speed(_) | Self::SkipjackSpeed(_) | Self::Rc5Speed(_) => Profile::Speed,
        }
    }

    /// Bytes of prepared key state this handle keeps for the block operation.
    pub fn key_state_bytes(&self) -> usize {
        key_state_bytes(self.cipher(), self.profile())
    }
}

/// Static size of the prepared key state for a cipher/profile pair.
pub fn key_state_bytes(cipher: CipherId, profile: Profile) -> usize {
    use std::mem::size_of;
    match (cipher, profile) {
        (CipherId::Misty1, Profile::Size) => size_of::<Misty1Schedule>(),
        (CipherId::Misty1, Profile::Speed) => size_of::<Misty1RoundKeys>(),
        (CipherId::Skipjack, Profile::Size) => size_of::<Skipjack>(),
        (CipherId::Skipjack, Profile::Speed) => size_of::<SkipjackTables>(),
        (CipherId::Rc5_32, _) => size_of::<Rc5>(),
    }
}

impl BlockCipher64 for BlockCipherHandle {
    #[inline]
    fn encrypt_block(&self, block: Block64) -> Block64 {
        match self {
            Self::Misty1(s) => s.encrypt_block(block),
            Self::Misty1Speed(k) => k.encrypt_block(block),
            Self::Skipjack(s) => s.encrypt_block(block),
            Self::SkipjackSpeed(t) => t.encrypt_block(block),
            Self::Rc5(r) => r.encrypt_block(block),
            Self::Rc5Speed(r) => r.encrypt_block_unrolled(block),
        }
    }

    #[inline]
    fn decrypt_block(&self, block: Block64) -> Block64 {
        match self {
            Self::Misty1(s) => s.decrypt_block(block),
            Self::Misty1Speed(k) => k.decrypt_block(block),
            Self::Skipjack(s) => s.decrypt_block(block),
            Self::SkipjackSpeed(t) => t.decrypt_block(block),
            Self::Rc5(r) => r.decrypt_block(block),
            Self::Rc5Speed(r) => r.decrypt_block_unrolled(block),
        }
    }
}

impl fmt::Debug for BlockCipherHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Key material is deliberately not printed.
        f.debug_struct("BlockCipherHandle")
            .field("cipher", &self.cipher())
            .field("profile", &self.profile())
            .finish_non_exhaustive()
    }
}

/// One-shot block operation for any cipher.
pub fn process_block(
    cipher: CipherId,
    key: &[u8],
    block: Block64,
    direction: Direction,
) -> Result<Block64> {
    let handle = BlockCipherHandle::new(cipher, key)?;
    Ok(match direction {
        Direction::Encrypt => handle.encrypt_block(block),
        Direction::Decrypt => handle.decrypt_block(block),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_from_slice_rejects_wrong_length() {
        assert!(matches!(
            Block64::from_slice(&[0; 7]),
            Err(Error::BlockLength {
                expected: 8,
                actual: 7
            })
        ));
        assert!(Block64::from_slice(&[0; 9]).is_err());
        let b = Block64::from_slice(&[1, 2, 3, 4, 5, 6, 7, 8]).unwrap();
        assert_eq!(b.to_u64(), 0x0102030405060708);
    }

    #[test]
    fn key_length_is_bound_to_cipher() {
        assert_eq!(CipherId::Misty1.key_len(), 16);
        assert_eq!(CipherId::Skipjack.key_len(), 10);
        assert_eq!(CipherId::Rc5_32.key_len(), 16);
        for id in CipherId::ALL {
            for profile in Profile::ALL {
                let err = BlockCipherHandle::with_profile(id, profile, &[0; 15]).unwrap_err();
                assert!(matches!(err, Error::KeyLength { cipher, .. } if cipher == id));
            }
        }
    }

    #[test]
    fn cipher_names_round_trip() {
        for id in CipherId::ALL {
            assert_eq!(id.name().parse::<CipherId>().unwrap(), id);
        }
        assert!("des".parse::<CipherId>().is_err());
    }

    #[test]
    fn profiles_agree() {
        let key16: Vec<u8> = (0u8..16).map(|i| i.wrapping_mul(29) ^ 0x5a).collect();
        for id in CipherId::ALL {
            let key = &key16[..id.key_len()];
            let size = BlockCipherHandle::with_profile(id, Profile::Size, key).unwrap();
            let speed = BlockCipherHandle::with_profile(id, Profile::Speed, key).unwrap();
            let mut b = Block64::from_u64(0x0123_4567_89ab_cdef);
            for _ in 0..64 {
                let c = size.encrypt_block(b);
                assert_eq!(c, speed.encrypt_block(b), "{id}");
                assert_eq!(speed.decrypt_block(c), b, "{id}");
                b = c;
            }
        }
    }

    #[test]
    fn speed_profile_keeps_more_key_state() {
        for id in [CipherId::Misty1, CipherId::Skipjack] {
            assert!(key_state_bytes(id, Profile::Speed) > key_state_bytes(id, Profile::Size));
        }
    }
}
