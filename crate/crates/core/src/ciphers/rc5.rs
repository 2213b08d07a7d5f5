//! RC5-32/12/16: 32-bit words, 12 rounds, 16-byte key.
//!
//! RC5 is defined little-endian: block bytes 0..4 form word A and bytes 4..8
//! form word B, each least-significant byte first.

use super::{Block64, BlockCipher64, CipherId, Direction};
use crate::Result;

pub const KEY_LEN: usize = 16;
pub const ROUNDS: usize = 12;
const TABLE_LEN: usize = 2 * (ROUNDS + 1);
const P32: u32 = 0xb7e1_5163;
const Q32: u32 = 0x9e37_79b9;

#[derive(Clone)]
pub struct Rc5 {
    s: [u32; TABLE_LEN],
}

impl Rc5 {
    pub fn new(key: &[u8]) -> Result<Self> {
        CipherId::Rc5_32.check_key(key)?;
        let mut l = [0u32; KEY_LEN / 4];
        for (w, chunk) in l.iter_mut().zip(key.chunks_exact(4)) {
            *w = u32::from_le_bytes([chunk[0], chunk[1], chunk[2], chunk[3]]);
        }

        let mut s = [0u32; TABLE_LEN];
        s[0] = P32;
        for i in 1..TABLE_LEN {
            s[i] = s[i - 1].wrapping_add(Q32);
        }

        let (mut a, mut b, mut i, mut j) = (0u32, 0u32, 0usize, 0usize);
        for _ in 0..3 * TABLE_LEN.max(l.len()) {
            s[i] = s[i].wrapping_add(a).wrapping_add(b).rotate_left(3);
            a = s[i];
            l[j] = l[j]
                .wrapping_add(a)
                .wrapping_add(b)
                .rotate_left(a.wrapping_add(b));
            b = l[j];
            i = (i + 1) % TABLE_LEN;
            j = (j + 1) % l.len();
        }
        Ok(Rc5 { s })
    }

    #[inline]
    fn split(block: Block64) -> (u32, u32) {
        let b = block.0;
        (
            u32::from_le_bytes([b[0], b[1], b[2], b[3]]),
            u32::from_le_bytes([b[4], b[5], b[6], b[7]]),
        )
    }

    #[inline]
    fn join(a: u32, b: u32) -> Block64 {
        let mut out = [0u8; 8];
        out[..4].copy_from_slice(&a.to_le_bytes());
        out[4..].copy_from_slice(&b.to_le_bytes());
        Block64(out)
    }

    fn encrypt(&self, block: Block64) -> Block64 {
        let (a, b) = Self::split(block);
        let mut a = a.wrapping_add(self.s[0]);
        let mut b = b.wrapping_add(self.s[1]);
        for i in 1..=ROUNDS {
            a = (a ^ b).rotate_left(b).wrapping_add(self.s[2 * i]);
            b = (b ^ a).rotate_left(a).wrapping_add(self.s[2 * i + 1]);
        }
        Self::join(a, b)
    }

    fn decrypt(&self, block: Block64) -> Block64 {
        let (mut a, mut b) = Self::split(block);
        for i in (1..=ROUNDS).rev() {
            b = b.wrapping_sub(self.s[2 * i + 1]).rotate_right(a) ^ a;
            a = a.wrapping_sub(self.s[2 * i]).rotate_right(b) ^ b;
        }
        Self::join(a.wrapping_sub(self.s[0]), b.wrapping_sub(self.s[1]))
    }

    /// Speed profile: the round loop fully unrolled.
    pub fn encrypt_block_unrolled(&self, block: Block64) -> Block64 {
        let s = &self.s;
        let (a, b) = Self::split(block);
        let mut a = a.wrapping_add(s[0]);
        let mut b = b.wrapping_add(s[1]);
        macro_rules! round {
            ($($i:literal)*) => {$(
                a = (a ^ b).rotate_left(b).wrapping_add(s[2 * $i]);
                b = (b ^ a).rotate_left(a).wrapping_add(s[2 * $i + 1]);
            )*};
        }
        round!(1 2 3 4 5 6 7 8 9 10 11 12);
        Self::join(a, b)
    }

    pub fn decrypt_block_unrolled(&self, block: Block64) -> Block64 {
        let s = &self.s;
        let (mut a, mut b) = Self::split(block);
        macro_rules! round {
            ($($i:literal)*) => {$(
                b = b.wrapping_sub(s[2 * $i + 1]).rotate_right(a) ^ a;
                a = a.wrapping_sub(s[2 * $i]).rotate_right(b) ^ b;
            )*};
        }
        round!(12 11 10 9 8 7 6 5 4 3 2 1);
        Self::join(a.wrapping_sub(s[0]), b.wrapping_sub(s[1]))
    }
}

impl BlockCipher64 for Rc5 {
    fn encrypt_block(&self, block: Block64) -> Block64 {
        self.encrypt(block)
    }

    fn decrypt_block(&self, block: Block64) -> Block64 {
        self.decrypt(block)
    }
}

/// One-shot RC5-32/12/16: key expansion followed by one block operation.
pub fn rc5_block(key: &[u8], block: Block64, direction: Direction) -> Result<Block64> {
    let cipher = Rc5::new(key)?;
    Ok(match direction {
        Direction::Encrypt => cipher.encrypt(block),
        Direction::Decrypt => cipher.decrypt(block),
    })
}
