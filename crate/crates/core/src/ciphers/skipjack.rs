//! Skipjack: 80-bit key, 64-bit block, 32 rounds of stepping rules A and B.

use super::{Block64, BlockCipher64, CipherId, Direction};
use crate::Result;

pub const KEY_LEN: usize = 10;
const ROUNDS: usize = 32;

#[rustfmt::skip]
static F: [u8; 256] = [
    0xa3, 0xd7, 0x09, 0x83, 0xf8, 0x48, 0xf6, 0xf4, 0xb3, 0x21, 0x15, 0x78, 0x99, 0xb1, 0xaf, 0xf9,
    0xe7, 0x2d, 0x4d, 0x8a, 0xce, 0x4c, 0xca, 0x2e, 0x52, 0x95, 0xd9, 0x1e, 0x4e, 0x38, 0x44, 0x28,
    0x0a, 0xdf, 0x02, 0xa0, 0x17, 0xf1, 0x60, 0x68, 0x12, 0xb7, 0x7a, 0xc3, 0xe9, 0xfa, 0x3d, 0x53,
    0x96, 0x84, 0x6b, 0xba, 0xf2, 0x63, 0x9a, 0x19, 0x7c, 0xae, 0xe5, 0xf5, 0xf7, 0x16, 0x6a, 0xa2,
    0x39, 0xb6, 0x7b, 0x0f, 0xc1, 0x93, 0x81, 0x1b, 0xee, 0xb4, 0x1a, 0xea, 0xd0, 0x91, 0x2f, 0xb8,
    0x55, 0xb9, 0xda, 0x85, 0x3f, 0x41, 0xbf, 0xe0, 0x5a, 0x58, 0x80, 0x5f, 0x66, 0x0b, 0xd8, 0x90,
    0x35, 0xd5, 0xc0, 0xa7, 0x33, 0x06, 0x65, 0x69, 0x45, 0x00, 0x94, 0x56, 0x6d, 0x98, 0x9b, 0x76,
    0x97, 0xfc, 0xb2, 0xc2, 0xb0, 0xfe, 0xdb, 0x20, 0xe1, 0xeb, 0xd6, 0xe4, 0xdd, 0x47, 0x4a, 0x1d,
    0x42, 0xed, 0x9e, 0x6e, 0x49, 0x3c, 0xcd, 0x43, 0x27, 0xd2, 0x07, 0xd4, 0xde, 0xc7, 0x67, 0x18,
    0x89, 0xcb, 0x30, 0x1f, 0x8d, 0xc6, 0x8f, 0xaa, 0xc8, 0x74, 0xdc, 0xc9, 0x5d, 0x5c, 0x31, 0xa4,
    0x70, 0x88, 0x61, 0x2c, 0x9f, 0x0d, 0x2b, 0x87, 0x50, 0x82, 0x54, 0x64, 0x26, 0x7d, 0x03, 0x40,
    0x34, 0x4b, 0x1c, 0x73, 0xd1, 0xc4, 0xfd, 0x3b, 0xcc, 0xfb, 0x7f, 0xab, 0xe6, 0x3e, 0x5b, 0xa5,
    0xad, 0x04, 0x23, 0x9c, 0x14, 0x51, 0x22, 0xf0, 0x29, 0x79, 0x71, 0x7e, 0xff, 0x8c, 0x0e, 0xe2,
    0x0c, 0xef, 0xbc, 0x72, 0x75, 0x6f, 0x37, 0xa1, 0xec, 0xd3, 0x8e, 0x62, 0x8b, 0x86, 0x10, 0xe8,
    0x08, 0x77, 0x11, 0xbe, 0x92, 0x4f, 0x24, 0xc5, 0x32, 0x36, 0x9d, 0xcf, 0xf3, 0xa6, 0xbb, 0xac,
    0x5e, 0x6c, 0xa9, 0x13, 0x57, 0x25, 0xb5, 0xe3, 0xbd, 0xa8, 0x3a, 0x01, 0x05, 0x59, 0x2a, 0x46,
];

#[inline]
fn is_rule_a(step: usize) -> bool {
    step < 8 || (16..24).contains(&step)
}

#[inline]
fn words(block: Block64) -> [u16; 4] {
    let v = block.to_u64();
    [
        (v >> 48) as u16,
        (v >> 32) as u16,
        (v >> 16) as u16,
        v as u16,
    ]
}

#[inline]
fn from_words(w: [u16; 4]) -> Block64 {
    Block64::from_u64(
        (u64::from(w[0]) << 48)
            | (u64::from(w[1]) << 32)
            | (u64::from(w[2]) << 16)
            | u64::from(w[3]),
    )
}

/// Key-dependent byte substitution used by the G permutation:
/// `sub(j, x) = F[x ^ cv[j mod 10]]`.
trait KeyedF {
    fn sub(&self, j: usize, x: u8) -> u8;
}

#[inline]
fn g<K: KeyedF>(k: &K, step: usize, w: u16) -> u16 {
    let base = 4 * step;
    let [mut hi, mut lo] = w.to_be_bytes();
    hi ^= k.sub(base, lo);
    lo ^= k.sub(base + 1, hi);
    hi ^= k.sub(base + 2, lo);
    lo ^= k.sub(base + 3, hi);
    u16::from_be_bytes([hi, lo])
}

#[inline]
fn g_inv<K: KeyedF>(k: &K, step: usize, w: u16) -> u16 {
    let base = 4 * step;
    let [mut hi, mut lo] = w.to_be_bytes();
    lo ^= k.sub(base + 3, hi);
    hi ^= k.sub(base + 2, lo);
    lo ^= k.sub(base + 1, hi);
    hi ^= k.sub(base, lo);
    u16::from_be_bytes([hi, lo])
}

fn encrypt<K: KeyedF>(k: &K, block: Block64) -> Block64 {
    let [mut w1, mut w2, mut w3, mut w4] = words(block);
    for step in 0..ROUNDS {
        let counter = (step + 1) as u16;
        let gw = g(k, step, w1);
        if is_rule_a(step) {
            (w1, w2, w3, w4) = (gw ^ w4 ^ counter, gw, w2, w3);
        } else {
            (w1, w2, w3, w4) = (w4, gw, w1 ^ w2 ^ counter, w3);
        }
    }
    from_words([w1, w2, w3, w4])
}

fn decrypt<K: KeyedF>(k: &K, block: Block64) -> Block64 {
    let [mut w1, mut w2, mut w3, mut w4] = words(block);
    for step in (0..ROUNDS).rev() {
        let counter = (step + 1) as u16;
        let prev_w1 = g_inv(k, step, w2);
        if is_rule_a(step) {
            (w1, w2, w3, w4) = (prev_w1, w3, w4, w1 ^ w2 ^ counter);
        } else {
            (w1, w2, w3, w4) = (prev_w1, w3 ^ prev_w1 ^ counter, w4, w1);
        }
    }
    from_words([w1, w2, w3, w4])
}

/// Size profile: only the 10-byte cryptovariable is kept.
#[derive(Clone)]
pub struct Skipjack {
    key: [u8; KEY_LEN],
}

impl Skipjack {
    pub fn new(key: &[u8]) -> Result<Self> {
        CipherId::Skipjack.check_key(key)?;
        let mut k = [0u8; KEY_LEN];
        k.copy_from_slice(key);
        Ok(Skipjack { key: k })
    }
}

impl KeyedF for Skipjack {
    #[inline]
    fn sub(&self, j: usize, x: u8) -> u8 {
        F[usize::from(x ^ self.key[j % KEY_LEN])]
    }
}

impl BlockCipher64 for Skipjack {
    fn encrypt_block(&self, block: Block64) -> Block64 {
        encrypt(self, block)
    }

    fn decrypt_block(&self, block: Block64) -> Block64 {
        decrypt(self, block)
    }
}

/// Speed profile: one 256-byte table per key byte, `F[x ^ cv[j]]`
/// precomputed.
#[derive(Clone)]
pub struct SkipjackTables {
    tables: [[u8; 256]; KEY_LEN],
}

impl SkipjackTables {
    pub fn new(key: &[u8]) -> Result<Self> {
        CipherId::Skipjack.check_key(key)?;
        let mut tables = [[0u8; 256]; KEY_LEN];
        for (table, &kb) in tables.iter_mut().zip(key) {
            for (x, entry) in table.iter_mut().enumerate() {
                *entry = F[x ^ usize::from(kb)];
            }
        }
        Ok(SkipjackTables { tables })
    }
}

impl KeyedF for SkipjackTables {
    #[inline(always)]
    fn sub(&self, j: usize, x: u8) -> u8 {
        self.tables[j % KEY_LEN][usize::from(x)]
    }
}

impl BlockCipher64 for SkipjackTables {
    fn encrypt_block(&self, block: Block64) -> Block64 {
        encrypt(self, block)
    }

    fn decrypt_block(&self, block: Block64) -> Block64 {
        decrypt(self, block)
    }
}

/// One-shot Skipjack: key setup and a single block operation.
pub fn skipjack_block(key: &[u8], block: Block64, direction: Direction) -> Result<Block64> {
    let cipher = Skipjack::new(key)?;
    Ok(match direction {
        Direction::Encrypt => cipher.encrypt_block(block),
        Direction::Decrypt => cipher.decrypt_block(block),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;

    #[test]
    fn f_table_is_a_permutation() {
        let mut seen = [false; 256];
        for &v in F.iter() {
            assert!(!seen[usize::from(v)]);
            seen[usize::from(v)] = true;
        }
    }

    #[test]
    fn published_vector() {
        let key = hex::decode("00998877665544332211").unwrap();
        let pt = Block64::from_u64(0x3322_1100_ddcc_bbaa);
        let ct = skipjack_block(&key, pt, Direction::Encrypt).unwrap();
        assert_eq!(ct, Block64::from_u64(0x2587_cae2_7a12_d300));
        assert_eq!(skipjack_block(&key, ct, Direction::Decrypt).unwrap(), pt);
    }

    #[test]
    fn reference_vectors() {
        // Generated with the reference implementation before the build.
        let cases = [
            (
                "a54dca182530bb1d6d13",
                0x2cde_d623_7b2e_d91e,
                0x5d2c_4746_e082_ee54,
            ),
            (
                "3f721fcb1971174494d6",
                0x493c_9d5c_3460_be31,
                0xb5f5_cae6_a1ae_db43,
            ),
            (
                "201e69fedaa0eee8b999",
                0x7f5c_7c29_99fd_afe5,
                0x315a_b198_e4b3_60ae,
            ),
        ];
        for (key, pt, ct) in cases {
            let key = hex::decode(key).unwrap();
            let tables = SkipjackTables::new(&key).unwrap();
            assert_eq!(
                tables.encrypt_block(Block64::from_u64(pt)),
                Block64::from_u64(ct)
            );
            assert_eq!(
                tables.decrypt_block(Block64::from_u64(ct)),
                Block64::from_u64(pt)
            );
        }
    }

    #[test]
    fn rejects_nine_byte_key() {
        let err = skipjack_block(&[0; 9], Block64::ZERO, Direction::Encrypt).unwrap_err();
        assert!(matches!(
            err,
            Error::KeyLength {
                cipher: CipherId::Skipjack,
                expected: 10,
                actual: 9
            }
        ));
    }
}
