//! OFB and CBC over any [`BlockCipher64`], plus ISO/IEC 7816-4 style padding.
//!
//! OFB here is full-block (64-bit) feedback: keystream block `j` is the IV
//! encrypted `j + 1` times. Encryption and decryption are the same
//! operation and the output is exactly as long as the input.

use std::fmt;

use crate::ciphers::{Block64, BlockCipher64, BLOCK_LEN};
use crate::{Error, Result};

/// Working state of the OFB mode: the feedback register.
pub const OFB_STATE_BYTES: usize = std::mem::size_of::<Block64>();
/// Working state of the CBC mode: the chaining value and the saved
/// ciphertext block needed to decrypt in place.
pub const CBC_STATE_BYTES: usize = 2 * std::mem::size_of::<Block64>();

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Iv64([u8; BLOCK_LEN]);

impl Iv64 {
    pub const fn new(bytes: [u8; BLOCK_LEN]) -> Self {
        Iv64(bytes)
    }

    pub fn from_slice(bytes: &[u8]) -> Result<Self> {
        Ok(Iv64(Block64::from_slice(bytes)?.0))
    }

    pub fn as_bytes(&self) -> &[u8; BLOCK_LEN] {
        &self.0
    }

    pub fn as_block(&self) -> Block64 {
        Block64(self.0)
    }
}

impl fmt::Debug for Iv64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Iv64({})", hex::encode(self.0))
    }
}

/// XORs `data` in place with the OFB keystream.
pub fn ofb_apply<C: BlockCipher64 + ?Sized>(cipher: &C, iv: Iv64, data: &mut [u8]) {
    let mut register = iv.as_block();
    let mut chunks = data.chunks_exact_mut(BLOCK_LEN);
    for chunk in &mut chunks {
        register = cipher.encrypt_block(register);
        let word = u64::from_be_bytes((&*chunk).try_into().unwrap()) ^ register.to_u64();
        chunk.copy_from_slice(&word.to_be_bytes());
    }
    let tail = chunks.into_remainder();
    if !tail.is_empty() {
        register = cipher.encrypt_block(register);
        for (d, k) in tail.iter_mut().zip(register.0.iter()) {
            *d ^= k;
        }
    }
}

pub fn ofb_process<C: BlockCipher64 + ?Sized>(cipher: &C, iv: Iv64, data: &[u8]) -> Vec<u8> {
    let mut out = data.to_vec();
    ofb_apply(cipher, iv, &mut out);
    out
}

fn check_aligned(len: usize) -> Result<()> {
    if len == 0 || !len.is_multiple_of(BLOCK_LEN) {
        return Err(Error::BlockAlignment { len });
    }
    Ok(())
}

pub fn cbc_encrypt<C: BlockCipher64 + ?Sized>(cipher: &C, iv: Iv64, pt: &[u8]) -> Result<Vec<u8>> {
    check_aligned(pt.len())?;
    let mut out = Vec::with_capacity(pt.len());
    let mut chain = iv.as_block();
    for chunk in pt.chunks_exact(BLOCK_LEN) {
        chain = cipher.encrypt_block(Block64::from_slice(chunk)?.xor(chain));
        out.extend_from_slice(&chain.0);
    }
    Ok(out)
}

pub fn cbc_decrypt<C: BlockCipher64 + ?Sized>(cipher: &C, iv: Iv64, ct: &[u8]) -> Result<Vec<u8>> {
    check_aligned(ct.len())?;
    let mut out = Vec::with_capacity(ct.len());
    let mut chain = iv.as_block();
    for chunk in ct.chunks_exact(BLOCK_LEN) {
        let c = Block64::from_slice(chunk)?;
        out.extend_from_slice(&cipher.decrypt_block(c).xor(chain).0);
        chain = c;
    }
    Ok(out)
}

/// Appends `0x80` and then the fewest zero bytes that reach a block multiple.
/// Always adds at least one byte, so an aligned input gains a whole block.
pub fn pad_iso(data: &[u8]) -> Vec<u8> {
    let padded_len = padded_len(data.len());
    let mut out = Vec::with_capacity(padded_len);
    out.extend_from_slice(data);
    out.push(0x80);
    out.resize(padded_len, 0);
    out
}

pub fn padded_len(len: usize) -> usize {
    BLOCK_LEN * ((len + 1).div_ceil(BLOCK_LEN))
}

/// Inverse of [`pad_iso`].
pub fn unpad_iso(data: &[u8]) -> Result<&[u8]> {
    if data.is_empty() || !data.len().is_multiple_of(BLOCK_LEN) {
        return Err(Error::Padding);
    }
    let marker = data.iter().rposition(|&b| b != 0).ok_or(Error::Padding)?;
    if data[marker] != 0x80 || data.len() - marker > BLOCK_LEN {
        return Err(Error::Padding);
    }
    Ok(&data[..marker])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ciphers::{BlockCipherHandle, CipherId};

    fn misty() -> BlockCipherHandle {
        BlockCipherHandle::new(
            CipherId::Misty1,
            &hex::decode("00112233445566778899aabbccddeeff").unwrap(),
        )
        .unwrap()
    }

    const IV: Iv64 = Iv64::new([0, 1, 0, 2, 0, 0, 0, 1]);

    #[test]
    fn pad_examples() {
        assert_eq!(pad_iso(&[]), [0x80, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(pad_iso(&[7; 8]).len(), 16);
        assert_eq!(
            pad_iso(&[0xaa, 0xbb, 0xcc, 0xdd, 0xee]),
            [0xaa, 0xbb, 0xcc, 0xdd, 0xee, 0x80, 0, 0]
        );
        for len in 0..40 {
            assert_eq!(pad_iso(&vec![0; len]).len(), padded_len(len));
            assert_eq!(padded_len(len), 8 * (len + 1).div_ceil(8));
        }
    }

    #[test]
    fn unpad_rejects_garbage() {
        assert!(unpad_iso(&[]).is_err());
        assert!(unpad_iso(&[0; 8]).is_err());
        assert!(unpad_iso(&[1, 2, 3, 4, 5, 6, 7, 8]).is_err());
        let mut long = vec![0x80];
        long.resize(16, 0);
        assert!(unpad_iso(&long).is_err());
        assert_eq!(unpad_iso(&pad_iso(&[0x80, 0, 0])).unwrap(), [0x80, 0, 0]);
    }

    #[test]
    fn ofb_empty_and_involution() {
        let c = misty();
        assert!(ofb_process(&c, IV, &[]).is_empty());
        let data: Vec<u8> = (0..29).collect();
        let ct = ofb_process(&c, IV, &data);
        assert_eq!(ct.len(), data.len());
        assert_ne!(ct, data);
        assert_eq!(ofb_process(&c, IV, &ct), data);
    }

    #[test]
    fn ofb_first_keystream_block_is_encrypted_iv() {
        let c = misty();
        let ks = ofb_process(&c, IV, &[0; 16]);
        let e1 = c.encrypt_block(IV.as_block());
        let e2 = c.encrypt_block(e1);
        assert_eq!(&ks[..8], &e1.0);
        assert_eq!(&ks[8..], &e2.0);
    }

    #[test]
    fn cbc_single_block_is_definitional() {
        let c = misty();
        let pt = Block64::from_u64(0x0123_4567_89ab_cdef);
        let ct = cbc_encrypt(&c, IV, &pt.0).unwrap();
        assert_eq!(ct, c.encrypt_block(pt.xor(IV.as_block())).0);
        assert_eq!(cbc_decrypt(&c, IV, &ct).unwrap(), pt.0);
    }

    #[test]
    fn cbc_requires_alignment() {
        let c = misty();
        assert!(matches!(
            cbc_encrypt(&c, IV, &[0; 7]),
            Err(Error::BlockAlignment { len: 7 })
        ));
        assert!(matches!(
            cbc_encrypt(&c, IV, &[]),
            Err(Error::BlockAlignment { len: 0 })
        ));
        assert!(cbc_decrypt(&c, IV, &[0; 12]).is_err());
    }

    #[test]
    fn cbc_error_confined_to_two_blocks() {
        let c = misty();
        let pt: Vec<u8> = (0..48).collect();
        let ct = cbc_encrypt(&c, IV, &pt).unwrap();
        for block in 0..6 {
            let mut bad = ct.clone();
            bad[block * 8 + 3] ^= 0x10;
            let dec = cbc_decrypt(&c, IV, &bad).unwrap();
            for (j, (d, p)) in dec.chunks(8).zip(pt.chunks(8)).enumerate() {
                let expect_damage = j == block || j == block + 1;
                assert_eq!(d != p, expect_damage, "flip in {block}, block {j}");
            }
        }
    }
}
