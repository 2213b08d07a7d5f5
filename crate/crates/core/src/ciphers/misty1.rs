//! MISTY1: 64-bit block, 128-bit key, 8 rounds (8 FO and 10 FL applications).
//!
//! Dataflow and key schedule follow RFC 2994. Byte order is big-endian
//! throughout: key word `i` is key bytes `2i..2i+2`, and the block is split
//! into a left half (bytes 0..4) and right half (bytes 4..8).

pub use super::sbox::{S7, S9};
use super::{Block64, BlockCipher64, CipherId};
use crate::Result;

pub const KEY_LEN: usize = 16;
pub const ROUNDS: usize = 8;
const FL_LAYERS: usize = ROUNDS + 2;

/// The 16-bit FI function: a 9/7-bit split with S9, S7, S9 and subkey mixing.
#[inline]
pub fn misty1_fi(x: u16, subkey: u16) -> u16 {
    let mut d9 = x >> 7;
    let mut d7 = x & 0x7f;
    d9 = S9[d9 as usize] ^ d7;
    d7 = u16::from(S7[d7 as usize]) ^ (d9 & 0x7f);
    d7 ^= subkey >> 9;
    d9 ^= subkey & 0x1ff;
    d9 = S9[d9 as usize] ^ d7;
    (d7 << 9) | d9
}

/// Expanded key: the eight raw key words and eight derived words.
#[derive(Clone, PartialEq, Eq)]
pub struct Misty1Schedule {
    k: [u16; 8],
    k_prime: [u16; 8],
}

pub fn misty1_expand_key(key: &[u8]) -> Result<Misty1Schedule> {
    CipherId::Misty1.check_key(key)?;
    let mut k = [0u16; 8];
    for (w, pair) in k.iter_mut().zip(key.chunks_exact(2)) {
        *w = u16::from_be_bytes([pair[0], pair[1]]);
    }
    let mut k_prime = [0u16; 8];
    for i in 0..8 {
        k_prime[i] = misty1_fi(k[i], k[(i + 1) % 8]);
    }
    Ok(Misty1Schedule { k, k_prime })
}

impl Misty1Schedule {
    pub fn k(&self) -> &[u16; 8] {
        &self.k
    }

    pub fn k_prime(&self) -> &[u16; 8] {
        &self.k_prime
    }

    // KO_r1..KO_r4, then KI_r1..KI_r3.
    #[inline]
    fn fo_keys(&self, round: usize) -> [u16; 7] {
        let k = &self.k;
        let kp = &self.k_prime;
        [
            k[round],
            k[(round + 2) % 8],
            k[(round + 7) % 8],
            k[(round + 4) % 8],
            kp[(round + 5) % 8],
            kp[(round + 1) % 8],
            kp[(round + 3) % 8],
        ]
    }

    // (KL_1, KL_2) for FL layer `n`; even and odd layers draw from
    // different halves of the schedule.
    #[inline]
    fn fl_keys(&self, n: usize) -> [u16; 2] {
        let h = n / 2;
        if n.is_multiple_of(2) {
            [self.k[h], self.k_prime[(h + 6) % 8]]
        } else {
            [self.k_prime[(h + 2) % 8], self.k[(h + 4) % 8]]
        }
    }
}

#[inline]
fn fo(x: u32, keys: &[u16; 7]) -> u32 {
    let mut l = (x >> 16) as u16;
    let mut r = x as u16;
    l ^= keys[0];
    l = misty1_fi(l, keys[4]) ^ r;
    r ^= keys[1];
    r = misty1_fi(r, keys[5]) ^ l;
    l ^= keys[2];
    l = misty1_fi(l, keys[6]) ^ r;
    r ^= keys[3];
    (u32::from(r) << 16) | u32::from(l)
}

#[inline]
fn fl(x: u32, kl: [u16; 2]) -> u32 {
    let mut l = (x >> 16) as u16;
    let mut r = x as u16;
    r ^= l & kl[0];
    l ^= r | kl[1];
    (u32::from(l) << 16) | u32::from(r)
}

#[inline]
fn fl_inv(x: u32, kl: [u16; 2]) -> u32 {
    let mut l = (x >> 16) as u16;
    let mut r = x as u16;
    l ^= r | kl[1];
    r ^= l & kl[0];
    (u32::from(l) << 16) | u32::from(r)
}

/// Round-key access shared by both profiles.
trait RoundKeys {
    fn fo_keys(&self, round: usize) -> [u16; 7];
    fn fl_keys(&self, n: usize) -> [u16; 2];
}

impl RoundKeys for Misty1Schedule {
    #[inline]
    fn fo_keys(&self, round: usize) -> [u16; 7] {
        Misty1Schedule::fo_keys(self, round)
    }

    #[inline]
    fn fl_keys(&self, n: usize) -> [u16; 2] {
        Misty1Schedule::fl_keys(self, n)
    }
}

#[inline]
fn encrypt<K: RoundKeys>(keys: &K, pt: Block64) -> Block64 {
    let (mut d0, mut d1) = pt.halves();
    for round in (0..ROUNDS).step_by(2) {
        d0 = fl(d0, keys.fl_keys(round));
        d1 = fl(d1, keys.fl_keys(round + 1));
        d1 ^= fo(d0, &keys.fo_keys(round));
        d0 ^= fo(d1, &keys.fo_keys(round + 1));
    }
    d0 = fl(d0, keys.fl_keys(ROUNDS));
    d1 = fl(d1, keys.fl_keys(ROUNDS + 1));
    Block64::from_halves(d1, d0)
}

#[inline]
fn decrypt<K: RoundKeys>(keys: &K, ct: Block64) -> Block64 {
    let (mut d1, mut d0) = ct.halves();
    d0 = fl_inv(d0, keys.fl_keys(ROUNDS));
    d1 = fl_inv(d1, keys.fl_keys(ROUNDS + 1));
    for round in (0..ROUNDS).step_by(2).rev() {
        d0 ^= fo(d1, &keys.fo_keys(round + 1));
        d1 ^= fo(d0, &keys.fo_keys(round));
        d0 = fl_inv(d0, keys.fl_keys(round));
        d1 = fl_inv(d1, keys.fl_keys(round + 1));
    }
    Block64::from_halves(d0, d1)
}

pub fn misty1_encrypt_block(schedule: &Misty1Schedule, pt: Block64) -> Block64 {
    encrypt(schedule, pt)
}

pub fn misty1_decrypt_block(schedule: &Misty1Schedule, ct: Block64) -> Block64 {
    decrypt(schedule, ct)
}

impl BlockCipher64 for Misty1Schedule {
    fn encrypt_block(&self, block: Block64) -> Block64 {
        encrypt(self, block)
    }

    fn decrypt_block(&self, block: Block64) -> Block64 {
        decrypt(self, block)
    }
}

/// Speed profile: every FO and FL subkey laid out per round at key setup.
#[derive(Clone)]
pub struct Misty1RoundKeys {
    fo: [[u16; 7]; ROUNDS],
    fl: [[u16; 2]; FL_LAYERS],
}

impl Misty1RoundKeys {
    pub fn new(schedule: &Misty1Schedule) -> Self {
        let mut fo = [[0; 7]; ROUNDS];
        for (round, slot) in fo.iter_mut().enumerate() {
            *slot = schedule.fo_keys(round);
        }
        let mut fl = [[0; 2]; FL_LAYERS];
        for (n, slot) in fl.iter_mut().enumerate() {
            *slot = schedule.fl_keys(n);
        }
        Misty1RoundKeys { fo, fl }
    }
}

impl RoundKeys for Misty1RoundKeys {
    #[inline(always)]
    fn fo_keys(&self, round: usize) -> [u16; 7] {
        self.fo[round]
    }

    #[inline(always)]
    fn fl_keys(&self, n: usize) -> [u16; 2] {
        self.fl[n]
    }
}

impl BlockCipher64 for Misty1RoundKeys {
    fn encrypt_block(&self, block: Block64) -> Block64 {
        encrypt(self, block)
    }

    fn decrypt_block(&self, block: Block64) -> Block64 {
        decrypt(self, block)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;

    const KEY: [u8; 16] = [
        0x00, 0x11, 0x22, 0x33, 0x44, 0x55, 0x66, 0x77, 0x88, 0x99, 0xaa, 0xbb, 0xcc, 0xdd, 0xee,
        0xff,
    ];

    // FI written the other way round: key halves applied while forming
    // the second S9 index rather than as a separate step.
    fn fi_alt(input: u16, key: u16) -> u16 {
        let (key7, key9) = (key >> 9, key & 0x1ff);
        let d9 = S9[(input >> 7) as usize] ^ (input & 0x7f);
        let d7 = (u16::from(S7[(input & 0x7f) as usize]) ^ key7 ^ d9) & 0x7f;
        let d9 = S9[(d9 ^ key9) as usize] ^ d7;
        (d7 << 9) | d9
    }

    #[test]
    fn fi_frozen_values() {
        // Values produced by the reference implementation before the build.
        assert_eq!(misty1_fi(0x0000, 0x0000), 0xb0f0);
        assert_eq!(misty1_fi(0xffff, 0xffff), 0x7fdd);
        assert_eq!(misty1_fi(0x1234, 0x5678), 0x811d);
        assert_eq!(misty1_fi(0x8000, 0x0001), 0x3824);
        assert_eq!(misty1_fi(0x007f, 0xfe00), 0x7c7f);
    }

    #[test]
    fn fi_matches_alternate_formulation() {
        let mut x: u32 = 0x1234_5678;
        for _ in 0..1000 {
            x = x.wrapping_mul(1_664_525).wrapping_add(1_013_904_223);
            let (a, b) = ((x >> 16) as u16, x as u16);
            assert_eq!(misty1_fi(a, b), fi_alt(a, b));
            assert_eq!(misty1_fi(a, b), misty1_fi(a, b));
        }
    }

    #[test]
    fn key_expansion() {
        let s = misty1_expand_key(&KEY).unwrap();
        assert_eq!(
            s.k(),
            &[0x0011, 0x2233, 0x4455, 0x6677, 0x8899, 0xaabb, 0xccdd, 0xeeff]
        );
        assert_eq!(
            s.k_prime(),
            &[0xcf51, 0x8e7f, 0x5e29, 0x673a, 0xcdbc, 0x07d6, 0xbf35, 0x5e11]
        );
        assert!(s == misty1_expand_key(&KEY).unwrap());
    }

    #[test]
    fn rejects_short_key() {
        assert!(matches!(
            misty1_expand_key(&KEY[..15]),
            Err(Error::KeyLength {
                cipher: CipherId::Misty1,
                expected: 16,
                actual: 15
            })
        ));
    }

    #[test]
    fn published_vectors() {
        let s = misty1_expand_key(&KEY).unwrap();
        let pt = Block64::from_u64(0x0123_4567_89ab_cdef);
        let ct = misty1_encrypt_block(&s, pt);
        assert_eq!(ct, Block64::from_u64(0x8b1d_a5f5_6ab3_d07c));
        assert_eq!(misty1_decrypt_block(&s, ct), pt);

        let pt = Block64::from_u64(0xfedc_ba98_7654_3210);
        assert_eq!(
            misty1_encrypt_block(&s, pt),
            Block64::from_u64(0x04b6_8240_b13b_e95d)
        );
    }

    #[test]
    fn round_keys_match_schedule() {
        let s = misty1_expand_key(&KEY).unwrap();
        let rk = Misty1RoundKeys::new(&s);
        let pt = Block64::from_u64(0x0123_4567_89ab_cdef);
        assert_eq!(rk.encrypt_block(pt), s.encrypt_block(pt));
        assert_eq!(rk.decrypt_block(rk.encrypt_block(pt)), pt);
    }

    #[test]
    fn zero_block_round_trip() {
        let s = misty1_expand_key(&[0; 16]).unwrap();
        let ct = s.encrypt_block(Block64::ZERO);
        assert_ne!(ct, Block64::ZERO);
        assert_eq!(s.decrypt_block(ct), Block64::ZERO);
        assert_eq!(s.encrypt_block(Block64::ZERO), ct);
    }
}
