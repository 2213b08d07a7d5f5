//! Secured link-layer frames.
//!
//! Wire format, all integers big-endian:
//!
//! ```text
//! dst(2) ‖ src(2) ‖ flags(1) ‖ len(1) ‖ ctr(4) ‖ body(len) ‖ tag(4)
//! ```
//!
//! In authenticated-encryption mode the body is the payload encrypted with
//! MISTY1-OFB under the IV `dst ‖ src ‖ ctr`; in authentication-only mode it
//! is the payload verbatim. The tag is CBC-MAC (MISTY1, separate key) over
//! header and body. The payload is never expanded.
//!
//! Receivers check structure, then the tag, then the replay counter, and
//! only then decrypt.

mod frame;
mod replay;

use std::fmt;

pub use frame::{
    build_iv, FrameHeader, SecuredFrame, SecurityMode, FRAME_OVERHEAD, HEADER_LEN, MAX_PAYLOAD,
};
pub use replay::{replay_check_update, ReplayState, ReplayVerdict};

use crate::ciphers::{misty1, BlockCipherHandle, CipherId, Profile};
use crate::mac::cbc_mac;
use crate::modes::ofb_apply;
use crate::{Error, Result};

pub type Address = u16;

/// Encryption and MAC keys for one link, with prepared MISTY1 schedules.
#[derive(Clone)]
pub struct LinkKey {
    enc_key: [u8; misty1::KEY_LEN],
    mac_key: [u8; misty1::KEY_LEN],
    enc: BlockCipherHandle,
    mac: BlockCipherHandle,
}

impl LinkKey {
    pub fn new(enc_key: &[u8], mac_key: &[u8]) -> Result<Self> {
        let enc = BlockCipherHandle::with_profile(CipherId::Misty1, Profile::Speed, enc_key)?;
        let mac = BlockCipherHandle::with_profile(CipherId::Misty1, Profile::Speed, mac_key)?;
        if enc_key == mac_key {
            return Err(Error::IdenticalSubkeys);
        }
        Ok(LinkKey {
            enc_key: enc_key.try_into().expect("length checked by key setup"),
            mac_key: mac_key.try_into().expect("length checked by key setup"),
            enc,
            mac,
        })
    }

    pub fn enc_key(&self) -> &[u8; misty1::KEY_LEN] {
        &self.enc_key
    }

    pub fn mac_key(&self) -> &[u8; misty1::KEY_LEN] {
        &self.mac_key
    }

    pub(crate) fn enc_cipher(&self) -> &BlockCipherHandle {
        &self.enc
    }

    pub(crate) fn mac_cipher(&self) -> &BlockCipherHandle {
        &self.mac
    }
}

impl fmt::Debug for LinkKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LinkKey").finish_non_exhaustive()
    }
}

/// Sender-side counter. Starts at 1 and is never reused; once the 32-bit
/// space is spent, sealing fails until the link is rekeyed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkTxState {
    // Kept wider than the wire counter so exhaustion is representable.
    next_ctr: u64,
}

impl Default for LinkTxState {
    fn default() -> Self {
        LinkTxState { next_ctr: 1 }
    }
}

impl LinkTxState {
    pub const EXHAUSTED: u64 = u32::MAX as u64 + 1;

    pub fn new() -> Self {
        Self::default()
    }

    /// Restores a persisted state. `next` may be [`Self::EXHAUSTED`].
    pub fn resume(next: u64) -> Result<Self> {
        if next == 0 || next > Self::EXHAUSTED {
            return Err(Error::config(format!(
                "next counter {next} outside 1..={}",
                Self::EXHAUSTED
            )));
        }
        Ok(LinkTxState { next_ctr: next })
    }

    pub fn next_ctr(&self) -> u64 {
        self.next_ctr
    }

    pub fn is_exhausted(&self) -> bool {
        self.next_ctr >= Self::EXHAUSTED
    }

    pub(crate) fn take(&mut self) -> Result<u32> {
        let ctr = u32::try_from(self.next_ctr).map_err(|_| Error::CounterWrap)?;
        self.next_ctr += 1;
        Ok(ctr)
    }
}

/// Builds the secured frame for `payload`, consuming one counter value.
pub fn seal_frame(
    key: &LinkKey,
    mode: SecurityMode,
    dst: Address,
    src: Address,
    payload: &[u8],
    tx: &mut LinkTxState,
) -> Result<SecuredFrame> {
    let len =
        u8::try_from(payload.len()).map_err(|_| Error::PayloadLength { len: payload.len() })?;
    let ctr = tx.take()?;
    let header = FrameHeader::new(mode, dst, src, len, ctr);
    let mut body = payload.to_vec();
    if mode == SecurityMode::Ae {
        ofb_apply(key.enc_cipher(), build_iv(&header), &mut body);
    }
    let mut frame = SecuredFrame {
        header,
        body,
        tag: crate::mac::Tag32([0; 4]),
    };
    frame.tag = cbc_mac(key.mac_cipher(), &frame.authenticated_bytes());
    Ok(frame)
}

/// [`seal_frame`] serialized to wire bytes (`10 + len + 4` of them).
pub fn seal(
    key: &LinkKey,
    mode: SecurityMode,
    dst: Address,
    src: Address,
    payload: &[u8],
    tx: &mut LinkTxState,
) -> Result<Vec<u8>> {
    Ok(seal_frame(key, mode, dst, src, payload, tx)?.to_bytes())
}

/// Tag check only; replay state and payload are untouched.
pub fn verify_frame(key: &LinkKey, frame: &SecuredFrame) -> Result<()> {
    let expected = cbc_mac(key.mac_cipher(), &frame.authenticated_bytes());
    if expected.matches(&frame.tag) {
        Ok(())
    } else {
        Err(Error::BadMac)
    }
}

/// Recovers the payload without authenticating it. Only meant for fault
/// studies where the tag check is deliberately bypassed.
pub fn decrypt_body(key: &LinkKey, frame: &SecuredFrame) -> Vec<u8> {
    let mut payload = frame.body.clone();
    if frame.header.mode() == SecurityMode::Ae {
        ofb_apply(key.enc_cipher(), build_iv(&frame.header), &mut payload);
    }
    payload
}

/// Parses, authenticates, replay-checks and decrypts a received frame.
///
/// The tag is checked over the header and body exactly as delimited on the
/// wire, before the length field is compared with the body. A tampered
/// length byte therefore fails as [`Error::BadMac`]; a length mismatch under
/// a valid tag is [`Error::MalformedFrame`]. Replay state is updated only
/// when the frame is accepted.
pub fn open(
    key: &LinkKey,
    wire: &[u8],
    replay: &mut ReplayState,
) -> Result<(FrameHeader, Vec<u8>)> {
    let frame = SecuredFrame::split(wire)?;
    verify_frame(key, &frame)?;
    frame.check_len()?;
    let header = frame.header;
    if replay.check_update(header.src, header.ctr) == ReplayVerdict::Reject {
        return Err(Error::ReplayRejected {
            src: header.src,
            ctr: header.ctr,
            last: replay.last_accepted(header.src),
        });
    }
    Ok((header, decrypt_body(key, &frame)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const ENC: &str = "00112233445566778899aabbccddeeff";
    const MAC: &str = "ffeeddccbbaa99887766554433221100";
    const GOLDEN_AE: &str = "00010002010500000001e2d5c32e716be8e599";
    const GOLDEN_AUTH: &str = "0001000200050000000148454c4c4f2c4eb9f3";

    fn key() -> LinkKey {
        LinkKey::new(&hex::decode(ENC).unwrap(), &hex::decode(MAC).unwrap()).unwrap()
    }

    #[test]
    fn golden_frames() {
        let k = key();
        let wire = seal(
            &k,
            SecurityMode::Ae,
            1,
            2,
            b"HELLO",
            &mut LinkTxState::new(),
        )
        .unwrap();
        assert_eq!(hex::encode(&wire), GOLDEN_AE);
        let wire = seal(
            &k,
            SecurityMode::Auth,
            1,
            2,
            b"HELLO",
            &mut LinkTxState::new(),
        )
        .unwrap();
        assert_eq!(hex::encode(&wire), GOLDEN_AUTH);

        let mut replay = ReplayState::new();
        let (h, payload) = open(&k, &hex::decode(GOLDEN_AE).unwrap(), &mut replay).unwrap();
        assert_eq!(payload, b"HELLO");
        assert_eq!((h.dst, h.src, h.ctr, h.mode()), (1, 2, 1, SecurityMode::Ae));
    }

    #[test]
    fn every_single_byte_flip_is_a_bad_mac() {
        let k = key();
        let golden = hex::decode(GOLDEN_AE).unwrap();
        for pos in 0..golden.len() {
            let mut wire = golden.clone();
            wire[pos] ^= 0x01;
            let mut replay = ReplayState::new();
            let err = open(&k, &wire, &mut replay).unwrap_err();
            assert!(matches!(err, Error::BadMac), "byte {pos}: {err:?}");
            assert_eq!(replay, ReplayState::new());
        }
    }

    #[test]
    fn replay_is_rejected_and_state_unchanged_on_bad_mac() {
        let k = key();
        let golden = hex::decode(GOLDEN_AE).unwrap();
        let mut replay = ReplayState::new();
        open(&k, &golden, &mut replay).unwrap();
        assert!(matches!(
            open(&k, &golden, &mut replay),
            Err(Error::ReplayRejected {
                src: 2,
                ctr: 1,
                last: 1
            })
        ));
        assert_eq!(replay.last_accepted(2), 1);
    }

    #[test]
    fn counter_advances_and_wraps() {
        let k = key();
        let mut tx = LinkTxState::new();
        let a = seal_frame(&k, SecurityMode::Auth, 1, 2, b"", &mut tx).unwrap();
        let b = seal_frame(&k, SecurityMode::Auth, 1, 2, b"", &mut tx).unwrap();
        assert_eq!((a.header.ctr, b.header.ctr), (1, 2));

        let mut tx = LinkTxState::resume(u64::from(u32::MAX)).unwrap();
        let last = seal_frame(&k, SecurityMode::Ae, 1, 2, b"x", &mut tx).unwrap();
        assert_eq!(last.header.ctr, u32::MAX);
        assert!(tx.is_exhausted());
        assert!(matches!(
            seal(&k, SecurityMode::Ae, 1, 2, b"x", &mut tx),
            Err(Error::CounterWrap)
        ));
        assert!(matches!(
            seal(&k, SecurityMode::Ae, 1, 2, b"x", &mut tx),
            Err(Error::CounterWrap)
        ));
        assert!(LinkTxState::resume(0).is_err());
        assert!(LinkTxState::resume(LinkTxState::EXHAUSTED + 1).is_err());
    }

    #[test]
    fn payload_limit() {
        let k = key();
        let mut tx = LinkTxState::new();
        assert_eq!(
            seal(&k, SecurityMode::Ae, 1, 2, &[0; 255], &mut tx)
                .unwrap()
                .len(),
            269
        );
        assert!(matches!(
            seal(&k, SecurityMode::Ae, 1, 2, &[0; 256], &mut tx),
            Err(Error::PayloadLength { len: 256 })
        ));
        assert_eq!(
            tx.next_ctr(),
            2,
            "a rejected payload must not consume a counter"
        );
    }

    #[test]
    fn identical_subkeys_rejected() {
        let k = hex::decode(ENC).unwrap();
        assert!(matches!(LinkKey::new(&k, &k), Err(Error::IdenticalSubkeys)));
        assert!(matches!(
            LinkKey::new(&k[..10], &k),
            Err(Error::KeyLength { .. })
        ));
    }

    #[test]
    fn length_mismatch_under_valid_tag_is_malformed() {
        let k = key();
        let mut frame = seal_frame(
            &k,
            SecurityMode::Auth,
            1,
            2,
            b"abc",
            &mut LinkTxState::new(),
        )
        .unwrap();
        frame.header.len = 2;
        frame.tag = cbc_mac(k.mac_cipher(), &frame.authenticated_bytes());
        assert!(matches!(
            open(&k, &frame.to_bytes(), &mut ReplayState::new()),
            Err(Error::MalformedFrame(_))
        ));
    }

    #[test]
    fn malformed_inputs() {
        let k = key();
        let mut replay = ReplayState::new();
        for wire in [&[][..], &[0u8; 13][..]] {
            assert!(matches!(
                open(&k, wire, &mut replay),
                Err(Error::MalformedFrame(_))
            ));
        }
        let mut golden = hex::decode(GOLDEN_AE).unwrap();
        golden[4] |= 0x80;
        assert!(matches!(
            open(&k, &golden, &mut replay),
            Err(Error::MalformedFrame(_))
        ));
    }
}
