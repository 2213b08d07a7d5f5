use mistylink::ciphers::{misty1, Block64, BlockCipher64, BlockCipherHandle, CipherId, Profile};
use mistylink::linklayer::{open, seal, LinkKey, LinkTxState, ReplayState, SecurityMode};
use mistylink::mac::cbc_mac;
use mistylink::modes::{cbc_decrypt, cbc_encrypt, ofb_process, pad_iso, unpad_iso, Iv64};
use mistylink::Error;
use proptest::prelude::*;

fn round_trip(cipher: CipherId, key: &[u8], block: u64) {
    let b = Block64::from_u64(block);
    let mut outputs = Vec::new();
    for profile in Profile::ALL {
        let h = BlockCipherHandle::with_profile(cipher, profile, key).unwrap();
        let ct = h.encrypt_block(b);
        assert_eq!(h.decrypt_block(ct), b);
        outputs.push(ct);
    }
    assert_eq!(outputs[0], outputs[1], "profiles disagree");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn misty1_round_trip(key in any::<[u8; 16]>(), block in any::<u64>()) {
        round_trip(CipherId::Misty1, &key, block);
    }

    #[test]
    fn skipjack_round_trip(key in any::<[u8; 10]>(), block in any::<u64>()) {
        round_trip(CipherId::Skipjack, &key, block);
    }

    #[test]
    fn rc5_round_trip(key in any::<[u8; 16]>(), block in any::<u64>()) {
        round_trip(CipherId::Rc5_32, &key, block);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn ofb_preserves_length_and_inverts(key in any::<[u8; 16]>(), iv in any::<[u8; 8]>(),
                                        data in proptest::collection::vec(any::<u8>(), 0..300)) {
        let c = BlockCipherHandle::new(CipherId::Misty1, &key).unwrap();
        let ct = ofb_process(&c, Iv64::new(iv), &data);
        prop_assert_eq!(ct.len(), data.len());
        prop_assert_eq!(ofb_process(&c, Iv64::new(iv), &ct), data);
    }

    #[test]
    fn ofb_flip_is_local(data in proptest::collection::vec(any::<u8>(), 1..200), pick in any::<usize>()) {
        let c = BlockCipherHandle::new(CipherId::Misty1, &[7; 16]).unwrap();
        let iv = Iv64::new([1; 8]);
        let mut ct = ofb_process(&c, iv, &data);
        let bit = pick % (data.len() * 8);
        ct[bit / 8] ^= 0x80 >> (bit % 8);
        let pt = ofb_process(&c, iv, &ct);
        let diff: u32 = pt.iter().zip(&data).map(|(a, b)| (a ^ b).count_ones()).sum();
        prop_assert_eq!(diff, 1);
        prop_assert_eq!(pt[bit / 8] ^ data[bit / 8], 0x80 >> (bit % 8));
    }

    #[test]
    fn cbc_and_padding_round_trip(key in any::<[u8; 10]>(), data in proptest::collection::vec(any::<u8>(), 0..200)) {
        let c = BlockCipherHandle::new(CipherId::Skipjack, &key).unwrap();
        let iv = Iv64::new([9; 8]);
        let padded = pad_iso(&data);
        prop_assert!(padded.len().is_multiple_of(8) && padded.len() > data.len());
        let ct = cbc_encrypt(&c, iv, &padded).unwrap();
        let pt = cbc_decrypt(&c, iv, &ct).unwrap();
        prop_assert_eq!(unpad_iso(&pt).unwrap(), &data[..]);
    }

    #[test]
    fn mac_depends_on_every_byte(data in proptest::collection::vec(any::<u8>(), 1..64), pick in any::<usize>()) {
        let c = BlockCipherHandle::new(CipherId::Misty1, &[3; 16]).unwrap();
        let mut other = data.clone();
        other[pick % data.len()] ^= 0x01;
        // A 32-bit tag collides with probability 2^-32 per pair; none expected here.
        prop_assert_ne!(cbc_mac(&c, &data), cbc_mac(&c, &other));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn seal_open_round_trip(payload in proptest::collection::vec(any::<u8>(), 0..=255),
                            ae in any::<bool>(), dst in any::<u16>(), src in any::<u16>(),
                            ctr in 1u32..) {
        let key = LinkKey::new(&[0x11; 16], &[0x22; 16]).unwrap();
        let mode = if ae { SecurityMode::Ae } else { SecurityMode::Auth };
        let mut tx = LinkTxState::resume(ctr.into()).unwrap();
        let wire = seal(&key, mode, dst, src, &payload, &mut tx).unwrap();
        prop_assert_eq!(wire.len(), 14 + payload.len());
        if ae && !payload.is_empty() {
            prop_assert_ne!(&wire[10..10 + payload.len()], &payload[..]);
        }
        let mut replay = ReplayState::new();
        let (h, got) = open(&key, &wire, &mut replay).unwrap();
        prop_assert_eq!(got, payload);
        prop_assert_eq!((h.dst, h.src, h.ctr, h.mode()), (dst, src, ctr, mode));
        prop_assert_eq!(replay.last_accepted(src), ctr);
        let again = open(&key, &wire, &mut replay);
        prop_assert!(matches!(again, Err(Error::ReplayRejected { .. })), "{:?}", again);
    }

    #[test]
    fn arbitrary_bytes_never_panic(bytes in proptest::collection::vec(any::<u8>(), 0..300)) {
        let key = LinkKey::new(&[0x11; 16], &[0x22; 16]).unwrap();
        let mut replay = ReplayState::new();
        prop_assert!(open(&key, &bytes, &mut replay).is_err());
        prop_assert_eq!(replay, ReplayState::new());
    }
}

#[test]
fn sboxes_are_permutations() {
    let mut seen7 = [false; 128];
    for &v in misty1::S7.iter() {
        assert!(!seen7[v as usize]);
        seen7[v as usize] = true;
    }
    let mut seen9 = [false; 512];
    for &v in misty1::S9.iter() {
        assert!(!seen9[v as usize]);
        seen9[v as usize] = true;
    }
}
