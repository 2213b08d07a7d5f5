//! Skipjack against an independent implementation.

use mistylink::ciphers::{
    skipjack::skipjack_block, Block64, BlockCipher64, BlockCipherHandle, CipherId, Direction,
    Profile,
};
use mistylink::simnet::SplitMix64;

#[test]
fn skipjack_agrees_with_reference_crate() {
    let mut rng = SplitMix64::new(0x5eed);
    for _ in 0..5000 {
        let mut key = [0u8; 10];
        rng.fill_bytes(&mut key);
        let pt = rng.next_u64();
        let expected = skipjack::skipjack::encrypt_block(pt, key);

        let ours = skipjack_block(&key, Block64::from_u64(pt), Direction::Encrypt).unwrap();
        assert_eq!(ours.to_u64(), expected, "key {}", hex::encode(key));
        let fast =
            BlockCipherHandle::with_profile(CipherId::Skipjack, Profile::Speed, &key).unwrap();
        assert_eq!(fast.encrypt_block(Block64::from_u64(pt)).to_u64(), expected);
        assert_eq!(skipjack::skipjack::decrypt_block(expected, key), pt);
        assert_eq!(fast.decrypt_block(ours).to_u64(), pt);
    }
}
