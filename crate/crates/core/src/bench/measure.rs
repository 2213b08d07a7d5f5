use std::hint::black_box;
use std::time::Instant;

use super::{BenchMode, BenchRecord, Source};
use crate::ciphers::{key_state_bytes, BlockCipherHandle, CipherId, Profile};
use crate::modes::{
    cbc_decrypt, cbc_encrypt, ofb_process, pad_iso, unpad_iso, Iv64, CBC_STATE_BYTES,
    OFB_STATE_BYTES,
};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BenchOptions {
    pub payload_size: usize,
    pub iterations: usize,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            payload_size: 64,
            iterations: 15,
        }
    }
}

const KEYS_PER_SAMPLE: usize = 32;
const BYTES_PER_SAMPLE: usize = 8192;
const IV: Iv64 = Iv64::new([0, 1, 0, 2, 0, 0, 0, 1]);

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Median over `iterations` samples of `f`, in nanoseconds per unit, where
/// each sample calls `f` `reps` times and covers `units` units.
fn sample<F: FnMut()>(iterations: usize, reps: usize, units: usize, mut f: F) -> f64 {
    f();
    let samples = (0..iterations)
        .map(|_| {
            let start = Instant::now();
            for _ in 0..reps {
                f();
            }
            start.elapsed().as_nanos() as f64 / units as f64
        })
        .collect();
    median(samples)
}

/// Times key setup and one mode on this machine. Costs are medians in
/// nanoseconds (per key, per payload byte); `data_memory` is the static
/// size of the prepared key plus the mode's working state.
pub fn bench_cipher_mode(
    cipher: CipherId,
    profile: Profile,
    mode: BenchMode,
    payload_size: usize,
    iterations: usize,
) -> Result<BenchRecord> {
    if iterations == 0 {
        return Err(Error::config("iterations must be at least 1"));
    }
    if payload_size == 0 {
        return Err(Error::config("payload size must be at least 1 byte"));
    }
    let key: Vec<u8> = (0..cipher.key_len() as u8)
        .map(|i| i.wrapping_mul(0x3b) ^ 0xa5)
        .collect();
    let handle = BlockCipherHandle::with_profile(cipher, profile, &key)?;
    let payload: Vec<u8> = (0..payload_size).map(|i| i as u8).collect();

    let keysetup = sample(iterations, KEYS_PER_SAMPLE, KEYS_PER_SAMPLE, || {
        black_box(BlockCipherHandle::with_profile(cipher, profile, black_box(&key)).unwrap());
    });

    let reps = (BYTES_PER_SAMPLE / payload_size).max(1);
    let units = reps * payload_size;
    let (enc, dec) = match mode {
        BenchMode::Ofb => {
            let ct = ofb_process(&handle, IV, &payload);
            let enc = sample(iterations, reps, units, || {
                black_box(ofb_process(&handle, IV, black_box(&payload)));
            });
            let dec = sample(iterations, reps, units, || {
                black_box(ofb_process(&handle, IV, black_box(&ct)));
            });
            (enc, dec)
        }
        BenchMode::Cbc => {
            let ct = cbc_encrypt(&handle, IV, &pad_iso(&payload))?;
            let enc = sample(iterations, reps, units, || {
                black_box(cbc_encrypt(&handle, IV, &pad_iso(black_box(&payload))).unwrap());
            });
            let dec = sample(iterations, reps, units, || {
                let pt = cbc_decrypt(&handle, IV, black_box(&ct)).unwrap();
                black_box(unpad_iso(&pt).unwrap().len());
            });
            (enc, dec)
        }
    };

    let key_bytes = key_state_bytes(cipher, profile) as u64;
    let mode_bytes = match mode {
        BenchMode::Ofb => OFB_STATE_BYTES,
        BenchMode::Cbc => CBC_STATE_BYTES,
    } as u64;
    let mut r = BenchRecord::empty(cipher.name(), mode, profile, Source::Measured);
    r.cipher = Some(cipher);
    r.data_memory = Some(key_bytes + mode_bytes);
    r.keysetup_memory = Some(key_bytes);
    r.keysetup_cost = Some(keysetup);
    r.percall_cost = Some(enc);
    r.decrypt_cost = Some(dec);
    Ok(r)
}

/// Every cipher, profile and mode, one after another.
pub fn bench_all(options: BenchOptions) -> Result<Vec<BenchRecord>> {
    let mut out = Vec::new();
    for cipher in CipherId::ALL {
        for profile in Profile::ALL {
            for mode in BenchMode::ALL {
                out.push(bench_cipher_mode(
                    cipher,
                    profile,
                    mode,
                    options.payload_size,
                    options.iterations,
                )?);
            }
        }
    }
    Ok(out)
}
