//! Browser bindings for the demo page in `www/`.
//!
//! Everything takes and returns strings or plain byte vectors so the page
//! needs no extra glue beyond what wasm-bindgen generates.

use mistylink::bench::{check_reproduction, paper_tables, rank_report, CellStatus};
use mistylink::ciphers::{BlockCipherHandle, CipherId};
use mistylink::linklayer::{open, seal, LinkKey, LinkTxState, ReplayState, SecurityMode};
use mistylink::modes::{cbc_decrypt, cbc_encrypt, ofb_process, pad_iso, Iv64};
use wasm_bindgen::prelude::*;

fn link_key(enc_hex: &str, mac_hex: &str) -> Result<LinkKey, String> {
    let enc = hex::decode(enc_hex.trim()).map_err(|e| format!("encryption key: {e}"))?;
    let mac = hex::decode(mac_hex.trim()).map_err(|e| format!("MAC key: {e}"))?;
    LinkKey::new(&enc, &mac).map_err(|e| e.to_string())
}

/// Seals `payload` (UTF-8 text) and returns the wire frame as hex.
pub fn seal_text(
    enc_hex: &str,
    mac_hex: &str,
    encrypt: bool,
    dst: u16,
    src: u16,
    ctr: u32,
    payload: &str,
) -> Result<String, String> {
    let key = link_key(enc_hex, mac_hex)?;
    let mode = if encrypt {
        SecurityMode::Ae
    } else {
        SecurityMode::Auth
    };
    let mut tx = LinkTxState::resume(ctr.into()).map_err(|e| e.to_string())?;
    seal(&key, mode, dst, src, payload.as_bytes(), &mut tx)
        .map(hex::encode)
        .map_err(|e| e.to_string())
}

/// Opens a hex frame with a fresh replay window. Returns the payload as
/// text (lossy) or the rejection reason.
pub fn open_hex(enc_hex: &str, mac_hex: &str, frame_hex: &str) -> Result<String, String> {
    let key = link_key(enc_hex, mac_hex)?;
    let wire = hex::decode(frame_hex.trim()).map_err(|e| format!("frame: {e}"))?;
    let (_, payload) = open(&key, &wire, &mut ReplayState::new()).map_err(|e| e.to_string())?;
    Ok(String::from_utf8_lossy(&payload).into_owned())
}

/// Flips ciphertext bit `bit` of an encrypted `len`-byte message and
/// returns a per-bit mask (one byte per plaintext bit, 1 = corrupted).
/// The message, key and IV are fixed so the picture is reproducible.
pub fn flip_mask(cbc: bool, len: usize, bit: usize) -> Result<Vec<u8>, String> {
    if len == 0 || bit >= len * 8 {
        return Err(format!("bit {bit} outside a {len}-byte message"));
    }
    let key = hex::decode("00112233445566778899aabbccddeeff").unwrap();
    let cipher = BlockCipherHandle::new(CipherId::Misty1, &key).map_err(|e| e.to_string())?;
    let iv = Iv64::new([0, 1, 0, 2, 0, 0, 0, 1]);
    let message: Vec<u8> = (0..len).map(|i| i as u8).collect();
    let flip = |ct: &mut Vec<u8>| ct[bit / 8] ^= 0x80 >> (bit % 8);
    let (reference, damaged) = if cbc {
        let padded = pad_iso(&message);
        let mut ct = cbc_encrypt(&cipher, iv, &padded).map_err(|e| e.to_string())?;
        flip(&mut ct);
        let pt = cbc_decrypt(&cipher, iv, &ct).map_err(|e| e.to_string())?;
        (padded, pt)
    } else {
        let mut ct = ofb_process(&cipher, iv, &message);
        flip(&mut ct);
        (message, ofb_process(&cipher, iv, &ct))
    };
    Ok(reference[..len]
        .iter()
        .zip(&damaged)
        .flat_map(|(a, b)| (0..8).map(move |i| ((a ^ b) >> (7 - i)) & 1))
        .collect())
}

/// The published memory and cycle tables ranked per mode, followed by one
/// line per checked cell.
pub fn paper_rankings() -> Result<String, String> {
    let report = rank_report(&paper_tables()).map_err(|e| e.to_string())?;
    let mut out = report.render();
    let checks = check_reproduction(&report);
    let matched = checks
        .iter()
        .filter(|c| c.status == CellStatus::Match)
        .count();
    out.push_str(&format!("\n{matched} of {} cells match\n", checks.len()));
    for c in &checks {
        out.push_str(&format!("{c}\n"));
    }
    Ok(out)
}

#[wasm_bindgen(js_name = sealText)]
pub fn seal_text_js(
    enc_hex: &str,
    mac_hex: &str,
    encrypt: bool,
    dst: u16,
    src: u16,
    ctr: u32,
    payload: &str,
) -> Result<String, JsError> {
    seal_text(enc_hex, mac_hex, encrypt, dst, src, ctr, payload).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = openHex)]
pub fn open_hex_js(enc_hex: &str, mac_hex: &str, frame_hex: &str) -> Result<String, JsError> {
    open_hex(enc_hex, mac_hex, frame_hex).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = flipMask)]
pub fn flip_mask_js(cbc: bool, len: usize, bit: usize) -> Result<Vec<u8>, JsError> {
    flip_mask(cbc, len, bit).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = paperRankings)]
pub fn paper_rankings_js() -> Result<String, JsError> {
    paper_rankings().map_err(|e| JsError::new(&e))
}
