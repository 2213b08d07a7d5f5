//! Plain-text test vectors.
//!
//! Cipher vectors, one per line:
//!
//! ```text
//! <cipher> <hex key> <hex plaintext> <hex ciphertext>
//! ```
//!
//! Frame vectors, one per line (`-` stands for an empty payload):
//!
//! ```text
//! <hex enc_key> <hex mac_key> <ae|auth> <dst> <src> <ctr> <hex payload> <hex wire_frame>
//! ```
//!
//! Blank lines and `#` comments are ignored. A line that cannot be parsed
//! counts as a failed vector rather than aborting the run.

use std::fmt;

use crate::ciphers::{process_block, Block64, CipherId, Direction};
use crate::linklayer::{open, seal, LinkKey, LinkTxState, ReplayState, SecurityMode};
use crate::{Error, Result};

pub const CIPHER_VECTORS: &str = include_str!("../data/cipher_vectors.txt");
pub const FRAME_VECTORS: &str = include_str!("../data/frame_vectors.txt");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VectorKind {
    Cipher,
    Frame,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorOutcome {
    pub kind: VectorKind,
    pub line: usize,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for VectorOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} line {:>3} {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.line,
            self.name
        )?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("").trim();
        (!content.is_empty()).then(|| (i + 1, content.split_whitespace().collect()))
    })
}

fn unhex(field: &str, what: &str) -> Result<Vec<u8>> {
    hex::decode(field).map_err(|e| Error::config(format!("{what} `{field}`: {e}")))
}

fn outcome(kind: VectorKind, line: usize, name: String, r: Result<()>) -> VectorOutcome {
    let (passed, detail) = match r {
        Ok(()) => (true, String::new()),
        Err(e) => (false, e.to_string()),
    };
    VectorOutcome {
        kind,
        line,
        name,
        passed,
        detail,
    }
}

fn check_cipher_line(f: &[&str]) -> Result<()> {
    if f.len() != 4 {
        return Err(Error::config(format!(
            "expected 4 fields, found {}",
            f.len()
        )));
    }
    let cipher: CipherId = f[0].parse()?;
    let key = unhex(f[1], "key")?;
    let pt = Block64::from_slice(&unhex(f[2], "plaintext")?)?;
    let ct = Block64::from_slice(&unhex(f[3], "ciphertext")?)?;
    let got = process_block(cipher, &key, pt, Direction::Encrypt)?;
    if got != ct {
        return Err(Error::config(format!("encrypt gave {got}, expected {ct}")));
    }
    let back = process_block(cipher, &key, ct, Direction::Decrypt)?;
    if back != pt {
        return Err(Error::config(format!("decrypt gave {back}, expected {pt}")));
    }
    Ok(())
}

pub fn check_cipher_vectors(text: &str) -> Vec<VectorOutcome> {
    lines(text)
        .map(|(line, f)| {
            let name = f.first().copied().unwrap_or("?").to_string();
            outcome(VectorKind::Cipher, line, name, check_cipher_line(&f))
        })
        .collect()
}

fn check_frame_line(f: &[&str]) -> Result<()> {
    if f.len() != 8 {
        return Err(Error::config(format!(
            "expected 8 fields, found {}",
            f.len()
        )));
    }
    let key = LinkKey::new(&unhex(f[0], "enc key")?, &unhex(f[1], "mac key")?)?;
    let mode: SecurityMode = f[2].parse()?;
    let num = |s: &str, what: &str| -> Result<u64> {
        s.parse()
            .map_err(|_| Error::config(format!("{what} `{s}` is not a number")))
    };
    let dst = u16::try_from(num(f[3], "dst")?).map_err(|_| Error::config("dst out of range"))?;
    let src = u16::try_from(num(f[4], "src")?).map_err(|_| Error::config("src out of range"))?;
    let ctr = u32::try_from(num(f[5], "ctr")?).map_err(|_| Error::config("ctr out of range"))?;
    let payload = if f[6] == "-" {
        Vec::new()
    } else {
        unhex(f[6], "payload")?
    };
    let wire = unhex(f[7], "wire frame")?;

    let sealed = seal(
        &key,
        mode,
        dst,
        src,
        &payload,
        &mut LinkTxState::resume(ctr.into())?,
    )?;
    if sealed != wire {
        return Err(Error::config(format!("sealed to {}", hex::encode(sealed))));
    }
    let (header, opened) = open(&key, &wire, &mut ReplayState::new())?;
    if opened != payload || header.ctr != ctr || header.mode() != mode {
        return Err(Error::config(
            "open did not return the vector's payload and header",
        ));
    }
    Ok(())
}

pub fn check_frame_vectors(text: &str) -> Vec<VectorOutcome> {
    lines(text)
        .map(|(line, f)| {
            let name = format!("frame {}", f.get(2).copied().unwrap_or("?"));
            outcome(VectorKind::Frame, line, name, check_frame_line(&f))
        })
        .collect()
}

/// Every shipped vector, cipher vectors first.
pub fn check_shipped() -> Vec<VectorOutcome> {
    let mut out = check_cipher_vectors(CIPHER_VECTORS);
    out.extend(check_frame_vectors(FRAME_VECTORS));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_vectors_pass() {
        let all = check_shipped();
        assert!(all.len() >= 30);
        for o in &all {
            assert!(o.passed, "{o}");
        }
        for c in CipherId::ALL {
            assert!(all.iter().any(|o| o.name == c.name()));
        }
    }

    #[test]
    fn a_corrupted_nibble_fails_only_its_line() {
        let text = CIPHER_VECTORS.replacen("8b1da5f56ab3d07c", "8b1da5f56ab3d07d", 1);
        let res = check_cipher_vectors(&text);
        let failed: Vec<_> = res.iter().filter(|o| !o.passed).collect();
        assert_eq!(failed.len(), 1);
        assert_eq!(failed[0].line, 2);

        let text = FRAME_VECTORS.replacen("e2d5c32e716be8e599", "e2d5c32e716be8e598", 1);
        assert_eq!(
            check_frame_vectors(&text)
                .iter()
                .filter(|o| !o.passed)
                .count(),
            1
        );
    }

    #[test]
    fn empty_and_garbage() {
        assert!(check_cipher_vectors("# nothing\n\n").is_empty());
        let res = check_cipher_vectors("misty1 zz 00 00\nblowfish 00 00 00\n");
        assert!(res.iter().all(|o| !o.passed));
        assert_eq!(res.len(), 2);
    }
}
