//! Plain-text state files. Writes go through a temporary file and a rename.

use std::fs;
use std::io::ErrorKind;
use std::path::Path;

use mistylink::linklayer::{LinkTxState, ReplayState};
use mistylink::Error;

use crate::Failure;

fn read_optional(path: &Path) -> Result<Option<String>, Failure> {
    match fs::read_to_string(path) {
        Ok(s) => Ok(Some(s)),
        Err(e) if e.kind() == ErrorKind::NotFound => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn write_atomic(path: &Path, text: &str) -> Result<(), Failure> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn bad(path: &Path, line: usize, msg: &str) -> Failure {
    Failure::usage(format!("{}: line {line}: {msg}", path.display()))
}

/// `next_ctr=<decimal>`; a missing file means a fresh link.
pub fn load_tx(path: &Path) -> Result<LinkTxState, Failure> {
    let Some(text) = read_optional(path)? else {
        return Ok(LinkTxState::new());
    };
    let mut found = None;
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let value = line
            .strip_prefix("next_ctr=")
            .ok_or_else(|| bad(path, line_no, "expected `next_ctr=<n>`"))?;
        if found.is_some() {
            return Err(bad(path, line_no, "next_ctr given twice"));
        }
        let n: u64 = value
            .trim()
            .parse()
            .map_err(|_| bad(path, line_no, "next_ctr is not a number"))?;
        found = Some(LinkTxState::resume(n).map_err(|e| bad(path, line_no, &e.to_string()))?);
    }
    found.ok_or_else(|| bad(path, 1, "empty state file"))
}

pub fn save_tx(path: &Path, tx: &LinkTxState) -> Result<(), Failure> {
    write_atomic(path, &format!("next_ctr={}\n", tx.next_ctr()))
}

/// `src.<addr>=<ctr>` lines, one per source.
pub fn load_replay(path: &Path) -> Result<ReplayState, Failure> {
    let mut state = ReplayState::new();
    let Some(text) = read_optional(path)? else {
        return Ok(state);
    };
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parsed = line
            .strip_prefix("src.")
            .and_then(|rest| rest.split_once('='))
            .and_then(|(s, c)| {
                Some((s.trim().parse::<u16>().ok()?, c.trim().parse::<u32>().ok()?))
            });
        let (src, ctr) = parsed.ok_or_else(|| bad(path, line_no, "expected `src.<addr>=<ctr>`"))?;
        state.set_last_accepted(src, ctr);
    }
    Ok(state)
}

pub fn save_replay(path: &Path, state: &ReplayState) -> Result<(), Failure> {
    let text: String = state
        .entries()
        .map(|(src, ctr)| format!("src.{src}={ctr}\n"))
        .collect();
    write_atomic(path, &text)
}

pub fn decode_hex(what: &str, s: &str) -> Result<Vec<u8>, Failure> {
    hex::decode(s.trim()).map_err(|e| {
        Failure::from(Error::Config {
            line: None,
            msg: format!("{what}: invalid hex: {e}"),
        })
    })
}
