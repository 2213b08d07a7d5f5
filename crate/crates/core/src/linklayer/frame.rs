use std::fmt;

use crate::mac::{Tag32, TAG_LEN};
use crate::modes::Iv64;
use crate::{Error, Result};

pub const HEADER_LEN: usize = 10;
pub const MAX_PAYLOAD: usize = u8::MAX as usize;
/// Fixed per-frame overhead: header plus tag.
pub const FRAME_OVERHEAD: usize = HEADER_LEN + TAG_LEN;

const FLAG_AE: u8 = 0x01;
const FLAG_RESERVED: u8 = !FLAG_AE;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SecurityMode {
    /// Payload encrypted with MISTY1-OFB and authenticated.
    Ae,
    /// Payload sent in the clear and authenticated.
    Auth,
}

impl SecurityMode {
    pub fn name(self) -> &'static str {
        match self {
            SecurityMode::Ae => "ae",
            SecurityMode::Auth => "auth",
        }
    }
}

impl fmt::Display for SecurityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SecurityMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ae" => Ok(SecurityMode::Ae),
            "auth" => Ok(SecurityMode::Auth),
            other => Err(Error::config(format!(
                "unknown security mode `{other}` (expected ae or auth)"
            ))),
        }
    }
}

/// `dst(2) ‖ src(2) ‖ flags(1) ‖ len(1) ‖ ctr(4)`, big-endian.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FrameHeader {
    pub dst: u16,
    pub src: u16,
    pub flags: u8,
    pub len: u8,
    pub ctr: u32,
}

impl FrameHeader {
    pub fn new(mode: SecurityMode, dst: u16, src: u16, len: u8, ctr: u32) -> Self {
        let flags = match mode {
            SecurityMode::Ae => FLAG_AE,
            SecurityMode::Auth => 0,
        };
        FrameHeader {
            dst,
            src,
            flags,
            len,
            ctr,
        }
    }

    pub fn mode(&self) -> SecurityMode {
        if self.flags & FLAG_AE != 0 {
            SecurityMode::Ae
        } else {
            SecurityMode::Auth
        }
    }

    pub fn to_bytes(&self) -> [u8; HEADER_LEN] {
        let mut out = [0u8; HEADER_LEN];
        out[0..2].copy_from_slice(&self.dst.to_be_bytes());
        out[2..4].copy_from_slice(&self.src.to_be_bytes());
        out[4] = self.flags;
        out[5] = self.len;
        out[6..10].copy_from_slice(&self.ctr.to_be_bytes());
        out
    }

    pub fn parse(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::MalformedFrame(format!(
                "header needs {HEADER_LEN} bytes, got {}",
                bytes.len()
            )));
        }
        let header = FrameHeader {
            dst: u16::from_be_bytes([bytes[0], bytes[1]]),
            src: u16::from_be_bytes([bytes[2], bytes[3]]),
            flags: bytes[4],
            len: bytes[5],
            ctr: u32::from_be_bytes([bytes[6], bytes[7], bytes[8], bytes[9]]),
        };
        if header.flags & FLAG_RESERVED != 0 {
            return Err(Error::MalformedFrame(format!(
                "reserved flag bits set ({:#04x})",
                header.flags
            )));
        }
        Ok(header)
    }
}

/// IV for the frame: `dst ‖ src ‖ ctr`. Injective in (dst, src, ctr), so a
/// never-repeating counter gives a never-repeating IV on each link.
pub fn build_iv(header: &FrameHeader) -> Iv64 {
    let mut iv = [0u8; 8];
    iv[0..2].copy_from_slice(&header.dst.to_be_bytes());
    iv[2..4].copy_from_slice(&header.src.to_be_bytes());
    iv[4..8].copy_from_slice(&header.ctr.to_be_bytes());
    Iv64::new(iv)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecuredFrame {
    pub header: FrameHeader,
    pub body: Vec<u8>,
    pub tag: Tag32,
}

impl SecuredFrame {
    pub fn wire_len(&self) -> usize {
        FRAME_OVERHEAD + self.body.len()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.wire_len());
        out.extend_from_slice(&self.header.to_bytes());
        out.extend_from_slice(&self.body);
        out.extend_from_slice(&self.tag.0);
        out
    }

    /// Splits wire bytes into header, body and tag, checking only structure.
    pub fn parse(wire: &[u8]) -> Result<Self> {
        let frame = Self::split(wire)?;
        frame.check_len()?;
        Ok(frame)
    }

    /// Like [`parse`](Self::parse) but takes the body as delimited by the
    /// wire and leaves the length field unchecked, so that it can be
    /// authenticated first.
    pub fn split(wire: &[u8]) -> Result<Self> {
        if wire.len() < FRAME_OVERHEAD {
            return Err(Error::MalformedFrame(format!(
                "frame of {} bytes is shorter than the {FRAME_OVERHEAD}-byte minimum",
                wire.len()
            )));
        }
        let header = FrameHeader::parse(wire)?;
        let body = wire[HEADER_LEN..wire.len() - TAG_LEN].to_vec();
        let tag = Tag32::from_slice(&wire[wire.len() - TAG_LEN..])?;
        Ok(SecuredFrame { header, body, tag })
    }

    pub fn check_len(&self) -> Result<()> {
        if usize::from(self.header.len) != self.body.len() {
            return Err(Error::MalformedFrame(format!(
                "length field says {} payload bytes, frame carries {}",
                self.header.len,
                self.body.len()
            )));
        }
        Ok(())
    }

    /// The bytes the tag covers: header followed by body.
    pub fn authenticated_bytes(&self) -> Vec<u8> {
        let mut m = Vec::with_capacity(HEADER_LEN + self.body.len());
        m.extend_from_slice(&self.header.to_bytes());
        m.extend_from_slice(&self.body);
        m
    }
}
