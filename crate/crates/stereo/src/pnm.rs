//! Netpbm PGM/PPM decoding (P2, P3, P5, P6) and binary encoding (P5, P6).

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PnmError {
    #[error("unsupported magic number {magic:?} at byte {offset}")]
    UnsupportedMagic { offset: usize, magic: String },
    #[error("malformed header at byte {offset}: {reason}")]
    MalformedHeader { offset: usize, reason: &'static str },
    #[error("truncated payload at byte {offset}: {reason}")]
    Truncated { offset: usize, reason: &'static str },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PnmKind {
    GrayAscii,
    RgbAscii,
    GrayBinary,
    RgbBinary,
}

impl PnmKind {
    fn from_magic(m: &[u8]) -> Option<Self> {
        match m {
            b"P2" => Some(PnmKind::GrayAscii),
            b"P3" => Some(PnmKind::RgbAscii),
            b"P5" => Some(PnmKind::GrayBinary),
            b"P6" => Some(PnmKind::RgbBinary),
            _ => None,
        }
    }

    pub fn channels(self) -> usize {
        match self {
            PnmKind::GrayAscii | PnmKind::GrayBinary => 1,
            PnmKind::RgbAscii | PnmKind::RgbBinary => 3,
        }
    }
}

/// Raw decoded samples, interleaved when `channels == 3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    pub kind: PnmKind,
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    pub samples: Vec<u16>,
}

impl Raster {
    pub fn channels(&self) -> usize {
        self.kind.channels()
    }
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.buf.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.buf.get(self.pos) {
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    /// Reads an unsigned decimal; `None` when no digits are present.
    fn number(&mut self) -> Option<Result<u64, usize>> {
        let start = self.pos;
        let mut v: u64 = 0;
        while let Some(&b) = self.buf.get(self.pos) {
            if !b.is_ascii_digit() {
                break;
            }
            v = match v.checked_mul(10).and_then(|v| v.checked_add(u64::from(b - b'0'))) {
                Some(v) => v,
                None => return Some(Err(start)),
            };
            self.pos += 1;
        }
        (self.pos > start).then_some(Ok(v))
    }

    fn header_field(&mut self, what: &'static str) -> Result<u64, PnmError> {
        self.skip_space_and_comments();
        let offset = self.pos;
        match self.number() {
            Some(Ok(v)) => Ok(v),
            Some(Err(offset)) => Err(PnmError::MalformedHeader {
                offset,
                reason: "number out of range",
            }),
            None => Err(PnmError::MalformedHeader { offset, reason: what }),
        }
    }
}

pub fn decode(buf: &[u8]) -> Result<Raster, PnmError> {
    if buf.len() < 2 {
        return Err(PnmError::MalformedHeader {
            offset: buf.len(),
            reason: "missing magic number",
        });
    }
    let kind = PnmKind::from_magic(&buf[..2]).ok_or_else(|| PnmError::UnsupportedMagic {
        offset: 0,
        magic: String::from_utf8_lossy(&buf[..2]).into_owned(),
    })?;
    let mut cur = Cursor { buf, pos: 2 };
    if !buf.get(2).is_some_and(|b| b.is_ascii_whitespace() || *b == b'#') {
        return Err(PnmError::MalformedHeader {
            offset: 2,
            reason: "expected whitespace after magic number",
        });
    }
    let width = cur.header_field("expected width")?;
    let height = cur.header_field("expected height")?;
    let max_off = {
        cur.skip_space_and_comments();
        cur.pos
    };
    let maxval = cur.header_field("expected maximum value")?;
    if width == 0 || height == 0 {
        return Err(PnmError::MalformedHeader {
            offset: 3,
            reason: "zero image dimension",
        });
    }
    if maxval == 0 || maxval > 65535 {
        return Err(PnmError::MalformedHeader {
            offset: max_off,
            reason: "maximum value must be in 1..=65535",
        });
    }
    let count = (width as usize)
        .checked_mul(height as usize)
        .and_then(|n| n.checked_mul(kind.channels()))
        .filter(|&n| n <= 1 << 31)
        .ok_or(PnmError::MalformedHeader {
            offset: 3,
            reason: "image too large",
        })?;
    let maxval = maxval as u16;

    let samples = match kind {
        PnmKind::GrayBinary | PnmKind::RgbBinary => {
            // Exactly one whitespace byte separates the header from the payload.
            match buf.get(cur.pos) {
                Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
                _ => {
                    return Err(PnmError::MalformedHeader {
                        offset: cur.pos,
                        reason: "expected whitespace before payload",
                    })
                }
            }
            let wide = maxval > 255;
            let need = count * if wide { 2 } else { 1 };
            let payload = &buf[cur.pos..];
            if payload.len() < need {
                return Err(PnmError::Truncated {
                    offset: buf.len(),
                    reason: "binary payload shorter than width × height × channels",
                });
            }
            if wide {
                payload[..need]
                    .chunks_exact(2)
                    .map(|c| u16::from_be_bytes([c[0], c[1]]))
                    .collect()
            } else {
                payload[..need].iter().map(|&b| u16::from(b)).collect()
            }
        }
        PnmKind::GrayAscii | PnmKind::RgbAscii => {
            let mut out = Vec::with_capacity(count);
            for _ in 0..count {
                cur.skip_space_and_comments();
                let offset = cur.pos;
                match cur.number() {
                    Some(Ok(v)) if v <= u64::from(maxval) => out.push(v as u16),
                    Some(_) => {
                        return Err(PnmError::MalformedHeader {
                            offset,
                            reason: "sample exceeds maximum value",
                        })
                    }
                    None if offset >= buf.len() => {
                        return Err(PnmError::Truncated {
                            offset,
                            reason: "ran out of ASCII samples",
                        })
                    }
                    None => {
                        return Err(PnmError::MalformedHeader {
                            offset,
                            reason: "non-numeric ASCII sample",
                        })
                    }
                }
            }
            out
        }
    };
    Ok(Raster {
        kind,
        width: width as usize,
        height: height as usize,
        maxval,
        samples,
    })
}

pub fn encode_pgm(width: usize, height: usize, pixels: &[u8]) -> Vec<u8> {
    debug_assert_eq!(pixels.len(), width * height);
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(pixels);
    out
}

pub fn encode_ppm(width: usize, height: usize, pixels: &[[u8; 3]]) -> Vec<u8> {
    debug_assert_eq!(pixels.len(), width * height);
    let mut out = format!("P6\n{width} {height}\n255\n").into_bytes();
    out.extend(pixels.iter().flatten());
    out
}
