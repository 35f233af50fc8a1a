//! Netpbm grayscale (P2 ASCII, P5 binary) with 8-bit samples.

use std::fs;
use std::path::Path;

use super::GrayImage;
use crate::error::{Error, Result};

fn format_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Format {
        offset,
        message: message.into(),
    }
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_space(&mut self) {
        while let Some(&c) = self.data.get(self.pos) {
            if c == b'#' {
                while self.data.get(self.pos).is_some_and(|&c| c != b'\n') {
                    self.pos += 1;
                }
            } else if c.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space();
        let start = self.pos;
        while self.data.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(if start >= self.data.len() {
                format_err(start, format!("truncated before {what}"))
            } else {
                format_err(start, format!("expected {what}"))
            });
        }
        std::str::from_utf8(&self.data[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| format_err(start, format!("{what} out of range")))
    }
}

/// Decodes a P2 or P5 stream.
pub fn decode_pgm(data: &[u8]) -> Result<GrayImage> {
    let binary = match data.get(..2) {
        Some(b"P5") => true,
        Some(b"P2") => false,
        _ => return Err(format_err(0, "not a P2/P5 graymap")),
    };
    let mut cur = Cursor { data, pos: 2 };
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let maxval_at = cur.pos;
    let maxval = cur.number("maxval")?;
    if maxval != 255 {
        return Err(format_err(
            maxval_at,
            format!("only maxval 255 is supported, found {maxval}"),
        ));
    }
    if width < 2 || height < 2 {
        return Err(format_err(
            maxval_at,
            format!("image {width}x{height} is too small"),
        ));
    }
    let count = width
        .checked_mul(height)
        .ok_or_else(|| format_err(maxval_at, "dimensions overflow"))?;
    let pixels = if binary {
        match data.get(cur.pos) {
            Some(c) if c.is_ascii_whitespace() => cur.pos += 1,
            Some(_) => return Err(format_err(cur.pos, "expected whitespace after maxval")),
            None => return Err(format_err(cur.pos, "truncated after header")),
        }
        let end = cur.pos + count;
        if data.len() < end {
            return Err(format_err(
                data.len(),
                format!(
                    "truncated pixel data: need {count} bytes, have {}",
                    data.len() - cur.pos
                ),
            ));
        }
        data[cur.pos..end].to_vec()
    } else {
        let mut px = Vec::with_capacity(count);
        for _ in 0..count {
            let at = cur.pos;
            let v = cur.number("pixel value")?;
            if v > 255 {
                return Err(format_err(at, format!("pixel value {v} exceeds maxval")));
            }
            px.push(v as u8);
        }
        px
    };
    GrayImage::new(width, height, pixels)
}

/// Binary (P5) encoding.
pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.pixels());
    out
}

/// ASCII (P2) encoding.
pub fn encode_pgm_ascii(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P2\n{} {}\n255\n", img.width(), img.height());
    for row in img.pixels().chunks(img.width()) {
        let line: Vec<String> = row.iter().map(|p| p.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out.into_bytes()
}

pub fn read_pgm(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let data = fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    decode_pgm(&data)
}

/// Writes a binary (P5) graymap.
pub fn write_pgm(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_pgm(img)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> GrayImage {
        GrayImage::new(2, 2, vec![0, 255, 128, 64]).unwrap()
    }

    #[test]
    fn round_trips() {
        let img = tiny();
        assert_eq!(decode_pgm(&encode_pgm(&img)).unwrap(), img);
        assert_eq!(decode_pgm(&encode_pgm_ascii(&img)).unwrap(), img);
    }

    #[test]
    fn comments_and_spacing() {
        let src = b"P2 # comment\n2\t2 # more\n255\n0 255\n128\n64\n";
        assert_eq!(decode_pgm(src).unwrap(), tiny());
    }

    #[test]
    fn rejects_deep_maxval() {
        let err = decode_pgm(b"P5\n2 2\n65535\n\0\0\0\0\0\0\0\0").unwrap_err();
        assert!(matches!(err, Error::Format { offset: 6, .. }), "{err}");
    }

    #[test]
    fn reports_truncation_offset() {
        let err = decode_pgm(b"P5\n2 2\n255\n\x01\x02").unwrap_err();
        assert!(matches!(err, Error::Format { offset: 13, .. }), "{err}");
        assert!(matches!(
            decode_pgm(b"P2\n2 2\n255\n1 2 3"),
            Err(Error::Format { .. })
        ));
        assert!(matches!(
            decode_pgm(b"P6\n2 2\n255\n"),
            Err(Error::Format { offset: 0, .. })
        ));
        assert!(matches!(
            decode_pgm(b"P2\n2 x"),
            Err(Error::Format { offset: 5, .. })
        ));
    }
}
