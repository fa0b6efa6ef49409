//! 8-bit binary PGM (`P5`) images mapped to `[0, 1]`.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linop::{DenseVector, Shape};

pub fn decode_pgm(bytes: &[u8]) -> Result<DenseVector> {
    let bad = |msg: &str| Error::ImageFormat(msg.to_string());
    let mut pos = 0;
    let mut fields = Vec::with_capacity(4);
    while fields.len() < 4 {
        // whitespace and comments between header fields
        while pos < bytes.len() {
            if bytes[pos].is_ascii_whitespace() {
                pos += 1;
            } else if bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            } else {
                break;
            }
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() && bytes[pos] != b'#' {
            pos += 1;
        }
        if start == pos {
            return Err(bad("truncated header"));
        }
        fields.push(std::str::from_utf8(&bytes[start..pos]).map_err(|_| bad("non-ASCII header"))?);
    }
    if fields[0] != "P5" {
        return Err(bad("not a binary PGM (expected magic P5)"));
    }
    let num = |s: &str| s.parse::<usize>().map_err(|_| bad("bad header number"));
    let (cols, rows, maxval) = (num(fields[1])?, num(fields[2])?, num(fields[3])?);
    if maxval == 0 || maxval > 255 {
        return Err(bad("only 8-bit PGM (maxval 1..=255) is supported"));
    }
    if rows == 0 || cols == 0 {
        return Err(bad("empty image"));
    }
    // exactly one whitespace byte separates the header from the raster
    pos += 1;
    let need = rows * cols;
    let raster = bytes.get(pos..pos + need).ok_or_else(|| bad("truncated raster"))?;
    let data = raster.iter().map(|&v| v as f64 / maxval as f64).collect();
    DenseVector::new(Shape::image(rows, cols), data)
}

pub fn encode_pgm(img: &DenseVector) -> Result<Vec<u8>> {
    let s = img.shape();
    if s.planes != 1 {
        return Err(Error::ImageFormat(format!("PGM holds one plane, got {s:?}")));
    }
    let mut out = format!("P5\n{} {}\n255\n", s.cols, s.rows).into_bytes();
    out.extend(img.data().iter().map(|v| (v.clamp(0.0, 1.0) * 255.0).round() as u8));
    Ok(out)
}

pub fn read_pgm(path: &Path) -> Result<DenseVector> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_pgm(&bytes)
}

pub fn write_pgm(path: &Path, img: &DenseVector) -> Result<()> {
    let bytes = encode_pgm(img)?;
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imaging::quantize_255;

    #[test]
    fn round_trip() {
        let x = DenseVector::random_seeded(Shape::image(5, 7), 3).map(|v| quantize_255(0.5 + 0.5 * v));
        let back = decode_pgm(&encode_pgm(&x).unwrap()).unwrap();
        assert_eq!(back.shape(), x.shape());
        assert!(back.dist_inf(&x).unwrap() < 1e-12);
    }

    #[test]
    fn header_with_comments_and_maxval() {
        let mut bytes = b"P5 # comment\n2 # w\n1\n# another\n100\n".to_vec();
        bytes.extend([0u8, 100]);
        let x = decode_pgm(&bytes).unwrap();
        assert_eq!(x.shape(), Shape::image(1, 2));
        assert_eq!(x.data(), &[0.0, 1.0]);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(decode_pgm(b"P2\n1 1\n255\n0").is_err());
        assert!(decode_pgm(b"P5\n2 2\n255\n\x00").is_err());
        assert!(decode_pgm(b"P5\n2 2\n65535\n").is_err());
        assert!(decode_pgm(b"P5\n2").is_err());
        assert!(encode_pgm(&DenseVector::zeros(Shape::field(2, 2))).is_err());
    }
}
