//! PFM grayscale float maps, used for depth, disparity and intensity.
//!
//! Header: `Pf\n<width> <height>\n<scale>\n`, then float32 rows stored
//! bottom-up. A negative scale marks little-endian payload (always written
//! here); the scale magnitude is not applied to the values.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use flowslam_core::{DepthMap, Grid, Scalar};

use crate::error::{IoError, Result};

fn read_header_token(r: &mut impl Read, path: &Path, offset: &mut u64) -> Result<String> {
    let mut tok = Vec::new();
    let mut byte = [0u8; 1];
    loop {
        let n = r.read(&mut byte)?;
        if n == 0 {
            return Err(IoError::Format {
                path: path.to_path_buf(),
                offset: *offset,
                msg: "truncated header".into(),
            });
        }
        *offset += 1;
        if byte[0].is_ascii_whitespace() {
            if tok.is_empty() {
                continue;
            }
            break;
        }
        tok.push(byte[0]);
    }
    Ok(String::from_utf8_lossy(&tok).into_owned())
}

/// Read a PFM file into a raw grid (no validity interpretation).
pub fn read_pfm<T: Scalar>(path: impl AsRef<Path>) -> Result<Grid<T>> {
    let path = path.as_ref();
    let mut r = BufReader::new(File::open(path)?);
    let mut offset = 0u64;

    let magic = read_header_token(&mut r, path, &mut offset)?;
    match magic.as_str() {
        "Pf" => {}
        "PF" => {
            return Err(IoError::Unsupported {
                path: path.to_path_buf(),
                msg: "color PFM (PF) is not supported, expected grayscale Pf".into(),
            })
        }
        other => {
            return Err(IoError::Format {
                path: path.to_path_buf(),
                offset: 0,
                msg: format!("bad magic {other:?}, expected \"Pf\""),
            })
        }
    }

    let parse = |tok: String, offset: u64, what: &str| -> Result<f64> {
        tok.parse::<f64>().map_err(|_| IoError::Format {
            path: path.to_path_buf(),
            offset,
            msg: format!("unparsable {what}: {tok:?}"),
        })
    };
    let w_off = offset;
    let width = parse(read_header_token(&mut r, path, &mut offset)?, w_off, "width")?;
    let h_off = offset;
    let height = parse(read_header_token(&mut r, path, &mut offset)?, h_off, "height")?;
    let s_off = offset;
    let scale = parse(read_header_token(&mut r, path, &mut offset)?, s_off, "scale")?;
    if width < 1.0 || height < 1.0 || width.fract() != 0.0 || height.fract() != 0.0 {
        return Err(IoError::Format {
            path: path.to_path_buf(),
            offset: w_off,
            msg: format!("implausible dimensions {width}x{height}"),
        });
    }
    let (w, h) = (width as usize, height as usize);
    let little_endian = scale < 0.0;

    let mut payload = vec![0u8; w * h * 4];
    r.read_exact(&mut payload).map_err(|_| IoError::Format {
        path: path.to_path_buf(),
        offset,
        msg: format!("truncated payload, expected {} bytes", w * h * 4),
    })?;

    let mut grid = Grid::new(w, h, T::zero());
    for row in 0..h {
        // PFM rows are bottom-up.
        let y = h - 1 - row;
        for x in 0..w {
            let i = (row * w + x) * 4;
            let b: [u8; 4] = payload[i..i + 4].try_into().unwrap();
            let v = if little_endian {
                f32::from_le_bytes(b)
            } else {
                f32::from_be_bytes(b)
            };
            grid.set(x, y, T::c(v as f64));
        }
    }
    Ok(grid)
}

pub fn write_pfm<T: Scalar>(grid: &Grid<T>, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write!(w, "Pf\n{} {}\n-1.0\n", grid.width(), grid.height())?;
    for row in (0..grid.height()).rev() {
        for x in 0..grid.width() {
            let v = grid.at(x, row).to_f64c() as f32;
            w.write_all(&v.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Read a PFM as a depth map; non-positive and non-finite entries become
/// invalid pixels through the `DepthMap` accessors.
pub fn read_pfm_depth<T: Scalar>(path: impl AsRef<Path>) -> Result<DepthMap<T>> {
    Ok(DepthMap::from_grid(read_pfm(path)?))
}

pub fn write_pfm_depth<T: Scalar>(depth: &DepthMap<T>, path: impl AsRef<Path>) -> Result<()> {
    write_pfm(depth.grid(), path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    #[test]
    fn single_pixel_roundtrip() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("d.pfm");
        let grid = Grid::new(1, 1, 3.0f64);
        write_pfm(&grid, &path).unwrap();
        let back = read_pfm::<f64>(&path).unwrap();
        assert_eq!(back.at(0, 0), 3.0);
    }

    #[test]
    fn color_header_is_unsupported() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("c.pfm");
        std::fs::write(&path, b"PF\n1 1\n-1.0\n\0\0\0\0\0\0\0\0\0\0\0\0").unwrap();
        match read_pfm::<f64>(&path) {
            Err(IoError::Unsupported { .. }) => {}
            other => panic!("expected unsupported-format, got {other:?}"),
        }
    }

    #[test]
    fn big_endian_scale_sign() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("be.pfm");
        let mut bytes = b"Pf\n1 1\n1.0\n".to_vec();
        bytes.extend_from_slice(&2.5f32.to_be_bytes());
        std::fs::write(&path, bytes).unwrap();
        let grid = read_pfm::<f64>(&path).unwrap();
        assert_eq!(grid.at(0, 0), 2.5);
    }

    #[test]
    fn rows_are_bottom_up() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("rows.pfm");
        // 1x2 image: top = 1.0, bottom = 2.0.
        let mut grid = Grid::new(1, 2, 0.0f64);
        grid.set(0, 0, 1.0);
        grid.set(0, 1, 2.0);
        write_pfm(&grid, &path).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        let payload = &bytes[bytes.len() - 8..];
        // First stored row is the bottom image row.
        assert_eq!(&payload[0..4], &2.0f32.to_le_bytes());
        assert_eq!(&payload[4..8], &1.0f32.to_le_bytes());
        let back = read_pfm::<f64>(&path).unwrap();
        assert_eq!(back.at(0, 0), 1.0);
        assert_eq!(back.at(0, 1), 2.0);
    }

    #[test]
    fn invalid_depth_maps_to_invalid_pixels() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("inv.pfm");
        let mut grid = Grid::new(2, 1, 1.5f64);
        grid.set(1, 0, -1.0);
        write_pfm(&grid, &path).unwrap();
        let depth = read_pfm_depth::<f64>(&path).unwrap();
        assert_eq!(depth.get(0, 0), Some(1.5));
        assert_eq!(depth.get(1, 0), None);
    }
}
