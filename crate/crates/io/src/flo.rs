//! Middlebury `.flo` optical-flow files.
//!
//! Layout: float32 sanity tag `202021.25`, int32 width, int32 height, then
//! row-major interleaved little-endian float32 `(dx, dy)` pairs.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use flowslam_core::{FlowField, Grid, Scalar};
use nalgebra::Vector2;

use crate::error::{IoError, Result};

const FLO_TAG: f32 = 202021.25;
const MAX_DIM: i32 = 1 << 20;

pub fn read_flo<T: Scalar>(path: impl AsRef<Path>) -> Result<FlowField<T>> {
    let path = path.as_ref();
    let mut r = BufReader::new(File::open(path)?);
    let fail = |offset: u64, msg: String| IoError::Format {
        path: path.to_path_buf(),
        offset,
        msg,
    };

    let tag = r
        .read_f32::<LittleEndian>()
        .map_err(|_| fail(0, "truncated before sanity tag".into()))?;
    if tag != FLO_TAG {
        return Err(fail(0, format!("bad sanity tag {tag}, expected {FLO_TAG}")));
    }
    let width = r
        .read_i32::<LittleEndian>()
        .map_err(|_| fail(4, "truncated before width".into()))?;
    let height = r
        .read_i32::<LittleEndian>()
        .map_err(|_| fail(8, "truncated before height".into()))?;
    if width <= 0 || height <= 0 || width > MAX_DIM || height > MAX_DIM {
        return Err(fail(4, format!("implausible dimensions {width}x{height}")));
    }
    let (w, h) = (width as usize, height as usize);

    let mut payload = vec![0u8; w * h * 8];
    r.read_exact(&mut payload).map_err(|_| {
        fail(
            12,
            format!("truncated payload, expected {} bytes", w * h * 8),
        )
    })?;
    let mut extra = [0u8; 1];
    if r.read(&mut extra)? != 0 {
        return Err(fail(12 + (w * h * 8) as u64, "trailing bytes".into()));
    }

    let mut data = Vec::with_capacity(w * h);
    for i in 0..w * h {
        let dx = f32::from_le_bytes(payload[i * 8..i * 8 + 4].try_into().unwrap());
        let dy = f32::from_le_bytes(payload[i * 8 + 4..i * 8 + 8].try_into().unwrap());
        data.push(Vector2::new(T::c(dx as f64), T::c(dy as f64)));
    }
    Ok(FlowField::from_grid(Grid::from_vec(w, h, data)))
}

pub fn write_flo<T: Scalar>(flow: &FlowField<T>, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_f32::<LittleEndian>(FLO_TAG)?;
    w.write_i32::<LittleEndian>(flow.width() as i32)?;
    w.write_i32::<LittleEndian>(flow.height() as i32)?;
    for &v in flow.grid().as_slice() {
        let dx = v.x.to_f64c() as f32;
        let dy = v.y.to_f64c() as f32;
        // Canonical NaN for invalid pixels keeps round-trips byte-stable.
        w.write_f32::<LittleEndian>(if dx.is_nan() { f32::NAN } else { dx })?;
        w.write_f32::<LittleEndian>(if dy.is_nan() { f32::NAN } else { dy })?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    #[test]
    fn one_pixel_file_layout() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("one.flo");
        let mut flow = FlowField::<f64>::zeros(1, 1);
        flow.set(0, 0, Vector2::new(1.5, -2.0));
        write_flo(&flow, &path).unwrap();

        let bytes = std::fs::read(&path).unwrap();
        assert_eq!(bytes.len(), 20);
        assert_eq!(&bytes[0..4], &202021.25f32.to_le_bytes());
        assert_eq!(&bytes[4..8], &1i32.to_le_bytes());
        assert_eq!(&bytes[8..12], &1i32.to_le_bytes());
        assert_eq!(&bytes[12..16], &1.5f32.to_le_bytes());
        assert_eq!(&bytes[16..20], &(-2.0f32).to_le_bytes());
    }

    #[test]
    fn zero_flow_file_size() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("zero.flo");
        let flow = FlowField::<f64>::zeros(7, 5);
        write_flo(&flow, &path).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        assert_eq!(bytes.len(), 4 + 8 + 8 * 7 * 5);
        assert!(bytes[12..].iter().all(|&b| b == 0));
    }

    #[test]
    fn bad_tag_reports_offset() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("bad.flo");
        std::fs::write(&path, 123.0f32.to_le_bytes()).unwrap();
        match read_flo::<f64>(&path) {
            Err(IoError::Format { offset: 0, .. }) => {}
            other => panic!("expected format error at offset 0, got {other:?}"),
        }
    }

    #[test]
    fn truncated_payload_reports_offset() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("trunc.flo");
        let mut bytes = Vec::new();
        bytes.extend_from_slice(&202021.25f32.to_le_bytes());
        bytes.extend_from_slice(&2i32.to_le_bytes());
        bytes.extend_from_slice(&2i32.to_le_bytes());
        bytes.extend_from_slice(&[0u8; 8]); // only 1 of 4 pixels
        std::fs::write(&path, bytes).unwrap();
        match read_flo::<f64>(&path) {
            Err(IoError::Format { offset: 12, .. }) => {}
            other => panic!("expected format error at offset 12, got {other:?}"),
        }
    }
}
