//! Plain-text key-value calibration files.
//!
//! Recognized keys: `fx fy cx cy width height` and optional `baseline`
//! (meters, for rectified stereo). One `key value` pair per line; `#`
//! starts a comment.

use std::collections::HashMap;
use std::path::Path;

use flowslam_core::CameraIntrinsicsF64;

use crate::error::{IoError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    pub intrinsics: CameraIntrinsicsF64,
    pub baseline: Option<f64>,
}

pub fn read_calibration(path: impl AsRef<Path>) -> Result<Calibration> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let bad = |msg: String| IoError::BadCalibration {
        path: path.to_path_buf(),
        msg,
    };

    let mut kv = HashMap::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let (Some(key), Some(value), None) = (it.next(), it.next(), it.next()) else {
            return Err(bad(format!("expected `key value`, got {line:?}")));
        };
        let value: f64 = value
            .parse()
            .map_err(|_| bad(format!("unparsable value for {key}: {value:?}")))?;
        kv.insert(key.to_string(), value);
    }

    let mut take = |key: &str| kv.remove(key).ok_or_else(|| bad(format!("missing key {key}")));
    let fx = take("fx")?;
    let fy = take("fy")?;
    let cx = take("cx")?;
    let cy = take("cy")?;
    let width = take("width")?;
    let height = take("height")?;
    let baseline = kv.remove("baseline");
    if let Some(extra) = kv.keys().next() {
        return Err(bad(format!("unknown key {extra}")));
    }
    if let Some(b) = baseline {
        if b <= 0.0 {
            return Err(bad(format!("baseline must be positive, got {b}")));
        }
    }
    let intrinsics = CameraIntrinsicsF64::new(fx, fy, cx, cy, width as usize, height as usize)
        .map_err(|e| bad(e.to_string()))?;
    Ok(Calibration {
        intrinsics,
        baseline,
    })
}

pub fn write_calibration(calib: &Calibration, path: impl AsRef<Path>) -> Result<()> {
    let k = &calib.intrinsics;
    let mut text = format!(
        "fx {:.12}\nfy {:.12}\ncx {:.12}\ncy {:.12}\nwidth {}\nheight {}\n",
        k.fx, k.fy, k.cx, k.cy, k.width, k.height
    );
    if let Some(b) = calib.baseline {
        text.push_str(&format!("baseline {b:.12}\n"));
    }
    std::fs::write(path, text)?;
    Ok(())
}
