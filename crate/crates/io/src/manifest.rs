//! Dataset directory adapters producing a validated sequence manifest.
//!
//! Three layouts are supported:
//!
//! * `tartanair-like`: `calib.txt`, `image_left/NNNNNN.pfm`,
//!   `flow/NNNNNN_MMMMMM_flow.flo`, optional `flow_stereo/NNNNNN.flo`,
//!   optional `depth_prior/NNNNNN.pfm`, optional `times.txt`.
//! * `kitti-like`: `calib.txt`, `times.txt`, `image_0/NNNNNN.pfm`,
//!   `flow/NNNNNN_MMMMMM.flo`, optional `flow_stereo/`, `depth_prior/`.
//! * `explicit-list`: a plain-text file with `calib`, `frame`, `flow`,
//!   `stereo` and `depth` records (paths relative to the list file).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::calib::{read_calibration, Calibration};
use crate::error::{IoError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ManifestLayout {
    TartanAirLike,
    KittiLike,
    ExplicitList,
}

/// One source frame with its flow files to later frames.
#[derive(Debug, Clone)]
pub struct FrameRecord {
    /// Original index in the dataset numbering.
    pub index: usize,
    pub timestamp: f64,
    pub image: Option<PathBuf>,
    /// Flow files keyed by target frame index.
    pub flows_to: BTreeMap<usize, PathBuf>,
    /// Left-to-right stereo flow for this frame.
    pub stereo_flow: Option<PathBuf>,
    /// External depth prior (RGB-D style) for this frame.
    pub depth_prior: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct SequenceManifest {
    pub layout: ManifestLayout,
    pub calibration: Calibration,
    pub frames: Vec<FrameRecord>,
    /// Non-fatal issues found while loading (excluded frames etc).
    pub warnings: Vec<String>,
}

impl SequenceManifest {
    pub fn frame_by_index(&self, index: usize) -> Option<&FrameRecord> {
        self.frames.iter().find(|f| f.index == index)
    }
}

fn frame_stem(layout: ManifestLayout, i: usize) -> String {
    let _ = layout;
    format!("{i:06}")
}

fn flow_name(layout: ManifestLayout, from: usize, to: usize) -> String {
    match layout {
        ManifestLayout::TartanAirLike => format!("{from:06}_{to:06}_flow.flo"),
        ManifestLayout::KittiLike => format!("{from:06}_{to:06}.flo"),
        ManifestLayout::ExplicitList => unreachable!("explicit lists name flows directly"),
    }
}

fn image_dir(layout: ManifestLayout) -> &'static str {
    match layout {
        ManifestLayout::TartanAirLike => "image_left",
        ManifestLayout::KittiLike => "image_0",
        ManifestLayout::ExplicitList => unreachable!(),
    }
}

/// Load and validate a sequence manifest rooted at `root`.
///
/// For the directory layouts, frame indices are scanned from the image
/// directory if present, otherwise from the flow directory. A frame without
/// the flow to its immediate successor is excluded with a warning. Fewer
/// than two usable frames is an error.
pub fn load_manifest(root: impl AsRef<Path>, layout: ManifestLayout) -> Result<SequenceManifest> {
    let root = root.as_ref();
    match layout {
        ManifestLayout::ExplicitList => load_explicit_list(root),
        _ => load_directory(root, layout),
    }
}

fn load_directory(root: &Path, layout: ManifestLayout) -> Result<SequenceManifest> {
    let calibration = read_calibration(root.join("calib.txt"))?;
    let mut warnings = Vec::new();

    let image_dir_path = root.join(image_dir(layout));
    let flow_dir = root.join("flow");
    if !flow_dir.is_dir() {
        return Err(IoError::Missing {
            path: root.to_path_buf(),
            msg: "flow/ directory".into(),
        });
    }

    // Discover contiguous frame indices starting at 0.
    let mut count = 0usize;
    loop {
        let stem = frame_stem(layout, count);
        let has_image = image_dir_path.join(format!("{stem}.pfm")).is_file();
        let has_flow = flow_dir
            .join(flow_name(layout, count, count + 1))
            .is_file();
        if has_image || has_flow {
            count += 1;
        } else {
            break;
        }
    }
    if count < 2 {
        return Err(IoError::EmptySequence(root.to_path_buf()));
    }

    let timestamps = read_times(root.join("times.txt"), count)?;
    let stereo_dir = root.join("flow_stereo");
    let prior_dir = root.join("depth_prior");

    let mut frames = Vec::new();
    for i in 0..count {
        let stem = frame_stem(layout, i);
        let image = {
            let p = image_dir_path.join(format!("{stem}.pfm"));
            p.is_file().then_some(p)
        };
        let mut flows_to = BTreeMap::new();
        for j in (i + 1)..count {
            let p = flow_dir.join(flow_name(layout, i, j));
            if p.is_file() {
                flows_to.insert(j, p);
            } else {
                break;
            }
        }
        if i + 1 < count && !flows_to.contains_key(&(i + 1)) {
            warnings.push(format!(
                "frame {i}: missing flow to frame {}; frame excluded",
                i + 1
            ));
            continue;
        }
        let stereo_flow = {
            let p = stereo_dir.join(format!("{stem}.flo"));
            p.is_file().then_some(p)
        };
        let depth_prior = {
            let p = prior_dir.join(format!("{stem}.pfm"));
            p.is_file().then_some(p)
        };
        frames.push(FrameRecord {
            index: i,
            timestamp: timestamps[i],
            image,
            flows_to,
            stereo_flow,
            depth_prior,
        });
    }
    if frames.len() < 2 {
        return Err(IoError::EmptySequence(root.to_path_buf()));
    }
    Ok(SequenceManifest {
        layout,
        calibration,
        frames,
        warnings,
    })
}

fn read_times(path: PathBuf, count: usize) -> Result<Vec<f64>> {
    if !path.is_file() {
        return Ok((0..count).map(|i| i as f64).collect());
    }
    let text = std::fs::read_to_string(&path)?;
    let mut times = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        times.push(line.parse::<f64>().map_err(|_| IoError::Format {
            path: path.clone(),
            offset: lineno as u64,
            msg: format!("unparsable timestamp {line:?}"),
        })?);
    }
    if times.len() < count {
        times.extend((times.len()..count).map(|i| i as f64));
    }
    Ok(times)
}

fn load_explicit_list(list_path: &Path) -> Result<SequenceManifest> {
    let base = list_path.parent().unwrap_or(Path::new("."));
    let text = std::fs::read_to_string(list_path)?;
    let mut warnings = Vec::new();

    let mut calibration = None;
    let mut frames: Vec<FrameRecord> = Vec::new();
    let mut flows: Vec<(usize, usize, PathBuf)> = Vec::new();
    let mut stereos: Vec<(usize, PathBuf)> = Vec::new();
    let mut depths: Vec<(usize, PathBuf)> = Vec::new();

    let bad = |lineno: usize, msg: String| IoError::Format {
        path: list_path.to_path_buf(),
        offset: lineno as u64,
        msg,
    };

    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "calib" if toks.len() == 2 => {
                calibration = Some(read_calibration(base.join(toks[1]))?);
            }
            "frame" if toks.len() == 2 || toks.len() == 3 => {
                let ts: f64 = toks[1]
                    .parse()
                    .map_err(|_| bad(lineno, format!("bad timestamp {:?}", toks[1])))?;
                let image = toks
                    .get(2)
                    .filter(|&&p| p != "-")
                    .map(|p| base.join(p));
                frames.push(FrameRecord {
                    index: frames.len(),
                    timestamp: ts,
                    image,
                    flows_to: BTreeMap::new(),
                    stereo_flow: None,
                    depth_prior: None,
                });
            }
            "flow" if toks.len() == 4 => {
                let from: usize = toks[1]
                    .parse()
                    .map_err(|_| bad(lineno, "bad flow source index".into()))?;
                let to: usize = toks[2]
                    .parse()
                    .map_err(|_| bad(lineno, "bad flow target index".into()))?;
                flows.push((from, to, base.join(toks[3])));
            }
            "stereo" if toks.len() == 3 => {
                let i: usize = toks[1]
                    .parse()
                    .map_err(|_| bad(lineno, "bad stereo frame index".into()))?;
                stereos.push((i, base.join(toks[2])));
            }
            "depth" if toks.len() == 3 => {
                let i: usize = toks[1]
                    .parse()
                    .map_err(|_| bad(lineno, "bad depth frame index".into()))?;
                depths.push((i, base.join(toks[2])));
            }
            other => {
                return Err(bad(
                    lineno,
                    format!("unknown or malformed record {other:?}"),
                ))
            }
        }
    }

    let calibration = calibration.ok_or_else(|| IoError::Missing {
        path: list_path.to_path_buf(),
        msg: "calib record".into(),
    })?;
    for (from, to, path) in flows {
        if from >= frames.len() || to >= frames.len() {
            warnings.push(format!("flow {from}->{to}: frame index out of range; ignored"));
            continue;
        }
        if !path.is_file() {
            warnings.push(format!("flow {from}->{to}: {} not found; ignored", path.display()));
            continue;
        }
        frames[from].flows_to.insert(to, path);
    }
    for (i, path) in stereos {
        if i < frames.len() && path.is_file() {
            frames[i].stereo_flow = Some(path);
        } else {
            warnings.push(format!("stereo {i}: missing frame or file; ignored"));
        }
    }
    for (i, path) in depths {
        if i < frames.len() && path.is_file() {
            frames[i].depth_prior = Some(path);
        } else {
            warnings.push(format!("depth {i}: missing frame or file; ignored"));
        }
    }
    // Validate referenced images exist.
    for f in &mut frames {
        if let Some(img) = &f.image {
            if !img.is_file() {
                warnings.push(format!(
                    "frame {}: image {} not found; dropped",
                    f.index,
                    img.display()
                ));
                f.image = None;
            }
        }
    }
    if frames.len() < 2 {
        return Err(IoError::EmptySequence(list_path.to_path_buf()));
    }
    Ok(SequenceManifest {
        layout: ManifestLayout::ExplicitList,
        calibration,
        frames,
        warnings,
    })
}
