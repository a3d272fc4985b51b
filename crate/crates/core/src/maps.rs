//! Per-pixel map types: depth, flow, normals, rigidness and confidence.
//!
//! Invalid pixels are encoded in-band (non-positive/non-finite depth, NaN
//! flow, zero-length normal) and surface as `None` through the accessors,
//! so the math modules never see sentinel values.

use nalgebra::{Vector2, Vector3};

use crate::grid::Grid;
use crate::scalar::Scalar;

/// Per-pixel Z-depth of the camera frame (meters). Values that are not
/// strictly positive and finite mark invalid pixels.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthMap<T> {
    grid: Grid<T>,
}

impl<T: Scalar> DepthMap<T> {
    pub fn new_invalid(width: usize, height: usize) -> Self {
        DepthMap {
            grid: Grid::new(width, height, -T::one()),
        }
    }

    pub fn from_grid(grid: Grid<T>) -> Self {
        DepthMap { grid }
    }

    pub fn from_fn(width: usize, height: usize, f: impl FnMut(usize, usize) -> T) -> Self {
        DepthMap {
            grid: Grid::from_fn(width, height, f),
        }
    }

    pub fn constant(width: usize, height: usize, depth: T) -> Self {
        DepthMap {
            grid: Grid::new(width, height, depth),
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.grid.width()
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.grid.height()
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Option<T> {
        let v = self.grid.at(x, y);
        (v > T::zero() && v.finite()).then_some(v)
    }

    #[inline]
    pub fn raw(&self, x: usize, y: usize) -> T {
        self.grid.at(x, y)
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, depth: T) {
        self.grid.set(x, y, depth);
    }

    #[inline]
    pub fn invalidate(&mut self, x: usize, y: usize) {
        self.grid.set(x, y, -T::one());
    }

    pub fn valid_count(&self) -> usize {
        self.grid
            .as_slice()
            .iter()
            .filter(|&&v| v > T::zero() && v.finite())
            .count()
    }

    /// Iterate `(x, y, depth)` over valid pixels only.
    pub fn iter_valid(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        self.grid
            .iter()
            .filter(|&(_, _, v)| v > T::zero() && v.finite())
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn grid_mut(&mut self) -> &mut Grid<T> {
        &mut self.grid
    }

    /// Multiply every valid depth by `factor` (metric rescale).
    pub fn scaled(&self, factor: T) -> DepthMap<T> {
        DepthMap {
            grid: self.grid.map(|v| {
                if v > T::zero() && v.finite() {
                    v * factor
                } else {
                    v
                }
            }),
        }
    }
}

/// Dense 2D flow `(dx, dy)` in pixels; NaN marks invalid pixels.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowField<T> {
    grid: Grid<Vector2<T>>,
}

impl<T: Scalar> FlowField<T> {
    pub fn new_invalid(width: usize, height: usize) -> Self {
        let nan = T::c(f64::NAN);
        FlowField {
            grid: Grid::new(width, height, Vector2::new(nan, nan)),
        }
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        FlowField {
            grid: Grid::new(width, height, Vector2::zeros()),
        }
    }

    pub fn from_grid(grid: Grid<Vector2<T>>) -> Self {
        FlowField { grid }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.grid.width()
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.grid.height()
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Option<Vector2<T>> {
        let v = self.grid.at(x, y);
        (v.x.finite() && v.y.finite()).then_some(v)
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, flow: Vector2<T>) {
        self.grid.set(x, y, flow);
    }

    #[inline]
    pub fn invalidate(&mut self, x: usize, y: usize) {
        let nan = T::c(f64::NAN);
        self.grid.set(x, y, Vector2::new(nan, nan));
    }

    pub fn iter_valid(&self) -> impl Iterator<Item = (usize, usize, Vector2<T>)> + '_ {
        self.grid
            .iter()
            .filter(|(_, _, v)| v.x.finite() && v.y.finite())
    }

    pub fn grid(&self) -> &Grid<Vector2<T>> {
        &self.grid
    }
}

/// Per-pixel unit surface normals in the camera frame; the zero vector marks
/// invalid pixels.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalMap<T> {
    grid: Grid<Vector3<T>>,
}

impl<T: Scalar> NormalMap<T> {
    pub fn new_invalid(width: usize, height: usize) -> Self {
        NormalMap {
            grid: Grid::new(width, height, Vector3::zeros()),
        }
    }

    pub fn from_grid(grid: Grid<Vector3<T>>) -> Self {
        NormalMap { grid }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.grid.width()
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.grid.height()
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Option<Vector3<T>> {
        let v = self.grid.at(x, y);
        let n2 = v.norm_squared();
        (n2 > T::c(0.25) && n2.finite()).then_some(v)
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, n: Vector3<T>) {
        self.grid.set(x, y, n);
    }

    pub fn grid(&self) -> &Grid<Vector3<T>> {
        &self.grid
    }
}

/// Per-pixel weight in `[0, 1]` marking agreement with the rigid static
/// scene hypothesis.
#[derive(Debug, Clone, PartialEq)]
pub struct RigidnessMap<T> {
    grid: Grid<T>,
}

impl<T: Scalar> RigidnessMap<T> {
    pub fn constant(width: usize, height: usize, w: T) -> Self {
        RigidnessMap {
            grid: Grid::new(width, height, w),
        }
    }

    pub fn from_grid(grid: Grid<T>) -> Self {
        debug_assert!(grid
            .as_slice()
            .iter()
            .all(|&v| v >= T::zero() && v <= T::one()));
        RigidnessMap { grid }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.grid.width()
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.grid.height()
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> T {
        self.grid.at(x, y)
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, w: T) {
        debug_assert!(w >= T::zero() && w <= T::one());
        self.grid.set(x, y, w);
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }
}

/// Per-pixel reliability summary of a depth map, in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfidenceMap<T> {
    grid: Grid<T>,
}

impl<T: Scalar> ConfidenceMap<T> {
    pub fn constant(width: usize, height: usize, c: T) -> Self {
        ConfidenceMap {
            grid: Grid::new(width, height, c),
        }
    }

    pub fn from_grid(grid: Grid<T>) -> Self {
        ConfidenceMap { grid }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.grid.width()
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.grid.height()
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> T {
        self.grid.at(x, y)
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, c: T) {
        self.grid.set(x, y, c);
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }
}
