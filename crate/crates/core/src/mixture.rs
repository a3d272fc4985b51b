//! Gaussian-uniform mixture over inverse-depth residuals: the likelihood of
//! a depth prior given a depth hypothesis, the inlier responsibility of a
//! prior pixel, and the resulting prior energy term.

use nalgebra::Vector2;

use crate::camera::CameraIntrinsics;
use crate::error::CoreError;
use crate::fisk::{density_floor, FiskModel};
use crate::maps::{ConfidenceMap, DepthMap, RigidnessMap};
use crate::scalar::Scalar;
use crate::se3::Se3;
use crate::transfer::{reproject, Reprojection};

/// Gaussian-uniform mixture whose Gaussian std-dev and uniform density both
/// grow in proportion to the observed inverse depth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianUniformMixture<T> {
    /// `sigma(x) = k_sigma * x` for inverse depth `x`.
    pub k_sigma: T,
    /// `U(x) = k_u * x` for inverse depth `x`.
    pub k_u: T,
}

impl<T: Scalar> GaussianUniformMixture<T> {
    pub fn new(k_sigma: T, k_u: T) -> Result<Self, CoreError> {
        if k_sigma <= T::zero() || k_u <= T::zero() {
            return Err(CoreError::invalid(
                "mixture proportionality constants must be positive",
            ));
        }
        Ok(GaussianUniformMixture { k_sigma, k_u })
    }

    #[inline]
    pub fn sigma(&self, inv_depth: T) -> T {
        self.k_sigma * inv_depth
    }

    #[inline]
    pub fn uniform(&self, inv_depth: T) -> T {
        self.k_u * inv_depth
    }

    /// Zero-mean Gaussian density with `sigma(inv_prior)` at `residual`.
    #[inline]
    pub fn gaussian(&self, inv_prior: T, residual: T) -> T {
        let s = self.sigma(inv_prior);
        let z = residual / s;
        (-(z * z) * T::c(0.5)).exp() / (s * T::c((2.0 * std::f64::consts::PI).sqrt()))
    }
}

/// Residual model attached to a depth prior. Priors produced by the
/// estimator itself use the Gaussian-uniform mixture; priors from an
/// external sensor (stereo/RGB-D) use an empirical Fisk model on the
/// inverse-depth residual magnitude, with the same uniform outlier branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PriorResidualModel<T> {
    GaussianUniform(GaussianUniformMixture<T>),
    FiskUniform {
        fisk: FiskModel<T>,
        k_u: T,
    },
}

impl<T: Scalar> PriorResidualModel<T> {
    /// Inlier and outlier densities for a prior with inverse depth
    /// `inv_prior` and inverse-depth residual `residual`.
    pub fn densities(&self, inv_prior: T, residual: T) -> (T, T) {
        match self {
            PriorResidualModel::GaussianUniform(mix) => {
                (mix.gaussian(inv_prior, residual), mix.uniform(inv_prior))
            }
            PriorResidualModel::FiskUniform { fisk, k_u } => {
                (fisk.pdf(residual.abs()), *k_u * inv_prior)
            }
        }
    }
}

/// Likelihood of observing prior depth `prior_depth` at the reprojection of
/// hypothesis `theta_j`, conditioned on the prior-rigidness state `w_hat`.
///
/// The inlier branch is a zero-mean Gaussian in the inverse-depth residual
/// `1/prior_depth - 1/phi_z(theta_j, pose)`; the outlier branch is the
/// uniform density and ignores the hypothesis entirely.
pub fn depth_prior_likelihood<T: Scalar>(
    theta_j: T,
    pixel: &Vector2<T>,
    intr: &CameraIntrinsics<T>,
    pose_to_prior: &Se3<T>,
    prior_depth: T,
    w_hat: bool,
    mix: &GaussianUniformMixture<T>,
) -> Result<T, CoreError> {
    if prior_depth <= T::zero() {
        return Err(CoreError::invalid("prior depth must be positive"));
    }
    let inv_prior = T::one() / prior_depth;
    if !w_hat {
        return Ok(mix.uniform(inv_prior));
    }
    let r: Reprojection<T> = reproject(theta_j, pixel, pose_to_prior, intr)?;
    let residual = inv_prior - T::one() / r.depth;
    Ok(mix.gaussian(inv_prior, residual))
}

/// Posterior probability that an observation is an inlier, given inlier and
/// outlier densities and the prior inlier probability.
///
/// Returns `prior_w` when both densities vanish (no evidence).
pub fn rigidness_responsibility<T: Scalar>(
    likelihood_inlier: T,
    likelihood_outlier: T,
    prior_w: T,
) -> T {
    let num = prior_w * likelihood_inlier;
    let den = num + (T::one() - prior_w) * likelihood_outlier;
    if den <= T::zero() {
        return prior_w;
    }
    num / den
}

/// One depth prior as seen from the reference frame during a depth update.
pub struct PriorView<'a, T> {
    /// Prior depth map, expressed in the prior's own camera frame.
    pub depth: &'a DepthMap<T>,
    /// Transform taking reference-frame points into the prior's frame.
    pub pose_from_ref: &'a Se3<T>,
    /// Current per-reference-pixel inlier responsibility `q` of this prior.
    pub responsibility: &'a RigidnessMap<T>,
    /// Confidence of the prior map, over the prior's own pixels.
    pub confidence: &'a ConfidenceMap<T>,
    /// Residual model for this prior's source.
    pub model: PriorResidualModel<T>,
}

/// Energy contributed by the depth priors for hypothesis `theta_j` at pixel
/// `(x, y)`:
///
/// `E = -sum_k  c_k * q_k * log( L_in / (L_in + L_out) )`
///
/// where `q_k` is the prior's current responsibility at the reference pixel
/// and `c_k` the prior's confidence at the pixel it reprojects onto. Priors
/// whose reprojection misses the prior frame or lands on invalid depth
/// contribute zero.
pub fn geom_prior_energy<T: Scalar>(
    theta_j: T,
    x: usize,
    y: usize,
    intr: &CameraIntrinsics<T>,
    priors: &[PriorView<'_, T>],
) -> T {
    let pixel = Vector2::new(T::c(x as f64), T::c(y as f64));
    let mut energy = T::zero();
    for prior in priors {
        let q = prior.responsibility.get(x, y);
        if q <= T::zero() {
            continue;
        }
        let Ok(r) = reproject(theta_j, &pixel, prior.pose_from_ref, intr) else {
            continue;
        };
        if !r.in_bounds {
            continue;
        }
        let (px, py) = (r.pixel.0 as usize, r.pixel.1 as usize);
        let Some(prior_depth) = prior.depth.get(px, py) else {
            continue;
        };
        let inv_prior = T::one() / prior_depth;
        let residual = inv_prior - T::one() / r.depth;
        let (l_in, l_out) = prior.model.densities(inv_prior, residual);
        let l_in = l_in.max(density_floor());
        let l_out = l_out.max(density_floor());
        let c = prior.confidence.get(px, py);
        energy -= c * q * (l_in / (l_in + l_out)).ln();
    }
    energy
}
