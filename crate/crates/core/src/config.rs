//! Tolerance profile shared by all modules.
//!
//! Every threshold is a plain field with a serde default so a partial JSON
//! profile can override only what it names.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FamilyConfig {
    /// Largest admissible Re z before `exp` is refused.
    pub overflow_re: f64,
}

impl Default for FamilyConfig {
    fn default() -> Self {
        Self { overflow_re: 700.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ContourConfig {
    /// Smallest |f| tolerated on a contour node.
    pub zero_floor: f64,
    /// Maximal distance of a winding integral from the nearest integer.
    pub winding_tolerance: f64,
    /// Node cap for the auto-doubling quadrature.
    pub max_nodes: usize,
    /// Node doubling stops once successive integrals agree to this.
    pub convergence_tol: f64,
    /// Central-difference step as a fraction of the circle radius.
    pub fd_step_ratio: f64,
}

impl Default for ContourConfig {
    fn default() -> Self {
        Self {
            zero_floor: 1e-12,
            winding_tolerance: 0.01,
            max_nodes: 4096,
            convergence_tol: 1e-10,
            fd_step_ratio: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FixedPointConfig {
    pub newton_max_iter: usize,
    pub newton_tol: f64,
    /// Accepted |f(z) - z| after polishing.
    pub residual_tol: f64,
    /// Accepted |f(z) - z| for inputs claimed to be fixed.
    pub fixed_point_tol: f64,
    /// Below this separation the pair counts as coalesced.
    pub coalesce_tol: f64,
}

impl Default for FixedPointConfig {
    fn default() -> Self {
        Self { newton_max_iter: 50, newton_tol: 1e-13, residual_tol: 1e-10, fixed_point_tol: 1e-8, coalesce_tol: 1e-12 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FatouConfig {
    /// Certified Abel residual.
    pub abel_tol: f64,
    /// Petal parameter L in the inverted plane.
    pub petal_scale: f64,
    /// Cap on orbit lengths used to evaluate any chart.
    pub max_iterations: usize,
    /// Order of the asymptotic expansion of parabolic Fatou coordinates.
    pub series_order: usize,
    /// |Z| from which the asymptotic expansion is trusted.
    pub series_radius: f64,
    /// Order of the Koenigs power series used near a fixed point.
    pub koenigs_order: usize,
    /// Koenigs series is used inside this fraction of the pair separation.
    pub koenigs_radius_ratio: f64,
    /// Lower edge h of the horn-map sampling band [h, 2h].
    pub horn_height: f64,
    pub horn_samples: usize,
    /// Accepted drift of the fitted horn constant between h and 2h.
    pub horn_consistency: f64,
    /// Accepted |exp(-2 pi i / B) - mu|.
    pub mu_tolerance: f64,
    /// Multipliers with ||mu| - 1| below this are refused by Koenigs charts.
    pub indifferent_band: f64,
    /// Smallest |Log mu| accepted by the 1/Log mu normalization.
    pub log_mu_floor: f64,
}

impl Default for FatouConfig {
    fn default() -> Self {
        Self {
            abel_tol: 1e-7,
            petal_scale: 10.0,
            max_iterations: 1_000_000,
            series_order: 8,
            series_radius: 100.0,
            koenigs_order: 14,
            koenigs_radius_ratio: 0.05,
            horn_height: 20.0,
            horn_samples: 8,
            horn_consistency: 1e-4,
            mu_tolerance: 1e-3,
            indifferent_band: 1e-10,
            log_mu_floor: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RayConfig {
    /// Escape radius for Green's function evaluation.
    pub escape_radius: f64,
    /// Iteration cap for Green's function evaluation.
    pub max_iter: usize,
    /// Certified |f(gamma(t)) - gamma(t+1)|.
    pub invariance_tol: f64,
    /// Quadratic rays are seeded where the Boettcher modulus exceeds this.
    pub quadratic_tail_modulus: f64,
    /// Exponential rays are seeded where the model potential exceeds this.
    pub exponential_tail_potential: f64,
    /// Minimal distance between a ray sample and a critical point.
    pub critical_distance: f64,
    /// Preimages closer than this to each other reject a pullback step.
    pub preimage_separation: f64,
    /// Bound on |entry| of external addresses.
    pub max_address: i64,
    /// Depth refinement stops when doubling moves no sample by more than this.
    pub depth_tol: f64,
}

impl Default for RayConfig {
    fn default() -> Self {
        Self {
            escape_radius: 1e8,
            max_iter: 10_000,
            invariance_tol: 1e-8,
            quadratic_tail_modulus: 1e6,
            exponential_tail_potential: 40.0,
            critical_distance: 1e-9,
            preimage_separation: 1e-6,
            max_address: 10,
            depth_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ParamRayConfig {
    /// Accepted |defect| at a solved parameter.
    pub defect_tol: f64,
    /// Trust radius = trust_factor * |seed - a0| + trust_floor.
    pub trust_factor: f64,
    pub trust_floor: f64,
    /// Smallest continuation step before giving up.
    pub min_step: f64,
    pub newton_max_iter: usize,
    /// Finite-difference step relative to max(1, |a|).
    pub fd_step: f64,
}

impl Default for ParamRayConfig {
    fn default() -> Self {
        Self {
            defect_tol: 1e-8,
            trust_factor: 0.1,
            trust_floor: 1e-3,
            min_step: 1e-3,
            newton_max_iter: 40,
            fd_step: 1e-7,
        }
    }
}

/// The full tolerance profile.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub family: FamilyConfig,
    pub contour: ContourConfig,
    pub fixed_points: FixedPointConfig,
    pub fatou: FatouConfig,
    pub rays: RayConfig,
    pub param_ray: ParamRayConfig,
}

impl Tolerances {
    /// Every tolerance must be strictly positive.
    pub fn validate(&self) -> crate::Result<()> {
        let checks = [
            ("family.overflow_re", self.family.overflow_re),
            ("contour.zero_floor", self.contour.zero_floor),
            ("contour.winding_tolerance", self.contour.winding_tolerance),
            ("contour.convergence_tol", self.contour.convergence_tol),
            ("contour.fd_step_ratio", self.contour.fd_step_ratio),
            ("fixed_points.newton_tol", self.fixed_points.newton_tol),
            ("fixed_points.residual_tol", self.fixed_points.residual_tol),
            ("fixed_points.fixed_point_tol", self.fixed_points.fixed_point_tol),
            ("fixed_points.coalesce_tol", self.fixed_points.coalesce_tol),
            ("fatou.abel_tol", self.fatou.abel_tol),
            ("fatou.petal_scale", self.fatou.petal_scale),
            ("fatou.series_radius", self.fatou.series_radius),
            ("fatou.koenigs_radius_ratio", self.fatou.koenigs_radius_ratio),
            ("fatou.horn_height", self.fatou.horn_height),
            ("fatou.horn_consistency", self.fatou.horn_consistency),
            ("fatou.mu_tolerance", self.fatou.mu_tolerance),
            ("fatou.indifferent_band", self.fatou.indifferent_band),
            ("fatou.log_mu_floor", self.fatou.log_mu_floor),
            ("rays.escape_radius", self.rays.escape_radius),
            ("rays.invariance_tol", self.rays.invariance_tol),
            ("rays.quadratic_tail_modulus", self.rays.quadratic_tail_modulus),
            ("rays.exponential_tail_potential", self.rays.exponential_tail_potential),
            ("rays.critical_distance", self.rays.critical_distance),
            ("rays.preimage_separation", self.rays.preimage_separation),
            ("rays.depth_tol", self.rays.depth_tol),
            ("param_ray.defect_tol", self.param_ray.defect_tol),
            ("param_ray.trust_factor", self.param_ray.trust_factor),
            ("param_ray.trust_floor", self.param_ray.trust_floor),
            ("param_ray.min_step", self.param_ray.min_step),
            ("param_ray.fd_step", self.param_ray.fd_step),
        ];
        for (name, value) in checks {
            if !(value > 0.0 && value.is_finite()) {
                return Err(crate::Error::InvalidInput(format!("tolerance {name} must be positive, got {value}")));
            }
        }
        if self.contour.max_nodes < 16 || self.fatou.horn_samples < 2 {
            return Err(crate::Error::InvalidInput("max_nodes must be >= 16 and horn_samples >= 2".into()));
        }
        Ok(())
    }
}
