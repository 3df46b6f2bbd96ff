//! Parametric manta-shaped shell: sectional description, lofted surface
//! mesh, enclosed volume, and mesh export.

pub mod loft;
pub mod mesh;
pub mod naca;

pub use loft::{loft, MeshResolution};
pub use mesh::{enclosed_volume, SurfaceMesh};
pub use naca::naca4_profile;

use crate::error::{Error, Result};
use crate::linalg::Vec3;
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

/// Number of free geometric parameters of the half-body.
pub const DESIGN_DIM: usize = 32;

/// Parameters of one transverse section.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectionParams<T> {
    /// Maximum camber as a fraction of chord.
    pub camber_max: T,
    /// Chordwise position of maximum camber, fraction of chord.
    pub camber_pos: T,
    /// Thickness ratio, fraction of chord.
    pub thickness: T,
    /// Chord length in meters.
    pub chord: T,
    /// Leading-edge position in meters, relative to the root leading edge.
    pub leading_edge: Vec3<T>,
    /// Twist (pitch about the spanwise axis), radians.
    pub twist: T,
    /// Roll (about the streamwise axis), radians.
    pub roll: T,
    /// Yaw (about the vertical axis), radians.
    pub yaw: T,
}

impl<T: Real> SectionParams<T> {
    /// Root section: camber-free, unrotated, leading edge at the origin.
    pub fn root(thickness: T, chord: T) -> Self {
        SectionParams {
            camber_max: T::zero(),
            camber_pos: T::of(0.5),
            thickness,
            chord,
            leading_edge: Vec3::zero(),
            twist: T::zero(),
            roll: T::zero(),
            yaw: T::zero(),
        }
    }

    /// Place a unit-chord profile point into 3-D space: scale by chord,
    /// rotate twist (about y), then roll (about x), then yaw (about z),
    /// translate by the leading edge.
    pub fn place(&self, profile_pt: [T; 2]) -> Vec3<T> {
        let px = profile_pt[0] * self.chord;
        let pz = profile_pt[1] * self.chord;
        // twist about the spanwise (y) axis through the leading edge
        let (st, ct) = (self.twist.sin(), self.twist.cos());
        let (x1, y1, z1) = (ct * px + st * pz, T::zero(), -st * px + ct * pz);
        // roll about the streamwise (x) axis
        let (sr, cr) = (self.roll.sin(), self.roll.cos());
        let (x2, y2, z2) = (x1, cr * y1 - sr * z1, sr * y1 + cr * z1);
        // yaw about the vertical (z) axis
        let (sy, cy) = (self.yaw.sin(), self.yaw.cos());
        let (x3, y3, z3) = (cy * x2 - sy * y2, sy * x2 + cy * y2, z2);
        Vec3::new(
            x3 + self.leading_edge.x,
            y3 + self.leading_edge.y,
            z3 + self.leading_edge.z,
        )
    }
}

/// The 32 free geometric parameters of the half-body, ordered as
/// `[root thickness, root chord]` followed by ten parameters per outboard
/// section in `SectionParams` order: camber_max, camber_pos, thickness,
/// chord, leading-edge x/y/z, twist, roll, yaw.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FullDesignVector<T>(pub Vec<T>);

impl<T: Real> FullDesignVector<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.len() != DESIGN_DIM {
            return Err(Error::domain(
                "u",
                format!("expected {DESIGN_DIM} parameters, got {}", values.len()),
            ));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::domain("u", format!("non-finite component {v}")));
        }
        Ok(FullDesignVector(values))
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    /// Check every component against the configured box.
    pub fn validate_bounds(&self, bounds: &GeometryBounds<T>) -> Result<()> {
        for (i, &v) in self.0.iter().enumerate() {
            let (lo, hi) = (bounds.lower[i], bounds.upper[i]);
            if v < lo || v > hi {
                return Err(Error::domain(
                    "u",
                    format!("component {i} = {v} outside [{lo}, {hi}]"),
                ));
            }
        }
        Ok(())
    }
}

/// Box bounds on the 32 design parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometryBounds<T> {
    pub lower: Vec<T>,
    pub upper: Vec<T>,
}

impl<T: Real> GeometryBounds<T> {
    pub fn new(lower: Vec<T>, upper: Vec<T>) -> Result<Self> {
        if lower.len() != DESIGN_DIM || upper.len() != DESIGN_DIM {
            return Err(Error::InvalidConfig("geometry bounds must have 32 entries".into()));
        }
        if lower.iter().zip(&upper).any(|(l, u)| l >= u) {
            return Err(Error::InvalidConfig("geometry lower bound >= upper bound".into()));
        }
        Ok(GeometryBounds { lower, upper })
    }

    /// Default box: wide ranges around the shipped baseline with spanwise
    /// ordinates kept strictly ordered so every sample lofts cleanly.
    pub fn default_box() -> Self {
        let lower = vec![
            0.12, 0.85, // root thickness, chord
            0.0, 0.25, 0.10, 0.60, 0.00, 0.22, -0.02, -0.07, -0.05, -0.05, // section 2
            0.0, 0.25, 0.08, 0.35, 0.00, 0.52, -0.02, -0.08, -0.05, -0.05, // section 3
            0.0, 0.25, 0.06, 0.12, 0.10, 0.90, -0.02, -0.09, -0.05, -0.05, // section 4
        ];
        let upper = vec![
            0.24, 1.15, //
            0.04, 0.60, 0.22, 1.00, 0.15, 0.34, 0.04, 0.03, 0.05, 0.05, //
            0.04, 0.60, 0.18, 0.95, 0.30, 0.72, 0.05, 0.03, 0.05, 0.05, //
            0.04, 0.60, 0.14, 0.60, 0.45, 1.10, 0.06, 0.02, 0.05, 0.05, //
        ];
        GeometryBounds {
            lower: lower.into_iter().map(T::of).collect(),
            upper: upper.into_iter().map(T::of).collect(),
        }
    }
}

/// Baseline half-body: wingspan about 2 m, center-body length 1 m. The
/// published description does not list parameter values, so this is the
/// shipped stand-in matching those overall dimensions.
pub fn baseline_design<T: Real>() -> FullDesignVector<T> {
    let u = vec![
        0.20, 1.00, // root thickness, chord
        0.005, 0.40, 0.18, 0.98, 0.01, 0.28, 0.000, -0.02, 0.0, 0.0, // section 2
        0.008, 0.40, 0.14, 0.92, 0.04, 0.62, 0.005, -0.04, 0.0, 0.0, // section 3
        0.008, 0.40, 0.10, 0.55, 0.22, 1.00, 0.010, -0.05, 0.0, 0.0, // section 4
    ];
    FullDesignVector(u.into_iter().map(T::of).collect())
}

/// Expand the packed design vector into the four transverse sections.
pub fn build_sections<T: Real>(u: &FullDesignVector<T>) -> [SectionParams<T>; 4] {
    let v = u.as_slice();
    let root = SectionParams::root(v[0], v[1]);
    let mut sections = [root; 4];
    for k in 0..3 {
        let o = 2 + 10 * k;
        sections[k + 1] = SectionParams {
            camber_max: v[o],
            camber_pos: v[o + 1],
            thickness: v[o + 2],
            chord: v[o + 3],
            leading_edge: Vec3::new(v[o + 4], v[o + 5], v[o + 6]),
            twist: v[o + 7],
            roll: v[o + 8],
            yaw: v[o + 9],
        };
    }
    sections
}
