//! Shapes on which energies are evaluated: nearly-spherical sets sampled on
//! a sphere grid, radial step functions and profiles, and disjoint balls.

mod config;
mod grid;
pub mod optimize;
mod radial;
mod shape;

pub use config::{Ball, BallConfiguration};
pub use grid::{GridLayout, SphereGrid};
pub use radial::{
    annulus_family, lens_deficit, lens_volume, RadialAsymmetry, RadialProfile, RadialStep,
};
pub use shape::{Asymmetry, NearlySphericalShape, SUP_NORM_SLACK};

use crate::error::Result;

/// Any shape the energy routines accept.
#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    NearlySpherical(NearlySphericalShape),
    Radial(RadialProfile),
    Balls(BallConfiguration),
}

impl Shape {
    pub fn n(&self) -> usize {
        match self {
            Shape::NearlySpherical(s) => s.n(),
            Shape::Radial(p) => p.n,
            Shape::Balls(c) => c.n,
        }
    }

    pub fn volume(&self) -> f64 {
        match self {
            Shape::NearlySpherical(s) => s.volume(),
            Shape::Radial(p) => p.volume(),
            Shape::Balls(c) => c.volume(),
        }
    }

    /// Dilation by `lambda` about the origin.
    pub fn rescale(&self, lambda: f64) -> Result<Self> {
        Ok(match self {
            Shape::NearlySpherical(s) => Shape::NearlySpherical(s.rescale(lambda)?),
            Shape::Radial(p) => Shape::Radial(p.rescale(lambda)?),
            Shape::Balls(c) => Shape::Balls(c.rescale(lambda)?),
        })
    }
}
