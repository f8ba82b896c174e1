//! Shape files, CSV tables and the reference-values file.
//!
//! Shapes are stored as JSON objects tagged by `kind`:
//!
//! ```json
//! {"kind":"nearly_spherical","N":2,"grid":{"layout":"circle","m":4},
//!  "t":0.1,"center":[0,0,0],"scale":1,"u":[0.5,0,-0.5,0]}
//! {"kind":"radial","N":3,"breakpoints":[0.9,1,1.1],"inside":[true,false,true,false]}
//! {"kind":"balls","N":2,"balls":[{"center":[0,0,0],"radius":0.5}]}
//! ```
//!
//! `u[i]` is the sample at grid node `i`. Floats are written in shortest
//! round-trip form, so reading back a written shape reproduces it bit for bit.

use crate::error::{domain, Error, Result};
use crate::geometry::{
    Ball, BallConfiguration, GridLayout, NearlySphericalShape, RadialProfile, Shape, SphereGrid,
};
use crate::spectral::SpectralTable;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum ShapeFile {
    NearlySpherical {
        #[serde(rename = "N")]
        n: usize,
        grid: GridLayout,
        t: f64,
        #[serde(default)]
        center: [f64; 3],
        #[serde(default = "unit")]
        scale: f64,
        u: Vec<f64>,
    },
    Radial {
        #[serde(rename = "N")]
        n: usize,
        breakpoints: Vec<f64>,
        inside: Vec<bool>,
    },
    Balls {
        #[serde(rename = "N")]
        n: usize,
        balls: Vec<Ball>,
    },
}

fn unit() -> f64 {
    1.0
}

fn layout_dimension(l: &GridLayout) -> usize {
    match l {
        GridLayout::Circle { .. } => 2,
        GridLayout::GaussAzimuth { .. } => 3,
    }
}

impl ShapeFile {
    fn from_shape(s: &Shape) -> Self {
        match s {
            Shape::NearlySpherical(e) => ShapeFile::NearlySpherical {
                n: e.n(),
                grid: e.grid.layout,
                t: e.t,
                center: e.center,
                scale: e.scale,
                u: e.u.clone(),
            },
            Shape::Radial(p) => ShapeFile::Radial {
                n: p.n,
                breakpoints: p.breakpoints.clone(),
                inside: p.inside.clone(),
            },
            Shape::Balls(c) => ShapeFile::Balls {
                n: c.n,
                balls: c.balls.clone(),
            },
        }
    }

    fn into_shape(self) -> Result<Shape> {
        Ok(match self {
            ShapeFile::NearlySpherical {
                n,
                grid,
                t,
                center,
                scale,
                u,
            } => {
                if layout_dimension(&grid) != n {
                    return Err(domain(format!("grid layout does not match N = {n}")));
                }
                let grid = SphereGrid::from_layout(grid)?;
                let mut e = NearlySphericalShape::new(grid, t, u)?;
                e.center = center;
                e.scale = scale;
                e.validate()?;
                Shape::NearlySpherical(e)
            }
            ShapeFile::Radial {
                n,
                breakpoints,
                inside,
            } => Shape::Radial(RadialProfile::new(n, breakpoints, inside)?),
            ShapeFile::Balls { n, balls } => Shape::Balls(BallConfiguration::new(n, balls)?),
        })
    }
}

/// JSON text of a shape.
pub fn shape_to_json(shape: &Shape) -> String {
    serde_json::to_string_pretty(&ShapeFile::from_shape(shape)).expect("shape serializes")
}

/// Parses and validates a shape. Syntax errors give [`Error::Parse`];
/// constraint violations give the error of the shape constructor.
pub fn shape_from_json(text: &str) -> Result<Shape> {
    let f: ShapeFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    f.into_shape()
}

pub fn read_shape(path: &std::path::Path) -> Result<Shape> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    shape_from_json(&text)
}

/// `x` with 17 significant digits; negative zero prints as zero.
pub fn fmt17(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

/// Writes one CSV row of floats.
pub fn write_row(w: &mut impl Write, values: &[f64]) -> std::io::Result<()> {
    let cells: Vec<String> = values.iter().map(|v| fmt17(*v)).collect();
    writeln!(w, "{}", cells.join(","))
}

/// Spectral table as CSV with a commented parameter header.
pub fn write_spectral_csv(table: &SpectralTable, w: &mut impl Write) -> std::io::Result<()> {
    writeln!(w, "# N={}", table.params.n)?;
    writeln!(w, "# beta={}", fmt17(table.params.beta))?;
    writeln!(w, "# C_beta={}", fmt17(table.c_beta))?;
    writeln!(w, "# D_beta={}", fmt17(table.d_beta))?;
    writeln!(
        w,
        "# theta_k: Funk-Hecke multiplier of |w-z|^beta; lambda_k = 2^(1+beta/2)(theta_0 - theta_k)"
    )?;
    writeln!(w, "k,theta,mu,lambda,lambda_minus_lambda_inf")?;
    for k in 0..table.theta.len() {
        writeln!(
            w,
            "{k},{},{},{},{}",
            fmt17(table.theta[k]),
            fmt17(table.mu[k]),
            fmt17(table.lambda[k]),
            fmt17(table.lambda[k] - table.lambda_inf)
        )?;
    }
    Ok(())
}

/// One line of the reference-values file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceRecord {
    pub quantity: String,
    /// `key=value` pairs separated by `;`.
    pub params: String,
    pub value: f64,
    /// Standard error or error bound of `value` (0 for closed forms).
    pub error: f64,
    pub oracle: String,
    pub seed: Option<u64>,
}

impl ReferenceRecord {
    /// Value of `key` in [`ReferenceRecord::params`].
    pub fn param(&self, key: &str) -> Option<&str> {
        self.params.split(';').find_map(|kv| {
            let (k, v) = kv.split_once('=')?;
            (k.trim() == key).then_some(v.trim())
        })
    }
}

pub fn write_references(records: &[ReferenceRecord], w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in records {
        out.serialize(r).map_err(|e| Error::Parse(e.to_string()))?;
    }
    out.flush().map_err(|e| Error::Parse(e.to_string()))
}

pub fn read_references(r: impl BufRead) -> Result<Vec<ReferenceRecord>> {
    let mut rd = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(r);
    rd.deserialize()
        .map(|row| row.map_err(|e| Error::Parse(e.to_string())))
        .collect()
}

pub fn load_references(path: &std::path::Path) -> Result<Vec<ReferenceRecord>> {
    let f =
        std::fs::File::open(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    read_references(std::io::BufReader::new(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radial_round_trip() {
        let s = Shape::Radial(crate::geometry::annulus_family(0.1, 3).unwrap());
        let back = shape_from_json(&shape_to_json(&s)).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn rejects_large_perturbation() {
        let text = r#"{"kind":"nearly_spherical","N":2,"grid":{"layout":"circle","m":4},
            "t":0.1,"u":[0.6,0,-0.6,0]}"#;
        assert!(matches!(shape_from_json(text), Err(Error::Domain(_))));
        assert!(matches!(shape_from_json("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn reference_params() {
        let r = ReferenceRecord {
            quantity: "g_beta_ball".into(),
            params: "N=2;beta=1".into(),
            value: 1.0,
            error: 0.0,
            oracle: "closed".into(),
            seed: None,
        };
        assert_eq!(r.param("beta"), Some("1"));
        let mut buf = Vec::new();
        write_references(std::slice::from_ref(&r), &mut buf).unwrap();
        let back = read_references(buf.as_slice()).unwrap();
        assert_eq!(back, vec![r]);
    }
}
