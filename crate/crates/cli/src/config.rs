use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

use cdcurv::error::Error;
use cdcurv::geometry::GridSpec;
use cdcurv::kernels::DiagonalKernel;
use cdcurv::wirtinger::WirtingerStencil;

use crate::args::{Common, Format, StencilArgs};
use crate::CliError;

/// Everything a run depends on; embedded in every output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub kernels: Vec<Value>,
    pub truncation: Option<usize>,
    pub stencil: Option<WirtingerStencil>,
    pub grid: Option<GridSpec>,
    pub out: Option<String>,
    pub format: Format,
    pub seed: u64,
    pub options: Value,
}

impl Serialize for Format {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

impl RunConfig {
    pub fn new(command: &str, common: &Common) -> Self {
        RunConfig {
            command: command.into(),
            kernels: Vec::new(),
            truncation: None,
            stencil: None,
            grid: None,
            out: common.out.as_ref().map(|p| p.display().to_string()),
            format: common.format,
            seed: common.seed,
            options: Value::Null,
        }
    }
}

/// Inline JSON when the argument starts with `{`, otherwise a file path.
pub fn load_kernel(arg: &str) -> Result<DiagonalKernel, CliError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg))
            .map_err(|e| Error::Config(format!("cannot read kernel descriptor `{arg}`: {e}")))?
    };
    Ok(DiagonalKernel::from_json(&text)?)
}

pub fn stencil(args: &StencilArgs) -> Result<WirtingerStencil, CliError> {
    Ok(WirtingerStencil::new(args.step, args.order)?)
}

/// Parses a grid argument (see `GridSpec::from_str`) for the ball of dimension `m`.
pub fn parse_grid(spec: &str, m: usize) -> Result<GridSpec, Error> {
    let grid: GridSpec = spec.parse()?;
    if grid.dim() != m {
        return Err(Error::Config(format!(
            "grid lives in dimension {}, the metric in {m}",
            grid.dim()
        )));
    }
    grid.points()?;
    Ok(grid)
}

/// Direction and radii of a radial grid.
pub fn radial_parts(grid: &GridSpec) -> Result<(Vec<Complex64>, Vec<f64>), Error> {
    match grid {
        GridSpec::Radial { direction, radii } => Ok((direction.clone(), radii.clone())),
        _ => Err(Error::Config("scan needs a radial grid".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_are_checked_against_the_ball() {
        assert_eq!(parse_grid("radial:2:2:0.5:3", 2).unwrap().points().unwrap().len(), 3);
        assert_eq!(parse_grid("lattice:2:3:0.5", 2).unwrap().points().unwrap().len(), 9);
        assert!(matches!(parse_grid("radial:2:1:0.5:3", 1), Err(Error::Config(_))));
        assert!(matches!(parse_grid("radii:1:1:1.5", 1), Err(Error::Domain(_))));
        assert!(matches!(parse_grid("spiral", 1), Err(Error::Config(_))));
    }
}
