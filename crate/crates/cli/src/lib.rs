//! Front end for the `cdcurv` binary.
//!
//! Every command returns its full output as a string so that writing is a
//! single ordered step. JSON goes through `serde_json::Value`, whose maps
//! are sorted, so identical inputs give identical bytes.

pub mod args;
pub mod config;

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use cdcurv::curvature::{curvature, CurvatureTensor, MetricField, Section};
use cdcurv::diagnostics::gallery::{reproduce, GALLERY_IDS};
use cdcurv::diagnostics::scans::curvature_ratio_scan_along;
use cdcurv::diagnostics::similarity::{shift_similarity, SimilarityOptions};
use cdcurv::error::{Error, ErrorClass};
use cdcurv::export::{curvature_csv, ratio_scan_csv};
use cdcurv::kernels::DiagonalKernel;
use cdcurv::multiindex::MultiIndex;
use cdcurv::shifts::ShiftTuple;
use cdcurv::wirtinger::CMat;

use args::{Command, CurvatureArgs, Format, KernelArgs, MetricKind, ReproduceArgs, ScanArgs, SimilarityArgs};
use config::{load_kernel, parse_grid, radial_parts, stencil, RunConfig};

pub const EXIT_FAILED_CHECK: u8 = 1;
pub const EXIT_USAGE: u8 = 64;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Usage(String),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl CliError {
    /// Domain 2, definiteness 3, truncation 4, config 5, usage 64, other 1.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) => match e.class() {
                ErrorClass::Domain => 2,
                ErrorClass::Definiteness => 3,
                ErrorClass::Truncation => 4,
                ErrorClass::Config => 5,
                ErrorClass::Other => 1,
            },
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => 1,
        }
    }
}

/// What a command produced: the body to write and the exit status.
#[derive(Debug)]
pub struct Output {
    pub body: String,
    /// Printed to stdout even when the body goes to a file.
    pub summary: Option<String>,
    pub exit: u8,
}

impl Output {
    fn ok(body: String) -> Self {
        Output { body, summary: None, exit: 0 }
    }
}

pub fn run(command: Command) -> Result<Output, CliError> {
    match command {
        Command::Kernel(a) => cmd_kernel(a),
        Command::Curvature(a) => cmd_curvature(a),
        Command::Similarity(a) => cmd_similarity(a),
        Command::Scan(a) => cmd_scan(a),
        Command::Reproduce(a) => cmd_reproduce(a),
    }
}

/// Thread pool sized by `CDCURV_THREADS` when set.
pub fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("CDCURV_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::Config(format!("CDCURV_THREADS must be a positive integer, got `{v}`")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::Io(e.to_string()))
}

fn to_json(config: &RunConfig, result: impl Serialize) -> Result<String, CliError> {
    let value = json!({
        "config": serde_json::to_value(config).map_err(|e| CliError::Io(e.to_string()))?,
        "result": serde_json::to_value(result).map_err(|e| CliError::Io(e.to_string()))?,
    });
    let mut text = serde_json::to_string_pretty(&value).map_err(|e| CliError::Io(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

fn csv_with_config(config: &RunConfig, body: &str) -> Result<String, CliError> {
    let value = serde_json::to_value(config).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(format!("# config: {value}\n{body}"))
}

#[derive(Serialize)]
struct Ray {
    direction: String,
    rho: Vec<f64>,
}

fn cmd_kernel(a: KernelArgs) -> Result<Output, CliError> {
    let kernel = load_kernel(&a.kernel)?;
    let mut config = RunConfig::new("kernel", &a.common);
    config.kernels.push(kernel.descriptor().clone());

    let len = kernel.known_len().map_or(10, |n| n.min(10));
    let coeffs = (0..len).map(|i| kernel.coefficient(i)).collect::<Result<Vec<_>, _>>()?;
    let m = kernel.m();
    let mut rays = Vec::new();
    for axis in 0..m {
        let rho = (0..len)
            .map(|d| kernel.weight(&MultiIndex::zero(m).raised_by(axis, d)))
            .collect::<Result<Vec<_>, _>>()?;
        rays.push(Ray { direction: format!("e{}", axis + 1), rho });
    }
    if m > 1 {
        let rho = (0..len)
            .take_while(|d| d * m < len)
            .map(|d| kernel.weight(&MultiIndex::new(vec![d; m])))
            .collect::<Result<Vec<_>, _>>()?;
        rays.push(Ray { direction: "diagonal".into(), rho });
    }
    let b: Option<Vec<i64>> = kernel
        .inverse_polynomial()
        .map(|inv| inv.b.iter().map(|&v| v as i64).collect());

    let body = match a.common.format {
        Format::Json => to_json(
            &config,
            json!({
                "family": kernel.family_name(),
                "m": m,
                "coefficients": coeffs,
                "rays": rays,
                "inverse_coefficients": b,
            }),
        )?,
        Format::Csv => {
            let mut out = String::from("i,a,b\n");
            for (i, c) in coeffs.iter().enumerate() {
                let bi = b.as_ref().and_then(|b| b.get(i)).map_or(String::new(), |v| v.to_string());
                out.push_str(&format!("{i},{c:.16e},{bi}\n"));
            }
            csv_with_config(&config, &out)?
        }
    };
    Ok(Output::ok(body))
}

fn curvature_metric(a: &CurvatureArgs, config: &mut RunConfig) -> Result<MetricField, CliError> {
    let kernel = a.kernel.as_deref().map(load_kernel).transpose()?;
    if let Some(k) = &kernel {
        config.kernels.push(k.descriptor().clone());
    }
    let need_kernel = || {
        kernel
            .clone()
            .ok_or_else(|| CliError::Core(Error::Config(format!("--metric {:?} needs --kernel", a.metric).to_lowercase())))
    };
    Ok(match a.metric {
        MetricKind::Kernel => MetricField::kernel_line(&need_kernel()?),
        MetricKind::Truncated => {
            let k = need_kernel()?;
            config.truncation = Some(a.n);
            let shift = Arc::new(ShiftTuple::build(&k, a.n)?);
            let section: Section = Arc::new(move |w: &[Complex64]| shift.joint_eigenvector(w));
            MetricField::frame_gram(k.m(), vec![section])
        }
        MetricKind::Constant => {
            let m = match (a.m, &kernel) {
                (Some(m), _) => m,
                (None, Some(k)) => k.m(),
                (None, None) => return Err(Error::Config("--metric constant needs --m or --kernel".into()).into()),
            };
            if m == 0 || a.rank == 0 {
                return Err(Error::Config("--m and --rank must be positive".into()).into());
            }
            MetricField::constant(m, CMat::identity(a.rank, a.rank))
        }
    })
}

fn cmd_curvature(a: CurvatureArgs) -> Result<Output, CliError> {
    let mut config = RunConfig::new("curvature", &a.common);
    let h = curvature_metric(&a, &mut config)?;
    let s = stencil(&a.stencil)?;
    let m = h.dim();
    let grid = parse_grid(a.grid.as_deref().unwrap_or(&format!("radial:{m}:1:0.8:9")), m)?;
    config.stencil = Some(s);
    config.grid = Some(grid.clone());
    config.options = json!({ "metric": format!("{:?}", a.metric).to_lowercase(), "rank": h.rank() });

    let points = grid.points()?;
    let tensors: Vec<CurvatureTensor> = thread_pool()?.install(|| {
        points
            .par_iter()
            .map(|w| curvature(&h, w, &s))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let body = match a.common.format {
        Format::Json => to_json(&config, json!({ "curvature": tensors }))?,
        Format::Csv => csv_with_config(&config, &curvature_csv(&tensors)?)?,
    };
    Ok(Output::ok(body))
}

fn two_kernels(list: &[String]) -> Result<(DiagonalKernel, DiagonalKernel), CliError> {
    match list {
        [a, b] => Ok((load_kernel(a)?, load_kernel(b)?)),
        _ => Err(CliError::Usage(format!("expected exactly two --kernel arguments, got {}", list.len()))),
    }
}

fn cmd_similarity(a: SimilarityArgs) -> Result<Output, CliError> {
    if a.common.format == Format::Csv {
        return Err(Error::Config("similarity verdicts are written as JSON only".into()).into());
    }
    let (k1, k2) = two_kernels(&a.kernel)?;
    let opts = SimilarityOptions {
        max_l: a.max_l,
        low: a.low,
        high: a.high,
        base_degree: a.base_degree,
        ..SimilarityOptions::default()
    };
    let mut config = RunConfig::new("similarity", &a.common);
    config.kernels = vec![k1.descriptor().clone(), k2.descriptor().clone()];
    config.options = serde_json::to_value(opts).map_err(|e| CliError::Io(e.to_string()))?;
    let verdict = shift_similarity(&k1, &k2, &opts)?;
    Ok(Output::ok(to_json(&config, verdict)?))
}

fn cmd_scan(a: ScanArgs) -> Result<Output, CliError> {
    let (kt, ks) = two_kernels(&a.kernel)?;
    let s = stencil(&a.stencil)?;
    let m = kt.m();
    if a.axis == 0 || a.axis > m {
        return Err(Error::Config(format!("axis {} out of range 1..={m}", a.axis)).into());
    }
    let default = format!("radii:{m}:{}:0.5,0.9,0.99,0.999", a.axis);
    let grid = parse_grid(a.grid.as_deref().unwrap_or(&default), m)?;
    let (direction, radii) = radial_parts(&grid)?;
    let mut config = RunConfig::new("scan", &a.common);
    config.kernels = vec![kt.descriptor().clone(), ks.descriptor().clone()];
    config.stencil = Some(s);
    config.grid = Some(grid);
    config.options = json!({ "axis": a.axis });
    let scan = curvature_ratio_scan_along(
        &MetricField::kernel_line(&kt),
        &MetricField::kernel_line(&ks),
        a.axis - 1,
        &direction,
        &radii,
        &s,
    )?;
    let body = match a.common.format {
        Format::Json => to_json(&config, scan)?,
        Format::Csv => csv_with_config(&config, &ratio_scan_csv(&scan))?,
    };
    Ok(Output::ok(body))
}

fn cmd_reproduce(a: ReproduceArgs) -> Result<Output, CliError> {
    if !GALLERY_IDS.contains(&a.id.as_str()) {
        return Err(CliError::Usage(format!(
            "unknown example `{}`; expected one of {}",
            a.id,
            GALLERY_IDS.join(", ")
        )));
    }
    let mut config = RunConfig::new("reproduce", &a.common);
    config.options = json!({ "id": a.id });
    let report = reproduce(&a.id, a.common.seed)?;

    let mut table = format!("{}: {}\n", report.id, report.title);
    for c in &report.checks {
        table.push_str(&format!(
            "  {} {}: reference {:.10e}, computed {:.10e}, tolerance {:.1e} ({:?})\n",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.reference,
            c.computed,
            c.tolerance,
            c.comparison
        ));
    }
    for n in &report.notes {
        table.push_str(&format!("  note: {n}\n"));
    }
    table.push_str(if report.pass { "pass\n" } else { "fail\n" });

    let body = match a.common.format {
        Format::Json => to_json(&config, &report)?,
        Format::Csv => {
            let mut out = String::from("name,reference,computed,tolerance,comparison,pass\n");
            for c in &report.checks {
                out.push_str(&format!(
                    "{},{:.16e},{:.16e},{:.16e},{:?},{}\n",
                    c.name, c.reference, c.computed, c.tolerance, c.comparison, c.pass
                ));
            }
            csv_with_config(&config, &out)?
        }
    };
    Ok(Output {
        body,
        summary: Some(table),
        exit: if report.pass { 0 } else { EXIT_FAILED_CHECK },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_taxonomy() {
        let code = |e: Error| CliError::Core(e).exit_code();
        assert_eq!(code(Error::Domain("x".into())), 2);
        assert_eq!(code(Error::Definiteness { min_eigenvalue: -1.0, threshold: 0.0 }), 3);
        assert_eq!(code(Error::Truncation { message: "x".into(), suggested_n: None }), 4);
        assert_eq!(code(Error::Config("x".into())), 5);
        assert_eq!(code(Error::Frame("x".into())), 1);
        assert_eq!(CliError::Usage("x".into()).exit_code(), EXIT_USAGE);
    }
}
