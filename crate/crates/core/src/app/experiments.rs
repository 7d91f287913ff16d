use nalgebra::Vector2;

use super::config::{Experiment, RunConfig};
use super::output::{format_float, pgm_path, write_file, write_stdout, ScalarGrid};
use super::AppError;
use crate::modes::superposition_amplitude_and_gradient;
use crate::modespace::{angular_momentum_modespace, momentum_modespace};
use crate::quadrature::{centroid, momenta_numeric};
use crate::tilt::{tilted_centroid_closed, tilted_momenta_numeric};
use crate::verify::{run_all, Check};
use crate::Point3;

pub use super::output::Table;

pub const MOMENTS_HEADER: [&str; 16] = [
    "sigma",
    "z",
    "px_numeric",
    "py_numeric",
    "pz_numeric",
    "jx_numeric",
    "jy_numeric",
    "jz_numeric",
    "x_centroid_lambdabar",
    "y_centroid_lambdabar",
    "px_modespace",
    "py_modespace",
    "pz_modespace",
    "jx_modespace",
    "jy_modespace",
    "jz_modespace",
];

pub const CENTROID_HEADER: [&str; 5] =
    ["z", "x_centroid_lambdabar", "y_centroid_lambdabar", "x_predicted_lambdabar", "y_predicted_lambdabar"];

pub const TILT_HEADER: [&str; 16] = [
    "theta_rad",
    "phi_rad",
    "z",
    "sigma",
    "x_centroid_lambdabar",
    "y_centroid_lambdabar",
    "x_closed_lambdabar",
    "y_closed_lambdabar",
    "shift_lambdabar",
    "shift_closed_lambdabar",
    "px_over_pz",
    "py_over_pz",
    "jx_over_pz",
    "jy_over_pz",
    "jz_over_pz",
    "j_norm_over_pz",
];

pub const VERIFY_HEADER: [&str; 4] = ["check", "value", "tolerance", "status"];

/// Numeric and mode-space momenta for every helicity and plane.
pub fn moments_table(cfg: &RunConfig) -> Result<Table, AppError> {
    let mut t = Table::new(&MOMENTS_HEADER);
    let g = &cfg.geometry;
    let p_modes = momentum_modespace(&cfg.modes, g);
    for pol in &cfg.polarizations {
        let sigma = pol.helicity();
        let j_modes = angular_momentum_modespace(&cfg.modes, g, sigma)?;
        for &z in &cfg.zs {
            let m = momenta_numeric(&cfg.modes, pol, g, z, &cfg.quadrature)?;
            t.push_numbers(&[
                sigma,
                z,
                m.p.x,
                m.p.y,
                m.p.z,
                m.j.x,
                m.j.y,
                m.j.z,
                m.centroid.x,
                m.centroid.y,
                p_modes.x,
                p_modes.y,
                p_modes.z,
                j_modes.x,
                j_modes.y,
                j_modes.z,
            ]);
        }
    }
    Ok(t)
}

/// Centroid by quadrature next to `(-J_y, J_x)/P_z + z P_perp/P_z` from the mode-space operators.
pub fn centroid_table(cfg: &RunConfig) -> Result<Table, AppError> {
    let mut t = Table::new(&CENTROID_HEADER);
    let g = &cfg.geometry;
    let pol = &cfg.polarizations[0];
    let p = momentum_modespace(&cfg.modes, g);
    let j = angular_momentum_modespace(&cfg.modes, g, pol.helicity())?;
    let waist = Vector2::new(-j.y, j.x) / p.z;
    let slope = Vector2::new(p.x, p.y) / p.z;
    for &z in &cfg.zs {
        let r = centroid(&cfg.modes, pol, g, z, &cfg.quadrature)?;
        let predicted = waist + slope * z;
        t.push_numbers(&[z, r.x, r.y, predicted.x, predicted.y]);
    }
    Ok(t)
}

/// Tilted fundamental Gaussian over theta x phi x z x sigma.
pub fn tilt_sweep_table(cfg: &RunConfig) -> Result<Table, AppError> {
    let mut t = Table::new(&TILT_HEADER);
    let g = &cfg.geometry;
    for frame in &cfg.frames {
        let normal = frame.incidence_normal();
        let normal = Vector2::new(normal.x, normal.y);
        for &z in &cfg.zs {
            for pol in &cfg.polarizations {
                let sigma = pol.helicity();
                let m = tilted_momenta_numeric(sigma, g, frame, z, &cfg.quadrature)?;
                let closed = tilted_centroid_closed(sigma, frame, z, g)?;
                let (p, j) = (m.p / m.p.z, m.j / m.p.z);
                t.push_numbers(&[
                    frame.theta(),
                    frame.phi(),
                    z,
                    sigma,
                    m.centroid.x,
                    m.centroid.y,
                    closed.x,
                    closed.y,
                    m.centroid.dot(&normal),
                    closed.dot(&normal),
                    p.x,
                    p.y,
                    j.x,
                    j.y,
                    j.z,
                    j.norm(),
                ]);
            }
        }
    }
    Ok(t)
}

/// `p_z = |f|^2` on a square grid of half-width `extent * w(z)` in the first requested plane.
pub fn density_grid(cfg: &RunConfig) -> Result<ScalarGrid, AppError> {
    let g = &cfg.geometry;
    let z = cfg.zs[0];
    let half = cfg.grid_extent * g.spot_size(z);
    let n = cfg.grid_size;
    let axis: Vec<f64> = (0..n).map(|i| -half + 2.0 * half * i as f64 / (n - 1) as f64).collect();
    let mut values = Vec::with_capacity(n * n);
    for &y in &axis {
        for &x in &axis {
            let e = superposition_amplitude_and_gradient(&cfg.modes, &Point3::new(x, y, z), g)?;
            values.push(e.f.norm_sqr());
        }
    }
    Ok(ScalarGrid { xs: axis.clone(), ys: axis, values })
}

pub fn verify_table(cfg: &RunConfig) -> Result<(Table, Vec<Check>), AppError> {
    let checks = run_all(&cfg.verify)?;
    let mut t = Table::new(&VERIFY_HEADER);
    for c in &checks {
        t.push_cells(vec![
            c.name.clone(),
            format_float(c.value),
            format_float(c.tolerance),
            if c.passed() { "pass" } else { "FAIL" }.to_string(),
        ]);
    }
    Ok((t, checks))
}

fn emit(cfg: &RunConfig, text: &str) -> Result<(), AppError> {
    match &cfg.out {
        Some(path) => write_file(path, text.as_bytes()),
        None => write_stdout(text.as_bytes()),
    }
}

/// Runs the configured experiment and writes its outputs.
pub fn run(cfg: &RunConfig) -> Result<(), AppError> {
    match cfg.experiment {
        Experiment::Moments => emit(cfg, &moments_table(cfg)?.to_csv()),
        Experiment::Centroid => emit(cfg, &centroid_table(cfg)?.to_csv()),
        Experiment::TiltSweep => emit(cfg, &tilt_sweep_table(cfg)?.to_csv()),
        Experiment::DensityGrid => {
            let grid = density_grid(cfg)?;
            let path = cfg.out.as_ref().expect("validated: density-grid has an output path");
            write_file(path, grid.to_text().as_bytes())?;
            write_file(&pgm_path(path), &grid.to_pgm())
        }
        Experiment::Verify => {
            let (table, checks) = verify_table(cfg)?;
            emit(cfg, &table.to_csv())?;
            let failed: Vec<&str> = checks.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(AppError::ChecksFailed(failed.join(", ")))
            }
        }
    }
}
