//! Determinant-winding obstruction for loops of unitaries.
//!
//! For `T = S¹`, evaluation at `z` turns every homomorphism into a unitary, and
//! `det` turns a loop of those into a loop in `S¹` with an integer degree. A
//! disk grid whose neighbouring determinants differ by less than a quarter turn
//! has the same degree on every ring, and degree 0 on the innermost ring
//! because the center is a single point. The canonical loop `s ↦ s·I_n` has
//! degree `n`, so no such grid can extend it.

use std::f64::consts::{FRAC_PI_2, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cxmat::{det, op_norm, ComplexMatrix};
use crate::homspace::{eval_z, HomParam};
use crate::spaces::{cis_turns, DiskGrid, SpaceTag};
use crate::{Error, Result};

/// Largest principal phase increment accepted between neighbouring samples.
pub const MAX_PHASE_STEP: f64 = FRAC_PI_2;

/// Largest accepted rounding residue of a winding number.
pub const MAX_RESIDUE: f64 = 0.01;

/// A closed loop of `n × n` unitaries, sampled at `N` points (the last sample
/// is joined back to the first).
#[derive(Debug, Clone)]
pub struct UnitaryLoop {
    n: usize,
    samples: Vec<ComplexMatrix>,
    mesh_bound: f64,
    tol_unitary: f64,
}

impl UnitaryLoop {
    pub fn new(samples: Vec<ComplexMatrix>, tol_unitary: f64) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "a unitary loop needs at least 2 samples, got {}",
                samples.len()
            )));
        }
        let n = samples[0].dim();
        for u in &samples {
            if u.dim() != n {
                return Err(Error::DimensionMismatch { left: n, right: u.dim() });
            }
            let deviation = u.unitarity_defect();
            if !(deviation <= tol_unitary) {
                return Err(Error::NotUnitary { deviation });
            }
        }
        let len = samples.len();
        let mesh_bound = (0..len)
            .map(|k| op_norm(&(&samples[(k + 1) % len] - &samples[k])))
            .fold(0.0, f64::max);
        if !(mesh_bound < SQRT_2) {
            return Err(Error::MeshTooCoarse(format!(
                "adjacent unitaries differ by {mesh_bound:.4} in operator norm (limit sqrt 2)"
            )));
        }
        Ok(UnitaryLoop {
            n,
            samples,
            mesh_bound,
            tol_unitary,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn samples(&self) -> &[ComplexMatrix] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn mesh_bound(&self) -> f64 {
        self.mesh_bound
    }
}

/// Pointwise determinants of a unitary loop.
pub fn det_loop(u: &UnitaryLoop) -> Result<Vec<Complex64>> {
    // Rounding in the determinant itself grows with n; never go below 1e-12.
    let tol = (u.n as f64 * u.tol_unitary).max(1e-12);
    u.samples
        .iter()
        .map(|m| {
            let d = det(m);
            let deviation = (d.norm() - 1.0).abs();
            if deviation > tol {
                Err(Error::NotUnitary { deviation })
            } else {
                Ok(d)
            }
        })
        .collect()
}

/// Outcome of phase unwrapping around a closed loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindingReport {
    pub winding: i64,
    /// Sum of principal increments divided by 2π, before rounding.
    pub raw: f64,
    pub residue: f64,
    pub max_step: f64,
}

/// Principal phase increments `arg(v[k+1]/v[k])`, including the closing one.
pub fn phase_steps(values: &[Complex64]) -> Result<Vec<f64>> {
    if values.len() < 2 {
        return Err(Error::InvalidArgument("winding needs at least 2 samples".into()));
    }
    if let Some(k) = values.iter().position(|v| !(v.norm() > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "sample {k} has no phase ({})",
            values[k]
        )));
    }
    let len = values.len();
    Ok((0..len)
        .map(|k| (values[(k + 1) % len] * values[k].conj()).arg())
        .collect())
}

/// Winding number with the unwrapping diagnostics.
pub fn winding_report(values: &[Complex64]) -> Result<WindingReport> {
    let steps = phase_steps(values)?;
    let mut max_step: f64 = 0.0;
    for (index, &step) in steps.iter().enumerate() {
        if step.abs() > MAX_PHASE_STEP {
            return Err(Error::PhaseStepTooLarge { index, step: step.abs() });
        }
        max_step = max_step.max(step.abs());
    }
    let raw = steps.iter().sum::<f64>() / std::f64::consts::TAU;
    let winding = raw.round();
    let residue = (raw - winding).abs();
    if residue >= MAX_RESIDUE {
        return Err(Error::WindingResidue { residue });
    }
    Ok(WindingReport {
        winding: winding as i64,
        raw,
        residue,
        max_step,
    })
}

/// Degree of a sampled loop in `ℂ \ {0}`.
pub fn winding_number(values: &[Complex64]) -> Result<i64> {
    winding_report(values).map(|r| r.winding)
}

/// `s ↦ s·I_n` sampled at `s = e^{2πik/N}`; for `n = 2` this is `eval_z ∘ ι`
/// applied to the identity loop of S¹.
pub fn canonical_loop(n: usize, samples: usize) -> Result<UnitaryLoop> {
    if !(1..=8).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    let mats = (0..samples)
        .map(|k| ComplexMatrix::scalar(n, cis_turns(k as f64 / samples as f64)))
        .collect::<Result<Vec<_>>>()?;
    UnitaryLoop::new(mats, 1e-12)
}

/// Winding of `det(s·I_n)`; equals `n`.
pub fn canonical_obstruction(n: usize, samples: usize) -> Result<i64> {
    if samples < 64 {
        return Err(Error::MeshTooCoarse(format!(
            "canonical obstruction needs at least 64 samples, got {samples}"
        )));
    }
    winding_number(&det_loop(&canonical_loop(n, samples)?)?)
}

/// Determinants of `eval_z` over a grid of homomorphism parameters for `T = S¹`.
pub fn determinant_grid(grid: &DiskGrid<HomParam>, tol_unitary: f64) -> Result<DiskGrid<Complex64>> {
    if let Some(p) = std::iter::once(&grid.center)
        .chain(grid.rings.iter().flatten())
        .find(|p| p.space() != SpaceTag::S1)
    {
        return Err(Error::SpaceMismatch {
            expected: SpaceTag::S1.to_string(),
            found: p.space().to_string(),
        });
    }
    grid.try_map(|p| Ok(det(&eval_z(p, tol_unitary)?)))
}

/// Winding of `det ∘ eval_z` along the boundary ring.
pub fn boundary_winding_of_certificate(grid: &DiskGrid<HomParam>, tol_unitary: f64) -> Result<i64> {
    let dets = determinant_grid(grid, tol_unitary)?;
    winding_number(dets.boundary())
}

/// Per-ring windings of a determinant grid, innermost ring first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RingWindingTable {
    pub windings: Vec<i64>,
    pub max_angular_step: f64,
    pub max_radial_step: f64,
}

impl RingWindingTable {
    /// All rings carry the same winding, and it is 0 (the center is a point).
    pub fn consistent(&self) -> bool {
        self.windings.iter().all(|&w| w == 0)
    }

    pub fn boundary(&self) -> i64 {
        *self.windings.last().expect("grid has rings")
    }
}

/// Ring windings with every angular and radial phase step checked against the
/// quarter-turn bound.
///
/// When all steps pass, each grid cell has zero phase circulation, so the
/// windings are forced to agree from ring to ring and to vanish.
pub fn ring_winding_table(dets: &DiskGrid<Complex64>) -> Result<RingWindingTable> {
    let mut windings = Vec::with_capacity(dets.num_rings());
    let mut max_angular_step: f64 = 0.0;
    for ring in &dets.rings {
        let rep = winding_report(ring)?;
        max_angular_step = max_angular_step.max(rep.max_step);
        windings.push(rep.winding);
    }
    let mut max_radial_step: f64 = 0.0;
    let mut inner: Vec<Complex64> = vec![dets.center; dets.angles()];
    for (ring_index, ring) in dets.rings.iter().enumerate() {
        for (k, (a, b)) in inner.iter().zip(ring).enumerate() {
            let step = (b * a.conj()).arg().abs();
            if step > MAX_PHASE_STEP {
                return Err(Error::PhaseStepTooLarge {
                    index: ring_index * dets.angles() + k,
                    step,
                });
            }
            max_radial_step = max_radial_step.max(step);
        }
        inner = ring.clone();
    }
    Ok(RingWindingTable {
        windings,
        max_angular_step,
        max_radial_step,
    })
}
