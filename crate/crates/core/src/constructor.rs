//! Explicit disk certificates.
//!
//! A certificate is a polar grid of homomorphism parameters whose boundary ring
//! is `ι ∘ f` and whose center is `ι(t₀)`. It is assembled from homotopy
//! strips, each a stack of sampled loops in the parameter space, glued
//! radially from the boundary inward.

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};

use crate::cxmat::ComplexMatrix;
use crate::homspace::{
    eval_metric, grid_modulus, iota, pushforward, separating_family, EvalSignature, HomParam,
    SpaceMap, TestFunction,
};
use crate::spaces::{
    contract_sphere_loop, locate_segment, metric, rp2_lift, sigma, Branch, DiskGrid, Path,
    SampledLoop, SpacePoint, SpaceTag, SpherePoint,
};
use crate::verifier::{self, MESH_CEILING};
use crate::{Complex64, Error, Result, Tolerances};

/// Neighbour distance the builders aim for; the verifier's ceiling is 0.2.
pub const MESH_TARGET: f64 = 0.15;

/// Largest angular step a layer may have before more boundary samples are needed.
const ANGULAR_LIMIT: f64 = 0.19;

const MIN_STRIP_ROWS: usize = 3;
const MAX_STRIP_ROWS: usize = 4097;

/// Largest `|turns|` accepted by the commutator builder.
pub const MAX_TURNS: i64 = 4;

/// A homotopy of based loops in the parameter space: `rows[j][k]` is the value
/// at `u = j/(M−1)`, `s = k/N`. Row 0 is the outer edge.
#[derive(Debug, Clone, PartialEq)]
pub struct HomotopyStrip {
    pub name: String,
    pub rows: Vec<Vec<HomParam>>,
}

impl HomotopyStrip {
    pub fn new(name: impl Into<String>, rows: Vec<Vec<HomParam>>) -> Result<Self> {
        let name = name.into();
        if rows.len() < 2 {
            return Err(Error::MalformedGrid(format!(
                "strip '{name}' needs at least 2 rows, got {}",
                rows.len()
            )));
        }
        let n = rows[0].len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::MalformedGrid(format!("strip '{name}' has ragged rows")));
        }
        Ok(HomotopyStrip { name, rows })
    }

    /// Sample `f(u, s)` on `rows × cols` points.
    pub fn sample(
        name: impl Into<String>,
        rows: usize,
        cols: usize,
        f: impl Fn(f64, f64) -> HomParam,
    ) -> Result<Self> {
        if rows < 2 || cols == 0 {
            return Err(Error::InvalidArgument(format!(
                "strip needs at least 2 rows and 1 column, got {rows} × {cols}"
            )));
        }
        let data = (0..rows)
            .map(|j| {
                let u = j as f64 / (rows - 1) as f64;
                (0..cols).map(|k| f(u, k as f64 / cols as f64)).collect()
            })
            .collect();
        HomotopyStrip::new(name, data)
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.rows[0].len()
    }

    pub fn first_row(&self) -> &[HomParam] {
        &self.rows[0]
    }

    pub fn last_row(&self) -> &[HomParam] {
        self.rows.last().expect("at least two rows")
    }

    pub fn space(&self) -> SpaceTag {
        self.rows[0][0].space()
    }

    /// The same homotopy run backwards.
    pub fn reversed(&self) -> HomotopyStrip {
        let mut rows = self.rows.clone();
        rows.reverse();
        HomotopyStrip {
            name: self.name.clone(),
            rows,
        }
    }

    /// Largest neighbour distances: `(along rows, between rows)`.
    pub fn moduli(&self, family: &[TestFunction]) -> Result<(f64, f64)> {
        let sigs = self
            .rows
            .iter()
            .map(|r| r.iter().map(|p| EvalSignature::new(p, family)).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        let n = self.cols();
        let mut angular: f64 = 0.0;
        let mut radial: f64 = 0.0;
        for (j, row) in sigs.iter().enumerate() {
            for k in 0..n {
                angular = nan_max(angular, row[k].distance(&row[(k + 1) % n]));
                if j > 0 {
                    radial = nan_max(radial, row[k].distance(&sigs[j - 1][k]));
                }
            }
        }
        Ok((angular, radial))
    }

    /// Largest distance of the `s = 0` column from `ι(t₀)`.
    pub fn basepoint_column_error(&self, t0: &SpacePoint, family: &[TestFunction]) -> Result<f64> {
        let base = iota(*t0);
        self.rows
            .iter()
            .map(|r| eval_metric(&r[0], &base, family))
            .try_fold(0.0, |acc, d| d.map(|d| nan_max(acc, d)))
    }
}

fn nan_max(a: f64, b: f64) -> f64 {
    if b.is_nan() || b > a {
        b
    } else {
        a
    }
}

/// Check that a path is a loop at the space's basepoint and return its start.
fn based_start(phi: &Path, tol: f64) -> Result<SpacePoint> {
    let t0 = phi.start();
    let drift = metric(&t0, &SpacePoint::basepoint(phi.space()))?
        .max(metric(&phi.end(), &t0)?);
    if drift > tol {
        return Err(Error::Unbased { drift });
    }
    Ok(t0)
}

fn x0() -> SpherePoint {
    SpherePoint::basepoint()
}

fn diag_split_cell(phi: &Path, u: f64, s: f64) -> HomParam {
    let a = (1.0 + u) * s;
    HomParam::new(x0(), phi.eval(a.min(1.0)), phi.eval((a - u).max(0.0)))
}

/// `(p₁, p₂)` on the interchange strip between `(φ₁, c)·(c, φ₂)` at `u = 0`
/// and `(c, φ₂)·(φ₁, c)` at `u = 1`, through `(φ₁(s), φ₂(s))` at `u = ½`.
fn interchange_slots(phi1: &Path, phi2: &Path, u: f64, s: f64) -> (SpacePoint, SpacePoint) {
    if u <= 0.5 {
        let v = 1.0 - 2.0 * u;
        let a = (1.0 + v) * s;
        (phi1.eval(a.min(1.0)), phi2.eval((a - v).max(0.0)))
    } else {
        let v = 2.0 * u - 1.0;
        let a = (1.0 + v) * s;
        (phi1.eval((a - v).max(0.0)), phi2.eval(a.min(1.0)))
    }
}

/// `K(s, u) = (σ(1 − u), t₀, φ(s))`.
///
/// Row `u = 0` is `((−1, 0), t₀, φ(s))`, the same homomorphisms as
/// `((1, 0), φ(s), t₀)`; row `u = 1` is `((1, 0), t₀, φ(s))`. The `s = 0`
/// column is diagonal, hence `ι(t₀)`, for every `u`.
pub fn sigma_swap_strip(phi: &Path, cols: usize, rows: usize, tol: f64) -> Result<HomotopyStrip> {
    let t0 = based_start(phi, tol)?;
    HomotopyStrip::sample("sigma_swap", rows, cols, |u, s| {
        HomParam::new(sigma(1.0 - u), t0, phi.eval(s))
    })
}

/// From `ι ∘ φ` at `u = 0` to `((1,0), φ(2s ∧ 1), φ((2s − 1) ∨ 0))` at `u = 1`,
/// the concatenation of the one-slot loops `((1,0), φ, t₀)` and `((1,0), t₀, φ)`.
pub fn diag_split_strip(phi: &Path, cols: usize, rows: usize, tol: f64) -> Result<HomotopyStrip> {
    based_start(phi, tol)?;
    HomotopyStrip::sample("diag_split", rows, cols, |u, s| diag_split_cell(phi, u, s))
}

/// From `((1,0), φ₁, t₀)·((1,0), t₀, φ₂)` at `u = 0` to
/// `((1,0), t₀, φ₂)·((1,0), φ₁, t₀)` at `u = 1`; the middle row (odd `rows`)
/// is `((1,0), φ₁(s), φ₂(s))`.
pub fn interchange_strip(
    phi1: &Path,
    phi2: &Path,
    cols: usize,
    rows: usize,
    tol: f64,
) -> Result<HomotopyStrip> {
    based_start(phi1, tol)?;
    based_start(phi2, tol)?;
    if phi1.space() != phi2.space() {
        return Err(Error::SpaceMismatch {
            expected: phi1.space().to_string(),
            found: phi2.space().to_string(),
        });
    }
    HomotopyStrip::sample("interchange", rows, cols, |u, s| {
        let (p1, p2) = interchange_slots(phi1, phi2, u, s);
        HomParam::new(x0(), p1, p2)
    })
}

/// Sample `f` with just enough rows that neighbouring rows are within
/// [`MESH_TARGET`].
fn adaptive_strip(
    name: &str,
    cols: usize,
    family: &[TestFunction],
    f: impl Fn(f64, f64) -> HomParam,
) -> Result<HomotopyStrip> {
    let mut rows = MIN_STRIP_ROWS;
    loop {
        let strip = HomotopyStrip::sample(name, rows, cols, &f)?;
        let (angular, radial) = strip.moduli(family)?;
        if !(angular <= ANGULAR_LIMIT) {
            return Err(Error::MeshTooCoarse(format!(
                "layer '{name}': angular step {angular:.4} exceeds {ANGULAR_LIMIT}; sample the loop more finely"
            )));
        }
        if radial <= MESH_TARGET {
            return Ok(strip);
        }
        if rows >= MAX_STRIP_ROWS {
            return Err(Error::MeshTooCoarse(format!(
                "layer '{name}': radial step {radial:.4} with {rows} rows"
            )));
        }
        rows = next_row_count(rows, radial);
    }
}

fn next_row_count(rows: usize, radial: f64) -> usize {
    let predicted = ((rows - 1) as f64 * radial / MESH_TARGET * 1.05).ceil();
    let predicted = if predicted.is_finite() { predicted as usize + 1 } else { MAX_STRIP_ROWS };
    predicted.clamp(rows + 1, MAX_STRIP_ROWS)
}

/// Glue strips radially into a disk grid.
///
/// Each strip's first row must match the previous strip's last row within
/// `tol` in the evaluation metric; the shared row is kept once. The outer row
/// of the first strip becomes the boundary ring and the last row must lie
/// within the mesh ceiling of `center`. Strips with more columns than the
/// coarsest one are decimated, which requires the column counts to be
/// multiples of it.
pub fn stack_strips(strips: &[HomotopyStrip], center: HomParam, tol: f64) -> Result<DiskGrid<HomParam>> {
    let first = strips
        .first()
        .ok_or_else(|| Error::InvalidArgument("no strips to stack".into()))?;
    let space = center.space();
    let family = separating_family(space);
    let cols = strips.iter().map(HomotopyStrip::cols).min().expect("non-empty");
    for s in strips {
        if s.space() != space {
            return Err(Error::SpaceMismatch {
                expected: space.to_string(),
                found: s.space().to_string(),
            });
        }
        if s.num_rows() < MIN_STRIP_ROWS {
            return Err(Error::MalformedGrid(format!(
                "strip '{}' has {} rows; at least {MIN_STRIP_ROWS} are required",
                s.name,
                s.num_rows()
            )));
        }
        if s.cols() % cols != 0 {
            return Err(Error::MalformedGrid(format!(
                "strip '{}' has {} columns, not a multiple of {cols}",
                s.name,
                s.cols()
            )));
        }
    }
    let decimate = |row: &[HomParam]| -> Vec<HomParam> {
        let step = row.len() / cols;
        row.iter().step_by(step).copied().collect()
    };

    let mut rows: Vec<Vec<HomParam>> = first.rows.iter().map(|r| decimate(r)).collect();
    for pair in strips.windows(2) {
        let (upper, lower) = (&pair[0], &pair[1]);
        let above = rows.last().expect("rows");
        let below = decimate(lower.first_row());
        let mut gap: f64 = 0.0;
        for (p, q) in above.iter().zip(&below) {
            gap = nan_max(gap, eval_metric(p, q, &family)?);
        }
        if !(gap <= tol) {
            return Err(Error::EdgeMismatch {
                upper: upper.name.clone(),
                lower: lower.name.clone(),
                gap,
            });
        }
        rows.extend(lower.rows[1..].iter().map(|r| decimate(r)));
    }
    let last = rows.last().expect("rows");
    let mut gap: f64 = 0.0;
    for p in last {
        gap = nan_max(gap, eval_metric(p, &center, &family)?);
    }
    if !(gap <= MESH_CEILING) {
        return Err(Error::EdgeMismatch {
            upper: strips.last().expect("non-empty").name.clone(),
            lower: "center".into(),
            gap,
        });
    }
    rows.reverse();
    DiskGrid::new(center, rows)
}

/// One radial layer of a certificate as recorded in its log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerRecord {
    pub name: String,
    pub rows: usize,
    pub modulus: f64,
}

/// A claimed quantum nullhomotopy of `boundary_loop`.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub space: SpaceTag,
    pub grid: DiskGrid<HomParam>,
    pub boundary_loop: SampledLoop,
    pub construction_log: Vec<LayerRecord>,
    pub tolerances: Tolerances,
    /// Declared bound on the evaluation-metric distance between neighbouring cells.
    pub mesh_bound: f64,
}

impl Certificate {
    /// Assemble from strips; the declared mesh bound is the measured modulus.
    pub fn from_strips(
        strips: &[HomotopyStrip],
        center: HomParam,
        boundary_loop: SampledLoop,
        tolerances: Tolerances,
    ) -> Result<Certificate> {
        let space = boundary_loop.space();
        let family = separating_family(space);
        let grid = stack_strips(strips, center, tolerances.verify)?;
        let mut log = Vec::with_capacity(strips.len());
        for s in strips {
            let (a, r) = s.moduli(&family)?;
            log.push(LayerRecord {
                name: s.name.clone(),
                rows: s.num_rows(),
                modulus: a.max(r),
            });
        }
        let (mesh_bound, _) = grid_modulus(&grid, &family)?;
        Ok(Certificate {
            space,
            grid,
            boundary_loop,
            construction_log: log,
            tolerances,
            mesh_bound,
        })
    }

    /// Image under a map of spaces: every cell and boundary sample pushed
    /// forward, mesh bound re-measured.
    pub fn pushforward(&self, g: SpaceMap) -> Result<Certificate> {
        if g.source() != self.space {
            return Err(Error::UnsupportedMap {
                map: g.name().into(),
                space: self.space.to_string(),
            });
        }
        let grid = self.grid.try_map(|p| pushforward(p, g))?;
        let samples = self
            .boundary_loop
            .samples()
            .iter()
            .map(|p| g.apply(p))
            .collect::<Result<Vec<_>>>()?;
        let boundary_loop = SampledLoop::new(g.target(), samples)?;
        let (mesh_bound, _) = grid_modulus(&grid, &separating_family(g.target()))?;
        let mut log = self.construction_log.clone();
        log.push(LayerRecord {
            name: format!("pushforward {}", g.name()),
            rows: grid.num_rings(),
            modulus: mesh_bound,
        });
        Ok(Certificate {
            space: g.target(),
            grid,
            boundary_loop,
            construction_log: log,
            tolerances: self.tolerances,
            mesh_bound,
        })
    }

    /// Run the independent verifier and refuse to hand out a rejected certificate.
    fn checked(self) -> Result<Certificate> {
        let report = verifier::verify(&self, &self.boundary_loop, self.tolerances.verify)?;
        if report.accepted() {
            Ok(self)
        } else {
            Err(Error::ConstructionRejected(report.failures.join("; ")))
        }
    }
}

/// The loop `s ↦ φ(2s mod 1)`: `φ` traversed twice.
fn doubled(phi: &Path) -> Path {
    let phi = phi.clone();
    Path::new(phi.space(), move |s| {
        phi.eval(if s < 0.5 { 2.0 * s } else { 2.0 * s - 1.0 })
    })
}

/// A certificate for any based loop in ℝP².
///
/// Layers, from the boundary inward: split `ι ∘ φ` into slot-1 then slot-2
/// copies of `φ`; σ-swap the second copy into slot 1, giving the loop
/// `((1,0), φ·φ, t₀)`; lift `φ·φ` to a closed loop on S², contract it there
/// and project back down. The center is `ι(t₀)`.
pub fn build_rp2_certificate(phi: &SampledLoop, tolerances: Tolerances) -> Result<Certificate> {
    if phi.space() != SpaceTag::Rp2 {
        return Err(Error::SpaceMismatch {
            expected: SpaceTag::Rp2.to_string(),
            found: phi.space().to_string(),
        });
    }
    phi.validate(tolerances.point)?;
    let drift = phi.basepoint_drift();
    if drift > tolerances.point {
        return Err(Error::Unbased { drift });
    }
    let family = separating_family(SpaceTag::Rp2);
    let cols = phi.len();
    let t0 = phi.samples()[0];
    let path = phi.to_path();

    let split = adaptive_strip("diag_split", cols, &family, |u, s| diag_split_cell(&path, u, s))?;
    let swap = adaptive_strip("sigma_swap", cols, &family, |u, s| {
        if s < 0.5 {
            HomParam::new(x0(), path.eval(2.0 * s), t0)
        } else {
            HomParam::new(sigma(u), t0, path.eval(2.0 * s - 1.0))
        }
    })?;

    // The swap layer ends on ((1,0), ψ, t₀) with ψ = φ·φ.
    let psi: Vec<SpacePoint> = swap
        .last_row()
        .iter()
        .map(|p| if p.x == x0() { p.t1 } else { p.swapped().t1 })
        .collect();
    let psi = SampledLoop::new(SpaceTag::Rp2, psi)?;
    let start = t0.sphere().expect("rp2 point");
    let lift = rp2_lift(&psi, &start, tolerances.point)?;
    let gap = metric(lift.end(), lift.start())?;
    if gap > tolerances.point {
        return Err(Error::LiftNotClosed { gap });
    }
    let lifted = SampledLoop::new(SpaceTag::S2, lift.samples[..cols].to_vec())?;
    let contract = contraction_strip(&lifted, &start, t0, &family, tolerances)?;

    let cert = Certificate::from_strips(&[split, swap, contract], iota(t0), phi.clone(), tolerances)?;
    cert.checked()
}

/// Rows `((1,0), π(G), t₀)` for the rings `G` of a sphere contraction, outermost first.
fn contraction_strip(
    lifted: &SampledLoop,
    start: &SpherePoint,
    t0: SpacePoint,
    family: &[TestFunction],
    tolerances: Tolerances,
) -> Result<HomotopyStrip> {
    let mut rings = MIN_STRIP_ROWS;
    loop {
        let disk = contract_sphere_loop(lifted, start, rings, tolerances.point)
            .map_err(|e| match e {
                Error::ContractionFailed(msg) => Error::ContractionFailed(format!("layer 'contract': {msg}")),
                other => other,
            })?;
        let mut rows: Vec<Vec<HomParam>> = disk
            .rings
            .iter()
            .rev()
            .map(|ring| {
                ring.iter()
                    .map(|g| {
                        let x = g.sphere().expect("sphere point");
                        HomParam::new(x0(), SpacePoint::rp2(x), t0)
                    })
                    .collect()
            })
            .collect();
        rows.push(vec![iota(t0); lifted.len()]);
        let strip = HomotopyStrip::new("contract", rows)?;
        let (angular, radial) = strip.moduli(family)?;
        if !(angular <= ANGULAR_LIMIT) {
            return Err(Error::MeshTooCoarse(format!(
                "layer 'contract': angular step {angular:.4} exceeds {ANGULAR_LIMIT}"
            )));
        }
        if radial <= MESH_TARGET {
            return Ok(strip);
        }
        if rings + 1 >= MAX_STRIP_ROWS {
            return Err(Error::ContractionFailed(format!(
                "layer 'contract': radial step {radial:.4} with {rings} rings"
            )));
        }
        rings = next_row_count(rings + 1, radial) - 1;
    }
}

fn branch_loop(branch: Branch, turns: i64) -> Path {
    Path::new(SpaceTag::Wedge, move |s| {
        SpacePoint::wedge(branch, TAU * turns as f64 * s)
    })
}

/// `αβα⁻¹β⁻¹` for branch loops turning `a_turns` and `b_turns` times, each
/// leg over a quarter of the circle.
pub fn commutator_path(a_turns: i64, b_turns: i64) -> Path {
    let (a, b) = (branch_loop(Branch::A, a_turns), branch_loop(Branch::B, b_turns));
    Path::juxtapose(&[a.clone(), b.clone(), a.reverse(), b.reverse()])
}

/// Boundary samples per unit turn count for the commutator certificate.
const WEDGE_SAMPLES_PER_TURN: usize = 512;

/// A certificate for the commutator of the two branch loops of S¹∨S¹.
///
/// Layers, from the boundary inward:
/// 1. split each of the four legs into a slot-1 copy followed by a slot-2 copy;
/// 2. σ-swap so that all α-material sits in slot 1 and all β-material in
///    slot 2, giving `(α²,c)(c,β²)(ᾱ²,c)(c,β̄²)` by quarters;
/// 3. interchange the middle two blocks, giving `(α²,c)(ᾱ²,c)(c,β²)(c,β̄²)`;
/// 4. retract each `ψψ̄` pair along itself to the constant loop.
///
/// The center is `ι` of the wedge point.
pub fn build_wedge_commutator_certificate(
    a_turns: i64,
    b_turns: i64,
    tolerances: Tolerances,
) -> Result<Certificate> {
    if a_turns.abs() > MAX_TURNS || b_turns.abs() > MAX_TURNS {
        return Err(Error::InvalidArgument(format!(
            "turn counts must lie in [-{MAX_TURNS}, {MAX_TURNS}], got {a_turns} and {b_turns}"
        )));
    }
    let family = separating_family(SpaceTag::Wedge);
    let cols = WEDGE_SAMPLES_PER_TURN * a_turns.abs().max(b_turns.abs()).max(1) as usize;
    let c = SpacePoint::basepoint(SpaceTag::Wedge);
    let (alpha, beta) = (branch_loop(Branch::A, a_turns), branch_loop(Branch::B, b_turns));
    let legs = [alpha.clone(), beta.clone(), alpha.reverse(), beta.reverse()];
    let gamma = Path::juxtapose(&legs);
    let boundary = gamma.sample_loop(cols, tolerances.point)?;

    let split = adaptive_strip("diag_split", cols, &family, |u, s| {
        let (q, tau) = locate_segment(s, 4);
        diag_split_cell(&legs[q], u, tau)
    })?;

    let swap = adaptive_strip("sigma_swap", cols, &family, |u, s| {
        let (q, tau) = locate_segment(s, 4);
        let (e, v) = if tau < 0.5 {
            (2 * q, legs[q].eval(2.0 * tau))
        } else {
            (2 * q + 1, legs[q].eval(2.0 * tau - 1.0))
        };
        match e {
            0 | 4 => HomParam::new(x0(), v, c),
            3 | 7 => HomParam::new(x0(), c, v),
            1 | 5 => HomParam::new(sigma(u), c, v),
            _ => HomParam::new(sigma(1.0 - u), c, v),
        }
    })?;

    let (alpha2, beta2) = (doubled(&alpha), doubled(&beta));
    let (alpha_bar2, beta_bar2) = (doubled(&alpha.reverse()), doubled(&beta.reverse()));
    let interchange = adaptive_strip("interchange", cols, &family, |u, s| {
        if s < 0.25 {
            HomParam::new(x0(), alpha2.eval(4.0 * s), c)
        } else if s < 0.75 {
            let (p1, p2) = interchange_slots(&alpha_bar2, &beta2, 1.0 - u, 2.0 * s - 0.5);
            HomParam::new(x0(), p1, p2)
        } else {
            HomParam::new(x0(), c, beta_bar2.eval(4.0 * s - 3.0))
        }
    })?;

    let cancel = adaptive_strip("cancel", cols, &family, |u, s| {
        let tau = if s < 0.5 { 2.0 * s } else { 2.0 * s - 1.0 };
        let r = (2.0 * tau).min(2.0 - 2.0 * tau) * (1.0 - u);
        if s < 0.5 {
            HomParam::new(x0(), alpha2.eval(r), c)
        } else {
            HomParam::new(x0(), c, beta2.eval(r))
        }
    })?;

    let cert = Certificate::from_strips(
        &[split, swap, interchange, cancel],
        iota(c),
        boundary,
        tolerances,
    )?;
    cert.checked()
}

/// An explicit disk in U(2) bounding `s ↦ diag(s, s̄)`:
/// `W(s, r) = R(u)·D·R(u)⁻¹·D⁻¹·diag(s, s̄)` with `D = diag(s, 1)`,
/// `u = 1 − r` and `R(u)` the real rotation by `uπ/2`.
/// Ring `r = 1` is `diag(s, s̄)` and the center is `I₂`.
pub fn pairing_nullhomotopy_demo(n: usize) -> Result<DiskGrid<ComplexMatrix>> {
    if n < 64 {
        return Err(Error::InvalidArgument(format!(
            "pairing demo needs at least 64 samples per ring, got {n}"
        )));
    }
    let rings = (n / 4).max(16);
    let real = |x: f64| Complex64::new(x, 0.0);
    let cell = |r: f64, k: usize| -> ComplexMatrix {
        let s = crate::spaces::cis_turns(k as f64 / n as f64);
        let (sn, cs) = ((1.0 - r) * FRAC_PI_2).sin_cos();
        let rot = ComplexMatrix::from_2x2(real(cs), real(-sn), real(sn), real(cs));
        let rot_inv = ComplexMatrix::from_2x2(real(cs), real(sn), real(-sn), real(cs));
        let d = ComplexMatrix::diag(&[s, real(1.0)]).expect("2x2");
        let d_inv = ComplexMatrix::diag(&[s.conj(), real(1.0)]).expect("2x2");
        let tail = ComplexMatrix::diag(&[s, s.conj()]).expect("2x2");
        &(&(&(&rot * &d) * &rot_inv) * &d_inv) * &tail
    };
    let grid_rings = (1..=rings)
        .map(|i| {
            let r = i as f64 / rings as f64;
            (0..n).map(|k| cell(r, k)).collect()
        })
        .collect();
    DiskGrid::new(ComplexMatrix::identity(2)?, grid_rings)
}
