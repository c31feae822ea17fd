//! Independent certificate checking.
//!
//! Everything here works through evaluation matrices: two cells are compared
//! by the evaluation metric over the separating family, never by their
//! coordinates. Nothing from the constructor's bookkeeping is trusted except
//! the declared mesh bound, which is itself checked.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::constructor::{
    build_rp2_certificate, build_wedge_commutator_certificate, diag_split_strip, Certificate,
    HomotopyStrip, LayerRecord,
};
use crate::cxmat::{adjoint, op_norm, ComplexMatrix};
use crate::homspace::{
    eval_metric, grid_modulus, iota, product_closed_family, q2_eval, separating_family, HomParam,
    SpaceMap, TestFunction,
};
use crate::obstruction::{determinant_grid, ring_winding_table, winding_number, RingWindingTable};
use crate::spaces::{
    cis_turns, rp2_generator, Adjacency, Branch, DiskGrid, Path, SampledLoop, SpacePoint,
    SpaceTag, SpherePoint,
};
use crate::{Error, Result, Tolerances};

/// Global ceiling on the declared mesh bound.
pub const MESH_CEILING: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Accept,
    Reject,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Accept => "ACCEPT",
            Verdict::Reject => "REJECT",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub verdict: Verdict,
    pub space: SpaceTag,
    pub rings: usize,
    pub angles: usize,
    pub tol: f64,
    /// `max_k eval_metric(boundary ring at k, ι(f(k)))`.
    pub boundary_error: f64,
    /// Largest neighbour distance over the grid.
    pub continuity_modulus: f64,
    pub worst_adjacency: Option<Adjacency>,
    pub declared_mesh_bound: f64,
    pub mesh_ceiling: f64,
    /// Largest distance of the center and of every ring's `s = 0` cell from `ι(f(0))`.
    pub basepoint_drift: f64,
    /// Distance of `f(0)` from the space's basepoint.
    pub loop_basepoint_drift: f64,
    /// Determinant winding of the boundary ring (T = S¹ only).
    pub boundary_winding: Option<i64>,
    /// Per-ring determinant windings, innermost first (T = S¹ only).
    pub ring_windings: Option<RingWindingTable>,
    pub failures: Vec<String>,
}

impl VerificationReport {
    pub fn accepted(&self) -> bool {
        self.verdict == Verdict::Accept
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verdict: {}", self.verdict)?;
        writeln!(f, "space: {}  rings: {}  angles: {}", self.space, self.rings, self.angles)?;
        writeln!(f, "boundary error: {:.3e} (tol {:.1e})", self.boundary_error, self.tol)?;
        write!(
            f,
            "continuity modulus: {:.6} (declared {:.6}, ceiling {})",
            self.continuity_modulus, self.declared_mesh_bound, self.mesh_ceiling
        )?;
        if let Some(at) = self.worst_adjacency {
            write!(f, " at {at:?}")?;
        }
        writeln!(f)?;
        writeln!(
            f,
            "basepoint drift: {:.3e} (loop start {:.3e})",
            self.basepoint_drift, self.loop_basepoint_drift
        )?;
        if let Some(w) = self.boundary_winding {
            writeln!(f, "boundary determinant winding: {w}")?;
        }
        if let Some(t) = &self.ring_windings {
            writeln!(f, "ring windings: all {} rings at {}", t.windings.len(), t.boundary())?;
        }
        for fail in &self.failures {
            writeln!(f, "FAILED: {fail}")?;
        }
        Ok(())
    }
}

/// Check a certificate against the loop it claims to bound.
///
/// Ragged grids, cells off their spaces and space mismatches are errors, not
/// rejections. If `f` has a different sample count from the grid it is
/// resampled to the grid's angles.
pub fn verify(c: &Certificate, f: &SampledLoop, tol: f64) -> Result<VerificationReport> {
    let grid = &c.grid;
    DiskGrid::new((), grid.rings.iter().map(|r| vec![(); r.len()]).collect())?;
    if f.space() != c.space {
        return Err(Error::SpaceMismatch {
            expected: c.space.to_string(),
            found: f.space().to_string(),
        });
    }
    let point_tol = c.tolerances.point;
    for p in grid.cells() {
        if p.space() != c.space {
            return Err(Error::SpaceMismatch {
                expected: c.space.to_string(),
                found: p.space().to_string(),
            });
        }
        p.validate(point_tol)?;
    }
    f.validate(point_tol)?;
    let f = if f.len() == grid.angles() {
        f.clone()
    } else {
        f.resample(grid.angles())?
    };
    let family = separating_family(c.space);
    let mut failures = Vec::new();

    let mut boundary_error: f64 = 0.0;
    for (p, t) in grid.boundary().iter().zip(f.samples()) {
        boundary_error = worse(boundary_error, eval_metric(p, &iota(*t), &family)?);
    }
    if !(boundary_error <= tol) {
        failures.push(format!(
            "boundary: max eval-metric gap {boundary_error:.3e} to iota of the loop exceeds tol {tol:.1e}"
        ));
    }

    let (modulus, worst_adjacency) = grid_modulus(grid, &family)?;
    if !(c.mesh_bound <= MESH_CEILING) {
        failures.push(format!(
            "mesh: declared bound {:.6} exceeds the ceiling {MESH_CEILING}",
            c.mesh_bound
        ));
    }
    if !(modulus <= c.mesh_bound) {
        failures.push(format!(
            "continuity: neighbour distance {modulus:.6} at {worst_adjacency:?} exceeds declared mesh bound {:.6}",
            c.mesh_bound
        ));
    }

    let start = iota(f.samples()[0]);
    let mut basepoint_drift = eval_metric(&grid.center, &start, &family)?;
    for ring in &grid.rings {
        basepoint_drift = worse(basepoint_drift, eval_metric(&ring[0], &start, &family)?);
    }
    let loop_basepoint_drift = f.basepoint_drift();
    if !(basepoint_drift <= tol) {
        failures.push(format!(
            "basepoint: center or s = 0 column drifts {basepoint_drift:.3e} from iota(f(0))"
        ));
    }
    if !(loop_basepoint_drift <= point_tol.max(tol)) {
        failures.push(format!(
            "basepoint: loop starts {loop_basepoint_drift:.3e} away from the basepoint"
        ));
    }

    let (mut boundary_winding, mut ring_windings) = (None, None);
    if c.space == SpaceTag::S1 {
        let dets = determinant_grid(grid, c.tolerances.unitary)?;
        match winding_number(dets.boundary()) {
            Ok(w) => boundary_winding = Some(w),
            Err(e) => failures.push(format!("winding: boundary determinant: {e}")),
        }
        match ring_winding_table(&dets) {
            Ok(table) => {
                if !table.consistent() {
                    failures.push(format!(
                        "winding: ring windings {:?} are not all 0",
                        table.windings
                    ));
                }
                ring_windings = Some(table);
            }
            Err(e) => {
                let evidence = match boundary_winding {
                    Some(w) if w != 0 => format!("boundary winding {w} ≠ 0; "),
                    _ => String::new(),
                };
                failures.push(format!(
                    "winding: {evidence}no quarter-turn extension over the disk ({e})"
                ));
            }
        }
    }

    Ok(VerificationReport {
        verdict: if failures.is_empty() { Verdict::Accept } else { Verdict::Reject },
        space: c.space,
        rings: grid.num_rings(),
        angles: grid.angles(),
        tol,
        boundary_error,
        continuity_modulus: modulus,
        worst_adjacency,
        declared_mesh_bound: c.mesh_bound,
        mesh_ceiling: MESH_CEILING,
        basepoint_drift,
        loop_basepoint_drift,
        boundary_winding,
        ring_windings,
        failures,
    })
}

fn worse(a: f64, b: f64) -> f64 {
    if b.is_nan() || b > a {
        b
    } else {
        a
    }
}

/// Largest violation of `ρ(ab) = ρ(a)ρ(b)`, `ρ(ā) = ρ(a)*`, `ρ(1) = I₂`.
///
/// Every cell is checked on a fixed set of pairs from the product-closed
/// family; `trials` further (cell, pair) draws come from a seeded RNG.
pub fn check_hom_laws(c: &Certificate, trials: usize) -> Result<f64> {
    let family = product_closed_family(c.space);
    let one = &family[0];
    let gens = &family[1..=2 * separating_family(c.space).len()];
    let cells: Vec<&HomParam> = c.grid.cells().collect();
    let i2 = ComplexMatrix::identity(2)?;
    let mut worst: f64 = 0.0;
    let mut check = |p: &HomParam, a: &TestFunction, b: &TestFunction| -> Result<()> {
        let ra = q2_eval(p, a)?;
        let rb = q2_eval(p, b)?;
        let rab = q2_eval(p, &a.product(b))?;
        worst = worse(worst, op_norm(&(&rab - &(&ra * &rb))));
        worst = worse(worst, op_norm(&(&q2_eval(p, &a.conj())? - &adjoint(&ra))));
        worst = worse(worst, op_norm(&(&q2_eval(p, one)? - &i2)));
        Ok(())
    };
    for p in &cells {
        for a in gens {
            check(p, a, a)?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..trials {
        let p = cells[rng.gen_range(0..cells.len())];
        let a = &family[rng.gen_range(0..family.len())];
        let b = &family[rng.gen_range(0..family.len())];
        check(p, a, b)?;
    }
    Ok(worst)
}

/// One negative or positive control.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdversarialCase {
    pub name: String,
    pub expected: Verdict,
    pub outcome: Verdict,
    pub detail: String,
}

impl AdversarialCase {
    pub fn passed(&self) -> bool {
        self.expected == self.outcome
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdversarialReport {
    pub space: SpaceTag,
    pub cases: Vec<AdversarialCase>,
}

impl AdversarialReport {
    pub fn all_passed(&self) -> bool {
        self.cases.iter().all(AdversarialCase::passed)
    }

    pub fn rejections(&self) -> usize {
        self.cases.iter().filter(|c| c.outcome == Verdict::Reject).count()
    }
}

const SUITE_TOL: f64 = 1e-9;

fn run_case(name: &str, expected: Verdict, c: &Certificate, f: &SampledLoop) -> AdversarialCase {
    let (outcome, detail) = match verify(c, f, SUITE_TOL) {
        Ok(r) if r.accepted() => (Verdict::Accept, "accepted".to_string()),
        Ok(r) => (Verdict::Reject, r.failures.join("; ")),
        Err(e) => (Verdict::Reject, format!("refused: {e}")),
    };
    AdversarialCase {
        name: name.into(),
        expected,
        outcome,
        detail,
    }
}

/// A genuine certificate for `s ↦ exp(0.5i·sin 2πs)` over S¹: ring `r` is
/// `ι ∘ f(r·)`, shrinking the wiggle amplitude to 0.
pub fn wiggle_certificate(n: usize, rings: usize) -> Result<Certificate> {
    let cell = |r: f64, k: usize| {
        let s = k as f64 / n as f64;
        iota(SpacePoint::S1(cis_turns(r * 0.5 * (std::f64::consts::TAU * s).sin() / std::f64::consts::TAU)))
    };
    let grid = DiskGrid::new(
        cell(0.0, 0),
        (1..=rings)
            .map(|i| (0..n).map(|k| cell(i as f64 / rings as f64, k)).collect())
            .collect(),
    )?;
    let boundary = SampledLoop::new(SpaceTag::S1, grid.boundary().iter().map(|p| p.t1).collect())?;
    let (mesh_bound, _) = grid_modulus(&grid, &separating_family(SpaceTag::S1))?;
    Ok(Certificate {
        space: SpaceTag::S1,
        grid,
        boundary_loop: boundary,
        construction_log: vec![LayerRecord {
            name: "radial_shrink".into(),
            rows: rings,
            modulus: mesh_bound,
        }],
        tolerances: Tolerances::default(),
        mesh_bound,
    })
}

/// Claimed certificates for the branch loop `α` of S¹∨S¹, none of which can
/// be valid: `α` pushes forward under the B-collapse to the identity loop of S¹.
pub fn fabricated_alpha_attempts(n: usize, rings: usize) -> Result<Vec<(String, Certificate)>> {
    let alpha = Path::new(SpaceTag::Wedge, |s| {
        SpacePoint::wedge(Branch::A, std::f64::consts::TAU * s)
    });
    let boundary = alpha.sample_loop(n, 1e-9)?;
    let c = SpacePoint::basepoint(SpaceTag::Wedge);
    // Each attempt declares the ceiling, the most generous bound the verifier allows.
    let finish = |name: &str, grid: DiskGrid<HomParam>| -> Result<(String, Certificate)> {
        Ok((
            name.to_string(),
            Certificate {
                space: SpaceTag::Wedge,
                grid,
                boundary_loop: boundary.clone(),
                construction_log: vec![LayerRecord {
                    name: name.into(),
                    rows: rings,
                    modulus: MESH_CEILING,
                }],
                tolerances: Tolerances::default(),
                mesh_bound: MESH_CEILING,
            },
        ))
    };
    let grid_of = |cell: &dyn Fn(f64, f64) -> HomParam| -> Result<DiskGrid<HomParam>> {
        DiskGrid::new(
            iota(c),
            (1..=rings)
                .map(|i| {
                    let r = i as f64 / rings as f64;
                    (0..n).map(|k| cell(r, k as f64 / n as f64)).collect()
                })
                .collect(),
        )
    };

    // Cone: ring r traverses α only up to angle 2πr, tearing at s = 1.
    let cone = grid_of(&|r, s| iota(alpha.eval(r * s)))?;

    // Split ι∘α into its two slots, then cone both slots down.
    let split: HomotopyStrip = diag_split_strip(&alpha, n, rings / 2 + 1, 1e-9)?;
    let mut rows = split.rows.clone();
    let inner = rings - rows.len();
    for i in 1..=inner {
        let r = 1.0 - i as f64 / (inner + 1) as f64;
        rows.push(
            (0..n)
                .map(|k| {
                    let s = k as f64 / n as f64;
                    HomParam::new(
                        SpherePoint::basepoint(),
                        alpha.eval((2.0 * s).min(1.0) * r),
                        alpha.eval((2.0 * s - 1.0).max(0.0) * r),
                    )
                })
                .collect(),
        );
    }
    rows.reverse();
    let split_cone = DiskGrid::new(iota(c), rows)?;

    // Collapse: every inner ring is ι(c); the boundary jumps.
    let collapse = grid_of(&|r, s| if r < 1.0 { iota(c) } else { iota(alpha.eval(s)) })?;

    Ok(vec![
        finish("alpha cone", cone)?,
        finish("alpha split then cone", split_cone)?,
        finish("alpha collapse", collapse)?,
    ])
}

/// The point of `candidates` farthest from `p` under the evaluation metric.
fn farthest(p: &HomParam, candidates: &[SpacePoint], family: &[TestFunction]) -> Result<HomParam> {
    let mut best = (iota(candidates[0]), -1.0);
    for t in candidates {
        let d = eval_metric(p, &iota(*t), family)?;
        if d > best.1 {
            best = (iota(*t), d);
        }
    }
    Ok(best.0)
}

/// Corrupt a valid certificate in several ways and check that each version is
/// rejected; the untouched certificate must be accepted.
///
/// Valid sources: a wiggle nullhomotopy over S¹, the ℝP² generator
/// certificate, and the wedge commutator certificate. Over S¹ and the wedge
/// the three fabricated certificates for the branch loop `α` (pushed forward
/// to the identity loop over S¹) are included.
pub fn adversarial_suite(space: SpaceTag) -> Result<AdversarialReport> {
    let valid = match space {
        SpaceTag::S1 => wiggle_certificate(128, 32)?,
        SpaceTag::Rp2 => build_rp2_certificate(&rp2_generator(1, 256)?, Tolerances::default())?,
        SpaceTag::Wedge => build_wedge_commutator_certificate(1, 1, Tolerances::default())?,
        SpaceTag::S2 => {
            return Err(Error::InvalidArgument(
                "the adversarial suite covers s1, rp2 and wedge".into(),
            ))
        }
    };
    let family = separating_family(space);
    let f = valid.boundary_loop.clone();
    let mut cases = vec![run_case("valid passthrough", Verdict::Accept, &valid, &f)];

    // Torn ring: one cell of a middle ring replaced by ι of a far point.
    let mut torn = valid.clone();
    let ring = torn.grid.num_rings() / 2;
    let k = torn.grid.angles() / 3;
    let candidates: Vec<SpacePoint> = match space {
        SpaceTag::S1 => [1.0, -1.0].iter().map(|&x| SpacePoint::S1(crate::Complex64::new(x, 0.0)))
            .chain([SpacePoint::S1(crate::Complex64::new(0.0, 1.0)), SpacePoint::S1(crate::Complex64::new(0.0, -1.0))])
            .collect(),
        SpaceTag::Rp2 | SpaceTag::S2 => [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
            .iter()
            .map(|&v| SpacePoint::rp2(SpherePoint::from_vec3(v)))
            .collect(),
        SpaceTag::Wedge => vec![
            SpacePoint::wedge(Branch::A, std::f64::consts::PI),
            SpacePoint::wedge(Branch::B, std::f64::consts::PI),
        ],
    };
    torn.grid.rings[ring][k] = farthest(&torn.grid.rings[ring][k], &candidates, &family)?;
    cases.push(run_case("torn ring", Verdict::Reject, &torn, &f));

    // Boundary loop rotated by one sample.
    let shifted = f.rotated(1);
    let mut moved = valid.clone();
    moved.boundary_loop = shifted.clone();
    cases.push(run_case("boundary shifted by one sample", Verdict::Reject, &moved, &shifted));

    // A cell pushed off the sphere.
    let mut off = valid.clone();
    let cell = &mut off.grid.rings[ring][k];
    cell.x = SpherePoint::new(cell.x.alpha * (1.0 + 1e-3), cell.x.t * (1.0 + 1e-3));
    cases.push(run_case("off-sphere cell", Verdict::Reject, &off, &f));

    if space == SpaceTag::S1 {
        // Winding insert: the boundary ring and loop gain a full turn.
        let mut wound = valid.clone();
        let n = wound.grid.angles();
        let twist = |k: usize, t: &SpacePoint| match t {
            SpacePoint::S1(z) => SpacePoint::S1(z * cis_turns(k as f64 / n as f64)),
            other => *other,
        };
        let last = wound.grid.rings.len() - 1;
        for (k, p) in wound.grid.rings[last].iter_mut().enumerate() {
            *p = HomParam::new(p.x, twist(k, &p.t1), twist(k, &p.t2));
        }
        let samples = f.samples().iter().enumerate().map(|(k, t)| twist(k, t)).collect();
        let wound_loop = SampledLoop::new(SpaceTag::S1, samples)?;
        wound.boundary_loop = wound_loop.clone();
        cases.push(run_case("winding insert", Verdict::Reject, &wound, &wound_loop));
    }

    if matches!(space, SpaceTag::S1 | SpaceTag::Wedge) {
        for (name, attempt) in fabricated_alpha_attempts(128, 32)? {
            let (name, attempt) = if space == SpaceTag::S1 {
                (
                    format!("{name} (collapsed to the identity loop)"),
                    attempt.pushforward(SpaceMap::CollapseB)?,
                )
            } else {
                (name, attempt)
            };
            let lp = attempt.boundary_loop.clone();
            cases.push(run_case(&name, Verdict::Reject, &attempt, &lp));
        }
    }

    Ok(AdversarialReport { space, cases })
}
