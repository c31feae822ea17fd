//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.
//!
//! The 2×2 matrix algebra used as an oracle here (the reflection `h`, the
//! two-slot evaluation, products and determinants) is written out by hand and
//! shares no code with the library.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use qnull::constructor::{
    build_rp2_certificate, build_wedge_commutator_certificate, pairing_nullhomotopy_demo, sigma_swap_strip,
    Certificate,
};
use qnull::cxmat::{h_matrix, ComplexMatrix};
use qnull::freegroup::{wedge_loop_word, Word};
use qnull::homspace::{
    eval_metric, iota, product_closed_family, pushforward, q2_eval, separating_family, HomParam, SpaceMap,
    TestFunction,
};
use qnull::obstruction::{canonical_obstruction, det_loop, ring_winding_table, winding_number, UnitaryLoop};
use qnull::spaces::{
    random_based_loop, rp2_generator, sigma, Branch, DiskGrid, Path, SpacePoint, SpaceTag, SpherePoint,
};
use qnull::verifier::{adversarial_suite, verify, AdversarialReport, Verdict};
use qnull::{Complex64, Tolerances};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type M2 = [[Complex64; 2]; 2];

const TOL: f64 = 1e-9;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn oracle_h(x: &SpherePoint) -> M2 {
    let t = c(x.t, 0.0);
    [[t, x.alpha.conj()], [x.alpha, -t]]
}

fn m_mul(a: &M2, b: &M2) -> M2 {
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn m_adj(a: &M2) -> M2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

fn m_det(a: &M2) -> Complex64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

fn m_gap(a: &M2, b: &M2) -> f64 {
    let mut g: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            g = g.max((a[i][j] - b[i][j]).norm());
        }
    }
    g
}

fn m_id() -> M2 {
    [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]
}

fn from_lib(m: &ComplexMatrix) -> M2 {
    assert_eq!(m.dim(), 2);
    [[m.get(0, 0), m.get(0, 1)], [m.get(1, 0), m.get(1, 1)]]
}

/// `a(t₁)(I + h)/2 + a(t₂)(I − h)/2`.
fn oracle_q2(p: &HomParam, a: &TestFunction) -> M2 {
    let h = oracle_h(&p.x);
    let (a1, a2) = (a.eval(&p.t1), a.eval(&p.t2));
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let id = if i == j { 1.0 } else { 0.0 };
            out[i][j] = a1 * (c(id, 0.0) + h[i][j]) * 0.5 + a2 * (c(id, 0.0) - h[i][j]) * 0.5;
        }
    }
    out
}

fn random_param(space: SpaceTag, rng: &mut ChaCha8Rng) -> HomParam {
    HomParam::new(
        SpherePoint::random(rng),
        SpacePoint::random(space, rng),
        SpacePoint::random(space, rng),
    )
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: qnull::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

struct Shared {
    wedge_certs: Vec<(String, Certificate)>,
    suites: Vec<AdversarialReport>,
}

fn obstruction_exactness() -> Result<String, String> {
    let (res, dt) = timed(|| -> Result<(), String> {
        for n in 1..=8usize {
            for samples in [64, 256, 1024] {
                let w = lib(canonical_obstruction(n, samples))?;
                ensure(w == n as i64, || format!("n = {n}, N = {samples}: winding {w}"))?;
            }
        }
        Ok(())
    });
    res?;
    ensure(dt < Duration::from_secs(1), || format!("took {dt:?}"))?;
    Ok(format!("winding = n for n in 1..=8, N in {{64, 256, 1024}} in {dt:.2?}"))
}

fn h_identities() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let x = SpherePoint::random(&mut rng);
        let h = from_lib(&lib(h_matrix(&x, 1e-12))?);
        let h_neg = from_lib(&lib(h_matrix(&x.antipode(), 1e-12))?);
        let minus_h = h.map(|r| r.map(|v| -v));
        worst = worst
            .max(m_gap(&m_mul(&h, &h), &m_id()))
            .max(m_gap(&m_adj(&h), &h))
            .max((m_det(&h) - c(-1.0, 0.0)).norm())
            .max(m_gap(&h_neg, &minus_h))
            .max(m_gap(&h, &oracle_h(&x)));
    }
    ensure(worst <= 1e-12, || format!("worst deviation {worst:.3e}"))?;
    Ok(format!("1000 points, worst deviation {worst:.1e}"))
}

fn quotient_soundness() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut orbit, mut oracle, mut diag, mut laws): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for k in 0..1000 {
        let space = SpaceTag::ALL[k % 4];
        let fam = product_closed_family(space);
        let p = random_param(space, &mut rng);
        for a in &fam {
            let q = from_lib(&lib(q2_eval(&p, a))?);
            let qs = from_lib(&lib(q2_eval(&p.swapped(), a))?);
            orbit = orbit.max(m_gap(&q, &qs));
            oracle = oracle.max(m_gap(&q, &oracle_q2(&p, a)));
        }

        let t = SpacePoint::random(space, &mut rng);
        let (x, y) = (SpherePoint::random(&mut rng), SpherePoint::random(&mut rng));
        let d = lib(eval_metric(&HomParam::new(x, t, t), &HomParam::new(y, t, t), &separating_family(space)))?;
        diag = diag.max(d);

        let a = &fam[rng.gen_range(0..fam.len())];
        let b = &fam[rng.gen_range(0..fam.len())];
        let qa = from_lib(&lib(q2_eval(&p, a))?);
        let qb = from_lib(&lib(q2_eval(&p, b))?);
        let qab = from_lib(&lib(q2_eval(&p, &a.product(b)))?);
        let qconj = from_lib(&lib(q2_eval(&p, &a.conj()))?);
        let qone = from_lib(&lib(q2_eval(&p, &TestFunction::one(space)))?);
        laws = laws
            .max(m_gap(&qab, &m_mul(&qa, &qb)))
            .max(m_gap(&qconj, &m_adj(&qa)))
            .max(m_gap(&qone, &m_id()));
    }
    ensure(orbit <= 1e-15, || format!("orbit invariance off by {orbit:.3e}"))?;
    ensure(oracle <= 1e-15, || format!("q2_eval differs from the hand formula by {oracle:.3e}"))?;
    ensure(diag <= 1e-15, || format!("diagonal collapse off by {diag:.3e}"))?;
    ensure(laws <= 1e-12, || format!("homomorphism laws off by {laws:.3e}"))?;
    Ok(format!(
        "1000 triples: orbit {orbit:.1e}, diagonal {diag:.1e}, hom laws {laws:.1e}"
    ))
}

fn rp2_positive() -> Result<String, String> {
    let mut notes = Vec::new();
    for times in [1, 2] {
        let (built, dt) = timed(|| -> Result<_, String> {
            let cert = lib(build_rp2_certificate(&lib(rp2_generator(times, 256))?, Tolerances::default()))?;
            let report = lib(verify(&cert, &cert.boundary_loop, TOL))?;
            Ok((cert, report))
        });
        let (cert, report) = built?;
        ensure(dt < Duration::from_secs(10), || format!("generator^{times} took {dt:?}"))?;
        ensure(report.verdict == Verdict::Accept, || format!("generator^{times} rejected: {:?}", report.failures))?;
        ensure(cert.grid.angles() == 256, || format!("N = {}", cert.grid.angles()))?;
        ensure(cert.grid.num_rings() >= 64, || format!("R = {}", cert.grid.num_rings()))?;
        notes.push(format!("generator^{times}: R = {} in {dt:.2?}", cert.grid.num_rings()));
    }
    Ok(notes.join(", "))
}

fn wedge_pair(shared: &Shared) -> Result<String, String> {
    let (_, cert) = &shared.wedge_certs[0];
    let report = lib(verify(cert, &cert.boundary_loop, TOL))?;
    ensure(report.accepted(), || format!("[a,b] certificate rejected: {:?}", report.failures))?;

    let word = lib(wedge_loop_word(&cert.boundary_loop))?;
    let expected = lib(Word::parse("abAB"))?;
    ensure(word == expected && !word.is_identity(), || format!("boundary word {word}"))?;

    // α pushed along collapse_B is the identity loop of S¹, whose image under
    // eval_z ∘ ι has determinant s ↦ s², winding 2.
    let n = 512;
    let alpha = lib(Path::new(SpaceTag::Wedge, |s| SpacePoint::wedge(Branch::A, std::f64::consts::TAU * s))
        .sample_loop(n, TOL))?;
    let mut gap: f64 = 0.0;
    let mut dets = Vec::with_capacity(n);
    for (k, p) in alpha.samples().iter().enumerate() {
        let q = lib(SpaceMap::CollapseB.apply(p))?;
        let z = match q {
            SpacePoint::S1(z) => z,
            other => return Err(format!("collapse_B produced {other:?}")),
        };
        let theta = std::f64::consts::TAU * k as f64 / n as f64;
        gap = gap.max((z - Complex64::from_polar(1.0, theta)).norm());
        let ev = oracle_q2(&iota(q), &qnull::homspace::z_function());
        dets.push(m_det(&ev));
    }
    ensure(gap <= 1e-12, || format!("collapse_B ∘ α is {gap:.3e} from the identity loop"))?;
    let w = lib(winding_number(&dets))?;
    ensure(w == 2 && lib(canonical_obstruction(2, n))? == 2, || format!("winding {w}"))?;

    let suite = shared
        .suites
        .iter()
        .find(|s| s.space == SpaceTag::Wedge)
        .ok_or("no wedge suite")?;
    let fabricated: Vec<_> = suite.cases.iter().filter(|c| c.name.starts_with("alpha")).collect();
    ensure(fabricated.len() == 3, || format!("{} fabricated attempts", fabricated.len()))?;
    for case in &fabricated {
        ensure(case.outcome == Verdict::Reject, || format!("{} accepted", case.name))?;
    }
    Ok(format!(
        "[a,b] ACCEPT with word {word}; α ↦ identity loop (winding {w}); {} fabricated α certificates rejected",
        fabricated.len()
    ))
}

fn sigma_swap() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut loops = vec![lib(rp2_generator(1, 256))?];
    for _ in 0..2 {
        loops.push(lib(random_based_loop(SpaceTag::Rp2, 256, &mut rng))?);
    }
    let fam = separating_family(SpaceTag::Rp2);
    let x0 = SpherePoint::basepoint();
    let mut worst: f64 = 0.0;
    for lp in &loops {
        let t0 = lp.samples()[0];
        let strip = lib(sigma_swap_strip(&lp.to_path(), lp.len(), 33, TOL))?;
        ensure(strip.first_row().len() == lp.len(), || "column count".into())?;
        for (k, t) in lp.samples().iter().enumerate() {
            let lhs = HomParam::new(x0, *t, t0);
            let rhs = HomParam::new(x0, t0, *t);
            worst = worst
                .max(lib(eval_metric(&strip.first_row()[k], &lhs, &fam))?)
                .max(lib(eval_metric(&strip.last_row()[k], &rhs, &fam))?);
            for a in &fam {
                worst = worst
                    .max(m_gap(&oracle_q2(&strip.first_row()[k], a), &oracle_q2(&lhs, a)))
                    .max(m_gap(&oracle_q2(&strip.last_row()[k], a), &oracle_q2(&rhs, a)));
            }
        }
        let base = iota(t0);
        for row in &strip.rows {
            worst = worst.max(lib(eval_metric(&row[0], &base, &fam))?);
        }
        // The strip's x-coordinate follows σ from (−1, 0) to (1, 0).
        let mid = &strip.rows[strip.num_rows() / 2][1];
        worst = worst.max(m_gap(&oracle_h(&mid.x), &oracle_h(&sigma(0.5))));
    }
    ensure(worst == 0.0, || format!("edges or basepoint column off by {worst:.3e}"))?;
    Ok("edges equal ((1,0), φ, t₀) and ((1,0), t₀, φ); basepoint column ι(t₀); 3 loops, gap 0".into())
}

fn functoriality(shared: &Shared) -> Result<String, String> {
    let mut checked = 0;
    for (name, cert) in &shared.wedge_certs {
        ensure(lib(verify(cert, &cert.boundary_loop, TOL))?.accepted(), || format!("{name} rejected"))?;
        for g in [SpaceMap::CollapseA, SpaceMap::CollapseB] {
            let image = lib(cert.pushforward(g))?;
            let report = lib(verify(&image, &image.boundary_loop, TOL))?;
            ensure(report.accepted(), || format!("{name} via {}: {:?}", g.name(), report.failures))?;
            checked += 1;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let maps = [SpaceMap::CollapseA, SpaceMap::CollapseB, SpaceMap::ProjectRp2];
    let mut worst: f64 = 0.0;
    for k in 0..1000 {
        let g = maps[k % maps.len()];
        let p = random_param(g.source(), &mut rng);
        let fam = product_closed_family(g.target());
        let a = &fam[rng.gen_range(0..fam.len())];
        let lhs = from_lib(&lib(q2_eval(&lib(pushforward(&p, g))?, a))?);
        let rhs = from_lib(&lib(q2_eval(&p, &lib(a.pull_back(g))?))?);
        worst = worst.max(m_gap(&lhs, &rhs));
    }
    ensure(worst == 0.0, || format!("naturality off by {worst:.3e}"))?;
    Ok(format!("{checked} pushed-forward certificates ACCEPT; naturality exact on 1000 samples"))
}

fn negative_controls(shared: &Shared) -> Result<String, String> {
    let mut total = 0;
    for suite in &shared.suites {
        for required in ["torn ring", "boundary shifted by one sample", "off-sphere cell"] {
            let case = suite
                .cases
                .iter()
                .find(|c| c.name == required)
                .ok_or_else(|| format!("{}: no {required} case", suite.space))?;
            ensure(case.outcome == Verdict::Reject, || format!("{}: {required} accepted", suite.space))?;
        }
        ensure(suite.all_passed(), || {
            let bad: Vec<_> = suite.cases.iter().filter(|c| !c.passed()).map(|c| c.name.clone()).collect();
            format!("{}: unexpected outcomes {bad:?}", suite.space)
        })?;
        total += suite.rejections();
    }
    Ok(format!("{total} corrupted certificates rejected across s1, rp2, wedge"))
}

fn pairing_demo() -> Result<String, String> {
    let n = 256;
    let grid: DiskGrid<ComplexMatrix> = lib(pairing_nullhomotopy_demo(n))?;
    let mut unitary: f64 = 0.0;
    for m in grid.cells() {
        let m = from_lib(m);
        unitary = unitary.max(m_gap(&m_mul(&m_adj(&m), &m), &m_id()));
    }
    ensure(unitary <= 1e-12, || format!("unitarity defect {unitary:.3e}"))?;

    let mut boundary: f64 = 0.0;
    for (k, m) in grid.boundary().iter().enumerate() {
        let s = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64);
        boundary = boundary.max(m_gap(&from_lib(m), &[[s, c(0.0, 0.0)], [c(0.0, 0.0), s.conj()]]));
    }
    ensure(boundary <= 1e-12, || format!("boundary is {boundary:.3e} from diag(s, s̄)"))?;
    ensure(m_gap(&from_lib(&grid.center), &m_id()) <= 1e-12, || "center is not I".into())?;

    let dets = grid.map(|m| m_det(&from_lib(m)));
    let table = lib(ring_winding_table(&dets))?;
    ensure(table.consistent(), || format!("ring windings {:?}", table.windings))?;
    let lp = lib(UnitaryLoop::new(grid.boundary().to_vec(), 1e-12))?;
    let w = lib(winding_number(&lib(det_loop(&lp))?))?;
    ensure(w == 0, || format!("boundary winding {w}"))?;
    Ok(format!(
        "{} rings x {n}: unitary to {unitary:.1e}, all ring windings 0",
        grid.num_rings()
    ))
}

fn run(id: usize, title: &str, f: impl FnOnce() -> Result<String, String>) -> bool {
    let start = Instant::now();
    let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    let dt = start.elapsed();
    match outcome {
        Ok(detail) => {
            println!("PASS [{id}] {title}: {detail} ({dt:.2?})");
            true
        }
        Err(why) => {
            println!("FAIL [{id}] {title}: {why} ({dt:.2?})");
            false
        }
    }
}

fn main() -> ExitCode {
    let shared = (|| -> Result<Shared, String> {
        let mut wedge_certs = Vec::new();
        for (a, b) in [(1, 1), (1, -1)] {
            let cert = lib(build_wedge_commutator_certificate(a, b, Tolerances::default()))?;
            wedge_certs.push((format!("[a^{a}, b^{b}]"), cert));
        }
        let suites = [SpaceTag::S1, SpaceTag::Rp2, SpaceTag::Wedge]
            .into_iter()
            .map(|s| lib(adversarial_suite(s)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Shared { wedge_certs, suites })
    })();
    let shared = match shared {
        Ok(s) => s,
        Err(e) => {
            println!("FAIL setup: {e}");
            return ExitCode::FAILURE;
        }
    };

    let results = [
        run(1, "obstruction exactness", obstruction_exactness),
        run(2, "h-matrix identities", h_identities),
        run(3, "quotient soundness", quotient_soundness),
        run(4, "rp2 certificates", rp2_positive),
        run(5, "wedge positive/negative pair", || wedge_pair(&shared)),
        run(6, "sigma-swap correctness", sigma_swap),
        run(7, "functoriality", || functoriality(&shared)),
        run(8, "negative controls", || negative_controls(&shared)),
        run(9, "pairing demo", pairing_demo),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
