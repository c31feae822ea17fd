//! Unital *-homomorphisms `C(T) → M₂(ℂ)` through their parameter triples.
//!
//! A triple `(x, t₁, t₂) ∈ S² × T × T` names the homomorphism
//! `a ↦ a(t₁)·(I₂ + h(x))/2 + a(t₂)·(I₂ − h(x))/2`. The triples `(x, t₁, t₂)`
//! and `(−x, t₂, t₁)` name the same homomorphism, as do all `(x, t, t)` for a
//! fixed `t`. Equality is therefore decided by evaluating against a separating
//! family of test functions, never by comparing coordinates.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cxmat::{self, ComplexMatrix};
use crate::spaces::{Adjacency, Branch, DiskGrid, SpacePoint, SpaceTag, SpherePoint, WedgePoint};
use crate::{Error, Result};

/// A point of `S² × T × T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomParam {
    pub x: SpherePoint,
    pub t1: SpacePoint,
    pub t2: SpacePoint,
}

impl HomParam {
    pub fn new(x: SpherePoint, t1: SpacePoint, t2: SpacePoint) -> Self {
        HomParam { x, t1, t2 }
    }

    pub fn space(&self) -> SpaceTag {
        self.t1.space()
    }

    /// The other representative `(−x, t₂, t₁)` of the same orbit.
    pub fn swapped(&self) -> Self {
        HomParam::new(self.x.antipode(), self.t2, self.t1)
    }

    /// Largest deviation of the three coordinates from their spaces.
    pub fn defect(&self) -> f64 {
        let xd = self.x.sphere_defect();
        let xd = if xd.is_finite() { xd } else { f64::INFINITY };
        let td = if self.t1.space() == self.t2.space() {
            self.t1.defect().max(self.t2.defect())
        } else {
            f64::INFINITY
        };
        xd.max(td)
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        if self.t1.space() != self.t2.space() {
            return Err(Error::SpaceMismatch {
                expected: self.t1.space().to_string(),
                found: self.t2.space().to_string(),
            });
        }
        let d = self.defect();
        if d > tol {
            return Err(Error::OffSpace {
                what: format!("homomorphism parameter {self:?}"),
                deviation: d,
            });
        }
        Ok(())
    }
}

type Eval = dyn Fn(&SpacePoint) -> Complex64 + Send + Sync;

/// A named continuous function `T → ℂ` in closed form.
#[derive(Clone)]
pub struct TestFunction {
    space: SpaceTag,
    name: String,
    f: Arc<Eval>,
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TestFunction({} on {})", self.name, self.space)
    }
}

impl TestFunction {
    pub fn new(
        space: SpaceTag,
        name: impl Into<String>,
        f: impl Fn(&SpacePoint) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        TestFunction {
            space,
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn one(space: SpaceTag) -> Self {
        TestFunction::new(space, "1", |_| Complex64::new(1.0, 0.0))
    }

    pub fn space(&self) -> SpaceTag {
        self.space
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, p: &SpacePoint) -> Complex64 {
        (self.f)(p)
    }

    pub fn product(&self, other: &TestFunction) -> TestFunction {
        let (f, g) = (self.f.clone(), other.f.clone());
        TestFunction::new(
            self.space,
            format!("({})*({})", self.name, other.name),
            move |p| f(p) * g(p),
        )
    }

    pub fn conj(&self) -> TestFunction {
        let f = self.f.clone();
        TestFunction::new(self.space, format!("conj({})", self.name), move |p| f(p).conj())
    }

    /// `a ∘ g` for a map `g: source → self.space`.
    pub fn pull_back(&self, g: SpaceMap) -> Result<TestFunction> {
        if g.target() != self.space {
            return Err(Error::SpaceMismatch {
                expected: self.space.to_string(),
                found: g.target().to_string(),
            });
        }
        let f = self.f.clone();
        Ok(TestFunction::new(
            g.source(),
            format!("{}∘{}", self.name, g.name()),
            move |p| f(&g.apply(p).expect("source point")),
        ))
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn sphere_coords(p: &SpacePoint) -> [f64; 3] {
    p.sphere().expect("sphere or rp2 point").to_vec3()
}

/// A finite family whose joint evaluation separates points of `T`.
///
/// S¹: the inclusion `z`. S²: the real coordinates `Re α`, `Im α`, `t`.
/// ℝP²: the six Veronese monomials `uᵢuⱼ`, off-diagonal ones doubled so that
/// each has sup-norm 1. S¹∨S¹: the two coordinates of the embedding into the
/// torus.
pub fn separating_family(space: SpaceTag) -> Vec<TestFunction> {
    match space {
        SpaceTag::S1 => vec![z_function()],
        SpaceTag::S2 => ["re_alpha", "im_alpha", "t"]
            .into_iter()
            .enumerate()
            .map(|(i, name)| {
                TestFunction::new(SpaceTag::S2, name, move |p| real(sphere_coords(p)[i]))
            })
            .collect(),
        SpaceTag::Rp2 => {
            let mut fam = Vec::with_capacity(6);
            for i in 0..3 {
                for j in i..3 {
                    let scale = if i == j { 1.0 } else { 2.0 };
                    fam.push(TestFunction::new(SpaceTag::Rp2, format!("u{i}u{j}"), move |p| {
                        let u = sphere_coords(p);
                        real(scale * u[i] * u[j])
                    }));
                }
            }
            fam
        }
        SpaceTag::Wedge => vec![
            TestFunction::new(SpaceTag::Wedge, "embed_a", |p| match p {
                SpacePoint::Wedge(w) => w.embed().0,
                _ => panic!("wedge point expected"),
            }),
            TestFunction::new(SpaceTag::Wedge, "embed_b", |p| match p {
                SpacePoint::Wedge(w) => w.embed().1,
                _ => panic!("wedge point expected"),
            }),
        ],
    }
}

/// The inclusion `S¹ ⊂ ℂ`.
pub fn z_function() -> TestFunction {
    TestFunction::new(SpaceTag::S1, "z", |p| match p {
        SpacePoint::S1(z) => *z,
        _ => panic!("circle point expected"),
    })
}

/// The separating family closed under conjugation and pairwise products, with
/// the unit adjoined.
pub fn product_closed_family(space: SpaceTag) -> Vec<TestFunction> {
    let base = separating_family(space);
    let mut gens = base.clone();
    gens.extend(base.iter().map(TestFunction::conj));
    let mut out = vec![TestFunction::one(space)];
    out.extend(gens.iter().cloned());
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i..] {
            out.push(a.product(b));
        }
    }
    out
}

fn check_space(p: &HomParam, space: SpaceTag) -> Result<()> {
    if p.t1.space() != space || p.t2.space() != space {
        return Err(Error::SpaceMismatch {
            expected: space.to_string(),
            found: if p.t1.space() != space { p.t1.space() } else { p.t2.space() }.to_string(),
        });
    }
    Ok(())
}

/// `a(t₁)·(I₂ + h(x))/2 + a(t₂)·(I₂ − h(x))/2`.
///
/// Invariant bit-for-bit under `(x, t₁, t₂) ↦ (−x, t₂, t₁)`; when
/// `a(t₁) = a(t₂)` the result is exactly `a(t₁)·I₂`.
pub fn q2_eval(p: &HomParam, a: &TestFunction) -> Result<ComplexMatrix> {
    check_space(p, a.space())?;
    Ok(q2_eval_values(&p.x, a.eval(&p.t1), a.eval(&p.t2)))
}

pub(crate) fn q2_eval_values(x: &SpherePoint, a1: Complex64, a2: Complex64) -> ComplexMatrix {
    let [p, q, r, s] = q2_eval_entries(x, a1, a2);
    ComplexMatrix::from_2x2(p, q, r, s)
}

/// Row-major entries of `a₁·P(x) + a₂·P(−x)`.
fn q2_eval_entries(x: &SpherePoint, a1: Complex64, a2: Complex64) -> [Complex64; 4] {
    let zero = Complex64::new(0.0, 0.0);
    if a1 == a2 {
        return [a1, zero, zero, a1];
    }
    let plus = cxmat::plus_projection_raw(x.alpha, x.t);
    let minus = cxmat::plus_projection_raw(-x.alpha, -x.t);
    let e = |i: usize, j: usize| a1 * plus.get(i, j) + a2 * minus.get(i, j);
    [e(0, 0), e(0, 1), e(1, 0), e(1, 1)]
}

/// The matrices `q2_eval(p, a)` for every `a` in a family, as row-major
/// 2×2 entry arrays. Two parameters name the same homomorphism (as far as the
/// family can tell) exactly when their signatures agree.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalSignature(Vec<[Complex64; 4]>);

impl EvalSignature {
    pub fn new(p: &HomParam, family: &[TestFunction]) -> Result<Self> {
        family
            .iter()
            .map(|a| {
                check_space(p, a.space())?;
                Ok(q2_eval_entries(&p.x, a.eval(&p.t1), a.eval(&p.t2)))
            })
            .collect::<Result<Vec<_>>>()
            .map(EvalSignature)
    }

    /// `max_a ‖ρ_p(a) − ρ_q(a)‖`; identical to [`eval_metric`].
    pub fn distance(&self, other: &EvalSignature) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(m, n)| cxmat::op_norm_2x2([m[0] - n[0], m[1] - n[1], m[2] - n[2], m[3] - n[3]]))
            .fold(0.0, f64::max)
    }
}

/// `ι(t) = ((1, 0), t, t)`, the character `a ↦ a(t)·I₂`.
pub fn iota(t: SpacePoint) -> HomParam {
    HomParam::new(SpherePoint::basepoint(), t, t)
}

/// `max_a ‖q2_eval(p, a) − q2_eval(q, a)‖` over the family.
pub fn eval_metric(p: &HomParam, q: &HomParam, family: &[TestFunction]) -> Result<f64> {
    if family.is_empty() {
        return Err(Error::InvalidArgument("empty test family".into()));
    }
    Ok(EvalSignature::new(p, family)?.distance(&EvalSignature::new(q, family)?))
}

/// Largest evaluation-metric distance between neighbouring grid cells, and
/// where it occurs.
pub fn grid_modulus(
    grid: &DiskGrid<HomParam>,
    family: &[TestFunction],
) -> Result<(f64, Option<Adjacency>)> {
    let sigs = grid.try_map(|p| EvalSignature::new(p, family))?;
    Ok(sigs.modulus(|a, b| a.distance(b)))
}

/// Evaluation at the inclusion `z`: the unitary `z(t₁)P + z(t₂)Q` for `T = S¹`.
pub fn eval_z(p: &HomParam, tol_unitary: f64) -> Result<ComplexMatrix> {
    let u = q2_eval(p, &z_function())?;
    let deviation = u.unitarity_defect();
    if !(deviation <= tol_unitary) {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(u)
}

/// Built-in continuous maps between the model spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpaceMap {
    Identity(SpaceTag),
    /// S¹∨S¹ → S¹ sending branch A to the wedge point and `(B, θ)` to `e^{iθ}`.
    CollapseA,
    /// S¹∨S¹ → S¹ sending `(A, θ)` to `e^{iθ}` and branch B to the wedge point.
    CollapseB,
    /// The double cover S² → ℝP².
    ProjectRp2,
}

impl SpaceMap {
    pub fn source(self) -> SpaceTag {
        match self {
            SpaceMap::Identity(t) => t,
            SpaceMap::CollapseA | SpaceMap::CollapseB => SpaceTag::Wedge,
            SpaceMap::ProjectRp2 => SpaceTag::S2,
        }
    }

    pub fn target(self) -> SpaceTag {
        match self {
            SpaceMap::Identity(t) => t,
            SpaceMap::CollapseA | SpaceMap::CollapseB => SpaceTag::S1,
            SpaceMap::ProjectRp2 => SpaceTag::Rp2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SpaceMap::Identity(_) => "identity",
            SpaceMap::CollapseA => "collapseA",
            SpaceMap::CollapseB => "collapseB",
            SpaceMap::ProjectRp2 => "project",
        }
    }

    /// Parse a map name for maps out of `source`.
    pub fn parse(name: &str, source: SpaceTag) -> Result<SpaceMap> {
        let map = match name {
            "identity" => SpaceMap::Identity(source),
            "collapseA" => SpaceMap::CollapseA,
            "collapseB" => SpaceMap::CollapseB,
            "project" => SpaceMap::ProjectRp2,
            _ => {
                return Err(Error::UnsupportedMap {
                    map: name.into(),
                    space: source.to_string(),
                })
            }
        };
        if map.source() != source {
            return Err(Error::UnsupportedMap {
                map: name.into(),
                space: source.to_string(),
            });
        }
        Ok(map)
    }

    pub fn apply(self, p: &SpacePoint) -> Result<SpacePoint> {
        if p.space() != self.source() {
            return Err(Error::UnsupportedMap {
                map: self.name().into(),
                space: p.space().to_string(),
            });
        }
        Ok(match (self, p) {
            (SpaceMap::Identity(_), _) => *p,
            (SpaceMap::CollapseA, SpacePoint::Wedge(w)) => collapse(w, Branch::A),
            (SpaceMap::CollapseB, SpacePoint::Wedge(w)) => collapse(w, Branch::B),
            (SpaceMap::ProjectRp2, SpacePoint::S2(x)) => SpacePoint::rp2(*x),
            _ => unreachable!("source checked above"),
        })
    }
}

fn collapse(w: &WedgePoint, collapsed: Branch) -> SpacePoint {
    if w.is_base() || w.branch == collapsed {
        SpacePoint::basepoint(SpaceTag::S1)
    } else {
        SpacePoint::S1(crate::spaces::cis_turns(w.angle / std::f64::consts::TAU))
    }
}

/// `(x, g(t₁), g(t₂))`.
pub fn pushforward(p: &HomParam, g: SpaceMap) -> Result<HomParam> {
    Ok(HomParam::new(p.x, g.apply(&p.t1)?, g.apply(&p.t2)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cxmat::op_norm;
    use crate::spaces::{metric, SpacePoint};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_param<R: Rng>(space: SpaceTag, rng: &mut R) -> HomParam {
        HomParam::new(
            SpherePoint::random(rng),
            SpacePoint::random(space, rng),
            SpacePoint::random(space, rng),
        )
    }

    #[test]
    fn north_pole_gives_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for space in SpaceTag::ALL {
            for a in separating_family(space) {
                let t1 = SpacePoint::random(space, &mut rng);
                let t2 = SpacePoint::random(space, &mut rng);
                let p = HomParam::new(SpherePoint::north(), t1, t2);
                let m = q2_eval(&p, &a).unwrap();
                assert_eq!(m, ComplexMatrix::diag(&[a.eval(&t1), a.eval(&t2)]).unwrap());
            }
        }
    }

    #[test]
    fn iota_is_scalar() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for space in SpaceTag::ALL {
            for a in product_closed_family(space) {
                let t = SpacePoint::random(space, &mut rng);
                let m = q2_eval(&iota(t), &a).unwrap();
                assert_eq!(m, ComplexMatrix::scalar(2, a.eval(&t)).unwrap());
            }
            let t0 = SpacePoint::basepoint(space);
            let p = iota(t0);
            assert_eq!(p, HomParam::new(SpherePoint::basepoint(), t0, t0));
        }
    }

    #[test]
    fn orbit_invariance_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for space in SpaceTag::ALL {
            let fam = product_closed_family(space);
            for _ in 0..100 {
                let p = random_param(space, &mut rng);
                for a in &fam {
                    assert_eq!(q2_eval(&p, a).unwrap(), q2_eval(&p.swapped(), a).unwrap());
                }
                assert_eq!(eval_metric(&p, &p.swapped(), &fam).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn diagonal_collapse() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for space in SpaceTag::ALL {
            let fam = separating_family(space);
            for _ in 0..100 {
                let t = SpacePoint::random(space, &mut rng);
                let p = HomParam::new(SpherePoint::random(&mut rng), t, t);
                let q = HomParam::new(SpherePoint::random(&mut rng), t, t);
                assert_eq!(eval_metric(&p, &q, &fam).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn signature_distance_matches_matrix_norms() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for space in SpaceTag::ALL {
            let fam = separating_family(space);
            for _ in 0..200 {
                let p = random_param(space, &mut rng);
                let q = random_param(space, &mut rng);
                let direct = fam
                    .iter()
                    .map(|a| op_norm(&(&q2_eval(&p, a).unwrap() - &q2_eval(&q, a).unwrap())))
                    .fold(0.0, f64::max);
                assert_eq!(eval_metric(&p, &q, &fam).unwrap(), direct);
            }
        }
    }

    #[test]
    fn metric_examples() {
        let fam = separating_family(SpaceTag::S1);
        let p = iota(SpacePoint::S1(c(1.0, 0.0)));
        assert_eq!(eval_metric(&p, &p, &fam).unwrap(), 0.0);
        let q = iota(SpacePoint::S1(c(-1.0, 0.0)));
        assert!((eval_metric(&p, &q, &fam).unwrap() - 2.0).abs() < 1e-15);
        assert!(eval_metric(&p, &q, &[]).is_err());
    }

    #[test]
    fn iota_separates_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        for space in SpaceTag::ALL {
            let fam = separating_family(space);
            let pairs = if space == SpaceTag::Rp2 { 1000 } else { 100 };
            for _ in 0..pairs {
                let t = SpacePoint::random(space, &mut rng);
                let u = SpacePoint::random(space, &mut rng);
                if metric(&t, &u).unwrap() < 1e-3 {
                    continue;
                }
                assert!(eval_metric(&iota(t), &iota(u), &fam).unwrap() > 0.0, "{space}");
            }
        }
    }

    #[test]
    fn family_sizes_and_bounds() {
        assert_eq!(separating_family(SpaceTag::S1).len(), 1);
        assert_eq!(separating_family(SpaceTag::S2).len(), 3);
        assert_eq!(separating_family(SpaceTag::Rp2).len(), 6);
        assert_eq!(separating_family(SpaceTag::Wedge).len(), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        for space in SpaceTag::ALL {
            let fam = separating_family(space);
            for _ in 0..500 {
                let t = SpacePoint::random(space, &mut rng);
                for a in &fam {
                    assert!(a.eval(&t).norm() <= 1.0 + 1e-12);
                }
            }
        }
        // Sup-norm 1 is attained by each Veronese function.
        let diag = SpherePoint::from_vec3([0.5f64.sqrt(), 0.5f64.sqrt(), 0.0]);
        let fam = separating_family(SpaceTag::Rp2);
        assert!((fam[1].eval(&SpacePoint::rp2(diag)).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn wedge_family_distance() {
        let fam = separating_family(SpaceTag::Wedge);
        let a = iota(SpacePoint::wedge(Branch::A, PI));
        let b = iota(SpacePoint::wedge(Branch::B, PI));
        assert!((eval_metric(&a, &b, &fam).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn eval_z_cases() {
        let s = crate::spaces::cis_turns(0.13);
        let u = eval_z(&iota(SpacePoint::S1(s)), 1e-10).unwrap();
        assert_eq!(u, ComplexMatrix::scalar(2, s).unwrap());
        let p = HomParam::new(SpherePoint::north(), SpacePoint::S1(s), SpacePoint::S1(s.conj()));
        let u = eval_z(&p, 1e-10).unwrap();
        assert_eq!(u, ComplexMatrix::diag(&[s, s.conj()]).unwrap());
        assert!((cxmat::det(&u) - c(1.0, 0.0)).norm() < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(27);
        for _ in 0..100 {
            let u = eval_z(&random_param(SpaceTag::S1, &mut rng), 1e-10).unwrap();
            assert!(u.unitarity_defect() <= 1e-12);
        }
        let bad = HomParam::new(
            SpherePoint::new(c(1.01, 0.0), 0.0),
            SpacePoint::S1(c(1.0, 0.0)),
            SpacePoint::S1(c(0.0, 1.0)),
        );
        assert!(matches!(eval_z(&bad, 1e-10), Err(Error::NotUnitary { .. })));
        let wrong = iota(SpacePoint::basepoint(SpaceTag::Wedge));
        assert!(eval_z(&wrong, 1e-10).is_err());
    }

    #[test]
    fn pushforward_examples() {
        let theta = 1.1;
        let p = iota(SpacePoint::wedge(Branch::A, theta));
        let q = pushforward(&p, SpaceMap::CollapseB).unwrap();
        let expected = iota(SpacePoint::S1(Complex64::from_polar(1.0, theta)));
        let fam = separating_family(SpaceTag::S1);
        assert!(eval_metric(&q, &expected, &fam).unwrap() < 1e-15);
        let p = iota(SpacePoint::wedge(Branch::B, theta));
        let q = pushforward(&p, SpaceMap::CollapseB).unwrap();
        assert_eq!(q, iota(SpacePoint::basepoint(SpaceTag::S1)));
        let mut rng = ChaCha8Rng::seed_from_u64(28);
        for space in SpaceTag::ALL {
            let p = random_param(space, &mut rng);
            assert_eq!(pushforward(&p, SpaceMap::Identity(space)).unwrap(), p);
        }
        assert!(pushforward(&iota(SpacePoint::basepoint(SpaceTag::S1)), SpaceMap::CollapseA).is_err());
    }

    #[test]
    fn pushforward_naturality_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for map in [SpaceMap::CollapseA, SpaceMap::CollapseB, SpaceMap::ProjectRp2] {
            let fam = product_closed_family(map.target());
            for _ in 0..100 {
                let p = random_param(map.source(), &mut rng);
                let q = pushforward(&p, map).unwrap();
                for a in &fam {
                    let lhs = q2_eval(&q, a).unwrap();
                    let rhs = q2_eval(&p, &a.pull_back(map).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn star_homomorphism_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        for space in SpaceTag::ALL {
            let fam = product_closed_family(space);
            let i2 = ComplexMatrix::identity(2).unwrap();
            for _ in 0..200 {
                let p = random_param(space, &mut rng);
                let a = &fam[rng.gen_range(0..fam.len())];
                let b = &fam[rng.gen_range(0..fam.len())];
                let rab = q2_eval(&p, &a.product(b)).unwrap();
                let rarb = &q2_eval(&p, a).unwrap() * &q2_eval(&p, b).unwrap();
                assert!(op_norm(&(&rab - &rarb)) <= 1e-12);
                let rconj = q2_eval(&p, &a.conj()).unwrap();
                assert!(op_norm(&(&rconj - &cxmat::adjoint(&q2_eval(&p, a).unwrap()))) <= 1e-12);
                let r1 = q2_eval(&p, &TestFunction::one(space)).unwrap();
                assert!(op_norm(&(&r1 - &i2)) <= 1e-12);
            }
        }
    }

    #[test]
    fn space_mismatch_is_reported() {
        let p = iota(SpacePoint::basepoint(SpaceTag::S1));
        let a = &separating_family(SpaceTag::S2)[0];
        assert!(matches!(q2_eval(&p, a), Err(Error::SpaceMismatch { .. })));
        assert!(SpaceMap::parse("collapseA", SpaceTag::Rp2).is_err());
        assert!(SpaceMap::parse("twist", SpaceTag::Wedge).is_err());
        assert_eq!(SpaceMap::parse("collapseB", SpaceTag::Wedge).unwrap(), SpaceMap::CollapseB);
    }
}
