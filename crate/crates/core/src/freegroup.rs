//! Reduced words in the free group on `a`, `b`, the fundamental group of the
//! wedge of two circles. Branch A carries `a`, branch B carries `b`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::spaces::{wrap_angle, Branch, SampledLoop, SpacePoint, SpaceTag, WedgePoint};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub generator: Branch,
    /// `+1` or `−1`.
    pub sign: i8,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        Letter {
            generator: self.generator,
            sign: -self.sign,
        }
    }
}

/// A freely reduced word.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    /// `g^k`.
    pub fn power(generator: Branch, k: i64) -> Self {
        let sign = if k < 0 { -1 } else { 1 };
        Word(vec![Letter { generator, sign }; k.unsigned_abs() as usize])
    }

    pub fn a() -> Self {
        Word::power(Branch::A, 1)
    }

    pub fn b() -> Self {
        Word::power(Branch::B, 1)
    }

    /// Reduce an arbitrary letter sequence with a stack.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut stack: Vec<Letter> = Vec::new();
        for l in letters {
            if stack.last() == Some(&l.inverse()) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        Word(stack)
    }

    /// Parse `a`, `b` with `A`, `B` for inverses; whitespace is ignored.
    pub fn parse(s: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for ch in s.chars().filter(|c| !c.is_whitespace()) {
            let (generator, sign) = match ch {
                'a' => (Branch::A, 1),
                'A' => (Branch::A, -1),
                'b' => (Branch::B, 1),
                'B' => (Branch::B, -1),
                'e' => continue,
                _ => return Err(Error::InvalidArgument(format!("unknown letter {ch:?}"))),
            };
            letters.push(Letter { generator, sign });
        }
        Ok(Word::from_letters(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Word) -> Word {
        Word::from_letters(self.0.iter().chain(&other.0).copied())
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// `x y x⁻¹ y⁻¹`.
    pub fn commutator(x: &Word, y: &Word) -> Word {
        x.mul(y).mul(&x.inverse()).mul(&y.inverse())
    }

    /// Exponent sum of one generator (its image under the collapse onto that circle).
    pub fn exponent_sum(&self, generator: Branch) -> i64 {
        self.0
            .iter()
            .filter(|l| l.generator == generator)
            .map(|l| l.sign as i64)
            .sum()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        for l in &self.0 {
            let c = match (l.generator, l.sign > 0) {
                (Branch::A, true) => 'a',
                (Branch::A, false) => 'A',
                (Branch::B, true) => 'b',
                (Branch::B, false) => 'B',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Read the reduced word of a sampled based loop in the wedge.
///
/// Each excursion away from the wedge point stays on one branch; its net turn
/// count (angle unwrapped from the wedge point and back) contributes that power
/// of the branch generator. Steps of a quarter turn or more are refused.
pub fn wedge_loop_word(lp: &SampledLoop) -> Result<Word> {
    if lp.space() != SpaceTag::Wedge {
        return Err(Error::SpaceMismatch {
            expected: SpaceTag::Wedge.to_string(),
            found: lp.space().to_string(),
        });
    }
    let pts: Vec<WedgePoint> = lp
        .samples()
        .iter()
        .map(|p| match p {
            SpacePoint::Wedge(w) => *w,
            _ => unreachable!("loop space checked"),
        })
        .collect();
    let len = pts.len();
    let mut letters = Vec::new();
    // Net angle of the current excursion and its branch.
    let mut run: Option<(Branch, f64)> = None;
    let check = |index: usize, step: f64| -> Result<f64> {
        if step.abs() >= std::f64::consts::FRAC_PI_2 {
            Err(Error::MeshTooCoarse(format!(
                "wedge loop step of {:.4} rad at sample {index}",
                step.abs()
            )))
        } else {
            Ok(step)
        }
    };
    let close = |run: &mut Option<(Branch, f64)>, letters: &mut Vec<Letter>| {
        if let Some((branch, total)) = run.take() {
            let turns = (total / std::f64::consts::TAU).round() as i64;
            letters.extend(Word::power(branch, turns).0);
        }
    };
    for k in 0..len {
        let (p, q) = (pts[k], pts[(k + 1) % len]);
        let same_run = !p.is_base() && !q.is_base() && p.branch == q.branch;
        if same_run {
            let step = check(k, wrap_angle(q.angle - p.angle))?;
            if let Some((_, total)) = run.as_mut() {
                *total += step;
            } else {
                // First excursion already under way at sample 0 (unbased loop).
                return Err(Error::Unbased {
                    drift: p.distance_to_base(),
                });
            }
            continue;
        }
        if !p.is_base() {
            let step = check(k, wrap_angle(-p.angle))?;
            match run.as_mut() {
                Some((_, total)) => *total += step,
                None => {
                    return Err(Error::Unbased {
                        drift: p.distance_to_base(),
                    })
                }
            }
            close(&mut run, &mut letters);
        }
        if !q.is_base() {
            run = Some((q.branch, check(k, wrap_angle(q.angle))?));
        }
    }
    if run.is_some() {
        return Err(Error::Unbased {
            drift: pts[0].distance_to_base(),
        });
    }
    Ok(Word::from_letters(letters))
}
