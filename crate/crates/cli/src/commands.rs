use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use qnull::constructor::{build_rp2_certificate, build_wedge_commutator_certificate, Certificate};
use qnull::freegroup::wedge_loop_word;
use qnull::homspace::SpaceMap;
use qnull::obstruction::{canonical_loop, det_loop, phase_steps, winding_report};
use qnull::spaces::{rp2_generator, SpaceTag};
use qnull::verifier::{verify, VerificationReport, MESH_CEILING};
use qnull::Tolerances;

use crate::format;
use crate::{default_tol, CliError, Result};

/// How a successful run ends. Input errors are reported as `Err` and exit 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Done,
    Accept,
    Reject,
}

impl Outcome {
    pub fn exit_code(self) -> ExitCode {
        match self {
            Outcome::Done | Outcome::Accept => ExitCode::SUCCESS,
            Outcome::Reject => ExitCode::from(1),
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn read_certificate(path: &Path) -> Result<Certificate> {
    format::certificate_from_str(&read(path)?).map_err(|source| CliError::File {
        path: path.to_owned(),
        source,
    })
}

pub fn write_certificate(path: &Path, c: &Certificate) -> Result<()> {
    write(path, &format::certificate_to_string(c))
}

/// Winding of `det(s·I_n)` and its phase trace as CSV
/// (`k,s,re,im,phase,unwrapped`).
pub fn obstruct(n: usize, samples: usize, csv: &Path) -> Result<Outcome> {
    let lp = canonical_loop(n, samples)?;
    let dets = det_loop(&lp)?;
    let report = winding_report(&dets)?;
    let steps = phase_steps(&dets)?;

    let mut out = String::from("k,s,re,im,phase,unwrapped\n");
    let mut unwrapped = dets[0].arg();
    for (k, d) in dets.iter().enumerate() {
        let s = k as f64 / samples as f64;
        writeln!(out, "{k},{s:.16e},{:.16e},{:.16e},{:.16e},{unwrapped:.16e}", d.re, d.im, d.arg()).unwrap();
        unwrapped += steps[k];
    }
    write(csv, &out)?;
    println!("winding = {}", report.winding);
    println!(
        "raw {:.12} turns, residue {:.1e}, largest phase step {:.4} rad",
        report.raw, report.residue, report.max_step
    );
    println!("phase trace: {} ({samples} samples)", csv.display());
    Ok(Outcome::Done)
}

pub enum LoopSource {
    File(PathBuf),
    /// `times` traversals of the ℝP² generator, sampled at `samples` points.
    Rp2Generator { times: u32, samples: usize },
    Commutator { a_turns: i64, b_turns: i64 },
}

pub fn tolerances() -> Result<Tolerances> {
    Ok(Tolerances {
        verify: default_tol()?,
        ..Tolerances::default()
    })
}

pub fn construct(space: SpaceTag, source: LoopSource, out: &Path) -> Result<Outcome> {
    let tol = tolerances()?;
    let turns = match source {
        LoopSource::Commutator { a_turns, b_turns } => Some((a_turns, b_turns)),
        _ => None,
    };
    let cert = match (space, source) {
        (SpaceTag::Rp2, LoopSource::File(path)) => {
            let lp = format::loop_from_str(SpaceTag::Rp2, &read(&path)?)
                .map_err(|source| CliError::File { path, source })?;
            build_rp2_certificate(&lp, tol)?
        }
        (SpaceTag::Rp2, LoopSource::Rp2Generator { times, samples }) => {
            build_rp2_certificate(&rp2_generator(times, samples)?, tol)?
        }
        (SpaceTag::Wedge, LoopSource::Commutator { a_turns, b_turns }) => {
            build_wedge_commutator_certificate(a_turns, b_turns, tol)?
        }
        (SpaceTag::Wedge, LoopSource::File(_)) => {
            return Err(CliError::Usage(
                "wedge certificates are built for commutator loops only; use --a-turns/--b-turns".into(),
            ))
        }
        (space, _) => {
            return Err(CliError::Usage(format!(
                "no construction for this loop in {space}; use --space rp2 with --loop/--generator or --space wedge with --a-turns/--b-turns"
            )))
        }
    };
    for layer in &cert.construction_log {
        println!("layer {:<12} rows {:>5}  modulus {:.6}", layer.name, layer.rows, layer.modulus);
    }
    println!(
        "grid: {} rings x {} angles, mesh bound {:.6} (ceiling {MESH_CEILING})",
        cert.grid.num_rings(),
        cert.grid.angles(),
        cert.mesh_bound
    );
    if space == SpaceTag::Wedge {
        let word = wedge_loop_word(&cert.boundary_loop)?;
        println!("boundary word: {word}");
        if let Some((a_turns, b_turns)) = turns {
            let label = commutator_label(a_turns, b_turns);
            if word.is_identity() {
                println!("{label} = e in the free group");
            } else {
                println!("{label} ≠ e: the boundary is not classically nullhomotopic");
            }
        }
    }
    write_certificate(out, &cert)?;
    println!("wrote {}", out.display());
    Ok(Outcome::Done)
}

fn power(g: char, k: i64) -> String {
    if k == 1 {
        g.to_string()
    } else {
        format!("{g}^{k}")
    }
}

fn commutator_label(a_turns: i64, b_turns: i64) -> String {
    format!("[{},{}]", power('a', a_turns), power('b', b_turns))
}

pub fn verify_file(cert_path: &Path, tol: Option<f64>, report_path: Option<&Path>) -> Result<(Outcome, VerificationReport)> {
    let tol = match tol {
        Some(t) => t,
        None => default_tol()?,
    };
    let cert = read_certificate(cert_path)?;
    let report = verify(&cert, &cert.boundary_loop, tol)?;
    print!("{report}");
    let default_report = PathBuf::from(format!("{}.report.json", cert_path.display()));
    let report_path = report_path.unwrap_or(&default_report);
    write(report_path, &format::to_pretty(&report))?;
    println!("report: {}", report_path.display());
    let outcome = if report.accepted() { Outcome::Accept } else { Outcome::Reject };
    Ok((outcome, report))
}

pub fn pushforward(cert_path: &Path, map: &str, out: &Path) -> Result<Outcome> {
    let cert = read_certificate(cert_path)?;
    let g = SpaceMap::parse(map, cert.space)?;
    let image = cert.pushforward(g)?;
    println!(
        "{} -> {} via {}: {} rings x {} angles, mesh bound {:.6}",
        cert.space,
        image.space,
        g.name(),
        image.grid.num_rings(),
        image.grid.angles(),
        image.mesh_bound
    );
    write_certificate(out, &image)?;
    println!("wrote {}", out.display());
    Ok(Outcome::Done)
}
