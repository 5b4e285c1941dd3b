//! CSV interchange formats. Floats are written with Rust's shortest
//! round-trip formatting.

use std::io::Write;
use std::path::Path;

use crate::diagnostics::RecoveryReport;
use crate::env::BeaconSet;
use crate::geometry::Vec2;
use crate::inference::PosteriorSamples;
use crate::observables::TrajectorySet;
use crate::params::ParamName;
use crate::summaries::SummaryVector;

use super::{write_atomic, FileError};

/// Beacon sets: `index,x,y` in room-centered meters.
pub fn write_beacons_csv(path: &Path, beacons: &BeaconSet<f64>) -> Result<(), FileError> {
    write_atomic(path, |w| {
        writeln!(w, "index,x,y")?;
        for (i, p) in beacons.positions.iter().enumerate() {
            writeln!(w, "{i},{},{}", p.x, p.y)?;
        }
        Ok(())
    })
}

pub fn read_beacons_csv(path: &Path) -> Result<BeaconSet<f64>, FileError> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(FileError::Csv {
        line: 1,
        reason: "empty file".into(),
    })?;
    if header.trim() != "index,x,y" {
        return Err(FileError::Csv {
            line: 1,
            reason: format!("expected header 'index,x,y', got '{header}'"),
        });
    }
    let mut positions = Vec::new();
    for (i, line) in lines {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(FileError::Csv {
                line: line_no,
                reason: format!("expected 3 fields, got {}", fields.len()),
            });
        }
        let parse = |s: &str, what: &str| {
            s.trim().parse::<f64>().map_err(|e| FileError::Csv {
                line: line_no,
                reason: format!("bad {what} '{s}': {e}"),
            })
        };
        fields[0]
            .trim()
            .parse::<usize>()
            .map_err(|e| FileError::Csv {
                line: line_no,
                reason: format!("bad index '{}': {e}", fields[0]),
            })?;
        positions.push(Vec2::new(parse(fields[1], "x")?, parse(fields[2], "y")?));
    }
    Ok(BeaconSet::new(positions))
}

/// Posterior samples: `w,r,v,eta,weight`.
pub fn write_posterior_csv(path: &Path, samples: &PosteriorSamples) -> Result<(), FileError> {
    write_atomic(path, |w| {
        writeln!(w, "w,r,v,eta,weight")?;
        for (draw, weight) in samples.draws.iter().zip(&samples.weights) {
            writeln!(
                w,
                "{},{},{},{},{}",
                draw.w, draw.r, draw.v, draw.eta, weight
            )?;
        }
        Ok(())
    })
}

/// Long-format trajectory export: `agent,t,x,y,theta,n,d`.
pub fn write_trajectory_csv(path: &Path, traj: &TrajectorySet<f64>) -> Result<(), FileError> {
    write_atomic(path, |w| {
        writeln!(w, "agent,t,x,y,theta,n,d")?;
        for a in 0..traj.num_agents() {
            for t in 0..traj.num_steps() {
                let p = traj.pos(a, t);
                writeln!(
                    w,
                    "{a},{t},{},{},{},{},{}",
                    p.x,
                    p.y,
                    traj.heading(a, t),
                    traj.ncount(a, t),
                    traj.ndist(a, t)
                )?;
            }
        }
        Ok(())
    })
}

/// Summary batches: one header row naming each statistic, one row per vector.
pub fn write_summary_csv(
    path: &Path,
    labels: &[&str],
    batch: &[SummaryVector<f64>],
) -> Result<(), FileError> {
    write_atomic(path, |w| {
        writeln!(w, "{}", labels.join(","))?;
        for summary in batch {
            let row: Vec<String> = summary.values.iter().map(ToString::to_string).collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    })
}

/// Coverage curves of a recovery report: `param,alpha,coverage,band_lo,band_hi`.
pub fn write_coverage_csv(path: &Path, report: &RecoveryReport) -> Result<(), FileError> {
    write_atomic(path, |w| {
        writeln!(w, "param,alpha,coverage,band_lo,band_hi")?;
        for name in ParamName::ALL {
            for point in &report.param(name).coverage {
                writeln!(
                    w,
                    "{},{},{},{},{}",
                    name.label(),
                    point.alpha,
                    point.coverage,
                    point.band_lo,
                    point.band_hi
                )?;
            }
        }
        Ok(())
    })
}
