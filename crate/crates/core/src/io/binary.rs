//! Little-endian binary containers for trajectories and reference tables.
//!
//! Trajectory layout (version 1):
//!
//! ```text
//! "SWRM"  magic, 4 bytes
//! u16     format version (1)
//! u32×3   A, B, T
//! f64     dt
//! u64     seed
//! f64     X, row-major A×T×2 (per (a,t): x, y)
//! f64     Θ, row-major A×T
//! f64     D, row-major A×T
//! i32     N, row-major A×T
//! f64     beacon coordinates, B×2
//! f64×5   room: width, height, detection_range, world x, world y
//! i32     onset beacon assignment per agent (−1 = none)
//! u8      reassignment flag
//! ```
//!
//! Table layout (version 1): "SWTB", version, row count u64, parameter and
//! summary dimensions u32, the shared configuration (A, B, T, dt, template
//! seed, base seed, reassignment flag, κ, σ, room, prior shapes, beacons),
//! then the parameter block (rows×4 f64), summary block (rows×dim f64), and
//! seed block (rows×u64).

use std::io::{Read, Write};
use std::path::Path;

use crate::env::{BeaconSet, RoomConfig};
use crate::geometry::Vec2;
use crate::inference::{ReferenceTable, SimSetup};
use crate::observables::{TrajectoryMeta, TrajectorySet};
use crate::params::{FixedParams, GlobalParams, SimConfig};
use crate::prior::PriorSpec;
use crate::summaries::SummaryVector;

use super::{write_atomic, FileError};

pub const TRAJECTORY_MAGIC: &[u8; 4] = b"SWRM";
pub const TABLE_MAGIC: &[u8; 4] = b"SWTB";
const FORMAT_VERSION: u16 = 1;

struct Reader<R> {
    inner: R,
    offset: u64,
}

impl<R: Read> Reader<R> {
    fn new(inner: R) -> Self {
        Self { inner, offset: 0 }
    }

    fn read_exact(&mut self, buf: &mut [u8], context: &'static str) -> Result<(), FileError> {
        match self.inner.read_exact(buf) {
            Ok(()) => {
                self.offset += buf.len() as u64;
                Ok(())
            }
            Err(e) if e.kind() == std::io::ErrorKind::UnexpectedEof => Err(FileError::Truncated {
                offset: self.offset,
                context,
            }),
            Err(e) => Err(e.into()),
        }
    }

    fn u8(&mut self, context: &'static str) -> Result<u8, FileError> {
        let mut b = [0u8; 1];
        self.read_exact(&mut b, context)?;
        Ok(b[0])
    }

    fn u16(&mut self, context: &'static str) -> Result<u16, FileError> {
        let mut b = [0u8; 2];
        self.read_exact(&mut b, context)?;
        Ok(u16::from_le_bytes(b))
    }

    fn u32(&mut self, context: &'static str) -> Result<u32, FileError> {
        let mut b = [0u8; 4];
        self.read_exact(&mut b, context)?;
        Ok(u32::from_le_bytes(b))
    }

    fn u64(&mut self, context: &'static str) -> Result<u64, FileError> {
        let mut b = [0u8; 8];
        self.read_exact(&mut b, context)?;
        Ok(u64::from_le_bytes(b))
    }

    fn i32(&mut self, context: &'static str) -> Result<i32, FileError> {
        let mut b = [0u8; 4];
        self.read_exact(&mut b, context)?;
        Ok(i32::from_le_bytes(b))
    }

    fn f64(&mut self, context: &'static str) -> Result<f64, FileError> {
        let mut b = [0u8; 8];
        self.read_exact(&mut b, context)?;
        Ok(f64::from_le_bytes(b))
    }

    fn expect_eof(&mut self) -> Result<(), FileError> {
        let mut b = [0u8; 1];
        match self.inner.read(&mut b)? {
            0 => Ok(()),
            _ => Err(FileError::TrailingData {
                offset: self.offset,
            }),
        }
    }
}

fn w_u8<W: Write>(w: &mut W, v: u8) -> Result<(), FileError> {
    w.write_all(&[v]).map_err(Into::into)
}

fn w_u16<W: Write>(w: &mut W, v: u16) -> Result<(), FileError> {
    w.write_all(&v.to_le_bytes()).map_err(Into::into)
}

fn w_u32<W: Write>(w: &mut W, v: u32) -> Result<(), FileError> {
    w.write_all(&v.to_le_bytes()).map_err(Into::into)
}

fn w_u64<W: Write>(w: &mut W, v: u64) -> Result<(), FileError> {
    w.write_all(&v.to_le_bytes()).map_err(Into::into)
}

fn w_i32<W: Write>(w: &mut W, v: i32) -> Result<(), FileError> {
    w.write_all(&v.to_le_bytes()).map_err(Into::into)
}

fn w_f64<W: Write>(w: &mut W, v: f64) -> Result<(), FileError> {
    w.write_all(&v.to_le_bytes()).map_err(Into::into)
}

fn write_room<W: Write>(w: &mut W, room: &RoomConfig<f64>) -> Result<(), FileError> {
    w_f64(w, room.width)?;
    w_f64(w, room.height)?;
    w_f64(w, room.detection_range)?;
    w_f64(w, room.world_position.x)?;
    w_f64(w, room.world_position.y)
}

fn read_room<R: Read>(r: &mut Reader<R>) -> Result<RoomConfig<f64>, FileError> {
    Ok(RoomConfig {
        width: r.f64("room width")?,
        height: r.f64("room height")?,
        detection_range: r.f64("room detection range")?,
        world_position: Vec2::new(r.f64("room world x")?, r.f64("room world y")?),
    })
}

fn write_beacons<W: Write>(w: &mut W, beacons: &BeaconSet<f64>) -> Result<(), FileError> {
    for p in &beacons.positions {
        w_f64(w, p.x)?;
        w_f64(w, p.y)?;
    }
    Ok(())
}

fn read_beacons<R: Read>(r: &mut Reader<R>, count: usize) -> Result<BeaconSet<f64>, FileError> {
    let mut positions = Vec::with_capacity(count);
    for _ in 0..count {
        positions.push(Vec2::new(r.f64("beacon x")?, r.f64("beacon y")?));
    }
    Ok(BeaconSet::new(positions))
}

/// Encodes a trajectory to the bit-exact binary container.
pub fn write_trajectory(path: &Path, traj: &TrajectorySet<f64>) -> Result<(), FileError> {
    write_atomic(path, |w| {
        let sim = &traj.meta.sim;
        w.write_all(TRAJECTORY_MAGIC)?;
        w_u16(w, FORMAT_VERSION)?;
        w_u32(w, sim.num_agents as u32)?;
        w_u32(w, sim.num_beacons as u32)?;
        w_u32(w, sim.num_steps as u32)?;
        w_f64(w, sim.dt)?;
        w_u64(w, sim.seed)?;
        for p in &traj.positions {
            w_f64(w, p.x)?;
            w_f64(w, p.y)?;
        }
        for &h in &traj.headings {
            w_f64(w, h)?;
        }
        for &d in &traj.neighbor_dist {
            w_f64(w, d)?;
        }
        for &n in &traj.neighbor_count {
            w_i32(w, n as i32)?;
        }
        write_beacons(w, &traj.meta.beacons)?;
        write_room(w, &traj.meta.room)?;
        for assigned in &traj.meta.assigned {
            w_i32(w, assigned.map_or(-1, |b| b as i32))?;
        }
        w_u8(w, u8::from(sim.reassign_beacons))
    })
}

/// Decodes a trajectory container, rejecting wrong magic, unknown versions,
/// truncation, and trailing bytes.
pub fn read_trajectory(path: &Path) -> Result<TrajectorySet<f64>, FileError> {
    let file = std::fs::File::open(path)?;
    let mut r = Reader::new(std::io::BufReader::new(file));

    let mut magic = [0u8; 4];
    r.read_exact(&mut magic, "magic")?;
    if &magic != TRAJECTORY_MAGIC {
        return Err(FileError::BadMagic { expected: "SWRM" });
    }
    let version = r.u16("version")?;
    if version != FORMAT_VERSION {
        return Err(FileError::BadVersion(version));
    }
    let a_len = r.u32("agent count")? as usize;
    let b_len = r.u32("beacon count")? as usize;
    let t_len = r.u32("step count")? as usize;
    let dt = r.f64("dt")?;
    let seed = r.u64("seed")?;

    let cells = a_len * t_len;
    let mut positions = Vec::with_capacity(cells);
    for _ in 0..cells {
        positions.push(Vec2::new(r.f64("position x")?, r.f64("position y")?));
    }
    let mut headings = Vec::with_capacity(cells);
    for _ in 0..cells {
        headings.push(r.f64("heading")?);
    }
    let mut neighbor_dist = Vec::with_capacity(cells);
    for _ in 0..cells {
        neighbor_dist.push(r.f64("neighbor distance")?);
    }
    let mut neighbor_count = Vec::with_capacity(cells);
    for _ in 0..cells {
        neighbor_count.push(r.i32("neighbor count")? as u32);
    }
    let beacons = read_beacons(&mut r, b_len)?;
    let room = read_room(&mut r)?;
    let mut assigned = Vec::with_capacity(a_len);
    for _ in 0..a_len {
        let v = r.i32("beacon assignment")?;
        assigned.push((v >= 0).then_some(v as usize));
    }
    let reassign = r.u8("reassignment flag")? != 0;
    r.expect_eof()?;

    Ok(TrajectorySet {
        meta: TrajectoryMeta {
            sim: SimConfig {
                num_agents: a_len,
                num_beacons: b_len,
                num_steps: t_len,
                dt,
                seed,
                reassign_beacons: reassign,
            },
            room,
            beacons,
            assigned,
        },
        positions,
        headings,
        neighbor_count,
        neighbor_dist,
    })
}

/// Encodes a reference table (header + parameter, summary, and seed blocks).
pub fn write_table(path: &Path, table: &ReferenceTable) -> Result<(), FileError> {
    write_atomic(path, |w| {
        let sim = &table.setup.config;
        w.write_all(TABLE_MAGIC)?;
        w_u16(w, FORMAT_VERSION)?;
        w_u64(w, table.len() as u64)?;
        w_u32(w, 4)?;
        w_u32(w, table.summary_len() as u32)?;
        w_u32(w, sim.num_agents as u32)?;
        w_u32(w, sim.num_beacons as u32)?;
        w_u32(w, sim.num_steps as u32)?;
        w_f64(w, sim.dt)?;
        w_u64(w, sim.seed)?;
        w_u64(w, table.base_seed)?;
        w_u8(w, u8::from(sim.reassign_beacons))?;
        w_f64(w, table.setup.fixed.kappa)?;
        w_f64(w, table.setup.fixed.sigma)?;
        write_room(w, &table.setup.room)?;
        for v in table.prior.to_array() {
            w_f64(w, v)?;
        }
        write_beacons(w, &table.setup.beacons)?;
        for p in &table.params {
            for v in p.to_array() {
                w_f64(w, v)?;
            }
        }
        for s in &table.summaries {
            for &v in &s.values {
                w_f64(w, v)?;
            }
        }
        for &s in &table.seeds {
            w_u64(w, s)?;
        }
        Ok(())
    })
}

/// Decodes a reference table container.
pub fn read_table(path: &Path) -> Result<ReferenceTable, FileError> {
    let file = std::fs::File::open(path)?;
    let mut r = Reader::new(std::io::BufReader::new(file));

    let mut magic = [0u8; 4];
    r.read_exact(&mut magic, "magic")?;
    if &magic != TABLE_MAGIC {
        return Err(FileError::BadMagic { expected: "SWTB" });
    }
    let version = r.u16("version")?;
    if version != FORMAT_VERSION {
        return Err(FileError::BadVersion(version));
    }
    let rows = r.u64("row count")? as usize;
    let param_dim = r.u32("parameter dimension")? as usize;
    if param_dim != 4 {
        return Err(FileError::Config(format!(
            "expected 4 parameters per row, file declares {param_dim}"
        )));
    }
    let summary_dim = r.u32("summary dimension")? as usize;
    let a_len = r.u32("agent count")? as usize;
    let b_len = r.u32("beacon count")? as usize;
    let t_len = r.u32("step count")? as usize;
    let dt = r.f64("dt")?;
    let template_seed = r.u64("template seed")?;
    let base_seed = r.u64("base seed")?;
    let reassign = r.u8("reassignment flag")? != 0;
    let kappa = r.f64("kappa")?;
    let sigma = r.f64("sigma")?;
    let room = read_room(&mut r)?;
    let mut prior_values = [0.0; 8];
    for v in &mut prior_values {
        *v = r.f64("prior shape")?;
    }
    let beacons = read_beacons(&mut r, b_len)?;

    let mut params = Vec::with_capacity(rows);
    for _ in 0..rows {
        let mut a = [0.0; 4];
        for v in &mut a {
            *v = r.f64("parameter value")?;
        }
        params.push(GlobalParams::from_array(a));
    }
    let mut summaries = Vec::with_capacity(rows);
    for _ in 0..rows {
        let mut values = Vec::with_capacity(summary_dim);
        for _ in 0..summary_dim {
            values.push(r.f64("summary value")?);
        }
        summaries.push(SummaryVector { values });
    }
    let mut seeds = Vec::with_capacity(rows);
    for _ in 0..rows {
        seeds.push(r.u64("row seed")?);
    }
    r.expect_eof()?;

    Ok(ReferenceTable {
        prior: PriorSpec::from_array(prior_values),
        setup: SimSetup {
            fixed: FixedParams { kappa, sigma },
            room,
            beacons,
            config: SimConfig {
                num_agents: a_len,
                num_beacons: b_len,
                num_steps: t_len,
                dt,
                seed: template_seed,
                reassign_beacons: reassign,
            },
        },
        base_seed,
        params,
        summaries,
        seeds,
    })
}
