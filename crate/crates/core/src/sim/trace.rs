use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::scalar::Scalar;

use super::{Side, UnitState};

/// One unit at the end of one tick. Serialized one JSON object per line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub tick: u64,
    pub id: usize,
    pub side: Side,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub hp: f64,
    pub cooldown: f64,
}

impl TraceRecord {
    pub fn from_unit<T: Scalar>(tick: u64, u: &UnitState<T>) -> Self {
        Self {
            tick,
            id: u.id,
            side: u.side,
            x: u.position.x.to_f64_lossy(),
            y: u.position.y.to_f64_lossy(),
            z: u.position.z.to_f64_lossy(),
            hp: u.hitpoints.to_f64_lossy(),
            cooldown: u.cooldown_remaining.to_f64_lossy(),
        }
    }
}

pub fn write_trace_jsonl<W: Write>(mut out: W, records: &[TraceRecord]) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_trace_jsonl<R: BufRead>(input: R) -> Result<Vec<TraceRecord>> {
    let mut out = Vec::new();
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line)?);
    }
    Ok(out)
}
