//! Frontier checkpoints for resumable searches.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! magic    8 bytes  "VRSEARCH"
//! version  u32      1
//! order    u32
//! mode     u8
//! iso      u8       0 none, 1 isomorphism
//! fill     u8       0 row-major, 1 column-major
//! reserved u8
//! records  u64
//! then per record:
//!   status  u8      0 pending, 1 done
//!   nodes   u64
//!   count   u64
//!   leaves  u64
//!   kept    u32     number of stored tables
//!   cells   order² bytes, 255 for an empty cell
//!   kept × order² bytes of completed tables
//! ```

use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use thiserror::Error;

use super::{FillOrder, IsoReduction, SearchSpec, SubtreeOutcome};

pub const CHECKPOINT_MAGIC: &[u8; 8] = b"VRSEARCH";
pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("checkpoint i/o: {0}")]
    Io(#[from] io::Error),
    #[error("not a search checkpoint (bad magic)")]
    BadMagic,
    #[error("unsupported checkpoint version {0}")]
    Version(u32),
    #[error("checkpoint was written for a different search")]
    Mismatch,
    #[error("checkpoint is truncated")]
    Truncated,
}

#[derive(Debug, Clone)]
pub(crate) struct Record {
    pub cells: Vec<u8>,
    pub done: Option<SubtreeOutcome>,
}

impl Record {
    pub fn pending(cells: Vec<u8>) -> Self {
        Record { cells, done: None }
    }
}

fn header(spec: &SearchSpec) -> [u8; 4] {
    [
        spec.mode.code(),
        (spec.iso_reduction == IsoReduction::Isomorphism) as u8,
        (spec.fill_order == FillOrder::ColumnMajor) as u8,
        0,
    ]
}

pub(crate) fn save(path: &Path, spec: &SearchSpec, records: &[Record]) -> Result<(), CheckpointError> {
    let mut buf = Vec::new();
    buf.extend_from_slice(CHECKPOINT_MAGIC);
    buf.extend_from_slice(&CHECKPOINT_VERSION.to_le_bytes());
    buf.extend_from_slice(&(spec.order as u32).to_le_bytes());
    buf.extend_from_slice(&header(spec));
    buf.extend_from_slice(&(records.len() as u64).to_le_bytes());
    for r in records {
        let empty = SubtreeOutcome::default();
        let d = r.done.as_ref().unwrap_or(&empty);
        buf.push(r.done.is_some() as u8);
        buf.extend_from_slice(&d.nodes.to_le_bytes());
        buf.extend_from_slice(&d.count.to_le_bytes());
        buf.extend_from_slice(&d.leaves.to_le_bytes());
        buf.extend_from_slice(&(d.witnesses.len() as u32).to_le_bytes());
        buf.extend_from_slice(&r.cells);
        for w in &d.witnesses {
            buf.extend_from_slice(w);
        }
    }
    let tmp = path.with_extension("tmp");
    let mut f = fs::File::create(&tmp)?;
    f.write_all(&buf)?;
    f.sync_all()?;
    fs::rename(tmp, path)?;
    Ok(())
}

struct Cursor<'a>(&'a [u8]);

impl Cursor<'_> {
    fn take(&mut self, k: usize) -> Result<&[u8], CheckpointError> {
        if self.0.len() < k {
            return Err(CheckpointError::Truncated);
        }
        let (head, rest) = self.0.split_at(k);
        self.0 = rest;
        Ok(head)
    }

    fn u32(&mut self) -> Result<u32, CheckpointError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn u64(&mut self) -> Result<u64, CheckpointError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
}

/// Reads a checkpoint if `path` exists; `None` when there is no file yet.
pub(crate) fn load(path: &Path, spec: &SearchSpec) -> Result<Option<Vec<Record>>, CheckpointError> {
    let mut bytes = Vec::new();
    match fs::File::open(path) {
        Ok(mut f) => f.read_to_end(&mut bytes)?,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let mut c = Cursor(&bytes);
    if c.take(8)? != CHECKPOINT_MAGIC {
        return Err(CheckpointError::BadMagic);
    }
    let version = c.u32()?;
    if version != CHECKPOINT_VERSION {
        return Err(CheckpointError::Version(version));
    }
    if c.u32()? as usize != spec.order || c.take(4)? != header(spec) {
        return Err(CheckpointError::Mismatch);
    }
    let n2 = spec.order * spec.order;
    let count = c.u64()?;
    let mut records = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let status = c.take(1)?[0];
        let nodes = c.u64()?;
        let found = c.u64()?;
        let leaves = c.u64()?;
        let kept = c.u32()? as usize;
        let cells = c.take(n2)?.to_vec();
        let witnesses = (0..kept)
            .map(|_| c.take(n2).map(<[u8]>::to_vec))
            .collect::<Result<Vec<_>, _>>()?;
        records.push(Record {
            cells,
            done: (status == 1).then_some(SubtreeOutcome {
                nodes,
                count: found,
                leaves,
                rejected: 0,
                witnesses,
            }),
        });
    }
    Ok(Some(records))
}
