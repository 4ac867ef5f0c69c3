//! On-disk census format.
//!
//! Each complete level k is a pair of files written via a temporary name
//! and renamed into place:
//! - `level-KK.jsonl`: one [`CensusRecord`] per proper node, in node order.
//! - `level-KK.nodes`: magic `RMNODES1`, a u32 node count, then per node
//!   u32 parent, u32 functional, u32 central, u32 key length and the key
//!   bytes (all integers little-endian).
//!
//! The nodes file is renamed last, so its presence marks a finished level.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use super::census::{Census, CensusRecord, Level, StoredNode};
use crate::error::CensusError;

const MAGIC: &[u8; 8] = b"RMNODES1";

fn nodes_path(dir: &Path, k: u32) -> PathBuf {
    dir.join(format!("level-{k:02}.nodes"))
}

fn records_path(dir: &Path, k: u32) -> PathBuf {
    dir.join(format!("level-{k:02}.jsonl"))
}

fn format_err(path: &Path, reason: impl Into<String>) -> CensusError {
    CensusError::Format { path: path.display().to_string(), reason: reason.into() }
}

fn write_atomic(path: &Path, write: impl FnOnce(&mut BufWriter<fs::File>) -> std::io::Result<()>) -> Result<(), CensusError> {
    let tmp = path.with_extension("tmp");
    {
        let mut w = BufWriter::new(fs::File::create(&tmp)?);
        write(&mut w)?;
        w.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn write_level(dir: &Path, level: &Level) -> Result<(), CensusError> {
    let k = level.order_exp;
    write_atomic(&records_path(dir, k), |w| {
        for (_, r) in &level.records {
            serde_json::to_writer(&mut *w, r)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    })?;
    write_atomic(&nodes_path(dir, k), |w| {
        w.write_all(MAGIC)?;
        w.write_all(&(level.nodes.len() as u32).to_le_bytes())?;
        for n in &level.nodes {
            for x in [n.parent, n.functional, n.central, n.key.len() as u32] {
                w.write_all(&x.to_le_bytes())?;
            }
            w.write_all(&n.key)?;
        }
        Ok(())
    })
}

fn read_u32(r: &mut impl Read) -> std::io::Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

pub fn read_level(dir: &Path, k: u32) -> Result<Level, CensusError> {
    let path = nodes_path(dir, k);
    let mut r = BufReader::new(fs::File::open(&path)?);
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(format_err(&path, "bad magic"));
    }
    let count = read_u32(&mut r)?;
    let mut nodes = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let parent = read_u32(&mut r)?;
        let functional = read_u32(&mut r)?;
        let central = read_u32(&mut r)?;
        let len = read_u32(&mut r)? as usize;
        let mut key = vec![0u8; len];
        r.read_exact(&mut key)?;
        nodes.push(StoredNode { key: key.into_boxed_slice(), parent, functional, central });
    }
    if r.read(&mut [0u8; 1])? != 0 {
        return Err(format_err(&path, "trailing bytes"));
    }

    let path = records_path(dir, k);
    let digests: std::collections::HashMap<String, usize> =
        nodes.iter().enumerate().map(|(i, n)| (n.digest(), i)).collect();
    let mut records = Vec::new();
    for (line_no, line) in BufReader::new(fs::File::open(&path)?).lines().enumerate() {
        let line = line?;
        let rec: CensusRecord = serde_json::from_str(&line)
            .map_err(|e| format_err(&path, format!("line {}: {e}", line_no + 1)))?;
        let Some(&i) = digests.get(&rec.canonical_key_digest) else {
            return Err(format_err(&path, format!("line {}: unknown node digest", line_no + 1)));
        };
        records.push((i, rec));
    }
    Ok(Level { order_exp: k, nodes, records })
}

/// Loads the consecutive run of complete levels 0, 1, … up to `max_exp`.
pub fn load_levels(dir: &Path, max_exp: u32) -> Result<Vec<Level>, CensusError> {
    let mut levels = Vec::new();
    for k in 0..=max_exp {
        if !nodes_path(dir, k).exists() {
            break;
        }
        levels.push(read_level(dir, k)?);
    }
    Ok(levels)
}

/// Loads a census written earlier, requiring every level through `max_exp`.
pub fn load_census(dir: &Path, max_exp: u32) -> Result<Census, CensusError> {
    let levels = load_levels(dir, max_exp)?;
    if levels.is_empty() {
        return Err(CensusError::Incomplete(0));
    }
    Ok(Census { levels, requested: max_exp })
}

/// Writes `summary.txt`: per order the node and proper-map counts, then the
/// proper-map counts per type.
pub fn write_summary(dir: &Path, census: &Census) -> Result<(), CensusError> {
    write_atomic(&dir.join("summary.txt"), |w| w.write_all(summary_text(census).as_bytes()))
}

pub fn summary_text(census: &Census) -> String {
    let mut s = String::from("order_exp,nodes,proper\n");
    for l in &census.levels {
        s.push_str(&format!("{},{},{}\n", l.order_exp, l.nodes.len(), l.proper_count()));
    }
    s.push_str("\norder_exp,s_exp,t_exp,count\n");
    for l in &census.levels {
        for ((a, b), c) in l.type_counts() {
            s.push_str(&format!("{},{a},{b},{c}\n", l.order_exp));
        }
    }
    if !census.is_complete() {
        s.push_str(&format!("\nincomplete: levels above {} were not finished\n", census.complete_through()));
    }
    s
}

/// Reads a counts file with header `order_exp,count`.
pub fn read_counts(path: &Path) -> Result<Vec<(u32, usize)>, CensusError> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    match lines.next() {
        Some(h) if h.replace(' ', "") == "order_exp,count" => {}
        _ => return Err(format_err(path, "expected header `order_exp,count`")),
    }
    lines
        .map(|l| {
            let (a, b) = l.split_once(',').ok_or_else(|| format_err(path, format!("bad row `{l}`")))?;
            let k = a.trim().parse().map_err(|_| format_err(path, format!("bad order_exp `{a}`")))?;
            let c = b.trim().parse().map_err(|_| format_err(path, format!("bad count `{b}`")))?;
            Ok((k, c))
        })
        .collect()
}

/// Outcome of comparing one order against the counts file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrosscheckRow {
    pub order_exp: u32,
    pub expected: usize,
    /// `None` when the census does not reach this order.
    pub found: Option<usize>,
}

impl CrosscheckRow {
    pub fn matches(&self) -> bool {
        self.found == Some(self.expected)
    }
}

pub fn crosscheck(census: &Census, counts: &[(u32, usize)]) -> Vec<CrosscheckRow> {
    counts
        .iter()
        .map(|&(k, expected)| CrosscheckRow {
            order_exp: k,
            expected,
            found: census.level(k).ok().map(Level::proper_count),
        })
        .collect()
}
