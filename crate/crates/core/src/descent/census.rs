use std::collections::{BTreeMap, HashMap};
use std::hash::{Hash, Hasher};
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::module::{coinvariants, extend_by_values, schreier_module};
use super::store;
use crate::analysis::{analyze, is_proper};
use crate::coset::{CanonicalTable, CosetTable};
use crate::error::CensusError;
use crate::gf2::BitVec;

/// How far and where to run a census.
#[derive(Clone, Debug)]
pub struct CensusConfig {
    pub max_exp: u32,
    /// Directory for per-level files; `None` keeps everything in memory.
    pub out_dir: Option<PathBuf>,
    /// Load complete levels already present in `out_dir`.
    pub resume: bool,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    /// Stop, leaving the census incomplete, once a level would exceed this
    /// many nodes.
    pub max_level_nodes: usize,
    /// Stop before starting a level after this instant.
    pub deadline: Option<Instant>,
}

impl CensusConfig {
    pub fn new(max_exp: u32) -> CensusConfig {
        CensusConfig {
            max_exp,
            out_dir: None,
            resume: false,
            threads: None,
            max_level_nodes: usize::MAX,
            deadline: None,
        }
    }
}

/// One line of a census record file, for a proper map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub order_exp: u32,
    pub s_exp: u32,
    pub t_exp: u32,
    pub orientable: bool,
    pub euler_characteristic: i64,
    pub genus: u64,
    pub canonical_key_digest: String,
    pub parent_digest: String,
}

/// A quotient of Δ of order 2^k, stored by canonical key. `parent` indexes
/// the previous level; `functional` is the bit mask of the coinvariant
/// functional that produced it; `central` is the canonical label of the
/// generator of the kernel of the map to the parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StoredNode {
    pub key: Box<[u8]>,
    pub parent: u32,
    pub functional: u32,
    pub central: u32,
}

impl StoredNode {
    pub fn table(&self) -> CanonicalTable {
        CanonicalTable::from_key(&self.key).expect("census keys are canonical")
    }

    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(&self.key))
    }
}

#[derive(Clone, Debug, Default)]
pub struct Level {
    pub order_exp: u32,
    pub nodes: Vec<StoredNode>,
    /// Proper nodes: (node index, record), in node order.
    pub records: Vec<(usize, CensusRecord)>,
}

impl Level {
    pub fn proper_count(&self) -> usize {
        self.records.len()
    }

    /// Proper-map counts keyed by type exponents (s, t).
    pub fn type_counts(&self) -> BTreeMap<(u32, u32), usize> {
        let mut out = BTreeMap::new();
        for (_, r) in &self.records {
            *out.entry((r.s_exp, r.t_exp)).or_insert(0) += 1;
        }
        out
    }
}

/// All quotients of Δ of order 2^k for k up to `complete_through`.
#[derive(Clone, Debug, Default)]
pub struct Census {
    pub levels: Vec<Level>,
    pub requested: u32,
}

impl Census {
    /// Highest order exponent whose level is complete.
    pub fn complete_through(&self) -> u32 {
        self.levels.len() as u32 - 1
    }

    pub fn is_complete(&self) -> bool {
        self.complete_through() >= self.requested
    }

    pub fn level(&self, k: u32) -> Result<&Level, CensusError> {
        self.levels.get(k as usize).ok_or(CensusError::Incomplete(k))
    }

    pub fn records(&self) -> impl Iterator<Item = &CensusRecord> {
        self.levels.iter().flat_map(|l| l.records.iter().map(|(_, r)| r))
    }
}

fn root_level() -> Level {
    let table = CosetTable::from_rows(vec![[0, 0, 0]]).unwrap().canonicalize().unwrap();
    Level {
        order_exp: 0,
        nodes: vec![StoredNode { key: table.key().into_boxed_slice(), parent: 0, functional: 0, central: 0 }],
        records: Vec::new(),
    }
}

/// Canonical children of one node, in functional order.
pub fn children(t: &CosetTable) -> Vec<(u32, CanonicalTable, u32)> {
    let m = schreier_module(t);
    let w = coinvariants(&m);
    let d = w.dim();
    assert!(d < 32, "coinvariant dimension {d} too large");
    let values: Vec<BitVec> = w.projection().rows().iter().map(|f| m.pullback(f)).collect();
    let mut out = Vec::with_capacity((1usize << d) - 1);
    for mask in 1u32..(1u32 << d) {
        let mut v = BitVec::zeros(m.symbol_count());
        for (k, g) in values.iter().enumerate() {
            if (mask >> k) & 1 == 1 {
                v.xor_assign(g);
            }
        }
        let e = extend_by_values(t, &m, &v);
        out.push((mask, e.table, e.central));
    }
    out
}

fn key_hash(key: &[u8]) -> u64 {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    key.hash(&mut h);
    h.finish()
}

fn record_for(order_exp: u32, node: &StoredNode, parent_digest: String) -> Option<CensusRecord> {
    let table = node.table();
    let t = table.table();
    if !is_proper(t) {
        return None;
    }
    let r = analyze(t).expect("proper census node");
    Some(CensusRecord {
        order_exp,
        s_exp: r.s_exp.expect("2-group element orders are powers of two"),
        t_exp: r.t_exp.expect("2-group element orders are powers of two"),
        orientable: r.orientable,
        euler_characteristic: r.euler,
        genus: r.genus,
        canonical_key_digest: node.digest(),
        parent_digest,
    })
}

/// Builds level k+1 from level k. Returns `None` when the node cap is hit.
fn next_level(prev: &Level, max_nodes: usize) -> Option<Level> {
    let k = prev.order_exp + 1;
    let mut nodes: Vec<StoredNode> = Vec::new();
    let mut index: HashMap<u64, Vec<u32>> = HashMap::new();
    let chunk = 4 * rayon::current_num_threads().max(1);
    for (base, group) in prev.nodes.chunks(chunk).enumerate() {
        let produced: Vec<Vec<(u32, CanonicalTable, u32)>> = group
            .par_iter()
            .map(|n| children(n.table().table()))
            .collect();
        for (offset, kids) in produced.into_iter().enumerate() {
            let parent = (base * chunk + offset) as u32;
            for (mask, table, central) in kids {
                let key = table.key();
                let slot = index.entry(key_hash(&key)).or_default();
                if slot.iter().any(|&i| *nodes[i as usize].key == *key) {
                    continue;
                }
                if nodes.len() >= max_nodes {
                    return None;
                }
                slot.push(nodes.len() as u32);
                nodes.push(StoredNode { key: key.into_boxed_slice(), parent, functional: mask, central });
            }
        }
    }
    let records: Vec<(usize, CensusRecord)> = nodes
        .par_iter()
        .enumerate()
        .filter_map(|(i, n)| {
            record_for(k, n, prev.nodes[n.parent as usize].digest()).map(|r| (i, r))
        })
        .collect();
    Some(Level { order_exp: k, nodes, records })
}

/// Runs the census level by level up to `config.max_exp`. Hitting a resource
/// limit returns the levels finished so far; check
/// [`Census::is_complete`].
pub fn run_census(config: &CensusConfig) -> Result<Census, CensusError> {
    match config.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CensusError::Format { path: String::new(), reason: e.to_string() })?;
            pool.install(|| run_inner(config))
        }
        None => run_inner(config),
    }
}

fn run_inner(config: &CensusConfig) -> Result<Census, CensusError> {
    let mut census = Census { levels: Vec::new(), requested: config.max_exp };
    if let Some(dir) = &config.out_dir {
        std::fs::create_dir_all(dir)?;
        if config.resume {
            census.levels = store::load_levels(dir, config.max_exp)?;
        }
    }
    if census.levels.is_empty() {
        let root = root_level();
        if let Some(dir) = &config.out_dir {
            store::write_level(dir, &root)?;
        }
        census.levels.push(root);
    }
    while census.complete_through() < config.max_exp {
        if config.deadline.is_some_and(|d| Instant::now() >= d) {
            break;
        }
        let Some(level) = next_level(census.levels.last().unwrap(), config.max_level_nodes) else {
            break;
        };
        if let Some(dir) = &config.out_dir {
            store::write_level(dir, &level)?;
        }
        census.levels.push(level);
    }
    if let Some(dir) = &config.out_dir {
        store::write_summary(dir, &census)?;
    }
    Ok(census)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_two_level() {
        let c = run_census(&CensusConfig::new(1)).unwrap();
        assert!(c.is_complete());
        assert_eq!(c.levels[1].nodes.len(), 7);
        assert_eq!(c.levels[1].proper_count(), 0);
    }

    #[test]
    fn node_cap_leaves_census_incomplete() {
        // Level sizes run 1, 7, 7, 7, 9, 13, ...
        let mut cfg = CensusConfig::new(6);
        cfg.max_level_nodes = 10;
        let c = run_census(&cfg).unwrap();
        assert!(!c.is_complete());
        assert_eq!(c.complete_through(), 4);
        assert!(matches!(c.level(5), Err(CensusError::Incomplete(5))));
    }

    #[test]
    fn every_node_has_a_parent_one_level_down() {
        let c = run_census(&CensusConfig::new(4)).unwrap();
        for k in 1..=4 {
            let (prev, level) = (&c.levels[k - 1], &c.levels[k]);
            for n in &level.nodes {
                let parent = &prev.nodes[n.parent as usize];
                let q = n.table().table().quotient_by_central_involution(n.central as usize).unwrap();
                assert_eq!(q.canonicalize().unwrap().key(), &*parent.key);
            }
        }
    }
}
