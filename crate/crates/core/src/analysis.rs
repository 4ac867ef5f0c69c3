//! Map-theoretic invariants of a regular table.

use serde::Serialize;

use crate::coset::CosetTable;
use crate::error::TableError;
use crate::word::{Generator, Word};

/// Combinatorial data of one regular map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularMapRecord {
    pub flags: usize,
    /// Face length (order of ρ0ρ1).
    pub face_length: u64,
    /// Vertex valency (order of ρ1ρ2).
    pub valency: u64,
    /// log2 of the face length, when it is a power of two.
    pub s_exp: Option<u32>,
    /// log2 of the valency, when it is a power of two.
    pub t_exp: Option<u32>,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler: i64,
    pub orientable: bool,
    /// Orientable genus, or crosscap number for nonorientable maps.
    pub genus: u64,
    pub simple_underlying: bool,
}

fn log2_exact(x: u64) -> Option<u32> {
    x.is_power_of_two().then(|| x.trailing_zeros())
}

fn word(indices: &[u8]) -> Word {
    Word::from_indices(indices)
}

/// Checks that ρ0, ρ1, ρ2 act nontrivially and ρ0 ≠ ρ2.
pub fn check_proper(t: &CosetTable) -> Result<(), TableError> {
    for g in Generator::ALL {
        if t.entry(0, g) == 0 {
            return Err(TableError::NotProper(format!("{g} is trivial")));
        }
    }
    if t.entry(0, Generator::R0) == t.entry(0, Generator::R2) {
        return Err(TableError::NotProper("r0 equals r2".into()));
    }
    Ok(())
}

pub fn is_proper(t: &CosetTable) -> bool {
    check_proper(t).is_ok()
}

/// Orders of ρ0ρ1 and ρ1ρ2.
pub fn type_orders(t: &CosetTable) -> Result<(u64, u64), TableError> {
    Ok((t.element_order(&word(&[0, 1]))?, t.element_order(&word(&[1, 2]))?))
}

pub fn is_orientable(t: &CosetTable) -> bool {
    2 * t.subgroup_closure(&[word(&[0, 1]), word(&[1, 2])]).len() == t.len()
}

/// Two-colours the flag graph; a regular map is orientable exactly when
/// this succeeds.
pub fn flag_graph_bipartite(t: &CosetTable) -> bool {
    let n = t.len();
    let mut colour = vec![u8::MAX; n];
    let mut stack = Vec::new();
    for s in 0..n {
        if colour[s] != u8::MAX {
            continue;
        }
        colour[s] = 0;
        stack.push(s);
        while let Some(c) = stack.pop() {
            for g in Generator::ALL {
                let d = t.entry(c, g);
                if colour[d] == u8::MAX {
                    colour[d] = colour[c] ^ 1;
                    stack.push(d);
                } else if colour[d] == colour[c] {
                    return false;
                }
            }
        }
    }
    true
}

/// True iff the underlying graph has no loops and no parallel edges.
pub fn simple_underlying(t: &CosetTable) -> bool {
    let (vertex, _) = t.orbit_labels(&[Generator::R1, Generator::R2]);
    let (edge, edges) = t.orbit_labels(&[Generator::R0, Generator::R2]);
    let mut ends: Vec<Option<(u32, u32)>> = vec![None; edges];
    for c in 0..t.len() {
        let e = edge[c] as usize;
        if ends[e].is_some() {
            continue;
        }
        let a = vertex[c];
        let b = vertex[t.entry(c, Generator::R0)];
        if a == b {
            return false;
        }
        ends[e] = Some((a.min(b), a.max(b)));
    }
    let mut pairs: Vec<(u32, u32)> = ends.into_iter().flatten().collect();
    pairs.sort_unstable();
    pairs.windows(2).all(|w| w[0] != w[1])
}

/// Frattini rank d: the Frattini subgroup is generated as a normal subgroup
/// by the squares (ρiρj)² and commutators [ρi, ρj], and has index 2^d.
pub fn frattini_rank(t: &CosetTable) -> u32 {
    let mut gens = Vec::new();
    for (i, j) in [(0u8, 1u8), (0, 2), (1, 2)] {
        gens.push(word(&[i, j]).pow(2));
        gens.push(Word::commutator(&word(&[i]), &word(&[j])));
    }
    let phi = t.normal_closure(&gens).len();
    (t.len() / phi).trailing_zeros()
}

/// Number of homomorphisms onto GF(2) compatible with the table, as the
/// count of sign patterns e ∈ GF(2)³ for which "ρi flips parity iff e_i"
/// is consistent. For a regular table of a 2-group this is 2^d.
pub fn homomorphisms_to_z2(t: &CosetTable) -> usize {
    (0u8..8)
        .filter(|&e| {
            let mut parity = vec![u8::MAX; t.len()];
            parity[0] = 0;
            let mut stack = vec![0usize];
            while let Some(c) = stack.pop() {
                for g in Generator::ALL {
                    let d = t.entry(c, g);
                    let p = parity[c] ^ ((e >> g.index()) & 1);
                    if parity[d] == u8::MAX {
                        parity[d] = p;
                        stack.push(d);
                    } else if parity[d] != p {
                        return false;
                    }
                }
            }
            true
        })
        .count()
}

/// Analyzes a proper regular table.
pub fn analyze(t: &CosetTable) -> Result<RegularMapRecord, TableError> {
    check_proper(t)?;
    let (face_length, valency) = type_orders(t)?;
    let vertices = t.orbit_count(&[Generator::R1, Generator::R2]);
    let edges = t.orbit_count(&[Generator::R0, Generator::R2]);
    let faces = t.orbit_count(&[Generator::R0, Generator::R1]);
    let euler = vertices as i64 - edges as i64 + faces as i64;
    let orientable = is_orientable(t);
    let genus = if orientable { (2 - euler) / 2 } else { 2 - euler };
    Ok(RegularMapRecord {
        flags: t.len(),
        face_length,
        valency,
        s_exp: log2_exact(face_length),
        t_exp: log2_exact(valency),
        vertices,
        edges,
        faces,
        euler,
        orientable,
        genus: genus as u64,
        simple_underlying: simple_underlying(t),
    })
}

/// The dual map: ρ0 and ρ2 exchange roles.
pub fn dual(t: &CosetTable) -> CosetTable {
    t.dual()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coset::{todd_coxeter, EnumerationLimits};
    use crate::presentation::preset;

    fn ea8() -> CosetTable {
        CosetTable::from_rows((0..8u32).map(|c| [c ^ 1, c ^ 2, c ^ 4]).collect()).unwrap()
    }

    fn enumerate(family: &str, params: &[u32]) -> CosetTable {
        todd_coxeter(&preset(family, params).unwrap(), &[], &EnumerationLimits::default()).unwrap()
    }

    #[test]
    fn elementary_abelian_map() {
        let r = analyze(&ea8()).unwrap();
        assert_eq!((r.vertices, r.edges, r.faces, r.euler), (2, 2, 2, 2));
        assert!(r.orientable);
        assert_eq!(r.genus, 0);
        assert_eq!((r.s_exp, r.t_exp), (Some(1), Some(1)));
        assert!(!r.simple_underlying);
        assert_eq!(frattini_rank(&ea8()), 3);
        assert_eq!(homomorphisms_to_z2(&ea8()), 8);
    }

    #[test]
    fn dihedral_map() {
        let t = enumerate("dihedral", &[4]);
        let r = analyze(&t).unwrap();
        assert_eq!((r.s_exp, r.t_exp), (Some(1), Some(3)));
        assert_eq!(r.faces, 4);
        assert_eq!(frattini_rank(&t), 2);
    }

    #[test]
    fn dual_swaps_type() {
        let t = enumerate("dihedral", &[5]);
        let r = analyze(&t).unwrap();
        let d = analyze(&dual(&t)).unwrap();
        assert_eq!((r.s_exp, r.t_exp), (d.t_exp, d.s_exp));
        assert_eq!((r.euler, r.orientable, r.genus), (d.euler, d.orientable, d.genus));
        assert_eq!(dual(&dual(&t)).canonicalize().unwrap(), t.canonicalize().unwrap());
    }

    #[test]
    fn improper_rejected() {
        let t = CosetTable::from_rows(vec![[1, 0, 1], [0, 1, 0]]).unwrap();
        assert!(matches!(analyze(&t), Err(TableError::NotProper(_))));
    }

    #[test]
    fn nonorientable_genus_is_crosscap_number() {
        // ρ0 = (ρ1ρ2)² lies in the rotation subgroup.
        let p = crate::presentation::Presentation::from_strs(&["(r0 r1)^2", "(r1 r2)^4", "r0 (r1 r2)^2"], None).unwrap();
        let t = todd_coxeter(&p, &[], &EnumerationLimits::default()).unwrap();
        let r = analyze(&t).unwrap();
        assert!(!r.orientable);
        assert!(!flag_graph_bipartite(&t));
        assert_eq!(r.genus as i64, 2 - r.euler);
    }
}
