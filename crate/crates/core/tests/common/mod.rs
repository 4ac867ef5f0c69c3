//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use regmap::{CosetTable, Word};

const UNDEF: u32 = u32::MAX;

/// Low-index search for normal subgroups of index `m` in
/// ⟨ρ0, ρ1, ρ2 | ρi², (ρ0ρ2)²⟩.
///
/// Tables are built in standard order (first undefined entry in row-major
/// order, new cosets numbered by first appearance), so each subgroup shows
/// up exactly once. Regular tables have every column either trivial or
/// fixed-point-free, which prunes the search. Survivors are filtered by a
/// brute-force regularity test.
pub fn low_index_normal(m: usize) -> Vec<Vec<[u32; 3]>> {
    let mut rows = vec![[UNDEF; 3]; m];
    let mut out = Vec::new();
    search(&mut rows, 1, m, &mut out);
    out
}

fn search(rows: &mut Vec<[u32; 3]>, used: usize, m: usize, out: &mut Vec<Vec<[u32; 3]>>) {
    let next = (0..used).flat_map(|c| (0..3).map(move |i| (c, i))).find(|&(c, i)| rows[c][i] == UNDEF);
    let Some((c, i)) = next else {
        if used == m && is_regular_brute(rows) {
            out.push(rows.clone());
        }
        return;
    };
    let mut targets: Vec<usize> = (c..used).filter(|&d| rows[d][i] == UNDEF).collect();
    if used < m {
        targets.push(used);
    }
    for d in targets {
        rows[c][i] = d as u32;
        rows[d][i] = c as u32;
        if consistent(rows) {
            search(rows, used.max(d + 1), m, out);
        }
        rows[c][i] = UNDEF;
        rows[d][i] = UNDEF;
    }
}

fn consistent(rows: &[[u32; 3]]) -> bool {
    for i in 0..3 {
        let mut fixed = false;
        let mut moved = false;
        for (c, r) in rows.iter().enumerate() {
            match r[i] {
                UNDEF => {}
                d if d as usize == c => fixed = true,
                _ => moved = true,
            }
        }
        if fixed && moved {
            return false;
        }
    }
    let step = |c: u32, i: usize| if c == UNDEF { UNDEF } else { rows[c as usize][i] };
    let (mut fixed, mut moved) = (false, false);
    for c in 0..rows.len() as u32 {
        let x = step(step(c, 0), 2);
        if x == UNDEF {
            continue;
        }
        if x == c {
            fixed = true;
        } else {
            moved = true;
        }
        let y = step(step(x, 0), 2);
        if y != UNDEF && y != c {
            return false;
        }
    }
    !(fixed && moved)
}

/// Every coset c admits an automorphism of the table sending 0 to c.
pub fn is_regular_brute(rows: &[[u32; 3]]) -> bool {
    let n = rows.len();
    (0..n).all(|c| {
        let mut map = vec![UNDEF; n];
        map[0] = c as u32;
        let mut stack = vec![0usize];
        while let Some(x) = stack.pop() {
            for i in 0..3 {
                let y = rows[x][i] as usize;
                let fy = rows[map[x] as usize][i];
                if map[y] == UNDEF {
                    map[y] = fy;
                    stack.push(y);
                } else if map[y] != fy {
                    return false;
                }
            }
        }
        true
    })
}

/// Brute-force properness: all generators nontrivial and ρ0 ≠ ρ2.
pub fn is_proper_brute(rows: &[[u32; 3]]) -> bool {
    rows[0][0] != 0 && rows[0][1] != 0 && rows[0][2] != 0 && rows[0][0] != rows[0][2]
}

/// The five groups of order 8 as multiplication tables over 0..8.
pub fn groups_of_order_8() -> Vec<(&'static str, Vec<Vec<usize>>)> {
    let table = |f: &dyn Fn(usize, usize) -> usize| -> Vec<Vec<usize>> {
        (0..8).map(|a| (0..8).map(|b| f(a, b)).collect()).collect()
    };
    // Z4 x Z2: a = (x, y) packed as x + 4y.
    let z4z2 = table(&|a, b| ((a % 4 + b % 4) % 4) + 4 * ((a / 4 + b / 4) % 2));
    // D8: r^k s^e packed as k + 4e.
    let d8 = table(&|a, b| {
        let (k1, e1, k2, e2) = (a % 4, a / 4, b % 4, b / 4);
        let k = if e1 == 0 { (k1 + k2) % 4 } else { (k1 + 4 - k2) % 4 };
        k + 4 * (e1 ^ e2)
    });
    // Q8 as ±1, ±i, ±j, ±k: index = 2 * unit + sign.
    let q8 = table(&|a, b| {
        let (u, sa, v, sb) = (a / 2, a % 2, b / 2, b % 2);
        let (w, s) = quat(u, v);
        2 * w + (sa ^ sb ^ s)
    });
    vec![
        ("Z2^3", table(&|a, b| a ^ b)),
        ("Z4xZ2", z4z2),
        ("Z8", table(&|a, b| (a + b) % 8)),
        ("D8", d8),
        ("Q8", q8),
    ]
}

fn quat(u: usize, v: usize) -> (usize, usize) {
    // Units 0..4 = 1, i, j, k; returns (unit, sign bit).
    match (u, v) {
        (0, x) | (x, 0) => (x, 0),
        (a, b) if a == b => (0, 1),
        (1, 2) => (3, 0),
        (2, 3) => (1, 0),
        (3, 1) => (2, 0),
        (2, 1) => (3, 1),
        (3, 2) => (1, 1),
        (1, 3) => (2, 1),
        _ => unreachable!(),
    }
}

/// Canonical keys of every regular table of order 8 obtained from a
/// generating triple of elements of order ≤ 2 with (ρ0ρ2)² = 1.
pub fn order_8_keys() -> BTreeSet<Vec<u8>> {
    let mut keys = BTreeSet::new();
    for (_, mul) in groups_of_order_8() {
        let small: Vec<usize> = (0..8).filter(|&g| mul[g][g] == 0).collect();
        for &a in &small {
            for &b in &small {
                for &c in &small {
                    let ac = mul[a][c];
                    if mul[ac][ac] != 0 {
                        continue;
                    }
                    let mut seen = HashSet::from([0usize]);
                    let mut stack = vec![0usize];
                    while let Some(x) = stack.pop() {
                        for g in [a, b, c] {
                            if seen.insert(mul[x][g]) {
                                stack.push(mul[x][g]);
                            }
                        }
                    }
                    if seen.len() != 8 {
                        continue;
                    }
                    let rows = (0..8).map(|x| [a, b, c].map(|g| mul[x][g] as u32)).collect();
                    let t = CosetTable::from_rows(rows).unwrap();
                    keys.insert(t.canonicalize().unwrap().key());
                }
            }
        }
    }
    keys
}

fn closure(t: &CosetTable, start: usize, gens: &[usize]) -> BTreeSet<usize> {
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for &g in gens {
            let y = t.rows()[x][g] as usize;
            if seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen
}

/// Simple underlying graph, by listing each edge as a pair of flag sets.
pub fn simple_brute(t: &CosetTable) -> bool {
    let mut edges = BTreeSet::new();
    let mut edge_ends = Vec::new();
    for c in 0..t.len() {
        let e = closure(t, c, &[0, 2]);
        if !edges.insert(e) {
            continue;
        }
        let a = closure(t, c, &[1, 2]);
        let b = closure(t, t.rows()[c][0] as usize, &[1, 2]);
        if a == b {
            return false;
        }
        edge_ends.push(if a < b { (a, b) } else { (b, a) });
    }
    let distinct: BTreeSet<_> = edge_ends.iter().collect();
    distinct.len() == edge_ends.len()
}

/// Order of the element a word represents, by repeated tracing from 0.
pub fn order_brute(t: &CosetTable, w: &Word) -> u64 {
    let mut x = t.trace(0, w);
    let mut k = 1;
    while x != 0 {
        x = t.trace(x, w);
        k += 1;
    }
    k
}

/// Per-map structural checks over a census, returning one message per
/// violation and the number of proper maps examined.
pub fn census_property_violations(census: &regmap::Census) -> (Vec<String>, usize) {
    use regmap::analysis::analyze;
    use regmap::verify::{lemma42_quotient, verify_lemma31};

    let delta = regmap::preset("delta", &[]).unwrap();
    let mut bad = Vec::new();
    let mut seen = 0;
    for (k, level) in census.levels.iter().enumerate() {
        for (idx, node) in level.nodes.iter().enumerate() {
            let tag = format!("2^{k} node {idx}");
            let t = node.table().into_table();
            for c in 0..t.len() {
                for i in 0..3 {
                    if t.rows()[t.rows()[c][i] as usize][i] as usize != c {
                        bad.push(format!("{tag}: column {i} not involutory at {c}"));
                    }
                }
            }
            if !t.satisfies(&delta) {
                bad.push(format!("{tag}: relator fails"));
            }
            let canon = t.canonicalize().unwrap();
            if canon.table().canonicalize().unwrap() != canon {
                bad.push(format!("{tag}: canonical form not idempotent"));
            }
            if t.dual().dual() != t {
                bad.push(format!("{tag}: dual is not an involution"));
            }
            if k > 0 {
                let q = t.quotient_by_central_involution(node.central as usize).unwrap();
                let parent = &census.levels[k - 1].nodes[node.parent as usize];
                if q.canonicalize().unwrap().key() != *parent.key {
                    bad.push(format!("{tag}: parent recovery"));
                }
            }
        }
        for (idx, rec) in &level.records {
            seen += 1;
            let tag = format!("2^{k} map {idx}");
            let t = level.nodes[*idx].table().into_table();
            let r = analyze(&t).unwrap();
            if r.vertices as i64 - r.edges as i64 + r.faces as i64 != rec.euler_characteristic || 4 * r.edges != t.len() {
                bad.push(format!("{tag}: Euler/flag count"));
            }
            let [l31, _] = verify_lemma31(&t);
            if !l31.passed() {
                bad.push(format!("{tag}: {l31}"));
            }
            let d = regmap::analysis::dual(&t);
            let rd = analyze(&d).unwrap();
            if (rd.s_exp, rd.t_exp) != (r.t_exp, r.s_exp) {
                bad.push(format!("{tag}: dual type"));
            }
            let (s, u, n) = (rec.s_exp, rec.t_exp, k as u32);
            if s + u > n && s >= 2 && u >= 2 && s + 2 <= n && u + 2 <= n {
                match lemma42_quotient(&t).map(|q| analyze(&q)) {
                    Ok(Ok(q)) if q.flags == t.len() / 2 && (q.s_exp, q.t_exp) == (Some(s - 1), Some(u - 1)) => {}
                    other => bad.push(format!("{tag}: quotient halving {other:?}")),
                }
            }
        }
    }
    (bad, seen)
}
