mod common;

use std::collections::BTreeSet;

use regmap::analysis::simple_underlying;
use regmap::{run_census, CensusConfig, CosetTable};

#[test]
fn low_index_search_matches_census_through_order_16() {
    let census = run_census(&CensusConfig::new(4)).unwrap();
    for k in 0..=4u32 {
        let level = census.level(k).unwrap();
        let found: BTreeSet<Vec<u8>> = common::low_index_normal(1 << k)
            .into_iter()
            .map(|rows| CosetTable::from_rows(rows).unwrap().canonicalize().unwrap().key())
            .collect();
        let nodes: BTreeSet<Vec<u8>> = level.nodes.iter().map(|n| n.key.to_vec()).collect();
        assert_eq!(found, nodes, "all quotients of order 2^{k}");

        let proper: BTreeSet<String> = level.records.iter().map(|(_, r)| r.canonical_key_digest.clone()).collect();
        let oracle_proper: BTreeSet<String> = common::low_index_normal(1 << k)
            .into_iter()
            .filter(|rows| common::is_proper_brute(rows))
            .map(|rows| CosetTable::from_rows(rows).unwrap().canonicalize().unwrap().digest())
            .collect();
        assert_eq!(proper, oracle_proper, "proper maps of order 2^{k}");
    }
}

#[test]
fn order_8_quotients_match_explicit_groups() {
    let census = run_census(&CensusConfig::new(3)).unwrap();
    let nodes: BTreeSet<Vec<u8>> = census.levels[3].nodes.iter().map(|n| n.key.to_vec()).collect();
    assert_eq!(nodes, common::order_8_keys());
}

#[test]
fn standard_tables_are_already_canonical() {
    for rows in common::low_index_normal(8) {
        let t = CosetTable::from_rows(rows.clone()).unwrap();
        assert_eq!(t.canonicalize().unwrap().table().rows(), &rows[..]);
    }
}

#[test]
fn simple_underlying_graph_matches_brute_force() {
    let census = run_census(&CensusConfig::new(6)).unwrap();
    let mut checked = 0;
    for level in &census.levels {
        for (i, _) in &level.records {
            let t = level.nodes[*i].table().into_table();
            assert_eq!(simple_underlying(&t), common::simple_brute(&t));
            checked += 1;
        }
    }
    assert_eq!(checked, 39);
}
