mod common;

use std::collections::BTreeSet;

use common::{brute_force_classes, brute_force_girth};
use pantslab::enumerate::{enumerate_keyed, DEFAULT_CAP};
use pantslab::graph::Girth;
use pantslab::random::{random_cubic, random_tree, rng};
use pantslab::{canonicalize, Exec};

fn strata() -> Vec<(usize, usize)> {
    let mut s: Vec<_> = (4..=9).map(|n| (0, n)).collect();
    s.extend([(2, 0), (3, 0), (1, 1), (1, 2), (1, 3), (2, 1)]);
    s
}

#[test]
fn enumeration_matches_brute_force() {
    for (g, n) in strata() {
        let brute = brute_force_classes(g, n);
        let ours = enumerate_keyed(g, n, DEFAULT_CAP, Exec::Parallel).unwrap();
        assert_eq!(brute.len(), ours.len(), "({g}, {n})");
        let keys: BTreeSet<_> = brute.values().map(canonicalize).collect();
        assert_eq!(keys.len(), brute.len(), "key collision in ({g}, {n})");
        assert!(keys.iter().all(|k| ours.contains_key(k)), "({g}, {n})");
    }
}

#[test]
fn girth_matches_brute_force() {
    let mut r = rng(3);
    let mut graphs: Vec<_> = (2..40).map(|g| random_cubic(g, &mut r)).collect();
    graphs.extend((3..30).map(|n| random_tree(n, &mut r)));
    graphs.extend(brute_force_classes(3, 0).into_values());
    graphs.extend(brute_force_classes(1, 3).into_values());
    for g in &graphs {
        let expect = brute_force_girth(g);
        let got = match g.girth() {
            Girth::Finite(k) => Some(k),
            Girth::Infinite => None,
        };
        assert_eq!(got, expect, "{g:?}");
    }
}
