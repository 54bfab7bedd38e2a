mod common;

use std::collections::BTreeMap;

use common::{definite_graph, to_graph, to_graph_ordered, unmarked, vertex_id};
use proptest::prelude::*;
use slcsurf_core::criteria::adjunction_correction;
use slcsurf_core::cycles::{fundamental_cycle, hat_transform, semi_numerical_cycle, COEFFICIENT_CAP};
use slcsurf_core::divisor::q;
use slcsurf_core::{Error, ExceptionalGraph, Rational};
use slcsurf_oracle::{all_valid_cycles, brute_force_min_cycle, graph_corpus};

const BOUND: u64 = 8;

fn expect_matches_oracle(found: &[u64], oracle: Option<Vec<u64>>) {
    if found.iter().all(|&c| c <= BOUND) {
        assert_eq!(Some(found.to_vec()), oracle);
    } else {
        // Every valid vector dominates the minimum, so none fits in the box.
        assert_eq!(oracle, None);
    }
}

#[test]
fn semi_numerical_cycles_match_brute_force_on_corpus() {
    let corpus = graph_corpus(5, -4, 2, 500, 0x5eed);
    assert!(corpus.len() >= 500, "corpus has {} graphs", corpus.len());
    for p in &corpus {
        let g = to_graph(p);
        let z = semi_numerical_cycle(&g).unwrap();
        let offset: Vec<i64> = p.marks.iter().map(|&m| m as i64).collect();
        let nonzero = offset.iter().all(|&m| m == 0);
        expect_matches_oracle(&z.coefficients(), brute_force_min_cycle(&p.matrix(), &offset, BOUND, nonzero));
    }
}

#[test]
fn minimum_is_componentwise_least() {
    for p in graph_corpus(4, -3, 1, 60, 7) {
        let z = semi_numerical_cycle(&to_graph(&p)).unwrap().coefficients();
        let offset: Vec<i64> = p.marks.iter().map(|&m| m as i64).collect();
        let nonzero = offset.iter().all(|&m| m == 0);
        for a in all_valid_cycles(&p.matrix(), &offset, 6, nonzero) {
            assert!(a.iter().zip(&z).all(|(x, y)| x >= y), "{a:?} does not dominate {z:?}");
        }
    }
}

#[test]
fn dh_cycles_have_doubled_chain() {
    for n in 2..=5 {
        let g = ExceptionalGraph::dh(&vec![-2; n]).unwrap();
        let z = semi_numerical_cycle(&g).unwrap();
        let mut expected = vec![2; n];
        expected.extend([1, 1]);
        assert_eq!(z.coefficients(), expected);
    }
}

#[test]
fn c2_single_vertex_doubles() {
    let g = ExceptionalGraph::c2(&[-1]).unwrap();
    assert_eq!(semi_numerical_cycle(&g).unwrap().to_string(), "2E1");
}

#[test]
fn error_cases() {
    let indefinite = ExceptionalGraph::chain(&[-1, -1]).unwrap();
    assert_eq!(semi_numerical_cycle(&indefinite), Err(Error::NotNegativeDefinite));
    let two = ExceptionalGraph::builder().vertex("A", -2).vertex("B", -2).build().unwrap();
    assert_eq!(fundamental_cycle(&two), Err(Error::Disconnected));
    assert_eq!(COEFFICIENT_CAP, 1_000_000);
}

fn incidence_map(g: &ExceptionalGraph, inc: &[u64]) -> BTreeMap<String, u64> {
    (0..g.len()).map(|i| (vertex_id(i), inc[i])).collect()
}

fn rational_map(m: &BTreeMap<String, u64>) -> BTreeMap<String, Rational> {
    m.iter().map(|(k, &v)| (k.clone(), q(v as i64))).collect()
}

proptest! {
    #[test]
    fn fundamental_cycle_matches_brute_force(p in definite_graph(5, -4, 0)) {
        let z = fundamental_cycle(&to_graph(&p)).unwrap();
        let zero = vec![0; p.marks.len()];
        expect_matches_oracle(&z.coefficients(), brute_force_min_cycle(&p.matrix(), &zero, BOUND, true));
    }

    #[test]
    fn hat_transform_matches_brute_force(p in definite_graph(5, -4, 0), inc in prop::collection::vec(0u64..3, 5)) {
        let g = to_graph(&p);
        let hat = hat_transform(&g, &incidence_map(&g, &inc)).unwrap();
        let offset: Vec<i64> = inc[..g.len()].iter().map(|&c| c as i64).collect();
        expect_matches_oracle(&hat.coefficients(), brute_force_min_cycle(&p.matrix(), &offset, BOUND, false));
    }

    #[test]
    fn cycles_do_not_depend_on_vertex_order(p in definite_graph(6, -4, 2), seed in any::<u64>()) {
        let n = p.self_intersections.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed | 1;
        for i in (1..n).rev() {
            s ^= s << 13; s ^= s >> 7; s ^= s << 17;
            perm.swap(i, (s % (i as u64 + 1)) as usize);
        }
        let a = semi_numerical_cycle(&to_graph(&p)).unwrap();
        let b = semi_numerical_cycle(&to_graph_ordered(&p, &perm)).unwrap();
        for i in 0..n {
            prop_assert_eq!(a.coefficient(&vertex_id(i)), b.coefficient(&vertex_id(i)));
        }
    }

    #[test]
    fn hat_dominates_pullback(p in definite_graph(6, -4, 0), inc in prop::collection::vec(0u64..4, 6)) {
        let g = to_graph(&p);
        let m = incidence_map(&g, &inc);
        let hat = hat_transform(&g, &m).unwrap();
        let star = g.divisor_vector(&g.numerical_pullback(&rational_map(&m)).unwrap()).unwrap();
        for (h, s) in hat.coefficients().iter().zip(&star) {
            prop_assert!(&q(*h as i64) >= s);
        }
        if star.iter().all(|s| s.is_integer()) {
            let star_int: Vec<u64> = star.iter().map(|s| s.to_integer().try_into().unwrap()).collect();
            prop_assert_eq!(hat.coefficients(), star_int);
        }
    }

    /// Multiplying the incidence by `|det M|` makes the pullback integral.
    #[test]
    fn cartier_inputs_have_hat_equal_pullback(p in definite_graph(5, -4, 0), inc in prop::collection::vec(0u64..3, 5)) {
        let g = to_graph(&p);
        let det: u64 = g.determinant().unwrap().try_into().unwrap();
        let scaled: Vec<u64> = inc.iter().map(|c| c * det).collect();
        let m = incidence_map(&g, &scaled);
        let hat = hat_transform(&g, &m).unwrap();
        let star = g.numerical_pullback(&rational_map(&m)).unwrap();
        prop_assert_eq!(hat.to_divisor(), star.clone());

        let lambda = g.codiscrepancy().unwrap();
        let adj = adjunction_correction(&g, &lambda, &hat, &star).unwrap();
        prop_assert_eq!(adj.value, q(0));
        prop_assert!(adj.difference_nonpositive);
    }

    #[test]
    fn semi_numerical_cycle_satisfies_inequalities(p in definite_graph(7, -5, 2)) {
        let g = to_graph(&p);
        let z = semi_numerical_cycle(&g).unwrap();
        let offset: Vec<i64> = p.marks.iter().map(|&m| m as i64).collect();
        prop_assert!(z.products(&g, &offset).iter().all(|&x| x <= 0));
        prop_assert!(!z.is_zero());
    }

    #[test]
    fn fundamental_cycle_is_semi_numerical_without_marks(p in definite_graph(6, -4, 0)) {
        let g = to_graph(&unmarked(p));
        prop_assert_eq!(fundamental_cycle(&g).unwrap(), semi_numerical_cycle(&g).unwrap());
    }
}
