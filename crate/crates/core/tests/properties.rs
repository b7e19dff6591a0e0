use num_bigint::BigUint;
use proptest::prelude::*;

use twa_core::codecs::{
    bin_fixed, decode_automaton, decode_graph, decode_graph_prime, decode_quaternary, encode_automaton,
    encode_graph, encode_graph_prime, encode_graph_unary, encode_quaternary, parse_bin_fixed, PrimeTable,
    Skeleton, UnaryWord,
};
use twa_core::eval::{accepts_afa_fixpoint, accepts_nfa};
use twa_core::oracle::{
    afa_accept_bruteforce, nfa_accept_bruteforce, random_graph, random_simple_nfa, reach,
};
use twa_core::{build_3dstcon_solver, graph_binary_to_prime, nfa_to_graph, Digraph3};

fn graph() -> impl Strategy<Value = Digraph3> {
    (1usize..=12, any::<u64>()).prop_map(|(n, s)| random_graph(n, s))
}

/// Graphs without the edge `(0,0)`, which has no prime.
fn prime_graph() -> impl Strategy<Value = Digraph3> {
    graph().prop_map(|g| {
        let edges: Vec<_> = g.edges().into_iter().filter(|&e| e != (0, 0)).collect();
        Digraph3::from_edges(g.n(), &edges).unwrap()
    })
}

proptest! {
    #[test]
    fn quaternary_roundtrip(s in "[01#⊥]{0,40}") {
        let e = encode_quaternary(&s).unwrap();
        prop_assert_eq!(e.len(), 2 * s.chars().count());
        prop_assert_eq!(decode_quaternary(&e).unwrap(), s);
    }

    #[test]
    fn bin_fixed_roundtrip(i in 0u64..1 << 20, pad in 0usize..4) {
        let width = 64 - i.leading_zeros() as usize + 1 + pad;
        let b = bin_fixed(width.max(2), i).unwrap();
        prop_assert_eq!(parse_bin_fixed(&b), Some(i));
    }

    #[test]
    fn graph_codec_roundtrip(g in graph()) {
        prop_assert_eq!(&decode_graph(&encode_graph(&g)).unwrap(), &g);
    }

    #[test]
    fn prime_codecs_roundtrip(g in prime_graph()) {
        let p = encode_graph_prime(&g).unwrap();
        prop_assert_eq!(&decode_graph_prime(&p, g.n()).unwrap(), &g);
        prop_assert_eq!(graph_binary_to_prime(&encode_graph(&g)).unwrap(), p);
    }

    #[test]
    fn unary_length_is_the_edge_prime_product(g in prime_graph()) {
        let t = PrimeTable::new(g.n());
        let e = encode_graph_unary(&g).unwrap();
        let want: BigUint = g
            .edges()
            .into_iter()
            .map(|(i, j)| BigUint::from(t.get(i, j).unwrap()))
            .product();
        prop_assert_eq!(e.length(), &want);
    }

    #[test]
    fn residues_match_big_products(fs in prop::collection::vec(1u64..u32::MAX as u64, 0..10), m in 1u64..u64::MAX) {
        let product: BigUint = fs.iter().map(|&f| BigUint::from(f)).product();
        let want = (&product % m).to_u64_digits().first().copied().unwrap_or(0);
        prop_assert_eq!(UnaryWord::from_factors(fs).residue(m), want);
    }

    #[test]
    fn decoders_reject_without_panicking(x in "[01#]{0,30}") {
        let _ = decode_graph(&x);
        let _ = decode_graph_prime(&x, 3);
        let _ = decode_quaternary(&x);
    }

    #[test]
    fn evaluators_match_bruteforce(states in 1usize..=5, c in 1usize..=3, seed: u64, x in "[01]{0,6}") {
        let m = random_simple_nfa(states, c, &['0', '1'], seed).unwrap();
        let v = accepts_nfa(&m, &x).unwrap().accepted;
        prop_assert_eq!(v, nfa_accept_bruteforce(&m, &x).unwrap());
        prop_assert_eq!(v, accepts_afa_fixpoint(&m, &x).unwrap());
        prop_assert_eq!(v, afa_accept_bruteforce(&m, &x).unwrap());
        let r = nfa_to_graph(&m, &x).unwrap();
        prop_assert_eq!(v, reach(&r.graph, r.source, r.target));
    }

    #[test]
    fn automaton_codec_roundtrip(states in 1usize..=6, c in 1usize..=3, seed: u64) {
        let m = random_simple_nfa(states, c, &['0', '1'], seed).unwrap();
        let x = encode_automaton(&m, c).unwrap();
        prop_assert_eq!(decode_automaton(&x, &Skeleton::of(&m), c).unwrap(), m);
    }
}

#[test]
fn solver_matches_reach_on_random_graphs() {
    for n in [5, 9, 13] {
        let solver = build_3dstcon_solver(n).unwrap();
        for s in 0..50 {
            let g = random_graph(n, s);
            assert_eq!(accepts_nfa(&solver, &encode_graph(&g)).unwrap().accepted, reach(&g, 0, n - 1), "n = {n}, seed {s}");
        }
    }
}

#[test]
fn zero_loop_has_no_prime() {
    let g = Digraph3::from_edges(2, &[(0, 0), (0, 1)]).unwrap();
    assert!(encode_graph_prime(&g).is_err());
    assert!(encode_graph_unary(&g).is_err());
}
