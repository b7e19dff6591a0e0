//! Frozen state-count and length bounds from constants.toml.

use serde::Deserialize;

use twa_core::codecs::encode_automaton;
use twa_core::dtm::bundled::{acceptor, acceptor_bounds, ACCEPTORS};
use twa_core::oracle::random_simple_nfa;
use twa_core::{build_graph_validator, dtm_to_narrow_afa};

#[derive(Deserialize)]
struct Frozen {
    validator: Validator,
    narrowness: Narrow,
    automaton_encoding: AutomatonEncoding,
}

#[derive(Deserialize)]
struct Validator {
    a: f64,
}

#[derive(Deserialize)]
struct Narrow {
    kappa_prime: f64,
}

#[derive(Deserialize)]
struct AutomatonEncoding {
    e: f64,
}

fn frozen() -> Frozen {
    toml::from_str(include_str!("../../../constants.toml")).unwrap()
}

fn n_log_n(n: usize) -> f64 {
    n as f64 * (n as f64).log2()
}

#[test]
fn validator_states() {
    let a = frozen().validator.a;
    for n in 2..=64 {
        let s = build_graph_validator(n).unwrap().state_count();
        assert!(s as f64 <= a * n_log_n(n), "n = {n}: {s} states");
    }
}

#[test]
fn afa_states() {
    let k = frozen().narrowness.kappa_prime;
    for name in ACCEPTORS {
        let d = acceptor(name).unwrap();
        for len in 0..=6 {
            let b = acceptor_bounds(len);
            let s = dtm_to_narrow_afa(&d, &b, len).unwrap().machine.state_count();
            assert!(s as f64 <= k * (b.time_bound * b.space_bound) as f64, "{name}, |x| = {len}: {s} states");
        }
    }
}

#[test]
fn automaton_encoding_length() {
    let e = frozen().automaton_encoding.e;
    for n in 2..=64 {
        for c in 1..=3 {
            for seed in 0..20 {
                let m = random_simple_nfa(n, c, &['0', '1'], seed).unwrap();
                let len = encode_automaton(&m, c).unwrap().len();
                assert!(len as f64 <= e * n_log_n(n), "n = {n}, c = {c}: {len}");
            }
        }
    }
}
