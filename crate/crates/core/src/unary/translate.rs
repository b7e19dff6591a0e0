//! `⟨G⟩ → ⟨G⟩_prime`, row by row.

use super::UnaryError;
use crate::codecs::{bin_fixed, parse_binary, validate_graph_encoding, CodecError, PrimeTable};

/// Decodes quaternary pairs one at a time into pre-image symbols.
fn preimage_stream(x: &str) -> impl Iterator<Item = char> + '_ {
    x.as_bytes().chunks(2).map(|p| match p {
        b"00" => '0',
        b"01" => '1',
        b"11" => '#',
        _ => '⊥',
    })
}

/// Translates a binary graph encoding to its prime encoding.
///
/// A first pass validates `x` and fixes `n`; the second pass reads one row
/// at a time and writes a block for each entry. Rows come in vertex order
/// with ascending entries, so blocks come out in ascending prime order.
pub fn graph_binary_to_prime(x: &str) -> Result<String, UnaryError> {
    let n = validate_graph_encoding(x, None)?.n;
    let table = PrimeTable::new(n);
    let s = table.block_width().unwrap_or(0);
    let mut out = String::new();
    let mut emit = |i: usize, field: &str| -> Result<(), UnaryError> {
        if field.is_empty() {
            return Ok(());
        }
        let j = parse_binary(field).expect("validated entry") as usize - 1;
        let p = table.get(i, j).map_err(|e| match e {
            CodecError::ZeroPair => CodecError::UnrepresentableEdge,
            e => e,
        })?;
        if !out.is_empty() {
            out.push('#');
        }
        out.push_str(&bin_fixed(s, p).expect("block width fits every prime"));
        Ok(())
    };
    let (mut row, mut field_no, mut field) = (0usize, 0usize, String::new());
    for sym in preimage_stream(x) {
        if sym != '#' {
            field.push(sym);
            continue;
        }
        // Fields 1..=3 are entries; field 4 is the empty gap of `##`.
        if (1..=3).contains(&field_no) {
            emit(row, &field)?;
        }
        field.clear();
        field_no += 1;
        if field_no == 5 {
            row += 1;
            field_no = 0;
        }
    }
    emit(row, &field)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codecs::{encode_graph, encode_graph_prime};
    use crate::graph::Digraph3;
    use crate::oracle::enumerate_graphs;

    #[test]
    fn worked_example() {
        let g = Digraph3::from_edges(2, &[(0, 1), (1, 1)]).unwrap();
        assert_eq!(graph_binary_to_prime(&encode_graph(&g)).unwrap(), "0110#1101");
        assert_eq!(graph_binary_to_prime(&encode_graph(&Digraph3::new(2).unwrap())).unwrap(), "");
    }

    #[test]
    fn matches_codec_composition() {
        for n in 1..=3 {
            for g in enumerate_graphs(n).unwrap() {
                let x = encode_graph(&g);
                match encode_graph_prime(&g) {
                    Ok(p) => assert_eq!(graph_binary_to_prime(&x).unwrap(), p),
                    Err(_) => assert!(graph_binary_to_prime(&x).is_err()),
                }
            }
        }
    }

    #[test]
    fn invalid_input() {
        assert!(matches!(graph_binary_to_prime("011"), Err(UnaryError::Codec(_))));
    }
}
