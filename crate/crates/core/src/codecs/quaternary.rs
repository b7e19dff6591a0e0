use super::CodecError;

/// The four symbols of the pre-image alphabet, in code order
/// `00`, `01`, `11`, `10`.
pub const QUAD_SYMBOLS: [char; 4] = ['0', '1', '#', '⊥'];

pub fn encode_quaternary(s: &str) -> Result<String, CodecError> {
    let mut out = String::with_capacity(2 * s.len());
    for c in s.chars() {
        out.push_str(match c {
            '0' => "00",
            '1' => "01",
            '#' => "11",
            '⊥' => "10",
            other => return Err(CodecError::BadSymbol(other)),
        });
    }
    Ok(out)
}

pub fn decode_quaternary(s: &str) -> Result<String, CodecError> {
    let bytes = s.as_bytes();
    if let Some(&b) = bytes.iter().find(|&&b| b != b'0' && b != b'1') {
        return Err(CodecError::BadSymbol(char::from(b)));
    }
    if bytes.len() % 2 == 1 {
        return Err(CodecError::OddLength);
    }
    Ok(bytes
        .chunks(2)
        .map(|p| match (p[0], p[1]) {
            (b'0', b'0') => '0',
            (b'0', b'1') => '1',
            (b'1', b'1') => '#',
            _ => '⊥',
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_values() {
        assert_eq!(encode_quaternary("10").unwrap(), "0100");
        assert_eq!(encode_quaternary("0#1⊥1").unwrap(), "0011011001");
        assert_eq!(encode_quaternary("").unwrap(), "");
    }

    #[test]
    fn decode_inverts_and_rejects_odd() {
        assert_eq!(decode_quaternary("0011011001").unwrap(), "0#1⊥1");
        assert_eq!(decode_quaternary("001"), Err(CodecError::OddLength));
        assert_eq!(decode_quaternary("0x"), Err(CodecError::BadSymbol('x')));
    }
}
