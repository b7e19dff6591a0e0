use super::CodecError;

pub fn binary_repr(i: u64) -> String {
    format!("{i:b}")
}

/// `0^(k-1) 1 binary(i)` of total length `n`, with `k >= 1`.
pub fn bin_fixed(n: usize, i: u64) -> Result<String, CodecError> {
    let b = binary_repr(i);
    if n < b.len() + 1 {
        return Err(CodecError::WidthTooSmall { width: n, value: i, needed: b.len() + 1 });
    }
    let mut s = "0".repeat(n - b.len() - 1);
    s.push('1');
    s.push_str(&b);
    Ok(s)
}

/// Parses a canonical `binary(i)`: no leading zeros except `"0"` itself.
pub fn parse_binary(s: &str) -> Option<u64> {
    if s.is_empty() || s.len() > 64 || (s.len() > 1 && s.starts_with('0')) {
        return None;
    }
    u64::from_str_radix(s, 2).ok()
}

/// Inverse of [`bin_fixed`] for a string of any width.
pub fn parse_bin_fixed(s: &str) -> Option<u64> {
    let marker = s.find('1')?;
    if s[..marker].bytes().any(|b| b != b'0') {
        return None;
    }
    parse_binary(&s[marker + 1..])
}
