//! Shared helpers for the line-oriented text formats.

use crate::error::{Error, Result};

/// Yields `(1-based line number, content)` with `#` comments stripped and
/// blank lines skipped.
pub(crate) fn lines(src: &str) -> impl Iterator<Item = (usize, &str)> {
    src.lines().enumerate().filter_map(|(i, raw)| {
        let content = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        (!content.is_empty()).then_some((i + 1, content))
    })
}

pub(crate) fn number(line: usize, word: &str) -> Result<usize> {
    word.parse()
        .map_err(|_| Error::parse(line, format!("expected a non-negative integer, found `{word}`")))
}

pub(crate) fn numbers<const N: usize>(line: usize, args: &[&str]) -> Result<[usize; N]> {
    if args.len() != N {
        return Err(Error::parse(
            line,
            format!("expected {N} argument(s), found {}", args.len()),
        ));
    }
    let mut out = [0; N];
    for (slot, word) in out.iter_mut().zip(args) {
        *slot = number(line, word)?;
    }
    Ok(out)
}
