//! Fixed-width box encoding of formula text.
//!
//! Every surface symbol of the formula syntax maps to five boxes. No pattern
//! is all-blank. Patterns for the symbols that can open a formula (`x`, `(`,
//! `!`, `T`, `F`) start with a blank box, so the leftmost box of any encoded
//! formula is blank. The table is a frozen wire format.

use thiserror::Error;

use crate::boolean::{BooleanError, Formula};
use crate::convention::BoxString;

pub const SYMBOL_WIDTH: usize = 5;

/// The symbol table, one `(symbol, pattern)` per row.
pub const SYMBOL_CODE: [(char, &str); 18] = [
    ('(', "bbbbm"),
    (')', "mbbbm"),
    ('x', "bbbmb"),
    ('!', "bbbmm"),
    ('&', "mbbmb"),
    ('|', "mbbmm"),
    ('T', "bbmbb"),
    ('F', "bbmbm"),
    ('0', "bbmmb"),
    ('1', "bbmmm"),
    ('2', "bmbbb"),
    ('3', "bmbbm"),
    ('4', "bmbmb"),
    ('5', "bmbmm"),
    ('6', "bmmbb"),
    ('7', "bmmbm"),
    ('8', "bmmmb"),
    ('9', "bmmmm"),
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodingError {
    #[error("box string of length {0} is not a multiple of {SYMBOL_WIDTH}")]
    Framing(usize),
    #[error("unknown pattern `{pattern}` at box {offset}")]
    UnknownPattern { offset: usize, pattern: String },
    #[error("decoded text `{text}` is not a formula: {source}")]
    Parse { text: String, source: BooleanError },
}

fn pattern_bits(pattern: &str) -> impl Iterator<Item = bool> + '_ {
    pattern.chars().map(|c| c == 'm')
}

fn pattern_of(symbol: char) -> &'static str {
    SYMBOL_CODE
        .iter()
        .find(|(c, _)| *c == symbol)
        .map(|(_, p)| *p)
        .unwrap_or_else(|| panic!("formula text produced symbol {symbol:?} outside the alphabet"))
}

pub fn encode_text_boxes(text: &str) -> Vec<bool> {
    text.chars()
        .flat_map(|c| pattern_bits(pattern_of(c)))
        .collect()
}

/// Encodes the compact text form of `phi`, symbol by symbol.
pub fn encode_formula(phi: &Formula) -> BoxString {
    BoxString::new(encode_text_boxes(&phi.to_string())).expect("formula text is never empty")
}

pub fn decode_text(boxes: &[bool]) -> Result<String, EncodingError> {
    if !boxes.len().is_multiple_of(SYMBOL_WIDTH) {
        return Err(EncodingError::Framing(boxes.len()));
    }
    boxes
        .chunks(SYMBOL_WIDTH)
        .enumerate()
        .map(|(i, chunk)| {
            SYMBOL_CODE
                .iter()
                .find(|(_, p)| pattern_bits(p).eq(chunk.iter().copied()))
                .map(|(c, _)| *c)
                .ok_or_else(|| EncodingError::UnknownPattern {
                    offset: i * SYMBOL_WIDTH,
                    pattern: chunk.iter().map(|&m| if m { 'm' } else { 'b' }).collect(),
                })
        })
        .collect()
}

pub fn decode_formula(boxes: &BoxString) -> Result<Formula, EncodingError> {
    let text = decode_text(boxes.boxes())?;
    text.parse()
        .map_err(|source| EncodingError::Parse { text, source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean::tests::{arb_formula, f};
    use crate::boolean::truth_table;
    use proptest::prelude::*;
    use std::collections::HashSet;

    #[test]
    fn table_is_well_formed() {
        let patterns: HashSet<&str> = SYMBOL_CODE.iter().map(|(_, p)| *p).collect();
        assert_eq!(patterns.len(), SYMBOL_CODE.len());
        for (c, p) in SYMBOL_CODE {
            assert_eq!(p.len(), SYMBOL_WIDTH, "{c}");
            assert!(p.contains('m'), "{c}");
            assert!(p.chars().all(|ch| ch == 'm' || ch == 'b'));
        }
        for c in ['x', '(', '!', 'T', 'F'] {
            assert!(pattern_of(c).starts_with('b'));
        }
    }

    #[test]
    fn examples() {
        assert_eq!(decode_formula(&encode_formula(&f("x1"))).unwrap(), f("x1"));
        assert_eq!(encode_formula(&f("T")).len(), 5);
        assert_eq!(encode_formula(&f("x1")).to_string(), "bbbmbbbmmm");
        let cnf = f("(x1|x2)&(!x1|!x2)&(x2|x3)");
        let back = decode_formula(&encode_formula(&cnf)).unwrap();
        assert_eq!(
            truth_table(&back, 3).unwrap(),
            truth_table(&cnf, 3).unwrap()
        );
    }

    #[test]
    fn decode_errors() {
        assert_eq!(
            decode_formula(&"bbbbb".parse().unwrap()),
            Err(EncodingError::UnknownPattern {
                offset: 0,
                pattern: "bbbbb".into()
            })
        );
        assert_eq!(
            decode_formula(&"bbbmbbbm".parse().unwrap()),
            Err(EncodingError::Framing(8))
        );
        // `x` alone decodes to text that does not parse.
        assert!(matches!(
            decode_formula(&"bbbmb".parse().unwrap()),
            Err(EncodingError::Parse { .. })
        ));
    }

    proptest! {
        #[test]
        fn round_trip(phi in arb_formula(12, 8)) {
            let boxes = encode_formula(&phi);
            prop_assert_eq!(boxes.len(), SYMBOL_WIDTH * phi.to_string().chars().count());
            prop_assert!(!boxes.boxes()[0]);
            prop_assert_eq!(decode_formula(&boxes).unwrap(), phi);
        }
    }
}
