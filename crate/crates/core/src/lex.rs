//! Shared tokenizer for coefficient and element expressions.
//!
//! Whitespace is insignificant. Identifiers start with a letter and may
//! contain letters, digits, and underscores; the single letter `q` is lexed
//! as its own token because it names the ground-field parameter.

use num_bigint::BigInt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Q,
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

/// A token plus the byte offset where it started, for error messages.
#[derive(Debug, Clone)]
pub struct SpannedTok {
    pub tok: Tok,
    pub pos: usize,
}

pub fn tokenize(input: &str) -> Result<Vec<SpannedTok>> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let pos = i;
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push(SpannedTok { tok: Tok::Plus, pos }),
            b'-' => out.push(SpannedTok { tok: Tok::Minus, pos }),
            b'*' => out.push(SpannedTok { tok: Tok::Star, pos }),
            b'/' => out.push(SpannedTok { tok: Tok::Slash, pos }),
            b'^' => out.push(SpannedTok { tok: Tok::Caret, pos }),
            b'(' => out.push(SpannedTok { tok: Tok::LParen, pos }),
            b')' => out.push(SpannedTok { tok: Tok::RParen, pos }),
            b'0'..=b'9' => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                let text = &input[i..j];
                let val: BigInt = text.parse().expect("digit run parses as integer");
                out.push(SpannedTok { tok: Tok::Int(val), pos });
                i = j;
                continue;
            }
            _ if b.is_ascii_alphabetic() || b == b'_' => {
                let mut j = i;
                while j < bytes.len()
                    && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_')
                {
                    j += 1;
                }
                let text = &input[i..j];
                if text == "q" {
                    out.push(SpannedTok { tok: Tok::Q, pos });
                } else {
                    out.push(SpannedTok { tok: Tok::Ident(text.to_string()), pos });
                }
                i = j;
                continue;
            }
            _ => {
                return Err(Error::Parse {
                    pos,
                    msg: format!("unexpected character {:?}", b as char),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}
