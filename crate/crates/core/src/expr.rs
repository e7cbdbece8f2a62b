//! Parser for element expressions: sums of coefficient-times-word terms.
//!
//! Words may list generators in any order and with negative powers; the
//! parser only records them. Ordering into PBW normal form, and deciding
//! whether a negative power is legal, is the engine's job.

use crate::coeff::parse_coeff_subexpr;
use crate::error::{Error, Result};
use crate::lex::{tokenize, SpannedTok, Tok};
use crate::ore::RawElement;

/// Parse an element expression over the given generator names.
///
/// Grammar, layered on the coefficient grammar:
///
/// ```text
/// element := ['-'] term (('+' | '-') term)*
/// term    := factor (['*' | '/'] factor)*
/// factor  := generator ['^' signed_int]
///          | ('q' | integer | '(' coeff-expr ')') ['^' signed_int]
/// ```
///
/// Adjacent factors without an operator multiply ("q*x1 x2" is "q*x1*x2").
/// Division is only defined by coefficient factors.
pub fn parse_element(input: &str, names: &[String]) -> Result<RawElement> {
    let toks = tokenize(input)?;
    let mut p = ElemParser {
        toks: &toks,
        idx: 0,
        input_len: input.len(),
        names,
    };
    let value = p.element()?;
    if p.idx != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(value)
}

struct ElemParser<'a> {
    toks: &'a [SpannedTok],
    idx: usize,
    input_len: usize,
    names: &'a [String],
}

impl<'a> ElemParser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|t| &t.tok)
    }

    fn pos(&self) -> usize {
        self.toks
            .get(self.idx)
            .map(|t| t.pos)
            .unwrap_or(self.input_len)
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos(),
            msg: msg.to_string(),
        })
    }

    fn element(&mut self) -> Result<RawElement> {
        let mut out = RawElement { terms: Vec::new() };
        let mut negate = false;
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.idx += 1;
            negate = true;
        }
        loop {
            let (mut coeff, word) = self.term()?;
            if negate {
                coeff = coeff.neg();
            }
            out.terms.push((coeff, word));
            match self.peek() {
                Some(Tok::Plus) => {
                    self.idx += 1;
                    negate = false;
                }
                Some(Tok::Minus) => {
                    self.idx += 1;
                    negate = true;
                }
                None => return Ok(out),
                _ => return self.err("expected '+', '-', or end of expression"),
            }
        }
    }

    fn term(&mut self) -> Result<(crate::coeff::CoeffRat, Vec<(usize, i64)>)> {
        let mut coeff = crate::coeff::CoeffRat::one();
        let mut word: Vec<(usize, i64)> = Vec::new();
        if !self.factor(&mut coeff, &mut word, false)? {
            return self.err("expected a coefficient or generator");
        }
        loop {
            let divide = match self.peek() {
                Some(Tok::Star) => {
                    self.idx += 1;
                    false
                }
                Some(Tok::Slash) => {
                    self.idx += 1;
                    true
                }
                Some(Tok::Q) | Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    false
                }
                _ => return Ok((coeff, word)),
            };
            if !self.factor(&mut coeff, &mut word, divide)? {
                return self.err("expected a factor");
            }
        }
    }

    /// Parse one factor into the running term. Returns false if the stream
    /// does not start a factor here.
    fn factor(
        &mut self,
        coeff: &mut crate::coeff::CoeffRat,
        word: &mut Vec<(usize, i64)>,
        divide: bool,
    ) -> Result<bool> {
        match self.peek() {
            Some(Tok::Ident(name)) => {
                let name = name.clone();
                let gen = match self.names.iter().position(|n| n == &name) {
                    Some(g) => g,
                    None => return self.err(&format!("unknown generator '{name}'")),
                };
                if divide {
                    return self.err("cannot divide by a generator");
                }
                self.idx += 1;
                let power = self.optional_power()?.unwrap_or(1);
                word.push((gen, power));
                Ok(true)
            }
            Some(Tok::Q) | Some(Tok::Int(_)) | Some(Tok::LParen) => {
                let value = self.coeff_factor()?;
                *coeff = if divide {
                    coeff.div(&value)?
                } else {
                    coeff.mul(&value)
                };
                Ok(true)
            }
            _ => {
                if divide {
                    self.err("expected a coefficient after '/'")
                } else {
                    Ok(false)
                }
            }
        }
    }

    fn coeff_factor(&mut self) -> Result<crate::coeff::CoeffRat> {
        let base = match self.peek() {
            Some(Tok::Q) => {
                self.idx += 1;
                crate::coeff::CoeffRat::q()
            }
            Some(Tok::Int(_)) => {
                let t = &self.toks[self.idx];
                self.idx += 1;
                match &t.tok {
                    Tok::Int(n) => crate::coeff::CoeffRat::from_rational(
                        num_rational::BigRational::from(n.clone()),
                    ),
                    _ => unreachable!(),
                }
            }
            Some(Tok::LParen) => {
                self.idx += 1;
                let (value, next) =
                    parse_coeff_subexpr(self.toks, self.idx, self.input_len)?;
                self.idx = next;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.idx += 1;
                        value
                    }
                    _ => return self.err("expected ')'"),
                }
            }
            _ => return self.err("expected a coefficient"),
        };
        match self.optional_power()? {
            Some(e) => base.pow(e),
            None => Ok(base),
        }
    }

    fn optional_power(&mut self) -> Result<Option<i64>> {
        if !matches!(self.peek(), Some(Tok::Caret)) {
            return Ok(None);
        }
        self.idx += 1;
        let negate = if matches!(self.peek(), Some(Tok::Minus)) {
            self.idx += 1;
            true
        } else {
            false
        };
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = n.clone();
                self.idx += 1;
                let v: i64 = n
                    .try_into()
                    .map_err(|_| Error::Parse {
                        pos: self.pos(),
                        msg: "exponent out of range".to_string(),
                    })?;
                Ok(Some(if negate { -v } else { v }))
            }
            _ => self.err("expected an integer exponent"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        vec!["x1".to_string(), "x2".to_string()]
    }

    #[test]
    fn words_record_written_order() {
        let raw = parse_element("x2*x1", &names()).unwrap();
        assert_eq!(raw.terms.len(), 1);
        assert_eq!(raw.terms[0].1, vec![(1, 1), (0, 1)]);
        assert!(raw.terms[0].0.is_one());
    }

    #[test]
    fn juxtaposition_multiplies() {
        let a = parse_element("q*x1 x2", &names()).unwrap();
        let b = parse_element("q*x1*x2", &names()).unwrap();
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
    }

    #[test]
    fn signs_fold_into_coefficients() {
        let raw = parse_element("-x1 + x2 - 3", &names()).unwrap();
        assert_eq!(raw.terms.len(), 3);
        assert_eq!(raw.terms[0].0.to_expr_string(), "-1");
        assert_eq!(raw.terms[1].0.to_expr_string(), "1");
        assert_eq!(raw.terms[2].0.to_expr_string(), "-3");
    }

    #[test]
    fn parenthesized_coefficients_take_powers() {
        let raw = parse_element("(q - 1)^-1*x2^2", &names()).unwrap();
        assert_eq!(raw.terms[0].0.to_expr_string(), "1/(q - 1)");
        assert_eq!(raw.terms[0].1, vec![(1, 2)]);
    }

    #[test]
    fn negative_generator_powers_are_recorded() {
        let raw = parse_element("x2^-3", &names()).unwrap();
        assert_eq!(raw.terms[0].1, vec![(1, -3)]);
    }

    #[test]
    fn unknown_generator_is_an_error() {
        let err = parse_element("x1*y", &names()).unwrap_err();
        match err {
            Error::Parse { pos, msg } => {
                assert_eq!(pos, 3);
                assert!(msg.contains("unknown generator 'y'"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn division_by_generator_is_an_error() {
        let err = parse_element("q/x1", &names()).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn coefficient_division_works() {
        let raw = parse_element("x1/2/q", &names()).unwrap();
        assert_eq!(raw.terms[0].0.to_expr_string(), "1/(2*q)");
    }
}
