//! Exact arithmetic in the field Q(q) of rational functions over the
//! rationals.
//!
//! Coefficients are kept as a quotient of two polynomials in canonical form:
//! the denominator is monic and shares no common factor with the numerator.
//! Canonical form makes structural equality semantic equality, which the
//! rest of the crate relies on.
//!
//! A useful fact about this field: its only roots of unity are 1 and -1, so
//! "q_j is not a root of unity" is a decidable, cheap check here.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lex::{tokenize, SpannedTok, Tok};

/// Dense univariate polynomial in q with rational coefficients, lowest
/// degree first. The coefficient vector never ends in a zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPolynomial {
    coeffs: Vec<BigRational>,
}

impl QPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        QPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        QPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPolynomial::constant(BigRational::one())
    }

    pub fn q() -> Self {
        QPolynomial::new(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn constant(c: BigRational) -> Self {
        QPolynomial::new(vec![c])
    }

    /// c * q^k for k >= 0.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        if c.is_zero() {
            return QPolynomial::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        QPolynomial { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree of the zero polynomial is reported as None.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    /// The unique term (coefficient, degree) if this is a monomial.
    pub fn as_monomial(&self) -> Option<(&BigRational, usize)> {
        let nonzero: Vec<usize> = (0..self.coeffs.len())
            .filter(|&k| !self.coeffs[k].is_zero())
            .collect();
        match nonzero.as_slice() {
            [k] => Some((&self.coeffs[*k], *k)),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero);
            let b = other.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero);
            coeffs.push(a + b);
        }
        QPolynomial::new(coeffs)
    }

    pub fn neg(&self) -> Self {
        QPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return QPolynomial::zero();
        }
        let mut coeffs =
            vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] += a * b;
            }
        }
        QPolynomial::new(coeffs)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return QPolynomial::zero();
        }
        QPolynomial {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Euclidean division; the divisor must be nonzero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let mut rem = self.clone();
        let dd = divisor.degree().unwrap();
        let lead = divisor.leading().unwrap().clone();
        let mut quot = vec![
            BigRational::zero();
            self.coeffs.len().saturating_sub(divisor.coeffs.len()) + 1
        ];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let factor = rem.leading().unwrap() / &lead;
            let shift = rd - dd;
            quot[shift] = factor.clone();
            let scaled = divisor.scale(&factor);
            let mut shifted = vec![BigRational::zero(); shift];
            shifted.extend(scaled.coeffs);
            rem = rem.sub(&QPolynomial::new(shifted));
        }
        (QPolynomial::new(quot), rem)
    }

    /// Monic greatest common divisor via the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Scale so the leading coefficient becomes 1 (zero stays zero).
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => QPolynomial::zero(),
            Some(l) => self.scale(&(BigRational::one() / l)),
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = QPolynomial::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// Element of Q(q) as a canonical fraction of polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffRat {
    num: QPolynomial,
    den: QPolynomial,
}

impl CoeffRat {
    /// Build and canonicalize; errors when the denominator is zero.
    pub fn new(num: QPolynomial, den: QPolynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: QPolynomial, den: QPolynomial) -> Self {
        if num.is_zero() {
            return CoeffRat { num: QPolynomial::zero(), den: QPolynomial::one() };
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lead = den.leading().expect("nonzero denominator").clone();
        let num = num.scale(&(BigRational::one() / &lead));
        let den = den.scale(&(BigRational::one() / &lead));
        CoeffRat { num, den }
    }

    pub fn from_poly(num: QPolynomial) -> Self {
        CoeffRat { num, den: QPolynomial::one() }
    }

    pub fn zero() -> Self {
        CoeffRat::from_poly(QPolynomial::zero())
    }

    pub fn one() -> Self {
        CoeffRat::from_poly(QPolynomial::one())
    }

    pub fn q() -> Self {
        CoeffRat::from_poly(QPolynomial::q())
    }

    pub fn from_int(n: i64) -> Self {
        CoeffRat::from_poly(QPolynomial::constant(BigRational::from(BigInt::from(n))))
    }

    pub fn from_rational(r: BigRational) -> Self {
        CoeffRat::from_poly(QPolynomial::constant(r))
    }

    /// q^k for any integer k.
    pub fn q_pow(k: i64) -> Self {
        if k >= 0 {
            CoeffRat::from_poly(QPolynomial::monomial(BigRational::one(), k as usize))
        } else {
            CoeffRat {
                num: QPolynomial::one(),
                den: QPolynomial::monomial(BigRational::one(), (-k) as usize),
            }
        }
    }

    pub fn numerator(&self) -> &QPolynomial {
        &self.num
    }

    pub fn denominator(&self) -> &QPolynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.degree().map_or(true, |d| d == 0)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if !self.is_constant() {
            return None;
        }
        Some(
            self.num
                .coeffs()
                .first()
                .cloned()
                .unwrap_or_else(BigRational::zero),
        )
    }

    /// Decompose as sign * q^k when this is plus or minus a single q-power
    /// (constants included, with k possibly negative).
    pub fn as_signed_q_power(&self) -> Option<(bool, i64)> {
        let (c, k) = self.num.as_monomial()?;
        let (d, r) = self.den.as_monomial()?;
        if !d.is_one() {
            return None;
        }
        let exp = k as i64 - r as i64;
        if c.is_one() {
            Some((false, exp))
        } else if (-c).is_one() {
            Some((true, exp))
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        Self::reduced(num, den)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        CoeffRat { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        // Cross-reduce before multiplying to keep intermediate degrees low.
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let (n1, _) = self.num.div_rem(&g1);
        let (d2, _) = other.den.div_rem(&g1);
        let (n2, _) = other.num.div_rem(&g2);
        let (d1, _) = self.den.div_rem(&g2);
        Self::reduced(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e == 0 {
            return Ok(CoeffRat::one());
        }
        if self.is_zero() {
            if e < 0 {
                return Err(Error::ZeroToNegativePower);
            }
            return Ok(CoeffRat::zero());
        }
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = e.unsigned_abs();
        Ok(CoeffRat {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }

    /// In Q(q) the root-of-unity test reduces to checking for the constants
    /// 1 and -1. Errors on zero input.
    pub fn is_root_of_unity(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        match self.as_rational() {
            Some(r) => Ok(r.is_one() || (-r).is_one()),
            None => Ok(false),
        }
    }

    /// Canonical printable form; `parse_coeff` inverts this exactly.
    pub fn to_expr_string(&self) -> String {
        if self.den.is_one() {
            return poly_string(&self.num);
        }
        // Fractional coefficients in the numerator read better folded
        // into the denominator: 1/(2*q) rather than 1/2/q.
        let scale = self
            .num
            .coeffs()
            .iter()
            .filter(|c| !c.is_zero())
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let (num, den) = if scale.is_one() {
            (self.num.clone(), self.den.clone())
        } else {
            let s = BigRational::from(scale);
            (self.num.scale(&s), self.den.scale(&s))
        };
        let num_str = if count_terms(&num) > 1 {
            format!("({})", poly_string(&num))
        } else {
            poly_string(&num)
        };
        format!("{}/{}", num_str, den_factor_string(&den))
    }

    /// Split into a sign and a factor string suitable for multiplying in
    /// front of a word of generators, e.g. (true, "q") renders as "- q*...".
    /// The factor string is empty when the absolute value is 1.
    pub fn as_product_factor(&self) -> (bool, String) {
        let negative = self
            .num
            .leading()
            .map_or(false, |l| l.is_negative());
        let abs = if negative { self.neg() } else { self.clone() };
        if abs.is_one() {
            return (negative, String::new());
        }
        let s = if abs.den.is_one() {
            if count_terms(&abs.num) > 1 {
                format!("({})", poly_string(&abs.num))
            } else {
                poly_string(&abs.num)
            }
        } else {
            abs.to_expr_string()
        };
        (negative, s)
    }
}

impl fmt::Display for CoeffRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr_string())
    }
}

fn count_terms(p: &QPolynomial) -> usize {
    p.coeffs().iter().filter(|c| !c.is_zero()).count()
}

fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn q_power_string(k: usize) -> String {
    match k {
        0 => "1".to_string(),
        1 => "q".to_string(),
        _ => format!("q^{}", k),
    }
}

/// One polynomial term |c|*q^k without sign.
fn term_string(c: &BigRational, k: usize) -> String {
    let c = c.abs();
    if k == 0 {
        rational_string(&c)
    } else if c.is_one() {
        q_power_string(k)
    } else {
        format!("{}*{}", rational_string(&c), q_power_string(k))
    }
}

/// Terms in descending degree, signs folded into the separators.
fn poly_string(p: &QPolynomial) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    let mut first = true;
    for k in (0..p.coeffs().len()).rev() {
        let c = &p.coeffs()[k];
        if c.is_zero() {
            continue;
        }
        if first {
            if c.is_negative() {
                out.push('-');
            }
            first = false;
        } else if c.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&term_string(c, k));
    }
    out
}

/// Denominators are monic, so a single-term denominator is exactly q^k.
fn den_factor_string(den: &QPolynomial) -> String {
    match den.as_monomial() {
        Some((c, k)) if c.is_one() => q_power_string(k),
        _ => format!("({})", poly_string(den)),
    }
}

/// Parse a coefficient expression:
///
/// ```text
/// expr   := term (('+' | '-') term)*
/// term   := factor (('*' | '/') factor)*
/// factor := ['-'] atom ['^' signed_int]
/// atom   := 'q' | integer | '(' expr ')'
/// ```
///
/// Juxtaposition is not multiplication: "2q" is a syntax error.
pub fn parse_coeff(input: &str) -> Result<CoeffRat> {
    let toks = tokenize(input)?;
    let mut p = CoeffParser { toks: &toks, idx: 0, input_len: input.len() };
    let value = p.expr()?;
    p.expect_end()?;
    Ok(value)
}

/// Parse one coefficient expression from a token stream starting at `idx`,
/// stopping at the first token that cannot extend it. Returns the value and
/// the index of that stopping token. Lets the element-expression parser
/// embed parenthesized coefficient groups without re-lexing.
pub(crate) fn parse_coeff_subexpr(
    toks: &[SpannedTok],
    idx: usize,
    input_len: usize,
) -> Result<(CoeffRat, usize)> {
    let mut p = CoeffParser { toks, idx, input_len };
    let value = p.expr()?;
    Ok((value, p.idx))
}

struct CoeffParser<'a> {
    toks: &'a [SpannedTok],
    idx: usize,
    input_len: usize,
}

impl<'a> CoeffParser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|t| &t.tok)
    }

    fn pos(&self) -> usize {
        self.toks
            .get(self.idx)
            .map(|t| t.pos)
            .unwrap_or(self.input_len)
    }

    fn bump(&mut self) -> Option<&'a SpannedTok> {
        let t = self.toks.get(self.idx);
        self.idx += 1;
        t
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), msg: msg.to_string() })
    }

    fn expect_end(&self) -> Result<()> {
        if self.idx == self.toks.len() {
            Ok(())
        } else {
            self.err("unexpected trailing input")
        }
    }

    fn expr(&mut self) -> Result<CoeffRat> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<CoeffRat> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = acc.mul(&self.factor()?);
                }
                Some(Tok::Slash) => {
                    self.bump();
                    acc = acc.div(&self.factor()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<CoeffRat> {
        let negate = matches!(self.peek(), Some(Tok::Minus));
        if negate {
            self.bump();
        }
        let atom = self.atom()?;
        let value = if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            let e = self.signed_int()?;
            atom.pow(e)?
        } else {
            atom
        };
        Ok(if negate { value.neg() } else { value })
    }

    fn atom(&mut self) -> Result<CoeffRat> {
        match self.peek() {
            Some(Tok::Q) => {
                self.bump();
                Ok(CoeffRat::q())
            }
            Some(Tok::Int(_)) => {
                let t = self.bump().unwrap();
                if let Tok::Int(n) = &t.tok {
                    Ok(CoeffRat::from_rational(BigRational::from(n.clone())))
                } else {
                    unreachable!()
                }
            }
            Some(Tok::LParen) => {
                self.bump();
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.bump();
                        Ok(inner)
                    }
                    _ => self.err("expected ')'"),
                }
            }
            Some(Tok::Ident(name)) => {
                let msg = format!("unexpected identifier '{}' in coefficient", name);
                Err(Error::Parse { pos: self.pos(), msg })
            }
            _ => self.err("expected 'q', an integer, or '('"),
        }
    }

    fn signed_int(&mut self) -> Result<i64> {
        let negate = matches!(self.peek(), Some(Tok::Minus));
        if negate {
            self.bump();
        }
        match self.peek() {
            Some(Tok::Int(_)) => {
                let t = self.bump().unwrap();
                if let Tok::Int(n) = &t.tok {
                    let v: i64 = n.try_into().map_err(|_| Error::Parse {
                        pos: t.pos,
                        msg: "exponent too large".to_string(),
                    })?;
                    Ok(if negate { -v } else { v })
                } else {
                    unreachable!()
                }
            }
            _ => self.err("expected integer exponent after '^'"),
        }
    }
}

/// Total order on coefficients used only to make reports deterministic.
pub fn coeff_sort_key(c: &CoeffRat) -> (usize, String) {
    (c.numerator().coeffs().len(), c.to_expr_string())
}

impl PartialOrd for CoeffRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(coeff_sort_key(self).cmp(&coeff_sort_key(other)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    fn poly(coeffs: &[i64]) -> QPolynomial {
        QPolynomial::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    #[test]
    fn cancels_common_factors() {
        // (q^2 - 1)/(q - 1) collapses to q + 1.
        let c = parse_coeff("(q^2 - 1)/(q - 1)").unwrap();
        assert_eq!(c, CoeffRat::from_poly(poly(&[1, 1])));
        assert!(c.denominator().is_one());
    }

    #[test]
    fn negative_powers_move_to_denominator() {
        let c = parse_coeff("q - q^-1").unwrap();
        assert_eq!(c.numerator(), &poly(&[-1, 0, 1]));
        assert_eq!(c.denominator(), &poly(&[0, 1]));
    }

    #[test]
    fn unary_minus_distributes() {
        let c = parse_coeff("-(q - q^-1)").unwrap();
        assert_eq!(c.numerator(), &poly(&[1, 0, -1]));
        assert_eq!(c.denominator(), &poly(&[0, 1]));
    }

    #[test]
    fn juxtaposition_is_rejected() {
        assert!(matches!(parse_coeff("2q"), Err(Error::Parse { .. })));
        assert!(matches!(parse_coeff("q 2"), Err(Error::Parse { .. })));
        assert!(matches!(parse_coeff("(q+1)(q-1)"), Err(Error::Parse { .. })));
    }

    #[test]
    fn parse_error_positions_point_at_the_problem() {
        match parse_coeff("q + ") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected parse error, got {:?}", other),
        }
        match parse_coeff("q ^ x") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected parse error, got {:?}", other),
        }
    }

    #[test]
    fn division_by_zero_is_reported() {
        assert!(matches!(parse_coeff("1/(q - q)"), Err(Error::DivisionByZero)));
        assert!(matches!(
            parse_coeff("(q - q)^-1"),
            Err(Error::ZeroToNegativePower)
        ));
    }

    #[test]
    fn roots_of_unity_are_exactly_plus_minus_one() {
        assert!(parse_coeff("1").unwrap().is_root_of_unity().unwrap());
        assert!(parse_coeff("-1").unwrap().is_root_of_unity().unwrap());
        assert!(!parse_coeff("q").unwrap().is_root_of_unity().unwrap());
        assert!(!parse_coeff("-q").unwrap().is_root_of_unity().unwrap());
        assert!(!parse_coeff("2").unwrap().is_root_of_unity().unwrap());
        assert!(!parse_coeff("(q+1)/2").unwrap().is_root_of_unity().unwrap());
        assert!(matches!(
            CoeffRat::zero().is_root_of_unity(),
            Err(Error::ZeroElement)
        ));
    }

    #[test]
    fn q_power_recognition() {
        assert_eq!(parse_coeff("q^3").unwrap().as_signed_q_power(), Some((false, 3)));
        assert_eq!(parse_coeff("-q^-2").unwrap().as_signed_q_power(), Some((true, -2)));
        assert_eq!(parse_coeff("1").unwrap().as_signed_q_power(), Some((false, 0)));
        assert_eq!(parse_coeff("q + 1").unwrap().as_signed_q_power(), None);
        assert_eq!(parse_coeff("2*q").unwrap().as_signed_q_power(), None);
    }

    #[test]
    fn zero_pow_zero_is_one() {
        assert!(CoeffRat::zero().pow(0).unwrap().is_one());
        assert!(matches!(
            CoeffRat::zero().pow(-1),
            Err(Error::ZeroToNegativePower)
        ));
    }

    #[test]
    fn printing_matches_expected_shapes() {
        assert_eq!(parse_coeff("q - q^-1").unwrap().to_expr_string(), "(q^2 - 1)/q");
        assert_eq!(parse_coeff("q^0").unwrap().to_expr_string(), "1");
        assert_eq!(parse_coeff("1/(1-q)").unwrap().to_expr_string(), "-1/(q - 1)");
        assert_eq!(
            parse_coeff("(q^2-1)/(2*q-2)").unwrap().to_expr_string(),
            "1/2*q + 1/2"
        );
        assert_eq!(parse_coeff("0").unwrap().to_expr_string(), "0");
        assert_eq!(parse_coeff("q^-2").unwrap().to_expr_string(), "1/q^2");
    }

    #[test]
    fn product_factor_splits_sign() {
        assert_eq!(parse_coeff("-q").unwrap().as_product_factor(), (true, "q".into()));
        assert_eq!(parse_coeff("1").unwrap().as_product_factor(), (false, String::new()));
        assert_eq!(
            parse_coeff("1-q").unwrap().as_product_factor(),
            (true, "(q - 1)".into())
        );
        assert_eq!(
            parse_coeff("1/(q-1)").unwrap().as_product_factor(),
            (false, "1/(q - 1)".into())
        );
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_rational() -> impl Strategy<Value = BigRational> {
            (-6i64..=6, 1i64..=4).prop_map(|(n, d)| {
                BigRational::new(BigInt::from(n), BigInt::from(d))
            })
        }

        fn arb_poly(max_deg: usize) -> impl Strategy<Value = QPolynomial> {
            proptest::collection::vec(arb_rational(), 0..=max_deg)
                .prop_map(QPolynomial::new)
        }

        fn arb_coeff() -> impl Strategy<Value = CoeffRat> {
            (arb_poly(4), arb_poly(3)).prop_filter_map("nonzero denominator", |(n, d)| {
                CoeffRat::new(n, d).ok()
            })
        }

        proptest! {
            #[test]
            fn field_laws(a in arb_coeff(), b in arb_coeff(), c in arb_coeff()) {
                prop_assert_eq!(a.add(&b), b.add(&a));
                prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
                prop_assert_eq!(a.mul(&b), b.mul(&a));
                prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
                prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
                prop_assert_eq!(a.sub(&a), CoeffRat::zero());
                if !a.is_zero() {
                    prop_assert_eq!(a.mul(&a.inv().unwrap()), CoeffRat::one());
                }
            }

            #[test]
            fn canonical_form_holds(a in arb_coeff()) {
                let den = a.denominator();
                prop_assert!(den.leading().map_or(false, |l| l.is_one()));
                if !a.is_zero() {
                    prop_assert!(a.numerator().gcd(den).is_one());
                } else {
                    prop_assert!(den.is_one());
                }
            }

            #[test]
            fn print_parse_round_trip(a in arb_coeff()) {
                let text = a.to_expr_string();
                let back = parse_coeff(&text).unwrap();
                prop_assert_eq!(back, a);
            }

            #[test]
            fn pow_matches_repeated_multiplication(a in arb_coeff(), e in 0i64..5) {
                let mut acc = CoeffRat::one();
                for _ in 0..e {
                    acc = acc.mul(&a);
                }
                prop_assert_eq!(a.pow(e).unwrap(), acc);
            }
        }
    }
}
