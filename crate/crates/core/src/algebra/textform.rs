//! Text format for polynomials: sums of terms `c*x^i*y^j*z^m`, with `^1`
//! and unit coefficients elidable, rationals written `a/b`. Over the binary
//! extension fields, integer literals are element bit patterns.

use crate::algebra::field::Field;
use crate::algebra::poly::{BivarPoly, Poly, TrivarPoly};
use crate::algebra::scalar::Scalar;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = vec![];
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' => {
                chars.next();
            }
            '+' => {
                chars.next();
                out.push(Tok::Plus);
            }
            '-' => {
                chars.next();
                out.push(Tok::Minus);
            }
            '*' => {
                chars.next();
                out.push(Tok::Star);
            }
            '^' => {
                chars.next();
                out.push(Tok::Caret);
            }
            'x' => {
                chars.next();
                out.push(Tok::Var(0));
            }
            'y' => {
                chars.next();
                out.push(Tok::Var(1));
            }
            'z' => {
                chars.next();
                out.push(Tok::Var(2));
            }
            '0'..='9' => {
                let mut num = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() || d == '/' {
                        num.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Num(num));
            }
            other => return Err(Error::Parse(format!("unexpected character '{other}'"))),
        }
    }
    Ok(out)
}

fn parse_coeff(field: Field, text: &str) -> Result<Scalar> {
    let parse_u = |t: &str| -> Result<i64> {
        t.parse::<i64>()
            .map_err(|_| Error::Parse(format!("bad integer '{t}'")))
    };
    match field {
        Field::Rational => {
            if let Some((n, d)) = text.split_once('/') {
                let n = parse_u(n)?;
                let d = parse_u(d)?;
                if d == 0 {
                    return Err(Error::Parse("zero denominator".into()));
                }
                Ok(Scalar::from_ratio(n, d))
            } else {
                Ok(Scalar::from_i64(field, parse_u(text)?))
            }
        }
        Field::Prime(_) => {
            if let Some((n, d)) = text.split_once('/') {
                let n = Scalar::from_i64(field, parse_u(n)?);
                let d = Scalar::from_i64(field, parse_u(d)?);
                n.div(&d).map_err(|_| Error::Parse("coefficient denominator is 0 mod p".into()))
            } else {
                Ok(Scalar::from_i64(field, parse_u(text)?))
            }
        }
        Field::Char2Ext(_) => {
            let v = parse_u(text)?;
            let v = u8::try_from(v).map_err(|_| Error::Parse(format!("'{text}' out of range")))?;
            Scalar::from_bits(field, v)
        }
    }
}

/// Parse a polynomial in up to `N` variables (x, y and z in that order).
pub fn parse_poly<const N: usize>(field: Field, text: &str) -> Result<Poly<N>> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut acc = Poly::<N>::zero(field);
    let mut i = 0;
    loop {
        // sign prefix
        let mut neg = false;
        while i < toks.len() {
            match toks[i] {
                Tok::Plus => i += 1,
                Tok::Minus => {
                    neg = !neg;
                    i += 1;
                }
                _ => break,
            }
        }
        if i >= toks.len() {
            return Err(Error::Parse("dangling sign".into()));
        }
        // one term: factors joined by optional '*'
        let mut coeff = Scalar::one(field);
        let mut exps = [0u32; N];
        let mut saw_factor = false;
        loop {
            match toks.get(i) {
                Some(Tok::Num(t)) => {
                    coeff = coeff.mul(&parse_coeff(field, t)?);
                    i += 1;
                    saw_factor = true;
                }
                Some(Tok::Var(v)) => {
                    if *v >= N {
                        return Err(Error::Parse(format!(
                            "variable '{}' not allowed here",
                            super::poly::VAR_NAMES[*v]
                        )));
                    }
                    let mut e = 1u32;
                    i += 1;
                    if let Some(Tok::Caret) = toks.get(i) {
                        i += 1;
                        match toks.get(i) {
                            Some(Tok::Num(t)) => {
                                e = t
                                    .parse::<u32>()
                                    .map_err(|_| Error::Parse(format!("bad exponent '{t}'")))?;
                                i += 1;
                            }
                            _ => return Err(Error::Parse("exponent expected after '^'".into())),
                        }
                    }
                    exps[*v] += e;
                    saw_factor = true;
                }
                _ => break,
            }
            if let Some(Tok::Star) = toks.get(i) {
                i += 1;
                continue;
            }
            // juxtaposition without '*' is also accepted
            match toks.get(i) {
                Some(Tok::Num(_)) | Some(Tok::Var(_)) => continue,
                _ => break,
            }
        }
        if !saw_factor {
            return Err(Error::Parse("empty term".into()));
        }
        if neg {
            coeff = coeff.neg();
        }
        acc = acc.add(&Poly::monomial(field, exps, coeff));
        match toks.get(i) {
            None => break,
            Some(Tok::Plus) | Some(Tok::Minus) => continue,
            Some(t) => return Err(Error::Parse(format!("unexpected token {t:?}"))),
        }
    }
    Ok(acc)
}

pub fn parse_bivar(field: Field, text: &str) -> Result<BivarPoly> {
    parse_poly::<2>(field, text)
}

pub fn parse_trivar(field: Field, text: &str) -> Result<TrivarPoly> {
    parse_poly::<3>(field, text)
}
