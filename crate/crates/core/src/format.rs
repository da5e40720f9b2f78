//! Text formats: polynomial and field-element literals, model files and
//! lattice configuration files. Every error carries a 1-based line and
//! column.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::field::{Fe, Field};
use crate::lattice::{Contact, LatticeConfig};
use crate::lift::IntPoly;
use crate::poly::UniPoly;
use crate::tate::KodairaType;
use crate::weierstrass::{IntegerModel, WeierstrassModel, WEIGHTS};

/// Largest exponent accepted in a literal.
pub const MAX_EXPONENT: u64 = 4096;
/// Longest integer literal accepted, in digits.
pub const MAX_DIGITS: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        column,
        message: message.into(),
    })
}

/// A coefficient as written: an integer or an element of GF(p^k).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coef {
    Int(BigInt),
    Field { p: u32, k: u32, coeffs: Vec<u32> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coef: Coef,
    pub negative: bool,
    pub exponent: usize,
    /// Column of the term start, for error reporting.
    pub column: usize,
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
    line: usize,
    /// Column offset of `s` within its line (0-based).
    offset: usize,
}

impl<'a> Cursor<'a> {
    fn col(&self) -> usize {
        self.offset + self.pos + 1
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && (self.s[self.pos] == b' ' || self.s[self.pos] == b'\t') {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        err(self.line, self.col(), msg)
    }

    fn digits(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return self.fail("expected a digit");
        }
        if self.pos - start > MAX_DIGITS {
            self.pos = start;
            return self.fail(format!("integer longer than {MAX_DIGITS} digits"));
        }
        Ok(String::from_utf8_lossy(&self.s[start..self.pos]).into_owned())
    }

    fn small(&mut self, what: &str, max: u64) -> Result<u64, ParseError> {
        let col = self.col();
        let d = self.digits()?;
        match d.parse::<u64>() {
            Ok(v) if v <= max => Ok(v),
            _ => err(self.line, col, format!("{what} {d} exceeds {max}")),
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphabetic() || self.s[self.pos] == b'_') {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.s[start..self.pos]).into_owned())
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }
}

/// Field literal body after `p^`: `k:c0,c1,...`.
fn field_literal_tail(c: &mut Cursor, p: u64) -> Result<Coef, ParseError> {
    let k = c.small("extension degree", 64)?;
    if !c.eat(b':') {
        return c.fail("expected ':' in field literal p^k:c0,c1,...");
    }
    let mut coeffs = Vec::new();
    loop {
        coeffs.push(c.small("digit", u32::MAX as u64)? as u32);
        if coeffs.len() > 64 {
            return c.fail("too many digits in field literal");
        }
        if !c.eat(b',') {
            break;
        }
    }
    Ok(Coef::Field {
        p: p as u32,
        k: k as u32,
        coeffs,
    })
}

fn coefficient(c: &mut Cursor) -> Result<Coef, ParseError> {
    if c.eat(b'(') {
        let col = c.col();
        let p = c.small("characteristic", u32::MAX as u64)?;
        if !c.eat(b'^') {
            return err(c.line, col, "expected a field literal p^k:c0,c1,... inside parentheses");
        }
        let lit = field_literal_tail(c, p)?;
        if !c.eat(b')') {
            return c.fail("expected ')'");
        }
        return Ok(lit);
    }
    let d = c.digits()?;
    // p^k:... without parentheses; `t^n` never starts with a digit.
    let save = c.pos;
    if c.eat(b'^') {
        let k_start = c.pos;
        let is_field = {
            let mut q = k_start;
            while q < c.s.len() && (c.s[q].is_ascii_digit() || c.s[q] == b' ') {
                q += 1;
            }
            c.s.get(q) == Some(&b':')
        };
        if is_field {
            let p = match d.parse::<u64>() {
                Ok(p) if p <= u32::MAX as u64 => p,
                _ => return c.fail("characteristic too large"),
            };
            return field_literal_tail(c, p);
        }
        c.pos = save;
        return c.fail("integer powers are not supported; write field literals as p^k:c0,c1,...");
    }
    Ok(Coef::Int(d.parse::<BigInt>().expect("digits")))
}

fn parse_terms(c: &mut Cursor, var: &str) -> Result<Vec<Term>, ParseError> {
    let mut terms = Vec::new();
    let mut first = true;
    loop {
        let column = {
            c.skip_ws();
            c.col()
        };
        let mut negative = false;
        if c.eat(b'+') {
            if first {
                return c.fail("unexpected '+'");
            }
        } else if c.eat(b'-') {
            negative = true;
        } else if !first {
            return c.fail("expected '+' or '-'");
        }
        first = false;
        let mut coef = None;
        match c.peek() {
            Some(b) if b.is_ascii_digit() || b == b'(' => {
                coef = Some(coefficient(c)?);
                if !c.eat(b'*') {
                    // A bare coefficient is a constant term.
                    terms.push(Term {
                        coef: coef.take().expect("set"),
                        negative,
                        exponent: 0,
                        column,
                    });
                    if c.at_end() {
                        break;
                    }
                    continue;
                }
            }
            _ => {}
        }
        let vcol = c.col();
        match c.ident() {
            Some(name) if name == var => {}
            Some(name) => return err(c.line, vcol, format!("unknown variable '{name}', expected '{var}'")),
            None => return c.fail(format!("expected a coefficient or '{var}'")),
        }
        let exponent = if c.eat(b'^') {
            c.small("exponent", MAX_EXPONENT)? as usize
        } else {
            1
        };
        terms.push(Term {
            coef: coef.unwrap_or(Coef::Int(BigInt::from(1))),
            negative,
            exponent,
            column,
        });
        if c.at_end() {
            break;
        }
    }
    Ok(terms)
}

fn cursor(s: &str, line: usize, offset: usize) -> Cursor<'_> {
    Cursor {
        s: s.as_bytes(),
        pos: 0,
        line,
        offset,
    }
}

/// Parse the terms of a polynomial literal in `var`.
pub fn parse_terms_at(s: &str, var: &str, line: usize, offset: usize) -> Result<Vec<Term>, ParseError> {
    let mut c = cursor(s, line, offset);
    if c.at_end() {
        return c.fail("empty polynomial");
    }
    parse_terms(&mut c, var)
}

/// Value of a coefficient in `field`, embedding field literals of subfields.
pub fn coef_in_field(coef: &Coef, field: &Field) -> Result<Fe, String> {
    match coef {
        Coef::Int(n) => {
            let p = BigInt::from(field.characteristic());
            Ok(field.from_int(n.mod_floor(&p).to_i64().expect("residue fits")))
        }
        Coef::Field { p, k, coeffs } => {
            if *p != field.characteristic() || *k == 0 || !field.degree().is_multiple_of(*k) {
                return Err(format!(
                    "literal in GF({p}^{k}) does not embed in GF({}^{})",
                    field.characteristic(),
                    field.degree()
                ));
            }
            if coeffs.len() > *k as usize {
                return Err(format!("{} digits for a degree-{k} field", coeffs.len()));
            }
            if let Some(d) = coeffs.iter().find(|&&d| d >= *p) {
                return Err(format!("digit {d} is not below {p}"));
            }
            let small = Field::new(*p, *k).map_err(|e| e.to_string())?;
            let x = small.from_coeffs(coeffs).map_err(|e| e.to_string())?;
            let e = small.embedding_into(field).map_err(|e| e.to_string())?;
            Ok(e.apply(x))
        }
    }
}

fn terms_to_poly(terms: &[Term], field: &Field, line: usize) -> Result<UniPoly, ParseError> {
    let deg = terms.iter().map(|t| t.exponent).max().unwrap_or(0);
    let mut v = vec![Fe::ZERO; deg + 1];
    for t in terms {
        let mut x = coef_in_field(&t.coef, field).or_else(|m| err(line, t.column, m))?;
        if t.negative {
            x = field.neg(x);
        }
        v[t.exponent] = field.add(v[t.exponent], x);
    }
    Ok(UniPoly::new(field, v))
}

fn terms_to_int_poly(terms: &[Term], line: usize) -> Result<IntPoly, ParseError> {
    let deg = terms.iter().map(|t| t.exponent).max().unwrap_or(0);
    let mut v = vec![BigInt::zero(); deg + 1];
    for t in terms {
        match &t.coef {
            Coef::Int(n) => {
                if t.negative {
                    v[t.exponent] -= n;
                } else {
                    v[t.exponent] += n;
                }
            }
            Coef::Field { .. } => return err(line, t.column, "field literal in an integer model"),
        }
    }
    Ok(IntPoly::new(v))
}

/// Parse a polynomial literal such as `1 + 2*t + (2^2:0,1)*t^3` over `field`.
pub fn parse_poly(s: &str, field: &Field, var: &str) -> Result<UniPoly, ParseError> {
    let terms = parse_terms_at(s, var, 1, 0)?;
    terms_to_poly(&terms, field, 1)
}

/// Parse a polynomial literal with integer coefficients.
pub fn parse_int_poly(s: &str, var: &str) -> Result<IntPoly, ParseError> {
    let terms = parse_terms_at(s, var, 1, 0)?;
    terms_to_int_poly(&terms, 1)
}

/// Parse a field-element literal `p^k:c0,c1,...` or a plain integer.
pub fn parse_field_literal(s: &str) -> Result<Coef, ParseError> {
    let mut c = cursor(s, 1, 0);
    if c.at_end() {
        return c.fail("empty literal");
    }
    let coef = coefficient(&mut c)?;
    if !c.at_end() {
        return c.fail("trailing input after literal");
    }
    if let Coef::Field { p, k, coeffs } = &coef {
        if !crate::field::is_prime(*p as u64) {
            return err(1, 1, format!("{p} is not prime"));
        }
        if *k == 0 {
            return err(1, 1, "extension degree must be positive");
        }
        if coeffs.len() > *k as usize || coeffs.iter().any(|&d| d >= *p) {
            return err(1, 1, "digits must be below p and at most k of them");
        }
    }
    Ok(coef)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyModel {
    Finite(WeierstrassModel),
    Integer(IntegerModel),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelFile {
    pub model: AnyModel,
    pub var: String,
}

impl ModelFile {
    pub fn finite(&self) -> Option<&WeierstrassModel> {
        match &self.model {
            AnyModel::Finite(m) => Some(m),
            AnyModel::Integer(_) => None,
        }
    }
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

/// `key=value` pairs on a line, with the 0-based column of each value.
fn key_values(line: &str, lno: usize) -> Result<Vec<(String, String, usize, usize)>, ParseError> {
    let mut out = Vec::new();
    let bytes = line.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        while i < bytes.len() && bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        if i >= bytes.len() {
            break;
        }
        let kstart = i;
        while i < bytes.len() && bytes[i] != b'=' && !bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        if i >= bytes.len() || bytes[i] != b'=' {
            return err(lno, kstart + 1, "expected key=value");
        }
        let key = line[kstart..i].to_string();
        i += 1;
        let vstart = i;
        while i < bytes.len() && !bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        out.push((key, line[vstart..i].to_string(), kstart, vstart));
    }
    Ok(out)
}

/// Parse a model file: a header `char=p ext=k` (optionally `var=s`), then
/// lines `a1=...` ... `a6=...`. Missing coefficients are zero.
pub fn parse_model(text: &str) -> Result<ModelFile, ParseError> {
    let mut p: Option<(u32, usize, usize)> = None;
    let mut k: Option<(u32, usize, usize)> = None;
    let mut var = "t".to_string();
    let mut coeffs: [Option<(String, usize, usize)>; 5] = Default::default();
    let mut seen_coeff = false;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let lno = idx + 1;
        last_line = lno;
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let trimmed = line.trim_start();
        let indent = line.len() - trimmed.len();
        if let Some(rest) = trimmed.strip_prefix('a') {
            let digit = rest.bytes().next();
            if let Some(d @ b'0'..=b'9') = digit {
                let i = (d - b'0') as usize;
                let Some(slot) = WEIGHTS.iter().position(|&w| w == i) else {
                    return err(lno, indent + 1, format!("no Weierstrass coefficient a{i}"));
                };
                let after = &rest[1..];
                let Some(body) = after.trim_start().strip_prefix('=') else {
                    return err(lno, indent + 3, "expected '=' after coefficient name");
                };
                if coeffs[slot].is_some() {
                    return err(lno, indent + 1, format!("duplicate a{i}"));
                }
                let vcol = line.len() - body.len();
                coeffs[slot] = Some((body.to_string(), lno, vcol));
                seen_coeff = true;
                continue;
            }
        }
        if seen_coeff {
            return err(lno, indent + 1, "header keys must precede the coefficients");
        }
        for (key, value, kcol, vcol) in key_values(line, lno)? {
            let number = || -> Result<u32, ParseError> {
                match value.parse::<u32>() {
                    Ok(v) => Ok(v),
                    Err(_) => err(lno, vcol + 1, format!("expected a nonnegative integer, got '{value}'")),
                }
            };
            match key.as_str() {
                "char" if p.is_none() => p = Some((number()?, lno, vcol)),
                "ext" if k.is_none() => k = Some((number()?, lno, vcol)),
                "var" => {
                    let ok = !value.is_empty() && value.bytes().all(|b| b.is_ascii_alphabetic() || b == b'_');
                    if !ok {
                        return err(lno, vcol + 1, format!("invalid variable name '{value}'"));
                    }
                    var = value;
                }
                "char" | "ext" => return err(lno, kcol + 1, format!("duplicate key '{key}'")),
                _ => return err(lno, kcol + 1, format!("unknown key '{key}'")),
            }
        }
    }
    let Some((p, pl, pc)) = p else {
        return err(last_line.max(1), 1, "missing header key 'char'");
    };
    let (k, kl, kc) = k.unwrap_or((1, pl, pc));
    let model = if p == 0 {
        if k != 1 {
            return err(kl, kc + 1, "integer models have ext=1");
        }
        let mut a: [IntPoly; 5] = Default::default();
        for (slot, c) in coeffs.iter().enumerate() {
            if let Some((body, lno, col)) = c {
                let terms = parse_terms_at(body, &var, *lno, *col)?;
                a[slot] = terms_to_int_poly(&terms, *lno)?;
            }
        }
        AnyModel::Integer(IntegerModel { a })
    } else {
        if !crate::field::is_prime(p as u64) {
            return err(pl, pc + 1, format!("{p} is not prime"));
        }
        let field = match Field::new(p, k) {
            Ok(f) => f,
            Err(e) => return err(kl, kc + 1, e.to_string()),
        };
        let mut a: [UniPoly; 5] = std::array::from_fn(|_| UniPoly::zero(&field));
        for (slot, c) in coeffs.iter().enumerate() {
            if let Some((body, lno, col)) = c {
                let terms = parse_terms_at(body, &var, *lno, *col)?;
                a[slot] = terms_to_poly(&terms, &field, *lno)?;
            }
        }
        AnyModel::Finite(WeierstrassModel::from_array(a).expect("one field"))
    };
    Ok(ModelFile { model, var })
}

fn parse_contact(s: &str) -> Option<Contact> {
    Some(match s {
        "id" | "identity" => Contact::Identity,
        "near" => Contact::Near,
        "far" => Contact::Far,
        "nonid" => Contact::NonIdentity,
        _ => Contact::Cyclic(s.parse().ok()?),
    })
}

/// Parse a lattice configuration: `fibers=I15*,I2`, `torsion=1`,
/// `mw_rank=0|1`, `contact=far,id` (aligned with the fibres), `p_o=3`.
pub fn parse_lattice_config(text: &str) -> Result<LatticeConfig, ParseError> {
    let mut fibres: Option<Vec<KodairaType>> = None;
    let mut torsion = 1u32;
    let mut rank = 0u32;
    let mut contacts: Option<Vec<Contact>> = None;
    let mut p_o: Option<i64> = None;
    let mut contact_pos = (1, 1);
    for (idx, raw) in text.lines().enumerate() {
        let lno = idx + 1;
        let line = strip_comment(raw);
        for (key, value, kcol, vcol) in key_values(line, lno)? {
            let list = |value: &str| -> Vec<(String, usize)> {
                let mut col = vcol;
                value
                    .split(',')
                    .map(|item| {
                        let c = col;
                        col += item.len() + 1;
                        (item.to_string(), c)
                    })
                    .collect()
            };
            let number = |value: &str| -> Result<u32, ParseError> {
                value
                    .parse::<u32>()
                    .or_else(|_| err(lno, vcol + 1, format!("expected a nonnegative integer, got '{value}'")))
            };
            match key.as_str() {
                "fibers" | "fibres" => {
                    let mut v = Vec::new();
                    for (item, c) in list(&value) {
                        match item.parse::<KodairaType>() {
                            Ok(t) => v.push(t),
                            Err(e) => return err(lno, c + 1, e.to_string()),
                        }
                    }
                    fibres = Some(v);
                }
                "torsion" => torsion = number(&value)?,
                "mw_rank" => rank = number(&value)?,
                "contact" => {
                    let mut v = Vec::new();
                    for (item, c) in list(&value) {
                        match parse_contact(&item) {
                            Some(x) => v.push(x),
                            None => return err(lno, c + 1, format!("unknown contact '{item}'")),
                        }
                    }
                    contacts = Some(v);
                    contact_pos = (lno, vcol + 1);
                }
                "p_o" => p_o = Some(number(&value)? as i64),
                _ => return err(lno, kcol + 1, format!("unknown key '{key}'")),
            }
        }
    }
    let Some(fibres) = fibres else {
        return err(1, 1, "missing key 'fibers'");
    };
    let cfg = LatticeConfig {
        fibres,
        mw_rank: rank,
        torsion_order: torsion,
        section_contact: contacts,
        p_o,
    };
    if let Err(e) = cfg.validate() {
        return err(contact_pos.0, contact_pos.1, e.to_string());
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_literals() {
        let f = Field::new(2, 2).unwrap();
        let p = parse_poly("1 + t + (2^2:0,1)*t^3", &f, "t").unwrap();
        assert_eq!(p.coeffs(), &[Fe(1), Fe(1), Fe(0), Fe(2)]);
        let q = parse_poly("2^2:1,1*t - t^2 + 3", &f, "t").unwrap();
        assert_eq!(q.coeffs(), &[Fe(1), Fe(3), Fe(1)]);
        let g3 = Field::prime(3).unwrap();
        let r = parse_poly("-s - 2*s^3", &g3, "s").unwrap();
        assert_eq!(r, UniPoly::from_ints(&g3, &[0, -1, 0, -2]));
        assert_eq!(parse_int_poly("-1 + 4*t + 7*t^2", "t").unwrap(), IntPoly::from_i64(&[-1, 4, 7]));
    }

    #[test]
    fn poly_errors_have_positions() {
        let f = Field::prime(2).unwrap();
        let e = parse_poly("1 + x", &f, "t").unwrap_err();
        assert_eq!((e.line, e.column), (1, 5));
        let e = parse_poly("1 + t^99999", &f, "t").unwrap_err();
        assert_eq!(e.column, 7);
        let e = parse_poly("(3^1:1)*t", &f, "t").unwrap_err();
        assert_eq!(e.column, 1);
        assert!(parse_poly("", &f, "t").is_err());
        assert!(parse_poly("1 +", &f, "t").is_err());
        assert!(parse_poly("2^3", &f, "t").is_err());
        assert!(parse_poly("1 1", &f, "t").is_err());
    }

    #[test]
    fn field_literals() {
        assert_eq!(
            parse_field_literal("2^4:1,0,1").unwrap(),
            Coef::Field {
                p: 2,
                k: 4,
                coeffs: vec![1, 0, 1]
            }
        );
        assert_eq!(parse_field_literal("17").unwrap(), Coef::Int(BigInt::from(17)));
        assert!(parse_field_literal("4^2:1").is_err());
        assert!(parse_field_literal("2^2:1,1,1").is_err());
        assert!(parse_field_literal("2^2:2").is_err());
    }

    #[test]
    fn model_files() {
        let text = "# char-3 example\nchar=3 ext=1\nvar=s\na2 = 2*s + s^3\na4=s^6+s^8\na6=2*s^11\n";
        let m = parse_model(text).unwrap();
        assert_eq!(m.var, "s");
        let w = m.finite().unwrap();
        assert_eq!(w.a(6), &UniPoly::monomial(w.field(), Fe(2), 11));
        assert!(w.a(1).is_zero());
        let back = parse_model(&w.format("s")).unwrap();
        assert_eq!(back.finite().unwrap(), w);

        let e = parse_model("char=2\na5=t\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 1));
        let e = parse_model("char=2\na1=t + y\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 8));
        let e = parse_model("char=4\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 6));
        assert!(parse_model("a1=t\n").is_err());
        let i = parse_model("char=0\na6=1\n").unwrap();
        assert!(matches!(i.model, AnyModel::Integer(_)));
    }

    #[test]
    fn lattice_configs() {
        let c = parse_lattice_config("fibers=I15*,I2\ntorsion=2\n").unwrap();
        assert_eq!(c.fibres, vec![KodairaType::IStar(15), KodairaType::I(2)]);
        assert_eq!(c.torsion_order, 2);
        let c = parse_lattice_config("fibers=I20\nmw_rank=1\ncontact=3\np_o=2\n").unwrap();
        assert_eq!(c.section_contact, Some(vec![Contact::Cyclic(3)]));
        let e = parse_lattice_config("fibers=I15*,V\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 13));
        assert!(parse_lattice_config("fibers=I20\nmw_rank=1\n").is_err());
    }
}
