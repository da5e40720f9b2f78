//! Dense univariate polynomials over a finite field, places of the
//! projective line, and valuations.

use std::fmt;

use thiserror::Error;

use crate::field::{Fe, Field, FieldElement, FieldError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("the place at infinity needs an ambient degree bound")]
    MissingBound,
    #[error("degree {degree} exceeds the ambient bound {bound}")]
    DegreeBound { degree: usize, bound: usize },
    #[error("polynomials over different fields")]
    MismatchedFields,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Commutative ring operations shared by every coefficient ring the
/// discriminant formulas are evaluated in. The receiver supplies context
/// (the field, the lifted modulus) for constants.
pub trait Ring: Clone + PartialEq {
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn constant(&self, n: i64) -> Self;
    fn is_zero(&self) -> bool;

    fn square(&self) -> Self {
        self.mul(self)
    }
    fn scale(&self, n: i64) -> Self {
        self.mul(&self.constant(n))
    }
}

/// A polynomial in the base parameter, little-endian, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    field: Field,
    coeffs: Vec<Fe>,
}

/// A valuation: a finite order or `+inf` for the zero polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
    pub fn at_least(self, n: u32) -> bool {
        match self {
            Valuation::Finite(v) => v >= n,
            Valuation::Infinite => true,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// A geometric point of P^1: a finite point in some extension of the
/// coefficient field, or infinity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Place {
    Finite(FieldElement),
    Infinity,
}

impl Place {
    pub fn finite(field: &Field, value: Fe) -> Place {
        Place::Finite(field.element(value))
    }

    pub fn zero(field: &Field) -> Place {
        Place::finite(field, Fe::ZERO)
    }

    /// `var=value` label used in reports.
    pub fn label(&self, var: &str) -> String {
        match self {
            Place::Finite(e) => format!("{var}={e}"),
            Place::Infinity => format!("{var}=inf"),
        }
    }
}

impl UniPoly {
    pub fn new(field: &Field, mut coeffs: Vec<Fe>) -> UniPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &Field) -> UniPoly {
        UniPoly::new(field, Vec::new())
    }

    pub fn one(field: &Field) -> UniPoly {
        UniPoly::new(field, vec![Fe::ONE])
    }

    pub fn constant_poly(field: &Field, c: Fe) -> UniPoly {
        UniPoly::new(field, vec![c])
    }

    /// `c * t^n`.
    pub fn monomial(field: &Field, c: Fe, n: usize) -> UniPoly {
        let mut v = vec![Fe::ZERO; n + 1];
        v[n] = c;
        UniPoly::new(field, v)
    }

    /// The parameter `t`.
    pub fn t(field: &Field) -> UniPoly {
        UniPoly::monomial(field, Fe::ONE, 1)
    }

    /// From small integer coefficients, reduced mod p.
    pub fn from_ints(field: &Field, cs: &[i64]) -> UniPoly {
        UniPoly::new(field, cs.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    /// Coefficient of `t^j` (zero beyond the degree).
    #[inline]
    pub fn coeff(&self, j: usize) -> Fe {
        self.coeffs.get(j).copied().unwrap_or(Fe::ZERO)
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn neg(&self) -> UniPoly {
        let f = &self.field;
        UniPoly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn scale_by(&self, c: Fe) -> UniPoly {
        let f = &self.field;
        UniPoly::new(f, self.coeffs.iter().map(|&x| f.mul(x, c)).collect())
    }

    /// Multiply by `t^n`.
    pub fn shift(&self, n: usize) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![Fe::ZERO; n];
        v.extend_from_slice(&self.coeffs);
        UniPoly::new(&self.field, v)
    }

    /// Divide by `t^n`, dropping lower-order terms. Exact when `t^n | self`.
    pub fn unshift(&self, n: usize) -> UniPoly {
        UniPoly::new(&self.field, self.coeffs.iter().skip(n).copied().collect())
    }

    pub fn eval(&self, x: Fe) -> Fe {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(Fe::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn pow(&self, mut e: u32) -> UniPoly {
        let mut base = self.clone();
        let mut acc = UniPoly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// `self(t + c)`.
    pub fn translate(&self, c: Fe) -> UniPoly {
        let f = &self.field;
        // Horner in the shifted variable: acc <- acc * (t + c) + a_i.
        let mut acc: Vec<Fe> = Vec::with_capacity(self.coeffs.len());
        for &a in self.coeffs.iter().rev() {
            let mut next = vec![Fe::ZERO; acc.len() + 1];
            for (i, &x) in acc.iter().enumerate() {
                next[i + 1] = f.add(next[i + 1], x);
                next[i] = f.add(next[i], f.mul(x, c));
            }
            next[0] = f.add(next[0], a);
            acc = next;
        }
        UniPoly::new(f, acc)
    }

    /// Move every coefficient into an extension field.
    pub fn embed(&self, target: &Field) -> Result<UniPoly, PolyError> {
        if &self.field == target {
            return Ok(self.clone());
        }
        let e = self.field.embedding_into(target)?;
        Ok(UniPoly::new(
            target,
            self.coeffs.iter().map(|&c| e.apply(c)).collect(),
        ))
    }

    /// `t^bound * self(1/t)`; requires `deg self <= bound`.
    pub fn reverse(&self, bound: usize) -> Result<UniPoly, PolyError> {
        match self.degree() {
            None => Ok(self.clone()),
            Some(d) if d > bound => Err(PolyError::DegreeBound { degree: d, bound }),
            Some(_) => {
                let mut v = vec![Fe::ZERO; bound + 1];
                for (i, &c) in self.coeffs.iter().enumerate() {
                    v[bound - i] = c;
                }
                Ok(UniPoly::new(&self.field, v))
            }
        }
    }

    pub fn derivative(&self) -> UniPoly {
        let f = &self.field;
        UniPoly::new(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.scale_int(c, i as i64))
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let f = &self.field;
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = f.inv(d.coeffs[dd]).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UniPoly::zero(f), self.clone());
        }
        let mut quot = vec![Fe::ZERO; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = f.mul(rem[i + dd], lead_inv);
            quot[i] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &dc) in d.coeffs.iter().enumerate() {
                rem[i + j] = f.sub(rem[i + j], f.mul(c, dc));
            }
        }
        rem.truncate(dd);
        (UniPoly::new(f, quot), UniPoly::new(f, rem))
    }

    pub fn monic(&self) -> UniPoly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&l) => self.scale_by(self.field.inv(l).expect("nonzero leading coefficient")),
        }
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Valuation at a finite point `x`, which must lie in this polynomial's
    /// field.
    pub fn valuation_at(&self, x: Fe) -> Valuation {
        if self.is_zero() {
            return Valuation::Infinite;
        }
        if x.is_zero() {
            let v = self.coeffs.iter().take_while(|c| c.is_zero()).count();
            return Valuation::Finite(v as u32);
        }
        // Repeated synthetic division by (t - x).
        let f = &self.field;
        let mut cur = self.coeffs.clone();
        let mut v = 0u32;
        loop {
            let n = cur.len();
            let mut q = vec![Fe::ZERO; n - 1];
            let mut acc = Fe::ZERO;
            for i in (0..n).rev() {
                acc = f.add(f.mul(acc, x), cur[i]);
                if i > 0 {
                    q[i - 1] = acc;
                }
            }
            if !acc.is_zero() {
                return Valuation::Finite(v);
            }
            v += 1;
            cur = q;
        }
    }

    /// Valuation at a place. Finite points may live in an extension of the
    /// coefficient field; the infinite place needs the ambient degree bound.
    pub fn valuation(&self, place: &Place, bound: Option<usize>) -> Result<Valuation, PolyError> {
        match place {
            Place::Infinity => {
                let bound = bound.ok_or(PolyError::MissingBound)?;
                match self.degree() {
                    None => Ok(Valuation::Infinite),
                    Some(d) if d > bound => Err(PolyError::DegreeBound { degree: d, bound }),
                    Some(d) => Ok(Valuation::Finite((bound - d) as u32)),
                }
            }
            Place::Finite(x) => {
                let g = self.embed(x.field())?;
                Ok(g.valuation_at(x.value()))
            }
        }
    }

    pub fn try_add(&self, other: &UniPoly) -> Result<UniPoly, PolyError> {
        if self.field != other.field {
            return Err(PolyError::MismatchedFields);
        }
        Ok(Ring::add(self, other))
    }

    pub fn try_mul(&self, other: &UniPoly) -> Result<UniPoly, PolyError> {
        if self.field != other.field {
            return Err(PolyError::MismatchedFields);
        }
        Ok(Ring::mul(self, other))
    }

    pub fn format(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let f = &self.field;
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cs = f.format(c);
            let cs = if f.degree() > 1 { format!("({cs})") } else { cs };
            let term = match (i, c == Fe::ONE) {
                (0, _) => cs,
                (1, true) => var.to_string(),
                (1, false) => format!("{cs}*{var}"),
                (_, true) => format!("{var}^{i}"),
                (_, false) => format!("{cs}*{var}^{i}"),
            };
            parts.push(term);
        }
        parts.join(" + ")
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format("t"))
    }
}

impl Ring for UniPoly {
    fn add(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new(
            f,
            (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect(),
        )
    }

    fn sub(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new(
            f,
            (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect(),
        )
    }

    fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(f);
        }
        let mut out = vec![Fe::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        UniPoly::new(f, out)
    }

    fn constant(&self, n: i64) -> Self {
        UniPoly::constant_poly(&self.field, self.field.from_int(n))
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// Geometric points where `f` vanishes, searched in extensions of the
/// coefficient field of total degree at most `max_ext` over the prime field.
#[derive(Debug, Clone)]
pub struct RootSearch {
    /// Each root with its multiplicity. One entry per geometric point.
    pub roots: Vec<(FieldElement, u32)>,
    /// Degree of `f` not accounted for by the roots found.
    pub unresolved_degree: usize,
}

impl RootSearch {
    pub fn complete(&self) -> bool {
        self.unresolved_degree == 0
    }
}

/// Find all roots of a nonzero `f` over GF(p^K) for every K with
/// k | K <= max_ext (k the degree of the coefficient field). Roots are
/// reported in the smallest field of the tower that contains them.
pub fn find_roots(f: &UniPoly, max_ext: u32) -> RootSearch {
    let base = f.field().clone();
    let (p, k) = (base.characteristic(), base.degree());
    let deg = f.degree().unwrap_or(0);
    let mut roots = Vec::new();
    let mut found = 0usize;
    let mut m = 1;
    while k * m <= max_ext && found < deg {
        let Ok(ext) = Field::new(p, k * m) else { break };
        if ext.order() as u64 > crate::field::MAX_ENUMERATION_ORDER {
            break;
        }
        let g = f.embed(&ext).expect("tower embedding");
        for x in ext.elements().expect("bounded order") {
            // Only points whose exact degree over the base is m.
            if ext.element_degree(x) / gcd_u32(ext.element_degree(x), k) != m {
                continue;
            }
            if let Valuation::Finite(v) = g.valuation_at(x) {
                if v > 0 {
                    roots.push((ext.element(x), v));
                    found += v as usize;
                }
            }
        }
        m += 1;
    }
    RootSearch {
        roots,
        unresolved_degree: deg - found,
    }
}

fn gcd_u32(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd_u32(b, a % b)
    }
}
