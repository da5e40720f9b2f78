//! Exact arithmetic in finite fields GF(p^k) and in the rationals.
//!
//! Elements of GF(p^k) are stored as their coefficient vector over GF(p) in
//! the polynomial basis `1, w, ..., w^(k-1)`, packed into a single integer
//! `c0 + c1 p + c2 p^2 + ...`. Multiplication goes through discrete-log
//! tables built once per field, so every field is capped at 2^20 elements.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

/// Exact rational numbers used by the lattice calculator.
pub type Rational = BigRational;

/// Build a rational from a numerator and a nonzero denominator.
pub fn rational(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Largest field for which log tables are built.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;
/// Largest field that [`Field::elements`] will enumerate.
pub const MAX_ENUMERATION_ORDER: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {p}^{k} is too large (limit {limit})")]
    TooLarge { p: u32, k: u32, limit: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different fields ({0} and {1})")]
    Mismatched(String, String),
    #[error("coefficient vector {0:?} does not describe an element of GF({1}^{2})")]
    BadCoefficients(Vec<u32>, u32, u32),
    #[error("GF({0}^{1}) does not embed into GF({2}^{3})")]
    NoEmbedding(u32, u32, u32, u32),
}

/// A field element, meaningful only together with its [`Field`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Tables {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus, little-endian, length k + 1.
    modulus: Vec<u32>,
    from_table: bool,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    pth_root: Vec<u32>,
    /// Full addition table for small odd-characteristic fields.
    add: Option<Vec<u32>>,
}

/// A finite field GF(p^k). Cheap to clone; tables are shared.
#[derive(Clone)]
pub struct Field(Arc<Tables>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.k == other.0.k && self.0.modulus == other.0.modulus)
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.k)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.k == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{})", self.0.p, self.0.k)
        }
    }
}

/// Conway polynomials for small (p, k), little-endian without the leading 1.
fn conway_table(p: u32, k: u32) -> Option<&'static [u32]> {
    let entry: &[u32] = match (p, k) {
        (2, 2) => &[1, 1],
        (2, 3) => &[1, 1, 0],
        (2, 4) => &[1, 1, 0, 0],
        (2, 5) => &[1, 0, 1, 0, 0],
        (2, 6) => &[1, 1, 0, 1, 1, 0],
        (2, 7) => &[1, 1, 0, 0, 0, 0, 0],
        (2, 8) => &[1, 0, 1, 1, 1, 0, 0, 0],
        (3, 2) => &[2, 2],
        (3, 3) => &[1, 2, 0],
        (3, 4) => &[2, 0, 0, 2],
        (3, 5) => &[1, 2, 0, 0, 0],
        (3, 6) => &[2, 2, 1, 0, 2, 0],
        (3, 7) => &[1, 0, 2, 0, 0, 0, 0],
        (3, 8) => &[2, 2, 2, 0, 1, 2, 0, 0],
        (5, 2) => &[2, 4],
        (5, 3) => &[3, 3, 0],
        (5, 4) => &[2, 4, 4, 0],
        (5, 5) => &[3, 4, 0, 0, 0],
        (5, 6) => &[2, 0, 1, 4, 1, 0],
        (7, 2) => &[3, 6],
        (7, 3) => &[4, 0, 6],
        (7, 4) => &[3, 4, 5, 0],
        (7, 5) => &[4, 1, 0, 0, 0],
        _ => return None,
    };
    Some(entry)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn digits(mut v: u32, p: u32, k: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(k as usize);
    for _ in 0..k {
        out.push(v % p);
        v /= p;
    }
    out
}

fn pack(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Exp table of `x` modulo `modulus` if `x` generates the multiplicative group.
fn primitive_exp(p: u32, k: u32, q: u32, tail: &[u32]) -> Option<Vec<u32>> {
    let order = q - 1;
    let mut exp = Vec::with_capacity(2 * order as usize);
    if k == 1 {
        // GF(p) with modulus x - g: the generator is g = -tail[0].
        let g = (p - tail[0] % p) % p;
        let mut cur = 1u64;
        for i in 0..order {
            if i > 0 && cur == 1 {
                return None;
            }
            exp.push(cur as u32);
            cur = cur * g as u64 % p as u64;
        }
        if cur != 1 {
            return None;
        }
    } else {
        let mut cur = vec![0u32; k as usize];
        cur[0] = 1;
        for i in 0..order {
            let packed = pack(&cur, p);
            if i > 0 && packed == 1 {
                return None;
            }
            exp.push(packed);
            // cur <- cur * w mod (w^k + tail)
            let top = cur[k as usize - 1];
            for j in (1..k as usize).rev() {
                cur[j] = cur[j - 1];
            }
            cur[0] = 0;
            for j in 0..k as usize {
                cur[j] = (cur[j] + (p - tail[j]) * top) % p;
            }
        }
        if pack(&cur, p) != 1 {
            return None;
        }
    }
    let first = exp.clone();
    exp.extend(first);
    Some(exp)
}

fn search_primitive(p: u32, k: u32, q: u32) -> (Vec<u32>, Vec<u32>) {
    let count = (p as u64).pow(k);
    for idx in 0..count {
        let tail = digits(idx as u32, p, k);
        if tail[0] == 0 {
            continue;
        }
        if let Some(exp) = primitive_exp(p, k, q, &tail) {
            return (tail, exp);
        }
    }
    unreachable!("every finite field has a primitive polynomial")
}

impl Tables {
    fn build(p: u32, k: u32) -> Tables {
        let q = p.pow(k);
        let (tail, exp, from_table) = match conway_table(p, k)
            .and_then(|t| primitive_exp(p, k, q, t).map(|e| (t.to_vec(), e)))
        {
            Some((t, e)) => (t, e, true),
            None => {
                let (t, e) = search_primitive(p, k, q);
                (t, e, false)
            }
        };
        let mut log = vec![0u32; q as usize];
        for (i, &e) in exp.iter().take((q - 1) as usize).enumerate() {
            log[e as usize] = i as u32;
        }
        let neg: Vec<u32> = (0..q)
            .map(|v| {
                let ds: Vec<u32> = digits(v, p, k).into_iter().map(|d| (p - d) % p).collect();
                pack(&ds, p)
            })
            .collect();
        let add = if p != 2 && q <= 256 {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                let da = digits(a, p, k);
                for b in 0..q {
                    let db = digits(b, p, k);
                    let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                    t[(a * q + b) as usize] = pack(&s, p);
                }
            }
            Some(t)
        } else {
            None
        };
        let mut modulus = tail.clone();
        modulus.push(1);
        let mut tables = Tables {
            p,
            k,
            q,
            modulus,
            from_table,
            exp,
            log,
            neg,
            pth_root: Vec::new(),
            add,
        };
        let mut root = vec![0u32; q as usize];
        for x in 0..q {
            let xp = tables.pow_raw(x, p as u64);
            root[xp as usize] = x;
        }
        tables.pth_root = root;
        tables
    }

    #[inline]
    fn mul_raw(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    fn pow_raw(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = (self.q - 1) as u64;
        let l = (self.log[a as usize] as u64 * (e % order)) % order;
        self.exp[l as usize]
    }
}

fn cache() -> &'static Mutex<HashMap<(u32, u32), Field>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Field>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Field {
    /// GF(p^k) with the fixed modulus for (p, k). Fields are cached, so
    /// repeated construction is cheap and all handles share tables.
    pub fn new(p: u32, k: u32) -> Result<Field, FieldError> {
        if !is_prime(p as u64) {
            return Err(FieldError::NotPrime(p as u64));
        }
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let order = (p as u64).checked_pow(k).unwrap_or(u64::MAX);
        if order > MAX_FIELD_ORDER {
            return Err(FieldError::TooLarge {
                p,
                k,
                limit: MAX_FIELD_ORDER,
            });
        }
        let mut guard = cache().lock().expect("field cache poisoned");
        if let Some(f) = guard.get(&(p, k)) {
            return Ok(f.clone());
        }
        let f = Field(Arc::new(Tables::build(p, k)));
        guard.insert((p, k), f.clone());
        Ok(f)
    }

    /// GF(p).
    pub fn prime(p: u32) -> Result<Field, FieldError> {
        Field::new(p, 1)
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.0.p
    }
    #[inline]
    pub fn degree(&self) -> u32 {
        self.0.k
    }
    #[inline]
    pub fn order(&self) -> u32 {
        self.0.q
    }
    /// Monic defining polynomial, little-endian.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }
    /// Whether the modulus came from the shipped Conway table (prime
    /// fields count as tabulated).
    pub fn modulus_is_tabulated(&self) -> bool {
        self.0.k == 1 || self.0.from_table
    }

    #[inline]
    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }
    #[inline]
    pub fn one(&self) -> Fe {
        Fe::ONE
    }

    /// The class of `w` (the root of the modulus). For k = 1 this is the
    /// generator of GF(p)^*.
    pub fn generator(&self) -> Fe {
        Fe(self.0.exp[1])
    }

    pub fn from_int(&self, n: i64) -> Fe {
        let p = self.0.p as i64;
        Fe(n.rem_euclid(p) as u32)
    }

    pub fn from_coeffs(&self, cs: &[u32]) -> Result<Fe, FieldError> {
        let p = self.0.p;
        if cs.len() > self.0.k as usize || cs.iter().any(|&c| c >= p) {
            return Err(FieldError::BadCoefficients(cs.to_vec(), p, self.0.k));
        }
        Ok(Fe(pack(cs, p)))
    }

    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        digits(a.0, self.0.p, self.0.k)
    }

    #[inline]
    pub fn contains(&self, a: Fe) -> bool {
        a.0 < self.0.q
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let t = &self.0;
        if t.p == 2 {
            return Fe(a.0 ^ b.0);
        }
        if let Some(tab) = &t.add {
            return Fe(tab[(a.0 * t.q + b.0) as usize]);
        }
        if t.k == 1 {
            return Fe((a.0 + b.0) % t.p);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..t.k {
            out += ((x % t.p + y % t.p) % t.p) * place;
            x /= t.p;
            y /= t.p;
            place *= t.p;
        }
        Fe(out)
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.0.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.0.mul_raw(a.0, b.0))
    }

    pub fn inv(&self, a: Fe) -> Result<Fe, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let t = &self.0;
        let l = t.log[a.0 as usize];
        Ok(Fe(t.exp[((t.q - 1 - l) % (t.q - 1)) as usize]))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        Fe(self.0.pow_raw(a.0, e))
    }

    /// `x^p`.
    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, self.0.p as u64)
    }

    /// The unique `y` with `y^p = a`.
    #[inline]
    pub fn pth_root(&self, a: Fe) -> Fe {
        Fe(self.0.pth_root[a.0 as usize])
    }

    /// Scalar multiple `n * a`.
    pub fn scale_int(&self, a: Fe, n: i64) -> Fe {
        self.mul(a, self.from_int(n))
    }

    /// All elements in increasing packed order (lexicographic on the
    /// little-endian coefficient vector read from the top).
    pub fn elements(&self) -> Result<impl Iterator<Item = Fe>, FieldError> {
        if self.0.q as u64 > MAX_ENUMERATION_ORDER {
            return Err(FieldError::TooLarge {
                p: self.0.p,
                k: self.0.k,
                limit: MAX_ENUMERATION_ORDER,
            });
        }
        Ok((0..self.0.q).map(Fe))
    }

    /// Degree of `a` over the prime field, i.e. the size of its Frobenius orbit.
    pub fn element_degree(&self, a: Fe) -> u32 {
        let mut x = self.frobenius(a);
        let mut d = 1;
        while x != a {
            x = self.frobenius(x);
            d += 1;
        }
        d
    }

    /// Literal `p^k:c0,c1,...` (or a plain integer for prime fields).
    pub fn format(&self, a: Fe) -> String {
        if self.0.k == 1 {
            return a.0.to_string();
        }
        let cs: Vec<String> = self.coeffs(a).iter().map(|c| c.to_string()).collect();
        format!("{}^{}:{}", self.0.p, self.0.k, cs.join(","))
    }

    /// Checked wrapper around an element of this field.
    pub fn element(&self, a: Fe) -> FieldElement {
        FieldElement {
            field: self.clone(),
            value: a,
        }
    }

    /// The embedding of `self` into `target`, which must be an extension.
    pub fn embedding_into(&self, target: &Field) -> Result<Embedding, FieldError> {
        let (p, k) = (self.0.p, self.0.k);
        let (tp, tk) = (target.0.p, target.0.k);
        if p != tp || tk % k != 0 {
            return Err(FieldError::NoEmbedding(p, k, tp, tk));
        }
        let key = (p, k, tk);
        type Cache = Mutex<HashMap<(u32, u32, u32), Embedding>>;
        static EMB: OnceLock<Cache> = OnceLock::new();
        let emb_cache = EMB.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(e) = emb_cache.lock().expect("embedding cache poisoned").get(&key) {
            return Ok(e.clone());
        }
        // Image of w: the smallest root of the modulus in the target.
        let w_image = if k == 1 {
            Fe::ZERO
        } else {
            let m = self.modulus();
            let mut found = None;
            for cand in 0..target.order() {
                let x = Fe(cand);
                let mut acc = Fe::ZERO;
                for &c in m.iter().rev() {
                    acc = target.add(target.mul(acc, x), target.from_int(c as i64));
                }
                if acc.is_zero() {
                    found = Some(x);
                    break;
                }
            }
            found.ok_or(FieldError::NoEmbedding(p, k, tp, tk))?
        };
        let mut image: Vec<Fe> = Vec::with_capacity(self.order() as usize);
        for v in 0..self.order() {
            let cs = self.coeffs(Fe(v));
            let mut acc = Fe::ZERO;
            for &c in cs.iter().rev() {
                acc = target.add(target.mul(acc, w_image), target.from_int(c as i64));
            }
            image.push(acc);
        }
        let e = Embedding {
            source: self.clone(),
            target: target.clone(),
            image: Arc::new(image),
        };
        emb_cache
            .lock()
            .expect("embedding cache poisoned")
            .insert(key, e.clone());
        Ok(e)
    }
}

/// A field homomorphism GF(p^k) -> GF(p^K), k | K.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub source: Field,
    pub target: Field,
    image: Arc<Vec<Fe>>,
}

impl Embedding {
    #[inline]
    pub fn apply(&self, a: Fe) -> Fe {
        self.image[a.0 as usize]
    }
}

/// An element together with its parent field; arithmetic is checked.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: Fe,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format(self.value))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format(self.value))
    }
}

impl FieldElement {
    pub fn new(field: &Field, value: Fe) -> FieldElement {
        field.element(value)
    }
    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn value(&self) -> Fe {
        self.value
    }
    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn check(&self, other: &FieldElement) -> Result<(), FieldError> {
        if self.field != other.field {
            return Err(FieldError::Mismatched(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(self.field.element(self.field.add(self.value, other.value)))
    }
    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(self.field.element(self.field.sub(self.value, other.value)))
    }
    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(self.field.element(self.field.mul(self.value, other.value)))
    }
    pub fn div(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(self.field.element(self.field.div(self.value, other.value)?))
    }
    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        Ok(self.field.element(self.field.inv(self.value)?))
    }
    pub fn pow(&self, e: u64) -> FieldElement {
        self.field.element(self.field.pow(self.value, e))
    }
    pub fn pth_root(&self) -> FieldElement {
        self.field.element(self.field.pth_root(self.value))
    }
}
