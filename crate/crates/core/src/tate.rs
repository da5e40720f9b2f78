//! Tate's algorithm over the local rings of P^1 in every characteristic.
//!
//! The place is first moved to t = 0 (finite places by translation after
//! embedding into the residue field, infinity through the chart s = 1/t), so
//! the uniformizer is always t and the residue field is the coefficient
//! field.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::field::{Fe, Field, FieldError};
use crate::poly::{find_roots, Place, PolyError, UniPoly};
use crate::weierstrass::{CoordChange, WeierstrassError, WeierstrassModel, WEIGHTS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TateError {
    #[error("the discriminant vanishes identically")]
    Singular,
    #[error("place lives in {place}, not an extension of the coefficient field {model}")]
    PlaceField { place: String, model: String },
    #[error("Tate's algorithm did not terminate within {0} steps")]
    NoTermination(u32),
    #[error(transparent)]
    Weierstrass(#[from] Box<WeierstrassError>),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

impl From<WeierstrassError> for TateError {
    fn from(e: WeierstrassError) -> TateError {
        TateError::Weierstrass(Box::new(e))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KodairaType {
    /// I_n, n >= 0.
    I(u32),
    II,
    III,
    IV,
    /// I_n*, n >= 0.
    IStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

/// ADE type of the root lattice spanned by the non-identity components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RootLattice {
    A(u32),
    D(u32),
    E6,
    E7,
    E8,
}

impl fmt::Display for RootLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootLattice::A(n) => write!(f, "A{n}"),
            RootLattice::D(n) => write!(f, "D{n}"),
            RootLattice::E6 => write!(f, "E6"),
            RootLattice::E7 => write!(f, "E7"),
            RootLattice::E8 => write!(f, "E8"),
        }
    }
}

impl KodairaType {
    pub fn components(self) -> u32 {
        match self {
            KodairaType::I(0) => 1,
            KodairaType::I(n) => n,
            KodairaType::II => 1,
            KodairaType::III => 2,
            KodairaType::IV => 3,
            KodairaType::IStar(n) => n + 5,
            KodairaType::IVStar => 7,
            KodairaType::IIIStar => 8,
            KodairaType::IIStar => 9,
        }
    }

    /// `None` for fibres with a single component.
    pub fn root_lattice(self) -> Option<RootLattice> {
        match self {
            KodairaType::I(n) if n >= 2 => Some(RootLattice::A(n - 1)),
            KodairaType::I(_) | KodairaType::II => None,
            KodairaType::III => Some(RootLattice::A(1)),
            KodairaType::IV => Some(RootLattice::A(2)),
            KodairaType::IStar(n) => Some(RootLattice::D(n + 4)),
            KodairaType::IVStar => Some(RootLattice::E6),
            KodairaType::IIIStar => Some(RootLattice::E7),
            KodairaType::IIStar => Some(RootLattice::E8),
        }
    }

    pub fn is_multiplicative(self) -> bool {
        matches!(self, KodairaType::I(n) if n > 0)
    }

    pub fn is_additive(self) -> bool {
        !matches!(self, KodairaType::I(_))
    }

    pub fn is_singular(self) -> bool {
        self != KodairaType::I(0)
    }

    /// Ogg's relation read as the definition of the wild part.
    pub fn wild_defect(self, v_delta: u32) -> i64 {
        if self.is_additive() {
            v_delta as i64 - self.components() as i64 - 1
        } else {
            0
        }
    }
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::I(n) => write!(f, "I{n}"),
            KodairaType::II => write!(f, "II"),
            KodairaType::III => write!(f, "III"),
            KodairaType::IV => write!(f, "IV"),
            KodairaType::IStar(n) => write!(f, "I{n}*"),
            KodairaType::IVStar => write!(f, "IV*"),
            KodairaType::IIIStar => write!(f, "III*"),
            KodairaType::IIStar => write!(f, "II*"),
        }
    }
}

impl Serialize for KodairaType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown Kodaira type {0:?}")]
pub struct ParseKodairaError(pub String);

impl FromStr for KodairaType {
    type Err = ParseKodairaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let err = || ParseKodairaError(s.to_string());
        Ok(match t {
            "II" => KodairaType::II,
            "III" => KodairaType::III,
            "IV" => KodairaType::IV,
            "IV*" => KodairaType::IVStar,
            "III*" => KodairaType::IIIStar,
            "II*" => KodairaType::IIStar,
            _ => {
                let rest = t.strip_prefix('I').ok_or_else(err)?;
                let (digits, star) = match rest.strip_suffix('*') {
                    Some(d) => (d, true),
                    None => (rest, false),
                };
                if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.len() > 6 {
                    return Err(err());
                }
                let n: u32 = digits.parse().map_err(|_| err())?;
                if star {
                    KodairaType::IStar(n)
                } else {
                    KodairaType::I(n)
                }
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReductionKind {
    Good,
    Multiplicative,
    Additive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibreReport {
    pub place: Place,
    pub kodaira: KodairaType,
    pub v_delta: u32,
    pub components: u32,
    pub wild_defect: i64,
    pub minimality_reductions: u32,
}

/// Flat, serializable view of a [`FibreReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FibreRecord {
    pub place: String,
    pub kodaira: String,
    pub v_delta: u32,
    pub components: u32,
    pub wild_defect: i64,
    pub minimality_reductions: u32,
}

impl FibreReport {
    pub fn record(&self, var: &str) -> FibreRecord {
        FibreRecord {
            place: self.place.label(var),
            kodaira: self.kodaira.to_string(),
            v_delta: self.v_delta,
            components: self.components,
            wild_defect: self.wild_defect,
            minimality_reductions: self.minimality_reductions,
        }
    }

    pub fn line(&self, var: &str) -> String {
        format!(
            "{} | {} | {} | {} | {}",
            self.place.label(var),
            self.kodaira,
            self.v_delta,
            self.components,
            self.wild_defect
        )
    }
}

/// Valuation at t = 0; `u32::MAX` for the zero polynomial.
fn v0(p: &UniPoly) -> u32 {
    p.coeffs()
        .iter()
        .position(|c| !c.is_zero())
        .map_or(u32::MAX, |i| i as u32)
}

/// Smallest N >= 2 with deg a_i <= N i, the weight of the chart at infinity.
pub fn infinity_weight(m: &WeierstrassModel) -> usize {
    let mut n = 2;
    for (c, &w) in m.coefficients().iter().zip(WEIGHTS.iter()) {
        if let Some(d) = c.degree() {
            n = n.max(d.div_ceil(w));
        }
    }
    n
}

/// The model in the chart s = 1/t with weight N: a_i(s) = s^{N i} a_i(1/s).
fn chart_at_infinity(m: &WeierstrassModel) -> Result<WeierstrassModel, TateError> {
    let n = infinity_weight(m);
    let mut out = m.coefficients().clone();
    for (c, &w) in out.iter_mut().zip(WEIGHTS.iter()) {
        *c = c.reverse(n * w)?;
    }
    Ok(WeierstrassModel::from_array(out)?)
}

/// The model with the place moved to t = 0, over the residue field.
pub fn localize(m: &WeierstrassModel, place: &Place) -> Result<WeierstrassModel, TateError> {
    match place {
        Place::Infinity => chart_at_infinity(m),
        Place::Finite(x) => {
            let (pf, mf) = (x.field(), m.field());
            let compatible = pf.characteristic() == mf.characteristic()
                && pf.degree() % mf.degree() == 0;
            if !compatible {
                return Err(TateError::PlaceField {
                    place: format!("GF({}^{})", pf.characteristic(), pf.degree()),
                    model: format!("GF({}^{})", mf.characteristic(), mf.degree()),
                });
            }
            let base = m.embed(pf)?;
            Ok(base.translate_parameter(x.value()))
        }
    }
}

fn change(m: &WeierstrassModel, r: UniPoly, s: UniPoly, w: UniPoly) -> Result<WeierstrassModel, TateError> {
    let f = m.field();
    Ok(m.apply_change(&CoordChange::new(f, Fe::ONE, r, s, w))?)
}

fn mono(f: &Field, c: Fe, n: usize) -> UniPoly {
    UniPoly::monomial(f, c, n)
}

/// Square root in a perfect field of characteristic 2; only called on
/// coefficients that must vanish in odd characteristic.
fn sqrt2(f: &Field, a: Fe) -> Fe {
    if a.is_zero() {
        return a;
    }
    assert_eq!(f.characteristic(), 2, "square-root step reached in odd characteristic");
    f.pth_root(a)
}

/// Classification at t = 0 of a model already localized there.
pub fn classify_at_zero(model: &WeierstrassModel) -> Result<(KodairaType, u32, u32), TateError> {
    let f = model.field().clone();
    let p = f.characteristic();
    let zero = UniPoly::zero(&f);
    let mut m = model.clone();
    if p != 2 {
        // Complete the square: a1 = a3 = 0 from here on, preserved by x-shifts.
        let half = f.inv(f.from_int(2))?;
        let s = m.a(1).scale_by(f.neg(half));
        let w = m.a(3).scale_by(f.neg(half));
        m = change(&m, zero.clone(), s, w)?;
    }
    for reductions in 0u32..64 {
        let delta = m.discriminant();
        if delta.is_zero() {
            return Err(TateError::Singular);
        }
        let n = v0(&delta);
        if n == 0 {
            return Ok((KodairaType::I(0), 0, reductions));
        }
        let c = |m: &WeierstrassModel, i: usize, j: usize| m.a(i).coeff(j);

        // Move the singular point of the reduction to (0, 0).
        let (x0, y0) = singular_point(&f, &m)?;
        m = change(&m, UniPoly::constant_poly(&f, x0), zero.clone(), UniPoly::constant_poly(&f, y0))?;
        let inv = m.invariants();
        if v0(&inv.b2) == 0 {
            return Ok((KodairaType::I(n), n, reductions));
        }
        if v0(m.a(6)) < 2 {
            return Ok((KodairaType::II, n, reductions));
        }
        if v0(&inv.b8) < 3 {
            return Ok((KodairaType::III, n, reductions));
        }
        if v0(&inv.b6) < 3 {
            return Ok((KodairaType::IV, n, reductions));
        }

        // v(a1) >= 1, v(a2) >= 1, v(a3) >= 2, v(a4) >= 2, v(a6) >= 3.
        let s = sqrt2(&f, c(&m, 2, 0));
        m = change(&m, zero.clone(), UniPoly::constant_poly(&f, s), zero.clone())?;
        let th = sqrt2(&f, c(&m, 6, 2));
        m = change(&m, zero.clone(), zero.clone(), mono(&f, th, 1))?;

        let tau = match cubic_roots(&f, c(&m, 2, 1), c(&m, 4, 2), c(&m, 6, 3))? {
            CubicRoots::Distinct => return Ok((KodairaType::IStar(0), n, reductions)),
            CubicRoots::Double(beta) => {
                m = change(&m, mono(&f, beta, 1), zero.clone(), zero.clone())?;
                let star = star_subprocedure(&f, &mut m, n)?;
                return Ok((KodairaType::IStar(star), n, reductions));
            }
            CubicRoots::Triple(tau) => tau,
        };
        m = change(&m, mono(&f, tau, 1), zero.clone(), zero.clone())?;
        let (alpha, beta) = (c(&m, 3, 2), c(&m, 6, 4));
        let disc = f.add(f.mul(alpha, alpha), f.scale_int(beta, 4));
        if !disc.is_zero() {
            return Ok((KodairaType::IVStar, n, reductions));
        }
        let th = double_root_y(&f, alpha, beta);
        m = change(&m, zero.clone(), zero.clone(), mono(&f, th, 2))?;
        if v0(m.a(4)) < 4 {
            return Ok((KodairaType::IIIStar, n, reductions));
        }
        if v0(m.a(6)) < 6 {
            return Ok((KodairaType::IIStar, n, reductions));
        }
        // Non-minimal: divide a_i by t^i and restart.
        let a = m.coefficients().clone();
        let mut out = Vec::with_capacity(5);
        for (ci, &wt) in a.iter().zip(WEIGHTS.iter()) {
            out.push(ci.unshift(wt));
        }
        m = WeierstrassModel::from_array(out.try_into().expect("five coefficients"))?;
    }
    Err(TateError::NoTermination(64))
}

enum CubicRoots {
    Distinct,
    Double(Fe),
    Triple(Fe),
}

/// Root pattern of T^3 + a T^2 + b T + c over a perfect field.
fn cubic_roots(f: &Field, a: Fe, b: Fe, c: Fe) -> Result<CubicRoots, TateError> {
    let p = f.characteristic();
    let sum = |xs: &[Fe]| xs.iter().fold(Fe::ZERO, |acc, &x| f.add(acc, x));
    let (a2, b2) = (f.mul(a, a), f.mul(b, b));
    let disc = sum(&[
        f.mul(a2, b2),
        f.scale_int(f.mul(b2, b), -4),
        f.scale_int(f.mul(f.mul(a2, a), c), -4),
        f.scale_int(f.mul(c, c), -27),
        f.scale_int(f.mul(f.mul(a, b), c), 18),
    ]);
    if !disc.is_zero() {
        return Ok(CubicRoots::Distinct);
    }
    if p == 3 {
        if a.is_zero() && b.is_zero() {
            return Ok(CubicRoots::Triple(f.pth_root(f.neg(c))));
        }
        // P' = 2 a T + b.
        return Ok(CubicRoots::Double(f.neg(f.div(b, f.scale_int(a, 2))?)));
    }
    let triple = f.scale_int(b, 3) == a2 && f.scale_int(c, 27) == f.mul(a2, a);
    if triple {
        return Ok(CubicRoots::Triple(f.neg(f.div(a, f.from_int(3))?)));
    }
    if p == 2 {
        // P' = T^2 + b.
        return Ok(CubicRoots::Double(f.pth_root(b)));
    }
    let cubic = UniPoly::new(f, vec![c, b, a, Fe::ONE]);
    let g = cubic.gcd(&cubic.derivative()).monic();
    Ok(CubicRoots::Double(f.neg(g.coeff(0))))
}

/// Root of the double-root quadratic Y^2 + alpha Y - beta.
fn double_root_y(f: &Field, alpha: Fe, beta: Fe) -> Fe {
    if f.characteristic() == 2 {
        f.pth_root(beta)
    } else {
        let half = f.inv(f.from_int(2)).expect("odd characteristic");
        f.neg(f.mul(alpha, half))
    }
}

/// Double root of A X^2 + B X + C (A != 0).
fn double_root_x(f: &Field, a: Fe, b: Fe, c: Fe) -> Result<Fe, TateError> {
    Ok(if f.characteristic() == 2 {
        f.pth_root(f.div(c, a)?)
    } else {
        f.neg(f.div(b, f.scale_int(a, 2))?)
    })
}

/// After the double-root translation: alternate Y and X tests until one of
/// the quadratics separates. Returns n for type I_n*.
fn star_subprocedure(f: &Field, m: &mut WeierstrassModel, vd: u32) -> Result<u32, TateError> {
    let zero = UniPoly::zero(f);
    let (mut ex, mut ey) = (2usize, 2usize);
    let bound = vd as usize + 4;
    loop {
        if ex + ey > bound {
            return Err(TateError::NoTermination(bound as u32));
        }
        let (alpha, beta) = (m.a(3).coeff(ey), m.a(6).coeff(ex + ey));
        let disc = f.add(f.mul(alpha, alpha), f.scale_int(beta, 4));
        if !disc.is_zero() {
            break;
        }
        let th = double_root_y(f, alpha, beta);
        *m = change(m, zero.clone(), zero.clone(), mono(f, th, ey))?;
        ey += 1;

        let (a, b, c) = (m.a(2).coeff(1), m.a(4).coeff(ex + 1), m.a(6).coeff(ex + ey));
        let disc = f.sub(f.mul(b, b), f.scale_int(f.mul(a, c), 4));
        if !disc.is_zero() {
            break;
        }
        let rho = double_root_x(f, a, b, c)?;
        *m = change(m, mono(f, rho, ex), zero.clone(), zero.clone())?;
        ex += 1;
    }
    Ok((ex + ey - 3) as u32)
}

/// Singular point of the reduction mod t (assumed singular).
fn singular_point(f: &Field, m: &WeierstrassModel) -> Result<(Fe, Fe), TateError> {
    let c = |i: usize| m.a(i).coeff(0);
    let (a1, a2, a3, a4, a6) = (c(1), c(2), c(3), c(4), c(6));
    if f.characteristic() == 2 {
        if !a1.is_zero() {
            let x0 = f.div(a3, a1)?;
            let y0 = f.div(f.add(f.mul(x0, x0), a4), a1)?;
            return Ok((x0, y0));
        }
        let x0 = f.pth_root(a4);
        let rhs = [f.pow(x0, 3), f.mul(a2, f.mul(x0, x0)), f.mul(a4, x0), a6]
            .into_iter()
            .fold(Fe::ZERO, |acc, v| f.add(acc, v));
        return Ok((x0, f.pth_root(rhs)));
    }
    // Odd characteristic, a1 = a3 = 0: a multiple root of x^3 + a2 x^2 + a4 x + a6.
    let x0 = match cubic_roots(f, a2, a4, a6)? {
        CubicRoots::Double(x) | CubicRoots::Triple(x) => x,
        CubicRoots::Distinct => unreachable!("reduction is singular"),
    };
    Ok((x0, Fe::ZERO))
}

/// Tate's algorithm at a place.
pub fn tate_classify(m: &WeierstrassModel, place: &Place) -> Result<FibreReport, TateError> {
    if m.is_singular() {
        return Err(TateError::Singular);
    }
    let local = localize(m, place)?;
    let (kodaira, v_delta, minimality_reductions) = classify_at_zero(&local)?;
    Ok(FibreReport {
        place: place.clone(),
        kodaira,
        v_delta,
        components: kodaira.components(),
        wild_defect: kodaira.wild_defect(v_delta),
        minimality_reductions,
    })
}

/// Coarse reduction type from vΔ and v(c4).
pub fn reduction_kind(m: &WeierstrassModel, place: &Place) -> Result<ReductionKind, TateError> {
    if m.is_singular() {
        return Err(TateError::Singular);
    }
    let local = localize(m, place)?;
    if v0(&local.discriminant()) == 0 {
        return Ok(ReductionKind::Good);
    }
    Ok(if v0(&local.c4()) == 0 {
        ReductionKind::Multiplicative
    } else {
        ReductionKind::Additive
    })
}

#[derive(Debug, Clone)]
pub struct GlobalReport {
    pub fibres: Vec<FibreReport>,
    pub total_v_delta: u32,
    /// Degree of Δ left over from roots outside the searched tower.
    pub unresolved_degree: usize,
    /// Simple zeros of Δ outside the searched tower: I1 fibres whose places
    /// are not listed individually.
    pub unlisted_i1: usize,
    pub minimality_reductions: u32,
    pub infinity_weight: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GlobalRecord {
    pub fibres: Vec<FibreRecord>,
    pub configuration: Vec<String>,
    pub total_v_delta: u32,
    pub euler_check: bool,
    pub complete: bool,
    pub max_multiplicative: Option<u32>,
    pub max_additive_star: Option<u32>,
    pub minimality_reductions: u32,
}

impl GlobalReport {
    pub fn complete(&self) -> bool {
        self.unresolved_degree == 0
    }

    /// Singular fibre types, sorted.
    pub fn configuration(&self) -> Vec<KodairaType> {
        let mut v: Vec<KodairaType> = self
            .fibres
            .iter()
            .map(|r| r.kodaira)
            .filter(|k| k.is_singular())
            .chain(std::iter::repeat_n(KodairaType::I(1), self.unlisted_i1))
            .collect();
        v.sort();
        v
    }

    pub fn contains(&self, k: KodairaType) -> bool {
        self.fibres.iter().any(|r| r.kodaira == k)
    }

    pub fn max_multiplicative(&self) -> Option<u32> {
        self.fibres
            .iter()
            .filter_map(|r| match r.kodaira {
                KodairaType::I(n) if n > 0 => Some(n),
                _ => None,
            })
            .chain((self.unlisted_i1 > 0).then_some(1))
            .max()
    }

    pub fn max_additive_star(&self) -> Option<u32> {
        self.fibres
            .iter()
            .filter_map(|r| match r.kodaira {
                KodairaType::IStar(n) => Some(n),
                _ => None,
            })
            .max()
    }

    /// Σ vΔ equals the Euler number 12 N of the surface.
    pub fn euler_check(&self) -> bool {
        self.complete() && self.total_v_delta as usize == 12 * self.infinity_weight
    }

    pub fn record(&self, var: &str) -> GlobalRecord {
        GlobalRecord {
            fibres: self.fibres.iter().map(|r| r.record(var)).collect(),
            configuration: self.configuration().iter().map(|k| k.to_string()).collect(),
            total_v_delta: self.total_v_delta,
            euler_check: self.euler_check(),
            complete: self.complete(),
            max_multiplicative: self.max_multiplicative(),
            max_additive_star: self.max_additive_star(),
            minimality_reductions: self.minimality_reductions,
        }
    }

    pub fn text(&self, var: &str) -> String {
        let mut s = String::from("place | type | vΔ | m | δ\n");
        for r in &self.fibres {
            s.push_str(&r.line(var));
            s.push('\n');
        }
        let conf: Vec<String> = self.configuration().iter().map(|k| k.to_string()).collect();
        if self.unlisted_i1 > 0 {
            s.push_str(&format!("(+{} I1 at points outside the searched extensions)\n", self.unlisted_i1));
        }
        s.push_str(&format!("configuration: [{}]\n", conf.join(", ")));
        s.push_str(&format!("sum vΔ = {}", self.total_v_delta));
        if !self.complete() {
            s.push_str(&format!(" (incomplete: degree {} unresolved)", self.unresolved_degree));
        }
        s.push('\n');
        if self.minimality_reductions > 0 {
            s.push_str(&format!("minimality reductions: {}\n", self.minimality_reductions));
        }
        s
    }
}

/// Classify every singular fibre found over GF(p^K), K <= search_ext, plus
/// the fibre at infinity.
pub fn classify_all(m: &WeierstrassModel, search_ext: u32) -> Result<GlobalReport, TateError> {
    let delta = m.discriminant();
    if delta.is_zero() {
        return Err(TateError::Singular);
    }
    let ext = search_ext.max(m.field().degree());
    let roots = find_roots(&delta, ext);
    let mut fibres = Vec::with_capacity(roots.roots.len() + 1);
    for (x, _) in roots.roots {
        fibres.push(tate_classify(m, &Place::Finite(x))?);
    }
    // Zeros of Δ of multiplicity >= 2 are zeros of gcd(Δ, Δ'); once those are
    // all found, the rest are simple zeros, hence I1.
    let g = delta.gcd(&delta.derivative());
    let multiple_found = g.is_constant() || find_roots(&g, ext).complete();
    let (unresolved_degree, unlisted_i1) = if multiple_found {
        (0, roots.unresolved_degree)
    } else {
        (roots.unresolved_degree, 0)
    };
    let inf = tate_classify(m, &Place::Infinity)?;
    if inf.v_delta > 0 || inf.minimality_reductions > 0 {
        fibres.push(inf);
    }
    let minimality_reductions = fibres.iter().map(|r| r.minimality_reductions).sum::<u32>();
    let total_v_delta = fibres.iter().map(|r| r.v_delta).sum::<u32>() + roots.unresolved_degree as u32;
    Ok(GlobalReport {
        fibres,
        total_v_delta,
        unresolved_degree,
        unlisted_i1,
        minimality_reductions,
        infinity_weight: infinity_weight(m),
    })
}
