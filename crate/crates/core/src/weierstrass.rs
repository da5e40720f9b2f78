//! Weierstrass models `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` over
//! GF(q)[t], their invariants, coordinate changes and reparametrizations of
//! the base, and the characteristic-2 normal forms.

use thiserror::Error;

use crate::field::{Fe, Field, FieldError};
use crate::lift::IntPoly;
use crate::poly::{find_roots, Place, PolyError, Ring, UniPoly, Valuation};
use crate::tate::{self, GlobalReport, TateError};

/// Weights of a1, a2, a3, a4, a6 in coefficient order.
pub const WEIGHTS: [usize; 5] = [1, 2, 3, 4, 6];
/// Ambient degree bound of the discriminant on a K3 model.
pub const DELTA_BOUND: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeierstrassError {
    #[error("deg a{index} = {degree} exceeds the bound {bound}")]
    DegreeBound {
        index: usize,
        degree: usize,
        bound: usize,
    },
    #[error("the scaling factor u must be nonzero")]
    ZeroScale,
    #[error("coefficients live in different fields")]
    MismatchedFields,
    #[error("operation needs characteristic 2, model has characteristic {0}")]
    NotCharacteristicTwo(u32),
    #[error("deg a1 = {0} exceeds 2")]
    A1Degree(usize),
    #[error("the model is not minimal ({0} minimality reductions)")]
    NonMinimal(u32),
    #[error("degenerate reparametrization")]
    SingularMobius,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Tate(#[from] Box<TateError>),
}

/// b- and c-invariants in any coefficient ring.
#[derive(Debug, Clone)]
pub struct Invariants<R> {
    pub b2: R,
    pub b4: R,
    pub b6: R,
    pub b8: R,
    pub c4: R,
}

pub fn invariants<R: Ring>(a1: &R, a2: &R, a3: &R, a4: &R, a6: &R) -> Invariants<R> {
    let b2 = a1.square().add(&a2.scale(4));
    let b4 = a4.scale(2).add(&a1.mul(a3));
    let b6 = a3.square().add(&a6.scale(4));
    let b8 = a1
        .square()
        .mul(a6)
        .add(&a2.mul(a6).scale(4))
        .sub(&a1.mul(a3).mul(a4))
        .add(&a2.mul(&a3.square()))
        .sub(&a4.square());
    let c4 = b2.square().sub(&b4.scale(24));
    Invariants { b2, b4, b6, b8, c4 }
}

/// `-b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6`, valid in every characteristic.
pub fn universal_discriminant<R: Ring>(a1: &R, a2: &R, a3: &R, a4: &R, a6: &R) -> R {
    let Invariants { b2, b4, b6, b8, .. } = invariants(a1, a2, a3, a4, a6);
    let zero = a1.constant(0);
    zero.sub(&b2.square().mul(&b8))
        .sub(&b4.square().mul(&b4).scale(8))
        .sub(&b6.square().scale(27))
        .add(&b2.mul(&b4).mul(&b6).scale(9))
}

/// `a1^4 (a1^2 a6 + a1 a3 a4 + a2 a3^2 + a4^2) + a1^3 a3^3 + a3^4`, the
/// characteristic-2 discriminant.
pub fn char2_discriminant<R: Ring>(a1: &R, a2: &R, a3: &R, a4: &R, a6: &R) -> R {
    let a1sq = a1.square();
    let inner = a1sq
        .mul(a6)
        .add(&a1.mul(a3).mul(a4))
        .add(&a2.mul(&a3.square()))
        .add(&a4.square());
    let a13 = a1sq.mul(a1);
    let a33 = a3.square().mul(a3);
    a1sq.square()
        .mul(&inner)
        .add(&a13.mul(&a33))
        .add(&a3.square().square())
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeierstrassModel {
    field: Field,
    /// a1, a2, a3, a4, a6.
    a: [UniPoly; 5],
}

/// Index into the coefficient array for a_i.
fn slot(i: usize) -> usize {
    match i {
        1 => 0,
        2 => 1,
        3 => 2,
        4 => 3,
        6 => 4,
        _ => panic!("no Weierstrass coefficient a{i}"),
    }
}

impl WeierstrassModel {
    pub fn new(a1: UniPoly, a2: UniPoly, a3: UniPoly, a4: UniPoly, a6: UniPoly) -> Result<Self, WeierstrassError> {
        let field = a1.field().clone();
        let a = [a1, a2, a3, a4, a6];
        if a.iter().any(|c| c.field() != &field) {
            return Err(WeierstrassError::MismatchedFields);
        }
        Ok(WeierstrassModel { field, a })
    }

    /// Build from integer coefficient lists (reduced mod p).
    pub fn from_ints(field: &Field, a: [&[i64]; 5]) -> WeierstrassModel {
        let [a1, a2, a3, a4, a6] = a.map(|c| UniPoly::from_ints(field, c));
        WeierstrassModel::new(a1, a2, a3, a4, a6).expect("same field")
    }

    pub fn from_array(a: [UniPoly; 5]) -> Result<Self, WeierstrassError> {
        let [a1, a2, a3, a4, a6] = a;
        WeierstrassModel::new(a1, a2, a3, a4, a6)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn characteristic(&self) -> u32 {
        self.field.characteristic()
    }

    /// a_i for i in {1, 2, 3, 4, 6}.
    pub fn a(&self, i: usize) -> &UniPoly {
        &self.a[slot(i)]
    }

    pub fn coefficients(&self) -> &[UniPoly; 5] {
        &self.a
    }

    pub fn discriminant(&self) -> UniPoly {
        let [a1, a2, a3, a4, a6] = &self.a;
        if self.characteristic() == 2 {
            char2_discriminant(a1, a2, a3, a4, a6)
        } else {
            universal_discriminant(a1, a2, a3, a4, a6)
        }
    }

    pub fn invariants(&self) -> Invariants<UniPoly> {
        let [a1, a2, a3, a4, a6] = &self.a;
        invariants(a1, a2, a3, a4, a6)
    }

    /// `c4`, specialized to `a1^4` in characteristic 2.
    pub fn c4(&self) -> UniPoly {
        if self.characteristic() == 2 {
            self.a(1).pow(4)
        } else {
            self.invariants().c4
        }
    }

    /// `Delta` vanishes identically: the fibration is singular in codimension 1.
    pub fn is_singular(&self) -> bool {
        self.discriminant().is_zero()
    }

    /// Check deg a_i <= 2i.
    pub fn check_k3_bounds(&self) -> Result<(), WeierstrassError> {
        for (c, &w) in self.a.iter().zip(WEIGHTS.iter()) {
            if let Some(d) = c.degree() {
                if d > 2 * w {
                    return Err(WeierstrassError::DegreeBound {
                        index: w,
                        degree: d,
                        bound: 2 * w,
                    });
                }
            }
        }
        Ok(())
    }

    /// Some deg a_i exceeds i; otherwise the surface is rational (or a
    /// product / singular).
    pub fn exceeds_rational_bounds(&self) -> bool {
        self.a
            .iter()
            .zip(WEIGHTS.iter())
            .any(|(c, &w)| c.degree().is_some_and(|d| d > w))
    }

    /// The model in the chart at infinity, local parameter s = 1/t:
    /// a_i(s) = s^{2i} a_i(1/s).
    pub fn chart_at_infinity(&self) -> Result<WeierstrassModel, WeierstrassError> {
        self.check_k3_bounds()?;
        let mut out = self.a.clone();
        for (c, &w) in out.iter_mut().zip(WEIGHTS.iter()) {
            *c = c.reverse(2 * w)?;
        }
        WeierstrassModel::from_array(out)
    }

    /// Substitute t -> t + c in every coefficient.
    pub fn translate_parameter(&self, c: Fe) -> WeierstrassModel {
        WeierstrassModel {
            field: self.field.clone(),
            a: self.a.clone().map(|p| p.translate(c)),
        }
    }

    /// Move all coefficients into an extension field.
    pub fn embed(&self, target: &Field) -> Result<WeierstrassModel, WeierstrassError> {
        let mut out = Vec::with_capacity(5);
        for c in &self.a {
            out.push(c.embed(target)?);
        }
        let a: [UniPoly; 5] = out.try_into().expect("five coefficients");
        WeierstrassModel::from_array(a)
    }

    /// Pull back along the Möbius map t -> (m00 t + m01) / (m10 t + m11):
    /// a_i'(t) = (m10 t + m11)^{2i} a_i((m00 t + m01)/(m10 t + m11)).
    pub fn reparametrize(&self, m: [[Fe; 2]; 2]) -> Result<WeierstrassModel, WeierstrassError> {
        self.check_k3_bounds()?;
        let f = &self.field;
        let det = f.sub(f.mul(m[0][0], m[1][1]), f.mul(m[0][1], m[1][0]));
        if det.is_zero() {
            return Err(WeierstrassError::SingularMobius);
        }
        let num = UniPoly::new(f, vec![m[0][1], m[0][0]]);
        let den = UniPoly::new(f, vec![m[1][1], m[1][0]]);
        let mut out = Vec::with_capacity(5);
        for (c, &w) in self.a.iter().zip(WEIGHTS.iter()) {
            let n = 2 * w;
            let mut acc = UniPoly::zero(f);
            for j in 0..=n {
                let cj = c.coeff(j);
                if cj.is_zero() {
                    continue;
                }
                let term = num.pow(j as u32).mul(&den.pow((n - j) as u32)).scale_by(cj);
                acc = acc.add(&term);
            }
            out.push(acc);
        }
        let a: [UniPoly; 5] = out.try_into().expect("five coefficients");
        WeierstrassModel::from_array(a)
    }

    /// Apply x -> u^2 x + r, y -> u^3 y + u^2 s x + w.
    pub fn apply_change(&self, c: &CoordChange) -> Result<WeierstrassModel, WeierstrassError> {
        let f = &self.field;
        if c.u.is_zero() {
            return Err(WeierstrassError::ZeroScale);
        }
        if c.r.field() != f || c.s.field() != f || c.w.field() != f {
            return Err(WeierstrassError::MismatchedFields);
        }
        let [a1, a2, a3, a4, a6] = &self.a;
        let (r, s, t) = (&c.r, &c.s, &c.w);
        let n1 = a1.add(&s.scale(2));
        let n2 = a2.sub(&s.mul(a1)).add(&r.scale(3)).sub(&s.square());
        let n3 = a3.add(&r.mul(a1)).add(&t.scale(2));
        let n4 = a4
            .sub(&s.mul(a3))
            .add(&r.mul(a2).scale(2))
            .sub(&t.add(&r.mul(s)).mul(a1))
            .add(&r.square().scale(3))
            .sub(&s.mul(t).scale(2));
        let n6 = a6
            .add(&r.mul(a4))
            .add(&r.square().mul(a2))
            .add(&r.square().mul(r))
            .sub(&t.mul(a3))
            .sub(&t.square())
            .sub(&r.mul(t).mul(a1));
        let uinv = f.inv(c.u)?;
        let mut out = [n1, n2, n3, n4, n6];
        for (p, &w) in out.iter_mut().zip(WEIGHTS.iter()) {
            *p = p.scale_by(f.pow(uinv, w as u64));
        }
        let m = WeierstrassModel::from_array(out)?;
        if c.require_k3_shape {
            m.check_k3_bounds()?;
        }
        Ok(m)
    }

    /// Apply a change, requiring the result to keep the K3 degree bounds.
    pub fn apply_change_k3(&self, c: &CoordChange) -> Result<WeierstrassModel, WeierstrassError> {
        let mut c = c.clone();
        c.require_k3_shape = true;
        self.apply_change(&c)
    }

    /// Reduce all coefficients to a single characteristic-0 check value:
    /// the j-invariant numerator/denominator pair `(c4^3, Delta)`.
    pub fn j_pair(&self) -> (UniPoly, UniPoly) {
        (self.c4().pow(3), self.discriminant())
    }

    /// The characteristic-2 trichotomy on a1.
    pub fn a1_case(&self) -> Result<A1Case, WeierstrassError> {
        let f = &self.field;
        if f.characteristic() != 2 {
            return Err(WeierstrassError::NotCharacteristicTwo(f.characteristic()));
        }
        let a1 = self.a(1);
        let deg = match a1.degree() {
            None => return Ok(A1Case::Vanishing),
            Some(d) => d,
        };
        if deg > 2 {
            return Err(WeierstrassError::A1Degree(deg));
        }
        let (c0, c1, c2) = (a1.coeff(0), a1.coeff(1), a1.coeff(2));
        if c1.is_zero() {
            // Square: c0 + c2 t^2 = (sqrt c0 + sqrt c2 t)^2.
            let zero = if c2.is_zero() {
                Place::Infinity
            } else {
                Place::finite(f, f.pth_root(f.div(c0, c2)?))
            };
            return Ok(A1Case::Square { zero });
        }
        let zeros = if c2.is_zero() {
            [Place::finite(f, f.div(c0, c1)?), Place::Infinity]
        } else {
            let rs = find_roots(a1, 2 * f.degree());
            let mut pts: Vec<Place> = rs.roots.into_iter().map(|(x, _)| Place::Finite(x)).collect();
            debug_assert_eq!(pts.len(), 2);
            let b = pts.pop().expect("two roots");
            let a = pts.pop().expect("two roots");
            [a, b]
        };
        Ok(A1Case::TwoZeros { zeros })
    }

    /// Bring a case-(ii) model to `a1 = t^2`, `a3 = a t + b`, `a4 = c t + d`,
    /// `a2 = t * a2~`.
    pub fn normalize_case_ii(&self) -> Result<WeierstrassModel, WeierstrassError> {
        let zero = match self.a1_case()? {
            A1Case::Square { zero } => zero,
            other => panic!("normalize_case_ii on {other:?}"),
        };
        let f = self.field.clone();
        let moved = match zero {
            Place::Infinity => self.chart_at_infinity()?,
            Place::Finite(z) => self.translate_parameter(z.value()),
        };
        // a1 = g t^2 now; scale so that a1 = t^2.
        let g = moved.a(1).coeff(2);
        let m = moved.apply_change(&CoordChange::scaling(&f, g))?;
        // x -> x + r kills a3 above degree 1.
        let r = m.a(3).unshift(2);
        let m = m.apply_change(&CoordChange::new(&f, Fe::ONE, r, UniPoly::zero(&f), UniPoly::zero(&f)))?;
        // y -> y + s x with constant s kills a2(0).
        let s = UniPoly::constant_poly(&f, f.pth_root(m.a(2).coeff(0)));
        let m = m.apply_change(&CoordChange::new(&f, Fe::ONE, UniPoly::zero(&f), s, UniPoly::zero(&f)))?;
        // y -> y + w kills a4 above degree 1.
        let w = m.a(4).unshift(2);
        m.apply_change_k3(&CoordChange::new(&f, Fe::ONE, UniPoly::zero(&f), UniPoly::zero(&f), w))
    }

    /// Bring a case-(iii) model to `a1 = t`, `a3 = a t^6 + b`, `a4 = c t^8 + d`.
    /// The model is first moved to the field containing both zeros of a1.
    pub fn normalize_case_iii(&self) -> Result<WeierstrassModel, WeierstrassError> {
        let zeros = match self.a1_case()? {
            A1Case::TwoZeros { zeros } => zeros,
            other => panic!("normalize_case_iii on {other:?}"),
        };
        let mut field = self.field.clone();
        for z in &zeros {
            if let Place::Finite(x) = z {
                if x.field().degree() > field.degree() {
                    field = x.field().clone();
                }
            }
        }
        let base = self.embed(&field)?;
        let f = &field;
        let lift = |p: &Place| -> Result<Option<Fe>, WeierstrassError> {
            Ok(match p {
                Place::Infinity => None,
                Place::Finite(x) => Some(x.field().embedding_into(f)?.apply(x.value())),
            })
        };
        let (z0, zinf) = (lift(&zeros[0])?, lift(&zeros[1])?);
        // Möbius sending t = 0 to z0 and t = inf to zinf.
        let m = match (z0, zinf) {
            (Some(a), Some(b)) => [[b, a], [Fe::ONE, Fe::ONE]],
            (Some(a), None) => [[Fe::ONE, a], [Fe::ZERO, Fe::ONE]],
            (None, Some(b)) => [[b, Fe::ONE], [Fe::ONE, Fe::ZERO]],
            (None, None) => unreachable!("two distinct zeros"),
        };
        let moved = base.reparametrize(m)?;
        let g = moved.a(1).coeff(1);
        let m1 = moved.apply_change(&CoordChange::scaling(f, g))?;
        // x -> x + r kills a3 in degrees 1..5.
        let r = UniPoly::new(f, (1..=5).map(|j| m1.a(3).coeff(j)).collect());
        let m2 = m1.apply_change(&CoordChange::new(f, Fe::ONE, r, UniPoly::zero(f), UniPoly::zero(f)))?;
        // y -> y + w kills a4 in degrees 1..7.
        let w = UniPoly::new(f, (1..=7).map(|j| m2.a(4).coeff(j)).collect());
        m2.apply_change_k3(&CoordChange::new(f, Fe::ONE, UniPoly::zero(f), UniPoly::zero(f), w))
    }

    /// K3 admissibility: degree bounds, global minimality, some deg a_i > i,
    /// and total discriminant degree 24.
    pub fn is_k3(&self, search_ext: u32) -> Result<K3Verdict, WeierstrassError> {
        if let Err(e) = self.check_k3_bounds() {
            return Ok(K3Verdict::no(e.to_string()));
        }
        if self.is_singular() {
            return Ok(K3Verdict::no("singular fibration (discriminant vanishes identically)"));
        }
        if !self.exceeds_rational_bounds() {
            return Ok(K3Verdict::no("all deg a_i <= i: rational elliptic surface"));
        }
        let report = tate::classify_all(self, search_ext).map_err(Box::new)?;
        self.k3_from_report(&report)
    }

    /// As [`is_k3`](Self::is_k3), reusing an existing global report.
    pub fn k3_from_report(&self, report: &GlobalReport) -> Result<K3Verdict, WeierstrassError> {
        if report.minimality_reductions > 0 {
            return Err(WeierstrassError::NonMinimal(report.minimality_reductions));
        }
        if !self.exceeds_rational_bounds() {
            return Ok(K3Verdict::no("all deg a_i <= i: rational elliptic surface"));
        }
        if report.total_v_delta != DELTA_BOUND as u32 {
            return Ok(K3Verdict::no(format!(
                "discriminant degree {} != 24",
                report.total_v_delta
            )));
        }
        Ok(K3Verdict {
            k3: true,
            reason: "degree bounds, minimal, some deg a_i > i, sum v(Delta) = 24".into(),
        })
    }

    pub fn format(&self, var: &str) -> String {
        let f = &self.field;
        let mut s = format!("char={} ext={}\n", f.characteristic(), f.degree());
        if var != "t" {
            s.push_str(&format!("var={var}\n"));
        }
        for (c, &w) in self.a.iter().zip(WEIGHTS.iter()) {
            s.push_str(&format!("a{w}={}\n", c.format(var)));
        }
        s
    }
}

/// Valuation of Delta at a place, with the K3 ambient bound at infinity.
pub fn delta_valuation(m: &WeierstrassModel, place: &Place) -> Result<Valuation, WeierstrassError> {
    Ok(m.discriminant().valuation(place, Some(DELTA_BOUND))?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct K3Verdict {
    pub k3: bool,
    pub reason: String,
}

impl K3Verdict {
    fn no(reason: impl Into<String>) -> K3Verdict {
        K3Verdict {
            k3: false,
            reason: reason.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum A1Case {
    /// a1 = 0.
    Vanishing,
    /// a1 a nonzero square with a double zero.
    Square { zero: Place },
    /// a1 with two distinct zeros, possibly one at infinity.
    TwoZeros { zeros: [Place; 2] },
}

/// x -> u^2 x + r, y -> u^3 y + u^2 s x + w.
#[derive(Clone, Debug)]
pub struct CoordChange {
    pub u: Fe,
    pub r: UniPoly,
    pub s: UniPoly,
    pub w: UniPoly,
    pub require_k3_shape: bool,
}

impl CoordChange {
    pub fn new(_field: &Field, u: Fe, r: UniPoly, s: UniPoly, w: UniPoly) -> CoordChange {
        CoordChange {
            u,
            r,
            s,
            w,
            require_k3_shape: false,
        }
    }

    pub fn identity(field: &Field) -> CoordChange {
        CoordChange::scaling(field, Fe::ONE)
    }

    pub fn scaling(field: &Field, u: Fe) -> CoordChange {
        let z = UniPoly::zero(field);
        CoordChange::new(field, u, z.clone(), z.clone(), z)
    }

    pub fn translation(field: &Field, r: UniPoly, s: UniPoly, w: UniPoly) -> CoordChange {
        CoordChange::new(field, Fe::ONE, r, s, w)
    }
}

/// A model with integer coefficients, kept only for reduction mod p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerModel {
    pub a: [IntPoly; 5],
}

impl IntegerModel {
    pub fn discriminant(&self) -> IntPoly {
        let [a1, a2, a3, a4, a6] = &self.a;
        universal_discriminant(a1, a2, a3, a4, a6)
    }

    pub fn reduce(&self, p: u32) -> Result<WeierstrassModel, WeierstrassError> {
        let f = Field::prime(p)?;
        let a = self.a.clone().map(|c| c.reduce(&f));
        WeierstrassModel::from_array(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lift::LiftPoly;

    fn gf(p: u32, k: u32) -> Field {
        Field::new(p, k).unwrap()
    }

    #[test]
    fn delta_of_a3_only_model() {
        let f = gf(2, 1);
        let m = WeierstrassModel::from_ints(&f, [&[], &[], &[0, 0, 0, 0, 0, 1], &[], &[]]);
        assert_eq!(m.discriminant(), m.a(3).pow(4));
    }

    #[test]
    fn delta_y2_x3_plus_1_char0() {
        let one = IntPoly::from_i64(&[1]);
        let z = IntPoly::default();
        let m = IntegerModel {
            a: [z.clone(), z.clone(), z.clone(), z, one],
        };
        assert_eq!(m.discriminant(), IntPoly::from_i64(&[-432]));
    }

    #[test]
    fn char2_formula_matches_lifted_universal_formula() {
        let f = gf(2, 2);
        let m = WeierstrassModel::from_array([
            UniPoly::new(&f, vec![Fe(1), Fe(2), Fe(3)]),
            UniPoly::new(&f, vec![Fe(2), Fe(0), Fe(1)]),
            UniPoly::new(&f, vec![Fe(3), Fe(1)]),
            UniPoly::new(&f, vec![Fe(0), Fe(3), Fe(2), Fe(1)]),
            UniPoly::new(&f, vec![Fe(1), Fe(1), Fe(0), Fe(2)]),
        ])
        .unwrap();
        let l = m.coefficients().clone().map(|c| LiftPoly::lift(&c));
        let u = universal_discriminant(&l[0], &l[1], &l[2], &l[3], &l[4]).reduce(&f);
        assert_eq!(u, m.discriminant());
    }

    #[test]
    fn identity_change_is_identity() {
        let f = gf(3, 1);
        let m = WeierstrassModel::from_ints(&f, [&[1], &[0, 1], &[2], &[1, 1], &[0, 0, 1]]);
        assert_eq!(m.apply_change(&CoordChange::identity(&f)).unwrap(), m);
    }

    #[test]
    fn y_shift_moves_constant_term_into_a4() {
        // y^2 + t^2 xy = x^3 + t a2~ x^2 + e t^12  with y -> y + sqrt(e) t^6
        let f = gf(2, 2);
        let e = Fe(2); // w
        let sqrt_e = f.pth_root(e);
        let a2 = UniPoly::new(&f, vec![Fe::ZERO, Fe::ONE, Fe::ZERO, Fe(3)]);
        let m = WeierstrassModel::new(
            UniPoly::monomial(&f, Fe::ONE, 2),
            a2.clone(),
            UniPoly::zero(&f),
            UniPoly::zero(&f),
            UniPoly::monomial(&f, e, 12),
        )
        .unwrap();
        let c = CoordChange::translation(
            &f,
            UniPoly::zero(&f),
            UniPoly::zero(&f),
            UniPoly::monomial(&f, sqrt_e, 6),
        );
        let n = m.apply_change(&c).unwrap();
        assert_eq!(n.a(4), &UniPoly::monomial(&f, sqrt_e, 8));
        assert!(n.a(6).is_zero());
        assert_eq!(n.a(2), &a2);
    }

    #[test]
    fn chart_at_infinity_examples() {
        let f = gf(2, 1);
        let m = WeierstrassModel::from_ints(&f, [&[], &[], &[], &[], &[0; 12].iter().copied().chain([1]).collect::<Vec<_>>()]);
        let c = m.chart_at_infinity().unwrap();
        assert_eq!(c.a(6), &UniPoly::one(&f));
        assert_eq!(c.chart_at_infinity().unwrap(), m);
        let bad = WeierstrassModel::from_ints(&f, [&[0, 0, 0, 1], &[], &[], &[], &[]]);
        assert!(matches!(bad.chart_at_infinity(), Err(WeierstrassError::DegreeBound { .. })));
    }

    #[test]
    fn a1_trichotomy() {
        let f = gf(2, 1);
        let z: &[i64] = &[];
        let m = WeierstrassModel::from_ints(&f, [z, z, &[1], z, z]);
        assert_eq!(m.a1_case().unwrap(), A1Case::Vanishing);
        let m = WeierstrassModel::from_ints(&f, [&[1, 0, 1], z, &[1], z, z]);
        assert_eq!(
            m.a1_case().unwrap(),
            A1Case::Square {
                zero: Place::finite(&f, Fe::ONE)
            }
        );
        let m = WeierstrassModel::from_ints(&f, [&[0, 1], z, &[1], z, z]);
        assert_eq!(
            m.a1_case().unwrap(),
            A1Case::TwoZeros {
                zeros: [Place::zero(&f), Place::Infinity]
            }
        );
        // t^2 + t + 1: two conjugate zeros in GF(4).
        let m = WeierstrassModel::from_ints(&f, [&[1, 1, 1], z, &[1], z, z]);
        match m.a1_case().unwrap() {
            A1Case::TwoZeros { zeros } => {
                for zr in zeros {
                    assert!(matches!(zr, Place::Finite(x) if x.field().degree() == 2));
                }
            }
            other => panic!("{other:?}"),
        }
        let odd = WeierstrassModel::from_ints(&gf(3, 1), [z, z, z, z, &[1]]);
        assert!(odd.a1_case().is_err());
    }

    #[test]
    fn normal_forms_have_the_expected_shape() {
        let f = gf(2, 1);
        let m = WeierstrassModel::from_ints(
            &f,
            [&[1, 0, 1], &[1, 1, 0, 1], &[1, 1, 1, 0, 1], &[0, 1, 1, 1, 0, 0, 1], &[1, 0, 0, 1, 1, 0, 0, 0, 0, 0, 1]],
        );
        let before = crate::tate::classify_all(&m, 8).unwrap();
        let n = m.normalize_case_ii().unwrap();
        assert_eq!(n.a(1), &UniPoly::monomial(&f, Fe::ONE, 2));
        assert!(n.a(3).degree().unwrap_or(0) <= 1);
        assert!(n.a(4).degree().unwrap_or(0) <= 1);
        assert!(n.a(2).coeff(0).is_zero());
        let after = crate::tate::classify_all(&n, 8).unwrap();
        assert_eq!(before.configuration(), after.configuration());

        let m = WeierstrassModel::from_ints(
            &f,
            [&[1, 1, 1], &[1, 1, 0, 1], &[1, 1, 1, 0, 1, 1, 1], &[0, 1, 1, 1, 0, 0, 1], &[1, 0, 0, 1, 1, 0, 0, 0, 0, 0, 1]],
        );
        let before = crate::tate::classify_all(&m, 8).unwrap();
        let n = m.normalize_case_iii().unwrap();
        let g = n.field().clone();
        assert_eq!(n.a(1), &UniPoly::t(&g));
        for j in 1..=5 {
            assert!(n.a(3).coeff(j).is_zero());
        }
        for j in 1..=7 {
            assert!(n.a(4).coeff(j).is_zero());
        }
        let after = crate::tate::classify_all(&n, 8).unwrap();
        assert_eq!(before.configuration(), after.configuration());
    }
}
