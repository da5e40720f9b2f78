//! Parameter scans over the normalized characteristic-2 families.
//!
//! A fibre with vΔ >= 12 on a K3 surface is unique under Galois
//! conjugation (two conjugates would exceed the total of 24), so it sits
//! over a rational place. Scans therefore run Tate's algorithm only at
//! rational places with vΔ >= [`BIG_FIBRE_THRESHOLD`].

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::field::{Fe, Field};
use crate::poly::{Place, UniPoly, Valuation};
use crate::tate::{classify_all, tate_classify, GlobalReport, KodairaType};
use crate::weierstrass::{WeierstrassModel, DELTA_BOUND};

pub const BIG_FIBRE_THRESHOLD: u32 = 12;
/// Largest exhaustive parameter space accepted.
pub const MAX_EXHAUSTIVE: u64 = 1 << 28;
/// Root-search extension used when re-classifying witnesses.
pub const WITNESS_SEARCH_EXT: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScanError {
    #[error("unknown family {0}")]
    UnknownFamily(String),
    #[error("scans need characteristic 2, got {0}")]
    NotCharacteristicTwo(u32),
    #[error("exhaustive space of {0} tuples is too large")]
    TooLarge(String),
    #[error("thread pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanFamily {
    /// a1 = 0, a2 = 0, t^3 | a3; the big fibre sits at 0.
    CaseI,
    /// a1 = t^2, a2 = t a2~, a3 = a t + b, a4 = c t + d.
    CaseII,
    /// a1 = t, a3 = a t^6 + b, a4 = c t^8 + d.
    CaseIII,
}

impl ScanFamily {
    pub const ALL: [ScanFamily; 3] = [ScanFamily::CaseI, ScanFamily::CaseII, ScanFamily::CaseIII];

    pub fn name(self) -> &'static str {
        match self {
            ScanFamily::CaseI => "case_i",
            ScanFamily::CaseII => "case_ii",
            ScanFamily::CaseIII => "case_iii",
        }
    }

    pub fn from_name(s: &str) -> Result<ScanFamily, ScanError> {
        match s {
            "case_i" | "case_i_star" => Ok(ScanFamily::CaseI),
            "case_ii" => Ok(ScanFamily::CaseII),
            "case_iii" => Ok(ScanFamily::CaseIII),
            _ => Err(ScanError::UnknownFamily(s.to_string())),
        }
    }

    /// Number of field-valued parameter slots.
    pub fn slots(self) -> usize {
        match self {
            ScanFamily::CaseI => 4 + 9 + 13,
            ScanFamily::CaseII => 4 + 4 + 13,
            ScanFamily::CaseIII => 4 + 5 + 13,
        }
    }

    /// Size of the exhaustive enumeration over `field`. Over GF(2) the
    /// case-i family enumerates a6 modulo the image of w -> w a3 + w^2.
    pub fn exhaustive_size(self, field: &Field) -> Option<u64> {
        let bits = match (self, field.order()) {
            (ScanFamily::CaseI, 2) => 4 + 9 + 7,
            (f, _) => f.slots() as u32 * field.degree(),
        };
        (bits <= 62).then(|| 1u64 << bits).filter(|&n| n <= MAX_EXHAUSTIVE)
    }

    /// The model for a list of slot values.
    pub fn model(self, field: &Field, p: &[Fe]) -> WeierstrassModel {
        assert_eq!(p.len(), self.slots());
        let poly = |c: Vec<Fe>| UniPoly::new(field, c);
        let zero = Fe::ZERO;
        let one = Fe::ONE;
        let a = match self {
            ScanFamily::CaseI => {
                let mut a3 = vec![zero; 3];
                a3.extend_from_slice(&p[0..4]);
                [
                    UniPoly::zero(field),
                    UniPoly::zero(field),
                    poly(a3),
                    poly(p[4..13].to_vec()),
                    poly(p[13..26].to_vec()),
                ]
            }
            ScanFamily::CaseII => {
                let mut a2 = vec![zero];
                a2.extend_from_slice(&p[4..8]);
                [
                    poly(vec![zero, zero, one]),
                    poly(a2),
                    poly(vec![p[1], p[0]]),
                    poly(vec![p[3], p[2]]),
                    poly(p[8..21].to_vec()),
                ]
            }
            ScanFamily::CaseIII => {
                let mut a3 = vec![zero; 7];
                a3[0] = p[1];
                a3[6] = p[0];
                let mut a4 = vec![zero; 9];
                a4[0] = p[3];
                a4[8] = p[2];
                [
                    poly(vec![zero, one]),
                    poly(p[4..9].to_vec()),
                    poly(a3),
                    poly(a4),
                    poly(p[9..22].to_vec()),
                ]
            }
        };
        WeierstrassModel::from_array(a).expect("family respects the K3 degree bounds")
    }
}

/// Polynomials over GF(2) as bit masks (bit j = coefficient of t^j).
mod gf2 {
    pub fn mul(a: u64, b: u64) -> u64 {
        let mut r = 0;
        let mut a = a;
        let mut i = 0;
        while a != 0 {
            if a & 1 == 1 {
                r ^= b << i;
            }
            a >>= 1;
            i += 1;
        }
        r
    }

    pub fn square(a: u64) -> u64 {
        let mut r = 0;
        for i in 0..32 {
            r |= ((a >> i) & 1) << (2 * i);
        }
        r
    }

    pub fn degree(a: u64) -> Option<u32> {
        (a != 0).then(|| 63 - a.leading_zeros())
    }

    /// Multiplicity of the root t = 1.
    pub fn val_one(mut a: u64) -> u32 {
        let mut v = 0;
        while a != 0 && a.count_ones().is_multiple_of(2) {
            // Divide by t + 1: q_j = Σ_{i > j} a_i.
            let mut q = 0u64;
            let mut acc = 0u64;
            for j in (0..64).rev() {
                if j + 1 < 64 {
                    acc ^= (a >> (j + 1)) & 1;
                }
                q |= acc << j;
            }
            a = q;
            v += 1;
        }
        v
    }

    pub fn char2_discriminant(a: [u64; 5]) -> u64 {
        let [a1, a2, a3, a4, a6] = a;
        let a1sq = square(a1);
        let a3sq = square(a3);
        let inner = mul(a1sq, a6) ^ mul(mul(a1, a3), a4) ^ mul(a2, a3sq) ^ square(a4);
        mul(square(a1sq), inner) ^ mul(mul(a1sq, a1), mul(a3sq, a3)) ^ square(a3sq)
    }

    /// Basis of a complement of {w a3 + w^2 : deg w <= 6} in polynomials of degree <= 12.
    pub fn case_i_complement(a3: u64) -> Vec<u64> {
        let mut rows: Vec<u64> = (0..7).map(|j| mul(1 << j, a3) ^ (1 << (2 * j))).collect();
        let mut pivots = Vec::new();
        for bit in (0..13).rev() {
            if let Some(k) = (pivots.len()..rows.len()).find(|&k| (rows[k] >> bit) & 1 == 1) {
                rows.swap(pivots.len(), k);
                let r = rows[pivots.len()];
                for (k2, row) in rows.iter_mut().enumerate() {
                    if k2 != pivots.len() && (*row >> bit) & 1 == 1 {
                        *row ^= r;
                    }
                }
                pivots.push(bit);
            }
        }
        (0..13).filter(|b| !pivots.contains(b)).map(|b| 1u64 << b).collect()
    }
}

/// Outcome for one parameter tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    /// Δ ≡ 0.
    Degenerate,
    /// Every deg a_i <= i.
    Rational,
    /// Non-minimal at a rational place.
    NonMinimal,
    /// Tate's algorithm failed to terminate.
    Failed,
    /// Types of the fibres with vΔ >= the threshold.
    Examined(Vec<(KodairaType, u32)>),
}

fn gf2_masks(family: ScanFamily, index: u64, complements: &[Vec<u64>]) -> [u64; 5] {
    let bits = |lo: u32, n: u32| (index >> lo) & ((1 << n) - 1);
    match family {
        ScanFamily::CaseI => {
            let a3 = bits(0, 4) << 3;
            let a4 = bits(4, 9);
            let coords = bits(13, 7);
            let a6 = if a3 == 0 {
                coords
            } else {
                let basis = &complements[(a3 >> 3) as usize];
                (0..7).filter(|k| (coords >> k) & 1 == 1).fold(0, |acc, k| acc ^ basis[k])
            };
            [0, 0, a3, a4, a6]
        }
        ScanFamily::CaseII => {
            let (a, b, c, d) = (bits(0, 1), bits(1, 1), bits(2, 1), bits(3, 1));
            [0b100, bits(4, 4) << 1, (a << 1) | b, (c << 1) | d, bits(8, 13)]
        }
        ScanFamily::CaseIII => {
            let (a, b, c, d) = (bits(0, 1), bits(1, 1), bits(2, 1), bits(3, 1));
            [0b10, bits(4, 5), (a << 6) | b, (c << 8) | d, bits(9, 13)]
        }
    }
}

fn model_from_masks(field: &Field, masks: [u64; 5]) -> WeierstrassModel {
    let a = masks.map(|m| {
        let coeffs = (0..=gf2::degree(m).unwrap_or(0)).map(|j| Fe(((m >> j) & 1) as u32)).collect();
        UniPoly::new(field, coeffs)
    });
    WeierstrassModel::from_array(a).expect("masks respect the degree bounds")
}

fn classify_big(model: &WeierstrassModel, places: Vec<Place>) -> Outcome {
    let mut out = Vec::new();
    for place in places {
        match tate_classify(model, &place) {
            Ok(r) if r.minimality_reductions > 0 => return Outcome::NonMinimal,
            Ok(r) => out.push((r.kodaira, r.v_delta)),
            Err(_) => return Outcome::Failed,
        }
    }
    Outcome::Examined(out)
}

fn examine_gf2(field: &Field, masks: [u64; 5]) -> Outcome {
    let delta = gf2::char2_discriminant(masks);
    if delta == 0 {
        return Outcome::Degenerate;
    }
    let rational = masks
        .iter()
        .zip(crate::weierstrass::WEIGHTS)
        .all(|(&m, w)| gf2::degree(m).is_none_or(|d| d as usize <= w));
    if rational {
        return Outcome::Rational;
    }
    let v0 = delta.trailing_zeros();
    let v1 = gf2::val_one(delta);
    let vinf = DELTA_BOUND as u32 - gf2::degree(delta).expect("nonzero");
    let mut places = Vec::new();
    for (v, place) in [
        (v0, Place::zero(field)),
        (v1, Place::finite(field, Fe::ONE)),
        (vinf, Place::Infinity),
    ] {
        if v >= BIG_FIBRE_THRESHOLD {
            places.push(place);
        }
    }
    if places.is_empty() {
        return Outcome::Examined(Vec::new());
    }
    classify_big(&model_from_masks(field, masks), places)
}

fn examine_generic(model: &WeierstrassModel) -> Outcome {
    if model.is_singular() {
        return Outcome::Degenerate;
    }
    if !model.exceeds_rational_bounds() {
        return Outcome::Rational;
    }
    let field = model.field();
    let delta = model.discriminant();
    let mut places = Vec::new();
    let mut candidates: Vec<Place> = field.elements().expect("scan fields are small").map(|x| Place::finite(field, x)).collect();
    candidates.push(Place::Infinity);
    for place in candidates {
        if let Ok(Valuation::Finite(v)) = delta.valuation(&place, Some(DELTA_BOUND)) {
            if v >= BIG_FIBRE_THRESHOLD {
                places.push(place);
            }
        }
    }
    if places.is_empty() {
        return Outcome::Examined(Vec::new());
    }
    classify_big(model, places)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanMode {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

/// Associative summary of a batch of outcomes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tally {
    pub tested: u64,
    pub degenerate: u64,
    pub rational: u64,
    pub nonminimal: u64,
    pub failed: u64,
    pub examined: u64,
    /// Largest I_n and the first index attaining it.
    pub max_multiplicative: Option<(u32, u64)>,
    /// Largest I_n* and the first index attaining it.
    pub max_star: Option<(u32, u64)>,
    pub big_types: BTreeMap<KodairaType, u64>,
}

fn better(a: Option<(u32, u64)>, b: Option<(u32, u64)>) -> Option<(u32, u64)> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(if x.0 != y.0 {
            if x.0 > y.0 {
                x
            } else {
                y
            }
        } else if x.1 <= y.1 {
            x
        } else {
            y
        }),
    }
}

impl Tally {
    fn single(index: u64, o: &Outcome) -> Tally {
        let mut t = Tally {
            tested: 1,
            ..Tally::default()
        };
        match o {
            Outcome::Degenerate => t.degenerate = 1,
            Outcome::Rational => t.rational = 1,
            Outcome::NonMinimal => t.nonminimal = 1,
            Outcome::Failed => t.failed = 1,
            Outcome::Examined(fibres) => {
                t.examined = 1;
                for &(k, _) in fibres {
                    *t.big_types.entry(k).or_default() += 1;
                    match k {
                        KodairaType::I(n) => t.max_multiplicative = better(t.max_multiplicative, Some((n, index))),
                        KodairaType::IStar(n) => t.max_star = better(t.max_star, Some((n, index))),
                        _ => {}
                    }
                }
            }
        }
        t
    }

    fn merge(mut self, o: Tally) -> Tally {
        self.tested += o.tested;
        self.degenerate += o.degenerate;
        self.rational += o.rational;
        self.nonminimal += o.nonminimal;
        self.failed += o.failed;
        self.examined += o.examined;
        self.max_multiplicative = better(self.max_multiplicative, o.max_multiplicative);
        self.max_star = better(self.max_star, o.max_star);
        for (k, n) in o.big_types {
            *self.big_types.entry(k).or_default() += n;
        }
        self
    }
}

#[derive(Debug, Clone)]
pub struct Witness {
    pub index: u64,
    pub model: WeierstrassModel,
    pub report: GlobalReport,
    pub k3: bool,
}

#[derive(Debug, Clone)]
pub struct ScanReport {
    pub family: ScanFamily,
    pub field: Field,
    pub mode: ScanMode,
    pub tally: Tally,
    pub multiplicative_witness: Option<Witness>,
    pub star_witness: Option<Witness>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanRecord {
    pub family: String,
    pub field: String,
    pub mode: String,
    pub tested: u64,
    pub degenerate: u64,
    pub rational: u64,
    pub nonminimal: u64,
    pub failed: u64,
    pub examined: u64,
    pub max_multiplicative: Option<u32>,
    pub max_star: Option<u32>,
    pub big_types: BTreeMap<String, u64>,
    pub multiplicative_witness: Option<String>,
    pub star_witness: Option<String>,
}

impl ScanReport {
    pub fn max_multiplicative(&self) -> Option<u32> {
        self.tally.max_multiplicative.map(|x| x.0)
    }

    pub fn max_star(&self) -> Option<u32> {
        self.tally.max_star.map(|x| x.0)
    }

    fn mode_label(&self) -> String {
        match self.mode {
            ScanMode::Exhaustive => "exhaustive".into(),
            ScanMode::Sampled { count, seed } => format!("sampled count={count} seed={seed}"),
        }
    }

    pub fn record(&self) -> ScanRecord {
        let t = &self.tally;
        ScanRecord {
            family: self.family.name().into(),
            field: format!("{}^{}", self.field.characteristic(), self.field.degree()),
            mode: self.mode_label(),
            tested: t.tested,
            degenerate: t.degenerate,
            rational: t.rational,
            nonminimal: t.nonminimal,
            failed: t.failed,
            examined: t.examined,
            max_multiplicative: self.max_multiplicative(),
            max_star: self.max_star(),
            big_types: t.big_types.iter().map(|(k, n)| (k.to_string(), *n)).collect(),
            multiplicative_witness: self.multiplicative_witness.as_ref().map(|w| w.model.format("t")),
            star_witness: self.star_witness.as_ref().map(|w| w.model.format("t")),
        }
    }

    pub fn text(&self) -> String {
        let t = &self.tally;
        let mut s = format!(
            "family {} over GF({}^{}) ({})\n",
            self.family.name(),
            self.field.characteristic(),
            self.field.degree(),
            self.mode_label()
        );
        s += &format!(
            "tested {} | degenerate {} | rational {} | non-minimal {} | failed {} | examined {}\n",
            t.tested, t.degenerate, t.rational, t.nonminimal, t.failed, t.examined
        );
        let show = |x: Option<u32>, star: bool| match x {
            Some(n) if star => format!("I{n}*"),
            Some(n) => format!("I{n}"),
            None => "none".into(),
        };
        s += &format!(
            "max multiplicative (vΔ >= {BIG_FIBRE_THRESHOLD}): {}\nmax I_n* (vΔ >= {BIG_FIBRE_THRESHOLD}): {}\n",
            show(self.max_multiplicative(), false),
            show(self.max_star(), true)
        );
        let types: Vec<String> = t.big_types.iter().map(|(k, n)| format!("{k}:{n}")).collect();
        s += &format!("big fibre types: {}\n", types.join(" "));
        for (label, w) in [("multiplicative", &self.multiplicative_witness), ("I_n*", &self.star_witness)] {
            if let Some(w) = w {
                s += &format!("{label} witness #{} (K3: {}):\n", w.index, w.k3);
                for line in w.model.format("t").lines() {
                    s += &format!("  {line}\n");
                }
                s += &format!(
                    "  configuration: {}\n",
                    w.report.configuration().iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")
                );
            }
        }
        s
    }
}

struct Enumerator {
    family: ScanFamily,
    field: Field,
    mode: ScanMode,
    complements: Vec<Vec<u64>>,
}

impl Enumerator {
    fn new(family: ScanFamily, field: &Field, mode: ScanMode) -> Enumerator {
        let complements = if family == ScanFamily::CaseI && field.order() == 2 {
            (0..16u64)
                .map(|h| if h == 0 { Vec::new() } else { gf2::case_i_complement(h << 3) })
                .collect()
        } else {
            Vec::new()
        };
        Enumerator {
            family,
            field: field.clone(),
            mode,
            complements,
        }
    }

    fn fast(&self) -> bool {
        self.field.order() == 2 && self.mode == ScanMode::Exhaustive
    }

    fn model(&self, index: u64) -> WeierstrassModel {
        if self.fast() {
            return model_from_masks(&self.field, gf2_masks(self.family, index, &self.complements));
        }
        self.family.model(&self.field, &self.params(index))
    }

    fn params(&self, index: u64) -> Vec<Fe> {
        let q = self.field.order() as u64;
        match self.mode {
            ScanMode::Exhaustive => {
                let mut i = index;
                (0..self.family.slots())
                    .map(|_| {
                        let x = Fe((i % q) as u32);
                        i /= q;
                        x
                    })
                    .collect()
            }
            ScanMode::Sampled { seed, .. } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(index);
                (0..self.family.slots()).map(|_| Fe(rng.gen_range(0..q as u32))).collect()
            }
        }
    }

    fn examine(&self, index: u64) -> Outcome {
        if self.fast() {
            examine_gf2(&self.field, gf2_masks(self.family, index, &self.complements))
        } else {
            examine_generic(&self.model(index))
        }
    }

    fn witness(&self, index: u64) -> Witness {
        let model = self.model(index);
        let report = classify_all(&model, WITNESS_SEARCH_EXT).expect("witness classifies");
        let k3 = model.k3_from_report(&report).map(|v| v.k3).unwrap_or(false);
        Witness { index, model, report, k3 }
    }
}

/// Scan a family. `jobs = None` uses the global rayon pool.
pub fn scan_family(
    family: ScanFamily,
    field: &Field,
    mode: ScanMode,
    jobs: Option<usize>,
) -> Result<ScanReport, ScanError> {
    if field.characteristic() != 2 {
        return Err(ScanError::NotCharacteristicTwo(field.characteristic()));
    }
    let total = match mode {
        ScanMode::Exhaustive => family
            .exhaustive_size(field)
            .ok_or_else(|| ScanError::TooLarge(format!("{}^{}", field.order(), family.slots())))?,
        ScanMode::Sampled { count, .. } => count,
    };
    let en = Enumerator::new(family, field, mode);
    let run = || {
        (0..total)
            .into_par_iter()
            .fold(Tally::default, |acc, i| acc.merge(Tally::single(i, &en.examine(i))))
            .reduce(Tally::default, Tally::merge)
    };
    let tally = match jobs {
        None => run(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| ScanError::Pool(e.to_string()))?
            .install(run),
    };
    let multiplicative_witness = tally.max_multiplicative.map(|(_, i)| en.witness(i));
    let star_witness = tally.max_star.map(|(_, i)| en.witness(i));
    Ok(ScanReport {
        family,
        field: field.clone(),
        mode,
        tally,
        multiplicative_witness,
        star_witness,
    })
}

/// Outcome for the tuple `index` (exposed for cross-checks).
pub fn examine_index(family: ScanFamily, field: &Field, mode: ScanMode, index: u64) -> (WeierstrassModel, Outcome) {
    let en = Enumerator::new(family, field, mode);
    (en.model(index), en.examine(index))
}

/// The generic (non-bitmask) outcome for a model.
pub fn examine_model(model: &WeierstrassModel) -> Outcome {
    examine_generic(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bitmask_arithmetic() {
        assert_eq!(gf2::mul(0b11, 0b11), 0b101);
        assert_eq!(gf2::square(0b1011), 0b1000101);
        assert_eq!(gf2::val_one(0b101), 2);
        assert_eq!(gf2::val_one(0b111), 0);
        assert_eq!(gf2::val_one(gf2::mul(0b11, 0b111)), 1);
    }

    #[test]
    fn complement_spans() {
        let basis = gf2::case_i_complement(0b1001000);
        assert_eq!(basis.len(), 7);
    }

    #[test]
    fn fast_path_matches_generic() {
        let f = Field::prime(2).unwrap();
        for fam in ScanFamily::ALL {
            for index in (0..(1u64 << 20)).step_by(9973) {
                let (model, fast) = examine_index(fam, &f, ScanMode::Exhaustive, index);
                assert_eq!(fast, examine_model(&model), "{fam:?} #{index}");
            }
        }
    }
}
