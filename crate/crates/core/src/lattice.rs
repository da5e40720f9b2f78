//! Néron–Severi discriminants via Shioda–Tate, height contributions of
//! singular fibres, compatibility with supersingular discriminants
//! `-p^{2 sigma}`, and the mod-8 exclusion arguments.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::field::{is_prime, Rational};
use crate::tate::{KodairaType, RootLattice};

/// Range of the Artin invariant sigma_0 of a supersingular K3 surface.
pub const SIGMA_RANGE: std::ops::RangeInclusive<u32> = 1..=10;
/// Range of (P.O) used by the exhaustive congruence proofs.
pub const PO_RANGE: std::ops::RangeInclusive<i64> = 0..=10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("fibre type {0} is irreducible and has no root lattice")]
    Irreducible(KodairaType),
    #[error("contact {contact} is not a component of {kodaira}")]
    InvalidContact { kodaira: KodairaType, contact: Contact },
    #[error("Mordell-Weil rank {0} is outside the supported range 0..=1")]
    Rank(u32),
    #[error("rank 1 needs section contact data and (P.O)")]
    MissingSection,
    #[error("section contact data given for a rank-0 configuration")]
    UnexpectedSection,
    #[error("{fibres} fibres but {contacts} contact entries")]
    ContactLength { fibres: usize, contacts: usize },
    #[error("torsion order must be positive")]
    Torsion,
    #[error("(P.O) must be nonnegative, got {0}")]
    NegativePO(i64),
}

/// The component of a fibre met by a section.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Contact {
    /// The component met by the zero section.
    Identity,
    /// Component i of an I_n fibre, numbered cyclically from the identity.
    Cyclic(u32),
    /// The simple component of I_n* next to the identity.
    Near,
    /// One of the two far simple components of I_n*.
    Far,
    /// A non-identity simple component of III, IV, IV* or III*.
    NonIdentity,
}

impl fmt::Display for Contact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Contact::Identity => write!(f, "id"),
            Contact::Cyclic(i) => write!(f, "{i}"),
            Contact::Near => write!(f, "near"),
            Contact::Far => write!(f, "far"),
            Contact::NonIdentity => write!(f, "nonid"),
        }
    }
}

pub fn root_discriminant(t: KodairaType) -> Result<u64, LatticeError> {
    Ok(match t.root_lattice().ok_or(LatticeError::Irreducible(t))? {
        RootLattice::A(n) => n as u64 + 1,
        RootLattice::D(_) => 4,
        RootLattice::E6 => 3,
        RootLattice::E7 => 2,
        RootLattice::E8 => 1,
    })
}

/// Local height correction of a section meeting `contact`.
/// Values for III, IV, IV*, III* are extensions beyond the I_n / I_n* cases.
pub fn contribution(t: KodairaType, contact: Contact) -> Result<Rational, LatticeError> {
    let bad = || LatticeError::InvalidContact { kodaira: t, contact };
    let r = |a: i64, b: i64| Rational::new(BigInt::from(a), BigInt::from(b));
    if contact == Contact::Identity {
        return Ok(Rational::zero());
    }
    match (t, contact) {
        (KodairaType::I(n), Contact::Cyclic(i)) if n >= 1 && i < n.max(1) => {
            let (n, i) = (n as i64, i as i64);
            Ok(r(i * (n - i), n))
        }
        (KodairaType::IStar(_), Contact::Near) => Ok(r(1, 1)),
        (KodairaType::IStar(n), Contact::Far) => Ok(r(4 + n as i64, 4)),
        (KodairaType::III, Contact::NonIdentity) => Ok(r(1, 2)),
        (KodairaType::IV, Contact::NonIdentity) => Ok(r(2, 3)),
        (KodairaType::IVStar, Contact::NonIdentity) => Ok(r(4, 3)),
        (KodairaType::IIIStar, Contact::NonIdentity) => Ok(r(3, 2)),
        _ => Err(bad()),
    }
}

/// True for the contributions not instantiated by I_n / I_n* fibres.
pub fn is_extension_contribution(t: KodairaType) -> bool {
    matches!(t, KodairaType::III | KodairaType::IV | KodairaType::IVStar | KodairaType::IIIStar)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeConfig {
    pub fibres: Vec<KodairaType>,
    pub mw_rank: u32,
    pub torsion_order: u32,
    /// Aligned with `fibres`.
    pub section_contact: Option<Vec<Contact>>,
    pub p_o: Option<i64>,
}

impl LatticeConfig {
    pub fn rank0(fibres: Vec<KodairaType>, torsion_order: u32) -> LatticeConfig {
        LatticeConfig {
            fibres,
            mw_rank: 0,
            torsion_order,
            section_contact: None,
            p_o: None,
        }
    }

    pub fn rank1(fibres: Vec<KodairaType>, contacts: Vec<Contact>, p_o: i64) -> LatticeConfig {
        LatticeConfig {
            fibres,
            mw_rank: 1,
            torsion_order: 1,
            section_contact: Some(contacts),
            p_o: Some(p_o),
        }
    }

    pub fn validate(&self) -> Result<(), LatticeError> {
        if self.torsion_order == 0 {
            return Err(LatticeError::Torsion);
        }
        match self.mw_rank {
            0 => {
                if self.section_contact.is_some() || self.p_o.is_some() {
                    return Err(LatticeError::UnexpectedSection);
                }
            }
            1 => {
                let (Some(cs), Some(po)) = (&self.section_contact, self.p_o) else {
                    return Err(LatticeError::MissingSection);
                };
                if po < 0 {
                    return Err(LatticeError::NegativePO(po));
                }
                if cs.len() != self.fibres.len() {
                    return Err(LatticeError::ContactLength {
                        fibres: self.fibres.len(),
                        contacts: cs.len(),
                    });
                }
                for (&t, &c) in self.fibres.iter().zip(cs) {
                    contribution(t, c)?;
                }
            }
            r => return Err(LatticeError::Rank(r)),
        }
        Ok(())
    }

    /// Height <P,P> = 4 + 2 (P.O) - sum of contributions, for rank 1.
    pub fn height(&self) -> Result<Option<Rational>, LatticeError> {
        self.validate()?;
        if self.mw_rank == 0 {
            return Ok(None);
        }
        let cs = self.section_contact.as_ref().expect("validated");
        let po = self.p_o.expect("validated");
        let mut h = Rational::from_integer(BigInt::from(4 + 2 * po));
        for (&t, &c) in self.fibres.iter().zip(cs) {
            h -= contribution(t, c)?;
        }
        Ok(Some(h))
    }
}

/// A discriminant value known only up to a factor p^{2k}, k in Z.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedDiscr {
    pub value: Rational,
    pub up_to_even_p_power: bool,
}

impl fmt::Display for AnnotatedDiscr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)?;
        if self.up_to_even_p_power {
            write!(f, " (up to p^(2k))")?;
        }
        Ok(())
    }
}

/// |discr NS| from the fibre configuration, torsion and (rank 1) height.
pub fn shioda_tate_discr(cfg: &LatticeConfig) -> Result<AnnotatedDiscr, LatticeError> {
    cfg.validate()?;
    let mut prod = BigInt::one();
    for &t in &cfg.fibres {
        if t.components() >= 2 {
            prod *= root_discriminant(t)?;
        }
    }
    let tors = BigInt::from(cfg.torsion_order).pow(2);
    let mut v = Rational::new(prod, tors);
    if let Some(h) = cfg.height()? {
        v *= h;
    }
    Ok(AnnotatedDiscr {
        value: v.abs(),
        up_to_even_p_power: true,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArtinCertificate {
    pub compatible: bool,
    /// sigma_0 with d * p^{2k} = p^{2 sigma_0}.
    pub sigma0: Option<u32>,
    pub k: Option<i64>,
    pub obstruction: Option<String>,
}

/// Split a positive integer as p^e * rest.
fn p_adic_split(n: &BigInt, p: &BigInt) -> (i64, BigInt) {
    let mut e = 0;
    let mut r = n.clone();
    while !r.is_zero() && (&r % p).is_zero() {
        r /= p;
        e += 1;
    }
    (e, r)
}

fn smallest_prime_factor(n: &BigInt) -> BigInt {
    let mut d = BigInt::from(2);
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            return d;
        }
        d += 1;
    }
    n.clone()
}

/// Is d compatible, up to the annotated ambiguity, with p^{2 sigma_0},
/// sigma_0 in 1..=10?
pub fn artin_compatible(d: &AnnotatedDiscr, p: u32) -> ArtinCertificate {
    let fail = |why: String| ArtinCertificate {
        compatible: false,
        sigma0: None,
        k: None,
        obstruction: Some(why),
    };
    if !d.value.is_positive() {
        return fail(format!("{} is not positive", d.value));
    }
    if !is_prime(p as u64) {
        return fail(format!("{p} is not prime"));
    }
    let pb = BigInt::from(p);
    let (en, rn) = p_adic_split(d.value.numer(), &pb);
    let (ed, rd) = p_adic_split(d.value.denom(), &pb);
    if !rn.is_one() {
        let q = smallest_prime_factor(&rn);
        let e = p_adic_split(&rn, &q).0;
        return fail(format!("{q}^{e} divides the numerator and {q} != {p}"));
    }
    if !rd.is_one() {
        let q = smallest_prime_factor(&rd);
        return fail(format!("{q} divides the denominator and {q} != {p}"));
    }
    let e = en - ed;
    if e.is_odd() {
        return fail(format!("{p}-adic valuation {e} is odd"));
    }
    let half = e / 2;
    if half >= 1 && SIGMA_RANGE.contains(&(half as u32)) {
        return ArtinCertificate {
            compatible: true,
            sigma0: Some(half as u32),
            k: Some(0),
            obstruction: None,
        };
    }
    if !d.up_to_even_p_power {
        return fail(format!("{p}-adic valuation {e} is not 2 sigma_0 with sigma_0 in 1..=10"));
    }
    // Rescale by p^{2k} into the admissible range, nearest end first.
    let sigma0 = if half < 1 { 1 } else { *SIGMA_RANGE.end() as i64 };
    ArtinCertificate {
        compatible: true,
        sigma0: Some(sigma0 as u32),
        k: Some(sigma0 - half),
        obstruction: None,
    }
}

/// Primes dividing numerator or denominator of a discriminant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimeSupport {
    /// d = 1: compatible with every p after rescaling.
    Empty,
    /// d is a power of one prime; no other prime can be compatible.
    Single(u32),
    /// At least two distinct primes divide d; no prime is compatible.
    Several(u64, u64),
}

pub fn prime_support(d: &AnnotatedDiscr) -> PrimeSupport {
    let n = d.value.numer().abs() * d.value.denom();
    if n.is_one() {
        return PrimeSupport::Empty;
    }
    let q = smallest_prime_factor(&n);
    let (_, rest) = p_adic_split(&n, &q);
    let qu = u64::try_from(&q).unwrap_or(u64::MAX);
    if rest.is_one() {
        PrimeSupport::Single(u32::try_from(qu).unwrap_or(u32::MAX))
    } else {
        let r = u64::try_from(&smallest_prime_factor(&rest)).unwrap_or(u64::MAX);
        PrimeSupport::Several(qu, r)
    }
}

/// The primes among `candidates` compatible with d.
pub fn compatible_primes(d: &AnnotatedDiscr, candidates: impl IntoIterator<Item = u32>) -> Vec<u32> {
    candidates
        .into_iter()
        .filter(|&p| artin_compatible(d, p).compatible)
        .collect()
}

/// p^{2 sigma} mod 8 for every odd residue class p mod 8 and sigma in 1..=10.
pub fn odd_prime_power_residues() -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for p in [1u32, 3, 5, 7] {
        for s in SIGMA_RANGE {
            out.push((p, s, (0..2 * s).fold(1, |acc, _| acc * p % 8)));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Scenario {
    /// An I20 fibre with a rank-1 Mordell-Weil group in odd characteristic.
    I20OddChar,
    /// An I15* fibre with rank 1, generator on the far component, odd characteristic.
    I15StarFarOddChar,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::I20OddChar => "I20_odd_char",
            Scenario::I15StarFarOddChar => "I15star_far_odd_char",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProofTranscript {
    pub scenario: String,
    pub lines: Vec<String>,
    pub cases: usize,
    pub excluded: usize,
}

impl ProofTranscript {
    pub fn all_excluded(&self) -> bool {
        self.cases > 0 && self.cases == self.excluded
    }

    pub fn text(&self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }
}

fn mod8(v: &Rational) -> Option<i64> {
    if !v.is_integer() {
        return None;
    }
    v.to_integer().mod_floor(&BigInt::from(8)).to_i64()
}

/// Why an integer discriminant value cannot be an odd prime power p^{2s},
/// allowing any extra factor p^{2k}; `None` if it survives.
fn odd_power_obstruction(v: &Rational) -> Option<String> {
    if !v.is_integer() {
        return Some(format!("{v} is not an integer"));
    }
    let r = mod8(v).expect("integer");
    if r % 2 == 0 {
        return Some(format!("{v} is even, odd p^(2s) is odd"));
    }
    if r != 1 {
        return Some(format!("{v} = {r} mod 8, odd p^(2s) = 1 mod 8"));
    }
    if !v.is_positive() {
        return Some(format!("height {v} <= 0"));
    }
    None
}

/// Exhaustive exclusion transcript for a scenario.
pub fn congruence_proof(scenario: Scenario) -> ProofTranscript {
    let mut lines = vec![format!("scenario {}", scenario.name())];
    // Lemma: odd squares are 1 mod 8, so every p^{2s} p^{2k} is 1 mod 8.
    let residues = odd_prime_power_residues();
    let lemma = residues.iter().all(|&(_, _, r)| r == 1);
    lines.push(format!(
        "lemma: p^(2s) mod 8 = 1 for p mod 8 in {{1,3,5,7}}, s in 1..=10: {}",
        if lemma { "holds" } else { "FAILS" }
    ));
    let (fibre, contacts): (KodairaType, Vec<Contact>) = match scenario {
        Scenario::I20OddChar => (KodairaType::I(20), (0..20).map(Contact::Cyclic).collect()),
        Scenario::I15StarFarOddChar => (
            KodairaType::IStar(15),
            vec![Contact::Identity, Contact::Near, Contact::Far],
        ),
    };
    // (P.O) enters with coefficient 2 * disc(root lattice); check it is 0 mod 8.
    let disc = root_discriminant(fibre).expect("reducible") as i64;
    lines.push(format!(
        "(P.O) coefficient {} = {} mod 8: residues independent of (P.O)",
        2 * disc,
        (2 * disc) % 8
    ));
    let (mut cases, mut excluded) = (0, 0);
    for &c in &contacts {
        for po in PO_RANGE {
            let cfg = LatticeConfig::rank1(vec![fibre], vec![c], po);
            let d = shioda_tate_discr(&cfg).expect("valid configuration");
            let signed = cfg.height().expect("valid").expect("rank 1") * Rational::from_integer(BigInt::from(disc));
            cases += 1;
            let why = odd_power_obstruction(&signed);
            match why {
                Some(w) => {
                    excluded += 1;
                    lines.push(format!("{fibre} contact={c} (P.O)={po}: |discr| = {} ; excluded: {w}", d.value));
                }
                None => lines.push(format!("{fibre} contact={c} (P.O)={po}: |discr| = {} ; SURVIVES", d.value)),
            }
        }
    }
    lines.push(format!(
        "{excluded}/{cases} cases excluded: {}",
        if excluded == cases && lemma { "contradiction in every case" } else { "NOT all excluded" }
    ));
    if !lemma {
        excluded = 0;
    }
    ProofTranscript {
        scenario: scenario.name().into(),
        lines,
        cases,
        excluded,
    }
}
