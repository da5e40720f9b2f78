//! Named verifications. Each returns a [`Verdict`] with a line-oriented
//! transcript; checks are tagged `[ok]`, `[FAIL]`, `[axiom]` or `[note]`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::field::{is_prime, Fe, Field};
use crate::format::{AnyModel, ModelFile};
use crate::lattice::{
    artin_compatible, congruence_proof, odd_prime_power_residues, shioda_tate_discr, AnnotatedDiscr,
    LatticeConfig, Scenario,
};
use crate::poly::{Place, UniPoly};
use crate::symbolic::{
    apply_assignments, eliminate, factor_form, impose_valuation, sym_specialize, ConstraintSystem, Family,
    FamilyKind, Leaf, SymPlace, SymPoly, DEFAULT_BUDGET,
};
use crate::tate::{classify_all, reduction_kind, tate_classify, KodairaType, ReductionKind};
use crate::weierstrass::{CoordChange, WeierstrassModel};

/// Primes tried when a statement quantifies over all p.
pub const PRIME_SAMPLE_BOUND: u32 = 100;
/// Random models per field in the sampled case-(i) checks.
pub const CASE_I_SAMPLES: u64 = 256;
const SEED: u64 = 0x6b33_1813;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
            Status::Skipped => "SKIPPED",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub name: String,
    pub status: Status,
    pub transcript: Vec<String>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn text(&self) -> String {
        let mut s = format!("verification {}\n", self.name);
        for l in &self.transcript {
            s.push_str(l);
            s.push('\n');
        }
        s.push_str(&format!("verdict: {}\n", self.status));
        s
    }

    /// File name for the transcript.
    pub fn file_name(&self) -> String {
        format!("{}.txt", self.name)
    }
}

#[derive(Default)]
struct Log {
    lines: Vec<String>,
    failed: bool,
    inconclusive: bool,
}

impl Log {
    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn check(&mut self, ok: bool, what: impl fmt::Display) -> bool {
        self.lines.push(format!("[{}] {what}", if ok { "ok" } else { "FAIL" }));
        self.failed |= !ok;
        ok
    }

    fn absorb(&mut self, v: Verdict) {
        self.line(format!("== {} ==", v.name));
        self.lines.extend(v.transcript);
        match v.status {
            Status::Fail => self.failed = true,
            Status::Inconclusive => self.inconclusive = true,
            _ => {}
        }
    }

    fn finish(self, name: &str) -> Verdict {
        let status = if self.failed {
            Status::Fail
        } else if self.inconclusive {
            Status::Inconclusive
        } else {
            Status::Pass
        };
        Verdict {
            name: name.to_string(),
            status,
            transcript: self.lines,
        }
    }
}

fn gf(p: u32, k: u32) -> Field {
    Field::new(p, k).expect("small field")
}

fn primes_below(n: u32) -> Vec<u32> {
    (2..n).filter(|&p| is_prime(p as u64)).collect()
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Shioda-Tate values for finite Mordell-Weil over each torsion order.
fn finite_mw_values(log: &mut Log, fibres: &[KodairaType], torsion: &[u32]) -> BTreeSet<u64> {
    let mut vals = BTreeSet::new();
    for &t in torsion {
        let cfg = LatticeConfig::rank0(fibres.to_vec(), t);
        let d = shioda_tate_discr(&cfg).expect("valid configuration");
        let names: Vec<String> = fibres.iter().map(|k| k.to_string()).collect();
        log.line(format!("[{}] torsion {t}: |discr NS| = {}", names.join(" + "), d));
        if d.value.is_integer() {
            vals.insert(d.value.to_integer().try_into().expect("small"));
        }
    }
    vals
}

/// Check that no prime p admits the value as -p^{2 sigma_0}.
fn reject_for_all_primes(log: &mut Log, value: u64) -> bool {
    let d = AnnotatedDiscr {
        value: crate::field::rational(value as i64, 1),
        up_to_even_p_power: true,
    };
    let factors = distinct_prime_factors(value);
    let structural = factors.len() >= 2 || (factors.len() == 1 && odd_valuation(value, factors[0]));
    let sampled: Vec<u32> = primes_below(PRIME_SAMPLE_BOUND)
        .into_iter()
        .filter(|&p| artin_compatible(&d, p).compatible)
        .collect();
    let why = if factors.len() >= 2 {
        format!("primes {factors:?} divide it")
    } else {
        format!("odd {}-adic valuation", factors.first().copied().unwrap_or(1))
    };
    log.check(
        structural && sampled.is_empty(),
        format!("{value}: not -p^(2s) up to p^(2k) for any p ({why}; no compatible p < {PRIME_SAMPLE_BOUND})"),
    )
}

fn odd_valuation(mut n: u64, p: u64) -> bool {
    let mut e = 0;
    while n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    n == 1 && e % 2 == 1
}

fn congruence(log: &mut Log, s: Scenario) -> bool {
    let t = congruence_proof(s);
    for l in &t.lines {
        log.line(format!("  {l}"));
    }
    log.check(
        t.all_excluded(),
        format!("{}: {}/{} cases excluded", t.scenario, t.excluded, t.cases),
    )
}

/// No I20 (or I21) fibre in odd characteristic.
pub fn verify_thm20_odd() -> Verdict {
    let mut log = Log::default();
    log.line("finite Mordell-Weil: rank NS = 22 forces one more A1 fibre next to I20");
    let mut vals = finite_mw_values(&mut log, &[KodairaType::I(20), KodairaType::I(2)], &[1, 2]);
    vals.extend(finite_mw_values(&mut log, &[KodairaType::I(20), KodairaType::III], &[1, 2]));
    log.check(vals == BTreeSet::from([10, 40]), format!("finite-MW values {vals:?} = {{10, 40}}"));
    for v in vals {
        reject_for_all_primes(&mut log, v);
    }
    log.line("I21: rank NS = 22 already, so Mordell-Weil is finite");
    for v in finite_mw_values(&mut log, &[KodairaType::I(21)], &[1]) {
        reject_for_all_primes(&mut log, v);
    }
    log.line("Mordell-Weil rank 1 with an I20 fibre:");
    congruence(&mut log, Scenario::I20OddChar);
    log.finish("thm20_odd")
}

/// Record an elimination and check that every consistent branch collapses
/// to Δ ≡ 0 with survivors among `allowed`.
fn check_collapse(
    log: &mut Log,
    family: &Family,
    delta: &SymPoly,
    place: SymPlace,
    n: u32,
    allowed: &str,
) -> bool {
    let sys = impose_valuation(delta, place, n).expect("n <= 24");
    log.line(format!(
        "{} | v_{place}(Δ) >= {n}: {} equations",
        family.kind.name(),
        sys.equations.len()
    ));
    let r = eliminate(&sys, DEFAULT_BUDGET);
    for l in &r.transcript {
        log.line(format!("  {l}"));
    }
    if r.budget_exhausted || r.leaves.iter().any(|(_, l, _)| matches!(l, Leaf::Stuck { .. })) {
        log.line(format!("[FAIL] elimination inconclusive within budget {DEFAULT_BUDGET}"));
        log.inconclusive = true;
        return false;
    }
    let mut ok = true;
    for (path, leaf, s) in &r.leaves {
        if let Leaf::Solved { survivors, .. } = leaf {
            let residual = apply_assignments(delta, &s.assignments);
            let tag = if path.is_empty() { "root".into() } else { path.join(",") };
            ok &= log.check(
                survivors.iter().all(|x| x.starts_with(allowed)) && residual.is_zero(),
                format!("[{tag}] survivors {} ⊆ {allowed}*, Δ ≡ 0", survivors.join(",")),
            );
        }
    }
    ok &= log.check(r.all_parameters_killed().is_some(), "every branch terminated");
    ok
}

fn no_multiplicative_when_a1_vanishes(log: &mut Log) {
    let fam = Family::new(FamilyKind::GeneralChar2);
    let zero = SymPoly::zero(&fam.syms);
    let kill: Vec<(usize, SymPoly)> = (0..3)
        .map(|j| (fam.syms.index(&format!("a1_{j}")).expect("symbol"), zero.clone()))
        .collect();
    let delta = apply_assignments(&fam.discriminant(), &kill);
    let a3 = &fam.a[2];
    log.check(delta == a3.square().square(), "a1 ≡ 0: symbolic Δ = a3^4");
    log.check(
        apply_assignments(&fam.a[0], &kill).pow(4).is_zero(),
        "a1 ≡ 0: c4 = a1^4 ≡ 0, so every singular fibre is additive",
    );
    // Sampled confirmation through the concrete reduction test.
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut places = 0;
    let mut bad = 0;
    for k in 1..=3 {
        let f = gf(2, k);
        for _ in 0..16 {
            let coeffs = |rng: &mut ChaCha8Rng, d: usize| {
                UniPoly::new(&f, (0..=d).map(|_| Fe(rng.gen_range(0..f.order()))).collect())
            };
            let m = WeierstrassModel::from_array([
                UniPoly::zero(&f),
                coeffs(&mut rng, 4),
                coeffs(&mut rng, 6),
                coeffs(&mut rng, 8),
                coeffs(&mut rng, 12),
            ])
            .expect("same field");
            if m.is_singular() {
                continue;
            }
            let Ok(report) = classify_all(&m, 4) else { continue };
            for fib in &report.fibres {
                places += 1;
                if reduction_kind(&m, &fib.place) != Ok(ReductionKind::Additive) {
                    bad += 1;
                }
            }
        }
    }
    log.check(bad == 0, format!("a1 ≡ 0 samples over GF(2..8): {places} singular places, all additive"));
}

fn char2_multiplicative(n: u32, name: &str) -> Verdict {
    let mut log = Log::default();
    log.line(format!("characteristic 2, a multiplicative fibre with vΔ >= {n}"));
    log.line("case (i) a1 ≡ 0");
    no_multiplicative_when_a1_vanishes(&mut log);

    log.line("case (ii) a1 = t^2");
    let (f2, d2) = crate::symbolic::symbolic_discriminant(FamilyKind::CaseII);
    log.check(d2.coeff_t(5).is_zero(), "Δ has no t^5 term, so v_inf(Δ) >= 19 iff v_inf(Δ) >= 20");
    let sys = impose_valuation(&d2, SymPlace::Zero, 5).expect("bound");
    let r = eliminate(&sys, DEFAULT_BUDGET);
    for l in &r.transcript {
        log.line(format!("  {l}"));
    }
    let killed = r.solved().all(|s| {
        let names: BTreeSet<&str> = s.assignments.iter().map(|(i, _)| s.syms.name(*i)).collect();
        names.contains("a") && names.contains("b")
    });
    log.check(
        killed && r.all_parameters_killed().is_some(),
        "v_0(Δ) > 4 forces d0 = b^4 = 0 and d4 = a^4 = 0; c4 = t^8 vanishes at 0: additive",
    );
    log.line("a multiplicative fibre sits at t != 0 and is moved to infinity");
    check_collapse(&mut log, &f2, &d2, SymPlace::Infinity, n, "a2t");

    log.line("case (iii) a1 = t");
    let (f3, d3) = crate::symbolic::symbolic_discriminant(FamilyKind::CaseIII);
    let sys = impose_valuation(&d3, SymPlace::Zero, 1).expect("bound");
    let b4 = SymPoly::named(&f3.syms, "b").pow(4);
    log.check(
        sys.equations.len() == 1 && sys.equations[0].poly == b4,
        "v_0(Δ) > 0 iff b = 0, and then c4 = t^4 vanishes at 0: additive (likewise at infinity)",
    );
    let ff = factor_form(&d3, 20).expect("bound");
    let g = |l: &str| ff.equations.iter().find(|e| e.label == l).map(|e| e.poly.to_string());
    log.check(
        g("[t^1]").as_deref() == Some("g1") && g("[t^2]").as_deref() == Some("g2"),
        "Δ = (t+1)^20 g: (t+1)^20 = t^20 + t^16 + t^4 + 1 and Δ lacks t, t^2, so g1 = g2 = 0",
    );
    log.line("a multiplicative fibre at t0 != 0, inf is rescaled to t0 = 1");
    check_collapse(&mut log, &f3, &d3, SymPlace::One, n, "a2_");
    log.finish(name)
}

/// No I20 fibre in characteristic 2.
pub fn verify_thm20_char2() -> Verdict {
    char2_multiplicative(20, "thm20_char2")
}

/// No I19 fibre in characteristic 2.
pub fn verify_prop19_char2() -> Verdict {
    char2_multiplicative(19, "prop19_char2")
}

/// All characteristics.
pub fn verify_thm20() -> Verdict {
    let mut log = Log::default();
    log.absorb(verify_thm20_odd());
    log.absorb(verify_thm20_char2());
    log.finish("thm20")
}

pub fn verify_prop19() -> Verdict {
    let mut log = Log::default();
    log.absorb(verify_prop19_char2());
    log.finish("prop19")
}

/// Tate's algorithm at t = 0 on one instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtZero {
    Singular,
    NonMinimal,
    Fibre(KodairaType, u32),
}

pub fn classify_at_origin(m: &WeierstrassModel) -> AtZero {
    if m.is_singular() {
        return AtZero::Singular;
    }
    let r = tate_classify(m, &Place::zero(m.field())).expect("terminates");
    if r.minimality_reductions > 0 {
        AtZero::NonMinimal
    } else {
        AtZero::Fibre(r.kodaira, r.v_delta)
    }
}

type LeafInstance = (BTreeMap<String, Fe>, AtZero);

/// Instances of a solved elimination leaf over `field`, one per assignment
/// of the survivors (each ranging over `domain(name)`), classified at 0.
fn leaf_outcomes(
    family: &Family,
    leaf: &ConstraintSystem,
    survivors: &[String],
    field: &Field,
    domain: impl Fn(&str) -> Vec<Fe>,
    cap: usize,
) -> (usize, Vec<LeafInstance>) {
    let a: Vec<SymPoly> = family.a.iter().map(|x| apply_assignments(x, &leaf.assignments)).collect();
    let ranges: Vec<Vec<Fe>> = survivors.iter().map(|s| domain(s)).collect();
    let total: usize = ranges.iter().map(|r| r.len()).product();
    let indices: Vec<usize> = if total <= cap {
        (0..total).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        (0..cap).map(|_| rng.gen_range(0..total)).collect()
    };
    let out = indices
        .into_par_iter()
        .map(|mut idx| {
            let mut vals = BTreeMap::new();
            for (s, r) in survivors.iter().zip(&ranges) {
                vals.insert(s.clone(), r[idx % r.len()]);
                idx /= r.len();
            }
            let polys: Vec<UniPoly> = a
                .iter()
                .map(|x| sym_specialize(x, field, &vals).expect("all survivors assigned"))
                .collect();
            let m = WeierstrassModel::from_array(polys.try_into().expect("five")).expect("same field");
            let o = classify_at_origin(&m);
            (vals, o)
        })
        .collect();
    (total, out)
}

/// Cap on enumerated instances per leaf and field; larger spaces are sampled.
pub const LEAF_CAP: usize = 1 << 14;

/// Outcome of Tate's algorithm at t = 0 over a family of instances.
#[derive(Debug, Clone, Default)]
pub struct StarSurvey {
    pub singular: usize,
    pub nonminimal: usize,
    pub types: BTreeMap<KodairaType, usize>,
    pub max_star: Option<u32>,
}

impl StarSurvey {
    fn add(&mut self, m: &WeierstrassModel) -> Option<(KodairaType, u32)> {
        self.record(classify_at_origin(m))
    }

    fn record(&mut self, o: AtZero) -> Option<(KodairaType, u32)> {
        match o {
            AtZero::Singular => {
                self.singular += 1;
                None
            }
            AtZero::NonMinimal => {
                self.nonminimal += 1;
                None
            }
            AtZero::Fibre(k, v) => {
                *self.types.entry(k).or_default() += 1;
                if let KodairaType::IStar(n) = k {
                    self.max_star = self.max_star.max(Some(n));
                }
                Some((k, v))
            }
        }
    }

    fn summary(&self) -> String {
        let t: Vec<String> = self.types.iter().map(|(k, n)| format!("{k}:{n}")).collect();
        format!(
            "{} | singular {} | non-minimal {}",
            t.join(" "),
            self.singular,
            self.nonminimal
        )
    }
}

/// Case (i*) instance y^2 + a3 y = x^3 + t x^2 with a3 = t^e.
pub fn case_i_star_model(field: &Field, e: usize) -> WeierstrassModel {
    let z = UniPoly::zero(field);
    WeierstrassModel::from_array([z.clone(), UniPoly::t(field), UniPoly::monomial(field, Fe::ONE, e), z.clone(), z])
        .expect("same field")
}

/// Case (ii*) model y^2 + t^2 xy = x^3 + t a2~ x^2 + t^8 a6~.
pub fn case_ii_star_model(field: &Field, a2t: &[Fe], a6t: &[Fe]) -> WeierstrassModel {
    let mut a2 = vec![Fe::ZERO];
    a2.extend_from_slice(a2t);
    let mut a6 = vec![Fe::ZERO; 8];
    a6.extend_from_slice(a6t);
    WeierstrassModel::from_array([
        UniPoly::monomial(field, Fe::ONE, 2),
        UniPoly::new(field, a2),
        UniPoly::zero(field),
        UniPoly::zero(field),
        UniPoly::new(field, a6),
    ])
    .expect("same field")
}

/// Case (iii*) model y^2 + txy + t^6 y = x^3 + (e t^4 + c t^3 + a6~) x^2 + c t^8 x + t^10 a6~.
pub fn case_iii_star_model(field: &Field, e: Fe, c: Fe, a6t: [Fe; 3]) -> WeierstrassModel {
    let mut a2 = a6t.to_vec();
    a2.extend([c, e]);
    let mut a6 = vec![Fe::ZERO; 10];
    a6.extend(a6t);
    WeierstrassModel::from_array([
        UniPoly::t(field),
        UniPoly::new(field, a2),
        UniPoly::monomial(field, Fe::ONE, 6),
        UniPoly::monomial(field, c, 8),
        UniPoly::new(field, a6),
    ])
    .expect("same field")
}

fn star_case_i(log: &mut Log) -> Option<u32> {
    log.line("case (i*) a1 ≡ 0: Δ = a3^4, so v_0(Δ) >= 20 means a3 = t^5 or t^6 after normalizing");
    let mut overall = None;
    for (e, expect) in [(5, 7u32), (6, 9)] {
        for k in [1, 2] {
            let f = gf(2, k);
            let r = tate_classify(&case_i_star_model(&f, e), &Place::zero(&f)).expect("terminates");
            log.check(
                r.kodaira == KodairaType::IStar(expect),
                format!("GF(2^{k}) a3 = t^{e}, a2 = t: {} (vΔ {})", r.kodaira, r.v_delta),
            );
            // Other coefficients never push the type past the a3 bound.
            let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ (e as u64) << 8 ^ k as u64);
            let mut survey = StarSurvey::default();
            for _ in 0..CASE_I_SAMPLES {
                let mut c = |d: usize, lo: usize| {
                    let mut v = vec![Fe::ZERO; lo];
                    v.extend((lo..=d).map(|_| Fe(rng.gen_range(0..f.order()))));
                    UniPoly::new(&f, v)
                };
                let (a2, a4, a6) = (c(4, 1), c(8, 0), c(12, 0));
                let m = WeierstrassModel::from_array([UniPoly::zero(&f), a2, UniPoly::monomial(&f, Fe::ONE, e), a4, a6])
                    .expect("same field");
                survey.add(&m);
            }
            log.check(
                survey.max_star.is_none_or(|n| n <= expect),
                format!("GF(2^{k}) a3 = t^{e}, {CASE_I_SAMPLES} random a2 (t | a2), a4, a6: {}", survey.summary()),
            );
            overall = overall.max(survey.max_star).max(Some(expect));
        }
    }
    overall
}

fn star_case_ii(log: &mut Log) -> Option<u32> {
    log.line("case (ii*) a1 = t^2");
    let fam = Family::new(FamilyKind::CaseII);
    let delta = fam.discriminant();
    let sys = impose_valuation(&delta, SymPlace::Zero, 20).expect("bound");
    let r = eliminate(&sys, DEFAULT_BUDGET);
    for l in &r.transcript {
        log.line(format!("  {l}"));
    }
    let Some(_) = r.all_parameters_killed() else {
        log.line("[FAIL] elimination did not terminate");
        log.inconclusive = true;
        return None;
    };
    let mut overall = None;
    for (path, leaf, s) in &r.leaves {
        let Leaf::Solved { survivors, .. } = leaf else { continue };
        let shape = ["a", "b", "c", "d"].iter().all(|x| s.assignments.iter().any(|(i, v)| s.syms.name(*i) == *x && v.is_zero()));
        log.check(
            shape,
            format!("[{}] a3 = a4 = 0: y^2 + t^2 xy = x^3 + t a2~ x^2 + t^8 a6~", path.join(",")),
        );
        for k in [1, 2] {
            let f = gf(2, k);
            let els: Vec<Fe> = f.elements().expect("small").collect();
            let mut survey = StarSurvey::default();
            let mut max_shape_ok = true;
            let (total, outcomes) = leaf_outcomes(&fam, s, survivors, &f, |_| els.clone(), LEAF_CAP);
            let scope = if total <= LEAF_CAP { format!("all {total}") } else { format!("{LEAF_CAP} sampled of {total}") };
            for (vals, o) in outcomes {
                if let Some((KodairaType::IStar(12), _)) = survey.record(o) {
                    let low: bool = (8..12).all(|j| vals[&format!("a6_{j}")] == Fe::ZERO);
                    max_shape_ok &= low && vals["a6_12"] != Fe::ZERO;
                }
            }
            log.check(
                survey.max_star == Some(12),
                format!("GF(2^{k}) {scope} instances: {}", survey.summary()),
            );
            log.check(max_shape_ok, format!("GF(2^{k}) I12* occurs only for a6~ = e t^4"));
            overall = overall.max(survey.max_star);
        }
    }
    // The y -> y + sqrt(e) t^6 change moves e t^12 from a6 into a4.
    let f = gf(2, 2);
    let e = Fe(2);
    let root = f.pth_root(e);
    let m = case_ii_star_model(&f, &[Fe::ONE, Fe::ZERO, Fe::ONE, Fe::ZERO], &[Fe::ZERO, Fe::ZERO, Fe::ZERO, Fe::ZERO, e]);
    let w = UniPoly::monomial(&f, root, 6);
    let changed = m.apply_change(&CoordChange::translation(&f, UniPoly::zero(&f), UniPoly::zero(&f), w));
    let target_a4 = UniPoly::monomial(&f, root, 8);
    log.check(
        changed.as_ref().is_ok_and(|c| c.a(6).is_zero() && c.a(4) == &target_a4),
        "y -> y + sqrt(e) t^6 turns t^8 (e t^4) into a4 = sqrt(e) t^8, a6 = 0",
    );
    let r = tate_classify(&m, &Place::zero(&f)).expect("terminates");
    log.check(r.kodaira == KodairaType::IStar(12), format!("GF(4) e = w: terminates at {}", r.kodaira));
    overall
}

/// Case (iii*) statistics over one field, restricted to a = 1.
#[derive(Debug, Clone, Default)]
pub struct CaseIIIStarStats {
    pub survey: StarSurvey,
    /// I13* exactly when c^2 = e.
    pub i13_iff_c_sqrt_e: bool,
    /// vΔ = 21 exactly when c = e.
    pub v21_iff_c_eq_e: bool,
    /// vΔ = 21 exactly when c^2 = e.
    pub v21_iff_c_sqrt_e: bool,
}

/// Every (e, c, a6~) of the (iii*) family over `field`.
pub fn case_iii_star_stats(field: &Field) -> CaseIIIStarStats {
    let els: Vec<Fe> = field.elements().expect("small").collect();
    let mut st = CaseIIIStarStats {
        i13_iff_c_sqrt_e: true,
        v21_iff_c_eq_e: true,
        v21_iff_c_sqrt_e: true,
        ..Default::default()
    };
    for &e in &els {
        for &c in &els {
            for &g0 in &els {
                for &g1 in &els {
                    for &g2 in &els {
                        let m = case_iii_star_model(field, e, c, [g0, g1, g2]);
                        if let Some((k, v)) = st.survey.add(&m) {
                            let sq = field.mul(c, c) == e;
                            st.i13_iff_c_sqrt_e &= (k == KodairaType::IStar(13)) == sq;
                            st.v21_iff_c_eq_e &= (v == 21) == (c == e);
                            st.v21_iff_c_sqrt_e &= (v == 21) == sq;
                        }
                    }
                }
            }
        }
    }
    st
}

fn star_case_iii(log: &mut Log) -> Option<u32> {
    log.line("case (iii*) a1 = t");
    let fam = Family::new(FamilyKind::CaseIII);
    let delta = fam.discriminant();
    let sys = impose_valuation(&delta, SymPlace::Zero, 20).expect("bound");
    let r = eliminate(&sys, DEFAULT_BUDGET);
    for l in &r.transcript {
        log.line(format!("  {l}"));
    }
    if r.all_parameters_killed().is_none() {
        log.line("[FAIL] elimination did not terminate");
        log.inconclusive = true;
        return None;
    }
    let mut overall = None;
    for (path, leaf, s) in &r.leaves {
        let Leaf::Solved { survivors, .. } = leaf else { continue };
        let tag = path.join(",");
        let a_nonzero = s.nonvanishing.iter().any(|&i| s.syms.name(i) == "a");
        if a_nonzero {
            log.line(format!(
                "[{tag}] b = d = 0, a6 = t^10 a^2 (a2_0 + a2_1 t + a2_2 t^2), c = a a2_3; with a = 1 this is \
                 y^2 + txy + t^6 y = x^3 + (e t^4 + c t^3 + a6~) x^2 + c t^8 x + t^10 a6~"
            ));
        } else {
            log.line(format!("[{tag}] a = 0: a3 = a6 = 0, Δ = c^2 t^20"));
            log.line("[note] this branch is not singular; Tate's algorithm bounds it below");
        }
        for k in [1, 2] {
            let f = gf(2, k);
            let els: Vec<Fe> = f.elements().expect("small").collect();
            let nonzero: Vec<Fe> = els.iter().copied().filter(|x| *x != Fe::ZERO).collect();
            let mut survey = StarSurvey::default();
            let dom = |n: &str| if n == "a" { nonzero.clone() } else { els.clone() };
            for (_, o) in leaf_outcomes(&fam, s, survivors, &f, dom, LEAF_CAP).1 {
                survey.record(o);
            }
            log.check(
                survey.max_star.is_some_and(|n| n <= 13),
                format!("[{tag}] GF(2^{k}) all instances: {}", survey.summary()),
            );
            overall = overall.max(survey.max_star);
        }
    }
    for k in [1, 2] {
        let f = gf(2, k);
        let st = case_iii_star_stats(&f);
        log.line(format!("GF(2^{k}) a = 1 family: {}", st.survey.summary()));
        log.check(st.i13_iff_c_sqrt_e, format!("GF(2^{k}): I13* iff c = sqrt(e), otherwise I12*"));
        if k == 1 {
            log.check(st.v21_iff_c_eq_e, "GF(2): v_0(Δ) = 21 iff c = e");
        } else {
            log.line(format!(
                "[note] GF(4): v_0(Δ) = 21 iff c = e: {}; v_0(Δ) = 21 iff c^2 = e: {}",
                st.v21_iff_c_eq_e, st.v21_iff_c_sqrt_e
            ));
        }
    }
    overall
}

fn char2_star_bound(log: &mut Log) -> Option<u32> {
    log.line("characteristic 2, an I_n* fibre with n >= 14 has vΔ >= 20 at 0");
    let i = star_case_i(log);
    let ii = star_case_ii(log);
    let iii = star_case_iii(log);
    let max = i.max(ii).max(iii);
    log.line(format!(
        "char-2 maxima: (i*) I{}*, (ii*) I{}*, (iii*) I{}*",
        i.unwrap_or(0),
        ii.unwrap_or(0),
        iii.unwrap_or(0)
    ));
    max
}

/// No I_n* with n > 14 in any characteristic.
pub fn verify_thm15star() -> Verdict {
    let mut log = Log::default();
    log.line("I16*: rank NS = 22 from D20 alone, Mordell-Weil finite");
    let v16 = finite_mw_values(&mut log, &[KodairaType::IStar(16)], &[1]);
    log.check(v16 == BTreeSet::from([4]), "I16* gives |discr NS| = 4");
    let d4 = AnnotatedDiscr {
        value: crate::field::rational(4, 1),
        up_to_even_p_power: true,
    };
    let ps: Vec<u32> = primes_below(PRIME_SAMPLE_BOUND)
        .into_iter()
        .filter(|&p| artin_compatible(&d4, p).compatible)
        .collect();
    log.check(ps == vec![2], format!("4 = -p^(2s) only for p = 2 (compatible primes < {PRIME_SAMPLE_BOUND}: {ps:?})"));
    log.line("[axiom] in characteristic 2 the classification of extremal elliptic K3 surfaces has no I16* fibre");

    log.line("I15*: one more A1 fibre, finite Mordell-Weil");
    let mut v15 = finite_mw_values(&mut log, &[KodairaType::IStar(15), KodairaType::I(2)], &[1, 2]);
    v15.extend(finite_mw_values(&mut log, &[KodairaType::IStar(15), KodairaType::III], &[1, 2]));
    log.check(v15 == BTreeSet::from([2, 8]), format!("I15* finite-MW values {v15:?} = {{2, 8}}"));
    for v in v15 {
        reject_for_all_primes(&mut log, v);
    }
    log.line("I15*, Mordell-Weil rank 1, odd characteristic:");
    congruence(&mut log, Scenario::I15StarFarOddChar);

    let max = char2_star_bound(&mut log);
    log.check(max.is_some_and(|n| n < 14), "characteristic 2: no I_n* with n >= 14");
    log.finish("thm15star")
}

/// The maximal I_n* in characteristic 2 is I13*, and it exists.
pub fn verify_prop14star() -> Verdict {
    let mut log = Log::default();
    let max = char2_star_bound(&mut log);
    log.check(max == Some(13), format!("maximal char-2 I_n* bound: I{}*", max.unwrap_or(0)));
    let f = gf(2, 1);
    let m = case_iii_star_model(&f, Fe::ONE, Fe::ONE, [Fe::ONE, Fe::ZERO, Fe::ZERO]);
    let report = classify_all(&m, 8).expect("classifies");
    let k3 = m.k3_from_report(&report).map(|v| v.k3).unwrap_or(false);
    let at0 = report.fibres.iter().find(|r| r.place == Place::zero(&f));
    log.line(format!("witness e = c = 1, a6~ = 1:\n{}", report.text("t").trim_end()));
    log.check(
        k3 && at0.is_some_and(|r| r.kodaira == KodairaType::IStar(13) && r.v_delta == 21 && r.wild_defect == 2),
        "witness is K3 with I13* at 0 (vΔ 21, m 18, δ 2)",
    );
    log.finish("prop14star")
}

/// Both congruence proofs and the residue lemma.
pub fn verify_congruences() -> Verdict {
    let mut log = Log::default();
    let res = odd_prime_power_residues();
    log.check(
        res.iter().all(|&(_, _, r)| r == 1),
        format!("p^(2s) ≡ 1 mod 8 for all {} classes (p mod 8, s)", res.len()),
    );
    let odd_i: Vec<i64> = (1..20).step_by(2).map(|i: i64| (i * i - 4 * i).rem_euclid(8)).collect();
    log.check(odd_i.iter().all(|&r| r == 5), "i^2 - 4i ≡ 5 mod 8 for every odd i, i.e. -3 ≡ 1 mod 8 would be needed");
    log.check((16 - 4 - 15i64).rem_euclid(8) == 5, "I15* far: 16 + 8(P.O) - 4 - 15 ≡ 5 mod 8");
    congruence(&mut log, Scenario::I20OddChar);
    congruence(&mut log, Scenario::I15StarFarOddChar);
    log.finish("congruences")
}

/// Reduction mod 2 of an externally supplied model with an I19 fibre.
pub fn verify_corollary(model: Option<&ModelFile>) -> Verdict {
    let mut log = Log::default();
    let Some(mf) = model else {
        log.line("no model file supplied: the characteristic-0 equation is external and not fabricated");
        return Verdict {
            name: "corollary".into(),
            status: Status::Skipped,
            transcript: log.lines,
        };
    };
    let reduced = match &mf.model {
        AnyModel::Integer(im) => match im.reduce(2) {
            Ok(m) => m,
            Err(e) => {
                log.check(false, format!("reduction mod 2 failed: {e}"));
                return log.finish("corollary");
            }
        },
        AnyModel::Finite(m) if m.characteristic() == 2 => m.clone(),
        AnyModel::Finite(m) => {
            log.check(false, format!("model has characteristic {}, expected 0 or 2", m.characteristic()));
            return log.finish("corollary");
        }
    };
    log.line(format!("reduction mod 2:\n{}", reduced.format(&mf.var).trim_end()));
    log.line("an I19 degeneration would be I_n* with n > 14 (chain of 18 (-2)-curves), excluded by thm15star");
    if reduced.is_singular() {
        log.check(true, "reduction is singular (Δ ≡ 0)");
        return log.finish("corollary");
    }
    match reduced.is_k3(8) {
        Ok(v) if !v.k3 => {
            log.check(true, format!("reduction is not an elliptic K3: {}", v.reason));
        }
        Err(e) => {
            log.check(true, format!("reduction is not an elliptic K3: {e}"));
        }
        Ok(_) => {
            let r = classify_all(&reduced, 8).expect("classifies");
            log.line(r.text(&mf.var).trim_end().to_string());
            let big = r.fibres.iter().any(|f| f.components >= 19);
            log.check(!big, "no fibre with >= 19 components after reduction");
        }
    }
    log.finish("corollary")
}

/// Verification names accepted by [`run`].
pub const NAMES: [&str; 6] = ["thm20", "prop19", "thm15star", "prop14star", "congruences", "corollary"];

pub fn run(name: &str, model: Option<&ModelFile>) -> Option<Verdict> {
    Some(match name {
        "thm20" => verify_thm20(),
        "thm20_odd" => verify_thm20_odd(),
        "thm20_char2" => verify_thm20_char2(),
        "prop19" => verify_prop19(),
        "thm15star" => verify_thm15star(),
        "prop14star" => verify_prop14star(),
        "congruences" => verify_congruences(),
        "corollary" => verify_corollary(model),
        _ => return None,
    })
}
