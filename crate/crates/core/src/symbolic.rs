//! Polynomials over GF(2) in named parameters and t, the normalized
//! characteristic-2 families, coefficient constraints from prescribed
//! discriminant valuations, and a small branching elimination solver.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::field::{Fe, Field};
use crate::poly::UniPoly;
use crate::weierstrass::{char2_discriminant, DELTA_BOUND};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolicError {
    #[error("valuation bound {0} exceeds 24")]
    ValuationTooLarge(u32),
    #[error("no value for symbol {0}")]
    UncoveredSymbol(String),
    #[error("specialization needs characteristic 2, got {0}")]
    NotCharacteristicTwo(u32),
    #[error("symbol tables differ")]
    MismatchedSymbols,
    #[error("unknown symbol {0}")]
    UnknownSymbol(String),
}

/// Names of the variables; index 0 is always `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symbols {
    names: Vec<String>,
}

impl Symbols {
    pub fn new<S: Into<String>>(params: impl IntoIterator<Item = S>) -> Arc<Symbols> {
        let mut names = vec!["t".to_string()];
        names.extend(params.into_iter().map(Into::into));
        Arc::new(Symbols { names })
    }

    /// A table with `more` appended; monomials of `self` stay valid.
    pub fn extended<S: Into<String>>(&self, more: impl IntoIterator<Item = S>) -> Arc<Symbols> {
        let mut names = self.names.clone();
        names.extend(more.into_iter().map(Into::into));
        Arc::new(Symbols { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Parameter indices (everything except t).
    pub fn params(&self) -> std::ops::Range<usize> {
        1..self.names.len()
    }
}

type Mono = Vec<u8>;

fn mono_mul(a: &[u8], b: &[u8]) -> Mono {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.checked_add(*y).expect("exponent overflow"))
        .collect()
}

/// Element of GF(2)[t, params]: a set of monomials.
#[derive(Clone, PartialEq, Eq)]
pub struct SymPoly {
    syms: Arc<Symbols>,
    terms: BTreeSet<Mono>,
}

impl fmt::Debug for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest total degree first reads closer to hand-written formulas.
        let mut parts: Vec<(u32, String)> = self
            .terms
            .iter()
            .map(|m| {
                let deg = m.iter().map(|&e| e as u32).sum();
                let mut s = Vec::new();
                for (i, &e) in m.iter().enumerate().skip(1).chain(m.iter().enumerate().take(1)) {
                    match e {
                        0 => {}
                        1 => s.push(self.syms.name(i).to_string()),
                        _ => s.push(format!("{}^{e}", self.syms.name(i))),
                    }
                }
                (deg, if s.is_empty() { "1".into() } else { s.join("*") })
            })
            .collect();
        parts.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
        let v: Vec<String> = parts.into_iter().map(|p| p.1).collect();
        write!(f, "{}", v.join(" + "))
    }
}

impl SymPoly {
    pub fn zero(syms: &Arc<Symbols>) -> SymPoly {
        SymPoly {
            syms: syms.clone(),
            terms: BTreeSet::new(),
        }
    }

    pub fn one(syms: &Arc<Symbols>) -> SymPoly {
        SymPoly::monomial(syms, vec![0; syms.len()])
    }

    fn monomial(syms: &Arc<Symbols>, m: Mono) -> SymPoly {
        let mut terms = BTreeSet::new();
        terms.insert(m);
        SymPoly {
            syms: syms.clone(),
            terms,
        }
    }

    /// The variable with index i (0 is t).
    pub fn var(syms: &Arc<Symbols>, i: usize) -> SymPoly {
        let mut m = vec![0; syms.len()];
        m[i] = 1;
        SymPoly::monomial(syms, m)
    }

    pub fn named(syms: &Arc<Symbols>, name: &str) -> SymPoly {
        let i = syms.index(name).unwrap_or_else(|| panic!("unknown symbol {name}"));
        SymPoly::var(syms, i)
    }

    pub fn t(syms: &Arc<Symbols>) -> SymPoly {
        SymPoly::var(syms, 0)
    }

    pub fn t_pow(syms: &Arc<Symbols>, n: usize) -> SymPoly {
        let mut m = vec![0; syms.len()];
        m[0] = u8::try_from(n).expect("t exponent fits");
        SymPoly::monomial(syms, m)
    }

    /// Σ_j coeffs[j] t^j.
    pub fn in_t(syms: &Arc<Symbols>, coeffs: &[SymPoly]) -> SymPoly {
        coeffs
            .iter()
            .enumerate()
            .fold(SymPoly::zero(syms), |acc, (j, c)| acc.add(&c.mul(&SymPoly::t_pow(syms, j))))
    }

    pub fn symbols(&self) -> &Arc<Symbols> {
        &self.syms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().next().is_some_and(|m| m.iter().all(|&e| e == 0))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &[u8]> {
        self.terms.iter().map(|m| m.as_slice())
    }

    pub fn add(&self, other: &SymPoly) -> SymPoly {
        debug_assert!(Arc::ptr_eq(&self.syms, &other.syms) || self.syms == other.syms);
        SymPoly {
            syms: self.syms.clone(),
            terms: self.terms.symmetric_difference(&other.terms).cloned().collect(),
        }
    }

    pub fn mul(&self, other: &SymPoly) -> SymPoly {
        let mut terms = BTreeSet::new();
        for a in &self.terms {
            for b in &other.terms {
                let m = mono_mul(a, b);
                if !terms.remove(&m) {
                    terms.insert(m);
                }
            }
        }
        SymPoly {
            syms: self.syms.clone(),
            terms,
        }
    }

    /// The largest monomial dividing every term, and the cofactor.
    pub fn split_monomial_factor(&self) -> (Vec<u8>, SymPoly) {
        let mut g: Option<Vec<u8>> = None;
        for m in &self.terms {
            g = Some(match g {
                None => m.clone(),
                Some(g) => g.iter().zip(m).map(|(a, b)| *a.min(b)).collect(),
            });
        }
        let g = g.unwrap_or_else(|| vec![0; self.syms.len()]);
        let q = SymPoly {
            syms: self.syms.clone(),
            terms: self.terms.iter().map(|m| m.iter().zip(&g).map(|(a, b)| a - b).collect()).collect(),
        };
        (g, q)
    }

    /// Frobenius: doubles every exponent.
    pub fn square(&self) -> SymPoly {
        SymPoly {
            syms: self.syms.clone(),
            terms: self
                .terms
                .iter()
                .map(|m| m.iter().map(|&e| e.checked_mul(2).expect("exponent overflow")).collect())
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> SymPoly {
        let mut base = self.clone();
        let mut acc = SymPoly::one(&self.syms);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    /// Move to an extended symbol table.
    pub fn extend(&self, syms: &Arc<Symbols>) -> Result<SymPoly, SymbolicError> {
        if syms.names.len() < self.syms.names.len() || syms.names[..self.syms.len()] != self.syms.names[..] {
            return Err(SymbolicError::MismatchedSymbols);
        }
        let pad = syms.len() - self.syms.len();
        Ok(SymPoly {
            syms: syms.clone(),
            terms: self
                .terms
                .iter()
                .map(|m| {
                    let mut m = m.clone();
                    m.extend(std::iter::repeat_n(0, pad));
                    m
                })
                .collect(),
        })
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.iter().map(|m| m[i] as u32).max().unwrap_or(0)
    }

    pub fn contains(&self, i: usize) -> bool {
        self.terms.iter().any(|m| m[i] > 0)
    }

    /// Parameters occurring in self.
    pub fn support(&self) -> BTreeSet<usize> {
        let mut s = BTreeSet::new();
        for m in &self.terms {
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    s.insert(i);
                }
            }
        }
        s
    }

    /// Coefficient of t^j, a polynomial in the parameters.
    pub fn coeff_t(&self, j: usize) -> SymPoly {
        SymPoly {
            syms: self.syms.clone(),
            terms: self
                .terms
                .iter()
                .filter(|m| m[0] as usize == j)
                .map(|m| {
                    let mut m = m.clone();
                    m[0] = 0;
                    m
                })
                .collect(),
        }
    }

    pub fn degree_t(&self) -> Option<usize> {
        self.terms.iter().map(|m| m[0] as usize).max()
    }

    /// Coefficients in t, indices 0..=deg.
    pub fn t_coeffs(&self) -> Vec<SymPoly> {
        match self.degree_t() {
            None => Vec::new(),
            Some(d) => (0..=d).map(|j| self.coeff_t(j)).collect(),
        }
    }

    /// Substitute variable i := value.
    pub fn substitute(&self, i: usize, value: &SymPoly) -> SymPoly {
        if !self.contains(i) {
            return self.clone();
        }
        let mut powers: BTreeMap<u8, SymPoly> = BTreeMap::new();
        let mut out = SymPoly::zero(&self.syms);
        // Group by exponent of variable i.
        let mut groups: BTreeMap<u8, BTreeSet<Mono>> = BTreeMap::new();
        for m in &self.terms {
            let mut rest = m.clone();
            let e = rest[i];
            rest[i] = 0;
            groups.entry(e).or_default().insert(rest);
        }
        for (e, rest) in groups {
            let rest = SymPoly {
                syms: self.syms.clone(),
                terms: rest,
            };
            if e == 0 {
                out = out.add(&rest);
                continue;
            }
            let p = powers.entry(e).or_insert_with(|| value.pow(e as u32)).clone();
            out = out.add(&rest.mul(&p));
        }
        out
    }

    /// t -> t + 1.
    pub fn translate_t(&self) -> SymPoly {
        let t1 = SymPoly::t(&self.syms).add(&SymPoly::one(&self.syms));
        self.substitute(0, &t1)
    }

    /// If every exponent is divisible by 2^j, the 2^j-th root.
    pub fn root_2j(&self, j: u32) -> Option<SymPoly> {
        let q = 1u8 << j;
        if self.terms.iter().any(|m| m.iter().any(|&e| e % q != 0)) {
            return None;
        }
        Some(SymPoly {
            syms: self.syms.clone(),
            terms: self.terms.iter().map(|m| m.iter().map(|&e| e / q).collect()).collect(),
        })
    }
}

/// Evaluate parameters in a field of characteristic 2, keeping t.
pub fn sym_specialize(f: &SymPoly, field: &Field, values: &BTreeMap<String, Fe>) -> Result<UniPoly, SymbolicError> {
    if field.characteristic() != 2 {
        return Err(SymbolicError::NotCharacteristicTwo(field.characteristic()));
    }
    let syms = f.symbols();
    let mut vals = vec![Fe::ZERO; syms.len()];
    for i in f.support() {
        if i == 0 {
            continue;
        }
        let name = syms.name(i);
        vals[i] = *values.get(name).ok_or_else(|| SymbolicError::UncoveredSymbol(name.into()))?;
    }
    let mut coeffs = vec![Fe::ZERO; f.degree_t().map_or(0, |d| d + 1)];
    for m in f.monomials() {
        let mut x = Fe::ONE;
        for (i, &e) in m.iter().enumerate().skip(1) {
            if e > 0 {
                x = field.mul(x, field.pow(vals[i], e as u64));
            }
        }
        let j = m[0] as usize;
        coeffs[j] = field.add(coeffs[j], x);
    }
    Ok(UniPoly::new(field, coeffs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    /// a1 = t^2, a2 = t a2~, a3 = a t + b, a4 = c t + d.
    CaseII,
    /// a1 = t, a3 = a t^6 + b, a4 = c t^8 + d.
    CaseIII,
    /// Every coefficient generic of degree <= 2i.
    GeneralChar2,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::CaseII => "case_ii",
            FamilyKind::CaseIII => "case_iii",
            FamilyKind::GeneralChar2 => "general_char2",
        }
    }
}

/// A symbolic Weierstrass family.
#[derive(Debug, Clone)]
pub struct Family {
    pub kind: FamilyKind,
    pub syms: Arc<Symbols>,
    pub a: [SymPoly; 5],
}

impl Family {
    pub fn new(kind: FamilyKind) -> Family {
        let generic = |prefix: &str, n: usize| (0..n).map(|j| format!("{prefix}{j}")).collect::<Vec<_>>();
        match kind {
            FamilyKind::CaseII => {
                let names: Vec<String> = ["a", "b", "c", "d"]
                    .into_iter()
                    .map(String::from)
                    .chain(generic("a2t", 4))
                    .chain(generic("a6_", 13))
                    .collect();
                let s = Symbols::new(names);
                let v = |n: &str| SymPoly::named(&s, n);
                let t = SymPoly::t(&s);
                let lin = |x: &str, y: &str| v(x).mul(&t).add(&v(y));
                let a2t = SymPoly::in_t(&s, &(0..4).map(|j| v(&format!("a2t{j}"))).collect::<Vec<_>>());
                let a6 = SymPoly::in_t(&s, &(0..13).map(|j| v(&format!("a6_{j}"))).collect::<Vec<_>>());
                let a = [SymPoly::t_pow(&s, 2), t.mul(&a2t), lin("a", "b"), lin("c", "d"), a6];
                Family { kind, syms: s, a }
            }
            FamilyKind::CaseIII => {
                let names: Vec<String> = ["a", "b", "c", "d"]
                    .into_iter()
                    .map(String::from)
                    .chain(generic("a2_", 5))
                    .chain(generic("a6_", 13))
                    .collect();
                let s = Symbols::new(names);
                let v = |n: &str| SymPoly::named(&s, n);
                let a2 = SymPoly::in_t(&s, &(0..5).map(|j| v(&format!("a2_{j}"))).collect::<Vec<_>>());
                let a6 = SymPoly::in_t(&s, &(0..13).map(|j| v(&format!("a6_{j}"))).collect::<Vec<_>>());
                let a3 = v("a").mul(&SymPoly::t_pow(&s, 6)).add(&v("b"));
                let a4 = v("c").mul(&SymPoly::t_pow(&s, 8)).add(&v("d"));
                let a = [SymPoly::t(&s), a2, a3, a4, a6];
                Family { kind, syms: s, a }
            }
            FamilyKind::GeneralChar2 => {
                let weights = crate::weierstrass::WEIGHTS;
                let names: Vec<String> = weights
                    .iter()
                    .flat_map(|&w| generic(&format!("a{w}_"), 2 * w + 1))
                    .collect();
                let s = Symbols::new(names);
                let a = weights.map(|w| {
                    SymPoly::in_t(
                        &s,
                        &(0..=2 * w).map(|j| SymPoly::named(&s, &format!("a{w}_{j}"))).collect::<Vec<_>>(),
                    )
                });
                Family { kind, syms: s, a }
            }
        }
    }

    pub fn discriminant(&self) -> SymPoly {
        let [a1, a2, a3, a4, a6] = &self.a;
        char2_discriminant(a1, a2, a3, a4, a6)
    }

    /// Free parameters of the family.
    pub fn params(&self) -> Vec<String> {
        self.syms.params().map(|i| self.syms.name(i).to_string()).collect()
    }
}

impl crate::poly::Ring for SymPoly {
    fn add(&self, other: &Self) -> Self {
        SymPoly::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        SymPoly::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        SymPoly::mul(self, other)
    }
    fn constant(&self, n: i64) -> Self {
        if n.rem_euclid(2) == 1 {
            SymPoly::one(&self.syms)
        } else {
            SymPoly::zero(&self.syms)
        }
    }
    fn is_zero(&self) -> bool {
        SymPoly::is_zero(self)
    }
    fn square(&self) -> Self {
        SymPoly::square(self)
    }
}

/// The symbolic discriminant of a family.
pub fn symbolic_discriminant(kind: FamilyKind) -> (Family, SymPoly) {
    let f = Family::new(kind);
    let d = f.discriminant();
    (f, d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymPlace {
    Zero,
    One,
    Infinity,
}

impl fmt::Display for SymPlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymPlace::Zero => write!(f, "0"),
            SymPlace::One => write!(f, "1"),
            SymPlace::Infinity => write!(f, "inf"),
        }
    }
}

/// An equation `poly = 0` with a label naming its origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub label: String,
    pub poly: SymPoly,
}

#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    pub syms: Arc<Symbols>,
    pub equations: Vec<Equation>,
    pub assignments: Vec<(usize, SymPoly)>,
    pub nonvanishing: BTreeSet<usize>,
}

impl ConstraintSystem {
    pub fn new(syms: &Arc<Symbols>, equations: Vec<Equation>) -> ConstraintSystem {
        ConstraintSystem {
            syms: syms.clone(),
            equations,
            assignments: Vec::new(),
            nonvanishing: BTreeSet::new(),
        }
    }

    pub fn labels(&self) -> Vec<String> {
        self.equations
            .iter()
            .map(|e| format!("{}: {} = 0", e.label, e.poly))
            .collect()
    }
}

/// Equations d_j = 0 forcing v_place(Δ) >= n (ambient degree 24 at infinity).
pub fn impose_valuation(delta: &SymPoly, place: SymPlace, n: u32) -> Result<ConstraintSystem, SymbolicError> {
    if n as usize > DELTA_BOUND {
        return Err(SymbolicError::ValuationTooLarge(n));
    }
    let syms = delta.symbols().clone();
    let (poly, idx): (SymPoly, Vec<usize>) = match place {
        SymPlace::Zero => (delta.clone(), (0..n as usize).collect()),
        SymPlace::One => (delta.translate_t(), (0..n as usize).collect()),
        SymPlace::Infinity => {
            let top = delta.degree_t().unwrap_or(0).max(DELTA_BOUND);
            (delta.clone(), (DELTA_BOUND + 1 - n as usize..=top).collect())
        }
    };
    let prefix = if place == SymPlace::One { "d'" } else { "d" };
    let equations = idx
        .into_iter()
        .map(|j| Equation {
            label: format!("{prefix}{j}"),
            poly: poly.coeff_t(j),
        })
        .filter(|e| !e.poly.is_zero())
        .collect();
    Ok(ConstraintSystem::new(&syms, equations))
}

/// Write Δ = (t+1)^n g with g = g_0 + ... + g_{24-n} t^{24-n} symbolic and
/// return the coefficient equations; the g_j are new symbols.
pub fn factor_form(delta: &SymPoly, n: u32) -> Result<ConstraintSystem, SymbolicError> {
    if n as usize > DELTA_BOUND {
        return Err(SymbolicError::ValuationTooLarge(n));
    }
    let k = DELTA_BOUND - n as usize;
    let syms = delta.symbols().extended((0..=k).map(|j| format!("g{j}")));
    let d = delta.extend(&syms)?;
    let g = SymPoly::in_t(
        &syms,
        &(0..=k).map(|j| SymPoly::named(&syms, &format!("g{j}"))).collect::<Vec<_>>(),
    );
    let t1 = SymPoly::t(&syms).add(&SymPoly::one(&syms));
    let diff = d.add(&t1.pow(n).mul(&g));
    let equations = (0..=diff.degree_t().unwrap_or(0).max(DELTA_BOUND))
        .map(|j| Equation {
            label: format!("[t^{j}]"),
            poly: diff.coeff_t(j),
        })
        .filter(|e| !e.poly.is_zero())
        .collect();
    Ok(ConstraintSystem::new(&syms, equations))
}

/// Default branch budget of [`eliminate`].
pub const DEFAULT_BUDGET: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Leaf {
    /// Every equation eliminated; `survivors` are the untouched parameters.
    Solved {
        assignments: Vec<(String, SymPoly)>,
        survivors: Vec<String>,
    },
    /// The branch is inconsistent with its nonvanishing assumptions or 1 = 0.
    Contradiction { reason: String },
    /// No rule applies; the remaining equations.
    Stuck { equations: Vec<String> },
    /// Branch budget exhausted before this branch was explored.
    Unexplored,
}

#[derive(Debug, Clone)]
pub struct ElimVerdict {
    pub transcript: Vec<String>,
    pub leaves: Vec<(Vec<String>, Leaf, ConstraintSystem)>,
    pub branches: usize,
    pub budget_exhausted: bool,
}

impl ElimVerdict {
    /// All consistent leaves solved, with their (sorted, deduplicated) survivors.
    pub fn all_parameters_killed(&self) -> Option<Vec<String>> {
        if self.budget_exhausted {
            return None;
        }
        let mut surv = BTreeSet::new();
        let mut any = false;
        for (_, leaf, _) in &self.leaves {
            match leaf {
                Leaf::Solved { survivors, .. } => {
                    any = true;
                    surv.extend(survivors.iter().cloned());
                }
                Leaf::Contradiction { .. } => {}
                Leaf::Stuck { .. } | Leaf::Unexplored => return None,
            }
        }
        any.then(|| surv.into_iter().collect())
    }

    /// Consistent solved leaves.
    pub fn solved(&self) -> impl Iterator<Item = &ConstraintSystem> {
        self.leaves
            .iter()
            .filter(|(_, l, _)| matches!(l, Leaf::Solved { .. }))
            .map(|(_, _, s)| s)
    }

    pub fn text(&self) -> String {
        let mut s = self.transcript.join("\n");
        s.push('\n');
        s
    }
}

/// Substitute every assignment into `f`.
pub fn apply_assignments(f: &SymPoly, assignments: &[(usize, SymPoly)]) -> SymPoly {
    assignments.iter().fold(f.clone(), |acc, (i, v)| acc.substitute(*i, v))
}

fn name_of(syms: &Symbols, i: usize) -> String {
    syms.name(i).to_string()
}

enum Step {
    Assign { rule: &'static str, eq: usize, var: usize, value: SymPoly },
    /// Branch on the vanishing of each variable of a monomial factor; with
    /// a cofactor, one more branch keeps them nonzero and divides them out.
    Branch {
        rule: &'static str,
        eq: usize,
        vars: Vec<usize>,
        cofactor: Option<SymPoly>,
    },
}

/// Pick the next rule application, rules in priority order R1..R5.
fn next_step(sys: &ConstraintSystem) -> Option<Step> {
    let params: Vec<usize> = sys.syms.params().collect();
    // R1: a single power of one parameter.
    for (k, e) in sys.equations.iter().enumerate() {
        if e.poly.len() == 1 {
            let sup = e.poly.support();
            if sup.len() == 1 {
                let var = *sup.iter().next().expect("one");
                return Some(Step::Assign {
                    rule: "R1",
                    eq: k,
                    var,
                    value: SymPoly::zero(&sys.syms),
                });
            }
        }
    }
    // R2: v + q with v absent from q.
    for (k, e) in sys.equations.iter().enumerate() {
        for &v in &params {
            let mut unit = vec![0u8; sys.syms.len()];
            unit[v] = 1;
            if !e.poly.terms.contains(&unit) {
                continue;
            }
            let rest = e.poly.add(&SymPoly::var(&sys.syms, v));
            if !rest.contains(v) {
                return Some(Step::Assign {
                    rule: "R2",
                    eq: k,
                    var: v,
                    value: rest,
                });
            }
        }
    }
    // R3: v^(2^j) + q with q a 2^j-th power free of v.
    for (k, e) in sys.equations.iter().enumerate() {
        for &v in &params {
            for j in 1..8u32 {
                let mut pure = vec![0u8; sys.syms.len()];
                pure[v] = 1 << j;
                if !e.poly.terms.contains(&pure) {
                    continue;
                }
                let mut vp = SymPoly::zero(&sys.syms);
                vp.terms.insert(pure);
                let rest = e.poly.add(&vp);
                if rest.contains(v) {
                    continue;
                }
                if let Some(r) = rest.root_2j(j) {
                    return Some(Step::Assign {
                        rule: "R3",
                        eq: k,
                        var: v,
                        value: r,
                    });
                }
            }
        }
    }
    // R4: a monomial in several parameters.
    for (k, e) in sys.equations.iter().enumerate() {
        if e.poly.len() == 1 {
            let vars: Vec<usize> = e.poly.support().into_iter().collect();
            if vars.len() > 1 {
                return Some(Step::Branch {
                    rule: "R4",
                    eq: k,
                    vars,
                    cofactor: None,
                });
            }
        }
    }
    // R5: a nonconstant monomial factor common to every term.
    for (k, e) in sys.equations.iter().enumerate() {
        let (factor, cofactor) = e.poly.split_monomial_factor();
        let vars: Vec<usize> = factor.iter().enumerate().filter(|(_, &x)| x > 0).map(|(i, _)| i).collect();
        if !vars.is_empty() && e.poly.len() > 1 {
            return Some(Step::Branch {
                rule: "R5",
                eq: k,
                vars,
                cofactor: Some(cofactor),
            });
        }
    }
    None
}

/// Reduce equations modulo the assignments, dropping zeros. Returns a
/// contradiction reason if some equation became 1 = 0.
fn normalize(sys: &mut ConstraintSystem) -> Option<String> {
    let eqs = std::mem::take(&mut sys.equations);
    for e in eqs {
        let p = apply_assignments(&e.poly, &sys.assignments);
        if p.is_one() {
            return Some(format!("{} reduces to 1 = 0", e.label));
        }
        if !p.is_zero() {
            sys.equations.push(Equation { label: e.label, poly: p });
        }
    }
    // Keep a canonical order: fewest terms first.
    sys.equations.sort_by(|a, b| a.poly.len().cmp(&b.poly.len()).then_with(|| a.label.cmp(&b.label)));
    None
}

fn assign(sys: &mut ConstraintSystem, var: usize, value: SymPoly) {
    for (_, v) in sys.assignments.iter_mut() {
        *v = v.substitute(var, &value);
    }
    sys.assignments.push((var, value));
}

/// Run R1-R5 to a fixpoint on every branch, within `budget` branches.
pub fn eliminate(sys: &ConstraintSystem, budget: usize) -> ElimVerdict {
    let mut transcript = Vec::new();
    let mut leaves = Vec::new();
    let mut branches = 1usize;
    let mut exhausted = false;
    let mut stack: Vec<(Vec<String>, ConstraintSystem)> = vec![(Vec::new(), sys.clone())];
    while let Some((path, mut cur)) = stack.pop() {
        let tag = if path.is_empty() { "root".to_string() } else { path.join(",") };
        let leaf = loop {
            if let Some(reason) = normalize(&mut cur) {
                break Leaf::Contradiction { reason };
            }
            if cur.equations.is_empty() {
                let assigned: BTreeSet<usize> = cur.assignments.iter().map(|(i, _)| *i).collect();
                let survivors = cur
                    .syms
                    .params()
                    .filter(|i| !assigned.contains(i))
                    .map(|i| name_of(&cur.syms, i))
                    .collect();
                let assignments = cur
                    .assignments
                    .iter()
                    .map(|(i, v)| (name_of(&cur.syms, *i), v.clone()))
                    .collect();
                break Leaf::Solved { assignments, survivors };
            }
            match next_step(&cur) {
                None => {
                    break Leaf::Stuck {
                        equations: cur.labels(),
                    }
                }
                Some(Step::Assign { rule, eq, var, value }) => {
                    let e = &cur.equations[eq];
                    let vname = name_of(&cur.syms, var);
                    transcript.push(format!("[{tag}] {rule} | {}: {} = 0 | {vname} := {value}", e.label, e.poly));
                    if cur.nonvanishing.contains(&var) && value.is_zero() {
                        break Leaf::Contradiction {
                            reason: format!("{vname} = 0 contradicts {vname} != 0"),
                        };
                    }
                    assign(&mut cur, var, value);
                }
                Some(Step::Branch { rule, eq, vars, cofactor }) => {
                    let e = cur.equations[eq].clone();
                    let open: Vec<usize> = vars.iter().copied().filter(|v| !cur.nonvanishing.contains(v)).collect();
                    let names: Vec<String> = open.iter().map(|&v| name_of(&cur.syms, v)).collect();
                    let mut options: Vec<String> = names.iter().map(|n| format!("{n} = 0")).collect();
                    if let Some(q) = &cofactor {
                        options.push(format!("{q} = 0"));
                    }
                    if options.is_empty() {
                        transcript.push(format!("[{tag}] {rule} | {}: {} = 0 | factors all nonzero", e.label, e.poly));
                        break Leaf::Contradiction {
                            reason: format!("{} is a product of nonzero parameters", e.label),
                        };
                    }
                    transcript.push(format!("[{tag}] {rule} | {}: {} = 0 | branch on {}", e.label, e.poly, options.join(" | ")));
                    let mut children = Vec::new();
                    for (k, &v) in open.iter().enumerate() {
                        let mut child = cur.clone();
                        child.nonvanishing.extend(open[..k].iter().copied());
                        let mut p = path.clone();
                        p.push(format!("{}=0", names[k]));
                        let zero = SymPoly::zero(&child.syms);
                        assign(&mut child, v, zero);
                        children.push((p, child));
                    }
                    if let Some(q) = cofactor {
                        let mut child = cur.clone();
                        child.nonvanishing.extend(open.iter().copied());
                        child.equations[eq].poly = q;
                        let mut p = path.clone();
                        p.push(if names.is_empty() { "divide".to_string() } else { format!("{}!=0", names.join("")) });
                        children.push((p, child));
                    }
                    branches += children.len().saturating_sub(1);
                    if branches > budget {
                        exhausted = true;
                        for (p, c) in children {
                            leaves.push((p, Leaf::Unexplored, c));
                        }
                    } else {
                        for c in children.into_iter().rev() {
                            stack.push(c);
                        }
                    }
                    break Leaf::Unexplored;
                }
            }
        };
        match leaf {
            Leaf::Unexplored => {}
            other => {
                let line = match &other {
                    Leaf::Solved { survivors, .. } => format!("[{tag}] solved; survivors: {}", survivors.join(", ")),
                    Leaf::Contradiction { reason } => format!("[{tag}] contradiction: {reason}"),
                    Leaf::Stuck { equations } => format!("[{tag}] stuck on {} equations", equations.len()),
                    Leaf::Unexplored => unreachable!(),
                };
                transcript.push(line);
                leaves.push((path, other, cur));
            }
        }
    }
    if exhausted {
        transcript.push(format!("branch budget {budget} exhausted"));
    }
    ElimVerdict {
        transcript,
        leaves,
        branches,
        budget_exhausted: exhausted,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_ii_coefficients() {
        let (f, d) = symbolic_discriminant(FamilyKind::CaseII);
        let v = |n: &str| SymPoly::named(&f.syms, n);
        assert_eq!(d.coeff_t(0), v("b").pow(4));
        assert_eq!(d.coeff_t(4), v("a").pow(4));
        assert!(d.coeff_t(5).is_zero());
        assert_eq!(d.coeff_t(6), v("b").pow(3));
        assert_eq!(d.coeff_t(7), v("a").mul(&v("b").square()));
        assert_eq!(d.coeff_t(8), v("d").square().add(&v("a").square().mul(&v("b"))));
        assert_eq!(d.coeff_t(9), v("a").pow(3).add(&v("b").square().mul(&v("a2t0"))));
    }

    #[test]
    fn frobenius_and_substitution() {
        let s = Symbols::new(["x", "y"]);
        let x = SymPoly::named(&s, "x");
        let y = SymPoly::named(&s, "y");
        let f = x.add(&y.mul(&SymPoly::t(&s)));
        assert_eq!(f.add(&y).square(), f.square().add(&y.square()));
        assert_eq!(f.mul(&f), f.square());
        assert_eq!(f.substitute(2, &x), x.add(&x.mul(&SymPoly::t(&s))));
        assert_eq!(SymPoly::t(&s).pow(20).translate_t().coeff_t(16), SymPoly::one(&s));
    }

    #[test]
    fn specialization() {
        let s = Symbols::new(["a", "b", "d"]);
        let v = |n: &str| SymPoly::named(&s, n);
        let f = v("d").square().add(&v("a").square().mul(&v("b")));
        let g2 = Field::prime(2).unwrap();
        let vals: BTreeMap<String, Fe> = ["a", "b", "d"].iter().map(|n| (n.to_string(), Fe::ONE)).collect();
        assert!(sym_specialize(&f, &g2, &vals).unwrap().is_zero());
        let mut partial = vals.clone();
        partial.remove("d");
        assert_eq!(
            sym_specialize(&f, &g2, &partial),
            Err(SymbolicError::UncoveredSymbol("d".into()))
        );
        assert_eq!(sym_specialize(&v("b").pow(3), &g2, &vals).unwrap(), UniPoly::one(&g2));
    }

    #[test]
    fn valuation_systems() {
        let (f, d) = symbolic_discriminant(FamilyKind::CaseII);
        let sys = impose_valuation(&d, SymPlace::Zero, 5).unwrap();
        let v = |n: &str| SymPoly::named(&f.syms, n);
        let polys: Vec<SymPoly> = sys.equations.iter().map(|e| e.poly.clone()).collect();
        assert_eq!(polys, vec![v("b").pow(4), v("a").pow(4)]);
        let (_, d3) = symbolic_discriminant(FamilyKind::CaseIII);
        let sys = impose_valuation(&d3, SymPlace::Zero, 1).unwrap();
        assert_eq!(sys.equations.len(), 1);
        assert_eq!(sys.equations[0].poly.to_string(), "b^4");
        assert!(impose_valuation(&d, SymPlace::Zero, 25).is_err());
    }

    #[test]
    fn factor_form_kills_g1_g2() {
        let (_, d) = symbolic_discriminant(FamilyKind::CaseIII);
        let sys = factor_form(&d, 20).unwrap();
        let get = |l: &str| sys.equations.iter().find(|e| e.label == l).map(|e| e.poly.to_string());
        assert_eq!(get("[t^1]").as_deref(), Some("g1"));
        assert_eq!(get("[t^2]").as_deref(), Some("g2"));
    }

    #[test]
    fn small_elimination() {
        let s = Symbols::new(["x", "y", "z"]);
        let v = |n: &str| SymPoly::named(&s, n);
        let sys = ConstraintSystem::new(
            &s,
            vec![
                Equation { label: "e1".into(), poly: v("x").pow(3) },
                Equation { label: "e2".into(), poly: v("y").add(&v("x").mul(&v("z"))) },
                Equation { label: "e3".into(), poly: v("z").square().add(&v("y").square()).add(&v("x")) },
            ],
        );
        let r = eliminate(&sys, DEFAULT_BUDGET);
        assert_eq!(r.all_parameters_killed(), Some(vec![]), "{}", r.text());
        assert!(r.transcript[0].contains("R1"));
    }
}
