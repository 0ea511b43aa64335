//! Length functions on the abstract Prüfer model in canonical four-part
//! form: evaluation on cyclic modules `D/I`, localization, the `♯`
//! decomposition, canonicalization from an oracle, branch split and merge,
//! and transport along spectrum isomorphisms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use thiserror::Error;

use crate::gamma::{GammaValue, Rational};
use crate::ideals::{localize, probe_primary, Cut, IdealDescriptor, LocalIdeal};
use crate::spectrum::{PieceKind, PrimeId, SpectrumTree};

/// `Σ_{P∈t} t_P + Σ_{P∈i} i_P + Σ_{P∈r} α_P·rk_P + Σ_{P∈v} L_{λ_P·v_P}`.
///
/// At the root, `t` is `t_(0)` (infinite exactly on non-torsion modules) and
/// `r` is `α·rank`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct CanonicalLengthFn {
    pub sigma_t: BTreeSet<PrimeId>,
    pub sigma_i: BTreeSet<PrimeId>,
    pub sigma_r: BTreeMap<PrimeId, Rational>,
    pub sigma_v: BTreeMap<PrimeId, Rational>,
}

impl CanonicalLengthFn {
    pub fn zero() -> Self {
        CanonicalLengthFn::default()
    }

    pub fn torsion(primes: impl IntoIterator<Item = PrimeId>) -> Self {
        CanonicalLengthFn { sigma_t: primes.into_iter().collect(), ..Default::default() }
    }

    /// Every prime that occurs in one of the four parts.
    pub fn support(&self) -> BTreeSet<PrimeId> {
        self.sigma_t
            .iter()
            .chain(&self.sigma_i)
            .chain(self.sigma_r.keys())
            .chain(self.sigma_v.keys())
            .copied()
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.support().is_empty()
    }

    /// Keeps only the primes satisfying `keep`.
    pub fn restrict(&self, keep: impl Fn(PrimeId) -> bool) -> Self {
        CanonicalLengthFn {
            sigma_t: self.sigma_t.iter().copied().filter(|p| keep(*p)).collect(),
            sigma_i: self.sigma_i.iter().copied().filter(|p| keep(*p)).collect(),
            sigma_r: self.sigma_r.iter().filter(|(p, _)| keep(**p)).map(|(p, a)| (*p, a.clone())).collect(),
            sigma_v: self.sigma_v.iter().filter(|(p, _)| keep(**p)).map(|(p, a)| (*p, a.clone())).collect(),
        }
    }

    pub fn display(&self, tree: &SpectrumTree) -> String {
        let names = |s: &mut dyn Iterator<Item = PrimeId>| -> String {
            s.map(|p| tree.name(p).to_string()).collect::<Vec<_>>().join(", ")
        };
        let coeffs = |m: &BTreeMap<PrimeId, Rational>| -> String {
            m.iter()
                .map(|(p, a)| format!("{}: {}", tree.name(*p), crate::gamma::format_rational(a)))
                .collect::<Vec<_>>()
                .join(", ")
        };
        format!(
            "t [{}] i [{}] r [{}] v [{}]",
            names(&mut self.sigma_t.iter().copied()),
            names(&mut self.sigma_i.iter().copied()),
            coeffs(&self.sigma_r),
            coeffs(&self.sigma_v)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Part {
    T,
    I,
    R,
    V,
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Part::T => "sigma_t",
            Part::I => "sigma_i",
            Part::R => "sigma_r",
            Part::V => "sigma_v",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CanonicalViolation {
    UnknownPrime(usize),
    Overlap { prime: PrimeId, parts: (Part, Part) },
    /// A prime below a member is missing from `sigma_t`.
    NotLayered { member: PrimeId, below: PrimeId },
    NotIdempotent { prime: PrimeId, part: Part },
    NotBranched { prime: PrimeId },
    NonPositive { prime: PrimeId, part: Part },
    /// An unbranched prime with every smaller prime in `sigma_t` must itself
    /// lie in `sigma_t`, `sigma_i` or `sigma_r`.
    UnbranchedNotNormalized { prime: PrimeId },
    /// `i_(0)` is the zero function, so the root never belongs to `sigma_i`.
    RootInSigmaI,
}

impl CanonicalViolation {
    pub fn describe(&self, tree: &SpectrumTree) -> String {
        let n = |p: &PrimeId| {
            if tree.contains(*p) {
                tree.name(*p).to_string()
            } else {
                format!("#{}", p.0)
            }
        };
        match self {
            CanonicalViolation::UnknownPrime(k) => format!("unknown prime #{k}"),
            CanonicalViolation::Overlap { prime, parts } => {
                format!("{} occurs in both {} and {}", n(prime), parts.0, parts.1)
            }
            CanonicalViolation::NotLayered { member, below } => {
                format!("{} lies below member {} but is not in sigma_t", n(below), n(member))
            }
            CanonicalViolation::NotIdempotent { prime, part } => {
                format!("{} in {part} is not idempotent", n(prime))
            }
            CanonicalViolation::NotBranched { prime } => format!("{} in sigma_v is not branched", n(prime)),
            CanonicalViolation::NonPositive { prime, part } => {
                format!("coefficient of {} in {part} is not positive", n(prime))
            }
            CanonicalViolation::UnbranchedNotNormalized { prime } => {
                format!("unbranched {} sits on sigma_t but is not in sigma_t, sigma_i or sigma_r", n(prime))
            }
            CanonicalViolation::RootInSigmaI => "the zero ideal cannot be in sigma_i".into(),
        }
    }
}

/// Checks disjointness, layering with core `sigma_t`, the kind conditions
/// and the unbranched normalization.
pub fn validate_canonical(tree: &SpectrumTree, l: &CanonicalLengthFn) -> Result<(), Vec<CanonicalViolation>> {
    let mut out = Vec::new();
    let parts: [(Part, Vec<PrimeId>); 4] = [
        (Part::T, l.sigma_t.iter().copied().collect()),
        (Part::I, l.sigma_i.iter().copied().collect()),
        (Part::R, l.sigma_r.keys().copied().collect()),
        (Part::V, l.sigma_v.keys().copied().collect()),
    ];
    for (_, ps) in &parts {
        for p in ps {
            if !tree.contains(*p) {
                out.push(CanonicalViolation::UnknownPrime(p.0));
            }
        }
    }
    if !out.is_empty() {
        return Err(out);
    }
    let mut owner: BTreeMap<PrimeId, Part> = BTreeMap::new();
    for (part, ps) in &parts {
        for p in ps {
            if let Some(first) = owner.insert(*p, *part) {
                out.push(CanonicalViolation::Overlap { prime: *p, parts: (first, *part) });
            }
        }
    }
    for &member in owner.keys() {
        for below in tree.strictly_below(member) {
            if !l.sigma_t.contains(&below) {
                out.push(CanonicalViolation::NotLayered { member, below });
            }
        }
    }
    for (part, ps) in &parts[1..3] {
        for &p in ps {
            if !tree.is_idempotent(p) {
                out.push(CanonicalViolation::NotIdempotent { prime: p, part: *part });
            }
        }
    }
    if l.sigma_i.contains(&PrimeId::ROOT) {
        out.push(CanonicalViolation::RootInSigmaI);
    }
    for &p in l.sigma_v.keys() {
        if !tree.is_branched(p) {
            out.push(CanonicalViolation::NotBranched { prime: p });
        }
    }
    for (part, m) in [(Part::R, &l.sigma_r), (Part::V, &l.sigma_v)] {
        for (p, a) in m {
            if *a <= Rational::zero() {
                out.push(CanonicalViolation::NonPositive { prime: *p, part });
            }
        }
    }
    for p in tree.nonroot() {
        if tree.kind(p) == Some(PieceKind::Unbranched)
            && tree.strictly_below(p).iter().all(|q| l.sigma_t.contains(q))
            && !(l.sigma_t.contains(&p) || l.sigma_i.contains(&p) || l.sigma_r.contains_key(&p))
        {
            out.push(CanonicalViolation::UnbranchedNotNormalized { prime: p });
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Fills in the layers without changing any value: every prime strictly
/// below the support joins `sigma_t` (a torsion summand absorbs any other
/// summand at the same prime), then unbranched primes sitting on `sigma_t`
/// collapse into `sigma_i`.
pub fn complete_layers(tree: &SpectrumTree, l: &CanonicalLengthFn) -> CanonicalLengthFn {
    let below: BTreeSet<PrimeId> = l
        .support()
        .into_iter()
        .filter(|p| tree.contains(*p))
        .flat_map(|p| tree.strictly_below(p))
        .collect();
    let mut out = l.restrict(|p| !below.contains(&p));
    out.sigma_t.extend(below);
    for p in tree.nonroot() {
        if tree.kind(p) == Some(PieceKind::Unbranched)
            && !out.support().contains(&p)
            && tree.strictly_below(p).iter().all(|q| out.sigma_t.contains(q))
        {
            out.sigma_i.insert(p);
        }
    }
    out
}

/// How `I D_P` sits relative to `P D_P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalShape {
    /// `I ⊄ P`.
    Unit,
    /// `I D_P = P D_P`.
    EqualsPrime,
    /// `P` is minimal over `I` and `I D_P ⊊ P D_P`.
    MinimalOver(Cut),
    /// The radical of `I D_P` is strictly below `P`.
    Below,
}

pub fn local_shape(tree: &SpectrumTree, i: &IdealDescriptor, p: PrimeId) -> LocalShape {
    let Some(kind) = tree.kind(p) else {
        // at the zero ideal only `I = 0` fails to become the unit
        return if i.is_zero() { LocalShape::EqualsPrime } else { LocalShape::Unit };
    };
    match localize(tree, i, p) {
        LocalIdeal::Unit => LocalShape::Unit,
        LocalIdeal::Zero => LocalShape::Below,
        LocalIdeal::At(q, _) if q != p => LocalShape::Below,
        LocalIdeal::At(_, c) if c == Cut::prime_itself(kind) => LocalShape::EqualsPrime,
        LocalIdeal::At(_, c) => LocalShape::MinimalOver(c),
    }
}

/// `λ·inf v(I D_P / Q D_P)` for `P` minimal over `I`.
fn valuative(lambda: &Rational, cut: &Cut) -> GammaValue {
    GammaValue::Finite(lambda * cut.gamma())
}

/// The contribution of the summand at `p` of the given part.
fn contribution(tree: &SpectrumTree, part: Part, coeff: Option<&Rational>, p: PrimeId, shape: &LocalShape) -> GammaValue {
    use LocalShape::*;
    let inf = GammaValue::Infinity;
    let zero = GammaValue::zero();
    match (part, shape) {
        (_, Unit) => zero,
        (Part::T, _) => inf,
        (Part::I, EqualsPrime) => zero,
        (Part::I, _) => inf,
        (Part::R, EqualsPrime) => GammaValue::Finite(coeff.expect("coefficient").clone()),
        (Part::R, _) => inf,
        (Part::V, EqualsPrime) => {
            let kind = tree.kind(p).unwrap_or(PieceKind::Unbranched);
            valuative(coeff.expect("coefficient"), &Cut::prime_itself(kind))
        }
        (Part::V, MinimalOver(c)) => valuative(coeff.expect("coefficient"), c),
        (Part::V, Below) => inf,
    }
}

/// `ℓ(D/I)`: the sum of the four parts. Defined for any data, valid or not.
pub fn eval(tree: &SpectrumTree, l: &CanonicalLengthFn, i: &IdealDescriptor) -> GammaValue {
    let mut total = GammaValue::zero();
    let mut add = |part: Part, coeff: Option<&Rational>, p: PrimeId| {
        let v = contribution(tree, part, coeff, p, &local_shape(tree, i, p));
        total = crate::gamma::add(&total, &v);
    };
    for &p in &l.sigma_t {
        add(Part::T, None, p);
    }
    for &p in &l.sigma_i {
        add(Part::I, None, p);
    }
    for (p, a) in &l.sigma_r {
        add(Part::R, Some(a), *p);
    }
    for (p, a) in &l.sigma_v {
        add(Part::V, Some(a), *p);
    }
    total
}

/// `ℓ(⊕ D/I_k)`.
pub fn eval_sum(tree: &SpectrumTree, l: &CanonicalLengthFn, ideals: &[IdealDescriptor]) -> GammaValue {
    ideals.iter().map(|i| eval(tree, l, i)).sum()
}

/// Something that evaluates a length function on cyclic modules `D/I`.
pub trait LengthOracle {
    fn eval(&self, i: &IdealDescriptor) -> GammaValue;
}

impl<F: Fn(&IdealDescriptor) -> GammaValue> LengthOracle for F {
    fn eval(&self, i: &IdealDescriptor) -> GammaValue {
        self(i)
    }
}

/// A canonical function together with its tree.
#[derive(Debug, Clone)]
pub struct Evaluator<'a> {
    pub tree: &'a SpectrumTree,
    pub l: CanonicalLengthFn,
}

impl<'a> Evaluator<'a> {
    pub fn new(tree: &'a SpectrumTree, l: CanonicalLengthFn) -> Self {
        Evaluator { tree, l }
    }
}

impl LengthOracle for Evaluator<'_> {
    fn eval(&self, i: &IdealDescriptor) -> GammaValue {
        eval(self.tree, &self.l, i)
    }
}

/// Pointwise Γ-sum of oracles; the empty sum is the zero function.
pub struct OracleSum<'a> {
    members: Vec<Box<dyn LengthOracle + 'a>>,
}

impl LengthOracle for OracleSum<'_> {
    fn eval(&self, i: &IdealDescriptor) -> GammaValue {
        self.members.iter().map(|o| o.eval(i)).sum()
    }
}

pub fn add_lengths<'a>(a: impl LengthOracle + 'a, b: impl LengthOracle + 'a) -> OracleSum<'a> {
    OracleSum { members: vec![Box::new(a), Box::new(b)] }
}

pub fn family_add<'a>(members: Vec<Box<dyn LengthOracle + 'a>>) -> OracleSum<'a> {
    OracleSum { members }
}

/// `ℓ ⊗ D_p`: the summands at primes contained in `p`.
pub fn localize_length(tree: &SpectrumTree, l: &CanonicalLengthFn, p: PrimeId) -> CanonicalLengthFn {
    l.restrict(|q| tree.le(q, p))
}

/// `ℓ^♯ = Σ_{P ∈ Σ(ℓ)} ℓ ⊗ D_P`, with `Σ(ℓ)` the union of the four parts.
pub fn sharp<'a>(tree: &'a SpectrumTree, l: &CanonicalLengthFn) -> OracleSum<'a> {
    family_add(
        l.support()
            .into_iter()
            .map(|p| Box::new(Evaluator::new(tree, localize_length(tree, l, p))) as Box<dyn LengthOracle>)
            .collect(),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonicalizeError {
    /// The oracle's answers fit no canonical form at this prime.
    #[error("inconsistent oracle at {prime}: {probe} has length {value}; {reason}")]
    Inconsistent { prime: String, probe: String, value: String, reason: String },
    #[error("recovered data is not canonical: {}", .0.join("; "))]
    NotCanonical(Vec<String>),
}

/// Recovers the canonical form from evaluations on primes and probe ideals.
pub fn canonicalize(tree: &SpectrumTree, o: &dyn LengthOracle) -> Result<CanonicalLengthFn, CanonicalizeError> {
    let v0: Vec<GammaValue> = tree.ids().map(|p| o.eval(&IdealDescriptor::prime(tree, p))).collect();
    let mut l = CanonicalLengthFn::zero();
    let fail = |p: PrimeId, probe: &IdealDescriptor, value: &GammaValue, reason: &str| {
        CanonicalizeError::Inconsistent {
            prime: tree.name(p).to_string(),
            probe: probe.display(tree),
            value: value.to_string(),
            reason: reason.to_string(),
        }
    };
    for p in tree.ids() {
        let value = &v0[p.0];
        let prime = IdealDescriptor::prime(tree, p);
        if value.is_infinite() {
            l.sigma_t.insert(p);
            continue;
        }
        let Some(kind) = tree.kind(p) else {
            if !value.is_zero() {
                l.sigma_r.insert(p, value.as_finite().expect("finite").clone());
            }
            continue;
        };
        if kind == PieceKind::Unbranched {
            if !value.is_zero() {
                l.sigma_r.insert(p, value.as_finite().expect("finite").clone());
            } else if tree.strictly_below(p).iter().all(|q| v0[q.0].is_infinite()) {
                l.sigma_i.insert(p);
            }
            continue;
        }
        let probe = probe_primary(tree, p).expect("branched prime");
        let v1 = o.eval(&probe);
        let probe_gamma = probe.components().expect("proper")[&p].gamma().clone();
        match (kind, value.as_finite().expect("finite")) {
            (PieceKind::Discrete, a) if !a.is_zero() => {
                // ℓ(D/P) = λ·1 on a discrete piece
                let expected = GammaValue::Finite(a * &probe_gamma);
                if v1 != expected {
                    return Err(fail(p, &probe, &v1, &format!("a valuative prime would give {expected}")));
                }
                l.sigma_v.insert(p, a.clone());
            }
            (_, a) if !a.is_zero() => {
                if !v1.is_infinite() {
                    return Err(fail(p, &probe, &v1, "a rank prime gives inf on smaller primary ideals"));
                }
                l.sigma_r.insert(p, a.clone());
            }
            _ => match &v1 {
                GammaValue::Infinity if kind == PieceKind::Dense => {
                    l.sigma_i.insert(p);
                }
                GammaValue::Infinity => {
                    return Err(fail(p, &prime, value, "a non-idempotent prime of infinite probe must have infinite length"));
                }
                GammaValue::Finite(b) if b.is_zero() => {}
                GammaValue::Finite(b) if kind == PieceKind::Dense => {
                    l.sigma_v.insert(p, b / &probe_gamma);
                }
                GammaValue::Finite(_) => {
                    return Err(fail(p, &prime, value, "a valuative discrete prime has positive length"));
                }
            },
        }
    }
    validate_canonical(tree, &l)
        .map_err(|vs| CanonicalizeError::NotCanonical(vs.iter().map(|v| v.describe(tree)).collect()))?;
    Ok(l)
}

/// `Σ(ℓ)`: primes carrying a primary ideal of nonzero length. An unbranched
/// prime in `sigma_i` drops out, since its only primary ideal is itself.
pub fn total_spectrum(tree: &SpectrumTree, l: &CanonicalLengthFn) -> BTreeSet<PrimeId> {
    let mut out = l.support();
    out.retain(|p| !(l.sigma_i.contains(p) && tree.kind(*p) == Some(PieceKind::Unbranched)));
    out
}

pub fn is_singular(l: &CanonicalLengthFn) -> bool {
    l.sigma_r.is_empty() && l.sigma_v.is_empty()
}

/// On a finite tree the values `ℓ(D/P)` form a finite set, so only a dense
/// valuative prime can make the image non-discrete.
pub fn is_discrete(tree: &SpectrumTree, l: &CanonicalLengthFn) -> bool {
    l.sigma_v.keys().all(|&p| tree.kind(p) != Some(PieceKind::Dense))
}

/// The pieces of a function along the branches at the root. `root` carries
/// the summand at the zero ideal; each branch part carries the summands on
/// its branch plus `t_(0)` when nonempty (the layering core).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchSplit {
    pub root: CanonicalLengthFn,
    pub branches: Vec<(PrimeId, CanonicalLengthFn)>,
}

pub fn branch_split(tree: &SpectrumTree, l: &CanonicalLengthFn) -> BranchSplit {
    let root = l.restrict(PrimeId::is_root);
    let branches = tree
        .children(PrimeId::ROOT)
        .iter()
        .map(|&h| {
            let mut part = l.restrict(|p| !p.is_root() && tree.le(h, p));
            if !part.is_zero() {
                part.sigma_t.insert(PrimeId::ROOT);
            }
            (h, part)
        })
        .collect();
    BranchSplit { root, branches }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MergeError {
    #[error("part for branch {branch} has support at {prime} outside the branch")]
    ForeignSupport { branch: String, prime: String },
    #[error("branch {0} occurs twice")]
    DuplicateBranch(String),
    #[error("{0} is not a branch at the root")]
    NotABranch(String),
    #[error("root part has support at {0}")]
    RootPartSupport(String),
    #[error("branch {0} needs the zero ideal in sigma_t")]
    MissingCore(String),
}

pub fn branch_merge(tree: &SpectrumTree, split: &BranchSplit) -> Result<CanonicalLengthFn, MergeError> {
    if let Some(p) = split.root.support().into_iter().find(|p| !p.is_root()) {
        return Err(MergeError::RootPartSupport(tree.name(p).to_string()));
    }
    let mut out = split.root.clone();
    let mut seen = BTreeSet::new();
    for (h, part) in &split.branches {
        let name = tree.name(*h).to_string();
        if tree.parent(*h) != Some(PrimeId::ROOT) {
            return Err(MergeError::NotABranch(name));
        }
        if !seen.insert(*h) {
            return Err(MergeError::DuplicateBranch(name));
        }
        let support = part.support();
        if let Some(p) = support.iter().find(|p| !p.is_root() && !tree.le(*h, **p)) {
            return Err(MergeError::ForeignSupport { branch: name, prime: tree.name(*p).to_string() });
        }
        let body = part.restrict(|p| !p.is_root());
        if body.is_zero() {
            continue;
        }
        if !part.sigma_t.contains(&PrimeId::ROOT) || part.support().len() != body.support().len() + 1 {
            return Err(MergeError::MissingCore(name));
        }
        out.sigma_t.insert(PrimeId::ROOT);
        out.sigma_t.extend(body.sigma_t);
        out.sigma_i.extend(body.sigma_i);
        out.sigma_r.extend(body.sigma_r);
        out.sigma_v.extend(body.sigma_v);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransportError {
    #[error("map is not a bijection of nonzero primes")]
    NotBijective,
    #[error("{0} changes kind")]
    KindMismatch(String),
    #[error("{0} does not keep its parent")]
    NotOrderPreserving(String),
}

/// A bijection of primes fixing the root, preserving parents and kinds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumIso {
    map: BTreeMap<PrimeId, PrimeId>,
}

impl SpectrumIso {
    /// `phi` lists the images of the nonzero primes of `a`.
    pub fn new(a: &SpectrumTree, b: &SpectrumTree, phi: &BTreeMap<PrimeId, PrimeId>) -> Result<Self, TransportError> {
        let mut map = phi.clone();
        map.insert(PrimeId::ROOT, PrimeId::ROOT);
        let images: BTreeSet<PrimeId> = map.values().copied().collect();
        if a.len() != b.len()
            || map.len() != a.len()
            || images.len() != map.len()
            || map.iter().any(|(p, q)| !a.contains(*p) || !b.contains(*q))
            || phi.contains_key(&PrimeId::ROOT)
            || phi.values().any(|q| q.is_root())
        {
            return Err(TransportError::NotBijective);
        }
        for p in a.nonroot() {
            let q = map[&p];
            if a.kind(p) != b.kind(q) {
                return Err(TransportError::KindMismatch(a.name(p).to_string()));
            }
            if a.parent(p).map(|x| map[&x]) != b.parent(q) {
                return Err(TransportError::NotOrderPreserving(a.name(p).to_string()));
            }
        }
        Ok(SpectrumIso { map })
    }

    pub fn apply(&self, p: PrimeId) -> PrimeId {
        self.map[&p]
    }

    pub fn inverse(&self) -> SpectrumIso {
        SpectrumIso { map: self.map.iter().map(|(p, q)| (*q, *p)).collect() }
    }

    pub fn ideal(&self, i: &IdealDescriptor) -> IdealDescriptor {
        match i {
            IdealDescriptor::Zero => IdealDescriptor::Zero,
            IdealDescriptor::Proper(m) => {
                IdealDescriptor::Proper(m.iter().map(|(p, c)| (self.apply(*p), c.clone())).collect())
            }
        }
    }
}

/// Carries the four parts and their coefficients along `phi`.
pub fn transport(phi: &SpectrumIso, l: &CanonicalLengthFn) -> CanonicalLengthFn {
    CanonicalLengthFn {
        sigma_t: l.sigma_t.iter().map(|p| phi.apply(*p)).collect(),
        sigma_i: l.sigma_i.iter().map(|p| phi.apply(*p)).collect(),
        sigma_r: l.sigma_r.iter().map(|(p, a)| (phi.apply(*p), a.clone())).collect(),
        sigma_v: l.sigma_v.iter().map(|(p, a)| (phi.apply(*p), a.clone())).collect(),
    }
}

/// A random relabeling of `tree` and the isomorphism onto it.
pub fn random_relabeling<R: Rng + ?Sized>(rng: &mut R, tree: &SpectrumTree) -> (SpectrumTree, SpectrumIso) {
    use rand::seq::SliceRandom;
    let mut names: Vec<String> = (1..tree.len()).map(|k| format!("Q{k}")).collect();
    names.shuffle(rng);
    let rename = |p: PrimeId| names[p.0 - 1].clone();
    let mut nodes = tree.to_nodes();
    for (node, p) in nodes.iter_mut().zip(tree.nonroot()) {
        node.id = rename(p);
        node.parent = tree.parent(p).filter(|q| !q.is_root()).map(rename);
    }
    nodes.shuffle(rng);
    let other = SpectrumTree::from_nodes(&nodes).expect("relabeled tree is valid");
    let phi: BTreeMap<PrimeId, PrimeId> =
        tree.nonroot().map(|p| (p, other.lookup(&rename(p)).expect("renamed"))).collect();
    let iso = SpectrumIso::new(tree, &other, &phi).expect("relabeling is an isomorphism");
    (other, iso)
}

fn random_coefficient<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    Rational::new(BigInt::from(rng.gen_range(1..=9)), BigInt::from(rng.gen_range(1..=4)))
}

/// A random valid canonical function: a random down-closed core for
/// `sigma_t`, then a class for each prime just above the core.
pub fn random_canonical<R: Rng + ?Sized>(rng: &mut R, tree: &SpectrumTree) -> CanonicalLengthFn {
    let mut l = CanonicalLengthFn::zero();
    match rng.gen_range(0..10) {
        0 => return l,
        1 => {
            l.sigma_r.insert(PrimeId::ROOT, random_coefficient(rng));
            return l;
        }
        _ => {}
    }
    l.sigma_t.insert(PrimeId::ROOT);
    let core_tenths = rng.gen_range(2..7);
    // ids are breadth-first, so parents are decided first
    for p in tree.nonroot() {
        let parent = tree.parent(p).expect("nonroot");
        if !l.sigma_t.contains(&parent) {
            continue;
        }
        if rng.gen_ratio(core_tenths, 10) {
            l.sigma_t.insert(p);
            continue;
        }
        match tree.kind(p).expect("nonroot") {
            PieceKind::Discrete => {
                if rng.gen_ratio(1, 2) {
                    l.sigma_v.insert(p, random_coefficient(rng));
                }
            }
            PieceKind::Dense => match rng.gen_range(0..4) {
                0 => {}
                1 => {
                    l.sigma_i.insert(p);
                }
                2 => {
                    l.sigma_r.insert(p, random_coefficient(rng));
                }
                _ => {
                    l.sigma_v.insert(p, random_coefficient(rng));
                }
            },
            PieceKind::Unbranched => {
                if rng.gen_ratio(1, 2) {
                    l.sigma_i.insert(p);
                } else {
                    l.sigma_r.insert(p, random_coefficient(rng));
                }
            }
        }
    }
    l
}

/// A random valid singular function (no rank or valuative parts).
pub fn random_singular<R: Rng + ?Sized>(rng: &mut R, tree: &SpectrumTree) -> CanonicalLengthFn {
    let mut l = random_canonical(rng, tree);
    // a frontier prime in r or v moves to i when idempotent, else drops out
    let frontier: Vec<PrimeId> = l.sigma_r.keys().chain(l.sigma_v.keys()).copied().collect();
    l.sigma_r.clear();
    l.sigma_v.clear();
    for p in frontier {
        if tree.is_idempotent(p) && !p.is_root() {
            l.sigma_i.insert(p);
        } else if p.is_root() {
            l.sigma_t.insert(p);
        }
    }
    debug_assert!(validate_canonical(tree, &l).is_ok());
    l
}
