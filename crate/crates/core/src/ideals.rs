//! Ideals of the abstract Prüfer model, described by their minimal primes
//! and the local cut at each of them.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::gamma::Rational;
use crate::spectrum::{PieceKind, PrimeId, SpectrumTree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error("unknown prime #{0}")]
    UnknownPrime(usize),
    #[error("the zero ideal is not given by components")]
    RootComponent,
    #[error("cut {cut} is not allowed on a {kind} piece")]
    IllegalCut { kind: &'static str, cut: String },
    #[error("components at comparable primes {0} and {1}")]
    NotAntichain(String, String),
    #[error("duplicate component at {0}")]
    Duplicate(String),
    #[error("unbranched prime {0} has no smaller primary ideal")]
    Unbranched(String),
    #[error("the zero ideal has no probe")]
    RootProbe,
}

/// The local ideal `{x | v(x) ≥ gamma}` (inclusive) or `{x | v(x) > gamma}`
/// of the rank-one piece at a prime.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cut {
    gamma: Rational,
    inclusive: bool,
}

impl Cut {
    /// Unnormalized; see [`normalize_cut`].
    pub fn raw(gamma: Rational, inclusive: bool) -> Self {
        Cut { gamma, inclusive }
    }

    pub fn inclusive(n: i64) -> Self {
        Cut { gamma: Rational::from_integer(BigInt::from(n)), inclusive: true }
    }

    pub fn gamma(&self) -> &Rational {
        &self.gamma
    }

    pub fn is_inclusive(&self) -> bool {
        self.inclusive
    }

    /// The prime itself as a cut on a piece of the given kind.
    pub fn prime_itself(kind: PieceKind) -> Cut {
        match kind {
            PieceKind::Discrete => Cut::inclusive(1),
            PieceKind::Dense | PieceKind::Unbranched => Cut { gamma: Rational::zero(), inclusive: false },
        }
    }
}

/// Deeper cuts are smaller ideals: compare by `gamma`, then inclusive before
/// exclusive.
impl Ord for Cut {
    fn cmp(&self, other: &Self) -> Ordering {
        self.gamma.cmp(&other.gamma).then(other.inclusive.cmp(&self.inclusive))
    }
}

impl PartialOrd for Cut {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.inclusive { ">=" } else { ">" };
        write!(f, "v{op}{}", crate::gamma::format_rational(&self.gamma))
    }
}

/// The unique representative of a cut on a piece of the given kind.
pub fn normalize_cut(kind: PieceKind, cut: &Cut) -> Result<Cut, IdealError> {
    let illegal = || IdealError::IllegalCut { kind: kind.as_str(), cut: cut.to_string() };
    if cut.gamma < Rational::zero() {
        return Err(illegal());
    }
    match kind {
        PieceKind::Discrete => {
            // v ≥ g is v ≥ ceil(g); v > g is v ≥ floor(g) + 1
            let n = if cut.inclusive { cut.gamma.ceil() } else { cut.gamma.floor() + Rational::one() };
            if n < Rational::one() {
                return Err(illegal());
            }
            Ok(Cut { gamma: n, inclusive: true })
        }
        PieceKind::Dense => {
            if cut.inclusive && cut.gamma.is_zero() {
                return Err(illegal());
            }
            Ok(cut.clone())
        }
        PieceKind::Unbranched => {
            if *cut != Cut::prime_itself(PieceKind::Unbranched) {
                return Err(illegal());
            }
            Ok(cut.clone())
        }
    }
}

/// An ideal: zero, or the (possibly empty) antichain of its minimal primes
/// with the local cut at each. The empty map is the unit ideal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdealDescriptor {
    Zero,
    Proper(BTreeMap<PrimeId, Cut>),
}

/// The localization `I D_P` of an ideal at a probe prime. `At(q, c)` has
/// radical `q D_P` for the unique minimal prime `q ≤ P` of `I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalIdeal {
    Zero,
    At(PrimeId, Cut),
    Unit,
}

impl IdealDescriptor {
    pub fn unit() -> Self {
        IdealDescriptor::Proper(BTreeMap::new())
    }

    pub fn zero() -> Self {
        IdealDescriptor::Zero
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, IdealDescriptor::Proper(m) if m.is_empty())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, IdealDescriptor::Zero)
    }

    /// Normalizes cuts and checks the antichain condition.
    pub fn from_components(
        tree: &SpectrumTree,
        components: impl IntoIterator<Item = (PrimeId, Cut)>,
    ) -> Result<Self, IdealError> {
        let mut map = BTreeMap::new();
        for (p, cut) in components {
            if !tree.contains(p) {
                return Err(IdealError::UnknownPrime(p.0));
            }
            let kind = tree.kind(p).ok_or(IdealError::RootComponent)?;
            let cut = normalize_cut(kind, &cut)?;
            if map.insert(p, cut).is_some() {
                return Err(IdealError::Duplicate(tree.name(p).to_string()));
            }
        }
        let keys: Vec<PrimeId> = map.keys().copied().collect();
        for (k, &p) in keys.iter().enumerate() {
            for &q in &keys[k + 1..] {
                if tree.is_comparable(p, q) {
                    return Err(IdealError::NotAntichain(
                        tree.name(p).to_string(),
                        tree.name(q).to_string(),
                    ));
                }
            }
        }
        Ok(IdealDescriptor::Proper(map))
    }

    /// The prime `p` as an ideal; the root gives the zero ideal.
    pub fn prime(tree: &SpectrumTree, p: PrimeId) -> Self {
        match tree.kind(p) {
            None => IdealDescriptor::Zero,
            Some(kind) => IdealDescriptor::Proper(BTreeMap::from([(p, Cut::prime_itself(kind))])),
        }
    }

    pub fn components(&self) -> Option<&BTreeMap<PrimeId, Cut>> {
        match self {
            IdealDescriptor::Zero => None,
            IdealDescriptor::Proper(m) => Some(m),
        }
    }

    /// Renders with prime names, e.g. `{M: v>=2}`.
    pub fn display(&self, tree: &SpectrumTree) -> String {
        match self {
            IdealDescriptor::Zero => "zero".into(),
            IdealDescriptor::Proper(m) if m.is_empty() => "unit".into(),
            IdealDescriptor::Proper(m) => {
                let parts: Vec<String> =
                    m.iter().map(|(p, c)| format!("{}: {c}", tree.name(*p))).collect();
                format!("{{{}}}", parts.join(", "))
            }
        }
    }
}

pub fn localize(tree: &SpectrumTree, i: &IdealDescriptor, p: PrimeId) -> LocalIdeal {
    match i {
        IdealDescriptor::Zero => LocalIdeal::Zero,
        IdealDescriptor::Proper(m) => tree
            .chain(p)
            .into_iter()
            .find_map(|q| m.get(&q).map(|c| LocalIdeal::At(q, c.clone())))
            .unwrap_or(LocalIdeal::Unit),
    }
}

/// Containment order of two localizations at a common prime: a lower
/// radical is a smaller ideal, and at equal radicals a deeper cut is.
pub fn local_cmp(tree: &SpectrumTree, a: &LocalIdeal, b: &LocalIdeal) -> Ordering {
    use LocalIdeal::*;
    match (a, b) {
        (Zero, Zero) | (Unit, Unit) => Ordering::Equal,
        (Zero, _) | (_, Unit) => Ordering::Less,
        (_, Zero) | (Unit, _) => Ordering::Greater,
        (At(p, c), At(q, d)) => tree.depth(*p).cmp(&tree.depth(*q)).then_with(|| d.cmp(c)),
    }
}

/// `I + J`.
pub fn sum(tree: &SpectrumTree, i: &IdealDescriptor, j: &IdealDescriptor) -> IdealDescriptor {
    let (a, b) = match (i, j) {
        (IdealDescriptor::Zero, x) | (x, IdealDescriptor::Zero) => return x.clone(),
        (IdealDescriptor::Proper(a), IdealDescriptor::Proper(b)) => (a, b),
    };
    // the sum is non-unit at P iff P lies above a minimal prime of each
    let mut candidates: BTreeMap<PrimeId, Cut> = BTreeMap::new();
    for (&p, c) in a {
        for (&q, d) in b {
            let (top, cut) = if p == q {
                (p, c.min(d).clone())
            } else if tree.lt(p, q) {
                (q, d.clone())
            } else if tree.lt(q, p) {
                (p, c.clone())
            } else {
                continue;
            };
            candidates.insert(top, cut);
        }
    }
    minimal_part(tree, candidates)
}

/// `I ∩ J`.
pub fn intersect(tree: &SpectrumTree, i: &IdealDescriptor, j: &IdealDescriptor) -> IdealDescriptor {
    let (a, b) = match (i, j) {
        (IdealDescriptor::Zero, _) | (_, IdealDescriptor::Zero) => return IdealDescriptor::Zero,
        (IdealDescriptor::Proper(a), IdealDescriptor::Proper(b)) => (a, b),
    };
    let mut candidates = a.clone();
    for (&q, d) in b {
        candidates
            .entry(q)
            .and_modify(|c| {
                if *d > *c {
                    *c = d.clone();
                }
            })
            .or_insert_with(|| d.clone());
    }
    minimal_part(tree, candidates)
}

fn minimal_part(tree: &SpectrumTree, candidates: BTreeMap<PrimeId, Cut>) -> IdealDescriptor {
    let keys: BTreeSet<PrimeId> = candidates.keys().copied().collect();
    let minimal = tree.minimal_elements(&keys);
    IdealDescriptor::Proper(candidates.into_iter().filter(|(p, _)| minimal.contains(p)).collect())
}

/// The minimal primes; `{(0)}` for the zero ideal.
pub fn radical(i: &IdealDescriptor) -> BTreeSet<PrimeId> {
    match i {
        IdealDescriptor::Zero => BTreeSet::from([PrimeId::ROOT]),
        IdealDescriptor::Proper(m) => m.keys().copied().collect(),
    }
}

pub fn is_primary_at(i: &IdealDescriptor, p: PrimeId) -> bool {
    match i {
        IdealDescriptor::Zero => p.is_root(),
        IdealDescriptor::Proper(m) => m.len() == 1 && m.contains_key(&p),
    }
}

/// `I ⊆ J`, decided prime by prime.
pub fn leq(tree: &SpectrumTree, i: &IdealDescriptor, j: &IdealDescriptor) -> bool {
    tree.ids()
        .all(|p| local_cmp(tree, &localize(tree, i, p), &localize(tree, j, p)) != Ordering::Greater)
}

/// `I ⊆ P`.
pub fn contained_in_prime(tree: &SpectrumTree, i: &IdealDescriptor, p: PrimeId) -> bool {
    localize(tree, i, p) != LocalIdeal::Unit
}

/// A primary ideal strictly inside the branched prime `p`.
pub fn probe_primary(tree: &SpectrumTree, p: PrimeId) -> Result<IdealDescriptor, IdealError> {
    if !tree.contains(p) {
        return Err(IdealError::UnknownPrime(p.0));
    }
    let cut = match tree.kind(p) {
        None => return Err(IdealError::RootProbe),
        Some(PieceKind::Discrete) => Cut::inclusive(2),
        Some(PieceKind::Dense) => Cut::inclusive(1),
        Some(PieceKind::Unbranched) => return Err(IdealError::Unbranched(tree.name(p).to_string())),
    };
    Ok(IdealDescriptor::Proper(BTreeMap::from([(p, cut)])))
}

/// A random legal cut on a piece of the given kind.
pub fn random_cut<R: Rng + ?Sized>(rng: &mut R, kind: PieceKind) -> Cut {
    match kind {
        PieceKind::Discrete => {
            if rng.gen_ratio(3, 10) {
                Cut::prime_itself(kind)
            } else {
                Cut::inclusive(rng.gen_range(1..=5))
            }
        }
        PieceKind::Dense => {
            if rng.gen_ratio(3, 10) {
                return Cut::prime_itself(kind);
            }
            let gamma = Rational::new(BigInt::from(rng.gen_range(0..=8)), BigInt::from(rng.gen_range(1..=3)));
            let inclusive = !gamma.is_zero() && rng.gen_ratio(1, 2);
            Cut { gamma, inclusive }
        }
        PieceKind::Unbranched => Cut::prime_itself(kind),
    }
}

/// A random ideal: occasionally zero or unit, otherwise a random antichain
/// with random cuts.
pub fn random_ideal<R: Rng + ?Sized>(rng: &mut R, tree: &SpectrumTree) -> IdealDescriptor {
    let roll = rng.gen_range(0..20);
    if roll == 0 || tree.len() == 1 {
        return if rng.gen_ratio(1, 2) { IdealDescriptor::Zero } else { IdealDescriptor::unit() };
    }
    if roll == 1 {
        return IdealDescriptor::unit();
    }
    let mut order: Vec<PrimeId> = tree.nonroot().collect();
    order.shuffle(rng);
    let want = rng.gen_range(1..=3);
    let mut map = BTreeMap::new();
    for p in order {
        if map.len() == want {
            break;
        }
        if map.keys().all(|&q| !tree.is_comparable(p, q)) {
            map.insert(p, random_cut(rng, tree.kind(p).expect("nonroot")));
        }
    }
    IdealDescriptor::Proper(map)
}

/// Ideals of an [`InfiniteOneDimSpectrum`](crate::spectrum::InfiniteOneDimSpectrum):
/// maximal ideals are indexed by positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OneDimIdeal {
    Unit,
    Zero,
    /// Contained in the listed maximal ideals only, with the given cuts.
    FiniteSupport(BTreeMap<u64, Cut>),
    /// A principal ideal `xD` with `x` a nonzero nonunit contained in
    /// infinitely many maximal ideals.
    PrincipalNonunit,
}

impl fmt::Display for OneDimIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OneDimIdeal::Unit => f.write_str("unit"),
            OneDimIdeal::Zero => f.write_str("zero"),
            OneDimIdeal::PrincipalNonunit => f.write_str("principal-nonunit"),
            OneDimIdeal::FiniteSupport(m) => {
                let parts: Vec<String> = m.iter().map(|(k, c)| format!("M{k}: {c}")).collect();
                write!(f, "{{{}}}", parts.join(", "))
            }
        }
    }
}

/// A random finite-support ideal with at most four maximal ideals among
/// `M_1..=M_bound`.
pub fn random_finite_support<R: Rng + ?Sized>(rng: &mut R, kind: PieceKind, bound: u64) -> OneDimIdeal {
    let n = rng.gen_range(0..=4);
    let mut map = BTreeMap::new();
    for _ in 0..n {
        map.insert(rng.gen_range(1..=bound), random_cut(rng, kind));
    }
    if map.is_empty() {
        OneDimIdeal::Unit
    } else {
        OneDimIdeal::FiniteSupport(map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::PrimeNode;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn chain() -> (SpectrumTree, PrimeId, PrimeId) {
        let t = SpectrumTree::from_nodes(&[
            PrimeNode::new("P", None, PieceKind::Dense),
            PrimeNode::new("M", Some("P"), PieceKind::Discrete),
        ])
        .unwrap();
        let (p, m) = (t.lookup("P").unwrap(), t.lookup("M").unwrap());
        (t, p, m)
    }

    fn one(p: PrimeId, c: Cut) -> IdealDescriptor {
        IdealDescriptor::Proper(BTreeMap::from([(p, c)]))
    }

    #[test]
    fn cut_normalization() {
        assert_eq!(normalize_cut(PieceKind::Discrete, &Cut::raw(q(3, 2), true)), Ok(Cut::inclusive(2)));
        assert_eq!(normalize_cut(PieceKind::Discrete, &Cut::raw(q(2, 1), false)), Ok(Cut::inclusive(3)));
        assert_eq!(normalize_cut(PieceKind::Discrete, &Cut::raw(q(0, 1), false)), Ok(Cut::inclusive(1)));
        assert!(normalize_cut(PieceKind::Discrete, &Cut::raw(q(0, 1), true)).is_err());
        assert!(normalize_cut(PieceKind::Dense, &Cut::raw(q(0, 1), true)).is_err());
        assert!(normalize_cut(PieceKind::Dense, &Cut::raw(q(0, 1), false)).is_ok());
        assert!(normalize_cut(PieceKind::Unbranched, &Cut::inclusive(1)).is_err());
        assert!(Cut::raw(q(1, 1), false) > Cut::raw(q(1, 1), true));
    }

    #[test]
    fn localize_examples() {
        let (t, p, m) = chain();
        assert_eq!(localize(&t, &IdealDescriptor::unit(), m), LocalIdeal::Unit);
        let i = one(m, Cut::inclusive(2));
        assert_eq!(localize(&t, &i, m), LocalIdeal::At(m, Cut::inclusive(2)));
        assert_eq!(localize(&t, &i, p), LocalIdeal::Unit);
        let i = IdealDescriptor::prime(&t, p);
        assert_eq!(localize(&t, &i, m), LocalIdeal::At(p, Cut::prime_itself(PieceKind::Dense)));
        assert_eq!(localize(&t, &IdealDescriptor::Zero, PrimeId::ROOT), LocalIdeal::Zero);
    }

    #[test]
    fn lattice_examples() {
        let t = SpectrumTree::from_nodes(&[
            PrimeNode::new("P", None, PieceKind::Discrete),
            PrimeNode::new("Q", None, PieceKind::Dense),
        ])
        .unwrap();
        let (p, qq) = (t.lookup("P").unwrap(), t.lookup("Q").unwrap());
        let i = one(p, Cut::inclusive(2));
        let j = one(qq, Cut::raw(q(1, 2), false));
        assert!(sum(&t, &i, &j).is_unit());
        assert_eq!(intersect(&t, &i, &IdealDescriptor::unit()), i);

        let (t, _, m) = chain();
        let a = one(m, Cut::inclusive(3));
        let b = one(m, Cut::inclusive(2));
        assert_eq!(sum(&t, &a, &b), b);
        assert_eq!(intersect(&t, &a, &b), a);
    }

    #[test]
    fn radical_and_containment() {
        let t = SpectrumTree::from_nodes(&[
            PrimeNode::new("P", None, PieceKind::Discrete),
            PrimeNode::new("Q", None, PieceKind::Dense),
        ])
        .unwrap();
        let (p, qq) = (t.lookup("P").unwrap(), t.lookup("Q").unwrap());
        assert!(radical(&IdealDescriptor::unit()).is_empty());
        let i = IdealDescriptor::from_components(&t, [(p, Cut::inclusive(1)), (qq, Cut::inclusive(2))]).unwrap();
        assert_eq!(radical(&i), BTreeSet::from([p, qq]));
        assert!(!leq(&t, &IdealDescriptor::prime(&t, p), &IdealDescriptor::prime(&t, qq)));
        assert!(leq(&t, &IdealDescriptor::Zero, &i));

        let (t, _, m) = chain();
        assert!(is_primary_at(&one(m, Cut::inclusive(2)), m));
        assert!(leq(&t, &one(m, Cut::inclusive(3)), &one(m, Cut::inclusive(2))));
        assert!(!leq(&t, &one(m, Cut::inclusive(2)), &one(m, Cut::inclusive(3))));
    }

    #[test]
    fn probes() {
        let (t, p, m) = chain();
        assert_eq!(probe_primary(&t, m).unwrap(), one(m, Cut::inclusive(2)));
        assert_eq!(probe_primary(&t, p).unwrap(), one(p, Cut::inclusive(1)));
        let t = SpectrumTree::from_nodes(&[
            PrimeNode::new("P", None, PieceKind::Dense),
            PrimeNode::new("U", Some("P"), PieceKind::Unbranched),
        ])
        .unwrap();
        assert!(matches!(probe_primary(&t, t.lookup("U").unwrap()), Err(IdealError::Unbranched(_))));
    }

    #[test]
    fn antichain_is_enforced() {
        let (t, p, m) = chain();
        assert!(matches!(
            IdealDescriptor::from_components(&t, [(p, Cut::inclusive(1)), (m, Cut::inclusive(1))]),
            Err(IdealError::NotAntichain(..))
        ));
    }

    // Lattice laws, checked against containment decided prime by prime.
    #[test]
    fn lattice_laws_on_random_trees() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let t = crate::spectrum::random_tree(&mut rng);
            for _ in 0..10 {
                let i = random_ideal(&mut rng, &t);
                let j = random_ideal(&mut rng, &t);
                let k = random_ideal(&mut rng, &t);
                let s = sum(&t, &i, &j);
                let n = intersect(&t, &i, &j);
                assert_eq!(s, sum(&t, &j, &i));
                assert_eq!(n, intersect(&t, &j, &i));
                assert_eq!(sum(&t, &i, &i), i);
                assert_eq!(intersect(&t, &i, &i), i);
                assert_eq!(sum(&t, &s, &k), sum(&t, &i, &sum(&t, &j, &k)));
                assert_eq!(intersect(&t, &n, &k), intersect(&t, &i, &intersect(&t, &j, &k)));
                assert_eq!(sum(&t, &i, &intersect(&t, &i, &j)), i);
                assert_eq!(intersect(&t, &i, &sum(&t, &i, &j)), i);
                assert!(leq(&t, &i, &s) && leq(&t, &n, &i));
                for p in t.ids() {
                    let (li, lj) = (localize(&t, &i, p), localize(&t, &j, p));
                    let hi = if local_cmp(&t, &li, &lj) == Ordering::Less { &lj } else { &li };
                    let lo = if hi == &li { &lj } else { &li };
                    assert_eq!(local_cmp(&t, &localize(&t, &s, p), hi), Ordering::Equal);
                    assert_eq!(local_cmp(&t, &localize(&t, &n, p), lo), Ordering::Equal);
                }
                if leq(&t, &i, &j) {
                    for p in t.ids() {
                        assert_ne!(
                            local_cmp(&t, &localize(&t, &i, p), &localize(&t, &j, p)),
                            Ordering::Greater
                        );
                    }
                }
                let rad_n: BTreeSet<_> = radical(&i).union(&radical(&j)).copied().collect();
                if !i.is_zero() && !j.is_zero() {
                    assert_eq!(radical(&n), t.minimal_elements(&rad_n));
                }
            }
        }
    }
}
