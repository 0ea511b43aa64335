//! Localizing systems on the abstract model, the bijection with singular
//! length functions, spectral and normalized stable operations (through
//! their localizing systems) and the two one-dimensional examples.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::gamma::{GammaValue, Rational};
use crate::ideals::{contained_in_prime, probe_primary, Cut, IdealDescriptor, OneDimIdeal};
use crate::lengths::{
    canonicalize, eval, is_singular, localize_length, CanonicalLengthFn, CanonicalizeError, LengthOracle,
};
use crate::spectrum::{InfiniteOneDimSpectrum, PieceKind, PrimeId, PrimeNode, SpectrumTree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocsysError {
    #[error("length function is not singular")]
    NotSingular,
    #[error("prime set is not closed under generization: {0} is missing")]
    NotGenerizationClosed(String),
    #[error("unknown prime #{0}")]
    UnknownPrime(usize),
    #[error("infimum of an empty family")]
    EmptyFamily,
    #[error("model has {0} maximal ideals, expected {1}")]
    WrongModel(&'static str, &'static str),
    #[error("weights must be 0 or inf")]
    NotSingularWeights,
    #[error(transparent)]
    Canonicalize(#[from] CanonicalizeError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    ZeroLocusOf(CanonicalLengthFn),
    SpectralOf(BTreeSet<PrimeId>),
    Normalized,
    Infimum,
    OracleDefined,
}

type Membership = Arc<dyn Fn(&IdealDescriptor) -> bool + Send + Sync>;

/// A family of ideals given by its membership test.
#[derive(Clone)]
pub struct LocalizingSystem {
    membership: Membership,
    pub provenance: Provenance,
}

impl fmt::Debug for LocalizingSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LocalizingSystem").field("provenance", &self.provenance).finish_non_exhaustive()
    }
}

impl LocalizingSystem {
    pub fn from_fn(f: impl Fn(&IdealDescriptor) -> bool + Send + Sync + 'static) -> Self {
        LocalizingSystem { membership: Arc::new(f), provenance: Provenance::OracleDefined }
    }

    pub fn all_ideals() -> Self {
        LocalizingSystem::from_fn(|_| true)
    }

    pub fn contains(&self, i: &IdealDescriptor) -> bool {
        (self.membership)(i)
    }
}

/// A stable semistar operation, represented by `{I | 1 ∈ I^⋆}`.
#[derive(Debug, Clone)]
pub struct SemistarStable {
    pub system: LocalizingSystem,
}

impl SemistarStable {
    pub fn new(system: LocalizingSystem) -> Self {
        SemistarStable { system }
    }

    /// `1 ∈ I^⋆`.
    pub fn contains_one(&self, i: &IdealDescriptor) -> bool {
        self.system.contains(i)
    }
}

/// `Z(ℓ) = {I | ℓ(D/I) = 0}`.
pub fn zero_locus(tree: &SpectrumTree, l: &CanonicalLengthFn) -> Result<LocalizingSystem, LocsysError> {
    if !is_singular(l) {
        return Err(LocsysError::NotSingular);
    }
    if let Some(p) = l.support().into_iter().find(|p| !tree.contains(*p)) {
        return Err(LocsysError::UnknownPrime(p.0));
    }
    let (tree, owned) = (tree.clone(), l.clone());
    Ok(LocalizingSystem {
        membership: Arc::new(move |i| eval(&tree, &owned, i).is_zero()),
        provenance: Provenance::ZeroLocusOf(l.clone()),
    })
}

/// `ℓ_F`: zero on `D/I` for `I ∈ F`, infinite otherwise.
#[derive(Debug, Clone)]
pub struct SystemLength(pub LocalizingSystem);

impl LengthOracle for SystemLength {
    fn eval(&self, i: &IdealDescriptor) -> GammaValue {
        if self.0.contains(i) {
            GammaValue::zero()
        } else {
            GammaValue::Infinity
        }
    }
}

pub fn length_of_system(f: &LocalizingSystem) -> SystemLength {
    SystemLength(f.clone())
}

/// `F_Δ = {I | I ⊄ P for every P ∈ Δ}`.
pub fn spectral_system(tree: &SpectrumTree, delta: &BTreeSet<PrimeId>) -> Result<LocalizingSystem, LocsysError> {
    if let Some(p) = delta.iter().find(|p| !tree.contains(**p)) {
        return Err(LocsysError::UnknownPrime(p.0));
    }
    for &p in delta {
        if let Some(q) = tree.strictly_below(p).into_iter().find(|q| !delta.contains(q)) {
            return Err(LocsysError::NotGenerizationClosed(tree.name(q).to_string()));
        }
    }
    let (tree, members) = (tree.clone(), delta.clone());
    Ok(LocalizingSystem {
        membership: Arc::new(move |i| members.iter().all(|&p| !contained_in_prime(&tree, i, p))),
        provenance: Provenance::SpectralOf(delta.clone()),
    })
}

/// `Σ1(⋆) = {P | 1 ∉ P^⋆}`.
pub fn quasi_spectrum(s: &SemistarStable, tree: &SpectrumTree) -> BTreeSet<PrimeId> {
    tree.ids().filter(|&p| !s.contains_one(&IdealDescriptor::prime(tree, p))).collect()
}

/// `Σ2(⋆)`: primes `P` with `1 ∈ P^⋆` but `1 ∉ Q^⋆` for some `P`-primary
/// `Q`. An unbranched prime has no primary ideal other than itself, so it
/// counts when every smaller prime lies in `Σ1`.
pub fn pseudo_spectrum(s: &SemistarStable, tree: &SpectrumTree) -> BTreeSet<PrimeId> {
    let sigma1 = quasi_spectrum(s, tree);
    tree.nonroot()
        .filter(|&p| !sigma1.contains(&p))
        .filter(|&p| match probe_primary(tree, p) {
            Ok(q) => !s.contains_one(&q),
            Err(_) => tree.strictly_below(p).iter().all(|q| sigma1.contains(q)),
        })
        .collect()
}

/// The singular function `Σ_{Σ1} t_P + Σ_{Σ2} i_P` built from `s`.
pub fn normalized_length(s: &SemistarStable, tree: &SpectrumTree) -> CanonicalLengthFn {
    CanonicalLengthFn {
        sigma_t: quasi_spectrum(s, tree),
        sigma_i: pseudo_spectrum(s, tree),
        ..Default::default()
    }
}

/// `⋆̂`, through its localizing system.
pub fn normalized_stable(s: &SemistarStable, tree: &SpectrumTree) -> SemistarStable {
    let l = normalized_length(s, tree);
    let tree = tree.clone();
    SemistarStable::new(LocalizingSystem {
        membership: Arc::new(move |i| eval(&tree, &l, i).is_zero()),
        provenance: Provenance::Normalized,
    })
}

/// The infimum of stable operations: the intersection of their systems.
pub fn infimum_of_systems(list: &[SemistarStable]) -> Result<SemistarStable, LocsysError> {
    if list.is_empty() {
        return Err(LocsysError::EmptyFamily);
    }
    let systems: Vec<LocalizingSystem> = list.iter().map(|s| s.system.clone()).collect();
    Ok(SemistarStable::new(LocalizingSystem {
        membership: Arc::new(move |i| systems.iter().all(|f| f.contains(i))),
        provenance: Provenance::Infimum,
    }))
}

/// A singular length function on a one-dimensional model, by its values
/// `ℓ(D/M_k)` in `{0, ∞}` with a default for unlisted maximal ideals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneDimWeights {
    pub weights: BTreeMap<u64, GammaValue>,
    pub default: GammaValue,
}

impl OneDimWeights {
    pub fn new(weights: BTreeMap<u64, GammaValue>, default: GammaValue) -> Result<Self, LocsysError> {
        let singular = |g: &GammaValue| g.is_zero() || g.is_infinite();
        if !singular(&default) || !weights.values().all(singular) {
            return Err(LocsysError::NotSingularWeights);
        }
        Ok(OneDimWeights { weights, default })
    }

    pub fn weight(&self, k: u64) -> &GammaValue {
        self.weights.get(&k).unwrap_or(&self.default)
    }
}

/// One sampled ideal: the value of `ℓ` and of the sum of its localizations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionSample {
    pub ideal: OneDimIdeal,
    pub global: GammaValue,
    pub local: GammaValue,
}

impl DecompositionSample {
    pub fn agrees(&self) -> bool {
        self.global == self.local
    }
}

/// The maximal ideals `M_k`, `k ∈ keys`, as a finite tree over `(0)`.
fn truncation(kind: PieceKind, keys: impl IntoIterator<Item = u64>) -> SpectrumTree {
    let nodes: Vec<PrimeNode> = keys.into_iter().map(|k| PrimeNode::new(&format!("M{k}"), None, kind)).collect();
    SpectrumTree::from_nodes(&nodes).expect("one level of maximal ideals")
}

fn truncated_ideal(tree: &SpectrumTree, support: &BTreeMap<u64, Cut>) -> IdealDescriptor {
    IdealDescriptor::Proper(
        support
            .iter()
            .map(|(k, c)| (tree.lookup(&format!("M{k}")).expect("support is in the truncation"), c.clone()))
            .collect(),
    )
}

/// Checks `ℓ(D/I) = Σ_M (ℓ ⊗ D_M)(D/I)` on the almost Dedekind model.
///
/// The left side is `ℓ_F` for `F` the spectral system of `(0)` and the
/// maximal ideals of infinite weight. The right side localizes the canonical
/// form on the finite tree spanned by the support of `I`; maximal ideals
/// outside the support see the unit ideal and contribute 0.
pub fn example_ad(
    model: InfiniteOneDimSpectrum,
    l: &OneDimWeights,
    ideal: &OneDimIdeal,
) -> Result<DecompositionSample, LocsysError> {
    if model.maximal_kind != PieceKind::Discrete {
        return Err(LocsysError::WrongModel("non-discrete", "discrete"));
    }
    let (global, local) = match ideal {
        OneDimIdeal::Unit => (GammaValue::zero(), GammaValue::zero()),
        OneDimIdeal::FiniteSupport(support) => {
            let in_locus = support.keys().all(|k| !l.weight(*k).is_infinite());
            let global = if in_locus { GammaValue::zero() } else { GammaValue::Infinity };
            let tree = truncation(PieceKind::Discrete, support.keys().copied());
            let canonical = CanonicalLengthFn::torsion(
                std::iter::once(PrimeId::ROOT).chain(
                    support
                        .keys()
                        .filter(|k| l.weight(**k).is_infinite())
                        .map(|k| tree.lookup(&format!("M{k}")).expect("in truncation")),
                ),
            );
            let i = truncated_ideal(&tree, support);
            let local = tree
                .nonroot()
                .map(|m| eval(&tree, &localize_length(&tree, &canonical, m), &i))
                .sum();
            (global, local)
        }
        // outside the finite-support language
        OneDimIdeal::Zero | OneDimIdeal::PrincipalNonunit => {
            return Err(LocsysError::WrongModel("non-finite-support ideal on", "finite support"))
        }
    };
    Ok(DecompositionSample { ideal: ideal.clone(), global, local })
}

/// The length function of the counterexample: 0 on ideals inside finitely
/// many maximal ideals, infinite on `xD` for `x` in infinitely many.
pub fn global_oracle(i: &OneDimIdeal) -> GammaValue {
    match i {
        OneDimIdeal::Unit | OneDimIdeal::FiniteSupport(_) => GammaValue::zero(),
        OneDimIdeal::Zero | OneDimIdeal::PrincipalNonunit => GammaValue::Infinity,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterexampleReport {
    /// `Σ(ℓ)` recovered from the probes on the truncation.
    pub sigma: Vec<String>,
    pub rows: Vec<DecompositionSample>,
    /// An ideal with `ℓ = ∞` and `ℓ^♯ = 0`.
    pub witness: DecompositionSample,
}

/// Maximal ideals used to probe the local behaviour in [`example_global`].
pub const GLOBAL_TRUNCATION: u64 = 6;

/// Recovers the canonical form of the counterexample through probes on
/// finitely many maximal ideals, then compares `ℓ` with `ℓ^♯` (here the
/// `global` and `local` fields).
pub fn example_global(model: InfiniteOneDimSpectrum) -> Result<CounterexampleReport, LocsysError> {
    if model.maximal_kind != PieceKind::Dense {
        return Err(LocsysError::WrongModel("discrete", "non-discrete"));
    }
    let tree = truncation(PieceKind::Dense, 1..=GLOBAL_TRUNCATION);
    let to_model = |i: &IdealDescriptor| -> OneDimIdeal {
        match i.components() {
            None => OneDimIdeal::Zero,
            Some(m) if m.is_empty() => OneDimIdeal::Unit,
            Some(m) => OneDimIdeal::FiniteSupport(
                m.iter().map(|(p, c)| (tree.name(*p)[1..].parse().expect("M<k>"), c.clone())).collect(),
            ),
        }
    };
    let oracle = |i: &IdealDescriptor| global_oracle(&to_model(i));
    let l = canonicalize(&tree, &oracle)?;
    let support = l.support();
    // the sharp only needs the localization at (0) when no maximal ideal
    // carries a summand
    if support.iter().any(|p| !p.is_root()) {
        return Err(LocsysError::WrongModel("a maximal ideal in the support of", "root-only support"));
    }
    let sharp = |i: &OneDimIdeal| -> GammaValue {
        let generic = if *i == OneDimIdeal::Zero { IdealDescriptor::Zero } else { IdealDescriptor::unit() };
        support.iter().map(|&p| eval(&tree, &localize_length(&tree, &l, p), &generic)).sum()
    };
    let row = |i: OneDimIdeal| DecompositionSample { global: global_oracle(&i), local: sharp(&i), ideal: i };
    let rows = vec![
        row(OneDimIdeal::Unit),
        row(OneDimIdeal::FiniteSupport(BTreeMap::from([(1, Cut::inclusive(1)), (2, Cut::raw(Rational::from_integer(1.into()), false))]))),
        row(OneDimIdeal::Zero),
        row(OneDimIdeal::PrincipalNonunit),
    ];
    let witness = rows
        .iter()
        .find(|r| r.global.is_infinite() && r.local.is_zero())
        .cloned()
        .ok_or(LocsysError::WrongModel("no witness on", "a counterexample"))?;
    Ok(CounterexampleReport { sigma: support.iter().map(|p| tree.name(*p).to_string()).collect(), rows, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideals::random_ideal;
    use crate::lengths::{sharp, total_spectrum, Evaluator};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn one_node() -> (SpectrumTree, PrimeId) {
        let t = SpectrumTree::from_nodes(&[PrimeNode::new("M", None, PieceKind::Discrete)]).unwrap();
        let m = t.lookup("M").unwrap();
        (t, m)
    }

    fn chain() -> (SpectrumTree, PrimeId, PrimeId) {
        let t = SpectrumTree::from_nodes(&[
            PrimeNode::new("P", None, PieceKind::Dense),
            PrimeNode::new("M", Some("P"), PieceKind::Dense),
        ])
        .unwrap();
        let (p, m) = (t.lookup("P").unwrap(), t.lookup("M").unwrap());
        (t, p, m)
    }

    #[test]
    fn zero_locus_examples() {
        let (t, m) = one_node();
        let all = zero_locus(&t, &CanonicalLengthFn::zero()).unwrap();
        assert!(all.contains(&IdealDescriptor::Zero));
        let none = zero_locus(&t, &CanonicalLengthFn::torsion(t.ids())).unwrap();
        assert!(none.contains(&IdealDescriptor::unit()));
        assert!(!none.contains(&IdealDescriptor::prime(&t, m)));
        let mut r = CanonicalLengthFn::zero();
        r.sigma_r.insert(PrimeId::ROOT, Rational::from_integer(1.into()));
        assert_eq!(zero_locus(&t, &r).unwrap_err(), LocsysError::NotSingular);
    }

    #[test]
    fn length_of_system_examples() {
        let (t, m) = one_node();
        let all = length_of_system(&LocalizingSystem::all_ideals());
        assert_eq!(all.eval(&IdealDescriptor::Zero), GammaValue::zero());
        let unit_only = length_of_system(&LocalizingSystem::from_fn(IdealDescriptor::is_unit));
        assert_eq!(unit_only.eval(&IdealDescriptor::prime(&t, m)), GammaValue::Infinity);
        let l = CanonicalLengthFn::torsion([PrimeId::ROOT, m]);
        let back = canonicalize(&t, &length_of_system(&zero_locus(&t, &l).unwrap())).unwrap();
        assert_eq!(back, l);
    }

    #[test]
    fn spectral_examples() {
        let (t, p, m) = chain();
        let empty = spectral_system(&t, &BTreeSet::new()).unwrap();
        assert!(empty.contains(&IdealDescriptor::Zero));
        let everything = spectral_system(&t, &t.ids().collect()).unwrap();
        assert!(everything.contains(&IdealDescriptor::unit()));
        assert!(!everything.contains(&IdealDescriptor::prime(&t, m)));
        let generic = spectral_system(&t, &BTreeSet::from([PrimeId::ROOT])).unwrap();
        assert!(!generic.contains(&IdealDescriptor::Zero));
        assert!(generic.contains(&IdealDescriptor::prime(&t, p)));
        assert_eq!(
            spectral_system(&t, &BTreeSet::from([m])).unwrap_err(),
            LocsysError::NotGenerizationClosed("(0)".into())
        );
        // the canonical form of a spectral system has total spectrum Δ
        let delta = BTreeSet::from([PrimeId::ROOT, p]);
        let l = canonicalize(&t, &length_of_system(&spectral_system(&t, &delta).unwrap())).unwrap();
        assert_eq!(total_spectrum(&t, &l), delta);
    }

    #[test]
    fn quasi_and_pseudo_spectra() {
        let (t, p, m) = chain();
        let s = |l: CanonicalLengthFn| SemistarStable::new(zero_locus(&t, &l).unwrap());
        let tm = s(CanonicalLengthFn::torsion([PrimeId::ROOT, p, m]));
        assert_eq!(quasi_spectrum(&tm, &t), BTreeSet::from([PrimeId::ROOT, p, m]));
        assert!(pseudo_spectrum(&tm, &t).is_empty());
        let mut im = CanonicalLengthFn::torsion([PrimeId::ROOT, p]);
        im.sigma_i.insert(m);
        let im = s(im);
        assert_eq!(quasi_spectrum(&im, &t), BTreeSet::from([PrimeId::ROOT, p]));
        assert_eq!(pseudo_spectrum(&im, &t), BTreeSet::from([m]));
        let all = SemistarStable::new(LocalizingSystem::all_ideals());
        assert!(quasi_spectrum(&all, &t).is_empty() && pseudo_spectrum(&all, &t).is_empty());
    }

    #[test]
    fn normalized_and_infimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (t, p, m) = chain();
        let delta = BTreeSet::from([PrimeId::ROOT, p]);
        let spectral = SemistarStable::new(spectral_system(&t, &delta).unwrap());
        let hat = normalized_stable(&spectral, &t);
        let mut l = CanonicalLengthFn::torsion([PrimeId::ROOT]);
        l.sigma_i.insert(p);
        let s = SemistarStable::new(zero_locus(&t, &l).unwrap());
        let s_hat = normalized_stable(&s, &t);
        let sh = sharp(&t, &l);
        let tp = SemistarStable::new(zero_locus(&t, &CanonicalLengthFn::torsion([PrimeId::ROOT, p])).unwrap());
        let tm = SemistarStable::new(zero_locus(&t, &CanonicalLengthFn::torsion([PrimeId::ROOT, p, m])).unwrap());
        let inf = infimum_of_systems(&[tp.clone(), tm.clone()]).unwrap();
        let with_all = infimum_of_systems(&[tp.clone(), SemistarStable::new(LocalizingSystem::all_ideals())]).unwrap();
        for _ in 0..200 {
            let i = random_ideal(&mut rng, &t);
            assert_eq!(hat.contains_one(&i), spectral.contains_one(&i));
            assert_eq!(s_hat.contains_one(&i), sh.eval(&i).is_zero());
            assert_eq!(with_all.contains_one(&i), tp.contains_one(&i));
            let summed = Evaluator::new(&t, CanonicalLengthFn::torsion([PrimeId::ROOT, p])).eval(&i)
                + Evaluator::new(&t, CanonicalLengthFn::torsion([PrimeId::ROOT, p, m])).eval(&i);
            assert_eq!(inf.contains_one(&i), summed.is_zero());
        }
        assert_eq!(infimum_of_systems(&[]).unwrap_err(), LocsysError::EmptyFamily);
    }

    #[test]
    fn example_ad_cases() {
        let model = InfiniteOneDimSpectrum::almost_dedekind();
        let l = OneDimWeights::new(BTreeMap::from([(1, GammaValue::Infinity)]), GammaValue::zero()).unwrap();
        let i = OneDimIdeal::FiniteSupport(BTreeMap::from([(1, Cut::inclusive(2)), (2, Cut::inclusive(1))]));
        let s = example_ad(model, &l, &i).unwrap();
        assert_eq!((s.global, s.local), (GammaValue::Infinity, GammaValue::Infinity));
        let s = example_ad(model, &l, &OneDimIdeal::Unit).unwrap();
        assert_eq!((s.global, s.local), (GammaValue::zero(), GammaValue::zero()));
        let i = OneDimIdeal::FiniteSupport(BTreeMap::from([(3, Cut::inclusive(1))]));
        let s = example_ad(model, &l, &i).unwrap();
        assert_eq!((s.global, s.local), (GammaValue::zero(), GammaValue::zero()));
        assert!(OneDimWeights::new(BTreeMap::new(), GammaValue::one()).is_err());
    }

    #[test]
    fn example_global_witness() {
        let r = example_global(InfiniteOneDimSpectrum::algebraic_integers()).unwrap();
        assert_eq!(r.sigma, vec!["(0)".to_string()]);
        assert_eq!(r.witness.ideal, OneDimIdeal::PrincipalNonunit);
        assert_eq!((r.witness.global.clone(), r.witness.local.clone()), (GammaValue::Infinity, GammaValue::zero()));
        for row in &r.rows {
            if matches!(row.ideal, OneDimIdeal::Unit | OneDimIdeal::FiniteSupport(_)) {
                assert_eq!((row.global.clone(), row.local.clone()), (GammaValue::zero(), GammaValue::zero()));
            }
        }
        assert!(example_global(InfiniteOneDimSpectrum::almost_dedekind()).is_err());
    }
}
