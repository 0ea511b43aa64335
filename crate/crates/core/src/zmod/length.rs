//! Length functions on modules over the integers and their decomposition
//! along the localizations at primes.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

use super::arith::{factorize, is_prime, nth_prime, valuation};
use super::module::FgZModule;
use crate::gamma::{family_sum, GammaFamily, GammaValue, Multiplicity, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZLengthError {
    #[error("{0} is not prime")]
    NotPrime(BigUint),
    #[error("rank multiple must be positive")]
    NonPositiveRankMultiple,
    #[error("localization is only defined for length functions with infinite value on Z")]
    RankMultipleNotLocalizable,
    #[error("prime {0} occurs in more than one part")]
    OverlappingParts(BigUint),
    #[error("part indexed by {key} is supported outside that prime")]
    ForeignSupport { key: BigUint },
    #[error("ideal must be nonzero")]
    ZeroIdeal,
}

/// A length function on modules over the integers.
///
/// `RankMultiple(α)` is `α · rank`. `InfiniteType` has value `∞` on `Z` and
/// weight `c_p = ℓ(Z/p)` at each prime: listed explicitly or given by
/// `default` for every unlisted prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZLengthFn {
    RankMultiple(Rational),
    InfiniteType { weights: BTreeMap<BigUint, GammaValue>, default: GammaValue },
}

impl ZLengthFn {
    pub fn rank_multiple(alpha: Rational) -> Result<Self, ZLengthError> {
        if alpha <= Rational::zero() {
            return Err(ZLengthError::NonPositiveRankMultiple);
        }
        Ok(ZLengthFn::RankMultiple(alpha))
    }

    /// Checks primality of the keys and drops entries equal to the default.
    pub fn infinite(
        weights: impl IntoIterator<Item = (BigUint, GammaValue)>,
        default: GammaValue,
    ) -> Result<Self, ZLengthError> {
        let mut map = BTreeMap::new();
        for (p, c) in weights {
            if !is_prime(&p) {
                return Err(ZLengthError::NotPrime(p));
            }
            if c != default {
                map.insert(p, c);
            }
        }
        Ok(ZLengthFn::InfiniteType { weights: map, default })
    }

    /// Infinite-type function with small-integer prime keys.
    pub fn weights(entries: &[(u64, GammaValue)], default: GammaValue) -> Self {
        Self::infinite(entries.iter().map(|(p, c)| (BigUint::from(*p), c.clone())), default)
            .expect("keys must be prime")
    }

    /// Jordan–Hölder length: every weight 1.
    pub fn composition_length() -> Self {
        ZLengthFn::InfiniteType { weights: BTreeMap::new(), default: GammaValue::one() }
    }

    pub fn weight(&self, p: &BigUint) -> GammaValue {
        match self {
            ZLengthFn::RankMultiple(_) => GammaValue::zero(),
            ZLengthFn::InfiniteType { weights, default } => {
                weights.get(p).cloned().unwrap_or_else(|| default.clone())
            }
        }
    }

    pub fn is_singular(&self) -> bool {
        match self {
            ZLengthFn::RankMultiple(_) => false,
            ZLengthFn::InfiniteType { weights, default } => weights
                .values()
                .chain(std::iter::once(default))
                .all(|c| c.is_zero() || c.is_infinite()),
        }
    }
}

pub fn eval_z(l: &ZLengthFn, m: &FgZModule) -> GammaValue {
    match l {
        ZLengthFn::RankMultiple(alpha) => {
            GammaValue::Finite(alpha * BigInt::from(m.rank()))
        }
        ZLengthFn::InfiniteType { .. } => {
            if m.rank() > 0 {
                return GammaValue::Infinity;
            }
            let mut family = GammaFamily::new();
            for d in m.invariant_factors() {
                for (p, k) in factorize(d) {
                    family.push(l.weight(&p), Multiplicity::Finite(u64::from(k)));
                }
            }
            family_sum(&family)
        }
    }
}

/// `ℓ ⊗ Z_(p)`: keeps the weight at `p` and zeroes every other prime.
pub fn localize_fn(l: &ZLengthFn, p: &BigUint) -> Result<ZLengthFn, ZLengthError> {
    if !is_prime(p) {
        return Err(ZLengthError::NotPrime(p.clone()));
    }
    match l {
        ZLengthFn::RankMultiple(_) => Err(ZLengthError::RankMultipleNotLocalizable),
        ZLengthFn::InfiniteType { .. } => {
            ZLengthFn::infinite([(p.clone(), l.weight(p))], GammaValue::zero())
        }
    }
}

/// Value of `ℓ ⊗ Z_(p)` on `m`, i.e. `ℓ(m ⊗ Z_(p))`; defined for both kinds.
pub fn eval_localized(l: &ZLengthFn, p: &BigUint, m: &FgZModule) -> GammaValue {
    match l {
        // localization keeps the rank
        ZLengthFn::RankMultiple(_) => eval_z(l, m),
        ZLengthFn::InfiniteType { .. } => {
            eval_z(&localize_fn(l, p).expect("prime checked by caller"), m)
        }
    }
}

/// The family `{ℓ ⊗ Z_(p)}` indexed by primes, with a uniform rule for the
/// infinitely many unlisted primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JaffardParts {
    pub parts: BTreeMap<BigUint, ZLengthFn>,
    /// Every unlisted prime `q` carries the part `{q ↦ default}`.
    pub default: GammaValue,
}

pub fn jaffard_split(l: &ZLengthFn) -> Result<JaffardParts, ZLengthError> {
    match l {
        ZLengthFn::RankMultiple(_) => Err(ZLengthError::RankMultipleNotLocalizable),
        ZLengthFn::InfiniteType { weights, default } => {
            let mut parts = BTreeMap::new();
            for p in weights.keys() {
                parts.insert(p.clone(), localize_fn(l, p)?);
            }
            Ok(JaffardParts { parts, default: default.clone() })
        }
    }
}

/// Inverse of [`jaffard_split`]. Each part must be a one-prime descriptor
/// supported at its key; keys must be distinct.
pub fn jaffard_merge(
    parts: &[(BigUint, ZLengthFn)],
    default: GammaValue,
) -> Result<ZLengthFn, ZLengthError> {
    let mut weights = BTreeMap::new();
    for (p, part) in parts {
        if !is_prime(p) {
            return Err(ZLengthError::NotPrime(p.clone()));
        }
        let ZLengthFn::InfiniteType { weights: w, default: d } = part else {
            return Err(ZLengthError::RankMultipleNotLocalizable);
        };
        if !d.is_zero() || w.keys().any(|q| q != p) {
            return Err(ZLengthError::ForeignSupport { key: p.clone() });
        }
        if weights.insert(p.clone(), part.weight(p)).is_some() {
            return Err(ZLengthError::OverlappingParts(p.clone()));
        }
    }
    ZLengthFn::infinite(weights, default)
}

impl JaffardParts {
    pub fn merge(&self) -> Result<ZLengthFn, ZLengthError> {
        let parts: Vec<_> = self.parts.iter().map(|(p, l)| (p.clone(), l.clone())).collect();
        jaffard_merge(&parts, self.default.clone())
    }
}

/// `Σ_p (ℓ ⊗ Z_(p))(m)` as a family sum over all primes: the primes dividing
/// the torsion explicitly, every other prime as one infinitely repeated term.
pub fn jaffard_sum(l: &ZLengthFn, m: &FgZModule) -> GammaValue {
    let mut family = GammaFamily::new();
    let mut seen = std::collections::BTreeSet::new();
    for d in m.invariant_factors() {
        for (p, _) in factorize(d) {
            seen.insert(p);
        }
    }
    for p in &seen {
        family.push(eval_localized(l, p, m), Multiplicity::Finite(1));
    }
    // a prime coprime to the torsion sees only the free part
    let rest = match l {
        ZLengthFn::RankMultiple(_) => eval_z(l, &FgZModule::free(m.rank())),
        ZLengthFn::InfiniteType { .. } if m.rank() > 0 => GammaValue::Infinity,
        ZLengthFn::InfiniteType { .. } => GammaValue::zero(),
    };
    family.push(rest, Multiplicity::Infinite);
    family_sum(&family)
}

/// `n = Π p^k`, sorted by prime.
pub fn crt_decompose(n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1);
    factorize(&BigUint::from(n))
        .into_iter()
        .map(|(p, k)| (u64::try_from(&p).expect("factor of a u64"), k))
        .collect()
}

/// Ideal `nZ`; `0` is the zero ideal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZIdeal(pub u64);

impl ZIdeal {
    pub fn quotient(&self) -> FgZModule {
        FgZModule::cyclic(self.0)
    }

    pub fn sum(&self, other: &ZIdeal) -> ZIdeal {
        ZIdeal(self.0.gcd(&other.0))
    }

    pub fn intersect(&self, other: &ZIdeal) -> ZIdeal {
        if self.0 == 0 || other.0 == 0 {
            ZIdeal(0)
        } else {
            ZIdeal(self.0.lcm(&other.0))
        }
    }

    /// `(self : x) = {y | xy ∈ self}`.
    pub fn colon(&self, x: u64) -> ZIdeal {
        if self.0 == 0 {
            return if x == 0 { ZIdeal(1) } else { ZIdeal(0) };
        }
        ZIdeal(self.0 / self.0.gcd(&x))
    }

    pub fn contains(&self, other: &ZIdeal) -> bool {
        match (self.0, other.0) {
            (_, 0) => true,
            (0, _) => false,
            (a, b) => b % a == 0,
        }
    }
}

/// Both sides of `ℓ(R/I) + ℓ(R/J) = ℓ(R/(I+J)) + ℓ(R/(I∩J))`.
pub fn grassmann_sides(l: &ZLengthFn, i: ZIdeal, j: ZIdeal) -> (GammaValue, GammaValue) {
    let lhs = eval_z(l, &i.quotient()) + eval_z(l, &j.quotient());
    let rhs = eval_z(l, &i.sum(&j).quotient()) + eval_z(l, &i.intersect(&j).quotient());
    (lhs, rhs)
}

pub fn grassmann_check(l: &ZLengthFn, i: ZIdeal, j: ZIdeal) -> bool {
    let (lhs, rhs) = grassmann_sides(l, i, j);
    lhs == rhs
}

/// Both sides of `ℓ(Z/n) = Σ ℓ(Z/p^k)` over the primary decomposition.
pub fn primary_decomp_sides(l: &ZLengthFn, i: ZIdeal) -> Result<(GammaValue, GammaValue), ZLengthError> {
    if i.0 == 0 {
        return Err(ZLengthError::ZeroIdeal);
    }
    let whole = eval_z(l, &i.quotient());
    let parts = crt_decompose(i.0)
        .into_iter()
        .map(|(p, k)| eval_z(l, &FgZModule::cyclic(p.pow(k))))
        .sum();
    Ok((whole, parts))
}

pub fn primary_decomp_check(l: &ZLengthFn, i: ZIdeal) -> Result<bool, ZLengthError> {
    let (a, b) = primary_decomp_sides(l, i)?;
    Ok(a == b)
}

/// `ℓ⊗Q`, the contribution of the zero prime: `ℓ(m ⊗ Q)`.
pub fn eval_at_generic_point(l: &ZLengthFn, m: &FgZModule) -> GammaValue {
    eval_z(l, &FgZModule::free(m.rank()))
}

/// Whether the prime `pZ` (or `(0)` for `None`) has positive value `ℓ(Z/P)`.
pub fn in_noetherian_support(l: &ZLengthFn, p: Option<&BigUint>) -> bool {
    match p {
        None => !eval_z(l, &FgZModule::free(1)).is_zero(),
        Some(p) => !l.weight(p).is_zero(),
    }
}

/// `Σ_{P ∈ Σ(ℓ)} (ℓ ⊗ Z_P)(m)` with `Σ(ℓ) = {P | ℓ(Z/P) > 0}`. Primes in the
/// support that do not divide the torsion contribute `ℓ(m ⊗ Z_(p))` which
/// only sees the free part; they are summed as one infinite family.
pub fn noetherian_sum(l: &ZLengthFn, m: &FgZModule) -> GammaValue {
    let mut family = GammaFamily::new();
    if in_noetherian_support(l, None) {
        family.push(eval_at_generic_point(l, m), Multiplicity::Finite(1));
    }
    let mut dividing = std::collections::BTreeSet::new();
    for d in m.invariant_factors() {
        for (p, _) in factorize(d) {
            dividing.insert(p);
        }
    }
    for p in &dividing {
        if in_noetherian_support(l, Some(p)) {
            family.push(eval_localized(l, p, m), Multiplicity::Finite(1));
        }
    }
    let free_part = eval_z(l, &FgZModule::free(m.rank()));
    match l {
        ZLengthFn::InfiniteType { weights, default } => {
            let listed_support = weights
                .iter()
                .filter(|(p, c)| !c.is_zero() && !dividing.contains(*p))
                .count() as u64;
            family.push(free_part.clone(), Multiplicity::Finite(listed_support));
            if !default.is_zero() {
                family.push(free_part, Multiplicity::Infinite);
            }
        }
        ZLengthFn::RankMultiple(_) => {}
    }
    family_sum(&family)
}

/// A weight assignment on the sequence of primes `p_1 = 2, p_2 = 3, ...`,
/// either a finite descriptor or the geometric rule `c_{p_i} = scale·ratio^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZWeightFamily {
    Descriptor(ZLengthFn),
    Geometric { scale: Rational, ratio: Rational },
}

impl ZWeightFamily {
    /// The descriptor that agrees with the rule on the first `k` primes and
    /// is zero afterwards.
    pub fn truncate(&self, k: usize) -> ZLengthFn {
        match self {
            ZWeightFamily::Descriptor(l) => l.clone(),
            ZWeightFamily::Geometric { scale, ratio } => {
                let mut w = Vec::with_capacity(k);
                let mut c = scale.clone();
                for i in 1..=k {
                    c = &c * ratio;
                    w.push((BigUint::from(nth_prime(i)), GammaValue::Finite(c.clone())));
                }
                ZLengthFn::infinite(w, GammaValue::zero()).expect("generated primes")
            }
        }
    }
}

/// Whether the image of the length function is a discrete subset of Γ.
///
/// A finite descriptor has finitely many distinct finite weights, all
/// multiples of `1/L` for `L` the lcm of their denominators, so every value
/// lies in `(1/L)·N ∪ {∞}`. The geometric rule with `0 < ratio < 1` has
/// values `scale·ratio^i → 0` and partial sums accumulating at
/// `scale·ratio/(1 - ratio)`.
pub fn is_discrete_z(f: &ZWeightFamily) -> bool {
    match f {
        ZWeightFamily::Descriptor(_) => true,
        ZWeightFamily::Geometric { scale, ratio } => {
            scale.is_zero() || ratio.is_zero() || *ratio >= Rational::one()
        }
    }
}

/// Common unit of the finite weights of a descriptor (`1/L`); `None` when
/// no weight is positive and finite.
pub fn discreteness_unit(l: &ZLengthFn) -> Option<Rational> {
    let values: Vec<&Rational> = match l {
        ZLengthFn::RankMultiple(a) => vec![a],
        ZLengthFn::InfiniteType { weights, default } => weights
            .values()
            .chain(std::iter::once(default))
            .filter_map(GammaValue::as_finite)
            .filter(|q| !q.is_zero())
            .collect(),
    };
    if values.is_empty() {
        return None;
    }
    let lcm = values.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    Some(Rational::new(BigInt::one(), lcm))
}

/// Values `ℓ(⊕_{i ≤ k} Z/p_i)` for `k = 1..=n` and the exact supremum over
/// all `k` (the value on the infinite direct sum).
pub fn geometric_partial_sums(scale: &Rational, ratio: &Rational, n: usize) -> (Vec<GammaValue>, Rational) {
    let family = ZWeightFamily::Geometric { scale: scale.clone(), ratio: ratio.clone() };
    let l = family.truncate(n);
    let mut values = Vec::with_capacity(n);
    let mut module = FgZModule::zero();
    for i in 1..=n {
        module = module.direct_sum(&FgZModule::cyclic(nth_prime(i)));
        values.push(eval_z(&l, &module));
    }
    let sup = scale * ratio / (Rational::one() - ratio);
    (values, sup)
}

/// Compares `ℓ(M)` with `Σ_{T ∈ Θ} (ℓ ⊗ T)(M)` for `Θ` the localizations at
/// the given distinct primes.
pub fn overring_family_sides(l: &ZLengthFn, family: &[BigUint], m: &FgZModule) -> (GammaValue, GammaValue) {
    let sum = family.iter().map(|p| eval_localized(l, p, m)).sum();
    (eval_z(l, m), sum)
}

/// Random descriptor: mixes rank multiples, singular weights, and finite
/// rational weights on small primes.
pub fn random_z_length<R: Rng + ?Sized>(rng: &mut R) -> ZLengthFn {
    const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];
    let value = |rng: &mut R| -> GammaValue {
        match rng.gen_range(0..6) {
            0 => GammaValue::zero(),
            1 => GammaValue::Infinity,
            _ => GammaValue::ratio(rng.gen_range(0..=12), rng.gen_range(1..=6)),
        }
    };
    if rng.gen_ratio(3, 20) {
        return ZLengthFn::RankMultiple(Rational::new(
            BigInt::from(rng.gen_range(1..=9)),
            BigInt::from(rng.gen_range(1..=4)),
        ));
    }
    let default = value(rng);
    let mut weights = Vec::new();
    for &p in &PRIMES {
        if rng.gen_ratio(2, 5) {
            weights.push((p, value(rng)));
        }
    }
    ZLengthFn::weights(&weights, default)
}

/// The exponent of `p` in the torsion order.
pub fn torsion_valuation(m: &FgZModule, p: &BigUint) -> u32 {
    m.invariant_factors().iter().map(|d| valuation(d, p)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn g(n: i64, d: i64) -> GammaValue {
        GammaValue::ratio(n, d)
    }

    #[test]
    fn eval_examples() {
        let all_one = ZLengthFn::composition_length();
        assert_eq!(eval_z(&all_one, &FgZModule::cyclic(12)), g(3, 1));
        let rank = ZLengthFn::rank_multiple(Rational::one()).unwrap();
        assert_eq!(eval_z(&rank, &FgZModule::cyclic(12)), g(0, 1));
        let two_inf = ZLengthFn::weights(&[(2, GammaValue::Infinity)], GammaValue::zero());
        assert_eq!(eval_z(&two_inf, &FgZModule::cyclic(2)), GammaValue::Infinity);
        assert_eq!(eval_z(&two_inf, &FgZModule::cyclic(3)), g(0, 1));
    }

    #[test]
    fn localize_examples() {
        let all_one = ZLengthFn::composition_length();
        let at2 = localize_fn(&all_one, &b(2)).unwrap();
        assert_eq!(eval_z(&at2, &FgZModule::cyclic(12)), g(2, 1));
        let l = ZLengthFn::weights(&[(3, g(5, 1))], GammaValue::zero());
        assert_eq!(eval_z(&localize_fn(&l, &b(2)).unwrap(), &FgZModule::cyclic(9)), g(0, 1));
        let at5 = localize_fn(&all_one, &b(5)).unwrap();
        assert_eq!(eval_z(&at5, &FgZModule::free(1)), GammaValue::Infinity);
        let rank = ZLengthFn::RankMultiple(Rational::one());
        assert_eq!(localize_fn(&rank, &b(2)), Err(ZLengthError::RankMultipleNotLocalizable));
        assert_eq!(localize_fn(&all_one, &b(4)), Err(ZLengthError::NotPrime(b(4))));
    }

    #[test]
    fn split_and_merge_examples() {
        let l = ZLengthFn::weights(&[(2, g(1, 1)), (3, g(1, 2))], GammaValue::zero());
        let split = jaffard_split(&l).unwrap();
        assert_eq!(split.parts.len(), 2);
        assert_eq!(split.parts[&b(2)], ZLengthFn::weights(&[(2, g(1, 1))], GammaValue::zero()));
        assert_eq!(split.parts[&b(3)], ZLengthFn::weights(&[(3, g(1, 2))], GammaValue::zero()));
        assert_eq!(split.merge().unwrap(), l);

        let l = ZLengthFn::weights(&[(2, GammaValue::Infinity)], GammaValue::zero());
        assert_eq!(jaffard_split(&l).unwrap().merge().unwrap(), l);

        let merged = jaffard_merge(
            &[
                (b(2), ZLengthFn::weights(&[(2, g(1, 1))], GammaValue::zero())),
                (b(3), ZLengthFn::weights(&[(3, g(1, 1))], GammaValue::zero())),
            ],
            GammaValue::zero(),
        )
        .unwrap();
        assert_eq!(eval_z(&merged, &FgZModule::cyclic(6)), g(2, 1));
        // CRT: Z/6 = Z/2 + Z/3
        let crt = FgZModule::cyclic(2).direct_sum(&FgZModule::cyclic(3));
        assert_eq!(crt, FgZModule::cyclic(6));
    }

    #[test]
    fn merge_rejects_overlaps() {
        let part = ZLengthFn::weights(&[(2, g(1, 1))], GammaValue::zero());
        let err = jaffard_merge(&[(b(2), part.clone()), (b(2), part.clone())], GammaValue::zero());
        assert_eq!(err, Err(ZLengthError::OverlappingParts(b(2))));
        let err = jaffard_merge(&[(b(3), part)], GammaValue::zero());
        assert_eq!(err, Err(ZLengthError::ForeignSupport { key: b(3) }));
    }

    #[test]
    fn crt_examples() {
        assert_eq!(crt_decompose(12), vec![(2, 2), (3, 1)]);
        assert_eq!(crt_decompose(1), vec![]);
        assert_eq!(crt_decompose(7), vec![(7, 1)]);
    }

    #[test]
    fn grassmann_examples() {
        let all_one = ZLengthFn::composition_length();
        assert_eq!(grassmann_sides(&all_one, ZIdeal(4), ZIdeal(6)), (g(4, 1), g(4, 1)));
        assert!(grassmann_check(&all_one, ZIdeal(0), ZIdeal(0)));
        let two_inf = ZLengthFn::weights(&[(2, GammaValue::Infinity)], GammaValue::zero());
        assert_eq!(
            grassmann_sides(&two_inf, ZIdeal(2), ZIdeal(3)),
            (GammaValue::Infinity, GammaValue::Infinity)
        );
    }

    #[test]
    fn primary_decomposition_examples() {
        let all_one = ZLengthFn::composition_length();
        assert_eq!(primary_decomp_sides(&all_one, ZIdeal(36)).unwrap(), (g(4, 1), g(4, 1)));
        assert_eq!(primary_decomp_sides(&all_one, ZIdeal(1)).unwrap(), (g(0, 1), g(0, 1)));
        let l = ZLengthFn::weights(&[(5, g(1, 3))], GammaValue::zero());
        assert_eq!(primary_decomp_sides(&l, ZIdeal(50)).unwrap(), (g(2, 3), g(2, 3)));
        assert_eq!(primary_decomp_check(&l, ZIdeal(0)), Err(ZLengthError::ZeroIdeal));
    }

    #[test]
    fn discreteness_examples() {
        let l = ZLengthFn::weights(&[(2, g(1, 1)), (3, g(1, 1))], GammaValue::zero());
        assert!(is_discrete_z(&ZWeightFamily::Descriptor(l)));
        let rank = ZLengthFn::RankMultiple(Rational::one());
        assert!(is_discrete_z(&ZWeightFamily::Descriptor(rank)));
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let geo = ZWeightFamily::Geometric { scale: Rational::one(), ratio: half.clone() };
        assert!(!is_discrete_z(&geo));
        let t = geo.truncate(20);
        assert_eq!(t.weight(&b(71)), GammaValue::Finite(Rational::new(BigInt::one(), BigInt::from(1u64 << 20))));
        let (values, sup) = geometric_partial_sums(&Rational::one(), &half, 10);
        for (k, v) in values.iter().enumerate() {
            let expect = Rational::one() - Rational::new(BigInt::one(), BigInt::from(1u64 << (k + 1)));
            assert_eq!(*v, GammaValue::Finite(expect));
        }
        assert_eq!(sup, Rational::one());
    }

    #[test]
    fn rank_fails_two_member_decomposition() {
        let rank = ZLengthFn::RankMultiple(Rational::one());
        let (global, sum) = overring_family_sides(&rank, &[b(2), b(3)], &FgZModule::free(1));
        assert_eq!((global, sum), (g(1, 1), g(2, 1)));
    }

    #[test]
    fn colon_ideals() {
        assert_eq!(ZIdeal(12).colon(8), ZIdeal(3));
        assert_eq!(ZIdeal(12).colon(0), ZIdeal(1));
        assert_eq!(ZIdeal(0).colon(5), ZIdeal(0));
        assert!(ZIdeal(2).contains(&ZIdeal(6)));
        assert!(!ZIdeal(6).contains(&ZIdeal(2)));
    }
}
