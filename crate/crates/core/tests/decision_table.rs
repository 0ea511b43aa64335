//! Brute force over every class assignment on chains `(0) < P` and
//! `(0) < P < M`. Values come from a direct chain model written here, not
//! from the library's evaluator.

use lencalc_core::gamma::{GammaValue, Rational};
use lencalc_core::ideals::{Cut, IdealDescriptor};
use lencalc_core::lengths::{canonicalize, eval, validate_canonical, CanonicalLengthFn, CanonicalizeError};
use lencalc_core::spectrum::{PieceKind, PrimeId, PrimeNode, SpectrumTree};
use num_bigint::BigInt;
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq)]
enum Class {
    Absent,
    T,
    I,
    R(Rational),
    V(Rational),
}

/// An ideal of a chain: 0, the unit, or primary at level `k` (1-based)
/// with valuation cut `v ≥ g` or `v > g`.
#[derive(Debug, Clone)]
enum ChainIdeal {
    Zero,
    Unit,
    Primary { level: usize, gamma: Rational, inclusive: bool },
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Cuts to try on each kind, prime itself first.
fn cuts(kind: PieceKind) -> Vec<(Rational, bool)> {
    match kind {
        PieceKind::Discrete => vec![(q(1, 1), true), (q(2, 1), true), (q(3, 1), true)],
        PieceKind::Dense => vec![(q(0, 1), false), (q(1, 2), false), (q(1, 2), true), (q(1, 1), true), (q(2, 1), false)],
        PieceKind::Unbranched => vec![(q(0, 1), false)],
    }
}

fn ideals(kinds: &[PieceKind]) -> Vec<ChainIdeal> {
    let mut out = vec![ChainIdeal::Zero, ChainIdeal::Unit];
    for (k, &kind) in kinds.iter().enumerate() {
        for (gamma, inclusive) in cuts(kind) {
            out.push(ChainIdeal::Primary { level: k + 1, gamma, inclusive });
        }
    }
    out
}

/// `t`, `i`, `r`, `v` at level `at` (0 is the zero prime) on `D/I`.
fn class_value(kinds: &[PieceKind], at: usize, class: &Class, i: &ChainIdeal) -> GammaValue {
    // radical level of I, with the unit at "above everything"
    let (level, gamma, inclusive) = match i {
        ChainIdeal::Unit => return GammaValue::zero(),
        ChainIdeal::Zero => (0, Rational::zero(), false),
        ChainIdeal::Primary { level, gamma, inclusive } => (*level, gamma.clone(), *inclusive),
    };
    if level > at {
        // I ⊄ P_at
        return GammaValue::zero();
    }
    // the prime itself: v ≥ 1 on a discrete piece, v > 0 otherwise
    let is_prime_itself = level == at
        && (at == 0
            || match kinds[at - 1] {
                PieceKind::Discrete => gamma == q(1, 1),
                _ => gamma.is_zero() && !inclusive,
            });
    let below = level < at;
    match class {
        Class::Absent => GammaValue::zero(),
        Class::T => GammaValue::Infinity,
        Class::I if is_prime_itself && !below => GammaValue::zero(),
        Class::I => GammaValue::Infinity,
        Class::R(a) if !below && is_prime_itself => GammaValue::Finite(a.clone()),
        Class::R(_) => GammaValue::Infinity,
        Class::V(_) if below => GammaValue::Infinity,
        Class::V(l) => GammaValue::Finite(l * gamma),
    }
}

fn chain_value(kinds: &[PieceKind], classes: &[Class], i: &ChainIdeal) -> GammaValue {
    classes.iter().enumerate().map(|(at, c)| class_value(kinds, at, c, i)).sum()
}

fn tree(kinds: &[PieceKind]) -> SpectrumTree {
    let names = ["P", "M"];
    let nodes: Vec<PrimeNode> = kinds
        .iter()
        .enumerate()
        .map(|(k, &kind)| PrimeNode::new(names[k], k.checked_sub(1).map(|j| names[j]), kind))
        .collect();
    SpectrumTree::from_nodes(&nodes).unwrap()
}

fn descriptor(t: &SpectrumTree, i: &ChainIdeal) -> IdealDescriptor {
    match i {
        ChainIdeal::Zero => IdealDescriptor::Zero,
        ChainIdeal::Unit => IdealDescriptor::unit(),
        ChainIdeal::Primary { level, gamma, inclusive } => {
            IdealDescriptor::from_components(t, [(PrimeId(*level), Cut::raw(gamma.clone(), *inclusive))]).unwrap()
        }
    }
}

fn to_canonical(classes: &[Class]) -> CanonicalLengthFn {
    let mut l = CanonicalLengthFn::zero();
    for (k, c) in classes.iter().enumerate() {
        let p = PrimeId(k);
        match c {
            Class::Absent => {}
            Class::T => {
                l.sigma_t.insert(p);
            }
            Class::I => {
                l.sigma_i.insert(p);
            }
            Class::R(a) => {
                l.sigma_r.insert(p, a.clone());
            }
            Class::V(a) => {
                l.sigma_v.insert(p, a.clone());
            }
        }
    }
    l
}

fn all_classes() -> Vec<Class> {
    vec![Class::Absent, Class::T, Class::I, Class::R(q(1, 2)), Class::R(q(3, 1)), Class::V(q(1, 2)), Class::V(q(3, 1))]
}

/// Every assignment of classes to `(0), P, [M]`.
fn assignments(len: usize) -> Vec<Vec<Class>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                all_classes().into_iter().map(move |c| {
                    let mut v = prefix.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    out
}

fn chains() -> Vec<Vec<PieceKind>> {
    use PieceKind::*;
    let mut out = vec![vec![Discrete], vec![Dense]];
    for p in [Discrete, Dense] {
        for m in [Discrete, Dense, Unbranched] {
            out.push(vec![p, m]);
        }
    }
    out
}

#[test]
fn evaluation_matches_the_chain_model_for_every_assignment() {
    for kinds in chains() {
        let t = tree(&kinds);
        let ideals = ideals(&kinds);
        for classes in assignments(kinds.len() + 1) {
            let l = to_canonical(&classes);
            for i in &ideals {
                assert_eq!(
                    eval(&t, &l, &descriptor(&t, i)),
                    chain_value(&kinds, &classes, i),
                    "kinds {kinds:?}, classes {classes:?}, ideal {i:?}"
                );
            }
        }
    }
}

#[test]
fn canonicalize_recovers_every_valid_assignment_and_rejects_the_rest() {
    let mut valid = 0;
    for kinds in chains() {
        let t = tree(&kinds);
        for classes in assignments(kinds.len() + 1) {
            let l = to_canonical(&classes);
            let oracle = |i: &IdealDescriptor| -> GammaValue {
                let chain = match i.components() {
                    None => ChainIdeal::Zero,
                    Some(m) if m.is_empty() => ChainIdeal::Unit,
                    Some(m) => {
                        let (p, c) = m.iter().next().unwrap();
                        ChainIdeal::Primary { level: p.0, gamma: c.gamma().clone(), inclusive: c.is_inclusive() }
                    }
                };
                chain_value(&kinds, &classes, &chain)
            };
            let got = canonicalize(&t, &oracle);
            if validate_canonical(&t, &l).is_ok() {
                valid += 1;
                assert_eq!(got, Ok(l), "kinds {kinds:?}, classes {classes:?}");
                continue;
            }
            // an invalid assignment either fails or names a valid form with
            // the same values on every chain ideal
            match got {
                Err(CanonicalizeError::Inconsistent { .. }) | Err(CanonicalizeError::NotCanonical(_)) => {}
                Ok(other) => {
                    assert!(validate_canonical(&t, &other).is_ok());
                    for i in ideals(&kinds) {
                        assert_eq!(
                            eval(&t, &other, &descriptor(&t, &i)),
                            chain_value(&kinds, &classes, &i),
                            "kinds {kinds:?}, classes {classes:?} canonicalized to {other:?}"
                        );
                    }
                }
            }
        }
    }
    assert!(valid > 50, "only {valid} valid assignments");
}

#[test]
fn discrete_rank_and_idempotent_signatures_are_inconsistent() {
    let kinds = [PieceKind::Discrete];
    let t = tree(&kinds);
    for bad in [Class::R(q(1, 1)), Class::I] {
        let classes = [Class::T, bad.clone()];
        let oracle = |i: &IdealDescriptor| -> GammaValue {
            let chain = match i.components() {
                None => ChainIdeal::Zero,
                Some(m) if m.is_empty() => ChainIdeal::Unit,
                Some(m) => {
                    let c = m.values().next().unwrap();
                    ChainIdeal::Primary { level: 1, gamma: c.gamma().clone(), inclusive: c.is_inclusive() }
                }
            };
            chain_value(&kinds, &classes, &chain)
        };
        assert!(
            matches!(canonicalize(&t, &oracle), Err(CanonicalizeError::Inconsistent { .. })),
            "{bad:?} at a discrete prime"
        );
    }
}
