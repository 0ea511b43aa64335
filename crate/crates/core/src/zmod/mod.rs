//! The concrete backend: modules over the integers.

pub mod arith;
pub mod length;
pub mod matrix;
pub mod module;

pub use length::{
    crt_decompose, eval_localized, eval_z, grassmann_check, grassmann_sides, is_discrete_z,
    jaffard_merge, jaffard_split, jaffard_sum, localize_fn, noetherian_sum,
    overring_family_sides, primary_decomp_check, primary_decomp_sides, random_z_length,
    JaffardParts, ZIdeal, ZLengthError, ZLengthFn, ZWeightFamily,
};
pub use matrix::IntMatrix;
pub use module::{
    exact_sequence, random_exact_sequence, random_module, random_smooth_module,
    smith_normal_form, ExactTriple, FgZModule,
};

use num_integer::Integer;

/// Divisors of `n > 0` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// The distinct colon ideals `(bZ : i)` as `i` runs over `aZ`, for `a, b > 0`.
///
/// With `g = gcd(a, b)`, `gcd(b, a·k) = g·gcd(b/g, k)` because `a/g` is
/// coprime to `b/g`; so the colons are `(b/(g·d))Z` for `d | b/g`.
pub fn colon_family(a: u64, b: u64) -> Vec<ZIdeal> {
    let g = a.gcd(&b);
    divisors(b / g).into_iter().map(|d| ZIdeal(b / (g * d))).collect()
}

/// A violation of the localizing-system axioms by the zero locus of `l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    UpwardClosure { member: u64, larger: u64 },
    Colon { member: u64, target: u64 },
}

/// Checks both localizing-system axioms for `F = {nZ | ℓ(Z/n) = 0}` over all
/// nonzero ideals with generators at most `bound`.
pub fn check_localizing_axioms(l: &ZLengthFn, bound: u64) -> Result<(), AxiomViolation> {
    let member: Vec<bool> = (0..=bound)
        .map(|n| n != 0 && eval_z(l, &FgZModule::cyclic(n)).is_zero())
        .collect();
    let in_f = |n: u64| -> bool {
        if n <= bound {
            member[n as usize]
        } else {
            eval_z(l, &FgZModule::cyclic(n)).is_zero()
        }
    };
    for n in 1..=bound {
        if !member[n as usize] {
            continue;
        }
        // nZ ⊆ mZ iff m | n
        for m in divisors(n) {
            if !in_f(m) {
                return Err(AxiomViolation::UpwardClosure { member: n, larger: m });
            }
        }
    }
    for a in 1..=bound {
        if !member[a as usize] {
            continue;
        }
        for b in 1..=bound {
            if member[b as usize] {
                continue;
            }
            // premise: every colon (bZ : i), i ∈ aZ, lies in F
            if colon_family(a, b).iter().all(|c| in_f(c.0)) {
                return Err(AxiomViolation::Colon { member: a, target: b });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::GammaValue;
    use std::collections::BTreeSet;

    #[test]
    fn colon_family_matches_enumeration() {
        for a in 1..=40u64 {
            for b in 1..=40u64 {
                let brute: BTreeSet<ZIdeal> =
                    (1..=a * b).map(|k| ZIdeal(b).colon(a * k)).collect();
                let fast: BTreeSet<ZIdeal> = colon_family(a, b).into_iter().collect();
                assert_eq!(brute, fast, "a = {a}, b = {b}");
            }
        }
    }

    #[test]
    fn zero_locus_axioms_for_singular_weights() {
        let l = ZLengthFn::weights(&[(2, GammaValue::Infinity), (7, GammaValue::Infinity)], GammaValue::zero());
        assert_eq!(check_localizing_axioms(&l, 300), Ok(()));
        let l = ZLengthFn::weights(&[(3, GammaValue::zero())], GammaValue::Infinity);
        assert_eq!(check_localizing_axioms(&l, 300), Ok(()));
    }
}
