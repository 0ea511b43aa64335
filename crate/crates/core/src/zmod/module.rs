//! Finitely generated abelian groups in invariant-factor normal form.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand::Rng;

use super::arith::factorize;
use super::matrix::{hermite_basis, is_unit, lattice_coordinates, smith_diagonal, IntMatrix};

/// `Z^rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k` with `d_1 | d_2 | ... | d_k` and every
/// `d_i ≥ 2`. Equality is isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FgZModule {
    rank: usize,
    invariant_factors: Vec<BigUint>,
}

impl FgZModule {
    pub fn zero() -> Self {
        FgZModule { rank: 0, invariant_factors: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        FgZModule { rank, invariant_factors: Vec::new() }
    }

    /// `Z/nZ`; `n = 0` gives `Z`.
    pub fn cyclic(n: u64) -> Self {
        match n {
            0 => FgZModule::free(1),
            1 => FgZModule::zero(),
            _ => FgZModule { rank: 0, invariant_factors: vec![BigUint::from(n)] },
        }
    }

    /// Builds the normal form from a rank and a list of cyclic orders (any
    /// order, units ignored) by regrouping elementary divisors.
    pub fn from_cyclic_orders(rank: usize, orders: &[BigUint]) -> Self {
        let mut by_prime: BTreeMap<BigUint, Vec<u32>> = BTreeMap::new();
        for n in orders {
            assert!(!n.is_zero(), "use the rank for free summands");
            for (p, k) in factorize(n) {
                by_prime.entry(p).or_default().push(k);
            }
        }
        let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![BigUint::one(); len];
        for (p, mut exps) in by_prime {
            exps.sort_unstable_by(|a, b| b.cmp(a));
            // largest exponents go to the last (largest) invariant factor
            for (slot, k) in exps.into_iter().enumerate() {
                factors[len - 1 - slot] *= p.pow(k);
            }
        }
        FgZModule { rank, invariant_factors: factors }
    }

    /// Validates a user-supplied normal form.
    pub fn new(rank: usize, invariant_factors: Vec<BigUint>) -> Result<Self, String> {
        for d in &invariant_factors {
            if *d < BigUint::from(2u32) {
                return Err(format!("invariant factor {d} must be at least 2"));
            }
        }
        for w in invariant_factors.windows(2) {
            if !(&w[1] % &w[0]).is_zero() {
                return Err(format!("{} does not divide {}", w[0], w[1]));
            }
        }
        Ok(FgZModule { rank, invariant_factors })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn invariant_factors(&self) -> &[BigUint] {
        &self.invariant_factors
    }

    pub fn is_torsion(&self) -> bool {
        self.rank == 0
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.invariant_factors.is_empty()
    }

    /// Cardinality of the torsion part.
    pub fn torsion_order(&self) -> BigUint {
        self.invariant_factors.iter().product()
    }

    pub fn direct_sum(&self, other: &FgZModule) -> FgZModule {
        let orders: Vec<BigUint> =
            self.invariant_factors.iter().chain(&other.invariant_factors).cloned().collect();
        FgZModule::from_cyclic_orders(self.rank + other.rank, &orders)
    }

    /// The `p`-primary part of the torsion submodule.
    pub fn primary_part(&self, p: &BigUint) -> FgZModule {
        let orders: Vec<BigUint> = self
            .invariant_factors
            .iter()
            .map(|d| {
                let mut q = BigUint::one();
                let mut d = d.clone();
                while (&d % p).is_zero() {
                    d /= p;
                    q *= p;
                }
                q
            })
            .filter(|q| !q.is_one())
            .collect();
        FgZModule::from_cyclic_orders(0, &orders)
    }
}

impl fmt::Display for FgZModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.invariant_factors.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Cokernel of the relation matrix (rows are relations on `cols`
/// generators), in normal form.
pub fn smith_normal_form(presentation: &IntMatrix) -> FgZModule {
    let diag = smith_diagonal(presentation);
    let rank = presentation.cols() - diag.len();
    let factors = diag
        .into_iter()
        .filter(|d| !is_unit(d))
        .map(|d| d.to_biguint().expect("Smith diagonal is positive"))
        .collect();
    FgZModule { rank, invariant_factors: factors }
}

/// `0 → sub → whole → quotient → 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactTriple {
    pub sub: FgZModule,
    pub whole: FgZModule,
    pub quotient: FgZModule,
}

/// For `whole = coker(presentation)` and the submodule generated by the
/// images of `generators` (rows over the same generators), computes the
/// submodule and quotient in normal form.
pub fn exact_sequence(presentation: &IntMatrix, generators: &IntMatrix) -> ExactTriple {
    assert_eq!(presentation.cols(), generators.cols());
    let whole = smith_normal_form(presentation);
    let stacked = presentation.vstack(generators);
    let quotient = smith_normal_form(&stacked);
    // sub = (span(relations) + span(generators)) / span(relations)
    let basis = hermite_basis(&stacked);
    let coords: Vec<Vec<BigInt>> = presentation
        .to_rows()
        .iter()
        .map(|r| lattice_coordinates(&basis, r).expect("relation lies in the joint lattice"))
        .collect();
    let sub = smith_normal_form(&IntMatrix::from_rows(basis.rows(), &coords));
    ExactTriple { sub, whole, quotient }
}

pub const RANDOM_ENTRY_BOUND: i64 = 50;
pub const RANDOM_MAX_DIM: usize = 6;

fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> IntMatrix {
    let sparse = rng.gen_ratio(1, 2);
    let mut m = IntMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            if !sparse || rng.gen_ratio(7, 20) {
                m[(i, j)] = BigInt::from(rng.gen_range(-RANDOM_ENTRY_BOUND..=RANDOM_ENTRY_BOUND));
            }
        }
    }
    m
}

/// A random presentation with entries in `[-50, 50]` and at most six
/// generators and relations, plus a random set of submodule generators.
pub fn random_presentation<R: Rng + ?Sized>(rng: &mut R) -> (IntMatrix, IntMatrix) {
    let cols = rng.gen_range(1..=RANDOM_MAX_DIM);
    let rows = rng.gen_range(0..=RANDOM_MAX_DIM);
    let gens = rng.gen_range(0..=4);
    (random_matrix(rng, rows, cols), random_matrix(rng, gens, cols))
}

pub fn random_exact_sequence<R: Rng + ?Sized>(rng: &mut R) -> ExactTriple {
    let (presentation, generators) = random_presentation(rng);
    exact_sequence(&presentation, &generators)
}

/// A random module as the cokernel of a random presentation.
pub fn random_module<R: Rng + ?Sized>(rng: &mut R) -> FgZModule {
    smith_normal_form(&random_presentation(rng).0)
}

/// Random module whose torsion orders are products of small primes, which
/// gives richer invariant-factor chains than dense random presentations.
pub fn random_smooth_module<R: Rng + ?Sized>(rng: &mut R) -> FgZModule {
    const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];
    let rank = if rng.gen_ratio(1, 4) { rng.gen_range(1..=2) } else { 0 };
    let orders: Vec<BigUint> = (0..rng.gen_range(0..=4))
        .map(|_| {
            let mut n = BigUint::one();
            for _ in 0..rng.gen_range(1..=4) {
                n *= PRIMES[rng.gen_range(0..PRIMES.len())];
            }
            n
        })
        .collect();
    FgZModule::from_cyclic_orders(rank, &orders)
}
