//! Named randomized suites that check the decomposition theorems and their
//! companions, with deterministic reports.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::gamma::{GammaValue, Rational};
use crate::ideals::{
    intersect, is_primary_at, leq, radical, random_finite_support, random_ideal, sum, Cut, IdealDescriptor,
    OneDimIdeal,
};
use crate::io::{
    canonical_to_json, gamma_to_json, ideal_to_json, module_to_json, one_dim_ideal_to_json, spectrum_to_json,
    z_ideal_to_json, z_length_to_json,
};
use crate::lengths::{
    branch_merge, branch_split, canonicalize, eval, localize_length, random_canonical, random_relabeling,
    random_singular, sharp, total_spectrum, transport, validate_canonical, CanonicalLengthFn, Evaluator,
    LengthOracle,
};
use crate::locsys::{
    example_ad, example_global, infimum_of_systems, length_of_system, normalized_stable, quasi_spectrum,
    spectral_system, zero_locus, OneDimWeights, SemistarStable,
};
use crate::spectrum::{random_tree, InfiniteOneDimSpectrum, PieceKind, PrimeId, SpectrumTree};
use crate::zmod::length::{discreteness_unit, geometric_partial_sums};
use crate::zmod::{
    crt_decompose, eval_z, grassmann_sides, jaffard_split, jaffard_sum, overring_family_sides,
    primary_decomp_sides, random_exact_sequence, random_module, random_smooth_module, random_z_length,
    smith_normal_form, FgZModule, IntMatrix, ZIdeal, ZLengthFn, ZWeightFamily,
};

pub const SCENARIOS: [&str; 15] = [
    "additivity-z",
    "jaffard-z",
    "crt",
    "grassmann",
    "primary-decomp",
    "prufer-decomp",
    "uniqueness",
    "singular-bijection",
    "spectral",
    "widehat-sharp",
    "vicev-jaff",
    "non-discrete",
    "ex-ad",
    "ex-global",
    "transport",
];

/// Case counts used when none is given.
pub fn default_cases(name: &str) -> Option<usize> {
    Some(match name {
        "additivity-z" | "grassmann" => 1000,
        "jaffard-z" | "uniqueness" => 500,
        "crt" | "primary-decomp" => 5000,
        "prufer-decomp" | "transport" => 100,
        "singular-bijection" | "spectral" | "widehat-sharp" | "vicev-jaff" => 50,
        "non-discrete" => 20,
        "ex-ad" => 200,
        "ex-global" => 1,
        _ => return None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("unknown scenario {0:?}")]
    Unknown(String),
    #[error("cases must be positive")]
    NoCases,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub case: usize,
    pub inputs: Value,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub scenario: String,
    pub seed: u64,
    pub cases: usize,
    pub passed: usize,
    pub failures: Vec<Failure>,
    /// Values the scenario exhibits, such as counterexample witnesses.
    pub witnesses: Vec<Value>,
    pub wall_time_ms: u64,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "scenario: {}\nseed: {}\ncases: {}\npassed: {}\nfailures: {}\n",
            self.scenario,
            self.seed,
            self.cases,
            self.passed,
            self.failures.len()
        );
        for f in &self.failures {
            out.push_str(&format!("  case {}: {}\n    inputs: {}\n", f.case, f.detail, f.inputs));
        }
        for w in &self.witnesses {
            out.push_str(&format!("witness: {w}\n"));
        }
        out.push_str(&format!("wall_time_ms: {}\n", self.wall_time_ms));
        out
    }
}

struct CaseFailure {
    inputs: Value,
    detail: String,
}

type CaseResult = Result<(), CaseFailure>;

fn check(ok: bool, inputs: impl FnOnce() -> Value, detail: impl FnOnce() -> String) -> CaseResult {
    if ok {
        Ok(())
    } else {
        Err(CaseFailure { inputs: inputs(), detail: detail() })
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Shared inputs of a run; cases draw from their own streams.
fn setup_rng(seed: u64) -> ChaCha8Rng {
    rng_for(seed, 0)
}

/// Runs `cases` cases in parallel, each on its own stream, and returns the
/// failures sorted by case index.
fn run_cases<F>(seed: u64, cases: usize, f: F) -> Vec<Failure>
where
    F: Fn(usize, &mut ChaCha8Rng) -> CaseResult + Sync,
{
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(cases).max(1);
    let run_one = |case: usize| -> Option<Failure> {
        let mut rng = rng_for(seed, case as u64 + 1);
        match catch_unwind(AssertUnwindSafe(|| f(case, &mut rng))) {
            Ok(Ok(())) => None,
            Ok(Err(e)) => Some(Failure { case, inputs: e.inputs, detail: e.detail }),
            Err(panic) => {
                let msg = panic
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                Some(Failure { case, inputs: Value::Null, detail: format!("panic: {msg}") })
            }
        }
    };
    let mut failures: Vec<Failure> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                let run_one = &run_one;
                s.spawn(move || (t..cases).step_by(threads).filter_map(run_one).collect::<Vec<_>>())
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("case worker")).collect()
    });
    failures.sort_by_key(|f| f.case);
    failures
}

struct Outcome {
    failures: Vec<Failure>,
    witnesses: Vec<Value>,
}

impl From<Vec<Failure>> for Outcome {
    fn from(failures: Vec<Failure>) -> Self {
        Outcome { failures, witnesses: Vec::new() }
    }
}

pub fn run_scenario(name: &str, seed: u64, cases: usize) -> Result<Report, ScenarioError> {
    if cases == 0 {
        return Err(ScenarioError::NoCases);
    }
    let start = Instant::now();
    let outcome: Outcome = match name {
        "additivity-z" => additivity_z(seed, cases).into(),
        "jaffard-z" => jaffard_z(seed, cases).into(),
        "crt" => crt(seed, cases).into(),
        "grassmann" => grassmann(seed, cases).into(),
        "primary-decomp" => primary_decomp(seed, cases).into(),
        "prufer-decomp" => prufer_decomp(seed, cases).into(),
        "uniqueness" => uniqueness(seed, cases).into(),
        "singular-bijection" => singular_bijection(seed, cases).into(),
        "spectral" => spectral(seed, cases).into(),
        "widehat-sharp" => widehat_sharp(seed, cases).into(),
        "vicev-jaff" => vicev_jaff(seed, cases),
        "non-discrete" => non_discrete(seed, cases),
        "ex-ad" => ex_ad(seed, cases),
        "ex-global" => ex_global(seed, cases),
        "transport" => transport_suite(seed, cases).into(),
        _ => return Err(ScenarioError::Unknown(name.to_string())),
    };
    Ok(Report {
        scenario: name.to_string(),
        seed,
        cases,
        passed: cases - outcome.failures.len(),
        failures: outcome.failures,
        witnesses: outcome.witnesses,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

const DESCRIPTORS: usize = 20;

fn z_descriptors(seed: u64) -> Vec<ZLengthFn> {
    let mut rng = setup_rng(seed);
    let mut out = vec![ZLengthFn::composition_length()];
    while out.len() < DESCRIPTORS {
        out.push(random_z_length(&mut rng));
    }
    out
}

fn random_infinite_z<R: Rng + ?Sized>(rng: &mut R) -> ZLengthFn {
    loop {
        let l = random_z_length(rng);
        if matches!(l, ZLengthFn::InfiniteType { .. }) {
            return l;
        }
    }
}

fn additivity_z(seed: u64, cases: usize) -> Vec<Failure> {
    let descriptors = z_descriptors(seed);
    run_cases(seed, cases, |_, rng| {
        let seq = random_exact_sequence(rng);
        for l in &descriptors {
            let whole = eval_z(l, &seq.whole);
            let parts = eval_z(l, &seq.sub) + eval_z(l, &seq.quotient);
            check(
                whole == parts,
                || {
                    json!({
                        "sub": module_to_json(&seq.sub),
                        "whole": module_to_json(&seq.whole),
                        "quotient": module_to_json(&seq.quotient),
                        "lengthfn": z_length_to_json(l),
                    })
                },
                || format!("l(M2) = {whole} but l(M1) + l(M3) = {parts}"),
            )?;
        }
        Ok(())
    })
}

fn jaffard_z(seed: u64, cases: usize) -> Vec<Failure> {
    run_cases(seed, cases, |case, rng| {
        let l = random_infinite_z(rng);
        let m = if case % 2 == 0 { random_module(rng) } else { random_smooth_module(rng) };
        let inputs = || json!({"lengthfn": z_length_to_json(&l), "module": module_to_json(&m)});
        let (global, local) = (eval_z(&l, &m), jaffard_sum(&l, &m));
        check(global == local, inputs, || format!("l(M) = {global} but the sum of localizations is {local}"))?;
        let parts = jaffard_split(&l).map_err(|e| CaseFailure { inputs: inputs(), detail: e.to_string() })?;
        let merged = parts.merge().map_err(|e| CaseFailure { inputs: inputs(), detail: e.to_string() })?;
        check(merged == l, inputs, || "merge(split(l)) differs from l".into())?;
        let again = jaffard_split(&merged).map_err(|e| CaseFailure { inputs: inputs(), detail: e.to_string() })?;
        check(again == parts, inputs, || "split(merge(parts)) differs from the parts".into())
    })
}

fn crt(seed: u64, cases: usize) -> Vec<Failure> {
    run_cases(seed, cases, |case, _| {
        let n = case as u64 + 1;
        let powers: Vec<BigInt> = crt_decompose(n).into_iter().map(|(p, k)| BigInt::from(p.pow(k))).collect();
        let product: BigInt = powers.iter().product();
        let split = smith_normal_form(&IntMatrix::diagonal(&powers));
        let cyclic = FgZModule::cyclic(n);
        check(
            product == BigInt::from(n) && split == cyclic,
            || json!({"n": n, "prime_powers": powers.iter().map(|q| q.to_string()).collect::<Vec<_>>()}),
            || format!("sum of prime-power cyclics is {split}, Z/{n} is {cyclic}"),
        )
    })
}

fn random_z_ideal<R: Rng + ?Sized>(rng: &mut R) -> ZIdeal {
    match rng.gen_range(0..10) {
        0 => ZIdeal(0),
        1 => ZIdeal(1),
        _ => ZIdeal(rng.gen_range(2..=720)),
    }
}

fn grassmann(seed: u64, cases: usize) -> Vec<Failure> {
    run_cases(seed, cases, |_, rng| {
        let l = random_z_length(rng);
        let (i, j) = (random_z_ideal(rng), random_z_ideal(rng));
        let (lhs, rhs) = grassmann_sides(&l, i, j);
        check(
            lhs == rhs,
            || json!({"backend": "integers", "lengthfn": z_length_to_json(&l), "i": z_ideal_to_json(i), "j": z_ideal_to_json(j)}),
            || format!("l(R/I) + l(R/J) = {lhs} but l(R/(I+J)) + l(R/(I∩J)) = {rhs}"),
        )?;
        let tree = random_tree(rng);
        let l = random_canonical(rng, &tree);
        let (i, j) = (random_ideal(rng, &tree), random_ideal(rng, &tree));
        let lhs = eval(&tree, &l, &i) + eval(&tree, &l, &j);
        let rhs = eval(&tree, &l, &sum(&tree, &i, &j)) + eval(&tree, &l, &intersect(&tree, &i, &j));
        check(
            lhs == rhs,
            || tree_inputs(&tree, &l, &[("i", &i), ("j", &j)]),
            || format!("l(D/I) + l(D/J) = {lhs} but l(D/(I+J)) + l(D/(I∩J)) = {rhs}"),
        )
    })
}

fn primary_decomp(seed: u64, cases: usize) -> Vec<Failure> {
    let descriptors = z_descriptors(seed);
    run_cases(seed, cases, |case, _| {
        let n = case as u64 + 1;
        for l in &descriptors {
            let (whole, parts) = primary_decomp_sides(l, ZIdeal(n)).expect("nonzero ideal");
            check(
                whole == parts,
                || json!({"n": n, "lengthfn": z_length_to_json(l)}),
                || format!("l(Z/n) = {whole} but the primary parts sum to {parts}"),
            )?;
        }
        Ok(())
    })
}

fn tree_inputs(tree: &SpectrumTree, l: &CanonicalLengthFn, ideals: &[(&str, &IdealDescriptor)]) -> Value {
    let mut v = json!({"spectrum": spectrum_to_json(tree), "lengthfn": canonical_to_json(tree, l)});
    for (name, i) in ideals {
        v[*name] = ideal_to_json(tree, i);
    }
    v
}

const PRUFER_FUNCTIONS: usize = 10;
const PRUFER_IDEALS: usize = 10;

fn prufer_decomp(seed: u64, cases: usize) -> Vec<Failure> {
    run_cases(seed, cases, |_, rng| {
        let tree = random_tree(rng);
        for _ in 0..PRUFER_FUNCTIONS {
            let l = random_canonical(rng, &tree);
            let s = sharp(&tree, &l);
            let split = branch_split(&tree, &l);
            check(
                branch_merge(&tree, &split).as_ref() == Ok(&l),
                || tree_inputs(&tree, &l, &[]),
                || "merge(split(l)) differs from l".into(),
            )?;
            let root_part = Evaluator::new(&tree, split.root.clone());
            for _ in 0..PRUFER_IDEALS {
                let i = random_ideal(rng, &tree);
                let inputs = || tree_inputs(&tree, &l, &[("ideal", &i)]);
                let value = eval(&tree, &l, &i);
                let local = s.eval(&i);
                check(value == local, inputs, || format!("l(D/I) = {value} but l#(D/I) = {local}"))?;
                let by_branch: GammaValue = split
                    .branches
                    .iter()
                    .map(|(_, part)| eval(&tree, part, &i))
                    .chain(std::iter::once(root_part.eval(&i)))
                    .sum();
                check(value == by_branch, inputs, || {
                    format!("l(D/I) = {value} but the branch parts sum to {by_branch}")
                })?;
                // incomparable primary components are comaximal
                if let Some(comps) = i.components().filter(|m| !m.is_empty()) {
                    let parts: GammaValue = comps
                        .iter()
                        .map(|(p, c)| eval(&tree, &l, &IdealDescriptor::Proper(BTreeMap::from([(*p, c.clone())]))))
                        .sum();
                    check(value == parts, inputs, || {
                        format!("l(D/I) = {value} but the primary components sum to {parts}")
                    })?;
                }
                let rad = radical(&i);
                if rad.len() == 1 {
                    let p = *rad.iter().next().expect("one prime");
                    let reduced = eval(&tree, &localize_length(&tree, &l, p), &i);
                    check(value == reduced, inputs, || {
                        format!("radical is {} but l(D/I) = {value} and (l ⊗ D_P)(D/I) = {reduced}", tree.name(p))
                    })?;
                    if is_primary_at(&i, p) {
                        for q in tree.ids().filter(|&q| tree.le(p, q)) {
                            let at_q = eval(&tree, &localize_length(&tree, &l, q), &i);
                            check(value == at_q, inputs, || {
                                format!("primary at {} but localizing at {} gives {at_q}", tree.name(p), tree.name(q))
                            })?;
                        }
                    }
                }
            }
        }
        Ok(())
    })
}

/// A random tree with at least one unbranched prime.
fn tree_with_unbranched<R: Rng + ?Sized>(rng: &mut R) -> SpectrumTree {
    loop {
        let t = random_tree(rng);
        if t.nonroot().any(|p| t.kind(p) == Some(PieceKind::Unbranched)) {
            return t;
        }
    }
}

const COLLAPSE_SAMPLES: usize = 100;

fn uniqueness(seed: u64, cases: usize) -> Vec<Failure> {
    run_cases(seed, cases, |case, rng| {
        let tree = if case % 2 == 0 { tree_with_unbranched(rng) } else { random_tree(rng) };
        let l = random_canonical(rng, &tree);
        let back = canonicalize(&tree, &Evaluator::new(&tree, l.clone()));
        check(back.as_ref() == Ok(&l), || tree_inputs(&tree, &l, &[]), || format!("canonicalize gave {back:?}"))?;
        for u in tree.nonroot().filter(|&u| tree.kind(u) == Some(PieceKind::Unbranched)) {
            let collapsed = CanonicalLengthFn::torsion(tree.strictly_below(u));
            // every unbranched prime sitting on the core normalizes, not only u
            let mut normal = collapsed.clone();
            normal.sigma_i.extend(tree.nonroot().filter(|&v| {
                tree.kind(v) == Some(PieceKind::Unbranched)
                    && !collapsed.sigma_t.contains(&v)
                    && tree.strictly_below(v).iter().all(|q| collapsed.sigma_t.contains(q))
            }));
            let inputs = || json!({"spectrum": spectrum_to_json(&tree), "unbranched": tree.name(u)});
            check(validate_canonical(&tree, &collapsed).is_err(), inputs, || {
                "the collapsed form passed validation".into()
            })?;
            for _ in 0..COLLAPSE_SAMPLES {
                let i = random_ideal(rng, &tree);
                let (a, b) = (eval(&tree, &collapsed, &i), eval(&tree, &normal, &i));
                check(a == b, inputs, || format!("collapse pair differs on {}: {a} vs {b}", i.display(&tree)))?;
            }
            let back = canonicalize(&tree, &Evaluator::new(&tree, collapsed.clone()));
            check(back.as_ref() == Ok(&normal), inputs, || format!("collapse pair canonicalized to {back:?}"))?;
        }
        Ok(())
    })
}

const MEMBERSHIP_SAMPLES: usize = 500;

fn singular_bijection(seed: u64, cases: usize) -> Vec<Failure> {
    run_cases(seed, cases, |_, rng| {
        let tree = random_tree(rng);
        let l = random_singular(rng, &tree);
        let l2 = random_singular(rng, &tree);
        let inputs = || {
            let mut v = tree_inputs(&tree, &l, &[]);
            v["other"] = canonical_to_json(&tree, &l2);
            v
        };
        let f = zero_locus(&tree, &l).map_err(|e| CaseFailure { inputs: inputs(), detail: e.to_string() })?;
        let f2 = zero_locus(&tree, &l2).map_err(|e| CaseFailure { inputs: inputs(), detail: e.to_string() })?;
        let back = canonicalize(&tree, &length_of_system(&f));
        check(back.as_ref() == Ok(&l), inputs, || format!("canonicalize(l_Z(l)) gave {back:?}"))?;
        let z_back = zero_locus(&tree, back.as_ref().expect("checked")).expect("singular");
        let length_f = length_of_system(&f);
        let (mut below, mut contains) = (true, true);
        for _ in 0..MEMBERSHIP_SAMPLES {
            let i = random_ideal(rng, &tree);
            check(z_back.contains(&i) == f.contains(&i), inputs, || {
                format!("Z(l_F) and F disagree on {}", i.display(&tree))
            })?;
            check(length_f.eval(&i) == eval(&tree, &l, &i), inputs, || {
                format!("l_Z(l) and l disagree on {}", i.display(&tree))
            })?;
            let j = sum(&tree, &i, &random_ideal(rng, &tree));
            check(!f.contains(&i) || f.contains(&j), inputs, || {
                format!("F contains {} but not the larger {}", i.display(&tree), j.display(&tree))
            })?;
            below &= eval(&tree, &l, &i) <= eval(&tree, &l2, &i);
            contains &= !f2.contains(&i) || f.contains(&i);
        }
        check(below == contains, inputs, || {
            format!("l1 <= l2 on samples is {below} but Z(l1) ⊇ Z(l2) on samples is {contains}")
        })
    })
}

/// A random set of primes closed under generization.
fn random_down_set<R: Rng + ?Sized>(rng: &mut R, tree: &SpectrumTree) -> BTreeSet<PrimeId> {
    let mut delta = BTreeSet::new();
    if rng.gen_ratio(1, 10) {
        return delta;
    }
    delta.insert(PrimeId::ROOT);
    for p in tree.nonroot() {
        if delta.contains(&tree.parent(p).expect("nonroot")) && rng.gen_ratio(1, 2) {
            delta.insert(p);
        }
    }
    delta
}

fn spectral(seed: u64, cases: usize) -> Vec<Failure> {
    run_cases(seed, cases, |_, rng| {
        let tree = random_tree(rng);
        let delta = random_down_set(rng, &tree);
        let inputs = || {
            json!({
                "spectrum": spectrum_to_json(&tree),
                "delta": delta.iter().map(|p| tree.name(*p)).collect::<Vec<_>>(),
            })
        };
        let f = spectral_system(&tree, &delta).map_err(|e| CaseFailure { inputs: inputs(), detail: e.to_string() })?;
        let s = SemistarStable::new(f.clone());
        let l = canonicalize(&tree, &length_of_system(&f))
            .map_err(|e| CaseFailure { inputs: inputs(), detail: e.to_string() })?;
        let sigma = total_spectrum(&tree, &l);
        check(sigma == delta, inputs, || format!("total spectrum is {}", l.display(&tree)))?;
        check(quasi_spectrum(&s, &tree) == delta, inputs, || "quasi-spectrum differs from delta".into())?;
        if delta.len() > 1 {
            let mut broken = delta.clone();
            broken.remove(&PrimeId::ROOT);
            check(spectral_system(&tree, &broken).is_err(), inputs, || "accepted a set missing (0)".into())?;
        }
        let hat = normalized_stable(&s, &tree);
        let sh = sharp(&tree, &l);
        for _ in 0..MEMBERSHIP_SAMPLES {
            let i = random_ideal(rng, &tree);
            let value = eval(&tree, &l, &i);
            check(sh.eval(&i) == value, inputs, || format!("l# differs from l on {}", i.display(&tree)))?;
            check(value.is_zero() == f.contains(&i), inputs, || {
                format!("canonical form and system disagree on {}", i.display(&tree))
            })?;
            check(hat.contains_one(&i) == f.contains(&i), inputs, || {
                format!("normalized version differs on {}", i.display(&tree))
            })?;
        }
        Ok(())
    })
}

fn widehat_sharp(seed: u64, cases: usize) -> Vec<Failure> {
    run_cases(seed, cases, |_, rng| {
        let tree = random_tree(rng);
        let l1 = random_singular(rng, &tree);
        let l2 = random_singular(rng, &tree);
        let inputs = || {
            let mut v = tree_inputs(&tree, &l1, &[]);
            v["other"] = canonical_to_json(&tree, &l2);
            v
        };
        let err = |e: String| CaseFailure { inputs: inputs(), detail: e };
        let s1 = SemistarStable::new(zero_locus(&tree, &l1).map_err(|e| err(e.to_string()))?);
        let s2 = SemistarStable::new(zero_locus(&tree, &l2).map_err(|e| err(e.to_string()))?);
        let inf = infimum_of_systems(&[s1.clone(), s2.clone()]).map_err(|e| err(e.to_string()))?;
        // the infimum's length function is l1 + l2, recovered by probes
        let l_inf = canonicalize(&tree, &length_of_system(&inf.system)).map_err(|e| err(e.to_string()))?;
        let hat1 = normalized_stable(&s1, &tree);
        let hat_inf = normalized_stable(&inf, &tree);
        let (sharp1, sharp_inf) = (sharp(&tree, &l1), sharp(&tree, &l_inf));
        for _ in 0..MEMBERSHIP_SAMPLES {
            let i = random_ideal(rng, &tree);
            let shown = || i.display(&tree);
            check(hat1.contains_one(&i) == sharp1.eval(&i).is_zero(), inputs, || {
                format!("normalized membership differs from Z(l#) on {}", shown())
            })?;
            check(hat_inf.contains_one(&i) == sharp_inf.eval(&i).is_zero(), inputs, || {
                format!("normalized infimum differs from Z(l#) on {}", shown())
            })?;
            let summed = eval(&tree, &l1, &i) + eval(&tree, &l2, &i);
            check(inf.contains_one(&i) == summed.is_zero(), inputs, || {
                format!("infimum membership differs from l1 + l2 = 0 on {}", shown())
            })?;
            check(eval(&tree, &l_inf, &i) == summed, inputs, || {
                format!("canonical form of the infimum differs from l1 + l2 on {}", shown())
            })?;
        }
        Ok(())
    })
}

fn vicev_jaff(seed: u64, cases: usize) -> Outcome {
    const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];
    let witness = std::sync::Mutex::new(None);
    let failures = run_cases(seed, cases, |case, rng| {
        let family: Vec<u64> = if case == 0 {
            vec![2, 3]
        } else {
            PRIMES.choose_multiple(rng, 2).copied().collect()
        };
        let alpha = Rational::new(BigInt::from(rng.gen_range(1..=6)), BigInt::from(rng.gen_range(1..=3)));
        let l = ZLengthFn::rank_multiple(alpha).expect("positive");
        let torsion: Vec<BigUint> = (0..rng.gen_range(0..=2)).map(|_| BigUint::from(rng.gen_range(2u64..=60))).collect();
        let m = FgZModule::from_cyclic_orders(rng.gen_range(1..=3), &torsion);
        let primes: Vec<BigUint> = family.iter().map(|&p| BigUint::from(p)).collect();
        let (value, summed) = overring_family_sides(&l, &primes, &m);
        let inputs = json!({"lengthfn": z_length_to_json(&l), "family": family, "module": module_to_json(&m)});
        if case == 0 {
            let mut w = inputs.clone();
            w["l"] = gamma_to_json(&value);
            w["sum_of_localizations"] = gamma_to_json(&summed);
            w["identity_holds"] = json!(value == summed);
            *witness.lock().expect("witness") = Some(w);
        }
        // expected failure: the identity must not hold
        check(value != summed, || inputs, || format!("identity held: l(M) = {value} = {summed}"))
    });
    Outcome { failures, witnesses: witness.into_inner().expect("witness").into_iter().collect() }
}

fn non_discrete(seed: u64, cases: usize) -> Outcome {
    const TERMS: usize = 12;
    let failures = run_cases(seed, cases, |case, rng| {
        let (scale, ratio) = if case == 0 {
            (Rational::one(), Rational::new(1.into(), 2.into()))
        } else {
            let d = rng.gen_range(2..=7);
            (
                Rational::new(BigInt::from(rng.gen_range(1..=5)), BigInt::from(rng.gen_range(1..=3))),
                Rational::new(BigInt::from(rng.gen_range(1..d)), BigInt::from(d)),
            )
        };
        let family = ZWeightFamily::Geometric { scale: scale.clone(), ratio: ratio.clone() };
        let inputs = || json!({"scale": crate::gamma::format_rational(&scale), "ratio": crate::gamma::format_rational(&ratio)});
        check(!crate::zmod::is_discrete_z(&family), inputs, || "geometric family classified discrete".into())?;
        // partial sums increase to the supremum, with gaps scale·ratio·(ratio^k)/(1-ratio) → 0
        let (values, sup) = geometric_partial_sums(&scale, &ratio, TERMS);
        let mut prev = Rational::zero();
        let mut tail = &scale * &ratio / (Rational::one() - &ratio);
        for v in &values {
            let v = v.as_finite().expect("finite partial sum").clone();
            tail = &tail * &ratio;
            check(v > prev && &sup - &v == tail, inputs, || format!("partial sum {v} is off the geometric series"))?;
            prev = v;
        }
        let l = random_infinite_z(rng);
        let finite = ZWeightFamily::Descriptor(l.clone());
        check(crate::zmod::is_discrete_z(&finite), || json!({"lengthfn": z_length_to_json(&l)}), || {
            "finite descriptor classified non-discrete".into()
        })?;
        if let Some(unit) = discreteness_unit(&l) {
            let m = random_smooth_module(rng);
            if let GammaValue::Finite(v) = eval_z(&l, &m) {
                check((v / &unit).is_integer(), || json!({"lengthfn": z_length_to_json(&l), "module": module_to_json(&m)}), || {
                    "value is not a multiple of the discreteness unit".into()
                })?;
            }
        }
        Ok(())
    });
    let (values, sup) = geometric_partial_sums(&Rational::one(), &Rational::new(1.into(), 2.into()), 6);
    let witness = json!({
        "family": "c_{p_i} = 1/2^i",
        "discrete": false,
        "partial_sums": values.iter().map(gamma_to_json).collect::<Vec<_>>(),
        "supremum": crate::gamma::format_rational(&sup),
    });
    Outcome { failures, witnesses: vec![witness] }
}

const AD_INDEX_BOUND: u64 = 16;

fn ex_ad(seed: u64, cases: usize) -> Outcome {
    let mut setup = setup_rng(seed);
    let pick = |rng: &mut ChaCha8Rng| if rng.gen_ratio(1, 2) { GammaValue::Infinity } else { GammaValue::zero() };
    let mut weights = BTreeMap::from([(1, GammaValue::Infinity), (2, GammaValue::zero())]);
    for k in 3..=AD_INDEX_BOUND {
        if setup.gen_ratio(1, 2) {
            weights.insert(k, pick(&mut setup));
        }
    }
    let default = pick(&mut setup);
    let l = OneDimWeights::new(weights, default).expect("singular weights");
    let model = InfiniteOneDimSpectrum::almost_dedekind();
    let fixed = [
        OneDimIdeal::FiniteSupport(BTreeMap::from([(1, Cut::inclusive(2)), (2, Cut::inclusive(1))])),
        OneDimIdeal::Unit,
        OneDimIdeal::FiniteSupport(BTreeMap::from([(2, Cut::inclusive(1))])),
    ];
    let weights_json = || {
        json!({
            "weights": l.weights.iter().map(|(k, g)| json!({"index": k, "value": gamma_to_json(g)})).collect::<Vec<_>>(),
            "default": gamma_to_json(&l.default),
        })
    };
    let failures = run_cases(seed, cases, |case, rng| {
        let ideal = fixed
            .get(case)
            .cloned()
            .unwrap_or_else(|| random_finite_support(rng, PieceKind::Discrete, AD_INDEX_BOUND + 4));
        let inputs = || json!({"lengthfn": weights_json(), "ideal": one_dim_ideal_to_json(&ideal)});
        let s = example_ad(model, &l, &ideal).map_err(|e| CaseFailure { inputs: inputs(), detail: e.to_string() })?;
        check(s.agrees(), inputs, || format!("l(D/I) = {} but the local sum is {}", s.global, s.local))
    });
    Outcome { failures, witnesses: vec![json!({"lengthfn": weights_json(), "samples": cases})] }
}

fn ex_global(seed: u64, cases: usize) -> Outcome {
    let report = std::sync::Mutex::new(None);
    let failures = run_cases(seed, cases, |_, _| {
        let r = example_global(InfiniteOneDimSpectrum::algebraic_integers())
            .map_err(|e| CaseFailure { inputs: Value::Null, detail: e.to_string() })?;
        let w = &r.witness;
        let ok = w.global.is_infinite() && w.local.is_zero() && r.sigma == ["(0)"];
        let row = |s: &crate::locsys::DecompositionSample| {
            json!({"ideal": one_dim_ideal_to_json(&s.ideal), "l": gamma_to_json(&s.global), "l_sharp": gamma_to_json(&s.local)})
        };
        let json = json!({
            "sigma": r.sigma,
            "witness": row(w),
            "rows": r.rows.iter().map(row).collect::<Vec<_>>(),
        });
        *report.lock().expect("report") = Some(json.clone());
        check(ok, || json, || "no witness with l = inf and l# = 0".into())
    });
    Outcome { failures, witnesses: report.into_inner().expect("report").into_iter().collect() }
}

const TRANSPORT_SAMPLES: usize = 50;

fn transport_suite(seed: u64, cases: usize) -> Vec<Failure> {
    run_cases(seed, cases, |_, rng| {
        let tree = random_tree(rng);
        let (other, iso) = random_relabeling(rng, &tree);
        let l = random_canonical(rng, &tree);
        let l2 = random_canonical(rng, &tree);
        let moved = transport(&iso, &l);
        let moved2 = transport(&iso, &l2);
        let inputs = || {
            let mut v = tree_inputs(&tree, &l, &[]);
            v["target"] = spectrum_to_json(&other);
            v
        };
        check(validate_canonical(&other, &moved).is_ok(), inputs, || "transported form is not canonical".into())?;
        check(transport(&iso.inverse(), &moved) == l, inputs, || "inverse transport is not the identity".into())?;
        let back = canonicalize(&other, &Evaluator::new(&other, moved.clone()));
        check(back.as_ref() == Ok(&moved), inputs, || format!("canonicalize on the target gave {back:?}"))?;
        for p in tree.ids() {
            check(tree.idempotent(p) == other.idempotent(iso.apply(p)), inputs, || {
                format!("idempotence of {} is not preserved", tree.name(p))
            })?;
        }
        let (mut below, mut below_moved) = (true, true);
        for _ in 0..TRANSPORT_SAMPLES {
            let i = random_ideal(rng, &tree);
            let j = iso.ideal(&i);
            let (a, b) = (eval(&tree, &l, &i), eval(&other, &moved, &j));
            check(a == b, inputs, || format!("values differ on {}: {a} vs {b}", i.display(&tree)))?;
            let i2 = random_ideal(rng, &tree);
            check(leq(&tree, &i, &i2) == leq(&other, &j, &iso.ideal(&i2)), inputs, || {
                format!("containment of {} in {} changed", i.display(&tree), i2.display(&tree))
            })?;
            below &= a <= eval(&tree, &l2, &i);
            below_moved &= b <= eval(&other, &moved2, &j);
        }
        check(below == below_moved, inputs, || "pointwise order changed under transport".into())
    })
}
