//! The group of perfect self-isometries of the block of `C_p`.
//!
//! Every perfect isometry turns out to be affine on character indices,
//! `χ_k ↦ ε·χ_{a+uk}`. The enumeration here does not assume that: it tests
//! signed permutations directly and then checks the found set against the
//! affine family, the composition law and the generator relations.

use std::collections::BTreeSet;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::characters::{aut_twist_index, inner_product, ClassFunction};
use crate::cyclotomic::Prime;
use crate::error::{Error, Result};
use crate::isometry::{
    apply_i_mu, apply_r_mu, build_mu, is_perfect, random_character_coords, PerfectnessChecker,
    Sign, SignProfile, SignedIsometry,
};

/// Largest prime for which [`Mode::Exhaustive`] is accepted.
pub const EXHAUSTIVE_BOUND: u32 = 7;
/// Largest prime for which [`Mode::PositiveThenNegate`] is accepted.
pub const POSITIVE_BOUND: u32 = 11;

/// Number of random generalized-character pairs used by the adjointness
/// check of [`verify_structure`].
pub const ADJOINTNESS_TRIALS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    /// All `2^p·p!` signed permutations.
    Exhaustive,
    /// All-positive permutations only; negations adjoined afterwards.
    #[default]
    PositiveThenNegate,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exhaustive => "exhaustive",
            Mode::PositiveThenNegate => "positive_then_negate",
        }
    }

    pub fn bound(self) -> u32 {
        match self {
            Mode::Exhaustive => EXHAUSTIVE_BOUND,
            Mode::PositiveThenNegate => POSITIVE_BOUND,
        }
    }
}

/// `(ε, a, u)` standing for `χ_k ↦ ε·χ_{a+uk mod p}`.
///
/// `a` is the coordinate of `I_λ` with `λ = χ_a`; `u` that of the map
/// `χ_k ↦ χ_{uk}`, which is `I_σ` for `σ: g ↦ g^{u^{-1}}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AffineCoords {
    pub eps: Sign,
    pub a: usize,
    pub u: usize,
}

impl AffineCoords {
    pub fn new(p: Prime, eps: Sign, a: usize, u: usize) -> Result<Self> {
        let n = p.as_usize();
        if a >= n {
            return Err(Error::IndexOutOfRange { index: a, p: p.get() });
        }
        if u % n == 0 || u >= n {
            return Err(Error::NotAUnit(u as i64, p.get()));
        }
        Ok(AffineCoords { eps, a, u })
    }

    /// `ε·I_{χ_a}∘(χ_k ↦ χ_{uk})`, built by composing the generators.
    pub fn to_isometry(self, p: Prime) -> SignedIsometry {
        let positive = gen_linear(p, self.a)
            .compose(&gen_aut(p, self.u).expect("u is a unit"))
            .expect("same prime");
        match self.eps {
            Sign::Plus => positive,
            Sign::Minus => gen_negid(p).compose(&positive).expect("same prime"),
        }
    }

    /// Coordinates of the composite `self ∘ other`.
    pub fn compose(self, other: AffineCoords, p: Prime) -> AffineCoords {
        let n = p.as_usize();
        AffineCoords {
            eps: self.eps.times(other.eps),
            a: (self.a + self.u * other.a) % n,
            u: self.u * other.u % n,
        }
    }

    /// Every valid triple, sorted.
    pub fn all(p: Prime) -> Vec<AffineCoords> {
        let n = p.as_usize();
        let mut out = Vec::with_capacity(2 * n * (n - 1));
        for eps in [Sign::Plus, Sign::Minus] {
            for a in 0..n {
                for u in 1..n {
                    out.push(AffineCoords { eps, a, u });
                }
            }
        }
        out
    }
}

impl fmt::Display for AffineCoords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}1, a={}, u={})", self.eps.symbol(), self.a, self.u)
    }
}

/// `I_λ` for `λ = χ_a`: `χ_k ↦ χ_{a+k}`.
pub fn gen_linear(p: Prime, a: usize) -> SignedIsometry {
    let n = p.as_usize();
    let image = (0..n).map(|k| (a + k) % n).collect();
    SignedIsometry::new(p, image, vec![Sign::Plus; n]).expect("translation is a bijection")
}

/// `χ_k ↦ χ_{uk}`.
pub fn gen_aut(p: Prime, u: usize) -> Result<SignedIsometry> {
    let n = p.as_usize();
    if u % n == 0 {
        return Err(Error::NotAUnit(u as i64, p.get()));
    }
    let image = (0..n).map(|k| k * u % n).collect();
    SignedIsometry::new(p, image, vec![Sign::Plus; n])
}

pub fn gen_negid(p: Prime) -> SignedIsometry {
    SignedIsometry::identity(p).negate()
}

/// Reads `(ε, a, u)` off `I(χ_0)` and `I(χ_1)` and confirms it by
/// recomposing the whole isometry.
pub fn decompose(iso: &SignedIsometry) -> Result<AffineCoords> {
    let p = iso.prime();
    let n = p.as_usize();
    let eps = match iso.sign_profile() {
        SignProfile::AllPositive => Sign::Plus,
        SignProfile::AllNegative => Sign::Minus,
        SignProfile::Mixed => {
            return Err(Error::NotPerfect(format!("{iso} has mixed signs")));
        }
    };
    let a = iso.image()[0];
    let u = (iso.image()[1] + n - a) % n;
    let coords = AffineCoords { eps, a, u };
    if coords.to_isometry(p) != *iso {
        return Err(Error::NotPerfect(format!(
            "{iso} is not of the form ε·χ_(a+uk); {coords} recomposes differently"
        )));
    }
    Ok(coords)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Checks {
    pub homogeneous_sign: bool,
    pub affine_completeness: bool,
    pub order_formula: bool,
    pub semidirect_law: Option<bool>,
    pub negid_central: Option<bool>,
    pub closure: Option<bool>,
    pub conjugation: Option<bool>,
    pub trivial_intersection: Option<bool>,
    pub monomorphisms: Option<bool>,
    pub reconstruction: Option<bool>,
    pub adjointness: Option<bool>,
}

impl Checks {
    pub fn named(&self) -> Vec<(&'static str, Option<bool>)> {
        vec![
            ("homogeneous_sign", Some(self.homogeneous_sign)),
            ("affine_completeness", Some(self.affine_completeness)),
            ("order_formula", Some(self.order_formula)),
            ("semidirect_law", self.semidirect_law),
            ("negid_central", self.negid_central),
            ("closure", self.closure),
            ("conjugation", self.conjugation),
            ("trivial_intersection", self.trivial_intersection),
            ("monomorphisms", self.monomorphisms),
            ("reconstruction", self.reconstruction),
            ("adjointness", self.adjointness),
        ]
    }

    pub fn all_pass(&self) -> bool {
        self.named().iter().all(|(_, v)| v.unwrap_or(true))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckFailure {
    pub check: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PIGroupReport {
    pub p: u32,
    pub order: usize,
    pub elements: Vec<AffineCoords>,
    /// Perfect isometries that did not decompose; empty when the
    /// classification holds.
    pub non_affine: Vec<String>,
    pub checks: Checks,
    pub failures: Vec<CheckFailure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl PIGroupReport {
    pub fn all_pass(&self) -> bool {
        self.checks.all_pass() && self.failures.is_empty()
    }

    /// The found elements as isometries, in report order.
    pub fn isometries(&self) -> Vec<SignedIsometry> {
        let p = Prime::new(self.p).expect("report prime");
        self.elements.iter().map(|c| c.to_isometry(p)).collect()
    }
}

fn check_feasible(p: Prime, mode: Mode) -> Result<()> {
    if p.get() > mode.bound() {
        return Err(Error::Infeasible {
            p: p.get(),
            mode: mode.name(),
            bound: mode.bound(),
        });
    }
    Ok(())
}

/// Rearranges `v` into the next permutation in lexicographic order; false
/// once `v` is the last one.
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

// All perfect signed isometries whose image starts with `prefix`,
// remaining entries in lexicographic order.
fn search_shard(p: Prime, prefix: &[usize], mode: Mode, prune: bool) -> Vec<SignedIsometry> {
    if prune && mode == Mode::PositiveThenNegate {
        return search_shard_pruned(p, prefix);
    }
    let n = p.as_usize();
    let mut image: Vec<usize> = prefix.to_vec();
    image.extend((0..n).filter(|i| !prefix.contains(i)));
    let fixed = prefix.len();
    let mut checker = PerfectnessChecker::new(p);
    let mut signs = vec![Sign::Plus; n];
    let mut found = Vec::new();
    loop {
        match mode {
            Mode::PositiveThenNegate => {
                signs.fill(Sign::Plus);
                if checker.passes(&image, &signs) {
                    found.push(SignedIsometry::new(p, image.clone(), signs.clone()).unwrap());
                }
            }
            Mode::Exhaustive => {
                for mask in 0u32..(1 << n) {
                    for (k, s) in signs.iter_mut().enumerate() {
                        *s = if mask >> k & 1 == 1 { Sign::Minus } else { Sign::Plus };
                    }
                    if checker.passes(&image, &signs) {
                        found.push(SignedIsometry::new(p, image.clone(), signs.clone()).unwrap());
                    }
                }
            }
        }
        if !next_permutation(&mut image[fixed..]) {
            break;
        }
    }
    found
}

/// Whether an all-positive entry of `μ` whose exponent histogram so far is
/// `counts` can still end up in `pO` after `remaining` more `+1` terms.
///
/// The entry is in `pO` iff all final counts agree modulo `p`. Aiming for
/// residue `c`, slot `e` needs at least `(c - counts[e]) mod p` more terms,
/// and any surplus has to come in blocks of `p`.
fn completable(counts: &[i64], remaining: i64, p: i64) -> bool {
    (0..p).any(|c| {
        let need: i64 = counts.iter().map(|&x| (c - x).rem_euclid(p)).sum();
        need <= remaining && (remaining - need) % p == 0
    })
}

// Depth-first search over all-positive candidates extending `prefix`, in
// lexicographic order. A partial permutation is abandoned only when some
// entry μ(g, g^n) can no longer pass the integrality test; surviving leaves
// get the full perfectness check.
struct PrunedSearch {
    p: usize,
    image: Vec<usize>,
    used: Vec<bool>,
    // row_one[n][e]: how many assigned k have image[k] + k·n ≡ e
    row_one: Vec<Vec<i64>>,
    checker: PerfectnessChecker,
    prime: Prime,
    found: Vec<SignedIsometry>,
}

impl PrunedSearch {
    fn assign(&mut self, k: usize, v: usize, delta: i64) {
        let p = self.p;
        for (n, row) in self.row_one.iter_mut().enumerate() {
            row[(v + k * n) % p] += delta;
        }
    }

    fn viable(&self, assigned: usize) -> bool {
        let remaining = (self.p - assigned) as i64;
        self.row_one
            .iter()
            .all(|row| completable(row, remaining, self.p as i64))
    }

    fn run(&mut self, k: usize) {
        if k == self.p {
            let signs = vec![Sign::Plus; self.p];
            if self.checker.passes(&self.image, &signs) {
                self.found
                    .push(SignedIsometry::new(self.prime, self.image.clone(), signs).unwrap());
            }
            return;
        }
        for v in 0..self.p {
            if self.used[v] {
                continue;
            }
            self.used[v] = true;
            self.image[k] = v;
            self.assign(k, v, 1);
            if self.viable(k + 1) {
                self.run(k + 1);
            }
            self.assign(k, v, -1);
            self.used[v] = false;
        }
    }
}

fn search_shard_pruned(p: Prime, prefix: &[usize]) -> Vec<SignedIsometry> {
    let n = p.as_usize();
    let mut search = PrunedSearch {
        p: n,
        image: vec![0; n],
        used: vec![false; n],
        row_one: vec![vec![0; n]; n],
        checker: PerfectnessChecker::new(p),
        prime: p,
        found: Vec::new(),
    };
    for (k, &v) in prefix.iter().enumerate() {
        search.used[v] = true;
        search.image[k] = v;
        search.assign(k, v, 1);
    }
    if search.viable(prefix.len()) {
        search.run(prefix.len());
    }
    search.found
}

/// Every perfect signed isometry for `C_p`, searched sharded by the first
/// two image entries. The result is sorted, so it does not depend on how
/// the shards were scheduled.
pub fn find_perfect(p: Prime, mode: Mode, parallel: bool) -> Result<Vec<SignedIsometry>> {
    find_perfect_with(p, mode, parallel, true)
}

/// [`find_perfect`] with the row-one pruning of the all-positive search
/// switchable. Exhaustive mode never prunes.
pub fn find_perfect_with(
    p: Prime,
    mode: Mode,
    parallel: bool,
    prune: bool,
) -> Result<Vec<SignedIsometry>> {
    check_feasible(p, mode)?;
    let n = p.as_usize();
    let prefixes: Vec<Vec<usize>> = if n == 2 {
        vec![vec![0], vec![1]]
    } else {
        (0..n)
            .flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| vec![x, y]))
            .collect()
    };
    let mut found: Vec<SignedIsometry> = if parallel {
        prefixes
            .par_iter()
            .flat_map_iter(|pre| search_shard(p, pre, mode, prune))
            .collect()
    } else {
        prefixes
            .iter()
            .flat_map(|pre| search_shard(p, pre, mode, prune))
            .collect()
    };
    if mode == Mode::PositiveThenNegate {
        let negated: Vec<SignedIsometry> = found.iter().map(SignedIsometry::negate).collect();
        for neg in &negated {
            debug_assert!(is_perfect(neg).is_perfect());
        }
        found.extend(negated);
    }
    found.sort();
    Ok(found)
}

/// Enumerates the perfect isometry group and checks the sign, completeness
/// and order claims on the result.
pub fn enumerate_pi(p: Prime, mode: Mode) -> Result<PIGroupReport> {
    enumerate_pi_with(p, mode, true)
}

pub fn enumerate_pi_with(p: Prime, mode: Mode, parallel: bool) -> Result<PIGroupReport> {
    let found = find_perfect(p, mode, parallel)?;
    Ok(report_from(p, &found))
}

fn report_from(p: Prime, found: &[SignedIsometry]) -> PIGroupReport {
    let n = p.as_usize();
    let mut failures = Vec::new();

    let mixed: Vec<&SignedIsometry> = found
        .iter()
        .filter(|i| i.sign_profile() == SignProfile::Mixed)
        .collect();
    for i in &mixed {
        failures.push(CheckFailure {
            check: "homogeneous_sign",
            detail: format!("{i} is perfect with mixed signs"),
        });
    }

    let mut elements = Vec::new();
    let mut non_affine = Vec::new();
    for i in found {
        match decompose(i) {
            Ok(c) => elements.push(c),
            Err(_) => non_affine.push(i.to_string()),
        }
    }
    elements.sort();

    let found_set: BTreeSet<&SignedIsometry> = found.iter().collect();
    let expected: BTreeSet<SignedIsometry> = AffineCoords::all(p)
        .into_iter()
        .map(|c| c.to_isometry(p))
        .collect();
    let mut affine_completeness = non_affine.is_empty();
    for i in &non_affine {
        failures.push(CheckFailure {
            check: "affine_completeness",
            detail: format!("perfect isometry {i} is not affine"),
        });
    }
    for e in &expected {
        if !found_set.contains(e) {
            affine_completeness = false;
            failures.push(CheckFailure {
                check: "affine_completeness",
                detail: format!("affine isometry {e} was not found perfect"),
            });
        }
    }
    if found_set.len() != found.len() {
        affine_completeness = false;
        failures.push(CheckFailure {
            check: "affine_completeness",
            detail: "duplicate elements in the enumeration".into(),
        });
    }

    let order = found.len();
    let order_formula = order == 2 * n * (n - 1);
    if !order_formula {
        failures.push(CheckFailure {
            check: "order_formula",
            detail: format!("found {order} elements, expected 2p(p-1) = {}", 2 * n * (n - 1)),
        });
    }

    PIGroupReport {
        p: p.get(),
        order,
        elements,
        non_affine,
        checks: Checks {
            homogeneous_sign: mixed.is_empty(),
            affine_completeness,
            order_formula,
            ..Checks::default()
        },
        failures,
        seed: None,
    }
}

/// Enumerates the group and verifies its structure on the found set:
/// closure, the affine composition law, the generator relations, centrality
/// of `-id`, `L ∩ A = 1`, reconstruction of `I` from `μ_I` with `R_μ` as
/// inverse, and adjointness of `I_μ` and `R_μ` on seeded random
/// generalized characters.
pub fn verify_structure(p: Prime, mode: Mode, seed: u64) -> Result<PIGroupReport> {
    let found = find_perfect(p, mode, true)?;
    let mut report = report_from(p, &found);
    let n = p.as_usize();
    let mut fail = |check: &'static str, detail: String| {
        report.failures.push(CheckFailure { check, detail });
        false
    };
    let set: BTreeSet<&SignedIsometry> = found.iter().collect();

    // (a) closure under composition and inversion
    let mut closure = true;
    'outer: for i in &found {
        if !set.contains(&i.invert()) {
            closure = fail("closure", format!("inverse of {i} is missing"));
            break;
        }
        for j in &found {
            let ij = i.compose(j)?;
            if !set.contains(&ij) {
                closure = fail("closure", format!("{i} ∘ {j} = {ij} is missing"));
                break 'outer;
            }
        }
    }

    // (b) decompose(I∘J) = decompose(I)·decompose(J)
    let mut semidirect = true;
    let decomposed: Vec<Option<AffineCoords>> = found.iter().map(|i| decompose(i).ok()).collect();
    'law: for (i, ci) in found.iter().zip(&decomposed) {
        for (j, cj) in found.iter().zip(&decomposed) {
            let (Some(ci), Some(cj)) = (ci, cj) else {
                semidirect = fail("semidirect_law", format!("{i} or {j} has no coordinates"));
                break 'law;
            };
            let law = ci.compose(*cj, p);
            let direct = i.compose(j)?;
            if decompose(&direct).ok() != Some(law) || law.to_isometry(p) != direct {
                semidirect = fail(
                    "semidirect_law",
                    format!("{ci}·{cj} should be {law}, composite is {direct}"),
                );
                break 'law;
            }
        }
    }

    // (c) A_u ∘ L_a ∘ A_u⁻¹ = L_{a'} where χ_{a'} = χ_a^σ and A_u = I_σ
    //     for σ: g ↦ g^{u⁻¹}
    let mut conjugation = true;
    'conj: for u in 1..n {
        let au = gen_aut(p, u)?;
        let u_inv = p.inverse(u).expect("unit");
        for a in 0..n {
            let lhs = au.compose(&gen_linear(p, a))?.compose(&au.invert())?;
            let twisted = aut_twist_index(p, u_inv, a)?;
            if lhs != gen_linear(p, twisted) {
                conjugation = fail(
                    "conjugation",
                    format!("A_{u} L_{a} A_{u}^-1 = {lhs}, expected L_{twisted}"),
                );
                break 'conj;
            }
        }
    }

    // (d) -id has order 2 and is central
    let negid = gen_negid(p);
    let mut negid_central = true;
    if negid.is_identity() || !negid.compose(&negid)?.is_identity() || !set.contains(&negid) {
        negid_central = fail("negid_central", "-id is not an element of order 2".into());
    }
    for i in &found {
        if negid.compose(i)? != i.compose(&negid)? {
            negid_central = fail("negid_central", format!("-id does not commute with {i}"));
            break;
        }
    }

    // (e) L ∩ A = {id}
    let linear: BTreeSet<SignedIsometry> = (0..n).map(|a| gen_linear(p, a)).collect();
    let auts: BTreeSet<SignedIsometry> = (1..n).map(|u| gen_aut(p, u).unwrap()).collect();
    let common: Vec<&SignedIsometry> = linear.intersection(&auts).collect();
    let trivial_intersection = if common.len() == 1 && common[0].is_identity() {
        true
    } else {
        fail(
            "trivial_intersection",
            format!("L ∩ A has {} elements", common.len()),
        )
    };

    // a ↦ L_a and u ↦ A_u are injective homomorphisms
    let mut monomorphisms = linear.len() == n && auts.len() == n - 1;
    if !monomorphisms {
        fail("monomorphisms", "generator maps are not injective".into());
    }
    'mono: for x in 0..n {
        for y in 0..n {
            if gen_linear(p, x).compose(&gen_linear(p, y))? != gen_linear(p, (x + y) % n) {
                monomorphisms = fail("monomorphisms", format!("L_{x} L_{y} != L_{}", (x + y) % n));
                break 'mono;
            }
            if x > 0 && y > 0 && gen_aut(p, x)?.compose(&gen_aut(p, y)?)? != gen_aut(p, x * y % n)? {
                monomorphisms = fail("monomorphisms", format!("A_{x} A_{y} != A_{}", x * y % n));
                break 'mono;
            }
        }
    }

    // I_μ rebuilds I from μ_I and R_μ undoes it
    let mut reconstruction = true;
    'rec: for i in &found {
        let mu = build_mu(i);
        for k in 0..n {
            let chi = ClassFunction::character(p, k);
            let image = apply_i_mu(&mu, &chi)?;
            if image != i.apply_character(k) {
                reconstruction = fail("reconstruction", format!("I_mu(chi_{k}) != I(chi_{k}) for {i}"));
                break 'rec;
            }
            if apply_r_mu(&mu, &image)? != chi {
                reconstruction = fail("reconstruction", format!("R_mu does not invert {i} at chi_{k}"));
                break 'rec;
            }
        }
    }

    // ⟨I_μ β, α⟩ = ⟨β, R_μ α⟩; μ drawn from the found set and from arbitrary
    // signed isometries alternately
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adjointness = true;
    for t in 0..ADJOINTNESS_TRIALS {
        let iso = if t % 2 == 0 {
            found[t / 2 % found.len()].clone()
        } else {
            SignedIsometry::random(p, &mut rng)
        };
        let mu = build_mu(&iso);
        let alpha = ClassFunction::from_character_coeffs(p, &random_character_coords(p, 3, &mut rng))?;
        let beta = ClassFunction::from_character_coeffs(p, &random_character_coords(p, 3, &mut rng))?;
        let lhs = inner_product(&apply_i_mu(&mu, &beta)?, &alpha)?;
        let rhs = inner_product(&beta, &apply_r_mu(&mu, &alpha)?)?;
        if lhs != rhs {
            adjointness = fail("adjointness", format!("trial {t}: {lhs} != {rhs} for {iso}"));
            break;
        }
    }

    report.checks.closure = Some(closure);
    report.checks.semidirect_law = Some(semidirect);
    report.checks.conjugation = Some(conjugation);
    report.checks.negid_central = Some(negid_central);
    report.checks.trivial_intersection = Some(trivial_intersection);
    report.checks.monomorphisms = Some(monomorphisms);
    report.checks.reconstruction = Some(reconstruction);
    report.checks.adjointness = Some(adjointness);
    report.seed = Some(seed);
    Ok(report)
}
