//! Exact counts of pyramids, half-pyramids and compact-source animals,
//! brute-force enumeration through the path encoding, the excursion and
//! renewal series of the animal walk, and the algebraic identity suite.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::encoding::decode_trusted;
use crate::exact::{int, pow2, pow3, ratio, to_string, zero, ExactProb};
use crate::kernels::{enumerate_row, KernelKind};
use crate::lattice::{eta, eta_plus, layer, AdmissibleSet, Animal, Layer};
use crate::walks::RngStream;

/// Default size cap of [`enumerate_animals`].
pub const ENUM_CAP: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnimalKind {
    /// Single source at the origin.
    Pyramid,
    /// Pyramid with all x-coordinates non-negative.
    #[serde(rename = "half")]
    HalfPyramid,
    /// Sources exactly `{0, −2, …, −2p}` for some `p ≥ 0`.
    #[serde(rename = "compact")]
    CompactSource,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("size {n} exceeds the enumeration cap {cap}")]
    Cap { n: usize, cap: usize },
    #[error("size must be at least 1")]
    ZeroSize,
}

/// Counts by size for one class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountTable {
    pub kind: AnimalKind,
    #[serde(serialize_with = "ser_counts")]
    pub counts: BTreeMap<usize, BigInt>,
}

fn ser_counts<S: serde::Serializer>(m: &BTreeMap<usize, BigInt>, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        map.serialize_entry(&k.to_string(), &v.to_string())?;
    }
    map.end()
}

/// Number of animals of the class with `n` vertices (0 for `n = 0`).
pub fn count(kind: AnimalKind, n: usize) -> BigInt {
    count_table(kind, n).counts.get(&n).cloned().unwrap_or_else(BigInt::zero)
}

/// Counts for every size `1..=n_max`, from one pass of the path DP.
pub fn count_table(kind: AnimalKind, n_max: usize) -> CountTable {
    let v = match kind {
        AnimalKind::Pyramid => pyramid_counts(n_max),
        AnimalKind::HalfPyramid => half_counts(n_max),
        AnimalKind::CompactSource => compact_counts(n_max),
    };
    CountTable { kind, counts: v.into_iter().enumerate().skip(1).collect() }
}

// State: height above the running minimum. From h there are h + 1 moves that
// stay at or above the minimum and one new-minimum move.
fn pyramid_counts(n_max: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n_max + 1];
    if n_max == 0 {
        return out;
    }
    let mut cur = vec![BigInt::one()];
    out[1] = BigInt::one();
    for slot in out.iter_mut().skip(2) {
        let mut next = vec![BigInt::zero(); cur.len() + 1];
        let mut to_zero = BigInt::zero();
        for (h, c) in cur.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            next[h + 1] += c;
            for t in next.iter_mut().take(h) {
                *t += c;
            }
            to_zero += c;
        }
        next[0] += to_zero;
        *slot = next.iter().sum();
        cur = next;
    }
    out
}

// State: current value; from z the moves are +1 and −1..−z.
fn half_counts(n_max: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n_max + 1];
    if n_max == 0 {
        return out;
    }
    let mut cur = vec![BigInt::one()];
    out[1] = BigInt::one();
    for slot in out.iter_mut().skip(2) {
        let mut next = vec![BigInt::zero(); cur.len() + 1];
        for (z, c) in cur.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            next[z + 1] += c;
            for t in next.iter_mut().take(z) {
                *t += c;
            }
        }
        *slot = next.iter().sum();
        cur = next;
    }
    out
}

fn compact_counts(n_max: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n_max + 1];
    for (n, slot) in out.iter_mut().enumerate().skip(1) {
        *slot = count_compact_by_sources(n).iter().sum();
    }
    out
}

/// Compact-source animals of size `n` split by the number of extra sources
/// `p` (index `p`). State: height above the running minimum and whether the
/// minimum still sits on the last source, which is the only way a further
/// source at `min − 2` keeps the source set compact.
pub fn count_compact_by_sources(n: usize) -> Vec<BigInt> {
    if n == 0 {
        return Vec::new();
    }
    // dp[p][open][h]
    let mut dp: Vec<[Vec<BigInt>; 2]> = vec![[vec![BigInt::zero()], vec![BigInt::one()]]];
    for _ in 1..n {
        let width = dp[0][0].len() + 1;
        let mut next: Vec<[Vec<BigInt>; 2]> =
            (0..dp.len() + 1).map(|_| [vec![BigInt::zero(); width], vec![BigInt::zero(); width]]).collect();
        for (p, states) in dp.iter().enumerate() {
            for open in 0..2 {
                for (h, c) in states[open].iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    next[p][open][h + 1] += c;
                    for t in next[p][open].iter_mut().take(h) {
                        *t += c;
                    }
                    next[p][0][0] += c;
                    if open == 1 {
                        next[p + 1][1][0] += c;
                    }
                }
            }
        }
        dp = next;
    }
    dp.iter()
        .map(|s| s[0].iter().chain(s[1].iter()).sum())
        .collect()
}

/// Pyramid count by the O(n³) DP over (value, running minimum).
pub fn count_pyramids_naive(n: usize) -> BigInt {
    if n == 0 {
        return BigInt::zero();
    }
    let off = n as i64;
    let w = 2 * n + 1;
    let idx = |v: i64| (v + off) as usize;
    // table[x][m]
    let mut cur = vec![vec![BigInt::zero(); w]; w];
    cur[idx(0)][idx(0)] = BigInt::one();
    for _ in 1..n {
        let mut next = vec![vec![BigInt::zero(); w]; w];
        for x in -off..=off {
            for m in -off..=0 {
                let c = &cur[idx(x)][idx(m)];
                if c.is_zero() {
                    continue;
                }
                let c = c.clone();
                if x < off {
                    next[idx(x + 1)][idx(m)] += &c;
                }
                for y in m..x {
                    next[idx(y)][idx(m)] += &c;
                }
                if m > -off {
                    next[idx(m - 1)][idx(m - 1)] += &c;
                }
            }
        }
        cur = next;
    }
    cur.iter().flatten().sum()
}

/// Pyramids with all x-coordinates non-positive: paths with (c) that never
/// go above 0.
pub fn count_nonpos_pyramids(n: usize) -> BigInt {
    if n == 0 {
        return BigInt::zero();
    }
    let off = n as i64;
    let w = n + 1;
    let idx = |v: i64| (v + off) as usize;
    let mut cur = vec![vec![BigInt::zero(); w]; w];
    cur[idx(0)][idx(0)] = BigInt::one();
    for _ in 1..n {
        let mut next = vec![vec![BigInt::zero(); w]; w];
        for x in -off..=0 {
            for m in -off..=x {
                let c = &cur[idx(x)][idx(m)];
                if c.is_zero() {
                    continue;
                }
                let c = c.clone();
                if x < 0 {
                    next[idx(x + 1)][idx(m)] += &c;
                }
                for y in m..x {
                    next[idx(y)][idx(m)] += &c;
                }
                if m > -off {
                    next[idx(m - 1)][idx(m - 1)] += &c;
                }
            }
        }
        cur = next;
    }
    cur.iter().flatten().sum()
}

/// Every encoding path of the class with `n` entries, in lexicographic DFS
/// order.
pub fn enumerate_paths(kind: AnimalKind, n: usize, cap: usize) -> Result<Vec<Vec<i64>>, EnumError> {
    if n == 0 {
        return Err(EnumError::ZeroSize);
    }
    if n > cap {
        return Err(EnumError::Cap { n, cap });
    }
    let mut out = Vec::new();
    let mut path = vec![0i64];
    extend_paths(kind, n, &mut path, 0, 0, true, &mut out);
    Ok(out)
}

// `src` is the last source position; `open` means min == src.
fn extend_paths(
    kind: AnimalKind,
    n: usize,
    path: &mut Vec<i64>,
    min: i64,
    src: i64,
    open: bool,
    out: &mut Vec<Vec<i64>>,
) {
    if path.len() == n {
        out.push(path.clone());
        return;
    }
    let x = *path.last().unwrap();
    let floor = if kind == AnimalKind::HalfPyramid { 0 } else { min };
    let mut moves: Vec<(i64, i64, i64, bool)> = Vec::new();
    moves.push((x + 1, min, src, open));
    for y in (floor..x).rev() {
        moves.push((y, min, src, open));
    }
    if kind != AnimalKind::HalfPyramid {
        moves.push((min - 1, min - 1, src, false));
    }
    if kind == AnimalKind::CompactSource && open {
        moves.push((min - 2, min - 2, min - 2, true));
    }
    for (y, m, s, o) in moves {
        path.push(y);
        extend_paths(kind, n, path, m, s, o, out);
        path.pop();
    }
}

/// Encoding paths of the animals with `n` vertices whose sources are
/// exactly `{(d, 0) : d ∈ sources}`.
///
/// The path starts at the largest source; the others are entered, in
/// decreasing order, by undershooting the running minimum by at least 2.
pub fn enumerate_paths_with_sources(sources: &AdmissibleSet, n: usize, cap: usize) -> Result<Vec<Vec<i64>>, EnumError> {
    if n == 0 {
        return Err(EnumError::ZeroSize);
    }
    if n > cap {
        return Err(EnumError::Cap { n, cap });
    }
    let mut out = Vec::new();
    let mut rest: Vec<i64> = sources.elems().to_vec();
    let start = rest.pop().expect("admissible sets are non-empty");
    if rest.len() < n {
        let mut path = vec![start];
        extend_sourced(n, &mut path, start, &mut rest, &mut out);
    }
    Ok(out)
}

// `rest` holds the sources still to enter, the next one last.
fn extend_sourced(n: usize, path: &mut Vec<i64>, min: i64, rest: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if path.len() == n {
        if rest.is_empty() {
            out.push(path.clone());
        }
        return;
    }
    if n - path.len() < rest.len() {
        return;
    }
    let x = *path.last().unwrap();
    for y in std::iter::once(x + 1).chain((min - 1..x).rev()) {
        path.push(y);
        extend_sourced(n, path, min.min(y), rest, out);
        path.pop();
    }
    if let Some(&d) = rest.last() {
        if d <= min - 2 {
            rest.pop();
            path.push(d);
            extend_sourced(n, path, d, rest, out);
            path.pop();
            rest.push(d);
        }
    }
}

/// Law of the first layer of a uniform animal with `n` vertices and the
/// given sources.
pub fn first_layer_law(sources: &AdmissibleSet, n: usize) -> Result<BTreeMap<Layer, ExactProb>, EnumError> {
    let paths = enumerate_paths_with_sources(sources, n, ENUM_CAP)?;
    let total = paths.len();
    let mut counts: BTreeMap<Layer, usize> = BTreeMap::new();
    for p in &paths {
        *counts.entry(layer(&decode_trusted(p), 1)).or_insert(0) += 1;
    }
    Ok(counts.into_iter().map(|(l, k)| (l, ratio(k, total))).collect())
}

/// Every animal of the class with `n` vertices, decoded from its paths.
pub fn enumerate_animals(kind: AnimalKind, n: usize) -> Result<impl Iterator<Item = Animal>, EnumError> {
    enumerate_animals_with_cap(kind, n, ENUM_CAP)
}

pub fn enumerate_animals_with_cap(
    kind: AnimalKind,
    n: usize,
    cap: usize,
) -> Result<impl Iterator<Item = Animal>, EnumError> {
    Ok(enumerate_paths(kind, n, cap)?.into_iter().map(|p| decode_trusted(&p)))
}

/// Law of `τ₋₁` (`a`) and the renewal masses `u_n = P(∃k, τ_{−k} = n)`,
/// indexed by `n` with index 0 unused.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesCoeffs {
    pub a: Vec<ExactProb>,
    pub u: Vec<ExactProb>,
}

/// `a` from `f = (s/3)(1 + f + f²)` and `u` from `u = f + f∗u`. Computed on
/// the integer sequences `3ⁿaₙ` and `3ⁿuₙ`.
pub fn excursion_law(n_max: usize) -> SeriesCoeffs {
    let (ai, ui) = excursion_integers(n_max);
    let a = ai.iter().enumerate().map(|(n, v)| int(v.clone()) * pow3(-(n as i64))).collect();
    let u = ui.iter().enumerate().map(|(n, v)| int(v.clone()) * pow3(-(n as i64))).collect();
    SeriesCoeffs { a, u }
}

/// `(3ⁿaₙ, 3ⁿuₙ)` for `n ≤ n_max`.
pub fn excursion_integers(n_max: usize) -> (Vec<BigInt>, Vec<BigInt>) {
    let mut a = vec![BigInt::zero(); n_max + 1];
    let mut u = vec![BigInt::zero(); n_max + 1];
    for n in 1..=n_max {
        let mut s = if n == 1 { BigInt::one() } else { a[n - 1].clone() };
        for i in 1..n.saturating_sub(1) {
            s += &a[i] * &a[n - 1 - i];
        }
        a[n] = s;
        let mut t = a[n].clone();
        for k in 1..n {
            t += &a[k] * &u[n - k];
        }
        u[n] = t;
    }
    (a, u)
}

/// Floating-point version of [`excursion_law`] for large `n`.
#[derive(Clone, Debug)]
pub struct SeriesF64 {
    pub a: Vec<f64>,
    pub u: Vec<f64>,
}

pub fn excursion_law_f64(n_max: usize) -> SeriesF64 {
    let mut a = vec![0.0f64; n_max + 1];
    let mut u = vec![0.0f64; n_max + 1];
    for n in 1..=n_max {
        let mut s = if n == 1 { 1.0 } else { a[n - 1] };
        for i in 1..n.saturating_sub(1) {
            s += a[i] * a[n - 1 - i];
        }
        a[n] = s / 3.0;
        let mut t = a[n];
        for k in 1..n {
            t += a[k] * u[n - k];
        }
        u[n] = t;
    }
    SeriesF64 { a, u }
}

#[derive(Clone, Debug, Serialize)]
pub struct RenewalRow {
    pub n: usize,
    pub a_n: f64,
    /// `aₙ / (√(3/4π) n^{−3/2})`
    pub a_ratio: f64,
    pub u_n: f64,
    /// `uₙ √(3πn)`
    pub u_ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RenewalReport {
    pub rows: Vec<RenewalRow>,
    /// `Σ_{k≤n} a_k`
    pub partial_sum_a: f64,
    pub all_positive: bool,
    /// Both ratios move monotonically toward 1 across the rows.
    pub converging: bool,
}

pub fn a_asymptote(n: usize) -> f64 {
    (3.0 / (4.0 * std::f64::consts::PI)).sqrt() * (n as f64).powf(-1.5)
}

pub fn u_asymptote(n: usize) -> f64 {
    1.0 / (3.0 * std::f64::consts::PI * n as f64).sqrt()
}

/// Ratios to the asymptotes at the powers of ten up to `n` and at `n`.
pub fn verify_renewal_asymptotics(n: usize) -> RenewalReport {
    let s = excursion_law_f64(n);
    let mut checkpoints: Vec<usize> = (1..)
        .map(|k| 10usize.pow(k))
        .take_while(|&c| c < n)
        .collect();
    if n >= 1 {
        checkpoints.push(n);
    }
    let rows: Vec<RenewalRow> = checkpoints
        .iter()
        .map(|&m| RenewalRow {
            n: m,
            a_n: s.a[m],
            a_ratio: s.a[m] / a_asymptote(m),
            u_n: s.u[m],
            u_ratio: s.u[m] / u_asymptote(m),
        })
        .collect();
    let toward = |f: &dyn Fn(&RenewalRow) -> f64| {
        rows.windows(2).all(|w| (f(&w[1]) - 1.0).abs() <= (f(&w[0]) - 1.0).abs())
    };
    let converging = toward(&|r| r.a_ratio) && toward(&|r| r.u_ratio);
    RenewalReport {
        partial_sum_a: s.a[1..].iter().sum(),
        all_positive: s.a[1..].iter().all(|&v| v > 0.0),
        rows,
        converging,
    }
}

/// Identities checkable in exact arithmetic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "identity", rename_all = "snake_case")]
pub enum Identity {
    /// `Σ_{0≤x₁<…<x_k≤n} Π (2(x_{i+1} − x_i) − 1) = 3ⁿ`.
    Jolie { n: usize },
    /// The five subset sums over `F` (taken in the given order).
    Gencomb { f: Vec<i64> },
    /// `3^{|A|} η(A) = η⁺([A])`.
    Eta { a: Vec<i64> },
    /// Row sums and the martingale and h-transform identities of the three
    /// kernels at `A`.
    Kernels { a: Vec<i64> },
    /// The counting bridges at size `n`.
    Bridge { n: usize },
    /// `|uₙ√(3πn) − 1| < tol`.
    Renewal { n: usize, tol: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub holds: bool,
    pub checked: usize,
    pub witness: Option<String>,
}

impl IdentityReport {
    fn ok(identity: &str, checked: usize) -> IdentityReport {
        IdentityReport { identity: identity.into(), holds: true, checked, witness: None }
    }

    fn fail(identity: &str, checked: usize, witness: String) -> IdentityReport {
        IdentityReport { identity: identity.into(), holds: false, checked, witness: Some(witness) }
    }
}

/// Parameter caps of the brute-force sides.
pub const IDENTITY_SET_CAP: usize = 12;
pub const IDENTITY_N_CAP: usize = 14;

pub fn verify_identity(id: &Identity) -> IdentityReport {
    match id {
        Identity::Jolie { n } => check_jolie(*n),
        Identity::Gencomb { f } => check_gencomb(f),
        Identity::Eta { a } => check_eta(a),
        Identity::Kernels { a } => check_kernels(a),
        Identity::Bridge { n } => {
            let b = verify_counting_bridge(*n);
            if b.holds {
                IdentityReport::ok("bridge", b.rows.len())
            } else {
                let bad = b.rows.iter().find(|r| !r.holds()).map(|r| format!("{r:?}"));
                IdentityReport::fail("bridge", b.rows.len(), bad.unwrap_or_default())
            }
        }
        Identity::Renewal { n, tol } => {
            let r = verify_renewal_asymptotics(*n);
            let last = r.rows.last().map(|r| r.u_ratio).unwrap_or(f64::NAN);
            if (last - 1.0).abs() < *tol {
                IdentityReport::ok("renewal", 1)
            } else {
                IdentityReport::fail("renewal", 1, format!("u_n·√(3πn) = {last} at n = {n}"))
            }
        }
    }
}

/// Left side of the jolie identity by direct summation over subsets.
pub fn jolie_lhs(n: usize) -> BigInt {
    let m = n + 1;
    let mut total = BigInt::zero();
    for mask in 1u64..(1u64 << m) {
        let mut prod = BigInt::one();
        let mut prev: Option<i64> = None;
        for x in 0..m as i64 {
            if mask >> x & 1 == 1 {
                if let Some(p) = prev {
                    prod *= 2 * (x - p) - 1;
                }
                prev = Some(x);
            }
        }
        total += prod;
    }
    total
}

fn check_jolie(n: usize) -> IdentityReport {
    if n > IDENTITY_N_CAP {
        return IdentityReport::fail("jolie", 0, format!("n = {n} exceeds cap {IDENTITY_N_CAP}"));
    }
    let lhs = jolie_lhs(n);
    let rhs = num_traits::pow(BigInt::from(3), n);
    if lhs == rhs {
        IdentityReport::ok("jolie", 1)
    } else {
        IdentityReport::fail("jolie", 1, format!("n = {n}: {lhs} ≠ {rhs}"))
    }
}

/// The five sums of the subset lemma over `F`, in the order of `f`:
/// `(Σ η, Σ η·max, Σ η·min·max, Σ_{max=f_n} η, Σ_{min=f_1,max=f_n} η)`.
pub fn gencomb_sums(f: &[i64]) -> [BigInt; 5] {
    let n = f.len();
    let mut s = [BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero()];
    for mask in 1u64..(1u64 << n) {
        let b: Vec<i64> = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| f[i]).collect();
        let e = eta(&b);
        let (lo, hi) = (b[0], *b.last().unwrap());
        s[1] += &e * hi;
        s[2] += &e * lo * hi;
        if mask >> (n - 1) & 1 == 1 {
            s[3] += &e;
            if mask & 1 == 1 {
                s[4] += &e;
            }
        }
        s[0] += e;
    }
    s
}

/// Right sides matching [`gencomb_sums`]; the last two are `None` below the
/// sizes where they are stated (2 and 3).
pub fn gencomb_rhs(f: &[i64]) -> [Option<BigInt>; 5] {
    let n = f.len();
    let ep = eta_plus(f);
    let (first, last) = (f[0], f[n - 1]);
    let r0 = ep.clone();
    let r1 = BigInt::one() + (last - 1) * &ep;
    let r2 = BigInt::one() + BigInt::from(last - 1) * (first + 1) * &ep;
    let r3 = (n >= 2).then(|| BigInt::from(f[n - 1] - f[n - 2]) * eta_plus(&f[..n - 1]));
    let r4 = (n >= 3).then(|| BigInt::from(f[1] - f[0]) * (f[n - 1] - f[n - 2]) * eta_plus(&f[1..n - 1]));
    [Some(r0), Some(r1), Some(r2), r3, r4]
}

const GENCOMB_NAMES: [&str; 5] = ["sum eta", "sum eta·max", "sum eta·min·max", "max fixed", "min and max fixed"];

fn check_gencomb(f: &[i64]) -> IdentityReport {
    if f.is_empty() || f.len() > IDENTITY_SET_CAP {
        return IdentityReport::fail("gencomb", 0, format!("|F| = {} outside 1..={IDENTITY_SET_CAP}", f.len()));
    }
    let mut distinct = f.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() != f.len() {
        return IdentityReport::fail("gencomb", 0, format!("{f:?} has repeated elements"));
    }
    let lhs = gencomb_sums(f);
    let rhs = gencomb_rhs(f);
    let mut checked = 0;
    for k in 0..5 {
        if let Some(r) = &rhs[k] {
            checked += 1;
            if &lhs[k] != r {
                return IdentityReport::fail(
                    "gencomb",
                    checked,
                    format!("F = {f:?}, {}: {} ≠ {}", GENCOMB_NAMES[k], lhs[k], r),
                );
            }
        }
    }
    IdentityReport::ok("gencomb", checked)
}

fn check_eta(a: &[i64]) -> IdentityReport {
    let Ok(a) = AdmissibleSet::from_unsorted(a.iter().copied()) else {
        return IdentityReport::fail("eta", 0, format!("{a:?} is not admissible"));
    };
    let lhs = num_traits::pow(BigInt::from(3), a.len()) * a.eta();
    let rhs = eta_plus(a.augment().elems());
    if lhs == rhs {
        IdentityReport::ok("eta", 1)
    } else {
        IdentityReport::fail("eta", 1, format!("A = {a}: {lhs} ≠ {rhs}"))
    }
}

/// Exact kernel identities at one state, over enumerated rows:
/// row sums for all applicable kinds; for the UIP the drift of `max`,
/// `min·max` and `max + min`; the h-transform link to the UIP+ when
/// `A ⊂ N`.
pub fn kernel_identity_failures(a: &AdmissibleSet) -> Vec<String> {
    let mut bad = Vec::new();
    let inv = ExactProb::new(BigInt::one(), num_traits::pow(BigInt::from(3), a.len()) * a.eta());
    let Ok(uip) = enumerate_row(KernelKind::Uip, a) else {
        return vec![format!("row of {a} exceeds the enumeration cap")];
    };
    let sum: ExactProb = uip.entries.values().cloned().sum();
    if sum != ExactProb::one() {
        bad.push(format!("UIP row at {a} sums to {}", to_string(&sum)));
    }
    let (mut emax, mut eminmax, mut esum) = (zero(), zero(), zero());
    for (b, p) in &uip.entries {
        let b = b.as_set().expect("UIP rows have no empty target");
        emax += p * int(b.max());
        eminmax += p * int(b.min() * b.max());
        esum += p * int(b.min() + b.max());
    }
    if emax != int(a.max()) + &inv {
        bad.push(format!("E[max] at {a} is {}", to_string(&emax)));
    }
    if eminmax != int(a.min() * a.max()) + &inv {
        bad.push(format!("E[min·max] at {a} is {}", to_string(&eminmax)));
    }
    if esum != int(a.min() + a.max()) {
        bad.push(format!("E[max+min] at {a} is {}", to_string(&esum)));
    }
    if a.min() >= 0 {
        for kind in [KernelKind::Bhp, KernelKind::UipPlus] {
            let row = enumerate_row(kind, a).expect("subrow of an enumerable row");
            let s: ExactProb = row.entries.values().cloned().sum();
            if s != ExactProb::one() {
                bad.push(format!("{kind:?} row at {a} sums to {}", to_string(&s)));
            }
        }
        let plus: BTreeMap<Layer, ExactProb> = enumerate_row(KernelKind::UipPlus, a)
            .expect("subrow of an enumerable row")
            .entries
            .into_iter()
            .collect();
        let ha = int((a.min() + 1) * (a.max() + 2));
        for (b, p) in &uip.entries {
            let bs = b.as_set().unwrap();
            let hb = int((bs.min() + 1) * (bs.max() + 2));
            let q = plus.get(b).cloned().unwrap_or_else(zero);
            if bs.min() >= 0 && &q * &ha != p * &hb {
                bad.push(format!("h-transform fails at {a} → {b}"));
            }
        }
    }
    bad
}

fn check_kernels(a: &[i64]) -> IdentityReport {
    let Ok(a) = AdmissibleSet::from_unsorted(a.iter().copied()) else {
        return IdentityReport::fail("kernels", 0, format!("{a:?} is not admissible"));
    };
    let bad = kernel_identity_failures(&a);
    match bad.into_iter().next() {
        None => IdentityReport::ok("kernels", 1),
        Some(w) => IdentityReport::fail("kernels", 1, w),
    }
}

/// Random parameter sets for [`sweep_identity`].
pub fn random_distinct_set<R: Rng + ?Sized>(max_len: usize, span: i64, rng: &mut R) -> Vec<i64> {
    let len = rng.gen_range(1..=max_len);
    let mut pool: Vec<i64> = (-span..=span).collect();
    pool.shuffle(rng);
    pool.truncate(len);
    pool
}

pub fn random_admissible<R: Rng + ?Sized>(max_len: usize, span: i64, rng: &mut R) -> AdmissibleSet {
    let parity = rng.gen_range(0..2i64);
    let len = rng.gen_range(1..=max_len);
    let mut pool: Vec<i64> = (-span..=span).filter(|x| x.rem_euclid(2) == parity).collect();
    pool.shuffle(rng);
    pool.truncate(len);
    AdmissibleSet::from_unsorted(pool).expect("same-parity pool")
}

/// Runs `trials` randomized instances of a named identity family and stops
/// at the first failure. `gencomb` uses integer sets in random order (the
/// lemma holds for any enumeration order), `eta` and `kernels` random
/// admissible sets.
pub fn sweep_identity(name: &str, trials: usize, seed: u64) -> IdentityReport {
    let mut rng = RngStream::new(seed, 0);
    for t in 0..trials {
        let id = match name {
            "gencomb" => Identity::Gencomb { f: random_distinct_set(10, 30, &mut rng) },
            "eta" => Identity::Eta { a: random_admissible(10, 40, &mut rng).elems().to_vec() },
            "kernels" => Identity::Kernels { a: random_admissible(6, 20, &mut rng).elems().to_vec() },
            "jolie" => Identity::Jolie { n: t % (IDENTITY_N_CAP + 1) },
            _ => return IdentityReport::fail(name, 0, format!("unknown identity family {name}")),
        };
        let r = verify_identity(&id);
        if !r.holds {
            return IdentityReport { checked: t + 1, ..r };
        }
    }
    IdentityReport::ok(name, trials)
}

/// One size of the counting bridge.
#[derive(Clone, Debug, Serialize)]
pub struct BridgeRow {
    pub n: usize,
    pub pyramids: String,
    /// `3ⁿ · P(S_n < min_{j<n} S_j)`
    pub pyramid_walk: String,
    pub half_pyramids: String,
    /// `3ⁿ · P(S_j ≥ 0 for j < n, S_n < 0)`
    pub half_walk: String,
    /// `3ⁿ · P(S̆_n = min_{j<n} S̆_j − 1, max_{j≤n} S̆_j ≤ 0)`
    pub nonpos_shaved_walk: String,
    /// `3ⁿ aₙ` from the excursion recursion
    pub half_series: String,
}

impl BridgeRow {
    pub fn holds(&self) -> bool {
        self.pyramids == self.pyramid_walk
            && self.half_pyramids == self.half_walk
            && self.half_walk == self.nonpos_shaved_walk
            && self.half_walk == self.half_series
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BridgeReport {
    pub rows: Vec<BridgeRow>,
    pub holds: bool,
}

/// `P(S_n < min_{j<n} S_j)` for `n ≤ n_max`, by a DP on the height above
/// the running minimum with the raw step law.
pub fn strict_minimum_probs(n_max: usize) -> Vec<ExactProb> {
    let mut out = vec![zero(); n_max + 1];
    let third = ratio(1, 3);
    let mut cur = vec![ExactProb::one()];
    for slot in out.iter_mut().skip(1) {
        let mut next = vec![zero(); cur.len() + 1];
        let mut hit = zero();
        for (h, p) in cur.iter().enumerate() {
            next[h + 1] += p * ratio(2, 3);
            for j in 1..=h {
                next[h - j] += p * pow2(-(j as i64)) * &third;
            }
            hit += p * pow2(-(h as i64)) * &third;
        }
        next[0] += &hit;
        *slot = hit;
        cur = next;
    }
    out
}

/// `P(S_j ≥ 0 for j < n, S_n < 0)` by a DP on the current value.
pub fn first_entry_probs(n_max: usize) -> Vec<ExactProb> {
    let mut out = vec![zero(); n_max + 1];
    let third = ratio(1, 3);
    let mut cur = vec![ExactProb::one()];
    for slot in out.iter_mut().skip(1) {
        let mut next = vec![zero(); cur.len() + 1];
        let mut hit = zero();
        for (z, p) in cur.iter().enumerate() {
            next[z + 1] += p * ratio(2, 3);
            for j in 1..=z {
                next[z - j] += p * pow2(-(j as i64)) * &third;
            }
            hit += p * pow2(-(z as i64)) * &third;
        }
        *slot = hit;
        cur = next;
    }
    out
}

/// `P(S̆_n = min_{j<n} S̆_j − 1 and max_{j≤n} S̆_j ≤ 0)` by a DP on
/// (value, running minimum) of the shaved walk.
pub fn nonpos_strict_minimum_probs(n_max: usize) -> Vec<ExactProb> {
    let mut out = vec![zero(); n_max + 1];
    let third = ratio(1, 3);
    let mut cur: BTreeMap<(i64, i64), ExactProb> = BTreeMap::new();
    cur.insert((0, 0), ExactProb::one());
    for slot in out.iter_mut().skip(1) {
        let mut next: BTreeMap<(i64, i64), ExactProb> = BTreeMap::new();
        let mut hit = zero();
        for (&(x, m), p) in &cur {
            if x < 0 {
                *next.entry((x + 1, m)).or_insert_with(zero) += p * ratio(2, 3);
            }
            for j in 1..=(x - m) {
                *next.entry((x - j, m)).or_insert_with(zero) += p * pow2(-j) * &third;
            }
            let q = p * pow2(-(x - m)) * &third;
            hit += &q;
            *next.entry((m - 1, m - 1)).or_insert_with(zero) += q;
        }
        *slot = hit;
        cur = next;
    }
    out
}

/// Checks the counting bridges for every size `1..=n`.
pub fn verify_counting_bridge(n: usize) -> BridgeReport {
    let pyr = count_table(AnimalKind::Pyramid, n);
    let half = count_table(AnimalKind::HalfPyramid, n);
    let smin = strict_minimum_probs(n);
    let first = first_entry_probs(n);
    let nonpos = nonpos_strict_minimum_probs(n);
    let (a_int, _) = excursion_integers(n);
    let scaled = |p: &ExactProb, k: usize| to_string(&(p * pow3(k as i64)));
    let rows: Vec<BridgeRow> = (1..=n)
        .map(|k| BridgeRow {
            n: k,
            pyramids: to_string(&int(pyr.counts[&k].clone())),
            pyramid_walk: scaled(&smin[k], k),
            half_pyramids: to_string(&int(half.counts[&k].clone())),
            half_walk: scaled(&first[k], k),
            nonpos_shaved_walk: scaled(&nonpos[k], k),
            half_series: to_string(&int(a_int[k].clone())),
        })
        .collect();
    let holds = rows.iter().all(BridgeRow::holds);
    BridgeReport { rows, holds }
}

/// Known OEIS prefixes used to label the computed sequences.
pub const A001006: [u64; 12] = [1, 1, 2, 4, 9, 21, 51, 127, 323, 835, 2188, 5798];
pub const A005773: [u64; 12] = [1, 2, 5, 13, 35, 96, 267, 750, 2123, 6046, 17303, 49721];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OeisAssignment {
    pub pyramid: Option<&'static str>,
    pub half_pyramid: Option<&'static str>,
}

/// Which reference sequence each computed count sequence matches.
pub fn oeis_assignment() -> OeisAssignment {
    let label = |kind| {
        let t = count_table(kind, 12);
        let v: Vec<u64> = t.counts.values().map(|c| c.to_u64().unwrap()).collect();
        if v == A001006 {
            Some("A001006")
        } else if v == A005773 {
            Some("A005773")
        } else {
            None
        }
    };
    OeisAssignment { pyramid: label(AnimalKind::Pyramid), half_pyramid: label(AnimalKind::HalfPyramid) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn count_examples() {
        assert_eq!(count(AnimalKind::Pyramid, 1), big(1));
        assert_eq!(count(AnimalKind::Pyramid, 2), big(2));
        assert_eq!(count(AnimalKind::HalfPyramid, 2), big(1));
        assert_eq!(count(AnimalKind::HalfPyramid, 1), big(1));
        for n in 1..=12usize {
            assert_eq!(count(AnimalKind::CompactSource, n), num_traits::pow(big(3), n - 1));
        }
    }

    #[test]
    fn sourced_paths_match_counts() {
        let origin = AdmissibleSet::singleton(0);
        let pair = AdmissibleSet::new(vec![-2, 0]).unwrap();
        for n in 1..=9 {
            assert_eq!(big(enumerate_paths_with_sources(&origin, n, ENUM_CAP).unwrap().len() as u64), count(AnimalKind::Pyramid, n));
            let two = enumerate_paths_with_sources(&pair, n, ENUM_CAP).unwrap();
            assert_eq!(big(two.len() as u64), count_compact_by_sources(n).get(1).cloned().unwrap_or_default());
        }
        let far = AdmissibleSet::new(vec![-4, 0, 4]).unwrap();
        for p in enumerate_paths_with_sources(&far, 8, ENUM_CAP).unwrap() {
            let a = decode_trusted(&p);
            let xs: Vec<i64> = a.sources().iter().map(|v| v.x).collect();
            assert_eq!(xs, vec![-4, 0, 4]);
        }
    }

    #[test]
    fn naive_dp_agrees() {
        for n in 1..=11 {
            assert_eq!(count_pyramids_naive(n), count(AnimalKind::Pyramid, n), "n = {n}");
            assert_eq!(count_nonpos_pyramids(n), count(AnimalKind::HalfPyramid, n), "n = {n}");
        }
    }

    #[test]
    fn excursion_examples() {
        let s = excursion_law(6);
        assert_eq!(s.a[1], ratio(1, 3));
        assert_eq!(s.a[2], ratio(1, 9));
        assert_eq!(s.a[3], ratio(2, 27));
        assert_eq!(s.u[1], ratio(1, 3));
        assert_eq!(s.u[2], ratio(2, 9));
        let f = excursion_law_f64(6);
        for n in 1..=6 {
            assert!((f.a[n] - crate::exact::to_f64(&s.a[n])).abs() < 1e-15);
            assert!((f.u[n] - crate::exact::to_f64(&s.u[n])).abs() < 1e-15);
        }
    }

    #[test]
    fn renewal_mass_is_pyramid_density() {
        let s = excursion_law(12);
        for n in 1..=12usize {
            assert_eq!(s.u[n], int(count(AnimalKind::Pyramid, n)) * pow3(-(n as i64)));
        }
    }

    #[test]
    fn identity_examples() {
        assert_eq!(jolie_lhs(1), big(3));
        let s = gencomb_sums(&[0, 4, 6]);
        assert_eq!(s[0], big(15));
        assert!(verify_identity(&Identity::Gencomb { f: vec![0, 4, 6] }).holds);
        assert!(verify_identity(&Identity::Eta { a: vec![0, 2, 6] }).holds);
        assert_eq!(eta_plus(&[-1, 1, 3, 5, 7]), big(81));
        assert!(verify_identity(&Identity::Kernels { a: vec![0, 2] }).holds);
        let bad = verify_identity(&Identity::Gencomb { f: vec![1, 1] });
        assert!(!bad.holds);
    }

    #[test]
    fn enumeration_examples() {
        let two: Vec<Animal> = enumerate_animals(AnimalKind::Pyramid, 2).unwrap().collect();
        assert_eq!(two.len(), 2);
        let one: Vec<Animal> = enumerate_animals(AnimalKind::HalfPyramid, 1).unwrap().collect();
        assert_eq!(one, vec![Animal::from_points(&[(0, 0)]).unwrap()]);
        assert!(matches!(
            enumerate_animals(AnimalKind::Pyramid, 13),
            Err(EnumError::Cap { n: 13, cap: 12 })
        ));
    }

    #[test]
    fn oeis_labels_follow_the_dp() {
        let o = oeis_assignment();
        assert_eq!(o.pyramid, Some("A005773"));
        assert_eq!(o.half_pyramid, Some("A001006"));
    }
}
