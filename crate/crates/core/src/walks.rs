//! The animal walk `S` with steps `μ_k = 2^k/3` on `{1} ∪ Z₋*`, its shaved
//! version, ladder times, exit probabilities, harmonic functions and the
//! excursion samplers used to build random animals.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{int, pow2, pow3, ratio, ExactProb};

pub const DEFAULT_STEP_CAP: u64 = 100_000_000;

/// Step cap for excursion samplers, overridable by `ANIMALAB_STEP_CAP`.
pub fn step_cap() -> u64 {
    static CAP: OnceLock<u64> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("ANIMALAB_STEP_CAP")
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .filter(|&c| c > 0)
            .unwrap_or(DEFAULT_STEP_CAP)
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WalkError {
    #[error("step cap of {cap} exceeded")]
    StepCap { cap: u64 },
    #[error("operation not defined for {0:?} traces")]
    WrongKind(WalkKind),
    #[error("increment at index {index} is outside {{1}} ∪ Z₋*")]
    InvalidIncrement { index: usize },
    #[error("domain violation: {0}")]
    Domain(String),
}

/// The step law `μ`.
#[derive(Clone, Copy, Debug, Default)]
pub struct StepLaw;

impl StepLaw {
    /// `μ_k`, zero off the support.
    pub fn mass(k: i64) -> ExactProb {
        if k == 1 || k <= -1 {
            pow2(k) / int(3)
        } else {
            int(0)
        }
    }

    /// `μ((−∞, −k])` for `k ≥ 1`, i.e. `2^{1−k}/3`.
    pub fn tail_below(k: i64) -> ExactProb {
        pow2(1 - k) / int(3)
    }
}

/// A reproducible random stream keyed by `(seed, stream_id)`; distinct ids
/// give independent counter-based ChaCha streams.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> RngStream {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        RngStream { seed, stream_id, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }
    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }
    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.rng.try_fill_bytes(dest)
    }
}

/// `G ≥ 1` with `P(G = k) = 2^{−k}`: one plus the number of trailing zero
/// bits of uniform words.
pub fn sample_geometric<R: Rng + ?Sized>(rng: &mut R) -> i64 {
    let mut g = 1;
    loop {
        let u = rng.next_u64();
        if u != 0 {
            return g + u.trailing_zeros() as i64;
        }
        g += 64;
    }
}

/// One increment of `S`.
pub fn sample_step<R: Rng + ?Sized>(rng: &mut R) -> i64 {
    if rng.gen_range(0u32..3) < 2 {
        1
    } else {
        -sample_geometric(rng)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WalkKind {
    Raw,
    Shaved,
    ShavedConditionedNonpos,
    ConditionedNonneg,
}

/// A realized trajectory together with its descending ladder epochs
/// (`ladder_times[k−1] = τ_{−k}`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkTrace {
    pub values: Vec<i64>,
    pub ladder_times: Vec<usize>,
    pub kind: WalkKind,
}

impl WalkTrace {
    pub fn new(values: Vec<i64>, kind: WalkKind) -> WalkTrace {
        let ladder_times = ladder_times(&values);
        WalkTrace { values, ladder_times, kind }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> i64 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    pub fn min(&self) -> i64 {
        self.values.iter().copied().min().unwrap_or(0)
    }
}

/// Times at which the path strictly beats its running minimum.
pub fn ladder_times(values: &[i64]) -> Vec<usize> {
    let mut out = Vec::new();
    let Some(&first) = values.first() else {
        return out;
    };
    let mut min = first;
    for (n, &v) in values.iter().enumerate().skip(1) {
        if v < min {
            out.push(n);
            min = v;
        }
    }
    out
}

fn check_increments(values: &[i64]) -> Result<(), WalkError> {
    for (i, w) in values.windows(2).enumerate() {
        let d = w[1] - w[0];
        if d != 1 && d > -1 {
            return Err(WalkError::InvalidIncrement { index: i + 1 });
        }
    }
    Ok(())
}

pub fn sample_walk<R: Rng + ?Sized>(n: usize, rng: &mut R) -> WalkTrace {
    let mut values = Vec::with_capacity(n + 1);
    let mut x = 0;
    values.push(x);
    for _ in 0..n {
        x += sample_step(rng);
        values.push(x);
    }
    WalkTrace::new(values, WalkKind::Raw)
}

/// Clips every undershoot of the running minimum to exactly one below it.
pub fn shave(t: &WalkTrace) -> Result<WalkTrace, WalkError> {
    if t.kind != WalkKind::Raw {
        return Err(WalkError::WrongKind(t.kind));
    }
    check_increments(&t.values)?;
    let Some(&first) = t.values.first() else {
        return Ok(WalkTrace::new(Vec::new(), WalkKind::Shaved));
    };
    let mut out = Vec::with_capacity(t.values.len());
    out.push(first);
    let (mut raw_min, mut min) = (first, first);
    for w in t.values.windows(2) {
        let next = if w[1] < raw_min {
            raw_min = w[1];
            min -= 1;
            min
        } else {
            out.last().unwrap() + (w[1] - w[0])
        };
        out.push(next);
    }
    Ok(WalkTrace::new(out, WalkKind::Shaved))
}

/// State of the shaved walk: current value and running minimum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShavedState {
    pub x: i64,
    pub min: i64,
}

impl ShavedState {
    pub fn origin() -> ShavedState {
        ShavedState { x: 0, min: 0 }
    }

    /// Applies a raw increment with shaving.
    pub fn apply(&mut self, d: i64) {
        let y = self.x + d;
        if y < self.min {
            self.min -= 1;
            self.x = self.min;
        } else {
            self.x = y;
        }
    }

    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> i64 {
        self.apply(sample_step(rng));
        self.x
    }
}

/// The shaved walk run for `n` steps from the origin.
pub fn sample_shaved_walk<R: Rng + ?Sized>(n: usize, rng: &mut R) -> WalkTrace {
    let mut s = ShavedState::origin();
    let mut values = Vec::with_capacity(n + 1);
    values.push(0);
    for _ in 0..n {
        values.push(s.step(rng));
    }
    WalkTrace::new(values, WalkKind::Shaved)
}

/// Exact probability of the realized path: `2^{x_n}/3^n` for the raw walk and
/// `2^{x_n − min}/3^n` for the shaved walk.
pub fn path_prob(t: &WalkTrace) -> Result<ExactProb, WalkError> {
    if t.values.is_empty() {
        return Err(WalkError::Domain("empty trace".into()));
    }
    check_increments(&t.values)?;
    let n = (t.values.len() - 1) as i64;
    let last = *t.values.last().unwrap();
    if t.values[0] != 0 {
        return Err(WalkError::Domain("trace must start at 0".into()));
    }
    match t.kind {
        WalkKind::Raw => Ok(pow2(last) * pow3(-n)),
        WalkKind::Shaved => {
            let mut min = 0;
            for &v in &t.values[1..] {
                if v < min - 1 {
                    return Err(WalkError::Domain("shaved trace beats its minimum by more than 1".into()));
                }
                min = min.min(v);
            }
            Ok(pow2(last - min) * pow3(-n))
        }
        k => Err(WalkError::WrongKind(k)),
    }
}

/// `P(S enters ⟦−∞, −y⟧ before hitting x) = x/(x+y+1)`.
pub fn exit_probability(x: i64, y: i64) -> Result<ExactProb, WalkError> {
    if x < 0 || y < 1 {
        return Err(WalkError::Domain(format!("need x ≥ 0 and y ≥ 1, got x={x}, y={y}")));
    }
    Ok(ratio(x, x + y + 1))
}

/// `h⁺(z) = z + 2` on `z ≥ 0`.
pub fn h_plus(z: i64) -> Result<BigInt, WalkError> {
    if z < 0 {
        return Err(WalkError::Domain(format!("h⁺ needs z ≥ 0, got {z}")));
    }
    Ok(BigInt::from(z) + 2)
}

/// `h⁻(z) = |z| + 1` on `z ≤ 0`.
pub fn h_minus(z: i64) -> Result<BigInt, WalkError> {
    if z > 0 {
        return Err(WalkError::Domain(format!("h⁻ needs z ≤ 0, got {z}")));
    }
    Ok(BigInt::from(-z) + 1)
}

/// `h(m, x) = (|x| + 1)(|m| + 2)` for `m ≤ x ≤ 0`.
pub fn h_pair(m: i64, x: i64) -> Result<BigInt, WalkError> {
    if !(m <= x && x <= 0) {
        return Err(WalkError::Domain(format!("h needs m ≤ x ≤ 0, got m={m}, x={x}")));
    }
    Ok((BigInt::from(-x) + 1) * (BigInt::from(-m) + 2))
}

/// `P_{(m,x)}(τ_{−N} < τ_1) = h(m,x)/((N+1)(N+2))` for the shaved walk, with
/// `−N ≤ m`.
pub fn shaved_exit_probability(m: i64, x: i64, n: i64) -> Result<ExactProb, WalkError> {
    let h = h_pair(m, x)?;
    if -n > m {
        return Err(WalkError::Domain(format!("need −N ≤ m, got N={n}, m={m}")));
    }
    Ok(ExactProb::new(h, BigInt::from((n + 1) * (n + 2))))
}

/// Positive excursion `S_0..S_{τ₋₁−1}` under the configured step cap.
pub fn sample_excursion<R: Rng + ?Sized>(rng: &mut R) -> Result<WalkTrace, WalkError> {
    sample_excursion_with_cap(step_cap(), rng)
}

pub fn sample_excursion_with_cap<R: Rng + ?Sized>(cap: u64, rng: &mut R) -> Result<WalkTrace, WalkError> {
    let mut values = vec![0];
    let mut x = 0;
    let mut steps = 0u64;
    loop {
        x += sample_step(rng);
        steps += 1;
        if x < 0 {
            return Ok(WalkTrace::new(values, WalkKind::Raw));
        }
        if steps >= cap {
            return Err(WalkError::StepCap { cap });
        }
        values.push(x);
    }
}

/// Positive excursion, or `None` as soon as it has more than `max_len`
/// points (the walk is then abandoned, not completed).
pub fn sample_excursion_bounded<R: Rng + ?Sized>(max_len: usize, rng: &mut R) -> Option<WalkTrace> {
    let mut values = vec![0];
    let mut x = 0;
    loop {
        x += sample_step(rng);
        if x < 0 {
            return Some(WalkTrace::new(values, WalkKind::Raw));
        }
        values.push(x);
        if values.len() > max_len {
            return None;
        }
    }
}

/// Positive excursion conditioned on `sup ≤ k`, by rejection with early abort.
pub fn sample_conditioned_excursion<R: Rng + ?Sized>(k: i64, rng: &mut R) -> Result<WalkTrace, WalkError> {
    conditioned_excursion_values(k, step_cap(), rng).map(|v| WalkTrace::new(v, WalkKind::Raw))
}

fn conditioned_excursion_values<R: Rng + ?Sized>(k: i64, cap: u64, rng: &mut R) -> Result<Vec<i64>, WalkError> {
    assert!(k >= 0, "level must be non-negative");
    let mut steps = 0u64;
    let mut values = Vec::new();
    'attempt: loop {
        values.clear();
        values.push(0);
        let mut x = 0;
        loop {
            x += sample_step(rng);
            steps += 1;
            if steps > cap {
                return Err(WalkError::StepCap { cap });
            }
            if x < 0 {
                return Ok(values);
            }
            if x > k {
                continue 'attempt;
            }
            values.push(x);
        }
    }
}

/// `S̆⁻` stopped at its first hit of `−depth`: the excursions `V^k` (sup ≤ k)
/// shifted down by `k`, for `k < depth`, followed by the final point.
pub fn sample_shaved_nonpos<R: Rng + ?Sized>(depth: i64, rng: &mut R) -> Result<WalkTrace, WalkError> {
    if depth < 1 {
        return Err(WalkError::Domain(format!("depth must be ≥ 1, got {depth}")));
    }
    let cap = step_cap();
    let mut values = Vec::new();
    for k in 0..depth {
        let v = conditioned_excursion_values(k, cap, rng)?;
        values.extend(v.into_iter().map(|x| x - k));
    }
    values.push(-depth);
    Ok(WalkTrace::new(values, WalkKind::ShavedConditionedNonpos))
}

/// Draws an index with probability proportional to the given non-negative
/// integer weights.
fn pick_weighted<R: Rng + ?Sized>(weights: &[BigUint], rng: &mut R) -> usize {
    let total: BigUint = weights.iter().sum();
    let mut u = rng.gen_biguint_below(&total);
    for (i, w) in weights.iter().enumerate() {
        if &u < w {
            return i;
        }
        u -= w;
    }
    unreachable!("weights exhausted")
}

/// `S̆⁻` stopped at `−depth`, sampled step by step as the `h`-transform of the
/// shaved walk killed on leaving `Z₋`. Kept as a cross-check of the
/// excursion decomposition.
pub fn sample_shaved_nonpos_stepwise<R: Rng + ?Sized>(depth: i64, rng: &mut R) -> WalkTrace {
    let (mut m, mut x) = (0i64, 0i64);
    let mut values = vec![0];
    while m > -depth {
        // weights scaled by 3(|x|+1)2^{x−m}: a +1 step, the jumps −j with
        // x − j ≥ m, then a new minimum
        let d = (x - m) as usize;
        let ax = BigUint::from((-x) as u64);
        let mut w = Vec::with_capacity(d + 2);
        w.push((BigUint::one() << (d + 1)) * &ax);
        for j in 1..=d {
            w.push((BigUint::one() << (d - j)) * (&ax + BigUint::from(j as u64 + 1)));
        }
        w.push(BigUint::from((-m) as u64 + 3));
        let i = pick_weighted(&w, rng);
        if i == 0 {
            x += 1;
        } else if i <= d {
            x -= i as i64;
        } else {
            m -= 1;
            x = m;
        }
        values.push(x);
    }
    WalkTrace::new(values, WalkKind::ShavedConditionedNonpos)
}

/// Exact row of the `h⁺`-tilted step law at `z ≥ 0`: pairs `(step, prob)`.
pub fn nonneg_step_law(z: i64) -> Vec<(i64, ExactProb)> {
    assert!(z >= 0);
    let hz = int(z + 2);
    let mut row = vec![(1, StepLaw::mass(1) * int(z + 3) / &hz)];
    for j in 1..=z {
        row.push((-j, StepLaw::mass(-j) * int(z - j + 2) / &hz));
    }
    row
}

/// One step of `S⁺` from `z`: `+1` with probability `2(z+3)/(3(z+2))`,
/// otherwise `−j` with probability proportional to `2^{−j}(z−j+2)`.
pub fn sample_nonneg_step<R: Rng + ?Sized>(z: i64, rng: &mut R) -> i64 {
    let den = 3 * (z as u64 + 2);
    if rng.gen_range(0..den) < 2 * (z as u64 + 3) {
        return 1;
    }
    loop {
        let j = sample_geometric(rng);
        if j <= z && rng.gen_range(0..(z as u64 + 1)) < (z - j + 2) as u64 {
            return -j;
        }
    }
}

/// `S⁺` for `n` steps from 0.
pub fn sample_walk_nonneg<R: Rng + ?Sized>(n: usize, rng: &mut R) -> WalkTrace {
    let mut values = Vec::with_capacity(n + 1);
    let mut z = 0;
    values.push(0);
    for _ in 0..n {
        z += sample_nonneg_step(z, rng);
        values.push(z);
    }
    WalkTrace::new(values, WalkKind::ConditionedNonneg)
}

/// Uniform integer in `[0, n)` for big bounds.
pub fn uniform_below<R: Rng + ?Sized>(n: &BigUint, rng: &mut R) -> BigUint {
    if n.is_zero() {
        return BigUint::zero();
    }
    rng.gen_biguint_below(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{one, zero};

    #[test]
    fn step_law_masses() {
        assert_eq!(StepLaw::mass(1), ratio(2, 3));
        assert_eq!(StepLaw::mass(-1), ratio(1, 6));
        assert_eq!(StepLaw::mass(0), zero());
        assert_eq!(StepLaw::mass(2), zero());
        // Σ_{k≤−1} μ_k = 1/3 summed up to depth 200 plus the closed-form tail
        let mut s = StepLaw::mass(1);
        let mut mean = StepLaw::mass(1);
        for k in 1..=200 {
            s += StepLaw::mass(-k);
            mean -= StepLaw::mass(-k) * int(k);
        }
        s += StepLaw::tail_below(201);
        assert_eq!(s, one());
        // remaining tail of Σ k μ_{−k} beyond 200 is (202)·2^{−200}/3
        mean -= int(202) * pow2(-200) / int(3);
        assert_eq!(mean, zero());
    }

    #[test]
    fn streams_reproduce() {
        let a: Vec<i64> = sample_walk(50, &mut RngStream::new(7, 3)).values;
        let b: Vec<i64> = sample_walk(50, &mut RngStream::new(7, 3)).values;
        let c: Vec<i64> = sample_walk(50, &mut RngStream::new(7, 4)).values;
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn step_frequencies() {
        let mut rng = RngStream::new(1, 0);
        let n = 300_000;
        let (mut up, mut m1) = (0, 0);
        for _ in 0..n {
            match sample_step(&mut rng) {
                1 => up += 1,
                -1 => m1 += 1,
                _ => {}
            }
        }
        let z = |c: usize, p: f64| (c as f64 - n as f64 * p) / (n as f64 * p * (1.0 - p)).sqrt();
        assert!(z(up, 2.0 / 3.0).abs() < 4.0);
        assert!(z(m1, 1.0 / 6.0).abs() < 4.0);
    }

    #[test]
    fn shave_examples() {
        let t = WalkTrace::new(vec![0, 1, -3], WalkKind::Raw);
        assert_eq!(shave(&t).unwrap().values, vec![0, 1, -1]);
        let t = WalkTrace::new(vec![0, 1, 0 - 1, 0], WalkKind::Raw);
        assert_eq!(shave(&t).unwrap().values, vec![0, 1, -1, 0]);
        let t = WalkTrace::new(vec![0, 1, 1], WalkKind::Raw);
        assert!(shave(&t).is_err());
        let t = WalkTrace::new(vec![0, -1, -2, 0 - 1], WalkKind::Raw);
        assert_eq!(shave(&t).unwrap().values, t.values);
        assert!(shave(&shave(&t).unwrap()).is_err());
    }

    #[test]
    fn ladder_times_are_shared() {
        let mut rng = RngStream::new(11, 0);
        for _ in 0..200 {
            let t = sample_walk(300, &mut rng);
            let s = shave(&t).unwrap();
            assert_eq!(t.ladder_times, s.ladder_times);
            for (k, &tau) in s.ladder_times.iter().enumerate() {
                let first = s.values.iter().position(|&v| v == -(k as i64 + 1)).unwrap();
                assert_eq!(first, tau);
            }
        }
    }

    #[test]
    fn path_prob_examples() {
        let raw = |v: Vec<i64>| WalkTrace::new(v, WalkKind::Raw);
        assert_eq!(path_prob(&raw(vec![0, 1])).unwrap(), ratio(2, 3));
        assert_eq!(path_prob(&raw(vec![0, -2])).unwrap(), ratio(1, 12));
        let sh = WalkTrace::new(vec![0, -1], WalkKind::Shaved);
        assert_eq!(path_prob(&sh).unwrap(), ratio(1, 3));
        let c = WalkTrace::new(vec![0], WalkKind::ConditionedNonneg);
        assert!(path_prob(&c).is_err());
    }

    #[test]
    fn exit_and_harmonic_values() {
        assert_eq!(exit_probability(1, 1).unwrap(), ratio(1, 3));
        for y in 1..10 {
            assert_eq!(exit_probability(1, y).unwrap(), ratio(1, y + 2));
        }
        let mut prev = zero();
        for x in 0..50 {
            let p = exit_probability(x, 3).unwrap();
            assert!(p > prev || x == 0);
            assert!(p < one());
            prev = p;
        }
        assert!(exit_probability(-1, 1).is_err());
        assert_eq!(h_pair(0, 0).unwrap(), BigInt::from(2));
        assert_eq!(h_plus(0).unwrap(), BigInt::from(2));
        assert_eq!(h_minus(-3).unwrap(), BigInt::from(4));
        assert!(h_pair(1, 0).is_err());
        assert_eq!(shaved_exit_probability(0, 0, 1).unwrap(), ratio(2, 6));
    }

    #[test]
    fn tilted_rows_sum_to_one() {
        for z in 0..=100 {
            let s: ExactProb = nonneg_step_law(z).into_iter().map(|(_, p)| p).sum();
            assert_eq!(s, one(), "z = {z}");
        }
        assert_eq!(nonneg_step_law(0), vec![(1, one())]);
    }

    #[test]
    fn harmonicity_of_h_plus() {
        // Σ_j μ_j h⁺(z+j) 1{z+j ≥ 0} = h⁺(z)
        for z in 0..=100i64 {
            let mut s = StepLaw::mass(1) * int(z + 3);
            for j in 1..=z {
                s += StepLaw::mass(-j) * int(z - j + 2);
            }
            assert_eq!(s, int(z + 2));
        }
    }

    #[test]
    fn excursion_shapes() {
        let mut rng = RngStream::new(5, 0);
        for _ in 0..1000 {
            let e = sample_excursion(&mut rng).unwrap();
            assert_eq!(e.values[0], 0);
            assert!(e.values.iter().all(|&v| v >= 0));
        }
        assert!(matches!(
            sample_excursion_with_cap(1, &mut RngStream::new(0, 0)).err(),
            None | Some(WalkError::StepCap { cap: 1 })
        ));
        for k in 0..4 {
            let e = sample_conditioned_excursion(k, &mut rng).unwrap();
            assert!(e.max() <= k);
        }
        assert_eq!(sample_conditioned_excursion(0, &mut rng).unwrap().values, vec![0]);
    }

    #[test]
    fn nonpos_traces() {
        let mut rng = RngStream::new(9, 0);
        for depth in 1..6 {
            let t = sample_shaved_nonpos(depth, &mut rng).unwrap();
            assert!(t.values.iter().all(|&v| v <= 0));
            assert_eq!(*t.values.last().unwrap(), -depth);
            assert_eq!(t.ladder_times.len(), depth as usize);
            assert_eq!(t.values[t.ladder_times[0] - 1], 0);
            let s = sample_shaved_nonpos_stepwise(depth, &mut rng);
            assert!(s.values.iter().all(|&v| v <= 0));
            assert_eq!(*s.values.last().unwrap(), -depth);
        }
    }

    #[test]
    fn nonneg_walk_stays_nonneg() {
        let mut rng = RngStream::new(2, 2);
        let t = sample_walk_nonneg(5000, &mut rng);
        assert!(t.values.iter().all(|&v| v >= 0));
        assert_eq!(t.values[1], 1);
    }
}
