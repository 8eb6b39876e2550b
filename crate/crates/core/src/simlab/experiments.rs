//! Monte Carlo experiments. Each one fans out over independent RNG streams,
//! folds the per-stream tallies in stream order, and compares empirical
//! values to exact ones computed by the kernel, walk and enumeration code.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::encoding::drop_along;
use crate::enumeration::excursion_law;
use crate::exact::{int, one, zero, ExactProb};
use crate::kernels::{
    ball_law, cherry_probs, extreme_move_probs, future_infimum_prob, neighbour_fill_prob, sample_transition,
    KernelError, KernelKind,
};
use crate::lattice::{AdmissibleSet, Animal, Layer};
use crate::simlab::report::{ExperimentConfig, McReport, McRow};
use crate::simlab::samplers::{
    sample_bhp_ball, sample_uip_ball, sample_uip_plus_ball, sample_uip_plus_bluered, PyramidBallSampler, SampleError,
    DEFAULT_BUDGET,
};
use crate::walks::{exit_probability, sample_shaved_nonpos, sample_step, RngStream, WalkError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ExperimentError {
    #[error("unknown experiment {0}")]
    Unknown(String),
    #[error("bad parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

fn params(msg: impl Into<String>) -> ExperimentError {
    ExperimentError::Params(msg.into())
}

pub const EXPERIMENTS: &[&str] = &[
    "ball",
    "bluered",
    "width",
    "exit",
    "cherry",
    "extreme",
    "futurinf",
    "futurinf_proxy",
    "martingale",
    "sausaging",
    "transience",
    "local_limit",
    "height",
];

pub fn experiment(cfg: &ExperimentConfig) -> Result<McReport, ExperimentError> {
    if cfg.trials == 0 {
        return Err(params("trials must be at least 1"));
    }
    match cfg.experiment.as_str() {
        "ball" => ball(cfg),
        "bluered" => bluered(cfg),
        "width" => width(cfg),
        "exit" => exit(cfg),
        "cherry" => cherry(cfg),
        "extreme" => extreme(cfg),
        "futurinf" => futurinf(cfg),
        "futurinf_proxy" => futurinf_proxy(cfg),
        "martingale" => martingale(cfg),
        "sausaging" => sausaging(cfg),
        "transience" => transience(cfg),
        "local_limit" => local_limit(cfg),
        "height" => height(cfg),
        other => Err(ExperimentError::Unknown(other.into())),
    }
}

/// Runs `f(rng, trials)` on every stream and returns the results in stream
/// order.
pub fn per_stream<T: Send>(cfg: &ExperimentConfig, f: impl Fn(&mut RngStream, u64) -> T + Sync) -> Vec<T> {
    (0..cfg.streams.max(1))
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::new(cfg.seed, i);
            f(&mut rng, cfg.stream_trials(i))
        })
        .collect()
}

fn try_per_stream<T: Send, E: Send>(
    cfg: &ExperimentConfig,
    f: impl Fn(&mut RngStream, u64) -> Result<T, E> + Sync,
) -> Result<Vec<T>, E> {
    per_stream(cfg, f).into_iter().collect()
}

fn sum_counts(parts: Vec<Vec<u64>>) -> Vec<u64> {
    let mut out = vec![0; parts.first().map_or(0, Vec::len)];
    for p in parts {
        for (o, v) in out.iter_mut().zip(p) {
            *o += v;
        }
    }
    out
}

fn merge_maps<K: Ord>(parts: Vec<BTreeMap<K, u64>>) -> BTreeMap<K, u64> {
    let mut out = BTreeMap::new();
    for p in parts {
        for (k, v) in p {
            *out.entry(k).or_insert(0) += v;
        }
    }
    out
}

pub fn animal_label(a: &Animal) -> String {
    a.vertices().iter().map(|v| format!("({},{})", v.x, v.y)).collect()
}

fn set_from(v: &[i64]) -> Result<AdmissibleSet, ExperimentError> {
    AdmissibleSet::from_unsorted(v.iter().copied()).map_err(|e| params(e.to_string()))
}

fn tally_rows(
    rep: &mut McReport,
    name: &str,
    law: &[(Animal, ExactProb)],
    counts: &BTreeMap<Animal, u64>,
    trials: u64,
) {
    for (c, p) in law {
        let hits = counts.get(c).copied().unwrap_or(0);
        rep.rows.push(McRow::frequency(name, animal_label(c), hits, trials, Some(p.clone())));
    }
    let known: u64 = law.iter().map(|(c, _)| counts.get(c).copied().unwrap_or(0)).sum();
    rep.rows.push(McRow::frequency(name, "outside support", trials - known, trials, Some(zero())));
}

fn ball(cfg: &ExperimentConfig) -> Result<McReport, ExperimentError> {
    let kind = cfg.model.ok_or_else(|| params("ball needs a model"))?;
    let r = cfg.r.unwrap_or(1);
    let parts = try_per_stream(cfg, |rng, n| -> Result<BTreeMap<Animal, u64>, WalkError> {
        let mut m = BTreeMap::new();
        for _ in 0..n {
            let a = match kind {
                KernelKind::Bhp => sample_bhp_ball(r, rng),
                KernelKind::Uip => sample_uip_ball(r, rng),
                KernelKind::UipPlus => sample_uip_plus_ball(r, rng)?,
            };
            *m.entry(a).or_insert(0) += 1;
        }
        Ok(m)
    })?;
    let counts = merge_maps(parts);
    let mut rep = McReport::new(cfg.clone());
    tally_rows(&mut rep, "ball", &ball_law(kind, r), &counts, cfg.trials);
    Ok(rep)
}

/// `P(W ≥ k)` for the width of the half-pyramid, from the exit law.
pub fn width_tail(k: i64) -> ExactProb {
    one() - exit_probability(k, 1).expect("k ≥ 0")
}

fn bluered(cfg: &ExperimentConfig) -> Result<McReport, ExperimentError> {
    let r = cfg.r.unwrap_or(1);
    let cols = (r + 1) as usize;
    let parts = per_stream(cfg, |rng, n| {
        let mut m = BTreeMap::new();
        let mut uncut = vec![0u64; cols];
        for _ in 0..n {
            let s = sample_uip_plus_bluered(r, rng);
            for (x, red) in s.red_columns.iter().enumerate() {
                uncut[x] += u64::from(!red);
            }
            *m.entry(s.ball).or_insert(0) += 1;
        }
        (m, uncut)
    });
    let (maps, cuts): (Vec<_>, Vec<_>) = parts.into_iter().unzip();
    let counts = merge_maps(maps);
    let uncut = sum_counts(cuts);
    let mut rep = McReport::new(cfg.clone());
    tally_rows(&mut rep, "bluered", &ball_law(KernelKind::UipPlus, r), &counts, cfg.trials);
    for x in 0..=r {
        let mut p = one();
        for z in 0..=x {
            p *= one() - width_tail(x - z) / int(2);
        }
        rep.rows.push(McRow::frequency("bluered", format!("no red vertex in column {x}"), uncut[x as usize], cfg.trials, Some(p)));
    }
    Ok(rep)
}

fn width(cfg: &ExperimentConfig) -> Result<McReport, ExperimentError> {
    let ks: Vec<i64> = if cfg.params.is_empty() { (1..=6).collect() } else { cfg.params.clone() };
    if ks.iter().any(|&k| k < 1) {
        return Err(params("width levels must be ≥ 1"));
    }
    let kmax = *ks.iter().max().unwrap();
    let parts = per_stream(cfg, |rng, n| {
        // reached[k] counts excursions whose maximum is at least k
        let mut reached = vec![0u64; kmax as usize + 1];
        for _ in 0..n {
            let (mut x, mut top) = (0i64, 0i64);
            while x >= 0 && top < kmax {
                x += sample_step(rng);
                top = top.max(x);
            }
            for slot in reached.iter_mut().take(top as usize + 1) {
                *slot += 1;
            }
        }
        reached
    });
    let reached = sum_counts(parts);
    let mut rep = McReport::new(cfg.clone());
    for k in ks {
        rep.rows.push(McRow::frequency("width", format!("W>={k}"), reached[k as usize], cfg.trials, Some(width_tail(k))));
    }
    Ok(rep)
}

fn exit(cfg: &ExperimentConfig) -> Result<McReport, ExperimentError> {
    let flat = if cfg.params.is_empty() { vec![1, 1, 2, 1, 1, 2, 3, 2, 5, 3] } else { cfg.params.clone() };
    if flat.len() % 2 != 0 {
        return Err(params("exit takes (x, y) pairs"));
    }
    let pairs: Vec<(i64, i64)> = flat.chunks(2).map(|c| (c[0], c[1])).collect();
    let exact = pairs
        .iter()
        .map(|&(x, y)| exit_probability(x, y))
        .collect::<Result<Vec<_>, _>>()?;
    let parts = per_stream(cfg, |rng, n| {
        let mut hits = vec![0u64; pairs.len()];
        for (i, &(x, y)) in pairs.iter().enumerate() {
            for _ in 0..n {
                let mut s = 0i64;
                while s < x && s > -y {
                    s += sample_step(rng);
                }
                hits[i] += u64::from(s <= -y);
            }
        }
        hits
    });
    let hits = sum_counts(parts);
    let mut rep = McReport::new(cfg.clone());
    for (i, (x, y)) in pairs.iter().enumerate() {
        rep.rows.push(McRow::frequency("exit", format!("x={x},y={y}"), hits[i], cfg.trials, Some(exact[i].clone())));
    }
    Ok(rep)
}

fn cherry(cfg: &ExperimentConfig) -> Result<McReport, ExperimentError> {
    let (gl, gr) = match cfg.params.as_slice() {
        [] => (4, 4),
        [a, b] => (*a, *b),
        _ => return Err(params("cherry takes two gaps")),
    };
    let exact = cherry_probs(gl, gr)?;
    let a = set_from(&[0, gl, gl + gr])?;
    let neighbours = set_from(&[-1, 1])?;
    let b = gl;
    let parts = try_per_stream(cfg, |rng, n| -> Result<Vec<u64>, KernelError> {
        let mut h = vec![0u64; 5];
        for _ in 0..n {
            let next = sample_transition(KernelKind::Uip, &a, rng)?;
            let (l, r) = (next.elems().contains(&(b - 1)), next.elems().contains(&(b + 1)));
            h[match (l, r) {
                (true, true) => 0,
                (false, true) => 1,
                (true, false) => 2,
                (false, false) => 3,
            }] += 1;
            let fill = sample_transition(KernelKind::Uip, &neighbours, rng)?;
            h[4] += u64::from(fill.elems().contains(&0));
        }
        Ok(h)
    })?;
    let h = sum_counts(parts);
    let t = cfg.trials;
    let mut rep = McReport::new(cfg.clone());
    rep.rows.push(McRow::frequency("cherry", "b-1 and b+1", h[0], t, Some(exact.both)));
    rep.rows.push(McRow::frequency("cherry", "b+1 only", h[1], t, Some(exact.right_only)));
    rep.rows.push(McRow::frequency("cherry", "b-1 only", h[2], t, Some(exact.left_only)));
    rep.rows.push(McRow::frequency("cherry", "neither", h[3], t, Some(exact.neither)));
    rep.rows.push(McRow::frequency("cherry", "gap filled between neighbours", h[4], t, Some(neighbour_fill_prob())));
    Ok(rep)
}

fn extreme(cfg: &ExperimentConfig) -> Result<McReport, ExperimentError> {
    let a = if cfg.params.is_empty() { set_from(&[0, 2])? } else { set_from(&cfg.params)? };
    let exact = extreme_move_probs(&a);
    let (lo, hi) = (AdmissibleSet::min(&a), AdmissibleSet::max(&a));
    let parts = try_per_stream(cfg, |rng, n| -> Result<Vec<u64>, KernelError> {
        let mut h = vec![0u64; 3];
        for _ in 0..n {
            let next = sample_transition(KernelKind::Uip, &a, rng)?;
            let e = next.elems();
            let up = e.last() == Some(&(hi + 1));
            let down = e.first() == Some(&(lo - 1));
            h[0] += u64::from(up);
            h[1] += u64::from(down);
            h[2] += u64::from(up && down);
        }
        Ok(h)
    })?;
    let h = sum_counts(parts);
    let t = cfg.trials;
    let mut rep = McReport::new(cfg.clone());
    rep.rows.push(McRow::frequency("extreme", "max moves +1", h[0], t, Some(exact.max_up)));
    rep.rows.push(McRow::frequency("extreme", "min moves -1", h[1], t, Some(exact.min_down)));
    rep.rows.push(McRow::frequency("extreme", "both", h[2], t, Some(exact.joint)));
    Ok(rep)
}

fn futurinf_params(p: &[i64]) -> Result<(i64, AdmissibleSet), ExperimentError> {
    match p {
        [] => Ok((1, AdmissibleSet::singleton(2))),
        [b, c @ ..] if !c.is_empty() => Ok((*b, set_from(c)?)),
        _ => Err(params("futurinf takes b followed by the elements of C")),
    }
}

/// The future-infimum event read from the mirror image, the UIP−.
///
/// With `r = max C`, the conditioned shaved walk stopped at `−(r+1)` fixes
/// every vertex of height at most `r`, in particular the layer `−C` at
/// height `r`. After that time the walk stays at or below `−b` with
/// probability `future_infimum_prob({r+1}, b)`, independently of the past,
/// and this is exactly the absence of later vertices in columns `≥ −b+1`.
/// What remains random is whether the first part itself put a vertex above
/// height `r` in those columns.
fn futurinf(cfg: &ExperimentConfig) -> Result<McReport, ExperimentError> {
    let (b, c) = futurinf_params(&cfg.params)?;
    let exact = future_infimum_prob(&c, b)?;
    let r = AdmissibleSet::max(&c);
    let tail = future_infimum_prob(&AdmissibleSet::singleton(r + 1), b)?;
    let target: Vec<i64> = c.reflect().elems().to_vec();
    let parts = try_per_stream(cfg, |rng, n| -> Result<Vec<u64>, WalkError> {
        let mut h = vec![0u64; 2];
        for _ in 0..n {
            let t = sample_shaved_nonpos(r + 1, rng)?;
            let vs = drop_along(&t.values);
            let mut layer: Vec<i64> = vs.iter().filter(|v| v.y == r).map(|v| v.x).collect();
            layer.sort_unstable();
            if layer != target {
                continue;
            }
            h[0] += 1;
            h[1] += u64::from(!vs.iter().any(|v| v.y > r && v.x > -b));
        }
        Ok(h)
    })?;
    let h = sum_counts(parts);
    let layer_prob: ExactProb = ball_law(KernelKind::UipPlus, r)
        .into_iter()
        .filter(|(a, _)| a.level(r).iter().map(|v| v.x).collect::<Vec<_>>() == c.elems())
        .map(|(_, p)| p)
        .sum();
    let mut rep = McReport::new(cfg.clone());
    rep.rows.push(McRow::frequency("futurinf", format!("layer {r} = {c}"), h[0], cfg.trials, Some(layer_prob)));
    if h[0] == 0 {
        rep.notes.push("no sample matched the layer".into());
        return Ok(rep);
    }
    let first = &exact / &tail;
    rep.rows.push(McRow::frequency("futurinf", "first part stays left of b", h[1], h[0], Some(first.clone())));
    let f = h[1] as f64 / h[0] as f64;
    let tf = crate::exact::to_f64(&tail);
    let p = crate::exact::to_f64(&first);
    let se = (p * (1.0 - p) / h[0] as f64).sqrt() * tf;
    rep.rows.push(McRow::mean("futurinf", format!("inf of later layers >= {b}"), f * tf, se, h[0], Some(exact)));
    Ok(rep)
}

/// Runs the UIP+ chain from `C` for a fixed number of layers; overestimates
/// the future-infimum probability since later violations are missed.
fn futurinf_proxy(cfg: &ExperimentConfig) -> Result<McReport, ExperimentError> {
    let (b, depth, c) = match cfg.params.as_slice() {
        [] => (1, 1000, AdmissibleSet::singleton(2)),
        [b, d, c @ ..] if !c.is_empty() => (*b, *d, set_from(c)?),
        _ => return Err(params("futurinf_proxy takes b, depth, then the elements of C")),
    };
    let exact = future_infimum_prob(&c, b)?;
    let parts = try_per_stream(cfg, |rng, n| -> Result<Vec<u64>, KernelError> {
        let mut hits = 0;
        for _ in 0..n {
            let mut a = c.clone();
            let mut ok = true;
            for _ in 0..depth {
                a = match sample_transition(KernelKind::UipPlus, &a, rng)? {
                    Layer::Set(s) => s,
                    Layer::Empty => unreachable!("UIP+ layers are never empty"),
                };
                if AdmissibleSet::min(&a) < b {
                    ok = false;
                    break;
                }
            }
            hits += u64::from(ok);
        }
        Ok(vec![hits])
    })?;
    let h = sum_counts(parts);
    let mut rep = McReport::new(cfg.clone());
    rep.rows.push(McRow::frequency("futurinf_proxy", format!("min >= {b} for {depth} layers"), h[0], cfg.trials, Some(exact)));
    rep.notes.push("finite-depth proxy: biased upward by the probability of a violation after the horizon".into());
    Ok(rep)
}

fn inv_weight(a: &AdmissibleSet) -> f64 {
    let mut w = 3f64.powi(a.len() as i32);
    for p in a.elems().windows(2) {
        w *= (p[1] - p[0] - 1) as f64;
    }
    1.0 / w
}

fn next_set<R: rand::Rng + ?Sized>(kind: KernelKind, a: &AdmissibleSet, rng: &mut R) -> Result<AdmissibleSet, KernelError> {
    match sample_transition(kind, a, rng)? {
        Layer::Set(s) => Ok(s),
        Layer::Empty => Err(KernelError::Domain("chain died".into())),
    }
}

fn mean_row(name: &str, event: &str, sums: (f64, f64), n: u64) -> McRow {
    let mean = sums.0 / n as f64;
    let var = (sums.1 / n as f64 - mean * mean).max(0.0);
    McRow::mean(name, event, mean, (var / n as f64).sqrt(), n, Some(zero()))
}

/// UIP chain from `{0}`: `max + min`, and `max`, `min·max` minus their
/// compensators, all with mean 0.
fn martingale(cfg: &ExperimentConfig) -> Result<McReport, ExperimentError> {
    let steps = cfg.params.first().copied().unwrap_or(100);
    let parts = try_per_stream(cfg, |rng, n| -> Result<Vec<f64>, KernelError> {
        let mut s = vec![0.0; 6];
        for _ in 0..n {
            let mut a = AdmissibleSet::singleton(0);
            let mut comp = 0.0;
            for _ in 0..steps {
                comp += inv_weight(&a);
                a = next_set(KernelKind::Uip, &a, rng)?;
            }
            let (lo, hi) = (AdmissibleSet::min(&a) as f64, AdmissibleSet::max(&a) as f64);
            let vals = [hi + lo, hi - comp, lo * hi - comp];
            for (k, v) in vals.iter().enumerate() {
                s[2 * k] += v;
                s[2 * k + 1] += v * v;
            }
        }
        Ok(s)
    })?;
    let mut s = [0.0; 6];
    for p in parts {
        for (o, v) in s.iter_mut().zip(p) {
            *o += v;
        }
    }
    let n = cfg.trials;
    let mut rep = McReport::new(cfg.clone());
    rep.rows.push(mean_row("martingale", &format!("max+min at layer {steps}"), (s[0], s[1]), n));
    rep.rows.push(mean_row("martingale", &format!("compensated max at layer {steps}"), (s[2], s[3]), n));
    rep.rows.push(mean_row("martingale", &format!("compensated min*max at layer {steps}"), (s[4], s[5]), n));
    Ok(rep)
}

/// Layer cap of the pinching runs. Far above the heights where pinching is
/// tallied, so that the running mean of the observed `T` is not flattened by
/// the truncation.
pub const PINCH_CAP: u64 = 1_000_000;

/// First layer `n ≥ 1` of the UIP from `{0}` with a single element, or
/// `None` if it does not occur by layer `cap`.
pub fn pinch_time<R: rand::Rng + ?Sized>(cap: u64, rng: &mut R) -> Result<Option<u64>, KernelError> {
    let mut a = AdmissibleSet::singleton(0);
    for n in 1..=cap {
        a = next_set(KernelKind::Uip, &a, rng)?;
        if a.len() == 1 {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Pinching times in run order.
pub fn pinch_times(cfg: &ExperimentConfig, cap: u64) -> Result<Vec<Option<u64>>, KernelError> {
    let parts = try_per_stream(cfg, |rng, n| -> Result<Vec<Option<u64>>, KernelError> {
        (0..n).map(|_| pinch_time(cap, rng)).collect()
    })?;
    Ok(parts.into_iter().flatten().collect())
}

/// Mean of the observed (finite) values among the first `k` runs.
pub fn running_mean(ts: &[Option<u64>], k: usize) -> f64 {
    let seen: Vec<u64> = ts[..k.min(ts.len())].iter().flatten().copied().collect();
    seen.iter().sum::<u64>() as f64 / seen.len().max(1) as f64
}

fn sausaging(cfg: &ExperimentConfig) -> Result<McReport, ExperimentError> {
    let hs: Vec<u64> = if cfg.params.is_empty() {
        vec![100, 1000, 10_000]
    } else {
        cfg.params.iter().map(|&h| h as u64).collect()
    };
    let cap = PINCH_CAP.max(*hs.iter().max().unwrap());
    let ts = pinch_times(cfg, cap)?;
    let n = ts.len() as u64;
    let mut rep = McReport::new(cfg.clone());
    for &h in &hs {
        let k = ts.iter().filter(|t| t.is_some_and(|t| t <= h)).count() as u64;
        rep.rows.push(McRow::frequency("sausaging", format!("pinched by {h}"), k, n, None));
    }
    let capped = ts.iter().filter(|t| t.is_none()).count() as u64;
    rep.rows.push(McRow::frequency("sausaging", format!("reached layer cap {cap}"), capped, n, None));
    let mut k = 100usize;
    while k <= ts.len() {
        rep.rows.push(McRow::statistic("sausaging", format!("running mean of T over {k} runs"), running_mean(&ts, k), k as u64));
        k *= 10;
    }
    for t in (0..).map(|k| 1u64 << k).take_while(|&t| t < cap) {
        let k = ts.iter().filter(|x| x.is_none_or(|x| x > t)).count() as u64;
        rep.rows.push(McRow::frequency("sausaging", format!("P(T>{t})"), k, n, None));
    }
    Ok(rep)
}

/// `min` of the UIP+ layers at the given heights, per run.
pub fn uipp_minima(cfg: &ExperimentConfig, heights: &[u64]) -> Result<Vec<Vec<i64>>, KernelError> {
    let last = *heights.iter().max().unwrap_or(&0);
    let parts = try_per_stream(cfg, |rng, n| -> Result<Vec<Vec<i64>>, KernelError> {
        let mut out = Vec::new();
        for _ in 0..n {
            let mut a = AdmissibleSet::singleton(0);
            let mut mins = Vec::with_capacity(heights.len());
            for h in 1..=last {
                a = next_set(KernelKind::UipPlus, &a, rng)?;
                if heights.contains(&h) {
                    mins.push(AdmissibleSet::min(&a));
                }
            }
            out.push(mins);
        }
        Ok(out)
    })?;
    Ok(parts.into_iter().flatten().collect())
}

fn transience(cfg: &ExperimentConfig) -> Result<McReport, ExperimentError> {
    let (h1, h2) = match cfg.params.as_slice() {
        [] => (100, 10_000),
        [a, b] if 0 < *a && a < b => (*a as u64, *b as u64),
        _ => return Err(params("transience takes two increasing heights")),
    };
    let mins = uipp_minima(cfg, &[h1, h2])?;
    let up = mins.iter().filter(|m| m[1] > m[0]).count() as u64;
    let mut rep = McReport::new(cfg.clone());
    rep.rows.push(McRow::frequency("transience", format!("min at {h2} > min at {h1}"), up, mins.len() as u64, None));
    let mean2 = mins.iter().map(|m| m[1] as f64).sum::<f64>() / mins.len() as f64;
    rep.rows.push(McRow::statistic("transience", format!("mean min at {h2}"), mean2, mins.len() as u64));
    Ok(rep)
}

/// Total variation between an empirical law and an exact one.
pub fn tv_distance(counts: &BTreeMap<Animal, u64>, law: &[(Animal, ExactProb)], trials: u64) -> f64 {
    let mut tv = 0.0;
    let mut seen = 0;
    for (c, p) in law {
        let k = counts.get(c).copied().unwrap_or(0);
        seen += k;
        tv += (k as f64 / trials as f64 - crate::exact::to_f64(p)).abs();
    }
    tv += (trials - seen) as f64 / trials as f64;
    tv / 2.0
}

/// Ball law of uniform pyramids of each size against the UIP law.
fn local_limit(cfg: &ExperimentConfig) -> Result<McReport, ExperimentError> {
    let r = cfg.r.unwrap_or(1);
    let ns: Vec<usize> = if cfg.params.is_empty() {
        vec![50, 200, 1000]
    } else {
        cfg.params.iter().map(|&n| n as usize).collect()
    };
    let law = ball_law(KernelKind::Uip, r);
    let mut rep = McReport::new(cfg.clone());
    for &n in &ns {
        let sampler = PyramidBallSampler::new(n, r);
        let parts = try_per_stream(cfg, |rng, k| -> Result<(BTreeMap<Animal, u64>, u64), SampleError> {
            let mut m = BTreeMap::new();
            let mut attempts = 0;
            for _ in 0..k {
                let (a, t) = sampler.sample(DEFAULT_BUDGET, rng)?;
                attempts += t;
                *m.entry(a).or_insert(0) += 1;
            }
            Ok((m, attempts))
        })?;
        let (maps, att): (Vec<_>, Vec<_>) = parts.into_iter().unzip();
        let counts = merge_maps(maps);
        let attempts: u64 = att.iter().sum();
        rep.rows.push(McRow::statistic("local_limit", format!("TV n={n}"), tv_distance(&counts, &law, cfg.trials), cfg.trials));
        let u = excursion_law(n).u[n].clone();
        rep.rows.push(McRow::frequency("local_limit", format!("acceptance n={n}"), cfg.trials, attempts, Some(u)));
    }
    Ok(rep)
}

/// Exploratory: tail of the half-pyramid height and local slopes of
/// `log P(H ≥ h)` against `log h`.
fn height(cfg: &ExperimentConfig) -> Result<McReport, ExperimentError> {
    let hs: Vec<i64> = if cfg.params.is_empty() { vec![4, 8, 16, 32, 64] } else { cfg.params.clone() };
    let parts = per_stream(cfg, |rng, n| {
        hs.iter()
            .map(|&h| (0..n).filter(|_| sample_bhp_ball(h, rng).height() == h).count() as u64)
            .collect::<Vec<u64>>()
    });
    let k = sum_counts(parts);
    let mut rep = McReport::new(cfg.clone());
    for (i, &h) in hs.iter().enumerate() {
        rep.rows.push(McRow::frequency("height", format!("H>={h}"), k[i], cfg.trials, None));
    }
    for i in 1..hs.len() {
        let p0 = k[i - 1] as f64 / cfg.trials as f64;
        let p1 = k[i] as f64 / cfg.trials as f64;
        let slope = -(p1.ln() - p0.ln()) / ((hs[i] as f64).ln() - (hs[i - 1] as f64).ln());
        rep.rows.push(McRow::statistic("height", format!("tail exponent on [{},{}]", hs[i - 1], hs[i]), slope, cfg.trials));
    }
    rep.notes.push("exploratory: the exponent is conjectural and carries no acceptance bound".into());
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_are_reproducible() {
        let mut c = ExperimentConfig::new("ball", 2000, 11);
        c.model = Some(KernelKind::Uip);
        c.streams = 4;
        let a = experiment(&c).unwrap().to_csv();
        let b = experiment(&c).unwrap().to_csv();
        assert_eq!(a, b);
        c.streams = 3;
        assert_ne!(a, experiment(&c).unwrap().to_csv());
    }

    #[test]
    fn unknown_experiment() {
        let c = ExperimentConfig::new("nope", 10, 0);
        assert!(matches!(experiment(&c), Err(ExperimentError::Unknown(_))));
    }
}
