//! Layer kernels of the half-pyramid (BHP), the uniform infinite pyramid
//! (UIP) and its non-negative version (UIP+), the ball laws they induce, and
//! closed-form one-step event probabilities.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{int, one, pow3, zero, ExactProb};
use crate::lattice::{eta, AdmissibleSet, Animal, Ball, Layer, Vertex};

/// Default cap on `|[A]|` for [`enumerate_row`].
pub const ROW_CAP: usize = 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum KernelKind {
    #[serde(rename = "bhp")]
    Bhp,
    #[serde(rename = "uip")]
    Uip,
    #[serde(rename = "uipp")]
    UipPlus,
}

impl KernelKind {
    fn nonneg(self) -> bool {
        self != KernelKind::Uip
    }
}

impl std::str::FromStr for KernelKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bhp" => Ok(KernelKind::Bhp),
            "uip" => Ok(KernelKind::Uip),
            "uipp" | "uip+" => Ok(KernelKind::UipPlus),
            _ => Err(format!("unknown kernel {s}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("|[A]| = {size} exceeds the enumeration cap {cap}; use sample_transition")]
    Cap { size: usize, cap: usize },
}

fn domain(msg: impl Into<String>) -> KernelError {
    KernelError::Domain(msg.into())
}

fn check_source(kind: KernelKind, a: &AdmissibleSet) -> Result<(), KernelError> {
    if kind.nonneg() && a.min() < 0 {
        return Err(domain(format!("{a} is not contained in N")));
    }
    Ok(())
}

/// Possible elements of the next layer: `[A]`, intersected with `N` for the
/// BHP and the UIP+.
pub fn support(kind: KernelKind, a: &AdmissibleSet) -> Result<Vec<i64>, KernelError> {
    check_source(kind, a)?;
    Ok(a.augment().elems().iter().copied().filter(|&x| !kind.nonneg() || x >= 0).collect())
}

/// Unnormalized weight of a target (sorted, possibly empty).
pub fn kernel_weight(kind: KernelKind, b: &[i64]) -> BigInt {
    if b.is_empty() {
        return if kind == KernelKind::Bhp { BigInt::one() } else { BigInt::zero() };
    }
    let (lo, hi) = (b[0], b[b.len() - 1]);
    match kind {
        KernelKind::Uip => eta(b),
        KernelKind::Bhp => eta(b) * (lo + 1),
        KernelKind::UipPlus => eta(b) * (lo + 1) * (hi + 2),
    }
}

/// Row normalizer, the sum of [`kernel_weight`] over the support.
pub fn kernel_denominator(kind: KernelKind, a: &AdmissibleSet) -> BigInt {
    let base = num_traits::pow(BigInt::from(3), a.len()) * a.eta();
    match kind {
        KernelKind::Uip => base,
        KernelKind::Bhp => base * (a.min() + 1),
        KernelKind::UipPlus => base * (a.min() + 1) * (a.max() + 2),
    }
}

pub fn kernel_prob(kind: KernelKind, a: &AdmissibleSet, b: &Layer) -> Result<ExactProb, KernelError> {
    let f = support(kind, a)?;
    if !b.elems().iter().all(|x| f.binary_search(x).is_ok()) {
        return Ok(zero());
    }
    Ok(ExactProb::new(kernel_weight(kind, b.elems()), kernel_denominator(kind, a)))
}

/// One full row of a kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionTable {
    pub kind: KernelKind,
    pub source: AdmissibleSet,
    pub entries: BTreeMap<Layer, ExactProb>,
}

impl TransitionTable {
    pub fn prob(&self, b: &Layer) -> ExactProb {
        self.entries.get(b).cloned().unwrap_or_else(zero)
    }

    pub fn total(&self) -> ExactProb {
        self.entries.values().cloned().sum()
    }

    /// Probability of the set of targets satisfying `pred`.
    pub fn prob_of(&self, mut pred: impl FnMut(&Layer) -> bool) -> ExactProb {
        self.entries.iter().filter(|(b, _)| pred(b)).map(|(_, p)| p.clone()).sum()
    }

    /// Law of `g(target)`.
    pub fn pushforward<K: Ord>(&self, mut g: impl FnMut(&Layer) -> K) -> BTreeMap<K, ExactProb> {
        let mut out = BTreeMap::new();
        for (b, p) in &self.entries {
            *out.entry(g(b)).or_insert_with(zero) += p;
        }
        out
    }
}

impl Serialize for TransitionTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Row<'a> {
            target: &'a [i64],
            num: String,
            den: String,
        }
        #[derive(Serialize)]
        struct Table<'a> {
            kind: KernelKind,
            source: &'a [i64],
            entries: Vec<Row<'a>>,
        }
        let entries = self
            .entries
            .iter()
            .map(|(b, p)| Row { target: b.elems(), num: p.numer().to_string(), den: p.denom().to_string() })
            .collect();
        Table { kind: self.kind, source: self.source.elems(), entries }.serialize(s)
    }
}

pub fn enumerate_row(kind: KernelKind, a: &AdmissibleSet) -> Result<TransitionTable, KernelError> {
    enumerate_row_with_cap(kind, a, ROW_CAP)
}

/// Every target with positive probability, each weighted by the closed form.
pub fn enumerate_row_with_cap(kind: KernelKind, a: &AdmissibleSet, cap: usize) -> Result<TransitionTable, KernelError> {
    let f = support(kind, a)?;
    if a.augment().len() > cap {
        return Err(KernelError::Cap { size: a.augment().len(), cap });
    }
    let den = kernel_denominator(kind, a);
    let mut entries = BTreeMap::new();
    let m = f.len();
    let mut b = Vec::with_capacity(m);
    for mask in 0u64..(1u64 << m) {
        b.clear();
        b.extend((0..m).filter(|&i| mask >> i & 1 == 1).map(|i| f[i]));
        let w = kernel_weight(kind, &b);
        if w.is_zero() {
            continue;
        }
        let target = if b.is_empty() { Layer::Empty } else { Layer::Set(AdmissibleSet::new(b.clone()).unwrap()) };
        entries.insert(target, ExactProb::new(w, den.clone()));
    }
    Ok(TransitionTable { kind, source: a.clone(), entries })
}

// Weighted-chain sampler. A target B = {b_1 < … < b_k} is read as a chain
// start → b_1 → … → b_k → stop with weight
//   s(b_1) · Π (b_{i+1} − b_i − 1) · t(b_k),
// where s ≡ 1 for the UIP and s(b) = b + 1 (a phantom element at −2) for the
// other two kernels, t ≡ 1 except t(b) = b + 2 for the UIP+, and the BHP also
// lets the chain stop at the phantom, giving ∅.
// W(j) is the total weight of chains started at f_j:
//   W(j) = t_j + Σ_{i>j} (f_i − f_j − 1) W(i).

const SCALE_BITS: i32 = 600;

struct Chain {
    kind: KernelKind,
    f: Vec<i64>,
    // f64 weights at level `lvl[j]`, i.e. true value · 2^{−600·lvl}
    w: Vec<f64>,
    lvl: Vec<i32>,
    // totals of the first decision at level `start_lvl`
    start_total: f64,
    start_lvl: i32,
}

fn terminal(kind: KernelKind, x: i64) -> i64 {
    if kind == KernelKind::UipPlus {
        x + 2
    } else {
        1
    }
}

fn start_coef(kind: KernelKind, x: i64) -> i64 {
    if kind == KernelKind::Uip {
        1
    } else {
        x + 1
    }
}

fn phantom_stop(kind: KernelKind) -> i64 {
    i64::from(kind == KernelKind::Bhp)
}

fn rescale(v: f64, levels: i32) -> f64 {
    if levels == 0 {
        v
    } else {
        v * 2f64.powi(-SCALE_BITS * levels)
    }
}

impl Chain {
    fn new(kind: KernelKind, f: Vec<i64>) -> Chain {
        let m = f.len();
        let mut w = vec![0.0; m];
        let mut lvl = vec![0; m];
        // running suffix quantities at the current level:
        // s1 = Σ_{i>j} W(i),  q = Σ_{i>j} (f_i − f_j − 1) W(i)
        let (mut s1, mut q, mut cur) = (0.0f64, 0.0f64, 0i32);
        for j in (0..m).rev() {
            if j + 1 < m {
                let g = (f[j + 1] - f[j]) as f64;
                q = q + (g - 1.0) * w[j + 1] + g * s1;
                s1 += w[j + 1];
            }
            let mut wj = rescale(terminal(kind, f[j]) as f64, cur) + q;
            if wj > 2f64.powi(SCALE_BITS) {
                let k = 2f64.powi(-SCALE_BITS);
                wj *= k;
                q *= k;
                s1 *= k;
                cur += 1;
                // W(j+1) is read again at level `cur` through `lvl`
            }
            w[j] = wj;
            lvl[j] = cur;
        }
        let start_lvl = cur;
        let mut start_total = rescale(phantom_stop(kind) as f64, start_lvl);
        for j in 0..m {
            start_total += start_coef(kind, f[j]) as f64 * rescale(w[j], start_lvl - lvl[j]);
        }
        Chain { kind, f, w, lvl, start_total, start_lvl }
    }

    // W(i) expressed at level `at`
    fn w_at(&self, i: usize, at: i32) -> f64 {
        rescale(self.w[i], at - self.lvl[i])
    }

    // relative error bound of any weight or partial sum
    fn tolerance(&self) -> f64 {
        64.0 * (self.f.len() as f64 + 4.0) * f64::EPSILON
    }
}

/// Exact `W(j)` and the total weight of the row.
pub(crate) fn exact_weights(kind: KernelKind, f: &[i64]) -> (Vec<BigInt>, BigInt) {
    let m = f.len();
    let mut w = vec![BigInt::zero(); m];
    let (mut s1, mut q) = (BigInt::zero(), BigInt::zero());
    for j in (0..m).rev() {
        if j + 1 < m {
            let g = f[j + 1] - f[j];
            q += &w[j + 1] * (g - 1) + &s1 * g;
            s1 += &w[j + 1];
        }
        w[j] = &q + terminal(kind, f[j]);
    }
    let mut total = BigInt::from(phantom_stop(kind));
    for j in 0..m {
        total += &w[j] * start_coef(kind, f[j]);
    }
    (w, total)
}

/// Total chain weight of the row at `A`; equals [`kernel_denominator`].
pub fn transition_total_weight(kind: KernelKind, a: &AdmissibleSet) -> Result<BigInt, KernelError> {
    let f = support(kind, a)?;
    Ok(exact_weights(kind, &f).1)
}

/// Picks an outcome from weights given lazily in f64, with a big-integer
/// fallback whenever the drawn uniform falls within the f64 error margin of
/// a boundary. The uniform is refined bit by bit in the fallback, so the
/// result is exactly distributed according to the exact weights.
fn lazy_choose<R: RngCore + ?Sized>(
    rng: &mut R,
    n: usize,
    total: f64,
    weight: impl Fn(usize) -> f64,
    tol: f64,
    exact: impl FnOnce() -> (Vec<BigInt>, BigInt),
) -> usize {
    let u = rng.next_u64();
    let lo = u as f64 * 2f64.powi(-64);
    let hi = lo + 2f64.powi(-64);
    let margin = tol * total + 2.0 * f64::EPSILON * total;
    let (tlo, thi) = (lo * total, hi * total);
    let mut cum = 0.0;
    for k in 0..n {
        let next = cum + weight(k);
        if tlo < next {
            if tlo >= cum + margin && thi <= next - margin {
                return k;
            }
            break;
        }
        cum = next;
    }
    let (ws, tot) = exact();
    exact_choose(rng, u, &ws, &tot)
}

// U ∈ [num, num + 1) / 2^bits, with num refined 64 bits at a time until the
// interval U·T sits inside one cumulative slot.
fn exact_choose<R: RngCore + ?Sized>(rng: &mut R, first: u64, ws: &[BigInt], total: &BigInt) -> usize {
    let mut num = BigInt::from(first);
    let mut bits = 64u32;
    loop {
        let lo = &num * total;
        let hi = (&num + 1u32) * total;
        let mut cum = BigInt::zero();
        for (k, w) in ws.iter().enumerate() {
            let next = &cum + w;
            let next_scaled = &next << bits as usize;
            if lo < next_scaled {
                let cum_scaled = &cum << bits as usize;
                if lo >= cum_scaled && hi <= next_scaled {
                    return k;
                }
                break;
            }
            cum = next;
        }
        num = (num << 64usize) + BigInt::from(rng.next_u64());
        bits += 64;
    }
}

/// Exact draw from the row at `A` without enumerating subsets; O(|[A]|)
/// floating-point work per draw.
pub fn sample_transition<R: Rng + ?Sized>(kind: KernelKind, a: &AdmissibleSet, rng: &mut R) -> Result<Layer, KernelError> {
    let f = support(kind, a)?;
    if f.is_empty() {
        // only the BHP can have an empty support, from A = {0} it cannot
        return Ok(Layer::Empty);
    }
    Ok(walk_chain(&Chain::new(kind, f), rng))
}

fn walk_chain<R: Rng + ?Sized>(ch: &Chain, rng: &mut R) -> Layer {
    let m = ch.f.len();
    let tol = ch.tolerance();
    let kind = ch.kind;
    let f = &ch.f;
    // first decision: outcome 0 is the phantom stop, k ≥ 1 starts at f_{k−1}
    let sl = ch.start_lvl;
    let start_weight = |k: usize| {
        if k == 0 {
            rescale(phantom_stop(kind) as f64, sl)
        } else {
            start_coef(kind, f[k - 1]) as f64 * ch.w_at(k - 1, sl)
        }
    };
    let first = lazy_choose(rng, m + 1, ch.start_total, start_weight, tol, || {
        let (w, t) = exact_weights(kind, f);
        let mut ws = vec![BigInt::from(phantom_stop(kind))];
        ws.extend(w.iter().enumerate().map(|(j, wj)| wj * start_coef(kind, f[j])));
        (ws, t)
    });
    if first == 0 {
        return Layer::Empty;
    }
    let mut out = Vec::new();
    let mut j = first - 1;
    loop {
        out.push(f[j]);
        let (at, fj) = (ch.lvl[j], f[j]);
        let weight = |k: usize| {
            if k == 0 {
                rescale(terminal(kind, fj) as f64, at)
            } else {
                (f[j + k] - fj - 1) as f64 * ch.w_at(j + k, at)
            }
        };
        let k = lazy_choose(rng, m - j, ch.w[j], weight, tol, || {
            let w = exact_weights(kind, f).0;
            let mut ws = vec![BigInt::from(terminal(kind, fj))];
            ws.extend((j + 1..m).map(|i| &w[i] * (f[i] - fj - 1)));
            (ws, w[j].clone())
        });
        if k == 0 {
            break;
        }
        j += k;
    }
    Layer::Set(AdmissibleSet::new(out).expect("chain visits increasing support elements"))
}

/// Layer sequence `C_0, C_1, …` of an animal, up to its height.
fn layers_of(c: &Animal) -> Vec<Vec<i64>> {
    (0..=c.height()).map(|n| c.level(n).iter().map(|v| v.x).collect()).collect()
}

fn check_ball_input(kind: KernelKind, c: &Animal, r: i64, exact_height: bool) -> Result<(), KernelError> {
    let cls = c.class();
    if !cls.pyramid {
        return Err(domain("C is not a pyramid"));
    }
    if kind.nonneg() && !cls.nonneg_pyramid {
        return Err(domain("C has a vertex with negative x"));
    }
    if c.vertices().iter().any(|v| !Ball::new(r).contains(*v)) {
        return Err(domain(format!("C is not inside B({r})")));
    }
    if exact_height && c.height() != r {
        return Err(domain(format!("C has height {} instead of {r}", c.height())));
    }
    Ok(())
}

/// `P(model ∩ B(r) = C)` for a pyramid `C` of height exactly `r`.
pub fn marginal_ball(kind: KernelKind, c: &Animal, r: i64) -> Result<ExactProb, KernelError> {
    check_ball_input(kind, c, r, true)?;
    let top = c.level(r);
    let xs: Vec<i64> = top.iter().map(|v| v.x).collect();
    let (lo, hi) = (xs[0], xs[xs.len() - 1]);
    let e = int(eta(&xs));
    let scale = pow3(-((c.len() - xs.len()) as i64));
    Ok(match kind {
        KernelKind::Uip => e * scale,
        KernelKind::Bhp => e * int(lo + 1) * scale,
        KernelKind::UipPlus => e * int((lo + 1) * (hi + 2)) * scale / int(2),
    })
}

/// `P(model ∩ B(r) = C)` for any possible content `C` of the ball: for the
/// BHP an animal of height below `r` is the whole half-pyramid, with
/// probability `3^{−|C|}`.
pub fn ball_prob(kind: KernelKind, c: &Animal, r: i64) -> Result<ExactProb, KernelError> {
    check_ball_input(kind, c, r, false)?;
    if c.height() == r {
        marginal_ball(kind, c, r)
    } else if kind == KernelKind::Bhp {
        Ok(pow3(-(c.len() as i64)))
    } else {
        Ok(zero())
    }
}

/// Every possible content of `B(r)` under the model, with its probability.
/// Contents are layer sequences `L_0 = {0}`, `L_{n+1} ⊆ [L_n] ∩ ⟦−r, r⟧`.
pub fn ball_law(kind: KernelKind, r: i64) -> Vec<(Animal, ExactProb)> {
    let mut out = Vec::new();
    let mut layers = vec![vec![0i64]];
    grow_ball(kind, r, &mut layers, &mut out);
    out
}

fn grow_ball(kind: KernelKind, r: i64, layers: &mut Vec<Vec<i64>>, out: &mut Vec<(Animal, ExactProb)>) {
    let n = layers.len() as i64 - 1;
    let done = |layers: &Vec<Vec<i64>>, out: &mut Vec<(Animal, ExactProb)>| {
        let vs = layers
            .iter()
            .enumerate()
            .flat_map(|(y, l)| l.iter().map(move |&x| Vertex { x, y: y as i64 }));
        let c = Animal::new(vs).expect("layer sequences are pyramids");
        let p = ball_prob(kind, &c, r).expect("enumerated contents are in the model support");
        out.push((c, p));
    };
    if n == r {
        done(layers, out);
        return;
    }
    let cur = layers.last().unwrap();
    let f: Vec<i64> = AdmissibleSet::new(cur.clone())
        .unwrap()
        .augment()
        .elems()
        .iter()
        .copied()
        .filter(|&x| x.abs() <= r && (!kind.nonneg() || x >= 0))
        .collect();
    if kind == KernelKind::Bhp {
        done(layers, out);
    }
    for mask in 1u64..(1u64 << f.len()) {
        let next: Vec<i64> = (0..f.len()).filter(|&i| mask >> i & 1 == 1).map(|i| f[i]).collect();
        layers.push(next);
        grow_ball(kind, r, layers, out);
        layers.pop();
    }
}

/// Cone strictly above `v`.
pub fn in_cone(v: Vertex, w: Vertex) -> bool {
    w.y > v.y && (w.x - v.x).abs() <= w.y - v.y
}

/// Whether `D ⊂ C` is a proper boundary subset: `C` avoids the cones above
/// `D`, and the vertices of `C` adjacent (from below) to those cones are
/// exactly `D`.
pub fn is_proper_boundary(c: &Animal, d: &[Vertex]) -> bool {
    let in_v = |w: Vertex| d.iter().any(|&v| in_cone(v, w));
    if d.is_empty() || d.iter().any(|v| !c.contains(*v)) {
        return false;
    }
    let mut boundary = Vec::new();
    for &w in c.vertices() {
        if in_v(w) {
            return false;
        }
        let up = [Vertex { x: w.x - 1, y: w.y + 1 }, Vertex { x: w.x + 1, y: w.y + 1 }];
        if up.iter().any(|&u| in_v(u)) {
            boundary.push(w);
        }
    }
    let mut dd = d.to_vec();
    dd.sort();
    boundary.sort();
    boundary == dd
}

/// `P(Ā ∩ B(D) = C) = η(D) / 3^{|C|−|D|}` for a proper boundary subset `D`.
pub fn marginal_general(c: &Animal, d: &[Vertex]) -> Result<ExactProb, KernelError> {
    if !c.class().pyramid {
        return Err(domain("C is not a pyramid"));
    }
    if !is_proper_boundary(c, d) {
        return Err(domain("D is not a proper boundary subset of C"));
    }
    let mut xs: Vec<i64> = d.iter().map(|v| v.x).collect();
    xs.sort_unstable();
    if xs.windows(2).any(|w| w[0] == w[1]) {
        return Err(domain("D has two vertices in one column"));
    }
    Ok(int(eta(&xs)) * pow3(-((c.len() - d.len()) as i64)))
}

/// `P(next UIP layer ⊆ [B] | current = A)`.
pub fn subset_containment_prob(a: &AdmissibleSet, b: &AdmissibleSet) -> Result<ExactProb, KernelError> {
    if !b.elems().iter().all(|&x| a.contains(x)) {
        return Err(domain(format!("{b} is not a subset of {a}")));
    }
    Ok(ExactProb::new(b.eta(), a.eta()) * pow3(b.len() as i64 - a.len() as i64))
}

/// Joint law of `{b−1, b+1} ∩ next` for a UIP particle `b` with neighbours
/// at distances `gap_l` and `gap_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CherryProbs {
    pub both: ExactProb,
    /// `b−1` absent, `b+1` present
    pub right_only: ExactProb,
    /// `b−1` present, `b+1` absent
    pub left_only: ExactProb,
    pub neither: ExactProb,
}

pub fn cherry_probs(gap_l: i64, gap_r: i64) -> Result<CherryProbs, KernelError> {
    for g in [gap_l, gap_r] {
        if g < 2 || g % 2 != 0 {
            return Err(domain(format!("gap {g} must be even and at least 2")));
        }
    }
    let j = gap_l.max(4);
    let k = gap_r.max(4);
    let den = int(3 * (j - 1) * (k - 1));
    Ok(CherryProbs {
        both: int((j - 2) * (k - 2)) / &den,
        right_only: int(j * (k - 2)) / &den,
        left_only: int((j - 2) * k) / &den,
        neither: int(j + k - 1) / &den,
    })
}

/// The same four probabilities read off the enumerated UIP row at
/// `{0, gap_l, gap_l + gap_r}`.
pub fn cherry_probs_enumerated(gap_l: i64, gap_r: i64) -> Result<CherryProbs, KernelError> {
    let a = AdmissibleSet::new(vec![0, gap_l, gap_l + gap_r]).map_err(|e| domain(e.to_string()))?;
    let b = gap_l;
    let row = enumerate_row(KernelKind::Uip, &a)?;
    let has = |l: &Layer, x: i64| l.elems().contains(&x);
    Ok(CherryProbs {
        both: row.prob_of(|l| has(l, b - 1) && has(l, b + 1)),
        right_only: row.prob_of(|l| !has(l, b - 1) && has(l, b + 1)),
        left_only: row.prob_of(|l| has(l, b - 1) && !has(l, b + 1)),
        neither: row.prob_of(|l| !has(l, b - 1) && !has(l, b + 1)),
    })
}

/// `P(a ∈ next | a − 1, a + 1 ∈ current)` for the UIP, from the row at
/// `{−1, 1}`.
pub fn neighbour_fill_prob() -> ExactProb {
    let a = AdmissibleSet::new(vec![-1, 1]).unwrap();
    enumerate_row(KernelKind::Uip, &a).unwrap().prob_of(|l| l.elems().contains(&0))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremeMoves {
    /// `P(max next = max A + 1)`
    pub max_up: ExactProb,
    /// `P(min next = min A − 1)`
    pub min_down: ExactProb,
    pub joint: ExactProb,
}

/// Extreme-move probabilities of the UIP at `A`. Small rows are enumerated;
/// larger ones are assembled from the singleton rows at the two extremes,
/// which is valid by the independence property.
pub fn extreme_move_probs(a: &AdmissibleSet) -> ExtremeMoves {
    if a.augment().len() <= 14 {
        let row = enumerate_row(KernelKind::Uip, a).unwrap();
        return extreme_moves_from_row(&row);
    }
    let at = |x: i64| extreme_moves_from_row(&enumerate_row(KernelKind::Uip, &AdmissibleSet::singleton(x)).unwrap());
    let (hi, lo) = (at(a.max()), at(a.min()));
    ExtremeMoves { joint: &hi.max_up * &lo.min_down, max_up: hi.max_up, min_down: lo.min_down }
}

fn extreme_moves_from_row(row: &TransitionTable) -> ExtremeMoves {
    let src = &row.source;
    let (lo, hi) = (src.min(), src.max());
    let up = |l: &Layer| l.elems().last() == Some(&(hi + 1));
    let down = |l: &Layer| l.elems().first() == Some(&(lo - 1));
    ExtremeMoves {
        max_up: row.prob_of(up),
        min_down: row.prob_of(down),
        joint: row.prob_of(|l| up(l) && down(l)),
    }
}

/// `P(inf over all later layers of the UIP+ ≥ b | current = C)` for
/// `0 ≤ b ≤ min C`.
pub fn future_infimum_prob(c: &AdmissibleSet, b: i64) -> Result<ExactProb, KernelError> {
    if c.min() < 0 {
        return Err(domain(format!("{c} is not contained in N")));
    }
    if b < 0 || b > c.min() {
        return Err(domain(format!("b = {b} outside 0..={}", c.min())));
    }
    let (lo, hi) = (c.min(), c.max());
    Ok(int((lo + 1 - b) * (hi + 2 - b)) / int((lo + 1) * (hi + 2)))
}

/// Layer parts strictly left of `a` and from `a + 2` on.
fn split_parts(l: &Layer, a: i64) -> (Vec<i64>, Vec<i64>) {
    let e = l.elems();
    (e.iter().copied().filter(|&x| x < a).collect(), e.iter().copied().filter(|&x| x >= a + 2).collect())
}

/// Checks on the enumerated UIP row at `A`, for a split point `a` with `a`
/// or `a + 1` in `A`: the two parts of the next layer are independent, and
/// each part has the law it has from the corresponding half of `A`.
pub fn independence_holds(a: &AdmissibleSet, split: i64) -> Result<bool, KernelError> {
    if !a.contains(split) && !a.contains(split + 1) {
        return Err(domain(format!("neither {split} nor {} is in {a}", split + 1)));
    }
    let row = enumerate_row(KernelKind::Uip, a)?;
    let joint = row.pushforward(|l| split_parts(l, split));
    let left = row.pushforward(|l| split_parts(l, split).0);
    let right = row.pushforward(|l| split_parts(l, split).1);
    for (l, pl) in &left {
        for (r, pr) in &right {
            let pj = joint.get(&(l.clone(), r.clone())).cloned().unwrap_or_else(zero);
            if pj != pl * pr {
                return Ok(false);
            }
        }
    }
    let lower = a.clip(i64::MIN, split + 1).expect("split point side is nonempty");
    let upper = a.clip(split, i64::MAX).expect("split point side is nonempty");
    let left_restricted = enumerate_row(KernelKind::Uip, &lower)?.pushforward(|l| split_parts(l, split).0);
    let right_restricted = enumerate_row(KernelKind::Uip, &upper)?.pushforward(|l| split_parts(l, split).1);
    Ok(left == left_restricted && right == right_restricted)
}

/// For elements `lo < hi` of `A`, the law of the next UIP layer inside
/// `⟦lo+1, hi−1⟧` is the same from `A` and from `A ∩ ⟦lo, hi⟧`.
pub fn restriction_holds(a: &AdmissibleSet, lo: i64, hi: i64) -> Result<bool, KernelError> {
    if !(a.contains(lo) && a.contains(hi) && lo < hi) {
        return Err(domain(format!("{lo} < {hi} must both be elements of {a}")));
    }
    let inside = |l: &Layer| -> Vec<i64> { l.elems().iter().copied().filter(|&x| lo < x && x < hi).collect() };
    let full = enumerate_row(KernelKind::Uip, a)?.pushforward(inside);
    let sub = enumerate_row(KernelKind::Uip, &a.clip(lo, hi).unwrap())?.pushforward(inside);
    Ok(full == sub)
}

/// Product of UIP kernel probabilities along the layers of `C`.
pub fn chain_prob(kind: KernelKind, c: &Animal) -> Result<ExactProb, KernelError> {
    let ls = layers_of(c);
    let mut p = one();
    for w in ls.windows(2) {
        let a = AdmissibleSet::new(w[0].clone()).map_err(|e| domain(e.to_string()))?;
        let b = Layer::from_elems(w[1].clone()).map_err(|e| domain(e.to_string()))?;
        p *= kernel_prob(kind, &a, &b)?;
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use crate::walks::RngStream;

    fn set(v: &[i64]) -> AdmissibleSet {
        AdmissibleSet::new(v.to_vec()).unwrap()
    }

    fn lay(v: &[i64]) -> Layer {
        Layer::from_elems(v.to_vec()).unwrap()
    }

    #[test]
    fn kernel_prob_examples() {
        assert_eq!(kernel_prob(KernelKind::Uip, &set(&[0]), &lay(&[1])).unwrap(), ratio(1, 3));
        assert_eq!(kernel_prob(KernelKind::Uip, &set(&[0]), &lay(&[-1, 1])).unwrap(), ratio(1, 3));
        assert_eq!(kernel_prob(KernelKind::Bhp, &set(&[0]), &Layer::Empty).unwrap(), ratio(1, 3));
        assert_eq!(kernel_prob(KernelKind::UipPlus, &set(&[0]), &lay(&[1])).unwrap(), one());
        assert_eq!(kernel_prob(KernelKind::Uip, &set(&[0]), &lay(&[3])).unwrap(), zero());
        assert!(kernel_prob(KernelKind::Bhp, &set(&[-2, 0]), &lay(&[1])).is_err());
    }

    #[test]
    fn row_examples() {
        let r = enumerate_row(KernelKind::Uip, &set(&[0])).unwrap();
        assert_eq!(r.entries.len(), 3);
        assert!(r.entries.values().all(|p| *p == ratio(1, 3)));
        let r = enumerate_row(KernelKind::Uip, &set(&[0, 2])).unwrap();
        assert_eq!(r.entries.len(), 7);
        assert_eq!(r.total(), one());
        let b = enumerate_row(KernelKind::Bhp, &set(&[0, 4])).unwrap();
        assert!(b.entries.contains_key(&Layer::Empty));
        assert_eq!(b.total(), one());
        let big: Vec<i64> = (0..12).map(|i| 4 * i).collect();
        assert!(matches!(enumerate_row(KernelKind::Uip, &set(&big)), Err(KernelError::Cap { size: 24, cap: 22 })));
    }

    #[test]
    fn chain_total_is_the_normalizer() {
        for a in [vec![0], vec![0, 2], vec![0, 4, 6], vec![1, 3, 9, 11], vec![2, 8]] {
            let a = set(&a);
            for kind in [KernelKind::Bhp, KernelKind::Uip, KernelKind::UipPlus] {
                assert_eq!(transition_total_weight(kind, &a).unwrap(), kernel_denominator(kind, &a), "{kind:?} {a}");
            }
        }
    }

    #[test]
    fn exact_choose_is_proportional() {
        // weights 1:2 with total 3; first word 0 lies in slot 0, top word in slot 1
        let ws = [BigInt::from(1), BigInt::from(2)];
        let t = BigInt::from(3);
        let mut rng = RngStream::new(0, 0);
        assert_eq!(exact_choose(&mut rng, 0, &ws, &t), 0);
        assert_eq!(exact_choose(&mut rng, u64::MAX, &ws, &t), 1);
    }

    #[test]
    fn sample_transition_singleton() {
        let mut rng = RngStream::new(7, 0);
        let mut counts: BTreeMap<Layer, u32> = BTreeMap::new();
        for _ in 0..30_000 {
            *counts.entry(sample_transition(KernelKind::Uip, &set(&[0]), &mut rng).unwrap()).or_default() += 1;
        }
        assert_eq!(counts.len(), 3);
        for c in counts.values() {
            assert!((*c as f64 / 30_000.0 - 1.0 / 3.0).abs() < 0.015);
        }
        for _ in 0..100 {
            assert_eq!(sample_transition(KernelKind::UipPlus, &set(&[0]), &mut rng).unwrap(), lay(&[1]));
        }
    }

    #[test]
    fn marginal_examples() {
        let c = Animal::from_points(&[(0, 0), (1, 1)]).unwrap();
        assert_eq!(marginal_ball(KernelKind::Uip, &c, 1).unwrap(), ratio(1, 3));
        assert_eq!(marginal_ball(KernelKind::Bhp, &c, 1).unwrap(), ratio(2, 3));
        let root = Animal::from_points(&[(0, 0)]).unwrap();
        assert_eq!(marginal_ball(KernelKind::Uip, &root, 0).unwrap(), one());
        assert!(marginal_ball(KernelKind::Uip, &c, 2).is_err());
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(subset_containment_prob(&set(&[0, 2]), &set(&[0])).unwrap(), ratio(1, 3));
        assert_eq!(subset_containment_prob(&set(&[0, 2]), &set(&[0, 2])).unwrap(), one());
        assert_eq!(cherry_probs(4, 4).unwrap().both, ratio(4, 27));
        assert_eq!(neighbour_fill_prob(), ratio(4, 9));
        let e = extreme_move_probs(&set(&[0]));
        assert_eq!(e.max_up, ratio(2, 3));
        assert_eq!(e.joint, ratio(1, 3));
        assert_eq!(extreme_move_probs(&set(&[0, 2])).joint, ratio(4, 9));
        assert_eq!(future_infimum_prob(&set(&[0]), 0).unwrap(), one());
        assert_eq!(future_infimum_prob(&set(&[2]), 1).unwrap(), ratio(1, 2));
        assert!(future_infimum_prob(&set(&[2]), -1).is_err());
        assert!(future_infimum_prob(&set(&[2]), 3).is_err());
    }
}
