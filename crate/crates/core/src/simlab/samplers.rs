//! Random animals assembled from walk paths. Ball samplers decode against a
//! skyline whose tops are capped at `r + 1`: every domino in column `c` of a
//! pyramid sits at height at least `|c|`, so drops outside `⟦−r, r⟧` or above
//! `r` only ever set a capped top to `r + 1`, and walk excursions above
//! `r + 1` can be replaced by their landing point.

use rand::Rng;
use thiserror::Error;

use crate::encoding::decode_trusted;
use crate::lattice::{Animal, Vertex};
use crate::walks::{
    sample_excursion, sample_excursion_bounded, sample_geometric, sample_nonneg_step, sample_shaved_nonpos,
    sample_step, ShavedState, WalkError,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SampleError {
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error("retry budget of {attempts} attempts exhausted ({accepted} accepted)")]
    Budget { attempts: u64, accepted: u64 },
}

/// Default number of rejection attempts per sample.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// Capped tops over the columns `⟦−(r+1), r+1⟧`, with the vertices that
/// landed inside `B(r)`.
#[derive(Clone, Debug)]
pub struct CappedSkyline {
    r: i64,
    tops: Vec<i64>,
    pub vertices: Vec<Vertex>,
}

impl CappedSkyline {
    pub fn new(r: i64) -> CappedSkyline {
        assert!(r >= 0);
        CappedSkyline { r, tops: vec![-1; (2 * r + 3) as usize], vertices: Vec::new() }
    }

    pub fn cap(&self) -> i64 {
        self.r + 1
    }

    pub fn top(&self, c: i64) -> i64 {
        if c.abs() > self.r + 1 {
            // never read for a drop inside the ball
            self.cap()
        } else {
            self.tops[(c + self.r + 1) as usize]
        }
    }

    /// Drops at column `c`; returns the vertex if it lands in `B(r)`.
    pub fn drop_at(&mut self, c: i64) -> Option<Vertex> {
        let cap = self.cap();
        if c.abs() > self.r {
            if c.abs() == self.r + 1 {
                self.tops[(c + self.r + 1) as usize] = cap;
            }
            return None;
        }
        let y = (1 + self.top(c - 1).max(self.top(c + 1))).min(cap);
        let i = (c + self.r + 1) as usize;
        self.tops[i] = self.tops[i].max(y);
        if y <= self.r {
            let v = Vertex { x: c, y };
            self.vertices.push(v);
            Some(v)
        } else {
            None
        }
    }

    pub fn into_animal(self) -> Animal {
        Animal::new(self.vertices).expect("a capped decode of a pyramid path is a pyramid")
    }
}

/// Landing point of the walk `S` after it steps from `r + 1` to `r + 2`: the
/// first entry below `r + 2` undershoots by a geometric amount.
fn collapse_above<R: Rng + ?Sized>(r: i64, rng: &mut R) -> i64 {
    r + 2 - sample_geometric(rng)
}

/// Boltzmann half-pyramid decoded from a full positive excursion.
pub fn sample_bhp<R: Rng + ?Sized>(rng: &mut R) -> Result<Animal, WalkError> {
    Ok(decode_trusted(&sample_excursion(rng)?.values))
}

/// `A ∩ B(r)` for the Boltzmann half-pyramid.
pub fn sample_bhp_ball<R: Rng + ?Sized>(r: i64, rng: &mut R) -> Animal {
    let mut sky = CappedSkyline::new(r);
    let mut x = 0i64;
    while x >= 0 {
        sky.drop_at(x);
        let d = sample_step(rng);
        x = if x == r + 1 && d == 1 { collapse_above(r, rng) } else { x + d };
    }
    sky.into_animal()
}

/// Height of the Boltzmann half-pyramid, observed up to `h`: `Some(height)`
/// if it is below `h`, `None` if it reaches `h`.
pub fn bhp_height_below<R: Rng + ?Sized>(h: i64, rng: &mut R) -> Option<i64> {
    let a = sample_bhp_ball(h, rng);
    (a.height() < h).then(|| a.height())
}

/// `Ā ∩ B(r)` for the uniform infinite pyramid: the shaved walk run until it
/// first reaches `−(r+1)`.
pub fn sample_uip_ball<R: Rng + ?Sized>(r: i64, rng: &mut R) -> Animal {
    let mut sky = CappedSkyline::new(r);
    let mut s = ShavedState::origin();
    while s.x > -(r + 1) {
        sky.drop_at(s.x);
        let d = sample_step(rng);
        if s.x == r + 1 && d == 1 {
            let land = collapse_above(r, rng);
            s.apply(land - s.x);
        } else {
            s.apply(d);
        }
    }
    sky.into_animal()
}

/// `Ā⁻ ∩ B(r)` from the non-positive conditioned shaved walk.
pub fn sample_uip_minus_ball<R: Rng + ?Sized>(r: i64, rng: &mut R) -> Result<Animal, WalkError> {
    let t = sample_shaved_nonpos(r + 1, rng)?;
    let mut sky = CappedSkyline::new(r);
    for &x in &t.values {
        sky.drop_at(x);
    }
    Ok(sky.into_animal())
}

/// `Ā⁺ ∩ B(r)`, the mirror image of [`sample_uip_minus_ball`].
pub fn sample_uip_plus_ball<R: Rng + ?Sized>(r: i64, rng: &mut R) -> Result<Animal, WalkError> {
    Ok(sample_uip_minus_ball(r, rng)?.reflect())
}

/// Uniform pyramid with `n` vertices: the shaved walk conditioned to make a
/// new minimum at step `n`, by plain rejection.
pub fn sample_uniform_pyramid<R: Rng + ?Sized>(n: usize, budget: u64, rng: &mut R) -> Result<Animal, SampleError> {
    assert!(n >= 1);
    let mut values = Vec::with_capacity(n);
    for _ in 0..budget {
        values.clear();
        let mut s = ShavedState::origin();
        values.push(0);
        for _ in 1..n {
            values.push(s.step(rng));
        }
        if s.x + sample_step(rng) < s.min {
            return Ok(decode_trusted(&values));
        }
    }
    Err(SampleError::Budget { attempts: budget, accepted: 0 })
}

/// Uniform non-negative half-pyramid with size in `⟦n, n + window⟧`,
/// uniform given its size.
pub fn sample_uniform_half_pyramid<R: Rng + ?Sized>(
    n: usize,
    window: usize,
    budget: u64,
    rng: &mut R,
) -> Result<Animal, SampleError> {
    assert!(n >= 1);
    for _ in 0..budget {
        if let Some(t) = sample_excursion_bounded(n + window, rng) {
            if t.len() >= n {
                return Ok(decode_trusted(&t.values));
            }
        }
    }
    Err(SampleError::Budget { attempts: budget, accepted: 0 })
}

/// `B(r)`-content of uniform pyramids of size `n`, sampled exactly but
/// without finishing walks whose ball content is already decided.
///
/// The walk is the shaved walk; once no later drop can land in `B(r)` the
/// attempt is accepted with the probability `g[n − t][h]` that a new minimum
/// occurs exactly `n − t` steps later from height `h` above the minimum.
#[derive(Clone, Debug)]
pub struct PyramidBallSampler {
    n: usize,
    r: i64,
    // g[s][h], s ∈ 1..=n, h ∈ 0..=n
    g: Vec<Vec<f64>>,
}

impl PyramidBallSampler {
    pub fn new(n: usize, r: i64) -> PyramidBallSampler {
        assert!(n >= 1 && r >= 0);
        let hmax = n + 1;
        let mut g = vec![Vec::new(); n + 1];
        g[1] = (0..=hmax).map(|h| 0.5f64.powi(h as i32) / 3.0).collect();
        for s in 2..=n {
            let prev = &g[s - 1];
            let mut row = vec![0.0; hmax + 1];
            // m = Σ_{j=1}^{h} 2^{−j} prev[h−j]
            let mut m = 0.0;
            for h in 0..=hmax {
                if h > 0 {
                    m = (prev[h - 1] + m) / 2.0;
                }
                let up = if h < hmax { prev[h + 1] } else { 0.0 };
                row[h] = 2.0 / 3.0 * up + m / 3.0 + 0.5f64.powi(h as i32) / 3.0 * prev[0];
            }
            g[s] = row;
        }
        PyramidBallSampler { n, r, g }
    }

    /// `P(new minimum at exactly step s | height h)`.
    pub fn new_min_prob(&self, s: usize, h: usize) -> f64 {
        self.g[s].get(h).copied().unwrap_or(0.0)
    }

    fn settled(&self, sky: &CappedSkyline, m: i64, p: i64) -> bool {
        let r = self.r;
        let land = |c: i64| 1 + sky.top(c - 1).max(sky.top(c + 1));
        let mut bound_right = sky.top(p);
        let mut bounds = Vec::with_capacity((2 * r + 1) as usize);
        for c in -r..=r {
            let b = if c < m {
                // filled in below, from m − 1 downward
                i64::MAX
            } else if c <= p {
                land(c)
            } else {
                bound_right = land(c).max(1 + bound_right);
                bound_right
            };
            bounds.push(b);
        }
        let mut bound_left = sky.top(m);
        for c in (-r..m.min(r + 1)).rev() {
            bound_left = land(c).max(1 + bound_left);
            bounds[(c + r) as usize] = bound_left;
        }
        bounds.iter().all(|&b| b > r)
    }

    /// One ball content and the number of attempts it took.
    pub fn sample<R: Rng + ?Sized>(&self, budget: u64, rng: &mut R) -> Result<(Animal, u64), SampleError> {
        for attempt in 1..=budget {
            let mut sky = CappedSkyline::new(self.r);
            let mut s = ShavedState::origin();
            let mut p = 0i64;
            sky.drop_at(0);
            let mut t = 0usize;
            let accepted = loop {
                let h = (s.x - s.min) as usize;
                if t + 1 == self.n {
                    break s.x + sample_step(rng) < s.min;
                }
                if self.settled(&sky, s.min, p) {
                    break rng.gen::<f64>() < self.new_min_prob(self.n - t, h);
                }
                s.step(rng);
                p = p.max(s.x);
                sky.drop_at(s.x);
                t += 1;
            };
            if accepted {
                return Ok((sky.into_animal(), attempt));
            }
        }
        Err(SampleError::Budget { attempts: budget, accepted: 0 })
    }
}

/// The two-colour construction of the UIP+ truncated to `B(r)`.
#[derive(Clone, Debug)]
pub struct BlueRed {
    pub ball: Animal,
    /// Red vertices inside the ball.
    pub red: Vec<Vertex>,
    /// `red_columns[x]`: some red vertex (at any height) has abscissa `x`,
    /// for `x ∈ ⟦0, r⟧`.
    pub red_columns: Vec<bool>,
}

// After a step from r + 1 to r + 2, S⁺ never comes back below r + 2 with
// probability 2/(r+4); otherwise it lands at r + 2 − G with weight
// 2^{−G}(r + 4 − G), G ∈ ⟦1, r+2⟧. Weights scaled by 2^{r+2}(r+4).
fn blue_return<R: Rng + ?Sized>(r: i64, rng: &mut R) -> Option<i64> {
    let escape = 1u128 << (r + 3);
    let total = (1u128 << (r + 2)) * (r as u128 + 4);
    let mut u = rng.gen_range(0..total);
    if u < escape {
        return None;
    }
    u -= escape;
    for g in 1..=r + 2 {
        let w = (1u128 << (r + 2 - g)) * (r + 4 - g) as u128;
        if u < w {
            return Some(r + 2 - g);
        }
        u -= w;
    }
    unreachable!("weights cover the range")
}

/// Blue part from `S⁺`, then for `x = r, …, 0` an independent fair coin
/// decides whether a half-pyramid rooted at `x` is dropped on top.
pub fn sample_uip_plus_bluered<R: Rng + ?Sized>(r: i64, rng: &mut R) -> BlueRed {
    assert!((0..100).contains(&r));
    let mut sky = CappedSkyline::new(r);
    let mut z = 0i64;
    loop {
        sky.drop_at(z);
        let d = sample_nonneg_step(z, rng);
        if z == r + 1 && d == 1 {
            match blue_return(r, rng) {
                Some(l) => z = l,
                None => break,
            }
        } else {
            z += d;
        }
    }
    let blue_len = sky.vertices.len();
    let mut red_columns = vec![false; (r + 1) as usize];
    for root in (0..=r).rev() {
        if !rng.gen::<bool>() {
            continue;
        }
        let mut x = root;
        while x >= root {
            if x <= r {
                red_columns[x as usize] = true;
            }
            sky.drop_at(x);
            let d = sample_step(rng);
            x = if x == r + 1 && d == 1 { collapse_above(r, rng) } else { x + d };
        }
    }
    let red = sky.vertices[blue_len..].to_vec();
    BlueRed { ball: sky.into_animal(), red, red_columns }
}
