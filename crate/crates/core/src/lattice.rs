//! Geometry of the rotated lattice `Z×N`: vertices, finite directed animals,
//! admissible sets (layers) and the orders `⊲` and `≼` on an animal.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("vertex ({x},{y}) is not on the lattice: x + y must be even")]
    Parity { x: i64, y: i64 },
    #[error("vertex ({x},{y}) has negative height")]
    NegativeHeight { x: i64, y: i64 },
    #[error("an animal must contain at least one vertex")]
    Empty,
    #[error("vertex ({x},{y}) appears twice")]
    Duplicate { x: i64, y: i64 },
    #[error("vertex ({x},{y}) is above the floor but has no parent")]
    Orphan { x: i64, y: i64 },
    #[error("vertex ({x},{y}) does not belong to the animal")]
    NotInAnimal { x: i64, y: i64 },
    #[error("not an admissible set: {0}")]
    NotAdmissible(&'static str),
}

/// A point `(x, y)` of `Z×N` with `x + y` even.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub x: i64,
    pub y: i64,
}

impl Vertex {
    pub fn new(x: i64, y: i64) -> Result<Vertex, LatticeError> {
        if y < 0 {
            return Err(LatticeError::NegativeHeight { x, y });
        }
        if (x + y).rem_euclid(2) != 0 {
            return Err(LatticeError::Parity { x, y });
        }
        Ok(Vertex { x, y })
    }

    pub fn reflect(self) -> Vertex {
        Vertex { x: -self.x, y: self.y }
    }

    fn level_key(&self) -> (i64, i64) {
        (self.y, self.x)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// The ball `B(r) = (Z×N) ∩ (⟦−r,r⟧ × ⟦0,r⟧)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ball {
    pub r: i64,
}

impl Ball {
    pub fn new(r: i64) -> Ball {
        assert!(r >= 0, "ball radius must be non-negative");
        Ball { r }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v.x.abs() <= self.r && v.y <= self.r
    }
}

/// Classification flags of a valid animal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub struct AnimalClass {
    /// Single source, located at the origin.
    pub pyramid: bool,
    pub nonneg_pyramid: bool,
    pub nonpos_pyramid: bool,
    /// `Some(p)` when the sources are exactly `{0, −2, …, −2p}`.
    pub compact_source: Option<usize>,
}

/// A finite directed animal. Vertices are kept sorted by `(y, x)` with an index
/// of where each height starts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Animal {
    vertices: Vec<Vertex>,
    level_start: Vec<usize>,
}

impl Animal {
    pub fn new<I: IntoIterator<Item = Vertex>>(vertices: I) -> Result<Animal, LatticeError> {
        let mut vs: Vec<Vertex> = vertices.into_iter().collect();
        if vs.is_empty() {
            return Err(LatticeError::Empty);
        }
        for v in &vs {
            Vertex::new(v.x, v.y)?;
        }
        vs.sort_unstable_by_key(|v| v.level_key());
        for w in vs.windows(2) {
            if w[0] == w[1] {
                return Err(LatticeError::Duplicate { x: w[0].x, y: w[0].y });
            }
        }
        let a = Animal::from_sorted(vs);
        for v in &a.vertices {
            if v.y > 0
                && !a.contains(Vertex { x: v.x - 1, y: v.y - 1 })
                && !a.contains(Vertex { x: v.x + 1, y: v.y - 1 })
            {
                return Err(LatticeError::Orphan { x: v.x, y: v.y });
            }
        }
        Ok(a)
    }

    /// Builds from pairs, validating the lattice and parent conditions.
    pub fn from_points(points: &[(i64, i64)]) -> Result<Animal, LatticeError> {
        let mut vs = Vec::with_capacity(points.len());
        for &(x, y) in points {
            vs.push(Vertex::new(x, y)?);
        }
        Animal::new(vs)
    }

    // `vs` sorted by (y, x), distinct, nonempty
    pub(crate) fn from_sorted(vs: Vec<Vertex>) -> Animal {
        let top = vs.last().map(|v| v.y).unwrap_or(0) as usize;
        let mut level_start = vec![0usize; top + 2];
        let mut i = 0;
        for (h, slot) in level_start.iter_mut().enumerate() {
            while i < vs.len() && (vs[i].y as usize) < h {
                i += 1;
            }
            *slot = i;
        }
        Animal { vertices: vs, level_start }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Vertices sorted by height, then by `x`.
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Largest `y` among the vertices.
    pub fn height(&self) -> i64 {
        self.vertices.last().map(|v| v.y).unwrap_or(0)
    }

    pub fn level(&self, n: i64) -> &[Vertex] {
        if n < 0 || n as usize + 1 >= self.level_start.len() {
            return &[];
        }
        let n = n as usize;
        &self.vertices[self.level_start[n]..self.level_start[n + 1]]
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.index_of(v).is_some()
    }

    pub fn index_of(&self, v: Vertex) -> Option<usize> {
        if v.y < 0 {
            return None;
        }
        let lvl = self.level(v.y);
        let off = self.level_start.get(v.y as usize).copied()?;
        lvl.binary_search_by_key(&v.x, |w| w.x).ok().map(|i| off + i)
    }

    /// Floor vertices, which are exactly the vertices without parent.
    pub fn sources(&self) -> &[Vertex] {
        self.level(0)
    }

    pub fn class(&self) -> AnimalClass {
        let src = self.sources();
        let pyramid = src.len() == 1 && src[0].x == 0;
        let nonneg = pyramid && self.vertices.iter().all(|v| v.x >= 0);
        let nonpos = pyramid && self.vertices.iter().all(|v| v.x <= 0);
        let p = src.len() - 1;
        let compact = src
            .iter()
            .rev()
            .enumerate()
            .all(|(i, v)| v.x == -2 * i as i64);
        AnimalClass {
            pyramid,
            nonneg_pyramid: nonneg,
            nonpos_pyramid: nonpos,
            compact_source: if compact { Some(p) } else { None },
        }
    }

    /// Mirror image against the vertical axis.
    pub fn reflect(&self) -> Animal {
        let mut vs: Vec<Vertex> = self.vertices.iter().map(|v| v.reflect()).collect();
        vs.sort_unstable_by_key(|v| v.level_key());
        Animal::from_sorted(vs)
    }

    /// Vertices inside the ball. Empty when the root is outside.
    pub fn ball_vertices(&self, ball: Ball) -> Vec<Vertex> {
        self.vertices
            .iter()
            .copied()
            .filter(|v| ball.contains(*v))
            .collect()
    }

    /// Intersection with the ball, which must again be an animal.
    pub fn restrict(&self, ball: Ball) -> Result<Animal, LatticeError> {
        let vs = self.ball_vertices(ball);
        Animal::new(vs)
    }

    pub fn to_points(&self) -> Vec<(i64, i64)> {
        self.vertices.iter().map(|v| (v.x, v.y)).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct AnimalJson {
    vertices: Vec<(i64, i64)>,
}

impl Serialize for Animal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        AnimalJson { vertices: self.to_points() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Animal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Animal, D::Error> {
        let raw = AnimalJson::deserialize(d)?;
        Animal::from_points(&raw.vertices).map_err(serde::de::Error::custom)
    }
}

/// Checks whether `points` form a directed animal and classifies it.
pub fn classify(points: &[(i64, i64)]) -> Result<AnimalClass, LatticeError> {
    Animal::from_points(points).map(|a| a.class())
}

pub fn is_directed_animal(points: &[(i64, i64)]) -> bool {
    classify(points).is_ok()
}

/// Nonempty strictly increasing integers sharing one parity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct AdmissibleSet(Vec<i64>);

impl AdmissibleSet {
    pub fn new(elems: Vec<i64>) -> Result<AdmissibleSet, LatticeError> {
        if elems.is_empty() {
            return Err(LatticeError::NotAdmissible("empty"));
        }
        for w in elems.windows(2) {
            if w[1] <= w[0] {
                return Err(LatticeError::NotAdmissible("not strictly increasing"));
            }
            if (w[1] - w[0]) % 2 != 0 {
                return Err(LatticeError::NotAdmissible("mixed parity"));
            }
        }
        Ok(AdmissibleSet(elems))
    }

    /// Sorts and deduplicates before validating.
    pub fn from_unsorted<I: IntoIterator<Item = i64>>(it: I) -> Result<AdmissibleSet, LatticeError> {
        let set: BTreeSet<i64> = it.into_iter().collect();
        AdmissibleSet::new(set.into_iter().collect())
    }

    pub fn singleton(x: i64) -> AdmissibleSet {
        AdmissibleSet(vec![x])
    }

    pub fn elems(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn min(&self) -> i64 {
        self.0[0]
    }

    pub fn max(&self) -> i64 {
        self.0[self.0.len() - 1]
    }

    pub fn contains(&self, x: i64) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn eta(&self) -> BigInt {
        eta(&self.0)
    }

    /// `[A] = (A − 1) ∪ (A + 1)`.
    pub fn augment(&self) -> AdmissibleSet {
        let mut out = Vec::with_capacity(2 * self.0.len());
        for &a in &self.0 {
            for c in [a - 1, a + 1] {
                if out.last().is_none_or(|&l| l < c) {
                    out.push(c);
                }
            }
        }
        AdmissibleSet(out)
    }

    pub fn shift(&self, d: i64) -> AdmissibleSet {
        AdmissibleSet(self.0.iter().map(|&a| a + d).collect())
    }

    pub fn reflect(&self) -> AdmissibleSet {
        AdmissibleSet(self.0.iter().rev().map(|&a| -a).collect())
    }

    /// Elements inside `⟦lo, hi⟧`, if any.
    pub fn clip(&self, lo: i64, hi: i64) -> Option<AdmissibleSet> {
        let v: Vec<i64> = self.0.iter().copied().filter(|&a| lo <= a && a <= hi).collect();
        if v.is_empty() {
            None
        } else {
            Some(AdmissibleSet(v))
        }
    }
}

impl TryFrom<Vec<i64>> for AdmissibleSet {
    type Error = LatticeError;
    fn try_from(v: Vec<i64>) -> Result<Self, Self::Error> {
        AdmissibleSet::new(v)
    }
}

impl From<AdmissibleSet> for Vec<i64> {
    fn from(a: AdmissibleSet) -> Vec<i64> {
        a.0
    }
}

impl fmt::Display for AdmissibleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

/// A layer of an animal or a state of the layer chains; `Empty` is the
/// absorbing state of the half-pyramid chain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Layer {
    Empty,
    Set(AdmissibleSet),
}

impl Layer {
    pub fn as_set(&self) -> Option<&AdmissibleSet> {
        match self {
            Layer::Empty => None,
            Layer::Set(s) => Some(s),
        }
    }

    pub fn elems(&self) -> &[i64] {
        match self {
            Layer::Empty => &[],
            Layer::Set(s) => s.elems(),
        }
    }

    pub fn from_elems(v: Vec<i64>) -> Result<Layer, LatticeError> {
        if v.is_empty() {
            Ok(Layer::Empty)
        } else {
            AdmissibleSet::new(v).map(Layer::Set)
        }
    }
}

impl From<AdmissibleSet> for Layer {
    fn from(a: AdmissibleSet) -> Layer {
        Layer::Set(a)
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Layer::Empty => write!(f, "∅"),
            Layer::Set(s) => s.fmt(f),
        }
    }
}

/// x-coordinates of the vertices at height `n`.
pub fn layer(a: &Animal, n: i64) -> Layer {
    let xs: Vec<i64> = a.level(n).iter().map(|v| v.x).collect();
    if xs.is_empty() {
        Layer::Empty
    } else {
        Layer::Set(AdmissibleSet(xs))
    }
}

/// `η(C) = Π (c_{i+1} − c_i − 1)` over a sorted sequence.
pub fn eta(c: &[i64]) -> BigInt {
    let mut p = BigInt::one();
    for w in c.windows(2) {
        p *= w[1] - w[0] - 1;
    }
    p
}

/// `η⁺(F) = Π (f_{j+1} − f_j + 1)` over a sorted sequence.
pub fn eta_plus(f: &[i64]) -> BigInt {
    let mut p = BigInt::one();
    for w in f.windows(2) {
        p *= w[1] - w[0] + 1;
    }
    p
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PartialOrdering {
    Less,
    Greater,
    Incomparable,
    Equal,
}

/// Memoized reachability for `⊲` on a finite animal: `desc[i]` is the bitset
/// of vertices `j ≠ i` with `v_i ⊲ v_j`.
pub struct OrderIndex<'a> {
    animal: &'a Animal,
    words: usize,
    desc: Vec<u64>,
}

impl<'a> OrderIndex<'a> {
    pub fn new(animal: &'a Animal) -> OrderIndex<'a> {
        let n = animal.len();
        let words = n.div_ceil(64);
        let mut desc = vec![0u64; n * words];
        // lowest vertex of each column strictly above a given height; filled
        // while sweeping heights downward
        let mut lowest_above: BTreeMap<i64, usize> = BTreeMap::new();
        let top = animal.height();
        for h in (0..=top).rev() {
            let lvl_off = animal.level_start[h as usize];
            let lvl = animal.level(h);
            for (k, v) in lvl.iter().enumerate() {
                let i = lvl_off + k;
                for c in [v.x - 1, v.x, v.x + 1] {
                    if let Some(&j) = lowest_above.get(&c) {
                        // j sits strictly higher, hence later in the array
                        debug_assert!(i < j);
                        desc[i * words + j / 64] |= 1u64 << (j % 64);
                        let (left, right) = desc.split_at_mut(j * words);
                        for (d, s) in left[i * words..(i + 1) * words].iter_mut().zip(&right[..words]) {
                            *d |= *s;
                        }
                    }
                }
            }
            for (k, v) in lvl.iter().enumerate() {
                lowest_above.insert(v.x, lvl_off + k);
            }
        }
        OrderIndex { animal, words, desc }
    }

    /// `v_i ⊲ v_j` with `i ≠ j`.
    pub fn below(&self, i: usize, j: usize) -> bool {
        self.desc[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn compare(&self, i: usize, j: usize) -> PartialOrdering {
        if i == j {
            PartialOrdering::Equal
        } else if self.below(i, j) {
            PartialOrdering::Less
        } else if self.below(j, i) {
            PartialOrdering::Greater
        } else {
            PartialOrdering::Incomparable
        }
    }

    /// The total order `≼` (or its mirror) between two vertex indices.
    pub fn total_cmp(&self, i: usize, j: usize, mirror: bool) -> Ordering {
        match self.compare(i, j) {
            PartialOrdering::Equal => Ordering::Equal,
            PartialOrdering::Less => Ordering::Less,
            PartialOrdering::Greater => Ordering::Greater,
            PartialOrdering::Incomparable => {
                let (a, b) = (self.animal.vertices[i].x, self.animal.vertices[j].x);
                if mirror {
                    a.cmp(&b)
                } else {
                    b.cmp(&a)
                }
            }
        }
    }
}

pub fn compare_partial(a: Vertex, b: Vertex, animal: &Animal) -> Result<PartialOrdering, LatticeError> {
    let i = animal
        .index_of(a)
        .ok_or(LatticeError::NotInAnimal { x: a.x, y: a.y })?;
    let j = animal
        .index_of(b)
        .ok_or(LatticeError::NotInAnimal { x: b.x, y: b.y })?;
    if i == j {
        return Ok(PartialOrdering::Equal);
    }
    Ok(OrderIndex::new(animal).compare(i, j))
}

/// Vertices sorted by `≼`, or by the mirror order when `mirror` is set.
///
/// Runs by peeling: the last vertex for `≼` is the `⊲`-maximal vertex of
/// smallest `x` (largest for the mirror order), and removing it leaves an
/// animal on which the order is the restriction.
pub fn sort_total(animal: &Animal, mirror: bool) -> Vec<Vertex> {
    let mut cols: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
    for v in animal.vertices() {
        cols.entry(v.x).or_default().push(v.y);
    }
    let top = |cols: &BTreeMap<i64, Vec<i64>>, c: i64| -> i64 {
        cols.get(&c).and_then(|h| h.last().copied()).unwrap_or(-1)
    };
    let is_max = |cols: &BTreeMap<i64, Vec<i64>>, c: i64| -> bool {
        let t = top(cols, c);
        t >= 0 && t > top(cols, c - 1) && t > top(cols, c + 1)
    };
    let mut maximal: BTreeSet<i64> = cols.keys().copied().filter(|&c| is_max(&cols, c)).collect();
    let mut out = Vec::with_capacity(animal.len());
    while let Some(c) = if mirror { maximal.pop_last() } else { maximal.pop_first() } {
        let col = cols.get_mut(&c).expect("column present");
        let y = col.pop().expect("nonempty column");
        if col.is_empty() {
            cols.remove(&c);
        }
        out.push(Vertex { x: c, y });
        for d in [c - 1, c, c + 1] {
            if is_max(&cols, d) {
                maximal.insert(d);
            } else {
                maximal.remove(&d);
            }
        }
    }
    out.reverse();
    out
}

/// Reference sort by the definition of `≼`, quadratic in memory.
pub fn sort_total_by_definition(animal: &Animal, mirror: bool) -> Vec<Vertex> {
    let idx = OrderIndex::new(animal);
    let mut ids: Vec<usize> = (0..animal.len()).collect();
    ids.sort_by(|&i, &j| idx.total_cmp(i, j, mirror));
    ids.into_iter().map(|i| animal.vertices()[i]).collect()
}
