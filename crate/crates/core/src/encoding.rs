//! The bijection between finite animals and skip-free paths: a path is read
//! as the columns where dominoes are dropped from infinity, and an animal is
//! encoded by listing the x-coordinates of its vertices in `≼` order.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{sort_total, Animal, LatticeError, Vertex};

/// Path classes accepted by [`validate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PathClass {
    /// Conditions (a) and (b): the image of all finite animals.
    Any,
    /// Conditions (a) and (c): pyramids rooted at the origin.
    Pyramid,
    /// Conditions (a) and (d), started at 0: non-negative pyramids.
    NonnegPyramid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Condition {
    /// Increments lie in `{1} ∪ Z₋*`.
    A,
    /// Start and every undershoot of at least 2 below the running min are even.
    B,
    /// Starts at 0 and never beats its running min by more than 1.
    C,
    /// Starts at 0 and stays non-negative.
    D,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::A => "(a) increment outside {1} ∪ Z₋*",
            Condition::B => "(b) odd source position",
            Condition::C => "(c) start ≠ 0 or minimum beaten by more than 1",
            Condition::D => "(d) start ≠ 0 or negative value",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("empty path")]
    Empty,
    #[error("index {index}: {condition}")]
    Violation { index: usize, condition: Condition },
}

fn violation(index: usize, condition: Condition) -> PathError {
    PathError::Violation { index, condition }
}

/// Checks the conditions of `class`, reporting the first violation.
pub fn validate(p: &[i64], class: PathClass) -> Result<(), PathError> {
    let Some(&x0) = p.first() else {
        return Err(PathError::Empty);
    };
    match class {
        PathClass::Any if x0.rem_euclid(2) != 0 => return Err(violation(0, Condition::B)),
        PathClass::Pyramid if x0 != 0 => return Err(violation(0, Condition::C)),
        PathClass::NonnegPyramid if x0 != 0 => return Err(violation(0, Condition::D)),
        _ => {}
    }
    let mut min = x0;
    for k in 1..p.len() {
        let (prev, x) = (p[k - 1], p[k]);
        if x - prev >= 2 || x == prev {
            return Err(violation(k, Condition::A));
        }
        match class {
            PathClass::Any => {
                if x <= min - 2 && x.rem_euclid(2) != 0 {
                    return Err(violation(k, Condition::B));
                }
            }
            PathClass::Pyramid => {
                if x < min - 1 {
                    return Err(violation(k, Condition::C));
                }
            }
            PathClass::NonnegPyramid => {
                if x < 0 {
                    return Err(violation(k, Condition::D));
                }
            }
        }
        min = min.min(x);
    }
    Ok(())
}

/// A path satisfying (a) and (b), i.e. the encoding of a finite animal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct EncodingPath(Vec<i64>);

impl EncodingPath {
    pub fn new(steps: Vec<i64>) -> Result<EncodingPath, PathError> {
        validate(&steps, PathClass::Any)?;
        Ok(EncodingPath(steps))
    }

    pub fn steps(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_pyramid(&self) -> bool {
        validate(&self.0, PathClass::Pyramid).is_ok()
    }

    pub fn is_nonneg_pyramid(&self) -> bool {
        validate(&self.0, PathClass::NonnegPyramid).is_ok()
    }

    /// Indices `k` where a new source is created: 0 and every undershoot of
    /// the running minimum by at least 2.
    pub fn source_indices(&self) -> Vec<usize> {
        let mut out = vec![0];
        let mut min = self.0[0];
        for (k, &x) in self.0.iter().enumerate().skip(1) {
            if x <= min - 2 {
                out.push(k);
            }
            min = min.min(x);
        }
        out
    }
}

impl TryFrom<Vec<i64>> for EncodingPath {
    type Error = PathError;
    fn try_from(v: Vec<i64>) -> Result<Self, Self::Error> {
        EncodingPath::new(v)
    }
}

impl From<EncodingPath> for Vec<i64> {
    fn from(p: EncodingPath) -> Vec<i64> {
        p.0
    }
}

/// Per-column height of the highest domino, as a window over the columns a
/// path can visit.
pub(crate) struct Skyline {
    lo: i64,
    tops: Vec<i64>,
}

impl Skyline {
    pub(crate) fn new(lo: i64, hi: i64) -> Skyline {
        // one spare column on each side for the neighbour lookups
        Skyline { lo: lo - 1, tops: vec![-1; (hi - lo + 3) as usize] }
    }

    pub(crate) fn top(&self, x: i64) -> i64 {
        let i = x - self.lo;
        if i < 0 || i as usize >= self.tops.len() {
            -1
        } else {
            self.tops[i as usize]
        }
    }

    /// Drops a domino at `x` and returns its landing height.
    pub(crate) fn drop_at(&mut self, x: i64) -> i64 {
        let y = 1 + self.top(x - 1).max(self.top(x + 1));
        let slot = &mut self.tops[(x - self.lo) as usize];
        *slot = (*slot).max(y);
        y
    }
}

/// Landing positions of dominoes dropped along `p`, in dropping order.
/// The caller guarantees (a) and (b).
pub(crate) fn drop_along(p: &[i64]) -> Vec<Vertex> {
    if p.is_empty() {
        return Vec::new();
    }
    let lo = *p.iter().min().unwrap();
    let hi = *p.iter().max().unwrap();
    let mut sky = Skyline::new(lo, hi);
    p.iter()
        .map(|&x| Vertex { x, y: sky.drop_at(x) })
        .collect()
}

/// Vertices of the decoded animal in construction order, which is also the
/// `≼` order.
pub fn decode_ordered(p: &EncodingPath) -> Vec<Vertex> {
    drop_along(&p.0)
}

pub fn decode(p: &EncodingPath) -> Animal {
    let mut vs = decode_ordered(p);
    vs.sort_unstable_by_key(|v| (v.y, v.x));
    Animal::from_sorted(vs)
}

/// Validates then decodes a raw path.
pub fn decode_steps(steps: &[i64]) -> Result<Animal, PathError> {
    validate(steps, PathClass::Any)?;
    Ok(decode(&EncodingPath(steps.to_vec())))
}

/// Decodes a path that the caller already knows to satisfy (a) and (b).
pub(crate) fn decode_trusted(steps: &[i64]) -> Animal {
    let mut vs = drop_along(steps);
    vs.sort_unstable_by_key(|v| (v.y, v.x));
    Animal::from_sorted(vs)
}

pub fn encode(a: &Animal) -> EncodingPath {
    EncodingPath(sort_total(a, false).into_iter().map(|v| v.x).collect())
}

/// Adds the domino dropped from infinity at column `x`.
pub fn drop_domino(a: &Animal, x: i64) -> Result<Animal, LatticeError> {
    let mut top = -1;
    for v in a.vertices() {
        if v.x == x - 1 || v.x == x + 1 {
            top = top.max(v.y);
        }
    }
    let v = Vertex::new(x, top + 1)?;
    let mut vs = a.vertices().to_vec();
    if vs.contains(&v) {
        return Err(LatticeError::Duplicate { x: v.x, y: v.y });
    }
    vs.push(v);
    Animal::new(vs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(v: &[i64]) -> EncodingPath {
        EncodingPath::new(v.to_vec()).unwrap()
    }

    fn animal(p: &[(i64, i64)]) -> Animal {
        Animal::from_points(p).unwrap()
    }

    #[test]
    fn decode_examples() {
        assert_eq!(decode(&path(&[0, 1, 2, -1])), animal(&[(0, 0), (1, 1), (2, 2), (-1, 1)]));
        assert_eq!(decode(&path(&[0])), animal(&[(0, 0)]));
    }

    #[test]
    fn decode_pictured_path() {
        // dominoes fall at 0, then on top of it at 1, then 2, 3, -2, -1, -3
        let o = decode_ordered(&path(&[0, 1, 2, 3, -2, -1, -3]));
        let expect = [(0, 0), (1, 1), (2, 2), (3, 3), (-2, 0), (-1, 1), (-3, 1)];
        let got: Vec<(i64, i64)> = o.iter().map(|v| (v.x, v.y)).collect();
        assert_eq!(got, expect);
        let a = decode(&path(&[0, 1, 2, 3, -2, -1, -3]));
        assert_eq!(encode(&a).steps(), &[0, 1, 2, 3, -2, -1, -3]);
    }

    #[test]
    fn encode_examples() {
        assert_eq!(encode(&animal(&[(0, 0)])).steps(), &[0]);
        assert_eq!(encode(&animal(&[(0, 0), (1, 1), (-1, 1)])).steps(), &[0, 1, -1]);
    }

    #[test]
    fn validate_examples() {
        assert!(validate(&[0, 1, -1], PathClass::Pyramid).is_ok());
        assert_eq!(
            validate(&[0, -2], PathClass::Pyramid),
            Err(PathError::Violation { index: 1, condition: Condition::C })
        );
        assert_eq!(
            validate(&[0, 1, 1], PathClass::Any),
            Err(PathError::Violation { index: 2, condition: Condition::A })
        );
        assert_eq!(
            validate(&[0, 2], PathClass::Any),
            Err(PathError::Violation { index: 1, condition: Condition::A })
        );
        // the increments +1, −1 are both allowed
        assert!(validate(&[0, 1, 0], PathClass::Pyramid).is_ok());
        assert_eq!(
            validate(&[0, -3], PathClass::Any),
            Err(PathError::Violation { index: 1, condition: Condition::B })
        );
        assert_eq!(
            validate(&[1], PathClass::Any),
            Err(PathError::Violation { index: 0, condition: Condition::B })
        );
        assert!(validate(&[0, -1], PathClass::Any).is_ok());
        assert!(validate(&[0, 1, 0 - 1], PathClass::NonnegPyramid).is_err());
        assert!(validate(&[0, 1, 2, 0], PathClass::NonnegPyramid).is_ok());
        assert_eq!(validate(&[], PathClass::Any), Err(PathError::Empty));
    }

    #[test]
    fn drop_examples() {
        let a = animal(&[(0, 0)]);
        assert!(drop_domino(&a, 1).unwrap().contains(Vertex { x: 1, y: 1 }));
        assert!(drop_domino(&a, 4).unwrap().contains(Vertex { x: 4, y: 0 }));
        let b = animal(&[(0, 0), (1, 1)]);
        assert!(drop_domino(&b, 0).unwrap().contains(Vertex { x: 0, y: 2 }));
        assert!(matches!(drop_domino(&a, 3), Err(LatticeError::Parity { .. })));
    }

    #[test]
    fn sources_follow_undershoots() {
        let p = path(&[0, 1, -2, -1, -3, -6]);
        assert_eq!(p.source_indices(), vec![0, 2, 5]);
        let a = decode(&p);
        let src: Vec<i64> = a.sources().iter().map(|v| v.x).collect();
        assert_eq!(src, vec![-6, -2, 0]);
    }
}
