use num_bigint::BigInt;
use proptest::prelude::*;

use animalab::encoding::{decode, decode_steps, encode, validate, EncodingPath, PathClass, PathError};
use animalab::enumeration::{count, count_nonpos_pyramids, count_pyramids_naive, AnimalKind};
use animalab::lattice::is_directed_animal;
use animalab::Animal;

/// A pyramid path: from `x` with running minimum `m`, either `+1` or a jump
/// to any height in `[m − 1, x − 1]`.
fn pyramid_path(moves: &[(bool, u32)]) -> Vec<i64> {
    let mut p = vec![0i64];
    let (mut x, mut m) = (0i64, 0i64);
    for &(up, k) in moves {
        if up {
            x += 1;
        } else {
            let span = (x - m + 1) as u32;
            x = m - 1 + i64::from(k % span);
        }
        m = m.min(x);
        p.push(x);
    }
    p
}

/// Any valid path: an extra source may start at any even position at least
/// 2 below the minimum.
fn general_path(moves: &[(u8, u32)]) -> Vec<i64> {
    let mut p = vec![0i64];
    let (mut x, mut m) = (0i64, 0i64);
    for &(kind, k) in moves {
        match kind % 3 {
            0 => x += 1,
            1 => x = m - 1 + i64::from(k % (x - m + 1) as u32),
            _ => x = (m - 2).div_euclid(2) * 2 - 2 * i64::from(k % 3),
        }
        m = m.min(x);
        p.push(x);
    }
    p
}

proptest! {
    #[test]
    fn pyramid_paths_round_trip(moves in prop::collection::vec((any::<bool>(), any::<u32>()), 0..40)) {
        let p = pyramid_path(&moves);
        prop_assert_eq!(validate(&p, PathClass::Pyramid), Ok(()));
        let path = EncodingPath::new(p.clone()).unwrap();
        prop_assert!(path.is_pyramid());
        let a = decode(&path);
        prop_assert_eq!(a.len(), p.len());
        prop_assert_eq!(a.sources().len(), 1);
        prop_assert!(is_directed_animal(&a.to_points()));
        let back = encode(&a);
        prop_assert_eq!(back.steps(), p.as_slice());
    }

    #[test]
    fn general_paths_round_trip(moves in prop::collection::vec((any::<u8>(), any::<u32>()), 0..40)) {
        let p = general_path(&moves);
        prop_assert_eq!(validate(&p, PathClass::Any), Ok(()));
        let a = decode_steps(&p).unwrap();
        prop_assert_eq!(a.len(), p.len());
        prop_assert!(is_directed_animal(&a.to_points()));
        let back = encode(&a);
        prop_assert_eq!(back.steps(), p.as_slice());
    }

    #[test]
    fn encoding_is_injective_on_sizes(moves in prop::collection::vec((any::<bool>(), any::<u32>()), 1..30)) {
        let p = pyramid_path(&moves);
        let a = decode_steps(&p).unwrap();
        let mut shorter = p.clone();
        shorter.pop();
        prop_assert_ne!(decode_steps(&shorter).unwrap(), a);
    }
}

#[test]
fn invalid_paths_are_rejected() {
    assert_eq!(validate(&[], PathClass::Any), Err(PathError::Empty));
    // an increment of 2
    assert!(validate(&[0, 2], PathClass::Any).is_err());
    // an increment of 0
    assert!(validate(&[0, 0], PathClass::Any).is_err());
    // a second source at odd distance below the minimum
    assert!(validate(&[0, -3], PathClass::Any).is_err());
    assert!(validate(&[0, -2], PathClass::Any).is_ok());
    assert!(validate(&[0, -2], PathClass::Pyramid).is_err());
    assert!(validate(&[0, 1, -1], PathClass::NonnegPyramid).is_err());
    assert!(validate(&[0, 1, 0, 1, 2, 0], PathClass::NonnegPyramid).is_ok());
    assert!(decode_steps(&[0, 2]).is_err());
}

#[test]
fn small_paths_decode_to_known_animals() {
    let pts = |p: &[i64]| decode_steps(p).unwrap().to_points();
    assert_eq!(pts(&[0]), vec![(0, 0)]);
    assert_eq!(pts(&[0, 1]), vec![(0, 0), (1, 1)]);
    assert_eq!(pts(&[0, -1]), vec![(0, 0), (-1, 1)]);
    let cherry = Animal::from_points(&[(0, 0), (-1, 1), (1, 1)]).unwrap();
    assert_eq!(decode(&encode(&cherry)), cherry);
    // two sources side by side
    assert_eq!(pts(&[0, -2]), vec![(-2, 0), (0, 0)]);
}

#[test]
fn pyramid_counts_match_known_sequences() {
    // pyramids: 1, 2, 5, 13, 35, 96, 267, 750
    let pyramids = [1u32, 2, 5, 13, 35, 96, 267, 750];
    // half-pyramids: Motzkin numbers
    let half = [1u32, 1, 2, 4, 9, 21, 51, 127];
    for n in 1..=8 {
        assert_eq!(count(AnimalKind::Pyramid, n), BigInt::from(pyramids[n - 1]), "pyramid n={n}");
        assert_eq!(count(AnimalKind::HalfPyramid, n), BigInt::from(half[n - 1]), "half n={n}");
        assert_eq!(count_pyramids_naive(n), count(AnimalKind::Pyramid, n));
        assert_eq!(count_nonpos_pyramids(n), count(AnimalKind::HalfPyramid, n));
    }
    for n in 1..=15usize {
        assert_eq!(count(AnimalKind::CompactSource, n), num_traits::pow(BigInt::from(3), n - 1));
    }
}
