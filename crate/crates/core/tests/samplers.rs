use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use animalab::enumeration::{enumerate_animals, excursion_law, AnimalKind};
use animalab::exact::to_f64;
use animalab::kernels::{enumerate_row, KernelKind};
use animalab::lattice::{layer, Ball};
use animalab::simlab::samplers::{
    sample_bhp, sample_uip_ball, sample_uip_minus_ball, sample_uip_plus_ball, sample_uip_plus_bluered,
    sample_uniform_half_pyramid, sample_uniform_pyramid, PyramidBallSampler, DEFAULT_BUDGET,
};
use animalab::simlab::{experiment, ExperimentConfig};
use animalab::walks::WalkError;
use animalab::{AdmissibleSet, Animal, Layer};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn z(k: u64, n: u64, p: f64) -> f64 {
    let n = n as f64;
    (k as f64 - n * p) / (n * p * (1.0 - p)).sqrt().max(1e-12)
}

fn tally<K: Ord>(it: impl IntoIterator<Item = K>) -> BTreeMap<K, u64> {
    let mut m = BTreeMap::new();
    for k in it {
        *m.entry(k).or_insert(0) += 1;
    }
    m
}

/// Every key of `a` and `b` with pooled frequency above 1e-3 agrees to four
/// standard errors of the difference.
fn same_law<K: Ord + std::fmt::Debug>(a: &BTreeMap<K, u64>, na: u64, b: &BTreeMap<K, u64>, nb: u64) {
    let keys: std::collections::BTreeSet<&K> = a.keys().chain(b.keys()).collect();
    for k in keys {
        let ka = a.get(k).copied().unwrap_or(0);
        let kb = b.get(k).copied().unwrap_or(0);
        let p = (ka + kb) as f64 / (na + nb) as f64;
        if p < 1e-3 {
            continue;
        }
        let d = ka as f64 / na as f64 - kb as f64 / nb as f64;
        let se = (p * (1.0 - p) * (1.0 / na as f64 + 1.0 / nb as f64)).sqrt();
        assert!(d == 0.0 || (d / se).abs() < 4.0, "{k:?}: {ka}/{na} vs {kb}/{nb}");
    }
}

#[test]
fn bhp_gives_each_half_pyramid_weight_three_to_minus_size() {
    let n = 30_000u64;
    let mut g = rng(1);
    // a step-cap error means an excursion longer than the cap, so a large animal
    let counts = tally((0..n).filter_map(|_| match sample_bhp(&mut g) {
        Ok(a) => (a.len() <= 4).then_some(a),
        Err(WalkError::StepCap { .. }) => None,
        Err(e) => panic!("{e}"),
    }));
    for size in 1..=4usize {
        let p = 3f64.powi(-(size as i32));
        for a in enumerate_animals(AnimalKind::HalfPyramid, size).unwrap() {
            let k = counts.get(&a).copied().unwrap_or(0);
            assert!(z(k, n, p).abs() < 4.0, "{a:?}: {k} of {n}, expected {p}");
        }
    }
    let total_small: u64 = counts.values().sum();
    // Motzkin numbers 1, 1, 2, 4 of half-pyramids by size
    let p_small = 1.0 / 3.0 + 1.0 / 9.0 + 2.0 / 27.0 + 4.0 / 81.0;
    assert!(z(total_small, n, p_small).abs() < 4.0);
}

#[test]
fn uniform_pyramids_are_uniform() {
    let mut g = rng(2);
    for size in [3usize, 5] {
        let all: Vec<Animal> = enumerate_animals(AnimalKind::Pyramid, size).unwrap().collect();
        let n = 60_000u64;
        let counts = tally((0..n).map(|_| sample_uniform_pyramid(size, DEFAULT_BUDGET, &mut g).unwrap()));
        assert_eq!(counts.len(), all.len(), "size {size}");
        for a in &all {
            let k = counts.get(a).copied().unwrap_or(0);
            assert!(z(k, n, 1.0 / all.len() as f64).abs() < 4.0, "{a:?}: {k}");
        }
    }
}

#[test]
fn uniform_half_pyramids_are_uniform() {
    let mut g = rng(3);
    let all: Vec<Animal> = enumerate_animals(AnimalKind::HalfPyramid, 4).unwrap().collect();
    let n = 60_000u64;
    for window in [0usize, 3] {
        let counts = tally(
            (0..n)
                .map(|_| sample_uniform_half_pyramid(4, window, DEFAULT_BUDGET, &mut g).unwrap())
                .filter(|a| a.len() == 4),
        );
        let m: u64 = counts.values().sum();
        if window == 0 {
            assert_eq!(m, n);
        }
        for a in &all {
            let k = counts.get(a).copied().unwrap_or(0);
            assert!(z(k, m, 1.0 / all.len() as f64).abs() < 4.0, "window {window}, {a:?}: {k} of {m}");
        }
    }
}

#[test]
fn uip_first_layer_follows_the_kernel_row() {
    let n = 300_000u64;
    let mut g = rng(4);
    let row = enumerate_row(KernelKind::Uip, &AdmissibleSet::singleton(0)).unwrap();
    let counts = tally((0..n).map(|_| layer(&sample_uip_ball(1, &mut g), 1)));
    for l in counts.keys() {
        assert!(row.entries.contains_key(l), "{l:?} outside the row");
    }
    for (l, p) in &row.entries {
        let k = counts.get(l).copied().unwrap_or(0);
        assert!(z(k, n, to_f64(p)).abs() < 4.0, "{l:?}: {k}");
    }
}

#[test]
fn one_sided_pyramids_stay_on_their_side() {
    let mut g = rng(5);
    for _ in 0..5_000 {
        let m = sample_uip_minus_ball(3, &mut g).unwrap();
        let p = sample_uip_plus_ball(3, &mut g).unwrap();
        assert!(m.vertices().iter().all(|v| v.x <= 0));
        assert!(p.vertices().iter().all(|v| v.x >= 0));
        assert!(m.height() <= 3 && p.height() <= 3);
    }
}

#[test]
fn uip_plus_second_layer_follows_the_kernel_row() {
    let n = 200_000u64;
    let mut g = rng(6);
    let row = enumerate_row(KernelKind::UipPlus, &AdmissibleSet::singleton(1)).unwrap();
    let mut second = Vec::with_capacity(n as usize);
    for _ in 0..n {
        let a = sample_uip_plus_ball(2, &mut g).unwrap();
        assert_eq!(layer(&a, 1), Layer::Set(AdmissibleSet::singleton(1)));
        second.push(layer(&a, 2));
    }
    let counts = tally(second);
    for (l, p) in &row.entries {
        let k = counts.get(l).copied().unwrap_or(0);
        assert!(z(k, n, to_f64(p)).abs() < 4.0, "{l:?}: {k}");
    }
    assert_eq!(counts.keys().filter(|l| !row.entries.contains_key(*l)).count(), 0);
}

#[test]
fn larger_balls_restrict_to_smaller_ones() {
    let n = 150_000u64;
    let mut g = rng(7);
    let small = tally((0..n).map(|_| sample_uip_ball(1, &mut g)));
    let big = tally((0..n).map(|_| sample_uip_ball(2, &mut g).restrict(Ball::new(1)).unwrap()));
    same_law(&small, n, &big, n);
}

#[test]
fn two_colour_construction_matches_the_conditioned_walk() {
    let n = 150_000u64;
    let mut g = rng(8);
    for r in [1, 2] {
        let walk = tally((0..n).map(|_| sample_uip_plus_ball(r, &mut g).unwrap()));
        let bluered = tally((0..n).map(|_| sample_uip_plus_bluered(r, &mut g).ball));
        same_law(&walk, n, &bluered, n);
    }
}

#[test]
fn red_vertices_lie_in_the_ball_and_in_marked_columns() {
    let mut g = rng(9);
    for _ in 0..20_000 {
        let br = sample_uip_plus_bluered(3, &mut g);
        for v in &br.red {
            assert!(br.ball.contains(*v));
            assert!(br.red_columns[v.x as usize]);
        }
    }
}

#[test]
fn pyramid_ball_sampler_matches_exact_enumeration() {
    let (size, r) = (6usize, 1i64);
    let all: Vec<Animal> = enumerate_animals(AnimalKind::Pyramid, size).unwrap().collect();
    let exact = tally(all.iter().map(|a| a.restrict(Ball::new(r)).unwrap()));
    let sampler = PyramidBallSampler::new(size, r);
    let n = 100_000u64;
    let mut g = rng(10);
    let counts = tally((0..n).map(|_| sampler.sample(DEFAULT_BUDGET, &mut g).unwrap().0));
    for k in counts.keys() {
        assert!(exact.contains_key(k), "{k:?} is not the ball of any pyramid of size {size}");
    }
    for (content, m) in &exact {
        let k = counts.get(content).copied().unwrap_or(0);
        let p = *m as f64 / all.len() as f64;
        assert!(z(k, n, p).abs() < 4.0, "{content:?}: {k}, expected {p}");
    }
}

#[test]
fn pyramid_ball_acceptance_is_the_renewal_mass() {
    let size = 30usize;
    let sampler = PyramidBallSampler::new(size, 2);
    let mut g = rng(11);
    let samples = 20_000u64;
    let attempts: u64 = (0..samples).map(|_| sampler.sample(DEFAULT_BUDGET, &mut g).unwrap().1).sum();
    let u = to_f64(&excursion_law(size).u[size]);
    assert!(z(samples, attempts, u).abs() < 4.0, "{samples} accepted of {attempts}, u = {u}");
}

#[test]
fn martingale_means_vanish() {
    let rep = experiment(&ExperimentConfig::new("martingale", 20_000, 12)).unwrap();
    assert!(!rep.rows.is_empty());
    for row in &rep.rows {
        assert!(row.within(4.0), "{}: z = {}", row.event, row.z);
    }
}

#[test]
fn reports_do_not_depend_on_the_thread_count() {
    let mut cfg = ExperimentConfig::new("ball", 20_000, 13);
    cfg.model = Some(KernelKind::Uip);
    cfg.r = Some(2);
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = one.install(|| experiment(&cfg).unwrap().to_csv());
    let b = four.install(|| experiment(&cfg).unwrap().to_csv());
    assert_eq!(a, b);
}
