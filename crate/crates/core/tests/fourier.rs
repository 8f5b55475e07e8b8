mod common;

use common::*;
use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use sublattice_tiling::fourier::fourier_inverse_at;
use sublattice_tiling::{
    coefficient_by_averaging, coset_coefficient, dual_set, make_coset, mirsky_newman_witness,
    random_cartesian_tiling, sum_is_zero, CartesianLattice, CyclotomicSum, DualVector, Lattice,
};

#[test]
fn dual_of_parity_lattice_matches_brute_force() {
    let rows = vec![vec![2, 0, 0], vec![0, 2, 0], vec![1, 1, 1]];
    let l = Lattice::from_generators(rows.clone(), 3).unwrap();
    let oracle = brute_dual(&rows, 2);
    let got: Vec<Vec<BigRational>> = dual_set(&l).iter().map(|k| k.coords().to_vec()).collect();
    assert_eq!(got, oracle);
    assert_eq!(
        oracle,
        vec![
            vec![rat(0, 1), rat(0, 1), rat(0, 1)],
            vec![rat(0, 1), rat(1, 2), rat(1, 2)],
            vec![rat(1, 2), rat(0, 1), rat(1, 2)],
            vec![rat(1, 2), rat(1, 2), rat(0, 1)],
        ]
    );
}

#[test]
fn dual_cardinality_and_brute_force_on_random_lattices() {
    let mut r = rng(20);
    for trial in 0..100 {
        let d = 1 + trial % 3;
        let (l, rows) = random_small_lattice(&mut r, d, 60);
        let duals = dual_set(&l);
        assert_eq!(BigInt::from(duals.len()), *l.index());
        let e = l.exponent().to_i64().unwrap();
        let oracle = brute_dual(&rows, e);
        let got: Vec<Vec<BigRational>> = duals.iter().map(|k| k.coords().to_vec()).collect();
        assert_eq!(got, oracle, "{rows:?}");
        for k in &duals {
            assert!(k.coords().iter().all(|c| !c.is_negative_or_ge_one()));
            assert!(l.exponent() % k.denominator() == BigInt::zero());
        }
    }
}

trait UnitInterval {
    fn is_negative_or_ge_one(&self) -> bool;
}

impl UnitInterval for BigRational {
    fn is_negative_or_ge_one(&self) -> bool {
        *self < BigRational::zero() || *self >= BigRational::from_integer(1.into())
    }
}

#[test]
fn coefficient_matches_averaging_for_small_cosets() {
    let mut r = rng(21);
    let mut pairs = 0;
    for trial in 0..120 {
        let d = 1 + trial % 3;
        let (l, _) = random_small_lattice(&mut r, d, 24);
        let v: Vec<i64> = (0..d).map(|_| r.random_range(-9..=9)).collect();
        let c = make_coset(&l, &big(&v)).unwrap();
        let period = l.exponent();
        // frequencies in the dual set plus frequencies of the period torus outside it
        let p = period.to_i64().unwrap();
        let mut freqs = dual_set(&l);
        for _ in 0..3 {
            let k: Vec<BigRational> = (0..d)
                .map(|_| rat(r.random_range(0..p.max(2)), p.max(2)))
                .collect();
            freqs.push(DualVector::new(k));
        }
        for k in &freqs {
            let direct = coset_coefficient(&c, k).unwrap();
            let averaged = coefficient_by_averaging(&c, k, &period).unwrap();
            assert_eq!(direct, averaged, "{c} at {k}");
            pairs += 1;
        }
    }
    assert!(pairs >= 500, "only {pairs} pairs");
}

#[test]
fn fourier_inversion_reproduces_indicator() {
    let mut r = rng(22);
    for trial in 0..40 {
        let d = 1 + trial % 3;
        let (l, _) = random_small_lattice(&mut r, d, 12);
        let v: Vec<i64> = (0..d).map(|_| r.random_range(-5..=5)).collect();
        let c = make_coset(&l, &big(&v)).unwrap();
        let p = l.exponent().to_i64().unwrap();
        for x in (0..d).map(|_| 0..p).multi_cartesian_product() {
            let x = big(&x);
            let f = fourier_inverse_at(&c, &x).unwrap();
            let expect = if c.contains(&x) {
                CyclotomicSum::one()
            } else {
                CyclotomicSum::zero()
            };
            assert_eq!(f, expect);
        }
    }
}

/// Random sum on N-th roots of unity, half of them built to vanish from
/// rotated full orbits of p-th roots (p | N).
fn random_sum(r: &mut impl Rng) -> (CyclotomicSum, bool) {
    let n: i64 = r.random_range(1..=60);
    let mut s = CyclotomicSum::zero();
    let build_zero = r.random_bool(0.5) && n > 1;
    if build_zero {
        let divisors: Vec<i64> = (2..=n).filter(|p| n % p == 0).collect();
        for _ in 0..r.random_range(1..=4) {
            let p = divisors[r.random_range(0..divisors.len())];
            let q = rat(r.random_range(-9..=9), r.random_range(1..=9));
            let start = r.random_range(0..n);
            for j in 0..p {
                s.add_term(q.clone(), rat(start + j * (n / p), n));
            }
        }
    }
    let perturb = !build_zero || r.random_bool(0.3);
    if perturb {
        for _ in 0..r.random_range(1..=6) {
            s.add_term(
                rat(r.random_range(-9..=9), r.random_range(1..=9)),
                rat(r.random_range(0..n), n),
            );
        }
    }
    (s, build_zero && !perturb)
}

#[test]
fn zero_test_agrees_with_floating_point_bands() {
    let mut r = rng(23);
    let (mut zeros, mut nonzeros) = (0, 0);
    for _ in 0..500 {
        let (s, known_zero) = random_sum(&mut r);
        let exact = sum_is_zero(&s);
        let mag = s.magnitude();
        if known_zero {
            assert!(exact, "constructed zero sum rejected: {s}");
        }
        if exact {
            zeros += 1;
            assert!(mag < 1e-9, "exact zero but |value| = {mag}: {s}");
        } else {
            nonzeros += 1;
            assert!(mag > 1e-6, "exact nonzero but |value| = {mag}: {s}");
        }
    }
    assert!(
        zeros > 100 && nonzeros > 100,
        "zeros={zeros} nonzeros={nonzeros}"
    );
}

#[test]
fn witness_on_random_cartesian_tilings() {
    for seed in 0..100 {
        let d = 1 + (seed as usize) % 3;
        let t = random_cartesian_tiling(d, 36, seed).unwrap();
        let w = mirsky_newman_witness(&t).unwrap();
        assert_ne!(w.maximal, w.partner);
        let tiles = t.tiles();
        assert_eq!(tiles[w.maximal].lattice(), tiles[w.partner].lattice());
        let max = tiles.iter().map(|c| c.index()).max().unwrap();
        assert_eq!(tiles[w.maximal].index(), max);
        assert!(tiles[..w.maximal].iter().all(|c| c.index() < max));
    }
}

#[test]
fn witness_probe_for_mixed_moduli() {
    // Z = {0 + 2Z, 1 + 4Z, 3 + 4Z}; over Z/4 only the two 4Z tiles share a lattice
    let four = CartesianLattice::new([4]).unwrap().to_lattice();
    let two = CartesianLattice::new([2]).unwrap().to_lattice();
    let tiles = vec![
        make_coset(&two, &big(&[0])).unwrap(),
        make_coset(&four, &big(&[1])).unwrap(),
        make_coset(&four, &big(&[3])).unwrap(),
    ];
    let cover: Vec<usize> = (0..4)
        .map(|x| tiles.iter().filter(|c| c.contains(&big(&[x]))).count())
        .collect();
    assert_eq!(cover, vec![1, 1, 1, 1]);
    let t = sublattice_tiling::TilingInstance::new(tiles).unwrap();
    let w = mirsky_newman_witness(&t).unwrap();
    assert_eq!((w.maximal, w.partner), (1, 2));
    assert_eq!(w.probe.coords(), &[rat(1, 4)]);
}
