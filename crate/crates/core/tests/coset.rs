mod common;

use common::*;
use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::Rng;

use sublattice_tiling::{
    coset_contains, coset_intersection, is_translate_pair, make_coset, Coset, Lattice,
};

fn random_coset(r: &mut impl Rng, d: usize, max_index: u64) -> (Coset, Vec<Vec<i64>>, Vec<i64>) {
    let (l, rows) = random_small_lattice(r, d, max_index);
    let v: Vec<i64> = (0..d).map(|_| r.random_range(-20..=20)).collect();
    (make_coset(&l, &big(&v)).unwrap(), rows, v)
}

/// Membership in `v + span(rows)` by rational solving.
fn oracle_contains(rows: &[Vec<i64>], v: &[i64], x: &[i64]) -> bool {
    let diff: Vec<i64> = x.iter().zip(v).map(|(a, b)| a - b).collect();
    in_row_lattice(rows, &diff)
}

#[test]
fn rep_of_parity_coset_by_enumeration() {
    // lattice points near (3,1): (3,1) - (1,1) - (2,0) = (0,0), so (3,1) is in L
    let rows = vec![vec![1, 1], vec![0, 2]];
    assert!(oracle_contains(&rows, &[0, 0], &[3, 1]));
    let l = Lattice::from_generators(rows, 2).unwrap();
    assert_eq!(
        make_coset(&l, &big(&[3, 1])).unwrap().rep(),
        big(&[0, 0]).as_slice()
    );
}

#[test]
fn four_coset_membership_matches_parity_oracle() {
    let l = Lattice::from_generators([[2, 0, 0], [0, 2, 0], [0, 0, 1]], 3).unwrap();
    let t = make_coset(&l, &big(&[0, 1, 0])).unwrap();
    let parity = |x: &[i64]| x[0].is_even() && x[1].is_odd();
    for x in box_points(3, -3, 3) {
        assert_eq!(t.contains(&big(&x)), parity(&x), "{x:?}");
    }
    assert!(t.contains(&big(&[2, 3, 17])));
    assert!(!t.contains(&big(&[1, 1, 0])));
}

#[test]
fn membership_matches_rational_oracle() {
    let mut r = rng(10);
    for trial in 0..200 {
        let d = 1 + trial % 3;
        let (c, rows, v) = random_coset(&mut r, d, 30);
        assert!(c.contains(&big(&v)));
        for _ in 0..20 {
            let x: Vec<i64> = (0..d).map(|_| r.random_range(-25..=25)).collect();
            assert_eq!(c.contains(&big(&x)), oracle_contains(&rows, &v, &x));
        }
    }
}

#[test]
fn crt_example() {
    let two = Lattice::from_generators([[2]], 1).unwrap();
    let three = Lattice::from_generators([[3]], 1).unwrap();
    let got = coset_intersection(
        &make_coset(&two, &big(&[1])).unwrap(),
        &make_coset(&three, &big(&[2])).unwrap(),
    )
    .unwrap()
    .unwrap();
    // CRT over Z/6: the residues that are 1 mod 2 and 2 mod 3
    let oracle: Vec<i64> = (0..6).filter(|x| x % 2 == 1 && x % 3 == 2).collect();
    assert_eq!(oracle, vec![5]);
    assert_eq!(got.rep(), big(&[5]).as_slice());
    assert_eq!(got.index(), &BigInt::from(6));
}

#[test]
fn intersection_agrees_with_period_box_oracle() {
    let mut r = rng(11);
    let mut nonempty = 0;
    for trial in 0..200 {
        let d = 1 + trial % 3;
        // resample until the period box is small enough to enumerate
        let (a, ra, va, b, rb, vb, period) = loop {
            let (a, ra, va) = random_coset(&mut r, d, 30);
            let (b, rb, vb) = random_coset(&mut r, d, 30);
            let period = a
                .lattice()
                .exponent()
                .lcm(&b.lattice().exponent())
                .to_i64()
                .unwrap();
            if period.pow(d as u32) <= 2_000 {
                break (a, ra, va, b, rb, vb, period);
            }
        };
        let common: Vec<Vec<i64>> = (0..d)
            .map(|_| 0..period)
            .multi_cartesian_product()
            .filter(|x| oracle_contains(&ra, &va, x) && oracle_contains(&rb, &vb, x))
            .collect();
        match coset_intersection(&a, &b).unwrap() {
            None => assert!(common.is_empty(), "{a} ∩ {b} reported empty"),
            Some(c) => {
                nonempty += 1;
                assert!(!common.is_empty());
                // the result is exactly the common points
                for x in (0..d).map(|_| 0..period).multi_cartesian_product() {
                    assert_eq!(c.contains(&big(&x)), common.contains(&x));
                }
            }
        }
    }
    assert!(
        nonempty > 20,
        "too few nonempty intersections exercised: {nonempty}"
    );
}

#[test]
fn translate_detection_examples() {
    let four = Lattice::from_generators([[4]], 1).unwrap();
    let two = Lattice::from_generators([[2]], 1).unwrap();
    let c = |l: &Lattice, v: i64| make_coset(l, &big(&[v])).unwrap();
    assert!(is_translate_pair(&c(&four, 1), &c(&four, 3)).unwrap());
    assert!(!is_translate_pair(&c(&two, 0), &c(&four, 1)).unwrap());
    assert!(is_translate_pair(&c(&two, 0), &Coset::full(2)).is_err());
    assert!(coset_contains(&c(&two, 0), &big(&[0, 0])).is_err());
}

proptest! {
    #[test]
    fn canonicalization_is_coset_equality(
        seed in any::<u64>(),
        v in proptest::collection::vec(-30i64..=30, 2),
        w in proptest::collection::vec(-30i64..=30, 2),
    ) {
        let mut r = rng(seed);
        let (l, rows) = random_small_lattice(&mut r, 2, 24);
        let same = make_coset(&l, &big(&v)).unwrap() == make_coset(&l, &big(&w)).unwrap();
        let diff: Vec<i64> = v.iter().zip(&w).map(|(a, b)| a - b).collect();
        prop_assert_eq!(same, in_row_lattice(&rows, &diff));
    }

    #[test]
    fn shifting_by_lattice_vectors_keeps_rep(
        seed in any::<u64>(),
        v in proptest::collection::vec(-30i64..=30, 3),
        coeffs in proptest::collection::vec(-4i64..=4, 3),
    ) {
        let mut r = rng(seed);
        let (l, rows) = random_small_lattice(&mut r, 3, 24);
        let shift: Vec<i64> = (0..3)
            .map(|j| (0..3).map(|i| coeffs[i] * rows[i][j]).sum())
            .collect();
        let moved: Vec<i64> = v.iter().zip(&shift).map(|(a, b)| a + b).collect();
        let c = make_coset(&l, &big(&v)).unwrap();
        prop_assert_eq!(&c, &make_coset(&l, &big(&moved)).unwrap());
        prop_assert!(coset_contains(&c, &big(&v)).unwrap());
    }
}
