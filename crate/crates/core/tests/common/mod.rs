#![allow(clippy::needless_range_loop)]

//! Oracles and generators shared by the integration tests. Nothing here calls
//! into the canonical-form code paths it is used to check.

#![allow(dead_code)]

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sublattice_tiling::{IntMatrix, Lattice};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| x.into()).collect()
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Decides `x ∈ row-span_Z(rows)` by solving `c * rows = x` over Q and
/// checking integrality. `rows` must be square and nonsingular.
pub fn in_row_lattice(rows: &[Vec<i64>], x: &[i64]) -> bool {
    let n = rows.len();
    // augmented system rows^T c = x
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut r: Vec<BigRational> = (0..n)
                .map(|j| BigRational::from_integer(rows[j][i].into()))
                .collect();
            r.push(BigRational::from_integer(x[i].into()));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("nonsingular");
        a.swap(col, piv);
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v = &*v / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (v, w) in a[r].iter_mut().zip(&pivot_row) {
                    *v = &*v - &f * w;
                }
            }
        }
    }
    a.iter().all(|r| r[n].is_integer())
}

pub fn lattice_rows_i64(l: &Lattice) -> Vec<Vec<i64>> {
    l.basis()
        .row_vecs()
        .into_iter()
        .map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect())
        .collect()
}

pub fn box_points(d: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    (0..d).map(|_| lo..=hi).multi_cartesian_product().collect()
}

pub fn det_i64(rows: &[Vec<i64>]) -> i64 {
    IntMatrix::from_rows(rows.iter().cloned())
        .unwrap()
        .determinant()
        .unwrap()
        .to_i64()
        .unwrap()
}

/// Random square basis with entries in `[-9, 9]` and nonzero determinant.
pub fn random_basis(r: &mut impl Rng, d: usize) -> Vec<Vec<i64>> {
    loop {
        let rows: Vec<Vec<i64>> = (0..d)
            .map(|_| (0..d).map(|_| r.random_range(-9..=9)).collect())
            .collect();
        if det_i64(&rows) != 0 {
            return rows;
        }
    }
}

/// Random lattice of index at most `max_index`: a random triangular basis
/// scrambled by a random unimodular matrix.
pub fn random_small_lattice(
    r: &mut impl Rng,
    d: usize,
    max_index: u64,
) -> (Lattice, Vec<Vec<i64>>) {
    loop {
        let diag: Vec<u64> = (0..d).map(|_| r.random_range(1..=max_index)).collect();
        if diag.iter().product::<u64>() > max_index {
            continue;
        }
        let mut rows = vec![vec![0i64; d]; d];
        for i in 0..d {
            rows[i][i] = diag[i] as i64;
            for j in i + 1..d {
                rows[i][j] = r.random_range(-5..=5);
            }
        }
        scramble(r, &mut rows);
        let lat = Lattice::from_generators(rows.clone(), d).unwrap();
        return (lat, rows);
    }
}

/// Applies random elementary unimodular row operations.
pub fn scramble(r: &mut impl Rng, rows: &mut [Vec<i64>]) {
    let d = rows.len();
    if d < 2 {
        if r.random_bool(0.5) {
            rows[0][0] = -rows[0][0];
        }
        return;
    }
    for _ in 0..6 {
        let i = r.random_range(0..d);
        let j = (i + r.random_range(1..d)) % d;
        let k: i64 = r.random_range(-2..=2);
        let src = rows[j].clone();
        for (a, b) in rows[i].iter_mut().zip(src) {
            *a += k * b;
        }
        if r.random_bool(0.3) {
            rows.swap(i, j);
        }
    }
}

/// Canonical representatives of `Z^d / L`: `0 <= x_i < diag_i`.
pub fn quotient_reps(l: &Lattice) -> Vec<Vec<i64>> {
    (0..l.dim())
        .map(|i| 0..l.diagonal(i).to_i64().unwrap())
        .multi_cartesian_product()
        .collect()
}

/// `#{x in Z^d/L : k x ∈ L}` by enumeration, membership decided against the
/// original generators `rows`.
pub fn killed_by(l: &Lattice, rows: &[Vec<i64>], k: i64) -> usize {
    quotient_reps(l)
        .into_iter()
        .filter(|x| {
            let kx: Vec<i64> = x.iter().map(|c| c * k).collect();
            in_row_lattice(rows, &kx)
        })
        .count()
}

/// Smallest `e` with `e * e_i ∈ L` for all `i`, by search.
pub fn brute_exponent(l: &Lattice) -> i64 {
    let rows = lattice_rows_i64(l);
    let d = l.dim();
    (1..)
        .find(|&e| {
            (0..d).all(|i| {
                let mut v = vec![0; d];
                v[i] = e;
                in_row_lattice(&rows, &v)
            })
        })
        .unwrap()
}

/// All `k ∈ (1/e Z / Z)^d` with `k . b ∈ Z` for each generator `b`.
pub fn brute_dual(rows: &[Vec<i64>], e: i64) -> Vec<Vec<BigRational>> {
    let d = rows.len();
    (0..d)
        .map(|_| 0..e)
        .multi_cartesian_product()
        .filter(|num| {
            rows.iter().all(|b| {
                let dot: i64 = num.iter().zip(b).map(|(n, x)| n * x).sum();
                dot.rem_euclid(e) == 0
            })
        })
        .map(|num| num.into_iter().map(|n| rat(n, e)).collect())
        .collect()
}
