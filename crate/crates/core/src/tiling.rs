//! Coset families, the two exact tiling verifiers, and instance generators.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coset::{is_translate_pair, make_coset, Coset};
use crate::cyclotomic::CyclotomicSum;
use crate::error::{check_dim, Error, Result};
use crate::exec::{for_each_chunk_mut, map_collect, Execution};
use crate::fourier::{coset_coefficient, dual_set, DualVector};
use crate::lattice::{CartesianLattice, Lattice};

/// Default cap on the number of torus points a verifier may enumerate.
pub const DEFAULT_TORUS_BUDGET: u64 = 10_000_000;

/// An ordered, non-empty family of cosets in a common dimension.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TilingInstance {
    dim: usize,
    tiles: Vec<Coset>,
    period: BigInt,
}

impl TilingInstance {
    pub fn new(tiles: Vec<Coset>) -> Result<Self> {
        let first = tiles.first().ok_or(Error::EmptyFamily)?;
        let dim = first.dim();
        for t in &tiles {
            check_dim(dim, t.dim())?;
        }
        let period = tiles
            .iter()
            .fold(BigInt::one(), |acc, t| acc.lcm(&t.lattice().exponent()));
        debug_assert!(tiles
            .iter()
            .all(|t| t.lattice().contains_scaled_unit_lattice(&period)));
        Ok(Self { dim, tiles, period })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tiles(&self) -> &[Coset] {
        &self.tiles
    }

    pub fn into_tiles(self) -> Vec<Coset> {
        self.tiles
    }

    /// Least common multiple of the tile exponents; every tile is invariant
    /// under translation by `period * Z^d`.
    pub fn period(&self) -> &BigInt {
        &self.period
    }

    pub fn is_trivial(&self) -> bool {
        self.tiles.len() == 1
    }

    /// `sum_j 1 / [Z^d : L_j]`.
    pub fn density(&self) -> BigRational {
        self.tiles
            .iter()
            .map(|t| BigRational::new(BigInt::one(), t.index().clone()))
            .sum()
    }

    /// All pairs `(i, j)`, `i < j`, of tiles sharing a lattice.
    pub fn translate_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.tiles.len() {
            for j in i + 1..self.tiles.len() {
                if is_translate_pair(&self.tiles[i], &self.tiles[j]).expect("same dimension") {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn has_distinct_lattices(&self) -> bool {
        self.translate_pairs().is_empty()
    }

    pub fn all_cartesian(&self) -> bool {
        self.tiles.iter().all(Coset::is_cartesian)
    }

    /// Same family with tiles in sorted order.
    pub fn sorted(&self) -> TilingInstance {
        let mut tiles = self.tiles.clone();
        tiles.sort();
        TilingInstance {
            dim: self.dim,
            tiles,
            period: self.period.clone(),
        }
    }
}

impl fmt::Debug for TilingInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.tiles).finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Overlap {
    pub point: Vec<BigInt>,
    pub tiles: (usize, usize),
}

/// Outcome of a tiling check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageReport {
    pub is_tiling: bool,
    /// The family has a single tile; it may cover `Z^d` but is not a
    /// non-trivial tiling.
    pub trivial: bool,
    pub density: BigRational,
    /// Lexicographically first torus point covered by no tile.
    pub first_gap: Option<Vec<BigInt>>,
    /// Lexicographically first torus point covered twice or more, with the
    /// first two tiles covering it.
    pub first_overlap: Option<Overlap>,
    /// Frequency where the coefficient identity fails (Fourier method).
    pub failing_frequency: Option<DualVector>,
    pub distinct_lattices: bool,
}

impl CoverageReport {
    pub fn summary(&self) -> String {
        if self.is_tiling {
            return format!("tiling with density {}", self.density);
        }
        let mut parts = vec![format!("density {}", self.density)];
        if let Some(g) = &self.first_gap {
            parts.push(format!("gap at {}", fmt_point(g)));
        }
        if let Some(o) = &self.first_overlap {
            parts.push(format!(
                "overlap at {} (tiles {} and {})",
                fmt_point(&o.point),
                o.tiles.0,
                o.tiles.1
            ));
        }
        if let Some(k) = &self.failing_frequency {
            parts.push(format!("coefficient mismatch at k = {k}"));
        }
        parts.join(", ")
    }
}

pub fn fmt_point(p: &[BigInt]) -> String {
    let parts: Vec<String> = p.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

#[derive(Debug, Clone, Copy)]
pub struct TorusOptions {
    pub budget: u64,
    pub execution: Execution,
}

impl Default for TorusOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_TORUS_BUDGET,
            execution: Execution::default(),
        }
    }
}

/// Exact cover check on `(Z/period)^d` with default options.
pub fn verify_tiling_torus(t: &TilingInstance) -> Result<CoverageReport> {
    verify_tiling_torus_with(t, TorusOptions::default())
}

/// Coset in machine integers, valid on a torus of side `p` (all Hermite
/// entries lie in `[0, p]`).
struct SmallCoset {
    rep: Vec<i128>,
    basis: Vec<Vec<i128>>,
}

impl SmallCoset {
    fn new(c: &Coset) -> Self {
        let d = c.dim();
        let conv = |x: &BigInt| x.to_i128().expect("entries bounded by the period");
        Self {
            rep: c.rep().iter().map(conv).collect(),
            basis: (0..d)
                .map(|i| c.lattice().basis().row(i).iter().map(conv).collect())
                .collect(),
        }
    }

    /// Increments the count of every point of the coset inside the slab
    /// `x_0 = first` of the torus.
    fn mark_slab(&self, p: i128, first: i128, counts: &mut [u8]) {
        let b0 = self.basis[0][0];
        if (first - self.rep[0]).rem_euclid(b0) != 0 {
            return;
        }
        let c = (first - self.rep[0]) / b0;
        let mut off = self.rep.clone();
        for (k, o) in off.iter_mut().enumerate().skip(1) {
            *o = (*o + c * self.basis[0][k]).rem_euclid(p);
        }
        self.mark_from(p, 1, &off, 0, counts);
    }

    fn mark_from(&self, p: i128, i: usize, off: &[i128], lin: usize, counts: &mut [u8]) {
        let d = off.len();
        if i == d {
            counts[lin] = counts[lin].saturating_add(1);
            return;
        }
        let b = self.basis[i][i];
        let mut x = off[i].rem_euclid(b);
        let mut next = off.to_vec();
        while x < p {
            let c = (x - off[i]) / b;
            for k in i + 1..d {
                next[k] = (off[k] + c * self.basis[i][k]).rem_euclid(p);
            }
            self.mark_from(p, i + 1, &next, lin * p as usize + x as usize, counts);
            x += b;
        }
    }
}

fn torus_side(t: &TilingInstance, budget: u64) -> Result<(u64, usize)> {
    let points = num_traits::pow(t.period().clone(), t.dim());
    match (t.period().to_u64(), points.to_u64()) {
        (Some(p), Some(n)) if n <= budget => Ok((p, n as usize)),
        _ => Err(Error::TorusTooLarge {
            points: points.to_string(),
            budget,
        }),
    }
}

fn decode_point(mut lin: usize, p: u64, d: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); d];
    for i in (0..d).rev() {
        out[i] = BigInt::from(lin as u64 % p);
        lin /= p as usize;
    }
    out
}

pub fn verify_tiling_torus_with(t: &TilingInstance, opts: TorusOptions) -> Result<CoverageReport> {
    let (p, total) = torus_side(t, opts.budget)?;
    let d = t.dim();
    let slab = total / p as usize;
    let small: Vec<SmallCoset> = t.tiles().iter().map(SmallCoset::new).collect();
    let mut counts = vec![0u8; total];
    for_each_chunk_mut(opts.execution, &mut counts, slab, |first, chunk| {
        for tile in &small {
            tile.mark_slab(p as i128, first as i128, chunk);
        }
    });

    let first_gap = counts
        .iter()
        .position(|&c| c == 0)
        .map(|lin| decode_point(lin, p, d));
    let first_overlap = counts.iter().position(|&c| c > 1).map(|lin| {
        let point = decode_point(lin, p, d);
        let mut hits = t
            .tiles()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.contains(&point))
            .map(|(i, _)| i);
        let a = hits.next().expect("overlap point lies in a tile");
        let b = hits.next().expect("overlap point lies in two tiles");
        Overlap {
            point,
            tiles: (a, b),
        }
    });
    let is_tiling = first_gap.is_none() && first_overlap.is_none();
    let report = CoverageReport {
        is_tiling,
        trivial: t.is_trivial(),
        density: t.density(),
        first_gap,
        first_overlap,
        failing_frequency: None,
        distinct_lattices: t.has_distinct_lattices(),
    };
    debug_assert!(!report.is_tiling || report.density.is_one());
    Ok(report)
}

/// Coefficient check: `sum_j coeff(T_j, k)` must be 1 at `k = 0` and 0 at every
/// other frequency of the tiles' dual sets.
pub fn verify_tiling_fourier(t: &TilingInstance) -> Result<CoverageReport> {
    verify_tiling_fourier_with(t, Execution::default())
}

pub fn verify_tiling_fourier_with(t: &TilingInstance, exec: Execution) -> Result<CoverageReport> {
    let mut freqs = BTreeSet::new();
    for tile in t.tiles() {
        freqs.extend(dual_set(tile.lattice()));
    }
    let freqs: Vec<DualVector> = freqs.into_iter().collect();
    let ok = map_collect(exec, &freqs, |k| -> Result<bool> {
        let mut total = CyclotomicSum::zero();
        for tile in t.tiles() {
            total += &coset_coefficient(tile, k)?;
        }
        if k.is_zero() {
            total = total - CyclotomicSum::one();
        }
        Ok(total.is_zero())
    });
    let mut failing_frequency = None;
    for (k, ok) in freqs.iter().zip(ok) {
        if !ok? {
            failing_frequency = Some(k.clone());
            break;
        }
    }
    Ok(CoverageReport {
        is_tiling: failing_frequency.is_none(),
        trivial: t.is_trivial(),
        density: t.density(),
        first_gap: None,
        first_overlap: None,
        failing_frequency,
        distinct_lattices: t.has_distinct_lattices(),
    })
}

/// Torus check, falling back to the coefficient check when the torus is over
/// budget.
pub fn verify_tiling(t: &TilingInstance) -> Result<CoverageReport> {
    match verify_tiling_torus(t) {
        Err(Error::TorusTooLarge { .. }) => verify_tiling_fourier(t),
        other => other,
    }
}

fn int_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Four cosets of pairwise distinct index-4 lattices tiling `Z^3`, times
/// `Z^(d-3)`:
///
/// ```text
/// (0,1,0) + 2Z x 2Z x Z
/// (0,0,1) + Z x 2Z x 2Z
/// (1,0,0) + 2Z x Z x 2Z
/// (0,0,0) + {x : x1 = x2 = x3 mod 2}
/// ```
pub fn paper_counterexample(d: usize) -> Result<TilingInstance> {
    if d < 3 {
        return Err(Error::BadDimension {
            dim: d,
            reason: "the four-coset construction needs d >= 3",
        });
    }
    let cart = |m: [i64; 3], v: [i64; 3]| -> Coset {
        let lat = CartesianLattice::new(m)
            .expect("positive moduli")
            .to_lattice();
        make_coset(&lat, &int_vec(&v)).expect("dimension 3")
    };
    let parity = Lattice::from_generators([[2, 0, 0], [0, 2, 0], [1, 1, 1]], 3)
        .expect("nonsingular generators");
    let base = [
        cart([2, 2, 1], [0, 1, 0]),
        cart([1, 2, 2], [0, 0, 1]),
        cart([2, 1, 2], [1, 0, 0]),
        make_coset(&parity, &int_vec(&[0, 0, 0])).expect("dimension 3"),
    ];
    TilingInstance::new(base.iter().map(|c| c.extend_by_full(d - 3)).collect())
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Random Cartesian tiling built by repeatedly splitting one tile along one
/// axis into `p` translates, `p` a prime factor of `max_index`.
/// Deterministic in `seed`; always has at least two tiles, and every tile
/// index is at most `max_index`.
pub fn random_cartesian_tiling(d: usize, max_index: u64, seed: u64) -> Result<TilingInstance> {
    if d == 0 {
        return Err(Error::BadDimension {
            dim: 0,
            reason: "tilings need dimension at least 1",
        });
    }
    if max_index < 2 {
        return Err(Error::InvalidArgument(format!(
            "max_index must be at least 2, got {max_index}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let split_primes = prime_factors(max_index);
    let smallest = split_primes[0];
    let mut tiles: Vec<(Vec<i64>, Vec<u64>)> = vec![(vec![0; d], vec![1; d])];
    let target = rng.random_range(1..=8);
    for _ in 0..target {
        let splittable: Vec<usize> = (0..tiles.len())
            .filter(|&i| tiles[i].1.iter().product::<u64>() * smallest <= max_index)
            .collect();
        if splittable.is_empty() {
            break;
        }
        let ti = splittable[rng.random_range(0..splittable.len())];
        let index: u64 = tiles[ti].1.iter().product();
        let primes: Vec<u64> = split_primes
            .iter()
            .copied()
            .filter(|&p| index * p <= max_index)
            .collect();
        let p = primes[rng.random_range(0..primes.len())];
        let axis = rng.random_range(0..d);
        let (rep, moduli) = tiles.swap_remove(ti);
        let step = moduli[axis] as i64;
        for s in 0..p as i64 {
            let mut r = rep.clone();
            r[axis] += s * step;
            let mut m = moduli.clone();
            m[axis] *= p;
            tiles.push((r, m));
        }
    }
    let cosets = tiles
        .into_iter()
        .map(|(rep, moduli)| {
            let lat = CartesianLattice::new(moduli)?.to_lattice();
            make_coset(&lat, &int_vec(&rep))
        })
        .collect::<Result<Vec<_>>>()?;
    TilingInstance::new(cosets)
}

/// Moves one tile's representative by a unit vector. Usually breaks the
/// tiling, though not when the lattice contains that unit vector.
pub fn corrupt_tiling(t: &TilingInstance, seed: u64) -> TilingInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tiles = t.tiles().to_vec();
    let ti = rng.random_range(0..tiles.len());
    let axis = rng.random_range(0..t.dim());
    let mut e = vec![BigInt::zero(); t.dim()];
    e[axis] = BigInt::one();
    tiles[ti] = tiles[ti].translate(&e).expect("same dimension");
    TilingInstance::new(tiles).expect("same dimension")
}
