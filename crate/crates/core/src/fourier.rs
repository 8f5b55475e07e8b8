//! Characters of `Z^d / L`, Fourier coefficients of coset indicators, and the
//! constructive translate-pair extraction for Cartesian tilings.
//!
//! An `L`-periodic function expands as `f(x) = sum_k c_k exp(2 pi i k.x)` with
//! `k` ranging over the dual set of `L`: the vectors in `[0,1)^d` whose dot
//! product with every lattice vector is an integer. For the indicator of
//! `v + L` every coefficient is `exp(-2 pi i k.v) / [Z^d : L]`.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::coset::Coset;
use crate::cyclotomic::{normalize_angle, CyclotomicSum};
use crate::error::{check_dim, Error, Result};
use crate::lattice::Lattice;
use crate::tiling::{verify_tiling, TilingInstance};

/// A standardized frequency vector with coordinates in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DualVector {
    coords: Vec<BigRational>,
}

impl DualVector {
    /// Standardizes each coordinate into `[0, 1)`.
    pub fn new(coords: Vec<BigRational>) -> Self {
        Self {
            coords: coords.iter().map(normalize_angle).collect(),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            coords: vec![BigRational::zero(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, v: &[BigInt]) -> BigRational {
        self.coords
            .iter()
            .zip(v)
            .map(|(k, x)| k * BigRational::from_integer(x.clone()))
            .sum()
    }

    /// Least common denominator of the coordinates.
    pub fn denominator(&self) -> BigInt {
        self.coords
            .iter()
            .fold(BigInt::one(), |acc, k| acc.lcm(k.denom()))
    }

    /// Whether `k . b` is an integer for every lattice vector `b`.
    pub fn annihilates(&self, lat: &Lattice) -> bool {
        lat.dim() == self.dim() && (0..lat.dim()).all(|i| self.dot(lat.basis().row(i)).is_integer())
    }
}

impl fmt::Debug for DualVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for DualVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.coords.iter().join(","))
    }
}

/// The dual set of `lat`, sorted lexicographically. Its size is the index.
///
/// With `U B V = diag(s)` the Smith decomposition of the basis, the dual set
/// is `{ V diag(1/s) m mod 1 : 0 <= m_i < s_i }`.
pub fn dual_set(lat: &Lattice) -> Vec<DualVector> {
    let d = lat.dim();
    let (s, v) = lat.smith_transform();
    let ranges: Vec<_> = s
        .iter()
        .map(|si| {
            let n = si.to_u64().expect("Smith invariant fits u64");
            (0..n).map(BigInt::from).collect::<Vec<_>>()
        })
        .collect();
    let mut out: Vec<DualVector> = ranges
        .into_iter()
        .multi_cartesian_product()
        .map(|m| {
            let coords = (0..d)
                .map(|j| {
                    (0..d)
                        .map(|i| BigRational::new(&v[(j, i)] * &m[i], s[i].clone()))
                        .sum()
                })
                .collect();
            DualVector::new(coords)
        })
        .collect();
    // multi_cartesian_product yields nothing for zero ranges
    if d == 0 {
        out.push(DualVector::zero(0));
    }
    out.sort();
    out.dedup();
    debug_assert_eq!(BigInt::from(out.len()), *lat.index());
    out
}

/// Fourier coefficient of the indicator of `c` at frequency `k`.
pub fn coset_coefficient(c: &Coset, k: &DualVector) -> Result<CyclotomicSum> {
    check_dim(c.dim(), k.dim())?;
    if !k.annihilates(c.lattice()) {
        return Ok(CyclotomicSum::zero());
    }
    let weight = BigRational::new(BigInt::one(), c.index().clone());
    Ok(CyclotomicSum::term(weight, -k.dot(c.rep())))
}

/// Independent route to [`coset_coefficient`]: average
/// `chi(x) exp(-2 pi i k.x)` over the torus `(Z/n)^d`.
///
/// `period` must satisfy `period Z^d ⊆ L`. The torus used is
/// `n = lcm(period, denominator(k))` so that the summand is `n`-periodic.
pub fn coefficient_by_averaging(
    c: &Coset,
    k: &DualVector,
    period: &BigInt,
) -> Result<CyclotomicSum> {
    check_dim(c.dim(), k.dim())?;
    if !period.is_positive() || !c.lattice().contains_scaled_unit_lattice(period) {
        return Err(Error::BadPeriod {
            period: period.to_string(),
        });
    }
    let n = period.lcm(&k.denominator());
    let side = n
        .to_u64()
        .ok_or_else(|| Error::InvalidArgument("averaging torus too large".into()))?;
    let d = c.dim();
    let volume = BigRational::from_integer(num_traits::pow(n.clone(), d));
    let weight = BigRational::one() / volume;
    let mut acc = CyclotomicSum::zero();
    let axes: Vec<Vec<BigInt>> = (0..d)
        .map(|_| (0..side).map(BigInt::from).collect())
        .collect();
    let points: Box<dyn Iterator<Item = Vec<BigInt>>> = if d == 0 {
        Box::new(std::iter::once(Vec::new()))
    } else {
        Box::new(axes.into_iter().multi_cartesian_product())
    };
    for x in points {
        if c.contains(&x) {
            acc.add_term(weight.clone(), -k.dot(&x));
        }
    }
    Ok(acc)
}

/// Evaluates `sum_k c_k exp(2 pi i k.x)` over the dual set of the coset's
/// lattice; the result equals the indicator of `c` at `x`.
pub fn fourier_inverse_at(c: &Coset, x: &[BigInt]) -> Result<CyclotomicSum> {
    check_dim(c.dim(), x.len())?;
    let mut acc = CyclotomicSum::zero();
    for k in dual_set(c.lattice()) {
        let coeff = coset_coefficient(c, &k)?;
        acc += &coeff.rotate(&k.dot(x));
    }
    Ok(acc)
}

/// Translate pair extracted from a Cartesian tiling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    /// Position of the tile with maximal index (lowest position on ties).
    pub maximal: usize,
    /// Another tile with a nonzero coefficient at `probe`; it shares the
    /// lattice of `maximal`.
    pub partner: usize,
    /// `(1/a_1, ..., 1/a_d)` for the maximal tile's moduli.
    pub probe: DualVector,
}

/// Finds two tiles of a Cartesian tiling that are translates of each other.
///
/// Take the tile whose lattice `a_1 Z x ... x a_d Z` has maximal index and
/// probe the frequency `k = (1/a_1, ..., 1/a_d)`. The indicator of `Z^d` has
/// zero coefficient there while that tile's coefficient is nonzero, so some
/// other tile must also have a nonzero coefficient at `k`; maximality then
/// forces its lattice to coincide.
pub fn mirsky_newman_witness(tiling: &TilingInstance) -> Result<Witness> {
    let tiles = tiling.tiles();
    if let Some(bad) = tiles.iter().position(|t| !t.is_cartesian()) {
        return Err(Error::NotCartesian { tile: bad });
    }
    if tiles.len() < 2 {
        return Err(Error::NotATiling {
            reason: "a single tile is the trivial family".into(),
        });
    }
    let report = verify_tiling(tiling)?;
    if !report.is_tiling {
        return Err(Error::NotATiling {
            reason: report.summary(),
        });
    }

    let maximal = tiles
        .iter()
        .enumerate()
        .rev()
        .max_by(|(_, a), (_, b)| a.index().cmp(b.index()))
        .map(|(i, _)| i)
        .expect("at least two tiles");
    let moduli = tiles[maximal]
        .lattice()
        .as_cartesian()
        .expect("checked Cartesian");
    let probe = DualVector::new(
        moduli
            .moduli()
            .iter()
            .map(|a| BigRational::new(BigInt::one(), a.clone()))
            .collect(),
    );
    debug_assert!(!coset_coefficient(&tiles[maximal], &probe)?.is_zero());

    for (j, tile) in tiles.iter().enumerate() {
        if j == maximal {
            continue;
        }
        if !coset_coefficient(tile, &probe)?.is_zero() {
            return Ok(Witness {
                maximal,
                partner: j,
                probe,
            });
        }
    }
    Err(Error::WitnessNotFound { maximal })
}
