//! Full-rank sublattices of `Z^d` in canonical Hermite form.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::matrix::{hnf_rows, smith_with_column_transform, IntMatrix};

/// A full-rank sublattice of `Z^d`.
///
/// The basis is stored in row-style Hermite normal form: rows generate the
/// lattice, the matrix is upper triangular with positive diagonal, and each
/// entry above a diagonal entry lies in `[0, diagonal)`. Two `Lattice` values
/// are equal exactly when they describe the same point set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    basis: IntMatrix,
    index: BigInt,
    smith: Vec<BigInt>,
}

/// `a_1 Z x ... x a_d Z`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CartesianLattice {
    moduli: Vec<BigInt>,
}

impl CartesianLattice {
    pub fn new<T: Into<BigInt>>(moduli: impl IntoIterator<Item = T>) -> Result<Self> {
        let moduli: Vec<BigInt> = moduli.into_iter().map(Into::into).collect();
        if moduli.is_empty() {
            return Err(Error::BadDimension {
                dim: 0,
                reason: "lattices need dimension at least 1",
            });
        }
        if let Some(bad) = moduli.iter().find(|a| !a.is_positive()) {
            return Err(Error::InvalidArgument(format!(
                "Cartesian moduli must be positive, got {bad}"
            )));
        }
        Ok(Self { moduli })
    }

    pub fn moduli(&self) -> &[BigInt] {
        &self.moduli
    }

    pub fn to_lattice(&self) -> Lattice {
        hnf(&IntMatrix::diagonal(self.moduli.iter().cloned()))
            .expect("positive diagonal is nonsingular")
    }
}

impl From<CartesianLattice> for Lattice {
    fn from(c: CartesianLattice) -> Self {
        c.to_lattice()
    }
}

/// Canonical form of the lattice generated by the rows of a square,
/// nonsingular `basis`.
pub fn hnf(basis: &IntMatrix) -> Result<Lattice> {
    if !basis.is_square() {
        return Err(Error::DimensionMismatch {
            expected: basis.rows(),
            found: basis.cols(),
        });
    }
    if basis.rows() == 0 {
        return Err(Error::BadDimension {
            dim: 0,
            reason: "lattices need dimension at least 1",
        });
    }
    let rows = hnf_rows(basis.row_vecs(), basis.cols()).ok_or(Error::SingularBasis)?;
    Ok(Lattice::from_hnf_rows(rows))
}

/// `Z^d / L` as a direct sum of cyclic groups `Z/s_1 + ... + Z/s_d`,
/// with `s_i | s_{i+1}`.
pub fn smith_invariants(lat: &Lattice) -> Vec<BigInt> {
    lat.smith.clone()
}

/// Smallest `e` with `e Z^d` inside the lattice (the largest Smith invariant).
pub fn exponent(lat: &Lattice) -> BigInt {
    lat.smith.last().cloned().unwrap_or_else(BigInt::one)
}

/// Canonical form of `l1 ∩ l2`.
pub fn lattice_intersection(l1: &Lattice, l2: &Lattice) -> Result<Lattice> {
    check_dim(l1.dim(), l2.dim())?;
    let d = l1.dim();
    // Rows (B1 | B1) and (B2 | 0) generate {(a B1 + b B2, a B1)}; the part with
    // a zero first block is exactly {0} x (L1 ∩ L2).
    let rows = stacked_rows(l1, l2);
    let h = hnf_rows(rows, 2 * d).expect("stacked basis is nonsingular");
    let tail: Vec<Vec<BigInt>> = h[d..].iter().map(|r| r[d..].to_vec()).collect();
    let rows = hnf_rows(tail, d).expect("intersection has full rank");
    Ok(Lattice::from_hnf_rows(rows))
}

/// Canonical form of `l1 + l2`.
pub fn lattice_sum(l1: &Lattice, l2: &Lattice) -> Result<Lattice> {
    check_dim(l1.dim(), l2.dim())?;
    let mut rows = l1.basis.row_vecs();
    rows.extend(l2.basis.row_vecs());
    let rows = hnf_rows(rows, l1.dim()).expect("sum of full-rank lattices has full rank");
    Ok(Lattice::from_hnf_rows(rows))
}

pub(crate) fn stacked_rows(l1: &Lattice, l2: &Lattice) -> Vec<Vec<BigInt>> {
    let d = l1.dim();
    let mut rows = Vec::with_capacity(2 * d);
    for r in l1.basis.row_vecs() {
        let mut row = r.clone();
        row.extend(r);
        rows.push(row);
    }
    for r in l2.basis.row_vecs() {
        let mut row = r;
        row.extend(std::iter::repeat_n(BigInt::zero(), d));
        rows.push(row);
    }
    rows
}

impl Lattice {
    /// Lattice generated by an arbitrary spanning set of vectors in `Z^d`.
    pub fn from_generators<R, T>(generators: R, dim: usize) -> Result<Self>
    where
        R: IntoIterator,
        R::Item: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        if dim == 0 {
            return Err(Error::BadDimension {
                dim: 0,
                reason: "lattices need dimension at least 1",
            });
        }
        let rows: Vec<Vec<BigInt>> = generators
            .into_iter()
            .map(|r| r.into_iter().map(Into::into).collect())
            .collect();
        for r in &rows {
            check_dim(dim, r.len())?;
        }
        let rows = hnf_rows(rows, dim).ok_or(Error::SingularBasis)?;
        Ok(Self::from_hnf_rows(rows))
    }

    /// All of `Z^d`.
    pub fn full(dim: usize) -> Self {
        Self::from_hnf_rows(IntMatrix::identity(dim).row_vecs())
    }

    fn from_hnf_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let basis = IntMatrix::from_rows(rows).expect("hnf rows are rectangular");
        let index = (0..basis.rows()).map(|i| basis[(i, i)].clone()).product();
        let (smith, _) = smith_with_column_transform(&basis);
        Self {
            basis,
            index,
            smith,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn diagonal(&self, i: usize) -> &BigInt {
        &self.basis[(i, i)]
    }

    /// `[Z^d : L]`.
    pub fn index(&self) -> &BigInt {
        &self.index
    }

    pub fn smith_invariants(&self) -> &[BigInt] {
        &self.smith
    }

    pub fn exponent(&self) -> BigInt {
        exponent(self)
    }

    /// True when the canonical basis is diagonal, i.e. the lattice is
    /// `a_1 Z x ... x a_d Z`.
    pub fn is_cartesian(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| (i + 1..d).all(|j| self.basis[(i, j)].is_zero()))
    }

    pub fn as_cartesian(&self) -> Option<CartesianLattice> {
        self.is_cartesian().then(|| CartesianLattice {
            moduli: (0..self.dim())
                .map(|i| self.basis[(i, i)].clone())
                .collect(),
        })
    }

    /// Reduces `v` to the canonical representative of `v + L`:
    /// `0 <= v[i] < basis[i][i]` after eliminating coordinates in order.
    pub fn reduce(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        check_dim(self.dim(), v.len())?;
        let mut v = v.to_vec();
        for i in 0..self.dim() {
            let q = v[i].div_floor(&self.basis[(i, i)]);
            if !q.is_zero() {
                for (x, b) in v.iter_mut().zip(self.basis.row(i)).skip(i) {
                    *x -= &q * b;
                }
            }
        }
        Ok(v)
    }

    pub fn contains(&self, v: &[BigInt]) -> Result<bool> {
        check_dim(self.dim(), v.len())?;
        let mut v = v.to_vec();
        for i in 0..self.dim() {
            let (q, r) = v[i].div_rem(&self.basis[(i, i)]);
            if !r.is_zero() {
                return Ok(false);
            }
            if !q.is_zero() {
                for (x, b) in v.iter_mut().zip(self.basis.row(i)).skip(i) {
                    *x -= &q * b;
                }
            }
        }
        Ok(true)
    }

    /// Whether `m Z^d` lies inside the lattice.
    pub fn contains_scaled_unit_lattice(&self, m: &BigInt) -> bool {
        let d = self.dim();
        (0..d).all(|i| {
            let mut e = vec![BigInt::zero(); d];
            e[i] = m.clone();
            self.contains(&e).expect("dimension matches")
        })
    }

    /// Image under the coordinate permutation `x -> y` with
    /// `y[perm[i]] = x[i]`.
    pub fn permute_coordinates(&self, perm: &[usize]) -> Result<Lattice> {
        check_dim(self.dim(), perm.len())?;
        let rows = self.basis.row_vecs().into_iter().map(|r| permute(&r, perm));
        Lattice::from_generators(rows, self.dim())
    }

    /// `L x Z^extra`.
    pub fn extend_by_full(&self, extra: usize) -> Lattice {
        let d = self.dim() + extra;
        let mut rows: Vec<Vec<BigInt>> = self
            .basis
            .row_vecs()
            .into_iter()
            .map(|mut r| {
                r.resize(d, BigInt::zero());
                r
            })
            .collect();
        for i in self.dim()..d {
            let mut r = vec![BigInt::zero(); d];
            r[i] = BigInt::one();
            rows.push(r);
        }
        Lattice::from_hnf_rows(rows)
    }

    /// Smith form with column transform, used for dual enumeration.
    pub(crate) fn smith_transform(&self) -> (Vec<BigInt>, IntMatrix) {
        smith_with_column_transform(&self.basis)
    }
}

pub(crate) fn permute(v: &[BigInt], perm: &[usize]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); v.len()];
    for (i, x) in v.iter().enumerate() {
        out[perm[i]] = x.clone();
    }
    out
}

impl Ord for Lattice {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dim()
            .cmp(&other.dim())
            .then_with(|| self.index.cmp(&other.index))
            .then_with(|| self.basis.entries().cmp(other.basis.entries()))
    }
}

impl PartialOrd for Lattice {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice{:?}", self.basis)
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(c) = self.as_cartesian() {
            let parts: Vec<String> = c
                .moduli
                .iter()
                .map(|a| {
                    if a.is_one() {
                        "Z".to_string()
                    } else {
                        format!("{a}Z")
                    }
                })
                .collect();
            f.write_str(&parts.join(" x "))
        } else {
            write!(f, "lattice{:?}", self.basis)
        }
    }
}
