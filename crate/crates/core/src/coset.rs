//! Cosets `v + L` with canonical representatives.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{check_dim, Result};
use crate::lattice::{lattice_intersection, permute, stacked_rows, Lattice};
use crate::matrix::hnf_rows;

/// A translate `rep + lattice`. The representative is the canonical one, so
/// structural equality is set equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coset {
    lattice: Lattice,
    rep: Vec<BigInt>,
}

pub fn make_coset(lat: &Lattice, v: &[BigInt]) -> Result<Coset> {
    Ok(Coset {
        rep: lat.reduce(v)?,
        lattice: lat.clone(),
    })
}

pub fn coset_contains(c: &Coset, x: &[BigInt]) -> Result<bool> {
    check_dim(c.dim(), x.len())?;
    let diff: Vec<BigInt> = x.iter().zip(&c.rep).map(|(a, b)| a - b).collect();
    c.lattice.contains(&diff)
}

/// `c1 ∩ c2`, or `None` when the two cosets are disjoint.
pub fn coset_intersection(c1: &Coset, c2: &Coset) -> Result<Option<Coset>> {
    check_dim(c1.dim(), c2.dim())?;
    let d = c1.dim();
    // Solve r2 - r1 = a B1 + b B2. Reducing (r2 - r1 | 0) by the top rows of
    // the stacked Hermite form clears the first block iff r2 - r1 lies in
    // L1 + L2, and leaves (0 | -a B1).
    let h = hnf_rows(stacked_rows(&c1.lattice, &c2.lattice), 2 * d)
        .expect("stacked basis is nonsingular");
    let mut w: Vec<BigInt> = c2
        .rep
        .iter()
        .zip(&c1.rep)
        .map(|(a, b)| a - b)
        .chain(std::iter::repeat_n(BigInt::zero(), d))
        .collect();
    for i in 0..d {
        let (q, r) = num_integer::Integer::div_rem(&w[i], &h[i][i]);
        if !r.is_zero() {
            return Ok(None);
        }
        if !q.is_zero() {
            for (x, b) in w.iter_mut().zip(&h[i]).skip(i) {
                *x -= &q * b;
            }
        }
    }
    let point: Vec<BigInt> = c1.rep.iter().zip(&w[d..]).map(|(r, u)| r - u).collect();
    let lat = lattice_intersection(&c1.lattice, &c2.lattice)?;
    Ok(Some(make_coset(&lat, &point)?))
}

/// Whether two cosets are translates of each other (same lattice).
pub fn is_translate_pair(c1: &Coset, c2: &Coset) -> Result<bool> {
    check_dim(c1.dim(), c2.dim())?;
    Ok(c1.lattice == c2.lattice)
}

impl Coset {
    pub fn new(lattice: Lattice, v: &[BigInt]) -> Result<Self> {
        make_coset(&lattice, v)
    }

    /// `Z^d` as a single coset.
    pub fn full(dim: usize) -> Self {
        Coset {
            lattice: Lattice::full(dim),
            rep: vec![BigInt::zero(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn rep(&self) -> &[BigInt] {
        &self.rep
    }

    pub fn index(&self) -> &BigInt {
        self.lattice.index()
    }

    pub fn is_cartesian(&self) -> bool {
        self.lattice.is_cartesian()
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        coset_contains(self, x).expect("point dimension must match coset")
    }

    pub fn translate(&self, t: &[BigInt]) -> Result<Coset> {
        check_dim(self.dim(), t.len())?;
        let v: Vec<BigInt> = self.rep.iter().zip(t).map(|(a, b)| a + b).collect();
        make_coset(&self.lattice, &v)
    }

    pub fn permute_coordinates(&self, perm: &[usize]) -> Result<Coset> {
        let lat = self.lattice.permute_coordinates(perm)?;
        make_coset(&lat, &permute(&self.rep, perm))
    }

    /// `C x Z^extra`.
    pub fn extend_by_full(&self, extra: usize) -> Coset {
        let mut rep = self.rep.clone();
        rep.resize(self.dim() + extra, BigInt::zero());
        Coset {
            lattice: self.lattice.extend_by_full(extra),
            rep,
        }
    }
}

impl fmt::Debug for Coset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Coset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rep: Vec<String> = self.rep.iter().map(ToString::to_string).collect();
        write!(f, "({}) + {}", rep.join(","), self.lattice)
    }
}
