//! Graded pieces of R = ℤ[x₁,…,x_r] and its subrings R_n = ℤ[nx₁,…,nx_r],
//! plus vector-valued polynomials over a vertex set.
//!
//! The internal grading is polynomial degree; user-facing output doubles it
//! to cohomological degree. R_n is never given its own variables: its
//! degree-d slice is n^d times the monomial lattice in ambient R-coordinates.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::intlinalg::IntMatrix;
use crate::{Error, Result};

/// A monomial in r variables, stored by exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

/// A homogeneous integer polynomial: sparse map monomial → coefficient.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly(pub BTreeMap<Monomial, BigInt>);

impl Poly {
    pub fn from_terms(terms: Vec<(Monomial, BigInt)>) -> Self {
        let mut map = BTreeMap::new();
        for (m, c) in terms {
            if c.is_zero() {
                continue;
            }
            let e: &mut BigInt = map.entry(m).or_insert_with(BigInt::zero);
            *e += c;
            // entry may have cancelled
        }
        map.retain(|_, c| !c.is_zero());
        Poly(map)
    }

    /// Degree of a homogeneous polynomial; errors on mixed degrees.
    pub fn homogeneous_degree(&self) -> Result<u32> {
        let mut deg = None;
        for m in self.0.keys() {
            match deg {
                None => deg = Some(m.degree()),
                Some(d) if d != m.degree() => return Err(Error::NonHomogeneous),
                _ => {}
            }
        }
        Ok(deg.unwrap_or(0))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

/// The canonical ordered monomial basis of the degree-d slice of R.
/// Order is descending lexicographic on exponent vectors, which within a
/// fixed degree is graded-lex.
#[derive(Clone, Debug)]
pub struct SliceBasis {
    pub rank: usize,
    pub degree: u32,
    monomials: Vec<Monomial>,
    index: BTreeMap<Monomial, usize>,
}

impl SliceBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

fn enumerate_exponents(r: usize, d: u32, out: &mut Vec<Vec<u32>>, prefix: &mut Vec<u32>) {
    if r == 1 {
        prefix.push(d);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for e in (0..=d).rev() {
        prefix.push(e);
        enumerate_exponents(r - 1, d - e, out, prefix);
        prefix.pop();
    }
}

/// All degree-d monomials in r variables, in the canonical order.
pub fn monomial_basis(r: usize, d: u32) -> SliceBasis {
    assert!(r >= 1, "rank must be positive");
    let mut exps = Vec::new();
    enumerate_exponents(r, d, &mut exps, &mut Vec::new());
    let monomials: Vec<Monomial> = exps.into_iter().map(Monomial).collect();
    let index = monomials
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();
    SliceBasis {
        rank: r,
        degree: d,
        monomials,
        index,
    }
}

/// binomial(n, k) as an exact integer count.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// n^d: the degree-d slice of R_n is n^d·ℤ^{|basis|} in monomial coordinates.
pub fn rn_scale(n: u64, d: u32) -> BigInt {
    BigInt::from(n).pow(d)
}

/// Matrix of "multiply by g" from degree-d coordinates to degree-(d+k)
/// coordinates, where k = deg g.
pub fn mult_matrix(g: &Poly, r: usize, d: u32) -> Result<IntMatrix> {
    let k = g.homogeneous_degree()?;
    let src = monomial_basis(r, d);
    let dst = monomial_basis(r, d + k);
    let mut out = IntMatrix::zero(dst.len(), src.len());
    for (col, nu) in src.monomials().iter().enumerate() {
        for (mu, c) in &g.0 {
            let row = dst
                .index_of(&mu.mul(nu))
                .expect("product monomial is in the target slice");
            let v = out.get(row, col) + c;
            out.set(row, col, v);
        }
    }
    Ok(out)
}

/// An element of R^V: one homogeneous polynomial per vertex, all of the
/// same degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyVector {
    pub rank: usize,
    pub degree: u32,
    pub values: Vec<Poly>,
}

impl PolyVector {
    pub fn new(rank: usize, degree: u32, values: Vec<Poly>) -> Result<Self> {
        for p in &values {
            if !p.is_zero() && p.homogeneous_degree()? != degree {
                return Err(Error::DegreeMismatch(format!(
                    "vertex polynomial of degree {} in a degree-{} vector",
                    p.homogeneous_degree()?,
                    degree
                )));
            }
        }
        Ok(PolyVector {
            rank,
            degree,
            values,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.values.len()
    }

    /// Multiply every vertex polynomial by scale·μ.
    pub fn scaled_monomial_mul(&self, scale: &BigInt, mu: &Monomial) -> PolyVector {
        let values = self
            .values
            .iter()
            .map(|p| {
                Poly::from_terms(
                    p.0.iter()
                        .map(|(m, c)| (m.mul(mu), c * scale))
                        .collect(),
                )
            })
            .collect();
        PolyVector {
            rank: self.rank,
            degree: self.degree + mu.degree(),
            values,
        }
    }
}

/// Pack a homogeneous PolyVector into ℤ^{|V|·|basis|}, vertex-major.
pub fn polyvec_pack(f: &PolyVector, basis: &SliceBasis) -> Result<Vec<BigInt>> {
    if f.degree != basis.degree {
        return Err(Error::DegreeMismatch(format!(
            "vector degree {} vs slice degree {}",
            f.degree, basis.degree
        )));
    }
    let s = basis.len();
    let mut out = vec![BigInt::zero(); f.values.len() * s];
    for (v, p) in f.values.iter().enumerate() {
        for (m, c) in &p.0 {
            let idx = basis.index_of(m).ok_or_else(|| {
                Error::DegreeMismatch(format!("monomial {} not in slice basis", m))
            })?;
            out[v * s + idx] = c.clone();
        }
    }
    Ok(out)
}

/// Inverse of `polyvec_pack`.
pub fn polyvec_unpack(
    coords: &[BigInt],
    vertex_count: usize,
    basis: &SliceBasis,
) -> Result<PolyVector> {
    let s = basis.len();
    if coords.len() != vertex_count * s {
        return Err(Error::DimensionMismatch(coords.len(), vertex_count * s));
    }
    let values = (0..vertex_count)
        .map(|v| {
            Poly::from_terms(
                basis
                    .monomials()
                    .iter()
                    .enumerate()
                    .map(|(i, m)| (m.clone(), coords[v * s + i].clone()))
                    .collect(),
            )
        })
        .collect();
    PolyVector::new(basis.rank, basis.degree, values)
}
