//! Exact integer matrix and lattice algorithms.
//!
//! Everything degreewise in the library reduces to these primitives:
//! Hermite normal form (the canonical lattice representative), Smith normal
//! form (torsion detection and quotient structure), kernels, intersections
//! and preimages. No floating point anywhere; entries are arbitrary
//! precision integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: Vec<Vec<BigInt>>,
    cols: usize,
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "ragged row");
        }
        IntMatrix { rows, cols }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        IntMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
            cols,
        )
    }

    pub fn zero(nrows: usize, ncols: usize) -> Self {
        IntMatrix {
            rows: vec![vec![BigInt::zero(); ncols]; nrows],
            cols: ncols,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.rows[i][i] = BigInt::one();
        }
        m
    }

    /// n·I, the degree slice of a scaled copy of ℤ^n.
    pub fn scaled_identity(n: usize, scale: &BigInt) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.rows[i][i] = scale.clone();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.rows[i]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.rows.iter().map(|r| r.as_slice())
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.rows[i][j] = v;
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.nrows());
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                t.rows[j][i] = v.clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.nrows(), "matrix product shape");
        let mut out = IntMatrix::zero(self.nrows(), other.cols);
        for i in 0..self.nrows() {
            for k in 0..self.cols {
                let a = &self.rows[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.rows[k][j];
                    if !b.is_zero() {
                        out.rows[i][j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// self · v for a column vector v.
    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        self.rows
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.nrows(), other.nrows(), "hstack row count");
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.iter().chain(b.iter()).cloned().collect())
            .collect();
        IntMatrix::from_rows(rows, self.cols + other.cols)
    }
}

fn row_is_zero(r: &[BigInt]) -> bool {
    r.iter().all(|x| x.is_zero())
}

/// Canonical row Hermite normal form: same ℤ-row-span, zero rows removed,
/// pivots positive, entries above each pivot reduced into [0, pivot).
pub fn hnf(m: &IntMatrix) -> IntMatrix {
    let cols = m.ncols();
    let mut rows: Vec<Vec<BigInt>> = m.rows.clone();
    let mut pivot = 0usize;
    for col in 0..cols {
        if pivot >= rows.len() {
            break;
        }
        loop {
            // partial pivoting on the smallest nonzero entry of the column
            let mut best: Option<usize> = None;
            for i in pivot..rows.len() {
                if !rows[i][col].is_zero() {
                    best = match best {
                        None => Some(i),
                        Some(j) if rows[i][col].abs() < rows[j][col].abs() => Some(i),
                        some => some,
                    };
                }
            }
            let Some(b) = best else { break };
            rows.swap(pivot, b);
            if rows[pivot][col].is_negative() {
                for v in rows[pivot].iter_mut() {
                    *v = -std::mem::take(v);
                }
            }
            let prow = rows[pivot].clone();
            let mut cleared = true;
            for r in rows.iter_mut().skip(pivot + 1) {
                if !r[col].is_zero() {
                    let q = r[col].div_floor(&prow[col]);
                    if !q.is_zero() {
                        for (x, p) in r.iter_mut().zip(&prow) {
                            *x -= &q * p;
                        }
                    }
                    if !r[col].is_zero() {
                        cleared = false;
                    }
                }
            }
            if cleared {
                // reduce entries above the pivot into [0, pivot)
                for r in rows.iter_mut().take(pivot) {
                    let q = r[col].div_floor(&prow[col]);
                    if !q.is_zero() {
                        for (x, p) in r.iter_mut().zip(&prow) {
                            *x -= &q * p;
                        }
                    }
                }
                pivot += 1;
                break;
            }
        }
    }
    rows.truncate(pivot);
    debug_assert!(rows.iter().all(|r| !row_is_zero(r)));
    IntMatrix::from_rows(rows, cols)
}

/// Smith normal form data: left · m · right = diag(factors) (padded with
/// zeros), with unimodular transforms. `right_inv` is the inverse of
/// `right`, tracked alongside because quotient computations need it.
#[derive(Clone, Debug)]
pub struct Snf {
    pub factors: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub right_inv: IntMatrix,
}

pub fn snf(m: &IntMatrix) -> Snf {
    let nr = m.nrows();
    let nc = m.ncols();
    let mut a = m.rows.clone();
    let mut left = IntMatrix::identity(nr);
    let mut right = IntMatrix::identity(nc);
    let mut rinv = IntMatrix::identity(nc);

    let row_op = |a: &mut Vec<Vec<BigInt>>, left: &mut IntMatrix, i: usize, k: usize, q: &BigInt| {
        // row_i -= q * row_k
        let src = a[k].clone();
        for (x, s) in a[i].iter_mut().zip(&src) {
            *x -= q * s;
        }
        let src = left.rows[k].clone();
        for (x, s) in left.rows[i].iter_mut().zip(&src) {
            *x -= q * s;
        }
    };
    let col_op = |a: &mut Vec<Vec<BigInt>>,
                  right: &mut IntMatrix,
                  rinv: &mut IntMatrix,
                  j: usize,
                  k: usize,
                  q: &BigInt| {
        // col_j -= q * col_k
        for row in a.iter_mut() {
            let s = row[k].clone();
            row[j] -= q * s;
        }
        for row in right.rows.iter_mut() {
            let s = row[k].clone();
            row[j] -= q * s;
        }
        // inverse op on rinv: row_k += q * row_j
        let src = rinv.rows[j].clone();
        for (x, s) in rinv.rows[k].iter_mut().zip(&src) {
            *x += q * s;
        }
    };

    let mut t = 0usize;
    while t < nr.min(nc) {
        // locate minimal nonzero entry of the trailing submatrix
        let mut best: Option<(usize, usize)> = None;
        for i in t..nr {
            for j in t..nc {
                if !a[i][j].is_zero() {
                    best = match best {
                        None => Some((i, j)),
                        Some((bi, bj)) if a[i][j].abs() < a[bi][bj].abs() => Some((i, j)),
                        some => some,
                    };
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        if bi != t {
            a.swap(bi, t);
            left.rows.swap(bi, t);
        }
        if bj != t {
            for row in a.iter_mut() {
                row.swap(bj, t);
            }
            for row in right.rows.iter_mut() {
                row.swap(bj, t);
            }
            rinv.rows.swap(bj, t);
        }
        'reduce: loop {
            // clear column t with row operations
            loop {
                let mut dirty = false;
                for i in t + 1..nr {
                    if !a[i][t].is_zero() {
                        let q = a[i][t].div_floor(&a[t][t]);
                        row_op(&mut a, &mut left, i, t, &q);
                        if !a[i][t].is_zero() {
                            // remainder became the smaller entry: promote it
                            a.swap(i, t);
                            left.rows.swap(i, t);
                            dirty = true;
                        }
                    }
                }
                if !dirty {
                    break;
                }
            }
            // clear row t with column operations
            loop {
                let mut dirty = false;
                for j in t + 1..nc {
                    if !a[t][j].is_zero() {
                        let q = a[t][j].div_floor(&a[t][t]);
                        col_op(&mut a, &mut right, &mut rinv, j, t, &q);
                        if !a[t][j].is_zero() {
                            for row in a.iter_mut() {
                                row.swap(j, t);
                            }
                            for row in right.rows.iter_mut() {
                                row.swap(j, t);
                            }
                            rinv.rows.swap(j, t);
                            dirty = true;
                        }
                    }
                }
                if !dirty {
                    break;
                }
            }
            // column swaps during row clearing can repopulate column t
            if (t + 1..nr).any(|i| !a[i][t].is_zero()) {
                continue 'reduce;
            }
            // divisibility fix-up: pivot must divide the trailing block
            let pivot = a[t][t].clone();
            let mut fixed = true;
            'scan: for i in t + 1..nr {
                for j in t + 1..nc {
                    if !(&a[i][j] % &pivot).is_zero() {
                        // fold row i into row t and re-reduce
                        let minus_one = -BigInt::one();
                        row_op(&mut a, &mut left, t, i, &minus_one);
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if a[t][t].is_negative() {
            for v in a[t].iter_mut() {
                *v = -std::mem::take(v);
            }
            for v in left.rows[t].iter_mut() {
                *v = -std::mem::take(v);
            }
        }
        t += 1;
    }
    let factors = (0..t).map(|i| a[i][i].clone()).collect();
    Snf {
        factors,
        left,
        right,
        right_inv: rinv,
    }
}

/// A finitely generated subgroup of ℤ^N, stored as its canonical row-HNF
/// basis. Equality of lattices is equality of the struct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    ambient: usize,
    basis: IntMatrix,
}

impl Lattice {
    /// Lattice spanned by the rows of `gens` (dependent and zero rows allowed).
    pub fn from_generators(gens: &IntMatrix) -> Self {
        Lattice {
            ambient: gens.ncols(),
            basis: hnf(gens),
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Lattice {
            ambient,
            basis: IntMatrix::zero(0, ambient),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Lattice {
            ambient,
            basis: IntMatrix::identity(ambient),
        }
    }

    /// scale·ℤ^N as a lattice.
    pub fn scaled_full(ambient: usize, scale: &BigInt) -> Self {
        Lattice {
            ambient,
            basis: IntMatrix::scaled_identity(ambient, scale),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Coordinates of `v` in the HNF basis, if `v` lies in the lattice.
    pub fn coords(&self, v: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch(v.len(), self.ambient));
        }
        let mut residual: Vec<BigInt> = v.to_vec();
        let mut cs = Vec::with_capacity(self.rank());
        for row in self.basis.rows() {
            let j = row
                .iter()
                .position(|x| !x.is_zero())
                .expect("HNF basis has no zero rows");
            let p = &row[j];
            if !(&residual[j] % p).is_zero() {
                return Ok(None);
            }
            let c = &residual[j] / p;
            if !c.is_zero() {
                for (x, b) in residual.iter_mut().zip(row) {
                    *x -= &c * b;
                }
            }
            cs.push(c);
        }
        if residual.iter().all(|x| x.is_zero()) {
            Ok(Some(cs))
        } else {
            Ok(None)
        }
    }

    pub fn member(&self, v: &[BigInt]) -> Result<bool> {
        Ok(self.coords(v)?.is_some())
    }

    /// Canonical representative of v modulo the lattice: each pivot
    /// coordinate reduced into [0, pivot) by forward substitution.
    pub fn reduce_mod(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch(v.len(), self.ambient));
        }
        let mut out = v.to_vec();
        for row in self.basis.rows() {
            let j = row
                .iter()
                .position(|x| !x.is_zero())
                .expect("HNF basis has no zero rows");
            let q = out[j].div_floor(&row[j]);
            if !q.is_zero() {
                for (x, b) in out.iter_mut().zip(row) {
                    *x -= &q * b;
                }
            }
        }
        Ok(out)
    }

    pub fn contains(&self, other: &Lattice) -> Result<bool> {
        if other.ambient != self.ambient {
            return Err(Error::DimensionMismatch(other.ambient, self.ambient));
        }
        for row in other.basis.rows() {
            if !self.member(row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Saturated kernel {v ∈ ℤ^c : m·v = 0} of an r×c matrix.
pub fn kernel(m: &IntMatrix) -> Lattice {
    let r = m.nrows();
    let c = m.ncols();
    // HNF of [mᵀ | I]: rows whose first r entries vanish carry a kernel
    // basis in the identity block.
    let aug = m.transpose().hstack(&IntMatrix::identity(c));
    let h = hnf(&aug);
    let mut gens = Vec::new();
    for row in h.rows() {
        if row[..r].iter().all(|x| x.is_zero()) {
            gens.push(row[r..].to_vec());
        }
    }
    Lattice::from_generators(&IntMatrix::from_rows(gens, c))
}

/// Intersection of two lattices in the same ambient space, via the kernel
/// of the stacked basis matrix [Aᵀ | −Bᵀ].
pub fn intersect(a: &Lattice, b: &Lattice) -> Result<Lattice> {
    if a.ambient != b.ambient {
        return Err(Error::DimensionMismatch(a.ambient, b.ambient));
    }
    let ka = a.rank();
    if ka == 0 || b.rank() == 0 {
        return Ok(Lattice::zero(a.ambient));
    }
    let mut bt_neg = b.basis.transpose();
    for i in 0..bt_neg.nrows() {
        for j in 0..bt_neg.ncols() {
            let v = -bt_neg.get(i, j).clone();
            bt_neg.set(i, j, v);
        }
    }
    let stacked = a.basis.transpose().hstack(&bt_neg);
    let ker = kernel(&stacked);
    // map (x, y) back through x·A
    let mut gens = Vec::new();
    for row in ker.basis.rows() {
        let mut v = vec![BigInt::zero(); a.ambient];
        for (i, xi) in row[..ka].iter().enumerate() {
            if !xi.is_zero() {
                for (vj, aj) in v.iter_mut().zip(a.basis.row(i)) {
                    *vj += xi * aj;
                }
            }
        }
        gens.push(v);
    }
    Ok(Lattice::from_generators(&IntMatrix::from_rows(
        gens, a.ambient,
    )))
}

/// Preimage {v ∈ ℤ^M : map·v ∈ sub} of a lattice under an integer map,
/// via the kernel of [map | −basis(sub)ᵀ].
pub fn preimage(map: &IntMatrix, sub: &Lattice) -> Result<Lattice> {
    if map.nrows() != sub.ambient_dim() {
        return Err(Error::ShapeMismatch(format!(
            "map has {} rows but sublattice ambient dimension is {}",
            map.nrows(),
            sub.ambient_dim()
        )));
    }
    let m = map.ncols();
    let mut st_neg = sub.basis.transpose();
    for i in 0..st_neg.nrows() {
        for j in 0..st_neg.ncols() {
            let v = -st_neg.get(i, j).clone();
            st_neg.set(i, j, v);
        }
    }
    let aug = map.hstack(&st_neg);
    let ker = kernel(&aug);
    let gens: Vec<Vec<BigInt>> = ker
        .basis
        .rows()
        .map(|row| row[..m].to_vec())
        .collect();
    Ok(Lattice::from_generators(&IntMatrix::from_rows(gens, m)))
}

/// Quotient structure sup/sub: lifts in `sup` whose classes generate the
/// quotient, paired with invariant factors (0 marks a free summand,
/// factors of 1 are omitted).
pub fn quotient_with_lifts(
    sub: &Lattice,
    sup: &Lattice,
) -> Result<(Vec<Vec<BigInt>>, Vec<BigInt>)> {
    if sub.ambient_dim() != sup.ambient_dim() {
        return Err(Error::DimensionMismatch(
            sub.ambient_dim(),
            sup.ambient_dim(),
        ));
    }
    let s = sup.rank();
    // coordinates of sub in the sup basis; doubles as the containment check
    let mut coord_rows = Vec::with_capacity(sub.rank());
    for row in sub.basis.rows() {
        match sup.coords(row)? {
            Some(c) => coord_rows.push(c),
            None => {
                return Err(Error::Containment(
                    "sublattice basis vector is not contained in the superlattice".into(),
                ))
            }
        }
    }
    let c = IntMatrix::from_rows(coord_rows, s);
    let d = snf(&c);
    // sup/sub ≅ ℤ^s / rowspan(C); generator i is row i of R⁻¹ in sup coords
    let lift_mat = d.right_inv.mul(&sup.basis);
    let mut lifts = Vec::new();
    let mut factors = Vec::new();
    for i in 0..s {
        let f = if i < d.factors.len() {
            d.factors[i].clone()
        } else {
            BigInt::zero()
        };
        if f.is_one() {
            continue;
        }
        lifts.push(lift_mat.row(i).to_vec());
        factors.push(f);
    }
    Ok((lifts, factors))
}
