//! Extensions of a self-adjoint operator to exterior powers.
//!
//! For a self-adjoint A on an n-dimensional inner product space the induced
//! operator on the p-th exterior power acts by
//! `(A^[p] w)(v_1, ..., v_p) = sum_i w(v_1, ..., A v_i, ..., v_p)`, and the
//! associated quadratic combination `T = (tr A) A^[p] - A^[p] A^[p]` carries
//! the extrinsic curvature term of a hypersurface. Its eigenvalues are
//! `K_a * K_{star a}` over all p-multi-indices a, which this module provides
//! both in closed form and through a dense symmetric eigensolver so the two
//! routes can be checked against each other.

use nalgebra::DMatrix;

use crate::exterior_basis::{binomial, enumerate_basis, MultiIndex, MAX_DIMENSION};
use crate::{Error, Result};

/// Relative symmetry tolerance for operator entries.
pub const SYMMETRY_TOL: f64 = 1e-12;

fn check_symmetric(m: &DMatrix<f64>, tol: f64) -> Result<()> {
    let scale = 1.0 + m.amax();
    let mut deviation: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            deviation = deviation.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    if deviation > tol * scale {
        return Err(Error::NotSymmetric {
            deviation,
            tol: tol * scale,
        });
    }
    Ok(())
}

fn sorted_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

/// Sorted principal curvatures k_1 <= ... <= k_n of a shape operator at a
/// point, together with their trace nH.
#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalSpectrum {
    values: Vec<f64>,
}

impl PrincipalSpectrum {
    /// Sorts the given eigenvalues ascending. Rejects empty, oversized or
    /// non-finite input.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.len() > MAX_DIMENSION {
            return Err(Error::DimensionOutOfRange {
                n: values.len(),
                min: 1,
                max: MAX_DIMENSION,
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("values", "non-finite eigenvalue"));
        }
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(PrincipalSpectrum { values })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn trace(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Mean curvature H = trace / n.
    pub fn mean(&self) -> f64 {
        self.trace() / self.dim() as f64
    }

    /// Sum of the m smallest values.
    pub fn partial_sum(&self, m: usize) -> f64 {
        self.values[..m].iter().sum()
    }
}

/// Dense symmetric operator on the base space.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricOperator {
    entries: DMatrix<f64>,
}

impl SymmetricOperator {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        let n = entries.nrows();
        if entries.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: entries.ncols(),
            });
        }
        if n < 1 || n > MAX_DIMENSION {
            return Err(Error::DimensionOutOfRange {
                n,
                min: 1,
                max: MAX_DIMENSION,
            });
        }
        check_symmetric(&entries, SYMMETRY_TOL)?;
        Ok(SymmetricOperator { entries })
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        SymmetricOperator::new(DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(
            diag,
        )))
    }

    pub fn identity(n: usize) -> Result<Self> {
        SymmetricOperator::new(DMatrix::identity(n, n))
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace()
    }

    /// Sorted eigenvalues via the dense symmetric solver.
    pub fn spectrum(&self) -> Result<PrincipalSpectrum> {
        PrincipalSpectrum::new(sorted_eigenvalues(&self.entries))
    }
}

/// Dense symmetric operator on the binom(n, p)-dimensional p-th exterior
/// power, in the lexicographic wedge basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ExteriorOperator {
    n: usize,
    p: usize,
    entries: DMatrix<f64>,
    basis: Vec<MultiIndex>,
}

impl ExteriorOperator {
    pub(crate) fn from_parts(n: usize, p: usize, entries: DMatrix<f64>) -> Result<Self> {
        let basis = enumerate_basis(n, p)?;
        if entries.nrows() != basis.len() || entries.ncols() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                found: entries.nrows(),
            });
        }
        check_symmetric(&entries, SYMMETRY_TOL)?;
        Ok(ExteriorOperator {
            n,
            p,
            entries,
            basis,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn basis(&self) -> &[MultiIndex] {
        &self.basis
    }

    /// Entrywise sum with another operator of the same shape.
    pub fn add(&self, other: &ExteriorOperator) -> Result<ExteriorOperator> {
        if self.n != other.n || self.p != other.p {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        ExteriorOperator::from_parts(self.n, self.p, &self.entries + &other.entries)
    }
}

/// Sign of the basis covector of `target` evaluated on the index tuple
/// `(e_{t_1}, ..., e_{t_p})`: zero unless the tuple is a permutation of
/// `target`, otherwise the permutation parity.
pub(crate) fn wedge_sign(target: &[usize], tuple: &[usize]) -> f64 {
    let p = target.len();
    debug_assert_eq!(tuple.len(), p);
    let mut perm = [usize::MAX; MAX_DIMENSION];
    let mut seen = [false; MAX_DIMENSION];
    for (slot, t) in tuple.iter().enumerate() {
        match target.binary_search(t) {
            Ok(pos) => {
                if seen[pos] {
                    return 0.0;
                }
                seen[pos] = true;
                perm[slot] = pos;
            }
            Err(_) => return 0.0,
        }
    }
    let mut sign = 1.0;
    for i in 0..p {
        for j in (i + 1)..p {
            if perm[i] > perm[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// The induced operator A^[p] on the p-th exterior power, in the
/// lexicographic wedge basis.
///
/// If A is diagonal with entries k the result is diagonal with entry K_a at
/// the position of each multi-index a.
pub fn extend(a: &SymmetricOperator, p: usize) -> Result<ExteriorOperator> {
    let n = a.dim();
    let basis = enumerate_basis(n, p)?;
    let dim = basis.len();
    let mut m = DMatrix::zeros(dim, dim);
    let mat = a.matrix();
    let mut target = vec![0usize; p];
    for (row, idx) in basis.iter().enumerate() {
        let elems = idx.elements();
        for i in 0..p {
            for k in 1..=n {
                if k != elems[i] && idx.contains(k) {
                    continue; // repeated index, wedge vanishes
                }
                let coeff = mat[(k - 1, elems[i] - 1)];
                if coeff == 0.0 {
                    continue;
                }
                // parity of moving k into place among the remaining entries
                let mut inversions = 0usize;
                for (j, &e) in elems.iter().enumerate() {
                    if j == i {
                        continue;
                    }
                    if (j < i && e > k) || (j > i && e < k) {
                        inversions += 1;
                    }
                }
                let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
                target.clear();
                target.extend(elems.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, &e)| e));
                target.push(k);
                target.sort_unstable();
                let col = basis
                    .binary_search_by(|mi| mi.elements().cmp(target.as_slice()))
                    .expect("modified index set is a valid basis element");
                m[(row, col)] += coeff * sign;
            }
        }
    }
    ExteriorOperator::from_parts(n, p, m)
}

/// T = (tr A) A^[p] - A^[p] A^[p], the extrinsic curvature term of a shape
/// operator A on p-forms. Eigenvalues are K_a * K_{star a}.
pub fn weitzenbock_extension(a: &SymmetricOperator, p: usize) -> Result<ExteriorOperator> {
    let ap = extend(a, p)?;
    let m = ap.matrix() * a.trace() - ap.matrix() * ap.matrix();
    ExteriorOperator::from_parts(a.dim(), p, m)
}

/// The closed-form spectrum of the extension T for a shape operator with the
/// given eigenvalues: all binom(n, p) pairs (a, K_a * K_{star a}) in
/// lexicographic basis order.
pub fn closed_form_spectrum(
    k: &PrincipalSpectrum,
    p: usize,
) -> Result<Vec<(MultiIndex, f64)>> {
    let n = k.dim();
    let basis = enumerate_basis(n, p)?;
    let trace = k.trace();
    let mut out = Vec::with_capacity(binomial(n, p));
    for a in basis {
        let ka = crate::exterior_basis::index_sum(&a, k)?;
        out.push((a, ka * (trace - ka)));
    }
    Ok(out)
}

/// All eigenvalues of the operator, ascending, via the dense symmetric
/// eigensolver.
pub fn dense_spectrum(t: &ExteriorOperator) -> Result<Vec<f64>> {
    check_symmetric(t.matrix(), SYMMETRY_TOL)?;
    Ok(sorted_eigenvalues(t.matrix()))
}
