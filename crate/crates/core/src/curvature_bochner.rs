//! Algebraic curvature operators on two-vectors and their contraction to
//! p-forms.
//!
//! The increasing pair basis `{e_i ^ e_j : i < j}` of the two-vector space is
//! declared orthonormal, every pair acts on the base space as the rotation
//! generator `(e_i ^ e_j) e_k = <e_i, e_k> e_j - <e_j, e_k> e_i`, and each
//! p-form gets a hat tensor pairing it against these generators. Contracting
//! a curvature operator against hat tensors (summing over increasing
//! p-tuples only) produces the curvature term acting on p-forms; with the
//! quadratic operator of a shape operator in the curvature slot this
//! reproduces the exterior extension `T = (tr A) A^[p] - A^[p] A^[p]`
//! entrywise, which pins the normalization.
//!
//! Sign convention: the curvature operator of the unit sphere is the
//! identity on two-vectors.

use nalgebra::{DMatrix, DVector};

use crate::exterior_basis::{binomial, enumerate_basis, MultiIndex, MAX_DIMENSION};
use crate::exterior_operators::{
    wedge_sign, ExteriorOperator, SymmetricOperator, SYMMETRY_TOL,
};
use crate::{Error, Result};

/// Orthonormality tolerance for tangent frames.
pub const FRAME_TOL: f64 = 1e-10;

/// All pairs (i, j) with 1 <= i < j <= n, lexicographic.
pub fn pair_basis(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(binomial(n, 2));
    for i in 1..=n {
        for j in (i + 1)..=n {
            out.push((i, j));
        }
    }
    out
}

/// Position of the pair (i, j), i < j, within `pair_basis(n)`.
pub fn pair_position(i: usize, j: usize, n: usize) -> usize {
    debug_assert!(1 <= i && i < j && j <= n);
    (i - 1) * n - (i - 1) * i / 2 + (j - i - 1)
}

/// Dense symmetric operator on the two-vector space, in the orthonormal
/// increasing pair basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoVectorOperator {
    n: usize,
    entries: DMatrix<f64>,
}

impl TwoVectorOperator {
    pub fn new(n: usize, entries: DMatrix<f64>) -> Result<Self> {
        if n < 2 || n > MAX_DIMENSION {
            return Err(Error::DimensionOutOfRange {
                n,
                min: 2,
                max: MAX_DIMENSION,
            });
        }
        let dim = binomial(n, 2);
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: entries.nrows(),
            });
        }
        let scale = 1.0 + entries.amax();
        let mut deviation: f64 = 0.0;
        for a in 0..dim {
            for b in (a + 1)..dim {
                deviation = deviation.max((entries[(a, b)] - entries[(b, a)]).abs());
            }
        }
        if deviation > SYMMETRY_TOL * scale {
            return Err(Error::NotSymmetric {
                deviation,
                tol: SYMMETRY_TOL * scale,
            });
        }
        Ok(TwoVectorOperator { n, entries })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let dim = binomial(n, 2);
        TwoVectorOperator::new(n, DMatrix::identity(dim, dim))
    }

    pub fn zero(n: usize) -> Result<Self> {
        let dim = binomial(n, 2);
        TwoVectorOperator::new(n, DMatrix::zeros(dim, dim))
    }

    pub fn base_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// Sorted eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.entries.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev
    }

    /// Shift by a multiple of the identity.
    pub fn shifted(&self, t: f64) -> TwoVectorOperator {
        let dim = self.dim();
        TwoVectorOperator {
            n: self.n,
            entries: &self.entries + DMatrix::identity(dim, dim) * t,
        }
    }
}

/// The hat tensor of a p-form: for each increasing p-tuple b the column
/// holds the pair-basis components of the two-vector paired against the form
/// through the rotation action, `component((i,j), b) = ((e_i ^ e_j) w)(e_b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HatTensor {
    n: usize,
    p: usize,
    /// rows: increasing pairs; columns: increasing p-tuples
    components: DMatrix<f64>,
}

impl HatTensor {
    pub fn components(&self) -> &DMatrix<f64> {
        &self.components
    }

    pub fn component(&self, i: usize, j: usize, b: usize) -> f64 {
        self.components[(pair_position(i, j, self.n), b)]
    }
}

/// The rotation generator of the pair (i, j) as a skew matrix on the base
/// space: `e_i -> e_j`, `e_j -> -e_i`, everything else to zero.
pub fn wedge_endomorphism(i: usize, j: usize, n: usize) -> Result<DMatrix<f64>> {
    if i < 1 || i >= j || j > n {
        return Err(Error::invalid(
            "pair",
            format!("need 1 <= i < j <= n, got ({i}, {j}) with n = {n}"),
        ));
    }
    let mut l = DMatrix::zeros(n, n);
    l[(j - 1, i - 1)] = 1.0;
    l[(i - 1, j - 1)] = -1.0;
    Ok(l)
}

/// Evaluate a p-form (coefficients over the increasing-tuple basis) on an
/// arbitrary index tuple.
fn eval_on_tuple(basis: &[MultiIndex], omega: &DVector<f64>, tuple: &[usize]) -> f64 {
    let mut sorted: Vec<usize> = tuple.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return 0.0;
    }
    match basis.binary_search_by(|mi| mi.elements().cmp(sorted.as_slice())) {
        Ok(idx) => wedge_sign(basis[idx].elements(), tuple) * omega[idx],
        Err(_) => 0.0,
    }
}

/// The derivative of a p-form along a skew endomorphism L:
/// `(L w)(X_1, ..., X_p) = -sum_i w(X_1, ..., L X_i, ..., X_p)`,
/// returned in the increasing-tuple basis.
pub fn form_derivation(
    l: &DMatrix<f64>,
    omega: &DVector<f64>,
    n: usize,
    p: usize,
) -> Result<DVector<f64>> {
    let basis = enumerate_basis(n, p)?;
    if l.nrows() != n || l.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: l.nrows(),
        });
    }
    if omega.len() != basis.len() {
        return Err(Error::DimensionMismatch {
            expected: basis.len(),
            found: omega.len(),
        });
    }
    let mut out = DVector::zeros(basis.len());
    let mut tuple = vec![0usize; p];
    for (bidx, b) in basis.iter().enumerate() {
        let elems = b.elements();
        let mut acc = 0.0;
        for m in 0..p {
            for k in 1..=n {
                let coeff = l[(k - 1, elems[m] - 1)];
                if coeff == 0.0 {
                    continue;
                }
                tuple.copy_from_slice(elems);
                tuple[m] = k;
                acc -= coeff * eval_on_tuple(&basis, omega, &tuple);
            }
        }
        out[bidx] = acc;
    }
    Ok(out)
}

/// Hat tensor of a p-form given by coefficients over the increasing-tuple
/// basis.
pub fn hat(omega: &DVector<f64>, n: usize, p: usize) -> Result<HatTensor> {
    let basis = enumerate_basis(n, p)?;
    if omega.len() != basis.len() {
        return Err(Error::DimensionMismatch {
            expected: basis.len(),
            found: omega.len(),
        });
    }
    let pairs = pair_basis(n);
    let mut components = DMatrix::zeros(pairs.len(), basis.len());
    for (row, &(i, j)) in pairs.iter().enumerate() {
        let l = wedge_endomorphism(i, j, n)?;
        // (L w)(e_b) is exactly the b-th coefficient of the derivative
        let derived = form_derivation(&l, omega, n, p)?;
        components.row_mut(row).copy_from(&derived.transpose());
    }
    Ok(HatTensor { n, p, components })
}

/// Hat tensors of all lexicographic basis p-forms at once.
///
/// `result[b]` has the hat component of the b-th basis form at row
/// (pair position), column (tuple position).
fn hat_basis(n: usize, p: usize) -> Result<Vec<DMatrix<f64>>> {
    let basis = enumerate_basis(n, p)?;
    let n_pairs = binomial(n, 2);
    let dim = basis.len();
    let mut hats = vec![DMatrix::zeros(n_pairs, dim); dim];
    let mut target = vec![0usize; p];
    for (cidx, c) in basis.iter().enumerate() {
        let elems = c.elements();
        for m in 0..p {
            let v = elems[m];
            for w in 1..=n {
                if w == v || c.contains(w) {
                    continue;
                }
                let mut inversions = 0usize;
                for (jj, &e) in elems.iter().enumerate() {
                    if jj == m {
                        continue;
                    }
                    if (jj < m && e > w) || (jj > m && e < w) {
                        inversions += 1;
                    }
                }
                let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
                target.clear();
                target.extend(
                    elems
                        .iter()
                        .enumerate()
                        .filter(|(jj, _)| *jj != m)
                        .map(|(_, &e)| e),
                );
                target.push(w);
                target.sort_unstable();
                let bidx = basis
                    .binary_search_by(|mi| mi.elements().cmp(target.as_slice()))
                    .expect("replacing one index keeps a valid basis element");
                // (L_{i,j} Theta_b)(e_c) with (i,j) the sorted pair {v,w}:
                // the leading minus of the derivation and the skew action
                // combine into -sign for i = v and +sign for j = v.
                if v < w {
                    hats[bidx][(pair_position(v, w, n), cidx)] -= sign;
                } else {
                    hats[bidx][(pair_position(w, v, n), cidx)] += sign;
                }
            }
        }
    }
    Ok(hats)
}

/// Contract a curvature operator on two-vectors against hat tensors to get
/// the curvature term on p-forms:
/// `<B w, phi> = sum over increasing tuples b of <R(hat w(e_b)), hat phi(e_b)>`.
pub fn bochner_contract(r: &TwoVectorOperator, p: usize) -> Result<ExteriorOperator> {
    let n = r.base_dim();
    if p < 1 || p > n - 1 {
        return Err(Error::DegreeOutOfRange { p, n });
    }
    let hats = hat_basis(n, p)?;
    let dim = hats.len();
    let mut out = DMatrix::zeros(dim, dim);
    let contracted: Vec<DMatrix<f64>> = hats.iter().map(|h| r.matrix() * h).collect();
    for a in 0..dim {
        for b in a..dim {
            let val = hats[a].dot(&contracted[b]);
            out[(a, b)] = val;
            out[(b, a)] = val;
        }
    }
    ExteriorOperator::from_parts(n, p, out)
}

/// The quadratic curvature operator of a shape operator A on two-vectors:
/// `<R_A (e_i ^ e_j), e_k ^ e_l> = A_ik A_jl - A_il A_jk`.
///
/// For diagonal A this is diagonal over pairs with entry k_i k_j, so the
/// identity shape operator maps to the identity on two-vectors (the unit
/// sphere convention).
pub fn extrinsic_operator(a: &SymmetricOperator) -> TwoVectorOperator {
    let n = a.dim();
    let pairs = pair_basis(n);
    let dim = pairs.len();
    let m = a.matrix();
    let mut entries = DMatrix::zeros(dim, dim);
    for (row, &(k, l)) in pairs.iter().enumerate() {
        for (col, &(i, j)) in pairs.iter().enumerate() {
            entries[(row, col)] = m[(i - 1, k - 1)] * m[(j - 1, l - 1)]
                - m[(i - 1, l - 1)] * m[(j - 1, k - 1)];
        }
    }
    TwoVectorOperator { n, entries }
}

fn check_frame(frame: &[DVector<f64>], ambient_dim: usize) -> Result<()> {
    let mut deviation: f64 = 0.0;
    for (i, fi) in frame.iter().enumerate() {
        if fi.len() != ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: ambient_dim,
                found: fi.len(),
            });
        }
        for (j, fj) in frame.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            deviation = deviation.max((fi.dot(fj) - target).abs());
        }
    }
    if deviation > FRAME_TOL {
        return Err(Error::FrameNotOrthonormal { deviation });
    }
    Ok(())
}

/// Compress an ambient curvature operator to the span of tangent wedges.
///
/// The frame gives n orthonormal tangent vectors inside the ambient space;
/// mixed normal-tangent wedges are discarded by the projection.
pub fn compress_ambient(
    ambient: &TwoVectorOperator,
    frame: &[DVector<f64>],
) -> Result<TwoVectorOperator> {
    let big = ambient.base_dim();
    let n = frame.len();
    if n < 2 || n > big {
        return Err(Error::DimensionOutOfRange {
            n,
            min: 2,
            max: big,
        });
    }
    check_frame(frame, big)?;
    let big_pairs = pair_basis(big);
    let small_pairs = pair_basis(n);
    // tangent wedges in the ambient pair basis
    let mut proj = DMatrix::zeros(big_pairs.len(), small_pairs.len());
    for (col, &(i, j)) in small_pairs.iter().enumerate() {
        let fi = &frame[i - 1];
        let fj = &frame[j - 1];
        for (row, &(k, l)) in big_pairs.iter().enumerate() {
            proj[(row, col)] = fi[k - 1] * fj[l - 1] - fi[l - 1] * fj[k - 1];
        }
    }
    let compressed = proj.transpose() * ambient.matrix() * &proj;
    // symmetrize away the last-bit asymmetry of the triple product
    let compressed = (&compressed + compressed.transpose()) * 0.5;
    TwoVectorOperator::new(n, compressed)
}

/// Average of the m smallest eigenvalues.
pub fn kyfan_average(r: &TwoVectorOperator, m: usize) -> Result<f64> {
    if m < 1 || m > r.dim() {
        return Err(Error::invalid(
            "m",
            format!("need 1 <= m <= {}, got {m}", r.dim()),
        ));
    }
    let ev = r.eigenvalues();
    Ok(ev[..m].iter().sum::<f64>() / m as f64)
}

/// Split the curvature term on p-forms into its ambient restriction and the
/// shape-operator contribution: returns `(B_res, B_ext, B)` with
/// `B = B_res + B_ext` entrywise.
pub fn gauss_split(
    ambient: &TwoVectorOperator,
    frame: &[DVector<f64>],
    shape: &SymmetricOperator,
    p: usize,
) -> Result<(ExteriorOperator, ExteriorOperator, ExteriorOperator)> {
    if shape.dim() != frame.len() {
        return Err(Error::DimensionMismatch {
            expected: frame.len(),
            found: shape.dim(),
        });
    }
    let restricted = compress_ambient(ambient, frame)?;
    let b_res = bochner_contract(&restricted, p)?;
    let b_ext = bochner_contract(&extrinsic_operator(shape), p)?;
    let total = b_res.add(&b_ext)?;
    Ok((b_res, b_ext, total))
}

/// Ambient curvature data: either the full sorted eigenvalue list of the
/// ambient curvature operator, or a scalar lower bound c on the average of
/// its smallest n - p eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbientModel {
    hypersurface_dim: usize,
    p: usize,
    data: AmbientData,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AmbientData {
    Eigenvalues(Vec<f64>),
    Bound(f64),
}

impl AmbientModel {
    pub fn from_bound(hypersurface_dim: usize, p: usize, c: f64) -> Result<Self> {
        Self::validate_dims(hypersurface_dim, p)?;
        if !c.is_finite() {
            return Err(Error::invalid("c", "non-finite bound"));
        }
        Ok(AmbientModel {
            hypersurface_dim,
            p,
            data: AmbientData::Bound(c),
        })
    }

    pub fn from_eigenvalues(
        hypersurface_dim: usize,
        p: usize,
        mut values: Vec<f64>,
    ) -> Result<Self> {
        Self::validate_dims(hypersurface_dim, p)?;
        let expected = binomial(hypersurface_dim + 1, 2);
        if values.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("eigenvalues", "non-finite eigenvalue"));
        }
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(AmbientModel {
            hypersurface_dim,
            p,
            data: AmbientData::Eigenvalues(values),
        })
    }

    fn validate_dims(n: usize, p: usize) -> Result<()> {
        if n < 3 || n + 1 > MAX_DIMENSION {
            return Err(Error::DimensionOutOfRange {
                n,
                min: 3,
                max: MAX_DIMENSION - 1,
            });
        }
        if p < 1 || p > n / 2 {
            return Err(Error::DegreeOutOfRange { p, n });
        }
        Ok(())
    }

    pub fn hypersurface_dim(&self) -> usize {
        self.hypersurface_dim
    }

    pub fn degree(&self) -> usize {
        self.p
    }

    pub fn data(&self) -> &AmbientData {
        &self.data
    }

    /// The lower bound c on the average of the smallest n - p eigenvalues:
    /// derived from the list when present, the stated scalar otherwise.
    pub fn lower_bound(&self) -> f64 {
        match &self.data {
            AmbientData::Bound(c) => *c,
            AmbientData::Eigenvalues(values) => {
                let m = self.hypersurface_dim - self.p;
                values[..m].iter().sum::<f64>() / m as f64
            }
        }
    }
}
