//! Multi-index combinatorics for the wedge bases of exterior powers.
//!
//! A `MultiIndex` is a strictly increasing p-element subset of {1, ..., n}.
//! The basis of the p-th exterior power is indexed by these subsets in
//! lexicographic order, and every spectral formula in the crate pairs
//! eigenvalues with basis covectors through this ordering.

use crate::exterior_operators::PrincipalSpectrum;
use crate::{Error, Result};

/// Hard cap on the ambient dimension so that every binom(n, p) space stays
/// dense-solvable.
pub const MAX_DIMENSION: usize = 16;

/// binom(n, k) with the usual conventions; exact for n <= MAX_DIMENSION.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: usize = 1;
    for d in 1..=k {
        r = r * (n - k + d) / d;
    }
    r
}

/// A p-element subset of {1, ..., n}, stored strictly increasing, 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    elements: Vec<usize>,
    n: usize,
}

impl MultiIndex {
    pub fn new(elements: Vec<usize>, n: usize) -> Result<Self> {
        check_dimension(n)?;
        if elements.is_empty() || elements.len() > n {
            return Err(Error::DegreeOutOfRange {
                p: elements.len(),
                n,
            });
        }
        for pair in elements.windows(2) {
            if pair[0] >= pair[1] {
                return Err(Error::invalid(
                    "elements",
                    format!("not strictly increasing: {:?}", elements),
                ));
            }
        }
        if elements[0] < 1 || *elements.last().unwrap() > n {
            return Err(Error::invalid(
                "elements",
                format!("entries must lie in [1, {n}]: {:?}", elements),
            ));
        }
        Ok(MultiIndex { elements, n })
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn cardinality(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.elements.binary_search(&i).is_ok()
    }

    /// The complement {1, ..., n} \ a, as a multi-index of cardinality n - p.
    /// An involution: `a.star_complement().star_complement() == a`.
    pub fn star_complement(&self) -> MultiIndex {
        let elements = (1..=self.n).filter(|i| !self.contains(*i)).collect();
        MultiIndex {
            elements,
            n: self.n,
        }
    }
}

fn check_dimension(n: usize) -> Result<()> {
    if n < 1 || n > MAX_DIMENSION {
        return Err(Error::DimensionOutOfRange {
            n,
            min: 1,
            max: MAX_DIMENSION,
        });
    }
    Ok(())
}

/// All p-element subsets of {1, ..., n} in lexicographic order.
///
/// The position of a subset in this list is the ordinal used by every dense
/// operator on the p-th exterior power.
pub fn enumerate_basis(n: usize, p: usize) -> Result<Vec<MultiIndex>> {
    check_dimension(n)?;
    if p < 1 || p > n {
        return Err(Error::DegreeOutOfRange { p, n });
    }
    let mut out = Vec::with_capacity(binomial(n, p));
    let mut current: Vec<usize> = (1..=p).collect();
    loop {
        out.push(MultiIndex {
            elements: current.clone(),
            n,
        });
        // advance to the next combination in lexicographic order
        let mut i = p;
        while i > 0 && current[i - 1] == n - p + i {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        current[i - 1] += 1;
        for j in i..p {
            current[j] = current[j - 1] + 1;
        }
    }
    Ok(out)
}

/// K_a = sum of the spectrum entries selected by `a`.
///
/// Satisfies `index_sum(a, k) + index_sum(star a, k) == k.trace()` exactly up
/// to machine rounding of sums of at most n terms.
pub fn index_sum(a: &MultiIndex, k: &PrincipalSpectrum) -> Result<f64> {
    if a.ambient_dim() != k.dim() {
        return Err(Error::DimensionMismatch {
            expected: k.dim(),
            found: a.ambient_dim(),
        });
    }
    Ok(a.elements.iter().map(|&i| k.values()[i - 1]).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(elements: &[usize], n: usize) -> MultiIndex {
        MultiIndex::new(elements.to_vec(), n).unwrap()
    }

    #[test]
    fn enumerate_3_2_is_lexicographic() {
        let basis = enumerate_basis(3, 2).unwrap();
        let expect = [vec![1, 2], vec![1, 3], vec![2, 3]];
        assert_eq!(basis.len(), 3);
        for (b, e) in basis.iter().zip(expect.iter()) {
            assert_eq!(b.elements(), e.as_slice());
        }
    }

    #[test]
    fn enumerate_singletons() {
        let basis = enumerate_basis(4, 1).unwrap();
        let got: Vec<_> = basis.iter().map(|b| b.elements()[0]).collect();
        assert_eq!(got, vec![1, 2, 3, 4]);
    }

    #[test]
    fn enumerate_8_4_cardinality() {
        // independent count: 8!/(4!4!) = 70
        let basis = enumerate_basis(8, 4).unwrap();
        assert_eq!(basis.len(), 70);
    }

    #[test]
    fn enumerate_counts_sorted_distinct() {
        for n in 1..=10 {
            for p in 1..=n {
                let basis = enumerate_basis(n, p).unwrap();
                assert_eq!(basis.len(), binomial(n, p), "n={n} p={p}");
                for w in basis.windows(2) {
                    assert!(w[0] < w[1], "not sorted/distinct at n={n} p={p}");
                }
            }
        }
    }

    #[test]
    fn rejects_degenerate_degrees() {
        assert!(enumerate_basis(5, 0).is_err());
        assert!(enumerate_basis(5, 6).is_err());
        assert!(enumerate_basis(17, 1).is_err());
    }

    #[test]
    fn star_complement_examples() {
        assert_eq!(mi(&[1, 3], 4).star_complement(), mi(&[2, 4], 4));
        assert_eq!(mi(&[1, 2, 3], 6).star_complement(), mi(&[4, 5, 6], 6));
    }

    #[test]
    fn star_complement_is_involution() {
        let basis = enumerate_basis(6, 3).unwrap();
        assert_eq!(basis.len(), 20);
        for a in &basis {
            assert_eq!(&a.star_complement().star_complement(), a);
        }
    }

    #[test]
    fn index_sum_examples() {
        let k = PrincipalSpectrum::new(vec![-1.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(index_sum(&mi(&[1, 2], 4), &k).unwrap(), 0.0);
        assert_eq!(index_sum(&mi(&[2, 3], 4), &k).unwrap(), 3.0);
        assert_eq!(index_sum(&mi(&[1, 2, 3, 4], 4), &k).unwrap(), k.trace());
    }

    #[test]
    fn index_sum_dimension_mismatch() {
        let k = PrincipalSpectrum::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert!(index_sum(&mi(&[1, 2], 4), &k).is_err());
    }

    #[test]
    fn index_sum_complement_identity() {
        let k = PrincipalSpectrum::new(vec![-2.5, -0.5, 0.25, 1.0, 4.0]).unwrap();
        for p in 1..=4 {
            for a in enumerate_basis(5, p).unwrap() {
                let lhs = index_sum(&a, &k).unwrap() + index_sum(&a.star_complement(), &k).unwrap();
                assert!((lhs - k.trace()).abs() < 1e-14);
            }
        }
    }
}
