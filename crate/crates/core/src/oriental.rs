//! Algebraic orientals and the cosimplicial maps between them.

use crate::complex::{AdcMorphism, BasedComplex};
use crate::matrix::Matrix;
use itertools::Itertools;
use thiserror::Error;

pub fn binomial(n: i64, k: i64) -> u64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `"0.2.3"` for the simplex `[0,2,3]`.
pub fn simplex_label(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).join(".")
}

pub fn parse_simplex_label(s: &str) -> Option<Vec<usize>> {
    let v: Vec<usize> = s.split('.').map(|p| p.parse().ok()).collect::<Option<_>>()?;
    v.windows(2).all(|w| w[0] < w[1]).then_some(v)
}

/// All strictly increasing lists of length `q+1` in `[0,m]`, in lexicographic order.
pub fn simplices(m: i64, q: usize) -> Vec<Vec<usize>> {
    if m < 0 {
        return Vec::new();
    }
    (0..=m as usize).combinations(q + 1).collect()
}

/// Position of `s` in [`simplices`]`(m, s.len()-1)`.
pub fn simplex_rank(m: usize, s: &[usize]) -> usize {
    let q = s.len() as i64 - 1;
    let mut rank = 0u64;
    let mut next = 0usize;
    for (i, &v) in s.iter().enumerate() {
        for t in next..v {
            rank += binomial(m as i64 - t as i64, q - i as i64);
        }
        next = v + 1;
    }
    rank as usize
}

/// The oriental `O[m]`; `m = -1` gives the empty complex.
pub fn oriental(m: i64) -> BasedComplex {
    assert!(m >= -1, "oriental dimension must be at least -1");
    if m < 0 {
        return BasedComplex::empty();
    }
    let mu = m as usize;
    let basis: Vec<Vec<String>> = (0..=mu).map(|q| simplices(m, q).iter().map(|s| simplex_label(s)).collect()).collect();
    let mut differential = Vec::with_capacity(mu);
    for q in 0..mu {
        let mut d = Matrix::zeros(basis[q].len(), basis[q + 1].len());
        for (j, s) in simplices(m, q + 1).iter().enumerate() {
            for i in 0..s.len() {
                let mut face = s.clone();
                face.remove(i);
                let sign = if i % 2 == 0 { 1 } else { -1 };
                d.add_to(simplex_rank(mu, &face), j, sign);
            }
        }
        differential.push(d);
    }
    let augmentation = vec![1; mu + 1];
    BasedComplex::new(basis, differential, augmentation).expect("oriental shapes are consistent")
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MonotoneError {
    #[error("map is not monotone at position {0}")]
    NotMonotone(usize),
    #[error("image {0} exceeds target dimension {1}")]
    OutOfRange(usize, usize),
}

/// A monotone map `[source] -> [target]`, stored as its list of images.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonotoneMap {
    images: Vec<usize>,
    target: usize,
}

impl MonotoneMap {
    pub fn new(images: Vec<usize>, target: usize) -> Result<Self, MonotoneError> {
        if let Some(i) = images.windows(2).position(|w| w[0] > w[1]) {
            return Err(MonotoneError::NotMonotone(i + 1));
        }
        if let Some(&v) = images.iter().find(|&&v| v > target) {
            return Err(MonotoneError::OutOfRange(v, target));
        }
        Ok(MonotoneMap { images, target })
    }

    pub fn identity(n: usize) -> Self {
        MonotoneMap { images: (0..=n).collect(), target: n }
    }

    /// Coface `d^i: [n-1] -> [n]` skipping `i`.
    pub fn coface(n: usize, i: usize) -> Self {
        assert!(n >= 1 && i <= n);
        MonotoneMap { images: (0..n).map(|j| if j < i { j } else { j + 1 }).collect(), target: n }
    }

    /// Codegeneracy `s^i: [n+1] -> [n]` hitting `i` twice.
    pub fn codegeneracy(n: usize, i: usize) -> Self {
        assert!(i <= n);
        MonotoneMap { images: (0..=n + 1).map(|j| if j <= i { j } else { j - 1 }).collect(), target: n }
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn source_dim(&self) -> usize {
        self.images.len() - 1
    }

    pub fn target_dim(&self) -> usize {
        self.target
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn after(&self, other: &MonotoneMap) -> MonotoneMap {
        assert_eq!(other.target, self.source_dim());
        MonotoneMap { images: other.images.iter().map(|&i| self.images[i]).collect(), target: self.target }
    }

    /// Image of a simplex, or `None` if it collapses.
    pub fn apply(&self, s: &[usize]) -> Option<Vec<usize>> {
        let img: Vec<usize> = s.iter().map(|&v| self.images[v]).collect();
        img.windows(2).all(|w| w[0] < w[1]).then_some(img)
    }
}

/// The map `O[m] -> O[m']` induced by a monotone map.
pub fn simplicial_operator(alpha: &MonotoneMap) -> AdcMorphism {
    let (m, mt) = (alpha.source_dim(), alpha.target_dim());
    let matrices = (0..=m.max(mt))
        .map(|q| {
            let mut mat = Matrix::zeros(binomial(mt as i64 + 1, q as i64 + 1) as usize, binomial(m as i64 + 1, q as i64 + 1) as usize);
            for (j, s) in simplices(m as i64, q).iter().enumerate() {
                if let Some(img) = alpha.apply(s) {
                    mat.set(simplex_rank(mt, &img), j, 1);
                }
            }
            mat
        })
        .collect();
    AdcMorphism::new(matrices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{validate_complex, validate_morphism};

    #[test]
    fn ranks_and_boundary() {
        let o3 = oriental(3);
        assert_eq!(o3.rank(1), 6);
        assert!(validate_complex(&o3).unwrap().is_valid());
        let o2 = oriental(2);
        let d = o2.differential(1).column(0);
        // [1,2] - [0,2] + [0,1] in the order 01, 02, 12
        assert_eq!(d, vec![1, -1, 1]);
        let e = oriental(-1);
        assert_eq!(e.total_rank(), 0);
    }

    #[test]
    fn rank_matches_enumeration() {
        for m in 0..6i64 {
            for q in 0..=m as usize {
                for (i, s) in simplices(m, q).iter().enumerate() {
                    assert_eq!(simplex_rank(m as usize, s), i);
                }
            }
        }
    }

    #[test]
    fn structure_maps() {
        let d1 = simplicial_operator(&MonotoneMap::coface(2, 1));
        // [0,1] -> [0,2]
        assert_eq!(d1.matrix(1).column(0), vec![0, 1, 0]);
        let s0 = simplicial_operator(&MonotoneMap::codegeneracy(1, 0));
        assert!(s0.matrix(1).column(0).iter().all(|&v| v == 0));
        let lhs = MonotoneMap::coface(2, 2).after(&MonotoneMap::coface(1, 0));
        let rhs = MonotoneMap::coface(2, 0).after(&MonotoneMap::coface(1, 1));
        assert_eq!(lhs, rhs);
        assert_eq!(simplicial_operator(&lhs), simplicial_operator(&rhs));
        assert!(validate_morphism(&oriental(1), &oriental(2), &d1).unwrap().is_valid());
        assert!(MonotoneMap::new(vec![1, 0], 1).is_err());
    }
}
