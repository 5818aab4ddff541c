//! Based augmented directed chain complexes and their constructions.

use crate::matrix::Matrix;
use crate::mutation;
use crate::oriental::{binomial, oriental, simplex_label, simplices};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

/// A finitely generated augmented directed chain complex with a chosen basis.
///
/// `differential[q]` maps degree `q+1` coordinates to degree `q` coordinates, so it has
/// `rank(q)` rows and `rank(q+1)` columns. Degrees above `max_degree` are zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawComplex")]
pub struct BasedComplex {
    max_degree: usize,
    basis: Vec<Vec<String>>,
    differential: Vec<Matrix>,
    augmentation: Vec<i64>,
}

#[derive(Deserialize)]
struct RawComplex {
    max_degree: usize,
    basis: Vec<Vec<String>>,
    differential: Vec<Matrix>,
    augmentation: Vec<i64>,
}

impl TryFrom<RawComplex> for BasedComplex {
    type Error = StructuralError;
    fn try_from(raw: RawComplex) -> Result<Self, StructuralError> {
        if raw.basis.len() != raw.max_degree + 1 {
            return Err(StructuralError::BasisLength { expected: raw.max_degree + 1, found: raw.basis.len() });
        }
        let mut diffs = Vec::with_capacity(raw.differential.len());
        for (q, d) in raw.differential.into_iter().enumerate() {
            let (r, c) = (raw.basis[q].len(), raw.basis.get(q + 1).map_or(0, |b| b.len()));
            let found = (d.rows(), d.cols());
            diffs.push(d.reshaped(r, c).ok_or(StructuralError::DifferentialShape { q, expected: (r, c), found })?);
        }
        BasedComplex::new(raw.basis, diffs, raw.augmentation)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructuralError {
    #[error("expected {expected} basis degrees, found {found}")]
    BasisLength { expected: usize, found: usize },
    #[error("expected {expected} differentials, found {found}")]
    DifferentialCount { expected: usize, found: usize },
    #[error("differential {q} has shape {found:?}, expected {expected:?}")]
    DifferentialShape { q: usize, expected: (usize, usize), found: (usize, usize) },
    #[error("augmentation has length {found}, expected {expected}")]
    AugmentationLength { expected: usize, found: usize },
    #[error("morphism matrix {q} has shape {found:?}, expected {expected:?}")]
    MorphismShape { q: usize, expected: (usize, usize), found: (usize, usize) },
    #[error("morphism has {found} matrices, expected {expected}")]
    MorphismDegrees { expected: usize, found: usize },
    #[error("unknown degree-0 label {0:?}")]
    UnknownLabel(String),
    #[error("chain of degree {degree} has {found} coefficients, expected {expected}")]
    ChainLength { degree: usize, expected: usize, found: usize },
}

/// A law violated by a complex or a morphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    DdNonzero { q: usize },
    AugmentationOfBoundary,
    NonUnitalAugmentation { index: usize, value: i64 },
    ChainMap { q: usize },
    AugmentationNotPreserved,
    Negative { q: usize, row: usize, col: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DdNonzero { q } => write!(f, "dd-nonzero at q={q}"),
            Violation::AugmentationOfBoundary => write!(f, "augmentation-of-boundary nonzero"),
            Violation::NonUnitalAugmentation { index, value } => {
                write!(f, "augmentation {value} on degree-0 generator {index}")
            }
            Violation::ChainMap { q } => write!(f, "chain-map law fails at q={q}"),
            Violation::AugmentationNotPreserved => write!(f, "augmentation not preserved"),
            Violation::Negative { q, row, col } => write!(f, "negative entry at q={q} ({row},{col})"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn messages(&self) -> Vec<String> {
        self.violations.iter().map(|v| v.to_string()).collect()
    }
}

/// A chain in a single degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chain {
    pub degree: usize,
    pub coefficients: Vec<i64>,
}

impl Chain {
    pub fn new(c: &BasedComplex, degree: usize, coefficients: Vec<i64>) -> Result<Self, StructuralError> {
        let expected = c.rank(degree);
        if coefficients.len() != expected {
            return Err(StructuralError::ChainLength { degree, expected, found: coefficients.len() });
        }
        Ok(Chain { degree, coefficients })
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|&v| v == 0)
    }
}

impl BasedComplex {
    pub fn new(basis: Vec<Vec<String>>, differential: Vec<Matrix>, augmentation: Vec<i64>) -> Result<Self, StructuralError> {
        if basis.is_empty() {
            return Err(StructuralError::BasisLength { expected: 1, found: 0 });
        }
        let max_degree = basis.len() - 1;
        if differential.len() != max_degree {
            return Err(StructuralError::DifferentialCount { expected: max_degree, found: differential.len() });
        }
        for (q, d) in differential.iter().enumerate() {
            let expected = (basis[q].len(), basis[q + 1].len());
            if (d.rows(), d.cols()) != expected {
                return Err(StructuralError::DifferentialShape { q, expected, found: (d.rows(), d.cols()) });
            }
        }
        if augmentation.len() != basis[0].len() {
            return Err(StructuralError::AugmentationLength { expected: basis[0].len(), found: augmentation.len() });
        }
        Ok(BasedComplex { max_degree, basis, differential, augmentation })
    }

    /// The complex with no generators.
    pub fn empty() -> Self {
        BasedComplex { max_degree: 0, basis: vec![Vec::new()], differential: Vec::new(), augmentation: Vec::new() }
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn rank(&self, q: usize) -> usize {
        self.basis.get(q).map_or(0, |b| b.len())
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.basis.iter().map(|b| b.len()).collect()
    }

    pub fn total_rank(&self) -> usize {
        self.basis.iter().map(|b| b.len()).sum()
    }

    pub fn basis(&self, q: usize) -> &[String] {
        self.basis.get(q).map_or(&[], |b| b.as_slice())
    }

    /// The differential from degree `q+1` to degree `q`, zero-padded outside the stored range.
    pub fn differential(&self, q: usize) -> Matrix {
        match self.differential.get(q) {
            Some(d) => d.clone(),
            None => Matrix::zeros(self.rank(q), self.rank(q + 1)),
        }
    }

    pub fn differential_ref(&self, q: usize) -> Option<&Matrix> {
        self.differential.get(q)
    }

    pub fn augmentation(&self) -> &[i64] {
        &self.augmentation
    }

    pub fn label_index(&self, q: usize, label: &str) -> Option<usize> {
        self.basis(q).iter().position(|l| l == label)
    }

    pub fn label_map(&self, q: usize) -> HashMap<&str, usize> {
        self.basis(q).iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect()
    }

    /// Boundary of a chain of degree `q >= 1`.
    pub fn boundary(&self, q: usize, chain: &[i64]) -> Vec<i64> {
        assert!(q >= 1);
        match self.differential.get(q - 1) {
            Some(d) => d.mul_vec(chain),
            None => vec![0; self.rank(q - 1)],
        }
    }

    /// Augmentation of a degree-0 chain.
    pub fn augment(&self, chain: &[i64]) -> i64 {
        self.augmentation.iter().zip(chain).map(|(a, b)| a * b).sum()
    }
}

/// Degreewise integer matrices of a map between based complexes.
///
/// There is one matrix per source degree; target degrees above the target's range count as rank zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AdcMorphism {
    matrices: Vec<Matrix>,
}

impl AdcMorphism {
    /// Trailing `0×0` matrices are dropped, so a morphism keeps exactly the degrees in which its
    /// source or target is nonzero.
    pub fn new(mut matrices: Vec<Matrix>) -> Self {
        while matrices.last().is_some_and(|m| m.rows() == 0 && m.cols() == 0) {
            matrices.pop();
        }
        AdcMorphism { matrices }
    }

    pub fn identity(c: &BasedComplex) -> Self {
        AdcMorphism::new((0..=c.max_degree()).map(|q| Matrix::identity(c.rank(q))).collect())
    }

    pub fn zero(source: &BasedComplex, target: &BasedComplex) -> Self {
        let top = source.max_degree().max(target.max_degree());
        AdcMorphism::new((0..=top).map(|q| Matrix::zeros(target.rank(q), source.rank(q))).collect())
    }

    pub fn degrees(&self) -> usize {
        self.matrices.len()
    }

    /// Panics past the last stored degree; see [`AdcMorphism::new`].
    pub fn matrix(&self, q: usize) -> &Matrix {
        &self.matrices[q]
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn matrices_mut(&mut self) -> &mut [Matrix] {
        &mut self.matrices
    }

    /// Image of the `j`-th generator of degree `q`.
    pub fn image(&self, q: usize, j: usize) -> Vec<i64> {
        self.matrices[q].column(j)
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &AdcMorphism) -> AdcMorphism {
        let top = self.matrices.len().max(first.matrices.len());
        AdcMorphism::new(
            (0..top)
                .map(|q| match (self.matrices.get(q), first.matrices.get(q)) {
                    (Some(g), Some(f)) => g.mul(f),
                    (Some(g), None) => Matrix::zeros(g.rows(), 0),
                    (None, Some(f)) => Matrix::zeros(0, f.cols()),
                    (None, None) => unreachable!(),
                })
                .collect(),
        )
    }

    /// Flat canonical encoding used for hashing and ordering.
    pub fn encoding(&self) -> Vec<i64> {
        let mut out = Vec::new();
        for m in &self.matrices {
            out.extend_from_slice(m.data());
        }
        out
    }

    pub fn check_shape(&self, source: &BasedComplex, target: &BasedComplex) -> Result<(), StructuralError> {
        let expected_len = AdcMorphism::zero(source, target).matrices.len();
        if self.matrices.len() != expected_len {
            return Err(StructuralError::MorphismDegrees { expected: expected_len, found: self.matrices.len() });
        }
        for (q, m) in self.matrices.iter().enumerate() {
            let expected = (target.rank(q), source.rank(q));
            if (m.rows(), m.cols()) != expected {
                return Err(StructuralError::MorphismShape { q, expected, found: (m.rows(), m.cols()) });
            }
        }
        Ok(())
    }
}

pub fn validate_complex(c: &BasedComplex) -> Result<ValidationReport, StructuralError> {
    let mut report = ValidationReport::default();
    for q in 1..c.max_degree() {
        if !c.differential[q - 1].mul(&c.differential[q]).is_zero() {
            report.violations.push(Violation::DdNonzero { q: q - 1 });
        }
    }
    if c.max_degree() >= 1 && c.differential[0].vec_mul(&c.augmentation).iter().any(|&v| v != 0) {
        report.violations.push(Violation::AugmentationOfBoundary);
    }
    for (index, &value) in c.augmentation.iter().enumerate() {
        if value != 1 {
            report.violations.push(Violation::NonUnitalAugmentation { index, value });
        }
    }
    Ok(report)
}

pub fn validate_morphism(source: &BasedComplex, target: &BasedComplex, f: &AdcMorphism) -> Result<ValidationReport, StructuralError> {
    f.check_shape(source, target)?;
    let mut report = ValidationReport::default();
    let mat = |q: usize| f.matrices.get(q).cloned().unwrap_or_else(|| Matrix::zeros(target.rank(q), source.rank(q)));
    for q in 0..source.max_degree() {
        let lhs = target.differential(q).mul(&mat(q + 1));
        let rhs = mat(q).mul(&source.differential(q));
        if lhs != rhs {
            report.violations.push(Violation::ChainMap { q });
        }
    }
    if mat(0).vec_mul(target.augmentation()) != source.augmentation() {
        report.violations.push(Violation::AugmentationNotPreserved);
    }
    for (q, m) in f.matrices.iter().enumerate() {
        if let Some(idx) = m.data().iter().position(|&v| v < 0) {
            report.violations.push(Violation::Negative { q, row: idx / m.cols(), col: idx % m.cols() });
        }
    }
    Ok(report)
}

pub const BOTTOM: &str = "bot";
pub const TOP: &str = "top";

/// The two-point suspension.
pub fn suspend(c: &BasedComplex) -> BasedComplex {
    let drop_eps = mutation::current().drop_suspension_augmentation;
    let mut basis = vec![vec![BOTTOM.to_string(), TOP.to_string()]];
    basis.extend(c.basis.iter().cloned());
    let mut d0 = Matrix::zeros(2, c.rank(0));
    for (j, &e) in c.augmentation.iter().enumerate() {
        let e = if drop_eps { 0 } else { e };
        d0.set(0, j, -e);
        d0.set(1, j, e);
    }
    let mut differential = vec![d0];
    differential.extend(c.differential.iter().cloned());
    BasedComplex::new(basis, differential, vec![1, 1]).expect("suspension shapes are consistent")
}

/// `Σf`: identity on the poles, `f` shifted up one degree.
pub fn suspend_morphism(f: &AdcMorphism) -> AdcMorphism {
    let mut matrices = vec![Matrix::identity(2)];
    matrices.extend(f.matrices.iter().cloned());
    AdcMorphism { matrices }
}

/// Index bookkeeping for the basis of a tensor product in one degree.
///
/// Pairs are ordered by the degree of the left factor, then left index, then right index.
pub fn tensor_index(c_ranks: &[usize], d_ranks: &[usize], q: usize, k: usize, i: usize, j: usize) -> usize {
    let mut offset = 0;
    for kk in 0..k {
        if q >= kk {
            offset += c_ranks.get(kk).copied().unwrap_or(0) * d_ranks.get(q - kk).copied().unwrap_or(0);
        }
    }
    offset + i * d_ranks.get(q - k).copied().unwrap_or(0) + j
}

pub fn tensor_label(a: &str, b: &str) -> String {
    format!("{a}|{b}")
}

pub fn tensor(c: &BasedComplex, d: &BasedComplex) -> BasedComplex {
    let drop_sign = mutation::current().drop_tensor_sign;
    let (cr, dr) = (c.ranks(), d.ranks());
    let top = c.max_degree() + d.max_degree();
    let mut basis = Vec::with_capacity(top + 1);
    for q in 0..=top {
        let mut labels = Vec::new();
        for k in 0..=q.min(c.max_degree()) {
            for a in c.basis(k) {
                for b in d.basis(q - k) {
                    labels.push(tensor_label(a, b));
                }
            }
        }
        basis.push(labels);
    }
    let mut differential = Vec::with_capacity(top);
    for q in 0..top {
        let mut m = Matrix::zeros(basis[q].len(), basis[q + 1].len());
        for k in 0..=(q + 1).min(c.max_degree()) {
            let l = q + 1 - k;
            if l > d.max_degree() {
                continue;
            }
            for i in 0..cr[k] {
                for j in 0..dr[l] {
                    let col = tensor_index(&cr, &dr, q + 1, k, i, j);
                    if k >= 1 {
                        let dc = &c.differential[k - 1];
                        for i2 in 0..cr[k - 1] {
                            let v = dc.get(i2, i);
                            if v != 0 {
                                m.add_to(tensor_index(&cr, &dr, q, k - 1, i2, j), col, v);
                            }
                        }
                    }
                    if l >= 1 {
                        let sign = if k % 2 == 0 || drop_sign { 1 } else { -1 };
                        let dd = &d.differential[l - 1];
                        for j2 in 0..dr[l - 1] {
                            let v = dd.get(j2, j);
                            if v != 0 {
                                m.add_to(tensor_index(&cr, &dr, q, k, i, j2), col, sign * v);
                            }
                        }
                    }
                }
            }
        }
        differential.push(m);
    }
    let mut augmentation = Vec::with_capacity(basis[0].len());
    for &a in &c.augmentation {
        for &b in &d.augmentation {
            augmentation.push(a * b);
        }
    }
    BasedComplex::new(basis, differential, augmentation).expect("tensor shapes are consistent")
}

/// Same chains, negated differentials.
pub fn total_dual(c: &BasedComplex) -> BasedComplex {
    BasedComplex {
        max_degree: c.max_degree,
        basis: c.basis.clone(),
        differential: c.differential.iter().map(|d| d.neg()).collect(),
        augmentation: c.augmentation.clone(),
    }
}

fn prefixed(p: usize, labels: &[String]) -> Vec<String> {
    labels.iter().map(|l| format!("{p}:{l}")).collect()
}

/// Degreewise direct sum; labels of the summands are prefixed with `0:` and `1:`.
pub fn direct_sum(c: &BasedComplex, d: &BasedComplex) -> BasedComplex {
    let top = c.max_degree().max(d.max_degree());
    let basis: Vec<Vec<String>> = (0..=top)
        .map(|q| {
            let mut v = prefixed(0, c.basis(q));
            v.extend(prefixed(1, d.basis(q)));
            v
        })
        .collect();
    let differential = (0..top)
        .map(|q| {
            let (dc, dd) = (c.differential(q), d.differential(q));
            let mut m = Matrix::zeros(c.rank(q) + d.rank(q), c.rank(q + 1) + d.rank(q + 1));
            for i in 0..dc.rows() {
                for j in 0..dc.cols() {
                    m.set(i, j, dc.get(i, j));
                }
            }
            for i in 0..dd.rows() {
                for j in 0..dd.cols() {
                    m.set(c.rank(q) + i, c.rank(q + 1) + j, dd.get(i, j));
                }
            }
            m
        })
        .collect();
    let mut augmentation = c.augmentation.clone();
    augmentation.extend_from_slice(&d.augmentation);
    BasedComplex::new(basis, differential, augmentation).expect("direct sum shapes are consistent")
}

/// Glues `d0` of `d` onto `c0` of `c`. The glued point keeps the label `0:c0`.
pub fn wedge_at_point(c: &BasedComplex, c0: &str, d: &BasedComplex, d0: &str) -> Result<BasedComplex, StructuralError> {
    let ci = c.label_index(0, c0).ok_or_else(|| StructuralError::UnknownLabel(c0.to_string()))?;
    let di = d.label_index(0, d0).ok_or_else(|| StructuralError::UnknownLabel(d0.to_string()))?;
    let sum = direct_sum(c, d);
    let removed = c.rank(0) + di;
    let keep: Vec<usize> = (0..sum.rank(0)).filter(|&i| i != removed).collect();
    let mut basis = sum.basis.clone();
    basis[0] = keep.iter().map(|&i| sum.basis[0][i].clone()).collect();
    let mut differential = sum.differential.clone();
    if let Some(d0m) = sum.differential.first() {
        let mut m = Matrix::zeros(keep.len(), d0m.cols());
        for (new_i, &old_i) in keep.iter().enumerate() {
            for j in 0..d0m.cols() {
                m.set(new_i, j, d0m.get(old_i, j));
            }
        }
        for j in 0..d0m.cols() {
            m.add_to(ci, j, d0m.get(removed, j));
        }
        differential[0] = m;
    }
    let augmentation = keep.iter().map(|&i| sum.augmentation[i]).collect();
    BasedComplex::new(basis, differential, augmentation)
}

/// The tensor `O[k] ⊗ O[l]°` that φ lands in (before suspension).
pub fn tensor_of_orientals(k: i64, l: i64) -> BasedComplex {
    tensor(&oriental(k), &total_dual(&oriental(l)))
}

/// φ: O[k+1+l] → Σ(O[k] ⊗ O[l]°).
pub fn phi_map(k: usize, l: usize) -> AdcMorphism {
    let m = k + 1 + l;
    let target = suspend(&tensor_of_orientals(k as i64, l as i64));
    let mut matrices = Vec::with_capacity(m + 1);
    for q in 0..=m {
        let srcs = simplices(m as i64, q);
        let mut mat = Matrix::zeros(target.rank(q), srcs.len());
        if q == 0 {
            for (j, s) in srcs.iter().enumerate() {
                mat.set(if s[0] <= k { 0 } else { 1 }, j, 1);
            }
        } else {
            let labels = target.label_map(q);
            for (j, s) in srcs.iter().enumerate() {
                let (a, b): (Vec<usize>, Vec<usize>) = s.iter().partition(|&&v| v <= k);
                if a.is_empty() || b.is_empty() {
                    continue;
                }
                let shifted: Vec<usize> = b.iter().map(|v| v - k - 1).collect();
                let label = tensor_label(&simplex_label(&a), &simplex_label(&shifted));
                mat.set(labels[label.as_str()], j, 1);
            }
        }
        matrices.push(mat);
    }
    AdcMorphism::new(matrices)
}

/// True iff every target generator is the image of some source generator.
pub fn is_basis_surjective(f: &AdcMorphism, target: &BasedComplex) -> bool {
    (0..f.degrees()).all(|q| {
        let m = f.matrix(q);
        (0..target.rank(q)).all(|i| (0..m.cols()).any(|j| m.get(i, j) > 0 && (0..m.rows()).all(|r| r == i || m.get(r, j) == 0)))
    }) && (f.degrees()..=target.max_degree()).all(|q| target.rank(q) == 0)
}

pub fn verify_phi_epi(k: usize, l: usize) -> bool {
    let target = suspend(&tensor_of_orientals(k as i64, l as i64));
    is_basis_surjective(&phi_map(k, l), &target)
}

/// Result of the degreewise pushout check for the square built from φ.
#[derive(Clone, Debug, Serialize)]
pub struct PushoutCheck {
    pub vandermonde: bool,
    pub fibers: bool,
    pub commutes: bool,
    pub phi_valid: bool,
    pub details: Vec<String>,
}

impl PushoutCheck {
    pub fn holds(&self) -> bool {
        self.vandermonde && self.fibers && self.commutes && self.phi_valid
    }
}

pub fn verify_suspension_pushout(k: usize, l: usize) -> PushoutCheck {
    let m = k + 1 + l;
    let (ki, li, mi) = (k as i64, l as i64, m as i64);
    let target = suspend(&tensor_of_orientals(ki, li));
    let phi = phi_map(k, l);
    let mut details = Vec::new();
    let phi_valid = validate_morphism(&oriental(mi), &target, &phi).map(|r| r.is_valid()).unwrap_or(false);
    if !phi_valid {
        details.push("phi is not a morphism".to_string());
    }

    let mut vandermonde = true;
    for q in 0..=mi {
        let lhs = binomial(mi + 1, q + 1);
        let cross: u64 = (0..q).map(|i| binomial(ki + 1, i + 1) * binomial(li + 1, q - i)).sum();
        let rhs = binomial(ki + 1, q + 1) + binomial(li + 1, q + 1) + cross;
        if lhs != rhs || (q > 0 && target.rank(q as usize) as u64 != cross) {
            vandermonde = false;
            details.push(format!("cardinality identity fails at q={q}"));
        }
    }

    let mut fibers = true;
    for q in 0..=m {
        let mat = phi.matrix(q);
        let mut hits = vec![0usize; target.rank(q)];
        for (j, s) in simplices(mi, q).iter().enumerate() {
            let col = mat.column(j);
            let nonzero: Vec<usize> = (0..col.len()).filter(|&i| col[i] != 0).collect();
            let below = s.iter().filter(|&&v| v <= k).count();
            let killed = below == 0 || below == s.len();
            let ok = if q == 0 {
                nonzero.len() == 1 && col[nonzero[0]] == 1 && nonzero[0] == usize::from(s[0] > k)
            } else if killed {
                nonzero.is_empty()
            } else {
                nonzero.len() == 1 && col[nonzero[0]] == 1
            };
            if !ok {
                fibers = false;
                details.push(format!("unexpected image of {} in degree {q}", simplex_label(s)));
            }
            if q > 0 {
                for &i in &nonzero {
                    hits[i] += 1;
                }
            }
        }
        if q > 0 && hits.iter().any(|&h| h != 1) {
            fibers = false;
            details.push(format!("phi is not bijective on surviving generators in degree {q}"));
        }
    }

    // Square: O[k] ⊕ O[l] → O[m] (face inclusions) then φ, against the fold to O[0] ⊕ O[0] then the poles.
    let mut commutes = true;
    for q in 0..=m {
        let left_gens: Vec<Vec<usize>> = simplices(ki, q)
            .into_iter()
            .chain(simplices(li, q).into_iter().map(|s| s.iter().map(|v| v + k + 1).collect()))
            .collect();
        let mut top = Matrix::zeros(binomial(mi + 1, q as i64 + 1) as usize, left_gens.len());
        for (j, s) in left_gens.iter().enumerate() {
            top.set(crate::oriental::simplex_rank(m, s), j, 1);
        }
        let around_top = phi.matrix(q).mul(&top);
        let mut around_bottom = Matrix::zeros(target.rank(q), left_gens.len());
        if q == 0 {
            for (j, s) in left_gens.iter().enumerate() {
                around_bottom.set(usize::from(s[0] > k), j, 1);
            }
        }
        if around_top != around_bottom {
            commutes = false;
            details.push(format!("square does not commute in degree {q}"));
        }
    }
    PushoutCheck { vandermonde, fibers, commutes, phi_valid, details }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col_of(c: &BasedComplex, q: usize, label: &str) -> usize {
        c.label_index(q, label).unwrap()
    }

    #[test]
    fn dd_violation_reported() {
        // Degrees 0,1,2 with ∂₀∂₁ ≠ 0.
        let basis = vec![vec!["x".into(), "y".into()], vec!["e".into()], vec!["f".into()]];
        let d0 = Matrix::from_rows(&[vec![-1], vec![1]], 1).unwrap();
        let d1 = Matrix::from_rows(&[vec![1]], 1).unwrap();
        let bad = BasedComplex::new(basis, vec![d0, d1], vec![1, 1]).unwrap();
        let r = validate_complex(&bad).unwrap();
        assert!(r.messages().contains(&"dd-nonzero at q=0".to_string()));
    }

    #[test]
    fn structural_errors_are_separate() {
        let json = r#"{"max_degree":1,"basis":[["a"],["e"]],"differential":[[[1,2]]],"augmentation":[1]}"#;
        let err = serde_json::from_str::<BasedComplex>(json).unwrap_err();
        assert!(err.to_string().contains("shape"));
    }

    #[test]
    fn suspension_of_point() {
        let s = suspend(&oriental(0));
        assert_eq!(s.differential(0).column(0), vec![-1, 1]);
        let e = suspend(&BasedComplex::empty());
        assert_eq!(e.ranks(), vec![2, 0]);
        assert_eq!(suspend(&oriental(2)).rank(3), 1);
    }

    #[test]
    fn tensor_of_intervals() {
        let t = tensor_of_orientals(1, 1);
        assert_eq!(t.basis(2), &["0.1|0.1".to_string()]);
        assert!(validate_complex(&t).unwrap().is_valid());
        let d = t.differential(1).column(0);
        let mut expected = vec![0; t.rank(1)];
        expected[col_of(&t, 1, "1|0.1")] = 1;
        expected[col_of(&t, 1, "0|0.1")] = -1;
        expected[col_of(&t, 1, "0.1|0")] = -1;
        expected[col_of(&t, 1, "0.1|1")] = 1;
        assert_eq!(d, expected);
        assert_eq!(t.augmentation()[col_of(&t, 0, "0|0")], 1);
    }

    #[test]
    fn dual_and_sums() {
        let o3 = oriental(3);
        assert_eq!(total_dual(&total_dual(&o3)), o3);
        assert_eq!(total_dual(&oriental(1)).differential(0).column(0), vec![1, -1]);
        let s = direct_sum(&oriental(1), &oriental(1));
        assert_eq!(s.rank(0), 4);
        assert!(validate_complex(&s).unwrap().is_valid());
        let arrow = suspend(&oriental(0));
        let w = wedge_at_point(&arrow, TOP, &arrow, BOTTOM).unwrap();
        assert_eq!((w.rank(0), w.rank(1)), (3, 2));
        assert!(validate_complex(&w).unwrap().is_valid());
        assert!(wedge_at_point(&arrow, "nope", &arrow, BOTTOM).is_err());
    }

    #[test]
    fn phi_examples() {
        let p = phi_map(0, 0);
        assert_eq!(p.matrix(0).to_rows(), vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(p.matrix(1).column(0), vec![1]);
        let p = phi_map(1, 0);
        // [0,1] sits entirely in the left part
        assert!(p.matrix(1).column(0).iter().all(|&v| v == 0));
        let p = phi_map(1, 1);
        let t = suspend(&tensor_of_orientals(1, 1));
        let j = crate::oriental::simplex_rank(3, &[0, 2, 3]);
        let col = p.matrix(2).column(j);
        let i = t.label_index(2, "0|0.1").unwrap();
        assert_eq!(col.iter().sum::<i64>(), 1);
        assert_eq!(col[i], 1);
        assert!(validate_morphism(&oriental(3), &t, &p).unwrap().is_valid());
    }

    #[test]
    fn pushout_and_epi() {
        assert!(verify_suspension_pushout(0, 0).holds());
        assert!(verify_suspension_pushout(2, 1).holds());
        assert!(verify_phi_epi(2, 2));
        let mut truncated = phi_map(1, 1);
        let last = truncated.matrix(2).cols() - 1;
        let zero = vec![0; truncated.matrix(2).rows()];
        for j in 0..=last {
            if truncated.matrix(2).column(j).iter().any(|&v| v != 0) {
                truncated.matrices_mut()[2].set_column(j, &zero);
                break;
            }
        }
        let t = suspend(&tensor_of_orientals(1, 1));
        assert!(!is_basis_surjective(&truncated, &t));
    }
}
