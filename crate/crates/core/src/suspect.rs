//! Type, suspect index and the parent construction for simplices of `N(νΣC)`.
//!
//! A simplex `X: O[m] -> ΣC` of type `k` corresponds to `x: O[k] ⊗ O[l]° -> C`; the value
//! `x([a] ⊗ [b])` is read off `X` at the simplex `[a, b+k+1]`.

use crate::complex::{validate_morphism, AdcMorphism, BasedComplex, suspend};
use crate::hom::lift_through_phi;
use crate::matrix::Matrix;
use crate::mutation;
use crate::nerve::{comparison_from, is_totally_degenerate, rs_nerve, type_of, NerveError, Operators};
use crate::oriental::{simplex_rank, simplices};
use itertools::Itertools;
use serde::Serialize;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SuspectError {
    #[error("the simplex is totally degenerate")]
    TotallyDegenerate,
    #[error("the suspect index is undefined when no vertex after the last bottom one is left over")]
    NoIndex,
    #[error("the simplex is suspect")]
    Suspect,
    #[error("suspect index 0 has no parent")]
    IndexZero,
    #[error("basis element {0} matched {1} parent clauses")]
    Coverage(String, usize),
    #[error("the parent is not a chain map: {0}")]
    NotChainMap(String),
    #[error(transparent)]
    Nerve(#[from] NerveError),
}

/// A non-totally-degenerate simplex of `N(νΣC)` with its tensor coordinates.
#[derive(Clone, Debug)]
pub struct TypedSimplex<'a> {
    pub x: &'a AdcMorphism,
    pub m: usize,
    pub k: usize,
    pub l: usize,
}

impl<'a> TypedSimplex<'a> {
    pub fn new(x: &'a AdcMorphism) -> Result<Self, SuspectError> {
        if is_totally_degenerate(x) {
            return Err(SuspectError::TotallyDegenerate);
        }
        let m = x.matrix(0).cols() - 1;
        let k = type_of(x) as usize;
        Ok(TypedSimplex { x, m, k, l: m - 1 - k })
    }

    /// `x([a] ⊗ [b])`; zero when either list is empty or not strictly increasing.
    ///
    /// A zero value in a degree beyond the simplex comes back as an empty vector.
    pub fn value(&self, a: &[usize], b: &[usize]) -> Vec<i64> {
        let q = a.len() + b.len() - 1;
        let rows = if q < self.x.degrees() { self.x.matrix(q).rows() } else { 0 };
        let strict = |v: &[usize]| !v.is_empty() && v.windows(2).all(|w| w[0] < w[1]);
        if !strict(a) || !strict(b) || a[a.len() - 1] > self.k || b[b.len() - 1] > self.l {
            return vec![0; rows];
        }
        let s: Vec<usize> = a.iter().copied().chain(b.iter().map(|v| v + self.k + 1)).collect();
        self.x.matrix(q).column(simplex_rank(self.m, &s))
    }

    fn vanishes(&self, a: &[usize], b: &[usize]) -> bool {
        self.value(a, b).iter().all(|&v| v == 0)
    }
}

/// All subsets of `[lo, hi]` (an empty range when `lo > hi`), as increasing lists.
fn subsets(lo: usize, hi: usize) -> Vec<Vec<usize>> {
    if lo > hi {
        return vec![Vec::new()];
    }
    (lo..=hi).powerset().collect()
}

fn nonempty_subsets(lo: usize, hi: usize) -> Vec<Vec<usize>> {
    subsets(lo, hi).into_iter().filter(|s| !s.is_empty()).collect()
}

fn concat(parts: &[&[usize]]) -> Vec<usize> {
    parts.iter().flat_map(|p| p.iter().copied()).collect()
}

/// `None` when `l = 0`.
pub fn suspect_index(x: &AdcMorphism) -> Result<Option<usize>, SuspectError> {
    let t = TypedSimplex::new(x)?;
    if t.l == 0 {
        return Ok(None);
    }
    Ok(Some(index_of(&t)))
}

fn index_of(t: &TypedSimplex) -> usize {
    let (k, l) = (t.k, t.l);
    (0..=k)
        .find(|&r| {
            let before = if r == 0 { Vec::new() } else { nonempty_subsets(0, r - 1) };
            let across = nonempty_subsets(r, k).iter().all(|a| {
                before.iter().all(|a1| {
                    nonempty_subsets(0, l).iter().all(|b| t.vanishes(&concat(&[a1, a]), &concat(&[&[0], b])))
                })
            });
            let below = nonempty_subsets(r, k)
                .iter()
                .all(|a| nonempty_subsets(0, l).iter().filter(|b| b.len() >= 2).all(|b| t.vanishes(a, b)));
            across && below
        })
        .unwrap_or(k + 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SuspectVerdict {
    /// The vanishing condition on `y(- ⊗ [0])`.
    pub by_values: bool,
    /// Degeneracy of `y(- ⊗ [0])` at `r-1`.
    pub by_degeneracy: bool,
}

impl SuspectVerdict {
    pub fn agree(&self) -> bool {
        self.by_values == self.by_degeneracy
    }
}

/// `y(- ⊗ [0]): O[k] -> C`.
pub fn bottom_row(t: &TypedSimplex) -> AdcMorphism {
    let matrices = (0..t.x.degrees() - 1)
        .map(|q| {
            let cols: Vec<Vec<i64>> = simplices(t.k as i64, q).iter().map(|a| t.value(a, &[0])).collect();
            Matrix::from_columns(t.x.matrix(q + 1).rows(), &cols)
        })
        .collect();
    AdcMorphism::new(matrices)
}

/// Both characterizations of being suspect; `false` unless the index `r` satisfies `1 <= r <= k`.
pub fn is_suspect(y: &AdcMorphism, ops: &mut Operators) -> Result<SuspectVerdict, SuspectError> {
    let t = TypedSimplex::new(y)?;
    let Some(r) = suspect_index(y)? else { return Ok(SuspectVerdict { by_values: false, by_degeneracy: false }) };
    if r == 0 || r > t.k {
        return Ok(SuspectVerdict { by_values: false, by_degeneracy: false });
    }
    let before = if r >= 2 { subsets(0, r - 2) } else { vec![Vec::new()] };
    let by_values = before
        .iter()
        .all(|a1| subsets(r + 1, t.k).iter().all(|a| t.vanishes(&concat(&[a1, &[r - 1, r], a]), &[0])));
    let by_degeneracy = ops.is_degenerate_at(&bottom_row(&t), t.k, r - 1);
    Ok(SuspectVerdict { by_values, by_degeneracy })
}

/// The vanishing criterion for degeneracy at `i`; `i = k` never qualifies.
pub fn criterion_degenerate_at(t: &TypedSimplex, i: usize) -> bool {
    let (k, l) = (t.k, t.l);
    if i < k {
        let before = if i == 0 { vec![Vec::new()] } else { subsets(0, i - 1) };
        before.iter().all(|a1| {
            subsets(i + 2, k).iter().all(|a| {
                let a = concat(&[a1, &[i, i + 1], a]);
                nonempty_subsets(0, l).iter().all(|b| t.vanishes(&a, b))
            })
        })
    } else if i > k && i < t.m {
        let j = i - k - 1;
        let before = if j == 0 { vec![Vec::new()] } else { subsets(0, j - 1) };
        nonempty_subsets(0, k).iter().all(|a| {
            before.iter().all(|b1| subsets(j + 2, l).iter().all(|b| t.vanishes(a, &concat(&[b1, &[j, j + 1], b]))))
        })
    } else {
        false
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegeneracyComparison {
    pub structural: Vec<usize>,
    pub criterion: Vec<usize>,
}

impl DegeneracyComparison {
    pub fn agree(&self) -> bool {
        self.structural == self.criterion
    }
}

pub fn degeneracy_comparison(t: &TypedSimplex, ops: &mut Operators) -> DegeneracyComparison {
    DegeneracyComparison {
        structural: (0..t.m).filter(|&i| ops.is_degenerate_at(t.x, t.m, i)).collect(),
        criterion: (0..t.m).filter(|&i| criterion_degenerate_at(t, i)).collect(),
    }
}

/// One basis element `A ⊗ B` of `O[k+1] ⊗ O[l]°` with the clause that fixes its value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParentValue {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub clause: u8,
    pub value: Vec<i64>,
}

/// `s^{r-1}` applied to a vertex list: entries `>= r` drop by one.
fn collapse(a: &[usize], r: usize) -> Vec<usize> {
    a.iter().map(|&v| if v >= r { v - 1 } else { v }).collect()
}

fn add(u: Vec<i64>, v: Vec<i64>) -> Vec<i64> {
    let n = u.len().max(v.len());
    (0..n).map(|i| u.get(i).unwrap_or(&0) + v.get(i).unwrap_or(&0)).collect()
}

/// Equality of chains, reading missing entries as zero.
fn same_chain(u: &[i64], v: &[i64]) -> bool {
    (0..u.len().max(v.len())).all(|i| u.get(i).unwrap_or(&0) == v.get(i).unwrap_or(&0))
}

/// Values of the parent `x̃` over every basis element, computed from `x` and `r`.
///
/// Each clause is tested by its own predicate, so overlaps and gaps are reported.
pub fn parent_values(t: &TypedSimplex, r: usize) -> Result<Vec<ParentValue>, SuspectError> {
    if r == 0 {
        return Err(SuspectError::IndexZero);
    }
    let dropped = mutation::current().drop_parent_clause;
    let (k1, l) = (t.k + 1, t.l);
    let mut out = Vec::new();
    for qa in 0..=k1 {
        for a in simplices(k1 as i64, qa) {
            for qb in 0..=l {
                for b in simplices(l as i64, qb) {
                    let has_r = a.contains(&r);
                    let min = a[0];
                    let max = a[a.len() - 1];
                    let single = b.len() == 1;
                    let clauses = [
                        !has_r,
                        has_r && min == r && single,
                        has_r && max == r && a.len() >= 2 && !single,
                        has_r && max == r && a.len() >= 2 && single,
                        has_r && min < r && r < max && single,
                        has_r && max > r && !single,
                        a == [r] && !single,
                    ];
                    let hits: Vec<u8> = (1..=7u8).filter(|&c| clauses[c as usize - 1]).collect();
                    if hits.len() != 1 {
                        return Err(SuspectError::Coverage(format!("{a:?}⊗{b:?}"), hits.len()));
                    }
                    let clause = hits[0];
                    let head = &a[..a.len() - 1];
                    let value = match clause {
                        1 => {
                            let lowered: Vec<usize> = a.iter().map(|&v| if v > r { v - 1 } else { v }).collect();
                            t.value(&lowered, &b)
                        }
                        2 | 5 => t.value(&collapse(&a, r), &[0]),
                        3 => t.value(head, &concat(&[&[0], &b])),
                        4 => add(t.value(head, &[0, b[0]]), t.value(&concat(&[head, &[r - 1]]), &[0])),
                        _ => Vec::new(),
                    };
                    let value = if dropped == Some(clause) { Vec::new() } else { value };
                    out.push(ParentValue { a: a.clone(), b, clause, value });
                }
            }
        }
    }
    Ok(out)
}

/// `x̃` as a map `O[k+1] ⊗ O[l]° -> C` assembled from [`parent_values`].
fn assemble(values: &[ParentValue], k1: usize, l: usize, c_ranks: &[usize]) -> AdcMorphism {
    let left: Vec<usize> = (0..=k1).map(|q| simplices(k1 as i64, q).len()).collect();
    let right: Vec<usize> = (0..=l).map(|q| simplices(l as i64, q).len()).collect();
    let top = (k1 + l).max(c_ranks.len().saturating_sub(1));
    let mut matrices: Vec<Matrix> = (0..=top)
        .map(|q| {
            let cols: usize = (0..=q).map(|p| left.get(p).copied().unwrap_or(0) * right.get(q - p).copied().unwrap_or(0)).sum();
            Matrix::zeros(c_ranks.get(q).copied().unwrap_or(0), cols)
        })
        .collect();
    for v in values {
        let (qa, qb) = (v.a.len() - 1, v.b.len() - 1);
        let col = crate::complex::tensor_index(&left, &right, qa + qb, qa, simplex_rank(k1, &v.a), simplex_rank(l, &v.b));
        let mut column = v.value.clone();
        column.resize(matrices[qa + qb].rows(), 0);
        matrices[qa + qb].set_column(col, &column);
    }
    AdcMorphism::new(matrices)
}

#[derive(Clone, Debug)]
pub struct Parent {
    /// `x̃: O[k+1] ⊗ O[l]° -> C`.
    pub tensor: AdcMorphism,
    /// The `(m+1)`-simplex of `N(νΣC)`.
    pub simplex: AdcMorphism,
    pub r: usize,
}

/// The parent of a nondegenerate non-suspect simplex; `c` is the unsuspended target.
pub fn parent(x: &AdcMorphism, c: &BasedComplex, ops: &mut Operators) -> Result<Parent, SuspectError> {
    let t = TypedSimplex::new(x)?;
    let r = suspect_index(x)?.ok_or(SuspectError::NoIndex)?;
    if is_suspect(x, ops)?.by_values {
        return Err(SuspectError::Suspect);
    }
    let values = parent_values(&t, r)?;
    let tensor = assemble(&values, t.k + 1, t.l, &c.ranks());
    let source = crate::complex::tensor_of_orientals(t.k as i64 + 1, t.l as i64);
    let report = validate_morphism(&source, c, &tensor).map_err(|e| SuspectError::NotChainMap(e.to_string()))?;
    if !report.is_valid() {
        return Err(SuspectError::NotChainMap(report.messages().join("; ")));
    }
    let simplex = lift_through_phi(t.k + 1, t.l, &tensor);
    Ok(Parent { tensor, simplex, r })
}

#[derive(Clone, Debug, Serialize)]
pub struct EnforcedCheck {
    pub holds: bool,
    /// Clauses with at least one mismatching basis element.
    pub failing_clauses: Vec<u8>,
}

/// Whether a suspect `y` of index `r` agrees with the parent formulas evaluated on `d_r y`.
pub fn enforced_values_check(y: &AdcMorphism, ops: &mut Operators) -> Result<EnforcedCheck, SuspectError> {
    let r = suspect_index(y)?.ok_or(SuspectError::NoIndex)?;
    enforced_values_check_at(y, r, ops)
}

/// [`enforced_values_check`] with the index supplied.
pub fn enforced_values_check_at(y: &AdcMorphism, r: usize, ops: &mut Operators) -> Result<EnforcedCheck, SuspectError> {
    let ty = TypedSimplex::new(y)?;
    let face = ops.face(y, ty.m, r);
    let tx = TypedSimplex::new(&face)?;
    let mut failing = Vec::new();
    for v in parent_values(&tx, r)? {
        if !same_chain(&ty.value(&v.a, &v.b), &v.value) && !failing.contains(&v.clause) {
            failing.push(v.clause);
        }
    }
    failing.sort();
    Ok(EnforcedCheck { holds: failing.is_empty(), failing_clauses: failing })
}

/// Exceptions to the face classification of a nondegenerate suspect `y`.
pub fn face_exceptions(y: &AdcMorphism, ops: &mut Operators) -> Result<Vec<String>, SuspectError> {
    let ty = TypedSimplex::new(y)?;
    let r = suspect_index(y)?.ok_or(SuspectError::NoIndex)?;
    let kk = ty.k;
    let mut out = Vec::new();
    for i in 0..=ty.m {
        let f = ops.face(y, ty.m, i);
        let nondeg = !(0..ty.m - 1).any(|j| ops.is_degenerate_at(&f, ty.m - 1, j));
        if i == r {
            if !nondeg {
                out.push(format!("d_{i} is degenerate"));
                continue;
            }
            let ok = TypedSimplex::new(&f).is_ok()
                && type_of(&f) as usize == kk - 1
                && suspect_index(&f)? == Some(r)
                && !is_suspect(&f, ops)?.by_values;
            if !ok {
                out.push(format!("d_{i} is not a non-suspect face of type {} and index {r}", kk - 1));
            }
            continue;
        }
        if !nondeg {
            continue;
        }
        let ok = if i < r {
            matches!(suspect_index(&f), Ok(Some(s)) if s < r)
        } else if i <= kk {
            match suspect_index(&f) {
                Ok(Some(s)) if s < r => true,
                Ok(Some(s)) if s == r => is_suspect(&f, ops)?.by_values,
                _ => false,
            }
        } else {
            TypedSimplex::new(&f).is_ok() && type_of(&f) as usize == kk
        };
        if !ok {
            out.push(format!("d_{i} breaks the face classification"));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct SuspectProfile {
    pub id: usize,
    pub dim: usize,
    pub simplex_type: i64,
    /// `None` when undefined.
    pub suspect_index: Option<usize>,
    pub suspect: Option<bool>,
    pub degenerate_at: Vec<usize>,
}

/// One profile per nondegenerate simplex of a nerve of a suspension.
pub fn profiles(nerve: &mut crate::nerve::Nerve) -> Vec<SuspectProfile> {
    let ids: Vec<usize> = (0..nerve.msset().len()).collect();
    let mut ops = Operators::default();
    ids.into_iter()
        .map(|id| {
            let x = nerve.morphism(id).clone();
            let dim = nerve.msset().dim(id);
            let (suspect_index, suspect) = match suspect_index(&x) {
                Ok(Some(r)) => (Some(r), is_suspect(&x, &mut ops).ok().map(|v| v.by_values)),
                _ => (None, None),
            };
            SuspectProfile {
                id,
                dim,
                simplex_type: type_of(&x),
                suspect_index,
                suspect,
                degenerate_at: (0..dim).filter(|&i| ops.is_degenerate_at(&x, dim, i)).collect(),
            }
        })
        .collect()
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BijectionReport {
    pub m: usize,
    pub suspect_count: usize,
    pub non_suspect_count: usize,
    /// Nondegenerate simplices of dimension `m+1` outside the suspension image.
    pub complement_count: usize,
    pub problems: Vec<String>,
}

impl BijectionReport {
    pub fn holds(&self) -> bool {
        self.problems.is_empty() && self.suspect_count == self.non_suspect_count
    }
}

/// The `r`-th face against the parent, between suspect `(m+1)`-simplices and non-suspect `m`-simplices.
pub fn verify_bijection(c: &BasedComplex, m: usize, cap: u64) -> Result<BijectionReport, SuspectError> {
    let base = rs_nerve(c, m, cap)?;
    let target = rs_nerve(&suspend(c), m + 1, cap)?;
    let cmp = comparison_from(&base, target)?;
    let nerve = &cmp.target;
    let mut ops = Operators::default();
    let mut report = BijectionReport { m, ..Default::default() };
    let in_image: std::collections::HashSet<usize> = cmp.map.images.iter().map(|r| r.id).collect();
    let ms = nerve.msset();

    for id in ms.ids_of_dim(m + 1) {
        let y = nerve.morphism(id);
        let k = type_of(y);
        if in_image.contains(&id) {
            if k != m as i64 {
                report.problems.push(format!("image simplex {id} has type {k}"));
            }
            continue;
        }
        report.complement_count += 1;
        let ok = (0..m as i64).contains(&k) && matches!(suspect_index(y), Ok(Some(r)) if r >= 1 && r <= k as usize + 1);
        if !ok {
            report.problems.push(format!("complement simplex {id} has type {k} and index {:?}", suspect_index(y)));
        }
    }

    let mut parents: HashMap<Vec<i64>, usize> = HashMap::new();
    for id in ms.ids_of_dim(m) {
        let x = nerve.morphism(id);
        let Ok(t) = TypedSimplex::new(x) else { continue };
        if t.l == 0 {
            continue;
        }
        let r = index_of(&t);
        if r == 0 {
            report.problems.push(format!("nondegenerate simplex {id} has index 0"));
            continue;
        }
        if is_suspect(x, &mut ops)?.by_values {
            continue;
        }
        report.non_suspect_count += 1;
        match parent(x, c, &mut ops) {
            Err(e) => report.problems.push(format!("parent of {id}: {e}")),
            Ok(p) => {
                if &ops.face(&p.simplex, m + 1, r) != x {
                    report.problems.push(format!("d_{r} of the parent of {id} differs"));
                }
                match nerve.normal_form_of(m + 1, &p.simplex) {
                    Some(nf) if !nf.is_degenerate() => {
                        parents.insert(p.simplex.encoding(), id);
                    }
                    Some(_) => report.problems.push(format!("parent of {id} is degenerate")),
                    None => report.problems.push(format!("parent of {id} is not a simplex")),
                }
                if type_of(&p.simplex) != t.k as i64 + 1
                    || suspect_index(&p.simplex)? != Some(r)
                    || !is_suspect(&p.simplex, &mut ops)?.by_values
                {
                    report.problems.push(format!("parent of {id} has the wrong type or index"));
                }
            }
        }
    }

    for id in ms.ids_of_dim(m + 1) {
        let y = nerve.morphism(id);
        let Ok(t) = TypedSimplex::new(y) else { continue };
        if t.l == 0 {
            continue;
        }
        let v = is_suspect(y, &mut ops)?;
        if !v.agree() {
            report.problems.push(format!("suspect characterizations disagree on {id}"));
        }
        if !v.by_values {
            continue;
        }
        report.suspect_count += 1;
        if !parents.contains_key(&y.encoding()) {
            report.problems.push(format!("suspect simplex {id} is not a parent"));
        }
        let e = enforced_values_check(y, &mut ops)?;
        if !e.holds {
            report.problems.push(format!("suspect simplex {id} breaks clauses {:?}", e.failing_clauses));
        }
        for f in face_exceptions(y, &mut ops)? {
            report.problems.push(format!("suspect simplex {id}: {f}"));
        }
    }

    for id in (0..ms.len()).filter(|&id| ms.dim(id) <= m + 1) {
        let x = nerve.morphism(id);
        if let Ok(t) = TypedSimplex::new(x) {
            let d = degeneracy_comparison(&t, &mut ops);
            if !d.agree() {
                report.problems.push(format!("degeneracy criterion disagrees on {id}: {:?} vs {:?}", d.structural, d.criterion));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::DEFAULT_CAP;
    use crate::oriental::oriental;

    #[test]
    fn index_of_globe_cell() {
        // X on O[2] with vertices ⊥, ⊤, ⊤ and [0]⊗[01] ↦ [01].
        let n = rs_nerve(&suspend(&oriental(1)), 2, DEFAULT_CAP).unwrap();
        let mut found = false;
        for id in n.msset().ids_of_dim(2) {
            let x = n.morphism(id);
            let Ok(t) = TypedSimplex::new(x) else { continue };
            if t.k == 0 && t.value(&[0], &[0, 1]) == vec![1] {
                assert_eq!(suspect_index(x).unwrap(), Some(1));
                found = true;
            }
        }
        assert!(found);
    }

    #[test]
    fn totally_degenerate_rejected() {
        let x = crate::hom::constant_pole(2, &oriental(1), false);
        assert_eq!(suspect_index(&x), Err(SuspectError::TotallyDegenerate));
    }

    #[test]
    fn subsets_enumeration() {
        assert_eq!(subsets(2, 1), vec![Vec::<usize>::new()]);
        assert_eq!(nonempty_subsets(0, 1).len(), 3);
    }

    #[test]
    fn bijection_interval() {
        for m in 0..=3 {
            let r = verify_bijection(&oriental(1), m, DEFAULT_CAP).unwrap();
            assert!(r.holds(), "m = {m}: {:?}", r.problems);
        }
        // The target has two nondegenerate simplices per dimension; the suspension of the
        // nerve of the interval has 2, 2, 1, 0, ... of them.
        let from_suspension = [2, 2, 1, 0, 0];
        for m in 0..=3 {
            let r = verify_bijection(&oriental(1), m, DEFAULT_CAP).unwrap();
            assert_eq!(r.complement_count, 2 - from_suspension[m + 1]);
        }
    }

    #[test]
    fn bijection_point_is_trivial() {
        for m in 0..=3 {
            let r = verify_bijection(&oriental(0), m, DEFAULT_CAP).unwrap();
            assert!(r.holds());
            assert_eq!(r.suspect_count, 0);
        }
    }

    #[test]
    fn tampered_suspect_fails_enforcement() {
        let n = rs_nerve(&suspend(&oriental(1)), 3, DEFAULT_CAP).unwrap();
        let mut ops = Operators::default();
        let mut checked = 0;
        for id in n.msset().ids_of_dim(3) {
            let y = n.morphism(id);
            let Ok(t) = TypedSimplex::new(y) else { continue };
            if t.l == 0 || !is_suspect(y, &mut ops).unwrap().by_values {
                continue;
            }
            assert!(enforced_values_check(y, &mut ops).unwrap().holds);
            let r = suspect_index(y).unwrap().unwrap();
            // Put a nonzero value on a basis element governed by the vanishing clauses.
            let values = parent_values(&TypedSimplex::new(&ops.face(y, 3, r)).unwrap(), r).unwrap();
            let Some(v) = values.iter().find(|v| v.clause == 6 || v.clause == 7) else { continue };
            let s: Vec<usize> = v.a.iter().copied().chain(v.b.iter().map(|b| b + t.k + 1)).collect();
            let q = s.len() - 1;
            let mut bad = y.clone();
            bad.matrices_mut()[q].add_to(0, simplex_rank(3, &s), 1);
            let e = enforced_values_check_at(&bad, r, &mut ops).unwrap();
            assert!(!e.holds);
            checked += 1;
        }
        assert!(checked > 0);
    }
}
