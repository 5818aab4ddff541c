//! Enumeration of augmented directed chain maps between based complexes.

use crate::complex::{phi_map, suspend, suspend_morphism, tensor_of_orientals, AdcMorphism, BasedComplex};
use crate::lp::{positive_row_weights, recession_cone_trivial};
use crate::matrix::Matrix;
use crate::oriental::oriental;
use serde::Serialize;
use std::collections::{HashMap, HashSet};
use std::rc::Rc;

pub const DEFAULT_CAP: u64 = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonnegSolutions {
    pub solutions: Vec<Vec<i64>>,
    /// The recession cone `{x >= 0 : A x = 0}` is trivial.
    pub cone_trivial: bool,
    /// Some solution had coordinate sum above the cap and was dropped.
    pub truncated: bool,
}

impl NonnegSolutions {
    pub fn complete(&self) -> bool {
        self.cone_trivial && !self.truncated
    }
}

/// Reusable solver for `A x = b, x >= 0` with a fixed matrix.
#[derive(Clone, Debug)]
pub struct NonnegSolver {
    a: Matrix,
    cone_trivial: bool,
    /// `wᵀA` for positive row weights `w`, when the cone is trivial.
    weights: Option<(Vec<i64>, Vec<i64>)>,
}

impl NonnegSolver {
    pub fn new(a: Matrix) -> Self {
        let cone_trivial = recession_cone_trivial(&a);
        let weights = if cone_trivial {
            let w = positive_row_weights(&a).expect("a trivial recession cone admits positive row weights");
            let c = a.vec_mul(&w);
            Some((w, c))
        } else {
            None
        };
        NonnegSolver { a, cone_trivial, weights }
    }

    pub fn solve(&self, b: &[i64], cap: u64) -> NonnegSolutions {
        let n = self.a.cols();
        assert_eq!(b.len(), self.a.rows(), "right-hand side length mismatch");
        let mut out = Vec::new();
        let mut truncated = false;
        let columns: Vec<Vec<i64>> = (0..n).map(|j| self.a.column(j)).collect();
        match &self.weights {
            Some((w, c)) => {
                let budget: i64 = w.iter().zip(b).map(|(x, y)| x * y).sum();
                if budget >= 0 {
                    let mut search = Dfs { columns: &columns, costs: c.clone(), exact: true, out: &mut out };
                    search.run(0, &mut vec![0; n], &mut b.to_vec(), budget);
                }
                let before = out.len();
                out.retain(|x| x.iter().sum::<i64>() as u64 <= cap);
                truncated = out.len() != before;
            }
            None => {
                let mut search = Dfs { columns: &columns, costs: vec![1; n], exact: false, out: &mut out };
                search.run(0, &mut vec![0; n], &mut b.to_vec(), cap as i64);
            }
        }
        out.sort();
        NonnegSolutions { solutions: out, cone_trivial: self.cone_trivial, truncated }
    }
}

struct Dfs<'a> {
    columns: &'a [Vec<i64>],
    costs: Vec<i64>,
    /// When true the budget must be used up exactly.
    exact: bool,
    out: &'a mut Vec<Vec<i64>>,
}

impl Dfs<'_> {
    fn run(&mut self, pos: usize, x: &mut Vec<i64>, resid: &mut Vec<i64>, budget: i64) {
        let n = self.columns.len();
        if pos == n {
            if resid.iter().all(|&r| r == 0) && (!self.exact || budget == 0) {
                self.out.push(x.clone());
            }
            return;
        }
        // Interval pruning: each remaining x_j lies in [0, budget / cost_j].
        for (i, &r) in resid.iter().enumerate() {
            let (mut lo, mut hi) = (0i64, 0i64);
            for j in pos..n {
                let a = self.columns[j][i];
                let ub = budget / self.costs[j];
                if a > 0 {
                    hi += a * ub;
                } else {
                    lo += a * ub;
                }
            }
            if r < lo || r > hi {
                return;
            }
        }
        let ub = budget / self.costs[pos];
        for v in 0..=ub {
            x[pos] = v;
            if v > 0 {
                for (r, a) in resid.iter_mut().zip(&self.columns[pos]) {
                    *r -= a;
                }
            }
            self.run(pos + 1, x, resid, budget - v * self.costs[pos]);
        }
        for (r, a) in resid.iter_mut().zip(&self.columns[pos]) {
            *r += ub * a;
        }
        x[pos] = 0;
    }
}

/// All `x >= 0` with `A x = b` and coordinate sum at most `cap`.
pub fn solve_nonneg(a: &Matrix, b: &[i64], cap: u64) -> NonnegSolutions {
    NonnegSolver::new(a.clone()).solve(b, cap)
}

#[derive(Clone, Debug, Serialize)]
pub struct HomEnumeration {
    pub morphisms: Vec<AdcMorphism>,
    pub complete: bool,
    pub cap_used: u64,
}

/// Hom search into a fixed target, caching the per-degree solvers and solutions.
pub struct HomSearch {
    target: BasedComplex,
    /// `solvers[0]` handles degree 0 (augmentation row); `solvers[q]` solves `∂x = b` for `x` in degree `q`.
    solvers: Vec<NonnegSolver>,
    cache: HashMap<(usize, Vec<i64>), Rc<NonnegSolutions>>,
    /// Set once some generator has unboundedly many images; the search then stops.
    unbounded: bool,
}

impl HomSearch {
    pub fn new(target: &BasedComplex) -> Self {
        HomSearch { target: target.clone(), solvers: Vec::new(), cache: HashMap::new(), unbounded: false }
    }

    pub fn target(&self) -> &BasedComplex {
        &self.target
    }

    fn solver(&mut self, q: usize) -> &NonnegSolver {
        while self.solvers.len() <= q {
            let d = self.solvers.len();
            let a = if d == 0 {
                Matrix::from_rows(&[self.target.augmentation().to_vec()], self.target.rank(0)).expect("augmentation row")
            } else {
                self.target.differential(d - 1)
            };
            self.solvers.push(NonnegSolver::new(a));
        }
        &self.solvers[q]
    }

    /// Cached nonnegative solutions of `∂x = b` in degree `q` (the augmentation equation when `q = 0`).
    pub fn solutions(&mut self, q: usize, b: Vec<i64>, cap: u64) -> Rc<NonnegSolutions> {
        if let Some(s) = self.cache.get(&(q, b.clone())) {
            return s.clone();
        }
        let s = Rc::new(self.solver(q).solve(&b, cap));
        self.cache.insert((q, b), s.clone());
        s
    }

    /// All morphisms `source -> target`, canonically ordered and duplicate-free.
    ///
    /// If some generator turns out to have unboundedly many images the search stops there and
    /// returns what it has, flagged incomplete.
    pub fn homs_from(&mut self, source: &BasedComplex, cap: u64) -> HomEnumeration {
        let gens: Vec<(usize, usize)> =
            (0..=source.max_degree()).flat_map(|q| (0..source.rank(q)).map(move |j| (q, j))).collect();
        let mut current = AdcMorphism::zero(source, &self.target);
        let mut found = Vec::new();
        let mut complete = true;
        self.unbounded = false;
        self.dfs(source, &gens, 0, &mut current, &mut found, &mut complete, cap);
        found.sort_by_key(|f: &AdcMorphism| f.encoding());
        found.dedup();
        HomEnumeration { morphisms: found, complete, cap_used: cap }
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &mut self,
        source: &BasedComplex,
        gens: &[(usize, usize)],
        pos: usize,
        current: &mut AdcMorphism,
        found: &mut Vec<AdcMorphism>,
        complete: &mut bool,
        cap: u64,
    ) {
        if self.unbounded {
            return;
        }
        let Some(&(q, j)) = gens.get(pos) else {
            found.push(current.clone());
            return;
        };
        let b = if q == 0 {
            vec![source.augmentation()[j]]
        } else {
            let boundary = source.differential(q - 1).column(j);
            current.matrix(q - 1).mul_vec(&boundary)
        };
        let sols = self.solutions(q, b, cap);
        if !sols.complete() {
            *complete = false;
        }
        if !sols.cone_trivial {
            self.unbounded = true;
            return;
        }
        for x in sols.solutions.iter() {
            current.matrices_mut()[q].set_column(j, x);
            self.dfs(source, gens, pos + 1, current, found, complete, cap);
        }
        let zero = vec![0; self.target.rank(q)];
        current.matrices_mut()[q].set_column(j, &zero);
    }
}

pub fn enumerate_homs(source: &BasedComplex, target: &BasedComplex, cap: u64) -> HomEnumeration {
    HomSearch::new(target).homs_from(source, cap)
}

/// The constant map `O[m] -> ΣC` at a pole.
pub fn constant_pole(m: usize, c: &BasedComplex, top: bool) -> AdcMorphism {
    let src = oriental(m as i64);
    let sc = suspend(c);
    let mut f = AdcMorphism::zero(&src, &sc);
    let row = usize::from(top);
    for j in 0..src.rank(0) {
        f.matrices_mut()[0].set(row, j, 1);
    }
    f
}

/// `Σx̂ ∘ φ`: the simplex of `N(ΣC)` determined by `x̂: O[k] ⊗ O[l]° -> C`.
pub fn lift_through_phi(k: usize, l: usize, xhat: &AdcMorphism) -> AdcMorphism {
    suspend_morphism(xhat).after(&phi_map(k, l))
}

#[derive(Clone, Debug, Serialize)]
pub struct HomBijection {
    /// `None` when some enumeration was incomplete.
    pub bijective: Option<bool>,
    pub left_count: usize,
    pub right_count: usize,
    pub details: Vec<String>,
}

/// Compares `⊔_{k+1+l=m} adCh(O[k] ⊗ O[l]°, C)` with `adCh(O[m], ΣC)` through φ.
pub fn hom_bijection_check(c: &BasedComplex, m: usize, cap: u64) -> HomBijection {
    let sc = suspend(c);
    let mut details = Vec::new();
    let mut complete = true;
    let right = enumerate_homs(&oriental(m as i64), &sc, cap);
    complete &= right.complete;
    let mut images: Vec<(i64, AdcMorphism)> = vec![(-1, constant_pole(m, c, true)), (m as i64, constant_pole(m, c, false))];
    let mut search = HomSearch::new(c);
    for k in 0..m {
        let l = m - 1 - k;
        let left = search.homs_from(&tensor_of_orientals(k as i64, l as i64), cap);
        complete &= left.complete;
        for xhat in &left.morphisms {
            images.push((k as i64, lift_through_phi(k, l, xhat)));
        }
    }
    let right_set: HashSet<Vec<i64>> = right.morphisms.iter().map(|f| f.encoding()).collect();
    let mut seen = HashSet::new();
    let mut ok = true;
    for (k, img) in &images {
        let enc = img.encoding();
        if !seen.insert(enc.clone()) {
            ok = false;
            details.push(format!("two summands of type {k} collide"));
        }
        if !right_set.contains(&enc) {
            ok = false;
            details.push(format!("image of a type-{k} map is not a morphism O[{m}] -> ΣC"));
        }
        let bottoms = (0..=m).filter(|&i| img.matrix(0).get(0, i) == 1).count() as i64;
        if bottoms - 1 != *k {
            ok = false;
            details.push(format!("image of a type-{k} map has {bottoms} bottom vertices"));
        }
    }
    if seen.len() != right_set.len() {
        ok = false;
        details.push(format!("{} images against {} simplices", seen.len(), right_set.len()));
    }
    HomBijection {
        bijective: complete.then_some(ok),
        left_count: images.len(),
        right_count: right.morphisms.len(),
        details,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>], cols: usize) -> Matrix {
        Matrix::from_rows(rows, cols).unwrap()
    }

    #[test]
    fn solve_examples() {
        let s = solve_nonneg(&m(&[vec![1, 1]], 2), &[1], 64);
        assert_eq!(s.solutions, vec![vec![0, 1], vec![1, 0]]);
        assert!(s.complete());
        let s = solve_nonneg(&m(&[vec![1, -1]], 2), &[0], 5);
        assert!(!s.complete());
        assert_eq!(s.solutions.len(), 3);
        assert!(s.solutions.contains(&vec![1, 1]));
        let s = solve_nonneg(&Matrix::zeros(0, 2), &[], 1);
        assert!(!s.complete());
        assert_eq!(s.solutions.len(), 3);
    }

    #[test]
    fn cap_truncation_is_flagged() {
        let s = solve_nonneg(&m(&[vec![1]], 1), &[5], 3);
        assert!(s.cone_trivial);
        assert!(s.truncated);
        assert!(s.solutions.is_empty());
    }

    #[test]
    fn small_hom_counts() {
        let e = enumerate_homs(&oriental(0), &oriental(1), DEFAULT_CAP);
        assert_eq!(e.morphisms.len(), 2);
        assert!(e.complete);
        for mm in 0..5 {
            assert_eq!(enumerate_homs(&oriental(mm), &oriental(1), DEFAULT_CAP).morphisms.len(), mm as usize + 2);
        }
    }

    #[test]
    fn bijection_small() {
        let r = hom_bijection_check(&oriental(0), 1, DEFAULT_CAP);
        assert_eq!(r.bijective, Some(true));
        assert_eq!(r.right_count, 3);
        let r = hom_bijection_check(&BasedComplex::empty(), 1, DEFAULT_CAP);
        assert_eq!(r.bijective, Some(true));
        assert_eq!(r.right_count, 2);
        assert_eq!(hom_bijection_check(&oriental(1), 2, DEFAULT_CAP).bijective, Some(true));
    }
}
