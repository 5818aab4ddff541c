//! Steiner tables: the cells of the ω-category realizing a based complex.

use crate::complex::{suspend, total_dual, BasedComplex, StructuralError};
use crate::hom::HomSearch;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};
use thiserror::Error;

/// A two-row table `(x⁻_0 … x⁻_q / x⁺_0 … x⁺_q)` of chains.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SteinerTable {
    pub minus: Vec<Vec<i64>>,
    pub plus: Vec<Vec<i64>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NuError {
    #[error("cells are not composable: truncations differ in degree {degree}")]
    NotComposable { degree: usize },
    #[error("degree {requested} is out of range for a cell of dimension {dimension}")]
    OutOfRange { requested: usize, dimension: usize },
    #[error("cells have different dimensions {0} and {1}")]
    DimensionMismatch(usize, usize),
}

impl SteinerTable {
    pub fn dimension(&self) -> usize {
        self.minus.len() - 1
    }

    /// The 0-cell at a degree-0 generator.
    pub fn point(c: &BasedComplex, index: usize) -> Self {
        let mut v = vec![0; c.rank(0)];
        v[index] = 1;
        SteinerTable { minus: vec![v.clone()], plus: vec![v] }
    }

    pub fn source(&self, q: usize) -> Result<SteinerTable, NuError> {
        self.truncate(q, false)
    }

    pub fn target(&self, q: usize) -> Result<SteinerTable, NuError> {
        self.truncate(q, true)
    }

    fn truncate(&self, q: usize, plus: bool) -> Result<SteinerTable, NuError> {
        if q > self.dimension() {
            return Err(NuError::OutOfRange { requested: q, dimension: self.dimension() });
        }
        let top = if plus { self.plus[q].clone() } else { self.minus[q].clone() };
        let mut minus = self.minus[..q].to_vec();
        let mut plus_row = self.plus[..q].to_vec();
        minus.push(top.clone());
        plus_row.push(top);
        Ok(SteinerTable { minus, plus: plus_row })
    }

    /// The identity cell of dimension `q` on this cell; `ranks` gives the chain lengths to pad with.
    pub fn identity(&self, q: usize, ranks: &[usize]) -> Result<SteinerTable, NuError> {
        if q < self.dimension() {
            return Err(NuError::OutOfRange { requested: q, dimension: self.dimension() });
        }
        let mut t = self.clone();
        for p in self.dimension() + 1..=q {
            let z = vec![0; ranks.get(p).copied().unwrap_or(0)];
            t.minus.push(z.clone());
            t.plus.push(z);
        }
        Ok(t)
    }

    /// `self ∗_p other`, defined when `s_p(self) = t_p(other)`.
    pub fn compose(&self, other: &SteinerTable, p: usize) -> Result<SteinerTable, NuError> {
        let q = self.dimension();
        if other.dimension() != q {
            return Err(NuError::DimensionMismatch(q, other.dimension()));
        }
        if p >= q {
            return Err(NuError::OutOfRange { requested: p, dimension: q });
        }
        let s = self.source(p)?;
        let t = other.target(p)?;
        if let Some(degree) = (0..=p).find(|&d| s.minus[d] != t.minus[d] || s.plus[d] != t.plus[d]) {
            return Err(NuError::NotComposable { degree });
        }
        let add = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<i64>>();
        let mut minus = self.minus[..p].to_vec();
        let mut plus = self.plus[..p].to_vec();
        minus.push(other.minus[p].clone());
        plus.push(self.plus[p].clone());
        for d in p + 1..=q {
            minus.push(add(&self.minus[d], &other.minus[d]));
            plus.push(add(&self.plus[d], &other.plus[d]));
        }
        Ok(SteinerTable { minus, plus })
    }

    pub fn is_identity(&self) -> bool {
        let q = self.dimension();
        q > 0 && self.minus[q].iter().all(|&v| v == 0)
    }

    /// Exchanges the rows in every degree.
    pub fn swapped(&self) -> SteinerTable {
        SteinerTable { minus: self.plus.clone(), plus: self.minus.clone() }
    }
}

pub fn validate_table(c: &BasedComplex, t: &SteinerTable) -> Result<bool, StructuralError> {
    if t.minus.len() != t.plus.len() || t.minus.is_empty() {
        return Err(StructuralError::ChainLength { degree: 0, expected: t.minus.len(), found: t.plus.len() });
    }
    for (p, (a, b)) in t.minus.iter().zip(&t.plus).enumerate() {
        for v in [a, b] {
            if v.len() != c.rank(p) {
                return Err(StructuralError::ChainLength { degree: p, expected: c.rank(p), found: v.len() });
            }
        }
    }
    let q = t.dimension();
    let nonneg = t.minus.iter().chain(&t.plus).all(|v| v.iter().all(|&x| x >= 0));
    let boundary = (1..=q).all(|p| {
        let diff: Vec<i64> = t.plus[p - 1].iter().zip(&t.minus[p - 1]).map(|(a, b)| a - b).collect();
        c.boundary(p, &t.minus[p]) == diff && c.boundary(p, &t.plus[p]) == diff
    });
    let augmented = c.augment(&t.minus[0]) == 1 && c.augment(&t.plus[0]) == 1;
    Ok(nonneg && boundary && augmented && t.minus[q] == t.plus[q])
}

#[derive(Clone, Debug, Serialize)]
pub struct CellEnumeration {
    /// `cells[q]` lists the `q`-cells in canonical order.
    pub cells: Vec<Vec<SteinerTable>>,
    pub complete: bool,
}

pub fn enumerate_cells(c: &BasedComplex, max_dim: usize, cap: u64) -> CellEnumeration {
    let mut search = HomSearch::new(c);
    let mut complete = true;
    // Set when some entry has unboundedly many values; those branches are dropped.
    let mut unbounded = false;
    let mut solve = |search: &mut HomSearch, q: usize, b: Vec<i64>| {
        let s = search.solutions(q, b, cap);
        if !s.complete() {
            complete = false;
        }
        if !s.cone_trivial {
            unbounded = true;
            return Vec::new();
        }
        s.solutions.clone()
    };
    let mut cells = Vec::with_capacity(max_dim + 1);
    // Tables with both rows filled through degree p-1, not yet closed off.
    let mut open: Vec<(Vec<Vec<i64>>, Vec<Vec<i64>>)> = vec![(Vec::new(), Vec::new())];
    for p in 0..=max_dim {
        let rhs = |m: &Vec<Vec<i64>>, pl: &Vec<Vec<i64>>| -> Vec<i64> {
            if p == 0 {
                vec![1]
            } else {
                pl[p - 1].iter().zip(&m[p - 1]).map(|(a, b)| a - b).collect()
            }
        };
        let mut closed = Vec::new();
        let mut next_open = Vec::new();
        for (m, pl) in &open {
            let sols = solve(&mut search, p, rhs(m, pl));
            for x in &sols {
                let (mut m2, mut p2) = (m.clone(), pl.clone());
                m2.push(x.clone());
                p2.push(x.clone());
                closed.push(SteinerTable { minus: m2, plus: p2 });
            }
            if p < max_dim {
                for x in &sols {
                    for y in &sols {
                        let (mut m2, mut p2) = (m.clone(), pl.clone());
                        m2.push(x.clone());
                        p2.push(y.clone());
                        next_open.push((m2, p2));
                    }
                }
            }
        }
        closed.sort();
        cells.push(closed);
        open = next_open;
    }
    let complete = complete && !unbounded;
    CellEnumeration { cells, complete }
}

/// A cell of the suspension of `νC`, described without reference to `ΣC`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum SuspendedCell {
    Bottom(usize),
    Top(usize),
    Shift(SteinerTable),
}

impl SuspendedCell {
    fn dimension(&self) -> usize {
        match self {
            SuspendedCell::Bottom(q) | SuspendedCell::Top(q) => *q,
            SuspendedCell::Shift(t) => t.dimension() + 1,
        }
    }

    fn source(&self, p: usize, c_ranks: &[usize]) -> SuspendedCell {
        match self {
            SuspendedCell::Bottom(_) => SuspendedCell::Bottom(p),
            SuspendedCell::Top(_) => SuspendedCell::Top(p),
            SuspendedCell::Shift(_) if p == 0 => SuspendedCell::Bottom(0),
            SuspendedCell::Shift(t) => SuspendedCell::Shift(t.source(p - 1).expect("in range")),
        }
        .pad(c_ranks)
    }

    fn target(&self, p: usize, c_ranks: &[usize]) -> SuspendedCell {
        match self {
            SuspendedCell::Bottom(_) => SuspendedCell::Bottom(p),
            SuspendedCell::Top(_) => SuspendedCell::Top(p),
            SuspendedCell::Shift(_) if p == 0 => SuspendedCell::Top(0),
            SuspendedCell::Shift(t) => SuspendedCell::Shift(t.target(p - 1).expect("in range")),
        }
        .pad(c_ranks)
    }

    fn pad(self, _c_ranks: &[usize]) -> SuspendedCell {
        self
    }

    fn identity(&self, q: usize, c_ranks: &[usize]) -> SuspendedCell {
        match self {
            SuspendedCell::Bottom(_) => SuspendedCell::Bottom(q),
            SuspendedCell::Top(_) => SuspendedCell::Top(q),
            SuspendedCell::Shift(t) => SuspendedCell::Shift(t.identity(q - 1, c_ranks).expect("in range")),
        }
    }

    /// `self ∗_p other` in the suspension, or `None` when not composable.
    fn compose(&self, other: &SuspendedCell, p: usize, c_ranks: &[usize]) -> Option<SuspendedCell> {
        if self.source(p, c_ranks) != other.target(p, c_ranks) {
            return None;
        }
        use SuspendedCell::*;
        match (self, other) {
            (Bottom(q), Bottom(_)) => Some(Bottom(*q)),
            (Top(q), Top(_)) => Some(Top(*q)),
            (Shift(_), Bottom(_)) | (Top(_), Shift(_)) if p == 0 => {
                Some(if matches!(self, Shift(_)) { self.clone() } else { other.clone() })
            }
            (Shift(x), Shift(y)) if p >= 1 => x.compose(y, p - 1).ok().map(Shift),
            _ => None,
        }
    }

    /// The table in `ΣC` representing this cell.
    fn realize(&self, c_ranks: &[usize]) -> SteinerTable {
        let pole = |i: usize| if i == 0 { vec![1, 0] } else { vec![0, 1] };
        match self {
            SuspendedCell::Bottom(q) | SuspendedCell::Top(q) => {
                let i = usize::from(matches!(self, SuspendedCell::Top(_)));
                let mut rows = vec![pole(i)];
                for p in 1..=*q {
                    rows.push(vec![0; c_ranks.get(p - 1).copied().unwrap_or(0)]);
                }
                SteinerTable { minus: rows.clone(), plus: rows }
            }
            SuspendedCell::Shift(t) => {
                let mut minus = vec![pole(0)];
                minus.extend(t.minus.iter().cloned());
                let mut plus = vec![pole(1)];
                plus.extend(t.plus.iter().cloned());
                SteinerTable { minus, plus }
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IsoCheck {
    /// `None` when an enumeration was incomplete.
    pub holds: Option<bool>,
    pub cells_checked: usize,
    pub compositions_checked: usize,
    pub details: Vec<String>,
}

/// Checks that prepending a `⊥/⊤` row identifies the suspension of `νC` with `νΣC` up to `max_dim`,
/// compatibly with sources, targets, identities and all compositions.
pub fn check_nu_sigma_iso(c: &BasedComplex, max_dim: usize, cap: u64) -> IsoCheck {
    let sc = suspend(c);
    let cr = c.ranks();
    let scr = sc.ranks();
    let inner = enumerate_cells(c, max_dim.saturating_sub(1), cap);
    let outer = enumerate_cells(&sc, max_dim, cap);
    let mut details = Vec::new();
    let mut ok = true;
    let mut compositions = 0;
    let mut cells_checked = 0;
    for q in 0..=max_dim {
        let mut side: Vec<SuspendedCell> = vec![SuspendedCell::Bottom(q), SuspendedCell::Top(q)];
        if q >= 1 {
            side.extend(inner.cells[q - 1].iter().cloned().map(SuspendedCell::Shift));
        }
        let realized: Vec<SteinerTable> = side.iter().map(|x| x.realize(&cr)).collect();
        let image: HashSet<&SteinerTable> = realized.iter().collect();
        let target: HashSet<&SteinerTable> = outer.cells[q].iter().collect();
        if image.len() != realized.len() {
            ok = false;
            details.push(format!("re-indexing is not injective in dimension {q}"));
        }
        if image != target {
            ok = false;
            details.push(format!("dimension {q}: {} suspended cells against {} cells of νΣC", image.len(), target.len()));
        }
        for (x, tx) in side.iter().zip(&realized) {
            cells_checked += 1;
            for p in 0..q {
                if x.source(p, &cr).realize(&cr) != tx.source(p).unwrap()
                    || x.target(p, &cr).realize(&cr) != tx.target(p).unwrap()
                {
                    ok = false;
                    details.push(format!("source/target mismatch in dimension {q} at {p}"));
                }
            }
            if tx.identity(q + 1, &scr).unwrap() != x.identity(q + 1, &cr).realize(&cr) {
                ok = false;
                details.push(format!("identity mismatch in dimension {q}"));
            }
        }
        for (x, tx) in side.iter().zip(&realized) {
            for (y, ty) in side.iter().zip(&realized) {
                for p in 0..q {
                    let lhs = x.compose(y, p, &cr).map(|z| z.realize(&cr));
                    let rhs = tx.compose(ty, p).ok();
                    if lhs.is_some() {
                        compositions += 1;
                    }
                    if lhs != rhs {
                        ok = false;
                        details.push(format!("composition mismatch in dimension {q} at {p}"));
                    }
                }
            }
        }
        debug_assert!(side.iter().all(|x| x.dimension() == q));
    }
    details.truncate(20);
    IsoCheck {
        holds: (inner.complete && outer.complete).then_some(ok),
        cells_checked,
        compositions_checked: compositions,
        details,
    }
}

/// Rank of `λνC` in each degree up to `max_dim`: cells modulo `[x ∗_p y] - [x] - [y]`.
pub fn linearized_ranks(c: &BasedComplex, max_dim: usize, cap: u64) -> Option<Vec<usize>> {
    let cells = enumerate_cells(c, max_dim, cap);
    if !cells.complete {
        return None;
    }
    let mut ranks = Vec::new();
    for q in 0..=max_dim {
        let list = &cells.cells[q];
        let index: HashMap<&SteinerTable, usize> = list.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut echelon = Echelon::default();
        for x in list {
            for y in list {
                for p in 0..q {
                    if let Ok(z) = x.compose(y, p) {
                        let mut row: HashMap<usize, i128> = HashMap::new();
                        *row.entry(index[&z]).or_default() += 1;
                        *row.entry(index[x]).or_default() -= 1;
                        *row.entry(index[y]).or_default() -= 1;
                        echelon.insert(row.into_iter().filter(|(_, v)| *v != 0).collect());
                    }
                }
            }
        }
        ranks.push(list.len() - echelon.rank());
    }
    Some(ranks)
}

/// Incremental row echelon form over the rationals with sparse integer rows.
#[derive(Default)]
struct Echelon {
    pivots: HashMap<usize, Vec<(usize, i128)>>,
}

impl Echelon {
    fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn insert(&mut self, mut row: Vec<(usize, i128)>) {
        loop {
            row.retain(|(_, v)| *v != 0);
            row.sort();
            let Some(&(lead, a)) = row.first() else { return };
            let Some(pivot) = self.pivots.get(&lead) else {
                self.pivots.insert(lead, normalize(row));
                return;
            };
            let b = pivot[0].1;
            let mut acc: HashMap<usize, i128> = HashMap::new();
            for &(j, v) in &row {
                *acc.entry(j).or_default() += v * b;
            }
            for &(j, v) in pivot {
                *acc.entry(j).or_default() -= v * a;
            }
            row = normalize(acc.into_iter().collect());
        }
    }
}

fn normalize(mut row: Vec<(usize, i128)>) -> Vec<(usize, i128)> {
    row.retain(|(_, v)| *v != 0);
    row.sort();
    let g = row.iter().fold(0i128, |g, (_, v)| num::integer::gcd(g, *v));
    if g > 1 {
        for (_, v) in row.iter_mut() {
            *v /= g;
        }
    }
    row
}

#[derive(Clone, Debug, Serialize)]
pub struct DualCheck {
    pub holds: Option<bool>,
    pub details: Vec<String>,
}

/// Cells of `νC°` are the cells of `νC` with rows exchanged; sources and targets swap and composition reverses.
pub fn check_dual_cells(c: &BasedComplex, max_dim: usize, cap: u64) -> DualCheck {
    let dual = total_dual(c);
    let a = enumerate_cells(&dual, max_dim, cap);
    let b = enumerate_cells(c, max_dim, cap);
    let mut ok = true;
    let mut details = Vec::new();
    for q in 0..=max_dim {
        let swapped: HashSet<SteinerTable> = a.cells[q].iter().map(|t| t.swapped()).collect();
        let direct: HashSet<SteinerTable> = b.cells[q].iter().cloned().collect();
        if swapped != direct {
            ok = false;
            details.push(format!("dimension {q}: cell sets differ"));
        }
        for x in &a.cells[q] {
            for p in 0..q {
                if x.source(p).unwrap().swapped() != x.swapped().target(p).unwrap() {
                    ok = false;
                    details.push(format!("source does not become target in dimension {q}"));
                }
            }
            for y in &a.cells[q] {
                for p in 0..q {
                    let lhs = x.compose(y, p).ok().map(|z| z.swapped());
                    let rhs = y.swapped().compose(&x.swapped(), p).ok();
                    if lhs != rhs {
                        ok = false;
                        details.push(format!("composition does not reverse in dimension {q}"));
                    }
                }
            }
        }
    }
    details.dedup();
    DualCheck { holds: (a.complete && b.complete).then_some(ok), details }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::DEFAULT_CAP;
    use crate::oriental::oriental;

    #[test]
    fn interval_tables() {
        let o1 = oriental(1);
        let arrow = SteinerTable { minus: vec![vec![1, 0], vec![1]], plus: vec![vec![0, 1], vec![1]] };
        assert!(validate_table(&o1, &arrow).unwrap());
        let point = SteinerTable::point(&o1, 0);
        assert!(validate_table(&o1, &point).unwrap());
        let bad = SteinerTable { minus: vec![vec![2, 0]], plus: vec![vec![2, 0]] };
        assert!(!validate_table(&o1, &bad).unwrap());
        let cells = enumerate_cells(&o1, 2, DEFAULT_CAP);
        assert_eq!(cells.cells[0].len(), 2);
        assert_eq!(cells.cells[1].len(), 3);
        assert!(cells.complete);
    }

    #[test]
    fn triangle_composite() {
        let o2 = oriental(2);
        let cells = enumerate_cells(&o2, 1, DEFAULT_CAP);
        assert_eq!(cells.cells[1].len(), 7);
        // generators in degree 1 are ordered 01, 02, 12
        let f = cells.cells[1].iter().find(|t| t.minus[1] == vec![1, 0, 0]).unwrap();
        let g = cells.cells[1].iter().find(|t| t.minus[1] == vec![0, 0, 1]).unwrap();
        let gf = g.compose(f, 0).unwrap();
        assert_eq!(gf.minus[1], vec![1, 0, 1]);
        assert!(validate_table(&o2, &gf).unwrap());
        assert!(matches!(f.compose(g, 0), Err(NuError::NotComposable { degree: 0 })));
    }

    #[test]
    fn globular_and_identity_laws() {
        let c = oriental(3);
        let cells = enumerate_cells(&c, 3, DEFAULT_CAP);
        for t in &cells.cells[3] {
            assert_eq!(t.source(2).unwrap().source(1).unwrap(), t.source(1).unwrap());
            assert_eq!(t.target(2).unwrap().source(1).unwrap(), t.source(1).unwrap());
        }
        for t in &cells.cells[2] {
            assert_eq!(t.identity(3, &c.ranks()).unwrap().source(2).unwrap(), *t);
        }
    }

    #[test]
    fn suspension_iso_small() {
        assert_eq!(check_nu_sigma_iso(&oriental(0), 2, DEFAULT_CAP).holds, Some(true));
        assert_eq!(check_nu_sigma_iso(&oriental(1), 3, DEFAULT_CAP).holds, Some(true));
    }

    #[test]
    fn counit_ranks() {
        for m in 0..=2 {
            let r = linearized_ranks(&oriental(m), m as usize, DEFAULT_CAP).unwrap();
            assert_eq!(r, oriental(m).ranks());
        }
    }

    #[test]
    fn dual_cells() {
        assert_eq!(check_dual_cells(&oriental(2), 2, DEFAULT_CAP).holds, Some(true));
    }
}
