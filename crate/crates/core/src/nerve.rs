//! Roberts–Street nerves of `νC`, computed algebraically from hom enumerations.

use crate::complex::{suspend, AdcMorphism, BasedComplex};
use crate::hom::{constant_pole, HomSearch};
use crate::msset::{is_mono, is_regular, suspend_msset, validate_map, MarkedSimplicialSet, MssetMap, SimplexRef};
use crate::oriental::{simplicial_operator, MonotoneMap};
use serde::Serialize;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NerveError {
    #[error("hom enumeration into the target is incomplete in dimension {0}")]
    Incomplete(usize),
    #[error("a composite is not a simplex of the target nerve (dimension {0})")]
    MissingSimplex(usize),
}

/// The maps `O[m-1] -> O[m]` and `O[m] -> O[m]` used for faces and degeneracy tests.
#[derive(Clone, Debug, Default)]
pub struct Operators {
    cofaces: Vec<Vec<AdcMorphism>>,
    collapses: Vec<Vec<AdcMorphism>>,
}

impl Operators {
    fn ensure(&mut self, m: usize) {
        while self.cofaces.len() <= m {
            let d = self.cofaces.len();
            if d == 0 {
                self.cofaces.push(Vec::new());
                self.collapses.push(Vec::new());
                continue;
            }
            self.cofaces.push((0..=d).map(|i| simplicial_operator(&MonotoneMap::coface(d, i))).collect());
            // i ↦ i+1: the map behind s_i d_i.
            self.collapses.push(
                (0..d)
                    .map(|i| {
                        let images = (0..=d).map(|j| if j == i { i + 1 } else { j }).collect();
                        simplicial_operator(&MonotoneMap::new(images, d).expect("collapse is monotone"))
                    })
                    .collect(),
            );
        }
    }

    /// `d_i x` for a simplex `x: O[m] -> C`.
    pub fn face(&mut self, x: &AdcMorphism, m: usize, i: usize) -> AdcMorphism {
        self.ensure(m);
        x.after(&self.cofaces[m][i])
    }

    /// Whether `x = s_i d_i x`.
    pub fn is_degenerate_at(&mut self, x: &AdcMorphism, m: usize, i: usize) -> bool {
        self.ensure(m);
        &x.after(&self.collapses[m][i]) == x
    }
}

/// The nerve of `νC` through dimension `max_dim`, with every simplex kept as a chain map.
#[derive(Clone, Debug)]
pub struct Nerve {
    target: BasedComplex,
    levels: Vec<Vec<AdcMorphism>>,
    index: Vec<HashMap<Vec<i64>, usize>>,
    normal: Vec<Vec<SimplexRef>>,
    origin: Vec<(usize, usize)>,
    msset: MarkedSimplicialSet,
    ops: Operators,
}

pub fn rs_nerve(c: &BasedComplex, max_dim: usize, cap: u64) -> Result<Nerve, NerveError> {
    let mut search = HomSearch::new(c);
    let mut levels = Vec::new();
    let mut index: Vec<HashMap<Vec<i64>, usize>> = Vec::new();
    for m in 0..=max_dim {
        let e = search.homs_from(&crate::oriental::oriental(m as i64), cap);
        if !e.complete {
            return Err(NerveError::Incomplete(m));
        }
        index.push(e.morphisms.iter().enumerate().map(|(i, f)| (f.encoding(), i)).collect());
        levels.push(e.morphisms);
    }
    let mut ops = Operators::default();
    let mut msset = MarkedSimplicialSet::new(Some(max_dim));
    let mut normal: Vec<Vec<SimplexRef>> = Vec::new();
    let mut origin = Vec::new();
    for m in 0..=max_dim {
        let mut level_normal = Vec::with_capacity(levels[m].len());
        for (j, x) in levels[m].iter().enumerate() {
            let degenerate_at = (0..m).find(|&i| ops.is_degenerate_at(x, m, i));
            let r = match degenerate_at {
                Some(i) => {
                    let face = ops.face(x, m, i);
                    let below = &normal[m - 1][index[m - 1][&face.encoding()]];
                    SimplexRef { id: below.id, sigma: (0..=m).map(|t| below.sigma[if t <= i { t } else { t - 1 }]).collect() }
                }
                None => {
                    let faces = if m == 0 {
                        Vec::new()
                    } else {
                        (0..=m)
                            .map(|i| {
                                let face = ops.face(x, m, i);
                                normal[m - 1][index[m - 1][&face.encoding()]].clone()
                            })
                            .collect()
                    };
                    let marked = m > 0 && x.matrix(m).is_zero();
                    let id = msset.push(m, faces, marked, Some(format!("{m}:{j}")));
                    origin.push((m, j));
                    msset.nd(id)
                }
            };
            level_normal.push(r);
        }
        normal.push(level_normal);
    }
    Ok(Nerve { target: c.clone(), levels, index, normal, origin, msset, ops })
}

impl Nerve {
    pub fn target(&self) -> &BasedComplex {
        &self.target
    }

    pub fn max_dim(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn msset(&self) -> &MarkedSimplicialSet {
        &self.msset
    }

    /// Number of simplices (degenerate ones included) per dimension.
    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.len()).collect()
    }

    pub fn level(&self, m: usize) -> &[AdcMorphism] {
        &self.levels[m]
    }

    pub fn lookup(&self, m: usize, x: &AdcMorphism) -> Option<usize> {
        self.index.get(m)?.get(&x.encoding()).copied()
    }

    /// The normal form of the `j`-th `m`-simplex.
    pub fn normal_form(&self, m: usize, j: usize) -> &SimplexRef {
        &self.normal[m][j]
    }

    pub fn normal_form_of(&self, m: usize, x: &AdcMorphism) -> Option<&SimplexRef> {
        self.lookup(m, x).map(|j| &self.normal[m][j])
    }

    /// The chain map behind a nondegenerate simplex id.
    pub fn morphism(&self, id: usize) -> &AdcMorphism {
        let (m, j) = self.origin[id];
        &self.levels[m][j]
    }

    pub fn origin(&self, id: usize) -> (usize, usize) {
        self.origin[id]
    }

    pub fn ops(&mut self) -> &mut Operators {
        &mut self.ops
    }

    pub fn face(&mut self, x: &AdcMorphism, m: usize, i: usize) -> AdcMorphism {
        self.ops.face(x, m, i)
    }

    pub fn is_degenerate_at(&mut self, x: &AdcMorphism, m: usize, i: usize) -> bool {
        self.ops.is_degenerate_at(x, m, i)
    }

    pub fn is_degenerate(&mut self, x: &AdcMorphism, m: usize) -> bool {
        (0..m).any(|i| self.ops.is_degenerate_at(x, m, i))
    }
}

/// `N(f)`: postcomposition with a chain map `f: C -> D`.
pub fn nerve_map(src: &Nerve, tgt: &Nerve, f: &AdcMorphism) -> Result<MssetMap, NerveError> {
    let images = (0..src.msset.len())
        .map(|id| {
            let m = src.msset.dim(id);
            let fx = f.after(src.morphism(id));
            tgt.normal_form_of(m, &fx).cloned().ok_or(NerveError::MissingSimplex(m))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MssetMap { images })
}

/// Number of vertices sent to `⊥`, minus one, for a simplex `O[m] -> ΣC`.
pub fn type_of(x: &AdcMorphism) -> i64 {
    let d0 = x.matrix(0);
    (0..d0.cols()).filter(|&i| d0.get(0, i) == 1).count() as i64 - 1
}

pub fn is_totally_degenerate(x: &AdcMorphism) -> bool {
    let k = type_of(x);
    k == -1 || k == x.matrix(0).cols() as i64 - 1
}

/// `ΣN(νC) -> N(νΣC)` together with the checks made on it.
#[derive(Clone, Debug)]
pub struct Comparison {
    pub source: MarkedSimplicialSet,
    pub target: Nerve,
    pub map: MssetMap,
    pub problems: Vec<String>,
    pub mono: bool,
    pub regular: bool,
    /// The image is exactly the poles and the simplices with no `⊤`-vertex beyond the last.
    pub image_matches: bool,
}

pub fn comparison_inclusion(c: &BasedComplex, max_dim: usize, cap: u64) -> Result<Comparison, NerveError> {
    let base = rs_nerve(c, max_dim.saturating_sub(1), cap)?;
    let target = rs_nerve(&suspend(c), max_dim, cap)?;
    comparison_from(&base, target)
}

/// The comparison map given both nerves; `target` must be the nerve of `ΣC` one dimension above `base`.
pub fn comparison_from(base: &Nerve, target: Nerve) -> Result<Comparison, NerveError> {
    let c = base.target();
    let source = suspend_msset(base.msset());
    let mut images = Vec::with_capacity(source.len());
    for top in [false, true] {
        let pole = constant_pole(0, c, top);
        images.push(target.normal_form_of(0, &pole).cloned().ok_or(NerveError::MissingSimplex(0))?);
    }
    for id in 0..base.msset().len() {
        let y = base.morphism(id);
        let k = base.msset().dim(id);
        // O[k] ⊗ O[0]° has the same coordinates as O[k].
        let lifted = crate::hom::lift_through_phi(k, 0, y);
        images.push(target.normal_form_of(k + 1, &lifted).cloned().ok_or(NerveError::MissingSimplex(k + 1))?);
    }
    let map = MssetMap { images };
    let problems = validate_map(&source, target.msset(), &map);
    let mono = is_mono(&map);
    let regular = is_regular(&source, target.msset(), &map);
    let hit: std::collections::HashSet<usize> = map.images.iter().map(|r| r.id).collect();
    let image_matches = (0..target.msset().len()).all(|id| {
        let x = target.morphism(id);
        let m = target.msset().dim(id) as i64;
        let expected = m == 0 || type_of(x) == m - 1;
        expected == hit.contains(&id)
    });
    Ok(Comparison { source, target, map, problems, mono, regular, image_matches })
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelDecomposition {
    pub dim: usize,
    pub nerve_count: usize,
    pub summand_count: usize,
}

/// `|N(ΣC)_m|` against `2 + Σ_{k+1+l=m} |adCh(O[k] ⊗ O[l]°, C)|`.
pub fn level_decomposition(c: &BasedComplex, max_dim: usize, cap: u64) -> Result<Vec<LevelDecomposition>, NerveError> {
    let nerve = rs_nerve(&suspend(c), max_dim, cap)?;
    let mut search = HomSearch::new(c);
    let mut out = Vec::new();
    for m in 0..=max_dim {
        let mut summand_count = 2;
        for k in 0..m {
            let e = search.homs_from(&crate::complex::tensor_of_orientals(k as i64, (m - 1 - k) as i64), cap);
            if !e.complete {
                return Err(NerveError::Incomplete(m));
            }
            summand_count += e.morphisms.len();
        }
        out.push(LevelDecomposition { dim: m, nerve_count: nerve.level(m).len(), summand_count });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::DEFAULT_CAP;
    use crate::oriental::oriental;

    #[test]
    fn point_and_interval() {
        let n = rs_nerve(&oriental(0), 3, DEFAULT_CAP).unwrap();
        assert_eq!(n.msset().counts(), vec![1]);
        assert_eq!(n.level_sizes(), vec![1, 1, 1, 1]);
        let n = rs_nerve(&oriental(1), 4, DEFAULT_CAP).unwrap();
        assert_eq!(n.level_sizes(), vec![2, 3, 4, 5, 6]);
        assert_eq!(n.msset().counts(), vec![2, 1]);
        assert_eq!(n.msset().marked_counts(), vec![0, 0]);
        assert!(n.msset().check_identities().is_empty());
    }

    #[test]
    fn globe_nerve() {
        let n = rs_nerve(&suspend(&oriental(1)), 4, DEFAULT_CAP).unwrap();
        // Type-k simplices are monotone 0/1 labellings of a (k+1)×(l+1) grid: C(m+1, k+1) each, plus two poles.
        let expected: Vec<usize> = (0..=4).map(|m| 1usize << (m + 1)).collect();
        assert_eq!(n.level_sizes(), expected);
        assert_eq!(n.msset().counts(), vec![2; 5]);
        assert_eq!(n.msset().marked_counts(), vec![0, 0, 0, 2, 2]);
        assert!(n.msset().check_identities().is_empty());
    }

    #[test]
    fn comparison_small() {
        let cmp = comparison_inclusion(&oriental(0), 3, DEFAULT_CAP).unwrap();
        assert!(cmp.problems.is_empty() && cmp.mono && cmp.regular && cmp.image_matches);
        assert_eq!(cmp.target.msset().counts(), vec![2, 1]);
        let cmp = comparison_inclusion(&oriental(1), 3, DEFAULT_CAP).unwrap();
        assert!(cmp.problems.is_empty() && cmp.mono && cmp.regular && cmp.image_matches);
        let extra: Vec<usize> = (0..4).map(|d| cmp.target.msset().counts().get(d).copied().unwrap_or(0)).collect();
        let have: Vec<usize> = (0..4).map(|d| cmp.source.counts().get(d).copied().unwrap_or(0)).collect();
        assert_eq!((extra[2], have[2]), (2, 1));
        for id in cmp.target.msset().ids_of_dim(2) {
            let k = type_of(cmp.target.morphism(id));
            assert!(k == 0 || k == 1);
        }
    }

    #[test]
    fn types() {
        let c = oriental(0);
        assert_eq!(type_of(&constant_pole(3, &c, false)), 3);
        assert_eq!(type_of(&constant_pole(3, &c, true)), -1);
        assert!(is_totally_degenerate(&constant_pole(2, &c, true)));
        let n = rs_nerve(&suspend(&c), 1, DEFAULT_CAP).unwrap();
        let edge = n.msset().ids_of_dim(1).next().unwrap();
        assert_eq!(type_of(n.morphism(edge)), 0);
    }

    #[test]
    fn decomposition() {
        for l in level_decomposition(&oriental(1), 4, DEFAULT_CAP).unwrap() {
            assert_eq!(l.nerve_count, l.summand_count);
        }
    }

    #[test]
    fn functoriality() {
        let src = rs_nerve(&oriental(1), 3, DEFAULT_CAP).unwrap();
        let tgt = rs_nerve(&oriental(2), 3, DEFAULT_CAP).unwrap();
        let f = simplicial_operator(&MonotoneMap::coface(2, 1));
        let g = nerve_map(&src, &tgt, &f).unwrap();
        assert!(validate_map(src.msset(), tgt.msset(), &g).is_empty());
        assert!(is_mono(&g));
    }
}
