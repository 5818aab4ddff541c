//! Θ-shapes as based complexes, their nerves, and the Segality and completeness maps between nerves.

use crate::complex::{suspend, suspend_morphism, wedge_at_point, AdcMorphism, BasedComplex, BOTTOM, TOP};
use crate::hom::enumerate_homs;
use crate::matrix::Matrix;
use crate::msset::{is_mono, product, pushout, restrict, simplex, validate_map, MarkedSimplicialSet, MssetMap};
use crate::nerve::{nerve_map, rs_nerve, Nerve, NerveError};
use crate::oriental::oriental;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ThetaError {
    #[error("cannot parse theta expression at byte {0}: {1}")]
    Parse(usize, String),
    #[error(transparent)]
    Nerve(#[from] NerveError),
    #[error("{0}")]
    Construction(String),
}

/// `[k|θ_1,…,θ_k]`; `[0]` has no children.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ThetaExpr {
    pub children: Vec<ThetaExpr>,
}

impl ThetaExpr {
    pub fn leaf() -> Self {
        ThetaExpr { children: Vec::new() }
    }

    pub fn node(children: Vec<ThetaExpr>) -> Self {
        ThetaExpr { children }
    }

    /// `[k|[0],…,[0]]`.
    pub fn linear(k: usize) -> Self {
        ThetaExpr::node(vec![ThetaExpr::leaf(); k])
    }

    pub fn depth(&self) -> usize {
        self.children.iter().map(|c| c.depth() + 1).max().unwrap_or(0)
    }
}

impl fmt::Display for ThetaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.children.is_empty() {
            return write!(f, "[0]");
        }
        write!(f, "[{}|", self.children.len())?;
        for (i, c) in self.children.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> ThetaError {
        ThetaError::Parse(self.pos, msg.to_string())
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ThetaError> {
        self.skip_ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<ThetaExpr, ThetaError> {
        self.expect(b'[')?;
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let k: usize = std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| self.err("expected a number"))?;
        self.skip_ws();
        if k == 0 {
            self.expect(b']')?;
            return Ok(ThetaExpr::leaf());
        }
        self.expect(b'|')?;
        let mut children = vec![self.expr()?];
        for _ in 1..k {
            self.expect(b',')?;
            children.push(self.expr()?);
        }
        self.expect(b']')?;
        Ok(ThetaExpr::node(children))
    }
}

impl FromStr for ThetaExpr {
    type Err = ThetaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser { s: s.as_bytes(), pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(e)
    }
}

/// The complex of a Θ-shape with the inclusions of its summands `Σθ_i`.
#[derive(Clone, Debug)]
pub struct ThetaComplex {
    pub complex: BasedComplex,
    /// `Σ theta_adc(θ_i) -> complex`, one per child.
    pub inclusions: Vec<AdcMorphism>,
    /// The suspended child complexes, in order.
    pub parts: Vec<BasedComplex>,
}

/// `Σθ_1 ∨ … ∨ Σθ_k`, glued `⊤_i = ⊥_{i+1}`; vertex `i` is degree-0 generator `i`.
pub fn theta_adc(theta: &ThetaExpr) -> ThetaComplex {
    if theta.children.is_empty() {
        return ThetaComplex { complex: oriental(0), inclusions: Vec::new(), parts: Vec::new() };
    }
    let parts: Vec<BasedComplex> = theta.children.iter().map(|c| suspend(&theta_adc(c).complex)).collect();
    let mut total = parts[0].clone();
    // Current label in `total` of every generator of every part glued so far.
    let mut names: Vec<Vec<Vec<String>>> = vec![(0..=parts[0].max_degree()).map(|q| parts[0].basis(q).to_vec()).collect()];
    let mut top = TOP.to_string();
    for part in &parts[1..] {
        total = wedge_at_point(&total, &top, part, BOTTOM).expect("poles are labelled");
        for n in names.iter_mut().flatten().flatten() {
            *n = format!("0:{n}");
        }
        let glued = format!("0:{top}");
        names.push(
            (0..=part.max_degree())
                .map(|q| part.basis(q).iter().map(|l| if q == 0 && l == BOTTOM { glued.clone() } else { format!("1:{l}") }).collect())
                .collect(),
        );
        top = format!("1:{TOP}");
    }
    let inclusions = parts
        .iter()
        .zip(&names)
        .map(|(part, labels)| {
            let matrices = (0..=total.max_degree())
                .map(|q| {
                    let mut m = Matrix::zeros(total.rank(q), part.rank(q));
                    for (j, l) in labels.get(q).into_iter().flatten().enumerate() {
                        m.set(total.label_index(q, l).expect("label survives the wedge"), j, 1);
                    }
                    m
                })
                .collect();
            AdcMorphism::new(matrices)
        })
        .collect();
    ThetaComplex { complex: total, inclusions, parts }
}

/// `N(νT) × Δ[l]^♯`, cut off at `cutoff`.
pub fn ln_generator(theta: &ThetaExpr, l: usize, cutoff: usize, cap: u64) -> Result<MarkedSimplicialSet, ThetaError> {
    let nerve = rs_nerve(&theta_adc(theta).complex, cutoff, cap)?;
    let full = product(nerve.msset(), &simplex(l).sharp());
    let keep = (0..full.len()).filter(|&i| full.dim(i) <= cutoff).collect();
    let mut out = restrict(&full, &keep).object;
    out.set_cutoff(Some(cutoff));
    Ok(out)
}

fn suspend_times(c: &BasedComplex, j: usize) -> BasedComplex {
    (0..j).fold(c.clone(), |acc, _| suspend(&acc))
}

fn suspend_morphism_times(f: &AdcMorphism, j: usize) -> AdcMorphism {
    (0..j).fold(f.clone(), |acc, _| suspend_morphism(&acc))
}

/// `O[0] -> ΣX` at a pole.
fn pole_map(top: bool, target: &BasedComplex) -> AdcMorphism {
    let mut f = AdcMorphism::zero(&oriental(0), target);
    f.matrices_mut()[0].set(usize::from(top), 0, 1);
    f
}

/// A map of nerves together with its checks.
#[derive(Clone, Debug)]
pub struct NerveMapCheck {
    pub source: MarkedSimplicialSet,
    pub target: MarkedSimplicialSet,
    pub map: MssetMap,
    pub mono: bool,
    pub problems: Vec<String>,
}

impl NerveMapCheck {
    pub fn holds(&self) -> bool {
        self.mono && self.problems.is_empty()
    }
}

fn nerve_of(c: &BasedComplex, cutoff: usize, cap: u64) -> Result<Nerve, ThetaError> {
    Ok(rs_nerve(c, cutoff, cap)?)
}

/// `N(Σ^jθ_1) ⊔_{N(Σ^{j-1}[0])} … ⊔ N(Σ^jθ_k) -> N(Σ^{j-1}[k|θ_1,…,θ_k])`, for `j >= 1`, `k >= 1`.
pub fn segality_map(j: usize, thetas: &[ThetaExpr], cutoff: usize, cap: u64) -> Result<NerveMapCheck, ThetaError> {
    if j == 0 || thetas.is_empty() {
        return Err(ThetaError::Construction("segality needs j >= 1 and k >= 1".into()));
    }
    let whole = theta_adc(&ThetaExpr::node(thetas.to_vec()));
    let target = nerve_of(&suspend_times(&whole.complex, j - 1), cutoff, cap)?;
    let point = nerve_of(&suspend_times(&oriental(0), j - 1), cutoff, cap)?;
    let pieces = whole
        .parts
        .iter()
        .map(|p| nerve_of(&suspend_times(p, j - 1), cutoff, cap))
        .collect::<Result<Vec<_>, _>>()?;
    let embed = |i: usize| nerve_map(&pieces[i], &target, &suspend_morphism_times(&whole.inclusions[i], j - 1));
    let pole = |i: usize, top: bool| nerve_map(&point, &pieces[i], &suspend_morphism_times(&pole_map(top, &whole.parts[i]), j - 1));

    let mut object = pieces[0].msset().clone();
    let mut map = embed(0)?;
    // Where the previous piece sits in the object built so far.
    let mut previous = MssetMap::identity(pieces[0].msset());
    for i in 1..pieces.len() {
        let f = pole(i, false)?;
        let g = pole(i - 1, true)?.images.iter().map(|r| previous.on(r)).collect();
        let po = pushout(point.msset(), pieces[i].msset(), &f, &object, &MssetMap { images: g })
            .map_err(|e| ThetaError::Construction(e.to_string()))?;
        map = po.copair(&map, &embed(i)?);
        previous = po.from_x;
        object = po.object;
    }
    let problems = validate_map(&object, target.msset(), &map);
    Ok(NerveMapCheck { mono: is_mono(&map), source: object, target: target.msset().clone(), map, problems })
}

/// The map `[1] -> [3]` hitting vertices `a < b`.
fn arrow_into_three(a: usize, b: usize, cap: u64) -> Result<AdcMorphism, ThetaError> {
    let one = theta_adc(&ThetaExpr::linear(1)).complex;
    let three = theta_adc(&ThetaExpr::linear(3)).complex;
    let homs = enumerate_homs(&one, &three, cap);
    homs.morphisms
        .into_iter()
        .find(|f| f.matrix(0).get(a, 0) == 1 && f.matrix(0).get(b, 1) == 1)
        .ok_or_else(|| ThetaError::Construction(format!("no arrow [{a}{b}] in [3]")))
}

/// `N(Σ^j[0]) -> N(Σ^j[0]) ⊔_{N(Σ^j[1])} N(Σ^j[3]) ⊔_{N(Σ^j[1])} N(Σ^j[0])`.
pub fn completeness_map(j: usize, cutoff: usize, cap: u64) -> Result<NerveMapCheck, ThetaError> {
    let point_c = suspend_times(&oriental(0), j);
    let one_c = suspend_times(&theta_adc(&ThetaExpr::linear(1)).complex, j);
    let three_c = suspend_times(&theta_adc(&ThetaExpr::linear(3)).complex, j);
    let point = nerve_of(&point_c, cutoff, cap)?;
    let one = nerve_of(&one_c, cutoff, cap)?;
    let three = nerve_of(&three_c, cutoff, cap)?;
    let mut collapse = vec![Matrix::zeros(1, 2), Matrix::zeros(0, 1)];
    collapse[0].set(0, 0, 1);
    collapse[0].set(0, 1, 1);
    let collapse = nerve_map(&one, &point, &suspend_morphism_times(&AdcMorphism::new(collapse), j))?;
    let first = nerve_map(&one, &three, &suspend_morphism_times(&arrow_into_three(0, 2, cap)?, j))?;
    let second = nerve_map(&one, &three, &suspend_morphism_times(&arrow_into_three(1, 3, cap)?, j))?;

    let p1 = pushout(one.msset(), three.msset(), &first, point.msset(), &collapse).map_err(|e| ThetaError::Construction(e.to_string()))?;
    let second_in_p1 = MssetMap { images: second.images.iter().map(|r| p1.from_x.on(r)).collect() };
    let p2 = pushout(one.msset(), &p1.object, &second_in_p1, point.msset(), &collapse)
        .map_err(|e| ThetaError::Construction(e.to_string()))?;
    let map = MssetMap { images: (0..point.msset().len()).map(|i| p2.from_x.on(&point.msset().nd(i))).collect() };
    let problems = validate_map(point.msset(), &p2.object, &map);
    Ok(NerveMapCheck { mono: is_mono(&map), source: point.msset().clone(), target: p2.object, map, problems })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::validate_complex;
    use crate::hom::DEFAULT_CAP;

    fn parse(s: &str) -> ThetaExpr {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_print() {
        for s in ["[0]", "[1|[0]]", "[2|[0],[1|[0]]]"] {
            assert_eq!(parse(s).to_string(), s);
        }
        assert_eq!(parse(" [ 2 | [0] , [0] ] "), ThetaExpr::linear(2));
        assert!("[2|[0]]".parse::<ThetaExpr>().is_err());
        assert!("[1|[0]]x".parse::<ThetaExpr>().is_err());
    }

    #[test]
    fn ranks() {
        assert_eq!(theta_adc(&parse("[1|[0]]")).complex.ranks(), vec![2, 1]);
        assert_eq!(theta_adc(&parse("[2|[0],[0]]")).complex.ranks(), vec![3, 2]);
        assert_eq!(theta_adc(&parse("[1|[1|[0]]]")).complex.ranks(), vec![2, 2, 1]);
        let t = theta_adc(&parse("[3|[0],[1|[0]],[0]]"));
        assert!(validate_complex(&t.complex).unwrap().is_valid());
        // Wedge arithmetic on vertices.
        assert_eq!(t.complex.rank(0), 4);
        for (part, f) in t.parts.iter().zip(&t.inclusions) {
            assert!(crate::complex::validate_morphism(part, &t.complex, f).unwrap().is_valid());
        }
    }

    #[test]
    fn nerves_of_linear_shapes() {
        // Monotone maps [m] -> [1] and [m] -> [2].
        let n1 = rs_nerve(&theta_adc(&ThetaExpr::linear(1)).complex, 4, DEFAULT_CAP).unwrap();
        assert_eq!(n1.level_sizes(), vec![2, 3, 4, 5, 6]);
        let n2 = rs_nerve(&theta_adc(&ThetaExpr::linear(2)).complex, 4, DEFAULT_CAP).unwrap();
        let expected: Vec<usize> = (0..=4u64).map(|m| crate::oriental::binomial(m as i64 + 3, 2) as usize).collect();
        assert_eq!(n2.level_sizes(), expected);
    }

    #[test]
    fn cells_match_hand_counts() {
        // The category [2]: 3 objects, 3 identities and 3 arrows; the 2-globe: 2, 4, 5 cells.
        let cells = crate::nu::enumerate_cells(&theta_adc(&ThetaExpr::linear(2)).complex, 2, DEFAULT_CAP);
        assert_eq!(cells.cells.iter().map(Vec::len).collect::<Vec<_>>(), vec![3, 6, 6]);
        let cells = crate::nu::enumerate_cells(&theta_adc(&parse("[1|[1|[0]]]")).complex, 2, DEFAULT_CAP);
        assert_eq!(cells.cells.iter().map(Vec::len).collect::<Vec<_>>(), vec![2, 4, 5]);
    }

    #[test]
    fn generators() {
        assert_eq!(ln_generator(&ThetaExpr::leaf(), 0, 3, DEFAULT_CAP).unwrap().counts(), vec![1]);
        let arrow = ln_generator(&ThetaExpr::linear(1), 0, 3, DEFAULT_CAP).unwrap();
        assert_eq!(arrow.counts(), vec![2, 1]);
        let square = ln_generator(&ThetaExpr::linear(1), 1, 3, DEFAULT_CAP).unwrap();
        assert_eq!(square.counts()[2], 2);
    }

    #[test]
    fn segal_spine() {
        let s = segality_map(1, &[ThetaExpr::leaf(), ThetaExpr::leaf()], 3, DEFAULT_CAP).unwrap();
        assert!(s.holds());
        // Two edges glued at a point, inside the nerve of [2].
        assert_eq!(s.source.counts(), vec![3, 2]);
        assert_eq!(s.target.counts()[..2], [3, 3]);
    }

    #[test]
    fn completeness_is_mono() {
        let c = completeness_map(0, 3, DEFAULT_CAP).unwrap();
        assert!(c.holds());
        assert_eq!(c.source.counts(), vec![1]);
    }
}
