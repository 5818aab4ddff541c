//! Finite marked simplicial sets presented by their nondegenerate simplices.
//!
//! A general simplex is a nondegenerate simplex `x` together with a monotone surjection
//! `σ: [n] -> [dim x]`, standing for `x ∘ σ` (Eilenberg–Zilber normal form). Faces of every
//! nondegenerate simplex are stored in that form; anything else is derived.

use crate::oriental::simplex_label;
use itertools::Itertools;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MssetError {
    #[error("vertex index {k} out of range for dimension {m}")]
    OutOfRange { m: usize, k: usize },
    #[error("pushout leg is not a monomorphism")]
    NotMono,
    #[error("simplex {id}: {reason}")]
    Malformed { id: usize, reason: String },
    #[error("map has {found} images, expected {expected}")]
    MapSize { expected: usize, found: usize },
}

/// `x ∘ σ` for a nondegenerate simplex `x = id`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimplexRef {
    pub id: usize,
    pub sigma: Vec<usize>,
}

impl SimplexRef {
    pub fn nondegenerate(id: usize, dim: usize) -> Self {
        SimplexRef { id, sigma: (0..=dim).collect() }
    }

    pub fn dim(&self) -> usize {
        self.sigma.len() - 1
    }

    pub fn is_degenerate(&self) -> bool {
        self.sigma.windows(2).any(|w| w[0] == w[1])
    }

    /// The indices `j` of the normal form `s_{j1} … s_{jp} x`, decreasing.
    pub fn degeneracies(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.dim()).filter(|&j| self.sigma[j] == self.sigma[j + 1]).collect();
        v.reverse();
        v
    }

    pub fn from_degeneracies(id: usize, n: usize, degeneracies: &[usize]) -> Self {
        let mut sigma = vec![0usize; n + 1];
        for j in 0..n {
            sigma[j + 1] = sigma[j] + usize::from(!degeneracies.contains(&j));
        }
        SimplexRef { id, sigma }
    }

    /// Reindexes along a map `g` sending this simplex's nondegenerate part to `image`.
    pub fn through(&self, image: &SimplexRef) -> SimplexRef {
        SimplexRef { id: image.id, sigma: self.sigma.iter().map(|&t| image.sigma[t]).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplex {
    pub dim: usize,
    pub faces: Vec<SimplexRef>,
    pub marked: bool,
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedSimplicialSet {
    simplices: Vec<Simplex>,
    /// Dimension through which the object is exact; `None` for a complete finite object.
    cutoff: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct FaceJson {
    id: usize,
    degeneracies: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct SimplexJson {
    id: usize,
    dim: usize,
    faces: Vec<FaceJson>,
    marked: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct MssetJson {
    simplices: Vec<SimplexJson>,
    cutoff: Option<usize>,
}

impl Serialize for MarkedSimplicialSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let simplices = self
            .simplices
            .iter()
            .enumerate()
            .map(|(id, x)| SimplexJson {
                id,
                dim: x.dim,
                faces: x.faces.iter().map(|f| FaceJson { id: f.id, degeneracies: f.degeneracies() }).collect(),
                marked: x.marked,
                label: x.label.clone(),
            })
            .collect();
        MssetJson { simplices, cutoff: self.cutoff }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MarkedSimplicialSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = MssetJson::deserialize(d)?;
        MarkedSimplicialSet::from_json(raw).map_err(serde::de::Error::custom)
    }
}

impl MarkedSimplicialSet {
    fn from_json(raw: MssetJson) -> Result<Self, MssetError> {
        let mut order: Vec<&SimplexJson> = raw.simplices.iter().collect();
        order.sort_by_key(|s| s.id);
        let mut x = MarkedSimplicialSet::new(raw.cutoff);
        for (pos, s) in order.iter().enumerate() {
            if s.id != pos {
                return Err(MssetError::Malformed { id: s.id, reason: "ids must be 0..n".into() });
            }
            let expected = if s.dim == 0 { 0 } else { s.dim + 1 };
            if s.faces.len() != expected {
                return Err(MssetError::Malformed { id: s.id, reason: format!("{} faces", s.faces.len()) });
            }
            let mut faces = Vec::new();
            for f in &s.faces {
                if f.id >= s.id {
                    return Err(MssetError::Malformed { id: s.id, reason: "faces must precede the simplex".into() });
                }
                let r = SimplexRef::from_degeneracies(f.id, s.dim - 1, &f.degeneracies);
                if r.sigma[s.dim - 1] != x.simplices[f.id].dim {
                    return Err(MssetError::Malformed { id: s.id, reason: format!("face {} has the wrong dimension", f.id) });
                }
                faces.push(r);
            }
            x.push(s.dim, faces, s.marked, s.label.clone());
        }
        let problems = x.check_identities();
        if let Some(p) = problems.first() {
            return Err(MssetError::Malformed { id: 0, reason: p.clone() });
        }
        Ok(x)
    }

    pub fn new(cutoff: Option<usize>) -> Self {
        MarkedSimplicialSet { simplices: Vec::new(), cutoff }
    }

    /// Appends a nondegenerate simplex; its faces must already exist.
    pub fn push(&mut self, dim: usize, faces: Vec<SimplexRef>, marked: bool, label: Option<String>) -> usize {
        debug_assert!(faces.iter().all(|f| f.id < self.simplices.len()));
        self.simplices.push(Simplex { dim, faces, marked: marked && dim > 0, label });
        self.simplices.len() - 1
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn cutoff(&self) -> Option<usize> {
        self.cutoff
    }

    pub fn set_cutoff(&mut self, cutoff: Option<usize>) {
        self.cutoff = cutoff;
    }

    pub fn simplex(&self, id: usize) -> &Simplex {
        &self.simplices[id]
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn dim(&self, id: usize) -> usize {
        self.simplices[id].dim
    }

    pub fn is_marked(&self, id: usize) -> bool {
        self.simplices[id].marked
    }

    pub fn set_marked(&mut self, id: usize, marked: bool) {
        self.simplices[id].marked = marked && self.simplices[id].dim > 0;
    }

    /// Marked as a general simplex: degenerate simplices always are.
    pub fn is_marked_ref(&self, r: &SimplexRef) -> bool {
        r.is_degenerate() || self.is_marked(r.id)
    }

    pub fn nd(&self, id: usize) -> SimplexRef {
        SimplexRef::nondegenerate(id, self.dim(id))
    }

    pub fn ids_of_dim(&self, d: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&i| self.simplices[i].dim == d)
    }

    /// Number of nondegenerate simplices per dimension.
    pub fn counts(&self) -> Vec<usize> {
        let top = self.simplices.iter().map(|s| s.dim).max().map_or(0, |d| d + 1);
        let mut c = vec![0; top];
        for s in &self.simplices {
            c[s.dim] += 1;
        }
        c
    }

    pub fn marked_counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.counts().len()];
        for s in self.simplices.iter().filter(|s| s.marked) {
            c[s.dim] += 1;
        }
        c
    }

    pub fn find_label(&self, label: &str) -> Option<usize> {
        self.simplices.iter().position(|s| s.label.as_deref() == Some(label))
    }

    /// `r ∘ α` for a monotone `α: [n'] -> [dim r]` given by its images.
    pub fn apply(&self, r: &SimplexRef, alpha: &[usize]) -> SimplexRef {
        let comp: Vec<usize> = alpha.iter().map(|&i| r.sigma[i]).collect();
        let iota: Vec<usize> = comp.iter().copied().dedup().collect();
        let mut tau = Vec::with_capacity(comp.len());
        let mut t = 0;
        for (i, &v) in comp.iter().enumerate() {
            if i > 0 && v != comp[i - 1] {
                t += 1;
            }
            debug_assert_eq!(iota[t], v);
            tau.push(t);
        }
        let face = self.face_along(r.id, &iota);
        SimplexRef { id: face.id, sigma: tau.iter().map(|&t| face.sigma[t]).collect() }
    }

    /// The face of a nondegenerate simplex along an injective monotone map.
    fn face_along(&self, id: usize, iota: &[usize]) -> SimplexRef {
        let d = self.dim(id);
        if iota.len() == d + 1 {
            return self.nd(id);
        }
        let missing = (0..=d).find(|v| !iota.contains(v)).expect("a proper face misses a vertex");
        let face = &self.simplices[id].faces[missing];
        let rest: Vec<usize> = iota.iter().map(|&v| if v < missing { v } else { v - 1 }).collect();
        self.apply(face, &rest)
    }

    /// `d_i` of a general simplex.
    pub fn face(&self, r: &SimplexRef, i: usize) -> SimplexRef {
        let n = r.dim();
        let coface: Vec<usize> = (0..n).map(|j| if j < i { j } else { j + 1 }).collect();
        self.apply(r, &coface)
    }

    /// `s_i` of a general simplex.
    pub fn degeneracy(&self, r: &SimplexRef, i: usize) -> SimplexRef {
        let n = r.dim();
        let codeg: Vec<usize> = (0..=n + 1).map(|j| if j <= i { j } else { j - 1 }).collect();
        self.apply(r, &codeg)
    }

    /// Problems with the stored face data; empty when the simplicial identities hold.
    pub fn check_identities(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (id, s) in self.simplices.iter().enumerate() {
            if s.dim == 0 {
                if !s.faces.is_empty() {
                    out.push(format!("vertex {id} has faces"));
                }
                if s.marked {
                    out.push(format!("vertex {id} is marked"));
                }
                continue;
            }
            if s.faces.len() != s.dim + 1 {
                out.push(format!("simplex {id} has {} faces", s.faces.len()));
                continue;
            }
            for (i, f) in s.faces.iter().enumerate() {
                let ok = f.id < id
                    && f.dim() == s.dim - 1
                    && f.sigma[0] == 0
                    && f.sigma.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1)
                    && f.sigma[f.dim()] == self.dim(f.id);
                if !ok {
                    out.push(format!("face {i} of simplex {id} is malformed"));
                }
            }
            if !out.is_empty() || s.dim < 2 {
                continue;
            }
            for j in 1..=s.dim {
                for i in 0..j {
                    let lhs = self.face(&s.faces[j], i);
                    let rhs = self.face(&s.faces[i], j - 1);
                    if lhs != rhs {
                        out.push(format!("d{i} d{j} != d{} d{i} on simplex {id}", j - 1));
                    }
                }
            }
        }
        out
    }

    pub fn sharp(&self) -> MarkedSimplicialSet {
        let mut x = self.clone();
        for s in &mut x.simplices {
            s.marked = s.dim > 0;
        }
        x
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("msset serializes")
    }
}

/// A map sending each nondegenerate source simplex to a general target simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MssetMap {
    pub images: Vec<SimplexRef>,
}

impl Serialize for MssetMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<FaceJson> = self.images.iter().map(|r| FaceJson { id: r.id, degeneracies: r.degeneracies() }).collect();
        v.serialize(s)
    }
}

impl MssetMap {
    pub fn identity(x: &MarkedSimplicialSet) -> Self {
        MssetMap { images: (0..x.len()).map(|i| x.nd(i)).collect() }
    }

    pub fn on(&self, r: &SimplexRef) -> SimplexRef {
        r.through(&self.images[r.id])
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &MssetMap) -> MssetMap {
        MssetMap { images: first.images.iter().map(|r| self.on(r)).collect() }
    }
}

/// Violations of the simplicial-map and marking laws.
pub fn validate_map(src: &MarkedSimplicialSet, tgt: &MarkedSimplicialSet, f: &MssetMap) -> Vec<String> {
    let mut out = Vec::new();
    if f.images.len() != src.len() {
        out.push(format!("{} images for {} simplices", f.images.len(), src.len()));
        return out;
    }
    for (id, s) in src.simplices.iter().enumerate() {
        let img = &f.images[id];
        if img.dim() != s.dim || img.id >= tgt.len() || img.sigma[img.dim()] != tgt.dim(img.id) {
            out.push(format!("image of {id} has the wrong shape"));
            continue;
        }
        for (i, face) in s.faces.iter().enumerate() {
            if f.on(face) != tgt.face(img, i) {
                out.push(format!("face {i} of {id} does not commute"));
            }
        }
        if s.marked && !tgt.is_marked_ref(img) {
            out.push(format!("marked simplex {id} maps to an unmarked simplex"));
        }
    }
    out
}

pub fn is_mono(f: &MssetMap) -> bool {
    let mut seen = std::collections::HashSet::new();
    f.images.iter().all(|r| !r.is_degenerate() && seen.insert(r.id))
}

/// Mono, and a simplex is marked exactly when its image is.
pub fn is_regular(src: &MarkedSimplicialSet, tgt: &MarkedSimplicialSet, f: &MssetMap) -> bool {
    is_mono(f) && f.images.iter().enumerate().all(|(i, r)| src.is_marked(i) == tgt.is_marked(r.id))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Plain,
    Prime,
    DoublePrime,
}

/// Builds a subcomplex of `Δ[m]` from predicates on vertex subsets.
fn from_subsets(m: usize, include: impl Fn(&[usize]) -> bool, marked: impl Fn(&[usize]) -> bool) -> MarkedSimplicialSet {
    let mut x = MarkedSimplicialSet::new(None);
    let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
    for size in 1..=m + 1 {
        for s in (0..=m).combinations(size) {
            if !include(&s) {
                continue;
            }
            let faces = if size == 1 {
                Vec::new()
            } else {
                (0..size)
                    .map(|i| {
                        let mut f = s.clone();
                        f.remove(i);
                        SimplexRef::nondegenerate(ids[&f], size - 2)
                    })
                    .collect()
            };
            let id = x.push(size - 1, faces, marked(&s), Some(simplex_label(&s)));
            ids.insert(s, id);
        }
    }
    x
}

/// The marking of `Δ^k[m]` and its primed variants.
fn standard_marking(m: usize, k: usize, variant: Variant) -> impl Fn(&[usize]) -> bool {
    move |s: &[usize]| {
        if s.len() < 2 {
            return false;
        }
        let lo = k.saturating_sub(1);
        let hi = (k + 1).min(m);
        if (lo..=hi).all(|v| s.contains(&v)) {
            return true;
        }
        let is_face = |i: usize| s.len() == m && !s.contains(&i);
        let primed = (k >= 1 && is_face(k - 1)) || (k < m && is_face(k + 1));
        match variant {
            Variant::Plain => false,
            Variant::Prime => primed,
            Variant::DoublePrime => primed || is_face(k),
        }
    }
}

/// `Δ^k[m]`, `Δ^k[m]'` or `Δ^k[m]''`.
pub fn standard(m: usize, k: usize, variant: Variant) -> Result<MarkedSimplicialSet, MssetError> {
    if k > m {
        return Err(MssetError::OutOfRange { m, k });
    }
    Ok(from_subsets(m, |_| true, standard_marking(m, k, variant)))
}

/// The regular `k`-horn inside `Δ^k[m]` (plain) or `Δ^k[m]'` (prime).
pub fn horn(m: usize, k: usize, variant: Variant) -> Result<MarkedSimplicialSet, MssetError> {
    if k > m || m == 0 {
        return Err(MssetError::OutOfRange { m, k });
    }
    let include = move |s: &[usize]| s.len() < m || (s.len() == m && s.contains(&k));
    Ok(from_subsets(m, include, standard_marking(m, k, variant)))
}

/// The unmarked standard simplex.
pub fn simplex(m: usize) -> MarkedSimplicialSet {
    from_subsets(m, |_| true, |_| false)
}

pub fn boundary(m: usize) -> MarkedSimplicialSet {
    from_subsets(m, |s| s.len() <= m, |_| false)
}

pub fn delta3_eq() -> MarkedSimplicialSet {
    from_subsets(3, |_| true, |s| s.len() >= 3 || s == [0, 2] || s == [1, 3])
}

pub fn delta3_sharp() -> MarkedSimplicialSet {
    from_subsets(3, |_| true, |s| s.len() >= 2)
}

/// `Δ[m]` with its top simplex marked.
pub fn delta_t(m: usize) -> MarkedSimplicialSet {
    from_subsets(m, |_| true, move |s| s.len() == m + 1)
}

/// Identifies simplices with equal labels.
pub fn inclusion_by_label(src: &MarkedSimplicialSet, tgt: &MarkedSimplicialSet) -> Option<MssetMap> {
    let index: HashMap<&str, usize> =
        tgt.simplices.iter().enumerate().filter_map(|(i, s)| s.label.as_deref().map(|l| (l, i))).collect();
    let images = src
        .simplices
        .iter()
        .map(|s| s.label.as_deref().and_then(|l| index.get(l)).map(|&i| tgt.nd(i)))
        .collect::<Option<Vec<_>>>()?;
    Some(MssetMap { images })
}

pub const BOTTOM_ID: usize = 0;
pub const TOP_ID: usize = 1;

/// The marked suspension: poles first, then one simplex per nondegenerate simplex of `x`.
pub fn suspend_msset(x: &MarkedSimplicialSet) -> MarkedSimplicialSet {
    let mut out = MarkedSimplicialSet::new(x.cutoff.map(|c| c + 1));
    out.push(0, Vec::new(), false, Some("bot".into()));
    out.push(0, Vec::new(), false, Some("top".into()));
    for (id, s) in x.simplices.iter().enumerate() {
        let k = s.dim;
        let mut faces = Vec::with_capacity(k + 2);
        if k == 0 {
            faces.push(SimplexRef::nondegenerate(TOP_ID, 0));
        } else {
            for f in &s.faces {
                faces.push(suspend_ref(f));
            }
        }
        faces.push(SimplexRef { id: BOTTOM_ID, sigma: vec![0; k + 1] });
        let label = Some(format!("S({})", s.label.clone().unwrap_or_else(|| id.to_string())));
        out.push(k + 1, faces, s.marked, label);
    }
    out
}

fn suspend_ref(r: &SimplexRef) -> SimplexRef {
    let mut sigma = r.sigma.clone();
    sigma.push(r.sigma[r.dim()] + 1);
    SimplexRef { id: r.id + 2, sigma }
}

/// `Σf`, fixing the poles.
pub fn suspend_map(f: &MssetMap) -> MssetMap {
    let mut images = vec![SimplexRef::nondegenerate(BOTTOM_ID, 0), SimplexRef::nondegenerate(TOP_ID, 0)];
    images.extend(f.images.iter().map(suspend_ref));
    MssetMap { images }
}

/// All monotone surjections `[n] -> [p]`, by degeneracy set.
fn surjections(n: usize, p: usize) -> Vec<Vec<usize>> {
    if p > n {
        return Vec::new();
    }
    (0..n)
        .combinations(n - p)
        .map(|degs| SimplexRef::from_degeneracies(0, n, &degs).sigma)
        .collect()
}

/// Cartesian product; a simplex is marked iff both projections are marked or degenerate.
pub fn product(x: &MarkedSimplicialSet, y: &MarkedSimplicialSet) -> MarkedSimplicialSet {
    let cutoff = match (x.cutoff, y.cutoff) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    let top_x = x.counts().len().saturating_sub(1);
    let top_y = y.counts().len().saturating_sub(1);
    let top = (top_x + top_y).min(cutoff.unwrap_or(usize::MAX));
    let mut out = MarkedSimplicialSet::new(cutoff);
    type Key = (usize, Vec<usize>, usize, Vec<usize>);
    let mut ids: HashMap<Key, usize> = HashMap::new();
    if x.is_empty() || y.is_empty() {
        return out;
    }
    for n in 0..=top {
        for xi in 0..x.len() {
            let p = x.dim(xi);
            if p > n {
                continue;
            }
            for yi in 0..y.len() {
                let q = y.dim(yi);
                if q > n || p + q < n {
                    continue;
                }
                for sx in surjections(n, p) {
                    for sy in surjections(n, q) {
                        if (0..n).any(|j| sx[j] == sx[j + 1] && sy[j] == sy[j + 1]) {
                            continue;
                        }
                        let a = SimplexRef { id: xi, sigma: sx.clone() };
                        let b = SimplexRef { id: yi, sigma: sy.clone() };
                        let faces = if n == 0 {
                            Vec::new()
                        } else {
                            (0..=n).map(|i| normalize_pair(&x.face(&a, i), &y.face(&b, i), &ids)).collect()
                        };
                        let marked = n > 0 && x.is_marked_ref(&a) && y.is_marked_ref(&b);
                        let label = Some(format!(
                            "({}{:?},{}{:?})",
                            x.simplex(xi).label.clone().unwrap_or_else(|| xi.to_string()),
                            sx,
                            y.simplex(yi).label.clone().unwrap_or_else(|| yi.to_string()),
                            sy
                        ));
                        let id = out.push(n, faces, marked, label);
                        ids.insert((xi, sx.clone(), yi, sy.clone()), id);
                    }
                }
            }
        }
    }
    out
}

fn normalize_pair(
    a: &SimplexRef,
    b: &SimplexRef,
    ids: &HashMap<(usize, Vec<usize>, usize, Vec<usize>), usize>,
) -> SimplexRef {
    let n = a.dim();
    let mut rho = vec![0usize; n + 1];
    for j in 0..n {
        let common = a.sigma[j] == a.sigma[j + 1] && b.sigma[j] == b.sigma[j + 1];
        rho[j + 1] = rho[j] + usize::from(!common);
    }
    let e = rho[n];
    let mut sa = vec![0; e + 1];
    let mut sb = vec![0; e + 1];
    for j in 0..=n {
        sa[rho[j]] = a.sigma[j];
        sb[rho[j]] = b.sigma[j];
    }
    let id = ids[&(a.id, sa, b.id, sb)];
    SimplexRef { id, sigma: rho }
}

/// `Y ⊔_A X` along a mono `f: A -> X` and any `g: A -> Y`.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub object: MarkedSimplicialSet,
    /// Keeps ids: simplex `i` of `Y` is simplex `i` of the pushout.
    pub from_y: MssetMap,
    pub from_x: MssetMap,
    /// The `X`-simplex behind each appended simplex, in order.
    pub new_from_x: Vec<usize>,
}

impl Pushout {
    /// The map out of the pushout determined by `u: Y -> Z` and `v: X -> Z`.
    pub fn copair(&self, u: &MssetMap, v: &MssetMap) -> MssetMap {
        let mut images = u.images.clone();
        images.extend(self.new_from_x.iter().map(|&xi| v.images[xi].clone()));
        MssetMap { images }
    }
}

pub fn pushout(
    a: &MarkedSimplicialSet,
    x: &MarkedSimplicialSet,
    f: &MssetMap,
    y: &MarkedSimplicialSet,
    g: &MssetMap,
) -> Result<Pushout, MssetError> {
    if f.images.len() != a.len() || g.images.len() != a.len() {
        return Err(MssetError::MapSize { expected: a.len(), found: f.images.len().min(g.images.len()) });
    }
    if !is_mono(f) {
        return Err(MssetError::NotMono);
    }
    let preimage: HashMap<usize, usize> = f.images.iter().enumerate().map(|(ai, r)| (r.id, ai)).collect();
    let mut object = y.clone();
    object.cutoff = match (x.cutoff, y.cutoff) {
        (Some(p), Some(q)) => Some(p.min(q)),
        (p, q) => p.or(q),
    };
    let mut to_p: Vec<SimplexRef> = Vec::with_capacity(x.len());
    let mut new_from_x = Vec::new();
    for (xi, s) in x.simplices.iter().enumerate() {
        if let Some(&ai) = preimage.get(&xi) {
            to_p.push(g.images[ai].clone());
            continue;
        }
        let faces = s.faces.iter().map(|r| r.through(&to_p[r.id])).collect();
        let id = object.push(s.dim, faces, s.marked, s.label.clone());
        new_from_x.push(xi);
        to_p.push(object.nd(id));
    }
    for (ai, r) in g.images.iter().enumerate() {
        if !r.is_degenerate() && x.is_marked(f.images[ai].id) {
            object.set_marked(r.id, true);
        }
    }
    Ok(Pushout { from_y: MssetMap::identity(y), from_x: MssetMap { images: to_p }, new_from_x, object })
}

/// Closes a set of simplex ids under taking faces.
pub fn face_closure(x: &MarkedSimplicialSet, seeds: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    let mut stack: Vec<usize> = seeds.into_iter().collect();
    while let Some(i) = stack.pop() {
        if out.insert(i) {
            stack.extend(x.simplex(i).faces.iter().map(|f| f.id));
        }
    }
    out
}

/// A regular sub-object, with its inclusion and the ambient ids in order.
#[derive(Clone, Debug)]
pub struct SubObject {
    pub object: MarkedSimplicialSet,
    pub inclusion: MssetMap,
    pub ids: Vec<usize>,
}

/// The regular sub-object on a face-closed set of ids.
pub fn restrict(x: &MarkedSimplicialSet, ids: &BTreeSet<usize>) -> SubObject {
    let mut local = HashMap::new();
    let mut object = MarkedSimplicialSet::new(x.cutoff);
    let mut order = Vec::new();
    for &i in ids {
        let s = x.simplex(i);
        let faces = s.faces.iter().map(|f| SimplexRef { id: local[&f.id], sigma: f.sigma.clone() }).collect();
        let id = object.push(s.dim, faces, s.marked, s.label.clone());
        local.insert(i, id);
        order.push(i);
    }
    let inclusion = MssetMap { images: order.iter().map(|&i| x.nd(i)).collect() };
    SubObject { object, inclusion, ids: order }
}

pub fn smallest_regular_containing(x: &MarkedSimplicialSet, seeds: impl IntoIterator<Item = usize>) -> SubObject {
    restrict(x, &face_closure(x, seeds))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn marked_labels(x: &MarkedSimplicialSet) -> Vec<String> {
        x.simplices().iter().filter(|s| s.marked).map(|s| s.label.clone().unwrap()).collect()
    }

    #[test]
    fn generators() {
        let s = standard(2, 1, Variant::Plain).unwrap();
        assert_eq!(marked_labels(&s), vec!["0.1.2"]);
        let h = horn(2, 1, Variant::Plain).unwrap();
        assert_eq!(h.counts(), vec![3, 2]);
        assert!(marked_labels(&h).is_empty());
        let e = delta3_eq();
        assert_eq!(marked_labels(&e), vec!["0.2", "1.3", "0.1.2", "0.1.3", "0.2.3", "1.2.3", "0.1.2.3"]);
        let p = standard(3, 1, Variant::DoublePrime).unwrap();
        assert_eq!(marked_labels(&p), vec!["0.1.2", "0.1.3", "0.2.3", "1.2.3", "0.1.2.3"]);
        assert!(standard(1, 2, Variant::Plain).is_err());
        for x in [s, h, e, p, delta3_sharp(), delta_t(3), boundary(2)] {
            assert!(x.check_identities().is_empty());
        }
    }

    #[test]
    fn horn_inclusion_is_mono() {
        let h = horn(2, 1, Variant::Plain).unwrap();
        let s = standard(2, 1, Variant::Plain).unwrap();
        let f = inclusion_by_label(&h, &s).unwrap();
        assert!(is_mono(&f));
        assert!(validate_map(&h, &s, &f).is_empty());
        assert!(is_regular(&h, &s, &f));
    }

    #[test]
    fn suspension() {
        let s = suspend_msset(&simplex(0));
        assert_eq!(s.counts(), vec![2, 1]);
        assert!(s.check_identities().is_empty());
        let b = suspend_msset(&boundary(1));
        assert_eq!(b.counts(), vec![2, 2]);
        let sharp1 = simplex(1).sharp();
        let ss = suspend_msset(&sharp1);
        assert_eq!(ss.marked_counts(), vec![0, 0, 1]);
        assert!(ss.check_identities().is_empty());
        let s2 = suspend_msset(&simplex(2));
        assert!(s2.check_identities().is_empty());
        assert_eq!(s2.counts(), vec![2, 3, 3, 1]);
    }

    #[test]
    fn products() {
        let p = product(&simplex(1), &simplex(0));
        assert_eq!(p.counts(), vec![2, 1]);
        let q = product(&simplex(1), &simplex(1));
        assert_eq!(q.counts(), vec![4, 5, 2]);
        assert!(q.check_identities().is_empty());
        let r = product(&simplex(2), &simplex(1));
        assert_eq!(r.counts(), vec![6, 12, 10, 3]);
        assert!(r.check_identities().is_empty());
        let m = product(&simplex(1).sharp(), &simplex(1).sharp());
        assert_eq!(m.marked_counts(), vec![0, 5, 2]);
        assert_eq!(delta3_sharp(), simplex(3).sharp());
    }

    #[test]
    fn pushout_of_intervals() {
        let a = simplex(0);
        let x = simplex(1);
        let y = simplex(1);
        let f = MssetMap { images: vec![x.nd(0)] };
        let g = MssetMap { images: vec![y.nd(1)] };
        let p = pushout(&a, &x, &f, &y, &g).unwrap();
        assert_eq!(p.object.counts(), vec![3, 2]);
        assert!(p.object.check_identities().is_empty());
        assert!(validate_map(&x, &p.object, &p.from_x).is_empty());
        let collapse = MssetMap { images: vec![x.nd(0), x.nd(0)] };
        assert!(pushout(&x, &y, &collapse, &a, &MssetMap { images: vec![a.nd(0); 2] }).is_err());
    }

    #[test]
    fn json_round_trip() {
        let x = product(&simplex(1), &simplex(1).sharp());
        let s = serde_json::to_string(&x).unwrap();
        let y: MarkedSimplicialSet = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn degeneracy_normal_form() {
        let r = SimplexRef::from_degeneracies(0, 3, &[2, 0]);
        assert_eq!(r.sigma, vec![0, 0, 1, 1]);
        assert_eq!(r.degeneracies(), vec![2, 0]);
        let x = simplex(2);
        let top = x.nd(x.len() - 1);
        let s = x.degeneracy(&top, 1);
        assert_eq!(x.face(&s, 1), top);
        assert_eq!(x.face(&s, 2), top);
    }
}
