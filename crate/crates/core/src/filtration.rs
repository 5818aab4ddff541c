//! The filtration of `ΣN(νC) ⊆ N(νΣC)` by attaching suspect simplices along inner horns,
//! and certificates that replay it as pushouts of marked simplicial sets.

use crate::complex::{suspend, BasedComplex};
use crate::msset::{
    face_closure, horn, inclusion_by_label, pushout, restrict, standard, validate_map, MarkedSimplicialSet, MssetMap,
    SimplexRef, Variant,
};
use crate::nerve::{comparison_from, rs_nerve, type_of, Nerve, NerveError, Operators};
use crate::oriental::parse_simplex_label;
use crate::suspect::{is_suspect, suspect_index, SuspectError};
use serde::Serialize;
use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FiltrationError {
    #[error(transparent)]
    Nerve(#[from] NerveError),
    #[error(transparent)]
    Suspect(#[from] SuspectError),
    #[error("stage {0} does not contain its predecessor")]
    NotIncreasing(String),
    #[error("stage {stage}: {reason}")]
    Mismatch { stage: String, reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StageLabel {
    X { m: usize },
    Y { m: usize, k: usize },
    W { m: usize, k: usize, r: usize },
}

impl std::fmt::Display for StageLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StageLabel::X { m } => write!(f, "X{m}"),
            StageLabel::Y { m, k } => write!(f, "Y{k}(m={m})"),
            StageLabel::W { m, k, r } => write!(f, "W{r}(m={m},k={k})"),
        }
    }
}

/// A suspect simplex together with its `r`-th face.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AttachedPair {
    pub suspect: usize,
    pub face: usize,
    pub r: usize,
    /// Whether the face is marked; selects the primed horn.
    pub marked: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FiltrationStage {
    pub label: StageLabel,
    /// Nondegenerate simplices of the nerve in this stage.
    pub ids: BTreeSet<usize>,
    /// Pairs attached since the previous `W` stage (empty for `X`/`Y` stages).
    pub pairs: Vec<AttachedPair>,
}

#[derive(Clone, Debug)]
pub struct Filtration {
    pub nerve: Nerve,
    pub cutoff: usize,
    pub stages: Vec<FiltrationStage>,
}

#[derive(Clone, Copy, Debug)]
struct Info {
    dim: usize,
    ty: i64,
    index: Option<usize>,
    suspect: bool,
}

fn closure(nerve: &Nerve, base: &BTreeSet<usize>, extra: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
    face_closure(nerve.msset(), base.iter().copied().chain(extra))
}

/// Builds `X_1 ⊆ … ⊆ X_cutoff` with the intermediate `Y_k` and `W_r` stages.
pub fn build_filtration(c: &BasedComplex, cutoff: usize, cap: u64) -> Result<Filtration, FiltrationError> {
    let base = rs_nerve(c, cutoff, cap)?;
    let target = rs_nerve(&suspend(c), cutoff + 1, cap)?;
    let cmp = comparison_from(&base, target)?;
    let nerve = cmp.target;
    let ms = nerve.msset();
    let mut ops = Operators::default();
    let mut info = Vec::with_capacity(ms.len());
    for id in 0..ms.len() {
        let x = nerve.morphism(id);
        let ty = type_of(x);
        let index = suspect_index(x).ok().flatten();
        let suspect = index.is_some() && is_suspect(x, &mut ops)?.by_values;
        info.push(Info { dim: ms.dim(id), ty, index, suspect });
    }
    let ids_where = |pred: &dyn Fn(&Info) -> bool| -> Vec<usize> { (0..ms.len()).filter(|&i| pred(&info[i])).collect() };

    let x1: BTreeSet<usize> = face_closure(ms, cmp.map.images.iter().map(|r| r.id));
    let mut stages = vec![FiltrationStage { label: StageLabel::X { m: 1 }, ids: x1.clone(), pairs: Vec::new() }];
    let mut prev_x = x1;
    for m in 2..=cutoff {
        let x_m = closure(&nerve, &prev_x, ids_where(&|i| i.dim == m || (i.dim == m + 1 && i.suspect)));
        let mut y_next = prev_x.clone();
        for k in (1..m).rev() {
            let y_k = closure(
                &nerve,
                &y_next,
                ids_where(&|i| {
                    (i.dim == m + 1 && i.suspect && i.ty == k as i64) || (i.dim == m && !i.suspect && i.ty == k as i64 - 1)
                }),
            );
            let mut w_prev = y_next.clone();
            for r in 1..=k {
                let label = StageLabel::W { m, k, r };
                let attached = ids_where(&|i| i.dim == m + 1 && i.suspect && i.ty == k as i64 && i.index == Some(r));
                let w_r = closure(&nerve, &w_prev, attached.iter().copied());
                let mut pairs = Vec::new();
                let mut expected: BTreeSet<usize> = BTreeSet::new();
                for &s in &attached {
                    if w_prev.contains(&s) {
                        continue;
                    }
                    let face = ops.face(nerve.morphism(s), m + 1, r);
                    let nf = nerve.normal_form_of(m, &face).ok_or(NerveError::MissingSimplex(m))?;
                    if nf.is_degenerate() {
                        return Err(FiltrationError::Mismatch { stage: label.to_string(), reason: format!("d_{r} of {s} is degenerate") });
                    }
                    pairs.push(AttachedPair { suspect: s, face: nf.id, r, marked: ms.is_marked(nf.id) });
                    expected.insert(s);
                    expected.insert(nf.id);
                }
                let added: BTreeSet<usize> = w_r.difference(&w_prev).copied().collect();
                if added != expected {
                    return Err(FiltrationError::Mismatch {
                        stage: label.to_string(),
                        reason: format!("added {added:?}, pairs cover {expected:?}"),
                    });
                }
                for p in &pairs {
                    if info[p.face].index != Some(r) || info[p.face].suspect || info[p.face].ty != k as i64 - 1 {
                        return Err(FiltrationError::Mismatch {
                            stage: label.to_string(),
                            reason: format!("face {} is not a non-suspect simplex of type {} and index {r}", p.face, k - 1),
                        });
                    }
                }
                if !w_prev.is_subset(&w_r) {
                    return Err(FiltrationError::NotIncreasing(label.to_string()));
                }
                stages.push(FiltrationStage { label, ids: w_r.clone(), pairs });
                w_prev = w_r;
            }
            if w_prev != y_k {
                return Err(FiltrationError::Mismatch { stage: StageLabel::Y { m, k }.to_string(), reason: "W_k differs from Y_k".into() });
            }
            stages.push(FiltrationStage { label: StageLabel::Y { m, k }, ids: y_k.clone(), pairs: Vec::new() });
            y_next = y_k;
        }
        if y_next != x_m {
            return Err(FiltrationError::Mismatch { stage: StageLabel::X { m }.to_string(), reason: "Y_1 differs from X_m".into() });
        }
        stages.push(FiltrationStage { label: StageLabel::X { m }, ids: x_m.clone(), pairs: Vec::new() });
        prev_x = x_m;
    }
    for (id, i) in info.iter().enumerate() {
        if stages.iter().any(|s| s.pairs.iter().any(|p| p.suspect == id || p.face == id)) && i.index == Some(0) {
            return Err(FiltrationError::Mismatch { stage: "all".into(), reason: format!("simplex {id} of index 0 attached") });
        }
    }
    Ok(Filtration { nerve, cutoff, stages })
}

impl Filtration {
    /// Whether the last stage holds every simplex of dimension at most the cutoff.
    pub fn exhausts(&self) -> bool {
        let last = &self.stages.last().expect("at least one stage").ids;
        let ms = self.nerve.msset();
        (0..ms.len()).filter(|&i| ms.dim(i) <= self.cutoff).all(|i| last.contains(&i))
    }

    /// Indices of stages that attach pairs.
    pub fn steps(&self) -> Vec<usize> {
        (1..self.stages.len()).filter(|&i| matches!(self.stages[i].label, StageLabel::W { .. })).collect()
    }

    /// The stage a `W` step starts from.
    pub fn previous(&self, step: usize) -> &FiltrationStage {
        &self.stages[step - 1]
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HornSpec {
    pub m: usize,
    pub r: usize,
    pub variant: Variant,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct StepChecks {
    pub horn_faces_present: bool,
    pub horn_marking: bool,
    pub primed_faces_marked: bool,
    pub replay: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateStep {
    pub horn: HornSpec,
    pub attached: usize,
    pub face: usize,
    pub checks: StepChecks,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnodyneCertificate {
    pub stage: String,
    pub steps: Vec<CertificateStep>,
    pub replay_matches: bool,
    pub problems: Vec<String>,
}

impl AnodyneCertificate {
    pub fn accepted(&self) -> bool {
        self.problems.is_empty() && self.replay_matches
    }
}

/// Canonical text of a sub-object of the nerve given by an embedding of `p`.
fn canonical(p: &MarkedSimplicialSet, emb: &MssetMap) -> String {
    let mut rows: Vec<(usize, usize, Vec<(usize, Vec<usize>)>, bool)> = (0..p.len())
        .map(|i| {
            let s = p.simplex(i);
            let faces = s.faces.iter().map(|f| emb.on(f)).map(|r| (r.id, r.sigma)).collect();
            (emb.images[i].id, s.dim, faces, s.marked)
        })
        .collect();
    rows.sort();
    serde_json::to_string(&rows).expect("serializable")
}

fn map_into(r: &SimplexRef, local: &HashMap<usize, usize>) -> Option<SimplexRef> {
    local.get(&r.id).map(|&id| SimplexRef { id, sigma: r.sigma.clone() })
}

/// The map `Δ[n] -> N` picking out the nondegenerate simplex `top`, on every simplex of `shape`.
fn simplex_map(nerve: &MarkedSimplicialSet, shape: &MarkedSimplicialSet, top: usize) -> MssetMap {
    let r = nerve.nd(top);
    let images = shape
        .simplices()
        .iter()
        .map(|s| nerve.apply(&r, &parse_simplex_label(s.label.as_deref().expect("labelled")).expect("vertex label")))
        .collect();
    MssetMap { images }
}

/// Certifies the `W` step at `stages[step]` against the stage before it.
pub fn certify_step(f: &Filtration, step: usize) -> AnodyneCertificate {
    let next = &f.stages[step];
    let prev = f.previous(step);
    let ms = f.nerve.msset();
    let mut problems = Vec::new();
    let start = restrict(ms, &prev.ids);
    let mut p = start.object;
    let mut emb = start.inclusion;
    let mut steps = Vec::new();
    let mut pairs = next.pairs.clone();
    pairs.sort_by_key(|q| q.suspect);
    for pair in &pairs {
        let n = ms.dim(pair.suspect);
        let r = pair.r;
        let top = ms.nd(pair.suspect);
        let mut checks = StepChecks::default();

        checks.horn_faces_present = (0..=n).filter(|&a| a != r).all(|a| prev.ids.contains(&ms.face(&top, a).id));
        let spine: Vec<usize> = [r.wrapping_sub(1), r, r + 1].into_iter().filter(|&v| v <= n).collect();
        checks.horn_marking = (1..n).all(|q| {
                crate::oriental::simplices(n as i64, q).iter().filter(|s| spine.iter().all(|v| s.contains(v))).all(|s| {
                    let img = ms.apply(&top, s);
                    img.is_degenerate() || (prev.ids.contains(&img.id) && ms.is_marked(img.id))
                })
            });
        checks.primed_faces_marked =
            !pair.marked || [r - 1, r + 1].iter().all(|&a| ms.is_marked_ref(&ms.face(&top, a)));

        let variant_horn = if pair.marked { Variant::Prime } else { Variant::Plain };
        let variant_full = if pair.marked { Variant::DoublePrime } else { Variant::Plain };
        let replayed = (|| -> Result<(), String> {
            let h = horn(n, r, variant_horn).map_err(|e| e.to_string())?;
            let d = standard(n, r, variant_full).map_err(|e| e.to_string())?;
            let incl = inclusion_by_label(&h, &d).ok_or("horn labels missing")?;
            let to_nerve = simplex_map(ms, &h, pair.suspect);
            let local: HashMap<usize, usize> = emb.images.iter().enumerate().map(|(i, r)| (r.id, i)).collect();
            let into_p = MssetMap {
                images: to_nerve.images.iter().map(|r| map_into(r, &local)).collect::<Option<Vec<_>>>().ok_or("horn leaves the stage")?,
            };
            let bad = validate_map(&h, &p, &into_p);
            if !bad.is_empty() {
                return Err(format!("horn map: {}", bad.join("; ")));
            }
            let po = pushout(&h, &d, &incl, &p, &into_p).map_err(|e| e.to_string())?;
            emb = po.copair(&emb, &simplex_map(ms, &d, pair.suspect));
            p = po.object;
            Ok(())
        })();
        match replayed {
            Ok(()) => checks.replay = true,
            Err(e) => problems.push(format!("pair ({}, {}): {e}", pair.suspect, pair.face)),
        }
        for (name, ok) in [
            ("horn faces missing from the previous stage", checks.horn_faces_present),
            ("horn simplex through r-1, r, r+1 not marked", checks.horn_marking),
            ("faces r-1, r+1 not marked for a marked face", checks.primed_faces_marked),
        ] {
            if !ok {
                problems.push(format!("pair ({}, {}): {name}", pair.suspect, pair.face));
            }
        }
        steps.push(CertificateStep {
            horn: HornSpec { m: n, r, variant: variant_full },
            attached: pair.suspect,
            face: pair.face,
            checks,
        });
    }
    let expected = restrict(ms, &next.ids);
    let replay_matches = canonical(&p, &emb) == canonical(&expected.object, &expected.inclusion);
    AnodyneCertificate { stage: next.label.to_string(), steps, replay_matches, problems }
}

/// Certificates for every `W` step of the filtration.
pub fn certify_all(f: &Filtration) -> Vec<AnodyneCertificate> {
    f.steps().into_iter().map(|s| certify_step(f, s)).collect()
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(tag = "move", rename_all = "lowercase")]
pub enum Move {
    /// Fill `Λ^k[n] -> Δ^k[n]` on `simplex`, adding it and its `k`-th face.
    Horn { simplex: usize, k: usize, face: usize },
    /// `Δ^k[n]' -> Δ^k[n]''` on `simplex`, marking its `k`-th face.
    Thin { simplex: usize, k: usize, face: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchOutcome {
    pub moves: Option<Vec<Move>>,
    pub explored: usize,
    pub diagnostics: Vec<String>,
}

struct Search<'a> {
    b: &'a MarkedSimplicialSet,
    goal_dim: usize,
    budget: usize,
    explored: usize,
}

#[derive(Clone)]
struct State {
    present: BTreeSet<usize>,
    marked: BTreeSet<usize>,
}

impl Search<'_> {
    fn ok_marked(&self, st: &State, r: &SimplexRef) -> bool {
        r.is_degenerate() || st.marked.contains(&r.id)
    }

    fn spine_marked(&self, st: &State, top: &SimplexRef, n: usize, k: usize) -> bool {
        (1..n).all(|q| {
            crate::oriental::simplices(n as i64, q)
                .iter()
                .filter(|s| [k - 1, k, k + 1].iter().all(|v| s.contains(v)))
                .all(|s| self.ok_marked(st, &self.b.apply(top, s)))
        })
    }

    fn moves(&self, st: &State) -> Vec<Move> {
        let mut out = Vec::new();
        for id in 0..self.b.len() {
            let n = self.b.dim(id);
            if n < 2 {
                continue;
            }
            let top = self.b.nd(id);
            let faces: Vec<SimplexRef> = (0..=n).map(|i| self.b.face(&top, i)).collect();
            if !st.present.contains(&id) {
                if !self.b.is_marked(id) {
                    continue;
                }
                for k in 1..n {
                    let f = &faces[k];
                    if f.is_degenerate() || st.present.contains(&f.id) {
                        continue;
                    }
                    let others = (0..=n).filter(|&i| i != k).all(|i| faces[i].id != f.id && st.present.contains(&faces[i].id));
                    if others && self.spine_marked(st, &top, n, k) {
                        out.push(Move::Horn { simplex: id, k, face: f.id });
                    }
                }
            } else if st.marked.contains(&id) {
                for k in 1..n {
                    let f = &faces[k];
                    if f.is_degenerate() || st.marked.contains(&f.id) || !self.b.is_marked(f.id) {
                        continue;
                    }
                    if self.ok_marked(st, &faces[k - 1]) && self.ok_marked(st, &faces[k + 1]) && self.spine_marked(st, &top, n, k) {
                        out.push(Move::Thin { simplex: id, k, face: f.id });
                    }
                }
            }
        }
        out
    }

    fn done(&self, st: &State) -> bool {
        (0..self.b.len()).filter(|&i| self.b.dim(i) <= self.goal_dim).all(|i| {
            st.present.contains(&i) && st.marked.contains(&i) == self.b.is_marked(i)
        })
    }

    fn apply(st: &State, mv: &Move) -> State {
        let mut next = st.clone();
        match *mv {
            Move::Horn { simplex, face, .. } => {
                next.present.insert(simplex);
                next.present.insert(face);
                next.marked.insert(simplex);
            }
            Move::Thin { face, .. } => {
                next.marked.insert(face);
            }
        }
        next
    }

    fn dfs(&mut self, st: State, trail: &mut Vec<Move>) -> bool {
        if self.done(&st) {
            return true;
        }
        if self.explored >= self.budget {
            return false;
        }
        self.explored += 1;
        for mv in self.moves(&st) {
            trail.push(mv.clone());
            if self.dfs(Self::apply(&st, &mv), trail) {
                return true;
            }
            trail.pop();
            if self.explored >= self.budget {
                return false;
            }
        }
        false
    }
}

/// Searches for a sequence of inner horn and thinness pushouts realizing `incl: A -> B`.
///
/// `incl` must be a regular mono; `goal_dim` bounds the simplices of `B` that must be reached.
/// A missing certificate does not show that none exists.
pub fn certify_inner_anodyne(
    a: &MarkedSimplicialSet,
    b: &MarkedSimplicialSet,
    incl: &MssetMap,
    goal_dim: Option<usize>,
    budget: usize,
) -> SearchOutcome {
    let mut diagnostics = validate_map(a, b, incl);
    if !crate::msset::is_regular(a, b, incl) {
        diagnostics.push("inclusion is not a regular mono".into());
    }
    if !diagnostics.is_empty() {
        return SearchOutcome { moves: None, explored: 0, diagnostics };
    }
    let present: BTreeSet<usize> = incl.images.iter().map(|r| r.id).collect();
    let marked = present.iter().copied().filter(|&i| b.is_marked(i)).collect();
    let goal_dim = goal_dim.unwrap_or(usize::MAX);
    let mut search = Search { b, goal_dim, budget, explored: 0 };
    let mut trail = Vec::new();
    let found = search.dfs(State { present, marked }, &mut trail);
    if !found {
        diagnostics.push(if search.explored >= budget { "budget exhausted".into() } else { "no sequence of moves exists".into() });
    }
    SearchOutcome { moves: found.then_some(trail), explored: search.explored, diagnostics }
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossValidation {
    pub search: SearchOutcome,
    pub filtration_pairs: usize,
    pub horn_moves: usize,
    /// Both routes attach the same simplices up to the cutoff.
    pub same_cells: bool,
}

impl CrossValidation {
    pub fn agrees(&self) -> bool {
        self.search.moves.is_some() && self.same_cells && self.horn_moves == self.filtration_pairs
    }
}

/// Runs [`certify_inner_anodyne`] on `X_1 ⊆ N(νΣC)` and compares it with the filtration's attachments.
pub fn cross_validate(f: &Filtration, budget: usize) -> CrossValidation {
    let sub = restrict(f.nerve.msset(), &f.stages[0].ids);
    let search = certify_inner_anodyne(&sub.object, f.nerve.msset(), &sub.inclusion, Some(f.cutoff), budget);
    let from_filtration: BTreeSet<usize> =
        f.stages.iter().flat_map(|s| s.pairs.iter().flat_map(|p| [p.suspect, p.face])).collect();
    let mut from_search = BTreeSet::new();
    let mut horn_moves = 0;
    for mv in search.moves.iter().flatten() {
        if let Move::Horn { simplex, face, .. } = mv {
            horn_moves += 1;
            from_search.insert(*simplex);
            from_search.insert(*face);
        }
    }
    let filtration_pairs = f.stages.iter().map(|s| s.pairs.len()).sum();
    let low = |s: &BTreeSet<usize>| -> BTreeSet<usize> { s.iter().copied().filter(|&i| f.nerve.msset().dim(i) <= f.cutoff).collect() };
    CrossValidation { same_cells: low(&from_search) == low(&from_filtration), search, filtration_pairs, horn_moves }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::DEFAULT_CAP;
    use crate::oriental::oriental;

    #[test]
    fn point_is_constant() {
        let f = build_filtration(&oriental(0), 4, DEFAULT_CAP).unwrap();
        assert!(f.exhausts());
        assert!(f.stages.iter().all(|s| s.pairs.is_empty()));
        assert!(f.stages.iter().all(|s| s.ids == f.stages[0].ids));
    }

    #[test]
    fn interval_filtration_certifies() {
        let f = build_filtration(&oriental(1), 3, DEFAULT_CAP).unwrap();
        assert!(f.exhausts());
        let certs = certify_all(&f);
        assert!(certs.iter().all(|c| c.accepted()), "{:?}", certs.iter().map(|c| &c.problems).collect::<Vec<_>>());
        let attached: usize = certs.iter().map(|c| c.steps.len()).sum();
        assert!(attached > 0);
        assert!(cross_validate(&f, 10_000).agrees());
    }

    #[test]
    fn horn_generators() {
        let h = horn(2, 1, Variant::Plain).unwrap();
        let d = standard(2, 1, Variant::Plain).unwrap();
        let incl = inclusion_by_label(&h, &d).unwrap();
        let out = certify_inner_anodyne(&h, &d, &incl, None, 100);
        assert_eq!(out.moves.map(|m| m.len()), Some(1));

        let h = horn(2, 1, Variant::Prime).unwrap();
        let d = standard(2, 1, Variant::DoublePrime).unwrap();
        let incl = inclusion_by_label(&h, &d).unwrap();
        let out = certify_inner_anodyne(&h, &d, &incl, None, 100);
        let moves = out.moves.unwrap();
        assert_eq!(moves.len(), 2);
        assert!(matches!(moves[1], Move::Thin { .. }));
    }

    #[test]
    fn outer_horn_has_no_certificate() {
        let h = horn(2, 0, Variant::Plain).unwrap();
        let d = standard(2, 0, Variant::Plain).unwrap();
        let incl = inclusion_by_label(&h, &d).unwrap();
        assert!(certify_inner_anodyne(&h, &d, &incl, None, 100).moves.is_none());
    }
}
