//! The verification suite: every check the CLI can run, as independent jobs.

use crate::complex::{
    suspend, suspend_morphism, tensor_of_orientals, total_dual, validate_complex, validate_morphism, verify_phi_epi,
    verify_suspension_pushout, phi_map, AdcMorphism, BasedComplex,
};
use crate::filtration::{build_filtration, certify_all, cross_validate};
use crate::hom::{enumerate_homs, hom_bijection_check};
use crate::lp::recession_cone_trivial;
use crate::msset::{product, simplex};
use crate::mutation::{with_mutations, Mutations};
use crate::nerve::comparison_inclusion;
use crate::nu::{check_dual_cells, check_nu_sigma_iso, enumerate_cells, linearized_ranks};
use crate::oriental::{binomial, oriental, simplicial_operator, MonotoneMap};
use crate::suspect::verify_bijection;
use crate::theta::{completeness_map, segality_map, theta_adc, ThetaExpr};
use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Indeterminate,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Indeterminate => "indeterminate",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Quick,
    Full,
}

impl FromStr for Profile {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "quick" => Ok(Profile::Quick),
            "full" => Ok(Profile::Full),
            _ => Err(format!("unknown profile {s:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub id: String,
    /// Acceptance criterion this entry belongs to; 0 for supporting checks.
    pub criterion: u8,
    pub params: Value,
    pub status: Status,
    /// Seconds.
    pub elapsed: f64,
    pub details: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub profile: Profile,
    pub mutations: Mutations,
    pub entries: Vec<Entry>,
}

impl VerificationReport {
    pub fn count(&self, s: Status) -> usize {
        self.entries.iter().filter(|e| e.status == s).count()
    }

    /// 0 when everything passed, 1 on any failure, 2 when the rest is indeterminate.
    pub fn exit_code(&self) -> i32 {
        if self.count(Status::Fail) > 0 {
            1
        } else if self.count(Status::Indeterminate) > 0 {
            2
        } else {
            0
        }
    }

    /// Combined status of the entries for one criterion; `None` if it has none.
    pub fn criterion_status(&self, criterion: u8) -> Option<Status> {
        let mut it = self.entries.iter().filter(|e| e.criterion == criterion).peekable();
        it.peek()?;
        let mut out = Status::Pass;
        for e in it {
            match e.status {
                Status::Fail => return Some(Status::Fail),
                Status::Indeterminate => out = Status::Indeterminate,
                Status::Pass => {}
            }
        }
        Some(out)
    }
}

/// The result of one job.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
    indeterminate: bool,
}

impl Outcome {
    pub fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    pub fn note(&mut self, what: impl Into<String>) {
        self.notes.push(what.into());
    }

    /// Records an error, as indeterminate when it only reports an incomplete enumeration.
    pub fn error(&mut self, what: impl fmt::Display) {
        let what = what.to_string();
        if what.contains("incomplete") {
            self.unknown(what);
        } else {
            self.failures.push(what);
        }
    }

    pub fn unknown(&mut self, what: impl Into<String>) {
        self.indeterminate = true;
        self.notes.push(what.into());
    }

    fn status(&self) -> Status {
        if !self.failures.is_empty() {
            Status::Fail
        } else if self.indeterminate {
            Status::Indeterminate
        } else {
            Status::Pass
        }
    }
}

type Job = Box<dyn Fn(&mut Outcome) + Send + Sync>;

pub struct Check {
    pub id: String,
    pub criterion: u8,
    pub params: Value,
    job: Job,
}

fn check(id: &str, criterion: u8, params: Value, job: impl Fn(&mut Outcome) + Send + Sync + 'static) -> Check {
    Check { id: id.to_string(), criterion, params, job: Box::new(job) }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    pub profile: Profile,
    pub cap: u64,
    pub mutations: Mutations,
    /// Worker threads; `None` uses rayon's default.
    pub jobs: Option<usize>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { profile: Profile::Quick, cap: crate::hom::DEFAULT_CAP, mutations: Mutations::none(), jobs: None }
    }
}

fn named_complexes(names: &[&str]) -> Vec<(String, BasedComplex)> {
    names.iter().map(|n| (n.to_string(), named_complex(n).expect("known name"))).collect()
}

/// `O0`..`O6` and `O1xO1op`.
pub fn named_complex(name: &str) -> Option<BasedComplex> {
    if name == "O1xO1op" {
        return Some(tensor_of_orientals(1, 1));
    }
    let m: i64 = name.strip_prefix('O')?.parse().ok()?;
    (m >= -1).then(|| oriental(m))
}

/// Every monotone map `[m] -> [n]`, listed directly.
fn monotone_maps(m: usize, n: usize) -> Vec<Vec<usize>> {
    (0..=n).combinations_with_replacement(m + 1).collect()
}

pub fn checks(profile: Profile, cap: u64) -> Vec<Check> {
    let full = profile == Profile::Full;
    let top = if full { 4 } else { 3 };
    let mut out = Vec::new();

    out.push(check("oriental-laws", 1, json!({"m": "-1..=6"}), |o| {
        for m in -1..=6i64 {
            let c = oriental(m);
            o.check(validate_complex(&c).map(|r| r.is_valid()).unwrap_or(false), format!("O[{m}] invalid"));
            let expected: Vec<usize> = (0..=m.max(0)).map(|q| binomial(m + 1, q + 1) as usize).collect();
            let got: Vec<usize> = if m < 0 { vec![c.rank(0)] } else { c.ranks() };
            o.check(got == expected, format!("O[{m}] ranks {got:?}, expected {expected:?}"));
            for q in 0..m.max(0) as usize {
                o.check(recession_cone_trivial(&c.differential(q)), format!("O[{m}] has a nonnegative {}-cycle", q + 1));
            }
        }
    }));
    out.push(check("cosimplicial-identities", 1, json!({"m": "0..=3"}), |o| {
        for m in 0..=3usize {
            for i in 0..=m + 2 {
                for j in i + 1..=m + 2 {
                    // d^j d^i = d^i d^{j-1}
                    let lhs = simplicial_operator(&MonotoneMap::coface(m + 2, j)).after(&simplicial_operator(&MonotoneMap::coface(m + 1, i)));
                    let rhs = simplicial_operator(&MonotoneMap::coface(m + 2, i)).after(&simplicial_operator(&MonotoneMap::coface(m + 1, j - 1)));
                    o.check(lhs == rhs, format!("coface identity fails at m={m}, i={i}, j={j}"));
                }
            }
        }
    }));

    let kl: Vec<(usize, usize)> = (0..=3).cartesian_product(0..=3).collect();
    {
        let kl = kl.clone();
        out.push(check("phi-valid", 2, json!({"k": "0..=3", "l": "0..=3"}), move |o| {
            for &(k, l) in &kl {
                let target = suspend(&tensor_of_orientals(k as i64, l as i64));
                let r = validate_morphism(&oriental((k + l + 1) as i64), &target, &phi_map(k, l));
                o.check(r.as_ref().map(|r| r.is_valid()).unwrap_or(false), format!("phi({k},{l}): {:?}", r.map(|r| r.messages())));
            }
        }));
    }
    {
        let kl = kl.clone();
        out.push(check("phi-epi", 3, json!({"k": "0..=3", "l": "0..=3"}), move |o| {
            for &(k, l) in &kl {
                o.check(verify_phi_epi(k, l), format!("phi({k},{l}) is not onto the basis"));
            }
        }));
    }
    out.push(check("suspension-pushout", 4, json!({"k": "0..=3", "l": "0..=3"}), move |o| {
        for &(k, l) in &kl {
            let r = verify_suspension_pushout(k, l);
            o.check(r.holds(), format!("pushout({k},{l}): {:?}", r.details));
        }
    }));

    let hom_names: &[&str] = if full { &["O0", "O1", "O2", "O1xO1op"] } else { &["O0", "O1", "O1xO1op"] };
    for (name, c) in named_complexes(hom_names) {
        out.push(check(&format!("hom-bijection/{name}"), 5, json!({"complex": name, "m": format!("0..={top}")}), move |o| {
            for m in 0..=top {
                let r = hom_bijection_check(&c, m, cap);
                match r.bijective {
                    None => o.unknown(format!("m={m}: enumeration incomplete at cap {cap}")),
                    Some(ok) => o.check(ok, format!("m={m}: {:?}", r.details)),
                }
                o.note(format!("m={m}: {} summands, {} simplices", r.left_count, r.right_count));
            }
        }));
    }

    out.push(check("nerve-counts", 6, json!({"m": "0..=5"}), move |o| {
        for m in 0..=5usize {
            let e = enumerate_homs(&oriental(m as i64), &oriental(1), cap);
            if !e.complete {
                o.unknown(format!("m={m}: incomplete"));
            }
            let oracle = monotone_maps(m, 1).len();
            o.check(e.morphisms.len() == oracle, format!("m={m}: {} maps, {oracle} monotone maps", e.morphisms.len()));
        }
    }));
    out.push(check("cell-counts", 6, json!({"complex": "O2", "dim": 1}), move |o| {
        // 3 identities, 3 generating arrows, one composite.
        let e = enumerate_cells(&oriental(2), 1, cap);
        o.check(e.complete, "incomplete");
        o.check(e.cells[1].len() == 7, format!("{} 1-cells", e.cells[1].len()));
        let h = enumerate_homs(&oriental(1), &oriental(2), cap);
        o.check(h.morphisms.len() == e.cells[1].len(), "hom count differs from cell count");
    }));

    let nu_names: &[&str] = if full { &["O0", "O1", "O2"] } else { &["O0", "O1"] };
    for (name, c) in named_complexes(nu_names) {
        out.push(check(&format!("nu-sigma/{name}"), 7, json!({"complex": name, "max_dim": top}), move |o| {
            let r = check_nu_sigma_iso(&c, top, cap);
            match r.holds {
                None => o.unknown("enumeration incomplete"),
                Some(ok) => o.check(ok, format!("{:?}", r.details)),
            }
            o.note(format!("{} cells, {} compositions", r.cells_checked, r.compositions_checked));
        }));
    }

    let cmp_names: &[&str] = if full { &["O0", "O1", "O2"] } else { &["O0", "O1"] };
    for (name, c) in named_complexes(cmp_names) {
        out.push(check(&format!("comparison/{name}"), 8, json!({"complex": name, "max_dim": top}), move |o| {
            match comparison_inclusion(&c, top, cap) {
                Err(e) => o.error(e),
                Ok(cmp) => {
                    o.check(cmp.mono, "not levelwise injective");
                    o.check(cmp.regular, "not regular");
                    o.check(cmp.image_matches, "image differs from the poles and type-(m-1) simplices");
                    for p in &cmp.problems {
                        o.check(false, p.clone());
                    }
                }
            }
            for m in 0..top {
                match verify_bijection(&c, m, cap) {
                    Err(e) => o.error(format!("m={m}: {e}")),
                    Ok(r) => {
                        for p in r.problems.iter().filter(|p| p.starts_with("complement") || p.starts_with("image")) {
                            o.check(false, format!("m={m}: {p}"));
                        }
                        o.note(format!("dim {}: {} outside the image", m + 1, r.complement_count));
                    }
                }
            }
        }));
    }

    let sus_names: &[&str] = if full { &["O1", "O2"] } else { &["O1"] };
    for (name, c) in named_complexes(sus_names) {
        out.push(check(&format!("suspect/{name}"), 9, json!({"complex": name, "max_dim": top}), move |o| {
            for m in 0..top {
                match verify_bijection(&c, m, cap) {
                    Err(e) => o.error(format!("m={m}: {e}")),
                    Ok(r) => {
                        o.check(r.suspect_count == r.non_suspect_count, format!("m={m}: {} suspect against {} non-suspect", r.suspect_count, r.non_suspect_count));
                        for p in &r.problems {
                            o.check(false, format!("m={m}: {p}"));
                        }
                        o.note(format!("m={m}: {} pairs", r.suspect_count));
                    }
                }
            }
        }));
    }

    let thm_names: &[&str] = if full { &["O0", "O1", "O2"] } else { &["O0", "O1"] };
    for (name, c) in named_complexes(thm_names) {
        let cross = name == "O1" || full;
        out.push(check(&format!("filtration/{name}"), 10, json!({"complex": name, "cutoff": top}), move |o| {
            match build_filtration(&c, top, cap) {
                Err(e) => o.error(e),
                Ok(f) => {
                    o.check(f.exhausts(), "final stage is not the whole truncated nerve");
                    let certs = certify_all(&f);
                    let mut horns = 0;
                    for cert in &certs {
                        o.check(cert.accepted(), format!("{}: {:?}", cert.stage, cert.problems));
                        horns += cert.steps.len();
                    }
                    o.note(format!("{} steps, {horns} horns", certs.len()));
                    if cross {
                        let cv = cross_validate(&f, 100_000);
                        if cv.search.moves.is_none() {
                            o.unknown(format!("search found no certificate: {:?}", cv.search.diagnostics));
                        } else {
                            o.check(cv.agrees(), format!("search attaches {} horns, filtration {}", cv.horn_moves, cv.filtration_pairs));
                        }
                    }
                }
            }
        }));
    }

    out.push(check("theta-ranks", 11, json!({"shapes": ["[1|[0]]", "[2|[0],[0]]", "[1|[1|[0]]]"]}), |o| {
        for (s, expected) in [("[1|[0]]", vec![2, 1]), ("[2|[0],[0]]", vec![3, 2]), ("[1|[1|[0]]]", vec![2, 2, 1])] {
            let t: ThetaExpr = s.parse().expect("literal parses");
            let c = theta_adc(&t).complex;
            o.check(c.ranks() == expected, format!("{s}: ranks {:?}", c.ranks()));
            o.check(validate_complex(&c).map(|r| r.is_valid()).unwrap_or(false), format!("{s}: invalid"));
        }
    }));
    for j in 1..=2usize {
        for k in 1..=2usize {
            out.push(check(&format!("segality/j{j}k{k}"), 11, json!({"j": j, "k": k, "cutoff": top}), move |o| {
                match segality_map(j, &vec![ThetaExpr::leaf(); k], top, cap) {
                    Err(e) => o.error(e),
                    Ok(r) => {
                        o.check(r.holds(), format!("not a monomorphism: {:?}", r.problems));
                        o.note(format!("{:?} -> {:?}", r.source.counts(), r.target.counts()));
                    }
                }
            }));
        }
    }
    for j in 0..=2usize {
        out.push(check(&format!("completeness/j{j}"), 11, json!({"j": j, "cutoff": top}), move |o| match completeness_map(j, top, cap) {
            Err(e) => o.error(e),
            Ok(r) => {
                o.check(r.holds(), format!("not a monomorphism: {:?}", r.problems));
                o.note(format!("{:?} -> {:?}", r.source.counts(), r.target.counts()));
            }
        }));
    }

    out.push(check("suspension-functorial", 0, json!({"target": "O2"}), move |o| {
        let homs = enumerate_homs(&oriental(1), &oriental(2), cap).morphisms;
        let ops: Vec<AdcMorphism> = (0..=1).map(|i| simplicial_operator(&MonotoneMap::coface(1, i))).collect();
        for f in &ops {
            for g in &homs {
                o.check(suspend_morphism(&g.after(f)) == suspend_morphism(g).after(&suspend_morphism(f)), "suspension does not preserve composites");
            }
        }
        let distinct: std::collections::HashSet<_> = homs.iter().map(|f| suspend_morphism(f).encoding()).collect();
        o.check(distinct.len() == homs.len(), "suspension identifies two morphisms");
    }));
    out.push(check("dual-involution", 0, json!({"complexes": ["O2", "O1xO1op"]}), |o| {
        for c in [oriental(2), tensor_of_orientals(1, 1), suspend(&oriental(2))] {
            o.check(total_dual(&total_dual(&c)) == c, "double dual differs");
            o.check(validate_complex(&total_dual(&c)).map(|r| r.is_valid()).unwrap_or(false), "dual invalid");
        }
    }));
    out.push(check("dual-cells", 0, json!({"complexes": ["O1", "O2"], "max_dim": 2}), move |o| {
        for c in [oriental(1), oriental(2)] {
            let r = check_dual_cells(&c, 2, cap);
            match r.holds {
                None => o.unknown("incomplete"),
                Some(ok) => o.check(ok, format!("{:?}", r.details)),
            }
        }
    }));
    out.push(check("linearization-ranks", 0, json!({"m": "0..=3"}), move |o| {
        for m in 0..=3i64 {
            let c = oriental(m);
            match linearized_ranks(&c, m as usize, cap) {
                None => o.unknown(format!("O[{m}]: incomplete")),
                Some(r) => o.check(r == c.ranks(), format!("O[{m}]: {r:?} against {:?}", c.ranks())),
            }
        }
    }));
    out.push(check("interval-product", 0, json!({}), |o| {
        let p = product(&simplex(1), &simplex(1).sharp());
        o.check(p.counts().get(2) == Some(&2), format!("{:?}", p.counts()));
    }));
    out
}

pub fn run_check(c: &Check, mutations: Mutations) -> Entry {
    let start = Instant::now();
    let result = with_mutations(mutations, || {
        std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
            let mut o = Outcome::default();
            (c.job)(&mut o);
            o
        }))
    });
    let (status, details) = match result {
        Ok(o) => (o.status(), o.failures.into_iter().chain(o.notes).collect()),
        Err(p) => {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            (Status::Fail, vec![format!("panicked: {}", msg.unwrap_or_default())])
        }
    };
    Entry { id: c.id.clone(), criterion: c.criterion, params: c.params.clone(), status, elapsed: start.elapsed().as_secs_f64(), details }
}

/// Runs every check, in parallel, and returns the entries in check order.
pub fn run_suite(opts: SuiteOptions) -> VerificationReport {
    let all = checks(opts.profile, opts.cap);
    let run = || all.par_iter().map(|c| run_check(c, opts.mutations)).collect::<Vec<_>>();
    let entries = match opts.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        },
        None => run(),
    };
    VerificationReport { profile: opts.profile, mutations: opts.mutations, entries }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monotone_oracle() {
        assert_eq!(monotone_maps(2, 1), vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, 1, 1], vec![1, 1, 1]]);
        assert_eq!(monotone_maps(1, 2).len(), 6);
    }

    #[test]
    fn report_round_trips() {
        let r = VerificationReport {
            profile: Profile::Quick,
            mutations: Mutations::none(),
            entries: vec![Entry { id: "x".into(), criterion: 1, params: json!({"m": 2}), status: Status::Indeterminate, elapsed: 0.5, details: vec!["d".into()] }],
        };
        let back: VerificationReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
        assert_eq!(r.exit_code(), 2);
        assert_eq!(r.criterion_status(1), Some(Status::Indeterminate));
        assert_eq!(r.criterion_status(3), None);
    }

    #[test]
    fn panics_become_failures() {
        let c = check("boom", 0, json!({}), |_| panic!("no"));
        let e = run_check(&c, Mutations::none());
        assert_eq!(e.status, Status::Fail);
        assert!(e.details[0].contains("no"));
    }
}
