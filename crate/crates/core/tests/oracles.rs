//! Checks against independently computed values, and randomized structural properties.

use adc_core::complex::{
    direct_sum, suspend, suspend_morphism, tensor, tensor_of_orientals, total_dual, validate_complex, validate_morphism,
    BasedComplex,
};
use adc_core::hom::{enumerate_homs, DEFAULT_CAP};
use adc_core::msset::{horn, suspend_msset, Variant};
use adc_core::nerve::rs_nerve;
use adc_core::nu::{enumerate_cells, SteinerTable};
use adc_core::oriental::{oriental, simplicial_operator, MonotoneMap};
use adc_core::theta::{theta_adc, ThetaExpr};
use proptest::prelude::*;
use std::collections::HashMap;

fn valid(c: &BasedComplex) -> bool {
    validate_complex(c).map(|r| r.is_valid()).unwrap_or(false)
}

/// Boundary of a basis element as a label-keyed map with zero entries dropped.
fn boundary_by_label(c: &BasedComplex, q: usize, label: &str) -> HashMap<String, i64> {
    let j = c.label_index(q, label).expect("label exists");
    let d = c.differential(q - 1);
    (0..c.rank(q - 1))
        .filter(|&i| d.get(i, j) != 0)
        .map(|i| (c.basis(q - 1)[i].clone(), d.get(i, j)))
        .collect()
}

/// `∂(a⊗b) = ∂a⊗b + (-1)^{|a|} a⊗∂b`, computed on labels only.
fn tensor_boundary_oracle(c: &BasedComplex, d: &BasedComplex, p: usize, a: &str, r: usize, b: &str) -> HashMap<String, i64> {
    let mut out: HashMap<String, i64> = HashMap::new();
    if p > 0 {
        for (x, v) in boundary_by_label(c, p, a) {
            *out.entry(format!("{x}|{b}")).or_default() += v;
        }
    }
    if r > 0 {
        let sign = if p.is_multiple_of(2) { 1 } else { -1 };
        for (y, v) in boundary_by_label(d, r, b) {
            *out.entry(format!("{a}|{y}")).or_default() += sign * v;
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

fn check_tensor_against_oracle(c: &BasedComplex, d: &BasedComplex) {
    let t = tensor(c, d);
    for p in 0..=c.max_degree() {
        for r in 0..=d.max_degree() {
            if p + r == 0 {
                continue;
            }
            for a in c.basis(p) {
                for b in d.basis(r) {
                    let got = boundary_by_label(&t, p + r, &format!("{a}|{b}"));
                    assert_eq!(got, tensor_boundary_oracle(c, d, p, a, r, b), "∂({a}⊗{b})");
                }
            }
        }
    }
}

fn chain(entries: &[(&str, i64)]) -> HashMap<String, i64> {
    entries.iter().map(|(l, v)| (l.to_string(), *v)).collect()
}

#[test]
fn square_boundaries_by_hand() {
    let t = tensor(&oriental(1), &oriental(1));
    let got = boundary_by_label(&t, 2, "0.1|0.1");
    assert_eq!(got, chain(&[("1|0.1", 1), ("0|0.1", -1), ("0.1|1", -1), ("0.1|0", 1)]));
    let t = tensor_of_orientals(1, 1);
    let got = boundary_by_label(&t, 2, "0.1|0.1");
    assert_eq!(got, chain(&[("1|0.1", 1), ("0|0.1", -1), ("0.1|0", -1), ("0.1|1", 1)]));
}

#[test]
fn tensor_matches_label_oracle() {
    for (k, l) in [(1, 1), (2, 1), (1, 2), (2, 2), (3, 1)] {
        check_tensor_against_oracle(&oriental(k), &oriental(l));
        check_tensor_against_oracle(&oriental(k), &total_dual(&oriental(l)));
    }
    check_tensor_against_oracle(&suspend(&oriental(1)), &oriental(2));
}

#[test]
fn maps_into_the_arrow_are_monotone_maps() {
    for m in 0..=5usize {
        let monotone = (0..=m + 1).count(); // a map [m] -> [1] is fixed by where it first reaches 1
        assert_eq!(enumerate_homs(&oriental(m as i64), &oriental(1), DEFAULT_CAP).morphisms.len(), monotone);
    }
}

#[test]
fn triangle_one_cells() {
    // Three identities, three generating arrows, one composite.
    let cells = enumerate_cells(&oriental(2), 1, DEFAULT_CAP);
    assert!(cells.complete);
    assert_eq!(cells.cells[1].len(), 3 + 3 + 1);
    assert_eq!(enumerate_homs(&oriental(1), &oriental(2), DEFAULT_CAP).morphisms.len(), 7);

    let c = oriental(2);
    let edge = |a: usize, b: usize| {
        let mut v = vec![0; 3];
        v[c.label_index(1, &format!("{a}.{b}")).unwrap()] = 1;
        let mut s = vec![0; 3];
        s[a] = 1;
        let mut t = vec![0; 3];
        t[b] = 1;
        SteinerTable { minus: vec![s, v.clone()], plus: vec![t, v] }
    };
    let comp = edge(1, 2).compose(&edge(0, 1), 0).unwrap();
    assert_eq!(comp.minus[1], vec![1, 0, 1]);
    assert_eq!(comp.minus[0], vec![1, 0, 0]);
    assert_eq!(comp.plus[0], vec![0, 0, 1]);
    assert!(cells.cells[1].contains(&comp));
    assert!(edge(0, 1).compose(&edge(1, 2), 0).is_err());
}

#[test]
fn suspended_horn_has_parallel_edges() {
    let h = suspend_msset(&horn(1, 0, Variant::Plain).unwrap());
    assert!(h.check_identities().is_empty());
    let b = suspend_msset(&adc_core::msset::boundary(1));
    assert_eq!(b.counts(), vec![2, 2]);
}

fn monotone(src: usize, tgt: usize) -> impl Strategy<Value = MonotoneMap> {
    proptest::collection::vec(0..=tgt, src + 1).prop_map(move |mut v| {
        v.sort();
        MonotoneMap::new(v, tgt).unwrap()
    })
}

fn composable() -> impl Strategy<Value = (MonotoneMap, MonotoneMap)> {
    (0..=3usize, 0..=3usize, 0..=3usize).prop_flat_map(|(a, b, c)| (monotone(a, b), monotone(b, c)))
}

/// Small complexes built from orientals by the available constructions.
fn complex() -> impl Strategy<Value = BasedComplex> {
    let leaf = (-1..=2i64).prop_map(oriental);
    leaf.prop_recursive(2, 8, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|c| suspend(&c)),
            inner.clone().prop_map(|c| total_dual(&c)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| direct_sum(&a, &b)),
            (inner.clone(), inner).prop_map(|(a, b)| tensor(&a, &b)),
        ]
    })
    .prop_filter("keep sizes small", |c| c.total_rank() <= 40)
}

fn shape() -> impl Strategy<Value = ThetaExpr> {
    Just(ThetaExpr::leaf()).prop_recursive(2, 6, 3, |inner| proptest::collection::vec(inner, 0..=3).prop_map(ThetaExpr::node))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn operators_are_functorial((alpha, beta) in composable()) {
        let lhs = simplicial_operator(&beta.after(&alpha));
        let rhs = simplicial_operator(&beta).after(&simplicial_operator(&alpha));
        prop_assert_eq!(lhs, rhs);
        let src = oriental(alpha.source_dim() as i64);
        let tgt = oriental(alpha.target_dim() as i64);
        prop_assert!(validate_morphism(&src, &tgt, &simplicial_operator(&alpha)).unwrap().is_valid());
    }

    #[test]
    fn identity_operator_is_identity(n in 0..=4usize) {
        let id = simplicial_operator(&MonotoneMap::identity(n));
        prop_assert_eq!(id, adc_core::complex::AdcMorphism::identity(&oriental(n as i64)));
    }

    #[test]
    fn constructions_stay_valid(c in complex()) {
        prop_assert!(valid(&c));
        prop_assert!(valid(&suspend(&c)));
        prop_assert!(valid(&total_dual(&c)));
        prop_assert_eq!(total_dual(&total_dual(&c)), c);
    }

    #[test]
    fn tensor_with_empty_is_empty(c in complex()) {
        let t = tensor(&c, &BasedComplex::empty());
        prop_assert_eq!(t.total_rank(), 0);
        let t = tensor(&BasedComplex::empty(), &c);
        prop_assert_eq!(t.total_rank(), 0);
    }

    #[test]
    fn precomposition_stays_in_the_hom_set(alpha in (0..=2usize, 1..=3usize).prop_flat_map(|(a, b)| monotone(a, b)), k in 1..=2i64) {
        let target = oriental(k);
        let big = enumerate_homs(&oriental(alpha.target_dim() as i64), &target, DEFAULT_CAP);
        let small = enumerate_homs(&oriental(alpha.source_dim() as i64), &target, DEFAULT_CAP);
        prop_assert!(big.complete && small.complete);
        let op = simplicial_operator(&alpha);
        for f in &big.morphisms {
            prop_assert!(small.morphisms.contains(&f.after(&op)));
        }
    }

    #[test]
    fn suspension_is_functorial_and_faithful(alpha in monotone(1, 2)) {
        let homs = enumerate_homs(&oriental(2), &oriental(1), DEFAULT_CAP).morphisms;
        let op = simplicial_operator(&alpha);
        for g in &homs {
            prop_assert_eq!(suspend_morphism(&g.after(&op)), suspend_morphism(g).after(&suspend_morphism(&op)));
            for h in &homs {
                prop_assert_eq!(g == h, suspend_morphism(g) == suspend_morphism(h));
            }
        }
    }

    #[test]
    fn theta_wedge_arithmetic(t in shape()) {
        let tc = theta_adc(&t);
        prop_assert!(valid(&tc.complex));
        let expected = 1 + tc.parts.iter().map(|p| p.rank(0) - 1).sum::<usize>();
        prop_assert_eq!(tc.complex.rank(0), expected);
        prop_assert_eq!(tc.complex.rank(0), t.children.len() + 1);
        prop_assert_eq!(t.to_string().parse::<ThetaExpr>().unwrap(), t);
    }

    #[test]
    fn nerves_satisfy_simplicial_identities(c in (0..=2i64).prop_map(oriental), dim in 1..=3usize, sus in any::<bool>()) {
        let c = if sus { suspend(&c) } else { c };
        let n = rs_nerve(&c, dim, DEFAULT_CAP).unwrap();
        prop_assert!(n.msset().check_identities().is_empty());
    }
}
