//! Runs the full verification suite and the three fault-injected suites, one line per criterion.
//!
//! `cargo test -p adc-core --test acceptance -- --nocapture` shows the lines.

use adc_core::mutation::Mutations;
use adc_core::suite::{run_suite, Profile, Status, SuiteOptions};

const CRITERIA: [&str; 11] = [
    "oriental ranks and validity",
    "phi is a morphism",
    "phi is onto the basis",
    "suspension pushout square",
    "hom sets of suspensions",
    "nerve of the arrow",
    "cells of a suspension",
    "comparison inclusion",
    "suspect simplices and parents",
    "filtration certificates",
    "theta shapes and extension maps",
];

#[test]
fn acceptance_criteria() {
    let report = run_suite(SuiteOptions { profile: Profile::Full, ..Default::default() });
    let mut failed = Vec::new();
    for (i, name) in CRITERIA.iter().enumerate() {
        let n = i as u8 + 1;
        let status = report.criterion_status(n).unwrap_or(Status::Fail);
        let elapsed: f64 = report.entries.iter().filter(|e| e.criterion == n).map(|e| e.elapsed).sum();
        println!("criterion {n:>2} {:<4} {name} ({elapsed:.2}s)", if status == Status::Pass { "PASS" } else { "FAIL" });
        if status != Status::Pass {
            for e in report.entries.iter().filter(|e| e.criterion == n && e.status != Status::Pass) {
                println!("    {} {}: {:?}", e.id, e.status, e.details);
            }
            failed.push(n);
        }
    }

    let faults = [
        ("tensor sign", Mutations { drop_tensor_sign: true, ..Mutations::none() }),
        ("suspension augmentation", Mutations { drop_suspension_augmentation: true, ..Mutations::none() }),
        ("parent clause 1", Mutations { drop_parent_clause: Some(1), ..Mutations::none() }),
    ];
    let hook = std::panic::take_hook();
    std::panic::set_hook(Box::new(|_| {}));
    let caught: Vec<(&str, Vec<String>)> = faults
        .iter()
        .map(|(name, m)| {
            let r = run_suite(SuiteOptions { profile: Profile::Quick, mutations: *m, ..Default::default() });
            let ids = r.entries.iter().filter(|e| e.status == Status::Fail).map(|e| e.id.clone()).collect();
            (*name, ids)
        })
        .collect();
    std::panic::set_hook(hook);
    let all_caught = caught.iter().all(|(_, ids)| !ids.is_empty());
    println!("criterion 12 {:<4} fault injection", if all_caught { "PASS" } else { "FAIL" });
    for (name, ids) in &caught {
        println!("    {name}: {} failing entries {ids:?}", ids.len());
    }
    if !all_caught {
        failed.push(12);
    }
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}
