//! Acceptance run: one PASS/FAIL line per criterion, each under a time limit.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use verba::cover::{cover_invariants, format_cycle_type};
use verba::experiments;
use verba::group::{bi_invariance_check, wlength_table};
use verba::magnus::{magnus_depth, MagnusDepth};
use verba::verbal::{beta_word, gamma_word, WordTemplate, DEFAULT_ENUMERATION_BUDGET};
use verba::{Result, Word};

use common::{brute_w_words, closure_levels, small_groups};

/// Run the named experiments. With `traced`, each report must also carry a
/// derivation trace naming at least one rule.
fn experiments_pass(names: &[&str], traced: bool) -> Result<(bool, String)> {
    let mut failed = Vec::new();
    for name in names {
        let report = experiments::run(name)?;
        let has_trace = report.trace.iter().any(|l| l.contains(" R"));
        if !report.passed() || (traced && !has_trace) {
            failed.push(format!("{name}:\n{report}"));
        }
    }
    let detail = if failed.is_empty() { format!("experiments {}", names.join(", ")) } else { failed.join("\n") };
    Ok((failed.is_empty(), detail))
}

fn identity_suite() -> Result<(bool, String)> {
    experiments_pass(&["identities"], false)
}

fn culler() -> Result<(bool, String)> {
    experiments_pass(&["culler"], false)
}

fn certificate_counts() -> Result<(bool, String)> {
    experiments_pass(&["certificates"], false)
}

fn bound_reproductions() -> Result<(bool, String)> {
    experiments_pass(&["xy_n", "xy_squared", "gamma_n", "w_g", "comparison", "grope"], true)
}

fn finite_oracles() -> Result<(bool, String)> {
    let mut mismatches = Vec::new();
    let groups = small_groups();
    for g in &groups {
        let mut templates = vec![gamma_word(2)?, WordTemplate::from_word("x^2", Word::generator(1).pow(2))];
        if g.order() <= 24 {
            templates.push(gamma_word(3)?);
        }
        for t in &templates {
            let table = wlength_table(g, t, DEFAULT_ENUMERATION_BUDGET)?;
            if table.distances() != closure_levels(g, &brute_w_words(g, t)).as_slice() {
                mismatches.push(format!("{} {}", g.spec(), t.name()));
            }
            if !bi_invariance_check(g, &table, 1000, 17) {
                mismatches.push(format!("{} {} bi-invariance", g.spec(), t.name()));
            }
        }
    }
    let a5 = groups.iter().find(|g| g.spec() == "A5").expect("A5 registered");
    let hist = format!("{:?}", wlength_table(a5, &gamma_word(2)?, DEFAULT_ENUMERATION_BUDGET)?.histogram());
    if hist != "{0: 1, 1: 59}" {
        mismatches.push(format!("A5 histogram {hist}"));
    }
    let detail = if mismatches.is_empty() {
        format!("{} groups, A5 histogram {hist}", groups.len())
    } else {
        mismatches.join("; ")
    };
    Ok((mismatches.is_empty(), detail))
}

fn monotonicity() -> Result<(bool, String)> {
    experiments_pass(&["monotonicity"], false)
}

fn cover_facts() -> Result<(bool, String)> {
    let mut bad = Vec::new();
    for n in 1..=50usize {
        let r = cover_invariants(n)?;
        let single = r.commutator.cycle_type() == vec![2 * n + 1];
        let mut y_type = vec![n + 1];
        y_type.extend(std::iter::repeat(1).take(n as usize));
        let y_ok = r.y.cycle_type() == y_type;
        let x_ok = r.x.compose(&r.x).is_identity();
        if !(single && y_ok && x_ok && r.genus == n as i64 + 1 && r.passed()) {
            bad.push(format!("n={n}: commutator {}", format_cycle_type(&r.commutator.cycle_type())));
        }
    }
    let detail = if bad.is_empty() { "n = 1..50".to_string() } else { bad.join("; ") };
    Ok((bad.is_empty(), detail))
}

fn magnus_depths() -> Result<(bool, String)> {
    let mut depths = Vec::new();
    let mut ok = true;
    for n in 1..=5 {
        let d = magnus_depth(gamma_word(n)?.body(), 6)?;
        ok &= d == MagnusDepth::Exact(n);
        depths.push(format!("gamma_{n}:{d:?}"));
    }
    let d = magnus_depth(beta_word(2)?.body(), 6)?;
    ok &= d == MagnusDepth::Exact(4);
    depths.push(format!("beta_2:{d:?}"));
    Ok((ok, depths.join(" ")))
}

type Criterion = fn() -> Result<(bool, String)>;

const CRITERIA: [(&str, u64, Criterion); 8] = [
    ("identity suite", 10, identity_suite),
    ("Culler verification", 1, culler),
    ("certificate counts", 60, certificate_counts),
    ("bound-engine reproductions", 5, bound_reproductions),
    ("finite-engine oracle equivalence", 120, finite_oracles),
    ("monotonicity floors", 60, monotonicity),
    ("cover facts", 1, cover_facts),
    ("Magnus depths", 10, magnus_depths),
];

fn main() -> ExitCode {
    let mut all = true;
    for (i, (name, limit, run)) in CRITERIA.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*limit);
        let (pass, detail) = match outcome {
            Ok((pass, detail)) => (pass && in_time, detail),
            Err(e) => (false, format!("{}: {e}", e.code())),
        };
        all &= pass;
        println!(
            "{} {}. {name}: {detail} [{:.3}s, limit {limit}s]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
