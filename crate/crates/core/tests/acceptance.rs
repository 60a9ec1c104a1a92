//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Every comparison is exact (tolerance zero). Depths follow the stated
//! bounds; the registry engine additionally checks a 5-coefficient margin
//! above each one.
//!
//! The hour-scale deep certificate (the q^7804 entry) is opt-in: set
//! `SPTPAIRS_DEEP=1` to include it in criterion 8; its outcome is reported
//! informationally either way.

use sptpairs::bailey::{
    self, bailey_relation_check, pp_direct_at_root, pp_one_variable, pp_uv_at_root,
    CONGRUENCES, SUPPORTED_ROOTS,
};
use sptpairs::number::{int_mod, Frac, Int};
use sptpairs::partitions;
use sptpairs::registry::{
    congruence_scan, residue_class_sums, DepthProfile, Outcome, Registry,
};

fn report(criterion: u32, description: &str, pass: bool) {
    println!(
        "[acceptance] {} criterion {}: {}",
        if pass { "PASS" } else { "FAIL" },
        criterion,
        description
    );
    assert!(pass, "criterion {} failed: {}", criterion, description);
}

fn run_entries(registry: &Registry, ids: &[&str], profile: DepthProfile, depth: Option<i64>) -> bool {
    use rayon::prelude::*;
    let reports: Vec<_> = ids
        .par_iter()
        .map(|id| registry.verify(id, profile, depth).expect("registered id"))
        .collect();
    let mut ok = true;
    for r in &reports {
        match &r.outcome {
            Outcome::Pass => {}
            Outcome::Fail { witness } => {
                eprintln!(
                    "  {} failed at q^{}: {} vs {}",
                    r.id, witness.exponent, witness.lhs, witness.rhs
                );
                ok = false;
            }
            Outcome::Error { message } => {
                eprintln!("  {} errored: {}", r.id, message);
                ok = false;
            }
        }
    }
    ok
}

#[test]
fn criterion_1_bailey_relation() {
    let mut ok = true;
    for family in 1u8..=4 {
        if let Some(n) = bailey_relation_check(family, 30, 80) {
            eprintln!("  pair {} fails the relation at n = {}", family, n);
            ok = false;
        }
    }
    report(1, "all four Bailey pairs satisfy the relation for n <= 30 at depth 80", ok);
}

#[test]
fn criterion_2_oracle_equivalence() {
    let mut ok = true;
    for family in 1u8..=4 {
        let series = pp_one_variable(family, 31);
        let bivariate = bailey::pp_direct_bivariate(family, 31);
        let collapsed = bivariate.eval_z_one();
        for n in 1..=30 {
            let from_series = series.coeff_at(Frac::from_int(n)).unwrap();
            let weighted = partitions::weighted_count(family, n);
            let unweighted = partitions::unweighted_count(family, n);
            if from_series != weighted || from_series != unweighted {
                eprintln!(
                    "  pp_{}({}) disagrees: series {}, weighted {}, unweighted {}",
                    family, n, from_series, weighted, unweighted
                );
                ok = false;
            }
            if collapsed.coeff_at(Frac::from_int(n)).unwrap() != from_series {
                eprintln!("  pp_{}({}) z=1 collapse disagrees", family, n);
                ok = false;
            }
            // histogram equals the bivariate coefficients, both directions
            let hist = partitions::crank_histogram(family, n);
            let col = bivariate.column(n).unwrap();
            for (&m, c) in col {
                if hist.get(&m).cloned().unwrap_or_default() != *c {
                    eprintln!("  M_{}({}, {}) != histogram", family, m, n);
                    ok = false;
                }
            }
            for (m, h) in &hist {
                if bivariate.coefficient(*m, n).unwrap() != *h {
                    eprintln!("  histogram({}, {}) != M_{}", m, n, family);
                    ok = false;
                }
            }
        }
    }
    report(
        2,
        "pp_i(n) = weighted = unweighted counts and crank histogram = M_i(m,n) for n <= 30",
        ok,
    );
}

#[test]
fn criterion_3_congruences() {
    let mut ok = true;
    for &(family, modulus, residue) in &CONGRUENCES {
        let scan = congruence_scan(family, modulus, residue, 300, Some(150));
        if !scan.all_divisible {
            eprintln!(
                "  pp_{}({}n+{}) not divisible by {} somewhere below 300",
                family, modulus, residue, modulus
            );
            ok = false;
        }
        if scan.vanishing_holds != Some(true) {
            eprintln!(
                "  coefficient vanishing fails for family {} at zeta_{}",
                family, modulus
            );
            ok = false;
        }
    }
    report(
        3,
        "all six congruences hold to argument 300 and coefficients vanish to q^150",
        ok,
    );
}

#[test]
fn criterion_4_route_equivalence() {
    use rayon::prelude::*;
    let results: Vec<(u8, i64, bool)> = SUPPORTED_ROOTS
        .par_iter()
        .map(|&(family, ell)| {
            let depth = 101;
            let uv = pp_uv_at_root(family, ell, depth).expect("supported");
            let direct = pp_direct_at_root(family, ell, depth).expect("supported");
            let pass = uv
                .compare_to_depth(&direct, Frac::from_int(100))
                .expect("same depth")
                .is_pass();
            (family, ell, pass)
        })
        .collect();
    let mut ok = true;
    for (family, ell, pass) in results {
        if !pass {
            eprintln!("  routes disagree for family {} at zeta_{}", family, ell);
            ok = false;
        }
    }
    report(4, "U/V bracket route equals the symbolic-z route to q^100 for all six pairs", ok);
}

#[test]
fn criterion_5_crank_dissections() {
    let registry = Registry::builtin();
    let ok = run_entries(
        &registry,
        &["crank-dissection-3", "crank-dissection-5", "crank-dissection-7"],
        DepthProfile::Certificate,
        None, // certificate depth 150
    );
    report(5, "crank dissections verified to q^150 over Q(zeta)", ok);
}

#[test]
fn criterion_6_dissection_theorems() {
    let registry = Registry::builtin();
    let ids = [
        "dissection-pp1-3",
        "dissection-pp2-3",
        "dissection-pp2-5",
        "dissection-pp3-5",
        "dissection-pp4-5",
        "dissection-pp3-7",
        "pp1-zeta3",
        "pp2-zeta3",
        "pp2-zeta5",
        "pp3-zeta5",
        "pp4-zeta5",
        "pp3-zeta7",
    ];
    let ok = run_entries(&registry, &ids, DepthProfile::Quick, Some(120));
    report(
        6,
        "the six dissection theorems and six root-of-unity product theorems hold to q^120",
        ok,
    );
}

#[test]
fn criterion_7_lemma_suite() {
    let registry = Registry::builtin();
    let lemma_ids: Vec<&str> = registry
        .entries()
        .iter()
        .filter(|spec| spec.has_tag("lemma"))
        .map(|spec| spec.id.as_str())
        .collect();
    // every entry runs at depth >= 40; quick-profile depths are 40..100
    assert!(lemma_ids.len() >= 40, "expected the full lemma sweep");
    let ok = run_entries(&registry, &lemma_ids, DepthProfile::Quick, None);
    report(
        7,
        "Chan specializations, U/V reduction lemmas, shift identities, product \
         expansions, and pentagonal evaluations hold at depth >= 40",
        ok,
    );
}

#[test]
fn criterion_8_certificate_profile() {
    let registry = Registry::builtin();
    let ids = [
        "eta-pp1-3",
        "eta-pp2-3",
        "eta-pp2-5-a",
        "eta-pp2-5-b",
        "eta-pp3-5-a",
        "eta-pp3-5-b",
        "eta-pp4-5-a",
        "eta-pp4-5-b",
        "eta-pp3-7-a",
        "eta-pp3-7-c",
    ];
    let ok = run_entries(&registry, &ids, DepthProfile::Certificate, None);
    report(
        8,
        "eta-quotient certificates verified at the stated depths 25/25/199/201/199/198/192/189/779/773",
        ok,
    );
    // the q^7804 certificate is opt-in; its outcome is informational
    if std::env::var("SPTPAIRS_DEEP").as_deref() == Ok("1") {
        let deep = registry
            .verify("eta-pp3-7-b", DepthProfile::Certificate, None)
            .expect("registered");
        println!(
            "[acceptance] INFO deep certificate eta-pp3-7-b at depth {}: {:?}",
            deep.depth, deep.outcome
        );
    } else {
        println!(
            "[acceptance] INFO deep certificate eta-pp3-7-b skipped (set SPTPAIRS_DEEP=1 to run)"
        );
    }
}

#[test]
fn criterion_9_property_suites() {
    // the standalone property suites live in tests/properties.rs; this
    // criterion asserts their core invariants once more in summary form
    let mut ok = true;
    // M-symmetry and class-sum evidence
    for &(family, ell, residue) in &CONGRUENCES {
        let f = bailey::pp_direct_bivariate(family, 21);
        if !f.is_z_symmetric() {
            eprintln!("  M_{}(m, n) not symmetric", family);
            ok = false;
        }
        let mut arg = if residue == 0 { ell } else { residue };
        while arg <= 20 {
            let sums = residue_class_sums(&f, ell, arg);
            if !sums.windows(2).all(|w| w[0] == w[1]) {
                eprintln!(
                    "  class sums differ for family {} mod {} at n = {}",
                    family, ell, arg
                );
                ok = false;
            }
            let total: Int = sums.iter().cloned().sum();
            let total_mod = int_mod(&total, ell);
            if total_mod != 0 {
                eprintln!("  pp_{}({}) not divisible by {}", family, arg, ell);
                ok = false;
            }
            arg += ell;
        }
    }
    report(
        9,
        "equal residue classes witness every congruence instance to n = 20",
        ok,
    );
}
