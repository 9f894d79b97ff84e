//! Acceptance run: one PASS/FAIL line per criterion.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use korbit::exp_action::{exp_ad_closed_for, family1_sketch_move, sample_element, SketchY};
use korbit::foliation::{partition_check, triviality_scan};
use korbit::kirillov::{coadjoint_tangent, scan_covector};
use korbit::linalg::{max_abs_diff, vec_norm_inf};
use korbit::orbit::{canonical_variants, case_count, verify_base, verify_proposition, Adoption, VerifyOptions};
use korbit::{
    build_algebra, coadjoint_move, default_params, exp_ad, md_scan, validate_params, AlgebraElement, CoVector,
    FamilyId, FamilyParams, LieAlgebra,
};

const SEED: u64 = 7;

struct Outcome {
    ok: bool,
    detail: String,
}

fn grid(family: FamilyId) -> Vec<FamilyParams> {
    use FamilyParams::*;
    let five = [-2.0, -0.5, 0.5, 2.0, 3.0];
    let with_zero = [-2.0, -0.5, 0.0, 0.5, 2.0, 3.0];
    let out: Vec<FamilyParams> = match family {
        FamilyId::F1 => with_zero
            .iter()
            .flat_map(|&l1| five.iter().map(move |&l2| Pair { lambda1: l1, lambda2: l2 }))
            .collect(),
        FamilyId::F2 | FamilyId::F6 => five.iter().map(|&lambda| Single { lambda }).collect(),
        FamilyId::F3 | FamilyId::F5 => with_zero.iter().map(|&lambda| Single { lambda }).collect(),
        FamilyId::F4 | FamilyId::F7 => vec![Unit],
        FamilyId::F8 => [-2.0, -0.5, 0.5, 2.0, 3.0]
            .iter()
            .flat_map(|&lambda| {
                [PI / 6.0, PI / 3.0, PI / 2.0, 2.0 * PI / 3.0, 5.0 * PI / 6.0]
                    .into_iter()
                    .map(move |phi| Rotation { lambda, phi })
            })
            .collect(),
    };
    out.into_iter().filter(|p| validate_params(family, *p).is_ok()).collect()
}

/// A small parameter set per family for the heavier criteria.
fn sparse_grid(family: FamilyId) -> Vec<FamilyParams> {
    use FamilyParams::*;
    match family {
        FamilyId::F1 => vec![
            Pair { lambda1: 2.0, lambda2: 3.0 },
            Pair { lambda1: -0.5, lambda2: 0.5 },
            Pair { lambda1: 0.0, lambda2: 2.0 },
        ],
        FamilyId::F2 | FamilyId::F6 => vec![Single { lambda: 2.0 }, Single { lambda: -0.5 }],
        FamilyId::F3 | FamilyId::F5 => vec![Single { lambda: 2.0 }, Single { lambda: -0.5 }, Single { lambda: 0.0 }],
        FamilyId::F4 | FamilyId::F7 => vec![Unit],
        FamilyId::F8 => vec![
            Rotation { lambda: 1.0, phi: PI / 3.0 },
            Rotation { lambda: -2.0, phi: PI / 2.0 },
            Rotation { lambda: 0.5, phi: 5.0 * PI / 6.0 },
        ],
    }
}

fn algebras(grid: fn(FamilyId) -> Vec<FamilyParams>) -> Vec<LieAlgebra> {
    FamilyId::ALL
        .iter()
        .flat_map(|&f| grid(f).into_iter().map(move |p| build_algebra(f, p).unwrap()))
        .collect()
}

fn criterion1() -> Outcome {
    let algs = algebras(grid);
    let worst = algs.iter().map(|a| a.jacobi_residual()).fold(0.0, f64::max);
    Outcome {
        ok: worst < 1e-12,
        detail: format!("{} algebras, max Jacobi residual {worst:.2e}", algs.len()),
    }
}

fn criterion2() -> Outcome {
    let mut worst_exp = 0.0_f64;
    for alg in algebras(sparse_grid) {
        for k in 0..1000 {
            let u = sample_element(SEED, k, 2.0);
            worst_exp = worst_exp.max(max_abs_diff(&exp_ad(&alg, &u).m, &exp_ad_closed_for(&alg, &u).m));
        }
    }
    let mut worst_sketch = 0.0_f64;
    let mut worst_literal_y = 0.0_f64;
    for (l1, l2) in [(2.0, 3.0), (-0.5, 0.5), (0.0, 2.0)] {
        let alg = build_algebra(FamilyId::F1, FamilyParams::Pair { lambda1: l1, lambda2: l2 }).unwrap();
        for k in 0..1000 {
            let u = sample_element(SEED, k, 2.0);
            let f = CoVector(sample_element(SEED + 1, k, 3.0).0);
            let generic = coadjoint_move(&alg, &f, &u);
            let scale = 1.0 + vec_norm_inf(&generic.0);
            let sketch = family1_sketch_move(l1, l2, &f, &u, SketchY::Corrected);
            let literal = family1_sketch_move(l1, l2, &f, &u, SketchY::Literal);
            for i in 0..5 {
                worst_sketch = worst_sketch.max((sketch.0[i] - generic.0[i]).abs() / scale);
            }
            worst_literal_y = worst_literal_y.max((literal.0[1] - generic.0[1]).abs() / scale);
        }
    }
    Outcome {
        ok: worst_exp < 1e-9 && worst_sketch < 1e-9,
        detail: format!(
            "closed form max error {worst_exp:.2e}; family-1 coordinate formulas {worst_sketch:.2e} \
             (y with λ₁ in the δ-term would miss by {worst_literal_y:.2e})"
        ),
    }
}

fn criterion3() -> Outcome {
    let mut scans = 0;
    let mut violations = 0;
    let mut zero_failures = 0;
    let mut bad_sums = 0;
    for family in FamilyId::ALL {
        for params in sparse_grid(family) {
            let r = md_scan(family, params, 100_000, 42).unwrap();
            scans += 1;
            violations += r.violations.len();
            zero_failures += r.zero_rank_failures.len();
            if r.histogram.values().sum::<usize>() != r.n || r.histogram.keys().any(|&k| k != 0 && k != 2) {
                bad_sums += 1;
            }
        }
    }
    Outcome {
        ok: violations == 0 && zero_failures == 0 && bad_sums == 0,
        detail: format!(
            "{scans} scans of 1e5 covectors: {violations} rank violations, {zero_failures} rank-0 mismatches, \
             {bad_sums} bad histograms"
        ),
    }
}

fn criterion4() -> Outcome {
    let mut reports = 0;
    let mut failed = Vec::new();
    let mut worst_res = 0.0_f64;
    let mut worst_tan = 0.0_f64;
    let mut jac = 0;
    for family in FamilyId::ALL {
        for case in 1..=case_count(family) {
            let r = verify_proposition(family, default_params(family), case, 500, SEED).unwrap();
            reports += 1;
            worst_res = worst_res.max(r.max_residual);
            worst_tan = worst_tan.max(r.tangency_max);
            jac += r.jacobian_failures.len();
            if !r.passed {
                failed.push(format!("{family} case {case}"));
            }
        }
    }
    let adjudicated = |family: FamilyId, case: u8, want: Adoption| {
        let r = verify_proposition(family, default_params(family), case, 500, SEED).unwrap();
        r.provenance.iter().any(|p| p.adopted == want && p.consistent)
    };
    let notes_ok = adjudicated(FamilyId::F1, 6, Adoption::Literal)
        && adjudicated(FamilyId::F5, 8, Adoption::Corrected)
        && adjudicated(FamilyId::F8, 3, Adoption::Corrected);

    // sign variants and the sparse parameter grid
    let mut variants = 0;
    for alg in algebras(sparse_grid) {
        for case in 1..=case_count(alg.family()) {
            for base in canonical_variants(alg.family(), case) {
                let r = verify_base(&alg, &base, &VerifyOptions::new(500, SEED)).unwrap();
                variants += 1;
                worst_res = worst_res.max(r.max_residual);
                worst_tan = worst_tan.max(r.tangency_max);
                jac += r.jacobian_failures.len();
                if !r.passed {
                    failed.push(format!("{} {:?} base {}", alg.family(), alg.params(), base));
                }
            }
        }
    }
    Outcome {
        ok: failed.is_empty() && notes_ok && worst_res < 1e-8 && worst_tan < 1e-8 && jac == 0,
        detail: format!(
            "{reports} cases + {variants} variant runs, max residual {worst_res:.2e}, tangency {worst_tan:.2e}, \
             {jac} Jacobian rank failures, adjudications recorded: {notes_ok}{}",
            if failed.is_empty() { String::new() } else { format!(", failing: {}", failed.join("; ")) }
        ),
    }
}

fn criterion5() -> Outcome {
    let mut partition_failures = 0;
    for family in FamilyId::ALL {
        let r = partition_check(family, default_params(family), 100, 3).unwrap();
        partition_failures += r.failures.len() + r.census_mismatches.len();
    }
    let mut probes = 0;
    let mut chart_failures = 0;
    for alg in algebras(sparse_grid) {
        for case in 2..=case_count(alg.family()) {
            for base in canonical_variants(alg.family(), case) {
                let r = triviality_scan(&alg, &base, 100, 5).unwrap();
                probes += r.n;
                chart_failures += r.failures.len();
            }
        }
    }
    Outcome {
        ok: partition_failures == 0 && chart_failures == 0,
        detail: format!(
            "8 families x 100 pairs: {partition_failures} partition failures; \
             {chart_failures} of {probes} plaque probes without a chart"
        ),
    }
}

fn run_bin(args: &[&str], threads: &str) -> (Vec<u8>, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_korbit"))
        .args(args)
        .env("KORBIT_THREADS", threads)
        .output()
        .expect("run korbit");
    (out.stdout, out.status.code().unwrap_or(-1))
}

fn criterion6() -> Outcome {
    let commands: [&[&str]; 4] = [
        &["scan-md", "--family", "all", "--n", "20000", "--seed", "42"],
        &["verify-props", "--family", "all", "--n", "200", "--seed", "7", "--sign-variants"],
        &["sample-orbit", "--family", "5.3.8", "--params", "1,pi/3", "--F", "0,0,1,-1,1", "--n", "1000", "--seed", "9"],
        &["check-foliation", "--family", "all", "--pairs", "100", "--seed", "3"],
    ];
    let mut mismatches = Vec::new();
    for args in commands {
        let (a, ca) = run_bin(args, "1");
        let (b, cb) = run_bin(args, "8");
        let (c, cc) = run_bin(args, "8");
        if a != b || b != c || ca != 0 || cb != 0 || cc != 0 || a.is_empty() {
            mismatches.push(args[0]);
        }
    }
    Outcome {
        ok: mismatches.is_empty(),
        detail: if mismatches.is_empty() {
            "4 stochastic commands byte-identical across reruns with 1 and 8 threads".into()
        } else {
            format!("differing or failing: {}", mismatches.join(", "))
        },
    }
}

fn criterion7() -> Outcome {
    let mut worst_grad = 0.0_f64;
    let mut probed = 0;
    for alg in algebras(sparse_grid) {
        for case in 2..=case_count(alg.family()) {
            for base in canonical_variants(alg.family(), case) {
                let r = verify_base(&alg, &base, &VerifyOptions::new(200, SEED)).unwrap();
                probed += r.n;
                worst_grad = worst_grad.max(r.gradient_fd_max);
            }
        }
    }
    let h = 1e-6;
    let mut worst_flow = 0.0_f64;
    for alg in algebras(sparse_grid) {
        for k in 0..200 {
            let f = scan_covector(SEED, k);
            let u = sample_element(SEED, k as u64, 2.0);
            let exact = coadjoint_tangent(&alg, &f, &u);
            let fwd = coadjoint_move(&alg, &f, &AlgebraElement(u.0.map(|v| v * h)));
            let back = coadjoint_move(&alg, &f, &AlgebraElement(u.0.map(|v| -v * h)));
            let scale = vec_norm_inf(&exact.0).max(1.0);
            for i in 0..5 {
                let fd = (fwd.0[i] - back.0[i]) / (2.0 * h);
                worst_flow = worst_flow.max((fd - exact.0[i]).abs() / scale);
            }
        }
    }
    Outcome {
        ok: worst_grad < 1e-4 && worst_flow < 1e-4,
        detail: format!(
            "constraint gradients vs central differences at {probed} points: {worst_grad:.2e}; \
             first-order flow vs (ad U)ᵀF: {worst_flow:.2e}"
        ),
    }
}

type Criterion = (u8, &'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 7] = [
        (1, "algebra soundness", criterion1, Duration::from_secs(1)),
        (2, "closed-form exponential", criterion2, Duration::from_secs(5)),
        (3, "MD property", criterion3, Duration::from_secs(30)),
        (4, "orbit equations", criterion4, Duration::from_secs(60)),
        (5, "foliation geometry", criterion5, Duration::from_secs(30)),
        (6, "determinism", criterion6, Duration::from_secs(120)),
        (7, "derivative cross-checks", criterion7, Duration::from_secs(60)),
    ];
    let mut all_ok = true;
    for (k, name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let ok = outcome.ok && elapsed <= budget;
        all_ok &= ok;
        println!(
            "criterion {k} {name}: {}  {} [{:.2} s, budget {} s]",
            if ok { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    if !all_ok {
        std::process::exit(1);
    }
}
