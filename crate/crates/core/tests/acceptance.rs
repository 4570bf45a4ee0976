//! Runs every acceptance criterion and prints one pass/fail line each.

use std::process::ExitCode;
use std::time::Instant;

use dmspace::verify;

const CRITERIA: [(&str, &str); 10] = [
    ("rank6", "Z x Z/2 example: delta 3, Z-rank 6, six basis elements in DM(X)"),
    ("homothety", "k+1 copies of 1: rank k+1 and binom(n+k,k) in DM(X), k = 1..4"),
    ("zonotope", "delta * |torsion| = #zonotope points, 25 random lists x 3 shifts"),
    ("exact-seq", "deletion-restriction sequence exact with additive window ranks, 15 lists"),
    ("unimodular", "flag basis values on zonotope points have determinant +-1, 10 lists"),
    ("oracle", "partition counts equal Heaviside convolution at 200 points, 10 lists"),
    ("big-cell", "cell quasi-polynomials lie in DM(X) and match counts off the fit points"),
    ("local", "local pieces reassemble exactly and satisfy their D(X_p) equations"),
    ("filtration", "decomposition of F(X) combinations reassembles exactly on core windows"),
    ("face-delta", "nabla of the complement applied to each face function is delta_0"),
];

fn main() -> ExitCode {
    let seed = 0;
    let mut failed = 0;
    let start = Instant::now();
    for (i, (suite, what)) in CRITERIA.iter().enumerate() {
        let t = Instant::now();
        let report = verify::run_suite(suite, seed).expect("known suite");
        if !report.pass {
            failed += 1;
            for line in report.lines().iter().filter(|l| l.contains(": FAIL")) {
                println!("    {line}");
            }
        }
        println!(
            "criterion {:>2} [{suite}] {}: {} checks, {:.1}s — {what}",
            i + 1,
            if report.pass { "PASS" } else { "FAIL" },
            report.checks.len(),
            t.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {}/10 passed in {:.1}s", 10 - failed, start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
