//! The twelve acceptance criteria, each over its stated genera, with one
//! PASS/FAIL line per criterion.

use std::time::{Duration, Instant};

use hvol::verify::{CheckResult, Criterion, VerifyConfig};
use hvol::Genus;

/// Runs one criterion and prints its line; returns whether it passed.
fn run(c: Criterion, budget: Option<Duration>) -> bool {
    let genera: Vec<Genus> = c
        .default_genera()
        .into_iter()
        .map(|g| Genus::new(g as i64).unwrap())
        .collect();
    let start = Instant::now();
    let checks = c.run(&genera, &VerifyConfig::default());
    let elapsed = start.elapsed();
    let checks: Vec<CheckResult> = match checks {
        Ok(v) => v,
        Err(e) => {
            println!(
                "FAIL criterion {:>2}: {} (error: {e})",
                c.number(),
                c.label()
            );
            return false;
        }
    };
    let worst = checks
        .iter()
        .filter(|r| r.tolerance > 0.0)
        .map(|r| r.max_abs_err)
        .fold(0.0, f64::max);
    let in_time = budget.is_none_or(|b| elapsed <= b);
    let pass = in_time && checks.iter().all(|r| r.pass);
    println!(
        "{} criterion {:>2}: {} ({} checks, worst measured err {:.2e}, {:.2?}{})",
        if pass { "PASS" } else { "FAIL" },
        c.number(),
        c.label(),
        checks.len(),
        worst,
        elapsed,
        budget.map_or(String::new(), |b| format!(" of {b:?}"))
    );
    for r in checks.iter().filter(|r| !r.pass) {
        println!("    {r}");
    }
    if !in_time {
        println!("    exceeded the time budget");
    }
    pass
}

fn main() {
    let secs = Duration::from_secs;
    let plan = [
        (Criterion::PeriodsVsQuadrature, Some(secs(30))),
        (Criterion::PeriodMatrix, None),
        (Criterion::Duality, None),
        (Criterion::IteratedIntegrals, Some(secs(300))),
        (Criterion::HarmonicFormulas, None),
        (Criterion::VolumeTable, None),
        (Criterion::S3Equivariance, None),
        (Criterion::RelatorVanishing, None),
        (Criterion::Basis, None),
        (Criterion::Mod2Dimensions, Some(secs(60))),
        (Criterion::CrossRoute, None),
        (Criterion::PresentationCohomology, Some(secs(600))),
    ];
    println!("acceptance: {} criteria", plan.len());
    let failed = plan.into_iter().filter(|&(c, b)| !run(c, b)).count();
    if failed > 0 {
        println!("acceptance: {failed} criteria failed");
        std::process::exit(1);
    }
    println!("acceptance: all criteria passed");
}
