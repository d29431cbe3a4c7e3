//! The ten acceptance criteria over the default grid, one line per criterion.

use std::time::Instant;

use finite_w::pyramid::Labeling;
use finite_w::verify::{
    configs_up_to, default_grid, lemma_parameters, mutated, oracle_centralizer_dim, run_suite,
    LemmaId, PlanEntry, Report, Suite, VerificationPlan,
};
use finite_w::yangian::{admissible_triples, centralizer_dim_formula};
use finite_w::{make_config, Config, Mutation, Sign, WOptions};

struct Verdict {
    passed: bool,
    detail: String,
}

fn jobs() -> usize {
    std::env::var("FINITE_W_JOBS")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(8)
}

fn run(entries: Vec<PlanEntry>) -> Report {
    let plan = VerificationPlan {
        entries,
        jobs: jobs(),
        output: None,
    };
    run_suite(&plan).expect("suite runs")
}

fn entries(suite: Suite, max_r: impl Fn(&Config) -> Option<usize>) -> Vec<PlanEntry> {
    default_grid()
        .into_iter()
        .map(|c| {
            let e = PlanEntry::new(c, suite);
            match max_r(&c) {
                Some(r) => e.with_max_r(r),
                None => e,
            }
        })
        .collect()
}

fn verdict_of(report: &Report, prefixes: &[&str]) -> Verdict {
    let mut rows = 0;
    let mut failed = Vec::new();
    for prefix in prefixes {
        let selected: Vec<_> = report.rows_for(prefix).collect();
        if selected.is_empty() {
            failed.push(format!("no rows for {prefix}"));
        }
        rows += selected.len();
        for r in selected
            .into_iter()
            .filter(|r| r.status == finite_w::verify::Status::Fail)
        {
            failed.push(format!(
                "{} [{}] {} {}",
                r.config, r.labeling, r.check, r.parameters
            ));
        }
    }
    Verdict {
        passed: failed.is_empty(),
        detail: if failed.is_empty() {
            format!("{rows} rows")
        } else {
            format!(
                "{} of {rows} rows failed, first: {}",
                failed.len(),
                failed[0]
            )
        },
    }
}

fn row_major_22() -> PlanEntry {
    let c = make_config(2, 2, Sign::Plus).unwrap();
    PlanEntry::new(c, Suite::Invariance).with_options(WOptions {
        labeling: Labeling::RowMajor,
        mutation: Mutation::None,
    })
}

fn invariance() -> Verdict {
    let mut e = entries(Suite::Invariance, |c| Some(c.l + 2));
    e.push(row_major_22().with_max_r(4));
    verdict_of(&run(e), &["invariance"])
}

fn images() -> Verdict {
    let mut e = entries(Suite::Images, |c| Some(c.l + 2));
    let mut rm = row_major_22().with_max_r(4);
    rm.suite = Suite::Images;
    e.push(rm);
    verdict_of(&run(e), &["images.miura", "images.product_form"])
}

fn kernel() -> Verdict {
    verdict_of(&run(entries(Suite::Kernel, |c| Some(c.l + 3))), &["kernel"])
}

fn symmetry() -> Verdict {
    verdict_of(
        &run(entries(Suite::Symmetry, |c| Some(c.l + 3))),
        &["symmetry"],
    )
}

fn centralizer() -> Verdict {
    let mut v = verdict_of(
        &run(entries(Suite::Centralizer, |_| None)),
        &["centralizer.dimension"],
    );
    for (n, l, e, expected) in [(2, 3, Sign::Plus, 5), (2, 3, Sign::Minus, 7)] {
        let c = make_config(n, l, e).unwrap();
        let got = [
            oracle_centralizer_dim(&c) as i64,
            admissible_triples(&c).len() as i64,
            centralizer_dim_formula(&c),
        ];
        if got != [expected; 3] {
            v.passed = false;
            v.detail = format!("{c}: expected {expected}, got {got:?}");
        }
    }
    v
}

fn leading_terms() -> Verdict {
    let mut e = entries(Suite::Centralizer, |_| None);
    e.extend(entries(Suite::Pbw, |_| None).into_iter().map(|mut x| {
        // dimension-4 PBW runs belong to the next criterion
        x.pbw_degree = Some(0);
        x
    }));
    verdict_of(
        &run(e),
        &[
            "centralizer.leading_term",
            "pbw.theta_symbolic",
            "pbw.theta_numeric",
        ],
    )
}

fn pbw() -> Verdict {
    verdict_of(&run(entries(Suite::Pbw, |_| None)), &["pbw.independence"])
}

fn lemmas() -> Verdict {
    let configs = configs_up_to(8);
    let mut v = verdict_of(
        &run(configs
            .iter()
            .map(|&c| PlanEntry::new(c, Suite::Lemma4))
            .collect()),
        &["lemma4"],
    );
    for lemma in LemmaId::all() {
        if configs
            .iter()
            .all(|c| lemma_parameters(lemma, c).is_empty())
        {
            v.passed = false;
            v.detail = format!("lemma {lemma} has no instances with nl <= 8");
        }
    }
    v
}

fn core() -> Verdict {
    verdict_of(
        &run(entries(Suite::Core, |_| None)),
        &[
            "core.lie_axioms",
            "core.matrix_oracle",
            "core.associativity",
            "core.jordan_type",
            "core.chi_character",
            "core.commutator_expansion",
        ],
    )
}

fn mutations() -> Verdict {
    let mut missed = Vec::new();
    let mut counts = Vec::new();
    for m in Mutation::all() {
        let e = entries(Suite::All, |_| None)
            .into_iter()
            .flat_map(|e| {
                e.suite.expand().into_iter().map(move |s| PlanEntry {
                    suite: s,
                    options: mutated(m),
                    ..e.clone()
                })
            })
            .collect();
        let report = run(e);
        let failures: Vec<_> = report.failures().collect();
        if failures.is_empty() || failures.iter().any(|r| r.witness.is_none()) {
            missed.push(m.to_string());
        }
        counts.push(format!("{m}:{}", failures.len()));
    }
    Verdict {
        passed: missed.is_empty(),
        detail: if missed.is_empty() {
            format!("failing rows per mutation {}", counts.join(" "))
        } else {
            format!("undetected mutations {}", missed.join(" "))
        },
    }
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 10] = [
        ("invariance of the generators", invariance),
        ("Miura images equal twisted Yangian images", images),
        ("kernel relations", kernel),
        ("symmetry relation", symmetry),
        ("centralizer dimension and basis", centralizer),
        ("leading terms", leading_terms),
        ("PBW independence", pbw),
        ("determinant lemmas", lemmas),
        ("core algebra properties", core),
        ("mutation sensitivity", mutations),
    ];
    let start = Instant::now();
    let mut all = true;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let v = f();
        all &= v.passed;
        println!(
            "criterion {:>2} {}: {} ({}, {:.1}s)",
            k + 1,
            name,
            if v.passed { "PASS" } else { "FAIL" },
            v.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} in {:.1}s",
        if all { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64()
    );
    if !all {
        std::process::exit(1);
    }
}
