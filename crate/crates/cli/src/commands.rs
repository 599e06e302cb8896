use std::collections::BTreeMap;

use serde::Serialize;
use sofic_perm::factorization::{CertificateRecord, InfeasibleReason};
use sofic_perm::perm::PermReport;
use sofic_perm::profile::{bracket_index, ceil_sqrt, two_class_condition};
use sofic_perm::rational::{self, ratio, Rational};
use sofic_perm::suites::{SuiteConfig, SuiteOutcome};
use sofic_perm::witness::{
    approximate_conjugator, build_power_class_witness, build_two_class_witness,
};
use sofic_perm::{factorize, Error, Permutation, SoficProfile};

use crate::{
    emit, read_permutation, CheckCommand, Cli, Command, Failure, Format, VerifyArgs, WitnessCommand,
};

type Outcome = Result<(), Failure>;

fn f(r: &Rational) -> String {
    rational::format(r)
}

pub fn run(cli: &Cli) -> Outcome {
    let format = cli.format;
    match &cli.command {
        Command::Stats {
            input,
            inf_threshold,
        } => stats(
            format,
            read_permutation(input.input.as_deref(), input.degree)?,
            *inf_threshold,
        ),
        Command::Factorize { input, l1, l2 } => {
            let sigma = read_permutation(input.input.as_deref(), input.degree)?;
            factorize_cmd(format, &sigma, *l1 as usize, *l2 as usize)
        }
        Command::Check { predicate } => check(format, predicate),
        Command::Witness { kind } => witness(format, kind),
        Command::Verify(args) => verify(format, args),
    }
}

#[derive(Serialize)]
struct StatsOutput {
    #[serde(flatten)]
    report: PermReport,
    threshold: u64,
    profile: SoficProfile,
}

fn stats(format: Format, p: Permutation, threshold: Option<u64>) -> Outcome {
    let threshold = threshold
        .unwrap_or_else(|| ceil_sqrt(p.degree() as u64))
        .max(1);
    let out = StatsOutput {
        report: PermReport::new(&p),
        threshold,
        profile: SoficProfile::of_permutation(&p, threshold),
    };
    emit(format, &out, || {
        let r = &out.report;
        let cyc: Vec<String> = r.cyc.iter().map(|(i, m)| format!("{i}:{m}")).collect();
        let cycles = p.format_cycles();
        [
            format!("degree: {}", r.degree),
            format!("cycles: {cycles}"),
            format!("cyc: {{{}}}", cyc.join(", ")),
            format!("m: {}", r.m),
            format!("n_cycles: {}", r.n_cycles),
            format!("fixed_points: {}", r.fixed_point_count),
            format!("hamming_to_id: {}", f(&r.hamming_to_id)),
            format!("profile (threshold {}): {}", out.threshold, out.profile),
        ]
        .join("\n")
    });
    Ok(())
}

#[derive(Serialize)]
struct FactorizeOutput {
    feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<CertificateRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<InfeasibleReason>,
}

fn factorize_cmd(format: Format, sigma: &Permutation, l1: usize, l2: usize) -> Outcome {
    match factorize(sigma, l1, l2) {
        Ok(cert) => {
            let record = cert.record();
            let text = certificate_text(&record);
            emit(
                format,
                &FactorizeOutput {
                    feasible: true,
                    certificate: Some(record),
                    reason: None,
                },
                || text,
            );
            Ok(())
        }
        Err(Error::Infeasible(reason)) => {
            emit(
                format,
                &FactorizeOutput {
                    feasible: false,
                    certificate: None,
                    reason: Some(reason),
                },
                || format!("infeasible: {reason}"),
            );
            Err(Failure::Reported(3))
        }
        Err(e) => Err(e.into()),
    }
}

fn certificate_text(r: &CertificateRecord) -> String {
    [
        format!("sigma: {}", r.sigma),
        format!("c1: {}", r.c1),
        format!("c2: {}", r.c2),
        format!("lengths: {} {}", r.l1, r.l2),
        format!("verified: {}", r.verified),
    ]
    .join("\n")
}

#[derive(Serialize)]
struct CheckOutput {
    predicate: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    index: Option<u64>,
    inequalities: Vec<String>,
}

impl CheckOutput {
    fn text(&self) -> String {
        let head = match (self.verdict, self.index) {
            (Some(v), _) => v.to_string(),
            (None, Some(i)) => i.to_string(),
            (None, None) => String::new(),
        };
        format!("{head}: {}", self.inequalities.join("; "))
    }
}

fn relation(holds: bool, le: bool) -> &'static str {
    match (holds, le) {
        (true, true) => "≤",
        (false, true) => ">",
        (true, false) => "≥",
        (false, false) => "<",
    }
}

fn check(format: Format, predicate: &CheckCommand) -> Outcome {
    let out = match predicate {
        CheckCommand::InClassPower { cp, cq, m } => {
            let (p, q) = (cp.profile()?, cq.profile()?);
            let verdict = SoficProfile::in_class_power(&q, &p, *m)?;
            let bound = Rational::from_integer(*m as i128) * p.inf_mass();
            CheckOutput {
                predicate: "in-class-power",
                verdict: Some(verdict),
                index: None,
                inequalities: vec![format!(
                    "{} {} {}",
                    f(&q.inf_mass()),
                    relation(verdict, true),
                    f(&bound)
                )],
            }
        }
        CheckCommand::Covers { p, m } => {
            let p = p.profile()?;
            let verdict = p.covers_from(*m)?;
            CheckOutput {
                predicate: "covers",
                verdict: Some(verdict),
                index: None,
                inequalities: vec![format!(
                    "{} {} {}",
                    f(&p.inf_mass()),
                    relation(verdict, false),
                    f(&ratio(1, *m as i128))
                )],
            }
        }
        CheckCommand::Bracket { c } => {
            let m = bracket_index(*c)?;
            let inequality = if m == 1 {
                format!("{} = 1/1", f(c))
            } else {
                format!("1/{m} ≤ {} < 1/{}", f(c), m - 1)
            };
            CheckOutput {
                predicate: "bracket",
                verdict: None,
                index: Some(m),
                inequalities: vec![inequality],
            }
        }
        CheckCommand::TwoClass {
            p,
            p_m,
            p_n,
            c1,
            c2,
        } => {
            let (m, n) = match (p, p_m, p_n) {
                (Some(p), _, _) => (p.m(), p.n()),
                (None, Some(m), Some(n)) => (*m, *n),
                _ => return Err(Error::Range("give --p or both --p-m and --p-n".into()).into()),
            };
            let verdict = two_class_condition(m, n, *c1, *c2)?;
            let (sum, diff) = (m + n, m - n);
            let (csum, cdiff) = (*c1 + *c2, *c1 - *c2);
            CheckOutput {
                predicate: "two-class",
                verdict: Some(verdict),
                index: None,
                inequalities: vec![
                    format!(
                        "m + n = {} {} c1 + c2 = {}",
                        f(&sum),
                        relation(sum <= csum, true),
                        f(&csum)
                    ),
                    format!(
                        "m - n = {} {} c1 - c2 = {}",
                        f(&diff),
                        relation(diff >= cdiff, false),
                        f(&cdiff)
                    ),
                ],
            }
        }
        CheckCommand::Trace { p, img } => {
            let t = p.trace_constraints(img);
            let (m, n) = t.lhs;
            let (mi, ni) = t.rhs;
            let mut inequalities = vec![
                format!(
                    "m + n: {} {} {}",
                    f(&(mi + ni)),
                    relation(t.sum_nonincreasing, true),
                    f(&(m + n))
                ),
                format!(
                    "m - n: {} {} {}",
                    f(&(mi - ni)),
                    relation(t.difference_nondecreasing, false),
                    f(&(m - n))
                ),
                format!(
                    "n: {} {} {}",
                    f(&ni),
                    relation(t.n_nonincreasing, true),
                    f(&n)
                ),
            ];
            if let Some((a, b)) = t.bracket {
                let show = |x: Option<u64>| x.map_or("none".to_string(), |v| v.to_string());
                inequalities.push(format!(
                    "bracket: {} {} {}",
                    show(b),
                    if a == b { "=" } else { "≠" },
                    show(a)
                ));
            }
            CheckOutput {
                predicate: "trace",
                verdict: Some(t.all_hold()),
                index: None,
                inequalities,
            }
        }
    };
    emit(format, &out, || out.text());
    Ok(())
}

#[derive(Serialize)]
struct ConjugatorOutput {
    r: String,
    defect: String,
    unmatched_mass: usize,
    glued_p: usize,
    glued_q: usize,
}

fn witness(format: Format, kind: &WitnessCommand) -> Outcome {
    match kind {
        WitnessCommand::Power {
            n,
            cp,
            cq,
            m,
            parts,
        } => {
            let report = build_power_class_witness(*n, *cp, *cq, *m)?;
            let record = report.record(*parts);
            emit(format, &record, || {
                let mut lines = vec![
                    format!(
                        "case: {}",
                        serde_json::to_value(record.case).unwrap().as_str().unwrap()
                    ),
                    format!("degree: {}", record.degree),
                    format!("target: {}", record.target),
                    format!("achieved: {}", record.achieved),
                    format!("defect: {}", record.defect),
                    format!(
                        "part supports: {}",
                        record
                            .part_supports
                            .iter()
                            .map(|s| s.to_string())
                            .collect::<Vec<_>>()
                            .join(" ")
                    ),
                ];
                if let Some(parts) = &record.parts {
                    lines.extend(parts.iter().map(|p| format!("part: {p}")));
                }
                lines.join("\n")
            });
            Ok(())
        }
        WitnessCommand::TwoClass { input, c1, c2 } => {
            let p = read_permutation(input.input.as_deref(), input.degree)?;
            let record = build_two_class_witness(&p, *c1, *c2)?.record();
            let text = certificate_text(&record);
            emit(format, &record, || text);
            Ok(())
        }
        WitnessCommand::Conjugator { p, q, degree } => {
            let p = read_permutation(Some(p), *degree)?;
            let q = read_permutation(Some(q), *degree)?;
            let a = approximate_conjugator(&p, &q)?;
            let out = ConjugatorOutput {
                r: a.r.format_one_line(),
                defect: f(&a.defect),
                unmatched_mass: a.unmatched_mass,
                glued_p: a.glued_p,
                glued_q: a.glued_q,
            };
            emit(format, &out, || {
                [
                    format!("r: {}", out.r),
                    format!("defect: {}", out.defect),
                    format!("unmatched mass: {}", out.unmatched_mass),
                    format!("unmatched orbits: {} {}", out.glued_p, out.glued_q),
                ]
                .join("\n")
            });
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct VerifyOutput {
    seed: u64,
    passed: bool,
    suites: Vec<SuiteOutcome>,
    settings: BTreeMap<&'static str, String>,
}

fn verify(format: Format, args: &VerifyArgs) -> Outcome {
    let mut config = SuiteConfig {
        seed: args.seed,
        ..SuiteConfig::default()
    };
    if let Some(max_n) = args.max_n {
        config.max_n = max_n;
    }
    if let Some(budget) = args.budget {
        config.budget = budget;
    }
    if let Some(samples) = args.samples {
        config.samples = samples;
    }
    let suites = sofic_perm::suites::run_all(&args.suite.0, &config)?;
    let passed = suites.iter().all(SuiteOutcome::passed);
    let settings = [
        ("max_n", config.max_n.to_string()),
        ("budget", config.budget.to_string()),
        ("samples", config.samples.to_string()),
    ]
    .into_iter()
    .collect();
    let out = VerifyOutput {
        seed: config.seed,
        passed,
        suites,
        settings,
    };
    emit(format, &out, || {
        let mut lines = Vec::new();
        for s in &out.suites {
            lines.push(format!(
                "{}: {} ({} checks, {} failures)",
                s.suite,
                if s.passed() { "pass" } else { "FAIL" },
                s.checked,
                s.failures
            ));
            lines.extend(s.notes.iter().map(|n| format!("  {n}")));
            lines.extend(s.details.iter().map(|d| format!("  failure: {d}")));
        }
        lines.join("\n")
    });
    if passed {
        Ok(())
    } else {
        Err(Failure::Suites)
    }
}
