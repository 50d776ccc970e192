use anyhow::Result;
use g5_core::arith::{hws_bound, pgl3_order_divisible_by_5, prime_powers_in, PrimePower};
use g5_core::curves::{
    invariant_triple_singularity, quadric_random_search, ProjectiveSpace, QuadricCase, QuadricSystem, TrigonalKernel,
    TrigonalMode, DEFAULT_P4_BUDGET,
};
use g5_core::ff::{FieldSpec, Fq, Matrix};
use g5_core::hermitian::{gamma_roots, reduction_report, verify_lattice_data, RootChoice};
use g5_core::padic::{
    certify_un_equals_one, recurrence_tables, series_coefficients, solve_diophantine, strassmann_bound,
};
use g5_core::sweep::{run_sweep, DiscriminantSweep, P4CountSweep, SweepOptions, SweepOutcome, TrigonalSweep};
use g5_core::Error;
use serde_json::{json, Value};

use crate::manifest::{Clock, RunManifest, Verdict};
use crate::{Command, Mode, Threads};

/// `--threads`, else `$G5_THREADS`, else 0 (all cores).
fn thread_count(t: &Threads) -> Result<usize> {
    if let Some(n) = t.threads {
        return Ok(n);
    }
    match std::env::var("G5_THREADS") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("G5_THREADS must be a number, got {s:?}")).into()),
        Err(_) => Ok(0),
    }
}

fn elem(f: &FieldSpec, x: Fq) -> Value {
    json!(f.coeffs(x))
}

fn elems(f: &FieldSpec, xs: &[Fq]) -> Value {
    Value::Array(xs.iter().map(|&x| elem(f, x)).collect())
}

fn matrix(f: &FieldSpec, m: &Matrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| elems(f, r)).collect())
}

fn code_coeffs(f: &FieldSpec, code: u64) -> Value {
    elem(f, Fq(code))
}

pub fn run(cmd: &Command) -> Result<RunManifest> {
    let clock = Clock::start();
    let (name, params, verdict, payload) = match cmd {
        Command::ScanDisc { d, q_max, threads, .. } => {
            let sweep = DiscriminantSweep::new(*d, *q_max);
            let opts = SweepOptions { threads: thread_count(threads)?, ..Default::default() };
            let found = run_sweep(&sweep, &opts)?.complete().expect("no stop requested");
            // the residue classes that a discriminant -19 field can have
            let ok = *d != -19 || found.iter().all(|pp| pp.residue5 <= 2);
            let qs: Vec<u64> = found.iter().map(|pp| pp.q).collect();
            (
                "scan-disc",
                json!({ "d": d, "q_max": q_max }),
                Verdict::from_check(ok),
                json!({ "qs": qs, "entries": found }),
            )
        }
        Command::Trigonal { q, mode, threads, checkpoint, stop_after, .. } => {
            let mode = match mode {
                Mode::Fast => TrigonalMode::Fast,
                Mode::Naive => TrigonalMode::Naive,
            };
            let kernel = TrigonalKernel::new(*q, mode)?;
            let f = kernel.spec().clone();
            let sweep = TrigonalSweep::new(kernel);
            let opts = SweepOptions {
                threads: thread_count(threads)?,
                checkpoint_dir: checkpoint.clone(),
                stop_after: *stop_after,
            };
            let params = json!({ "q": q, "mode": mode });
            match run_sweep(&sweep, &opts)? {
                SweepOutcome::Interrupted { completed, total } => (
                    "trigonal",
                    params,
                    Verdict::Indeterminate,
                    json!({ "interrupted": true, "completed_chunks": completed, "total_chunks": total }),
                ),
                SweepOutcome::Complete(table) => {
                    let s = table.summary();
                    let argmax: Vec<Value> =
                        s.argmax.iter().map(|&(a3, a4)| json!([code_coeffs(&f, a3), code_coeffs(&f, a4)])).collect();
                    (
                        "trigonal",
                        params,
                        Verdict::from_check(s.below_bound),
                        json!({
                            "q": s.q,
                            "n_max": s.n_max,
                            "pairs": s.pairs,
                            "max_adjusted": s.max_adjusted,
                            "argmax": argmax,
                            "max_total": s.max_total,
                            "clean": s.clean,
                            "degenerate": s.degenerate,
                            "extra_singular": s.extra_singular,
                            "below_bound": s.below_bound,
                            "table_digest": table.digest(),
                        }),
                    )
                }
            }
        }
        Command::QuadricCount { q, case, coeffs, threads, .. } => {
            if coeffs.len() != 9 {
                return Err(Error::InvalidArgument(format!("expected 9 coefficients, got {}", coeffs.len())).into());
            }
            let case = QuadricCase::try_from(*case)?;
            let f = FieldSpec::from_order(*q)?;
            let system = QuadricSystem::new(&f, case, coeffs)?;
            let points = ProjectiveSpace::new(*q, 5).len();
            if points > DEFAULT_P4_BUDGET {
                return Err(Error::BudgetExceeded { needed: points, budget: DEFAULT_P4_BUDGET }.into());
            }
            let n_max = hws_bound(&PrimePower::new(*q)?, 5).n_max as u64;
            let sweep = P4CountSweep::new(f.clone(), system);
            let opts = SweepOptions { threads: thread_count(threads)?, ..Default::default() };
            let count = run_sweep(&sweep, &opts)?.complete().expect("no stop requested");
            let verdict = if count == n_max { Verdict::Candidate } else { Verdict::Pass };
            let coeff_json: Vec<Value> = coeffs.iter().map(|&c| code_coeffs(&f, c)).collect();
            (
                "quadric-count",
                json!({ "q": q, "case": case, "coeffs": coeffs }),
                verdict,
                json!({ "q": q, "case": case, "coeffs": coeff_json, "count": count, "n_max": n_max }),
            )
        }
        Command::QuadricSearch { q, case, samples, seed, .. } => {
            let case = QuadricCase::try_from(*case)?;
            let f = FieldSpec::from_order(*q)?;
            let report = quadric_random_search(&f, case, *samples, *seed, DEFAULT_P4_BUDGET)?;
            let verdict = if report.candidates.is_empty() { Verdict::Pass } else { Verdict::Candidate };
            (
                "quadric-search",
                json!({ "q": q, "case": case, "samples": samples, "seed": seed }),
                verdict,
                serde_json::to_value(&report)?,
            )
        }
        Command::SingularTriple { q, .. } => {
            let rec = invariant_triple_singularity(*q)?;
            ("singular-triple", json!({ "q": q }), Verdict::from_check(rec.singular), serde_json::to_value(&rec)?)
        }
        Command::Pgl3 { q_max, .. } => {
            let mut checked = 0u64;
            let mut violations = Vec::new();
            for pp in prime_powers_in(2, q_max.saturating_add(1)) {
                if pp.residue5 == 2 || pp.residue5 == 3 {
                    checked += 1;
                    if pgl3_order_divisible_by_5(&pp) {
                        violations.push(pp.q);
                    }
                }
            }
            (
                "pgl3",
                json!({ "q_max": q_max }),
                Verdict::from_check(violations.is_empty()),
                json!({ "checked": checked, "violations": violations }),
            )
        }
        Command::Recurrence { n_max, .. } => {
            let table = recurrence_tables(*n_max)?;
            let ones = table.indices_with_u(1);
            let minus = table.indices_with_u(-1);
            let cert = certify_un_equals_one(10, 12, *n_max)?;
            let ok =
                cert.certified && minus.is_empty() && ones.iter().map(|&n| n as u64).eq(cert.solutions.iter().copied());
            (
                "recurrence",
                json!({ "n_max": n_max }),
                Verdict::from_check(ok),
                json!({
                    "solutions": ones,
                    "minus_one_solutions": minus,
                    "certified": cert.certified,
                    "certified_solutions": cert.solutions,
                    "certificate": cert,
                }),
            )
        }
        Command::Strassmann { precision, kmax, .. } => {
            let s1 = series_coefficients(1, *precision, *kmax)?;
            let s2 = series_coefficients(2, *precision, *kmax)?;
            let c1 = strassmann_bound(&s1)?;
            let c2 = strassmann_bound(&s2)?;
            let v12 = s2.coeffs[1].valuation();
            let v21 = s1.coeffs.get(2).map(|c| c.valuation());
            let ok = c1.n <= 2 && c2.n <= 1 && v12 == 1 && v21 == Some(2);
            (
                "strassmann",
                json!({ "precision": precision, "kmax": kmax }),
                Verdict::from_check(ok),
                json!({
                    "certificates": [c1, c2],
                    "valuation_c_1_2": v12,
                    "valuation_c_2_1": v21,
                    "leading_term_congruence": {
                        "r1": s1.leading_term_congruence()?,
                        "r2": s2.leading_term_congruence()?,
                    },
                }),
            )
        }
        Command::Diophantine { n_max, .. } => {
            let sols = solve_diophantine(*n_max)?;
            let pairs: Vec<(String, usize)> = sols.iter().map(|s| (s.x.to_string(), s.n)).collect();
            let floor: Vec<usize> = sols.iter().filter(|s| s.is_floor_sqrt).map(|s| s.n).collect();
            let expected = [("1", 1), ("9", 2), ("559", 7)];
            let ok = pairs.iter().map(|(x, n)| (x.as_str(), *n)).eq(expected) && floor == [7];
            let list: Vec<Value> = sols
                .iter()
                .map(|s| {
                    let x = s.x_u64().map_or_else(|| json!(s.x.to_string()), |v| json!(v));
                    json!({ "x": x, "n": s.n, "is_floor_sqrt": s.is_floor_sqrt })
                })
                .collect();
            ("diophantine", json!({ "n_max": n_max }), Verdict::from_check(ok), json!({ "solutions": list }))
        }
        Command::HermitianVerify { .. } => {
            let report = verify_lattice_data()?;
            let ok = report.checksum_ok
                && report.frozen.is_some()
                && report.relations
                && report.rs_group.order == 10
                && report.rs_group.dihedral_d5
                && report.rs_minus_group.order == 20;
            ("hermitian-verify", json!({}), Verdict::from_check(ok), serde_json::to_value(&report)?)
        }
        Command::Reduce { q, .. } => {
            let f = FieldSpec::from_order(*q)?;
            let roots = gamma_roots(&f)?;
            let int = |cs: &[i64]| -> Vec<Fq> { cs.iter().map(|&c| f.from_int(c)).collect() };
            let x5_minus_1 = int(&[-1, 0, 0, 0, 0, 1]);
            let s_expected = int(&[-1, 1, 2, -2, -1, 1]);
            let mut ok = true;
            let mut choices = Vec::new();
            let mut conjugate = true;
            for choice in [RootChoice::Smaller, RootChoice::Larger] {
                let rep = reduction_report(&f, choice)?;
                ok &= rep.r_order5
                    && rep.s_order2
                    && rep.rsr
                    && rep.charpoly_r == x5_minus_1
                    && rep.charpoly_s == s_expected;
                conjugate &= rep.choices_conjugate;
                choices.push(json!({
                    "choice": choice,
                    "gamma": elem(&f, match choice { RootChoice::Smaller => roots[0], RootChoice::Larger => roots[1] }),
                    "r": matrix(&f, &rep.r),
                    "s": matrix(&f, &rep.s),
                    "charpoly_r": elems(&f, &rep.charpoly_r),
                    "charpoly_s": elems(&f, &rep.charpoly_s),
                    "r_order5": rep.r_order5,
                    "s_order2": rep.s_order2,
                    "rsr_equals_s": rep.rsr,
                }));
            }
            (
                "reduce",
                json!({ "q": q }),
                Verdict::from_check(ok && conjugate),
                json!({ "q": q, "roots": elems(&f, &roots), "choices": choices, "choices_conjugate": conjugate }),
            )
        }
    };
    Ok(clock.finish(name, params, verdict, payload))
}
