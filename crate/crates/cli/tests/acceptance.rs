//! Acceptance criteria 1-8. Runs without the libtest harness so that each
//! criterion prints exactly one PASS or FAIL line.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::process::{Command, ExitCode};
use std::time::Instant;

use common::{alexander_oracle, expr_strategy, substitute_power, torus_alexander_formula, torus_signature_oracle};
use knotform_core::linalg::{signature_charpoly, signature_ldl};
use knotform_core::seifert::{expected_size, is_block_diagonal, parallel_copies_twisted, HalfTwist};
use knotform_core::verify::{StepStatus, REQUIRED_SAMPLES};
use knotform_core::{
    alexander, arf, braid_seifert, cable, check_metabolizer, connected_sum, determinant, eval, fibered_consistent,
    mirror, negate, obstruction_report, plumb, reverse, signature, torus_seifert, verify_paper, BraidWord, KnotExpr,
    MetabolizerCandidate, SeifertMatrix, Verdict,
};
use num_bigint::BigInt;
use num_traits::Signed;
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    num_integer::Integer::gcd(&a, &b)
}

fn torus_oracle() -> Outcome {
    let mut pairs = 0;
    for m in 2u64..15 {
        for n in m + 1..=15 {
            if gcd(m, n) != 1 {
                continue;
            }
            let expected = torus_alexander_formula(m, n);
            let t = torus_seifert(m as i64, n as i64).map_err(|e| e.to_string())?;
            let b = braid_seifert(&BraidWord::torus(m as usize, n as usize)).map_err(|e| e.to_string())?;
            check(alexander(&t) == expected, || {
                format!("torus_seifert({m},{n}) Alexander")
            })?;
            check(alexander(&b) == expected, || format!("braid ({m},{n}) Alexander"))?;
            check(signature(&t) == signature(&b), || format!("({m},{n}) signature"))?;
            check(determinant(&t) == determinant(&b), || format!("({m},{n}) determinant"))?;
            check(arf(&t) == arf(&b), || format!("({m},{n}) Arf"))?;
            pairs += 1;
        }
    }
    Ok(format!(
        "{pairs} coprime pairs, torus and braid agree with the product formula"
    ))
}

fn signature_values() -> Outcome {
    let mut parts = Vec::new();
    for (m, n, expected) in [(2, 3, -2), (2, 13, -12), (2, 15, -14), (3, 5, -8)] {
        let s = torus_seifert(m, n).map_err(|e| e.to_string())?.symmetrized();
        let (a, b) = (signature_charpoly(&s), signature_ldl(&s));
        let lattice = torus_signature_oracle(m as u64, n as u64);
        check(a == expected && b == expected && lattice == expected, || {
            format!("T({m},{n}): charpoly {a}, ldl {b}, lattice {lattice}, expected {expected}")
        })?;
        parts.push(format!("T({m},{n})={expected}"));
    }
    Ok(parts.join(" "))
}

fn satellite_identity() -> Outcome {
    let t = |m, n| torus_seifert(m, n).map_err(|e| e.to_string());
    let companions = [
        ("unknot", SeifertMatrix::empty()),
        ("T(2,3)", t(2, 3)?),
        ("T(2,5)", t(2, 5)?),
        (
            "T(2,3)#T(2,5)",
            connected_sum(&[t(2, 3)?, t(2, 5)?]).map_err(|e| e.to_string())?,
        ),
    ];
    let mut cases = 0;
    for (name, v) in &companions {
        for (m, n) in [(2i64, 13i64), (2, 15), (2, -15), (3, 4)] {
            let c = cable(v, m, n).map_err(|e| e.to_string())?;
            let pattern = torus_alexander_formula(m as u64, n.unsigned_abs());
            let expected = substitute_power(&alexander_oracle(v), m).mul(&pattern);
            check(alexander(&c) == expected, || format!("cable({m},{n},{name}) Alexander"))?;
            check(alexander_oracle(&c) == expected, || {
                format!("cable({m},{n},{name}) interpolation")
            })?;
            let copies = m as usize * v.size();
            check(is_block_diagonal(&c, &[copies, c.size() - copies]), || {
                format!("cable({m},{n},{name}) has nonzero cross pairings")
            })?;
            cases += 1;
        }
    }
    Ok(format!("{cases} cables satisfy the identity and are block diagonal"))
}

fn run_binary(args: &[&str]) -> Result<(i32, Value), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_knotform"))
        .args(args)
        .env_remove("KNOT_LOG")
        .output()
        .map_err(|e| e.to_string())?;
    let code = out.status.code().ok_or("killed by a signal")?;
    let v = serde_json::from_slice(&out.stdout).map_err(|e| format!("invalid JSON: {e}"))?;
    Ok((code, v))
}

fn flagship() -> Outcome {
    let report = verify_paper();
    if let Some(s) = report.steps.iter().find(|s| s.status != StepStatus::Pass) {
        return Err(format!("step {} is {}: {}", s.id, s.status.as_str(), s.detail));
    }
    let r = report.report.as_ref().ok_or("no obstruction report")?;
    check(r.signature == 0 && r.arf == 0, || "σ or Arf nonzero".into())?;
    check(r.determinant_root.is_some(), || "determinant is not a square".into())?;
    check(r.fox_milnor.is_pass(), || "Fox-Milnor did not pass".into())?;
    check(r.certified_samples() >= REQUIRED_SAMPLES, || {
        format!("{} samples", r.certified_samples())
    })?;
    let lm = eval(&knotform_core::named("LM").unwrap()).map_err(|e| e.to_string())?;
    check(lm.size() == 60 && fibered_consistent(&lm), || {
        "LM size or fiberedness".into()
    })?;
    check(report.exit_code() == 0, || {
        format!("library exit code {}", report.exit_code())
    })?;
    let (code, json) = run_binary(&["verify-paper", "--json"])?;
    check(code == 0, || format!("verify-paper exited {code}"))?;
    check(json["verdict"] == "ConsistentWithAlgebraicallySlice", || {
        format!("verdict {}", json["verdict"])
    })?;
    Ok(format!(
        "{} steps pass; det {} = {}^2; {} certified samples; exit 0",
        report.steps.len(),
        r.determinant,
        r.determinant_root.as_ref().unwrap(),
        r.certified_samples()
    ))
}

fn ribbon_summands() -> Outcome {
    let t23 = torus_seifert(2, 3).map_err(|e| e.to_string())?;
    let summands = [
        ("T(2,13)", torus_seifert(2, 13).map_err(|e| e.to_string())?),
        ("T(2,15)", torus_seifert(2, 15).map_err(|e| e.to_string())?),
        ("cable(2,1,T(2,3))", cable(&t23, 2, 1).map_err(|e| e.to_string())?),
    ];
    for (name, w) in &summands {
        let v = connected_sum(&[w.clone(), negate(w)]).map_err(|e| e.to_string())?;
        let h = MetabolizerCandidate::diagonal(w.size());
        check(check_metabolizer(&v, &h) == Ok(true), || format!("{name} ⊕ -{name}"))?;
    }
    Ok("diagonal metabolizers for T(2,13), T(2,15), cable(2,1,T(2,3))".into())
}

fn negative_control() -> Outcome {
    let r = obstruction_report(&torus_seifert(2, 3).map_err(|e| e.to_string())?, 64);
    check(r.verdict == Verdict::ObstructedFromSlice, || r.verdict.as_str().into())?;
    let f = r.failures();
    check(f == ["fox_milnor", "signatures", "determinant", "arf"], || {
        format!("failures {f:?}")
    })?;
    Ok(format!("T(2,3) obstructed by {}", f.join(", ")))
}

fn property_suites() -> Outcome {
    const CASES: usize = 120;
    let mut runner = TestRunner::new_with_rng(Config::default(), TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    let strategy = expr_strategy(40);
    let exprs: Vec<KnotExpr> = (0..CASES)
        .map(|_| strategy.new_tree(&mut runner).map(|t| t.current()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let mats: Vec<SeifertMatrix> = exprs
        .iter()
        .map(eval)
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    for (i, (e, v)) in exprs.iter().zip(&mats).enumerate() {
        let ctx = || format!("case {i}: {e}");
        check(v.size() == expected_size(e), || format!("{} size", ctx()))?;
        let k = v.intersection_form();
        check(k.det().abs() == BigInt::from(1), || format!("{} not unimodular", ctx()))?;
        let d = alexander(v);
        check(d.is_symmetric() && d.at_one() == BigInt::from(1), || {
            format!("{} Δ normalization", ctx())
        })?;
        let m = mirror(v);
        check(mirror(&m) == *v && signature(&m) == -signature(v), || {
            format!("{} mirror laws", ctx())
        })?;
        check(alexander(&m) == d && arf(&m) == arf(v), || {
            format!("{} mirror invariants", ctx())
        })?;
        let r = reverse(v);
        check(
            reverse(&r) == *v && alexander(&r) == d && signature(&r) == signature(v),
            || format!("{} reverse laws", ctx()),
        )?;
        check(signature(&negate(v)) == -signature(v), || format!("{} negate", ctx()))?;
        if v.size() <= 12 {
            for copies in 1..=3 {
                check(
                    parallel_copies_twisted(v, copies, HalfTwist::Positive)
                        == parallel_copies_twisted(v, copies, HalfTwist::Negative),
                    || format!("{} half twist", ctx()),
                )?;
            }
        }
        let w = &mats[(i + 1) % CASES];
        let s = connected_sum(&[v.clone(), w.clone()]).map_err(|e| e.to_string())?;
        check(alexander(&s) == d.mul(&alexander(w)), || {
            format!("{} Δ multiplicativity", ctx())
        })?;
        check(signature(&s) == signature(v) + signature(w), || {
            format!("{} σ additivity", ctx())
        })?;
        check(arf(&s) == (arf(v) + arf(w)) % 2, || format!("{} Arf additivity", ctx()))?;
        check(determinant(&s) == determinant(v) * determinant(w), || {
            format!("{} det multiplicativity", ctx())
        })?;
        check(plumb(&[v.clone(), w.clone()]).map_err(|e| e.to_string())? == s, || {
            format!("{} plumb", ctx())
        })?;
    }
    Ok(format!("{CASES} generated expressions satisfy every law"))
}

fn cited_notes() -> Outcome {
    let (_, json) = run_binary(&["verify-paper", "--json"])?;
    let notes = json["notes"].as_array().ok_or("no notes")?;
    for id in ["not-ribbon", "r1-r2-undecided"] {
        check(
            notes
                .iter()
                .any(|n| n["id"] == id && n["text"].as_str().is_some_and(|t| !t.is_empty())),
            || format!("missing note {id}"),
        )?;
    }
    let steps = json["steps"].as_array().ok_or("no steps")?;
    check(
        steps.iter().all(|s| !s["id"].as_str().unwrap_or("").contains("ribbon")),
        || "a step claims to decide ribbonness".into(),
    )?;
    Ok(format!(
        "{} cited notes, no ribbon computation among {} steps",
        notes.len(),
        steps.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("torus oracle", torus_oracle),
        ("signature values", signature_values),
        ("satellite identity", satellite_identity),
        ("verify-paper", flagship),
        ("ribbon-summand metabolizers", ribbon_summands),
        ("negative control", negative_control),
        ("property suites", property_suites),
        ("cited, not computed", cited_notes),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} PASS {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL {name} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
