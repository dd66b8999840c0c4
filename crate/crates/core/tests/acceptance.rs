use std::time::{Duration, Instant};

use orbcalc::bounds::{counting_lower_bound, upper_bound_equiv, upper_bound_orb, GroupData};
use orbcalc::decomposition::fundamental_identity;
use orbcalc::harness::campaign::{integrality_campaign, move_campaign};
use orbcalc::harness::enumerate::check_enumeration;
use orbcalc::harness::examples::{run_named_example, ExampleParams};
use orbcalc::harness::generator::{generate_cases, FuzzConfig};
use orbcalc::harness::oracle::spherical_triple_check;
use orbcalc::{Rational, Weight};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn int(n: i64) -> Rational {
    Rational::from_int(n)
}

fn within(label: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let out = f()?;
    let took = start.elapsed();
    if took > limit {
        return Err(format!("{label} took {took:.2?}, limit {limit:?}"));
    }
    Ok(format!("{out} in {took:.2?}"))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn additive() -> Outcome {
    within("additive", Duration::from_secs(1), || {
        for (q, k) in [(5, 2), (7, 3), (9, 4)] {
            let kw = Weight::finite(k as u64);
            let p = ExampleParams { q, k: kw, ..Default::default() };
            let r = run_named_example("section3-additive", &p).map_err(|e| e.to_string())?;
            let one_minus = int(1) - Rational::new(1, k);
            let candidate = int(4) - Rational::new(2, k);
            ensure(r.get("x_w(S3,K_i)") == Some(&(one_minus.clone() * 2)), || format!("factor at q={q}"))?;
            ensure(r.get("x_w(H) (2,1)") == Some(&candidate), || format!("candidate at q={q}"))?;
            let c1 = one_minus.clone() * (2 * (q - 1));
            let c2 = one_minus * (2 * (2 * q - 1)) - int(2);
            ensure(c1 > candidate && c2 > candidate, || format!("competitors at q={q}"))?;
            ensure(r.get("(1,b1) lower bound") == Some(&c1), || format!("(1,b1) bound at q={q}"))?;
            ensure(r.get("bridge sphere lower bound") == Some(&c2), || format!("sphere bound at q={q}"))?;
            ensure(r.passed(), || r.to_string())?;
        }
        Ok("3 parameter pairs".into())
    })
}

fn superadd() -> Outcome {
    within("superadd", Duration::from_secs(1), || {
        for (t, w) in [(1u64, 2u64), (1, 3), (2, 2)] {
            let p = ExampleParams { t, w: Weight::finite(w), ..Default::default() };
            let r = run_named_example("superadd", &p).map_err(|e| e.to_string())?;
            let (ti, wi) = (t as i64, w as i64);
            ensure(r.get("netX(built)") == Some(&(int(4 * ti) + Rational::new(2, wi))), || format!("netX t={t} w={w}"))?;
            ensure(r.get("netIota(built)") == Some(&int(-2)), || format!("netIota t={t} w={w}"))?;
            ensure(r.get("x_w(H) after script") == Some(&int(4 * ti + 2)), || format!("final x t={t} w={w}"))?;
            let gap = r.get("g(W;G)").cloned().unwrap() - r.get("g(W|_S;G)").cloned().unwrap();
            ensure(gap == int(wi - 1), || format!("genus gap {gap} at t={t} w={w}"))?;
            ensure(r.passed(), || r.to_string())?;
        }
        Ok("3 parameter pairs".into())
    })
}

fn sixth_sharp() -> Outcome {
    let weights = (2..=24).map(Weight::finite).chain([Weight::INFINITY]);
    let mut n = 0;
    for a in weights {
        let r = run_named_example("sixth-sharp", &ExampleParams { a, ..Default::default() })
            .map_err(|e| e.to_string())?;
        let sixth = Rational::new(1, 6);
        ensure(r.get("netX(H)") == Some(&(sixth.clone() + a.reciprocal())), || format!("netX at a={a}"))?;
        let thin = r.get("x_w(thin)").cloned().unwrap();
        ensure(thin == sixth - a.reciprocal(), || format!("thin at a={a}"))?;
        if a.value().is_none_or(|k| k >= 7) {
            ensure(thin.is_positive(), || format!("thin not positive at a={a}"))?;
        }
        ensure(r.passed(), || r.to_string())?;
        n += 1;
    }
    Ok(format!("{n} values of a"))
}

fn identity_fuzz() -> Outcome {
    within("identity fuzz", Duration::from_secs(10), || {
        let cfg = FuzzConfig { seed: 1, count: 10_000, ..Default::default() };
        let mut checked = 0;
        for (i, d) in generate_cases(&cfg).into_iter().enumerate() {
            let d = d.map_err(|e| e.to_string())?;
            ensure(d.pieces.len() <= 6, || format!("case {i} has {} pieces", d.pieces.len()))?;
            ensure(d.finite_weights().iter().all(|w| *w <= 12), || format!("case {i} weight above 12"))?;
            let c = fundamental_identity(&d).map_err(|e| format!("case {i}: {e}"))?;
            ensure(c.holds, || format!("case {i}: {} != {}", c.lhs, c.rhs))?;
            checked += 1;
        }
        Ok(format!("{checked} cases"))
    })
}

fn low_n() -> Outcome {
    within("enumeration", Duration::from_secs(30), || {
        let ws = [Weight::TWO, Weight::finite(3), Weight::finite(5), Weight::INFINITY];
        let r = check_enumeration(3, &ws);
        ensure(r.passed(), || format!("{r:?}"))?;
        ensure(r.negative_n > 0 && r.zero_n_closed > 0, || "enumeration missed a stratum".into())?;
        Ok(format!("{} assemblies, {} with N<0, {} closed with N=0", r.cases, r.negative_n, r.zero_n_closed))
    })
}

fn move_fuzz() -> Outcome {
    let cfg = FuzzConfig { seed: 1, count: 100_000, ..Default::default() };
    let r = move_campaign(&cfg, 10_000);
    ensure(r.accepted >= 10_000, || format!("only {} moves accepted", r.accepted))?;
    ensure(r.violations.is_empty(), || format!("{} violations, first: {}", r.violations.len(), r.violations[0]))?;
    ensure(r.by_kind.len() == 7, || format!("not every move kind was exercised: {:?}", r.by_kind))?;
    Ok(format!("{} moves over {} cases", r.accepted, r.cases))
}

fn triples() -> Outcome {
    let r = spherical_triple_check(100);
    ensure(r.mismatches.is_empty(), || format!("{:?}", r.mismatches))?;
    Ok(format!("{} triples", r.checked))
}

fn bound_pinning() -> Outcome {
    for t in 1..=5i64 {
        for w in 2..=8i64 {
            let x = upper_bound_orb(&int(4 * t), &Rational::new(-2, w), 1, 1);
            ensure(x == int(4 * t + 2), || format!("upper_bound_orb at t={t} w={w} gave {x}"))?;
        }
    }
    let c = counting_lower_bound(2, &GroupData::cyclic(12));
    ensure(c == int(3), || format!("counting_lower_bound(2,12) = {c}"))?;
    for g in 0..10 {
        for order in 1..=10 {
            let v = upper_bound_equiv(&int(g), 1, &GroupData::cyclic(order));
            ensure(v == int(g), || format!("upper_bound_equiv({g},1,{order}) = {v}"))?;
        }
    }
    Ok("35 + 1 + 100 evaluations".into())
}

fn integrality() -> Outcome {
    let cfg = FuzzConfig { seed: 1, count: 1_000, ..Default::default() };
    let r = integrality_campaign(&cfg);
    ensure(r.passed(), || format!("{:?} {:?}", r.generator_errors.first(), r.failures.first()))?;
    Ok(format!("{} cases", r.cases))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 additive example", additive),
        ("2 super-additive end-to-end", superadd),
        ("3 one-sixth sharpness", sixth_sharp),
        ("4 identity fuzz", identity_fuzz),
        ("5 low-N oracle equivalence", low_n),
        ("6 move monotonicity fuzz", move_fuzz),
        ("7 spherical triples", triples),
        ("8 bound pinning", bound_pinning),
        ("9 integrality", integrality),
    ];
    let mut failed = Vec::new();
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                println!("FAIL criterion {name}: {why}");
                failed.push(name);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed: {failed:?}");
        std::process::exit(1);
    }
}
