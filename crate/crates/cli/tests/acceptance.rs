//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::cell::RefCell;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use frey_core::arith::{odd_primes_up_to, ExactInt};
use frey_core::denes;
use frey_core::frey::{self, MonomialTriple};
use frey_core::tate;
use num_integer::Integer;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const BOUND: u64 = 1_000_000;

thread_local! {
    static INVOCATIONS: RefCell<Vec<(Vec<String>, Vec<u8>)>> = const { RefCell::new(Vec::new()) };
}

struct Run {
    code: Option<i32>,
    stdout: String,
}

fn exec(args: &[String]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_freytool"))
        .args(args)
        .env_remove("FREY_FACTOR_BOUND")
        .output()
        .expect("freytool runs");
    (out.status.code(), out.stdout)
}

/// Run the CLI and remember the invocation for the determinism check.
fn freytool(args: &[&str]) -> Run {
    let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    let (code, stdout) = exec(&args);
    INVOCATIONS.with(|v| v.borrow_mut().push((args, stdout.clone())));
    Run {
        code,
        stdout: String::from_utf8(stdout).expect("utf-8 output"),
    }
}

fn json(run: &Run) -> Result<Value, String> {
    serde_json::from_str(&run.stdout).map_err(|e| format!("bad JSON: {e}"))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn exit_ok(run: &Run, what: &str) -> Result<(), String> {
    ensure(run.code == Some(0), || format!("{what}: exit code {:?}", run.code))
}

fn conductor_anchor() -> Result<String, String> {
    for model in ["0,0,0,-1,0", "0,3,0,2,0"] {
        let run = freytool(&["conductor", "--model", model]);
        exit_ok(&run, model)?;
        let n = json(&run)?["report"]["conductor"].clone();
        ensure(n == "32", || format!("[{model}] conductor {n}"))?;
    }
    Ok("y² = x³ − x and y² = x(x+1)(x+2) both have conductor 32".into())
}

fn table_oracle() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut count = 0;
    let mut u_checks = 0;
    for v in 1..=8u32 {
        let mut made = 0;
        while made < 16 {
            let a: i64 = 4 * rng.gen_range(-50_000i64..50_000) + 3;
            let b: i64 = (2 * rng.gen_range(-500i64..500) + 1) << v;
            if a.gcd(&b) != 1 || a + b == 0 {
                continue;
            }
            made += 1;
            let triple = MonomialTriple::new(a, b, -a - b);
            let inv = frey::invariants_with_bound(&triple, BOUND).map_err(|e| format!("{triple:?}: {e}"))?;
            let rep = tate::conductor_report(&triple.model(), BOUND).map_err(|e| format!("{triple:?}: {e}"))?;
            let f2 = rep.local.iter().find(|d| d.prime == 2).map_or(0, |d| d.conductor_exponent);
            let expected_t = [5, 3, 3, 0, 1, 1, 1, 1][v as usize - 1];
            ensure(inv.t == expected_t, || format!("{triple:?}: t = {} for ord2(B) = {v}", inv.t))?;
            ensure(f2 == inv.t, || format!("{triple:?}: oracle f2 = {f2}, table t = {}", inv.t))?;
            ensure(rep.conductor == inv.conductor, || {
                format!("{triple:?}: oracle {} vs table {}", rep.conductor, inv.conductor)
            })?;
            if inv.t == 1 {
                ensure(inv.u == -8, || format!("{triple:?}: u = {}", inv.u))?;
                u_checks += 1;
            }
            count += 1;
        }
    }
    Ok(format!("{count} triples over ord2(B) = 1..8 agree; u = -8 in all {u_checks} t = 1 cases"))
}

fn discriminant_congruence() -> Result<String, String> {
    let mut notes = Vec::new();
    for p in ["5", "7", "11", "13"] {
        let run = freytool(&["analyze", "--p", p, "--alpha", "1", "--triple", "-1,1,-1"]);
        exit_ok(&run, p)?;
        let report = &json(&run)?["report"];
        let vals = report["invariants"]["odd_disc_valuations"]
            .as_object()
            .ok_or("missing valuation map")?;
        let p_num: u64 = p.parse().unwrap();
        for (q, v) in vals {
            let v = v.as_u64().ok_or("bad valuation")?;
            ensure(v % p_num == 0, || format!("p = {p}: ord_{q} = {v}"))?;
        }
        ensure(report["odd_valuations_divisible_by_p"] == true, || format!("p = {p}: flag false"))?;
        notes.push(if vals.is_empty() {
            format!("p={p}: vacuous (no odd primes)")
        } else {
            format!("p={p}: {} primes", vals.len())
        });
    }
    Ok(notes.join("; "))
}

fn bernoulli_exact(n: usize) -> Vec<BigRational> {
    let mut b = vec![BigRational::from_integer(1.into())];
    for m in 1..=n {
        let mut binom = ExactInt::from(1);
        let mut sum = BigRational::from_integer(0.into());
        for (j, bj) in b.iter().enumerate() {
            sum += BigRational::from_integer(binom.clone()) * bj;
            binom = binom * ExactInt::from(m + 1 - j) / ExactInt::from(j + 1);
        }
        b.push(-sum / BigRational::from_integer(ExactInt::from(m + 1)));
    }
    b
}

fn denes_scan() -> Result<String, String> {
    let run = freytool(&["denes", "--scan", "29"]);
    exit_ok(&run, "scan 29")?;
    let lines: Vec<Value> = run.stdout.lines().map(serde_json::from_str).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    ensure(lines.len() == 8, || format!("{} reports", lines.len()))?;
    ensure(lines.iter().all(|r| r["criterion_holds"] == true), || "a prime below 31 fails".into())?;

    let r31 = json(&freytool(&["denes", "--p", "31"]))?;
    ensure(r31["order_condition"] == false && r31["ord2"] == 5 && r31["criterion_holds"] == false, || {
        format!("p = 31: {r31}")
    })?;
    let r37 = json(&freytool(&["denes", "--p", "37"]))?;
    ensure(r37["is_regular"] == false && r37["irregular_indices"] == serde_json::json!([32]), || {
        format!("p = 37: {r37}")
    })?;

    let exact = bernoulli_exact(97);
    let mut irregular_pairs = 0;
    for p in (5..=100u64).filter(|&p| frey_core::arith::is_prime_u64(p)) {
        let residues = denes::bernoulli_mod_p(p).map_err(|e| e.to_string())?;
        let pb = ExactInt::from(p);
        for (k, r) in residues {
            let bk = &exact[k as usize];
            let inv = bk.denom().modpow(&(&pb - 2u32), &pb);
            let expected = (bk.numer() * inv).mod_floor(&pb);
            ensure(expected == ExactInt::from(r), || format!("B_{k} mod {p}: {r} vs exact {expected}"))?;
            if r == 0 {
                irregular_pairs += 1;
            }
        }
    }
    Ok(format!(
        "8 primes < 31 hold; 31 fails order (ord2 = 5); 37 irregular at 32; exact Bernoulli agrees for p ≤ 100 ({irregular_pairs} irregular pairs)"
    ))
}

fn search_conformance() -> Result<String, String> {
    let run = freytool(&["verify", "--p-list", "3,5,7,13", "--alpha-list", "1,2,3", "--height", "40"]);
    exit_ok(&run, "verify")?;
    let report = &json(&run)?["report"];
    ensure(report["all_conform"] == true, || "not all conform".into())?;
    let entries = report["entries"].as_array().ok_or("missing entries")?;
    for e in entries {
        let sols = e["solutions"].as_u64().unwrap_or(u64::MAX);
        let want = if e["alpha"] == 1 { 1 } else { 0 };
        ensure(sols == want && e["conforms"] == true, || format!("entry {e}"))?;
    }
    ensure(entries.len() == 11, || format!("{} entries", entries.len()))?;
    Ok(format!("{} (p, α) pairs conform at H = 40; (3, 3) skipped", entries.len()))
}

fn ap_anchors() -> Result<String, String> {
    let squares = freytool(&["ap-search", "--n", "2", "--k", "3", "--height", "20"]);
    exit_ok(&squares, "squares k=3")?;
    let progs = json(&squares)?["report"]["progressions"].clone();
    ensure(progs.as_array().is_some_and(|a| a.contains(&serde_json::json!([7, 13, 17]))), || {
        "(7, 13, 17) not found".into()
    })?;
    for (n, k, h) in [("2", "4", "300"), ("4", "3", "200")] {
        let run = freytool(&["ap-search", "--n", n, "--k", k, "--height", h]);
        exit_ok(&run, "ap-search")?;
        let progs = json(&run)?["report"]["progressions"].clone();
        ensure(progs == serde_json::json!([]), || format!("n = {n}, k = {k}: {progs}"))?;
    }
    Ok("(7, 13, 17) found; no 4 squares to 300; no 3 fourth powers to 200".into())
}

fn parse_traces(csv: &str) -> Result<Vec<(u64, Option<i64>)>, String> {
    csv.lines()
        .skip(1)
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            let l = f[0].parse().map_err(|_| format!("bad line {line}"))?;
            let a = if f[1].is_empty() { None } else { Some(f[1].parse().map_err(|_| format!("bad line {line}"))?) };
            Ok((l, a))
        })
        .collect()
}

/// `ℓ + 1 − #E(F_ℓ)` for `y² = x³ + a·x` by direct counting.
fn brute_trace(a: i64, l: i64) -> i64 {
    let mut squares = vec![0i64; l as usize];
    for y in 0..l {
        squares[(y * y % l) as usize] += 1;
    }
    let affine: i64 = (0..l).map(|x| squares[((x * x % l * x + a * x).rem_euclid(l)) as usize]).sum();
    l - affine
}

fn trace_properties() -> Result<String, String> {
    let curves = ["0,0,0,-1,0", "0,0,0,1,0", "0,-1,1,-10,-20", "0,0,1,-1,0", "1,0,1,4,-6"];
    let mut good = 0;
    for model in curves {
        let run = freytool(&["traces", "--model", model, "--lmax", "1000"]);
        exit_ok(&run, model)?;
        for (l, a) in parse_traces(&run.stdout)? {
            if let Some(a) = a {
                ensure((a * a) as u64 <= 4 * l, || format!("[{model}] a_{l} = {a} breaks Hasse"))?;
                good += 1;
                if model == "0,0,0,-1,0" && l % 4 == 3 {
                    ensure(a == 0, || format!("a_{l}(x³ − x) = {a}"))?;
                }
            }
        }
    }
    let cm = freytool(&["traces", "--model", "0,0,0,-1,0", "--lmax", "1000"]);
    let frey_trivial = freytool(&["traces", "--model", "0,3,0,2,0", "--lmax", "1000"]);
    ensure(cm.stdout == frey_trivial.stdout, || "trivial Frey model traces differ from x³ − x".into())?;

    let run = freytool(&[
        "congruence", "--model1", "0,0,0,-1,0", "--model2", "0,0,0,1,0", "--p", "5", "--lmax", "100",
    ]);
    exit_ok(&run, "congruence")?;
    let rep = &json(&run)?["report"];
    ensure(rep["congruent"] == false, || "no violation reported".into())?;
    let v = &rep["first_violation"];
    let l = v["l"].as_i64().ok_or("missing witness")?;
    let (a1, a2) = (brute_trace(-1, l), brute_trace(1, l));
    ensure(v["a_l_1"] == a1 && v["a_l_2"] == a2 && (a1 - a2) % 5 != 0, || format!("witness {v} vs counted ({a1}, {a2})"))?;
    let earlier = odd_primes_up_to(l as u64 - 1)
        .into_iter()
        .filter(|&q| q != 5)
        .find(|&q| (brute_trace(-1, q as i64) - brute_trace(1, q as i64)) % 5 != 0);
    ensure(earlier.is_none(), || format!("earlier violation at {earlier:?}"))?;
    Ok(format!("Hasse at {good} good (curve, ℓ) pairs; inert zeros; Frey = CM table; witness ℓ = {l}: {a1} vs {a2}"))
}

fn determinism() -> Result<String, String> {
    let invocations = INVOCATIONS.with(|v| v.borrow().clone());
    for (args, first) in &invocations {
        for threads in ["1", "4", "1", "4"] {
            let mut a = args.clone();
            a.extend(["--parallelism".to_string(), threads.to_string()]);
            let (_, out) = exec(&a);
            ensure(&out == first, || format!("{args:?} differs with --parallelism {threads}"))?;
        }
    }
    Ok(format!("{} invocations byte-identical across 5 runs (parallelism default, 1, 4)", invocations.len()))
}

fn main() -> ExitCode {
    type Check = fn() -> Result<String, String>;
    let criteria: [(&str, Check, Option<Duration>); 8] = [
        ("1 conductor anchor", conductor_anchor, Some(Duration::from_secs(1))),
        ("2 table/oracle equality", table_oracle, Some(Duration::from_secs(30))),
        ("3 discriminant congruence", discriminant_congruence, None),
        ("4 Dénes scan", denes_scan, Some(Duration::from_secs(10))),
        ("5 search conformance", search_conformance, Some(Duration::from_secs(60))),
        ("6 AP anchors", ap_anchors, Some(Duration::from_secs(60))),
        ("7 trace properties", trace_properties, Some(Duration::from_secs(30))),
        ("8 determinism", determinism, None),
    ];
    let mut failures = 0;
    for (name, check, limit) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let result = match (result, limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            (r, _) => r,
        };
        match result {
            Ok(detail) => println!("PASS  criterion {name} [{elapsed:.2?}]: {detail}"),
            Err(why) => {
                failures += 1;
                println!("FAIL  criterion {name} [{elapsed:.2?}]: {why}");
            }
        }
    }
    println!("{} of 8 criteria passed", 8 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
