//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any criterion fails.
//!
//! Satisfiability, evaluation and random formulas are re-derived here
//! without the library's own oracles.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use postlb::attack::{Adversary, AttackOutcome, CrossingProbe, Decision, Mode};
use postlb::boolean::{full_representation, truth_table, Formula, FormulaSet, Style};
use postlb::convention::{BipartiteInput, Convention, Verdict};
use postlb::encoding::{decode_formula, encode_formula};
use postlb::machine::Program;
use postlb::paths::verify_path_bound;
use postlb::probe_crossing;
use postlb::random::{random_convention, random_input, random_program};
use postlb::reduction::{dualize, to_3cnf, CnfFormula, ReductionMap};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed_2024;
const RANDOM_MACHINES: usize = 200;

fn eval(f: &Formula, value: &dyn Fn(u32) -> bool) -> bool {
    match f {
        Formula::Const(b) => *b,
        Formula::Var(k) => value(*k),
        Formula::Not(a) => !eval(a, value),
        Formula::And(a, b) => eval(a, value) && eval(b, value),
        Formula::Or(a, b) => eval(a, value) || eval(b, value),
    }
}

fn collect_vars(f: &Formula, out: &mut BTreeSet<u32>) {
    match f {
        Formula::Const(_) => {}
        Formula::Var(k) => {
            out.insert(*k);
        }
        Formula::Not(a) => collect_vars(a, out),
        Formula::And(a, b) | Formula::Or(a, b) => {
            collect_vars(a, out);
            collect_vars(b, out);
        }
    }
}

fn vars_of(f: &Formula) -> BTreeSet<u32> {
    let mut out = BTreeSet::new();
    collect_vars(f, &mut out);
    out
}

/// Brute force over exactly the variables that occur in `fs`.
fn brute_sat(fs: &[&Formula]) -> bool {
    let mut vars = BTreeSet::new();
    for f in fs {
        collect_vars(f, &mut vars);
    }
    let vars: Vec<u32> = vars.into_iter().collect();
    assert!(vars.len() <= 24, "too many variables for brute force");
    (0u64..1 << vars.len()).any(|bits| {
        let value = |k: u32| {
            let i = vars.iter().position(|&v| v == k).unwrap();
            bits >> i & 1 == 1
        };
        fs.iter().all(|f| eval(f, &value))
    })
}

fn random_formula(rng: &mut ChaCha8Rng, depth: u32) -> Formula {
    if depth == 0 || rng.random_bool(0.25) {
        return match rng.random_range(0..10) {
            0 => Formula::Const(rng.random_bool(0.5)),
            _ => Formula::Var(rng.random_range(1..=12)),
        };
    }
    let a = random_formula(rng, depth - 1);
    match rng.random_range(0..3) {
        0 => Formula::Not(Box::new(a)),
        1 => Formula::And(Box::new(a), Box::new(random_formula(rng, depth - 1))),
        _ => Formula::Or(Box::new(a), Box::new(random_formula(rng, depth - 1))),
    }
}

struct Report {
    failures: usize,
}

impl Report {
    fn line(
        &mut self,
        id: u32,
        name: &str,
        result: Result<String, String>,
        elapsed: Duration,
        limit: Option<Duration>,
    ) {
        let result = match (result, limit) {
            (Ok(_), Some(limit)) if elapsed > limit => {
                Err(format!("took {elapsed:.2?}, limit {limit:.0?}"))
            }
            (r, _) => r,
        };
        match result {
            Ok(detail) => println!("PASS criterion {id}: {name}: {detail} ({elapsed:.2?})"),
            Err(detail) => {
                self.failures += 1;
                println!("FAIL criterion {id}: {name}: {detail} ({elapsed:.2?})");
            }
        }
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn path_ceiling() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let programs = 1000;
    for i in 0..programs {
        let size = rng.random_range(1..=40);
        let p = random_program(&mut rng, size);
        let report = verify_path_bound(&p, 8);
        if report.levels.len() != 9 {
            return Err(format!("program {i}: {} levels", report.levels.len()));
        }
        for level in &report.levels {
            let total = (level.terminated_count + level.open_count) as u128;
            if total > 1u128 << level.m || !level.holds {
                return Err(format!("program {i}, m = {}: {total} paths\n{p}", level.m));
            }
        }
    }
    Ok(format!("{programs} programs, m = 0..=8, zero violations"))
}

fn crossing() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let trials = 1000;
    let mut non_vacuous = 0;
    for i in 0..trials {
        let size = rng.random_range(1..=20);
        let p = random_program(&mut rng, size);
        let conv = random_convention(&mut rng);
        let a = random_input(&mut rng, 6);
        // Sharing one part makes common paths likelier.
        let b = if rng.random_bool(0.5) {
            BipartiteInput::new(a.first.clone(), random_input(&mut rng, 6).second)
        } else {
            random_input(&mut rng, 6)
        };
        match probe_crossing(&p, &conv, [&a, &b], 10_000).map_err(|e| e.to_string())? {
            CrossingProbe::Holds { vacuous } => non_vacuous += usize::from(!vacuous),
            witness => return Err(format!("trial {i}: {witness:?}")),
        }
    }
    if non_vacuous == 0 {
        return Err("every trial was vacuous".into());
    }
    Ok(format!(
        "{trials} trials, {non_vacuous} with a shared base path, zero counter-witnesses"
    ))
}

struct Suite {
    machines: Vec<(String, Program, Convention)>,
}

fn suite() -> Suite {
    let fixed = [
        ("always-reject", "1: STOP"),
        ("always-accept", "1: MARK -> 2\n2: STOP"),
        (
            "head-moving no-op",
            "1: RIGHT -> 2\n2: RIGHT -> 3\n3: LEFT -> 4\n4: LEFT -> 5\n5: STOP",
        ),
    ];
    let mut machines: Vec<_> = fixed
        .iter()
        .map(|(name, text)| {
            (
                name.to_string(),
                text.parse().unwrap(),
                Convention::default(),
            )
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    for i in 0..RANDOM_MACHINES {
        let size = rng.random_range(1..=24);
        let p = random_program(&mut rng, size);
        let conv = if i % 2 == 0 {
            Convention::default()
        } else {
            random_convention(&mut rng)
        };
        machines.push((format!("random #{i}"), p, conv));
    }
    Suite { machines }
}

/// Checks the fixed always-reject expectation at n = 1.
fn check_always_reject(adv: &Adversary, outcome: &AttackOutcome) -> Result<(), String> {
    let AttackOutcome::CrossedCounterexample {
        crossed,
        witness,
        machine_verdict,
        ..
    } = outcome
    else {
        return Err(format!("always-reject gave {}", outcome.kind()));
    };
    let (a, b) = (&crossed.first.formula, &crossed.second.formula);
    if !brute_sat(&[a, b]) {
        return Err("crossed conjunction is unsatisfiable".into());
    }
    let value = |k: u32| witness.values()[k as usize - 1];
    if !(eval(a, &value) && eval(b, &value)) {
        return Err("witness does not satisfy the crossed conjunction".into());
    }
    let input = BipartiteInput::new(encode_formula(a), encode_formula(b));
    let conv = Convention::default();
    let program: Program = "1: STOP".parse().unwrap();
    let rerun = program.run(conv.layout(&input).unwrap(), conv.initial_head(), 1000);
    if !rerun.halted() || conv.read_verdict(&rerun.final_state.space) != Verdict::Reject {
        return Err("re-simulation does not reject".into());
    }
    if *machine_verdict != Verdict::Reject || crossed.decision != Decision::Reject {
        return Err("outcome verdict is not reject".into());
    }
    adv.verify(outcome).map_err(|e| e.to_string())
}

struct TotalityStats {
    outcomes: Vec<String>,
    clean_families: usize,
    worst_n2: Duration,
}

fn totality(
    suite: &Suite,
    n: u32,
    repr: &FormulaSet,
    mode: Mode,
    pigeonhole: &mut Vec<String>,
) -> Result<TotalityStats, String> {
    let mut kinds = std::collections::BTreeMap::<&str, usize>::new();
    let mut clean_families = 0;
    let mut worst = Duration::ZERO;
    for (name, program, conv) in &suite.machines {
        let start = Instant::now();
        let adv = Adversary::new(program, *conv, repr, mode, 100_000)
            .map_err(|e| format!("{name}: {e}"))?;
        let outcome = adv
            .attack()
            .map_err(|e| format!("{name} at n = {n}: {e}"))?;
        adv.verify(&outcome)
            .map_err(|e| format!("{name} at n = {n}: {e}"))?;
        worst = worst.max(start.elapsed());
        if name == "always-reject" && n == 1 {
            check_always_reject(&adv, &outcome).map_err(|e| format!("{name}: {e}"))?;
        }
        if name == "always-accept" && outcome.kind() != "correctness_violation" {
            return Err(format!("always-accept gave {}", outcome.kind()));
        }
        *kinds.entry(outcome.kind()).or_default() += 1;

        let family = adv.run_family().map_err(|e| e.to_string())?;
        if adv
            .scan_violations(&family)
            .map_err(|e| e.to_string())?
            .is_none()
        {
            clean_families += 1;
            let distinct = family.distinct_terminated_paths() as u128;
            let ceiling = 1u128 << ((1u32 << n) - 1);
            if family.path_ceiling() != ceiling || distinct > ceiling {
                pigeonhole.push(format!(
                    "{name} at n = {n}: {distinct} paths, ceiling {ceiling}"
                ));
            }
            if outcome.kind() != "crossed_counterexample" {
                return Err(format!(
                    "{name}: clean family but outcome {}",
                    outcome.kind()
                ));
            }
        }
    }
    Ok(TotalityStats {
        outcomes: kinds.iter().map(|(k, v)| format!("{k}={v}")).collect(),
        clean_families,
        worst_n2: worst,
    })
}

fn full_repr_check() -> Result<String, String> {
    for (n, size) in [(1u32, 4usize), (2, 16), (3, 256)] {
        for style in [Style::MintermDnf, Style::MaxtermCnf] {
            let repr = full_representation(n, style).map_err(|e| e.to_string())?;
            if repr.len() != size || !repr.is_full() {
                return Err(format!("n = {n}: {} members", repr.len()));
            }
            for index in 0..size as u64 {
                let f = repr
                    .by_index(index)
                    .ok_or(format!("n = {n}: missing {index}"))?;
                // bits[i] of the key is the value on assignment i, x1 most significant.
                for row in 0..1u64 << n {
                    let value = |k: u32| row >> (n - k) & 1 == 1;
                    if eval(f, &value) != (index >> row & 1 == 1) {
                        return Err(format!("n = {n}, function {index}: {f} wrong on row {row}"));
                    }
                }
                if truth_table(f, n).unwrap().index() != Some(index) {
                    return Err(format!("n = {n}: key round trip failed for {index}"));
                }
            }
        }
    }
    Ok("4, 16, 256 members in both styles, every key reproduced".into())
}

fn reduction_check() -> Result<String, String> {
    let n = 2;
    let repr = full_representation(n, Style::MaxtermCnf).map_err(|e| e.to_string())?;
    let map = ReductionMap::for_arity(n);
    let image = |f: &Formula, slot: u8| -> Result<Formula, String> {
        let cnf = CnfFormula::from_formula(f).map_err(|e| e.to_string())?;
        Ok(to_3cnf(&cnf, &map, slot)
            .map_err(|e| e.to_string())?
            .to_formula())
    };
    let mut pairs = 0;
    for (_, a) in repr.iter() {
        for (_, b) in repr.iter() {
            let (ta, tb) = (image(a, 0)?, image(b, 1)?);
            if brute_sat(&[&ta, &tb]) != brute_sat(&[a, b]) {
                return Err(format!("satisfiability differs for {a} & {b}"));
            }
            let fresh = |t: &Formula| -> BTreeSet<u32> {
                vars_of(t).into_iter().filter(|&v| v > n).collect()
            };
            if !fresh(&ta).is_disjoint(&fresh(&tb)) {
                return Err(format!("fresh variables overlap for {a} & {b}"));
            }
            pairs += 1;
        }
    }
    if pairs != 256 {
        return Err(format!("{pairs} pairs"));
    }
    Ok(format!(
        "{pairs} ordered pairs, equisatisfiable, disjoint fresh variables"
    ))
}

fn duality_check() -> Result<String, String> {
    let mut checked = 0;
    for style in [Style::MintermDnf, Style::MaxtermCnf] {
        let repr = full_representation(2, style).map_err(|e| e.to_string())?;
        for (_, f) in repr.iter() {
            let falsifiable = brute_sat(&[&Formula::Not(Box::new(f.clone()))]);
            let dual = dualize(f);
            if falsifiable != brute_sat(&[&dual]) {
                return Err(format!("{f}: falsifiable={falsifiable}, dual {dual}"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} formulas, zero violations"))
}

fn encoding_check() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    for _ in 0..1000 {
        let f = random_formula(&mut rng, 8);
        let back = decode_formula(&encode_formula(&f)).map_err(|e| format!("{f}: {e}"))?;
        if back != f {
            return Err(format!("{f} decoded as {back}"));
        }
    }
    let conv = Convention::new(0, 15, 14, 15, 0, Verdict::Accept).map_err(|e| e.to_string())?;
    let golden = include_str!("golden/table1_layouts.txt");
    for line in golden.lines() {
        let fields: Vec<&str> = line.split(' ').collect();
        let input = BipartiteInput::new(fields[0].parse().unwrap(), fields[1].parse().unwrap());
        let space = conv.layout(&input).map_err(|e| e.to_string())?;
        let got: Vec<String> = space.marked().map(|a| a.to_string()).collect();
        if got.join(",") != fields[2] {
            return Err(format!(
                "layout of {} {}: {}",
                fields[0],
                fields[1],
                got.join(",")
            ));
        }
    }
    Ok(format!(
        "1000 round trips, {} layout goldens",
        golden.lines().count()
    ))
}

fn main() -> ExitCode {
    let mut report = Report { failures: 0 };
    let secs = Duration::from_secs;

    let (r, t) = timed(path_ceiling);
    report.line(1, "path ceiling", r, t, Some(secs(30)));

    let (r, t) = timed(crossing);
    report.line(2, "crossing", r, t, Some(secs(60)));

    let suite = suite();
    let mut pigeonhole = Vec::new();
    let mut clean = Vec::new();
    let (r, t) = timed(|| {
        let mut details = Vec::new();
        for n in [1, 2] {
            let repr = full_representation(n, Style::MintermDnf).map_err(|e| e.to_string())?;
            let stats = totality(&suite, n, &repr, Mode::Plain, &mut pigeonhole)?;
            if n == 2 && stats.worst_n2 > secs(5) {
                return Err(format!("slowest n = 2 machine took {:.2?}", stats.worst_n2));
            }
            clean.push((n, stats.clean_families));
            details.push(format!("n = {n}: {}", stats.outcomes.join(" ")));
            if n == 2 {
                details.push(format!("slowest n = 2 attack {:.2?}", stats.worst_n2));
            }
        }
        Ok(format!(
            "{} machines; {}",
            suite.machines.len(),
            details.join("; ")
        ))
    });
    report.line(3, "adversary totality", r, t, None);

    let r = if !pigeonhole.is_empty() {
        Err(pigeonhole.join("; "))
    } else if clean.iter().all(|&(_, c)| c == 0) {
        Err("no clean family observed".into())
    } else {
        Ok(clean
            .iter()
            .map(|(n, c)| {
                format!(
                    "n = {n}: {c} clean families within {} paths",
                    1u32 << ((1u32 << n) - 1)
                )
            })
            .collect::<Vec<_>>()
            .join(", "))
    };
    report.line(4, "pigeonhole count", r, Duration::ZERO, None);

    let (r, t) = timed(full_repr_check);
    report.line(5, "full representation", r, t, Some(secs(5)));

    let (pairs, pairs_time) = timed(reduction_check);
    let (r, t) = timed(|| {
        let repr = full_representation(1, Style::MaxtermCnf).map_err(|e| e.to_string())?;
        let mut ignored = Vec::new();
        let stats = totality(
            &suite,
            1,
            &repr,
            Mode::Reduced(ReductionMap::for_arity(1)),
            &mut ignored,
        )?;
        Ok(stats.outcomes.join(" "))
    });
    let r = match (pairs, r) {
        (Ok(pairs), Ok(suite)) if pairs_time <= secs(10) => Ok(format!(
            "{pairs} in {pairs_time:.2?}; reduced attack suite at n = 1 in {t:.2?}: {suite}"
        )),
        (Ok(_), Ok(_)) => Err(format!("pair check took {pairs_time:.2?}, limit 10s")),
        (Err(e), _) | (_, Err(e)) => Err(e),
    };
    report.line(6, "3CNF reduction", r, pairs_time + t, None);

    let (r, t) = timed(duality_check);
    report.line(7, "duality", r, t, None);

    let (r, t) = timed(encoding_check);
    report.line(8, "encoding", r, t, None);

    if report.failures == 0 {
        println!("acceptance: all 8 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria failed", report.failures);
        ExitCode::FAILURE
    }
}
