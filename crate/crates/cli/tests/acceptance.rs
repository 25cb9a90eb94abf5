//! Acceptance suite: one PASS/FAIL line per criterion, with runtimes against their limits.
//!
//! Tolerances: every comparison is exact (counts, verdicts, bytes). A criterion
//! also fails when it exceeds its runtime limit.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use mbs_cli::run::generator_document;
use mbs_core::analyze::{
    check_family, fixture_suite, is_cocartesian_triangle, is_left_degenerate, mapping_space_cocartesian, to_point,
};
use mbs_core::derivation::{
    compare, derive_auto, derive_scripted, theta_map, verify, z_strings, Attachment, Script, ZString,
};
use mbs_core::generators::{instantiate, list_generators, Family, GeneratorId};
use mbs_core::lifting::{classify_fibration, fibre, has_rlp_map, is_equivalence, FibrationClass, Outcome, Verdict, DEFAULT_BUDGET};
use mbs_core::pushout_product::{pushout_product, verify_table, CaseStatus, Manifest};
use mbs_core::{Deco, FiniteSSet, MBSSet};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn names(list: &[String]) -> BTreeSet<String> {
    list.iter().cloned().collect()
}

fn set(s: &[&str]) -> BTreeSet<String> {
    s.iter().map(|x| x.to_string()).collect()
}

fn c1_catalog() -> Check {
    let g = generator_document(&GeneratorId::new(Family::A2, &[]), 3).map_err(|e| e.0)?;
    let (src, tgt) = (&g.objects["source"], &g.objects["target"]);
    let base = set(&["024", "123", "013", "134", "012"]);
    ensure(names(&src.thin) == base && names(&src.lean) == base, || format!("A2 source scaling {:?}", src.thin))?;
    let added: BTreeSet<String> = names(&tgt.thin).difference(&base).cloned().collect();
    ensure(added == set(&["034", "014"]) && names(&tgt.thin).is_superset(&base), || format!("A2 target adds {added:?}"))?;
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut n = 0;
    for fam in Family::ALL {
        let id = list_generators(fam, 4).into_iter().next().unwrap();
        let file = dir.join(format!("{}.json", id.to_string().replace(':', "_")));
        let golden = std::fs::read_to_string(&file).map_err(|e| format!("{}: {e}", file.display()))?;
        let now = generator_document(&id, 3).map_err(|e| e.0)?.emit();
        ensure(now == golden, || format!("{id} differs from its golden file"))?;
        n += 1;
    }
    Ok(format!("A2 scalings exact, {n} golden files byte-identical"))
}

fn choose(n: usize, k: usize) -> usize {
    (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
}

fn c2_shuffles() -> Check {
    for n in 1..=4 {
        for m in 1..=4 {
            let dn = Arc::new(FiniteSSet::standard(n, n + m).map_err(|e| e.to_string())?);
            let dm = Arc::new(FiniteSSet::standard(m, n + m).map_err(|e| e.to_string())?);
            let p = FiniteSSet::product(&dn, &dm).map_err(|e| e.to_string())?;
            let got = p.product.count(n + m);
            ensure(got == choose(n + m, n), || format!("({n},{m}): {got} top cells"))?;
        }
    }
    Ok("16 products, top-cell counts exact".into())
}

fn c3_zorder() -> Check {
    let z = |s: &str| s.parse::<ZString>().unwrap();
    ensure(compare(3, 4, &z("(0,1,3,2)"), &z("(0,1,2,2)")) == Ordering::Less, || "first printed pair".into())?;
    ensure(compare(3, 4, &z("(0,1,2,2)"), &z("(0,2,1,4)")) == Ordering::Less, || "second printed pair".into())?;
    ensure(compare(3, 4, &z("(1,2)"), &z("(0,1,2,3)")) == Ordering::Less, || "third printed pair".into())?;
    let mut pairs = 0usize;
    for n in 1..=3 {
        for m in 1..=3 {
            let all = z_strings(n, m);
            for x in &all {
                for y in &all {
                    let (a, b) = (compare(n, m, x, y), compare(n, m, y, x));
                    ensure(a == b.reverse() && (a == Ordering::Equal) == (x == y), || format!("trichotomy {x} {y}"))?;
                    for w in &all {
                        if a == Ordering::Less && compare(n, m, y, w) == Ordering::Less {
                            ensure(compare(n, m, x, w) == Ordering::Less, || format!("transitivity {x} {y} {w}"))?;
                        }
                    }
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("printed orderings reproduced, {pairs} pairs trichotomous"))
}

fn c4_nightmare() -> Check {
    let mut steps = 0;
    for (n, m) in [(1, 2), (2, 2), (1, 3)] {
        let d = derive_scripted(Script::Nightmare, &[n, m]).map_err(|e| e.to_string())?;
        let r = verify(&d);
        ensure(r.ok, || format!("({n},{m}) rejected at {:?}: {:?}", r.failing_step, r.reason))?;
        let f = instantiate(&GeneratorId::new(Family::C1, &[n]), n + m).map_err(|e| e.to_string())?;
        let g = instantiate(&GeneratorId::new(Family::A3, &[m]), n + m).map_err(|e| e.to_string())?;
        let pp = pushout_product(&f.map, &g.map).map_err(|e| e.to_string())?;
        ensure(*d.ambient == **pp.result.target(), || format!("({n},{m}) final stage differs from the target"))?;
        let mut seen = BTreeSet::new();
        for s in &d.steps {
            let a = Attachment::new(s.rule.clone(), &s.rule.instantiate(n + m).unwrap(), s.map.clone(), &d.ambient)
                .map_err(|e| e.to_string())?;
            for c in a.new_cells {
                ensure(seen.insert(c), || format!("({n},{m}) a cell is attached twice"))?;
            }
        }
        steps += d.steps.len();
    }
    Ok(format!("3 filtrations verified, {steps} steps, no cell attached twice"))
}

fn c5_table() -> Check {
    let table = verify_table(&Manifest::builtin(), 100_000).map_err(|e| e.to_string())?;
    ensure(table.len() == 44, || format!("{} cases", table.len()))?;
    let iso = table.iter().filter(|c| c.status == CaseStatus::Isomorphism).count();
    let bad: Vec<String> = table
        .iter()
        .filter(|c| !matches!(c.status, CaseStatus::Verified | CaseStatus::Isomorphism))
        .map(|c| format!("{} x {}", c.cof, c.ano))
        .collect();
    ensure(bad.is_empty(), || format!("unverified: {bad:?}"))?;
    Ok(format!("44 cases: {} verified, {iso} isomorphisms", 44 - iso))
}

fn mb_pass(p: &mbs_core::DecoratedMap) -> bool {
    classify_fibration(p, FibrationClass::MB, 3, DEFAULT_BUDGET).unwrap().outcome == Outcome::Pass
}

fn c6_theta() -> Check {
    let theta = theta_map(3).map_err(|e| e.to_string())?;
    let mut tested = 0;
    for f in fixture_suite(3).map_err(|e| e.to_string())? {
        let s = f.p.target();
        if !s.under().cells(1).all(|e| s.marked().contains(&e)) || !mb_pass(&f.p) {
            continue;
        }
        let r = has_rlp_map(&f.p, "theta", &theta, DEFAULT_BUDGET);
        ensure(r.verdict == Verdict::Lifts, || format!("{}: {:?}", f.name, r.verdict))?;
        tested += 1;
    }
    ensure(tested > 0, || "no fixture qualifies".into())?;
    Ok(format!("{tested}/{tested} fibrant fixtures over sharp bases lift theta"))
}

fn c7_fibres() -> Check {
    let (mut fibres, mut edges) = (0, 0);
    for f in fixture_suite(3).map_err(|e| e.to_string())? {
        if !mb_pass(&f.p) {
            continue;
        }
        for v in f.p.target().under().cells(0) {
            let (fib, _) = fibre(&f.p, v).map_err(|e| e.to_string())?;
            let over = to_point(fib.clone(), 3).map_err(|e| e.to_string())?;
            let w = classify_fibration(&over, FibrationClass::WeakS, 3, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
            ensure(w.outcome == Outcome::Pass, || format!("{}: fibre not weak-S fibrant", f.name))?;
            ensure(fib.thin() == fib.lean(), || format!("{}: thin != lean", f.name))?;
            for e in fib.under().simplices(1) {
                ensure(fib.is_marked(&e) == is_equivalence(&fib, &e), || format!("{}: marking disagrees", f.name))?;
                edges += 1;
            }
            fibres += 1;
        }
    }
    Ok(format!("{fibres} fibres, {edges} edges, all agree"))
}

fn c8_negative() -> Check {
    let d1 = Arc::new(FiniteSSet::standard(1, 3).map_err(|e| e.to_string())?);
    let x = MBSSet::decorate(d1, &Deco::Flat, &Deco::Sharp, &Deco::Sharp).map_err(|e| e.to_string())?.0;
    let p = to_point(Arc::new(x), 3).map_err(|e| e.to_string())?;
    let r = classify_fibration(&p, FibrationClass::MB, 3, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let g = instantiate(&GeneratorId::new(Family::C1, &[2]), 3).map_err(|e| e.to_string())?;
    let out = derive_auto(&g.map, 10_000).map_err(|e| e.to_string())?;
    let boundary = if out.derivation.is_none() && !out.exhausted { "no derivation" } else { "UNEXPECTED" };
    let refuted: Vec<String> = r.entries.iter().filter(|e| e.verdict == Verdict::NoLift).map(|e| e.generator.clone()).collect();
    ensure(refuted == ["E:J"] && boundary == "no derivation", || {
        format!(
            "(D1, flat, sharp) -> point refuted by {refuted:?}, expected [\"E:J\"] (every map J -> D1 is constant, see ledger); flat boundary: {boundary}"
        )
    })?;
    Ok("E:J refutes, boundary has no derivation".into())
}

fn c9_coherence() -> Check {
    let (mut agree, mut triangles, mut excluded) = (0, 0, 0);
    for f in fixture_suite(3).map_err(|e| e.to_string())? {
        let prof = check_family(&f.p, 3, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        let mb = classify_fibration(&f.p, FibrationClass::MB, 3, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        ensure(prof.outcome == mb.outcome, || format!("{}: profile {:?}, MB {:?}", f.name, prof.outcome, mb.outcome))?;
        agree += 1;
        let w = classify_fibration(&f.p, FibrationClass::WeakS, 3, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        if w.outcome != Outcome::Pass {
            excluded += 1;
            continue;
        }
        let u = f.p.source().under().clone();
        for s in u.simplices(2).into_iter().filter(|s| is_left_degenerate(&u, s)) {
            let a = is_cocartesian_triangle(&f.p, &s, 3, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
            let b = mapping_space_cocartesian(&f.p, &s, 3, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
            ensure(a.answer == b.answer, || format!("{}: {}", f.name, u.simplex_name(&s)))?;
            triangles += 1;
        }
    }
    Ok(format!(
        "{agree} fixtures agree with MB; {triangles} triangles agree with the mapping space ({excluded} fixtures not weak-S fibrant, excluded)"
    ))
}

fn machine(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_mbs")).args(args).args(["--format", "machine"]).output().unwrap();
    String::from_utf8(out.stdout).unwrap()
}

fn c10_determinism() -> Check {
    let runs: Vec<Vec<&str>> = vec![
        vec!["derive", "--scripted", "nightmare", "--n", "1", "--m", "2"],
        vec!["derive", "--scripted", "nightmare", "--n", "2", "--m", "2"],
        vec!["derive", "--scripted", "nightmare", "--n", "1", "--m", "3"],
        vec!["pp", "--table", "--max-params", "manifest.v1", "--budget", "100000"],
        vec!["analyze", "--fixture", "all"],
    ];
    let mut bytes = 0;
    for args in &runs {
        let (a, b) = std::thread::scope(|s| {
            let a = s.spawn(|| machine(args));
            let b = s.spawn(|| machine(args));
            (a.join().unwrap(), b.join().unwrap())
        });
        ensure(!a.is_empty() && a == b, || format!("{args:?}: reports differ"))?;
        bytes += a.len();
    }
    Ok(format!("{} report pairs byte-identical ({bytes} bytes)", runs.len()))
}

/// Criteria that fail for a documented reason. They are still printed as FAIL;
/// the suite asserts that they keep failing, so a change in verdict is noticed.
const KNOWN_FAILURES: &[u8] = &[8];

#[test]
fn acceptance() {
    let criteria: Vec<(u8, &str, Option<f64>, fn() -> Check)> = vec![
        (1, "generator catalog", Some(1.0), c1_catalog),
        (2, "shuffle census", Some(10.0), c2_shuffles),
        (3, "z-order", Some(5.0), c3_zorder),
        (4, "nightmare filtration", Some(60.0), c4_nightmare),
        (5, "pushout-product table", Some(600.0), c5_table),
        (6, "theta lifting", Some(30.0), c6_theta),
        (7, "fibre lemma", Some(60.0), c7_fibres),
        (8, "negative controls", None, c8_negative),
        (9, "coherence", Some(300.0), c9_coherence),
        (10, "determinism", None, c10_determinism),
    ];
    let mut unexpected = Vec::new();
    for (id, name, limit, run) in criteria {
        let t = Instant::now();
        let mut r = run();
        let secs = t.elapsed().as_secs_f64();
        if let (Ok(_), Some(l)) = (&r, limit) {
            if secs > l {
                r = Err(format!("took {secs:.2}s, limit {l}s"));
            }
        }
        let lim = limit.map(|l| format!(" / {l}s")).unwrap_or_default();
        match &r {
            Ok(d) => println!("criterion {id:>2} {name}: PASS ({secs:.2}s{lim}) {d}"),
            Err(d) => println!("criterion {id:>2} {name}: FAIL ({secs:.2}s{lim}) {d}"),
        }
        if r.is_ok() == KNOWN_FAILURES.contains(&id) {
            unexpected.push(id);
        }
    }
    assert!(unexpected.is_empty(), "criteria with an unexpected verdict: {unexpected:?}");
}
