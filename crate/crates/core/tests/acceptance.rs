//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest harness
//! so the lines always print; exits non-zero if any criterion fails.

use std::process::Command;

use afsimplex::lp_io::{gen_infeasible_lp, gen_random_lp, read_lp, Method, Table, TraceDocument};
use afsimplex::oracle::{self, compare_paths};
use afsimplex::{asm, asmd, Dictionary, Outcome, Path, Rational, Snapshot, SolveError, SolveOptions, Tag};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");

fn fixture(name: &str) -> String {
    format!("{FIXTURES}/{name}")
}

fn load(name: &str) -> afsimplex::RatLinearProgram {
    read_lp(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap()
}

fn q(s: &str) -> Rational {
    s.parse().unwrap_or_else(|e| panic!("bad rational {s}: {e}"))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Golden tables, one block per table. The header lists the nonbasic columns
/// (and `w'` when the block carries that column); a trailing `*` marks the pivot;
/// a line starting with `|` lists the dual names under the columns.
const FEASIBILITY_TABLES: &str = "
b x1 x2
w   -20 -7 -5
x3- -4 -1 -1
x4- -6 -1 -2
x5  2 1* -1
x6- -10 -5 -2

b x5 x2
w   -6 7 -12
x3- -2 1 -2
x4- -4 1 -3
x1  2 1 -1
x6- 0 5 -7*

b x5 x6+
w   -6 -11/7 -5/7
x3- -2 -3/7 -2/7
x4- -4 -8/7* -3/7
x1  2 2/7 -1/7
x2  0 -5/7 -1/7

b x4+ x6+
w   -1/2 -3/8 -1/8
x3- -1/2 -3/8* -1/8
x5  7/2 -7/8 3/8
x1  1 1/4 -1/4
x2  5/2 -5/8 1/8

b x3+ x6+
x4+ 4/3 -8/3 1/3
x5  14/3 -7/3 2/3
x1  2/3 2/3 -1/3
x2  10/3 -5/3 1/3
";

// The x6 right-hand side of the second block is +47/7: the pivot on -7 gives
// -1 + 54/7, and the next block's 257/49 only follows from that sign.
const DUAL_CASE_TABLES: &str = "
b x1 x2 x3 w'
z  0 -5 2 -7 12
x4 -6 8 -1 5 -13 y4
x5 -8 -8 -8 0 8 y5
x6 -1 7 -9 0 -7 y6
x7 -6 7 -7* 9 -16 y7
| y1- y2 y3-

b x1 x7 x3 w'
z  -12/7 -3 2/7 -31/7 52/7
x4 -36/7 7* -1/7 26/7 -75/7 y4
x5 -8/7 -16 -8/7 -72/7 184/7 y5
x6 47/7 -2 -9/7 -81/7 95/7 y6
x2 6/7 -1 -1/7 -9/7 16/7 y2
| y1- y7 y3-

b x4 x7 x3 w'
z  -192/49 3/7 11/49 -139/49 139/49
x1 -36/49 1/7 -1/49 26/49 -26/49 y1+
x5 -632/49 16/7 -72/49 -88/49 88/49 y5
x6 257/49 2/7 -65/49 -515/49 515/49 y6
x2 6/49 1/7 -8/49 -37/49 37/49 y2
| y4 y7 y3-

b x4 x7 x1
z  -102/13 31/26 3/26 139/26
x3 -18/13 7/26 -1/26 49/26 y3+
x5 -200/13 36/13 -20/13 44/13 y5
x6 -121/13 81/26 -45/26 515/26 y6
x2 -12/13 9/26 -5/26 37/26 y2
| y4 y7 y1+
";

/// Compares rendered tables with golden blocks entry by entry.
fn match_tables(golden: &str, tables: &[Table]) -> Result<usize, String> {
    let blocks: Vec<&str> = golden.trim().split("\n\n").collect();
    ensure(blocks.len() == tables.len(), || {
        format!("{} tables, expected {}", tables.len(), blocks.len())
    })?;
    let mut entries = 0;
    for (k, (block, t)) in blocks.iter().zip(tables).enumerate() {
        let mut lines = block.lines();
        let head: Vec<&str> = lines.next().unwrap().split_whitespace().skip(1).collect();
        let has_aux = head.last() == Some(&"w'");
        let cols = &head[..head.len() - has_aux as usize];
        ensure(t.columns == cols, || format!("table {k}: columns {:?}, expected {cols:?}", t.columns))?;
        ensure(t.aux_name.is_some() == has_aux, || format!("table {k}: w' column presence"))?;
        let mut rows = 0;
        for line in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks[0] == "|" {
                let duals: Vec<String> = toks[1..].iter().map(|s| s.to_string()).collect();
                ensure(t.dual_columns.as_ref() == Some(&duals), || {
                    format!("table {k}: dual columns {:?}, expected {duals:?}", t.dual_columns)
                })?;
                continue;
            }
            let row = t.rows.get(rows).ok_or_else(|| format!("table {k}: missing row {}", toks[0]))?;
            ensure(row.label == toks[0], || format!("table {k} row {rows}: label {}, expected {}", row.label, toks[0]))?;
            let width = 1 + cols.len();
            let numbers = &toks[1..1 + width];
            let got: Vec<&Rational> = std::iter::once(&row.rhs).chain(&row.entries).collect();
            ensure(got.len() == width, || format!("table {k} row {}: width", toks[0]))?;
            for (j, (g, want)) in got.iter().zip(numbers).enumerate() {
                let starred = want.ends_with('*');
                let want = want.trim_end_matches('*');
                ensure(g.to_string() == want, || format!("table {k} row {} col {j}: {g}, expected {want}", toks[0]))?;
                if starred {
                    ensure(t.pivot == Some((rows, j - 1)), || {
                        format!("table {k}: pivot {:?}, expected ({rows}, {})", t.pivot, j - 1)
                    })?;
                }
                entries += 1;
            }
            let mut rest = toks[1 + width..].iter();
            if has_aux {
                let want = rest.next().ok_or_else(|| format!("table {k} row {}: no w'", toks[0]))?;
                let g = row.aux.as_ref().map(|v| v.to_string());
                ensure(g.as_deref() == Some(*want), || format!("table {k} row {}: w' {g:?}, expected {want}", toks[0]))?;
                entries += 1;
            }
            let dual = rest.next().map(|s| s.to_string());
            ensure(row.dual == dual, || format!("table {k} row {}: dual {:?}, expected {dual:?}", toks[0], row.dual))?;
            rows += 1;
        }
        ensure(rows == t.rows.len(), || format!("table {k}: {} rows, expected {rows}", t.rows.len()))?;
    }
    Ok(entries)
}

fn corners(list: &[&[&str]]) -> Vec<Vec<Rational>> {
    list.iter().map(|c| c.iter().map(|s| q(s)).collect()).collect()
}

fn criterion_1() -> Check {
    let lp = load("feasibility.lp");
    let sol = asm::solve(Dictionary::from_lp(&lp), &SolveOptions::default().with_tableaux()).map_err(|e| e.to_string())?;
    ensure(sol.trace.len() == 4, || format!("{} pivots", sol.trace.len()))?;
    let doc = TraceDocument::from_solution(Method::Asm, &lp, &sol);
    let n = match_tables(FEASIBILITY_TABLES, &doc.tables)?;
    let fin = sol.trace.final_corner();
    ensure(fin == [q("2/3"), q("10/3")], || format!("final corner {fin:?}"))?;
    let w0: Vec<String> = sol.trace.w0_sequence().iter().map(|v| v.to_string()).collect();
    ensure(w0 == ["-20", "-6", "-6", "-1/2", "0"], || format!("w0 {w0:?}"))?;
    Ok(format!("4 pivots, {n} entries in 5 tables exact, solution (2/3, 10/3)"))
}

fn criterion_2() -> Check {
    let lp = load("counterexample.lp");
    let opts = SolveOptions::default();
    let a = asm::solve(Dictionary::from_lp(&lp), &opts).map_err(|e| e.to_string())?;
    let o = oracle::solve(&lp, &opts).map_err(|e| e.to_string())?;
    let expected = corners(&[&["0", "0"], &["2", "0"], &["1", "5/2"], &["2/3", "10/3"]]);
    ensure(a.trace.path().corners == expected, || format!("asm corners {:?}", a.trace.path().corners))?;
    ensure(o.trace().path().corners == expected, || format!("oracle corners {:?}", o.trace().path().corners))?;
    let same = compare_paths(&a.trace.path(), &o.trace().path());
    ensure(same.equal && same.first_divergence.is_none(), || "asm and oracle paths differ".into())?;
    let detour = Path::from_corners(corners(&[&["0", "0"], &["2", "0"], &["3", "1"], &["10/3", "4/3"]]));
    let rep = compare_paths(&a.trace.path(), &detour);
    ensure(!rep.equal && rep.first_divergence == Some(2), || {
        format!("fixture divergence {:?}", rep.first_divergence)
    })?;
    Ok("asm = oracle = (0,0) (2,0) (1,5/2) (2/3,10/3); stored path diverges at 2".into())
}

fn criterion_3() -> Check {
    let lp = load("dual.lp");
    let sol = asmd::solve(Dictionary::from_lp(&lp), &SolveOptions::default().with_tableaux()).map_err(|e| e.to_string())?;
    ensure(sol.trace.len() == 3, || format!("{} pivots", sol.trace.len()))?;
    ensure(sol.outcome().is_feasible(), || "not dual feasible".into())?;
    let doc = TraceDocument::from_solution(Method::Asmd, &lp, &sol);
    let n = match_tables(DUAL_CASE_TABLES, &doc.tables)?;
    let fin = sol.trace.final_corner();
    ensure(fin == [q("0"), q("-12/13"), q("-18/13")], || format!("solution {fin:?}"))?;
    let z: Vec<String> = sol.dict.objective_row().iter().map(|v| v.to_string()).collect();
    ensure(z == ["-102/13", "31/26", "3/26", "139/26"], || format!("z row {z:?}"))?;
    Ok(format!("3 pivots, {n} entries in 4 tables exact, solution (0, -12/13, -18/13)"))
}

/// From-scratch checks of every recorded ASM dictionary.
fn audit_asm(snaps: &[Snapshot<Rational>]) -> Result<(), String> {
    for (k, s) in snaps.iter().enumerate() {
        let d = &s.dict;
        let minus: Vec<usize> = (0..d.num_basic()).filter(|&r| d.basic()[r].tag == Tag::Minus).collect();
        let w: Vec<Rational> = (0..=d.num_nonbasic())
            .map(|j| minus.iter().map(|&r| d.row(r)[j].clone()).sum())
            .collect();
        match &s.aux {
            Some(aux) => ensure(*aux == w, || format!("table {k}: w {aux:?}, recomputed {w:?}"))?,
            None => ensure(minus.is_empty(), || format!("table {k}: missing w with L nonempty"))?,
        }
        for r in 0..d.num_basic() {
            let v = d.rhs(r);
            let ok = if minus.contains(&r) { *v <= Rational::zero() } else { *v >= Rational::zero() };
            ensure(ok, || format!("table {k}: sign partition broken at {}", d.basic()[r]))?;
        }
        ensure(d.nonbasic().iter().all(|l| l.tag != Tag::Minus), || format!("table {k}: Minus label nonbasic"))?;
    }
    Ok(())
}

fn audit_asmd(snaps: &[Snapshot<Rational>]) -> Result<(), String> {
    for (k, s) in snaps.iter().enumerate() {
        let d = &s.dict;
        let minus: Vec<usize> = (0..d.num_nonbasic()).filter(|&c| d.nonbasic()[c].tag == Tag::Minus).collect();
        let w: Vec<Rational> = d
            .entries()
            .iter()
            .map(|row| -minus.iter().map(|&c| row[c + 1].clone()).sum::<Rational>())
            .collect();
        match &s.aux {
            Some(aux) => ensure(*aux == w, || format!("table {k}: w' {aux:?}, recomputed {w:?}"))?,
            None => ensure(minus.is_empty(), || format!("table {k}: missing w' with K nonempty"))?,
        }
        for c in 0..d.num_nonbasic() {
            let v = d.cost(c);
            let ok = if minus.contains(&c) { *v <= Rational::zero() } else { *v >= Rational::zero() };
            ensure(ok, || format!("table {k}: dual sign partition broken at {}", d.nonbasic()[c]))?;
        }
    }
    Ok(())
}

fn audit_w0(seq: &[Rational], steps: &[afsimplex::PivotStep<Rational>], initial: &[Rational]) -> Result<(), String> {
    let zero = Rational::zero();
    for (k, pair) in seq.windows(2).enumerate() {
        ensure(pair[1] >= pair[0] && pair[1] <= zero, || format!("w0 {} -> {} at pivot {}", pair[0], pair[1], k + 1))?;
        let before = if k == 0 { initial } else { &steps[k - 1].corner[..] };
        // A pivot that moves the corner is non-degenerate and must raise w0.
        if before != steps[k].corner.as_slice() {
            ensure(pair[1] > pair[0], || format!("w0 flat on a non-degenerate pivot {}", k + 1))?;
        }
    }
    Ok(())
}

fn random_instance(seed: u64) -> afsimplex::RatLinearProgram {
    let rows = 1 + (seed % 6) as usize;
    let cols = 1 + ((seed / 6) % 6) as usize;
    gen_random_lp(seed, rows, cols, 9, seed.is_multiple_of(2))
}

const RANDOM_INSTANCES: u64 = 240;

fn criterion_4() -> Check {
    let opts = SolveOptions::default();
    let (mut equal, mut capped, mut feasible) = (0, 0, 0);
    for seed in 0..RANDOM_INSTANCES {
        let lp = random_instance(seed);
        let a = asm::solve(Dictionary::from_lp(&lp), &opts).map_err(|e| format!("seed {seed}: asm {e}"))?;
        let o = oracle::solve(&lp, &opts).map_err(|e| format!("seed {seed}: oracle {e}"))?;
        if matches!(a.outcome(), Outcome::IterationCapExceeded) || matches!(o.outcome(), Outcome::IterationCapExceeded) {
            capped += 1;
            continue;
        }
        ensure(a.outcome().is_feasible() == o.outcome().is_feasible(), || {
            format!("seed {seed}: asm {} vs oracle {}", a.outcome().name(), o.outcome().name())
        })?;
        let rep = compare_paths(&a.trace.path(), &o.trace().path());
        ensure(rep.equal, || format!("seed {seed}: paths diverge at {:?}", rep.first_divergence))?;
        equal += 1;
        feasible += a.outcome().is_feasible() as usize;
    }
    ensure(equal >= 200, || format!("only {equal} comparable instances"))?;
    Ok(format!(
        "{equal}/{RANDOM_INSTANCES} instances equal paths and verdicts ({feasible} feasible), {capped} capped"
    ))
}

fn random_dictionary(rng: &mut ChaCha8Rng) -> Dictionary<Rational> {
    let m = rng.gen_range(1..=5);
    let n = rng.gen_range(1..=5);
    let lp = gen_random_lp(rng.gen(), m, n, 9, false);
    let mut d = Dictionary::from_lp(&lp);
    // A few random pivots so entries become proper fractions.
    for _ in 0..rng.gen_range(0..4) {
        let (r, s) = (rng.gen_range(0..m), rng.gen_range(0..n));
        if !d.coeff(r, s).is_zero() {
            d.pivot(r, s).unwrap();
        }
    }
    d
}

fn criterion_5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut involutions = 0;
    while involutions < 1000 {
        let d = random_dictionary(&mut rng);
        let (r, s) = (rng.gen_range(0..d.num_basic()), rng.gen_range(0..d.num_nonbasic()));
        if d.coeff(r, s).is_zero() {
            continue;
        }
        let twice = d.pivoted(r, s).and_then(|e| e.pivoted(r, s)).map_err(|e| e.to_string())?;
        ensure(twice == d, || format!("involution failed at ({r}, {s})"))?;
        involutions += 1;
    }

    let opts = SolveOptions::default().with_tableaux();
    let mut runs = 0;
    let mut lps = vec![load("feasibility.lp"), load("dual.lp"), load("infeasible.lp")];
    lps.extend((0..RANDOM_INSTANCES).map(random_instance));
    lps.extend((0..20).map(|s| gen_infeasible_lp(s, 1 + (s % 4) as usize, 1 + (s % 5) as usize, 9)));
    for (i, lp) in lps.iter().enumerate() {
        let fired = |e: SolveError| match e {
            SolveError::NoLeavingRow { .. } | SolveError::NoEnteringColumn { .. } => format!("instance {i}: existence assertion fired: {e}"),
            e => format!("instance {i}: {e}"),
        };
        let a = asm::solve(Dictionary::from_lp(lp), &opts).map_err(fired)?;
        audit_asm(&a.snapshots).map_err(|e| format!("instance {i} asm: {e}"))?;
        audit_w0(&a.trace.w0_sequence(), &a.trace.steps, &a.trace.initial_corner).map_err(|e| format!("instance {i}: {e}"))?;
        let d = asmd::solve(Dictionary::from_lp(lp), &opts).map_err(fired)?;
        audit_asmd(&d.snapshots).map_err(|e| format!("instance {i} asmd: {e}"))?;
        runs += 2;
    }
    Ok(format!(
        "1000 involutions exact; w/w' recomputation, w0 monotonicity, sign partition and existence held over {runs} runs"
    ))
}

fn criterion_6() -> Check {
    let mut lps = vec![load("infeasible.lp")];
    lps.extend((0..20).map(|s| gen_infeasible_lp(1000 + s, 1 + (s % 5) as usize, 1 + (s % 6) as usize, 9)));
    let opts = SolveOptions::default();
    for (i, lp) in lps.iter().enumerate() {
        let a = asm::solve(Dictionary::from_lp(lp), &opts).map_err(|e| e.to_string())?;
        let o = oracle::solve(lp, &opts).map_err(|e| e.to_string())?;
        let Outcome::Infeasible { certificate } = a.outcome() else {
            return Err(format!("instance {i}: asm says {}", a.outcome().name()));
        };
        ensure(matches!(o.outcome(), Outcome::Infeasible { .. }), || format!("instance {i}: oracle says {}", o.outcome().name()))?;
        ensure(certificate[0] < Rational::zero(), || format!("instance {i}: w0 = {}", certificate[0]))?;
        ensure(certificate[1..].iter().all(|v| *v >= Rational::zero()), || format!("instance {i}: certificate {certificate:?}"))?;
    }
    Ok("x1 <= -1 and 20 random infeasible instances: both infeasible, w0 < 0 and w >= 0".into())
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_afsimplex")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn squash(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn criterion_7() -> Check {
    let (ex1, ex2, inf) = (fixture("feasibility.lp"), fixture("dual.lp"), fixture("infeasible.lp"));
    let (code, out) = cli(&["check", &ex1, "--method", "asm", "--trace"]);
    ensure(code == 0, || format!("check feasibility.lp: exit {code}"))?;
    ensure(out.lines().last() == Some("outcome: feasible; solution: 2/3 10/3"), || format!("check feasibility.lp: {out}"))?;
    ensure(out.lines().any(|l| squash(l) == "x2 | 0 -5/7 -1/7"), || "check feasibility.lp: row x2 | 0 -5/7 -1/7 missing".into())?;
    let (code, out) = cli(&["check", &ex1, "--method", "oracle"]);
    ensure(code == 0 && out == "outcome: feasible; solution: 2/3 10/3\n", || format!("oracle: exit {code}, {out}"))?;
    let (code, out) = cli(&["check", &ex1, "--trace", "--machine"]);
    let doc = TraceDocument::parse_machine(&out).map_err(|e| format!("machine trace: {e}"))?;
    ensure(code == 0 && doc.steps.len() == 4 && doc.tables.len() == 5, || "machine trace shape".into())?;
    ensure(doc.render_machine() == out, || "machine trace does not round-trip".into())?;
    let (code, _) = cli(&["compare", &ex1]);
    ensure(code == 0, || format!("compare: exit {code}"))?;
    let (code, out) = cli(&["compare", &fixture("counterexample.lp"), "--path", &fixture("detour_path.txt")]);
    ensure(code == 1 && out.contains("diverge at step 2"), || format!("compare fixture: exit {code}, {out}"))?;
    let (code, out) = cli(&["check", &inf]);
    ensure(code == 1 && out.starts_with("outcome: infeasible"), || format!("check infeasible: exit {code}, {out}"))?;
    let (code, _) = cli(&["check", &inf, "--method", "oracle"]);
    ensure(code == 1, || format!("oracle infeasible: exit {code}"))?;
    let (code, out) = cli(&["dual", &ex2, "--trace"]);
    ensure(code == 0, || format!("dual dual.lp: exit {code}"))?;
    ensure(out.lines().any(|l| squash(l) == "z | -102/13 31/26 3/26 139/26"), || "dual: final z row missing".into())?;
    ensure(out.ends_with("outcome: feasible; solution: 0 -12/13 -18/13\n"), || format!("dual: {out}"))?;
    let (code, _) = cli(&["check", &ex1, "--method", "simplex"]);
    ensure(code == 2, || format!("bad flag: exit {code}"))?;
    let (code, _) = cli(&["check", &fixture("missing.lp")]);
    ensure(code == 2, || format!("missing file: exit {code}"))?;
    let (code, _) = cli(&["check", &ex1, "--max-iters", "1"]);
    ensure(code == 2, || format!("iteration cap: exit {code}"))?;
    Ok("exit codes 0/1/2, table and machine traces on feasibility.lp, dual.lp, infeasible.lp".into())
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("1 primal golden tables", criterion_1),
        ("2 path equivalence and stored-path divergence", criterion_2),
        ("3 dual golden tables", criterion_3),
        ("4 clone property on random instances", criterion_4),
        ("5 invariant suite", criterion_5),
        ("6 infeasibility certificates", criterion_6),
        ("7 command-line contract", criterion_7),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let started = std::time::Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let ms = started.elapsed().as_millis();
        match result {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{ms} ms]"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why} [{ms} ms]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 7 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
