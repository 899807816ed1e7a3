//! Acceptance suite: one PASS/FAIL line per criterion, exact comparisons only.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num::Zero;
use rayon::prelude::*;

use green2q::bruteforce::{
    centralizer_order, eq2_table, first_primes, flag_fix_count, interpolate_table, split_blocks, unipotent_radical_dim,
    FFMatrix, DEFAULT_SEED,
};
use green2q::green2::{check_identities, dm_green2, linsys_green2, QtildeMatrix, INTEGRALITY_SAMPLES};
use green2q::partitions::{green_polynomial, orthogonality_defect, partitions_of, Partition};
use green2q::qpoly::{cyclotomic, q_power_minus_one, Polynomial, Rational};
use green2q::tabledb::{
    corpus_dir, derive_merge, load_corpus, triality_permutations, verify_brute_matching, verify_engine,
    verify_ennola_pair, verify_eq1, verify_eq3, verify_integrality, verify_regular, verify_triality, Corpus,
};
use green2q::typea::LeviDescriptor;

type Outcome = Result<(), Vec<String>>;

/// Tables transcribed from the GL_n examples.
const GL_TABLES: [&str; 7] = ["gl3_a1", "gl4_a2", "gl4_a1a1", "gl4_a1q2", "gl4_a1_tw", "gl5_a3", "gl5_a2a1"];

fn within(start: Instant, limit: Duration, what: &str, errs: &mut Vec<String>) {
    let took = start.elapsed();
    if took > limit {
        errs.push(format!("{what} took {took:?}, over {limit:?}"));
    }
}

fn finish(errs: Vec<String>) -> Outcome {
    if errs.is_empty() {
        Ok(())
    } else {
        Err(errs)
    }
}

fn proper_levis(n: usize) -> Vec<LeviDescriptor> {
    LeviDescriptor::all_levis(n).into_iter().filter(|l| !l.is_gl()).collect()
}

fn split_levis(n: usize) -> Vec<LeviDescriptor> {
    LeviDescriptor::all_levis(n).into_iter().filter(LeviDescriptor::is_split).collect()
}

fn at(q: &QtildeMatrix, p: u32) -> Vec<Vec<Rational>> {
    q.eval_int(p as i64)
}

fn engine_matches_examples(corpus: &Corpus) -> Outcome {
    let start = Instant::now();
    let mut errs = Vec::new();
    for id in GL_TABLES {
        match corpus.get(id) {
            Ok(t) => {
                let r = verify_engine(t);
                if !r.passed {
                    errs.push(format!("{id}: {}", r.details.join("; ")));
                }
            }
            Err(e) => errs.push(e.to_string()),
        }
    }
    within(start, Duration::from_secs(10), "engine on the examples", &mut errs);
    finish(errs)
}

fn routes_agree() -> Outcome {
    let start = Instant::now();
    let cases: Vec<(LeviDescriptor, LeviDescriptor)> =
        (1..=5).flat_map(|n| proper_levis(n).into_iter().map(move |l| (LeviDescriptor::gl(n), l))).collect();
    let mut errs: Vec<String> = cases
        .par_iter()
        .filter_map(|(g, l)| match (dm_green2(g, l), linsys_green2(g, l)) {
            (Ok(a), Ok(b)) if a == b => None,
            (Ok(_), Ok(_)) => Some(format!("{l}: routes disagree")),
            (Err(e), _) | (_, Err(e)) => Some(format!("{l}: {e}")),
        })
        .collect();
    within(start, Duration::from_secs(60), "route equivalence", &mut errs);
    finish(errs)
}

/// Polynomial identity by interpolation over `dim U + 1` primes, plus the direct
/// enumeration of `U^F` at the sampled primes.
fn counting_matches_engine() -> Outcome {
    let start = Instant::now();
    let mut jobs: Vec<(LeviDescriptor, LeviDescriptor, Vec<u32>)> = Vec::new();
    for n in [3, 4] {
        for l in split_levis(n) {
            jobs.push((LeviDescriptor::gl(n), l, vec![2, 3, 5]));
        }
    }
    jobs.push((LeviDescriptor::gl(5), LeviDescriptor::split(&[3, 2]), vec![2, 3, 5, 7, 11, 13]));
    let errs: Vec<String> = jobs
        .par_iter()
        .flat_map(|(g, l, samples)| {
            let mut errs = Vec::new();
            let want = match dm_green2(g, l) {
                Ok(q) => q,
                Err(e) => return vec![format!("{l}: {e}")],
            };
            let blocks = split_blocks(l).expect("split");
            let primes = first_primes(unipotent_radical_dim(&blocks) + 1);
            match interpolate_table(g, l, &primes) {
                Ok(got) if got == want => {}
                Ok(_) => errs.push(format!("{l}: interpolated table differs from the engine")),
                Err(e) => errs.push(format!("{l}: {e}")),
            }
            for &p in samples {
                let expected = at(&want, p);
                match eq2_table(g.ambient_n, &blocks, p) {
                    Ok(got) if got == expected => {}
                    Ok(_) => errs.push(format!("{l}: enumeration of U at p = {p} differs")),
                    Err(e) => errs.push(format!("{l} at p = {p}: {e}")),
                }
            }
            errs
        })
        .collect();
    let mut errs = errs;
    within(start, Duration::from_secs(300), "counting", &mut errs);
    finish(errs)
}

fn sl4_counting(corpus: &Corpus) -> Outcome {
    let start = Instant::now();
    let mut errs = Vec::new();
    if corpus.links.brute_matchings.is_empty() {
        errs.push("no recorded SL_4 matchings".into());
    }
    let covered: Vec<u32> = corpus.links.brute_matchings.iter().flat_map(|m| m.primes.clone()).collect();
    for p in [3, 5, 7] {
        if !covered.contains(&p) {
            errs.push(format!("p = {p} is not covered"));
        }
    }
    for m in &corpus.links.brute_matchings {
        for r in verify_brute_matching(corpus, m, DEFAULT_SEED).results {
            if !r.passed {
                errs.push(format!("{}: {}", r.subject, r.details.join("; ")));
            }
        }
    }
    within(start, Duration::from_secs(600), "SL_4 counting", &mut errs);
    finish(errs)
}

fn eq1_and_regular(corpus: &Corpus) -> Outcome {
    let mut errs = Vec::new();
    for t in corpus.tables.values() {
        if t.orders.is_none() {
            errs.push(format!("{}: no group orders recorded", t.id));
            continue;
        }
        for r in [verify_eq1(t), verify_regular(t)] {
            if !r.passed {
                errs.push(format!("{} {}: {}", r.check, t.id, r.details.join("; ")));
            }
        }
    }
    finish(errs)
}

fn eq3_pairs(corpus: &Corpus) -> Outcome {
    let mut errs = Vec::new();
    let required = [
        ("sl4_a1a1_q3", "gl4_a1a1"),
        ("sl4_a1a1_q1", "gl4_a1a1"),
        ("sl4_a1q2_q3", "gl4_a1q2"),
        ("sl4_a1q2_q1", "gl4_a1q2"),
        ("spin8_a3", "d4_a3"),
        ("spin8_a1a1a1", "d4_a1a1a1"),
    ];
    for (g, gt) in required {
        if !corpus.links.merges.iter().any(|m| m.g == g && m.gtilde == gt) {
            errs.push(format!("merge {g} -> {gt} is not recorded"));
        }
    }
    for pair in &corpus.links.merges {
        let (Ok(g), Ok(gt)) = (corpus.get(&pair.g), corpus.get(&pair.gtilde)) else {
            errs.push(format!("{} -> {}: missing table", pair.g, pair.gtilde));
            continue;
        };
        let gt = if pair.gtilde_transform == "ennola" { gt.ennola() } else { gt.clone() };
        match derive_merge(g, &gt) {
            Ok(map) => {
                let r = verify_eq3(g, &gt, &map);
                if !r.passed {
                    errs.push(format!("{} -> {}: {}", pair.g, pair.gtilde, r.details.join("; ")));
                }
            }
            Err(e) => errs.push(e.to_string()),
        }
    }
    finish(errs)
}

fn triality(corpus: &Corpus) -> Outcome {
    let mut errs = Vec::new();
    for id in ["spin8_a1a1a1", "d4_a1a1a1"] {
        let t = match corpus.get(id) {
            Ok(t) => t,
            Err(e) => {
                errs.push(e.to_string());
                continue;
            }
        };
        if id == "spin8_a1a1a1" && t.cases.len() != 2 {
            errs.push(format!("{id}: expected both congruence cases"));
        }
        match triality_permutations(t) {
            Some(p) => {
                let r = verify_triality(t, &p);
                if !r.passed {
                    errs.push(format!("{id}: {}", r.details.join("; ")));
                }
            }
            None => errs.push(format!("{id}: no triality images recorded")),
        }
    }
    finish(errs)
}

fn ennola(corpus: &Corpus) -> Outcome {
    let mut errs = Vec::new();
    let Some(pair) = corpus.links.ennola.iter().find(|p| p.a == "d4_a3") else {
        return Err(vec!["no Ennola pair for d4_a3".into()]);
    };
    if pair.expected_cols.len() != 2 || !pair.expected_rows.is_empty() {
        errs.push("the recorded permutation is not a single column transposition".into());
    }
    let r = verify_ennola_pair(corpus, pair);
    if !r.passed {
        errs.push(r.details.join("; "));
    }
    let t = corpus.get("d4_a3").expect("present");
    for (x, _) in &pair.expected_cols {
        let c = t.cols.iter().find(|c| &c.id == x).expect("recorded column");
        if c.jordan != "3^21^2" {
            errs.push(format!("{x} has Jordan type {}, not 3^21^2", c.jordan));
        }
    }
    finish(errs)
}

fn integrality(corpus: &Corpus) -> Outcome {
    let mut errs = Vec::new();
    for t in corpus.tables.values() {
        let r = verify_integrality(t, &INTEGRALITY_SAMPLES);
        if !r.passed {
            errs.push(format!("{}: {}", t.id, r.details.join("; ")));
        }
    }
    let computed: Vec<(LeviDescriptor, LeviDescriptor)> =
        (2..=5).flat_map(|n| proper_levis(n).into_iter().map(move |l| (LeviDescriptor::gl(n), l))).collect();
    for (g, l) in computed {
        match dm_green2(&g, &l) {
            Ok(q) => {
                let rep = check_identities(&q);
                for check in ["induced_entry", "integrality"] {
                    match rep.get(check) {
                        Some(r) if r.passed => {}
                        Some(r) => errs.push(format!("{check} {l}: {}", r.details.join("; "))),
                        None => errs.push(format!("{check} {l}: not run")),
                    }
                }
            }
            Err(e) => errs.push(format!("{l}: {e}")),
        }
    }
    finish(errs)
}

fn gl_order(n: usize, p: u128) -> u128 {
    (0..n as u32).map(|i| p.pow(n as u32) - p.pow(i)).product()
}

fn properties() -> Outcome {
    let mut errs = Vec::new();
    // q^n - 1 = Π_{d | n} Φ_d
    for n in 1..=24u32 {
        let prod = (1..=n).filter(|d| n % d == 0).fold(Polynomial::one(), |acc, d| acc * cyclotomic(d).expect("d > 0"));
        if prod != q_power_minus_one(n as usize) {
            errs.push(format!("cyclotomic product for n = {n}"));
        }
    }
    for n in 1..=6 {
        if !orthogonality_defect(n).is_zero() {
            errs.push(format!("character orthogonality fails for S_{n}"));
        }
    }
    // the trace of R_T(1) for the split torus counts fixed complete flags
    let column = |n: usize| Partition::new(vec![1; n]);
    for n in 1..=4 {
        for lambda in partitions_of(n) {
            let green = green_polynomial(&lambda, &column(n)).expect("same size");
            for p in [2u32, 3] {
                let count = flag_fix_count(&FFMatrix::jordan(lambda.parts(), p));
                if green.eval_int(p as i64) != Rational::from_integer(count.into()) {
                    errs.push(format!("flags fixed by u_{lambda} at p = {p}"));
                }
            }
        }
    }
    // Σ_λ |G| / |C_G(u_λ)| = q^{n(n-1)}; the identity's centralizer is G itself
    for n in 1..=4 {
        for p in [2u128, 3] {
            let g = gl_order(n, p);
            let mut total = 0u128;
            for lambda in partitions_of(n) {
                if lambda == column(n) {
                    total += 1;
                    continue;
                }
                match centralizer_order(&FFMatrix::jordan(lambda.parts(), p as u32)) {
                    Ok(c) if g % c == 0 => total += g / c,
                    Ok(c) => errs.push(format!("|C(u_{lambda})| = {c} does not divide |GL_{n}({p})|")),
                    Err(e) => errs.push(e.to_string()),
                }
            }
            if total != p.pow((n * (n - 1)) as u32) {
                errs.push(format!("GL_{n}({p}) has {total} unipotent elements"));
            }
        }
    }
    for n in 2..=5 {
        for l in proper_levis(n) {
            match dm_green2(&LeviDescriptor::gl(n), &l) {
                Ok(q) => match check_identities(&q).get("dominance_support") {
                    Some(r) if r.passed => {}
                    Some(r) => errs.push(format!("dominance support {l}: {}", r.details.join("; "))),
                    None => errs.push(format!("dominance support {l}: not run")),
                },
                Err(e) => errs.push(format!("{l}: {e}")),
            }
        }
    }
    finish(errs)
}

fn main() -> ExitCode {
    let corpus = match load_corpus(&corpus_dir()) {
        Ok(c) => c,
        Err(e) => {
            println!("FAIL corpus: {e}");
            return ExitCode::FAILURE;
        }
    };
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("engine reproduces the GL_n example matrices", Box::new(|| engine_matches_examples(&corpus))),
        ("linear-system route equals the Deligne-Lusztig route for n <= 5", Box::new(routes_agree)),
        ("flag counting over F_p equals the engine", Box::new(counting_matches_engine)),
        ("SL_4 counting matches the split-Levi tables", Box::new(|| sl4_counting(&corpus))),
        ("identity and regular columns of every table", Box::new(|| eq1_and_regular(&corpus))),
        ("class fusion onto connected-centre tables", Box::new(|| eq3_pairs(&corpus))),
        ("triality symmetry of the A1^3 tables", Box::new(|| triality(&corpus))),
        ("Ennola duality swaps the two 3^2 1^2 classes", Box::new(|| ennola(&corpus))),
        ("integrality and induced entry", Box::new(|| integrality(&corpus))),
        ("property suites", Box::new(properties)),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("PASS {:>2} {name} ({took:.1} s)", k + 1),
            Err(errs) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({took:.1} s)", k + 1);
                for e in errs {
                    println!("        {e}");
                }
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
