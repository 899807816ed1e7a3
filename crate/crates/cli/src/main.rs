//! `green2q`: compute, verify and brute-force 2-parameter Green functions.
//!
//! Reports go to stdout as JSON lines, one check per line, with a summary on
//! stderr. Exit codes: 0 success, 1 a check failed, 2 usage or input error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use green2q::bruteforce::{
    brute_qtilde, first_primes, interpolate_table, sl_qtilde_table, split_blocks, unipotent_radical_dim, Ambient,
};
use green2q::green2::{check_identities, dm_green2, linsys_green2, QtildeMatrix};
use green2q::report::{CheckResult, Report};
use green2q::tabledb::{
    corpus_dir, derive_merge, load_corpus, load_table, triality_permutations, verify_brute_matching, verify_engine,
    verify_ennola_pair, verify_eq1, verify_eq3, verify_integrality, verify_regular, verify_triality, Corpus,
    EncodedTable,
};
use green2q::typea::LeviDescriptor;

#[derive(Parser)]
#[command(name = "green2q", version, about = "Exact 2-parameter Green functions of finite reductive groups")]
struct Cli {
    /// Worker threads; output does not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for the sampling paths of the counting oracle.
    #[arg(long, global = true, default_value_t = green2q::bruteforce::DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Latex,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Route {
    Dm,
    Linsys,
}

#[derive(Subcommand)]
enum Cmd {
    /// Symbolic `Q̃` table of a Levi of `GL_n`.
    Compute {
        #[arg(long)]
        ambient: String,
        /// Levi factors, `"2,1"` or `"2@1,1@2"`, or a full descriptor `"GL4 / 2@2"`.
        #[arg(long)]
        levi: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long, value_enum, default_value = "dm")]
        route: Route,
        /// Also run the identity checks (eq1, regular, dominance, integrality, induced entry).
        #[arg(long)]
        checks: bool,
    },
    /// Verify encoded tables.
    Verify {
        /// Every table of the corpus and every cross-table relation.
        #[arg(long)]
        all: bool,
        /// Comma-separated table ids.
        #[arg(long, value_delimiter = ',')]
        table: Vec<String>,
        /// A table file outside the corpus.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Comma list of eq1,regular,eq3,triality,ennola,integrality,engine,conjectures.
        #[arg(long, value_delimiter = ',')]
        checks: Vec<String>,
    },
    /// Count `Q̃(v, u)` in `GL_n(p)` or `SL_n(p)`; the whole table without `--u`/`--v`.
    Brute {
        #[arg(long)]
        ambient: String,
        #[arg(long)]
        p: u32,
        /// Block sizes of the split Levi.
        #[arg(long)]
        levi: String,
        #[arg(long)]
        u: Option<String>,
        #[arg(long)]
        v: Option<String>,
    },
    /// Interpolate the counting oracle over primes and compare with the engine.
    Interpolate {
        #[arg(long)]
        ambient: String,
        #[arg(long)]
        levi: String,
        /// Defaults to the first `dim U + 1` primes.
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u32>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Print a corpus table.
    Export {
        #[arg(long)]
        table: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Quick end-to-end run over the corpus, the engine and the oracle.
    Selftest,
}

const ALL_CHECKS: [&str; 8] = ["eq1", "regular", "eq3", "triality", "ennola", "integrality", "engine", "conjectures"];

struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool, Usage> {
    match cli.cmd {
        Cmd::Compute { ambient, levi, format, route, checks } => {
            let (g, l) = descriptors(&ambient, &levi)?;
            let q = match route {
                Route::Dm => dm_green2(&g, &l)?,
                Route::Linsys => linsys_green2(&g, &l)?,
            };
            print!("{}", render_qtilde(&q, format));
            if checks {
                return Ok(emit(&check_identities(&q)));
            }
            Ok(true)
        }
        Cmd::Verify { all, table, file, checks } => verify(all, &table, file, &checks),
        Cmd::Brute { ambient, p, levi, u, v } => {
            let amb: Ambient = ambient.parse()?;
            let blocks = parse_blocks(&levi)?;
            match (u, v) {
                (Some(u), Some(v)) => {
                    let v = pad_levi_label(&v, &blocks);
                    println!("{}", brute_qtilde(amb, p, &blocks, &u, &v)?);
                }
                (None, None) => println!("{}", brute_table_json(amb, p, &blocks, cli.seed)?),
                _ => return Err(Usage("give both --u and --v, or neither".into())),
            }
            Ok(true)
        }
        Cmd::Interpolate { ambient, levi, primes, format } => {
            let (g, l) = descriptors(&ambient, &levi)?;
            let primes =
                if primes.is_empty() { first_primes(unipotent_radical_dim(&split_blocks(&l)?) + 1) } else { primes };
            let q = interpolate_table(&g, &l, &primes)?;
            print!("{}", render_qtilde(&q, format));
            let mut r = CheckResult::new("interpolation", &format!("{l} in {g}"));
            let want = dm_green2(&g, &l)?;
            for (i, row) in q.entries.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    if *x != want.entries[i][j] {
                        r.fail(format!(
                            "({}, {}): expected {}, interpolated {x}",
                            q.rows[i], q.cols[j], want.entries[i][j]
                        ));
                    }
                }
            }
            let mut rep = Report::default();
            rep.push(r);
            Ok(summarize(&rep, false))
        }
        Cmd::Export { table, format } => {
            let corpus = load_corpus(&corpus_dir())?;
            let t = corpus.get(&table)?;
            print!("{}", render_table(t, format));
            Ok(true)
        }
        Cmd::Selftest => selftest(cli.seed),
    }
}

/// `(GL_n, L)` from `--ambient GL4 --levi 2,2` or a full descriptor in `--levi`.
fn descriptors(ambient: &str, levi: &str) -> Result<(LeviDescriptor, LeviDescriptor), Usage> {
    let g = LeviDescriptor::parse(ambient)?;
    if !g.is_gl() {
        return Err(Usage(format!("ambient must be GL_n, got {ambient}")));
    }
    let l = if levi.trim_start().starts_with("GL") {
        LeviDescriptor::parse(levi)?
    } else {
        LeviDescriptor::parse(&format!("{} / {levi}", ambient.trim()))?
    };
    if l.ambient_n != g.ambient_n {
        return Err(Usage(format!("{l} is not a Levi of {g}")));
    }
    Ok((g, l))
}

fn parse_blocks(s: &str) -> Result<Vec<usize>, Usage> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().ok().filter(|&b| b > 0))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Usage(format!("malformed block sizes {s:?}")))
}

/// Appends the only class `"1"` for trailing `GL_1` factors left out of `v`.
fn pad_levi_label(v: &str, blocks: &[usize]) -> String {
    let (base, suffix) = match v.split_once('#') {
        Some((b, s)) => (b, format!("#{s}")),
        None => (v, String::new()),
    };
    let mut groups: Vec<&str> = base.split(';').collect();
    while groups.len() < blocks.len() && blocks[groups.len()] == 1 {
        groups.push("1");
    }
    format!("{}{suffix}", groups.join(";"))
}

fn brute_table_json(amb: Ambient, p: u32, blocks: &[usize], seed: u64) -> Result<String, Usage> {
    let (rows, cols, entries): (Vec<String>, Vec<String>, Vec<Vec<u64>>) = match amb {
        Ambient::Gl(n) => {
            let rows = green2q::partitions::MultiPartition::all(blocks).iter().map(ToString::to_string).collect();
            let cols = green2q::partitions::partitions_of(n).iter().map(ToString::to_string).collect();
            (rows, cols, green2q::bruteforce::gl_qtilde_table(n, blocks, p))
        }
        Ambient::Sl(n) => {
            let t = sl_qtilde_table(n, blocks, p, seed)?;
            (
                t.rows.iter().map(ToString::to_string).collect(),
                t.cols.iter().map(ToString::to_string).collect(),
                t.entries,
            )
        }
    };
    Ok(serde_json::json!({ "p": p, "rows": rows, "cols": cols, "entries": entries }).to_string())
}

fn render_qtilde(q: &QtildeMatrix, format: Format) -> String {
    match format {
        Format::Json => render_table(&EncodedTable::from_qtilde(&table_id(q), q), Format::Json),
        Format::Csv => q.to_csv(),
        Format::Latex => format!("{}\n", q.to_latex()),
    }
}

fn table_id(q: &QtildeMatrix) -> String {
    let s = format!("{}_{}", q.ambient, q.levi);
    s.chars().map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '_' }).collect()
}

fn render_table(t: &EncodedTable, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&t.to_file()).expect("serializable")),
        Format::Csv => t.to_csv(),
        Format::Latex => format!("{}\n", t.to_latex()),
    }
}

/// Prints each result as a JSON line and a summary on stderr; true when all passed.
fn emit(rep: &Report) -> bool {
    summarize(rep, true)
}

fn summarize(rep: &Report, lines: bool) -> bool {
    if lines {
        for r in &rep.results {
            println!("{}", serde_json::to_string(r).expect("serializable"));
        }
    }
    let failed: Vec<&CheckResult> = rep.failures().collect();
    eprintln!("{} checks, {} failed", rep.results.len(), failed.len());
    for r in &failed {
        eprintln!("FAIL {} {}", r.check, r.subject);
        for d in &r.details {
            eprintln!("    {d}");
        }
    }
    failed.is_empty()
}

fn table_checks(t: &EncodedTable, on: &dyn Fn(&str) -> bool) -> Report {
    let mut rep = Report::default();
    if on("eq1") && t.orders.is_some() {
        rep.push(verify_eq1(t));
    }
    if on("regular") {
        rep.push(verify_regular(t));
    }
    if on("integrality") {
        rep.push(verify_integrality(t, &green2q::green2::INTEGRALITY_SAMPLES));
    }
    let is_gl = t.ambient.starts_with("GL");
    if on("engine") && is_gl {
        rep.push(verify_engine(t));
    }
    if on("conjectures") && is_gl {
        match LeviDescriptor::parse(&t.levi)
            .map_err(|e| e.to_string())
            .and_then(|l| dm_green2(&LeviDescriptor::gl(l.ambient_n), &l).map_err(|e| e.to_string()))
        {
            Ok(q) => rep.extend(check_identities(&q)),
            Err(e) => {
                let mut r = CheckResult::new("conjectures", &t.id);
                r.fail(e);
                rep.push(r);
            }
        }
    }
    if on("triality") {
        if let Some(p) = triality_permutations(t) {
            rep.push(verify_triality(t, &p));
        }
    }
    rep
}

fn verify(all: bool, ids: &[String], file: Option<PathBuf>, checks: &[String]) -> Result<bool, Usage> {
    for c in checks {
        if !ALL_CHECKS.contains(&c.as_str()) {
            return Err(Usage(format!("unknown check {c:?}; expected one of {}", ALL_CHECKS.join(","))));
        }
    }
    let on = |c: &str| checks.is_empty() || checks.iter().any(|x| x == c);
    if let Some(path) = file {
        let t = load_table(&path)?;
        return Ok(emit(&table_checks(&t, &on)));
    }
    if !all && ids.is_empty() {
        return Err(Usage("give --all, --table or --file".into()));
    }
    let corpus = load_corpus(&corpus_dir())?;
    let selected: Vec<&EncodedTable> = if all {
        corpus.tables.values().collect()
    } else {
        ids.iter().map(|id| corpus.get(id)).collect::<Result<_, _>>()?
    };
    let reports: Vec<Report> = selected.par_iter().map(|t| table_checks(t, &on)).collect();
    let mut rep = Report::default();
    for r in reports {
        rep.extend(r);
    }
    let chosen = |id: &str| all || ids.iter().any(|x| x == id);
    if on("eq3") {
        rep.extend(cross_eq3(&corpus, &chosen));
    }
    if on("ennola") {
        for pair in corpus.links.ennola.iter().filter(|p| chosen(&p.a) || chosen(&p.b_merged)) {
            rep.push(verify_ennola_pair(&corpus, pair));
        }
    }
    Ok(emit(&rep))
}

fn cross_eq3(corpus: &Corpus, chosen: &dyn Fn(&str) -> bool) -> Report {
    let mut rep = Report::default();
    for pair in corpus.links.merges.iter().filter(|p| chosen(&p.g) || chosen(&p.gtilde)) {
        let mut r = CheckResult::new("eq3", &format!("{} -> {}", pair.g, pair.gtilde));
        let result = (|| -> Result<CheckResult, String> {
            let g = corpus.get(&pair.g).map_err(|e| e.to_string())?;
            let gt = corpus.get(&pair.gtilde).map_err(|e| e.to_string())?;
            let gt = if pair.gtilde_transform == "ennola" { gt.ennola() } else { gt.clone() };
            let map = derive_merge(g, &gt).map_err(|e| e.to_string())?;
            Ok(verify_eq3(g, &gt, &map))
        })();
        match result {
            Ok(x) => rep.push(x),
            Err(e) => {
                r.fail(e);
                rep.push(r);
            }
        }
    }
    rep
}

fn selftest(seed: u64) -> Result<bool, Usage> {
    let mut rep = Report::default();
    let corpus = load_corpus(&corpus_dir())?;
    let on = |_: &str| true;
    for t in corpus.tables.values() {
        rep.extend(table_checks(t, &on));
    }
    rep.extend(cross_eq3(&corpus, &|_| true));
    for pair in &corpus.links.ennola {
        rep.push(verify_ennola_pair(&corpus, pair));
    }
    // engine routes agree on GL_4
    for l in LeviDescriptor::all_levis(4) {
        let g = LeviDescriptor::gl(4);
        let mut r = CheckResult::new("routes", &format!("{l} in {g}"));
        match (dm_green2(&g, &l), linsys_green2(&g, &l)) {
            (Ok(a), Ok(b)) if a == b => {}
            (Ok(_), Ok(_)) => r.fail("routes disagree"),
            (Err(e), _) | (_, Err(e)) => r.fail(e.to_string()),
        }
        rep.push(r);
    }
    // the counting oracle against the engine and the SL_4 tables
    let g = LeviDescriptor::gl(3);
    let l = LeviDescriptor::parse("GL3 / 2,1")?;
    let mut r = CheckResult::new("interpolation", "GL3 / 2,1");
    match interpolate_table(&g, &l, &first_primes(3)) {
        Ok(q) if q == dm_green2(&g, &l)? => {}
        Ok(_) => r.fail("interpolated table differs from the engine"),
        Err(e) => r.fail(e.to_string()),
    }
    rep.push(r);
    for m in &corpus.links.brute_matchings {
        rep.extend(verify_brute_matching(&corpus, m, seed));
    }
    Ok(emit(&rep))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trailing_gl1_factors_are_padded() {
        assert_eq!(pad_levi_label("1,1", &[2, 1]), "1,1;1");
        assert_eq!(pad_levi_label("2;2#1", &[2, 2]), "2;2#1");
        assert_eq!(pad_levi_label("1,1;1", &[2, 1]), "1,1;1");
    }
}
