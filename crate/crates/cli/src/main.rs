use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use vanrees::corpus;
use vanrees::derived::{bruck_plus, derived_checks, steiner_star};
use vanrees::equivalence::{equivalent, Level};
use vanrees::search::{
    classify_order_with_cap, probe_problem1, search_loops, FillOrder, IsoReduction, Limits, Mode, SearchResult, SearchSpec,
};
use vanrees::square::ParseError;
use vanrees::structure::{all_subloops, generated_subloop, is_normal, normality_failure, nuclei_and_center, quotient_loop, Subloop};
use vanrees::{
    check_identity, conjugate, enumerate_subsquares, evaluate_conditions, loop_isotope, normalize_loop, parse_table,
    ConjugateName, LatinSquare, LoopTable, NamedProperty,
};

const SCHEMA: &str = "vanrees-report/1";

#[derive(Parser)]
#[command(name = "vanrees", version, about = "Latin squares, quasigroups and loops meeting the order-3 subsquare bound")]
struct Cli {
    /// machine-readable report on standard output
    #[arg(long, global = true)]
    json: bool,
    /// worker threads (default: all cores)
    #[arg(long, global = true, env = "VANREES_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// file path, `corpus:NAME`, or `-` for standard input
    input: String,
}

#[derive(Subcommand)]
enum Command {
    /// Check that the input parses as a latin square
    Validate(Input),
    /// Enumerate subsquares of order 2 or 3
    Subsquares {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(2..=3))]
        order: u8,
        #[arg(long, conflicts_with = "list")]
        count: bool,
        #[arg(long)]
        list: bool,
    },
    /// Evaluate the seven equivalent van Rees conditions
    Vanrees(Input),
    /// Check a named identity
    Identity {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        name: String,
    },
    /// Principal loop isotope at column `a`, row `b`
    Isotope {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// One of the six conjugates (rcs, crs, rsc, scr, csr, src)
    Conjugate {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        which: String,
    },
    /// Left, middle and right nuclei and the center
    Nuclei(Input),
    /// All subloops
    Subloops(Input),
    /// Test whether the subloop generated by the listed elements is normal
    Normal {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        subloop: String,
    },
    /// Quotient by a normal subloop
    Quotient {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        subloop: String,
    },
    /// Steiner product x*y = x(y(yx))
    Steiner(Input),
    /// Bruck sum of a left Bol loop of exponent 3
    Bruck(Input),
    /// Decide isomorphism, isotopy or paratopy
    Equiv {
        a: String,
        b: String,
        #[arg(long, default_value = "paratopy")]
        level: String,
    },
    /// Exhaustive loop search
    Search {
        #[arg(long)]
        order: usize,
        #[arg(long, default_value = "vanRees")]
        mode: String,
        /// reduce up to isomorphism
        #[arg(long)]
        iso: bool,
        #[arg(long)]
        budget_nodes: Option<u64>,
        #[arg(long)]
        budget_secs: Option<u64>,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// allow orders beyond the default feasibility threshold
        #[arg(long)]
        long_run: bool,
        /// fill column-major instead of row-major
        #[arg(long)]
        column_major: bool,
    },
    /// Isomorphism classes at one order
    Classify {
        #[arg(long)]
        order: usize,
        #[arg(long, default_value = "vanRees")]
        mode: String,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Embedded tables
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
    /// Search for a loop satisfying vRL1-3 but not vRL4
    ProbeProblem1 {
        #[arg(long)]
        order: usize,
        #[arg(long)]
        budget_nodes: Option<u64>,
        #[arg(long)]
        budget_secs: Option<u64>,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    List,
    Dump { name: String },
}

/// Every error path exits with code 2.
fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(msg.into())
}

struct Loaded {
    source: String,
    text: String,
    square: LatinSquare,
}

struct Outcome {
    holds: bool,
    results: Value,
    text: String,
}

impl Outcome {
    fn ok(results: Value, text: String) -> Self {
        Outcome { holds: true, results, text }
    }

    fn verdict(holds: bool, results: Value, text: String) -> Self {
        Outcome { holds, results, text }
    }
}

fn read_source(source: &str) -> Result<String> {
    if source == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading standard input")?;
        return Ok(s);
    }
    if let Some(name) = source.strip_prefix("corpus:") {
        if let Some(text) = corpus::table_text(name) {
            return Ok(text.to_string());
        }
        let entry = corpus::get_named(name).map_err(|e| usage(e.to_string()))?;
        return Ok(entry.table.to_text());
    }
    std::fs::read_to_string(source).map_err(|e| usage(format!("{source}: {e}")))
}

fn load_text(source: &str) -> Result<(String, std::result::Result<LatinSquare, ParseError>)> {
    let text = read_source(source)?;
    let parsed = parse_table(&text);
    Ok((text, parsed))
}

fn load(source: &str) -> Result<Loaded> {
    let (text, parsed) = load_text(source)?;
    let square = parsed.map_err(|e| usage(format!("{source}: {e}")))?;
    Ok(Loaded {
        source: source.to_string(),
        text,
        square,
    })
}

fn as_loop(sq: &LatinSquare) -> LoopTable {
    normalize_loop(sq)
}

fn digest(text: &str) -> String {
    format!("{:x}", Sha256::digest(text.as_bytes()))
}

/// An element given by label, or by index when no label matches.
fn element(sq: &LatinSquare, token: &str) -> Result<usize> {
    let token = token.trim();
    if let Some(i) = sq.index_of(token) {
        return Ok(i);
    }
    match token.parse::<usize>() {
        Ok(i) if i < sq.order() => Ok(i),
        _ => Err(usage(format!("unknown element '{token}'"))),
    }
}

fn elements(sq: &LatinSquare, list: &str) -> Result<Vec<usize>> {
    list.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| element(sq, t))
        .collect()
}

fn label_list(sq: &LatinSquare, xs: impl IntoIterator<Item = usize>) -> String {
    let v: Vec<String> = xs.into_iter().map(|x| sq.label(x)).collect();
    format!("{{{}}}", v.join(", "))
}

fn subloop_from(q: &LoopTable, list: &str) -> Result<Subloop> {
    let xs = elements(q, list)?;
    if xs.is_empty() {
        bail!(usage("--subloop needs at least one element"));
    }
    generated_subloop(q, &xs).map_err(|e| usage(e.to_string()))
}

fn mode(s: &str) -> Result<Mode> {
    s.parse::<Mode>().map_err(|e| usage(e.to_string()))
}

fn limits(nodes: Option<u64>, secs: Option<u64>) -> Limits {
    Limits {
        max_nodes: nodes,
        max_time: secs.map(Duration::from_secs),
    }
}

fn search_text(r: &SearchResult) -> String {
    let unit = match r.iso_reduction {
        IsoReduction::Isomorphism => "classes",
        IsoReduction::None => "tables",
    };
    let status = if r.completed { "exhausted" } else { "budget exceeded" };
    let mut s = format!(
        "order {} mode {}: {} {unit}, {status} after {} nodes",
        r.order, r.mode, r.count, r.stats.nodes
    );
    if let Some(reason) = &r.reason {
        s.push_str(&format!("\nreason: {reason}"));
    }
    for w in &r.witnesses {
        s.push_str("\n\n");
        s.push_str(w.to_text().trim_end());
    }
    s
}

fn run(cmd: Command, inputs: &mut Vec<Value>) -> Result<Outcome> {
    let mut note = |l: &Loaded| {
        inputs.push(json!({ "source": l.source, "sha256": digest(&l.text), "order": l.square.order() }));
    };
    Ok(match cmd {
        Command::Validate(Input { input }) => {
            let (text, parsed) = load_text(&input)?;
            inputs.push(json!({ "source": input, "sha256": digest(&text) }));
            match parsed {
                Ok(sq) => {
                    let is_loop = sq.is_loop();
                    Outcome::ok(
                        json!({ "latin": true, "order": sq.order(), "loop": is_loop }),
                        format!("latin square of order {}{}", sq.order(), if is_loop { " (loop)" } else { "" }),
                    )
                }
                Err(e @ (ParseError::DuplicateInRow { .. } | ParseError::DuplicateInColumn { .. })) => {
                    Outcome::verdict(false, json!({ "latin": false, "error": e.to_string() }), format!("not latin: {e}"))
                }
                Err(e) => bail!(usage(format!("{input}: {e}"))),
            }
        }
        Command::Subsquares { input, order, count: _, list } => {
            let l = load(&input.input)?;
            note(&l);
            let subs = enumerate_subsquares(&l.square, order as usize).map_err(|e| usage(e.to_string()))?;
            let mut text = subs.len().to_string();
            if list {
                for s in &subs {
                    text.push_str(&format!(
                        "\nrows {} cols {} symbols {}",
                        label_list(&l.square, s.rows.iter().copied()),
                        label_list(&l.square, s.cols.iter().copied()),
                        label_list(&l.square, s.symbols.iter().copied()),
                    ));
                }
            }
            let mut res = json!({ "order": order, "count": subs.len() });
            if list {
                res["subsquares"] = serde_json::to_value(&subs)?;
            }
            Outcome::ok(res, text)
        }
        Command::Vanrees(Input { input }) => {
            let l = load(&input)?;
            note(&l);
            let r = evaluate_conditions(&l.square);
            let mut res = serde_json::to_value(&r)?;
            for i in 1..=7 {
                res[format!("cond{i}")] = json!(r.cond(i));
            }
            let mut text = format!(
                "van Rees: {}\ncount3 = {} (bound {}/{})\n",
                r.van_rees, r.count3, r.bound_numerator, r.bound_denominator
            );
            for i in 1..=7 {
                text.push_str(&format!("cond{i}: {}\n", r.cond(i)));
            }
            if !r.consistent {
                text.push_str("warning: the conditions disagree\n");
            }
            Outcome::verdict(r.van_rees && r.consistent, res, text.trim_end().to_string())
        }
        Command::Identity { input, name } => {
            let l = load(&input.input)?;
            note(&l);
            let p: NamedProperty = name.parse().map_err(|e: vanrees::identities::IdentityError| usage(e.to_string()))?;
            let sq = if p.requires_loop() { as_loop(&l.square).into_square() } else { l.square.clone() };
            let v = check_identity(&sq, p).map_err(|e| usage(e.to_string()))?;
            let text = match &v.witness {
                None => format!("{} holds", p.name()),
                Some(w) => format!("{} fails at ({})", p.name(), w.iter().map(|&x| sq.label(x)).collect::<Vec<_>>().join(", ")),
            };
            Outcome::verdict(v.holds, serde_json::to_value(&v)?, text)
        }
        Command::Isotope { input, a, b } => {
            let l = load(&input.input)?;
            note(&l);
            let (a, b) = (element(&l.square, &a)?, element(&l.square, &b)?);
            let iso = loop_isotope(&l.square, a, b).map_err(|e| usage(e.to_string()))?;
            Outcome::ok(
                json!({ "a": a, "b": b, "table": iso.table, "triple": iso.triple }),
                iso.table.to_text().trim_end().to_string(),
            )
        }
        Command::Conjugate { input, which } => {
            let l = load(&input.input)?;
            note(&l);
            let w: ConjugateName = which.parse().map_err(|e: vanrees::transforms::TransformError| usage(e.to_string()))?;
            let c = conjugate(&l.square, w);
            Outcome::ok(json!({ "which": w, "table": c }), c.to_text().trim_end().to_string())
        }
        Command::Nuclei(Input { input }) => {
            let l = load(&input)?;
            note(&l);
            let q = as_loop(&l.square);
            let r = nuclei_and_center(&q);
            let text = format!(
                "left {}\nmiddle {}\nright {}\ncenter {}",
                label_list(&q, r.left.to_vec()),
                label_list(&q, r.middle.to_vec()),
                label_list(&q, r.right.to_vec()),
                label_list(&q, r.center.to_vec()),
            );
            Outcome::ok(serde_json::to_value(&r)?, text)
        }
        Command::Subloops(Input { input }) => {
            let l = load(&input)?;
            note(&l);
            let q = as_loop(&l.square);
            let subs = all_subloops(&q);
            let text = subs.iter().map(|s| label_list(&q, s.to_vec())).collect::<Vec<_>>().join("\n");
            Outcome::ok(json!({ "count": subs.len(), "subloops": subs }), text)
        }
        Command::Normal { input, subloop } => {
            let l = load(&input.input)?;
            note(&l);
            let q = as_loop(&l.square);
            let s = subloop_from(&q, &subloop)?;
            let normal = is_normal(&q, &s).map_err(|e| usage(e.to_string()))?;
            let failure = normality_failure(&q, &s);
            Outcome::verdict(
                normal,
                json!({ "subloop": s, "normal": normal, "failure": failure }),
                format!("{} is {}normal", label_list(&q, s.to_vec()), if normal { "" } else { "not " }),
            )
        }
        Command::Quotient { input, subloop } => {
            let l = load(&input.input)?;
            note(&l);
            let q = as_loop(&l.square);
            let s = subloop_from(&q, &subloop)?;
            match quotient_loop(&q, &s) {
                Ok(qt) => {
                    let cosets: Vec<Vec<usize>> = qt.cosets.iter().map(|c| c.to_vec()).collect();
                    Outcome::ok(
                        json!({ "subloop": s, "table": qt.table, "cosets": cosets, "representatives": qt.representatives }),
                        qt.table.to_text().trim_end().to_string(),
                    )
                }
                Err(e) => Outcome::verdict(false, json!({ "subloop": s, "error": e.to_string() }), e.to_string()),
            }
        }
        Command::Steiner(Input { input }) => {
            let l = load(&input)?;
            note(&l);
            let q = as_loop(&l.square);
            let report = derived_checks(&q);
            match steiner_star(&q) {
                Ok(d) => {
                    let axioms = report.steiner_axioms.as_ref().is_some_and(|c| c.holds);
                    Outcome::verdict(
                        axioms,
                        json!({ "table": d.table, "verified": d.verified, "axioms": report.steiner_axioms, "van_rees": report.steiner_van_rees }),
                        format!("{}\naxioms hold: {axioms}", d.table.to_text().trim_end()),
                    )
                }
                Err(e) => Outcome::verdict(false, json!({ "error": e.to_string() }), e.to_string()),
            }
        }
        Command::Bruck(Input { input }) => {
            let l = load(&input)?;
            note(&l);
            let q = as_loop(&l.square);
            match bruck_plus(&q) {
                Ok(d) => {
                    let report = derived_checks(&q);
                    Outcome::ok(
                        json!({
                            "table": d.table,
                            "bruck_comm": report.bruck_comm,
                            "bruck_step1": report.bruck_step1,
                            "commutative_exp3": report.bruck_commutative_exp3,
                            "vrl": report.vrl_suite,
                        }),
                        d.table.to_text().trim_end().to_string(),
                    )
                }
                Err(e) => Outcome::verdict(false, json!({ "error": e.to_string() }), e.to_string()),
            }
        }
        Command::Equiv { a, b, level } => {
            let level: Level = level.parse().map_err(|e: String| usage(e))?;
            let la = load(&a)?;
            let lb = load(&b)?;
            note(&la);
            note(&lb);
            let v = equivalent(&la.square, &lb.square, level);
            let text = format!("{}{}", if v.equivalent { "equivalent" } else { "not equivalent" }, match &v.witness {
                Some(w) => format!(
                    " (conjugate {}; rows {}; cols {}; symbols {})",
                    w.conjugate, w.triple.row_perm, w.triple.col_perm, w.triple.sym_perm
                ),
                None => String::new(),
            });
            Outcome::verdict(v.equivalent, serde_json::to_value(&v)?, text)
        }
        Command::Search { order, mode: m, iso, budget_nodes, budget_secs, checkpoint, long_run, column_major } => {
            let mut spec = SearchSpec::new(order, mode(&m)?).with_limits(limits(budget_nodes, budget_secs));
            if !iso {
                spec = spec.raw();
            }
            if column_major {
                spec = spec.with_fill_order(FillOrder::ColumnMajor);
            }
            spec.checkpoint = checkpoint;
            spec.long_run = long_run;
            let r = search_loops(&spec).map_err(|e| usage(e.to_string()))?;
            Outcome::verdict(r.completed, serde_json::to_value(&r)?, search_text(&r))
        }
        Command::Classify { order, mode: m, cap } => {
            let m = mode(&m)?;
            let classes = classify_order_with_cap(order, m, cap.unwrap_or(m.classify_cap())).map_err(|e| usage(e.to_string()))?;
            let text = std::iter::once(format!("{} classes", classes.len()))
                .chain(classes.iter().map(|c| c.to_text().trim_end().to_string()))
                .collect::<Vec<_>>()
                .join("\n\n");
            Outcome::ok(json!({ "order": order, "mode": m, "count": classes.len(), "classes": classes }), text)
        }
        Command::Corpus { action: CorpusAction::List } => {
            let entries: Vec<Value> = corpus::all()
                .iter()
                .map(|e| json!({ "name": e.name, "order": e.table.order(), "source": e.source, "description": e.description }))
                .collect();
            let text = corpus::all()
                .iter()
                .map(|e| format!("{:<14} {:>3}  {}", e.name, e.table.order(), e.description))
                .collect::<Vec<_>>()
                .join("\n");
            Outcome::ok(json!({ "entries": entries }), text)
        }
        Command::Corpus { action: CorpusAction::Dump { name } } => {
            let text = read_source(&format!("corpus:{name}"))?;
            inputs.push(json!({ "source": format!("corpus:{name}"), "sha256": digest(&text) }));
            Outcome::ok(json!({ "name": name, "text": text }), text.trim_end().to_string())
        }
        Command::ProbeProblem1 { order, budget_nodes, budget_secs } => {
            let r = probe_problem1(order, limits(budget_nodes, budget_secs)).map_err(|e| usage(e.to_string()))?;
            Outcome::verdict(r.completed, serde_json::to_value(&r)?, search_text(&r))
        }
    })
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let json_out = cli.json;
    if let Some(k) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let mut inputs = Vec::new();
    let outcome = run(cli.command, &mut inputs);
    let elapsed = start.elapsed().as_secs_f64() * 1000.0;
    match outcome {
        Ok(o) => {
            if json_out {
                let report = json!({
                    "schema": SCHEMA,
                    "version": env!("CARGO_PKG_VERSION"),
                    "command": argv[1..],
                    "inputs": inputs,
                    "holds": o.holds,
                    "results": o.results,
                    "timing": { "elapsed_ms": elapsed },
                });
                println!("{}", serde_json::to_string_pretty(&report).expect("json values serialize"));
            } else {
                println!("{}", o.text);
            }
            ExitCode::from(if o.holds { 0 } else { 1 })
        }
        Err(e) => {
            if json_out {
                let report = json!({
                    "schema": SCHEMA,
                    "version": env!("CARGO_PKG_VERSION"),
                    "command": argv[1..],
                    "inputs": inputs,
                    "error": format!("{e:#}"),
                    "timing": { "elapsed_ms": elapsed },
                });
                println!("{}", serde_json::to_string_pretty(&report).expect("json values serialize"));
            }
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
