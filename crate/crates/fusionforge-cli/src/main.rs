use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fusionforge::enumerate::{
    classify, duality_candidates, egyptian_fractions, fusion_data_search, types_for_fpdim, ClassifyOptions,
    EgyptianOptions, SearchOptions, TypeOptions, DEFAULT_BUDGET,
};
use fusionforge::format::{render, Record};
use fusionforge::grouptheory::{
    enumerate_group, find_group_subgroup, group_theoretical, locate_subgroup, Catalog, GroupSpec, DEFAULT_ORDER_CAP,
};
use fusionforge::induction::{full_solutions, ring_morphism_compatible, InductionOptions, InductionProblem};
use fusionforge::{Error, FusionData, TypeVector};
use fusionforge_cli::*;
use serde_json::json;

/// Enumerate, analyze and classify integral fusion rings.
#[derive(Parser)]
#[command(name = "fusionforge", version)]
struct Cli {
    /// Worker threads (default: all cores). Output does not depend on this.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct BudgetArg {
    /// Search node budget; overrides FUSIONFORGE_BUDGET.
    #[arg(long)]
    budget: Option<u64>,
}

impl BudgetArg {
    fn get(&self) -> u64 {
        self.budget.unwrap_or_else(|| budget_from_env(DEFAULT_BUDGET))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solutions of Σ 1/x_i = 1 of a given length.
    Egyptian {
        length: usize,
        /// Every denominator divides the largest.
        #[arg(long)]
        divisibility: bool,
        /// Co-MNSD denominators (odd length).
        #[arg(long)]
        mnsd: bool,
        #[arg(long)]
        max_denominator: Option<u128>,
        /// Matrix block sizes of a noncommutative ring, e.g. 2 or 2,2.
        #[arg(long, value_delimiter = ',')]
        nc_pattern: Option<Vec<u32>>,
        /// Only print the count and the number of distinct maxima.
        #[arg(long)]
        count: bool,
    },
    /// Types [1, d_2, ..., d_r] with Σ d_i² = FPdim.
    Types {
        #[arg(long)]
        fpdim: u64,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        one_frobenius: bool,
        #[arg(long)]
        mnsd: bool,
        /// Also list the duality candidates of each type.
        #[arg(long)]
        dualities: bool,
    },
    /// All fusion rings of a type (and duality), up to isomorphism.
    Search {
        #[arg(long = "type", value_delimiter = ',', required = true)]
        ty: Vec<u64>,
        /// Default: every duality candidate.
        #[arg(long, value_delimiter = ',')]
        duality: Option<Vec<usize>>,
        #[command(flatten)]
        budget: BudgetArg,
        #[arg(long)]
        json: bool,
    },
    /// The full pipeline for one rank.
    Classify {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        max_fpdim: Option<u64>,
        #[arg(long)]
        one_frobenius: bool,
        #[arg(long)]
        mnsd: bool,
        #[arg(long)]
        noncommutative: bool,
        #[arg(long)]
        drinfeld_only: bool,
        #[command(flatten)]
        budget: BudgetArg,
        #[arg(long)]
        json: bool,
    },
    /// Properties of every ring in a catalog file.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Induction matrices of every ring in a catalog file.
    Induction {
        ring_file: PathBuf,
        #[command(flatten)]
        budget: BudgetArg,
        /// Search for commutative centers compatible with each matrix.
        #[arg(long)]
        emit_centers: bool,
        /// Check the matrices against a given center ring.
        #[arg(long)]
        check_center: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Type and duality of C(G, 1, H, 1).
    Grouptype {
        #[arg(long)]
        group: String,
        #[arg(long)]
        subgroup: String,
        #[arg(long)]
        json: bool,
    },
    /// Groups G and subgroups H with C(G, 1, H, 1) of a given type.
    Findgroup {
        #[arg(long = "type", value_delimiter = ',', required = true)]
        ty: Vec<u64>,
        /// `label | spec` per line; default: the built-in list for the order.
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Compare two catalogs up to isomorphism.
    Diff {
        computed: PathBuf,
        reference: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

/// A failure with its exit status.
struct Fail(i32, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(exit_code(&e), e.to_string())
    }
}

impl From<anyhow::Error> for Fail {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<Error>() {
            Some(inner) => Fail(exit_code(inner), e.to_string()),
            None => Fail(EXIT_USAGE, e.to_string()),
        }
    }
}

type Outcome = Result<i32, Fail>;

fn type_vector(dims: Vec<u64>) -> Result<TypeVector, Fail> {
    TypeVector::new(dims).map_err(Fail::from)
}

fn egyptian(length: usize, opts: EgyptianOptions, count: bool) -> Outcome {
    let sols = egyptian_fractions(length, &opts);
    let maxima: BTreeSet<u128> = sols.iter().map(|s| *s.denominators.last().unwrap()).collect();
    if !count {
        for s in &sols {
            let d: Vec<String> = s.denominators.iter().map(|x| x.to_string()).collect();
            println!("[{}]", d.join(","));
        }
    }
    println!("# solutions: {}; distinct maxima: {}; largest: {}", sols.len(), maxima.len(), maxima.last().map_or(0, |m| *m));
    Ok(EXIT_OK)
}

fn types(fpdim: u64, rank: usize, opts: TypeOptions, dualities: bool) -> Outcome {
    for ty in types_for_fpdim(fpdim, rank, opts) {
        let dims: Vec<String> = ty.dims.iter().map(|x| x.to_string()).collect();
        if dualities {
            for d in duality_candidates(&ty) {
                let d: Vec<String> = d.iter().map(|x| x.to_string()).collect();
                println!("[{}] [{}]", dims.join(","), d.join(","));
            }
        } else {
            println!("[{}]", dims.join(","));
        }
    }
    Ok(EXIT_OK)
}

fn search(dims: Vec<u64>, duality: Option<Vec<usize>>, budget: u64, json_out: bool) -> Outcome {
    let ty = type_vector(dims)?;
    let dualities = match duality {
        Some(d) => vec![d],
        None => duality_candidates(&ty),
    };
    let mut rings: Vec<FusionData> = Vec::new();
    let mut status = EXIT_OK;
    for d in &dualities {
        match fusion_data_search(&ty, d, SearchOptions { budget, parallel: true }) {
            Ok(out) => rings.extend(out.rings),
            Err(e @ Error::Timeout { .. }) => {
                eprintln!("warning: duality {d:?}: {e}");
                status = EXIT_INCOMPLETE;
            }
            Err(e) => return Err(e.into()),
        }
    }
    rings.sort_by_key(fusionforge::enumerate::pipeline::sort_key);
    for r in &rings {
        if json_out {
            let prov = json!({"command": "search", "type": ty.dims, "budget": budget, "complete": status == EXIT_OK});
            println!("{}", catalog_record(r, prov));
        } else {
            println!("{}", render(r));
        }
    }
    Ok(status)
}

fn run_classify(opts: ClassifyOptions, json_out: bool) -> Outcome {
    let rep = classify(&opts);
    let complete = rep.counts.incomplete == 0;
    let c = &rep.counts;
    if !json_out {
        println!(
            "# fractions: {}; fpdims: {}; types: {}; admitting types: {}; rings: {}; drinfeld: {}; reported: {}; incomplete: {}",
            c.fractions, c.fpdims, c.types, c.admitting_types, c.rings, c.drinfeld, c.reported, c.incomplete
        );
        for n in &rep.notes {
            println!("# note: {n}");
        }
    }
    for (ty, d) in &rep.incomplete {
        eprintln!("warning: search budget exhausted for type {:?} duality {d:?}", ty.dims);
    }
    for cr in &rep.rings {
        if json_out {
            let prov = json!({
                "command": "classify",
                "rank": opts.rank,
                "max_fpdim": opts.max_fpdim,
                "one_frobenius": opts.one_frobenius,
                "mnsd": opts.mnsd,
                "noncommutative": opts.noncommutative,
                "drinfeld_only": opts.drinfeld_only,
                "budget": opts.budget,
                "complete": complete,
            });
            println!("{}", catalog_record(&cr.ring, prov));
        } else {
            println!();
            if let Some(cg) = &cr.codegrees {
                println!("# codegrees: {cg}");
            }
            println!("# drinfeld: {}", if cr.drinfeld { "yes" } else { "no" });
            println!("{}", render(&cr.ring));
        }
    }
    Ok(if complete { EXIT_OK } else { EXIT_INCOMPLETE })
}

fn run_analyze(file: PathBuf, json_out: bool) -> Outcome {
    let records = read_catalog(&file)?;
    let reports = analyze(&records);
    for r in &reports {
        if json_out {
            println!("{}", serde_json::to_string(r).unwrap());
        } else {
            print!("{}", r.text());
        }
    }
    Ok(if reports.iter().all(|r| r.ok()) { EXIT_OK } else { EXIT_MISMATCH })
}

fn induction(file: PathBuf, budget: u64, emit_centers: bool, check_center: Option<PathBuf>, json_out: bool) -> Outcome {
    let records = read_catalog(&file)?;
    let center = match check_center {
        Some(p) => {
            let mut c = read_catalog(&p)?;
            if c.len() != 1 {
                return Err(Fail(EXIT_USAGE, format!("{}: expected exactly one center ring", p.display())));
            }
            Some(c.remove(0).ring)
        }
        None => None,
    };
    let opts = InductionOptions { budget, parallel: true };
    let mut status = EXIT_OK;
    for (i, Record { ring, .. }) in records.iter().enumerate() {
        let problem = InductionProblem::new(ring)?;
        let sols = match full_solutions(&problem, &opts) {
            Ok(s) => s,
            Err(e @ Error::Timeout { .. }) => {
                eprintln!("warning: ring {}: {e}", i + 1);
                status = status.max(EXIT_INCOMPLETE);
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        if !json_out {
            println!("# ring {}: {}", i + 1, render(ring));
            println!("# solutions: {}", sols.len());
        }
        if sols.is_empty() {
            // No induction matrix: the ring is obstructed.
            status = status.max(EXIT_MISMATCH);
        }
        let mut compatible_any = false;
        for (k, s) in sols.iter().enumerate() {
            let mut centers: Vec<String> = Vec::new();
            if let Some(c) = &center {
                let ok = ring_morphism_compatible(ring, s, c)?;
                compatible_any |= ok;
                if !json_out {
                    println!("# solution {}: center {}", k + 1, if ok { "compatible" } else { "incompatible" });
                }
            }
            if emit_centers {
                let ty = TypeVector::new(s.center_type.clone())?;
                for d in duality_candidates(&ty) {
                    match fusion_data_search(&ty, &d, SearchOptions { budget, parallel: true }) {
                        Ok(out) => {
                            for c in out.rings.iter().filter(|c| c.is_commutative()) {
                                if ring_morphism_compatible(ring, s, c)? {
                                    centers.push(render(c));
                                }
                            }
                        }
                        Err(e @ Error::Timeout { .. }) => {
                            eprintln!("warning: center search {d:?}: {e}");
                            status = status.max(EXIT_INCOMPLETE);
                        }
                        Err(e) => return Err(e.into()),
                    }
                }
            }
            if json_out {
                println!("{}", json!({"ring": i + 1, "solution": s, "centers": centers}));
            } else {
                print!("{}", s.render());
                for c in &centers {
                    println!("# center: {c}");
                }
            }
        }
        if center.is_some() && !sols.is_empty() && !compatible_any {
            status = status.max(EXIT_MISMATCH);
        }
    }
    Ok(status)
}

fn grouptype(group: &str, subgroup: &str, json_out: bool) -> Outcome {
    let g = enumerate_group(&GroupSpec::parse(group)?, DEFAULT_ORDER_CAP)?;
    let candidates = locate_subgroup(&g, &GroupSpec::parse(subgroup)?)?;
    if candidates.is_empty() {
        return Err(Fail(EXIT_USAGE, format!("no subgroup of {group} matches {subgroup}")));
    }
    for h in &candidates {
        let data = group_theoretical(&g.table, h)?;
        let gens = fusionforge::grouptheory::catalog::subgroup_generators(&g, h);
        if json_out {
            println!("{}", json!({"group": group, "group_order": g.order(), "subgroup_generators": gens, "result": data}));
        } else {
            if candidates.len() > 1 {
                println!("# subgroup generated by {}", gens.join(", "));
            }
            println!("type {:?}", data.ty);
            println!("duality {:?}", data.duality);
            if data.cocycle_sensitive {
                println!("# cocycle-sensitive: some stabilizer may carry a nontrivial Schur multiplier");
            }
        }
    }
    Ok(EXIT_OK)
}

fn findgroup(dims: Vec<u64>, catalog: Option<PathBuf>, json_out: bool) -> Outcome {
    let ty = type_vector(dims)?;
    let catalog = match catalog {
        Some(p) => {
            let text = std::fs::read_to_string(&p).map_err(|e| Fail(EXIT_USAGE, format!("{}: {e}", p.display())))?;
            Catalog::parse(&text)?
        }
        None => Catalog::builtin(ty.global_fpdim()).ok_or_else(|| {
            Fail(EXIT_USAGE, format!("no built-in catalog for order {}; pass --catalog", ty.global_fpdim()))
        })?,
    };
    let report = find_group_subgroup(&ty, &catalog);
    for (label, why) in &report.skipped {
        eprintln!("warning: skipped {label}: {why}");
    }
    if json_out {
        println!("{}", serde_json::to_string(&report).unwrap());
    } else {
        for m in &report.matches {
            println!(
                "{} | H of order {} generated by {} | type {:?} | duality {:?}",
                m.group,
                m.subgroup_order,
                m.subgroup_generators.join(", "),
                m.ty,
                m.duality
            );
        }
        println!("# matches: {}", report.matches.len());
    }
    Ok(EXIT_OK)
}

fn run_diff(computed: PathBuf, reference: PathBuf, json_out: bool) -> Outcome {
    let d = diff(&read_catalog(&computed)?, &read_catalog(&reference)?);
    if json_out {
        println!("{}", serde_json::to_string(&d).unwrap());
    } else {
        for m in &d.missing {
            println!("missing: {m}");
        }
        for e in &d.extra {
            println!("extra: {e}");
        }
        println!("# matched: {}; missing: {}; extra: {}", d.matched, d.missing.len(), d.extra.len());
    }
    Ok(if d.is_empty() { EXIT_OK } else { EXIT_MISMATCH })
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Egyptian { length, divisibility, mnsd, max_denominator, nc_pattern, count } => egyptian(
            length,
            EgyptianOptions { divisibility, mnsd, max_denominator, nc_pattern },
            count,
        ),
        Command::Types { fpdim, rank, one_frobenius, mnsd, dualities } => {
            types(fpdim, rank, TypeOptions { one_frobenius, mnsd }, dualities)
        }
        Command::Search { ty, duality, budget, json } => search(ty, duality, budget.get(), json),
        Command::Classify { rank, max_fpdim, one_frobenius, mnsd, noncommutative, drinfeld_only, budget, json } => {
            let mut o = ClassifyOptions::new(rank);
            o.max_fpdim = max_fpdim;
            o.one_frobenius = one_frobenius;
            o.mnsd = mnsd;
            o.noncommutative = noncommutative;
            o.drinfeld_only = drinfeld_only;
            o.budget = budget.get();
            run_classify(o, json)
        }
        Command::Analyze { file, json } => run_analyze(file, json),
        Command::Induction { ring_file, budget, emit_centers, check_center, json } => {
            induction(ring_file, budget.get(), emit_centers, check_center, json)
        }
        Command::Grouptype { group, subgroup, json } => grouptype(&group, &subgroup, json),
        Command::Findgroup { ty, catalog, json } => findgroup(ty, catalog, json),
        Command::Diff { computed, reference, json } => run_diff(computed, reference, json),
    }
}

fn main() -> ExitCode {
    // Die quietly when the reader of a pipe goes away (`| head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("warning: {e}");
        }
    }
    let code = match run(cli) {
        Ok(c) => c,
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            code
        }
    };
    ExitCode::from(code as u8)
}
