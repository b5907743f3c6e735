//! Line-oriented front end: one MMP diagram per input line, one result per
//! output line, in input order.

use std::fs;
use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use ks_forge::catalog;
use ks_forge::iso::{canonical_diagram, canonical_form, is_subgraph};
use ks_forge::mmp::{parse_mmp_dim, Dim, MmpDiagram};
use ks_forge::pipeline::{classify_ks_subsets, criticality, criticality_tsv, max_edge_loop};
use ks_forge::states::{count_01_states, find_01_state};
use ks_forge::subsets::EdgeSubsets;
use ks_forge::vectors::{
    orthogonality_system, realize_shared_from_pool, standard_pool_m101, vectorfind_with,
    CandidatePool, VectorFindOptions, VectorFindOutcome,
};

/// Subsets are generated and keyed in blocks of this many masks.
const SUBSET_BLOCK: u64 = 1 << 14;

#[derive(Parser, Debug)]
#[command(
    name = "ks-forge",
    version,
    about = "Kochen-Specker sets as MMP diagrams"
)]
struct Cli {
    /// Vertices per edge.
    #[arg(long, global = true, default_value = "4", value_parser = parse_dim)]
    dim: Dim,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check MMP syntax and the MMP rules; prints the size of each valid line.
    Validate,
    /// Prints KS or HAS-STATE per line.
    States {
        /// Append the vertices set to 1 in one state.
        #[arg(long)]
        witness: bool,
        /// Print the number of 0-1 states instead.
        #[arg(long, conflicts_with = "witness")]
        count: bool,
    },
    /// Prints YES or NO per line depending on whether it embeds in the reference.
    Subgraph {
        /// File whose first diagram is the reference.
        #[arg(long = "ref")]
        reference: PathBuf,
        /// Append the edge mapping.
        #[arg(long)]
        witness: bool,
    },
    /// All nonempty edge subsets of each line.
    Subsets {
        /// Keep subsets containing an edge disjoint from all the others.
        #[arg(long)]
        keep_isolated: bool,
        /// Drop subsets isomorphic to one already printed for the same line.
        #[arg(long)]
        dedup: bool,
        /// Only print subsets without a 0-1 state.
        #[arg(long)]
        ks: bool,
        #[command(flatten)]
        jobs: Jobs,
    },
    /// Searches a ray pool for an orthogonal assignment per line.
    Vectorfind {
        /// `m101`, `table2-22-11`, or a file with one ray per line.
        #[arg(long, default_value = "m101")]
        pool: String,
        /// Seconds per diagram.
        #[arg(long, env = "KS_FORGE_TIMEOUT", default_value = "10", value_parser = parse_seconds)]
        timeout: Duration,
        /// Only try one first ray per signed-permutation orbit.
        #[arg(long)]
        break_symmetry: bool,
        /// Draw only vertices on two or more edges from the pool and
        /// complete the others exactly.
        #[arg(long, conflicts_with = "break_symmetry")]
        reduce: bool,
    },
    /// Canonical key per line.
    Canon {
        /// Print the canonically relabelled diagram instead of the key.
        #[arg(long)]
        diagram: bool,
    },
    /// Prints a shipped diagram.
    Catalog {
        #[arg(required_unless_present = "list")]
        name: Option<String>,
        /// List names, sizes and sources.
        #[arg(long, conflicts_with = "name")]
        list: bool,
        /// Print the vector table instead of the diagram.
        #[arg(long)]
        vectors: bool,
    },
    /// Classifies the KS subsets of the Peres 24-24 set by size.
    Table1 {
        /// Also write table1.tsv and representatives.txt here.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[command(flatten)]
        jobs: Jobs,
    },
    /// Criticality report for the KS diagrams on stdin.
    Critical {
        #[command(flatten)]
        jobs: Jobs,
    },
    /// Longest chordless loop of edges per line.
    Loops,
    /// The orthogonality equations of each line, followed by a blank line.
    Equations,
}

#[derive(Args, Debug)]
struct Jobs {
    /// Worker threads; defaults to all cores. Output does not depend on it.
    #[arg(long)]
    jobs: Option<usize>,
}

impl Jobs {
    fn pool(&self) -> Result<rayon::ThreadPool, String> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = self.jobs {
            builder = builder.num_threads(n);
        }
        builder.build().map_err(|e| e.to_string())
    }

    fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T, String> {
        Ok(self.pool()?.install(f))
    }
}

fn parse_dim(s: &str) -> Result<Dim, String> {
    match s {
        "3" => Ok(Dim::Three),
        "4" => Ok(Dim::Four),
        _ => Err("expected 3 or 4".into()),
    }
}

fn parse_seconds(s: &str) -> Result<Duration, String> {
    let x: f64 = s.parse().map_err(|_| format!("not a number: {s:?}"))?;
    Duration::try_from_secs_f64(x).map_err(|e| e.to_string())
}

/// Reads diagrams from `input`, skipping blank lines and `#` comments.
/// Malformed lines are reported on `err` with their line number.
struct Lines<'a> {
    dim: Dim,
    err: &'a mut dyn Write,
    failures: usize,
}

impl Lines<'_> {
    fn read(&mut self, input: &mut dyn BufRead) -> Vec<(usize, MmpDiagram)> {
        let mut out = Vec::new();
        for (i, line) in input.lines().enumerate() {
            let n = i + 1;
            let line = match line {
                Ok(l) => l,
                Err(e) => {
                    self.fail(n, &e.to_string());
                    break;
                }
            };
            let text = line.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            match parse_mmp_dim(&catalog::normalize_listing(text), self.dim) {
                Ok(d) => out.push((n, d)),
                Err(e) => self.fail(n, &e.to_string()),
            }
        }
        out
    }

    fn fail(&mut self, line: usize, msg: &str) {
        self.failures += 1;
        let _ = writeln!(self.err, "line {line}: {msg}");
    }
}

/// Runs one invocation and returns the exit code: 0 on success, 1 if any
/// input line failed, 2 on usage errors.
pub fn run<I, S>(argv: I, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli, input, out, err) {
        Ok(failures) => (failures > 0) as i32,
        Err(Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

struct Usage(String);

impl From<std::io::Error> for Usage {
    fn from(e: std::io::Error) -> Self {
        Usage(e.to_string())
    }
}

impl From<String> for Usage {
    fn from(e: String) -> Self {
        Usage(e)
    }
}

fn execute(
    cli: Cli,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<usize, Usage> {
    let mut lines = Lines {
        dim: cli.dim,
        err,
        failures: 0,
    };
    match cli.command {
        Command::Validate => {
            for (_, d) in lines.read(input) {
                writeln!(out, "OK {}", d.size_label())?;
            }
        }
        Command::States { witness, count } => {
            for (_, d) in lines.read(input) {
                if count {
                    writeln!(out, "{}", count_01_states(&d))?;
                    continue;
                }
                match find_01_state(&d) {
                    None => writeln!(out, "KS")?,
                    Some(s) if witness => {
                        let ones: String = s.ones().iter().map(|v| v.to_string()).collect();
                        writeln!(out, "HAS-STATE {ones}")?
                    }
                    Some(_) => writeln!(out, "HAS-STATE")?,
                }
            }
        }
        Command::Subgraph { reference, witness } => {
            let text = fs::read_to_string(&reference)
                .map_err(|e| format!("{}: {e}", reference.display()))?;
            let first = text
                .lines()
                .map(str::trim)
                .find(|l| !l.is_empty() && !l.starts_with('#'))
                .ok_or_else(|| format!("{}: no diagram", reference.display()))?;
            let refd = parse_mmp_dim(&catalog::normalize_listing(first), cli.dim)
                .map_err(|e| format!("{}: {e}", reference.display()))?;
            for (_, d) in lines.read(input) {
                match is_subgraph(&d, &refd) {
                    Some(m) if witness => writeln!(out, "YES {}", m.describe(&d, &refd))?,
                    Some(_) => writeln!(out, "YES")?,
                    None => writeln!(out, "NO")?,
                }
            }
        }
        Command::Subsets {
            keep_isolated,
            dedup,
            ks,
            jobs,
        } => {
            let pool = jobs.pool()?;
            for (n, d) in lines.read(input) {
                if d.edge_count() >= 64 {
                    lines.fail(n, "subsets need fewer than 64 edges");
                    continue;
                }
                write_subsets(&d, !keep_isolated, dedup, ks, &pool, out)?;
            }
        }
        Command::Vectorfind {
            pool,
            timeout,
            break_symmetry,
            reduce,
        } => {
            let pool = load_pool(&pool)?;
            let opts = VectorFindOptions {
                timeout: Some(timeout),
                break_symmetry,
            };
            for (_, d) in lines.read(input) {
                let outcome = if reduce {
                    realize_shared_from_pool(&d, &pool, Some(timeout))
                } else {
                    vectorfind_with(&d, &pool, &opts)
                };
                match outcome {
                    VectorFindOutcome::Assigned(va) => {
                        let rays: Vec<String> =
                            va.iter().map(|(v, r)| format!("{v}={r}")).collect();
                        writeln!(out, "ASSIGNED {}", rays.join(" "))?
                    }
                    VectorFindOutcome::NoSolution => writeln!(out, "NO-SOLUTION")?,
                    VectorFindOutcome::Indeterminate => writeln!(out, "INDETERMINATE")?,
                }
            }
        }
        Command::Canon { diagram } => {
            for (_, d) in lines.read(input) {
                if diagram {
                    writeln!(out, "{}", canonical_diagram(&d))?;
                } else {
                    writeln!(out, "{}", canonical_form(&d))?;
                }
            }
        }
        Command::Catalog {
            name,
            list,
            vectors,
        } => {
            if list {
                writeln!(out, "name\tsize\tsource")?;
                for s in catalog::all() {
                    writeln!(
                        out,
                        "{}\t{}\t{}",
                        s.name,
                        s.diagram.size_label(),
                        s.provenance()
                    )?;
                }
            } else {
                let name = name.unwrap_or_default();
                let set = catalog::get(&name).map_err(|e| e.to_string())?;
                if vectors {
                    let table = set
                        .vectors
                        .ok_or_else(|| format!("{name} has no vector table"))?;
                    write!(out, "{table}")?;
                } else {
                    writeln!(out, "{}", set.diagram)?;
                }
            }
        }
        Command::Table1 { out_dir, jobs } => {
            let c = jobs.install(|| classify_ks_subsets(&catalog::peres_24_24()))?;
            let tsv = c.table.to_tsv();
            out.write_all(tsv.as_bytes())?;
            if let Some(dir) = out_dir {
                fs::create_dir_all(&dir)?;
                fs::write(dir.join("table1.tsv"), &tsv)?;
                fs::write(dir.join("representatives.txt"), c.representatives_text())?;
            }
        }
        Command::Critical { jobs } => {
            let diagrams: Vec<MmpDiagram> = lines.read(input).into_iter().map(|(_, d)| d).collect();
            let reports =
                jobs.install(|| diagrams.par_iter().map(criticality).collect::<Vec<_>>())?;
            out.write_all(criticality_tsv(&reports).as_bytes())?;
        }
        Command::Loops => {
            for (_, d) in lines.read(input) {
                writeln!(out, "{}", max_edge_loop(&d))?;
            }
        }
        Command::Equations => {
            for (_, d) in lines.read(input) {
                for eq in orthogonality_system(&d) {
                    writeln!(out, "{eq}")?;
                }
                writeln!(out)?;
            }
        }
    }
    Ok(lines.failures)
}

fn load_pool(spec: &str) -> Result<CandidatePool, String> {
    match spec {
        "m101" => Ok(standard_pool_m101()),
        "table2-22-11" => Ok(catalog::pool_22_11()),
        path => {
            let text = fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
            CandidatePool::parse(&text).map_err(|e| format!("{path}: {e}"))
        }
    }
}

/// Writes the subsets of `d` in mask order. Blocks of masks are filtered
/// and keyed in parallel, then written and deduplicated in order.
fn write_subsets(
    d: &MmpDiagram,
    suppress: bool,
    dedup: bool,
    ks: bool,
    pool: &rayon::ThreadPool,
    out: &mut dyn Write,
) -> std::io::Result<()> {
    let end = 1u64 << d.edge_count();
    let starts: Vec<u64> = (0..end.div_ceil(SUBSET_BLOCK))
        .map(|i| i * SUBSET_BLOCK)
        .collect();
    let mut seen = std::collections::HashSet::new();
    // Bounded batches keep memory flat on large inputs.
    let batch = pool.current_num_threads().max(1) * 4;
    for chunk in starts.chunks(batch) {
        let blocks: Vec<Vec<(MmpDiagram, Option<String>)>> = pool.install(|| {
            chunk
                .par_iter()
                .map(|&s| {
                    EdgeSubsets::range(d, suppress, s..(s + SUBSET_BLOCK).min(end))
                        .filter(|x| !ks || find_01_state(x).is_none())
                        .map(|x| {
                            let key = dedup.then(|| canonical_form(&x).into_string());
                            (x, key)
                        })
                        .collect()
                })
                .collect()
        });
        for (x, key) in blocks.into_iter().flatten() {
            if let Some(k) = key {
                if !seen.insert(k) {
                    continue;
                }
            }
            writeln!(out, "{x}")?;
        }
    }
    Ok(())
}
