//! Command-line interface: parse joint constraint networks, run the
//! propagation and decision procedures, generate instances, and export
//! drawings. JSON goes to stdout, diagnostics to stderr.
//!
//! Exit codes: 0 satisfiable, 1 unsatisfiable, 2 unknown, 3 input error.

mod format;
mod json;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};

use qsr::boxes::{basic_ra_network, rectangle_solution};
use qsr::generate::gen_instance;
use qsr::interaction::{biclose, JointNetwork};
use qsr::interval::{ia_calculus, IA_TOKENS};
use qsr::realize::{compatible, realize_regions, to_svg, verify_regions, Primitive, SymbolicRegion};
use qsr::solver::{
    bipath_consistency, check_general, decide_dir49, epsilon_solve, path_consistency, Status,
    Verdict,
};
use qsr::topology::{rcc8_calculus, H8Membership, RCC8_TOKENS};
use qsr::{Error, Rat};

use format::{parse_network, serialize_network};

#[derive(Parser)]
#[command(name = "qsr", about = "Joint topological and directional constraint solving", version)]
struct Cli {
    /// Treat every topological relation as belonging to the tractable
    /// subclass, skipping the membership check.
    #[arg(long, global = true)]
    assume_h8: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide satisfiability with the fragment-aware pipeline.
    Check {
        /// Network files; several files are checked in parallel.
        files: Vec<PathBuf>,
        /// Write the witness drawing here (single file only).
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Enforce path consistency on both component networks independently.
    Pc { file: PathBuf },
    /// Apply pairwise mutual restriction once.
    Biclose { file: PathBuf },
    /// Run the combined restriction/propagation fixpoint.
    Bipath { file: PathBuf },
    /// Complete decision for directional constraints inside the 49-atom
    /// fragment, with a constructive witness.
    Solve {
        file: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Approximate solving: exact topology, directional deviation below a
    /// bound.
    Epsilon {
        file: PathBuf,
        /// Deviation bound in (0,1), as `num/den` or a decimal.
        #[arg(long, default_value = "1/100")]
        eps: String,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Realize an atomic joint network as regions with exact bounding
    /// rectangles and export the drawing.
    Realize {
        file: PathBuf,
        #[arg(long)]
        svg: PathBuf,
    },
    /// Generate a satisfiable instance with a ground-truth witness.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        vars: usize,
        /// Draw the witness regions.
        #[arg(long)]
        witness_svg: Option<PathBuf>,
    },
    /// Dump the derived composition tables for audit.
    Tables {
        /// ia, rcc8, ra, or all.
        #[arg(long, default_value = "ia")]
        calculus: String,
    },
}

fn membership(assume: bool) -> Result<H8Membership, anyhow::Error> {
    if assume {
        return Ok(H8Membership::assume_all());
    }
    match std::env::var_os("QSR_H8_TABLE") {
        Some(path) => {
            let text = std::fs::read_to_string(&path)
                .with_context(|| format!("reading {}", Path::new(&path).display()))?;
            H8Membership::from_file_text(&text).map_err(|e| anyhow!("{e}"))
        }
        None => Ok(H8Membership::builtin()),
    }
}

fn load(file: &Path) -> Result<JointNetwork, anyhow::Error> {
    let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    parse_network(&text).map_err(|e| anyhow!("{}: {e}", file.display()))
}

fn parse_eps(text: &str) -> Result<Rat, anyhow::Error> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: i64 = n.trim().parse().context("numerator")?;
        let d: i64 = d.trim().parse().context("denominator")?;
        if d == 0 {
            return Err(anyhow!("zero denominator"));
        }
        return Ok(Rat::new(n.into(), d.into()));
    }
    if let Some((int, frac)) = text.split_once('.') {
        let digits = frac.len() as u32;
        let int: i64 = if int.is_empty() { 0 } else { int.parse().context("integer part")? };
        let frac: i64 = if frac.is_empty() { 0 } else { frac.parse().context("fraction part")? };
        let den = 10i64.checked_pow(digits).ok_or_else(|| anyhow!("too many digits"))?;
        return Ok(Rat::new((int * den + frac).into(), den.into()));
    }
    let n: i64 = text.parse().context("epsilon")?;
    Ok(Rat::from_integer(n.into()))
}

fn status_code(status: Status) -> u8 {
    match status {
        Status::Sat => 0,
        Status::Unsat => 1,
        Status::Unknown => 2,
    }
}

fn write_witness_svg(verdict: &Verdict, path: &Path) -> Result<Option<String>, anyhow::Error> {
    let Some(witness) = &verdict.witness else { return Ok(None) };
    let svg = to_svg(&witness.regions, Some(&witness.rectangles));
    std::fs::write(path, svg).with_context(|| format!("writing {}", path.display()))?;
    Ok(Some(path.display().to_string()))
}

fn emit_verdict(
    net: &JointNetwork,
    verdict: &Verdict,
    svg: Option<&PathBuf>,
) -> Result<u8, anyhow::Error> {
    let svg_path = match svg {
        Some(path) => write_witness_svg(verdict, path)?,
        None => None,
    };
    println!("{}", json::verdict_json(net, verdict, svg_path.as_deref()));
    Ok(status_code(verdict.status))
}

fn membership_clone(h8: &H8Membership) -> H8Membership {
    match h8 {
        H8Membership::AssumeAll => H8Membership::AssumeAll,
        H8Membership::Subset(set) => H8Membership::Subset(set.clone()),
    }
}

fn cmd_check(files: &[PathBuf], svg: Option<&PathBuf>, h8: &H8Membership) -> Result<u8, anyhow::Error> {
    if files.is_empty() {
        return Err(anyhow!("no input files"));
    }
    if files.len() == 1 {
        let net = load(&files[0])?;
        let verdict = check_general(&net, h8).map_err(|e| anyhow!("{e}"))?;
        return emit_verdict(&net, &verdict, svg);
    }
    if svg.is_some() {
        return Err(anyhow!("--svg needs a single input file"));
    }
    // one worker per file; results are printed in input order
    let results: Vec<Result<(JointNetwork, Verdict), anyhow::Error>> = std::thread::scope(|scope| {
        let handles: Vec<_> = files
            .iter()
            .map(|file| {
                let worker_h8 = membership_clone(h8);
                scope.spawn(move || {
                    let net = load(file)?;
                    let verdict = check_general(&net, &worker_h8).map_err(|e| anyhow!("{e}"))?;
                    Ok((net, verdict))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut worst = 0u8;
    for result in results {
        let (net, verdict) = result?;
        println!("{}", json::verdict_json(&net, &verdict, None));
        worst = worst.max(status_code(verdict.status));
    }
    Ok(worst)
}

fn cmd_propagate(file: &Path, which: &str) -> Result<u8, anyhow::Error> {
    let net = load(file)?;
    let outcome = match which {
        "pc" => {
            let top = path_consistency(&net.top);
            let dir = path_consistency(&net.dir);
            match (top, dir) {
                (Ok(top), Ok(dir)) => Ok(JointNetwork { vars: net.vars.clone(), top, dir }),
                (Err(inc), _) | (_, Err(inc)) => Err(inc),
            }
        }
        "biclose" => biclose(&net),
        _ => bipath_consistency(&net),
    };
    match outcome {
        Ok(fixed) => {
            println!("{}", json::network_json("ok", &fixed));
            Ok(0)
        }
        Err(inc) => {
            println!("{}", json::inconsistent_json(&net, inc.i, inc.j));
            Ok(1)
        }
    }
}

fn cmd_solve(file: &Path, svg: Option<&PathBuf>, h8: &H8Membership) -> Result<u8, anyhow::Error> {
    let net = load(file)?;
    match decide_dir49(&net, h8, true) {
        Ok(verdict) => emit_verdict(&net, &verdict, svg),
        Err(Error::OutsideDir49 { i, j }) => Err(anyhow!(
            "directional constraint between `{}` and `{}` is outside the 49-atom fragment; use `qsr check`",
            net.vars[i],
            net.vars[j]
        )),
        Err(e) => Err(anyhow!("{e}")),
    }
}

fn cmd_epsilon(file: &Path, eps: &str, svg: Option<&PathBuf>) -> Result<u8, anyhow::Error> {
    let net = load(file)?;
    let eps = parse_eps(eps)?;
    match epsilon_solve(&net, &eps) {
        Ok(verdict) => emit_verdict(&net, &verdict, svg),
        Err(Error::UnsatisfiableAt { stage }) => {
            println!("{}", serde_json::json!({ "status": "unsat", "stage": stage }));
            Ok(1)
        }
        Err(e) => Err(anyhow!("{e}")),
    }
}

fn cmd_realize(file: &Path, svg: &Path) -> Result<u8, anyhow::Error> {
    let net = load(file)?;
    if let Some((i, j)) = net.top.pairs().find(|&(i, j)| !net.top.get(i, j).is_basic()) {
        return Err(anyhow!(
            "realize needs an atomic network; topological pair `{} {}` is not basic",
            net.vars[i],
            net.vars[j]
        ));
    }
    let axes = basic_ra_network(&net.dir).map_err(|e| anyhow!("{e}"))?;
    let rects = match rectangle_solution(&axes) {
        Ok(r) => r,
        Err(_) => {
            println!("{}", serde_json::json!({ "status": "unsat", "stage": "directional network" }));
            return Ok(1);
        }
    };
    let violations = compatible(&rects, &net.top).map_err(|e| anyhow!("{e}"))?;
    if !violations.is_empty() {
        for v in &violations {
            eprintln!("incompatible pair `{} {}`: {}", net.vars[v.i], net.vars[v.j], v.clause);
        }
        return Err(anyhow!(
            "rectangles incompatible with the topology ({} violations)",
            violations.len()
        ));
    }
    let regions = realize_regions(&net.top, &rects, &net.vars).map_err(|e| anyhow!("{e}"))?;
    let report = verify_regions(&regions, &net.top).map_err(|e| anyhow!("{e}"))?;
    let svg_text = to_svg(&regions, Some(&rects));
    std::fs::write(svg, svg_text).with_context(|| format!("writing {}", svg.display()))?;
    println!(
        "{}",
        serde_json::json!({
            "status": "sat",
            "verified": report.all_match(),
            "svg_path": svg.display().to_string(),
        })
    );
    Ok(if report.all_match() { 0 } else { 2 })
}

fn regions_as_symbolic(inst: &qsr::generate::GeneratedInstance) -> Vec<SymbolicRegion> {
    inst.regions
        .iter()
        .zip(inst.net.vars.iter())
        .map(|(region, name)| SymbolicRegion {
            owner: name.clone(),
            mbr: region.mbr(),
            primitives: region.pieces().iter().cloned().map(Primitive::Rect).collect(),
            tangencies: Vec::new(),
            contains: Vec::new(),
        })
        .collect()
}

fn cmd_gen(seed: u64, vars: usize, witness_svg: Option<&PathBuf>) -> Result<u8, anyhow::Error> {
    if vars == 0 {
        return Err(anyhow!("--vars must be at least 1"));
    }
    let inst = gen_instance(seed, vars);
    print!("# generated instance: seed={seed} vars={vars}\n{}", serialize_network(&inst.net));
    if let Some(path) = witness_svg {
        let regions = regions_as_symbolic(&inst);
        let mbrs: Vec<_> = inst.regions.iter().map(|r| r.mbr()).collect();
        std::fs::write(path, to_svg(&regions, Some(&mbrs)))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(0)
}

fn cmd_tables(which: &str) -> Result<u8, anyhow::Error> {
    let dump_ia = || {
        let ia = ia_calculus();
        println!("calculus IA ({} basic relations)", ia.basis_size());
        for a in 0..ia.basis_size() {
            for b in 0..ia.basis_size() {
                let composed = ia.basic(a).compose(&ia.basic(b));
                println!("{} {} = {}", IA_TOKENS[a], IA_TOKENS[b], composed.token_string());
            }
        }
    };
    let dump_rcc8 = || {
        let rcc = rcc8_calculus();
        println!("calculus RCC8 ({} basic relations)", rcc.basis_size());
        for a in 0..8 {
            for b in 0..8 {
                let composed = rcc.basic(a).compose(&rcc.basic(b));
                println!("{} {} = {}", RCC8_TOKENS[a], RCC8_TOKENS[b], composed.token_string());
            }
        }
    };
    let dump_ra = || {
        let ra = qsr::boxes::ra_calculus();
        println!("calculus RA ({} basic relations)", ra.basis_size());
        for a in 0..169 {
            for b in 0..169 {
                let composed = ra.basic(a).compose(&ra.basic(b));
                println!("{} {} = {}", ra.basic_name(a), ra.basic_name(b), composed.token_string());
            }
        }
    };
    match which {
        "ia" => dump_ia(),
        "rcc8" => dump_rcc8(),
        "ra" => dump_ra(),
        "all" => {
            dump_ia();
            dump_rcc8();
            dump_ra();
        }
        other => return Err(anyhow!("unknown calculus `{other}` (expected ia, rcc8, ra, all)")),
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, anyhow::Error> {
    let h8 = membership(cli.assume_h8)?;
    match &cli.command {
        Command::Check { files, svg } => cmd_check(files, svg.as_ref(), &h8),
        Command::Pc { file } => cmd_propagate(file, "pc"),
        Command::Biclose { file } => cmd_propagate(file, "biclose"),
        Command::Bipath { file } => cmd_propagate(file, "bipath"),
        Command::Solve { file, svg } => cmd_solve(file, svg.as_ref(), &h8),
        Command::Epsilon { file, eps, svg } => cmd_epsilon(file, eps, svg.as_ref()),
        Command::Realize { file, svg } => cmd_realize(file, svg),
        Command::Gen { seed, vars, witness_svg } => cmd_gen(*seed, *vars, witness_svg.as_ref()),
        Command::Tables { calculus } => cmd_tables(calculus),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
