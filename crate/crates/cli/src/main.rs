mod input;
mod report;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use input::{load, Instance, Loaded};
use report::{sha256_hex, BeltSummary, HomCount, InvariantsReport, PresentationReport, RunReport, Validation};
use smallcover::charmap::{find_orientable_coloring, is_orientable, validate_charmap};
use smallcover::cover::{cw_presentation, heegaard_report, simplify, wu_yu_presentation, SimplifyLimits, SpanningTree};
use smallcover::morse::VertexOrder;
use smallcover::pi1::{abelianization, count_homs, minimal_presentation, Certificate, FiniteGroupTable, Presentation};
use smallcover::{Polytope, Shape};

#[derive(Parser)]
#[command(name = "smallcover", version, about = "Fundamental groups of small covers over simple 3-polytopes")]
struct Cli {
    /// Emit the JSON run report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for hom counting.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Cw,
    WuYu,
    Minimal,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Cw => "cw",
            Method::WuYu => "wu-yu",
            Method::Minimal => "minimal",
        }
    }
}

#[derive(clap::Args)]
struct CoverArgs {
    /// Polytope, bundle or presentation file; stdin when omitted or `-`.
    #[arg(default_value = "-")]
    input: String,
    /// Coloring JSON `{"colors": [...]}`.
    #[arg(long)]
    colors: Option<String>,
    /// Vertex order JSON `{"rank": [...]}`; a default order is generated otherwise.
    #[arg(long)]
    order: Option<String>,
}

#[derive(clap::Args)]
struct PresentArgs {
    #[command(flatten)]
    cover: CoverArgs,
    #[arg(long, value_enum, default_value = "minimal")]
    method: Method,
    /// Run generic Tietze simplification on the result.
    #[arg(long)]
    simplify: bool,
    /// Base vertex for the Wu-Yu presentation.
    #[arg(long, default_value_t = 0)]
    v0: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Check a polytope and optionally a coloring and an order.
    Validate(CoverArgs),
    /// Print the f- and h-vectors.
    Fvector {
        #[arg(default_value = "-")]
        input: String,
    },
    /// List the k-belts.
    Belts {
        #[arg(default_value = "-")]
        input: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(3..=4))]
        k: u64,
    },
    /// Find an orientable coloring; prints a bundle with the polytope.
    Color {
        #[arg(default_value = "-")]
        input: String,
    },
    /// Print a presentation of the fundamental group.
    Present(PresentArgs),
    /// First homology, from a cover or a presentation file.
    H1(PresentArgs),
    /// Abelianization and hom counts to finite groups.
    Invariants {
        #[command(flatten)]
        present: PresentArgs,
        #[arg(long, default_value = "z2,z2^2,z2^3,s3")]
        targets: String,
        #[arg(long, default_value_t = 10_000_000)]
        cap: u64,
    },
    /// Compute all three presentations and check that they agree.
    Compare {
        #[command(flatten)]
        cover: CoverArgs,
        #[arg(long, default_value_t = 10_000_000)]
        cap: u64,
    },
    /// Generate a polytope.
    Gen {
        #[arg(long, value_parser = clap::value_parser!(Shape))]
        shape: Shape,
        /// Truncate these vertices, in order.
        #[arg(long)]
        truncate: Vec<usize>,
    },
    /// Heegaard genus numbers.
    Genus {
        #[arg(default_value = "-")]
        input: String,
    },
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<smallcover::Error>() {
        Some(err) if !err.is_input_error() => 2,
        _ => 1,
    }
}

struct Output {
    text: String,
    report: RunReport,
    code: u8,
}

fn describe_polytope(p: &Polytope, report: &mut RunReport) {
    let (f0, f1, f2) = p.f_vector();
    report.inputs.polytope = Some(sha256_hex(&p.to_json()));
    report.f_vector = Some([f0, f1, f2]);
    report.h_vector = Some(p.h_vector());
}

fn describe_instance(inst: &Instance, order: Option<&VertexOrder>, report: &mut RunReport) -> Result<()> {
    describe_polytope(&inst.polytope, report);
    if let Some(map) = &inst.colors {
        report.inputs.coloring = Some(sha256_hex(&map.to_json()));
        if validate_charmap(&inst.polytope, map)?.is_empty() {
            report.orientable = Some(is_orientable(&inst.polytope, map)?);
        }
    }
    if let Some(o) = order {
        report.inputs.order = Some(sha256_hex(&o.to_json()));
    }
    Ok(())
}

struct Built {
    presentation: Presentation,
    text: String,
    certificate: Option<Certificate>,
    report: PresentationReport,
}

fn build_presentation(inst: &Instance, method: Method, v0: usize, order: &VertexOrder, simplified: bool) -> Result<Built> {
    let p = &inst.polytope;
    let map = inst.charmap()?;
    let (presentation, text, certificate) = match method {
        Method::Cw => {
            let pres = cw_presentation(p, map, &SpanningTree::bfs(p))?;
            let text = pres.to_string();
            (pres, text, None)
        }
        Method::WuYu => {
            let pres = wu_yu_presentation(p, map, v0)?;
            let text = pres.to_string();
            (pres, text, None)
        }
        Method::Minimal => {
            let m = minimal_presentation(p, map, order)?;
            let text = m.to_text();
            (m.presentation, text, Some(m.certificate))
        }
    };
    let (presentation, text, capped) = if simplified {
        let s = simplify(&presentation, SimplifyLimits::default());
        let text = s.presentation.to_string();
        (s.presentation, text, Some(s.capped))
    } else {
        (presentation, text, None)
    };
    let report = PresentationReport {
        method: method.name().to_string(),
        generators: presentation.generator_count(),
        relators: presentation.relator_count(),
        total_length: presentation.total_length(),
        text: text.clone(),
        simplified: simplified.then_some(true),
        capped,
    };
    Ok(Built { presentation, text, certificate, report })
}

/// A presentation from either a presentation file or a cover.
fn presentation_source(args: &PresentArgs, report: &mut RunReport) -> Result<(Presentation, String)> {
    let loaded = load(&args.cover.input)?;
    if let Loaded::Presentation(pres) = loaded {
        report.inputs.presentation = Some(sha256_hex(&pres.to_string()));
        let pres = if args.simplify { simplify(&pres, SimplifyLimits::default()).presentation } else { pres };
        return Ok((pres, "file".to_string()));
    }
    let inst = Instance::from_loaded(loaded, &args.cover.input, args.cover.colors.as_deref(), args.cover.order.as_deref())?;
    let order = inst.order()?;
    describe_instance(&inst, Some(&order), report)?;
    let built = build_presentation(&inst, args.method, args.v0, &order, args.simplify)?;
    report.certificate = built.certificate;
    report.presentations.push(built.report);
    Ok((built.presentation, args.method.name().to_string()))
}

fn parse_targets(list: &str) -> Result<Vec<FiniteGroupTable>> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty()).map(|s| Ok(FiniteGroupTable::from_name(s)?)).collect()
}

fn hom_count(pres: &Presentation, h: &FiniteGroupTable, cap: u64) -> Result<Option<u64>> {
    match count_homs(pres, h, cap) {
        Ok(n) => Ok(Some(n)),
        Err(smallcover::Error::CapExceeded { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn show_count(c: Option<u64>) -> String {
    c.map_or_else(|| "over cap".to_string(), |n| n.to_string())
}

fn run(command: &Command) -> Result<Output> {
    let mut report = RunReport::default();
    let mut text = String::new();
    let mut code = 0;
    match command {
        Command::Validate(args) => {
            report.command = "validate".into();
            let inst = Instance::load(&args.input, args.colors.as_deref(), args.order.as_deref())?;
            let p = &inst.polytope;
            describe_polytope(p, &mut report);
            report.flag = Some(p.is_flag());
            report.pogorelov = Some(p.is_pogorelov());
            let (f0, f1, f2) = p.f_vector();
            let mut messages = vec![format!("polytope: ok, f = ({f0}, {f1}, {f2})")];
            let mut coloring_ok = None;
            if let Some(map) = &inst.colors {
                report.inputs.coloring = Some(sha256_hex(&map.to_json()));
                match validate_charmap(p, map) {
                    Ok(v) if v.is_empty() => {
                        let orientable = is_orientable(p, map)?;
                        report.orientable = Some(orientable);
                        let kind = if orientable { "orientable" } else { "nonorientable" };
                        messages.push(format!("coloring: ok, {kind}"));
                        coloring_ok = Some(true);
                    }
                    Ok(v) => {
                        messages.extend(v.iter().map(|x| format!("coloring: {x}")));
                        coloring_ok = Some(false);
                    }
                    Err(e) => {
                        messages.push(format!("coloring: {e}"));
                        coloring_ok = Some(false);
                    }
                }
            }
            let mut order_ok = None;
            if let Some(rank) = inst.explicit_order() {
                match VertexOrder::new(p, rank.to_vec()) {
                    Ok(o) => {
                        report.inputs.order = Some(sha256_hex(&o.to_json()));
                        messages.push("order: ok".into());
                        order_ok = Some(true);
                    }
                    Err(e) => {
                        messages.push(format!("order: {e}"));
                        order_ok = Some(false);
                    }
                }
            }
            if coloring_ok == Some(false) || order_ok == Some(false) {
                code = 1;
            }
            for m in &messages {
                writeln!(text, "{m}")?;
            }
            report.validation = Some(Validation { polytope: true, coloring: coloring_ok, order: order_ok, messages });
        }
        Command::Fvector { input } => {
            report.command = "fvector".into();
            let inst = Instance::load(input, None, None)?;
            describe_polytope(&inst.polytope, &mut report);
            let (f0, f1, f2) = inst.polytope.f_vector();
            let h = inst.polytope.h_vector();
            writeln!(text, "f = ({f0}, {f1}, {f2})")?;
            writeln!(text, "h = ({}, {}, {}, {})", h[0], h[1], h[2], h[3])?;
        }
        Command::Belts { input, k } => {
            report.command = "belts".into();
            let inst = Instance::load(input, None, None)?;
            describe_polytope(&inst.polytope, &mut report);
            let k = *k as usize;
            let belts = inst.polytope.find_belts(k)?;
            writeln!(text, "{} {k}-belts", belts.len())?;
            for b in &belts {
                writeln!(text, "{b}")?;
            }
            report.flag = Some(inst.polytope.is_flag());
            report.pogorelov = Some(inst.polytope.is_pogorelov());
            report.belts.push(BeltSummary { k, count: belts.len(), belts: belts.iter().map(|b| b.facets().to_vec()).collect() });
        }
        Command::Color { input } => {
            report.command = "color".into();
            let mut inst = Instance::load(input, None, None)?;
            let map = find_orientable_coloring(&inst.polytope)
                .ok_or_else(|| smallcover::Error::SearchFailed("no proper 4-coloring found".into()))?;
            inst.colors = Some(map);
            describe_instance(&inst, None, &mut report)?;
            let bundle = serde_json::to_value(inst.bundle(None))?;
            writeln!(text, "{}", serde_json::to_string(&bundle)?)?;
            report.output = Some(bundle);
        }
        Command::Present(args) => {
            report.command = "present".into();
            let inst = Instance::load(&args.cover.input, args.cover.colors.as_deref(), args.cover.order.as_deref())?;
            let order = inst.order()?;
            describe_instance(&inst, Some(&order), &mut report)?;
            let built = build_presentation(&inst, args.method, args.v0, &order, args.simplify)?;
            text = built.text;
            report.certificate = built.certificate;
            report.presentations.push(built.report);
        }
        Command::H1(args) => {
            report.command = "h1".into();
            let (pres, method) = presentation_source(args, &mut report)?;
            let h1 = abelianization(&pres)?;
            writeln!(text, "{h1}")?;
            report.invariants.push(InvariantsReport { method, rendered: h1.to_string(), abelian: h1 });
        }
        Command::Invariants { present, targets, cap } => {
            report.command = "invariants".into();
            let targets = parse_targets(targets)?;
            let (pres, method) = presentation_source(present, &mut report)?;
            let h1 = abelianization(&pres)?;
            writeln!(text, "H1 = {h1}")?;
            for h in &targets {
                let count = hom_count(&pres, h, *cap)?;
                writeln!(text, "|Hom(G, {})| = {}", h.name(), show_count(count))?;
                report.hom_counts.push(HomCount { method: method.clone(), target: h.name().to_string(), count });
            }
            report.invariants.push(InvariantsReport { method, rendered: h1.to_string(), abelian: h1 });
        }
        Command::Compare { cover, cap } => {
            report.command = "compare".into();
            let inst = Instance::load(&cover.input, cover.colors.as_deref(), cover.order.as_deref())?;
            let order = inst.order()?;
            describe_instance(&inst, Some(&order), &mut report)?;
            report.genus = Some(heegaard_report(&inst.polytope));
            let targets: Vec<FiniteGroupTable> = (1..=3).map(FiniteGroupTable::z2_power).collect();
            let mut agree = true;
            let mut first_h1 = None;
            let mut counts_seen: Vec<Option<u64>> = vec![None; targets.len()];
            for method in [Method::Cw, Method::WuYu, Method::Minimal] {
                let built = build_presentation(&inst, method, 0, &order, false)?;
                let h1 = abelianization(&built.presentation)?;
                let mut line = format!(
                    "{:<8} {:>3} generators {:>3} relators  H1 = {h1}",
                    method.name(),
                    built.presentation.generator_count(),
                    built.presentation.relator_count()
                );
                agree &= *first_h1.get_or_insert_with(|| h1.clone()) == h1;
                for (i, h) in targets.iter().enumerate() {
                    let count = hom_count(&built.presentation, h, *cap)?;
                    if let Some(n) = count {
                        agree &= *counts_seen[i].get_or_insert(n) == n;
                    }
                    write!(line, "  {}: {}", h.name(), show_count(count))?;
                    report.hom_counts.push(HomCount { method: method.name().into(), target: h.name().into(), count });
                }
                writeln!(text, "{line}")?;
                if built.certificate.is_some() {
                    report.certificate = built.certificate;
                }
                report.invariants.push(InvariantsReport {
                    method: method.name().into(),
                    rendered: h1.to_string(),
                    abelian: h1,
                });
                report.presentations.push(built.report);
            }
            if let Some(c) = &report.certificate {
                writeln!(text, "minimal elimination: {}", c.level())?;
            }
            writeln!(text, "agreement: {}", if agree { "yes" } else { "NO" })?;
            report.agreement = Some(agree);
            if !agree {
                code = 2;
            }
        }
        Command::Gen { shape, truncate } => {
            report.command = "gen".into();
            let mut p = Polytope::build(*shape)?;
            for &v in truncate {
                p = p.truncate_vertex(v)?;
            }
            describe_polytope(&p, &mut report);
            writeln!(text, "{}", p.to_json())?;
            report.output = Some(serde_json::to_value(p.to_file())?);
        }
        Command::Genus { input } => {
            report.command = "genus".into();
            let inst = Instance::load(input, None, None)?;
            describe_polytope(&inst.polytope, &mut report);
            let g = heegaard_report(&inst.polytope);
            writeln!(text, "canonical handlebodies: N^({}, {}) and N^({}, {})", g.dual_profile.0, g.dual_profile.1, g.skeleton_profile.0, g.skeleton_profile.1)?;
            writeln!(text, "canonical genus: {}", g.canonical_genus)?;
            writeln!(text, "reduced canonical genus: {}", g.reduced_canonical_genus)?;
            writeln!(text, "minimal genus: {}", g.minimal_genus)?;
            report.genus = Some(g);
        }
    }
    Ok(Output { text, report, code })
}

fn emit(cli: &Cli, content: &str) -> Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, content).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = (|| -> Result<u8> {
        if let Some(n) = cli.threads {
            if let Err(e) = smallcover::parallel::configure_threads(n) {
                bail!("--threads: {e}");
            }
        }
        let start = Instant::now();
        let mut out = run(&cli.command)?;
        if cli.timing {
            out.report.timing_ms = Some(start.elapsed().as_secs_f64() * 1000.0);
        }
        let content = if cli.json { serde_json::to_string_pretty(&out.report)? + "\n" } else { out.text };
        emit(&cli, &content)?;
        if cli.timing && !cli.json {
            eprintln!("time: {:.1} ms", start.elapsed().as_secs_f64() * 1000.0);
        }
        Ok(out.code)
    })();
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
