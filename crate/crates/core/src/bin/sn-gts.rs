use std::io::IsTerminal;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sn_gts::bag::Colour;
use sn_gts::calculus::oracle::relation_oracle;
use sn_gts::calculus::{Calculus, RelationKind};
use sn_gts::engine::{build_rg, enabled_instances, fire, Enumeration, Instance, RgOptions};
use sn_gts::export;
use sn_gts::frontend::{parse_graph_in, parse_instance, parse_model_with, Model, ParseOptions};
use sn_gts::gts::{self, check_rules, decode, encode, GraphPlaces};
use sn_gts::model::Net;
use sn_gts::symbolic::{build_srg, to_symbolic};

#[derive(Parser)]
#[command(name = "sn-gts", version, about = "Graph transformation systems as Symmetric Nets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Model file.
    model: PathBuf,
    /// Overrides the size of class N.
    #[arg(long)]
    size: Option<u32>,
    /// Initial graph file, replacing the model's marking.
    #[arg(long)]
    graph: Option<PathBuf>,
}

#[derive(Args)]
struct Space {
    #[arg(long)]
    dot: Option<PathBuf>,
    /// JSON lines output.
    #[arg(long)]
    json: Option<PathBuf>,
    /// State cap.
    #[arg(long, default_value_t = 1_000_000)]
    cap: usize,
    /// Worker threads, 0 for all cores.
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Well-definedness conditions of every rule.
    Check {
        #[command(flatten)]
        input: Input,
    },
    /// Ordinary reachability graph.
    Rg {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        space: Space,
    },
    /// Symbolic reachability graph.
    Srg {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        space: Space,
    },
    /// Structural relation between two transitions: sc, scc or sme.
    Rel {
        #[command(flatten)]
        input: Input,
        kind: RelationKind,
        t: String,
        t2: String,
        /// Lists the related instances at this class size.
        #[arg(long)]
        enumerate: Option<u32>,
    },
    /// Fires instances such as `R1(nd4,nd1,nd2)` in order from the initial marking.
    Fire {
        #[command(flatten)]
        input: Input,
        instances: Vec<String>,
    },
}

enum Failure {
    Check(String),
    Usage(String),
    Truncated(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Truncated(_) => 3,
        }
    }
}

type Run = Result<(), Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

struct Style {
    color: bool,
}

impl Style {
    fn from_env() -> Style {
        let color = match std::env::var("SN_GTS_COLOR").as_deref() {
            Ok("never") => false,
            _ => std::io::stdout().is_terminal(),
        };
        Style { color }
    }

    fn paint(&self, ok: bool, text: &str) -> String {
        if self.color {
            format!("\x1b[{}m{}\x1b[0m", if ok { 32 } else { 31 }, text)
        } else {
            text.to_string()
        }
    }
}

fn load(input: &Input) -> Result<Model, Failure> {
    let text = std::fs::read_to_string(&input.model).map_err(|e| usage(format!("{}: {}", input.model.display(), e)))?;
    let mut options = ParseOptions { file: Some(input.model.display().to_string()), ..ParseOptions::default() };
    if let Some(n) = input.size {
        options.class_sizes.insert("N".into(), n);
    }
    let mut model = parse_model_with(&text, &options).map_err(usage)?;
    if let Some(path) = &input.graph {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {}", path.display(), e)))?;
        let g = parse_graph_in(&text, Some(&path.display().to_string())).map_err(usage)?;
        model.initial = encode(&model.net, &g).map_err(usage)?;
    }
    Ok(model)
}

fn write(path: &Path, text: &str) -> Run {
    std::fs::write(path, text).map_err(|e| usage(format!("{}: {}", path.display(), e)))
}

fn options(net: &Net, space: &Space) -> RgOptions {
    let base = if GraphPlaces::of(net).is_ok() { gts::rg_options() } else { RgOptions::default() };
    RgOptions { cap: space.cap, workers: space.workers, ..base }
}

fn check(input: &Input, style: &Style) -> Run {
    let model = load(input)?;
    let reports = check_rules(&model.net).map_err(usage)?;
    for r in &reports {
        println!("{}", r.rule);
        for c in &r.conditions {
            let verdict = style.paint(c.holds, if c.holds { "ok" } else { "FAIL" });
            match &c.witness {
                Some(w) => println!("  condition {}: {}  {}", c.number, verdict, w),
                None => println!("  condition {}: {}", c.number, verdict),
            }
        }
        println!("  NA = {}", r.na_text);
    }
    if let Ok(warnings) = gts::lint(&model.net, &model.initial) {
        for w in warnings {
            eprintln!("warning: {}", w);
        }
    }
    let failing = reports.iter().filter(|r| !r.passes()).count();
    if failing == 0 {
        println!("{} rules, all well defined", reports.len());
        Ok(())
    } else {
        Err(Failure::Check(format!("{} of {} rules ill-defined", failing, reports.len())))
    }
}

fn rg(input: &Input, space: &Space) -> Run {
    let model = load(input)?;
    let net = &model.net;
    let rg = build_rg(net, &model.initial, &options(net, space)).map_err(|e| Failure::Check(e.to_string()))?;
    let dead = rg.dead_states();
    println!("{} states, {} dead", rg.state_count(), dead.len());
    println!("{} edges", rg.edge_count());
    for s in &dead {
        println!("dead s{}: {}", s, rg.states[*s].display(net));
    }
    if let Some(p) = &space.dot {
        write(p, &export::rg_dot(net, &rg))?;
    }
    if let Some(p) = &space.json {
        write(p, &export::rg_json(net, &rg))?;
    }
    if rg.truncated {
        return Err(Failure::Truncated(format!("state cap {} reached; output is partial", space.cap)));
    }
    Ok(())
}

fn srg(input: &Input, space: &Space) -> Run {
    let model = load(input)?;
    let net = &model.net;
    let srg = build_srg(net, &model.initial, &options(net, space)).map_err(|e| match e {
        sn_gts::symbolic::SrgError::Symbolic(e) => usage(e),
        e => Failure::Check(e.to_string()),
    })?;
    let dead = srg.dead_states();
    println!("{} states ({} + {} absorbing)", srg.state_count(), srg.state_count() - dead.len(), dead.len());
    let folds: Vec<usize> = srg.edges.iter().map(|e| e.fold).collect();
    match (folds.iter().min(), folds.iter().max()) {
        (Some(lo), Some(hi)) => println!(
            "{} edges folding {} instances, {} to {} each",
            srg.edge_count(),
            folds.iter().sum::<usize>(),
            lo,
            hi
        ),
        _ => println!("0 edges"),
    }
    for s in &dead {
        let sm = to_symbolic(net, &srg.states[*s]).map_err(usage)?;
        println!("absorbing s{}: {}", s, sm.display(net));
    }
    if let Some(p) = &space.dot {
        write(p, &export::srg_dot(net, &srg))?;
    }
    if let Some(p) = &space.json {
        write(p, &export::srg_json(net, &srg))?;
    }
    if srg.truncated {
        return Err(Failure::Truncated(format!("state cap {} reached; output is partial", space.cap)));
    }
    Ok(())
}

fn rel(input: &Input, kind: RelationKind, t: &str, t2: &str, enumerate: Option<u32>) -> Run {
    let model = load(input)?;
    let net = &model.net;
    let id = |name: &str| net.transition_id(name).ok_or_else(|| usage(format!("unknown transition {}", name)));
    let (a, b) = (id(t)?, id(t2)?);
    let calc = Calculus::new(net).map_err(usage)?;
    let r = calc.relation(kind, a, b).map_err(usage)?;
    println!("{}", r.display(&calc));
    let Some(n) = enumerate else { return Ok(()) };
    let mut builder = net.clone().into_builder();
    builder.class_mut(calc.class()).size = n;
    let sized = builder.build().map_err(usage)?;
    let net = &sized;
    let concrete = relation_oracle(net, kind, a, b).map_err(usage)?;
    let mut agree = true;
    for (y, xs) in &concrete {
        let labels: Vec<String> = xs.iter().map(|x| net.instance_label(a, x)).collect();
        println!("  {} : {}", net.instance_label(b, y), if labels.is_empty() { "-".into() } else { labels.join(", ") });
        let yi: Vec<u32> = y.iter().map(|c| c.index).collect();
        for x in net.bindings(a) {
            let xi: Vec<u32> = x.iter().map(|c: &Colour| c.index).collect();
            agree &= (r.term.eval(&yi, &xi, n) > 0) == xs.contains(&x);
        }
    }
    if agree {
        println!("term agrees with the enumeration at |N| = {}", n);
        Ok(())
    } else {
        Err(Failure::Check(format!("term disagrees with the enumeration at |N| = {}", n)))
    }
}

fn show(net: &Net, m: &sn_gts::model::Marking) {
    match decode(net, m) {
        Ok(g) => print!("{}", g),
        Err(_) => println!("{}", m.display(net)),
    }
}

fn fire_all(input: &Input, instances: &[String]) -> Run {
    let model = load(input)?;
    let net = &model.net;
    let mut m = model.initial.clone();
    show(net, &m);
    for text in instances {
        let i: Instance = parse_instance(text, net).map_err(usage)?;
        m = fire(net, &m, &i).map_err(|e| Failure::Check(e.to_string()))?;
        println!("-- {}", i.label(net));
        show(net, &m);
    }
    let enabled = enabled_instances(net, &m, Enumeration::Matching).map_err(|e| Failure::Check(e.to_string()))?;
    let labels: Vec<String> = enabled.iter().map(|i| i.label(net)).collect();
    println!("enabled: {}", if labels.is_empty() { "none".into() } else { labels.join(" ") });
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let style = Style::from_env();
    let result = match &cli.command {
        Command::Check { input } => check(input, &style),
        Command::Rg { input, space } => rg(input, space),
        Command::Srg { input, space } => srg(input, space),
        Command::Rel { input, kind, t, t2, enumerate } => rel(input, *kind, t, t2, *enumerate),
        Command::Fire { input, instances } => fire_all(input, instances),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Check(m) | Failure::Usage(m) | Failure::Truncated(m)) = &f;
            eprintln!("sn-gts: {}", m);
            ExitCode::from(f.code())
        }
    }
}
