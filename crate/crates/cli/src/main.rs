use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tdual_core::clifford::{parse_section, CliffordSection, SectionMap};
use tdual_core::cohomology::{cohomology_dims, twisted_cohomology_dims};
use tdual_core::fixtures::{self, Recipe};
use tdual_core::scenario::{parse_element, render_element, LoadedScenario, Loc, ScenarioFile};
use tdual_core::{DualityScenario, Error};

mod report;

/// Checks, transforms and constructs T-dual pairs of odd transgressive
/// fibrations.
#[derive(Parser)]
#[command(name = "tdual", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the base algebra axioms and that the scenario is well formed.
    Validate { scenario: String },
    /// Run the gerbe and nondegeneracy conditions; exit 0 iff T-dual.
    Check { scenario: String },
    /// Apply τ_F to a form.
    Transform {
        scenario: String,
        #[arg(long)]
        form: String,
        /// Source side of the transform.
        #[arg(long, value_enum, default_value_t = SideArg::E)]
        side: SideArg,
    },
    /// Print cohomology tables.
    Cohomology {
        scenario: String,
        #[arg(long)]
        twisted: bool,
        #[arg(long, value_enum, default_value_t = SideArg::E)]
        side: SideArg,
    },
    /// Derived brackets of sections and their images under 𝒯_F.
    Bracket {
        scenario: String,
        /// File of `name = X: … ; C: …` lines; defaults to the scenario's
        /// own sections block.
        #[arg(long)]
        sections: Option<PathBuf>,
    },
    /// Emit a scenario file from a constructive recipe.
    Construct {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(fixtures::RECIPES))]
        recipe: String,
        /// JSON parameters; defaults to the bundled parameter set.
        #[arg(long)]
        params: Option<PathBuf>,
        /// Print the parameters instead of running the recipe.
        #[arg(long)]
        print_params: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run every check on the given scenarios (all bundled ones by default).
    Report {
        scenarios: Vec<String>,
        /// Also emit JSON, to PATH or after the text report.
        #[arg(long, num_args = 0..=1, value_name = "PATH")]
        machine: Option<Option<PathBuf>>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    E,
    Ehat,
}

/// Failure with the exit code it maps to.
struct Fail {
    code: u8,
    msg: String,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail { code: 2, msg: e.to_string() }
    }
}

fn fail(code: u8, msg: impl Into<String>) -> Fail {
    Fail { code, msg: msg.into() }
}

/// Reads a scenario from a path, falling back to a bundled fixture name.
fn read_source(arg: &str) -> Result<(String, String), Fail> {
    let path = Path::new(arg);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| fail(2, format!("{arg}: {e}")))?;
        return Ok((arg.to_string(), text));
    }
    match fixtures::text(arg) {
        Some(t) => Ok((arg.trim_end_matches(".scn").to_string(), t.to_string())),
        None => Err(fail(2, format!("{arg}: no such file or bundled scenario"))),
    }
}

fn load(arg: &str) -> Result<LoadedScenario, Fail> {
    let (name, text) = read_source(arg)?;
    ScenarioFile::parse(&text)
        .and_then(|f| f.build())
        .map_err(|e| fail(2, format!("{name}: {e}")))
}

fn oriented(s: &DualityScenario, side: SideArg) -> Result<DualityScenario, Fail> {
    Ok(match side {
        SideArg::E => s.clone(),
        SideArg::Ehat => s.swap()?,
    })
}

fn validate(arg: &str) -> Result<(), Fail> {
    let (name, text) = read_source(arg)?;
    let file = ScenarioFile::parse(&text).map_err(|e| fail(2, format!("{name}: {e}")))?;
    let base = file.build_base().map_err(|e| fail(2, format!("{name}: {e}")))?;
    let report = base.validate();
    println!("{report}");
    if !report.is_valid() {
        return Err(fail(2, format!("{name}: base algebra is invalid")));
    }
    let loaded = file.build().map_err(|e| fail(2, format!("{name}: {e}")))?;
    let s = &loaded.scenario;
    println!("E: {} generators, dim {}", s.e().n_gens(), s.e().dim());
    println!("Ehat: {} generators, dim {}", s.ehat().n_gens(), s.ehat().dim());
    println!("sections: {}", loaded.sections.len());
    println!("valid");
    Ok(())
}

fn check(arg: &str) -> Result<(), Fail> {
    let s = load(arg)?.scenario;
    let v = s.check()?;
    let model = s.correspondence().model();
    if v.gerbe.holds {
        println!("gerbe trivialization: holds");
    } else {
        println!("gerbe trivialization: fails");
        println!("  residual dF - p*H + p̂*Ĥ = {}", render_element(model, &v.gerbe.residual));
    }
    let m = &v.nondegeneracy.matrix;
    println!(
        "nondegeneracy: {}x{} matrix, {}",
        m.rows(),
        m.cols(),
        if v.nondegeneracy.invertible { "invertible" } else { "singular" }
    );
    println!("{m}");
    if v.is_t_dual() {
        println!("T-dual");
        Ok(())
    } else {
        Err(fail(1, "not T-dual"))
    }
}

fn transform(arg: &str, form: &str, side: SideArg) -> Result<(), Fail> {
    let s = oriented(&load(arg)?.scenario, side)?;
    let x = parse_element(s.e(), form, Loc { line: 1, col: 1 })?;
    let y = s.tau(&x)?;
    println!("{}", render_element(s.ehat(), &y));
    Ok(())
}

fn cohomology(arg: &str, twisted: bool, side: SideArg) -> Result<(), Fail> {
    let s = oriented(&load(arg)?.scenario, side)?;
    if twisted {
        print!("{}", twisted_cohomology_dims(s.e(), s.h())?);
    } else {
        print!("{}", cohomology_dims(s.e()));
    }
    Ok(())
}

fn read_sections(s: &DualityScenario, path: &Path) -> Result<Vec<(String, CliffordSection)>, Fail> {
    let text = std::fs::read_to_string(path).map_err(|e| fail(2, format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (name, value) = line
            .split_once('=')
            .ok_or_else(|| fail(2, format!("{}:{}: expected `name = section`", path.display(), n + 1)))?;
        out.push((name.trim().to_string(), parse_section(s.e(), value, n + 1)?));
    }
    Ok(out)
}

fn bracket(arg: &str, sections: Option<&Path>) -> Result<(), Fail> {
    let loaded = load(arg)?;
    let s = &loaded.scenario;
    let sections = match sections {
        Some(p) => read_sections(s, p)?,
        None => loaded.sections.clone(),
    };
    if sections.is_empty() {
        return Err(fail(2, "no sections given"));
    }
    if !s.check()?.is_t_dual() {
        return Err(fail(1, "not T-dual; 𝒯_F is undefined"));
    }
    let map = SectionMap::new(s)?;
    let (src, dst) = (map.source(), map.target());
    for (name, v) in &sections {
        println!("T({name}) = {}", map.apply(v)?.render(dst.model()));
    }
    for (a, v) in &sections {
        for (b, w) in &sections {
            let vw = src.bracket(v, w)?;
            let image = map.apply(&vw)?;
            let direct = dst.bracket(&map.apply(v)?, &map.apply(w)?)?;
            let mark = if image == direct { "preserved" } else { "NOT preserved" };
            println!("[{a}, {b}] = {}   ({mark})", vw.render(src.model()));
        }
    }
    Ok(())
}

fn construct(recipe: &str, params: Option<&Path>, print_params: bool, output: Option<&Path>) -> Result<(), Fail> {
    let r = match params {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| fail(2, format!("{}: {e}", p.display())))?;
            Recipe::from_json(recipe, &text)?
        }
        None => Recipe::bundled(recipe).ok_or_else(|| fail(2, format!("unknown recipe `{recipe}`")))?,
    };
    let text = if print_params {
        r.to_json() + "\n"
    } else {
        let s = r.run().map_err(|e| fail(if e.is_precondition() { 3 } else { 2 }, e.to_string()))?;
        ScenarioFile::from_scenario(&s, &[]).render()
    };
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| fail(2, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Fail> {
    match cli.command {
        Command::Validate { scenario } => validate(&scenario),
        Command::Check { scenario } => check(&scenario),
        Command::Transform { scenario, form, side } => transform(&scenario, &form, side),
        Command::Cohomology { scenario, twisted, side } => cohomology(&scenario, twisted, side),
        Command::Bracket { scenario, sections } => bracket(&scenario, sections.as_deref()),
        Command::Construct { recipe, params, print_params, output } => {
            construct(&recipe, params.as_deref(), print_params, output.as_deref())
        }
        Command::Report { scenarios, machine } => {
            let names: Vec<String> =
                if scenarios.is_empty() { fixtures::names().map(String::from).collect() } else { scenarios };
            let sources = names.iter().map(|n| read_source(n)).collect::<Result<Vec<_>, _>>()?;
            let reports = report::run_all(&sources);
            for r in &reports {
                print!("{}", r.text());
            }
            if let Some(target) = machine {
                let json = serde_json::to_string_pretty(&report::to_json(&reports)).expect("report serializes");
                match target {
                    Some(p) => std::fs::write(&p, json + "\n").map_err(|e| fail(2, format!("{}: {e}", p.display())))?,
                    None => println!("{json}"),
                }
            }
            match reports.iter().map(|r| r.exit_code()).max().unwrap_or(0) {
                0 => Ok(()),
                code => Err(fail(code, "some scenarios failed")),
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("tdual: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
