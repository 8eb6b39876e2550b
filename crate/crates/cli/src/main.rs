use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use animalab::encoding::{decode_steps, encode};
use animalab::enumeration::{count_table, sweep_identity, verify_identity, AnimalKind, Identity};
use animalab::kernels::{enumerate_row, sample_transition, KernelKind};
use animalab::simlab::samplers::{
    sample_bhp, sample_bhp_ball, sample_uip_ball, sample_uip_minus_ball, sample_uip_plus_ball, sample_uip_plus_bluered,
    sample_uniform_half_pyramid, sample_uniform_pyramid, PyramidBallSampler, DEFAULT_BUDGET,
};
use animalab::simlab::{experiment, render_svg, ExperimentConfig, Format, Style};
use animalab::walks::{
    sample_excursion, sample_shaved_nonpos, sample_shaved_walk, sample_walk, sample_walk_nonneg, RngStream,
};
use animalab::{AdmissibleSet, Animal};

#[derive(Parser)]
#[command(name = "animalab", version, about = "Directed animals: samplers, kernels, exact counts")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Bhp,
    Uip,
    Uipm,
    Uipp,
    Bluered,
    Pyramid,
    Half,
    PyramidBall,
}

#[derive(Clone, Copy, ValueEnum)]
enum WalkChoice {
    Raw,
    Shaved,
    Excursion,
    Nonpos,
    Nonneg,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kernel {
    Bhp,
    Uip,
    Uipp,
}

impl From<Kernel> for KernelKind {
    fn from(k: Kernel) -> KernelKind {
        match k {
            Kernel::Bhp => KernelKind::Bhp,
            Kernel::Uip => KernelKind::Uip,
            Kernel::Uipp => KernelKind::UipPlus,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Pyramid,
    Half,
    Compact,
}

impl From<Kind> for AnimalKind {
    fn from(k: Kind) -> AnimalKind {
        match k {
            Kind::Pyramid => AnimalKind::Pyramid,
            Kind::Half => AnimalKind::HalfPyramid,
            Kind::Compact => AnimalKind::CompactSource,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Draw one animal (JSON, or SVG with --svg).
    Sample {
        #[arg(long, value_enum)]
        model: Model,
        /// Ball radius for the infinite models, or the BHP when given.
        #[arg(long)]
        r: Option<i64>,
        /// Size for uniform pyramids.
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        window: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, value_enum)]
        svg: Option<StyleArg>,
    },
    /// Draw a walk trajectory.
    Walk {
        #[arg(long, value_enum)]
        kind: WalkChoice,
        /// Length, or depth for the non-positive walk.
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print a transition row, or sample the layer chain.
    Kernel {
        #[arg(long, value_enum)]
        model: Kernel,
        /// Comma-separated elements of the current layer.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        source: Vec<i64>,
        /// Sample this many successive layers instead of printing the row.
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact counts by size.
    Count {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n_max: usize,
    },
    /// Check an identity given as JSON, or sweep random instances.
    Verify {
        /// e.g. '{"identity":"jolie","n":10}'
        json: Option<String>,
        #[arg(long)]
        sweep: Option<String>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a Monte Carlo experiment.
    Experiment {
        /// JSON config file; other flags except --output are ignored when given.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        name: Option<String>,
        #[arg(long, value_enum)]
        model: Option<Kernel>,
        #[arg(long)]
        r: Option<i64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        params: Vec<i64>,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        streams: u64,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Render an animal read as JSON from a file or stdin.
    Render {
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "squares")]
        style: StyleArg,
        /// Colour by encoding order, blue to red.
        #[arg(long)]
        color: bool,
    },
    /// Encoding path of an animal read as JSON.
    Encode { input: Option<PathBuf> },
    /// Animal of a comma-separated path.
    Decode {
        #[arg(value_delimiter = ',', allow_hyphen_values = true)]
        path: Vec<i64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StyleArg {
    Squares,
    Dominoes,
}

impl From<StyleArg> for Style {
    fn from(s: StyleArg) -> Style {
        match s {
            StyleArg::Squares => Style::Squares,
            StyleArg::Dominoes => Style::Dominoes,
        }
    }
}

fn read_input(p: Option<PathBuf>) -> Result<String> {
    match p {
        Some(p) => std::fs::read_to_string(&p).with_context(|| format!("reading {}", p.display())),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

/// Writes to stdout; a reader that hung up (`| head`) is not an error.
fn out(s: &str) -> Result<()> {
    match std::io::stdout().lock().write_all(s.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn json<T: serde::Serialize>(v: &T) -> Result<()> {
    out(&(serde_json::to_string_pretty(v)? + "\n"))
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Sample { model, r, n, window, seed, budget, svg } => {
            let mut rng = RngStream::new(seed, 0);
            let radius = r.unwrap_or(2);
            let a: Animal = match model {
                Model::Bhp => match r {
                    Some(r) => sample_bhp_ball(r, &mut rng),
                    None => sample_bhp(&mut rng)?,
                },
                Model::Uip => sample_uip_ball(radius, &mut rng),
                Model::Uipm => sample_uip_minus_ball(radius, &mut rng)?,
                Model::Uipp => sample_uip_plus_ball(radius, &mut rng)?,
                Model::Bluered => sample_uip_plus_bluered(radius, &mut rng).ball,
                Model::Pyramid => sample_uniform_pyramid(n, budget, &mut rng)?,
                Model::Half => sample_uniform_half_pyramid(n, window, budget, &mut rng)?,
                Model::PyramidBall => PyramidBallSampler::new(n, radius).sample(budget, &mut rng)?.0,
            };
            match svg {
                Some(s) => out(&render_svg(&a, s.into(), true))?,
                None => json(&a)?,
            }
        }
        Cmd::Walk { kind, n, seed } => {
            let mut rng = RngStream::new(seed, 0);
            let t = match kind {
                WalkChoice::Raw => sample_walk(n, &mut rng),
                WalkChoice::Shaved => sample_shaved_walk(n, &mut rng),
                WalkChoice::Excursion => sample_excursion(&mut rng)?,
                WalkChoice::Nonpos => sample_shaved_nonpos(n as i64, &mut rng)?,
                WalkChoice::Nonneg => sample_walk_nonneg(n, &mut rng),
            };
            json(&t)?;
        }
        Cmd::Kernel { model, source, steps, seed } => {
            let a = AdmissibleSet::from_unsorted(source)?;
            match steps {
                None => json(&enumerate_row(model.into(), &a)?)?,
                Some(k) => {
                    let mut rng = RngStream::new(seed, 0);
                    let mut layers = vec![a.elems().to_vec()];
                    let mut cur = a;
                    for _ in 0..k {
                        let next = sample_transition(model.into(), &cur, &mut rng)?;
                        layers.push(next.elems().to_vec());
                        match next.as_set() {
                            Some(s) => cur = s.clone(),
                            None => break,
                        }
                    }
                    json(&layers)?;
                }
            }
        }
        Cmd::Count { kind, n_max } => json(&count_table(kind.into(), n_max))?,
        Cmd::Verify { json: identity, sweep, trials, seed } => {
            let rep = match (identity, sweep) {
                (Some(s), None) => verify_identity(&serde_json::from_str::<Identity>(&s)?),
                (None, Some(name)) => sweep_identity(&name, trials, seed),
                _ => bail!("give either an identity as JSON or --sweep NAME"),
            };
            json(&rep)?;
            return Ok(rep.holds);
        }
        Cmd::Experiment { config, name, model, r, params, trials, seed, streams, json: as_json, output } => {
            let mut cfg: ExperimentConfig = match config {
                Some(p) => serde_json::from_str(&read_input(Some(p))?)?,
                None => {
                    let Some(name) = name else { bail!("give --config or --name") };
                    let mut c = ExperimentConfig::new(&name, trials, seed);
                    c.model = model.map(Into::into);
                    c.r = r;
                    c.params = params;
                    c.streams = streams;
                    c.format = if as_json { Format::Json } else { Format::Csv };
                    c
                }
            };
            if output.is_some() {
                cfg.output = output;
            }
            let rep = experiment(&cfg)?;
            let text = rep.render();
            match &cfg.output {
                Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
                None => out(&text)?,
            }
            for n in &rep.notes {
                eprintln!("note: {n}");
            }
        }
        Cmd::Render { input, style, color } => {
            let a: Animal = serde_json::from_str(&read_input(input)?)?;
            out(&render_svg(&a, style.into(), color))?;
        }
        Cmd::Encode { input } => {
            let a: Animal = serde_json::from_str(&read_input(input)?)?;
            json(&encode(&a).steps())?;
        }
        Cmd::Decode { path } => json(&decode_steps(&path)?)?,
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
