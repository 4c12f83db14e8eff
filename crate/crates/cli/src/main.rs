use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use puzzles_core::bench::{evaluate, optimal_upper_bound, BenchError, PolicySpec};
use puzzles_core::env::{Env, EnvConfig, EnvError, ObsType, DEFAULT_MAX_STEPS};
use puzzles_core::observation::Observation;
use puzzles_core::protocol;
use puzzles_core::puzzles::{Action, PuzzleId};
use puzzles_core::raster::DEFAULT_PIXEL_SIZE;
use puzzles_core::rng::Rng;

#[derive(Parser)]
#[command(name = "puzzles", version, about = "Headless logic-puzzle environments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Target {
    /// Puzzle id, e.g. `flood` or `samegame`.
    #[arg(long)]
    puzzle: String,
    /// Parameter string, e.g. `3x3c6m5` or `4x4#42`.
    #[arg(long)]
    params: String,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a policy over many seeded episodes.
    Bench {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 1000)]
        episodes: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: u32,
        /// `random`, `random-masked` or `script:<file>`.
        #[arg(long, default_value = "random")]
        policy: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "state")]
        obs: String,
        #[arg(long, default_value_t = DEFAULT_PIXEL_SIZE)]
        pixel_size: usize,
        /// Truncate on the K+1-th visit of any state.
        #[arg(long)]
        early_term: Option<u32>,
        /// Include per-episode records in the report.
        #[arg(long)]
        records: bool,
        /// Report path; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the reference optimal step bound.
    Optimal {
        #[command(flatten)]
        target: Target,
    },
    /// Step through an instance by typing action names.
    Play {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Emit generated instances as JSON lines.
    Gen {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Serve the line protocol on stdio or TCP.
    Serve {
        #[arg(long)]
        listen: Option<String>,
    },
    /// Write the pixel observation of an instance as PNG.
    Render {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_PIXEL_SIZE)]
        size: usize,
        /// Actions applied before rendering, comma separated.
        #[arg(long, value_delimiter = ',')]
        actions: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    Config(String),
    Runtime(String),
}

impl From<EnvError> for Failure {
    fn from(e: EnvError) -> Self {
        match e {
            EnvError::Generation(_) | EnvError::NotReset | EnvError::EpisodeOver => Failure::Runtime(e.to_string()),
            _ => Failure::Config(e.to_string()),
        }
    }
}

impl From<BenchError> for Failure {
    fn from(e: BenchError) -> Self {
        match e {
            BenchError::Env(e) => e.into(),
            BenchError::EmptyMask => Failure::Runtime(e.to_string()),
            _ => Failure::Config(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn config(target: &Target) -> Result<EnvConfig, Failure> {
    let puzzle: PuzzleId = target.puzzle.parse().map_err(|e| Failure::Config(format!("{e}")))?;
    Ok(EnvConfig::new(puzzle, &target.params)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Bench { target, episodes, max_steps, policy, seed, obs, pixel_size, early_term, records, out } => {
            let mut cfg = config(&target)?
                .with_max_steps(Some(max_steps))
                .with_repeat_threshold(early_term)
                .with_base_seed(seed)
                .with_obs(obs.parse::<ObsType>().map_err(Failure::Config)?);
            cfg.pixel_size = pixel_size;
            cfg.validate()?;
            let spec = PolicySpec::parse(&policy)?;
            let (stats, recs) = evaluate(&cfg, &spec, episodes, seed)?;
            let mut report = json!({
                "config": {
                    "puzzle": cfg.puzzle.name(),
                    "params": target.params,
                    "episodes": episodes,
                    "max_steps": max_steps,
                    "policy": policy,
                    "seed": seed,
                    "obs": obs,
                    "early_term": early_term,
                },
                "stats": stats,
            });
            if records {
                report["records"] = json!(recs);
            }
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            match out {
                Some(path) => std::fs::write(path, text + "\n")?,
                None => println!("{text}"),
            }
            Ok(())
        }
        Command::Optimal { target } => {
            let puzzle: PuzzleId = target.puzzle.parse().map_err(|e| Failure::Config(format!("{e}")))?;
            println!("{}", optimal_upper_bound(puzzle, &target.params)?);
            Ok(())
        }
        Command::Play { target, seed } => play(config(&target)?, seed),
        Command::Gen { target, count, seed } => {
            let cfg = config(&target)?;
            let env = Env::new(cfg.clone())?;
            let stdout = io::stdout();
            let mut out = stdout.lock();
            for i in 0..count {
                let s = cfg.fixed_seed.unwrap_or(seed.wrapping_add(i));
                let state = env.puzzle().generate(&mut Rng::seed_from_u64(s)).map_err(EnvError::from)?;
                let line = json!({
                    "seed": s,
                    "instance": state,
                    "observation": env.puzzle().encode_state(&state),
                });
                writeln!(out, "{line}")?;
            }
            Ok(())
        }
        Command::Serve { listen } => {
            match listen {
                Some(addr) => protocol::serve_tcp(addr)?,
                None => protocol::serve(io::stdin().lock(), io::stdout().lock())?,
            }
            Ok(())
        }
        Command::Render { target, seed, size, actions, out } => {
            let mut cfg = config(&target)?.with_obs(ObsType::Pixels).with_max_steps(None);
            cfg.pixel_size = size;
            let mut env = Env::new(cfg)?;
            let (mut obs, _) = env.reset(Some(seed))?;
            for name in &actions {
                let idx = action_index(env.puzzle().actions(), name).map_err(Failure::Config)?;
                let r = env.step(idx)?;
                obs = r.observation;
                if r.terminated || r.truncated {
                    break;
                }
            }
            let Observation::Pixels(p) = obs else { unreachable!("pixel config") };
            image::save_buffer(&out, &p.to_rgb_interleaved(), size as u32, size as u32, image::ColorType::Rgb8)
                .map_err(|e| Failure::Runtime(e.to_string()))?;
            Ok(())
        }
    }
}

fn action_index(actions: &[Action], name: &str) -> Result<usize, String> {
    let a: Action = name.parse()?;
    actions
        .iter()
        .position(|b| *b == a)
        .ok_or_else(|| format!("action {} not available here", a.name()))
}

fn play(cfg: EnvConfig, seed: u64) -> Result<(), Failure> {
    let mut env = Env::new(cfg.with_max_steps(None))?;
    env.reset(Some(seed))?;
    let names: Vec<&str> = env.puzzle().actions().iter().map(|a| a.name()).collect();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let show = |env: &Env, out: &mut dyn Write| -> io::Result<()> {
        let state = env.state().expect("reset");
        writeln!(out, "{}", env.puzzle().ascii(state))
    };
    show(&env, &mut out)?;
    writeln!(out, "actions: {}", names.join(" "))?;
    for line in io::stdin().lock().lines() {
        let line = line?;
        let word = line.trim();
        if word.is_empty() {
            continue;
        }
        if word.eq_ignore_ascii_case("quit") || word.eq_ignore_ascii_case("q") {
            break;
        }
        let idx = match action_index(env.puzzle().actions(), word) {
            Ok(i) => i,
            Err(e) => {
                writeln!(out, "? {e}")?;
                continue;
            }
        };
        let r = env.step(idx)?;
        show(&env, &mut out)?;
        writeln!(out, "step {} reward {} status {:?}", r.info.step_count, r.reward, r.info.status)?;
        if r.terminated || r.truncated {
            break;
        }
    }
    Ok(())
}
