//! The `udscene` command line: replay logs, validate documents, fuzz the
//! engine against its oracles, and time hit resolution.

pub mod fuzz;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use udscene::engine::{format_events, parse_events};
use udscene::geometry::Rect;
use udscene::testkit::{random_events, random_point, random_scene, SceneGen};
use udscene::{load_scene, save_scene, to_svg, Engine};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "udscene", version, about = "Headless driver for udscene scenes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply an event log to a scene and save the result.
    Replay {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        events: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also write an SVG snapshot of the result.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Check every invariant of a scene document.
    Validate {
        #[arg(long)]
        scene: PathBuf,
    },
    /// Run random scenes and logs against the oracles.
    Fuzz {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        iterations: u64,
        /// Where a minimised failing case is written.
        #[arg(long, default_value = "fuzz-repro")]
        repro_dir: PathBuf,
    },
    /// Measure hit resolution and event throughput.
    Bench {
        #[arg(long, default_value_t = 1000)]
        elements: usize,
        #[arg(long, default_value_t = 10_000)]
        events: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn read(path: &Path, err: &mut dyn Write) -> Result<String, i32> {
    fs::read_to_string(path).map_err(|e| {
        let _ = writeln!(err, "error: cannot read {}: {e}", path.display());
        EXIT_USAGE
    })
}

fn write_file(path: &Path, text: &str, err: &mut dyn Write) -> Result<(), i32> {
    fs::write(path, text).map_err(|e| {
        let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
        EXIT_USAGE
    })
}

pub fn run(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match command {
        Command::Replay { scene, events, out: target, svg } => replay(&scene, &events, &target, svg.as_deref(), out, err),
        Command::Validate { scene } => validate(&scene, out, err),
        Command::Fuzz { seed, iterations, repro_dir } => fuzz_cmd(seed, iterations, &repro_dir, out, err),
        Command::Bench { elements, events, seed } => bench(elements, events, seed, out),
    };
    result.unwrap_or_else(|code| code)
}

fn replay(
    scene: &Path,
    events: &Path,
    target: &Path,
    svg: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, i32> {
    let s = load_scene(&read(scene, err)?).map_err(|e| {
        let _ = writeln!(err, "error: {}: {e}", scene.display());
        EXIT_USAGE
    })?;
    let evs = parse_events(&read(events, err)?).map_err(|e| {
        let _ = writeln!(err, "error: {}: {e}", events.display());
        EXIT_USAGE
    })?;
    let result = udscene::replay(s, &evs).map_err(|e| {
        let _ = writeln!(err, "error: {}: {e}", events.display());
        EXIT_USAGE
    })?;
    write_file(target, &save_scene(&result), err)?;
    if let Some(svg) = svg {
        write_file(svg, &to_svg(&result), err)?;
    }
    let _ = writeln!(out, "replayed {} events onto {} elements -> {}", evs.len(), result.len(), target.display());
    Ok(EXIT_OK)
}

fn validate(scene: &Path, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, i32> {
    let text = read(scene, err)?;
    match load_scene(&text) {
        Ok(s) => {
            let violations = s.violations();
            if violations.is_empty() {
                let _ = writeln!(out, "ok: {} elements, {} groups, {} views", s.len(), s.groups().len(), s.views().len());
                Ok(EXIT_OK)
            } else {
                for v in &violations {
                    let _ = writeln!(out, "violation: {v}");
                }
                Ok(EXIT_FAILURE)
            }
        }
        Err(e) => {
            let _ = writeln!(out, "{e}");
            Ok(EXIT_FAILURE)
        }
    }
}

fn fuzz_cmd(seed: u64, iterations: u64, repro_dir: &Path, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, i32> {
    let _ = writeln!(out, "fuzz seed={seed} iterations={iterations}");
    let t0 = Instant::now();
    let report = fuzz::run(seed, iterations);
    let Some((i, scene, events, failure)) = report.failure else {
        let _ = writeln!(
            out,
            "ok: {iterations} iterations, {} events, {} hit checks in {:.2} s",
            report.stats.events,
            report.stats.hit_checks,
            t0.elapsed().as_secs_f64()
        );
        return Ok(EXIT_OK);
    };
    let _ = writeln!(out, "FAIL iteration {i}: {failure}");
    let fails = |s: &udscene::Scene, evs: &[udscene::PointerEvent]| fuzz::check_log(s, evs).err().map(|f| f.event);
    let small = fuzz::minimize(&scene, &events, fails);
    // The repro must fail on its own, starting from the saved document.
    let scene_text = save_scene(&scene);
    let reloaded = load_scene(&scene_text).expect("saved scenes load");
    let confirmed = fuzz::check_log(&reloaded, &small).err();
    fs::create_dir_all(repro_dir).map_err(|e| {
        let _ = writeln!(err, "error: cannot create {}: {e}", repro_dir.display());
        EXIT_USAGE
    })?;
    let stem = repro_dir.join(format!("fuzz-{seed}-{i}"));
    let scene_path = stem.with_extension("scene.json");
    let events_path = stem.with_extension("evt");
    write_file(&scene_path, &scene_text, err)?;
    write_file(&events_path, &format_events(&small), err)?;
    match confirmed {
        Some(f) => {
            let _ = writeln!(out, "minimised to {} of {} events: {f}", small.len(), events.len());
        }
        None => {
            let _ = writeln!(out, "warning: minimised log no longer fails after reload; writing it anyway");
        }
    }
    let _ = writeln!(out, "repro: {} {}", scene_path.display(), events_path.display());
    Ok(EXIT_FAILURE)
}

fn bench(elements: usize, events: usize, seed: u64, out: &mut dyn Write) -> Result<i32, i32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side = (elements.max(1) as f64).sqrt() * 120.0;
    let gen = SceneGen { elements, extent: Rect::from_coords(0.0, 0.0, side + 200.0, side + 200.0), ..SceneGen::default() };
    let scene = random_scene(&mut rng, &gen);
    let points: Vec<_> = (0..events).map(|_| random_point(&mut rng, &gen.extent)).collect();
    let log = random_events(&mut rng, &scene, events, &gen.extent);

    let mut engine = Engine::new(scene.clone());
    let t0 = Instant::now();
    let hits = points.iter().filter(|p| engine.pick(**p).is_some()).count();
    let pick_rate = events as f64 / t0.elapsed().as_secs_f64();

    let mut engine = Engine::new(scene);
    let t1 = Instant::now();
    for ev in &log {
        engine.handle(*ev).expect("generated logs are well formed");
    }
    let replay_rate = events as f64 / t1.elapsed().as_secs_f64();

    let _ = writeln!(out, "scene: {} elements", engine.scene().len());
    let _ = writeln!(out, "hit resolution: {pick_rate:.0} events/s ({hits} of {events} presses hit)");
    let _ = writeln!(out, "replay: {replay_rate:.0} events/s");
    Ok(EXIT_OK)
}
