//! Loads and validates the shipped sweep presets.

use std::path::PathBuf;

use optomech::sweep::SweepConfig;
use optomech::Result;

pub fn presets_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

pub fn run_example() -> Result<Vec<(String, SweepConfig)>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(presets_dir())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let mut out = Vec::new();
    for p in paths {
        let cfg = SweepConfig::from_file(&p)?;
        let points: usize = cfg.axes.iter().map(|a| a.grid().map(|g| g.len()).unwrap_or(0)).product();
        let name = p.file_stem().unwrap().to_string_lossy().into_owned();
        println!("{name:<16} {:?} engine, {points} points, axes {:?}", cfg.engine, cfg.axes.iter().map(|a| &a.param).collect::<Vec<_>>());
        out.push((name, cfg));
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example().map(|_| ())
}
