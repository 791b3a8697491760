//! Flat key=value run configuration with command-line overrides.
//!
//! The format is deliberately parser-free and diff-friendly: one `key =
//! value` pair per line, `#` comments. Unknown keys are rejected, and a
//! config round-trips exactly through `to_kv_string`.

use anyhow::{bail, Context, Result};
use std::path::PathBuf;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunConfig {
    pub command: Option<String>,
    pub d: Option<usize>,
    pub n: Option<u64>,
    pub policy: Option<String>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub leb_tol: Option<f64>,
    pub trials: Option<u64>,
    pub k: Option<u32>,
    pub r: Option<u32>,
    pub ball: Option<bool>,
    pub exhaustive: Option<bool>,
    pub csv: Option<PathBuf>,
    pub render: Option<PathBuf>,
    pub snapshot: Option<PathBuf>,
    pub snapshot_interval: Option<u64>,
    pub resume: Option<PathBuf>,
    /// "log" for half-decade checkpoints, or a comma-separated list.
    pub checkpoints: Option<String>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .with_context(|| format!("line {}: expected key = value", lineno + 1))?;
            let (key, value) = (key.trim(), value.trim());
            let ctx = || format!("line {}: bad value for {key}", lineno + 1);
            match key {
                "command" => cfg.command = Some(value.to_string()),
                "d" => cfg.d = Some(value.parse().with_context(ctx)?),
                "n" => cfg.n = Some(value.parse().with_context(ctx)?),
                "policy" => cfg.policy = Some(value.to_string()),
                "seed" => cfg.seed = Some(value.parse().with_context(ctx)?),
                "tol" => cfg.tol = Some(value.parse().with_context(ctx)?),
                "leb-tol" => cfg.leb_tol = Some(value.parse().with_context(ctx)?),
                "trials" => cfg.trials = Some(value.parse().with_context(ctx)?),
                "k" => cfg.k = Some(value.parse().with_context(ctx)?),
                "r" => cfg.r = Some(value.parse().with_context(ctx)?),
                "ball" => cfg.ball = Some(value.parse().with_context(ctx)?),
                "exhaustive" => cfg.exhaustive = Some(value.parse().with_context(ctx)?),
                "csv" => cfg.csv = Some(PathBuf::from(value)),
                "render" => cfg.render = Some(PathBuf::from(value)),
                "snapshot" => cfg.snapshot = Some(PathBuf::from(value)),
                "snapshot-interval" => {
                    cfg.snapshot_interval = Some(value.parse().with_context(ctx)?)
                }
                "resume" => cfg.resume = Some(PathBuf::from(value)),
                "checkpoints" => cfg.checkpoints = Some(value.to_string()),
                other => bail!("unknown config key `{other}` (line {})", lineno + 1),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &PathBuf) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        RunConfig::parse(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn to_kv_string(&self) -> String {
        let mut out = String::new();
        let mut put = |key: &str, value: Option<String>| {
            if let Some(v) = value {
                out.push_str(key);
                out.push_str(" = ");
                out.push_str(&v);
                out.push('\n');
            }
        };
        put("command", self.command.clone());
        put("d", self.d.map(|v| v.to_string()));
        put("n", self.n.map(|v| v.to_string()));
        put("policy", self.policy.clone());
        put("seed", self.seed.map(|v| v.to_string()));
        put("tol", self.tol.map(|v| v.to_string()));
        put("leb-tol", self.leb_tol.map(|v| v.to_string()));
        put("trials", self.trials.map(|v| v.to_string()));
        put("k", self.k.map(|v| v.to_string()));
        put("r", self.r.map(|v| v.to_string()));
        put("ball", self.ball.map(|v| v.to_string()));
        put("exhaustive", self.exhaustive.map(|v| v.to_string()));
        put("csv", self.csv.as_ref().map(|v| v.display().to_string()));
        put("render", self.render.as_ref().map(|v| v.display().to_string()));
        put("snapshot", self.snapshot.as_ref().map(|v| v.display().to_string()));
        put("snapshot-interval", self.snapshot_interval.map(|v| v.to_string()));
        put("resume", self.resume.as_ref().map(|v| v.display().to_string()));
        put("checkpoints", self.checkpoints.clone());
        out
    }

    /// Lays `overrides` on top of `self`: present fields win.
    pub fn merge_over(mut self, overrides: RunConfig) -> RunConfig {
        macro_rules! take {
            ($($f:ident),*) => { $( if overrides.$f.is_some() { self.$f = overrides.$f; } )* };
        }
        take!(
            command, d, n, policy, seed, tol, leb_tol, trials, k, r, ball, exhaustive, csv,
            render, snapshot, snapshot_interval, resume, checkpoints
        );
        self
    }

    /// Half-decade checkpoint list up to n (always including n), or the
    /// explicit comma list from the config.
    pub fn checkpoint_list(&self, n: u64) -> Result<Vec<u64>> {
        let mut pts = Vec::new();
        match self.checkpoints.as_deref() {
            None | Some("log") => {
                let mut exp = 2.0f64;
                loop {
                    let v = 10f64.powf(exp).round() as u64;
                    if v >= n {
                        break;
                    }
                    if v >= 1 {
                        pts.push(v);
                    }
                    exp += 0.5;
                }
            }
            Some("none") => {}
            Some(list) => {
                for tok in list.split(',') {
                    let v: u64 =
                        tok.trim().parse().with_context(|| format!("bad checkpoint {tok}"))?;
                    if v <= n {
                        pts.push(v);
                    }
                }
            }
        }
        pts.push(n);
        pts.sort_unstable();
        pts.dedup();
        Ok(pts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let cfg = RunConfig {
            command: Some("aggregate".into()),
            d: Some(2),
            n: Some(1000),
            policy: Some("nesw".into()),
            seed: Some(42),
            tol: Some(1e-10),
            leb_tol: Some(1e-6),
            trials: None,
            k: None,
            r: None,
            ball: Some(true),
            exhaustive: None,
            csv: Some(PathBuf::from("out/curve.csv")),
            render: None,
            snapshot: Some(PathBuf::from("run.rrl")),
            snapshot_interval: Some(500),
            resume: None,
            checkpoints: Some("log".into()),
        };
        let text = cfg.to_kv_string();
        assert_eq!(RunConfig::parse(&text).unwrap(), cfg);
    }

    #[test]
    fn unknown_key_rejected() {
        let err = RunConfig::parse("bogus = 1\n").unwrap_err();
        assert!(err.to_string().contains("bogus"));
    }

    #[test]
    fn comments_and_blanks() {
        let cfg = RunConfig::parse("# run\n\nn = 5 # five\n").unwrap();
        assert_eq!(cfg.n, Some(5));
    }

    #[test]
    fn merge_prefers_overrides() {
        let base = RunConfig::parse("n = 5\nd = 2\n").unwrap();
        let over = RunConfig { n: Some(9), ..Default::default() };
        let merged = base.merge_over(over);
        assert_eq!(merged.n, Some(9));
        assert_eq!(merged.d, Some(2));
    }

    #[test]
    fn checkpoints_log_and_list() {
        let cfg = RunConfig::default();
        assert_eq!(cfg.checkpoint_list(100_000).unwrap(), vec![100, 316, 1000, 3162, 10000, 31623, 100000]);
        let cfg = RunConfig { checkpoints: Some("316,400".into()), ..Default::default() };
        assert_eq!(cfg.checkpoint_list(400).unwrap(), vec![316, 400]);
        let cfg = RunConfig { checkpoints: Some("none".into()), ..Default::default() };
        assert_eq!(cfg.checkpoint_list(50).unwrap(), vec![50]);
    }
}
