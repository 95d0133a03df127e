//! Command-line front end: builds the ladder, runs the check suite, writes
//! growth tables, renders escape grids and estimates box dimensions.
//!
//! Exit codes: 0 success, 1 check failures, 2 configuration or validation
//! errors, 3 degenerate data.

pub mod commands;
pub mod config;

pub use commands::{execute, Command, Failure};
pub use config::{RunConfig, FORMAT_VERSION};

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "transcend", version, about = "Infinite-product entire functions: ladder, checks, dynamics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArg,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum CommandArg {
    /// Build the radius ladder and write construction.json.
    Construct,
    /// Run the full check suite and write report.json.
    Verify,
    /// Write growth.csv with the order-of-growth surrogates.
    Growth,
    /// Render the escape grid to PPM/PNG and the frontier mask to PBM.
    Render,
    /// Render, then box-count the frontier and write Whitney sums.
    Dimension,
    /// Iterate one point and write orbit.json.
    Orbit,
}

/// Every config key has a flag; flags win over the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// key=value config file
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed polynomial roots a_1,...,a_k' (comma separated)
    #[arg(long, global = true)]
    pub spec_roots: Option<String>,
    #[arg(long, global = true)]
    pub lambda: Option<String>,
    /// Head iteration count N
    #[arg(long, global = true)]
    pub iterations: Option<String>,
    /// n_k = floor(R_k^s)
    #[arg(long, global = true, value_name = "S", group = "nrule")]
    pub npow: Option<String>,
    /// n_k = C
    #[arg(long, global = true, value_name = "C", group = "nrule")]
    pub nconst: Option<String>,
    /// n_k = floor(R_k)^k
    #[arg(long, global = true, group = "nrule")]
    pub ntower: bool,
    /// n_k = floor((log R_k)^s)
    #[arg(long, global = true, value_name = "S", group = "nrule")]
    pub nlogpow: Option<String>,
    /// one | maxlog
    #[arg(long, global = true)]
    pub lrule: Option<String>,
    #[arg(long, global = true)]
    pub depth: Option<String>,
    /// Decimal or 0x-prefixed hex
    #[arg(long, global = true)]
    pub seed: Option<String>,
    #[arg(long, global = true)]
    pub samples: Option<String>,
    #[arg(long, global = true)]
    pub band_points: Option<String>,
    /// auto | cx,cy,width,height
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub window: Option<String>,
    /// N or NXxNY
    #[arg(long, global = true)]
    pub res: Option<String>,
    #[arg(long, global = true)]
    pub budget: Option<String>,
    #[arg(long, global = true)]
    pub box_min_exp: Option<String>,
    #[arg(long, global = true)]
    pub box_max_exp: Option<String>,
    /// Load a construction.json instead of building
    #[arg(long, global = true)]
    pub construction: Option<String>,
    /// Orbit start x,y
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub z: Option<String>,
    #[arg(long, global = true)]
    pub out: Option<String>,
    /// Count skipped checks as failures
    #[arg(long, global = true)]
    pub strict_no_skip: bool,
}

impl Flags {
    /// Defaults, then the config file, then the flags.
    pub fn resolve(&self) -> Result<RunConfig, Failure> {
        let mut c = RunConfig::default();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Config(format!("reading {}: {e}", path.display())))?;
            c.apply_text(&text).map_err(|e| Failure::Config(e.to_string()))?;
        }
        let pairs: [(&str, Option<String>); 17] = [
            ("spec_roots", self.spec_roots.clone()),
            ("lambda", self.lambda.clone()),
            ("iterations", self.iterations.clone()),
            ("n_rule", self.npow.as_ref().map(|s| format!("power:{s}"))),
            ("n_rule", self.nconst.as_ref().map(|s| format!("constant:{s}"))),
            ("n_rule", self.ntower.then(|| "tower".to_string())),
            ("n_rule", self.nlogpow.as_ref().map(|s| format!("logpower:{s}"))),
            ("l_rule", self.lrule.clone()),
            ("depth", self.depth.clone()),
            ("seed", self.seed.clone()),
            ("samples", self.samples.clone()),
            ("band_points", self.band_points.clone()),
            ("window", self.window.clone()),
            ("res", self.res.clone()),
            ("budget", self.budget.clone()),
            ("box_min_exp", self.box_min_exp.clone()),
            ("box_max_exp", self.box_max_exp.clone()),
        ];
        let tail = [
            ("construction", self.construction.clone()),
            ("z", self.z.clone()),
            ("out", self.out.clone()),
            ("strict_no_skip", self.strict_no_skip.then(|| "true".to_string())),
        ];
        for (k, v) in pairs.into_iter().chain(tail) {
            if let Some(v) = v {
                c.set(k, &v).map_err(|e| Failure::Config(e.to_string()))?;
            }
        }
        Ok(c)
    }
}

/// Caps rayon's global pool at `TRANSCEND_THREADS` when set.
pub fn init_threads() {
    if let Some(n) = std::env::var("TRANSCEND_THREADS").ok().and_then(|s| s.trim().parse::<usize>().ok()) {
        // a second call (tests) finds the pool already built; that is fine
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    init_threads();
    let result = cli.flags.resolve().and_then(|cfg| execute(cli.command.into(), &cfg));
    match result {
        Ok(report) => {
            print!("{report}");
            0
        }
        Err(f) => {
            if let Failure::Checks { output, .. } = &f {
                print!("{output}");
            }
            eprintln!("error: {f}");
            f.code()
        }
    }
}

impl From<CommandArg> for Command {
    fn from(c: CommandArg) -> Self {
        match c {
            CommandArg::Construct => Command::Construct,
            CommandArg::Verify => Command::Verify,
            CommandArg::Growth => Command::Growth,
            CommandArg::Render => Command::Render,
            CommandArg::Dimension => Command::Dimension,
            CommandArg::Orbit => Command::Orbit,
        }
    }
}
