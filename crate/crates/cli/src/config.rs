//! Flag and config-file handling.
//!
//! Precedence: command-line flags override config-file keys override
//! defaults. The fully merged configuration is echoed to stderr and embedded
//! in every output file, so a run can be reproduced from any of its outputs.

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(
    name = "ergolab",
    about = "numerical laboratory for ergodic averages on tori",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Multi-correlation series α(n) as CSV `n,re,im`
    Correlate(CommonArgs),
    /// FFT spectrum scan (CSV) plus detected peaks (JSON)
    Spectrum(CommonArgs),
    /// Gowers uniformity norms and W-trick sweeps
    Gowers(CommonArgs),
    /// Theorem harness: both sides of a convergence statement at a schedule of N
    Verify(CommonArgs),
    /// Search a set for arithmetic progressions with Beatty common difference
    Search(CommonArgs),
    /// Spectrum of an observable along the diagonal orbit (Tⁿx, T²ⁿx, …)
    OrbitSpectrum(CommonArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Correlate(_) => "correlate",
            Command::Spectrum(_) => "spectrum",
            Command::Gowers(_) => "gowers",
            Command::Verify(_) => "verify",
            Command::Search(_) => "search",
            Command::OrbitSpectrum(_) => "orbit-spectrum",
        }
    }

    pub fn args(&self) -> &CommonArgs {
        match self {
            Command::Correlate(a)
            | Command::Spectrum(a)
            | Command::Gowers(a)
            | Command::Verify(a)
            | Command::Search(a)
            | Command::OrbitSpectrum(a) => a,
        }
    }
}

#[derive(Args, Debug, Default)]
pub struct CommonArgs {
    /// JSON config file; flags override its keys
    #[arg(long)]
    pub config: Option<String>,

    /// system spec, e.g. rot:alpha=sqrt(2)-1 or skew:alpha=(sqrt(5)-1)/2
    #[arg(long)]
    pub system: Option<String>,

    /// observable spec (repeatable), e.g. char:1 or arc:axis=0,a=1/3,b=2/3
    #[arg(long = "obs")]
    pub obs: Vec<String>,

    /// index-sequence spec, e.g. beatty:theta=sqrt(2),gamma=0 or primes
    #[arg(long)]
    pub seq: Option<String>,

    /// weight spec, e.g. mangoldt_wb:w=5,b=7 or indicator:squarefree
    #[arg(long)]
    pub weight: Option<String>,

    /// sequence length, or comma-separated schedule for verify (e.g. 1000,10000)
    #[arg(long = "N")]
    pub n: Option<String>,

    /// quadrature sample count (default 4096 for d=1, 256² for d=2)
    #[arg(long = "M")]
    pub m: Option<usize>,

    /// staggered windows for uniform Cesàro statements
    #[arg(long)]
    pub windows: Option<usize>,

    /// window start offset between successive windows (default N/windows)
    #[arg(long)]
    pub stagger: Option<u64>,

    /// peak detection threshold
    #[arg(long)]
    pub tau: Option<f64>,

    /// verdict tolerance (verify) or containment tolerance (spectrum)
    #[arg(long)]
    pub tol: Option<f64>,

    /// FFT oversampling factor (power of two)
    #[arg(long)]
    pub oversample: Option<usize>,

    /// Gowers norm depth s, or uniformity-norm depth for --wtrick
    #[arg(long)]
    pub s: Option<u32>,

    /// comma-separated w values for a W-trick sweep, e.g. 2,3,5
    #[arg(long)]
    pub wtrick: Option<String>,

    /// W-trick mode: classic or beatty (beatty needs --theta/--gamma)
    #[arg(long)]
    pub mode: Option<String>,

    /// Beatty parameters for search / beatty-mode sweeps
    #[arg(long)]
    pub theta: Option<String>,
    #[arg(long)]
    pub gamma: Option<String>,

    /// theorem spec for verify: arith:q=3,r=1 | beatty:theta=..,gamma=.. |
    /// primes | beatty_primes:theta=..,gamma=.. | besicovitch
    #[arg(long)]
    pub theorem: Option<String>,

    /// declared spectrum generators of the weight for besicovitch runs:
    /// "Q" and/or exact scalars, comma-separated (e.g. "Q" or "1/3,Q")
    #[arg(long)]
    pub phi_group: Option<String>,

    /// coefficient bound for hypothesis checks and theoretical spectra
    #[arg(long)]
    pub bound: Option<i64>,

    /// run the harness even if the hypothesis check fails
    #[arg(long)]
    pub force: bool,

    /// point for orbit-spectrum, comma-separated exact coordinates, e.g. 1/4,0
    #[arg(long)]
    pub x: Option<String>,

    /// product depth k for orbit-spectrum (observable lives on k·dim coords)
    #[arg(long)]
    pub k: Option<u64>,

    /// set spec for search: random:density=0.3,limit=10000 or file:<path>
    #[arg(long)]
    pub set: Option<String>,

    /// scan-sequence spec for spectrum: exp:alpha=.., exp2:alpha=.., or a weight
    #[arg(long = "scan-seq")]
    pub scan_seq: Option<String>,

    /// check containment of detected peaks against this system's spectrum
    #[arg(long = "sigma-of")]
    pub sigma_of: Option<String>,

    /// golden-section refinement of detected peaks
    #[arg(long)]
    pub refine: Option<bool>,

    /// primary output file (CSV unless noted); stdout when omitted
    #[arg(long)]
    pub out: Option<String>,

    /// peak-report JSON output file (spectrum, orbit-spectrum)
    #[arg(long)]
    pub peaks: Option<String>,

    /// report JSON output file (verify)
    #[arg(long)]
    pub json: Option<String>,

    /// quadrature kind: grid (exact for characters) or orbit (Birkhoff
    /// samples along one orbit)
    #[arg(long)]
    pub quadrature: Option<String>,

    /// rayon thread count (results are thread-count independent)
    #[arg(long)]
    pub threads: Option<usize>,

    /// RNG seed for seeded subcommands (search random sets)
    #[arg(long)]
    pub seed: Option<u64>,

    /// validate the configuration and print the execution plan, do not compute
    #[arg(long)]
    pub dry_run: bool,
}

/// Fully resolved run configuration: a run is a pure function of this value.
/// Unknown keys in a config file are errors.
#[derive(Debug, Clone, Serialize, Deserialize, Default, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub system: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub obs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seq: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub windows: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stagger: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oversample: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wtrick: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorem: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_group: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<i64>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub force: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub set: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan_seq: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_of: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refine: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub peaks: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub json: Option<String>,
}

impl RunConfig {
    /// Merge flags over config-file keys over defaults (here: emptiness).
    pub fn merge(command: &str, args: &CommonArgs, file: RunConfig) -> RunConfig {
        RunConfig {
            command: command.to_string(),
            system: args.system.clone().or(file.system),
            obs: if args.obs.is_empty() { file.obs } else { args.obs.clone() },
            seq: args.seq.clone().or(file.seq),
            weight: args.weight.clone().or(file.weight),
            n: args.n.clone().or(file.n),
            m: args.m.or(file.m),
            windows: args.windows.or(file.windows),
            stagger: args.stagger.or(file.stagger),
            tau: args.tau.or(file.tau),
            tol: args.tol.or(file.tol),
            oversample: args.oversample.or(file.oversample),
            s: args.s.or(file.s),
            wtrick: args.wtrick.clone().or(file.wtrick),
            mode: args.mode.clone().or(file.mode),
            theta: args.theta.clone().or(file.theta),
            gamma: args.gamma.clone().or(file.gamma),
            theorem: args.theorem.clone().or(file.theorem),
            phi_group: args.phi_group.clone().or(file.phi_group),
            bound: args.bound.or(file.bound),
            force: args.force || file.force,
            x: args.x.clone().or(file.x),
            k: args.k.or(file.k),
            set: args.set.clone().or(file.set),
            scan_seq: args.scan_seq.clone().or(file.scan_seq),
            sigma_of: args.sigma_of.clone().or(file.sigma_of),
            refine: args.refine.or(file.refine),
            seed: args.seed.or(file.seed),
            quadrature: args.quadrature.clone().or(file.quadrature),
            out: args.out.clone().or(file.out),
            peaks: args.peaks.clone().or(file.peaks),
            json: args.json.clone().or(file.json),
        }
    }

    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}
