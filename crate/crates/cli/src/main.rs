use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use tccsk_core::codec::BitMessage;
use tccsk_core::exec::Execution;
use tccsk_core::modulation::VectorFile;
use tccsk_core::pipeline::{
    bench_ber, bench_confidence, compress, decompress, embed, extract, keygen, read_key,
    svg_lineplot, PipelineConfig, PlotSpec, TrialRecord, Verdict, KEY_ENV_VAR,
};

/// Keyed hypersphere modulation: embed short messages into unit vectors and
/// recover them with a calibrated confidence.
#[derive(Parser)]
#[command(name = "tccsk", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// Flat key = value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override one setting, e.g. `--set block_bits=12`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

impl ConfigArgs {
    fn load(&self) -> Result<PipelineConfig> {
        let mut cfg = match &self.config {
            Some(p) => PipelineConfig::load(p).with_context(|| format!("reading {}", p.display()))?,
            None => PipelineConfig::default(),
        };
        for o in &self.overrides {
            let (k, v) = o
                .split_once('=')
                .with_context(|| format!("--set expects KEY=VALUE, got {o:?}"))?;
            cfg.set(k, v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct KeyArg {
    /// Key file (SWIFTKEY text or 32 raw bytes).
    #[arg(long, env = KEY_ENV_VAR)]
    key: PathBuf,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct PayloadArg {
    /// Payload given inline.
    #[arg(long)]
    text: Option<String>,
    /// Payload read from a file.
    #[arg(long)]
    input: Option<PathBuf>,
}

impl PayloadArg {
    fn bytes(&self) -> Result<Vec<u8>> {
        match (&self.text, &self.input) {
            (Some(t), _) => Ok(t.clone().into_bytes()),
            (None, Some(p)) => fs::read(p).with_context(|| format!("reading {}", p.display())),
            (None, None) => unreachable!("clap enforces one payload source"),
        }
    }
}

#[derive(Args)]
struct ExecArg {
    /// Run trials on one thread.
    #[arg(long)]
    sequential: bool,
}

impl ExecArg {
    fn mode(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write a new secret key.
    Keygen {
        #[arg(long)]
        out: PathBuf,
        /// Derive the key from a seed instead of OS randomness (tests only).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Compress and modulate a payload into a vector file.
    Embed {
        #[command(flatten)]
        key: KeyArg,
        #[command(flatten)]
        payload: PayloadArg,
        #[command(flatten)]
        cfg: ConfigArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recover a payload and its confidence from a vector file.
    Extract {
        #[command(flatten)]
        key: KeyArg,
        #[command(flatten)]
        cfg: ConfigArgs,
        vector: PathBuf,
    },
    /// Arithmetic-code a payload into a text file of 0/1 digits.
    Compress {
        #[command(flatten)]
        payload: PayloadArg,
        #[command(flatten)]
        cfg: ConfigArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decode a bits file written by `compress`.
    Decompress {
        #[command(flatten)]
        cfg: ConfigArgs,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Bit and message error rates of each scheme over the SNR grid.
    BenchBer {
        #[command(flatten)]
        cfg: ConfigArgs,
        #[command(flatten)]
        exec: ExecArg,
        #[arg(long)]
        csv: PathBuf,
        /// Also render BER vs SNR.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Threshold screening of decodes over channel scenarios.
    BenchConfidence {
        #[command(flatten)]
        cfg: ConfigArgs,
        #[command(flatten)]
        exec: ExecArg,
        #[arg(long)]
        csv: PathBuf,
    },
    /// Render a CSV column against another as an SVG line plot.
    Plot {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "snr_db")]
        x: String,
        #[arg(long, default_value = "ber")]
        y: String,
        /// Column naming the series; omit for a single line.
        #[arg(long)]
        series: Option<String>,
        #[arg(long)]
        log_y: bool,
        #[arg(long, default_value = "")]
        title: String,
    },
}

fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn report_counterexamples(what: &str, cex: &[TrialRecord]) -> ExitCode {
    if cex.is_empty() {
        return ExitCode::SUCCESS;
    }
    eprintln!("{what}: {} trusted decode(s) were wrong:", cex.len());
    for r in cex {
        eprintln!(
            "  trial {} seed {} channel {} bit_errors {} log10_rho {:.2}",
            r.trial,
            r.seed,
            r.channel,
            r.bit_errors,
            r.log10_rho.unwrap_or(f64::NAN)
        );
    }
    ExitCode::from(3)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Keygen { out, seed } => {
            let key = keygen(&out, seed).with_context(|| format!("writing {}", out.display()))?;
            println!("wrote {} (fingerprint {:016x})", out.display(), key.fingerprint());
        }
        Command::Embed { key, payload, cfg, out } => {
            let cfg = cfg.load()?;
            let key = read_key(&key.key)?;
            let rep = embed(&payload.bytes()?, &key, &cfg)?;
            rep.file.save(&out).with_context(|| format!("writing {}", out.display()))?;
            println!("N = {} bits", rep.payload_bits);
            println!("T = {} blocks of {} bits", rep.blocks, cfg.params.block_bits());
            println!("pad = {} bits", rep.pad_bits);
        }
        Command::Extract { key, cfg, vector } => {
            let cfg = cfg.load()?;
            let key = read_key(&key.key)?;
            let file = VectorFile::load(&vector).with_context(|| format!("reading {}", vector.display()))?;
            let rep = extract(&file, &key, &cfg)?;
            if rep.key_mismatch {
                eprintln!("warning: key fingerprint does not match the vector file; expect no confidence");
            }
            match rep.text() {
                Some(t) => println!("text: {t}"),
                None => println!("text: <none>"),
            }
            println!("log10_rho: {:.3}", rep.log10_rho());
            let cos: Vec<String> = rep.decode.block_cosines.iter().map(|c| format!("{c:.4}")).collect();
            println!("block_cosines: {}", cos.join(" "));
            let verdict = match rep.verdict {
                Verdict::Trusted => "trusted",
                Verdict::Untrusted => "untrusted",
            };
            println!("verdict: {verdict} (threshold {:e})", cfg.verdict_threshold);
            if let Some(d) = rep.diagnostic {
                println!("diagnostic: {d}");
            }
        }
        Command::Compress { payload, cfg, out } => {
            let cfg = cfg.load()?;
            let bits = compress(&payload.bytes()?, &cfg.model, cfg.length_free)?;
            write(&out, format!("{bits}\n"))?;
            println!("N = {} bits", bits.len());
        }
        Command::Decompress { cfg, input, out } => {
            let cfg = cfg.load()?;
            let text = fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
            let bits: BitMessage = text.trim().parse()?;
            let (bytes, _) = decompress(&bits, &cfg.model, cfg.length_free)?;
            write(&out, bytes)?;
        }
        Command::BenchBer { cfg, exec, csv, svg } => {
            let cfg = cfg.load()?;
            let rep = bench_ber(&cfg, exec.mode())?;
            let text = rep.to_csv(&cfg)?;
            write(&csv, &text)?;
            if let Some(svg) = svg {
                write(&svg, svg_lineplot(&text, &PlotSpec::ber())?)?;
            }
            return Ok(report_counterexamples("bench-ber", &rep.counterexamples));
        }
        Command::BenchConfidence { cfg, exec, csv } => {
            let cfg = cfg.load()?;
            let rep = bench_confidence(&cfg, exec.mode())?;
            write(&csv, rep.to_csv(&cfg)?)?;
            if let Some(p) = rep.pearson {
                println!("pearson(log10_rho, bit_accuracy) = {p:.3}");
            }
            return Ok(report_counterexamples("bench-confidence", &rep.counterexamples));
        }
        Command::Plot { csv, out, x, y, series, log_y, title } => {
            let text = fs::read_to_string(&csv).with_context(|| format!("reading {}", csv.display()))?;
            let spec = PlotSpec { x, y, series, log_y, title };
            write(&out, svg_lineplot(&text, &spec)?)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
