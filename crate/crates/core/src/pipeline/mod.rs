//! End-to-end workflows behind the command-line tool: key files, embed and
//! extract, and the benchmark harnesses.

mod bench;
mod config;
mod keyfile;
mod plot;
mod transport;

pub use bench::{
    bench_ber, bench_confidence, compute_mrr, pearson, run_key, wilson_interval, BerReport, BerRow,
    ConfidenceReport, ConfidenceRow, TrialRecord, BER_COLUMNS, BER_CSV_VERSION, CONFIDENCE_COLUMNS,
    CONFIDENCE_CSV_VERSION, SNR_CONVENTION, TRUST_CHECK_THRESHOLD,
};
pub use config::{ModelChoice, PipelineConfig, Scheme, DEFAULT_SCENARIOS, THRESHOLD_PRESETS};
pub use keyfile::{
    decode_key, encode_key, generate_key, keygen, read_key, write_key, KEYFILE_MAGIC, KEY_ENV_VAR,
};
pub use plot::{svg_lineplot, PlotSpec};
pub use transport::{compress, decompress, embed, extract, EmbedReport, ExtractReport, Verdict};
