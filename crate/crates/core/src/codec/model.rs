//! Symbol probability models for the arithmetic coder.
//!
//! Symbols are `0..alphabet_size`; the last one is the reserved EOF symbol.
//! A model exposes cumulative frequency tables conditioned on the symbol
//! history and, if adaptive, learns from each coded symbol. Encoder and
//! decoder must start from identically constructed models.

use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Largest cumulative total a model may present to the coder.
pub const MAX_TOTAL: u32 = 1 << 30;

/// Largest context order supported by the built-in models.
pub const MAX_ORDER: usize = 3;

/// Largest alphabet (data symbols + EOF) supported by the built-in models.
pub const MAX_ALPHABET: usize = 1 << 20;

/// Rescale threshold for adaptive counts.
const ADAPTIVE_LIMIT: u32 = 1 << 16;

/// Byte alphabet plus EOF.
pub const BYTE_ALPHABET: usize = 257;

const MODEL_MAGIC: &[u8] = b"SWIFTMODEL v1\n";

pub trait SymbolModel {
    /// Number of symbols including EOF.
    fn alphabet_size(&self) -> usize;

    /// Cumulative counts for the next symbol given everything coded so far.
    /// Length `alphabet_size + 1`, starts at 0, strictly increasing, last
    /// entry at most [`MAX_TOTAL`].
    fn cumulative_counts(&self, history: &[u32]) -> &[u32];

    /// Learns from `symbol` having been coded after `history`.
    fn update(&mut self, _history: &[u32], _symbol: u32) {}

    fn eof_symbol(&self) -> u32 {
        (self.alphabet_size() - 1) as u32
    }
}

impl<M: SymbolModel + ?Sized> SymbolModel for Box<M> {
    fn alphabet_size(&self) -> usize {
        (**self).alphabet_size()
    }

    fn cumulative_counts(&self, history: &[u32]) -> &[u32] {
        (**self).cumulative_counts(history)
    }

    fn update(&mut self, history: &[u32], symbol: u32) {
        (**self).update(history, symbol)
    }
}

/// The `order` most recent symbols, left-padded with symbol 0.
fn context_symbols(history: &[u32], order: usize) -> impl Iterator<Item = u32> + '_ {
    let have = history.len().min(order);
    std::iter::repeat_n(0u32, order - have).chain(history[history.len() - have..].iter().copied())
}

fn check_shape(order: usize, alphabet_size: usize) -> Result<()> {
    if order > MAX_ORDER {
        return Err(Error::param(format!("context order {order} > {MAX_ORDER}")));
    }
    if !(2..=MAX_ALPHABET).contains(&alphabet_size) {
        return Err(Error::param(format!(
            "alphabet size {alphabet_size} outside [2, {MAX_ALPHABET}]"
        )));
    }
    Ok(())
}

fn uniform_cumulative(alphabet_size: usize) -> Vec<u32> {
    (0..=alphabet_size as u32).collect()
}

/// Order-k frequency model with add-one smoothing.
#[derive(Debug, Clone)]
pub struct AdaptiveModel {
    order: usize,
    alphabet_size: usize,
    tables: HashMap<u64, Vec<u32>>,
    fresh: Vec<u32>,
}

impl AdaptiveModel {
    pub fn new(order: usize, alphabet_size: usize) -> Result<Self> {
        check_shape(order, alphabet_size)?;
        Ok(AdaptiveModel {
            order,
            alphabet_size,
            tables: HashMap::new(),
            fresh: uniform_cumulative(alphabet_size),
        })
    }

    /// Byte-oriented model over 256 symbols + EOF.
    pub fn bytes(order: usize) -> Result<Self> {
        Self::new(order, BYTE_ALPHABET)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    fn key(&self, history: &[u32]) -> u64 {
        context_symbols(history, self.order).fold(0u64, |acc, s| (acc << 21) | u64::from(s))
    }

    /// Current (smoothed) count of `symbol` after `history`.
    pub fn count(&self, history: &[u32], symbol: u32) -> u32 {
        let cum = self.cumulative_counts(history);
        cum[symbol as usize + 1] - cum[symbol as usize]
    }
}

impl SymbolModel for AdaptiveModel {
    fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    fn cumulative_counts(&self, history: &[u32]) -> &[u32] {
        self.tables.get(&self.key(history)).unwrap_or(&self.fresh)
    }

    fn update(&mut self, history: &[u32], symbol: u32) {
        let key = self.key(history);
        let fresh = &self.fresh;
        let cum = self.tables.entry(key).or_insert_with(|| fresh.clone());
        for c in &mut cum[symbol as usize + 1..] {
            *c += 1;
        }
        if *cum.last().expect("non-empty") > ADAPTIVE_LIMIT {
            // halve every count, keeping each at least 1
            let mut acc = 0;
            let mut prev = 0;
            for c in cum.iter_mut().skip(1) {
                let count = *c - prev;
                prev = *c;
                acc += count.div_ceil(2);
                *c = acc;
            }
        }
    }
}

/// Immutable order-k model loaded from a count table.
#[derive(Debug, Clone, PartialEq)]
pub struct StaticModel {
    order: usize,
    alphabet_size: usize,
    /// One cumulative table per context, contexts in lexicographic order.
    tables: Vec<Vec<u32>>,
}

impl StaticModel {
    pub fn uniform(alphabet_size: usize) -> Result<Self> {
        check_shape(0, alphabet_size)?;
        Ok(StaticModel {
            order: 0,
            alphabet_size,
            tables: vec![uniform_cumulative(alphabet_size)],
        })
    }

    /// Number of contexts for an order-k model: `(alphabet_size - 1)^k`.
    pub fn context_count(order: usize, alphabet_size: usize) -> Result<usize> {
        check_shape(order, alphabet_size)?;
        (alphabet_size - 1)
            .checked_pow(order as u32)
            .filter(|n| n.saturating_mul(alphabet_size) <= 1 << 28)
            .ok_or_else(|| Error::param("static model table too large"))
    }

    /// Builds a model from raw per-context counts (contexts in lexicographic
    /// order, oldest symbol most significant).
    pub fn from_counts(order: usize, alphabet_size: usize, counts: &[u32]) -> Result<Self> {
        let contexts = Self::context_count(order, alphabet_size)?;
        if counts.len() != contexts * alphabet_size {
            return Err(Error::format(
                "count table",
                format!("expected {} counts, got {}", contexts * alphabet_size, counts.len()),
            ));
        }
        let mut tables = Vec::with_capacity(contexts);
        for (ctx, row) in counts.chunks(alphabet_size).enumerate() {
            let mut cum = Vec::with_capacity(alphabet_size + 1);
            cum.push(0u32);
            let mut acc = 0u64;
            for (s, &c) in row.iter().enumerate() {
                if c == 0 {
                    return Err(Error::format(
                        "count table",
                        format!("zero count for symbol {s} in context {ctx}"),
                    ));
                }
                acc += u64::from(c);
                if acc > u64::from(MAX_TOTAL) {
                    return Err(Error::format(
                        "count table",
                        format!("context {ctx} total exceeds {MAX_TOTAL}"),
                    ));
                }
                cum.push(acc as u32);
            }
            tables.push(cum);
        }
        Ok(StaticModel {
            order,
            alphabet_size,
            tables,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    fn context_index(&self, history: &[u32]) -> usize {
        let base = (self.alphabet_size - 1) as u64;
        context_symbols(history, self.order)
            .fold(0u64, |acc, s| acc * base + u64::from(s).min(base - 1)) as usize
    }

    /// Raw counts in file order.
    pub fn counts(&self) -> Vec<u32> {
        self.tables
            .iter()
            .flat_map(|cum| cum.windows(2).map(|w| w[1] - w[0]))
            .collect()
    }

    /// Serializes as `SWIFTMODEL v1\n`, `u32 order`, `u32 alphabet_size`,
    /// then every count as little-endian `u32`.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(MODEL_MAGIC)?;
        w.write_all(&(self.order as u32).to_le_bytes())?;
        w.write_all(&(self.alphabet_size as u32).to_le_bytes())?;
        for c in self.counts() {
            w.write_all(&c.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut buf = Vec::new();
        r.read_to_end(&mut buf)?;
        let body = buf
            .strip_prefix(MODEL_MAGIC)
            .ok_or_else(|| Error::format("count table", "missing SWIFTMODEL v1 header"))?;
        if body.len() < 8 || (body.len() - 8) % 4 != 0 {
            return Err(Error::format("count table", "truncated body"));
        }
        let order = u32::from_le_bytes(body[0..4].try_into().expect("4 bytes")) as usize;
        let alphabet = u32::from_le_bytes(body[4..8].try_into().expect("4 bytes")) as usize;
        let counts: Vec<u32> = body[8..]
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes(c.try_into().expect("4 bytes")))
            .collect();
        Self::from_counts(order, alphabet, &counts)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_to(std::io::BufWriter::new(file))
    }
}

/// Loads a count-table file written by [`StaticModel::save`].
pub fn static_model_from_file(path: impl AsRef<Path>) -> Result<StaticModel> {
    StaticModel::read_from(std::io::BufReader::new(std::fs::File::open(path)?))
}

impl SymbolModel for StaticModel {
    fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    fn cumulative_counts(&self, history: &[u32]) -> &[u32] {
        &self.tables[self.context_index(history)]
    }
}

/// `-log2 p(symbol | history)` under `model`'s current state.
pub fn symbol_cost_bits<M: SymbolModel + ?Sized>(model: &M, history: &[u32], symbol: u32) -> f64 {
    let cum = model.cumulative_counts(history);
    let count = cum[symbol as usize + 1] - cum[symbol as usize];
    let total = *cum.last().expect("non-empty");
    (f64::from(total) / f64::from(count)).log2()
}
