//! 32-bit integer arithmetic coder with pending-bit (E3) underflow handling.
//!
//! Streams are terminated by the model's EOF symbol. The decoder mirrors the
//! encoder's interval and reconstructs its exact output length, so it can
//! tell a complete stream from a truncated one. Two flush rules exist:
//!
//! * [`Termination::Exact`]: the fewest bits whose zero-extension lands in
//!   the final interval. The reader must know where the stream ends.
//! * [`Termination::SelfDelimiting`]: the fewest bits such that *any*
//!   continuation lands in the final interval, so the stream can be followed
//!   by unrelated bits.

use crate::error::{Error, Result};

use super::bits::BitMessage;
use super::model::{SymbolModel, MAX_TOTAL};

const CODE_BITS: u32 = 32;
const TOP: u64 = (1 << CODE_BITS) - 1;
const HALF: u64 = 1 << (CODE_BITS - 1);
const QUARTER: u64 = 1 << (CODE_BITS - 2);
const THREE_QUARTERS: u64 = 3 * QUARTER;

/// How the encoder closes a stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Termination {
    #[default]
    Exact,
    SelfDelimiting,
}

/// Decoder output: the data symbols and the encoder's stream length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub symbols: Vec<u32>,
    /// Bits the encoder emitted for this stream; anything past it is slack.
    pub bits_used: usize,
}

fn interval<M: SymbolModel + ?Sized>(model: &M, history: &[u32], symbol: u32) -> (u64, u64, u64) {
    let cum = model.cumulative_counts(history);
    let total = u64::from(*cum.last().expect("non-empty table"));
    debug_assert!(total <= u64::from(MAX_TOTAL));
    (
        u64::from(cum[symbol as usize]),
        u64::from(cum[symbol as usize + 1]),
        total,
    )
}

/// Coder interval plus the bookkeeping both sides share.
#[derive(Debug, Clone)]
struct Interval {
    low: u64,
    high: u64,
    pending: usize,
}

impl Interval {
    fn new() -> Self {
        Interval {
            low: 0,
            high: TOP,
            pending: 0,
        }
    }

    fn narrow(&mut self, lo: u64, hi: u64, total: u64) {
        let range = self.high - self.low + 1;
        self.high = self.low + range * hi / total - 1;
        self.low += range * lo / total;
    }

    /// One renormalization step: `Some(bit)` for an E1/E2 output bit,
    /// `Some(None)` for an E3 step, `None` when the interval is wide enough.
    fn step(&mut self) -> Option<Option<bool>> {
        let out = if self.high < HALF {
            Some(false)
        } else if self.low >= HALF {
            self.low -= HALF;
            self.high -= HALF;
            Some(true)
        } else if self.low >= QUARTER && self.high < THREE_QUARTERS {
            self.low -= QUARTER;
            self.high -= QUARTER;
            None
        } else {
            return None;
        };
        self.low <<= 1;
        self.high = (self.high << 1) | 1;
        Some(out)
    }

    /// Shortest prefix `(value, width)` that identifies the final interval
    /// under `term`.
    fn flush_point(&self, term: Termination) -> (u64, u32) {
        if term == Termination::Exact && self.low == 0 && self.pending == 0 {
            return (0, 0);
        }
        for width in 1..=CODE_BITS {
            let step = 1u64 << (CODE_BITS - width);
            let v = self.low.div_ceil(step) * step;
            let last = match term {
                Termination::Exact => v,
                Termination::SelfDelimiting => v + step - 1,
            };
            if last <= self.high {
                return (v >> (CODE_BITS - width), width);
            }
        }
        unreachable!("renormalized interval always holds an aligned cell")
    }
}

struct BitSink {
    out: BitMessage,
}

impl BitSink {
    fn emit(&mut self, bit: bool, pending: &mut usize) {
        self.out.push(bit);
        for _ in 0..*pending {
            self.out.push(!bit);
        }
        *pending = 0;
    }
}

/// Reads the stream MSB-first, zero-extended past its end.
struct BitSource<'a> {
    bits: &'a BitMessage,
    pos: usize,
}

impl BitSource<'_> {
    fn next_bit(&mut self) -> u64 {
        let b = self.bits.get(self.pos).unwrap_or(false);
        self.pos += 1;
        u64::from(b)
    }
}

fn check_symbol<M: SymbolModel + ?Sized>(model: &M, symbol: u32) -> Result<()> {
    let data = model.alphabet_size() - 1;
    if symbol as usize >= data {
        return Err(Error::SymbolOutOfAlphabet {
            symbol,
            alphabet: data,
        });
    }
    Ok(())
}

/// Encodes `symbols` followed by EOF with [`Termination::Exact`]. `model`
/// must be freshly constructed and is updated as symbols are coded.
pub fn ac_encode<M: SymbolModel + ?Sized>(symbols: &[u32], model: &mut M) -> Result<BitMessage> {
    ac_encode_with(symbols, model, Termination::Exact)
}

pub fn ac_encode_with<M: SymbolModel + ?Sized>(
    symbols: &[u32],
    model: &mut M,
    term: Termination,
) -> Result<BitMessage> {
    for &s in symbols {
        check_symbol(model, s)?;
    }
    let eof = model.eof_symbol();
    let mut iv = Interval::new();
    let mut sink = BitSink {
        out: BitMessage::new(),
    };
    for (i, &s) in symbols.iter().chain(std::iter::once(&eof)).enumerate() {
        let history = &symbols[..i];
        let (lo, hi, total) = interval(model, history, s);
        iv.narrow(lo, hi, total);
        if s != eof {
            model.update(history, s);
        }
        while let Some(step) = iv.step() {
            match step {
                Some(bit) => sink.emit(bit, &mut iv.pending),
                None => iv.pending += 1,
            }
        }
    }
    let (value, width) = iv.flush_point(term);
    for i in (0..width).rev() {
        sink.emit((value >> i) & 1 == 1, &mut iv.pending);
    }
    Ok(sink.out)
}

/// Decodes a stream up to its EOF symbol. Bits after the encoder's output
/// are ignored; a stream shorter than the encoder's output is an error.
/// `term` must match the encoder's.
pub fn ac_decode_with<M: SymbolModel + ?Sized>(
    bits: &BitMessage,
    model: &mut M,
    term: Termination,
) -> Result<Decoded> {
    let eof = model.eof_symbol();
    let mut input = BitSource { bits, pos: 0 };
    let mut value = 0u64;
    for _ in 0..CODE_BITS {
        value = (value << 1) | input.next_bit();
    }
    let mut iv = Interval::new();
    let mut emitted = 0usize;
    let mut symbols = Vec::new();
    loop {
        let range = iv.high - iv.low + 1;
        let cum = model.cumulative_counts(&symbols);
        let total = u64::from(*cum.last().expect("non-empty table"));
        let scaled = ((value - iv.low + 1) * total - 1) / range;
        // largest s with cum[s] <= scaled
        let s = cum.partition_point(|&c| u64::from(c) <= scaled) - 1;
        let s = s as u32;
        let (lo, hi) = (u64::from(cum[s as usize]), u64::from(cum[s as usize + 1]));
        iv.narrow(lo, hi, total);
        if s != eof {
            model.update(&symbols, s);
            symbols.push(s);
        }
        while let Some(step) = iv.step() {
            match step {
                Some(bit) => {
                    emitted += 1 + iv.pending;
                    iv.pending = 0;
                    if bit {
                        value -= HALF;
                    }
                }
                None => {
                    iv.pending += 1;
                    value -= QUARTER;
                }
            }
            value = (value << 1) | input.next_bit();
        }
        if s == eof {
            break;
        }
        // the register runs CODE_BITS ahead of the encoder; more padding
        // than that means the stream ended before its EOF
        if input.pos > bits.len() + CODE_BITS as usize {
            return Err(Error::TruncatedPayload);
        }
    }
    let (_, width) = iv.flush_point(term);
    let bits_used = if width == 0 {
        emitted
    } else {
        emitted + iv.pending + width as usize
    };
    if bits_used > bits.len() {
        return Err(Error::TruncatedPayload);
    }
    Ok(Decoded { symbols, bits_used })
}

/// Decodes a stream produced by [`ac_encode`].
pub fn ac_decode<M: SymbolModel + ?Sized>(bits: &BitMessage, model: &mut M) -> Result<Vec<u32>> {
    ac_decode_with(bits, model, Termination::Exact).map(|d| d.symbols)
}

pub fn encode_bytes<M: SymbolModel + ?Sized>(bytes: &[u8], model: &mut M) -> Result<BitMessage> {
    let symbols: Vec<u32> = bytes.iter().map(|&b| u32::from(b)).collect();
    ac_encode(&symbols, model)
}

pub fn decode_bytes<M: SymbolModel + ?Sized>(bits: &BitMessage, model: &mut M) -> Result<Vec<u8>> {
    let symbols = ac_decode(bits, model)?;
    symbols
        .into_iter()
        .map(|s| {
            u8::try_from(s).map_err(|_| Error::format("byte payload", format!("symbol {s} is not a byte")))
        })
        .collect()
}

/// `sum -log2 p(s_i)` over `symbols` and the closing EOF, replaying the
/// model's updates. Returns `(data_bits, eof_bits)`.
pub fn ideal_code_length<M: SymbolModel + ?Sized>(symbols: &[u32], model: &mut M) -> (f64, f64) {
    let mut data = 0.0;
    for (i, &s) in symbols.iter().enumerate() {
        data += super::model::symbol_cost_bits(model, &symbols[..i], s);
        model.update(&symbols[..i], s);
    }
    let eof = super::model::symbol_cost_bits(model, symbols, model.eof_symbol());
    (data, eof)
}
