//! Rate, energy, flit and crosstalk measurement of a codec over a trace.
//!
//! Only payloads are coded and counted; header flits appear in flit totals
//! but never in energy or crosstalk figures.

mod crosstalk;
mod report;

pub use crosstalk::{
    crosstalk_report, crosstalk_report_with, flitize, stream_crosstalk, ClassKey, CrosstalkReport,
    CrosstalkWeightTable, InteractionClass, StreamCrosstalk,
};
pub use report::Report;

use crate::bitcore::BitString;
use crate::codec::LineCodec;
use crate::error::{Error, Result};
use crate::exec::Execution;

/// Link and packet geometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinkConfig {
    pub flit_bits: usize,
    pub payload_bits: usize,
    pub grid_rows: usize,
    pub grid_cols: usize,
    pub header_flits: usize,
}

impl Default for LinkConfig {
    /// 16-byte flits on an 8×16 wire grid, 64-byte payloads, one header.
    fn default() -> Self {
        Self { flit_bits: 128, payload_bits: 512, grid_rows: 8, grid_cols: 16, header_flits: 1 }
    }
}

impl LinkConfig {
    pub fn new(grid_rows: usize, grid_cols: usize, flit_bits: usize, payload_bits: usize) -> Result<Self> {
        let link = Self { flit_bits, payload_bits, grid_rows, grid_cols, header_flits: 1 };
        link.validate()?;
        Ok(link)
    }

    pub fn validate(&self) -> Result<()> {
        if self.flit_bits == 0 || self.payload_bits == 0 || self.grid_rows == 0 || self.grid_cols == 0 {
            return Err(Error::invalid("link dimensions must be positive"));
        }
        if self.grid_rows * self.grid_cols != self.flit_bits {
            return Err(Error::invalid(format!(
                "a {}x{} wire grid does not carry {}-bit flits",
                self.grid_rows, self.grid_cols, self.flit_bits
            )));
        }
        Ok(())
    }

    fn check_payload(&self, index: usize, payload: &BitString) -> Result<()> {
        if payload.len() != self.payload_bits {
            return Err(Error::invalid(format!(
                "payload has {} bits, link expects {}",
                payload.len(),
                self.payload_bits
            ))
            .at_payload(index));
        }
        Ok(())
    }
}

/// Header flits plus the data flits needed for `coded_bits`.
pub fn flit_count(coded_bits: usize, link: &LinkConfig) -> usize {
    link.header_flits + coded_bits.div_ceil(link.flit_bits)
}

/// `100·(1 − coded/raw)`, or `None` when `raw` is zero.
pub fn reduction_pct(ones_raw: u64, ones_coded: u64) -> Option<f64> {
    (ones_raw > 0).then(|| 100.0 * (1.0 - ones_coded as f64 / ones_raw as f64))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport {
    pub payloads: usize,
    pub dataword_bits: u64,
    pub codeword_bits: u64,
    pub ones_raw: u64,
    pub ones_coded: u64,
    pub flits_uncoded: u64,
    pub flits_coded: u64,
}

impl EnergyReport {
    fn empty() -> Self {
        Self {
            payloads: 0,
            dataword_bits: 0,
            codeword_bits: 0,
            ones_raw: 0,
            ones_coded: 0,
            flits_uncoded: 0,
            flits_coded: 0,
        }
    }

    fn merge(self, o: Self) -> Self {
        Self {
            payloads: self.payloads + o.payloads,
            dataword_bits: self.dataword_bits + o.dataword_bits,
            codeword_bits: self.codeword_bits + o.codeword_bits,
            ones_raw: self.ones_raw + o.ones_raw,
            ones_coded: self.ones_coded + o.ones_coded,
            flits_uncoded: self.flits_uncoded + o.flits_uncoded,
            flits_coded: self.flits_coded + o.flits_coded,
        }
    }

    /// Dataword bits per codeword bit.
    pub fn rate(&self) -> f64 {
        self.dataword_bits as f64 / self.codeword_bits as f64
    }

    pub fn reduction_pct(&self) -> Option<f64> {
        reduction_pct(self.ones_raw, self.ones_coded)
    }

    pub fn write_to(&self, r: &mut Report) {
        r.push("payloads", self.payloads);
        r.push("dataword_bits", self.dataword_bits);
        r.push("codeword_bits", self.codeword_bits);
        r.push_f64("rate", Some(self.rate()));
        r.push("ones_raw", self.ones_raw);
        r.push("ones_coded", self.ones_coded);
        r.push_f64("reduction_pct", self.reduction_pct());
        r.push("flits_uncoded", self.flits_uncoded);
        r.push("flits_coded", self.flits_coded);
    }
}

/// Encodes every payload, checks that it decodes back, and totals bits,
/// 1s and flits.
pub fn energy_report(trace: &[BitString], codec: &dyn LineCodec, link: &LinkConfig) -> Result<EnergyReport> {
    energy_report_with(trace, codec, link, Execution::default())
}

pub fn energy_report_with(
    trace: &[BitString],
    codec: &dyn LineCodec,
    link: &LinkConfig,
    exec: Execution,
) -> Result<EnergyReport> {
    link.validate()?;
    let per_payload = exec.try_map(trace, |i, p| {
        link.check_payload(i, p)?;
        let coded = codec.encode(p).map_err(|e| e.at_payload(i))?;
        let back = codec.decode(&coded, p.len()).map_err(|e| e.at_payload(i))?;
        if back != *p {
            return Err(Error::RoundTrip { index: i });
        }
        Ok(EnergyReport {
            payloads: 1,
            dataword_bits: p.len() as u64,
            codeword_bits: coded.len() as u64,
            ones_raw: p.weight() as u64,
            ones_coded: coded.weight() as u64,
            flits_uncoded: flit_count(p.len(), link) as u64,
            flits_coded: flit_count(coded.len(), link) as u64,
        })
    })?;
    Ok(per_payload.into_iter().fold(EnergyReport::empty(), EnergyReport::merge))
}
