//! Single-link dynamic code throttling.
//!
//! The link serializes packets FIFO, one flit per cycle. Time is split into
//! fixed windows; a window runs coded unless the previous window's busy
//! fraction exceeded the threshold. A packet keeps the mode of the window it
//! was injected in, even if it is transmitted later.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exec::Execution;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkMode {
    Coded,
    Uncoded,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThrottleConfig {
    pub window_cycles: u64,
    /// Utilization above which the next window runs uncoded.
    pub threshold: f64,
    /// Data flits per packet when coded.
    pub flits_coded: u64,
    pub flits_uncoded: u64,
    pub header_flits: u64,
}

impl Default for ThrottleConfig {
    /// 100k-cycle windows, 16.5% threshold, 5 vs 4 data flits.
    fn default() -> Self {
        Self { window_cycles: 100_000, threshold: 0.165, flits_coded: 5, flits_uncoded: 4, header_flits: 1 }
    }
}

impl ThrottleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window_cycles == 0 {
            return Err(Error::invalid("window must be at least one cycle"));
        }
        if !(0.0..=1.0).contains(&self.threshold) {
            return Err(Error::invalid(format!("threshold {} is outside [0, 1]", self.threshold)));
        }
        if self.flits_uncoded == 0 || self.flits_coded < self.flits_uncoded {
            return Err(Error::invalid("need flits_coded >= flits_uncoded >= 1"));
        }
        Ok(())
    }

    fn packet_cycles(&self, mode: LinkMode) -> u64 {
        self.header_flits
            + match mode {
                LinkMode::Coded => self.flits_coded,
                LinkMode::Uncoded => self.flits_uncoded,
            }
    }
}

/// Packet injection cycles, non-decreasing.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InjectionTrace {
    cycles: Vec<u64>,
}

impl InjectionTrace {
    pub fn new(cycles: Vec<u64>) -> Result<Self> {
        if let Some(i) = cycles.windows(2).position(|w| w[1] < w[0]) {
            return Err(Error::invalid(format!(
                "injection trace is not sorted: cycle {} follows {}",
                cycles[i + 1],
                cycles[i]
            )));
        }
        Ok(Self { cycles })
    }

    pub fn cycles(&self) -> &[u64] {
        &self.cycles
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }
}

impl FromStr for InjectionTrace {
    type Err = Error;

    /// One cycle number per line; blank lines are skipped.
    fn from_str(s: &str) -> Result<Self> {
        let cycles = s
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(no, l)| {
                l.trim().parse::<u64>().map_err(|e| Error::format("injection trace", format!("line {}: {e}", no + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        InjectionTrace::new(cycles).map_err(|e| Error::format("injection trace", e.to_string()))
    }
}

impl fmt::Display for InjectionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cycles {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowStat {
    pub mode: LinkMode,
    pub busy_cycles: u64,
    pub utilization: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThrottleReport {
    /// Cycle at which the last packet finishes.
    pub total_cycles: u64,
    pub windows: Vec<WindowStat>,
    pub packets_coded: u64,
    pub packets_uncoded: u64,
    pub busy_cycles: u64,
}

impl ThrottleReport {
    pub fn coded_windows(&self) -> usize {
        self.windows.iter().filter(|w| w.mode == LinkMode::Coded).count()
    }

    pub fn uncoded_windows(&self) -> usize {
        self.windows.len() - self.coded_windows()
    }

    /// Percentage of windows that ran coded; `None` without any windows.
    pub fn pct_coded(&self) -> Option<f64> {
        (!self.windows.is_empty()).then(|| 100.0 * self.coded_windows() as f64 / self.windows.len() as f64)
    }
}

struct WindowBook {
    width: u64,
    threshold: f64,
    busy: Vec<u64>,
    modes: Vec<LinkMode>,
}

impl WindowBook {
    fn add_busy(&mut self, start: u64, end: u64) {
        let mut t = start;
        while t < end {
            let w = (t / self.width) as usize;
            let seg_end = end.min((w as u64 + 1) * self.width);
            if self.busy.len() <= w {
                self.busy.resize(w + 1, 0);
            }
            self.busy[w] += seg_end - t;
            t = seg_end;
        }
    }

    fn utilization(&self, w: usize) -> f64 {
        self.busy.get(w).copied().unwrap_or(0) as f64 / self.width as f64
    }

    /// Mode of window `w`. Only valid once every packet injected before
    /// window `w` has been scheduled.
    fn mode(&mut self, w: usize) -> LinkMode {
        while self.modes.len() <= w {
            let next = match self.modes.len() {
                0 => LinkMode::Coded,
                n if self.utilization(n - 1) > self.threshold => LinkMode::Uncoded,
                _ => LinkMode::Coded,
            };
            self.modes.push(next);
        }
        self.modes[w]
    }
}

pub fn simulate(trace: &InjectionTrace, cfg: &ThrottleConfig) -> Result<ThrottleReport> {
    cfg.validate()?;
    let mut book =
        WindowBook { width: cfg.window_cycles, threshold: cfg.threshold, busy: Vec::new(), modes: Vec::new() };
    let mut link_free = 0u64;
    let (mut coded, mut uncoded) = (0u64, 0u64);
    for &inject in &trace.cycles {
        let mode = book.mode((inject / cfg.window_cycles) as usize);
        let start = inject.max(link_free);
        let end = start + cfg.packet_cycles(mode);
        book.add_busy(start, end);
        link_free = end;
        match mode {
            LinkMode::Coded => coded += 1,
            LinkMode::Uncoded => uncoded += 1,
        }
    }
    let window_count = match trace.cycles.last() {
        None => 0,
        Some(&last) => (link_free.div_ceil(cfg.window_cycles)).max(last / cfg.window_cycles + 1) as usize,
    };
    let windows = (0..window_count)
        .map(|w| WindowStat {
            mode: book.mode(w),
            busy_cycles: book.busy.get(w).copied().unwrap_or(0),
            utilization: book.utilization(w),
        })
        .collect();
    Ok(ThrottleReport {
        total_cycles: link_free,
        windows,
        packets_coded: coded,
        packets_uncoded: uncoded,
        busy_cycles: book.busy.iter().sum(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub threshold: f64,
    pub pct_coded: Option<f64>,
    pub pct_uncoded: Option<f64>,
    pub total_cycles: u64,
}

/// One simulation per threshold, with every other setting from `cfg`.
pub fn threshold_sweep(trace: &InjectionTrace, cfg: &ThrottleConfig, thresholds: &[f64]) -> Result<Vec<SweepRow>> {
    threshold_sweep_with(trace, cfg, thresholds, Execution::default())
}

pub fn threshold_sweep_with(
    trace: &InjectionTrace,
    cfg: &ThrottleConfig,
    thresholds: &[f64],
    exec: Execution,
) -> Result<Vec<SweepRow>> {
    exec.try_map(thresholds, |_, &threshold| {
        let r = simulate(trace, &ThrottleConfig { threshold, ..*cfg })?;
        let pct_coded = r.pct_coded();
        Ok(SweepRow { threshold, pct_coded, pct_uncoded: pct_coded.map(|p| 100.0 - p), total_cycles: r.total_cycles })
    })
}
