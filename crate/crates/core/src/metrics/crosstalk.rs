//! Grid crosstalk model.
//!
//! Wires sit row-major on a `rows × cols` cross-section. At every time step
//! each wire is treated as a victim and charged a weight for each of its
//! horizontal and vertical neighbors, depending on how the pair switches.
//! Diagonal neighbors are ignored, and so are positions outside the grid.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::{LinkConfig, Report};
use crate::bitcore::{BitString, NrziLine, Transition};
use crate::codec::{encode_trace, LineCodec};
use crate::error::{Error, Result};
use crate::exec::Execution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InteractionClass {
    /// Victim and neighbor switch in the same direction.
    SameDirection,
    /// Victim switches, neighbor holds.
    VictimOnly,
    /// Victim and neighbor switch in opposite directions.
    Opposite,
    /// Victim holds, neighbor switches.
    NeighborOnly,
    BothIdle,
}

impl InteractionClass {
    pub const ALL: [InteractionClass; 5] = [
        InteractionClass::SameDirection,
        InteractionClass::VictimOnly,
        InteractionClass::Opposite,
        InteractionClass::NeighborOnly,
        InteractionClass::BothIdle,
    ];

    pub fn of(victim: Transition, neighbor: Transition) -> Self {
        match (victim.is_active(), neighbor.is_active()) {
            (false, false) => InteractionClass::BothIdle,
            (false, true) => InteractionClass::NeighborOnly,
            (true, false) => InteractionClass::VictimOnly,
            (true, true) if victim == neighbor => InteractionClass::SameDirection,
            (true, true) => InteractionClass::Opposite,
        }
    }

    /// Name used in `LELCXT` files.
    pub fn key(self) -> &'static str {
        match self {
            InteractionClass::SameDirection => "same",
            InteractionClass::VictimOnly => "victim_only",
            InteractionClass::Opposite => "opposite",
            InteractionClass::NeighborOnly => "neighbor_only",
            InteractionClass::BothIdle => "idle",
        }
    }
}

/// Crosstalk units charged per victim/neighbor pair and class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrosstalkWeightTable {
    pub same_direction: f64,
    pub victim_only: f64,
    pub opposite: f64,
    pub neighbor_only: f64,
    pub both_idle: f64,
}

impl Default for CrosstalkWeightTable {
    fn default() -> Self {
        Self { same_direction: 0.0, victim_only: 1.0, opposite: 2.0, neighbor_only: 1.0, both_idle: 0.0 }
    }
}

impl CrosstalkWeightTable {
    pub fn weight(&self, class: InteractionClass) -> f64 {
        match class {
            InteractionClass::SameDirection => self.same_direction,
            InteractionClass::VictimOnly => self.victim_only,
            InteractionClass::Opposite => self.opposite,
            InteractionClass::NeighborOnly => self.neighbor_only,
            InteractionClass::BothIdle => self.both_idle,
        }
    }

    fn weight_mut(&mut self, class: InteractionClass) -> &mut f64 {
        match class {
            InteractionClass::SameDirection => &mut self.same_direction,
            InteractionClass::VictimOnly => &mut self.victim_only,
            InteractionClass::Opposite => &mut self.opposite,
            InteractionClass::NeighborOnly => &mut self.neighbor_only,
            InteractionClass::BothIdle => &mut self.both_idle,
        }
    }

    /// Weights must be finite and non-negative, with the all-idle pattern
    /// the cheapest.
    pub fn validate(&self) -> Result<()> {
        for c in InteractionClass::ALL {
            let w = self.weight(c);
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::invalid(format!("crosstalk weight for {} must be non-negative", c.key())));
            }
            if w < self.both_idle {
                return Err(Error::invalid(format!("crosstalk weight for {} is below the idle weight", c.key())));
            }
        }
        Ok(())
    }
}

impl fmt::Display for CrosstalkWeightTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "LELCXT")?;
        for c in InteractionClass::ALL {
            writeln!(f, "{} {}", c.key(), self.weight(c))?;
        }
        Ok(())
    }
}

impl FromStr for CrosstalkWeightTable {
    type Err = Error;

    /// `LELCXT` then `<class> <weight>` lines; classes not listed keep their
    /// default weight.
    fn from_str(s: &str) -> Result<Self> {
        const WHAT: &str = "crosstalk weight file";
        let mut lines = s.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, h)) if h.trim() == "LELCXT" => {}
            Some((_, h)) => return Err(Error::format(WHAT, format!("bad header {h:?}"))),
            None => return Err(Error::format(WHAT, "empty file")),
        }
        let mut table = CrosstalkWeightTable::default();
        for (no, line) in lines {
            let at = |reason: String| Error::format(WHAT, format!("line {}: {reason}", no + 1));
            let (name, w) = match line.split_whitespace().collect::<Vec<_>>()[..] {
                [n, w] => (n, w),
                _ => return Err(at(format!("expected `<class> <weight>`, got {line:?}"))),
            };
            let class = InteractionClass::ALL
                .into_iter()
                .find(|c| c.key() == name)
                .ok_or_else(|| at(format!("unknown class {name:?}")))?;
            *table.weight_mut(class) = w.parse().map_err(|e| at(format!("bad weight: {e}")))?;
        }
        table.validate().map_err(|e| Error::format(WHAT, e.to_string()))?;
        Ok(table)
    }
}

/// Histogram key for one victim at one time step: whether the victim
/// switches, and how its in-grid neighbors behave. `same`/`opposite` are
/// only non-zero for a switching victim; `moving` only for an idle one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassKey {
    pub victim_active: bool,
    pub same: u8,
    pub opposite: u8,
    pub idle: u8,
    pub moving: u8,
}

impl fmt::Display for ClassKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.victim_active {
            write!(f, "active:s{}o{}i{}", self.same, self.opposite, self.idle)
        } else {
            write!(f, "idle:m{}i{}", self.moving, self.idle)
        }
    }
}

/// Crosstalk of one flit stream.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StreamCrosstalk {
    pub total: f64,
    pub classes: BTreeMap<ClassKey, u64>,
}

/// Splits each payload into flits, zero-padding its last flit, and
/// concatenates all payloads into one stream.
pub fn flitize(payloads: &[BitString], flit_bits: usize) -> Vec<BitString> {
    let mut flits = Vec::new();
    for p in payloads {
        let mut padded = p.clone();
        padded.pad_to_multiple(flit_bits);
        for i in 0..padded.len() / flit_bits {
            flits.push(padded.slice(i * flit_bits..(i + 1) * flit_bits));
        }
    }
    flits
}

fn grid_neighbors(rows: usize, cols: usize) -> Vec<Vec<usize>> {
    (0..rows * cols)
        .map(|w| {
            let (r, c) = (w / cols, w % cols);
            let mut n = Vec::with_capacity(4);
            if r > 0 {
                n.push(w - cols);
            }
            if r + 1 < rows {
                n.push(w + cols);
            }
            if c > 0 {
                n.push(w - 1);
            }
            if c + 1 < cols {
                n.push(w + 1);
            }
            n
        })
        .collect()
}

/// Runs the NRZI wires through `flits` from an all-low state and totals
/// the weighted crosstalk over every victim and step.
pub fn stream_crosstalk(
    flits: &[BitString],
    rows: usize,
    cols: usize,
    weights: &CrosstalkWeightTable,
) -> Result<StreamCrosstalk> {
    let neighbors = grid_neighbors(rows, cols);
    let mut line = NrziLine::new(rows * cols, false);
    let mut step = Vec::with_capacity(rows * cols);
    let mut out = StreamCrosstalk::default();
    for flit in flits {
        line.step_into(flit, &mut step)?;
        if step.iter().all(|t| !t.is_active()) {
            // Every victim is idle with idle neighbors.
            for n in &neighbors {
                let key = ClassKey { victim_active: false, same: 0, opposite: 0, idle: n.len() as u8, moving: 0 };
                *out.classes.entry(key).or_default() += 1;
                out.total += weights.both_idle * n.len() as f64;
            }
            continue;
        }
        for (w, n) in neighbors.iter().enumerate() {
            let victim = step[w];
            let mut key = ClassKey { victim_active: victim.is_active(), same: 0, opposite: 0, idle: 0, moving: 0 };
            for &u in n {
                let class = InteractionClass::of(victim, step[u]);
                out.total += weights.weight(class);
                match class {
                    InteractionClass::SameDirection => key.same += 1,
                    InteractionClass::Opposite => key.opposite += 1,
                    InteractionClass::NeighborOnly => key.moving += 1,
                    InteractionClass::VictimOnly | InteractionClass::BothIdle => key.idle += 1,
                }
            }
            *out.classes.entry(key).or_default() += 1;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrosstalkReport {
    pub coded: StreamCrosstalk,
    pub uncoded: StreamCrosstalk,
}

impl CrosstalkReport {
    /// Coded over uncoded crosstalk; `None` when the uncoded stream has none.
    pub fn ratio(&self) -> Option<f64> {
        (self.uncoded.total > 0.0).then(|| self.coded.total / self.uncoded.total)
    }

    pub fn write_to(&self, r: &mut Report) {
        r.push_f64("xtalk_uncoded", Some(self.uncoded.total));
        r.push_f64("xtalk_coded", Some(self.coded.total));
        r.push_f64("xtalk_ratio", self.ratio());
    }
}

pub fn crosstalk_report(
    trace: &[BitString],
    codec: &dyn LineCodec,
    link: &LinkConfig,
    weights: &CrosstalkWeightTable,
) -> Result<CrosstalkReport> {
    crosstalk_report_with(trace, codec, link, weights, Execution::default())
}

/// Crosstalk of the coded and uncoded payload streams on `link`.
pub fn crosstalk_report_with(
    trace: &[BitString],
    codec: &dyn LineCodec,
    link: &LinkConfig,
    weights: &CrosstalkWeightTable,
    exec: Execution,
) -> Result<CrosstalkReport> {
    link.validate()?;
    weights.validate()?;
    for (i, p) in trace.iter().enumerate() {
        link.check_payload(i, p)?;
    }
    let coded = encode_trace(codec, trace, exec)?;
    let streams = [flitize(&coded, link.flit_bits), flitize(trace, link.flit_bits)];
    let mut results =
        exec.try_map(&streams, |_, flits| stream_crosstalk(flits, link.grid_rows, link.grid_cols, weights))?;
    let uncoded = results.pop().expect("two streams");
    let coded = results.pop().expect("two streams");
    Ok(CrosstalkReport { coded, uncoded })
}
