//! Omega network topology: shuffle-exchange wiring, 2x2 switching elements and
//! destination-tag routing.
//!
//! An N-port omega network has n = log2 N stages. Every stage is preceded by a
//! perfect shuffle of the N lines (a one-bit left circular rotation of the line
//! address), and the 2x2 element at stage k replaces the low bit of the shuffled
//! line with bit k of the destination address, most significant bit first.
//!
//! Two routing implementations are provided on purpose: [`route_path`] computes
//! the route in closed form from sliding windows over the concatenated
//! source/destination bits, while [`simulate_path`] replays the fabric stage by
//! stage. Their agreement is checked exhaustively in the test suite and the
//! conflict oracle is built on the simulation only.

use std::fmt;

use crate::error::{Error, Result};

/// Shape of an N x N omega network: `size` ports wired through `stages`
/// switching stages of `size / 2` elements each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NetworkConfig {
    size: usize,
    stages: u32,
}

impl NetworkConfig {
    /// Smallest supported network; below this there is no inter-stage wiring
    /// to speak of.
    pub const MIN_SIZE: usize = 4;

    /// Largest supported network, bounded so a source/destination bit pair
    /// always fits in a `u64` row.
    pub const MAX_SIZE: usize = 1 << 31;

    pub fn new(size: usize) -> Result<Self> {
        if !(Self::MIN_SIZE..=Self::MAX_SIZE).contains(&size) || !size.is_power_of_two() {
            return Err(Error::InvalidSize(size));
        }
        Ok(NetworkConfig {
            size,
            stages: size.trailing_zeros(),
        })
    }

    /// Number of input (and output) ports, N.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Number of switching stages, n = log2 N.
    pub fn stages(&self) -> u32 {
        self.stages
    }

    /// Switching elements per stage, N / 2.
    pub fn switches_per_stage(&self) -> usize {
        self.size / 2
    }

    pub fn contains(&self, a: Address) -> bool {
        (a.0 as usize) < self.size
    }

    pub(crate) fn check(&self, a: Address) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::AddressOutOfRange {
                value: a.0,
                size: self.size,
            })
        }
    }

    fn line_mask(&self) -> u32 {
        (self.size - 1) as u32
    }
}

/// A terminal or line address: an n-bit value read most significant bit first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Address(pub u32);

impl Address {
    /// Zero-padded binary rendering at the network's bit width.
    pub fn bits(self, cfg: &NetworkConfig) -> String {
        format!("{:0width$b}", self.0, width = cfg.stages() as usize)
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u32> for Address {
    fn from(value: u32) -> Self {
        Address(value)
    }
}

/// A switching element, identified by its stage and its position within the
/// stage (0 ..= N/2 - 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SwitchId {
    pub stage: u32,
    pub index: u32,
}

/// The complete route of one message: the line occupied at the input boundary,
/// at every inter-stage boundary and at the output boundary (`links`, length
/// n + 1), plus the switch traversed at each stage (`switches`, length n).
///
/// `links[0]` is the source, `links[n]` the destination, and
/// `switches[k].index == links[k + 1] >> 1` always holds: a stage's switch is
/// the one whose output line the message leaves on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub links: Vec<u32>,
    pub switches: Vec<SwitchId>,
}

impl Path {
    pub fn source(&self) -> u32 {
        self.links[0]
    }

    pub fn destination(&self) -> u32 {
        *self.links.last().unwrap()
    }
}

fn shuffle_raw(line: u32, cfg: &NetworkConfig) -> u32 {
    let n = cfg.stages();
    ((line << 1) | (line >> (n - 1))) & cfg.line_mask()
}

/// Perfect shuffle: the one-bit left circular rotation that wires consecutive
/// stages together.
pub fn shuffle(a: Address, cfg: &NetworkConfig) -> Result<Address> {
    cfg.check(a)?;
    Ok(Address(shuffle_raw(a.0, cfg)))
}

/// Closed-form route: with C the 2n-bit concatenation of source and
/// destination, the line at boundary b is the value of the width-n window of C
/// starting at bit b.
pub fn route_path(s: Address, d: Address, cfg: &NetworkConfig) -> Result<Path> {
    cfg.check(s)?;
    cfg.check(d)?;
    let n = cfg.stages();
    let combined = ((s.0 as u64) << n) | d.0 as u64;
    let mask = cfg.line_mask() as u64;
    let links: Vec<u32> = (0..=n)
        .map(|b| ((combined >> (n - b)) & mask) as u32)
        .collect();
    let switches = (0..n)
        .map(|k| SwitchId {
            stage: k,
            index: links[k as usize + 1] >> 1,
        })
        .collect();
    Ok(Path { links, switches })
}

/// Stage-by-stage replay of the fabric: shuffle the line, then let the stage-k
/// element set the low bit to bit k of the destination. Kept independent of
/// [`route_path`] so the two can check each other.
pub fn simulate_path(s: Address, d: Address, cfg: &NetworkConfig) -> Result<Path> {
    cfg.check(s)?;
    cfg.check(d)?;
    let n = cfg.stages();
    let mut links = Vec::with_capacity(n as usize + 1);
    let mut switches = Vec::with_capacity(n as usize);
    let mut line = s.0;
    links.push(line);
    for k in 0..n {
        line = shuffle_raw(line, cfg);
        let routing_bit = (d.0 >> (n - 1 - k)) & 1;
        line = (line & !1) | routing_bit;
        links.push(line);
        switches.push(SwitchId {
            stage: k,
            index: line >> 1,
        });
    }
    Ok(Path { links, switches })
}
