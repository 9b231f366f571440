//! Units of measure and exact conversion factors.
//!
//! Conversion is only defined inside a [`UnitFamily`]. The abstract
//! `time_unit` lives in its own family and never converts to seconds.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UnitFamily {
    AbstractTime,
    Time,
    DataSize,
    DataRate,
    Frequency,
    Percent,
    Count,
    Dimensionless,
}

impl UnitFamily {
    pub fn as_str(self) -> &'static str {
        match self {
            UnitFamily::AbstractTime => "abstract_time",
            UnitFamily::Time => "time",
            UnitFamily::DataSize => "data_size",
            UnitFamily::DataRate => "data_rate",
            UnitFamily::Frequency => "frequency",
            UnitFamily::Percent => "percent",
            UnitFamily::Count => "count",
            UnitFamily::Dimensionless => "dimensionless",
        }
    }
}

struct UnitDef {
    name: &'static str,
    aliases: &'static [&'static str],
    family: UnitFamily,
    // factor to the family base unit, as numer/denom
    numer: u64,
    denom: u64,
}

const UNITS: &[UnitDef] = &[
    UnitDef { name: "time_unit", aliases: &[], family: UnitFamily::AbstractTime, numer: 1, denom: 1 },
    UnitDef { name: "ms", aliases: &[], family: UnitFamily::Time, numer: 1, denom: 1000 },
    UnitDef { name: "s", aliases: &["sec"], family: UnitFamily::Time, numer: 1, denom: 1 },
    UnitDef { name: "min", aliases: &[], family: UnitFamily::Time, numer: 60, denom: 1 },
    UnitDef { name: "h", aliases: &["hour"], family: UnitFamily::Time, numer: 3600, denom: 1 },
    UnitDef { name: "day", aliases: &["days"], family: UnitFamily::Time, numer: 86_400, denom: 1 },
    UnitDef { name: "bytes", aliases: &["B", "byte"], family: UnitFamily::DataSize, numer: 1, denom: 1 },
    UnitDef { name: "KB", aliases: &[], family: UnitFamily::DataSize, numer: 1_000, denom: 1 },
    UnitDef { name: "MB", aliases: &[], family: UnitFamily::DataSize, numer: 1_000_000, denom: 1 },
    UnitDef { name: "GB", aliases: &[], family: UnitFamily::DataSize, numer: 1_000_000_000, denom: 1 },
    UnitDef { name: "TB", aliases: &[], family: UnitFamily::DataSize, numer: 1_000_000_000_000, denom: 1 },
    UnitDef { name: "KiB", aliases: &[], family: UnitFamily::DataSize, numer: 1 << 10, denom: 1 },
    UnitDef { name: "MiB", aliases: &[], family: UnitFamily::DataSize, numer: 1 << 20, denom: 1 },
    UnitDef { name: "GiB", aliases: &[], family: UnitFamily::DataSize, numer: 1 << 30, denom: 1 },
    UnitDef { name: "TiB", aliases: &[], family: UnitFamily::DataSize, numer: 1 << 40, denom: 1 },
    UnitDef { name: "bytes_per_s", aliases: &["Bps"], family: UnitFamily::DataRate, numer: 1, denom: 1 },
    UnitDef { name: "KBps", aliases: &[], family: UnitFamily::DataRate, numer: 1_000, denom: 1 },
    UnitDef { name: "MBps", aliases: &[], family: UnitFamily::DataRate, numer: 1_000_000, denom: 1 },
    UnitDef { name: "GBps", aliases: &[], family: UnitFamily::DataRate, numer: 1_000_000_000, denom: 1 },
    UnitDef { name: "bps", aliases: &[], family: UnitFamily::DataRate, numer: 1, denom: 8 },
    UnitDef { name: "Kbps", aliases: &[], family: UnitFamily::DataRate, numer: 125, denom: 1 },
    UnitDef { name: "Mbps", aliases: &[], family: UnitFamily::DataRate, numer: 125_000, denom: 1 },
    UnitDef { name: "Gbps", aliases: &[], family: UnitFamily::DataRate, numer: 125_000_000, denom: 1 },
    UnitDef { name: "Hz", aliases: &["per_s"], family: UnitFamily::Frequency, numer: 1, denom: 1 },
    UnitDef { name: "kHz", aliases: &[], family: UnitFamily::Frequency, numer: 1_000, denom: 1 },
    UnitDef { name: "MHz", aliases: &[], family: UnitFamily::Frequency, numer: 1_000_000, denom: 1 },
    UnitDef { name: "GHz", aliases: &[], family: UnitFamily::Frequency, numer: 1_000_000_000, denom: 1 },
    UnitDef { name: "per_min", aliases: &[], family: UnitFamily::Frequency, numer: 1, denom: 60 },
    UnitDef { name: "per_hour", aliases: &[], family: UnitFamily::Frequency, numer: 1, denom: 3600 },
    UnitDef { name: "percent", aliases: &["pct"], family: UnitFamily::Percent, numer: 1, denom: 1 },
    UnitDef { name: "ratio", aliases: &[], family: UnitFamily::Percent, numer: 100, denom: 1 },
    UnitDef { name: "count", aliases: &[], family: UnitFamily::Count, numer: 1, denom: 1 },
    UnitDef { name: "dimensionless", aliases: &[], family: UnitFamily::Dimensionless, numer: 1, denom: 1 },
];

/// A known unit of measure. Compares by canonical name.
#[derive(Clone, Copy)]
pub struct Unit(&'static UnitDef);

impl Unit {
    /// Looks up a unit by canonical name or alias. Names are case-sensitive
    /// (`MB` and `Mbps` differ by more than case).
    pub fn parse(name: &str) -> Option<Unit> {
        UNITS.iter().find(|u| u.name == name || u.aliases.contains(&name)).map(Unit)
    }

    pub fn name(self) -> &'static str {
        self.0.name
    }

    pub fn family(self) -> UnitFamily {
        self.0.family
    }

    pub fn is_dimensionless(self) -> bool {
        self.0.family == UnitFamily::Dimensionless
    }

    /// Multiplier taking a magnitude in this unit to the family base unit.
    pub fn factor(self) -> BigRational {
        BigRational::new(BigInt::from(self.0.numer), BigInt::from(self.0.denom))
    }

    pub fn convertible_to(self, other: Unit) -> bool {
        self.family() == other.family()
    }

    /// Converts `magnitude` expressed in `self` into `target`.
    pub fn convert(self, magnitude: &BigRational, target: Unit) -> Option<BigRational> {
        if !self.convertible_to(target) {
            return None;
        }
        Some(magnitude * self.factor() / target.factor())
    }

    pub fn all() -> impl Iterator<Item = Unit> {
        UNITS.iter().map(Unit)
    }

    pub fn dimensionless() -> Unit {
        Unit::parse("dimensionless").expect("dimensionless unit is built in")
    }
}

impl PartialEq for Unit {
    fn eq(&self, other: &Self) -> bool {
        self.0.name == other.0.name
    }
}

impl Eq for Unit {}

impl std::hash::Hash for Unit {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.name.hash(state)
    }
}

impl fmt::Debug for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Unit({})", self.0.name)
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0.name)
    }
}
