//! The 47 acoustic descriptors in canonical extraction order.

use std::fmt;

use crate::error::{LacError, Result};

pub const FEATURE_COUNT: usize = 47;
pub const BARK_BAND_COUNT: usize = 24;

/// Descriptor family. The order of the variants is the cumulative order used
/// by the ablation harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Temporal,
    Spectral,
    Harmonic,
    Bark,
    Psychoacoustic,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Temporal,
        Family::Spectral,
        Family::Harmonic,
        Family::Bark,
        Family::Psychoacoustic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Temporal => "temporal",
            Family::Spectral => "spectral",
            Family::Harmonic => "harmonic",
            Family::Bark => "bark",
            Family::Psychoacoustic => "psychoacoustic",
        }
    }

    pub fn from_name(name: &str) -> Result<Family> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == name.trim().to_ascii_lowercase())
            .ok_or_else(|| LacError::InvalidConfig(format!("unknown feature family `{name}`")))
    }

    /// Features of this family, in canonical order.
    pub fn features(self) -> impl Iterator<Item = FeatureId> {
        FeatureId::all().filter(move |f| f.family() == self)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Position of a descriptor in the canonical 47-slot order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeatureId(u8);

struct FeatureInfo {
    name: &'static str,
    family: Family,
    /// Closed lower end of the reachable range.
    domain_lower: f64,
    /// Open upper end of the reachable range.
    domain_upper: f64,
}

const fn info(name: &'static str, family: Family, lo: f64, hi: f64) -> FeatureInfo {
    FeatureInfo {
        name,
        family,
        domain_lower: lo,
        domain_upper: hi,
    }
}

const INF: f64 = f64::INFINITY;

const SCALAR_FEATURES: [FeatureInfo; 21] = [
    info("rms_energy", Family::Temporal, 0.0, INF),
    info("crest_factor_db", Family::Temporal, 0.0, INF),
    info("zero_crossing_rate", Family::Temporal, 0.0, INF),
    info("log_attack_time", Family::Temporal, -INF, INF),
    info("attack_slope_db_s", Family::Temporal, 0.0, INF),
    info("temporal_centroid", Family::Temporal, 0.0, 1.0),
    info("decay_time_s", Family::Temporal, 0.0, INF),
    info("spectral_centroid_hz", Family::Spectral, 0.0, INF),
    info("spectral_flatness", Family::Spectral, 0.0, INF),
    info("spectral_rolloff_hz", Family::Spectral, 0.0, INF),
    info("spectral_flux", Family::Spectral, 0.0, INF),
    info("spectral_kurtosis", Family::Spectral, 0.0, INF),
    info("spectral_entropy", Family::Spectral, 0.0, INF),
    info("spectral_irregularity", Family::Spectral, 0.0, INF),
    info("f0_hz", Family::Harmonic, 0.0, 5120.0),
    info("harmonic_noise_ratio_db", Family::Harmonic, -INF, INF),
    info("inharmonicity", Family::Harmonic, 0.0, INF),
    info("tristimulus_1", Family::Harmonic, 0.0, INF),
    info("tristimulus_2", Family::Harmonic, 0.0, INF),
    info("tristimulus_3", Family::Harmonic, 0.0, INF),
    info("odd_even_harmonic_ratio", Family::Harmonic, 0.0, INF),
];

const BARK_NAMES: [&str; BARK_BAND_COUNT] = [
    "bark_band_1",
    "bark_band_2",
    "bark_band_3",
    "bark_band_4",
    "bark_band_5",
    "bark_band_6",
    "bark_band_7",
    "bark_band_8",
    "bark_band_9",
    "bark_band_10",
    "bark_band_11",
    "bark_band_12",
    "bark_band_13",
    "bark_band_14",
    "bark_band_15",
    "bark_band_16",
    "bark_band_17",
    "bark_band_18",
    "bark_band_19",
    "bark_band_20",
    "bark_band_21",
    "bark_band_22",
    "bark_band_23",
    "bark_band_24",
];

const PSYCHO_FEATURES: [FeatureInfo; 2] = [
    info("sharpness_acum", Family::Psychoacoustic, 0.0, INF),
    info("roughness", Family::Psychoacoustic, 0.0, INF),
];

/// Critical-band edges in Hz; band `k` (1-based) spans `[EDGES[k-1], EDGES[k])`.
pub const BARK_EDGES_HZ: [f64; BARK_BAND_COUNT + 1] = [
    20.0, 100.0, 200.0, 300.0, 400.0, 510.0, 630.0, 770.0, 920.0, 1080.0, 1270.0, 1480.0, 1720.0, 2000.0, 2320.0,
    2700.0, 3150.0, 3700.0, 4400.0, 5300.0, 6400.0, 7700.0, 9500.0, 12000.0, 15500.0,
];

const BARK_START: u8 = 21;
const PSYCHO_START: u8 = BARK_START + BARK_BAND_COUNT as u8;

impl FeatureId {
    pub const RMS_ENERGY: FeatureId = FeatureId(0);
    pub const CREST_FACTOR_DB: FeatureId = FeatureId(1);
    pub const ZERO_CROSSING_RATE: FeatureId = FeatureId(2);
    pub const LOG_ATTACK_TIME: FeatureId = FeatureId(3);
    pub const ATTACK_SLOPE_DB_S: FeatureId = FeatureId(4);
    pub const TEMPORAL_CENTROID: FeatureId = FeatureId(5);
    pub const DECAY_TIME_S: FeatureId = FeatureId(6);
    pub const SPECTRAL_CENTROID_HZ: FeatureId = FeatureId(7);
    pub const SPECTRAL_FLATNESS: FeatureId = FeatureId(8);
    pub const SPECTRAL_ROLLOFF_HZ: FeatureId = FeatureId(9);
    pub const SPECTRAL_FLUX: FeatureId = FeatureId(10);
    pub const SPECTRAL_KURTOSIS: FeatureId = FeatureId(11);
    pub const SPECTRAL_ENTROPY: FeatureId = FeatureId(12);
    pub const SPECTRAL_IRREGULARITY: FeatureId = FeatureId(13);
    pub const F0_HZ: FeatureId = FeatureId(14);
    pub const HARMONIC_NOISE_RATIO_DB: FeatureId = FeatureId(15);
    pub const INHARMONICITY: FeatureId = FeatureId(16);
    pub const TRISTIMULUS_1: FeatureId = FeatureId(17);
    pub const TRISTIMULUS_2: FeatureId = FeatureId(18);
    pub const TRISTIMULUS_3: FeatureId = FeatureId(19);
    pub const ODD_EVEN_HARMONIC_RATIO: FeatureId = FeatureId(20);
    pub const SHARPNESS_ACUM: FeatureId = FeatureId(PSYCHO_START);
    pub const ROUGHNESS: FeatureId = FeatureId(PSYCHO_START + 1);

    pub fn all() -> impl Iterator<Item = FeatureId> + Clone {
        (0..FEATURE_COUNT as u8).map(FeatureId)
    }

    pub fn from_index(index: usize) -> Result<FeatureId> {
        if index < FEATURE_COUNT {
            Ok(FeatureId(index as u8))
        } else {
            Err(LacError::IndexOutOfRange(format!("feature index {index}")))
        }
    }

    pub fn from_name(name: &str) -> Result<FeatureId> {
        FeatureId::all()
            .find(|f| f.name() == name)
            .ok_or_else(|| LacError::UnknownFeature(name.to_string()))
    }

    /// Bark band `band` in `1..=24`.
    pub fn bark(band: usize) -> Result<FeatureId> {
        if (1..=BARK_BAND_COUNT).contains(&band) {
            Ok(FeatureId(BARK_START + band as u8 - 1))
        } else {
            Err(LacError::IndexOutOfRange(format!("bark band {band}")))
        }
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// 1-based band number for Bark features.
    pub fn bark_band(self) -> Option<usize> {
        (BARK_START..PSYCHO_START)
            .contains(&self.0)
            .then(|| (self.0 - BARK_START) as usize + 1)
    }

    fn info(self) -> Option<&'static FeatureInfo> {
        let i = self.0;
        if i < BARK_START {
            Some(&SCALAR_FEATURES[i as usize])
        } else if i >= PSYCHO_START {
            Some(&PSYCHO_FEATURES[(i - PSYCHO_START) as usize])
        } else {
            None
        }
    }

    pub fn name(self) -> &'static str {
        match self.bark_band() {
            Some(band) => BARK_NAMES[band - 1],
            None => self.info().map(|i| i.name).unwrap_or_default(),
        }
    }

    pub fn family(self) -> Family {
        match self.info() {
            Some(i) => i.family,
            None => Family::Bark,
        }
    }

    /// Reachable value range `[lower, upper)` used by coverage checks.
    pub fn domain(self) -> (f64, f64) {
        match self.info() {
            Some(i) => (i.domain_lower, i.domain_upper),
            None => (0.0, INF),
        }
    }
}

impl fmt::Display for FeatureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A set of families, used to restrict scoring and transmission.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FamilySet(u8);

impl FamilySet {
    pub const ALL: FamilySet = FamilySet(0b11111);
    pub const EMPTY: FamilySet = FamilySet(0);

    fn bit(family: Family) -> u8 {
        1 << (family as u8)
    }

    pub fn only(family: Family) -> FamilySet {
        FamilySet(Self::bit(family))
    }

    /// The first `n` families in cumulative order.
    pub fn prefix(n: usize) -> FamilySet {
        Family::ALL.iter().take(n).fold(FamilySet::EMPTY, |s, f| s.with(*f))
    }

    pub fn with(self, family: Family) -> FamilySet {
        FamilySet(self.0 | Self::bit(family))
    }

    pub fn contains(self, family: Family) -> bool {
        self.0 & Self::bit(family) != 0
    }

    pub fn includes(self, feature: FeatureId) -> bool {
        self.contains(feature.family())
    }

    pub fn families(self) -> impl Iterator<Item = Family> {
        Family::ALL.into_iter().filter(move |f| self.contains(*f))
    }

    pub fn feature_count(self) -> usize {
        FeatureId::all().filter(|f| self.includes(*f)).count()
    }

    /// Parses a comma-separated family list such as `temporal,spectral`.
    pub fn parse(list: &str) -> Result<FamilySet> {
        if list.trim().eq_ignore_ascii_case("all") {
            return Ok(FamilySet::ALL);
        }
        list.split(',')
            .filter(|s| !s.trim().is_empty())
            .try_fold(FamilySet::EMPTY, |set, name| {
                Family::from_name(name).map(|f| set.with(f))
            })
    }
}

impl fmt::Display for FamilySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self.families().map(Family::name).collect();
        f.write_str(&names.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_counts_match_inventory() {
        let count = |fam| FeatureId::all().filter(|f| f.family() == fam).count();
        assert_eq!(count(Family::Temporal), 7);
        assert_eq!(count(Family::Spectral), 7);
        assert_eq!(count(Family::Harmonic), 7);
        assert_eq!(count(Family::Bark), 24);
        assert_eq!(count(Family::Psychoacoustic), 2);
    }

    #[test]
    fn names_are_unique_and_round_trip() {
        let mut names: Vec<_> = FeatureId::all().map(FeatureId::name).collect();
        for (i, name) in names.iter().enumerate() {
            assert_eq!(FeatureId::from_name(name).unwrap().index(), i);
        }
        names.sort();
        names.dedup();
        assert_eq!(names.len(), FEATURE_COUNT);
    }

    #[test]
    fn bark_ids() {
        assert_eq!(FeatureId::bark(1).unwrap().name(), "bark_band_1");
        assert_eq!(FeatureId::bark(24).unwrap().name(), "bark_band_24");
        assert_eq!(FeatureId::bark(7).unwrap().bark_band(), Some(7));
        assert!(FeatureId::bark(0).is_err());
        assert!(FeatureId::bark(25).is_err());
        assert_eq!(FeatureId::SHARPNESS_ACUM.name(), "sharpness_acum");
        assert_eq!(FeatureId::ROUGHNESS.index(), 46);
    }

    #[test]
    fn family_set_parsing() {
        let s = FamilySet::parse("temporal, spectral").unwrap();
        assert_eq!(s, FamilySet::prefix(2));
        assert_eq!(s.feature_count(), 14);
        assert_eq!(FamilySet::parse("all").unwrap(), FamilySet::ALL);
        assert!(FamilySet::parse("timbre").is_err());
        assert_eq!(
            FamilySet::ALL.to_string(),
            "temporal,spectral,harmonic,bark,psychoacoustic"
        );
    }
}
