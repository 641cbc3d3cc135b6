//! Peer-group benchmarking: reference group selection, group statistics,
//! the 5-point rating and renovation advice.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::datastore::{FamilyBand, Municipality, RecordSet, YearBand};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BenchmarkError {
    #[error("reference group {key} has {found} records after widening, need at least {required}")]
    EmptyGroup { key: GroupKey, found: usize, required: usize },
    #[error("year {year} is outside the energy target table ({first}..={last})")]
    UnknownYear { year: i32, first: i32, last: i32 },
    #[error("invalid energy target table: {0}")]
    InvalidTargets(String),
    #[error("EUI must be finite and non-negative, got {0}")]
    InvalidEui(f64),
}

/// The answers that place a house among its peers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HouseProfile {
    pub municipality: Municipality,
    pub year_band: YearBand,
    pub family_band: FamilyBand,
    pub area_m2: f64,
}

impl HouseProfile {
    pub fn key(&self) -> GroupKey {
        GroupKey { municipality: self.municipality, year_band: self.year_band, family_band: self.family_band }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupKey {
    pub municipality: Municipality,
    pub year_band: YearBand,
    pub family_band: FamilyBand,
}

impl std::fmt::Display for GroupKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.municipality, self.year_band.as_str(), self.family_band.as_str())
    }
}

/// How far the peer filter was relaxed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupScope {
    /// Same municipality, year band and family band.
    Municipality,
    /// Whole region, same year band and family band.
    Region,
    /// Whole region, same family band, any construction year.
    RegionAllYears,
}

impl GroupScope {
    fn matches(self, key: &GroupKey, m: Municipality, y: YearBand, f: FamilyBand) -> bool {
        f == key.family_band
            && match self {
                GroupScope::Municipality => m == key.municipality && y == key.year_band,
                GroupScope::Region => y == key.year_band,
                GroupScope::RegionAllYears => true,
            }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceGroup {
    pub key: GroupKey,
    pub scope: GroupScope,
    pub widened: bool,
    /// Member EUIs in dataset order.
    pub members: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSelector {
    pub min_group_size: usize,
    pub widen: bool,
}

impl Default for GroupSelector {
    fn default() -> Self {
        Self { min_group_size: 10, widen: true }
    }
}

pub fn select_reference_group(
    key: &GroupKey,
    dataset: &RecordSet,
    selector: &GroupSelector,
) -> Result<ReferenceGroup, BenchmarkError> {
    let required = selector.min_group_size.max(1);
    let scopes: &[GroupScope] = if selector.widen {
        &[GroupScope::Municipality, GroupScope::Region, GroupScope::RegionAllYears]
    } else {
        &[GroupScope::Municipality]
    };
    let mut found = 0;
    for &scope in scopes {
        let members: Vec<f64> = dataset
            .iter()
            .filter(|(r, _)| scope.matches(key, r.municipality, r.year_band(), r.family_band()))
            .map(|(_, eui)| eui)
            .collect();
        found = members.len();
        if found >= required {
            return Ok(ReferenceGroup { key: *key, scope, widened: scope != GroupScope::Municipality, members });
        }
    }
    Err(BenchmarkError::EmptyGroup { key: *key, found, required })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupStats {
    pub count: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub q20: f64,
    pub q40: f64,
    pub q60: f64,
    pub q80: f64,
}

/// Quantile by linear interpolation between the closest order statistics:
/// position `h = (n - 1) p` in the sorted sample.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of an empty sample");
    let h = (sorted.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Position of `value` in the sorted sample, in percent, inverting
/// [`quantile`]. Runs of equal values map to the middle of the run.
pub fn percentile_rank(sorted: &[f64], value: f64) -> f64 {
    assert!(!sorted.is_empty(), "percentile of an empty sample");
    let n = sorted.len();
    if value < sorted[0] {
        return 0.0;
    }
    if value > sorted[n - 1] {
        return 100.0;
    }
    if n == 1 {
        return 50.0;
    }
    let first_ge = sorted.partition_point(|&x| x < value);
    let first_gt = sorted.partition_point(|&x| x <= value);
    let h = if first_gt > first_ge {
        // exact hits on order statistics first_ge..first_gt
        (first_ge + first_gt - 1) as f64 / 2.0
    } else {
        let lo = first_ge - 1;
        lo as f64 + (value - sorted[lo]) / (sorted[lo + 1] - sorted[lo])
    };
    100.0 * h / (n - 1) as f64
}

fn sorted_members(group: &ReferenceGroup) -> Vec<f64> {
    let mut sorted = group.members.clone();
    sorted.sort_by(f64::total_cmp);
    sorted
}

pub fn compute_group_stats(group: &ReferenceGroup) -> Result<GroupStats, BenchmarkError> {
    if group.members.is_empty() {
        return Err(BenchmarkError::EmptyGroup { key: group.key, found: 0, required: 1 });
    }
    let sorted = sorted_members(group);
    let n = sorted.len();
    Ok(GroupStats {
        count: n,
        mean: sorted.iter().sum::<f64>() / n as f64,
        min: sorted[0],
        max: sorted[n - 1],
        q20: quantile(&sorted, 0.2),
        q40: quantile(&sorted, 0.4),
        q60: quantile(&sorted, 0.6),
        q80: quantile(&sorted, 0.8),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rating {
    Excellent,
    Good,
    Average,
    Poor,
    VeryPoor,
}

impl Rating {
    /// Worst to best, the order the scale is presented in.
    pub const SCALE: [Rating; 5] = [Rating::VeryPoor, Rating::Poor, Rating::Average, Rating::Good, Rating::Excellent];

    pub fn label(self) -> &'static str {
        match self {
            Rating::VeryPoor => "Very poor",
            Rating::Poor => "Poor",
            Rating::Average => "Average",
            Rating::Good => "Good",
            Rating::Excellent => "Excellent",
        }
    }

    pub fn is_below_average(self) -> bool {
        matches!(self, Rating::Poor | Rating::VeryPoor)
    }
}

/// Place `eui` on the peer quintile scale; each class is closed on its upper cut.
pub fn classify_eui(eui: f64, stats: &GroupStats) -> Rating {
    if eui <= stats.q20 {
        Rating::Excellent
    } else if eui <= stats.q40 {
        Rating::Good
    } else if eui <= stats.q60 {
        Rating::Average
    } else if eui <= stats.q80 {
        Rating::Poor
    } else {
        Rating::VeryPoor
    }
}

/// Allowed EUI per year, interpolated linearly between listed years.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<String, f64>", into = "BTreeMap<String, f64>")]
pub struct EnergyTargetTable {
    targets: BTreeMap<i32, f64>,
}

impl EnergyTargetTable {
    pub fn new(targets: BTreeMap<i32, f64>) -> Result<Self, BenchmarkError> {
        if targets.is_empty() {
            return Err(BenchmarkError::InvalidTargets("table is empty".into()));
        }
        let mut prev: Option<f64> = None;
        for (&year, &allowed) in &targets {
            if !(allowed.is_finite() && allowed > 0.0) {
                return Err(BenchmarkError::InvalidTargets(format!(
                    "allowed EUI for {year} must be positive, got {allowed}"
                )));
            }
            if prev.is_some_and(|p| allowed > p) {
                return Err(BenchmarkError::InvalidTargets(format!(
                    "allowed EUI must not increase over time (year {year})"
                )));
            }
            prev = Some(allowed);
        }
        Ok(Self { targets })
    }

    pub fn from_json(text: &str) -> Result<Self, BenchmarkError> {
        serde_json::from_str(text).map_err(|e| BenchmarkError::InvalidTargets(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, BenchmarkError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| BenchmarkError::InvalidTargets(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn years(&self) -> impl Iterator<Item = (i32, f64)> + '_ {
        self.targets.iter().map(|(&y, &v)| (y, v))
    }

    pub fn allowed_eui(&self, year: i32) -> Result<f64, BenchmarkError> {
        let (&first, _) = self.targets.first_key_value().expect("non-empty");
        let (&last, _) = self.targets.last_key_value().expect("non-empty");
        if year < first || year > last {
            return Err(BenchmarkError::UnknownYear { year, first, last });
        }
        if let Some(&v) = self.targets.get(&year) {
            return Ok(v);
        }
        let (&y0, &v0) = self.targets.range(..year).next_back().expect("bracketed");
        let (&y1, &v1) = self.targets.range(year..).next().expect("bracketed");
        let t = f64::from(year - y0) / f64::from(y1 - y0);
        Ok(v0 + t * (v1 - v0))
    }
}

impl Default for EnergyTargetTable {
    /// Illustrative trajectory; deployments load their own table.
    fn default() -> Self {
        Self::new(BTreeMap::from([(2022, 90.0), (2050, 56.0)])).expect("valid defaults")
    }
}

impl TryFrom<BTreeMap<String, f64>> for EnergyTargetTable {
    type Error = BenchmarkError;

    fn try_from(raw: BTreeMap<String, f64>) -> Result<Self, Self::Error> {
        let mut targets = BTreeMap::new();
        for (year, v) in raw {
            let y: i32 =
                year.trim().parse().map_err(|_| BenchmarkError::InvalidTargets(format!("`{year}` is not a year")))?;
            targets.insert(y, v);
        }
        Self::new(targets)
    }
}

impl From<EnergyTargetTable> for BTreeMap<String, f64> {
    fn from(table: EnergyTargetTable) -> Self {
        table.targets.into_iter().map(|(y, v)| (y.to_string(), v)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReasonCode {
    /// User EUI is at or above the allowed EUI for the target year.
    AboveAllowedEui,
    /// Rating is Poor or Very poor.
    RatingBelowAverage,
    /// Below the allowed EUI and rated Average or better.
    BelowAllowedEuiAndRatingAcceptable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Advice {
    pub needs_renovation: bool,
    pub rating: Rating,
    pub user_eui: f64,
    pub target_year: i32,
    pub allowed_eui: f64,
    pub reasons: Vec<ReasonCode>,
}

pub fn advise(user_eui: f64, rating: Rating, targets: &EnergyTargetTable, year: i32) -> Result<Advice, BenchmarkError> {
    if !(user_eui.is_finite() && user_eui >= 0.0) {
        return Err(BenchmarkError::InvalidEui(user_eui));
    }
    let allowed_eui = targets.allowed_eui(year)?;
    let mut reasons = Vec::new();
    if user_eui >= allowed_eui {
        reasons.push(ReasonCode::AboveAllowedEui);
    }
    if rating.is_below_average() {
        reasons.push(ReasonCode::RatingBelowAverage);
    }
    let needs_renovation = !reasons.is_empty();
    if !needs_renovation {
        reasons.push(ReasonCode::BelowAllowedEuiAndRatingAcceptable);
    }
    Ok(Advice { needs_renovation, rating, user_eui, target_year: year, allowed_eui, reasons })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassBoundaries {
    pub q20: f64,
    pub q40: f64,
    pub q60: f64,
    pub q80: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub user_eui: f64,
    /// Share of the peer group at or below the user, 0..=100.
    pub percentile: f64,
    pub group_mean: f64,
    pub difference_from_mean: f64,
    pub boundaries: ClassBoundaries,
}

/// Percentile needs the members themselves, so the group is passed alongside its stats.
pub fn peer_comparison(user_eui: f64, group: &ReferenceGroup, stats: &GroupStats) -> ComparisonReport {
    let sorted = sorted_members(group);
    ComparisonReport {
        user_eui,
        percentile: percentile_rank(&sorted, user_eui),
        group_mean: stats.mean,
        difference_from_mean: user_eui - stats.mean,
        boundaries: ClassBoundaries { q20: stats.q20, q40: stats.q40, q60: stats.q60, q80: stats.q80 },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datastore::{test_record, EpcRecord, Provenance};
    use proptest::prelude::*;

    fn group(members: &[f64]) -> ReferenceGroup {
        ReferenceGroup {
            key: GroupKey {
                municipality: Municipality::Umea,
                year_band: YearBand::Y1961to1980,
                family_band: FamilyBand::OneOrTwo,
            },
            scope: GroupScope::Municipality,
            widened: false,
            members: members.to_vec(),
        }
    }

    fn stats_with_cuts(q: [f64; 4]) -> GroupStats {
        GroupStats { count: 10, mean: 80.0, min: 0.0, max: 200.0, q20: q[0], q40: q[1], q60: q[2], q80: q[3] }
    }

    fn dataset(records: Vec<EpcRecord>) -> RecordSet {
        RecordSet::new(records, Provenance::Ingested).unwrap()
    }

    fn umea_key() -> GroupKey {
        group(&[]).key
    }

    #[test]
    fn exact_group_selected() {
        let mut records: Vec<_> = (0..40)
            .map(|i| test_record(&format!("u{i}"), Municipality::Umea, 1970, 2, 100.0, 10_000.0 + i as f64))
            .collect();
        records.push(test_record("other", Municipality::Mala, 1970, 2, 100.0, 5000.0));
        records.push(test_record("old", Municipality::Umea, 1950, 2, 100.0, 5000.0));
        let g = select_reference_group(&umea_key(), &dataset(records), &GroupSelector::default()).unwrap();
        assert_eq!(g.members.len(), 40);
        assert!(!g.widened);
        assert_eq!(g.scope, GroupScope::Municipality);
    }

    #[test]
    fn sparse_group_widened_to_region() {
        let mut records = vec![
            test_record("a", Municipality::Umea, 1970, 2, 100.0, 9000.0),
            test_record("b", Municipality::Umea, 1975, 1, 100.0, 9000.0),
        ];
        records.extend((0..12).map(|i| test_record(&format!("m{i}"), Municipality::Mala, 1965, 2, 100.0, 12_000.0)));
        let g = select_reference_group(&umea_key(), &dataset(records), &GroupSelector::default()).unwrap();
        assert!(g.widened);
        assert_eq!(g.scope, GroupScope::Region);
        assert_eq!(g.members.len(), 14);
    }

    #[test]
    fn widening_drops_year_band_last() {
        let records: Vec<_> =
            (0..12).map(|i| test_record(&format!("m{i}"), Municipality::Mala, 1990, 1, 100.0, 12_000.0)).collect();
        let g = select_reference_group(&umea_key(), &dataset(records.clone()), &GroupSelector::default()).unwrap();
        assert_eq!(g.scope, GroupScope::RegionAllYears);
        let no_widen = GroupSelector { widen: false, ..GroupSelector::default() };
        assert!(select_reference_group(&umea_key(), &dataset(records), &no_widen).is_err());
    }

    #[test]
    fn empty_dataset_is_empty_group() {
        let err = select_reference_group(&umea_key(), &dataset(vec![]), &GroupSelector::default()).unwrap_err();
        assert!(matches!(err, BenchmarkError::EmptyGroup { found: 0, required: 10, .. }));
    }

    #[test]
    fn quantile_examples() {
        let s = compute_group_stats(&group(&[50.0, 10.0, 40.0, 20.0, 30.0])).unwrap();
        let close = |a: f64, b: f64| (a - b).abs() < 1e-12;
        assert!(close(s.q20, 18.0) && close(s.q40, 26.0) && close(s.q60, 34.0) && close(s.q80, 42.0), "{s:?}");
        assert_eq!((s.min, s.max, s.mean, s.count), (10.0, 50.0, 30.0, 5));

        let single = compute_group_stats(&group(&[7.0])).unwrap();
        assert_eq!([single.q20, single.q40, single.q60, single.q80, single.mean], [7.0; 5]);

        let flat = compute_group_stats(&group(&[5.0; 4])).unwrap();
        assert_eq!([flat.mean, flat.min, flat.max, flat.q20, flat.q40, flat.q60, flat.q80], [5.0; 7]);
        assert!(compute_group_stats(&group(&[])).is_err());
    }

    #[test]
    fn classification_examples() {
        let s = stats_with_cuts([50.0, 70.0, 90.0, 110.0]);
        assert_eq!(classify_eui(40.0, &s), Rating::Excellent);
        assert_eq!(classify_eui(50.0, &s), Rating::Excellent);
        assert_eq!(classify_eui(60.0, &s), Rating::Good);
        assert_eq!(classify_eui(90.0, &s), Rating::Average);
        assert_eq!(classify_eui(100.0, &s), Rating::Poor);
        assert_eq!(classify_eui(120.0, &s), Rating::VeryPoor);
    }

    #[test]
    fn advice_examples() {
        let targets = EnergyTargetTable::default();
        let a = advise(40.0, Rating::Excellent, &targets, 2022).unwrap();
        assert!(!a.needs_renovation);
        assert_eq!(a.reasons, [ReasonCode::BelowAllowedEuiAndRatingAcceptable]);
        assert_eq!(a.allowed_eui, 90.0);

        let b = advise(95.0, Rating::Excellent, &targets, 2022).unwrap();
        assert!(b.needs_renovation);
        assert_eq!(b.reasons, [ReasonCode::AboveAllowedEui]);

        let c = advise(40.0, Rating::VeryPoor, &targets, 2022).unwrap();
        assert!(c.needs_renovation);
        assert_eq!(c.reasons, [ReasonCode::RatingBelowAverage]);

        assert!(advise(90.0, Rating::Good, &targets, 2022).unwrap().needs_renovation);
        assert!(matches!(advise(40.0, Rating::Good, &targets, 2060), Err(BenchmarkError::UnknownYear { .. })));
        assert!(matches!(advise(40.0, Rating::Good, &targets, 2000), Err(BenchmarkError::UnknownYear { .. })));
    }

    #[test]
    fn target_interpolation() {
        let t = EnergyTargetTable::from_json(r#"{"2022": 90.0, "2050": 56.0}"#).unwrap();
        assert_eq!(t.allowed_eui(2050).unwrap(), 56.0);
        assert!((t.allowed_eui(2036).unwrap() - 73.0).abs() < 1e-12);
        assert!(EnergyTargetTable::from_json(r#"{"2022": 50.0, "2050": 56.0}"#).is_err());
        assert!(EnergyTargetTable::from_json(r#"{"2022": -1.0}"#).is_err());
        assert!(EnergyTargetTable::from_json(r#"{"soon": 1.0}"#).is_err());
        assert!(EnergyTargetTable::from_json("{}").is_err());
        assert_eq!(serde_json::to_string(&t).unwrap(), r#"{"2022":90.0,"2050":56.0}"#);
    }

    #[test]
    fn percentile_examples() {
        let g = group(&[10.0, 20.0, 30.0, 40.0, 50.0]);
        let s = compute_group_stats(&g).unwrap();
        assert_eq!(peer_comparison(10.0, &g, &s).percentile, 0.0);
        assert_eq!(peer_comparison(50.0, &g, &s).percentile, 100.0);
        assert_eq!(peer_comparison(30.0, &g, &s).percentile, 50.0);
        assert_eq!(peer_comparison(18.0, &g, &s).percentile, 20.0);
        assert_eq!(peer_comparison(5.0, &g, &s).percentile, 0.0);
        assert_eq!(peer_comparison(60.0, &g, &s).percentile, 100.0);
        let r = peer_comparison(42.0, &g, &s);
        assert!((r.percentile - 80.0).abs() < 1e-12);
        assert_eq!(r.difference_from_mean, 12.0);
    }

    proptest! {
        #[test]
        fn percentile_inverts_quantile(mut xs in proptest::collection::vec(0.0f64..300.0, 2..60), p in 0.0f64..1.0) {
            xs.sort_by(f64::total_cmp);
            xs.dedup();
            prop_assume!(xs.len() >= 2);
            let q = quantile(&xs, p);
            let back = percentile_rank(&xs, q) / 100.0;
            prop_assert!((back - p).abs() < 1e-9, "p={} back={}", p, back);
        }

        #[test]
        fn advice_monotone_in_eui(e1 in 0.0f64..200.0, e2 in 0.0f64..200.0, r in 0usize..5, year in 2022i32..=2050) {
            let targets = EnergyTargetTable::default();
            let rating = Rating::SCALE[r];
            let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
            let a = advise(lo, rating, &targets, year).unwrap();
            let b = advise(hi, rating, &targets, year).unwrap();
            prop_assert!(!a.needs_renovation || b.needs_renovation);
            prop_assert!(!b.reasons.is_empty());
            prop_assert_eq!(
                !b.needs_renovation,
                hi < b.allowed_eui && !rating.is_below_average()
            );
        }

        #[test]
        fn stats_ordered(xs in proptest::collection::vec(0.0f64..500.0, 1..100)) {
            let s = compute_group_stats(&group(&xs)).unwrap();
            prop_assert!(s.min <= s.q20 && s.q20 <= s.q40 && s.q40 <= s.q60 && s.q60 <= s.q80 && s.q80 <= s.max);
            prop_assert!(s.min <= s.mean && s.mean <= s.max);
        }

        #[test]
        fn selection_matches_brute_force(
            rows in proptest::collection::vec((0usize..15, 1900i32..2020, 1u32..6, 50.0f64..250.0, 2000.0f64..40_000.0), 0..80),
            m in 0usize..15, y in 0usize..3, f in 0usize..2,
        ) {
            let records: Vec<_> = rows.iter().enumerate()
                .map(|(i, &(mi, year, fam, area, kwh))| test_record(&format!("r{i}"), Municipality::ALL[mi], year, fam, area, kwh))
                .collect();
            let set = dataset(records.clone());
            let key = GroupKey { municipality: Municipality::ALL[m], year_band: YearBand::ALL[y], family_band: FamilyBand::ALL[f] };
            let selector = GroupSelector { min_group_size: 1, widen: false };
            let expected: Vec<f64> = records.iter()
                .filter(|r| r.municipality == key.municipality
                    && YearBand::from_year(r.construction_year) == key.year_band
                    && FamilyBand::from_count(r.families) == key.family_band)
                .map(|r| r.annual_energy_kwh / r.floor_area_m2)
                .collect();
            match select_reference_group(&key, &set, &selector) {
                Ok(g) => prop_assert_eq!(g.members, expected),
                Err(_) => prop_assert!(expected.is_empty()),
            }
        }
    }

    #[test]
    fn quintile_occupancy_on_uniform_group() {
        use rand::{RngExt, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let members: Vec<f64> = (0..10_000).map(|_| rng.random_range(40.0..200.0)).collect();
        let s = compute_group_stats(&group(&members)).unwrap();
        let mut counts = [0usize; 5];
        for _ in 0..10_000 {
            counts[classify_eui(rng.random_range(40.0..200.0), &s) as usize] += 1;
        }
        for c in counts {
            let share = c as f64 / 10_000.0;
            assert!((share - 0.2).abs() <= 0.03, "{counts:?}");
        }
    }
}
