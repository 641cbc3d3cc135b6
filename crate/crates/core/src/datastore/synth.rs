//! Seeded generator of synthetic EPC records.
//!
//! Annual energy is drawn as
//! `base_eui[year band] * area * (1 + family_effect * (members - 1)) * noise`
//! with log-normal area and noise, both clipped at `clip_sigmas`. EUI thus
//! depends on the household size and on a noise term, and only weakly on the
//! construction year band; location has no effect. Clipping keeps the
//! observed factor ranges, and hence the sensitivity sampling box, compact.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::weighted::WeightedIndex;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{DataError, EpcRecord, Municipality, Provenance, RecordSet, YearBand, LATITUDE_RANGE};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub n: usize,
    pub seed: u64,
    /// Relative frequency of each municipality, in [`Municipality::ALL`] order.
    pub municipality_weights: [f64; 15],
    /// Relative frequency of the three construction-year bands.
    pub year_band_weights: [f64; 3],
    /// Inclusive construction-year range sampled uniformly within each band.
    pub year_band_ranges: [(i32, i32); 3],
    /// Relative frequency of households with 1, 2, ... members.
    pub member_weights: Vec<f64>,
    pub area_median_m2: f64,
    pub area_log_sigma: f64,
    /// kWh/m² by year band before household and noise effects.
    pub base_eui: [f64; 3],
    /// Fractional EUI increase per household member beyond the first.
    pub family_effect: f64,
    pub noise_log_sigma: f64,
    /// Standard normal draws for area and noise are clipped to ±this value.
    pub clip_sigmas: f64,
    /// Standard deviation of the coordinate scatter around the municipal seat, degrees.
    pub location_jitter_deg: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            n: 3182,
            seed: 20_230_601,
            // Roughly proportional to the population of each municipality.
            municipality_weights: [2.8, 2.4, 2.6, 12.2, 3.1, 7.1, 4.0, 6.7, 72.9, 2.5, 5.8, 130.0, 8.7, 6.7, 5.4],
            year_band_weights: [0.35, 0.40, 0.25],
            year_band_ranges: [(1900, 1960), (1961, 1980), (1981, 2020)],
            member_weights: vec![0.20, 0.35, 0.20, 0.15, 0.07, 0.03],
            area_median_m2: 130.0,
            area_log_sigma: 0.12,
            base_eui: [112.0, 110.0, 108.0],
            family_effect: 0.06,
            noise_log_sigma: 0.05,
            clip_sigmas: 2.0,
            location_jitter_deg: 0.12,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<(), DataError> {
        let bad = |msg: String| Err(DataError::InvalidSynthConfig(msg));
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        let weights_ok = |w: &[f64]| w.iter().all(|x| x.is_finite() && *x >= 0.0) && w.iter().sum::<f64>() > 0.0;
        if !weights_ok(&self.municipality_weights) {
            return bad("municipality_weights must be non-negative with a positive sum".into());
        }
        if !weights_ok(&self.year_band_weights) {
            return bad("year_band_weights must be non-negative with a positive sum".into());
        }
        if self.member_weights.is_empty() || !weights_ok(&self.member_weights) {
            return bad("member_weights must be non-empty, non-negative with a positive sum".into());
        }
        for (band, &(lo, hi)) in YearBand::ALL.iter().zip(&self.year_band_ranges) {
            if lo > hi || YearBand::from_year(lo) != *band || YearBand::from_year(hi) != *band {
                return bad(format!("year range {lo}..={hi} does not lie inside band {}", band.as_str()));
            }
        }
        let positive = [("area_median_m2", self.area_median_m2), ("clip_sigmas", self.clip_sigmas)];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        let non_negative = [
            ("area_log_sigma", self.area_log_sigma),
            ("noise_log_sigma", self.noise_log_sigma),
            ("family_effect", self.family_effect),
            ("location_jitter_deg", self.location_jitter_deg),
        ];
        for (name, v) in non_negative {
            if !(v.is_finite() && v >= 0.0) {
                return bad(format!("{name} must be non-negative, got {v}"));
            }
        }
        if self.base_eui.iter().any(|b| !(b.is_finite() && *b > 0.0)) {
            return bad("base_eui entries must be positive".into());
        }
        Ok(())
    }
}

pub fn generate_synthetic(config: &SynthConfig) -> Result<RecordSet, DataError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let municipality = WeightedIndex::new(config.municipality_weights).expect("validated weights");
    let band = WeightedIndex::new(config.year_band_weights).expect("validated weights");
    let members = WeightedIndex::new(&config.member_weights).expect("validated weights");
    let clip = config.clip_sigmas;
    let (lat_lo, lat_hi) = LATITUDE_RANGE;

    let mut records = Vec::with_capacity(config.n);
    for i in 0..config.n {
        let m = Municipality::ALL[municipality.sample(&mut rng)];
        let b = band.sample(&mut rng);
        let (lo, hi) = config.year_band_ranges[b];
        let year = rng.random_range(lo..=hi);
        let families = members.sample(&mut rng) as u32 + 1;

        let z_area: f64 = StandardNormal.sample(&mut rng);
        let area = config.area_median_m2 * (config.area_log_sigma * z_area.clamp(-clip, clip)).exp();
        let z_noise: f64 = StandardNormal.sample(&mut rng);
        let noise = (config.noise_log_sigma * z_noise.clamp(-clip, clip)).exp();
        let household = 1.0 + config.family_effect * f64::from(families - 1);
        let energy = config.base_eui[b] * area * household * noise;

        let (seat_lat, seat_lon) = m.seat();
        let z_lat: f64 = StandardNormal.sample(&mut rng);
        let z_lon: f64 = StandardNormal.sample(&mut rng);
        let latitude = (seat_lat + config.location_jitter_deg * z_lat).clamp(lat_lo, lat_hi);
        let longitude = seat_lon + config.location_jitter_deg * 2.0 * z_lon;

        records.push(EpcRecord {
            record_id: format!("syn-{:06}", i + 1),
            municipality: m,
            construction_year: year,
            families,
            floor_area_m2: area,
            annual_energy_kwh: energy,
            latitude,
            longitude,
        });
    }
    RecordSet::new(records, Provenance::Synthetic)
}
