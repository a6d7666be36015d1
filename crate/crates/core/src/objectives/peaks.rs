//! Nearest-peak landscapes with an arbitrary number of peaks.

use serde::{Deserialize, Serialize};

use super::{assert_dim, Membership, Objective, TargetKind, TargetSet};
use crate::bitcore::{hamming_distance, BitString};
use crate::error::{check_dim, domain, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPeak")]
pub struct PeakSpec {
    pub centre: BitString,
    pub height: f64,
    pub slope: f64,
}

#[derive(Deserialize)]
struct RawPeak {
    centre: BitString,
    height: f64,
    slope: f64,
}

impl TryFrom<RawPeak> for PeakSpec {
    type Error = crate::error::Error;
    fn try_from(raw: RawPeak) -> Result<Self> {
        PeakSpec::new(raw.centre, raw.height, raw.slope)
    }
}

impl PeakSpec {
    pub fn new(centre: BitString, height: f64, slope: f64) -> Result<Self> {
        if !(height > 0.0 && slope > 0.0 && height.is_finite() && slope.is_finite()) {
            return domain(format!(
                "peak height and slope must be positive, got {height} and {slope}"
            ));
        }
        Ok(Self { centre, height, slope })
    }

    fn value_at(&self, distance: usize) -> f64 {
        self.height - self.slope * distance as f64
    }
}

fn check_peaks(peaks: &[PeakSpec], n: usize) -> Result<()> {
    if peaks.is_empty() {
        return domain("at least one peak is required");
    }
    peaks.iter().try_for_each(|p| check_dim(n, p.centre.len()))
}

/// Fitness from the closest peak. Ties on distance go to the higher peak,
/// then to the lower index.
pub fn nearest_peak(peaks: &[PeakSpec], x: &BitString) -> Result<f64> {
    check_peaks(peaks, x.len())?;
    Ok(nearest(peaks, x))
}

fn nearest(peaks: &[PeakSpec], x: &BitString) -> f64 {
    let mut best: Option<(usize, &PeakSpec)> = None;
    for p in peaks {
        let d = hamming_distance(x, &p.centre).expect("dimensions checked");
        best = match best {
            Some((bd, bp)) if bd < d || (bd == d && bp.height >= p.height) => Some((bd, bp)),
            _ => Some((d, p)),
        };
    }
    let (d, p) = best.expect("non-empty peak list");
    p.value_at(d)
}

/// Pointwise maximum of every peak's cone.
pub fn weighted_nearest_peak(peaks: &[PeakSpec], x: &BitString) -> Result<f64> {
    check_peaks(peaks, x.len())?;
    Ok(weighted(peaks, x))
}

fn weighted(peaks: &[PeakSpec], x: &BitString) -> f64 {
    peaks
        .iter()
        .map(|p| p.value_at(hamming_distance(x, &p.centre).expect("dimensions checked")))
        .fold(f64::NEG_INFINITY, f64::max)
}

#[derive(Clone, Debug)]
pub struct NearestPeak {
    n: usize,
    peaks: Vec<PeakSpec>,
    weighted: bool,
}

impl NearestPeak {
    pub fn new(peaks: Vec<PeakSpec>, weighted: bool) -> Result<Self> {
        let n = peaks.first().map(|p| p.centre.len()).unwrap_or(0);
        check_peaks(&peaks, n)?;
        Ok(Self { n, peaks, weighted })
    }

    pub fn peaks(&self) -> &[PeakSpec] {
        &self.peaks
    }
}

impl Objective for NearestPeak {
    fn name(&self) -> String {
        if self.weighted {
            "weighted-nearest-peak"
        } else {
            "nearest-peak"
        }
        .into()
    }
    fn dimension(&self) -> usize {
        self.n
    }
    fn evaluate(&self, x: &BitString) -> f64 {
        assert_dim(self.n, x);
        if self.weighted {
            weighted(&self.peaks, x)
        } else {
            nearest(&self.peaks, x)
        }
    }
    /// Centres of the tallest peaks: no point can exceed the height of the
    /// peak that scores it.
    fn global_optima(&self) -> Result<TargetSet> {
        let top = self.peaks.iter().map(|p| p.height).fold(f64::NEG_INFINITY, f64::max);
        let mut centres: Vec<BitString> = self
            .peaks
            .iter()
            .filter(|p| p.height == top)
            .map(|p| p.centre.clone())
            .collect();
        centres.sort();
        centres.dedup();
        Ok(TargetSet::new(
            TargetKind::GlobalOptima,
            self.n,
            Membership::Points(centres),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn single_peak() {
        let c = bs("101100");
        let peaks = vec![PeakSpec::new(c.clone(), 10.0, 1.0).unwrap()];
        assert_eq!(nearest_peak(&peaks, &c).unwrap(), 10.0);
        let mut x = c.clone();
        x.flip(0);
        x.flip(3);
        x.flip(5);
        assert_eq!(nearest_peak(&peaks, &x).unwrap(), 7.0);
        assert_eq!(weighted_nearest_peak(&peaks, &x).unwrap(), 7.0);
    }

    #[test]
    fn validation() {
        assert!(nearest_peak(&[], &bs("01")).is_err());
        assert!(PeakSpec::new(bs("01"), 0.0, 1.0).is_err());
        assert!(PeakSpec::new(bs("01"), 1.0, -1.0).is_err());
        let peaks = vec![PeakSpec::new(bs("01"), 1.0, 1.0).unwrap()];
        assert!(nearest_peak(&peaks, &bs("011")).is_err());
    }

    #[test]
    fn ties_prefer_taller_then_earlier() {
        let peaks = vec![
            PeakSpec::new(bs("0000"), 5.0, 1.0).unwrap(),
            PeakSpec::new(bs("1100"), 8.0, 2.0).unwrap(),
            PeakSpec::new(bs("0011"), 8.0, 3.0).unwrap(),
        ];
        // distance 2 from every centre: the 8-high peaks tie, index 1 wins.
        assert_eq!(nearest_peak(&peaks, &bs("1010")).unwrap(), 8.0 - 2.0 * 2.0);
    }

    /// At n = 6, a tall wide peak dominates a short one at the short peak's
    /// own centre, and the max form agrees with brute-force maxima.
    #[test]
    fn weighted_is_pointwise_max() {
        let shallow = bs("000000");
        let tall = bs("000011");
        let peaks = vec![
            PeakSpec::new(shallow.clone(), 3.0, 1.0).unwrap(),
            PeakSpec::new(tall.clone(), 10.0, 0.5).unwrap(),
        ];
        assert_eq!(nearest_peak(&peaks, &shallow).unwrap(), 3.0);
        assert_eq!(weighted_nearest_peak(&peaks, &shallow).unwrap(), 9.0);
        for v in 0..64u64 {
            let x = BitString::from_index(6, v);
            let brute = peaks
                .iter()
                .map(|p| {
                    let d = x.iter().zip(p.centre.iter()).filter(|(a, b)| a != b).count();
                    p.height - p.slope * d as f64
                })
                .fold(f64::NEG_INFINITY, f64::max);
            assert_eq!(weighted_nearest_peak(&peaks, &x).unwrap(), brute);
        }
    }

    #[test]
    fn optima_are_tallest_centres() {
        let peaks = vec![
            PeakSpec::new(bs("000000"), 3.0, 1.0).unwrap(),
            PeakSpec::new(bs("111000"), 6.0, 1.0).unwrap(),
            PeakSpec::new(bs("000111"), 6.0, 2.0).unwrap(),
        ];
        for weighted in [false, true] {
            let obj = NearestPeak::new(peaks.clone(), weighted).unwrap();
            let closed = obj.global_optima().unwrap().enumerate(&obj).unwrap();
            let scanned = super::super::target::exhaustive_global_optima(&obj)
                .unwrap()
                .enumerate(&obj)
                .unwrap();
            assert_eq!(closed, scanned);
        }
    }
}
