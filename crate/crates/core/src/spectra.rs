//! Spectrum data model, ppm-axis windowing, and the intensity reductions
//! shared by the cost functions.
//!
//! The frequency axis follows the usual NMR display convention: index 0 sits
//! at the high-ppm edge and chemical shift decreases with increasing index.
//! The axis is an inclusive linspace, so `freq(0) = offset + sw/2` and
//! `freq(n-1) = offset - sw/2` exactly.

use std::fmt::Write as _;
use std::ops::Range;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SpectraError {
    #[error("real and imaginary parts differ in length ({real} vs {imag})")]
    LengthMismatch { real: usize, imag: usize },
    #[error("spectrum must contain at least one point")]
    Empty,
    #[error("spectral width and spectrometer frequency must be positive")]
    BadAxis,
    #[error("region bounds must satisfy lo < hi (got {lo} >= {hi})")]
    InvalidRegion { lo: f64, hi: f64 },
    #[error("region [{lo}, {hi}] ppm does not overlap the spectrum axis [{axis_lo:.4}, {axis_hi:.4}] ppm")]
    EmptyRegion {
        lo: f64,
        hi: f64,
        axis_lo: f64,
        axis_hi: f64,
    },
    #[error("spectrum fixture parse error at line {line}: {msg}")]
    FixtureParse { line: usize, msg: String },
}

/// Complex-valued frequency-domain spectrum with axis metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum1D {
    real: Vec<f64>,
    imag: Vec<f64>,
    sw_hz: f64,
    offset_hz: f64,
    sfo_mhz: f64,
}

impl Spectrum1D {
    pub fn new(
        real: Vec<f64>,
        imag: Vec<f64>,
        sw_hz: f64,
        offset_hz: f64,
        sfo_mhz: f64,
    ) -> Result<Self, SpectraError> {
        if real.len() != imag.len() {
            return Err(SpectraError::LengthMismatch {
                real: real.len(),
                imag: imag.len(),
            });
        }
        if real.is_empty() {
            return Err(SpectraError::Empty);
        }
        if !(sw_hz > 0.0) || !(sfo_mhz > 0.0) {
            return Err(SpectraError::BadAxis);
        }
        Ok(Self {
            real,
            imag,
            sw_hz,
            offset_hz,
            sfo_mhz,
        })
    }

    pub fn n_points(&self) -> usize {
        self.real.len()
    }

    pub fn real(&self) -> &[f64] {
        &self.real
    }

    pub fn imag(&self) -> &[f64] {
        &self.imag
    }

    pub fn real_mut(&mut self) -> &mut [f64] {
        &mut self.real
    }

    pub fn imag_mut(&mut self) -> &mut [f64] {
        &mut self.imag
    }

    pub fn sw_hz(&self) -> f64 {
        self.sw_hz
    }

    pub fn offset_hz(&self) -> f64 {
        self.offset_hz
    }

    pub fn sfo_mhz(&self) -> f64 {
        self.sfo_mhz
    }

    /// Frequency of point `i` on the transmitter-offset scale, in Hz.
    pub fn freq_hz(&self, i: usize) -> f64 {
        let n = self.n_points();
        if n == 1 {
            return self.offset_hz;
        }
        self.offset_hz + self.sw_hz / 2.0 - (i as f64) * self.sw_hz / ((n - 1) as f64)
    }

    /// Chemical shift of point `i` in ppm.
    pub fn ppm(&self, i: usize) -> f64 {
        self.freq_hz(i) / self.sfo_mhz
    }

    /// New spectrum holding only the points inside `region`, with the axis
    /// metadata adjusted so those points keep their chemical shifts.
    pub fn restrict(&self, region: &Region) -> Result<Spectrum1D, SpectraError> {
        let range = select_region(self, region)?;
        let real = self.real[range.clone()].to_vec();
        let imag = self.imag[range.clone()].to_vec();
        let n = real.len();
        if n == 1 {
            return Spectrum1D::new(real, imag, self.sw_hz, self.freq_hz(range.start), self.sfo_mhz);
        }
        let step = self.sw_hz / ((self.n_points() - 1) as f64);
        let sw = step * ((n - 1) as f64);
        let offset = (self.freq_hz(range.start) + self.freq_hz(range.end - 1)) / 2.0;
        Spectrum1D::new(real, imag, sw, offset, self.sfo_mhz)
    }
}

/// Spectral window over which a cost function acts, in ppm.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Region {
    #[default]
    Whole,
    Ppm {
        lo: f64,
        hi: f64,
    },
}

impl Region {
    pub fn ppm(lo: f64, hi: f64) -> Result<Self, SpectraError> {
        if !(lo < hi) {
            return Err(SpectraError::InvalidRegion { lo, hi });
        }
        Ok(Region::Ppm { lo, hi })
    }
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Region::Whole => write!(f, "whole"),
            Region::Ppm { lo, hi } => write!(f, "{lo},{hi}"),
        }
    }
}

impl std::str::FromStr for Region {
    type Err = SpectraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "whole" {
            return Ok(Region::Whole);
        }
        let bad = || SpectraError::InvalidRegion {
            lo: f64::NAN,
            hi: f64::NAN,
        };
        let (lo, hi) = s.split_once(',').ok_or_else(bad)?;
        let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
        Region::ppm(lo, hi)
    }
}

/// Contiguous index range of points whose ppm values lie in `[lo, hi]`
/// (inclusive endpoints). `Region::Whole` selects every point.
pub fn select_region(s: &Spectrum1D, region: &Region) -> Result<Range<usize>, SpectraError> {
    let n = s.n_points();
    let (lo, hi) = match region {
        Region::Whole => return Ok(0..n),
        Region::Ppm { lo, hi } => (*lo, *hi),
    };
    if !(lo < hi) {
        return Err(SpectraError::InvalidRegion { lo, hi });
    }
    // ppm decreases with index, so scan for the first/last indices inside.
    let mut start = None;
    let mut end = 0;
    for i in 0..n {
        let p = s.ppm(i);
        if p <= hi && p >= lo {
            if start.is_none() {
                start = Some(i);
            }
            end = i + 1;
        }
    }
    match start {
        Some(start) => Ok(start..end),
        None => Err(SpectraError::EmptyRegion {
            lo,
            hi,
            axis_lo: s.ppm(n - 1),
            axis_hi: s.ppm(0),
        }),
    }
}

/// Σ S_real over the region.
pub fn sum_real(s: &Spectrum1D, region: &Region) -> Result<f64, SpectraError> {
    let r = select_region(s, region)?;
    Ok(s.real[r].iter().sum())
}

/// Σ |S_real| over the region.
pub fn sum_abs_real(s: &Spectrum1D, region: &Region) -> Result<f64, SpectraError> {
    let r = select_region(s, region)?;
    Ok(s.real[r].iter().map(|v| v.abs()).sum())
}

/// Σ S_real² over the region.
pub fn sum_sq_real(s: &Spectrum1D, region: &Region) -> Result<f64, SpectraError> {
    let r = select_region(s, region)?;
    Ok(s.real[r].iter().map(|v| v * v).sum())
}

/// Σ √(S_real² + S_imag²) over the region.
pub fn sum_magnitude(s: &Spectrum1D, region: &Region) -> Result<f64, SpectraError> {
    let r = select_region(s, region)?;
    Ok(r.map(|i| (self_hypot(s.real[i], s.imag[i]))).sum())
}

fn self_hypot(re: f64, im: f64) -> f64 {
    (re * re + im * im).sqrt()
}

/// Columnar fixture format: header `sw_hz offset_hz sfo_mhz npoints`,
/// then one `real imag` pair per line.
pub fn write_fixture(s: &Spectrum1D) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} {} {} {}",
        s.sw_hz,
        s.offset_hz,
        s.sfo_mhz,
        s.n_points()
    );
    for i in 0..s.n_points() {
        let _ = writeln!(out, "{} {}", s.real[i], s.imag[i]);
    }
    out
}

pub fn parse_fixture(text: &str) -> Result<Spectrum1D, SpectraError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(SpectraError::FixtureParse {
        line: 1,
        msg: "missing header".into(),
    })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 4 {
        return Err(SpectraError::FixtureParse {
            line: 1,
            msg: format!("header needs 4 fields, got {}", fields.len()),
        });
    }
    let parse = |i: usize, what: &str| -> Result<f64, SpectraError> {
        fields[i].parse().map_err(|_| SpectraError::FixtureParse {
            line: 1,
            msg: format!("bad {what}: {}", fields[i]),
        })
    };
    let sw_hz = parse(0, "sw_hz")?;
    let offset_hz = parse(1, "offset_hz")?;
    let sfo_mhz = parse(2, "sfo_mhz")?;
    let npoints = fields[3]
        .parse::<usize>()
        .map_err(|_| SpectraError::FixtureParse {
            line: 1,
            msg: format!("bad npoints: {}", fields[3]),
        })?;
    let mut real = Vec::with_capacity(npoints);
    let mut imag = Vec::with_capacity(npoints);
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let (re, im) = match (it.next(), it.next(), it.next()) {
            (Some(re), Some(im), None) => (re, im),
            _ => {
                return Err(SpectraError::FixtureParse {
                    line: idx + 1,
                    msg: "expected `real imag`".into(),
                })
            }
        };
        let mut num = |v: &str| -> Result<f64, SpectraError> {
            v.parse().map_err(|_| SpectraError::FixtureParse {
                line: idx + 1,
                msg: format!("bad number: {v}"),
            })
        };
        real.push(num(re)?);
        imag.push(num(im)?);
    }
    if real.len() != npoints {
        return Err(SpectraError::FixtureParse {
            line: text.lines().count(),
            msg: format!("header says {npoints} points, file has {}", real.len()),
        });
    }
    Spectrum1D::new(real, imag, sw_hz, offset_hz, sfo_mhz)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat(n: usize, re: f64, im: f64) -> Spectrum1D {
        Spectrum1D::new(vec![re; n], vec![im; n], 1000.0, 0.0, 100.0).unwrap()
    }

    #[test]
    fn whole_region_selects_everything() {
        let s = flat(64, 1.0, 0.0);
        assert_eq!(select_region(&s, &Region::Whole).unwrap(), 0..64);
    }

    #[test]
    fn region_outside_axis_is_an_error() {
        let s = flat(64, 1.0, 0.0);
        let r = Region::ppm(100.0, 200.0).unwrap();
        assert!(matches!(
            select_region(&s, &r),
            Err(SpectraError::EmptyRegion { .. })
        ));
    }

    #[test]
    fn six_to_eight_ppm_window_matches_per_point_check() {
        // 14 ppm wide, 16384 points, centred at 5 ppm on a 500 MHz axis.
        let n = 16384;
        let sfo = 500.13;
        let s = Spectrum1D::new(vec![0.0; n], vec![0.0; n], 14.0 * sfo, 5.0 * sfo, sfo).unwrap();
        let r = Region::ppm(6.0, 8.0).unwrap();
        let range = select_region(&s, &r).unwrap();
        for i in 0..n {
            let inside = s.ppm(i) >= 6.0 && s.ppm(i) <= 8.0;
            assert_eq!(range.contains(&i), inside, "index {i}");
        }
        assert!(!range.is_empty());
    }

    #[test]
    fn reductions_on_zero_spectrum_are_zero() {
        let s = flat(16, 0.0, 0.0);
        for f in [sum_real, sum_abs_real, sum_sq_real, sum_magnitude] {
            assert_eq!(f(&s, &Region::Whole).unwrap(), 0.0);
        }
    }

    #[test]
    fn reductions_three_four_five() {
        let s = Spectrum1D::new(vec![3.0, -3.0], vec![4.0, 4.0], 100.0, 0.0, 100.0).unwrap();
        assert_eq!(sum_real(&s, &Region::Whole).unwrap(), 0.0);
        assert_eq!(sum_abs_real(&s, &Region::Whole).unwrap(), 6.0);
        assert_eq!(sum_sq_real(&s, &Region::Whole).unwrap(), 18.0);
        assert_eq!(sum_magnitude(&s, &Region::Whole).unwrap(), 10.0);
    }

    #[test]
    fn half_window_halves_constant_sums() {
        let n = 100;
        let sfo = 100.0;
        // axis spans exactly [-5, 5] ppm
        let s = Spectrum1D::new(vec![1.0; n], vec![0.0; n], 10.0 * sfo, 0.0, sfo).unwrap();
        let whole = sum_real(&s, &Region::Whole).unwrap();
        let mut half_count = 0;
        for i in 0..n {
            if s.ppm(i) >= 0.0 {
                half_count += 1;
            }
        }
        let half = sum_real(&s, &Region::ppm(0.0, 6.0).unwrap()).unwrap();
        assert_eq!(half, half_count as f64);
        assert_eq!(half_count, n / 2);
        assert_eq!(whole, n as f64);
    }

    #[test]
    fn widening_a_region_never_shrinks_the_range() {
        let s = flat(512, 1.0, 0.5);
        let mut prev = 0;
        for k in 1..=20 {
            let w = 0.2 * k as f64;
            let r = Region::ppm(-w, w).unwrap();
            let len = select_region(&s, &r).map(|r| r.len()).unwrap_or(0);
            assert!(len >= prev, "widening shrank the range at k={k}");
            prev = len;
        }
    }

    #[test]
    fn magnitude_dominates_abs_real_dominates_real() {
        use rand::prelude::*;
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.random_range(1..40);
            let real: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
            let imag: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
            let s = Spectrum1D::new(real, imag, 100.0, 0.0, 100.0).unwrap();
            let mag = sum_magnitude(&s, &Region::Whole).unwrap();
            let abs = sum_abs_real(&s, &Region::Whole).unwrap();
            let re = sum_real(&s, &Region::Whole).unwrap();
            assert!(mag >= abs - 1e-12);
            assert!(abs >= re.abs() - 1e-12);
        }
    }

    #[test]
    fn reductions_are_additive_over_disjoint_regions() {
        use rand::prelude::*;
        let mut rng = StdRng::seed_from_u64(11);
        let n = 256;
        let real: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
        let imag: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
        // axis [-5, 5] ppm exactly; split point between samples so the two
        // windows are disjoint and exhaustive
        let s = Spectrum1D::new(real, imag, 1000.0, 0.0, 100.0).unwrap();
        let cut = (s.ppm(127) + s.ppm(128)) / 2.0;
        let top = Region::ppm(cut, 5.1).unwrap();
        let bottom = Region::ppm(-5.1, cut).unwrap();
        let a = select_region(&s, &top).unwrap();
        let b = select_region(&s, &bottom).unwrap();
        assert_eq!(a.end, b.start);
        assert_eq!(a.start, 0);
        assert_eq!(b.end, n);
        for f in [sum_real, sum_abs_real, sum_sq_real, sum_magnitude] {
            let whole = f(&s, &Region::Whole).unwrap();
            let parts = f(&s, &top).unwrap() + f(&s, &bottom).unwrap();
            assert!((whole - parts).abs() <= 1e-9 * whole.abs().max(1.0));
        }
    }

    #[test]
    fn restrict_commutes_with_region_reduction() {
        use rand::prelude::*;
        let mut rng = StdRng::seed_from_u64(13);
        let n = 300;
        let real: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
        let imag: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
        let s = Spectrum1D::new(real, imag, 1200.0, 350.0, 100.0).unwrap();
        let r = Region::ppm(1.0, 6.5).unwrap();
        let sub = s.restrict(&r).unwrap();
        for f in [sum_real, sum_abs_real, sum_sq_real, sum_magnitude] {
            let direct = f(&s, &r).unwrap();
            let via_sub = f(&sub, &Region::Whole).unwrap();
            assert!((direct - via_sub).abs() <= 1e-12 * direct.abs().max(1.0));
        }
    }

    #[test]
    fn fixture_round_trip() {
        let s = Spectrum1D::new(
            vec![1.5, -2.25, 0.0001],
            vec![0.5, 3.0, -1e-7],
            7000.25,
            1880.61,
            400.13,
        )
        .unwrap();
        let text = write_fixture(&s);
        let back = parse_fixture(&text).unwrap();
        assert_eq!(s, back);
    }

    #[test]
    fn fixture_truncation_reports_line() {
        let err = parse_fixture("100.0 0.0 500.0 3\n1 2\nbroken\n").unwrap_err();
        match err {
            SpectraError::FixtureParse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected error {other:?}"),
        }
    }
}
