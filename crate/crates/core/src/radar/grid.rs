use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Regular axis `min, min + step, ..., <= max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl AxisSpec {
    fn centroids(&self, scale: f64) -> Result<Vec<f64>> {
        if !(self.step > 0.0) || self.max < self.min {
            return Err(Error::Config(format!("invalid axis {self:?}")));
        }
        let n = ((self.max - self.min) / self.step + 1e-9).floor() as usize + 1;
        Ok((0..n).map(|i| (self.min + i as f64 * self.step) * scale).collect())
    }
}

/// Serializable grid description. Angles are in degrees here; the built
/// [`SensorGrid`] works in radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub range_m: AxisSpec,
    pub azimuth_deg: AxisSpec,
    #[serde(default)]
    pub doppler_mps: Option<AxisSpec>,
    /// Range resolution in meters; the PSF uses its square.
    pub range_resolution_m: f64,
    pub azimuth_resolution_deg: f64,
    pub doppler_resolution_mps: f64,
    pub noise_variance: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            range_m: AxisSpec { min: 1000.0, max: 2000.0, step: 10.0 },
            azimuth_deg: AxisSpec { min: 30.0, max: 60.0, step: 1.0 },
            doppler_mps: None,
            range_resolution_m: 10.0,
            azimuth_resolution_deg: 1.0,
            doppler_resolution_mps: 1.0,
            noise_variance: 1.0,
        }
    }
}

/// Range-azimuth(-Doppler) cell grid with a Gaussian point-spread model.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorGrid {
    range: Vec<f64>,
    azimuth: Vec<f64>,
    doppler: Option<Vec<f64>>,
    /// PSF scale constants `R`, `B`, `D` (squared resolutions).
    range_scale: f64,
    azimuth_scale: f64,
    doppler_scale: f64,
    noise_variance: f64,
}

/// Target coordinates in measurement space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasCoords {
    pub range: f64,
    pub azimuth: f64,
    pub range_rate: f64,
}

impl MeasCoords {
    pub fn of(x: &[f64]) -> Self {
        let (px, vx, py, vy) = (x[0], x[1], x[2], x[3]);
        let range = px.hypot(py);
        let range_rate = if range > 0.0 { (px * vx + py * vy) / range } else { 0.0 };
        Self { range, azimuth: py.atan2(px), range_rate }
    }
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

impl SensorGrid {
    /// Build from explicit centroids. Scales are the PSF constants as they
    /// appear in the exponent denominators (`2R`, `2B`, `2D`).
    pub fn new(
        range: Vec<f64>,
        azimuth: Vec<f64>,
        doppler: Option<Vec<f64>>,
        scales: (f64, f64, f64),
        noise_variance: f64,
    ) -> Result<Self> {
        if range.is_empty() || azimuth.is_empty() || doppler.as_ref().is_some_and(|d| d.is_empty()) {
            return Err(Error::Config("grid axes must be nonempty".into()));
        }
        if !strictly_increasing(&range)
            || !strictly_increasing(&azimuth)
            || !doppler.as_deref().map_or(true, strictly_increasing)
        {
            return Err(Error::Config("grid centroids must be strictly increasing".into()));
        }
        if !(noise_variance > 0.0) {
            return Err(Error::Config("noise variance must be positive".into()));
        }
        if !(scales.0 > 0.0 && scales.1 > 0.0 && scales.2 > 0.0) {
            return Err(Error::Config("resolutions must be positive".into()));
        }
        Ok(Self {
            range,
            azimuth,
            doppler,
            range_scale: scales.0,
            azimuth_scale: scales.1,
            doppler_scale: scales.2,
            noise_variance,
        })
    }

    pub fn from_spec(spec: &GridSpec) -> Result<Self> {
        let deg = std::f64::consts::PI / 180.0;
        let doppler = spec.doppler_mps.map(|a| a.centroids(1.0)).transpose()?;
        Self::new(
            spec.range_m.centroids(1.0)?,
            spec.azimuth_deg.centroids(deg)?,
            doppler,
            (
                spec.range_resolution_m.powi(2),
                (spec.azimuth_resolution_deg * deg).powi(2),
                spec.doppler_resolution_mps.powi(2),
            ),
            spec.noise_variance,
        )
    }

    pub fn range_centroids(&self) -> &[f64] {
        &self.range
    }

    pub fn azimuth_centroids(&self) -> &[f64] {
        &self.azimuth
    }

    pub fn doppler_centroids(&self) -> Option<&[f64]> {
        self.doppler.as_deref()
    }

    pub fn scales(&self) -> (f64, f64, f64) {
        (self.range_scale, self.azimuth_scale, self.doppler_scale)
    }

    pub fn noise_variance(&self) -> f64 {
        self.noise_variance
    }

    fn n_doppler(&self) -> usize {
        self.doppler.as_ref().map_or(1, |d| d.len())
    }

    /// Number of cells `m`.
    pub fn cell_count(&self) -> usize {
        self.range.len() * self.azimuth.len() * self.n_doppler()
    }

    pub fn cell_index(&self, ri: usize, ai: usize, di: usize) -> usize {
        (ri * self.azimuth.len() + ai) * self.n_doppler() + di
    }

    /// Inverse of [`SensorGrid::cell_index`].
    pub fn cell_axes(&self, cell: usize) -> (usize, usize, usize) {
        let nd = self.n_doppler();
        let di = cell % nd;
        let rest = cell / nd;
        (rest / self.azimuth.len(), rest % self.azimuth.len(), di)
    }

    /// `(range, azimuth, doppler)` centroid of a cell; doppler is 0 on a
    /// 2-D grid.
    pub fn cell_centroid(&self, cell: usize) -> (f64, f64, f64) {
        let (ri, ai, di) = self.cell_axes(cell);
        let d = self.doppler.as_ref().map_or(0.0, |d| d[di]);
        (self.range[ri], self.azimuth[ai], d)
    }

    /// PSF value of `x` in a given cell.
    pub fn psf_at(&self, coords: &MeasCoords, cell: usize) -> f64 {
        let (ri, ai, di) = self.cell_axes(cell);
        self.psf_axes(coords, ri, ai, di)
    }

    fn psf_axes(&self, c: &MeasCoords, ri: usize, ai: usize, di: usize) -> f64 {
        let dr = self.range[ri] - c.range;
        let db = self.azimuth[ai] - c.azimuth;
        let mut e = dr * dr / (2.0 * self.range_scale) + db * db / (2.0 * self.azimuth_scale);
        if let Some(d) = &self.doppler {
            let dd = d[di] - c.range_rate;
            e += dd * dd / (2.0 * self.doppler_scale);
        }
        (-e).exp()
    }

    /// Cells within `gate` of the nearest centroid on every axis, clipped to
    /// the grid, in increasing cell order.
    pub fn template(&self, x: &[f64], gate: usize) -> Vec<usize> {
        self.template_with(&MeasCoords::of(x), gate, |c, _| c)
    }

    /// Template cells with their PSF values.
    pub fn psf(&self, x: &[f64], gate: usize) -> Vec<(usize, f64)> {
        let c = MeasCoords::of(x);
        self.template_with(&c, gate, |cell, h| (cell, h))
    }

    fn template_with<T>(&self, c: &MeasCoords, gate: usize, mut emit: impl FnMut(usize, f64) -> T) -> Vec<T> {
        let (r0, r1) = window(&self.range, c.range, gate);
        let (a0, a1) = window(&self.azimuth, c.azimuth, gate);
        let (d0, d1) = match &self.doppler {
            Some(d) => window(d, c.range_rate, gate),
            None => (0, 0),
        };
        let mut out = Vec::with_capacity((r1 - r0 + 1) * (a1 - a0 + 1) * (d1 - d0 + 1));
        for ri in r0..=r1 {
            for ai in a0..=a1 {
                for di in d0..=d1 {
                    let h = self.psf_axes(c, ri, ai, di);
                    out.push(emit(self.cell_index(ri, ai, di), h));
                }
            }
        }
        out
    }
}

fn nearest(axis: &[f64], v: f64) -> usize {
    match axis.binary_search_by(|a| a.total_cmp(&v)) {
        Ok(i) => i,
        Err(0) => 0,
        Err(i) if i >= axis.len() => axis.len() - 1,
        Err(i) => {
            if (v - axis[i - 1]).abs() <= (axis[i] - v).abs() {
                i - 1
            } else {
                i
            }
        }
    }
}

fn window(axis: &[f64], v: f64, gate: usize) -> (usize, usize) {
    let c = nearest(axis, v);
    (c.saturating_sub(gate), (c + gate).min(axis.len() - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_grid() -> SensorGrid {
        SensorGrid::from_spec(&GridSpec::default()).unwrap()
    }

    fn at(range: f64, az_deg: f64) -> [f64; 4] {
        let b = az_deg.to_radians();
        [range * b.cos(), 0.0, range * b.sin(), 0.0]
    }

    #[test]
    fn default_grid_shape() {
        let g = small_grid();
        assert_eq!(g.range_centroids().len(), 101);
        assert_eq!(g.azimuth_centroids().len(), 31);
        assert_eq!(g.cell_count(), 101 * 31);
        let c = g.cell_index(7, 3, 0);
        assert_eq!(g.cell_axes(c), (7, 3, 0));
    }

    #[test]
    fn psf_peak_and_half_power_offset() {
        let g = small_grid();
        let x = at(1500.0, 45.0);
        let coords = MeasCoords::of(&x);
        let cell = g.template(&x, 0)[0];
        assert!((g.psf_at(&coords, cell) - 1.0).abs() < 1e-12);

        // offset^2 = 2 R ln 2 puts the centroid at half height
        let (r_scale, _, _) = g.scales();
        let off = (2.0 * r_scale * std::f64::consts::LN_2).sqrt();
        let x2 = at(1500.0 + off, 45.0);
        let c2 = MeasCoords::of(&x2);
        assert!((g.psf_at(&c2, cell) - 0.5).abs() < 1e-9);
    }

    #[test]
    fn template_sizes() {
        let g = small_grid();
        let x = at(1500.0, 45.0);
        assert_eq!(g.template(&x, 0).len(), 1);
        assert_eq!(g.template(&x, 3).len(), 49);
        let cells = g.template(&x, 3);
        assert!(cells.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn template_clipped_at_edge() {
        let g = small_grid();
        let x = at(1000.0, 30.0);
        let t = g.template(&x, 3);
        assert_eq!(t.len(), 16);
        assert!(t.iter().all(|&c| c < g.cell_count()));
    }

    #[test]
    fn far_cell_gated() {
        let g = small_grid();
        let x = at(1500.0, 45.0);
        let far = g.template(&at(1900.0, 35.0), 0)[0];
        assert!(!g.template(&x, 3).contains(&far));
    }

    #[test]
    fn rejects_bad_axes() {
        assert!(SensorGrid::new(vec![1.0, 1.0], vec![0.0], None, (1.0, 1.0, 1.0), 1.0).is_err());
        assert!(SensorGrid::new(vec![1.0], vec![0.0], None, (1.0, 1.0, 1.0), 0.0).is_err());
    }

    #[test]
    fn doppler_grid_template() {
        let mut spec = GridSpec::default();
        spec.doppler_mps = Some(AxisSpec { min: -20.0, max: 20.0, step: 1.0 });
        let g = SensorGrid::from_spec(&spec).unwrap();
        let b = 45f64.to_radians();
        let x = [1500.0 * b.cos(), -10.0 * b.cos(), 1500.0 * b.sin(), -10.0 * b.sin()];
        let psf = g.psf(&x, 3);
        assert_eq!(psf.len(), 343);
        let best = psf.iter().cloned().fold((0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
        let (_, _, d) = g.cell_centroid(best.0);
        assert!((d + 10.0).abs() < 1e-9);
        assert!((best.1 - 1.0).abs() < 1e-9);
    }
}
