use num::complex::Complex64;

use super::NumericError;

/// Uniform `n^3` box of momenta centered at `center` (natural units).
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    n: usize,
    center: [f64; 3],
    half_width: f64,
    exclusion: usize,
}

/// Smallest |p| over the closed box.
fn min_norm(center: [f64; 3], half_width: f64) -> f64 {
    center
        .iter()
        .map(|&c| {
            let (lo, hi) = (c - half_width, c + half_width);
            if lo <= 0.0 && hi >= 0.0 {
                0.0
            } else {
                lo.abs().min(hi.abs())
            }
        })
        .map(|d| d * d)
        .sum::<f64>()
        .sqrt()
}

pub const MIN_MOMENTUM: f64 = 0.5;

impl GridSpec {
    pub fn new(n: usize, center: [f64; 3], half_width: f64) -> Result<GridSpec, NumericError> {
        GridSpec::with_exclusion(n, center, half_width, 1)
    }

    pub fn with_exclusion(n: usize, center: [f64; 3], half_width: f64, exclusion: usize) -> Result<GridSpec, NumericError> {
        if n < 8 {
            return Err(NumericError::InvalidGrid(format!("n = {n} is below the minimum of 8")));
        }
        if !(half_width.is_finite() && half_width > 0.0) || center.iter().any(|c| !c.is_finite()) {
            return Err(NumericError::InvalidGrid("half width must be positive and the center finite".into()));
        }
        if 2 * exclusion + 3 > n {
            return Err(NumericError::InvalidGrid(format!("exclusion {exclusion} leaves no interior at n = {n}")));
        }
        let m = min_norm(center, half_width);
        if m < MIN_MOMENTUM {
            return Err(NumericError::GridOrigin { min_norm: m });
        }
        Ok(GridSpec { n, center, half_width, exclusion })
    }

    /// Center (2,2,2), half width 0.75.
    pub fn default_box(n: usize) -> Result<GridSpec, NumericError> {
        GridSpec::new(n, [2.0; 3], 0.75)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn center(&self) -> [f64; 3] {
        self.center
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn exclusion(&self) -> usize {
        self.exclusion
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.n - 1) as f64
    }

    pub fn min_norm(&self) -> f64 {
        min_norm(self.center, self.half_width)
    }

    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Same box with `2n - 1` points per axis: every other point is shared.
    pub fn refined(&self) -> GridSpec {
        GridSpec { n: 2 * self.n - 1, ..self.clone() }
    }

    pub fn index(&self, x: usize, y: usize, z: usize) -> usize {
        (x * self.n + y) * self.n + z
    }

    pub fn point(&self, idx: usize) -> [f64; 3] {
        let n = self.n;
        let (x, y, z) = (idx / (n * n), (idx / n) % n, idx % n);
        let h = self.spacing();
        let w = self.half_width;
        [
            self.center[0] - w + h * x as f64,
            self.center[1] - w + h * y as f64,
            self.center[2] - w + h * z as f64,
        ]
    }

    /// Distance in points from `idx` to the nearest face.
    pub fn layer(&self, idx: usize) -> usize {
        let n = self.n;
        let (x, y, z) = (idx / (n * n), (idx / n) % n, idx % n);
        [x, y, z].iter().map(|&c| c.min(n - 1 - c)).min().expect("three axes")
    }

    /// Axis stride in the flat sample array.
    pub fn stride(&self, axis: usize) -> usize {
        match axis {
            0 => self.n * self.n,
            1 => self.n,
            _ => 1,
        }
    }
}

/// Complex samples on a grid. Points closer than `margin` to a face hold no
/// valid value (a derivative stencil could not be evaluated there).
#[derive(Clone, Debug, PartialEq)]
pub struct WaveFunction {
    grid: GridSpec,
    values: Vec<Complex64>,
    margin: usize,
}

impl WaveFunction {
    pub fn from_fn<F: Fn([f64; 3]) -> Complex64>(grid: &GridSpec, f: F) -> WaveFunction {
        let values = (0..grid.len()).map(|k| f(grid.point(k))).collect();
        WaveFunction { grid: grid.clone(), values, margin: 0 }
    }

    pub(crate) fn from_parts(grid: &GridSpec, values: Vec<Complex64>, margin: usize) -> WaveFunction {
        let mut w = WaveFunction { grid: grid.clone(), values, margin };
        w.clear_margin();
        w
    }

    fn clear_margin(&mut self) {
        if self.margin == 0 {
            return;
        }
        for k in 0..self.values.len() {
            if self.grid.layer(k) < self.margin {
                self.values[k] = Complex64::new(0.0, 0.0);
            }
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn margin(&self) -> usize {
        self.margin
    }

    /// Width of the layer excluded from norms.
    pub fn excluded(&self) -> usize {
        self.margin.max(self.grid.exclusion)
    }

    /// Discrete L2 norm over the interior points.
    pub fn norm(&self) -> f64 {
        self.norm_beyond(self.excluded())
    }

    pub(crate) fn norm_beyond(&self, layer: usize) -> f64 {
        self.values
            .iter()
            .enumerate()
            .filter(|(k, _)| self.grid.layer(*k) >= layer)
            .map(|(_, v)| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&self, s: Complex64) -> WaveFunction {
        let values = self.values.iter().map(|v| v * s).collect();
        WaveFunction { grid: self.grid.clone(), values, margin: self.margin }
    }

    fn zip(&self, other: &WaveFunction, f: impl Fn(Complex64, Complex64) -> Complex64) -> WaveFunction {
        assert_eq!(self.grid, other.grid, "wave functions live on different grids");
        let values = self.values.iter().zip(&other.values).map(|(a, b)| f(*a, *b)).collect();
        WaveFunction::from_parts(&self.grid, values, self.margin.max(other.margin))
    }

    pub fn add(&self, other: &WaveFunction) -> WaveFunction {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &WaveFunction) -> WaveFunction {
        self.zip(other, |a, b| a - b)
    }

    /// Pointwise product with a function of momentum.
    pub fn multiply<F: Fn([f64; 3]) -> f64>(&self, f: F) -> WaveFunction {
        let values = self.values.iter().enumerate().map(|(k, v)| v * f(self.grid.point(k))).collect();
        WaveFunction { grid: self.grid.clone(), values, margin: self.margin }
    }

    /// Zero function with the same grid and margin.
    pub fn zeros_like(&self) -> WaveFunction {
        WaveFunction { grid: self.grid.clone(), values: vec![Complex64::new(0.0, 0.0); self.values.len()], margin: self.margin }
    }

    /// Relative distance `||self - other|| / ||reference||` over the points
    /// valid for all three.
    pub fn relative_distance(&self, other: &WaveFunction, reference: &WaveFunction) -> f64 {
        let layer = self.excluded().max(other.excluded()).max(reference.excluded());
        self.sub(other).norm_beyond(layer) / reference.norm_beyond(layer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_is_rejected() {
        assert!(matches!(GridSpec::new(17, [0.0; 3], 1.0), Err(NumericError::GridOrigin { .. })));
        assert!(matches!(GridSpec::new(17, [0.6, 0.0, 0.0], 0.2), Err(NumericError::GridOrigin { .. })));
        let g = GridSpec::default_box(17).unwrap();
        assert!((g.min_norm() - (3.0f64).sqrt() * 1.25).abs() < 1e-12);
    }

    #[test]
    fn small_grids_rejected() {
        assert!(matches!(GridSpec::default_box(7), Err(NumericError::InvalidGrid(_))));
        assert!(matches!(GridSpec::new(16, [2.0; 3], 0.0), Err(NumericError::InvalidGrid(_))));
    }

    #[test]
    fn geometry() {
        let g = GridSpec::default_box(17).unwrap();
        assert!((g.spacing() - 1.5 / 16.0).abs() < 1e-15);
        assert_eq!(g.point(0), [1.25; 3]);
        assert_eq!(g.point(g.len() - 1), [2.75; 3]);
        assert_eq!(g.point(g.index(8, 8, 8)), [2.0; 3]);
        assert_eq!(g.layer(g.index(8, 1, 15)), 1);
        assert_eq!(g.refined().n(), 33);
        assert_eq!(g.refined().point(g.refined().index(16, 16, 16)), [2.0; 3]);
    }

    #[test]
    fn norms_skip_the_boundary() {
        let g = GridSpec::default_box(8).unwrap();
        let one = WaveFunction::from_fn(&g, |_| Complex64::new(1.0, 0.0));
        // interior of exclusion 1 is 6^3 points
        assert!((one.norm() - (216.0f64).sqrt()).abs() < 1e-12);
    }
}
