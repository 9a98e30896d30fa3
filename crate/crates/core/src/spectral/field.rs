use std::borrow::Cow;
use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use super::{bracket_symbol, sobolev_weight, Complex64, Cutoff, SpectralGrid};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A periodic function on a [`SpectralGrid`], held as Fourier coefficients,
/// nodal samples, or both. At least one representation is always present;
/// whichever is present is authoritative. Operators return
/// coefficient-form fields.
#[derive(Clone, Debug)]
pub struct Field {
    grid: Arc<SpectralGrid>,
    coeffs: Option<Vec<Complex64>>,
    values: Option<Vec<Complex64>>,
}

impl Field {
    pub fn from_values(grid: Arc<SpectralGrid>, values: Vec<Complex64>) -> Result<Self> {
        check_len(&grid, values.len())?;
        Ok(Field { grid, coeffs: None, values: Some(values) })
    }

    pub fn from_coeffs(grid: Arc<SpectralGrid>, coeffs: Vec<Complex64>) -> Result<Self> {
        check_len(&grid, coeffs.len())?;
        Ok(Field { grid, coeffs: Some(coeffs), values: None })
    }

    /// Real nodal samples. Coefficients are stored with exact Hermitian
    /// symmetry.
    pub fn from_real_values(grid: Arc<SpectralGrid>, values: &[f64]) -> Result<Self> {
        check_len(&grid, values.len())?;
        let cv: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let coeffs = grid.forward(&cv);
        Ok(Field { grid, coeffs: Some(coeffs), values: None }.hermitize())
    }

    pub fn from_fn(grid: Arc<SpectralGrid>, f: impl Fn(f64) -> Complex64) -> Self {
        let values = (0..grid.len()).map(|j| f(grid.node(j))).collect();
        Field { grid, coeffs: None, values: Some(values) }
    }

    pub fn from_real_fn(grid: Arc<SpectralGrid>, f: impl Fn(f64) -> f64) -> Self {
        let values: Vec<f64> = (0..grid.len()).map(|j| f(grid.node(j))).collect();
        Self::from_real_values(grid, &values).expect("length matches grid")
    }

    /// Sum of modes `Σ c e^{ikx}`. Panics if some `k` is not representable.
    pub fn from_modes(grid: Arc<SpectralGrid>, modes: &[(i64, Complex64)]) -> Self {
        let mut coeffs = vec![ZERO; grid.len()];
        for &(k, c) in modes {
            let i = grid
                .index_of(k)
                .unwrap_or_else(|| panic!("wavenumber {k} not representable on {} nodes", grid.len()));
            coeffs[i] += c;
        }
        Field { grid, coeffs: Some(coeffs), values: None }
    }

    pub fn zeros(grid: Arc<SpectralGrid>) -> Self {
        let coeffs = vec![ZERO; grid.len()];
        Field { grid, coeffs: Some(coeffs), values: None }
    }

    pub fn constant(grid: Arc<SpectralGrid>, c: Complex64) -> Self {
        Self::zeros(grid).add_constant(c)
    }

    pub fn grid(&self) -> &Arc<SpectralGrid> {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn has_coeffs(&self) -> bool {
        self.coeffs.is_some()
    }

    pub fn has_values(&self) -> bool {
        self.values.is_some()
    }

    /// Materialises the coefficient representation.
    pub fn to_coeffs(mut self) -> Self {
        if self.coeffs.is_none() {
            let v = self.values.as_deref().expect("field has a representation");
            self.coeffs = Some(self.grid.forward(v));
        }
        self
    }

    /// Materialises the nodal representation.
    pub fn to_values(mut self) -> Self {
        if self.values.is_none() {
            let c = self.coeffs.as_deref().expect("field has a representation");
            self.values = Some(self.grid.inverse(c));
        }
        self
    }

    pub fn coeffs(&self) -> Cow<'_, [Complex64]> {
        match (&self.coeffs, &self.values) {
            (Some(c), _) => Cow::Borrowed(c),
            (None, Some(v)) => Cow::Owned(self.grid.forward(v)),
            (None, None) => unreachable!("field without representation"),
        }
    }

    pub fn values(&self) -> Cow<'_, [Complex64]> {
        match (&self.values, &self.coeffs) {
            (Some(v), _) => Cow::Borrowed(v),
            (None, Some(c)) => Cow::Owned(self.grid.inverse(c)),
            (None, None) => unreachable!("field without representation"),
        }
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        match self.coeffs {
            Some(c) => c,
            None => self.grid.forward(self.values.as_deref().expect("field has a representation")),
        }
    }

    /// Coefficient of wavenumber `k`; zero when `k` is not representable.
    pub fn coeff(&self, k: i64) -> Complex64 {
        match self.grid.index_of(k) {
            Some(i) => self.coeffs()[i],
            None => ZERO,
        }
    }

    /// Real parts of the nodal samples.
    pub fn real_values(&self) -> Vec<f64> {
        self.values().iter().map(|v| v.re).collect()
    }

    /// Largest nodal modulus.
    pub fn sup_norm(&self) -> f64 {
        self.values().iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    fn map_coeffs(&self, mut f: impl FnMut(usize, i64, Complex64) -> Complex64) -> Field {
        let src = self.coeffs();
        let coeffs = src
            .iter()
            .enumerate()
            .map(|(i, &c)| f(i, self.grid.wavenumber(i), c))
            .collect();
        Field { grid: self.grid.clone(), coeffs: Some(coeffs), values: None }
    }

    /// `c_k ↦ m(k)·c_k`.
    pub fn apply_multiplier(&self, m: impl Fn(i64) -> Complex64) -> Field {
        self.map_coeffs(|_, k, c| m(k) * c)
    }

    pub fn apply_real_multiplier(&self, m: impl Fn(i64) -> f64) -> Field {
        self.map_coeffs(|_, k, c| c * m(k))
    }

    /// `⟨∂_x²⟩^{power}`, symbol `(1 + k⁴)^{power/2}`.
    pub fn bracket_op(&self, power: f64) -> Field {
        if power == 1.0 {
            self.apply_real_multiplier(bracket_symbol)
        } else if power == -1.0 {
            self.apply_real_multiplier(|k| 1.0 / bracket_symbol(k))
        } else {
            self.apply_real_multiplier(|k| bracket_symbol(k).powf(power))
        }
    }

    /// `∂_x²`, symbol `-k²`.
    pub fn second_derivative(&self) -> Field {
        self.apply_real_multiplier(|k| -((k * k) as f64))
    }

    /// `Π_τ`: zeroes every mode outside the cutoff.
    pub fn project(&self, cutoff: Cutoff) -> Field {
        self.map_coeffs(|_, k, c| if cutoff.keeps(k) { c } else { ZERO })
    }

    /// `‖f‖_{H^s} = (Σ_k (1+k²)^s |c_k|²)^{1/2}` on coefficients.
    pub fn sobolev_norm(&self, s: f64) -> f64 {
        self.coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| sobolev_weight(self.grid.wavenumber(i), s) * c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn l2_norm(&self) -> f64 {
        self.sobolev_norm(0.0)
    }

    /// Pointwise complex conjugate, `c_k ↦ conj(c_{-k})`.
    pub fn conj(&self) -> Field {
        let src = self.coeffs();
        self.map_coeffs(|i, _, _| src[self.grid.partner(i)].conj())
    }

    /// Pointwise real part.
    pub fn real_part(&self) -> Field {
        let src = self.coeffs();
        self.map_coeffs(|i, _, c| (c + src[self.grid.partner(i)].conj()) * 0.5)
    }

    /// Pointwise imaginary part.
    pub fn imag_part(&self) -> Field {
        let src = self.coeffs();
        self.map_coeffs(|i, _, c| (c - src[self.grid.partner(i)].conj()) * Complex64::new(0.0, -0.5))
    }

    /// Same as [`Field::real_part`]; used to discard round-off imaginary
    /// residue of a field that is real up to rounding.
    pub fn hermitize(&self) -> Field {
        self.real_part()
    }

    /// `max_k |c_k - conj(c_{-k})|`, zero exactly for real fields.
    pub fn hermitian_defect(&self) -> f64 {
        let c = self.coeffs();
        (0..c.len())
            .map(|i| (c[i] - c[self.grid.partner(i)].conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn add_constant(mut self, c: Complex64) -> Field {
        let mut coeffs = self.coeffs.take().unwrap_or_else(|| self.grid.forward(self.values.as_deref().unwrap()));
        coeffs[0] += c;
        Field { grid: self.grid, coeffs: Some(coeffs), values: None }
    }

    pub fn scale(&self, a: Complex64) -> Field {
        self.map_coeffs(|_, _, c| a * c)
    }

    /// Alias-free square truncated to `|k| ≤ M/2 - 1`; the Nyquist slot of
    /// both input and output is zero.
    pub fn square(&self) -> Field {
        let plan = self.grid.square_plan();
        let band = plan.band() as i64;
        let src = self.coeffs();
        let input: Vec<Complex64> = (-band..=band)
            .map(|k| src[self.grid.index_of(k).expect("band inside grid")])
            .collect();
        let mut out = vec![ZERO; plan.width()];
        let mut work = Vec::new();
        plan.square_into(&input, &mut out, &mut work);
        let mut coeffs = vec![ZERO; self.len()];
        for (slot, c) in out.into_iter().enumerate() {
            coeffs[self.grid.index_of(slot as i64 - band).unwrap()] = c;
        }
        Field { grid: self.grid.clone(), coeffs: Some(coeffs), values: None }
    }

    pub fn same_grid(&self, other: &Field) -> Result<()> {
        if self.grid.len() == other.grid.len() {
            Ok(())
        } else {
            Err(Error::GridMismatch { left: self.grid.len(), right: other.grid.len() })
        }
    }

    /// Largest non-finite check over the coefficients.
    pub fn is_finite(&self) -> bool {
        self.coeffs().iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    fn zip_with(&self, other: &Field, f: impl Fn(Complex64, Complex64) -> Complex64) -> Field {
        assert_eq!(self.len(), other.len(), "fields live on different grids");
        let b = other.coeffs();
        self.map_coeffs(|i, _, a| f(a, b[i]))
    }
}

fn check_len(grid: &SpectralGrid, n: usize) -> Result<()> {
    if n == grid.len() {
        Ok(())
    } else {
        Err(Error::GridMismatch { left: grid.len(), right: n })
    }
}

impl Add for &Field {
    type Output = Field;
    fn add(self, rhs: &Field) -> Field {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &Field {
    type Output = Field;
    fn sub(self, rhs: &Field) -> Field {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul<Complex64> for &Field {
    type Output = Field;
    fn mul(self, rhs: Complex64) -> Field {
        self.scale(rhs)
    }
}

impl Mul<f64> for &Field {
    type Output = Field;
    fn mul(self, rhs: f64) -> Field {
        self.map_coeffs(|_, _, c| c * rhs)
    }
}
