use std::sync::Arc;

use super::{SolverConfig, UField};
use crate::error::{Error, Result};
use crate::spectral::{bracket_symbol, Complex64, Cutoff, Field, SpectralGrid, SquarePlan};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Exact linear sub-flow `e^{it⟨∂_x²⟩}`.
pub fn linear_flow(u: &UField, t: f64) -> UField {
    UField(u.0.apply_multiplier(|k| Complex64::from_polar(1.0, t * bracket_symbol(k))))
}

/// Exact nonlinear sub-flow. The real part of `w0` is frozen, so the
/// imaginary part moves linearly in `t`:
///
/// ```text
/// w(t) = w0 - (it/2)⟨∂_x²⟩^{-1} Π[(w0+w̄0) + ½∂_x²(Πw0 + Πw̄0)²]
/// ```
pub fn nonlinear_flow(w0: &UField, t: f64, filter: Option<Cutoff>, nonlinearity: bool) -> UField {
    let proj = |f: &Field| match filter {
        Some(c) => f.project(c),
        None => f.clone(),
    };
    let w = &w0.0;
    let wbar = w.conj();
    let mut source = w + &wbar;
    if nonlinearity {
        let sum = &proj(w) + &proj(&wbar);
        source = &source + &(&sum.square().second_derivative() * 0.5);
    }
    let update = proj(&source).bracket_op(-1.0).scale(Complex64::new(0.0, -0.5 * t));
    UField(w + &update)
}

/// One FLTS step `e^{iτ⟨∂_x²⟩} Π_τ Φ_{X2}^τ`, built from the general
/// operators. [`FltsStepper`] is the fast equivalent used by [`evolve`].
///
/// [`evolve`]: super::evolve
pub fn flts_step(u: &UField, cfg: &SolverConfig) -> Result<UField> {
    cfg.validate()?;
    let mut stepper = FltsStepper::new(u.0.grid().clone(), cfg)?;
    let mut coeffs = u.0.coeffs().into_owned();
    stepper.step(&mut coeffs)?;
    Ok(UField(Field::from_coeffs(u.0.grid().clone(), coeffs)?))
}

/// Precomputed single-step map acting in place on coefficient vectors.
///
/// Only the retained band is touched: with `K` the cutoff, the work per
/// step is `O(K)` plus two transforms of the padded product grid.
#[derive(Debug, Clone)]
pub struct FltsStepper {
    grid: Arc<SpectralGrid>,
    tau: f64,
    slots: Vec<usize>,
    partners: Vec<usize>,
    k2: Vec<f64>,
    kick: Vec<f64>,
    phase: Vec<Complex64>,
    product: Option<Product>,
    real: Vec<Complex64>,
    steps_taken: usize,
}

#[derive(Debug, Clone)]
struct Product {
    plan: SquarePlan,
    // centred product slot for each band entry, None for the Nyquist mode
    map: Vec<Option<usize>>,
    input: Vec<Complex64>,
    output: Vec<Complex64>,
    work: Vec<Complex64>,
}

impl FltsStepper {
    pub fn new(grid: Arc<SpectralGrid>, cfg: &SolverConfig) -> Result<Self> {
        cfg.validate()?;
        if grid.len() != cfg.grid_size {
            return Err(Error::GridMismatch { left: cfg.grid_size, right: grid.len() });
        }
        let filter = cfg.filter()?;
        let tau = cfg.tau;
        let slots: Vec<usize> = (0..grid.len())
            .filter(|&i| filter.is_none_or(|c| c.keeps(grid.wavenumber(i))))
            .collect();
        let ks: Vec<i64> = slots.iter().map(|&i| grid.wavenumber(i)).collect();
        let half = (grid.len() / 2) as i64;
        let product = cfg.nonlinearity_enabled.then(|| {
            let band = ks.iter().map(|k| k.abs()).filter(|&k| k < half).max().unwrap_or(0);
            let plan = SquarePlan::new(band as usize);
            let map = ks
                .iter()
                .map(|&k| (k.abs() <= band && k > -half).then(|| (k + band) as usize))
                .collect();
            let width = plan.width();
            Product { plan, map, input: vec![ZERO; width], output: vec![ZERO; width], work: Vec::new() }
        });
        Ok(FltsStepper {
            partners: slots.iter().map(|&i| grid.partner(i)).collect(),
            k2: ks.iter().map(|&k| (k * k) as f64).collect(),
            kick: ks.iter().map(|&k| tau / bracket_symbol(k)).collect(),
            phase: ks.iter().map(|&k| Complex64::from_polar(1.0, tau * bracket_symbol(k))).collect(),
            real: vec![ZERO; slots.len()],
            slots,
            product,
            grid,
            tau,
            steps_taken: 0,
        })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn grid(&self) -> &Arc<SpectralGrid> {
        &self.grid
    }

    /// Number of retained modes.
    pub fn band_len(&self) -> usize {
        self.slots.len()
    }

    /// Advances `u` (full coefficient vector) by one step. On a non-finite
    /// result `u` is left partially updated and the step index is reported.
    pub fn step(&mut self, u: &mut [Complex64]) -> Result<()> {
        assert_eq!(u.len(), self.grid.len(), "coefficient vector does not match grid");
        let step = self.steps_taken;
        for (b, (&i, &p)) in self.slots.iter().zip(&self.partners).enumerate() {
            self.real[b] = (u[i] + u[p].conj()) * 0.5;
        }
        if let Some(prod) = self.product.as_mut() {
            prod.input.iter_mut().for_each(|c| *c = ZERO);
            for (b, slot) in prod.map.iter().enumerate() {
                if let Some(s) = *slot {
                    prod.input[s] = self.real[b];
                }
            }
            prod.plan.square_into(&prod.input, &mut prod.output, &mut prod.work);
        }
        let outside = self.slots.len() < u.len();
        let mut inband = Vec::new();
        if outside {
            inband = self.slots.iter().map(|&i| u[i]).collect();
            u.iter_mut().for_each(|c| *c = ZERO);
        }
        let mut finite = true;
        for b in 0..self.slots.len() {
            let sq = match &self.product {
                Some(prod) => prod.map[b].map_or(ZERO, |s| prod.output[s]),
                None => ZERO,
            };
            let src = self.real[b] - sq * self.k2[b];
            let old = if outside { inband[b] } else { u[self.slots[b]] };
            // w = u - iτ⟨k⟩^{-1}(r - k²·sq)
            let w = old - Complex64::new(-src.im, src.re) * self.kick[b];
            let next = self.phase[b] * w;
            finite &= next.re.is_finite() && next.im.is_finite();
            u[self.slots[b]] = next;
        }
        self.steps_taken += 1;
        if finite {
            Ok(())
        } else {
            Err(Error::BlowUp { step: step + 1, time: (step + 1) as f64 * self.tau })
        }
    }

    /// Resets the internal step counter used in blow-up diagnostics.
    pub fn reset_counter(&mut self) {
        self.steps_taken = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::SpectralGrid;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn max_diff(a: &Field, b: &Field) -> f64 {
        (a - b).coeffs().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn pseudo_random_u(g: &Arc<SpectralGrid>, seed: u64) -> UField {
        let mut s = seed.wrapping_add(0x9E3779B97F4A7C15);
        let mut next = move || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let vals: Vec<Complex64> = (0..g.len()).map(|_| c(next(), next())).collect();
        UField(Field::from_values(g.clone(), vals).unwrap().to_coeffs())
    }

    #[test]
    fn linear_flow_examples() {
        let g = SpectralGrid::new(16).unwrap();
        let u = pseudo_random_u(&g, 1);
        assert_eq!(linear_flow(&u, 0.0).coeffs(), u.coeffs());
        let k = UField(Field::constant(g.clone(), c(2.0, -1.0)));
        let out = linear_flow(&k, 0.3);
        assert!((out.0.coeff(0) - c(2.0, -1.0) * Complex64::from_polar(1.0, 0.3)).norm() < 1e-15);
        let e1 = UField(Field::from_modes(g, &[(1, c(1.0, 0.0))]));
        let out = linear_flow(&e1, 0.7);
        assert!((out.0.coeff(1) - Complex64::from_polar(1.0, 0.7 * 2f64.sqrt())).norm() < 1e-15);
    }

    #[test]
    fn linear_flow_group_law_and_modulus() {
        let g = SpectralGrid::new(32).unwrap();
        let u = pseudo_random_u(&g, 2);
        let ab = linear_flow(&linear_flow(&u, 0.3), 0.45);
        let direct = linear_flow(&u, 0.75);
        assert!(max_diff(&ab.0, &direct.0) < 1e-12);
        let out = linear_flow(&u, 12.345);
        for (a, b) in out.coeffs().iter().zip(u.coeffs().iter()) {
            assert!((a.norm() - b.norm()).abs() <= 4.0 * f64::EPSILON * b.norm());
        }
    }

    #[test]
    fn nonlinear_flow_constants() {
        let g = SpectralGrid::new(16).unwrap();
        let cut = Cutoff::from_tau(0.1).ok();
        let ib = UField(Field::constant(g.clone(), c(0.0, 0.7)));
        let out = nonlinear_flow(&ib, 0.4, cut, true);
        assert!(max_diff(&out.0, &ib.0) < 1e-16);
        let a = UField(Field::constant(g.clone(), c(0.8, 0.0)));
        let out = nonlinear_flow(&a, 0.4, cut, true);
        assert!((out.0.coeff(0) - c(0.8, -0.4 * 0.8)).norm() < 1e-15);
        assert!(out.0.l2_norm() - out.0.coeff(0).norm() < 1e-15);
    }

    /// Coefficients of the square of a band-limited field by direct
    /// convolution.
    fn convolve_square(f: &Field, band: i64) -> Vec<(i64, Complex64)> {
        let mut out = Vec::new();
        for k in -2 * band..=2 * band {
            let mut acc = ZERO;
            for a in -band..=band {
                let b = k - a;
                if b.abs() <= band {
                    acc += f.coeff(a) * f.coeff(b);
                }
            }
            out.push((k, acc));
        }
        out
    }

    #[test]
    fn nonlinear_flow_single_mode() {
        let g = SpectralGrid::new(16).unwrap();
        let tau = 0.2;
        let cut = Cutoff::from_tau(0.25).ok();
        let w0 = UField(Field::from_modes(g.clone(), &[(1, c(1.0, 0.0))]));
        let out = nonlinear_flow(&w0, tau, cut, true);

        // oracle: the square of 2cos x by direct convolution, then the
        // closed form assembled mode by mode
        let two_cos = Field::from_modes(g.clone(), &[(1, c(1.0, 0.0)), (-1, c(1.0, 0.0))]);
        let sq = convolve_square(&two_cos, 1);
        let mut expect = vec![(1, c(1.0, 0.0))];
        for k in -2i64..=2 {
            let lin = two_cos.coeff(k);
            let quad = sq.iter().find(|(kk, _)| *kk == k).unwrap().1 * (-0.5 * (k * k) as f64);
            let corr = (lin + quad) * c(0.0, -tau / 2.0) / bracket_symbol(k);
            expect.push((k, corr));
        }
        let expect = Field::from_modes(g.clone(), &expect);
        assert!(max_diff(&out.0, &expect) < 1e-15);

        // closed form: e^{ix} - iτ[cos x/√2 - 2cos 2x/√17]
        let hand = Field::from_modes(
            g,
            &[
                (1, c(1.0, 0.0) + c(0.0, -tau) * (0.5 / 2f64.sqrt())),
                (-1, c(0.0, -tau) * (0.5 / 2f64.sqrt())),
                (2, c(0.0, tau) / 17f64.sqrt()),
                (-2, c(0.0, tau) / 17f64.sqrt()),
            ],
        );
        assert!(max_diff(&out.0, &hand) < 1e-15);
    }

    #[test]
    fn nonlinear_flow_preserves_real_part_and_composes() {
        let g = SpectralGrid::new(32).unwrap();
        let cut = Cutoff::from_tau(0.02).ok();
        for seed in 0..4 {
            let w = pseudo_random_u(&g, seed);
            for t in [0.1, 1.0] {
                let out = nonlinear_flow(&w, t, cut, true);
                let re_in = w.0.real_part();
                let re_out = out.0.real_part();
                let scale = re_in.coeffs().iter().map(|z| z.norm()).fold(0.0, f64::max);
                assert!(max_diff(&re_in, &re_out) <= 1e-13 * scale);
            }
            let two = nonlinear_flow(&nonlinear_flow(&w, 0.3, cut, true), 0.5, cut, true);
            let one = nonlinear_flow(&w, 0.8, cut, true);
            assert!(max_diff(&two.0, &one.0) < 1e-12);
        }
    }

    #[test]
    fn step_of_zero_data() {
        let g = SpectralGrid::new(16).unwrap();
        let tau = 0.05;
        let u = UField(Field::constant(g, c(0.5, 0.0)));
        let out = flts_step(&u, &SolverConfig::new(tau, 1.0, 16)).unwrap();
        let expect = Complex64::from_polar(1.0, tau) * c(1.0, -tau) * 0.5;
        assert!((out.0.coeff(0) - expect).norm() < 1e-16);
        assert!(out.0.l2_norm() - out.0.coeff(0).norm() < 1e-16);
    }

    #[test]
    fn stepper_matches_sub_flow_composition() {
        let g = SpectralGrid::new(32).unwrap();
        let tau = 0.01;
        let cut = Cutoff::from_tau(tau).unwrap();
        let u = UField(Field::from_real_fn(g.clone(), |x| x.cos() + 0.5).project(cut));
        let cfg = SolverConfig::new(tau, 1.0, 32);
        let fast = flts_step(&u, &cfg).unwrap();
        let slow = linear_flow(&UField(nonlinear_flow(&u, tau, Some(cut), true).0.project(cut)), tau);
        assert!(max_diff(&fast.0, &slow.0) < 1e-14);

        // generic complex data, both toggles
        let w = pseudo_random_u(&g, 9);
        for (filter, nonlin) in [(true, true), (true, false), (false, true), (false, false)] {
            let cfg = cfg.clone().with_filter(filter).with_nonlinearity(nonlin);
            let f = cfg.filter().unwrap();
            let fast = flts_step(&w, &cfg).unwrap();
            let mid = nonlinear_flow(&w, tau, f, nonlin).0;
            let mid = f.map_or(mid.clone(), |c| mid.project(c));
            let slow = linear_flow(&UField(mid), tau);
            assert!(max_diff(&fast.0, &slow.0) < 1e-14, "filter {filter} nonlin {nonlin}");
        }
    }

    #[test]
    fn step_output_is_band_limited() {
        let g = SpectralGrid::new(64).unwrap();
        let w = pseudo_random_u(&g, 4);
        for tau in [0.01, 0.04, 0.3] {
            let out = flts_step(&w, &SolverConfig::new(tau, 0.6, 64)).unwrap();
            let cut = Cutoff::from_tau(tau).unwrap();
            for k in g.wavenumbers() {
                if !cut.keeps(k) {
                    assert_eq!(out.0.coeff(k), ZERO);
                }
            }
        }
    }

    #[test]
    fn unfiltered_linear_step_at_zero_time_is_identity() {
        // τ → 0: with both toggles off the map tends to the identity
        let g = SpectralGrid::new(16).unwrap();
        let w = pseudo_random_u(&g, 5);
        let cfg = SolverConfig::new(1e-300, 1e-300, 16).with_filter(false).with_nonlinearity(false);
        let out = flts_step(&w, &cfg).unwrap();
        assert!(max_diff(&out.0, &w.0) < 1e-15);
    }

    #[test]
    fn blow_up_is_reported() {
        let g = SpectralGrid::new(16).unwrap();
        let cfg = SolverConfig::new(0.1, 1.0, 16);
        let mut stepper = FltsStepper::new(g, &cfg).unwrap();
        let mut u = vec![ZERO; 16];
        u[1] = c(f64::INFINITY, 0.0);
        match stepper.step(&mut u) {
            Err(Error::BlowUp { step, .. }) => assert_eq!(step, 1),
            other => panic!("expected blow-up, got {other:?}"),
        }
    }
}
