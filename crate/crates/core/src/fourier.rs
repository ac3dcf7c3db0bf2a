//! Direct `O(p²)` discrete Fourier transform over `Z/pZ` with compensated
//! accumulation, and residuals for the classical identities.
//!
//! Convention: `f̂(ξ) = Σ_x f(x) e(−ξx)` with `e(x) = exp(2πix/p)`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::field::{mul_mod, Prime};
use crate::sets::{ConvolutionMode, CountVector, ResidueSet};
use crate::{Error, Result};

/// Neumaier-compensated sum of reals.
#[derive(Clone, Copy, Default)]
struct Neumaier {
    sum: f64,
    carry: f64,
}

impl Neumaier {
    #[inline]
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if libm::fabs(self.sum) >= libm::fabs(x) {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.carry
    }
}

#[derive(Clone, Copy, Default)]
struct ComplexSum {
    re: Neumaier,
    im: Neumaier,
}

impl ComplexSum {
    #[inline]
    fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    fn value(self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// `e(t) = exp(2πit/p)` for every residue `t`.
fn roots_of_unity(p: u64) -> Vec<Complex64> {
    (0..p)
        .map(|t| {
            let angle = 2.0 * PI * t as f64 / p as f64;
            Complex64::new(libm::cos(angle), libm::sin(angle))
        })
        .collect()
}

/// Fourier coefficients `f̂(0), …, f̂(p − 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    modulus: Prime,
    coefficients: Vec<Complex64>,
}

impl Spectrum {
    pub fn modulus(&self) -> Prime {
        self.modulus
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn at(&self, xi: u64) -> Complex64 {
        self.coefficients[(xi % self.modulus.get()) as usize]
    }
}

/// Transform of a real function given by its values on `0..p`.
pub fn dft_values(modulus: Prime, values: &[f64]) -> Spectrum {
    let p = modulus.get();
    assert_eq!(values.len() as u64, p);
    let roots = roots_of_unity(p);
    let support: Vec<(u64, f64)> =
        values.iter().enumerate().filter(|(_, &v)| v != 0.0).map(|(x, &v)| (x as u64, v)).collect();
    let coefficients = (0..p)
        .map(|xi| {
            let mut acc = ComplexSum::default();
            for &(x, v) in &support {
                // e(−ξx) = conj(e(ξx))
                acc.add(roots[mul_mod(xi, x, p) as usize].conj() * v);
            }
            acc.value()
        })
        .collect();
    Spectrum { modulus, coefficients }
}

pub fn dft(f: &CountVector) -> Spectrum {
    dft_values(f.modulus(), &f.to_f64())
}

pub fn dft_set(a: &ResidueSet) -> Spectrum {
    dft(&a.indicator())
}

/// `f(x) = (1/p) Σ_ξ f̂(ξ) e(ξx)`.
pub fn inverse(spectrum: &Spectrum) -> Vec<Complex64> {
    let p = spectrum.modulus.get();
    let roots = roots_of_unity(p);
    (0..p)
        .map(|x| {
            let mut acc = ComplexSum::default();
            for (xi, c) in spectrum.coefficients.iter().enumerate() {
                acc.add(c * roots[mul_mod(xi as u64, x, p) as usize]);
            }
            acc.value() / p as f64
        })
        .collect()
}

fn relative(diff: f64, scale: f64) -> f64 {
    libm::fabs(diff) / scale.max(1.0)
}

fn sum_sq(values: &[f64]) -> f64 {
    let mut acc = Neumaier::default();
    for v in values {
        acc.add(v * v);
    }
    acc.value()
}

fn spectral_mean<F: Fn(usize) -> f64>(p: u64, term: F) -> f64 {
    let mut acc = Neumaier::default();
    for xi in 0..p as usize {
        acc.add(term(xi));
    }
    acc.value() / p as f64
}

/// Relative gap in `Σ f(x)² = (1/p) Σ |f̂(ξ)|²`.
pub fn parseval_residual(f: &CountVector) -> f64 {
    let lhs = sum_sq(&f.to_f64());
    let s = dft(f);
    let rhs = spectral_mean(f.modulus().get(), |xi| s.coefficients[xi].norm_sqr());
    relative(lhs - rhs, lhs)
}

/// Relative gap in `Σ_y |(f ∗ g)(y)|² = (1/p) Σ |f̂|²|ĝ|²`.
pub fn convolution_energy_residual(f: &CountVector, g: &CountVector) -> Result<f64> {
    let conv = f.convolve(g, ConvolutionMode::Star)?;
    let lhs = sum_sq(&conv.to_f64());
    let (sf, sg) = (dft(f), dft(g));
    let rhs = spectral_mean(f.modulus().get(), |xi| sf.coefficients[xi].norm_sqr() * sg.coefficients[xi].norm_sqr());
    Ok(relative(lhs - rhs, lhs))
}

/// Largest relative gap in `(f ∗ g)^ = f̂ ĝ` (star) or `(f ∘ g)^ = conj(f̂) ĝ` (circle).
pub fn convolution_transform_residual(f: &CountVector, g: &CountVector, mode: ConvolutionMode) -> Result<f64> {
    let conv = dft(&f.convolve(g, mode)?);
    let (sf, sg) = (dft(f), dft(g));
    let scale = conv.coefficients.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let worst = (0..f.modulus().get() as usize)
        .map(|xi| {
            let a = match mode {
                ConvolutionMode::Star => sf.coefficients[xi],
                ConvolutionMode::Circle => sf.coefficients[xi].conj(),
            };
            (conv.coefficients[xi] - a * sg.coefficients[xi]).norm()
        })
        .fold(0.0, f64::max);
    Ok(relative(worst, scale))
}

/// Largest absolute error when the inverse formula is applied to `f̂`.
pub fn inversion_residual(f: &CountVector) -> f64 {
    let back = inverse(&dft(f));
    f.to_f64().iter().zip(&back).map(|(v, z)| (z - v).norm()).fold(0.0, f64::max)
}

/// `(1/p) Σ_ξ |Â(ξ)|^{2k}`.
pub fn tk_via_spectrum(a: &ResidueSet, k: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1"));
    }
    let s = dft_set(a);
    Ok(spectral_mean(a.modulus().get(), |xi| libm::pow(s.coefficients[xi].norm_sqr(), k as f64)))
}

/// `max_{ξ ≠ 0} |Â(ξ)|`.
pub fn max_nontrivial_coefficient(a: &ResidueSet) -> f64 {
    let s = dft_set(a);
    s.coefficients[1..].iter().map(|c| c.norm()).fold(0.0, f64::max)
}
