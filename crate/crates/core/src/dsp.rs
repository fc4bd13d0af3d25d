//! Small FFT and window helpers shared by analysis and synthesis.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use realfft::num_complex::Complex;
use realfft::{ComplexToReal, RealFftPlanner, RealToComplex};

thread_local! {
    static PLANNER: RefCell<RealFftPlanner<f64>> = RefCell::new(RealFftPlanner::new());
}

pub(crate) fn forward_plan(n: usize) -> Arc<dyn RealToComplex<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n))
}

pub(crate) fn inverse_plan(n: usize) -> Arc<dyn ComplexToReal<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n))
}

/// Spectrum of `x` zero-padded (or truncated) to `n` samples.
pub(crate) fn rfft(x: &[f64], n: usize) -> Vec<Complex<f64>> {
    let plan = forward_plan(n);
    let mut input = vec![0.0; n];
    let m = x.len().min(n);
    input[..m].copy_from_slice(&x[..m]);
    let mut out = plan.make_output_vec();
    plan.process(&mut input, &mut out).expect("buffer sizes match the plan");
    out
}

/// Inverse of [`rfft`], scaled so that `irfft(rfft(x, n), n) == x`.
pub(crate) fn irfft(spectrum: &[Complex<f64>], n: usize) -> Vec<f64> {
    let plan = inverse_plan(n);
    let mut input = spectrum.to_vec();
    // The inverse transform requires purely real DC and Nyquist bins.
    input[0].im = 0.0;
    if n.is_multiple_of(2) {
        if let Some(last) = input.last_mut() {
            last.im = 0.0;
        }
    }
    let mut out = plan.make_output_vec();
    plan.process(&mut input, &mut out).expect("buffer sizes match the plan");
    let scale = 1.0 / n as f64;
    out.iter_mut().for_each(|v| *v *= scale);
    out
}

/// Smallest FFT size of the form 2^a, 3·2^a or 9·2^a that holds `n`.
pub(crate) fn fft_size_at_least(n: usize) -> usize {
    let p = n.next_power_of_two();
    [p * 9 / 16, p * 3 / 4, p].into_iter().find(|&c| c >= n).unwrap_or(p)
}

/// Periodic Hann window.
pub(crate) fn hann(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / n as f64).cos())
        .collect()
}

/// Vertex of the parabola through three equally spaced points, as
/// `(offset, value)` with the offset in `(-1, 1)` relative to the middle
/// point.
pub(crate) fn parabolic_peak(a: f64, b: f64, c: f64) -> (f64, f64) {
    let denom = a - 2.0 * b + c;
    if denom.abs() < 1e-300 {
        return (0.0, b);
    }
    let offset = (0.5 * (a - c) / denom).clamp(-1.0, 1.0);
    (offset, b - 0.25 * (a - c) * offset)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fft_round_trip() {
        let x: Vec<f64> = (0..37).map(|i| ((i * 7919) % 13) as f64 - 6.0).collect();
        let y = irfft(&rfft(&x, 64), 64);
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(y[37..].iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn parabola_vertex() {
        // y = -(x - 0.3)^2 sampled at -1, 0, 1
        let f = |x: f64| -(x - 0.3) * (x - 0.3);
        let (off, val) = parabolic_peak(f(-1.0), f(0.0), f(1.0));
        assert!((off - 0.3).abs() < 1e-12);
        assert!(val.abs() < 1e-12);
    }
}
