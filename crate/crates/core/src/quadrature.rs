// Copyright 2026 The coherent-path Authors
// SPDX-License-Identifier: Apache-2.0

//! Fixed-grid quadrature rules.

use std::ops::{Add, Mul};

/// Composite Simpson weights for `intervals` equal intervals of width `h`.
/// An odd interval count closes with the 3/8 rule on the last three intervals;
/// a single interval falls back to the trapezoid.
pub fn simpson_weights(intervals: usize, h: f64) -> Vec<f64> {
    let mut w = vec![0.0; intervals + 1];
    match intervals {
        0 => {}
        1 => {
            w[0] = 0.5 * h;
            w[1] = 0.5 * h;
        }
        _ => {
            let (simpson_end, tail) = if intervals.is_multiple_of(2) {
                (intervals, false)
            } else {
                (intervals - 3, true)
            };
            let mut k = 0;
            while k + 2 <= simpson_end {
                w[k] += h / 3.0;
                w[k + 1] += 4.0 * h / 3.0;
                w[k + 2] += h / 3.0;
                k += 2;
            }
            if tail {
                let s = simpson_end;
                let c = 3.0 * h / 8.0;
                w[s] += c;
                w[s + 1] += 3.0 * c;
                w[s + 2] += 3.0 * c;
                w[s + 3] += c;
            }
        }
    }
    w
}

/// Integrate samples on a uniform grid with composite Simpson.
pub fn simpson<T>(samples: &[T], h: f64) -> T
where
    T: Clone + Add<Output = T> + Mul<f64, Output = T>,
{
    assert!(!samples.is_empty(), "simpson needs at least one sample");
    let w = simpson_weights(samples.len() - 1, h);
    let mut acc = samples[0].clone() * w[0];
    for (s, wi) in samples.iter().zip(&w).skip(1) {
        acc = acc + s.clone() * *wi;
    }
    acc
}

/// Integrate samples on an arbitrary increasing grid: quadratic through each
/// consecutive node triple, trapezoid on a leftover interval.
pub fn integrate_nonuniform<T>(xs: &[f64], ys: &[T]) -> T
where
    T: Clone + Add<Output = T> + Mul<f64, Output = T>,
{
    assert_eq!(xs.len(), ys.len());
    assert!(!xs.is_empty());
    let mut acc = ys[0].clone() * 0.0;
    let mut k = 0;
    while k + 2 < xs.len() {
        let (h0, h1) = (xs[k + 1] - xs[k], xs[k + 2] - xs[k + 1]);
        let tot = h0 + h1;
        let w0 = tot / 6.0 * (2.0 - h1 / h0);
        let w1 = tot.powi(3) / (6.0 * h0 * h1);
        let w2 = tot / 6.0 * (2.0 - h0 / h1);
        acc = acc + ys[k].clone() * w0 + ys[k + 1].clone() * w1 + ys[k + 2].clone() * w2;
        k += 2;
    }
    if k + 1 < xs.len() {
        let h = xs[k + 1] - xs[k];
        acc = acc + (ys[k].clone() + ys[k + 1].clone()) * (0.5 * h);
    }
    acc
}

/// Running integral `∫_0^{t_i}` at every node of a uniform grid, fourth order.
/// Interior intervals use the four-point cubic rule, the end intervals its
/// one-sided variant.
pub fn cumulative<T>(samples: &[T], h: f64) -> Vec<T>
where
    T: Clone + Add<Output = T> + Mul<f64, Output = T>,
{
    let n = samples.len();
    let zero = samples[0].clone() * 0.0;
    let mut out = vec![zero; n];
    if n < 2 {
        return out;
    }
    let f = |i: usize| samples[i].clone();
    for k in 0..n - 1 {
        let piece = if n < 4 {
            (f(k) + f(k + 1)) * (0.5 * h)
        } else if k == 0 {
            (f(0) * 9.0 + f(1) * 19.0 + f(2) * (-5.0) + f(3)) * (h / 24.0)
        } else if k == n - 2 {
            (f(n - 1) * 9.0 + f(n - 2) * 19.0 + f(n - 3) * (-5.0) + f(n - 4)) * (h / 24.0)
        } else {
            (f(k - 1) * (-1.0) + f(k) * 13.0 + f(k + 1) * 13.0 + f(k + 2) * (-1.0)) * (h / 24.0)
        };
        out[k + 1] = out[k].clone() + piece;
    }
    out
}
