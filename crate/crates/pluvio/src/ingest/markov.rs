//! Likelihood-ratio test for the Markov order of the wet/dry sequence.
//!
//! The duration models downstream assume the dry/wet daily sequence is not
//! adequately described by Bernoulli trials (order 0) or a low-order Markov
//! chain. This diagnostic makes that checkable: for each order `m` it tests
//! H₀ "order m" against H₁ "order m+1" with the likelihood-ratio statistic
//!
//! `G² = 2 Σ_{c,s} n(c,s) · ln[ p̂_{m+1}(s|c) / p̂_m(s|suffix_m(c)) ]`
//!
//! over contexts `c` of length `m+1` and next symbols `s`, which is
//! asymptotically chi-square with `2^m` degrees of freedom. Missing days
//! split the sequence into segments; windows never straddle a segment
//! boundary.

use serde::Serialize;

use super::series::DailySeries;
use crate::error::{Error, Result};
use crate::special::reg_gamma_q;

/// One order-m vs order-(m+1) likelihood-ratio test.
#[derive(Debug, Clone, Serialize)]
pub struct MarkovOrderTest {
    pub null_order: usize,
    pub alt_order: usize,
    /// The G² statistic.
    pub statistic: f64,
    /// Degrees of freedom, `2^null_order`.
    pub dof: usize,
    /// Asymptotic chi-square p-value.
    pub p_value: f64,
    /// Number of (context, next-symbol) windows counted.
    pub n_windows: usize,
}

/// Results of the Markov-order diagnostic over a daily series.
#[derive(Debug, Clone, Serialize)]
pub struct MarkovReport {
    pub tests: Vec<MarkovOrderTest>,
    /// Non-missing days used.
    pub n_days: usize,
    /// Number of contiguous non-missing segments.
    pub n_segments: usize,
    pub wet_threshold: f64,
}

/// Runs order-m vs order-(m+1) tests for `m = 0..max_order-1` on the binary
/// wet/dry sequence of `series`.
///
/// Requires at least 100 non-missing days.
pub fn markov_order_test(
    series: &DailySeries,
    wet_threshold: f64,
    max_order: usize,
) -> Result<MarkovReport> {
    if !(wet_threshold >= 0.0) {
        return Err(Error::InvalidParam(format!(
            "wet threshold must be nonnegative, got {wet_threshold}"
        )));
    }
    if max_order == 0 {
        return Err(Error::InvalidParam(
            "max_order must be at least 1".into(),
        ));
    }

    let mut segments: Vec<Vec<bool>> = Vec::new();
    let mut current: Vec<bool> = Vec::new();
    for rec in series.records() {
        match rec.depth {
            Some(d) => current.push(d > wet_threshold),
            None => {
                if !current.is_empty() {
                    segments.push(std::mem::take(&mut current));
                }
            }
        }
    }
    if !current.is_empty() {
        segments.push(current);
    }

    let n_days: usize = segments.iter().map(Vec::len).sum();
    if n_days < 100 {
        return Err(Error::InsufficientData(format!(
            "Markov-order test needs at least 100 non-missing days, got {n_days}"
        )));
    }

    let tests = (0..max_order)
        .map(|m| order_test(&segments, m))
        .collect();

    Ok(MarkovReport {
        tests,
        n_days,
        n_segments: segments.len(),
        wet_threshold,
    })
}

fn order_test(segments: &[Vec<bool>], m: usize) -> MarkovOrderTest {
    let ctx_len = m + 1;
    let n_ctx = 1usize << ctx_len;
    // counts[c][s]: context of the last m+1 symbols (most recent in the low
    // bit), next symbol s.
    let mut counts = vec![[0u64; 2]; n_ctx];
    let mut n_windows = 0usize;

    for seg in segments {
        for t in ctx_len..seg.len() {
            let mut c = 0usize;
            for j in 0..ctx_len {
                c |= (seg[t - 1 - j] as usize) << j;
            }
            counts[c][seg[t] as usize] += 1;
            n_windows += 1;
        }
    }

    // Null (order m) counts pool contexts by their most recent m symbols.
    let suffix_mask = (1usize << m) - 1;
    let mut null_counts = vec![[0u64; 2]; 1usize << m];
    for (c, row) in counts.iter().enumerate() {
        let d = c & suffix_mask;
        null_counts[d][0] += row[0];
        null_counts[d][1] += row[1];
    }

    let mut statistic = 0.0_f64;
    for (c, row) in counts.iter().enumerate() {
        let total: u64 = row[0] + row[1];
        if total == 0 {
            continue;
        }
        let d = c & suffix_mask;
        let null_total: u64 = null_counts[d][0] + null_counts[d][1];
        for s in 0..2 {
            let n_cs = row[s];
            if n_cs == 0 {
                continue;
            }
            let p_alt = n_cs as f64 / total as f64;
            let p_null = null_counts[d][s] as f64 / null_total as f64;
            statistic += 2.0 * n_cs as f64 * (p_alt / p_null).ln();
        }
    }

    let dof = 1usize << m;
    let p_value = reg_gamma_q(dof as f64 / 2.0, statistic.max(0.0) / 2.0)
        .expect("dof >= 1, statistic >= 0");

    MarkovOrderTest {
        null_order: m,
        alt_order: m + 1,
        statistic,
        dof,
        p_value,
        n_windows,
    }
}
