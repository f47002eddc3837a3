//! Wet/dry spell extraction.

use serde::Serialize;

use super::series::DailySeries;
use crate::error::{Error, Result};

/// The spell sample extracted from a daily series.
///
/// A day is wet iff its depth strictly exceeds the wet threshold. Maximal
/// runs of wet days become wet spells, maximal runs of dry days dry spells.
/// A run adjacent to a missing day or to either series boundary has unknown
/// true extent and is discarded (counted, with its days, rather than
/// truncated). Wet-day depths are collected from kept and discarded runs
/// alike, since each day's volume is valid on its own.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct SpellSample {
    /// Durations of kept wet spells, in days.
    pub wet_durations: Vec<u64>,
    /// Durations of kept dry spells, in days.
    pub dry_durations: Vec<u64>,
    /// Total precipitation of each kept wet spell (aligned with
    /// `wet_durations`), in mm.
    pub wet_totals: Vec<f64>,
    /// Depths of every wet day in the series, kept or discarded, in mm.
    pub wet_day_depths: Vec<f64>,
    /// Number of discarded runs (boundary- or missing-adjacent).
    pub discarded_spells: usize,
    /// Total number of days inside discarded runs.
    pub discarded_days: usize,
    /// Number of missing days.
    pub missing_days: usize,
    /// Series length in days.
    pub n_days: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum DayClass {
    Wet,
    Dry,
    Missing,
}

/// Splits a daily series into wet and dry spells.
///
/// `wet_threshold` is in mm; a day is wet iff `depth > wet_threshold`. An
/// empty series yields an empty sample.
pub fn extract_spells(series: &DailySeries, wet_threshold: f64) -> Result<SpellSample> {
    if !(wet_threshold >= 0.0) {
        return Err(Error::InvalidParam(format!(
            "wet threshold must be nonnegative, got {wet_threshold}"
        )));
    }

    let classes: Vec<DayClass> = series
        .records()
        .iter()
        .map(|r| match r.depth {
            None => DayClass::Missing,
            Some(d) if d > wet_threshold => DayClass::Wet,
            Some(_) => DayClass::Dry,
        })
        .collect();

    let mut sample = SpellSample {
        n_days: series.len(),
        missing_days: classes.iter().filter(|&&c| c == DayClass::Missing).count(),
        ..Default::default()
    };

    let records = series.records();
    let mut start = 0usize;
    while start < classes.len() {
        let class = classes[start];
        let mut end = start + 1; // exclusive
        while end < classes.len() && classes[end] == class {
            end += 1;
        }
        if class == DayClass::Wet {
            for rec in &records[start..end] {
                sample
                    .wet_day_depths
                    .push(rec.depth.expect("wet day has a depth"));
            }
        }
        if class != DayClass::Missing {
            let left_known = start > 0 && classes[start - 1] != DayClass::Missing;
            let right_known = end < classes.len() && classes[end] != DayClass::Missing;
            if left_known && right_known {
                let duration = (end - start) as u64;
                match class {
                    DayClass::Wet => {
                        sample.wet_durations.push(duration);
                        sample.wet_totals.push(
                            records[start..end]
                                .iter()
                                .map(|r| r.depth.expect("wet day has a depth"))
                                .sum(),
                        );
                    }
                    DayClass::Dry => sample.dry_durations.push(duration),
                    DayClass::Missing => unreachable!(),
                }
            } else {
                sample.discarded_spells += 1;
                sample.discarded_days += end - start;
            }
        }
        start = end;
    }

    Ok(sample)
}
