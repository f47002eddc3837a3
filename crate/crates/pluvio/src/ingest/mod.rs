//! Daily precipitation series: parsing, wet/dry spell extraction, and the
//! Markov-order diagnostic.
//!
//! The raw material is an ordered sequence of (date, depth) records. From it
//! the analysis needs three derived samples: wet-spell durations, dry-spell
//! durations, and the wet-day depths (daily volumes), plus per-spell total
//! volumes. A spell whose true extent is unknown — one touching the series
//! boundary or a missing day — is discarded rather than truncated, because a
//! truncated duration would bias the duration fit downward.

mod markov;
mod series;
mod spells;

pub use markov::{markov_order_test, MarkovOrderTest, MarkovReport};
pub use series::{parse_csv, DailySeries, DayRecord, IngestConfig};
pub use spells::{extract_spells, SpellSample};
