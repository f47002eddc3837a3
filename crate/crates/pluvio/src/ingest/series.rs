//! Daily series representation and CSV parsing.

use std::io::BufRead;

use chrono::NaiveDate;

use crate::error::{Error, Result};

/// One calendar day: a measured depth in millimetres, or a missing record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DayRecord {
    pub date: NaiveDate,
    /// `None` marks a missing observation.
    pub depth: Option<f64>,
}

/// An ordered run of daily records with consecutive dates.
///
/// Gaps in the calendar are represented as explicit missing records, so the
/// invariant is simply: each record's date is the previous date plus one day.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DailySeries {
    records: Vec<DayRecord>,
}

impl DailySeries {
    /// Validates consecutive dates and nonnegative depths.
    pub fn new(records: Vec<DayRecord>) -> Result<Self> {
        for (i, w) in records.windows(2).enumerate() {
            let expected = w[0].date.succ_opt().ok_or_else(|| Error::Domain(
                "date overflow".into(),
            ))?;
            if w[1].date != expected {
                return Err(Error::Domain(format!(
                    "dates must advance by exactly one day: record {} is {}, record {} is {}",
                    i,
                    w[0].date,
                    i + 1,
                    w[1].date
                )));
            }
        }
        if let Some(rec) = records
            .iter()
            .find(|r| r.depth.is_some_and(|d| !(d >= 0.0)))
        {
            return Err(Error::Domain(format!(
                "negative or non-finite depth {:?} on {}",
                rec.depth, rec.date
            )));
        }
        Ok(Self { records })
    }

    pub fn records(&self) -> &[DayRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn n_missing(&self) -> usize {
        self.records.iter().filter(|r| r.depth.is_none()).count()
    }
}

/// Parsing options for daily CSV input.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct IngestConfig {
    /// A depth value to treat as missing (for example `-999`), in addition
    /// to empty fields.
    pub missing_sentinel: Option<f64>,
}

/// Parses a daily series from CSV.
///
/// Format: one row per day, `date,precip_mm`, dates in ISO 8601
/// (`YYYY-MM-DD`). An optional header row `date,precip_mm` is skipped. An
/// empty depth field, or the configured sentinel value, marks the day
/// missing. Dates must strictly increase; calendar gaps are filled with
/// explicit missing records.
pub fn parse_csv<R: BufRead>(reader: R, config: &IngestConfig) -> Result<DailySeries> {
    let mut records: Vec<DayRecord> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let (date_field, depth_field) = match trimmed.split_once(',') {
            Some((d, v)) => (d.trim(), v.trim()),
            None => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected `date,precip_mm`, got {trimmed:?}"),
                })
            }
        };
        if line_no == 1 && date_field.eq_ignore_ascii_case("date") {
            continue; // header
        }
        let date = date_field.parse::<NaiveDate>().map_err(|e| Error::Parse {
            line: line_no,
            message: format!("bad date {date_field:?}: {e}"),
        })?;
        let depth = if depth_field.is_empty() {
            None
        } else {
            let value: f64 = depth_field.parse().map_err(|e| Error::Parse {
                line: line_no,
                message: format!("bad depth {depth_field:?}: {e}"),
            })?;
            if config.missing_sentinel.is_some_and(|s| value == s) {
                None
            } else if !(value >= 0.0) {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("negative depth {value}"),
                });
            } else {
                Some(value)
            }
        };

        if let Some(last) = records.last() {
            if date <= last.date {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!(
                        "dates must strictly increase: {} follows {}",
                        date, last.date
                    ),
                });
            }
            // Fill calendar gaps with explicit missing records.
            let mut cursor = last.date.succ_opt().expect("date overflow");
            while cursor < date {
                records.push(DayRecord {
                    date: cursor,
                    depth: None,
                });
                cursor = cursor.succ_opt().expect("date overflow");
            }
        }
        records.push(DayRecord { date, depth });
    }
    DailySeries::new(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn date(s: &str) -> NaiveDate {
        s.parse().unwrap()
    }

    #[test]
    fn two_plain_rows() {
        let src = "2000-01-01,0.0\n2000-01-02,5.2";
        let series = parse_csv(Cursor::new(src), &IngestConfig::default()).unwrap();
        assert_eq!(series.len(), 2);
        assert_eq!(series.records()[0].depth, Some(0.0));
        assert_eq!(series.records()[1].depth, Some(5.2));
    }

    #[test]
    fn empty_depth_is_missing() {
        let src = "2000-01-01,1.0\n2000-01-02,\n2000-01-03,2.0";
        let series = parse_csv(Cursor::new(src), &IngestConfig::default()).unwrap();
        assert_eq!(series.records()[1].depth, None);
        assert_eq!(series.n_missing(), 1);
    }

    #[test]
    fn sentinel_is_missing_when_configured() {
        let config = IngestConfig {
            missing_sentinel: Some(-999.0),
        };
        let src = "2000-01-01,1.0\n2000-01-02,-999\n2000-01-03,2.0";
        let series = parse_csv(Cursor::new(src), &config).unwrap();
        assert_eq!(series.records()[1].depth, None);
        // without the sentinel the same value is a parse error
        let err = parse_csv(Cursor::new(src), &IngestConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn header_is_skipped() {
        let src = "date,precip_mm\n2000-01-01,1.0";
        let series = parse_csv(Cursor::new(src), &IngestConfig::default()).unwrap();
        assert_eq!(series.len(), 1);
    }

    #[test]
    fn calendar_gap_becomes_missing_records() {
        let src = "2000-01-01,1.0\n2000-01-04,2.0";
        let series = parse_csv(Cursor::new(src), &IngestConfig::default()).unwrap();
        assert_eq!(series.len(), 4);
        assert_eq!(series.records()[1].depth, None);
        assert_eq!(series.records()[2].depth, None);
        assert_eq!(series.records()[1].date, date("2000-01-02"));
    }

    #[test]
    fn non_monotone_dates_rejected_with_line_number() {
        let src = "2000-01-02,1.0\n2000-01-01,2.0";
        match parse_csv(Cursor::new(src), &IngestConfig::default()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_row_names_line() {
        let src = "2000-01-01,1.0\nnot a row";
        match parse_csv(Cursor::new(src), &IngestConfig::default()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn negative_depth_rejected() {
        let src = "2000-01-01,-0.5";
        assert!(matches!(
            parse_csv(Cursor::new(src), &IngestConfig::default()),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn series_invariant_checked_directly() {
        let bad = vec![
            DayRecord { date: date("2000-01-01"), depth: Some(1.0) },
            DayRecord { date: date("2000-01-03"), depth: Some(1.0) },
        ];
        assert!(DailySeries::new(bad).is_err());
    }
}
