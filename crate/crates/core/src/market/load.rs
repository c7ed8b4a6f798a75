use std::io::Read;
use std::path::Path;

use chrono::{DateTime, NaiveDateTime, Utc};
use sha2::{Digest, Sha256};

use super::{is_hour_aligned, HourlyRecord, HourlySeries};
use crate::error::{Error, Result};

/// Column names for the hourly input CSV.
#[derive(Debug, Clone)]
pub struct ColumnSchema {
    pub timestamp: String,
    pub spot_price: String,
    pub wind_speed: String,
    pub irradiance: String,
    /// When false a missing spot column is allowed and prices read as 0.
    pub spot_required: bool,
}

impl Default for ColumnSchema {
    fn default() -> Self {
        Self {
            timestamp: "timestamp".into(),
            spot_price: "spot_price_eur_mwh".into(),
            wind_speed: "wind_speed_ms".into(),
            irradiance: "irradiance_wm2".into(),
            spot_required: true,
        }
    }
}

impl ColumnSchema {
    /// Schema for weather files that may lack a spot price column.
    pub fn weather() -> Self {
        Self {
            spot_required: false,
            ..Self::default()
        }
    }
}

/// Parses an ISO 8601 timestamp. Offsets are converted to UTC; a missing
/// offset is read as UTC.
pub fn parse_timestamp(s: &str) -> Option<DateTime<Utc>> {
    let s = s.trim();
    if let Ok(dt) = DateTime::parse_from_rfc3339(s) {
        return Some(dt.with_timezone(&Utc));
    }
    for fmt in ["%Y-%m-%dT%H:%M%#z", "%Y-%m-%dT%H:%M:%S%#z", "%Y-%m-%d %H:%M%#z"] {
        if let Ok(dt) = DateTime::parse_from_str(s, fmt) {
            return Some(dt.with_timezone(&Utc));
        }
    }
    let naive = s.trim_end_matches('Z');
    for fmt in ["%Y-%m-%dT%H:%M:%S", "%Y-%m-%dT%H:%M", "%Y-%m-%d %H:%M:%S", "%Y-%m-%d %H:%M"] {
        if let Ok(dt) = NaiveDateTime::parse_from_str(naive, fmt) {
            return Some(dt.and_utc());
        }
    }
    None
}

/// Loads and validates an hourly series from a CSV file.
pub fn load_hourly_series(path: impl AsRef<Path>, schema: &ColumnSchema) -> Result<HourlySeries> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let digest = hex::encode(Sha256::digest(&bytes));
    read_hourly_series(bytes.as_slice(), path, schema).map(|s| s.with_digest(digest))
}

/// Reads an hourly series from any reader; `origin` is used in error messages.
pub fn read_hourly_series<R: Read>(
    reader: R,
    origin: &Path,
    schema: &ColumnSchema,
) -> Result<HourlySeries> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let find = |name: &str| headers.iter().position(|h| h == name);
    let ts_col = find(&schema.timestamp).ok_or_else(|| Error::MissingColumn(schema.timestamp.clone()))?;
    let price_col = find(&schema.spot_price);
    if price_col.is_none() && schema.spot_required {
        return Err(Error::MissingColumn(schema.spot_price.clone()));
    }
    let wind_col = find(&schema.wind_speed);
    let irr_col = find(&schema.irradiance);

    let parse_err = |line: u64, message: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        message,
    };

    let mut records: Vec<HourlyRecord> = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let field = |i: usize| row.get(i).unwrap_or("");
        let raw_ts = field(ts_col);
        let timestamp = parse_timestamp(raw_ts)
            .ok_or_else(|| parse_err(line, format!("unparseable timestamp `{raw_ts}`")))?;
        if !is_hour_aligned(timestamp) {
            return Err(parse_err(line, format!("timestamp `{raw_ts}` is not on the hour")));
        }
        let number = |i: usize, what: &str| -> Result<f64> {
            let raw = field(i);
            raw.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_err(line, format!("invalid {what} `{raw}`")))
        };
        let optional = |col: Option<usize>, what: &str| -> Result<Option<f64>> {
            match col {
                Some(i) if !field(i).is_empty() => {
                    let v = number(i, what)?;
                    if v < 0.0 {
                        return Err(parse_err(line, format!("negative {what} `{v}`")));
                    }
                    Ok(Some(v))
                }
                _ => Ok(None),
            }
        };
        let record = HourlyRecord {
            timestamp,
            spot_price: match price_col {
                Some(i) => number(i, "spot price")?,
                None => 0.0,
            },
            wind_speed: optional(wind_col, "wind speed")?,
            irradiance: optional(irr_col, "irradiance")?,
        };
        if let Some(prev) = records.last() {
            if record.timestamp <= prev.timestamp {
                return Err(Error::Ordering {
                    path: origin.to_path_buf(),
                    line,
                    timestamp: raw_ts.to_string(),
                });
            }
        }
        records.push(record);
    }
    if records.is_empty() {
        return Err(Error::EmptyInput(origin.to_path_buf()));
    }
    HourlySeries::from_records(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    fn read(text: &str) -> Result<HourlySeries> {
        read_hourly_series(text.as_bytes(), Path::new("mem.csv"), &ColumnSchema::default())
    }

    #[test]
    fn minimal_row() {
        let s = read("timestamp,spot_price_eur_mwh\n2015-01-01T00:00Z, 25.0\n").unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.records()[0].spot_price, 25.0);
        assert_eq!(
            s.records()[0].timestamp,
            Utc.with_ymd_and_hms(2015, 1, 1, 0, 0, 0).unwrap()
        );
    }

    #[test]
    fn gap_is_counted() {
        let mut text = String::from("timestamp,spot_price_eur_mwh\n");
        for h in 0..8 {
            if h != 5 {
                text.push_str(&format!("2015-01-01T{h:02}:00Z,{h}.5\n"));
            }
        }
        let s = read(&text).unwrap();
        assert_eq!(s.len(), 7);
        assert_eq!(s.coverage().gap_hours, 1);
        assert_eq!(
            s.gaps(),
            vec![Utc.with_ymd_and_hms(2015, 1, 1, 5, 0, 0).unwrap()]
        );
    }

    #[test]
    fn malformed_row_names_line() {
        let err = read("timestamp,spot_price_eur_mwh\n2015-01-01T00:00Z,1\n2015-01-01T01:00Z,abc\n")
            .unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicates_and_disorder_rejected() {
        let dup = read("timestamp,spot_price_eur_mwh\n2015-01-01T01:00Z,1\n2015-01-01T01:00Z,2\n");
        assert!(matches!(dup, Err(Error::Ordering { line: 3, .. })));
        let back = read("timestamp,spot_price_eur_mwh\n2015-01-01T02:00Z,1\n2015-01-01T01:00Z,2\n");
        assert!(matches!(back, Err(Error::Ordering { .. })));
    }

    #[test]
    fn empty_and_missing_columns() {
        assert!(matches!(
            read("timestamp,spot_price_eur_mwh\n"),
            Err(Error::EmptyInput(_))
        ));
        assert!(matches!(
            read("time,price\n2015-01-01T00:00Z,1\n"),
            Err(Error::MissingColumn(_))
        ));
        let weather = read_hourly_series(
            "timestamp,wind_speed_ms,irradiance_wm2\n2015-01-01T00:00Z,4,0\n".as_bytes(),
            Path::new("w.csv"),
            &ColumnSchema::weather(),
        )
        .unwrap();
        assert!(weather.has_weather());
    }

    #[test]
    fn sub_hourly_rejected() {
        assert!(matches!(
            read("timestamp,spot_price_eur_mwh\n2015-01-01T00:30Z,1\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn weather_columns_and_negative_prices() {
        let s = read(
            "timestamp,spot_price_eur_mwh,wind_speed_ms,irradiance_wm2\n\
             2015-01-01T00:00:00+01:00,-10.5,3.9,0\n\
             2015-01-01T00:00:00Z,30,,\n",
        )
        .unwrap();
        assert_eq!(s.records()[0].timestamp.format("%H").to_string(), "23");
        assert_eq!(s.records()[0].spot_price, -10.5);
        assert_eq!(s.records()[0].wind_speed, Some(3.9));
        assert_eq!(s.records()[1].wind_speed, None);
        assert!(!s.has_weather());
    }

    #[test]
    fn four_calendar_years_have_no_gaps() {
        let start = Utc.with_ymd_and_hms(2015, 1, 1, 0, 0, 0).unwrap();
        let mut text = String::from("timestamp,spot_price_eur_mwh\n");
        for h in 0..35_064 {
            let t = start + chrono::Duration::hours(h);
            text.push_str(&format!("{},{}\n", t.format("%Y-%m-%dT%H:%MZ"), h % 97));
        }
        let s = read(&text).unwrap();
        assert_eq!(s.len(), 35_064);
        assert_eq!(s.coverage().gap_hours, 0);
        assert_eq!(
            s.coverage().last,
            Utc.with_ymd_and_hms(2018, 12, 31, 23, 0, 0).unwrap()
        );
    }

    proptest::proptest! {
        #[test]
        fn csv_roundtrip_is_lossless(prices in proptest::collection::vec(-500.0f64..3000.0, 1..50)) {
            let start = Utc.with_ymd_and_hms(2016, 2, 28, 20, 0, 0).unwrap();
            let recs = prices.iter().enumerate()
                .map(|(i, p)| HourlyRecord::new(start + chrono::Duration::hours(i as i64 * 2), *p))
                .collect();
            let s = HourlySeries::from_records(recs).unwrap();
            let mut buf = Vec::new();
            s.write_csv(&mut buf).unwrap();
            let back = read_hourly_series(buf.as_slice(), Path::new("rt"), &ColumnSchema::default()).unwrap();
            proptest::prop_assert_eq!(s.records(), back.records());
        }
    }
}
