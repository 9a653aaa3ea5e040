use std::io::{Read, Write};

use crate::calendar::YearMonth;
use crate::error::{Error, Result};

const HEADER: [&str; 4] = ["year", "month", "collisions", "registered_vehicles"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonthlyObservation {
    pub year: i32,
    pub month: u32,
    pub collisions: u64,
    pub registered_vehicles: u64,
}

impl MonthlyObservation {
    pub fn period(&self) -> YearMonth {
        YearMonth { year: self.year, month: self.month }
    }

    /// Collisions per registered vehicle.
    pub fn rate(&self) -> f64 {
        self.collisions as f64 / self.registered_vehicles as f64
    }
}

/// A gapless, strictly increasing run of monthly observations together with
/// the derived per-vehicle collision rates.
#[derive(Debug, Clone, PartialEq)]
pub struct RateSeries {
    observations: Vec<MonthlyObservation>,
    rates: Vec<f64>,
}

impl RateSeries {
    /// Sorts the observations chronologically and validates the grid.
    pub fn new(mut observations: Vec<MonthlyObservation>) -> Result<Self> {
        for obs in &observations {
            if !(1..=12).contains(&obs.month) {
                return Err(Error::Structure(format!("{}-{}: month outside 1..=12", obs.year, obs.month)));
            }
            if obs.registered_vehicles == 0 {
                return Err(Error::Domain(format!("{}: zero registered vehicles", obs.period())));
            }
        }
        observations.sort_by_key(|o| o.period());
        for pair in observations.windows(2) {
            let (a, b) = (pair[0].period(), pair[1].period());
            match a.months_until(b) {
                0 => return Err(Error::Structure(format!("duplicate month {a}"))),
                1 => {}
                _ => return Err(Error::Structure(format!("gap between {a} and {b}"))),
            }
        }
        let rates = observations.iter().map(MonthlyObservation::rate).collect();
        Ok(Self { observations, rates })
    }

    pub fn observations(&self) -> &[MonthlyObservation] {
        &self.observations
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    pub fn first_period(&self) -> Option<YearMonth> {
        self.observations.first().map(MonthlyObservation::period)
    }

    pub fn last_period(&self) -> Option<YearMonth> {
        self.observations.last().map(MonthlyObservation::period)
    }

    pub fn periods(&self) -> impl Iterator<Item = YearMonth> + '_ {
        self.observations.iter().map(MonthlyObservation::period)
    }

    /// Rate observed in `period`, if covered.
    pub fn rate_at(&self, period: YearMonth) -> Option<f64> {
        let first = self.first_period()?;
        let idx = first.months_until(period);
        (idx >= 0).then(|| self.rates.get(idx as usize).copied()).flatten()
    }

    /// The sub-series covering `months` months from `start`.
    pub fn window(&self, start: YearMonth, months: usize) -> Result<RateSeries> {
        if months == 0 {
            return Ok(RateSeries { observations: Vec::new(), rates: Vec::new() });
        }
        let first = self
            .first_period()
            .ok_or_else(|| Error::Structure("empty series".into()))?;
        let offset = first.months_until(start);
        let end = offset + months as i64;
        if offset < 0 || end > self.len() as i64 {
            return Err(Error::Structure(format!(
                "window {start} + {months} months not covered by data {first}..{}",
                self.last_period().unwrap()
            )));
        }
        let range = offset as usize..end as usize;
        Ok(RateSeries {
            observations: self.observations[range.clone()].to_vec(),
            rates: self.rates[range].to_vec(),
        })
    }

    /// Calendar years for which all twelve months are present, in order.
    pub fn complete_years(&self) -> Vec<i32> {
        let mut years: Vec<i32> = Vec::new();
        for obs in &self.observations {
            if obs.month == 12 && self.rate_at(YearMonth { year: obs.year, month: 1 }).is_some() {
                years.push(obs.year);
            }
        }
        years
    }

    /// Errors unless the series starts in January and ends in December.
    pub fn require_complete_years(&self, min_years: usize) -> Result<Vec<i32>> {
        let (Some(first), Some(last)) = (self.first_period(), self.last_period()) else {
            return Err(Error::Structure("empty series".into()));
        };
        if first.month != 1 || last.month != 12 {
            return Err(Error::Structure(format!(
                "series {first}..{last} does not consist of complete calendar years"
            )));
        }
        let years = self.complete_years();
        if years.len() < min_years {
            return Err(Error::Structure(format!(
                "need at least {min_years} complete calendar years, have {}",
                years.len()
            )));
        }
        Ok(years)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
        wtr.write_record(HEADER).map_err(io)?;
        for o in &self.observations {
            wtr.write_record([
                o.year.to_string(),
                o.month.to_string(),
                o.collisions.to_string(),
                o.registered_vehicles.to_string(),
            ])
            .map_err(io)?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Reads `year,month,collisions,registered_vehicles` CSV into a [`RateSeries`].
pub fn load_series<R: Read>(source: R) -> Result<RateSeries> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(source);
    let mut records = rdr.records();

    let header = match records.next() {
        None => return Err(Error::Parse { line: 1, message: "empty input".into() }),
        Some(rec) => rec.map_err(|e| csv_error(e, 1))?,
    };
    let found: Vec<&str> = header.iter().map(|h| h.trim_start_matches('\u{feff}')).collect();
    if found != HEADER {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header {:?}, found {:?}", HEADER.join(","), found.join(",")),
        });
    }

    let mut observations = Vec::new();
    for rec in records {
        let rec = rec.map_err(|e| csv_error(e, 0))?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != 4 {
            return Err(Error::Parse { line, message: format!("expected 4 fields, found {}", rec.len()) });
        }
        let field = |i: usize| -> Result<u64> {
            rec[i].parse::<u64>().map_err(|e| Error::Parse {
                line,
                message: format!("field {:?} = {:?}: {e}", HEADER[i], &rec[i]),
            })
        };
        let year = field(0)?;
        let month = field(1)?;
        if !(1..=12).contains(&month) {
            return Err(Error::Parse { line, message: format!("month {month} outside 1..=12") });
        }
        observations.push(MonthlyObservation {
            year: i32::try_from(year).map_err(|_| Error::Parse { line, message: "year out of range".into() })?,
            month: month as u32,
            collisions: field(2)?,
            registered_vehicles: field(3)?,
        });
    }
    RateSeries::new(observations)
}

fn csv_error(err: csv::Error, fallback_line: usize) -> Error {
    let line = err.position().map_or(fallback_line, |p| p.line() as usize);
    Error::Parse { line, message: err.to_string() }
}
