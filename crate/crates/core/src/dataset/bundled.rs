use super::series::{load_series, RateSeries};

/// Monthly collisions and registered vehicles, Ireland 2009-2013.
pub const IRELAND_2009_2013_CSV: &str = include_str!("../../../../data/ireland_2009_2013.csv");
/// Monthly collisions and registered vehicles, Ireland 2014-2018.
pub const IRELAND_2014_2018_CSV: &str = include_str!("../../../../data/ireland_2014_2018.csv");

pub fn ireland_2009_2013() -> RateSeries {
    load_series(IRELAND_2009_2013_CSV.as_bytes()).expect("bundled 2009-2013 data is valid")
}

pub fn ireland_2014_2018() -> RateSeries {
    load_series(IRELAND_2014_2018_CSV.as_bytes()).expect("bundled 2014-2018 data is valid")
}
