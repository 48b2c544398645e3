//! CSV import/export of true-wind traces: columns `t, V, direction_deg`.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{TrueWind, TrueWindSample};
use crate::angle::{deg, rad, wrap_angle};
use crate::error::{Error, Result};

pub const WIND_CSV_HEADER: [&str; 3] = ["t", "V", "direction_deg"];

#[derive(Serialize, Deserialize)]
struct Row {
    t: f64,
    #[serde(rename = "V")]
    v: f64,
    direction_deg: f64,
}

pub fn write_wind_csv<W: Write>(writer: W, trace: &[TrueWindSample]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for s in trace {
        w.serialize(Row { t: s.t, v: s.wind.speed, direction_deg: deg(s.wind.direction) })
            .map_err(|e| Error::csv("<writer>", e))?;
    }
    w.flush().map_err(|e| Error::io("<writer>", e))?;
    Ok(())
}

/// Reads a trace, checking the header and that time increases strictly.
pub fn read_wind_csv<R: Read>(reader: R) -> Result<Vec<TrueWindSample>> {
    read_named(reader, "<reader>")
}

fn read_named<R: Read>(reader: R, name: &str) -> Result<Vec<TrueWindSample>> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header = r.headers().map_err(|e| Error::csv(name, e))?.clone();
    if header.iter().ne(WIND_CSV_HEADER.iter().copied()) {
        return Err(Error::config(
            name,
            format!("expected header {:?}, found {:?}", WIND_CSV_HEADER, header.iter().collect::<Vec<_>>()),
        ));
    }
    let mut out: Vec<TrueWindSample> = Vec::new();
    for row in r.deserialize::<Row>() {
        let row = row.map_err(|e| Error::csv(name, e))?;
        if !(row.v >= 0.0) || !row.t.is_finite() || !row.direction_deg.is_finite() {
            return Err(Error::config(name, format!("invalid row at t = {}", row.t)));
        }
        if out.last().is_some_and(|prev| row.t <= prev.t) {
            return Err(Error::config(name, format!("time must increase strictly, found t = {}", row.t)));
        }
        out.push(TrueWindSample { t: row.t, wind: TrueWind { speed: row.v, direction: wrap_angle(rad(row.direction_deg)) } });
    }
    if out.is_empty() {
        return Err(Error::Empty("wind trace"));
    }
    Ok(out)
}

pub fn write_wind_trace(path: impl AsRef<Path>, trace: &[TrueWindSample]) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    write_wind_csv(std::io::BufWriter::new(file), trace)
}

pub fn read_wind_trace(path: impl AsRef<Path>) -> Result<Vec<TrueWindSample>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    read_named(std::io::BufReader::new(file), &path.display().to_string())
}
