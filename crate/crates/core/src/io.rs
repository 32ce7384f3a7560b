//! CSV exchange for point sets, signals and measurements.
//!
//! The first record is a header `d=<dim>,complex=<true|false>`. Each following
//! record is one vector: `d` real columns, or `2d` columns of interleaved real
//! and imaginary parts. Numbers use `.` as decimal point and the shortest
//! representation that parses back to the same `f64`.

use std::io::{Read, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jl::PointSet;

fn header_value<'a>(field: Option<&'a str>, key: &str) -> Result<&'a str> {
    field
        .and_then(|f| f.trim().strip_prefix(key))
        .and_then(|rest| rest.strip_prefix('='))
        .ok_or_else(|| Error::Parse(format!("header must contain '{key}=...'")))
}

pub fn read_point_set<R: Read>(reader: R) -> Result<PointSet> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(reader);
    let mut records = rdr.records();
    let header = records.next().ok_or_else(|| Error::Parse("empty CSV".into()))??;
    let dim: usize = header_value(header.get(0), "d")?
        .parse()
        .map_err(|e| Error::Parse(format!("bad dimension in header: {e}")))?;
    let complex: bool = header_value(header.get(1), "complex")?
        .parse()
        .map_err(|e| Error::Parse(format!("bad complex flag in header: {e}")))?;
    let width = if complex { 2 * dim } else { dim };
    let mut points = Vec::new();
    for (line, record) in records.enumerate() {
        let record = record?;
        if record.len() != width {
            return Err(Error::Parse(format!("row {} has {} fields, expected {width}", line + 1, record.len())));
        }
        let values = record
            .iter()
            .map(|f| f.trim().parse::<f64>().map_err(|e| Error::Parse(format!("row {}: {e}", line + 1))))
            .collect::<Result<Vec<f64>>>()?;
        let point = if complex {
            values.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect()
        } else {
            values.into_iter().map(|v| Complex64::new(v, 0.0)).collect()
        };
        points.push(point);
    }
    PointSet::new(dim, complex, points)
}

pub fn write_point_set<W: Write>(writer: W, pts: &PointSet) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().flexible(true).from_writer(writer);
    wtr.write_record([format!("d={}", pts.dim()), format!("complex={}", pts.is_complex())])?;
    for p in pts.points() {
        let fields: Vec<String> = if pts.is_complex() {
            p.iter().flat_map(|z| [format!("{:?}", z.re), format!("{:?}", z.im)]).collect()
        } else {
            if let Some(i) = p.iter().position(|z| z.im != 0.0) {
                return Err(Error::InvalidParameter(format!("real point set has an imaginary part at column {i}")));
            }
            p.iter().map(|z| format!("{:?}", z.re)).collect()
        };
        wtr.write_record(&fields)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_point_set_file(path: &std::path::Path) -> Result<PointSet> {
    read_point_set(std::fs::File::open(path)?)
}

pub fn write_point_set_file(path: &std::path::Path, pts: &PointSet) -> Result<()> {
    write_point_set(std::fs::File::create(path)?, pts)
}
