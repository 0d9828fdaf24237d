use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{Boundary, GroupPoint, ScalarField, UniformGrid3};

/// Numeric table with a one-line header. Values are written in the shortest
/// form that parses back to the same `f64`, so files round-trip exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.header.len() {
            return Err(Error::InvalidParameter(format!(
                "row has {} values for {} columns",
                row.len(),
                self.header.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }
}

pub fn write_csv(path: &Path, table: &Table) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Table> {
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Io(format!("bad number {s:?}: {e}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(Table { header, rows })
}

fn boundary_text(b: Boundary) -> String {
    match b {
        Boundary::FarField { low, high } => format!("farfield {low} {high}"),
        Boundary::Edge => "edge".into(),
        Boundary::Periodic => "periodic".into(),
    }
}

/// Structured-grid text file: `dims`, `origin`, `spacing` and one
/// `boundary` line per axis, then the values in row-major order, axis 3
/// fastest, one per line.
pub fn write_field(path: &Path, m: &ScalarField) -> Result<()> {
    let g = &m.grid;
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "dims {} {} {}", g.dims[0], g.dims[1], g.dims[2])?;
    writeln!(w, "origin {} {} {}", g.origin.x1, g.origin.x2, g.origin.x3)?;
    writeln!(w, "spacing {} {} {}", g.spacing[0], g.spacing[1], g.spacing[2])?;
    for b in m.boundary {
        writeln!(w, "boundary {}", boundary_text(b))?;
    }
    writeln!(w, "values")?;
    for v in &m.values {
        writeln!(w, "{v}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_field(path: &Path) -> Result<ScalarField> {
    let bad = |what: &str| Error::Io(format!("{}: malformed field file ({what})", path.display()));
    let mut lines = BufReader::new(File::open(path)?).lines();
    let mut next = |key: &str| -> Result<Vec<String>> {
        let line = lines.next().ok_or_else(|| bad(key))??;
        let mut parts = line.split_whitespace().map(String::from);
        if parts.next().as_deref() != Some(key) {
            return Err(bad(key));
        }
        Ok(parts.collect())
    };
    let nums =
        |v: Vec<String>| -> Result<Vec<f64>> { v.iter().map(|s| s.parse::<f64>().map_err(|_| bad(s))).collect() };
    let d = nums(next("dims")?)?;
    let o = nums(next("origin")?)?;
    let h = nums(next("spacing")?)?;
    if d.len() != 3 || o.len() != 3 || h.len() != 3 {
        return Err(bad("header"));
    }
    let mut boundary = [Boundary::Edge; 3];
    for b in boundary.iter_mut() {
        let parts = next("boundary")?;
        *b = match parts.first().map(String::as_str) {
            Some("edge") => Boundary::Edge,
            Some("periodic") => Boundary::Periodic,
            Some("farfield") if parts.len() == 3 => {
                let v = nums(parts[1..].to_vec())?;
                Boundary::FarField { low: v[0], high: v[1] }
            }
            _ => return Err(bad("boundary")),
        };
    }
    next("values")?;
    let dims = [d[0] as usize, d[1] as usize, d[2] as usize];
    let periodic = boundary.map(|b| matches!(b, Boundary::Periodic));
    let grid = UniformGrid3::with_periodic(GroupPoint::new(o[0], o[1], o[2]), [h[0], h[1], h[2]], dims, periodic)?;
    let mut values = Vec::with_capacity(grid.len());
    for line in lines {
        let line = line?;
        if !line.trim().is_empty() {
            values.push(line.trim().parse::<f64>().map_err(|_| bad("value"))?);
        }
    }
    ScalarField::new(grid, values, boundary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let mut t = Table::new(["t", "radius"]);
        for k in 0..50 {
            let x = k as f64 * 0.1;
            t.push(vec![
                x,
                (x.sin() * 1e-7 + 1.0 / 3.0) * 1e300f64.powf(k as f64 / 49.0 - 0.5),
            ])
            .unwrap();
        }
        t.push(vec![f64::MIN_POSITIVE, -0.0]).unwrap();
        write_csv(&path, &t).unwrap();
        let back = read_csv(&path).unwrap();
        assert_eq!(back, t);
        assert!(t.push(vec![1.0]).is_err());
    }

    #[test]
    fn field_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.txt");
        let g = UniformGrid3::with_periodic(
            GroupPoint::new(-1.0, -1.0, 0.0),
            [0.1, 0.2, 0.3],
            [4, 5, 6],
            [false, false, true],
        )
        .unwrap();
        let far = Boundary::FarField {
            low: -0.5,
            high: 0.6585,
        };
        let m = ScalarField::from_fn(g, [far, Boundary::Edge, Boundary::Periodic], |x| {
            (x.x1 * 7.0 + x.x2).sin() / 3.0 + x.x3
        })
        .unwrap();
        write_field(&path, &m).unwrap();
        assert_eq!(read_field(&path).unwrap(), m);
        std::fs::write(&path, "dims 1 2\n").unwrap();
        assert!(matches!(read_field(&path), Err(Error::Io(_))));
    }
}
