//! Field files.
//!
//! Text form: a header line `n N L`, then `N^n` whitespace-separated decimals
//! in row-major order. Binary form: raw little-endian `f64` values, with the
//! same `n N L` header in a sidecar file `<path>.hdr`.

use std::fs;
use std::path::{Path, PathBuf};

use super::{Field, Grid};
use crate::{Error, Result};

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".hdr");
    PathBuf::from(s)
}

fn parse_header(line: &str, line_no: usize) -> Result<Grid> {
    let parts: Vec<&str> = line.split_whitespace().collect();
    if parts.len() != 3 {
        return Err(Error::Parse {
            line: line_no,
            message: format!("expected header `n N L`, got `{line}`"),
        });
    }
    let bad = |what: &str| Error::Parse {
        line: line_no,
        message: format!("bad {what} in header `{line}`"),
    };
    let dim = parts[0].parse().map_err(|_| bad("dimension"))?;
    let points = parts[1].parse().map_err(|_| bad("point count"))?;
    let length = parts[2].parse().map_err(|_| bad("box length"))?;
    Grid::new(dim, points, length)
}

fn header(grid: &Grid) -> String {
    format!("{} {} {}", grid.dim(), grid.points(), grid.length())
}

pub fn parse_text(text: &str) -> Result<Field> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, head) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "empty field file".into(),
    })?;
    let grid = parse_header(head, 1)?;
    let mut values = Vec::with_capacity(grid.len());
    for (i, line) in lines {
        for tok in line.split_whitespace() {
            let v: f64 = tok.parse().map_err(|_| Error::Parse {
                line: i + 1,
                message: format!("bad value `{tok}`"),
            })?;
            values.push(v);
        }
    }
    Field::new(grid, values)
}

pub fn to_text(field: &Field) -> String {
    let mut out = header(field.grid());
    out.push('\n');
    let per_line = field.grid().points();
    for chunk in field.values().chunks(per_line) {
        let line: Vec<String> = chunk.iter().map(|v| format!("{v:e}")).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn write_text(field: &Field, path: &Path) -> Result<()> {
    fs::write(path, to_text(field)).map_err(|e| Error::io(path, e))
}

pub fn write_binary(field: &Field, path: &Path) -> Result<()> {
    let bytes: Vec<u8> = field
        .values()
        .iter()
        .flat_map(|v| v.to_le_bytes())
        .collect();
    fs::write(path, bytes).map_err(|e| Error::io(path, e))?;
    let hdr = sidecar_path(path);
    fs::write(&hdr, header(field.grid()) + "\n").map_err(|e| Error::io(hdr, e))
}

pub fn read_binary(path: &Path) -> Result<Field> {
    let hdr = sidecar_path(path);
    let head = fs::read_to_string(&hdr).map_err(|e| Error::io(&hdr, e))?;
    let grid = parse_header(head.trim(), 1)?;
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    if bytes.len() % 8 != 0 {
        return Err(Error::Parse {
            line: 0,
            message: format!("binary field length {} is not a multiple of 8", bytes.len()),
        });
    }
    let values = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect();
    Field::new(grid, values)
}

/// Reads either form: binary when a `.hdr` sidecar exists, text otherwise.
pub fn read(path: &Path) -> Result<Field> {
    if sidecar_path(path).exists() {
        read_binary(path)
    } else {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        parse_text(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip_is_exact() {
        let g = Grid::new(2, 8, 3.5).unwrap();
        let u = Field::from_fn(g, |x| (x[0] * 1.3).sin() * x[1].exp() / 7.0).unwrap();
        let back = parse_text(&to_text(&u)).unwrap();
        assert_eq!(back, u);
    }

    #[test]
    fn binary_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("u.bin");
        let g = Grid::new(1, 16, 2.0).unwrap();
        let u = Field::from_fn(g, |x| x[0].cos()).unwrap();
        write_binary(&u, &path).unwrap();
        assert_eq!(read(&path).unwrap(), u);
    }

    #[test]
    fn rejects_short_files() {
        assert!(parse_text("1 8 1.0\n1 2 3").is_err());
        assert!(parse_text("").is_err());
        assert!(parse_text("1 8\n").is_err());
    }
}
