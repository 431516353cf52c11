//! Line-oriented text formats: `.tds` tile sets and `.asm` assemblies.
//! `#` starts a comment anywhere; labels and names are `[A-Za-z0-9_]+`.
//! Strengths are restricted to a single digit 0..9 in the format (the model
//! itself allows any nonnegative integer).

use std::fmt;

use thiserror::Error;

use crate::model::{Assembly, Direction, Glue, Point, Temperature, TileIx, TileSet, TileType};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub excerpt: String,
}

impl ParseError {
    fn new(line: usize, column: usize, message: impl Into<String>, excerpt: &str) -> ParseError {
        ParseError {
            line,
            column,
            message: message.into(),
            excerpt: excerpt.to_string(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SerializeError {
    #[error("tile {tile}: {side} strength {strength} not representable (format allows 0..9)")]
    StrengthOutOfRange {
        tile: String,
        side: &'static str,
        strength: u32,
    },
    #[error("tile {tile}: {side} glue has a positive strength but an empty label")]
    UnnamedGlue { tile: String, side: &'static str },
}

/// One token with its 1-based column.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let body = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut out = Vec::new();
    let mut col = 1;
    for part in body.split_inclusive(char::is_whitespace) {
        let trimmed = part.trim_end_matches(char::is_whitespace);
        if !trimmed.is_empty() {
            out.push((col, trimmed));
        }
        col += part.chars().count();
    }
    out
}

fn valid_token(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

fn side_by_name(s: &str) -> Option<Direction> {
    match s {
        "north" => Some(Direction::North),
        "east" => Some(Direction::East),
        "south" => Some(Direction::South),
        "west" => Some(Direction::West),
        _ => None,
    }
}

/// Parses a `.tds` document into a tile set and its default temperature
/// (2 when no `temperature` line is present).
pub fn parse_tileset(text: &str) -> Result<(TileSet, Temperature), ParseError> {
    let mut temperature: Option<u32> = None;
    let mut tiles: Vec<TileType> = Vec::new();
    let mut seen_sides: Vec<[bool; 4]> = Vec::new();
    let mut last_line = 0;

    for (ln0, raw) in text.lines().enumerate() {
        let ln = ln0 + 1;
        last_line = ln;
        let toks = tokens(raw);
        let Some(&(kcol, keyword)) = toks.first() else {
            continue;
        };
        match keyword {
            "temperature" => {
                if temperature.is_some() {
                    return Err(ParseError::new(ln, kcol, "duplicate temperature line", raw));
                }
                let Some(&(vcol, val)) = toks.get(1) else {
                    return Err(ParseError::new(ln, kcol, "temperature needs a value", raw));
                };
                if let Some(&(c, _)) = toks.get(2) {
                    return Err(ParseError::new(ln, c, "trailing tokens after temperature", raw));
                }
                let t: u32 = val.parse().map_err(|_| {
                    ParseError::new(ln, vcol, format!("bad temperature {val:?}"), raw)
                })?;
                if t == 0 {
                    return Err(ParseError::new(ln, vcol, "temperature must be >= 1", raw));
                }
                temperature = Some(t);
            }
            "tile" => {
                let Some(&(vcol, name)) = toks.get(1) else {
                    return Err(ParseError::new(ln, kcol, "missing tile name", raw));
                };
                if !valid_token(name) {
                    return Err(ParseError::new(
                        ln,
                        vcol,
                        format!("invalid tile name {name:?}"),
                        raw,
                    ));
                }
                if let Some(&(c, _)) = toks.get(2) {
                    return Err(ParseError::new(ln, c, "trailing tokens after tile name", raw));
                }
                if tiles.iter().any(|t| t.name == name) {
                    return Err(ParseError::new(
                        ln,
                        vcol,
                        format!("duplicate tile name {name}"),
                        raw,
                    ));
                }
                tiles.push(TileType::new(name));
                seen_sides.push([false; 4]);
            }
            side if side_by_name(side).is_some() => {
                let dir = side_by_name(side).unwrap();
                let Some(tile) = tiles.last_mut() else {
                    return Err(ParseError::new(
                        ln,
                        kcol,
                        format!("{side} line outside a tile block"),
                        raw,
                    ));
                };
                let sides = seen_sides.last_mut().unwrap();
                if sides[dir.index()] {
                    return Err(ParseError::new(
                        ln,
                        kcol,
                        format!("duplicate {side} side for tile {}", tile.name),
                        raw,
                    ));
                }
                let Some(&(lcol, label)) = toks.get(1) else {
                    return Err(ParseError::new(ln, kcol, format!("{side} needs a label"), raw));
                };
                if !valid_token(label) {
                    return Err(ParseError::new(
                        ln,
                        lcol,
                        format!("invalid glue label {label:?}"),
                        raw,
                    ));
                }
                let Some(&(scol, sval)) = toks.get(2) else {
                    return Err(ParseError::new(ln, kcol, format!("{side} needs a strength"), raw));
                };
                if let Some(&(c, _)) = toks.get(3) {
                    return Err(ParseError::new(ln, c, "trailing tokens after glue", raw));
                }
                let strength: i64 = sval.parse().map_err(|_| {
                    ParseError::new(ln, scol, format!("bad strength {sval:?}"), raw)
                })?;
                if !(0..=9).contains(&strength) {
                    return Err(ParseError::new(ln, scol, "strength out of range", raw));
                }
                sides[dir.index()] = true;
                tile.set_glue(dir, Glue::new(label, strength as u32));
            }
            other => {
                return Err(ParseError::new(
                    ln,
                    kcol,
                    format!("unknown keyword {other:?}"),
                    raw,
                ));
            }
        }
    }

    if tiles.is_empty() {
        return Err(ParseError::new(last_line + 1, 1, "empty tile set", ""));
    }
    let set = TileSet::new(tiles)
        .map_err(|e| ParseError::new(last_line + 1, 1, format!("invalid tile set: {e}"), ""))?;
    let tau = Temperature::new(temperature.unwrap_or(2)).expect("validated above");
    Ok((set, tau))
}

/// Canonical `.tds` text: tiles in declaration order, sides in N,E,S,W
/// order, null sides omitted, `temperature` emitted when not 2.
pub fn serialize_tileset(tiles: &TileSet, tau: Temperature) -> Result<String, SerializeError> {
    let mut out = String::new();
    if tau.get() != 2 {
        out.push_str(&format!("temperature {}\n", tau.get()));
    }
    for t in tiles.tiles() {
        out.push_str(&format!("tile {}\n", t.name));
        for dir in Direction::ALL {
            let g = t.glue(dir);
            if g.is_null() {
                continue;
            }
            if g.strength > 9 {
                return Err(SerializeError::StrengthOutOfRange {
                    tile: t.name.clone(),
                    side: dir.name(),
                    strength: g.strength,
                });
            }
            if g.label.is_empty() {
                return Err(SerializeError::UnnamedGlue {
                    tile: t.name.clone(),
                    side: dir.name(),
                });
            }
            out.push_str(&format!("  {} {} {}\n", dir.name(), g.label, g.strength));
        }
    }
    Ok(out)
}

/// Parses an `.asm` document (`x y tilename` per line) against a tile set.
pub fn parse_assembly(text: &str, tiles: &TileSet) -> Result<Assembly, ParseError> {
    let mut cells: Vec<(Point, TileIx)> = Vec::new();
    let mut last_line = 0;
    for (ln0, raw) in text.lines().enumerate() {
        let ln = ln0 + 1;
        last_line = ln;
        let toks = tokens(raw);
        if toks.is_empty() {
            continue;
        }
        if toks.len() != 3 {
            let col = toks.first().map(|&(c, _)| c).unwrap_or(1);
            return Err(ParseError::new(
                ln,
                col,
                "expected `<x> <y> <tilename>`",
                raw,
            ));
        }
        let (xcol, xs) = toks[0];
        let (ycol, ys) = toks[1];
        let (ncol, name) = toks[2];
        let x: i32 = xs
            .parse()
            .map_err(|_| ParseError::new(ln, xcol, format!("bad integer {xs:?}"), raw))?;
        let y: i32 = ys
            .parse()
            .map_err(|_| ParseError::new(ln, ycol, format!("bad integer {ys:?}"), raw))?;
        let Some(ix) = tiles.index_of(name) else {
            return Err(ParseError::new(
                ln,
                ncol,
                format!("unknown tile name {name}"),
                raw,
            ));
        };
        let p = Point::new(x, y);
        if cells.iter().any(|&(q, _)| q == p) {
            return Err(ParseError::new(
                ln,
                xcol,
                format!("duplicate coordinate ({x},{y})"),
                raw,
            ));
        }
        cells.push((p, ix));
    }
    if cells.is_empty() {
        return Err(ParseError::new(last_line + 1, 1, "empty assembly", ""));
    }
    Ok(Assembly::new(cells).expect("duplicates rejected above"))
}

/// One `x y name` line per tile, sorted by (y, x). Round-trips through
/// `parse_assembly`.
pub fn serialize_assembly(a: &Assembly, tiles: &TileSet) -> String {
    let mut out = String::new();
    for &(p, t) in a.cells() {
        out.push_str(&format!("{} {} {}\n", p.x, p.y, tiles.tile(t).name));
    }
    out
}

/// Convenience for error reporting at the CLI boundary.
pub fn format_parse_error(path: &dyn fmt::Display, e: &ParseError) -> String {
    if e.excerpt.is_empty() {
        format!("{path}:{}:{}: {}", e.line, e.column, e.message)
    } else {
        format!(
            "{path}:{}:{}: {}\n  | {}",
            e.line, e.column, e.message, e.excerpt
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Temperature;

    fn tau(t: u32) -> Temperature {
        Temperature::new(t).unwrap()
    }

    #[test]
    fn two_tile_happy_path() {
        let text = "\
# a pair
tile a
  east g 2
tile b
  west g 2
";
        let (set, t) = parse_tileset(text).unwrap();
        assert_eq!(set.len(), 2);
        assert_eq!(t.get(), 2);
        assert_eq!(set.tile(0).glue(Direction::East), &Glue::new("g", 2));
    }

    #[test]
    fn duplicate_tile_name_is_positioned() {
        let text = "tile a\ntile a\n";
        let e = parse_tileset(text).unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.message.contains("duplicate tile name a"));
    }

    #[test]
    fn strength_out_of_range() {
        let text = "tile a\n  north g 10\n";
        let e = parse_tileset(text).unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.message.contains("strength out of range"));
    }

    #[test]
    fn unknown_keyword_and_missing_name() {
        assert!(parse_tileset("brick a\n")
            .unwrap_err()
            .message
            .contains("unknown keyword"));
        assert!(parse_tileset("tile\n")
            .unwrap_err()
            .message
            .contains("missing tile name"));
    }

    #[test]
    fn empty_tileset_rejected() {
        assert!(parse_tileset("# nothing\n").unwrap_err().message.contains("empty tile set"));
    }

    #[test]
    fn temperature_line_round_trip() {
        let (set, t) = parse_tileset("temperature 1\ntile a\n").unwrap();
        assert_eq!(t.get(), 1);
        let text = serialize_tileset(&set, t).unwrap();
        assert!(text.starts_with("temperature 1\n"));
        let (set2, t2) = parse_tileset(&text).unwrap();
        assert_eq!(t2, t);
        assert_eq!(set2.tiles(), set.tiles());
    }

    #[test]
    fn all_null_tile_serializes_as_name_only() {
        let set = TileSet::new(vec![TileType::new("lonely")]).unwrap();
        let text = serialize_tileset(&set, tau(2)).unwrap();
        assert_eq!(text, "tile lonely\n");
    }

    #[test]
    fn tileset_round_trip_generated() {
        for set in [
            crate::constructions::gen_comb(4).unwrap(),
            crate::constructions::gen_counter(2).unwrap(),
            crate::constructions::gen_demo("error_prone").unwrap(),
        ] {
            let text = serialize_tileset(&set, tau(2)).unwrap();
            let (back, _) = parse_tileset(&text).unwrap();
            assert_eq!(back.tiles(), set.tiles());
        }
    }

    #[test]
    fn assembly_round_trip_with_negatives() {
        let set = crate::constructions::gen_demo("all_strength2").unwrap();
        let a = Assembly::new(vec![
            (Point::new(-3, -7), 0),
            (Point::new(-2, -7), 1),
        ])
        .unwrap();
        let text = serialize_assembly(&a, &set);
        let back = parse_assembly(&text, &set).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn assembly_parse_errors() {
        let set = crate::constructions::gen_demo("all_strength2").unwrap();
        let dup = "0 0 a\n0 0 b\n";
        let e = parse_assembly(dup, &set).unwrap_err();
        assert!(e.message.contains("duplicate coordinate (0,0)"));
        let unknown = "0 0 zz\n";
        assert!(parse_assembly(unknown, &set)
            .unwrap_err()
            .message
            .contains("unknown tile name"));
        let empty = "# nothing here\n";
        assert!(parse_assembly(empty, &set)
            .unwrap_err()
            .message
            .contains("empty assembly"));
        let malformed = "0 x a\n";
        assert!(parse_assembly(malformed, &set)
            .unwrap_err()
            .message
            .contains("bad integer"));
    }

    #[test]
    fn serialize_order_is_row_major() {
        let set = crate::constructions::gen_demo("all_strength2").unwrap();
        let a = Assembly::new(vec![
            (Point::new(1, 0), 1),
            (Point::new(0, 0), 0),
        ])
        .unwrap();
        assert_eq!(serialize_assembly(&a, &set), "0 0 a\n1 0 b\n");
    }
}
