//! Tile-set generators: the non-cooperative comb square, a zig-zag binary
//! counter, a counter-driven square with logarithmic tile complexity, and
//! small demo systems for the verifier tests.

use thiserror::Error;

use crate::model::{Direction, Glue, ModelError, TileSet, TileType};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("parameter out of range: {0}")]
    BadParameter(String),
    #[error("unknown demo id {0:?}")]
    UnknownDemo(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Comb square: n backbone tiles hard-code the bottom row, n-1 row-indexed
/// tooth tiles are shared by every column. At τ=1 the system strictly
/// self-assembles the n×n square from exactly 2n-1 tile types.
pub fn gen_comb(n: u32) -> Result<TileSet, GenError> {
    if n < 1 {
        return Err(GenError::BadParameter("comb needs n >= 1".into()));
    }
    let mut tiles = Vec::new();
    for i in 0..n {
        let mut t = TileType::new(format!("bb_{i}"));
        if i > 0 {
            t = t.with_glue(Direction::West, format!("col_{}", i - 1), 1);
        }
        if i + 1 < n {
            t = t.with_glue(Direction::East, format!("col_{i}"), 1);
        }
        if n > 1 {
            t = t.with_glue(Direction::North, "row_1", 1);
        }
        tiles.push(t);
    }
    for r in 1..n {
        let mut t = TileType::new(format!("tooth_{r}"));
        t = t.with_glue(Direction::South, format!("row_{r}"), 1);
        if r + 1 < n {
            t = t.with_glue(Direction::North, format!("row_{}", r + 1), 1);
        }
        tiles.push(t);
    }
    Ok(TileSet::new(tiles)?)
}

/// Identifiers of the hand-built demo systems.
pub const DEMO_IDS: [&str; 3] = ["all_strength2", "strength1_pair", "error_prone"];

/// Small fixed systems exercising the fuzzy verifier:
///
/// * `all_strength2` — two tiles joined by one strength-2 glue; every
///   temperature-1 step is already a temperature-2 step.
/// * `strength1_pair` — the same pair held by a strength-1 glue; the dimer is
///   plausible at τ=1 but dissolves at τ=2.
/// * `error_prone` — a pocket that should be filled cooperatively can accept
///   a rogue tile at τ=1 which a cap tile then locks in, yielding a 2-stable
///   supertile that can never grow into a dependable terminal.
pub fn gen_demo(id: &str) -> Result<TileSet, GenError> {
    let tiles = match id {
        "all_strength2" => vec![
            TileType::new("a").with_glue(Direction::East, "ab", 2),
            TileType::new("b").with_glue(Direction::West, "ab", 2),
        ],
        "strength1_pair" => vec![
            TileType::new("a").with_glue(Direction::East, "ab", 1),
            TileType::new("b").with_glue(Direction::West, "ab", 1),
        ],
        "error_prone" => vec![
            // Rigid frame: two base tiles and a two-tile west wall.
            TileType::new("base_w")
                .with_glue(Direction::East, "base", 2)
                .with_glue(Direction::North, "wall_a", 2),
            TileType::new("base_e")
                .with_glue(Direction::West, "base", 2)
                .with_glue(Direction::North, "slot", 1),
            TileType::new("wall_1")
                .with_glue(Direction::South, "wall_a", 2)
                .with_glue(Direction::North, "wall_b", 2)
                .with_glue(Direction::East, "side", 1),
            TileType::new("wall_2")
                .with_glue(Direction::South, "wall_b", 2)
                .with_glue(Direction::East, "arm", 1),
            // Correct pocket filler: binds slot+side cooperatively.
            TileType::new("fill")
                .with_glue(Direction::South, "slot", 1)
                .with_glue(Direction::West, "side", 1)
                .with_glue(Direction::North, "lock", 1),
            // Rogue filler: shares the slot glue but mismatches the wall.
            TileType::new("rogue")
                .with_glue(Direction::South, "slot", 1)
                .with_glue(Direction::North, "lock", 1),
            // Cap: locks whatever sits in the pocket.
            TileType::new("cap")
                .with_glue(Direction::South, "lock", 1)
                .with_glue(Direction::West, "arm", 1),
        ],
        other => return Err(GenError::UnknownDemo(other.into())),
    };
    Ok(TileSet::new(tiles)?)
}

/// Orientation of a generated counter. `Mirrored` reflects east/west, which
/// moves the carry turns to the west wall and the row caps to the east wall.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Chirality {
    /// Least significant bit at the east; rows increment east→west.
    LsbEast,
    /// Least significant bit at the west; rows increment west→east.
    LsbWest,
}

/// Internal builder for the zig-zag counter tile set. Glue labels get a
/// caller-supplied prefix so two counters can coexist in one tile set.
struct CounterParams {
    bits: u32,
    seed_value: u64,
    chirality: Chirality,
    prefix: String,
    with_overflow_cap: bool,
}

/// One logical glue assignment: (direction, label, strength) in the
/// counter's own frame (before any rotation applied by the caller).
#[derive(Debug, Clone)]
struct ProtoTile {
    name: String,
    glues: Vec<(Direction, String, u32)>,
}

impl ProtoTile {
    fn new(name: String) -> ProtoTile {
        ProtoTile {
            name,
            glues: Vec::new(),
        }
    }

    fn glue(mut self, dir: Direction, label: String, strength: u32) -> ProtoTile {
        self.glues.push((dir, label, strength));
        self
    }
}

fn mirror_dir(d: Direction) -> Direction {
    match d {
        Direction::East => Direction::West,
        Direction::West => Direction::East,
        other => other,
    }
}

/// Rotate a direction a quarter turn clockwise (north face becomes east).
fn rotate_cw_dir(d: Direction) -> Direction {
    match d {
        Direction::North => Direction::East,
        Direction::East => Direction::South,
        Direction::South => Direction::West,
        Direction::West => Direction::North,
    }
}

/// Zig-zag binary counter. Width `bits + 2`: a column of carry turns on the
/// LSB side, `bits` bit columns, and a column of row caps on the other side.
/// Starting from a hard-coded seed row holding `seed_value`, increment rows
/// and copy rows alternate until the increment overflows; the overflow row
/// cannot receive its cap, which stops all growth. Height is
/// `2 * (2^bits - seed_value)` rows.
///
/// Tile inventory: `bits + 2` seed tiles, 2 copy tiles and 2 carry tiles per
/// bit column, two turn tiles, two cap tiles, and optionally the overflow
/// cap that squares off the final row.
fn build_counter(spec: &CounterParams) -> Vec<ProtoTile> {
    let w = spec.bits;
    let p = &spec.prefix;
    let mut tiles = Vec::new();

    // Column layout in LsbEast terms: col 0 = west cap wall, cols 1..=w = bits
    // (col 1 = MSB .. col w = LSB), col w+1 = east turn wall. The mirror swap
    // below handles LsbWest.
    let bit_label = |col: u32, b: u32| format!("{p}v{col}_{b}");
    let bit_of = |value: u64, col: u32| -> u32 {
        // col w is the least significant bit.
        ((value >> (w - col)) & 1) as u32
    };

    // Seed row: hard-coded bar publishing the seed value.
    for col in 0..w + 2 {
        let mut t = ProtoTile::new(format!("{p}seed_{col}"));
        if col > 0 {
            t = t.glue(Direction::West, format!("{p}s{}", col - 1), 2);
        }
        if col < w + 1 {
            t = t.glue(Direction::East, format!("{p}s{col}"), 2);
        }
        if col == 0 {
            t = t.glue(Direction::North, format!("{p}wl"), 1);
        } else if col == w + 1 {
            t = t.glue(Direction::North, format!("{p}tr"), 2);
        } else {
            t = t.glue(Direction::North, bit_label(col, bit_of(spec.seed_value, col)), 1);
        }
        tiles.push(t);
    }

    // Per-bit-column tiles. The two row kinds run on disjoint signal
    // alphabets so a tile can never ride the wrong chain: copy rows chain on
    // "cc" west-to-east, increment rows chain on "carry"/"ci" east-to-west
    // with dedicated filler tiles once the carry has been absorbed.
    for col in 1..=w {
        for b in 0..2u32 {
            tiles.push(
                ProtoTile::new(format!("{p}copy{col}_{b}"))
                    .glue(Direction::South, bit_label(col, b), 1)
                    .glue(Direction::North, bit_label(col, b), 1)
                    .glue(Direction::East, format!("{p}cc"), 1)
                    .glue(Direction::West, format!("{p}cc"), 1),
            );
            // The carry enters at the LSB, so no keep tile can ever stand in
            // the LSB column.
            if col < w {
                tiles.push(
                    ProtoTile::new(format!("{p}keep{col}_{b}"))
                        .glue(Direction::South, bit_label(col, b), 1)
                        .glue(Direction::North, bit_label(col, b), 1)
                        .glue(Direction::East, format!("{p}ci"), 1)
                        .glue(Direction::West, format!("{p}ci"), 1),
                );
            }
        }
        // Carry tiles: bit 0 absorbs the carry, bit 1 flips and passes it on.
        tiles.push(
            ProtoTile::new(format!("{p}inc{col}_0"))
                .glue(Direction::South, bit_label(col, 0), 1)
                .glue(Direction::North, bit_label(col, 1), 1)
                .glue(Direction::East, format!("{p}carry"), 1)
                .glue(Direction::West, format!("{p}ci"), 1),
        );
        tiles.push(
            ProtoTile::new(format!("{p}inc{col}_1"))
                .glue(Direction::South, bit_label(col, 1), 1)
                .glue(Direction::North, bit_label(col, 0), 1)
                .glue(Direction::East, format!("{p}carry"), 1)
                .glue(Direction::West, format!("{p}carry"), 1),
        );
    }

    // East wall: the turn tile rides a strength-2 glue on top of the previous
    // row's east cap and injects the carry westward.
    tiles.push(
        ProtoTile::new(format!("{p}turn"))
            .glue(Direction::South, format!("{p}tr"), 2)
            .glue(Direction::West, format!("{p}carry"), 1)
            .glue(Direction::North, format!("{p}ew"), 1),
    );
    tiles.push(
        ProtoTile::new(format!("{p}ecap"))
            .glue(Direction::South, format!("{p}ew"), 1)
            .glue(Direction::West, format!("{p}cc"), 1)
            .glue(Direction::North, format!("{p}tr"), 2),
    );

    // West wall: the cap closes an increment row whose carry died, then the
    // next copy row starts from the turn above it. An increment row that
    // still carries at the west exit gets no cap: that is the stop.
    tiles.push(
        ProtoTile::new(format!("{p}wcap"))
            .glue(Direction::South, format!("{p}wl"), 1)
            .glue(Direction::East, format!("{p}ci"), 1)
            .glue(Direction::North, format!("{p}tl"), 2),
    );
    tiles.push(
        ProtoTile::new(format!("{p}wturn"))
            .glue(Direction::South, format!("{p}tl"), 2)
            .glue(Direction::East, format!("{p}cc"), 1)
            .glue(Direction::North, format!("{p}wl"), 1),
    );

    if spec.with_overflow_cap {
        // Squares off the northwest corner of the overflow row, which emits
        // an unconsumed carry instead of cp.
        tiles.push(
            ProtoTile::new(format!("{p}ocap"))
                .glue(Direction::East, format!("{p}carry"), 1)
                .glue(Direction::South, format!("{p}wl"), 1),
        );
    }

    if spec.chirality == Chirality::LsbWest {
        for t in &mut tiles {
            for g in &mut t.glues {
                g.0 = mirror_dir(g.0);
            }
        }
    }
    tiles
}

/// Deterministic simulation of the counter's unique terminal in its own
/// (LsbEast, unrotated) frame: one `(x, y, tile name)` triple per cell.
/// Used to prune tile types a seeded run never places and as the golden
/// reference for the terminal's footprint.
fn counter_cells(spec: &CounterParams) -> Vec<(i32, i32, String)> {
    let w = spec.bits;
    let p = &spec.prefix;
    let m = (1u64 << w) - spec.seed_value;
    let bit_of = |value: u64, col: u32| -> u32 { ((value >> (w - col)) & 1) as u32 };
    let mut cells = Vec::new();
    for col in 0..w + 2 {
        cells.push((col as i32, 0, format!("{p}seed_{col}")));
    }
    for k in 1..=m {
        let v = spec.seed_value + k; // value the increment row computes
        let y_inc = (2 * k - 1) as i32;
        cells.push(((w + 1) as i32, y_inc, format!("{p}turn")));
        let mut carry = 1u32;
        for col in (1..=w).rev() {
            let below = bit_of(v - 1, col);
            let name = if carry == 1 {
                if below == 1 {
                    format!("{p}inc{col}_1")
                } else {
                    carry = 0;
                    format!("{p}inc{col}_0")
                }
            } else {
                format!("{p}keep{col}_{below}")
            };
            cells.push((col as i32, y_inc, name));
        }
        if k == m {
            // Overflow row: the carry leaves at the west; only the optional
            // overflow cap can square it off.
            debug_assert_eq!(carry, 1);
            if spec.with_overflow_cap {
                cells.push((0, y_inc, format!("{p}ocap")));
            }
            break;
        }
        debug_assert_eq!(carry, 0);
        cells.push((0, y_inc, format!("{p}wcap")));
        let y_copy = (2 * k) as i32;
        cells.push((0, y_copy, format!("{p}wturn")));
        for col in 1..=w {
            cells.push((col as i32, y_copy, format!("{p}copy{col}_{}", bit_of(v, col))));
        }
        cells.push(((w + 1) as i32, y_copy, format!("{p}ecap")));
    }
    cells
}

/// Drops tile types that the deterministic run never places.
fn prune_unused(tiles: Vec<ProtoTile>, spec: &CounterParams) -> Vec<ProtoTile> {
    let used: std::collections::HashSet<String> =
        counter_cells(spec).into_iter().map(|(_, _, n)| n).collect();
    tiles.into_iter().filter(|t| used.contains(&t.name)).collect()
}

fn finish(tiles: Vec<ProtoTile>) -> Result<TileSet, GenError> {
    let mut out = Vec::with_capacity(tiles.len());
    for t in tiles {
        let mut tt = TileType::new(t.name);
        for (d, label, s) in t.glues {
            tt.set_glue(d, Glue::new(label, s));
        }
        out.push(tt);
    }
    Ok(TileSet::new(out)?)
}

/// Zig-zag binary counter over `width` bit columns, counting 0 through
/// 2^width - 1 at τ=2. Directed; the unique terminal occupies a
/// (width+2) × 2^(width+1) box minus its northwest corner cell.
pub fn gen_counter(width: u32) -> Result<TileSet, GenError> {
    if width < 2 {
        return Err(GenError::BadParameter("counter needs width >= 2".into()));
    }
    if width > 16 {
        return Err(GenError::BadParameter("counter width above 16".into()));
    }
    let spec = CounterParams {
        bits: width,
        seed_value: 0,
        chirality: Chirality::LsbEast,
        prefix: String::new(),
        with_overflow_cap: false,
    };
    finish(prune_unused(build_counter(&spec), &spec))
}

/// Parameters of a generated fuzzy square, exposed for documentation and
/// tests: the floor counter builds the bottom slab (thickness
/// `floor_bits + 2`) whose length fixes the side n; the tower counter grows
/// from the slab's west end to the full height; a single cooperative filler
/// completes the rectangle between them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FuzzySquareLayout {
    pub n: u32,
    pub floor_bits: u32,
    pub floor_seed: u64,
    pub floor_thickness: u32,
    pub tower_bits: u32,
    pub tower_seed: u64,
    pub tower_width: u32,
}

/// Smallest supported square side.
pub const FUZZY_SQUARE_MIN_N: u32 = 8;

/// Tile-count bound `c * ceil(log2 n) + d` documented for the fuzzy square
/// generator; asserted by tests across the supported range. Each counter
/// contributes at most 7 tile types per bit column (copy, keep and carry
/// variants) plus fixed walls and caps, both bit widths are at most
/// ceil(log2 n), and seed-dependent pruning only lowers the count.
pub const FUZZY_SQUARE_C: u32 = 14;
pub const FUZZY_SQUARE_D: u32 = 15;

pub fn fuzzy_square_layout(n: u32) -> Result<FuzzySquareLayout, GenError> {
    if n < FUZZY_SQUARE_MIN_N {
        return Err(GenError::BadParameter(format!(
            "square needs n >= {FUZZY_SQUARE_MIN_N}"
        )));
    }
    if !n.is_multiple_of(2) {
        return Err(GenError::BadParameter(
            "square side must be even (counter rows come in pairs)".into(),
        ));
    }
    if n > 4096 {
        return Err(GenError::BadParameter("square side above 4096".into()));
    }
    // Floor: n = 2 * (2^floor_bits - floor_seed). floor_bits is rounded up
    // to the next even value so the tower height n - floor_thickness stays
    // even.
    let ceil_log2 = |m: u64| -> u32 {
        if m <= 1 {
            0
        } else {
            64 - (m - 1).leading_zeros()
        }
    };
    let m_f = (n / 2) as u64;
    let mut floor_bits = ceil_log2(m_f).max(2);
    if !floor_bits.is_multiple_of(2) {
        floor_bits += 1;
    }
    let floor_seed = (1u64 << floor_bits) - m_f;
    let floor_thickness = floor_bits + 2;
    let tower_height = n - floor_thickness;
    debug_assert!(tower_height.is_multiple_of(2));
    let m_t = (tower_height / 2) as u64;
    let tower_bits = ceil_log2(m_t).max(1);
    let tower_seed = (1u64 << tower_bits) - m_t;
    let tower_width = tower_bits + 2;
    if tower_width + 1 > n {
        return Err(GenError::BadParameter("square too small for its tower".into()));
    }
    Ok(FuzzySquareLayout {
        n,
        floor_bits,
        floor_seed,
        floor_thickness,
        tower_bits,
        tower_seed,
        tower_width,
    })
}

/// Square generator with Θ(log n) tile types. Structure:
///
/// * floor — a zig-zag counter rotated a quarter turn clockwise, so it grows
///   eastward along the bottom; its seeded range fixes the width at exactly n.
/// * tower — a mirrored zig-zag counter seated on the floor's west end by a
///   two-bond anchor (one unique corner glue, one shared bed glue); its
///   seeded range fixes its height at exactly n - thickness(floor).
/// * fill — one cooperative filler tile that reads a bed glue from below and
///   a wall glue from the west, sweeping the remaining rectangle at τ=2 and
///   stopping at the square's edges for lack of support.
///
/// Supported sides: even n >= FUZZY_SQUARE_MIN_N.
pub fn gen_fuzzy_square(n: u32) -> Result<TileSet, GenError> {
    let lay = fuzzy_square_layout(n)?;

    // Floor counter, built in counter frame then rotated clockwise: its rows
    // become floor columns, its west wall becomes the floor's top face.
    let floor_spec = CounterParams {
        bits: lay.floor_bits,
        seed_value: lay.floor_seed,
        chirality: Chirality::LsbEast,
        prefix: "f_".into(),
        with_overflow_cap: true,
    };
    let floor = prune_unused(build_counter(&floor_spec), &floor_spec);
    let mut tiles: Vec<ProtoTile> = floor
        .into_iter()
        .map(|mut t| {
            for g in &mut t.glues {
                g.0 = rotate_cw_dir(g.0);
            }
            t
        })
        .collect();

    // After rotation the floor's top face is carried by the cap-wall tiles.
    // Publish the filler bed on them, and the tower anchor on the seed cell
    // that lands at the top-west corner.
    let bed = |t: &mut ProtoTile, label: &str| {
        t.glues.push((Direction::North, label.into(), 1));
    };
    for t in &mut tiles {
        match t.name.as_str() {
            "f_wcap" | "f_wturn" | "f_ocap" => bed(t, "bed"),
            "f_seed_0" => bed(t, "anchor"),
            _ => {}
        }
    }

    // Tower counter, mirrored so its carry turns sit on the square's west
    // edge and its row caps face the fill.
    let tower_spec = CounterParams {
        bits: lay.tower_bits,
        seed_value: lay.tower_seed,
        chirality: Chirality::LsbWest,
        prefix: "t_".into(),
        with_overflow_cap: true,
    };
    let tower = prune_unused(build_counter(&tower_spec), &tower_spec);
    let east_wall = |name: &str| -> bool {
        // In LsbWest orientation the cap wall and the overflow cap sit at
        // the tower's east side.
        matches!(name, "t_wcap" | "t_wturn" | "t_ocap")
    };
    // Mirroring also flips seed positions: t_seed_0 lands at the tower's
    // east end, t_seed_{bits+1} at its west end over the floor anchor.
    let seed_east = "t_seed_0".to_string();
    let seed_west = format!("t_seed_{}", lay.tower_bits + 1);
    let seed_bed = format!("t_seed_{}", lay.tower_bits);
    for mut t in tower {
        if east_wall(&t.name) || t.name == seed_east {
            t.glues.push((Direction::East, "wall".into(), 1));
        }
        if t.name == seed_west {
            t.glues.push((Direction::South, "anchor".into(), 1));
        }
        if t.name == seed_bed {
            t.glues.push((Direction::South, "bed".into(), 1));
        }
        tiles.push(t);
    }

    // The filler: reads bed from below and wall from the west, republishes
    // both so the sweep continues, and stops wherever support runs out.
    tiles.push(
        ProtoTile::new("fill".into())
            .glue(Direction::South, "bed".into(), 1)
            .glue(Direction::West, "wall".into(), 1)
            .glue(Direction::North, "bed".into(), 1)
            .glue(Direction::East, "wall".into(), 1),
    );

    finish(tiles)
}
