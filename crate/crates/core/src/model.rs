//! Value types of the two-handed tile assembly model: glues, tile types,
//! assemblies on the integer lattice, and translation-equivalence classes
//! (supertiles) represented by a min-corner canonical form.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

/// Index of a tile type inside its [`TileSet`].
pub type TileIx = u16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("empty assembly")]
    EmptyAssembly,
    #[error("overlap at ({0}, {1})")]
    Overlap(i32, i32),
    #[error("coordinate overflow while translating")]
    CoordinateOverflow,
    #[error("tile index {0} out of range for tile set of {1}")]
    BadTileIndex(usize, usize),
    #[error("invalid tile set: {0}")]
    BadTileSet(String),
}

/// The four absolute side directions of a tile. Tiles are never rotated or
/// reflected, so glue lookup is always by absolute direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    North,
    East,
    South,
    West,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::North,
        Direction::East,
        Direction::South,
        Direction::West,
    ];

    pub fn offset(self) -> (i32, i32) {
        match self {
            Direction::North => (0, 1),
            Direction::East => (1, 0),
            Direction::South => (0, -1),
            Direction::West => (-1, 0),
        }
    }

    pub fn opposite(self) -> Direction {
        match self {
            Direction::North => Direction::South,
            Direction::East => Direction::West,
            Direction::South => Direction::North,
            Direction::West => Direction::East,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Direction::North => 0,
            Direction::East => 1,
            Direction::South => 2,
            Direction::West => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Direction::North => "north",
            Direction::East => "east",
            Direction::South => "south",
            Direction::West => "west",
        }
    }
}

/// A glue: label plus nonnegative integer strength. A strength-0 glue never
/// binds regardless of label; the empty label with strength 0 is the null glue.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Glue {
    pub label: String,
    pub strength: u32,
}

impl Glue {
    pub fn new(label: impl Into<String>, strength: u32) -> Glue {
        Glue {
            label: label.into(),
            strength,
        }
    }

    pub fn null() -> Glue {
        Glue {
            label: String::new(),
            strength: 0,
        }
    }

    pub fn is_null(&self) -> bool {
        self.label.is_empty() && self.strength == 0
    }
}

/// A unit square tile type with one glue per absolute side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileType {
    pub name: String,
    glues: [Glue; 4],
}

impl TileType {
    pub fn new(name: impl Into<String>) -> TileType {
        TileType {
            name: name.into(),
            glues: [Glue::null(), Glue::null(), Glue::null(), Glue::null()],
        }
    }

    pub fn with_glue(mut self, dir: Direction, label: impl Into<String>, strength: u32) -> TileType {
        self.glues[dir.index()] = Glue::new(label, strength);
        self
    }

    pub fn glue(&self, dir: Direction) -> &Glue {
        &self.glues[dir.index()]
    }

    pub fn set_glue(&mut self, dir: Direction, glue: Glue) {
        self.glues[dir.index()] = glue;
    }
}

fn valid_token(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

/// Side key used for bond matching: interned label id plus strength.
/// Two abutting sides bind iff both have positive strength and equal keys.
pub(crate) type BondKey = (u32, u32);

/// A finite, ordered set of named tile types. Bond lookups are precomputed at
/// construction: `bond_key(t, d)` is `Some` only for positive-strength sides.
#[derive(Debug, Clone)]
pub struct TileSet {
    tiles: Vec<TileType>,
    by_name: HashMap<String, TileIx>,
    bond_keys: Vec<[Option<BondKey>; 4]>,
}

impl TileSet {
    pub fn new(tiles: Vec<TileType>) -> Result<TileSet, ModelError> {
        if tiles.is_empty() {
            return Err(ModelError::BadTileSet("tile set must be nonempty".into()));
        }
        if tiles.len() > TileIx::MAX as usize {
            return Err(ModelError::BadTileSet("too many tile types".into()));
        }
        let mut by_name = HashMap::new();
        for (i, t) in tiles.iter().enumerate() {
            if !valid_token(&t.name) {
                return Err(ModelError::BadTileSet(format!(
                    "tile name {:?} is not a valid token",
                    t.name
                )));
            }
            for d in Direction::ALL {
                let g = t.glue(d);
                if !g.label.is_empty() && !valid_token(&g.label) {
                    return Err(ModelError::BadTileSet(format!(
                        "glue label {:?} on tile {} is not a valid token",
                        g.label, t.name
                    )));
                }
            }
            if by_name.insert(t.name.clone(), i as TileIx).is_some() {
                return Err(ModelError::BadTileSet(format!(
                    "duplicate tile name {}",
                    t.name
                )));
            }
        }
        let mut labels: HashMap<&str, u32> = HashMap::new();
        let mut bond_keys = Vec::with_capacity(tiles.len());
        for t in &tiles {
            let mut keys = [None; 4];
            for d in Direction::ALL {
                let g = t.glue(d);
                if g.strength > 0 {
                    let next = labels.len() as u32;
                    let id = *labels.entry(g.label.as_str()).or_insert(next);
                    keys[d.index()] = Some((id, g.strength));
                }
            }
            bond_keys.push(keys);
        }
        Ok(TileSet {
            tiles,
            by_name,
            bond_keys,
        })
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn tiles(&self) -> &[TileType] {
        &self.tiles
    }

    pub fn tile(&self, ix: TileIx) -> &TileType {
        &self.tiles[ix as usize]
    }

    pub fn index_of(&self, name: &str) -> Option<TileIx> {
        self.by_name.get(name).copied()
    }

    #[inline]
    pub(crate) fn bond_key(&self, tile: TileIx, dir: Direction) -> Option<BondKey> {
        self.bond_keys[tile as usize][dir.index()]
    }

    /// Strength with which two abutting sides bind: positive only when the
    /// (label, strength) pairs are equal and the strength is positive.
    #[inline]
    pub fn bond_strength(&self, a: TileIx, dir: Direction, b: TileIx) -> u32 {
        match (self.bond_key(a, dir), self.bond_key(b, dir.opposite())) {
            (Some(ka), Some(kb)) if ka == kb => ka.1,
            _ => 0,
        }
    }
}

/// A lattice point. Ordering is row-major (y first, then x), which makes the
/// sorted cell list of an assembly double as its canonical serialization order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: i32,
    pub y: i32,
}

impl Point {
    pub fn new(x: i32, y: i32) -> Point {
        Point { x, y }
    }

    pub fn step(self, dir: Direction) -> Option<Point> {
        let (dx, dy) = dir.offset();
        Some(Point {
            x: self.x.checked_add(dx)?,
            y: self.y.checked_add(dy)?,
        })
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Point) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Point {
    fn cmp(&self, other: &Point) -> std::cmp::Ordering {
        (self.y, self.x).cmp(&(other.y, other.x))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// An integer translation vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Offset {
    pub dx: i32,
    pub dy: i32,
}

impl Offset {
    pub fn new(dx: i32, dy: i32) -> Offset {
        Offset { dx, dy }
    }
}

impl fmt::Display for Offset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.dx, self.dy)
    }
}

/// A finite, nonempty placement of tiles on the lattice: a partial map from
/// points to tile-type indices, stored as a cell list sorted row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assembly {
    cells: Vec<(Point, TileIx)>,
}

impl Assembly {
    /// Builds an assembly from arbitrary placements. Rejects empties and
    /// duplicate coordinates.
    pub fn new(mut cells: Vec<(Point, TileIx)>) -> Result<Assembly, ModelError> {
        if cells.is_empty() {
            return Err(ModelError::EmptyAssembly);
        }
        cells.sort_unstable_by_key(|&(p, _)| p);
        for w in cells.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(ModelError::Overlap(w[0].0.x, w[0].0.y));
            }
        }
        Ok(Assembly { cells })
    }

    pub fn singleton(tile: TileIx) -> Assembly {
        Assembly {
            cells: vec![(Point::new(0, 0), tile)],
        }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cells(&self) -> &[(Point, TileIx)] {
        &self.cells
    }

    pub fn tile_at(&self, p: Point) -> Option<TileIx> {
        self.cells
            .binary_search_by(|&(q, _)| q.cmp(&p))
            .ok()
            .map(|i| self.cells[i].1)
    }

    pub fn contains(&self, p: Point) -> bool {
        self.cells.binary_search_by(|&(q, _)| q.cmp(&p)).is_ok()
    }

    /// Inclusive bounds (min_x, min_y, max_x, max_y).
    pub fn bounds(&self) -> (i32, i32, i32, i32) {
        let mut min_x = i32::MAX;
        let mut max_x = i32::MIN;
        // Cells are sorted row-major, so y bounds come for free.
        let min_y = self.cells[0].0.y;
        let max_y = self.cells[self.cells.len() - 1].0.y;
        for &(p, _) in &self.cells {
            min_x = min_x.min(p.x);
            max_x = max_x.max(p.x);
        }
        (min_x, min_y, max_x, max_y)
    }

    pub fn width(&self) -> u32 {
        let (min_x, _, max_x, _) = self.bounds();
        (max_x as i64 - min_x as i64 + 1) as u32
    }

    pub fn height(&self) -> u32 {
        let (_, min_y, _, max_y) = self.bounds();
        (max_y as i64 - min_y as i64 + 1) as u32
    }

    /// Checks that every tile index is valid for `tiles`.
    pub fn validate(&self, tiles: &TileSet) -> Result<(), ModelError> {
        for &(_, t) in &self.cells {
            if t as usize >= tiles.len() {
                return Err(ModelError::BadTileIndex(t as usize, tiles.len()));
            }
        }
        Ok(())
    }
}

/// Pointwise shift: the tile at `p + u` of the result is the tile at `p` of
/// `a`. Coordinate overflow is reported, never wrapped.
pub fn translate(a: &Assembly, u: Offset) -> Result<Assembly, ModelError> {
    let mut cells = Vec::with_capacity(a.cells.len());
    for &(p, t) in &a.cells {
        let x = p.x.checked_add(u.dx).ok_or(ModelError::CoordinateOverflow)?;
        let y = p.y.checked_add(u.dy).ok_or(ModelError::CoordinateOverflow)?;
        cells.push((Point::new(x, y), t));
    }
    // A uniform shift preserves row-major order.
    Ok(Assembly { cells })
}

/// Translates `a` so its domain has min-x = 0 and min-y = 0. Returns the
/// canonical assembly together with the offset that was applied.
pub fn canonicalize(a: &Assembly) -> Result<(Assembly, Offset), ModelError> {
    let (min_x, min_y, _, _) = a.bounds();
    let off = Offset::new(
        0i32.checked_sub(min_x).ok_or(ModelError::CoordinateOverflow)?,
        0i32.checked_sub(min_y).ok_or(ModelError::CoordinateOverflow)?,
    );
    Ok((translate(a, off)?, off))
}

/// Union of two assemblies with disjoint domains. Overlaps are an error that
/// names one offending point.
pub fn union_disjoint(a: &Assembly, b: &Assembly) -> Result<Assembly, ModelError> {
    let mut cells = Vec::with_capacity(a.cells.len() + b.cells.len());
    let (mut i, mut j) = (0, 0);
    while i < a.cells.len() && j < b.cells.len() {
        match a.cells[i].0.cmp(&b.cells[j].0) {
            std::cmp::Ordering::Less => {
                cells.push(a.cells[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                cells.push(b.cells[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let p = a.cells[i].0;
                return Err(ModelError::Overlap(p.x, p.y));
            }
        }
    }
    cells.extend_from_slice(&a.cells[i..]);
    cells.extend_from_slice(&b.cells[j..]);
    Ok(Assembly { cells })
}

/// The temperature: the least total bond strength every cut of a stable
/// assembly must withstand. Defaults to 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Temperature(u32);

impl Temperature {
    pub fn new(tau: u32) -> Result<Temperature, ModelError> {
        if tau == 0 {
            return Err(ModelError::BadTileSet("temperature must be >= 1".into()));
        }
        Ok(Temperature(tau))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl Default for Temperature {
    fn default() -> Temperature {
        Temperature(2)
    }
}

impl fmt::Display for Temperature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// One exposed side of an assembly: the cell, the open direction, and the
/// positive-strength bond key published there.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct ExposedSide {
    pub point: Point,
    pub dir: Direction,
    pub key: BondKey,
}

/// Exposed positive-strength sides, sorted by (direction, bond key) so that
/// the matching group for a side is one binary-searched slice. Kept lean:
/// one of these is cached per supertile.
#[derive(Debug, Default)]
pub(crate) struct SideIndex {
    sides: Vec<ExposedSide>,
}

impl SideIndex {
    pub fn sides(&self) -> &[ExposedSide] {
        &self.sides
    }

    /// All exposed sides facing `dir` with the given bond key.
    pub fn matching(&self, dir: Direction, key: BondKey) -> &[ExposedSide] {
        let probe = (dir, key);
        let lo = self
            .sides
            .partition_point(|s| (s.dir, s.key) < probe);
        let hi = self
            .sides
            .partition_point(|s| (s.dir, s.key) <= probe);
        &self.sides[lo..hi]
    }
}

#[derive(Debug)]
struct SupertileInner {
    canon: Assembly,
    side_index: OnceLock<SideIndex>,
    stability: Mutex<Vec<(u32, bool)>>,
}

/// A translation-equivalence class of assemblies, represented by the member
/// whose domain has min-x = min-y = 0. Equality and hashing go through the
/// canonical form only; clones share the underlying storage.
#[derive(Debug, Clone)]
pub struct Supertile {
    inner: Arc<SupertileInner>,
}

impl PartialEq for Supertile {
    fn eq(&self, other: &Supertile) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.canon == other.inner.canon
    }
}

impl Eq for Supertile {}

impl std::hash::Hash for Supertile {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.inner.canon.hash(state);
    }
}

impl PartialOrd for Supertile {
    fn partial_cmp(&self, other: &Supertile) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Supertile {
    fn cmp(&self, other: &Supertile) -> std::cmp::Ordering {
        self.inner.canon.cells().cmp(other.inner.canon.cells())
    }
}

impl Supertile {
    /// Canonicalizes `a` and wraps it. Stability is not checked here; callers
    /// that require a stable representative check it themselves.
    pub fn from_assembly(a: &Assembly) -> Result<Supertile, ModelError> {
        let (canon, _) = canonicalize(a)?;
        Ok(Supertile::from_canonical(canon))
    }

    pub(crate) fn from_canonical(canon: Assembly) -> Supertile {
        debug_assert!({
            let (mx, my, _, _) = canon.bounds();
            mx == 0 && my == 0
        });
        Supertile {
            inner: Arc::new(SupertileInner {
                canon,
                side_index: OnceLock::new(),
                stability: Mutex::new(Vec::new()),
            }),
        }
    }

    pub fn singleton(tile: TileIx) -> Supertile {
        Supertile::from_canonical(Assembly::singleton(tile))
    }

    pub fn assembly(&self) -> &Assembly {
        &self.inner.canon
    }

    pub fn len(&self) -> usize {
        self.inner.canon.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Canonical text key: `x,y,tile` triples joined by `;` in row-major order.
    pub fn key(&self, tiles: &TileSet) -> String {
        let mut s = String::new();
        for (i, &(p, t)) in self.inner.canon.cells().iter().enumerate() {
            if i > 0 {
                s.push(';');
            }
            s.push_str(&format!("{},{},{}", p.x, p.y, tiles.tile(t).name));
        }
        s
    }

    pub(crate) fn cached_stability(&self, tau: u32) -> Option<bool> {
        let cache = self.inner.stability.lock().unwrap();
        cache.iter().find(|&&(t, _)| t == tau).map(|&(_, v)| v)
    }

    pub(crate) fn cache_stability(&self, tau: u32, stable: bool) {
        let mut cache = self.inner.stability.lock().unwrap();
        if !cache.iter().any(|&(t, _)| t == tau) {
            cache.push((tau, stable));
        }
    }

    /// Exposed-side index used by combination search; built once per supertile.
    pub(crate) fn side_index(&self, tiles: &TileSet) -> &SideIndex {
        self.inner.side_index.get_or_init(|| {
            let canon = &self.inner.canon;
            let mut sides = Vec::new();
            for &(p, t) in canon.cells() {
                for dir in Direction::ALL {
                    let Some(key) = tiles.bond_key(t, dir) else {
                        continue;
                    };
                    let open = match p.step(dir) {
                        Some(q) => !canon.contains(q),
                        None => false,
                    };
                    if open {
                        sides.push(ExposedSide { point: p, dir, key });
                    }
                }
            }
            sides.sort_unstable_by_key(|s| (s.dir, s.key, s.point));
            sides.shrink_to_fit();
            SideIndex { sides }
        })
    }
}
