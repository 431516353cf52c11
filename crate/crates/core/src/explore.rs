//! Bounded fixpoint computation of the producible-supertile set, terminal
//! detection, strict self-assembly, and witness traces.
//!
//! The frontier runs in waves: every unordered pair with at least one member
//! from the newest wave is queried once, results are merged sequentially in
//! a fixed order, so the store (and every witness record) is identical no
//! matter how many threads process the wave.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use thiserror::Error;

use crate::combine::{combinations, has_combination};
use crate::model::{
    canonicalize, translate, union_disjoint, Assembly, ModelError, Offset, Point, Supertile,
    Temperature, TileSet,
};
use crate::stability::interface_strength;
use crate::tdsl;

#[derive(Debug, Error)]
pub enum ExploreError {
    #[error("not producible under caps")]
    NotProducible,
    #[error("inconclusive: exploration not saturated")]
    NotSaturated,
    #[error("invalid exploration config: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Caps for bounded exploration. The bounding box, when present, dominates
/// the tile cap (`max_tiles <= w*h`).
#[derive(Debug, Clone, Copy)]
pub struct ExploreConfig {
    pub tau: Temperature,
    pub max_tiles: usize,
    pub max_supertiles: usize,
    pub bbox: Option<(u32, u32)>,
}

impl ExploreConfig {
    pub fn new(
        tau: Temperature,
        max_tiles: usize,
        max_supertiles: usize,
        bbox: Option<(u32, u32)>,
    ) -> Result<ExploreConfig, ExploreError> {
        if max_tiles == 0 || max_supertiles == 0 {
            return Err(ExploreError::BadConfig("caps must be positive".into()));
        }
        if let Some((w, h)) = bbox {
            if w == 0 || h == 0 {
                return Err(ExploreError::BadConfig("bounding box must be positive".into()));
            }
        }
        let mut cfg = ExploreConfig {
            tau,
            max_tiles,
            max_supertiles,
            bbox,
        };
        if let Some((w, h)) = bbox {
            cfg.max_tiles = cfg.max_tiles.min(w as usize * h as usize);
        }
        Ok(cfg)
    }

    pub fn with_tau(mut self, tau: Temperature) -> ExploreConfig {
        self.tau = tau;
        self
    }
}

impl Default for ExploreConfig {
    fn default() -> ExploreConfig {
        ExploreConfig {
            tau: Temperature::default(),
            max_tiles: 64,
            max_supertiles: 1_000_000,
            bbox: None,
        }
    }
}

/// Witness record: the result was first obtained by attaching `partner`
/// (translated by `offset`) to `base`, both indices into the store.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Predecessor {
    pub base: usize,
    pub partner: usize,
    pub offset: Offset,
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub supertile: Supertile,
    pub predecessor: Option<Predecessor>,
    pub first_seen: usize,
}

/// Deduplicated set of producible supertiles with witness provenance.
#[derive(Debug)]
pub struct ProducibleSet {
    tau: Temperature,
    entries: Vec<Entry>,
    index: HashMap<Supertile, usize>,
    saturated: bool,
}

impl ProducibleSet {
    pub fn tau(&self) -> Temperature {
        self.tau
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn contains(&self, s: &Supertile) -> bool {
        self.index.contains_key(s)
    }

    pub fn index_of(&self, s: &Supertile) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn saturated(&self) -> bool {
        self.saturated
    }

    pub fn supertiles(&self) -> impl Iterator<Item = &Supertile> {
        self.entries.iter().map(|e| &e.supertile)
    }
}

/// Outcome counters for one exploration run. `saturated` means the fixpoint
/// closed without any cap rejection, so the set is the whole producible set.
/// `store_full` distinguishes truncation by the supertile-count cap from
/// size-cap rejections: a size-capped set is still downward complete.
#[derive(Debug, Clone, Default)]
pub struct ExploreReport {
    pub saturated: bool,
    pub supertiles: usize,
    pub combination_queries: u64,
    pub cap_hits: u64,
    pub store_full: bool,
}

fn within_caps(a: &Assembly, cfg: &ExploreConfig) -> bool {
    if a.len() > cfg.max_tiles {
        return false;
    }
    if let Some((w, h)) = cfg.bbox {
        if a.width() > w || a.height() > h {
            return false;
        }
    }
    true
}

/// Computes the τ-producible supertiles reachable from singletons without any
/// intermediate exceeding the caps. Deterministic: the store, entry order and
/// witness records do not depend on the number of worker threads.
pub fn explore(tiles: &TileSet, cfg: &ExploreConfig) -> (ProducibleSet, ExploreReport) {
    let mut set = ProducibleSet {
        tau: cfg.tau,
        entries: Vec::new(),
        index: HashMap::new(),
        saturated: true,
    };
    let mut report = ExploreReport {
        saturated: true,
        ..ExploreReport::default()
    };

    for t in 0..tiles.len() {
        insert(&mut set, &mut report, cfg, Supertile::singleton(t as u16), None);
    }

    // Pairs are processed in bounded chunks: parallel query, then a
    // sequential merge in pair order. Chunking keeps memory flat on huge
    // waves and lets a full store abort early.
    let mut buf: Vec<(usize, usize)> = Vec::with_capacity(PAIR_CHUNK);
    let mut wave_start = 0usize;
    'outer: while wave_start < set.entries.len() {
        let wave_end = set.entries.len();
        for i in wave_start..wave_end {
            for j in 0..=i {
                buf.push((i, j));
                if buf.len() == PAIR_CHUNK
                    && process_chunk(&mut buf, &mut set, &mut report, tiles, cfg)
                {
                    break 'outer;
                }
            }
        }
        if !buf.is_empty() && process_chunk(&mut buf, &mut set, &mut report, tiles, cfg) {
            break 'outer;
        }
        wave_start = wave_end;
    }

    set.saturated = report.saturated;
    report.supertiles = set.entries.len();
    (set, report)
}

const PAIR_CHUNK: usize = 1 << 14;

fn insert(
    set: &mut ProducibleSet,
    report: &mut ExploreReport,
    cfg: &ExploreConfig,
    st: Supertile,
    pred: Option<Predecessor>,
) -> bool {
    if set.index.contains_key(&st) {
        return false;
    }
    if !within_caps(st.assembly(), cfg) {
        report.cap_hits += 1;
        report.saturated = false;
        return false;
    }
    if set.entries.len() >= cfg.max_supertiles {
        report.cap_hits += 1;
        report.saturated = false;
        report.store_full = true;
        return false;
    }
    let ix = set.entries.len();
    set.index.insert(st.clone(), ix);
    set.entries.push(Entry {
        supertile: st,
        predecessor: pred,
        first_seen: ix,
    });
    true
}

/// Queries one batch of pairs in parallel, merges sequentially in pair
/// order, and reports whether exploration should stop (store full).
fn process_chunk(
    buf: &mut Vec<(usize, usize)>,
    set: &mut ProducibleSet,
    report: &mut ExploreReport,
    tiles: &TileSet,
    cfg: &ExploreConfig,
) -> bool {
    let results: Vec<(usize, usize, Vec<crate::combine::Attachment>)> = buf
        .par_iter()
        .map(|&(i, j)| {
            let atts = combinations(
                &set.entries[j].supertile,
                &set.entries[i].supertile,
                tiles,
                cfg.tau,
            );
            (i, j, atts)
        })
        .collect();
    report.combination_queries += results.len() as u64;
    buf.clear();
    for (i, j, atts) in results {
        for att in atts {
            let offset = att.offset();
            insert(
                set,
                report,
                cfg,
                att.result,
                Some(Predecessor {
                    base: j,
                    partner: i,
                    offset,
                }),
            );
        }
    }
    set.entries.len() >= cfg.max_supertiles && !report.saturated
}

/// The entries of `p` that combine with no entry of `p` (self-combination
/// included). Emptiness of a combination set is exact and not capped, so a
/// supertile whose every product would exceed the caps still counts as
/// growable. When `p` is unsaturated this is terminality within the explored
/// universe only.
pub fn terminals(p: &ProducibleSet, tiles: &TileSet, tau: Temperature) -> Vec<Supertile> {
    // Try small partners first; most non-terminals can bind a singleton.
    let mut order: Vec<usize> = (0..p.entries.len()).collect();
    order.sort_by_key(|&i| (p.entries[i].supertile.len(), i));
    let flags: Vec<bool> = p
        .entries
        .par_iter()
        .map(|e| {
            !order
                .iter()
                .any(|&j| has_combination(&e.supertile, &p.entries[j].supertile, tiles, tau))
        })
        .collect();
    p.entries
        .iter()
        .zip(flags)
        .filter(|(_, t)| *t)
        .map(|(e, _)| e.supertile.clone())
        .collect()
}

/// Does every terminal of a saturated exploration have exactly the domain of
/// `shape` (up to translation)?
pub fn strictly_self_assembles(
    p: &ProducibleSet,
    tiles: &TileSet,
    tau: Temperature,
    shape: &[Point],
) -> Result<bool, ExploreError> {
    if !p.saturated {
        return Err(ExploreError::NotSaturated);
    }
    let target = canonical_domain(shape)?;
    for t in terminals(p, tiles, tau) {
        let dom: Vec<Point> = t.assembly().cells().iter().map(|&(q, _)| q).collect();
        if dom != target {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Min-corner normalization of a bare point set, sorted row-major.
pub fn canonical_domain(shape: &[Point]) -> Result<Vec<Point>, ExploreError> {
    if shape.is_empty() {
        return Err(ExploreError::Model(ModelError::EmptyAssembly));
    }
    let min_x = shape.iter().map(|p| p.x).min().unwrap();
    let min_y = shape.iter().map(|p| p.y).min().unwrap();
    let mut out: Vec<Point> = shape
        .iter()
        .map(|p| Point::new(p.x - min_x, p.y - min_y))
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// One growth step of a trace: `result` is the stable union of the previous
/// supertile and `partner` translated by `offset`.
#[derive(Debug, Clone)]
pub struct TraceStep {
    pub partner: Supertile,
    pub offset: Offset,
    pub result: Supertile,
}

/// A nascent supertile assembly sequence witnessing producibility: starts at
/// a singleton and ends at the queried supertile.
#[derive(Debug, Clone)]
pub struct Trace {
    pub origin: Supertile,
    pub steps: Vec<TraceStep>,
}

impl Trace {
    pub fn result(&self) -> &Supertile {
        self.steps.last().map(|s| &s.result).unwrap_or(&self.origin)
    }

    pub fn len(&self) -> usize {
        self.steps.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Replays every step: the origin must be a singleton, each partner must
    /// satisfy `partner_ok`, each union must reproduce the recorded result,
    /// and each interface must reach `tau`.
    pub fn validate(
        &self,
        tiles: &TileSet,
        tau: Temperature,
        partner_ok: impl FnMut(&Supertile) -> bool,
    ) -> Result<(), String> {
        if self.origin.len() != 1 {
            return Err("trace origin is not a singleton".into());
        }
        self.replay(tiles, tau, partner_ok)
    }

    /// Replay for growth witnesses, whose origin is an arbitrary supertile.
    pub fn validate_growth(&self, tiles: &TileSet, tau: Temperature) -> Result<(), String> {
        self.replay(tiles, tau, |_| true)
    }

    fn replay(
        &self,
        tiles: &TileSet,
        tau: Temperature,
        mut partner_ok: impl FnMut(&Supertile) -> bool,
    ) -> Result<(), String> {
        let mut current = self.origin.clone();
        for (k, step) in self.steps.iter().enumerate() {
            if !partner_ok(&step.partner) {
                return Err(format!("step {k}: partner not producible"));
            }
            let shifted = translate(step.partner.assembly(), step.offset)
                .map_err(|e| format!("step {k}: {e}"))?;
            let strength = interface_strength(current.assembly(), &shifted, tiles)
                .map_err(|e| format!("step {k}: {e}"))?;
            if strength < tau.get() as u64 {
                return Err(format!("step {k}: interface {strength} below τ"));
            }
            let union = union_disjoint(current.assembly(), &shifted)
                .map_err(|e| format!("step {k}: {e}"))?;
            let (canon, _) = canonicalize(&union).map_err(|e| format!("step {k}: {e}"))?;
            let got = Supertile::from_canonical(canon);
            if got != step.result {
                return Err(format!("step {k}: union does not match recorded result"));
            }
            current = got;
        }
        Ok(())
    }
}

/// Reconstructs a witness trace for `s` by following predecessor records.
/// The partner of every step is itself producible in `p`.
pub fn witness_sequence(p: &ProducibleSet, s: &Supertile) -> Result<Trace, ExploreError> {
    let Some(mut ix) = p.index_of(s) else {
        return Err(ExploreError::NotProducible);
    };
    let mut rev: Vec<(usize, Offset, usize)> = Vec::new(); // (partner, offset, result)
    while let Some(pred) = p.entries[ix].predecessor {
        rev.push((pred.partner, pred.offset, ix));
        ix = pred.base;
    }
    let origin = p.entries[ix].supertile.clone();
    let steps = rev
        .into_iter()
        .rev()
        .map(|(partner, offset, result)| TraceStep {
            partner: p.entries[partner].supertile.clone(),
            offset,
            result: p.entries[result].supertile.clone(),
        })
        .collect();
    Ok(Trace { origin, steps })
}

/// Writes one `.asm` file per supertile plus a manifest. Manifest lines are
/// sorted by canonical key: `key<TAB>size<TAB>terminal(0|1)`. With
/// `terminals_only` the assembly files are restricted to terminals (the
/// manifest always lists everything).
pub fn export(
    p: &ProducibleSet,
    report: &ExploreReport,
    tiles: &TileSet,
    tau: Temperature,
    dir: &Path,
    terminals_only: bool,
) -> Result<std::path::PathBuf, ExploreError> {
    std::fs::create_dir_all(dir)?;
    let terminal_set: std::collections::HashSet<Supertile> =
        terminals(p, tiles, tau).into_iter().collect();
    let mut rows: Vec<(String, &Entry)> = p
        .entries
        .iter()
        .map(|e| (e.supertile.key(tiles), e))
        .collect();
    rows.sort_by(|a, b| a.0.cmp(&b.0));

    // Manifest lines and file numbers share the canonical-key order, so line
    // k describes st_k.
    let manifest_path = dir.join("manifest.txt");
    let mut out = std::io::BufWriter::new(std::fs::File::create(&manifest_path)?);
    writeln!(out, "# supertile manifest")?;
    writeln!(out, "# temperature: {}", tau.get())?;
    writeln!(out, "# saturated: {}", report.saturated)?;
    writeln!(out, "# supertiles: {}", rows.len())?;
    if !report.saturated {
        writeln!(out, "# note: terminal flags are relative to the explored universe")?;
    }
    for (key, e) in &rows {
        let terminal = terminal_set.contains(&e.supertile);
        writeln!(out, "{}\t{}\t{}", key, e.supertile.len(), u8::from(terminal))?;
    }
    out.flush()?;

    let width = rows.len().to_string().len().max(4);
    for (n, (_, e)) in rows.iter().enumerate() {
        if terminals_only && !terminal_set.contains(&e.supertile) {
            continue;
        }
        let name = format!("st_{:0width$}.asm", n, width = width);
        let text = tdsl::serialize_assembly(e.supertile.assembly(), tiles);
        std::fs::write(dir.join(name), text)?;
    }
    Ok(manifest_path)
}
