//! The fuzzy-temperature fault-tolerance check. Four supertile classes are
//! computed at bounded scale: producibles at τ=2 (DP) and their terminals
//! (DT), producibles at τ=1 (PP), and the τ=1 producibles that are stable at
//! τ=2 (PS). The system passes when every PS member can grow, at τ=2, only
//! into DT members.
//!
//! Growth from a PS member may attach DP members and previously grown
//! closure members (the abundant-supply reading: every producible supertile
//! is available in unlimited quantity). A violation is reported only when it
//! is a positive witness that survives any cap enlargement: the τ=2
//! exploration and the closure in question must both be saturated, so the
//! stuck supertile is genuinely terminal and genuinely outside DT.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::combine::combinations;
use crate::explore::{
    explore, terminals, witness_sequence, ExploreConfig, ExploreReport, ProducibleSet, Trace,
    TraceStep,
};
use crate::model::{Offset, Point, Supertile, Temperature, TileSet};
use crate::stability::supertile_is_stable;
use crate::tdsl;

/// The four bounded supertile classes plus their exploration reports.
#[derive(Debug)]
pub struct FuzzySets {
    pub dp: ProducibleSet,
    pub pp: ProducibleSet,
    pub dt: Vec<Supertile>,
    /// PS sorted by tile count, then canonical order.
    pub ps: Vec<Supertile>,
    pub dp_report: ExploreReport,
    pub pp_report: ExploreReport,
    /// Whether every explored DP member was also found at τ=1. Guaranteed
    /// when the τ=1 exploration saturates; informational otherwise.
    pub dp_subset_pp: bool,
}

/// Computes DP, DT, PP and PS with the caps of `cfg` (its temperature field
/// is ignored; both temperatures are run).
pub fn compute_sets(tiles: &TileSet, cfg: &ExploreConfig) -> FuzzySets {
    let two = Temperature::new(2).unwrap();
    let one = Temperature::new(1).unwrap();
    let (dp, dp_report) = explore(tiles, &cfg.with_tau(two));
    let (pp, pp_report) = explore(tiles, &cfg.with_tau(one));
    let dt = terminals(&dp, tiles, two);
    let mut ps: Vec<Supertile> = pp
        .entries()
        .par_iter()
        .filter(|e| supertile_is_stable(&e.supertile, tiles, two))
        .map(|e| e.supertile.clone())
        .collect();
    ps.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let dp_subset_pp = dp.supertiles().all(|s| pp.contains(s));
    if pp_report.saturated {
        assert!(
            dp_subset_pp,
            "saturated τ=1 exploration must cover every τ=2 producible"
        );
    }
    FuzzySets {
        dp,
        pp,
        dt,
        ps,
        dp_report,
        pp_report,
        dp_subset_pp,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PartnerRef {
    Dp(usize),
    Closure(usize),
}

struct ClosureEntry {
    supertile: Supertile,
    pred: Option<(usize, PartnerRef, Offset)>,
    grew: bool,
}

struct Closure {
    entries: Vec<ClosureEntry>,
    index: HashMap<Supertile, usize>,
    saturated: bool,
}

fn close_over(
    start: &Supertile,
    sets: &FuzzySets,
    tiles: &TileSet,
    cfg: &ExploreConfig,
) -> Closure {
    let two = Temperature::new(2).unwrap();
    debug_assert!(supertile_is_stable(start, tiles, two));
    let mut cl = Closure {
        entries: vec![ClosureEntry {
            supertile: start.clone(),
            pred: None,
            grew: false,
        }],
        index: HashMap::from([(start.clone(), 0usize)]),
        saturated: true,
    };
    let dp_entries = sets.dp.entries();
    const CHUNK: usize = 1 << 14;
    let mut buf: Vec<(usize, PartnerRef)> = Vec::with_capacity(CHUNK);
    let merge = |buf: &mut Vec<(usize, PartnerRef)>, cl: &mut Closure| {
        let results: Vec<(usize, PartnerRef, Vec<crate::combine::Attachment>)> = buf
            .par_iter()
            .map(|&(i, pref)| {
                let partner = match pref {
                    PartnerRef::Dp(j) => &dp_entries[j].supertile,
                    PartnerRef::Closure(j) => &cl.entries[j].supertile,
                };
                let atts = combinations(&cl.entries[i].supertile, partner, tiles, two);
                (i, pref, atts)
            })
            .collect();
        buf.clear();
        for (i, pref, atts) in results {
            if atts.is_empty() {
                continue;
            }
            cl.entries[i].grew = true;
            if let PartnerRef::Closure(j) = pref {
                cl.entries[j].grew = true;
            }
            for att in atts {
                if cl.index.contains_key(&att.result) {
                    continue;
                }
                let over_caps = att.result.len() > cfg.max_tiles
                    || cfg.bbox.is_some_and(|(w, h)| {
                        att.result.assembly().width() > w || att.result.assembly().height() > h
                    });
                if over_caps || cl.entries.len() >= cfg.max_supertiles {
                    cl.saturated = false;
                    continue;
                }
                let ix = cl.entries.len();
                let offset = att.offset();
                cl.index.insert(att.result.clone(), ix);
                cl.entries.push(ClosureEntry {
                    supertile: att.result,
                    pred: Some((i, pref, offset)),
                    grew: false,
                });
            }
        }
    };
    // Deterministic pair stream: each new member against every DP member,
    // then against every closure member up to itself.
    let mut wave_start = 0usize;
    while wave_start < cl.entries.len() {
        let wave_end = cl.entries.len();
        for i in wave_start..wave_end {
            for j in 0..dp_entries.len() {
                buf.push((i, PartnerRef::Dp(j)));
                if buf.len() == CHUNK {
                    merge(&mut buf, &mut cl);
                }
            }
            for j in 0..=i {
                buf.push((i, PartnerRef::Closure(j)));
                if buf.len() == CHUNK {
                    merge(&mut buf, &mut cl);
                }
            }
        }
        if !buf.is_empty() {
            merge(&mut buf, &mut cl);
        }
        wave_start = wave_end;
    }
    cl
}

/// Least set containing `start` and closed under τ=2 attachment with DP
/// members and with members of the closure itself, under the caps of `cfg`.
/// The flag reports whether the closure closed without hitting a cap.
pub fn grow_closure(
    start: &Supertile,
    sets: &FuzzySets,
    tiles: &TileSet,
    cfg: &ExploreConfig,
) -> (Vec<Supertile>, bool) {
    let cl = close_over(start, sets, tiles, cfg);
    (
        cl.entries.iter().map(|e| e.supertile.clone()).collect(),
        cl.saturated,
    )
}

fn closure_trace(cl: &Closure, sets: &FuzzySets, target: usize) -> Trace {
    let mut rev: Vec<(PartnerRef, Offset, usize)> = Vec::new();
    let mut ix = target;
    while let Some((base, pref, off)) = cl.entries[ix].pred {
        rev.push((pref, off, ix));
        ix = base;
    }
    let origin = cl.entries[ix].supertile.clone();
    let steps = rev
        .into_iter()
        .rev()
        .map(|(pref, offset, result)| TraceStep {
            partner: match pref {
                PartnerRef::Dp(j) => sets.dp.entries()[j].supertile.clone(),
                PartnerRef::Closure(j) => cl.entries[j].supertile.clone(),
            },
            offset,
            result: cl.entries[result].supertile.clone(),
        })
        .collect();
    Trace { origin, steps }
}

/// A confirmed failure of the PS ⇒ DT constraint: `origin` is plausibly
/// stable, and growing it at τ=2 reaches `bad_terminal`, which cannot grow
/// further yet is not dependably terminal.
#[derive(Debug, Clone)]
pub struct Violation {
    pub origin: Supertile,
    pub bad_terminal: Supertile,
    pub trace: Trace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug)]
pub struct FuzzyReport {
    pub sets: FuzzySets,
    pub verdict: Verdict,
    pub violations: Vec<Violation>,
    /// All grow-closures saturated and none had to be skipped.
    pub closures_saturated: bool,
    /// Result of the target-shape check, when a shape was supplied and DT
    /// was trustworthy.
    pub shape_ok: Option<bool>,
}

impl FuzzyReport {
    pub fn dp_saturated(&self) -> bool {
        self.sets.dp_report.saturated
    }

    pub fn pp_saturated(&self) -> bool {
        self.sets.pp_report.saturated
    }
}

/// Runs the full PS ⇒ DT check, plus the target-shape condition when
/// `shape` is given (every DT member must have exactly that domain).
///
/// Fail is only ever returned on positive witnesses: a violation requires a
/// saturated τ=2 exploration and a saturated closure, so enlarging caps can
/// never turn a fail into a pass. Zero violations under unsaturated
/// exploration is inconclusive, never pass.
pub fn fuzzy_check(
    tiles: &TileSet,
    cfg: &ExploreConfig,
    shape: Option<&[Point]>,
) -> FuzzyReport {
    let sets = compute_sets(tiles, cfg);
    fuzzy_check_sets(sets, tiles, cfg, shape)
}

/// Same as [`fuzzy_check`] but for precomputed sets.
pub fn fuzzy_check_sets(
    sets: FuzzySets,
    tiles: &TileSet,
    cfg: &ExploreConfig,
    shape: Option<&[Point]>,
) -> FuzzyReport {
    let dp_saturated = sets.dp.saturated();
    let mut violations: Vec<Violation> = Vec::new();
    let mut closures_saturated = true;

    // Condition (2): with a target shape, every dependable terminal must tile
    // exactly that domain. Offenders are reported as violations that are
    // their own bad terminal. Needs a trustworthy DT, hence saturation.
    let mut shape_ok = None;
    if let Some(points) = shape {
        if dp_saturated {
            let target = crate::explore::canonical_domain(points).ok();
            let mut ok = true;
            for t in &sets.dt {
                let dom: Vec<Point> = t.assembly().cells().iter().map(|&(p, _)| p).collect();
                if Some(&dom) != target.as_ref() {
                    ok = false;
                    violations.push(Violation {
                        origin: t.clone(),
                        bad_terminal: t.clone(),
                        trace: witness_sequence(&sets.dp, t).expect("DT member is producible"),
                    });
                }
            }
            shape_ok = Some(ok);
        }
    }

    // PS members already in DP cannot witness a violation once DP is
    // saturated: their closures stay inside DP, where stuck means terminal,
    // hence inside DT.
    if dp_saturated {
        let to_check: Vec<&Supertile> = sets
            .ps
            .iter()
            .filter(|s| !sets.dp.contains(s))
            .collect();
        let dt_index: std::collections::HashSet<&Supertile> = sets.dt.iter().collect();
        let results: Vec<(Vec<Violation>, bool)> = to_check
            .par_iter()
            .map(|s| {
                let cl = close_over(s, &sets, tiles, cfg);
                let mut vs = Vec::new();
                if cl.saturated {
                    for (ix, e) in cl.entries.iter().enumerate() {
                        if !e.grew && !dt_index.contains(&e.supertile) {
                            vs.push(Violation {
                                origin: (*s).clone(),
                                bad_terminal: e.supertile.clone(),
                                trace: closure_trace(&cl, &sets, ix),
                            });
                        }
                    }
                }
                (vs, cl.saturated)
            })
            .collect();
        for (vs, saturated) in results {
            closures_saturated &= saturated;
            violations.extend(vs);
        }
    } else {
        // Without a saturated τ=2 baseline neither DT membership nor
        // stuckness can be trusted; no closure is attempted.
        closures_saturated = sets.ps.iter().all(|s| sets.dp.contains(s));
    }

    let verdict = if !violations.is_empty() {
        Verdict::Fail
    } else if dp_saturated
        && sets.pp_report.saturated
        && closures_saturated
        && sets.dp_subset_pp
        && shape_ok != Some(false)
    {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    };

    FuzzyReport {
        sets,
        verdict,
        violations,
        closures_saturated,
        shape_ok,
    }
}

/// Text form of a report: header lines with the verdict and the four set
/// sizes, then one block per violation with origin and bad-terminal
/// assemblies in `.asm` format.
pub fn render_report(report: &FuzzyReport, tiles: &TileSet) -> String {
    let mut out = String::new();
    out.push_str(&format!("verdict: {}\n", report.verdict));
    out.push_str(&format!("dp: {}\n", report.sets.dp.len()));
    out.push_str(&format!("dt: {}\n", report.sets.dt.len()));
    out.push_str(&format!("pp: {}\n", report.sets.pp.len()));
    out.push_str(&format!("ps: {}\n", report.sets.ps.len()));
    out.push_str(&format!(
        "saturated: dp={} pp={} closures={}\n",
        report.dp_saturated(),
        report.pp_saturated(),
        report.closures_saturated
    ));
    if let Some(ok) = report.shape_ok {
        out.push_str(&format!("shape: {}\n", if ok { "ok" } else { "mismatch" }));
    }
    out.push_str("growth: dp members and closure members, abundant supply\n");
    for (i, v) in report.violations.iter().enumerate() {
        out.push('\n');
        out.push_str(&format!("violation {}\n", i + 1));
        out.push_str("origin:\n");
        out.push_str(&tdsl::serialize_assembly(v.origin.assembly(), tiles));
        out.push_str("bad-terminal:\n");
        out.push_str(&tdsl::serialize_assembly(v.bad_terminal.assembly(), tiles));
    }
    out
}
