//! End-to-end behavior of the generated tile systems: the comb strictly
//! self-assembles its square at τ=1, the counter is directed at τ=2 with the
//! frozen terminal footprint, and the log-complexity square reaches exactly
//! its n×n terminal.

#![allow(clippy::mutable_key_type)]

use tatam_core::constructions::{gen_comb, gen_counter, gen_demo, gen_fuzzy_square};
use tatam_core::explore::{
    explore, strictly_self_assembles, terminals, witness_sequence, ExploreConfig,
};
use tatam_core::fuzzy::{compute_sets, fuzzy_check, grow_closure, Verdict};
use tatam_core::model::{Point, Supertile, Temperature};
use tatam_core::stability::supertile_is_stable;

fn tau(t: u32) -> Temperature {
    Temperature::new(t).unwrap()
}

fn cfg(t: u32, max_tiles: usize) -> ExploreConfig {
    ExploreConfig::new(tau(t), max_tiles, 1_000_000, None).unwrap()
}

fn square_domain(n: i32) -> Vec<Point> {
    let mut out = Vec::new();
    for y in 0..n {
        for x in 0..n {
            out.push(Point::new(x, y));
        }
    }
    out
}

#[test]
fn comb_strictly_self_assembles_squares() {
    for n in 1..=4u32 {
        let tiles = gen_comb(n).unwrap();
        let (p, r) = explore(&tiles, &cfg(1, (n * n) as usize));
        assert!(r.saturated, "comb {n} must saturate");
        let t = terminals(&p, &tiles, tau(1));
        assert_eq!(t.len(), 1, "comb {n} has one terminal");
        assert!(strictly_self_assembles(&p, &tiles, tau(1), &square_domain(n as i32)).unwrap());
        assert!(!strictly_self_assembles(&p, &tiles, tau(1), &[Point::new(0, 0)]).unwrap()
            || n == 1);
    }
}

#[test]
fn comb_terminal_witness_replays() {
    let tiles = gen_comb(3).unwrap();
    let (p, _) = explore(&tiles, &cfg(1, 9));
    let term = terminals(&p, &tiles, tau(1)).pop().unwrap();
    let trace = witness_sequence(&p, &term).unwrap();
    assert_eq!(trace.result(), &term);
    trace.validate(&tiles, tau(1), |s| p.contains(s)).unwrap();
    // Step count: each step attaches one whole partner supertile.
    let attached: usize = trace.steps.iter().map(|s| s.partner.len()).sum();
    assert_eq!(attached + 1, term.len());
}

/// Golden values frozen from the first verified runs: the width-w counter
/// stops as a (w+2) x 2^(w+1) box missing its northwest corner cell.
#[test]
fn counter_is_directed_with_frozen_footprint() {
    for (w, types, size, dims) in [(2u32, 18usize, 31usize, (4u32, 8u32)), (3, 25, 79, (5, 16))] {
        let tiles = gen_counter(w).unwrap();
        assert_eq!(tiles.len(), types);
        let (p, r) = explore(&tiles, &cfg(2, size + 8));
        assert!(r.saturated, "counter {w} must saturate");
        let t = terminals(&p, &tiles, tau(2));
        assert_eq!(t.len(), 1, "counter {w} is directed");
        assert_eq!(t[0].len(), size);
        assert_eq!((t[0].assembly().width(), t[0].assembly().height()), dims);
    }
}

#[test]
fn every_counter_witness_replays() {
    let tiles = gen_counter(2).unwrap();
    let (p, _) = explore(&tiles, &cfg(2, 40));
    for e in p.entries() {
        let trace = witness_sequence(&p, &e.supertile).unwrap();
        assert_eq!(trace.result(), &e.supertile);
        trace.validate(&tiles, tau(2), |s| p.contains(s)).unwrap();
    }
}

#[test]
fn comb_terminal_renders_as_nine_squares() {
    let tiles = gen_comb(3).unwrap();
    let (p, _) = explore(&tiles, &cfg(1, 9));
    let term = terminals(&p, &tiles, tau(1)).pop().unwrap();
    let svg = tatam_core::render::render_svg(
        term.assembly(),
        &tiles,
        &tatam_core::render::RenderOptions::default(),
    );
    assert_eq!(svg.matches("<rect ").count(), 9);
    assert_eq!(
        (term.assembly().width(), term.assembly().height()),
        (3, 3)
    );
}

#[test]
fn fail_verdict_survives_larger_caps() {
    let tiles = gen_demo("error_prone").unwrap();
    for cap in [24usize, 48, 96] {
        let r = fuzzy_check(&tiles, &cfg(2, cap), None);
        assert_eq!(r.verdict, Verdict::Fail, "cap {cap}");
        assert!(!r.violations.is_empty());
    }
}

#[test]
fn counter_terminals_grow_with_width() {
    let size = |w: u32| {
        let tiles = gen_counter(w).unwrap();
        let (p, _) = explore(&tiles, &cfg(2, 128));
        terminals(&p, &tiles, tau(2)).pop().unwrap().len()
    };
    assert!(size(3) > size(2));
}

#[test]
fn fuzzy_square_unique_terminal_at_min_n() {
    let n = 8u32;
    let tiles = gen_fuzzy_square(n).unwrap();
    let (p, r) = explore(&tiles, &cfg(2, (n * n) as usize));
    assert!(r.saturated);
    let t = terminals(&p, &tiles, tau(2));
    assert_eq!(t.len(), 1);
    assert_eq!(t[0].len(), (n * n) as usize);
    assert!(strictly_self_assembles(&p, &tiles, tau(2), &square_domain(n as i32)).unwrap());
}

#[test]
fn demo_sets_match_their_stories() {
    // all_strength2: every τ=1 step is a τ=2 step, so the four classes agree.
    let tiles = gen_demo("all_strength2").unwrap();
    let sets = compute_sets(&tiles, &cfg(2, 32));
    assert_eq!((sets.dp.len(), sets.pp.len()), (3, 3));
    assert_eq!(sets.dt.len(), 1);
    assert_eq!(sets.ps.len(), 3);

    // strength1_pair: the dimer is plausible but dissolves at τ=2.
    let tiles = gen_demo("strength1_pair").unwrap();
    let sets = compute_sets(&tiles, &cfg(2, 32));
    assert_eq!(sets.dp.len(), 2);
    assert_eq!(sets.pp.len(), 3);
    assert_eq!(sets.ps.len(), 2);
    let dimer = sets
        .pp
        .supertiles()
        .find(|s| s.len() == 2)
        .expect("dimer is plausible");
    assert!(!supertile_is_stable(dimer, &tiles, tau(2)));

    // error_prone: a locked rogue is plausibly stable but dependably stuck.
    let tiles = gen_demo("error_prone").unwrap();
    let sets = compute_sets(&tiles, &cfg(2, 32));
    let bad = sets
        .ps
        .iter()
        .find(|s| !sets.dp.contains(s))
        .expect("a plausibly stable supertile outside DP");
    let (closure, saturated) = grow_closure(bad, &sets, &tiles, &cfg(2, 32));
    assert!(saturated);
    assert!(closure.iter().any(|m| !sets.dt.contains(m)));
}

#[test]
fn fuzzy_verdicts_per_demo() {
    let c = cfg(2, 32);
    assert_eq!(
        fuzzy_check(&gen_demo("all_strength2").unwrap(), &c, None).verdict,
        Verdict::Pass
    );
    assert_eq!(
        fuzzy_check(&gen_demo("strength1_pair").unwrap(), &c, None).verdict,
        Verdict::Pass
    );
    assert_eq!(
        fuzzy_check(&gen_demo("error_prone").unwrap(), &c, None).verdict,
        Verdict::Fail
    );
}

#[test]
fn dp_members_are_plausibly_stable() {
    // Every dependably produced supertile is itself plausibly stable.
    for id in ["all_strength2", "strength1_pair", "error_prone"] {
        let tiles = gen_demo(id).unwrap();
        let sets = compute_sets(&tiles, &cfg(2, 32));
        assert!(sets.dp_subset_pp);
        let ps: std::collections::HashSet<&Supertile> = sets.ps.iter().collect();
        for s in sets.dp.supertiles() {
            assert!(ps.contains(s), "{id}: DP member missing from PS");
        }
    }
}
