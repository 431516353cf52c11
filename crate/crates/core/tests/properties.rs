//! Property tests for the model invariants: translation-class collapse,
//! stability against an independent brute-force min-cut, the union-stability
//! lemma, combination completeness against the window oracle, and text
//! round-trips.

use proptest::prelude::*;
use rand::SeedableRng;

use tatam_core::combine::{combinations, combinations_by_window_scan};
use tatam_core::model::{
    canonicalize, translate, union_disjoint, Assembly, Direction, Offset, Point, Supertile,
    Temperature, TileSet, TileType,
};
use tatam_core::stability::{binding_graph, is_stable, stable_union};
use tatam_core::tdsl;

fn tau(t: u32) -> Temperature {
    Temperature::new(t).unwrap()
}

const LABELS: [&str; 6] = ["g0", "g1", "g2", "g3", "g4", "g5"];

/// A random tile set: up to five tiles, sides drawn from a small label
/// alphabet with strengths 0..=2 (0 encodes an absent glue).
fn arb_tileset() -> impl Strategy<Value = TileSet> {
    let side = (0usize..LABELS.len(), 0u32..=2);
    let tile = proptest::array::uniform4(side);
    proptest::collection::vec(tile, 1..=5).prop_map(|tiles| {
        let tiles = tiles
            .into_iter()
            .enumerate()
            .map(|(i, sides)| {
                let mut t = TileType::new(format!("t{i}"));
                for (dir, (label, strength)) in Direction::ALL.into_iter().zip(sides) {
                    if strength > 0 {
                        t = t.with_glue(dir, LABELS[label], strength);
                    }
                }
                t
            })
            .collect();
        TileSet::new(tiles).expect("valid random tile set")
    })
}

/// A random connected assembly with `len` cells, grown by a random walk.
fn arb_assembly(tiles: usize, len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Assembly> {
    let step = (0usize..4, 0usize..tiles.max(1));
    (proptest::collection::vec(step, len), 0usize..tiles.max(1)).prop_map(
        |(steps, first)| {
            let mut cells: Vec<(Point, u16)> = vec![(Point::new(0, 0), first as u16)];
            for (dir, tile) in steps {
                // Attach next to a pseudo-random existing cell.
                let base = cells[(dir * 7 + tile * 13 + cells.len()) % cells.len()].0;
                let q = base.step(Direction::ALL[dir]).unwrap();
                if !cells.iter().any(|&(p, _)| p == q) {
                    cells.push((q, tile as u16));
                }
            }
            Assembly::new(cells).unwrap()
        },
    )
}

fn arb_system() -> impl Strategy<Value = (TileSet, Assembly)> {
    arb_tileset().prop_flat_map(|ts| {
        let n = ts.len();
        arb_assembly(n, 1..=8).prop_map(move |a| (ts.clone(), a))
    })
}

/// Random tile set biased toward bindable sides: strengths 1..=2, labels
/// from a small alphabet, occasional null sides.
fn random_tileset(rng: &mut impl rand::Rng) -> TileSet {
    let count = rng.random_range(1..=4);
    let tiles = (0..count)
        .map(|i| {
            let mut t = TileType::new(format!("t{i}"));
            for dir in Direction::ALL {
                if rng.random_bool(0.8) {
                    let label = LABELS[rng.random_range(0..3)];
                    let strength = rng.random_range(1..=2);
                    t = t.with_glue(dir, label, strength);
                }
            }
            t
        })
        .collect();
    TileSet::new(tiles).unwrap()
}

/// Grows a τ-stable assembly by cooperative accretion: every added tile
/// binds the existing assembly with strength at least τ, which preserves
/// stability by the union lemma. Stops early when no growth site exists.
fn random_stable_assembly(
    rng: &mut impl rand::Rng,
    tiles: &TileSet,
    tau_v: Temperature,
    max_len: usize,
) -> Assembly {
    use tatam_core::stability::interface_strength;
    let mut a = Assembly::singleton(rng.random_range(0..tiles.len()) as u16);
    'grow: while a.len() < max_len {
        let mut sites: Vec<(Point, u16)> = Vec::new();
        for &(p, _) in a.cells() {
            for dir in Direction::ALL {
                let q = p.step(dir).unwrap();
                if a.contains(q) {
                    continue;
                }
                for t in 0..tiles.len() as u16 {
                    let single = translate(&Assembly::singleton(t), Offset::new(q.x, q.y)).unwrap();
                    if interface_strength(&a, &single, tiles).unwrap() >= tau_v.get() as u64 {
                        sites.push((q, t));
                    }
                }
            }
        }
        if sites.is_empty() {
            break 'grow;
        }
        let (q, t) = sites[rng.random_range(0..sites.len())];
        let single = translate(&Assembly::singleton(t), Offset::new(q.x, q.y)).unwrap();
        a = union_disjoint(&a, &single).unwrap();
    }
    debug_assert!(is_stable(&a, tiles, tau_v));
    a
}

/// Brute-force global min cut: enumerate every bipartition of the binding
/// graph's vertices. Independent of the production Stoer–Wagner path.
fn brute_force_min_cut(a: &Assembly, tiles: &TileSet) -> u64 {
    let g = binding_graph(a, tiles);
    let n = g.vertex_count();
    if n <= 1 {
        return u64::MAX;
    }
    assert!(n <= 20);
    let mut best = u64::MAX;
    for mask in 1..(1u32 << (n - 1)) {
        let mut weight = 0u64;
        for &(u, v, w) in g.edges() {
            let su = (mask >> u) & 1;
            let sv = (mask >> v) & 1;
            if su != sv {
                weight += w as u64;
            }
        }
        best = best.min(weight);
    }
    best
}

proptest! {
    #[test]
    fn canonicalize_collapses_translation_classes(
        (_, a) in arb_system(),
        dx in -1000i32..1000,
        dy in -1000i32..1000,
    ) {
        let u = Offset::new(dx, dy);
        let b = translate(&a, u).unwrap();
        let (ca, _) = canonicalize(&a).unwrap();
        let (cb, _) = canonicalize(&b).unwrap();
        prop_assert_eq!(&ca, &cb);
        // Idempotence and size preservation.
        let (cc, off) = canonicalize(&ca).unwrap();
        prop_assert_eq!(&cc, &ca);
        prop_assert_eq!(off, Offset::new(0, 0));
        prop_assert_eq!(a.len(), b.len());
    }

    #[test]
    fn stability_matches_brute_force_min_cut((ts, a) in arb_system()) {
        let oracle = brute_force_min_cut(&a, &ts);
        for t in 1..=3u32 {
            prop_assert_eq!(
                is_stable(&a, &ts, tau(t)),
                oracle >= t as u64,
                "mismatch at tau={} (oracle {})", t, oracle
            );
        }
    }

    #[test]
    fn stability_is_translation_invariant(
        (ts, a) in arb_system(),
        dx in -50i32..50,
        dy in -50i32..50,
    ) {
        let b = translate(&a, Offset::new(dx, dy)).unwrap();
        for t in 1..=3u32 {
            prop_assert_eq!(is_stable(&a, &ts, tau(t)), is_stable(&b, &ts, tau(t)));
        }
    }

    #[test]
    fn stability_is_monotone_in_temperature((ts, a) in arb_system()) {
        for t in 1..=3u32 {
            if is_stable(&a, &ts, tau(t + 1)) {
                prop_assert!(is_stable(&a, &ts, tau(t)));
            }
        }
    }

    #[test]
    fn binding_graph_weights_match_both_sides((ts, a) in arb_system()) {
        let g = binding_graph(&a, &ts);
        for &(p, t) in a.cells() {
            for dir in [Direction::North, Direction::East] {
                let Some(q) = p.step(dir) else { continue };
                let Some(u) = a.tile_at(q) else { continue };
                let expect = ts.bond_strength(t, dir, u);
                let back = ts.bond_strength(u, dir.opposite(), t);
                prop_assert_eq!(expect, back);
                match g.edge_between(p, q) {
                    Some(w) => prop_assert_eq!(w, expect),
                    None => prop_assert_eq!(expect, 0),
                }
            }
        }
    }

    #[test]
    fn union_stability_lemma(seed in any::<u64>(), t in 1u32..=3) {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let tau_v = tau(t);
        let ts = random_tileset(&mut rng);
        let a = random_stable_assembly(&mut rng, &ts, tau_v, 6);
        let bc = random_stable_assembly(&mut rng, &ts, tau_v, 6);
        // Place b near a, rejecting overlaps; adjacency is common, so
        // interfaces of every weight occur.
        for _ in 0..40 {
            let off = Offset::new(rng.random_range(-8..8), rng.random_range(-8..8));
            let b = translate(&bc, off).unwrap();
            let Ok(u) = union_disjoint(&a, &b) else { continue };
            prop_assert_eq!(
                stable_union(&a, &b, &ts, tau_v).unwrap(),
                is_stable(&u, &ts, tau_v)
            );
        }
    }

    #[test]
    fn combinations_match_window_oracle(seed in any::<u64>(), t in 1u32..=2) {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let tau_v = tau(t);
        let ts = random_tileset(&mut rng);
        let a = random_stable_assembly(&mut rng, &ts, tau_v, 6);
        let b = random_stable_assembly(&mut rng, &ts, tau_v, 6);
        let sa = Supertile::from_assembly(&a).unwrap();
        let sb = Supertile::from_assembly(&b).unwrap();
        let fast = combinations(&sa, &sb, &ts, tau_v);
        let slow = combinations_by_window_scan(&sa, &sb, &ts, tau_v);
        let fr: Vec<_> = fast.iter().map(|x| x.result.clone()).collect();
        let sr: Vec<_> = slow.iter().map(|x| x.result.clone()).collect();
        prop_assert_eq!(fr, sr);
        for (f, s) in fast.iter().zip(&slow) {
            let mut fw: Vec<Offset> = f.witnesses.iter().map(|&(o, _)| o).collect();
            let mut sw: Vec<Offset> = s.witnesses.iter().map(|&(o, _)| o).collect();
            fw.sort();
            sw.sort();
            prop_assert_eq!(fw, sw);
        }
        // Soundness: results are stable by the min-cut definition.
        for at in &fast {
            prop_assert!(is_stable(at.result.assembly(), &ts, tau_v));
        }
    }

    #[test]
    fn parser_never_panics(text in ".{0,200}") {
        // Malformed input must come back as a positioned error, never a panic.
        if let Err(e) = tdsl::parse_tileset(&text) {
            prop_assert!(e.line >= 1 && e.column >= 1);
        }
        let ts = TileSet::new(vec![TileType::new("a")]).unwrap();
        if let Err(e) = tdsl::parse_assembly(&text, &ts) {
            prop_assert!(e.line >= 1 && e.column >= 1);
        }
    }

    #[test]
    fn tileset_round_trip(ts in arb_tileset()) {
        let text = tdsl::serialize_tileset(&ts, tau(2)).unwrap();
        let (back, t) = tdsl::parse_tileset(&text).unwrap();
        prop_assert_eq!(back.tiles(), ts.tiles());
        prop_assert_eq!(t, tau(2));
    }

    #[test]
    fn assembly_round_trip((ts, a) in arb_system(), dx in -999i32..999, dy in -999i32..999) {
        let moved = translate(&a, Offset::new(dx, dy)).unwrap();
        let text = tdsl::serialize_assembly(&moved, &ts);
        let back = tdsl::parse_assembly(&text, &ts).unwrap();
        prop_assert_eq!(back, moved);
    }
}

/// Permuting a tile's glue map while keeping the direction keys fixed is a
/// different tile: binding consults absolute directions only, and no code
/// path ever rotates the map.
#[test]
fn glue_lookup_is_by_absolute_direction() {
    let straight = TileSet::new(vec![
        TileType::new("a").with_glue(Direction::East, "g", 2),
        TileType::new("b").with_glue(Direction::West, "g", 2),
    ])
    .unwrap();
    let rotated = TileSet::new(vec![
        TileType::new("a").with_glue(Direction::North, "g", 2),
        TileType::new("b").with_glue(Direction::West, "g", 2),
    ])
    .unwrap();
    let row = Assembly::new(vec![(Point::new(0, 0), 0), (Point::new(1, 0), 1)]).unwrap();
    assert!(is_stable(&row, &straight, tau(2)));
    assert!(!is_stable(&row, &rotated, tau(2)));
}
