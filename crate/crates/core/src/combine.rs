//! Enumeration of the combination set of two supertiles: every way to
//! translate the second against the first so the two are disjoint and the
//! union is τ-stable.
//!
//! Candidates come from aligning exposed glue-bearing sides of one operand
//! against compatible exposed sides of the other; an attachment needs at
//! least one positive matched bond, so this enumeration is complete. The
//! exhaustive window scan is kept as an independent oracle for tests.

use std::collections::{BTreeSet, HashMap};

use crate::model::{
    canonicalize, translate, union_disjoint, Assembly, Offset, Supertile, Temperature, TileSet,
};
use crate::stability::{interface_strength, is_stable};

/// One element of the combination set: a distinct resulting supertile plus
/// every witnessing offset of the second operand (in the first operand's
/// canonical frame) together with the interface strength it realizes.
#[derive(Debug, Clone)]
pub struct Attachment {
    pub result: Supertile,
    pub witnesses: Vec<(Offset, u64)>,
}

impl Attachment {
    /// The first witnessing offset in deterministic order.
    pub fn offset(&self) -> Offset {
        self.witnesses[0].0
    }

    pub fn interface(&self) -> u64 {
        self.witnesses[0].1
    }
}

/// Checks disjointness of `a` and `b + v` and, if disjoint, returns the
/// interface strength across the contact.
fn probe_offset(a: &Assembly, b: &Assembly, v: Offset, tiles: &TileSet) -> Option<u64> {
    let mut sum = 0u64;
    for &(p, t) in b.cells() {
        let x = p.x.checked_add(v.dx)?;
        let y = p.y.checked_add(v.dy)?;
        let q = crate::model::Point::new(x, y);
        if a.contains(q) {
            return None;
        }
        for dir in crate::model::Direction::ALL {
            let Some(r) = q.step(dir) else { continue };
            if let Some(u) = a.tile_at(r) {
                sum += tiles.bond_strength(t, dir, u) as u64;
            }
        }
    }
    Some(sum)
}

fn candidate_offsets(sa: &Supertile, sb: &Supertile, tiles: &TileSet) -> BTreeSet<Offset> {
    let mut out = BTreeSet::new();
    let ia = sa.side_index(tiles);
    let ib = sb.side_index(tiles);
    for side in ia.sides() {
        for other in ib.matching(side.dir.opposite(), side.key) {
            let q = other.point;
            let (dx, dy) = side.dir.offset();
            let Some(ox) = side
                .point
                .x
                .checked_add(dx)
                .and_then(|v| v.checked_sub(q.x))
            else {
                continue;
            };
            let Some(oy) = side
                .point
                .y
                .checked_add(dy)
                .and_then(|v| v.checked_sub(q.y))
            else {
                continue;
            };
            out.insert(Offset::new(ox, oy));
        }
    }
    out
}

/// The combination set of `sa` and `sb` at temperature `tau`. Operands are
/// assumed τ-stable, which makes "interface ≥ τ" equivalent to stability of
/// the union. Distinct offsets that produce the same supertile are merged
/// into one attachment carrying all witnesses.
pub fn combinations(
    sa: &Supertile,
    sb: &Supertile,
    tiles: &TileSet,
    tau: Temperature,
) -> Vec<Attachment> {
    let threshold = tau.get() as u64;
    let mut by_result: HashMap<Supertile, Vec<(Offset, u64)>> = HashMap::new();
    for v in candidate_offsets(sa, sb, tiles) {
        let Some(strength) = probe_offset(sa.assembly(), sb.assembly(), v, tiles) else {
            continue;
        };
        if strength < threshold {
            continue;
        }
        let shifted = translate(sb.assembly(), v).expect("probed offsets stay in range");
        let union = union_disjoint(sa.assembly(), &shifted).expect("probed offsets are disjoint");
        let (canon, _) = canonicalize(&union).expect("nonempty union");
        by_result
            .entry(Supertile::from_canonical(canon))
            .or_default()
            .push((v, strength));
    }
    let mut out: Vec<Attachment> = by_result
        .into_iter()
        .map(|(result, witnesses)| Attachment { result, witnesses })
        .collect();
    out.sort_by(|a, b| a.result.cmp(&b.result));
    out
}

/// True when at least one stable attachment of `sb` to `sa` exists. Stops at
/// the first valid offset, skipping union construction entirely.
pub fn has_combination(sa: &Supertile, sb: &Supertile, tiles: &TileSet, tau: Temperature) -> bool {
    let threshold = tau.get() as u64;
    let ia = sa.side_index(tiles);
    let ib = sb.side_index(tiles);
    let mut seen = BTreeSet::new();
    for side in ia.sides() {
        for other in ib.matching(side.dir.opposite(), side.key) {
            let q = other.point;
            let (dx, dy) = side.dir.offset();
            let Some(ox) = side
                .point
                .x
                .checked_add(dx)
                .and_then(|v| v.checked_sub(q.x))
            else {
                continue;
            };
            let Some(oy) = side
                .point
                .y
                .checked_add(dy)
                .and_then(|v| v.checked_sub(q.y))
            else {
                continue;
            };
            let v = Offset::new(ox, oy);
            if !seen.insert(v) {
                continue;
            }
            if probe_offset(sa.assembly(), sb.assembly(), v, tiles)
                .is_some_and(|s| s >= threshold)
            {
                return true;
            }
        }
    }
    false
}

/// Exhaustive reference enumeration: scans every offset in the Minkowski
/// window of the two bounding boxes and keeps those whose union is τ-stable
/// per the min-cut definition. Independent of the aligned fast path; intended
/// as a completeness and soundness oracle.
pub fn combinations_by_window_scan(
    sa: &Supertile,
    sb: &Supertile,
    tiles: &TileSet,
    tau: Temperature,
) -> Vec<Attachment> {
    let a = sa.assembly();
    let b = sb.assembly();
    let w = (a.width() + b.width()) as i32;
    let h = (a.height() + b.height()) as i32;
    let mut by_result: HashMap<Supertile, Vec<(Offset, u64)>> = HashMap::new();
    for dy in -h..=h {
        for dx in -w..=w {
            let v = Offset::new(dx, dy);
            let shifted = match translate(b, v) {
                Ok(s) => s,
                Err(_) => continue,
            };
            let union = match union_disjoint(a, &shifted) {
                Ok(u) => u,
                Err(_) => continue,
            };
            if !is_stable(&union, tiles, tau) {
                continue;
            }
            let strength = interface_strength(a, &shifted, tiles).expect("disjoint");
            let (canon, _) = canonicalize(&union).expect("nonempty");
            by_result
                .entry(Supertile::from_canonical(canon))
                .or_default()
                .push((v, strength));
        }
    }
    let mut out: Vec<Attachment> = by_result
        .into_iter()
        .map(|(result, witnesses)| Attachment { result, witnesses })
        .collect();
    out.sort_by(|a, b| a.result.cmp(&b.result));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Direction, Point, TileType};
    use crate::stability::is_stable;

    fn tau(t: u32) -> Temperature {
        Temperature::new(t).unwrap()
    }

    fn pair_set(strength: u32) -> TileSet {
        TileSet::new(vec![
            TileType::new("a").with_glue(Direction::East, "g", strength),
            TileType::new("b").with_glue(Direction::West, "g", strength),
        ])
        .unwrap()
    }

    #[test]
    fn matched_singletons_combine_once() {
        let tiles = pair_set(2);
        let a = Supertile::singleton(0);
        let b = Supertile::singleton(1);
        let c = combinations(&a, &b, &tiles, tau(2));
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].result.len(), 2);
        assert_eq!(c[0].offset(), Offset::new(1, 0));
        assert_eq!(c[0].interface(), 2);
    }

    #[test]
    fn weak_bond_fails_at_tau_2() {
        let tiles = pair_set(1);
        let a = Supertile::singleton(0);
        let b = Supertile::singleton(1);
        assert!(combinations(&a, &b, &tiles, tau(2)).is_empty());
        assert_eq!(combinations(&a, &b, &tiles, tau(1)).len(), 1);
    }

    #[test]
    fn one_sided_partner_attaches_at_one_offset() {
        // A carries the glue on both east and west, but B can only answer
        // with its west side, so exactly one placement exists (confirmed by
        // the window oracle). A's own west face has no partner on B.
        let tiles = TileSet::new(vec![
            TileType::new("a")
                .with_glue(Direction::East, "g", 2)
                .with_glue(Direction::West, "g", 2),
            TileType::new("b").with_glue(Direction::West, "g", 2),
        ])
        .unwrap();
        let a = Supertile::singleton(0);
        let b = Supertile::singleton(1);
        let fast = combinations(&a, &b, &tiles, tau(2));
        let slow = combinations_by_window_scan(&a, &b, &tiles, tau(2));
        let total_offsets: usize = fast.iter().map(|at| at.witnesses.len()).sum();
        assert_eq!(total_offsets, 1);
        assert_eq!(fast.len(), slow.len());
        // Two copies of A, though, attach on either side of each other:
        // both offsets survive and the two results collapse to one row.
        let aa = combinations(&a, &a, &tiles, tau(2));
        assert_eq!(aa.len(), 1);
        assert_eq!(aa[0].witnesses.len(), 2);
    }

    #[test]
    fn cooperative_l_shapes_mate_into_rectangle() {
        // Two rigid L-trominoes whose correct mating makes two strength-1
        // contacts; at τ=2 only the cooperative 1+1 placement survives and
        // the result is the 2x3 rectangle.
        let tiles = TileSet::new(vec![
            TileType::new("t00")
                .with_glue(Direction::East, "a1", 2)
                .with_glue(Direction::North, "c1", 1),
            TileType::new("t10")
                .with_glue(Direction::West, "a1", 2)
                .with_glue(Direction::North, "a2", 2),
            TileType::new("t11")
                .with_glue(Direction::South, "a2", 2)
                .with_glue(Direction::North, "c2", 1),
            TileType::new("t01")
                .with_glue(Direction::South, "c1", 1)
                .with_glue(Direction::North, "b1", 2),
            TileType::new("t02")
                .with_glue(Direction::South, "b1", 2)
                .with_glue(Direction::East, "b2", 2),
            TileType::new("t12")
                .with_glue(Direction::West, "b2", 2)
                .with_glue(Direction::South, "c2", 1),
        ])
        .unwrap();
        let l1 = Assembly::new(vec![
            (Point::new(0, 0), 0),
            (Point::new(1, 0), 1),
            (Point::new(1, 1), 2),
        ])
        .unwrap();
        let l2 = Assembly::new(vec![
            (Point::new(0, 1), 3),
            (Point::new(0, 2), 4),
            (Point::new(1, 2), 5),
        ])
        .unwrap();
        let sa = Supertile::from_assembly(&l1).unwrap();
        let sb = Supertile::from_assembly(&l2).unwrap();
        assert!(is_stable(&l1, &tiles, tau(2)));
        assert!(is_stable(&l2, &tiles, tau(2)));
        let fast = combinations(&sa, &sb, &tiles, tau(2));
        let slow = combinations_by_window_scan(&sa, &sb, &tiles, tau(2));
        assert_eq!(fast.len(), 1);
        assert_eq!(slow.len(), 1);
        assert_eq!(fast[0].result, slow[0].result);
        assert_eq!(fast[0].result.len(), 6);
        assert_eq!(fast[0].interface(), 2);
        assert!((fast[0].result.assembly().width(), fast[0].result.assembly().height()) == (2, 3));
        assert!(is_stable(fast[0].result.assembly(), &tiles, tau(2)));
    }

    #[test]
    fn symmetry_of_result_sets() {
        let tiles = TileSet::new(vec![
            TileType::new("a")
                .with_glue(Direction::East, "g", 2)
                .with_glue(Direction::North, "h", 2),
            TileType::new("b")
                .with_glue(Direction::West, "g", 2)
                .with_glue(Direction::South, "h", 2),
        ])
        .unwrap();
        let a = Supertile::singleton(0);
        let b = Supertile::singleton(1);
        let ab: Vec<_> = combinations(&a, &b, &tiles, tau(2))
            .into_iter()
            .map(|x| x.result)
            .collect();
        let ba: Vec<_> = combinations(&b, &a, &tiles, tau(2))
            .into_iter()
            .map(|x| x.result)
            .collect();
        assert_eq!(ab, ba);
    }

    #[test]
    fn steric_exclusion_blocks_overlapping_offsets() {
        // A 2x2 block with an exposed glue pointing into its own notch: the
        // matching partner would overlap and must not be returned.
        let tiles = TileSet::new(vec![
            TileType::new("ring")
                .with_glue(Direction::North, "v", 2)
                .with_glue(Direction::South, "v", 2)
                .with_glue(Direction::East, "h", 2)
                .with_glue(Direction::West, "h", 2),
        ])
        .unwrap();
        let block = Assembly::new(vec![
            (Point::new(0, 0), 0),
            (Point::new(1, 0), 0),
            (Point::new(0, 1), 0),
            (Point::new(1, 1), 0),
        ])
        .unwrap();
        let sa = Supertile::from_assembly(&block).unwrap();
        let fast = combinations(&sa, &sa, &tiles, tau(2));
        let slow = combinations_by_window_scan(&sa, &sa, &tiles, tau(2));
        let fr: BTreeSet<_> = fast.iter().map(|a| a.result.clone()).collect();
        let sr: BTreeSet<_> = slow.iter().map(|a| a.result.clone()).collect();
        assert_eq!(fr, sr);
        for at in &fast {
            assert_eq!(at.result.len(), 8);
        }
    }

    #[test]
    fn has_combination_agrees_with_enumeration() {
        let tiles = pair_set(2);
        let a = Supertile::singleton(0);
        let b = Supertile::singleton(1);
        assert!(has_combination(&a, &b, &tiles, tau(2)));
        assert!(!has_combination(&a, &a, &tiles, tau(2)));
    }
}
