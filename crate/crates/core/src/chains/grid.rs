//! The cubical complex of the box [-R, R]^m in ℤ^m, plus the cone filling
//! used as an upper-bound construction and LP warm start.

use serde::Serialize;
use std::collections::BTreeMap;

use super::{CellKind, Chain, ChainComplex, ChainError, ComplexKind, DimData};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub dim: usize,
    pub radius: i64,
    /// Cells are built for dimensions 0..=top_dim.
    pub top_dim: usize,
    /// Construction refuses to build more cells than this.
    pub cell_cap: usize,
}

impl GridSpec {
    pub fn new(dim: usize, radius: i64, top_dim: usize) -> Self {
        GridSpec { dim, radius, top_dim, cell_cap: 1_000_000 }
    }
}

/// Enumerate the subsets of {0..m-1} of size k in lexicographic order.
fn subsets(m: usize, k: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(start: usize, m: usize, k: usize, current: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..m {
            current.push(i as u8);
            rec(i + 1, m, k, current, out);
            current.pop();
        }
    }
    rec(0, m, k, &mut current, &mut out);
    out
}

/// Build the cubical chain complex of the box [-R, R]^m with cells up to
/// dimension `top_dim`. Boundaries carry the standard alternating signs;
/// ∂∘∂ = 0 is verified before returning.
pub fn build_grid_complex(spec: &GridSpec) -> Result<ChainComplex, ChainError> {
    assert!(spec.radius >= 1 && spec.dim >= 1 && spec.top_dim <= spec.dim);
    let m = spec.dim;
    let r = spec.radius;

    // Cell-count estimate up front so the cap fails fast.
    let mut estimate: usize = 0;
    for k in 0..=spec.top_dim {
        let per_dir = (2 * r) as usize;
        let per_fixed = (2 * r + 1) as usize;
        let combos = subsets(m, k).len();
        estimate = estimate.saturating_add(
            combos
                .saturating_mul(per_dir.pow(k as u32))
                .saturating_mul(per_fixed.pow((m - k) as u32)),
        );
    }
    if estimate > spec.cell_cap {
        return Err(ChainError::CapExceeded(estimate, spec.cell_cap));
    }

    let mut dims: Vec<DimData> = (0..=spec.top_dim).map(|_| DimData::default()).collect();

    for k in 0..=spec.top_dim {
        for dirs in subsets(m, k) {
            // Iterate base points lexicographically.
            let mut coords = vec![-r; m];
            loop {
                let in_range = coords
                    .iter()
                    .enumerate()
                    .all(|(i, &c)| {
                        if dirs.contains(&(i as u8)) {
                            c < r
                        } else {
                            c <= r
                        }
                    });
                if in_range {
                    let cell = CellKind::Cube { base: coords.clone(), dirs: dirs.clone() };
                    let id = dims[k].push(cell);
                    if k > 0 {
                        let bd = cube_boundary(&coords, &dirs, &dims[k - 1]);
                        dims[k].boundary[id] = bd;
                    }
                }
                // Advance the odometer.
                let mut i = m;
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    coords[i] += 1;
                    if coords[i] <= r {
                        break;
                    }
                    coords[i] = -r;
                    if i == 0 {
                        i = usize::MAX;
                        break;
                    }
                }
                if i == usize::MAX {
                    break;
                }
            }
        }
    }

    let complex = ChainComplex { kind: ComplexKind::Grid(spec.clone()), dims };
    assert!(
        complex.verify_boundary_squares_to_zero(),
        "grid boundary maps do not square to zero"
    );
    Ok(complex)
}

/// ∂(cube at base with dirs d_1<…<d_k) = Σ_t (-1)^{t-1} (top_t - bottom_t).
fn cube_boundary(base: &[i64], dirs: &[u8], lower: &DimData) -> Vec<(usize, i64)> {
    let mut out = Vec::new();
    for (t, &d) in dirs.iter().enumerate() {
        let sign = if t % 2 == 0 { 1 } else { -1 };
        let rest: Vec<u8> = dirs.iter().copied().filter(|&x| x != d).collect();
        let mut top_base = base.to_vec();
        top_base[d as usize] += 1;
        let top = CellKind::Cube { base: top_base, dirs: rest.clone() };
        let bottom = CellKind::Cube { base: base.to_vec(), dirs: rest };
        let top_id = lower.index[&top];
        let bottom_id = lower.index[&bottom];
        out.push((top_id, sign));
        out.push((bottom_id, -sign));
    }
    // Merge duplicates (cannot occur for cubes, but keep the invariant).
    let mut merged: BTreeMap<usize, i64> = BTreeMap::new();
    for (c, v) in out {
        *merged.entry(c).or_insert(0) += v;
    }
    merged.into_iter().filter(|&(_, v)| v != 0).collect()
}

/// A filling of a 1-cycle in the grid by the iterated cone construction:
/// direction by direction, edges are slid to the cycle's bounding-box face
/// by attaching squares; what remains is a 1-cycle on a line, which is
/// empty. The result is a valid (not necessarily minimal) filling that
/// stays inside the bounding box of the input cycle.
pub fn cone_filling(complex: &ChainComplex, z: &Chain) -> Result<Chain, ChainError> {
    let ComplexKind::Grid(spec) = &complex.kind else {
        return Err(ChainError::Unsupported("cone filling needs a grid".into()));
    };
    assert_eq!(z.dim, 1);
    let m = spec.dim;
    // Work on coordinates, not ids, then map back at the end.
    // edges: map (base, axis) -> coeff.
    let mut edges: BTreeMap<(Vec<i64>, usize), i64> = BTreeMap::new();
    for (id, coeff) in z.iter() {
        let CellKind::Cube { base, dirs } = complex.cell(1, id) else {
            unreachable!()
        };
        debug_assert_eq!(dirs.len(), 1);
        *edges.entry((base.clone(), dirs[0] as usize)).or_insert(0) += coeff;
    }
    // Bounding-box minima per axis (slide targets).
    let mut mins = vec![i64::MAX; m];
    for (base, _) in edges.keys() {
        for (i, &c) in base.iter().enumerate() {
            mins[i] = mins[i].min(c);
        }
    }
    for v in mins.iter_mut() {
        if *v == i64::MAX {
            *v = 0;
        }
    }

    let mut squares: BTreeMap<(Vec<i64>, usize, usize), i64> = BTreeMap::new(); // (base, d1<d2) -> coeff
    for d in (1..m).rev() {
        let target = mins[d];
        let current: Vec<((Vec<i64>, usize), i64)> =
            edges.iter().map(|(k, &v)| (k.clone(), v)).collect();
        for ((base, axis), coeff) in current {
            if coeff == 0 || axis == d {
                continue;
            }
            let a = base[d];
            if a == target {
                continue;
            }
            // Slide this edge from coordinate a to `target` along axis d,
            // attaching the prism squares between; signs derived from the
            // cube boundary convention.
            let j = axis;
            let (lo, hi, dir_sign) = if a > target { (target, a, 1) } else { (a, target, -1) };
            for s in lo..hi {
                let mut sq_base = base.clone();
                sq_base[d] = s;
                let (d1, d2) = if j < d { (j, d) } else { (d, j) };
                // From the boundary formula: sliding j-edges along d uses
                // -Q when j < d and +Q when j > d (for downward slides).
                let orient = if j < d { -1 } else { 1 };
                *squares.entry((sq_base, d1, d2)).or_insert(0) +=
                    coeff * orient * dir_sign;
            }
            // Replace the edge by its projection.
            let mut new_base = base.clone();
            new_base[d] = target;
            *edges.entry((base, axis)).or_insert(0) -= coeff;
            *edges.entry((new_base, axis)).or_insert(0) += coeff;
        }
        edges.retain(|_, v| *v != 0);
        // Kill the direction-d edges: after sliding, they must cancel once
        // the cycle is projected; the telescoping happens via their own
        // slide-to-target with zero-width prisms. Project them directly:
        let current: Vec<((Vec<i64>, usize), i64)> =
            edges.iter().map(|(k, &v)| (k.clone(), v)).collect();
        for ((base, axis), coeff) in current {
            if axis != d || coeff == 0 {
                continue;
            }
            // A d-edge from coordinate a to a+1 projects to a vertex; its
            // contribution is absorbed by the telescoping of the vertical
            // paths, i.e. it simply vanishes from the projected cycle.
            *edges.entry((base, axis)).or_insert(0) -= coeff;
        }
        edges.retain(|_, v| *v != 0);
    }
    // After killing directions m-1..1 the rest must be a 1-cycle on the
    // x_0 line, which is necessarily zero.
    debug_assert!(
        edges.values().all(|&v| v == 0),
        "cone projection left a nonzero line cycle"
    );

    let mut filling = Chain::zero(2);
    for ((base, d1, d2), coeff) in squares {
        if coeff == 0 {
            continue;
        }
        let cell = CellKind::Cube { base, dirs: vec![d1 as u8, d2 as u8] };
        let id = complex
            .cell_id(2, &cell)
            .ok_or(ChainError::Unsupported("cone filling leaves the box".into()))?;
        filling.add(id, coeff);
    }
    Ok(filling)
}

/// The unique filling of a 1-cycle in a 2-dimensional grid complex
/// (contractible, no 2-cycles), computed by integrating winding numbers.
/// Verified against ∂u = z before returning.
pub fn grid2_unique_filling(complex: &ChainComplex, z: &Chain) -> Result<Chain, ChainError> {
    let ComplexKind::Grid(spec) = &complex.kind else {
        return Err(ChainError::Unsupported("winding filling needs a grid".into()));
    };
    if spec.dim != 2 {
        return Err(ChainError::Unsupported(
            "winding filling is specific to m = 2".into(),
        ));
    }
    assert_eq!(z.dim, 1);
    let r = spec.radius;
    // w(a, b) = w(a-1, b) - z(vertical edge at (a, b)); w vanishes outside.
    let mut filling = Chain::zero(2);
    for b in -r..r {
        let mut w: i64 = 0;
        for a in -r..=r {
            let edge = CellKind::Cube { base: vec![a, b], dirs: vec![1] };
            let ze = complex.cell_id(1, &edge).map_or(0, |id| z.coeff(id));
            w -= ze;
            if a < r && w != 0 {
                let sq = CellKind::Cube { base: vec![a, b], dirs: vec![0, 1] };
                let id = complex
                    .cell_id(2, &sq)
                    .ok_or(ChainError::Unsupported("cycle winds outside the box".into()))?;
                filling.add(id, w);
            }
        }
        if w != 0 {
            return Err(ChainError::Unsupported(
                "cycle is not fillable inside the box".into(),
            ));
        }
    }
    let bd = complex.boundary(&filling)?;
    let mut check = bd;
    check.sub_chain(z);
    if !check.is_zero() {
        return Err(ChainError::Unsupported(
            "winding integration does not close; input is not a cycle".into(),
        ));
    }
    Ok(filling)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::{commutator_word, word_to_cycle, Letter, Position};

    #[test]
    fn grid_cell_counts_m2() {
        let c = build_grid_complex(&GridSpec::new(2, 1, 2)).unwrap();
        assert_eq!(c.cell_count(0), 9);
        assert_eq!(c.cell_count(1), 12);
        assert_eq!(c.cell_count(2), 4);
    }

    #[test]
    fn grid_cell_counts_m3() {
        let c = build_grid_complex(&GridSpec::new(3, 1, 3)).unwrap();
        assert_eq!(c.cell_count(0), 27);
        assert_eq!(c.cell_count(1), 54);
        assert_eq!(c.cell_count(2), 36);
        assert_eq!(c.cell_count(3), 8);
    }

    #[test]
    fn grid_path_m1() {
        let c = build_grid_complex(&GridSpec::new(1, 2, 1)).unwrap();
        assert_eq!(c.cell_count(0), 5);
        assert_eq!(c.cell_count(1), 4);
    }

    #[test]
    fn cap_is_enforced() {
        let mut spec = GridSpec::new(3, 40, 3);
        spec.cell_cap = 1000;
        assert!(matches!(
            build_grid_complex(&spec),
            Err(ChainError::CapExceeded(_, _))
        ));
    }

    #[test]
    fn single_square_boundary_is_four_edges() {
        let c = build_grid_complex(&GridSpec::new(2, 1, 2)).unwrap();
        let sq = c
            .cell_id(2, &CellKind::Cube { base: vec![0, 0], dirs: vec![0, 1] })
            .unwrap();
        let mut chain = Chain::zero(2);
        chain.add(sq, 1);
        let bd = c.boundary(&chain).unwrap();
        assert_eq!(bd.support_len(), 4);
        assert_eq!(bd.volume(), 4);
        // And ∂∂ = 0.
        assert!(c.boundary(&bd).unwrap().is_zero());
    }

    #[test]
    fn adjacent_squares_share_edge_cancellation() {
        let c = build_grid_complex(&GridSpec::new(2, 2, 2)).unwrap();
        let mut chain = Chain::zero(2);
        for base in [vec![0, 0], vec![1, 0]] {
            let id = c
                .cell_id(2, &CellKind::Cube { base, dirs: vec![0, 1] })
                .unwrap();
            chain.add(id, 1);
        }
        let bd = c.boundary(&chain).unwrap();
        // 2x1 rectangle: 6 boundary edges after the shared edge cancels.
        assert_eq!(bd.volume(), 6);
    }

    #[test]
    fn word_to_cycle_unit_square() {
        let c = build_grid_complex(&GridSpec::new(2, 1, 2)).unwrap();
        let w = commutator_word(&[1, 0], &[0, 1]);
        let z = word_to_cycle(&w, &c, &Position::Grid(vec![0, 0])).unwrap();
        // Must equal the boundary of the square at (0,0) up to sign.
        let sq = c
            .cell_id(2, &CellKind::Cube { base: vec![0, 0], dirs: vec![0, 1] })
            .unwrap();
        let mut chain = Chain::zero(2);
        chain.add(sq, 1);
        let bd = c.boundary(&chain).unwrap();
        let mut diff = bd.clone();
        diff.sub_chain(&z);
        let mut sum = bd;
        sum.add_chain(&z);
        assert!(diff.is_zero() || sum.is_zero());
    }

    #[test]
    fn word_to_cycle_cancellation_and_errors() {
        let c = build_grid_complex(&GridSpec::new(2, 1, 2)).unwrap();
        // Empty word → zero chain.
        let z = word_to_cycle(&[], &c, &Position::Grid(vec![0, 0])).unwrap();
        assert!(z.is_zero());
        // x x^{-1} → zero chain by cancellation.
        let z = word_to_cycle(
            &[Letter::x(0), Letter::x_inv(0)],
            &c,
            &Position::Grid(vec![0, 0]),
        )
        .unwrap();
        assert!(z.is_zero());
        // Word leaving the box errors.
        let w: Vec<Letter> = (0..5).map(|_| Letter::x(0)).collect();
        assert!(matches!(
            word_to_cycle(&w, &c, &Position::Grid(vec![0, 0])),
            Err(ChainError::WordLeavesComplex(_))
        ));
        // Non-closing word errors.
        assert_eq!(
            word_to_cycle(&[Letter::x(0)], &c, &Position::Grid(vec![0, 0])),
            Err(ChainError::WordDoesNotClose)
        );
    }

    #[test]
    fn cone_filling_fills_box_boundaries() {
        let c = build_grid_complex(&GridSpec::new(2, 3, 2)).unwrap();
        for (a, b) in [(1i64, 1i64), (2, 3), (3, 2)] {
            let word = commutator_word(&[a, 0], &[0, b]);
            let z = word_to_cycle(&word, &c, &Position::Grid(vec![0, 0])).unwrap();
            let u = cone_filling(&c, &z).unwrap();
            let mut check = c.boundary(&u).unwrap();
            check.sub_chain(&z);
            assert!(check.is_zero(), "cone filling of {a}x{b} box failed");
            assert_eq!(u.volume(), (a * b) as u64);
        }
    }

    #[test]
    fn cone_filling_m3_commutators() {
        let c = build_grid_complex(&GridSpec::new(3, 3, 2)).unwrap();
        // Commutator of (1,1,0) and (0,1,1): generic non-planar loop.
        let word = commutator_word(&[1, 1, 0], &[0, 1, 1]);
        let z = word_to_cycle(&word, &c, &Position::Grid(vec![0, 0, 0])).unwrap();
        let u = cone_filling(&c, &z).unwrap();
        let mut check = c.boundary(&u).unwrap();
        check.sub_chain(&z);
        assert!(check.is_zero());
    }

    #[test]
    fn winding_filling_matches_cone_on_rectangles() {
        let c = build_grid_complex(&GridSpec::new(2, 4, 2)).unwrap();
        let word = commutator_word(&[3, 0], &[0, 4]);
        let z = word_to_cycle(&word, &c, &Position::Grid(vec![0, 0])).unwrap();
        let w = grid2_unique_filling(&c, &z).unwrap();
        assert_eq!(w.volume(), 12);
        let u = cone_filling(&c, &z).unwrap();
        assert_eq!(w, u); // fillings are unique in the 2d grid
    }
}
