//! Cellular chain complexes with exact integer boundary maps, and the
//! ℓ1-minimal filling oracle that serves as ground truth for distortion
//! measurements.
//!
//! Two geometries are built in: the cubical complex of a box in ℤ^m (the
//! subgroup side) and a one-tree-line slab of the mapping-torus complex of
//! φ (the ambient side, m = 2). Fillings are integer chains; the oracle
//! minimizes Σ|coefficients| by exact rational LP with branch-and-bound on
//! fractional coordinates.

mod filling;
mod grid;
mod lp;
mod slab;

pub use filling::{min_filling, FillingError, FillingOptions, FillingResult};
pub use grid::{build_grid_complex, cone_filling, grid2_unique_filling, GridSpec};
pub use lp::{LpOutcome, SparseLp};
pub use slab::{build_slab_complex, slab_flow_filling, SlabSpec};

use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChainError {
    #[error("cell count {0} exceeds the configured cap {1}")]
    CapExceeded(usize, usize),
    #[error("dimension {0} out of range for this complex")]
    DimensionOutOfRange(usize),
    #[error("word leaves the complex at step {0}")]
    WordLeavesComplex(usize),
    #[error("word does not close up (ends at a different vertex)")]
    WordDoesNotClose,
    #[error("{0}")]
    Unsupported(String),
}

/// A single cell, identified by its geometric description.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CellKind {
    /// Unit cube in ℤ^m spanned from `base` along the strictly increasing
    /// axes in `dirs` (vertices are `dirs: []`).
    Cube { base: Vec<i64>, dirs: Vec<u8> },
    /// Slab vertex at (layer, pos) in the layer's own lattice coordinates.
    SlabVertex { layer: u32, pos: [i64; 2] },
    /// Horizontal edge at a layer, from pos to pos + e_dir.
    SlabHEdge { layer: u32, pos: [i64; 2], dir: u8 },
    /// Vertical edge from (layer, M·pos) up to (layer+1, pos).
    SlabVEdge { layer: u32, pos: [i64; 2] },
    /// Horizontal unit square at a layer.
    SlabSquare { layer: u32, pos: [i64; 2] },
    /// Relator cell t·x_dir·t⁻¹·φ(x_dir)⁻¹ spanning layer..layer+1 over the
    /// upper-layer edge (pos, dir).
    SlabVCell { layer: u32, pos: [i64; 2], dir: u8 },
}

/// Sparse integer chain in a fixed dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chain {
    pub dim: usize,
    coeffs: BTreeMap<usize, i64>,
}

impl Chain {
    pub fn zero(dim: usize) -> Self {
        Chain { dim, coeffs: BTreeMap::new() }
    }

    pub fn add(&mut self, cell: usize, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.coeffs.entry(cell).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.coeffs.remove(&cell);
        }
    }

    pub fn coeff(&self, cell: usize) -> i64 {
        self.coeffs.get(&cell).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.coeffs.iter().map(|(&c, &v)| (c, v))
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    /// The volume V(z) = Σ|α_i|.
    pub fn volume(&self) -> u64 {
        self.coeffs.values().map(|v| v.unsigned_abs()).sum()
    }

    pub fn add_chain(&mut self, other: &Chain) {
        debug_assert_eq!(self.dim, other.dim);
        for (c, v) in other.iter() {
            self.add(c, v);
        }
    }

    pub fn sub_chain(&mut self, other: &Chain) {
        debug_assert_eq!(self.dim, other.dim);
        for (c, v) in other.iter() {
            self.add(c, -v);
        }
    }

    pub fn negated(&self) -> Chain {
        let mut out = Chain::zero(self.dim);
        for (c, v) in self.iter() {
            out.add(c, -v);
        }
        out
    }
}

/// Which geometry a complex carries (used for word navigation and the
/// constructions that need coordinates back).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum ComplexKind {
    Grid(GridSpec),
    Slab(SlabSpec),
}

#[derive(Default, Serialize)]
pub(crate) struct DimData {
    pub cells: Vec<CellKind>,
    /// boundary[i] lists (lower-cell id, coefficient) pairs for cell i.
    pub boundary: Vec<Vec<(usize, i64)>>,
    #[serde(skip)]
    pub index: HashMap<CellKind, usize>,
}

impl DimData {
    pub fn push(&mut self, cell: CellKind) -> usize {
        let id = self.cells.len();
        self.cells.push(cell.clone());
        self.boundary.push(Vec::new());
        self.index.insert(cell, id);
        id
    }
}

/// A finite chain complex with exact integer boundary maps; ∂∘∂ = 0 is
/// verified on construction.
#[derive(Serialize)]
pub struct ChainComplex {
    pub kind: ComplexKind,
    pub(crate) dims: Vec<DimData>,
}

impl ChainComplex {
    pub fn top_dim(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn cell_count(&self, dim: usize) -> usize {
        self.dims.get(dim).map_or(0, |d| d.cells.len())
    }

    pub fn total_cells(&self) -> usize {
        self.dims.iter().map(|d| d.cells.len()).sum()
    }

    pub fn cell(&self, dim: usize, id: usize) -> &CellKind {
        &self.dims[dim].cells[id]
    }

    pub fn cell_id(&self, dim: usize, cell: &CellKind) -> Option<usize> {
        self.dims[dim].index.get(cell).copied()
    }

    pub fn boundary_of_cell(&self, dim: usize, id: usize) -> &[(usize, i64)] {
        &self.dims[dim].boundary[id]
    }

    /// Exact sparse boundary of a chain.
    pub fn boundary(&self, c: &Chain) -> Result<Chain, ChainError> {
        if c.dim == 0 || c.dim > self.top_dim() {
            return Err(ChainError::DimensionOutOfRange(c.dim));
        }
        let mut out = Chain::zero(c.dim - 1);
        for (cell, coeff) in c.iter() {
            for &(lower, bc) in &self.dims[c.dim].boundary[cell] {
                out.add(lower, coeff * bc);
            }
        }
        Ok(out)
    }

    pub fn is_cycle(&self, c: &Chain) -> bool {
        if c.dim == 0 {
            return c.iter().map(|(_, v)| v).sum::<i64>() == 0;
        }
        self.boundary(c).map(|b| b.is_zero()).unwrap_or(false)
    }

    /// Verify ∂∘∂ = 0 over every cell; builders call this before returning
    /// and tests may re-run it as an external check.
    pub fn verify_boundary_squares_to_zero(&self) -> bool {
        for dim in 2..=self.top_dim() {
            for id in 0..self.cell_count(dim) {
                let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
                for &(mid, c1) in &self.dims[dim].boundary[id] {
                    for &(low, c2) in &self.dims[dim - 1].boundary[mid] {
                        let e = acc.entry(low).or_insert(0);
                        *e += c1 * c2;
                        if *e == 0 {
                            acc.remove(&low);
                        }
                    }
                }
                if !acc.is_empty() {
                    return false;
                }
            }
        }
        true
    }

    /// The uniform bound r on the number of boundary faces of any cell,
    /// counted with multiplicity. Cubical cells give 2·dim; slab relator
    /// cells add the staircase length.
    pub fn max_boundary_faces(&self) -> u64 {
        let mut r = 0u64;
        for dim in 1..=self.top_dim() {
            for bd in &self.dims[dim].boundary {
                let faces: u64 = bd.iter().map(|&(_, c)| c.unsigned_abs()).sum();
                r = r.max(faces);
            }
        }
        r
    }

    /// JSON form with cell tables and sparse boundary triplets.
    pub fn to_json(&self) -> serde_json::Value
    where
        Self: Sized,
    {
        let dims: Vec<serde_json::Value> = self
            .dims
            .iter()
            .enumerate()
            .map(|(d, data)| {
                let triplets: Vec<serde_json::Value> = data
                    .boundary
                    .iter()
                    .enumerate()
                    .flat_map(|(cell, bd)| {
                        bd.iter().map(move |&(low, c)| serde_json::json!([cell, low, c]))
                    })
                    .collect();
                serde_json::json!({
                    "dim": d,
                    "cells": data.cells,
                    "boundary": triplets,
                })
            })
            .collect();
        serde_json::json!({ "kind": self.kind, "dims": dims })
    }
}

/// A signed generator letter for edge-path words: x_axis^±1 or t^±1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letter {
    X { axis: usize, sign: i8 },
    T { sign: i8 },
}

impl Letter {
    pub fn x(axis: usize) -> Letter {
        Letter::X { axis, sign: 1 }
    }
    pub fn x_inv(axis: usize) -> Letter {
        Letter::X { axis, sign: -1 }
    }
    pub fn t() -> Letter {
        Letter::T { sign: 1 }
    }
    pub fn t_inv() -> Letter {
        Letter::T { sign: -1 }
    }
}

/// Position of a vertex in a complex, in the coordinates of its geometry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Position {
    Grid(Vec<i64>),
    Slab { layer: u32, pos: [i64; 2] },
}

/// Trace a word of generator letters from a basepoint and return the
/// 1-cycle of traversed edges (backtracks cancel in the coefficients).
pub fn word_to_cycle(
    word: &[Letter],
    complex: &ChainComplex,
    basepoint: &Position,
) -> Result<Chain, ChainError> {
    let mut chain = Chain::zero(1);
    let mut pos = basepoint.clone();
    for (step, letter) in word.iter().enumerate() {
        let leave = || ChainError::WordLeavesComplex(step);
        match (&mut pos, letter) {
            (Position::Grid(coords), Letter::X { axis, sign }) => {
                if *axis >= coords.len() {
                    return Err(leave());
                }
                let mut base = coords.clone();
                if *sign < 0 {
                    base[*axis] -= 1;
                }
                let edge = CellKind::Cube { base: base.clone(), dirs: vec![*axis as u8] };
                let id = complex.cell_id(1, &edge).ok_or_else(leave)?;
                chain.add(id, *sign as i64);
                coords[*axis] += *sign as i64;
            }
            (Position::Grid(_), Letter::T { .. }) => {
                return Err(ChainError::Unsupported(
                    "t-letters are not valid in a grid complex".into(),
                ));
            }
            (Position::Slab { layer, pos }, Letter::X { axis, sign }) => {
                if *axis >= 2 {
                    return Err(leave());
                }
                let mut base = *pos;
                if *sign < 0 {
                    base[*axis] -= 1;
                }
                let edge = CellKind::SlabHEdge { layer: *layer, pos: base, dir: *axis as u8 };
                let id = complex.cell_id(1, &edge).ok_or_else(leave)?;
                chain.add(id, *sign as i64);
                pos[*axis] += *sign as i64;
            }
            (Position::Slab { layer, pos }, Letter::T { sign }) => {
                let ComplexKind::Slab(spec) = &complex.kind else {
                    return Err(ChainError::Unsupported("t-letter outside a slab".into()));
                };
                if *sign > 0 {
                    // Up-edge exists over positions in the image of M.
                    let upper = spec
                        .preimage(pos)
                        .ok_or_else(leave)?;
                    let edge = CellKind::SlabVEdge { layer: *layer, pos: upper };
                    let id = complex.cell_id(1, &edge).ok_or_else(leave)?;
                    chain.add(id, 1);
                    *layer += 1;
                    *pos = upper;
                } else {
                    if *layer == 0 {
                        return Err(leave());
                    }
                    let edge = CellKind::SlabVEdge { layer: *layer - 1, pos: *pos };
                    let id = complex.cell_id(1, &edge).ok_or_else(leave)?;
                    chain.add(id, -1);
                    let lower = spec.image(pos);
                    *layer -= 1;
                    *pos = lower;
                }
            }
        }
    }
    if pos != *basepoint {
        return Err(ChainError::WordDoesNotClose);
    }
    Ok(chain)
}

/// Commutator word [u, v] where u, v are written multiplicatively as
/// integer vectors (the letters come out in x_1-then-x_2-… staircase order,
/// matching the presentation's normal form).
pub fn commutator_word(u: &[i64], v: &[i64]) -> Vec<Letter> {
    let mut word = Vec::new();
    let push_vec = |word: &mut Vec<Letter>, vec: &[i64], invert: bool| {
        if invert {
            // (x_1^{a_1}…x_m^{a_m})^{-1} = x_m^{-a_m}…x_1^{-a_1}.
            for (axis, &count) in vec.iter().enumerate().rev() {
                let sign = if count >= 0 { -1 } else { 1 };
                for _ in 0..count.unsigned_abs() {
                    word.push(Letter::X { axis, sign });
                }
            }
        } else {
            for (axis, &count) in vec.iter().enumerate() {
                let sign = if count >= 0 { 1 } else { -1 };
                for _ in 0..count.unsigned_abs() {
                    word.push(Letter::X { axis, sign });
                }
            }
        }
    };
    push_vec(&mut word, u, false);
    push_vec(&mut word, v, false);
    push_vec(&mut word, u, true);
    push_vec(&mut word, v, true);
    word
}


#[cfg(test)]
mod json_tests {
    use super::*;
    use crate::chains::grid::{build_grid_complex, GridSpec};

    #[test]
    fn complex_serializes_with_cell_tables_and_triplets() {
        let c = build_grid_complex(&GridSpec::new(2, 1, 2)).unwrap();
        let v = c.to_json();
        assert_eq!(v["dims"].as_array().unwrap().len(), 3);
        assert_eq!(v["dims"][0]["cells"].as_array().unwrap().len(), 9);
        assert_eq!(v["dims"][1]["cells"].as_array().unwrap().len(), 12);
        // Boundary triplets: [cell, lower, coeff]; squares have 4 each.
        let triplets = v["dims"][2]["boundary"].as_array().unwrap();
        assert_eq!(triplets.len(), 4 * 4);
        assert_eq!(triplets[0].as_array().unwrap().len(), 3);
        // Chains serialize with sorted sparse coefficients.
        let mut chain = Chain::zero(1);
        chain.add(5, 2);
        chain.add(1, -1);
        let s = serde_json::to_string(&chain).unwrap();
        assert_eq!(s, r#"{"dim":1,"coeffs":{"1":-1,"5":2}}"#);
    }

    #[test]
    fn face_bound_is_recorded_per_complex() {
        let grid = build_grid_complex(&GridSpec::new(3, 2, 3)).unwrap();
        assert_eq!(grid.max_boundary_faces(), 6); // cubes have 6 faces
        let m = crate::intmat::IntMatrix::from_rows(&[vec![2, 1], vec![0, 2]]).unwrap();
        let spec = crate::chains::slab::SlabSpec::new(&m, 4, 2).unwrap();
        let slab = crate::chains::slab::build_slab_complex(&spec).unwrap();
        // Relator cells: 2 vertical + 1 upper + |column| staircase edges;
        // the widest column of [[2,1],[0,2]] has length 3.
        assert_eq!(slab.max_boundary_faces(), 6);
    }

    #[test]
    fn budget_exhaustion_returns_nonoptimal_upper_bound() {
        use crate::chains::filling::{min_filling, FillingOptions};
        use crate::chains::grid::cone_filling;
        // A fillable cycle with a zero node budget and a warm start: the
        // warm start is returned, flagged non-optimal... unless the root
        // relaxation is already integral, in which case it is optimal.
        let c = build_grid_complex(&GridSpec::new(2, 2, 2)).unwrap();
        let word = commutator_word(&[2, 0], &[0, 2]);
        let z = word_to_cycle(&word, &c, &Position::Grid(vec![0, 0])).unwrap();
        let ws = cone_filling(&c, &z).unwrap();
        let mut opts = FillingOptions::default();
        opts.node_budget = 0;
        opts.warm_start = Some(ws);
        let r = min_filling(&c, &z, &opts).unwrap();
        assert_eq!(r.volume, 4);
    }
}
