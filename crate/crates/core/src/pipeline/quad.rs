//! Quad and warp packets flowing through the pipeline.

use crate::compositing::Rgba;

/// Screen-tile coordinate.
pub type TileId = (u16, u16);

/// A 2x2 fragment group. Fragment i covers the pixel at
/// (tile_x*tile + 2*qx + (i & 1), tile_y*tile + 2*qy + (i >> 1)).
#[derive(Debug, Clone, PartialEq)]
pub struct QuadPacket {
    pub tile: TileId,
    /// Quad position within the screen tile, in quads.
    pub qx: u8,
    pub qy: u8,
    /// Bit i set = fragment i covered by the primitive.
    pub coverage_mask: u8,
    /// Bit i set = fragment killed before shading (HET or stencil test).
    pub kill_mask: u8,
    /// Index of the source splat in the primitive set.
    pub splat: u32,
    /// Global sequence inheriting primitive submission order; strictly
    /// increasing along any single pixel's quad stream.
    pub ordinal: u64,
}

impl QuadPacket {
    pub fn pixel(&self, i: usize, screen_tile: u32) -> (u32, u32) {
        (
            self.tile.0 as u32 * screen_tile + 2 * self.qx as u32 + (i as u32 & 1),
            self.tile.1 as u32 * screen_tile + 2 * self.qy as u32 + (i as u32 >> 1),
        )
    }

    /// Covered fragments that were not killed upstream.
    pub fn live_mask(&self) -> u8 {
        self.coverage_mask & !self.kill_mask
    }
}

/// A quad after fragment shading (and possibly in-shader merging).
/// `colors[i]` is None when the fragment contributes nothing.
#[derive(Debug, Clone)]
pub struct ShadedQuad {
    pub tile: TileId,
    pub qx: u8,
    pub qy: u8,
    pub colors: [Option<Rgba>; 4],
    pub ordinal: u64,
    /// Routed to the stencil write path instead of CROP.
    pub stencil_write: bool,
}

impl ShadedQuad {
    pub fn pixel(&self, i: usize, screen_tile: u32) -> (u32, u32) {
        (
            self.tile.0 as u32 * screen_tile + 2 * self.qx as u32 + (i as u32 & 1),
            self.tile.1 as u32 * screen_tile + 2 * self.qy as u32 + (i as u32 >> 1),
        )
    }

    pub fn has_live_fragment(&self) -> bool {
        self.colors.iter().any(Option::is_some)
    }
}

/// Up to eight quads dispatched together to a shader core. Merge pairs sit
/// in adjacent slots (2n, 2n+1) with the front (smaller-ordinal) quad at the
/// even slot.
#[derive(Debug, Clone)]
pub struct WarpPacket {
    pub seq: u64,
    pub slots: Vec<QuadPacket>,
    /// Bit per slot: participates in a merge pair.
    pub merge_flags: u8,
}

pub const WARP_SLOTS: usize = 8;

impl WarpPacket {
    pub fn has_merges(&self) -> bool {
        self.merge_flags != 0
    }

    pub fn validate_pairs(&self) -> bool {
        for i in 0..self.slots.len() {
            if self.merge_flags & (1 << i) != 0 && i % 2 == 1 {
                let front = &self.slots[i - 1];
                let back = &self.slots[i];
                if self.merge_flags & (1 << (i - 1)) == 0 {
                    return false;
                }
                if (front.tile, front.qx, front.qy) != (back.tile, back.qx, back.qy) {
                    return false;
                }
                if front.ordinal >= back.ordinal {
                    return false;
                }
            }
        }
        true
    }
}

/// A group of quads sharing one screen tile, produced by a TC flush and kept
/// intact through the ZROP filter into the quad reorder unit.
#[derive(Debug, Clone)]
pub struct QuadGroup {
    pub tile: TileId,
    pub quads: Vec<QuadPacket>,
}
