//! Coalescing bins: the tile grid coalescer (TGC) batches primitives per
//! tile grid ahead of the rasterizer, the tile coalescer (TC) batches quads
//! per screen tile ahead of the ROPs. Both flush on full bins, on pressure
//! from new keys, and at end of draw; the TC additionally flushes bins that
//! have gone quiet for `tc_timeout` cycles.

use super::quad::{QuadGroup, QuadPacket, TileId};
use super::stats::FlushCounts;

/// (screen tile, primitive index) pair emitted by the VPO binner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimEntry {
    pub tile: TileId,
    pub prim: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlushReason {
    Full,
    Evict,
    Timeout,
    End,
}

impl FlushReason {
    pub fn count(self, counts: &mut FlushCounts) {
        match self {
            FlushReason::Full => counts.full += 1,
            FlushReason::Evict => counts.evict += 1,
            FlushReason::Timeout => counts.timeout += 1,
            FlushReason::End => counts.end += 1,
        }
    }
}

struct Bin<K, T> {
    key: K,
    items: Vec<T>,
    alloc_seq: u64,
    last_insert_seq: u64,
    last_insert_cycle: u64,
}

/// Primitive-level bins keyed by tile-grid id.
pub struct TgcUnit {
    bins: Vec<Bin<u32, PrimEntry>>,
    max_bins: usize,
    bin_size: usize,
    seq: u64,
}

impl TgcUnit {
    pub fn new(max_bins: usize, bin_size: usize) -> TgcUnit {
        TgcUnit {
            bins: Vec::new(),
            max_bins,
            bin_size,
            seq: 0,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    /// Insert one entry; at most two flushes can result (an eviction making
    /// room, then a full flush of the entry's own bin).
    pub fn insert(
        &mut self,
        entry: PrimEntry,
        grid: u32,
        counts: &mut FlushCounts,
    ) -> Vec<Vec<PrimEntry>> {
        self.seq += 1;
        let mut flushed = Vec::new();
        let idx = match self.bins.iter().position(|b| b.key == grid) {
            Some(i) => i,
            None => {
                if self.bins.len() == self.max_bins {
                    // Evict the least-recently-inserted bin.
                    let victim = self
                        .bins
                        .iter()
                        .enumerate()
                        .min_by_key(|(_, b)| b.last_insert_seq)
                        .map(|(i, _)| i)
                        .expect("bins non-empty");
                    let bin = self.bins.remove(victim);
                    FlushReason::Evict.count(counts);
                    flushed.push(bin.items);
                }
                self.bins.push(Bin {
                    key: grid,
                    items: Vec::with_capacity(self.bin_size),
                    alloc_seq: self.seq,
                    last_insert_seq: self.seq,
                    last_insert_cycle: 0,
                });
                self.bins.len() - 1
            }
        };
        let bin = &mut self.bins[idx];
        bin.items.push(entry);
        bin.last_insert_seq = self.seq;
        if bin.items.len() == self.bin_size {
            let bin = self.bins.remove(idx);
            FlushReason::Full.count(counts);
            flushed.push(bin.items);
        }
        flushed
    }

    /// End-of-draw: flush the oldest remaining bin, if any.
    pub fn flush_oldest(&mut self, counts: &mut FlushCounts) -> Option<Vec<PrimEntry>> {
        let victim = self
            .bins
            .iter()
            .enumerate()
            .min_by_key(|(_, b)| b.alloc_seq)
            .map(|(i, _)| i)?;
        let bin = self.bins.remove(victim);
        FlushReason::End.count(counts);
        Some(bin.items)
    }
}

/// Quad-level bins keyed by screen tile.
pub struct TcUnit {
    bins: Vec<Bin<TileId, QuadPacket>>,
    max_bins: usize,
    bin_size: usize,
    timeout: u64,
    seq: u64,
}

impl TcUnit {
    pub fn new(max_bins: usize, bin_size: usize, timeout: u64) -> TcUnit {
        TcUnit {
            bins: Vec::new(),
            max_bins,
            bin_size,
            timeout,
            seq: 0,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    /// True when inserting a quad for this tile would flush a bin (its own
    /// bin filling up, or an eviction to make room for the new tile).
    pub fn insert_may_flush(&self, tile: TileId) -> bool {
        match self.bins.iter().position(|b| b.key == tile) {
            Some(i) => self.bins[i].items.len() + 1 == self.bin_size,
            None => self.bins.len() == self.max_bins,
        }
    }

    pub fn insert(
        &mut self,
        quad: QuadPacket,
        now: u64,
        counts: &mut FlushCounts,
    ) -> Vec<QuadGroup> {
        self.seq += 1;
        let tile = quad.tile;
        let mut flushed = Vec::new();
        let idx = match self.bins.iter().position(|b| b.key == tile) {
            Some(i) => i,
            None => {
                if self.bins.len() == self.max_bins {
                    // All bins occupied and a new tile arrives: flush oldest.
                    let victim = self
                        .bins
                        .iter()
                        .enumerate()
                        .min_by_key(|(_, b)| b.alloc_seq)
                        .map(|(i, _)| i)
                        .expect("bins non-empty");
                    let bin = self.bins.remove(victim);
                    FlushReason::Evict.count(counts);
                    flushed.push(QuadGroup {
                        tile: bin.key,
                        quads: bin.items,
                    });
                }
                self.bins.push(Bin {
                    key: tile,
                    items: Vec::new(),
                    alloc_seq: self.seq,
                    last_insert_seq: self.seq,
                    last_insert_cycle: now,
                });
                self.bins.len() - 1
            }
        };
        let bin = &mut self.bins[idx];
        bin.items.push(quad);
        bin.last_insert_seq = self.seq;
        bin.last_insert_cycle = now;
        if bin.items.len() == self.bin_size {
            let bin = self.bins.remove(idx);
            FlushReason::Full.count(counts);
            flushed.push(QuadGroup {
                tile: bin.key,
                quads: bin.items,
            });
        }
        flushed
    }

    /// Flush one bin whose last insertion is at least `tc_timeout` cycles
    /// old (oldest allocation first).
    pub fn flush_timed_out(&mut self, now: u64, counts: &mut FlushCounts) -> Option<QuadGroup> {
        let victim = self
            .bins
            .iter()
            .enumerate()
            .filter(|(_, b)| now.saturating_sub(b.last_insert_cycle) >= self.timeout)
            .min_by_key(|(_, b)| b.alloc_seq)
            .map(|(i, _)| i)?;
        let bin = self.bins.remove(victim);
        FlushReason::Timeout.count(counts);
        Some(QuadGroup {
            tile: bin.key,
            quads: bin.items,
        })
    }

    pub fn flush_oldest(&mut self, counts: &mut FlushCounts) -> Option<QuadGroup> {
        let victim = self
            .bins
            .iter()
            .enumerate()
            .min_by_key(|(_, b)| b.alloc_seq)
            .map(|(i, _)| i)?;
        let bin = self.bins.remove(victim);
        FlushReason::End.count(counts);
        Some(QuadGroup {
            tile: bin.key,
            quads: bin.items,
        })
    }
}
