//! Set-associative LRU model of the CROP color cache.
//!
//! The framebuffer address space is tiled: a 1 KB macro tile spans 8x16
//! pixels at RGBA16F (16x16 at RGBA8) and holds eight 128-byte lines, each
//! covering a two-row strip of the macro tile. Quads are 2-aligned, so one
//! quad always touches exactly one line. The cache tracks timing and
//! hit/miss statistics only; pixel data itself stays in the framebuffer.

use super::config::{ColorFormat, PipelineConfig, CACHE_LINE_BYTES};
use std::collections::VecDeque;

pub struct CropCache {
    /// Per set: line addresses, most recently used at the back.
    sets: Vec<VecDeque<u64>>,
    ways: usize,
    macro_width: u32,
    macros_per_row: u32,
    pub hits: u64,
    pub misses: u64,
}

const MACRO_ROWS: u32 = 16;
const LINES_PER_MACRO: u64 = 8;

impl CropCache {
    pub fn new(config: &PipelineConfig, fb_width: u32) -> CropCache {
        let lines = (config.crop_cache / CACHE_LINE_BYTES) as usize;
        let ways = config.crop_cache_ways as usize;
        let num_sets = lines / ways;
        let macro_width = match config.color_format {
            ColorFormat::Rgba16f => 8,
            ColorFormat::Rgba8 => 16,
        };
        CropCache {
            sets: vec![VecDeque::with_capacity(ways); num_sets],
            ways,
            macro_width,
            macros_per_row: fb_width.div_ceil(macro_width),
            hits: 0,
            misses: 0,
        }
    }

    pub fn line_addr(&self, x: u32, y: u32) -> u64 {
        let mx = (x / self.macro_width) as u64;
        let my = (y / MACRO_ROWS) as u64;
        let strip = ((y % MACRO_ROWS) / 2) as u64;
        (my * self.macros_per_row as u64 + mx) * LINES_PER_MACRO + strip
    }

    /// Touch the line holding pixel (x, y); true on hit.
    pub fn access(&mut self, x: u32, y: u32) -> bool {
        let line = self.line_addr(x, y);
        let set = (line % self.sets.len() as u64) as usize;
        let entries = &mut self.sets[set];
        if let Some(pos) = entries.iter().position(|&l| l == line) {
            entries.remove(pos);
            entries.push_back(line);
            self.hits += 1;
            return true;
        }
        self.misses += 1;
        if entries.len() == self.ways {
            entries.pop_front();
        }
        entries.push_back(line);
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cache(fb_width: u32) -> CropCache {
        CropCache::new(&PipelineConfig::default(), fb_width)
    }

    #[test]
    fn quad_pixels_share_one_line() {
        let c = cache(256);
        for (x, y) in [(0, 0), (6, 14), (120, 250), (14, 2)] {
            let lines: Vec<u64> = (0..4)
                .map(|i| c.line_addr(x + (i & 1), y + (i >> 1)))
                .collect();
            assert!(lines.iter().all(|&l| l == lines[0]), "{x},{y}: {lines:?}");
        }
    }

    #[test]
    fn aligned_macro_tiles_are_contiguous_lines() {
        let c = cache(256);
        // Macro tile k in row 0 occupies lines 8k..8k+8.
        for k in 0..4u32 {
            for strip in 0..8u32 {
                assert_eq!(c.line_addr(k * 8, strip * 2) as u32, k * 8 + strip);
            }
        }
    }

    #[test]
    fn full_capacity_rescan_hits_and_over_capacity_misses() {
        // 128 lines exactly fill the 16 KB cache: a second pass over 16
        // macro tiles is all hits; with 17 tiles the second pass misses.
        let mut c = cache(256);
        for pass in 0..2 {
            for tile in 0..16u32 {
                for strip in 0..8u32 {
                    c.access(tile * 8, strip * 2);
                }
            }
            if pass == 0 {
                assert_eq!(c.misses, 128);
                assert_eq!(c.hits, 0);
            }
        }
        assert_eq!(c.misses, 128);
        assert_eq!(c.hits, 128);

        let mut c = cache(256);
        for _ in 0..2 {
            for tile in 0..17u32 {
                for strip in 0..8u32 {
                    c.access(tile * 8, strip * 2);
                }
            }
        }
        assert!(c.misses > 17 * 8, "misses {}", c.misses);
    }
}
