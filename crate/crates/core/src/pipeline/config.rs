//! Pipeline configuration: unit counts, bin sizes, throughputs, latencies
//! and feature flags.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

pub const CACHE_LINE_BYTES: u32 = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ColorFormat {
    #[serde(rename = "RGBA16F")]
    Rgba16f,
    #[serde(rename = "RGBA8")]
    Rgba8,
}

impl ColorFormat {
    pub fn bytes_per_pixel(self) -> u32 {
        match self {
            ColorFormat::Rgba16f => 8,
            ColorFormat::Rgba8 => 4,
        }
    }

    /// CROP quad-rate multiplier relative to the RGBA16F baseline.
    pub fn throughput_multiplier(self) -> u32 {
        match self {
            ColorFormat::Rgba16f => 1,
            ColorFormat::Rgba8 => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PipelineConfig {
    /// Screen tile side in pixels.
    pub screen_tile: u32,
    /// Raster tile side in pixels.
    pub raster_tile: u32,
    /// Tile grid side in screen tiles.
    pub tile_grid: u32,
    pub tgc_bins: u32,
    /// Primitives per TGC bin before a full flush.
    pub tgc_bin_size: u32,
    pub tc_bins: u32,
    /// Quads per TC bin before a full flush.
    pub tc_bin_size: u32,
    /// Cycles without a new quad before a TC bin flushes.
    pub tc_timeout: u32,
    /// CROP quads per cycle at RGBA16F (RGBA8 runs at twice this).
    pub crop_throughput: u32,
    /// CROP cache capacity in bytes (128-byte lines).
    pub crop_cache: u32,
    /// CROP cache associativity.
    pub crop_cache_ways: u32,
    /// Cycles between a termination signal and its stencil-bit commit.
    pub zrop_update_latency: u32,
    pub sm_cores: u32,
    /// Cycles a shader core spends on one warp.
    pub warp_shade_cost: u32,
    /// Extra cycles for a warp containing merge pairs.
    pub warp_merge_cost: u32,
    /// Cycles charged for a CROP cache miss.
    pub l2_latency: u32,
    pub het_enabled: bool,
    pub qm_enabled: bool,
    pub et_threshold: f32,
    pub prune_epsilon: f32,
    /// Upper clamp on per-fragment alpha (1.0 disables).
    pub alpha_clamp: f32,
    pub color_format: ColorFormat,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            screen_tile: 16,
            raster_tile: 8,
            tile_grid: 4,
            tgc_bins: 128,
            tgc_bin_size: 16,
            tc_bins: 32,
            tc_bin_size: 128,
            tc_timeout: 64,
            crop_throughput: 2,
            crop_cache: 16384,
            crop_cache_ways: 8,
            zrop_update_latency: 8,
            sm_cores: 16,
            warp_shade_cost: 32,
            warp_merge_cost: 4,
            l2_latency: 100,
            het_enabled: false,
            qm_enabled: false,
            et_threshold: 0.996,
            prune_epsilon: 1.0 / 255.0,
            alpha_clamp: 0.99,
            color_format: ColorFormat::Rgba16f,
        }
    }
}

impl PipelineConfig {
    /// Effective CROP throughput in quads/cycle for the configured format.
    pub fn crop_quads_per_cycle(&self) -> u32 {
        self.crop_throughput * self.color_format.throughput_multiplier()
    }

    /// Quad positions per screen tile side (registers in the QRU cover
    /// quads_per_tile_side^2 positions).
    pub fn quads_per_tile_side(&self) -> u32 {
        self.screen_tile / 2
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("screen_tile", self.screen_tile),
            ("raster_tile", self.raster_tile),
            ("tile_grid", self.tile_grid),
            ("tgc_bins", self.tgc_bins),
            ("tgc_bin_size", self.tgc_bin_size),
            ("tc_bins", self.tc_bins),
            ("tc_bin_size", self.tc_bin_size),
            ("tc_timeout", self.tc_timeout),
            ("crop_throughput", self.crop_throughput),
            ("crop_cache", self.crop_cache),
            ("crop_cache_ways", self.crop_cache_ways),
            ("sm_cores", self.sm_cores),
            ("warp_shade_cost", self.warp_shade_cost),
        ];
        for (name, v) in positive {
            if v == 0 {
                return Err(Error::InvalidConfig(format!("{name} must be positive")));
            }
        }
        if self.screen_tile % self.raster_tile != 0 {
            return Err(Error::InvalidConfig(
                "screen_tile must be a multiple of raster_tile".into(),
            ));
        }
        if self.raster_tile % 2 != 0 {
            return Err(Error::InvalidConfig(
                "raster_tile must be even (quad granularity)".into(),
            ));
        }
        // The tile grid must stay within the region the TC bins can cover.
        if self.tile_grid * self.tile_grid > self.tc_bins {
            return Err(Error::InvalidConfig(format!(
                "tile_grid {}x{} exceeds the {} TC bins",
                self.tile_grid, self.tile_grid, self.tc_bins
            )));
        }
        if self.crop_cache % CACHE_LINE_BYTES != 0 {
            return Err(Error::InvalidConfig(
                "crop_cache must be a multiple of the 128-byte line".into(),
            ));
        }
        let lines = self.crop_cache / CACHE_LINE_BYTES;
        if lines % self.crop_cache_ways != 0 {
            return Err(Error::InvalidConfig(format!(
                "crop_cache_ways {} must divide the {} cache lines",
                self.crop_cache_ways, lines
            )));
        }
        if !(0.0 <= self.prune_epsilon
            && self.prune_epsilon < self.et_threshold
            && self.et_threshold <= 1.0)
        {
            return Err(Error::InvalidConfig(format!(
                "need 0 <= prune_epsilon < et_threshold <= 1, got {} and {}",
                self.prune_epsilon, self.et_threshold
            )));
        }
        if !(0.0 < self.alpha_clamp && self.alpha_clamp <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "alpha_clamp {} outside (0, 1]",
                self.alpha_clamp
            )));
        }
        Ok(())
    }

    /// Load from a TOML file; missing keys take defaults, unknown keys are
    /// rejected.
    pub fn load(path: &str) -> Result<PipelineConfig> {
        let text = std::fs::read_to_string(path)?;
        let cfg: PipelineConfig =
            toml::from_str(&text).map_err(|e| Error::parse(path, e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn save(&self, path: &str) -> Result<()> {
        let text = toml::to_string(self).map_err(|e| Error::parse(path, e.to_string()))?;
        std::fs::write(path, text)?;
        Ok(())
    }
}
