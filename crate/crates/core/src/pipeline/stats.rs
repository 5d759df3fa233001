//! Per-unit and whole-draw simulation statistics.

use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct UnitStats {
    pub items_in: u64,
    pub items_out: u64,
    pub busy_cycles: u64,
    pub stall_cycles: u64,
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FlushCounts {
    pub full: u64,
    pub evict: u64,
    pub timeout: u64,
    pub end: u64,
}

impl FlushCounts {
    pub fn total(&self) -> u64 {
        self.full + self.evict + self.timeout + self.end
    }
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CacheCounts {
    pub hits: u64,
    pub misses: u64,
}

/// Names and accessors for the per-unit table, in pipeline order.
pub const UNIT_NAMES: [&str; 9] = [
    "vpo", "tgc", "raster", "tc", "zrop", "qru", "sm", "prop", "crop",
];

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Units {
    pub vpo: UnitStats,
    pub tgc: UnitStats,
    pub raster: UnitStats,
    pub tc: UnitStats,
    pub zrop: UnitStats,
    pub qru: UnitStats,
    pub sm: UnitStats,
    pub prop: UnitStats,
    pub crop: UnitStats,
}

impl Units {
    pub fn by_name(&self, name: &str) -> Option<&UnitStats> {
        match name {
            "vpo" => Some(&self.vpo),
            "tgc" => Some(&self.tgc),
            "raster" => Some(&self.raster),
            "tc" => Some(&self.tc),
            "zrop" => Some(&self.zrop),
            "qru" => Some(&self.qru),
            "sm" => Some(&self.sm),
            "prop" => Some(&self.prop),
            "crop" => Some(&self.crop),
            _ => None,
        }
    }
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SimStats {
    pub cycles: u64,
    pub draw_calls: u64,
    pub warps_launched: u64,
    /// Quads that consumed a CROP slot.
    pub quads_to_crop: u64,
    /// Quads routed to the stencil write path (multipass update draws).
    pub quads_to_stencil: u64,
    /// Per-pixel blend operations performed by CROP.
    pub fragments_blended: u64,
    /// Fragments evaluated by the fragment shader.
    pub fragments_shaded: u64,
    /// Fragments folded into a neighbor during in-shader quad merging.
    pub fragments_merged: u64,
    /// Fragments below prune_epsilon after shading.
    pub dropped_pruned: u64,
    pub quads_killed_het: u64,
    pub fragments_killed_het: u64,
    /// Merge pairs formed (one quad eliminated per pair).
    pub quads_merged: u64,
    /// Fragments produced by multipass stencil-update draws.
    pub stencil_pass_fragments: u64,
    pub tgc_flushes: FlushCounts,
    pub tc_flushes: FlushCounts,
    pub crop_cache: CacheCounts,
    pub units: Units,
}

impl SimStats {
    pub fn accumulate(&mut self, other: &SimStats) {
        fn add(a: &mut UnitStats, b: &UnitStats) {
            a.items_in += b.items_in;
            a.items_out += b.items_out;
            a.busy_cycles += b.busy_cycles;
            a.stall_cycles += b.stall_cycles;
        }
        self.cycles += other.cycles;
        self.draw_calls += other.draw_calls;
        self.warps_launched += other.warps_launched;
        self.quads_to_crop += other.quads_to_crop;
        self.quads_to_stencil += other.quads_to_stencil;
        self.fragments_blended += other.fragments_blended;
        self.fragments_shaded += other.fragments_shaded;
        self.fragments_merged += other.fragments_merged;
        self.dropped_pruned += other.dropped_pruned;
        self.quads_killed_het += other.quads_killed_het;
        self.fragments_killed_het += other.fragments_killed_het;
        self.quads_merged += other.quads_merged;
        self.stencil_pass_fragments += other.stencil_pass_fragments;
        for (mine, theirs) in [
            (&mut self.tgc_flushes, &other.tgc_flushes),
            (&mut self.tc_flushes, &other.tc_flushes),
        ] {
            mine.full += theirs.full;
            mine.evict += theirs.evict;
            mine.timeout += theirs.timeout;
            mine.end += theirs.end;
        }
        self.crop_cache.hits += other.crop_cache.hits;
        self.crop_cache.misses += other.crop_cache.misses;
        add(&mut self.units.vpo, &other.units.vpo);
        add(&mut self.units.tgc, &other.units.tgc);
        add(&mut self.units.raster, &other.units.raster);
        add(&mut self.units.tc, &other.units.tc);
        add(&mut self.units.zrop, &other.units.zrop);
        add(&mut self.units.qru, &other.units.qru);
        add(&mut self.units.sm, &other.units.sm);
        add(&mut self.units.prop, &other.units.prop);
        add(&mut self.units.crop, &other.units.crop);
    }

    /// Flat key/value map with stable (sorted) key order.
    pub fn to_flat_map(&self) -> BTreeMap<String, u64> {
        let mut m = BTreeMap::new();
        m.insert("totals.cycles".into(), self.cycles);
        m.insert("totals.draw_calls".into(), self.draw_calls);
        m.insert("totals.warps_launched".into(), self.warps_launched);
        m.insert("totals.quads_to_crop".into(), self.quads_to_crop);
        m.insert("totals.quads_to_stencil".into(), self.quads_to_stencil);
        m.insert("totals.fragments_blended".into(), self.fragments_blended);
        m.insert("totals.fragments_shaded".into(), self.fragments_shaded);
        m.insert("totals.fragments_merged".into(), self.fragments_merged);
        m.insert("totals.dropped_pruned".into(), self.dropped_pruned);
        m.insert("totals.quads_killed_het".into(), self.quads_killed_het);
        m.insert(
            "totals.fragments_killed_het".into(),
            self.fragments_killed_het,
        );
        m.insert("totals.quads_merged".into(), self.quads_merged);
        m.insert(
            "totals.stencil_pass_fragments".into(),
            self.stencil_pass_fragments,
        );
        for (name, f) in [("tgc_flushes", &self.tgc_flushes), ("tc_flushes", &self.tc_flushes)] {
            m.insert(format!("{name}.full"), f.full);
            m.insert(format!("{name}.evict"), f.evict);
            m.insert(format!("{name}.timeout"), f.timeout);
            m.insert(format!("{name}.end"), f.end);
        }
        m.insert("crop_cache.hits".into(), self.crop_cache.hits);
        m.insert("crop_cache.misses".into(), self.crop_cache.misses);
        for name in UNIT_NAMES {
            let u = self.units.by_name(name).unwrap();
            m.insert(format!("units.{name}.items_in"), u.items_in);
            m.insert(format!("units.{name}.items_out"), u.items_out);
            m.insert(format!("units.{name}.busy_cycles"), u.busy_cycles);
            m.insert(format!("units.{name}.stall_cycles"), u.stall_cycles);
        }
        m
    }

    /// Stable-key JSON document; byte-identical for identical runs.
    pub fn to_json(&self) -> String {
        let map = self.to_flat_map();
        let mut out = String::from("{\n");
        let mut first = true;
        for (k, v) in &map {
            if !first {
                out.push_str(",\n");
            }
            first = false;
            out.push_str(&format!("  \"{k}\": {v}"));
        }
        out.push_str("\n}\n");
        out
    }
}
