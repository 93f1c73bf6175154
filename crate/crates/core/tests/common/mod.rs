#![allow(dead_code)]

use fbr_core::fiber::FiniteAbelianGroup;
use fbr_core::group::{catalog::parse_group_spec, FiniteGroup, ResourceCaps};
use fbr_core::ring::FiberedRing;
use fbr_core::Exec;

pub const GROUPS: [&str; 11] = ["C2", "C4", "V4", "C6", "S3", "D4", "Q8", "A4", "S4", "A5", "S5"];
/// Groups whose rings stay small enough for exhaustive pairwise checks.
pub const SMALL_GROUPS: [&str; 8] = ["C2", "C4", "V4", "C6", "S3", "D4", "Q8", "A4"];

pub fn group(spec: &str) -> FiniteGroup {
    parse_group_spec(spec, 10_000).unwrap()
}

pub fn ring(spec: &str, fiber: u64) -> FiberedRing {
    FiberedRing::new(
        group(spec),
        FiniteAbelianGroup::cyclic(fiber),
        ResourceCaps::default(),
        Exec::default(),
    )
    .unwrap()
}
