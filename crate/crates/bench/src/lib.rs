//! Fixed inputs shared by the benchmarks.

use glow_core::{parse_group, GroupSpec, SetPartition};

pub fn group(text: &str) -> GroupSpec {
    parse_group(text).expect("valid group")
}

pub fn partition(text: &str) -> SetPartition {
    text.parse().expect("valid partition")
}
