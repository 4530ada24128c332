use std::sync::OnceLock;

pub const DEFAULT_MAX_DEPTH: u32 = 16;

/// Cap on cluster enumeration depth, read once from `MOEBIUS_MAX_DEPTH`.
pub fn max_depth() -> u32 {
    static CAP: OnceLock<u32> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("MOEBIUS_MAX_DEPTH")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_MAX_DEPTH)
    })
}
