//! Scenario and coefficient files compiled into the crate.

macro_rules! bundle {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../../scenarios/", $name, ".toml")))),*]
    };
}

/// `(name, document)` of every bundled scenario.
pub const SCENARIOS: &[(&str, &str)] = bundle![
    "benchmark-tracking",
    "benchmark-regulation",
    "deadtime-robustness",
    "zeta-sweep",
    "k-sweep",
    "k-instability",
    "benchmark-pid-moderate",
    "benchmark-pid-aggressive",
    "auv-step-test",
    "auv-depth",
];

/// `(file name, document)` of bundled auxiliary files.
pub const FILES: &[(&str, &str)] = &[(
    super::config::REFERENCE_COEFFICIENTS,
    crate::plant::REFERENCE_AUV_COEFFICIENTS,
)];

pub fn scenario(name: &str) -> Option<&'static str> {
    SCENARIOS.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

pub fn file(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

pub fn names() -> impl Iterator<Item = &'static str> {
    SCENARIOS.iter().map(|(n, _)| *n)
}
