//! Support code for the `modhyp` command: the expected curves from the
//! appendix tables and the harness that checks them against fixtures.

pub mod harness;
pub mod tables;

/// Environment variable naming the fixture directory.
pub const FIXTURES_ENV: &str = "MODHYP_FIXTURES";

/// Fixture directory used when neither `--fixtures` nor the environment
/// variable is given.
pub const DEFAULT_FIXTURES: &str = "fixtures";
