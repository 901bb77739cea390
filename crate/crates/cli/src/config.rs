use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "freemon", version, about = "Free monoids on pointed objects, stage by stage")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build the stage chain for an input and run the requested checks.
    Compute(ComputeArgs),
    /// Run the seeded lemma suites for a backend.
    CheckLemmas(LemmaArgs),
}

#[derive(ValueEnum, Serialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Finset,
    Span,
    Fingrp,
}

impl BackendKind {
    pub fn name(self) -> &'static str {
        match self {
            BackendKind::Finset => "finset",
            BackendKind::Span => "span",
            BackendKind::Fingrp => "fingrp",
        }
    }
}

#[derive(ValueEnum, Serialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum ModeChoice {
    Reflexive,
    Dubuc,
    Both,
}

#[derive(ValueEnum, Serialize, Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Laws,
    Universal,
    Lemmas,
    AlgFree,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Emit {
    Text,
    Json,
    Dot,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, value_enum, env = "FREEMON_BACKEND")]
    pub backend: BackendKind,

    #[arg(long, value_enum, default_value = "text", env = "FREEMON_EMIT")]
    pub emit: Emit,

    /// Seed for randomized checks.
    #[arg(long, default_value_t = 0, env = "FREEMON_SEED")]
    pub seed: u64,

    /// Largest group order accepted by the group backend.
    #[arg(long, default_value_t = 12, env = "FREEMON_MAX_ORDER")]
    pub max_order: usize,

    /// Evaluate slots and multiplications concurrently.
    #[arg(long, env = "FREEMON_PARALLEL")]
    pub parallel: bool,
}

#[derive(Args, Debug, Clone)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub common: Common,

    #[arg(long, env = "FREEMON_INPUT")]
    pub input: PathBuf,

    /// Highest stage to compute.
    #[arg(long, default_value_t = 5, env = "FREEMON_STAGES")]
    pub stages: usize,

    #[arg(long, value_enum, default_value = "reflexive", env = "FREEMON_MODE")]
    pub mode: ModeChoice,

    /// Comma-separated checks to run.
    #[arg(long, value_enum, value_delimiter = ',', env = "FREEMON_CHECKS")]
    pub checks: Vec<CheckKind>,
}

#[derive(Args, Debug, Clone)]
pub struct LemmaArgs {
    #[command(flatten)]
    pub common: Common,

    /// Instances per suite.
    #[arg(long, default_value_t = 200, env = "FREEMON_COUNT")]
    pub count: usize,
}

impl ComputeArgs {
    /// Checks in canonical order without repeats.
    pub fn checks(&self) -> Vec<CheckKind> {
        let mut c = self.checks.clone();
        c.sort();
        c.dedup();
        c
    }
}
