//! Job configuration shared by every subcommand.

use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, ValueEnum};

use klcells_core::{Ctx, GenSet};

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum GroupKind {
    A,
    B,
    I2,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum SideArg {
    L,
    R,
    #[value(name = "LR", alias = "lr")]
    Lr,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Weight mode: the generic two-parameter ring or specialized positive
/// integer weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Weights {
    Generic,
    Ints(Vec<i32>),
}

fn parse_weights(s: &str) -> Result<Weights, String> {
    if s == "generic" {
        return Ok(Weights::Generic);
    }
    let parts: Result<Vec<i32>, _> = s.split(',').map(|p| p.trim().parse::<i32>()).collect();
    match parts {
        Ok(v) if !v.is_empty() && v.len() <= 2 => Ok(Weights::Ints(v)),
        _ => Err(format!("expected 'generic', 'a' or 'a,b', got '{s}'")),
    }
}

fn parse_parabolic(s: &str) -> Result<Vec<usize>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| e.to_string()))
        .collect()
}

#[derive(Args, Debug, Clone)]
pub struct JobConfig {
    /// Coxeter type
    #[arg(long = "type", value_enum, default_value = "b")]
    pub ctype: GroupKind,
    /// Rank (number of generators); for I2 this is m
    #[arg(long, default_value_t = 2)]
    pub rank: usize,
    /// Weight mode: 'generic', a single integer, or 'a,b'
    #[arg(long, value_parser = parse_weights, default_value = "generic")]
    pub weights: Weights,
    /// Parabolic subset I as comma-separated generator indices
    #[arg(long, value_parser = parse_parabolic, default_value = "")]
    pub parabolic: Vec<usize>,
    /// Side of the preorder/cell computation
    #[arg(long, value_enum, default_value = "l")]
    pub side: SideArg,
    /// Output format
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Cache directory (defaults to the KLCELLS_CACHE environment variable)
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Worker pool width for parallel scans
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Ceiling for type-B ranks on commands that need the full
    /// structure-constant table
    #[arg(long, default_value_t = 4)]
    pub max_rank: usize,
}

impl JobConfig {
    pub fn side(&self) -> klcells_core::cells::Side {
        match self.side {
            SideArg::L => klcells_core::cells::Side::L,
            SideArg::R => klcells_core::cells::Side::R,
            SideArg::Lr => klcells_core::cells::Side::LR,
        }
    }

    pub fn cache_dir(&self) -> Option<PathBuf> {
        self.cache
            .clone()
            .or_else(|| std::env::var_os("KLCELLS_CACHE").map(PathBuf::from))
    }

    /// Build the computation context for this configuration.
    pub fn ctx(&self) -> Result<Ctx> {
        let ctx = match (self.ctype, &self.weights) {
            (GroupKind::B, Weights::Generic) => Ctx::generic_b(self.rank)?,
            (GroupKind::B, Weights::Ints(v)) => {
                if v.len() != 2 {
                    bail!("type B needs --weights a,b or generic");
                }
                Ctx::specialized_b(self.rank, v[1], v[0])?
            }
            (GroupKind::A, Weights::Generic) => Ctx::equal_a(self.rank, 1)?,
            (GroupKind::A, Weights::Ints(v)) => {
                if v.len() != 1 {
                    bail!("type A has one conjugacy class; use --weights a");
                }
                Ctx::equal_a(self.rank, v[0])?
            }
            (GroupKind::I2, Weights::Generic) => {
                if self.rank % 2 == 0 {
                    // two classes: generic means independent parameters,
                    // realized over Z as distinct weights is not exact;
                    // use (1,1)-style smallest distinct weights instead
                    Ctx::dihedral(self.rank, 1, 1)?
                } else {
                    Ctx::dihedral(self.rank, 1, 1)?
                }
            }
            (GroupKind::I2, Weights::Ints(v)) => {
                let (a, b) = match v.len() {
                    1 => (v[0], v[0]),
                    _ => (v[0], v[1]),
                };
                Ctx::dihedral(self.rank, a, b)?
            }
        };
        for &s in &self.parabolic {
            if s >= ctx.group().n_gens() {
                bail!("parabolic index {s} out of range");
            }
        }
        Ok(ctx)
    }

    pub fn iset(&self, ctx: &Ctx) -> GenSet {
        let _ = ctx;
        GenSet::from_indices(&self.parabolic)
    }

    /// Ceiling check for commands that must build the full h-table.
    pub fn check_h_budget(&self) -> Result<()> {
        if matches!(self.ctype, GroupKind::B) && self.rank > self.max_rank {
            bail!(
                "resource limit: full structure-constant tables for type B are capped at \
                 rank {} (raise with --max-rank)",
                self.max_rank
            );
        }
        Ok(())
    }

    /// A stable string identity for cache keys.
    pub fn weight_tag(&self) -> String {
        match &self.weights {
            Weights::Generic => "generic".into(),
            Weights::Ints(v) => {
                v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
            }
        }
    }

    pub fn group_tag(&self) -> String {
        let t = match self.ctype {
            GroupKind::A => "A",
            GroupKind::B => "B",
            GroupKind::I2 => "I2",
        };
        format!("{}{}", t, self.rank)
    }
}
