//! Free resolutions, Koszul complexes and the loci where the maps of a
//! complex drop rank.

mod complex;
mod matrix;
mod syzygy;

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

pub use complex::{
    check_acyclicity, expected_ranks, koszul_complex, rank_locus_ideal, AcyclicityEntry,
    AcyclicityReport, ComplexDocument, FreeComplex, RankLocus,
};
pub use matrix::{combinations, PolyMatrix};
pub use syzygy::{free_resolution, syzygies, syzygies_graded, ResolutionMode};

/// Codimension of a variety; the empty variety has codimension `+∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Codim {
    Finite(i64),
    Infinite,
}

impl Codim {
    /// Codimension inside an ambient of dimension `ambient`, from a Krull
    /// dimension where `-1` stands for the empty set.
    pub fn from_dimension(ambient: i64, dim: i64) -> Codim {
        if dim < 0 {
            Codim::Infinite
        } else {
            Codim::Finite(ambient - dim)
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Codim::Infinite
    }
}

impl Ord for Codim {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Codim::Finite(a), Codim::Finite(b)) => a.cmp(b),
            (Codim::Finite(_), Codim::Infinite) => Ordering::Less,
            (Codim::Infinite, Codim::Finite(_)) => Ordering::Greater,
            (Codim::Infinite, Codim::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Codim {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Codim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Codim::Finite(c) => write!(f, "{c}"),
            Codim::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Codim {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Codim::Finite(c) => s.serialize_i64(*c),
            Codim::Infinite => s.serialize_str("inf"),
        }
    }
}
