//! Finite permutation groups and the group-theoretical fusion categories `C(G, 1, H, 1)`.

pub mod catalog;
pub mod characters;
pub mod group;
pub mod perm;
pub mod theoretical;

pub use catalog::{find_group_subgroup, locate_subgroup, Catalog, FindReport, GroupSubgroupMatch};
pub use characters::{character_degrees, character_table, CharacterTable};
pub use group::{Group, Subgroup};
pub use perm::{enumerate_group, GroupSpec, PermGroup, DEFAULT_ORDER_CAP};
pub use theoretical::{double_cosets, group_theoretical, group_theoretical_type, DoubleCosetData, GroupTheoreticalData};
