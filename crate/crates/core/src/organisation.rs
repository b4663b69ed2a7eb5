//! Hierarchical organisation: depth-indexed channel levels with bottom-up
//! mass-weighted recall aggregation, per-depth score/entropy statistics, and
//! leaf-group dominance analysis.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{
    aas, contribution_stats, entropy_bits, ContributionStats, Epsilon, KernelError, Snapshot,
};

#[derive(Debug, Error, PartialEq)]
pub enum OrganisationError {
    #[error("a hierarchy needs at least one level")]
    NoLevels,
    #[error("level {0} has no channels")]
    EmptyLevel(usize),
    #[error("channel name {0:?} appears at more than one depth")]
    DuplicateName(String),
    #[error("non-leaf channel {0:?} has no children")]
    ChildlessParent(String),
    #[error(
        "children of {parent:?} must live one level below at depth {expected}, {child:?} does not"
    )]
    MisplacedChild {
        parent: String,
        expected: usize,
        child: String,
    },
    #[error("channel {0:?} is claimed by more than one parent")]
    MultipleParents(String),
    #[error("channel {child:?} at depth {depth} has no parent")]
    OrphanChild { child: String, depth: usize },
    #[error("unknown parent {0:?} in the children map")]
    UnknownParent(String),
    #[error("children of {0:?} have zero total effective mass; the aggregate recall is undefined")]
    ZeroChildMass(String),
    #[error("group {group:?} references unknown leaf {leaf:?}")]
    UnknownLeaf { group: String, leaf: String },
    #[error("leaf {0:?} belongs to more than one group")]
    OverlappingGroups(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Depth-indexed levels (depth 0 is the root level) plus the parent to
/// children edges connecting each level to the next deeper one. Channel
/// names are unique across the whole hierarchy, every non-leaf channel has
/// at least one child and every non-root channel exactly one parent.
#[derive(Debug, Clone, PartialEq)]
pub struct Hierarchy {
    levels: Vec<Snapshot>,
    children: IndexMap<String, Vec<String>>,
}

impl Hierarchy {
    pub fn new(
        levels: Vec<Snapshot>,
        children: IndexMap<String, Vec<String>>,
    ) -> Result<Self, OrganisationError> {
        if levels.is_empty() {
            return Err(OrganisationError::NoLevels);
        }
        let mut depth_of: IndexMap<&String, usize> = IndexMap::new();
        for (depth, level) in levels.iter().enumerate() {
            if level.is_empty() {
                return Err(OrganisationError::EmptyLevel(depth));
            }
            for name in level.names() {
                if depth_of.insert(name, depth).is_some() {
                    return Err(OrganisationError::DuplicateName(name.clone()));
                }
            }
        }
        for parent in children.keys() {
            if !depth_of.contains_key(parent) {
                return Err(OrganisationError::UnknownParent(parent.clone()));
            }
        }
        let mut claimed: IndexMap<&String, &String> = IndexMap::new();
        for (parent, child_names) in &children {
            let parent_depth = depth_of[parent];
            for child in child_names {
                match depth_of.get(child) {
                    Some(&d) if d == parent_depth + 1 => {}
                    _ => {
                        return Err(OrganisationError::MisplacedChild {
                            parent: parent.clone(),
                            expected: parent_depth + 1,
                            child: child.clone(),
                        })
                    }
                }
                if claimed.insert(child, parent).is_some() {
                    return Err(OrganisationError::MultipleParents(child.clone()));
                }
            }
        }
        let last = levels.len() - 1;
        for (depth, level) in levels.iter().enumerate() {
            for name in level.names() {
                let child_count = children.get(name).map_or(0, Vec::len);
                if depth < last && child_count == 0 {
                    return Err(OrganisationError::ChildlessParent(name.clone()));
                }
                if depth > 0 && !claimed.contains_key(name) {
                    return Err(OrganisationError::OrphanChild {
                        child: name.clone(),
                        depth,
                    });
                }
            }
        }
        Ok(Hierarchy { levels, children })
    }

    pub fn depth_count(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, depth: usize) -> &Snapshot {
        &self.levels[depth]
    }

    pub fn levels(&self) -> &[Snapshot] {
        &self.levels
    }

    /// The deepest level, carrying the leaf channels.
    pub fn leaves(&self) -> &Snapshot {
        self.levels.last().expect("validated non-empty")
    }

    pub fn children_of(&self, parent: &str) -> &[String] {
        self.children.get(parent).map_or(&[], Vec::as_slice)
    }
}

/// Leaf groups for dominance analysis. Groups must be disjoint; they need
/// not cover every leaf.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSpec {
    pub groups: IndexMap<String, Vec<String>>,
}

impl GroupSpec {
    pub fn new(groups: IndexMap<String, Vec<String>>) -> Result<Self, OrganisationError> {
        let mut seen: IndexMap<&String, ()> = IndexMap::new();
        for leaves in groups.values() {
            for leaf in leaves {
                if seen.insert(leaf, ()).is_some() {
                    return Err(OrganisationError::OverlappingGroups(leaf.clone()));
                }
            }
        }
        Ok(GroupSpec { groups })
    }
}

/// Group-level contribution masses, shares, entropy and the dominant group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupStats {
    pub leaf_contributions: IndexMap<String, f64>,
    pub total: f64,
    pub masses: IndexMap<String, f64>,
    pub shares: IndexMap<String, f64>,
    pub group_entropy: f64,
    pub dominant: Option<String>,
}

/// Replaces every non-leaf recall with the effective-mass-weighted average
/// of its children's recalls, applied deepest-first so changes propagate all
/// the way to the root. Leaf recalls, weights and redundancies are untouched.
/// Idempotent; fails if some parent's children carry zero total mass.
pub fn recompute_parents(hierarchy: &Hierarchy) -> Result<Hierarchy, OrganisationError> {
    let mut levels = hierarchy.levels.clone();
    for depth in (0..levels.len().saturating_sub(1)).rev() {
        let child_level = levels[depth + 1].clone();
        let parent_level = &levels[depth];
        let mut updated = Snapshot::new(parent_level.time_index());
        for (name, channel) in parent_level.iter() {
            let mut mass = 0.0;
            let mut weighted = 0.0;
            for child_name in hierarchy.children_of(name) {
                let child = child_level
                    .get(child_name)
                    .expect("validated against the level below");
                mass += child.effective_mass();
                weighted += child.effective_mass() * child.recall();
            }
            if mass <= 0.0 {
                return Err(OrganisationError::ZeroChildMass(name.clone()));
            }
            updated.insert(name.clone(), channel.with_recall(weighted / mass)?)?;
        }
        levels[depth] = updated;
    }
    Ok(Hierarchy {
        levels,
        children: hierarchy.children.clone(),
    })
}

/// Score and contribution statistics of every depth, shallowest first.
pub fn depth_stats(hierarchy: &Hierarchy, eps: Epsilon) -> Vec<(f64, ContributionStats)> {
    hierarchy
        .levels
        .iter()
        .map(|level| (aas(level, eps), contribution_stats(level, eps)))
        .collect()
}

/// Aggregates leaf contributions into group masses and shares. The dominant
/// group is the one with the largest share; exact ties break toward the
/// lexicographically smallest name. No group dominates a zero-mass snapshot.
pub fn group_stats(
    leaves: &Snapshot,
    spec: &GroupSpec,
    eps: Epsilon,
) -> Result<GroupStats, OrganisationError> {
    let stats = contribution_stats(leaves, eps);
    let mut masses: IndexMap<String, f64> = IndexMap::new();
    for (group, members) in &spec.groups {
        let mut mass = 0.0;
        for leaf in members {
            let c =
                stats
                    .contributions
                    .get(leaf)
                    .ok_or_else(|| OrganisationError::UnknownLeaf {
                        group: group.clone(),
                        leaf: leaf.clone(),
                    })?;
            mass += c;
        }
        masses.insert(group.clone(), mass);
    }
    let total = stats.total;
    let shares: IndexMap<String, f64> = if total > 0.0 {
        masses.iter().map(|(g, m)| (g.clone(), m / total)).collect()
    } else {
        masses.keys().map(|g| (g.clone(), 0.0)).collect()
    };
    let group_entropy = entropy_bits(shares.values());
    let dominant = if total > 0.0 {
        let mut best: Option<(&String, f64)> = None;
        for (group, share) in &shares {
            let better = match best {
                None => true,
                Some((best_name, best_share)) => {
                    *share > best_share || (*share == best_share && group < best_name)
                }
            };
            if better {
                best = Some((group, *share));
            }
        }
        best.map(|(g, _)| g.clone())
    } else {
        None
    };
    Ok(GroupStats {
        leaf_contributions: stats.contributions,
        total,
        masses,
        shares,
        group_entropy,
        dominant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Channel;

    fn eps() -> Epsilon {
        Epsilon::default()
    }

    pub(crate) fn demo_hierarchy() -> Hierarchy {
        let root =
            Snapshot::from_channels(0, [("L".to_string(), Channel::new(1.0, 0.0, 0.7).unwrap())])
                .unwrap();
        let mid = Snapshot::from_channels(
            0,
            [
                ("H1".to_string(), Channel::new(0.5, 0.0, 0.6).unwrap()),
                ("H2".to_string(), Channel::new(0.5, 0.0, 0.8).unwrap()),
            ],
        )
        .unwrap();
        let leaves = Snapshot::from_channels(
            0,
            [
                ("N1".to_string(), Channel::new(0.25, 0.0, 0.5).unwrap()),
                ("N2".to_string(), Channel::new(0.25, 0.0, 0.7).unwrap()),
                ("N3".to_string(), Channel::new(0.25, 0.0, 0.9).unwrap()),
                ("N4".to_string(), Channel::new(0.25, 0.0, 0.7).unwrap()),
            ],
        )
        .unwrap();
        let children = IndexMap::from([
            ("L".to_string(), vec!["H1".to_string(), "H2".to_string()]),
            ("H1".to_string(), vec!["N1".to_string(), "N2".to_string()]),
            ("H2".to_string(), vec!["N3".to_string(), "N4".to_string()]),
        ]);
        Hierarchy::new(vec![root, mid, leaves], children).unwrap()
    }

    pub(crate) fn demo_groups() -> GroupSpec {
        GroupSpec::new(IndexMap::from([
            ("G1".to_string(), vec!["N1".to_string(), "N2".to_string()]),
            ("G2".to_string(), vec!["N3".to_string(), "N4".to_string()]),
        ]))
        .unwrap()
    }

    #[test]
    fn recompute_produces_mass_weighted_averages() {
        let recomputed = recompute_parents(&demo_hierarchy()).unwrap();
        let mid = recomputed.level(1);
        assert!((mid.get("H1").unwrap().recall() - 0.6).abs() < 1e-12);
        assert!((mid.get("H2").unwrap().recall() - 0.8).abs() < 1e-12);
        assert!((recomputed.level(0).get("L").unwrap().recall() - 0.7).abs() < 1e-12);
        // leaves and masses untouched
        assert_eq!(recomputed.leaves(), demo_hierarchy().leaves());
        assert_eq!(mid.get("H1").unwrap().weight(), 0.5);
    }

    #[test]
    fn recompute_is_idempotent() {
        let once = recompute_parents(&demo_hierarchy()).unwrap();
        let twice = recompute_parents(&once).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn equal_leaves_propagate_unchanged() {
        let root =
            Snapshot::from_channels(0, [("L".to_string(), Channel::new(1.0, 0.0, 0.1).unwrap())])
                .unwrap();
        let leaves = Snapshot::from_channels(
            0,
            [
                ("a".to_string(), Channel::new(0.3, 0.0, 0.42).unwrap()),
                ("b".to_string(), Channel::new(0.7, 0.0, 0.42).unwrap()),
            ],
        )
        .unwrap();
        let children = IndexMap::from([("L".to_string(), vec!["a".to_string(), "b".to_string()])]);
        let recomputed =
            recompute_parents(&Hierarchy::new(vec![root, leaves], children).unwrap()).unwrap();
        assert!((recomputed.level(0).get("L").unwrap().recall() - 0.42).abs() < 1e-12);
        // the Jensen gap vanishes: with equal leaves and mass-conserving
        // parents, every depth scores the same
        let stats = depth_stats(&recomputed, Epsilon::default());
        assert!((stats[0].0 - stats[1].0).abs() < 1e-12);
    }

    #[test]
    fn single_child_parent_inherits_its_recall() {
        let root =
            Snapshot::from_channels(0, [("L".to_string(), Channel::new(1.0, 0.0, 0.0).unwrap())])
                .unwrap();
        let leaves = Snapshot::from_channels(
            0,
            [("only".to_string(), Channel::new(0.4, 0.0, 0.37).unwrap())],
        )
        .unwrap();
        let children = IndexMap::from([("L".to_string(), vec!["only".to_string()])]);
        let recomputed =
            recompute_parents(&Hierarchy::new(vec![root, leaves], children).unwrap()).unwrap();
        assert!((recomputed.level(0).get("L").unwrap().recall() - 0.37).abs() < 1e-12);
    }

    #[test]
    fn zero_child_mass_is_an_error() {
        let root =
            Snapshot::from_channels(0, [("L".to_string(), Channel::new(1.0, 0.0, 0.5).unwrap())])
                .unwrap();
        let leaves = Snapshot::from_channels(
            0,
            [("ghost".to_string(), Channel::new(0.0, 0.0, 0.5).unwrap())],
        )
        .unwrap();
        let children = IndexMap::from([("L".to_string(), vec!["ghost".to_string()])]);
        let hierarchy = Hierarchy::new(vec![root, leaves], children).unwrap();
        assert_eq!(
            recompute_parents(&hierarchy).unwrap_err(),
            OrganisationError::ZeroChildMass("L".into())
        );
    }

    #[test]
    fn depth_stats_match_reference_values() {
        let recomputed = recompute_parents(&demo_hierarchy()).unwrap();
        let stats = depth_stats(&recomputed, eps());
        // depth 0 (root), 1 (organs), 2 (leaves)
        assert!((stats[0].0 - 0.5140).abs() < 1e-3);
        assert!((stats[1].0 - 0.5288).abs() < 1e-3);
        assert!((stats[2].0 - 0.5446).abs() < 1e-3);
        assert!((stats[2].1.entropy - 1.7669).abs() < 1e-3);
        assert!((stats[1].1.entropy - 0.8862).abs() < 1e-3);
        assert_eq!(stats[0].1.entropy, 0.0);
        assert_eq!(stats[2].1.active_count, 4);
        assert_eq!(stats[1].1.active_count, 2);
        assert_eq!(stats[0].1.active_count, 1);
    }

    #[test]
    fn single_level_hierarchy_reduces_to_kernel_stats() {
        let only = Snapshot::from_channels(
            0,
            [
                ("a".to_string(), Channel::unit(0.3).unwrap()),
                ("b".to_string(), Channel::unit(0.8).unwrap()),
            ],
        )
        .unwrap();
        let hierarchy = Hierarchy::new(vec![only.clone()], IndexMap::new()).unwrap();
        let stats = depth_stats(&hierarchy, eps());
        assert_eq!(stats.len(), 1);
        assert_eq!(stats[0].1, contribution_stats(&only, eps()));
    }

    #[test]
    fn group_stats_match_reference_values() {
        let recomputed = recompute_parents(&demo_hierarchy()).unwrap();
        let stats = group_stats(recomputed.leaves(), &demo_groups(), eps()).unwrap();
        assert!((stats.masses["G1"] - 0.3781).abs() < 1e-3);
        assert!((stats.masses["G2"] - 0.1664).abs() < 1e-3);
        assert!((stats.shares["G1"] - 0.6944).abs() < 1e-3);
        assert!((stats.shares["G2"] - 0.3056).abs() < 1e-3);
        assert!((stats.group_entropy - 0.8881).abs() < 1e-3);
        assert_eq!(stats.dominant.as_deref(), Some("G1"));
        assert!((stats.leaf_contributions["N1"] - 0.2496).abs() < 1e-3);
        assert!((stats.leaf_contributions["N3"] - 0.0380).abs() < 1e-3);
        assert!((stats.total - 0.5446).abs() < 1e-3);
    }

    #[test]
    fn single_covering_group_dominates_with_zero_entropy() {
        let recomputed = recompute_parents(&demo_hierarchy()).unwrap();
        let spec = GroupSpec::new(IndexMap::from([(
            "all".to_string(),
            vec!["N1".into(), "N2".into(), "N3".into(), "N4".into()],
        )]))
        .unwrap();
        let stats = group_stats(recomputed.leaves(), &spec, eps()).unwrap();
        assert!((stats.shares["all"] - 1.0).abs() < 1e-12);
        assert_eq!(stats.group_entropy, 0.0);
        assert_eq!(stats.dominant.as_deref(), Some("all"));
    }

    #[test]
    fn mirrored_groups_tie_break_lexicographically() {
        let leaves = Snapshot::from_channels(
            0,
            [
                ("a1".to_string(), Channel::new(0.25, 0.0, 0.5).unwrap()),
                ("a2".to_string(), Channel::new(0.25, 0.0, 0.7).unwrap()),
                ("b1".to_string(), Channel::new(0.25, 0.0, 0.5).unwrap()),
                ("b2".to_string(), Channel::new(0.25, 0.0, 0.7).unwrap()),
            ],
        )
        .unwrap();
        let spec = GroupSpec::new(IndexMap::from([
            ("zeta".to_string(), vec!["a1".to_string(), "a2".to_string()]),
            (
                "alpha".to_string(),
                vec!["b1".to_string(), "b2".to_string()],
            ),
        ]))
        .unwrap();
        let stats = group_stats(&leaves, &spec, eps()).unwrap();
        assert_eq!(stats.shares["zeta"], stats.shares["alpha"]);
        assert!((stats.shares["zeta"] - 0.5).abs() < 1e-12);
        assert!((stats.group_entropy - 1.0).abs() < 1e-12);
        assert_eq!(stats.dominant.as_deref(), Some("alpha"));
    }

    #[test]
    fn no_dominant_group_without_mass() {
        let leaves =
            Snapshot::from_channels(0, [("perfect".to_string(), Channel::unit(1.0).unwrap())])
                .unwrap();
        let spec = GroupSpec::new(IndexMap::from([(
            "g".to_string(),
            vec!["perfect".to_string()],
        )]))
        .unwrap();
        let stats = group_stats(&leaves, &spec, eps()).unwrap();
        assert_eq!(stats.dominant, None);
        assert_eq!(stats.total, 0.0);
    }

    #[test]
    fn unknown_leaf_in_group_is_an_error() {
        let recomputed = recompute_parents(&demo_hierarchy()).unwrap();
        let spec =
            GroupSpec::new(IndexMap::from([("g".to_string(), vec!["N9".to_string()])])).unwrap();
        assert_eq!(
            group_stats(recomputed.leaves(), &spec, eps()).unwrap_err(),
            OrganisationError::UnknownLeaf {
                group: "g".into(),
                leaf: "N9".into()
            }
        );
    }

    #[test]
    fn overlapping_groups_are_rejected() {
        assert_eq!(
            GroupSpec::new(IndexMap::from([
                ("g1".to_string(), vec!["N1".to_string()]),
                ("g2".to_string(), vec!["N1".to_string()]),
            ]))
            .unwrap_err(),
            OrganisationError::OverlappingGroups("N1".into())
        );
    }

    #[test]
    fn hierarchy_validation_catches_structural_defects() {
        let root =
            Snapshot::from_channels(0, [("L".to_string(), Channel::new(1.0, 0.0, 0.5).unwrap())])
                .unwrap();
        let leaves = Snapshot::from_channels(
            0,
            [
                ("a".to_string(), Channel::new(0.5, 0.0, 0.5).unwrap()),
                ("b".to_string(), Channel::new(0.5, 0.0, 0.5).unwrap()),
            ],
        )
        .unwrap();
        // childless non-leaf
        assert_eq!(
            Hierarchy::new(vec![root.clone(), leaves.clone()], IndexMap::new()).unwrap_err(),
            OrganisationError::ChildlessParent("L".into())
        );
        // orphan child
        let children = IndexMap::from([("L".to_string(), vec!["a".to_string()])]);
        assert_eq!(
            Hierarchy::new(vec![root.clone(), leaves.clone()], children).unwrap_err(),
            OrganisationError::OrphanChild {
                child: "b".into(),
                depth: 1
            }
        );
        // double-claimed child
        let mid = Snapshot::from_channels(
            0,
            [
                ("H1".to_string(), Channel::new(0.5, 0.0, 0.5).unwrap()),
                ("H2".to_string(), Channel::new(0.5, 0.0, 0.5).unwrap()),
            ],
        )
        .unwrap();
        let children = IndexMap::from([
            ("L".to_string(), vec!["H1".to_string(), "H2".to_string()]),
            ("H1".to_string(), vec!["a".to_string(), "b".to_string()]),
            ("H2".to_string(), vec!["a".to_string()]),
        ]);
        assert_eq!(
            Hierarchy::new(vec![root, mid, leaves], children).unwrap_err(),
            OrganisationError::MultipleParents("a".into())
        );
    }
}
