use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::SquareMatrix;

/// Row Gershgorin disc `{z : |z − center| ≤ radius}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disc {
    pub center: f64,
    pub radius: f64,
}

impl Disc {
    pub fn left(&self) -> f64 {
        self.center - self.radius
    }

    pub fn right(&self) -> f64 {
        self.center + self.radius
    }

    /// Tangent discs count as overlapping.
    pub fn overlaps(&self, other: &Disc) -> bool {
        (self.center - other.center).abs() <= self.radius + other.radius
    }

    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        self.distance(z) <= tol
    }

    /// Distance from `z` to the disc, zero inside.
    pub fn distance(&self, z: Complex64) -> f64 {
        ((z - Complex64::new(self.center, 0.0)).norm() - self.radius).max(0.0)
    }
}

/// Groups of disc indices whose unions are connected and mutually disjoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscPartition {
    pub groups: Vec<Vec<usize>>,
}

impl DiscPartition {
    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn group_of(&self, disc: usize) -> Option<usize> {
        self.groups.iter().position(|g| g.contains(&disc))
    }
}

/// `Σ_{j≠i} |a_ij|` for each row.
pub fn deleted_row_sums(a: &SquareMatrix) -> Vec<f64> {
    (0..a.dim())
        .map(|i| {
            a.row(i)
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, v)| v.abs())
                .sum()
        })
        .collect()
}

pub fn gershgorin_discs(a: &SquareMatrix) -> Vec<Disc> {
    deleted_row_sums(a)
        .into_iter()
        .enumerate()
        .map(|(i, radius)| Disc {
            center: a[(i, i)],
            radius,
        })
        .collect()
}

/// Transitive closure of the overlap relation.
///
/// Centers are real, so two discs overlap exactly when their real-axis
/// intervals do; a sweep over intervals sorted by left end finds the
/// components. Groups come out ordered by leftmost extent, indices ascending
/// within each group.
pub fn connected_components(discs: &[Disc]) -> DiscPartition {
    let mut order: Vec<usize> = (0..discs.len()).collect();
    order.sort_by(|&a, &b| discs[a].left().total_cmp(&discs[b].left()).then(a.cmp(&b)));

    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut reach = f64::NEG_INFINITY;
    for idx in order {
        let d = &discs[idx];
        match groups.last_mut() {
            Some(group) if d.left() <= reach => {
                group.push(idx);
                reach = reach.max(d.right());
            }
            _ => {
                groups.push(vec![idx]);
                reach = d.right();
            }
        }
    }
    for g in &mut groups {
        g.sort_unstable();
    }
    DiscPartition { groups }
}

/// True when every disc in `a` is strictly separated from every disc in `b`.
pub fn strictly_disjoint(discs: &[Disc], a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|&i| {
        b.iter().all(|&j| {
            let (di, dj) = (&discs[i], &discs[j]);
            (di.center - dj.center).abs() > di.radius + dj.radius
        })
    })
}

/// Distance from `z` to the union of the discs listed in `group`.
pub fn distance_to_union(discs: &[Disc], group: &[usize], z: Complex64) -> f64 {
    group
        .iter()
        .map(|&i| discs[i].distance(z))
        .fold(f64::INFINITY, f64::min)
}
