use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::KdTree;

/// Connected components of the graph joining points at most `radius` apart.
///
/// Components with fewer than `min_points` members get id 0; the rest are
/// numbered from 1 in order of their lowest point index.
pub fn euclidean_clusters(points: &[[f64; 3]], radius: f64, min_points: usize) -> Vec<u32> {
    let tree = KdTree::new(points.to_vec());
    let mut component = vec![u32::MAX; points.len()];
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::new();
    for seed in 0..points.len() {
        if component[seed] != u32::MAX {
            continue;
        }
        let c = members.len() as u32;
        let mut list = vec![seed];
        component[seed] = c;
        queue.push_back(seed);
        while let Some(i) = queue.pop_front() {
            for j in tree.within_radius(&points[i], radius) {
                if component[j] == u32::MAX {
                    component[j] = c;
                    list.push(j);
                    queue.push_back(j);
                }
            }
        }
        members.push(list);
    }
    let mut ids = vec![0u32; points.len()];
    let mut next = 0;
    for list in &members {
        if list.len() < min_points {
            continue;
        }
        next += 1;
        for &i in list {
            ids[i] = next;
        }
    }
    ids
}
