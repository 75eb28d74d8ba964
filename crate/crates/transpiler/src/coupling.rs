//! Undirected device connectivity graphs.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use vdcut_core::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapKind {
    FullyConnected,
    Linear,
    HeavyHex(usize),
    Custom,
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapKind::FullyConnected => f.write_str("full"),
            MapKind::Linear => f.write_str("linear"),
            MapKind::HeavyHex(d) => write!(f, "heavyhex:{d}"),
            MapKind::Custom => f.write_str("custom"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingMap {
    qubits: usize,
    edges: Vec<(usize, usize)>,
    kind: MapKind,
    neighbors: Vec<Vec<usize>>,
    distance: Vec<Vec<usize>>,
}

impl CouplingMap {
    /// Builds a map from an edge list. Edges are normalised to `(min, max)`,
    /// deduplicated and sorted; the graph must be connected.
    pub fn new(qubits: usize, edges: impl IntoIterator<Item = (usize, usize)>, kind: MapKind) -> Result<Self> {
        if qubits == 0 {
            return Err(Error::InvalidCouplingMap("no qubits".into()));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= qubits || b >= qubits {
                return Err(Error::InvalidCouplingMap(format!("edge ({a},{b}) outside {qubits} qubits")));
            }
            if a == b {
                return Err(Error::InvalidCouplingMap(format!("self-loop on {a}")));
            }
            set.insert((a.min(b), a.max(b)));
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut neighbors = vec![Vec::new(); qubits];
        for &(a, b) in &edges {
            neighbors[a].push(b);
            neighbors[b].push(a);
        }
        for n in &mut neighbors {
            n.sort_unstable();
        }
        let distance: Vec<Vec<usize>> = (0..qubits).map(|s| bfs_distances(&neighbors, s)).collect();
        if distance[0].contains(&usize::MAX) {
            return Err(Error::InvalidCouplingMap("graph is not connected".into()));
        }
        Ok(Self { qubits, edges, kind, neighbors, distance })
    }

    pub fn custom(qubits: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::new(qubits, edges, MapKind::Custom)
    }

    pub fn fully_connected(qubits: usize) -> Self {
        let edges = (0..qubits).flat_map(|a| (a + 1..qubits).map(move |b| (a, b)));
        Self::new(qubits, edges, MapKind::FullyConnected).expect("complete graph is connected")
    }

    pub fn linear(qubits: usize) -> Self {
        Self::new(qubits, (1..qubits).map(|q| (q - 1, q)), MapKind::Linear).expect("path is connected")
    }

    /// Heavy-hex lattice of odd distance `d`: `d` rows of `2d+1` qubits
    /// (the first row lacks its last column, the last row its first)
    /// joined by bridge qubits every fourth column, alternating offset.
    /// `d = 7` yields the 127-qubit Eagle layout.
    pub fn heavy_hex(d: usize) -> Result<Self> {
        if d < 3 || d.is_multiple_of(2) {
            return Err(Error::InvalidCouplingMap(format!("heavy-hex distance must be odd and >= 3, got {d}")));
        }
        let cols = 2 * d + 1;
        let row_cols = |r: usize| -> Vec<usize> {
            (0..cols).filter(|&c| !(r == 0 && c == cols - 1) && !(r == d - 1 && c == 0)).collect()
        };
        let mut index = vec![vec![None; cols]; d];
        let mut next = 0;
        let mut edges = Vec::new();
        let mut bridges_below: Vec<Vec<(usize, usize)>> = vec![Vec::new(); d];
        for r in 0..d {
            for c in row_cols(r) {
                index[r][c] = Some(next);
                if c > 0 {
                    if let Some(left) = index[r][c - 1] {
                        edges.push((left, next));
                    }
                }
                next += 1;
            }
            if r + 1 < d {
                let offset = if r % 2 == 0 { 0 } else { 2 };
                for c in (offset..cols).step_by(4) {
                    bridges_below[r].push((c, next));
                    edges.push((index[r][c].expect("bridge anchor exists"), next));
                    next += 1;
                }
            }
        }
        for r in 0..d.saturating_sub(1) {
            for &(c, bridge) in &bridges_below[r] {
                let below = index[r + 1][c].expect("bridge target exists");
                edges.push((bridge, below));
            }
        }
        Self::new(next, edges, MapKind::HeavyHex(d))
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn kind(&self) -> &MapKind {
        &self.kind
    }

    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.neighbors[q]
    }

    pub fn degree(&self, q: usize) -> usize {
        self.neighbors[q].len()
    }

    pub fn are_adjacent(&self, a: usize, b: usize) -> bool {
        self.neighbors[a].binary_search(&b).is_ok()
    }

    pub fn distance(&self, a: usize, b: usize) -> usize {
        self.distance[a][b]
    }

    /// One shortest path from `a` to `b`, inclusive of both ends.
    pub fn shortest_path(&self, a: usize, b: usize) -> Vec<usize> {
        let mut path = vec![a];
        let mut cur = a;
        while cur != b {
            cur = *self.neighbors[cur]
                .iter()
                .find(|&&n| self.distance[n][b] + 1 == self.distance[cur][b])
                .expect("connected graph has a descending neighbour");
            path.push(cur);
        }
        path
    }

    /// Physical qubit with the highest degree, lowest index on ties.
    pub fn hub(&self) -> usize {
        (0..self.qubits).max_by_key(|&q| (self.degree(q), std::cmp::Reverse(q))).unwrap_or(0)
    }

    /// Breadth-first order from the hub, neighbours visited in ascending index.
    pub fn bfs_order(&self) -> Vec<usize> {
        let start = self.hub();
        let mut seen = vec![false; self.qubits];
        let mut order = Vec::with_capacity(self.qubits);
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(q) = queue.pop_front() {
            order.push(q);
            for &n in &self.neighbors[q] {
                if !seen[n] {
                    seen[n] = true;
                    queue.push_back(n);
                }
            }
        }
        order
    }

    /// Connected sub-map on the first `size` qubits of [`bfs_order`](Self::bfs_order).
    /// Returns the sub-map and the physical index of each of its qubits.
    pub fn region(&self, size: usize) -> Result<(CouplingMap, Vec<usize>)> {
        if size > self.qubits {
            return Err(Error::DeviceTooSmall { width: size, device: self.qubits });
        }
        if size == self.qubits {
            return Ok((self.clone(), (0..self.qubits).collect()));
        }
        let mut chosen = self.bfs_order();
        chosen.truncate(size);
        chosen.sort_unstable();
        let local = |p: usize| chosen.binary_search(&p).ok();
        let edges: Vec<_> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| Some((local(a)?, local(b)?)))
            .collect();
        let kind = match self.kind {
            MapKind::FullyConnected => MapKind::FullyConnected,
            _ => MapKind::Custom,
        };
        Ok((CouplingMap::new(size, edges, kind)?, chosen))
    }
}

fn bfs_distances(neighbors: &[Vec<usize>], source: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; neighbors.len()];
    dist[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(q) = queue.pop_front() {
        for &n in &neighbors[q] {
            if dist[n] == usize::MAX {
                dist[n] = dist[q] + 1;
                queue.push_back(n);
            }
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heavy_hex_seven_has_eagle_size() {
        let m = CouplingMap::heavy_hex(7).unwrap();
        assert_eq!(m.qubits(), 127);
        assert_eq!(m.edges().len(), 144);
        assert!((0..127).all(|q| (1..=3).contains(&m.degree(q))));
    }

    #[test]
    fn heavy_hex_three() {
        let m = CouplingMap::heavy_hex(3).unwrap();
        assert_eq!(m.qubits(), 23);
        assert!(CouplingMap::heavy_hex(4).is_err());
    }

    #[test]
    fn disconnected_map_rejected() {
        assert!(CouplingMap::custom(3, [(0, 1)]).is_err());
        assert!(CouplingMap::custom(2, [(0, 2)]).is_err());
    }

    #[test]
    fn distances_on_line() {
        let m = CouplingMap::linear(5);
        assert_eq!(m.distance(0, 4), 4);
        assert_eq!(m.shortest_path(3, 1), vec![3, 2, 1]);
        assert!(m.are_adjacent(2, 3) && !m.are_adjacent(1, 3));
    }

    #[test]
    fn region_is_connected_and_sized() {
        let m = CouplingMap::heavy_hex(3).unwrap();
        let (sub, phys) = m.region(8).unwrap();
        assert_eq!(sub.qubits(), 8);
        assert_eq!(phys.len(), 8);
        for &(a, b) in sub.edges() {
            assert!(m.are_adjacent(phys[a], phys[b]));
        }
    }
}
