//! Brute-force oracles and graph generators for the acceptance and
//! invariant suites. Everything here works on a plain adjacency matrix and
//! never calls the library's graph algorithms, so agreement between the
//! two is meaningful.

#![allow(dead_code)]

use rand::Rng;

use rand_chacha::ChaCha8Rng;

/// Dense adjacency-matrix graph for oracle computations.
#[derive(Debug, Clone)]
pub struct MatrixGraph {
    pub n: usize,
    pub adj: Vec<Vec<bool>>,
}

impl MatrixGraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![vec![false; n]; n];
        for &(a, b) in edges {
            if a != b {
                adj[a][b] = true;
                adj[b][a] = true;
            }
        }
        MatrixGraph { n, adj }
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in (a + 1)..self.n {
                if self.adj[a][b] {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&x| x).count()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&u| self.adj[v][u]).collect()
    }
}

/// All-pairs distances via boolean matrix powers: d(i,j) is the smallest k
/// with (A^k)[i][j] set.
pub fn matrix_power_distances(g: &MatrixGraph) -> Vec<Vec<Option<usize>>> {
    let n = g.n;
    let mut dist = vec![vec![None; n]; n];
    for i in 0..n {
        dist[i][i] = Some(0);
    }
    let mut reach = g.adj.clone();
    for k in 1..=n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][j] && dist[i][j].is_none() {
                    dist[i][j] = Some(k);
                }
            }
        }
        // reach = reach * A (boolean product)
        let mut next = vec![vec![false; n]; n];
        for i in 0..n {
            for m in 0..n {
                if reach[i][m] {
                    for j in 0..n {
                        if g.adj[m][j] {
                            next[i][j] = true;
                        }
                    }
                }
            }
        }
        reach = next;
    }
    dist
}

/// All simple paths from `s` to `t` of exactly `len` edges, as explicit
/// vertex sequences.
fn simple_paths_of_length(g: &MatrixGraph, s: usize, t: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut path = vec![s];
    let mut on_path = vec![false; g.n];
    on_path[s] = true;
    fn dfs(
        g: &MatrixGraph,
        t: usize,
        len: usize,
        path: &mut Vec<usize>,
        on_path: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let v = *path.last().unwrap();
        if path.len() == len + 1 {
            if v == t {
                out.push(path.clone());
            }
            return;
        }
        for u in 0..g.n {
            if g.adj[v][u] && !on_path[u] {
                on_path[u] = true;
                path.push(u);
                dfs(g, t, len, path, on_path, out);
                path.pop();
                on_path[u] = false;
            }
        }
    }
    dfs(g, t, len, &mut path, &mut on_path, &mut out);
    out
}

/// Betweenness by explicit geodesic enumeration: every ordered pair's
/// shortest paths are listed and the interior passes counted, normalized
/// by N^2.
pub fn betweenness_oracle(g: &MatrixGraph) -> Vec<f64> {
    let n = g.n;
    let dist = matrix_power_distances(g);
    let mut score = vec![0.0; n];
    for s in 0..n {
        for t in 0..n {
            if s == t {
                continue;
            }
            let Some(d) = dist[s][t] else { continue };
            let geodesics = simple_paths_of_length(g, s, t, d);
            let total = geodesics.len() as f64;
            for i in 0..n {
                if i == s || i == t {
                    continue;
                }
                let through = geodesics
                    .iter()
                    .filter(|p| p[1..p.len() - 1].contains(&i))
                    .count();
                score[i] += through as f64 / total;
            }
        }
    }
    for v in &mut score {
        *v /= (n * n) as f64;
    }
    score
}

/// Betweenness via the geodesic-count product rule: n_sit = sigma(s,i) *
/// sigma(i,t) when the distances add up. Independent of both Brandes'
/// accumulation and the explicit enumeration above.
pub fn betweenness_sigma_oracle(g: &MatrixGraph) -> Vec<f64> {
    let n = g.n;
    let dist = matrix_power_distances(g);
    // Geodesic counts by dynamic programming over distance layers.
    let mut sigma = vec![vec![0.0f64; n]; n];
    for s in 0..n {
        sigma[s][s] = 1.0;
        let mut order: Vec<usize> = (0..n).filter(|&v| dist[s][v].is_some()).collect();
        order.sort_by_key(|&v| dist[s][v].unwrap());
        for &v in &order {
            if v == s {
                continue;
            }
            let dv = dist[s][v].unwrap();
            sigma[s][v] = (0..n)
                .filter(|&u| g.adj[u][v] && dist[s][u] == Some(dv - 1))
                .map(|u| sigma[s][u])
                .sum();
        }
    }
    let mut score = vec![0.0; n];
    for i in 0..n {
        for s in 0..n {
            for t in 0..n {
                if s == i || t == i || s == t {
                    continue;
                }
                let (Some(dsi), Some(dit), Some(dst)) = (dist[s][i], dist[i][t], dist[s][t])
                else {
                    continue;
                };
                if dsi + dit == dst {
                    score[i] += sigma[s][i] * sigma[i][t] / sigma[s][t];
                }
            }
        }
    }
    for v in &mut score {
        *v /= (n * n) as f64;
    }
    score
}

/// Textbook Pearson correlation over the degree pairs listed per edge in
/// both orientations. `None` when the correlation is undefined.
pub fn assortativity_oracle(g: &MatrixGraph) -> Option<f64> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (a, b) in g.edges() {
        let (ka, kb) = (g.degree(a) as f64, g.degree(b) as f64);
        xs.push(ka);
        ys.push(kb);
        xs.push(kb);
        ys.push(ka);
    }
    if xs.is_empty() {
        return None;
    }
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let syy: f64 = ys.iter().map(|y| y * y).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
    let cov = n * sxy - sx * sy;
    let var_x = n * sxx - sx * sx;
    let var_y = n * syy - sy * sy;
    if var_x <= 0.0 || var_y <= 0.0 {
        return None;
    }
    Some(cov / (var_x * var_y).sqrt())
}

/// Global clustering by the literal triangle/triple census over vertex
/// triples, plus the local fractions.
pub fn clustering_oracle(g: &MatrixGraph) -> (Vec<f64>, f64) {
    let n = g.n;
    let mut triangles = 0.0;
    let mut triples = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let (ij, ik, jk) = (g.adj[i][j], g.adj[i][k], g.adj[j][k]);
                if ij && ik && jk {
                    triangles += 1.0;
                }
                triples += (ij && ik) as u8 as f64
                    + (ij && jk) as u8 as f64
                    + (ik && jk) as u8 as f64;
            }
        }
    }
    let global = if triples > 0.0 {
        3.0 * triangles / triples
    } else {
        0.0
    };
    let mut local = vec![0.0; n];
    for v in 0..n {
        let neigh = g.neighbors(v);
        if neigh.len() < 2 {
            continue;
        }
        let mut links = 0usize;
        for (ai, &a) in neigh.iter().enumerate() {
            for &b in &neigh[ai + 1..] {
                if g.adj[a][b] {
                    links += 1;
                }
            }
        }
        local[v] = links as f64 / (neigh.len() * (neigh.len() - 1) / 2) as f64;
    }
    (local, global)
}

/// Per-node and network mean geodesic distances over reachable pairs,
/// from the matrix-power distance oracle.
pub fn path_length_oracle(g: &MatrixGraph) -> (Vec<Option<f64>>, Option<f64>, f64) {
    let dist = matrix_power_distances(g);
    let n = g.n;
    let mut per_node = vec![None; n];
    let mut total = 0.0;
    let mut pairs = 0usize;
    for i in 0..n {
        let mut sum = 0usize;
        let mut reached = 0usize;
        for j in 0..n {
            if i == j {
                continue;
            }
            if let Some(d) = dist[i][j] {
                sum += d;
                reached += 1;
            }
        }
        if reached > 0 {
            per_node[i] = Some(sum as f64 / reached as f64);
            total += sum as f64;
            pairs += reached;
        }
    }
    let network = if pairs > 0 { Some(total / pairs as f64) } else { None };
    let ordered = n * n.saturating_sub(1);
    let unreachable = if ordered > 0 {
        (ordered - pairs) as f64 / ordered as f64
    } else {
        0.0
    };
    (per_node, network, unreachable)
}

/// Self-avoiding-walk destination distribution by collecting every walk
/// of length `h` as an explicit path, multiplying its stepwise choice
/// probabilities, then keeping only endpoints on the h-th concentric
/// level and renormalizing.
pub fn saw_oracle(g: &MatrixGraph, start: usize, h: usize) -> Vec<(usize, f64)> {
    let mut walks: Vec<(Vec<usize>, f64)> = Vec::new();
    let mut frontier = vec![(vec![start], 1.0f64)];
    for _ in 0..h {
        let mut next = Vec::new();
        for (path, prob) in frontier {
            let v = *path.last().unwrap();
            let options: Vec<usize> = g
                .neighbors(v)
                .into_iter()
                .filter(|u| !path.contains(u))
                .collect();
            if options.is_empty() {
                continue;
            }
            let p = prob / options.len() as f64;
            for u in options {
                let mut longer = path.clone();
                longer.push(u);
                next.push((longer, p));
            }
        }
        frontier = next;
    }
    walks.extend(frontier);
    let dist = matrix_power_distances(g);
    let mut mass = std::collections::BTreeMap::new();
    for (path, prob) in walks {
        let end = *path.last().unwrap();
        if dist[start][end] == Some(h) {
            *mass.entry(end).or_insert(0.0) += prob;
        }
    }
    let total: f64 = mass.values().sum();
    if total <= 0.0 {
        return Vec::new();
    }
    mass.into_iter().map(|(v, m)| (v, m / total)).collect()
}

/// Accessibility from the oracle SAW distribution.
pub fn accessibility_oracle(g: &MatrixGraph, start: usize, h: usize) -> f64 {
    let dist = saw_oracle(g, start, h);
    if dist.is_empty() {
        return 0.0;
    }
    (-dist
        .iter()
        .map(|&(_, p)| if p > 0.0 { p * p.ln() } else { 0.0 })
        .sum::<f64>())
    .exp()
}

/// Number of nodes on the h-th concentric level of `start`.
pub fn concentric_level_size(g: &MatrixGraph, start: usize, h: usize) -> usize {
    let dist = matrix_power_distances(g);
    (0..g.n).filter(|&j| dist[start][j] == Some(h)).count()
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], v: usize) -> usize {
        let mut v = v;
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let root = find(&mut parent, 0);
    (1..n).all(|v| find(&mut parent, v) == root)
}

/// Every connected labeled graph on exactly `n` nodes, as edge lists.
pub fn all_connected_graphs(n: usize) -> Vec<Vec<(usize, usize)>> {
    let all_pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| ((a + 1)..n).map(move |b| (a, b)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << all_pairs.len()) {
        let edges: Vec<(usize, usize)> = all_pairs
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        if connected(n, &edges) {
            out.push(edges);
        }
    }
    out
}

/// Seeded Erdos-Renyi-style random edge list on `n` nodes.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            if rng.random_range(0.0..1.0) < p {
                edges.push((a, b));
            }
        }
    }
    edges
}
