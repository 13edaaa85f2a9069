//! Planar networks, path matrices and Lindström counts.
//!
//! Postnikov's construction puts a vertex on each white cell of a Cauchon
//! diagram. Every row carries a horizontal line from its source on the
//! right edge leftwards through the row's vertices, and every column a
//! vertical line from its topmost vertex down to the column's sink on the
//! bottom edge. The Cauchon condition guarantees that lines meet only at
//! vertices.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use itertools::Itertools;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::diagram::CauchonDiagram;
use crate::error::{Error, Result};
use crate::exactmat::{Matrix, MinorIndex, Rat, RatLiteral, RatMatrix};
use crate::symfun::parse::parse_rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub name: String,
    pub x: i64,
    pub y: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub weight: Rat,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct EdgeJson {
    from: usize,
    to: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weight: Option<RatLiteral>,
}

/// A directed acyclic network with numbered sources and sinks. Vertices
/// are referred to by index; sources and sinks list vertex indices in
/// label order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "NetworkJson", into = "NetworkJson")]
pub struct PlanarNetwork {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub sources: Vec<usize>,
    pub sinks: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct NetworkJson {
    vertices: Vec<Vertex>,
    edges: Vec<EdgeJson>,
    sources: Vec<usize>,
    sinks: Vec<usize>,
}

impl TryFrom<NetworkJson> for PlanarNetwork {
    type Error = Error;
    fn try_from(j: NetworkJson) -> Result<PlanarNetwork> {
        let edges = j
            .edges
            .into_iter()
            .map(|e| {
                let weight = match e.weight {
                    None => Rat::one(),
                    Some(RatLiteral::Int(n)) => Rat::from_integer(n.into()),
                    Some(RatLiteral::Text(s)) => parse_rational(&s)?,
                };
                Ok(Edge { from: e.from, to: e.to, weight })
            })
            .collect::<Result<_>>()?;
        PlanarNetwork::new(j.vertices, edges, j.sources, j.sinks)
    }
}

impl From<PlanarNetwork> for NetworkJson {
    fn from(n: PlanarNetwork) -> Self {
        NetworkJson {
            vertices: n.vertices,
            edges: n
                .edges
                .into_iter()
                .map(|e| EdgeJson {
                    from: e.from,
                    to: e.to,
                    weight: (!e.weight.is_one()).then(|| RatLiteral::Text(e.weight.to_string())),
                })
                .collect(),
            sources: n.sources,
            sinks: n.sinks,
        }
    }
}

/// Default limit on the number of source-to-sink paths enumerated by
/// [`nonintersecting_count`].
pub const PATH_LIMIT: usize = 1_000_000;

impl PlanarNetwork {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>, sources: Vec<usize>, sinks: Vec<usize>) -> Result<Self> {
        let n = vertices.len();
        if edges.iter().any(|e| e.from >= n || e.to >= n) || sources.iter().chain(&sinks).any(|&v| v >= n) {
            return Err(Error::domain("network refers to a missing vertex"));
        }
        if sources.iter().chain(&sinks).duplicates().next().is_some() {
            return Err(Error::domain("sources and sinks must be distinct vertices"));
        }
        let net = PlanarNetwork { vertices, edges, sources, sinks };
        net.topological_order()?;
        Ok(net)
    }

    pub fn from_json(text: &str) -> Result<PlanarNetwork> {
        serde_json::from_str(text).map_err(|e| Error::parse(format!("network JSON: {e}")))
    }

    fn out_edges(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.vertices.len()];
        for (k, e) in self.edges.iter().enumerate() {
            out[e.from].push(k);
        }
        out
    }

    /// Kahn's algorithm; fails on a directed cycle.
    pub fn topological_order(&self) -> Result<Vec<usize>> {
        let n = self.vertices.len();
        let mut indeg = vec![0usize; n];
        for e in &self.edges {
            indeg[e.to] += 1;
        }
        let out = self.out_edges();
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &k in &out[v] {
                let w = self.edges[k].to;
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        if order.len() != n {
            return Err(Error::domain("network has a directed cycle"));
        }
        Ok(order)
    }

    /// Graphviz rendering with vertices pinned at their coordinates.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph network {\n  node [shape=point];\n");
        for (k, v) in self.vertices.iter().enumerate() {
            let label = if self.sources.contains(&k) || self.sinks.contains(&k) {
                format!(", shape=plaintext, label=\"{}\"", v.name)
            } else {
                String::new()
            };
            let _ = writeln!(s, "  v{k} [pos=\"{},{}!\"{label}];", v.x, v.y);
        }
        for e in &self.edges {
            let w = if e.weight.is_one() { String::new() } else { format!(" [label=\"{}\"]", e.weight) };
            let _ = writeln!(s, "  v{} -> v{}{w};", e.from, e.to);
        }
        s.push_str("}\n");
        s
    }
}

/// Weighted path counts from every source to every sink.
pub fn path_matrix(n: &PlanarNetwork) -> Result<RatMatrix> {
    let order = n.topological_order()?;
    let out = n.out_edges();
    if n.sources.is_empty() || n.sinks.is_empty() {
        return Err(Error::domain("network needs at least one source and one sink"));
    }
    let mut m = Matrix::from_fn(n.sources.len(), n.sinks.len(), |_, _| Rat::zero());
    for (r, &s) in n.sources.iter().enumerate() {
        let mut acc = vec![Rat::zero(); n.vertices.len()];
        acc[s] = Rat::one();
        for &v in &order {
            if acc[v].is_zero() {
                continue;
            }
            let here = acc[v].clone();
            for &k in &out[v] {
                let e = &n.edges[k];
                acc[e.to] += &here * &e.weight;
            }
        }
        for (c, &t) in n.sinks.iter().enumerate() {
            m.set(r, c, acc[t].clone());
        }
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LindstromCount {
    /// Sum over vertex-disjoint families of `sign(pairing) * weight`.
    pub signed: Rat,
    /// Number of vertex-disjoint families, over every pairing of sources
    /// with sinks.
    pub families: usize,
}

/// A path as its vertex list, with its weight.
type WeightedPath = (Vec<usize>, Rat);

fn all_paths(n: &PlanarNetwork, from: usize, to: usize, out: &[Vec<usize>], limit: usize) -> Result<Vec<WeightedPath>> {
    let mut paths = Vec::new();
    let mut stack = vec![(from, vec![from], Rat::one())];
    while let Some((v, path, w)) = stack.pop() {
        if v == to {
            paths.push((path, w));
            if paths.len() > limit {
                return Err(Error::Resource(format!("more than {limit} paths between a source and a sink")));
            }
            continue;
        }
        for &k in &out[v] {
            let e = &n.edges[k];
            let mut p = path.clone();
            p.push(e.to);
            stack.push((e.to, p, &w * &e.weight));
        }
    }
    Ok(paths)
}

/// Brute-force Lindström count for sources `ix.rows()` and sinks
/// `ix.cols()` (1-based labels).
pub fn nonintersecting_count(n: &PlanarNetwork, ix: &MinorIndex) -> Result<LindstromCount> {
    nonintersecting_count_with_limit(n, ix, PATH_LIMIT)
}

pub fn nonintersecting_count_with_limit(n: &PlanarNetwork, ix: &MinorIndex, limit: usize) -> Result<LindstromCount> {
    if !ix.fits(n.sources.len(), n.sinks.len()) {
        return Err(Error::domain(format!("minor {ix} does not fit the network's sources and sinks")));
    }
    let out = n.out_edges();
    let k = ix.size();
    // paths[a][b]: paths from the a-th chosen source to the b-th chosen sink.
    let mut paths = Vec::with_capacity(k);
    for &r in ix.rows() {
        let mut row = Vec::with_capacity(k);
        for &c in ix.cols() {
            row.push(all_paths(n, n.sources[r - 1], n.sinks[c - 1], &out, limit)?);
        }
        paths.push(row);
    }
    let mut signed = Rat::zero();
    let mut families = 0usize;
    let mut used = vec![false; n.vertices.len()];
    for perm in (0..k).permutations(k) {
        let inversions = (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).filter(|&(a, b)| perm[a] > perm[b]).count();
        let sign = if inversions % 2 == 0 { Rat::one() } else { -Rat::one() };
        let mut total = Rat::zero();
        let mut count = 0usize;
        families_rec(&paths, &perm, 0, &mut used, Rat::one(), &mut total, &mut count);
        signed += sign * total;
        families += count;
    }
    Ok(LindstromCount { signed, families })
}

fn families_rec(
    paths: &[Vec<Vec<WeightedPath>>],
    perm: &[usize],
    a: usize,
    used: &mut [bool],
    weight: Rat,
    total: &mut Rat,
    count: &mut usize,
) {
    if a == perm.len() {
        *total += weight;
        *count += 1;
        return;
    }
    for (path, w) in &paths[a][perm[a]] {
        if path.iter().any(|&v| used[v]) {
            continue;
        }
        for &v in path {
            used[v] = true;
        }
        families_rec(paths, perm, a + 1, used, &weight * w, total, count);
        for &v in path {
            used[v] = false;
        }
    }
}

/// Postnikov's network of a diagram, all weights 1.
///
/// Cell `(i, a)` sits at `x = a`, `y = m + 1 - i`. Source `s_i` is at
/// `x = p + 1` on row `i`; sink `t_a` is at `y = 0` below column `a`.
pub fn postnikov_network(c: &CauchonDiagram) -> PlanarNetwork {
    let (m, p) = (c.m(), c.p());
    let mut vertices = Vec::new();
    let mut at: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let y_of = |i: usize| (m + 1 - i) as i64;
    for i in 1..=m {
        vertices.push(Vertex { name: format!("s{i}"), x: p as i64 + 1, y: y_of(i) });
    }
    for a in 1..=p {
        vertices.push(Vertex { name: format!("t{a}"), x: a as i64, y: 0 });
    }
    for (i, a) in c.white_cells() {
        at.insert((i, a), vertices.len());
        vertices.push(Vertex { name: format!("d{i}{a}"), x: a as i64, y: y_of(i) });
    }
    let mut edges = Vec::new();
    let mut edge = |from: usize, to: usize| edges.push(Edge { from, to, weight: Rat::one() });
    for i in 1..=m {
        let mut prev = i - 1;
        for a in (1..=p).rev() {
            if let Some(&v) = at.get(&(i, a)) {
                edge(prev, v);
                prev = v;
            }
        }
    }
    for a in 1..=p {
        let mut prev = None;
        for i in 1..=m {
            if let Some(&v) = at.get(&(i, a)) {
                if let Some(u) = prev {
                    edge(u, v);
                }
                prev = Some(v);
            }
        }
        if let Some(u) = prev {
            edge(u, m + a - 1);
        }
    }
    PlanarNetwork { vertices, edges, sources: (0..m).collect(), sinks: (m..m + p).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::{all_minor_indices, is_tnn_bruteforce, minor, rat};

    fn fig5() -> CauchonDiagram {
        CauchonDiagram::parse("101/001/111").unwrap()
    }

    #[test]
    fn postnikov_example() {
        let net = postnikov_network(&fig5());
        let pm = path_matrix(&net).unwrap();
        assert_eq!(pm, RatMatrix::from_ints(&[&[2, 1, 1], &[1, 1, 1], &[1, 1, 1]]));
        let ix = |s: &str| s.parse::<MinorIndex>().unwrap();
        assert_eq!(nonintersecting_count(&net, &ix("[1,2|2,3]")).unwrap().signed, rat(0));
        let c = nonintersecting_count(&net, &ix("[1,2|1,2]")).unwrap();
        assert_eq!((c.signed, c.families), (rat(1), 1));
    }

    #[test]
    fn trivial_networks() {
        let black = postnikov_network(&CauchonDiagram::all_black(2, 3));
        assert_eq!(path_matrix(&black).unwrap(), RatMatrix::zeros(2, 3));
        let white = postnikov_network(&CauchonDiagram::all_white(1, 1));
        assert_eq!(path_matrix(&white).unwrap(), RatMatrix::from_ints(&[&[1]]));
        let v = |name: &str, x| Vertex { name: name.into(), x, y: 0 };
        let single = PlanarNetwork::new(
            vec![v("s1", 1), v("t1", 0)],
            vec![Edge { from: 0, to: 1, weight: Rat::new(3.into(), 2.into()) }],
            vec![0],
            vec![1],
        )
        .unwrap();
        assert_eq!(*path_matrix(&single).unwrap().get(0, 0), Rat::new(3.into(), 2.into()));
        let bare = PlanarNetwork::new(vec![v("s1", 1), v("t1", 0)], vec![], vec![0], vec![1]).unwrap();
        assert_eq!(path_matrix(&bare).unwrap(), RatMatrix::zeros(1, 1));
    }

    #[test]
    fn cycle_rejected() {
        let v = |name: &str| Vertex { name: name.into(), x: 0, y: 0 };
        let e = |from, to| Edge { from, to, weight: Rat::one() };
        let r = PlanarNetwork::new(vec![v("a"), v("b"), v("c")], vec![e(0, 1), e(1, 2), e(2, 1)], vec![0], vec![2]);
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn json_round_trip() {
        let net = postnikov_network(&fig5());
        let text = serde_json::to_string(&net).unwrap();
        assert_eq!(PlanarNetwork::from_json(&text).unwrap(), net);
        assert!(net.to_dot().starts_with("digraph"));
    }

    #[test]
    fn lindstrom_small() {
        for (m, p) in [(1, 2), (2, 2), (2, 3)] {
            for c in crate::diagram::enumerate_diagrams(m, p).unwrap() {
                let net = postnikov_network(&c);
                let pm = path_matrix(&net).unwrap();
                assert!(is_tnn_bruteforce(&pm).is_tnn);
                for ix in all_minor_indices(m, p) {
                    let l = nonintersecting_count(&net, &ix).unwrap();
                    assert_eq!(minor(&pm, &ix).unwrap(), l.signed, "{c}{ix}");
                    assert_eq!(l.signed, rat(l.families as i64));
                }
            }
        }
    }
}
