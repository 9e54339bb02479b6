use std::collections::{BTreeSet, HashMap, VecDeque};

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::Serialize;

use super::{euclidean, norm, Point, SpaceError};

/// Barycentric coordinates at or below this count as zero.
const BARY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Simplex {
    /// Sorted vertex indices.
    pub vertices: Vec<usize>,
    pub center: Point,
    /// Largest dimension of a simplex having this one as a face.
    pub max_star: usize,
}

impl Simplex {
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }
}

/// Affine data for barycentric coordinates on a maximal simplex.
#[derive(Debug, Clone, PartialEq)]
struct Chart {
    simplex: usize,
    origin: Point,
    /// Edge vectors `v_i - v_0`, one per row.
    edges: Vec<Point>,
    /// Rows of the pseudo-inverse of the edge matrix.
    pinv: Vec<Point>,
    /// Bounding box of the vertices, for a cheap rejection test.
    lo: Point,
    hi: Point,
}

/// A geometric simplicial complex. Simplices are identified by their index
/// in the order (dimension, vertex list). Adjacent simplices in the center
/// graph are pairs (face, coface); shortest routes between any two
/// simplices are precomputed as a next-hop table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimplicialComplex {
    vertices: Vec<Point>,
    simplices: Vec<Simplex>,
    #[serde(skip)]
    index: HashMap<Vec<usize>, usize>,
    #[serde(skip)]
    charts: Vec<Chart>,
    #[serde(skip)]
    neighbors: Vec<Vec<usize>>,
    #[serde(skip)]
    next_hop: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Builds the complex generated by `simplices` (closed under faces).
    pub fn new(vertices: Vec<Point>, simplices: Vec<Vec<usize>>) -> Result<Self, SpaceError> {
        let invalid = |m: String| SpaceError::Invalid(m);
        let d = vertices.first().map(|v| v.len()).ok_or_else(|| invalid("complex without vertices".into()))?;
        if d == 0 || vertices.iter().any(|v| v.len() != d || v.iter().any(|c| !c.is_finite())) {
            return Err(invalid("vertex coordinates must be finite with a common positive length".into()));
        }
        let mut all: BTreeSet<(usize, Vec<usize>)> = (0..vertices.len()).map(|v| (0, vec![v])).collect();
        for s in &simplices {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            if s.is_empty() || s.len() > d + 1 || s.iter().any(|&v| v >= vertices.len()) {
                return Err(invalid(format!("bad simplex {s:?}")));
            }
            for mask in 1u64..(1 << s.len()) {
                let face: Vec<usize> = s.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect();
                all.insert((face.len() - 1, face));
            }
        }
        let mut list: Vec<Simplex> = all
            .into_iter()
            .map(|(_, vs)| {
                let mut center = vec![0.0; d];
                for &v in &vs {
                    for (c, x) in center.iter_mut().zip(&vertices[v]) {
                        *c += x / vs.len() as f64;
                    }
                }
                Simplex { vertices: vs, center, max_star: 0 }
            })
            .collect();
        let index: HashMap<Vec<usize>, usize> = list.iter().enumerate().map(|(i, s)| (s.vertices.clone(), i)).collect();

        let n = list.len();
        let mut neighbors = vec![Vec::new(); n];
        for (i, s) in list.iter().enumerate() {
            let k = s.vertices.len();
            for mask in 1u64..(1 << k) - 1 {
                let face: Vec<usize> = s.vertices.iter().enumerate().filter(|(j, _)| mask >> j & 1 == 1).map(|(_, &v)| v).collect();
                let f = index[&face];
                neighbors[i].push(f);
                neighbors[f].push(i);
            }
        }
        for nb in &mut neighbors {
            nb.sort_unstable();
            nb.dedup();
        }
        for i in 0..n {
            let star = neighbors[i].iter().map(|&j| list[j].dim()).filter(|&k| k > list[i].dim()).max();
            list[i].max_star = star.unwrap_or(list[i].dim());
        }

        let mut charts = Vec::new();
        for (i, s) in list.iter().enumerate() {
            if s.max_star != s.dim() {
                continue;
            }
            let origin = DVector::from_vec(vertices[s.vertices[0]].clone());
            let edges = DMatrix::from_fn(d, s.dim(), |r, c| vertices[s.vertices[c + 1]][r] - origin[r]);
            if s.dim() > 0 {
                let sv = edges.clone().svd(false, false).singular_values;
                let scale = sv.max().max(1.0);
                if sv.min() <= 1e-10 * scale {
                    return Err(invalid(format!("simplex {:?} has affinely dependent vertices", s.vertices)));
                }
            }
            let pinv = if s.dim() == 0 {
                DMatrix::zeros(0, d)
            } else {
                edges.clone().pseudo_inverse(0.0).map_err(|e| invalid(e.to_string()))?
            };
            let rows = |m: &DMatrix<f64>| m.row_iter().map(|r| r.iter().copied().collect()).collect();
            let cols = |m: &DMatrix<f64>| m.column_iter().map(|c| c.iter().copied().collect()).collect();
            let (mut lo, mut hi) = (origin.as_slice().to_vec(), origin.as_slice().to_vec());
            for &v in &s.vertices {
                for (r, x) in vertices[v].iter().enumerate() {
                    lo[r] = lo[r].min(*x);
                    hi[r] = hi[r].max(*x);
                }
            }
            charts.push(Chart { simplex: i, origin: origin.as_slice().to_vec(), edges: cols(&edges), pinv: rows(&pinv), lo, hi });
        }

        let mut complex = SimplicialComplex { vertices, simplices: list, index, charts, neighbors, next_hop: Vec::new() };
        complex.next_hop = complex.route_table()?;
        Ok(complex)
    }

    /// Breadth-first distances from every simplex; next hop is the smallest
    /// neighbor one step closer, which yields lexicographically least routes.
    fn route_table(&self) -> Result<Vec<Vec<usize>>, SpaceError> {
        let n = self.simplices.len();
        let mut dist = vec![vec![usize::MAX; n]; n];
        for (t, row) in dist.iter_mut().enumerate() {
            row[t] = 0;
            let mut queue = VecDeque::from([t]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.neighbors[u] {
                    if row[v] == usize::MAX {
                        row[v] = row[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            if row.contains(&usize::MAX) {
                return Err(SpaceError::Invalid("complex is not connected".into()));
            }
        }
        Ok((0..n)
            .map(|s| {
                (0..n)
                    .map(|t| {
                        if s == t {
                            s
                        } else {
                            *self.neighbors[s].iter().find(|&&v| dist[t][v] + 1 == dist[t][s]).unwrap()
                        }
                    })
                    .collect()
            })
            .collect())
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices[0].len()
    }

    /// Dimension of the complex.
    pub fn dim(&self) -> usize {
        self.simplices.iter().map(Simplex::dim).max().unwrap_or(0)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn simplex(&self, id: usize) -> &Simplex {
        &self.simplices[id]
    }

    pub fn id_of(&self, vertices: &[usize]) -> Option<usize> {
        let mut v = vertices.to_vec();
        v.sort_unstable();
        self.index.get(&v).copied()
    }

    pub fn maximal_simplices(&self) -> Vec<Vec<usize>> {
        self.charts.iter().map(|c| self.simplices[c.simplex].vertices.clone()).collect()
    }

    /// Simplices having `id` as a face, including `id` itself.
    pub fn star(&self, id: usize) -> Vec<usize> {
        let d = self.simplices[id].dim();
        let mut s: Vec<usize> = self.neighbors[id].iter().copied().filter(|&j| self.simplices[j].dim() > d).collect();
        s.insert(0, id);
        s
    }

    /// Simplex route from `s` to `t` inclusive of both ends.
    pub fn route(&self, s: usize, t: usize) -> Vec<usize> {
        let mut r = vec![s];
        let mut u = s;
        while u != t {
            u = self.next_hop[u][t];
            r.push(u);
        }
        r
    }

    /// Barycentric coordinates of `x` on the closed maximal simplex of a chart.
    fn barycentric(&self, chart: &Chart, x: &[f64]) -> Option<Vec<f64>> {
        let slack = BARY_TOL * (1.0 + x.iter().map(|v| v.abs()).fold(0.0, f64::max));
        if x.iter().zip(chart.lo.iter().zip(&chart.hi)).any(|(v, (l, h))| *v < l - slack || *v > h + slack) {
            return None;
        }
        let rel: Point = x.iter().zip(&chart.origin).map(|(a, o)| a - o).collect();
        let lam: Vec<f64> = chart.pinv.iter().map(|row| row.iter().zip(&rel).map(|(p, r)| p * r).sum()).collect();
        let mut back = vec![0.0; rel.len()];
        for (edge, l) in chart.edges.iter().zip(&lam) {
            for (b, e) in back.iter_mut().zip(edge) {
                *b += e * l;
            }
        }
        if euclidean(&back, &rel) > BARY_TOL * (1.0 + norm(&rel)) {
            return None;
        }
        let mut out = Vec::with_capacity(lam.len() + 1);
        out.push(1.0 - lam.iter().sum::<f64>());
        out.extend(lam);
        out.iter().all(|&l| l >= -BARY_TOL).then_some(out)
    }

    /// The simplex whose interior contains `x`.
    pub fn carrier(&self, x: &[f64]) -> Result<usize, SpaceError> {
        if x.len() != self.ambient_dim() {
            return Err(SpaceError::DimensionMismatch { expected: self.ambient_dim(), got: x.len() });
        }
        for chart in &self.charts {
            if let Some(lam) = self.barycentric(chart, x) {
                let verts = &self.simplices[chart.simplex].vertices;
                let face: Vec<usize> = verts.iter().zip(&lam).filter(|(_, &l)| l > BARY_TOL).map(|(&v, _)| v).collect();
                if let Some(&id) = self.index.get(&face) {
                    return Ok(id);
                }
            }
        }
        Err(SpaceError::OutsideSpace(x.to_vec()))
    }

    /// Random interior point of simplex `id` (flat Dirichlet weights).
    pub fn interior_point<R: Rng + ?Sized>(&self, id: usize, rng: &mut R) -> Point {
        let s = &self.simplices[id];
        let w: Vec<f64> = s.vertices.iter().map(|_| -(1.0 - rng.gen::<f64>()).ln() + 1e-3).collect();
        let total: f64 = w.iter().sum();
        let mut p = vec![0.0; self.ambient_dim()];
        for (&v, wi) in s.vertices.iter().zip(&w) {
            for (c, x) in p.iter_mut().zip(&self.vertices[v]) {
                *c += wi / total * x;
            }
        }
        p
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        let chart = &self.charts[rng.gen_range(0..self.charts.len())];
        self.interior_point(chart.simplex, rng)
    }

    /// Moves `x` a distance in `[radius/2, radius]` toward an interior point
    /// of `target`, which must contain the carrier of `x` as a face. The
    /// result lies in the interior of `target`.
    pub fn nudge_into<R: Rng + ?Sized>(&self, x: &[f64], target: usize, radius: f64, rng: &mut R) -> Point {
        let q = self.interior_point(target, rng);
        let gap = euclidean(x, &q);
        if gap == 0.0 {
            return q;
        }
        let s = (radius * rng.gen_range(0.5..=1.0) / gap).min(1.0);
        x.iter().zip(&q).map(|(a, b)| a + s * (b - a)).collect()
    }

    /// Perturbation of `x` into a random simplex of the star of its carrier.
    pub fn perturb_in_star<R: Rng + ?Sized>(&self, x: &[f64], radius: f64, rng: &mut R) -> Option<Point> {
        let c = self.carrier(x).ok()?;
        let star = self.star(c);
        let target = star[rng.gen_range(0..star.len())];
        if self.simplices[target].dim() == 0 {
            return Some(x.to_vec());
        }
        Some(self.nudge_into(x, target, radius, rng))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn triangle_circle() -> SimplicialComplex {
        SimplicialComplex::new(
            vec![vec![1.0, 0.0], vec![-0.5, 0.8], vec![-0.5, -0.8]],
            vec![vec![0, 1], vec![1, 2], vec![2, 0]],
        )
        .unwrap()
    }

    #[test]
    fn carrier_examples() {
        let c = triangle_circle();
        assert_eq!(c.simplices().len(), 6);
        assert_eq!(c.dim(), 1);
        let v = c.carrier(&[1.0, 0.0]).unwrap();
        assert_eq!(c.simplex(v).vertices, vec![0]);
        let e = c.carrier(&[0.25, 0.4]).unwrap();
        assert_eq!(c.simplex(e).vertices, vec![0, 1]);
        assert!(c.carrier(&[0.0, 0.0]).is_err());

        let tri = SimplicialComplex::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]], vec![vec![0, 1, 2]]).unwrap();
        let t = tri.carrier(&[1.0 / 3.0, 1.0 / 3.0]).unwrap();
        assert_eq!(tri.simplex(t).dim(), 2);
        assert_eq!(tri.simplex(tri.carrier(&[0.5, 0.5]).unwrap()).vertices, vec![1, 2]);
    }

    #[test]
    fn routes_are_shortest_and_deterministic() {
        let c = triangle_circle();
        let a = c.id_of(&[0]).unwrap();
        let b = c.id_of(&[1]).unwrap();
        assert_eq!(c.route(a, b), vec![a, c.id_of(&[0, 1]).unwrap(), b]);
        assert_eq!(c.route(a, a), vec![a]);
        let e01 = c.id_of(&[0, 1]).unwrap();
        let e12 = c.id_of(&[1, 2]).unwrap();
        assert_eq!(c.route(e01, e12), vec![e01, b, e12]);
    }

    #[test]
    fn rejects_bad_complexes() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![2.0, 0.0], vec![5.0, 5.0]];
        assert!(SimplicialComplex::new(pts.clone(), vec![vec![0, 1, 2]]).is_err());
        assert!(SimplicialComplex::new(pts.clone(), vec![vec![0, 1]]).is_err());
        assert!(SimplicialComplex::new(pts, vec![vec![0, 9]]).is_err());
    }

    #[test]
    fn star_perturbations_land_in_star() {
        let c = triangle_circle();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v = c.id_of(&[0]).unwrap();
        let star = c.star(v);
        assert_eq!(star.len(), 3);
        for _ in 0..50 {
            let y = c.perturb_in_star(&[1.0, 0.0], 1e-3, &mut rng).unwrap();
            assert!(star.contains(&c.carrier(&y).unwrap()));
            assert!(euclidean(&y, &[1.0, 0.0]) <= 1e-3 + 1e-15);
        }
    }
}
