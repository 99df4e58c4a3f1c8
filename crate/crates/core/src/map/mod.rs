//! Graph maps: vertices to vertices, edges to edge paths.

mod folding;
mod language;
mod legality;

pub use folding::{homotopy_equivalence, HomotopyReport};
pub use language::{infinitely_legal_language, is_legal_path, minimal_covers, used_language};
pub use legality::{is_expanding, is_train_track, Orbit, TrainTrackVerdict, TurnTable};

use thiserror::Error;

use crate::graph::{is_reduced, reverse, Edge, Graph, GraphError, Path, Vertex};
use crate::matrix::IntMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("image of edge {0} is not a path in the codomain")]
    BadImage(String),
    #[error("image of edge {0} does not join the images of its endpoints")]
    EndpointMismatch(String),
    #[error("vertex image table has the wrong size")]
    VertexTable,
    #[error("maps are not composable: codomain of the first is not the domain of the second")]
    NotComposable,
    #[error("map is not a self-map")]
    NotSelfMap,
    #[error("edge {0} is contracted to a point")]
    Contracted(String),
    #[error("image of edge {0} is not reduced")]
    Unreduced(String),
    #[error("map is not a train track map")]
    NotTrainTrack,
    #[error("map is not expanding")]
    NotExpanding,
    #[error("graph has vertices of valence 2")]
    HasValenceTwo,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphMap {
    domain: Graph,
    codomain: Graph,
    vertex_image: Vec<Vertex>,
    /// Image of the positive orientation of each domain edge.
    edge_image: Vec<Path>,
}

impl GraphMap {
    pub fn new(
        domain: Graph,
        codomain: Graph,
        vertex_image: Vec<Vertex>,
        edge_image: Vec<Path>,
    ) -> Result<GraphMap, MapError> {
        if vertex_image.len() != domain.vertex_count() || edge_image.len() != domain.edge_count() {
            return Err(MapError::VertexTable);
        }
        if vertex_image
            .iter()
            .any(|v| v.index() >= codomain.vertex_count())
        {
            return Err(MapError::VertexTable);
        }
        for (i, img) in edge_image.iter().enumerate() {
            let name = domain.edge_name(i).to_string();
            codomain
                .check_path(img)
                .map_err(|_| MapError::BadImage(name.clone()))?;
            let (a, b) = domain.ends(i);
            let (fa, fb) = (vertex_image[a.index()], vertex_image[b.index()]);
            let ok = match (img.first(), img.last()) {
                (Some(&s), Some(&t)) => codomain.initial(s) == fa && codomain.terminal(t) == fb,
                _ => fa == fb,
            };
            if !ok {
                return Err(MapError::EndpointMismatch(name));
            }
        }
        Ok(GraphMap {
            domain,
            codomain,
            vertex_image,
            edge_image,
        })
    }

    /// Builds a self-map of `g` from edge images, inferring vertex images
    /// from the endpoints of non-trivial images.
    pub fn self_map(g: &Graph, images: Vec<Path>) -> Result<GraphMap, MapError> {
        GraphMap::infer(g.clone(), g.clone(), images)
    }

    /// Like [`GraphMap::new`] with vertex images read off the edge images.
    pub fn infer(domain: Graph, codomain: Graph, images: Vec<Path>) -> Result<GraphMap, MapError> {
        let mut vimg: Vec<Option<Vertex>> = vec![None; domain.vertex_count()];
        if images.len() != domain.edge_count() {
            return Err(MapError::VertexTable);
        }
        for (i, img) in images.iter().enumerate() {
            codomain
                .check_path(img)
                .map_err(|_| MapError::BadImage(domain.edge_name(i).to_string()))?;
            if let (Some(&s), Some(&t)) = (img.first(), img.last()) {
                let (a, b) = domain.ends(i);
                for (v, w) in [(a, codomain.initial(s)), (b, codomain.terminal(t))] {
                    match vimg[v.index()] {
                        Some(x) if x != w => {
                            return Err(MapError::EndpointMismatch(domain.edge_name(i).to_string()))
                        }
                        _ => vimg[v.index()] = Some(w),
                    }
                }
            }
        }
        let vimg: Option<Vec<Vertex>> = vimg.into_iter().collect();
        let vimg = vimg.ok_or(MapError::VertexTable)?;
        GraphMap::new(domain, codomain, vimg, images)
    }

    pub fn identity(g: &Graph) -> GraphMap {
        GraphMap {
            domain: g.clone(),
            codomain: g.clone(),
            vertex_image: g.vertices().collect(),
            edge_image: g.positive_edges().map(|e| vec![e]).collect(),
        }
    }

    pub fn domain(&self) -> &Graph {
        &self.domain
    }

    pub fn codomain(&self) -> &Graph {
        &self.codomain
    }

    pub fn is_self_map(&self) -> bool {
        self.domain == self.codomain
    }

    pub fn vertex_image(&self, v: Vertex) -> Vertex {
        self.vertex_image[v.index()]
    }

    /// Image of an oriented edge; inverse edges map to reversed paths.
    pub fn image(&self, e: Edge) -> Path {
        let p = &self.edge_image[e.index()];
        if e.is_positive() {
            p.clone()
        } else {
            reverse(p)
        }
    }

    pub fn image_len(&self, e: Edge) -> usize {
        self.edge_image[e.index()].len()
    }

    /// Concatenation of edge images, without reduction.
    pub fn image_of_path(&self, p: &[Edge]) -> Path {
        p.iter().flat_map(|&e| self.image(e)).collect()
    }

    /// True when every edge image is a non-trivial reduced path.
    pub fn is_reduced(&self) -> bool {
        self.edge_image
            .iter()
            .all(|p| !p.is_empty() && is_reduced(p))
    }

    /// Rejects contracted edges and unreduced edge images.
    pub fn require_reduced(&self) -> Result<(), MapError> {
        for (i, p) in self.edge_image.iter().enumerate() {
            if p.is_empty() {
                return Err(MapError::Contracted(self.domain.edge_name(i).to_string()));
            }
            if !is_reduced(p) {
                return Err(MapError::Unreduced(self.domain.edge_name(i).to_string()));
            }
        }
        Ok(())
    }

    /// `g ∘ self`, without reduction of the resulting edge images.
    pub fn then(&self, g: &GraphMap) -> Result<GraphMap, MapError> {
        g.compose(self)
    }

    /// `self ∘ f`, without reduction of the resulting edge images.
    pub fn compose(&self, f: &GraphMap) -> Result<GraphMap, MapError> {
        if f.codomain != self.domain {
            return Err(MapError::NotComposable);
        }
        Ok(GraphMap {
            domain: f.domain.clone(),
            codomain: self.codomain.clone(),
            vertex_image: f
                .vertex_image
                .iter()
                .map(|&v| self.vertex_image(v))
                .collect(),
            edge_image: f.edge_image.iter().map(|p| self.image_of_path(p)).collect(),
        })
    }

    /// The `n`-th iterate of a self-map.
    pub fn power(&self, n: u32) -> Result<GraphMap, MapError> {
        if !self.is_self_map() {
            return Err(MapError::NotSelfMap);
        }
        let mut acc = GraphMap::identity(&self.domain);
        for _ in 0..n {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    /// Entry `(e', e)` counts occurrences of `e'` or its inverse in `f(e)`,
    /// rows indexed by codomain edges, columns by domain edges.
    pub fn transition_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.codomain.edge_count(), self.domain.edge_count());
        for (j, p) in self.edge_image.iter().enumerate() {
            for e in p {
                m.add_to(e.index(), j, 1);
            }
        }
        m
    }

    /// The direction map: first edge of the image of each oriented edge.
    pub fn direction(&self, e: Edge) -> Option<Edge> {
        self.image(e).first().copied()
    }

    pub fn edge_images(&self) -> &[Path] {
        &self.edge_image
    }

    /// Requirements shared by every tower construction.
    pub fn require_train_track(&self) -> Result<(), MapError> {
        if !self.is_self_map() {
            return Err(MapError::NotSelfMap);
        }
        self.require_reduced()?;
        if !matches!(is_train_track(self)?, TrainTrackVerdict::TrainTrack) {
            return Err(MapError::NotTrainTrack);
        }
        if !is_expanding(self)? {
            return Err(MapError::NotExpanding);
        }
        Ok(())
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn rose_map(names: &[&str], images: &[&str]) -> GraphMap {
        let g = Graph::rose(names);
        let imgs = images.iter().map(|s| g.parse_path(s).unwrap()).collect();
        GraphMap::self_map(&g, imgs).unwrap()
    }

    pub fn fibonacci() -> GraphMap {
        rose_map(&["a", "b"], &["a b", "a"])
    }

    pub fn thue_morse() -> GraphMap {
        rose_map(&["a", "b"], &["a b", "b a"])
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn fibonacci_matrices() {
        let f = fibonacci();
        let m = f.transition_matrix();
        assert_eq!(m, IntMatrix::from_rows(&[vec![1, 1], vec![1, 0]]));
        let f2 = f.power(2).unwrap();
        let g = f.domain();
        assert_eq!(g.path_string(&f2.image(Edge(0))), "a b a");
        assert_eq!(g.path_string(&f2.image(Edge(2))), "a b");
        assert_eq!(f2.transition_matrix(), m.mul(&m));
    }

    #[test]
    fn inverse_occurrences_count_positively() {
        let f = rose_map(&["a", "b"], &["a ~b", "b"]);
        let m = f.transition_matrix();
        assert_eq!((m.get(0, 0), m.get(1, 0)), (1, 1));
    }

    #[test]
    fn inverse_images_reverse() {
        let f = fibonacci();
        assert_eq!(f.image(Edge(1)), reverse(&f.image(Edge(0))));
    }

    #[test]
    fn endpoint_mismatch_is_rejected() {
        let g = Graph::from_ends(2, &[(0, 1), (0, 1), (0, 1)]).unwrap();
        let e0 = Edge::positive(0);
        let r = GraphMap::new(
            g.clone(),
            g.clone(),
            vec![Vertex(0), Vertex(1)],
            vec![vec![e0, e0.inv()], vec![e0], vec![e0]],
        );
        assert!(matches!(r, Err(MapError::EndpointMismatch(_))));
    }

    #[test]
    fn composition_is_unreduced() {
        let g = Graph::rose(&["a", "b"]);
        let f = GraphMap::self_map(
            &g,
            vec![g.parse_path("a b").unwrap(), g.parse_path("b").unwrap()],
        )
        .unwrap();
        let h = GraphMap::self_map(
            &g,
            vec![g.parse_path("a ~b").unwrap(), g.parse_path("b").unwrap()],
        )
        .unwrap();
        let c = h.compose(&f).unwrap();
        assert_eq!(g.path_string(&c.image(Edge(0))), "a ~b b");
        assert!(!c.is_reduced());
    }
}
